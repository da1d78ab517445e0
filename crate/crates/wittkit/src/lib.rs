//! Exact computational algebra for truncated p-typical Witt vectors, the
//! graded Witt frame, higher displays, Zink displays, isodisplays, display
//! groups, and desk-scale Rapoport-Zink point computations over finite
//! coefficient rings.
//!
//! Everything is computed exactly: coefficient rings carry a p-torsion-free
//! integer lift, Witt arithmetic goes through ghost coordinates in that
//! lift, and every value that can lose p-adic precision carries an explicit
//! certified length. Operations whose certified window is empty return
//! errors instead of guessing.

pub mod error;
pub mod exec;
pub mod frame;
pub mod graded;
pub mod display;
pub mod dgroup;
pub mod el;
pub mod iso;
pub mod matrix;
pub mod ring;
pub mod rz;
pub mod selftest;
pub mod witt;
pub mod witt_table;
pub mod zink;

pub use error::{Error, Result};
pub use ring::{Ring, RingElement};
pub use witt::WittVector;
