//! Truncated p-typical Witt vectors with exact ring operations.
//!
//! Arithmetic goes through ghost coordinates in the p-torsion-free lift
//! ring: lift the coefficients, apply the ghost maps, operate
//! componentwise, and un-ghost with exact divisions by p^n. Working modulo
//! p^{N+m} in the lift keeps every division certified: a coefficient known
//! mod p^k has its p-th power known mod p^{k+1}, so the nested divisions
//! never eat into the reduced result.
//!
//! Every vector carries its certified length. Operations between different
//! lengths truncate to the shorter one, mirroring the projections
//! W_m → W_{m'}.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::ring::{mul_in_basis, Ring, RingElement, DEFAULT_ENUM_CAP};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WittVector {
    ring: Ring,
    coeffs: Vec<RingElement>,
}

impl std::fmt::Debug for WittVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "W(")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Result of a valuation query at finite precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Exact(usize),
    /// All coefficients vanish; the valuation is at least the length.
    AtLeast(usize),
}

impl Valuation {
    pub fn certain(&self) -> Option<usize> {
        match self {
            Valuation::Exact(v) => Some(*v),
            Valuation::AtLeast(_) => None,
        }
    }
}

/// v_preimage output: the shifted vector with its top coefficient zeroed,
/// plus the number of exact leading coefficients.
#[derive(Debug, Clone)]
pub struct VPreimage {
    pub vec: WittVector,
    pub certified: usize,
}

impl WittVector {
    pub fn new(ring: &Ring, coeffs: Vec<RingElement>) -> Result<WittVector> {
        if coeffs.is_empty() {
            return Err(Error::PrecisionExhausted(
                "Witt vector needs at least one coefficient".into(),
            ));
        }
        for c in &coeffs {
            if c.ring() != ring {
                return Err(Error::RingMismatch);
            }
        }
        Ok(WittVector {
            ring: ring.clone(),
            coeffs,
        })
    }

    pub fn zero(ring: &Ring, len: usize) -> WittVector {
        WittVector {
            ring: ring.clone(),
            coeffs: vec![ring.zero(); len],
        }
    }

    pub fn one(ring: &Ring, len: usize) -> WittVector {
        teichmuller(&ring.one(), len)
    }

    pub fn from_ints(ring: &Ring, vals: &[i64]) -> Result<WittVector> {
        let coeffs = vals.iter().map(|&v| ring.from_int(v)).collect();
        WittVector::new(ring, coeffs)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[RingElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &RingElement {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn truncate(&self, len: usize) -> WittVector {
        let len = len.min(self.len()).max(1);
        WittVector {
            ring: self.ring.clone(),
            coeffs: self.coeffs[..len].to_vec(),
        }
    }

    /// Agreement on the common certified prefix.
    pub fn agrees_with(&self, other: &WittVector) -> bool {
        let n = self.len().min(other.len());
        self.ring == other.ring && self.coeffs[..n] == other.coeffs[..n]
    }

    pub fn sample<R: Rng>(ring: &Ring, len: usize, rng: &mut R) -> WittVector {
        WittVector {
            ring: ring.clone(),
            coeffs: (0..len).map(|_| ring.sample(rng)).collect(),
        }
    }

    pub fn sample_unit<R: Rng>(ring: &Ring, len: usize, rng: &mut R) -> WittVector {
        let mut w = Self::sample(ring, len, rng);
        w.coeffs[0] = ring.sample_unit(rng);
        w
    }

    /// Unit iff w_0 is a unit in R (p lies in the Jacobson radical).
    pub fn is_unit(&self) -> bool {
        self.coeffs[0].is_unit()
    }

    /// Exact inverse of a unit by Newton iteration; 1 − u·z starts in the
    /// radical and squares to zero at finite truncation.
    pub fn inv(&self) -> Result<WittVector> {
        if !self.is_unit() {
            return Err(Error::NonUnit(format!("{self:?}")));
        }
        let mut z = teichmuller(&self.coeffs[0].inv()?, self.len());
        let two = int_witt(&self.ring, 2, self.len())?;
        for _ in 0..64 {
            let uz = witt_mul(self, &z)?;
            if uz.is_one() {
                return Ok(z);
            }
            z = witt_mul(&z, &witt_sub(&two, &uz)?)?;
        }
        Err(Error::Internal("Witt unit inversion did not converge".into()))
    }
}

/// Largest modulus p^{N+len} used for lift-ring arithmetic.
fn working_modulus(ring: &Ring, len: usize) -> Result<u64> {
    let p = ring.prime() as u128;
    let mut m = ring.characteristic() as u128;
    for _ in 0..len {
        m *= p;
        if m > (1 << 29) {
            return Err(Error::SizeCap(format!(
                "working modulus p^{{N+{len}}} exceeds 2^29 for {ring}"
            )));
        }
    }
    Ok(m as u64)
}

fn basis_pow(ring: &Ring, w_mod: u64, x: &[u64], mut e: u64) -> Vec<u64> {
    let mut base = x.to_vec();
    let mut acc = vec![0u64; ring.basis_len()];
    acc[0] = 1 % w_mod;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_in_basis(ring, w_mod, &acc, &base);
        }
        base = mul_in_basis(ring, w_mod, &base, &base);
        e >>= 1;
    }
    acc
}

fn basis_add(w_mod: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(&x, &y)| (x + y) % w_mod).collect()
}

fn basis_scale(w_mod: u64, a: &[u64], k: u64) -> Vec<u64> {
    a.iter().map(|&x| x % w_mod * (k % w_mod) % w_mod).collect()
}

/// Ghost coordinates w_i = Σ_j p^j x_j^{p^{i−j}} of lifted coefficients,
/// computed mod `w_mod`.
fn ghost_mod(ring: &Ring, w_mod: u64, lifted: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let p = ring.prime();
    let n = lifted.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut w = vec![0u64; ring.basis_len()];
        let mut pj = 1u64;
        for (j, x) in lifted.iter().enumerate().take(i + 1) {
            let e = p.pow((i - j) as u32);
            let pw = basis_pow(ring, w_mod, x, e);
            w = basis_add(w_mod, &w, &basis_scale(w_mod, &pw, pj));
            pj = pj.wrapping_mul(p) % w_mod;
        }
        out.push(w);
    }
    out
}

/// Solve the ghost equations for Witt coordinates: at level n the division
/// by p^n is exact because the target is a ghost vector over the
/// torsion-free lift. Inexact division signals an internal bug.
fn unghost_mod(ring: &Ring, w_mod: u64, ghost: &[Vec<u64>]) -> Result<Vec<Vec<u64>>> {
    let p = ring.prime();
    let n = ghost.len();
    let mut coords: Vec<Vec<u64>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = ghost[i].clone();
        let mut pj = 1u64;
        for (j, z) in coords.iter().enumerate() {
            let e = p.pow((i - j) as u32);
            let pw = basis_pow(ring, w_mod, z, e);
            let term = basis_scale(w_mod, &pw, pj);
            acc = acc
                .iter()
                .zip(&term)
                .map(|(&a, &t)| (a + w_mod - t) % w_mod)
                .collect();
            pj = pj.wrapping_mul(p) % w_mod;
        }
        // acc = p^i · x_i mod w_mod
        let pi = p.pow(i as u32);
        let mut xi = Vec::with_capacity(acc.len());
        for &a in &acc {
            if a % pi != 0 {
                return Err(Error::Internal(format!(
                    "inexact division by p^{i} in ghost solve"
                )));
            }
            xi.push(a / pi);
        }
        coords.push(xi);
    }
    Ok(coords)
}

fn lift_for_ghost(x: &WittVector) -> Vec<Vec<u64>> {
    x.coeffs
        .iter()
        .map(|c| c.lift().iter().map(|&v| v as u64).collect())
        .collect()
}

fn reduce_coords(ring: &Ring, coords: &[Vec<u64>]) -> Result<Vec<RingElement>> {
    coords
        .iter()
        .map(|c| {
            let raw: Vec<i64> = c.iter().map(|&v| v as i64).collect();
            ring.from_coeffs(&raw)
        })
        .collect()
}

fn binary_ghost_op(
    x: &WittVector,
    y: &WittVector,
    op: impl Fn(&Ring, u64, &[u64], &[u64]) -> Vec<u64>,
) -> Result<WittVector> {
    if x.ring != y.ring {
        return Err(Error::RingMismatch);
    }
    let len = x.len().min(y.len());
    let ring = &x.ring;
    let w_mod = working_modulus(ring, len)?;
    let gx = ghost_mod(ring, w_mod, &lift_for_ghost(&x.truncate(len)));
    let gy = ghost_mod(ring, w_mod, &lift_for_ghost(&y.truncate(len)));
    let gz: Vec<Vec<u64>> = gx
        .iter()
        .zip(&gy)
        .map(|(a, b)| op(ring, w_mod, a, b))
        .collect();
    let coords = unghost_mod(ring, w_mod, &gz)?;
    Ok(WittVector {
        ring: ring.clone(),
        coeffs: reduce_coords(ring, &coords)?,
    })
}

pub fn witt_add(x: &WittVector, y: &WittVector) -> Result<WittVector> {
    binary_ghost_op(x, y, |_, w_mod, a, b| basis_add(w_mod, a, b))
}

pub fn witt_sub(x: &WittVector, y: &WittVector) -> Result<WittVector> {
    binary_ghost_op(x, y, |_, w_mod, a, b| {
        a.iter()
            .zip(b)
            .map(|(&p, &q)| (p + w_mod - q % w_mod) % w_mod)
            .collect()
    })
}

pub fn witt_mul(x: &WittVector, y: &WittVector) -> Result<WittVector> {
    binary_ghost_op(x, y, |ring, w_mod, a, b| mul_in_basis(ring, w_mod, a, b))
}

pub fn witt_neg(x: &WittVector) -> Result<WittVector> {
    witt_sub(&WittVector::zero(&x.ring, x.len()), x)
}

/// The Witt representative of an integer: un-ghost of (n, n, n, …).
pub fn int_witt(ring: &Ring, n: i64, len: usize) -> Result<WittVector> {
    let w_mod = working_modulus(ring, len)?;
    let mut g = vec![0u64; ring.basis_len()];
    g[0] = n.rem_euclid(w_mod as i64) as u64;
    let ghost: Vec<Vec<u64>> = (0..len).map(|_| g.clone()).collect();
    let coords = unghost_mod(ring, w_mod, &ghost)?;
    Ok(WittVector {
        ring: ring.clone(),
        coeffs: reduce_coords(ring, &coords)?,
    })
}

pub fn witt_scale_int(x: &WittVector, n: i64) -> Result<WittVector> {
    witt_mul(x, &int_witt(&x.ring, n, x.len())?)
}

/// Witt vector Frobenius: w_i(f(x)) = w_{i+1}(x). On perfect char-p rings
/// it is the componentwise p-power and keeps the length; otherwise it is
/// computed through ghost coordinates and certifies one coefficient less.
pub fn frobenius(x: &WittVector) -> Result<WittVector> {
    let ring = &x.ring;
    if ring.is_perfect_char_p() {
        let coeffs = x.coeffs.iter().map(|c| c.pow(ring.prime())).collect();
        return Ok(WittVector {
            ring: ring.clone(),
            coeffs,
        });
    }
    if x.len() < 2 {
        return Err(Error::PrecisionExhausted(format!(
            "Frobenius needs length ≥ 2 over {ring}"
        )));
    }
    let w_mod = working_modulus(ring, x.len())?;
    let g = ghost_mod(ring, w_mod, &lift_for_ghost(x));
    let coords = unghost_mod(ring, w_mod, &g[1..])?;
    Ok(WittVector {
        ring: ring.clone(),
        coeffs: reduce_coords(ring, &coords)?,
    })
}

/// Verschiebung: shift, dropping the top input coefficient.
pub fn verschiebung(x: &WittVector) -> WittVector {
    let mut coeffs = Vec::with_capacity(x.len());
    coeffs.push(x.ring.zero());
    coeffs.extend_from_slice(&x.coeffs[..x.len() - 1]);
    WittVector {
        ring: x.ring.clone(),
        coeffs,
    }
}

/// v(x) with the honest output length min(len+1, cap): the image of a
/// length-ℓ vector is fully determined in W_{ℓ+1}.
pub fn v_extend(x: &WittVector, cap: usize) -> WittVector {
    let out_len = (x.len() + 1).min(cap.max(1));
    let mut coeffs = Vec::with_capacity(out_len);
    coeffs.push(x.ring.zero());
    coeffs.extend_from_slice(&x.coeffs[..out_len - 1]);
    WittVector {
        ring: x.ring.clone(),
        coeffs,
    }
}

pub fn teichmuller(a: &RingElement, len: usize) -> WittVector {
    let ring = a.ring().clone();
    let mut coeffs = vec![ring.zero(); len];
    coeffs[0] = a.clone();
    WittVector { ring, coeffs }
}

pub fn in_ir(x: &WittVector) -> bool {
    x.coeffs[0].is_zero()
}

pub fn v_preimage(x: &WittVector) -> Result<VPreimage> {
    if !in_ir(x) {
        return Err(Error::NotInIR);
    }
    let mut coeffs: Vec<RingElement> = x.coeffs[1..].to_vec();
    coeffs.push(x.ring.zero());
    Ok(VPreimage {
        vec: WittVector {
            ring: x.ring.clone(),
            coeffs,
        },
        certified: x.len() - 1,
    })
}

/// p-adic valuation over W_m(k), k a perfect field.
pub fn witt_val(x: &WittVector) -> Result<Valuation> {
    if !x.ring.is_perfect_char_p() {
        return Err(Error::UnsupportedRing(format!(
            "valuation needs a perfect char-p field, got {}",
            x.ring
        )));
    }
    for (i, c) in x.coeffs.iter().enumerate() {
        if !c.is_zero() {
            return Ok(Valuation::Exact(i));
        }
    }
    Ok(Valuation::AtLeast(x.len()))
}

/// Componentwise p-th root over a perfect field: x ↦ x^{p^{a−1}}.
pub fn pth_root(x: &RingElement) -> Result<RingElement> {
    let ring = x.ring();
    if !ring.is_perfect_char_p() {
        return Err(Error::UnsupportedRing(format!("{ring} is not perfect")));
    }
    let a = ring.ext_degree() as u32;
    Ok(x.pow(ring.prime().pow(a - 1)))
}

/// Exact division by p over a perfect field: p·y = (0, y_0^p, y_1^p, …).
pub fn div_p(x: &WittVector) -> Result<WittVector> {
    if !x.ring.is_perfect_char_p() {
        return Err(Error::UnsupportedRing(format!("{} is not perfect", x.ring)));
    }
    if !x.coeffs[0].is_zero() {
        return Err(Error::Invalid("not divisible by p".into()));
    }
    if x.len() < 2 {
        return Err(Error::PrecisionExhausted(
            "division by p leaves no certified coefficients".into(),
        ));
    }
    let coeffs = x.coeffs[1..]
        .iter()
        .map(pth_root)
        .collect::<Result<Vec<_>>>()?;
    Ok(WittVector {
        ring: x.ring.clone(),
        coeffs,
    })
}

/// Exact division by p^k, tracking the length loss.
pub fn div_p_pow(x: &WittVector, k: usize) -> Result<WittVector> {
    let mut acc = x.clone();
    for _ in 0..k {
        acc = div_p(&acc)?;
    }
    Ok(acc)
}

/// Membership in p·W_len(R). Over char-p rings this is a shift of ring
/// p-th powers; otherwise a coordinatewise backtracking solve of p·y = x.
pub fn is_p_multiple(x: &WittVector) -> Result<bool> {
    let ring = &x.ring;
    if ring.char_exp() == 1 {
        // p·y = (0, y_0^p, y_1^p, …)
        if !x.coeffs[0].is_zero() {
            return Ok(false);
        }
        let powers: std::collections::HashSet<Vec<u64>> = ring
            .enumerate(DEFAULT_ENUM_CAP)?
            .iter()
            .map(|e| e.pow(ring.prime()).coeffs().to_vec())
            .collect();
        return Ok(x.coeffs[1..]
            .iter()
            .all(|c| powers.contains(c.coeffs())));
    }
    let elems = ring.enumerate(DEFAULT_ENUM_CAP)?;
    let p = ring.prime() as i64;
    fn solve(
        x: &WittVector,
        elems: &[RingElement],
        p: i64,
        prefix: &mut Vec<RingElement>,
    ) -> Result<bool> {
        let n = prefix.len();
        if n == x.len() {
            return Ok(true);
        }
        // (p·(prefix, Y, …))_n = p·Y + G_n(prefix); probe with Y = 0.
        let ring = x.ring();
        let mut probe = prefix.clone();
        probe.resize(x.len(), ring.zero());
        let base = witt_scale_int(&WittVector::new(ring, probe)?, p)?;
        let d = x.coeff(n).sub(base.coeff(n))?;
        for y in elems {
            if y.scale_int(p) == d {
                prefix.push(y.clone());
                if solve(x, elems, p, prefix)? {
                    return Ok(true);
                }
                prefix.pop();
            }
        }
        Ok(false)
    }
    solve(x, &elems, p, &mut Vec::new())
}

// ---------------------------------------------------------------------------
// Exact BigInt ghost oracle. Independent of the modular fast path above;
// used by tests, the CLI `witt ghost` subcommand and the self-test suite.
// ---------------------------------------------------------------------------

fn big_mul_in_basis(ring: &Ring, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let deg = ring.ext_degree();
    let parts = if ring.has_eps() { 2 } else { 1 };
    let mut out = vec![BigInt::zero(); ring.basis_len()];
    for j1 in 0..parts {
        for j2 in 0..parts - j1 {
            let jo = j1 + j2;
            let mut scratch = vec![BigInt::zero(); 2 * deg - 1];
            for i1 in 0..deg {
                if a[j1 * deg + i1].is_zero() {
                    continue;
                }
                for i2 in 0..deg {
                    if b[j2 * deg + i2].is_zero() {
                        continue;
                    }
                    scratch[i1 + i2] += &a[j1 * deg + i1] * &b[j2 * deg + i2];
                }
            }
            if deg > 1 {
                let modulus = ring.modulus().unwrap();
                for d in (deg..scratch.len()).rev() {
                    if scratch[d].is_zero() {
                        continue;
                    }
                    let lead = std::mem::take(&mut scratch[d]);
                    for i in 0..deg {
                        let sub = &lead * BigInt::from(modulus[i]);
                        scratch[d - deg + i] -= sub;
                    }
                }
            }
            for i in 0..deg {
                out[jo * deg + i] += &scratch[i];
            }
        }
    }
    out
}

fn big_pow(ring: &Ring, x: &[BigInt], mut e: u64) -> Vec<BigInt> {
    let mut base = x.to_vec();
    let mut acc = vec![BigInt::zero(); ring.basis_len()];
    acc[0] = BigInt::from(1);
    while e > 0 {
        if e & 1 == 1 {
            acc = big_mul_in_basis(ring, &acc, &base);
        }
        base = big_mul_in_basis(ring, &base, &base);
        e >>= 1;
    }
    acc
}

pub type BigLift = Vec<Vec<BigInt>>;

pub fn big_lift(x: &WittVector) -> BigLift {
    x.coeffs
        .iter()
        .map(|c| c.lift().iter().map(|&v| BigInt::from(v)).collect())
        .collect()
}

/// Exact ghost coordinates over the lift ring.
pub fn ghost_big(ring: &Ring, lifted: &BigLift) -> Vec<Vec<BigInt>> {
    let p = ring.prime();
    let mut out = Vec::with_capacity(lifted.len());
    for i in 0..lifted.len() {
        let mut w = vec![BigInt::zero(); ring.basis_len()];
        let mut pj = BigInt::from(1);
        for (j, x) in lifted.iter().enumerate().take(i + 1) {
            let pw = big_pow(ring, x, p.pow((i - j) as u32));
            for (acc, v) in w.iter_mut().zip(&pw) {
                *acc += v * &pj;
            }
            pj *= p;
        }
        out.push(w);
    }
    out
}

/// Exact un-ghost over the lift ring; divisibility by p^n is checked.
pub fn unghost_big(ring: &Ring, ghost: &[Vec<BigInt>]) -> Result<BigLift> {
    let p = ring.prime();
    let mut coords: BigLift = Vec::with_capacity(ghost.len());
    for i in 0..ghost.len() {
        let mut acc = ghost[i].clone();
        let mut pj = BigInt::from(1);
        for (j, z) in coords.iter().enumerate() {
            let pw = big_pow(ring, z, p.pow((i - j) as u32));
            for (a, v) in acc.iter_mut().zip(&pw) {
                *a -= v * &pj;
            }
            pj *= p;
        }
        let pi = BigInt::from(p).pow(i as u32);
        let mut xi = Vec::with_capacity(acc.len());
        for a in acc {
            if (&a % &pi) != BigInt::zero() {
                return Err(Error::Internal(
                    "ghost vector is not in the image of the ghost map".into(),
                ));
            }
            xi.push(a / &pi);
        }
        coords.push(xi);
    }
    Ok(coords)
}

fn big_reduce(ring: &Ring, coords: &BigLift) -> Result<WittVector> {
    let charac = BigInt::from(ring.characteristic());
    let coeffs = coords
        .iter()
        .map(|c| {
            let raw: Vec<i64> = c
                .iter()
                .map(|v| {
                    let mut r = v % &charac;
                    if r.is_negative() {
                        r += &charac;
                    }
                    i64::try_from(r).expect("reduced coefficient fits i64")
                })
                .collect();
            ring.from_coeffs(&raw)
        })
        .collect::<Result<Vec<_>>>()?;
    WittVector::new(ring, coeffs)
}

#[derive(Clone, Copy)]
enum GhostOp {
    Add,
    Mul,
}

/// Oracle addition through exact BigInt ghost coordinates.
pub fn oracle_add(x: &WittVector, y: &WittVector) -> Result<WittVector> {
    oracle_op(x, y, GhostOp::Add)
}

/// Oracle multiplication through exact BigInt ghost coordinates.
pub fn oracle_mul(x: &WittVector, y: &WittVector) -> Result<WittVector> {
    oracle_op(x, y, GhostOp::Mul)
}

fn oracle_op(x: &WittVector, y: &WittVector, op: GhostOp) -> Result<WittVector> {
    if x.ring != y.ring {
        return Err(Error::RingMismatch);
    }
    let len = x.len().min(y.len());
    let ring = &x.ring;
    let gx = ghost_big(ring, &big_lift(&x.truncate(len)));
    let gy = ghost_big(ring, &big_lift(&y.truncate(len)));
    let mut gz = Vec::with_capacity(len);
    for (a, b) in gx.iter().zip(&gy) {
        gz.push(match op {
            GhostOp::Add => a.iter().zip(b).map(|(p, q)| p + q).collect(),
            GhostOp::Mul => big_mul_in_basis(ring, a, b),
        });
    }
    let coords = unghost_big(ring, &gz)?;
    big_reduce(ring, &coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::standard_rings;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z4() -> Ring {
        Ring::zmod(2, 2).unwrap()
    }

    fn f2() -> Ring {
        Ring::zmod(2, 1).unwrap()
    }

    #[test]
    fn ghost_examples() {
        let z16 = Ring::zmod(2, 4).unwrap();
        let x = WittVector::from_ints(&z16, &[3, 1]).unwrap();
        let g = ghost_big(&z16, &big_lift(&x));
        assert_eq!(g[0][0], BigInt::from(3));
        assert_eq!(g[1][0], BigInt::from(11)); // 3² + 2·1

        // Teichmüller ghost: (a, 0, …) ↦ (a, a^p, a^{p²}, …)
        let t = WittVector::from_ints(&z16, &[3, 0, 0]).unwrap();
        let g = ghost_big(&z16, &big_lift(&t));
        assert_eq!(g[1][0], BigInt::from(9));
        assert_eq!(g[2][0], BigInt::from(81));

        let one = WittVector::from_ints(&z16, &[1, 0]).unwrap();
        let g = ghost_big(&z16, &big_lift(&one));
        assert_eq!((g[0][0].clone(), g[1][0].clone()), (1.into(), 1.into()));
    }

    #[test]
    fn add_example_over_z4() {
        let z4 = z4();
        let x = WittVector::from_ints(&z4, &[1, 0]).unwrap();
        let sum = witt_add(&x, &x).unwrap();
        assert_eq!(sum, WittVector::from_ints(&z4, &[2, 3]).unwrap());
        // Independent oracle route agrees.
        assert_eq!(oracle_add(&x, &x).unwrap(), sum);
    }

    #[test]
    fn teichmuller_multiplication_over_z8() {
        let z8 = Ring::zmod(2, 3).unwrap();
        let a = WittVector::from_ints(&z8, &[2, 0]).unwrap();
        let b = WittVector::from_ints(&z8, &[3, 0]).unwrap();
        let prod = witt_mul(&a, &b).unwrap();
        assert_eq!(prod, WittVector::from_ints(&z8, &[6, 0]).unwrap());
        assert_eq!(oracle_mul(&a, &b).unwrap(), prod);
    }

    #[test]
    fn additive_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for ring in standard_rings() {
            let x = WittVector::sample(&ring, 3, &mut rng);
            let z = WittVector::zero(&ring, 3);
            assert_eq!(witt_add(&x, &z).unwrap(), x);
        }
    }

    #[test]
    fn frobenius_on_perfect_field() {
        let f2 = f2();
        let x = WittVector::from_ints(&f2, &[1, 1]).unwrap();
        assert_eq!(frobenius(&x).unwrap(), x);
        // Cross-check the perfect-field shortcut against the ghost path on
        // the shared prefix, through a non-perfect presentation of F_4[ε].
        let f4 = Ring::galois_default(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let x = WittVector::sample(&f4, 3, &mut rng);
            let fast = frobenius(&x).unwrap();
            // General path: solve from ghost coordinates directly.
            let w_mod = working_modulus(&f4, 3).unwrap();
            let g = ghost_mod(&f4, w_mod, &lift_for_ghost(&x));
            let coords = unghost_mod(&f4, w_mod, &g[1..]).unwrap();
            let general = WittVector::new(&f4, reduce_coords(&f4, &coords).unwrap()).unwrap();
            assert!(fast.agrees_with(&general));
        }
    }

    #[test]
    fn frobenius_verschiebung_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for ring in standard_rings() {
            for _ in 0..100 {
                let x = WittVector::sample(&ring, 3, &mut rng);
                // f(v(x)) = p·x
                let fv = frobenius(&v_extend(&x, 4)).unwrap();
                let px = witt_scale_int(&x, ring.prime() as i64).unwrap();
                assert!(fv.agrees_with(&px), "ring {ring}");
                // x·v(y) = v(f(x)·y)
                let y = WittVector::sample(&ring, 3, &mut rng);
                let lhs = witt_mul(&x, &v_extend(&y, 3)).unwrap();
                let fx = frobenius(&x).unwrap();
                let rhs = v_extend(&witt_mul(&fx, &y).unwrap(), 3);
                assert!(lhs.agrees_with(&rhs), "ring {ring}");
            }
        }
    }

    #[test]
    fn frobenius_is_p_power_mod_p() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for ring in standard_rings() {
            if ring.size() > 64 {
                continue;
            }
            for _ in 0..20 {
                let x = WittVector::sample(&ring, 3, &mut rng);
                let fx = frobenius(&x).unwrap();
                let mut xp = x.clone();
                for _ in 1..ring.prime() {
                    xp = witt_mul(&xp, &x).unwrap();
                }
                let diff = witt_sub(&fx, &xp.truncate(fx.len())).unwrap();
                assert!(is_p_multiple(&diff).unwrap(), "ring {ring}");
            }
        }
    }

    #[test]
    fn verschiebung_examples() {
        let f2 = f2();
        let x = WittVector::from_ints(&f2, &[1, 1]).unwrap();
        assert_eq!(
            verschiebung(&x),
            WittVector::from_ints(&f2, &[0, 1]).unwrap()
        );
        let z4 = z4();
        assert!(WittVector::one(&z4, 3).is_one());
        let x = WittVector::from_ints(&z4, &[1, 2, 3]).unwrap();
        let pre = v_preimage(&v_extend(&x, 3)).unwrap();
        assert_eq!(pre.certified, 2);
        assert_eq!(pre.vec.coeffs()[..2], x.coeffs()[..2]);
    }

    #[test]
    fn v_preimage_requires_ir() {
        let z4 = z4();
        let x = WittVector::from_ints(&z4, &[1, 0]).unwrap();
        assert_eq!(v_preimage(&x).unwrap_err(), Error::NotInIR);
    }

    #[test]
    fn valuation_examples() {
        let f2 = f2();
        let p = int_witt(&f2, 2, 3).unwrap();
        assert_eq!(witt_val(&p).unwrap(), Valuation::Exact(1));
        assert_eq!(
            witt_val(&WittVector::one(&f2, 3)).unwrap(),
            Valuation::Exact(0)
        );
        assert_eq!(
            witt_val(&WittVector::zero(&f2, 3)).unwrap(),
            Valuation::AtLeast(3)
        );
        assert!(witt_val(&WittVector::zero(&z4(), 2)).is_err());
    }

    #[test]
    fn ring_axioms_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for ring in standard_rings() {
            for _ in 0..40 {
                let x = WittVector::sample(&ring, 3, &mut rng);
                let y = WittVector::sample(&ring, 3, &mut rng);
                let z = WittVector::sample(&ring, 3, &mut rng);
                let ab = witt_add(&x, &y).unwrap();
                assert_eq!(witt_add(&ab, &z).unwrap(), {
                    let bc = witt_add(&y, &z).unwrap();
                    witt_add(&x, &bc).unwrap()
                });
                assert_eq!(witt_mul(&x, &y).unwrap(), witt_mul(&y, &x).unwrap());
                let lhs = witt_mul(&x, &witt_add(&y, &z).unwrap()).unwrap();
                let rhs = witt_add(&witt_mul(&x, &y).unwrap(), &witt_mul(&x, &z).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs, "distributivity over {ring}");
            }
        }
    }

    #[test]
    fn frobenius_is_ring_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for ring in standard_rings() {
            for _ in 0..50 {
                let x = WittVector::sample(&ring, 3, &mut rng);
                let y = WittVector::sample(&ring, 3, &mut rng);
                let f_sum = frobenius(&witt_add(&x, &y).unwrap()).unwrap();
                let sum_f =
                    witt_add(&frobenius(&x).unwrap(), &frobenius(&y).unwrap()).unwrap();
                assert!(f_sum.agrees_with(&sum_f));
                let f_prod = frobenius(&witt_mul(&x, &y).unwrap()).unwrap();
                let prod_f =
                    witt_mul(&frobenius(&x).unwrap(), &frobenius(&y).unwrap()).unwrap();
                assert!(f_prod.agrees_with(&prod_f));
            }
        }
    }

    #[test]
    fn teichmuller_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for ring in standard_rings() {
            for _ in 0..50 {
                let a = ring.sample(&mut rng);
                let b = ring.sample(&mut rng);
                let lhs = witt_mul(&teichmuller(&a, 3), &teichmuller(&b, 3)).unwrap();
                let rhs = teichmuller(&a.mul(&b).unwrap(), 3);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn w0_is_multiplicative_without_lift() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for ring in standard_rings() {
            for _ in 0..50 {
                let x = WittVector::sample(&ring, 3, &mut rng);
                let y = WittVector::sample(&ring, 3, &mut rng);
                let prod = witt_mul(&x, &y).unwrap();
                assert_eq!(
                    prod.coeff(0).clone(),
                    x.coeff(0).mul(y.coeff(0)).unwrap()
                );
            }
        }
    }

    #[test]
    fn mixed_lengths_truncate() {
        let z4 = z4();
        let x = WittVector::from_ints(&z4, &[1, 2, 3]).unwrap();
        let y = WittVector::from_ints(&z4, &[3, 1]).unwrap();
        let sum = witt_add(&x, &y).unwrap();
        assert_eq!(sum.len(), 2);
        assert_eq!(sum, witt_add(&x.truncate(2), &y).unwrap());
    }

    #[test]
    fn unit_inversion() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for ring in standard_rings() {
            for _ in 0..20 {
                let u = WittVector::sample_unit(&ring, 3, &mut rng);
                let inv = u.inv().unwrap();
                assert!(witt_mul(&u, &inv).unwrap().is_one());
            }
        }
        let z4 = z4();
        let nonunit = WittVector::from_ints(&z4, &[2, 1]).unwrap();
        assert!(matches!(nonunit.inv(), Err(Error::NonUnit(_))));
    }

    #[test]
    fn frobenius_precision_exhaustion() {
        let z4 = z4();
        let x = WittVector::from_ints(&z4, &[1, 1]).unwrap();
        let fx = frobenius(&x).unwrap();
        assert_eq!(fx.len(), 1);
        assert!(matches!(
            frobenius(&fx),
            Err(Error::PrecisionExhausted(_))
        ));
    }

    #[test]
    fn div_p_roundtrip() {
        let f4 = Ring::galois_default(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..20 {
            let x = WittVector::sample(&f4, 4, &mut rng);
            let px = witt_scale_int(&x, 2).unwrap();
            let back = div_p(&px).unwrap();
            assert!(back.agrees_with(&x));
        }
    }

    #[test]
    fn p_multiple_detection() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for ring in standard_rings() {
            if ring.size() > 64 {
                continue;
            }
            for _ in 0..10 {
                let y = WittVector::sample(&ring, 3, &mut rng);
                let py = witt_scale_int(&y, ring.prime() as i64).unwrap();
                assert!(is_p_multiple(&py).unwrap(), "ring {ring}");
            }
            // A Teichmüller unit is never a multiple of p.
            let one = WittVector::one(&ring, 3);
            assert!(!is_p_multiple(&one).unwrap());
        }
    }
}
