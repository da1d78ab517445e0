//! Finite p-nilpotent coefficient rings presented with a p-torsion-free
//! integer lift.
//!
//! Every supported ring is a quotient of Λ = Z[x, ε]/(f(x), ε²) by p^N,
//! where f is a monic integer polynomial that is irreducible mod p. The
//! basis x^i·ε^j (i < deg f, j < 2) is free over Z, so Λ is p-torsion-free
//! and ghost-coordinate Witt arithmetic in Λ is exact. Canonical
//! representatives keep every basis coefficient in [0, p^N).

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_ENUM_CAP: u128 = 1 << 16;

/// Presentation kind, mirroring the config surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingKind {
    ZmodPN,
    GaloisField,
    PolyQuotient,
}

#[derive(Debug)]
pub struct RingData {
    p: u64,
    /// p^N is the additive characteristic of the coefficient lattice.
    char_exp: u32,
    /// p^char_exp, cached.
    charac: u64,
    /// Monic modulus, low-to-high integer coefficients, length a+1.
    /// `None` means no extension variable (a = 1).
    modulus: Option<Vec<i64>>,
    /// Whether the ring carries a square-zero dual number ε.
    eps: bool,
    label: String,
}

/// Shared immutable handle to a ring. Cheap to clone, safe to send.
#[derive(Clone)]
pub struct Ring(Arc<RingData>);

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.0.label)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.label)
    }
}

impl std::hash::Hash for Ring {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.char_exp.hash(state);
        self.0.modulus.hash(state);
        self.0.eps.hash(state);
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.char_exp == other.0.char_exp
                && self.0.modulus == other.0.modulus
                && self.0.eps == other.0.eps)
    }
}
impl Eq for Ring {}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Irreducibility over F_p by trial division against every monic divisor
/// candidate of degree ≤ deg/2. Desk scale: degrees stay tiny.
fn irreducible_mod_p(modulus: &[i64], p: u64) -> bool {
    let deg = modulus.len() - 1;
    let reduce = |c: i64| -> u64 { c.rem_euclid(p as i64) as u64 };
    let poly: Vec<u64> = modulus.iter().map(|&c| reduce(c)).collect();
    if poly[deg] != 1 {
        return false;
    }
    // All monic polynomials of degree d over F_p, d = 1..deg/2.
    for d in 1..=deg / 2 {
        let count = (p as u128).pow(d as u32);
        for idx in 0..count {
            let mut div = Vec::with_capacity(d + 1);
            let mut k = idx;
            for _ in 0..d {
                div.push((k % p as u128) as u64);
                k /= p as u128;
            }
            div.push(1);
            // Remainder of poly by div over F_p.
            let mut rem = poly.clone();
            while rem.len() >= div.len() {
                let lead = rem[rem.len() - 1] % p;
                let shift = rem.len() - div.len();
                for i in 0..div.len() {
                    let sub = (lead * div[i]) % p;
                    let j = shift + i;
                    rem[j] = (rem[j] + p - sub) % p;
                }
                while rem.len() > 1 && *rem.last().unwrap() % p == 0 {
                    rem.pop();
                }
                if rem.len() < div.len() {
                    break;
                }
            }
            if rem.iter().all(|&c| c % p == 0) {
                return false;
            }
        }
    }
    true
}

impl Ring {
    fn build(
        p: u64,
        char_exp: u32,
        modulus: Option<Vec<i64>>,
        eps: bool,
        label: String,
    ) -> Result<Ring> {
        if !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        if char_exp == 0 {
            return Err(Error::Invalid("characteristic exponent must be ≥ 1".into()));
        }
        let charac = (p as u128).pow(char_exp);
        if charac > u32::MAX as u128 {
            return Err(Error::SizeCap(format!("p^N = {charac} too large")));
        }
        if let Some(ref m) = modulus {
            if m.len() < 3 {
                return Err(Error::Invalid("extension modulus must have degree ≥ 2".into()));
            }
            if *m.last().unwrap() != 1 {
                return Err(Error::Invalid("extension modulus must be monic".into()));
            }
            if !irreducible_mod_p(m, p) {
                return Err(Error::Invalid(format!(
                    "modulus {m:?} is reducible mod {p}"
                )));
            }
        }
        Ok(Ring(Arc::new(RingData {
            p,
            char_exp,
            charac: charac as u64,
            modulus,
            eps,
            label,
        })))
    }

    /// Z/p^N.
    pub fn zmod(p: u64, n: u32) -> Result<Ring> {
        Ring::build(p, n, None, false, format!("Z/{}", (p as u128).pow(n)))
    }

    /// F_{p^a} = F_p[x]/(modulus), modulus monic of degree a, low-to-high.
    pub fn galois(p: u64, modulus: Vec<i64>) -> Result<Ring> {
        let a = modulus.len() - 1;
        let label = format!("F_{}", (p as u128).pow(a as u32));
        Ring::build(p, 1, Some(modulus), false, label)
    }

    /// F_{p^a} with a standard modulus for small (p, a).
    pub fn galois_default(p: u64, a: u32) -> Result<Ring> {
        let modulus = default_modulus(p, a)
            .ok_or_else(|| Error::Invalid(format!("no default modulus for p={p}, a={a}")))?;
        Ring::galois(p, modulus)
    }

    /// Adjoin a square-zero element: R[ε]/(ε²).
    pub fn with_dual_number(&self) -> Result<Ring> {
        if self.0.eps {
            return Err(Error::Invalid("ring already has a dual number".into()));
        }
        Ring::build(
            self.0.p,
            self.0.char_exp,
            self.0.modulus.clone(),
            true,
            format!("{}[eps]", self.0.label),
        )
    }

    pub fn prime(&self) -> u64 {
        self.0.p
    }

    pub fn char_exp(&self) -> u32 {
        self.0.char_exp
    }

    /// Additive characteristic p^N of the coefficient lattice.
    pub fn characteristic(&self) -> u64 {
        self.0.charac
    }

    pub fn kind(&self) -> RingKind {
        match (&self.0.modulus, self.0.eps, self.0.char_exp) {
            (None, false, _) => RingKind::ZmodPN,
            (Some(_), false, 1) => RingKind::GaloisField,
            _ => RingKind::PolyQuotient,
        }
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    /// Degree of the extension variable (1 when absent).
    pub fn ext_degree(&self) -> usize {
        self.0.modulus.as_ref().map_or(1, |m| m.len() - 1)
    }

    pub fn has_eps(&self) -> bool {
        self.0.eps
    }

    pub fn modulus(&self) -> Option<&[i64]> {
        self.0.modulus.as_deref()
    }

    /// Number of Z/p^N basis monomials x^i ε^j.
    pub fn basis_len(&self) -> usize {
        self.ext_degree() * if self.0.eps { 2 } else { 1 }
    }

    pub fn size(&self) -> u128 {
        (self.0.charac as u128).pow(self.basis_len() as u32)
    }

    pub fn is_local(&self) -> bool {
        // Products are unsupported by construction, so Spec R is connected.
        true
    }

    /// True iff p = 0 in R and x ↦ x^p is bijective.
    pub fn is_perfect_char_p(&self) -> bool {
        self.0.char_exp == 1 && !self.0.eps
    }

    /// Nilpotency exponent of the nilradical of R/pR.
    pub fn nil_exponent(&self) -> u32 {
        if self.0.eps {
            2
        } else {
            1
        }
    }

    pub fn zero(&self) -> RingElement {
        RingElement {
            ring: self.clone(),
            coeffs: vec![0; self.basis_len()],
        }
    }

    pub fn one(&self) -> RingElement {
        let mut coeffs = vec![0; self.basis_len()];
        coeffs[0] = 1 % self.0.charac;
        RingElement {
            ring: self.clone(),
            coeffs,
        }
    }

    pub fn from_int(&self, n: i64) -> RingElement {
        let mut coeffs = vec![0; self.basis_len()];
        coeffs[0] = n.rem_euclid(self.0.charac as i64) as u64;
        RingElement {
            ring: self.clone(),
            coeffs,
        }
    }

    /// The residue class of x (errors when there is no extension variable).
    pub fn gen_x(&self) -> Result<RingElement> {
        if self.0.modulus.is_none() {
            return Err(Error::Invalid("ring has no extension generator".into()));
        }
        let mut coeffs = vec![0; self.basis_len()];
        coeffs[1] = 1;
        Ok(RingElement {
            ring: self.clone(),
            coeffs,
        })
    }

    pub fn gen_eps(&self) -> Result<RingElement> {
        if !self.0.eps {
            return Err(Error::Invalid("ring has no dual number".into()));
        }
        let mut coeffs = vec![0; self.basis_len()];
        coeffs[self.ext_degree()] = 1;
        Ok(RingElement {
            ring: self.clone(),
            coeffs,
        })
    }

    /// Element from raw basis coefficients (arbitrary integers, reduced).
    pub fn from_coeffs(&self, raw: &[i64]) -> Result<RingElement> {
        if raw.len() > self.basis_len() {
            return Err(Error::Invalid(format!(
                "{} coefficients exceed basis size {}",
                raw.len(),
                self.basis_len()
            )));
        }
        let mut coeffs = vec![0; self.basis_len()];
        for (i, &c) in raw.iter().enumerate() {
            coeffs[i] = c.rem_euclid(self.0.charac as i64) as u64;
        }
        Ok(RingElement {
            ring: self.clone(),
            coeffs,
        })
    }

    /// Deterministic canonical enumeration: little-endian counting over the
    /// basis coefficients.
    pub fn enumerate(&self, cap: u128) -> Result<Vec<RingElement>> {
        let size = self.size();
        if size > cap {
            return Err(Error::SizeCap(format!(
                "|R| = {size} exceeds enumeration cap {cap}"
            )));
        }
        let mut out = Vec::with_capacity(size as usize);
        let basis = self.basis_len();
        let charac = self.0.charac as u128;
        for idx in 0..size {
            let mut coeffs = vec![0u64; basis];
            let mut k = idx;
            for c in coeffs.iter_mut() {
                *c = (k % charac) as u64;
                k /= charac;
            }
            out.push(RingElement {
                ring: self.clone(),
                coeffs,
            });
        }
        Ok(out)
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> RingElement {
        let coeffs = (0..self.basis_len())
            .map(|_| rng.gen_range(0..self.0.charac))
            .collect();
        RingElement {
            ring: self.clone(),
            coeffs,
        }
    }

    pub fn sample_unit<R: Rng>(&self, rng: &mut R) -> RingElement {
        loop {
            let x = self.sample(rng);
            if x.is_unit() {
                return x;
            }
        }
    }

    /// R/pR together with the reduction map applied coefficientwise.
    pub fn residue_mod_p(&self) -> Result<Ring> {
        Ring::build(
            self.0.p,
            1,
            self.0.modulus.clone(),
            self.0.eps,
            format!("({})/p", self.0.label),
        )
    }

    /// The residue field R/m (drops ε, kills p).
    pub fn residue_field(&self) -> Result<Ring> {
        Ring::build(
            self.0.p,
            1,
            self.0.modulus.clone(),
            false,
            format!("k({})", self.0.label),
        )
    }

    /// Multiplicative generator of the residue field (enumeration search).
    pub fn field_generator(&self) -> Result<RingElement> {
        let k = self.residue_field()?;
        let q = k.size() as u64;
        let elems = k.enumerate(DEFAULT_ENUM_CAP)?;
        for e in elems {
            if e.is_zero() {
                continue;
            }
            let mut ord = 1u64;
            let mut acc = e.clone();
            while !acc.is_one() {
                acc = acc.mul(&e)?;
                ord += 1;
            }
            if ord == q - 1 {
                return Ok(e);
            }
        }
        Err(Error::Internal("no multiplicative generator found".into()))
    }
}

fn default_modulus(p: u64, a: u32) -> Option<Vec<i64>> {
    match (p, a) {
        (2, 2) => Some(vec![1, 1, 1]),
        (2, 3) => Some(vec![1, 1, 0, 1]),
        (2, 4) => Some(vec![1, 1, 0, 0, 1]),
        (3, 2) => Some(vec![1, 0, 1]),
        (3, 3) => Some(vec![1, 2, 0, 1]),
        (5, 2) => Some(vec![2, 1, 1]),
        _ => None,
    }
}

/// Canonical element of a supported ring: reduced basis coefficients.
/// Equality is representative equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    ring: Ring,
    coeffs: Vec<u64>,
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ring.basis_len() == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            write!(f, "{:?}", self.coeffs)
        }
    }
}

impl RingElement {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 % self.ring.characteristic()
            && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn check_ring(&self, other: &RingElement) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        self.check_ring(other)?;
        let charac = self.ring.characteristic();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| (a + b) % charac)
            .collect();
        Ok(RingElement {
            ring: self.ring.clone(),
            coeffs,
        })
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement> {
        self.check_ring(other)?;
        let charac = self.ring.characteristic();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| (a + charac - b) % charac)
            .collect();
        Ok(RingElement {
            ring: self.ring.clone(),
            coeffs,
        })
    }

    pub fn neg(&self) -> RingElement {
        let charac = self.ring.characteristic();
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| if a == 0 { 0 } else { charac - a })
            .collect();
        RingElement {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    pub fn mul(&self, other: &RingElement) -> Result<RingElement> {
        self.check_ring(other)?;
        let coeffs = mul_in_basis(
            &self.ring,
            self.ring.characteristic(),
            &self.coeffs,
            &other.coeffs,
        );
        Ok(RingElement {
            ring: self.ring.clone(),
            coeffs,
        })
    }

    pub fn scale_int(&self, n: i64) -> RingElement {
        let charac = self.ring.characteristic();
        let k = n.rem_euclid(charac as i64) as u64;
        let coeffs = self.coeffs.iter().map(|&a| (a * k) % charac).collect();
        RingElement {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    pub fn pow(&self, mut e: u64) -> RingElement {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            base = base.mul(&base).expect("same ring");
            e >>= 1;
        }
        acc
    }

    /// Residue in the residue field R/m.
    pub fn residue(&self) -> Result<RingElement> {
        let k = self.ring.residue_field()?;
        let a = self.ring.ext_degree();
        let raw: Vec<i64> = self.coeffs[..a].iter().map(|&c| c as i64).collect();
        k.from_coeffs(&raw)
    }

    /// Unit iff the residue in R/m is nonzero (R is local).
    pub fn is_unit(&self) -> bool {
        let p = self.ring.prime();
        self.coeffs[..self.ring.ext_degree()]
            .iter()
            .any(|&c| c % p != 0)
    }

    /// Exact inverse. Residue-field inverse by Fermat, then Newton lifting
    /// through the nilpotent part.
    pub fn inv(&self) -> Result<RingElement> {
        if !self.is_unit() {
            return Err(Error::NonUnit(format!("{self}")));
        }
        let k = self.ring.residue_field()?;
        let q = k.size() as u64;
        let r = self.residue()?;
        let rinv = r.pow(q - 2);
        // Lift residue-field inverse coefficients back to R.
        let mut raw = vec![0i64; self.ring.basis_len()];
        for (i, &c) in rinv.coeffs().iter().enumerate() {
            raw[i] = c as i64;
        }
        let mut z = self.ring.from_coeffs(&raw)?;
        for _ in 0..64 {
            let uz = self.mul(&z)?;
            if uz.is_one() {
                return Ok(z);
            }
            // z ← z(2 − uz)
            let two = self.ring.from_int(2);
            z = z.mul(&two.sub(&uz)?)?;
        }
        Err(Error::Internal("unit inversion did not converge".into()))
    }

    /// Canonical integer lift into Λ (plain integer coefficients).
    pub fn lift(&self) -> Vec<i64> {
        self.coeffs.iter().map(|&c| c as i64).collect()
    }

    pub fn map_coeffs(&self, target: &Ring, f: impl Fn(u64) -> i64) -> Result<RingElement> {
        if target.basis_len() < self.ring.basis_len() {
            return Err(Error::Invalid("target basis too small".into()));
        }
        let raw: Vec<i64> = self.coeffs.iter().map(|&c| f(c)).collect();
        target.from_coeffs(&raw)
    }
}

/// Multiplication of basis-coefficient vectors modulo `charac`, reducing by
/// the ring's modulus polynomial and ε² = 0. Shared by R itself and by the
/// lift-ring arithmetic (which passes a larger p-power modulus).
pub(crate) fn mul_in_basis(ring: &Ring, charac: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let deg = ring.ext_degree();
    let eps = ring.has_eps();
    let parts = if eps { 2 } else { 1 };
    let mut out = vec![0u64; ring.basis_len()];
    // Polynomial product of the (j1, j2) parts with j1 + j2 < 2.
    let mut scratch = vec![0u64; 2 * deg - 1];
    for j1 in 0..parts {
        for j2 in 0..parts - j1 {
            let jo = j1 + j2;
            for s in scratch.iter_mut() {
                *s = 0;
            }
            for i1 in 0..deg {
                let c1 = a[j1 * deg + i1];
                if c1 == 0 {
                    continue;
                }
                for i2 in 0..deg {
                    let c2 = b[j2 * deg + i2];
                    if c2 == 0 {
                        continue;
                    }
                    let idx = i1 + i2;
                    scratch[idx] = (scratch[idx] + c1 % charac * (c2 % charac)) % charac;
                }
            }
            reduce_poly(ring, charac, &mut scratch);
            for i in 0..deg {
                out[jo * deg + i] = (out[jo * deg + i] + scratch[i]) % charac;
            }
        }
    }
    out
}

fn reduce_poly(ring: &Ring, charac: u64, poly: &mut [u64]) {
    let deg = ring.ext_degree();
    if deg == 1 {
        return;
    }
    let modulus = ring.modulus().expect("extension ring");
    for d in (deg..poly.len()).rev() {
        let lead = poly[d] % charac;
        if lead == 0 {
            continue;
        }
        poly[d] = 0;
        // x^deg ≡ −(m_0 + m_1 x + ⋯ + m_{deg−1} x^{deg−1})
        for i in 0..deg {
            let mc = modulus[i].rem_euclid(charac as i64) as u64;
            if mc == 0 {
                continue;
            }
            let sub = lead * mc % charac;
            poly[d - deg + i] = (poly[d - deg + i] + charac - sub) % charac;
        }
    }
}

/// An embedding R → R' determined by the image of the extension generator
/// (ε maps to ε). Constant rings embed coefficientwise.
#[derive(Clone, Debug)]
pub struct RingMap {
    src: Ring,
    dst: Ring,
    gen_image: Option<RingElement>,
}

impl RingMap {
    pub fn new(src: Ring, dst: Ring, gen_image: Option<RingElement>) -> Result<RingMap> {
        if src.prime() != dst.prime() {
            return Err(Error::Invalid("embeddings must preserve p".into()));
        }
        if dst.char_exp() > src.char_exp() {
            return Err(Error::Invalid(
                "target characteristic exponent exceeds source".into(),
            ));
        }
        if src.has_eps() && !dst.has_eps() {
            return Err(Error::Invalid("target lacks the dual number".into()));
        }
        if src.ext_degree() > 1 {
            let img = gen_image
                .as_ref()
                .ok_or_else(|| Error::Invalid("generator image required".into()))?;
            if *img.ring() != dst {
                return Err(Error::RingMismatch);
            }
            // f(img) must vanish in R'.
            let modulus = src.modulus().unwrap();
            let mut acc = dst.zero();
            for (i, &c) in modulus.iter().enumerate() {
                let term = img.pow(i as u64).scale_int(c);
                acc = acc.add(&term)?;
            }
            if !acc.is_zero() {
                return Err(Error::Invalid(
                    "generator image does not satisfy the source modulus".into(),
                ));
            }
        }
        Ok(RingMap {
            src,
            dst,
            gen_image,
        })
    }

    pub fn identity(ring: &Ring) -> RingMap {
        let gen_image = if ring.ext_degree() > 1 {
            Some(ring.gen_x().expect("extension ring"))
        } else {
            None
        };
        RingMap {
            src: ring.clone(),
            dst: ring.clone(),
            gen_image,
        }
    }

    pub fn src(&self) -> &Ring {
        &self.src
    }

    pub fn dst(&self) -> &Ring {
        &self.dst
    }

    pub fn apply(&self, x: &RingElement) -> Result<RingElement> {
        if *x.ring() != self.src {
            return Err(Error::RingMismatch);
        }
        let a = self.src.ext_degree();
        let parts = if self.src.has_eps() { 2 } else { 1 };
        let mut acc = self.dst.zero();
        for j in 0..parts {
            let mut part = self.dst.zero();
            for i in (0..a).rev() {
                let c = x.coeffs()[j * a + i] as i64;
                if a > 1 {
                    part = part.mul(self.gen_image.as_ref().unwrap())?;
                }
                part = part.add(&self.dst.from_int(c))?;
            }
            if j == 1 {
                part = part.mul(&self.dst.gen_eps()?)?;
            }
            acc = acc.add(&part)?;
        }
        Ok(acc)
    }
}

/// Textual ring spec: either a shorthand name (`Z4`, `F2`, `F4eps`) or an
/// inline TOML table `{ p = 2, kind = "Fq", a = 2, modulus = [1,1,1] }`.
pub fn parse_ring_spec(spec: &str) -> Result<Ring> {
    if let Some(ring) = parse_shorthand(spec) {
        return ring;
    }
    let body = spec.trim();
    let doc = if body.starts_with('{') {
        format!("ring = {body}")
    } else {
        body.to_string()
    };
    let table: toml::Value = doc
        .parse()
        .map_err(|e| Error::Invalid(format!("ring spec parse error: {e}")))?;
    let ring = table
        .get("ring")
        .ok_or_else(|| Error::Invalid("missing `ring` table".into()))?;
    ring_from_toml(ring)
}

#[derive(Debug, Deserialize, Serialize)]
struct TomlRing {
    p: u64,
    kind: String,
    #[serde(default)]
    n: Option<u32>,
    #[serde(default)]
    a: Option<u32>,
    #[serde(default)]
    modulus: Option<Vec<i64>>,
    #[serde(default)]
    eps: Option<bool>,
}

pub(crate) fn ring_from_toml(value: &toml::Value) -> Result<Ring> {
    let spec: TomlRing = value
        .clone()
        .try_into()
        .map_err(|e| Error::Invalid(format!("ring table: {e}")))?;
    let base = match spec.kind.as_str() {
        "ZmodPN" | "ZpN" => Ring::zmod(spec.p, spec.n.unwrap_or(1))?,
        "Fq" | "GaloisField" => match spec.modulus {
            Some(m) => Ring::galois(spec.p, m)?,
            None => Ring::galois_default(spec.p, spec.a.unwrap_or(2))?,
        },
        "PolyQuotient" => {
            let n = spec.n.unwrap_or(1);
            match spec.modulus {
                Some(m) if m.len() >= 3 => Ring::build(
                    spec.p,
                    n,
                    Some(m),
                    false,
                    format!("Z/{}[x]", (spec.p as u128).pow(n)),
                )?,
                _ => Ring::zmod(spec.p, n)?,
            }
        }
        other => return Err(Error::Invalid(format!("unknown ring kind {other:?}"))),
    };
    if spec.eps.unwrap_or(false) {
        base.with_dual_number()
    } else {
        Ok(base)
    }
}

fn parse_shorthand(name: &str) -> Option<Result<Ring>> {
    let (stem, eps) = match name.strip_suffix("eps") {
        Some(s) => (s, true),
        None => (name, false),
    };
    let base = match stem {
        "Z2" | "F2" => Ring::galois_like(2, 1),
        "Z4" => Ring::zmod(2, 2),
        "Z8" => Ring::zmod(2, 3),
        "Z16" => Ring::zmod(2, 4),
        "F3" | "Z3" => Ring::galois_like(3, 1),
        "Z9" => Ring::zmod(3, 2),
        "Z27" => Ring::zmod(3, 3),
        "F5" | "Z5" => Ring::galois_like(5, 1),
        "Z25" => Ring::zmod(5, 2),
        "F4" => Ring::galois_default(2, 2),
        "F8" => Ring::galois_default(2, 3),
        "F16" => Ring::galois_default(2, 4),
        "F9" => Ring::galois_default(3, 2),
        "F27" => Ring::galois_default(3, 3),
        "F25" => Ring::galois_default(5, 2),
        _ => return None,
    };
    Some(if eps {
        base.and_then(|r| r.with_dual_number())
    } else {
        base
    })
}

impl Ring {
    fn galois_like(p: u64, n: u32) -> Result<Ring> {
        // Prime fields are Z/p; same presentation either way.
        Ring::zmod(p, n)
    }
}

/// The rings supported out of the box, used by self-tests and property
/// suites: Z/p^N, F_q, F_q[ε], Z/p^N[ε] for p ∈ {2, 3}.
pub fn standard_rings() -> Vec<Ring> {
    vec![
        Ring::zmod(2, 1).unwrap(),
        Ring::zmod(2, 2).unwrap(),
        Ring::zmod(2, 3).unwrap(),
        Ring::zmod(3, 1).unwrap(),
        Ring::zmod(3, 3).unwrap(),
        Ring::galois_default(2, 2).unwrap(),
        Ring::galois_default(3, 2).unwrap(),
        Ring::zmod(2, 1).unwrap().with_dual_number().unwrap(),
        Ring::zmod(3, 1).unwrap().with_dual_number().unwrap(),
        Ring::galois_default(2, 2)
            .unwrap()
            .with_dual_number()
            .unwrap(),
        Ring::zmod(2, 2).unwrap().with_dual_number().unwrap(),
    ]
}
