//! The graded ring W(R)^⊕ of the Witt frame: homogeneous elements,
//! multiplication, σ and τ, and a frame-axiom checker for anything
//! presented in triple form (graded pieces, σ, and the maps t_n).
//!
//! A homogeneous element of degree d ≤ 0 is u·t^{−d} with u ∈ W(R) = S_0.
//! A homogeneous element of degree d ≥ 1 lives in S_d = I_R and stores its
//! v-preimage at full length, because σ_d(v(a)) = a must be recoverable
//! exactly and v is only injective-up-to-truncation on stored images.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::witt::{
    frobenius, int_witt, v_extend, witt_add, witt_mul, witt_scale_int, witt_sub, WittVector,
};

/// Degrees live in a small window around zero; the constructions in scope
/// never leave it.
pub const DEGREE_WINDOW: i64 = 8;

#[derive(Clone, PartialEq, Eq)]
pub struct FrameElement {
    deg: i64,
    payload: WittVector,
}

impl std::fmt::Debug for FrameElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.deg >= 1 {
            write!(f, "v[{}]({:?})", self.deg, self.payload)
        } else if self.deg == 0 {
            write!(f, "{:?}", self.payload)
        } else {
            write!(f, "{:?}·t^{}", self.payload, -self.deg)
        }
    }
}

impl FrameElement {
    pub fn new(deg: i64, payload: WittVector) -> Result<FrameElement> {
        if deg.abs() > DEGREE_WINDOW {
            return Err(Error::Invalid(format!(
                "degree {deg} outside window ±{DEGREE_WINDOW}"
            )));
        }
        Ok(FrameElement { deg, payload })
    }

    /// Degree-0 element of S_0 = W(R).
    pub fn scalar(w: WittVector) -> FrameElement {
        FrameElement {
            deg: 0,
            payload: w,
        }
    }

    /// The distinguished element t of degree −1 (τ(t) = 1).
    pub fn t(ring: &Ring, len: usize) -> FrameElement {
        FrameElement {
            deg: -1,
            payload: WittVector::one(ring, len),
        }
    }

    pub fn zero(ring: &Ring, deg: i64, len: usize) -> FrameElement {
        FrameElement {
            deg,
            payload: WittVector::zero(ring, len),
        }
    }

    pub fn one(ring: &Ring, len: usize) -> FrameElement {
        FrameElement::scalar(WittVector::one(ring, len))
    }

    pub fn deg(&self) -> i64 {
        self.deg
    }

    pub fn payload(&self) -> &WittVector {
        &self.payload
    }

    pub fn ring(&self) -> &Ring {
        self.payload.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.payload.is_zero()
    }

    /// Equality of the v-images at truncation `m` (coarser than `==` for
    /// degrees ≥ 1, where stored preimages keep one extra coefficient).
    pub fn eq_as_image(&self, other: &FrameElement, m: usize) -> bool {
        if self.deg != other.deg {
            return false;
        }
        if self.deg >= 1 {
            v_extend(&self.payload, m) == v_extend(&other.payload, m)
        } else {
            self.payload.truncate(m) == other.payload.truncate(m)
        }
    }

    /// Agreement on the certified common prefix, degree included.
    pub fn agrees_with(&self, other: &FrameElement) -> bool {
        self.deg == other.deg && self.payload.agrees_with(&other.payload)
    }
}

pub fn frame_add(a: &FrameElement, b: &FrameElement) -> Result<FrameElement> {
    if a.deg != b.deg {
        return Err(Error::Invalid(format!(
            "inhomogeneous sum of degrees {} and {}",
            a.deg, b.deg
        )));
    }
    Ok(FrameElement {
        deg: a.deg,
        payload: witt_add(&a.payload, &b.payload)?,
    })
}

pub fn frame_sub(a: &FrameElement, b: &FrameElement) -> Result<FrameElement> {
    if a.deg != b.deg {
        return Err(Error::Invalid(format!(
            "inhomogeneous difference of degrees {} and {}",
            a.deg, b.deg
        )));
    }
    Ok(FrameElement {
        deg: a.deg,
        payload: witt_sub(&a.payload, &b.payload)?,
    })
}

pub fn frame_neg(a: &FrameElement) -> Result<FrameElement> {
    Ok(FrameElement {
        deg: a.deg,
        payload: witt_sub(&WittVector::zero(a.ring(), a.payload.len()), &a.payload)?,
    })
}

/// Homogeneous multiplication. Degrees add; the payload rule depends on
/// which side of zero the factors sit:
///   (d≥1)·(d'≥1)  preimage product (the graded product (v(a), v(b)) ↦ v(ab));
///   (d≤0)·(d'≤0)  plain product in S_0[t];
///   mixed         x·v(a) = v(f(x)a), with each t-step multiplying by p
///                 while the degree stays ≥ 2 and materializing the v-image
///                 once it crosses to ≤ 0.
pub fn frame_mul(a: &FrameElement, b: &FrameElement) -> Result<FrameElement> {
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch);
    }
    let deg = a.deg + b.deg;
    if deg.abs() > DEGREE_WINDOW {
        return Err(Error::Invalid(format!(
            "product degree {deg} outside window ±{DEGREE_WINDOW}"
        )));
    }
    let ring = a.ring();
    let p = ring.prime() as i64;
    if (a.deg >= 1 && b.deg >= 1) || (a.deg <= 0 && b.deg <= 0) {
        return Ok(FrameElement {
            deg,
            payload: witt_mul(&a.payload, &b.payload)?,
        });
    }
    // Mixed: neg has degree ≤ 0, pos has degree ≥ 1.
    let (neg, pos) = if a.deg <= 0 { (a, b) } else { (b, a) };
    let e = (-neg.deg) as u32;
    if deg >= 1 {
        // e many t-steps, all within degrees ≥ 2 → multiply the preimage
        // by p^e; the W(R)-scalar part acts through f. Pure t-powers skip
        // the Frobenius so no precision is spent.
        let scaled = witt_scale_int(&pos.payload, p.pow(e))?;
        let payload = if neg.payload.is_one() {
            scaled
        } else {
            witt_mul(&frobenius(&neg.payload)?, &scaled)?
        };
        Ok(FrameElement { deg, payload })
    } else {
        // Crosses to S_{≤0}: t^{pos.deg} materializes v(p^{pos.deg−1}·b),
        // which the scalar part then multiplies plainly (x·v(y) = v(f(x)y)
        // computed on the longer-certified side).
        let k = pos.deg as u32;
        let inner = witt_scale_int(&pos.payload, p.pow(k - 1))?;
        let image = v_extend(&inner, inner.len() + 1);
        Ok(FrameElement {
            deg,
            payload: witt_mul(&neg.payload, &image)?,
        })
    }
}

/// σ: S → S_0. Degree n ≥ 1 recovers the stored preimage at full
/// precision; degree 0 applies the Witt Frobenius; degree −n multiplies by
/// p^n after the Frobenius (σ(t) = p).
pub fn frame_sigma(a: &FrameElement) -> Result<WittVector> {
    if a.deg >= 1 {
        return Ok(a.payload.clone());
    }
    let f = frobenius(&a.payload)?;
    if a.deg == 0 {
        return Ok(f);
    }
    let p = a.ring().prime() as i64;
    witt_scale_int(&f, p.pow((-a.deg) as u32))
}

/// τ: S → S_0. Identity on degrees ≤ 0 (τ(t) = 1); degree n ≥ 1 maps to
/// the materialized image v(p^{n−1}·u), every coefficient of which is
/// determined — τ loses no precision.
pub fn frame_tau(a: &FrameElement) -> Result<WittVector> {
    if a.deg <= 0 {
        return Ok(a.payload.clone());
    }
    let p = a.ring().prime() as i64;
    let inner = witt_scale_int(&a.payload, p.pow((a.deg - 1) as u32))?;
    Ok(v_extend(&inner, a.payload.len()))
}

type TMap = Arc<dyn Fn(&FrameElement) -> Result<FrameElement> + Send + Sync>;
type SigmaMap = Arc<dyn Fn(&FrameElement) -> Result<WittVector> + Send + Sync>;

/// A frame in triple form (S_{≥0}, σ, {t_n}) with sampleable graded
/// pieces. Only the Witt frame gets the full module/display machinery;
/// anything else is exercised through this checker.
#[derive(Clone)]
pub struct FrameSpec {
    pub label: String,
    pub ring: Ring,
    pub m: usize,
    t_map: TMap,
    sigma_map: SigmaMap,
}

impl FrameSpec {
    pub fn witt(ring: &Ring, m: usize) -> FrameSpec {
        let t_len = m;
        FrameSpec {
            label: format!("Witt frame over {ring}, m = {m}"),
            ring: ring.clone(),
            m,
            t_map: Arc::new(move |a| {
                let t = FrameElement::t(a.ring(), t_len);
                frame_mul(&t, a)
            }),
            sigma_map: Arc::new(frame_sigma),
        }
    }

    /// Falsification fixture: t_n acts as the identity on payloads for
    /// n ≥ 1, which breaks σ_n(t_n(a)) = p·σ_{n+1}(a).
    pub fn with_identity_t(mut self) -> FrameSpec {
        self.label = format!("{} [t_n = id]", self.label);
        let m = self.m;
        self.t_map = Arc::new(move |a| {
            if a.deg() >= 2 {
                FrameElement::new(a.deg() - 1, a.payload().clone())
            } else {
                let t = FrameElement::t(a.ring(), m);
                frame_mul(&t, a)
            }
        });
        self
    }

    pub fn t_apply(&self, a: &FrameElement) -> Result<FrameElement> {
        (self.t_map)(a)
    }

    pub fn sigma(&self, a: &FrameElement) -> Result<WittVector> {
        (self.sigma_map)(a)
    }

    fn sample<R: Rng>(&self, deg: i64, rng: &mut R) -> FrameElement {
        FrameElement {
            deg,
            payload: WittVector::sample(&self.ring, self.m, rng),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub pass: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone)]
pub struct FrameCheckReport {
    pub label: String,
    pub axioms: Vec<AxiomCheck>,
}

impl FrameCheckReport {
    pub fn all_pass(&self) -> bool {
        self.axioms.iter().all(|a| a.pass)
    }

    pub fn failed(&self) -> Vec<&AxiomCheck> {
        self.axioms.iter().filter(|a| !a.pass).collect()
    }
}

/// Verify the frame axioms on random samples. Every failure carries a
/// witness describing the offending sample.
pub fn frame_check<R: Rng>(spec: &FrameSpec, samples: usize, rng: &mut R) -> FrameCheckReport {
    let mut axioms = Vec::new();
    let ring = spec.ring.clone();
    let m = spec.m;
    let p = ring.prime() as i64;

    let mut check = |name: &'static str, result: std::result::Result<(), String>| {
        axioms.push(AxiomCheck {
            name,
            pass: result.is_ok(),
            witness: result.err(),
        });
    };

    check("tau_0 = id", {
        let mut out = Ok(());
        for _ in 0..samples {
            let x = WittVector::sample(&ring, m, rng);
            let tau = frame_tau(&FrameElement::scalar(x.clone())).unwrap();
            if tau != x {
                out = Err(format!("tau_0({x:?}) = {tau:?}"));
                break;
            }
        }
        out
    });

    check("tau_{-n} bijective", {
        let mut out = Ok(());
        'outer: for n in 1..=3i64 {
            for _ in 0..samples / 3 + 1 {
                let x = spec.sample(-n, rng);
                match frame_tau(&x) {
                    Ok(tau) if tau == *x.payload() => {}
                    other => {
                        out = Err(format!("tau_{{-{n}}} failed on {x:?}: {other:?}"));
                        break 'outer;
                    }
                }
            }
        }
        out
    });

    check("sigma_0 = p-power Frobenius mod p", {
        let mut out = Ok(());
        if ring.size() <= 512 {
            for _ in 0..samples.min(40) {
                let x = WittVector::sample(&ring, m, rng);
                let fx = match spec.sigma(&FrameElement::scalar(x.clone())) {
                    Ok(v) => v,
                    Err(e) => {
                        out = Err(format!("sigma_0 failed on {x:?}: {e}"));
                        break;
                    }
                };
                let mut xp = x.clone();
                for _ in 1..ring.prime() {
                    xp = witt_mul(&xp, &x).unwrap();
                }
                let diff = witt_sub(&fx, &xp.truncate(fx.len())).unwrap();
                match crate::witt::is_p_multiple(&diff) {
                    Ok(true) => {}
                    other => {
                        out = Err(format!("sigma_0({x:?}) − x^p not in pW: {other:?}"));
                        break;
                    }
                }
            }
        }
        out
    });

    check("sigma_{-1}(t) = p", {
        let t = FrameElement::t(&ring, m);
        match spec.sigma(&t) {
            Ok(st) => {
                let pw = int_witt(&ring, p, st.len()).unwrap();
                if st.agrees_with(&pw) {
                    Ok(())
                } else {
                    Err(format!("sigma(t) = {st:?}, expected {pw:?}"))
                }
            }
            Err(e) => Err(format!("sigma(t) errored: {e}")),
        }
    });

    check("sigma_n(t_n(a)) = p·sigma_{n+1}(a)", {
        let mut out = Ok(());
        'outer: for n in 1..=3i64 {
            for _ in 0..samples / 3 + 1 {
                let a = spec.sample(n + 1, rng);
                let lhs = spec.t_apply(&a).and_then(|ta| spec.sigma(&ta));
                let rhs = spec.sigma(&a).and_then(|s| witt_scale_int(&s, p));
                match (lhs, rhs) {
                    (Ok(l), Ok(r)) if l.agrees_with(&r) => {}
                    (l, r) => {
                        out = Err(format!("n={n}, a={a:?}: lhs {l:?} vs rhs {r:?}"));
                        break 'outer;
                    }
                }
            }
        }
        out
    });

    check("t_n is S_{>=0}-linear", {
        let mut out = Ok(());
        'outer: for n in 1..=2i64 {
            for _ in 0..samples / 2 + 1 {
                let x = FrameElement::scalar(WittVector::sample(&ring, m, rng));
                let a = spec.sample(n + 1, rng);
                let lhs = frame_mul(&x, &a).and_then(|xa| spec.t_apply(&xa));
                let rhs = spec.t_apply(&a).and_then(|ta| frame_mul(&x, &ta));
                match (lhs, rhs) {
                    (Ok(l), Ok(r)) if l.agrees_with(&r) => {}
                    (l, r) => {
                        out = Err(format!("n={n}: t(x·a) {l:?} vs x·t(a) {r:?}"));
                        break 'outer;
                    }
                }
            }
        }
        out
    });

    check("p in Rad(S_0): 1 + p·x is a unit", {
        let mut out = Ok(());
        for _ in 0..samples {
            let x = WittVector::sample(&ring, m, rng);
            let one = WittVector::one(&ring, m);
            let y = witt_add(&one, &witt_scale_int(&x, p).unwrap()).unwrap();
            if !y.is_unit() || y.inv().is_err() {
                out = Err(format!("1 + p·{x:?} = {y:?} is not a unit"));
                break;
            }
        }
        out
    });

    FrameCheckReport {
        label: spec.label.clone(),
        axioms,
    }
}
