//! Displays over the Witt frame, stored as standard data (L, Φ): a normal
//! decomposition plus the matrix of the σ₀-linear automorphism Φ on the
//! basis of L. Semilinear convention throughout: a matrix acts on
//! coordinate columns after the Frobenius has been applied to the
//! coordinates, so F(Σ e_k ⊗ s_k) = Φ·(σ(s_k))_k.

use crate::error::{Error, Result};
use crate::graded::{GradedModule, GradedMorphism, ModuleElement};
use crate::matrix::WMat;
use crate::ring::RingMap;
use crate::witt::{witt_add, witt_mul, WittVector};

#[derive(Clone, Debug)]
pub struct Display {
    module: GradedModule,
    phi: WMat,
    type_vec: Vec<i64>,
    depth: Option<i64>,
    altitude: Option<i64>,
}

impl Display {
    /// Validate a standard datum: Φ♯ must be invertible over W_m(R),
    /// which over these local rings means w_0(det Φ) is a unit in R.
    pub fn validate(module: &GradedModule, phi: WMat) -> Result<Display> {
        let n = module.rank();
        if phi.rows() != n || phi.cols() != n {
            return Err(Error::Invalid(format!(
                "Phi is {}x{}, module rank is {n}",
                phi.rows(),
                phi.cols()
            )));
        }
        if phi.ring() != module.ring() {
            return Err(Error::RingMismatch);
        }
        if n > 0 {
            let det = phi.det()?;
            if !det.is_unit() {
                return Err(Error::NotBijective(format!(
                    "det(Phi) = {det:?} is not a unit"
                )));
            }
        }
        Ok(Display {
            module: module.clone(),
            phi,
            type_vec: module.type_vector()?,
            depth: module.depth()?,
            altitude: module.altitude()?,
        })
    }

    /// The unit display (S, σ): L = {0: 1}, Φ = [1].
    pub fn unit(module_ring: &crate::ring::Ring, m: usize) -> Display {
        let module = GradedModule::unit(module_ring, m);
        let phi = WMat::identity(module_ring, 1, m);
        Display::validate(&module, phi).expect("unit display")
    }

    pub fn module(&self) -> &GradedModule {
        &self.module
    }

    pub fn phi(&self) -> &WMat {
        &self.phi
    }

    pub fn rank(&self) -> usize {
        self.module.rank()
    }

    pub fn type_vector(&self) -> &[i64] {
        &self.type_vec
    }

    pub fn depth(&self) -> Option<i64> {
        self.depth
    }

    pub fn altitude(&self) -> Option<i64> {
        self.altitude
    }

    pub fn is_effective(&self) -> bool {
        self.depth.map_or(true, |d| d >= 0)
    }

    pub fn is_n_display(&self, n: i64) -> bool {
        self.is_effective() && self.altitude == Some(n)
    }

    /// F on a homogeneous element of M_n: F(Σ e_k ⊗ s_k) = Σ σ(s_k)·Φ(e_k),
    /// returned as coordinates in M^τ ≅ L.
    pub fn f_eval(&self, x: &ModuleElement) -> Result<Vec<WittVector>> {
        if x.module != self.module {
            return Err(Error::Invalid("element not in the display's module".into()));
        }
        let sig = x
            .comps
            .iter()
            .map(crate::frame::frame_sigma)
            .collect::<Result<Vec<_>>>()?;
        self.phi.mul_vec(&sig)
    }

    /// Tensor product on standard data: Kronecker Φ ⊗ Φ' pushed through
    /// the weight-sorted tensor basis.
    pub fn tensor(&self, other: &Display) -> Result<Display> {
        let (module, perm) = self.module.tensor_with_perm(&other.module)?;
        let na = self.rank();
        let nb = other.rank();
        let len = self.phi.min_len().min(other.phi.min_len());
        let ring = self.module.ring();
        let mut phi = WMat::zero(ring, na * nb, na * nb, len);
        for ra in 0..na {
            for rb in 0..nb {
                for ca in 0..na {
                    for cb in 0..nb {
                        let v = witt_mul(self.phi.at(ra, ca), other.phi.at(rb, cb))?;
                        phi.set(perm[ra * nb + rb], perm[ca * nb + cb], v);
                    }
                }
            }
        }
        Display::validate(&module, phi)
    }

    /// Dual display: Φ^∨ = (Φ^{-1})^T pushed through the weight-reversal
    /// permutation of the dual basis.
    pub fn dual(&self) -> Result<Display> {
        let (module, perm) = self.module.dual_with_perm();
        let inv_t = self.phi.inverse()?.transpose();
        let n = self.rank();
        let len = inv_t.min_len();
        let ring = self.module.ring();
        let mut phi = WMat::zero(ring, n, n, len);
        for r in 0..n {
            for c in 0..n {
                phi.set(perm[r], perm[c], inv_t.at(r, c).clone());
            }
        }
        Display::validate(&module, phi)
    }

    /// Base change along a ring embedding: map Φ entrywise, keep weights.
    pub fn base_change(&self, map: &RingMap) -> Result<Display> {
        let module = self.module.base_change(map)?;
        let phi = self.phi.map(|w| {
            let coeffs = w
                .coeffs()
                .iter()
                .map(|c| map.apply(c))
                .collect::<Result<Vec<_>>>()?;
            WittVector::new(map.dst(), coeffs)
        })?;
        Display::validate(&module, phi)
    }
}

/// Is ψ a morphism of displays D → D'? The diagram condition
/// (F')♯ ∘ ψ^σ = ψ^τ ∘ F♯ reads Φ'·σ(ψ) = τ(ψ)·Φ as matrices over W_m(R),
/// compared on the certified common prefix.
pub fn display_morphism_check(psi: &GradedMorphism, src: &Display, tgt: &Display) -> Result<bool> {
    psi.check()?;
    if psi.source() != src.module() || psi.target() != tgt.module() {
        return Err(Error::Invalid(
            "morphism endpoints do not match the displays".into(),
        ));
    }
    let sigma = psi.sigma_matrix()?;
    let tau = psi.tau_matrix()?;
    let lhs = tgt.phi.mul(&sigma)?;
    let rhs = tau.mul(&src.phi)?;
    if lhs.min_len() == 0 || rhs.min_len() == 0 {
        return Err(Error::PrecisionExhausted(
            "no certified coefficients left in morphism comparison".into(),
        ));
    }
    Ok(lhs.agrees_with(&rhs))
}

/// A bilinear form β: D × D' → D'' presented on the weight-sorted tensor
/// basis, i.e. as a graded morphism (M ⊗ M') → M''. The compatibility
/// F''(β(x, y)) = β^τ(F(x), F'(y)) is exactly the display-morphism
/// condition for β out of the tensor display.
pub fn bilinear_form_check(
    beta: &GradedMorphism,
    d1: &Display,
    d2: &Display,
    target: &Display,
) -> Result<bool> {
    let tensor = d1.tensor(d2)?;
    display_morphism_check(beta, &tensor, target)
}

/// The canonical form β₀: D × D' → D ⊗ D' is the identity on the tensor
/// basis.
pub fn canonical_beta0(d1: &Display, d2: &Display) -> Result<GradedMorphism> {
    let module = d1.module().tensor(d2.module())?;
    Ok(GradedMorphism::identity(&module))
}
