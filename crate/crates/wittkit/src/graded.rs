//! Finite free graded W(R)^⊕-modules presented by normal decompositions,
//! graded morphisms as degree-constrained matrices of frame elements,
//! tensor/dual/base change, ν-reduction, type/depth/altitude, and θ_n.
//!
//! The basis is always ordered by weight (ascending), then by position
//! inside a weight block. A morphism entry at (row r, col c) is
//! homogeneous of degree weight_src(c) − weight_tgt(r).

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::frame::{frame_add, frame_mul, frame_sigma, frame_tau, FrameElement};
use crate::matrix::{FMat, WMat};
use crate::ring::{Ring, RingMap};
use crate::witt::{witt_add, witt_mul, WittVector};

#[derive(Clone, PartialEq, Eq)]
pub struct GradedModule {
    ring: Ring,
    /// Truncation length for all matrix entries over this module.
    m: usize,
    /// Normal decomposition: weight → rank.
    weights: BTreeMap<i64, usize>,
}

impl std::fmt::Debug for GradedModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GradedModule{:?} over {}", self.weights, self.ring)
    }
}

impl GradedModule {
    pub fn free(ring: &Ring, m: usize, decomposition: &[(i64, usize)]) -> Result<GradedModule> {
        let mut weights = BTreeMap::new();
        for &(w, r) in decomposition {
            if r == 0 {
                continue;
            }
            *weights.entry(w).or_insert(0) += r;
        }
        Ok(GradedModule {
            ring: ring.clone(),
            m,
            weights,
        })
    }

    /// The unit module S (weight 0, rank 1).
    pub fn unit(ring: &Ring, m: usize) -> GradedModule {
        GradedModule::free(ring, m, &[(0, 1)]).expect("unit module")
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn truncation(&self) -> usize {
        self.m
    }

    pub fn weights(&self) -> &BTreeMap<i64, usize> {
        &self.weights
    }

    pub fn rank(&self) -> usize {
        self.weights.values().sum()
    }

    /// The type: sorted weight multiset (i_1 ≤ … ≤ i_n).
    pub fn type_vector(&self) -> Result<Vec<i64>> {
        if !self.ring.is_local() {
            return Err(Error::NonLocalRing);
        }
        let mut out = Vec::with_capacity(self.rank());
        for (&w, &r) in &self.weights {
            out.extend(std::iter::repeat(w).take(r));
        }
        Ok(out)
    }

    pub fn basis_weight(&self, k: usize) -> i64 {
        let mut idx = k;
        for (&w, &r) in &self.weights {
            if idx < r {
                return w;
            }
            idx -= r;
        }
        panic!("basis index {k} out of range");
    }

    pub fn depth(&self) -> Result<Option<i64>> {
        if !self.ring.is_local() {
            return Err(Error::NonLocalRing);
        }
        Ok(self.weights.keys().next().copied())
    }

    pub fn altitude(&self) -> Result<Option<i64>> {
        if !self.ring.is_local() {
            return Err(Error::NonLocalRing);
        }
        Ok(self.weights.keys().next_back().copied())
    }

    /// ν-reduction: the graded R-module L̄ has the same ranks in the same
    /// weights (L_i ⊗_{S_0} R ≅ L̄_i).
    pub fn nu_reduce(&self) -> BTreeMap<i64, usize> {
        self.weights.clone()
    }

    /// Tensor product together with the permutation sending the a-major
    /// pair index (ia·rank_b + ib) to its position in the weight-sorted
    /// tensor basis.
    pub fn tensor_with_perm(&self, other: &GradedModule) -> Result<(GradedModule, Vec<usize>)> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        let ra = self.rank();
        let rb = other.rank();
        let mut keyed: Vec<(i64, usize)> = Vec::with_capacity(ra * rb);
        for ia in 0..ra {
            for ib in 0..rb {
                keyed.push((self.basis_weight(ia) + other.basis_weight(ib), ia * rb + ib));
            }
        }
        let mut order: Vec<usize> = (0..keyed.len()).collect();
        order.sort_by_key(|&i| (keyed[i].0, keyed[i].1));
        let mut perm = vec![0usize; keyed.len()];
        for (pos, &pair) in order.iter().enumerate() {
            perm[keyed[pair].1] = pos;
        }
        let mut weights: BTreeMap<i64, usize> = BTreeMap::new();
        for &(w, _) in &keyed {
            *weights.entry(w).or_insert(0) += 1;
        }
        Ok((
            GradedModule {
                ring: self.ring.clone(),
                m: self.m.min(other.m),
                weights,
            },
            perm,
        ))
    }

    pub fn tensor(&self, other: &GradedModule) -> Result<GradedModule> {
        Ok(self.tensor_with_perm(other)?.0)
    }

    /// Dual: weights negate. Returns the module and the permutation taking
    /// basis index k of M to the position of its dual vector in M^∨.
    pub fn dual_with_perm(&self) -> (GradedModule, Vec<usize>) {
        let n = self.rank();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&k| (-self.basis_weight(k), k));
        let mut perm = vec![0usize; n];
        for (pos, &k) in order.iter().enumerate() {
            perm[k] = pos;
        }
        let mut weights = BTreeMap::new();
        for (&w, &r) in &self.weights {
            weights.insert(-w, r);
        }
        (
            GradedModule {
                ring: self.ring.clone(),
                m: self.m,
                weights,
            },
            perm,
        )
    }

    pub fn dual(&self) -> GradedModule {
        self.dual_with_perm().0
    }

    pub fn base_change(&self, map: &RingMap) -> Result<GradedModule> {
        if *map.src() != self.ring {
            return Err(Error::RingMismatch);
        }
        Ok(GradedModule {
            ring: map.dst().clone(),
            m: self.m,
            weights: self.weights.clone(),
        })
    }
}

/// A homogeneous element of M_n on the normal decomposition: component k
/// lies in L_{i_k} ⊗ S_{n − i_k}, stored as a frame element of degree
/// n − i_k.
#[derive(Clone, Debug)]
pub struct ModuleElement {
    pub module: GradedModule,
    pub deg: i64,
    pub comps: Vec<FrameElement>,
}

impl ModuleElement {
    pub fn new(module: &GradedModule, deg: i64, comps: Vec<FrameElement>) -> Result<ModuleElement> {
        if comps.len() != module.rank() {
            return Err(Error::Invalid("component count mismatch".into()));
        }
        for (k, c) in comps.iter().enumerate() {
            let expect = deg - module.basis_weight(k);
            if c.deg() != expect {
                return Err(Error::DegreeViolation {
                    row: 0,
                    col: k,
                    expected: expect,
                    found: c.deg(),
                });
            }
        }
        Ok(ModuleElement {
            module: module.clone(),
            deg,
            comps,
        })
    }

    /// Basis vector e_k ⊗ 1, living in degree i_k.
    pub fn basis(module: &GradedModule, k: usize) -> ModuleElement {
        let m = module.truncation();
        let deg = module.basis_weight(k);
        let comps = (0..module.rank())
            .map(|j| {
                let d = deg - module.basis_weight(j);
                if j == k {
                    FrameElement::one(module.ring(), m)
                } else {
                    FrameElement::zero(module.ring(), d, m)
                }
            })
            .collect();
        ModuleElement {
            module: module.clone(),
            deg,
            comps,
        }
    }

    pub fn sample<R: Rng>(module: &GradedModule, deg: i64, rng: &mut R) -> ModuleElement {
        let m = module.truncation();
        let comps = (0..module.rank())
            .map(|k| {
                let d = deg - module.basis_weight(k);
                FrameElement::new(d, WittVector::sample(module.ring(), m, rng))
                    .expect("degree window")
            })
            .collect();
        ModuleElement {
            module: module.clone(),
            deg,
            comps,
        }
    }
}

/// θ_n: M_n → M^τ ≅ L on the decomposition basis: ℓ_k ⊗ s ↦ τ(s)·ℓ_k.
pub fn theta(x: &ModuleElement) -> Result<Vec<WittVector>> {
    x.comps.iter().map(frame_tau).collect()
}

/// Whether θ_n is an isomorphism (n ≤ d(M)).
pub fn theta_is_iso(module: &GradedModule, n: i64) -> Result<bool> {
    Ok(match module.depth()? {
        Some(d) => n <= d,
        None => true,
    })
}

/// Image of θ_n per basis line, as the exponent j with image ideal
/// τ(S_j): j = 0 means all of W(R), j ≥ 1 means v(p^{j−1}·W(R)).
pub fn theta_image(module: &GradedModule, n: i64) -> Vec<i64> {
    (0..module.rank())
        .map(|k| (n - module.basis_weight(k)).max(0))
        .collect()
}

#[derive(Clone, Debug)]
pub struct GradedMorphism {
    source: GradedModule,
    target: GradedModule,
    mat: FMat,
}

impl GradedMorphism {
    /// Raw constructor: shape-checked only. `check` validates degrees.
    pub fn new(
        source: &GradedModule,
        target: &GradedModule,
        mat: FMat,
    ) -> Result<GradedMorphism> {
        if source.ring != target.ring {
            return Err(Error::RingMismatch);
        }
        if mat.rows() != target.rank() || mat.cols() != source.rank() {
            return Err(Error::Invalid(format!(
                "morphism shape {}x{} does not match target {} x source {}",
                mat.rows(),
                mat.cols(),
                target.rank(),
                source.rank()
            )));
        }
        Ok(GradedMorphism {
            source: source.clone(),
            target: target.clone(),
            mat,
        })
    }

    /// Constructor that also enforces the degree pattern.
    pub fn checked(
        source: &GradedModule,
        target: &GradedModule,
        mat: FMat,
    ) -> Result<GradedMorphism> {
        let h = GradedMorphism::new(source, target, mat)?;
        h.check()?;
        Ok(h)
    }

    pub fn identity(module: &GradedModule) -> GradedMorphism {
        let n = module.rank();
        let m = module.truncation();
        let mat = FMat::from_fn(n, n, |r, c| {
            let d = module.basis_weight(c) - module.basis_weight(r);
            if r == c {
                FrameElement::one(module.ring(), m)
            } else {
                FrameElement::zero(module.ring(), d, m)
            }
        });
        GradedMorphism {
            source: module.clone(),
            target: module.clone(),
            mat,
        }
    }

    pub fn source(&self) -> &GradedModule {
        &self.source
    }

    pub fn target(&self) -> &GradedModule {
        &self.target
    }

    pub fn matrix(&self) -> &FMat {
        &self.mat
    }

    /// Validate that every entry has degree weight_src(col) − weight_tgt(row).
    pub fn check(&self) -> Result<()> {
        for r in 0..self.mat.rows() {
            for c in 0..self.mat.cols() {
                let expect = self.source.basis_weight(c) - self.target.basis_weight(r);
                let found = self.mat.at(r, c).deg();
                if found != expect {
                    return Err(Error::DegreeViolation {
                        row: r,
                        col: c,
                        expected: expect,
                        found,
                    });
                }
            }
        }
        Ok(())
    }

    /// self ∘ other (other first).
    pub fn compose(&self, other: &GradedMorphism) -> Result<GradedMorphism> {
        if other.target != self.source {
            return Err(Error::Invalid("composition shape mismatch".into()));
        }
        Ok(GradedMorphism {
            source: other.source.clone(),
            target: self.target.clone(),
            mat: self.mat.mul(&other.mat)?,
        })
    }

    /// Apply to a homogeneous element of M_n, landing in the same degree
    /// of the target.
    pub fn apply(&self, x: &ModuleElement) -> Result<ModuleElement> {
        if x.module != self.source {
            return Err(Error::Invalid("element not in the source module".into()));
        }
        let mut comps = Vec::with_capacity(self.target.rank());
        for r in 0..self.target.rank() {
            let mut acc: Option<FrameElement> = None;
            for c in 0..self.source.rank() {
                let term = frame_mul(self.mat.at(r, c), &x.comps[c])?;
                acc = Some(match acc {
                    None => term,
                    Some(a) => frame_add(&a, &term)?,
                });
            }
            comps.push(acc.expect("nonzero rank"));
        }
        ModuleElement::new(&self.target, x.deg, comps)
    }

    /// Matrix of ψ^σ: M^σ → (M')^σ on the L-bases.
    pub fn sigma_matrix(&self) -> Result<WMat> {
        self.mat.map_to_witt(frame_sigma)
    }

    /// Matrix of ψ^τ: M^τ → (M')^τ on the L-bases.
    pub fn tau_matrix(&self) -> Result<WMat> {
        self.mat.map_to_witt(frame_tau)
    }
}

/// θ-naturality data: θ'_n ∘ h|_{M_n} = ψ^τ ∘ θ_n evaluated on an element.
pub fn theta_naturality_holds(h: &GradedMorphism, x: &ModuleElement) -> Result<bool> {
    let lhs = theta(&h.apply(x)?)?;
    let tau = h.tau_matrix()?;
    let rhs = tau.mul_vec(&theta(x)?)?;
    Ok(lhs
        .iter()
        .zip(&rhs)
        .all(|(a, b)| a.agrees_with(b)))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::witt::int_witt;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f2() -> Ring {
        Ring::zmod(2, 1).unwrap()
    }

    fn mod01(ring: &Ring, m: usize) -> GradedModule {
        GradedModule::free(ring, m, &[(0, 1), (1, 1)]).unwrap()
    }

    #[test]
    fn type_depth_altitude() {
        let m = mod01(&f2(), 3);
        assert_eq!(m.type_vector().unwrap(), vec![0, 1]);
        assert_eq!(m.depth().unwrap(), Some(0));
        assert_eq!(m.altitude().unwrap(), Some(1));
        // ⊕_r S(−i_r) has type I: build from an arbitrary I.
        let m2 = GradedModule::free(&f2(), 3, &[(2, 1), (0, 2), (-1, 1)]).unwrap();
        assert_eq!(m2.type_vector().unwrap(), vec![-1, 0, 0, 2]);
    }

    #[test]
    fn nu_reduction_ranks() {
        let f2 = f2();
        let m = GradedModule::free(&f2, 3, &[(0, 2)]).unwrap();
        assert_eq!(m.nu_reduce().get(&0), Some(&2));
        let unit = GradedModule::unit(&f2, 3);
        assert_eq!(unit.nu_reduce().get(&0), Some(&1));
        let m1 = GradedModule::free(&f2, 3, &[(1, 1)]).unwrap();
        assert_eq!(m1.nu_reduce().get(&1), Some(&1));
        assert_eq!(m1.nu_reduce().get(&0), None);
    }

    #[test]
    fn tensor_weights_convolve() {
        let f2 = f2();
        let a = mod01(&f2, 3);
        let b = mod01(&f2, 3);
        let t = a.tensor(&b).unwrap();
        assert_eq!(t.type_vector().unwrap(), vec![0, 1, 1, 2]);
        // Unit is neutral.
        let u = GradedModule::unit(&f2, 3);
        assert_eq!(u.tensor(&a).unwrap(), a);
        // Associative on decompositions.
        let c = GradedModule::free(&f2, 3, &[(2, 1)]).unwrap();
        assert_eq!(
            a.tensor(&b).unwrap().tensor(&c).unwrap(),
            a.tensor(&b.tensor(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn dual_swaps_depth_altitude() {
        let f2 = f2();
        let m = GradedModule::free(&f2, 3, &[(0, 2), (1, 1), (3, 1)]).unwrap();
        let d = m.dual();
        assert_eq!(d.depth().unwrap(), Some(-3));
        assert_eq!(d.altitude().unwrap(), Some(0));
        assert_eq!(m.depth().unwrap().unwrap(), -d.altitude().unwrap().unwrap());
        assert_eq!(d.dual(), m);
    }

    #[test]
    fn base_change_preserves_type() {
        let f2 = f2();
        let f4 = Ring::galois_default(2, 2).unwrap();
        let map = RingMap::new(f2.clone(), f4, None).unwrap();
        let m = mod01(&f2, 3);
        let m4 = m.base_change(&map).unwrap();
        assert_eq!(m4.type_vector().unwrap(), m.type_vector().unwrap());
        assert_eq!(m4.depth().unwrap(), m.depth().unwrap());
        assert_eq!(m4.altitude().unwrap(), m.altitude().unwrap());
    }

    #[test]
    fn theta_on_one_display_shape() {
        // L = {0: r, 1: s}: M_1 = (L_0 ⊗ I_R) ⊕ (L_1 ⊗ W(R)).
        let f2 = f2();
        let m = mod01(&f2, 3);
        let x = ModuleElement::sample(&m, 1, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(x.comps[0].deg(), 1); // I_R component
        assert_eq!(x.comps[1].deg(), 0); // W(R) component
        assert!(theta_is_iso(&m, 0).unwrap());
        assert!(!theta_is_iso(&m, 1).unwrap());
        // Image of θ_1 is I_R·e_0 ⊕ W(R)·e_1.
        assert_eq!(theta_image(&m, 1), vec![1, 0]);
    }

    #[test]
    fn theta_bijective_at_depth_on_samples() {
        let f2 = f2();
        let m = mod01(&f2, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        // θ_0 sends e_0 ⊗ s_0 + e_1 ⊗ (u·t) to (s_0, u); recover the input.
        for _ in 0..20 {
            let x = ModuleElement::sample(&m, 0, &mut rng);
            let coords = theta(&x).unwrap();
            assert_eq!(coords[0], *x.comps[0].payload());
            assert_eq!(coords[1], *x.comps[1].payload());
        }
    }

    #[test]
    fn identity_passes_check_and_degree_violations_are_reported() {
        let f2 = f2();
        let m = mod01(&f2, 3);
        let id = GradedMorphism::identity(&m);
        assert!(id.check().is_ok());
        // Planting a degree-0 unit in the (0,1) slot violates μ_{1,2}.
        let mut mat = id.matrix().clone();
        mat.set(0, 1, FrameElement::one(&f2, 3));
        let bad = GradedMorphism::new(&m, &m, mat).unwrap();
        assert_eq!(
            bad.check(),
            Err(Error::DegreeViolation {
                row: 0,
                col: 1,
                expected: 1,
                found: 0
            })
        );
    }

    #[test]
    fn morph_tau_example() {
        // h = [[1, v(1)],[t, 1]] over F_2 has τ(h) = [[1, p],[1, 1]].
        let f2 = f2();
        let m = mod01(&f2, 3);
        let one = FrameElement::one(&f2, 3);
        let v1 = FrameElement::new(1, WittVector::one(&f2, 3)).unwrap();
        let t = FrameElement::t(&f2, 3);
        let h = GradedMorphism::checked(
            &m,
            &m,
            FMat::new(2, 2, vec![one.clone(), v1, t, one.clone()]).unwrap(),
        )
        .unwrap();
        let tau = h.tau_matrix().unwrap();
        let p = int_witt(&f2, 2, 3).unwrap();
        assert!(tau.at(0, 0).is_one());
        assert!(tau.at(0, 1).agrees_with(&p));
        assert!(tau.at(1, 0).is_one());
        assert!(tau.at(1, 1).is_one());
        // σ(h) = [[1, 1],[p, 1]].
        let sigma = h.sigma_matrix().unwrap();
        assert!(sigma.at(0, 0).is_one());
        assert!(sigma.at(0, 1).is_one());
        assert!(sigma.at(1, 0).agrees_with(&p));
        assert!(sigma.at(1, 1).is_one());
    }

    #[test]
    fn functoriality_of_sigma_tau() {
        let f2 = f2();
        let m = mod01(&f2, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let h = random_endo(&m, &mut rng);
            let g = random_endo(&m, &mut rng);
            let hg = h.compose(&g).unwrap();
            let lhs = hg.sigma_matrix().unwrap();
            let rhs = h
                .sigma_matrix()
                .unwrap()
                .mul(&g.sigma_matrix().unwrap())
                .unwrap();
            assert!(lhs.agrees_with(&rhs), "sigma functoriality");
            let lhs = hg.tau_matrix().unwrap();
            let rhs = h
                .tau_matrix()
                .unwrap()
                .mul(&g.tau_matrix().unwrap())
                .unwrap();
            assert!(lhs.agrees_with(&rhs), "tau functoriality");
        }
    }

    #[test]
    fn theta_naturality() {
        let f2 = f2();
        let m = mod01(&f2, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..30 {
            let h = random_endo(&m, &mut rng);
            for n in [0i64, 1] {
                let x = ModuleElement::sample(&m, n, &mut rng);
                assert!(theta_naturality_holds(&h, &x).unwrap());
            }
        }
    }

    pub(crate) fn random_endo(m: &GradedModule, rng: &mut ChaCha8Rng) -> GradedMorphism {
        let n = m.rank();
        let len = m.truncation();
        let mat = FMat::from_fn(n, n, |r, c| {
            let d = m.basis_weight(c) - m.basis_weight(r);
            FrameElement::new(d, WittVector::sample(m.ring(), len, rng)).unwrap()
        });
        GradedMorphism::checked(m, m, mat).unwrap()
    }
}
