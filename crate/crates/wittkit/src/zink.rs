//! Zink displays (P_0, P_1, F_0, F_1), their equivalence with 1-displays,
//! the V♯ operator, and the nilpotence test.
//!
//! P_1 is never stored as a set: the split P_0 = L_0 ⊕ L_1 with
//! P_1 = I_R·L_0 ⊕ L_1 is always available at this generality, and the
//! split makes every structure map a matrix. F_0 is the matrix of the
//! f-linear map on the full basis; F_1 is stored on the L_1 basis, its
//! values on I_R·L_0 being forced by F_1(v(ξ)·x) = ξ·F_0(x).

use rand::Rng;

use crate::display::Display;
use crate::error::{Error, Result};
use crate::graded::GradedModule;
use crate::matrix::WMat;
use crate::ring::{Ring, RingElement};
use crate::witt::{
    frobenius, in_ir, v_extend, v_preimage, witt_add, witt_mul, witt_scale_int, WittVector,
};

#[derive(Clone, Debug)]
pub struct ZinkDisplay {
    ring: Ring,
    m: usize,
    l0: usize,
    l1: usize,
    f0: WMat,
    f1_on_l1: WMat,
}

impl ZinkDisplay {
    /// Validate the quadruple on the split basis:
    ///  - F_1 restricted to L_1 together with F_0 on L_0 must assemble to
    ///    an invertible matrix (the f-linear epimorphism condition);
    ///  - F_0 on L_1 must equal p·F_1 on L_1 (the relation
    ///    F_1(v(ξ)·x) = ξ·F_0(x) evaluated on L_1).
    pub fn new(ring: &Ring, m: usize, l0: usize, l1: usize, f0: WMat, f1_on_l1: WMat) -> Result<ZinkDisplay> {
        let n = l0 + l1;
        if f0.rows() != n || f0.cols() != n || f1_on_l1.rows() != n || f1_on_l1.cols() != l1 {
            return Err(Error::Invalid("Zink display matrix shapes".into()));
        }
        let z = ZinkDisplay {
            ring: ring.clone(),
            m,
            l0,
            l1,
            f0,
            f1_on_l1,
        };
        if n > 0 {
            let phi = z.combined_phi();
            let det = phi.det()?;
            if !det.is_unit() {
                return Err(Error::InvalidZink(format!(
                    "F_1 is not an f-linear epimorphism: det {det:?} is not a unit"
                )));
            }
            let p = ring.prime() as i64;
            for c in 0..l1 {
                for r in 0..n {
                    let lhs = z.f0.at(r, l0 + c).clone();
                    let rhs = witt_scale_int(z.f1_on_l1.at(r, c), p)?;
                    if !lhs.agrees_with(&rhs) {
                        return Err(Error::InvalidZink(format!(
                            "F_0 and F_1 disagree on L_1 column {c}: {lhs:?} vs p·F_1 = {rhs:?}"
                        )));
                    }
                }
            }
        }
        Ok(z)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn l0_rank(&self) -> usize {
        self.l0
    }

    pub fn l1_rank(&self) -> usize {
        self.l1
    }

    pub fn rank(&self) -> usize {
        self.l0 + self.l1
    }

    pub fn f0(&self) -> &WMat {
        &self.f0
    }

    pub fn f1_on_l1(&self) -> &WMat {
        &self.f1_on_l1
    }

    /// Φ = F_0|_{L_0} ⊕ F_1|_{L_1}, the standard-datum matrix.
    pub fn combined_phi(&self) -> WMat {
        WMat::from_fn(&self.ring, self.rank(), self.rank(), |r, c| {
            if c < self.l0 {
                self.f0.at(r, c).clone()
            } else {
                self.f1_on_l1.at(r, c - self.l0).clone()
            }
        })
    }

    /// Hodge filtration ranks (rk P_0/P_1, rk P_1/I_R·P_0).
    pub fn hodge_ranks(&self) -> (usize, usize) {
        (self.l0, self.l1)
    }

    /// F_0 applied to coordinates (f-linear: twist then multiply).
    pub fn f0_apply(&self, coords: &[WittVector]) -> Result<Vec<WittVector>> {
        let twisted = coords.iter().map(frobenius).collect::<Result<Vec<_>>>()?;
        self.f0.mul_vec(&twisted)
    }

    /// F_1 applied to an element of P_1 given as (v-image parts over L_0,
    /// plain parts over L_1): F_1(Σ v(η_i)e_i + Σ c_j e_j) =
    /// Σ η_i·F_0(e_i) + Σ f(c_j)·F_1(e_j).
    pub fn f1_apply(&self, ir_parts: &[WittVector], l1_parts: &[WittVector]) -> Result<Vec<WittVector>> {
        if ir_parts.len() != self.l0 || l1_parts.len() != self.l1 {
            return Err(Error::Invalid("P_1 component count".into()));
        }
        let n = self.rank();
        let mut acc = vec![WittVector::zero(&self.ring, self.m); n];
        for (i, im) in ir_parts.iter().enumerate() {
            if !in_ir(im) {
                return Err(Error::NotInIR);
            }
            let eta = v_preimage(im)?.vec;
            for r in 0..n {
                let term = witt_mul(&eta, self.f0.at(r, i))?;
                acc[r] = witt_add(&acc[r].truncate(term.len()), &term)?;
            }
        }
        for (j, c) in l1_parts.iter().enumerate() {
            let fc = frobenius(c)?;
            for r in 0..n {
                let term = witt_mul(&fc, self.f1_on_l1.at(r, j))?;
                acc[r] = witt_add(&acc[r].truncate(term.len()), &term)?;
            }
        }
        Ok(acc)
    }

    /// Sampled check of F_1(v(ξ)·x) = ξ·F_0(x).
    pub fn check_f1_identity<R: Rng>(&self, samples: usize, rng: &mut R) -> Result<bool> {
        for _ in 0..samples {
            let xi = WittVector::sample(&self.ring, self.m, rng);
            let coords: Vec<WittVector> = (0..self.rank())
                .map(|_| WittVector::sample(&self.ring, self.m, rng))
                .collect();
            // v(ξ)·x has I_R-parts v(ξ·c_i) over L_0 and plain parts
            // v(ξ)·c_j over L_1.
            let vxi = v_extend(&xi, self.m);
            let ir_parts = coords[..self.l0]
                .iter()
                .map(|c| Ok(v_extend(&witt_mul(&xi, c)?, self.m)))
                .collect::<Result<Vec<_>>>()?;
            let l1_parts = coords[self.l0..]
                .iter()
                .map(|c| witt_mul(&vxi, c))
                .collect::<Result<Vec<_>>>()?;
            let lhs = self.f1_apply(&ir_parts, &l1_parts)?;
            let f0x = self.f0_apply(&coords)?;
            let rhs = f0x
                .iter()
                .map(|v| witt_mul(&xi, v))
                .collect::<Result<Vec<_>>>()?;
            if !lhs.iter().zip(&rhs).all(|(a, b)| a.agrees_with(b)) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Zink display of a 1-display: the split comes from the normal
/// decomposition, F_0 = Φ·diag(1, p) and F_1|_{L_1} = Φ|_{L_1}.
pub fn zink_from_display(d: &Display) -> Result<ZinkDisplay> {
    if !d.is_effective() || d.altitude().map_or(false, |a| a > 1) {
        return Err(Error::Invalid(format!(
            "not a 1-display: type {:?}",
            d.type_vector()
        )));
    }
    let module = d.module();
    let l0 = *module.weights().get(&0).unwrap_or(&0);
    let l1 = *module.weights().get(&1).unwrap_or(&0);
    let n = l0 + l1;
    let p = module.ring().prime() as i64;
    let f0 = WMat::from_fn(module.ring(), n, n, |r, c| {
        if c < l0 {
            d.phi().at(r, c).clone()
        } else {
            witt_scale_int(d.phi().at(r, c), p).expect("same ring")
        }
    });
    let f1_on_l1 = WMat::from_fn(module.ring(), n, l1, |r, c| d.phi().at(r, l0 + c).clone());
    ZinkDisplay::new(module.ring(), module.truncation(), l0, l1, f0, f1_on_l1)
}

/// 1-display of a Zink display: weights {0: l0, 1: l1} with
/// Φ = F_0|_{L_0} ⊕ F_1|_{L_1}.
pub fn zink_to_display(z: &ZinkDisplay) -> Result<Display> {
    let module = GradedModule::free(&z.ring, z.m, &[(0, z.l0), (1, z.l1)])?;
    let phi = z.combined_phi();
    Display::validate(&module, phi).map_err(|e| match e {
        Error::NotBijective(msg) => Error::InvalidZink(msg),
        other => other,
    })
}

/// V♯: P_0 → P_0^f as a plain W(R)-linear matrix. The defining relations
/// V♯(ξ·F_0(x)) = pξ ⊗ x and V♯(ξ·F_1(y)) = ξ ⊗ y force
/// V♯ = diag(p·1_{L_0}, 1_{L_1})·Φ^{-1}.
#[derive(Clone, Debug)]
pub struct VSharp {
    pub mat: WMat,
    /// Reduction modulo I_R + pW(R): first Witt coordinates mod p.
    pub reduction: Vec<Vec<RingElement>>,
    pub residue_ring: Ring,
}

pub fn v_sharp(z: &ZinkDisplay) -> Result<VSharp> {
    let n = z.rank();
    let phi_inv = z.combined_phi().inverse()?;
    let p = z.ring.prime() as i64;
    let mat = WMat::from_fn(&z.ring, n, n, |r, c| {
        if r < z.l0 {
            witt_scale_int(phi_inv.at(r, c), p).expect("same ring")
        } else {
            phi_inv.at(r, c).clone()
        }
    });
    let residue = z.ring.residue_mod_p()?;
    let reduction = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let raw: Vec<i64> =
                        mat.at(r, c).coeff(0).coeffs().iter().map(|&v| v as i64).collect();
                    residue.from_coeffs(&raw)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VSharp {
        mat,
        reduction,
        residue_ring: residue,
    })
}

impl VSharp {
    /// Sampled check of both defining relations in coordinates.
    pub fn check_relations<R: Rng>(&self, z: &ZinkDisplay, samples: usize, rng: &mut R) -> Result<bool> {
        let n = z.rank();
        for _ in 0..samples {
            let xi = WittVector::sample(&z.ring, z.m, rng);
            let coords: Vec<WittVector> = (0..n)
                .map(|_| WittVector::sample(&z.ring, z.m, rng))
                .collect();
            // V♯(ξ·F_0(x)) = pξ ⊗ x: coordinates pξ·f(c).
            let f0x = z.f0_apply(&coords)?;
            let scaled = f0x
                .iter()
                .map(|v| witt_mul(&xi, v))
                .collect::<Result<Vec<_>>>()?;
            let lhs = self.mat.mul_vec(&scaled)?;
            let p = z.ring.prime() as i64;
            let rhs = coords
                .iter()
                .map(|c| witt_scale_int(&witt_mul(&xi, &frobenius(c)?)?, p))
                .collect::<Result<Vec<_>>>()?;
            if !lhs.iter().zip(&rhs).all(|(a, b)| a.agrees_with(b)) {
                return Ok(false);
            }
            // V♯(ξ·F_1(e_j)) = ξ ⊗ e_j on the L_1 basis.
            for j in 0..z.l1 {
                let f1e: Vec<WittVector> = (0..n)
                    .map(|r| witt_mul(&xi, z.f1_on_l1.at(r, j)))
                    .collect::<Result<Vec<_>>>()?;
                let lhs = self.mat.mul_vec(&f1e)?;
                for (r, l) in lhs.iter().enumerate() {
                    let expect = if r == z.l0 + j {
                        xi.clone()
                    } else {
                        WittVector::zero(&z.ring, z.m)
                    };
                    if !l.agrees_with(&expect) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

fn rmat_mul(a: &[Vec<RingElement>], b: &[Vec<RingElement>]) -> Result<Vec<Vec<RingElement>>> {
    let n = a.len();
    let mut out = Vec::with_capacity(n);
    for r in 0..n {
        let mut row = Vec::with_capacity(n);
        for c in 0..n {
            let mut acc = a[r][0].mul(&b[0][c])?;
            for k in 1..n {
                acc = acc.add(&a[r][k].mul(&b[k][c])?)?;
            }
            row.push(acc);
        }
        out.push(row);
    }
    Ok(out)
}

fn rmat_twist(a: &[Vec<RingElement>], e: u64) -> Vec<Vec<RingElement>> {
    a.iter()
        .map(|row| row.iter().map(|x| x.pow(e)).collect())
        .collect()
}

fn rmat_is_zero(a: &[Vec<RingElement>]) -> bool {
    a.iter().all(|row| row.iter().all(|x| x.is_zero()))
}

/// Rank of a matrix over a finite field (Gaussian elimination).
pub fn rmat_rank(a: &[Vec<RingElement>]) -> Result<usize> {
    if a.is_empty() {
        return Ok(0);
    }
    let mut work: Vec<Vec<RingElement>> = a.to_vec();
    let rows = work.len();
    let cols = work[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| !work[r][c].is_zero()) else {
            continue;
        };
        work.swap(rank, pr);
        let inv = work[rank][c].inv()?;
        for cc in 0..cols {
            work[rank][cc] = work[rank][cc].mul(&inv)?;
        }
        for r in 0..rows {
            if r != rank && !work[r][c].is_zero() {
                let f = work[r][c].clone();
                for cc in 0..cols {
                    let t = f.mul(&work[rank][cc])?;
                    work[r][cc] = work[r][cc].sub(&t)?;
                }
            }
        }
        rank += 1;
    }
    Ok(rank)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NilpotenceResult {
    pub nilpotent: bool,
    /// Least k with N^{(p^{k−1})}⋯N^{(p)}·N = 0, when nilpotent.
    pub witness: Option<usize>,
}

/// Nilpotence of the Zink display: iterate the σ-twisted products of the
/// V♯-reduction over R/pR. The scan bound rank·(1 + nil-exponent of R/pR)
/// covers the strictly-decreasing image chain over the residue field plus
/// the nilradical correction for non-reduced R/pR.
pub fn zink_is_nilpotent(z: &ZinkDisplay) -> Result<NilpotenceResult> {
    if z.rank() == 0 {
        return Ok(NilpotenceResult {
            nilpotent: true,
            witness: Some(0),
        });
    }
    let vs = v_sharp(z)?;
    let n = vs.reduction.len();
    let bound = n * (1 + z.ring.nil_exponent() as usize);
    let p = z.ring.prime();
    let mut prod = vs.reduction.clone();
    for k in 1..=bound {
        if rmat_is_zero(&prod) {
            return Ok(NilpotenceResult {
                nilpotent: true,
                witness: Some(k - 1),
            });
        }
        if k < bound {
            let twisted = rmat_twist(&vs.reduction, p.pow(k as u32));
            prod = rmat_mul(&twisted, &prod)?;
        }
    }
    Ok(NilpotenceResult {
        nilpotent: rmat_is_zero(&prod),
        witness: if rmat_is_zero(&prod) { Some(bound) } else { None },
    })
}

/// Does φ (a W_m(R)-matrix on the split bases) define a morphism of Zink
/// displays? Checks preservation of P_1 (the L_1 → L_0' block lands in
/// I_R) and the intertwining relations with F_0 and F_1.
pub fn zink_morphism_check(phi: &WMat, src: &ZinkDisplay, tgt: &ZinkDisplay) -> Result<bool> {
    if phi.rows() != tgt.rank() || phi.cols() != src.rank() {
        return Err(Error::Invalid("morphism shape".into()));
    }
    // φ(L_1) ⊆ P_1': entries in the L_0'-rows, L_1-columns must be in I_R.
    for r in 0..tgt.l0 {
        for c in 0..src.l1 {
            if !in_ir(phi.at(r, src.l0 + c)) {
                return Ok(false);
            }
        }
    }
    // F_0' ∘ φ = φ ∘ F_0 (f-linear: F_0'·f(φ) = φ·F_0).
    let lhs = tgt.f0.mul(&phi.frobenius()?)?;
    let rhs = phi.mul(&src.f0)?;
    if !lhs.agrees_with(&rhs) {
        return Ok(false);
    }
    // F_1' ∘ φ = φ ∘ F_1 on the L_1 basis of the source.
    for j in 0..src.l1 {
        let rhs: Vec<WittVector> = (0..tgt.rank())
            .map(|r| {
                let mut acc = WittVector::zero(&tgt.ring, tgt.m);
                for k in 0..src.rank() {
                    let t = witt_mul(phi.at(r, k), src.f1_on_l1.at(k, j))?;
                    acc = witt_add(&acc.truncate(t.len()), &t)?;
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        // φ(e_j) split into P_1' components.
        let ir_parts: Vec<WittVector> = (0..tgt.l0)
            .map(|r| phi.at(r, src.l0 + j).clone())
            .collect();
        let l1_parts: Vec<WittVector> = (0..tgt.l1)
            .map(|r| phi.at(tgt.l0 + r, src.l0 + j).clone())
            .collect();
        let lhs = tgt.f1_apply(&ir_parts, &l1_parts)?;
        if !lhs.iter().zip(&rhs).all(|(a, b)| a.agrees_with(b)) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::display::tests::random_display;
    use crate::graded::GradedMorphism;
    use crate::witt::int_witt;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f2() -> Ring {
        Ring::zmod(2, 1).unwrap()
    }

    fn display_01(ring: &Ring, m: usize, rng: &mut ChaCha8Rng, l0: usize, l1: usize) -> Display {
        let module = GradedModule::free(ring, m, &[(0, l0), (1, l1)]).unwrap();
        random_display(&module, rng)
    }

    #[test]
    fn from_display_weight_zero_only() {
        // L = {0: 1}, Φ = [1]: P_1 = I_R, F_0 = Φ, F_1(v(ξ)) = ξ.
        let ring = f2();
        let module = GradedModule::free(&ring, 3, &[(0, 1)]).unwrap();
        let d = Display::validate(&module, WMat::identity(&ring, 1, 3)).unwrap();
        let z = zink_from_display(&d).unwrap();
        assert_eq!((z.l0_rank(), z.l1_rank()), (1, 0));
        assert!(z.f0().at(0, 0).is_one());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let xi = WittVector::sample(&ring, 3, &mut rng);
        let out = z
            .f1_apply(&[v_extend(&xi, 3)], &[])
            .unwrap();
        assert!(out[0].agrees_with(&xi));
    }

    #[test]
    fn from_display_weight_one_only() {
        // L = {1: 1}, Φ = [1]: P_1 = P_0 and F_1 = Φ.
        let ring = f2();
        let module = GradedModule::free(&ring, 3, &[(1, 1)]).unwrap();
        let d = Display::validate(&module, WMat::identity(&ring, 1, 3)).unwrap();
        let z = zink_from_display(&d).unwrap();
        assert_eq!((z.l0_rank(), z.l1_rank()), (0, 1));
        assert!(z.f1_on_l1().at(0, 0).is_one());
        // F_0 = p·Φ.
        let p = int_witt(&ring, 2, 3).unwrap();
        assert!(z.f0().at(0, 0).agrees_with(&p));
    }

    #[test]
    fn round_trip_both_ways() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for ring in [f2(), Ring::zmod(3, 1).unwrap(), Ring::zmod(2, 2).unwrap()] {
            for _ in 0..34 {
                let l0 = rng.gen_range(0..=2usize);
                let l1 = rng.gen_range(if l0 == 0 { 1 } else { 0 }..=2usize);
                let d = display_01(&ring, 3, &mut rng, l0, l1);
                let z = zink_from_display(&d).unwrap();
                let back = zink_to_display(&z).unwrap();
                assert_eq!(back.module(), d.module());
                assert!(back.phi().agrees_with(d.phi()), "ring {ring}");
                // And Zink → display → Zink.
                let z2 = zink_from_display(&back).unwrap();
                assert!(z2.f0().agrees_with(z.f0()));
                assert!(z2.f1_on_l1().agrees_with(z.f1_on_l1()));
            }
        }
    }

    #[test]
    fn invalid_zink_rejected() {
        let ring = f2();
        let p = int_witt(&ring, 2, 3).unwrap();
        // F_1 on L_1 equal to p·id is not an epimorphism.
        let f0 = WMat::from_fn(&ring, 1, 1, |_, _| witt_scale_int(&p, 2).unwrap());
        let f1 = WMat::from_fn(&ring, 1, 1, |_, _| p.clone());
        assert!(matches!(
            ZinkDisplay::new(&ring, 3, 0, 1, f0, f1),
            Err(Error::InvalidZink(_))
        ));
    }

    #[test]
    fn rank_zero_round_trip() {
        let ring = f2();
        let z = ZinkDisplay::new(
            &ring,
            3,
            0,
            0,
            WMat::zero(&ring, 0, 0, 3),
            WMat::zero(&ring, 0, 0, 3),
        )
        .unwrap();
        let d = zink_to_display(&z).unwrap();
        assert_eq!(d.rank(), 0);
    }

    #[test]
    fn f1_identity_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for ring in [f2(), Ring::zmod(2, 2).unwrap()] {
            let d = display_01(&ring, 4, &mut rng, 1, 1);
            let z = zink_from_display(&d).unwrap();
            assert!(z.check_f1_identity(25, &mut rng).unwrap());
        }
    }

    #[test]
    fn v_sharp_defining_relations() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (l0, l1) in [(1, 0), (0, 1), (1, 1), (2, 1)] {
            let d = display_01(&f2(), 4, &mut rng, l0, l1);
            let z = zink_from_display(&d).unwrap();
            let vs = v_sharp(&z).unwrap();
            assert!(vs.check_relations(&z, 20, &mut rng).unwrap(), "({l0},{l1})");
        }
    }

    #[test]
    fn v_sharp_structural_cases() {
        let ring = f2();
        // L_1 = 0, Φ = id: V♯ = p·id.
        let module = GradedModule::free(&ring, 3, &[(0, 2)]).unwrap();
        let d = Display::validate(&module, WMat::identity(&ring, 2, 3)).unwrap();
        let z = zink_from_display(&d).unwrap();
        let vs = v_sharp(&z).unwrap();
        let p = int_witt(&ring, 2, 3).unwrap();
        for r in 0..2 {
            for c in 0..2 {
                let expect = if r == c {
                    p.clone()
                } else {
                    WittVector::zero(&ring, 3)
                };
                assert!(vs.mat.at(r, c).agrees_with(&expect));
            }
        }
        // L_0 = 0, Φ = id: V♯ = id.
        let module = GradedModule::free(&ring, 3, &[(1, 2)]).unwrap();
        let d = Display::validate(&module, WMat::identity(&ring, 2, 3)).unwrap();
        let z = zink_from_display(&d).unwrap();
        let vs = v_sharp(&z).unwrap();
        assert!(vs.mat.agrees_with(&WMat::identity(&ring, 2, 3)));
    }

    #[test]
    fn nilpotence_cases() {
        let ring = f2();
        // L_1 = 0, Φ = id: nilpotent with witness 1.
        let module = GradedModule::free(&ring, 3, &[(0, 1)]).unwrap();
        let d = Display::validate(&module, WMat::identity(&ring, 1, 3)).unwrap();
        let res = zink_is_nilpotent(&zink_from_display(&d).unwrap()).unwrap();
        assert_eq!(
            res,
            NilpotenceResult {
                nilpotent: true,
                witness: Some(1)
            }
        );
        // L_0 = 0, Φ = id: not nilpotent.
        let module = GradedModule::free(&ring, 3, &[(1, 1)]).unwrap();
        let d = Display::validate(&module, WMat::identity(&ring, 1, 3)).unwrap();
        let res = zink_is_nilpotent(&zink_from_display(&d).unwrap()).unwrap();
        assert!(!res.nilpotent);
        // Split (1,1) with the swap matrix: nilpotent (supersingular-type).
        let module = GradedModule::free(&ring, 3, &[(0, 1), (1, 1)]).unwrap();
        let phi = WMat::from_fn(&ring, 2, 2, |r, c| {
            if r != c {
                WittVector::one(&ring, 3)
            } else {
                WittVector::zero(&ring, 3)
            }
        });
        let d = Display::validate(&module, phi).unwrap();
        let res = zink_is_nilpotent(&zink_from_display(&d).unwrap()).unwrap();
        assert!(res.nilpotent);
        assert_eq!(res.witness, Some(2));
        // Ordinary-type diag over F_2: not nilpotent.
        let phi = WMat::identity(&ring, 2, 3);
        let d = Display::validate(&module, phi).unwrap();
        let res = zink_is_nilpotent(&zink_from_display(&d).unwrap()).unwrap();
        assert!(!res.nilpotent);
    }

    #[test]
    fn image_chain_stabilizes_within_rank_steps() {
        // Over fields the image chain of twisted products strictly
        // decreases until stable; enumerate all 2×2 reductions over F_2
        // and F_3, and sampled 3×3 over F_4.
        for ring in [f2(), Ring::zmod(3, 1).unwrap()] {
            let elems = ring.enumerate(crate::ring::DEFAULT_ENUM_CAP).unwrap();
            let n = 2usize;
            let total = elems.len().pow((n * n) as u32);
            for idx in 0..total {
                let mut k = idx;
                let mut mat = vec![vec![ring.zero(); n]; n];
                for r in 0..n {
                    for c in 0..n {
                        mat[r][c] = elems[k % elems.len()].clone();
                        k /= elems.len();
                    }
                }
                check_chain(&ring, &mat, n);
            }
        }
        let f4 = Ring::galois_default(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = 3usize;
            let mat: Vec<Vec<RingElement>> = (0..n)
                .map(|_| (0..n).map(|_| f4.sample(&mut rng)).collect())
                .collect();
            check_chain(&f4, &mat, n);
        }

        fn check_chain(ring: &Ring, mat: &[Vec<RingElement>], n: usize) {
            let p = ring.prime();
            let mut prod = mat.to_vec();
            let mut ranks = vec![rmat_rank(&prod).unwrap()];
            for k in 1..=2 * n {
                let twisted = rmat_twist(mat, p.pow(k as u32));
                prod = rmat_mul(&twisted, &prod).unwrap();
                ranks.push(rmat_rank(&prod).unwrap());
            }
            // Once the rank repeats it must stay constant.
            let mut stable_at = None;
            for i in 1..ranks.len() {
                if ranks[i] == ranks[i - 1] {
                    stable_at = Some(i);
                    break;
                }
            }
            let s = stable_at.expect("chain must stabilize within rank steps");
            assert!(s <= n, "stabilization after rank steps: {ranks:?}");
            for i in s..ranks.len() {
                assert_eq!(ranks[i], ranks[s - 1], "chain left plateau: {ranks:?}");
            }
        }
    }

    #[test]
    fn morphism_transport() {
        // Morphisms generated by the display-group relation transport to
        // Zink morphisms; a generic non-morphism fails.
        let ring = f2();
        let module = GradedModule::free(&ring, 4, &[(0, 1), (1, 1)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut transported = 0;
        while transported < 12 {
            let d = random_display(&module, &mut rng);
            let psi = crate::graded::tests::random_endo(&module, &mut rng);
            let (Ok(tau), Ok(sigma)) = (psi.tau_matrix(), psi.sigma_matrix()) else {
                continue;
            };
            let Ok(sigma_inv) = sigma.inverse() else {
                continue;
            };
            let phi2 = tau.mul(d.phi()).unwrap().mul(&sigma_inv).unwrap();
            let Ok(d2) = Display::validate(&module, phi2) else {
                continue;
            };
            assert!(crate::display::display_morphism_check(&psi, &d, &d2).unwrap());
            let z = zink_from_display(&d).unwrap();
            let z2 = zink_from_display(&d2).unwrap();
            assert!(zink_morphism_check(&tau, &z, &z2).unwrap());
            transported += 1;
        }
        // Identity between two unrelated displays is generically not a
        // morphism.
        let mut failures = 0;
        for _ in 0..20 {
            let d = random_display(&module, &mut rng);
            let d2 = random_display(&module, &mut rng);
            let id = GradedMorphism::identity(&module);
            let ok_display = crate::display::display_morphism_check(&id, &d, &d2).unwrap();
            let z = zink_from_display(&d).unwrap();
            let z2 = zink_from_display(&d2).unwrap();
            let ok_zink =
                zink_morphism_check(&id.tau_matrix().unwrap(), &z, &z2).unwrap();
            assert_eq!(ok_display, ok_zink);
            if !ok_zink {
                failures += 1;
            }
        }
        assert!(failures > 0);
    }
}
