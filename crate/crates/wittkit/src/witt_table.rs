//! Universal Witt sum/product polynomials with exact integer coefficients.
//!
//! The table is an independent test oracle for the ghost-coordinate
//! arithmetic in [`crate::witt`]: S_n and P_n are solved from the
//! recursions w_n(S) = w_n(X) + w_n(Y) and w_n(P) = w_n(X)·w_n(Y) with
//! exact division by p^n at each level. Construction is memoized behind a
//! process-wide lock.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::RingElement;
use crate::witt::WittVector;

/// Sparse multivariate polynomial over Z in variables X_0..X_{m−1},
/// Y_0..Y_{m−1} (Y_j has index m + j). BTreeMap keys keep iteration
/// deterministic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u16>, BigInt>,
}

impl IntPoly {
    pub fn zero(nvars: usize) -> IntPoly {
        IntPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn var(nvars: usize, idx: usize) -> IntPoly {
        let mut exps = vec![0u16; nvars];
        exps[idx] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exps, BigInt::from(1));
        IntPoly { nvars, terms }
    }

    fn insert(&mut self, exps: Vec<u16>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        let mut out = IntPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let exps: Vec<u16> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert(exps, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        let mut out = IntPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.insert(e.clone(), c * k);
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> IntPoly {
        let mut base = self.clone();
        let mut acc = IntPoly::zero(self.nvars);
        acc.insert(vec![0; self.nvars], BigInt::from(1));
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Exact division by an integer; errors if any coefficient resists.
    pub fn div_exact(&self, k: &BigInt) -> Result<IntPoly> {
        let mut out = IntPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if (c % k) != BigInt::zero() {
                return Err(Error::Internal(format!(
                    "inexact division of Witt polynomial coefficient {c} by {k}"
                )));
            }
            out.insert(e.clone(), c / k);
        }
        Ok(out)
    }

    /// Evaluate on ring elements with cached variable powers.
    pub fn eval(&self, vals: &[RingElement]) -> Result<RingElement> {
        assert_eq!(vals.len(), self.nvars);
        let ring = vals[0].ring().clone();
        let charac = BigInt::from(ring.characteristic());
        // Per-variable power cache.
        let mut pow_cache: Vec<Vec<RingElement>> =
            vals.iter().map(|v| vec![ring.one(), v.clone()]).collect();
        let mut acc = ring.zero();
        for (exps, coeff) in &self.terms {
            let mut c = coeff % &charac;
            if c.is_negative() {
                c += &charac;
            }
            let mut term = ring.from_int(i64::try_from(c).unwrap());
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut pow_cache[i];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap().mul(&vals[i])?;
                    cache.push(next);
                }
                term = term.mul(&cache[e as usize])?;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }
}

/// Ghost polynomial w_n in the X block (offset 0) or Y block (offset m).
fn ghost_poly(p: u64, m: usize, n: usize, offset: usize) -> IntPoly {
    let nvars = 2 * m;
    let mut acc = IntPoly::zero(nvars);
    let mut pj = BigInt::from(1);
    for j in 0..=n {
        let xj = IntPoly::var(nvars, offset + j);
        acc = acc.add(&xj.pow(p.pow((n - j) as u32)).scale(&pj));
        pj *= p;
    }
    acc
}

#[derive(Debug)]
pub struct WittPolyTable {
    pub p: u64,
    pub depth: usize,
    pub sum: Vec<IntPoly>,
    pub prod: Vec<IntPoly>,
}

impl WittPolyTable {
    /// Solve the universal polynomials by the ghost recursion. Guarded to
    /// p ∈ {2, 3, 5} and depth ≤ 4.
    pub fn build(p: u64, depth: usize) -> Result<WittPolyTable> {
        if !matches!(p, 2 | 3 | 5) || depth > 4 || depth == 0 {
            return Err(Error::SizeCap(format!(
                "Witt polynomial table guarded to p ∈ {{2,3,5}}, m ≤ 4; got p={p}, m={depth}"
            )));
        }
        let nvars = 2 * depth;
        let mut sum: Vec<IntPoly> = Vec::with_capacity(depth);
        let mut prod: Vec<IntPoly> = Vec::with_capacity(depth);
        for n in 0..depth {
            let wx = ghost_poly(p, depth, n, 0);
            let wy = ghost_poly(p, depth, n, depth);
            let mut s_target = wx.add(&wy);
            let mut p_target = wx.mul(&wy);
            let mut pj = BigInt::from(1);
            for (j, (sj, pjoly)) in sum.iter().zip(prod.iter()).enumerate().take(n) {
                let e = p.pow((n - j) as u32);
                s_target = s_target.sub(&sj.pow(e).scale(&pj));
                p_target = p_target.sub(&pjoly.pow(e).scale(&pj));
                pj *= p;
            }
            let pn = BigInt::from(p).pow(n as u32);
            sum.push(s_target.div_exact(&pn)?);
            prod.push(p_target.div_exact(&pn)?);
            debug_assert_eq!(sum[n].nvars, nvars);
        }
        Ok(WittPolyTable {
            p,
            depth,
            sum,
            prod,
        })
    }

    /// Memoized access.
    pub fn get(p: u64, depth: usize) -> Result<Arc<WittPolyTable>> {
        static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Arc<WittPolyTable>>>> =
            OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("table cache poisoned");
        if let Some(t) = guard.get(&(p, depth)) {
            return Ok(t.clone());
        }
        let table = Arc::new(WittPolyTable::build(p, depth)?);
        guard.insert((p, depth), table.clone());
        Ok(table)
    }

    fn eval(&self, polys: &[IntPoly], x: &WittVector, y: &WittVector) -> Result<WittVector> {
        let len = x.len().min(y.len()).min(self.depth);
        let ring = x.ring();
        let mut vals = Vec::with_capacity(2 * self.depth);
        for i in 0..self.depth {
            vals.push(if i < len {
                x.coeff(i).clone()
            } else {
                ring.zero()
            });
        }
        for i in 0..self.depth {
            vals.push(if i < len {
                y.coeff(i).clone()
            } else {
                ring.zero()
            });
        }
        let coeffs = polys[..len]
            .iter()
            .map(|poly| poly.eval(&vals))
            .collect::<Result<Vec<_>>>()?;
        WittVector::new(ring, coeffs)
    }

    pub fn eval_sum(&self, x: &WittVector, y: &WittVector) -> Result<WittVector> {
        self.eval(&self.sum, x, y)
    }

    pub fn eval_prod(&self, x: &WittVector, y: &WittVector) -> Result<WittVector> {
        self.eval(&self.prod, x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;
    use crate::witt::{witt_add, witt_mul};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sum_polynomials_for_p2() {
        let t = WittPolyTable::get(2, 2).unwrap();
        // S_0 = X_0 + Y_0
        let mut expect = IntPoly::var(4, 0).add(&IntPoly::var(4, 2));
        assert_eq!(t.sum[0], expect);
        // S_1 = X_1 + Y_1 − X_0·Y_0
        expect = IntPoly::var(4, 1)
            .add(&IntPoly::var(4, 3))
            .sub(&IntPoly::var(4, 0).mul(&IntPoly::var(4, 2)));
        assert_eq!(t.sum[1], expect);
        // P_0 = X_0·Y_0
        assert_eq!(t.prod[0], IntPoly::var(4, 0).mul(&IntPoly::var(4, 2)));
    }

    #[test]
    fn ghost_identity_as_polynomials() {
        // w_n(S_0..S_n) = w_n(X) + w_n(Y) for m ≤ 3.
        for p in [2u64, 3] {
            let m = 3;
            let t = WittPolyTable::get(p, m).unwrap();
            for n in 0..m {
                let mut lhs = IntPoly::zero(2 * m);
                let mut pj = BigInt::from(1);
                for j in 0..=n {
                    lhs = lhs.add(&t.sum[j].pow(p.pow((n - j) as u32)).scale(&pj));
                    pj *= p;
                }
                let rhs = ghost_poly(p, m, n, 0).add(&ghost_poly(p, m, n, m));
                assert_eq!(lhs, rhs, "p={p}, n={n}");
            }
        }
    }

    #[test]
    fn table_reproduces_witt_add_example() {
        let z4 = Ring::zmod(2, 2).unwrap();
        let t = WittPolyTable::get(2, 2).unwrap();
        let x = WittVector::from_ints(&z4, &[1, 0]).unwrap();
        let s = t.eval_sum(&x, &x).unwrap();
        assert_eq!(s, WittVector::from_ints(&z4, &[2, 3]).unwrap());
    }

    #[test]
    fn table_matches_ghost_arithmetic() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for ring in [
            Ring::zmod(2, 3).unwrap(),
            Ring::galois_default(3, 2).unwrap(),
            Ring::zmod(2, 1).unwrap().with_dual_number().unwrap(),
        ] {
            let t = WittPolyTable::get(ring.prime(), 3).unwrap();
            for _ in 0..60 {
                let x = WittVector::sample(&ring, 3, &mut rng);
                let y = WittVector::sample(&ring, 3, &mut rng);
                assert_eq!(t.eval_sum(&x, &y).unwrap(), witt_add(&x, &y).unwrap());
                assert_eq!(t.eval_prod(&x, &y).unwrap(), witt_mul(&x, &y).unwrap());
            }
        }
    }

    #[test]
    fn size_guard() {
        assert!(matches!(
            WittPolyTable::build(7, 2),
            Err(Error::SizeCap(_))
        ));
        assert!(matches!(
            WittPolyTable::build(2, 5),
            Err(Error::SizeCap(_))
        ));
    }
}
