//! Dense matrices over W_m(R) and over the graded ring W(R)^⊕, plus Smith
//! normal form over W_m(k) with minimal-valuation pivoting.

use crate::error::{Error, Result};
use crate::frame::{frame_add, frame_mul, frame_neg, FrameElement};
use crate::ring::Ring;
use crate::witt::{
    div_p_pow, frobenius, witt_add, witt_mul, witt_sub, witt_val, Valuation, WittVector,
};

/// Row-major matrix of Witt vectors sharing one ring handle.
#[derive(Clone, PartialEq, Eq)]
pub struct WMat {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<WittVector>,
}

impl std::fmt::Debug for WMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "WMat {}x{} over {} [", self.rows, self.cols, self.ring)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{:?} ", self.at(r, c))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl WMat {
    pub fn new(ring: &Ring, rows: usize, cols: usize, data: Vec<WittVector>) -> Result<WMat> {
        if data.len() != rows * cols {
            return Err(Error::Invalid("matrix shape mismatch".into()));
        }
        for w in &data {
            if w.ring() != ring {
                return Err(Error::RingMismatch);
            }
        }
        Ok(WMat {
            ring: ring.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn from_fn(
        ring: &Ring,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> WittVector,
    ) -> WMat {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        WMat {
            ring: ring.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn zero(ring: &Ring, rows: usize, cols: usize, len: usize) -> WMat {
        WMat::from_fn(ring, rows, cols, |_, _| WittVector::zero(ring, len))
    }

    pub fn identity(ring: &Ring, n: usize, len: usize) -> WMat {
        WMat::from_fn(ring, n, n, |r, c| {
            if r == c {
                WittVector::one(ring, len)
            } else {
                WittVector::zero(ring, len)
            }
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &WittVector {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: WittVector) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[WittVector] {
        &self.data
    }

    /// Minimum certified length across entries.
    pub fn min_len(&self) -> usize {
        self.data.iter().map(|w| w.len()).min().unwrap_or(0)
    }

    pub fn truncate(&self, len: usize) -> WMat {
        WMat {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|w| w.truncate(len)).collect(),
        }
    }

    pub fn transpose(&self) -> WMat {
        WMat::from_fn(&self.ring, self.cols, self.rows, |r, c| {
            self.at(c, r).clone()
        })
    }

    pub fn map(&self, f: impl Fn(&WittVector) -> Result<WittVector>) -> Result<WMat> {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>>>()?;
        WMat::new(&self.ring, self.rows, self.cols, data)
    }

    pub fn frobenius(&self) -> Result<WMat> {
        self.map(frobenius)
    }

    pub fn add(&self, other: &WMat) -> Result<WMat> {
        self.zip(other, witt_add)
    }

    pub fn sub(&self, other: &WMat) -> Result<WMat> {
        self.zip(other, witt_sub)
    }

    fn zip(
        &self,
        other: &WMat,
        f: impl Fn(&WittVector, &WittVector) -> Result<WittVector>,
    ) -> Result<WMat> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Invalid("matrix shape mismatch".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f(a, b))
            .collect::<Result<Vec<_>>>()?;
        WMat::new(&self.ring, self.rows, self.cols, data)
    }

    pub fn mul(&self, other: &WMat) -> Result<WMat> {
        if self.cols != other.rows {
            return Err(Error::Invalid("matrix shape mismatch in product".into()));
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc: Option<WittVector> = None;
                for k in 0..self.cols {
                    let term = witt_mul(self.at(r, k), other.at(k, c))?;
                    acc = Some(match acc {
                        None => term,
                        Some(a) => witt_add(&a, &term)?,
                    });
                }
                data.push(acc.expect("nonzero inner dimension"));
            }
        }
        WMat::new(&self.ring, self.rows, other.cols, data)
    }

    pub fn mul_vec(&self, v: &[WittVector]) -> Result<Vec<WittVector>> {
        if v.len() != self.cols {
            return Err(Error::Invalid("vector length mismatch".into()));
        }
        let mut out = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut acc: Option<WittVector> = None;
            for k in 0..self.cols {
                let term = witt_mul(self.at(r, k), &v[k])?;
                acc = Some(match acc {
                    None => term,
                    Some(a) => witt_add(&a, &term)?,
                });
            }
            out.push(acc.expect("nonzero inner dimension"));
        }
        Ok(out)
    }

    pub fn scale(&self, s: &WittVector) -> Result<WMat> {
        self.map(|w| witt_mul(w, s))
    }

    /// Cofactor-expansion determinant; guarded to n ≤ 8.
    pub fn det(&self) -> Result<WittVector> {
        if self.rows != self.cols {
            return Err(Error::Invalid("determinant of non-square matrix".into()));
        }
        if self.rows > 8 {
            return Err(Error::SizeCap("determinant guarded to n ≤ 8".into()));
        }
        det_rec(self)
    }

    pub fn is_invertible(&self) -> bool {
        self.det().map(|d| d.is_unit()).unwrap_or(false)
    }

    /// Gauss-Jordan inverse over the local ring W_m(R): pivots must be
    /// units; a column without a unit pivot means the matrix is singular.
    pub fn inverse(&self) -> Result<WMat> {
        if self.rows != self.cols {
            return Err(Error::NotInvertible);
        }
        let n = self.rows;
        let len = self.min_len();
        let mut a: Vec<Vec<WittVector>> = (0..n)
            .map(|r| (0..n).map(|c| self.at(r, c).truncate(len)).collect())
            .collect();
        let mut inv: Vec<Vec<WittVector>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        if r == c {
                            WittVector::one(&self.ring, len)
                        } else {
                            WittVector::zero(&self.ring, len)
                        }
                    })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let pivot_row = (col..n)
                .find(|&r| a[r][col].is_unit())
                .ok_or(Error::NotInvertible)?;
            a.swap(col, pivot_row);
            inv.swap(col, pivot_row);
            let pinv = a[col][col].inv()?;
            for c in 0..n {
                a[col][c] = witt_mul(&a[col][c], &pinv)?;
                inv[col][c] = witt_mul(&inv[col][c], &pinv)?;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col].clone();
                for c in 0..n {
                    let ta = witt_mul(&factor, &a[col][c])?;
                    a[r][c] = witt_sub(&a[r][c], &ta)?;
                    let ti = witt_mul(&factor, &inv[col][c])?;
                    inv[r][c] = witt_sub(&inv[r][c], &ti)?;
                }
            }
        }
        let data = inv.into_iter().flatten().collect();
        WMat::new(&self.ring, n, n, data)
    }

    /// Entrywise agreement on certified prefixes.
    pub fn agrees_with(&self, other: &WMat) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| a.agrees_with(b))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|w| w.is_zero())
    }
}

fn det_rec(m: &WMat) -> Result<WittVector> {
    let n = m.rows();
    let len = m.min_len();
    if n == 1 {
        return Ok(m.at(0, 0).clone());
    }
    let mut acc = WittVector::zero(m.ring(), len);
    for c in 0..n {
        if m.at(0, c).is_zero() {
            continue;
        }
        let minor = WMat::from_fn(m.ring(), n - 1, n - 1, |r2, c2| {
            m.at(r2 + 1, if c2 < c { c2 } else { c2 + 1 }).clone()
        });
        let term = witt_mul(m.at(0, c), &det_rec(&minor)?)?;
        acc = if c % 2 == 0 {
            witt_add(&acc, &term)?
        } else {
            witt_sub(&acc, &term)?
        };
    }
    Ok(acc)
}

/// Smith normal form over W_m(k), k a perfect field. Returns the p-power
/// exponents of the elementary divisors in non-decreasing order. An
/// entry that vanishes to full precision cannot serve as a pivot and
/// raises `InsufficientPrecision`; each division by p^v spends v
/// certified coefficients, so the exponents come with an honest ledger.
pub fn smith_exponents(mat: &WMat) -> Result<Vec<u32>> {
    if !mat.ring().is_perfect_char_p() {
        return Err(Error::UnsupportedRing(format!(
            "Smith normal form needs a perfect field, got {}",
            mat.ring()
        )));
    }
    let mut work: Vec<Vec<WittVector>> = (0..mat.rows())
        .map(|r| (0..mat.cols()).map(|c| mat.at(r, c).clone()).collect())
        .collect();
    let steps = mat.rows().min(mat.cols());
    let mut exps = Vec::with_capacity(steps);
    for step in 0..steps {
        // Minimal-valuation pivot in the remaining block.
        let mut best: Option<(usize, usize, usize)> = None;
        for r in step..mat.rows() {
            for c in step..mat.cols() {
                if let Valuation::Exact(v) = witt_val(&work[r][c])? {
                    if best.map_or(true, |(_, _, bv)| v < bv) {
                        best = Some((r, c, v));
                    }
                }
            }
        }
        let (pr, pc, v) = best.ok_or_else(|| {
            Error::InsufficientPrecision(format!(
                "no certified pivot in Smith step {step}: remaining block vanishes to precision"
            ))
        })?;
        work.swap(step, pr);
        for row in work.iter_mut() {
            row.swap(step, pc);
        }
        // Normalize the pivot row so the pivot becomes p^v.
        let unit = div_p_pow(&work[step][step], v)?;
        let uinv = unit.inv()?;
        for c in step..mat.cols() {
            work[step][c] = witt_mul(&work[step][c], &uinv)?;
        }
        // Row elimination: every entry below the pivot has valuation ≥ v,
        // so the quotient q = entry/p^v is integral and
        // row_r := row_r − q·(row_step/p^v)·p^v = row_r − q·row_step.
        for r in step + 1..mat.rows() {
            let val = witt_val(&work[r][step])?;
            let q = match val {
                Valuation::Exact(w) => {
                    debug_assert!(w >= v);
                    div_p_pow(&work[r][step], v)?
                }
                Valuation::AtLeast(l) if l > v => {
                    // Certified divisible: shift the known-zero prefix.
                    div_p_pow(&work[r][step], v)?
                }
                Valuation::AtLeast(_) => continue,
            };
            for c in step..mat.cols() {
                let scaled = witt_mul(&q, &work[step][c])?;
                let common = work[r][c].len().min(scaled.len());
                work[r][c] =
                    witt_sub(&work[r][c].truncate(common), &scaled.truncate(common))?;
            }
        }
        // Column elimination: the column below the pivot is now zero, so
        // subtracting q·col_step only clears the pivot-row entry.
        for c in step + 1..mat.cols() {
            work[step][c] = WittVector::zero(mat.ring(), work[step][c].len());
        }
        exps.push(v as u32);
    }
    Ok(exps)
}

/// Matrix of homogeneous frame elements. Degree bookkeeping lives with the
/// callers (graded morphisms, display-group members); this type supplies
/// the shape-level algebra.
#[derive(Clone, PartialEq, Eq)]
pub struct FMat {
    rows: usize,
    cols: usize,
    data: Vec<FrameElement>,
}

impl std::fmt::Debug for FMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "FMat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{:?} ", self.at(r, c))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl FMat {
    pub fn new(rows: usize, cols: usize, data: Vec<FrameElement>) -> Result<FMat> {
        if data.len() != rows * cols {
            return Err(Error::Invalid("frame matrix shape mismatch".into()));
        }
        Ok(FMat { rows, cols, data })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> FrameElement,
    ) -> FMat {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        FMat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &FrameElement {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FrameElement) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[FrameElement] {
        &self.data
    }

    pub fn mul(&self, other: &FMat) -> Result<FMat> {
        if self.cols != other.rows {
            return Err(Error::Invalid("frame matrix shapes in product".into()));
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc: Option<FrameElement> = None;
                for k in 0..self.cols {
                    let term = frame_mul(self.at(r, k), other.at(k, c))?;
                    acc = Some(match acc {
                        None => term,
                        Some(a) => frame_add(&a, &term)?,
                    });
                }
                data.push(acc.expect("nonzero inner dimension"));
            }
        }
        FMat::new(self.rows, other.cols, data)
    }

    pub fn map_to_witt(
        &self,
        f: impl Fn(&FrameElement) -> Result<WittVector>,
    ) -> Result<WMat> {
        let ring = self.data[0].ring().clone();
        let data = self.data.iter().map(f).collect::<Result<Vec<_>>>()?;
        WMat::new(&ring, self.rows, self.cols, data)
    }

    /// Cofactor determinant with frame arithmetic. Homogeneous inputs with
    /// a consistent degree pattern yield a degree-0 result.
    pub fn det(&self) -> Result<FrameElement> {
        if self.rows != self.cols {
            return Err(Error::Invalid("determinant of non-square matrix".into()));
        }
        if self.rows > 6 {
            return Err(Error::SizeCap("frame determinant guarded to n ≤ 6".into()));
        }
        fmat_det(self)
    }

    /// Adjugate-based inverse: entries of the inverse carry the transposed
    /// degree pattern. The determinant must be a degree-0 unit.
    pub fn inverse(&self) -> Result<FMat> {
        let n = self.rows;
        if n != self.cols {
            return Err(Error::NotInvertible);
        }
        let det = self.det()?;
        if det.deg() != 0 {
            return Err(Error::Internal("determinant not of degree 0".into()));
        }
        let det_inv = FrameElement::scalar(det.payload().inv()?);
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                // adj[r][c] = (−1)^{r+c} · minor(c, r)
                let mut cof = if n == 1 {
                    FrameElement::one(self.data[0].ring(), self.data[0].payload().len())
                } else {
                    let minor = FMat::from_fn(n - 1, n - 1, |r2, c2| {
                        self.at(
                            if r2 < c { r2 } else { r2 + 1 },
                            if c2 < r { c2 } else { c2 + 1 },
                        )
                        .clone()
                    });
                    fmat_det(&minor)?
                };
                if (r + c) % 2 == 1 {
                    cof = frame_neg(&cof)?;
                }
                data.push(frame_mul(&det_inv, &cof)?);
            }
        }
        FMat::new(n, n, data)
    }

    pub fn agrees_with(&self, other: &FMat) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| a.agrees_with(b))
    }
}

fn fmat_det(m: &FMat) -> Result<FrameElement> {
    let n = m.rows();
    if n == 1 {
        return Ok(m.at(0, 0).clone());
    }
    let mut acc: Option<FrameElement> = None;
    for c in 0..n {
        let minor = FMat::from_fn(n - 1, n - 1, |r2, c2| {
            m.at(r2 + 1, if c2 < c { c2 } else { c2 + 1 }).clone()
        });
        let mut term = frame_mul(m.at(0, c), &fmat_det(&minor)?)?;
        if c % 2 == 1 {
            term = frame_neg(&term)?;
        }
        acc = Some(match acc {
            None => term,
            Some(a) => frame_add(&a, &term)?,
        });
    }
    Ok(acc.expect("n ≥ 2"))
}
