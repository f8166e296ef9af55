//! Deterministic sparse linear algebra over ℚ.
//!
//! Everything downstream — Gröbner reduction budgets aside, alternating
//! subcomplexes, spectral sequence pages, Betti numbers — bottoms out in
//! ranks, kernels, images and subquotients of matrices with rational
//! entries, so those primitives live here once. Two properties matter more
//! than speed at the scale this crate targets:
//!
//! * **Exactness.** Entries are [`Rat`] (arbitrary-precision rationals);
//!   no pivot threshold, no rounding.
//! * **Determinism.** Row reduction picks pivots by a fixed Markowitz-style
//!   rule (sparsest candidate row in the leftmost unresolved column, lowest
//!   row index on ties) and intermediate rows are rescaled to coprime
//!   integer entries, so the same input always produces the same reduced
//!   echelon form — and hence byte-identical bases — across runs. The
//!   reduced echelon form is of course unique anyway; the fixed rule keeps
//!   the *path* there, and the intermediate sizes, reproducible.
//!
//! Returned bases are rows/columns of the reduced echelon form: leading
//! entries 1, pivot columns cleared, ordered by pivot position.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::Rat;

/// Errors from shape or inclusion violations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("inclusion violation: the candidate image is not contained in the candidate kernel")]
    InclusionViolation,
}

/// A sparse matrix over ℚ with explicit shape. Zero entries are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rat>,
}

/// A row-reduced echelon form: `rows[i]` is a sparse row whose leading
/// (lowest-index) entry is 1 and sits in column `pivots[i]`; pivot columns
/// are cleared in all other rows, and `pivots` is strictly increasing.
#[derive(Clone, Debug)]
pub struct Rref {
    pub pivots: Vec<usize>,
    pub rows: Vec<BTreeMap<usize, Rat>>,
}

impl SparseMatrix {
    /// The zero matrix of the given shape.
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: BTreeMap::new() }
    }

    /// The identity matrix of size `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.entries.insert((i, i), Rat::one());
        }
        m
    }

    /// Builds a matrix from `(row, col, value)` triplets. Duplicate
    /// positions accumulate; out-of-range positions are an error.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Result<Self, LinalgError>
    where
        I: IntoIterator<Item = (usize, usize, Rat)>,
    {
        let mut m = Self::zero(rows, cols);
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(LinalgError::DimensionMismatch(format!(
                    "entry ({r},{c}) outside a {rows}x{cols} matrix"
                )));
            }
            let cur = m.entries.remove(&(r, c)).unwrap_or_else(Rat::zero) + v;
            if !cur.is_zero() {
                m.entries.insert((r, c), cur);
            }
        }
        Ok(m)
    }

    /// Builds a matrix from dense integer rows (test and fixture helper).
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    m.entries.insert((i, j), crate::rational::rat(v));
                }
            }
        }
        m
    }

    /// Builds the matrix whose columns are the given dense vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Rat>]) -> Self {
        let mut m = Self::zero(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    m.entries.insert((i, j), v.clone());
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of stored (nonzero) entries.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// The entry at `(r, c)` (zero if not stored).
    pub fn get(&self, r: usize, c: usize) -> Rat {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(Rat::zero)
    }

    /// Sets the entry at `(r, c)`, dropping explicit zeros.
    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    /// Iterates stored entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Rat)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    /// The `c`-th column as a dense vector.
    pub fn column(&self, c: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.rows];
        for (&(r, cc), val) in &self.entries {
            if cc == c {
                v[r] = val.clone();
            }
        }
        v
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut m = SparseMatrix::zero(self.cols, self.rows);
        for (&(r, c), v) in &self.entries {
            m.entries.insert((c, r), v.clone());
        }
        m
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut other_rows: Vec<Vec<(usize, &Rat)>> = vec![Vec::new(); other.rows];
        for (&(r, c), v) in &other.entries {
            other_rows[r].push((c, v));
        }
        let mut out = SparseMatrix::zero(self.rows, other.cols);
        for (&(r, k), a) in &self.entries {
            for &(c, b) in &other_rows[k] {
                let cur = out.entries.remove(&(r, c)).unwrap_or_else(Rat::zero) + a * b;
                if !cur.is_zero() {
                    out.entries.insert((r, c), cur);
                }
            }
        }
        Ok(out)
    }

    /// Matrix sum `self + other`.
    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for (&(r, c), v) in &other.entries {
            let cur = out.entries.remove(&(r, c)).unwrap_or_else(Rat::zero) + v;
            if !cur.is_zero() {
                out.entries.insert((r, c), cur);
            }
        }
        Ok(out)
    }

    /// Scales every entry by `s`.
    pub fn scale(&self, s: &Rat) -> SparseMatrix {
        if s.is_zero() {
            return SparseMatrix::zero(self.rows, self.cols);
        }
        let mut out = self.clone();
        for v in out.entries.values_mut() {
            *v = &*v * s;
        }
        out
    }

    /// Applies the matrix to a dense vector.
    pub fn apply(&self, v: &[Rat]) -> Result<Vec<Rat>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "cannot apply {}x{} to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![Rat::zero(); self.rows];
        for (&(r, c), a) in &self.entries {
            if !v[c].is_zero() {
                out[r] += a * &v[c];
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form.
    pub fn rref(&self) -> Rref {
        // Work rows as sparse col -> value maps, integer-normalized.
        let mut work: Vec<BTreeMap<usize, Rat>> = Vec::new();
        {
            let mut grouped: BTreeMap<usize, BTreeMap<usize, Rat>> = BTreeMap::new();
            for (&(r, c), v) in &self.entries {
                grouped.entry(r).or_default().insert(c, v.clone());
            }
            for (_, mut row) in grouped {
                normalize_row(&mut row);
                work.push(row);
            }
        }
        let mut reduced: Vec<(usize, BTreeMap<usize, Rat>)> = Vec::new();
        for col in 0..self.cols {
            // Markowitz-style pivot: among rows starting in `col`, take the
            // sparsest; ties go to the earliest row (deterministic).
            let mut best: Option<(usize, usize)> = None; // (nnz, index)
            for (i, row) in work.iter().enumerate() {
                if row.keys().next() == Some(&col) {
                    let nnz = row.len();
                    if best.map_or(true, |(bn, _)| nnz < bn) {
                        best = Some((nnz, i));
                    }
                }
            }
            let Some((_, idx)) = best else { continue };
            let piv = work.remove(idx);
            let piv_lead = piv[&col].clone();
            for row in &mut work {
                if let Some(coef) = row.get(&col).cloned() {
                    let factor = &coef / &piv_lead;
                    row_axpy(row, &factor, &piv);
                    normalize_row(row);
                }
            }
            work.retain(|row| !row.is_empty());
            reduced.push((col, piv));
        }
        // Back-substitution: leading entries to 1, clear pivot columns above.
        for i in (0..reduced.len()).rev() {
            let (col, mut row) = reduced[i].clone();
            let lead = row[&col].clone();
            if !lead.is_one() {
                for v in row.values_mut() {
                    *v = &*v / &lead;
                }
            }
            for j in 0..i {
                if let Some(coef) = reduced[j].1.get(&col).cloned() {
                    row_axpy(&mut reduced[j].1, &coef, &row);
                }
            }
            reduced[i].1 = row;
        }
        Rref {
            pivots: reduced.iter().map(|(c, _)| *c).collect(),
            rows: reduced.into_iter().map(|(_, r)| r).collect(),
        }
    }

    /// Rank over ℚ.
    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the kernel (null space), one dense vector per free column,
    /// in increasing free-column order; the free coordinate is 1.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let rref = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &rref.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (row, &p) in rref.rows.iter().zip(&rref.pivots) {
                if let Some(coef) = row.get(&free) {
                    v[p] = -coef.clone();
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of the column space, as the reduced echelon form of the
    /// transpose: dense vectors in ℚ^rows, leading entries 1.
    pub fn image_basis(&self) -> Vec<Vec<Rat>> {
        let rref = self.transpose().rref();
        rref.rows
            .iter()
            .map(|row| {
                let mut v = vec![Rat::zero(); self.rows];
                for (&c, val) in row {
                    v[c] = val.clone();
                }
                v
            })
            .collect()
    }
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `row -= factor * other`, dropping zeros.
fn row_axpy(row: &mut BTreeMap<usize, Rat>, factor: &Rat, other: &BTreeMap<usize, Rat>) {
    for (&c, v) in other {
        let cur = row.remove(&c).unwrap_or_else(Rat::zero) - factor * v;
        if !cur.is_zero() {
            row.insert(c, cur);
        }
    }
}

/// Rescales a row by a positive rational so its entries become coprime
/// integers with a positive leading entry. Keeps intermediate elimination
/// rows small; does not change the row space.
fn normalize_row(row: &mut BTreeMap<usize, Rat>) {
    if row.is_empty() {
        return;
    }
    let mut denom_lcm = BigInt::one();
    let mut numer_gcd = BigInt::zero();
    for v in row.values() {
        denom_lcm = denom_lcm.lcm(v.denom());
        numer_gcd = numer_gcd.gcd(v.numer());
    }
    if numer_gcd.is_zero() {
        return;
    }
    let mut scale = Rat::new(denom_lcm, numer_gcd);
    let lead_negative = row.values().next().map(Signed::is_negative).unwrap_or(false);
    if lead_negative {
        scale = -scale;
    }
    if !scale.is_one() {
        for v in row.values_mut() {
            *v = &*v * &scale;
        }
    }
}

/// Dimension of the subquotient `ker(kernel_of) / im(image_of)`.
///
/// Validates that the composite `kernel_of * image_of` vanishes, i.e. that
/// the image really is contained in the kernel.
pub fn subquotient_dim(
    kernel_of: &SparseMatrix,
    image_of: &SparseMatrix,
) -> Result<usize, LinalgError> {
    if kernel_of.cols() != image_of.rows() {
        return Err(LinalgError::DimensionMismatch(format!(
            "subquotient of a {}x{} kernel map and a {}x{} image map",
            kernel_of.rows(),
            kernel_of.cols(),
            image_of.rows(),
            image_of.cols()
        )));
    }
    if !kernel_of.mul(image_of)?.is_zero() {
        return Err(LinalgError::InclusionViolation);
    }
    Ok(kernel_of.cols() - kernel_of.rank() - image_of.rank())
}

/// Solves `A * X = B` exactly. Returns `None` if the system is
/// inconsistent; free variables are set to zero, so the solution is
/// deterministic (and unique when `A` has full column rank).
pub fn solve(a: &SparseMatrix, b: &SparseMatrix) -> Result<Option<SparseMatrix>, LinalgError> {
    if a.rows() != b.rows() {
        return Err(LinalgError::DimensionMismatch(format!(
            "cannot solve {}x{} X = {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let mut aug = SparseMatrix::zero(a.rows(), a.cols() + b.cols());
    for (r, c, v) in a.iter() {
        aug.set(r, c, v.clone());
    }
    for (r, c, v) in b.iter() {
        aug.set(r, a.cols() + c, v.clone());
    }
    let rref = aug.rref();
    let mut x = SparseMatrix::zero(a.cols(), b.cols());
    for (row, &p) in rref.rows.iter().zip(&rref.pivots) {
        if p >= a.cols() {
            return Ok(None); // pivot in the right-hand block: inconsistent
        }
        for (&c, v) in row {
            if c >= a.cols() {
                x.set(p, c - a.cols(), v.clone());
            }
        }
    }
    Ok(Some(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Plain dense Gaussian elimination rank, used as an independent oracle.
    fn dense_rank(m: &SparseMatrix) -> usize {
        let mut a: Vec<Vec<Rat>> =
            (0..m.rows()).map(|r| (0..m.cols()).map(|c| m.get(r, c)).collect()).collect();
        let mut rank = 0;
        for col in 0..m.cols() {
            let Some(p) = (rank..m.rows()).find(|&r| !a[r][col].is_zero()) else { continue };
            a.swap(rank, p);
            let lead = a[rank][col].clone();
            for r in 0..m.rows() {
                if r != rank && !a[r][col].is_zero() {
                    let f = &a[r][col] / &lead;
                    for c in col..m.cols() {
                        let sub = &f * &a[rank][c];
                        a[r][c] = &a[r][c] - &sub;
                    }
                }
            }
            rank += 1;
            if rank == m.rows() {
                break;
            }
        }
        rank
    }

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> SparseMatrix {
        let mut m = SparseMatrix::zero(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if rng.random_bool(0.4) {
                    m.set(r, c, ratio(rng.random_range(-6..=6), rng.random_range(1..=3)));
                }
            }
        }
        m
    }

    #[test]
    fn rank_of_rank_one_matrix() {
        let m = SparseMatrix::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn identity_rank_and_image() {
        let m = SparseMatrix::identity(3);
        assert_eq!(m.rank(), 3);
        let img = m.image_basis();
        assert_eq!(img.len(), 3);
        for (i, v) in img.iter().enumerate() {
            for (j, x) in v.iter().enumerate() {
                assert_eq!(*x, if i == j { rat(1) } else { rat(0) });
            }
        }
    }

    #[test]
    fn kernel_of_zero_map() {
        let m = SparseMatrix::zero(2, 3);
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 3);
        for (i, v) in ker.iter().enumerate() {
            assert_eq!(v[i], rat(1));
        }
    }

    #[test]
    fn kernel_and_image_of_rank_one_matrix() {
        let m = SparseMatrix::from_int_rows(&[&[1, 2], &[2, 4]]);
        let ker = m.kernel_basis();
        assert_eq!(ker, vec![vec![rat(-2), rat(1)]]);
        let img = m.image_basis();
        assert_eq!(img, vec![vec![rat(1), rat(2)]]);
    }

    #[test]
    fn rref_is_canonical() {
        // Hand-reduced: [[2,4,6],[1,2,4]] -> [[1,2,0],[0,0,1]].
        let m = SparseMatrix::from_int_rows(&[&[2, 4, 6], &[1, 2, 4]]);
        let r = m.rref();
        assert_eq!(r.pivots, vec![0, 2]);
        assert_eq!(r.rows[0], BTreeMap::from([(0, rat(1)), (1, rat(2))]));
        assert_eq!(r.rows[1], BTreeMap::from([(2, rat(1))]));
    }

    #[test]
    fn subquotient_of_zero_maps() {
        let a = SparseMatrix::zero(2, 2);
        let b = SparseMatrix::zero(2, 2);
        assert_eq!(subquotient_dim(&a, &b).unwrap(), 2);
    }

    #[test]
    fn subquotient_circle_boundary() {
        // Circle as two arcs between two vertices: ∂e1 = v1 - v0, ∂e2 = v0 - v1.
        let d1 = SparseMatrix::from_int_rows(&[&[-1, 1], &[1, -1]]);
        let d2 = SparseMatrix::zero(2, 0);
        assert_eq!(subquotient_dim(&d1, &d2).unwrap(), 1);
    }

    #[test]
    fn subquotient_rejects_non_inclusion() {
        let a = SparseMatrix::from_int_rows(&[&[1, 0]]);
        let b = SparseMatrix::from_int_rows(&[&[1], &[0]]);
        assert_eq!(subquotient_dim(&a, &b), Err(LinalgError::InclusionViolation));
    }

    #[test]
    fn subquotient_rejects_shape_mismatch() {
        let a = SparseMatrix::zero(2, 3);
        let b = SparseMatrix::zero(2, 2);
        assert!(matches!(subquotient_dim(&a, &b), Err(LinalgError::DimensionMismatch(_))));
    }

    #[test]
    fn solve_invertible_system() {
        let a = SparseMatrix::from_int_rows(&[&[1, 2], &[3, 4]]);
        let x = solve(&a, &SparseMatrix::identity(2)).unwrap().unwrap();
        assert_eq!(a.mul(&x).unwrap(), SparseMatrix::identity(2));
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = SparseMatrix::from_int_rows(&[&[1], &[1]]);
        let b = SparseMatrix::from_int_rows(&[&[0], &[1]]);
        assert_eq!(solve(&a, &b).unwrap(), None);
    }

    #[test]
    fn product_shapes_are_checked() {
        let a = SparseMatrix::zero(2, 3);
        assert!(a.mul(&SparseMatrix::zero(2, 3)).is_err());
        assert!(a.mul(&SparseMatrix::zero(3, 5)).is_ok());
    }

    #[test]
    fn random_matrices_match_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..40 {
            let rows = rng.random_range(0..7);
            let cols = rng.random_range(0..7);
            let m = random_matrix(&mut rng, rows, cols);
            let rank = m.rank();
            assert_eq!(rank, dense_rank(&m), "rank oracle mismatch: {m:?}");
            assert_eq!(rank, m.transpose().rank(), "rank(M) != rank(M^T): {m:?}");
            let ker = m.kernel_basis();
            assert_eq!(rank + ker.len(), cols, "rank-nullity violated: {m:?}");
            for v in &ker {
                assert!(m.apply(v).unwrap().iter().all(Rat::is_zero), "kernel vector not killed");
            }
            assert_eq!(m.image_basis().len(), rank);
        }
    }

    #[test]
    fn random_solves_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..25 {
            let rows = rng.random_range(1..6);
            let inner = rng.random_range(1..6);
            let cols = rng.random_range(1..4);
            let a = random_matrix(&mut rng, rows, inner);
            let x = random_matrix(&mut rng, inner, cols);
            let b = a.mul(&x).unwrap();
            // A consistent system by construction: the returned solution
            // need not equal x, but must satisfy the equation exactly.
            let sol = solve(&a, &b).unwrap().expect("consistent by construction");
            assert_eq!(a.mul(&sol).unwrap(), b);
        }
    }
}
