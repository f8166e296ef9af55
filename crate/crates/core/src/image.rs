//! Homology of the image of a finite map from its multiple point spaces.
//!
//! The input is a [`MultiplePointDiagram`]: equivariant chain models of the
//! multiple point spaces `D^1, …, D^kmax` together with the face maps
//! `ε_i : D^k → D^{k-1}` (delete the `i`-th point of a `k`-tuple), or
//! directly their alternating sums `φ = Σ_i (-1)^i ε_i`. From these the
//! module builds the alternating double complex
//!
//! ```text
//! column p  =  Alt C_•(D^{p+1}),      vertical   ∂ (restricted boundary),
//! horizontal φ̂ : column p+1 → column p (restricted alternating sum),
//! ```
//!
//! whose total complex (with the usual `(-1)^q` twist on the horizontal
//! differential) computes the rational homology of the image of the map.
//! Every structural identity is *checked* along the way — failures surface
//! as [`ImageError::NotADoubleComplex`] rather than silent nonsense.
//!
//! Two independent computations are exposed and cross-checked:
//!
//! * [`MultiplePointDiagram::image_betti`] — homology of the total complex,
//! * [`DoubleComplex::spectral_sequence`] — the pages `E^r_{p,q}` of the
//!   column-filtration spectral sequence, with `E^1_{p,q} = A_q(D^{p+1})`
//!   (alternating homology) and `E^∞` antidiagonal sums equal to the total
//!   Betti numbers ([`ImageError::ConvergenceMismatch`] otherwise).
//!
//! [`h1_component_criterion`] is a purely combinatorial shortcut: the
//! involution on `D^2` moves some connected component if and only if
//! `A_0(D^2) ≠ 0`, the entry that feeds first homology of the image.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equivariant::{
    AltSubcomplex, ChainComplex, ComplexDoc, EquivariantComplex, EquivariantError, MatrixDoc,
    ValidationReport,
};
use crate::linalg::{solve, LinalgError, SparseMatrix};
use crate::rational::Rat;
use num_traits::One;

#[derive(Debug, Error)]
pub enum ImageError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("not a double complex: {0}")]
    NotADoubleComplex(String),
    #[error("spectral sequence does not converge to the total homology: {0}")]
    ConvergenceMismatch(String),
    #[error(transparent)]
    Equivariant(#[from] EquivariantError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("invalid diagram document: {0}")]
    Json(String),
}

// ---------------------------------------------------------------------------
// Diagrams of multiple point spaces
// ---------------------------------------------------------------------------

/// How the maps from level `k` down to level `k-1` are specified.
#[derive(Clone, Debug)]
pub enum FaceData {
    /// The `k` face maps `ε_1, …, ε_k`, each one matrix per degree of the
    /// source level (missing degrees are zero).
    Faces(Vec<Vec<SparseMatrix>>),
    /// The alternating sum `φ = Σ (-1)^i ε_i` directly, one matrix per
    /// degree of the source level (missing degrees are zero).
    Phi(Vec<SparseMatrix>),
    /// No maps between these levels (all zero).
    Zero,
}

/// Chain models of `D^1, …, D^kmax` linked by face maps.
///
/// `levels[j]` is the model of `D^{j+1}` and carries an `S_{j+1}` action;
/// the `j`-th face family connects `D^{j+2}` to `D^{j+1}`.
#[derive(Clone, Debug)]
pub struct MultiplePointDiagram {
    levels: Vec<EquivariantComplex>,
    /// Per connecting family: the face maps padded to every source degree,
    /// when given individually (used for law checking).
    faces: Vec<Option<Vec<Vec<SparseMatrix>>>>,
    /// Ambient `φ` per family and source degree.
    phis: Vec<Vec<SparseMatrix>>,
}

impl MultiplePointDiagram {
    pub fn new(
        levels: Vec<EquivariantComplex>,
        face_data: Vec<FaceData>,
    ) -> Result<Self, ImageError> {
        if levels.is_empty() {
            return Err(ImageError::Shape("a diagram needs at least the level D^1".into()));
        }
        for (j, level) in levels.iter().enumerate() {
            if level.k() != j + 1 {
                return Err(ImageError::Shape(format!(
                    "level {} models D^{} and must carry an S_{} action, found k = {}",
                    j,
                    j + 1,
                    j + 1,
                    level.k()
                )));
            }
        }
        if face_data.len() != levels.len() - 1 {
            return Err(ImageError::Shape(format!(
                "{} levels need {} face families, got {}",
                levels.len(),
                levels.len() - 1,
                face_data.len()
            )));
        }
        let mut faces = Vec::with_capacity(face_data.len());
        let mut phis = Vec::with_capacity(face_data.len());
        for (j, data) in face_data.into_iter().enumerate() {
            let source = &levels[j + 1];
            let target = &levels[j];
            let k = j + 2;
            let top = source.complex().top_degree();
            let pad = |given: Vec<SparseMatrix>,
                       what: &str|
             -> Result<Vec<SparseMatrix>, ImageError> {
                if given.len() > top + 1 {
                    return Err(ImageError::Shape(format!(
                        "{what} from D^{k} has {} degree matrices, source top degree is {top}",
                        given.len()
                    )));
                }
                let mut padded = Vec::with_capacity(top + 1);
                for (q, m) in given.into_iter().enumerate() {
                    let (rows, cols) = (target.complex().dim(q), source.complex().dim(q));
                    if m.rows() != rows || m.cols() != cols {
                        return Err(ImageError::Shape(format!(
                            "{what} from D^{k} at degree {q} should be {rows}x{cols}, got \
                             {}x{}",
                            m.rows(),
                            m.cols()
                        )));
                    }
                    padded.push(m);
                }
                for q in padded.len()..=top {
                    padded.push(SparseMatrix::zero(
                        target.complex().dim(q),
                        source.complex().dim(q),
                    ));
                }
                Ok(padded)
            };
            match data {
                FaceData::Faces(families) => {
                    if families.len() != k {
                        return Err(ImageError::Shape(format!(
                            "D^{k} has {k} face maps, got {}",
                            families.len()
                        )));
                    }
                    let padded: Vec<Vec<SparseMatrix>> = families
                        .into_iter()
                        .enumerate()
                        .map(|(i, fam)| pad(fam, &format!("face map e_{}", i + 1)))
                        .collect::<Result<_, _>>()?;
                    let mut phi = Vec::with_capacity(top + 1);
                    for q in 0..=top {
                        let mut sum = SparseMatrix::zero(
                            target.complex().dim(q),
                            source.complex().dim(q),
                        );
                        for (i, fam) in padded.iter().enumerate() {
                            // ε_1 enters with sign -1, ε_2 with +1, …
                            let signed = if i % 2 == 0 {
                                fam[q].scale(&-Rat::one())
                            } else {
                                fam[q].clone()
                            };
                            sum = sum.add(&signed)?;
                        }
                        phi.push(sum);
                    }
                    faces.push(Some(padded));
                    phis.push(phi);
                }
                FaceData::Phi(given) => {
                    phis.push(pad(given, "phi")?);
                    faces.push(None);
                }
                FaceData::Zero => {
                    phis.push(
                        (0..=top)
                            .map(|q| {
                                SparseMatrix::zero(
                                    target.complex().dim(q),
                                    source.complex().dim(q),
                                )
                            })
                            .collect(),
                    );
                    faces.push(None);
                }
            }
        }
        Ok(MultiplePointDiagram { levels, faces, phis })
    }

    pub fn levels(&self) -> &[EquivariantComplex] {
        &self.levels
    }

    pub fn kmax(&self) -> usize {
        self.levels.len()
    }

    /// Checks every law of every level (group action, chain maps) and the
    /// chain-map property of all connecting maps.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (j, level) in self.levels.iter().enumerate() {
            for v in level.validate().violations {
                violations.push(format!("D^{}: {v}", j + 1));
            }
        }
        for j in 0..self.phis.len() {
            let source = self.levels[j + 1].complex();
            let target = self.levels[j].complex();
            let k = j + 2;
            let check = |maps: &[SparseMatrix], what: &str, violations: &mut Vec<String>| {
                for q in 1..=source.top_degree() {
                    let lhs = target.boundary(q).mul(&maps[q]).expect("shapes");
                    let rhs = maps[q - 1].mul(&source.boundary(q)).expect("shapes");
                    if lhs != rhs {
                        violations.push(format!(
                            "{what} from D^{k} does not commute with the boundary at \
                             degree {q}"
                        ));
                    }
                }
            };
            match &self.faces[j] {
                Some(families) => {
                    for (i, fam) in families.iter().enumerate() {
                        check(fam, &format!("face map e_{}", i + 1), &mut violations);
                    }
                }
                None => check(&self.phis[j], "phi", &mut violations),
            }
        }
        ValidationReport { violations }
    }

    /// Restricts everything to the alternating subcomplexes, checking the
    /// double complex identities along the way.
    pub fn double_complex(&self) -> Result<DoubleComplex, ImageError> {
        let columns: Vec<AltSubcomplex> = self
            .levels
            .iter()
            .map(EquivariantComplex::alternating_subcomplex)
            .collect::<Result<_, _>>()?;
        let mut horizontal = Vec::with_capacity(self.phis.len());
        for (j, phi) in self.phis.iter().enumerate() {
            let source = &columns[j + 1];
            let target = &columns[j];
            let src_top = source.complex.top_degree();
            let tgt_top = target.complex.top_degree();
            let mut restricted = Vec::with_capacity(src_top + 1);
            for q in 0..=src_top {
                if q > tgt_top {
                    restricted.push(SparseMatrix::zero(0, source.complex.dim(q)));
                    continue;
                }
                let mapped = phi[q].mul(&source.bases[q])?;
                let inside = solve(&target.bases[q], &mapped)?.ok_or_else(|| {
                    ImageError::NotADoubleComplex(format!(
                        "phi from D^{} at degree {q} does not preserve alternating chains",
                        j + 2
                    ))
                })?;
                restricted.push(inside);
            }
            horizontal.push(restricted);
        }
        let dc = DoubleComplex { columns, horizontal };
        // Restricted phi must be a chain map…
        for j in 0..dc.horizontal.len() {
            let source = &dc.columns[j + 1].complex;
            let target = &dc.columns[j].complex;
            for q in 1..=source.top_degree() {
                let lhs = target.boundary(q).mul(&dc.phi(j, q))?;
                let rhs = dc.phi(j, q - 1).mul(&source.boundary(q))?;
                if lhs != rhs {
                    return Err(ImageError::NotADoubleComplex(format!(
                        "restricted phi from D^{} at degree {q} is not a chain map",
                        j + 2
                    )));
                }
            }
        }
        // …and square to zero.
        for j in 0..dc.horizontal.len().saturating_sub(1) {
            for q in 0..=dc.columns[j + 2].complex.top_degree() {
                let composite = dc.phi(j, q).mul(&dc.phi(j + 1, q))?;
                if !composite.is_zero() {
                    return Err(ImageError::NotADoubleComplex(format!(
                        "phi squared from D^{} at degree {q} is nonzero",
                        j + 3
                    )));
                }
            }
        }
        Ok(dc)
    }

    /// Rational Betti numbers of the image: homology of the total complex.
    pub fn image_betti(&self) -> Result<Vec<usize>, ImageError> {
        Ok(self.double_complex()?.total_complex()?.complex.homology_dims())
    }
}

// ---------------------------------------------------------------------------
// The alternating double complex and its total complex
// ---------------------------------------------------------------------------

/// Columns `Alt C_•(D^{p+1})` with the restricted boundary and the
/// restricted horizontal maps `φ̂`.
#[derive(Clone, Debug)]
pub struct DoubleComplex {
    columns: Vec<AltSubcomplex>,
    /// `horizontal[j][q]` maps column `j+1` to column `j` in degree `q`
    /// (one entry per source degree).
    horizontal: Vec<Vec<SparseMatrix>>,
}

/// The total complex together with its block layout: `blocks[n]` lists
/// `(p, dim, offset)` per column contributing to total degree `n`, in
/// ascending `p` — so filtration subspaces are coordinate prefixes.
#[derive(Clone, Debug)]
pub struct TotalComplex {
    pub complex: ChainComplex,
    blocks: Vec<Vec<(usize, usize, usize)>>,
}

impl TotalComplex {
    /// Number of coordinates of `Tot_n` lying in columns `≤ p`.
    fn prefix_len(&self, n: i64, p: i64) -> usize {
        if n < 0 || p < 0 || n as usize >= self.blocks.len() {
            return 0;
        }
        self.blocks[n as usize]
            .iter()
            .filter(|(bp, _, _)| *bp as i64 <= p)
            .map(|(_, dim, _)| dim)
            .sum()
    }

    fn dim(&self, n: i64) -> usize {
        if n < 0 || n as usize >= self.blocks.len() {
            0
        } else {
            self.complex.dim(n as usize)
        }
    }
}

/// One page of the column-filtration spectral sequence: `dims[p][q]` is
/// `dim E^r_{p,q}`.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralPage {
    pub r: usize,
    pub dims: Vec<Vec<usize>>,
}

/// All pages up to stabilization plus the homology they converge to.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralSequence {
    pub pages: Vec<SpectralPage>,
    pub total_betti: Vec<usize>,
}

impl SpectralSequence {
    /// The stable page `E^∞` (differentials vanish beyond the last one).
    pub fn limit(&self) -> &SpectralPage {
        self.pages.last().expect("at least one page")
    }
}

impl DoubleComplex {
    pub fn columns(&self) -> &[AltSubcomplex] {
        &self.columns
    }

    /// The horizontal map out of column `j+1` in degree `q`, materializing
    /// zeros outside the stored range.
    pub fn phi(&self, j: usize, q: usize) -> SparseMatrix {
        self.horizontal[j].get(q).cloned().unwrap_or_else(|| {
            SparseMatrix::zero(self.columns[j].complex.dim(q), self.columns[j + 1].complex.dim(q))
        })
    }

    /// Assembles `Tot_n = ⊕_{p+q=n} (column p)_q` with total differential
    /// `D = ∂ + (-1)^q φ̂`, blocks ordered by ascending `p`.
    pub fn total_complex(&self) -> Result<TotalComplex, ImageError> {
        let ntop = self
            .columns
            .iter()
            .enumerate()
            .map(|(p, c)| p + c.complex.top_degree())
            .max()
            .expect("at least one column");
        let mut blocks: Vec<Vec<(usize, usize, usize)>> = Vec::with_capacity(ntop + 1);
        for n in 0..=ntop {
            let mut layer = Vec::new();
            let mut offset = 0;
            for (p, col) in self.columns.iter().enumerate() {
                if p > n || n - p > col.complex.top_degree() {
                    continue;
                }
                let dim = col.complex.dim(n - p);
                layer.push((p, dim, offset));
                offset += dim;
            }
            blocks.push(layer);
        }
        let sizes: Vec<usize> =
            blocks.iter().map(|layer| layer.iter().map(|(_, d, _)| d).sum()).collect();
        let mut boundaries = Vec::with_capacity(ntop);
        for n in 1..=ntop {
            let offset_in = |layer: &[(usize, usize, usize)], p: usize| {
                layer.iter().find(|(bp, _, _)| *bp == p).map(|(_, _, o)| *o)
            };
            let mut triplets: Vec<(usize, usize, Rat)> = Vec::new();
            for &(p, _, src_off) in &blocks[n] {
                let q = n - p;
                // Vertical part: the column boundary, landing in (p, q-1).
                if q >= 1 {
                    if let Some(dst_off) = offset_in(&blocks[n - 1], p) {
                        for (r, c, v) in self.columns[p].complex.boundary(q).iter() {
                            triplets.push((dst_off + r, src_off + c, v.clone()));
                        }
                    }
                }
                // Horizontal part: (-1)^q φ̂, landing in (p-1, q).
                if p >= 1 {
                    if let Some(dst_off) = offset_in(&blocks[n - 1], p - 1) {
                        let sign = if q % 2 == 0 { Rat::one() } else { -Rat::one() };
                        for (r, c, v) in self.phi(p - 1, q).iter() {
                            triplets.push((dst_off + r, src_off + c, v * &sign));
                        }
                    }
                }
            }
            boundaries.push(SparseMatrix::from_triplets(sizes[n - 1], sizes[n], triplets)?);
        }
        let complex = ChainComplex::new(sizes, boundaries).map_err(|e| {
            ImageError::NotADoubleComplex(format!("total differential rejected: {e}"))
        })?;
        Ok(TotalComplex { complex, blocks })
    }

    /// Pages `E^1, …` of the column-filtration spectral sequence, computed
    /// from exact subspace formulas on the total complex:
    ///
    /// ```text
    /// Z^r_{p,q} = { x ∈ F_p Tot_{p+q} : Dx ∈ F_{p-r} },
    /// E^r_{p,q} = Z^r_{p,q} / (Z^{r-1}_{p-1,q+1} + D Z^{r-1}_{p+r-1,q-r+2}).
    /// ```
    ///
    /// Differentials vanish once `r` exceeds the number of columns, so the
    /// last page returned is `E^∞`; its antidiagonal sums are checked
    /// against the total homology.
    pub fn spectral_sequence(&self) -> Result<SpectralSequence, ImageError> {
        let tot = self.total_complex()?;
        let total_betti = tot.complex.homology_dims();
        let pmax = self.columns.len() - 1;
        let qmax = self
            .columns
            .iter()
            .map(|c| c.complex.top_degree())
            .max()
            .expect("at least one column");
        let mut pages = Vec::new();
        for r in 1..=self.columns.len() {
            let mut dims = vec![vec![0usize; qmax + 1]; pmax + 1];
            for (p, row) in dims.iter_mut().enumerate() {
                for (q, slot) in row.iter_mut().enumerate() {
                    *slot = e_dim(&tot, r as i64, p as i64, q as i64);
                }
            }
            pages.push(SpectralPage { r, dims });
        }
        let last = &pages.last().expect("at least one page").dims;
        for n in 0..=(pmax + qmax) {
            let sum: usize =
                (0..=n.min(pmax)).map(|p| last[p].get(n - p).copied().unwrap_or(0)).sum();
            let expected = total_betti.get(n).copied().unwrap_or(0);
            if sum != expected {
                return Err(ImageError::ConvergenceMismatch(format!(
                    "E-infinity sums to {sum} in total degree {n}, total homology has \
                     {expected}"
                )));
            }
        }
        Ok(SpectralSequence { pages, total_betti })
    }
}

/// `dim E^r_{p,q}` by the subspace formulas above.
fn e_dim(tot: &TotalComplex, r: i64, p: i64, q: i64) -> usize {
    let n = p + q;
    let z = z_basis(tot, n, p, r);
    if z.is_empty() {
        return 0;
    }
    let mut denominator = z_basis(tot, n, p - 1, r - 1);
    let boundary = tot.complex.boundary((n + 1) as usize);
    for vec in z_basis(tot, n + 1, p + r - 1, r - 1) {
        denominator.push(boundary.apply(&vec).expect("cycle vectors match the boundary"));
    }
    let rank = SparseMatrix::from_columns(tot.dim(n), &denominator).rank();
    z.len().checked_sub(rank).expect("boundary subspace exceeds cycle subspace")
}

/// Basis of `Z^r_{p,q} = { x ∈ F_p Tot_n : Dx ∈ F_{p-r} }` (with `Z^0 = F_p`),
/// as vectors in `Tot_n` coordinates.
fn z_basis(tot: &TotalComplex, n: i64, p: i64, r: i64) -> Vec<Vec<Rat>> {
    if n < 0 || p < 0 || n as usize >= tot.blocks.len() {
        return Vec::new();
    }
    let m = tot.prefix_len(n, p);
    if m == 0 {
        return Vec::new();
    }
    let boundary = tot.complex.boundary(n as usize);
    // Coordinates of Tot_{n-1} outside F_{p-r} must vanish.
    let allowed = tot.prefix_len(n - 1, p - r);
    let mut constrained = SparseMatrix::zero(boundary.rows() - allowed, m);
    for (row, col, v) in boundary.iter() {
        if row >= allowed && col < m {
            constrained.set(row - allowed, col, v.clone());
        }
    }
    constrained
        .kernel_basis()
        .into_iter()
        .map(|mut v| {
            v.resize(tot.dim(n), Rat::from_integer(0.into()));
            v
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Full analysis and the component criterion
// ---------------------------------------------------------------------------

/// Everything the homology pipeline produces for one diagram.
#[derive(Clone, Debug, Serialize)]
pub struct ImageAnalysis {
    pub kmax: usize,
    /// Alternating homology `A_q(D^{p+1})` per level (ragged rows).
    pub column_alt_homology: Vec<Vec<usize>>,
    pub pages: Vec<SpectralPage>,
    /// Rational Betti numbers of the image.
    pub betti: Vec<usize>,
    /// The combinatorial `A_0(D^2) ≠ 0` test, when a `D^2` level exists.
    pub h1_criterion: Option<bool>,
}

/// Runs the whole pipeline: alternating double complex, total homology,
/// spectral pages with the convergence check, and the component criterion.
pub fn analyze(diagram: &MultiplePointDiagram) -> Result<ImageAnalysis, ImageError> {
    let dc = diagram.double_complex()?;
    let ss = dc.spectral_sequence()?;
    let column_alt_homology: Vec<Vec<usize>> =
        dc.columns().iter().map(|c| c.complex.homology_dims()).collect();
    // The first page must reproduce the columns' own homology.
    if cfg!(debug_assertions) {
        for (p, col) in column_alt_homology.iter().enumerate() {
            for (q, &dim) in col.iter().enumerate() {
                debug_assert_eq!(
                    ss.pages[0].dims[p][q], dim,
                    "E^1_{{{p},{q}}} disagrees with column homology"
                );
            }
        }
    }
    let h1_criterion = if diagram.kmax() >= 2 {
        Some(h1_component_criterion(diagram)?)
    } else {
        None
    };
    Ok(ImageAnalysis {
        kmax: diagram.kmax(),
        column_alt_homology,
        pages: ss.pages,
        betti: ss.total_betti,
        h1_criterion,
    })
}

/// Decides `A_0(D^2) ≠ 0` without linear algebra: the alternating part of
/// `H_0(D^2)` is nonzero exactly when the involution maps some connected
/// component of `D^2` to a different component. (In degree 0 the action is
/// an honest permutation of vertices, so components either stay or swap.)
pub fn h1_component_criterion(diagram: &MultiplePointDiagram) -> Result<bool, ImageError> {
    let level2 = diagram.levels.get(1).ok_or_else(|| {
        ImageError::Shape("the component criterion needs a D^2 level".into())
    })?;
    let complex = level2.complex();
    let vertices = complex.dim(0);
    if vertices == 0 {
        return Ok(false);
    }
    let sigma = level2.action().generator(0, 0);
    let mut perm = vec![usize::MAX; vertices];
    for (r, c, v) in sigma.iter() {
        if !v.is_one() || perm[c] != usize::MAX {
            return Err(ImageError::Shape(
                "the involution on D^2 vertices is not a permutation".into(),
            ));
        }
        perm[c] = r;
    }
    if perm.iter().any(|&img| img == usize::MAX) {
        return Err(ImageError::Shape(
            "the involution on D^2 vertices is not a permutation".into(),
        ));
    }
    let mut dsu = Dsu::new(vertices);
    let boundary = complex.boundary(1);
    let mut touched: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (r, c, _) in boundary.iter() {
        touched.entry(c).or_default().push(r);
    }
    for ends in touched.values() {
        for pair in ends.windows(2) {
            dsu.union(pair[0], pair[1]);
        }
    }
    Ok((0..vertices).any(|v| dsu.find(v) != dsu.find(perm[v])))
}

/// Minimal union-find with path halving.
struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

// ---------------------------------------------------------------------------
// JSON documents
// ---------------------------------------------------------------------------

/// One face family in a diagram document: the level `k` it maps out of,
/// plus exactly one of `faces` (the `k` maps `ε_i`, each per degree) or
/// `phi` (the alternating sum per degree).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FaceDoc {
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub faces: Option<Vec<Vec<MatrixDoc>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<MatrixDoc>>,
}

/// A diagram document: levels tagged by `k` (level 1 may be omitted — it
/// defaults to a point) and face families (omitted families are zero).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagramDoc {
    pub levels: Vec<ComplexDoc>,
    #[serde(default)]
    pub faces: Vec<FaceDoc>,
}

impl DiagramDoc {
    pub fn build(&self) -> Result<MultiplePointDiagram, ImageError> {
        if self.levels.is_empty() {
            return Err(ImageError::Json("a diagram needs at least one level".into()));
        }
        let mut by_k: BTreeMap<usize, &ComplexDoc> = BTreeMap::new();
        for level in &self.levels {
            if level.k == 0 {
                return Err(ImageError::Json("level k must be at least 1".into()));
            }
            if by_k.insert(level.k, level).is_some() {
                return Err(ImageError::Json(format!("level k = {} appears twice", level.k)));
            }
        }
        let kmax = *by_k.keys().last().expect("nonempty");
        let mut levels = Vec::with_capacity(kmax);
        for k in 1..=kmax {
            match by_k.get(&k) {
                Some(doc) => levels.push(doc.build()?),
                None if k == 1 => levels.push(EquivariantComplex::point()),
                None => {
                    return Err(ImageError::Json(format!(
                        "missing level k = {k} (only D^1 may be omitted)"
                    )))
                }
            }
        }
        let mut face_by_k: BTreeMap<usize, FaceData> = BTreeMap::new();
        for face in &self.faces {
            if face.k < 2 || face.k > kmax {
                return Err(ImageError::Json(format!(
                    "face family k = {} is outside 2..={kmax}",
                    face.k
                )));
            }
            let data = match (&face.faces, &face.phi) {
                (Some(families), None) => FaceData::Faces(
                    families
                        .iter()
                        .map(|fam| {
                            fam.iter().map(MatrixDoc::to_matrix).collect::<Result<Vec<_>, _>>()
                        })
                        .collect::<Result<_, _>>()?,
                ),
                (None, Some(phi)) => FaceData::Phi(
                    phi.iter().map(MatrixDoc::to_matrix).collect::<Result<_, _>>()?,
                ),
                _ => {
                    return Err(ImageError::Json(format!(
                        "face family k = {} needs exactly one of `faces` or `phi`",
                        face.k
                    )))
                }
            };
            if face_by_k.insert(face.k, data).is_some() {
                return Err(ImageError::Json(format!(
                    "face family k = {} appears twice",
                    face.k
                )));
            }
        }
        let face_data: Vec<FaceData> = (2..=kmax)
            .map(|k| face_by_k.remove(&k).unwrap_or(FaceData::Zero))
            .collect();
        MultiplePointDiagram::new(levels, face_data)
    }
}

/// Parses and builds a diagram from JSON text.
pub fn diagram_from_json_str(s: &str) -> Result<MultiplePointDiagram, ImageError> {
    let doc: DiagramDoc = serde_json::from_str(s).map_err(|e| ImageError::Json(e.to_string()))?;
    doc.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivariant::{from_simplicial, SymmetricAction};
    use crate::rational::rat;

    fn ones(rows: usize, cols: usize) -> SparseMatrix {
        SparseMatrix::from_triplets(
            rows,
            cols,
            (0..rows).flat_map(|r| (0..cols).map(move |c| (r, c, Rat::one()))),
        )
        .unwrap()
    }

    fn two_swapped_triangles() -> EquivariantComplex {
        from_simplicial(
            2,
            6,
            &[vec![0, 1], vec![1, 2], vec![0, 2], vec![3, 4], vec![4, 5], vec![3, 5]],
            &[vec![3, 4, 5, 0, 1, 2]],
        )
        .unwrap()
    }

    /// D^1 = point, D^2 = two circles swapped by the involution, both face
    /// maps collapse everything to the point.
    fn swapped_circles_diagram() -> MultiplePointDiagram {
        MultiplePointDiagram::new(
            vec![EquivariantComplex::point(), two_swapped_triangles()],
            vec![FaceData::Faces(vec![vec![ones(1, 6)], vec![ones(1, 6)]])],
        )
        .unwrap()
    }

    /// D^1 = point, D^2 = one circle with an orientation-reversing
    /// involution fixing two vertices.
    fn reflected_circle_diagram() -> MultiplePointDiagram {
        let circle = from_simplicial(
            2,
            4,
            &[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
            &[vec![0, 3, 2, 1]],
        )
        .unwrap();
        MultiplePointDiagram::new(
            vec![EquivariantComplex::point(), circle],
            vec![FaceData::Faces(vec![vec![ones(1, 4)], vec![ones(1, 4)]])],
        )
        .unwrap()
    }

    /// D^1 = point, D^2 = four arcs joining two fixed endpoints, with the
    /// involution swapping the arcs in pairs.
    fn four_arcs_diagram() -> MultiplePointDiagram {
        let graph = from_simplicial(
            2,
            6,
            &[
                vec![0, 2],
                vec![1, 2],
                vec![0, 3],
                vec![1, 3],
                vec![0, 4],
                vec![1, 4],
                vec![0, 5],
                vec![1, 5],
            ],
            &[vec![0, 1, 3, 2, 5, 4]],
        )
        .unwrap();
        MultiplePointDiagram::new(
            vec![EquivariantComplex::point(), graph],
            vec![FaceData::Faces(vec![vec![ones(1, 6)], vec![ones(1, 6)]])],
        )
        .unwrap()
    }

    #[test]
    fn point_diagram_has_point_homology() {
        let diagram =
            MultiplePointDiagram::new(vec![EquivariantComplex::point()], vec![]).unwrap();
        assert!(diagram.validate().is_valid());
        let analysis = analyze(&diagram).unwrap();
        assert_eq!(analysis.betti, vec![1]);
        assert_eq!(analysis.pages.len(), 1);
        assert_eq!(analysis.pages[0].dims, vec![vec![1]]);
        assert_eq!(analysis.h1_criterion, None);
    }

    #[test]
    fn swapped_circles_give_a_sphere_like_profile() {
        let diagram = swapped_circles_diagram();
        assert!(diagram.validate().is_valid());
        let analysis = analyze(&diagram).unwrap();
        assert_eq!(analysis.betti, vec![1, 1, 1]);
        assert_eq!(analysis.column_alt_homology, vec![vec![1], vec![1, 1]]);
        // phi vanishes on alternating chains here, so E^1 = E^2 = E^inf.
        assert_eq!(analysis.pages[0].dims, vec![vec![1, 0], vec![1, 1]]);
        assert_eq!(analysis.pages[1].dims, vec![vec![1, 0], vec![1, 1]]);
        assert_eq!(analysis.h1_criterion, Some(true));
    }

    #[test]
    fn reflected_circle_kills_middle_homology() {
        let diagram = reflected_circle_diagram();
        let analysis = analyze(&diagram).unwrap();
        assert_eq!(analysis.betti, vec![1, 0, 1]);
        assert_eq!(analysis.column_alt_homology, vec![vec![1], vec![0, 1]]);
        assert_eq!(analysis.h1_criterion, Some(false));
    }

    #[test]
    fn four_arcs_give_two_second_homology_classes() {
        let diagram = four_arcs_diagram();
        let analysis = analyze(&diagram).unwrap();
        assert_eq!(analysis.betti, vec![1, 0, 2]);
        assert_eq!(analysis.column_alt_homology, vec![vec![1], vec![0, 2]]);
        assert_eq!(analysis.h1_criterion, Some(false));
    }

    #[test]
    fn euler_characteristics_are_consistent() {
        for diagram in
            [swapped_circles_diagram(), reflected_circle_diagram(), four_arcs_diagram()]
        {
            let tot = diagram.double_complex().unwrap().total_complex().unwrap();
            let betti = tot.complex.homology_dims();
            let chi: i64 = betti
                .iter()
                .enumerate()
                .map(|(n, &b)| if n % 2 == 0 { b as i64 } else { -(b as i64) })
                .sum();
            assert_eq!(chi, tot.complex.euler_characteristic());
        }
    }

    #[test]
    fn nontrivial_first_differential() {
        // D^1 = two bare points, D^2 = the two orderings of the pair. The
        // face maps forget one coordinate, so phi is injective on
        // alternating chains and d^1 kills both E^1 entries.
        let d1 = EquivariantComplex::new(
            ChainComplex::new(vec![2], vec![]).unwrap(),
            SymmetricAction::trivial(),
        )
        .unwrap();
        let swap = SparseMatrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        let d2 = EquivariantComplex::new(
            ChainComplex::new(vec![2], vec![]).unwrap(),
            SymmetricAction::new(2, vec![vec![swap.clone()]]).unwrap(),
        )
        .unwrap();
        // Columns are the orderings (a,b) and (b,a); e_1 forgets the first
        // entry, e_2 the second.
        let e1 = swap;
        let e2 = SparseMatrix::identity(2);
        let diagram = MultiplePointDiagram::new(
            vec![d1, d2],
            vec![FaceData::Faces(vec![vec![e1], vec![e2]])],
        )
        .unwrap();
        assert!(diagram.validate().is_valid());
        let analysis = analyze(&diagram).unwrap();
        assert_eq!(analysis.pages[0].dims, vec![vec![2], vec![1]]);
        assert_eq!(analysis.pages[1].dims, vec![vec![1], vec![0]]);
        assert_eq!(analysis.betti, vec![1, 0]);
        // The two vertices of D^2 are distinct components swapped by the
        // involution.
        assert_eq!(analysis.h1_criterion, Some(true));
    }

    #[test]
    fn folded_hexagons_have_nonzero_phi_but_the_same_betti() {
        // Richer model of the same space as `swapped_circles_diagram`:
        // D^1 is a disc (cone over a hexagon), containing the
        // double point curve as its boundary; D^2 is two hexagonal circles
        // swapped by the involution. The face maps fold both circles onto
        // the boundary hexagon, one of them twisted by the deck rotation,
        // so phi is nonzero on chains — yet its induced map on homology
        // vanishes because the hexagon bounds inside the disc.
        let apex = 6usize;
        let disc: Vec<Vec<usize>> =
            (0..6).map(|i| vec![i, (i + 1) % 6, apex]).collect();
        let two_hexagons: Vec<Vec<usize>> = (0..6)
            .map(|i| vec![i, (i + 1) % 6])
            .chain((0..6).map(|i| vec![6 + i, 6 + (i + 1) % 6]))
            .collect();
        let swap: Vec<usize> = (0..12).map(|v| (v + 6) % 12).collect();
        let d1 = crate::equivariant::from_simplicial(1, 7, &disc, &[]).unwrap();
        let d2 = crate::equivariant::from_simplicial(2, 12, &two_hexagons, &[swap]).unwrap();
        // Deleting a point of the pair (a, ι(a)) lands on a or on ι(a):
        // one face map embeds each circle, the other twists by ι (= rotate
        // the hexagon halfway).
        let e1_vertices: Vec<usize> =
            (0..6).map(|i| (i + 3) % 6).chain(0..6).collect();
        let e2_vertices: Vec<usize> =
            (0..6).chain((0..6).map(|i| (i + 3) % 6)).collect();
        let e1 = crate::equivariant::simplicial_chain_map(
            (12, &two_hexagons),
            (7, &disc),
            &e1_vertices,
        )
        .unwrap();
        let e2 = crate::equivariant::simplicial_chain_map(
            (12, &two_hexagons),
            (7, &disc),
            &e2_vertices,
        )
        .unwrap();
        let diagram = MultiplePointDiagram::new(
            vec![d1, d2],
            vec![FaceData::Faces(vec![e1, e2])],
        )
        .unwrap();
        assert!(diagram.validate().is_valid());
        let dc = diagram.double_complex().unwrap();
        assert!(!dc.phi(0, 0).is_zero(), "phi should be nonzero on alternating chains");
        let analysis = analyze(&diagram).unwrap();
        assert_eq!(analysis.betti, vec![1, 1, 1]);
        assert_eq!(analysis.column_alt_homology, vec![vec![1, 0, 0], vec![1, 1]]);
        assert_eq!(analysis.h1_criterion, Some(true));
    }

    #[test]
    fn non_chain_map_phi_is_rejected() {
        // Target now has 1-cells, and phi hits them inconsistently: the
        // degree-0 part maps the first triangle onto the target circle but
        // the degree-1 part is zero.
        let circle =
            from_simplicial(1, 3, &[vec![0, 1], vec![1, 2], vec![0, 2]], &[]).unwrap();
        let mut phi0 = SparseMatrix::zero(3, 6);
        for v in 0..3 {
            phi0.set(v, v, Rat::one());
        }
        let diagram = MultiplePointDiagram::new(
            vec![circle, two_swapped_triangles()],
            vec![FaceData::Phi(vec![phi0, SparseMatrix::zero(3, 6)])],
        )
        .unwrap();
        // The ambient defect is reported by validate()…
        let report = diagram.validate();
        assert!(report.violations.iter().any(|v| v.contains("phi")
            && v.contains("does not commute")));
        // …and the restricted double complex refuses to build.
        assert!(matches!(
            diagram.double_complex(),
            Err(ImageError::NotADoubleComplex(_))
        ));
    }

    #[test]
    fn phi_leaving_the_alternating_subspace_is_rejected() {
        // D^3 carries the regular S_3 action on six points; its alternating
        // part is one line. A phi sending a single group element to a
        // single vertex of D^2 throws that line outside Alt(D^2).
        let perm_matrix = |images: [usize; 6]| {
            let mut m = SparseMatrix::zero(6, 6);
            for (src, dst) in images.into_iter().enumerate() {
                m.set(dst, src, Rat::one());
            }
            m
        };
        let s1 = perm_matrix([1, 0, 3, 2, 5, 4]);
        let s2 = perm_matrix([2, 4, 0, 5, 1, 3]);
        let d3 = EquivariantComplex::new(
            ChainComplex::new(vec![6], vec![]).unwrap(),
            SymmetricAction::new(3, vec![vec![s1], vec![s2]]).unwrap(),
        )
        .unwrap();
        let swap = SparseMatrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        let d2 = EquivariantComplex::new(
            ChainComplex::new(vec![2], vec![]).unwrap(),
            SymmetricAction::new(2, vec![vec![swap]]).unwrap(),
        )
        .unwrap();
        let mut bad_phi = SparseMatrix::zero(2, 6);
        bad_phi.set(0, 0, Rat::one());
        let diagram = MultiplePointDiagram::new(
            vec![EquivariantComplex::point(), d2, d3],
            vec![
                FaceData::Faces(vec![vec![ones(1, 2)], vec![ones(1, 2)]]),
                FaceData::Phi(vec![bad_phi]),
            ],
        )
        .unwrap();
        let err = diagram.double_complex().unwrap_err();
        assert!(matches!(err, ImageError::NotADoubleComplex(_)));
        assert!(err.to_string().contains("alternating"));
    }

    #[test]
    fn construction_rejects_bad_shapes() {
        // Wrong number of face maps for k = 2.
        let err = MultiplePointDiagram::new(
            vec![EquivariantComplex::point(), two_swapped_triangles()],
            vec![FaceData::Faces(vec![vec![ones(1, 6)]])],
        );
        assert!(matches!(err, Err(ImageError::Shape(_))));
        // Wrong matrix shape.
        let err = MultiplePointDiagram::new(
            vec![EquivariantComplex::point(), two_swapped_triangles()],
            vec![FaceData::Phi(vec![ones(2, 6)])],
        );
        assert!(matches!(err, Err(ImageError::Shape(_))));
        // Level k mismatch: D^2 slot with a trivial group.
        let err = MultiplePointDiagram::new(
            vec![EquivariantComplex::point(), EquivariantComplex::point()],
            vec![FaceData::Zero],
        );
        assert!(matches!(err, Err(ImageError::Shape(_))));
    }

    #[test]
    fn component_criterion_matches_alternating_h0() {
        for (diagram, expected_a0) in [
            (swapped_circles_diagram(), 1usize),
            (reflected_circle_diagram(), 0),
            (four_arcs_diagram(), 0),
        ] {
            let a0 = diagram.levels()[1].alt_homology_dims().unwrap()[0];
            assert_eq!(a0, expected_a0);
            assert_eq!(
                h1_component_criterion(&diagram).unwrap(),
                a0 != 0,
                "criterion disagrees with A_0"
            );
        }
    }

    #[test]
    fn diagram_documents_build() {
        let text = r#"{
            "levels": [
                {
                    "k": 2,
                    "simplicial": {
                        "vertices": 6,
                        "simplices": [[0,1],[1,2],[0,2],[3,4],[4,5],[3,5]],
                        "action": [[3,4,5,0,1,2]]
                    }
                }
            ],
            "faces": [
                {
                    "k": 2,
                    "faces": [
                        [ { "rows": 1, "cols": 6, "entries": [[0,0,1],[0,1,1],[0,2,1],[0,3,1],[0,4,1],[0,5,1]] } ],
                        [ { "rows": 1, "cols": 6, "entries": [[0,0,1],[0,1,1],[0,2,1],[0,3,1],[0,4,1],[0,5,1]] } ]
                    ]
                }
            ]
        }"#;
        let diagram = diagram_from_json_str(text).unwrap();
        assert_eq!(diagram.kmax(), 2);
        let analysis = analyze(&diagram).unwrap();
        assert_eq!(analysis.betti, vec![1, 1, 1]);

        // Missing middle level is an error; missing D^1 is not.
        let gap = r#"{ "levels": [ { "k": 3, "raw": { "basis_sizes": [1],
            "boundaries": [], "generators": [[{ "rows":1,"cols":1,"entries":[[0,0,1]] }],
            [{ "rows":1,"cols":1,"entries":[[0,0,1]] }]] } } ] }"#;
        assert!(matches!(
            diagram_from_json_str(gap),
            Err(ImageError::Json(_))
        ));

        // A face family needs exactly one of faces / phi.
        let both = r#"{ "levels": [ { "k": 2, "raw": { "basis_sizes": [2],
            "boundaries": [], "generators": [[{ "rows":2,"cols":2,"entries":[[0,1,1],[1,0,1]] }]] } } ],
            "faces": [ { "k": 2, "faces": [], "phi": [] } ] }"#;
        assert!(matches!(
            diagram_from_json_str(both),
            Err(ImageError::Json(_))
        ));
    }

    #[test]
    fn zero_faces_are_the_default() {
        let text = r#"{ "levels": [ { "k": 2, "raw": { "basis_sizes": [2],
            "boundaries": [], "generators": [[{ "rows":2,"cols":2,"entries":[[0,1,1],[1,0,1]] }]] } } ] }"#;
        let diagram = diagram_from_json_str(text).unwrap();
        let analysis = analyze(&diagram).unwrap();
        // Point at level 1 plus an alternating line at level 2, no maps.
        assert_eq!(analysis.betti, vec![1, 1]);
        assert_eq!(analysis.h1_criterion, Some(true));
    }

    #[test]
    fn spectral_limit_accessor_returns_last_page() {
        let diagram = swapped_circles_diagram();
        let ss = diagram.double_complex().unwrap().spectral_sequence().unwrap();
        assert_eq!(ss.limit().r, 2);
        assert_eq!(ss.limit().dims, ss.pages[1].dims);
        let _ = rat(0);
    }
}
