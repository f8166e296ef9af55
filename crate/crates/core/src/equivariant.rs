//! Chain complexes with symmetric group actions and alternating homology.
//!
//! The `k`-th multiple point space of a map germ carries an action of the
//! symmetric group `S_k` permuting the `k` preimage points. Its chain-level
//! model here is an [`EquivariantComplex`]: a rational [`ChainComplex`]
//! together with, for each adjacent transposition `s_i = (i, i+1)`, a
//! signed basis permutation per degree. The action laws (involutions, braid
//! relations, distant commutation, chain-map compatibility) are *checked*,
//! not assumed: [`EquivariantComplex::validate`] reports every violation.
//!
//! The object of interest is the alternating part. The projector
//!
//! ```text
//! Alt = (1/k!) · Σ_σ sign(σ) · σ_*
//! ```
//!
//! is assembled by walking the group from its generators (so `k ≤ 7` keeps
//! the walk at ≤ 5040 elements), and [`alternating_subcomplex`] restricts
//! the boundary maps to a reduced-echelon basis of its image. Alternating
//! homology — the `S_k`-sign-isotypic part of rational homology — is then
//! ordinary homology of that subcomplex. For `k = 1` the projector is the
//! identity and nothing changes.
//!
//! Models can be entered two ways: a raw form (explicit boundary matrices
//! and generator matrices) and a simplicial form (vertex count, simplices,
//! one vertex permutation per adjacent transposition) from which boundaries,
//! orientation signs and induced signed permutations are computed.
//!
//! [`alternating_subcomplex`]: EquivariantComplex::alternating_subcomplex

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{solve, LinalgError, SparseMatrix};
use crate::rational::{parse_rat, Rat};
use num_traits::One;

/// Largest supported symmetric group: `7! = 5040` elements.
pub const MAX_GROUP_K: usize = 7;

#[derive(Debug, Error)]
pub enum EquivariantError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("boundary condition failed: {0}")]
    NotAComplex(String),
    #[error("symmetric group too large: k = {k} exceeds the supported k <= {max}", max = MAX_GROUP_K)]
    GroupTooLarge { k: usize },
    #[error("action is not simplicial: {0}")]
    NotSimplicial(String),
    #[error("action does not restrict to the alternating subcomplex: {0}")]
    NotEquivariant(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("invalid complex document: {0}")]
    Json(String),
}

// ---------------------------------------------------------------------------
// Chain complexes
// ---------------------------------------------------------------------------

/// A finite chain complex of ℚ-vector spaces with chosen bases.
///
/// `boundaries[q]` is the matrix of `∂_{q+1} : C_{q+1} → C_q`; the squared
/// boundary condition is validated at construction.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    basis_sizes: Vec<usize>,
    boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    pub fn new(
        basis_sizes: Vec<usize>,
        boundaries: Vec<SparseMatrix>,
    ) -> Result<Self, EquivariantError> {
        if basis_sizes.is_empty() {
            return Err(EquivariantError::Shape(
                "a chain complex needs at least degree 0".into(),
            ));
        }
        if boundaries.len() + 1 != basis_sizes.len() {
            return Err(EquivariantError::Shape(format!(
                "{} degrees need {} boundary maps, got {}",
                basis_sizes.len(),
                basis_sizes.len() - 1,
                boundaries.len()
            )));
        }
        for (q, b) in boundaries.iter().enumerate() {
            if b.rows() != basis_sizes[q] || b.cols() != basis_sizes[q + 1] {
                return Err(EquivariantError::Shape(format!(
                    "boundary C_{} -> C_{} should be {}x{}, got {}x{}",
                    q + 1,
                    q,
                    basis_sizes[q],
                    basis_sizes[q + 1],
                    b.rows(),
                    b.cols()
                )));
            }
        }
        for q in 0..boundaries.len().saturating_sub(1) {
            let square = boundaries[q].mul(&boundaries[q + 1]).expect("shapes checked");
            if !square.is_zero() {
                return Err(EquivariantError::NotAComplex(format!(
                    "boundary squared is nonzero from degree {}",
                    q + 2
                )));
            }
        }
        Ok(ChainComplex { basis_sizes, boundaries })
    }

    /// The one-point complex: a single generator in degree 0.
    pub fn point() -> Self {
        ChainComplex { basis_sizes: vec![1], boundaries: vec![] }
    }

    pub fn top_degree(&self) -> usize {
        self.basis_sizes.len() - 1
    }

    pub fn basis_sizes(&self) -> &[usize] {
        &self.basis_sizes
    }

    /// Dimension of `C_q` (zero outside the supported range).
    pub fn dim(&self, q: usize) -> usize {
        self.basis_sizes.get(q).copied().unwrap_or(0)
    }

    /// The matrix of `∂_q : C_q → C_{q-1}`, materializing zero maps at the
    /// ends (`q = 0` and `q > top`).
    pub fn boundary(&self, q: usize) -> SparseMatrix {
        if q == 0 || q > self.top_degree() {
            let rows = if q == 0 { 0 } else { self.dim(q - 1) };
            SparseMatrix::zero(rows, self.dim(q))
        } else {
            self.boundaries[q - 1].clone()
        }
    }

    /// Rational Betti numbers `dim ker ∂_q - rank ∂_{q+1}` per degree.
    pub fn homology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.boundaries.iter().map(SparseMatrix::rank).collect();
        (0..=self.top_degree())
            .map(|q| {
                let out_rank = if q == 0 { 0 } else { ranks[q - 1] };
                let in_rank = if q < ranks.len() { ranks[q] } else { 0 };
                self.dim(q) - out_rank - in_rank
            })
            .collect()
    }

    /// Alternating sum `Σ (-1)^q dim C_q`, which equals the alternating sum
    /// of homology dimensions.
    pub fn euler_characteristic(&self) -> i64 {
        self.basis_sizes
            .iter()
            .enumerate()
            .map(|(q, &d)| if q % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }
}

// ---------------------------------------------------------------------------
// Symmetric group actions
// ---------------------------------------------------------------------------

/// Matrices of the adjacent transpositions `s_1, …, s_{k-1}` per degree:
/// `generators[i][q]` is the action of `s_{i+1}` on `C_q`.
#[derive(Clone, Debug)]
pub struct SymmetricAction {
    k: usize,
    generators: Vec<Vec<SparseMatrix>>,
}

impl SymmetricAction {
    pub fn new(k: usize, generators: Vec<Vec<SparseMatrix>>) -> Result<Self, EquivariantError> {
        if k == 0 {
            return Err(EquivariantError::Shape("k must be at least 1".into()));
        }
        if generators.len() + 1 != k {
            return Err(EquivariantError::Shape(format!(
                "S_{k} has {} adjacent transpositions, got {} generator families",
                k - 1,
                generators.len()
            )));
        }
        Ok(SymmetricAction { k, generators })
    }

    /// The trivial action of `S_1` (no generators).
    pub fn trivial() -> Self {
        SymmetricAction { k: 1, generators: vec![] }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn generator(&self, i: usize, q: usize) -> &SparseMatrix {
        &self.generators[i][q]
    }
}

/// A chain complex together with a compatible `S_k` action.
#[derive(Clone, Debug)]
pub struct EquivariantComplex {
    complex: ChainComplex,
    action: SymmetricAction,
}

/// Structural check results; an empty violation list means valid.
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The alternating subcomplex, remembering how it sits inside the ambient
/// complex: `bases[q]` has the chosen basis vectors of `im Alt_q` as
/// columns, and `complex` carries the restricted boundary maps.
#[derive(Clone, Debug)]
pub struct AltSubcomplex {
    pub complex: ChainComplex,
    pub bases: Vec<SparseMatrix>,
}

impl EquivariantComplex {
    pub fn new(
        complex: ChainComplex,
        action: SymmetricAction,
    ) -> Result<Self, EquivariantError> {
        for (i, per_degree) in action.generators.iter().enumerate() {
            if per_degree.len() != complex.basis_sizes.len() {
                return Err(EquivariantError::Shape(format!(
                    "generator s{} has {} degree matrices, complex has {} degrees",
                    i + 1,
                    per_degree.len(),
                    complex.basis_sizes.len()
                )));
            }
            for (q, m) in per_degree.iter().enumerate() {
                if m.rows() != complex.dim(q) || m.cols() != complex.dim(q) {
                    return Err(EquivariantError::Shape(format!(
                        "generator s{} at degree {q} should be {d}x{d}, got {}x{}",
                        i + 1,
                        m.rows(),
                        m.cols(),
                        d = complex.dim(q)
                    )));
                }
            }
        }
        Ok(EquivariantComplex { complex, action })
    }

    /// The one-point space with the trivial group.
    pub fn point() -> Self {
        EquivariantComplex { complex: ChainComplex::point(), action: SymmetricAction::trivial() }
    }

    pub fn k(&self) -> usize {
        self.action.k
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn action(&self) -> &SymmetricAction {
        &self.action
    }

    /// Checks every action law and returns the full list of violations:
    /// signed-permutation shape (honest permutations in degree 0),
    /// involutions, braid and commutation relations, and chain-map
    /// compatibility with the boundary.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let top = self.complex.top_degree();
        let gens = &self.action.generators;
        for (i, per_degree) in gens.iter().enumerate() {
            let name = format!("s{}", i + 1);
            for (q, m) in per_degree.iter().enumerate() {
                if !is_signed_permutation(m) {
                    violations
                        .push(format!("{name} at degree {q} is not a signed permutation"));
                    continue;
                }
                if q == 0 && m.iter().any(|(_, _, v)| !v.is_one()) {
                    violations.push(format!(
                        "{name} at degree 0 has negative entries; vertices cannot map to \
                         negated vertices"
                    ));
                }
                let square = m.mul(m).expect("square");
                if square != SparseMatrix::identity(m.rows()) {
                    violations.push(format!("{name} at degree {q} is not an involution"));
                }
            }
        }
        for q in 0..=top {
            for i in 0..gens.len() {
                for j in (i + 1)..gens.len() {
                    let a = &gens[i][q];
                    let b = &gens[j][q];
                    if j == i + 1 {
                        let aba = a.mul(b).and_then(|m| m.mul(a)).expect("square");
                        let bab = b.mul(a).and_then(|m| m.mul(b)).expect("square");
                        if aba != bab {
                            violations.push(format!(
                                "braid relation fails for (s{}, s{}) at degree {q}",
                                i + 1,
                                j + 1
                            ));
                        }
                    } else {
                        let ab = a.mul(b).expect("square");
                        let ba = b.mul(a).expect("square");
                        if ab != ba {
                            violations.push(format!(
                                "s{} and s{} do not commute at degree {q}",
                                i + 1,
                                j + 1
                            ));
                        }
                    }
                }
            }
        }
        for q in 1..=top {
            let boundary = self.complex.boundary(q);
            for (i, per_degree) in gens.iter().enumerate() {
                let lhs = boundary.mul(&per_degree[q]).expect("shapes");
                let rhs = per_degree[q - 1].mul(&boundary).expect("shapes");
                if lhs != rhs {
                    violations.push(format!(
                        "s{} is not a chain map at degree {q} (does not commute with the \
                         boundary)",
                        i + 1
                    ));
                }
            }
        }
        ValidationReport { violations }
    }

    /// The alternating projector `(1/k!) Σ sign(σ) σ_*` on `C_q`.
    ///
    /// Group elements are enumerated by breadth-first walk from the
    /// generators, so each product matrix is computed exactly once.
    pub fn alt_projector(&self, q: usize) -> Result<SparseMatrix, EquivariantError> {
        let k = self.action.k;
        if k > MAX_GROUP_K {
            return Err(EquivariantError::GroupTooLarge { k });
        }
        let dim = self.complex.dim(q);
        if k == 1 {
            return Ok(SparseMatrix::identity(dim));
        }
        let identity: Vec<usize> = (0..k).collect();
        let mut seen: BTreeMap<Vec<usize>, (SparseMatrix, bool)> = BTreeMap::new();
        seen.insert(identity.clone(), (SparseMatrix::identity(dim), false));
        let mut frontier = vec![identity];
        while let Some(perm) = frontier.pop() {
            let (mat, odd) = seen.get(&perm).expect("frontier entries are seen").clone();
            for i in 0..k - 1 {
                // Left-compose with s_i: swap the values i and i+1.
                let next: Vec<usize> = perm
                    .iter()
                    .map(|&v| if v == i { i + 1 } else if v == i + 1 { i } else { v })
                    .collect();
                if seen.contains_key(&next) {
                    continue;
                }
                let next_mat = self.action.generator(i, q).mul(&mat)?;
                seen.insert(next.clone(), (next_mat, !odd));
                frontier.push(next);
            }
        }
        debug_assert_eq!(seen.len(), (1..=k).product::<usize>());
        let mut sum = SparseMatrix::zero(dim, dim);
        for (mat, odd) in seen.values() {
            sum = sum.add(&if *odd { mat.scale(&-Rat::one()) } else { mat.clone() })?;
        }
        let order = Rat::from_integer((1..=k as i64).product::<i64>().into());
        Ok(sum.scale(&(Rat::one() / order)))
    }

    /// The alternating subcomplex: images of the per-degree projectors with
    /// the boundary maps restricted to them.
    pub fn alternating_subcomplex(&self) -> Result<AltSubcomplex, EquivariantError> {
        let top = self.complex.top_degree();
        let mut bases = Vec::with_capacity(top + 1);
        for q in 0..=top {
            let projector = self.alt_projector(q)?;
            let vectors = projector.image_basis();
            bases.push(SparseMatrix::from_columns(self.complex.dim(q), &vectors));
        }
        let mut boundaries = Vec::with_capacity(top);
        for q in 1..=top {
            let mapped = self.complex.boundary(q).mul(&bases[q])?;
            let restricted = solve(&bases[q - 1], &mapped)?.ok_or_else(|| {
                EquivariantError::NotEquivariant(format!(
                    "boundary image at degree {q} leaves the alternating subspace"
                ))
            })?;
            boundaries.push(restricted);
        }
        let sizes: Vec<usize> = bases.iter().map(SparseMatrix::cols).collect();
        Ok(AltSubcomplex { complex: ChainComplex::new(sizes, boundaries)?, bases })
    }

    /// Alternating homology dimensions `A_q` per degree.
    pub fn alt_homology_dims(&self) -> Result<Vec<usize>, EquivariantError> {
        Ok(self.alternating_subcomplex()?.complex.homology_dims())
    }
}

/// Every column and every row has exactly one nonzero entry, equal to ±1.
fn is_signed_permutation(m: &SparseMatrix) -> bool {
    if m.rows() != m.cols() {
        return false;
    }
    let mut row_hits = vec![0usize; m.rows()];
    let mut col_hits = vec![0usize; m.cols()];
    for (r, c, v) in m.iter() {
        if !(v.is_one() || (-v).is_one()) {
            return false;
        }
        row_hits[r] += 1;
        col_hits[c] += 1;
    }
    row_hits.iter().all(|&h| h == 1) && col_hits.iter().all(|&h| h == 1)
}

// ---------------------------------------------------------------------------
// Simplicial models
// ---------------------------------------------------------------------------

/// Builds an equivariant complex from a simplicial description: vertex
/// count, simplices (any generating set; faces are closed over), and one
/// vertex permutation per adjacent transposition.
///
/// Bases are the simplices with vertices sorted ascending, ordered
/// lexicographically within each dimension. The sign of a permuted simplex
/// is the parity of the sort that brings its image back to ascending order.
pub fn from_simplicial(
    k: usize,
    vertices: usize,
    simplices: &[Vec<usize>],
    action: &[Vec<usize>],
) -> Result<EquivariantComplex, EquivariantError> {
    let bases = closed_bases(vertices, simplices)?;
    let index: Vec<BTreeMap<&Vec<usize>, usize>> = bases
        .iter()
        .map(|list| list.iter().enumerate().map(|(i, s)| (s, i)).collect())
        .collect();
    let sizes: Vec<usize> = bases.iter().map(Vec::len).collect();
    // Boundaries: alternating sum over face deletions.
    let mut boundaries = Vec::new();
    for q in 1..sizes.len() {
        let mut m = SparseMatrix::zero(sizes[q - 1], sizes[q]);
        for (j, s) in bases[q].iter().enumerate() {
            for i in 0..s.len() {
                let mut face = s.clone();
                face.remove(i);
                let r = index[q - 1][&face];
                let sign = if i % 2 == 0 { Rat::one() } else { -Rat::one() };
                m.set(r, j, m.get(r, j) + sign);
            }
        }
        boundaries.push(m);
    }
    let complex = ChainComplex::new(sizes.clone(), boundaries)?;
    // Induced signed permutations per generator and degree.
    let mut generators = Vec::with_capacity(action.len());
    for (gi, perm) in action.iter().enumerate() {
        if perm.len() != vertices {
            return Err(EquivariantError::NotSimplicial(format!(
                "generator s{} permutes {} vertices, complex has {vertices}",
                gi + 1,
                perm.len()
            )));
        }
        let mut hit = vec![false; vertices];
        for &img in perm {
            if img >= vertices || hit[img] {
                return Err(EquivariantError::NotSimplicial(format!(
                    "generator s{} is not a vertex permutation",
                    gi + 1
                )));
            }
            hit[img] = true;
        }
        let mut per_degree = Vec::with_capacity(sizes.len());
        for q in 0..sizes.len() {
            let mut m = SparseMatrix::zero(sizes[q], sizes[q]);
            for (j, s) in bases[q].iter().enumerate() {
                let image: Vec<usize> = s.iter().map(|&v| perm[v]).collect();
                let (sorted, sign) = sort_with_parity(&image);
                let Some(&r) = index[q].get(&sorted) else {
                    return Err(EquivariantError::NotSimplicial(format!(
                        "generator s{} maps simplex {s:?} to {sorted:?}, which is not in \
                         the complex",
                        gi + 1
                    )));
                };
                m.set(r, j, if sign { -Rat::one() } else { Rat::one() });
            }
            per_degree.push(m);
        }
        generators.push(per_degree);
    }
    EquivariantComplex::new(complex, SymmetricAction::new(k, generators)?)
}

/// Closes a generating set of simplices under faces and returns the sorted
/// basis (ascending vertex tuples, ordered lexicographically) per dimension.
/// Every vertex is included as a 0-simplex.
fn closed_bases(
    vertices: usize,
    simplices: &[Vec<usize>],
) -> Result<Vec<Vec<Vec<usize>>>, EquivariantError> {
    let mut by_dim: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new()];
    for v in 0..vertices {
        by_dim[0].insert(vec![v]);
    }
    let mut stack: Vec<Vec<usize>> = Vec::new();
    for s in simplices {
        let mut sorted = s.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != s.len() {
            return Err(EquivariantError::NotSimplicial(format!(
                "simplex {s:?} repeats a vertex"
            )));
        }
        if let Some(&v) = sorted.iter().find(|&&v| v >= vertices) {
            return Err(EquivariantError::NotSimplicial(format!(
                "simplex {s:?} mentions vertex {v}, but there are only {vertices}"
            )));
        }
        stack.push(sorted);
    }
    while let Some(s) = stack.pop() {
        let dim = s.len() - 1;
        while by_dim.len() <= dim {
            by_dim.push(BTreeSet::new());
        }
        if !by_dim[dim].insert(s.clone()) {
            continue;
        }
        if dim > 0 {
            for i in 0..s.len() {
                let mut face = s.clone();
                face.remove(i);
                stack.push(face);
            }
        }
    }
    Ok(by_dim.into_iter().map(|set| set.into_iter().collect()).collect())
}

/// The chain maps induced by a simplicial map between two complexes (each
/// given by a generating simplex set, closed over here with the same basis
/// conventions as [`from_simplicial`]).
///
/// `vertex_map[v]` is the image of source vertex `v`. Simplices whose
/// image degenerates (repeats a vertex) map to zero; a non-degenerate
/// image missing from the target is an error. Returns one matrix per
/// source degree; degrees above the target's top dimension get matrices
/// with zero rows.
pub fn simplicial_chain_map(
    src: (usize, &[Vec<usize>]),
    tgt: (usize, &[Vec<usize>]),
    vertex_map: &[usize],
) -> Result<Vec<SparseMatrix>, EquivariantError> {
    let src_bases = closed_bases(src.0, src.1)?;
    let tgt_bases = closed_bases(tgt.0, tgt.1)?;
    if vertex_map.len() != src.0 {
        return Err(EquivariantError::NotSimplicial(format!(
            "vertex map covers {} vertices, source has {}",
            vertex_map.len(),
            src.0
        )));
    }
    if let Some(&v) = vertex_map.iter().find(|&&v| v >= tgt.0) {
        return Err(EquivariantError::NotSimplicial(format!(
            "vertex map hits vertex {v}, target has only {}",
            tgt.0
        )));
    }
    let tgt_index: Vec<BTreeMap<&Vec<usize>, usize>> = tgt_bases
        .iter()
        .map(|list| list.iter().enumerate().map(|(i, s)| (s, i)).collect())
        .collect();
    let mut maps = Vec::with_capacity(src_bases.len());
    for (q, basis) in src_bases.iter().enumerate() {
        let rows = tgt_bases.get(q).map_or(0, Vec::len);
        let mut m = SparseMatrix::zero(rows, basis.len());
        for (j, s) in basis.iter().enumerate() {
            let image: Vec<usize> = s.iter().map(|&v| vertex_map[v]).collect();
            let (sorted, sign) = sort_with_parity(&image);
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                continue; // degenerate image: zero chain
            }
            let Some(&r) = tgt_index.get(q).and_then(|ix| ix.get(&sorted)) else {
                return Err(EquivariantError::NotSimplicial(format!(
                    "simplex {s:?} maps to {sorted:?}, which is not in the target complex"
                )));
            };
            m.set(r, j, if sign { -Rat::one() } else { Rat::one() });
        }
        maps.push(m);
    }
    Ok(maps)
}

/// Sorts a tuple of distinct values, returning the parity of the
/// permutation applied (`true` = odd).
fn sort_with_parity(values: &[usize]) -> (Vec<usize>, bool) {
    let mut v = values.to_vec();
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    (v, odd)
}

// ---------------------------------------------------------------------------
// JSON documents
// ---------------------------------------------------------------------------

/// Sparse matrix document: explicit shape plus `(row, col, value)` entries,
/// where a value is a JSON integer or a string rational like `"3/2"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    #[serde(default)]
    pub entries: Vec<(usize, usize, serde_json::Value)>,
}

impl MatrixDoc {
    pub fn to_matrix(&self) -> Result<SparseMatrix, EquivariantError> {
        let triplets: Vec<(usize, usize, Rat)> = self
            .entries
            .iter()
            .map(|(r, c, v)| Ok((*r, *c, value_to_rat(v)?)))
            .collect::<Result<_, EquivariantError>>()?;
        Ok(SparseMatrix::from_triplets(self.rows, self.cols, triplets)?)
    }
}

/// Converts a JSON value to an exact rational: integers directly, strings
/// through the `p/q` parser. Floats are rejected — this crate is exact.
pub fn value_to_rat(v: &serde_json::Value) -> Result<Rat, EquivariantError> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(|i| Rat::from_integer(i.into()))
            .ok_or_else(|| {
                EquivariantError::Json(format!(
                    "matrix entry {n} is not an exact integer; write rationals as strings \
                     like \"3/2\""
                ))
            }),
        serde_json::Value::String(s) => {
            parse_rat(s).map_err(EquivariantError::Json)
        }
        other => Err(EquivariantError::Json(format!(
            "matrix entry {other} is neither an integer nor a rational string"
        ))),
    }
}

/// Simplicial document form (see [`from_simplicial`]).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimplicialDoc {
    pub vertices: usize,
    pub simplices: Vec<Vec<usize>>,
    #[serde(default)]
    pub action: Vec<Vec<usize>>,
}

/// Raw document form: explicit bases, boundaries and generator matrices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawComplexDoc {
    pub basis_sizes: Vec<usize>,
    pub boundaries: Vec<MatrixDoc>,
    #[serde(default)]
    pub generators: Vec<Vec<MatrixDoc>>,
}

/// An equivariant complex document: `k` plus exactly one of the two forms.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simplicial: Option<SimplicialDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw: Option<RawComplexDoc>,
}

impl ComplexDoc {
    pub fn build(&self) -> Result<EquivariantComplex, EquivariantError> {
        match (&self.simplicial, &self.raw) {
            (Some(s), None) => {
                if s.action.len() + 1 != self.k {
                    return Err(EquivariantError::Json(format!(
                        "k = {} needs {} action permutation(s), got {}",
                        self.k,
                        self.k - 1,
                        s.action.len()
                    )));
                }
                from_simplicial(self.k, s.vertices, &s.simplices, &s.action)
            }
            (None, Some(r)) => {
                let boundaries: Vec<SparseMatrix> = r
                    .boundaries
                    .iter()
                    .map(MatrixDoc::to_matrix)
                    .collect::<Result<_, _>>()?;
                let complex = ChainComplex::new(r.basis_sizes.clone(), boundaries)?;
                let generators: Vec<Vec<SparseMatrix>> = r
                    .generators
                    .iter()
                    .map(|per_degree| {
                        per_degree.iter().map(MatrixDoc::to_matrix).collect::<Result<_, _>>()
                    })
                    .collect::<Result<_, _>>()?;
                EquivariantComplex::new(complex, SymmetricAction::new(self.k, generators)?)
            }
            _ => Err(EquivariantError::Json(
                "a complex document needs exactly one of `simplicial` or `raw`".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    /// Two disjoint circles in minimal cellular form (one vertex and one
    /// edge each, zero boundary), swapped by the involution.
    fn swapped_circles_raw() -> EquivariantComplex {
        let complex =
            ChainComplex::new(vec![2, 2], vec![SparseMatrix::zero(2, 2)]).unwrap();
        let swap = SparseMatrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        let action = SymmetricAction::new(2, vec![vec![swap.clone(), swap]]).unwrap();
        EquivariantComplex::new(complex, action).unwrap()
    }

    /// Two triangle circles swapped by the involution (simplicial form).
    fn swapped_circles_simplicial() -> EquivariantComplex {
        from_simplicial(
            2,
            6,
            &[vec![0, 1], vec![1, 2], vec![0, 2], vec![3, 4], vec![4, 5], vec![3, 5]],
            &[vec![3, 4, 5, 0, 1, 2]],
        )
        .unwrap()
    }

    /// A square circle with the reflection fixing vertices 0 and 2.
    fn reflected_circle() -> EquivariantComplex {
        from_simplicial(
            2,
            4,
            &[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
            &[vec![0, 3, 2, 1]],
        )
        .unwrap()
    }

    #[test]
    fn point_homology() {
        assert_eq!(ChainComplex::point().homology_dims(), vec![1]);
    }

    #[test]
    fn simplicial_builder_computes_circle_and_sphere_homology() {
        let circle = from_simplicial(1, 3, &[vec![0, 1], vec![1, 2], vec![0, 2]], &[]).unwrap();
        assert_eq!(circle.complex().homology_dims(), vec![1, 1]);
        assert_eq!(circle.complex().euler_characteristic(), 0);

        // Boundary of the tetrahedron: a 2-sphere.
        let sphere = from_simplicial(
            1,
            4,
            &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
            &[],
        )
        .unwrap();
        assert_eq!(sphere.complex().basis_sizes(), &[4, 6, 4]);
        assert_eq!(sphere.complex().homology_dims(), vec![1, 0, 1]);
        assert_eq!(sphere.complex().euler_characteristic(), 2);
    }

    #[test]
    fn complex_construction_rejects_bad_boundaries() {
        // d1 after d2 must vanish.
        let d1 = SparseMatrix::from_int_rows(&[&[1]]);
        let d2 = SparseMatrix::from_int_rows(&[&[1]]);
        assert!(matches!(
            ChainComplex::new(vec![1, 1, 1], vec![d1, d2]),
            Err(EquivariantError::NotAComplex(_))
        ));
        assert!(matches!(
            ChainComplex::new(vec![1, 2], vec![SparseMatrix::zero(5, 5)]),
            Err(EquivariantError::Shape(_))
        ));
    }

    #[test]
    fn alt_projector_on_two_swapped_points() {
        let ec = swapped_circles_raw();
        let p = ec.alt_projector(0).unwrap();
        let expected = SparseMatrix::from_triplets(
            2,
            2,
            [
                (0, 0, ratio(1, 2)),
                (0, 1, ratio(-1, 2)),
                (1, 0, ratio(-1, 2)),
                (1, 1, ratio(1, 2)),
            ],
        )
        .unwrap();
        assert_eq!(p, expected);
        // Idempotent, and Alt ∘ σ = -Alt for the transposition.
        assert_eq!(p.mul(&p).unwrap(), p);
        let g = ec.action().generator(0, 0);
        assert_eq!(p.mul(g).unwrap(), p.scale(&rat(-1)));
    }

    #[test]
    fn trivial_group_changes_nothing() {
        let circle = from_simplicial(1, 3, &[vec![0, 1], vec![1, 2], vec![0, 2]], &[]).unwrap();
        let alt = circle.alternating_subcomplex().unwrap();
        assert_eq!(alt.complex.basis_sizes(), circle.complex().basis_sizes());
        assert_eq!(alt.complex.homology_dims(), vec![1, 1]);
        for q in 0..=1 {
            assert_eq!(alt.bases[q], SparseMatrix::identity(circle.complex().dim(q)));
        }
    }

    #[test]
    fn swapped_circles_have_alternating_line_per_degree() {
        let ec = swapped_circles_raw();
        let alt = ec.alternating_subcomplex().unwrap();
        assert_eq!(alt.complex.basis_sizes(), &[1, 1]);
        assert_eq!(ec.alt_homology_dims().unwrap(), vec![1, 1]);
        // The simplicial model is bigger but has the same alternating homology.
        let simp = swapped_circles_simplicial();
        assert_eq!(simp.complex().homology_dims(), vec![2, 2]);
        assert_eq!(simp.alt_homology_dims().unwrap(), vec![1, 1]);
    }

    #[test]
    fn fixed_everything_has_no_alternating_part() {
        // Identity involution: the sign part of the regular representation
        // never appears.
        let complex = ChainComplex::new(vec![2], vec![]).unwrap();
        let action =
            SymmetricAction::new(2, vec![vec![SparseMatrix::identity(2)]]).unwrap();
        let ec = EquivariantComplex::new(complex, action).unwrap();
        assert_eq!(ec.alt_homology_dims().unwrap(), vec![0]);
    }

    #[test]
    fn reflected_circle_kills_a0_keeps_a1() {
        let ec = reflected_circle();
        assert!(ec.validate().is_valid());
        // Orientation-reversing involution on a connected circle: the
        // fundamental class is anti-invariant, components are not swapped.
        assert_eq!(ec.alt_homology_dims().unwrap(), vec![0, 1]);
        let alt = ec.alternating_subcomplex().unwrap();
        assert_eq!(alt.complex.basis_sizes(), &[1, 2]);
    }

    #[test]
    fn alternating_dims_never_exceed_ambient_homology() {
        for ec in [swapped_circles_raw(), swapped_circles_simplicial(), reflected_circle()] {
            let alt = ec.alt_homology_dims().unwrap();
            let full = ec.complex().homology_dims();
            for (a, b) in alt.iter().zip(&full) {
                assert!(a <= b, "alternating part exceeded homology: {alt:?} vs {full:?}");
            }
        }
    }

    #[test]
    fn projector_commutes_with_boundary() {
        for ec in [swapped_circles_simplicial(), reflected_circle()] {
            for q in 1..=ec.complex().top_degree() {
                let boundary = ec.complex().boundary(q);
                let left = boundary.mul(&ec.alt_projector(q).unwrap()).unwrap();
                let right = ec.alt_projector(q - 1).unwrap().mul(&boundary).unwrap();
                assert_eq!(left, right);
            }
        }
    }

    #[test]
    fn validation_reports_violations() {
        let ec = swapped_circles_simplicial();
        assert!(ec.validate().is_valid());

        // Break the chain-map law: swap vertices without swapping edges.
        let complex = swapped_circles_simplicial().complex.clone();
        let swap6 = {
            let mut m = SparseMatrix::zero(6, 6);
            for v in 0..6 {
                m.set((v + 3) % 6, v, Rat::one());
            }
            m
        };
        let action =
            SymmetricAction::new(2, vec![vec![swap6, SparseMatrix::identity(6)]]).unwrap();
        let broken = EquivariantComplex::new(complex, action).unwrap();
        let report = broken.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| v.contains("not a chain map")));

        // Break an involution.
        let complex = ChainComplex::new(vec![2], vec![]).unwrap();
        let not_involution = SparseMatrix::from_int_rows(&[&[0, -1], &[1, 0]]);
        let ec = EquivariantComplex::new(
            complex,
            SymmetricAction::new(2, vec![vec![not_involution]]).unwrap(),
        )
        .unwrap();
        assert!(ec
            .validate()
            .violations
            .iter()
            .any(|v| v.contains("not an involution")));

        // Break a braid relation in S_3: a sign flip is an involution but
        // (s1 s2)^3 has order 2, not 3.
        let complex = ChainComplex::new(vec![3], vec![]).unwrap();
        let s1 = SparseMatrix::from_int_rows(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        let s2_bad = SparseMatrix::from_int_rows(&[&[1, 0, 0], &[0, -1, 0], &[0, 0, 1]]);
        let ec = EquivariantComplex::new(
            complex,
            SymmetricAction::new(3, vec![vec![s1], vec![s2_bad]]).unwrap(),
        )
        .unwrap();
        let report = ec.validate();
        assert!(report.violations.iter().any(|v| v.contains("braid relation")));
        // (The all-positive rule only applies to degree 0 vertices.)
        assert!(report.violations.iter().any(|v| v.contains("degree 0 has negative")));
    }

    #[test]
    fn non_simplicial_action_is_rejected() {
        // Swapping vertices 0 and 1 of the square circle sends the edge
        // {1, 2} to {0, 2}, which is not an edge.
        let err = from_simplicial(
            2,
            4,
            &[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
            &[vec![1, 0, 2, 3]],
        );
        assert!(matches!(err, Err(EquivariantError::NotSimplicial(_))));
        // Degenerate simplices are rejected.
        assert!(matches!(
            from_simplicial(1, 2, &[vec![0, 0]], &[]),
            Err(EquivariantError::NotSimplicial(_))
        ));
    }

    #[test]
    fn simplicial_chain_maps_carry_signs_and_degeneracies() {
        // Reversing an interval flips the edge's orientation.
        let interval: Vec<Vec<usize>> = vec![vec![0, 1]];
        let maps = simplicial_chain_map((2, &interval), (2, &interval), &[1, 0]).unwrap();
        assert_eq!(maps[1], SparseMatrix::from_int_rows(&[&[-1]]));

        // Collapsing a triangle to a point kills its edges.
        let triangle: Vec<Vec<usize>> = vec![vec![0, 1], vec![1, 2], vec![0, 2]];
        let point: Vec<Vec<usize>> = vec![];
        let maps = simplicial_chain_map((3, &triangle), (1, &point), &[0, 0, 0]).unwrap();
        assert_eq!(maps[0], SparseMatrix::from_int_rows(&[&[1, 1, 1]]));
        assert_eq!((maps[1].rows(), maps[1].cols()), (0, 3));

        // Induced maps are chain maps.
        let two_triangles: Vec<Vec<usize>> = vec![
            vec![0, 1],
            vec![1, 2],
            vec![0, 2],
            vec![3, 4],
            vec![4, 5],
            vec![3, 5],
        ];
        let fold =
            simplicial_chain_map((6, &two_triangles), (3, &triangle), &[0, 1, 2, 0, 2, 1])
                .unwrap();
        let src = from_simplicial(1, 6, &two_triangles, &[]).unwrap();
        let tgt = from_simplicial(1, 3, &triangle, &[]).unwrap();
        let lhs = tgt.complex().boundary(1).mul(&fold[1]).unwrap();
        let rhs = fold[0].mul(&src.complex().boundary(1)).unwrap();
        assert_eq!(lhs, rhs);

        // Images must exist in the target.
        let square: Vec<Vec<usize>> = vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]];
        assert!(matches!(
            simplicial_chain_map((4, &square), (4, &square), &[0, 2, 1, 3]),
            Err(EquivariantError::NotSimplicial(_))
        ));
    }

    #[test]
    fn group_too_large_is_refused() {
        let complex = ChainComplex::new(vec![1], vec![]).unwrap();
        let gens = vec![vec![SparseMatrix::identity(1)]; 7];
        let ec = EquivariantComplex::new(
            complex,
            SymmetricAction::new(8, gens).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            ec.alt_projector(0),
            Err(EquivariantError::GroupTooLarge { k: 8 })
        ));
    }

    #[test]
    fn s3_alternating_part_of_the_regular_representation() {
        // S_3 permuting its six group elements by left multiplication: the
        // regular representation contains the sign representation once.
        // Order elements as [e, s1, s2, s1s2, s2s1, s1s2s1].
        let perm_matrix = |images: [usize; 6]| {
            let mut m = SparseMatrix::zero(6, 6);
            for (src, dst) in images.into_iter().enumerate() {
                m.set(dst, src, Rat::one());
            }
            m
        };
        // Left multiplication tables by s1 and s2.
        let s1 = perm_matrix([1, 0, 3, 2, 5, 4]);
        let s2 = perm_matrix([2, 4, 0, 5, 1, 3]);
        let complex = ChainComplex::new(vec![6], vec![]).unwrap();
        let ec = EquivariantComplex::new(
            complex,
            SymmetricAction::new(3, vec![vec![s1], vec![s2]]).unwrap(),
        )
        .unwrap();
        assert!(ec.validate().is_valid());
        let p = ec.alt_projector(0).unwrap();
        assert_eq!(p.mul(&p).unwrap(), p);
        assert_eq!(ec.alt_homology_dims().unwrap(), vec![1]);
    }

    #[test]
    fn documents_build_both_forms() {
        let simplicial = r#"{
            "k": 2,
            "simplicial": {
                "vertices": 6,
                "simplices": [[0,1],[1,2],[0,2],[3,4],[4,5],[3,5]],
                "action": [[3,4,5,0,1,2]]
            }
        }"#;
        let doc: ComplexDoc = serde_json::from_str(simplicial).unwrap();
        let ec = doc.build().unwrap();
        assert_eq!(ec.alt_homology_dims().unwrap(), vec![1, 1]);

        let raw = r#"{
            "k": 2,
            "raw": {
                "basis_sizes": [2, 2],
                "boundaries": [ { "rows": 2, "cols": 2, "entries": [] } ],
                "generators": [[
                    { "rows": 2, "cols": 2, "entries": [[0,1,1],[1,0,1]] },
                    { "rows": 2, "cols": 2, "entries": [[0,1,1],[1,0,1]] }
                ]]
            }
        }"#;
        let doc: ComplexDoc = serde_json::from_str(raw).unwrap();
        let ec = doc.build().unwrap();
        assert_eq!(ec.alt_homology_dims().unwrap(), vec![1, 1]);

        // Rational strings parse; floats are rejected.
        let v = serde_json::json!("3/2");
        assert_eq!(value_to_rat(&v).unwrap(), ratio(3, 2));
        let v = serde_json::json!(1.5);
        assert!(value_to_rat(&v).is_err());

        let bad: ComplexDoc = serde_json::from_str(r#"{ "k": 2 }"#).unwrap();
        assert!(matches!(bad.build(), Err(EquivariantError::Json(_))));
    }
}
