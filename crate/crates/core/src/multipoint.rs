//! Map germs in corank-1 normal form and their multiple point spaces.
//!
//! A [`MapGerm`] is a polynomial map germ `(ℂ^n, 0) → (ℂ^N, 0)` written in
//! the normal form `f(x, u) = (f_1(x, u), …, f_{N-n+1}(x, u), u)` with a
//! single distinguished variable `x` and parameters `u = (u1, …, u_{n-1})`.
//! Only the non-trivial components are stored; the trailing `u` coordinates
//! are implicit. Identifiers in component sources beyond `x` and the `u`s
//! are symbolic coefficients ("parameters" of a family, e.g. `a, b, c`) and
//! become extra ring variables, sorted by name after the source variables.
//!
//! The `k`-th multiple point space `D^k` is cut out, for corank ≤ 1 germs
//! in this normal form, by the iterated divided differences of the
//! components: `f_j[x_1, …, x_m, u]` for every component `j` and every
//! `2 ≤ m ≤ k`, inside `ℚ[x1, …, xk, u…]`. [`dk_ideal`] produces exactly
//! that generator list (component-major, increasing `m`).
//!
//! [`dim_check`] then compares each nonempty `D^k` against the expected
//! dimension `kn - (k-1)N`: a germ is *dimensionally correct* when every
//! nonempty multiple point space attains it (and the spaces with negative
//! expected dimension are empty). Emptiness is decided by `1 ∈ I` on a
//! Gröbner basis, dimension by the leading-monomial combinatorics; both
//! inherit the engine's explicit reduction budget. Since a point of
//! `D^{k+1}` yields points of `D^k` by forgetting a coordinate, emptiness
//! is monotone in `k` and scanning stops at the first empty level.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groebner::{buchberger, GroebnerError, MonomialOrder};
use crate::poly::{
    corank_at_origin, divided_difference_vars, divided_differences, PolyError, Polynomial,
};

#[derive(Debug, Error)]
pub enum MultipointError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("invalid germ: {0}")]
    InvalidGerm(String),
    #[error("invalid germ document: {0}")]
    Json(String),
}

/// JSON document form of a map germ.
///
/// ```json
/// { "n": 2, "N": 3, "components": ["x^2", "u1^2*x"] }
/// ```
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GermDoc {
    pub n: usize,
    #[serde(rename = "N")]
    pub target: usize,
    pub components: Vec<String>,
}

/// A corank ≤ 1 polynomial map germ in normal form.
#[derive(Clone, Debug)]
pub struct MapGerm {
    source_dim: usize,
    target_dim: usize,
    components: Vec<Polynomial>,
    vars: Vec<String>,
    corank: usize,
}

impl MapGerm {
    /// Builds a germ from component sources, inferring the ring
    /// `x, u1, …, u_{n-1}` plus any symbolic parameters (sorted by name).
    pub fn new(
        source_dim: usize,
        target_dim: usize,
        component_srcs: &[&str],
    ) -> Result<Self, MultipointError> {
        if source_dim == 0 || source_dim >= target_dim {
            return Err(MultipointError::InvalidGerm(format!(
                "need 0 < n < N, got n = {source_dim}, N = {target_dim}"
            )));
        }
        let expected_components = target_dim - source_dim + 1;
        if component_srcs.len() != expected_components {
            return Err(MultipointError::InvalidGerm(format!(
                "a germ in normal form with n = {source_dim}, N = {target_dim} has \
                 {expected_components} non-trivial components, got {}",
                component_srcs.len()
            )));
        }
        let mut vars: Vec<String> = Vec::with_capacity(source_dim);
        vars.push("x".to_string());
        for i in 1..source_dim {
            vars.push(format!("u{i}"));
        }
        // Any other identifier is a symbolic parameter — except stray u<j>
        // or x<j> names, which are almost certainly mistakes.
        let mut params: Vec<String> = Vec::new();
        for src in component_srcs {
            for ident in scan_identifiers(src) {
                if vars.contains(&ident) || params.contains(&ident) {
                    continue;
                }
                if let Some(rest) = ident.strip_prefix('u') {
                    if rest.chars().all(|c| c.is_ascii_digit()) && !rest.is_empty() {
                        return Err(MultipointError::InvalidGerm(format!(
                            "component mentions `{ident}` but a source dimension of \
                             {source_dim} only provides u1..u{}",
                            source_dim - 1
                        )));
                    }
                }
                if let Some(rest) = ident.strip_prefix('x') {
                    if rest.chars().all(|c| c.is_ascii_digit()) {
                        return Err(MultipointError::InvalidGerm(format!(
                            "parameter name `{ident}` collides with the multiple-point \
                             copies of x"
                        )));
                    }
                }
                params.push(ident);
            }
        }
        params.sort();
        vars.extend(params);
        let components: Vec<Polynomial> = component_srcs
            .iter()
            .map(|src| Polynomial::parse(src, &vars))
            .collect::<Result<_, _>>()?;
        let corank = corank_at_origin(source_dim, &components)?;
        Ok(MapGerm { source_dim, target_dim, components, vars, corank })
    }

    pub fn from_doc(doc: &GermDoc) -> Result<Self, MultipointError> {
        let srcs: Vec<&str> = doc.components.iter().map(String::as_str).collect();
        Self::new(doc.n, doc.target, &srcs)
    }

    pub fn from_json_str(json: &str) -> Result<Self, MultipointError> {
        let doc: GermDoc =
            serde_json::from_str(json).map_err(|e| MultipointError::Json(e.to_string()))?;
        Self::from_doc(&doc)
    }

    pub fn to_doc(&self) -> GermDoc {
        GermDoc {
            n: self.source_dim,
            target: self.target_dim,
            components: self.components.iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    /// Full ring of the components: source variables then parameters.
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Names of the symbolic parameters (ring variables beyond the source).
    pub fn params(&self) -> &[String] {
        &self.vars[self.source_dim..]
    }

    pub fn corank(&self) -> usize {
        self.corank
    }
}

/// Extracts identifier tokens (the polynomial grammar's variable names).
fn scan_identifiers(src: &str) -> Vec<String> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_ascii_alphabetic() || chars[i] == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(chars[start..i].iter().collect());
        } else {
            i += 1;
        }
    }
    out
}

/// The ideal of the `k`-th multiple point space.
#[derive(Clone, Debug)]
pub struct MultiplePointIdeal {
    pub k: usize,
    /// Ring: `x1, …, xk`, then `u1, …`, then parameters.
    pub vars: Vec<String>,
    /// Divided-difference generators, component-major, increasing depth.
    pub generators: Vec<Polynomial>,
}

/// Generators of the `D^k` ideal of a germ: for every component `f_j`, the
/// iterated divided differences `f_j[x1, …, xm]` for `m = 2, …, k`.
pub fn dk_ideal(germ: &MapGerm, k: usize) -> Result<MultiplePointIdeal, MultipointError> {
    if k < 2 {
        return Err(MultipointError::InvalidGerm(format!(
            "multiple point spaces start at k = 2, got k = {k}"
        )));
    }
    let mut generators = Vec::new();
    let mut vars: Option<Vec<String>> = None;
    for f in &germ.components {
        if vars.is_none() {
            vars = Some(divided_difference_vars(f, k)?);
        }
        if f.is_zero() {
            // Divided differences of 0 vanish; keep them as explicit zero
            // generators so the count stays components × (k - 1).
            let ring = vars.as_ref().expect("set above");
            generators.extend(std::iter::repeat_n(Polynomial::zero(ring), k - 1));
            continue;
        }
        generators.extend(divided_differences(f, k)?);
    }
    Ok(MultiplePointIdeal {
        k,
        vars: vars.expect("germs have at least one component"),
        generators,
    })
}

/// Expected dimension of `D^k` for a stable perturbation: `kn - (k-1)N`.
pub fn expected_dim(source_dim: usize, target_dim: usize, k: usize) -> i64 {
    k as i64 * source_dim as i64 - (k as i64 - 1) * target_dim as i64
}

/// Largest `k` with non-negative expected dimension, `⌊N/(N-n)⌋`.
pub fn stable_range_max(source_dim: usize, target_dim: usize) -> usize {
    target_dim / (target_dim - source_dim)
}

/// Default scan depth for [`dim_check`]: one past the stable range, so an
/// unexpectedly nonempty level right above it is still caught and flagged.
pub fn default_kmax(source_dim: usize, target_dim: usize) -> usize {
    stable_range_max(source_dim, target_dim) + 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DimVerdict {
    DimensionallyCorrect,
    NotDimensionallyCorrect,
    /// No empty level was reached before `kmax`; correctness of the deeper
    /// multiple point spaces remains unchecked.
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimCheckRecord {
    pub k: usize,
    pub expected_dim: i64,
    pub is_empty: bool,
    /// Dimension of the nonempty `D^k` (over the full ring, parameters
    /// included); `None` when empty.
    pub actual_dim: Option<usize>,
    /// Whether the nonempty level attains the expected dimension; `None`
    /// when empty.
    pub matches: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimCheckReport {
    pub source_dim: usize,
    pub target_dim: usize,
    pub corank: usize,
    pub kmax: usize,
    pub records: Vec<DimCheckRecord>,
    pub verdict: DimVerdict,
    pub notes: Vec<String>,
}

/// Scans `D^2, D^3, …` up to `kmax` (or the first empty level) and checks
/// each nonempty level against its expected dimension.
///
/// When the germ carries symbolic parameters, every `D^k` is fibered over
/// the parameter space, so the expectation is raised by the parameter count;
/// a note in the report records this.
pub fn dim_check(
    germ: &MapGerm,
    kmax: usize,
    budget: u64,
) -> Result<DimCheckReport, MultipointError> {
    let (n, target) = (germ.source_dim(), germ.target_dim());
    let params = germ.params().len();
    let mut notes = Vec::new();
    if params > 0 {
        notes.push(format!(
            "germ has {params} symbolic parameter(s); dimensions are checked against \
             expected + {params}"
        ));
    }
    let mut records = Vec::new();
    let mut all_match = true;
    let mut reached_empty = false;
    for k in 2..=kmax {
        let ideal = dk_ideal(germ, k)?;
        let basis = buchberger(&ideal.generators, MonomialOrder::GrevLex, budget)?;
        let expected = expected_dim(n, target, k);
        match basis.dimension() {
            None => {
                records.push(DimCheckRecord {
                    k,
                    expected_dim: expected,
                    is_empty: true,
                    actual_dim: None,
                    matches: None,
                });
                reached_empty = true;
                break;
            }
            Some(dim) => {
                let adjusted = expected + params as i64;
                let ok = adjusted >= 0 && dim as i64 == adjusted;
                if !ok {
                    all_match = false;
                }
                if k > stable_range_max(n, target) {
                    notes.push(format!(
                        "D^{k} is nonempty beyond the stable range k <= {}",
                        stable_range_max(n, target)
                    ));
                }
                records.push(DimCheckRecord {
                    k,
                    expected_dim: expected,
                    is_empty: false,
                    actual_dim: Some(dim),
                    matches: Some(ok),
                });
            }
        }
    }
    let verdict = if !all_match {
        DimVerdict::NotDimensionallyCorrect
    } else if reached_empty {
        DimVerdict::DimensionallyCorrect
    } else {
        DimVerdict::Inconclusive
    };
    Ok(DimCheckReport {
        source_dim: n,
        target_dim: target,
        corank: germ.corank(),
        kmax,
        records,
        verdict,
        notes,
    })
}
