//! A small exact Buchberger engine.
//!
//! Just enough Gröbner machinery for multiple point space ideals at desk
//! scale: reduced bases over ℚ in grevlex (default) or lex, normal forms,
//! an emptiness test (`1 ∈ I`), and the dimension of the vanishing locus
//! read off the leading monomials of a basis.
//!
//! Design choices, fixed for determinism and honesty about cost:
//!
//! * pair selection is the normal strategy (lowest lcm total degree first,
//!   then lowest indices);
//! * the only pruning is Buchberger's coprime-leading-monomial criterion;
//! * every S-polynomial reduction counts against an explicit budget
//!   ([`DEFAULT_BUDGET`] unless overridden), and exhausting it is a hard
//!   [`GroebnerError::BudgetExceeded`] — never a silent partial answer;
//! * returned bases are reduced (minimal, monic, tails in normal form) and
//!   sorted by leading monomial, so equal ideals yield identical bases.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::One;
use thiserror::Error;

use crate::poly::{Monomial, PolyError, Polynomial};
use crate::rational::Rat;

/// Default cap on S-polynomial reductions.
pub const DEFAULT_BUDGET: u64 = 10_000;

/// Monomial orders understood by the engine. Variable significance is the
/// ring's declared order in both cases (`x1 > x2 > … > u1 > …`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    GrevLex,
    Lex,
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::GrevLex => a.cmp_grevlex(b),
            MonomialOrder::Lex => a.cmp_lex(b),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("Gröbner budget exceeded: more than {budget} S-polynomial reductions")]
    BudgetExceeded { budget: u64 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A reduced Gröbner basis together with the order it was computed in.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    order: MonomialOrder,
    vars: Vec<String>,
    elements: Vec<Polynomial>,
}

impl GroebnerBasis {
    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Basis elements, monic and sorted by increasing leading monomial.
    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    /// Leading monomials of the basis elements.
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements
            .iter()
            .map(|g| {
                g.leading_term(|a, b| self.order.cmp(a, b))
                    .expect("basis elements are nonzero")
                    .0
                    .clone()
            })
            .collect()
    }

    /// Whether the ideal is the unit ideal (vanishing locus empty).
    pub fn contains_one(&self) -> bool {
        self.elements.iter().any(|g| !g.is_zero() && g.total_degree() == Some(0))
    }

    /// Full normal form of `f` modulo the basis: the unique remainder none
    /// of whose terms is divisible by a basis leading monomial. `f` is in
    /// the ideal iff this is zero.
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial, GroebnerError> {
        if f.vars() != self.vars.as_slice() {
            return Err(GroebnerError::Poly(PolyError::VariableMismatch(format!(
                "[{}] vs basis ring [{}]",
                f.vars().join(", "),
                self.vars.join(", ")
            ))));
        }
        Ok(reduce(f, &self.elements, self.order))
    }

    /// Dimension of the vanishing locus of the ideal in affine space over
    /// all ring variables: `None` when the locus is empty (`1 ∈ I`), the
    /// dimension of the initial-ideal complement otherwise.
    pub fn dimension(&self) -> Option<usize> {
        if self.contains_one() {
            return None;
        }
        if self.elements.is_empty() {
            return Some(self.vars.len());
        }
        monomial_dim(&self.leading_monomials(), self.vars.len())
    }
}

/// Buchberger's algorithm: the reduced Gröbner basis of the ideal generated
/// by `gens`. `budget` caps the number of S-polynomial reductions.
pub fn buchberger(
    gens: &[Polynomial],
    order: MonomialOrder,
    budget: u64,
) -> Result<GroebnerBasis, GroebnerError> {
    let vars: Vec<String> = gens
        .first()
        .map(|g| g.vars().to_vec())
        .unwrap_or_default();
    for g in gens {
        if g.vars() != vars.as_slice() {
            return Err(GroebnerError::Poly(PolyError::VariableMismatch(format!(
                "generators live in different rings ([{}] vs [{}])",
                vars.join(", "),
                g.vars().join(", ")
            ))));
        }
    }
    let mut basis: Vec<Polynomial> = Vec::new();
    for g in gens {
        if !g.is_zero() {
            basis.push(make_monic(g, order));
        }
    }
    // Normal strategy: pairs keyed by (lcm total degree, i, j).
    let mut pairs: BTreeSet<(u64, usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.insert(pair_key(&basis, i, j, order));
        }
    }
    let mut reductions: u64 = 0;
    while let Some(&key) = pairs.iter().next() {
        pairs.remove(&key);
        let (_, i, j) = key;
        let (lm_i, lm_j) = (leading_monomial(&basis[i], order), leading_monomial(&basis[j], order));
        // Coprime criterion: if lcm = product, the S-polynomial reduces to 0.
        if lm_i.lcm(&lm_j) == lm_i.mul(&lm_j) {
            continue;
        }
        if reductions >= budget {
            return Err(GroebnerError::BudgetExceeded { budget });
        }
        reductions += 1;
        let s = s_polynomial(&basis[i], &basis[j], order)?;
        let r = reduce(&s, &basis, order);
        if !r.is_zero() {
            let r = make_monic(&r, order);
            basis.push(r);
            let new = basis.len() - 1;
            for i in 0..new {
                pairs.insert(pair_key(&basis, i, new, order));
            }
        }
    }
    Ok(GroebnerBasis { order, vars, elements: reduce_basis(basis, order) })
}

/// Full reduction of `f` by `basis` (first applicable reducer, biggest term
/// first): the remainder has no term divisible by any basis leading monomial.
fn reduce(f: &Polynomial, basis: &[Polynomial], order: MonomialOrder) -> Polynomial {
    let vars = f.vars().to_vec();
    let mut rem = f.clone();
    let mut out = Polynomial::zero(&vars);
    let leads: Vec<(Monomial, Rat)> = basis
        .iter()
        .map(|g| {
            let (m, c) = g.leading_term(|a, b| order.cmp(a, b)).expect("nonzero basis element");
            (m.clone(), c.clone())
        })
        .collect();
    loop {
        let Some((rm, rc)) = rem
            .leading_term(|a, b| order.cmp(a, b))
            .map(|(m, c)| (m.clone(), c.clone()))
        else {
            break;
        };
        let mut reduced = false;
        for (g, (gm, gc)) in basis.iter().zip(&leads) {
            if let Some(q) = gm.quotient(&rm) {
                let t = Polynomial::from_terms(&vars, [(q, &rc / gc)]);
                rem = rem.sub(&t.mul(g).expect("same ring")).expect("same ring");
                reduced = true;
                break;
            }
        }
        if !reduced {
            let t = Polynomial::from_terms(&vars, [(rm, rc)]);
            out = out.add(&t).expect("same ring");
            rem = rem.sub(&t).expect("same ring");
        }
    }
    out
}

fn leading_monomial(g: &Polynomial, order: MonomialOrder) -> Monomial {
    g.leading_term(|a, b| order.cmp(a, b)).expect("nonzero").0.clone()
}

fn make_monic(g: &Polynomial, order: MonomialOrder) -> Polynomial {
    let (_, c) = g.leading_term(|a, b| order.cmp(a, b)).expect("nonzero");
    let inv = Rat::one() / c.clone();
    g.scale(&inv)
}

fn pair_key(basis: &[Polynomial], i: usize, j: usize, order: MonomialOrder) -> (u64, usize, usize) {
    let lcm = leading_monomial(&basis[i], order).lcm(&leading_monomial(&basis[j], order));
    (lcm.degree(), i, j)
}

fn s_polynomial(
    f: &Polynomial,
    g: &Polynomial,
    order: MonomialOrder,
) -> Result<Polynomial, PolyError> {
    // Both inputs are monic.
    let lm_f = leading_monomial(f, order);
    let lm_g = leading_monomial(g, order);
    let lcm = lm_f.lcm(&lm_g);
    let tf = Polynomial::from_terms(f.vars(), [(lm_f.quotient(&lcm).expect("divides"), Rat::one())]);
    let tg = Polynomial::from_terms(g.vars(), [(lm_g.quotient(&lcm).expect("divides"), Rat::one())]);
    tf.mul(f)?.sub(&tg.mul(g)?)
}

/// Minimalizes and tail-reduces a basis; output sorted by leading monomial.
fn reduce_basis(basis: Vec<Polynomial>, order: MonomialOrder) -> Vec<Polynomial> {
    let mut sorted = basis;
    sorted.sort_by(|a, b| order.cmp(&leading_monomial(a, order), &leading_monomial(b, order)));
    // Minimal generators: keep an element only if no kept leading monomial
    // divides its own.
    let mut kept: Vec<Polynomial> = Vec::new();
    for g in sorted {
        let lm = leading_monomial(&g, order);
        if !kept.iter().any(|h| leading_monomial(h, order).divides(&lm)) {
            kept.push(g);
        }
    }
    // Tail reduction: normal form of each element against all the others.
    let snapshot = kept.clone();
    for (i, g) in kept.iter_mut().enumerate() {
        let others: Vec<Polynomial> = snapshot
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, h)| h.clone())
            .collect();
        *g = reduce(g, &others, order);
    }
    kept
}

/// Dimension of the vanishing locus of a monomial ideal: the largest size
/// of a variable subset `S` such that no listed monomial has support inside
/// `S` — equivalently `nvars` minus a minimum hitting set of the supports.
/// Returns `None` when a constant monomial is present (empty locus).
pub fn monomial_dim(monomials: &[Monomial], nvars: usize) -> Option<usize> {
    let mut supports: BTreeSet<Vec<usize>> = BTreeSet::new();
    for m in monomials {
        let s: Vec<usize> = m.support().collect();
        if s.is_empty() {
            return None;
        }
        supports.insert(s);
    }
    // Drop supersets: hitting a subset hits every superset.
    let list: Vec<Vec<usize>> = supports.iter().cloned().collect();
    let minimal: Vec<Vec<usize>> = list
        .iter()
        .filter(|s| {
            !list.iter().any(|t| {
                t.len() < s.len() && t.iter().all(|v| s.contains(v))
            })
        })
        .cloned()
        .collect();
    Some(nvars - min_hitting_set(&minimal))
}

/// Exact minimum hitting set by branch and bound on the smallest support.
fn min_hitting_set(supports: &[Vec<usize>]) -> usize {
    if supports.is_empty() {
        return 0;
    }
    let pivot = supports.iter().min_by_key(|s| s.len()).expect("nonempty");
    let mut best = usize::MAX;
    for &v in pivot {
        let rest: Vec<Vec<usize>> = supports
            .iter()
            .filter(|s| !s.contains(&v))
            .cloned()
            .collect();
        best = best.min(1 + min_hitting_set(&rest));
    }
    best
}

/// Whether two bases (over the same ring) generate the same ideal, decided
/// by mutual zero normal forms.
pub fn same_ideal(a: &GroebnerBasis, b: &GroebnerBasis) -> Result<bool, GroebnerError> {
    for g in a.elements() {
        if !b.normal_form(g)?.is_zero() {
            return Ok(false);
        }
    }
    for g in b.elements() {
        if !a.normal_form(g)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
