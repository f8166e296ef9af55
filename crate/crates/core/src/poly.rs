//! Multivariate polynomials over ℚ.
//!
//! A [`Polynomial`] carries its own ordered variable list; operations on two
//! polynomials require identical lists and fail with
//! [`PolyError::VariableMismatch`] otherwise. Terms are stored sparsely and
//! printed canonically (graded-lexicographic order, biggest term first,
//! variables in declared order), so `parse` and `Display` round-trip.
//!
//! Beyond ring arithmetic the module provides the three operations the rest
//! of the crate is built on:
//!
//! * [`Polynomial::exact_div`] — exact multivariate division, used to peel
//!   off the linear factors `x_m - x_{m-1}` that divided differences
//!   produce;
//! * [`divided_differences`] — the iterated divided differences
//!   `f[x_1, …, x_m]` of a polynomial in a distinguished variable `x`
//!   (always the first ring variable), for `m = 2, …, k`; these are the
//!   generators of the multiple point space ideals;
//! * [`corank_at_origin`] — the corank of a polynomial map germ at the
//!   origin, via the rank of its Jacobian there.
//!
//! Variable naming convention used throughout the crate: the distinguished
//! source variable is `x`, its copies on the k-fold product are `x1, …, xk`,
//! the remaining source coordinates are `u1, …`, and any other identifiers
//! are symbolic parameters carried along as extra ring variables.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{parse_rat, Rat};

/// Errors from polynomial construction and arithmetic.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable mismatch: {0}")]
    VariableMismatch(String),
    #[error("not divisible: remainder is nonzero")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("germ is not centered: {0}")]
    NotCentered(String),
}

/// An exponent vector; one entry per ring variable.
///
/// The derived `Ord` is only a storage order for term maps. Semantic
/// comparisons go through [`Monomial::cmp_deglex`], [`Monomial::cmp_grevlex`]
/// and [`Monomial::cmp_lex`], all of which treat earlier variables as bigger.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    /// The constant monomial `1` on `nvars` variables.
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn of(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Indices of variables with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient(&self, other: &Monomial) -> Option<Monomial> {
        if self.divides(other) {
            Some(Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect()))
        } else {
            None
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    /// Graded lexicographic: total degree first, then left-to-right.
    pub fn cmp_deglex(&self, other: &Monomial) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }

    /// Graded reverse lexicographic: total degree first, then the monomial
    /// with the *smaller* exponent at the last differing variable is bigger.
    pub fn cmp_grevlex(&self, other: &Monomial) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for i in (0..self.0.len()).rev() {
                match self.0[i].cmp(&other.0[i]) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {}
                }
            }
            Ordering::Equal
        })
    }

    /// Plain lexicographic, earlier variables first.
    pub fn cmp_lex(&self, other: &Monomial) -> Ordering {
        self.0.cmp(&other.0)
    }
}

/// A multivariate polynomial over ℚ with an explicit ordered variable list.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rat>,
}

/// Convenience: builds an owned variable list from string slices.
pub fn var_list(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

impl Polynomial {
    pub fn zero(vars: &[String]) -> Self {
        Polynomial { vars: vars.to_vec(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[String], c: Rat) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn one(vars: &[String]) -> Self {
        Self::constant(vars, Rat::one())
    }

    /// The polynomial consisting of the single variable `name`.
    pub fn variable(vars: &[String], name: &str) -> Result<Self, PolyError> {
        let idx = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        Ok(Self::variable_by_index(vars, idx))
    }

    pub fn variable_by_index(vars: &[String], idx: usize) -> Self {
        assert!(idx < vars.len());
        let mut exps = vec![0; vars.len()];
        exps[idx] = 1;
        let mut p = Self::zero(vars);
        p.terms.insert(Monomial(exps), Rat::one());
        p
    }

    /// Builds from `(monomial, coefficient)` pairs; duplicates accumulate.
    pub fn from_terms<I>(vars: &[String], terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rat)>,
    {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), vars.len(), "monomial arity mismatch");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        let cur = self.terms.remove(&m).unwrap_or_else(Rat::zero) + c;
        if !cur.is_zero() {
            self.terms.insert(m, cur);
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Degree in a single variable; `None` for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exps()[var]).max()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coefficient(&Monomial::one(self.nvars()))
    }

    /// Coefficient of the pure degree-one monomial in `var`.
    pub fn linear_coefficient(&self, var: usize) -> Rat {
        let mut exps = vec![0; self.nvars()];
        exps[var] = 1;
        self.coefficient(&Monomial(exps))
    }

    fn check_same_vars(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.vars != other.vars {
            return Err(PolyError::VariableMismatch(format!(
                "[{}] vs [{}]",
                self.vars.join(", "),
                other.vars.join(", ")
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_same_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> Polynomial {
        if s.is_zero() {
            return Self::zero(&self.vars);
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = &*c * s;
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_same_vars(other)?;
        let mut out = Self::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Self::one(&self.vars);
        for _ in 0..e {
            out = out.mul(self).expect("same ring");
        }
        out
    }

    /// Leading term under the given monomial comparison.
    pub fn leading_term(
        &self,
        cmp: impl Fn(&Monomial, &Monomial) -> Ordering,
    ) -> Option<(&Monomial, &Rat)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| cmp(a, b))
            .map(|(m, c)| (m, c))
    }

    /// Exact division: returns `q` with `self == q * divisor`, or
    /// [`PolyError::NotDivisible`] if no such polynomial exists.
    pub fn exact_div(&self, divisor: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_same_vars(divisor)?;
        if divisor.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let (dm, dc) = {
            let (m, c) = divisor.leading_term(Monomial::cmp_deglex).expect("nonzero");
            (m.clone(), c.clone())
        };
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.vars);
        loop {
            let Some((rm, rc)) = rem
                .leading_term(Monomial::cmp_deglex)
                .map(|(m, c)| (m.clone(), c.clone()))
            else {
                break;
            };
            let Some(qm) = dm.quotient(&rm) else {
                return Err(PolyError::NotDivisible);
            };
            let qc = &rc / &dc;
            let mut t = Self::zero(&self.vars);
            t.terms.insert(qm, qc);
            rem = rem.sub(&t.mul(divisor)?)?;
            quot = quot.add(&t)?;
        }
        Ok(quot)
    }

    /// Substitutes the polynomial `by` (same ring) for variable `var`.
    pub fn substitute(&self, var: usize, by: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_same_vars(by)?;
        let max_e = self.degree_in(var).unwrap_or(0);
        let mut powers = Vec::with_capacity(max_e as usize + 1);
        powers.push(Self::one(&self.vars));
        for e in 1..=max_e {
            let next = powers[(e - 1) as usize].mul(by)?;
            powers.push(next);
        }
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.exps()[var];
            let mut exps = m.exps().to_vec();
            exps[var] = 0;
            let base = Self::from_terms(&self.vars, [(Monomial(exps), c.clone())]);
            out = out.add(&base.mul(&powers[e as usize])?)?;
        }
        Ok(out)
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Polynomial {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.exps()[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[var] = e - 1;
            out.add_term(Monomial(exps), c * Rat::from_integer(e.into()));
        }
        out
    }

    /// Re-expresses the polynomial in a superset ring, matching variables by
    /// name. Fails if a used variable is missing from `new_vars`.
    pub fn into_vars(&self, new_vars: &[String]) -> Result<Polynomial, PolyError> {
        let mapping: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| new_vars.iter().position(|w| w == v))
            .collect();
        let mut out = Self::zero(new_vars);
        for (m, c) in &self.terms {
            let mut exps = vec![0; new_vars.len()];
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match mapping[i] {
                    Some(j) => exps[j] = e,
                    None => {
                        return Err(PolyError::VariableMismatch(format!(
                            "variable `{}` is not present in the target ring",
                            self.vars[i]
                        )))
                    }
                }
            }
            out.add_term(Monomial(exps), c.clone());
        }
        Ok(out)
    }

    /// Parses the text syntax: rational coefficients, `^` powers, `*`
    /// products, `+`/`-` sums, e.g. `x^2 + u1^2*x - 3/2*x^3`.
    pub fn parse(src: &str, vars: &[String]) -> Result<Polynomial, PolyError> {
        Parser::new(src, vars)?.parse()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Monomial, &Rat)> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| b.cmp_deglex(a));
        for (i, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -(*c).clone() } else { (*c).clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_constant() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                let mut first = true;
                for (v, &e) in self.vars.iter().zip(m.exps()) {
                    if e == 0 {
                        continue;
                    }
                    if !first {
                        write!(f, "*")?;
                    }
                    first = false;
                    if e == 1 {
                        write!(f, "{v}")?;
                    } else {
                        write!(f, "{v}^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({})", self.vars.join(","), self)
    }
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    fn new(src: &str, vars: &'a [String]) -> Result<Self, PolyError> {
        let mut tokens = Vec::new();
        let chars: Vec<char> = src.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            match c {
                c if c.is_whitespace() => i += 1,
                '+' => {
                    tokens.push(Token::Plus);
                    i += 1;
                }
                '-' => {
                    tokens.push(Token::Minus);
                    i += 1;
                }
                '*' => {
                    tokens.push(Token::Star);
                    i += 1;
                }
                '^' => {
                    tokens.push(Token::Caret);
                    i += 1;
                }
                '/' => {
                    tokens.push(Token::Slash);
                    i += 1;
                }
                c if c.is_ascii_digit() => {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    tokens.push(Token::Num(chars[start..i].iter().collect()));
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let start = i;
                    while i < chars.len()
                        && (chars[i].is_ascii_alphanumeric() || chars[i] == '_')
                    {
                        i += 1;
                    }
                    tokens.push(Token::Ident(chars[start..i].iter().collect()));
                }
                other => {
                    return Err(PolyError::Parse(format!("unexpected character `{other}`")));
                }
            }
        }
        Ok(Parser { tokens, pos: 0, vars })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn parse(&mut self) -> Result<Polynomial, PolyError> {
        let p = self.parse_expr()?;
        if let Some(t) = self.peek() {
            return Err(PolyError::Parse(format!("trailing input at `{t:?}`")));
        }
        Ok(p)
    }

    fn parse_expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut negate = false;
        match self.peek() {
            Some(Token::Minus) => {
                self.bump();
                negate = true;
            }
            Some(Token::Plus) => {
                self.bump();
            }
            _ => {}
        }
        let mut acc = self.parse_term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    let t = self.parse_term()?;
                    acc = acc.add(&t)?;
                }
                Some(Token::Minus) => {
                    self.bump();
                    let t = self.parse_term()?;
                    acc = acc.sub(&t)?;
                }
                None => return Ok(acc),
                Some(t) => {
                    return Err(PolyError::Parse(format!("expected `+` or `-`, found `{t:?}`")))
                }
            }
        }
    }

    fn parse_term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.parse_factor()?;
        while self.peek() == Some(&Token::Star) {
            self.bump();
            let f = self.parse_factor()?;
            acc = acc.mul(&f)?;
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<Polynomial, PolyError> {
        match self.bump() {
            Some(Token::Num(n)) => {
                let mut text = n;
                if self.peek() == Some(&Token::Slash) {
                    self.bump();
                    match self.bump() {
                        Some(Token::Num(d)) => {
                            if d.chars().all(|c| c == '0') {
                                return Err(PolyError::Parse(
                                    "zero denominator in coefficient".into(),
                                ));
                            }
                            text = format!("{text}/{d}");
                        }
                        other => {
                            return Err(PolyError::Parse(format!(
                                "expected denominator after `/`, found `{other:?}`"
                            )))
                        }
                    }
                }
                let c = parse_rat(&text).map_err(PolyError::Parse)?;
                Ok(Polynomial::constant(self.vars, c))
            }
            Some(Token::Ident(name)) => {
                let base = Polynomial::variable(self.vars, &name)?;
                if self.peek() == Some(&Token::Caret) {
                    self.bump();
                    match self.bump() {
                        Some(Token::Num(e)) => {
                            let e: u32 = e.parse().map_err(|_| {
                                PolyError::Parse(format!("exponent `{e}` out of range"))
                            })?;
                            Ok(base.pow(e))
                        }
                        other => Err(PolyError::Parse(format!(
                            "expected integer exponent after `^`, found `{other:?}`"
                        ))),
                    }
                } else {
                    Ok(base)
                }
            }
            other => Err(PolyError::Parse(format!(
                "expected a number or variable, found `{other:?}`"
            ))),
        }
    }
}

// ---------------------------------------------------------------------------
// Divided differences and corank
// ---------------------------------------------------------------------------

/// Returns the variable list `x1, …, xk` followed by the non-distinguished
/// variables of `f`'s ring (parameters `u…` and any symbolic coefficients).
pub fn divided_difference_vars(f: &Polynomial, k: usize) -> Result<Vec<String>, PolyError> {
    if f.vars().first().map(String::as_str) != Some("x") {
        return Err(PolyError::VariableMismatch(
            "divided differences need the distinguished first variable `x`".into(),
        ));
    }
    let mut vars: Vec<String> = (1..=k).map(|i| format!("x{i}")).collect();
    for v in &f.vars()[1..] {
        if vars.contains(v) {
            return Err(PolyError::VariableMismatch(format!(
                "ring variable `{v}` collides with a divided-difference variable"
            )));
        }
        vars.push(v.clone());
    }
    Ok(vars)
}

/// Iterated divided differences of `f` with respect to its distinguished
/// first variable `x`: returns `[f[x1,x2], f[x1,x2,x3], …, f[x1,…,xk]]`
/// (length `k - 1`), all in the ring `x1, …, xk` plus the remaining
/// variables of `f`'s ring.
///
/// The first divided difference is `(f(x2) - f(x1)) / (x2 - x1)`, and each
/// later one substitutes the fresh variable for the last and divides by the
/// new difference again. Every division here is exact — the numerator is
/// antisymmetric in the two variables involved, hence divisible.
pub fn divided_differences(f: &Polynomial, k: usize) -> Result<Vec<Polynomial>, PolyError> {
    assert!(k >= 2, "divided differences start at k = 2");
    let vars = divided_difference_vars(f, k)?;
    // f(x1): rename x -> x1 into the big ring.
    let renamed: Vec<String> =
        std::iter::once("x1".to_string()).chain(f.vars()[1..].iter().cloned()).collect();
    let mut current = Polynomial { vars: renamed, terms: f.terms.clone() }.into_vars(&vars)?;
    let mut out = Vec::with_capacity(k - 1);
    for m in 2..=k {
        // Indices of x_{m-1} and x_m in the big ring.
        let prev_var = m - 2;
        let next_var = m - 1;
        let shifted = current.substitute(prev_var, &Polynomial::variable_by_index(&vars, next_var))?;
        let numer = shifted.sub(&current)?;
        let denom = Polynomial::variable_by_index(&vars, next_var)
            .sub(&Polynomial::variable_by_index(&vars, prev_var))?;
        current = numer.exact_div(&denom)?;
        out.push(current.clone());
    }
    Ok(out)
}

/// The single iterated divided difference `f[x1, …, xk]`.
pub fn divided_difference_chain(f: &Polynomial, k: usize) -> Result<Polynomial, PolyError> {
    Ok(divided_differences(f, k)?.pop().expect("k >= 2 yields at least one"))
}

/// Corank at the origin of the germ with the given non-trivial components.
///
/// The germ is in normal form: source coordinates are the first `n` ring
/// variables `(x, u1, …, u_{n-1})`, the listed components are the non-`u`
/// target coordinates, and the remaining target coordinates are the `u`s
/// themselves. The corank is `n` minus the rank at the origin of the full
/// Jacobian (components' differentials plus the identity block on the `u`s).
/// Components must vanish at the origin.
pub fn corank_at_origin(n: usize, components: &[Polynomial]) -> Result<usize, PolyError> {
    assert!(n >= 1, "source dimension must be positive");
    let mut jac = crate::linalg::SparseMatrix::zero(components.len() + n - 1, n);
    for (j, f) in components.iter().enumerate() {
        if f.nvars() < n {
            return Err(PolyError::VariableMismatch(format!(
                "component `{f}` has fewer than {n} variables"
            )));
        }
        if !f.constant_term().is_zero() {
            return Err(PolyError::NotCentered(format!(
                "component `{f}` does not vanish at the origin"
            )));
        }
        for v in 0..n {
            jac.set(j, v, f.linear_coefficient(v));
        }
    }
    for i in 0..n - 1 {
        jac.set(components.len() + i, i + 1, Rat::one());
    }
    Ok(n - jac.rank())
}
