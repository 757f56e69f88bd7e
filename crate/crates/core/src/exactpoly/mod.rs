//! Exact polynomial arithmetic over the rationals.
//!
//! [`Poly`] is a sparse multivariate polynomial whose terms are kept in
//! degree-lexicographic order. Variables carry names; binary operations
//! align the two variable lists first, so `x + y` just works. The
//! canonical variable order is `u, v, t, x, y`, then any other name
//! alphabetically.
//!
//! Everything here is exact. The algorithms stop at gcd, squarefree part
//! and Sylvester resultants; there is no factorization.

mod algo;
mod parse;
mod upoly;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use algo::{determinant, gcd, gcd_many, resultant, squarefree_part};
pub use parse::parse_poly;
pub use upoly::UPoly;

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    s.trim()
        .parse::<Rat>()
        .map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
}

/// Exact square root, if the rational is a square.
pub fn rat_sqrt(q: &Rat) -> Option<Rat> {
    if q.is_negative() {
        return None;
    }
    let n = num_integer::Roots::sqrt(q.numer());
    let d = num_integer::Roots::sqrt(q.denom());
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rat::new(n, d))
}

const CANONICAL_VARS: [&str; 5] = ["u", "v", "t", "x", "y"];

fn var_key(name: &str) -> (usize, &str) {
    let pos = CANONICAL_VARS
        .iter()
        .position(|v| *v == name)
        .unwrap_or(CANONICAL_VARS.len());
    (pos, name)
}

/// Sorts and dedups variable names into canonical order.
pub fn canonical_vars<I, S>(names: I) -> Vec<String>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let mut v: Vec<String> = names.into_iter().map(Into::into).collect();
    v.sort_by(|a, b| var_key(a).cmp(&var_key(b)));
    v.dedup();
    v
}

/// Exponent vector, ordered degree-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug)]
pub struct Poly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly {
            vars: Vec::new(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial(Vec::new()), c);
        }
        Poly {
            vars: Vec::new(),
            terms,
        }
    }

    pub fn int(c: i64) -> Self {
        Self::constant(rat(c))
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(vec![1]), Rat::one());
        Poly {
            vars: vec![name.to_string()],
            terms,
        }
    }

    /// `c * prod(vars[i]^exps[i])`.
    pub fn monomial(vars: &[&str], exps: &[u32], c: Rat) -> Self {
        assert_eq!(vars.len(), exps.len());
        let mut p = Self::constant(c);
        for (v, e) in vars.iter().zip(exps) {
            p = &p * &Self::var(v).pow(*e);
        }
        p
    }

    /// Builds a polynomial from raw terms over a variable list. Variables are
    /// reordered canonically; zero coefficients are dropped.
    pub fn from_terms(vars: &[String], terms: impl IntoIterator<Item = (Vec<u32>, Rat)>) -> Result<Self> {
        let canon = canonical_vars(vars.iter().cloned());
        if canon.len() != vars.len() {
            return Err(Error::domain("duplicate variable names"));
        }
        let perm: Vec<usize> = canon
            .iter()
            .map(|c| vars.iter().position(|v| v == c).unwrap())
            .collect();
        let mut out: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (exps, c) in terms {
            if exps.len() != vars.len() {
                return Err(Error::domain(format!(
                    "exponent vector {exps:?} does not match {} variables",
                    vars.len()
                )));
            }
            let key = Monomial(perm.iter().map(|&i| exps[i]).collect());
            let slot = out.entry(key).or_insert_with(Rat::zero);
            *slot += c;
        }
        out.retain(|_, c| !c.is_zero());
        Ok(Poly { vars: canon, terms: out })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Variables that occur with positive degree.
    pub fn occurring_vars(&self) -> Vec<String> {
        self.vars
            .iter()
            .enumerate()
            .filter(|(i, _)| self.terms.keys().any(|m| m.0[*i] > 0))
            .map(|(_, v)| v.clone())
            .collect()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.total_degree() == 0)
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.is_constant() {
            Some(self.terms.values().next().cloned().unwrap_or_else(Rat::zero))
        } else {
            None
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        match self.var_index(name) {
            Some(i) => self.degree_at(i),
            None => 0,
        }
    }

    fn degree_at(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rat {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::zero)
    }

    /// Homogeneous of some degree (the zero polynomial counts as homogeneous).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(Monomial::total_degree);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, deg: u32) -> bool {
        self.is_zero() || self.homogeneous_degree() == Some(deg)
    }

    /// Re-expresses the polynomial over a superset of its variables.
    pub fn with_vars(&self, vars: &[String]) -> Result<Poly> {
        if self.vars == vars {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            match vars.iter().position(|w| w == v) {
                Some(i) => map.push(Some(i)),
                None => {
                    if self.degree_in(v) > 0 {
                        return Err(Error::domain(format!("variable {v} missing from target list")));
                    }
                    map.push(None);
                }
            }
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut e = vec![0u32; vars.len()];
            for (k, slot) in map.iter().enumerate() {
                if let Some(i) = slot {
                    e[*i] = m.0[k];
                }
            }
            terms.insert(Monomial(e), c.clone());
        }
        Ok(Poly {
            vars: vars.to_vec(),
            terms,
        })
    }

    /// Drops variables that do not occur.
    pub fn trimmed(&self) -> Poly {
        let occ = self.occurring_vars();
        self.with_vars(&occ).expect("occurring vars always embed")
    }

    pub fn unify(a: &Poly, b: &Poly) -> (Poly, Poly) {
        if a.vars == b.vars {
            return (a.clone(), b.clone());
        }
        let vars = canonical_vars(a.vars.iter().chain(&b.vars).cloned());
        (a.with_vars(&vars).unwrap(), b.with_vars(&vars).unwrap())
    }

    /// Aligns a family of polynomials to the union of their variables.
    pub fn unify_all(ps: &[Poly]) -> Vec<Poly> {
        let vars = canonical_vars(ps.iter().flat_map(|p| p.vars.iter().cloned()));
        ps.iter().map(|p| p.with_vars(&vars).unwrap()).collect()
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly {
                vars: self.vars.clone(),
                terms: BTreeMap::new(),
            };
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut result = Poly::one().with_vars(&self.vars).unwrap();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self, name: &str) -> Poly {
        let Some(i) = self.var_index(name) else {
            return Poly {
                vars: self.vars.clone(),
                terms: BTreeMap::new(),
            };
        };
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            terms.insert(m2, c * rat(e as i64));
        }
        Poly {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// Evaluates at a full assignment of the occurring variables.
    pub fn eval(&self, assignment: &BTreeMap<String, Rat>) -> Result<Rat> {
        let mut values = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            match assignment.get(v) {
                Some(val) => values.push(Some(val.clone())),
                None => {
                    if self.degree_at(i) > 0 {
                        return Err(Error::domain(format!("no value assigned to variable {v}")));
                    }
                    values.push(None);
                }
            }
        }
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (k, e) in m.0.iter().enumerate() {
                if *e > 0 {
                    t *= num_traits::pow(values[k].clone().unwrap(), *e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Convenience wrapper for `eval` with `(name, value)` pairs.
    pub fn eval_at(&self, pairs: &[(&str, Rat)]) -> Result<Rat> {
        let map = pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect();
        self.eval(&map)
    }

    /// Substitutes a value for one variable, removing it from the variable list.
    pub fn substitute(&self, name: &str, value: &Rat) -> Poly {
        let Some(i) = self.var_index(name) else {
            return self.clone();
        };
        let vars: Vec<String> = self.vars.iter().filter(|v| *v != name).cloned().collect();
        let mut terms: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = e.remove(i);
            let t = c * num_traits::pow(value.clone(), k as usize);
            let slot = terms.entry(Monomial(e)).or_insert_with(Rat::zero);
            *slot += t;
        }
        terms.retain(|_, c| !c.is_zero());
        Poly { vars, terms }
    }

    /// Substitutes a polynomial for one variable.
    pub fn substitute_poly(&self, name: &str, value: &Poly) -> Poly {
        let Some(i) = self.var_index(name) else {
            return self.clone();
        };
        let deg = self.degree_at(i);
        let coeffs = self.coefficients_in(name);
        let mut acc = Poly::zero();
        let mut power = Poly::one();
        for k in 0..=deg as usize {
            if !coeffs[k].is_zero() {
                acc = &acc + &(&coeffs[k] * &power);
            }
            if k < deg as usize {
                power = &power * value;
            }
        }
        let vars: Vec<String> = canonical_vars(
            acc.vars
                .iter()
                .filter(|v| *v != name || value.degree_in(name) > 0)
                .cloned(),
        );
        acc.with_vars(&vars).unwrap_or(acc)
    }

    /// Coefficients with respect to `name`, indexed by power. Each coefficient
    /// keeps the full variable list but does not involve `name`.
    pub fn coefficients_in(&self, name: &str) -> Vec<Poly> {
        let Some(i) = self.var_index(name) else {
            return vec![self.clone()];
        };
        let deg = self.degree_at(i) as usize;
        let mut out: Vec<BTreeMap<Monomial, Rat>> = vec![BTreeMap::new(); deg + 1];
        for (m, c) in &self.terms {
            let k = m.0[i] as usize;
            let mut m2 = m.clone();
            m2.0[i] = 0;
            out[k].insert(m2, c.clone());
        }
        out.into_iter()
            .map(|terms| Poly {
                vars: self.vars.clone(),
                terms,
            })
            .collect()
    }

    /// Rebuilds `sum coeffs[k] * name^k`.
    pub fn from_coefficients(name: &str, coeffs: &[Poly]) -> Poly {
        let x = Poly::var(name);
        let mut acc = Poly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &(c * &x.pow(k as u32));
            }
        }
        acc
    }

    /// Scales so that the leading coefficient (degree-lex) is one.
    pub fn monic(&self) -> Poly {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    /// Scales to integer coefficients with unit content and positive leading
    /// coefficient. Does not change the zero set.
    pub fn integer_primitive(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        let mut num = BigInt::zero();
        for c in self.terms.values() {
            let n = (c * Rat::from_integer(den.clone())).to_integer();
            num = num.gcd(&n);
        }
        let mut factor = Rat::new(den, num);
        if self.leading_coeff().is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        let (a, d) = Poly::unify(self, d);
        if let Some(c) = d.constant_value() {
            return Some(a.scale(&c.recip()));
        }
        let (lm_d, lc_d) = {
            let (m, c) = d.leading_term().unwrap();
            (m.clone(), c.clone())
        };
        let inv = lc_d.recip();
        let mut rem = a.terms;
        let mut quot: BTreeMap<Monomial, Rat> = BTreeMap::new();
        while let Some((lm_r, lc_r)) = rem.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm_d.divides(&lm_r) {
                return None;
            }
            let shift: Vec<u32> = lm_r.0.iter().zip(&lm_d.0).map(|(a, b)| a - b).collect();
            let coef = &lc_r * &inv;
            for (m, c) in &d.terms {
                let key = Monomial(m.0.iter().zip(&shift).map(|(a, b)| a + b).collect());
                let delta = c * &coef;
                let remove = match rem.get_mut(&key) {
                    Some(slot) => {
                        *slot -= delta;
                        slot.is_zero()
                    }
                    None => {
                        rem.insert(key.clone(), -delta);
                        false
                    }
                };
                if remove {
                    rem.remove(&key);
                }
            }
            quot.insert(Monomial(shift), coef);
        }
        Some(Poly {
            vars: d.vars.clone(),
            terms: quot,
        })
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.is_zero() || other.exact_div(self).is_some()
    }

    /// Polynomials that differ by a nonzero constant factor.
    pub fn is_associate(&self, other: &Poly) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        self.monic() == other.monic()
    }

    fn add_terms(&self, other: &Poly, sign: bool) -> Poly {
        let (a, b) = Poly::unify(self, other);
        let mut terms = a.terms;
        for (m, c) in b.terms {
            let remove = match terms.get_mut(&m) {
                Some(slot) => {
                    if sign {
                        *slot += c;
                    } else {
                        *slot -= c;
                    }
                    slot.is_zero()
                }
                None => {
                    terms.insert(m.clone(), if sign { c } else { -c });
                    false
                }
            };
            if remove {
                terms.remove(&m);
            }
        }
        Poly { vars: a.vars, terms }
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = Poly::unify(self, other);
        a.terms == b.terms
    }
}

impl Eq for Poly {}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.add_terms(rhs, true)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.add_terms(rhs, false)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rat::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let (a, b) = Poly::unify(self, rhs);
        let mut terms: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let key = Monomial(ma.0.iter().zip(&mb.0).map(|(x, y)| x + y).collect());
                let slot = terms.entry(key).or_insert_with(Rat::zero);
                *slot += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Poly { vars: a.vars, terms }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly { (&self).$f(&rhs) }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: &Poly) -> Poly { (&self).$f(rhs) }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.vars[i], e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PolyWire {
    vars: Vec<String>,
    terms: Vec<(Vec<u32>, String)>,
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = PolyWire {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(m, c)| (m.0.clone(), c.to_string()))
                .collect(),
        };
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Either {
            Wire(PolyWire),
            Text(String),
        }
        match Either::deserialize(d)? {
            Either::Wire(w) => {
                let mut terms = Vec::with_capacity(w.terms.len());
                for (e, c) in w.terms {
                    terms.push((e, parse_rat(&c).map_err(serde::de::Error::custom)?));
                }
                Poly::from_terms(&w.vars, terms).map_err(serde::de::Error::custom)
            }
            Either::Text(s) => parse_poly(&s).map_err(serde::de::Error::custom),
        }
    }
}
