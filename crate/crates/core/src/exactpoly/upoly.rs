//! Dense univariate polynomials over the rationals.
//!
//! Used where the multivariate machinery would be overkill: fiber
//! specializations, rational-root searches, and arithmetic modulo a
//! squarefree polynomial during elimination.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{rat, Poly, Rat};
use crate::error::{Error, Result};

/// Coefficients from the constant term upwards; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly(Vec<Rat>);

impl UPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly(coeffs)
    }

    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn constant(c: Rat) -> Self {
        UPoly::new(vec![c])
    }

    /// `x - a`.
    pub fn linear_root(a: Rat) -> Self {
        UPoly::new(vec![-a, Rat::one()])
    }

    /// Converts a polynomial in which at most `name` occurs.
    pub fn from_poly(p: &Poly, name: &str) -> Result<Self> {
        let occ = p.occurring_vars();
        if occ.iter().any(|v| v != name) {
            return Err(Error::domain(format!(
                "polynomial {p} is not univariate in {name}"
            )));
        }
        let coeffs = p
            .coefficients_in(name)
            .into_iter()
            .map(|c| c.constant_value().unwrap())
            .collect();
        Ok(UPoly::new(coeffs))
    }

    pub fn to_poly(&self, name: &str) -> Poly {
        let coeffs: Vec<Poly> = self.0.iter().map(|c| Poly::constant(c.clone())).collect();
        Poly::from_coefficients(name, &coeffs)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rat {
        self.0.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        let z = Rat::zero();
        UPoly::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        self.add(&o.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> UPoly {
        UPoly::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.0.len() - 1;
        let inv = d.lead().recip();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut q = vec![Rat::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.0.iter().enumerate() {
                r[k + j] -= &c * dc;
            }
            q[k] = c;
        }
        r.truncate(dd);
        (UPoly::new(q), UPoly::new(r))
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        self.div_rem(d).1
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*o = g`, `g` monic.
    pub fn ext_gcd(&self, o: &UPoly) -> (UPoly, UPoly, UPoly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (UPoly::constant(Rat::one()), UPoly::zero());
        let (mut t0, mut t1) = (UPoly::zero(), UPoly::constant(Rat::one()));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s2 = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s2);
            let t2 = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lead().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn squarefree_part(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Newton interpolation through `(xs[i], ys[i])`; the `xs` must be distinct.
    pub fn interpolate(xs: &[Rat], ys: &[Rat]) -> UPoly {
        let n = xs.len();
        let mut coef: Vec<Rat> = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
            }
        }
        let mut acc = UPoly::zero();
        for i in (0..n).rev() {
            acc = acc.mul(&UPoly::linear_root(xs[i].clone())).add(&UPoly::constant(coef[i].clone()));
        }
        acc
    }

    /// Yun decomposition: `(factor, multiplicity)` with squarefree, pairwise
    /// coprime, monic factors. Constants yield an empty list.
    pub fn squarefree_decomposition(&self) -> Vec<(UPoly, u32)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let mut c = self.gcd(&self.derivative());
        let mut w = self.div_rem(&c).0;
        let mut i = 1;
        while w.degree().unwrap_or(0) > 0 {
            let y = w.gcd(&c);
            let z = w.div_rem(&y).0;
            if z.degree().unwrap_or(0) > 0 {
                out.push((z.monic(), i));
            }
            c = c.div_rem(&y).0;
            w = y;
            i += 1;
        }
        out
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Rational roots, found from divisor candidates of the integer
    /// normalization. Candidate enumeration is capped, so very large
    /// coefficients can hide roots; every returned root is exact.
    pub fn rational_roots(&self) -> Vec<Rat> {
        let mut roots = BTreeSet::new();
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut start = 0;
        while self.0[start].is_zero() {
            start += 1;
        }
        if start > 0 {
            roots.insert(Rat::zero());
        }
        let core = UPoly::new(self.0[start..].to_vec());
        if core.degree().unwrap_or(0) == 0 {
            return roots.into_iter().collect();
        }
        let ints = integer_coeffs(&core.0);
        let a0 = ints[0].abs();
        let an = ints.last().unwrap().abs();
        let nums = small_divisors(&a0);
        let dens = small_divisors(&an);
        let mut cands: BTreeSet<Rat> = BTreeSet::new();
        for p in nums.iter() {
            for q in dens.iter() {
                let c = Rat::new(p.clone(), q.clone());
                cands.insert(c.clone());
                cands.insert(-c);
            }
        }
        for p in -24i64..=24 {
            for q in 1i64..=12 {
                cands.insert(Rat::new(BigInt::from(p), BigInt::from(q)));
            }
        }
        for c in cands {
            if core.eval(&c).is_zero() {
                roots.insert(c);
            }
        }
        roots.into_iter().collect()
    }
}

fn integer_coeffs(cs: &[Rat]) -> Vec<BigInt> {
    let mut den = BigInt::one();
    for c in cs {
        den = den.lcm(c.denom());
    }
    cs.iter()
        .map(|c| (c * Rat::from_integer(den.clone())).to_integer())
        .collect()
}

const DIVISOR_LIMIT: u64 = 1 << 40;

fn small_divisors(n: &BigInt) -> Vec<BigInt> {
    let Some(n) = n.to_u64().filter(|v| *v > 0 && *v <= DIVISOR_LIMIT) else {
        return vec![BigInt::one()];
    };
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(cs: &[i64]) -> UPoly {
        UPoly::new(cs.iter().map(|c| rat(*c)).collect())
    }

    #[test]
    fn ext_gcd_bezout() {
        let a = up(&[-1, 0, 1]); // x^2 - 1
        let b = up(&[-1, 1]); // x - 1
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(g, up(&[-1, 1]));
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }

    #[test]
    fn rational_roots_found() {
        // (2x - 3)(x + 5) x
        let p = up(&[0, -15, 7, 2]);
        let roots = p.rational_roots();
        assert_eq!(roots, vec![rat(-5), rat(0), Rat::new(3.into(), 2.into())]);
        assert!(up(&[1, 0, 1]).rational_roots().is_empty());
    }

    #[test]
    fn squarefree() {
        let p = up(&[1, -2, 1]).mul(&up(&[2, 1])); // (x-1)^2 (x+2)
        assert!(!p.is_squarefree());
        assert_eq!(p.squarefree_part(), up(&[-1, 1]).mul(&up(&[2, 1])));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = up(&[3, 0, -2, 1]);
        let xs: Vec<Rat> = (0..6).map(rat).collect();
        let ys: Vec<Rat> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(UPoly::interpolate(&xs, &ys), p);
    }

    #[test]
    fn yun_decomposition() {
        // 3 (x-1)^2 (x+2) x^3
        let p = up(&[1, -2, 1])
            .mul(&up(&[2, 1]))
            .mul(&up(&[0, 0, 0, 1]))
            .scale(&rat(3));
        let dec = p.squarefree_decomposition();
        assert_eq!(
            dec,
            vec![(up(&[2, 1]), 1), (up(&[-1, 1]), 2), (up(&[0, 1]), 3)]
        );
        assert!(up(&[5]).squarefree_decomposition().is_empty());
    }
}
