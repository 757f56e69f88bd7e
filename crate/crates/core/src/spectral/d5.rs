//! gcd in `x` over `ℚ[u]/(m)` for squarefree `m`. The ring is a product of
//! fields; a leading coefficient that is a zero divisor splits `m` and the
//! computation continues on each factor.

use crate::exactpoly::{Poly, UPoly};

/// Coefficients in `x`, constant term first, each reduced mod the branch modulus.
type XPoly = Vec<UPoly>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub modulus: UPoly,
    /// `None` when every input vanishes identically on the branch.
    pub gcd_degree: Option<usize>,
}

pub fn gcd_branches(m: &UPoly, polys: &[Poly], x: &str, u: &str) -> Vec<Branch> {
    if m.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let mut g: XPoly = Vec::new();
    for p in polys {
        let q = reduce(p, m, x, u);
        match gcd_mod(g, q, m) {
            Ok(ng) => g = ng,
            Err((m1, m2)) => {
                let mut out = gcd_branches(&m1, polys, x, u);
                out.extend(gcd_branches(&m2, polys, x, u));
                return out;
            }
        }
    }
    vec![Branch {
        modulus: m.clone(),
        gcd_degree: g.len().checked_sub(1),
    }]
}

fn reduce(p: &Poly, m: &UPoly, x: &str, u: &str) -> XPoly {
    let coeffs = p
        .coefficients_in(x)
        .iter()
        .map(|c| UPoly::from_poly(c, u).expect("coefficients in u only").rem(m))
        .collect();
    trim(coeffs)
}

fn trim(mut p: XPoly) -> XPoly {
    while p.last().is_some_and(UPoly::is_zero) {
        p.pop();
    }
    p
}

type Split = (UPoly, UPoly);

fn make_monic(p: XPoly, m: &UPoly) -> Result<XPoly, Split> {
    let Some(lc) = p.last() else {
        return Ok(p);
    };
    let (h, s, _) = lc.ext_gcd(m);
    if h.degree() == Some(0) {
        return Ok(p.iter().map(|c| c.mul(&s).rem(m)).collect());
    }
    let other = m.div_rem(&h).0;
    Err((h, other))
}

/// Remainder of `a` by monic `b`.
fn rem(mut a: XPoly, b: &XPoly, m: &UPoly) -> XPoly {
    let db = b.len() - 1;
    while a.len() > db {
        let k = a.len() - 1 - db;
        let c = a.last().unwrap().clone();
        if !c.is_zero() {
            for (j, bc) in b.iter().enumerate() {
                a[k + j] = a[k + j].sub(&c.mul(bc)).rem(m);
            }
        }
        a.pop();
        a = trim(a);
    }
    a
}

fn gcd_mod(a: XPoly, b: XPoly, m: &UPoly) -> Result<XPoly, Split> {
    let mut a = make_monic(trim(a), m)?;
    let mut b = make_monic(trim(b), m)?;
    if a.is_empty() {
        return Ok(b);
    }
    while !b.is_empty() {
        let r = rem(a, &b, m);
        a = b;
        b = make_monic(r, m)?;
    }
    Ok(a)
}
