//! gcd, squarefree part and resultants.
//!
//! gcd is the classical recursive primitive-PRS algorithm: view the inputs
//! as univariate in their first occurring variable over the ring of the
//! remaining ones, split off contents recursively, and run pseudo-remainder
//! sequences on the primitive parts. Resultants are Sylvester determinants
//! evaluated by fraction-free (Bareiss) elimination.

use num_traits::{One, Zero};

use super::{Poly, Rat, UPoly};
use crate::error::{Error, Result};

/// Monic greatest common divisor. Errors when both inputs are zero.
pub fn gcd(p: &Poly, q: &Poly) -> Result<Poly> {
    if p.is_zero() && q.is_zero() {
        return Err(Error::domain("gcd of two zero polynomials"));
    }
    let (a, b) = Poly::unify(p, q);
    Ok(gcd_rec(&a, &b).monic())
}

/// gcd of a list, skipping zeros. Errors when every entry is zero.
pub fn gcd_many(ps: &[Poly]) -> Result<Poly> {
    let mut acc: Option<Poly> = None;
    for p in ps.iter().filter(|p| !p.is_zero()) {
        acc = Some(match acc {
            None => p.monic(),
            Some(g) => gcd(&g, p)?,
        });
        if acc.as_ref().is_some_and(Poly::is_constant) {
            break;
        }
    }
    acc.ok_or_else(|| Error::domain("gcd of an all-zero list"))
}

fn gcd_rec(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let vars = a.vars().to_vec();
    if let Some(g) = univariate_gcd(a, b) {
        return g.with_vars(&vars).unwrap();
    }
    if let Some(g) = binary_form_gcd(a, b) {
        return g.with_vars(&vars).unwrap();
    }
    if let Some(g) = bivariate_gcd(a, b) {
        return g.with_vars(&vars).unwrap();
    }
    let Some(main) = vars
        .iter()
        .find(|v| a.degree_in(v) > 0 || b.degree_in(v) > 0)
        .cloned()
    else {
        return Poly::one().with_vars(&vars).unwrap();
    };
    let (ca, pa) = content_and_primitive(a, &main);
    let (cb, pb) = content_and_primitive(b, &main);
    let content = gcd_rec(&ca, &cb);

    let (mut f, mut g) = if pa.degree_in(&main) >= pb.degree_in(&main) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    loop {
        if g.is_zero() {
            break;
        }
        if g.degree_in(&main) == 0 {
            f = Poly::one().with_vars(&vars).unwrap();
            break;
        }
        let r = pseudo_remainder(&f, &g, &main);
        f = g;
        g = if r.is_zero() {
            r
        } else {
            content_and_primitive(&r, &main).1
        };
    }
    let (_, f) = content_and_primitive(&f, &main);
    (&content * &f).monic()
}

/// Dense Euclid when at most one variable occurs in either input.
fn univariate_gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    let mut occ = a.occurring_vars();
    occ.extend(b.occurring_vars());
    occ.sort();
    occ.dedup();
    match occ.as_slice() {
        [] => Some(Poly::one()),
        [x] => {
            let ua = UPoly::from_poly(a, x).ok()?;
            let ub = UPoly::from_poly(b, x).ok()?;
            Some(ua.gcd(&ub).to_poly(x))
        }
        _ => None,
    }
}

/// Homogeneous inputs in exactly two variables: dehomogenize, take the
/// univariate gcd, and restore the common power of the second variable.
fn binary_form_gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    let mut occ = a.occurring_vars();
    occ.extend(b.occurring_vars());
    occ.sort();
    occ.dedup();
    let [x, y] = occ.as_slice() else {
        return None;
    };
    a.homogeneous_degree()?;
    b.homogeneous_degree()?;
    let one = Rat::one();
    let ua = UPoly::from_poly(&a.substitute(y, &one), x).ok()?;
    let ub = UPoly::from_poly(&b.substitute(y, &one), x).ok()?;
    let g = ua.gcd(&ub);
    let dg = g.degree()? as u32;
    let ya = a.total_degree()? - ua.degree()? as u32;
    let yb = b.total_degree()? - ub.degree()? as u32;
    let ypow = ya.min(yb);
    let mut acc = Poly::zero();
    for (i, c) in g.coeffs().iter().enumerate() {
        acc = &acc + &Poly::monomial(&[x, y], &[i as u32, dg - i as u32 + ypow], c.clone());
    }
    Some(acc)
}

fn occurring(a: &Poly, b: &Poly) -> Vec<String> {
    let mut occ = a.occurring_vars();
    occ.extend(b.occurring_vars());
    occ.sort();
    occ.dedup();
    occ
}

/// Two variables, not homogeneous: specialize the variable of lower degree
/// at integers, take univariate gcds scaled by the gcd of leading
/// coefficients, and interpolate. The candidate is accepted only once it
/// divides both primitive parts, so unlucky points cannot produce a wrong
/// answer. `None` sends the caller back to the PRS.
fn bivariate_gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    let occ = occurring(a, b);
    let [v0, v1] = occ.as_slice() else {
        return None;
    };
    let deg = |v: &str| a.degree_in(v).max(b.degree_in(v));
    let (x, y) = if deg(v0) >= deg(v1) { (v0, v1) } else { (v1, v0) };
    let split = |p: &Poly| -> Option<Vec<UPoly>> {
        p.coefficients_in(x).iter().map(|c| UPoly::from_poly(c, y).ok()).collect()
    };
    let join = |cs: &[UPoly]| -> Poly {
        let coeffs: Vec<Poly> = cs.iter().map(|c| c.to_poly(y)).collect();
        Poly::from_coefficients(x, &coeffs)
    };
    let content = |cs: &[UPoly]| cs.iter().fold(UPoly::zero(), |g, c| g.gcd(c));
    let primitive = |cs: &[UPoly], ct: &UPoly| -> Vec<UPoly> { cs.iter().map(|c| c.div_rem(ct).0).collect() };
    let (ca, cb) = (split(a)?, split(b)?);
    let (cta, ctb) = (content(&ca), content(&cb));
    let (pa, pb) = (primitive(&ca, &cta), primitive(&cb, &ctb));
    let cont = cta.gcd(&ctb).to_poly(y);
    if pa.len() == 1 || pb.len() == 1 {
        return Some(cont);
    }
    let (lp, lq) = (pa.last()?, pb.last()?);
    let gamma = lp.gcd(lq);
    let ydeg = |cs: &[UPoly]| cs.iter().filter_map(UPoly::degree).max().unwrap_or(0);
    let need = gamma.degree()? + ydeg(&pa).min(ydeg(&pb)) + 1;
    let (full_a, full_b) = (join(&pa), join(&pb));
    let mut pts: Vec<Rat> = Vec::new();
    let mut images: Vec<UPoly> = Vec::new();
    let mut best = usize::MAX;
    for k in 0..(4 * need as i64 + 64) {
        let t = Rat::from_integer(if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 }.into());
        if lp.eval(&t).is_zero() || lq.eval(&t).is_zero() {
            continue;
        }
        let at = |cs: &[UPoly]| UPoly::new(cs.iter().map(|c| c.eval(&t)).collect());
        let g = at(&pa).gcd(&at(&pb));
        let d = g.degree()?;
        if d == 0 {
            return Some(cont);
        }
        if d > best {
            continue;
        }
        if d < best {
            best = d;
            pts.clear();
            images.clear();
        }
        images.push(g.scale(&gamma.eval(&t)));
        pts.push(t);
        if pts.len() >= need {
            let coeffs: Vec<UPoly> = (0..=d)
                .map(|j| {
                    let ys: Vec<Rat> = images.iter().map(|g| g.coeffs()[j].clone()).collect();
                    UPoly::interpolate(&pts, &ys)
                })
                .collect();
            let cand = join(&primitive(&coeffs, &content(&coeffs)));
            if full_a.exact_div(&cand).is_some() && full_b.exact_div(&cand).is_some() {
                return Some((&cand * &cont).monic());
            }
        }
    }
    None
}

/// Content with respect to `var` (a polynomial free of `var`) and the
/// primitive part, normalized so the content is monic.
fn content_and_primitive(p: &Poly, var: &str) -> (Poly, Poly) {
    let coeffs = p.coefficients_in(var);
    let mut c: Option<Poly> = None;
    for k in coeffs.iter().filter(|k| !k.is_zero()) {
        c = Some(match c {
            None => k.monic(),
            Some(c) => gcd_rec(&c, k),
        });
        if c.as_ref().is_some_and(Poly::is_constant) {
            break;
        }
    }
    let c = c.unwrap_or_else(Poly::one);
    let c = c.with_vars(p.vars()).unwrap_or(c);
    let prim = p.exact_div(&c).expect("content divides polynomial");
    (c, prim)
}

/// `lc(g)^k * f mod g` with respect to `var`.
fn pseudo_remainder(f: &Poly, g: &Poly, var: &str) -> Poly {
    let dg = g.degree_in(var);
    let lg = g.coefficients_in(var).pop().unwrap();
    let x = Poly::var(var);
    let mut r = f.clone();
    while !r.is_zero() && r.degree_in(var) >= dg {
        let dr = r.degree_in(var);
        let lr = r.coefficients_in(var).pop().unwrap();
        let shift = &lr * &x.pow(dr - dg);
        r = &(&lg * &r) - &(&shift * g);
    }
    r
}

/// Product of the distinct irreducible factors, monic.
pub fn squarefree_part(p: &Poly) -> Result<Poly> {
    if p.is_zero() {
        return Err(Error::domain("squarefree part of zero"));
    }
    if p.is_constant() {
        return Ok(Poly::one());
    }
    let mut g = p.clone();
    for v in p.occurring_vars() {
        g = gcd(&g, &p.derivative(&v))?;
        if g.is_constant() {
            break;
        }
    }
    Ok(p.exact_div(&g).expect("gcd divides").monic())
}

/// Sylvester resultant with respect to `var`.
pub fn resultant(p: &Poly, q: &Poly, var: &str) -> Result<Poly> {
    let (p, q) = Poly::unify(p, q);
    let m = p.degree_in(var);
    let n = q.degree_in(var);
    if m == 0 && n == 0 {
        return Err(Error::domain(format!("variable {var} absent from both inputs")));
    }
    if p.is_zero() || q.is_zero() {
        return Ok(Poly::zero().with_vars(p.vars()).unwrap());
    }
    if m == 0 {
        return Ok(p.pow(n));
    }
    if n == 0 {
        return Ok(q.pow(m));
    }
    let mut occ = p.occurring_vars();
    occ.extend(q.occurring_vars());
    occ.sort();
    occ.dedup();
    if let [a, b] = occ.as_slice() {
        let param = if a == var { b } else { a };
        let r = resultant_bivariate(&p, &q, var, param);
        return Ok(r.with_vars(p.vars()).unwrap_or(r));
    }
    Ok(resultant_sylvester(&p, &q, var))
}

/// Sylvester matrix from coefficient lists (constant term first), rows of `p` first.
fn sylvester<T: Clone>(pc: &[T], qc: &[T], zero: T) -> Vec<Vec<T>> {
    let m = pc.len() - 1;
    let n = qc.len() - 1;
    let size = m + n;
    let mut rows = vec![vec![zero; size]; size];
    for (i, row) in rows.iter_mut().enumerate().take(n) {
        for k in 0..=m {
            row[i + k] = pc[m - k].clone();
        }
    }
    for i in 0..m {
        for k in 0..=n {
            rows[n + i][i + k] = qc[n - k].clone();
        }
    }
    rows
}

/// Resultant by Bareiss elimination on the Sylvester matrix. Both inputs
/// must have positive degree in `var`.
pub fn resultant_sylvester(p: &Poly, q: &Poly, var: &str) -> Poly {
    let (p, q) = Poly::unify(p, q);
    let zero = Poly::zero().with_vars(p.vars()).unwrap();
    determinant(sylvester(&p.coefficients_in(var), &q.coefficients_in(var), zero))
}

/// Resultant of polynomials in `var` and one parameter, by evaluating the
/// Sylvester matrix at integer parameter values and interpolating.
fn resultant_bivariate(p: &Poly, q: &Poly, var: &str, param: &str) -> Poly {
    let to_u = |c: &Poly| UPoly::from_poly(c, param).expect("bivariate input");
    let pc: Vec<UPoly> = p.coefficients_in(var).iter().map(to_u).collect();
    let qc: Vec<UPoly> = q.coefficients_in(var).iter().map(to_u).collect();
    let dp = pc.iter().filter_map(UPoly::degree).max().unwrap_or(0);
    let dq = qc.iter().filter_map(UPoly::degree).max().unwrap_or(0);
    let m = pc.len() - 1;
    let n = qc.len() - 1;
    let bound = n * dp + m * dq;
    let xs: Vec<Rat> = (0..=bound as i64).map(super::rat).collect();
    let ys: Vec<Rat> = xs
        .iter()
        .map(|t| {
            let pv: Vec<Rat> = pc.iter().map(|c| c.eval(t)).collect();
            let qv: Vec<Rat> = qc.iter().map(|c| c.eval(t)).collect();
            rat_determinant(sylvester(&pv, &qv, Rat::zero()))
        })
        .collect();
    UPoly::interpolate(&xs, &ys).to_poly(param)
}

/// Determinant of a rational matrix by Gaussian elimination.
pub fn rat_determinant(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut det = Rat::one();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Rat::zero();
        };
        if piv != k {
            m.swap(k, piv);
            det = -det;
        }
        let pivot = m[k][k].clone();
        det *= &pivot;
        let inv = pivot.recip();
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] * &inv;
            for j in k..n {
                let t = &f * &m[k][j];
                m[i][j] -= t;
            }
        }
    }
    det
}

/// Determinant by Bareiss fraction-free elimination.
pub fn determinant(mut m: Vec<Vec<Poly>>) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    let mut negate = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(piv) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Poly::zero();
            };
            m.swap(k, piv);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}
