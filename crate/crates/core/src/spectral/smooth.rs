//! Smoothness of `C = {F = 0} ⊂ X`, for `X` smooth (reduced discriminant).
//!
//! `C` is covered by three pieces: the section Σ, the affine chart over
//! `v = 1` in coordinates `(u, x, y)`, and the fiber over `(1:0)`. In an
//! affine chart a point of `C` is singular iff `W = F = 0` and the three
//! 2×2 minors of `(∇W; ∇F)` vanish. Writing everything as `c + d·y` modulo
//! `y² = P` turns these into conditions on `(base, x)` alone.

use num_traits::Zero;
use serde_json::{json, Value};

use super::d5::gcd_branches;
use super::{CurveCertificate, Property, RatSampler, SpectralData};
use crate::error::{Error, Result};
use crate::exactpoly::{gcd, gcd_many, rat, rat_sqrt, resultant, squarefree_part, Poly, Rat, UPoly};
use crate::weierstrass::{fmt_point, WeierstrassModel};

const RULE: &str = "Jacobian criterion on X, chart by chart";
const SEED: u64 = 0x5eed_c0de;

/// Smoothness certificate. `no` always comes with an exact rational singular
/// point; a singular point defined only over an extension yields `unknown`.
pub fn smoothness_test(m: &WeierstrassModel, sd: &SpectralData) -> Result<CurveCertificate> {
    sd.validate(m)?;
    let prop = Property::Smooth;
    if !m.is_explicit() || !sd.has_explicit_sections() {
        return Ok(CurveCertificate::unknown(prop, RULE, "explicit model and sections required"));
    }
    let delta = m.delta()?;
    if !squarefree_part(delta)?.is_associate(delta) {
        return Err(Error::hypothesis(
            "discriminant is not reduced, so X is singular and the Jacobian test does not apply",
        ));
    }
    let mut outcomes = vec![sigma_chart(sd)?];
    if let Outcome::Singular(w) = &outcomes[0] {
        return Ok(CurveCertificate::no(prop, RULE, w.clone()));
    }
    let vert = super::vertical_part(sd)?;
    if !vert.is_constant() {
        return vertical_component(m, sd, &vert);
    }
    let mut rng = RatSampler::new(SEED);
    for (fixed, base) in [("v", "u"), ("u", "v")] {
        let c = Chart::new(m, sd, fixed, base)?;
        let o = if base == "u" { c.affine(&mut rng)? } else { c.at_zero()? };
        if let Outcome::Singular(w) = &o {
            return Ok(CurveCertificate::no(prop, RULE, w.clone()));
        }
        outcomes.push(o);
    }
    let open: Vec<String> = outcomes
        .iter()
        .filter_map(|o| match o {
            Outcome::Open(s) => Some(s.clone()),
            _ => None,
        })
        .collect();
    if !open.is_empty() {
        return Ok(CurveCertificate::unknown(prop, RULE, open.join("; ")));
    }
    let witness: Vec<Value> = outcomes
        .into_iter()
        .filter_map(|o| match o {
            Outcome::Smooth(w) => Some(w),
            _ => None,
        })
        .collect();
    Ok(CurveCertificate::yes(prop, RULE, json!({ "charts": witness })))
}

/// `C` contains the fibers over the zeros of `vert`, and every point where
/// such a fiber meets the rest of `C` is singular. Only rational zeros are
/// searched for a witness.
fn vertical_component(m: &WeierstrassModel, sd: &SpectralData, vert: &Poly) -> Result<CurveCertificate> {
    let prop = Property::Smooth;
    let mut roots: Vec<(&'static str, &'static str, Rat)> = Vec::new();
    if vert.substitute("u", &rat(1)).substitute("v", &rat(0)).is_zero() {
        roots.push(("u", "v", rat(0)));
    }
    let aff = UPoly::from_poly(&vert.substitute("v", &rat(1)), "u")?;
    roots.extend(aff.rational_roots().into_iter().map(|t| ("v", "u", t)));
    for (fixed, base, t) in roots {
        let c = Chart::new(m, sd, fixed, base)?;
        if let Some(w) = c.search_fiber(&t)? {
            return Ok(CurveCertificate::no(prop, RULE, w));
        }
    }
    Ok(CurveCertificate::unknown(
        prop,
        RULE,
        format!("C contains the fibers over {vert} = 0; no rational point where they meet the rest of C"),
    ))
}

#[derive(Clone, Debug)]
enum Outcome {
    Smooth(Value),
    Singular(Value),
    Open(String),
}

/// Near Σ, `C` is `s_r + s_{r-1}·w + O(w²)` in a local fiber coordinate `w`.
/// Singular points on Σ are the common zeros of `s_r`, its gradient, and `s_{r-1}`.
fn sigma_chart(sd: &SpectralData) -> Result<Outcome> {
    let r = sd.r;
    let sr = sd.poly(r)?;
    let sr1 = if r >= 3 { sd.poly(r - 1)? } else { Poly::zero() };
    let list = [sr.clone(), sr.derivative("u"), sr.derivative("v"), sr1];
    if list.iter().all(Poly::is_zero) {
        return Ok(Outcome::Singular(json!({
            "chart": "Sigma",
            "base_point": "(0:1)",
            "reason": "s_r and s_(r-1) vanish, C contains 2*Sigma",
        })));
    }
    let g = gcd_many(&list)?;
    if g.is_constant() {
        return Ok(Outcome::Smooth(json!({"chart": "Sigma", "gcd": "1"})));
    }
    let at_inf = g.substitute("u", &rat(1)).substitute("v", &rat(0));
    if at_inf.is_zero() {
        return Ok(Outcome::Singular(json!({"chart": "Sigma", "base_point": fmt_point(&rat(1), &rat(0))})));
    }
    let affine = UPoly::from_poly(&g.substitute("v", &rat(1)), "u")?;
    if let Some(t) = affine.rational_roots().into_iter().next() {
        return Ok(Outcome::Singular(json!({"chart": "Sigma", "base_point": fmt_point(&t, &rat(1))})));
    }
    Ok(Outcome::Open(format!("Sigma: singular locus {g} has no rational point")))
}

/// One affine chart: `fixed = 1`, base coordinate `base`.
struct Chart {
    fixed: &'static str,
    base: &'static str,
    p: Poly,
    w: Poly,
    f: Poly,
    minors: [Poly; 3],
    a: Poly,
    b: Poly,
    /// Conditions in `(base, x)` whose common zeros contain every singular point.
    conds: Vec<Poly>,
}

fn norm(c: &Poly, d: &Poly, p: &Poly) -> Poly {
    if d.is_zero() {
        c.clone()
    } else if c.is_zero() {
        d * p
    } else {
        &(c * c) - &(&(d * d) * p)
    }
}

impl Chart {
    fn new(m: &WeierstrassModel, sd: &SpectralData, fixed: &'static str, base: &'static str) -> Result<Chart> {
        let one = rat(1);
        let loc = |q: &Poly| q.substitute(fixed, &one);
        let x = Poly::var("x");
        let y = Poly::var("y");
        let p = &(&x.pow(3) + &(&loc(m.a4()?) * &x)) + &loc(m.a6()?);
        let (mut a, mut b) = (Poly::zero(), Poly::zero());
        for (i, s) in sd.polys()? {
            let (j, k) = super::pole_monomial(i);
            let term = &loc(&s) * &x.pow(j);
            if k == 0 {
                a = &a + &term;
            } else {
                b = &b + &term;
            }
        }
        let w = &y.pow(2) - &p;
        let f = &a + &(&b * &y);
        let grad = |q: &Poly| [q.derivative(base), q.derivative("x"), q.derivative("y")];
        let (gw, gf) = (grad(&w), grad(&f));
        let minor = |i: usize, j: usize| &(&gw[i] * &gf[j]) - &(&gw[j] * &gf[i]);
        let minors = [minor(0, 1), minor(0, 2), minor(1, 2)];
        // reduced forms c + d·y of the minors
        let (pb, px) = (p.derivative(base), p.derivative("x"));
        let (ab, ax, bb, bx) = (a.derivative(base), a.derivative("x"), b.derivative(base), b.derivative("x"));
        let two = Poly::int(2);
        let reduced = [
            (&(&px * &ab) - &(&pb * &ax), &(&px * &bb) - &(&pb * &bx)),
            (-&(&(&pb * &b) + &(&two * &(&p * &bb))), -&(&two * &ab)),
            (-&(&(&px * &b) + &(&two * &(&p * &bx))), -&(&two * &ax)),
        ];
        let mut conds = vec![norm(&a, &b, &p)];
        for (c, d) in &reduced {
            conds.push(norm(c, d, &p));
            conds.push(&(&a * d) - &(&b * c));
        }
        conds.retain(|c| !c.is_zero());
        Ok(Chart {
            fixed,
            base,
            p,
            w,
            f,
            minors,
            a,
            b,
            conds,
        })
    }

    fn point(&self, t: &Rat) -> (Rat, Rat) {
        if self.fixed == "v" {
            (t.clone(), rat(1))
        } else {
            (rat(1), t.clone())
        }
    }

    /// Exact check of a candidate `(base = t, x = x0)`; returns the witness.
    fn verify(&self, t: &Rat, x0: &Rat) -> Result<Option<Value>> {
        let at = |q: &Poly, y0: &Rat| q.eval_at(&[(self.base, t.clone()), ("x", x0.clone()), ("y", y0.clone())]);
        let ev2 = |q: &Poly| q.eval_at(&[(self.base, t.clone()), ("x", x0.clone())]);
        let mut ys = Vec::new();
        let bv = ev2(&self.b)?;
        if !bv.is_zero() {
            ys.push(-ev2(&self.a)? / bv);
        } else if let Some(s) = rat_sqrt(&ev2(&self.p)?) {
            ys.push(s.clone());
            ys.push(-s);
        }
        for y0 in ys {
            let mut all = at(&self.w, &y0)?.is_zero() && at(&self.f, &y0)?.is_zero();
            for mn in &self.minors {
                all = all && at(mn, &y0)?.is_zero();
            }
            if all {
                let (p, q) = self.point(t);
                return Ok(Some(json!({
                    "chart": format!("{}=1", self.fixed),
                    "base_point": fmt_point(&p, &q),
                    "x": x0.to_string(),
                    "y": y0.to_string(),
                })));
            }
        }
        Ok(None)
    }

    /// Searches the fiber over `base = t` for a rational singular point.
    fn search_fiber(&self, t: &Rat) -> Result<Option<Value>> {
        let specialized: Vec<Poly> = self.conds.iter().map(|c| c.substitute(self.base, t)).collect();
        let nonzero: Vec<Poly> = specialized.iter().filter(|c| !c.is_zero()).cloned().collect();
        let xs: Vec<Rat> = if nonzero.is_empty() {
            (-24..=24).map(rat).collect()
        } else {
            let g = gcd_many(&nonzero)?;
            UPoly::from_poly(&g, "x")?.rational_roots()
        };
        for x0 in xs {
            if let Some(w) = self.verify(t, &x0)? {
                return Ok(Some(w));
            }
        }
        Ok(None)
    }

    /// Whole affine line of base values.
    fn affine(&self, rng: &mut RatSampler) -> Result<Outcome> {
        let label = format!("{}=1", self.fixed);
        if self.conds.iter().any(Poly::is_constant) {
            return Ok(Outcome::Smooth(json!({"chart": label, "eliminant": "1"})));
        }
        let mut combos = Vec::new();
        for _ in 0..2 {
            let mut l = Poly::zero();
            for c in &self.conds[1..] {
                l = &l + &c.scale(&rat(rng.next_int(1, 50)));
            }
            combos.push(l);
        }
        let head = &self.conds[0];
        let mut elim = Vec::new();
        for l in &combos {
            elim.push(eliminate_x(head, l)?);
        }
        elim.push(eliminate_x(&combos[0], &combos[1])?);
        elim.retain(|e| !e.is_zero());
        if elim.is_empty() {
            // the conditions share a curve; look for a rational point on it
            for _ in 0..8 {
                let t = rng.next_rat(12, 4);
                if let Some(w) = self.search_fiber(&t)? {
                    return Ok(Outcome::Singular(w));
                }
            }
            return Ok(Outcome::Open(format!("{label}: candidate singular locus is one-dimensional")));
        }
        let e = gcd_many(&elim)?;
        if e.is_constant() {
            return Ok(Outcome::Smooth(json!({"chart": label, "eliminant": "1"})));
        }
        let e = UPoly::from_poly(&e, self.base)?.squarefree_part();
        let mut open = false;
        for br in gcd_branches(&e, &self.conds, "x", self.base) {
            if br.gcd_degree == Some(0) {
                continue;
            }
            for t in br.modulus.rational_roots() {
                if let Some(w) = self.search_fiber(&t)? {
                    return Ok(Outcome::Singular(w));
                }
            }
            open = true;
        }
        if open {
            return Ok(Outcome::Open(format!(
                "{label}: common zero of the elimination system not found over the rationals"
            )));
        }
        Ok(Outcome::Smooth(json!({"chart": label, "eliminant": e.to_poly(self.base).to_string()})))
    }

    /// Only the fiber over `base = 0`.
    fn at_zero(&self) -> Result<Outcome> {
        let label = format!("{}=1", self.fixed);
        let zero = rat(0);
        let specialized: Vec<Poly> = self
            .conds
            .iter()
            .map(|c| c.substitute(self.base, &zero))
            .filter(|c| !c.is_zero())
            .collect();
        if !specialized.is_empty() && gcd_many(&specialized)?.is_constant() {
            return Ok(Outcome::Smooth(json!({"chart": label, "fiber": "(1:0)"})));
        }
        if let Some(w) = self.search_fiber(&zero)? {
            return Ok(Outcome::Singular(w));
        }
        Ok(Outcome::Open(format!("{label}: fiber over (1:0) may carry an irrational singular point")))
    }
}

/// `Res_x(p, q)`, or `gcd(p, q)` when neither involves `x`.
fn eliminate_x(p: &Poly, q: &Poly) -> Result<Poly> {
    if p.is_zero() || q.is_zero() {
        return Ok(Poly::zero());
    }
    if p.degree_in("x") == 0 && q.degree_in("x") == 0 {
        return gcd(p, q);
    }
    resultant(p, q, "x")
}

#[cfg(test)]
mod tests {
    use super::super::tests::model;
    use super::super::{spectral_genus, Verdict};
    use super::*;
    use crate::exactpoly::parse_poly;

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn vertical_fiber_meets_rest() {
        // C = {u = 0} + {-v^2 + uv + u^2 + x = 0}; they meet at x = 1, y = 0 over (0:1)
        let m = model("u^4 + 2*v^4", "u^6 - 3*v^6 + u*v^5");
        let sd = SpectralData::explicit(2, 3, &[(0, p("u*(-v^2 + u*v + u^2)")), (2, p("u"))]);
        let c = smoothness_test(&m, &sd).unwrap();
        assert_eq!(c.verdict, Verdict::No, "{c:?}");
        let w = c.witness.unwrap();
        assert_eq!(w["base_point"], "(0:1)");
        assert_eq!(w["x"], "1");
    }

    #[test]
    fn generic_double_cover_smooth() {
        let m = model("u^4 + 2*v^4", "u^6 - 3*v^6 + u*v^5");
        let sd = SpectralData::explicit(2, 2, &[(0, p("u^2 + 3*u*v - v^2")), (2, p("1"))]);
        let c = smoothness_test(&m, &sd).unwrap();
        assert_eq!(c.verdict, Verdict::Yes, "{c:?}");
    }

    #[test]
    fn planted_node_found() {
        // a6 vanishes at u = 0 to first order; s0 matches so that (0, 0, 0) is singular
        let m = model("u^4 + 2*v^4", "u^6 - 3*u*v^5");
        let sd = SpectralData::explicit(2, 2, &[(0, p("-3/2*u*v + u^2")), (2, p("1"))]);
        let c = smoothness_test(&m, &sd).unwrap();
        assert_eq!(c.verdict, Verdict::No, "{c:?}");
        let w = c.witness.unwrap();
        assert_eq!(w["base_point"], "(0:1)");
        assert_eq!(w["x"], "0");
    }

    #[test]
    fn double_section_singular() {
        let m = model("u^4 + 2*v^4", "u^6 - 3*v^6 + u*v^5");
        let sd = SpectralData::explicit(3, 3, &[(0, p("u^3 + v^3")), (2, p("u"))]);
        let c = smoothness_test(&m, &sd).unwrap();
        assert_eq!(c.verdict, Verdict::No);
        assert_eq!(c.witness.unwrap()["chart"], "Sigma");
    }

    #[test]
    fn non_reduced_discriminant_refused() {
        let m = crate::weierstrass::build_model(
            &crate::weierstrass::ModelInput {
                g: 0,
                d: 1,
                base_kind: crate::weierstrass::BaseKind::P1Explicit,
                a4: Some(p("-3*(u^2 + v^2)^2")),
                a6: Some(p("2*(u^2 + v^2)^3 + u^2*(u^4 + v^4)")),
            },
            false,
        )
        .unwrap();
        let sd = SpectralData::explicit(2, 2, &[(0, p("u^2")), (2, p("1"))]);
        assert!(matches!(smoothness_test(&m, &sd), Err(Error::Hypothesis(_))));
    }

    /// For r = 2, F = s0 + s2·x; eliminating x leaves y² = h/s2³ with
    /// h = -s0³ - a4·s0·s2² + a6·s2³, so C is the double cover of B
    /// branched along s2·h once gcd(s0, s2) = 1.
    fn r2_oracle(a4: &Poly, a6: &Poly, s0: &Poly, s2: &Poly) -> (bool, i64) {
        let h = &(&(-&s0.pow(3)) - &(&(a4 * s0) * &s2.pow(2))) + &(a6 * &s2.pow(3));
        let branch = s2 * &h;
        let coprime = gcd(s0, s2).unwrap().is_constant();
        let sqf = squarefree_part(&branch).unwrap().is_associate(&branch);
        let deg = branch.total_degree().unwrap() as i64;
        (coprime && sqf, deg / 2 - 1)
    }

    #[test]
    fn matches_branch_locus_oracle_r2() {
        let a4 = p("u^4 + 2*v^4");
        let a6 = p("u^6 - 3*v^6 + u*v^5");
        let m = model("u^4 + 2*v^4", "u^6 - 3*v^6 + u*v^5");
        let mut rng = RatSampler::new(11);
        let mut seen = [0, 0];
        for _ in 0..12 {
            let c: Vec<i64> = (0..4).map(|_| rng.next_int(-3, 3)).collect();
            let s0 = p(&format!("{}*u^2 + {}*u*v + {}*v^2", c[0], c[1], c[2]));
            let s2 = Poly::int(1 + c[3].abs());
            let sd = SpectralData::explicit(2, 2, &[(0, s0.clone()), (2, s2.clone())]);
            let (smooth, genus) = r2_oracle(&a4, &a6, &s0, &s2);
            let cert = smoothness_test(&m, &sd).unwrap();
            if cert.verdict == Verdict::Unknown {
                continue;
            }
            assert_eq!(cert.verdict == Verdict::Yes, smooth, "s0 = {s0}: {cert:?}");
            if smooth {
                assert_eq!(genus, spectral_genus(2, 1, 2, 0));
            }
            seen[usize::from(smooth)] += 1;
        }
        assert!(seen[1] > 0);
    }
}
