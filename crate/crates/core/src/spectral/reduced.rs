use serde_json::json;

use super::{pole_monomial, vertical_part, CurveCertificate, Property, RatSampler, SpectralData};
use crate::error::Result;
use crate::exactpoly::{rat, squarefree_part, Poly, UPoly};
use crate::weierstrass::{fmt_point, WeierstrassModel};

const RULE_SIGMA: &str = "s_r = s_(r-1) = 0 puts 2*Sigma inside C";
const RULE_VERTICAL: &str = "square factor common to all s_i is a multiple fiber of C";
const RULE_FIBER: &str = "r distinct points on one smooth fiber and squarefree vertical part";

/// Reducedness certificate. Specializations at singular fibers are skipped
/// and do not count towards `trials`.
pub fn reducedness_test(m: &WeierstrassModel, sd: &SpectralData, trials: u32, seed: u64) -> Result<CurveCertificate> {
    sd.validate(m)?;
    let prop = Property::Reduced;
    let r = sd.r;
    if sd.vanishes(r, m.d) == Some(true) && sd.vanishes(r - 1, m.d) == Some(true) {
        return Ok(CurveCertificate::no(
            prop,
            RULE_SIGMA,
            json!({"vanishing_indices": [r, r - 1], "component": "2*Sigma"}),
        ));
    }
    if !m.is_explicit() || !sd.has_explicit_sections() {
        return Ok(CurveCertificate::unknown(prop, RULE_FIBER, "explicit model and sections required"));
    }
    let vert = vertical_part(sd)?;
    let vert_sqf = squarefree_part(&vert)?;
    if !vert_sqf.is_associate(&vert) {
        let square = vert.exact_div(&vert_sqf).expect("squarefree part divides");
        return Ok(CurveCertificate::no(
            prop,
            RULE_VERTICAL,
            json!({"vertical_part": vert.to_string(), "repeated_factor": square.to_string()}),
        ));
    }
    let delta = m.delta()?;
    let sections = sd.polys()?;
    let mut rng = RatSampler::new(seed);
    let mut tried = 0;
    let mut skipped = 0;
    let budget = 8 * trials + 32;
    for _ in 0..budget {
        if tried >= trials {
            break;
        }
        let t = rng.next_rat(12, 6);
        let at = |p: &Poly| p.substitute("u", &t).substitute("v", &rat(1));
        if at(delta).is_zero() {
            skipped += 1;
            continue;
        }
        tried += 1;
        let k = sections
            .iter()
            .filter(|(_, s)| !at(s).is_zero())
            .map(|(i, _)| *i)
            .max()
            .unwrap_or(0);
        let at_inf = r - k;
        let fiber = FiberEquations::new(&at(m.a4()?), &at(m.a6()?), &sections, &at)?;
        let Some(distinct) = fiber.distinct_points() else {
            continue;
        };
        if at_inf <= 1 && distinct + at_inf == r {
            return Ok(CurveCertificate::yes(
                prop,
                RULE_FIBER,
                json!({
                    "base_point": fmt_point(&t, &rat(1)),
                    "norm": fiber.norm.to_poly("x").to_string(),
                    "finite_points": distinct,
                    "points_at_infinity": at_inf,
                    "distinct_points": r,
                    "vertical_part": vert.to_string(),
                    "trials_used": tried,
                    "skipped_singular": skipped,
                }),
            ));
        }
    }
    Ok(CurveCertificate::unknown(
        prop,
        RULE_FIBER,
        format!("no fiber with r distinct points after {tried} trials ({skipped} singular fibers skipped)"),
    ))
}

/// `F = A(x) + B(x)·y` and `y² = P(x)` on one smooth fiber.
struct FiberEquations {
    a: UPoly,
    b: UPoly,
    p: UPoly,
    /// `A² − B²P`, vanishing at the x-coordinates of the affine points.
    norm: UPoly,
}

impl FiberEquations {
    fn new(a4: &Poly, a6: &Poly, sections: &[(u32, Poly)], at: &dyn Fn(&Poly) -> Poly) -> Result<Self> {
        let c = |q: &Poly| q.constant_value().unwrap_or_else(|| rat(0));
        let p = UPoly::new(vec![c(a6), c(a4), rat(0), rat(1)]);
        let (mut a, mut b) = (UPoly::zero(), UPoly::zero());
        for (i, s) in sections {
            let (j, k) = pole_monomial(*i);
            let mut cs = vec![rat(0); j as usize + 1];
            cs[j as usize] = c(&at(s));
            let term = UPoly::new(cs);
            if k == 0 {
                a = a.add(&term);
            } else {
                b = b.add(&term);
            }
        }
        let norm = a.mul(&a).sub(&b.mul(&b).mul(&p));
        Ok(FiberEquations { a, b, p, norm })
    }

    /// Number of distinct affine points; `None` if `F` vanishes on the fiber.
    /// A root of `gcd(A, B)` carries both `y = ±√P`, unless `P` vanishes there.
    fn distinct_points(&self) -> Option<u32> {
        if self.norm.is_zero() {
            return None;
        }
        let deg = |q: &UPoly| q.degree().unwrap_or(0) as u32;
        let common = self.a.gcd(&self.b).squarefree_part();
        let both = if common.is_zero() { 0 } else { deg(&common) - deg(&common.gcd(&self.p)) };
        Some(deg(&self.norm.squarefree_part()) + both)
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::model;
    use super::super::Verdict;
    use super::*;
    use crate::exactpoly::{parse_poly, Poly};

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn double_section_is_not_reduced() {
        let m = model("u^4 + v^4", "u^6 - v^6");
        let sd = SpectralData::explicit(3, 3, &[(0, p("u^3 + v^3"))]);
        let c = reducedness_test(&m, &sd, 8, 1).unwrap();
        assert_eq!(c.verdict, Verdict::No);
    }

    #[test]
    fn generic_cover_is_reduced() {
        let m = model("u^4 + 2*v^4", "u^6 - 3*v^6 + u*v^5");
        let sd = SpectralData::explicit(2, 2, &[(0, p("u^2 + v^2")), (2, p("1"))]);
        let c = reducedness_test(&m, &sd, 16, 7).unwrap();
        assert_eq!(c.verdict, Verdict::Yes, "{c:?}");
        assert!(c.witness.unwrap()["base_point"].is_string());
    }

    #[test]
    fn squared_vertical_factor() {
        let m = model("u^4 + 2*v^4", "u^6 - 3*v^6 + u*v^5");
        let sq = p("(u - v)^2");
        let sd = SpectralData::explicit(2, 4, &[(0, &sq * &p("u^2 + v^2")), (2, sq.clone())]);
        let c = reducedness_test(&m, &sd, 16, 7).unwrap();
        assert_eq!(c.verdict, Verdict::No);
    }

    #[test]
    fn deterministic_in_seed() {
        let m = model("u^4 + 2*v^4", "u^6 - 3*v^6 + u*v^5");
        let sd = SpectralData::explicit(3, 3, &[(0, p("u^3 - v^3")), (2, p("u")), (3, p("1"))]);
        let a = reducedness_test(&m, &sd, 16, 3).unwrap();
        let b = reducedness_test(&m, &sd, 16, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.verdict, Verdict::Yes);
    }
}
