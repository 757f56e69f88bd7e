//! Spectral data `(s₂, …, s_r, s₀)` and certificates for the spectral curve
//! `C = {F = 0}` in `|rΣ + π★μ|`.
//!
//! Index `i` of `sᵢ` is the pole order along Σ of its monomial in `x, y`.
//! All certificates are three-valued; `yes` and `no` always carry a witness.

mod bpf;
mod d5;
mod reduced;
mod smooth;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::basecurve::LineBundleClass;
use crate::error::{Error, Result};
use crate::exactpoly::{gcd_many, Poly, Rat};
use crate::weierstrass::WeierstrassModel;

pub use bpf::{base_point_free, sample_base_locus, SamplerReport};
pub use reduced::reducedness_test;
pub use smooth::smoothness_test;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SectionSymbol {
    Zero,
    NonzeroUnknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Section {
    Symbol { symbol: SectionSymbol },
    Poly(Poly),
}

impl Section {
    pub fn zero() -> Self {
        Section::Symbol {
            symbol: SectionSymbol::Zero,
        }
    }

    /// `Some(true)` if known to vanish, `Some(false)` if known not to.
    pub fn is_zero(&self) -> Option<bool> {
        match self {
            Section::Symbol {
                symbol: SectionSymbol::Zero,
            } => Some(true),
            Section::Symbol {
                symbol: SectionSymbol::NonzeroUnknown,
            } => Some(false),
            Section::Poly(p) => Some(p.is_zero()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralData {
    pub r: u32,
    pub e: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<LineBundleClass>,
    pub sections: BTreeMap<u32, Section>,
}

/// Indices `{0, 2, 3, …, r}`.
pub fn section_indices(r: u32) -> Vec<u32> {
    std::iter::once(0).chain(2..=r).collect()
}

impl SpectralData {
    /// Explicit data from `(index, polynomial)` pairs; missing indices are zero.
    pub fn explicit(r: u32, e: i64, sections: &[(u32, Poly)]) -> Self {
        SpectralData {
            r,
            e,
            mu: None,
            sections: sections
                .iter()
                .map(|(i, p)| (*i, Section::Poly(p.clone())))
                .collect(),
        }
    }

    pub fn mu(&self) -> LineBundleClass {
        self.mu.clone().unwrap_or_else(|| LineBundleClass::generic(self.e))
    }

    pub fn section(&self, i: u32) -> Section {
        self.sections.get(&i).cloned().unwrap_or_else(Section::zero)
    }

    /// Known-zero status of `sᵢ`, counting forced vanishing and the absent `s₁`.
    pub fn vanishes(&self, i: u32, d: u32) -> Option<bool> {
        if i == 1 || self.e < i as i64 * d as i64 {
            return Some(true);
        }
        self.section(i).is_zero()
    }

    pub fn validate(&self, m: &WeierstrassModel) -> Result<()> {
        if self.r < 2 {
            return Err(Error::domain("spectral data needs r >= 2"));
        }
        if self.mu().degree != self.e {
            return Err(Error::domain(format!(
                "mu has degree {} but e = {}",
                self.mu().degree,
                self.e
            )));
        }
        self.mu().validate(m.g)?;
        let allowed = section_indices(self.r);
        for i in self.sections.keys() {
            if !allowed.contains(i) {
                return Err(Error::domain(format!("section index {i} is not in {{0, 2, …, r}}")));
            }
        }
        let mut all_zero = true;
        for i in allowed {
            let deg = self.e - i as i64 * m.d as i64;
            let s = self.section(i);
            if let Section::Poly(p) = &s {
                if !p.is_zero() {
                    if deg < 0 {
                        return Err(Error::domain(format!("s_{i} must vanish: its degree {deg} is negative")));
                    }
                    if p.occurring_vars().iter().any(|v| v != "u" && v != "v")
                        || !p.is_homogeneous_of(deg as u32)
                    {
                        return Err(Error::domain(format!(
                            "s_{i} = {p} is not a binary form of degree {deg}"
                        )));
                    }
                    if !m.is_explicit() {
                        return Err(Error::domain("polynomial sections need an explicit model"));
                    }
                }
            }
            if s.is_zero() == Some(false) {
                if deg < 0 {
                    return Err(Error::domain(format!("s_{i} is forced to vanish (degree {deg})")));
                }
                all_zero = false;
            }
        }
        if all_zero {
            return Err(Error::domain("all sections vanish"));
        }
        Ok(())
    }

    /// `sᵢ` as a binary form in `u, v`; errors on symbolic nonzero entries.
    pub fn poly(&self, i: u32) -> Result<Poly> {
        let uv = ["u".to_string(), "v".to_string()];
        match self.section(i) {
            Section::Poly(p) => p.with_vars(&uv),
            Section::Symbol {
                symbol: SectionSymbol::Zero,
            } => Ok(Poly::zero().with_vars(&uv)?),
            Section::Symbol { .. } => Err(Error::domain(format!("s_{i} is symbolic; explicit sections required"))),
        }
    }

    pub fn polys(&self) -> Result<Vec<(u32, Poly)>> {
        section_indices(self.r)
            .into_iter()
            .map(|i| Ok((i, self.poly(i)?)))
            .collect()
    }

    pub fn has_explicit_sections(&self) -> bool {
        section_indices(self.r).into_iter().all(|i| self.poly(i).is_ok())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Reduced,
    Integral,
    Smooth,
    Connected,
    BasePointFree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveCertificate {
    pub property: Property,
    pub verdict: Verdict,
    /// Rule that produced the verdict.
    pub rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl CurveCertificate {
    pub fn yes(property: Property, rule: &str, witness: Value) -> Self {
        CurveCertificate {
            property,
            verdict: Verdict::Yes,
            rule: rule.into(),
            witness: Some(witness),
            reason: None,
        }
    }

    pub fn no(property: Property, rule: &str, witness: Value) -> Self {
        CurveCertificate {
            property,
            verdict: Verdict::No,
            rule: rule.into(),
            witness: Some(witness),
            reason: None,
        }
    }

    pub fn unknown(property: Property, rule: &str, reason: impl Into<String>) -> Self {
        CurveCertificate {
            property,
            verdict: Verdict::Unknown,
            rule: rule.into(),
            witness: None,
            reason: Some(reason.into()),
        }
    }
}

/// `{ j ∈ {2, …, r} : e < j·d }`.
pub fn forced_vanishing(r: u32, d: u32, e: i64) -> BTreeSet<u32> {
    (2..=r).filter(|j| e < *j as i64 * d as i64).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForcedVanishing {
    pub indices: BTreeSet<u32>,
    /// `s_r` vanishes, so `C ⊇ Σ`.
    pub not_integral: bool,
    /// `s_r` and `s_{r-1}` vanish, so `C ⊇ 2Σ`.
    pub not_reduced: bool,
}

pub fn forced_vanishing_report(r: u32, d: u32, e: i64) -> ForcedVanishing {
    let idx = forced_vanishing(r, d, e);
    let not_integral = idx.contains(&r);
    let not_reduced = not_integral && (r == 2 || idx.contains(&(r - 1)));
    ForcedVanishing {
        indices: idx,
        not_integral,
        not_reduced,
    }
}

/// Degree of `π★V(Σ)`, namely `deg δ − e`.
pub fn grr_degree(deg_delta: i64, e: i64) -> i64 {
    deg_delta - e
}

/// Exponents `(j, k)` of the monomial `xʲyᵏ` with pole order `i`.
pub fn pole_monomial(i: u32) -> (u32, u32) {
    match i {
        0 => (0, 0),
        i if i % 2 == 0 => (i / 2, 0),
        i => ((i - 3) / 2, 1),
    }
}

fn xy_monomial(i: u32) -> Poly {
    let (j, k) = pole_monomial(i);
    &Poly::var("x").pow(j) * &Poly::var("y").pow(k)
}

/// `F(u, v, x, y) = Σ sᵢ(u, v)·mᵢ(x, y)`.
pub fn spectral_polynomial(m: &WeierstrassModel, sd: &SpectralData) -> Result<Poly> {
    if !m.is_explicit() {
        return Err(Error::domain("spectral polynomial needs an explicit model"));
    }
    sd.validate(m)?;
    let mut f = Poly::zero();
    for (i, s) in sd.polys()? {
        f = &f + &(&s * &xy_monomial(i));
    }
    Ok(f)
}

/// `y² − x³ − a₄x − a₆` in `u, v, x, y`.
pub fn weierstrass_polynomial(m: &WeierstrassModel) -> Result<Poly> {
    let x = Poly::var("x");
    let p = &(&x.pow(3) + &(m.a4()? * &x)) + m.a6()?;
    Ok(&Poly::var("y").pow(2) - &p)
}

/// gcd of the nonzero sections: the vertical part of C.
pub fn vertical_part(sd: &SpectralData) -> Result<Poly> {
    let ps: Vec<Poly> = sd.polys()?.into_iter().map(|(_, p)| p).collect();
    gcd_many(&ps)
}

pub fn connectedness_certificate(r: u32, d: u32, e: i64, g: u32) -> CurveCertificate {
    let degs: Vec<(u32, i64)> = section_indices(r)
        .into_iter()
        .map(|i| (i, (i as i64 - 1) * d as i64 - e))
        .collect();
    let witness = json!({
        "degrees": degs.iter().map(|(i, v)| json!({"i": i, "degree": v})).collect::<Vec<_>>(),
        "g": g,
    });
    if degs.iter().all(|(_, v)| *v < 0) {
        CurveCertificate::yes(Property::Connected, "connected: first direct image of O(-C) has negative summands", witness)
    } else {
        let bad: Vec<u32> = degs.iter().filter(|(_, v)| *v >= 0).map(|(i, _)| *i).collect();
        CurveCertificate::unknown(
            Property::Connected,
            "connected: first direct image of O(-C) has negative summands",
            format!("degree (i-1)d-e is nonnegative for i in {bad:?}"),
        )
    }
}

/// Genus of a smooth member of `|rΣ + π★μ|` by adjunction.
pub fn spectral_genus(r: u32, d: u32, e: i64, g: u32) -> i64 {
    let (r, d, g) = (r as i64, d as i64, g as i64);
    1 + r * e - r * (r - 1) * d / 2 + r * (g - 1)
}

/// Fiberwise regularity from smoothness of the cover over the fiber.
pub fn regularity_inference(cover_smooth_over_b: Verdict) -> Verdict {
    match cover_smooth_over_b {
        Verdict::Yes => Verdict::Yes,
        _ => Verdict::Unknown,
    }
}

/// Integrality from forced vanishing, vertical components, and the
/// smooth-and-connected composite.
pub fn integrality_test(
    m: &WeierstrassModel,
    sd: &SpectralData,
    smooth: Option<&CurveCertificate>,
    connected: Option<&CurveCertificate>,
) -> Result<CurveCertificate> {
    let prop = Property::Integral;
    if sd.vanishes(sd.r, m.d) == Some(true) {
        let forced = forced_vanishing(sd.r, m.d, sd.e).contains(&sd.r);
        return Ok(CurveCertificate::no(
            prop,
            "s_r = 0 puts the section inside C",
            json!({"vanishing_index": sd.r, "forced": forced, "component": "Sigma"}),
        ));
    }
    if m.is_explicit() && sd.has_explicit_sections() {
        let vert = vertical_part(sd)?;
        if !vert.is_constant() {
            return Ok(CurveCertificate::no(
                prop,
                "common factor of all s_i is a vertical component",
                json!({"vertical_component": vert.to_string()}),
            ));
        }
    }
    let s = smooth.map(|c| c.verdict);
    let c = connected.map(|c| c.verdict);
    if s == Some(Verdict::Yes) && c == Some(Verdict::Yes) {
        return Ok(CurveCertificate::yes(
            prop,
            "smooth and connected implies integral",
            json!({"smooth": "yes", "connected": "yes"}),
        ));
    }
    Ok(CurveCertificate::unknown(
        prop,
        "smooth and connected implies integral",
        format!("smooth = {s:?}, connected = {c:?}"),
    ))
}

/// Deterministic stream of small rationals.
pub struct RatSampler(ChaCha8Rng);

impl RatSampler {
    pub fn new(seed: u64) -> Self {
        RatSampler(ChaCha8Rng::seed_from_u64(seed))
    }

    /// `p/q` with `|p| ≤ num`, `1 ≤ q ≤ den`.
    pub fn next_rat(&mut self, num: i64, den: i64) -> Rat {
        let p = self.0.gen_range(-num..=num);
        let q = self.0.gen_range(1..=den);
        Rat::new(BigInt::from(p), BigInt::from(q))
    }

    pub fn next_int(&mut self, lo: i64, hi: i64) -> i64 {
        self.0.gen_range(lo..=hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::parse_poly;
    use crate::weierstrass::{build_model, BaseKind, ModelInput};

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    pub(crate) fn model(a4: &str, a6: &str) -> WeierstrassModel {
        build_model(
            &ModelInput {
                g: 0,
                d: 1,
                base_kind: BaseKind::P1Explicit,
                a4: Some(p(a4)),
                a6: Some(p(a6)),
            },
            false,
        )
        .unwrap()
    }

    #[test]
    fn forced_examples() {
        let f = forced_vanishing_report(3, 2, 5);
        assert_eq!(f.indices, BTreeSet::from([3]));
        assert!(f.not_integral && !f.not_reduced);
        let f = forced_vanishing_report(3, 2, 2);
        assert_eq!(f.indices, BTreeSet::from([2, 3]));
        assert!(f.not_reduced);
        assert!(forced_vanishing(2, 1, 10).is_empty());
    }

    #[test]
    fn forced_monotone_in_e() {
        for r in 2..=6 {
            for d in 1..=4 {
                for e in -2..30 {
                    assert!(forced_vanishing(r, d, e + 1).is_subset(&forced_vanishing(r, d, e)));
                }
            }
        }
    }

    #[test]
    fn grr_examples() {
        assert_eq!(grr_degree(0, 5), -5);
        assert_eq!(grr_degree(0, 0), 0);
        assert_eq!(grr_degree(3, 7), -4);
    }

    #[test]
    fn pole_order_basis() {
        let names: Vec<String> = [0, 2, 3, 4, 5].iter().map(|i| xy_monomial(*i).to_string()).collect();
        assert_eq!(names, ["1", "x", "y", "x^2", "x*y"]);
        for i in [0u32, 2, 3, 4, 5, 6, 7, 8, 9] {
            let (j, k) = pole_monomial(i);
            assert_eq!(2 * j + 3 * k, i);
            assert!(k <= 1);
        }
    }

    #[test]
    fn spectral_polynomial_shapes() {
        let m = model("u^4 + v^4", "u^6 - v^6");
        let sd = SpectralData::explicit(2, 2, &[(0, p("u^2+v^2")), (2, p("1"))]);
        assert_eq!(spectral_polynomial(&m, &sd).unwrap(), p("u^2 + v^2 + x"));
        let sd = SpectralData::explicit(3, 3, &[(0, p("u^3")), (2, p("v")), (3, p("2"))]);
        assert_eq!(spectral_polynomial(&m, &sd).unwrap(), p("u^3 + v*x + 2*y"));
        let sd = SpectralData::explicit(
            5,
            5,
            &[(0, p("u^5")), (2, p("u^3")), (3, p("v^2")), (4, p("u")), (5, p("1"))],
        );
        assert_eq!(
            spectral_polynomial(&m, &sd).unwrap(),
            p("u^5 + u^3*x + v^2*y + u*x^2 + x*y")
        );
        let bad = SpectralData::explicit(2, 2, &[(0, p("u^3")), (2, p("1"))]);
        assert!(spectral_polynomial(&m, &bad).is_err());
    }

    #[test]
    fn connectedness_examples() {
        assert_eq!(connectedness_certificate(2, 1, 3, 0).verdict, Verdict::Yes);
        assert_eq!(connectedness_certificate(3, 1, 2, 0).verdict, Verdict::Unknown);
        assert_eq!(connectedness_certificate(2, 1, 1, 1).verdict, Verdict::Unknown);
    }

    #[test]
    fn genus_examples() {
        assert_eq!(spectral_genus(2, 1, 3, 0), 4);
        assert_eq!(spectral_genus(2, 1, 2, 0), 2);
        for d in 1..4 {
            for g in 0..4 {
                assert_eq!(spectral_genus(1, d, 0, g), g as i64);
            }
        }
    }

    #[test]
    fn regularity_examples() {
        assert_eq!(regularity_inference(Verdict::Yes), Verdict::Yes);
        assert_eq!(regularity_inference(Verdict::No), Verdict::Unknown);
        assert_eq!(regularity_inference(Verdict::Unknown), Verdict::Unknown);
    }

    #[test]
    fn section_json() {
        let src = r#"{"r":3,"e":2,"sections":{"0":"u^2","2":{"symbol":"nonzero_unknown"},"3":{"symbol":"zero"}}}"#;
        let sd: SpectralData = serde_json::from_str(src).unwrap();
        assert_eq!(sd.section(0), Section::Poly(p("u^2")));
        assert_eq!(sd.section(2).is_zero(), Some(false));
        assert_eq!(sd.section(3).is_zero(), Some(true));
    }

    #[test]
    fn monomial_count_matches_registry() {
        use crate::basecurve::Policy;
        use crate::weierstrass::SheafExpr;
        for d in 1..=3i64 {
            let m = build_model(
                &ModelInput {
                    g: 0,
                    d,
                    base_kind: BaseKind::Abstract,
                    a4: None,
                    a6: None,
                },
                false,
            )
            .unwrap();
            for r in 2..=6u32 {
                for e in 0..=20i64 {
                    let expr = SheafExpr::Twist {
                        inner: Box::new(SheafExpr::SectionMultiple { r: r as i64 }),
                        m: LineBundleClass::generic(e),
                    };
                    let via = m.pushforward(&expr).unwrap().r0.h0(0, Policy::default()).unwrap();
                    let count: i64 = section_indices(r)
                        .iter()
                        .map(|i| (e - *i as i64 * d + 1).max(0))
                        .sum();
                    assert_eq!(via, Some(count));
                }
            }
        }
    }
}
