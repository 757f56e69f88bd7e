//! Higgs fields on bundles with spectral data.
//!
//! Every rule here is a sufficient condition. A failed condition yields
//! `unknown`, never `no`; `no` comes only from an explicit counterexample
//! descriptor.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::basecurve::{h0, LineBundleClass, Policy};
use crate::error::{Error, Result};
use crate::fibercalc::{rank_pushforward_end_twists, FiberBundleDesc};
use crate::spectral::{base_point_free, regularity_inference, section_indices, CurveCertificate, Property, Verdict};
use crate::weierstrass::WeierstrassModel;

/// `Σ_{i=1..r} h⁰(ω_B^i)`.
pub fn hitchin_dim(g: u32, r: u32) -> Result<i64> {
    if r < 1 {
        return Err(Error::domain("rank must be at least 1"));
    }
    let mut total = 0;
    for i in 1..=r {
        let ans = h0(&LineBundleClass::canonical_power(i, g), g, Policy::default())?;
        total += ans
            .value()
            .ok_or_else(|| Error::domain("h0 of a canonical power is always exact"))?;
    }
    Ok(total)
}

/// `0` for `g = 0`, `r` for `g = 1`, `g + (g−1)(r²−1)` otherwise.
pub fn hitchin_dim_closed_form(g: u32, r: u32) -> i64 {
    let (g, r) = (g as i64, r as i64);
    match g {
        0 => 0,
        1 => r,
        _ => g + (g - 1) * (r * r - 1),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaDegrees {
    /// `(i, (i−1)d − e + 2g − 2)` for `i ∈ {0, 2, …, r}`.
    pub degrees: Vec<(u32, i64)>,
    pub all_negative: bool,
}

pub fn lambda_degrees(r: u32, d: u32, e: i64, g: u32) -> Result<LambdaDegrees> {
    if r < 2 {
        return Err(Error::domain("lambda degrees need r >= 2"));
    }
    let degrees: Vec<(u32, i64)> = section_indices(r)
        .into_iter()
        .map(|i| (i, (i as i64 - 1) * d as i64 - e + 2 * g as i64 - 2))
        .collect();
    let all_negative = degrees.iter().all(|(_, v)| *v < 0);
    Ok(LambdaDegrees { degrees, all_negative })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fiberwise {
    SemistableGeneral,
    SemistableAll,
    RegularAll,
    Unknown,
}

impl Fiberwise {
    pub fn semistable_on_general_fiber(self) -> bool {
        self != Fiberwise::Unknown
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleNumerics {
    pub r: u32,
    pub c1_sq: i64,
    pub c2: i64,
    pub vertical_det: bool,
    pub fiberwise: Fiberwise,
}

impl BundleNumerics {
    pub fn validate(&self) -> Result<()> {
        if self.r < 1 {
            return Err(Error::domain("rank must be at least 1"));
        }
        if self.vertical_det && self.c1_sq != 0 {
            return Err(Error::domain("a vertical determinant has c1^2 = 0"));
        }
        Ok(())
    }
}

/// `(Δ, Bogomolov number)`; on a surface the two agree.
pub fn discriminant_numbers(b: &BundleNumerics) -> (i64, i64) {
    let delta = 2 * b.r as i64 * b.c2 - (b.r as i64 - 1) * b.c1_sq;
    (delta, delta)
}

/// Numerics of `End V = V ⊗ V^∨`.
pub fn end_bundle_numerics(b: &BundleNumerics) -> Result<BundleNumerics> {
    b.validate()?;
    if b.r == 1 {
        return Ok(BundleNumerics {
            r: 1,
            c1_sq: 0,
            c2: 0,
            vertical_det: true,
            fiberwise: Fiberwise::RegularAll,
        });
    }
    // a tensor product of degree-zero semistable bundles on a smooth
    // elliptic curve is semistable; nothing more is claimed
    let fiberwise = match b.fiberwise {
        Fiberwise::Unknown => Fiberwise::Unknown,
        _ => Fiberwise::SemistableGeneral,
    };
    Ok(BundleNumerics {
        r: b.r * b.r,
        c1_sq: 0,
        c2: discriminant_numbers(b).0,
        vertical_det: true,
        fiberwise,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reason {
    pub rule: String,
    pub anchor: String,
    pub inputs: Value,
}

impl Reason {
    fn new(rule: &str, anchor: &str, inputs: Value) -> Reason {
        Reason {
            rule: rule.into(),
            anchor: anchor.into(),
            inputs,
        }
    }
}

pub mod anchors {
    pub const VERTICAL: &str = "vertical-only criterion: semistable on a general fiber with reduced spectral cover";
    pub const COUNTEREXAMPLE: &str = "fiberwise rank comparison of End V twisted by the base and by the surface";
    pub const SCALAR_INTEGRAL: &str = "scalar-only criterion (integral branch): C integral and d >= 2g-1";
    pub const SCALAR_REDUCED: &str = "scalar-only criterion (reduced branch): C reduced and c2 >= (r-1)d+2g-1";
    pub const THRESHOLD: &str = "conjecture range: r >= 2 and e >= rd+2g";
    pub const BPF: &str = "base-point-freeness of |r Sigma + pi^* mu|";
    pub const GENERAL: &str = "general member of the spectral system is smooth";
    pub const REGULAR: &str = "smooth spectral cover implies fiberwise regular";
    pub const TRANSFER: &str =
        "scalar Higgs fields pull back to scalar fields; semistable with vanishing discriminant transfers";
    pub const END_REDUCTION: &str = "reduction to End V = V (x) V^dual, which has trivial determinant";
}

/// Vertical-only classification. `no` needs a fiber type whose two
/// End-twist ranks differ.
pub fn vertical_only(reduced: Verdict, ss_general: bool, fiber: Option<&FiberBundleDesc>) -> Result<(Verdict, Reason)> {
    if let Some(desc) = fiber {
        let (v, f) = rank_pushforward_end_twists(desc)?;
        if v < f {
            return Ok((
                Verdict::No,
                Reason::new(
                    "non-vertical Higgs fields exist",
                    anchors::COUNTEREXAMPLE,
                    json!({"fiber_type": desc, "vertical_rank": v, "full_rank": f}),
                ),
            ));
        }
    }
    let inputs = json!({"reduced": reduced, "semistable_general_fiber": ss_general});
    let verdict = if reduced == Verdict::Yes && ss_general {
        Verdict::Yes
    } else {
        Verdict::Unknown
    };
    Ok((verdict, Reason::new("vertical-only", anchors::VERTICAL, inputs)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarOutcome {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<u32>,
    pub lambda: LambdaDegrees,
    pub reason: Reason,
}

/// Scalar-only classification. The yes-branch cross-checks that every
/// λ-degree is negative and that `h⁰(ω_B) = g`.
pub fn scalar_only(
    r: u32,
    d: u32,
    e: i64,
    g: u32,
    reduced: Verdict,
    integral: Verdict,
    regular: Verdict,
) -> Result<ScalarOutcome> {
    let lambda = lambda_degrees(r, d, e, g)?;
    let (rd, gi, di) = (r as i64 * d as i64, g as i64, d as i64);
    if integral == Verdict::Yes && e < rd {
        return Err(Error::hypothesis(format!(
            "integral spectral curve needs s_r != 0, but e = {e} < rd = {rd}"
        )));
    }
    let integral_branch = integral == Verdict::Yes && di >= 2 * gi - 1;
    let reduced_bound = (r as i64 - 1) * di + 2 * gi - 1;
    let reduced_branch = reduced == Verdict::Yes && e >= reduced_bound;
    let fires = regular == Verdict::Yes && (integral_branch || reduced_branch);
    let anchor = if integral_branch && !reduced_branch {
        anchors::SCALAR_INTEGRAL
    } else {
        anchors::SCALAR_REDUCED
    };
    let inputs = json!({
        "r": r, "d": d, "e": e, "g": g,
        "reduced": reduced, "integral": integral, "regular": regular,
        "integral_branch": format!("d = {d} >= 2g-1 = {}: {}", 2 * gi - 1, di >= 2 * gi - 1),
        "reduced_branch": format!("e = {e} >= (r-1)d+2g-1 = {reduced_bound}: {}", e >= reduced_bound),
    });
    if !fires {
        return Ok(ScalarOutcome {
            verdict: Verdict::Unknown,
            dim: None,
            lambda,
            reason: Reason::new("scalar-only not established", anchor, inputs),
        });
    }
    if !lambda.all_negative {
        return Err(Error::Falsification(format!(
            "scalar-only fired at (r, d, e, g) = ({r}, {d}, {e}, {g}) with a nonnegative lambda degree"
        )));
    }
    let h0_omega = h0(&LineBundleClass::canonical_power(1, g), g, Policy::default())?.value();
    if h0_omega != Some(gi) {
        return Err(Error::Falsification(format!("h0(omega_B) = {h0_omega:?} differs from g = {g}")));
    }
    let mut inputs = inputs;
    inputs["h0_omega_X"] = json!(g);
    Ok(ScalarOutcome {
        verdict: Verdict::Yes,
        dim: Some(g),
        lambda,
        reason: Reason::new("every Higgs field is scalar", anchor, inputs),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HiggsSpace {
    ScalarOnly { dim: u32 },
    VerticalOnly,
    Unconstrained,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjectureCase {
    Holds,
    NotApplicable,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HiggsVerdict {
    pub higgs_space: HiggsSpace,
    pub conjecture_case: ConjectureCase,
    pub reasons: Vec<Reason>,
}

/// Classification inputs beyond the bundle numerics.
#[derive(Clone, Debug, PartialEq)]
pub struct HiggsInputs {
    pub d: u32,
    pub g: u32,
    pub reduced: Verdict,
    pub integral: Verdict,
    pub regular: Verdict,
    pub fiber_type: Option<FiberBundleDesc>,
}

/// Higgs-field space from the scalar and vertical rules.
pub fn classify(b: &BundleNumerics, inp: &HiggsInputs) -> Result<(HiggsSpace, Vec<Reason>)> {
    b.validate()?;
    let mut reasons = Vec::new();
    let reduced = if inp.integral == Verdict::Yes { Verdict::Yes } else { inp.reduced };
    let regular = if b.fiberwise == Fiberwise::RegularAll {
        Verdict::Yes
    } else {
        inp.regular
    };
    if b.r >= 2 {
        let s = scalar_only(b.r, inp.d, b.c2, inp.g, reduced, inp.integral, regular)?;
        reasons.push(s.reason);
        if let Some(dim) = s.dim {
            let (v, vr) = vertical_only(reduced, b.fiberwise.semistable_on_general_fiber(), None)?;
            reasons.push(vr);
            if v == Verdict::No {
                return Err(Error::Falsification("scalar-only holds but vertical-only fails".into()));
            }
            return Ok((HiggsSpace::ScalarOnly { dim }, reasons));
        }
    }
    let (v, vr) = vertical_only(reduced, b.fiberwise.semistable_on_general_fiber(), inp.fiber_type.as_ref())?;
    reasons.push(vr);
    let space = match v {
        Verdict::Yes => HiggsSpace::VerticalOnly,
        Verdict::No => HiggsSpace::Unconstrained,
        Verdict::Unknown => HiggsSpace::Unknown,
    };
    Ok((space, reasons))
}

/// Certificates feeding the conjecture chain.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SpectralCerts {
    pub base_point_free: Option<CurveCertificate>,
    pub smooth: Option<CurveCertificate>,
}

const BERTINI: &str = "general member of a base-point-free system on a smooth surface is smooth";

/// Smoothness of a general member, assumed rather than certified.
pub fn assumed_general_smoothness(bpf: &CurveCertificate) -> Option<CurveCertificate> {
    (bpf.verdict == Verdict::Yes).then(|| {
        CurveCertificate::yes(Property::Smooth, BERTINI, json!({"genericity": "assumed"}))
    })
}

/// Threshold, base-point-freeness, smoothness, regularity, scalar-only, and
/// transfer, in that order. `holds` only when every link is recorded.
pub fn conjecture_verdict(m: &WeierstrassModel, b: &BundleNumerics, certs: &SpectralCerts) -> Result<HiggsVerdict> {
    b.validate()?;
    if !b.vertical_det {
        return Err(Error::hypothesis(format!(
            "determinant is not vertical; apply the chain to End V (see end_bundle_numerics): {}",
            anchors::END_REDUCTION
        )));
    }
    if b.r < 2 {
        return Err(Error::domain("conjecture chain needs r >= 2"));
    }
    let (r, d, g, e) = (b.r, m.d, m.g, b.c2);
    let bound = r as i64 * d as i64 + 2 * g as i64;
    let mut reasons = vec![Reason::new(
        "threshold",
        anchors::THRESHOLD,
        json!({"instance": format!("e = {e} >= rd+2g = {bound}"), "met": e >= bound}),
    )];
    let done = |case, space, reasons| {
        Ok(HiggsVerdict {
            higgs_space: space,
            conjecture_case: case,
            reasons,
        })
    };
    if e < bound {
        return done(ConjectureCase::NotApplicable, HiggsSpace::Unknown, reasons);
    }
    let Some(bpf) = &certs.base_point_free else {
        return done(ConjectureCase::Unknown, HiggsSpace::Unknown, reasons);
    };
    reasons.push(Reason::new(
        "base-point-free",
        anchors::BPF,
        json!({"verdict": bpf.verdict, "rule": bpf.rule}),
    ));
    if bpf.verdict != Verdict::Yes {
        return done(ConjectureCase::Unknown, HiggsSpace::Unknown, reasons);
    }
    let smooth = match &certs.smooth {
        Some(c) => c,
        None => return done(ConjectureCase::Unknown, HiggsSpace::Unknown, reasons),
    };
    let genericity = if smooth.rule == BERTINI { "assumed" } else { "certified" };
    reasons.push(Reason::new(
        "smooth spectral curve",
        anchors::GENERAL,
        json!({"verdict": smooth.verdict, "genericity": genericity}),
    ));
    match smooth.verdict {
        Verdict::Yes => {}
        Verdict::No => return done(ConjectureCase::NotApplicable, HiggsSpace::Unknown, reasons),
        Verdict::Unknown => return done(ConjectureCase::Unknown, HiggsSpace::Unknown, reasons),
    }
    let regular = regularity_inference(Verdict::Yes);
    reasons.push(Reason::new("regular", anchors::REGULAR, json!({"regular": regular})));
    // smooth implies reduced
    let scalar = scalar_only(r, d, e, g, Verdict::Yes, Verdict::Unknown, regular)?;
    let Some(dim) = scalar.dim else {
        return Err(Error::Falsification(format!(
            "scalar-only failed inside the conjecture range at (r, d, e, g) = ({r}, {d}, {e}, {g})"
        )));
    };
    reasons.push(scalar.reason);
    reasons.push(Reason::new(
        "instability transfers",
        anchors::TRANSFER,
        json!({"discriminant": discriminant_numbers(b).0, "semistability_of_V": "caller-asserted"}),
    ));
    done(ConjectureCase::Holds, HiggsSpace::ScalarOnly { dim }, reasons)
}

/// One sweep cell on an abstract model, with assumed genericity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub r: u32,
    pub d: u32,
    pub g: u32,
    pub e: i64,
    pub base_point_free: Verdict,
    pub scalar_only: Verdict,
    pub lambda_all_negative: bool,
    pub conjecture_case: ConjectureCase,
    pub anchors: Vec<String>,
}

pub fn sweep_row(m: &WeierstrassModel, r: u32, e: i64) -> Result<SweepRow> {
    let b = BundleNumerics {
        r,
        c1_sq: 0,
        c2: e,
        vertical_det: true,
        fiberwise: Fiberwise::SemistableGeneral,
    };
    let bpf = base_point_free(m, r, e, 0, 0)?;
    let certs = SpectralCerts {
        smooth: assumed_general_smoothness(&bpf),
        base_point_free: Some(bpf.clone()),
    };
    let v = conjecture_verdict(m, &b, &certs)?;
    let s = scalar_only(r, m.d, e, m.g, Verdict::Yes, Verdict::Unknown, Verdict::Yes)?;
    Ok(SweepRow {
        r,
        d: m.d,
        g: m.g,
        e,
        base_point_free: bpf.verdict,
        scalar_only: s.verdict,
        lambda_all_negative: s.lambda.all_negative,
        conjecture_case: v.conjecture_case,
        anchors: v.reasons.iter().map(|r| r.anchor.clone()).collect(),
    })
}
