//! Base points of `|rΣ + π★μ|`.
//!
//! The linear system is spanned by `mᵢ(x, y)·u^a·v^(e−i·d−a)` for
//! `i ∈ {0, 2, …, r}`. Along Σ only `m_r` survives to leading order, so every
//! point of Σ is a base point exactly when `e < r·d`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{section_indices, CurveCertificate, Property, RatSampler};
use crate::error::{Error, Result};
use crate::basecurve::section_basis_p1;
use crate::exactpoly::{rat, Poly, Rat};
use crate::weierstrass::{fmt_point, WeierstrassModel};

const RULE_AMPLE: &str = "e >= r*d + 2g: every summand of the direct image is globally generated";
const RULE_SIGMA: &str = "e < r*d: s_r is forced to vanish, so Sigma lies in the base locus";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerReport {
    pub samples: u32,
    pub seed: u64,
    /// Base points found, as `"(p:q)"` with an optional fiber coordinate.
    pub base_points: Vec<String>,
}

/// Sampled search for base points. Affine samples fix `(b, x)` and keep `y`
/// formal; every fourth sample is a point of Σ.
pub fn sample_base_locus(m: &WeierstrassModel, r: u32, e: i64, samples: u32, seed: u64) -> Result<SamplerReport> {
    if !m.is_explicit() {
        return Err(Error::domain("sampling needs an explicit model"));
    }
    let d = m.d as i64;
    let mut rng = RatSampler::new(seed);
    let mut found = Vec::new();
    for k in 0..samples {
        let t = rng.next_rat(12, 6);
        let b = fmt_point(&t, &rat(1));
        let at = |q: &Poly| q.eval_at(&[("u", t.clone()), ("v", rat(1))]);
        // some u,v-monomial of degree n is nonzero at the base point
        let base_nonzero = |n: i64| -> Result<bool> {
            for s in section_basis_p1(n) {
                if !at(&s)?.is_zero() {
                    return Ok(true);
                }
            }
            Ok(false)
        };
        if k % 4 == 3 {
            // after clearing the pole along Σ only pole order r survives
            if !base_nonzero(e - r as i64 * d)? {
                found.push(format!("{b} on Sigma"));
            }
            continue;
        }
        let x0 = rng.next_rat(12, 6);
        let p_val: Rat = &x0 * &x0 * &x0 + at(m.a4()?)? * &x0 + at(m.a6()?)?;
        let mut generated = false;
        for i in section_indices(r) {
            let (j, k) = super::pole_monomial(i);
            let xval = num_traits::pow(x0.clone(), j as usize);
            // y stays formal, so y^k vanishes only where P does
            if !xval.is_zero() && (k == 0 || !p_val.is_zero()) && base_nonzero(e - i as i64 * d)? {
                generated = true;
                break;
            }
        }
        if !generated {
            found.push(format!("{b} x={x0}"));
        }
    }
    Ok(SamplerReport {
        samples,
        seed,
        base_points: found,
    })
}

/// Base-point freeness. On explicit models in the ample range the sampler
/// runs as a cross-check; a base point there would falsify the rule.
pub fn base_point_free(m: &WeierstrassModel, r: u32, e: i64, samples: u32, seed: u64) -> Result<CurveCertificate> {
    let prop = Property::BasePointFree;
    let (rd, g) = (r as i64 * m.d as i64, m.g as i64);
    if e >= rd + 2 * g {
        let mut witness = json!({"e": e, "threshold": rd + 2 * g});
        if m.is_explicit() && samples > 0 {
            let rep = sample_base_locus(m, r, e, samples, seed)?;
            if !rep.base_points.is_empty() {
                return Err(Error::Falsification(format!(
                    "base point {} found although e >= r*d + 2g",
                    rep.base_points[0]
                )));
            }
            witness["sampler"] = serde_json::to_value(&rep)?;
        }
        return Ok(CurveCertificate::yes(prop, RULE_AMPLE, witness));
    }
    if e < rd {
        return Ok(CurveCertificate::no(
            prop,
            RULE_SIGMA,
            json!({"e": e, "rd": rd, "base_locus": "Sigma"}),
        ));
    }
    Ok(CurveCertificate::unknown(
        prop,
        RULE_AMPLE,
        format!("r*d <= e < r*d + 2g ({rd} <= {e} < {})", rd + 2 * g),
    ))
}
