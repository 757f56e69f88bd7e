//! Weierstrass fibrations `y² = x³ + a₄x + a₆` over a curve B.
//!
//! Explicit models live over ℙ¹ with binary forms a₄, a₆ in `u, v`;
//! abstract models carry only `(g, d)`.

use serde::{Deserialize, Serialize};

use crate::basecurve::{h0, LineBundleClass, Policy, Tag};
use crate::error::{Error, Result};
use crate::exactpoly::{gcd, rat, squarefree_part, Poly, Rat, UPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseKind {
    P1Explicit,
    Abstract,
}

/// Model description as read from JSON.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelInput {
    pub g: u32,
    pub d: i64,
    pub base_kind: BaseKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a4: Option<Poly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a6: Option<Poly>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub non_isotrivial: bool,
    pub delta_nonzero: bool,
    /// `None` on abstract models.
    pub delta_squarefree: Option<bool>,
    pub disjoint_a4_a6: Option<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeierstrassModel {
    pub g: u32,
    pub d: u32,
    pub base_kind: BaseKind,
    pub a4: Option<Poly>,
    pub a6: Option<Poly>,
    pub delta: Option<Poly>,
    pub report: ValidationReport,
    pub warnings: Vec<String>,
}

/// `−16(4a₄³ + 27a₆²)`.
pub fn discriminant(a4: &Poly, a6: &Poly) -> Poly {
    let s = &(&Poly::int(4) * &a4.pow(3)) + &(&Poly::int(27) * &a6.pow(2));
    &Poly::int(-16) * &s
}

fn binary_form(p: &Poly, what: &str, deg: u32) -> Result<()> {
    let extra: Vec<String> = p
        .occurring_vars()
        .into_iter()
        .filter(|v| v != "u" && v != "v")
        .collect();
    if !extra.is_empty() {
        return Err(Error::domain(format!("{what} uses variables {extra:?}; expected u, v")));
    }
    if !p.is_homogeneous_of(deg) {
        return Err(Error::domain(format!("{what} = {p} is not homogeneous of degree {deg}")));
    }
    Ok(())
}

pub fn build_model(input: &ModelInput, allow_cusps: bool) -> Result<WeierstrassModel> {
    if input.d < 0 {
        return Err(Error::domain(format!("degree d = {} of the fundamental line bundle is negative", input.d)));
    }
    if input.d == 0 {
        return Err(Error::hypothesis("d = 0: the fibration is isotrivial"));
    }
    let d = input.d as u32;
    let g = input.g;
    match input.base_kind {
        BaseKind::Abstract => Ok(WeierstrassModel {
            g,
            d,
            base_kind: BaseKind::Abstract,
            a4: None,
            a6: None,
            delta: None,
            report: ValidationReport {
                non_isotrivial: true,
                delta_nonzero: true,
                delta_squarefree: None,
                disjoint_a4_a6: None,
            },
            warnings: vec!["abstract base: only degree bookkeeping is available".into()],
        }),
        BaseKind::P1Explicit => {
            if g != 0 {
                return Err(Error::domain("explicit models require g = 0"));
            }
            let (Some(a4), Some(a6)) = (&input.a4, &input.a6) else {
                return Err(Error::domain("explicit models need both a4 and a6"));
            };
            binary_form(a4, "a4", 4 * d)?;
            binary_form(a6, "a6", 6 * d)?;
            let uv = vec!["u".to_string(), "v".to_string()];
            let a4 = a4.with_vars(&uv)?;
            let a6 = a6.with_vars(&uv)?;
            let delta = discriminant(&a4, &a6);
            if delta.is_zero() {
                return Err(Error::hypothesis("degenerate model: discriminant vanishes identically"));
            }
            let mut warnings = Vec::new();
            let common = gcd(&a4, &a6)?;
            let disjoint = common.is_constant();
            if !disjoint {
                let pts = describe_zeros(&common);
                let msg = format!("cuspidal fiber over {}", pts.join(", "));
                if !allow_cusps {
                    return Err(Error::hypothesis(format!("{msg}; only nodal fibers are supported")));
                }
                warnings.push(format!("{msg}; downstream verdicts are unsupported"));
            }
            let sqf = squarefree_part(&delta)?.is_associate(&delta);
            if !sqf {
                warnings.push("discriminant is not reduced: total space is singular, smoothness checks are refused".into());
            }
            Ok(WeierstrassModel {
                g,
                d,
                base_kind: BaseKind::P1Explicit,
                a4: Some(a4),
                a6: Some(a6),
                delta: Some(delta),
                report: ValidationReport {
                    non_isotrivial: true,
                    delta_nonzero: true,
                    delta_squarefree: Some(sqf),
                    disjoint_a4_a6: Some(disjoint),
                },
                warnings,
            })
        }
    }
}

/// Discriminant data: the section itself on explicit models, only its
/// degree on abstract ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Discriminant {
    Section(Poly),
    DegreeOnly(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularFiber {
    /// `(p:q)` for a rational point, otherwise the zero locus of a form.
    pub point: String,
    #[serde(rename = "type")]
    pub fiber_type: String,
    /// Number of geometric points in this entry.
    pub count: u32,
    /// Vanishing order of Δ at each point.
    pub multiplicity: u32,
}

pub fn fmt_point(p: &Rat, q: &Rat) -> String {
    format!("({p}:{q})")
}

/// `f(t, 1)` as a univariate polynomial in `u`.
pub fn dehomogenize(f: &Poly) -> UPoly {
    UPoly::from_poly(&f.substitute("v", &rat(1)), "u").expect("binary form in u, v")
}

/// Grouped zeros of a nonzero binary form: `(point label, count, multiplicity, rational)`.
fn grouped_zeros(f: &Poly) -> Vec<(String, u32, u32, Option<(Rat, Rat)>)> {
    let total = f.total_degree().unwrap_or(0);
    let aff = dehomogenize(f);
    let mut out = Vec::new();
    let at_inf = total - aff.degree().unwrap_or(0) as u32;
    if at_inf > 0 {
        out.push((fmt_point(&rat(1), &rat(0)), 1, at_inf, Some((rat(1), rat(0)))));
    }
    for (fac, mult) in aff.squarefree_decomposition() {
        let mut rest = fac.clone();
        for root in fac.rational_roots() {
            out.push((fmt_point(&root, &rat(1)), 1, mult, Some((root.clone(), rat(1)))));
            rest = rest.div_rem(&UPoly::linear_root(root)).0;
        }
        if let Some(deg) = rest.degree().filter(|d| *d > 0) {
            let form = homogenize(&rest, deg as u32);
            out.push((format!("V({form})"), deg as u32, mult, None));
        }
    }
    out
}

fn homogenize(p: &UPoly, deg: u32) -> Poly {
    let mut acc = Poly::zero();
    for (i, c) in p.coeffs().iter().enumerate() {
        acc = &acc + &Poly::monomial(&["u", "v"], &[i as u32, deg - i as u32], c.clone());
    }
    acc
}

fn describe_zeros(f: &Poly) -> Vec<String> {
    grouped_zeros(f).into_iter().map(|z| z.0).collect()
}

impl WeierstrassModel {
    pub fn is_explicit(&self) -> bool {
        self.base_kind == BaseKind::P1Explicit
    }

    pub fn delta_degree(&self) -> u32 {
        12 * self.d
    }

    pub fn discriminant_section(&self) -> Discriminant {
        match &self.delta {
            Some(p) => Discriminant::Section(p.clone()),
            None => Discriminant::DegreeOnly(self.delta_degree()),
        }
    }

    pub fn a4(&self) -> Result<&Poly> {
        self.a4.as_ref().ok_or_else(|| Error::domain("model is not explicit"))
    }

    pub fn a6(&self) -> Result<&Poly> {
        self.a6.as_ref().ok_or_else(|| Error::domain("model is not explicit"))
    }

    pub fn delta(&self) -> Result<&Poly> {
        self.delta.as_ref().ok_or_else(|| Error::domain("model is not explicit"))
    }

    /// Singular fibers grouped by vanishing order; empty on abstract models.
    pub fn singular_fibers(&self) -> Vec<SingularFiber> {
        let (Some(delta), Some(a4), Some(a6)) = (&self.delta, &self.a4, &self.a6) else {
            return Vec::new();
        };
        let cusp = gcd(a4, a6).unwrap_or_else(|_| Poly::one());
        grouped_zeros(delta)
            .into_iter()
            .map(|(point, count, mult, rational)| {
                let on_cusp = match &rational {
                    Some((p, q)) => cusp.eval_at(&[("u", p.clone()), ("v", q.clone())]).unwrap_or(rat(1)) == rat(0),
                    None => !cusp.is_constant() && {
                        // an irrational group lies on the cusp locus iff its form divides it
                        let form = point.trim_start_matches("V(").trim_end_matches(')');
                        crate::exactpoly::parse_poly(form).map(|f| f.divides(&cusp)).unwrap_or(false)
                    },
                };
                let fiber_type = match (on_cusp, mult) {
                    (false, 1) => "I1".to_string(),
                    (false, n) => format!("I{n}"),
                    (true, 2) => "II".to_string(),
                    (true, _) => "unsupported".to_string(),
                };
                SingularFiber {
                    point,
                    fiber_type,
                    count,
                    multiplicity: mult,
                }
            })
            .collect()
    }

    /// Number of singular fibers counted with multiplicity.
    pub fn singular_length(&self) -> u32 {
        match &self.delta {
            Some(_) => self.singular_fibers().iter().map(|f| f.count * f.multiplicity).sum(),
            None => self.delta_degree(),
        }
    }

    /// 𝕃^k on B.
    pub fn fundamental_power(&self, k: i64) -> LineBundleClass {
        if k == 0 {
            LineBundleClass::trivial()
        } else {
            LineBundleClass::unknown(k * self.d as i64)
        }
    }

    /// ω_X = π★(ω_B ⊗ 𝕃); this returns the class on B.
    pub fn canonical_bundle(&self) -> LineBundleClass {
        LineBundleClass::canonical_power(1, self.g).tensor(&self.fundamental_power(1))
    }

    /// Degree of 𝕃¹⁰ ⊗ ω_B, which carries a nonzero section since d > 0.
    pub fn kodaira_spencer_degree(&self) -> i64 {
        10 * self.d as i64 + 2 * self.g as i64 - 2
    }

    pub fn pushforward(&self, expr: &SheafExpr) -> Result<Pushforward> {
        pushforward(self, expr)
    }
}

/// A labelled line-bundle summand of a direct image.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    pub label: String,
    pub class: LineBundleClass,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SheafSum {
    pub summands: Vec<Summand>,
}

impl SheafSum {
    pub fn zero() -> Self {
        SheafSum::default()
    }

    pub fn rank(&self) -> usize {
        self.summands.len()
    }

    pub fn degree(&self) -> i64 {
        self.summands.iter().map(|s| s.class.degree).sum()
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.summands.iter().map(|s| s.class.degree).collect()
    }

    /// Σ h⁰ of the summands; `None` if any summand is not exact.
    pub fn h0(&self, g: u32, policy: Policy) -> Result<Option<i64>> {
        let mut total = 0;
        for s in &self.summands {
            match h0(&s.class, g, policy)?.value() {
                Some(v) => total += v,
                None => return Ok(None),
            }
        }
        Ok(Some(total))
    }

    fn twist(&self, m: &LineBundleClass, m_label: &str) -> SheafSum {
        SheafSum {
            summands: self
                .summands
                .iter()
                .map(|s| Summand {
                    label: format!("{} ⊗ {m_label}", s.label),
                    class: s.class.tensor(m),
                })
                .collect(),
        }
    }
}

/// Expressions accepted by the direct-image registry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SheafExpr {
    /// 𝒪_X(rΣ).
    SectionMultiple { r: i64 },
    /// Ideal sheaf of the singular points of fibers.
    IdealZ,
    SymOmega { r: u32 },
    SymTheta { r: u32 },
    /// `inner ⊗ π★M`.
    Twist { inner: Box<SheafExpr>, m: LineBundleClass },
}

impl SheafExpr {
    /// Text form: `O(3S)`, `I_Z`, `Sym2Omega`, `Sym2Theta`.
    pub fn parse(s: &str) -> Result<SheafExpr> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "I_Z" {
            return Ok(SheafExpr::IdealZ);
        }
        if let Some(body) = t.strip_prefix("O(").and_then(|b| b.strip_suffix("S)")) {
            let r = match body {
                "" => 1,
                "-" => -1,
                b => b.parse().map_err(|_| Error::Unsupported(format!("registry has no entry for {s}")))?,
            };
            return Ok(SheafExpr::SectionMultiple { r });
        }
        for (suffix, omega) in [("Omega", true), ("Theta", false)] {
            if let Some(r) = t.strip_prefix("Sym").and_then(|b| b.strip_suffix(suffix)) {
                let r: u32 = r
                    .parse()
                    .map_err(|_| Error::Unsupported(format!("registry has no entry for {s}")))?;
                return Ok(if omega { SheafExpr::SymOmega { r } } else { SheafExpr::SymTheta { r } });
            }
        }
        Err(Error::Unsupported(format!("registry has no entry for {s}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pushforward {
    pub r0: SheafSum,
    /// `None` when the registry does not record the first direct image.
    pub r1: Option<SheafSum>,
}

fn l_power(m: &WeierstrassModel, k: i64) -> Summand {
    let label = match k {
        0 => "O_B".to_string(),
        1 => "L".to_string(),
        k => format!("L^{k}"),
    };
    Summand {
        label,
        class: m.fundamental_power(k),
    }
}

fn sum_of(items: Vec<Summand>) -> SheafSum {
    SheafSum { summands: items }
}

pub fn pushforward(m: &WeierstrassModel, expr: &SheafExpr) -> Result<Pushforward> {
    Ok(match expr {
        SheafExpr::SectionMultiple { r } => {
            let r = *r;
            if r > 0 {
                let mut r0: Vec<Summand> = (2..=r).map(|i| l_power(m, -i)).collect();
                r0.push(l_power(m, 0));
                Pushforward {
                    r0: sum_of(r0),
                    r1: Some(SheafSum::zero()),
                }
            } else if r == 0 {
                Pushforward {
                    r0: sum_of(vec![l_power(m, 0)]),
                    r1: Some(sum_of(vec![l_power(m, -1)])),
                }
            } else {
                // relative duality with ω_{X/B} = π★𝕃
                let n = -r;
                let mut r1: Vec<Summand> = (2..=n).map(|i| l_power(m, i - 1)).collect();
                r1.push(l_power(m, -1));
                Pushforward {
                    r0: SheafSum::zero(),
                    r1: Some(sum_of(r1)),
                }
            }
        }
        SheafExpr::IdealZ => Pushforward {
            r0: sum_of(vec![l_power(m, -12)]),
            r1: Some(sum_of(vec![l_power(m, -1)])),
        },
        SheafExpr::SymOmega { r } => Pushforward {
            r0: sum_of(vec![Summand {
                label: format!("omega_B^{r}"),
                class: LineBundleClass::canonical_power(*r, m.g),
            }]),
            r1: None,
        },
        SheafExpr::SymTheta { r } => Pushforward {
            r0: sum_of(vec![l_power(m, -(*r as i64))]),
            r1: None,
        },
        SheafExpr::Twist { inner, m: twist } => {
            twist.validate(m.g)?;
            let base = pushforward(m, inner)?;
            let label = match &twist.tag {
                Tag::Trivial => "O_B".to_string(),
                _ => format!("M({})", twist.degree),
            };
            Pushforward {
                r0: base.r0.twist(twist, &label),
                r1: base.r1.map(|s| s.twist(twist, &label)),
            }
        }
    })
}
