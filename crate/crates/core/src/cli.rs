//! Command-line front end. Every report is a JSON object carrying
//! `"schema": "1"`, the command name, the seed and the trial count.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::basecurve::{h0, LineBundleClass, Policy};
use crate::error::{Error, Result};
use crate::exactpoly::parse_poly;
use crate::fibercalc::{is_quoted_cell, rank_pushforward_end_twists, FiberBundleDesc};
use crate::higgs::{
    anchors, classify, conjecture_verdict, discriminant_numbers, hitchin_dim, hitchin_dim_closed_form, sweep_row,
    BundleNumerics, ConjectureCase, HiggsInputs, Reason, SpectralCerts,
};
use crate::spectral::{
    base_point_free, connectedness_certificate, forced_vanishing_report, integrality_test, reducedness_test,
    regularity_inference, smoothness_test, spectral_genus, SpectralData, Verdict,
};
use crate::symkernel::{
    annihilation_residues, delta_matrix, is_unit_multiple, kernel_generator, kernel_solver, torsion_free_witness,
};
use crate::weierstrass::{build_model, BaseKind, ModelInput, SheafExpr, WeierstrassModel};

pub const SCHEMA: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "spectra", version, about = "Spectral covers and Higgs fields on Weierstrass fibrations")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Seed for every sampler; falls back to SPECTRA_SEED, then 0.
    #[arg(long, global = true, env = "SPECTRA_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 16)]
    pub trials: u32,
    /// Treat generic line bundles as being in general position.
    #[arg(long, global = true, default_value_t = true, action = clap::ArgAction::Set)]
    pub general_position: bool,
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    pub output: Output,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a Weierstrass model and list its singular fibers.
    AnalyzeFibration {
        #[arg(long)]
        input: PathBuf,
        /// Downgrade cuspidal fibers from an error to a warning.
        #[arg(long)]
        allow_cusps: bool,
    },
    /// Certificates for a spectral curve.
    SpectralCheck {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        spectral: PathBuf,
        /// Sample points for the base-point sampler.
        #[arg(long, default_value_t = 100)]
        samples: u32,
    },
    /// Classify the Higgs fields of a described bundle.
    HiggsClassify {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long)]
        spectral: Option<PathBuf>,
        /// `atiyah:R`, `distinct:R`, `split:L`, or the JSON descriptor.
        #[arg(long)]
        fiber_type: Option<String>,
        #[arg(long, default_value_t = 100)]
        samples: u32,
    },
    HitchinDim {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        r: u32,
    },
    /// Check the symmetric-power kernel and torsion-freeness for a coprime pair.
    SymkernelVerify {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 20)]
        samples: u32,
    },
    /// Verdict table over abstract models.
    Sweep {
        /// Ranges as `a..b` (inclusive) or a single value.
        #[arg(long)]
        r: String,
        #[arg(long)]
        d: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        e: String,
    },
}

/// Bundle file: numerics plus optional asserted properties of the spectral curve.
#[derive(Debug, Deserialize)]
struct BundleFile {
    #[serde(flatten)]
    numerics: BundleNumerics,
    #[serde(default = "unknown")]
    reduced: Verdict,
    #[serde(default = "unknown")]
    integral: Verdict,
    #[serde(default = "unknown")]
    regular: Verdict,
}

fn unknown() -> Verdict {
    Verdict::Unknown
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    Ok(serde_json::from_str(&text)?)
}

fn load_model(path: &Path, allow_cusps: bool) -> Result<WeierstrassModel> {
    build_model(&read_json::<ModelInput>(path)?, allow_cusps)
}

pub fn parse_fiber_type(s: &str) -> Result<FiberBundleDesc> {
    if s.trim_start().starts_with('{') {
        return Ok(serde_json::from_str(s)?);
    }
    let (kind, n) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("fiber type {s:?}: expected kind:N")))?;
    let bad = |_| Error::Parse(format!("fiber type {s:?}: bad number"));
    let desc = match kind {
        "atiyah" => FiberBundleDesc::Atiyah { r: n.parse().map_err(bad)? },
        "distinct" => FiberBundleDesc::DistinctLineBundles { r: n.parse().map_err(bad)? },
        "split" => FiberBundleDesc::SplitPair { ell_deg: n.parse().map_err(bad)? },
        _ => return Err(Error::Parse(format!("unknown fiber type {kind:?}"))),
    };
    desc.validate()?;
    Ok(desc)
}

/// `a..b` inclusive, or a single value; `b < a` is empty.
pub fn parse_range(s: &str) -> Result<Vec<i64>> {
    let bad = |_| Error::Parse(format!("bad range {s:?}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            let (a, b): (i64, i64) = (a.trim().parse().map_err(bad)?, b.trim().parse().map_err(bad)?);
            Ok((a..=b).collect())
        }
        None => Ok(vec![s.trim().parse().map_err(bad)?]),
    }
}

fn header(command: &str, cfg: &RunConfig) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "seed": cfg.seed,
        "trials": cfg.trials,
        "general_position": cfg.general_position,
    })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Some(b), Value::Object(e)) = (base.as_object_mut(), extra) {
        b.extend(e);
    }
    base
}

fn policy(cfg: &RunConfig) -> Policy {
    Policy {
        general_position: cfg.general_position,
    }
}

pub fn run(cli: &Cli) -> Result<Value> {
    let cfg = &cli.config;
    match &cli.command {
        Command::AnalyzeFibration { input, allow_cusps } => {
            let m = load_model(input, *allow_cusps)?;
            Ok(merge(header("analyze-fibration", cfg), analyze(&m)?))
        }
        Command::SpectralCheck { model, spectral, samples } => {
            let m = load_model(model, false)?;
            let sd: SpectralData = read_json(spectral)?;
            Ok(merge(header("spectral-check", cfg), spectral_report(&m, &sd, cfg, *samples)?))
        }
        Command::HiggsClassify {
            model,
            bundle,
            spectral,
            fiber_type,
            samples,
        } => {
            let m = load_model(model, false)?;
            let b: BundleFile = read_json(bundle)?;
            let sd: Option<SpectralData> = spectral.as_deref().map(read_json).transpose()?;
            let ft = fiber_type.as_deref().map(parse_fiber_type).transpose()?;
            Ok(merge(header("higgs-classify", cfg), higgs_report(&m, &b, sd.as_ref(), ft, cfg, *samples)?))
        }
        Command::HitchinDim { g, r } => {
            let mut terms = Vec::new();
            for i in 1..=*r {
                let l = LineBundleClass::canonical_power(i, *g);
                terms.push(json!({"i": i, "degree": l.degree, "h0": h0(&l, *g, policy(cfg))?.value()}));
            }
            Ok(merge(
                header("hitchin-dim", cfg),
                json!({
                    "g": g,
                    "r": r,
                    "dim": hitchin_dim(*g, *r)?,
                    "closed_form": if *r >= 1 { Some(hitchin_dim_closed_form(*g, *r)) } else { None },
                    "terms": terms,
                }),
            ))
        }
        Command::SymkernelVerify { f, g, r, samples } => {
            let (f, g) = (parse_poly(f)?, parse_poly(g)?);
            Ok(merge(header("symkernel-verify", cfg), symkernel_report(&f, &g, *r, *samples, cfg.seed)?))
        }
        Command::Sweep { r, d, g, e } => {
            let (rs, ds, gs, es) = (parse_range(r)?, parse_range(d)?, parse_range(g)?, parse_range(e)?);
            let mut rows = Vec::new();
            for &g in &gs {
                for &d in &ds {
                    let m = build_model(
                        &ModelInput {
                            g: u32::try_from(g).map_err(|_| Error::domain("g must be nonnegative"))?,
                            d,
                            base_kind: BaseKind::Abstract,
                            a4: None,
                            a6: None,
                        },
                        false,
                    )?;
                    for &r in &rs {
                        let r = u32::try_from(r)
                            .ok()
                            .filter(|r| *r >= 2)
                            .ok_or_else(|| Error::domain("sweep needs r >= 2"))?;
                        for &e in &es {
                            rows.push(serde_json::to_value(sweep_row(&m, r, e)?)?);
                        }
                    }
                }
            }
            Ok(merge(header("sweep", cfg), json!({"rows": rows})))
        }
    }
}

fn analyze(m: &WeierstrassModel) -> Result<Value> {
    let fibers = m.singular_fibers();
    Ok(json!({
        "valid": true,
        "d": m.d,
        "g": m.g,
        "base_kind": m.base_kind,
        "delta_degree": m.delta_degree(),
        "delta": m.delta.as_ref().map(|p| p.to_string()),
        "singular_fibers": fibers,
        "singular_length": m.singular_length(),
        "canonical_degree": m.canonical_bundle().degree,
        "ks_degree": m.kodaira_spencer_degree(),
        "validation": m.report,
        "warnings": m.warnings,
    }))
}

fn spectral_report(m: &WeierstrassModel, sd: &SpectralData, cfg: &RunConfig, samples: u32) -> Result<Value> {
    sd.validate(m)?;
    let (r, d, e, g) = (sd.r, m.d, sd.e, m.g);
    let reduced = reducedness_test(m, sd, cfg.trials, cfg.seed)?;
    let smooth = smoothness_test(m, sd)?;
    let connected = connectedness_certificate(r, d, e, g);
    let integral = integrality_test(m, sd, Some(&smooth), Some(&connected))?;
    let bpf = base_point_free(m, r, e, samples, cfg.seed)?;
    let expr = SheafExpr::Twist {
        inner: Box::new(SheafExpr::SectionMultiple { r: r as i64 }),
        m: sd.mu(),
    };
    let h0_system = m.pushforward(&expr)?.r0.h0(g, policy(cfg))?;
    Ok(json!({
        "r": r,
        "e": e,
        "d": d,
        "g": g,
        "forced_vanishing": forced_vanishing_report(r, d, e),
        "h0_linear_system": h0_system,
        "spectral_genus_if_smooth": spectral_genus(r, d, e, g),
        "regular": regularity_inference(smooth.verdict),
        "certificates": [reduced, integral, smooth, connected, bpf],
    }))
}

fn higgs_report(
    m: &WeierstrassModel,
    b: &BundleFile,
    sd: Option<&SpectralData>,
    fiber_type: Option<FiberBundleDesc>,
    cfg: &RunConfig,
    samples: u32,
) -> Result<Value> {
    let num = &b.numerics;
    num.validate()?;
    let (mut reduced, mut integral, mut regular) = (b.reduced, b.integral, b.regular);
    let mut certs = SpectralCerts::default();
    let mut cert_values = Vec::new();
    if let Some(sd) = sd {
        if sd.r != num.r || sd.e != num.c2 {
            return Err(Error::domain(format!(
                "spectral data (r = {}, e = {}) does not match the bundle (r = {}, c2 = {})",
                sd.r, sd.e, num.r, num.c2
            )));
        }
        let red = reducedness_test(m, sd, cfg.trials, cfg.seed)?;
        let smooth = smoothness_test(m, sd)?;
        let conn = connectedness_certificate(sd.r, m.d, sd.e, m.g);
        let integ = integrality_test(m, sd, Some(&smooth), Some(&conn))?;
        // computed certificates override assertions only when decisive
        for (slot, c) in [(&mut reduced, &red), (&mut integral, &integ)] {
            if c.verdict != Verdict::Unknown {
                *slot = c.verdict;
            }
        }
        if smooth.verdict == Verdict::Yes {
            reduced = Verdict::Yes;
            regular = regularity_inference(Verdict::Yes);
        }
        certs.smooth = Some(smooth.clone());
        cert_values = vec![red, integ, smooth, conn];
    }
    let inputs = HiggsInputs {
        d: m.d,
        g: m.g,
        reduced,
        integral,
        regular,
        fiber_type,
    };
    let (space, mut reasons) = classify(num, &inputs)?;
    let conjecture = if num.vertical_det && num.r >= 2 {
        let bpf = base_point_free(m, num.r, num.c2, samples, cfg.seed)?;
        cert_values.push(bpf.clone());
        certs.base_point_free = Some(bpf);
        let v = conjecture_verdict(m, num, &certs)?;
        reasons.extend(v.reasons);
        v.conjecture_case
    } else {
        let why = if num.vertical_det { "rank 1" } else { "determinant is not vertical" };
        reasons.push(Reason {
            rule: format!("conjecture chain not applicable: {why}"),
            anchor: anchors::END_REDUCTION.into(),
            inputs: json!({"r": num.r, "vertical_det": num.vertical_det}),
        });
        ConjectureCase::NotApplicable
    };
    let (delta, bogomolov) = discriminant_numbers(num);
    let fiber = fiber_type
        .map(|ft| -> Result<Value> {
            let (v, f) = rank_pushforward_end_twists(&ft)?;
            Ok(json!({
                "descriptor": ft,
                "vertical_rank": v,
                "full_rank": f,
                "provenance": if is_quoted_cell(&ft) { "quoted" } else { "derived" },
            }))
        })
        .transpose()?;
    Ok(json!({
        "higgs_space": space,
        "conjecture_case": conjecture,
        "reasons": reasons,
        "discriminant": delta,
        "bogomolov": bogomolov,
        "fiber_ranks": fiber,
        "certificates": cert_values,
    }))
}

fn symkernel_report(f: &crate::exactpoly::Poly, g: &crate::exactpoly::Poly, r: u32, samples: u32, seed: u64) -> Result<Value> {
    let p = delta_matrix(f, g, r)?;
    let omega = kernel_generator(&p);
    if !annihilation_residues(&p, &omega).iter().all(|x| x.is_zero()) {
        return Err(Error::Falsification("closed-form kernel vector does not annihilate delta".into()));
    }
    let solved = kernel_solver(&p)?;
    if !is_unit_multiple(&solved, &omega) {
        return Err(Error::Falsification(format!(
            "solver kernel {:?} is not a unit multiple of the closed form",
            solved.iter().map(|x| x.to_string()).collect::<Vec<_>>()
        )));
    }
    let tf = torsion_free_witness(&p, samples, seed)?;
    let strs = |v: &[crate::exactpoly::Poly]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    Ok(json!({
        "f": f.to_string(),
        "g": g.to_string(),
        "r": r,
        "samples": samples,
        "delta": p.delta.iter().map(|row| strs(row)).collect::<Vec<_>>(),
        "omega": strs(&omega),
        "solver": strs(&solved),
        "solver_matches": true,
        "torsion_free": {
            "passed": tf.passed,
            "samples": tf.samples,
            "off_kernel_checked": tf.off_kernel_checked,
            "cases": tf.cases,
        },
    }))
}

/// Human-readable rendering of a report.
pub fn render_text(report: &Value) -> String {
    let mut out = String::new();
    if let Some(rows) = report.get("rows").and_then(Value::as_array) {
        out.push_str(&format!("{:>3} {:>3} {:>3} {:>4}  {:<8} {:<8} {:<6} {}\n", "r", "d", "g", "e", "bpf", "scalar", "lambda", "conjecture"));
        for row in rows {
            let s = |k: &str| row[k].as_str().map(str::to_owned).unwrap_or_else(|| row[k].to_string());
            out.push_str(&format!(
                "{:>3} {:>3} {:>3} {:>4}  {:<8} {:<8} {:<6} {}\n",
                s("r"),
                s("d"),
                s("g"),
                s("e"),
                s("base_point_free"),
                s("scalar_only"),
                if row["lambda_all_negative"] == true { "neg" } else { "-" },
                s("conjecture_case"),
            ));
        }
        return out;
    }
    if let Some(obj) = report.as_object() {
        for (k, v) in obj {
            match v {
                Value::String(s) => out.push_str(&format!("{k}: {s}\n")),
                Value::Array(items) => {
                    out.push_str(&format!("{k}:\n"));
                    for item in items {
                        out.push_str(&format!("  - {item}\n"));
                    }
                }
                other => out.push_str(&format!("{k}: {other}\n")),
            }
        }
    }
    out
}

/// What a run prints and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the front end on `args` (including the program name).
pub fn main_with_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            return Outcome {
                code: 1,
                stdout: String::new(),
                stderr: e.to_string(),
            }
        }
        Err(e) => {
            return Outcome {
                code: 0,
                stdout: e.to_string(),
                stderr: String::new(),
            }
        }
    };
    match run(&cli) {
        Ok(report) => {
            let text = match cli.config.output {
                Output::Json => serde_json::to_string_pretty(&report).expect("reports serialize"),
                Output::Text => render_text(&report),
            };
            Outcome {
                code: 0,
                stdout: text,
                stderr: String::new(),
            }
        }
        Err(e) => {
            let report = json!({"schema": SCHEMA, "error": {"kind": e.kind(), "message": e.to_string()}});
            Outcome {
                code: e.exit_code(),
                stdout: serde_json::to_string_pretty(&report).expect("reports serialize"),
                stderr: format!("error: {e}\n"),
            }
        }
    }
}
