//! `opdef`: reads a JSON spec file, runs one library operation and prints a
//! JSON report.
//!
//! Exit codes: 0 verdict computed (negative verdicts included), 2 parse
//! error, 3 validation error, 4 numeric-consistency error.

mod report;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use opdef::criteria::{self, GammaFactor, TruncationReport};
use opdef::dilation::{self, NaimarkDilation};
use opdef::group::Validation;
use opdef::{Error, FiniteGroup, OperatorFunction, PsdReport, ToleranceConfig};
use serde_json::{json, Value};

use report::{matrices, matrix, psd, Report};
use spec::SpecFile;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("numeric consistency error: {0}")]
    Consistency(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Consistency(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Consistency(_) | Error::Construction { .. } => CliError::Consistency(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    CheckPd,
    Dilate,
    VerifyDilation,
    Compression,
    PowerPd,
    PowerCompat,
    Gamma,
    ThreeByThree,
    Z2,
    Z3,
    Z4,
    Klein,
    HalfPower,
    ZTrunc,
    ZzTrunc,
    Brehmer,
    DoublyCommuting,
    RepVerify,
    RepStructure,
    RepPower,
    CounterexampleDet,
}

#[derive(Debug, Parser)]
#[command(name = "opdef", version, about = "Positive definite operator functions on finite groups")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// JSON spec file; optional for counterexample-det.
    spec: Option<PathBuf>,
    /// Override the PSD tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Seed for randomized sub-steps; overrides the spec file.
    #[arg(long)]
    seed: Option<u64>,
    /// Truncation level for z-trunc and zz-trunc.
    #[arg(long, default_value_t = 3)]
    level: usize,
    /// Power for power-pd, power-compat, rep-power and counterexample-det.
    #[arg(long)]
    n: Option<u32>,
    /// Strict variants of the Z2 and Z3 criteria.
    #[arg(long)]
    strict: bool,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|r| {
        let mut text = serde_json::to_string_pretty(&r).map_err(|e| CliError::Consistency(e.to_string()))?;
        text.push('\n');
        match &cli.out {
            Some(p) => std::fs::write(p, text).map_err(|e| CliError::Validation(format!("{}: {e}", p.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("opdef: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let spec = match &cli.spec {
        Some(p) => Some(spec::load(p)?),
        None if cli.command == Command::CounterexampleDet => None,
        None => return Err(CliError::Validation("a spec file is required".into())),
    };
    let cfg = match &spec {
        Some(s) => s.tolerances(cli.tol)?,
        None => {
            let mut cfg = ToleranceConfig::default();
            if let Some(t) = cli.tol {
                cfg.psd_tol = t;
            }
            cfg.validate()?;
            cfg
        }
    };
    let seed = cli.seed.or(spec.as_ref().and_then(|s| s.seed)).unwrap_or(0);
    let name = cli.command.to_possible_value().expect("no skipped variants").get_name().to_string();
    let mut r = Report::new(&name);
    match spec {
        None => counterexample_det(&mut r, cli.n.unwrap_or(3))?,
        Some(s) => dispatch(cli, &s, &cfg, seed, &mut r)?,
    }
    Ok(r)
}

fn dispatch(cli: &Cli, s: &SpecFile, cfg: &ToleranceConfig, seed: u64, r: &mut Report) -> Result<(), CliError> {
    let n = cli.n.unwrap_or(2);
    match cli.command {
        Command::CheckPd => check_pd(r, &s.function()?, cfg)?,
        Command::Dilate => dilate(r, &s.function()?, cfg)?,
        Command::VerifyDilation => verify_dilation(r, s, cfg)?,
        Command::Compression => {
            let rep = s.rep(cfg)?;
            rep.ensure_valid(cfg)?;
            let f = dilation::compression(&rep, &s.isometry()?)?;
            r.cert("values", matrices(f.values()));
            check_pd(r, &f, cfg)?;
        }
        Command::PowerPd => power_pd(r, &s.function()?, n, cfg)?,
        Command::PowerCompat => power_compat(r, &s.function()?, n, cfg)?,
        Command::Gamma => {
            let g = criteria::gamma_factor(&s.operator("A")?, &s.operator("B")?, &s.operator("C")?, cfg)?;
            positivity(r, g.positive, g.oracle_agrees);
            r.cert("gamma", gamma(&g));
        }
        Command::ThreeByThree => {
            let op = |k: &str| s.operator(k);
            let f = criteria::factor_3x3(&op("A")?, &op("B")?, &op("R")?, &op("C")?, &op("Bp")?, &op("D")?, cfg)?;
            positivity(r, f.positive, f.oracle_agrees);
            r.cert("left", gamma(&f.left))
                .cert("right", gamma(&f.right))
                .cert("failing_corner", f.failing_corner)
                .cert("gamma_r", f.gamma_r.as_ref().map(matrix))
                .cert("gamma_r_norm", f.gamma_r_norm)
                .cert("reconstruction_residual", f.reconstruction_residual)
                .cert("oracle", psd(&f.oracle));
        }
        Command::Z2 => {
            let z = criteria::z2_criterion(&s.operator("T0")?, &s.operator("T1")?, cfg, cli.strict)?;
            positivity(r, z.positive, z.oracle_agrees);
            r.cert("block", psd(&z.block))
                .cert("gamma", z.gamma.as_ref().map(gamma))
                .cert("pm", json!({"minus": psd(&z.pm.minus), "plus": psd(&z.pm.plus), "holds": z.pm.holds}))
                .cert("identity_case", z.identity_case)
                .cert(
                    "strict",
                    z.strict.map(|st| json!({"gamma_norm": st.gamma_norm, "strictly_positive": st.strictly_positive})),
                );
        }
        Command::Z3 => {
            let z = criteria::z3_criterion(&s.operator("T0")?, &s.operator("T1")?, cfg, cli.strict)?;
            positivity(r, z.positive, z.oracle_agrees);
            r.cert("left", gamma(&z.factor.left))
                .cert("right", gamma(&z.factor.right))
                .cert("gamma_r", z.factor.gamma_r.as_ref().map(matrix))
                .cert("gamma_r_norm", z.factor.gamma_r_norm)
                .cert("oracle", psd(&z.factor.oracle))
                .cert(
                    "identity_case",
                    z.identity_case.as_ref().map(|ic| {
                        json!({
                            "gamma": matrix(&ic.gamma),
                            "gamma_norm": ic.gamma_norm,
                            "reconstruction_residual": ic.reconstruction_residual,
                            "positive": ic.positive,
                            "strict_norm": ic.strict_norm,
                        })
                    }),
                );
        }
        Command::Z4 => {
            let z = criteria::z4_criterion(&s.operator("T1")?, &s.operator("T2")?, cfg)?;
            positivity(r, z.positive, z.oracle_agrees);
            r.cert("t1_contraction", z.t1_contraction)
                .cert("pm_t2", z.pm_t2)
                .cert("gamma_plus", z.gamma_plus.as_ref().map(gamma))
                .cert("gamma_minus", z.gamma_minus.as_ref().map(gamma))
                .cert(
                    "half_power_condition",
                    z.half_power_condition.as_ref().map(|h| {
                        json!({
                            "gamma": matrix(&h.gamma),
                            "gamma_norm": h.gamma_norm,
                            "self_adjointness": h.self_adjointness,
                            "t2_top_residual": h.t2_top_residual,
                            "t2_bottom_residual": h.t2_bottom_residual,
                            "t1_residual": h.t1_residual,
                            "holds": h.holds,
                        })
                    }),
                )
                .cert("oracle", psd(&z.oracle));
        }
        Command::Klein => {
            let k = criteria::klein_criterion(&s.operator("T1")?, &s.operator("T2")?, &s.operator("T3")?, cfg)?;
            positivity(r, k.positive, k.oracle_agrees);
            r.cert("t1_contraction", k.t1_contraction)
                .cert("pm_t2", k.pm_t2)
                .cert("gamma_plus", k.gamma_plus.as_ref().map(gamma))
                .cert("gamma_minus", k.gamma_minus.as_ref().map(gamma))
                .cert("oracle", psd(&k.oracle));
        }
        Command::HalfPower => {
            let h = criteria::half_power(&s.operator("T")?, cfg)?;
            r.verdict("computed")
                .cert("b", matrix(&h.b))
                .cert("d_b_star", matrix(&h.d_b_star))
                .cert("d_b", matrix(&h.d_b))
                .cert("block_residual", h.block_residual)
                .cert("identity_residual", h.identity_residual);
        }
        Command::ZTrunc => truncation(r, &criteria::z_truncation(&s.operator("P")?, cli.level, cfg)?),
        Command::ZzTrunc => {
            truncation(r, &criteria::zz_truncation(&s.operator("T1")?, &s.operator("T2")?, cli.level, cfg)?)
        }
        Command::Brehmer => {
            let b = criteria::brehmer_check(&s.operator("T1")?, &s.operator("T2")?, cfg, seed)?;
            r.verdict(if b.passes { "passes" } else { "fails" })
                .cert("operator", matrix(&b.operator))
                .cert("psd", psd(&b.psd))
                .cert("t1_norm", b.t1_norm)
                .cert("t2_norm", b.t2_norm)
                .cert("contractions", b.contractions)
                .cert("quadratic_form_residual", b.quadratic_form_residual)
                .cert("seed", seed);
        }
        Command::DoublyCommuting => {
            let d = criteria::doubly_commuting_check(&s.operator("T1")?, &s.operator("T2")?, cfg)?;
            let v = match (d.doubly_commuting, d.commuting) {
                (true, _) => "doubly-commuting",
                (false, true) => "commuting",
                _ => "not-commuting",
            };
            r.verdict(v)
                .cert("commutator", d.commutator)
                .cert("star_commutator", d.star_commutator)
                .cert("threshold", d.threshold);
        }
        Command::RepVerify => {
            let rep = s.rep(cfg)?;
            group_warnings(r, rep.group());
            let v = rep.verify(cfg);
            r.verdict(if v.valid { "valid" } else { "invalid" })
                .cert("dim", rep.dim())
                .cert("identity_defect", v.identity_defect)
                .cert("unitarity_defect", v.unitarity_defect)
                .cert("unitarity_witness", v.unitarity_witness)
                .cert("homomorphism_defect", v.homomorphism_defect)
                .cert("homomorphism_witness", v.homomorphism_witness.map(|(a, b)| json!([a, b])))
                .cert("threshold", v.threshold)
                .cert("values", matrices(rep.values()));
        }
        Command::RepStructure => {
            let rep = s.rep(cfg)?;
            group_warnings(r, rep.group());
            match rep.structure_decompose(cfg, seed) {
                Ok(sd) => {
                    let chk = sd.check(cfg);
                    let table: Vec<Value> =
                        sd.character_table().iter().map(|row| row.iter().map(|z| report::complex(*z)).collect()).collect();
                    r.verdict("decomposed")
                        .cert("k", sd.k())
                        .cert("projections", matrices(sd.projections()))
                        .cert("exponents", json!(sd.exponents()))
                        .cert("character_table", table)
                        .cert("reconstruction_residual", sd.reconstruction_residual(&rep))
                        .cert(
                            "checks",
                            json!({
                                "idempotence": chk.idempotence,
                                "hermiticity": chk.hermiticity,
                                "orthogonality": chk.orthogonality,
                                "resolution": chk.resolution,
                                "characters_multiplicative": chk.characters_multiplicative,
                                "threshold": chk.threshold,
                            }),
                        )
                        .cert("seed", seed);
                    if let Some(f) = chk.first_failure() {
                        r.warn(format!("structure check failed: {f}"));
                    }
                }
                Err(Error::NonCommuting { i, j, norm }) => {
                    r.verdict("not-commutative").cert("witness", json!([i, j])).cert("commutator_norm", norm);
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::RepPower => {
            let rep = s.rep(cfg)?;
            group_warnings(r, rep.group());
            let p = rep.power_rep_check(n, cfg)?;
            r.verdict(if p.is_representation { "representation" } else { "not-a-representation" })
                .cert("n", n)
                .cert("homomorphism_defect", p.direct.homomorphism_defect)
                .cert("homomorphism_witness", p.direct.homomorphism_witness.map(|(a, b)| json!([a, b])))
                .cert("power_subgroup", json!(p.power_subgroup))
                .cert("max_subgroup_defect", p.max_subgroup_defect)
                .cert("threshold", p.direct.threshold);
        }
        Command::CounterexampleDet => counterexample_det(r, cli.n.unwrap_or(3))?,
    }
    Ok(())
}

fn positivity(r: &mut Report, positive: bool, oracle_agrees: bool) {
    r.verdict(if positive { "positive" } else { "indefinite" }).cert("oracle_agrees", oracle_agrees);
    if !oracle_agrees {
        r.warn("criterion and Gram-block oracle differ inside the tolerance band around zero");
    }
}

fn gamma(g: &GammaFactor) -> Value {
    json!({
        "gamma": matrix(&g.gamma),
        "norm": g.norm,
        "reconstruction_residual": g.reconstruction_residual,
        "is_contraction": g.is_contraction,
        "positive": g.positive,
        "oracle_agrees": g.oracle_agrees,
    })
}

fn truncation(r: &mut Report, t: &TruncationReport) {
    r.verdict(t.label())
        .cert("level", t.level)
        .cert("psd", psd(&t.psd))
        .cert("identity_residual", t.identity_residual)
        .warn("positivity at a finite truncation level is a necessary condition only");
}

fn group_warnings(r: &mut Report, g: &FiniteGroup) {
    if let Validation::Sampled { triples } = g.validation() {
        r.warn(format!("associativity checked on {triples} sampled triples only"));
    }
}

fn psd_verdict(r: &mut Report, p: &PsdReport) {
    r.verdict(if p.is_psd() { "positive" } else { "indefinite" }).cert("psd", psd(p));
    if p.verdict == opdef::PsdVerdict::PositiveSemidefiniteAtTolerance {
        r.warn("minimum eigenvalue lies inside the tolerance band");
    }
}

fn check_pd(r: &mut Report, t: &OperatorFunction, cfg: &ToleranceConfig) -> Result<(), CliError> {
    group_warnings(r, t.group());
    r.cert("group_order", t.group().order()).cert("dim", t.dim());
    let sym = t.check_symmetry(cfg);
    if !sym.symmetric {
        r.verdict("not-symmetric")
            .cert("symmetry_violation", sym.worst_violation)
            .cert("symmetry_witness", sym.witness)
            .cert("threshold", sym.threshold);
        return Ok(());
    }
    let p = t.is_positive_definite(cfg)?;
    psd_verdict(r, &p);
    Ok(())
}

fn dilation_certs(r: &mut Report, d: &NaimarkDilation) {
    let res = &d.residuals;
    r.cert("dim_k", d.dim_k).cert("v", matrix(&d.v)).cert("u", matrices(&d.u)).cert(
        "residuals",
        json!({
            "compression": res.compression,
            "homomorphism": res.homomorphism,
            "unitarity": res.unitarity,
            "identity": res.identity,
            "isometry": res.isometry,
            "minimality_defect": res.minimality_defect,
        }),
    );
}

/// Dilation or the negative verdict explaining why none exists.
fn try_dilate(r: &mut Report, t: &OperatorFunction, cfg: &ToleranceConfig) -> Result<Option<NaimarkDilation>, CliError> {
    group_warnings(r, t.group());
    match dilation::naimark_dilate(t, cfg) {
        Ok(d) => Ok(Some(d)),
        Err(Error::Indefinite(p)) => {
            psd_verdict(r, &p);
            Ok(None)
        }
        Err(Error::NotSymmetric { element, violation }) => {
            r.verdict("not-symmetric").cert("symmetry_witness", element).cert("symmetry_violation", violation);
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

fn dilate(r: &mut Report, t: &OperatorFunction, cfg: &ToleranceConfig) -> Result<(), CliError> {
    if let Some(d) = try_dilate(r, t, cfg)? {
        r.verdict("dilated").cert("threshold", dilation::dilation_threshold(t, cfg));
        dilation_certs(r, &d);
    }
    Ok(())
}

fn verify_dilation(r: &mut Report, s: &SpecFile, cfg: &ToleranceConfig) -> Result<(), CliError> {
    let t = s.function()?;
    let d = match s.supplied_dilation()? {
        Some((v, u)) => NaimarkDilation::from_parts(&t, v, u, cfg)?,
        None => {
            r.warn("no dilation supplied; verifying the constructed one");
            match try_dilate(r, &t, cfg)? {
                Some(d) => d,
                None => return Ok(()),
            }
        }
    };
    let rep = dilation::verify_dilation(&t, &d, cfg)?;
    r.verdict(if rep.valid { "valid" } else { "invalid" })
        .cert("threshold", rep.threshold)
        .cert("compression_positive", rep.compression_positive);
    dilation_certs(r, &d);
    Ok(())
}

fn power_pd(r: &mut Report, t: &OperatorFunction, n: u32, cfg: &ToleranceConfig) -> Result<(), CliError> {
    group_warnings(r, t.group());
    let p = t.power_pd_check(n, cfg)?;
    psd_verdict(r, &p.direct);
    r.cert("n", n)
        .cert("hadamard", psd(&p.hadamard))
        .cert("route_residual", p.route_residual)
        .cert("base_positive", p.base_positive)
        .cert("determinant", p.flat.determinant().re);
    if !p.base_positive {
        r.warn("the base function is not positive definite");
    }
    Ok(())
}

fn power_compat(r: &mut Report, t: &OperatorFunction, n: u32, cfg: &ToleranceConfig) -> Result<(), CliError> {
    let Some(d) = try_dilate(r, t, cfg)? else { return Ok(()) };
    let pc = dilation::power_compatibility(t, &d, n, cfg)?;
    r.verdict(if pc.compatible { "compatible" } else { "incompatible" })
        .cert("n", n)
        .cert("dim_k", d.dim_k)
        .cert("power_positive", pc.power_positive)
        .cert("power_rep", pc.power_rep)
        .cert("precondition_met", pc.precondition_met)
        .cert("dilation_residual", pc.dilation_residual)
        .cert("function_residual", pc.function_residual)
        .cert("witness", pc.witness)
        .cert("witness_label", pc.witness.map(|w| t.group().label(w)))
        .cert("threshold", pc.threshold);
    Ok(())
}

fn counterexample_det(r: &mut Report, n: u32) -> Result<(), CliError> {
    let closed = criteria::counterexample_det(n as usize)?;
    let numeric = criteria::counterexample_numeric_det(n);
    r.verdict(if closed < 0.0 { "negative" } else { "non-negative" })
        .cert("n", n)
        .cert("closed_form", closed)
        .cert("numeric", numeric)
        .cert("difference", (closed - numeric).abs());
    Ok(())
}
