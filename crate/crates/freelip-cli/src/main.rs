//! Audit front end: builds the objects, runs the exhaustive checks, writes
//! JSON (and optional CSV) reports.
//!
//! Exit codes separate mathematics from operations:
//!   0  all audited bounds hold
//!   1  an audited bound failed (the scientifically interesting outcome)
//!   2  usage or configuration error
//!   3  resource cap or solver failure

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::json;

use freelip::basis::BasisSystem;
use freelip::freespace::{kr_norm, kr_norm_float, Molecule};
use freelip::groups::{audit_combability, CayleyBall, Group, GroupSpec};
use freelip::harmonic::{
    audit_pointwise_convergence, audit_young, cesaro_kernel, sawtooth_samples, CircleFunction,
    FejerKernel, SphereKernelSpec,
};
use freelip::metric::{greedy_net, sample_hyperboloid, AnySpace, ScalarKind};
use freelip::quotient::{
    audit_projection, dihedral_table, symmetric_table, tower_convergence, FiniteMetricGroup,
    Subgroup,
};
use freelip::scalar::parse_rational;
use freelip::{Error, Result};

#[derive(Parser)]
#[command(name = "freelip", version, about = "Exact audits for free-space constructions over groups")]
struct Cli {
    /// Directory for report files.
    #[arg(long, global = true, default_value = "reports")]
    out: PathBuf,
    /// Worker thread cap; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for the pseudorandom parts of the bundled corpora.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Also emit CSV tables where the command produces one.
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a shortlex Cayley ball and write its enumeration summary.
    Ball {
        /// Group spec JSON.
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 4)]
        radius: u32,
    },
    /// Exhaustive prefix-divergence audit over in-ball edges.
    CombAudit {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 5)]
        radius: u32,
    },
    /// Exact free-space norm of a molecule, with certificates.
    Norm {
        #[arg(long)]
        config: PathBuf,
        /// Primal/dual gap tolerance for float-valued spaces.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Retraction and projection audit (commutation, idempotence, K+1 bound).
    BasisAudit {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 5)]
        radius: u32,
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Averaging-projection audit on a finite metric group.
    QuotientAudit {
        #[arg(long)]
        config: PathBuf,
    },
    /// Error decay along a decreasing subgroup chain.
    Tower {
        #[arg(long)]
        config: PathBuf,
    },
    /// Fejér kernel, nonexpansiveness, and convergence suite on the bundled
    /// circle corpus.
    Fejer {
        #[arg(long, default_value_t = 4096)]
        grid: usize,
        #[arg(long, default_value_t = 256)]
        degree: usize,
        /// Sup-norm target for the sawtooth at the final degree.
        #[arg(long, default_value_t = 0.02)]
        target: f64,
    },
    /// Cesàro kernel norms and minima on the sphere, degrees 0..=degree.
    SphereKernel {
        #[arg(long, default_value_t = 50)]
        degree: usize,
        #[arg(long, default_value_t = 2.0)]
        delta: f64,
    },
    /// Greedy net from pseudorandom hyperboloid samples.
    Net {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 0.3)]
        eps: f64,
        #[arg(long, default_value_t = 2.0)]
        spread: f64,
    },
}

enum Outcome {
    Pass,
    BoundViolated(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        // Ignore failure: the pool may already exist in tests.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match run(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::BoundViolated(what)) => {
            eprintln!("BOUND FAILED: {what}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::ResourceCap { .. } | Error::Convergence(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn write_report(
    out_dir: &Path,
    name: &str,
    config: serde_json::Value,
    scalar: ScalarKind,
    report: serde_json::Value,
) -> Result<PathBuf> {
    std::fs::create_dir_all(out_dir)?;
    let wrapped = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "config": config,
        "scalar": scalar,
        "report": report,
    });
    let path = out_dir.join(format!("{name}.json"));
    std::fs::write(&path, serde_json::to_string_pretty(&wrapped)? + "\n")?;
    Ok(path)
}

fn write_csv(out_dir: &Path, name: &str, header: &str, rows: &[String]) -> Result<()> {
    std::fs::create_dir_all(out_dir)?;
    let mut body = String::from(header);
    body.push('\n');
    for row in rows {
        body.push_str(row);
        body.push('\n');
    }
    std::fs::write(out_dir.join(format!("{name}.csv")), body)?;
    Ok(())
}

fn load_group_spec(path: &Path) -> Result<Group> {
    let text = std::fs::read_to_string(path)?;
    let spec: GroupSpec = serde_json::from_str(&text)?;
    Group::from_spec(&spec)
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Ball { config, radius } => cmd_ball(cli, config, *radius),
        Command::CombAudit { config, radius } => cmd_comb(cli, config, *radius),
        Command::Norm { config, tol } => cmd_norm(cli, config, *tol),
        Command::BasisAudit { config, radius, nmax } => cmd_basis(cli, config, *radius, *nmax),
        Command::QuotientAudit { config } => cmd_quotient(cli, config),
        Command::Tower { config } => cmd_tower(cli, config),
        Command::Fejer { grid, degree, target } => cmd_fejer(cli, *grid, *degree, *target),
        Command::SphereKernel { degree, delta } => cmd_sphere(cli, *degree, *delta),
        Command::Net { dim, count, eps, spread } => cmd_net(cli, *dim, *count, *eps, *spread),
    }
}

fn cmd_ball(cli: &Cli, config: &Path, radius: u32) -> Result<Outcome> {
    let group = load_group_spec(config)?;
    let ball = CayleyBall::build(group, radius)?;
    let elements: Vec<serde_json::Value> = (0..ball.len())
        .map(|i| {
            json!({
                "name": ball.element_name(i),
                "length": ball.length(i),
                "parent": if i == 0 { serde_json::Value::Null } else { json!(ball.element_name(ball.parent(i))) },
            })
        })
        .collect();
    let edges: Vec<serde_json::Value> = ball
        .edges()
        .iter()
        .map(|&(a, b)| json!([ball.element_name(a), ball.element_name(b)]))
        .collect();
    let report = json!({
        "group": ball.group().describe(),
        "radius": radius,
        "size": ball.len(),
        "elements": elements,
        "edges": edges,
    });
    let cfg = json!({"command": "ball", "config": config, "radius": radius, "seed": cli.seed});
    write_report(&cli.out, "ball", cfg, ScalarKind::Rational, report)?;
    Ok(Outcome::Pass)
}

fn cmd_comb(cli: &Cli, config: &Path, radius: u32) -> Result<Outcome> {
    let group = load_group_spec(config)?;
    let ball = CayleyBall::build(group, radius)?;
    let audit = audit_combability(&ball)?;
    let report = serde_json::to_value(&audit)?;
    let cfg = json!({"command": "comb-audit", "config": config, "radius": radius, "seed": cli.seed});
    write_report(&cli.out, "comb_audit", cfg, ScalarKind::Rational, report)?;
    println!(
        "max divergence: {} (i <= min), {} (i < max); constant K = {}",
        audit.max_divergence_min_index,
        audit.max_divergence_max_index,
        audit.combability_constant()
    );
    Ok(Outcome::Pass)
}

#[derive(Deserialize)]
struct NormConfig {
    space: SpaceSource,
    coeffs: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SpaceSource {
    Path { path: String },
    Inline(AnySpace),
}

fn cmd_norm(cli: &Cli, config: &Path, tol: f64) -> Result<Outcome> {
    let text = std::fs::read_to_string(config)?;
    let parsed: NormConfig = serde_json::from_str(&text)?;
    let space = match parsed.space {
        SpaceSource::Inline(s) => s,
        SpaceSource::Path { path } => {
            let base = config.parent().unwrap_or(Path::new("."));
            serde_json::from_str(&std::fs::read_to_string(base.join(path))?)?
        }
    };
    let cfg = json!({"command": "norm", "config": config, "tol": tol, "seed": cli.seed});
    match space {
        AnySpace::Rational(s) => {
            let mut coeffs = Vec::new();
            for (name, value) in &parsed.coeffs {
                let idx = s.index_of(name).ok_or_else(|| {
                    Error::OutOfRange(format!("unknown point {name:?} in molecule"))
                })?;
                coeffs.push((idx, parse_rational(value)?));
            }
            let m = Molecule::new(s.clone(), coeffs)?;
            let cert = kr_norm(&m)?;
            println!("{}", cert.value);
            write_report(&cli.out, "norm", cfg, ScalarKind::Rational, cert.to_json(&s))?;
        }
        AnySpace::Float(s) => {
            let mut coeffs = Vec::new();
            for (name, value) in &parsed.coeffs {
                let idx = s.index_of(name).ok_or_else(|| {
                    Error::OutOfRange(format!("unknown point {name:?} in molecule"))
                })?;
                coeffs.push((idx, parse_rational(value)?));
            }
            let m = Molecule::new(s.clone(), coeffs)?;
            let cert = kr_norm_float(&m, tol)?;
            println!("{}", cert.value);
            write_report(&cli.out, "norm", cfg, ScalarKind::Float, serde_json::to_value(&cert)?)?;
        }
    }
    Ok(Outcome::Pass)
}

fn cmd_basis(cli: &Cli, config: &Path, radius: u32, nmax: Option<usize>) -> Result<Outcome> {
    let group = load_group_spec(config)?;
    let ball = CayleyBall::build(group, radius)?;
    let system = match nmax {
        Some(n) => BasisSystem::with_n_max(ball, n)?,
        None => BasisSystem::new(ball)?,
    };
    let report = system.audit_claim();
    let ok = report.all_ok();
    let cfg = json!({
        "command": "basis-audit", "config": config, "radius": radius,
        "nmax": system.n_max(), "seed": cli.seed,
    });
    write_report(&cli.out, "basis_audit", cfg, ScalarKind::Rational, serde_json::to_value(&report)?)?;
    println!(
        "K = {}, observed basis constant = {}, all checks {}",
        report.k,
        report.basis_constant_observed,
        if ok { "pass" } else { "FAIL" }
    );
    if ok {
        Ok(Outcome::Pass)
    } else {
        Ok(Outcome::BoundViolated("basis claim audit".into()))
    }
}

#[derive(Deserialize)]
struct FiniteGroupSource {
    #[serde(default)]
    builtin: Option<String>,
    #[serde(default)]
    table: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    labels: Option<Vec<String>>,
    /// Explicit metric table, rational strings.
    #[serde(default)]
    dist: Option<Vec<Vec<String>>>,
    /// Word metric from these generator indices.
    #[serde(default)]
    word_generators: Option<Vec<usize>>,
}

fn build_finite_group(src: &FiniteGroupSource) -> Result<Arc<FiniteMetricGroup>> {
    let (table, labels) = match (&src.builtin, &src.table) {
        (Some(name), None) => builtin_table(name)?,
        (None, Some(t)) => (t.clone(), src.labels.clone()),
        _ => {
            return Err(Error::Parse(
                "specify exactly one of \"builtin\" or \"table\"".into(),
            ))
        }
    };
    let group = match (&src.dist, &src.word_generators) {
        (Some(dist), None) => {
            let mut parsed = Vec::with_capacity(dist.len());
            for row in dist {
                parsed.push(row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?);
            }
            FiniteMetricGroup::new(table, parsed, labels)?
        }
        (None, Some(gens)) => FiniteMetricGroup::from_word_metric(table, gens.clone(), labels)?,
        _ => {
            return Err(Error::Parse(
                "specify exactly one of \"dist\" or \"word_generators\"".into(),
            ))
        }
    };
    Ok(Arc::new(group))
}

fn builtin_table(name: &str) -> Result<(Vec<Vec<usize>>, Option<Vec<String>>)> {
    if let Some(n) = name.strip_prefix('z').and_then(|s| s.parse::<usize>().ok()) {
        if n >= 1 {
            return Ok((freelip::groups::cyclic_table(n), None));
        }
    }
    if let Some(n) = name.strip_prefix('d').and_then(|s| s.parse::<usize>().ok()) {
        if n >= 1 {
            let (t, l) = dihedral_table(n);
            return Ok((t, Some(l)));
        }
    }
    if let Some(n) = name.strip_prefix('s').and_then(|s| s.parse::<usize>().ok()) {
        if (1..=5).contains(&n) {
            let (t, l) = symmetric_table(n);
            return Ok((t, Some(l)));
        }
    }
    Err(Error::Parse(format!(
        "unknown builtin group {name:?}; use z<n>, d<n>, or s<n>"
    )))
}

#[derive(Deserialize)]
struct QuotientConfig {
    #[serde(flatten)]
    group: FiniteGroupSource,
    subgroup: Vec<usize>,
}

fn cmd_quotient(cli: &Cli, config: &Path) -> Result<Outcome> {
    let text = std::fs::read_to_string(config)?;
    let parsed: QuotientConfig = serde_json::from_str(&text)?;
    let group = build_finite_group(&parsed.group)?;
    let h = Subgroup::new(&group, parsed.subgroup.iter().copied())?;
    let report = audit_projection(&group, &h)?;
    let ok = report.all_ok();
    let cfg = json!({"command": "quotient-audit", "config": config, "seed": cli.seed});
    write_report(&cli.out, "quotient_audit", cfg, ScalarKind::Rational, serde_json::to_value(&report)?)?;
    println!(
        "cosets: {}, hypotheses: {:?}, audits: {} -> {}",
        report.coset_count,
        report.hypotheses,
        report.audits.len(),
        if ok { "pass" } else { "FAIL" }
    );
    if ok {
        Ok(Outcome::Pass)
    } else {
        Ok(Outcome::BoundViolated("quotient projection audit".into()))
    }
}

#[derive(Deserialize)]
struct TowerConfig {
    #[serde(flatten)]
    group: FiniteGroupSource,
    chain: Vec<Vec<usize>>,
    /// Molecule coefficients keyed by element label.
    molecule: BTreeMap<String, String>,
}

fn cmd_tower(cli: &Cli, config: &Path) -> Result<Outcome> {
    let text = std::fs::read_to_string(config)?;
    let parsed: TowerConfig = serde_json::from_str(&text)?;
    let group = build_finite_group(&parsed.group)?;
    let chain = parsed
        .chain
        .iter()
        .map(|els| Subgroup::new(&group, els.iter().copied()))
        .collect::<Result<Vec<_>>>()?;
    let mut coeffs = Vec::new();
    for (label, value) in &parsed.molecule {
        let idx = group
            .space()
            .index_of(label)
            .ok_or_else(|| Error::OutOfRange(format!("unknown element label {label:?}")))?;
        coeffs.push((idx, parse_rational(value)?));
    }
    let m = Molecule::new(group.space().clone(), coeffs)?;
    let report = tower_convergence(&group, &chain, &m)?;
    let ok = report.all_within_bound && report.final_error_zero;
    let cfg = json!({"command": "tower", "config": config, "seed": cli.seed});
    write_report(&cli.out, "tower", cfg, ScalarKind::Rational, serde_json::to_value(&report)?)?;
    for level in &report.levels {
        println!(
            "|H| = {:>3}  eps = {:>8}  error = {:>10}  bound = {:>10}  {}",
            level.subgroup_order,
            level.eps,
            level.error,
            level.bound,
            if level.within_bound { "ok" } else { "FAIL" }
        );
    }
    if ok {
        Ok(Outcome::Pass)
    } else {
        Ok(Outcome::BoundViolated("tower error bound".into()))
    }
}

fn cmd_fejer(cli: &Cli, grid: usize, degree: usize, target: f64) -> Result<Outcome> {
    let mut failures: Vec<String> = Vec::new();

    let kernel_audit = FejerKernel::new(degree).audit(grid);
    if !(kernel_audit.unit_mass_exact && kernel_audit.symmetric_exact) {
        failures.push("kernel coefficient conditions".into());
    }
    if kernel_audit.grid_min < -1e-12 {
        failures.push(format!("kernel grid minimum {}", kernel_audit.grid_min));
    }

    let sawtooth_degree = 300.min((grid - 1) / 2);
    let corpus: Vec<(&str, CircleFunction)> = vec![
        ("constant", CircleFunction::constant(1.0)),
        ("cos", CircleFunction::cosine(1)),
        (
            "sawtooth",
            CircleFunction::from_samples(&sawtooth_samples(grid), sawtooth_degree)?,
        ),
        ("random_trig20", CircleFunction::random_trig(20, cli.seed)),
    ];

    let alphas = [1.0, 0.5, 0.75];
    let mut young_rows = Vec::new();
    let mut young_reports = Vec::new();
    for (name, f) in &corpus {
        for n in [8, 64, degree] {
            for audit in audit_young(f, n, grid, &alphas) {
                if !audit.within_bound {
                    failures.push(format!("Young bound for {name} at degree {n}, alpha {}", audit.alpha));
                }
                if audit.alpha == 1.0 && audit.lip_f > 0.0 {
                    young_rows.push(format!("{name},{n},{:.12e}", audit.lip_convolved / audit.lip_f));
                }
                young_reports.push((name.to_string(), serde_json::to_value(&audit)?));
            }
        }
    }

    let mut schedule: Vec<usize> = [16usize, 64, 256]
        .into_iter()
        .filter(|&n| n < degree)
        .chain([degree])
        .collect();
    schedule.dedup();
    let mut convergence = Vec::new();
    let mut csv_rows = Vec::new();
    for (name, f, tgt) in [
        ("cos", &corpus[1].1, 1.0 / (degree as f64 + 1.0) + 1e-12),
        ("sawtooth", &corpus[2].1, target),
    ] {
        let audit = audit_pointwise_convergence(f, &schedule, grid, tgt);
        if !(audit.monotone_ok && audit.final_ok) {
            failures.push(format!("pointwise convergence for {name}: final {}", audit.final_error));
        }
        for &(n, err) in &audit.errors {
            csv_rows.push(format!("{name},{n},{err:.12e}"));
        }
        convergence.push((name.to_string(), serde_json::to_value(&audit)?));
    }

    // cos error has the closed form 1/(n+1)
    let cos_errors = audit_pointwise_convergence(&corpus[1].1, &schedule, grid, 1.0);
    for &(n, err) in &cos_errors.errors {
        if (err - 1.0 / (n as f64 + 1.0)).abs() > 1e-12 {
            failures.push(format!("cos error at degree {n} deviates from 1/(n+1): {err}"));
        }
    }

    let report = json!({
        "kernel": kernel_audit,
        "young": young_reports,
        "convergence": convergence,
        "failures": failures,
    });
    let cfg = json!({
        "command": "fejer", "grid": grid, "degree": degree,
        "target": target, "seed": cli.seed,
    });
    write_report(&cli.out, "fejer", cfg, ScalarKind::Float, report)?;
    if cli.csv {
        write_csv(&cli.out, "fejer_errors", "function,degree,sup_error", &csv_rows)?;
        write_csv(&cli.out, "fejer_lip", "function,degree,lip_ratio", &young_rows)?;
    }
    if failures.is_empty() {
        Ok(Outcome::Pass)
    } else {
        Ok(Outcome::BoundViolated(failures.join("; ")))
    }
}

fn cmd_sphere(cli: &Cli, degree: usize, delta: f64) -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut rows = Vec::new();
    let mut evals = Vec::new();
    for n in 0..=degree {
        let spec = SphereKernelSpec::new(3, delta, n)?;
        let eval = cesaro_kernel(&spec);
        if eval.min_value < -1e-10 {
            failures.push(format!("kernel minimum {} at degree {n}", eval.min_value));
        }
        if (eval.weighted_l1_norm - 1.0).abs() > 1e-8 {
            failures.push(format!("kernel norm {} at degree {n}", eval.weighted_l1_norm));
        }
        rows.push(format!("{n},{:.12e},{:.12e}", eval.weighted_l1_norm, eval.min_value));
        evals.push(json!({
            "degree": n,
            "weighted_l1_norm": eval.weighted_l1_norm,
            "min_value": eval.min_value,
            "quadrature_points": eval.quadrature_points,
        }));
    }
    let report = json!({"delta": delta, "kernels": evals, "failures": failures});
    let cfg = json!({"command": "sphere-kernel", "degree": degree, "delta": delta, "seed": cli.seed});
    write_report(&cli.out, "sphere_kernel", cfg, ScalarKind::Float, report)?;
    if cli.csv {
        write_csv(&cli.out, "sphere_kernel", "degree,weighted_l1_norm,min_value", &rows)?;
    }
    if failures.is_empty() {
        Ok(Outcome::Pass)
    } else {
        Ok(Outcome::BoundViolated(failures.join("; ")))
    }
}

fn cmd_net(cli: &Cli, dim: usize, count: usize, eps: f64, spread: f64) -> Result<Outcome> {
    if dim < 1 {
        return Err(Error::OutOfRange("net dimension must be >= 1".into()));
    }
    let samples = sample_hyperboloid(dim, count, spread, cli.seed);
    let net = greedy_net(&samples, eps)?;
    let space = AnySpace::Float(Arc::new(net));
    let violations = space.validate();
    let report = json!({
        "dimension": dim,
        "samples": count,
        "eps": eps,
        "kept": space.len(),
        "violations": violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "space": space,
    });
    let cfg = json!({
        "command": "net", "dim": dim, "count": count,
        "eps": eps, "spread": spread, "seed": cli.seed,
    });
    write_report(&cli.out, "net", cfg, ScalarKind::Float, report)?;
    if violations.is_empty() {
        Ok(Outcome::Pass)
    } else {
        Ok(Outcome::BoundViolated("net metric validation".into()))
    }
}
