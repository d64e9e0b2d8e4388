use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use laminar::analysis::{
    classify_limit_point, dynamical_core, omega_limit, periodic_cutpoints,
    verify_recurrence_theorems, Absorption, AnalysisError, Seed, Theorem, VerifyParams,
};
use laminar::circle::Precision;
use laminar::dendrite::{build_dendrite, render_disk_svg, render_tree_svg};
use laminar::lamination::io::{parse_file, write_lamination};
use laminar::lamination::{
    check_axioms, pullback_closure, Axiom, AxiomReport, Class, Lamination, LaminationError, Violation,
};
use laminar::markov::{
    builtin, center_vs_periodic_closure, exact_periods, parse_markov_toml, uniform_samples,
    write_markov_toml, MarkovTreeMap, PeriodSet, Rat,
};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{read_input, render_report, write_artifact, Input, RunConfig};
use crate::Opts;

fn run_config(opts: &Opts, command: &str, inputs: Vec<Input>, max_period: &[u32]) -> RunConfig {
    RunConfig {
        run_id: String::new(),
        command: command.to_string(),
        inputs,
        depth: opts.depth,
        budget: opts.budget,
        precision: opts.precision,
        max_period: max_period.to_vec(),
        seeds: opts.seed.clone(),
        out: opts.out.as_ref().map(|p| p.display().to_string()),
    }
    .seal()
}

/// Writes the report to `<out>/<name>.toml`, or prints it when there is no output directory.
fn emit<T: Serialize>(opts: &Opts, config: &RunConfig, name: &str, result: &T) -> Result<()> {
    let report = render_report(config, result)?;
    match &opts.out {
        Some(out) => {
            let path = write_artifact(out, &format!("{name}.toml"), &report)?;
            println!("run {}: wrote {}", config.run_id, path.display());
        }
        None => print!("{report}"),
    }
    Ok(())
}

fn out_dir<'a>(opts: &'a Opts, command: &str) -> Result<&'a Path> {
    opts.out
        .as_deref()
        .ok_or_else(|| anyhow!("`{command}` writes files and needs --out <DIR>"))
}

fn load_lamination(opts: &Opts, path: &Path) -> Result<(Lamination, Input)> {
    let (text, input) = read_input(path)?;
    let parsed = parse_file(&text).map_err(|e| anyhow!("{}:{e}", path.display()))?;
    let lam = match parsed.stored {
        Some(lam) => lam,
        None => {
            let depth = opts.depth.unwrap_or(parsed.depth);
            pullback_closure(parsed.degree, &parsed.generators, depth)?
        }
    };
    Ok((lam, input))
}

fn load_map(name: &str) -> Result<(MarkovTreeMap, Input)> {
    let path = Path::new(name);
    if path.exists() {
        let (text, input) = read_input(path)?;
        let f = parse_markov_toml(&text).with_context(|| format!("reading map {name}"))?;
        return Ok((f, input));
    }
    let f = builtin(name).with_context(|| format!("{name} is neither a file nor a builtin map"))?;
    let digest = Sha256::digest(write_markov_toml(&f).as_bytes());
    let input = Input {
        path: format!("builtin:{name}"),
        sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
    };
    Ok((f, input))
}

fn seeds(opts: &Opts) -> Result<Vec<Seed>> {
    if opts.seed.is_empty() {
        bail!("at least one --seed is required");
    }
    opts.seed
        .iter()
        .map(|s| s.parse().map_err(|e: AnalysisError| anyhow!("seed {s}: {e}")))
        .collect()
}

fn periods_or(opts: &Opts, default: &[u32]) -> Vec<u32> {
    if opts.max_period.is_empty() {
        default.to_vec()
    } else {
        opts.max_period.clone()
    }
}

#[derive(Serialize)]
struct Validation {
    classes: usize,
    depth: u32,
    /// `generators` when the forward closure of the generators already breaks an axiom.
    audited: &'static str,
    axioms: AxiomReport,
}

/// An axiom report for a spec whose forward closure already breaks an axiom.
fn closure_failure(err: &LaminationError) -> Option<AxiomReport> {
    let (axiom, witnesses, note) = match err {
        LaminationError::Linked(a, b) => (Axiom::E2, vec![a.clone(), b.clone()], "linked classes"),
        LaminationError::Overlapping(a, b) => {
            (Axiom::E1Finite, vec![a.clone(), b.clone()], "classes share an angle")
        }
        LaminationError::InconsistentImage { class, image, stored } => (
            Axiom::D1,
            vec![class.clone(), image.clone(), stored.clone()],
            "image meets a stored class without equalling it",
        ),
        _ => return None,
    };
    let mut checked = vec![Axiom::E1Finite, Axiom::E2, Axiom::D1];
    checked.sort();
    Some(AxiomReport {
        passed: false,
        checked,
        violations: vec![Violation {
            axiom,
            witnesses,
            note: note.to_string(),
        }],
        warnings: vec!["the forward closure of the generators stopped here".to_string()],
    })
}

pub fn validate(opts: &Opts, path: &Path) -> Result<bool> {
    let (text, input) = read_input(path)?;
    let parsed = parse_file(&text).map_err(|e| anyhow!("{}:{e}", path.display()))?;
    let (classes, depth, audited, axioms) = match parsed.stored {
        Some(lam) => (lam.len(), lam.depth(), "stored classes", check_axioms(&lam)),
        None => {
            let depth = opts.depth.unwrap_or(parsed.depth);
            match pullback_closure(parsed.degree, &parsed.generators, depth) {
                Ok(lam) => (lam.len(), lam.depth(), "pullback closure", check_axioms(&lam)),
                Err(e) => match closure_failure(&e) {
                    Some(report) => (parsed.generators.len(), 0, "generators", report),
                    None => return Err(e.into()),
                },
            }
        }
    };
    let passed = axioms.passed;
    let result = Validation {
        classes,
        depth,
        audited,
        axioms,
    };
    emit(opts, &run_config(opts, "validate", vec![input], &[]), "validate", &result)?;
    Ok(passed)
}

#[derive(Serialize)]
struct Build {
    classes: usize,
    depth: u32,
    vertices: usize,
    edges: usize,
    critical: usize,
    files: Vec<String>,
}

pub fn build(opts: &Opts, spec: &Path) -> Result<bool> {
    let out = out_dir(opts, "build")?;
    let (lam, input) = load_lamination(opts, spec)?;
    let dendrite = build_dendrite(&lam)?;
    let files = [
        ("lamination.toml", write_lamination(&lam)?),
        ("dendrite.txt", dendrite.export_text()),
        ("disk.svg", render_disk_svg(&lam)),
        ("tree.svg", render_tree_svg(&dendrite)),
    ];
    for (name, contents) in &files {
        write_artifact(out, name, contents)?;
    }
    let result = Build {
        classes: lam.len(),
        depth: lam.depth(),
        vertices: dendrite.len(),
        edges: dendrite.tree().edges().len(),
        critical: lam.critical_classes().len(),
        files: files.iter().map(|(n, _)| n.to_string()).collect(),
    };
    emit(opts, &run_config(opts, "build", vec![input], &[]), "build", &result)?;
    Ok(true)
}

#[derive(Serialize)]
struct OrbitRow {
    target: Class,
    witnesses: usize,
    first_witnesses: Vec<u64>,
    at_budget: bool,
    collapsed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    limit_type: Option<String>,
}

#[derive(Serialize)]
struct SeedOrbit {
    seed: String,
    records: Vec<OrbitRow>,
}

#[derive(Serialize)]
struct Orbits {
    seeds: Vec<SeedOrbit>,
}

pub fn orbit(opts: &Opts, spec: &Path, classify: bool) -> Result<bool> {
    let (lam, input) = load_lamination(opts, spec)?;
    let params = VerifyParams {
        max_periods: Vec::new(),
        budget: opts.budget,
        precision: Precision(opts.precision),
    };
    let mut out = Vec::new();
    for seed in seeds(opts)? {
        let records = omega_limit(&lam, &seed, opts.budget, params.precision)?;
        let mut rows = Vec::with_capacity(records.len());
        for r in &records {
            let limit_type = if classify {
                Some(match classify_limit_point(&lam, &seed, r, params.resolution()) {
                    Ok(c) => c.limit_type.to_string(),
                    Err(AnalysisError::InsufficientWitnesses { .. }) => "insufficient".to_string(),
                    Err(e) => return Err(e.into()),
                })
            } else {
                r.limit_type.map(|t| t.to_string())
            };
            rows.push(OrbitRow {
                target: r.target.clone(),
                witnesses: r.witnesses.len(),
                first_witnesses: r.witnesses.iter().take(8).copied().collect(),
                at_budget: r.at_budget,
                collapsed: r.collapsed,
                limit_type,
            });
        }
        out.push(SeedOrbit {
            seed: seed.to_string(),
            records: rows,
        });
    }
    let command = if classify { "classify" } else { "orbit" };
    emit(opts, &run_config(opts, command, vec![input], &[]), command, &Orbits { seeds: out })?;
    Ok(true)
}

#[derive(Serialize)]
struct StoredPeriodic {
    class: Class,
    period: usize,
}

#[derive(Serialize)]
struct CutpointRow {
    max_period: u32,
    stored: Vec<StoredPeriodic>,
    candidates_beyond_depth: Vec<String>,
}

#[derive(Serialize)]
struct Cutpoints {
    bounds: Vec<CutpointRow>,
}

pub fn cutpoints(opts: &Opts, spec: &Path) -> Result<bool> {
    let (lam, input) = load_lamination(opts, spec)?;
    let bounds = periods_or(opts, &[4]);
    let mut rows = Vec::new();
    for &p in &bounds {
        let cut = periodic_cutpoints(&lam, p)?;
        let stored = cut
            .stored
            .iter()
            .map(|&id| {
                let class = lam.class(id).clone();
                let period = class.orbit_portrait(lam.degree())?.period;
                Ok(StoredPeriodic { class, period })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(CutpointRow {
            max_period: p,
            stored,
            candidates_beyond_depth: cut.candidates_beyond_depth.iter().map(|a| a.to_string()).collect(),
        });
    }
    let config = run_config(opts, "periodic-cutpoints", vec![input], &bounds);
    emit(opts, &config, "periodic-cutpoints", &Cutpoints { bounds: rows })?;
    Ok(true)
}

pub fn recurrence(opts: &Opts, spec: &Path, tag: &str) -> Result<bool> {
    let theorem: Theorem = tag.parse().map_err(|e: String| anyhow!(e))?;
    let (lam, input) = load_lamination(opts, spec)?;
    let params = VerifyParams {
        max_periods: periods_or(opts, &[4, 8, 12]),
        budget: opts.budget,
        precision: Precision(opts.precision),
    };
    let report = verify_recurrence_theorems(&lam, theorem, &seeds(opts)?, &params, Default::default())?;
    let name = format!("verify-{tag}");
    emit(opts, &run_config(opts, &name, vec![input], &params.max_periods), &name, &report)?;
    Ok(report.exact_failures == 0)
}

#[derive(Serialize)]
struct Core {
    stable: bool,
    never_absorbed: usize,
    frontier_orbits: usize,
    vertices: Vec<Class>,
    critical: Vec<Class>,
    dropped: Vec<Class>,
    frontier: Vec<Class>,
    absorption: Vec<Absorption>,
}

pub fn core(opts: &Opts, spec: &Path) -> Result<bool> {
    let (lam, input) = load_lamination(opts, spec)?;
    let dendrite = build_dendrite(&lam)?;
    let core = dynamical_core(&dendrite);
    let classes = |ids: &[usize]| ids.iter().map(|&v| dendrite.class(v).clone()).collect();
    let never = core.failures().len();
    let result = Core {
        stable: core.stable,
        never_absorbed: never,
        frontier_orbits: core
            .absorption
            .iter()
            .filter(|a| a.status == laminar::analysis::AbsorptionStatus::Frontier)
            .count(),
        vertices: classes(&core.vertices),
        critical: classes(&core.critical),
        dropped: classes(&core.dropped),
        frontier: classes(&core.frontier),
        absorption: core.absorption.clone(),
    };
    emit(opts, &run_config(opts, "verify-core", vec![input], &[]), "verify-core", &result)?;
    Ok(core.stable && never == 0)
}

#[derive(Serialize)]
struct Sharkovskiy {
    interval: bool,
    down_set: bool,
    periods: PeriodSet,
}

pub fn sharkovskiy(opts: &Opts, map: &str) -> Result<bool> {
    let (f, input) = load_map(map)?;
    let bound = *periods_or(opts, &[10]).iter().max().expect("nonempty");
    let periods = exact_periods(&f, bound)?;
    let result = Sharkovskiy {
        interval: f.is_interval(),
        down_set: periods.is_down_set(),
        periods,
    };
    let config = run_config(opts, "verify-sharkovskiy", vec![input], &[bound]);
    emit(opts, &config, "verify-sharkovskiy", &result)?;
    // the down-set property is an interval theorem; tree maps only report theirs
    Ok(!result.interval || result.down_set)
}

#[derive(Serialize)]
struct CenterRowOut {
    max_period: u32,
    max_distance: String,
    approx: f64,
}

#[derive(Serialize)]
struct Center {
    samples: usize,
    closed_orbits: usize,
    cluster_points: usize,
    eps: String,
    within_eps: bool,
    monotone: bool,
    rows: Vec<CenterRowOut>,
}

pub fn center(opts: &Opts, map: &str, samples: usize, eps: &str) -> Result<bool> {
    let (f, input) = load_map(map)?;
    let eps: Rat = eps.parse().map_err(|_| anyhow!("--eps {eps} is not a rational number"))?;
    let periods = periods_or(opts, &[4, 8, 12]);
    let xs = uniform_samples(&f, samples)?;
    let budget = usize::try_from(opts.budget).context("budget too large")?;
    let r = center_vs_periodic_closure(&f, &xs, &eps, &periods, budget, Default::default())?;
    let result = Center {
        samples: r.samples,
        closed_orbits: r.closed_orbits,
        cluster_points: r.cluster_points,
        eps: r.eps.to_string(),
        within_eps: r.within_eps,
        monotone: r.monotone,
        rows: r
            .rows
            .iter()
            .map(|row| CenterRowOut {
                max_period: row.max_period,
                max_distance: row.max_distance.to_string(),
                approx: row.approx,
            })
            .collect(),
    };
    emit(opts, &run_config(opts, "verify-center", vec![input], &periods), "verify-center", &result)?;
    // closeness to eps is empirical at a finite budget; only monotonicity is exact
    Ok(r.monotone)
}

#[derive(Serialize)]
struct Render {
    files: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tree_error: Option<String>,
}

pub fn render(opts: &Opts, file: &Path) -> Result<bool> {
    let out = out_dir(opts, "render")?;
    let (lam, input) = load_lamination(opts, file)?;
    write_artifact(out, "disk.svg", &render_disk_svg(&lam))?;
    let mut files = vec!["disk.svg".to_string()];
    let tree_error = match build_dendrite(&lam) {
        Ok(d) => {
            write_artifact(out, "tree.svg", &render_tree_svg(&d))?;
            files.push("tree.svg".to_string());
            None
        }
        Err(e) => Some(e.to_string()),
    };
    emit(opts, &run_config(opts, "render", vec![input], &[]), "render", &Render { files, tree_error })?;
    Ok(true)
}
