//! Batch front-end for the nlft2d library: config-driven commands that run
//! transforms, evolutions, and audits, and emit machine-readable artifacts
//! (NLF2 fields, JSON reports, CSV plot data).
//!
//! Exit codes are a stable contract: 0 success, 2 config error, 3 excessive
//! scattering holes, 4 input file missing or corrupt.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use nlft2d::evolution::{
    evolve_direct, evolve_ist, CrossValidationReport, EvolutionConfig, Scheme,
};
use nlft2d::harmonic::{
    audit_bilinear_besov, audit_fractional_bound, audit_pdo_bound, SymbolField,
};
use nlft2d::io::{read_kfield, read_zfield, write_kfield, write_zfield};
use nlft2d::potentials::{random_band_limited, shape, Shape, ENSEMBLE_SEED};
use nlft2d::report::InequalityReport;
use nlft2d::scattering::{forward, inverse, pointwise_bound_report, ScatteringData};
use nlft2d::solver::SolverConfig;
use nlft2d::{ComplexField, KLattice, Lattice};
use rand::SeedableRng;

const EXIT_CONFIG: u8 = 2;
const EXIT_HOLES: u8 = 3;
const EXIT_INPUT: u8 = 4;

#[derive(Parser)]
#[command(name = "nlft2d", about = "2D nonlinear Fourier transform batch tool")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Forward scattering transform of a potential.
    Forward(RunArgs),
    /// Inverse scattering transform of a stored scattering file.
    Inverse(RunArgs),
    /// Time evolution (IST, direct split-step, or both with cross-validation).
    Evolve(RunArgs),
    /// Numerical audits of the operator estimates.
    Audit(RunArgs),
    /// Pointwise comparison of two NLF2 field files.
    Compare(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Dotted-path overrides, e.g. --set grid.n=128 --set potential.amplitude=2.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Global thread cap (this build computes sequentially; values >= 1 accepted).
    #[arg(long)]
    threads: Option<usize>,
}

/// A failure carrying its contractual exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: msg.into(),
        }
    }

    fn input(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: msg.into(),
        }
    }
}

impl From<nlft2d::Error> for Failure {
    fn from(e: nlft2d::Error) -> Self {
        let code = match &e {
            nlft2d::Error::ExcessiveHoles { .. } => EXIT_HOLES,
            nlft2d::Error::Io(_) | nlft2d::Error::Format(_) => EXIT_INPUT,
            _ => EXIT_CONFIG,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

// ---------------------------------------------------------------------------
// Run configuration (JSON; unknown keys rejected).

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    /// Optional echo of the intended command; checked against the CLI verb.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    command: Option<String>,
    #[serde(default)]
    grid: Option<GridCfg>,
    #[serde(default)]
    kgrid: Option<KGridCfg>,
    #[serde(default)]
    potential: Option<PotentialCfg>,
    #[serde(default)]
    solver: SolverCfg,
    #[serde(default)]
    evolution: Option<EvolutionCfg>,
    #[serde(default)]
    audit: Option<AuditCfg>,
    #[serde(default)]
    compare: Option<CompareCfg>,
    /// Input field file for `inverse`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    input: Option<PathBuf>,
    output_dir: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridCfg {
    n: usize,
    h: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KGridCfg {
    m: usize,
    dk: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum PotentialCfg {
    Gaussian {
        #[serde(default = "default_amplitude")]
        amplitude: f64,
    },
    TwoBump {
        #[serde(default = "default_amplitude")]
        amplitude: f64,
    },
    Ring {
        #[serde(default = "default_amplitude")]
        amplitude: f64,
    },
    File {
        path: PathBuf,
    },
}

fn default_amplitude() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct SolverCfg {
    tol: f64,
    max_iter: usize,
    restart: usize,
    method: nlft2d::solver::Method,
}

impl Default for SolverCfg {
    fn default() -> Self {
        let d = SolverConfig::default();
        Self {
            tol: d.tol,
            max_iter: d.max_iter,
            restart: d.restart,
            method: d.method,
        }
    }
}

impl SolverCfg {
    fn to_config(self) -> SolverConfig {
        SolverConfig {
            method: self.method,
            tol: self.tol,
            max_iter: self.max_iter,
            restart: self.restart,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EvolutionCfg {
    t: f64,
    dt: f64,
    #[serde(default)]
    times: Vec<f64>,
    #[serde(default = "default_mode")]
    mode: EvolveMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum EvolveMode {
    Ist,
    Direct,
    Both,
}

fn default_mode() -> EvolveMode {
    EvolveMode::Both
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AuditCfg {
    which: AuditKind,
    #[serde(default = "default_alpha")]
    alpha: f64,
    #[serde(default = "default_alpha")]
    lambda: f64,
    #[serde(default = "default_r")]
    r: f64,
    #[serde(default = "default_p")]
    p: f64,
    #[serde(default = "default_trials")]
    trials: usize,
    #[serde(default = "default_cutoff")]
    cutoff: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum AuditKind {
    Frac,
    Pdo,
    Besov,
    Pointwise,
}

fn default_alpha() -> f64 {
    1.0
}
fn default_r() -> f64 {
    0.5
}
fn default_p() -> f64 {
    3.0
}
fn default_trials() -> usize {
    5
}
fn default_cutoff() -> f64 {
    2.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CompareCfg {
    left: PathBuf,
    right: PathBuf,
}

/// JSON sidecar accompanying a scattering NLF2 file.
#[derive(Debug, Serialize, Deserialize)]
struct Sidecar {
    source_norm: f64,
    l2_norm: f64,
    holes: Vec<(usize, usize)>,
    config: Value,
}

// ---------------------------------------------------------------------------
// Config loading.

fn apply_override(doc: &mut Value, spec: &str) -> Result<(), Failure> {
    let (path, raw) = spec
        .split_once('=')
        .ok_or_else(|| Failure::config(format!("--set needs key=value, got {spec:?}")))?;
    // Bare words become strings; anything JSON-parsable is taken literally.
    let parsed: Value =
        serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut cur = doc;
    let parts: Vec<&str> = path.split('.').collect();
    for part in &parts[..parts.len() - 1] {
        cur = cur
            .as_object_mut()
            .ok_or_else(|| Failure::config(format!("--set path {path} crosses a non-object")))?
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(Default::default()));
    }
    cur.as_object_mut()
        .ok_or_else(|| Failure::config(format!("--set path {path} crosses a non-object")))?
        .insert(parts[parts.len() - 1].to_string(), parsed);
    Ok(())
}

fn load_config(args: &RunArgs) -> Result<(RunConfig, Value), Failure> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| Failure::config(format!("cannot read {}: {e}", args.config.display())))?;
    let mut doc: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::config(format!("bad JSON in {}: {e}", args.config.display())))?;
    for spec in &args.set {
        apply_override(&mut doc, spec)?;
    }
    let cfg: RunConfig = serde_json::from_value(doc.clone())
        .map_err(|e| Failure::config(format!("invalid config: {e}")))?;
    if let Some(threads) = args.threads {
        if threads == 0 {
            return Err(Failure::config("--threads must be >= 1"));
        }
        std::env::set_var("RAYON_NUM_THREADS", threads.to_string());
    }
    Ok((cfg, doc))
}

fn check_command(cfg: &RunConfig, verb: &str) -> Result<(), Failure> {
    if let Some(cmd) = &cfg.command {
        if cmd != verb {
            return Err(Failure::config(format!(
                "config says command {cmd:?} but the {verb} subcommand was invoked"
            )));
        }
    }
    Ok(())
}

fn grid(cfg: &RunConfig) -> Result<Lattice, Failure> {
    let g = cfg
        .grid
        .ok_or_else(|| Failure::config("missing grid section"))?;
    Ok(Lattice::new(g.n, g.h)?)
}

fn kgrid(cfg: &RunConfig) -> Result<KLattice, Failure> {
    let g = cfg
        .kgrid
        .ok_or_else(|| Failure::config("missing kgrid section"))?;
    Ok(KLattice::new(g.m, g.dk)?)
}

/// Realize the configured potential; file-based potentials fix the lattice
/// themselves (a grid section, if present, must agree).
fn potential(cfg: &RunConfig) -> Result<ComplexField, Failure> {
    let pot = cfg
        .potential
        .as_ref()
        .ok_or_else(|| Failure::config("missing potential section"))?;
    match pot {
        PotentialCfg::Gaussian { amplitude } => Ok(shape(grid(cfg)?, Shape::Gaussian, *amplitude)),
        PotentialCfg::TwoBump { amplitude } => Ok(shape(grid(cfg)?, Shape::TwoBump, *amplitude)),
        PotentialCfg::Ring { amplitude } => Ok(shape(grid(cfg)?, Shape::Ring, *amplitude)),
        PotentialCfg::File { path } => {
            let q = read_zfield(path)?;
            if let Some(g) = cfg.grid {
                if q.lattice().n() != g.n || q.lattice().h() != g.h {
                    return Err(Failure::config(format!(
                        "grid section ({}, {}) disagrees with {} ({}, {})",
                        g.n,
                        g.h,
                        path.display(),
                        q.lattice().n(),
                        q.lattice().h()
                    )));
                }
            }
            Ok(q)
        }
    }
}

// ---------------------------------------------------------------------------
// Artifact writers.

fn ensure_dir(dir: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Failure::config(format!("cannot create {}: {e}", dir.display())))
}

/// Deterministic JSON artifact: pretty-printed with sorted maps (serde_json's
/// default), trailing newline.
fn write_json(path: &Path, value: &impl Serialize) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::config(format!("serialization failed: {e}")))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Failure {
        code: EXIT_INPUT,
        message: format!("cannot write {}: {e}", path.display()),
    })
}

/// Magnitude heatmap CSV: one row per node, columns c1, c2, abs.
fn write_heatmap(path: &Path, points: &[(f64, f64, f64)]) -> Result<(), Failure> {
    use std::io::Write;
    let f = std::fs::File::create(path)
        .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
    let mut w = std::io::BufWriter::new(f);
    let io_fail = |e: std::io::Error| Failure::input(format!("write {}: {e}", path.display()));
    writeln!(w, "c1,c2,abs").map_err(io_fail)?;
    for (c1, c2, a) in points {
        writeln!(w, "{c1},{c2},{a}").map_err(io_fail)?;
    }
    w.flush().map_err(io_fail)
}

fn zfield_heatmap(path: &Path, f: &ComplexField) -> Result<(), Failure> {
    let zl = f.lattice();
    let mut rows = Vec::with_capacity(zl.n() * zl.n());
    for j2 in 0..zl.n() {
        for j1 in 0..zl.n() {
            let z = zl.point(j1, j2);
            rows.push((z.re, z.im, f.get(j1, j2).norm()));
        }
    }
    write_heatmap(path, &rows)
}

fn scattering_heatmap(path: &Path, s: &ScatteringData) -> Result<(), Failure> {
    let kl = s.klattice();
    let mut rows = Vec::with_capacity(kl.m() * kl.m());
    for b in 0..kl.m() {
        for a in 0..kl.m() {
            let k = kl.point(a, b);
            rows.push((k.re, k.im, s.get(a, b).norm()));
        }
    }
    write_heatmap(path, &rows)
}

fn hole_list(s: &ScatteringData) -> Vec<(usize, usize)> {
    let kl = s.klattice();
    let mut holes = Vec::new();
    for b in 0..kl.m() {
        for a in 0..kl.m() {
            if !s.converged()[kl.idx(a, b)] {
                holes.push((a, b));
            }
        }
    }
    holes
}

fn write_norm_series(
    path: &Path,
    report: &nlft2d::evolution::EvolutionReport,
) -> Result<(), Failure> {
    use std::io::Write;
    let f = std::fs::File::create(path)
        .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
    let mut w = std::io::BufWriter::new(f);
    let io_fail = |e: std::io::Error| Failure::input(format!("write {}: {e}", path.display()));
    writeln!(w, "t,mass,l4_accum").map_err(io_fail)?;
    for i in 0..report.times.len() {
        writeln!(
            w,
            "{},{},{}",
            report.times[i], report.mass[i], report.l4_accum[i]
        )
        .map_err(io_fail)?;
    }
    w.flush().map_err(io_fail)
}

// ---------------------------------------------------------------------------
// Commands.

#[derive(Serialize)]
struct PlancherelReport {
    q_l2: f64,
    s_l2: f64,
    ratio: f64,
    holes: usize,
    degenerate: bool,
}

fn cmd_forward(cfg: &RunConfig, echo: &Value) -> Result<(), Failure> {
    let q = potential(cfg)?;
    let kl = kgrid(cfg)?;
    let scfg = cfg.solver.to_config();
    let s = forward(&q, &kl, &scfg)?;
    let out = &cfg.output_dir;
    ensure_dir(out)?;

    write_kfield(out.join("s.nlf2"), &s.as_spectral_field()?)?;
    write_json(
        &out.join("s.nlf2.json"),
        &Sidecar {
            source_norm: s.source_norm,
            l2_norm: s.l2_norm(),
            holes: hole_list(&s),
            config: echo.clone(),
        },
    )?;
    let q_l2 = q.l2_norm();
    let s_l2 = s.l2_norm();
    let degenerate = q_l2 == 0.0;
    write_json(
        &out.join("plancherel.json"),
        &PlancherelReport {
            q_l2,
            s_l2,
            ratio: if degenerate { 0.0 } else { s_l2 / q_l2 },
            holes: s.hole_count(),
            degenerate,
        },
    )?;
    zfield_heatmap(&out.join("q_heatmap.csv"), &q)?;
    scattering_heatmap(&out.join("s_heatmap.csv"), &s)?;
    Ok(())
}

#[derive(Serialize)]
struct InverseReport {
    s_l2: f64,
    q_l2: f64,
    ratio: f64,
    holes_input: usize,
    holes_sweep: usize,
}

fn cmd_inverse(cfg: &RunConfig, _echo: &Value) -> Result<(), Failure> {
    let input = cfg
        .input
        .as_ref()
        .ok_or_else(|| Failure::config("inverse needs an input file"))?;
    let sf = read_kfield(input)?;
    let kl = *sf.klattice();
    // Holes travel in the sidecar; a missing sidecar means a clean sweep.
    let sidecar_path = PathBuf::from(format!("{}.json", input.display()));
    let mut converged = vec![true; kl.m() * kl.m()];
    let mut source_norm = sf.l2_norm();
    if let Ok(text) = std::fs::read_to_string(&sidecar_path) {
        let sc: Sidecar = serde_json::from_str(&text)
            .map_err(|e| Failure::input(format!("bad sidecar {}: {e}", sidecar_path.display())))?;
        for (a, b) in sc.holes {
            if a >= kl.m() || b >= kl.m() {
                return Err(Failure::input(format!(
                    "sidecar hole ({a}, {b}) outside the {} x {} grid",
                    kl.m(),
                    kl.m()
                )));
            }
            converged[kl.idx(a, b)] = false;
        }
        source_norm = sc.source_norm;
    }
    let residuals = vec![0.0; kl.m() * kl.m()];
    let s = ScatteringData::new(
        kl,
        sf.samples().to_vec(),
        residuals,
        converged,
        source_norm,
        0.0,
    )?;

    let zl = grid(cfg)?;
    let scfg = cfg.solver.to_config();
    let (q, sweep) = inverse(&s, &zl, &scfg)?;
    let out = &cfg.output_dir;
    ensure_dir(out)?;
    write_zfield(out.join("q.nlf2"), &q)?;
    let s_l2 = s.l2_norm();
    let q_l2 = q.l2_norm();
    write_json(
        &out.join("inverse.json"),
        &InverseReport {
            s_l2,
            q_l2,
            ratio: if s_l2 > 0.0 { q_l2 / s_l2 } else { 0.0 },
            holes_input: s.hole_count(),
            holes_sweep: sweep.hole_count(),
        },
    )?;
    zfield_heatmap(&out.join("q_heatmap.csv"), &q)?;
    Ok(())
}

fn cmd_evolve(cfg: &RunConfig, _echo: &Value) -> Result<(), Failure> {
    let q0 = potential(cfg)?;
    let ev = cfg
        .evolution
        .as_ref()
        .ok_or_else(|| Failure::config("missing evolution section"))?;
    let ec = EvolutionConfig {
        t_final: ev.t,
        dt: ev.dt,
        scheme: Scheme::Strang,
        kl: kgrid(cfg)?,
        cfg: cfg.solver.to_config(),
    };
    let out = &cfg.output_dir;
    ensure_dir(out)?;

    match ev.mode {
        EvolveMode::Direct => {
            let (qt, report) = evolve_direct(&q0, ev.t, &ec)?;
            write_zfield(out.join("qt_direct.nlf2"), &qt)?;
            write_json(&out.join("evolution_direct.json"), &report)?;
            write_norm_series(&out.join("norms_direct.csv"), &report)?;
            zfield_heatmap(&out.join("qt_heatmap.csv"), &qt)?;
        }
        EvolveMode::Ist => {
            let (qt, report) = evolve_ist(&q0, ev.t, &ec)?;
            write_zfield(out.join("qt_ist.nlf2"), &qt)?;
            write_json(&out.join("evolution_ist.json"), &report)?;
            zfield_heatmap(&out.join("qt_heatmap.csv"), &qt)?;
        }
        EvolveMode::Both => {
            let (qi, ist) = evolve_ist(&q0, ev.t, &ec)?;
            let (qd, direct) = evolve_direct(&q0, ev.t, &ec)?;
            let denom = q0.l2_norm().max(1e-300);
            let report = CrossValidationReport {
                discrepancy: qi.sub(&qd).l2_norm() / denom,
                ist,
                direct,
            };
            write_zfield(out.join("qt_direct.nlf2"), &qd)?;
            write_zfield(out.join("qt_ist.nlf2"), &qi)?;
            write_json(&out.join("cross_validation.json"), &report)?;
            write_norm_series(&out.join("norms_direct.csv"), &report.direct)?;
            zfield_heatmap(&out.join("qt_heatmap.csv"), &qd)?;
        }
    }
    Ok(())
}

fn cmd_audit(cfg: &RunConfig, _echo: &Value) -> Result<(), Failure> {
    let au = cfg
        .audit
        .as_ref()
        .ok_or_else(|| Failure::config("missing audit section"))?;
    let out = &cfg.output_dir;
    ensure_dir(out)?;
    let seed = cfg.seed.unwrap_or(ENSEMBLE_SEED);

    match au.which {
        AuditKind::Frac => {
            let q = potential(cfg)?;
            let (a, b) = audit_fractional_bound(&q, au.alpha, au.lambda)?;
            write_json(&out.join("audit_frac.json"), &vec![a, b])?;
        }
        AuditKind::Pointwise => {
            let q = potential(cfg)?;
            let kl = kgrid(cfg)?;
            let s = forward(&q, &kl, &cfg.solver.to_config())?;
            let (fwd, inv) = pointwise_bound_report(&q, &s)?;
            write_json(&out.join("audit_pointwise.json"), &vec![fwd, inv])?;
        }
        AuditKind::Besov => {
            let zl = grid(cfg)?;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut trials = Vec::with_capacity(au.trials);
            for _ in 0..au.trials {
                let q = random_band_limited(zl, au.cutoff, 1.0, &mut rng);
                let u = random_band_limited(zl, au.cutoff, 1.0, &mut rng);
                let r = audit_bilinear_besov(&q, &u, au.r, au.p)?;
                trials.push((r.lhs, r.rhs));
            }
            let report =
                InequalityReport::ensemble("bilinear_besov", trials, zl.n(), zl.h(), Some(seed));
            write_json(&out.join("audit_besov.json"), &report)?;
        }
        AuditKind::Pdo => {
            let zl = grid(cfg)?;
            let kl = kgrid(cfg)?;
            // Smooth localized reference symbol a(x, xi) = e^{-|x|^2/4 - |xi|^2/8}.
            let a = SymbolField::from_fn(kl, zl, |x, z| {
                let xi2 = 4.0 * z.norm_sqr();
                Complex64::new((-x.norm_sqr() / 4.0 - xi2 / 8.0).exp(), 0.0)
            })?;
            let xl = kl
                .as_lattice()
                .map_err(|e| Failure::config(e.to_string()))?;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let ensemble: Vec<ComplexField> = (0..au.trials)
                .map(|_| random_band_limited(xl, au.cutoff, 1.0, &mut rng))
                .collect();
            let (l2, pw) = audit_pdo_bound(&a, &ensemble)?;
            write_json(&out.join("audit_pdo.json"), &vec![l2, pw])?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CompareReport {
    left: String,
    right: String,
    points: usize,
    l2_diff: f64,
    max_diff: f64,
    rel_l2: f64,
}

/// Read either field flavor as (points, spacing, weight, samples); the L2
/// weight is the lattice spacing in both domains.
fn read_any(path: &Path) -> Result<(usize, f64, Vec<Complex64>), Failure> {
    match read_zfield(path) {
        Ok(f) => Ok((f.lattice().n(), f.lattice().h(), f.samples().to_vec())),
        Err(nlft2d::Error::Format(_)) => {
            let s = read_kfield(path)?;
            Ok((s.klattice().m(), s.klattice().dk(), s.samples().to_vec()))
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_compare(cfg: &RunConfig, _echo: &Value) -> Result<(), Failure> {
    let cc = cfg
        .compare
        .as_ref()
        .ok_or_else(|| Failure::config("missing compare section"))?;
    let (nl, hl, left) = read_any(&cc.left)?;
    let (nr, hr, right) = read_any(&cc.right)?;
    if nl != nr || hl != hr {
        return Err(Failure::config(format!(
            "incompatible fields: {nl} x {nl} @ {hl} vs {nr} x {nr} @ {hr}"
        )));
    }
    let mut max_diff = 0.0f64;
    let mut sum2 = 0.0f64;
    let mut ref2 = 0.0f64;
    for (a, b) in left.iter().zip(&right) {
        let d = (a - b).norm();
        max_diff = max_diff.max(d);
        sum2 += d * d;
        ref2 += a.norm_sqr();
    }
    let l2_diff = hl * sum2.sqrt();
    let ref_l2 = hl * ref2.sqrt();
    let out = &cfg.output_dir;
    ensure_dir(out)?;
    write_json(
        &out.join("compare.json"),
        &CompareReport {
            left: cc.left.display().to_string(),
            right: cc.right.display().to_string(),
            points: nl * nl,
            l2_diff,
            max_diff,
            rel_l2: if ref_l2 > 0.0 { l2_diff / ref_l2 } else { 0.0 },
        },
    )?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (verb, args) = match &cli.command {
        Command::Forward(a) => ("forward", a),
        Command::Inverse(a) => ("inverse", a),
        Command::Evolve(a) => ("evolve", a),
        Command::Audit(a) => ("audit", a),
        Command::Compare(a) => ("compare", a),
    };
    let (cfg, echo) = load_config(args)?;
    check_command(&cfg, verb)?;
    match verb {
        "forward" => cmd_forward(&cfg, &echo),
        "inverse" => cmd_inverse(&cfg, &echo),
        "evolve" => cmd_evolve(&cfg, &echo),
        "audit" => cmd_audit(&cfg, &echo),
        _ => cmd_compare(&cfg, &echo),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
