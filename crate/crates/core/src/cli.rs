//! Command-line front end.
//!
//! Every command reads a key-value config (`key = value`, `#` comments),
//! lets command-line flags override it, and writes CSV to `--out` or
//! stdout. Exit codes: 0 success, 1 property violation or numerical
//! failure, 2 configuration or input error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bounds::{
    kernel_sum_check, lowest_zero_bound, scan_s_bound, summarize, BoundReport, LowestZeroReport,
};
use crate::critical_line::{
    cache_file, find_zeros, ingest_zeros, load_or_find, read_zero_cache, write_zero_cache, ZeroSearch,
    ZeroSet,
};
use crate::error::{Error, Result};
use crate::explicit_formula::{
    evaluate_formula_with, gaussian_test, selberg_test, ExplicitFormulaReport, FormulaConfig, TestFunction,
};
use crate::extremal::{property_suite, SelbergSystem, Side};
use crate::lfunc::{dirichlet_descriptor, zeta_descriptor, DirichletCharacter, LFunctionDescriptor};
use crate::par;
use crate::table::{num, row};

#[derive(Debug, Parser)]
#[command(name = "zeta-extremal", version, about = "Extremal functions, explicit formula and S(t) tools")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Key-value configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Published zero table (one ordinate per line).
    #[arg(long, global = true)]
    pub zeros: Option<PathBuf>,
    /// Zero-set cache directory.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Output file (default stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Tolerance for residual checks.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Majorization, L1 distance, type, decay and Fourier properties.
    VerifyExtremal,
    /// Explicit-formula residuals over a test-function catalogue.
    ExplicitFormula,
    /// S(t), envelope, sandwich and kernel sums over a t grid.
    Scan,
    /// Lowest-zero bound for Dirichlet L-functions.
    LowestZero,
    /// Locate zeros up to a height.
    FindZeros,
    /// Read and cross-check a published zero table.
    IngestZeros,
}

/// Config keys with flag overrides applied.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: format!("expected key = value, got {line:?}"),
            })?;
            values.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn load(common: &CommonArgs) -> Result<Self> {
        let mut cfg = match &common.config {
            Some(p) => Self::parse(&fs::read_to_string(p)?)?,
            None => Self::default(),
        };
        if let Some(p) = &common.zeros {
            cfg.set("zeros", p.display().to_string());
        }
        if let Some(p) = &common.cache {
            cfg.set("cache", p.display().to_string());
        }
        if let Some(w) = common.workers {
            cfg.set("workers", w.to_string());
        }
        if let Some(p) = &common.out {
            cfg.set("out", p.display().to_string());
        }
        if let Some(t) = common.tol {
            cfg.set("tol", t.to_string());
        }
        if let Some(t) = cfg.opt_f64("tol")? {
            if !(t > 0.0) {
                return Err(Error::Config(format!("tol must be positive, got {t}")));
            }
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: String) {
        self.values.insert(key.to_string(), value);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn opt_f64(&self, key: &str) -> Result<Option<f64>> {
        self.get(key)
            .map(|v| {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| Error::Config(format!("{key}: not a number: {v:?}")))
            })
            .transpose()
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.opt_f64(key)?.unwrap_or(default))
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        self.get(key).map_or(Ok(default), |v| {
            v.parse()
                .map_err(|_| Error::Config(format!("{key}: not a nonnegative integer: {v:?}")))
        })
    }

    pub fn f64_list_or(&self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        let Some(v) = self.get(key) else {
            return Ok(default.to_vec());
        };
        let xs = v
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| Error::Config(format!("{key}: not a number: {s:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if xs.is_empty() {
            return Err(Error::Config(format!("{key}: empty list")));
        }
        Ok(xs)
    }

    pub fn u64_list_or(&self, key: &str, default: &[u64]) -> Result<Vec<u64>> {
        let Some(v) = self.get(key) else {
            return Ok(default.to_vec());
        };
        v.split(',')
            .map(|s| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Config(format!("{key}: not a positive integer: {s:?}")))
            })
            .collect()
    }

    fn tol_or(&self, default: f64) -> Result<f64> {
        self.f64_or("tol", default)
    }

    /// `lfunction = zeta` (default) or `lfunction = chi` with `modulus` and
    /// optional Conrey `label`.
    pub fn descriptor(&self) -> Result<LFunctionDescriptor> {
        match self.get("lfunction").unwrap_or("zeta") {
            "zeta" => Ok(zeta_descriptor()),
            "chi" => {
                let q = self
                    .get("modulus")
                    .ok_or_else(|| Error::Config("lfunction = chi needs modulus".into()))?;
                let q: u64 = q
                    .parse()
                    .map_err(|_| Error::Config(format!("modulus: not a positive integer: {q:?}")))?;
                dirichlet_descriptor(&character(q, self.get("label"))?)
            }
            other => Err(Error::Config(format!("unknown lfunction {other:?} (zeta or chi)"))),
        }
    }
}

fn character(q: u64, label: Option<&str>) -> Result<DirichletCharacter> {
    match label {
        Some(l) => {
            let l: u64 = l
                .parse()
                .map_err(|_| Error::Config(format!("label: not a positive integer: {l:?}")))?;
            DirichletCharacter::conrey(q, l)
        }
        None => DirichletCharacter::default_primitive(q),
    }
}

/// Result of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub csv: String,
    /// False when a checked property failed.
    pub ok: bool,
    pub messages: Vec<String>,
}

impl Outcome {
    fn new(header: &str, rows: Vec<String>, ok: bool) -> Self {
        let mut csv = String::from(header);
        csv.push('\n');
        for r in rows {
            csv.push_str(&r);
            csv.push('\n');
        }
        Self {
            csv,
            ok,
            messages: Vec::new(),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_)
        | Error::Parse { .. }
        | Error::Ordering { .. }
        | Error::Io(_)
        | Error::CrossCheck { .. }
        | Error::NonPrimitive(_)
        | Error::InvalidDescriptor(_)
        | Error::HeightCap { .. }
        | Error::SieveCapacity { .. }
        | Error::TableTooSmall { .. }
        | Error::Completeness { .. }
        | Error::UnknownRootNumber
        | Error::NotSelfDual => 2,
        _ => 1,
    }
}

/// Runs a parsed command, returning its CSV without writing it.
pub fn execute(cmd: Command, cfg: &RunConfig) -> Result<Outcome> {
    let workers = cfg.usize_or("workers", 0)?;
    par::with_workers(workers, || match cmd {
        Command::VerifyExtremal => cmd_verify_extremal(cfg),
        Command::ExplicitFormula => cmd_explicit_formula(cfg),
        Command::Scan => cmd_scan(cfg),
        Command::LowestZero => cmd_lowest_zero(cfg),
        Command::FindZeros => cmd_find_zeros(cfg),
        Command::IngestZeros => cmd_ingest_zeros(cfg),
    })
}

/// Parses arguments, runs the command and writes its output.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = RunConfig::load(&cli.common).and_then(|cfg| {
        let outcome = execute(cli.command, &cfg)?;
        match cfg.get("out") {
            Some(p) => fs::write(p, &outcome.csv)?,
            None => print!("{}", outcome.csv),
        }
        Ok(outcome)
    });
    match result {
        Ok(outcome) => {
            for m in &outcome.messages {
                eprintln!("{m}");
            }
            if outcome.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Extremal property suite over `t_values` × `delta_values` with `samples` points.
pub fn cmd_verify_extremal(cfg: &RunConfig) -> Result<Outcome> {
    let ts = cfg.f64_list_or("t_values", &[1.0, 10.0, 100.0])?;
    let deltas = cfg.f64_list_or("delta_values", &[1.0, 2.0, 4.0, 8.0])?;
    let samples = cfg.usize_or("samples", 100_000)?;
    let rows = property_suite(&ts, &deltas, samples)?;
    let ok = rows.iter().all(|r| r.pass);
    let lines = rows
        .iter()
        .map(|r| {
            row(&[
                r.property.to_string(),
                num(r.t),
                num(r.delta),
                r.side.name().to_string(),
                num(r.value),
                r.pass.to_string(),
            ])
        })
        .collect();
    let mut out = Outcome::new("property,t,delta,side,value,pass", lines, ok);
    if !ok {
        out.messages.push("extremal property violated".into());
    }
    Ok(out)
}

/// Zeros from `--zeros` (ingested) or from the cache; never computed here.
fn stored_zeros(cfg: &RunConfig, d: &LFunctionDescriptor, height: f64) -> Result<ZeroSet> {
    if let Some(p) = cfg.get("zeros") {
        return ingest_zeros(Path::new(p), d);
    }
    let hint = format!(
        "run `zeta-extremal find-zeros --cache <dir>` or `zeta-extremal ingest-zeros --zeros <table> --cache <dir>` for {} up to height {height}",
        d.name()
    );
    let dir = cfg
        .get("cache")
        .ok_or_else(|| Error::Config(format!("no zero data: pass --zeros or --cache; {hint}")))?;
    let path = cache_file(Path::new(dir), d);
    if !path.exists() {
        return Err(Error::Config(format!("missing zero cache {}; {hint}", path.display())));
    }
    let zs = read_zero_cache(&path, d)?;
    if zs.complete_to() < height {
        return Err(Error::Completeness {
            requested: height,
            complete_to: zs.complete_to(),
        });
    }
    Ok(zs)
}

/// Zeros from `--zeros`, the cache (filled on demand), or a fresh search.
fn zeros_for(cfg: &RunConfig, d: &LFunctionDescriptor, height: f64) -> Result<ZeroSet> {
    if let Some(p) = cfg.get("zeros") {
        return ingest_zeros(Path::new(p), d);
    }
    match cfg.get("cache") {
        Some(dir) => load_or_find(Path::new(dir), d, height),
        None => find_zeros(d, height),
    }
}

fn catalogue(cfg: &RunConfig) -> Result<Vec<(String, TestFunction)>> {
    let kind = cfg.get("catalogue").unwrap_or("gaussian");
    let mut out = Vec::new();
    if kind == "gaussian" || kind == "all" {
        let width = cfg.f64_or("gaussian_width", 1.0)?;
        for c in cfg.f64_list_or("gaussian_centers", &[10.0, 20.0, 30.0, 40.0, 50.0])? {
            out.push((format!("gaussian:{c}:{width}"), gaussian_test(c, width)?));
        }
    }
    if kind == "selberg" || kind == "all" {
        let ts = cfg.f64_list_or("selberg_t", &[20.0])?;
        let deltas = cfg.f64_list_or("selberg_delta", &[1.0])?;
        for &t in &ts {
            for &delta in &deltas {
                for side in [Side::Majorant, Side::Minorant] {
                    let sys = SelbergSystem::new(t, delta, side)?;
                    out.push((format!("selberg_{}:{t}:{delta}", side.name()), selberg_test(sys)));
                }
            }
        }
    }
    if out.is_empty() {
        return Err(Error::Config(format!(
            "catalogue must be gaussian, selberg or all, got {kind:?}"
        )));
    }
    Ok(out)
}

/// `evaluate_formula` over the catalogue; a row fails when |residual| > `tol`.
pub fn cmd_explicit_formula(cfg: &RunConfig) -> Result<Outcome> {
    let d = cfg.descriptor()?;
    let height = cfg.f64_or("height", 500.0)?;
    let tol = cfg.tol_or(1e-4)?;
    let shift = cfg.f64_or("shift", 0.0)?;
    let fcfg = FormulaConfig {
        tol,
        ..FormulaConfig::default()
    };
    let zs = stored_zeros(cfg, &d, height)?;
    let mut ok = true;
    let mut lines = Vec::new();
    for (label, h) in catalogue(cfg)? {
        let r: ExplicitFormulaReport = evaluate_formula_with(&d, &zs, &h, shift, &fcfg)?;
        let pass = r.residual.norm() <= tol;
        ok &= pass;
        lines.push(format!("{label},{},{pass}", r.csv_row()));
    }
    let header = format!("test_function,{},pass", ExplicitFormulaReport::csv_header());
    Ok(Outcome::new(&header, lines, ok))
}

fn scan_grid(cfg: &RunConfig) -> Result<Vec<f64>> {
    let step = cfg.f64_or("t_step", 0.1)?;
    let end = cfg.f64_or("t_end", 100.0)?;
    let start = cfg.f64_or("t_start", step)?;
    if !(step > 0.0) || !(end >= start) || !(start > 0.0) {
        return Err(Error::Config(format!(
            "grid needs 0 < t_start <= t_end and t_step > 0, got {start}, {end}, {step}"
        )));
    }
    let n = ((end - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| start + k as f64 * step).collect())
}

/// `S(t)`, envelope, sandwich and (optionally) kernel sums over the grid.
pub fn cmd_scan(cfg: &RunConfig) -> Result<Outcome> {
    let d = cfg.descriptor()?;
    let grid = scan_grid(cfg)?;
    let t_end = *grid.last().expect("nonempty grid");
    let default_height = ZeroSearch::default().cap_for(&d).min(1000.0).max(t_end + 1.0);
    let height = cfg.f64_or("zero_height", default_height)?;
    let zs = zeros_for(cfg, &d, height)?;
    let reports: Vec<BoundReport> = scan_s_bound(&d, &zs, &grid)?;
    let with_kernel = cfg.get("kernel").map_or(Ok(true), |v| {
        v.parse::<bool>()
            .map_err(|_| Error::Config(format!("kernel: expected true or false, got {v:?}")))
    })?;
    let kernels = if with_kernel {
        Some(kernel_sum_check(&d, &zs, &grid)?)
    } else {
        None
    };
    let summary = summarize(&reports);
    let mut header = BoundReport::csv_header().to_string();
    if kernels.is_some() {
        header.push_str(",kernel_sum,discrepancy");
    }
    let lines = reports
        .iter()
        .enumerate()
        .map(|(i, r)| match &kernels {
            Some(k) => format!("{},{},{}", r.csv_row(), num(k[i].kernel_sum), num(k[i].discrepancy)),
            None => r.csv_row(),
        })
        .collect();
    let mut out = Outcome::new(&header, lines, summary.sandwich_holds);
    out.messages.push(format!(
        "max |S| = {:.6}, additive constant = {:.6}",
        summary.max_abs_s, summary.additive_constant
    ));
    if let Some(k) = &kernels {
        let sup = k.iter().map(|r| r.discrepancy.abs()).fold(0.0, f64::max);
        out.messages.push(format!("kernel-sum discrepancy sup = {sup:.6}"));
    }
    if !summary.sandwich_holds {
        out.messages.push("sandwich violated".into());
    }
    Ok(out)
}

/// Lowest zero against the bound for each modulus in `moduli`; moduli
/// below the threshold produce a warning row.
pub fn cmd_lowest_zero(cfg: &RunConfig) -> Result<Outcome> {
    let moduli = cfg.u64_list_or("moduli", &[101, 997])?;
    let mut lines = Vec::new();
    let mut messages = Vec::new();
    for q in moduli {
        let chi = character(q, cfg.get("label"))?;
        let d = dirichlet_descriptor(&chi)?;
        let zs = lowest_zeros(&d)?;
        match lowest_zero_bound(&d, &zs) {
            Ok(r) => lines.push(format!("{},ok", r.csv_row(&d.name()))),
            Err(Error::Threshold(msg)) => {
                let actual = zs.lowest().unwrap_or(f64::NAN);
                messages.push(format!("warning: {}: {msg}", d.name()));
                lines.push(row(&[d.name(), "NA".into(), num(actual), "NA".into(), "below_threshold".into()]));
            }
            Err(e) => return Err(e),
        }
    }
    let header = format!("{},status", LowestZeroReport::csv_header());
    let mut out = Outcome::new(&header, lines, true);
    out.messages = messages;
    Ok(out)
}

/// Zeros up to the first height (doubling from 1) that contains one.
fn lowest_zeros(d: &LFunctionDescriptor) -> Result<ZeroSet> {
    let cap = ZeroSearch::default().cap_for(d);
    let mut h: f64 = 1.0;
    loop {
        let zs = find_zeros(d, h.min(cap))?;
        if !zs.is_empty() || h >= cap {
            return Ok(zs);
        }
        h *= 2.0;
    }
}

pub fn cmd_find_zeros(cfg: &RunConfig) -> Result<Outcome> {
    let d = cfg.descriptor()?;
    let height = cfg.f64_or("height", 100.0)?;
    let zs = match cfg.get("cache") {
        Some(dir) => load_or_find(Path::new(dir), &d, height)?.truncated(height),
        None => find_zeros(&d, height)?,
    };
    Ok(zero_listing(&zs))
}

pub fn cmd_ingest_zeros(cfg: &RunConfig) -> Result<Outcome> {
    let d = cfg.descriptor()?;
    let path = cfg
        .get("zeros")
        .ok_or_else(|| Error::Config("ingest-zeros needs --zeros <table>".into()))?;
    let zs = ingest_zeros(Path::new(path), &d)?;
    if let Some(dir) = cfg.get("cache") {
        write_zero_cache(&zs, &cache_file(Path::new(dir), &d))?;
    }
    let mut out = zero_listing(&zs);
    out.messages.push(format!(
        "{} ordinates, complete to {}, cross-checked against the zero finder",
        zs.len(),
        zs.complete_to()
    ));
    Ok(out)
}

fn zero_listing(zs: &ZeroSet) -> Outcome {
    let lines = zs
        .ordinates()
        .iter()
        .enumerate()
        .map(|(i, g)| row(&[(i + 1).to_string(), num(*g)]))
        .collect();
    Outcome::new("index,ordinate", lines, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> RunConfig {
        RunConfig::parse(text).unwrap()
    }

    #[test]
    fn config_and_flags() {
        let c = cfg("# run\nt_values = 1, 2\ntol=1e-3\n");
        assert_eq!(c.f64_list_or("t_values", &[]).unwrap(), vec![1.0, 2.0]);
        assert!(matches!(RunConfig::parse("novalue\n"), Err(Error::Parse { line: 1, .. })));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, "tol = 1e-3\nworkers = 2\n").unwrap();
        let common = CommonArgs {
            config: Some(path.clone()),
            tol: Some(1e-5),
            ..CommonArgs::default()
        };
        let c = RunConfig::load(&common).unwrap();
        assert_eq!(c.f64_or("tol", 0.0).unwrap(), 1e-5);
        assert_eq!(c.usize_or("workers", 0).unwrap(), 2);
        let bad = CommonArgs {
            config: Some(path),
            tol: Some(-1.0),
            ..CommonArgs::default()
        };
        assert!(RunConfig::load(&bad).is_err());
    }

    #[test]
    fn verify_extremal_rows_and_errors() {
        let out = cmd_verify_extremal(&cfg("t_values = 1\ndelta_values = 1, 2\nsamples = 500\n")).unwrap();
        assert!(out.ok);
        assert_eq!(out.csv.lines().count(), 1 + 2 * 2 * 8);
        let err = cmd_verify_extremal(&cfg("delta_values = 0\n")).unwrap_err();
        assert_eq!(exit_code(&err), 2);
    }

    #[test]
    fn scan_is_worker_independent() {
        let text = "t_step = 0.5\nt_end = 20\nzero_height = 60\n";
        let mut one = cfg(text);
        one.set("workers", "1".into());
        let mut many = cfg(text);
        many.set("workers", "8".into());
        let a = execute(Command::Scan, &one).unwrap();
        let b = execute(Command::Scan, &many).unwrap();
        assert_eq!(a.csv, b.csv);
        assert_eq!(a.csv.lines().count(), 41);
        assert!(a.ok);
    }

    #[test]
    fn lowest_zero_rows() {
        let out = cmd_lowest_zero(&cfg("moduli = 3, 101\n")).unwrap();
        assert!(out.ok);
        let lines: Vec<&str> = out.csv.lines().collect();
        assert!(lines[1].ends_with("below_threshold"));
        assert!(lines[2].ends_with(",ok"));
        assert!(!out.messages.is_empty());
        let err = cmd_lowest_zero(&cfg("moduli = 1x\n")).unwrap_err();
        assert_eq!(exit_code(&err), 2);
    }

    #[test]
    fn explicit_formula_needs_zero_data() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = cfg("height = 100\n");
        c.set("cache", dir.path().display().to_string());
        let err = cmd_explicit_formula(&c).unwrap_err();
        assert!(err.to_string().contains("ingest-zeros"));
        assert_eq!(exit_code(&err), 2);
        let mut f = cfg("height = 100\n");
        f.set("cache", dir.path().display().to_string());
        cmd_find_zeros(&f).unwrap();
        let out = cmd_explicit_formula(&cfg_with_cache("height = 100\ncatalogue = selberg\nselberg_t = 10\n", dir.path())).unwrap();
        assert!(out.ok, "{}", out.csv);
        for line in out.csv.lines().skip(1) {
            assert!(line.contains(",535,"));
        }
    }

    fn cfg_with_cache(text: &str, dir: &Path) -> RunConfig {
        let mut c = cfg(text);
        c.set("cache", dir.display().to_string());
        c
    }

    #[test]
    fn run_exit_codes() {
        assert_eq!(run(["zeta-extremal", "lowest-zero", "--tol", "abc"]), 2);
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("z.csv");
        let code = run([
            "zeta-extremal".into(),
            "find-zeros".into(),
            "--out".into(),
            out.display().to_string(),
        ]);
        assert_eq!(code, 0);
        assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 30);
    }
}
