//! Command-line front end.
//!
//! Every flag can also come from a `K3W_`-prefixed environment variable or a
//! `key = value` configuration file (`--config`). Precedence is command line,
//! then environment, then file, then built-in defaults.
//!
//! Exit codes: 0 success, 1 internal verification failure, 2 usage error,
//! 3 mathematical rejection (square `d`, no admissible `mu`, non-membership).

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::Error;
use crate::family::{
    enumerate_direct, enumerate_with, member_detailed, FamilyQuery, Membership, MuStatus,
    SearchOptions, Witness,
};
use crate::lattice::make_lattice;
use crate::mukai::Sign;
use crate::pell::{fundamental_unit, solve_bounded, DEFAULT_SEARCH_DEPTH};
use crate::report::bigint::to_value as big;
use crate::report::{Document, LatticeRecord, QueryRecord};
use crate::selfcheck::{run_selfcheck, DEFAULT_ITERATIONS, DEFAULT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_REJECTED: i32 = 3;

pub const DEFAULT_XY_BOUND: i64 = 500;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum SignChoice {
    Plus,
    Minus,
    #[default]
    Both,
}

impl SignChoice {
    pub fn signs(self) -> Vec<Sign> {
        match self {
            SignChoice::Plus => vec![Sign::Plus],
            SignChoice::Minus => vec![Sign::Minus],
            SignChoice::Both => Sign::BOTH.to_vec(),
        }
    }

    fn label(self) -> &'static str {
        match self {
            SignChoice::Plus => "plus",
            SignChoice::Minus => "minus",
            SignChoice::Both => "both",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "k3w",
    version,
    about = "Pell-type witnesses for Mukai vectors on rank-two K3 lattices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// All d <= dmax in the family, with witnesses.
    Enumerate(Flags),
    /// Decide membership of one d.
    Member(Flags),
    /// Membership with per-mu search details.
    Witness(Flags),
    /// Fundamental unit and class representatives of u^2 - d w^2 = n.
    Pell(Flags),
    /// Beauville-Bogomolov values for a supplied witness.
    Hilbert(Flags),
    /// Run the randomized property suites.
    Selfcheck(Flags),
}

#[derive(Debug, Default, Args)]
#[command(allow_negative_numbers = true)]
struct Flags {
    #[arg(long)]
    g: Option<i64>,
    #[arg(long)]
    r: Option<i64>,
    #[arg(long)]
    s: Option<i64>,
    #[arg(long)]
    d: Option<i64>,
    /// Right-hand side for `pell`.
    #[arg(long)]
    n: Option<BigInt>,
    /// Lattice residue for `hilbert`.
    #[arg(long)]
    mu: Option<i64>,
    /// Coordinates of D = (xH + yG)/(2g-2) for `hilbert`.
    #[arg(long)]
    x: Option<BigInt>,
    #[arg(long)]
    y: Option<BigInt>,
    #[arg(long, value_enum)]
    sign: Option<SignChoice>,
    /// Use the family with r and s exchanged.
    #[arg(long)]
    tilde: bool,
    #[arg(long)]
    dmax: Option<i64>,
    /// Box for the closed-formula cross-check.
    #[arg(long)]
    xy_bound: Option<i64>,
    /// Compare `enumerate` against a direct scan over |x|, |y| <= xy-bound.
    #[arg(long)]
    cross_check: bool,
    /// Witnesses need D.H <= this value; default depends on (g, r).
    #[arg(long)]
    x_threshold: Option<BigInt>,
    #[arg(long)]
    search_depth: Option<u32>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    iterations: Option<u32>,
    /// Corrupt witnesses inside `selfcheck`; the run must then fail.
    #[arg(long)]
    inject_fault: bool,
    /// JSON document to re-verify with `hilbert`.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Fully resolved parameters of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub g: Option<i64>,
    pub r: Option<i64>,
    pub s: Option<i64>,
    pub d: Option<i64>,
    pub n: Option<BigInt>,
    pub mu: Option<i64>,
    pub x: Option<BigInt>,
    pub y: Option<BigInt>,
    pub sign: SignChoice,
    pub tilde: bool,
    pub d_max: Option<i64>,
    pub xy_bound: i64,
    pub cross_check: bool,
    pub x_threshold: Option<BigInt>,
    pub search_depth: u32,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub iterations: u32,
    pub inject_fault: bool,
    pub input: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            g: None,
            r: None,
            s: None,
            d: None,
            n: None,
            mu: None,
            x: None,
            y: None,
            sign: SignChoice::Both,
            tilde: false,
            d_max: None,
            xy_bound: DEFAULT_XY_BOUND,
            cross_check: false,
            x_threshold: None,
            search_depth: DEFAULT_SEARCH_DEPTH,
            format: Format::Table,
            out: None,
            seed: DEFAULT_SEED,
            iterations: DEFAULT_ITERATIONS,
            inject_fault: false,
            input: None,
        }
    }
}

impl RunConfig {
    fn search_options(&self) -> SearchOptions {
        SearchOptions {
            x_threshold: self.x_threshold.clone(),
            search_depth: self.search_depth,
        }
    }
}

/// Exit code plus what goes to stdout and stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: impl Into<String>) -> Self {
        Self {
            code,
            stdout: String::new(),
            stderr: stderr.into(),
        }
    }

    fn with_note(mut self, note: impl AsRef<str>) -> Self {
        self.stderr.push_str(note.as_ref());
        if !self.stderr.ends_with('\n') {
            self.stderr.push('\n');
        }
        self
    }
}

/// Parses `key = value` lines; `#` starts a comment. Keys are normalized to
/// lower snake case.
pub fn parse_config_file(text: &str) -> Result<HashMap<String, String>, String> {
    let mut out = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key = value", i + 1))?;
        out.insert(normalize_key(k), v.trim().to_string());
    }
    Ok(out)
}

fn normalize_key(k: &str) -> String {
    k.trim()
        .trim_start_matches("--")
        .replace('-', "_")
        .to_lowercase()
}

/// Lower-level sources consulted when a flag is absent.
struct Layers {
    env: HashMap<String, String>,
    file: HashMap<String, String>,
}

impl Layers {
    fn new(env: &HashMap<String, String>, file: HashMap<String, String>) -> Self {
        let env = env
            .iter()
            .filter_map(|(k, v)| {
                k.strip_prefix("K3W_")
                    .map(|k| (normalize_key(k), v.clone()))
            })
            .collect();
        Self { env, file }
    }

    fn raw(&self, key: &str) -> Option<(&'static str, &String)> {
        self.env
            .get(key)
            .map(|v| ("environment", v))
            .or_else(|| self.file.get(key).map(|v| ("config file", v)))
    }

    fn get<T: FromStr>(&self, cli: Option<T>, key: &str) -> Result<Option<T>, String> {
        if cli.is_some() {
            return Ok(cli);
        }
        match self.raw(key) {
            None => Ok(None),
            Some((src, v)) => v
                .parse()
                .map(Some)
                .map_err(|_| format!("invalid value '{v}' for {key} from {src}")),
        }
    }

    fn get_enum<T: ValueEnum>(&self, cli: Option<T>, key: &str) -> Result<Option<T>, String> {
        if cli.is_some() {
            return Ok(cli);
        }
        match self.raw(key) {
            None => Ok(None),
            Some((src, v)) => T::from_str(v, true)
                .map(Some)
                .map_err(|_| format!("invalid value '{v}' for {key} from {src}")),
        }
    }

    fn flag(&self, cli: bool, key: &str) -> Result<bool, String> {
        if cli {
            return Ok(true);
        }
        Ok(self.get::<bool>(None, key)?.unwrap_or(false))
    }
}

fn resolve(flags: Flags, env: &HashMap<String, String>) -> Result<RunConfig, String> {
    let env_only = Layers::new(env, HashMap::new());
    let config_path = match flags.config.clone() {
        Some(p) => Some(p),
        None => env_only.get::<PathBuf>(None, "config")?,
    };
    let file = match config_path {
        Some(p) => {
            let text = std::fs::read_to_string(&p)
                .map_err(|e| format!("cannot read config {}: {e}", p.display()))?;
            parse_config_file(&text)?
        }
        None => HashMap::new(),
    };
    let l = Layers::new(env, file);
    let def = RunConfig::default();
    Ok(RunConfig {
        g: l.get(flags.g, "g")?,
        r: l.get(flags.r, "r")?,
        s: l.get(flags.s, "s")?,
        d: l.get(flags.d, "d")?,
        n: l.get(flags.n, "n")?,
        mu: l.get(flags.mu, "mu")?,
        x: l.get(flags.x, "x")?,
        y: l.get(flags.y, "y")?,
        sign: l.get_enum(flags.sign, "sign")?.unwrap_or(def.sign),
        tilde: l.flag(flags.tilde, "tilde")?,
        d_max: l.get(flags.dmax, "dmax")?,
        xy_bound: l.get(flags.xy_bound, "xy_bound")?.unwrap_or(def.xy_bound),
        cross_check: l.flag(flags.cross_check, "cross_check")?,
        x_threshold: l.get(flags.x_threshold, "x_threshold")?,
        search_depth: l
            .get(flags.search_depth, "search_depth")?
            .unwrap_or(def.search_depth),
        format: l.get_enum(flags.format, "format")?.unwrap_or(def.format),
        out: l.get(flags.out, "out")?,
        seed: l.get(flags.seed, "seed")?.unwrap_or(def.seed),
        iterations: l
            .get(flags.iterations, "iterations")?
            .unwrap_or(def.iterations),
        inject_fault: l.flag(flags.inject_fault, "inject_fault")?,
        input: l.get(flags.input, "input")?,
    })
}

/// Entry point used by the binary: parses `args` (including the program
/// name), layers `env` and the config file underneath, runs the command and
/// writes `--out` if given.
pub fn run<I, T>(args: I, env: &HashMap<String, String>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::fail(EXIT_USAGE, text)
            } else {
                // --help and --version
                Outcome::ok(text)
            };
        }
    };
    let (cmd, flags): (fn(&RunConfig) -> Outcome, Flags) = match cli.command {
        Command::Enumerate(f) => (cmd_enumerate, f),
        Command::Member(f) => (cmd_member, f),
        Command::Witness(f) => (cmd_witness, f),
        Command::Pell(f) => (cmd_pell, f),
        Command::Hilbert(f) => (cmd_hilbert, f),
        Command::Selfcheck(f) => (cmd_selfcheck, f),
    };
    let cfg = match resolve(flags, env) {
        Ok(cfg) => cfg,
        Err(msg) => return Outcome::fail(EXIT_USAGE, format!("error: {msg}\n")),
    };
    let mut outcome = cmd(&cfg);
    if let Some(path) = &cfg.out {
        if let Err(e) = std::fs::write(path, &outcome.stdout) {
            return Outcome::fail(
                EXIT_INTERNAL,
                format!("cannot write {}: {e}\n", path.display()),
            );
        }
        outcome.stdout.clear();
    }
    outcome
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SquareDiscriminant(_)
        | Error::SquareInput(_)
        | Error::NoValidMu { .. }
        | Error::CongruenceFailure { .. }
        | Error::NotAUnit { .. }
        | Error::ThresholdUnreachable { .. } => EXIT_REJECTED,
        Error::GenusTooSmall(_)
        | Error::NonPositiveDiscriminant(_)
        | Error::NegativeDimension { .. }
        | Error::InvalidQuery(_)
        | Error::NotInLattice { .. }
        | Error::ZeroRightHandSide => EXIT_USAGE,
        Error::MixedLattices => EXIT_INTERNAL,
    }
}

fn from_error(e: &Error) -> Outcome {
    Outcome::fail(exit_code(e), format!("error: {e}\n"))
}

fn require<T: Clone>(v: &Option<T>, name: &str) -> Result<T, Outcome> {
    v.clone()
        .ok_or_else(|| Outcome::fail(EXIT_USAGE, format!("error: --{name} is required\n")))
}

fn queries(cfg: &RunConfig) -> Result<Vec<FamilyQuery>, Outcome> {
    let (g, r, s) = (
        require(&cfg.g, "g")?,
        require(&cfg.r, "r")?,
        require(&cfg.s, "s")?,
    );
    let qs: Vec<FamilyQuery> = cfg
        .sign
        .signs()
        .into_iter()
        .map(|sign| FamilyQuery::new(g, r, s, sign, cfg.tilde))
        .collect();
    qs[0].validate().map_err(|e| from_error(&e))?;
    Ok(qs)
}

fn render(doc: &Document, format: Format) -> String {
    match format {
        Format::Table => doc.to_table(),
        Format::Json => {
            let mut s = doc.to_json();
            s.push('\n');
            s
        }
        Format::Csv => doc.to_csv(),
    }
}

/// Checks other than the `D.H` threshold that failed on some witness.
fn core_failures(witnesses: &[Witness]) -> Vec<String> {
    witnesses
        .iter()
        .flat_map(|w| {
            w.report
                .failures()
                .into_iter()
                .filter(|f| *f != "threshold")
                .map(move |f| format!("d={} sign={}: {f}", w.d(), w.sign()))
        })
        .collect()
}

fn threshold_note(witnesses: &[Witness]) -> Option<String> {
    let stuck: Vec<String> = witnesses
        .iter()
        .filter(|w| !w.report.threshold.passed)
        .map(|w| format!("{}{}", w.d(), w.sign().symbol()))
        .collect();
    (!stuck.is_empty()).then(|| {
        format!(
            "note: no admissible orbit reaches the D.H threshold for d = {}\n",
            stuck.join(", ")
        )
    })
}

fn finish(doc: &Document, witnesses: &[Witness], format: Format) -> Outcome {
    let mut out = Outcome::ok(render(doc, format));
    let broken = core_failures(witnesses);
    if !broken.is_empty() {
        out.code = EXIT_INTERNAL;
        out = out.with_note(format!(
            "internal verification failure:\n  {}",
            broken.join("\n  ")
        ));
    }
    if let Some(note) = threshold_note(witnesses) {
        out = out.with_note(note);
    }
    out
}

pub fn cmd_enumerate(cfg: &RunConfig) -> Outcome {
    let qs = match queries(cfg) {
        Ok(q) => q,
        Err(o) => return o,
    };
    let d_max = match require(&cfg.d_max, "dmax") {
        Ok(d) => d,
        Err(o) => return o,
    };
    if d_max < 1 {
        return Outcome::fail(
            EXIT_USAGE,
            format!("error: --dmax must be positive, got {d_max}\n"),
        );
    }
    let opts = cfg.search_options();
    let mut witnesses = Vec::new();
    for q in &qs {
        match enumerate_with(q, d_max, &opts) {
            Ok(ws) => witnesses.extend(ws),
            Err(e) => return from_error(&e),
        }
    }
    witnesses.sort_by_key(|w| (w.d(), w.sign().value() < 0));
    let doc = Document::new(
        QueryRecord::with_sign_label(&qs[0], cfg.sign.label()),
        None,
        &witnesses,
    );
    let mut out = finish(&doc, &witnesses, cfg.format);

    if cfg.cross_check {
        let found: std::collections::BTreeSet<(i64, i64)> = witnesses
            .iter()
            .map(|w| (w.d(), w.sign().value()))
            .collect();
        let mut missing = Vec::new();
        for q in &qs {
            for d in enumerate_direct(q, cfg.xy_bound) {
                if d <= d_max && !found.contains(&(d, q.sign.value())) {
                    missing.push(format!("{d}{}", q.sign.symbol()));
                }
            }
        }
        if missing.is_empty() {
            out = out.with_note(format!(
                "cross-check: direct scan with |x|,|y| <= {} agrees",
                cfg.xy_bound
            ));
        } else {
            out.code = EXIT_INTERNAL;
            out = out.with_note(format!(
                "cross-check: direct scan found {}",
                missing.join(", ")
            ));
        }
    }
    out
}

fn memberships(cfg: &RunConfig) -> Result<(Vec<FamilyQuery>, i64, Vec<Membership>), Outcome> {
    let qs = queries(cfg)?;
    let d = require(&cfg.d, "d")?;
    let opts = cfg.search_options();
    let ms = qs
        .iter()
        .map(|q| member_detailed(q, d, &opts))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| from_error(&e))?;
    Ok((qs, d, ms))
}

fn membership_witnesses(ms: &[Membership]) -> Vec<Witness> {
    ms.iter().filter_map(|m| m.witness().cloned()).collect()
}

fn lattice_record(d: i64, ws: &[Witness]) -> Option<LatticeRecord> {
    ws.first().map(|w| LatticeRecord { d, mu: w.mu() })
}

pub fn cmd_member(cfg: &RunConfig) -> Outcome {
    let (qs, d, ms) = match memberships(cfg) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let ws = membership_witnesses(&ms);
    if ws.is_empty() {
        return Outcome::fail(
            EXIT_REJECTED,
            format!("d = {d} is not in the family for {}\n", qs[0]),
        );
    }
    let doc = Document::new(
        QueryRecord::with_sign_label(&qs[0], cfg.sign.label()),
        lattice_record(d, &ws),
        &ws,
    );
    finish(&doc, &ws, cfg.format)
}

fn status_label(status: &MuStatus) -> &'static str {
    match status {
        MuStatus::Witness => "witness",
        MuStatus::ThresholdUnreachable => "threshold-unreachable",
        MuStatus::DegenerateRhs => "degenerate-rhs",
        MuStatus::Empty(_) => "empty",
    }
}

fn witness_details(ms: &[Membership]) -> Value {
    let per_sign: Vec<Value> = ms
        .iter()
        .map(|m| {
            let outcomes: Vec<Value> = m
                .outcomes
                .iter()
                .map(|o| {
                    let mut v = json!({ "mu": o.mu, "status": status_label(&o.status) });
                    if let MuStatus::Empty(cert) = &o.status {
                        v["certificate"] = json!({
                            "modulus": big(&cert.modulus),
                            "period": cert.period,
                            "images": cert.images,
                        });
                    }
                    if let Some(w) = &o.witness {
                        let p = w.pell_solution();
                        v["pell"] = json!({ "u": big(&p.u), "w": big(&p.w) });
                        v["x_threshold"] = big(&w.x_threshold);
                        v["witness"] =
                            serde_json::to_value(crate::report::WitnessRecord::from_witness(w))
                                .expect("record serializes");
                    }
                    v
                })
                .collect();
            json!({ "sign": m.query.sign, "outcomes": outcomes })
        })
        .collect();
    Value::Array(per_sign)
}

fn witness_table(ms: &[Membership]) -> String {
    let mut out = String::new();
    for m in ms {
        let _ = writeln!(out, "# {} d = {}", m.query, m.d);
        for o in &m.outcomes {
            let _ = write!(out, "mu = {:>3}  {}", o.mu, status_label(&o.status));
            if let MuStatus::Empty(cert) = &o.status {
                let _ = write!(
                    out,
                    "  (no constrained point in one period {} mod {} over {} class images)",
                    cert.period, cert.modulus, cert.images
                );
            }
            let _ = writeln!(out);
            if let Some(w) = &o.witness {
                let p = w.pell_solution();
                let _ = writeln!(out, "    (u, w) = ({}, {})", p.u, p.w);
                let _ = writeln!(out, "    D = ({}H + {}G)/{}", w.x, w.y, w.lattice.degree());
                let _ = writeln!(
                    out,
                    "    F = ({}H + {}G)/{}",
                    w.f.0,
                    w.f.1,
                    w.lattice.degree()
                );
                let _ = writeln!(out, "    D.H = {}  threshold {}", w.x, w.x_threshold);
                for (name, c) in w.report.entries() {
                    let _ = writeln!(
                        out,
                        "    {:<13} {:<4} computed {} expected {}",
                        name,
                        if c.passed { "ok" } else { "FAIL" },
                        c.computed,
                        c.expected
                    );
                }
            }
        }
    }
    out
}

pub fn cmd_witness(cfg: &RunConfig) -> Outcome {
    let (qs, d, ms) = match memberships(cfg) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let ws = membership_witnesses(&ms);
    let text = match cfg.format {
        Format::Table => witness_table(&ms),
        Format::Json => {
            let doc = json!({
                "query": QueryRecord::with_sign_label(&qs[0], cfg.sign.label()),
                "d": d,
                "search": witness_details(&ms),
            });
            serde_json::to_string_pretty(&doc).expect("value serializes") + "\n"
        }
        Format::Csv => Document::new(
            QueryRecord::with_sign_label(&qs[0], cfg.sign.label()),
            lattice_record(d, &ws),
            &ws,
        )
        .to_csv(),
    };
    if ws.is_empty() {
        return Outcome {
            code: EXIT_REJECTED,
            stdout: text,
            stderr: format!("d = {d} is not in the family for {}\n", qs[0]),
        };
    }
    let mut out = Outcome::ok(text);
    let broken = core_failures(&ws);
    if !broken.is_empty() {
        out.code = EXIT_INTERNAL;
        out = out.with_note(format!(
            "internal verification failure:\n  {}",
            broken.join("\n  ")
        ));
    }
    if let Some(note) = threshold_note(&ws) {
        out = out.with_note(note);
    }
    out
}

pub fn cmd_pell(cfg: &RunConfig) -> Outcome {
    let d = match require(&cfg.d, "d") {
        Ok(d) => BigInt::from(d),
        Err(o) => return o,
    };
    let n = match require(&cfg.n, "n") {
        Ok(n) => n,
        Err(o) => return o,
    };
    let unit = match fundamental_unit(&d) {
        Ok(u) => u,
        Err(e) => return from_error(&e),
    };
    let reps = match solve_bounded(&d, &n) {
        Ok(r) => r,
        Err(e) => return from_error(&e),
    };
    let text = match cfg.format {
        Format::Table => {
            let mut s = String::new();
            let _ = writeln!(s, "# u^2 - {d} w^2 = {n}");
            let _ = writeln!(s, "unit            ({}, {})", unit.u, unit.w);
            if reps.is_empty() {
                let _ = writeln!(s, "no solutions");
            }
            for r in &reps {
                let _ = writeln!(s, "representative  ({}, {})", r.u, r.w);
            }
            s
        }
        Format::Json => {
            let reps: Vec<Value> = reps
                .iter()
                .map(|r| json!({ "u": big(&r.u), "w": big(&r.w) }))
                .collect();
            let doc = json!({
                "d": big(&d),
                "n": big(&n),
                "unit": { "u": big(&unit.u), "w": big(&unit.w) },
                "representatives": reps,
            });
            serde_json::to_string_pretty(&doc).expect("value serializes") + "\n"
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["kind", "d", "n", "u", "w"])
                .expect("in-memory write");
            let (ds, ns) = (d.to_string(), n.to_string());
            w.write_record(["unit", &ds, "1", &unit.u.to_string(), &unit.w.to_string()])
                .expect("in-memory write");
            for r in &reps {
                w.write_record([
                    "representative",
                    &ds,
                    &ns,
                    &r.u.to_string(),
                    &r.w.to_string(),
                ])
                .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
        }
    };
    Outcome::ok(text)
}

fn hilbert_from_input(cfg: &RunConfig, path: &PathBuf) -> Result<Vec<Witness>, Outcome> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Outcome::fail(
            EXIT_USAGE,
            format!("error: cannot read {}: {e}\n", path.display()),
        )
    })?;
    let doc = Document::from_json(&text)
        .map_err(|e| Outcome::fail(EXIT_USAGE, format!("error: {}: {e}\n", path.display())))?;
    let q = &doc.query;
    let query = FamilyQuery::new(q.g, q.r, q.s, Sign::Plus, q.tilde);
    doc.witnesses
        .iter()
        .map(|rec| rec.to_witness(&query, cfg.x_threshold.clone()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| from_error(&e))
}

fn hilbert_from_coordinates(cfg: &RunConfig) -> Result<Vec<Witness>, Outcome> {
    let qs = queries(cfg)?;
    if qs.len() != 1 {
        return Err(Outcome::fail(
            EXIT_USAGE,
            "error: hilbert needs --sign plus or --sign minus\n",
        ));
    }
    let q = qs[0];
    let (d, mu) = (require(&cfg.d, "d")?, require(&cfg.mu, "mu")?);
    let (x, y) = (require(&cfg.x, "x")?, require(&cfg.y, "y")?);
    let lattice = make_lattice(q.g, d, mu).map_err(|e| from_error(&e))?;
    lattice
        .divisor(x.clone(), y.clone())
        .map_err(|e| from_error(&e))?;
    let (a, _) = q.ranks();
    let f = (&x * a + lattice.degree(), &y * a);
    let threshold = cfg
        .x_threshold
        .clone()
        .unwrap_or_else(|| q.equation(lattice).default_x_threshold());
    Ok(vec![Witness::assemble(q, lattice, (x, y), f, threshold)])
}

pub fn cmd_hilbert(cfg: &RunConfig) -> Outcome {
    let ws = match &cfg.input {
        Some(path) => hilbert_from_input(cfg, path),
        None => hilbert_from_coordinates(cfg),
    };
    let ws = match ws {
        Ok(ws) => ws,
        Err(o) => return o,
    };
    let rows: Vec<BTreeMap<&str, Value>> = ws
        .iter()
        .map(|w| {
            let r = &w.report;
            BTreeMap::from([
                ("d", json!(w.d())),
                ("mu", json!(w.mu())),
                ("sign", json!(w.sign())),
                ("n", json!(w.query.hilbert_length())),
                ("eps", json!(w.eps())),
                ("q", big(&r.bb_square.computed)),
                ("q_expected", big(&r.bb_square.expected)),
                ("b", big(&r.bb_pairing.computed)),
                ("b_expected", big(&r.bb_pairing.expected)),
                ("b_modulus", json!(w.lattice.degree())),
                ("passed", json!(r.bb_square.passed && r.bb_pairing.passed)),
            ])
        })
        .collect();
    let text = match cfg.format {
        Format::Json => serde_json::to_string_pretty(&rows).expect("value serializes") + "\n",
        Format::Table | Format::Csv => {
            let sep = if cfg.format == Format::Csv { "," } else { "  " };
            let keys = [
                "d",
                "mu",
                "sign",
                "n",
                "eps",
                "q",
                "q_expected",
                "b",
                "b_expected",
                "b_modulus",
                "passed",
            ];
            let mut s = keys.join(sep) + "\n";
            for row in &rows {
                let cells: Vec<String> = keys
                    .iter()
                    .map(|k| match &row[k] {
                        Value::String(v) => v.clone(),
                        other => other.to_string(),
                    })
                    .collect();
                s += &(cells.join(sep) + "\n");
            }
            s
        }
    };
    let all = ws
        .iter()
        .all(|w| w.report.bb_square.passed && w.report.bb_pairing.passed);
    let mut out = Outcome::ok(text);
    if !all {
        out.code = EXIT_REJECTED;
        out =
            out.with_note("the supplied class does not satisfy the Beauville-Bogomolov identities");
    }
    out
}

pub fn cmd_selfcheck(cfg: &RunConfig) -> Outcome {
    let reports = run_selfcheck(cfg.seed, cfg.iterations, cfg.inject_fault);
    let mut s = String::new();
    let _ = writeln!(s, "seed {:#x}, {} iterations", cfg.seed, cfg.iterations);
    for r in &reports {
        let _ = writeln!(
            s,
            "{:<20} {:<4} {} cases, {} failed",
            r.name,
            if r.passed() { "PASS" } else { "FAIL" },
            r.cases,
            r.failed
        );
        for f in &r.failures {
            let _ = writeln!(s, "    {f}");
        }
    }
    let mut out = Outcome::ok(s);
    if reports.iter().any(|r| !r.passed()) {
        out.code = EXIT_INTERNAL;
    }
    out
}
