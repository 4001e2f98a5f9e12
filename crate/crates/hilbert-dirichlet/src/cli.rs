//! Command-line front end: config parsing, command dispatch, table and
//! report emission.
//!
//! Commands: `weights report`, `symbol bnorm`, `symbol blocks`,
//! `operator matrix`, `operator schatten`, `hilbert norm`,
//! `verify <suite|all>`. Exit codes: 0 success/pass, 1 assertion failure,
//! 2 usage/config error, 3 numerical non-convergence.
//!
//! A config file supplies defaults in a sectioned key-value format
//! (`[weights]`, `[symbols]`, `[sweep]`, `[tolerances]`, `[output]`);
//! command-line flags override it, and `--dump-config` prints the
//! effective configuration in the same format so a run can be reproduced
//! from its own dump.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::error::Error;
use crate::operators::{hg_matrix, hilbert_discretized, phi_probe};
use crate::quadrature::DivergenceVerdict;
use crate::schatten::{sweep, RatioEntry, SpectrumCache};
use crate::symbols::{BnormMethod, BnormOutcome, Symbol};
use crate::verify::{self, fmt_f64, Report, Suite, SuiteId, Tolerances};
use crate::weights::{Precision, RadialWeight};

#[derive(Parser, Debug)]
#[command(
    name = "hilbert-dirichlet",
    version,
    about = "Generalized Hilbert operators on weighted Dirichlet spaces: weight conditions, symbol norms, truncated spectra, verification suites"
)]
pub struct Cli {
    /// Config file with [weights], [symbols], [sweep], [tolerances], [output].
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Print the effective configuration and exit.
    #[arg(long, global = true)]
    pub dump_config: bool,

    /// Output format: plain, csv or json.
    #[arg(long, global = true)]
    pub format: Option<String>,

    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Floating-point mode for moments: double or extended.
    #[arg(long, global = true)]
    pub precision: Option<String>,

    /// Geometric grid depth for condition evaluations.
    #[arg(long, global = true)]
    pub depth: Option<usize>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Weight-side reports.
    Weights {
        #[command(subcommand)]
        cmd: WeightsCmd,
    },
    /// Symbol-side norms and block profiles.
    Symbol {
        #[command(subcommand)]
        cmd: SymbolCmd,
    },
    /// Truncated operator matrices and Schatten sweeps.
    Operator {
        #[command(subcommand)]
        cmd: OperatorCmd,
    },
    /// The classical Hilbert operator on the radial space.
    Hilbert {
        #[command(subcommand)]
        cmd: HilbertCmd,
    },
    /// Run a named verification suite, or all of them.
    Verify {
        /// Suite name or "all".
        suite: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum WeightsCmd {
    /// Doubling, M1-M4 and well-definedness verdicts for each weight.
    Report {
        /// Weight spec (std:<a>, bergman:<base>, exp:<c>:<g>, table:<path>); repeatable.
        #[arg(long)]
        weight: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum SymbolCmd {
    /// B(2,p) norm of a symbol by the block or integral route.
    Bnorm {
        #[arg(long)]
        symbol: Option<String>,
        /// Exponent p (finite or "inf").
        #[arg(long)]
        p: Option<String>,
        /// blocks or integral.
        #[arg(long)]
        method: Option<String>,
        /// Largest dyadic block for the blocks method.
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Dyadic block profile B_n.
    Blocks {
        #[arg(long)]
        symbol: Option<String>,
        #[arg(long)]
        nmax: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum OperatorCmd {
    /// Assemble the truncated matrix of H_g and emit it with diagnostics.
    Matrix {
        #[arg(long)]
        weight: Option<String>,
        #[arg(long)]
        symbol: Option<String>,
        #[arg(long = "N")]
        n: Option<usize>,
    },
    /// Sweep S_p norms of nested truncations against matched block norms.
    Schatten {
        #[arg(long)]
        weight: Option<String>,
        #[arg(long)]
        symbol: Option<String>,
        /// Comma-separated exponents, e.g. 1,2,inf.
        #[arg(long)]
        p: Option<String>,
        /// Comma-separated truncation sizes, e.g. 64,256,1024.
        #[arg(long = "N")]
        n: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum HilbertCmd {
    /// Norm estimate of the classical Hilbert operator: discretized top
    /// singular value plus probe lower bounds.
    Norm {
        #[arg(long)]
        weight: Option<String>,
        #[arg(long = "D")]
        d: Option<usize>,
        #[arg(long = "J")]
        j: Option<usize>,
        /// Comma-separated probe radii.
        #[arg(long)]
        probes: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Plain,
    Csv,
    Json,
}

impl OutputFormat {
    fn parse(s: &str) -> Result<Self, Error> {
        match s {
            "plain" => Ok(OutputFormat::Plain),
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!(
                "unknown output format '{other}' (expected plain, csv or json)"
            ))),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            OutputFormat::Plain => "plain",
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// The effective configuration: file values overridden by flags, with all
/// defaults centralized here.
#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub weights: Vec<String>,
    pub symbols: Vec<String>,
    pub p_list: Vec<f64>,
    pub n_list: Vec<usize>,
    pub depth: usize,
    pub tolerances: Tolerances,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub precision: Precision,
    pub threads: Option<usize>,
}

impl PartialEq for Tolerances {
    fn eq(&self, other: &Self) -> bool {
        self.ratio_drift == other.ratio_drift
            && self.family_spread == other.family_spread
            && self.hs_identity_rel == other.hs_identity_rel
            && self.parseval == other.parseval
            && self.m_at_one == other.m_at_one
            && self.sandwich_drift == other.sandwich_drift
            && self.r2_min == other.r2_min
            && self.bergman_spread == other.bergman_spread
    }
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            weights: vec!["std:1".into()],
            symbols: vec!["pow:0.75".into()],
            p_list: vec![1.0, 2.0, f64::INFINITY],
            n_list: vec![64, 256, 1024],
            depth: 20,
            tolerances: Tolerances::default(),
            format: OutputFormat::Plain,
            out: None,
            precision: Precision::Double,
            threads: None,
        }
    }
}

impl CliConfig {
    /// Parses the sectioned key-value config format. Unknown sections or
    /// keys are rejected.
    pub fn parse(text: &str) -> Result<CliConfig, Error> {
        let mut cfg = CliConfig::default();
        let mut weights: Vec<String> = Vec::new();
        let mut symbols: Vec<String> = Vec::new();
        let mut section = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = name.trim().to_string();
                match section.as_str() {
                    "weights" | "symbols" | "sweep" | "tolerances" | "output" => {}
                    other => {
                        return Err(Error::Config(format!(
                            "unknown config section [{other}] on line {}",
                            lineno + 1
                        )))
                    }
                }
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("expected key = value on line {}", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad_key = || {
                Error::Config(format!(
                    "unknown key '{key}' in section [{section}] on line {}",
                    lineno + 1
                ))
            };
            let bad_value =
                |what: &str| Error::Config(format!("bad {what} '{value}' on line {}", lineno + 1));
            match (section.as_str(), key) {
                ("weights", "weight") => weights.push(value.to_string()),
                ("symbols", "symbol") => symbols.push(value.to_string()),
                ("sweep", "p") => cfg.p_list = parse_p_list(value)?,
                ("sweep", "N") => {
                    cfg.n_list = value
                        .split(',')
                        .map(|t| t.trim().parse::<usize>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| bad_value("N list"))?;
                }
                ("sweep", "depth") => {
                    cfg.depth = value.parse().map_err(|_| bad_value("depth"))?;
                }
                ("tolerances", "ratio_drift") => {
                    cfg.tolerances.ratio_drift = value.parse().map_err(|_| bad_value("tolerance"))?;
                }
                ("tolerances", "family_spread") => {
                    cfg.tolerances.family_spread =
                        value.parse().map_err(|_| bad_value("tolerance"))?;
                }
                ("tolerances", "hs_identity_rel") => {
                    cfg.tolerances.hs_identity_rel =
                        value.parse().map_err(|_| bad_value("tolerance"))?;
                }
                ("tolerances", "parseval") => {
                    cfg.tolerances.parseval = value.parse().map_err(|_| bad_value("tolerance"))?;
                }
                ("tolerances", "m_at_one") => {
                    cfg.tolerances.m_at_one = value.parse().map_err(|_| bad_value("tolerance"))?;
                }
                ("tolerances", "sandwich_drift") => {
                    cfg.tolerances.sandwich_drift =
                        value.parse().map_err(|_| bad_value("tolerance"))?;
                }
                ("tolerances", "r2_min") => {
                    cfg.tolerances.r2_min = value.parse().map_err(|_| bad_value("tolerance"))?;
                }
                ("tolerances", "bergman_spread") => {
                    cfg.tolerances.bergman_spread =
                        value.parse().map_err(|_| bad_value("tolerance"))?;
                }
                ("output", "format") => cfg.format = OutputFormat::parse(value)?,
                ("output", "path") => cfg.out = Some(PathBuf::from(value)),
                ("output", "precision") => {
                    cfg.precision = match value {
                        "double" => Precision::Double,
                        "extended" => Precision::Extended,
                        _ => return Err(bad_value("precision")),
                    };
                }
                ("output", "threads") => {
                    cfg.threads = Some(value.parse().map_err(|_| bad_value("threads"))?);
                }
                _ => return Err(bad_key()),
            }
        }
        if !weights.is_empty() {
            cfg.weights = weights;
        }
        if !symbols.is_empty() {
            cfg.symbols = symbols;
        }
        Ok(cfg)
    }

    /// Emits the configuration in the config-file format; parsing the dump
    /// reproduces the configuration exactly.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "[weights]");
        for w in &self.weights {
            let _ = writeln!(s, "weight = {w}");
        }
        let _ = writeln!(s, "\n[symbols]");
        for g in &self.symbols {
            let _ = writeln!(s, "symbol = {g}");
        }
        let _ = writeln!(s, "\n[sweep]");
        let ps: Vec<String> = self.p_list.iter().map(|p| fmt_p(*p)).collect();
        let _ = writeln!(s, "p = {}", ps.join(","));
        let ns: Vec<String> = self.n_list.iter().map(|n| n.to_string()).collect();
        let _ = writeln!(s, "N = {}", ns.join(","));
        let _ = writeln!(s, "depth = {}", self.depth);
        let _ = writeln!(s, "\n[tolerances]");
        let t = &self.tolerances;
        let _ = writeln!(s, "ratio_drift = {}", t.ratio_drift);
        let _ = writeln!(s, "family_spread = {}", t.family_spread);
        let _ = writeln!(s, "hs_identity_rel = {}", t.hs_identity_rel);
        let _ = writeln!(s, "parseval = {}", t.parseval);
        let _ = writeln!(s, "m_at_one = {}", t.m_at_one);
        let _ = writeln!(s, "sandwich_drift = {}", t.sandwich_drift);
        let _ = writeln!(s, "r2_min = {}", t.r2_min);
        let _ = writeln!(s, "bergman_spread = {}", t.bergman_spread);
        let _ = writeln!(s, "\n[output]");
        let _ = writeln!(s, "format = {}", self.format.name());
        if let Some(path) = &self.out {
            let _ = writeln!(s, "path = {}", path.display());
        }
        let _ = writeln!(
            s,
            "precision = {}",
            match self.precision {
                Precision::Double => "double",
                Precision::Extended => "extended",
            }
        );
        if let Some(t) = self.threads {
            let _ = writeln!(s, "threads = {t}");
        }
        s
    }
}

fn fmt_p(p: f64) -> String {
    if p.is_infinite() {
        "inf".into()
    } else {
        format!("{p}")
    }
}

fn parse_p_list(text: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            if t == "inf" {
                Ok(f64::INFINITY)
            } else {
                t.parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad exponent '{t}'")))
            }
        })
        .collect()
}

/// Entry point used by the binary: parses argv, runs the command, and maps
/// every outcome to its exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version with its own success exits.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::InvalidInput(_) | Error::HypothesisNotMet { .. } => 2,
                Error::AccuracyNotReached { .. }
                | Error::NonConvergence(_)
                | Error::Underflow { .. }
                | Error::NonFiniteIntegrand { .. } => 3,
                _ => 2,
            }
        }
    }
}

fn execute(cli: Cli) -> Result<i32, Error> {
    // File config, then flag overrides.
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
            CliConfig::parse(&text)?
        }
        None => CliConfig::default(),
    };
    if let Some(f) = &cli.format {
        cfg.format = OutputFormat::parse(f)?;
    }
    if let Some(out) = &cli.out {
        cfg.out = Some(out.clone());
    }
    if let Some(t) = cli.threads {
        cfg.threads = Some(t);
    }
    if let Some(p) = &cli.precision {
        cfg.precision = match p.as_str() {
            "double" => Precision::Double,
            "extended" => Precision::Extended,
            other => return Err(Error::Config(format!("unknown precision '{other}'"))),
        };
    }
    if let Some(d) = cli.depth {
        cfg.depth = d;
    }

    if let Some(threads) = cfg.threads {
        // The pool can only be installed once per process; later calls are
        // harmless no-ops.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }

    if cli.dump_config {
        emit(&cfg, cfg.dump())?;
        return Ok(0);
    }

    let Some(command) = cli.command else {
        return Err(Error::Config(
            "no command given; see --help for the command list".into(),
        ));
    };

    match command {
        Command::Weights { cmd } => weights_cmd(cmd, &cfg),
        Command::Symbol { cmd } => symbol_cmd(cmd, &cfg),
        Command::Operator { cmd } => operator_cmd(cmd, &cfg),
        Command::Hilbert { cmd } => hilbert_cmd(cmd, &cfg),
        Command::Verify { suite } => verify_cmd(&suite, &cfg),
    }
}

fn emit(cfg: &CliConfig, text: String) -> Result<(), Error> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_weight(spec: &str, cfg: &CliConfig) -> Result<RadialWeight, Error> {
    Ok(RadialWeight::parse(spec)?.with_precision(cfg.precision))
}

fn weights_cmd(cmd: WeightsCmd, cfg: &CliConfig) -> Result<i32, Error> {
    let WeightsCmd::Report { weight } = cmd;
    let specs = if weight.is_empty() { cfg.weights.clone() } else { weight };
    let mut rows = Vec::new();
    for spec in &specs {
        let w = load_weight(spec, cfg)?;
        let report = w.condition_report(cfg.depth)?;
        rows.push((spec.clone(), report));
    }

    match cfg.format {
        OutputFormat::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|(spec, r)| {
                    json!({
                        "weight": spec,
                        "grid_depth": r.grid_depth,
                        "doubling": {
                            "verdict": r.doubling.verdict,
                            "sup_ratio": r.doubling.sup_ratio,
                            "beta_estimate": r.doubling.beta_estimate,
                            "beta_residual": r.doubling.beta_residual,
                        },
                        "m1": { "verdict": r.m1.verdict.to_string(), "value": r.m1.value },
                        "m2": { "verdict": r.m2.verdict.to_string(), "value": r.m2.value },
                        "m3": { "verdict": r.m3.verdict.to_string(), "value": r.m3.value },
                        "m4": { "verdict": r.m4.verdict.to_string(), "value": r.m4.value },
                        "welldef": {
                            "verdict": welldef_name(&r.welldef),
                            "value": r.welldef.finite_value(),
                        },
                    })
                })
                .collect();
            emit(cfg, format!("{:#}\n", json!({ "weights": items })))?;
        }
        OutputFormat::Csv => {
            let mut out = String::from(
                "weight,doubling,sup_ratio,beta,m1,m1_value,m2,m2_value,m3,m3_value,m4,m4_value,welldef\n",
            );
            for (spec, r) in &rows {
                let _ = writeln!(
                    out,
                    "{spec},{},{},{},{},{},{},{},{},{},{},{},{}",
                    r.doubling.verdict,
                    fmt_f64(r.doubling.sup_ratio),
                    fmt_f64(r.doubling.beta_estimate),
                    r.m1.verdict,
                    fmt_f64(r.m1.value),
                    r.m2.verdict,
                    fmt_f64(r.m2.value),
                    r.m3.verdict,
                    fmt_f64(r.m3.value),
                    r.m4.verdict,
                    fmt_f64(r.m4.value),
                    welldef_name(&r.welldef),
                );
            }
            emit(cfg, out)?;
        }
        OutputFormat::Plain => {
            let mut out = String::new();
            for (spec, r) in &rows {
                let _ = writeln!(out, "weight {spec} (grid depth {})", r.grid_depth);
                let _ = writeln!(
                    out,
                    "  doubling: {} (sup ratio {:.6}, beta {:.4})",
                    if r.doubling.verdict { "yes" } else { "no" },
                    r.doubling.sup_ratio,
                    r.doubling.beta_estimate
                );
                for (name, c) in [("M1", &r.m1), ("M2", &r.m2), ("M3", &r.m3), ("M4", &r.m4)] {
                    let _ = writeln!(out, "  {name}: {} ({:.6})", c.verdict, c.value);
                }
                let _ = writeln!(out, "  well-definedness integral: {}", welldef_name(&r.welldef));
            }
            emit(cfg, out)?;
        }
    }
    Ok(0)
}

fn welldef_name(v: &DivergenceVerdict) -> &'static str {
    match v {
        DivergenceVerdict::Finite { .. } => "finite",
        DivergenceVerdict::Diverging { .. } => "infinite",
        DivergenceVerdict::Indeterminate { .. } => "indeterminate",
    }
}

fn symbol_cmd(cmd: SymbolCmd, cfg: &CliConfig) -> Result<i32, Error> {
    match cmd {
        SymbolCmd::Bnorm {
            symbol,
            p,
            method,
            nmax,
        } => {
            let spec = symbol.unwrap_or_else(|| cfg.symbols[0].clone());
            let g = Symbol::parse(&spec)?;
            let p = match p {
                Some(t) => parse_p_list(&t)?,
                None => cfg.p_list.clone(),
            };
            let method_name = method.unwrap_or_else(|| "blocks".into());
            let mut rows = Vec::new();
            for &pv in &p {
                let m = match method_name.as_str() {
                    "blocks" => BnormMethod::Blocks {
                        n_max: nmax.unwrap_or(16),
                    },
                    "integral" => BnormMethod::Integral {
                        depth: cfg.depth.min(14),
                    },
                    other => {
                        return Err(Error::Config(format!(
                            "unknown bnorm method '{other}' (expected blocks or integral)"
                        )))
                    }
                };
                rows.push((pv, g.bnorm(pv, &m)?));
            }
            let render = |o: &BnormOutcome| match o {
                BnormOutcome::Finite { value, partial, tail_estimate } => {
                    json!({ "outcome": "finite", "value": value, "partial": partial, "tail_estimate": tail_estimate })
                }
                BnormOutcome::Diverging { partials, note } => {
                    json!({ "outcome": "diverging", "note": note, "partials": partials })
                }
                BnormOutcome::Indeterminate { partials } => {
                    json!({ "outcome": "indeterminate", "partials": partials })
                }
            };
            match cfg.format {
                OutputFormat::Json => {
                    let items: Vec<Value> = rows
                        .iter()
                        .map(|(pv, o)| json!({ "p": fmt_p(*pv), "result": render(o) }))
                        .collect();
                    emit(cfg, format!("{:#}\n", json!({ "symbol": spec, "method": method_name, "bnorm": items })))?;
                }
                OutputFormat::Csv => {
                    let mut out = String::from("symbol,method,p,outcome,value\n");
                    for (pv, o) in &rows {
                        let (outcome, value) = match o {
                            BnormOutcome::Finite { value, .. } => ("finite", fmt_f64(*value)),
                            BnormOutcome::Diverging { partials, .. } => {
                                ("diverging", fmt_f64(*partials.last().unwrap_or(&f64::NAN)))
                            }
                            BnormOutcome::Indeterminate { .. } => ("indeterminate", String::new()),
                        };
                        let _ = writeln!(out, "{spec},{method_name},{},{outcome},{value}", fmt_p(*pv));
                    }
                    emit(cfg, out)?;
                }
                OutputFormat::Plain => {
                    let mut out = String::new();
                    for (pv, o) in &rows {
                        match o {
                            BnormOutcome::Finite { value, .. } => {
                                let _ = writeln!(out, "B(2,{}) of {spec} [{}]: {:.12}", fmt_p(*pv), method_name, value);
                            }
                            BnormOutcome::Diverging { note, .. } => {
                                let _ = writeln!(out, "B(2,{}) of {spec} [{}]: diverging ({note})", fmt_p(*pv), method_name);
                            }
                            BnormOutcome::Indeterminate { .. } => {
                                let _ = writeln!(out, "B(2,{}) of {spec} [{}]: indeterminate", fmt_p(*pv), method_name);
                            }
                        }
                    }
                    emit(cfg, out)?;
                }
            }
            Ok(0)
        }
        SymbolCmd::Blocks { symbol, nmax } => {
            let spec = symbol.unwrap_or_else(|| cfg.symbols[0].clone());
            let g = Symbol::parse(&spec)?;
            let profile = g.block_profile(nmax.unwrap_or(14))?;
            match cfg.format {
                OutputFormat::Json => {
                    emit(cfg, format!("{:#}\n", json!({ "symbol": spec, "blocks": profile.values })))?;
                }
                OutputFormat::Csv => {
                    let mut out = String::from("symbol,n,B_n\n");
                    for (n, b) in profile.values.iter().enumerate() {
                        let _ = writeln!(out, "{spec},{n},{}", fmt_f64(*b));
                    }
                    emit(cfg, out)?;
                }
                OutputFormat::Plain => {
                    let mut out = format!("block profile of {spec}\n");
                    for (n, b) in profile.values.iter().enumerate() {
                        let _ = writeln!(out, "  B_{n} = {b:.12e}");
                    }
                    emit(cfg, out)?;
                }
            }
            Ok(0)
        }
    }
}

fn operator_cmd(cmd: OperatorCmd, cfg: &CliConfig) -> Result<i32, Error> {
    match cmd {
        OperatorCmd::Matrix { weight, symbol, n } => {
            let wspec = weight.unwrap_or_else(|| cfg.weights[0].clone());
            let gspec = symbol.unwrap_or_else(|| cfg.symbols[0].clone());
            let w = load_weight(&wspec, cfg)?;
            let g = Symbol::parse(&gspec)?;
            let n = n.unwrap_or_else(|| cfg.n_list.first().copied().unwrap_or(64));
            let m = hg_matrix(&w, &g, n)?;
            match cfg.format {
                OutputFormat::Json => {
                    let rows: Vec<Vec<f64>> =
                        (0..m.n_rows()).map(|j| m.row(j).to_vec()).collect();
                    emit(cfg, format!(
                        "{:#}\n",
                        json!({
                            "weight": wspec, "symbol": gspec, "N": n,
                            "basis": m.basis,
                            "row_tail_fraction": m.diagnostics.row_tail_fraction,
                            "entries": rows,
                        })
                    ))?;
                }
                OutputFormat::Csv => {
                    let mut out = format!(
                        "# weight={wspec} symbol={gspec} N={n} basis={} row_tail_fraction={}\n",
                        m.basis,
                        fmt_f64(m.diagnostics.row_tail_fraction)
                    );
                    for j in 0..m.n_rows() {
                        let cells: Vec<String> = m.row(j).iter().map(|e| fmt_f64(*e)).collect();
                        let _ = writeln!(out, "{}", cells.join(","));
                    }
                    emit(cfg, out)?;
                }
                OutputFormat::Plain => {
                    let mut out = format!(
                        "H_g truncation: weight {wspec}, symbol {gspec}, N = {n}\n\
                         Frobenius norm {:.12}, dropped-row mass fraction {:.3e}\n",
                        m.frobenius_sq().sqrt(),
                        m.diagnostics.row_tail_fraction
                    );
                    let show = n.min(6);
                    for j in 0..show {
                        let cells: Vec<String> =
                            m.row(j)[..show].iter().map(|e| format!("{e:+.6e}")).collect();
                        let _ = writeln!(out, "  {}", cells.join(" "));
                    }
                    if n > show {
                        let _ = writeln!(out, "  ... ({n} x {n} total)");
                    }
                    emit(cfg, out)?;
                }
            }
            Ok(0)
        }
        OperatorCmd::Schatten { weight, symbol, p, n } => {
            let wspec = weight.unwrap_or_else(|| cfg.weights[0].clone());
            let gspec = symbol.unwrap_or_else(|| cfg.symbols[0].clone());
            let w = load_weight(&wspec, cfg)?;
            let g = Symbol::parse(&gspec)?;
            let p_list = match p {
                Some(t) => parse_p_list(&t)?,
                None => cfg.p_list.clone(),
            };
            let n_list: Vec<usize> = match n {
                Some(t) => t
                    .split(',')
                    .map(|x| x.trim().parse::<usize>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| Error::Config(format!("bad N list '{t}'")))?,
                None => cfg.n_list.clone(),
            };
            let cache = SpectrumCache::new();
            let table = sweep(&w, &g, &p_list, &n_list, &cache, 1e-12)?;
            let ratio_cell = |r: &RatioEntry| -> (String, String) {
                match r {
                    RatioEntry::Ratio(v) => ("ratio".into(), fmt_f64(*v)),
                    RatioEntry::DivergingSymbolNorm { b_partial, .. } => {
                        ("diverging-bnorm".into(), fmt_f64(*b_partial))
                    }
                    RatioEntry::Indeterminate => ("indeterminate".into(), String::new()),
                }
            };
            match cfg.format {
                OutputFormat::Json => {
                    let rows: Vec<Value> = table
                        .rows
                        .iter()
                        .map(|r| {
                            let (kind, val) = ratio_cell(&r.ratio);
                            json!({
                                "N": r.n, "p": fmt_p(r.p), "s_p": r.s_p,
                                "b_norm": r.b_norm, "ratio_kind": kind, "ratio": val,
                                "rel_change": r.rel_change,
                                "ratio_rel_change": r.ratio_rel_change,
                            })
                        })
                        .collect();
                    emit(cfg, format!(
                        "{:#}\n",
                        json!({
                            "weight": table.weight_id,
                            "symbol": table.symbol_id,
                            "outside_hypotheses": table.outside_hypotheses,
                            "rows": rows,
                        })
                    ))?;
                }
                OutputFormat::Csv | OutputFormat::Plain => {
                    let mut out = String::from(
                        "weight,symbol,p,N,s_p,b_norm,ratio_kind,ratio,rel_change,ratio_rel_change,outside_hypotheses\n",
                    );
                    for r in &table.rows {
                        let (kind, val) = ratio_cell(&r.ratio);
                        let _ = writeln!(
                            out,
                            "{},{},{},{},{},{},{kind},{val},{},{},{}",
                            table.weight_id,
                            table.symbol_id,
                            fmt_p(r.p),
                            r.n,
                            fmt_f64(r.s_p),
                            r.b_norm.map(fmt_f64).unwrap_or_default(),
                            r.rel_change.map(fmt_f64).unwrap_or_default(),
                            r.ratio_rel_change.map(fmt_f64).unwrap_or_default(),
                            table.outside_hypotheses,
                        );
                    }
                    emit(cfg, out)?;
                }
            }
            Ok(0)
        }
    }
}

fn hilbert_cmd(cmd: HilbertCmd, cfg: &CliConfig) -> Result<i32, Error> {
    let HilbertCmd::Norm {
        weight,
        d,
        j,
        probes,
    } = cmd;
    let wspec = weight.unwrap_or_else(|| cfg.weights[0].clone());
    let w = load_weight(&wspec, cfg)?;
    let d = d.unwrap_or(64);
    let j = j.unwrap_or(d);
    let probe_radii: Vec<f64> = match probes {
        Some(t) => t
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| Error::Config(format!("bad probe list '{t}'")))?,
        None => vec![0.5, 0.9, 0.99, 0.999],
    };

    let m = hilbert_discretized(&w, d, j)?;
    let cache = SpectrumCache::new();
    let s = cache.get_or_compute(&m.weight_id, &format!("hilbert-D{d}-J{j}"), &m, 1e-12)?;
    let top = s.values[0];
    let mut probe_rows = Vec::new();
    for r in &probe_radii {
        probe_rows.push((*r, phi_probe(&w, *r)?.value));
    }
    let hyp = w.hypotheses();
    let lower = probe_rows.iter().map(|p| p.1).fold(top, f64::max);

    match cfg.format {
        OutputFormat::Json => {
            emit(cfg, format!(
                "{:#}\n",
                json!({
                    "weight": wspec, "D": d, "J": j,
                    "top_singular_value": top,
                    "probes": probe_rows.iter().map(|(r, v)| json!({"r": r, "value": v})).collect::<Vec<_>>(),
                    "norm_lower_estimate": lower,
                    "m1": hyp.m1_value, "m2": hyp.m2_value,
                    "ceiling_shape": 10.0 * hyp.m1_value * hyp.m2_value,
                })
            ))?;
        }
        OutputFormat::Csv => {
            let mut out = String::from("weight,quantity,param,value\n");
            let _ = writeln!(out, "{wspec},top_singular_value,D={d}:J={j},{}", fmt_f64(top));
            for (r, v) in &probe_rows {
                let _ = writeln!(out, "{wspec},phi_probe,{r},{}", fmt_f64(*v));
            }
            let _ = writeln!(out, "{wspec},norm_lower_estimate,,{}", fmt_f64(lower));
            let _ = writeln!(out, "{wspec},m1,,{}", fmt_f64(hyp.m1_value));
            let _ = writeln!(out, "{wspec},m2,,{}", fmt_f64(hyp.m2_value));
            emit(cfg, out)?;
        }
        OutputFormat::Plain => {
            let mut out = format!(
                "Hilbert operator estimate for {wspec} (D = {d}, J = {j})\n\
                 top singular value: {top:.9}\n"
            );
            for (r, v) in &probe_rows {
                let _ = writeln!(out, "  probe at r = {r}: {v:.9}");
            }
            let _ = writeln!(
                out,
                "norm lower estimate: {lower:.9}; sandwich shape: M2/M1 = {:.6}, 10 M1 M2 = {:.6}",
                hyp.m2_value / hyp.m1_value,
                10.0 * hyp.m1_value * hyp.m2_value
            );
            emit(cfg, out)?;
        }
    }
    Ok(0)
}

fn verify_cmd(suite: &str, cfg: &CliConfig) -> Result<i32, Error> {
    let cache = SpectrumCache::new();
    let report: Report = if suite == "all" {
        verify::run_all(&cache)?
    } else {
        let id = SuiteId::parse(suite)?;
        Report {
            suites: vec![verify::run_suite(&Suite::default_for(id), &cache)?],
        }
    };

    let text = match cfg.format {
        OutputFormat::Json => format!("{:#}\n", report.to_json()),
        OutputFormat::Csv => report.to_csv(),
        OutputFormat::Plain => {
            let mut out = String::new();
            for s in &report.suites {
                let _ = writeln!(out, "suite {}", s.suite);
                for sc in &s.scenarios {
                    let _ = writeln!(out, "  scenario {}", sc.name);
                    for a in &sc.assertions {
                        let v = a.value.map(|v| format!(" value={v:.6e}")).unwrap_or_default();
                        let b = a.bound.map(|b| format!(" bound={b:.6e}")).unwrap_or_default();
                        let _ = writeln!(out, "    [{}] {}{v}{b} ({})", a.verdict, a.name, a.anchor);
                    }
                }
                let _ = writeln!(
                    out,
                    "  -> {} failed, {} indeterminate",
                    s.failed(),
                    s.indeterminate()
                );
            }
            out
        }
    };
    emit(cfg, text)?;

    let clean = report
        .suites
        .iter()
        .all(|s| s.failed() == 0 && s.indeterminate() == 0);
    Ok(if clean { 0 } else { 1 })
}
