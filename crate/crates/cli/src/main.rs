use std::fmt::Write as _;
use std::fs;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pnpoly::matrix::MatrixQ;
use pnpoly::membership::{classify, ConditionEntry, Verdict};
use pnpoly::rational::{self, Rational};
use pnpoly::residue::residue_decompose;
use pnpoly::selftest::{self, SelfTestRow};
use pnpoly::spectra::{circulant_spectrum, parse_reference_vector, spectral_report, SpectralReport, SpectrumList};
use pnpoly::witness::{circulant_witness, jordan_witness, search, SearchConfig, Witness, WitnessResult};
use pnpoly::Poly;
use serde::{Deserialize, Serialize};

const EXIT_OK: u8 = 0;
const EXIT_NON_MEMBER: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_NOT_FOUND: u8 = 3;
const EXIT_USAGE: u8 = 64;

/// Membership tests and counterexample search for polynomials that map
/// nonnegative matrices to nonnegative matrices.
#[derive(Parser, Debug)]
#[command(name = "pnpoly", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Split p into its residue parts modulo n.
    Decompose,
    /// Classify p for order n (member, non-member or unknown).
    Check,
    /// Look for a structured witness (scaled circulant or Jordan block).
    Witness {
        #[arg(long, value_enum, default_value_t = Kind::Any)]
        kind: Kind,
    },
    /// Seeded random and gradient-descent counterexample search.
    Search,
    /// Trace and J-LL checks on a spectrum.
    Spectrum {
        /// Spectrum as JSON, e.g. '[[2,0],[-1,0],[-1,0]]'.
        #[arg(long, conflicts_with = "circ")]
        spectrum: Option<String>,
        /// Reference vector "v1,v2,..." of a circulant whose spectrum is used.
        #[arg(long)]
        circ: Option<String>,
        #[arg(long, default_value_t = 4)]
        k: u32,
        #[arg(long, default_value_t = 4)]
        m: u32,
    },
    /// Run the quick invariant suite.
    Selftest,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Any,
    Circulant,
    Jordan,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Debug)]
struct Shared {
    /// Coefficients "a0,a1,..." as rationals ("num/den" or integers).
    #[arg(long, global = true, allow_hyphen_values = true)]
    poly: Option<String>,
    /// Matrix order.
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Search budget as JSON, inline or "@path", merged over the defaults.
    #[arg(long, global = true)]
    budget: Option<String>,
    #[arg(long, global = true)]
    trials: Option<usize>,
    #[arg(long, global = true)]
    restarts: Option<usize>,
    #[arg(long, global = true)]
    steps: Option<usize>,
    #[arg(long, global = true)]
    step_size: Option<f64>,
    #[arg(long, global = true)]
    entry_scale: Option<f64>,
    #[arg(long, global = true)]
    t_cap: Option<String>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
}

/// Document printed by `search`.
#[derive(Debug, Serialize, Deserialize)]
struct SearchOutput {
    config: SearchConfig,
    result: WitnessResult,
}

struct Usage(String);

impl From<pnpoly::Error> for Usage {
    fn from(e: pnpoly::Error) -> Self {
        Usage(e.to_string())
    }
}

struct Output {
    json: String,
    text: String,
    code: u8,
}

impl Output {
    fn new<T: Serialize>(doc: &T, text: String, code: u8) -> Self {
        Output {
            json: serde_json::to_string_pretty(doc).expect("documents serialize"),
            text,
            code,
        }
    }
}

impl Shared {
    fn poly(&self) -> Result<Poly, Usage> {
        let s = self.poly.as_deref().ok_or_else(|| Usage("--poly is required".into()))?;
        Poly::from_str(s).map_err(|e| Usage(format!("malformed polynomial {s:?}: {e}")))
    }

    fn order(&self) -> Result<usize, Usage> {
        match self.n {
            None => Err(Usage("--n is required".into())),
            Some(0) => Err(Usage("--n must be at least 1".into())),
            Some(n) => Ok(n),
        }
    }

    fn config(&self) -> Result<SearchConfig, Usage> {
        let mut merged = serde_json::to_value(SearchConfig::default()).expect("config serializes");
        if let Some(b) = &self.budget {
            let raw = match b.strip_prefix('@') {
                Some(path) => fs::read_to_string(path).map_err(|e| Usage(format!("cannot read {path}: {e}")))?,
                None => b.clone(),
            };
            let patch: serde_json::Value =
                serde_json::from_str(&raw).map_err(|e| Usage(format!("malformed --budget: {e}")))?;
            let serde_json::Value::Object(fields) = patch else {
                return Err(Usage("--budget must be a JSON object".into()));
            };
            let target = merged.as_object_mut().expect("config is an object");
            for (k, v) in fields {
                if !target.contains_key(&k) {
                    return Err(Usage(format!("unknown budget field {k:?}")));
                }
                target.insert(k, v);
            }
        }
        let mut cfg: SearchConfig =
            serde_json::from_value(merged).map_err(|e| Usage(format!("malformed --budget: {e}")))?;
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.trials {
            cfg.trials = v;
        }
        if let Some(v) = self.restarts {
            cfg.restarts = v;
        }
        if let Some(v) = self.steps {
            cfg.steps = v;
        }
        if let Some(v) = self.step_size {
            cfg.step_size = v;
        }
        if let Some(v) = self.entry_scale {
            cfg.entry_scale = v;
        }
        if let Some(v) = &self.t_cap {
            cfg.t_cap = rational::parse(v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn matrix_text(m: &MatrixQ) -> String {
    let cells: Vec<Vec<String>> = m.rows().iter().map(|r| r.iter().map(rational::format_short).collect()).collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    cells
        .iter()
        .map(|r| {
            let row: Vec<String> = r.iter().map(|c| format!("{c:>width$}")).collect();
            format!("  [ {} ]\n", row.join("  "))
        })
        .collect()
}

fn witness_text(w: &Witness) -> String {
    let mut s = format!("witness ({}, order {}", provenance_name(w), w.matrix.order());
    if let Some(t) = &w.t {
        let _ = write!(s, ", t = {}", rational::format_short(t));
    }
    s.push_str("):\n");
    s.push_str(&matrix_text(&w.matrix));
    let _ = writeln!(
        s,
        "p(W)[{},{}] = {}",
        w.entry.row,
        w.entry.col,
        rational::format_short(&w.value)
    );
    s
}

fn provenance_name(w: &Witness) -> String {
    serde_json::to_value(w.provenance)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn condition_text(c: &ConditionEntry) -> String {
    serde_json::to_string(c).unwrap_or_default()
}

fn result_text(r: &WitnessResult) -> String {
    let mut s = match &r.witness {
        Some(w) => format!("found\n{}", witness_text(w)),
        None => "no witness found\n".to_string(),
    };
    if let Some(st) = &r.stats {
        let _ = writeln!(
            s,
            "random trials: {}, descent restarts: {}, descent steps: {}, smallest entry seen: {}",
            st.random_trials,
            st.descent_restarts,
            st.descent_steps,
            st.best_min_entry.map_or("n/a".to_string(), |v| format!("{v:.6e}"))
        );
    }
    s
}

fn decompose(sh: &Shared) -> Result<Output, Usage> {
    let p = sh.poly()?;
    let n = sh.order()?;
    let d = residue_decompose(&p, n)?;
    let mut text = String::new();
    for (r, part) in d.parts.iter().enumerate() {
        let _ = writeln!(text, "p_({r},{n})(x) = {part}");
    }
    Ok(Output::new(&d, text, EXIT_OK))
}

fn check(sh: &Shared) -> Result<Output, Usage> {
    let p = sh.poly()?;
    let n = sh.order()?;
    let v = classify(&p, n, &sh.config()?)?;
    let (text, code) = match &v {
        Verdict::Member(c) => (
            format!("member of order {n} ({})\n", serde_json::to_string(&c.reason).unwrap_or_default()),
            EXIT_OK,
        ),
        Verdict::NonMember(c) => {
            let mut s = format!("not a member of order {n}\n");
            if let Some(f) = &c.failed_condition {
                let _ = writeln!(s, "failed condition: {}", condition_text(f));
            }
            if let Some(w) = &c.witness {
                s.push_str(&witness_text(w));
            }
            (s, EXIT_NON_MEMBER)
        }
        Verdict::Unknown(u) => (
            format!(
                "unknown for order {n}: {} conditions passed, {} random trials and {} descent restarts found nothing\n",
                u.report.entries.len(),
                u.search.random_trials,
                u.search.descent_restarts
            ),
            EXIT_UNKNOWN,
        ),
    };
    Ok(Output::new(&v, text, code))
}

fn witness(sh: &Shared, kind: Kind) -> Result<Output, Usage> {
    let p = sh.poly()?;
    let n = sh.order()?;
    let cfg = sh.config()?;
    let r = match kind {
        Kind::Circulant => circulant_witness(&p, n, &cfg.t_cap)?,
        Kind::Jordan => jordan_witness(&p, n)?,
        Kind::Any => {
            let c = circulant_witness(&p, n, &cfg.t_cap)?;
            if c.found {
                c
            } else {
                jordan_witness(&p, n)?
            }
        }
    };
    let code = if r.found { EXIT_OK } else { EXIT_NOT_FOUND };
    Ok(Output::new(&r, result_text(&r), code))
}

fn run_search(sh: &Shared) -> Result<Output, Usage> {
    let p = sh.poly()?;
    let n = sh.order()?;
    let config = sh.config()?;
    let result = search(&p, n, &config)?;
    let code = if result.found { EXIT_OK } else { EXIT_NOT_FOUND };
    let text = format!(
        "seed {}, {} trials, {} restarts x {} steps\n{}",
        config.seed,
        config.trials,
        config.restarts,
        config.steps,
        result_text(&result)
    );
    Ok(Output::new(&SearchOutput { config, result }, text, code))
}

fn spectrum(sh: &Shared, spectrum: Option<&str>, circ: Option<&str>, k: u32, m: u32) -> Result<Output, Usage> {
    let s: SpectrumList = match (spectrum, circ) {
        (Some(js), None) => serde_json::from_str(js).map_err(|e| Usage(format!("malformed --spectrum: {e}")))?,
        (None, Some(v)) => {
            let v: Vec<Rational> = parse_reference_vector(v)?;
            circulant_spectrum(&v)
        }
        _ => return Err(Usage("exactly one of --spectrum or --circ is required".into())),
    };
    if s.is_empty() {
        return Err(Usage("empty spectrum".into()));
    }
    let p = match &sh.poly {
        Some(_) => sh.poly()?,
        None => Poly::x(),
    };
    let report = spectral_report(&p, s, k, m);
    let code = if report.pass { EXIT_OK } else { EXIT_NON_MEMBER };
    Ok(Output::new(&report, spectral_text(&report), code))
}

fn spectral_text(r: &SpectralReport) -> String {
    let mut s = String::from("spectrum:");
    for z in r.spectrum.values() {
        let _ = write!(s, " {:.6}{:+.6}i", z.re, z.im);
    }
    s.push('\n');
    for e in &r.trace {
        let _ = writeln!(
            s,
            "trace  k={}  s_k(p) = {:.6e}{:+.3e}i  {}",
            e.k,
            e.value[0],
            e.value[1],
            if e.pass { "pass" } else { "FAIL" }
        );
    }
    for e in &r.jll {
        let _ = writeln!(
            s,
            "J-LL   k={} m={}  {:.6e} <= {:.6e}  {}",
            e.k,
            e.m,
            e.lhs,
            e.rhs,
            if e.pass { "pass" } else { "FAIL" }
        );
    }
    s
}

fn selftest_table(rows: &[SelfTestRow]) -> String {
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut s = String::new();
    for r in rows {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "{tag}  {:<width$}  {}", r.name, r.detail);
    }
    s
}

fn run(cli: &Cli) -> Result<(Output, Format), Usage> {
    let sh = &cli.shared;
    let fmt = sh.format.unwrap_or(Format::Json);
    let out = match &cli.command {
        Command::Decompose => decompose(sh)?,
        Command::Check => check(sh)?,
        Command::Witness { kind } => witness(sh, *kind)?,
        Command::Search => run_search(sh)?,
        Command::Spectrum { spectrum: js, circ, k, m } => spectrum(sh, js.as_deref(), circ.as_deref(), *k, *m)?,
        Command::Selftest => {
            let rows = selftest::run(sh.seed.unwrap_or(0));
            let code = if rows.iter().all(|r| r.passed) { EXIT_OK } else { EXIT_NON_MEMBER };
            let out = Output::new(&rows, selftest_table(&rows), code);
            return Ok((out, sh.format.unwrap_or(Format::Text)));
        }
    };
    Ok((out, fmt))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    match run(&cli) {
        Ok((out, fmt)) => {
            let doc = match fmt {
                Format::Json => out.json + "\n",
                Format::Text => out.text,
            };
            match &cli.shared.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, doc) {
                        eprintln!("error: cannot write {path}: {e}");
                        return ExitCode::from(EXIT_USAGE);
                    }
                }
                None => print!("{doc}"),
            }
            ExitCode::from(out.code)
        }
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
