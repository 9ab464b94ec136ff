//! The `kpsym` command line.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when a check
//! finds a mathematical mismatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::autoinv::{classify, count_remark1};
use crate::export;
use crate::fusion::{verlinde_raw, FusionTable};
use crate::modular::{conductor, galois_action, ModularData};
use crate::search::{search_all_bounded, search_report, DEFAULT_SEARCH_BOUND};
use crate::weights::{AlgebraSpec, Weight, WeightTable};
use crate::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

fn positive(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(format!("{s} is not a positive number"))
    }
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Comma-separated algebras, e.g. a1,a2
    #[arg(long, global = true, env = "KPSYM_ALG")]
    pub alg: Option<String>,
    /// Comma-separated levels aligned with --alg
    #[arg(long, global = true, env = "KPSYM_LEVEL")]
    pub level: Option<String>,
    #[arg(long, global = true, value_enum, default_value = "json", env = "KPSYM_FORMAT")]
    pub format: Format,
    /// Write output here instead of stdout
    #[arg(long, global = true, env = "KPSYM_OUT")]
    pub out: Option<PathBuf>,
    /// Tolerance for S-matrix equalities
    #[arg(long, global = true, value_parser = positive, env = "KPSYM_TOL_U")]
    pub tol_u: Option<f64>,
    /// Tolerance for fusion integrality and cross-checks
    #[arg(long, global = true, value_parser = positive, env = "KPSYM_TOL_F")]
    pub tol_f: Option<f64>,
    /// Largest number of weights the search accepts
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..), env = "KPSYM_BOUND")]
    pub bound: Option<u64>,
}

#[derive(Debug, Parser)]
#[command(name = "kpsym", version, about = "Modular data, fusion rules and automorphism invariants of affine A-type algebras")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// List the level-k weights in canonical order
    Weights,
    /// Dump the S matrix
    Smatrix,
    /// Dump the exact T exponents and modular anomalies
    Tvector,
    /// Dump the q-dimensions
    Qdim,
    /// Dump fusion coefficients, optionally cross-checked against Verlinde
    Fusion {
        /// Restrict to this λ, given as JSON, e.g. '[[1,1]]'
        #[arg(long)]
        lambda: Option<String>,
        /// Restrict to this μ, given as JSON
        #[arg(long)]
        mu: Option<String>,
        /// Report the largest |Verlinde - Kac-Walton| instead of the table
        #[arg(long)]
        check: bool,
    },
    /// List the predicted automorphism invariants
    Classify,
    /// Find every automorphism invariant by exhaustive search
    Search,
    /// Compare classification and search
    Verify,
    /// Galois permutation and signs; all ℓ coprime to the conductor if --ell is absent
    Galois {
        #[arg(long, allow_hyphen_values = true)]
        ell: Option<i64>,
    },
}

/// Result of a command: bytes to emit, diagnostics, and the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            code: 0,
        }
    }

    fn mismatch(stdout: String, stderr: String) -> Self {
        Outcome {
            stdout,
            stderr,
            code: 2,
        }
    }

    fn usage(stderr: String) -> Self {
        Outcome {
            stdout: String::new(),
            stderr,
            code: 1,
        }
    }
}

fn spec_of(common: &Common) -> Result<AlgebraSpec, String> {
    let alg = common.alg.as_deref().ok_or("--alg is required")?;
    let level = common.level.as_deref().ok_or("--level is required")?;
    AlgebraSpec::parse(alg, level).map_err(|e| e.to_string())
}

fn parse_weight(spec: &AlgebraSpec, s: &str) -> Result<Weight, String> {
    let labels: Vec<Vec<u32>> =
        serde_json::from_str(s).map_err(|e| format!("bad weight {s}: {e}"))?;
    Weight::checked(spec, labels).map_err(|e| e.to_string())
}

/// Parses and runs, without touching the process streams or files.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome::ok(text)
            } else {
                Outcome::usage(text)
            };
        }
    };
    match dispatch(&cli) {
        Ok(o) => o,
        Err(msg) => Outcome::usage(format!("error: {msg}\n")),
    }
}

fn render(format: Format, json: impl FnOnce() -> serde_json::Value, csv: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => export::to_json_string(&json()),
        Format::Csv => csv(),
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, String> {
    let common = &cli.common;
    let spec = spec_of(common)?;
    let tol_u = common.tol_u.unwrap_or(Tolerances::UNITARY);
    let tol_f = common.tol_f.unwrap_or(Tolerances::FUSION);
    let bound = common.bound.map(|b| b as usize).unwrap_or(DEFAULT_SEARCH_BOUND);
    let fmt = common.format;

    let out = match &cli.command {
        Command::Weights => {
            let table = WeightTable::new(spec);
            Outcome::ok(render(fmt, || export::weights_json(&table), || export::weights_csv(&table)))
        }
        Command::Smatrix => {
            let md = ModularData::new(&spec);
            Outcome::ok(render(fmt, || export::smatrix_json(&md), || export::smatrix_csv(&md)))
        }
        Command::Tvector => {
            let md = ModularData::new(&spec);
            Outcome::ok(render(fmt, || export::tvector_json(&md), || export::tvector_csv(&md)))
        }
        Command::Qdim => {
            let md = ModularData::new(&spec);
            Outcome::ok(render(fmt, || export::qdim_json(&md), || export::qdim_csv(&md)))
        }
        Command::Fusion { lambda, mu, check } => {
            fusion(&spec, lambda.as_deref(), mu.as_deref(), *check, tol_f, fmt)?
        }
        Command::Classify => {
            let md = ModularData::new(&spec);
            let c = classify(&md, tol_u).map_err(|e| e.to_string())?;
            let body = render(
                fmt,
                || export::classification_json(c.items()),
                || export::classification_csv(c.items()),
            );
            if c.rejected().is_empty() {
                Outcome::ok(body)
            } else {
                let lines: Vec<String> = c
                    .rejected()
                    .iter()
                    .map(|(f, w)| format!("constructed invariant fails verification: {} ({w})", json!(f)))
                    .collect();
                Outcome::mismatch(body, lines.join("\n") + "\n")
            }
        }
        Command::Search => {
            let md = ModularData::new(&spec);
            let found = search_all_bounded(&md, tol_u, bound).map_err(|e| e.to_string())?;
            let c = classify(&md, tol_u).map_err(|e| e.to_string())?;
            let report = search_report(&found, &c.permutations());
            Outcome::ok(render(
                fmt,
                || export::search_json(&found, &report),
                || export::search_csv(&found),
            ))
        }
        Command::Verify => verify(&spec, tol_u, bound)?,
        Command::Galois { ell } => galois(&spec, *ell, tol_u, fmt)?,
    };
    Ok(out)
}

fn fusion(
    spec: &AlgebraSpec,
    lambda: Option<&str>,
    mu: Option<&str>,
    check: bool,
    tol_f: f64,
    fmt: Format,
) -> Result<Outcome, String> {
    let table = WeightTable::new(spec.clone());
    let n = table.len();
    let pick = |s: Option<&str>| -> Result<Vec<usize>, String> {
        match s {
            None => Ok((0..n).collect()),
            Some(s) => {
                let w = parse_weight(spec, s)?;
                Ok(vec![table.index_of(&w).expect("checked weights are in the table")])
            }
        }
    };
    let ls = pick(lambda)?;
    let ms = pick(mu)?;
    let ft = FusionTable::new(table.clone());
    if check {
        let md = ModularData::new(spec);
        let mut worst: f64 = 0.0;
        let mut triples = 0usize;
        for &l in &ls {
            for &m in &ms {
                let row = ft.products(l, m).map_err(|e| e.to_string())?;
                for nu in 0..n {
                    let kw = row.get(&nu).copied().unwrap_or(0) as f64;
                    let z = verlinde_raw(&md, l, m, nu);
                    worst = worst.max((z.re - kw).abs()).max(z.im.abs());
                    triples += 1;
                }
            }
        }
        let pass = worst <= tol_f;
        let body = export::to_json_string(&json!({
            "triples": triples,
            "max_deviation": export::round15(worst),
            "tolerance": tol_f,
            "pass": pass,
        }));
        return Ok(if pass {
            Outcome::ok(body)
        } else {
            Outcome::mismatch(
                body,
                format!("Verlinde and Kac-Walton differ by {worst:e} > {tol_f:e}\n"),
            )
        });
    }
    let mut entries = Vec::new();
    for &l in &ls {
        for &m in &ms {
            for (&nu, &v) in ft.products(l, m).map_err(|e| e.to_string())? {
                entries.push((l, m, nu, v));
            }
        }
    }
    Ok(Outcome::ok(render(
        fmt,
        || export::fusion_json(&ft, &entries),
        || export::fusion_csv(&ft, &entries),
    )))
}

fn verify(spec: &AlgebraSpec, tol_u: f64, bound: usize) -> Result<Outcome, String> {
    let md = ModularData::new(spec);
    let c = classify(&md, tol_u).map_err(|e| e.to_string())?;
    let found = search_all_bounded(&md, tol_u, bound).map_err(|e| e.to_string())?;
    let report = search_report(&found, &c.permutations());
    let mut problems = Vec::new();
    if !report.is_empty() {
        problems.push(format!(
            "search and classification differ: {}",
            serde_json::to_string(&report).expect("report serializes")
        ));
    }
    for (f, w) in c.rejected() {
        problems.push(format!("constructed invariant fails verification: {} ({w})", json!(f)));
    }
    if spec.len() == 1 {
        let f = spec.factors()[0];
        let predicted = count_remark1(f.r, f.k);
        if predicted != found.len() as u64 {
            problems.push(format!(
                "closed-form count {predicted} differs from the {} invariants found",
                found.len()
            ));
        }
    }
    if problems.is_empty() {
        Ok(Outcome::ok(format!(
            "{} invariants, classification confirmed\n",
            found.len()
        )))
    } else {
        Ok(Outcome::mismatch(
            format!("{} invariants found, {} classified\n", found.len(), c.len()),
            problems.join("\n") + "\n",
        ))
    }
}

fn galois(spec: &AlgebraSpec, ell: Option<i64>, tol_u: f64, fmt: Format) -> Result<Outcome, String> {
    let md = ModularData::new(spec);
    let m = conductor(spec);
    let ells: Vec<i64> = match ell {
        Some(l) => vec![l],
        None => (1..m).filter(|&l| num_integer::gcd(l, m) == 1).collect(),
    };
    let mut actions = Vec::new();
    for l in ells {
        let g = galois_action(&md, l).map_err(|e| e.to_string())?;
        let d = g.identity_defect(&md);
        actions.push((g, d));
    }
    let worst = actions.iter().map(|a| a.1).fold(0.0, f64::max);
    let body = render(
        fmt,
        || {
            let items: Vec<_> = actions.iter().map(|(g, d)| export::galois_json(g, *d)).collect();
            if ell.is_some() {
                items.into_iter().next().expect("one action")
            } else {
                serde_json::Value::Array(items)
            }
        },
        || export::galois_csv(&actions),
    );
    Ok(if worst <= tol_u {
        Outcome::ok(body)
    } else {
        Outcome::mismatch(body, format!("Galois identity fails by {worst:e}\n"))
    })
}

/// Runs with the process arguments, writing to stdout or `--out`.
pub fn run() -> i32 {
    let args: Vec<OsString> = std::env::args_os().collect();
    let out_path = Cli::try_parse_from(&args).ok().and_then(|c| c.common.out);
    let outcome = execute(args);
    if !outcome.stderr.is_empty() {
        eprint!("{}", outcome.stderr);
    }
    if !outcome.stdout.is_empty() {
        let written = match &out_path {
            Some(p) => std::fs::write(p, &outcome.stdout),
            None => std::io::stdout().write_all(outcome.stdout.as_bytes()),
        };
        if let Err(e) = written {
            eprintln!("error: cannot write output: {e}");
            return 1;
        }
    }
    outcome.code
}
