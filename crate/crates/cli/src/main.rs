//! `spinnet` command-line interface.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use spinnet_core::cache::{CacheKey, ClosureCache};
use spinnet_core::cg::{decompose_cluster, enumerate_subspaces, restrict, subspace_basis};
use spinnet_core::operators::{full_generators, reduced_generators};
use spinnet_core::oracle::{
    lie_closure, verify_full_space, verify_prediction, FullSpaceReport, Verification, DEFAULT_DIM_CAP,
};
use spinnet_core::report::classify_network;
use spinnet_core::selftest::run_selftest;
use spinnet_core::{
    parse_spec, ClosureOptions, Error, Format, ParsedSpec, SpinNetwork, SubspaceSelection, VerifyOptions,
};

/// Overrides the default dimension cap when `--cap` is absent.
const CAP_ENV: &str = "SPINNET_DIM_CAP";

#[derive(Parser)]
#[command(name = "spinnet", version, about = "Subspace controllability of multipartite spin networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Text => Format::Text,
            OutputFormat::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Clebsch-Gordan decomposition of n spins.
    Decompose {
        #[arg(long)]
        n: usize,
    },
    /// List the invariant subspaces of a network.
    Enumerate {
        #[arg(long)]
        spec: PathBuf,
        /// List every copy instead of one entry per label tuple.
        #[arg(long)]
        all_copies: bool,
    },
    /// Predicted algebra and controllability of every subspace.
    Classify {
        #[arg(long)]
        spec: PathBuf,
        /// Labels f1,f2,... of a single subspace, optionally `:c1,c2,...` copies.
        #[arg(long)]
        subspace: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Classify and compare with numerical closures.
    Verify {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        subspace: Option<String>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Largest full-space and subspace dimension to compute.
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
        /// Directory for cached closure results.
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Worker threads for per-subspace closures.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Raw closure dimensions, per subspace or on the full space.
    Closure {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        full: bool,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Run the built-in invariant checks.
    Selftest,
}

/// Failure kinds mapped onto exit statuses.
enum Failure {
    Mismatch,
    Input(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.into())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Decompose { n } => decompose(n),
        Command::Enumerate { spec, all_copies } => enumerate(&spec, all_copies),
        Command::Classify { spec, subspace, format } => {
            let spec = load(&spec)?;
            let net = spec.classifiable()?;
            let selections = subspace.map(|s| parse_selection(&s, &net)).transpose()?.map(|s| vec![s]);
            print!("{}", classify_network(&net, selections)?.emit(format.into()));
            Ok(())
        }
        Command::Verify { spec, subspace, tol, cap, format, cache, jobs } => {
            verify(&spec, subspace.as_deref(), options(tol, cap)?, format.into(), cache, jobs)
        }
        Command::Closure { spec, full, tol, cap, cache } => closure(&spec, full, options(tol, cap)?, cache),
        Command::Selftest => {
            let outcomes = run_selftest();
            for o in &outcomes {
                println!("{} {} ({:.2}s): {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.seconds, o.detail);
            }
            if outcomes.iter().all(|o| o.passed) {
                Ok(())
            } else {
                Err(Failure::Mismatch)
            }
        }
    }
}

fn load(path: &Path) -> anyhow::Result<ParsedSpec> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let spec = parse_spec(&text).with_context(|| format!("parsing {}", path.display()))?;
    for w in &spec.warnings {
        eprintln!("warning: {w}");
    }
    Ok(spec)
}

fn options(tol: f64, cap: Option<usize>) -> anyhow::Result<VerifyOptions> {
    if !(tol > 0.0 && tol.is_finite()) {
        bail!(Error::BadTolerance(tol));
    }
    let cap = match cap {
        Some(c) => c,
        None => match std::env::var(CAP_ENV) {
            Ok(v) => v.trim().parse().with_context(|| format!("{CAP_ENV}={v} is not an integer"))?,
            Err(_) => DEFAULT_DIM_CAP,
        },
    };
    Ok(VerifyOptions { tol, full_dim_cap: cap, subspace_dim_cap: cap })
}

/// Parses `f1,f2,...` with optional `:c1,c2,...` copy indices.
fn parse_selection(text: &str, net: &SpinNetwork) -> anyhow::Result<SubspaceSelection> {
    let numbers = |s: &str| -> anyhow::Result<Vec<usize>> {
        s.split(',').map(|p| p.trim().parse::<usize>().map_err(|_| anyhow!("bad subspace entry {p:?}"))).collect()
    };
    let (labels, copies) = match text.split_once(':') {
        Some((l, c)) => (numbers(l)?, numbers(c)?),
        None => {
            let l = numbers(text)?;
            let ones = vec![1; l.len()];
            (l, ones)
        }
    };
    let selection = SubspaceSelection { labels, copies };
    selection.validate(net)?;
    Ok(selection)
}

fn decompose(n: usize) -> Result<(), Failure> {
    if n > 60 {
        return Err(anyhow!("--n {n} is too large; at most 60 spins").into());
    }
    let dec = decompose_cluster(n)?;
    println!("{dec}");
    let sum = dec.dimension_sum();
    let terms: Vec<String> = dec.iter().map(|(f, m)| format!("{m}·{}", f + 1)).collect();
    println!("{} = {sum}, 2^{n} = {}", terms.join(" + "), 1usize << n);
    if sum == 1usize << n {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn enumerate(path: &Path, all_copies: bool) -> Result<(), Failure> {
    let spec = load(path)?;
    let net = spec.uniform().ok_or_else(|| anyhow!("spin-level network has no multipartite form"))?;
    let selections = enumerate_subspaces(&net, !all_copies);
    for s in &selections {
        if all_copies {
            println!("{s}  D^S={}", s.dim());
        } else {
            println!("{s}  D^S={}  copies={}", s.dim(), s.label_multiplicity(&net)?);
        }
    }
    Ok(())
}

fn verify(
    path: &Path,
    subspace: Option<&str>,
    opts: VerifyOptions,
    format: Format,
    cache_dir: Option<PathBuf>,
    jobs: usize,
) -> Result<(), Failure> {
    let spec = load(path)?;
    let net = spec.classifiable()?;
    let selections = subspace.map(|s| parse_selection(s, &net)).transpose()?.map(|s| vec![s]);
    let mut report = classify_network(&net, selections)?;
    report.tol = Some(opts.tol);
    let cache = cache_dir.map(ClosureCache::new);
    let hash = spec.hash();
    let selections: Vec<SubspaceSelection> = report.records.iter().map(|r| r.selection()).collect();
    let results: Vec<Mutex<Option<Result<Verification, Error>>>> =
        selections.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let work = || loop {
        let i = next.fetch_add(1, Ordering::Relaxed);
        let Some(sel) = selections.get(i) else { break };
        let key =
            CacheKey { spec_hash: hash.clone(), selection: Some(sel.clone()), tol: opts.tol, kind: "verify".into() };
        let result = match cache.as_ref().and_then(|c| c.get::<Verification>(&key)) {
            Some(v) => Ok(v),
            None => verify_prediction(&net, sel, opts).inspect(|v| {
                if let Some(c) = &cache {
                    if let Err(e) = c.put(&key, v) {
                        eprintln!("warning: cache write failed: {e}");
                    }
                }
            }),
        };
        *results[i].lock().expect("result slot") = Some(result);
    };
    std::thread::scope(|scope| {
        for _ in 1..jobs.max(1) {
            scope.spawn(work);
        }
        work();
    });
    for (record, slot) in report.records.iter_mut().zip(results) {
        let v = slot.into_inner().expect("result slot").expect("every selection processed")?;
        record.attach(&v);
    }
    report.refresh_summary();
    print!("{}", report.emit(format));
    if report.all_match() {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn closure(path: &Path, full: bool, opts: VerifyOptions, cache_dir: Option<PathBuf>) -> Result<(), Failure> {
    let spec = load(path)?;
    let cache = cache_dir.map(ClosureCache::new);
    let hash = spec.hash();
    let uniform = spec.uniform();
    if full || uniform.is_none() {
        let key = CacheKey { spec_hash: hash, selection: None, tol: opts.tol, kind: "full".into() };
        let report = match cache.as_ref().and_then(|c| c.get::<FullSpaceReport>(&key)) {
            Some(r) => r,
            None => {
                let r = verify_full_space(&spec.model, opts)?;
                if let Some(c) = &cache {
                    c.put(&key, &r)?;
                }
                r
            }
        };
        println!(
            "full space {}: closure dim {} (traceless {}, identity direction {})",
            report.full_dim,
            report.dim,
            report.traceless_dim,
            if report.identity_direction { "yes" } else { "no" }
        );
        for b in &report.blocks {
            let predicted = b.predicted_dim.map_or("-".to_string(), |p| p.to_string());
            let identity = if b.identity_direction { " + identity" } else { "" };
            println!(
                "  {}  D^S={}  restricted {}{identity}  predicted {predicted}",
                b.selection, b.subspace_dim, b.restricted_dim
            );
        }
        if !report.blocks.is_empty() {
            println!("block diagonal: {}", if report.block_diagonal { "yes" } else { "no" });
        }
        return if report.consistent() { Ok(()) } else { Err(Failure::Mismatch) };
    }
    let net = uniform.expect("checked above");
    let generators =
        if net.require_distinct_gammas().is_ok() { reduced_generators(&net)? } else { full_generators(&net) };
    if net.full_dim() > opts.full_dim_cap {
        return Err(Error::CapExceeded { dim: net.full_dim(), cap: opts.full_dim_cap }.into());
    }
    for sel in enumerate_subspaces(&net, true) {
        let key =
            CacheKey { spec_hash: hash.clone(), selection: Some(sel.clone()), tol: opts.tol, kind: "closure".into() };
        let dim = match cache.as_ref().and_then(|c| c.get::<usize>(&key)) {
            Some(d) => d,
            None => {
                let basis = subspace_basis(&sel, &net, opts.full_dim_cap)?;
                let restricted = generators.iter().map(|g| restrict(g, &basis)).collect::<Result<Vec<_>, _>>()?;
                let d = lie_closure(&restricted, ClosureOptions::with_tol(opts.tol))?.dim;
                if let Some(c) = &cache {
                    c.put(&key, &d)?;
                }
                d
            }
        };
        println!("{sel}  D^S={}  closure dim {dim}", sel.dim());
    }
    Ok(())
}
