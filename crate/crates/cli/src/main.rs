//! Batch command-line front end: representation ranks, generator matrices,
//! surjectivity certificate tables across split primes, and finite-group
//! involvement certificates. All reports are deterministic for a fixed
//! configuration (including the seed), so repeated runs are byte-identical.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use skeinrep::arith::is_prime_u64;
use skeinrep::finite_groups::{
    reduce_matrix, verify_surjectivity, ChainBudget, SurjectivityCertificate, SurjectivityMode,
};
use skeinrep::involvement::{involvement_certificate, InvolvementError};
use skeinrep::tqft_rep::{dehn_twist_cached, TqftError};
use skeinrep::{
    form_positive_with_ceiling, genus1_matrices, hermitian_form, normalize_det, verify_unitary,
    CycMatrix, Curve, CyclotomicRat, GroupInput, Rep, SkeinParams, SplitPrime,
};

const CACHE_ENV: &str = "SKEINREP_CACHE";

// ---- errors and exit codes ----

/// Input errors (bad arguments, malformed files, unsupported ranges) exit
/// with code 2; failures during an accepted computation exit with code 1.
enum AppError {
    Input(String),
    Compute(String),
}

fn input<E: std::fmt::Display>(e: E) -> AppError {
    AppError::Input(e.to_string())
}

fn compute<E: std::fmt::Display>(e: E) -> AppError {
    AppError::Compute(e.to_string())
}

// ---- configuration ----

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Auto,
    Exact,
    Evidence,
}

/// Optional TOML configuration file; every field can also be set (and is
/// overridden) by the corresponding command-line flag. The cache directory
/// additionally honors the SKEINREP_CACHE environment variable.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    p: Option<u64>,
    g: Option<u64>,
    min_q: Option<u64>,
    max_q: Option<u64>,
    exact_threshold: Option<u64>,
    precision_ceiling: Option<u32>,
    seed: Option<u64>,
    cache_dir: Option<PathBuf>,
    format: Option<OutputFormat>,
}

/// Fully resolved run configuration (flags > environment > config file >
/// defaults).
struct RunConfig {
    seed: u64,
    min_q: u64,
    max_q: u64,
    /// state-space cap q^N below which surjectivity runs in exact mode
    exact_threshold: u64,
    precision_ceiling: u32,
    cache_dir: Option<PathBuf>,
    format: OutputFormat,
}

fn load_file_config(path: Option<&Path>) -> Result<FileConfig, AppError> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| AppError::Input(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text)
        .map_err(|e| AppError::Input(format!("invalid config {}: {e}", path.display())))
}

impl RunConfig {
    fn resolve(cli: &Cli, file: &FileConfig, format_flag: Option<OutputFormat>) -> RunConfig {
        let cache_dir = cli
            .cache_dir
            .clone()
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
            .or_else(|| file.cache_dir.clone());
        RunConfig {
            seed: cli.seed.or(file.seed).unwrap_or(1),
            min_q: cli.min_q.or(file.min_q).unwrap_or(3),
            max_q: cli.max_q.or(file.max_q).unwrap_or(100_000),
            exact_threshold: cli
                .exact_threshold
                .or(file.exact_threshold)
                .unwrap_or(10_000_000),
            precision_ceiling: file.precision_ceiling.unwrap_or(4096),
            cache_dir,
            format: format_flag.or(file.format).unwrap_or(OutputFormat::Csv),
        }
    }

    fn budget(&self) -> ChainBudget {
        ChainBudget { max_points: self.exact_threshold, ..ChainBudget::default() }
    }
}

/// Resolve a required parameter from positional argument or config file.
fn require(name: &str, flag: Option<u64>, file: Option<u64>) -> Result<u64, AppError> {
    flag.or(file).ok_or_else(|| {
        AppError::Input(format!("missing {name}: pass it as an argument or set it in --config"))
    })
}

fn check_p(p: u64) -> Result<(), AppError> {
    if !is_prime_u64(p) || p % 4 != 3 {
        return Err(AppError::Input(format!(
            "p must be a prime congruent to 3 mod 4, got {p}"
        )));
    }
    Ok(())
}

fn check_g(g: u64) -> Result<(), AppError> {
    if g == 0 {
        return Err(AppError::Input("genus must be at least 1".into()));
    }
    Ok(())
}

/// Matrix-level commands cover the genera with implemented generator sets
/// and invariant forms.
fn check_supported_genus(g: u64) -> Result<(), AppError> {
    check_g(g)?;
    if g > 2 {
        return Err(AppError::Input(format!(
            "genus {g} is not supported here: generator matrices and the \
             invariant form are implemented for genus 1 and 2"
        )));
    }
    Ok(())
}

// ---- command line ----

#[derive(Parser)]
#[command(
    name = "skeinrep",
    version,
    about = "Exact mapping class group representations over cyclotomic \
             integers, their reductions at completely split primes, and \
             certificates for the finite images."
)]
struct Cli {
    /// TOML configuration file supplying defaults for shared settings
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Seed for the randomized (but deterministic) verification routines
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for cached generator matrices (overrides SKEINREP_CACHE)
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,
    /// Smallest reduction prime considered in split-prime searches
    #[arg(long, global = true, value_name = "Q")]
    min_q: Option<u64>,
    /// Largest reduction prime considered in split-prime searches
    #[arg(long, global = true, value_name = "Q")]
    max_q: Option<u64>,
    /// State-space cap q^N below which surjectivity is certified exactly
    #[arg(long, global = true, value_name = "POINTS")]
    exact_threshold: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the dimension of the genus-g representation space at the prime p
    Rank {
        #[arg(value_name = "G")]
        g: Option<u64>,
        #[arg(value_name = "P")]
        p: Option<u64>,
    },
    /// Write one generator matrix together with a unitarity and determinant report
    Rep {
        #[arg(value_name = "G")]
        g: Option<u64>,
        #[arg(value_name = "P")]
        p: Option<u64>,
        /// Generator label: a twist curve (a1, b1, c1, ...) or, at genus 1,
        /// the modular pair s / t
        #[arg(value_name = "GENERATOR")]
        generator: Option<String>,
        /// Write the JSON report here instead of standard output
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Certify the reduced images across completely split primes
    Surject {
        #[arg(value_name = "G")]
        g: Option<u64>,
        #[arg(value_name = "P")]
        p: Option<u64>,
        /// How many split primes to certify, smallest first
        #[arg(long, default_value_t = 3)]
        q_count: usize,
        /// Table format on standard output (certificate files are always JSON)
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
        /// Also write one certificate JSON file per prime into this directory
        #[arg(long, value_name = "DIR")]
        out_dir: Option<PathBuf>,
        /// Force exact order certification or evidence mode
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
        /// Worker threads for the per-prime fan-out
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Embed a finite group into PSL(N, q) and compose with a surjectivity certificate
    Involve {
        /// JSON file holding a multiplication table or permutation generators
        #[arg(value_name = "GROUP_FILE")]
        group_file: PathBuf,
        #[arg(value_name = "G")]
        g: Option<u64>,
        #[arg(value_name = "P")]
        p: Option<u64>,
        /// Reduction prime (default: smallest completely split prime for p)
        #[arg(long)]
        q: Option<u64>,
        /// Write the certificate here instead of standard output
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Run a quick battery of internal consistency checks
    Selftest,
}

// ---- report plumbing ----

fn to_pretty_json<T: Serialize>(doc: &T) -> Result<String, AppError> {
    let mut text = serde_json::to_string_pretty(doc).map_err(compute)?;
    text.push('\n');
    Ok(text)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), AppError> {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent() {
                if !dir.as_os_str().is_empty() {
                    fs::create_dir_all(dir).map_err(compute)?;
                }
            }
            fs::write(path, text).map_err(compute)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

// ---- rank ----

fn cmd_rank(g: u64, p: u64) -> Result<(), AppError> {
    check_g(g)?;
    let params = SkeinParams::new(p).map_err(input)?;
    let n = params.verlinde_rank(g).map_err(compute)?;
    println!("{n}");
    Ok(())
}

// ---- rep ----

enum GenSpec {
    ModularS,
    ModularT,
    Twist(Curve),
}

fn parse_generator(label: &str, g: u64) -> Result<GenSpec, AppError> {
    let l = label.to_ascii_lowercase();
    match l.as_str() {
        "s" | "t" if g != 1 => Err(AppError::Input(format!(
            "generator {label} is only defined at genus 1"
        ))),
        "s" => Ok(GenSpec::ModularS),
        "t" => Ok(GenSpec::ModularT),
        _ => {
            let (kind, idx) = l.split_at(1);
            let i: u64 = idx
                .parse()
                .map_err(|_| AppError::Input(format!("unknown generator label {label}")))?;
            let curve = match kind {
                "a" => Curve::A(i),
                "b" => Curve::B(i),
                "c" => Curve::C(i),
                _ => return Err(AppError::Input(format!("unknown generator label {label}"))),
            };
            Ok(GenSpec::Twist(curve))
        }
    }
}

#[derive(Serialize)]
struct GeneratorReport {
    schema_version: u32,
    kind: &'static str,
    convention: &'static str,
    g: u64,
    p: u64,
    generator: String,
    dim: usize,
    diagonal: bool,
    unitary: bool,
    form_positive: bool,
    /// determinant as a power of -zeta
    det_exponent: u64,
    /// multiplicative order of the determinant
    det_order: u64,
    /// k such that zeta^{-k} times the matrix has determinant one
    normalization_exponent: u64,
    matrix_sha256: String,
    matrix: CycMatrix,
}

fn root_of_unity_order(x: &CyclotomicRat, p: u64) -> Option<u64> {
    let mut acc = x.clone();
    for m in 1..=2 * p {
        if acc.is_one() {
            return Some(m);
        }
        acc = acc.mul(x);
    }
    None
}

fn power_of_minus_zeta(x: &CyclotomicRat, p: u64) -> Option<u64> {
    let minus_zeta =
        CyclotomicRat::zeta_pow(p, 1).mul(&CyclotomicRat::from_integer(p, -1));
    let mut acc = CyclotomicRat::one(p);
    for e in 0..2 * p {
        if acc == *x {
            return Some(e);
        }
        acc = acc.mul(&minus_zeta);
    }
    None
}

fn cmd_rep(
    g: u64,
    p: u64,
    label: &str,
    out: Option<&Path>,
    cfg: &RunConfig,
) -> Result<(), AppError> {
    check_supported_genus(g)?;
    check_p(p)?;
    let requested = parse_generator(label, g)?;
    let rep = Rep::new(g, p).map_err(compute)?;
    let matrix = match &requested {
        GenSpec::ModularS => genus1_matrices(p).map_err(compute)?.s,
        GenSpec::ModularT => genus1_matrices(p).map_err(compute)?.t,
        GenSpec::Twist(curve) => {
            let built = match &cfg.cache_dir {
                Some(dir) => dehn_twist_cached(dir, g, p, *curve),
                None => rep.dehn_twist(*curve),
            };
            built.map_err(|e| match e {
                TqftError::NoSuchCurve(..) => input(e),
                other => compute(other),
            })?
        }
    };
    let h = hermitian_form(g, rep.params()).map_err(compute)?;
    let det = matrix.det();
    let det_exponent = power_of_minus_zeta(&det, p)
        .ok_or_else(|| AppError::Compute("determinant is not a root of unity".into()))?;
    let det_order = if det.is_one() {
        1
    } else {
        root_of_unity_order(&det, p)
            .ok_or_else(|| AppError::Compute("determinant is not a root of unity".into()))?
    };
    let (_, normalization_exponent) = normalize_det(&matrix).map_err(compute)?;
    let matrix_sha256 = {
        let bytes = serde_json::to_vec(&matrix).map_err(compute)?;
        hex::encode(Sha256::digest(&bytes))
    };
    let report = GeneratorReport {
        schema_version: skeinrep::SCHEMA_VERSION,
        kind: "generator-report",
        convention: skeinrep::CONVENTION,
        g,
        p,
        generator: label.to_ascii_lowercase(),
        dim: rep.dim(),
        diagonal: matrix.is_diagonal(),
        unitary: verify_unitary(std::slice::from_ref(&matrix), &h),
        form_positive: form_positive_with_ceiling(&h, cfg.precision_ceiling).map_err(compute)?,
        det_exponent,
        det_order,
        normalization_exponent,
        matrix_sha256,
        matrix,
    };
    emit(&to_pretty_json(&report)?, out)
}

// ---- surject ----

/// Determinant-one generator matrices whose reductions are certified:
/// the normalized modular pair at genus 1, the twist generators at genus 2.
fn surjection_generators(g: u64, p: u64) -> Result<(Vec<CycMatrix>, &'static str), AppError> {
    if g == 1 {
        let g1 = genus1_matrices(p).map_err(compute)?;
        let s = normalize_det(&g1.s).map_err(compute)?.0;
        let t = normalize_det(&g1.t).map_err(compute)?.0;
        Ok((vec![s, t], "modular-pair-normalized"))
    } else {
        let rep = Rep::new(g, p).map_err(compute)?;
        let mut gens = Vec::new();
        for (_, m) in rep.generators().map_err(compute)? {
            gens.push(normalize_det(&m).map_err(compute)?.0);
        }
        Ok((gens, "dehn-twists-normalized"))
    }
}

fn certify_one(
    gens: &[CycMatrix],
    source: &str,
    g: u64,
    p: u64,
    q: u64,
    mode: ModeArg,
    cfg: &RunConfig,
) -> Result<SurjectivityCertificate, AppError> {
    let sp = SplitPrime::new(p, q).map_err(input)?;
    let reduced = gens
        .iter()
        .map(|m| reduce_matrix(m, &sp))
        .collect::<Result<Vec<_>, _>>()
        .map_err(compute)?;
    let mode = match mode {
        ModeArg::Auto => SurjectivityMode::Auto,
        ModeArg::Exact => SurjectivityMode::Exact,
        ModeArg::Evidence => SurjectivityMode::Evidence,
    };
    let mut context = BTreeMap::new();
    context.insert("genus".to_string(), g.to_string());
    context.insert("p".to_string(), p.to_string());
    context.insert("generators".to_string(), source.to_string());
    verify_surjectivity(&reduced, mode, cfg.seed, &cfg.budget(), context).map_err(compute)
}

fn surject_table_csv(certs: &[SurjectivityCertificate]) -> Result<String, AppError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "q",
        "n",
        "mode",
        "verdict",
        "computed_order",
        "sl_order",
        "psl_order",
        "generator_count",
        "generators_sha256",
        "seed",
    ])
    .map_err(compute)?;
    for c in certs {
        w.write_record([
            c.q.to_string(),
            c.n.to_string(),
            c.mode.clone(),
            c.verdict.clone(),
            c.computed_order.clone().unwrap_or_default(),
            c.sl_order.clone(),
            c.psl_order.clone(),
            c.generator_count.to_string(),
            c.generators_sha256.clone(),
            c.seed.to_string(),
        ])
        .map_err(compute)?;
    }
    let bytes = w.into_inner().map_err(compute)?;
    String::from_utf8(bytes).map_err(compute)
}

fn cmd_surject(
    g: u64,
    p: u64,
    q_count: usize,
    mode: ModeArg,
    threads: Option<usize>,
    out_dir: Option<&Path>,
    cfg: &RunConfig,
) -> Result<(), AppError> {
    check_supported_genus(g)?;
    check_p(p)?;
    let (gens, source) = surjection_generators(g, p)?;
    let qs: Vec<u64> = if q_count == 0 {
        Vec::new()
    } else {
        skeinrep::find_split_primes(p, q_count, cfg.min_q, cfg.max_q)
            .map_err(input)?
            .into_iter()
            .map(|sp| sp.q)
            .collect()
    };
    let mut certs: Vec<SurjectivityCertificate> = if qs.is_empty() {
        Vec::new()
    } else {
        let workers = threads.unwrap_or_else(|| qs.len().min(4)).max(1);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(compute)?;
        pool.install(|| {
            use rayon::prelude::*;
            qs.par_iter()
                .map(|&q| certify_one(&gens, source, g, p, q, mode, cfg))
                .collect::<Result<Vec<_>, _>>()
        })?
    };
    certs.sort_by_key(|c| c.q);
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).map_err(compute)?;
        for c in &certs {
            let path = dir.join(format!("surject-g{g}-p{p}-q{}.json", c.q));
            emit(&to_pretty_json(c)?, Some(&path))?;
        }
    }
    match cfg.format {
        OutputFormat::Csv => print!("{}", surject_table_csv(&certs)?),
        OutputFormat::Json => print!("{}", to_pretty_json(&certs)?),
    }
    Ok(())
}

// ---- involve ----

fn cmd_involve(
    group_file: &Path,
    g: u64,
    p: u64,
    q: Option<u64>,
    out: Option<&Path>,
    cfg: &RunConfig,
) -> Result<(), AppError> {
    check_g(g)?;
    check_p(p)?;
    let text = fs::read_to_string(group_file).map_err(|e| {
        AppError::Input(format!("cannot read group file {}: {e}", group_file.display()))
    })?;
    let group: GroupInput = serde_json::from_str(&text).map_err(|e| {
        AppError::Input(format!("invalid group file {}: {e}", group_file.display()))
    })?;
    let q = match q {
        Some(q) => q,
        None => {
            skeinrep::find_split_primes(p, 1, cfg.min_q, cfg.max_q).map_err(input)?[0].q
        }
    };
    let cert = involvement_certificate(&group, g, p, q, cfg.seed, &cfg.budget()).map_err(
        |e| match e {
            InvolvementError::InvalidGroup(_)
            | InvolvementError::TooLarge { .. }
            | InvolvementError::BadPrime(_)
            | InvolvementError::BadPermutation { .. } => input(e),
            other => compute(other),
        },
    )?;
    emit(&to_pretty_json(&cert)?, out)
}

// ---- selftest ----

fn selftest_checks(cfg: &RunConfig) -> Vec<(&'static str, Result<(), String>)> {
    let mut results: Vec<(&'static str, Result<(), String>)> = Vec::new();

    results.push((
        "rank formula at (g, p) = (1, 7) and (5, 3)",
        (|| {
            let r17 = SkeinParams::new(7)
                .map_err(|e| e.to_string())?
                .verlinde_rank(1)
                .map_err(|e| e.to_string())?;
            let r53 = SkeinParams::new(3)
                .map_err(|e| e.to_string())?
                .verlinde_rank(5)
                .map_err(|e| e.to_string())?;
            if r17.to_string() != "3" || r53.to_string() != "1" {
                return Err(format!("got ranks {r17} and {r53}, expected 3 and 1"));
            }
            Ok(())
        })(),
    ));

    results.push((
        "genus-1 modular pair is unitary and satisfies the defining relation",
        (|| {
            let g1 = genus1_matrices(7).map_err(|e| e.to_string())?;
            let h = hermitian_form(1, &SkeinParams::new(7).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            if !verify_unitary(&[g1.s.clone(), g1.t.clone()], &h) {
                return Err("generators are not unitary for the invariant form".into());
            }
            let s_inv = g1.s.inverse().map_err(|e| e.to_string())?;
            let rel = g1.s.mul(&g1.t).pow(3).mul(&s_inv.mul(&s_inv));
            let scalar = rel
                .as_scalar()
                .ok_or_else(|| "relation word is not scalar".to_string())?
                .clone();
            match root_of_unity_order(&scalar, 7) {
                Some(o) if o == 7 => Ok(()),
                other => Err(format!("relation scalar has order {other:?}, expected 7")),
            }
        })(),
    ));

    let reference_cert = || -> Result<SurjectivityCertificate, String> {
        let (gens, source) = surjection_generators(1, 7).map_err(|e| match e {
            AppError::Input(m) | AppError::Compute(m) => m,
        })?;
        certify_one(&gens, source, 1, 7, 29, ModeArg::Exact, cfg).map_err(|e| match e {
            AppError::Input(m) | AppError::Compute(m) => m,
        })
    };

    results.push((
        "exact stabilizer chain certifies the image mod 29",
        (|| {
            let cert = reference_cert()?;
            if cert.computed_order.as_deref() != Some("168") {
                return Err(format!("computed order {:?}, expected 168", cert.computed_order));
            }
            if cert.verdict != "proper-subgroup" {
                return Err(format!("verdict {}, expected proper-subgroup", cert.verdict));
            }
            Ok(())
        })(),
    ));

    results.push((
        "two-element group embeds injectively into PSL(3, 3)",
        (|| {
            let z2 = GroupInput::Table {
                name: "Z/2".into(),
                table: vec![vec![0, 1], vec![1, 0]],
            };
            let cert = skeinrep::embed_into_psl(&z2, 3).map_err(|e| e.to_string())?;
            if !cert.injective || cert.image_order != "2" {
                return Err(format!(
                    "injective={}, image order {}",
                    cert.injective, cert.image_order
                ));
            }
            Ok(())
        })(),
    ));

    results.push((
        "repeated runs serialize to identical bytes",
        (|| {
            let a = serde_json::to_vec(&reference_cert()?).map_err(|e| e.to_string())?;
            let b = serde_json::to_vec(&reference_cert()?).map_err(|e| e.to_string())?;
            if a != b {
                return Err("certificates differ between runs".into());
            }
            Ok(())
        })(),
    ));

    results
}

fn cmd_selftest(cfg: &RunConfig) -> Result<(), AppError> {
    let results = selftest_checks(cfg);
    let mut failed = 0usize;
    for (label, outcome) in &results {
        match outcome {
            Ok(()) => println!("ok    {label}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {label}: {msg}");
            }
        }
    }
    println!("selftest: {} passed, {} failed", results.len() - failed, failed);
    if failed > 0 {
        return Err(AppError::Compute(format!("{failed} selftest check(s) failed")));
    }
    Ok(())
}

// ---- entry point ----

fn run(cli: Cli) -> Result<(), AppError> {
    let file = load_file_config(cli.config.as_deref())?;
    match &cli.command {
        Command::Rank { g, p } => {
            let g = require("genus", *g, file.g)?;
            let p = require("p", *p, file.p)?;
            check_p(p)?;
            cmd_rank(g, p)
        }
        Command::Rep { g, p, generator, out } => {
            let cfg = RunConfig::resolve(&cli, &file, None);
            let g = require("genus", *g, file.g)?;
            let p = require("p", *p, file.p)?;
            let label = generator
                .as_deref()
                .ok_or_else(|| AppError::Input("missing generator label".into()))?;
            cmd_rep(g, p, label, out.as_deref(), &cfg)
        }
        Command::Surject { g, p, q_count, format, out_dir, mode, threads } => {
            let cfg = RunConfig::resolve(&cli, &file, *format);
            let g = require("genus", *g, file.g)?;
            let p = require("p", *p, file.p)?;
            cmd_surject(g, p, *q_count, *mode, *threads, out_dir.as_deref(), &cfg)
        }
        Command::Involve { group_file, g, p, q, out } => {
            let cfg = RunConfig::resolve(&cli, &file, None);
            let g = require("genus", *g, file.g)?;
            let p = require("p", *p, file.p)?;
            cmd_involve(group_file, g, p, *q, out.as_deref(), &cfg)
        }
        Command::Selftest => {
            let cfg = RunConfig::resolve(&cli, &file, None);
            cmd_selftest(&cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
