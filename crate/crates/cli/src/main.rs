//! `crnpersist`: persistence analysis of mass-action reaction networks.
//!
//! Exit codes: 0 success, 1 other failure, 2 unreadable or malformed input,
//! 3 siphon enumeration cap exceeded.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use crnpersist::exactla::{parse_rational, Rational};
use crnpersist::netmodel::parse_network;
use crnpersist::siphon::{enumerate_siphons, SiphonError, DEFAULT_SIPHON_CAP};
use crnpersist::sim::{certificate_probe, integrate};
use crnpersist::structure::summarize;
use crnpersist::wdne::{
    certify_siphon, check_wdne, default_epsilon, CertifyConfig, OrderPair, WdneOutcome,
    DEFAULT_J_SUBSET_CAP,
};
use crnpersist::{analyze, AnalysisConfig, Network};
use num_traits::Signed;

#[derive(Parser)]
#[command(name = "crnpersist", version, about = "Exact persistence analysis for mass-action reaction networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis: structure, siphons, certificates and verdict.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        /// Treat trajectories as bounded when no structural argument applies.
        #[arg(long)]
        assume_bounded: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// List siphons with their classification.
    Siphons {
        file: PathBuf,
        /// Only inclusion-minimal siphons.
        #[arg(long)]
        minimal: bool,
        #[arg(long, default_value_t = DEFAULT_SIPHON_CAP, value_parser = positive)]
        siphon_cap: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Complex graph, deficiency and conservation summary.
    Structure {
        file: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Integrate the mass-action ODE and write the trajectory as CSV.
    Simulate {
        file: PathBuf,
        /// Initial state, comma separated (default: all ones).
        #[arg(long, value_delimiter = ',')]
        x0: Option<Vec<f64>>,
        /// Rate constants replacing those in the file, comma separated.
        #[arg(long, value_delimiter = ',')]
        rates: Option<Vec<f64>>,
        #[arg(long, default_value_t = 50.0)]
        t_final: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Write CSV here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify one siphon, optionally with an explicit set of pairs.
    Certify {
        file: PathBuf,
        /// Species of the siphon: one-based indices or names, comma separated.
        #[arg(long)]
        siphon: String,
        /// Pairs such as "(3,4),(2,4)", one-based. Omit to run the full search.
        #[arg(long)]
        pairs: Option<String>,
        #[arg(long, value_parser = parse_epsilon)]
        eps: Option<Rational>,
        #[arg(long, default_value_t = DEFAULT_J_SUBSET_CAP, value_parser = positive)]
        j_cap: usize,
        /// Also sample states near the face and check the certificate numerically.
        #[arg(long)]
        probe: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, value_parser = parse_epsilon)]
    eps: Option<Rational>,
    #[arg(long, default_value_t = DEFAULT_J_SUBSET_CAP, value_parser = positive)]
    j_cap: usize,
    #[arg(long, default_value_t = DEFAULT_SIPHON_CAP, value_parser = positive)]
    siphon_cap: usize,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn parse_epsilon(s: &str) -> Result<Rational, String> {
    let q = parse_rational(s).map_err(|e| e.to_string())?;
    if q.is_positive() {
        Ok(q)
    } else {
        Err("epsilon must be positive".into())
    }
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err("expected an integer of at least 1".into()),
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    fn other(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }
}

impl From<SiphonError> for Failure {
    fn from(e: SiphonError) -> Self {
        Self { code: 3, message: e.to_string() }
    }
}

fn load(path: &Path) -> Result<Network, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    parse_network(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::other(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json(value: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn parse_siphon(net: &Network, text: &str) -> Result<Vec<usize>, Failure> {
    let mut set = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let idx = match item.parse::<usize>() {
            Ok(n) if (1..=net.num_species()).contains(&n) => n - 1,
            Ok(n) => return Err(Failure::input(format!("species index {n} out of range"))),
            Err(_) => net
                .species_index(item)
                .ok_or_else(|| Failure::input(format!("unknown species `{item}`")))?,
        };
        set.push(idx);
    }
    set.sort_unstable();
    set.dedup();
    if set.is_empty() {
        return Err(Failure::input("empty siphon"));
    }
    Ok(set)
}

fn parse_pairs(net: &Network, text: &str) -> Result<Vec<OrderPair>, Failure> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Ok(Vec::new());
    }
    let mut pairs = Vec::new();
    for chunk in cleaned.split(")").filter(|s| !s.is_empty()) {
        let body = chunk.trim_start_matches(',').trim_start_matches('(');
        let (a, b) = body
            .split_once(',')
            .ok_or_else(|| Failure::input(format!("malformed pair `{chunk})`")))?;
        let idx = |s: &str| -> Result<usize, Failure> {
            match s.parse::<usize>() {
                Ok(n) if (1..=net.num_reactions()).contains(&n) => Ok(n - 1),
                _ => Err(Failure::input(format!("bad reaction index `{s}`"))),
            }
        };
        pairs.push(OrderPair::new(idx(a)?, idx(b)?));
    }
    Ok(pairs)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze { file, search, assume_bounded, output } => {
            let net = load(&file)?;
            let config = AnalysisConfig {
                epsilon: search.eps.unwrap_or_else(default_epsilon),
                j_subset_cap: search.j_cap,
                siphon_cap: search.siphon_cap,
                assume_bounded,
            };
            let report = analyze(&net, &config)?;
            let text = match output.format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            emit(output.out.as_deref(), &text)
        }
        Command::Siphons { file, minimal, siphon_cap, output } => {
            let net = load(&file)?;
            let records = enumerate_siphons(&net, minimal, siphon_cap)?;
            let text = match output.format {
                Format::Json => json(&records),
                Format::Text => {
                    let label = |s: &[usize]| format!("{{{}}}", net.species_names(s).join(","));
                    let mut out = String::new();
                    let all: Vec<String> = records.iter().map(|r| label(&r.species)).collect();
                    let _ = writeln!(out, "{}", if all.is_empty() { "none".into() } else { all.join(", ") });
                    for r in &records {
                        let _ = writeln!(
                            out,
                            "{}  locking={} critical={} face_dim={}{}",
                            label(&r.species),
                            r.is_locking,
                            r.is_critical,
                            r.geometry.face_dim,
                            if r.geometry.is_vertex {
                                " vertex"
                            } else if r.geometry.is_facet {
                                " facet"
                            } else {
                                ""
                            }
                        );
                    }
                    out
                }
            };
            emit(output.out.as_deref(), &text)
        }
        Command::Structure { file, output } => {
            let net = load(&file)?;
            let s = summarize(&net);
            let text = match output.format {
                Format::Json => json(&s),
                Format::Text => {
                    let yes = |b: bool| if b { "yes" } else { "no" };
                    let mut out = String::new();
                    let _ = writeln!(out, "species m={} reactions r={}", s.species, s.reactions);
                    let _ = writeln!(out, "complexes n={} linkage classes l={} rank s={}", s.complexes, s.linkage_classes, s.rank);
                    let _ = writeln!(out, "deficiency {}", s.deficiency);
                    let _ = writeln!(out, "weakly reversible: {}", yes(s.weakly_reversible));
                    let _ = writeln!(out, "conservative: {}", yes(s.conservative));
                    let _ = writeln!(out, "complex balanced for all rate constants: {}", yes(s.complex_balanced_for_all_k));
                    out
                }
            };
            emit(output.out.as_deref(), &text)
        }
        Command::Simulate { file, x0, rates, t_final, tol, out } => {
            let net = load(&file)?;
            let x0 = x0.unwrap_or_else(|| vec![1.0; net.num_species()]);
            let traj = integrate(&net, rates.as_deref(), &x0, t_final, tol)
                .map_err(|e| Failure::other(e.to_string()))?;
            emit(out.as_deref(), &traj.to_csv())
        }
        Command::Certify { file, siphon, pairs, eps, j_cap, probe, seed, output } => {
            let net = load(&file)?;
            let set = parse_siphon(&net, &siphon)?;
            let epsilon = eps.unwrap_or_else(default_epsilon);
            let (status_json, status_text, certificate) = match pairs {
                Some(text) => {
                    let pairs = parse_pairs(&net, &text)?;
                    match check_wdne(&net, &set, &pairs, &epsilon).map_err(|e| Failure::input(e.to_string()))? {
                        WdneOutcome::Certified(c) => {
                            let verified = c.verify(&net);
                            let text = format!(
                                "certified: J = {}, epsilon = {}\nc = {}\nalpha = {}\nre-verified: {verified}\n",
                                fmt_pairs(&c.pairs),
                                c.epsilon,
                                fmt_vec(&c.c),
                                fmt_vec(&c.alpha)
                            );
                            let value = serde_json::json!({ "kind": "Certified", "certificate": &c, "verified": verified });
                            (value, text, Some(c))
                        }
                        WdneOutcome::Refuted(v) => {
                            let text = format!(
                                "not certified at epsilon = {epsilon}: cone witness v = {}\n",
                                fmt_vec(&v)
                            );
                            let witness: Vec<String> = v.iter().map(ToString::to_string).collect();
                            let value = serde_json::json!({
                                "kind": "Refuted",
                                "J": pairs,
                                "epsilon": epsilon.to_string(),
                                "witness": witness,
                            });
                            (value, text, None)
                        }
                    }
                }
                None => {
                    let config = CertifyConfig { epsilon: epsilon.clone(), j_subset_cap: j_cap };
                    let status = certify_siphon(&net, &set, &config);
                    let text = format!("{}\n", crnpersist::verdict::rule_for(&status));
                    let cert = status.certificate().cloned();
                    let value = serde_json::json!({
                        "kind": status.kind(),
                        "certificate": cert,
                    });
                    (value, text, cert)
                }
            };
            let probe_report = match (probe, &certificate) {
                (Some(n), Some(c)) => Some(certificate_probe(&net, c, n, seed)),
                _ => None,
            };
            let text = match output.format {
                Format::Json => json(&serde_json::json!({ "status": status_json, "probe": probe_report })),
                Format::Text => {
                    let mut out = status_text;
                    if let Some(p) = &probe_report {
                        for l in &p.levels {
                            let _ = writeln!(
                                out,
                                "probe eta={:e}: premise held in {}/{} samples, violations {}",
                                l.eta, l.premise_satisfied, l.samples, l.violations
                            );
                        }
                    }
                    out
                }
            };
            emit(output.out.as_deref(), &text)
        }
    }
}

fn fmt_vec(v: &[Rational]) -> String {
    let inner: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", inner.join(", "))
}

fn fmt_pairs(p: &[OrderPair]) -> String {
    let inner: Vec<String> = p.iter().map(ToString::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("CRNPERSIST_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n >= 1 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
