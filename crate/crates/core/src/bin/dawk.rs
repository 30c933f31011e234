use clap::{Args, Parser, Subcommand, ValueEnum};
use dawk::automorphisms::{self, B3Word, SL2ZMatrix};
use dawk::presentations::{presentation_of, verify_canonical, Kind, Presentation};
use dawk::report::{Check, Report, Status};
use dawk::rewriting::{self, Budget, Chain, LemmaLibrary, Outcome};
use dawk::root_system::{
    default_catalog_ids, gated_catalog_ids, load_catalog, load_catalog_gated, CatalogEntry,
};
use dawk::suite::{self, Samples};
use dawk::weyl::DoubleAffineWeyl;
use dawk::word::Word;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "dawk",
    version,
    about = "Exact computations in double affine Weyl groups and their Artin-type presentations"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write the JSON output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = automorphisms::DEFAULT_SEED)]
    seed: u64,
    /// Worker threads for relation checks.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the shipped affine types and check marks / comarks.
    Catalog {
        /// Include types that need the weight lattice.
        #[arg(long)]
        gated: bool,
    },
    /// Normal form and matrix of a word in s1..sn, s01, s02, s03, tau.
    Eval {
        #[arg(long = "type")]
        type_id: String,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Check a presentation under the canonical assignment.
    Verify(PresentationArgs),
    /// Print a presentation in the text format (or JSON).
    Present {
        #[command(flatten)]
        p: PresentationArgs,
        #[arg(long)]
        json: bool,
    },
    /// Search for, or replay, a derivation.
    Prove {
        /// Presentation file (text format).
        #[arg(long, conflicts_with = "chain")]
        presentation: Option<String>,
        #[arg(long = "type", conflicts_with_all = ["presentation", "chain"])]
        type_id: Option<String>,
        #[arg(long, requires = "type_id")]
        kind: Option<Kind>,
        #[arg(long, default_value_t = 1)]
        kbound: u32,
        #[arg(long, allow_hyphen_values = true)]
        lhs: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        rhs: Option<String>,
        #[arg(long)]
        max_nodes: Option<usize>,
        /// An equation chain file; the shipped chains are available as lemmas.
        #[arg(long)]
        chain: Option<String>,
        /// Write the trace (JSON lines) here.
        #[arg(long)]
        trace_out: Option<String>,
    },
    /// B3 / SL(2,Z) automorphism checks.
    Auto {
        #[arg(long = "type")]
        type_id: String,
        #[arg(long, default_value = "a b a")]
        b3_word: String,
        /// SL(2,Z) matrix "a,b,c,d"; prints upsilon(u) on generators.
        #[arg(long, allow_hyphen_values = true)]
        sl2z: Option<String>,
        #[arg(long, value_enum, default_value_t = AutoCheck::All)]
        check: AutoCheck,
    },
    /// Every property, fixture and invariant for one type (or all core types).
    PaperSuite {
        #[arg(long = "type")]
        type_id: Option<String>,
        /// Run the core type list.
        #[arg(long, conflicts_with = "type_id")]
        all: bool,
    },
}

#[derive(Args)]
struct PresentationArgs {
    #[arg(long = "type", required_unless_present = "presentation")]
    type_id: Option<String>,
    #[arg(long, required_unless_present = "presentation")]
    kind: Option<Kind>,
    #[arg(long, default_value_t = 1)]
    kbound: u32,
    /// Read the presentation from a file instead.
    #[arg(long, conflicts_with_all = ["type_id", "kind"])]
    presentation: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AutoCheck {
    Descent,
    Center,
    Dual,
    All,
}

/// Failure before any check could run (bad input): exit code 2.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

enum Output {
    Report(Report),
    Text(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli) {
        Ok(Output::Report(mut rep)) => {
            rep.timing_ms = Some(start.elapsed().as_millis() as u64);
            eprintln!("{}", rep.summary_line());
            if let Err(e) = emit(&cli, &rep.to_json()) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if rep.passed() { 0 } else { 1 })
        }
        Ok(Output::Text(t)) => match emit(&cli, &t) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, format!("{text}\n")),
        None => {
            use std::io::Write;
            match writeln!(std::io::stdout().lock(), "{text}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => r,
            }
        }
    }
}

fn group(type_id: &str) -> Result<DoubleAffineWeyl, Usage> {
    Ok(DoubleAffineWeyl::new(load_catalog_gated(type_id)?))
}

fn load_presentation(a: &PresentationArgs) -> Result<Presentation, Usage> {
    if let Some(path) = &a.presentation {
        let text = std::fs::read_to_string(path).map_err(|e| Usage(format!("{path}: {e}")))?;
        return Ok(Presentation::from_text(&text)?);
    }
    let (t, k) = (a.type_id.as_deref().unwrap(), a.kind.unwrap());
    Ok(presentation_of(k, &load_catalog_gated(t)?, a.kbound)?)
}

fn run(cli: &Cli) -> Result<Output, Usage> {
    let jobs = cli.jobs.max(1);
    match &cli.cmd {
        Cmd::Catalog { gated } => {
            let mut ids = default_catalog_ids();
            if *gated {
                ids.extend(gated_catalog_ids());
            }
            let data = ids
                .iter()
                .map(|id| load_catalog_gated(id))
                .collect::<Result<Vec<_>, _>>()?;
            let mut rep = suite::catalog_integrity(&data);
            for d in &data {
                rep.push(
                    Check::pass(format!("{}/entry", d.type_id), "catalog entry")
                        .with_witness(serde_json::json!(CatalogEntry::from(d))),
                );
            }
            Ok(Output::Report(rep))
        }
        Cmd::Eval { type_id, word } => {
            let g = group(type_id)?;
            let w = Word::parse(word)?;
            let e = g.word_eval(&w)?;
            let m = g.rho(&e);
            let mut rep = Report::new("eval").for_type(type_id);
            rep.push(
                Check::pass("eval", format!("normal form of {w}")).with_witness(
                    serde_json::json!({
                        "word": w,
                        "normalForm": e,
                        "rho": m.matrix().to_string_rows(),
                        "isIdentity": e.is_identity(),
                    }),
                ),
            );
            rep.push(Check::from_bool(
                "decode",
                "decode(rho(w)) = word_eval(w)",
                g.decode(&m).ok() == Some(e),
            ));
            Ok(Output::Report(rep))
        }
        Cmd::Verify(a) => {
            let p = load_presentation(a)?;
            let t = p
                .type_id
                .clone()
                .ok_or_else(|| Usage("the presentation names no type".into()))?;
            let mut rep = verify_canonical(&group(&t)?, &p, jobs)?;
            rep.suite = format!("verify/{}", p.kind.map_or("custom", |k| k.name()));
            Ok(Output::Report(rep))
        }
        Cmd::Present { p, json } => {
            let p = load_presentation(p)?;
            Ok(Output::Text(if *json {
                serde_json::to_string_pretty(&p)?
            } else {
                p.to_text()
            }))
        }
        Cmd::Prove {
            presentation,
            type_id,
            kind,
            kbound,
            lhs,
            rhs,
            max_nodes,
            chain,
            trace_out,
        } => {
            let (rep, trace) = if let Some(path) = chain {
                prove_chain(path)?
            } else {
                let p = match (presentation, type_id) {
                    (Some(path), _) => {
                        let text = std::fs::read_to_string(path)
                            .map_err(|e| Usage(format!("{path}: {e}")))?;
                        Presentation::from_text(&text)?
                    }
                    (None, Some(t)) => {
                        let k =
                            kind.ok_or_else(|| Usage("--kind is required with --type".into()))?;
                        presentation_of(k, &load_catalog_gated(t)?, *kbound)?
                    }
                    _ => {
                        return Err(Usage(
                            "give --presentation, --type/--kind, or --chain".into(),
                        ))
                    }
                };
                let (l, r) = match (lhs, rhs) {
                    (Some(l), Some(r)) => (p.parse_word(l)?, p.parse_word(r)?),
                    _ => return Err(Usage("--lhs and --rhs are required".into())),
                };
                prove_words(&p, &l, &r, *max_nodes)
            };
            if let (Some(path), Some(t)) = (trace_out, trace) {
                std::fs::write(path, t).map_err(|e| Usage(format!("{path}: {e}")))?;
            }
            Ok(Output::Report(rep))
        }
        Cmd::Auto {
            type_id,
            b3_word,
            sl2z,
            check,
        } => {
            let g = group(type_id)?;
            let w = B3Word::parse(b3_word)?;
            let mut rep = Report::new("auto").for_type(type_id);
            if let Some(s) = sl2z {
                let v: Vec<i64> = s
                    .split(',')
                    .map(|x| x.trim().parse())
                    .collect::<Result<_, _>>()?;
                let [a, b, c, d] = v[..] else {
                    return Err(Usage("--sl2z takes four integers a,b,c,d".into()));
                };
                let u = SL2ZMatrix::new(a, b, c, d)?;
                let images =
                    automorphisms::weyl_auto_to_spec(&g, &automorphisms::sl2z_weyl_auto(&g, &u)?)?;
                rep.push(
                    Check::pass("upsilon", format!("upsilon({u}) on generators"))
                        .with_witness(serde_json::json!(images.images)),
                );
            }
            let run_descent = matches!(check, AutoCheck::Descent | AutoCheck::All);
            if run_descent {
                rep.push(Check::pass("pi", "pi(w)").with_detail(automorphisms::pi(&w).to_string()));
                rep.extend(automorphisms::check_descent_diagram(&g, &w)?);
            }
            if matches!(check, AutoCheck::Center | AutoCheck::All) {
                let (w0, _) = g.longest_element();
                rep.extend(automorphisms::check_conjugation(
                    &g,
                    &B3Word::center(),
                    &g.finite(w0),
                    "center",
                )?);
                rep.push(
                    Check::pass("w0=-1", "whether w0 acts as -1")
                        .with_detail(automorphisms::w0_is_minus_one(&g).to_string()),
                );
            }
            if matches!(check, AutoCheck::Dual | AutoCheck::All) {
                rep.extend(automorphisms::duality_involution_check(&g)?);
            }
            Ok(Output::Report(rep))
        }
        Cmd::PaperSuite { type_id, all } => {
            let ids: Vec<String> = match (type_id, all) {
                (Some(t), _) => vec![t.clone()],
                (None, true) => suite::CORE_TYPES.iter().map(|s| s.to_string()).collect(),
                (None, false) => return Err(Usage("give --type or --all".into())),
            };
            for id in &ids {
                load_catalog(id)?;
            }
            let mut rep = Report::new("paper-suite").with_seed(cli.seed);
            if let [only] = &ids[..] {
                rep.type_id = Some(only.clone());
            }
            for id in &ids {
                let r = suite::paper_suite(id, cli.seed, jobs, Samples::default())?;
                if ids.len() == 1 {
                    rep.extend(r);
                } else {
                    rep.extend_prefixed(id, r);
                }
            }
            Ok(Output::Report(rep))
        }
    }
}

fn prove_words(
    p: &Presentation,
    l: &Word,
    r: &Word,
    max_nodes: Option<usize>,
) -> (Report, Option<String>) {
    let mut budget = Budget::default_for(l, r);
    if let Some(n) = max_nodes {
        budget.max_nodes = n;
    }
    let mut rep = Report::new("prove");
    rep.type_id = p.type_id.clone();
    let anchor = format!("{l} = {r}");
    match rewriting::equal_modulo(p, &LemmaLibrary::new(), l, r, budget) {
        Ok(Outcome::Proved { trace, stats }) => {
            rep.push(
                Check::pass("equal", anchor)
                    .with_detail(format!(
                        "{} steps, {} nodes",
                        trace.steps.len(),
                        stats.nodes
                    ))
                    .with_witness(serde_json::json!(trace.steps)),
            );
            (rep, Some(trace.to_json_lines()))
        }
        Ok(Outcome::Unknown { stats }) => {
            rep.push(
                Check::new("equal", anchor, Status::Unknown)
                    .with_detail(format!("budget exhausted after {} nodes", stats.nodes)),
            );
            (rep, None)
        }
        Err(e) => {
            rep.push(Check::new("equal", anchor, Status::Fail).with_detail(e.to_string()));
            (rep, None)
        }
    }
}

fn prove_chain(path: &str) -> Result<(Report, Option<String>), Usage> {
    let text = std::fs::read_to_string(path).map_err(|e| Usage(format!("{path}: {e}")))?;
    let chain = Chain::parse(&text)?;
    let (lib, _) = rewriting::prove_shipped_chains()?;
    let mut rep = Report::new("prove-chain");
    rep.type_id = chain.presentation.type_id.clone();
    let anchor = format!("{} = {}", chain.start, chain.end());
    Ok(match chain.prove(&lib) {
        Ok(lemma) => {
            rep.push(
                Check::pass(format!("chain/{}", chain.name), anchor)
                    .with_detail(format!("{} steps", lemma.trace.steps.len())),
            );
            (rep, Some(lemma.trace.to_json_lines()))
        }
        Err(e) => {
            rep.push(
                Check::new(format!("chain/{}", chain.name), anchor, Status::Fail)
                    .with_detail(e.to_string()),
            );
            (rep, None)
        }
    })
}
