use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use setcong::deduction::DeductionLab;
use setcong::dsl::{parse_family, parse_system, parse_word};
use setcong::finite::{
    search_family, theoretical_bound, verify_family, FiniteFamily, SearchOutcome, Space,
    WitnessAssignment,
};
use setcong::freegroup::Word;
use setcong::lattice::{
    classify, classify_fixture, fixture_catalog, implication_edges, to_dot, SearchBudget, Status,
};
use setcong::numeric::{integerize, numeric_consistency, reduce_to_unc};
use setcong::report::{render_report, render_text, system_json};
use setcong::setgraph::{build_setgraph, check_claim1, check_claim2, check_claim3};
use setcong::sphere::{realize, verify_realization};
use setcong::{CongruenceSystem, Error, Mode};

#[derive(Parser)]
#[command(
    name = "setcong",
    version,
    about = "Analyze systems of set congruences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Partition,
    Family,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Partition => Mode::Partition,
            ModeArg::Family => Mode::Family,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify a system against the satisfiability lattice.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        /// Longest witness word tried by the free-group search.
        #[arg(long, default_value_t = 2)]
        witness_len: usize,
        #[arg(long, default_value_t = 3)]
        radius: usize,
        #[arg(long, default_value_t = 2)]
        generators: usize,
    },
    /// Search a ball of the free group for a family with fixed witnesses.
    Search {
        file: PathBuf,
        /// `i=<word>`, one per statement (1-based).
        #[arg(long = "witness", value_name = "I=WORD")]
        witnesses: Vec<String>,
        #[arg(long)]
        radius: usize,
        /// Number of free generators; defaults to the largest used by a witness (at least 2).
        #[arg(long)]
        generators: Option<usize>,
    },
    /// Check a family against the system with the given witnesses.
    Verify {
        file: PathBuf,
        /// JSON text or a path to a JSON file.
        #[arg(long)]
        family: String,
        #[arg(long = "witness", value_name = "I=WORD")]
        witnesses: Vec<String>,
        #[arg(long)]
        coset: Option<String>,
        #[arg(long)]
        generators: Option<usize>,
    },
    /// Place a finite solution on the sphere with exact rotations.
    Realize {
        file: PathBuf,
        #[arg(long)]
        family: String,
        #[arg(long = "witness", value_name = "I=WORD")]
        witnesses: Vec<String>,
        #[arg(long)]
        coset: Option<String>,
        #[arg(long)]
        generators: Option<usize>,
    },
    /// Build the set-graph of a finite subset of the free group.
    Setgraph {
        /// Words separated by commas (or whitespace when no comma is present).
        #[arg(long)]
        set: String,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        claim: Option<u8>,
        /// Walk length for the third claim; defaults to 2^|P|.
        #[arg(long)]
        length: Option<usize>,
    },
    /// Compare witnessed statements with the deduction closure.
    Deduce {
        file: PathBuf,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// `fibers,seed` for the randomized labelling cross-check.
        #[arg(long, value_name = "FIBERS,SEED")]
        sample: Option<String>,
        /// Accept improper statements (experimental; completeness is not expected).
        #[arg(long)]
        allow_improper: bool,
    },
    /// Reduce a numerically consistent system to a universal one.
    Reduce { file: PathBuf },
    /// Search-radius bound for complete free-group search.
    Bound {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        len: usize,
        #[arg(long)]
        r: usize,
    },
    /// Print the implication graph.
    Lattice {
        #[arg(long)]
        dot: bool,
    },
    /// Classify every catalog system and compare with its expected statuses.
    Fixtures {
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = match err.downcast_ref::<Error>() {
                Some(Error::Parse { .. } | Error::UnknownSetName { .. }) => 2,
                Some(Error::InconsistentEvidence { .. }) => 3,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}

fn read_system(path: &Path) -> anyhow::Result<CongruenceSystem> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_system(&text)?)
}

fn read_json_arg(arg: &str) -> anyhow::Result<String> {
    let path = Path::new(arg);
    if !arg.trim_start().starts_with(['[', '{']) && path.exists() {
        return std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()));
    }
    Ok(arg.to_string())
}

/// `i=<word>` pairs, or bare words taken in order.
fn parse_witnesses(args: &[String], statements: usize) -> anyhow::Result<WitnessAssignment> {
    let mut slots: Vec<Option<Word>> = vec![None; statements];
    for (n, arg) in args.iter().enumerate() {
        let (index, word) = match arg.split_once('=') {
            Some((i, w)) => (
                i.trim()
                    .parse::<usize>()
                    .with_context(|| format!("bad witness index in `{arg}`"))?,
                w,
            ),
            None => (n + 1, arg.as_str()),
        };
        if !(1..=statements).contains(&index) {
            bail!("witness index {index} is outside 1..={statements}");
        }
        slots[index - 1] = Some(parse_word(word)?);
    }
    let words = slots
        .into_iter()
        .enumerate()
        .map(|(i, w)| w.ok_or_else(|| anyhow!("missing witness for statement {}", i + 1)))
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(WitnessAssignment::new(words))
}

fn generators_for(explicit: Option<usize>, words: impl IntoIterator<Item = usize>) -> usize {
    explicit.unwrap_or_else(|| words.into_iter().max().unwrap_or(0).max(2))
}

fn family_json(fam: &FiniteFamily) -> Value {
    let sets: Vec<Vec<String>> = fam
        .sets()
        .iter()
        .map(|s| s.iter().map(Word::to_string).collect())
        .collect();
    match fam.space() {
        Space::Group { .. } => json!({ "sets": sets }),
        Space::Coset(c) => json!({ "sets": sets, "coset": c.generator().to_string() }),
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().write_all(text.as_bytes());
}

fn print_json(v: &Value) {
    emit(&format!(
        "{}\n",
        serde_json::to_string_pretty(v).expect("values serialize")
    ));
}

fn load_family(
    family: &str,
    coset: Option<&str>,
    wit: &WitnessAssignment,
    generators: Option<usize>,
) -> anyhow::Result<FiniteFamily> {
    let json = read_json_arg(family)?;
    let coset = coset.map(parse_word).transpose()?;
    let m = generators_for(
        generators,
        [
            wit.max_generator(),
            coset.as_ref().map_or(0, Word::max_generator),
        ],
    );
    // Family words may use more generators than the witnesses.
    let fam = parse_family(&json, m, coset.as_ref());
    match fam {
        Err(Error::IndexOutOfRange { index, .. }) if generators.is_none() => {
            Ok(parse_family(&json, index, coset.as_ref())?)
        }
        other => Ok(other?),
    }
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Analyze {
            file,
            json,
            witness_len,
            radius,
            generators,
        } => {
            let sys = read_system(&file)?;
            let budget = SearchBudget {
                generators,
                witness_len,
                radius,
                ..SearchBudget::default()
            };
            let c = classify(&sys, &budget)?;
            if json {
                print_json(&render_report(&c));
            } else {
                emit(&render_text(&c));
            }
        }
        Command::Search {
            file,
            witnesses,
            radius,
            generators,
        } => {
            let sys = read_system(&file)?;
            let wit = parse_witnesses(&witnesses, sys.len())?;
            let m = generators_for(generators, [wit.max_generator()]);
            let outcome = search_family(&sys, &wit, m, radius)?;
            let bound = theoretical_bound(m, wit.max_len(), sys.r())
                .map(|(n, b)| json!({"points": n.to_string(), "radius": b.to_string()}))
                .unwrap_or(Value::Null);
            let result = match outcome {
                SearchOutcome::Sat(fam) => json!({"outcome": "sat", "family": family_json(&fam)}),
                SearchOutcome::UnsatWithin(r) => json!({"outcome": "unsat_within", "radius": r}),
            };
            print_json(&json!({
                "system": system_json(&sys),
                "witnesses": wit.words(),
                "generators": m,
                "result": result,
                "complete_search_bound": bound,
            }));
        }
        Command::Verify {
            file,
            family,
            witnesses,
            coset,
            generators,
        } => {
            let sys = read_system(&file)?;
            let wit = parse_witnesses(&witnesses, sys.len())?;
            let fam = load_family(&family, coset.as_deref(), &wit, generators)?;
            let v = verify_family(&fam, &wit, &sys)?;
            print_json(&serde_json::to_value(&v)?);
            if !v.holds {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Realize {
            file,
            family,
            witnesses,
            coset,
            generators,
        } => {
            let sys = read_system(&file)?;
            let wit = parse_witnesses(&witnesses, sys.len())?;
            let fam = load_family(&family, coset.as_deref(), &wit, generators)?;
            let real = realize(&fam, &wit, &sys)?;
            let mut out = real.to_json();
            out["verified"] = json!(verify_realization(&real, &wit, &sys));
            print_json(&out);
        }
        Command::Setgraph { set, claim, length } => {
            let sep: &[char] = if set.contains(',') {
                &[',']
            } else {
                &[' ', '\t', '\n']
            };
            let p: BTreeSet<Word> = set
                .split(sep)
                .filter(|t| !t.trim().is_empty())
                .map(parse_word)
                .collect::<setcong::Result<_>>()?;
            let g = build_setgraph(&p)?;
            let length = length.unwrap_or_else(|| 1usize << p.len().min(20));
            let mut out = json!({
                "set": p.iter().map(Word::to_string).collect::<Vec<_>>(),
                "vertices": g.vertex_count(),
                "edges": g.edges().len(),
                "good_edges": g.edges().iter().filter(|e| e.good).count(),
            });
            let claims: Vec<u8> = claim.map_or(vec![1, 2, 3], |c| vec![c]);
            for c in claims {
                let holds = match c {
                    1 => check_claim1(&g),
                    2 => check_claim2(&g),
                    _ => check_claim3(&g, length)?,
                };
                out[format!("claim{c}")] = json!(holds);
            }
            print_json(&out);
        }
        Command::Deduce {
            file,
            depth,
            mode,
            sample,
            allow_improper,
        } => {
            let sys = read_system(&file)?;
            let mode = mode.map_or(sys.mode(), Mode::from);
            let lab = if allow_improper {
                DeductionLab::allowing_improper(&sys, mode)?
            } else {
                DeductionLab::new(&sys, mode)?
            };
            let report = lab.completeness_check(depth)?;
            let mut out = json!({
                "system": system_json(&sys),
                "mode": mode,
                "generators": lab.m(),
                "depth": depth,
                "designated_witnessing": lab.designated_witnessing()?,
                "completeness": report,
            });
            if let Some(spec) = sample {
                let (fibers, seed) = spec
                    .split_once(',')
                    .ok_or_else(|| anyhow!("--sample expects FIBERS,SEED"))?;
                let fibers: usize = fibers.trim().parse().context("bad fiber count")?;
                let seed: u64 = seed.trim().parse().context("bad seed")?;
                out["sample"] = serde_json::to_value(lab.sample_model(depth, fibers, seed))?;
            }
            print_json(&out);
        }
        Command::Reduce { file } => {
            let sys = read_system(&file)?;
            let weights = numeric_consistency(&sys).ok_or(Error::NotNumericallyConsistent)?;
            let (map, s) = reduce_to_unc(&sys)?;
            print_json(&json!({
                "system": system_json(&sys),
                "weights": weights.mu.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
                "integer_weights": integerize(&weights.mu).iter().map(|n| n.to_string()).collect::<Vec<_>>(),
                "universal_size": s,
                "map": map.pi,
            }));
        }
        Command::Bound { m, len, r } => {
            let (n, b) = theoretical_bound(m, len, r)?;
            print_json(&json!({"points": n.to_string(), "radius": b.to_string()}));
        }
        Command::Lattice { dot } => {
            if dot {
                emit(&to_dot());
            } else {
                for e in implication_edges() {
                    let open = if e.converse_is_open() {
                        " (converse open)"
                    } else {
                        ""
                    };
                    emit(&format!("{} -> {} {:?}{open}\n", e.from, e.to, e.kind));
                }
            }
        }
        Command::Fixtures { json } => {
            let budget = SearchBudget::default();
            let mut all_ok = true;
            let mut reports = Vec::new();
            for f in fixture_catalog() {
                let c = classify_fixture(&f, &budget)?;
                let mismatches: Vec<String> = f
                    .expected
                    .iter()
                    .filter(|(n, s)| c.properties.status(*n) != *s)
                    .map(|(n, s)| format!("{n}: expected {s}, got {}", c.properties.status(*n)))
                    .collect();
                all_ok &= mismatches.is_empty();
                if json {
                    let mut rep = render_report(&c);
                    rep["name"] = json!(f.name);
                    rep["mismatches"] = json!(mismatches);
                    reports.push(rep);
                } else {
                    let shown: Vec<String> = f
                        .expected
                        .iter()
                        .filter(|(_, s)| *s != Status::Unknown)
                        .map(|(n, s)| format!("{n}={s}"))
                        .collect();
                    let verdict = if mismatches.is_empty() {
                        "ok"
                    } else {
                        "MISMATCH"
                    };
                    emit(&format!(
                        "{:<18} {verdict:<8} {}\n",
                        f.name,
                        shown.join(" ")
                    ));
                    for m in &mismatches {
                        emit(&format!("    {m}\n"));
                    }
                }
            }
            if json {
                print_json(&Value::Array(reports));
            }
            if !all_ok {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
