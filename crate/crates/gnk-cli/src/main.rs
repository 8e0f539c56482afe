//! Batch front end: every subcommand reads flags, runs one computation, and
//! prints a JSON report (or a short table with `--pretty`).
//!
//! Exit status: 0 on success, 1 on a verified negative (distinct words, a
//! failed relator suite, a non-minimal word), 2 when a budget ran out or a
//! realization stayed degenerate, 3 on malformed input.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use gnk_core::aut::{g_of_word, Z2FreeWord};
use gnk_core::g2::{
    g2_relators, is_minimal, reduce_to_minimal, reduce_to_minimal_traced, words_equal,
    CommutationMode, MinimalityStatus, ReductionStatus, Verdict,
};
use gnk_core::g3::{certify_minimal_via_phi, verify_phi_well_defined, PhiMinimalityStatus};
use gnk_core::invariant::{f_invariant, phi_invariant, InvariantError, DEFAULT_EPSILON, DEFAULT_RETRIES};
use gnk_core::words::{
    OrderedPairLabel, PairPairGenerator, ParityVector, TripleGenerator, Word,
};
use gnk_core::{parse_braid, DEFAULT_BUDGET};

#[derive(Parser)]
#[command(name = "gnk", version, about = "Braid invariants over involutive pair-labelled groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Ordered,
    UnorderedSets,
}

impl From<ModeArg> for CommutationMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Ordered => CommutationMode::Ordered,
            ModeArg::UnorderedSets => CommutationMode::UnorderedSets,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RelationGroup {
    /// Image of every oriented-triple relator under the pair-doubling map.
    Phi,
    /// Action of every oriented-triple relator on the free product.
    G,
    /// The pair-group's own relators, reduced by the engine.
    G2,
}

#[derive(Clone, Copy, ValueEnum)]
enum MinimalityKind {
    /// Certify a pair-group word directly.
    G2,
    /// Certify an oriented-triple word through its image.
    ViaPhi,
}

#[derive(Args)]
struct SearchOpts {
    /// Commutation reading for the side conditions.
    #[arg(long, value_enum, default_value = "ordered")]
    mode: ModeArg,
    /// State budget for class searches (falls back to GNK_BUDGET, then 10^6).
    #[arg(long)]
    budget: Option<u64>,
}

impl SearchOpts {
    fn budget(&self) -> u64 {
        self.budget
            .or_else(|| std::env::var("GNK_BUDGET").ok().and_then(|v| v.parse().ok()))
            .unwrap_or(DEFAULT_BUDGET)
    }
}

#[derive(Args)]
struct OutputOpts {
    /// Machine-readable JSON report (the default).
    #[arg(long, conflicts_with = "pretty")]
    json: bool,
    /// Short human-readable summary instead of JSON.
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct BraidOpts {
    /// Strand count.
    #[arg(long)]
    n: u8,
    /// Braid word, e.g. "s2 s2" or "s1^-1 s2".
    #[arg(long)]
    braid: String,
    /// Jitter magnitude for the base configuration.
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    /// Jitter seed; retries increment it.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Fresh-seed retries when the realization is degenerate.
    #[arg(long, default_value_t = DEFAULT_RETRIES)]
    retries: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Event word, pair-group certificate, parity and action summary.
    Invariant {
        #[command(flatten)]
        braid: BraidOpts,
        #[command(flatten)]
        search: SearchOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Reduce a pair-group word to certified minimal length.
    Reduce {
        /// Word as JSON: [[[1,2],[1,3]], ...].
        #[arg(long)]
        word: String,
        /// Strand count; inferred from the word when omitted.
        #[arg(long)]
        n: Option<u8>,
        #[command(flatten)]
        search: SearchOpts,
        /// Include the move trace in the certificate.
        #[arg(long)]
        verbose: bool,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Decide equality of two pair-group words.
    Equal {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        #[arg(long)]
        n: Option<u8>,
        #[command(flatten)]
        search: SearchOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Run a relator suite and summarize the verdicts.
    VerifyRelations {
        #[arg(long, value_enum)]
        group: RelationGroup,
        #[arg(long)]
        n: u8,
        #[command(flatten)]
        search: SearchOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Apply the action of an oriented-triple word to a free-product word.
    Act {
        /// Oriented-triple word as JSON: [[1,2,3], ...].
        #[arg(long)]
        word: String,
        /// Free-product word as JSON labels: [[1,2],[3,4], ...].
        #[arg(long)]
        target: String,
        #[arg(long)]
        n: Option<u8>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Certify word minimality (directly, or through the pair image).
    CertifyMinimal {
        /// The word as JSON; letters per --kind.
        #[arg(long)]
        word: String,
        #[arg(long, value_enum, default_value = "g2")]
        kind: MinimalityKind,
        #[arg(long)]
        n: Option<u8>,
        #[command(flatten)]
        search: SearchOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Dump the collinearity events of a stable realization.
    Events {
        #[command(flatten)]
        braid: BraidOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> Result<u8, String> {
    match command {
        Command::Invariant { braid, search, output } => invariant_cmd(braid, search, output.pretty),
        Command::Reduce { word, n, search, verbose, output } => {
            reduce_cmd(&word, n, search, verbose, output.pretty)
        }
        Command::Equal { lhs, rhs, n, search, output } => {
            equal_cmd(&lhs, &rhs, n, search, output.pretty)
        }
        Command::VerifyRelations { group, n, search, output } => {
            verify_cmd(group, n, search, output.pretty)
        }
        Command::Act { word, target, n, output } => act_cmd(&word, &target, n, output.pretty),
        Command::CertifyMinimal { word, kind, n, search, output } => {
            certify_cmd(&word, kind, n, search, output.pretty)
        }
        Command::Events { braid, output } => events_cmd(braid, output.pretty),
    }
}

fn parse_pair_word(text: &str, n: Option<u8>) -> Result<Word<PairPairGenerator>, String> {
    let letters: Vec<PairPairGenerator> =
        serde_json::from_str(text).map_err(|e| format!("bad pair-group word: {e}"))?;
    let n = n.unwrap_or_else(|| infer_n(letters.iter().map(|l| l.max_index_pub())));
    Word::new(n, letters).map_err(|e| e.to_string())
}

fn parse_triple_word(text: &str, n: Option<u8>) -> Result<Word<TripleGenerator>, String> {
    let letters: Vec<TripleGenerator> =
        serde_json::from_str(text).map_err(|e| format!("bad triple word: {e}"))?;
    let n = n.unwrap_or_else(|| infer_n(letters.iter().map(|l| l.support()[2])));
    Word::new(n, letters).map_err(|e| e.to_string())
}

fn infer_n(indices: impl Iterator<Item = u8>) -> u8 {
    indices.max().unwrap_or(3).max(3)
}

trait MaxIndex {
    fn max_index_pub(&self) -> u8;
}

impl MaxIndex for PairPairGenerator {
    fn max_index_pub(&self) -> u8 {
        let a = self.low().index_set();
        let b = self.high().index_set();
        a.1.max(b.1)
    }
}

fn emit(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
}

fn parity_json(p: &ParityVector<PairPairGenerator>) -> serde_json::Value {
    json!({
        "odd": p.odd_generators().collect::<Vec<_>>(),
        "count": p.odd_count(),
    })
}

fn invariant_cmd(braid: BraidOpts, search: SearchOpts, pretty: bool) -> Result<u8, String> {
    let b = parse_braid(&braid.braid, braid.n).map_err(|e| e.to_string())?;
    let mode: CommutationMode = search.mode.into();
    let run = phi_invariant(&b, mode, search.budget(), braid.epsilon, braid.seed, braid.retries);
    let run = match run {
        Ok(run) => run,
        Err(InvariantError::NotPure) => return Err("braid is not pure".into()),
        Err(InvariantError::Degenerate { attempts, last }) => {
            emit(&json!({
                "braid": braid.braid,
                "n": braid.n,
                "degenerate": true,
                "attempts": attempts,
                "stability": *last,
            }));
            return Ok(2);
        }
        Err(InvariantError::Engine(e)) => return Err(e.to_string()),
    };
    let parity = ParityVector::of_letters(&run.certificate.output);
    let action = g_of_word(&run.run.word);
    let certified_nontrivial = run.certificate.status == ReductionStatus::MinimalCertified
        && !run.certificate.output.is_empty()
        || parity.odd_count() > 0;
    let report = json!({
        "braid": braid.braid,
        "n": braid.n,
        "mode": mode,
        "epsilon": braid.epsilon,
        "seed": braid.seed,
        "seed_used": run.run.seed_used,
        "attempts": run.run.attempts,
        "f_word": run.run.word.letters(),
        "events": run.run.events,
        "stability": run.run.stability,
        "phi_image": run.image,
        "phi_certificate": run.certificate,
        "parity": parity_json(&parity),
        "g_action": {
            "is_identity": action.is_identity(),
            "moved_generators": action.moved_generators().count(),
            "images": action,
        },
        "certified_nontrivial": certified_nontrivial,
    });
    if pretty {
        println!(
            "braid {} on {} strands: {} events, f-word length {}",
            braid.braid,
            braid.n,
            run.run.events.len(),
            run.run.word.len()
        );
        println!(
            "phi image {} letters -> {} letters ({:?}, {} states)",
            run.image.len(),
            run.certificate.output.len(),
            run.certificate.status,
            run.certificate.states_explored
        );
        println!(
            "parity: {} odd; action moves {} generators; certified nontrivial: {}",
            parity.odd_count(),
            action.moved_generators().count(),
            certified_nontrivial
        );
    } else {
        emit(&report);
    }
    Ok(if run.certificate.status == ReductionStatus::BudgetExhausted { 2 } else { 0 })
}

fn reduce_cmd(
    word: &str,
    n: Option<u8>,
    search: SearchOpts,
    verbose: bool,
    pretty: bool,
) -> Result<u8, String> {
    let w = parse_pair_word(word, n)?;
    let mode: CommutationMode = search.mode.into();
    let cert = if verbose {
        reduce_to_minimal_traced(w.letters(), mode, search.budget())
    } else {
        reduce_to_minimal(w.letters(), mode, search.budget())
    }
    .map_err(|e| e.to_string())?;
    if pretty {
        println!(
            "{} letters -> {} letters ({:?}, {} states)",
            cert.input.len(),
            cert.output.len(),
            cert.status,
            cert.states_explored
        );
    } else {
        emit(&serde_json::to_value(&cert).map_err(|e| e.to_string())?);
    }
    Ok(if cert.status == ReductionStatus::MinimalCertified { 0 } else { 2 })
}

fn equal_cmd(
    lhs: &str,
    rhs: &str,
    n: Option<u8>,
    search: SearchOpts,
    pretty: bool,
) -> Result<u8, String> {
    let u = parse_pair_word(lhs, n)?;
    let v = parse_pair_word(rhs, n)?;
    if u.n() != v.n() {
        return Err(format!("group contexts differ: n={} vs n={}", u.n(), v.n()));
    }
    let mode: CommutationMode = search.mode.into();
    let outcome =
        words_equal(u.letters(), v.letters(), mode, search.budget()).map_err(|e| e.to_string())?;
    if pretty {
        println!("{:?}", outcome.verdict);
    } else {
        emit(&serde_json::to_value(&outcome).map_err(|e| e.to_string())?);
    }
    Ok(match outcome.verdict {
        Verdict::Equal => 0,
        Verdict::Distinct => 1,
        Verdict::Unknown => 2,
    })
}

fn verify_cmd(group: RelationGroup, n: u8, search: SearchOpts, pretty: bool) -> Result<u8, String> {
    if n < 3 {
        return Err(format!("group context requires n >= 3, got {n}"));
    }
    let mode: CommutationMode = search.mode.into();
    let budget = search.budget();
    match group {
        RelationGroup::Phi => {
            let report = verify_phi_well_defined(n, mode, budget).map_err(|e| e.to_string())?;
            if pretty {
                println!(
                    "phi relator suite n={n} mode={mode}: {} pass, {} fail, {} unknown",
                    report.pass, report.fail, report.unknown
                );
            } else {
                emit(&serde_json::to_value(&report).map_err(|e| e.to_string())?);
            }
            Ok(if report.fail > 0 {
                1
            } else if report.unknown > 0 {
                2
            } else {
                0
            })
        }
        RelationGroup::G => {
            let relators = gnk_core::g3::enumerate_relators_oriented(n);
            let mut failures = Vec::new();
            for r in &relators {
                let action = g_of_word(&r.word);
                if !action.is_identity() {
                    failures.push(json!({
                        "tag": r.tag,
                        "relator": r.word.letters(),
                    }));
                }
            }
            let ok = failures.is_empty();
            if pretty {
                println!(
                    "action relator suite n={n}: {}/{} trivial",
                    relators.len() - failures.len(),
                    relators.len()
                );
            } else {
                emit(&json!({
                    "n": n,
                    "relators": relators.len(),
                    "failures": failures,
                    "pass": ok,
                }));
            }
            Ok(if ok { 0 } else { 1 })
        }
        RelationGroup::G2 => {
            let relators = g2_relators(n, mode);
            let mut fail = 0usize;
            let mut unknown = 0usize;
            for (_, rel) in &relators {
                let cert = reduce_to_minimal(rel, mode, budget).map_err(|e| e.to_string())?;
                match cert.status {
                    ReductionStatus::MinimalCertified if cert.output.is_empty() => {}
                    ReductionStatus::MinimalCertified => fail += 1,
                    ReductionStatus::BudgetExhausted => unknown += 1,
                }
            }
            if pretty {
                println!(
                    "pair-group relator suite n={n} mode={mode}: {} relators, {fail} fail, {unknown} unknown",
                    relators.len()
                );
            } else {
                emit(&json!({
                    "n": n,
                    "mode": mode,
                    "relators": relators.len(),
                    "fail": fail,
                    "unknown": unknown,
                    "pass": fail == 0 && unknown == 0,
                }));
            }
            Ok(if fail > 0 {
                1
            } else if unknown > 0 {
                2
            } else {
                0
            })
        }
    }
}

fn act_cmd(word: &str, target: &str, n: Option<u8>, pretty: bool) -> Result<u8, String> {
    let labels: Vec<OrderedPairLabel> =
        serde_json::from_str(target).map_err(|e| format!("bad free-product word: {e}"))?;
    let max_target = labels.iter().map(|l| l.index_set().1).max().unwrap_or(3);
    let w = parse_triple_word(word, n.or(Some(infer_n(std::iter::once(max_target)))))?;
    if max_target > w.n() {
        return Err(format!("target label index {} exceeds n={}", max_target, w.n()));
    }
    let action = g_of_word(&w);
    let result = action.apply(&Z2FreeWord::new(labels.clone()));
    if pretty {
        println!("{result}");
    } else {
        emit(&json!({
            "word": w.letters(),
            "target": labels,
            "result": result,
            "action": action,
        }));
    }
    Ok(0)
}

fn certify_cmd(
    word: &str,
    kind: MinimalityKind,
    n: Option<u8>,
    search: SearchOpts,
    pretty: bool,
) -> Result<u8, String> {
    let mode: CommutationMode = search.mode.into();
    let budget = search.budget();
    match kind {
        MinimalityKind::G2 => {
            let w = parse_pair_word(word, n)?;
            let cert = is_minimal(w.letters(), mode, budget).map_err(|e| e.to_string())?;
            if pretty {
                println!("{:?}", cert.status);
            } else {
                emit(&serde_json::to_value(&cert).map_err(|e| e.to_string())?);
            }
            Ok(match cert.status {
                MinimalityStatus::MinimalCertified => 0,
                MinimalityStatus::NotMinimal => 1,
                MinimalityStatus::BudgetExhausted => 2,
            })
        }
        MinimalityKind::ViaPhi => {
            let w = parse_triple_word(word, n)?;
            let cert = certify_minimal_via_phi(&w, mode, budget).map_err(|e| e.to_string())?;
            if pretty {
                println!("{:?}", cert.status);
            } else {
                emit(&serde_json::to_value(&cert).map_err(|e| e.to_string())?);
            }
            Ok(match cert.status {
                PhiMinimalityStatus::Minimal => 0,
                PhiMinimalityStatus::Inconclusive => {
                    match cert.image_minimality.status {
                        MinimalityStatus::BudgetExhausted => 2,
                        _ => 1,
                    }
                }
            })
        }
    }
}

fn events_cmd(braid: BraidOpts, pretty: bool) -> Result<u8, String> {
    let b = parse_braid(&braid.braid, braid.n).map_err(|e| e.to_string())?;
    match f_invariant(&b, braid.epsilon, braid.seed, braid.retries) {
        Ok(run) => {
            if pretty {
                for e in &run.events {
                    println!(
                        "t={:.9} triple=({},{},{}) middle={}",
                        e.t, e.triple[0], e.triple[1], e.triple[2], e.middle
                    );
                }
            } else {
                emit(&json!({
                    "braid": braid.braid,
                    "n": braid.n,
                    "epsilon": braid.epsilon,
                    "seed_used": run.seed_used,
                    "attempts": run.attempts,
                    "events": run.events,
                    "stability": run.stability,
                }));
            }
            Ok(0)
        }
        Err(InvariantError::NotPure) => Err("braid is not pure".into()),
        Err(InvariantError::Degenerate { attempts, last }) => {
            emit(&json!({
                "braid": braid.braid,
                "n": braid.n,
                "degenerate": true,
                "attempts": attempts,
                "stability": *last,
            }));
            Ok(2)
        }
        Err(InvariantError::Engine(e)) => Err(e.to_string()),
    }
}
