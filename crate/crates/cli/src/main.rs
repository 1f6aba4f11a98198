//! `fibre`: decide word, membership, conjugacy and power problems for the
//! fibre product of two copies of a free group over a finitely presented
//! quotient.
//!
//! Every command prints one result line on stdout. Exit codes: 0 for a yes
//! or a computed value, 1 for no, 2 for unknown, 3 for usage and input
//! errors.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fibre_core::{
    area_bounded, brute_area, brute_p_conjugacy, brute_power, canonical_setup, check_c16, dehn_function,
    free_conjugator, p_conjugacy, p_membership, power_avoid, primitive_root, random_instances, random_words,
    rel_cyclics_dehn, AreaSearch, BruteConjugacy, ConjugacyVerdict, CoreError, Decision, PairElement,
    PerturbConfig, PerturbOutcome, PowerDecision, Presentation, SearchBudget, Strategy, StrategyKind,
    StrategySpec, VerifySummary, Word,
};

use report::{pair_text, Report, Verdict};

#[derive(Parser, Debug)]
#[command(name = "fibre", version, about = "Decision problems in fibre products of free groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Presentation file for the quotient Q.
    #[arg(short = 'p', long = "presentation", global = true)]
    presentation: Option<PathBuf>,

    /// Word-problem strategy; chosen from the presentation when omitted.
    #[arg(long, global = true, value_parser = parse_kind)]
    oracle: Option<StrategyKind>,

    /// Step budget for searching strategies.
    #[arg(long, global = true)]
    budget: Option<u64>,

    /// Seed for the `verify` commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Print certificates and traces after the result line.
    #[arg(long, global = true)]
    show_certificate: bool,

    /// Print results as `key=value` records.
    #[arg(long, global = true)]
    structured: bool,
}

#[derive(Args, Debug)]
struct OneWord {
    #[arg(short = 'w', long = "word")]
    word: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Is the word trivial in Q?
    Wp(OneWord),
    /// Least number of relator conjugates whose product is the word.
    Area {
        #[arg(short = 'w', long = "word")]
        word: String,
        /// Largest area searched when the word problem is undecided.
        #[arg(long, default_value_t = 16)]
        max_area: usize,
    },
    /// Value of the Dehn function at n.
    Dehn {
        #[arg(short = 'n')]
        n: usize,
    },
    /// Value of the rel-cyclics Dehn function at n.
    Reldehn {
        #[arg(short = 'n')]
        n: usize,
    },
    /// Is (u, v) in the fibre product P?
    Member {
        #[arg(short = 'u')]
        u: String,
        #[arg(short = 'v')]
        v: String,
    },
    /// Is U = (u1, u2) conjugate to V = (v1, v2) in P?
    Conj {
        #[arg(long)]
        u1: String,
        #[arg(long)]
        u2: String,
        #[arg(long)]
        v1: String,
        #[arg(long)]
        v2: String,
    },
    /// Is w = u^p in Q for some p? Reports the least |p|.
    Power {
        #[arg(short = 'w', long = "word")]
        word: String,
        #[arg(short = 'u')]
        u: String,
    },
    /// Rewrite w, preserving its image in Q, into a word that is not a proper power.
    Perturb {
        #[arg(short = 'w', long = "word")]
        word: String,
        /// Representatives shorter than this are returned unchanged.
        #[arg(long, default_value_t = 1)]
        threshold: usize,
        #[arg(long, default_value_t = 8)]
        kmax: u32,
    },
    /// Primitive root of a word in the free group.
    Root(OneWord),
    /// Conjugacy in the free group, with a conjugator x such that x⁻¹·u·x = v.
    Fconj {
        #[arg(short = 'u')]
        u: String,
        #[arg(short = 'v')]
        v: String,
    },
    /// Generators of P.
    Gens,
    /// Cross-check a decision procedure against its brute-force oracle.
    Verify {
        #[arg(value_enum)]
        target: VerifyTarget,
        /// Number of random instances.
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Word length bound for enumerated or random words.
        #[arg(short = 'n', long, default_value_t = 6)]
        length: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VerifyTarget {
    /// area_bounded against breadth-first search, on every trivial word.
    Area,
    /// p_conjugacy against enumeration of conjugators.
    Conj,
    /// power_decide against testing exponents in turn.
    Power,
}

fn parse_kind(s: &str) -> Result<StrategyKind, String> {
    s.parse().map_err(|_| format!("unknown oracle {s:?} (expected free, abelian, dehn or search)"))
}

/// A failure that ends the run with a message and an exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 3, message: message.into() }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        let code = match e {
            CoreError::Undecided(_)
            | CoreError::BudgetExhausted(_)
            | CoreError::PerturbationExhausted { .. }
            | CoreError::BadCertificate(_) => 2,
            _ => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

fn read_presentation(path: &Path) -> Result<Presentation, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    text.parse::<Presentation>()
        .map_err(|e| Failure::usage(format!("{}:{}:{}: {}", path.display(), e.line, e.column, e.message)))
}

fn parse_word(text: &str, name: &str, pres: Option<&Presentation>) -> Result<Word, Failure> {
    let w: Word = text.parse().map_err(|e| Failure::usage(format!("{name} {text:?}: {e}")))?;
    if let Some(p) = pres {
        p.check_word(&w).map_err(|e| Failure::usage(format!("{name} {text:?}: {e}")))?;
    }
    Ok(w)
}

/// Free if there are no relators, Dehn's algorithm under C′(1/6), the
/// abelianization when Q is certified abelian, and bounded search otherwise.
fn choose_kind(pres: &Presentation) -> StrategyKind {
    if pres.is_free() {
        return StrategyKind::Free;
    }
    if check_c16(pres) {
        return StrategyKind::DehnC16;
    }
    match Strategy::new(pres, StrategySpec::new(StrategyKind::Abelian)) {
        Ok(s) if s.exactness_claim() => StrategyKind::Abelian,
        _ => StrategyKind::BoundedSearch,
    }
}

struct Context {
    pres: Presentation,
    strat: Strategy,
}

fn context(cli: &Cli) -> Result<Context, Failure> {
    let path = cli.presentation.as_ref().ok_or_else(|| Failure::usage("this command needs -p <presentation file>"))?;
    let pres = read_presentation(path)?;
    let kind = cli.oracle.unwrap_or_else(|| choose_kind(&pres));
    let mut spec = StrategySpec::new(kind);
    if let Some(b) = cli.budget {
        spec = spec.with_budget(b);
    }
    let strat = Strategy::new(&pres, spec)?;
    Ok(Context { pres, strat })
}

fn decision_report(command: &'static str, d: Decision) -> Report {
    match d {
        Decision::Yes(cert) => Report::new(command, Verdict::Yes, "YES").certificate(cert.to_string()),
        Decision::No(obs) => Report::new(command, Verdict::No, "NO").certificate(format!("obstruction: {obs}")),
        Decision::Unknown(e) => Report::unknown(command, &e.reason),
    }
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Wp(a) => {
            let cx = context(cli)?;
            let w = parse_word(&a.word, "word", Some(&cx.pres))?;
            Ok(decision_report("wp", cx.strat.wp_decide(&w)?).field("word", w.to_string()))
        }
        Command::Area { word, max_area } => {
            let cx = context(cli)?;
            let w = parse_word(word, "word", Some(&cx.pres))?;
            let search = match cx.strat.wp_decide(&w)? {
                Decision::No(obs) => {
                    return Ok(Report::new("area", Verdict::No, "NO").certificate(format!("obstruction: {obs}")));
                }
                // the certificate bounds the area, so the search below it is exact
                Decision::Yes(cert) => AreaSearch::new(&cx.pres, cert.area()),
                Decision::Unknown(_) => AreaSearch::new(&cx.pres, *max_area),
            };
            let search = match cli.budget {
                Some(b) => search.step_budget(b),
                None => search,
            };
            let r = search.run(&w);
            match (r.value, r.witness) {
                (Some(a), Some(wit)) => Ok(Report::new("area", Verdict::Value, format!("AREA {a}"))
                    .field("word", w.to_string())
                    .field("value", a.to_string())
                    .field("noise", wit.noise().to_string())
                    .certificate(wit.to_string())),
                _ => Ok(Report::unknown("area", &format!("no product of area at most {max_area} found"))),
            }
        }
        Command::Dehn { n } => {
            let cx = context(cli)?;
            let d = dehn_function(*n, &cx.pres, &cx.strat)?;
            Ok(Report::new("dehn", Verdict::Value, format!("DELTA {n} = {}", d.value))
                .field("n", n.to_string())
                .field("value", d.value.to_string())
                .field("word", d.word.to_string())
                .certificate(format!("attained by {}\n{}", d.word, d.witness)))
        }
        Command::Reldehn { n } => {
            let cx = context(cli)?;
            let d = rel_cyclics_dehn(*n, &cx.pres, &cx.strat, &cx.strat)?;
            Ok(Report::new("reldehn", Verdict::Value, format!("DELTAC {n} = {}", d.value))
                .field("n", n.to_string())
                .field("value", d.value.to_string())
                .field("w", d.w.to_string())
                .field("u", d.u.to_string())
                .field("p", d.p.to_string())
                .field("area", d.area.to_string())
                .certificate(format!("attained by w = {}, u = {}, p = {}, area {}", d.w, d.u, d.p, d.area)))
        }
        Command::Member { u, v } => {
            let cx = context(cli)?;
            let pair = PairElement::new(parse_word(u, "u", Some(&cx.pres))?, parse_word(v, "v", Some(&cx.pres))?);
            let setup = canonical_setup(&cx.pres);
            Ok(decision_report("member", p_membership(&pair, &setup, &cx.strat)?).field("pair", pair_text(&pair)))
        }
        Command::Conj { u1, u2, v1, v2 } => {
            let cx = context(cli)?;
            let p = Some(&cx.pres);
            let u = PairElement::new(parse_word(u1, "u1", p)?, parse_word(u2, "u2", p)?);
            let v = PairElement::new(parse_word(v1, "v1", p)?, parse_word(v2, "v2", p)?);
            let setup = canonical_setup(&cx.pres);
            let res = p_conjugacy(&u, &v, &setup, &cx.strat)?;
            let trace = report::trace_text(&res.trace);
            Ok(match &res.verdict {
                ConjugacyVerdict::Yes(g) => {
                    res.replay(&u, &v, &cx.strat)?;
                    Report::new("conj", Verdict::Yes, format!("YES {}", pair_text(g)))
                        .field("conjugator", pair_text(g))
                        .certificate(trace)
                }
                ConjugacyVerdict::No => Report::new("conj", Verdict::No, "NO").certificate(trace),
                ConjugacyVerdict::Unknown(e) => Report::unknown("conj", &e.reason).certificate(trace),
            })
        }
        Command::Power { word, u } => {
            let cx = context(cli)?;
            let w = parse_word(word, "word", Some(&cx.pres))?;
            let u = parse_word(u, "u", Some(&cx.pres))?;
            let d = cx.strat.power_decide(&w, &u)?;
            cx.strat.check_power_decision(&w, &u, &d)?;
            Ok(match d {
                PowerDecision::Yes { p, witness } => Report::new("power", Verdict::Yes, format!("YES {p}"))
                    .field("p", p.to_string())
                    .certificate(witness.to_string()),
                PowerDecision::No(obs) => {
                    Report::new("power", Verdict::No, "NO").certificate(format!("obstruction: {obs}"))
                }
                PowerDecision::Unknown(e) => Report::unknown("power", &e.reason),
            })
        }
        Command::Perturb { word, threshold, kmax } => {
            let cx = context(cli)?;
            let w = parse_word(word, "word", Some(&cx.pres))?;
            let setup = canonical_setup(&cx.pres);
            let cfg = PerturbConfig { threshold: *threshold, k_max: *kmax, ..PerturbConfig::default() };
            let r = power_avoid(&w, &cfg, &setup, &cx.strat)?;
            r.verify(&cx.strat)?;
            let cert = format!("representative {}\n{}", r.representative, r.equality);
            Ok(match &r.outcome {
                PerturbOutcome::Perturbed { word, k } => {
                    Report::new("perturb", Verdict::Value, format!("PERTURBED {word} {k}"))
                        .field("output", word.to_string())
                        .field("k", k.to_string())
                        .certificate(cert)
                }
                PerturbOutcome::Exceptional(x) => {
                    Report::new("perturb", Verdict::Value, format!("EXCEPTIONAL {x}"))
                        .field("output", x.to_string())
                        .certificate(cert)
                }
            })
        }
        Command::Root(a) => {
            let pres = cli.presentation.as_deref().map(read_presentation).transpose()?;
            let w = parse_word(&a.word, "word", pres.as_ref())?;
            let r = primitive_root(&w)?;
            Ok(Report::new("root", Verdict::Value, format!("ROOT {} {}", r.root, r.exponent))
                .field("root", r.root.to_string())
                .field("exponent", r.exponent.to_string()))
        }
        Command::Fconj { u, v } => {
            let pres = cli.presentation.as_deref().map(read_presentation).transpose()?;
            let u = parse_word(u, "u", pres.as_ref())?;
            let v = parse_word(v, "v", pres.as_ref())?;
            Ok(match free_conjugator(&u, &v) {
                Some(x) => Report::new("fconj", Verdict::Yes, format!("YES {x}")).field("conjugator", x.to_string()),
                None => Report::new("fconj", Verdict::No, "NO"),
            })
        }
        Command::Gens => {
            let cx = context(cli)?;
            let setup = canonical_setup(&cx.pres);
            let gens: Vec<String> = setup.p_generators().iter().map(pair_text).collect();
            Ok(Report::new("gens", Verdict::Value, format!("GENS {}", gens.join(" ")))
                .field("count", gens.len().to_string())
                .field("generators", gens.join(";")))
        }
        Command::Verify { target, count, length } => {
            let cx = context(cli)?;
            let budget = SearchBudget { max_length: *length, seed: cli.seed, ..SearchBudget::default() };
            let (name, summary) = match target {
                VerifyTarget::Area => ("area", verify_area(&cx, &budget)?),
                VerifyTarget::Conj => ("conj", verify_conj(&cx, &budget, *count)?),
                VerifyTarget::Power => ("power", verify_power(&cx, &budget, *count)?),
            };
            let verdict = if summary.disagreements == 0 { Verdict::Value } else { Verdict::No };
            Ok(Report::new("verify", verdict, format!("VERIFY {name} {summary}"))
                .field("target", name.to_string())
                .field("instances", summary.instances.to_string())
                .field("agreements", summary.agreements.to_string())
                .field("disagreements", summary.disagreements.to_string())
                .field("unknowns", summary.unknowns.to_string()))
        }
    }
}

fn verify_area(cx: &Context, budget: &SearchBudget) -> Result<VerifySummary, Failure> {
    let mut s = VerifySummary::default();
    for len in 0..=budget.max_length {
        for w in fibre_core::word::reduced_words(cx.pres.generators(), len) {
            if !cx.strat.wp_decide(&w)?.is_yes() {
                continue;
            }
            s.instances += 1;
            let fast = area_bounded(&w, 4 * budget.max_length, &cx.pres).value;
            match (fast, brute_area(&w, &cx.pres, budget)) {
                (Some(a), Ok(b)) if a == b => s.agreements += 1,
                (Some(_), Ok(_)) => s.disagreements += 1,
                _ => s.unknowns += 1,
            }
        }
    }
    Ok(s)
}

fn verify_conj(cx: &Context, budget: &SearchBudget, count: usize) -> Result<VerifySummary, Failure> {
    let setup = canonical_setup(&cx.pres);
    let brute_budget = SearchBudget { max_length: budget.max_length.min(5), ..*budget };
    let mut s = VerifySummary::default();
    for inst in random_instances(&setup, budget, 0.5).take(count) {
        s.instances += 1;
        let res = p_conjugacy(&inst.u, &inst.v, &setup, &cx.strat)?;
        let brute = brute_p_conjugacy(&inst.u, &inst.v, &setup, &brute_budget);
        match (&res.verdict, &brute) {
            (ConjugacyVerdict::Yes(g), _) if fibre_core::verify_conjugator(&inst.u, &inst.v, g, &cx.strat).is_err() => {
                s.disagreements += 1
            }
            (ConjugacyVerdict::Yes(_), BruteConjugacy::Found(_)) => s.agreements += 1,
            (ConjugacyVerdict::No, BruteConjugacy::AbsentWithinBound) => s.agreements += 1,
            (ConjugacyVerdict::No, BruteConjugacy::Found(_)) => s.disagreements += 1,
            _ => s.unknowns += 1,
        }
    }
    Ok(s)
}

fn verify_power(cx: &Context, budget: &SearchBudget, count: usize) -> Result<VerifySummary, Failure> {
    let words = random_words(cx.pres.generators(), budget, 2 * count);
    let brute_budget = SearchBudget { max_length: 8, ..*budget };
    let mut s = VerifySummary::default();
    for pair in words.chunks(2) {
        let (w, u) = (&pair[0], &pair[1]);
        s.instances += 1;
        let fast = cx.strat.power_decide(w, u)?;
        match (fast, brute_power(w, u, &cx.strat, &brute_budget)) {
            (PowerDecision::Yes { p, .. }, Ok(Some(q))) if p.abs() == q.abs() => s.agreements += 1,
            (PowerDecision::Yes { p, .. }, Ok(None)) if p.unsigned_abs() > 8 => s.unknowns += 1,
            (PowerDecision::No(_), Ok(None)) => s.agreements += 1,
            (PowerDecision::Unknown(_), _) | (_, Err(_)) => s.unknowns += 1,
            _ => s.disagreements += 1,
        }
    }
    Ok(s)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(report) => {
            report.print(cli.structured, cli.show_certificate);
            ExitCode::from(report.exit_code())
        }
        Err(f) => {
            if f.code == 2 {
                let r = Report::unknown(cli.command_name(), &f.message);
                r.print(cli.structured, false);
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

impl Cli {
    fn command_name(&self) -> &'static str {
        match self.command {
            Command::Wp(_) => "wp",
            Command::Area { .. } => "area",
            Command::Dehn { .. } => "dehn",
            Command::Reldehn { .. } => "reldehn",
            Command::Member { .. } => "member",
            Command::Conj { .. } => "conj",
            Command::Power { .. } => "power",
            Command::Perturb { .. } => "perturb",
            Command::Root(_) => "root",
            Command::Fconj { .. } => "fconj",
            Command::Gens => "gens",
            Command::Verify { .. } => "verify",
        }
    }
}
