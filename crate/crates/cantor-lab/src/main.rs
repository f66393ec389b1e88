//! Command-line front end. Every subcommand is a thin wrapper over the
//! library; the exit code reports the verification outcome: 0 all pass,
//! 1 refutation found, 2 inconclusive (a bound ran out), 3 usage error.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use cantor_lab::conditions::{
    check_m, check_perp, check_perp_inv, mm_witness, perpperp_witness, shift_family_check, Bounds,
    ConditionError, Outcome,
};
use cantor_lab::cylinders::{
    a1_closure_check, commuting_check, decide_relation, fixed_point_check, flip_map, fs_map,
    pf_member, support_fill_map, ClopenSet, DescribedPoint, PrefixRewriteMap, Relation, Sign,
};
use cantor_lab::kst::{composition_law_check, verify_family, NestedFamily};
use cantor_lab::level_graph::{verify_level_tree, ThetaSpec};
use cantor_lab::ruler::{AlphaSpec, SSpec};
use cantor_lab::structures::{
    check_properties, classify_sigma, confirm_verdict, transform, FiniteRelation, SigmaClass,
    SigmaVerdict, TransformKind,
};
use cantor_lab::suite::{emit_report, run_suite, Group, SuiteConfig};
use cantor_lab::synthesizer::{
    synthesize, verify_table, Family, ReductionTable, SynthOutcome, SynthesisInstance,
};
use cantor_lab::words::{dense_word, density_witness, nth_word, word_index, Word};

#[derive(Parser)]
#[command(
    name = "cantor-lab",
    version,
    about = "Verification toolkit for word combinatorics, cylinder algebra, and reduction-table synthesis"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum ThetaArg {
    Zeros,
    Dense,
}

impl From<ThetaArg> for ThetaSpec {
    fn from(t: ThetaArg) -> ThetaSpec {
        match t {
            ThetaArg::Zeros => ThetaSpec::Zeros,
            ThetaArg::Dense => ThetaSpec::DenseSeq,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Word enumeration checks and lookups.
    Words(WordsArgs),
    /// Level-graph checks.
    Graph {
        #[command(subcommand)]
        cmd: GraphCmd,
    },
    /// Ruler-sequence checks.
    Ruler(RulerArgs),
    /// Cylinder algebra: relation decisions and map sweeps.
    Cyl {
        #[command(subcommand)]
        cmd: CylCmd,
    },
    /// Condition checks and witness certificates.
    Cond {
        #[command(subcommand)]
        cmd: CondCmd,
    },
    /// Reduction-table synthesis and verification.
    Synth(SynthArgs),
    /// Structure transforms and the property-class analysis.
    #[command(name = "struct")]
    Struct {
        #[command(subcommand)]
        cmd: StructCmd,
    },
    /// Rearrangement-map checks.
    Kst {
        #[command(subcommand)]
        cmd: KstCmd,
    },
    /// Run check groups and emit a deterministic report.
    Suite(SuiteArgs),
}

#[derive(Args)]
struct WordsArgs {
    /// Check the enumeration exhaustively over words up to this length.
    #[arg(long, default_value_t = 10)]
    max_len: u32,
    /// Print the word of this index and exit.
    #[arg(long)]
    index: Option<u64>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Verify the spanning-tree and path properties per level.
    Check {
        #[arg(long, value_enum)]
        theta: ThetaArg,
        #[arg(long, default_value_t = 7)]
        max_level: usize,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
    },
}

#[derive(Args)]
struct RulerArgs {
    /// Verify ruler periodicity and prefix palindromes up to this exponent.
    #[arg(long, default_value_t = 12)]
    max_exp: u32,
    /// Sampled parameters for the palindrome check.
    #[arg(long, default_value_t = 25)]
    samples: usize,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum CylCmd {
    /// Decide membership of a point pair in a relation.
    Decide {
        /// One of: as, a1, c1, e0, l0, delta, pf.
        #[arg(long)]
        rel: String,
        /// Index set for the `as` relation.
        #[arg(long)]
        s: Option<String>,
        /// Described point, as "pre|period".
        #[arg(long)]
        x: String,
        /// Second point; unused by the membership test `pf`.
        #[arg(long)]
        y: Option<String>,
    },
    /// Sweep all cylinders at a depth through a signed composition.
    FixedPoints {
        /// Stages like "0+,1-,0+", applied left to right.
        #[arg(long)]
        stages: String,
        #[arg(long, default_value_t = 12)]
        depth: usize,
    },
    /// Check that two family maps commute with matching domains.
    Commute {
        /// One of: flip, split, fill.
        #[arg(long)]
        family: String,
        /// Index set for the split family.
        #[arg(long)]
        s: Option<String>,
        #[arg(short)]
        m: usize,
        #[arg(short)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Probe the closure collapse of the dense split relation.
    Closure {
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        probe: usize,
    },
}

#[derive(Args)]
struct CondCommon {
    /// Bounds as JSON; defaults otherwise.
    #[arg(long)]
    bounds: Option<String>,
    /// Write the resulting report or certificate here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CondCmd {
    /// Window-translation condition for an index set.
    M {
        #[arg(long)]
        s: String,
        #[command(flatten)]
        common: CondCommon,
    },
    /// Prefix-recurrence certificate for a ruler parameter.
    Mm {
        /// Parameter as "pre|period".
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 4)]
        p: u64,
        #[command(flatten)]
        common: CondCommon,
    },
    /// Translated-window disjointness of two index sets.
    Perp {
        #[arg(long)]
        s: String,
        #[arg(long)]
        s2: String,
        #[arg(long, default_value_t = 4)]
        p: u64,
        /// Check the inverse direction instead.
        #[arg(long)]
        inverse: bool,
        #[command(flatten)]
        common: CondCommon,
    },
    /// Orthogonality witness for two ruler parameters.
    Perpperp {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        alpha2: String,
        #[command(flatten)]
        common: CondCommon,
    },
    /// Shift-family reduction check.
    Shift {
        #[arg(long, default_value_t = 0)]
        n: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        common: CondCommon,
    },
}

#[derive(Args)]
struct SynthArgs {
    /// Verify a previously written table instead of building one.
    #[arg(long)]
    verify_table: Option<PathBuf>,
    /// One of: as, a1.
    #[arg(long, default_value = "as")]
    family: String,
    /// Index set for the `as` family.
    #[arg(long)]
    s: Option<String>,
    /// Restriction cylinder address; empty for the full space.
    #[arg(long, default_value = "")]
    b: String,
    #[arg(long, default_value_t = 4)]
    depth: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum StructCmd {
    /// Apply a doubling transform to a finite relation.
    Transform {
        /// One of: r, rp, s, sp.
        #[arg(long)]
        kind: String,
        /// Relation as JSON, e.g. {"n":2,"pairs":[[0,1]]}.
        #[arg(long)]
        rel: String,
    },
    /// Classify a selection of the five basic properties.
    Classify {
        /// Comma-separated property indices, e.g. "0,2,4".
        #[arg(long, default_value = "")]
        sigma: String,
    },
    /// Exhaustive transform profiles over a small ground set.
    Check {
        #[arg(long, default_value_t = 3)]
        points: usize,
    },
}

#[derive(Subcommand)]
enum KstCmd {
    /// Family invariants and the absorption law.
    Check {
        /// Only the built-in "pow2" family is available.
        #[arg(long, default_value = "pow2")]
        family: String,
        #[arg(long, default_value_t = 4096)]
        horizon: u64,
        #[arg(long, default_value_t = 6)]
        max_level: u32,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Args)]
struct SuiteArgs {
    /// Suite configuration file (JSON).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated group list overriding the configuration.
    #[arg(long)]
    groups: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

/// Anything that should terminate with exit code 3.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help and version through this path as well
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(outcome) => ExitCode::from(match outcome {
            Outcome::Pass => 0u8,
            Outcome::Refuted => 1,
            Outcome::Inconclusive => 2,
        }),
        Err(UsageError(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(3)
        }
    }
}

fn env_seed() -> Option<u64> {
    std::env::var("CANTOR_LAB_SEED").ok().and_then(|v| v.parse().ok())
}

fn pick_seed(flag: Option<u64>) -> u64 {
    env_seed().or(flag).unwrap_or(0)
}

fn parse_sspec(text: &str) -> Result<SSpec, UsageError> {
    let spec: SSpec =
        serde_json::from_str(text).map_err(|e| UsageError(format!("bad index-set JSON: {}", e)))?;
    spec.validate()?;
    Ok(spec)
}

fn parse_bounds(text: &Option<String>) -> Result<Bounds, UsageError> {
    match text {
        None => Ok(Bounds::default()),
        Some(t) => {
            Ok(serde_json::from_str(t).map_err(|e| UsageError(format!("bad bounds JSON: {}", e)))?)
        }
    }
}

fn parse_point(text: &str) -> Result<DescribedPoint, UsageError> {
    text.parse::<DescribedPoint>().map_err(UsageError::from)
}

fn parse_alpha(text: &str) -> Result<AlphaSpec, UsageError> {
    let p = parse_point(text)?;
    Ok(AlphaSpec::new(p.pre().clone(), p.period().clone())?)
}

fn write_or_print(value: &serde_json::Value, out: &Option<PathBuf>) -> Result<(), UsageError> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    match out {
        None => {
            print!("{}", text);
            Ok(())
        }
        Some(path) => std::fs::write(path, text)
            .map_err(|e| UsageError(format!("writing {}: {}", path.display(), e))),
    }
}

fn run(cli: Cli) -> Result<Outcome, UsageError> {
    match cli.cmd {
        Cmd::Words(args) => words_cmd(args),
        Cmd::Graph { cmd } => graph_cmd(cmd),
        Cmd::Ruler(args) => ruler_cmd(args),
        Cmd::Cyl { cmd } => cyl_cmd(cmd),
        Cmd::Cond { cmd } => cond_cmd(cmd),
        Cmd::Synth(args) => synth_cmd(args),
        Cmd::Struct { cmd } => struct_cmd(cmd),
        Cmd::Kst { cmd } => kst_cmd(cmd),
        Cmd::Suite(args) => suite_cmd(args),
    }
}

fn words_cmd(args: WordsArgs) -> Result<Outcome, UsageError> {
    if let Some(n) = args.index {
        println!("{}", nth_word(n));
        return Ok(Outcome::Pass);
    }
    let top = (1u64 << (args.max_len + 1)) - 1;
    let mut seen = BTreeSet::new();
    let bijective = (0..top).all(|n| word_index(&nth_word(n)) == n && seen.insert(nth_word(n)));
    let density = (0..=args.max_len.min(10) as usize).all(|len| {
        Word::all_of_len(len)
            .into_iter()
            .all(|w| w.is_prefix_of(&dense_word(density_witness(&w))))
    });
    let ok = bijective && seen.len() as u64 == top && density;
    match args.format {
        FormatArg::Json => write_or_print(
            &json!({
                "max_len": args.max_len,
                "enumeration_bijective": bijective,
                "density": density,
            }),
            &None,
        )?,
        FormatArg::Text => println!(
            "words up to length {}: {}",
            args.max_len,
            if ok { "pass" } else { "refuted" }
        ),
    }
    Ok(if ok { Outcome::Pass } else { Outcome::Refuted })
}

fn graph_cmd(cmd: GraphCmd) -> Result<Outcome, UsageError> {
    let GraphCmd::Check { theta, max_level, format } = cmd;
    let theta: ThetaSpec = theta.into();
    let mut rows = Vec::new();
    let mut ok = true;
    for n in 0..=max_level {
        let report = verify_level_tree(theta, n);
        ok &= report.pass();
        rows.push(report);
    }
    match format {
        FormatArg::Json => write_or_print(&serde_json::to_value(&rows).unwrap(), &None)?,
        FormatArg::Text => {
            for r in &rows {
                println!(
                    "level {:2}: edges {:5}, connected {}, single-change {}",
                    r.level, r.edge_count, r.connected, r.single_change_ok
                );
            }
        }
    }
    Ok(if ok { Outcome::Pass } else { Outcome::Refuted })
}

fn ruler_cmd(args: RulerArgs) -> Result<Outcome, UsageError> {
    use cantor_lab::ruler::{beta_alpha, ruler};
    let mut rng = ChaCha8Rng::seed_from_u64(pick_seed(args.seed));
    let periodic = (0..=args.max_exp.min(12)).all(|n| {
        (0..(1u64 << n).saturating_sub(1))
            .all(|i| (0..=64u64).all(|l| ruler((1u64 << n) * l + i) == ruler(i)))
    });
    let mut palindromes = true;
    for _ in 0..args.samples {
        let pre: Vec<u8> = (0..rng.gen_range(0..3usize)).map(|_| rng.gen_range(0..=1)).collect();
        let per: Vec<u8> =
            (0..1 + rng.gen_range(0..4usize)).map(|_| rng.gen_range(0..=1)).collect();
        let alpha =
            AlphaSpec::new(Word::from_bits(pre).unwrap(), Word::from_bits(per).unwrap()).unwrap();
        for n in 0..=args.max_exp {
            let len = (1u64 << n) - 1;
            let w = Word::from_bits((0..len).map(|i| beta_alpha(&alpha, i))).unwrap();
            palindromes &= w.is_symmetric();
        }
    }
    let ok = periodic && palindromes;
    write_or_print(
        &json!({ "max_exp": args.max_exp, "periodicity": periodic, "palindromes": palindromes }),
        &None,
    )?;
    Ok(if ok { Outcome::Pass } else { Outcome::Refuted })
}

fn family_maps(
    name: &str,
    s: &Option<String>,
    count: usize,
) -> Result<Vec<PrefixRewriteMap>, UsageError> {
    match name {
        "flip" => Ok((0..count as u64).map(flip_map).collect()),
        "fill" => Ok((0..count as u64).map(support_fill_map).collect()),
        "split" => {
            let spec = match s {
                Some(text) => parse_sspec(text)?,
                None => SSpec::omega(),
            };
            Ok((0..count as u64).map(|n| fs_map(&spec, n)).collect())
        }
        other => Err(UsageError(format!("unknown family {:?}", other))),
    }
}

fn cyl_cmd(cmd: CylCmd) -> Result<Outcome, UsageError> {
    match cmd {
        CylCmd::Decide { rel, s, x, y } => {
            let x = parse_point(&x)?;
            let result = match rel.as_str() {
                "pf" => pf_member(&x),
                name => {
                    let y = parse_point(&y.ok_or(UsageError("--y required".into()))?)?;
                    let rel = match name {
                        "as" => Relation::As {
                            s: parse_sspec(&s.ok_or(UsageError("--s required for as".into()))?)?,
                        },
                        "a1" => Relation::A1,
                        "c1" => Relation::C1,
                        "e0" => Relation::E0,
                        "l0" => Relation::L0,
                        "delta" => Relation::Delta,
                        other => return Err(UsageError(format!("unknown relation {:?}", other))),
                    };
                    decide_relation(&rel, &x, &y)
                }
            };
            write_or_print(&json!({ "member": result }), &None)?;
            Ok(Outcome::Pass)
        }
        CylCmd::FixedPoints { stages, depth } => {
            let mut indices = Vec::new();
            let mut signs = Vec::new();
            for part in stages.split(',').filter(|p| !p.is_empty()) {
                let (num, sign) = part.split_at(part.len() - 1);
                indices.push(
                    num.parse::<u64>()
                        .map_err(|e| UsageError(format!("bad stage {:?}: {}", part, e)))?,
                );
                signs.push(match sign {
                    "+" => Sign::Pos,
                    "-" => Sign::Neg,
                    other => return Err(UsageError(format!("bad sign {:?}", other))),
                });
            }
            let report = fixed_point_check(&indices, &signs, depth)?;
            let pass = report.pass();
            write_or_print(&serde_json::to_value(&report).unwrap(), &None)?;
            Ok(if pass { Outcome::Pass } else { Outcome::Refuted })
        }
        CylCmd::Commute { family, s, m, n, depth } => {
            let maps = family_maps(&family, &s, m.max(n) + 1)?;
            let report = commuting_check(&maps, m, n, depth)?;
            let pass = report.pass();
            write_or_print(&serde_json::to_value(&report).unwrap(), &None)?;
            Ok(if pass { Outcome::Pass } else { Outcome::Refuted })
        }
        CylCmd::Closure { depth, probe } => {
            let ok = (1..=depth).all(|d| a1_closure_check(d, probe));
            write_or_print(&json!({ "depth": depth, "probe": probe, "collapse": ok }), &None)?;
            Ok(if ok { Outcome::Pass } else { Outcome::Refuted })
        }
    }
}

fn condition_error_outcome(e: ConditionError) -> Result<Outcome, UsageError> {
    match e {
        ConditionError::WitnessContradiction(msg) => {
            eprintln!("refuted: {}", msg);
            Ok(Outcome::Refuted)
        }
        ConditionError::ScanExhausted(_, _) => {
            eprintln!("inconclusive: {}", e);
            Ok(Outcome::Inconclusive)
        }
        other => Err(UsageError(other.to_string())),
    }
}

fn cond_cmd(cmd: CondCmd) -> Result<Outcome, UsageError> {
    match cmd {
        CondCmd::M { s, common } => {
            let spec = parse_sspec(&s)?;
            let bounds = parse_bounds(&common.bounds)?;
            let report = check_m(&spec, &bounds);
            let outcome = report.outcome;
            write_or_print(&serde_json::to_value(&report).unwrap(), &common.out)?;
            Ok(outcome)
        }
        CondCmd::Mm { alpha, p, common } => {
            let alpha = parse_alpha(&alpha)?;
            let bounds = parse_bounds(&common.bounds)?;
            match mm_witness(&alpha, p, &bounds) {
                Ok(cert) => {
                    let envelope = cantor_lab::conditions::WitnessCert::from(cert);
                    write_or_print(&serde_json::to_value(&envelope).unwrap(), &common.out)?;
                    Ok(Outcome::Pass)
                }
                Err(e) => condition_error_outcome(e),
            }
        }
        CondCmd::Perp { s, s2, p, inverse, common } => {
            let s1 = parse_sspec(&s)?;
            let s2 = parse_sspec(&s2)?;
            let bounds = parse_bounds(&common.bounds)?;
            let report = if inverse {
                check_perp_inv(&s1, &s2, p, &bounds)
            } else {
                check_perp(&s1, &s2, p, &bounds)
            };
            let outcome = report.outcome();
            write_or_print(&serde_json::to_value(&report).unwrap(), &common.out)?;
            Ok(outcome)
        }
        CondCmd::Perpperp { alpha, alpha2, common } => {
            let a = parse_alpha(&alpha)?;
            let b = parse_alpha(&alpha2)?;
            let bounds = parse_bounds(&common.bounds)?;
            match perpperp_witness(&a, &b, &bounds) {
                Ok(cert) => {
                    let envelope = cantor_lab::conditions::WitnessCert::from(cert);
                    write_or_print(&serde_json::to_value(&envelope).unwrap(), &common.out)?;
                    Ok(Outcome::Pass)
                }
                Err(e) => condition_error_outcome(e),
            }
        }
        CondCmd::Shift { n, samples, seed, common } => {
            let mut rng = ChaCha8Rng::seed_from_u64(pick_seed(seed));
            let s_up = SSpec::shift(n + 1);
            let mut pairs = Vec::new();
            while pairs.len() < samples {
                let pre: Vec<u8> =
                    (0..rng.gen_range(0..6usize)).map(|_| rng.gen_range(0..=1)).collect();
                let x = DescribedPoint::new(
                    Word::from_bits(pre).unwrap(),
                    Word::from_bits(vec![rng.gen_range(0..=1u8)]).unwrap(),
                )
                .unwrap();
                if pairs.len() % 2 == 0 {
                    if let Some(y) =
                        cantor_lab::cylinders::fs_eval(&s_up, rng.gen_range(0..6u64), Sign::Pos, &x)
                    {
                        pairs.push((x, y));
                    }
                } else {
                    let y = x.with_bit(rng.gen_range(0..8u64), rng.gen_range(0..=1));
                    pairs.push((x, y));
                }
            }
            let report = shift_family_check(n, &pairs, 100);
            let pass = report.pass();
            write_or_print(&serde_json::to_value(&report).unwrap(), &common.out)?;
            Ok(if pass { Outcome::Pass } else { Outcome::Refuted })
        }
    }
}

fn synth_cmd(args: SynthArgs) -> Result<Outcome, UsageError> {
    if let Some(path) = args.verify_table {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| UsageError(format!("reading {}: {}", path.display(), e)))?;
        let table: ReductionTable = serde_json::from_str(&text)
            .map_err(|e| UsageError(format!("bad table JSON: {}", e)))?;
        let report = verify_table(&table)?;
        let pass = report.pass();
        write_or_print(&serde_json::to_value(&report).unwrap(), &None)?;
        return Ok(if pass { Outcome::Pass } else { Outcome::Refuted });
    }

    let family = match args.family.as_str() {
        "as" => Family::As {
            s: match &args.s {
                Some(text) => parse_sspec(text)?,
                None => SSpec::omega(),
            },
        },
        "a1" => Family::A1,
        other => return Err(UsageError(format!("unknown family {:?}", other))),
    };
    let restriction = ClopenSet::cylinder(args.b.parse::<Word>()?);
    let inst = SynthesisInstance {
        family,
        restriction,
        depth: args.depth,
    };
    match synthesize(&inst)? {
        SynthOutcome::Complete(table) => {
            let report = verify_table(&table)?;
            let mut doc = serde_json::to_value(&table).unwrap();
            doc["schema"] = json!("cantor-lab/table/v1");
            doc["verification"] = json!({
                "depth_checked": report.depth_checked,
                "violations": report.violations.len(),
            });
            write_or_print(&doc, &args.out)?;
            Ok(if report.pass() { Outcome::Pass } else { Outcome::Refuted })
        }
        SynthOutcome::Partial { table, reason } => {
            let mut doc = serde_json::to_value(&table).unwrap();
            doc["partial"] =
                json!({ "completed_depth": table.completed_depth(), "reason": reason });
            write_or_print(&doc, &args.out)?;
            Ok(Outcome::Inconclusive)
        }
    }
}

fn struct_cmd(cmd: StructCmd) -> Result<Outcome, UsageError> {
    match cmd {
        StructCmd::Transform { kind, rel } => {
            let kind = match kind.as_str() {
                "r" => TransformKind::R,
                "rp" => TransformKind::RPrime,
                "s" => TransformKind::S,
                "sp" => TransformKind::SPrime,
                other => return Err(UsageError(format!("unknown transform {:?}", other))),
            };
            let rel: FiniteRelation = serde_json::from_str(&rel)
                .map_err(|e| UsageError(format!("bad relation JSON: {}", e)))?;
            let rel = FiniteRelation::new(rel.n, rel.pairs)?; // range check
            let out = transform(kind, &rel);
            let profile = check_properties(&out);
            write_or_print(&json!({ "relation": out, "profile": profile }), &None)?;
            Ok(Outcome::Pass)
        }
        StructCmd::Classify { sigma } => {
            let mut indices = Vec::new();
            for part in sigma.split(',').filter(|p| !p.is_empty()) {
                let i: usize = part
                    .parse()
                    .map_err(|e| UsageError(format!("bad index {:?}: {}", part, e)))?;
                if i > 4 {
                    return Err(UsageError(format!("property index {} out of range", i)));
                }
                indices.push(i);
            }
            let class = SigmaClass::from_indices(indices);
            let verdict = classify_sigma(&class);
            let confirmed = match verdict {
                SigmaVerdict::EmptyClass | SigmaVerdict::DiagonalOnly => {
                    Some(confirm_verdict(&class, verdict, 3))
                }
                _ => None,
            };
            let ok = confirmed != Some(false);
            write_or_print(
                &json!({ "sigma": class, "verdict": verdict, "confirmed": confirmed }),
                &None,
            )?;
            Ok(if ok { Outcome::Pass } else { Outcome::Refuted })
        }
        StructCmd::Check { points } => {
            use cantor_lab::structures::{doubled_index, Property};
            let cells = points * points;
            if cells > 16 {
                return Err(UsageError("ground sets above 4 points are not enumerable".into()));
            }
            let mut ok = true;
            for mask in 0u64..(1u64 << cells) {
                let a = FiniteRelation::from_mask(points, mask);
                let wanted: [(TransformKind, &[Property]); 4] = [
                    (
                        TransformKind::R,
                        &[Property::Reflexive, Property::Antisymmetric, Property::Transitive],
                    ),
                    (
                        TransformKind::RPrime,
                        &[Property::Irreflexive, Property::Antisymmetric, Property::Transitive],
                    ),
                    (TransformKind::S, &[Property::Reflexive, Property::Symmetric]),
                    (TransformKind::SPrime, &[Property::Irreflexive, Property::Symmetric]),
                ];
                for (kind, props) in wanted {
                    let t = transform(kind, &a);
                    let profile = check_properties(&t);
                    ok &= props.iter().all(|p| profile.contains(p));
                    for x in 0..points {
                        for y in 0..points {
                            ok &= a.contains(x, y)
                                == t.contains(
                                    doubled_index(x, 0, points),
                                    doubled_index(y, 1, points),
                                );
                        }
                    }
                }
            }
            write_or_print(&json!({ "points": points, "profiles_and_embedding": ok }), &None)?;
            Ok(if ok { Outcome::Pass } else { Outcome::Refuted })
        }
    }
}

fn kst_cmd(cmd: KstCmd) -> Result<Outcome, UsageError> {
    let KstCmd::Check { family, horizon, max_level, samples, seed } = cmd;
    if family != "pow2" {
        return Err(UsageError(format!("unknown family {:?}", family)));
    }
    let fam = NestedFamily::pow2();
    let family_report = verify_family(&fam, max_level, horizon);
    let mut rng = ChaCha8Rng::seed_from_u64(pick_seed(seed));
    let words: Vec<Word> = (0..samples)
        .map(|_| Word::from_bits((0..256).map(|_| rng.gen_range(0..=1u8))).unwrap())
        .collect();
    let mut absorb = true;
    for m in 0..=max_level.min(6) {
        for n in (m + 1)..=max_level.min(6) {
            absorb &= composition_law_check(&fam, m, n, &words)?.pass();
        }
    }
    let ok = family_report.pass() && absorb;
    write_or_print(&json!({ "family": family_report, "absorption": absorb }), &None)?;
    Ok(if ok { Outcome::Pass } else { Outcome::Refuted })
}

fn suite_cmd(args: SuiteArgs) -> Result<Outcome, UsageError> {
    let mut cfg: SuiteConfig = match &args.config {
        None => SuiteConfig::default(),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| UsageError(format!("reading {}: {}", path.display(), e)))?;
            serde_json::from_str(&text).map_err(|e| UsageError(format!("bad config JSON: {}", e)))?
        }
    };
    for (s1, s2) in &cfg.perp_pairs {
        s1.validate()?;
        s2.validate()?;
    }
    if let Some(groups) = &args.groups {
        cfg.groups = groups
            .split(',')
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<Group>())
            .collect::<Result<_, _>>()
            .map_err(UsageError)?;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(seed) = env_seed() {
        cfg.seed = seed;
    }

    let started = std::time::Instant::now();
    let report = run_suite(&cfg);
    eprintln!(
        "suite: {} checks in {:?} (pass {}, refuted {}, inconclusive {})",
        report.checks.len(),
        started.elapsed(),
        report.summary.pass,
        report.summary.refuted,
        report.summary.inconclusive
    );

    match (&args.out, args.format) {
        (Some(path), _) => emit_report(&report, path)?,
        (None, FormatArg::Json) => print!("{}", String::from_utf8(report.to_json_bytes()).unwrap()),
        (None, FormatArg::Text) => print!("{}", report.render_text()),
    }
    Ok(match report.exit_code() {
        0 => Outcome::Pass,
        1 => Outcome::Refuted,
        _ => Outcome::Inconclusive,
    })
}
