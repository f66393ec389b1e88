//! Suite runner and deterministic report emission.
//!
//! A suite configuration selects check groups, fixes the search bounds and
//! the sampling seed, and optionally lists index-set pairs for the
//! orthogonality group (a self-pair is a deliberate negative control that
//! turns up as a refutation). Reports are plain JSON with a stable field
//! order: the same configuration and seed always produce the same bytes.
//! Timings go to the progress stream, never into the report.

use std::collections::BTreeSet;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::conditions::{
    check_m, check_perp, mm_witness, perpperp_witness, shift_family_check, Bounds, Outcome,
};
use crate::cylinders::{
    a1_closure_check, commuting_check, decide_relation, fixed_point_check, flip_map, fs_map,
    symmetric_split_is_flip_union, ClopenSet, DescribedPoint, Relation, Sign,
};
use crate::kst::{composition_law_check, verify_family, NestedFamily};
use crate::level_graph::{level_ordering, s_related, verify_level_tree, LevelGraph, ThetaSpec};
use crate::ruler::{beta_alpha, ruler, AlphaSpec, SSpec};
use crate::structures::{
    check_properties, classify_sigma, confirm_verdict, doubled_index, transform, FiniteRelation,
    Property, SigmaClass, SigmaVerdict, TransformKind,
};
use crate::synthesizer::{synthesize, verify_table, Family, SynthesisInstance};
use crate::words::{dense_word, density_witness, nth_word, word_index, Word};

pub const REPORT_SCHEMA: &str = "cantor-lab/report/v1";

/// Selectable check groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Words,
    Graph,
    Ruler,
    Cyl,
    Cond,
    Synth,
    Struct,
    Kst,
}

impl Group {
    pub const ALL: [Group; 8] = [
        Group::Words,
        Group::Graph,
        Group::Ruler,
        Group::Cyl,
        Group::Cond,
        Group::Synth,
        Group::Struct,
        Group::Kst,
    ];
}

impl std::str::FromStr for Group {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "words" => Ok(Group::Words),
            "graph" => Ok(Group::Graph),
            "ruler" => Ok(Group::Ruler),
            "cyl" => Ok(Group::Cyl),
            "cond" => Ok(Group::Cond),
            "synth" => Ok(Group::Synth),
            "struct" => Ok(Group::Struct),
            "kst" => Ok(Group::Kst),
            other => Err(format!("unknown group {:?}", other)),
        }
    }
}

/// What to run and how.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteConfig {
    pub groups: Vec<Group>,
    pub bounds: Bounds,
    pub seed: u64,
    /// Pairs for the orthogonality checks; a self-pair is a negative
    /// control expected to refute.
    pub perp_pairs: Vec<(SSpec, SSpec)>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            groups: Group::ALL.to_vec(),
            bounds: Bounds::default(),
            seed: 0,
            perp_pairs: vec![(
                SSpec::louveau(AlphaSpec::constant(0)),
                SSpec::louveau(AlphaSpec::parse("1", "0")),
            )],
        }
    }
}

/// One check's result row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub group: Group,
    pub name: String,
    pub outcome: Outcome,
    pub details: serde_json::Value,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub refuted: usize,
    pub inconclusive: usize,
}

/// A full suite report; serialization is byte-deterministic for a fixed
/// configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub seed: u64,
    pub bounds: Bounds,
    pub checks: Vec<CheckResult>,
    pub summary: Summary,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.summary.refuted > 0 {
            1
        } else if self.summary.inconclusive > 0 {
            2
        } else {
            0
        }
    }

    pub fn to_json_bytes(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("report serializes");
        out.push(b'\n');
        out
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!("{:?}/{}: {:?}\n", c.group, c.name, c.outcome));
        }
        out.push_str(&format!(
            "pass {}  refuted {}  inconclusive {}\n",
            self.summary.pass, self.summary.refuted, self.summary.inconclusive
        ));
        out
    }
}

/// Writes the report, surfacing the path on failure.
pub fn emit_report(report: &Report, path: &std::path::Path) -> std::io::Result<()> {
    let mut file = std::fs::File::create(path).map_err(|e| {
        std::io::Error::new(e.kind(), format!("writing {}: {}", path.display(), e))
    })?;
    file.write_all(&report.to_json_bytes()).map_err(|e| {
        std::io::Error::new(e.kind(), format!("writing {}: {}", path.display(), e))
    })
}

fn outcome_of(pass: bool) -> Outcome {
    if pass {
        Outcome::Pass
    } else {
        Outcome::Refuted
    }
}

/// Runs the selected groups and assembles the report. The seed drives
/// every sampled check through one deterministic generator.
pub fn run_suite(cfg: &SuiteConfig) -> Report {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for group in &cfg.groups {
        match group {
            Group::Words => words_checks(&mut checks),
            Group::Graph => graph_checks(&mut checks),
            Group::Ruler => ruler_checks(&mut checks, &mut rng),
            Group::Cyl => cyl_checks(&mut checks),
            Group::Cond => cond_checks(&mut checks, cfg, &mut rng),
            Group::Synth => synth_checks(&mut checks),
            Group::Struct => struct_checks(&mut checks),
            Group::Kst => kst_checks(&mut checks, &mut rng),
        }
    }

    let mut summary = Summary::default();
    for c in &checks {
        match c.outcome {
            Outcome::Pass => summary.pass += 1,
            Outcome::Refuted => summary.refuted += 1,
            Outcome::Inconclusive => summary.inconclusive += 1,
        }
    }
    Report {
        schema: REPORT_SCHEMA.to_string(),
        seed: cfg.seed,
        bounds: cfg.bounds.clone(),
        checks,
        summary,
    }
}

fn push(checks: &mut Vec<CheckResult>, group: Group, name: &str, outcome: Outcome, details: serde_json::Value) {
    checks.push(CheckResult {
        group,
        name: name.to_string(),
        outcome,
        details,
    });
}

fn words_checks(checks: &mut Vec<CheckResult>) {
    let listed = ["", "0", "1", "00", "01", "10", "11"];
    let listed_ok = listed
        .iter()
        .enumerate()
        .all(|(n, s)| nth_word(n as u64) == Word::parse(s));
    push(checks, Group::Words, "listed-values", outcome_of(listed_ok), json!({}));

    let top = (1u64 << 11) - 1;
    let mut seen = BTreeSet::new();
    let bijective = (0..top).all(|n| word_index(&nth_word(n)) == n && seen.insert(nth_word(n)));
    push(
        checks,
        Group::Words,
        "enumeration-bijective",
        outcome_of(bijective && seen.len() as u64 == top),
        json!({ "indices": top }),
    );

    let lengths_ok = (0..(1u64 << 12)).all(|n| dense_word(n).len() as u64 == n);
    push(checks, Group::Words, "dense-lengths", outcome_of(lengths_ok), json!({ "max_index": 1u64 << 12 }));

    let density_ok = (0..=8usize).all(|len| {
        Word::all_of_len(len)
            .into_iter()
            .all(|w| w.is_prefix_of(&dense_word(density_witness(&w))))
    });
    push(checks, Group::Words, "density", outcome_of(density_ok), json!({ "max_len": 8 }));
}

fn graph_checks(checks: &mut Vec<CheckResult>) {
    for theta in [ThetaSpec::Zeros, ThetaSpec::DenseSeq] {
        let trees_ok = (0..=8usize).all(|n| {
            let g = LevelGraph::new(theta, n);
            g.edges.len() == (1usize << n) - 1 && g.is_connected()
        });
        let single_ok = (0..=5usize).all(|n| verify_level_tree(theta, n).pass());
        push(
            checks,
            Group::Graph,
            &format!("level-trees-{:?}", theta).to_lowercase(),
            outcome_of(trees_ok && single_ok),
            json!({ "tree_levels": 8, "single_change_levels": 5 }),
        );
        let prefixes_ok = (0..=6u64).all(|p| {
            let order = level_ordering(theta, p);
            (1..order.len()).all(|m| (0..m).any(|j| s_related(theta, &order[j], &order[m]).unwrap()))
        });
        push(
            checks,
            Group::Graph,
            &format!("ordering-prefixes-{:?}", theta).to_lowercase(),
            outcome_of(prefixes_ok),
            json!({ "max_p": 6 }),
        );
    }
}

fn ruler_checks(checks: &mut Vec<CheckResult>, rng: &mut ChaCha8Rng) {
    let periodic_ok = (0..=10u32).all(|n| {
        (0..(1u64 << n).saturating_sub(1))
            .all(|i| (0..=32u64).all(|l| ruler((1u64 << n) * l + i) == ruler(i)))
    });
    push(checks, Group::Ruler, "ruler-periodicity", outcome_of(periodic_ok), json!({ "max_exp": 10, "max_l": 32 }));

    let mut palin_ok = true;
    for _ in 0..20 {
        let pre: Vec<u8> = (0..rng.gen_range(0..3usize)).map(|_| rng.gen_range(0..=1)).collect();
        let per: Vec<u8> = (0..1 + rng.gen_range(0..3usize)).map(|_| rng.gen_range(0..=1)).collect();
        let alpha = AlphaSpec::new(Word::from_bits(pre).unwrap(), Word::from_bits(per).unwrap()).unwrap();
        for n in 0..=12u32 {
            let len = (1u64 << n) - 1;
            let w = Word::from_bits((0..len).map(|i| beta_alpha(&alpha, i))).unwrap();
            palin_ok &= w.is_symmetric();
        }
    }
    push(checks, Group::Ruler, "prefix-palindromes", outcome_of(palin_ok), json!({ "max_exp": 12, "samples": 20 }));

    let specs = [SSpec::shift(0), SSpec::shift(2), SSpec::louveau(AlphaSpec::constant(0))];
    let member_ok = specs.iter().all(|s| {
        let elems: BTreeSet<u64> = s.elements_upto(512).into_iter().collect();
        (0..=512u64).all(|n| s.contains(n) == elems.contains(&n))
    });
    push(checks, Group::Ruler, "membership-vs-materialized", outcome_of(member_ok), json!({ "bound": 512 }));
}

fn cyl_checks(checks: &mut Vec<CheckResult>) {
    // relation sanity on described points
    let x = DescribedPoint::zeros();
    let y = DescribedPoint::parse("1|0");
    let relations_ok = decide_relation(&Relation::As { s: SSpec::omega() }, &x, &y)
        && decide_relation(&Relation::C1, &x, &y)
        && decide_relation(&Relation::E0, &x, &y)
        && decide_relation(&Relation::L0, &x, &y)
        && !decide_relation(&Relation::Delta, &x, &y);
    push(checks, Group::Cyl, "relation-deciders", outcome_of(relations_ok), json!({}));

    let injective_ok = (0..=3u64).all(|n| {
        let map = fs_map(&SSpec::omega(), n);
        let mut seen = BTreeSet::new();
        map.domain()
            .cells_at_depth(6)
            .into_iter()
            .all(|w| seen.insert(map.apply(&ClopenSet::cylinder(w))))
    });
    push(checks, Group::Cyl, "split-maps-injective", outcome_of(injective_ok), json!({ "depth": 6 }));

    // reduced compositions of dense split maps never fix a cylinder
    let mut sweep_ok = true;
    let mut lists: Vec<(Vec<u64>, Vec<Sign>)> = vec![(vec![], vec![])];
    for _ in 0..3 {
        let mut next = Vec::new();
        for (v, e) in &lists {
            for idx in 0..3u64 {
                for s in [Sign::Pos, Sign::Neg] {
                    if let (Some(&pi), Some(&ps)) = (v.last(), e.last()) {
                        if pi == idx && ps == s.flip() {
                            continue;
                        }
                    }
                    let mut v2 = v.clone();
                    let mut e2 = e.clone();
                    v2.push(idx);
                    e2.push(s);
                    next.push((v2, e2));
                }
            }
        }
        for (v, e) in &next {
            sweep_ok &= fixed_point_check(v, e, 8).unwrap().pass();
        }
        lists = next;
    }
    push(checks, Group::Cyl, "no-fixed-cylinders", outcome_of(sweep_ok), json!({ "max_len": 3, "indices": 3, "depth": 8 }));

    let flips: Vec<_> = (0..4).map(flip_map).collect();
    let splits: Vec<_> = (0..4).map(|n| fs_map(&SSpec::omega(), n)).collect();
    let commute_ok = commuting_check(&flips, 0, 1, 4).unwrap().pass()
        && commuting_check(&flips, 2, 3, 4).unwrap().pass()
        && commuting_check(&splits, 0, 1, 4).unwrap().pass()
        && commuting_check(&splits, 1, 3, 5).unwrap().pass();
    push(checks, Group::Cyl, "maps-commute", outcome_of(commute_ok), json!({ "depth": 4 }));

    push(
        checks,
        Group::Cyl,
        "symmetric-split-union",
        outcome_of((1..=4).all(symmetric_split_is_flip_union)),
        json!({ "max_depth": 4 }),
    );
    push(
        checks,
        Group::Cyl,
        "closure-collapse",
        outcome_of((1..=6).all(|d| a1_closure_check(d, 2))),
        json!({ "max_depth": 6 }),
    );
}

fn cond_checks(checks: &mut Vec<CheckResult>, cfg: &SuiteConfig, rng: &mut ChaCha8Rng) {
    let bounds = &cfg.bounds;
    for m in 1..=4u64 {
        let s = SSpec::modular(m, 1..m).unwrap();
        let report = check_m(&s, bounds);
        push(
            checks,
            Group::Cond,
            &format!("window-translation-mod-{}", m),
            report.outcome,
            json!({ "rows": report.rows }),
        );
    }
    let alpha = AlphaSpec::constant(0);
    match mm_witness(&alpha, bounds.p_max.min(6), bounds) {
        Ok(cert) => {
            let louveau = SSpec::louveau(alpha.clone());
            let converted =
                crate::conditions::check_m_with_k(&louveau, cert.p, cert.m_radius, bounds.q_max)
                    .is_ok();
            let ok = converted && cert.replay().is_ok();
            let envelope = crate::conditions::WitnessCert::from(cert);
            push(
                checks,
                Group::Cond,
                "prefix-recurrence",
                outcome_of(ok),
                serde_json::to_value(&envelope).unwrap(),
            );
        }
        Err(e) => push(
            checks,
            Group::Cond,
            "prefix-recurrence",
            Outcome::Refuted,
            json!({ "error": e.to_string() }),
        ),
    }

    for (i, (s1, s2)) in cfg.perp_pairs.iter().enumerate() {
        // find the least window size that separates the pair everywhere
        let found = (0..=bounds.p_max)
            .map(|p| check_perp(s1, s2, p, bounds))
            .find(|r| r.refuting_c.is_none());
        let (outcome, details) = match found {
            Some(r) => (Outcome::Pass, json!({ "p": r.p, "c_max": r.c_max })),
            None => {
                let r = check_perp(s1, s2, bounds.p_max, bounds);
                (Outcome::Refuted, json!({ "p": r.p, "refuting_c": r.refuting_c }))
            }
        };
        push(checks, Group::Cond, &format!("window-disjointness-{}", i), outcome, details);
    }

    // a deterministic sample of orthogonality certificates
    let mut certs_ok = true;
    let mut last_cert = None;
    for _ in 0..10 {
        let a = AlphaSpec::new(
            Word::from_bits((0..3).map(|_| rng.gen_range(0..=1u8))).unwrap(),
            Word::from_bits(vec![rng.gen_range(0..=1u8)]).unwrap(),
        )
        .unwrap();
        let mut pre = a.pre.bits().to_vec();
        while pre.len() < 3 {
            pre.push(a.bit(pre.len() as u64));
        }
        pre[rng.gen_range(0..3usize)] ^= 1;
        let b = AlphaSpec::new(Word::from_bits(pre).unwrap(), a.period.clone()).unwrap();
        if a.same_omega_word(&b) {
            continue;
        }
        match perpperp_witness(&a, &b, bounds) {
            Ok(cert) => {
                certs_ok &= cert.replay().is_ok();
                last_cert = Some(cert);
            }
            Err(_) => certs_ok = false,
        }
    }
    push(
        checks,
        Group::Cond,
        "orthogonality-witnesses",
        outcome_of(certs_ok && last_cert.is_some()),
        last_cert.map_or(json!({}), |c| {
            serde_json::to_value(crate::conditions::WitnessCert::from(c)).unwrap()
        }),
    );

    for n in 0..=2u64 {
        let s_up = SSpec::shift(n + 1);
        let mut pairs = Vec::new();
        while pairs.len() < 60 {
            let pre: Vec<u8> = (0..rng.gen_range(0..5usize)).map(|_| rng.gen_range(0..=1)).collect();
            let x = DescribedPoint::new(
                Word::from_bits(pre).unwrap(),
                Word::from_bits(vec![rng.gen_range(0..=1u8)]).unwrap(),
            )
            .unwrap();
            if pairs.len() % 2 == 0 {
                if let Some(y) = crate::cylinders::fs_eval(&s_up, rng.gen_range(0..5u64), Sign::Pos, &x) {
                    pairs.push((x, y));
                }
            } else {
                let y = x.with_bit(rng.gen_range(0..6u64), rng.gen_range(0..=1));
                pairs.push((x, y));
            }
        }
        let report = shift_family_check(n, &pairs, 64);
        push(
            checks,
            Group::Cond,
            &format!("shift-family-{}", n),
            outcome_of(report.pass()),
            json!({ "pairs": report.pairs_checked, "related_seen": report.related_pairs_seen }),
        );
    }
}

fn synth_checks(checks: &mut Vec<CheckResult>) {
    let specs = [
        SSpec::omega(),
        SSpec::modular(2, []).unwrap(),
        SSpec::modular(3, [1]).unwrap(),
        SSpec::louveau(AlphaSpec::constant(0)),
    ];
    let restrictions = [
        ClopenSet::full(),
        ClopenSet::cylinder(Word::parse("1")),
        ClopenSet::cylinder(Word::parse("11")),
    ];
    let mut round_trip = true;
    let mut mutations_caught = true;
    for s in &specs {
        for b in &restrictions {
            let inst = SynthesisInstance {
                family: Family::As { s: s.clone() },
                restriction: b.clone(),
                depth: 4,
            };
            match synthesize(&inst) {
                Ok(out) if out.is_complete() => {
                    let table = out.table();
                    round_trip &= verify_table(table).unwrap().pass();
                    let mut bad = table.clone();
                    let key = Word::parse("0101");
                    let addr = bad.cells[&key].clone();
                    bad.cells.insert(key, addr.flipped(addr.len() - 1));
                    mutations_caught &= !verify_table(&bad).unwrap().pass();
                }
                _ => round_trip = false,
            }
        }
    }
    for b in [ClopenSet::full(), ClopenSet::cylinder(Word::parse("0"))] {
        let inst = SynthesisInstance {
            family: Family::A1,
            restriction: b,
            depth: 4,
        };
        match synthesize(&inst) {
            Ok(out) if out.is_complete() => {
                round_trip &= verify_table(out.table()).unwrap().pass();
            }
            _ => round_trip = false,
        }
    }
    push(checks, Group::Synth, "round-trip", outcome_of(round_trip), json!({ "depth": 4 }));
    push(checks, Group::Synth, "mutation-detection", outcome_of(mutations_caught), json!({ "depth": 4 }));
}

fn struct_checks(checks: &mut Vec<CheckResult>) {
    use Property::*;
    let mut profiles_ok = true;
    let mut embedding_ok = true;
    for mask in 0u64..(1 << 9) {
        let a = FiniteRelation::from_mask(3, mask);
        let cases: [(TransformKind, &[Property]); 4] = [
            (TransformKind::R, &[Reflexive, Antisymmetric, Transitive]),
            (TransformKind::RPrime, &[Irreflexive, Antisymmetric, Transitive]),
            (TransformKind::S, &[Reflexive, Symmetric]),
            (TransformKind::SPrime, &[Irreflexive, Symmetric]),
        ];
        for (kind, wanted) in cases {
            let t = transform(kind, &a);
            let profile = check_properties(&t);
            profiles_ok &= wanted.iter().all(|p| profile.contains(p));
            for x in 0..3 {
                for y in 0..3 {
                    embedding_ok &=
                        a.contains(x, y) == t.contains(doubled_index(x, 0, 3), doubled_index(y, 1, 3));
                }
            }
        }
    }
    push(checks, Group::Struct, "transform-profiles", outcome_of(profiles_ok), json!({ "points": 3 }));
    push(checks, Group::Struct, "embedding", outcome_of(embedding_ok), json!({ "points": 3 }));

    let classify_ok = SigmaClass::all().into_iter().all(|sigma| {
        let verdict = classify_sigma(&sigma);
        match verdict {
            SigmaVerdict::EmptyClass | SigmaVerdict::DiagonalOnly => {
                confirm_verdict(&sigma, verdict, 3)
            }
            _ => true,
        }
    });
    push(checks, Group::Struct, "class-analysis", outcome_of(classify_ok), json!({ "classes": 32 }));
}

fn kst_checks(checks: &mut Vec<CheckResult>, rng: &mut ChaCha8Rng) {
    let fam = NestedFamily::pow2();
    let family_ok = verify_family(&fam, 6, 1 << 10).pass();
    push(checks, Group::Kst, "family-invariants", outcome_of(family_ok), json!({ "horizon": 1u64 << 10 }));

    let words: Vec<Word> = (0..40)
        .map(|_| Word::from_bits((0..128).map(|_| rng.gen_range(0..=1u8))).unwrap())
        .collect();
    let mut absorb_ok = true;
    for m in 0..=4u32 {
        for n in (m + 1)..=4 {
            absorb_ok &= composition_law_check(&fam, m, n, &words).unwrap().pass();
        }
    }
    push(checks, Group::Kst, "absorption-law", outcome_of(absorb_ok), json!({ "max_level": 4, "words": 40, "horizon": 128 }));
}
