//! Level-by-level synthesis of reduction tables, and an independent
//! verifier for them.
//!
//! A reduction table assigns to every word `s` up to a target depth a
//! cylinder `U_s`, together with a strictly increasing level map `φ` (and,
//! in index-set mode, a 1-count offset `θ`), such that refinements nest,
//! related words at each level are carried onto each other by the split
//! map of the meet level, and unrelated words of equal length have cells
//! meeting neither the low-level split graphs nor the diagonal. The cells
//! approximate a continuous embedding of the full split relation into its
//! restriction to the chosen clopen set.
//!
//! The builder works one level at a time: it orders the next level
//! breadth-first from the labelled root, finds the least admissible new
//! level `n` (and lexicographically least seed cylinder), propagates the
//! seed along the level tree by exact cylinder images, and then checks the
//! level's pair conditions outright before committing. All cells are
//! single cylinders, so every image and disjointness question is an
//! address computation. The verifier retraces none of that: it re-derives
//! each condition from evaluations of the split maps on described points.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conditions::{check_m, window_identity, Bounds, Outcome};
use crate::cylinders::{
    f1_eval, fs_eval, words_related_a1, words_related_as, ClopenSet, DescribedPoint, Sign,
};
use crate::level_graph::{level_ordering, related, unique_path, ThetaSpec};
use crate::ruler::SSpec;
use crate::words::{dense_word, Word};

/// Which split family the table embeds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    /// Index-set split maps; levels are ordered by the all-zero labels.
    As { s: SSpec },
    /// Dense-sequence split maps; levels are ordered by the dense labels.
    A1,
}

impl Family {
    fn theta(&self) -> ThetaSpec {
        match self {
            Family::As { .. } => ThetaSpec::Zeros,
            Family::A1 => ThetaSpec::DenseSeq,
        }
    }

    /// Word-level relation at equal length.
    fn words_related(&self, x: &Word, y: &Word) -> bool {
        match self {
            Family::As { s } => words_related_as(s, x, y),
            Family::A1 => words_related_a1(x, y),
        }
    }

    /// Can the level-`q` split map act on this address, and with which
    /// target? `None` when the address is outside the domain (or range,
    /// for the inverse direction).
    fn step_addr(&self, q: u64, sign: Sign, addr: &Word) -> Option<Word> {
        let qi = q as usize;
        debug_assert!(addr.len() > qi);
        let side_ok = match self {
            Family::As { s } => s.contains(addr.prefix(qi).count_ones()),
            Family::A1 => addr.prefix(qi) == dense_word(q),
        };
        let want = match sign {
            Sign::Pos => 0,
            Sign::Neg => 1,
        };
        if side_ok && addr.bit(qi) == want {
            Some(addr.flipped(qi))
        } else {
            None
        }
    }

    /// Same step on described points, through the point evaluators.
    fn step_point(&self, q: u64, sign: Sign, x: &DescribedPoint) -> Option<DescribedPoint> {
        match self {
            Family::As { s } => fs_eval(s, q, sign, x),
            Family::A1 => f1_eval(q, sign, x),
        }
    }
}

/// What to synthesize: a family, a clopen restriction, and a depth.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthesisInstance {
    pub family: Family,
    pub restriction: ClopenSet,
    pub depth: u64,
}

/// The synthesized table: one cylinder address per word of length 1..=d,
/// plus the level map and (in index-set mode) the 1-count offsets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionTable {
    pub instance: SynthesisInstance,
    pub cells: BTreeMap<Word, Word>,
    pub phi: Vec<u64>,
    pub theta: Option<Vec<u64>>,
}

impl ReductionTable {
    /// Address of the cell of `x`; the depth-`|x|` approximation of the
    /// embedding at `x`.
    pub fn extract_u(&self, x: &Word) -> Option<&Word> {
        self.cells.get(x)
    }

    /// Deepest level with a full set of cells.
    pub fn completed_depth(&self) -> u64 {
        (1..=self.instance.depth)
            .take_while(|&l| {
                self.cells.iter().filter(|(w, _)| w.len() as u64 == l).count() == 1usize << l
            })
            .last()
            .unwrap_or(0)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("restriction set is empty")]
    EmptyRestriction,
    #[error("window-translation condition unverified for the instance (outcome {0:?})")]
    WindowConditionUnverified(Outcome),
    #[error("level map is not strictly increasing at position {0}")]
    PhiNotIncreasing(usize),
    #[error("table is missing the cell of {0}")]
    MissingCell(Word),
    #[error("offsets missing for index-set mode")]
    MissingTheta,
}

/// Result of a synthesis run. A partial table keeps every fully verified
/// level; the reason records the exhausted search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SynthOutcome {
    Complete(ReductionTable),
    Partial { table: ReductionTable, reason: String },
}

impl SynthOutcome {
    pub fn table(&self) -> &ReductionTable {
        match self {
            SynthOutcome::Complete(t) => t,
            SynthOutcome::Partial { table, .. } => table,
        }
    }

    pub fn is_complete(&self) -> bool {
        matches!(self, SynthOutcome::Complete(_))
    }
}

// how far past the forced minimum each level may scan for its new level
const LEVEL_SCAN_ALLOWANCE: u64 = 512;

/// Builds a reduction table for the instance. The search at each level
/// takes the smallest admissible level and the lexicographically least
/// seed cylinder, so output tables are deterministic. Search exhaustion
/// yields a partial table, never a bogus one: a level is committed only
/// after its pair conditions have been checked outright.
pub fn synthesize(inst: &SynthesisInstance) -> Result<SynthOutcome, SynthError> {
    if inst.restriction.is_empty() {
        return Err(SynthError::EmptyRestriction);
    }
    if let Family::As { s } = &inst.family {
        let bounds = Bounds {
            p_max: inst.depth,
            ..Bounds::default()
        };
        let report = check_m(s, &bounds);
        if report.outcome != Outcome::Pass {
            return Err(SynthError::WindowConditionUnverified(report.outcome));
        }
    }

    let theta_spec = inst.family.theta();
    let mut table = ReductionTable {
        instance: inst.clone(),
        cells: BTreeMap::new(),
        phi: Vec::new(),
        theta: match inst.family {
            Family::As { .. } => Some(Vec::new()),
            Family::A1 => None,
        },
    };

    for p in 0..inst.depth {
        let label = theta_spec.label(p);
        let parents: Vec<Word> = if p == 0 {
            inst.restriction.addrs().to_vec()
        } else {
            vec![table.cells.get(&label).expect("previous level complete").clone()]
        };

        let n_min = table.phi.last().map_or(0, |&n| n + 1);
        let mut committed = false;
        'search: for n in n_min..=n_min + LEVEL_SCAN_ALLOWANCE {
            for parent in &parents {
                if (parent.len() as u64) > n {
                    continue; // the flip must land beyond the fixed prefix
                }
                let free = n - parent.len() as u64;
                let seeds: Vec<(Word, u64)> = match &inst.family {
                    Family::As { s } => {
                        let base = parent.count_ones();
                        let mut out = Vec::new();
                        for extra in 0..=free {
                            let theta = base + extra;
                            if s.contains(theta) && window_identity(s, theta, p) {
                                // least extension with this 1-count
                                let mut addr = parent.clone();
                                for _ in 0..free - extra {
                                    addr.push(0);
                                }
                                for _ in 0..extra {
                                    addr.push(1);
                                }
                                addr.push(0);
                                out.push((addr, theta));
                            }
                        }
                        out
                    }
                    Family::A1 => {
                        let pinned = dense_word(n).extended(0);
                        if parent.is_prefix_of(&pinned) {
                            vec![(pinned, 0)]
                        } else {
                            Vec::new()
                        }
                    }
                };
                for (seed, theta) in seeds {
                    if let Some(cells) = propagate_level(&inst.family, &table, p, n, &seed) {
                        if level_conditions_hold(&inst.family, &table, &cells, p, n) {
                            table.cells.extend(cells);
                            table.phi.push(n);
                            if let Some(thetas) = table.theta.as_mut() {
                                thetas.push(theta);
                            }
                            committed = true;
                            break 'search;
                        }
                    }
                }
            }
        }
        if !committed {
            return Ok(SynthOutcome::Partial {
                table,
                reason: format!("no admissible level found while building level {}", p + 1),
            });
        }
    }

    Ok(SynthOutcome::Complete(table))
}

/// Assigns the cells of level `p+1` by walking the level tree from the
/// seeded root, flipping the committed split position of each edge's meet
/// level. `None` when a stage's domain test fails.
fn propagate_level(
    family: &Family,
    table: &ReductionTable,
    p: u64,
    n: u64,
    seed: &Word,
) -> Option<BTreeMap<Word, Word>> {
    let theta_spec = family.theta();
    let order = level_ordering(theta_spec, p);
    let mut cells: BTreeMap<Word, Word> = BTreeMap::new();
    cells.insert(order[0].clone(), seed.clone());

    for m in 1..order.len() {
        let t = &order[m];
        // unique earlier tree neighbour
        let j = (0..m).find(|&j| {
            related(theta_spec, &order[j], t).unwrap() || related(theta_spec, t, &order[j]).unwrap()
        })?;
        let anchor = &order[j];
        let level = anchor.meet_len(t) as u64;
        let phi_level = if level == p {
            n
        } else {
            table.phi[level as usize]
        };
        let anchor_addr = cells.get(anchor)?.clone();
        let image = if related(theta_spec, anchor, t).unwrap() {
            family.step_addr(phi_level, Sign::Pos, &anchor_addr)?
        } else {
            family.step_addr(phi_level, Sign::Neg, &anchor_addr)?
        };
        cells.insert(t.clone(), image);
    }
    Some(cells)
}

/// Outright check of the pair conditions at a freshly propagated level:
/// nesting into the previous level, relation-carrying along every related
/// pair, and disjointness from the diagonal and the low-level split
/// graphs for every unrelated pair.
fn level_conditions_hold(
    family: &Family,
    table: &ReductionTable,
    cells: &BTreeMap<Word, Word>,
    p: u64,
    n: u64,
) -> bool {
    let phi_at = |level: u64| -> u64 {
        if level == p {
            n
        } else {
            table.phi[level as usize]
        }
    };

    // nesting and depth
    for (word, addr) in cells {
        if (addr.len() as u64) < p + 1 {
            return false;
        }
        if p == 0 {
            if !table.instance.restriction.contains_addr(addr) {
                return false;
            }
        } else {
            let parent = table.cells.get(&word.prefix(p as usize)).expect("level built");
            if !parent.is_prefix_of(addr) {
                return false;
            }
        }
    }

    let words: Vec<&Word> = cells.keys().collect();
    for &s in &words {
        for &t in &words {
            if s == t {
                continue;
            }
            let a = &cells[s];
            let b = &cells[t];
            if family.words_related(s, t) {
                let level = s.meet_len(t) as u64;
                match family.step_addr(phi_at(level), Sign::Pos, a) {
                    Some(image) if image == *b => {}
                    _ => return false,
                }
            } else {
                if a == b {
                    return false; // diagonal
                }
                for q in 0..=p {
                    if let Some(image) = family.step_addr(phi_at(q), Sign::Pos, a) {
                        if image == *b {
                            return false; // a low-level split pair survives
                        }
                    }
                }
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Independent verification
// ---------------------------------------------------------------------------

/// One violated condition, with the pair that witnessed it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub condition: String,
    pub s: Word,
    pub t: Word,
}

/// Verification outcome over a whole table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub depth_checked: u64,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Independent check of a table: every condition is re-derived from
/// described-point evaluations of the split maps rather than from the
/// builder's address propagation. Checks nesting, cell depth, the
/// relation-carrying condition with its offset and 1-count identities,
/// disjointness for unrelated pairs, and (in dense mode) that the signed
/// composition along each tree path moves every cell off itself.
pub fn verify_table(table: &ReductionTable) -> Result<VerifyReport, SynthError> {
    let inst = &table.instance;
    for i in 1..table.phi.len() {
        if table.phi[i] <= table.phi[i - 1] {
            return Err(SynthError::PhiNotIncreasing(i));
        }
    }
    if matches!(inst.family, Family::As { .. }) && table.theta.is_none() {
        return Err(SynthError::MissingTheta);
    }

    let mut violations = Vec::new();
    let mut flag = |condition: &str, s: &Word, t: &Word| {
        violations.push(Violation {
            condition: condition.to_string(),
            s: s.clone(),
            t: t.clone(),
        });
    };

    let depth = table.completed_depth();
    for level in 1..=depth {
        let words = Word::all_of_len(level as usize);
        for s in &words {
            let addr = match table.cells.get(s) {
                Some(a) => a,
                None => return Err(SynthError::MissingCell(s.clone())),
            };
            // nesting into the restriction and the previous level
            if level == 1 {
                if !inst.restriction.contains_addr(addr) {
                    flag("nesting", s, s);
                }
            } else {
                let up = s.prefix(level as usize - 1);
                match table.cells.get(&up) {
                    Some(parent) if parent.is_prefix_of(addr) => {}
                    _ => flag("nesting", s, &up),
                }
            }
            if (addr.len() as u64) < level {
                flag("depth", s, s);
            }
        }

        for s in &words {
            for t in &words {
                if s == t {
                    continue;
                }
                let a = &table.cells[s];
                let b = &table.cells[t];
                let low = DescribedPoint::zeros_after(a);
                let high = DescribedPoint::new(a.clone(), Word::parse("1")).unwrap();
                if inst.family.words_related(s, t) {
                    let j = s.meet_len(t);
                    let q = table.phi[j];
                    // both tail witnesses must land exactly in the target cell
                    let carried = [low.clone(), high.clone()].iter().all(|x| {
                        match inst.family.step_point(q, Sign::Pos, x) {
                            Some(y) => {
                                y.prefix_word(b.len() as u64) == *b
                                    && y.drop_prefix(b.len() as u64)
                                        == x.drop_prefix(a.len() as u64)
                            }
                            None => false,
                        }
                    });
                    if !carried {
                        flag("relation-carrying", s, t);
                    }
                    if let (Family::As { s: sspec }, Some(thetas)) =
                        (&inst.family, table.theta.as_ref())
                    {
                        let theta = thetas[j];
                        if !window_identity(sspec, theta, j as u64) {
                            flag("window-identity", s, t);
                        }
                        // 1-count identity for every point of the cell
                        if low.prefix_ones(q) != theta + s.prefix(j).count_ones() {
                            flag("count-identity", s, t);
                        }
                    }
                } else {
                    if a == b {
                        flag("diagonal", s, t);
                    }
                    for qj in 0..level as usize {
                        let q = table.phi[qj];
                        if let Some(y) = inst.family.step_point(q, Sign::Pos, &low) {
                            if y.prefix_word(b.len() as u64) == *b {
                                flag("graph-disjointness", s, t);
                            }
                        }
                    }
                    if matches!(inst.family, Family::A1) {
                        // the signed composition along the tree path must
                        // move the cell off itself
                        let path = unique_path(ThetaSpec::DenseSeq, s, t).unwrap();
                        let mut x = Some(low.clone());
                        for pair in path.windows(2) {
                            let level_j = pair[0].meet_len(&pair[1]);
                            let q = table.phi[level_j];
                            let sign = if related(ThetaSpec::DenseSeq, &pair[0], &pair[1]).unwrap()
                            {
                                Sign::Pos
                            } else {
                                Sign::Neg
                            };
                            x = x.and_then(|x| inst.family.step_point(q, sign, &x));
                        }
                        match x {
                            Some(y) if y.prefix_word(b.len() as u64) == *b
                                && y.prefix_word(a.len() as u64) != *a => {}
                            _ => flag("path-composition", s, t),
                        }
                    }
                }
            }
        }
    }

    Ok(VerifyReport {
        depth_checked: depth,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ruler::AlphaSpec;

    fn as_instance(s: SSpec, restriction: ClopenSet, depth: u64) -> SynthesisInstance {
        SynthesisInstance {
            family: Family::As { s },
            restriction,
            depth,
        }
    }

    #[test]
    fn full_space_gives_the_identity_table() {
        let inst = as_instance(SSpec::omega(), ClopenSet::full(), 2);
        let out = synthesize(&inst).unwrap();
        assert!(out.is_complete());
        let table = out.table();
        assert_eq!(table.phi, vec![0, 1]);
        assert_eq!(table.theta, Some(vec![0, 0]));
        for len in 1..=2usize {
            for w in Word::all_of_len(len) {
                assert_eq!(table.cells[&w], w);
            }
        }
    }

    #[test]
    fn restriction_shifts_the_table() {
        let inst = as_instance(SSpec::omega(), ClopenSet::cylinder(Word::parse("1")), 2);
        let table = synthesize(&inst).unwrap().table().clone();
        assert_eq!(table.phi, vec![1, 2]);
        assert_eq!(table.theta, Some(vec![1, 1]));
        for len in 1..=2usize {
            for w in Word::all_of_len(len) {
                assert_eq!(table.cells[&w], Word::parse("1").concat(&w));
            }
        }
        assert_eq!(table.extract_u(&Word::parse("01")), Some(&Word::parse("101")));
    }

    #[test]
    fn even_count_restriction() {
        let evens = SSpec::modular(2, []).unwrap();
        let inst = as_instance(evens, ClopenSet::cylinder(Word::parse("11")), 2);
        let table = synthesize(&inst).unwrap().table().clone();
        assert_eq!(table.phi, vec![2, 3]);
        assert_eq!(table.theta, Some(vec![2, 2]));
        for len in 1..=2usize {
            for w in Word::all_of_len(len) {
                assert_eq!(table.cells[&w], Word::parse("11").concat(&w));
            }
        }
    }

    #[test]
    fn extraction_is_monotone() {
        let inst = as_instance(SSpec::modular(3, [1]).unwrap(), ClopenSet::full(), 5);
        let table = synthesize(&inst).unwrap().table().clone();
        for len in 1..5usize {
            for w in Word::all_of_len(len) {
                let here = table.extract_u(&w).unwrap();
                for bit in 0..=1u8 {
                    let deeper = table.extract_u(&w.extended(bit)).unwrap();
                    assert!(here.is_prefix_of(deeper));
                }
            }
        }
    }

    #[test]
    fn verifier_accepts_synthesized_tables() {
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
        for s in &specs {
            for b in &restrictions {
                let inst = as_instance(s.clone(), b.clone(), 4);
                let out = synthesize(&inst).unwrap();
                assert!(out.is_complete(), "{:?} {:?}", s, b);
                let report = verify_table(out.table()).unwrap();
                assert!(report.pass(), "{:?} {:?}: {:?}", s, b, report.violations);
            }
        }
    }

    #[test]
    fn dense_mode_synthesizes_and_verifies() {
        for b in [ClopenSet::full(), ClopenSet::cylinder(Word::parse("0"))] {
            let inst = SynthesisInstance {
                family: Family::A1,
                restriction: b.clone(),
                depth: 4,
            };
            let out = synthesize(&inst).unwrap();
            assert!(out.is_complete(), "{:?}", b);
            let report = verify_table(out.table()).unwrap();
            assert!(report.pass(), "{:?}: {:?}", b, report.violations);
        }
    }

    #[test]
    fn dense_mode_full_space_is_identity() {
        let inst = SynthesisInstance {
            family: Family::A1,
            restriction: ClopenSet::full(),
            depth: 4,
        };
        let table = synthesize(&inst).unwrap().table().clone();
        assert_eq!(table.phi, vec![0, 1, 2, 3]);
        for w in Word::all_of_len(4) {
            assert_eq!(table.cells[&w], w);
        }
    }

    #[test]
    fn corrupted_tables_are_rejected() {
        let inst = as_instance(SSpec::omega(), ClopenSet::cylinder(Word::parse("1")), 3);
        let good = synthesize(&inst).unwrap().table().clone();
        assert!(verify_table(&good).unwrap().pass());

        // corrupt one cell
        let mut bad = good.clone();
        let key = Word::parse("010");
        let addr = bad.cells[&key].clone();
        bad.cells.insert(key, addr.flipped(addr.len() - 1));
        assert!(!verify_table(&bad).unwrap().pass());

        // corrupt an offset
        let mut bad = good.clone();
        bad.theta.as_mut().unwrap()[2] += 1;
        assert!(!verify_table(&bad).unwrap().pass());

        // non-increasing level map is rejected before any checking
        let mut bad = good;
        bad.phi.swap(0, 1);
        assert_eq!(verify_table(&bad), Err(SynthError::PhiNotIncreasing(1)));
    }

    #[test]
    fn empty_restriction_is_rejected() {
        let inst = as_instance(SSpec::omega(), ClopenSet::empty(), 2);
        assert_eq!(synthesize(&inst), Err(SynthError::EmptyRestriction));
    }

    #[test]
    fn unverified_window_condition_is_rejected() {
        // the triangular-number set admits only the zero translation, so
        // the window condition stays inconclusive within bounds
        let inst = as_instance(SSpec::shift(0), ClopenSet::full(), 3);
        assert!(matches!(
            synthesize(&inst),
            Err(SynthError::WindowConditionUnverified(Outcome::Inconclusive))
        ));
    }

    #[test]
    fn exhausted_seed_search_yields_a_partial_table() {
        // the alternating restriction has no dense-word extension within
        // the level scan allowance, so no level can be seeded
        let inst = SynthesisInstance {
            family: Family::A1,
            restriction: ClopenSet::cylinder(Word::parse("010101010101")),
            depth: 2,
        };
        match synthesize(&inst).unwrap() {
            SynthOutcome::Partial { table, reason } => {
                assert_eq!(table.completed_depth(), 0);
                assert!(reason.contains("level 1"));
            }
            SynthOutcome::Complete(_) => panic!("expected a partial table"),
        }
    }

    #[test]
    fn reduction_is_sound_at_depth() {
        // images of related words form family pairs, images of unrelated
        // words do not; checked through the relation decider
        use crate::cylinders::{decide_relation, Relation};
        let s = SSpec::modular(2, []).unwrap();
        let inst = as_instance(s.clone(), ClopenSet::cylinder(Word::parse("11")), 4);
        let table = synthesize(&inst).unwrap().table().clone();
        let rel = Relation::As { s: s.clone() };
        for x in Word::all_of_len(4) {
            for y in Word::all_of_len(4) {
                if x == y {
                    continue;
                }
                let ux = DescribedPoint::zeros_after(&table.cells[&x]);
                let uy = DescribedPoint::zeros_after(&table.cells[&y]);
                if words_related_as(&s, &x, &y) {
                    assert!(
                        decide_relation(&rel, &ux, &uy),
                        "{} {} should map to a related pair",
                        x,
                        y
                    );
                } else {
                    assert!(!decide_relation(&rel, &ux, &uy), "{} {}", x, y);
                }
            }
        }
    }
}
