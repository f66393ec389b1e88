//! Window-translation and orthogonality conditions on index sets, with
//! replayable witness certificates.
//!
//! Everything here is a bounded verification of a universally quantified
//! statement, so outcomes are tri-state: `Pass` within the stated bounds,
//! `Refuted` with a concrete counterexample, or `Inconclusive` when a
//! search bound ran out. Where a constructive witness exists (the
//! prefix-recurrence argument behind the ruler family, and the
//! non-occurrence argument behind pairwise orthogonality), the certificate
//! records the witness arithmetic and can replay its own verification.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cylinders::{decide_relation, fs_map, ClopenSet, Cylinder, PrefixRewriteMap, Relation};
use crate::ruler::{beta_alpha, gamma_alpha, AlphaSpec, BetaSpec, SSpec};
use crate::words::Word;

/// Search horizons for the bounded verifications. Missing fields fall
/// back to the defaults when deserialized.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Bounds {
    pub p_max: u64,
    pub q_max: u64,
    pub k_max: u64,
    pub c_max: u64,
    pub n_scan: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            p_max: 8,
            q_max: 64,
            k_max: 40,
            c_max: 128,
            n_scan: 1 << 18,
        }
    }
}

/// Tri-state verification outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Refuted,
    Inconclusive,
}

#[derive(Debug, Error, PartialEq)]
pub enum ConditionError {
    #[error("parameters describe the same infinite word")]
    EqualParameters,
    #[error("witness arithmetic failed verification: {0}")]
    WitnessContradiction(String),
    #[error("scan bound {0} cannot fit a prefix of length {1}")]
    ScanExhausted(u64, u64),
    #[error("restriction set is empty")]
    EmptyRestriction,
}

/// Does translation by `c` carry the window `[0, p]` of the set onto the
/// window `[c, c+p]`? Equivalently: `j ∈ S ⇔ c+j ∈ S` for every `j ≤ p`.
pub fn window_identity(s_spec: &SSpec, c: u64, p: u64) -> bool {
    (0..=p).all(|j| s_spec.contains(j) == s_spec.contains(c + j))
}

/// For a fixed window radius `k`: does every `q` up to `q_max` admit a
/// translation point `c ∈ [q, q+k]`? Returns the first failing `q`.
pub fn check_m_with_k(s_spec: &SSpec, p: u64, k: u64, q_max: u64) -> Result<(), u64> {
    for q in 0..=q_max {
        if !(q..=q + k).any(|c| window_identity(s_spec, c, p)) {
            return Err(q);
        }
    }
    Ok(())
}

/// Result row of the window-translation check at one window size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MWindowRow {
    pub p: u64,
    /// Least radius `k ≤ k_max` that works for every scanned `q`, if any.
    pub k: Option<u64>,
}

/// Outcome of the window-translation condition over all `p ≤ p_max`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MReport {
    pub s: SSpec,
    pub bounds: Bounds,
    pub rows: Vec<MWindowRow>,
    pub outcome: Outcome,
}

/// Bounded check of the window-translation condition: for each window
/// size `p ≤ p_max`, find the least radius `k ≤ k_max` such that every
/// start `q ≤ q_max` has a translation point in `[q, q+k]`. Exhausting
/// `k_max` is inconclusive, never a refutation: the radius is
/// existentially quantified without a bound.
pub fn check_m(s_spec: &SSpec, bounds: &Bounds) -> MReport {
    let mut rows = Vec::new();
    let mut outcome = Outcome::Pass;
    for p in 0..=bounds.p_max {
        let k = (0..=bounds.k_max).find(|&k| check_m_with_k(s_spec, p, k, bounds.q_max).is_ok());
        if k.is_none() {
            outcome = Outcome::Inconclusive;
        }
        rows.push(MWindowRow { p, k });
    }
    MReport {
        s: s_spec.clone(),
        bounds: bounds.clone(),
        rows,
        outcome,
    }
}

// ---------------------------------------------------------------------------
// Prefix-recurrence witness for the ruler family
// ---------------------------------------------------------------------------

/// Certificate for the prefix-recurrence property of a ruler-generated
/// sequence: prefixes of length `p` recur at controlled translations,
/// which yields the window-translation condition with radius `2K + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MmCert {
    pub alpha: AlphaSpec,
    /// Required prefix length.
    pub p: u64,
    /// Minimal exponent with `2^{n0} - 1 ≥ p`.
    pub n0: u32,
    /// Recurrence radius `K = 2^{n0} - 1`.
    pub k_big: u64,
    /// Derived window-translation radius `2K + 1`.
    pub m_radius: u64,
    /// Every start `Q ≤ q_max` was verified.
    pub q_max: u64,
}

impl MmCert {
    /// Re-runs the verification the certificate asserts.
    pub fn replay(&self) -> Result<(), ConditionError> {
        verify_mm(&self.alpha, self.p, self.n0, self.q_max)?;
        if self.k_big != (1u64 << self.n0) - 1 || self.m_radius != 2 * self.k_big + 1 {
            return Err(ConditionError::WitnessContradiction(
                "radius fields inconsistent".into(),
            ));
        }
        Ok(())
    }

    /// The translation point for the partial-sum set, derived from the
    /// recurrence at start `q`: returns `(radius, c)` with `c` inside
    /// `[q, q + radius]` and the window identity holding at `c`.
    pub fn m_conversion(&self, q: u64) -> (u64, u64) {
        let beta = BetaSpec::Louveau {
            alpha: self.alpha.clone(),
        };
        // least index whose partial sum reaches q
        let mut sum = 0u64;
        let mut big_q = 0u64;
        while sum < q {
            sum += 1 + beta.value(big_q);
            big_q += 1;
        }
        let block = 1u64 << self.n0;
        let c_index = big_q.div_ceil(block) * block;
        let c: u64 = (0..c_index).map(|i| 1 + beta.value(i)).sum();
        (self.m_radius, c)
    }
}

fn verify_mm(alpha: &AlphaSpec, p: u64, n0: u32, q_max: u64) -> Result<(), ConditionError> {
    let k_big = (1u64 << n0) - 1;
    let block = 1u64 << n0;
    for q in 0..=q_max {
        let c = q.div_ceil(block) * block;
        if !(q..=q + k_big).contains(&c) {
            return Err(ConditionError::WitnessContradiction(format!(
                "aligned translation {} escapes [{}, {}]",
                c,
                q,
                q + k_big
            )));
        }
        for i in 0..p {
            if beta_alpha(alpha, i) != beta_alpha(alpha, c + i) {
                return Err(ConditionError::WitnessContradiction(format!(
                    "prefix mismatch at i={} for translation {}",
                    i, c
                )));
            }
        }
    }
    Ok(())
}

/// Builds and verifies the prefix-recurrence certificate: `n0` is minimal
/// with `2^{n0} - 1 ≥ p`, and every start up to `q_max` gets the aligned
/// translation `2^{n0}·⌈Q/2^{n0}⌉`. Failure is a hard error; the
/// construction works for every parameter.
pub fn mm_witness(alpha: &AlphaSpec, p: u64, bounds: &Bounds) -> Result<MmCert, ConditionError> {
    let n0 = (0..=63).find(|&n| (1u64 << n) - 1 >= p).expect("p fits in u64");
    verify_mm(alpha, p, n0, bounds.q_max)?;
    let k_big = (1u64 << n0) - 1;
    Ok(MmCert {
        alpha: alpha.clone(),
        p,
        n0,
        k_big,
        m_radius: 2 * k_big + 1,
        q_max: bounds.q_max,
    })
}

// ---------------------------------------------------------------------------
// Domain-window witness
// ---------------------------------------------------------------------------

/// Witness located by the domain-window search: a level and a cylinder of
/// points inside the restricted split map's domain whose prefix 1-count
/// satisfies the window identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HWitness {
    pub n: u64,
    pub cell: Cylinder,
    pub theta: u64,
    /// The greedy chain levels used to funnel the restriction.
    pub chain: Vec<u64>,
}

/// Domain of the level-`q` split map restricted to `c_set`: the points of
/// `c_set` the map is defined on and sends back into `c_set`.
pub fn restricted_domain(s_spec: &SSpec, q: u64, c_set: &ClopenSet) -> ClopenSet {
    let map = fs_map(s_spec, q);
    c_set.intersect(&map.preimage(c_set))
}

fn restricted_map_image(map: &PrefixRewriteMap, c_set: &ClopenSet, x: &ClopenSet) -> ClopenSet {
    map.apply(&x.intersect(c_set).intersect(&map.preimage(c_set)))
}

/// Greedy search for a domain-window witness: funnel the restriction
/// through `p` nested split-map domains (choosing the least usable level
/// each time), push the funnel forward through those maps, then scan
/// upward for a level `n` whose cells inside the image satisfy the window
/// identity at their own prefix 1-count. Cells are tried
/// lexicographically, so the result is deterministic. `Ok(None)` means a
/// search bound was exhausted.
pub fn h_witness(
    s_spec: &SSpec,
    c_set: &ClopenSet,
    l: u64,
    p: u64,
    bounds: &Bounds,
) -> Result<Option<HWitness>, ConditionError> {
    if c_set.is_empty() {
        return Err(ConditionError::EmptyRestriction);
    }

    let mut chain: Vec<u64> = Vec::new();
    let mut funnel = c_set.clone();
    let q_limit = l + bounds.q_max;
    if p > 0 {
        for stage in 0..p {
            let mut q = if stage == 0 {
                l
            } else {
                chain.last().unwrap() + 1
            };
            loop {
                if q > q_limit {
                    return Ok(None);
                }
                let pulled = if stage == 0 {
                    restricted_domain(s_spec, q, c_set)
                } else {
                    let map = fs_map(s_spec, q);
                    funnel
                        .intersect(&map.preimage(&funnel))
                        .intersect(&restricted_domain(s_spec, q, c_set))
                };
                if !pulled.is_empty() {
                    funnel = pulled;
                    chain.push(q);
                    break;
                }
                q += 1;
            }
        }
        // push the funnel forward through the chain, last stage first
        let mut image = funnel;
        for &q in chain.iter().rev() {
            image = restricted_map_image(&fs_map(s_spec, q), c_set, &image);
        }
        funnel = image;
    }

    // scan levels for a cell of the funnel satisfying the window identity
    let start = chain.last().map_or(l, |&q| (q + 1).max(l));
    for n in start..=start + bounds.q_max {
        for t in funnel.addrs() {
            if t.len() as u64 > n {
                // the cylinder already pins position n
                let theta = t.prefix(n as usize).count_ones();
                if t.bit(n as usize) == 0
                    && s_spec.contains(theta)
                    && window_identity(s_spec, theta, p)
                {
                    return Ok(Some(HWitness {
                        n,
                        cell: Cylinder::new(t.clone()),
                        theta,
                        chain,
                    }));
                }
                continue;
            }
            let free = n - t.len() as u64;
            let base = t.count_ones();
            for extra in 0..=free {
                let theta = base + extra;
                if s_spec.contains(theta) && window_identity(s_spec, theta, p) {
                    // lexicographically least extension with that 1-count
                    let mut addr = t.clone();
                    for _ in 0..free - extra {
                        addr.push(0);
                    }
                    for _ in 0..extra {
                        addr.push(1);
                    }
                    addr.push(0);
                    return Ok(Some(HWitness {
                        n,
                        cell: Cylinder::new(addr),
                        theta,
                        chain,
                    }));
                }
            }
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Orthogonality conditions
// ---------------------------------------------------------------------------

/// Outcome of the translated-window disjointness check at one window size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerpReport {
    pub p: u64,
    pub c_max: u64,
    pub inverse: bool,
    /// Translation making the windows coincide, if one was found.
    pub refuting_c: Option<u64>,
}

impl PerpReport {
    pub fn outcome(&self) -> Outcome {
        if self.refuting_c.is_some() {
            Outcome::Refuted
        } else {
            Outcome::Pass
        }
    }
}

/// Checks that no translation `c ≤ c_max` carries the window `[0, p]` of
/// the first set onto the window `[c, c+p]` of the second. A `c` where
/// the windows coincide refutes orthogonality at this `p`; that is a
/// finding, not an error.
pub fn check_perp(s1: &SSpec, s2: &SSpec, p: u64, bounds: &Bounds) -> PerpReport {
    let refuting_c =
        (0..=bounds.c_max).find(|&c| (0..=p).all(|j| s1.contains(j) == s2.contains(c + j)));
    PerpReport {
        p,
        c_max: bounds.c_max,
        inverse: false,
        refuting_c,
    }
}

/// Inverse-direction variant: compares `c - (S1 ∩ [0, p])` with
/// `S2 ∩ [c-p, c]` as subsets of the integers, so equality forces the
/// subtracted window to stay inside the naturals.
pub fn check_perp_inv(s1: &SSpec, s2: &SSpec, p: u64, bounds: &Bounds) -> PerpReport {
    let refuting_c = (0..=bounds.c_max).find(|&c| {
        let lhs: std::collections::BTreeSet<i64> = (0..=p)
            .filter(|&j| s1.contains(j))
            .map(|j| c as i64 - j as i64)
            .collect();
        let rhs: std::collections::BTreeSet<i64> = (0..=p)
            .map(|j| c as i64 - j as i64)
            .filter(|&m| m >= 0 && s2.contains(m as u64))
            .collect();
        lhs == rhs
    });
    PerpReport {
        p,
        c_max: bounds.c_max,
        inverse: true,
        refuting_c,
    }
}

/// Certificate for the non-occurrence witness separating two ruler
/// sequences: a palindromic prefix of the first that occurs nowhere in
/// the second within the scan bound, with the exponent arithmetic that
/// located it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerpPerpCert {
    pub alpha: AlphaSpec,
    pub alpha2: AlphaSpec,
    /// First seed position where the two parameters disagree.
    pub n0: u64,
    /// A later seed position of the second sequence breaking constancy.
    pub n1: u64,
    /// Exponent `n = n1 + 2`.
    pub n: u64,
    /// Prefix length `P = 2^n - 1`.
    pub p_prefix: u64,
    /// Derived window size `2P` for the translated-window conditions.
    pub p_window: u64,
    /// The second sequence was scanned on `[0, scan_bound)`.
    pub scan_bound: u64,
    /// Number of shifts the occurrence scan examined.
    pub scanned_shifts: u64,
}

impl PerpPerpCert {
    pub fn replay(&self) -> Result<(), ConditionError> {
        let rebuilt = perpperp_witness_with_scan(&self.alpha, &self.alpha2, self.scan_bound)?;
        if rebuilt != *self {
            return Err(ConditionError::WitnessContradiction(
                "replayed certificate differs".into(),
            ));
        }
        Ok(())
    }
}

/// Least shift at which `needle` occurs inside the ruler sequence of
/// `alpha` restricted to `[0, bound)`.
fn scan_occurrence(needle: &[u8], alpha: &AlphaSpec, bound: u64) -> Option<u64> {
    if needle.len() as u64 > bound {
        return None;
    }
    let hay: Vec<u8> = (0..bound).map(|i| beta_alpha(alpha, i)).collect();
    let last = bound - needle.len() as u64;
    (0..=last).find(|&l| hay[l as usize..l as usize + needle.len()] == needle[..])
}

/// Builds and verifies the orthogonality witness for two distinct
/// parameters: locates the first seed disagreement `n0`, a later
/// constancy break `n1` of the second seed, and checks that the prefix of
/// length `2^{n1+2} - 1` of the first ruler sequence is a palindrome
/// (one scan covers both reading directions) occurring nowhere in the
/// second sequence up to the scan bound. An occurrence would contradict
/// the witness arithmetic and is a hard error.
pub fn perpperp_witness(
    alpha: &AlphaSpec,
    alpha2: &AlphaSpec,
    bounds: &Bounds,
) -> Result<PerpPerpCert, ConditionError> {
    perpperp_witness_with_scan(alpha, alpha2, bounds.n_scan)
}

fn perpperp_witness_with_scan(
    alpha: &AlphaSpec,
    alpha2: &AlphaSpec,
    n_scan: u64,
) -> Result<PerpPerpCert, ConditionError> {
    if alpha.same_omega_word(alpha2) {
        return Err(ConditionError::EqualParameters);
    }
    // seed sequences differ exactly at odd positions where the parameters
    // differ, so the scan terminates within the agreement horizon
    let horizon = 2 * (alpha.pre.len().max(alpha2.pre.len()) as u64
        + crate::ruler::lcm(alpha.period.len() as u64, alpha2.period.len() as u64))
        + 2;
    let n0 = (0..horizon)
        .find(|&m| gamma_alpha(alpha, m) != gamma_alpha(alpha2, m))
        .expect("distinct parameters disagree within the horizon");
    let pivot = gamma_alpha(alpha2, n0 + 1);
    // even seed positions take both values within any stretch of eight
    let n1 = (n0 + 2..=n0 + 9)
        .find(|&m| gamma_alpha(alpha2, m) != pivot)
        .expect("seed sequences are non-constant on even positions");
    let n = n1 + 2;
    let p_prefix = (1u64 << n) - 1;

    if p_prefix >= n_scan {
        return Err(ConditionError::ScanExhausted(n_scan, p_prefix));
    }

    let prefix: Vec<u8> = (0..p_prefix).map(|i| beta_alpha(alpha, i)).collect();
    let mut reversed = prefix.clone();
    reversed.reverse();
    if prefix != reversed {
        return Err(ConditionError::WitnessContradiction(
            "prefix is not a palindrome".into(),
        ));
    }
    for needle in [&prefix, &reversed] {
        if let Some(shift) = scan_occurrence(needle, alpha2, n_scan) {
            return Err(ConditionError::WitnessContradiction(format!(
                "prefix of length {} occurs at shift {}",
                p_prefix, shift
            )));
        }
    }

    Ok(PerpPerpCert {
        alpha: alpha.clone(),
        alpha2: alpha2.clone(),
        n0,
        n1,
        n,
        p_prefix,
        p_window: 2 * p_prefix,
        scan_bound: n_scan,
        scanned_shifts: n_scan - p_prefix,
    })
}

// ---------------------------------------------------------------------------
// Certificate envelope
// ---------------------------------------------------------------------------

pub const CERT_SCHEMA: &str = "cantor-lab/cert/v1";

/// The witness certificates, tagged by the condition they certify.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "kebab-case")]
pub enum CertBody {
    PrefixRecurrence(MmCert),
    Orthogonality(PerpPerpCert),
}

/// Versioned envelope around a certificate, the shape written to
/// certificate files and embedded in reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessCert {
    pub schema: String,
    #[serde(flatten)]
    pub body: CertBody,
}

impl WitnessCert {
    pub fn new(body: CertBody) -> Self {
        WitnessCert {
            schema: CERT_SCHEMA.to_string(),
            body,
        }
    }

    /// Re-runs the verification the certificate asserts; a stale schema
    /// is a contradiction.
    pub fn replay(&self) -> Result<(), ConditionError> {
        if self.schema != CERT_SCHEMA {
            return Err(ConditionError::WitnessContradiction(format!(
                "unknown certificate schema {:?}",
                self.schema
            )));
        }
        match &self.body {
            CertBody::PrefixRecurrence(c) => c.replay(),
            CertBody::Orthogonality(c) => c.replay(),
        }
    }
}

impl From<MmCert> for WitnessCert {
    fn from(c: MmCert) -> Self {
        WitnessCert::new(CertBody::PrefixRecurrence(c))
    }
}

impl From<PerpPerpCert> for WitnessCert {
    fn from(c: PerpPerpCert) -> Self {
        WitnessCert::new(CertBody::Orthogonality(c))
    }
}

// ---------------------------------------------------------------------------
// Shift family
// ---------------------------------------------------------------------------

/// Outcome of the shift-family reduction check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftReport {
    pub n: u64,
    pub pairs_checked: usize,
    pub related_pairs_seen: usize,
    pub first_equivalence_failure: Option<(String, String)>,
    pub gap_identity_ok: bool,
}

impl ShiftReport {
    pub fn pass(&self) -> bool {
        self.first_equivalence_failure.is_none() && self.gap_identity_ok
    }
}

/// Verifies on the supplied point pairs that prepending a block of
/// `n + 1` ones to both coordinates carries the level-(n+1) shift
/// relation exactly onto the level-n one, and that consecutive elements
/// of the shifted partial-sum set at index `l` differ by `l + n + 2`.
pub fn shift_family_check(
    n: u64,
    pairs: &[(crate::cylinders::DescribedPoint, crate::cylinders::DescribedPoint)],
    gap_l_max: u64,
) -> ShiftReport {
    let upper = Relation::As {
        s: SSpec::shift(n + 1),
    };
    let lower = Relation::As { s: SSpec::shift(n) };
    let ones = Word::from_bits(vec![1; n as usize + 1]).unwrap();

    let mut related_pairs_seen = 0usize;
    let mut first_equivalence_failure = None;
    for (x, y) in pairs {
        let direct = decide_relation(&upper, x, y);
        let pushed = decide_relation(&lower, &x.prepend(&ones), &y.prepend(&ones));
        if direct {
            related_pairs_seen += 1;
        }
        if direct != pushed && first_equivalence_failure.is_none() {
            first_equivalence_failure = Some((x.to_string(), y.to_string()));
        }
    }

    let elems = SSpec::shift(n + 1).elements_upto((gap_l_max + 2) * (gap_l_max + n + 3));
    let gap_identity_ok =
        (0..gap_l_max as usize).all(|l| elems[l + 1] - elems[l] == l as u64 + n + 2);

    ShiftReport {
        n,
        pairs_checked: pairs.len(),
        related_pairs_seen,
        first_equivalence_failure,
        gap_identity_ok,
    }
}
