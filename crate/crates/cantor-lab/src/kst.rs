//! Coordinate-rearrangement maps from a nested family of index sets.
//!
//! A nested family fixes decreasing sets `S_0 ⊇ S_1 ⊇ …` of naturals with
//! infinite differences and empty intersection, plus injections
//! `f_n : S_n → S_n \ S_{n+1}`. The induced map `g_n` rewrites position
//! `k` of an infinite word to the letter at `f_n(k)` when `k ∈ S_n` and
//! leaves it alone otherwise. Because `f_n` lands outside every later
//! `S_m`, the maps absorb on the left: `g_m ∘ g_n = g_m` for `m < n`.
//! Evaluation here is truncated to a horizon; positions whose source
//! escapes the horizon are reported as unknown rather than guessed.

use serde::Serialize;
use thiserror::Error;

use crate::words::Word;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KstError {
    #[error("expected level {0} below level {1}")]
    LevelsOutOfOrder(u32, u32),
    #[error("prefix length {0} not below the least set element {1}")]
    PrefixTooLong(usize, u64),
    #[error("level {0} has no element below the horizon")]
    EmptyLevel(u32),
}

/// Nested index sets with their rearrangement injections.
pub struct NestedFamily {
    pub name: String,
    membership: Box<dyn Fn(u32, u64) -> bool + Sync>,
    injection: Box<dyn Fn(u32, u64) -> u64 + Sync>,
}

impl NestedFamily {
    pub fn new(
        name: impl Into<String>,
        membership: impl Fn(u32, u64) -> bool + Sync + 'static,
        injection: impl Fn(u32, u64) -> u64 + Sync + 'static,
    ) -> Self {
        NestedFamily {
            name: name.into(),
            membership: Box::new(membership),
            injection: Box::new(injection),
        }
    }

    /// Default family: `S_n` is the positive multiples of `2^n`, and the
    /// injection sends `k` to `2k - 2^n`, the odd multiple of `2^n` at
    /// index `k / 2^n` — so level 0 reads position `k` from `2k - 1`.
    pub fn pow2() -> Self {
        NestedFamily::new(
            "pow2",
            |n, k| k > 0 && k % (1u64 << n) == 0,
            |n, k| 2 * k - (1u64 << n),
        )
    }

    pub fn member(&self, level: u32, k: u64) -> bool {
        (self.membership)(level, k)
    }

    pub fn inject(&self, level: u32, k: u64) -> u64 {
        (self.injection)(level, k)
    }

    pub fn least_member_below(&self, level: u32, horizon: u64) -> Option<u64> {
        (0..horizon).find(|&k| self.member(level, k))
    }
}

/// A truncated word over `{0, 1, unknown}`.
pub type PartialWord = Vec<Option<u8>>;

pub fn partial_from_word(w: &Word) -> PartialWord {
    w.bits().iter().map(|&b| Some(b)).collect()
}

/// Truncated evaluation of the level-`n` rearrangement map. Position `k`
/// reads from `f_n(k)` when `k ∈ S_n`; if that source lies beyond the
/// horizon the position is unknown.
pub fn g_eval(fam: &NestedFamily, level: u32, alpha: &PartialWord) -> PartialWord {
    let horizon = alpha.len() as u64;
    (0..horizon)
        .map(|k| {
            if fam.member(level, k) {
                let src = fam.inject(level, k);
                if src < horizon {
                    alpha[src as usize]
                } else {
                    None
                }
            } else {
                alpha[k as usize]
            }
        })
        .collect()
}

/// Verification outcome for the family invariants over a horizon.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub horizon: u64,
    pub max_level: u32,
    pub nested: bool,
    pub differences_populated: bool,
    pub intersection_empty: bool,
    pub injections_ok: bool,
}

impl FamilyReport {
    pub fn pass(&self) -> bool {
        self.nested && self.differences_populated && self.intersection_empty && self.injections_ok
    }
}

/// Checks the nested-family invariants on `[0, horizon)` for levels up to
/// `max_level`: inclusions, nonempty differences, empty intersection, and
/// injectivity of each `f_n` with range in `S_n \ S_{n+1}`.
pub fn verify_family(fam: &NestedFamily, max_level: u32, horizon: u64) -> FamilyReport {
    let mut nested = true;
    let mut differences_populated = true;
    let mut injections_ok = true;

    for n in 0..=max_level {
        let mut diff = 0u64;
        let mut seen = std::collections::HashSet::new();
        for k in 0..horizon {
            if fam.member(n + 1, k) && !fam.member(n, k) {
                nested = false;
            }
            if fam.member(n, k) && !fam.member(n + 1, k) {
                diff += 1;
            }
            if fam.member(n, k) {
                let v = fam.inject(n, k);
                if !seen.insert(v) {
                    injections_ok = false;
                }
                if v < horizon && !(fam.member(n, v) && !fam.member(n + 1, v)) {
                    injections_ok = false;
                }
            }
        }
        // desk-scale reading of "infinite difference": the count keeps
        // growing with the horizon, so at least two witnesses here
        if diff < 2 {
            differences_populated = false;
        }
    }

    // every position below the horizon must leave the family at some
    // level, not necessarily one below max_level
    let intersection_empty = (0..horizon).all(|k| (0..=63).any(|n| !fam.member(n, k)));

    FamilyReport {
        horizon,
        max_level,
        nested,
        differences_populated,
        intersection_empty,
        injections_ok,
    }
}

/// Outcome of the absorption sweep `g_m ∘ g_n = g_m` on sampled words.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AbsorptionReport {
    pub m: u32,
    pub n: u32,
    pub horizon: u64,
    pub words_checked: usize,
    pub positions_compared: u64,
    pub first_mismatch: Option<(usize, u64)>,
}

impl AbsorptionReport {
    pub fn pass(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Verifies `g_m(g_n(α)) = g_m(α)` for `m < n` on the given words, at
/// every position where both sides are horizon-determined.
pub fn composition_law_check(
    fam: &NestedFamily,
    m: u32,
    n: u32,
    words: &[Word],
) -> Result<AbsorptionReport, KstError> {
    if m >= n {
        return Err(KstError::LevelsOutOfOrder(m, n));
    }
    let mut positions_compared = 0u64;
    let mut first_mismatch = None;
    for (wi, w) in words.iter().enumerate() {
        let alpha = partial_from_word(w);
        let lhs = g_eval(fam, m, &g_eval(fam, n, &alpha));
        let rhs = g_eval(fam, m, &alpha);
        for (k, (a, b)) in lhs.iter().zip(rhs.iter()).enumerate() {
            if let (Some(a), Some(b)) = (a, b) {
                positions_compared += 1;
                if a != b && first_mismatch.is_none() {
                    first_mismatch = Some((wi, k as u64));
                }
            }
        }
    }
    Ok(AbsorptionReport {
        m,
        n,
        horizon: words.first().map_or(0, |w| w.len() as u64),
        words_checked: words.len(),
        positions_compared,
        first_mismatch,
    })
}

/// Verifies that the level-`n` map sends extensions of `s` to extensions
/// of `s`, which needs every element of `S_n` to sit beyond `|s|`.
pub fn cylinder_stability_check(
    fam: &NestedFamily,
    level: u32,
    s: &Word,
    words: &[Word],
) -> Result<bool, KstError> {
    let horizon = words.first().map_or(0, |w| w.len() as u64);
    let least = fam
        .least_member_below(level, horizon)
        .ok_or(KstError::EmptyLevel(level))?;
    if s.len() as u64 >= least {
        return Err(KstError::PrefixTooLong(s.len(), least));
    }
    for w in words {
        // overwrite the prefix so the sample extends s
        let mut alpha = partial_from_word(w);
        for i in 0..s.len() {
            alpha[i] = Some(s.bit(i));
        }
        let image = g_eval(fam, level, &alpha);
        for i in 0..s.len() {
            if image[i] != Some(s.bit(i)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
