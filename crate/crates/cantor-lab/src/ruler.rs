//! Ruler sequences and finitely-described index sets.
//!
//! The binary ruler function sends `i` to the 2-adic valuation of `i + 1`.
//! Feeding it through a seed sequence built from an eventually periodic
//! parameter yields an uncountable family of 0/1 sequences whose partial
//! sums generate index sets with strong window-translation regularity.
//! This module holds the sequence generators and exact membership deciders;
//! the regularity conditions themselves are checked in [`crate::conditions`].

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::Word;

/// 2-adic valuation of `i + 1`: the exponent of the largest power of two
/// dividing `i + 1`.
pub fn ruler(i: u64) -> u32 {
    (i + 1).trailing_zeros()
}

/// Eventually periodic binary parameter `pre · period^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AlphaSpec {
    pub pre: Word,
    pub period: Word,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpecError {
    #[error("period must be nonempty")]
    EmptyPeriod,
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("residue {0} out of range 1..{1}")]
    BadResidue(u64, u64),
}

impl AlphaSpec {
    pub fn new(pre: Word, period: Word) -> Result<Self, SpecError> {
        if period.is_empty() {
            return Err(SpecError::EmptyPeriod);
        }
        Ok(AlphaSpec { pre, period })
    }

    /// The all-`bit` parameter.
    pub fn constant(bit: u8) -> Self {
        AlphaSpec {
            pre: Word::empty(),
            period: Word::from_bits([bit]).unwrap(),
        }
    }

    pub fn parse(pre: &str, period: &str) -> Self {
        AlphaSpec::new(Word::parse(pre), Word::parse(period)).unwrap()
    }

    pub fn bit(&self, n: u64) -> u8 {
        let n = n as usize;
        if n < self.pre.len() {
            self.pre.bit(n)
        } else {
            self.period.bit((n - self.pre.len()) % self.period.len())
        }
    }

    /// Exact equality as infinite words. Two eventually periodic sequences
    /// agree everywhere iff they agree up to the larger preperiod plus the
    /// least common multiple of the periods.
    pub fn same_omega_word(&self, other: &AlphaSpec) -> bool {
        let pre = self.pre.len().max(other.pre.len()) as u64;
        let l = lcm(self.period.len() as u64, other.period.len() as u64);
        (0..pre + l).all(|n| self.bit(n) == other.bit(n))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Seed bit at position `n`: even positions alternate `0, 1` with period 4,
/// odd positions copy the parameter.
pub fn gamma_alpha(alpha: &AlphaSpec, n: u64) -> u8 {
    if n % 2 == 1 {
        alpha.bit((n - 1) / 2)
    } else if n % 4 == 0 {
        0
    } else {
        1
    }
}

/// Ruler-indexed sequence: the seed bit at the ruler value of `i`.
pub fn beta_alpha(alpha: &AlphaSpec, i: u64) -> u8 {
    gamma_alpha(alpha, ruler(i) as u64)
}

/// Finitely-described total function `ω → ω`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BetaSpec {
    /// `pre · period^ω` over naturals.
    Periodic { pre: Vec<u64>, period: Vec<u64> },
    /// The ruler-indexed binary sequence for the given parameter.
    Louveau { alpha: AlphaSpec },
    /// `i ↦ i + n`.
    Shift { n: u64 },
}

impl BetaSpec {
    pub fn value(&self, i: u64) -> u64 {
        match self {
            BetaSpec::Periodic { pre, period } => {
                let i = i as usize;
                if i < pre.len() {
                    pre[i]
                } else {
                    period[(i - pre.len()) % period.len()]
                }
            }
            BetaSpec::Louveau { alpha } => beta_alpha(alpha, i) as u64,
            BetaSpec::Shift { n } => i + n,
        }
    }

    fn validate(&self) -> Result<(), SpecError> {
        if let BetaSpec::Periodic { period, .. } = self {
            if period.is_empty() {
                return Err(SpecError::EmptyPeriod);
            }
        }
        Ok(())
    }
}

/// Membership by scanning partial sums: `n` belongs to the generated set
/// iff some partial sum `Σ_{i<l} (1 + β(i))` equals `n`. Each term is at
/// least 1, so `l ≤ n` suffices.
pub fn s_beta_member(beta: &BetaSpec, n: u64) -> bool {
    let mut sum = 0u64;
    let mut l = 0u64;
    while sum < n {
        sum += 1 + beta.value(l);
        l += 1;
    }
    sum == n
}

/// Residue test behind the modular index sets.
pub fn modular_member(m: u64, residues: &BTreeSet<u64>, n: u64) -> Result<bool, SpecError> {
    if m == 0 {
        return Err(SpecError::ZeroModulus);
    }
    let r = n % m;
    Ok(r == 0 || residues.contains(&r))
}

/// A decidable infinite index set containing 0.
///
/// Either the partial-sum set of a [`BetaSpec`], or a residue-class set
/// kept in its own representation so the modular family stays testable
/// verbatim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SSpec {
    Shift {
        n: u64,
    },
    Modular {
        m: u64,
        #[serde(rename = "F")]
        residues: BTreeSet<u64>,
    },
    Louveau {
        alpha: AlphaSpec,
    },
    Periodic {
        pre: Vec<u64>,
        period: Vec<u64>,
    },
}

impl SSpec {
    /// The full set of naturals, as the modulus-1 residue set.
    pub fn omega() -> Self {
        SSpec::Modular {
            m: 1,
            residues: BTreeSet::new(),
        }
    }

    pub fn modular(m: u64, residues: impl IntoIterator<Item = u64>) -> Result<Self, SpecError> {
        if m == 0 {
            return Err(SpecError::ZeroModulus);
        }
        let residues: BTreeSet<u64> = residues.into_iter().collect();
        if let Some(&r) = residues.iter().find(|&&r| r == 0 || r >= m) {
            return Err(SpecError::BadResidue(r, m));
        }
        Ok(SSpec::Modular { m, residues })
    }

    pub fn shift(n: u64) -> Self {
        SSpec::Shift { n }
    }

    pub fn louveau(alpha: AlphaSpec) -> Self {
        SSpec::Louveau { alpha }
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        match self {
            SSpec::Modular { m, residues } => {
                if *m == 0 {
                    return Err(SpecError::ZeroModulus);
                }
                if let Some(&r) = residues.iter().find(|&&r| r == 0 || r >= *m) {
                    return Err(SpecError::BadResidue(r, *m));
                }
                Ok(())
            }
            SSpec::Shift { .. } => Ok(()),
            SSpec::Louveau { .. } => Ok(()),
            SSpec::Periodic { pre, period } => BetaSpec::Periodic {
                pre: pre.clone(),
                period: period.clone(),
            }
            .validate(),
        }
    }

    /// The generating function, for the partial-sum representations.
    pub fn beta(&self) -> Option<BetaSpec> {
        match self {
            SSpec::Shift { n } => Some(BetaSpec::Shift { n: *n }),
            SSpec::Louveau { alpha } => Some(BetaSpec::Louveau {
                alpha: alpha.clone(),
            }),
            SSpec::Periodic { pre, period } => Some(BetaSpec::Periodic {
                pre: pre.clone(),
                period: period.clone(),
            }),
            SSpec::Modular { .. } => None,
        }
    }

    pub fn contains(&self, n: u64) -> bool {
        match self {
            SSpec::Modular { m, residues } => {
                modular_member(*m, residues, n).expect("validated modulus")
            }
            other => s_beta_member(&other.beta().expect("non-modular"), n),
        }
    }

    /// The elements up to and including `bound`, in order.
    pub fn elements_upto(&self, bound: u64) -> Vec<u64> {
        match self {
            SSpec::Modular { .. } => (0..=bound).filter(|&n| self.contains(n)).collect(),
            other => {
                let beta = other.beta().expect("non-modular");
                let mut out = Vec::new();
                let mut sum = 0u64;
                let mut l = 0u64;
                while sum <= bound {
                    out.push(sum);
                    sum += 1 + beta.value(l);
                    l += 1;
                }
                out
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ruler_values() {
        assert_eq!(ruler(0), 0);
        assert_eq!(ruler(3), 2);
        assert_eq!(ruler(7), 3);
        assert_eq!(ruler(1), 1);
    }

    #[test]
    fn ruler_periodicity() {
        // dropping a multiple of 2^n does not change the value below 2^n - 1
        for n in 0..=12u32 {
            for i in 0..(1u64 << n).saturating_sub(1) {
                let v = ruler(i);
                for l in 0..=64u64 {
                    assert_eq!(ruler((1u64 << n) * l + i), v, "n={} i={} l={}", n, i, l);
                }
            }
        }
    }

    #[test]
    fn seed_bit_values() {
        let zero = AlphaSpec::constant(0);
        let one = AlphaSpec::constant(1);
        assert_eq!(gamma_alpha(&zero, 0), 0);
        assert_eq!(gamma_alpha(&zero, 2), 1);
        assert_eq!(gamma_alpha(&zero, 5), 0); // odd position copies the parameter
        assert_eq!(gamma_alpha(&one, 5), 1);
    }

    #[test]
    fn ruler_sequence_values() {
        let zero = AlphaSpec::constant(0);
        let one = AlphaSpec::constant(1);
        assert_eq!(beta_alpha(&zero, 3), 1); // ruler(3) = 2, seed(2) = 1
        assert_eq!(beta_alpha(&zero, 0), 0);
        assert_eq!(beta_alpha(&one, 1), 1); // ruler(1) = 1, seed(1) = parameter(0)
    }

    #[test]
    fn ruler_sequence_prefixes_are_palindromes() {
        // sampled parameters: constants plus a spread of short pre/period pairs
        let mut alphas = vec![AlphaSpec::constant(0), AlphaSpec::constant(1)];
        for seed in 0u64..48 {
            let pre_len = (seed % 3) as usize;
            let per_len = 1 + (seed % 4) as usize;
            let pre = Word::from_bits((0..pre_len).map(|i| ((seed >> i) & 1) as u8)).unwrap();
            let period =
                Word::from_bits((0..per_len).map(|i| ((seed >> (i + 3)) & 1) as u8)).unwrap();
            alphas.push(AlphaSpec::new(pre, period).unwrap());
        }
        assert!(alphas.len() >= 50);
        for alpha in &alphas {
            for n in 0..=14u32 {
                let len = (1u64 << n) - 1;
                let w =
                    Word::from_bits((0..len).map(|i| beta_alpha(alpha, i))).unwrap();
                assert!(w.is_symmetric(), "n={} alpha={:?}", n, alpha);
            }
        }
    }

    #[test]
    fn partial_sum_membership() {
        let triangular = BetaSpec::Shift { n: 0 };
        assert!(s_beta_member(&triangular, 6));
        assert!(!s_beta_member(&triangular, 4));
        assert!(s_beta_member(&triangular, 0));
        assert!(s_beta_member(&BetaSpec::Shift { n: 3 }, 0));
    }

    #[test]
    fn membership_matches_materialized_set() {
        let specs = [
            SSpec::shift(0),
            SSpec::shift(2),
            SSpec::louveau(AlphaSpec::constant(0)),
            SSpec::louveau(AlphaSpec::parse("10", "0")),
            SSpec::Periodic {
                pre: vec![2, 0],
                period: vec![1, 3],
            },
        ];
        for s in &specs {
            let beta = s.beta().unwrap();
            let bound = 300u64;
            // independent oracle: accumulate partial sums into a set
            let mut oracle = BTreeSet::new();
            let mut sum = 0u64;
            let mut l = 0u64;
            while sum <= bound {
                oracle.insert(sum);
                sum += 1 + beta.value(l);
                l += 1;
            }
            for n in 0..=bound {
                assert_eq!(s_beta_member(&beta, n), oracle.contains(&n), "{:?} at {}", s, n);
            }
            assert_eq!(s.elements_upto(bound), oracle.into_iter().collect::<Vec<_>>());
        }
    }

    #[test]
    fn modular_membership() {
        let f: BTreeSet<u64> = [1].into_iter().collect();
        assert!(modular_member(3, &f, 4).unwrap());
        assert!(!modular_member(3, &f, 2).unwrap());
        assert!(modular_member(3, &f, 0).unwrap());
        assert!(modular_member(5, &BTreeSet::new(), 0).unwrap());
        assert_eq!(modular_member(0, &f, 1), Err(SpecError::ZeroModulus));
        assert!(SSpec::modular(0, []).is_err());
        assert!(SSpec::modular(3, [3]).is_err());
    }

    #[test]
    fn shift_spec_gap_identity() {
        // consecutive elements of the shifted partial-sum set at index l
        // differ by l + n + 2 for the (n+1)-shift
        for n in 0..=4u64 {
            let s = SSpec::shift(n + 1);
            let elems = s.elements_upto(20_000);
            for l in 0..100usize {
                assert_eq!(elems[l + 1] - elems[l], l as u64 + n + 2);
            }
        }
    }

    #[test]
    fn every_spec_contains_zero_and_grows() {
        let specs = [
            SSpec::omega(),
            SSpec::modular(2, []).unwrap(),
            SSpec::modular(3, [1]).unwrap(),
            SSpec::shift(0),
            SSpec::shift(3),
            SSpec::louveau(AlphaSpec::constant(0)),
            SSpec::louveau(AlphaSpec::parse("011", "10")),
        ];
        for s in &specs {
            assert!(s.contains(0), "{:?}", s);
            let mut last = 0usize;
            for bound in [64u64, 256, 1024, 4096] {
                let count = (0..=bound).filter(|&n| s.contains(n)).count();
                assert!(count > last, "{:?} stalled at {}", s, bound);
                last = count;
            }
        }
    }

    #[test]
    fn omega_word_equality_is_exact() {
        let a = AlphaSpec::parse("01", "10");
        let b = AlphaSpec::parse("0", "11");
        // 01 101010.. vs 0 111111.. differ at position 2
        assert!(!a.same_omega_word(&b));
        let c = AlphaSpec::parse("011", "01");
        // 011 010101.. equals 01 101010.. ? positions: a = 0,1,1,0,1,0,..; c = 0,1,1,0,1,0,1..
        assert!(a.same_omega_word(&c));
        assert!(a.same_omega_word(&a));
    }

    #[test]
    fn spec_json_round_trip() {
        let samples = [
            r#"{"kind":"shift","n":4}"#,
            r#"{"kind":"modular","m":3,"F":[1]}"#,
            r#"{"kind":"louveau","alpha":{"pre":"10","period":"0"}}"#,
            r#"{"kind":"periodic","pre":[2],"period":[0,1]}"#,
        ];
        for text in samples {
            let spec: SSpec = serde_json::from_str(text).unwrap();
            spec.validate().unwrap();
            let back = serde_json::to_string(&spec).unwrap();
            let reparsed: SSpec = serde_json::from_str(&back).unwrap();
            assert_eq!(spec, reparsed);
        }
    }
}
