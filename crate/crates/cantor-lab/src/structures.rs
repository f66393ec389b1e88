//! Doubling transforms on finite relations and the property-class case
//! split.
//!
//! Each transform sends a relation `A` on `n` points to a relation on the
//! doubled ground set `n × {0, 1}` that keeps an embedded copy of `A`
//! between the two layers while forcing an order- or graph-theoretic
//! profile: a partial order, a strict partial order, a reflexive symmetric
//! relation, or an irreflexive symmetric one. The class analysis decides,
//! for each subset of the five basic properties, whether relations in that
//! class are forced empty, forced under the diagonal, reducible to
//! equivalence relations, or admit the doubling construction.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A relation on the ground set `{0, …, n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteRelation {
    pub n: usize,
    pub pairs: BTreeSet<(usize, usize)>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructError {
    #[error("pair ({0}, {1}) outside ground set of size {2}")]
    PairOutOfRange(usize, usize, usize),
}

impl FiniteRelation {
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, StructError> {
        let pairs: BTreeSet<(usize, usize)> = pairs.into_iter().collect();
        for &(x, y) in &pairs {
            if x >= n || y >= n {
                return Err(StructError::PairOutOfRange(x, y, n));
            }
        }
        Ok(FiniteRelation { n, pairs })
    }

    pub fn empty(n: usize) -> Self {
        FiniteRelation {
            n,
            pairs: BTreeSet::new(),
        }
    }

    /// Relation from the bits of `mask`, row-major; ground sets up to 8
    /// points this way.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        let mut pairs = BTreeSet::new();
        for x in 0..n {
            for y in 0..n {
                if (mask >> (x * n + y)) & 1 == 1 {
                    pairs.insert((x, y));
                }
            }
        }
        FiniteRelation { n, pairs }
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.pairs.contains(&(x, y))
    }
}

/// The five basic properties, indexed 0–4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Reflexive = 0,
    Irreflexive = 1,
    Symmetric = 2,
    Antisymmetric = 3,
    Transitive = 4,
}

impl Property {
    pub const ALL: [Property; 5] = [
        Property::Reflexive,
        Property::Irreflexive,
        Property::Symmetric,
        Property::Antisymmetric,
        Property::Transitive,
    ];

    pub fn holds(self, rel: &FiniteRelation) -> bool {
        let n = rel.n;
        match self {
            Property::Reflexive => (0..n).all(|x| rel.contains(x, x)),
            Property::Irreflexive => (0..n).all(|x| !rel.contains(x, x)),
            Property::Symmetric => rel.pairs.iter().all(|&(x, y)| rel.contains(y, x)),
            Property::Antisymmetric => rel
                .pairs
                .iter()
                .all(|&(x, y)| x == y || !rel.contains(y, x)),
            Property::Transitive => rel.pairs.iter().all(|&(x, y)| {
                (0..n).all(|z| !rel.contains(y, z) || rel.contains(x, z))
            }),
        }
    }
}

/// Exact property profile by exhaustive scan.
pub fn check_properties(rel: &FiniteRelation) -> BTreeSet<Property> {
    Property::ALL.iter().copied().filter(|p| p.holds(rel)).collect()
}

/// Which doubling transform to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformKind {
    /// Identity pairs plus the embedded copy: a partial order.
    R,
    /// The embedded copy alone: a strict partial order.
    RPrime,
    /// Identity pairs plus the copy and its mirror: reflexive symmetric.
    S,
    /// The copy and its mirror: irreflexive symmetric.
    SPrime,
}

/// Index of the doubled element `(x, layer)`.
pub fn doubled_index(x: usize, layer: usize, n: usize) -> usize {
    x + layer * n
}

/// Applies a doubling transform; the result lives on `2n` points, where
/// point `x` of layer `i` is `x + i·n`.
pub fn transform(kind: TransformKind, rel: &FiniteRelation) -> FiniteRelation {
    let n = rel.n;
    let mut pairs = BTreeSet::new();
    let identity = matches!(kind, TransformKind::R | TransformKind::S);
    let mirror = matches!(kind, TransformKind::S | TransformKind::SPrime);
    if identity {
        for x in 0..n {
            for layer in 0..2 {
                let i = doubled_index(x, layer, n);
                pairs.insert((i, i));
            }
        }
    }
    for &(x, y) in &rel.pairs {
        pairs.insert((doubled_index(x, 0, n), doubled_index(y, 1, n)));
        if mirror {
            pairs.insert((doubled_index(y, 1, n), doubled_index(x, 0, n)));
        }
    }
    FiniteRelation { n: 2 * n, pairs }
}

/// A selection of the five basic properties.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaClass {
    pub properties: BTreeSet<Property>,
}

impl SigmaClass {
    pub fn new(properties: impl IntoIterator<Item = Property>) -> Self {
        SigmaClass {
            properties: properties.into_iter().collect(),
        }
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        SigmaClass::new(indices.into_iter().map(|i| Property::ALL[i]))
    }

    pub fn contains(&self, p: Property) -> bool {
        self.properties.contains(&p)
    }

    /// All 32 classes.
    pub fn all() -> Vec<SigmaClass> {
        (0u32..32)
            .map(|mask| {
                SigmaClass::new(
                    Property::ALL
                        .iter()
                        .copied()
                        .filter(|&p| (mask >> (p as u32)) & 1 == 1),
                )
            })
            .collect()
    }
}

/// Verdict of the class analysis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SigmaVerdict {
    /// Every relation with these properties is empty.
    EmptyClass,
    /// Every relation with these properties sits inside the diagonal.
    DiagonalOnly,
    /// The class reduces to the study of equivalence relations.
    EquivalenceReducible,
    /// The doubling construction applies.
    Admissible,
}

/// Case split on a property selection, decided syntactically:
/// reflexive + irreflexive (or irreflexive symmetric transitive) forces
/// emptiness; symmetric + antisymmetric forces a sub-diagonal relation;
/// exactly {symmetric, transitive} with or without reflexivity reduces to
/// equivalence relations; anything else is admissible.
pub fn classify_sigma(sigma: &SigmaClass) -> SigmaVerdict {
    use Property::*;
    let has = |p: Property| sigma.contains(p);
    let exactly = |ps: &[Property]| {
        sigma.properties.len() == ps.len() && ps.iter().all(|&p| has(p))
    };
    if (has(Reflexive) && has(Irreflexive)) || exactly(&[Irreflexive, Symmetric, Transitive]) {
        SigmaVerdict::EmptyClass
    } else if has(Symmetric) && has(Antisymmetric) {
        SigmaVerdict::DiagonalOnly
    } else if exactly(&[Reflexive, Symmetric, Transitive]) || exactly(&[Symmetric, Transitive]) {
        SigmaVerdict::EquivalenceReducible
    } else {
        SigmaVerdict::Admissible
    }
}

/// Exhaustive confirmation of an `EmptyClass` or `DiagonalOnly` verdict on
/// every relation over ground sets of at most `max_points` points.
pub fn confirm_verdict(sigma: &SigmaClass, verdict: SigmaVerdict, max_points: usize) -> bool {
    for n in 0..=max_points {
        let cells = n * n;
        for mask in 0u64..(1u64 << cells) {
            let rel = FiniteRelation::from_mask(n, mask);
            if sigma.properties.iter().all(|p| p.holds(&rel)) {
                let ok = match verdict {
                    SigmaVerdict::EmptyClass => rel.pairs.is_empty(),
                    SigmaVerdict::DiagonalOnly => rel.pairs.iter().all(|&(x, y)| x == y),
                    _ => true,
                };
                if !ok {
                    return false;
                }
            }
        }
    }
    true
}
