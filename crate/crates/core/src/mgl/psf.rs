use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::lazard::partitions;

/// A multiset of bidegrees `(p, q)`, recorded slice by slice up to `q ≤ max_q`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BidegreeFamily {
    pub max_q: i64,
    #[serde(with = "triples")]
    pub counts: BTreeMap<(i64, i64), u64>,
}

/// `counts` as a list of `[p, q, multiplicity]`, since JSON keys are strings.
mod triples {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<(i64, i64), u64>, s: S) -> Result<S::Ok, S::Error> {
        m.iter().map(|(&(p, q), &n)| (p, q, n)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<(i64, i64), u64>, D::Error> {
        let v: Vec<(i64, i64, u64)> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|(p, q, n)| ((p, q), n)).collect())
    }
}

impl BidegreeFamily {
    pub fn new(max_q: i64) -> Self {
        BidegreeFamily { max_q, counts: BTreeMap::new() }
    }

    /// The family `{(0, 0)}`.
    pub fn unit(max_q: i64) -> Self {
        Self::from_members(max_q, [(0, 0)])
    }

    pub fn from_members(max_q: i64, members: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut out = Self::new(max_q);
        for b in members {
            out.insert(b, 1);
        }
        out
    }

    /// Builds a family from a per-slice description `q ↦ [(p, multiplicity)]`.
    pub fn from_slices(max_q: i64, slice: impl Fn(i64) -> Vec<(i64, u64)>) -> Self {
        let mut out = Self::new(max_q);
        for q in 0..=max_q {
            for (p, n) in slice(q) {
                out.insert((p, q), n);
            }
        }
        out
    }

    /// `H∧MGL`: `(2w, w)` with multiplicity the number of partitions of `w`.
    pub fn h_mgl(max_q: i64) -> Self {
        Self::from_slices(max_q, |w| vec![(2 * w, partitions(w as u32).len() as u64)])
    }

    pub fn insert(&mut self, b: (i64, i64), n: u64) {
        if n == 0 || b.1 > self.max_q {
            return;
        }
        *self.counts.entry(b).or_default() += n;
    }

    pub fn count(&self, b: (i64, i64)) -> u64 {
        self.counts.get(&b).copied().unwrap_or(0)
    }

    /// Members with second degree `q`.
    pub fn slice(&self, q: i64) -> u64 {
        self.counts.iter().filter(|((_, s), _)| *s == q).map(|(_, n)| n).sum()
    }

    /// In the cone `q ≥ 0, p ≥ 2q`; each slice is finite by construction.
    pub fn is_psf(&self) -> bool {
        self.counts.keys().all(|&(p, q)| q >= 0 && p >= 2 * q)
    }

    /// Minkowski sum with multiplicities, truncated at the smaller bound.
    pub fn smash(&self, other: &BidegreeFamily) -> BidegreeFamily {
        let mut out = Self::new(self.max_q.min(other.max_q));
        for (&(p, q), &n) in &self.counts {
            for (&(p2, q2), &m) in &other.counts {
                out.insert((p + p2, q + q2), n * m);
            }
        }
        out
    }

    /// Negated bidegrees. The bound no longer describes the slices, so it is
    /// kept only as a record.
    pub fn dual(&self) -> BidegreeFamily {
        BidegreeFamily {
            max_q: self.max_q,
            counts: self.counts.iter().map(|(&(p, q), &n)| ((-p, -q), n)).collect(),
        }
    }
}
