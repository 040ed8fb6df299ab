use std::cmp::Ordering;
use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

/// A bidegree `(p, q)`; `p` is the first (Koszul) degree.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bidegree {
    pub p: i64,
    pub q: i64,
}

impl Bidegree {
    pub const ZERO: Bidegree = Bidegree { p: 0, q: 0 };

    pub const fn new(p: i64, q: i64) -> Self {
        Bidegree { p, q }
    }

    pub fn is_odd(&self) -> bool {
        self.p.rem_euclid(2) == 1
    }
}

impl Add for Bidegree {
    type Output = Bidegree;
    fn add(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.p + o.p, self.q + o.q)
    }
}

impl Mul<i64> for Bidegree {
    type Output = Bidegree;
    fn mul(self, k: i64) -> Bidegree {
        Bidegree::new(self.p * k, self.q * k)
    }
}

impl std::fmt::Display for Bidegree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// Sparse exponent vector: `(generator index, exponent)` pairs sorted by index,
/// with no zero exponents.
///
/// Ordering is graded lexicographic: total exponent first, then lexicographic
/// on the dense exponent vector (earlier generators weigh more).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(idx: u32) -> Self {
        Monomial(vec![(idx, 1)])
    }

    pub fn power(idx: u32, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(idx, exp)])
        }
    }

    /// Builds a monomial from arbitrary pairs, merging repeats and dropping zeros.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut v: Vec<(u32, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        v.sort_unstable_by_key(|&(i, _)| i);
        let mut out: Vec<(u32, u32)> = Vec::with_capacity(v.len());
        for (i, e) in v {
            match out.last_mut() {
                Some((j, f)) if *j == i => *f += e,
                _ => out.push((i, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn exponent(&self, idx: u32) -> u32 {
        self.0
            .binary_search_by_key(&idx, |&(i, _)| i)
            .map(|k| self.0[k].1)
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    /// Exponent-wise sum (no signs, no caps).
    pub fn mul_raw(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Lowers the exponent of `idx` by `by`; panics if not divisible.
    pub(crate) fn divide_var(&self, idx: u32, by: u32) -> Monomial {
        let mut v = self.0.clone();
        let k = v.iter().position(|&(i, _)| i == idx).expect("generator present");
        assert!(v[k].1 >= by);
        v[k].1 -= by;
        if v[k].1 == 0 {
            v.remove(k);
        }
        Monomial(v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| {
                let (a, b) = (&self.0, &other.0);
                for k in 0..a.len().min(b.len()) {
                    if a[k].0 != b[k].0 {
                        // the one carrying the earlier generator is larger
                        return if a[k].0 < b[k].0 { Ordering::Greater } else { Ordering::Less };
                    }
                    if a[k].1 != b[k].1 {
                        return a[k].1.cmp(&b[k].1);
                    }
                }
                a.len().cmp(&b.len())
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let x = Monomial::var(0);
        let y = Monomial::var(1);
        let x2 = Monomial::power(0, 2);
        let xy = x.mul_raw(&y);
        assert!(Monomial::one() < y);
        assert!(y < x);
        assert!(x < xy);
        assert!(xy < x2);
    }

    #[test]
    fn from_pairs_merges() {
        let m = Monomial::from_pairs([(2, 1), (0, 3), (2, 2), (1, 0)]);
        assert_eq!(m.pairs(), &[(0, 3), (2, 3)]);
        assert_eq!(m.exponent(2), 3);
        assert_eq!(m.exponent(1), 0);
    }
}
