use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::coeff::CoeffRing;
use super::generator::GeneratorTable;
use super::monomial::{Bidegree, Monomial};
use crate::error::{Error, Result};

/// Maximum nesting of cap rewrites before normalization gives up.
pub const REWRITE_GUARD: usize = 256;

/// Sparse polynomial with exact coefficients over a table of bigraded,
/// possibly anticommuting generators.
///
/// Every stored term is in normal order: generators sorted by table rank,
/// Koszul signs absorbed into the coefficient, exponent caps rewritten.
#[derive(Clone, Debug)]
pub struct GradedPoly {
    table: Arc<GeneratorTable>,
    ring: CoeffRing,
    terms: BTreeMap<Monomial, BigInt>,
}

impl PartialEq for GradedPoly {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && same_table(&self.table, &other.table) && self.terms == other.terms
    }
}

impl Eq for GradedPoly {}

fn same_table(a: &Arc<GeneratorTable>, b: &Arc<GeneratorTable>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Koszul sign of `a · b` when both are in normal order: every odd letter of
/// `b` moves past every later-ranked odd letter of `a`.
fn product_sign(table: &GeneratorTable, a: &Monomial, b: &Monomial) -> bool {
    let mut flips = 0u64;
    for &(g, eg) in b.pairs() {
        if !table.get(g).odd || eg % 2 == 0 {
            continue;
        }
        for &(h, eh) in a.pairs() {
            if h > g && table.get(h).odd {
                flips += eh as u64;
            }
        }
    }
    flips % 2 == 1
}

/// Serialized form of one term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub coefficient: String,
    pub monomial: BTreeMap<String, u32>,
}

impl GradedPoly {
    pub fn zero(table: &Arc<GeneratorTable>, ring: &CoeffRing) -> Self {
        GradedPoly { table: table.clone(), ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(table: &Arc<GeneratorTable>, ring: &CoeffRing, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(table, ring);
        p.add_term(Monomial::one(), c.into());
        p
    }

    pub fn one(table: &Arc<GeneratorTable>, ring: &CoeffRing) -> Self {
        Self::constant(table, ring, 1)
    }

    /// The generator called `name`, normalized (a cap of 1 would rewrite it).
    pub fn var(table: &Arc<GeneratorTable>, ring: &CoeffRing, name: &str) -> Result<Self> {
        Self::normal_order(table, ring, &[(name, 1)], 1)
    }

    pub fn var_index(table: &Arc<GeneratorTable>, ring: &CoeffRing, idx: u32) -> Self {
        let mut p = Self::zero(table, ring);
        p.add_term(Monomial::var(idx), BigInt::one());
        p
    }

    /// Normal form of `coeff · g1^e1 · g2^e2 ⋯` for a word of named generators.
    pub fn normal_order(
        table: &Arc<GeneratorTable>,
        ring: &CoeffRing,
        word: &[(&str, u32)],
        coeff: impl Into<BigInt>,
    ) -> Result<Self> {
        let mut idx = Vec::with_capacity(word.len());
        for &(name, e) in word {
            idx.push((table.lookup(name)?, e));
        }
        Self::normal_order_indices(table, ring, &idx, coeff)
    }

    pub fn normal_order_indices(
        table: &Arc<GeneratorTable>,
        ring: &CoeffRing,
        word: &[(u32, u32)],
        coeff: impl Into<BigInt>,
    ) -> Result<Self> {
        let mut letters = Vec::new();
        for &(g, e) in word {
            if g as usize >= table.len() {
                return Err(Error::UnknownGenerator(format!("#{g}")));
            }
            letters.extend(std::iter::repeat(g).take(e as usize));
        }
        // one transposition per inverted pair of odd letters
        let mut flips = 0usize;
        for i in 0..letters.len() {
            if !table.get(letters[i]).odd {
                continue;
            }
            for j in i + 1..letters.len() {
                if letters[j] < letters[i] && table.get(letters[j]).odd {
                    flips += 1;
                }
            }
        }
        let mut c: BigInt = coeff.into();
        if flips % 2 == 1 {
            c = -c;
        }
        let m = Monomial::from_pairs(letters.into_iter().map(|g| (g, 1)));
        let mut out = Self::zero(table, ring);
        out.push_normalized(c, m, 0)?;
        Ok(out)
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn ring(&self) -> &CoeffRing {
        &self.ring
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    /// The constant term.
    pub fn constant_term(&self) -> BigInt {
        self.coefficient(&Monomial::one())
    }

    /// Returns `Some(c)` when the polynomial is the constant `c`.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        let c = self.ring.reduce(c);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = self.ring.reduce(o.get() + c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Adds `c · m` where `m` is sorted but may violate exponent caps.
    fn push_normalized(&mut self, c: BigInt, m: Monomial, depth: usize) -> Result<()> {
        if depth > REWRITE_GUARD {
            return Err(Error::RewriteLimit(depth));
        }
        let capped = m.pairs().iter().find_map(|&(g, e)| {
            let cap = self.table.get(g).cap.as_ref()?;
            (e >= cap.exponent).then_some((g, cap.exponent))
        });
        let Some((g, cap_exp)) = capped else {
            self.add_term(m, c);
            return Ok(());
        };
        let table = self.table.clone();
        // m = prefix · g^cap · rest; pull g^cap to the front
        let block_odd = table.get(g).odd && cap_exp % 2 == 1;
        let prefix_odd = m
            .pairs()
            .iter()
            .filter(|&&(h, e)| h < g && table.get(h).odd && e % 2 == 1)
            .count()
            % 2
            == 1;
        let mut c = c;
        if block_odd && prefix_odd {
            c = -c;
        }
        let rest = m.divide_var(g, cap_exp);
        let rewrite = table.get(g).cap.as_ref().expect("capped").rewrite.clone();
        for (rc, rm) in rewrite {
            let mut t = &c * &rc;
            if product_sign(&table, &rm, &rest) {
                t = -t;
            }
            self.push_normalized(t, rm.mul_raw(&rest), depth + 1)?;
        }
        Ok(())
    }

    fn check_compatible(&self, other: &GradedPoly) -> Result<()> {
        if self.ring != other.ring || !same_table(&self.table, &other.table) {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &GradedPoly) -> Result<GradedPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &GradedPoly) -> Result<GradedPoly> {
        self.try_add(&other.neg())
    }

    /// Distributive product; each pair of terms is normal-ordered.
    pub fn try_mul(&self, other: &GradedPoly) -> Result<GradedPoly> {
        self.check_compatible(other)?;
        let mut out = Self::zero(&self.table, &self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut c = ca * cb;
                if product_sign(&self.table, ma, mb) {
                    c = -c;
                }
                out.push_normalized(c, ma.mul_raw(mb), 0)?;
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> GradedPoly {
        self.scale(-1)
    }

    pub fn scale(&self, k: impl Into<BigInt>) -> GradedPoly {
        let k = k.into();
        let mut out = Self::zero(&self.table, &self.ring);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * &k);
        }
        out
    }

    /// Adds `k · other` in place.
    pub fn add_scaled(&mut self, other: &GradedPoly, k: &BigInt) {
        debug_assert!(self.check_compatible(other).is_ok());
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * k);
        }
    }

    pub fn pow(&self, n: u32) -> GradedPoly {
        let mut acc = Self::one(&self.table, &self.ring);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn bidegree_of(&self, m: &Monomial) -> Bidegree {
        self.table.bidegree(m)
    }

    /// The common bidegree of all terms, if there is one (`None` for zero or
    /// inhomogeneous polynomials).
    pub fn homogeneous_bidegree(&self) -> Option<Bidegree> {
        let mut it = self.terms.keys().map(|m| self.table.bidegree(m));
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_bidegree().is_some()
    }

    pub fn homogeneous_component(&self, b: Bidegree) -> GradedPoly {
        let mut out = Self::zero(&self.table, &self.ring);
        for (m, c) in &self.terms {
            if self.table.bidegree(m) == b {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Partition of the terms by bidegree.
    pub fn components(&self) -> BTreeMap<Bidegree, GradedPoly> {
        let mut out: BTreeMap<Bidegree, GradedPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(self.table.bidegree(m))
                .or_insert_with(|| Self::zero(&self.table, &self.ring))
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }

    /// Sum of the terms whose monomial has total exponent exactly 1.
    pub fn linear_part(&self) -> GradedPoly {
        let mut out = Self::zero(&self.table, &self.ring);
        for (m, c) in &self.terms {
            if m.total_degree() == 1 {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Image under the reduction map to another coefficient ring.
    pub fn with_ring(&self, ring: &CoeffRing) -> GradedPoly {
        let mut out = Self::zero(&self.table, ring);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// Ring map defined on generators: `g_i ↦ image(i)`, extended
    /// multiplicatively in normal order.
    pub fn substitute(
        &self,
        table: &Arc<GeneratorTable>,
        ring: &CoeffRing,
        mut image: impl FnMut(u32) -> GradedPoly,
    ) -> Result<GradedPoly> {
        let mut cache: BTreeMap<u32, GradedPoly> = BTreeMap::new();
        let mut out = Self::zero(table, ring);
        for (m, c) in &self.terms {
            let mut acc = Self::constant(table, ring, c.clone());
            for &(g, e) in m.pairs() {
                let img = cache.entry(g).or_insert_with(|| image(g)).clone();
                for _ in 0..e {
                    acc = acc.try_mul(&img)?;
                }
            }
            out = out.try_add(&acc)?;
        }
        Ok(out)
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .rev()
            .map(|(m, c)| TermRecord {
                coefficient: c.to_string(),
                monomial: m
                    .pairs()
                    .iter()
                    .map(|&(g, e)| (self.table.get(g).name.clone(), e))
                    .collect(),
            })
            .collect()
    }

    pub fn from_records(table: &Arc<GeneratorTable>, ring: &CoeffRing, records: &[TermRecord]) -> Result<Self> {
        let mut out = Self::zero(table, ring);
        for r in records {
            let c: BigInt = r
                .coefficient
                .parse()
                .map_err(|_| Error::Serde(format!("bad coefficient `{}`", r.coefficient)))?;
            let word: Vec<(&str, u32)> = r.monomial.iter().map(|(n, &e)| (n.as_str(), e)).collect();
            let t = Self::normal_order(table, ring, &word, c)?;
            out = out.try_add(&t)?;
        }
        Ok(out)
    }

    /// Formats a monomial as `g1^e1*g2`.
    pub fn format_monomial(&self, m: &Monomial) -> String {
        format_monomial(&self.table, m)
    }
}

pub(crate) fn format_monomial(table: &GeneratorTable, m: &Monomial) -> String {
    m.pairs()
        .iter()
        .map(|&(g, e)| {
            let n = &table.get(g).name;
            if e == 1 {
                n.clone()
            } else {
                format!("{n}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", self.format_monomial(m))?;
            } else {
                write!(f, "{abs}*{}", self.format_monomial(m))?;
            }
        }
        Ok(())
    }
}

impl<'a> std::ops::Add<&'a GradedPoly> for &'a GradedPoly {
    type Output = GradedPoly;
    fn add(self, o: &GradedPoly) -> GradedPoly {
        self.try_add(o).expect("incompatible polynomials")
    }
}

impl<'a> std::ops::Sub<&'a GradedPoly> for &'a GradedPoly {
    type Output = GradedPoly;
    fn sub(self, o: &GradedPoly) -> GradedPoly {
        self.try_sub(o).expect("incompatible polynomials")
    }
}

impl<'a> std::ops::Mul<&'a GradedPoly> for &'a GradedPoly {
    type Output = GradedPoly;
    fn mul(self, o: &GradedPoly) -> GradedPoly {
        self.try_mul(o).expect("polynomial product failed")
    }
}

impl std::ops::Neg for &GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        GradedPoly::neg(self)
    }
}
