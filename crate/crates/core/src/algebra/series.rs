use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use super::coeff::CoeffRing;
use super::generator::GeneratorTable;
use super::poly::GradedPoly;
use crate::error::{Error, Result};

/// Power series in one (`x`) or two (`x`, `y`) variables with polynomial
/// coefficients, truncated at total variable degree `T` and coefficient
/// weight `N` (the second component of a coefficient's bidegree).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    vars: u8,
    table: Arc<GeneratorTable>,
    ring: CoeffRing,
    max_degree: u32,
    max_weight: u32,
    coeffs: BTreeMap<(u32, u32), GradedPoly>,
}

impl TruncatedSeries {
    /// The zero series. `vars` must be 1 or 2.
    pub fn zero(vars: u8, table: &Arc<GeneratorTable>, ring: &CoeffRing, max_degree: u32, max_weight: u32) -> Self {
        assert!(vars == 1 || vars == 2, "series have one or two variables");
        TruncatedSeries {
            vars,
            table: table.clone(),
            ring: ring.clone(),
            max_degree,
            max_weight,
            coeffs: BTreeMap::new(),
        }
    }

    /// Truncation with the default `T = N + 1`.
    pub fn zero_default(vars: u8, table: &Arc<GeneratorTable>, ring: &CoeffRing, max_weight: u32) -> Self {
        Self::zero(vars, table, ring, max_weight + 1, max_weight)
    }

    /// The series `x` (or `y` when `which == 1` in a bivariate series).
    pub fn variable(&self, which: u8) -> Self {
        let mut s = self.empty_like();
        let key = if which == 0 { (1, 0) } else { (0, 1) };
        assert!(which < self.vars);
        s.set(key, GradedPoly::one(&self.table, &self.ring));
        s
    }

    /// A univariate series from its coefficients, `coeffs[k]` multiplying `x^k`.
    pub fn from_coefficients(
        table: &Arc<GeneratorTable>,
        ring: &CoeffRing,
        max_degree: u32,
        max_weight: u32,
        coeffs: impl IntoIterator<Item = (u32, GradedPoly)>,
    ) -> Self {
        let mut s = Self::zero(1, table, ring, max_degree, max_weight);
        for (k, c) in coeffs {
            s.set((k, 0), c);
        }
        s
    }

    fn empty_like(&self) -> Self {
        Self::zero(self.vars, &self.table, &self.ring, self.max_degree, self.max_weight)
    }

    pub fn vars(&self) -> u8 {
        self.vars
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn ring(&self) -> &CoeffRing {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero coefficients keyed by `(i, j)` for `x^i y^j`.
    pub fn coefficients(&self) -> impl Iterator<Item = (&(u32, u32), &GradedPoly)> {
        self.coeffs.iter()
    }

    fn truncate_poly(&self, c: &GradedPoly) -> GradedPoly {
        let n = self.max_weight as i64;
        if c.terms().all(|(m, _)| c.bidegree_of(m).q <= n) {
            return c.clone();
        }
        let mut out = GradedPoly::zero(&self.table, &self.ring);
        for (b, comp) in c.components() {
            if b.q <= n {
                out = &out + &comp;
            }
        }
        out
    }

    /// Sets the coefficient of `x^i y^j`, discarding what lies beyond truncation.
    pub fn set(&mut self, key: (u32, u32), c: GradedPoly) {
        if key.0 + key.1 > self.max_degree || (self.vars == 1 && key.1 > 0) {
            return;
        }
        let c = self.truncate_poly(&c);
        if c.is_zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, c);
        }
    }

    fn add_at(&mut self, key: (u32, u32), c: &GradedPoly) {
        if key.0 + key.1 > self.max_degree {
            return;
        }
        let cur = self.coeffs.remove(&key).unwrap_or_else(|| GradedPoly::zero(&self.table, &self.ring));
        self.set(key, &cur + c);
    }

    /// Coefficient of `x^k` (univariate).
    pub fn coefficient(&self, k: u32) -> Result<GradedPoly> {
        self.coefficient2(k, 0)
    }

    /// Coefficient of `x^i y^j`.
    pub fn coefficient2(&self, i: u32, j: u32) -> Result<GradedPoly> {
        if i + j > self.max_degree {
            return Err(Error::BeyondTruncation { what: format!("x^{i} y^{j}"), bound: self.max_degree });
        }
        Ok(self.coeffs.get(&(i, j)).cloned().unwrap_or_else(|| GradedPoly::zero(&self.table, &self.ring)))
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.ring != o.ring || self.table != o.table {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut out = self.clone();
        out.vars = self.vars.max(o.vars);
        out.max_degree = self.max_degree.min(o.max_degree);
        out.max_weight = self.max_weight.min(o.max_weight);
        for (&k, c) in &o.coeffs {
            out.add_at(k, c);
        }
        let keys: Vec<_> = out.coeffs.keys().copied().collect();
        for k in keys {
            let c = out.coeffs.remove(&k).unwrap();
            out.set(k, c);
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(-1))
    }

    pub fn scale(&self, k: impl Into<BigInt>) -> Self {
        let k = k.into();
        let mut out = self.empty_like();
        for (&key, c) in &self.coeffs {
            out.set(key, c.scale(k.clone()));
        }
        out
    }

    /// Multiplies every coefficient by a polynomial.
    pub fn scale_poly(&self, p: &GradedPoly) -> Result<Self> {
        let mut out = self.empty_like();
        for (&key, c) in &self.coeffs {
            out.set(key, p.try_mul(c)?);
        }
        Ok(out)
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut out = self.empty_like();
        out.vars = self.vars.max(o.vars);
        out.max_degree = self.max_degree.min(o.max_degree);
        out.max_weight = self.max_weight.min(o.max_weight);
        for (&(i1, j1), a) in &self.coeffs {
            for (&(i2, j2), b) in &o.coeffs {
                let key = (i1 + i2, j1 + j2);
                if key.0 + key.1 > out.max_degree {
                    continue;
                }
                out.add_at(key, &a.try_mul(b)?);
            }
        }
        Ok(out)
    }

    pub fn constant_term(&self) -> GradedPoly {
        self.coeffs.get(&(0, 0)).cloned().unwrap_or_else(|| GradedPoly::zero(&self.table, &self.ring))
    }

    /// `self ∘ inner` for univariate `self`; `inner` may be bivariate.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if self.vars != 1 {
            return Err(Error::InvalidContext("outer series must be univariate".into()));
        }
        self.check(inner)?;
        if !inner.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut acc = inner.empty_like();
        acc.max_degree = self.max_degree.min(inner.max_degree);
        acc.max_weight = self.max_weight.min(inner.max_weight);
        // Horner: c_T, then acc·inner + c_k
        for k in (0..=self.max_degree).rev() {
            acc = acc.mul(inner)?;
            if let Some(c) = self.coeffs.get(&(k, 0)) {
                acc.add_at((0, 0), c);
            }
        }
        Ok(acc)
    }

    /// Compositional inverse of `x + O(x²)`, solved one degree at a time.
    pub fn invert(&self) -> Result<Self> {
        if self.vars != 1 {
            return Err(Error::InvalidContext("only univariate series can be inverted".into()));
        }
        let lead = self.coefficient(1)?;
        if !self.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        if lead.as_constant().map(|c| self.ring.reduce(c)) != Some(self.ring.reduce(BigInt::one())) {
            return Err(Error::NotInvertible);
        }
        let mut g = self.variable(0);
        for k in 2..=self.max_degree {
            // coefficient of x^k in s∘g is linear in g_k with unit coefficient
            let e = self.compose(&g)?.coefficient(k)?;
            let cur = g.coefficient(k)?;
            g.set((k, 0), &cur - &e);
        }
        Ok(g)
    }

    /// The univariate series obtained by setting `y = 0`.
    pub fn restrict_y_zero(&self) -> Self {
        let mut out = self.empty_like();
        out.vars = 1;
        for (&(i, j), c) in &self.coeffs {
            if j == 0 {
                out.set((i, 0), c.clone());
            }
        }
        out
    }

    /// Exchanges `x` and `y`.
    pub fn swap(&self) -> Self {
        let mut out = self.empty_like();
        for (&(i, j), c) in &self.coeffs {
            out.set((j, i), c.clone());
        }
        out
    }

    /// Reduces all coefficients into another ring.
    pub fn with_ring(&self, ring: &CoeffRing) -> Self {
        let mut out = Self::zero(self.vars, &self.table, ring, self.max_degree, self.max_weight);
        for (&k, c) in &self.coeffs {
            out.set(k, c.with_ring(ring));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b_table(n: u32) -> Arc<GeneratorTable> {
        let mut b = GeneratorTable::builder();
        for k in 1..=n {
            b = b.generator(&format!("b{k}"), 2 * k as i64, k as i64);
        }
        b.build().unwrap()
    }

    fn exp_series(n: u32) -> TruncatedSeries {
        let t = b_table(n);
        let r = CoeffRing::Integers;
        let mut coeffs = vec![(1, GradedPoly::one(&t, &r))];
        for k in 1..=n {
            coeffs.push((k + 1, GradedPoly::var(&t, &r, &format!("b{k}")).unwrap()));
        }
        TruncatedSeries::from_coefficients(&t, &r, n + 1, n, coeffs)
    }

    #[test]
    fn inverse_of_exp() {
        let e = exp_series(4);
        let l = e.invert().unwrap();
        assert_eq!(l.coefficient(2).unwrap().to_string(), "-b1");
        assert_eq!(l.coefficient(3).unwrap().to_string(), "2*b1^2 - b2");
        let id = e.compose(&l).unwrap();
        assert_eq!(id, e.variable(0));
        assert_eq!(l.compose(&e).unwrap(), e.variable(0));
    }

    #[test]
    fn compose_rejects_constant_term() {
        let e = exp_series(2);
        let one = TruncatedSeries::from_coefficients(
            e.table(),
            e.ring(),
            3,
            2,
            [(0, GradedPoly::one(e.table(), e.ring()))],
        );
        assert_eq!(e.compose(&one), Err(Error::NonzeroConstantTerm));
        assert_eq!(one.add(&e).unwrap().invert(), Err(Error::NonzeroConstantTerm));
    }
}
