use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::fgl::{b_table, c_name, c_table, FglModel};
use crate::algebra::linalg::{hnf, solve_in_lattice};
use crate::algebra::{CoeffRing, GradedPoly, Monomial};
use crate::error::{Error, Result};

/// Partitions of `n` in decreasing-part form, largest first part first.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            prefix.push(k);
            go(n - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// `Some((p, r))` when `m = p^r` with `p` prime and `r ≥ 1`.
pub fn prime_power(m: u64) -> Option<(u64, u32)> {
    if m < 2 {
        return None;
    }
    let p = (2..=m).find(|d| m % d == 0)?;
    let (mut x, mut r) = (m, 0);
    while x % p == 0 {
        x /= p;
        r += 1;
    }
    (x == 1).then_some((p, r))
}

/// The weight-`n` monomials `b_λ`, one per partition, with `b_n` first.
#[derive(Clone, Debug)]
pub struct WeightCoordinates {
    pub weight: u32,
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl WeightCoordinates {
    pub fn new(weight: u32) -> Self {
        let t = b_table();
        let monomials: Vec<Monomial> = partitions(weight)
            .into_iter()
            .map(|parts| Monomial::from_pairs(parts.into_iter().map(|k| (t.lookup(&format!("b{k}")).unwrap(), 1))))
            .collect();
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        WeightCoordinates { weight, monomials, index }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Coordinates of a weight-`n` polynomial; errors on foreign terms.
    pub fn vector(&self, p: &GradedPoly) -> Result<Vec<BigInt>> {
        let mut v = vec![BigInt::zero(); self.len()];
        for (m, c) in p.terms() {
            let k = *self.index.get(m).ok_or_else(|| Error::WrongWeight {
                got: p.bidegree_of(m).q as u32,
                expected: self.weight.to_string(),
            })?;
            v[k] = c.clone();
        }
        Ok(v)
    }

    pub fn polynomial(&self, v: &[BigInt]) -> GradedPoly {
        let z = CoeffRing::Integers;
        let mut out = GradedPoly::zero(b_table(), &z);
        for (m, c) in self.monomials.iter().zip(v) {
            if !c.is_zero() {
                let t = GradedPoly::normal_order_indices(b_table(), &z, m.pairs(), c.clone()).unwrap();
                out = &out + &t;
            }
        }
        out
    }
}

/// An element of the Lazard ring, stored as its image in `ℤ[b]` together
/// with a `c_{ij}`-polynomial that produces it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LazardElement {
    pub weight: u32,
    pub image: GradedPoly,
    pub provenance: GradedPoly,
}

impl LazardElement {
    /// Lazard element from a `c`-polynomial; the image is computed.
    pub fn from_provenance(weight: u32, provenance: GradedPoly, model: &FglModel) -> Result<Self> {
        let image = model.expand_provenance(&provenance)?;
        let el = LazardElement { weight, image, provenance };
        el.check_weight()?;
        Ok(el)
    }

    /// The symbol `c_{ij}` as a Lazard element.
    pub fn c(i: u32, j: u32, model: &FglModel) -> Result<Self> {
        let p = GradedPoly::var(c_table(), &CoeffRing::Integers, &c_name(i, j))?;
        Self::from_provenance(i + j - 1, p, model)
    }

    fn check_weight(&self) -> Result<()> {
        for (m, _) in self.image.terms() {
            let q = self.image.bidegree_of(m).q;
            if q != self.weight as i64 {
                return Err(Error::WrongWeight { got: q as u32, expected: self.weight.to_string() });
            }
        }
        Ok(())
    }

    /// Whether expanding the provenance reproduces the image.
    pub fn validate(&self, model: &FglModel) -> Result<bool> {
        Ok(model.expand_provenance(&self.provenance)? == self.image && self.check_weight().is_ok())
    }

    pub fn mul(&self, other: &Self) -> Self {
        LazardElement {
            weight: self.weight + other.weight,
            image: &self.image * &other.image,
            provenance: &self.provenance * &other.provenance,
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        LazardElement {
            weight: self.weight,
            image: self.image.scale(k.clone()),
            provenance: self.provenance.scale(k.clone()),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        LazardElement {
            weight: self.weight,
            image: &self.image + &other.image,
            provenance: &self.provenance + &other.provenance,
        }
    }
}

/// Integer basis of `h(L)_n ⊂ ℤ[b]_n` with a provenance for each basis row.
#[derive(Clone, Debug)]
pub struct LatticeWeight {
    pub coords: WeightCoordinates,
    pub basis: Vec<Vec<BigInt>>,
    pub provenance: Vec<GradedPoly>,
}

impl LatticeWeight {
    pub fn element(&self, row: usize) -> LazardElement {
        LazardElement {
            weight: self.coords.weight,
            image: self.coords.polynomial(&self.basis[row]),
            provenance: self.provenance[row].clone(),
        }
    }

    /// Writes `image` as an integer combination of the basis; `None` when
    /// the polynomial is not in `h(L)`.
    pub fn solve(&self, image: &GradedPoly) -> Result<Option<GradedPoly>> {
        let v = self.coords.vector(image)?;
        let Some(x) = solve_in_lattice(&self.basis, self.coords.len(), &v) else {
            return Ok(None);
        };
        let mut prov = GradedPoly::zero(c_table(), &CoeffRing::Integers);
        for (k, p) in x.iter().zip(&self.provenance) {
            prov.add_scaled(p, k);
        }
        Ok(Some(prov))
    }
}

/// Row-lattice HNF of a list of Lazard elements of one weight.
pub(crate) fn reduce_span(coords: &WeightCoordinates, span: &[LazardElement]) -> Result<LatticeWeight> {
    let rows: Vec<Vec<BigInt>> = span.iter().map(|e| coords.vector(&e.image)).collect::<Result<_>>()?;
    let f = hnf(&rows, coords.len());
    let mut basis = Vec::new();
    let mut provenance = Vec::new();
    for i in 0..f.rank() {
        basis.push(f.h[i].clone());
        let mut p = GradedPoly::zero(c_table(), &CoeffRing::Integers);
        for (k, e) in f.u[i].iter().zip(span) {
            p.add_scaled(&e.provenance, k);
        }
        provenance.push(p);
    }
    Ok(LatticeWeight { coords: coords.clone(), basis, provenance })
}

/// The image `h(L) ⊂ ℤ[b]` weight by weight, up to the model's bound.
#[derive(Clone, Debug)]
pub struct LazardLattice {
    pub model: Arc<FglModel>,
    pub weights: BTreeMap<u32, LatticeWeight>,
}

impl LazardLattice {
    pub fn new(n: u32) -> Result<Self> {
        let model = FglModel::get(n)?;
        let mut weights: BTreeMap<u32, LatticeWeight> = BTreeMap::new();
        for w in 1..=n {
            let coords = WeightCoordinates::new(w);
            let mut span = Vec::new();
            for i in 1..=(w + 1) / 2 {
                span.push(LazardElement::c(i, w + 1 - i, &model)?);
            }
            for k in 1..=w / 2 {
                let (lo, hi) = (&weights[&k], &weights[&(w - k)]);
                for a in 0..lo.basis.len() {
                    for b in 0..hi.basis.len() {
                        span.push(lo.element(a).mul(&hi.element(b)));
                    }
                }
            }
            let lw = reduce_span(&coords, &span)?;
            if lw.basis.len() != coords.len() {
                return Err(Error::Infeasible(w));
            }
            weights.insert(w, lw);
        }
        Ok(LazardLattice { model, weights })
    }

    pub fn weight(&self, n: u32) -> Result<&LatticeWeight> {
        self.weights
            .get(&n)
            .ok_or(Error::BeyondTruncation { what: format!("weight {n}"), bound: self.model.max_weight() })
    }

    /// Re-expresses a `ℤ[b]` polynomial as a Lazard element, recovering its
    /// `c`-provenance.
    pub fn lift(&self, weight: u32, image: &GradedPoly) -> Result<LazardElement> {
        if weight == 0 {
            let c = image.as_constant().ok_or_else(|| Error::WrongWeight { got: 0, expected: "0".into() })?;
            return Ok(LazardElement {
                weight: 0,
                image: image.clone(),
                provenance: GradedPoly::constant(c_table(), &CoeffRing::Integers, c),
            });
        }
        let prov = self
            .weight(weight)?
            .solve(image)?
            .ok_or_else(|| Error::Inadequate(format!("{image} is not in the image of L")))?;
        Ok(LazardElement { weight, image: image.clone(), provenance: prov })
    }
}

/// Coefficient of `x^{ℓ^r}` in the `ℓ`-series, with `c`-provenance.
pub fn canonical_typical(ell: u32, r: u32, lattice: &LazardLattice) -> Result<LazardElement> {
    let deg = (ell as u64).pow(r);
    let n = lattice.model.max_weight();
    if deg - 1 > n as u64 {
        return Err(Error::BeyondTruncation { what: format!("x^{deg}"), bound: n });
    }
    let image = lattice.model.ell_series(ell)?.coefficient(deg as u32)?;
    lattice.lift(deg as u32 - 1, &image)
}

/// Outcome of the two-part typicality test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypicalityReport {
    pub ell: u32,
    pub weight: u32,
    pub vanishes_mod_ell: bool,
    /// Linear coefficient of the image reduced mod `ℓ²`.
    pub linear_mod_ell_sq: String,
    pub typical: bool,
}

/// The typicality test for `v ∈ L_{ℓ^r − 1}`. In weight 0 the constant
/// itself plays the part of the indecomposable coefficient.
pub fn is_ell_typical(v: &LazardElement, ell: u32) -> Result<TypicalityReport> {
    let n = v.weight as u64;
    let r_ok = n == 0 || prime_power(n + 1).is_some_and(|(p, _)| p == ell as u64);
    if !r_ok {
        return Err(Error::WrongWeight { got: v.weight, expected: format!("{ell}^r - 1") });
    }
    let m1 = CoeffRing::mod_u64(ell as u64);
    let m2 = CoeffRing::mod_u64((ell as u64).pow(2));
    let vanishes = v.image.with_ring(&m1).is_zero();
    let lin = if n == 0 { v.image.constant_term() } else { lazard_index_coefficient(v) };
    let lin = m2.reduce(lin);
    Ok(TypicalityReport {
        ell,
        weight: v.weight,
        vanishes_mod_ell: vanishes,
        linear_mod_ell_sq: lin.to_string(),
        typical: vanishes && !lin.is_zero(),
    })
}

/// Coefficient of `b_n` in the image of a weight-`n` element.
pub fn lazard_index_coefficient(v: &LazardElement) -> BigInt {
    if v.weight == 0 {
        return BigInt::zero();
    }
    let idx = b_table().lookup(&format!("b{}", v.weight)).expect("b generator");
    v.image.linear_part().coefficient(&Monomial::var(idx))
}

/// The Lazard rule: the index coefficient generates `(I/I²)_n` iff it is
/// `±ℓ` when `n + 1 = ℓ^r` and `±1` otherwise.
pub fn index_rule_holds(n: u32, coeff: &BigInt) -> bool {
    let expected = prime_power(n as u64 + 1).map_or(1, |(p, _)| p);
    coeff.abs() == BigInt::from(expected)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=8).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22]);
        assert_eq!(partitions(3)[0], vec![3]);
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }
}
