use std::collections::{BTreeMap, HashMap};

use crate::algebra::linalg::{rank_mod, residue};
use crate::algebra::GradedPoly;
use crate::error::{Error, Result};
use crate::steenrod::MilnorMonomial;

use super::algebra::OperationAlgebra;
use super::element::OperationElement;

/// `Σ a · P^{R'} Q(E')`, keyed by `(R', E')` as Milnor monomials with
/// empty `τ` and `ξ` parts respectively.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LeftIdealExpansion {
    terms: BTreeMap<(MilnorMonomial, MilnorMonomial), GradedPoly>,
}

impl LeftIdealExpansion {
    pub fn terms(&self) -> impl Iterator<Item = (&(MilnorMonomial, MilnorMonomial), &GradedPoly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, key: (MilnorMonomial, MilnorMonomial), a: GradedPoly) {
        if a.is_zero() {
            return;
        }
        let s = match self.terms.remove(&key) {
            Some(cur) => &cur + &a,
            None => a,
        };
        if !s.is_zero() {
            self.terms.insert(key, s);
        }
    }

    /// Multiplies the products back out.
    pub fn evaluate(&self, alg: &OperationAlgebra) -> Result<OperationElement> {
        let mut out = OperationElement::zero();
        for ((r, e), a) in &self.terms {
            let prod = alg.basis_product(r, e)?;
            out.add_scaled(&prod, a);
        }
        Ok(out)
    }
}

impl std::fmt::Display for LeftIdealExpansion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        crate::steenrod::element::write_terms(
            f,
            self.terms.iter().map(|((r, e), a)| {
                let p = if r.is_one() { String::new() } else { format!("{}*", r.op_string()) };
                (format!("{p}{}", e.op_string()), a)
            }),
        )
    }
}

/// `P^R Q(E)` in the `ρ`-basis, after checking that it is `ρ(E, R)` plus
/// terms `ρ(E', R')` with `E' ≠ ∅` and `R' ⊊ R`.
pub fn triangular_product(alg: &OperationAlgebra, target: &MilnorMonomial) -> Result<OperationElement> {
    let r = target.xi_part();
    let e = target.tau_part();
    let prod = alg.basis_product(&r, &e)?;
    for (m, a) in prod.terms() {
        if m == target {
            if a.as_constant().map_or(true, |c| alg.context().ring().reduce(c) != 1.into()) {
                return Err(Error::NotTriangular(format!("coefficient {a} on {}", target.op_string())));
            }
        } else if m.e == 0 || !m.r_subset(target) || m.r == target.r {
            return Err(Error::NotTriangular(format!("term {} in {}*{}", m.op_string(), r.op_string(), e.op_string())));
        }
    }
    if prod.coefficient(target).is_none() {
        return Err(Error::NotTriangular(format!("{} missing", target.op_string())));
    }
    Ok(prod)
}

/// Writes `ρ(E, R)` (`E ≠ ∅`) as an `A`-combination of products
/// `P^{R'} Q(E')`, by induction on `R` under termwise inclusion.
pub fn leftideal_expand(alg: &OperationAlgebra, target: &MilnorMonomial) -> Result<LeftIdealExpansion> {
    if target.e == 0 {
        return Err(Error::NotTriangular(format!("{} has E = ∅", target.op_string())));
    }
    let mut memo = HashMap::new();
    expand(alg, target, &mut memo)
}

fn expand(
    alg: &OperationAlgebra,
    target: &MilnorMonomial,
    memo: &mut HashMap<MilnorMonomial, LeftIdealExpansion>,
) -> Result<LeftIdealExpansion> {
    if let Some(e) = memo.get(target) {
        return Ok(e.clone());
    }
    let prod = triangular_product(alg, target)?;
    let mut out = LeftIdealExpansion::default();
    out.add_term((target.xi_part(), target.tau_part()), alg.context().a_one());
    for (m, a) in prod.terms() {
        if m == target {
            continue;
        }
        let sub = expand(alg, m, memo)?;
        for (key, c) in sub.terms() {
            out.add_term(key.clone(), (a * c).neg());
        }
    }
    memo.insert(target.clone(), out.clone());
    Ok(out)
}

/// Free rank in bidegree `(p, q)` of `𝒜/𝒜(Q_i : i ∈ ic)`: the products
/// `ρ(n)Q_i` landing in `(p, q)` are reduced mod `(ρ, τ)` and row-reduced
/// over `ℤ/ℓ`.
pub fn quotient_rank(alg: &OperationAlgebra, ic: &[u32], p: i64, q: i64) -> Result<usize> {
    let ctx = alg.context();
    let target = ctx.basis_by_bidegree(p, q)?;
    let col: HashMap<&MilnorMonomial, usize> = target.iter().enumerate().map(|(k, m)| (m, k)).collect();
    let ell = ctx.ell() as u64;
    let mut rows = Vec::new();
    for &i in ic {
        let qi = MilnorMonomial::tau(i);
        let d = ctx.bidegree(&qi);
        if d.p > p {
            continue;
        }
        for n in ctx.basis_by_bidegree(p - d.p, q - d.q)? {
            let prod = alg.basis_product(&n, &qi)?;
            let mut row = vec![0u64; target.len()];
            for (m, a) in prod.terms() {
                if let (Some(&k), Some(c)) = (col.get(m), a.as_constant()) {
                    row[k] = residue(&c, ell);
                }
            }
            rows.push(row);
        }
    }
    Ok(target.len() - rank_mod(&rows, target.len(), ell))
}

/// The indices `i` with `τ_i` of first degree at most `max_p`.
pub fn all_q_indices(alg: &OperationAlgebra, max_p: i64) -> Vec<u32> {
    (0..40).take_while(|&i| alg.context().bidegree(&MilnorMonomial::tau(i)).p <= max_p).collect()
}
