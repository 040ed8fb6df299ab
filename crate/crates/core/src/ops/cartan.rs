use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::GradedPoly;
use crate::steenrod::element::write_terms;
use crate::steenrod::{Mode, MilnorMonomial};

use super::algebra::OperationAlgebra;

/// `Σ a · ρ(m) ⊗ ρ(m')`, coefficients on the left.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OperationTensor {
    terms: BTreeMap<(MilnorMonomial, MilnorMonomial), GradedPoly>,
}

impl OperationTensor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(MilnorMonomial, MilnorMonomial), &GradedPoly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, left: &MilnorMonomial, right: &MilnorMonomial) -> Option<&GradedPoly> {
        self.terms.get(&(left.clone(), right.clone()))
    }

    pub fn add_term(&mut self, left: MilnorMonomial, right: MilnorMonomial, a: GradedPoly) {
        if a.is_zero() {
            return;
        }
        let key = (left, right);
        let s = match self.terms.remove(&key) {
            Some(cur) => &cur + &a,
            None => a,
        };
        if !s.is_zero() {
            self.terms.insert(key, s);
        }
    }

    pub fn sub(&self, other: &OperationTensor) -> OperationTensor {
        let mut out = self.clone();
        for ((l, r), a) in &other.terms {
            out.add_term(l.clone(), r.clone(), a.neg());
        }
        out
    }

    /// Drops every term whose coefficient lies in the ideal `(ρ)`.
    pub fn modulo_rho(&self, alg: &OperationAlgebra) -> OperationTensor {
        let ctx = alg.context();
        let rho = ctx.a_table().lookup("rho").ok();
        let mut out = OperationTensor::zero();
        for ((l, r), a) in &self.terms {
            let mut c = ctx.a_zero();
            for (m, k) in a.terms() {
                if rho.map_or(true, |i| m.exponent(i) == 0) {
                    let mono = GradedPoly::normal_order_indices(ctx.a_table(), ctx.ring(), m.pairs(), k.clone())
                        .expect("A monomial");
                    c = &c + &mono;
                }
            }
            out.add_term(l.clone(), r.clone(), c);
        }
        out
    }
}

impl std::fmt::Display for OperationTensor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write_terms(f, self.terms.iter().map(|((l, r), a)| (format!("{}⊗{}", l.op_string(), r.op_string()), a)))
    }
}

/// `Δρ(k)`, read off from `⟨Δφ, m ⊗ m'⟩ = ⟨φ, m·m'⟩`.
pub fn transposed_coproduct(alg: &OperationAlgebra, k: &MilnorMonomial) -> OperationTensor {
    let ctx = alg.context();
    let top = ctx.bidegree(k).p;
    let basis = ctx.basis_up_to(top);
    let mut out = OperationTensor::zero();
    for m in &basis {
        let pm = ctx.bidegree(m).p;
        for n in &basis {
            if pm + ctx.bidegree(n).p > top {
                continue;
            }
            if let Some(c) = ctx.monomial_product(m, n).coefficient(k) {
                out.add_term(m.clone(), n.clone(), c);
            }
        }
    }
    out
}

/// The closed Cartan formula for `Δ(P^R)`: the sum over `E` with
/// `ε_{i−1} ≤ r_i` and `R_1 + R_2 = R − E` of
/// `τ^{|E|} Q(E)P^{R_1} ⊗ Q(E)P^{R_2}`.
pub fn cartan_p_formula(alg: &OperationAlgebra, r: &[u32]) -> OperationTensor {
    let ctx = alg.context();
    let mut out = OperationTensor::zero();
    let slots: Vec<u32> = (0..r.len() as u32).filter(|&i| r[i as usize] > 0).collect();
    for mask in 0u64..(1 << slots.len()) {
        let taus: Vec<u32> = slots.iter().enumerate().filter(|(b, _)| mask & (1 << b) != 0).map(|(_, &i)| i).collect();
        let coeff = ctx.tau().pow(taus.len() as u32);
        if taus.len() > 0 && coeff.is_zero() {
            continue;
        }
        let mut rest = r.to_vec();
        for &i in &taus {
            rest[i as usize] -= 1;
        }
        for r1 in sub_sequences(&rest) {
            let r2: Vec<u32> = rest.iter().zip(&r1).map(|(a, b)| a - b).collect();
            out.add_term(
                MilnorMonomial::from_parts(&taus, &r1),
                MilnorMonomial::from_parts(&taus, &r2),
                coeff.clone(),
            );
        }
    }
    out
}

/// The closed formula for `Δ(Q_i)`.
pub fn cartan_q_formula(alg: &OperationAlgebra, i: u32) -> OperationTensor {
    let ctx = alg.context();
    let mut out = OperationTensor::zero();
    let one = MilnorMonomial::one();
    let qi = MilnorMonomial::tau(i);
    out.add_term(qi.clone(), one.clone(), ctx.a_one());
    out.add_term(one, qi, ctx.a_one());
    for j in 1..=i {
        let coeff = ctx.rho().pow(j);
        if coeff.is_zero() {
            continue;
        }
        let range: Vec<u32> = (i - j + 1..i).collect();
        for mask in 0u64..(1 << range.len()) {
            let mut e1 = vec![i - j];
            let mut e2 = vec![i - j];
            for (b, &t) in range.iter().enumerate() {
                if mask & (1 << b) != 0 {
                    e1.push(t);
                } else {
                    e2.push(t);
                }
            }
            out.add_term(MilnorMonomial::from_parts(&e1, &[]), MilnorMonomial::from_parts(&e2, &[]), coeff.clone());
        }
    }
    out
}

fn sub_sequences(r: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &v in r {
        out = out.into_iter().flat_map(|p| (0..=v).map(move |k| [p.clone(), vec![k]].concat())).collect();
    }
    out
}

/// One operation compared in [`cartan_check`].
#[derive(Clone, Debug, Serialize)]
pub struct CartanEntry {
    pub operation: String,
    pub terms: usize,
    pub matches: bool,
    /// Agreement after discarding `ρ`-divisible coefficients.
    pub matches_mod_rho: bool,
    /// `computed − formula`, empty when they agree.
    pub difference: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CartanReport {
    pub ell: u32,
    pub mode: Mode,
    pub max_p: i64,
    pub entries: Vec<CartanEntry>,
}

impl CartanReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.matches)
    }

    pub fn entry(&self, operation: &str) -> Option<&CartanEntry> {
        self.entries.iter().find(|e| e.operation == operation)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &CartanEntry> {
        self.entries.iter().filter(|e| !e.matches)
    }
}

/// Compares the transposed coproduct of every `P^R` and `Q_i` with first
/// degree at most `max_p` against the closed formulas.
pub fn cartan_check(alg: &OperationAlgebra, max_p: i64) -> CartanReport {
    let ctx = alg.context();
    let mut entries = Vec::new();
    for m in ctx.basis_up_to(max_p) {
        let formula = if m.is_pure_xi() {
            cartan_p_formula(alg, &m.r)
        } else if m.tau_count() == 1 && m.r.is_empty() {
            cartan_q_formula(alg, m.taus().next().expect("tau"))
        } else {
            continue;
        };
        let computed = transposed_coproduct(alg, &m);
        let diff = computed.sub(&formula);
        entries.push(CartanEntry {
            operation: m.op_string(),
            terms: computed.len(),
            matches: diff.is_zero(),
            matches_mod_rho: diff.modulo_rho(alg).is_zero(),
            difference: if diff.is_zero() { String::new() } else { diff.to_string() },
        });
    }
    CartanReport { ell: ctx.ell(), mode: ctx.mode(), max_p, entries }
}
