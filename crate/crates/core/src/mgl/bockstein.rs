use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::linalg::{rank_mod, residue};
use crate::error::Result;
use crate::steenrod::{GammaElement, MilnorMonomial, SteenrodContext};

use super::coaction::{b_monomials, xi_weight, MglComodule};

/// `c_{Q_0}(x) = (⟨Q_0, −⟩ ⊗ id)Δ(x)` on a Milnor monomial.
pub fn q0_contraction(ctx: &SteenrodContext, m: &MilnorMonomial) -> GammaElement {
    let t0 = MilnorMonomial::tau(0);
    let mut out = GammaElement::zero();
    for ((x, y), c) in ctx.delta_monomial(m).terms() {
        if *x == t0 {
            out.add_term(y.clone(), c.clone());
        }
    }
    out
}

/// The monomials with `ε_0 = 0` in one bidegree, and whether they span the
/// kernel of `c_{Q_0}` there.
#[derive(Clone, Debug, Serialize)]
pub struct KerBocksteinReport {
    pub bidegree: (i64, i64),
    pub basis: Vec<String>,
    /// `c_{Q_0}` vanishes on every listed monomial.
    pub annihilated: bool,
    /// The images of the `ε_0 = 1` monomials are independent modulo `(ρ, τ)`.
    pub complement_independent: bool,
}

impl KerBocksteinReport {
    pub fn verified(&self) -> bool {
        self.annihilated && self.complement_independent
    }
}

pub fn ker_bockstein_basis(ctx: &SteenrodContext, p: i64, q: i64) -> Result<KerBocksteinReport> {
    let monos = ctx.basis_by_bidegree(p, q)?;
    let (kernel, rest): (Vec<_>, Vec<_>) = monos.into_iter().partition(|m| !m.has_tau(0));
    let annihilated = kernel.iter().all(|m| q0_contraction(ctx, m).is_zero());
    let images: Vec<GammaElement> = rest.iter().map(|m| q0_contraction(ctx, m)).collect();
    let mut cols: BTreeMap<MilnorMonomial, usize> = BTreeMap::new();
    for g in &images {
        for (m, _) in g.terms() {
            let n = cols.len();
            cols.entry(m.clone()).or_insert(n);
        }
    }
    let ell = ctx.ell() as u64;
    let rows: Vec<Vec<u64>> = images
        .iter()
        .map(|g| {
            let mut row = vec![0u64; cols.len()];
            for (m, c) in g.terms() {
                if let Some(k) = c.as_constant() {
                    row[cols[m]] = residue(&k, ell);
                }
            }
            row
        })
        .collect();
    let complement_independent = rank_mod(&rows, cols.len(), ell) == rest.len();
    Ok(KerBocksteinReport {
        bidegree: (p, q),
        basis: kernel.iter().map(|m| m.gamma_string()).collect(),
        annihilated,
        complement_independent,
    })
}

/// Coefficient of `ξ(R) ⊗ 1` in `Δ(m)` for each monomial `m` of weight `|R|`.
#[derive(Clone, Debug, Serialize)]
pub struct PrTauReport {
    pub r: Vec<u32>,
    /// Monomials with a nonzero coefficient, with that coefficient.
    pub pairings: Vec<(String, u64)>,
    pub expected: String,
    pub holds: bool,
}

/// `P^R(ϑ)` is dual to `∏ b_{ℓ^i − 1}^{r_i}`.
pub fn pr_tau_duality_check(comodule: &MglComodule, r: &[u32]) -> Result<PrTauReport> {
    let ell = comodule.ell();
    let w = xi_weight(ell, r);
    let xr = MilnorMonomial::new(0, r.to_vec());
    let mut expected = comodule.b(0);
    for (k, &v) in r.iter().enumerate() {
        expected = &expected * &comodule.b(ell.pow(k as u32 + 1) - 1).pow(v);
    }
    let mut pairings = Vec::new();
    let mut hit = None;
    for m in b_monomials(w) {
        let d = comodule.coaction_monomial(&m)?;
        let c = d.coefficient(&xr).map(|u| u.constant_term()).unwrap_or_default();
        let c = residue(&c, ell as u64);
        if c != 0 {
            let poly = comodule.monomial(&m);
            if poly == expected && c == 1 {
                hit = Some(());
            }
            pairings.push((poly.to_string(), c));
        }
    }
    Ok(PrTauReport { r: r.to_vec(), holds: pairings.len() == 1 && hit.is_some(), pairings, expected: expected.to_string() })
}
