use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::algebra::linalg::{residue, ModReduction};
use crate::algebra::GradedPoly;
use crate::error::{Error, Result};
use crate::lazard::{hl_basis_mod_ell, is_ell_power_minus_one, partitions, GeneratorSet, Retraction, WeightCoordinates};
use crate::steenrod::MilnorMonomial;

use super::coaction::{b_monomials, xi_sequences, MglComodule};

/// Monomial basis of `h(L)_n ⊗ ℤ/ℓ` with labels, and the coordinate solver.
struct HlWeight {
    labels: Vec<String>,
    coords: WeightCoordinates,
    reduction: ModReduction,
}

fn hl_labels(ell: u32, n: u32, skip: &BTreeSet<u32>) -> Vec<(Vec<u32>, String)> {
    partitions(n)
        .into_iter()
        .filter(|parts| parts.iter().all(|&k| !is_ell_power_minus_one(ell, k) && !skip.contains(&k)))
        .map(|parts| {
            let label = if parts.is_empty() {
                "1".to_string()
            } else {
                parts.iter().map(|k| format!("b'{k}")).collect::<Vec<_>>().join("*")
            };
            (parts, label)
        })
        .collect()
}

impl HlWeight {
    fn new(ell: u32, gens: &GeneratorSet, n: u32) -> Result<Self> {
        let basis = hl_basis_mod_ell(ell, gens, n)?;
        let coords = WeightCoordinates::new(n);
        let rows: Vec<Vec<u64>> = basis
            .iter()
            .map(|p| Ok(coords.vector(&p.with_ring(&crate::algebra::CoeffRing::Integers))?.iter().map(|c| residue(c, ell as u64)).collect()))
            .collect::<Result<_>>()?;
        let reduction = ModReduction::new(&rows, coords.len(), ell as u64);
        if reduction.rank() != basis.len() {
            return Err(Error::Singular(n));
        }
        let labels = hl_labels(ell, n, &BTreeSet::new()).into_iter().map(|(_, l)| l).collect();
        Ok(HlWeight { labels, coords, reduction })
    }

    fn solve(&self, p: &GradedPoly, ell: u32) -> Result<Vec<u64>> {
        let v: Vec<u64> = self
            .coords
            .vector(&p.with_ring(&crate::algebra::CoeffRing::Integers))?
            .iter()
            .map(|c| residue(c, ell as u64))
            .collect();
        self.reduction.solve(&v).ok_or_else(|| Error::Inadequate(format!("{p} is not in h(L)")))
    }
}

/// The matrix of `g̃ = (id ⊗ π)Δ` in one weight.
#[derive(Clone, Debug, Serialize)]
pub struct GTildeMatrix {
    pub ell: u32,
    pub weight: u32,
    /// Monomials `b_λ` of the weight.
    pub source: Vec<String>,
    /// `ξ(R) ⊗ b′_μ` with `|R| + |μ|` equal to the weight.
    pub target: Vec<String>,
    /// One row per source monomial, entries in `[0, ℓ)`.
    pub matrix: Vec<Vec<u64>>,
    pub invertible: bool,
    /// `f̃(ξ_r) = g̃⁻¹(ξ_r ⊗ 1)` when the weight is `ℓ^r − 1`.
    pub f_tilde: Option<String>,
}

impl GTildeMatrix {
    pub fn to_csv(&self) -> String {
        let mut out = format!("source,{}\n", self.target.join(","));
        for (s, row) in self.source.iter().zip(&self.matrix) {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("{s},{}\n", cells.join(",")));
        }
        out
    }
}

/// Builds the `g̃` matrix in weight `w` and inverts it over `ℤ/ℓ`.
pub fn g_tilde_matrix(ell: u32, gens: &GeneratorSet, w: u32) -> Result<GTildeMatrix> {
    if w > gens.max_weight {
        return Err(Error::Inadequate(format!("generators only reach weight {}", gens.max_weight)));
    }
    for entry in gens.certificate.values() {
        if !entry.passes() {
            return Err(Error::Inadequate(format!("weight {} fails its certificate", entry.weight)));
        }
    }
    let comodule = MglComodule::new(ell, w);
    let pi = Retraction::new(ell, gens)?;
    let hl: Vec<HlWeight> = (0..=w).map(|k| HlWeight::new(ell, gens, k)).collect::<Result<_>>()?;

    let mut target = Vec::new();
    let mut column: BTreeMap<(MilnorMonomial, usize), usize> = BTreeMap::new();
    for k in 0..=w {
        for r in xi_sequences(ell, w - k) {
            let xr = MilnorMonomial::new(0, r);
            for (i, label) in hl[k as usize].labels.iter().enumerate() {
                column.insert((xr.clone(), i), target.len());
                target.push(format!("{}⊗{label}", xr.gamma_string()));
            }
        }
    }

    let sources = b_monomials(w);
    let mut matrix = Vec::new();
    for m in &sources {
        let mut row = vec![0u64; target.len()];
        for (r, u) in comodule.coaction_monomial(m)?.terms() {
            let image = pi.apply(u)?;
            let k = super::coaction::xi_weight(ell, &r.r);
            for (i, c) in hl[(w - k) as usize].solve(&image, ell)?.into_iter().enumerate() {
                if c != 0 {
                    row[column[&(r.clone(), i)]] = c;
                }
            }
        }
        matrix.push(row);
    }

    let red = ModReduction::new(&matrix, target.len(), ell as u64);
    let invertible = sources.len() == target.len() && red.rank() == sources.len();
    if !invertible {
        return Err(Error::Singular(w));
    }
    let f_tilde = (1..)
        .map(|r| (r, ell.pow(r) - 1))
        .take_while(|&(_, n)| n <= w)
        .find(|&(_, n)| n == w)
        .map(|(r, _)| {
            let key = (MilnorMonomial::xi_pow(r, 1), 0);
            let mut e = vec![0u64; target.len()];
            e[column[&key]] = 1;
            let x = red.solve(&e).expect("invertible");
            let mut p = GradedPoly::zero(crate::lazard::b_table(), &comodule.ring());
            for (m, c) in sources.iter().zip(x) {
                p = &p + &comodule.monomial(m).scale(c);
            }
            p.to_string()
        });

    Ok(GTildeMatrix {
        ell,
        weight: w,
        source: sources.iter().map(|m| comodule.monomial(m).to_string()).collect(),
        target,
        matrix,
        invertible,
        f_tilde,
    })
}

/// Basis of `𝒫_{**} ⊗ h(L)/h(x)` in weight `w`, where `x` lists generator
/// weights of `gens`.
#[derive(Clone, Debug, Serialize)]
pub struct QuotientBasis {
    pub ell: u32,
    pub weight: u32,
    pub quotient_by: Vec<u32>,
    pub basis: Vec<String>,
    pub rank: usize,
}

pub fn quotient_homology_basis(ell: u32, gens: &GeneratorSet, x: &[u32], w: u32) -> Result<QuotientBasis> {
    for &n in x {
        if n == 0 || !gens.elements.contains_key(&n) {
            return Err(Error::NotSubsequence(format!("a_{n}")));
        }
    }
    if w > gens.max_weight {
        return Err(Error::BeyondTruncation { what: format!("weight {w}"), bound: gens.max_weight });
    }
    let skip: BTreeSet<u32> = x.iter().copied().collect();
    let mut basis = Vec::new();
    for k in 0..=w {
        for r in xi_sequences(ell, w - k) {
            let xr = MilnorMonomial::new(0, r);
            for (_, label) in hl_labels(ell, k, &skip) {
                basis.push(if label == "1" { xr.gamma_string() } else { format!("{}⊗{label}", xr.gamma_string()) });
            }
        }
    }
    Ok(QuotientBasis { ell, weight: w, quotient_by: x.to_vec(), rank: basis.len(), basis })
}
