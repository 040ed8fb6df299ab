use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::fgl::{b_name, b_table, c_table};
use super::lattice::{
    index_rule_holds, is_ell_typical, lazard_index_coefficient, partitions, prime_power, reduce_span,
    LazardElement, LazardLattice, TypicalityReport,
};
use crate::algebra::linalg::{hnf, residue, try_inv_mod, ModReduction};
use crate::algebra::{CoeffRing, GradedPoly, Monomial, TermRecord};
use crate::error::{Error, Result};

/// Per-weight record certifying a generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub weight: u32,
    pub index_coefficient: String,
    pub index_ok: bool,
    /// Present when `weight + 1` is a prime power.
    pub typicality: Option<TypicalityReport>,
    /// Monomials in the generators span the whole weight lattice of `h(L)`.
    pub generates: bool,
}

impl CertificateEntry {
    pub fn passes(&self) -> bool {
        self.index_ok && self.generates && self.typicality.as_ref().map_or(true, |t| t.typical)
    }
}

/// Polynomial generators `a_1, …, a_N` of the Lazard ring with certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    pub max_weight: u32,
    pub elements: BTreeMap<u32, LazardElement>,
    pub certificate: BTreeMap<u32, CertificateEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct GeneratorDoc {
    weight: u32,
    provenance: Vec<TermRecord>,
    image: Vec<TermRecord>,
    index_coefficient: String,
    typicality: Option<TypicalityReport>,
    generates: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct GeneratorSetDoc {
    max_weight: u32,
    generators: Vec<GeneratorDoc>,
}

/// Element of `Λ_n ∩ ℓ·ℤ^p` with the smallest positive linear coefficient.
fn typical_candidate(lattice: &LazardLattice, n: u32, ell: u64) -> Result<LazardElement> {
    let lw = lattice.weight(n)?;
    let rows: Vec<Vec<u64>> = lw.basis.iter().map(|r| r.iter().map(|c| residue(c, ell)).collect()).collect();
    let red = ModReduction::new(&rows, lw.coords.len(), ell);
    let mut span = Vec::new();
    for k in red.left_kernel() {
        let mut e: Option<LazardElement> = None;
        for (i, &x) in k.iter().enumerate() {
            if x != 0 {
                let t = lw.element(i).scale(&BigInt::from(x));
                e = Some(match e {
                    None => t,
                    Some(acc) => acc.add(&t),
                });
            }
        }
        span.extend(e);
    }
    for i in 0..lw.basis.len() {
        span.push(lw.element(i).scale(&BigInt::from(ell)));
    }
    let sub = reduce_span(&lw.coords, &span)?;
    Ok(sub.element(0))
}

fn generates(lattice: &LazardLattice, elements: &BTreeMap<u32, LazardElement>, n: u32) -> Result<bool> {
    let lw = lattice.weight(n)?;
    let mut rows = Vec::new();
    for parts in partitions(n) {
        let mut img = GradedPoly::one(b_table(), &CoeffRing::Integers);
        for k in parts {
            let a = elements.get(&k).ok_or(Error::Inadequate(format!("missing a_{k}")))?;
            img = &img * &a.image;
        }
        rows.push(lw.coords.vector(&img)?);
    }
    let f = hnf(&rows, lw.coords.len());
    Ok(f.rank() == lw.basis.len() && f.basis() == lw.basis.as_slice())
}

fn certify(lattice: &LazardLattice, elements: &BTreeMap<u32, LazardElement>, n: u32) -> Result<CertificateEntry> {
    let a = &elements[&n];
    let idx = lazard_index_coefficient(a);
    let typicality = match prime_power(n as u64 + 1) {
        Some((p, _)) => Some(is_ell_typical(a, p as u32)?),
        None => None,
    };
    Ok(CertificateEntry {
        weight: n,
        index_ok: index_rule_holds(n, &idx),
        index_coefficient: idx.to_string(),
        typicality,
        generates: generates(lattice, elements, n)?,
    })
}

/// Searches for an adequate set of generators through weight `n` by integer
/// lattice reduction on `h(L)`.
pub fn find_adequate_generators(n: u32) -> Result<GeneratorSet> {
    if n == 0 {
        return Err(Error::InvalidContext("weight bound must be at least 1".into()));
    }
    let lattice = LazardLattice::new(n)?;
    let mut elements = BTreeMap::new();
    let mut certificate = BTreeMap::new();
    for w in 1..=n {
        let a = match prime_power(w as u64 + 1) {
            None => lattice.weight(w)?.element(0),
            Some((ell, _)) => typical_candidate(&lattice, w, ell)?,
        };
        elements.insert(w, a);
        let cert = certify(&lattice, &elements, w)?;
        if !cert.passes() {
            return Err(Error::Infeasible(w));
        }
        certificate.insert(w, cert);
    }
    Ok(GeneratorSet { max_weight: n, elements, certificate })
}

impl GeneratorSet {
    pub fn get(&self, n: u32) -> Result<&LazardElement> {
        self.elements
            .get(&n)
            .ok_or(Error::BeyondTruncation { what: format!("a_{n}"), bound: self.max_weight })
    }

    /// Recomputes images and certificate from the provenance polynomials
    /// alone and compares them with the stored ones.
    pub fn revalidate(&self) -> Result<()> {
        let lattice = LazardLattice::new(self.max_weight)?;
        let mut rebuilt = BTreeMap::new();
        for (&w, a) in &self.elements {
            let e = LazardElement::from_provenance(w, a.provenance.clone(), &lattice.model)?;
            if e.image != a.image {
                return Err(Error::Inadequate(format!("a_{w}: provenance does not reproduce the image")));
            }
            rebuilt.insert(w, e);
        }
        for w in 1..=self.max_weight {
            if !rebuilt.contains_key(&w) {
                return Err(Error::Inadequate(format!("missing a_{w}")));
            }
            let cert = certify(&lattice, &rebuilt, w)?;
            if Some(&cert) != self.certificate.get(&w) {
                return Err(Error::Inadequate(format!("certificate mismatch in weight {w}")));
            }
            if !cert.passes() {
                return Err(Error::Inadequate(format!("a_{w} fails its certificate")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = GeneratorSetDoc {
            max_weight: self.max_weight,
            generators: self
                .elements
                .iter()
                .map(|(&w, a)| {
                    let c = &self.certificate[&w];
                    GeneratorDoc {
                        weight: w,
                        provenance: a.provenance.to_records(),
                        image: a.image.to_records(),
                        index_coefficient: c.index_coefficient.clone(),
                        typicality: c.typicality.clone(),
                        generates: c.generates,
                    }
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).map_err(|e| Error::Serde(e.to_string()))
    }

    /// Reads a serialized set and re-validates it from provenance.
    pub fn from_json(s: &str) -> Result<GeneratorSet> {
        let doc: GeneratorSetDoc = serde_json::from_str(s).map_err(|e| Error::Serde(e.to_string()))?;
        let z = CoeffRing::Integers;
        let mut elements = BTreeMap::new();
        let mut certificate = BTreeMap::new();
        for g in doc.generators {
            let provenance = GradedPoly::from_records(c_table(), &z, &g.provenance)?;
            let image = GradedPoly::from_records(b_table(), &z, &g.image)?;
            let idx: BigInt = g
                .index_coefficient
                .parse()
                .map_err(|_| Error::Serde(format!("bad index coefficient {}", g.index_coefficient)))?;
            certificate.insert(
                g.weight,
                CertificateEntry {
                    weight: g.weight,
                    index_ok: index_rule_holds(g.weight, &idx),
                    index_coefficient: g.index_coefficient,
                    typicality: g.typicality,
                    generates: g.generates,
                },
            );
            elements.insert(g.weight, LazardElement { weight: g.weight, image, provenance });
        }
        let set = GeneratorSet { max_weight: doc.max_weight, elements, certificate };
        set.revalidate()?;
        Ok(set)
    }

    /// `b′_n`: the mod-`ℓ` image of `a_n`, scaled to have linear coefficient 1.
    /// `None` when `n = ℓ^r − 1`.
    pub fn b_prime(&self, ell: u32, n: u32) -> Result<Option<GradedPoly>> {
        if is_ell_power_minus_one(ell, n) {
            return Ok(None);
        }
        let a = self.get(n)?;
        let lin = lazard_index_coefficient(a);
        let inv = try_inv_mod(residue(&lin, ell as u64), ell as u64)
            .ok_or_else(|| Error::Inadequate(format!("a_{n} has linear coefficient {lin} divisible by {ell}")))?;
        Ok(Some(a.image.with_ring(&CoeffRing::mod_u64(ell as u64)).scale(inv)))
    }
}

/// Whether `n = ℓ^r − 1` for some `r ≥ 0`.
pub fn is_ell_power_minus_one(ell: u32, n: u32) -> bool {
    let mut q = 1u64;
    while q < n as u64 + 1 {
        q *= ell as u64;
    }
    q == n as u64 + 1
}

/// Monomial basis of `h(L)_n ⊗ ℤ/ℓ` in the variables `b′_k`, `k ≠ ℓ^r − 1`.
pub fn hl_basis_mod_ell(ell: u32, gens: &GeneratorSet, n: u32) -> Result<Vec<GradedPoly>> {
    let ring = CoeffRing::mod_u64(ell as u64);
    if n > gens.max_weight {
        return Err(Error::BeyondTruncation { what: format!("weight {n}"), bound: gens.max_weight });
    }
    let mut bp = BTreeMap::new();
    for k in 1..=n {
        if let Some(p) = gens.b_prime(ell, k)? {
            bp.insert(k, p);
        }
    }
    let mut out = Vec::new();
    for parts in partitions(n) {
        if parts.iter().any(|&k| is_ell_power_minus_one(ell, k)) {
            continue;
        }
        let mut m = GradedPoly::one(b_table(), &ring);
        for k in parts {
            m = &m * &bp[&k];
        }
        out.push(m);
    }
    Ok(out)
}

/// The graded ring retraction `π: ℤ/ℓ[b] → h(L)` fixing every `b′_n` and
/// killing every `b_{ℓ^r − 1}`.
#[derive(Clone, Debug)]
pub struct Retraction {
    pub ell: u32,
    pub max_weight: u32,
    images: Vec<GradedPoly>,
}

impl Retraction {
    pub fn new(ell: u32, gens: &GeneratorSet) -> Result<Self> {
        let ring = CoeffRing::mod_u64(ell as u64);
        let t = b_table();
        let mut images: Vec<GradedPoly> = vec![GradedPoly::zero(t, &ring)];
        for k in 1..=gens.max_weight {
            let img = match gens.b_prime(ell, k)? {
                None => GradedPoly::zero(t, &ring),
                Some(bp) => {
                    // b_k = b′_k − D_k with D_k in lower variables
                    let bk = GradedPoly::var(t, &ring, &b_name(k))?;
                    let d = &bp - &bk;
                    let pd = apply_images(&images, &d)?;
                    &bp - &pd
                }
            };
            images.push(img);
        }
        Ok(Retraction { ell, max_weight: gens.max_weight, images })
    }

    pub fn image_of_generator(&self, k: u32) -> Option<&GradedPoly> {
        self.images.get(k as usize).filter(|_| k >= 1)
    }

    pub fn apply(&self, p: &GradedPoly) -> Result<GradedPoly> {
        let ring = CoeffRing::mod_u64(self.ell as u64);
        let p = p.with_ring(&ring);
        for (m, _) in p.terms() {
            for &(g, _) in m.pairs() {
                if g + 1 > self.max_weight {
                    return Err(Error::BeyondTruncation { what: format!("b{}", g + 1), bound: self.max_weight });
                }
            }
        }
        apply_images(&self.images, &p)
    }
}

fn apply_images(images: &[GradedPoly], p: &GradedPoly) -> Result<GradedPoly> {
    p.substitute(b_table(), p.ring(), |g| images[g as usize + 1].clone())
}

/// `π(p)` for a homogeneous `p ∈ ℤ/ℓ[b]`.
pub fn retraction_pi(ell: u32, gens: &GeneratorSet, p: &GradedPoly) -> Result<GradedPoly> {
    if !p.is_homogeneous() {
        return Err(Error::WrongWeight { got: 0, expected: "a homogeneous polynomial".into() });
    }
    Retraction::new(ell, gens)?.apply(p)
}

/// The coefficient of a monomial in `b` written as `[(k, e)]`.
pub fn b_monomial(pairs: &[(u32, u32)]) -> Monomial {
    Monomial::from_pairs(pairs.iter().map(|&(k, e)| (k - 1, e)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_generator_set() {
        let g = find_adequate_generators(4).unwrap();
        assert_eq!(g.certificate[&1].index_coefficient, "2");
        assert_eq!(g.certificate[&3].index_coefficient.trim_start_matches('-'), "2");
        assert!(g.certificate[&3].typicality.as_ref().unwrap().typical);
        let back = GeneratorSet::from_json(&g.to_json().unwrap()).unwrap();
        assert_eq!(back, g);
    }
}
