use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{CoeffRing, GradedPoly, Monomial};
use crate::error::{Error, Result};
use crate::lazard::{b_table, partitions};
use crate::steenrod::element::write_terms;
use crate::steenrod::{GammaElement, MilnorMonomial, SteenrodContext, TensorGamma};

/// A polynomial in `b_1, b_2, …` over `ℤ/ℓ`.
pub type MglElement = GradedPoly;

/// `a_{n,R}`: the multinomial coefficient `n! / ((n − Σr_i)! r_1! r_2! ⋯)`,
/// zero when `Σ r_i > n`.
pub fn multinomial(n: u64, r: &[u32]) -> BigInt {
    let s: u64 = r.iter().map(|&v| v as u64).sum();
    if s > n {
        return BigInt::zero();
    }
    let mut out = BigInt::one();
    let mut top = n;
    for &v in r.iter().chain(std::iter::once(&((n - s) as u32))) {
        for k in 1..=v as u64 {
            out = out * BigInt::from(top) / BigInt::from(k);
            top -= 1;
        }
    }
    out
}

/// `|R| = Σ r_i(ℓ^i − 1)`.
pub fn xi_weight(ell: u32, r: &[u32]) -> u32 {
    r.iter().enumerate().map(|(k, &v)| v * (ell.pow(k as u32 + 1) - 1)).sum()
}

/// `P^R(c_1^n) = a_{n,R} c_1^{n+|R|}`: returns `(a_{n,R} mod ℓ, n + |R|)`.
pub fn act_on_projective_space(ell: u32, r: &[u32], n: u32) -> (u32, u32) {
    let a = multinomial(n as u64, r) % BigInt::from(ell);
    (a.try_into().expect("small"), n + xi_weight(ell, r))
}

/// `Q_i(c_1^n) = 0`.
pub fn q_on_projective_space(_i: u32, _n: u32) -> u32 {
    0
}

/// Sequences `R` (trailing zeros trimmed) with `|R| = w`.
pub fn xi_sequences(ell: u32, w: u32) -> Vec<Vec<u32>> {
    let weights: Vec<u32> = (1..).map(|i| ell.pow(i) - 1).take_while(|&d| d <= w.max(1)).collect();
    fn go(ws: &[u32], left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let Some((&d, rest)) = ws.split_first() else {
            if left == 0 {
                let mut r = prefix.clone();
                while r.last() == Some(&0) {
                    r.pop();
                }
                out.push(r);
            }
            return;
        };
        for k in 0..=left / d {
            prefix.push(k);
            go(rest, left - k * d, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&weights, w, &mut Vec::new(), &mut out);
    out
}

/// Monomials `b_λ` of weight `w`, one per partition.
pub fn b_monomials(w: u32) -> Vec<Monomial> {
    partitions(w)
        .into_iter()
        .map(|parts| parts.into_iter().fold(Monomial::one(), |m, k| m.mul_raw(&Monomial::var(k - 1))))
        .collect()
}

/// Weight of a `b`-monomial.
pub fn b_weight(m: &Monomial) -> u32 {
    m.pairs().iter().map(|&(g, e)| (g + 1) * e).sum()
}

/// `Σ ξ(R) ⊗ u_R` in `𝒫 ⊗ ℤ/ℓ[b]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoactionTensor {
    ring: CoeffRing,
    terms: BTreeMap<MilnorMonomial, MglElement>,
}

impl CoactionTensor {
    pub fn zero(ell: u32) -> Self {
        CoactionTensor { ring: CoeffRing::mod_u64(ell as u64), terms: BTreeMap::new() }
    }

    pub fn one(ell: u32) -> Self {
        let mut out = Self::zero(ell);
        let u = GradedPoly::one(b_table(), &out.ring);
        out.add_term(MilnorMonomial::one(), u);
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MilnorMonomial, &MglElement)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The `b`-polynomial paired with `ξ(R)`.
    pub fn coefficient(&self, r: &MilnorMonomial) -> Option<&MglElement> {
        self.terms.get(r)
    }

    pub fn add_term(&mut self, r: MilnorMonomial, u: MglElement) {
        if u.is_zero() {
            return;
        }
        let s = match self.terms.remove(&r) {
            Some(cur) => &cur + &u,
            None => u,
        };
        if !s.is_zero() {
            self.terms.insert(r, s);
        }
    }

    pub fn add(&mut self, other: &CoactionTensor) {
        for (r, u) in &other.terms {
            self.add_term(r.clone(), u.clone());
        }
    }

    pub fn scale(&self, k: &BigInt) -> CoactionTensor {
        let mut out = CoactionTensor { ring: self.ring.clone(), terms: BTreeMap::new() };
        for (r, u) in &self.terms {
            out.add_term(r.clone(), u.scale(k.clone()));
        }
        out
    }

    pub fn mul(&self, other: &CoactionTensor) -> CoactionTensor {
        let mut out = CoactionTensor { ring: self.ring.clone(), terms: BTreeMap::new() };
        for (r, u) in &self.terms {
            for (s, v) in &other.terms {
                out.add_term(r.add_xi(&s.r), u * v);
            }
        }
        out
    }
}

impl std::fmt::Display for CoactionTensor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let one = GradedPoly::one(b_table(), &self.ring);
        let mut labels = Vec::new();
        let mut coeffs = Vec::new();
        for (r, u) in &self.terms {
            for (m, c) in u.terms() {
                let b = if m.is_one() { "1".to_string() } else { one.format_monomial(m) };
                labels.push(format!("{}⊗{b}", r.gamma_string()));
                coeffs.push(GradedPoly::constant(b_table(), &self.ring, c.clone()));
            }
        }
        write_terms(f, labels.into_iter().zip(&coeffs))
    }
}

/// `Δ(b_n) = Σ_{m+|R|=n} a_{m+1,R} ξ(R) ⊗ b_m`.
pub fn coaction_generator(ell: u32, n: u32) -> CoactionTensor {
    let mut out = CoactionTensor::zero(ell);
    let ring = out.ring.clone();
    for m in 0..=n {
        let bm = if m == 0 { GradedPoly::one(b_table(), &ring) } else { GradedPoly::var_index(b_table(), &ring, m - 1) };
        for r in xi_sequences(ell, n - m) {
            let a = multinomial(m as u64 + 1, &r);
            out.add_term(MilnorMonomial::new(0, r), bm.scale(a));
        }
    }
    out
}

/// The coaction `H_{**}MGL → 𝒜_{**} ⊗ H_{**}MGL` through a weight bound.
#[derive(Clone, Debug)]
pub struct MglComodule {
    ell: u32,
    max_weight: u32,
    generators: Vec<CoactionTensor>,
}

impl MglComodule {
    pub fn new(ell: u32, max_weight: u32) -> Self {
        let generators = (1..=max_weight).map(|n| coaction_generator(ell, n)).collect();
        MglComodule { ell, max_weight, generators }
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }

    pub fn ring(&self) -> CoeffRing {
        CoeffRing::mod_u64(self.ell as u64)
    }

    /// `b_n` over `ℤ/ℓ`, with `b_0 = 1`.
    pub fn b(&self, n: u32) -> MglElement {
        if n == 0 {
            return GradedPoly::one(b_table(), &self.ring());
        }
        GradedPoly::var_index(b_table(), &self.ring(), n - 1)
    }

    pub fn monomial(&self, m: &Monomial) -> MglElement {
        GradedPoly::normal_order_indices(b_table(), &self.ring(), m.pairs(), BigInt::one()).expect("b monomial")
    }

    fn check_weight(&self, w: u32) -> Result<()> {
        if w > self.max_weight {
            return Err(Error::BeyondTruncation { what: format!("weight {w}"), bound: self.max_weight });
        }
        Ok(())
    }

    pub fn coaction_monomial(&self, m: &Monomial) -> Result<CoactionTensor> {
        self.check_weight(b_weight(m))?;
        let mut out = CoactionTensor::one(self.ell);
        for &(g, e) in m.pairs() {
            for _ in 0..e {
                out = out.mul(&self.generators[g as usize]);
            }
        }
        Ok(out)
    }

    pub fn coaction(&self, p: &MglElement) -> Result<CoactionTensor> {
        let mut out = CoactionTensor::zero(self.ell);
        for (m, c) in p.terms() {
            out.add(&self.coaction_monomial(m)?.scale(c));
        }
        Ok(out)
    }

    /// A specialized-mode context covering every `ξ(R)` that occurs.
    pub fn steenrod_context(&self) -> SteenrodContext {
        SteenrodContext::new(self.ell, crate::steenrod::Mode::Specialized, 2 * self.max_weight as i64)
            .expect("prime")
    }

    /// Coassociativity, counit and multiplicativity on every monomial of
    /// weight at most `max_weight`.
    pub fn verify(&self, max_weight: u32) -> Result<CoactionReport> {
        self.check_weight(max_weight)?;
        let ctx = self.steenrod_context();
        let mut report = CoactionReport { ell: self.ell, max_weight, ..Default::default() };
        let monos: Vec<Monomial> = (0..=max_weight).flat_map(b_monomials).collect();
        for m in &monos {
            let d = self.coaction_monomial(m)?;
            let name = || self.monomial(m).to_string();
            report.monomials += 1;
            let mut counit = GradedPoly::zero(b_table(), &self.ring());
            if let Some(u) = d.coefficient(&MilnorMonomial::one()) {
                counit = u.clone();
            }
            if counit != self.monomial(m) {
                report.failures.push(format!("counit at {}", name()));
            }
            if self.delta_left(&ctx, &d) != self.delta_right(&d)? {
                report.failures.push(format!("coassociativity at {}", name()));
            }
            for n in &monos {
                if b_weight(m) + b_weight(n) > max_weight {
                    continue;
                }
                report.products += 1;
                let lhs = self.coaction_monomial(&m.mul_raw(n))?;
                if lhs != d.mul(&self.coaction_monomial(n)?) {
                    report.failures.push(format!("multiplicativity at {} * {}", name(), self.monomial(n)));
                }
            }
        }
        Ok(report)
    }

    fn delta_left(&self, ctx: &SteenrodContext, d: &CoactionTensor) -> Triple {
        let mut out = Triple::new();
        for (r, u) in d.terms() {
            for ((x, y), c) in ctx.delta_monomial(r).terms() {
                let c = c.as_constant().expect("ξ coproducts have constant coefficients");
                for (m, k) in u.terms() {
                    add_triple(&mut out, (x.clone(), y.clone(), m.clone()), c.clone() * k, self.ell);
                }
            }
        }
        out
    }

    fn delta_right(&self, d: &CoactionTensor) -> Result<Triple> {
        let mut out = Triple::new();
        for (r, u) in d.terms() {
            for (s, v) in self.coaction(u)?.terms() {
                for (m, k) in v.terms() {
                    add_triple(&mut out, (r.clone(), s.clone(), m.clone()), k.clone(), self.ell);
                }
            }
        }
        Ok(out)
    }

    /// Checks `(id ⊗ f)Δ = Δ_Γ f` on every monomial of weight at most
    /// `max_weight`.
    pub fn comodule_map_check(&self, map: &ComoduleMap, max_weight: u32) -> Result<ComoduleMapReport> {
        self.check_weight(max_weight)?;
        let ctx = self.steenrod_context();
        let empty = BTreeMap::new();
        let images = match map {
            ComoduleMap::Zero => &empty,
            ComoduleMap::Multiplicative(images) => images,
        };
        let f_mono = |m: &Monomial| -> GammaElement {
            if matches!(map, ComoduleMap::Zero) {
                return GammaElement::zero();
            }
            let mut out = ctx.gamma_one();
            for &(g, e) in m.pairs() {
                let img = images.get(&(g + 1)).cloned().unwrap_or_default();
                out = ctx.mul(&out, &ctx.pow(&img, e));
            }
            out
        };
        let f = |p: &MglElement| -> GammaElement {
            let mut out = GammaElement::zero();
            for (m, c) in p.terms() {
                out.add_scaled(&f_mono(m), &ctx.a_const(c.clone()));
            }
            out
        };
        let mut report = ComoduleMapReport::default();
        for w in 0..=max_weight {
            for m in b_monomials(w) {
                report.checked += 1;
                let mut lhs = TensorGamma::zero();
                for (r, u) in self.coaction_monomial(&m)?.terms() {
                    for (n, c) in f(u).terms() {
                        lhs.add_term(r.clone(), n.clone(), c.clone());
                    }
                }
                let rhs = ctx.coproduct_unchecked(&f_mono(&m));
                if lhs != rhs {
                    report.first_failure = Some(self.monomial(&m).to_string());
                    return Ok(report);
                }
            }
        }
        Ok(report)
    }
}

/// A map `ℤ/ℓ[b] → 𝒫_{**}` to test against the coactions.
#[derive(Clone, Debug)]
pub enum ComoduleMap {
    Zero,
    /// The algebra map with `f(b_n) = images[n]`, zero when absent.
    Multiplicative(BTreeMap<u32, GammaElement>),
}

type Triple = BTreeMap<(MilnorMonomial, MilnorMonomial, Monomial), BigInt>;

fn add_triple(t: &mut Triple, key: (MilnorMonomial, MilnorMonomial, Monomial), c: BigInt, ell: u32) {
    let l = BigInt::from(ell);
    let s = (t.remove(&key).unwrap_or_default() + c) % &l;
    let s = if s < BigInt::zero() { s + l } else { s };
    if !s.is_zero() {
        t.insert(key, s);
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CoactionReport {
    pub ell: u32,
    pub max_weight: u32,
    pub monomials: usize,
    pub products: usize,
    pub failures: Vec<String>,
}

impl CoactionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ComoduleMapReport {
    pub checked: usize,
    pub first_failure: Option<String>,
}

impl ComoduleMapReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// `f(b_n) = ξ_r` if `n = ℓ^r − 1`, else `0`.
pub fn xi_projection(ell: u32, max_weight: u32) -> ComoduleMap {
    let ring = CoeffRing::mod_u64(ell as u64);
    let one = GradedPoly::one(&crate::steenrod::a_table(crate::steenrod::Mode::Specialized), &ring);
    let images = (1..)
        .map(|r| (r, ell.pow(r) - 1))
        .take_while(|&(_, n)| n <= max_weight)
        .map(|(r, n)| (n, GammaElement::from_term(MilnorMonomial::xi_pow(r, 1), one.clone())))
        .collect();
    ComoduleMap::Multiplicative(images)
}
