use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::element::{GammaElement, TensorGamma};
use super::milnor::{Generator, MilnorMonomial};
use crate::algebra::{Bidegree, CoeffRing, GeneratorTable, GradedPoly, Monomial};
use crate::error::{Error, Result};

/// Coefficient regime for `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `A = ℤ/2[ρ, τ]` with the full relation `τ_i² = τξ_{i+1} + ρτ_{i+1} + ρτ_0ξ_{i+1}`.
    Generic,
    /// `ρ = τ = 0`, so `A = ℤ/ℓ` and `τ_i² = 0`.
    Specialized,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Mode> {
        match s.to_ascii_lowercase().as_str() {
            "generic" => Ok(Mode::Generic),
            "specialized" | "specialised" => Ok(Mode::Specialized),
            _ => Err(Error::InvalidContext(format!("unknown mode `{s}`"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Generic => "generic",
            Mode::Specialized => "specialized",
        })
    }
}

pub fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// The coefficient ring `A` as a generator table: `ρ, τ` (commuting) in
/// generic mode, nothing in specialized mode.
pub fn a_table(mode: Mode) -> Arc<GeneratorTable> {
    static GENERIC: OnceLock<Arc<GeneratorTable>> = OnceLock::new();
    static SPECIALIZED: OnceLock<Arc<GeneratorTable>> = OnceLock::new();
    match mode {
        Mode::Generic => GENERIC
            .get_or_init(|| {
                GeneratorTable::builder()
                    .commuting("rho", -1, -1)
                    .commuting("tau", 0, -1)
                    .build()
                    .expect("A table")
            })
            .clone(),
        Mode::Specialized => SPECIALIZED
            .get_or_init(|| GeneratorTable::builder().build().expect("A table"))
            .clone(),
    }
}

/// Polynomial presentation of `Γ` through index `top` (`τ_0..τ_top`,
/// `ξ_1..ξ_{top+1}`), used for parsing and cross-checks. Caps are applied to
/// `τ_i` with `i < top`.
pub fn gamma_table(ell: u32, mode: Mode, top: u32) -> Result<Arc<GeneratorTable>> {
    let l = ell as i64;
    let mut b = GeneratorTable::builder();
    if mode == Mode::Generic {
        b = b.commuting("rho", -1, -1).commuting("tau", 0, -1);
    }
    for i in 0..=top {
        let q = l.pow(i);
        b = b.generator(&format!("tau{i}"), 2 * q - 1, q - 1);
    }
    for i in 1..=top + 1 {
        let q = l.pow(i);
        b = b.generator(&format!("xi{i}"), 2 * q - 2, q - 1);
    }
    for i in 0..top {
        let (t1, x1) = (format!("tau{}", i + 1), format!("xi{}", i + 1));
        let rw: Vec<(i64, Vec<(&str, u32)>)> = match mode {
            Mode::Specialized => Vec::new(),
            Mode::Generic => vec![
                (1, vec![("tau", 1), (x1.as_str(), 1)]),
                (1, vec![("rho", 1), (t1.as_str(), 1)]),
                (1, vec![("rho", 1), ("tau0", 1), (x1.as_str(), 1)]),
            ],
        };
        b = b.cap(&format!("tau{i}"), 2, rw);
    }
    b.build()
}

/// `(ℓ, mode, window)` together with the structure-constant caches for `Γ`.
pub struct SteenrodContext {
    ell: u32,
    mode: Mode,
    max_p: i64,
    a_table: Arc<GeneratorTable>,
    ring: CoeffRing,
    overrides: HashMap<Generator, TensorGamma>,
    delta_cache: Mutex<HashMap<MilnorMonomial, Arc<TensorGamma>>>,
    prod_cache: Mutex<HashMap<(MilnorMonomial, MilnorMonomial), Arc<GammaElement>>>,
    eta_cache: Mutex<HashMap<u32, Arc<GammaElement>>>,
    iota_cache: Mutex<HashMap<Generator, Arc<GammaElement>>>,
}

impl fmt::Debug for SteenrodContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SteenrodContext")
            .field("ell", &self.ell)
            .field("mode", &self.mode)
            .field("max_p", &self.max_p)
            .finish()
    }
}

impl SteenrodContext {
    pub fn new(ell: u32, mode: Mode, max_p: i64) -> Result<Self> {
        if !is_prime(ell) {
            return Err(Error::InvalidContext(format!("{ell} is not prime")));
        }
        if ell != 2 && mode == Mode::Generic {
            return Err(Error::InvalidContext(format!("odd ℓ = {ell} requires specialized mode")));
        }
        if max_p < 0 {
            return Err(Error::InvalidContext("window must be nonnegative".into()));
        }
        Ok(SteenrodContext {
            ell,
            mode,
            max_p,
            a_table: a_table(mode),
            ring: CoeffRing::mod_u64(ell as u64),
            overrides: HashMap::new(),
            delta_cache: Mutex::default(),
            prod_cache: Mutex::default(),
            eta_cache: Mutex::default(),
            iota_cache: Mutex::default(),
        })
    }

    /// A copy of this context in which `Δ(g)` is replaced by `t`. Used to
    /// check that the axiom suite detects corrupted structure maps.
    pub fn with_generator_coproduct(&self, g: Generator, t: TensorGamma) -> Result<Self> {
        let mut c = Self::new(self.ell, self.mode, self.max_p)?;
        c.overrides = self.overrides.clone();
        c.overrides.insert(g, t);
        Ok(c)
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn max_p(&self) -> i64 {
        self.max_p
    }

    pub fn a_table(&self) -> &Arc<GeneratorTable> {
        &self.a_table
    }

    pub fn ring(&self) -> &CoeffRing {
        &self.ring
    }

    /// Largest `i` with `|τ_i|` inside the window.
    pub fn max_tau(&self) -> Option<u32> {
        (0..40u32).take_while(|&i| 2 * (self.ell as i64).pow(i) - 1 <= self.max_p).last()
    }

    /// Largest `i` with `|ξ_i|` inside the window (0 if none).
    pub fn max_xi(&self) -> u32 {
        (1..40u32).take_while(|&i| 2 * (self.ell as i64).pow(i) - 2 <= self.max_p).last().unwrap_or(0)
    }

    /// `Γ` as a polynomial table covering the window with room for relations.
    pub fn gamma_table(&self) -> Result<Arc<GeneratorTable>> {
        gamma_table(self.ell, self.mode, self.max_tau().unwrap_or(0).max(self.max_xi()) + 2)
    }

    // ---- coefficients in A ----

    pub fn a_zero(&self) -> GradedPoly {
        GradedPoly::zero(&self.a_table, &self.ring)
    }

    pub fn a_const(&self, c: impl Into<BigInt>) -> GradedPoly {
        GradedPoly::constant(&self.a_table, &self.ring, c)
    }

    pub fn a_one(&self) -> GradedPoly {
        self.a_const(1)
    }

    /// `ρ` (zero in specialized mode).
    pub fn rho(&self) -> GradedPoly {
        self.a_named("rho")
    }

    /// `τ` (zero in specialized mode).
    pub fn tau(&self) -> GradedPoly {
        self.a_named("tau")
    }

    fn a_named(&self, name: &str) -> GradedPoly {
        match self.mode {
            Mode::Generic => GradedPoly::var(&self.a_table, &self.ring, name).expect("A generator"),
            Mode::Specialized => self.a_zero(),
        }
    }

    // ---- Γ elements ----

    pub fn gamma_zero(&self) -> GammaElement {
        GammaElement::zero()
    }

    pub fn gamma_one(&self) -> GammaElement {
        self.gamma_monomial(MilnorMonomial::one())
    }

    pub fn gamma_monomial(&self, m: MilnorMonomial) -> GammaElement {
        GammaElement::from_term(m, self.a_one())
    }

    pub fn gamma_from_a(&self, a: &GradedPoly) -> GammaElement {
        GammaElement::from_term(MilnorMonomial::one(), a.clone())
    }

    pub fn bidegree(&self, m: &MilnorMonomial) -> Bidegree {
        m.bidegree(self.ell)
    }

    /// Product of two Milnor monomials in normal form.
    pub fn monomial_product(&self, m: &MilnorMonomial, n: &MilnorMonomial) -> Arc<GammaElement> {
        let key = (m.clone(), n.clone());
        if let Some(v) = self.prod_cache.lock().expect("cache").get(&key) {
            return v.clone();
        }
        let mut acc = GammaElement::from_term(MilnorMonomial { e: m.e, r: m.add_xi(&n.r).r }, self.a_one());
        for i in n.taus() {
            acc = self.mul_tau(&acc, i);
        }
        let v = Arc::new(acc);
        self.prod_cache.lock().expect("cache").insert(key, v.clone());
        v
    }

    /// Right multiplication by `τ_i`.
    fn mul_tau(&self, g: &GammaElement, i: u32) -> GammaElement {
        let mut out = GammaElement::zero();
        for (m, c) in g.terms() {
            let above = (m.e >> (i + 1)).count_ones();
            let c = if above % 2 == 1 { c.neg() } else { c.clone() };
            if !m.has_tau(i) {
                out.add_term(m.with_tau(i, true), c);
                continue;
            }
            if self.mode == Mode::Specialized {
                continue;
            }
            // τ(E)τ_i = ±τ_i²·τ(E∖i)
            let rest = m.with_tau(i, false);
            let rest_xi = rest.times_xi(i + 1, 1);
            out.add_term(rest_xi.clone(), &c * &self.tau());
            let rho_c = &c * &self.rho();
            let t1 = self.mul_tau(&GammaElement::from_term(rest, rho_c.clone()), i + 1);
            out.add(&t1);
            let t2 = self.mul_tau(&GammaElement::from_term(rest_xi, rho_c), 0);
            out.add(&t2);
        }
        out
    }

    pub fn mul(&self, g: &GammaElement, h: &GammaElement) -> GammaElement {
        let mut out = GammaElement::zero();
        for (m, a) in g.terms() {
            for (n, b) in h.terms() {
                let ab = a * b;
                if ab.is_zero() {
                    continue;
                }
                out.add_scaled(&self.monomial_product(m, n), &ab);
            }
        }
        out
    }

    pub fn pow(&self, g: &GammaElement, k: u32) -> GammaElement {
        let mut acc = self.gamma_one();
        for _ in 0..k {
            acc = self.mul(&acc, g);
        }
        acc
    }

    /// `η_R(τ)^k = (τ + ρτ_0)^k`.
    fn eta_tau_pow(&self, k: u32) -> Arc<GammaElement> {
        if let Some(v) = self.eta_cache.lock().expect("cache").get(&k) {
            return v.clone();
        }
        let v = if k == 0 {
            self.gamma_one()
        } else {
            let prev = self.eta_tau_pow(k - 1);
            let mut lin = self.gamma_from_a(&self.tau());
            lin.add_term(MilnorMonomial::tau(0), self.rho());
            self.mul(&prev, &lin)
        };
        let v = Arc::new(v);
        self.eta_cache.lock().expect("cache").insert(k, v.clone());
        v
    }

    /// The right unit `η_R: A → Γ`.
    pub fn eta_r(&self, a: &GradedPoly) -> GammaElement {
        let mut out = GammaElement::zero();
        if self.mode == Mode::Specialized {
            return self.gamma_from_a(a);
        }
        let tau_idx = self.a_table.lookup("tau").expect("tau");
        for (m, c) in a.terms() {
            let k = m.exponent(tau_idx);
            let rest = Monomial::from_pairs(m.pairs().iter().copied().filter(|&(g, _)| g != tau_idx));
            let coeff = GradedPoly::normal_order_indices(&self.a_table, &self.ring, rest.pairs(), c.clone())
                .expect("A monomial");
            out.add_scaled(&self.eta_tau_pow(k), &coeff);
        }
        out
    }

    /// `x · η_R(a)` for a Milnor monomial `x`.
    pub fn right_act(&self, x: &MilnorMonomial, a: &GradedPoly) -> GammaElement {
        if a.is_zero() {
            return GammaElement::zero();
        }
        if let Some(c) = a.as_constant() {
            return GammaElement::from_term(x.clone(), self.a_const(c));
        }
        self.mul(&self.gamma_monomial(x.clone()), &self.eta_r(a))
    }

    /// The left unit `η_L: A → Γ`.
    pub fn eta_l(&self, a: &GradedPoly) -> GammaElement {
        self.gamma_from_a(a)
    }

    /// The counit: the `A`-coefficient of the unit monomial.
    pub fn counit(&self, g: &GammaElement) -> GradedPoly {
        g.coefficient(&MilnorMonomial::one()).unwrap_or_else(|| self.a_zero())
    }

    // ---- Γ ⊗_A Γ ----

    /// Normalizes `a · (x ⊗ β·y)`: moves `β` across the tensor sign via `η_R`.
    pub(crate) fn push_pair(&self, out: &mut TensorGamma, a: &GradedPoly, x: &MilnorMonomial, beta: &GradedPoly, y: &MilnorMonomial) {
        if let Some(c) = beta.as_constant() {
            let c = a.scale(c);
            out.add_term(x.clone(), y.clone(), c);
            return;
        }
        for (k, d) in self.right_act(x, beta).terms() {
            out.add_term(k.clone(), y.clone(), a * d);
        }
    }

    /// Product in `Γ ⊗_A Γ` with the Koszul sign `(−1)^{p(y)p(z)}`.
    pub fn tensor_mul(&self, s: &TensorGamma, t: &TensorGamma) -> TensorGamma {
        let mut out = TensorGamma::zero();
        for ((x, y), a) in s.terms() {
            for ((z, w), b) in t.terms() {
                let mut ab = a * b;
                if ab.is_zero() {
                    continue;
                }
                if y.is_odd() && z.is_odd() {
                    ab = ab.neg();
                }
                let xz = self.monomial_product(x, z);
                let yw = self.monomial_product(y, w);
                for (k, alpha) in xz.terms() {
                    let coeff = &ab * alpha;
                    if coeff.is_zero() {
                        continue;
                    }
                    for (j, beta) in yw.terms() {
                        self.push_pair(&mut out, &coeff, k, beta, j);
                    }
                }
            }
        }
        out
    }

    /// `Δ` on a generator, honoring overrides.
    pub fn generator_coproduct(&self, g: Generator) -> TensorGamma {
        if let Some(t) = self.overrides.get(&g) {
            return t.clone();
        }
        let one = MilnorMonomial::one();
        let mut t = TensorGamma::zero();
        let l = self.ell;
        match g {
            Generator::Tau(r) => {
                let m = MilnorMonomial::tau(r);
                t.add_term(m.clone(), one.clone(), self.a_one());
                t.add_term(one.clone(), m, self.a_one());
                for i in 0..r {
                    t.add_term(MilnorMonomial::xi_pow(r - i, l.pow(i)), MilnorMonomial::tau(i), self.a_one());
                }
            }
            Generator::Xi(r) => {
                let m = MilnorMonomial::xi_pow(r, 1);
                t.add_term(m.clone(), one.clone(), self.a_one());
                t.add_term(one.clone(), m, self.a_one());
                for i in 1..r {
                    t.add_term(MilnorMonomial::xi_pow(r - i, l.pow(i)), MilnorMonomial::xi_pow(i, 1), self.a_one());
                }
            }
        }
        t
    }

    /// `Δ` on a Milnor monomial, without window check.
    pub fn delta_monomial(&self, m: &MilnorMonomial) -> Arc<TensorGamma> {
        if let Some(v) = self.delta_cache.lock().expect("cache").get(m) {
            return v.clone();
        }
        let v = match m.split_last() {
            None => {
                let mut t = TensorGamma::zero();
                t.add_term(MilnorMonomial::one(), MilnorMonomial::one(), self.a_one());
                t
            }
            Some((prefix, g)) => {
                let head = self.delta_monomial(&prefix);
                self.tensor_mul(&head, &self.generator_coproduct(g))
            }
        };
        let v = Arc::new(v);
        self.delta_cache.lock().expect("cache").insert(m.clone(), v.clone());
        v
    }

    pub fn check_window(&self, g: &GammaElement) -> Result<()> {
        for (m, _) in g.terms() {
            let p = self.bidegree(m).p;
            if p > self.max_p {
                return Err(Error::WindowExceeded { needed: p, max: self.max_p });
            }
        }
        Ok(())
    }

    /// `Δ`, left `A`-linear and multiplicative.
    pub fn coproduct(&self, g: &GammaElement) -> Result<TensorGamma> {
        self.check_window(g)?;
        Ok(self.coproduct_unchecked(g))
    }

    pub fn coproduct_unchecked(&self, g: &GammaElement) -> TensorGamma {
        let mut out = TensorGamma::zero();
        for (m, a) in g.terms() {
            out.add_scaled(&self.delta_monomial(m), a);
        }
        out
    }

    // ---- coinverse ----

    /// `ι` on a generator by the recursions `ι(τ_r) = −τ_r − Σ ξ_{r−i}^{ℓ^i} ι(τ_i)`
    /// and `ι(ξ_r) = −ξ_r − Σ ξ_{r−i}^{ℓ^i} ι(ξ_i)`.
    pub fn coinverse_generator(&self, g: Generator) -> Arc<GammaElement> {
        if let Some(v) = self.iota_cache.lock().expect("cache").get(&g) {
            return v.clone();
        }
        let l = self.ell;
        let mut v = self.gamma_monomial(g.monomial()).neg();
        let (r, lo) = match g {
            Generator::Tau(r) => (r, 0),
            Generator::Xi(r) => (r, 1),
        };
        for i in lo..r {
            let lower = match g {
                Generator::Tau(_) => Generator::Tau(i),
                Generator::Xi(_) => Generator::Xi(i),
            };
            let xi = self.gamma_monomial(MilnorMonomial::xi_pow(r - i, l.pow(i)));
            let t = self.mul(&xi, &self.coinverse_generator(lower));
            v.add(&t.neg());
        }
        let v = Arc::new(v);
        self.iota_cache.lock().expect("cache").insert(g, v.clone());
        v
    }

    /// `ι` on a monomial, as a ring map on the letters in normal order.
    pub fn coinverse_monomial(&self, m: &MilnorMonomial) -> GammaElement {
        let mut acc = self.gamma_one();
        for i in m.taus() {
            acc = self.mul(&acc, &self.coinverse_generator(Generator::Tau(i)));
        }
        for (k, &e) in m.r.iter().enumerate() {
            let x = self.coinverse_generator(Generator::Xi(k as u32 + 1));
            for _ in 0..e {
                acc = self.mul(&acc, &x);
            }
        }
        acc
    }

    /// `ι(a·m) = η_R(a)·ι(m)`.
    pub fn coinverse(&self, g: &GammaElement) -> GammaElement {
        let mut out = GammaElement::zero();
        for (m, a) in g.terms() {
            let t = self.mul(&self.eta_r(a), &self.coinverse_monomial(m));
            out.add(&t);
        }
        out
    }

    // ---- bases ----

    /// All Milnor monomials with first degree at most `max_p`, sorted by
    /// bidegree and then by index.
    pub fn basis_up_to(&self, max_p: i64) -> Vec<MilnorMonomial> {
        let l = self.ell as i64;
        let taus: Vec<(u32, i64)> =
            (0..40u32).map(|i| (i, 2 * l.pow(i) - 1)).take_while(|&(_, p)| p <= max_p).collect();
        let xis: Vec<(u32, i64)> =
            (1..40u32).map(|i| (i, 2 * l.pow(i) - 2)).take_while(|&(_, p)| p <= max_p).collect();
        let mut out = Vec::new();
        let mut es = vec![(0u64, 0i64)];
        for &(i, p) in &taus {
            let more: Vec<_> = es.iter().filter(|&&(_, q)| q + p <= max_p).map(|&(e, q)| (e | 1 << i, q + p)).collect();
            es.extend(more);
        }
        fn rs(xis: &[(u32, i64)], budget: i64, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            let Some((&(_, p), rest)) = xis.split_first() else {
                out.push(prefix.clone());
                return;
            };
            let mut k = 0;
            while k as i64 * p <= budget {
                prefix.push(k);
                rs(rest, budget - k as i64 * p, prefix, out);
                prefix.pop();
                k += 1;
            }
        }
        for (e, used) in es {
            let mut rr = Vec::new();
            rs(&xis, max_p - used, &mut Vec::new(), &mut rr);
            for r in rr {
                out.push(MilnorMonomial::new(e, r));
            }
        }
        out.sort_by_key(|m| (m.bidegree(self.ell), m.clone()));
        out
    }

    /// Milnor monomials of bidegree exactly `(p, q)`.
    pub fn basis_by_bidegree(&self, p: i64, q: i64) -> Result<Vec<MilnorMonomial>> {
        if p > self.max_p {
            return Err(Error::WindowExceeded { needed: p, max: self.max_p });
        }
        let target = Bidegree::new(p, q);
        Ok(self.basis_up_to(p).into_iter().filter(|m| self.bidegree(m) == target).collect())
    }

    /// Bidegrees occupied by the basis within the window.
    pub fn window_bidegrees(&self) -> BTreeMap<Bidegree, Vec<MilnorMonomial>> {
        let mut out: BTreeMap<Bidegree, Vec<MilnorMonomial>> = BTreeMap::new();
        for m in self.basis_up_to(self.max_p) {
            out.entry(self.bidegree(&m)).or_default().push(m);
        }
        out
    }

    // ---- polynomial presentation ----

    /// Writes a `Γ` element as a polynomial over [`gamma_table`].
    pub fn to_poly(&self, g: &GammaElement, table: &Arc<GeneratorTable>) -> Result<GradedPoly> {
        let mut out = GradedPoly::zero(table, &self.ring);
        for (m, a) in g.terms() {
            for (am, c) in a.terms() {
                let mut word: Vec<(u32, u32)> = Vec::new();
                for &(gi, e) in am.pairs() {
                    word.push((table.lookup(&self.a_table.get(gi).name)?, e));
                }
                for i in m.taus() {
                    word.push((table.lookup(&format!("tau{i}"))?, 1));
                }
                for (k, &e) in m.r.iter().enumerate() {
                    if e > 0 {
                        word.push((table.lookup(&format!("xi{}", k + 1))?, e));
                    }
                }
                let t = GradedPoly::normal_order_indices(table, &self.ring, &word, c.clone())?;
                out = out.try_add(&t)?;
            }
        }
        Ok(out)
    }

    /// Reads a normal-form polynomial over [`gamma_table`] as a `Γ` element.
    pub fn from_poly(&self, p: &GradedPoly) -> Result<GammaElement> {
        let table = p.table();
        let mut out = GammaElement::zero();
        for (m, c) in p.terms() {
            let mut mm = MilnorMonomial::one();
            let mut a_word = Vec::new();
            for &(gi, e) in m.pairs() {
                let name = &table.get(gi).name;
                if let Some(i) = name.strip_prefix("tau").and_then(|s| s.parse::<u32>().ok()) {
                    if e > 1 {
                        return Err(Error::InvalidContext(format!("{name}^{e} is not normalized")));
                    }
                    mm = mm.with_tau(i, true);
                } else if let Some(i) = name.strip_prefix("xi").and_then(|s| s.parse::<u32>().ok()) {
                    mm = mm.times_xi(i, e);
                } else {
                    a_word.push((self.a_table.lookup(name)?, e));
                }
            }
            let a = GradedPoly::normal_order_indices(&self.a_table, &self.ring, &a_word, c.clone())?;
            out.add_term(mm, a);
        }
        Ok(out)
    }
}
