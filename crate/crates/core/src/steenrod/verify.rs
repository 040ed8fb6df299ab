use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::context::{Mode, SteenrodContext};
use super::element::{GammaElement, TensorGamma};
use super::milnor::{Generator, MilnorMonomial};
use crate::algebra::GradedPoly;

type Triple = BTreeMap<(MilnorMonomial, MilnorMonomial, MilnorMonomial), GradedPoly>;

fn add3(t: &mut Triple, key: (MilnorMonomial, MilnorMonomial, MilnorMonomial), a: GradedPoly) {
    if a.is_zero() {
        return;
    }
    let s = match t.remove(&key) {
        Some(cur) => &cur + &a,
        None => a,
    };
    if !s.is_zero() {
        t.insert(key, s);
    }
}

/// `(Δ ⊗ id)Δ(m)`.
pub fn delta_left_twice(ctx: &SteenrodContext, m: &MilnorMonomial) -> Triple {
    let mut out = Triple::new();
    for ((x, y), a) in ctx.delta_monomial(m).terms() {
        for ((x1, x2), c) in ctx.delta_monomial(x).terms() {
            add3(&mut out, (x1.clone(), x2.clone(), y.clone()), a * c);
        }
    }
    out
}

/// `(id ⊗ Δ)Δ(m)`; coefficients of the inner coproduct cross the first
/// tensor sign through `η_R`.
pub fn delta_right_twice(ctx: &SteenrodContext, m: &MilnorMonomial) -> Triple {
    let mut out = Triple::new();
    for ((x, y), a) in ctx.delta_monomial(m).terms() {
        for ((y1, y2), c) in ctx.delta_monomial(y).terms() {
            for (k, d) in ctx.right_act(x, c).terms() {
                add3(&mut out, (k.clone(), y1.clone(), y2.clone()), a * d);
            }
        }
    }
    out
}

/// `(ε ⊗ id)Δ(m)` and `(id ⊗ ε)Δ(m)`.
pub fn counit_images(ctx: &SteenrodContext, m: &MilnorMonomial) -> (GammaElement, GammaElement) {
    let (mut left, mut right) = (GammaElement::zero(), GammaElement::zero());
    let one = MilnorMonomial::one();
    for ((x, y), a) in ctx.delta_monomial(m).terms() {
        if *x == one {
            left.add_term(y.clone(), a.clone());
        }
        if *y == one {
            right.add_term(x.clone(), a.clone());
        }
    }
    (left, right)
}

/// One failed check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomFailure {
    pub axiom: String,
    pub subject: String,
}

/// Result of [`verify_hopf_axioms`].
#[derive(Clone, Debug, Serialize)]
pub struct HopfReport {
    pub ell: u32,
    pub mode: Mode,
    pub max_p: i64,
    pub monomials_checked: usize,
    /// Number of instances checked per axiom.
    pub checks: BTreeMap<String, usize>,
    pub failures: Vec<AxiomFailure>,
    /// Monomials with `ι(ι(m)) = m`, out of those checked. Reported only.
    pub iota_squared_identity: (usize, usize),
}

impl HopfReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<&AxiomFailure> {
        self.failures.first()
    }

    pub fn failures_of(&self, axiom: &str) -> impl Iterator<Item = &AxiomFailure> {
        let axiom = axiom.to_string();
        self.failures.iter().filter(move |f| f.axiom == axiom)
    }
}

/// `A`-monomials `ρ^i τ^j` with `i + j ≤ 3` (just `1` in specialized mode).
fn a_monomials(ctx: &SteenrodContext) -> Vec<GradedPoly> {
    if ctx.mode() == Mode::Specialized {
        return vec![ctx.a_one()];
    }
    let mut out = Vec::new();
    for i in 0..=3u32 {
        for j in 0..=3 - i {
            out.push(&ctx.rho().pow(i) * &ctx.tau().pow(j));
        }
    }
    out
}

/// `1 ⊗ η_R(a)` in normalized form.
fn one_tensor_eta_r(ctx: &SteenrodContext, a: &GradedPoly) -> TensorGamma {
    let mut out = TensorGamma::zero();
    let one = MilnorMonomial::one();
    for (k, c) in ctx.eta_r(a).terms() {
        ctx.push_pair(&mut out, &ctx.a_one(), &one, c, k);
    }
    out
}

/// Checks the Hopf algebroid identities on every Milnor monomial with first
/// degree at most `max_p`: coassociativity, both counit laws, both antipode
/// laws, the coinverse recursions on generators, and the unit compatibilities
/// `Δη_L(a) = a(1⊗1)`, `Δη_R(a) = 1⊗η_R(a)`, `ιη_L = η_R`.
pub fn verify_hopf_axioms(ctx: &SteenrodContext, max_p: i64) -> HopfReport {
    let mut checks: BTreeMap<String, usize> = BTreeMap::new();
    let mut failures = Vec::new();
    let mut check = |name: &str, ok: bool, subject: &dyn Fn() -> String| {
        *checks.entry(name.to_string()).or_default() += 1;
        if !ok {
            failures.push(AxiomFailure { axiom: name.to_string(), subject: subject() });
        }
    };
    let basis = ctx.basis_up_to(max_p);
    let mut iota_cache: HashMap<MilnorMonomial, GammaElement> = HashMap::new();
    let mut iota = |m: &MilnorMonomial| -> GammaElement {
        iota_cache.entry(m.clone()).or_insert_with(|| ctx.coinverse_monomial(m)).clone()
    };
    let mut iota_sq = (0, 0);
    for m in &basis {
        let name = || m.gamma_string();
        check("coassociativity", delta_left_twice(ctx, m) == delta_right_twice(ctx, m), &name);
        let (l, r) = counit_images(ctx, m);
        let me = ctx.gamma_monomial(m.clone());
        check("counit_left", l == me, &name);
        check("counit_right", r == me, &name);

        let eps = if m.is_one() { ctx.gamma_one() } else { GammaElement::zero() };
        let delta = ctx.delta_monomial(m);
        let mut left = GammaElement::zero();
        let mut right = GammaElement::zero();
        for ((x, y), a) in delta.terms() {
            let xy = ctx.mul(&ctx.gamma_monomial(x.clone()), &iota(y));
            left.add_scaled(&xy, a);
            let ix = ctx.mul(&ctx.eta_r(a), &iota(x));
            right.add(&ctx.mul(&ix, &ctx.gamma_monomial(y.clone())));
        }
        check("antipode_left", left == eps, &name);
        check("antipode_right", right == eps, &name);

        let im = iota(m);
        iota_sq.1 += 1;
        if ctx.coinverse(&im) == me {
            iota_sq.0 += 1;
        }
    }

    // the coinverse recursions on generators in the window
    let l = ctx.ell();
    for gen in window_generators(ctx, max_p) {
        let (r, lo) = match gen {
            Generator::Tau(r) => (r, 0),
            Generator::Xi(r) => (r, 1),
        };
        let mut sum = ctx.gamma_monomial(gen.monomial());
        for i in lo..r {
            let lower = match gen {
                Generator::Tau(_) => Generator::Tau(i),
                Generator::Xi(_) => Generator::Xi(i),
            };
            let xi = ctx.gamma_monomial(MilnorMonomial::xi_pow(r - i, l.pow(i)));
            sum.add(&ctx.mul(&xi, &iota(&lower.monomial())));
        }
        sum.add(&iota(&gen.monomial()));
        check("coinverse_recursion", sum.is_zero(), &|| gen.to_string());
    }

    for a in a_monomials(ctx) {
        let subject = || a.to_string();
        let mut unit = TensorGamma::zero();
        unit.add_term(MilnorMonomial::one(), MilnorMonomial::one(), a.clone());
        check("delta_eta_l", ctx.coproduct_unchecked(&ctx.eta_l(&a)) == unit, &subject);
        check("delta_eta_r", ctx.coproduct_unchecked(&ctx.eta_r(&a)) == one_tensor_eta_r(ctx, &a), &subject);
        check("iota_eta_l", ctx.coinverse(&ctx.eta_l(&a)) == ctx.eta_r(&a), &subject);
    }

    HopfReport {
        ell: ctx.ell(),
        mode: ctx.mode(),
        max_p,
        monomials_checked: basis.len(),
        checks,
        failures,
        iota_squared_identity: iota_sq,
    }
}

fn window_generators(ctx: &SteenrodContext, max_p: i64) -> Vec<Generator> {
    ctx.basis_up_to(max_p)
        .into_iter()
        .filter(|m| m.tau_count() + m.r.iter().sum::<u32>() == 1)
        .map(|m| m.split_last().expect("generator").1)
        .collect()
}
