use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::algebra::{GradedPoly, Monomial};
use crate::error::{Error, Result};
use crate::steenrod::{GammaElement, MilnorMonomial, SteenrodContext};

use super::element::OperationElement;

type Index = HashMap<(MilnorMonomial, MilnorMonomial), Vec<(MilnorMonomial, GradedPoly)>>;
type RightTable = HashMap<MilnorMonomial, Vec<(MilnorMonomial, GradedPoly)>>;

/// The operation algebra dual to `Γ` over a fixed window, with products
/// computed as the transpose of `Δ`.
pub struct OperationAlgebra {
    ctx: Arc<SteenrodContext>,
    transpose: OnceLock<Index>,
    right: Mutex<HashMap<(Monomial, i64), Arc<RightTable>>>,
}

impl std::fmt::Debug for OperationAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OperationAlgebra").field("ctx", &self.ctx).finish()
    }
}

impl OperationAlgebra {
    pub fn new(ctx: Arc<SteenrodContext>) -> Self {
        OperationAlgebra { ctx, transpose: OnceLock::new(), right: Mutex::default() }
    }

    pub fn context(&self) -> &SteenrodContext {
        &self.ctx
    }

    pub fn shared_context(&self) -> &Arc<SteenrodContext> {
        &self.ctx
    }

    fn p(&self, m: &MilnorMonomial) -> i64 {
        self.ctx.bidegree(m).p
    }

    pub fn basis(&self, m: MilnorMonomial) -> OperationElement {
        OperationElement::from_term(m, self.ctx.a_one())
    }

    pub fn identity(&self) -> OperationElement {
        self.basis(MilnorMonomial::one())
    }

    /// `P^R`.
    pub fn p_op(&self, r: &[u32]) -> OperationElement {
        self.basis(MilnorMonomial::new(0, r.to_vec()))
    }

    /// `q_i = P^{e_i}`; `q_0` is the identity.
    pub fn q_op(&self, i: u32) -> OperationElement {
        if i == 0 {
            return self.identity();
        }
        self.basis(MilnorMonomial::xi_pow(i, 1))
    }

    /// `Q_i`, dual to `τ_i`.
    pub fn milnor_q(&self, i: u32) -> OperationElement {
        self.basis(MilnorMonomial::tau(i))
    }

    /// `Q(E)` for the listed indices.
    pub fn q_of(&self, taus: &[u32]) -> OperationElement {
        self.basis(MilnorMonomial::from_parts(taus, &[]))
    }

    /// The Bockstein `β = Q_0`.
    pub fn beta(&self) -> OperationElement {
        self.milnor_q(0)
    }

    /// Multiplication by `a ∈ A`, as an operation.
    pub fn scalar(&self, a: &GradedPoly) -> OperationElement {
        OperationElement::from_term(MilnorMonomial::one(), a.clone())
    }

    /// `⟨φ, g⟩`.
    pub fn pairing(&self, phi: &OperationElement, g: &GammaElement) -> GradedPoly {
        let mut out = self.ctx.a_zero();
        for (m, a) in phi.terms() {
            if let Some(c) = g.coefficient(m) {
                out = &out + &(a * &c);
            }
        }
        out
    }

    fn index(&self) -> &Index {
        self.transpose.get_or_init(|| {
            let mut idx = Index::new();
            for m in self.ctx.basis_up_to(self.ctx.max_p()) {
                for ((x, y), c) in self.ctx.delta_monomial(&m).terms() {
                    idx.entry((x.clone(), y.clone())).or_default().push((m.clone(), c.clone()));
                }
            }
            idx
        })
    }

    /// `ρ(k)ρ(j) = Σ_m coeff(k ⊗ j in Δm) ρ(m)`.
    pub fn basis_product(&self, k: &MilnorMonomial, j: &MilnorMonomial) -> Result<OperationElement> {
        let needed = self.p(k) + self.p(j);
        if needed > self.ctx.max_p() {
            return Err(Error::WindowExceeded { needed, max: self.ctx.max_p() });
        }
        let mut out = OperationElement::zero();
        if let Some(list) = self.index().get(&(k.clone(), j.clone())) {
            for (m, c) in list {
                out.add_term(m.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// `(ρ(k)·b)(x) = ρ(k)(η_R(b)·x)` for a single `A`-monomial `b`.
    fn right_table(&self, b: &Monomial, top: i64) -> Arc<RightTable> {
        let key = (b.clone(), top);
        if let Some(t) = self.right.lock().expect("cache").get(&key) {
            return t.clone();
        }
        let table = self.ctx.a_table();
        let bpoly = GradedPoly::normal_order_indices(table, self.ctx.ring(), b.pairs(), 1).expect("A monomial");
        let mut out = RightTable::new();
        for m in self.ctx.basis_up_to(top) {
            for (k, c) in self.ctx.right_act(&m, &bpoly).terms() {
                out.entry(k.clone()).or_default().push((m.clone(), c.clone()));
            }
        }
        let out = Arc::new(out);
        self.right.lock().expect("cache").insert(key, out.clone());
        out
    }

    /// The right `A`-action `φ·b`.
    pub fn right_mul(&self, phi: &OperationElement, b: &GradedPoly) -> OperationElement {
        let mut out = OperationElement::zero();
        for (bm, bc) in b.terms() {
            if bm.is_one() {
                out.add_scaled(phi, &self.ctx.a_const(bc.clone()));
                continue;
            }
            let shift = -b.bidegree_of(bm).p;
            let top = phi.terms().map(|(k, _)| self.p(k)).max().unwrap_or(0) + shift;
            let t = self.right_table(bm, top);
            for (k, a) in phi.terms() {
                if let Some(list) = t.get(k) {
                    for (m, c) in list {
                        out.add_term(m.clone(), &(a * c) * &self.ctx.a_const(bc.clone()));
                    }
                }
            }
        }
        out
    }

    /// `φψ`: the transpose of `Δ`, with `ψ`'s coefficients moved left through
    /// the right action.
    pub fn op_product(&self, phi: &OperationElement, psi: &OperationElement) -> Result<OperationElement> {
        let mut out = OperationElement::zero();
        for (j, b) in psi.terms() {
            let moved = self.right_mul(phi, b);
            for (k, a) in moved.terms() {
                out.add_scaled(&self.basis_product(k, j)?, a);
            }
        }
        Ok(out)
    }

    /// Left-to-right product of a list of operations.
    pub fn product_chain(&self, factors: &[OperationElement]) -> Result<OperationElement> {
        let mut acc = self.identity();
        for f in factors {
            acc = self.op_product(&acc, f)?;
        }
        Ok(acc)
    }

    /// Every `ρ(E, R)` with first degree at most `max_p`.
    pub fn basis_up_to(&self, max_p: i64) -> Vec<MilnorMonomial> {
        self.ctx.basis_up_to(max_p)
    }
}
