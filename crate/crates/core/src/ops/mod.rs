//! The operation algebra dual to `Γ`: the Milnor basis `ρ(E, R)`, products
//! by transposing `Δ`, the Cartan formulas, and the left ideal generated by
//! the `Q_i`.

pub mod algebra;
pub mod cartan;
pub mod element;
pub mod leftideal;

use serde::Serialize;

pub use algebra::OperationAlgebra;
pub use cartan::{cartan_check, cartan_p_formula, cartan_q_formula, transposed_coproduct, CartanReport, OperationTensor};
pub use element::OperationElement;
pub use leftideal::{all_q_indices, leftideal_expand, quotient_rank, triangular_product, LeftIdealExpansion};

use crate::error::Result;
use crate::steenrod::{Mode, MilnorMonomial};

/// One identity checked by [`milnor_identities`].
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub holds: bool,
}

/// `q_i = P^{ℓ^{i−1}}⋯P^1` (on the `ρ(∅, e_i)` component), `Q_i = q_iβ − βq_i`,
/// `Q_iQ_j + Q_jQ_i = 0`, `Q_i² = 0`, and in generic mode `Q_0τ − τQ_0 = ρ`,
/// for every index fitting in the window.
pub fn milnor_identities(alg: &OperationAlgebra) -> Result<Vec<IdentityCheck>> {
    let ctx = alg.context();
    let max_p = ctx.max_p();
    let ell = ctx.ell();
    let p = |m: &MilnorMonomial| ctx.bidegree(m).p;
    let mut out = Vec::new();
    let mut push = |identity: String, holds: bool| out.push(IdentityCheck { identity, holds });

    for i in 1.. {
        let xi = MilnorMonomial::xi_pow(i, 1);
        if p(&xi) + 1 > max_p {
            break;
        }
        let factors: Vec<_> = (0..i).rev().map(|k| alg.p_op(&[ell.pow(k)])).collect();
        let chain = alg.product_chain(&factors)?;
        let one = chain.coefficient(&xi).and_then(|a| a.as_constant()).map(|c| ctx.ring().reduce(c));
        push(format!("q{i} = P^(l^{})...P^1", i - 1), one == Some(1.into()));

        let qi = alg.q_op(i);
        let beta = alg.beta();
        let comm = alg.op_product(&qi, &beta)?.sub(&alg.op_product(&beta, &qi)?);
        push(format!("Q{i} = q{i}*beta - beta*q{i}"), comm == alg.milnor_q(i));
    }

    let qs = all_q_indices(alg, max_p);
    for &i in &qs {
        for &j in &qs {
            if j < i || p(&MilnorMonomial::tau(i)) + p(&MilnorMonomial::tau(j)) > max_p {
                continue;
            }
            let (a, b) = (alg.milnor_q(i), alg.milnor_q(j));
            let mut s = alg.op_product(&a, &b)?;
            if i == j {
                push(format!("Q{i}^2 = 0"), s.is_zero());
            } else {
                s.add(&alg.op_product(&b, &a)?);
                push(format!("Q{i}*Q{j} + Q{j}*Q{i} = 0"), s.is_zero());
            }
        }
    }

    if ctx.mode() == Mode::Generic && max_p >= 1 {
        let tau = ctx.tau();
        let q0 = alg.beta();
        let lhs = alg.right_mul(&q0, &tau).sub(&q0.scale(&tau));
        push("Q0*tau - tau*Q0 = rho".into(), lhs == alg.scalar(&ctx.rho()));
    }
    Ok(out)
}
