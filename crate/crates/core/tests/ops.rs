use std::sync::{Arc, OnceLock};

use msa::ops::*;
use msa::steenrod::{Mode, MilnorMonomial, SteenrodContext};
use proptest::prelude::*;

fn alg(ell: u32, mode: Mode, max_p: i64) -> OperationAlgebra {
    OperationAlgebra::new(Arc::new(SteenrodContext::new(ell, mode, max_p).unwrap()))
}

fn generic() -> &'static OperationAlgebra {
    static A: OnceLock<OperationAlgebra> = OnceLock::new();
    A.get_or_init(|| alg(2, Mode::Generic, 16))
}

fn m(taus: &[u32], r: &[u32]) -> MilnorMonomial {
    MilnorMonomial::from_parts(taus, r)
}

#[test]
fn pairing_is_dual_basis() {
    let a = generic();
    let ctx = a.context();
    let one = ctx.a_one();
    assert_eq!(a.pairing(&a.identity(), &ctx.gamma_one()), one);
    assert_eq!(a.pairing(&a.beta(), &ctx.gamma_monomial(m(&[0], &[]))), one);
    assert!(a.pairing(&a.beta(), &ctx.gamma_monomial(m(&[], &[1]))).is_zero());
    assert_eq!(a.pairing(&a.p_op(&[1]), &ctx.gamma_monomial(m(&[], &[1]))), one);
    let g = ctx.gamma_monomial(m(&[0], &[])).scale(&ctx.tau());
    assert_eq!(a.pairing(&a.beta(), &g), ctx.tau());
}

#[test]
fn unit_and_exterior() {
    let a = generic();
    let phi = a.p_op(&[2, 1]);
    assert_eq!(a.op_product(&a.identity(), &phi).unwrap(), phi);
    assert_eq!(a.op_product(&phi, &a.identity()).unwrap(), phi);
    assert!(a.op_product(&a.beta(), &a.beta()).unwrap().is_zero());
    let q01 = a.op_product(&a.milnor_q(0), &a.milnor_q(1)).unwrap();
    assert_eq!(q01, a.q_of(&[0, 1]));
}

#[test]
fn bockstein_and_tau() {
    let a = generic();
    let ctx = a.context();
    let q0 = a.beta();
    let right = a.right_mul(&q0, &ctx.tau());
    let left = q0.scale(&ctx.tau());
    assert_eq!(right.sub(&left), a.scalar(&ctx.rho()));
    assert_eq!(right.to_string(), "(rho) + (tau)*Q0");
    let sp = alg(2, Mode::Specialized, 8);
    assert_eq!(sp.right_mul(&sp.beta(), &sp.context().a_const(1)), sp.beta());
}

#[test]
fn milnor_generators() {
    let a = generic();
    assert_eq!(a.q_op(0), a.identity());
    let chain = a.op_product(&a.p_op(&[2]), &a.p_op(&[1])).unwrap();
    assert_eq!(chain.coefficient(&m(&[], &[0, 1])).unwrap().to_string(), "1");
    let q1 = a.q_op(1);
    let b = a.beta();
    let comm = a.op_product(&q1, &b).unwrap().sub(&a.op_product(&b, &q1).unwrap());
    assert_eq!(comm, a.milnor_q(1));
    for ctx in [alg(2, Mode::Specialized, 16), alg(3, Mode::Specialized, 26), alg(2, Mode::Generic, 16)] {
        let ids = milnor_identities(&ctx).unwrap();
        assert!(ids.len() >= 9);
        for c in ids {
            assert!(c.holds, "{}", c.identity);
        }
    }
}

#[test]
fn products_need_the_window() {
    let a = alg(2, Mode::Specialized, 6);
    assert!(a.op_product(&a.p_op(&[2]), &a.p_op(&[2])).is_err());
    assert!(a.op_product(&a.p_op(&[1]), &a.p_op(&[2])).is_ok());
}

#[test]
fn cartan_examples() {
    let a = generic();
    let ctx = a.context();
    let d = transposed_coproduct(a, &m(&[1], &[]));
    assert_eq!(d.to_string(), "1⊗Q1 + (rho)*Q0⊗Q0 + Q1⊗1");
    assert_eq!(d, cartan_q_formula(a, 1));
    let d0 = transposed_coproduct(a, &MilnorMonomial::one());
    assert_eq!(d0.len(), 1);
    assert_eq!(d0.coefficient(&MilnorMonomial::one(), &MilnorMonomial::one()), Some(&ctx.a_one()));
    let d1 = transposed_coproduct(a, &m(&[], &[1]));
    assert_eq!(d1.coefficient(&m(&[0], &[]), &m(&[0], &[])), Some(&ctx.tau()));
    assert_eq!(d1, cartan_p_formula(a, &[1]));
}

#[test]
fn cartan_specialized_exact() {
    for (ell, p) in [(2, 16), (3, 26)] {
        let a = alg(ell, Mode::Specialized, p);
        let rep = cartan_check(&a, p);
        assert!(rep.passed(), "{:?}", rep.mismatches().next());
        assert!(rep.entry("P[1]").is_some());
    }
}

#[test]
fn cartan_generic_rho_terms() {
    let a = generic();
    let rep = cartan_check(a, 16);
    for e in &rep.entries {
        if e.operation.starts_with('Q') {
            assert!(e.matches, "{}", e.operation);
        }
        assert!(e.matches_mod_rho, "{}", e.operation);
    }
    let e = rep.entry("P[0,1]").unwrap();
    assert!(!e.matches);
    assert_eq!(e.difference, "(rho*tau)*Q0⊗Q0*Q1 + (rho*tau)*Q0*Q1⊗Q0");
    assert!(rep.entry("P[1]").unwrap().matches);
}

#[test]
fn leftideal_examples() {
    let a = generic();
    let q0 = m(&[0], &[]);
    let e = leftideal_expand(a, &q0).unwrap();
    assert_eq!(e.to_string(), "Q0");
    assert!(leftideal_expand(a, &m(&[], &[1])).is_err());

    let target = m(&[0], &[1]);
    let prod = triangular_product(a, &target).unwrap();
    assert_eq!(prod.coefficient(&target).unwrap().to_string(), "1");
    for (k, _) in prod.terms() {
        assert!(k == &target || (k.e != 0 && k.r_subset(&target) && k.r != target.r));
    }
    for ctx in [generic(), &alg(3, Mode::Specialized, 26)] {
        for t in ctx.basis_up_to(ctx.context().max_p()).into_iter().filter(|t| t.e != 0) {
            let exp = leftideal_expand(ctx, &t).unwrap();
            assert_eq!(exp.evaluate(ctx).unwrap(), ctx.basis(t.clone()), "{}", t.op_string());
        }
    }
}

#[test]
fn quotient_rank_examples() {
    let a = alg(2, Mode::Specialized, 16);
    assert_eq!(quotient_rank(&a, &[0], 1, 0).unwrap(), 0);
    assert_eq!(quotient_rank(&a, &[], 1, 0).unwrap(), 1);
    assert_eq!(quotient_rank(&a, &[0], 2, 1).unwrap(), 1);
    assert!(quotient_rank(&a, &[0], 18, 9).is_err());
    for a in [generic(), &alg(2, Mode::Specialized, 16), &alg(3, Mode::Specialized, 26)] {
        let all = all_q_indices(a, a.context().max_p());
        for (b, ms) in a.context().window_bidegrees() {
            let pure = ms.iter().filter(|m| m.is_pure_xi()).count();
            assert_eq!(quotient_rank(a, &all, b.p, b.q).unwrap(), pure, "{b:?}");
            assert_eq!(quotient_rank(a, &[], b.p, b.q).unwrap(), ms.len());
        }
    }
}

fn small_basis() -> &'static Vec<MilnorMonomial> {
    static B: OnceLock<Vec<MilnorMonomial>> = OnceLock::new();
    B.get_or_init(|| generic().basis_up_to(5))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_associative(i in 0usize..1000, j in 0usize..1000, k in 0usize..1000) {
        let a = generic();
        let b = small_basis();
        let (x, y, z) = (a.basis(b[i % b.len()].clone()), a.basis(b[j % b.len()].clone()), a.basis(b[k % b.len()].clone()));
        let left = a.op_product(&a.op_product(&x, &y).unwrap(), &z).unwrap();
        let right = a.op_product(&x, &a.op_product(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn right_action_is_multiplicative(i in 0usize..1000, s in 0u32..3, t in 0u32..3) {
        let a = generic();
        let ctx = a.context();
        let b = small_basis();
        let x = a.basis(b[i % b.len()].clone());
        let (u, v) = (ctx.rho().pow(s), ctx.tau().pow(t));
        let once = a.right_mul(&x, &(&u * &v));
        let twice = a.right_mul(&a.right_mul(&x, &u), &v);
        prop_assert_eq!(once, twice);
    }
}
