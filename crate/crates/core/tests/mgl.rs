use std::collections::BTreeMap;
use std::sync::OnceLock;

use msa::lazard::{find_adequate_generators, GeneratorSet};
use msa::mgl::*;
use msa::ops::{all_q_indices, quotient_rank, OperationAlgebra};
use msa::steenrod::{Mode, MilnorMonomial, SteenrodContext};
use num_bigint::BigInt;
use proptest::prelude::*;

fn gens() -> &'static GeneratorSet {
    static G: OnceLock<GeneratorSet> = OnceLock::new();
    G.get_or_init(|| find_adequate_generators(6).unwrap())
}

fn xi(r: &[u32]) -> MilnorMonomial {
    MilnorMonomial::new(0, r.to_vec())
}

#[test]
fn multinomials() {
    assert_eq!(multinomial(5, &[]), BigInt::from(1));
    assert_eq!(multinomial(2, &[1]), BigInt::from(2));
    assert_eq!(multinomial(1, &[2]), BigInt::from(0));
    assert_eq!(multinomial(6, &[1, 2]), BigInt::from(60));
    assert_eq!(act_on_projective_space(3, &[], 4), (1, 4));
    assert_eq!(act_on_projective_space(3, &[1], 2), (2, 4));
    assert_eq!(act_on_projective_space(2, &[0, 1], 1), (1, 4));
    assert_eq!(q_on_projective_space(1, 3), 0);
}

#[test]
fn generator_coactions() {
    let c = MglComodule::new(2, 6);
    assert_eq!(c.coaction(&c.b(0)).unwrap(), CoactionTensor::one(2));
    let d1 = c.coaction(&c.b(1)).unwrap();
    assert_eq!(d1.len(), 2);
    assert_eq!(d1.coefficient(&xi(&[1])).unwrap().to_string(), "1");
    assert_eq!(d1.coefficient(&xi(&[])).unwrap().to_string(), "b1");

    let d3 = c.coaction(&c.b(3)).unwrap();
    let mut expected = CoactionTensor::zero(2);
    expected.add_term(xi(&[]), c.b(3));
    expected.add_term(xi(&[2]), c.b(1));
    expected.add_term(xi(&[0, 1]), c.b(0));
    expected.add_term(xi(&[1]), c.b(2));
    assert_eq!(d3, expected);

    let d2 = c.coaction(&c.b(2)).unwrap();
    assert_eq!(d2.to_string(), "1⊗b2");
    assert!(c.coaction(&c.b(3).pow(3)).is_err());
}

#[test]
fn comodule_axioms() {
    for ell in [2, 3] {
        let rep = MglComodule::new(ell, 6).verify(6).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
        assert_eq!(rep.monomials, 30);
    }
}

#[test]
fn comodule_maps() {
    for ell in [2, 3] {
        let c = MglComodule::new(ell, 6);
        let rep = c.comodule_map_check(&xi_projection(ell, 6), 6).unwrap();
        assert!(rep.passed(), "{:?}", rep.first_failure);
        assert!(c.comodule_map_check(&ComoduleMap::Zero, 6).unwrap().passed());
    }
    let c = MglComodule::new(2, 6);
    let ctx = c.steenrod_context();
    let mut wrong = BTreeMap::new();
    wrong.insert(1, ctx.gamma_monomial(xi(&[1])));
    wrong.insert(2, ctx.gamma_monomial(xi(&[2])));
    let rep = c.comodule_map_check(&ComoduleMap::Multiplicative(wrong), 6).unwrap();
    assert_eq!(rep.first_failure.as_deref(), Some("b2"));
}

#[test]
fn g_tilde_examples() {
    let g = gens();
    let m0 = g_tilde_matrix(2, g, 0).unwrap();
    assert_eq!(m0.matrix, vec![vec![1]]);
    let m1 = g_tilde_matrix(2, g, 1).unwrap();
    assert_eq!(m1.source, vec!["b1"]);
    assert_eq!(m1.target, vec!["xi1⊗1"]);
    assert_eq!(m1.matrix, vec![vec![1]]);
    assert_eq!(m1.f_tilde.as_deref(), Some("b1"));
    let m2 = g_tilde_matrix(2, g, 2).unwrap();
    assert_eq!(m2.source, vec!["b2", "b1^2"]);
    assert_eq!(m2.target, vec!["xi1^2⊗1", "1⊗b'2"]);
    assert_eq!(m2.matrix, vec![vec![0, 1], vec![1, 0]]);
    assert!(m2.to_csv().starts_with("source,xi1^2⊗1,1⊗b'2\nb2,0,1\n"));
}

#[test]
fn g_tilde_invertible_through_six() {
    for ell in [2, 3] {
        for w in 0..=6 {
            let m = g_tilde_matrix(ell, gens(), w).unwrap();
            assert!(m.invertible);
            assert_eq!(m.source.len(), m.target.len());
        }
    }
    let f3 = g_tilde_matrix(2, gens(), 3).unwrap();
    assert!(f3.f_tilde.is_some());
    assert!(g_tilde_matrix(2, gens(), 7).is_err());
}

#[test]
fn quotient_bases() {
    let g = gens();
    let all: Vec<u32> = (1..=6).collect();
    let q = quotient_homology_basis(2, g, &all, 1).unwrap();
    assert_eq!(q.basis, vec!["xi1"]);
    let q = quotient_homology_basis(2, g, &[1], 2).unwrap();
    assert_eq!(q.rank, 2);
    assert_eq!(q.basis, vec!["xi1^2", "1⊗b'2"]);
    for w in 0..=6 {
        let none = quotient_homology_basis(3, g, &[], w).unwrap();
        assert_eq!(none.rank, g_tilde_matrix(3, g, w).unwrap().target.len());
    }
    assert!(quotient_homology_basis(2, g, &[9], 2).is_err());

    for ell in [2, 3] {
        let alg = OperationAlgebra::new(std::sync::Arc::new(SteenrodContext::new(ell, Mode::Specialized, 12).unwrap()));
        let qs = all_q_indices(&alg, 12);
        for w in 0..=6u32 {
            let q = quotient_homology_basis(ell, g, &all, w).unwrap();
            let (p, qq) = (2 * w as i64, w as i64);
            assert_eq!(q.rank, quotient_rank(&alg, &qs, p, qq).unwrap());
            assert_eq!(q.rank, xi_sequences(ell, w).len());
        }
    }
}

#[test]
fn bockstein_kernel() {
    let ctx = SteenrodContext::new(2, Mode::Specialized, 16).unwrap();
    let t0 = ker_bockstein_basis(&ctx, 1, 0).unwrap();
    assert!(t0.basis.is_empty());
    assert_eq!(q0_contraction(&ctx, &MilnorMonomial::tau(0)), ctx.gamma_one());
    let x1 = ker_bockstein_basis(&ctx, 2, 1).unwrap();
    assert_eq!(x1.basis, vec!["xi1"]);
    assert!(q0_contraction(&ctx, &xi(&[1])).is_zero());
    assert_eq!(ker_bockstein_basis(&ctx, 0, 0).unwrap().basis, vec!["1"]);
    for ctx in [ctx, SteenrodContext::new(3, Mode::Specialized, 26).unwrap()] {
        for (b, _) in ctx.window_bidegrees() {
            assert!(ker_bockstein_basis(&ctx, b.p, b.q).unwrap().verified(), "{b:?}");
        }
    }
}

#[test]
fn pr_tau_duality() {
    let c = MglComodule::new(2, 6);
    let r = pr_tau_duality_check(&c, &[]).unwrap();
    assert!(r.holds);
    assert_eq!(r.expected, "1");
    let r = pr_tau_duality_check(&c, &[1]).unwrap();
    assert!(r.holds);
    assert_eq!(r.pairings, vec![("b1".to_string(), 1)]);
    let r = pr_tau_duality_check(&c, &[2]).unwrap();
    assert!(r.holds, "{r:?}");
    for w in 0..=5 {
        for s in xi_sequences(2, w) {
            assert!(pr_tau_duality_check(&c, &s).unwrap().holds, "{s:?}");
        }
    }
}

#[test]
fn psf_families() {
    let h = BidegreeFamily::h_mgl(8);
    assert!(h.is_psf());
    assert_eq!(h.count((8, 4)), 5);
    assert_eq!(BidegreeFamily::unit(8).smash(&h), h);
    assert!(!h.dual().is_psf() || h.counts.len() == 1);
    let off = BidegreeFamily::from_members(4, [(1, 1)]);
    assert!(!off.is_psf());
}

fn brute_smash(a: &BidegreeFamily, b: &BidegreeFamily) -> BidegreeFamily {
    let expand = |f: &BidegreeFamily| -> Vec<(i64, i64)> {
        f.counts.iter().flat_map(|(&k, &n)| std::iter::repeat(k).take(n as usize)).collect()
    };
    let mut out = BidegreeFamily::new(a.max_q.min(b.max_q));
    for x in expand(a) {
        for y in expand(b) {
            out.insert((x.0 + y.0, x.1 + y.1), 1);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn smash_matches_enumeration(xs in prop::collection::vec((0i64..4, 0i64..4, 1u64..3), 0..6)) {
        let fam = BidegreeFamily::from_slices(6, |q| xs.iter().filter(|t| t.1 == q).map(|&(dp, q, n)| (2 * q + dp, n)).collect());
        prop_assert!(fam.is_psf());
        let h = BidegreeFamily::h_mgl(6);
        let s = fam.smash(&h);
        prop_assert!(s.is_psf());
        prop_assert_eq!(&s, &brute_smash(&fam, &h));
    }

    #[test]
    fn coaction_is_multiplicative(i in 0usize..30, j in 0usize..30) {
        let c = MglComodule::new(3, 12);
        let monos: Vec<_> = (0..=6).flat_map(b_monomials).collect();
        let (u, v) = (c.monomial(&monos[i]), c.monomial(&monos[j]));
        let lhs = c.coaction(&(&u * &v)).unwrap();
        prop_assert_eq!(lhs, c.coaction(&u).unwrap().mul(&c.coaction(&v).unwrap()));
    }
}

#[test]
fn generic_bockstein_reported() {
    let ctx = SteenrodContext::new(2, Mode::Generic, 10).unwrap();
    let reports: Vec<_> =
        ctx.window_bidegrees().keys().map(|b| ker_bockstein_basis(&ctx, b.p, b.q).unwrap()).collect();
    assert_eq!(reports.len(), ctx.window_bidegrees().len());
    assert!(reports.iter().all(|r| r.annihilated));
}

#[test]
fn family_json_round_trip() {
    let h = BidegreeFamily::h_mgl(4);
    let s = serde_json::to_string(&h).unwrap();
    assert!(s.contains("[8,4,5]"));
    assert_eq!(serde_json::from_str::<BidegreeFamily>(&s).unwrap(), h);
}
