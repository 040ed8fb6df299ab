use msa::algebra::{CoeffRing, GradedPoly};
use msa::lazard::*;
use num_bigint::BigInt;

fn z() -> CoeffRing {
    CoeffRing::Integers
}

#[test]
fn fgl_low_coefficients_and_grading() {
    let m = FglModel::get(6).unwrap();
    assert_eq!(m.fgl_coefficient(1, 1).unwrap(), b(1).scale(2));
    let c12 = &b(2).scale(3) - &(&b(1) * &b(1)).scale(2);
    assert_eq!(m.fgl_coefficient(1, 2).unwrap(), c12);
    assert_eq!(m.fgl_coefficient(1, 2).unwrap().linear_part(), b(2).scale(3));
    for i in 1..5u32 {
        for j in 1..=(5 - i) {
            let c = m.fgl_coefficient(i, j).unwrap();
            for (mono, _) in c.terms() {
                assert_eq!(c.bidegree_of(mono).q, (i + j - 1) as i64);
            }
        }
    }
}

#[test]
fn fgl_unit_and_commutativity() {
    let m = FglModel::get(6).unwrap();
    let f = m.fgl();
    assert_eq!(f.swap(), *f);
    let x = m.exp().variable(0);
    assert_eq!(f.restrict_y_zero(), x);
    assert_eq!(m.exp().compose(m.log()).unwrap(), x);
}

#[test]
fn ell_series_examples() {
    for ell in [2u32, 3, 5] {
        let s = ell_series(ell, 8).unwrap();
        assert_eq!(s.coefficient(1).unwrap(), GradedPoly::constant(b_table(), &z(), ell));
        assert!(s.with_ring(&CoeffRing::mod_u64(ell as u64)).is_zero());
    }
    assert_eq!(ell_series(2, 3).unwrap().coefficient(2).unwrap(), b(1).scale(2));
}

#[test]
fn exp_two_log_x_squared() {
    let m = FglModel::get(4).unwrap();
    let s = m.exp().compose(&m.log().scale(2)).unwrap();
    assert_eq!(s.coefficient(2).unwrap(), b(1).scale(2));
}

#[test]
fn canonical_typical_elements() {
    let lat = LazardLattice::new(8).unwrap();
    let v0 = canonical_typical(3, 0, &lat).unwrap();
    assert_eq!(v0.image.as_constant(), Some(BigInt::from(3)));
    let v1 = canonical_typical(2, 1, &lat).unwrap();
    assert_eq!(v1.image, b(1).scale(2));
    let v2 = canonical_typical(2, 2, &lat).unwrap();
    assert_eq!(lazard_index_coefficient(&v2), BigInt::from(14));
    assert!(!index_rule_holds(3, &BigInt::from(14)));
    for (ell, r) in [(2, 0), (2, 1), (2, 2), (2, 3), (3, 0), (3, 1), (3, 2), (5, 1), (7, 1)] {
        let v = canonical_typical(ell, r, &lat).unwrap();
        assert!(v.validate(&lat.model).unwrap());
        assert!(is_ell_typical(&v, ell).unwrap().typical, "({ell},{r})");
    }
}

#[test]
fn typicality_rejections() {
    let lat = LazardLattice::new(3).unwrap();
    let zero = lat.lift(1, &GradedPoly::zero(b_table(), &z())).unwrap();
    assert!(!is_ell_typical(&zero, 2).unwrap().typical);
    let v = canonical_typical(2, 1, &lat).unwrap();
    let v4 = v.scale(&BigInt::from(4));
    let rep = is_ell_typical(&v4, 2).unwrap();
    assert!(rep.vanishes_mod_ell && !rep.typical);
    let c12 = LazardElement::c(1, 2, &lat.model).unwrap();
    assert!(is_ell_typical(&c12, 2).is_err());
}

#[test]
fn index_coefficients() {
    let m = FglModel::get(3).unwrap();
    assert_eq!(lazard_index_coefficient(&LazardElement::c(1, 1, &m).unwrap()), BigInt::from(2));
    assert_eq!(lazard_index_coefficient(&LazardElement::c(1, 2, &m).unwrap()), BigInt::from(3));
}

#[test]
fn adequate_generators_to_weight_eight() {
    let g = find_adequate_generators(8).unwrap();
    assert_eq!(g.get(1).unwrap().provenance.to_string(), "c1_1");
    assert_eq!(g.get(5).unwrap().image.linear_part().terms().next().unwrap().1.magnitude().to_string(), "1");
    for (n, cert) in &g.certificate {
        assert!(cert.passes(), "weight {n}");
    }
    let back = GeneratorSet::from_json(&g.to_json().unwrap()).unwrap();
    assert_eq!(back, g);
}

#[test]
fn hl_basis_and_retraction() {
    let g = find_adequate_generators(6).unwrap();
    assert!(hl_basis_mod_ell(2, &g, 1).unwrap().is_empty());
    assert_eq!(hl_basis_mod_ell(2, &g, 0).unwrap().len(), 1);
    let w2 = hl_basis_mod_ell(2, &g, 2).unwrap();
    assert_eq!(w2.len(), 1);
    let f2 = CoeffRing::mod_u64(2);
    let b2 = b(2).with_ring(&f2);
    let b1sq = (&b(1) * &b(1)).with_ring(&f2);
    assert!(w2[0] == b2 || w2[0] == &b2 + &b1sq);

    let pi = Retraction::new(2, &g).unwrap();
    assert!(pi.apply(&b(1)).unwrap().is_zero());
    assert_eq!(pi.apply(&w2[0]).unwrap(), w2[0]);
    assert_eq!(pi.apply(&b(2)).unwrap(), w2[0]);
    assert!(retraction_pi(2, &g, &b(7)).is_err());
}
