//! Expanding ρ(E,R) through the left ideal generated by the Q_i, and the
//! rank of the quotient by that ideal.

use std::sync::Arc;

use msa::ops::{all_q_indices, leftideal_expand, quotient_rank, OperationAlgebra};
use msa::steenrod::{MilnorMonomial, Mode, SteenrodContext};

fn main() -> msa::Result<()> {
    let alg = OperationAlgebra::new(Arc::new(SteenrodContext::new(2, Mode::Generic, 16)?));
    for (e, r) in [(&[1u32][..], &[2u32][..]), (&[0, 1], &[1]), (&[0], &[0, 1])] {
        let m = MilnorMonomial::from_parts(e, r);
        let x = leftideal_expand(&alg, &m)?;
        println!("{} = {x}", m.op_string());
        assert_eq!(x.evaluate(&alg)?, alg.basis(m));
    }
    let qs = all_q_indices(&alg, 16);
    for q in 0..=4 {
        println!("quotient rank at (p, q) = ({}, {q}): {}", 2 * q, quotient_rank(&alg, &qs, 2 * q, q)?);
    }
    Ok(())
}
