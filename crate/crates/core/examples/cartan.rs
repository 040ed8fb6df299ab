//! Operation products in the Milnor basis and the Cartan formulas.

use std::sync::Arc;

use msa::expr::{eval_op, parse};
use msa::ops::{cartan_check, transposed_coproduct, OperationAlgebra};
use msa::steenrod::{MilnorMonomial, Mode, SteenrodContext};

fn main() -> msa::Result<()> {
    let alg = OperationAlgebra::new(Arc::new(SteenrodContext::new(2, Mode::Generic, 16)?));
    for src in ["Q0*tau", "Q0*tau - tau*Q0", "P[1]*P[1]", "P[2]*P[1]", "Q0*Q0"] {
        println!("{src} = {}", eval_op(&parse(src)?, &alg)?);
    }
    let p2 = MilnorMonomial::from_parts(&[], &[2]);
    println!("Δ(P[2]) = {}", transposed_coproduct(&alg, &p2));

    for mode in [Mode::Specialized, Mode::Generic] {
        let alg = OperationAlgebra::new(Arc::new(SteenrodContext::new(2, mode, 16)?));
        let rep = cartan_check(&alg, 16);
        println!("ℓ=2 {mode}: {} operations, {} mismatched", rep.entries.len(), rep.mismatches().count());
        for e in rep.mismatches().take(2) {
            println!("  {}: closed formula minus coproduct = {}", e.operation, e.difference);
        }
    }
    Ok(())
}
