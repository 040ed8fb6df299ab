//! The coaction on the mod-ℓ homology of MGL and the matrices of g̃.

use msa::lazard::find_adequate_generators;
use msa::mgl::{g_tilde_matrix, pr_tau_duality_check, MglComodule};

fn main() -> msa::Result<()> {
    let c = MglComodule::new(2, 6);
    for n in 1..=3 {
        println!("Δ(b{n}) = {}", c.coaction(&c.b(n))?);
    }
    println!("comodule axioms: {}", c.verify(6)?.passed());
    println!("PRtau duality for R = (1,1): {}", pr_tau_duality_check(&c, &[1, 1])?.holds);

    let gens = find_adequate_generators(6)?;
    for w in 1..=3 {
        print!("g̃ in weight {w}:\n{}", g_tilde_matrix(2, &gens, w)?.to_csv());
    }
    Ok(())
}
