//! Coproducts and Hopf algebroid axioms for the mod-ℓ dual Steenrod algebra.

use msa::expr::{eval_gamma, parse};
use msa::steenrod::{verify_hopf_axioms, Mode, SteenrodContext};

fn main() -> msa::Result<()> {
    let ctx = SteenrodContext::new(2, Mode::Generic, 16)?;
    for src in ["xi1", "tau1", "xi2", "tau0*xi1"] {
        let g = eval_gamma(&parse(src)?, &ctx)?;
        println!("Δ({src}) = {}", ctx.coproduct(&g)?);
    }
    println!("η_R(tau) = {}", ctx.eta_r(&ctx.tau()));
    println!("χ(xi2) = {}", ctx.coinverse(&eval_gamma(&parse("xi2")?, &ctx)?));

    for (ell, mode, p) in [(2, Mode::Generic, 16), (2, Mode::Specialized, 16), (3, Mode::Specialized, 26)] {
        let ctx = SteenrodContext::new(ell, mode, p)?;
        let rep = verify_hopf_axioms(&ctx, p);
        println!("ℓ={ell} {mode} p≤{p}: {} monomials, passed = {}", rep.monomials_checked, rep.passed());
    }
    Ok(())
}
