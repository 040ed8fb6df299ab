//! The universal formal group law, ℓ-series, typical elements and an
//! adequate generating set for the Lazard ring.

use msa::lazard::{canonical_typical, ell_series, find_adequate_generators, is_ell_typical, lazard_index_coefficient, FglModel, LazardLattice};

fn main() -> msa::Result<()> {
    let model = FglModel::get(4)?;
    for (i, j) in [(1, 1), (1, 2), (2, 2)] {
        println!("a[{i},{j}] = {}", model.fgl_coefficient(i, j)?);
    }
    let two = ell_series(2, 4)?;
    for k in 1..=4 {
        println!("[2](x) coefficient of x^{k}: {}", two.coefficient(k)?);
    }

    let lat = LazardLattice::new(8)?;
    for (ell, r) in [(2, 1), (2, 2), (3, 1)] {
        let v = canonical_typical(ell, r, &lat)?;
        println!(
            "v({ell},{r}) = {}  index {}  typical {}",
            v.image,
            lazard_index_coefficient(&v),
            is_ell_typical(&v, ell)?.typical
        );
    }

    let gens = find_adequate_generators(6)?;
    for (n, a) in &gens.elements {
        println!("a{n}: index {}  {}", lazard_index_coefficient(a), a.image);
    }
    gens.revalidate()?;
    Ok(())
}
