//! Bidegree bookkeeping for pure Tate-type families and their smash products.

use msa::mgl::BidegreeFamily;

fn main() {
    let h = BidegreeFamily::h_mgl(6);
    for q in 0..=6 {
        println!("H(MGL) slice {q}: {} cells", h.slice(q));
    }
    let pt = BidegreeFamily::from_members(6, [(0, 0), (3, 1)]);
    let s = pt.smash(&h);
    println!("smash psf: {}", s.is_psf());
    println!("{}", serde_json::to_string(&s).unwrap());
}
