//! Running verification suites from the library and reading the report.

use msa::verify::{parse_suites, run_verify, VerifyConfig};

fn main() -> msa::Result<()> {
    let cfg = VerifyConfig { ells: vec![2, 3], max_weight: 4, ..VerifyConfig::default() };
    let report = run_verify(&parse_suites("hopf,milnor,fgl,mgl,psf")?, &cfg)?;
    print!("{}", report.stable().to_text());
    std::process::exit(report.exit_code());
}
