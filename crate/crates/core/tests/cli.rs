use std::process::Command;
use std::sync::{Arc, OnceLock};

use msa::cli::{parse_e_r, Common, Settings};
use msa::emit::*;
use msa::mgl::MglComodule;
use msa::ops::OperationAlgebra;
use msa::steenrod::{MilnorMonomial, Mode, SteenrodContext};
use msa::verify::{parse_suites, run_verify, Suite, VerifyConfig};
use proptest::prelude::*;

fn msa(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_msa")).args(args).env_remove("MSA_ELL").output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn exit_codes() {
    assert_eq!(msa(&["verify", "--suite", "hopf", "--max-p", "16"]).0, 0);
    let (code, _, err) = msa(&["verify", "--suite", "cartan", "--ell", "7", "--max-p", "10"]);
    assert_eq!(code, 2);
    assert!(err.contains("below the degree 12"));
    assert_eq!(msa(&["verify", "--suite", "cartan", "--ell", "7"]).0, 0);
    assert_eq!(msa(&["delta", "xi1", "--bogus"]).0, 2);
    assert_eq!(msa(&["delta", "xi1 +"]).0, 2);
    assert_eq!(msa(&["verify", "--suite", "nonsense"]).0, 2);
    assert_eq!(msa(&["verify", "--suite", "hopf", "--ell", "4"]).0, 2);
    assert_eq!(msa(&["verify", "--suite", "hopf", "--ell", "3", "--mode", "generic"]).0, 2);
}

#[test]
fn suite_all_reports_only_the_generic_cartan_deviation() {
    let (code, out, _) = msa(&["verify", "--suite", "all", "--max-weight", "6", "--ell", "2,3"]);
    assert_eq!(code, 1);
    let failed: Vec<&str> = out.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(failed.len(), 1, "{out}");
    assert!(failed[0].contains("cartan") && failed[0].contains("generic"));
    assert_eq!(msa(&["verify", "--suite", "all", "--mode", "specialized", "--ell", "2,3"]).0, 0);
}

#[test]
fn stable_output_is_deterministic() {
    let args = ["verify", "--suite", "hopf,psf,mgl", "--format", "json", "--stable-output", "--seed", "7"];
    let (a, b) = (msa(&args), msa(&args));
    assert_eq!(a.1, b.1);
    assert!(!a.1.contains("elapsed_ms"));
    let v: serde_json::Value = serde_json::from_str(&a.1).unwrap();
    assert_eq!(v["passed"], true);
    assert!(msa(&["verify", "--suite", "psf", "--format", "json"]).1.contains("elapsed_ms"));
}

#[test]
fn subcommands() {
    let (code, out, _) = msa(&["op-product", "Q0*tau", "--ell", "2"]);
    assert_eq!((code, out.trim()), (0, "(rho) + (tau)*Q0"));
    let (_, out, _) = msa(&["op-product", "Q0*tau - tau*Q0"]);
    assert_eq!(out.trim(), "(rho)");
    let (_, out, _) = msa(&["delta", "tau1*xi2", "--ell", "2", "--mode", "generic", "--format", "json"]);
    let doc: TensorJson = serde_json::from_str(&out).unwrap();
    assert!(doc.terms.iter().any(|t| t.left == "xi2" && t.right == "tau1" && t.coeff == "1"));
    let (_, out, _) = msa(&["delta", "xi1", "--format", "csv"]);
    assert_eq!(out, "left,right,coeff\n1,xi1,1\nxi1,1,1\n");
    let (code, out, _) = msa(&["leftideal", "--expand", "E=e1,R=(2)"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("Q1*P[2] = "));
    assert_eq!(msa(&["pair", "Q0", "tau0"]).1.trim(), "1");
    assert_eq!(msa(&["cartan", "--check", "--max-p", "20"]).0, 1);
    assert_eq!(msa(&["cartan", "--check", "--mode", "specialized", "--max-p", "20"]).0, 0);
    let (_, out, _) = msa(&["cartan", "Q1"]);
    assert!(out.contains("agrees: true"));
    let (_, out, _) = msa(&["mgl", "--coaction", "b3", "--ell", "2"]);
    assert_eq!(out.trim(), "1⊗b3 + xi2⊗1 + xi1⊗b2 + xi1^2⊗b1");
    let (code, out, _) = msa(&["mgl", "--gtilde", "--weight", "2", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("source,xi1^2⊗1,1⊗b'2\nb2,0,1\n"));
    let (code, out, _) = msa(&["typical", "--ell", "2", "--r", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("index coefficient = 14"));
    assert!(msa(&["fgl", "--weight", "2"]).1.contains("[1,1] 2*b1"));
    assert!(msa(&["psf", "--max-q", "3"]).1.contains("psf: true"));
}

#[test]
fn generator_file_round_trip() {
    let dir = std::env::temp_dir().join(format!("msa-gens-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gens.json");
    let p = path.to_str().unwrap();
    let (code, out, _) = msa(&["lazard", "--find-generators", "6", "--ell-check", "2,3,5", "--out", p]);
    assert_eq!(code, 0);
    assert!(out.contains("3-typical: true"));
    assert_eq!(msa(&["mgl", "--gtilde", "--weight", "4", "--gens", p]).0, 0);
    assert_eq!(msa(&["verify", "--suite", "mgl", "--max-weight", "6", "--gens", p]).0, 0);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn config_precedence() {
    let dir = std::env::temp_dir().join(format!("msa-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("msa.toml");
    std::fs::write(&cfg, "ell = 3\nmax-p = 12\nformat = \"json\"\n").unwrap();
    let common = |ell: Option<&str>| Common {
        ell: ell.map(String::from),
        config: Some(cfg.clone()),
        ..Common::default()
    };
    let s = Settings::resolve(&common(None), Some("5".into())).unwrap();
    assert_eq!((s.ells.clone(), s.max_p), (vec![3], Some(12)));
    let s = Settings::resolve(&common(Some("2")), Some("5".into())).unwrap();
    assert_eq!(s.ells, vec![2]);
    let s = Settings::resolve(&Common::default(), Some("5".into())).unwrap();
    assert_eq!(s.ells, vec![5]);
    assert_eq!(Settings::resolve(&Common::default(), None).unwrap().ells, vec![2]);

    let c = cfg.to_str().unwrap();
    let (_, out, _) = msa(&["delta", "xi1", "--config", c]);
    assert!(out.contains("\"ell\": 3"));
    let out = Command::new(env!("CARGO_BIN_EXE_msa")).args(["delta", "xi1", "--format", "json"]).env("MSA_ELL", "3").output().unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().contains("\"ell\": 3"));

    std::fs::write(&cfg, "ell = 3\ncolour = \"red\"\n").unwrap();
    assert_eq!(msa(&["delta", "xi1", "--config", c]).0, 2);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn e_r_specs() {
    assert_eq!(parse_e_r("E=e1,R=(2)").unwrap(), MilnorMonomial::from_parts(&[1], &[2]));
    assert_eq!(parse_e_r("E=e0+e2, R=(1,0,1)").unwrap(), MilnorMonomial::from_parts(&[0, 2], &[1, 0, 1]));
    assert_eq!(parse_e_r("E={0,1}").unwrap(), MilnorMonomial::from_parts(&[0, 1], &[]));
    assert!(parse_e_r("R=(1)").is_err());
}

#[test]
fn verify_library_interface() {
    let cfg = VerifyConfig { ells: vec![2], max_p: Some(8), ..VerifyConfig::default() };
    let rep = run_verify(&parse_suites("hopf,leftideal").unwrap(), &cfg).unwrap();
    assert!(rep.passed);
    assert!(rep.suite_passed(Suite::Leftideal));
    assert_eq!(parse_suites("all").unwrap().len(), Suite::ALL.len());
}

struct Fixtures {
    generic: Arc<OperationAlgebra>,
    odd: Arc<OperationAlgebra>,
    mgl: MglComodule,
}

fn fixtures() -> &'static Fixtures {
    static F: OnceLock<Fixtures> = OnceLock::new();
    F.get_or_init(|| Fixtures {
        generic: Arc::new(OperationAlgebra::new(Arc::new(SteenrodContext::new(2, Mode::Generic, 12).unwrap()))),
        odd: Arc::new(OperationAlgebra::new(Arc::new(SteenrodContext::new(3, Mode::Specialized, 20).unwrap()))),
        mgl: MglComodule::new(3, 6),
    })
}

fn coefficient(alg: &OperationAlgebra, c: &[(u32, u32, i64)]) -> msa::algebra::GradedPoly {
    let ctx = alg.context();
    let mut a = ctx.a_zero();
    for &(i, j, k) in c {
        let mono = if ctx.mode() == Mode::Generic { &ctx.rho().pow(i) * &ctx.tau().pow(j) } else { ctx.a_one() };
        a = &a + &mono.scale(k);
    }
    a
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn json_round_trip(kind in 0u8..5, picks in prop::collection::vec((0usize..400, prop::collection::vec((0u32..3, 0u32..3, -3i64..4), 1..3)), 0..5)) {
        let f = fixtures();
        let alg = if kind % 2 == 0 { &f.generic } else { &f.odd };
        let ctx = alg.context();
        let basis = ctx.basis_up_to(ctx.max_p());
        match kind {
            0 | 1 => {
                let mut g = ctx.gamma_zero();
                for (i, c) in &picks {
                    g.add_term(basis[i % basis.len()].clone(), coefficient(alg, c));
                }
                let s = serde_json::to_string(&gamma_json(ctx, &g)).unwrap();
                let back: ElementJson = serde_json::from_str(&s).unwrap();
                prop_assert_eq!(gamma_from_json(&back, ctx).unwrap(), g);
            }
            2 | 3 => {
                let mut x = msa::ops::OperationElement::zero();
                for (i, c) in &picks {
                    x.add_term(basis[i % basis.len()].clone(), coefficient(alg, c));
                }
                let s = serde_json::to_string(&op_json(alg, &x)).unwrap();
                let back: ElementJson = serde_json::from_str(&s).unwrap();
                prop_assert_eq!(op_from_json(&back, alg).unwrap(), x);
            }
            _ => {
                let monos: Vec<_> = (0..=6).flat_map(msa::mgl::b_monomials).collect();
                let mut x = f.mgl.b(0).scale(0);
                for (i, c) in &picks {
                    x = &x + &f.mgl.monomial(&monos[i % monos.len()]).scale(c[0].2);
                }
                let s = serde_json::to_string(&mgl_json(3, &x)).unwrap();
                let back: ElementJson = serde_json::from_str(&s).unwrap();
                prop_assert_eq!(mgl_from_json(&back, &f.mgl).unwrap(), x);
            }
        }
    }

    #[test]
    fn tensor_json_round_trip(i in 0usize..200) {
        let ctx = fixtures().generic.context();
        let basis = ctx.basis_up_to(ctx.max_p());
        let t = ctx.delta_monomial(&basis[i % basis.len()]);
        let s = serde_json::to_string(&tensor_json(ctx, &t)).unwrap();
        prop_assert_eq!(&tensor_from_json(&serde_json::from_str(&s).unwrap(), ctx).unwrap(), &*t);
    }
}
