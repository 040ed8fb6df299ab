//! The `msa` command line.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::emit::{
    coaction_json, element_csv, gamma_json, matrix_csv, mgl_json, op_json, op_tensor_json, tensor_csv, tensor_json,
    ElementJson, TensorJson,
};
use crate::error::{Error, Result};
use crate::expr::{eval_gamma, eval_mgl, eval_op, parse};
use crate::lazard::{
    canonical_typical, ell_series, find_adequate_generators, index_rule_holds, is_ell_typical, lazard_index_coefficient,
    prime_power, FglModel, GeneratorSet, LazardLattice,
};
use crate::mgl::{g_tilde_matrix, quotient_homology_basis, BidegreeFamily, MglComodule};
use crate::ops::{
    all_q_indices, cartan_check, cartan_p_formula, cartan_q_formula, leftideal_expand, quotient_rank,
    transposed_coproduct, OperationAlgebra,
};
use crate::steenrod::{MilnorMonomial, Mode, SteenrodContext};
use crate::verify::{parse_suites, run_verify, VerifyConfig};

pub const ELL_ENV: &str = "MSA_ELL";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Debug, Default, Args)]
pub struct Common {
    /// Prime ℓ, or a comma-separated list for `verify` (default from MSA_ELL, else 2)
    #[arg(long, global = true)]
    pub ell: Option<String>,
    /// generic or specialized
    #[arg(long, global = true)]
    pub mode: Option<String>,
    /// First-degree window p ≤ max-p
    #[arg(long, global = true)]
    pub max_p: Option<i64>,
    #[arg(long, global = true)]
    pub max_weight: Option<u32>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// TOML file with the same keys as the flags
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Generator set JSON written by `msa lazard --find-generators N --out FILE`
    #[arg(long, global = true)]
    pub gens: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(name = "msa", version, about = "Exact computations in the dual motivic Steenrod algebra, the Lazard ring and H_**MGL")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coproduct of an element of Γ
    Delta { expr: String },
    /// Product in Γ
    Product { exprs: Vec<String> },
    /// Product in the operation algebra
    OpProduct { exprs: Vec<String> },
    /// Pairing ⟨operation, element of Γ⟩
    Pair { op: String, gamma: String },
    /// Transposed coproduct of a basis operation, or `--check` over the window
    Cartan {
        op: Option<String>,
        #[arg(long)]
        check: bool,
    },
    /// Expansion of ρ(E,R) through P^R Q(E), e.g. --expand 'E=e1,R=(2)'
    Leftideal {
        #[arg(long)]
        expand: Option<String>,
        /// Rank of the quotient by all Q_i in bidegree P,Q
        #[arg(long, value_name = "P,Q")]
        rank: Option<String>,
    },
    /// Coefficients of the universal formal group law
    Fgl {
        #[arg(long, default_value_t = 4)]
        weight: u32,
        /// Print the ℓ-series for this ℓ instead
        #[arg(long)]
        ell_series: Option<u32>,
    },
    /// Adequate generators of the Lazard ring
    Lazard {
        #[arg(long, value_name = "N")]
        find_generators: u32,
        #[arg(long, value_name = "L1,L2,...")]
        ell_check: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The canonical ℓ-typical element in weight ℓ^r − 1
    Typical {
        #[arg(long)]
        r: u32,
    },
    /// The comodule H_**MGL
    Mgl {
        #[arg(long, value_name = "EXPR")]
        coaction: Option<String>,
        #[arg(long)]
        gtilde: bool,
        #[arg(long, value_name = "N1,N2,...")]
        quotient: Option<String>,
        #[arg(long)]
        weight: Option<u32>,
    },
    /// Bidegree family of H∧MGL and its smash square
    Psf {
        #[arg(long)]
        max_q: Option<i64>,
    },
    /// Run verification suites
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Omit timings so repeated runs are byte-identical
        #[arg(long)]
        stable_output: bool,
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct ConfigFile {
    ell: Option<toml::Value>,
    mode: Option<String>,
    max_p: Option<i64>,
    max_weight: Option<u32>,
    format: Option<Format>,
    seed: Option<u64>,
    gens: Option<PathBuf>,
}

/// Options after merging flags, config file and environment.
#[derive(Clone, Debug)]
pub struct Settings {
    pub ells: Vec<u32>,
    /// Whether ℓ came from a flag, the config file or the environment.
    pub ell_given: bool,
    pub mode: Option<Mode>,
    pub max_p: Option<i64>,
    pub max_weight: Option<u32>,
    pub format: Format,
    pub seed: u64,
    pub gens: Option<PathBuf>,
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| Error::Config(format!("invalid {what} `{x}`"))))
        .collect()
}

impl Settings {
    /// Flags take precedence over the config file, which takes precedence
    /// over `MSA_ELL`.
    pub fn resolve(common: &Common, env_ell: Option<String>) -> Result<Settings> {
        let file: ConfigFile = match &common.config {
            Some(p) => {
                let s = std::fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
                toml::from_str(&s).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?
            }
            None => ConfigFile::default(),
        };
        let file_ell = match file.ell {
            None => None,
            Some(toml::Value::Integer(n)) => Some(n.to_string()),
            Some(toml::Value::String(s)) => Some(s),
            Some(toml::Value::Array(a)) => Some(a.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")),
            Some(v) => return Err(Error::Config(format!("invalid ell `{v}`"))),
        };
        let ell_src = common.ell.clone().or(file_ell).or(env_ell);
        let ell_given = ell_src.is_some();
        let ells = match ell_src {
            Some(s) => parse_list(&s, "ℓ")?,
            None => vec![2],
        };
        if ells.is_empty() {
            return Err(Error::Config("empty ℓ list".into()));
        }
        let mode = common.mode.clone().or(file.mode).map(|m| m.parse().map_err(|e: Error| Error::Config(e.to_string()))).transpose()?;
        Ok(Settings {
            ells,
            ell_given,
            mode,
            max_p: common.max_p.or(file.max_p),
            max_weight: common.max_weight.or(file.max_weight),
            format: common.format.or(file.format).unwrap_or(Format::Text),
            seed: common.seed.or(file.seed).unwrap_or(0),
            gens: common.gens.clone().or(file.gens),
        })
    }

    fn ell(&self) -> Result<u32> {
        match self.ells.as_slice() {
            [l] => Ok(*l),
            _ => Err(Error::Config("this command takes a single ℓ".into())),
        }
    }

    fn mode(&self, ell: u32) -> Mode {
        self.mode.unwrap_or(if ell == 2 { Mode::Generic } else { Mode::Specialized })
    }

    fn context(&self, default_max_p: i64) -> Result<Arc<SteenrodContext>> {
        let ell = self.ell()?;
        let ctx = SteenrodContext::new(ell, self.mode(ell), self.max_p.unwrap_or(default_max_p))
            .map_err(|e| Error::Config(e.to_string()))?;
        Ok(Arc::new(ctx))
    }

    fn generators(&self, n: u32) -> Result<GeneratorSet> {
        match &self.gens {
            Some(p) => {
                let s = std::fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
                GeneratorSet::from_json(&s)
            }
            None => find_adequate_generators(n),
        }
    }
}

/// What a command produced: text, plus JSON and CSV renderings where they
/// make sense.
pub struct Output {
    pub text: String,
    pub json: serde_json::Value,
    pub csv: Option<String>,
    pub code: i32,
}

impl Output {
    fn new(text: String, json: impl Serialize) -> Output {
        Output { text, json: serde_json::to_value(json).expect("serializable"), csv: None, code: 0 }
    }

    fn element(doc: ElementJson) -> Output {
        let csv = element_csv(&doc);
        Output { csv: Some(csv), ..Output::new(doc.text.clone(), &doc) }
    }

    fn tensor(doc: TensorJson) -> Output {
        let csv = tensor_csv(&doc);
        Output { csv: Some(csv), ..Output::new(doc.text.clone(), &doc) }
    }

    pub fn render(&self, format: Format) -> Result<String> {
        Ok(match format {
            Format::Text => self.text.clone(),
            Format::Json => serde_json::to_string_pretty(&self.json).expect("json"),
            Format::Csv => self.csv.clone().ok_or_else(|| Error::Config("no CSV form for this output".into()))?,
        })
    }
}

/// `E=e0 e1,R=(2,1)`; `E` may list indices as `e1+e2`, `e1*e2`, `e1 e2` or `{1,2}`.
pub fn parse_e_r(spec: &str) -> Result<MilnorMonomial> {
    let bad = || Error::Config(format!("expected `E=e1,R=(r1,...)`, got `{spec}`"));
    let spec = spec.replace(' ', "");
    let (e, r) = match spec.find("R=") {
        Some(i) => (spec[..i].trim_end_matches(','), &spec[i + 2..]),
        None => (spec.as_str(), ""),
    };
    let e = e.strip_prefix("E=").ok_or_else(bad)?;
    let e = e.trim_start_matches('{').trim_end_matches('}');
    let taus: Vec<u32> = e
        .split(['+', '*', ','])
        .filter(|x| !x.is_empty() && *x != "∅")
        .map(|x| x.trim_start_matches('e').parse().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let r = r.trim_start_matches('(').trim_end_matches(')');
    let r: Vec<u32> = parse_list(r, "R entry")?;
    Ok(MilnorMonomial::from_parts(&taus, &r))
}

fn basis_monomial(alg: &OperationAlgebra, src: &str) -> Result<MilnorMonomial> {
    let x = eval_op(&parse(src)?, alg)?;
    let mut it = x.terms();
    match (it.next(), it.next()) {
        (Some((m, a)), None) if a.as_constant() == Some(1.into()) => Ok(m.clone()),
        _ => Err(Error::Config(format!("`{src}` is not a basis operation"))),
    }
}

/// Runs one parsed command.
pub fn execute(cli: &Cli, env_ell: Option<String>) -> Result<Output> {
    let s = Settings::resolve(&cli.common, env_ell)?;
    match &cli.command {
        Command::Delta { expr } => {
            let ctx = s.context(16)?;
            let g = eval_gamma(&parse(expr)?, &ctx)?;
            Ok(Output::tensor(tensor_json(&ctx, &ctx.coproduct(&g)?)))
        }
        Command::Product { exprs } => {
            let ctx = s.context(16)?;
            let mut acc = ctx.gamma_one();
            for e in exprs {
                acc = ctx.mul(&acc, &eval_gamma(&parse(e)?, &ctx)?);
            }
            Ok(Output::element(gamma_json(&ctx, &acc)))
        }
        Command::OpProduct { exprs } => {
            let alg = OperationAlgebra::new(s.context(16)?);
            let mut acc = alg.identity();
            for e in exprs {
                acc = alg.op_product(&acc, &eval_op(&parse(e)?, &alg)?)?;
            }
            Ok(Output::element(op_json(&alg, &acc)))
        }
        Command::Pair { op, gamma } => {
            let alg = OperationAlgebra::new(s.context(16)?);
            let phi = eval_op(&parse(op)?, &alg)?;
            let g = eval_gamma(&parse(gamma)?, alg.context())?;
            let v = alg.pairing(&phi, &g);
            Ok(Output::new(v.to_string(), serde_json::json!({ "pairing": v.to_string() })))
        }
        Command::Cartan { op, check } => {
            let alg = OperationAlgebra::new(s.context(16)?);
            if *check || op.is_none() {
                let p1 = 2 * (alg.context().ell() as i64 - 1);
                if alg.context().max_p() < p1 {
                    return Err(Error::Config(format!("window p ≤ {} is below the degree {p1} of P^1", alg.context().max_p())));
                }
                let rep = cartan_check(&alg, alg.context().max_p());
                let mut text = String::new();
                for e in &rep.entries {
                    let status = if e.matches { "ok" } else if e.matches_mod_rho { "differs by rho-multiples" } else { "DIFFERS" };
                    text.push_str(&format!("{}: {} terms, {status}\n", e.operation, e.terms));
                    if !e.matches {
                        text.push_str(&format!("  computed - formula = {}\n", e.difference));
                    }
                }
                let mut out = Output::new(text, &rep);
                out.code = if rep.passed() { 0 } else { 1 };
                return Ok(out);
            }
            let m = basis_monomial(&alg, op.as_deref().expect("op"))?;
            let computed = transposed_coproduct(&alg, &m);
            let formula = if m.is_pure_xi() {
                Some(cartan_p_formula(&alg, &m.r))
            } else if m.tau_count() == 1 && m.r.is_empty() {
                Some(cartan_q_formula(&alg, m.taus().next().expect("tau")))
            } else {
                None
            };
            let mut out = Output::tensor(op_tensor_json(&alg, &computed));
            if let Some(f) = formula {
                let agrees = f == computed;
                out.text.push_str(&format!("\nformula: {}\nagrees: {agrees}", f));
                out.json["formula"] = serde_json::to_value(op_tensor_json(&alg, &f)).expect("json");
                out.json["agrees"] = agrees.into();
            }
            Ok(out)
        }
        Command::Leftideal { expand, rank } => {
            let alg = OperationAlgebra::new(s.context(16)?);
            if let Some(spec) = expand {
                let m = parse_e_r(spec)?;
                let exp = leftideal_expand(&alg, &m)?;
                let round = exp.evaluate(&alg)? == alg.basis(m.clone());
                let terms: Vec<_> = exp
                    .terms()
                    .map(|((r, e), a)| serde_json::json!({ "r": r.op_string(), "e": e.op_string(), "coeff": a.to_string() }))
                    .collect();
                let json = serde_json::json!({ "target": m.op_string(), "expansion": exp.to_string(), "terms": terms, "round_trip": round });
                let csv = crate::emit::matrix_csv(
                    "r",
                    &["e".into(), "coeff".into()],
                    &exp.terms().map(|((r, e), a)| (r.op_string(), vec![e.op_string(), a.to_string()])).collect::<Vec<_>>(),
                );
                let mut out = Output::new(format!("{} = {}", m.op_string(), exp), json);
                out.csv = Some(csv);
                out.code = if round { 0 } else { 1 };
                return Ok(out);
            }
            if let Some(pq) = rank {
                let v: Vec<i64> = parse_list(pq, "bidegree")?;
                let [p, q] = v[..] else { return Err(Error::Config("expected --rank P,Q".into())) };
                let qs = all_q_indices(&alg, alg.context().max_p());
                let n = quotient_rank(&alg, &qs, p, q)?;
                return Ok(Output::new(n.to_string(), serde_json::json!({ "p": p, "q": q, "rank": n })));
            }
            Err(Error::Config("leftideal needs --expand or --rank".into()))
        }
        Command::Fgl { weight, ell_series: l } => {
            let m = FglModel::get(*weight)?;
            let series = match l {
                Some(l) => ell_series(*l, *weight)?,
                None => m.fgl().clone(),
            };
            let mut rows = Vec::new();
            for (&(i, j), c) in series.coefficients() {
                if !c.is_zero() {
                    rows.push((format!("{i},{j}"), c.to_string()));
                }
            }
            let text = rows.iter().map(|(k, c)| format!("[{k}] {c}")).collect::<Vec<_>>().join("\n");
            let json: Vec<_> = rows.iter().map(|(k, c)| serde_json::json!({ "index": k, "coeff": c })).collect();
            let mut out = Output::new(text, json);
            out.csv = Some(crate::emit::matrix_csv("index", &["coeff".into()], &rows.iter().map(|(k, c)| (k.clone(), vec![c.clone()])).collect::<Vec<_>>()));
            Ok(out)
        }
        Command::Lazard { find_generators, ell_check, out } => {
            let g = find_adequate_generators(*find_generators)?;
            g.revalidate()?;
            if let Some(p) = out {
                std::fs::write(p, g.to_json()?).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
            }
            let ells: Vec<u32> = match ell_check {
                Some(l) => parse_list(l, "ℓ")?,
                None => Vec::new(),
            };
            let mut text = String::new();
            let mut checks = Vec::new();
            let mut ok = true;
            for (n, a) in &g.elements {
                let idx = lazard_index_coefficient(a);
                let rule = index_rule_holds(*n, &idx);
                ok &= rule && g.certificate[n].passes();
                text.push_str(&format!("a{n} = {}  ->  {}  [index {idx}, rule {}]\n", a.provenance, a.image, if rule { "ok" } else { "FAILS" }));
                for &l in &ells {
                    if prime_power(*n as u64 + 1).is_some_and(|(p, _)| p == l as u64) {
                        let rep = is_ell_typical(a, l)?;
                        ok &= rep.typical;
                        text.push_str(&format!("  {l}-typical: {}\n", rep.typical));
                        checks.push(serde_json::json!({ "weight": n, "ell": l, "typical": rep.typical }));
                    }
                }
            }
            let doc: serde_json::Value = serde_json::from_str(&g.to_json()?).expect("generator json");
            let mut o = Output::new(text, serde_json::json!({ "generators": doc, "ell_check": checks }));
            o.code = if ok { 0 } else { 1 };
            Ok(o)
        }
        Command::Typical { r } => {
            let ell = s.ell()?;
            let n = ell.pow(*r) - 1;
            let lat = LazardLattice::new(n.max(1))?;
            let v = canonical_typical(ell, *r, &lat)?;
            let rep = is_ell_typical(&v, ell)?;
            let idx = lazard_index_coefficient(&v);
            let text = format!("v = {}\nprovenance = {}\nindex coefficient = {idx}\ntypical: {}", v.image, v.provenance, rep.typical);
            let mut o = Output::new(
                text,
                serde_json::json!({ "ell": ell, "r": r, "image": v.image.to_string(), "provenance": v.provenance.to_string(), "index_coefficient": idx.to_string(), "typicality": rep }),
            );
            o.code = if rep.typical { 0 } else { 1 };
            Ok(o)
        }
        Command::Mgl { coaction, gtilde, quotient, weight } => {
            let ell = s.ell()?;
            let max_w = s.max_weight.unwrap_or(6);
            if let Some(e) = coaction {
                let c = MglComodule::new(ell, max_w);
                let x = eval_mgl(&parse(e)?, &c)?;
                let mut out = Output::tensor(coaction_json(ell, &c.coaction(&x)?));
                out.json["element"] = serde_json::to_value(mgl_json(ell, &x)).expect("json");
                return Ok(out);
            }
            let w = weight.ok_or_else(|| Error::Config("--weight is required".into()))?;
            let gens = s.generators(max_w.max(w))?;
            if *gtilde {
                let m = g_tilde_matrix(ell, &gens, w)?;
                let mut text = format!("weight {w}, ℓ = {ell}, invertible: {}\n", m.invertible);
                text.push_str(&m.to_csv());
                if let Some(f) = &m.f_tilde {
                    text.push_str(&format!("f~ = {f}\n"));
                }
                let csv = m.to_csv();
                let mut o = Output::new(text, &m);
                o.csv = Some(csv);
                o.code = if m.invertible { 0 } else { 1 };
                return Ok(o);
            }
            if let Some(x) = quotient {
                let x: Vec<u32> = parse_list(x, "generator index")?;
                let q = quotient_homology_basis(ell, &gens, &x, w)?;
                return Ok(Output::new(format!("rank {}: {}", q.rank, q.basis.join(", ")), &q));
            }
            Err(Error::Config("mgl needs --coaction, --gtilde or --quotient".into()))
        }
        Command::Psf { max_q } => {
            let q = max_q.or(s.max_weight.map(i64::from)).unwrap_or(6);
            let h = BidegreeFamily::h_mgl(q);
            let sq = h.smash(&h);
            let text = format!(
                "H∧MGL: {}\npsf: {}\nsquare: {}\npsf: {}",
                h.counts.iter().map(|((p, q), n)| format!("({p},{q})x{n}")).collect::<Vec<_>>().join(" "),
                h.is_psf(),
                sq.counts.iter().map(|((p, q), n)| format!("({p},{q})x{n}")).collect::<Vec<_>>().join(" "),
                sq.is_psf()
            );
            let rows: Vec<(String, Vec<String>)> =
                h.counts.iter().map(|((p, q), n)| (p.to_string(), vec![q.to_string(), n.to_string()])).collect();
            let mut o = Output::new(text, serde_json::json!({ "family": h, "psf": h.is_psf(), "square": sq }));
            o.csv = Some(matrix_csv("p", &["q".into(), "count".into()], &rows));
            Ok(o)
        }
        Command::Verify { suite, stable_output, samples } => {
            let suites = parse_suites(suite)?;
            let mut cfg = VerifyConfig { modes: s.mode.map(|m| vec![m]), max_p: s.max_p, seed: s.seed, gens_path: s.gens.clone(), ..VerifyConfig::default() };
            if s.ell_given {
                cfg.ells = s.ells.clone();
            }
            if let Some(w) = s.max_weight {
                cfg.max_weight = w;
                cfg.lazard_weight = cfg.lazard_weight.max(w);
            }
            if let Some(n) = samples {
                cfg.samples = *n;
            }
            let rep = run_verify(&suites, &cfg)?;
            let rep = if *stable_output { rep.stable() } else { rep };
            let mut o = Output::new(rep.to_text(), &rep);
            o.code = rep.exit_code();
            Ok(o)
        }
    }
}

/// Parses arguments, runs, prints, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let env_ell = std::env::var(ELL_ENV).ok();
    let format = Settings::resolve(&cli.common, env_ell.clone()).map(|s| s.format).unwrap_or(Format::Text);
    match execute(&cli, env_ell).and_then(|o| Ok((o.render(format)?, o.code))) {
        Ok((text, code)) => {
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", text.trim_end());
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
