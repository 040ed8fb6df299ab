//! The `verify` suite runner: every checkable claim, grouped into suites,
//! with a JSON report and a process exit code.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::algebra::CoeffRing;
use crate::error::{Error, Result};
use crate::lazard::{
    b, canonical_typical, ell_series, find_adequate_generators, index_rule_holds, is_ell_typical,
    lazard_index_coefficient, FglModel, GeneratorSet, LazardLattice,
};
use crate::mgl::{
    g_tilde_matrix, ker_bockstein_basis, pr_tau_duality_check, xi_projection, xi_sequences, BidegreeFamily,
    CoactionTensor, MglComodule,
};
use crate::ops::{all_q_indices, cartan_check, leftideal_expand, milnor_identities, quotient_rank, OperationAlgebra};
use crate::steenrod::{verify_hopf_axioms, MilnorMonomial, Mode, SteenrodContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Hopf,
    Cartan,
    Milnor,
    Leftideal,
    Duality,
    Fgl,
    Adequacy,
    Mgl,
    Psf,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Hopf,
        Suite::Cartan,
        Suite::Milnor,
        Suite::Leftideal,
        Suite::Duality,
        Suite::Fgl,
        Suite::Adequacy,
        Suite::Mgl,
        Suite::Psf,
    ];

    /// Suites that need `P^1` inside the window.
    fn needs_p1(self) -> bool {
        matches!(self, Suite::Cartan | Suite::Milnor | Suite::Leftideal)
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.to_string() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::Config(format!("unknown suite `{s}`")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("suite name");
        f.write_str(s.as_str().expect("string"))
    }
}

/// Parses a comma-separated suite list; `all` selects every suite.
pub fn parse_suites(s: &str) -> Result<Vec<Suite>> {
    let mut out = Vec::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        if part.trim() == "all" {
            out.extend(Suite::ALL);
        } else {
            out.push(part.parse()?);
        }
    }
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err(Error::Config("no suite selected".into()));
    }
    Ok(out)
}

/// Bounds and parameters for [`run_verify`].
#[derive(Clone, Debug, Serialize)]
pub struct VerifyConfig {
    pub ells: Vec<u32>,
    /// `None` runs both modes at `ℓ = 2` and the specialized mode otherwise.
    pub modes: Option<Vec<Mode>>,
    /// First-degree window; `None` uses 16 at `ℓ = 2`, 26 at `ℓ = 3` and
    /// `4(ℓ − 1)` otherwise.
    pub max_p: Option<i64>,
    pub max_weight: u32,
    pub lazard_weight: u32,
    pub fgl_ells: Vec<u32>,
    pub gens_path: Option<PathBuf>,
    pub seed: u64,
    pub samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            ells: vec![2, 3],
            modes: None,
            max_p: None,
            max_weight: 6,
            lazard_weight: 8,
            fgl_ells: vec![2, 3, 5],
            gens_path: None,
            seed: 0,
            samples: 64,
        }
    }
}

impl VerifyConfig {
    pub fn window(&self, ell: u32) -> i64 {
        self.max_p.unwrap_or(match ell {
            2 => 16,
            3 => 26,
            _ => 4 * (ell as i64 - 1),
        })
    }

    /// The `(ℓ, mode)` pairs to run.
    pub fn contexts(&self) -> Result<Vec<(u32, Mode)>> {
        let mut out = Vec::new();
        for &ell in &self.ells {
            let modes = match &self.modes {
                Some(m) => m.clone(),
                None if ell == 2 => vec![Mode::Generic, Mode::Specialized],
                None => vec![Mode::Specialized],
            };
            for mode in modes {
                if mode == Mode::Generic && ell != 2 {
                    return Err(Error::Config(format!("generic mode needs ℓ = 2, got ℓ = {ell}")));
                }
                out.push((ell, mode));
            }
        }
        Ok(out)
    }

    pub fn validate(&self, suites: &[Suite]) -> Result<()> {
        if self.ells.is_empty() {
            return Err(Error::Config("no ℓ given".into()));
        }
        for &ell in self.ells.iter().chain(&self.fgl_ells) {
            if !crate::steenrod::is_prime(ell) {
                return Err(Error::Config(format!("ℓ = {ell} is not prime")));
            }
        }
        self.contexts()?;
        for &ell in &self.ells {
            let p1 = 2 * (ell as i64 - 1);
            let w = self.window(ell);
            if w < 0 {
                return Err(Error::Config(format!("negative window {w}")));
            }
            if let Some(s) = suites.iter().find(|s| s.needs_p1()) {
                if w < p1 {
                    return Err(Error::Config(format!(
                        "suite {s}: window p ≤ {w} is below the degree {p1} of P^1 at ℓ = {ell}"
                    )));
                }
            }
        }
        if self.gens_path.is_none() && self.max_weight > self.lazard_weight {
            return Err(Error::Config(format!(
                "max weight {} exceeds the generator search bound {}",
                self.max_weight, self.lazard_weight
            )));
        }
        Ok(())
    }
}

/// One check in a [`VerifyReport`].
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub suite: Suite,
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    pub passed: bool,
    /// Reported-only checks do not affect the exit code.
    pub asserted: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub suites: Vec<Suite>,
    pub config: VerifyConfig,
    pub checks: Vec<CheckRecord>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl VerifyReport {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| c.asserted && !c.passed)
    }

    pub fn suite_passed(&self, suite: Suite) -> bool {
        self.checks.iter().filter(|c| c.suite == suite).all(|c| c.passed || !c.asserted)
    }

    /// Drops every timing field so that repeated runs compare byte for byte.
    pub fn stable(&self) -> VerifyReport {
        let mut out = self.clone();
        out.elapsed_ms = None;
        for c in &mut out.checks {
            c.elapsed_ms = None;
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = match (c.passed, c.asserted) {
                (true, _) => "PASS",
                (false, true) => "FAIL",
                (false, false) => "NOTE",
            };
            let at = match (c.ell, c.mode) {
                (Some(l), Some(m)) => format!(" [ℓ={l} {m}]"),
                (Some(l), None) => format!(" [ℓ={l}]"),
                _ => String::new(),
            };
            let time = c.elapsed_ms.map(|t| format!(" ({t:.1} ms)")).unwrap_or_default();
            out.push_str(&format!("{status} {}: {}{at}{time}\n", c.suite, c.check));
            if !c.detail.is_empty() && !c.passed {
                out.push_str(&format!("     {}\n", c.detail));
            }
        }
        let n = self.failures().count();
        out.push_str(&format!("{} checks, {} failed\n", self.checks.len(), n));
        out
    }
}

struct Runner<'a> {
    cfg: &'a VerifyConfig,
    checks: Vec<CheckRecord>,
    contexts: BTreeMap<(u32, Mode), Arc<OperationAlgebra>>,
    gens: Option<std::result::Result<Arc<GeneratorSet>, String>>,
}

impl<'a> Runner<'a> {
    fn record(
        &mut self,
        suite: Suite,
        check: &str,
        at: (Option<u32>, Option<Mode>),
        asserted: bool,
        f: impl FnOnce() -> Result<(bool, String)>,
    ) {
        self.record_since(Instant::now(), suite, check, at, asserted, f)
    }

    /// Like `record`, with the clock started by the caller.
    fn record_since(
        &mut self,
        start: Instant,
        suite: Suite,
        check: &str,
        at: (Option<u32>, Option<Mode>),
        asserted: bool,
        f: impl FnOnce() -> Result<(bool, String)>,
    ) {
        let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        self.checks.push(CheckRecord {
            suite,
            check: check.to_string(),
            ell: at.0,
            mode: at.1,
            passed,
            asserted,
            detail,
            elapsed_ms: Some(start.elapsed().as_secs_f64() * 1e3),
        });
    }

    fn algebra(&mut self, ell: u32, mode: Mode) -> Result<Arc<OperationAlgebra>> {
        if let Some(a) = self.contexts.get(&(ell, mode)) {
            return Ok(a.clone());
        }
        let ctx = SteenrodContext::new(ell, mode, self.cfg.window(ell))?;
        let alg = Arc::new(OperationAlgebra::new(Arc::new(ctx)));
        self.contexts.insert((ell, mode), alg.clone());
        Ok(alg)
    }

    fn generators(&mut self) -> Result<Arc<GeneratorSet>> {
        if self.gens.is_none() {
            let loaded = match &self.cfg.gens_path {
                Some(p) => std::fs::read_to_string(p)
                    .map_err(|e| Error::Config(format!("{}: {e}", p.display())))
                    .and_then(|s| GeneratorSet::from_json(&s)),
                None => find_adequate_generators(self.cfg.lazard_weight),
            };
            self.gens = Some(loaded.map(Arc::new).map_err(|e| e.to_string()));
        }
        self.gens.clone().expect("set").map_err(Error::Inadequate)
    }
}

fn listed(names: impl IntoIterator<Item = String>) -> String {
    names.into_iter().take(8).collect::<Vec<_>>().join("; ")
}

/// Runs the selected suites. Configuration problems are returned as
/// [`Error::Config`] before anything runs; failing checks are recorded in
/// the report.
pub fn run_verify(suites: &[Suite], cfg: &VerifyConfig) -> Result<VerifyReport> {
    cfg.validate(suites)?;
    let start = Instant::now();
    let mut run = Runner { cfg, checks: Vec::new(), contexts: BTreeMap::new(), gens: None };
    let contexts = cfg.contexts()?;
    for &suite in suites {
        match suite {
            Suite::Hopf => {
                for &(ell, mode) in &contexts {
                    let at = (Some(ell), Some(mode));
                    let start = Instant::now();
                    let alg = run.algebra(ell, mode)?;
                    let ctx = alg.context();
                    let rep = verify_hopf_axioms(ctx, ctx.max_p());
                    let iota = rep.iota_squared_identity;
                    run.record_since(start, suite, "Hopf algebroid axioms and coinverse recursions", at, true, || {
                        let counts = listed(rep.checks.iter().map(|(k, n)| format!("{k} x{n}")));
                        let detail = if rep.passed() {
                            format!("{} monomials: {counts}", rep.monomials_checked)
                        } else {
                            listed(rep.failures.iter().map(|f| format!("{} at {}", f.axiom, f.subject)))
                        };
                        Ok((rep.passed(), detail))
                    });
                    run.record(suite, "coinverse squares to the identity", at, false, || {
                        Ok((iota.0 == iota.1, format!("{} of {} monomials", iota.0, iota.1)))
                    });
                }
            }
            Suite::Cartan => {
                for &(ell, mode) in &contexts {
                    let at = (Some(ell), Some(mode));
                    let start = Instant::now();
                    let alg = run.algebra(ell, mode)?;
                    let rep = cartan_check(&alg, alg.context().max_p());
                    run.record_since(start, suite, "transposed coproducts of P^R and Q_i match the Cartan formulas", at, true, || {
                        let bad: Vec<String> = rep.mismatches().map(|e| e.operation.clone()).collect();
                        let detail = if bad.is_empty() {
                            format!("{} operations", rep.entries.len())
                        } else {
                            format!("{} of {} differ: {}", bad.len(), rep.entries.len(), listed(bad))
                        };
                        Ok((rep.passed(), detail))
                    });
                    run.record(suite, "Cartan formulas hold modulo rho", at, false, || {
                        let ok = rep.entries.iter().all(|e| e.matches_mod_rho);
                        Ok((ok, format!("{} operations", rep.entries.len())))
                    });
                }
            }
            Suite::Milnor => {
                for &(ell, mode) in &contexts {
                    let alg = run.algebra(ell, mode)?;
                    run.record(suite, "Milnor basis identities for q_i and Q_i", (Some(ell), Some(mode)), true, || {
                        let ids = milnor_identities(&alg)?;
                        let bad: Vec<String> = ids.iter().filter(|c| !c.holds).map(|c| c.identity.clone()).collect();
                        let detail = if bad.is_empty() { listed(ids.iter().map(|c| c.identity.clone())) } else { listed(bad.clone()) };
                        Ok((bad.is_empty(), detail))
                    });
                }
            }
            Suite::Leftideal => {
                for &(ell, mode) in &contexts {
                    let alg = run.algebra(ell, mode)?;
                    run.record(suite, "triangular expansion of P^R Q(E) and round trip", (Some(ell), Some(mode)), true, || {
                        let mut n = 0;
                        let mut bad = Vec::new();
                        for m in alg.basis_up_to(alg.context().max_p()) {
                            if m.tau_count() == 0 {
                                continue;
                            }
                            n += 1;
                            let ok = leftideal_expand(&alg, &m).and_then(|x| x.evaluate(&alg)).map(|v| v == alg.basis(m.clone()));
                            match ok {
                                Ok(true) => {}
                                Ok(false) => bad.push(m.op_string()),
                                Err(e) => bad.push(format!("{}: {e}", m.op_string())),
                            }
                        }
                        let detail = if bad.is_empty() { format!("{n} basis elements") } else { listed(bad.clone()) };
                        Ok((bad.is_empty(), detail))
                    });
                }
            }
            Suite::Duality => {
                for &(ell, mode) in &contexts {
                    let at = (Some(ell), Some(mode));
                    let alg = run.algebra(ell, mode)?;
                    run.record(suite, "quotient by all Q_i has the pure-xi rank", at, true, || {
                        let ctx = alg.context();
                        let qs = all_q_indices(&alg, ctx.max_p());
                        let mut bad = Vec::new();
                        let bidegrees = ctx.window_bidegrees();
                        for (b, monos) in &bidegrees {
                            let expected = monos.iter().filter(|m| m.is_pure_xi()).count();
                            let got = quotient_rank(&alg, &qs, b.p, b.q)?;
                            if got != expected {
                                bad.push(format!("({},{}): {got} != {expected}", b.p, b.q));
                            }
                        }
                        let detail = if bad.is_empty() { format!("{} bidegrees", bidegrees.len()) } else { listed(bad.clone()) };
                        Ok((bad.is_empty(), detail))
                    });
                    run.record(suite, "kernel of the Bockstein is spanned by the tau_0-free monomials", at, mode == Mode::Specialized, || {
                        let ctx = alg.context();
                        let mut bad = Vec::new();
                        let bidegrees = ctx.window_bidegrees();
                        for b in bidegrees.keys().filter(|b| b.q <= cfg.max_weight as i64) {
                            if !ker_bockstein_basis(ctx, b.p, b.q)?.verified() {
                                bad.push(format!("({},{})", b.p, b.q));
                            }
                        }
                        Ok((bad.is_empty(), if bad.is_empty() { String::new() } else { listed(bad.clone()) }))
                    });
                }
            }
            Suite::Fgl => {
                let n = cfg.lazard_weight;
                run.record(suite, &format!("exp(log x) = x to weight {n}"), (None, None), true, || {
                    let m = FglModel::get(n)?;
                    Ok((m.exp().compose(m.log())? == m.exp().variable(0), String::new()))
                });
                for &ell in &cfg.fgl_ells {
                    run.record(suite, "l-series vanishes mod l", (Some(ell), None), true, || {
                        let s = ell_series(ell, n)?;
                        Ok((s.with_ring(&CoeffRing::mod_u64(ell as u64)).is_zero(), String::new()))
                    });
                }
                let lattice = LazardLattice::new(n);
                for (ell, r) in [(2, 1), (2, 2), (3, 1)] {
                    run.record(suite, &format!("canonical typical element ({ell},{r}) is {ell}-typical"), (Some(ell), None), true, || {
                        let lat = lattice.as_ref().map_err(Clone::clone)?;
                        let v = canonical_typical(ell, r, lat)?;
                        let rep = is_ell_typical(&v, ell)?;
                        Ok((rep.typical && v.validate(&lat.model)?, v.image.to_string()))
                    });
                }
                run.record(suite, "v_1 = 2b_1", (Some(2), None), true, || {
                    let lat = lattice.as_ref().map_err(Clone::clone)?;
                    let v = canonical_typical(2, 1, lat)?;
                    Ok((v.image == b(1).scale(2), v.image.to_string()))
                });
                run.record(suite, "index coefficient of v_2 is 14", (Some(2), None), true, || {
                    let lat = lattice.as_ref().map_err(Clone::clone)?;
                    let c = lazard_index_coefficient(&canonical_typical(2, 2, lat)?);
                    Ok((c == BigInt::from(14), c.to_string()))
                });
            }
            Suite::Adequacy => {
                let start = Instant::now();
                let gens = run.generators();
                run.record_since(start, suite, "adequate generators found and certified", (None, None), true, || {
                    let g = gens.clone()?;
                    let bad: Vec<String> = g.certificate.iter().filter(|(_, c)| !c.passes()).map(|(n, _)| format!("a{n}")).collect();
                    Ok((bad.is_empty() && g.certificate.len() == g.max_weight as usize, format!("{} generators {}", g.max_weight, listed(bad))))
                });
                run.record(suite, "Lazard index rule", (None, None), true, || {
                    let g = gens.clone()?;
                    let bad: Vec<String> = g
                        .elements
                        .iter()
                        .filter(|(n, v)| !index_rule_holds(**n, &lazard_index_coefficient(v)))
                        .map(|(n, _)| format!("a{n}"))
                        .collect();
                    Ok((bad.is_empty(), listed(bad.clone())))
                });
                run.record(suite, "serialized generator set re-validates from provenance", (None, None), true, || {
                    let g = gens.clone()?;
                    let back = GeneratorSet::from_json(&g.to_json()?)?;
                    back.revalidate()?;
                    Ok((back == *g, String::new()))
                });
            }
            Suite::Mgl => {
                let w = cfg.max_weight;
                let gens = run.generators();
                for &ell in &cfg.ells {
                    let at = (Some(ell), None);
                    let start = Instant::now();
                    let c = MglComodule::new(ell, w);
                    run.record_since(start, suite, "coaction is counital, coassociative and multiplicative", at, true, || {
                        let rep = c.verify(w)?;
                        Ok((rep.passed(), if rep.passed() { format!("{} monomials", rep.monomials) } else { listed(rep.failures.clone()) }))
                    });
                    run.record(suite, "projection to the xi part is a comodule map", at, true, || {
                        let rep = c.comodule_map_check(&xi_projection(ell, w), w)?;
                        Ok((rep.passed(), rep.first_failure.clone().unwrap_or_default()))
                    });
                    run.record(suite, "g-tilde is invertible with equal ranks", at, true, || {
                        let g = gens.clone()?;
                        let mut sizes = Vec::new();
                        for k in 0..=w {
                            let m = g_tilde_matrix(ell, &g, k)?;
                            if !m.invertible || m.source.len() != m.target.len() {
                                return Ok((false, format!("weight {k}")));
                            }
                            sizes.push(m.source.len().to_string());
                        }
                        Ok((true, format!("ranks {}", sizes.join(","))))
                    });
                    if ell != 2 {
                        continue;
                    }
                    if w >= 3 {
                        run.record(suite, "coaction on b_3", at, true, || {
                            let xi = |r: &[u32]| MilnorMonomial::new(0, r.to_vec());
                            let mut expected = CoactionTensor::zero(2);
                            expected.add_term(xi(&[]), c.b(3));
                            expected.add_term(xi(&[1]), c.b(2));
                            expected.add_term(xi(&[2]), c.b(1));
                            expected.add_term(xi(&[0, 1]), c.b(0));
                            let got = c.coaction(&c.b(3))?;
                            Ok((got == expected, got.to_string()))
                        });
                    }
                    if w >= 2 {
                        run.record(suite, "g-tilde in weights 1 and 2", at, true, || {
                            let g = gens.clone()?;
                            let m1 = g_tilde_matrix(2, &g, 1)?;
                            let m2 = g_tilde_matrix(2, &g, 2)?;
                            let ok = m1.matrix == vec![vec![1]]
                                && m1.target == ["xi1⊗1"]
                                && m2.source == ["b2", "b1^2"]
                                && m2.target == ["xi1^2⊗1", "1⊗b'2"]
                                && m2.matrix == vec![vec![0, 1], vec![1, 0]];
                            Ok((ok, format!("{:?} {:?}", m1.matrix, m2.matrix)))
                        });
                    }
                    run.record(suite, "P^R(theta) is dual to the product of b_(l^i - 1)", at, true, || {
                        let mut n = 0;
                        for k in 0..=w.min(5) {
                            for r in xi_sequences(2, k) {
                                n += 1;
                                let rep = pr_tau_duality_check(&c, &r)?;
                                if !rep.holds {
                                    return Ok((false, format!("R = {r:?}: {:?}", rep.pairings)));
                                }
                            }
                        }
                        Ok((true, format!("{n} sequences")))
                    });
                }
            }
            Suite::Psf => {
                let q = cfg.max_weight as i64;
                run.record(suite, "H smash MGL is psf", (None, None), true, || {
                    let h = BidegreeFamily::h_mgl(q);
                    Ok((h.is_psf() && (0..=q).all(|k| h.slice(k) > 0), format!("{} bidegrees", h.counts.len())))
                });
                let (seed, samples) = (cfg.seed, cfg.samples);
                run.record(suite, "smash product matches enumeration", (None, None), true, || {
                    let mut rng = StdRng::seed_from_u64(seed);
                    let h = BidegreeFamily::h_mgl(q);
                    for _ in 0..samples {
                        let members: Vec<(i64, i64)> = (0..rng.gen_range(0..6))
                            .map(|_| {
                                let qq = rng.gen_range(0..=q);
                                (2 * qq + rng.gen_range(0..4), qq)
                            })
                            .collect();
                        let fam = BidegreeFamily::from_members(q, members.iter().copied());
                        let s = fam.smash(&h);
                        let mut brute = BidegreeFamily::new(q);
                        for &(p1, q1) in &members {
                            for (&(p2, q2), &k) in &h.counts {
                                for _ in 0..k {
                                    brute.insert((p1 + p2, q1 + q2), 1);
                                }
                            }
                        }
                        if s != brute || !s.is_psf() {
                            return Ok((false, format!("{members:?}")));
                        }
                    }
                    Ok((true, format!("{samples} families, seed {seed}")))
                });
            }
        }
    }
    let passed = run.checks.iter().all(|c| c.passed || !c.asserted);
    Ok(VerifyReport {
        suites: suites.to_vec(),
        config: cfg.clone(),
        checks: run.checks,
        passed,
        elapsed_ms: Some(start.elapsed().as_secs_f64() * 1e3),
    })
}
