use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::algebra::{CoeffRing, GeneratorTable, GradedPoly, TruncatedSeries};
use crate::error::{Error, Result};

/// Number of `b` generators in the shared coefficient table.
pub const B_TABLE_SIZE: u32 = 64;

/// Largest weight of a `c_{ij}` symbol in the provenance table.
pub const C_TABLE_WEIGHT: u32 = 16;

/// The table `b1, b2, …` with `|b_n| = (2n, n)`, shared by every model so
/// polynomials from different truncations can be combined.
pub fn b_table() -> &'static Arc<GeneratorTable> {
    static T: OnceLock<Arc<GeneratorTable>> = OnceLock::new();
    T.get_or_init(|| {
        let mut b = GeneratorTable::builder();
        for n in 1..=B_TABLE_SIZE {
            b = b.generator(&b_name(n), 2 * n as i64, n as i64);
        }
        b.build().expect("b table")
    })
}

pub fn b_name(n: u32) -> String {
    format!("b{n}")
}

pub fn c_name(i: u32, j: u32) -> String {
    let (i, j) = (i.min(j), i.max(j));
    format!("c{i}_{j}")
}

/// Formal symbols `c{i}_{j}` (`i ≤ j`) standing for the FGL coefficients,
/// of bidegree `(2w, w)` with `w = i + j − 1`.
pub fn c_table() -> &'static Arc<GeneratorTable> {
    static T: OnceLock<Arc<GeneratorTable>> = OnceLock::new();
    T.get_or_init(|| {
        let mut b = GeneratorTable::builder();
        for w in 1..=C_TABLE_WEIGHT {
            for i in 1..=(w + 1) / 2 {
                let j = w + 1 - i;
                b = b.generator(&c_name(i, j), 2 * w as i64, w as i64);
            }
        }
        b.build().expect("c table")
    })
}

/// Parses a `c{i}_{j}` name.
pub fn parse_c_name(name: &str) -> Option<(u32, u32)> {
    let (i, j) = name.strip_prefix('c')?.split_once('_')?;
    Some((i.parse().ok()?, j.parse().ok()?))
}

pub fn b(n: u32) -> GradedPoly {
    GradedPoly::var(b_table(), &CoeffRing::Integers, &b_name(n)).expect("b generator in table")
}

/// Truncated universal formal group law over `ℤ[b_1, …, b_N]`.
#[derive(Debug)]
pub struct FglModel {
    n: u32,
    exp: TruncatedSeries,
    log: TruncatedSeries,
    f: TruncatedSeries,
}

impl FglModel {
    /// Builds the model from scratch; prefer [`FglModel::get`].
    pub fn build(n: u32) -> Result<FglModel> {
        if n == 0 || n > B_TABLE_SIZE {
            return Err(Error::BeyondTruncation { what: format!("weight {n}"), bound: B_TABLE_SIZE });
        }
        let t = b_table();
        let z = CoeffRing::Integers;
        let mut coeffs = vec![(1, GradedPoly::one(t, &z))];
        for k in 1..=n {
            coeffs.push((k + 1, b(k)));
        }
        let exp = TruncatedSeries::from_coefficients(t, &z, n + 1, n, coeffs);
        let log = exp.invert()?;
        let mut log_y = TruncatedSeries::zero_default(2, t, &z, n);
        let mut log_x = TruncatedSeries::zero_default(2, t, &z, n);
        for (&(k, _), c) in log.coefficients() {
            log_x.set((k, 0), c.clone());
            log_y.set((0, k), c.clone());
        }
        let f = exp.compose(&log_x.add(&log_y)?)?;
        Ok(FglModel { n, exp, log, f })
    }

    /// The memoized model for weight bound `n`.
    pub fn get(n: u32) -> Result<Arc<FglModel>> {
        static MEMO: OnceLock<Mutex<HashMap<u32, Arc<FglModel>>>> = OnceLock::new();
        let memo = MEMO.get_or_init(Default::default);
        if let Some(m) = memo.lock().expect("memo").get(&n) {
            return Ok(m.clone());
        }
        let model = Arc::new(Self::build(n)?);
        Ok(memo.lock().expect("memo").entry(n).or_insert(model).clone())
    }

    pub fn max_weight(&self) -> u32 {
        self.n
    }

    pub fn exp(&self) -> &TruncatedSeries {
        &self.exp
    }

    pub fn log(&self) -> &TruncatedSeries {
        &self.log
    }

    /// The bivariate series `F(x, y) = exp(log x + log y)`.
    pub fn fgl(&self) -> &TruncatedSeries {
        &self.f
    }

    /// Coefficient `c_{ij}` of `x^i y^j` in `F`, homogeneous of weight `i + j − 1`.
    pub fn fgl_coefficient(&self, i: u32, j: u32) -> Result<GradedPoly> {
        if i == 0 || j == 0 {
            return Err(Error::InvalidContext("fgl coefficients are indexed by positive i, j".into()));
        }
        if i + j - 1 > self.n {
            return Err(Error::BeyondTruncation { what: format!("c_{{{i},{j}}}"), bound: self.n });
        }
        self.f.coefficient2(i, j)
    }

    /// The `ℓ`-series `exp(ℓ · log x)`.
    pub fn ell_series(&self, ell: u32) -> Result<TruncatedSeries> {
        self.exp.compose(&self.log.scale(ell))
    }

    /// Expands a polynomial in the `c_{ij}` symbols into `ℤ[b]`.
    pub fn expand_provenance(&self, p: &GradedPoly) -> Result<GradedPoly> {
        let ct = c_table();
        let mut err = None;
        let out = p.substitute(b_table(), &CoeffRing::Integers, |g| {
            let name = &ct.get(g).name;
            let (i, j) = parse_c_name(name).expect("c symbol");
            self.fgl_coefficient(i, j).unwrap_or_else(|e| {
                err = Some(e);
                GradedPoly::zero(b_table(), &CoeffRing::Integers)
            })
        })?;
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }
}

/// Convenience wrapper around [`FglModel::ell_series`] for a fresh weight bound.
pub fn ell_series(ell: u32, n: u32) -> Result<TruncatedSeries> {
    FglModel::get(n)?.ell_series(ell)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_coefficients() {
        let m = FglModel::get(3).unwrap();
        assert_eq!(m.fgl_coefficient(1, 1).unwrap().to_string(), "2*b1");
        assert_eq!(m.fgl_coefficient(1, 2).unwrap().to_string(), "-2*b1^2 + 3*b2");
        assert!(matches!(m.fgl_coefficient(2, 3), Err(Error::BeyondTruncation { .. })));
    }

    #[test]
    fn c_names_round_trip() {
        assert_eq!(parse_c_name(&c_name(3, 1)), Some((1, 3)));
        assert!(c_table().lookup("c2_5").is_ok());
    }
}
