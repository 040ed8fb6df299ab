use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::Bidegree;

/// Index `(E, R)` of the Milnor monomial `τ(E)ξ(R)` and of its dual `ρ(E, R)`.
///
/// `e` is a bitmask (`ε_i` = bit `i`); `r[k]` is the exponent of `ξ_{k+1}`,
/// with trailing zeros trimmed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MilnorMonomial {
    pub e: u64,
    pub r: Vec<u32>,
}

impl MilnorMonomial {
    pub fn one() -> Self {
        MilnorMonomial::default()
    }

    pub fn new(e: u64, r: Vec<u32>) -> Self {
        let mut m = MilnorMonomial { e, r };
        m.trim();
        m
    }

    /// `τ(E)` from the list of indices `i` with `ε_i = 1`.
    pub fn from_parts(taus: &[u32], r: &[u32]) -> Self {
        let e = taus.iter().fold(0u64, |acc, &i| acc | (1 << i));
        Self::new(e, r.to_vec())
    }

    pub fn tau(i: u32) -> Self {
        MilnorMonomial { e: 1 << i, r: Vec::new() }
    }

    /// `ξ_i^k`, `i ≥ 1`.
    pub fn xi_pow(i: u32, k: u32) -> Self {
        let mut r = vec![0; i as usize];
        r[i as usize - 1] = k;
        Self::new(0, r)
    }

    fn trim(&mut self) {
        while self.r.last() == Some(&0) {
            self.r.pop();
        }
    }

    pub fn is_one(&self) -> bool {
        self.e == 0 && self.r.is_empty()
    }

    pub fn has_tau(&self, i: u32) -> bool {
        i < 64 && self.e & (1 << i) != 0
    }

    pub fn taus(&self) -> impl Iterator<Item = u32> + '_ {
        (0..64).filter(move |&i| self.e & (1 << i) != 0)
    }

    pub fn tau_count(&self) -> u32 {
        self.e.count_ones()
    }

    /// Exponent of `ξ_i` (`i ≥ 1`).
    pub fn xi(&self, i: u32) -> u32 {
        if i == 0 {
            return 0;
        }
        self.r.get(i as usize - 1).copied().unwrap_or(0)
    }

    /// The sequence `R` only.
    pub fn xi_part(&self) -> MilnorMonomial {
        MilnorMonomial { e: 0, r: self.r.clone() }
    }

    pub fn tau_part(&self) -> MilnorMonomial {
        MilnorMonomial { e: self.e, r: Vec::new() }
    }

    pub fn is_pure_xi(&self) -> bool {
        self.e == 0
    }

    /// Koszul parity: the number of `τ` factors mod 2.
    pub fn is_odd(&self) -> bool {
        self.tau_count() % 2 == 1
    }

    pub fn with_tau(&self, i: u32, on: bool) -> Self {
        let e = if on { self.e | (1 << i) } else { self.e & !(1 << i) };
        MilnorMonomial { e, r: self.r.clone() }
    }

    /// `R + R'` on the `ξ` part, keeping this `E`.
    pub fn add_xi(&self, other: &[u32]) -> Self {
        let n = self.r.len().max(other.len());
        let r = (0..n)
            .map(|k| self.r.get(k).copied().unwrap_or(0) + other.get(k).copied().unwrap_or(0))
            .collect();
        Self::new(self.e, r)
    }

    /// Multiplies the `ξ` part by `ξ_i^k`.
    pub fn times_xi(&self, i: u32, k: u32) -> Self {
        let mut r = self.r.clone();
        if r.len() < i as usize {
            r.resize(i as usize, 0);
        }
        r[i as usize - 1] += k;
        Self::new(self.e, r)
    }

    /// `R' ⊂ R` in the termwise sense, and `E' ⊂ E`.
    pub fn divides(&self, other: &MilnorMonomial) -> bool {
        self.e & !other.e == 0 && self.r.iter().enumerate().all(|(k, &v)| v <= other.r.get(k).copied().unwrap_or(0))
    }

    /// `R ⊂ R'` on the `ξ` parts only.
    pub fn r_subset(&self, other: &MilnorMonomial) -> bool {
        self.r.iter().enumerate().all(|(k, &v)| v <= other.r.get(k).copied().unwrap_or(0))
    }

    /// `other − self` on the `ξ` parts; assumes `r_subset`.
    pub fn r_difference(&self, other: &MilnorMonomial) -> Vec<u32> {
        (0..other.r.len()).map(|k| other.r[k] - self.r.get(k).copied().unwrap_or(0)).collect()
    }

    pub fn bidegree(&self, ell: u32) -> Bidegree {
        let ell = ell as i64;
        let mut b = Bidegree::ZERO;
        for i in self.taus() {
            let l = ell.pow(i);
            b = b + Bidegree::new(2 * l - 1, l - 1);
        }
        for (k, &v) in self.r.iter().enumerate() {
            let l = ell.pow(k as u32 + 1);
            b = b + Bidegree::new(2 * l - 2, l - 1) * v as i64;
        }
        b
    }

    /// Splits off the highest-ranked letter: `self = prefix · letter` with no
    /// sign and no relation.
    pub fn split_last(&self) -> Option<(MilnorMonomial, Generator)> {
        if let Some(k) = self.r.len().checked_sub(1) {
            let i = k as u32 + 1;
            let mut r = self.r.clone();
            r[k] -= 1;
            return Some((MilnorMonomial::new(self.e, r), Generator::Xi(i)));
        }
        let top = self.taus().last()?;
        Some((self.with_tau(top, false), Generator::Tau(top)))
    }

    /// Text form in terms of `tauN`/`xiN`, `1` for the unit.
    pub fn gamma_string(&self) -> String {
        if self.is_one() {
            return "1".into();
        }
        let mut parts: Vec<String> = self.taus().map(|i| format!("tau{i}")).collect();
        for (k, &v) in self.r.iter().enumerate() {
            match v {
                0 => {}
                1 => parts.push(format!("xi{}", k + 1)),
                _ => parts.push(format!("xi{}^{v}", k + 1)),
            }
        }
        parts.join("*")
    }

    /// Text form of the dual operation `ρ(E, R) = Q(E)P^R`.
    pub fn op_string(&self) -> String {
        if self.is_one() {
            return "1".into();
        }
        let mut parts: Vec<String> = self.taus().map(|i| format!("Q{i}")).collect();
        if !self.r.is_empty() {
            let r: Vec<String> = self.r.iter().map(|v| v.to_string()).collect();
            parts.push(format!("P[{}]", r.join(",")));
        }
        parts.join("*")
    }
}

/// A multiplicative generator of `Γ` over `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    Tau(u32),
    Xi(u32),
}

impl Generator {
    pub fn monomial(self) -> MilnorMonomial {
        match self {
            Generator::Tau(i) => MilnorMonomial::tau(i),
            Generator::Xi(i) => MilnorMonomial::xi_pow(i, 1),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Tau(i) => write!(f, "tau{i}"),
            Generator::Xi(i) => write!(f, "xi{i}"),
        }
    }
}

impl fmt::Display for MilnorMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.gamma_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bidegrees_at_two() {
        assert_eq!(MilnorMonomial::tau(0).bidegree(2), Bidegree::new(1, 0));
        assert_eq!(MilnorMonomial::xi_pow(1, 1).bidegree(2), Bidegree::new(2, 1));
        assert_eq!(MilnorMonomial::from_parts(&[0], &[1]).bidegree(2), Bidegree::new(3, 1));
        assert_eq!(MilnorMonomial::tau(1).bidegree(3), Bidegree::new(5, 2));
    }

    #[test]
    fn split_last_letter() {
        let m = MilnorMonomial::from_parts(&[0, 2], &[1, 0, 2]);
        let (p, g) = m.split_last().unwrap();
        assert_eq!(g, Generator::Xi(3));
        assert_eq!(p, MilnorMonomial::from_parts(&[0, 2], &[1, 0, 1]));
        let t = MilnorMonomial::from_parts(&[1, 3], &[]);
        assert_eq!(t.split_last().unwrap(), (MilnorMonomial::tau(1), Generator::Tau(3)));
        assert_eq!(m.gamma_string(), "tau0*tau2*xi1*xi3^2");
        assert_eq!(m.op_string(), "Q0*Q2*P[1,0,2]");
    }
}
