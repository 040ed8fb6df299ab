use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;

use super::monomial::{Bidegree, Monomial};
use crate::error::{Error, Result};

/// A named polynomial generator.
///
/// Parity is the first degree mod 2 unless the generator was declared
/// commuting, in which case it never produces Koszul signs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub name: String,
    pub bidegree: Bidegree,
    pub odd: bool,
    pub cap: Option<Cap>,
}

/// An exponent cap `g^exponent = rewrite`, with `rewrite` given as terms over
/// the same generator table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cap {
    pub exponent: u32,
    pub rewrite: Vec<(BigInt, Monomial)>,
}

/// Ordered list of generators. The position of a generator is its rank in
/// the canonical normal order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GeneratorTable {
    gens: Vec<GeneratorSpec>,
    index: HashMap<String, u32>,
}

impl GeneratorTable {
    pub fn builder() -> GeneratorTableBuilder {
        GeneratorTableBuilder::default()
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn get(&self, idx: u32) -> &GeneratorSpec {
        &self.gens[idx as usize]
    }

    pub fn lookup(&self, name: &str) -> Result<u32> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn generators(&self) -> impl Iterator<Item = (u32, &GeneratorSpec)> {
        self.gens.iter().enumerate().map(|(i, g)| (i as u32, g))
    }

    pub fn bidegree(&self, m: &Monomial) -> Bidegree {
        m.pairs()
            .iter()
            .fold(Bidegree::ZERO, |acc, &(i, e)| acc + self.get(i).bidegree * e as i64)
    }

    /// Whether `m` has odd Koszul parity.
    pub fn is_odd(&self, m: &Monomial) -> bool {
        m.pairs()
            .iter()
            .filter(|&&(i, e)| self.get(i).odd && e % 2 == 1)
            .count()
            % 2
            == 1
    }
}

#[derive(Default)]
pub struct GeneratorTableBuilder {
    gens: Vec<GeneratorSpec>,
    caps: Vec<(String, u32, Vec<(i64, Vec<(String, u32)>)>)>,
}

impl GeneratorTableBuilder {
    /// Adds a generator whose parity is its first degree mod 2.
    pub fn generator(mut self, name: &str, p: i64, q: i64) -> Self {
        let bidegree = Bidegree::new(p, q);
        self.gens.push(GeneratorSpec { name: name.into(), bidegree, odd: bidegree.is_odd(), cap: None });
        self
    }

    /// Adds a generator that commutes with everything regardless of degree.
    pub fn commuting(mut self, name: &str, p: i64, q: i64) -> Self {
        self.gens.push(GeneratorSpec { name: name.into(), bidegree: Bidegree::new(p, q), odd: false, cap: None });
        self
    }

    /// Declares `name^exponent = Σ coeff · Π gen^exp`.
    pub fn cap(mut self, name: &str, exponent: u32, rewrite: Vec<(i64, Vec<(&str, u32)>)>) -> Self {
        let rw = rewrite
            .into_iter()
            .map(|(c, w)| (c, w.into_iter().map(|(n, e)| (n.to_string(), e)).collect()))
            .collect();
        self.caps.push((name.to_string(), exponent, rw));
        self
    }

    pub fn build(self) -> Result<Arc<GeneratorTable>> {
        let mut table = GeneratorTable::default();
        for g in self.gens {
            if table.index.contains_key(&g.name) {
                return Err(Error::InvalidTable(format!("duplicate generator {}", g.name)));
            }
            table.index.insert(g.name.clone(), table.gens.len() as u32);
            table.gens.push(g);
        }
        for (name, exponent, rewrite) in self.caps {
            if exponent < 2 {
                return Err(Error::InvalidTable(format!("cap on {name} must be at least 2")));
            }
            let idx = table.lookup(&name)?;
            let target = table.get(idx).bidegree * exponent as i64;
            let mut terms = Vec::new();
            for (c, word) in rewrite {
                let mut pairs = Vec::new();
                for (n, e) in word {
                    pairs.push((table.lookup(&n)?, e));
                }
                let m = Monomial::from_pairs(pairs);
                if table.bidegree(&m) != target {
                    return Err(Error::InvalidTable(format!(
                        "rewrite of {name}^{exponent} is not homogeneous of bidegree {target}"
                    )));
                }
                terms.push((BigInt::from(c), m));
            }
            table.gens[idx as usize].cap = Some(Cap { exponent, rewrite: terms });
        }
        Ok(Arc::new(table))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_inhomogeneous_rewrite() {
        let r = GeneratorTable::builder()
            .generator("x", 1, 0)
            .generator("y", 2, 1)
            .cap("x", 2, vec![(1, vec![("y", 2)])])
            .build();
        assert!(matches!(r, Err(Error::InvalidTable(_))));
    }

    #[test]
    fn parity_follows_first_degree() {
        let t = GeneratorTable::builder()
            .generator("a", 3, 1)
            .generator("b", 2, 1)
            .commuting("c", -1, -1)
            .build()
            .unwrap();
        assert!(t.get(0).odd);
        assert!(!t.get(1).odd);
        assert!(!t.get(2).odd);
        assert!(matches!(t.lookup("z"), Err(Error::UnknownGenerator(_))));
    }
}
