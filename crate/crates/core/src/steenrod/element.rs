use std::collections::BTreeMap;

use super::milnor::MilnorMonomial;
use crate::algebra::GradedPoly;

/// An element of `Γ` as a left `A`-linear combination of Milnor monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GammaElement {
    terms: BTreeMap<MilnorMonomial, GradedPoly>,
}

impl GammaElement {
    pub fn zero() -> Self {
        GammaElement::default()
    }

    pub fn from_term(m: MilnorMonomial, a: GradedPoly) -> Self {
        let mut g = GammaElement::zero();
        g.add_term(m, a);
        g
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MilnorMonomial, &GradedPoly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &MilnorMonomial) -> Option<GradedPoly> {
        self.terms.get(m).cloned()
    }

    pub fn add_term(&mut self, m: MilnorMonomial, a: GradedPoly) {
        if a.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            None => {
                self.terms.insert(m, a);
            }
            Some(cur) => {
                let s = &cur + &a;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
        }
    }

    pub fn add(&mut self, other: &GammaElement) {
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a.clone());
        }
    }

    /// Adds `a · other`.
    pub fn add_scaled(&mut self, other: &GammaElement, a: &GradedPoly) {
        for (m, b) in &other.terms {
            self.add_term(m.clone(), a * b);
        }
    }

    pub fn neg(&self) -> GammaElement {
        GammaElement { terms: self.terms.iter().map(|(m, a)| (m.clone(), a.neg())).collect() }
    }

    pub fn scale(&self, a: &GradedPoly) -> GammaElement {
        let mut out = GammaElement::zero();
        out.add_scaled(self, a);
        out
    }

    pub fn sub(&self, other: &GammaElement) -> GammaElement {
        let mut out = self.clone();
        out.add(&other.neg());
        out
    }
}

impl std::fmt::Display for GammaElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write_terms(f, self.terms.iter().map(|(m, a)| (m.gamma_string(), a)))
    }
}

/// Writes `coeff*monomial` terms joined by ` + `, parenthesizing compound
/// coefficients.
pub(crate) fn write_terms<'a>(
    f: &mut std::fmt::Formatter<'_>,
    terms: impl Iterator<Item = (String, &'a GradedPoly)>,
) -> std::fmt::Result {
    let mut first = true;
    for (m, a) in terms {
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        let c = a.to_string();
        if c == "1" {
            write!(f, "{m}")?;
        } else if m == "1" {
            write!(f, "({c})")?;
        } else {
            write!(f, "({c})*{m}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// An element of `Γ ⊗_A Γ` in normalized form: every `A`-coefficient sits on
/// the left of the pair.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TensorGamma {
    terms: BTreeMap<(MilnorMonomial, MilnorMonomial), GradedPoly>,
}

impl TensorGamma {
    pub fn zero() -> Self {
        TensorGamma::default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(MilnorMonomial, MilnorMonomial), &GradedPoly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, left: &MilnorMonomial, right: &MilnorMonomial) -> Option<&GradedPoly> {
        self.terms.get(&(left.clone(), right.clone()))
    }

    pub fn add_term(&mut self, left: MilnorMonomial, right: MilnorMonomial, a: GradedPoly) {
        if a.is_zero() {
            return;
        }
        let key = (left, right);
        match self.terms.remove(&key) {
            None => {
                self.terms.insert(key, a);
            }
            Some(cur) => {
                let s = &cur + &a;
                if !s.is_zero() {
                    self.terms.insert(key, s);
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &TensorGamma, a: &GradedPoly) {
        for ((l, r), b) in &other.terms {
            self.add_term(l.clone(), r.clone(), a * b);
        }
    }

    /// Removes one pair, returning its coefficient.
    pub fn remove(&mut self, left: &MilnorMonomial, right: &MilnorMonomial) -> Option<GradedPoly> {
        self.terms.remove(&(left.clone(), right.clone()))
    }
}

impl std::fmt::Display for TensorGamma {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write_terms(f, self.terms.iter().map(|((l, r), a)| (format!("{l}⊗{r}"), a)))
    }
}
