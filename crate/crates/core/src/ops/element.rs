use std::collections::BTreeMap;

use crate::algebra::GradedPoly;
use crate::steenrod::element::write_terms;
use crate::steenrod::MilnorMonomial;

/// `Σ a · ρ(E, R)` in the dual Milnor basis, coefficients on the left.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OperationElement {
    terms: BTreeMap<MilnorMonomial, GradedPoly>,
}

impl OperationElement {
    pub fn zero() -> Self {
        OperationElement::default()
    }

    pub fn from_term(m: MilnorMonomial, a: GradedPoly) -> Self {
        let mut out = Self::zero();
        out.add_term(m, a);
        out
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

    pub fn coefficient(&self, m: &MilnorMonomial) -> Option<&GradedPoly> {
        self.terms.get(m)
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

    pub fn add(&mut self, other: &OperationElement) {
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a.clone());
        }
    }

    /// `self + a · other`.
    pub fn add_scaled(&mut self, other: &OperationElement, a: &GradedPoly) {
        for (m, b) in &other.terms {
            self.add_term(m.clone(), a * b);
        }
    }

    pub fn neg(&self) -> OperationElement {
        OperationElement { terms: self.terms.iter().map(|(m, a)| (m.clone(), a.neg())).collect() }
    }

    pub fn sub(&self, other: &OperationElement) -> OperationElement {
        let mut out = self.clone();
        out.add(&other.neg());
        out
    }

    /// Left multiplication by a coefficient.
    pub fn scale(&self, a: &GradedPoly) -> OperationElement {
        let mut out = Self::zero();
        out.add_scaled(self, a);
        out
    }
}

impl std::fmt::Display for OperationElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write_terms(f, self.terms.iter().map(|(m, a)| (m.op_string(), a)))
    }
}
