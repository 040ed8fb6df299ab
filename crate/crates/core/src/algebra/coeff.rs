use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Coefficient ring of a [`GradedPoly`](super::GradedPoly): the integers or a
/// residue ring `Z/m`.
///
/// Values in `Z/m` are always stored as canonical representatives in `[0, m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CoeffRing {
    Integers,
    IntegersMod(BigInt),
}

impl CoeffRing {
    pub fn modulo(m: impl Into<BigInt>) -> Result<Self> {
        let m = m.into();
        if !m.is_positive() {
            return Err(Error::InvalidTable(format!("modulus must be positive, got {m}")));
        }
        Ok(CoeffRing::IntegersMod(m))
    }

    /// `Z/m` for a machine-sized modulus. Panics on zero.
    pub fn mod_u64(m: u64) -> Self {
        assert!(m > 0, "modulus must be positive");
        CoeffRing::IntegersMod(BigInt::from(m))
    }

    pub fn modulus(&self) -> Option<&BigInt> {
        match self {
            CoeffRing::Integers => None,
            CoeffRing::IntegersMod(m) => Some(m),
        }
    }

    pub fn reduce(&self, c: BigInt) -> BigInt {
        match self {
            CoeffRing::Integers => c,
            CoeffRing::IntegersMod(m) => c.mod_floor(m),
        }
    }

    pub fn is_zero(&self, c: &BigInt) -> bool {
        match self {
            CoeffRing::Integers => c.is_zero(),
            CoeffRing::IntegersMod(m) => c.mod_floor(m).is_zero(),
        }
    }

    pub fn one(&self) -> BigInt {
        self.reduce(BigInt::one())
    }

    /// The characteristic of the ring (0 for the integers).
    pub fn characteristic(&self) -> BigInt {
        self.modulus().cloned().unwrap_or_else(BigInt::zero)
    }
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffRing::Integers => write!(f, "Z"),
            CoeffRing::IntegersMod(m) => write!(f, "Z/{m}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_representatives() {
        let r = CoeffRing::mod_u64(4);
        assert_eq!(r.reduce(BigInt::from(-1)), BigInt::from(3));
        assert_eq!(r.reduce(BigInt::from(9)), BigInt::from(1));
        assert!(r.is_zero(&BigInt::from(-8)));
        assert_eq!(CoeffRing::Integers.reduce(BigInt::from(-5)), BigInt::from(-5));
    }

    #[test]
    fn rejects_nonpositive_modulus() {
        assert!(CoeffRing::modulo(0).is_err());
        assert!(CoeffRing::modulo(-3).is_err());
    }
}
