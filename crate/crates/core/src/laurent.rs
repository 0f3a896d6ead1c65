//! Laurent polynomials over the coefficient field, up to units.

use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// A nonzero Laurent polynomial stored up to the unit `k x^n`: the lowest
/// exponent is shifted to zero and the constant coefficient scaled to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    field: Field,
    coeffs: Vec<Scalar>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    Reducible,
    /// Degree above the range the checker decides.
    Undecided,
}

impl LaurentPoly {
    /// Builds `sum k x^n` from `(n, k)` terms.
    pub fn new(field: Field, terms: &[(i64, Scalar)]) -> Result<Self> {
        let lo = terms.iter().filter(|(_, k)| !k.is_zero()).map(|(n, _)| *n).min();
        let hi = terms.iter().filter(|(_, k)| !k.is_zero()).map(|(n, _)| *n).max();
        let (Some(lo), Some(hi)) = (lo, hi) else {
            return Err(Error::Precondition("zero Laurent polynomial".into()));
        };
        let mut coeffs = vec![field.integer(0); (hi - lo + 1) as usize];
        for (n, k) in terms {
            let slot = &mut coeffs[(n - lo) as usize];
            *slot = &*slot + &(&field.integer(1) * k);
        }
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        let start = coeffs.iter().position(|k| !k.is_zero()).ok_or_else(|| {
            Error::Precondition("zero Laurent polynomial".into())
        })?;
        coeffs.drain(..start);
        let lead = coeffs[0].inverse().expect("nonzero");
        let coeffs = coeffs.iter().map(|k| k * &lead).collect();
        Ok(LaurentPoly { field, coeffs })
    }

    /// `x - 1`.
    pub fn x_minus_one(field: Field) -> Self {
        LaurentPoly::new(field, &[(0, field.integer(-1)), (1, field.integer(1))]).expect("nonzero")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Coefficients of `1, x, x^2, ...` after normalisation.
    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Units of `K[x, x^-1]` are exactly the nonzero monomials.
    pub fn is_unit(&self) -> bool {
        self.degree() == 0
    }

    pub fn evaluate(&self, x: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.integer(0), |acc, k| &(&acc * x) + k)
    }

    /// Decided completely up to degree three, where reducibility means a root.
    pub fn irreducibility(&self) -> Irreducibility {
        match self.degree() {
            0 => Irreducibility::Reducible,
            1 => Irreducibility::Irreducible,
            2 | 3 => {
                if self.has_root() {
                    Irreducibility::Reducible
                } else {
                    Irreducibility::Irreducible
                }
            }
            _ => Irreducibility::Undecided,
        }
    }

    fn has_root(&self) -> bool {
        match self.field.elements() {
            Some(all) => all.iter().any(|x| self.evaluate(x).is_zero()),
            None => self.rational_root_candidates().iter().any(|x| self.evaluate(x).is_zero()),
        }
    }

    /// `±d/e` with `d` dividing the constant and `e` the leading coefficient
    /// of the integer polynomial obtained by clearing denominators.
    fn rational_root_candidates(&self) -> Vec<Scalar> {
        let rationals: Vec<_> = self
            .coeffs
            .iter()
            .map(|k| match k {
                Scalar::Rational(q) => q.clone(),
                Scalar::Residue { .. } => unreachable!("rational field"),
            })
            .collect();
        let lcm = rationals.iter().fold(num_bigint::BigInt::from(1), |acc, q| acc.lcm(q.denom()));
        let ints: Vec<_> = rationals.iter().map(|q| (q * &lcm).to_integer()).collect();
        let (Some(a0), Some(an)) = (ints[0].abs().to_i64(), ints.last().and_then(|a| a.abs().to_i64())) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for d in divisors(a0) {
            for e in divisors(an) {
                for sign in [1, -1] {
                    out.push(self.field.ratio(sign * d, e).expect("nonzero divisor"));
                }
            }
        }
        out
    }
}

fn divisors(n: i64) -> Vec<i64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, k) in self.coeffs.iter().enumerate() {
            if k.is_zero() {
                continue;
            }
            let (neg, mag) = if k.is_negative() { (true, -k) } else { (false, k.clone()) };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            match (mag.is_one(), mono.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{mono}")?,
                (false, true) => write!(f, "{mag}")?,
                (false, false) => write!(f, "{mag}{mono}")?,
            }
        }
        Ok(())
    }
}
