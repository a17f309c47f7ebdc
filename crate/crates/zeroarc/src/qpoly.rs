//! Exact polynomials over the rationals.
//!
//! The recurrence file format carries coefficients as rational strings; this
//! module owns that little grammar (`-? digits (/ digits)?`) plus the handful
//! of exact operations the pipeline needs before anything is reduced mod p^W:
//! evaluation, argument shifts for normalization, and the projection of a
//! polynomial to truncated p-adic monomial coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicInt};

/// Polynomial with rational coefficients, stored low degree first with no
/// trailing zeros (the zero polynomial is the empty vector).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// Convenience for tests and fixtures: integer coefficients, low first.
    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// The constant value when the degree is <= 0 (zero polynomial included),
    /// `None` for genuinely non-constant polynomials.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn eval(&self, z: &BigInt) -> BigRational {
        let zq = BigRational::from(z.clone());
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &zq + c;
        }
        acc
    }

    pub fn eval_i64(&self, z: i64) -> BigRational {
        self.eval(&BigInt::from(z))
    }

    /// Multiply every coefficient by a rational constant.
    pub fn scale(&self, c: &BigRational) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// P(z + s), expanded exactly.
    pub fn shift_arg(&self, s: &BigInt) -> QPoly {
        let sq = BigRational::from(s.clone());
        let mut acc: Vec<BigRational> = Vec::new();
        for c in self.coeffs.iter().rev() {
            // acc <- acc * (z + s) + c
            let mut next = vec![BigRational::zero(); acc.len() + 1];
            for (i, a) in acc.iter().enumerate() {
                next[i + 1] += a;
                next[i] += a * &sq;
            }
            if next.is_empty() {
                next.push(BigRational::zero());
            }
            next[0] += c;
            acc = next;
        }
        QPoly::new(acc)
    }

    /// Monomial coefficients reduced mod p^W.  Fails when any coefficient has
    /// p in its denominator.
    pub fn to_padic(&self, ctx: &PadicContext) -> Result<Vec<PadicInt>> {
        self.coeffs.iter().map(|c| ctx.from_rational(c)).collect()
    }

    /// Rational-string form, for reports and round-tripping files.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }

    pub fn parse(strings: &[String]) -> Result<QPoly> {
        let coeffs = strings
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(QPoly::new(coeffs))
    }
}

impl std::fmt::Display for QPoly {
    /// Human form like `3 + z - 2*z^2`, used in diagnostics.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = format_rational(&c.abs());
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if mag != "1" {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Parse `-? digits (/ digits)?` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::BadRational(s.to_string());
    let (neg, t) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let (num_str, den_str) = match t.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (t, None),
    };
    let all_digits = |u: &str| !u.is_empty() && u.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(num_str) || !den_str.map_or(true, all_digits) {
        return Err(bad());
    }
    let mut num: BigInt = num_str.parse().expect("digit string parses");
    let den: BigInt = den_str.map_or_else(BigInt::one, |d| d.parse().expect("digit string parses"));
    if den.is_zero() {
        return Err(bad());
    }
    if neg {
        num = -num;
    }
    Ok(BigRational::new(num, den))
}

pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parse_accepts_the_grammar() {
        assert_eq!(parse_rational("7").unwrap(), q(7, 1));
        assert_eq!(parse_rational("-3/2").unwrap(), q(-3, 2));
        assert_eq!(parse_rational("0/5").unwrap(), q(0, 1));
        assert_eq!(parse_rational("4/6").unwrap(), q(2, 3));
        assert_eq!(parse_rational(" 12 ").unwrap(), q(12, 1));
    }

    #[test]
    fn parse_rejects_everything_else() {
        for s in ["", "1/0", "1.5", "--2", "1/-2", "a", "+3", "2/", "/2", "1 / 2"] {
            assert!(parse_rational(s).is_err(), "should reject {s:?}");
        }
    }

    #[test]
    fn format_round_trips() {
        for s in ["7", "-3/2", "0", "123456789123456788/7"] {
            let v = parse_rational(s).unwrap();
            assert_eq!(format_rational(&v), s);
        }
    }

    #[test]
    fn eval_and_degree() {
        let p = QPoly::from_i64s(&[1, 0, 1]); // 1 + z^2
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.eval_i64(3), q(10, 1));
        assert_eq!(p.eval_i64(-2), q(5, 1));
        assert_eq!(QPoly::zero().degree(), None);
        assert!(QPoly::from_i64s(&[0, 0]).is_zero());
    }

    #[test]
    fn constant_detection() {
        assert_eq!(QPoly::zero().as_constant(), Some(q(0, 1)));
        assert_eq!(QPoly::from_i64s(&[5]).as_constant(), Some(q(5, 1)));
        assert_eq!(QPoly::from_i64s(&[5, 1]).as_constant(), None);
    }

    #[test]
    fn shift_matches_direct_evaluation() {
        let p = QPoly::new(vec![q(1, 2), q(0, 1), q(-3, 1), q(1, 1)]);
        let s = BigInt::from(-4);
        let shifted = p.shift_arg(&s);
        for z in -6..=6 {
            assert_eq!(
                shifted.eval_i64(z),
                p.eval(&(BigInt::from(z) + &s)),
                "mismatch at z = {z}"
            );
        }
        // Frozen example: (z+1)^2 expansion.
        assert_eq!(
            QPoly::from_i64s(&[0, 0, 1]).shift_arg(&BigInt::from(1)),
            QPoly::from_i64s(&[1, 2, 1])
        );
    }

    #[test]
    fn display_is_readable() {
        let p = QPoly::new(vec![q(3, 1), q(-1, 2), q(1, 1)]);
        assert_eq!(p.to_string(), "3 - 1/2*z + z^2");
        assert_eq!(QPoly::zero().to_string(), "0");
    }
}
