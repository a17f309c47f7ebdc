//! Admissible-prime selection.
//!
//! The analytic construction needs a prime p >= 5 at which every piece of
//! input data is a p-adic unit: the nonzero initial values and the nonzero
//! coefficients of the (normalized) polynomials.  Over the rationals that is
//! a finite divisibility condition, so rather than appealing to density
//! arguments we search primes in increasing order and test directly.
//!
//! In extension mode — non-constant trailing coefficient — a prime must
//! additionally leave the trailing polynomial rootless mod p, checked by
//! brute force over the residues.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::recurrence::NormalizedSpec;

/// v_p of a nonzero rational: v_p(numerator) - v_p(denominator).
pub fn rational_val_p(q: &BigRational, p: u64) -> i64 {
    assert!(!q.is_zero(), "valuation of zero is undefined here");
    fn val(mut n: BigUint, p: &BigUint) -> i64 {
        let mut v = 0;
        loop {
            let (q, r) = n.div_rem(p);
            if !r.is_zero() {
                return v;
            }
            n = q;
            v += 1;
        }
    }
    let p = BigUint::from(p);
    val(q.numer().magnitude().clone(), &p) - val(q.denom().magnitude().clone(), &p)
}

/// The finite set of rationals that must all be units: nonzero initial
/// values of the normalized window and nonzero coefficients of the shifted
/// polynomials.  Sorted and deduplicated.
pub fn gather_set(spec: &NormalizedSpec) -> Vec<BigRational> {
    let mut set = BTreeSet::new();
    for v in &spec.initial {
        if !v.is_zero() {
            set.insert(v.clone());
        }
    }
    for poly in &spec.coeffs {
        for c in poly.coeffs() {
            if !c.is_zero() {
                set.insert(c.clone());
            }
        }
    }
    set.into_iter().collect()
}

/// Outcome of testing one prime.
#[derive(Debug, Clone)]
pub struct AdmissibilityReport {
    pub prime: u64,
    /// p divides neither numerator nor denominator of any element of the set.
    pub unit_set_ok: bool,
    /// Extension mode only: the trailing polynomial has no roots mod p.
    pub leading_no_roots_ok: Option<bool>,
    /// (element, reason) pairs for everything that disqualified this prime.
    pub rejected: Vec<(String, String)>,
}

impl AdmissibilityReport {
    pub fn admissible(&self) -> bool {
        self.unit_set_ok && self.leading_no_roots_ok.unwrap_or(true)
    }
}

/// Test a single prime against the unit condition (and the rootless
/// condition in extension mode).
pub fn check_admissible(spec: &NormalizedSpec, p: u64, extension_mode: bool) -> AdmissibilityReport {
    let mut rejected = Vec::new();
    let mut unit_set_ok = true;
    for q in gather_set(spec) {
        let v = rational_val_p(&q, p);
        if v != 0 {
            unit_set_ok = false;
            let side = if v > 0 { "numerator" } else { "denominator" };
            rejected.push((
                crate::qpoly::format_rational(&q),
                format!("p divides {side} (v_p = {v})"),
            ));
        }
    }

    let leading_no_roots_ok = if extension_mode {
        if !unit_set_ok {
            None // not meaningful: coefficients do not even reduce to units
        } else {
            let trailing = &spec.coeffs[spec.order - 1];
            // Coefficients are units here, so reduction mod p is exact.
            let residues: Vec<u64> = trailing
                .coeffs()
                .iter()
                .map(|c| reduce_unit_rational_mod_p(c, p))
                .collect();
            let root = (0..p).find(|&r| {
                let mut acc = 0u64;
                for c in residues.iter().rev() {
                    acc = (acc as u128 * r as u128 % p as u128) as u64;
                    acc = (acc + c) % p;
                }
                acc == 0
            });
            if let Some(r) = root {
                rejected.push((
                    trailing.to_string(),
                    format!("trailing coefficient has root {r} mod p"),
                ));
                Some(false)
            } else {
                Some(true)
            }
        }
    } else {
        None
    };

    AdmissibilityReport {
        prime: p,
        unit_set_ok,
        leading_no_roots_ok,
        rejected,
    }
}

/// Residue mod p of a rational that is a p-adic unit or p-integral.
fn reduce_unit_rational_mod_p(q: &BigRational, p: u64) -> u64 {
    if q.is_zero() {
        return 0;
    }
    let pb = num_bigint::BigInt::from(p);
    let num = q.numer().mod_floor(&pb).to_u64().expect("residue fits");
    let den = q.denom().mod_floor(&pb).to_u64().expect("residue fits");
    debug_assert!(den != 0, "denominator not a unit at p");
    // den^(p-2) mod p inverts the unit denominator.
    let mut inv = 1u64;
    let mut base = den % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            inv = (inv as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        e >>= 1;
    }
    (num as u128 * inv as u128 % p as u128) as u64
}

/// The `count` smallest admissible primes >= min_p, searching primes up to
/// `cap` (by value) before giving up.
pub fn admissible_primes(
    spec: &NormalizedSpec,
    count: usize,
    min_p: u64,
    extension_mode: bool,
    cap: u64,
) -> Result<Vec<u64>> {
    assert!(count >= 1);
    let mut out = Vec::with_capacity(count);
    let mut p = min_p.max(5);
    while p <= cap {
        if crate::padic::is_prime(p) && check_admissible(spec, p, extension_mode).admissible() {
            out.push(p);
            if out.len() == count {
                return Ok(out);
            }
        }
        p += 1;
    }
    Err(Error::NoAdmissiblePrime { cap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::QPoly;
    use crate::recurrence::RecurrenceSpec;
    use num_bigint::BigInt;

    fn rat(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn fib() -> NormalizedSpec {
        RecurrenceSpec::new(
            2,
            vec![QPoly::from_i64s(&[1]), QPoly::from_i64s(&[1])],
            vec![rat(0), rat(1)],
            2,
        )
        .validate(false)
        .unwrap()
    }

    fn interleaved() -> NormalizedSpec {
        let half = QPoly::new(vec![
            BigRational::new(BigInt::from(-1), BigInt::from(2)),
            BigRational::new(BigInt::from(1), BigInt::from(2)),
        ]);
        RecurrenceSpec::new(
            4,
            vec![QPoly::zero(), half, QPoly::zero(), QPoly::from_i64s(&[2])],
            vec![rat(0), rat(1), rat(0), rat(3), rat(0)],
            5,
        )
        .validate(false)
        .unwrap()
    }

    #[test]
    fn rational_valuations() {
        assert_eq!(rational_val_p(&rat(10), 5), 1);
        assert_eq!(rational_val_p(&rat(7), 5), 0);
        assert_eq!(
            rational_val_p(&BigRational::new(BigInt::from(1), BigInt::from(50)), 5),
            -2
        );
        assert_eq!(rational_val_p(&rat(-75), 5), 2);
    }

    #[test]
    fn unit_sets_of_the_fixtures() {
        assert_eq!(gather_set(&fib()), vec![rat(1)]);
        let s = gather_set(&interleaved());
        let expect: Vec<BigRational> = vec![
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            rat(1),
            rat(2),
            rat(3),
        ];
        assert_eq!(s, expect);

        // Zeros are excluded from the set.
        let zero_spec = RecurrenceSpec::new(
            1,
            vec![QPoly::from_i64s(&[1])],
            vec![rat(0)],
            1,
        )
        .validate(false)
        .unwrap();
        assert_eq!(gather_set(&zero_spec), vec![rat(1)]);
    }

    #[test]
    fn fibonacci_accepts_every_prime() {
        let spec = fib();
        assert_eq!(
            admissible_primes(&spec, 4, 5, false, 1000).unwrap(),
            vec![5, 7, 11, 13]
        );
    }

    #[test]
    fn interleaved_rejects_two_and_three() {
        let spec = interleaved();
        let at2 = check_admissible(&spec, 2, false);
        assert!(!at2.unit_set_ok);
        assert!(at2.rejected.iter().any(|(e, _)| e == "1/2"));
        let at3 = check_admissible(&spec, 3, false);
        assert!(!at3.unit_set_ok);
        assert!(at3.rejected.iter().any(|(e, _)| e == "3"));
        assert_eq!(
            admissible_primes(&spec, 3, 5, false, 1000).unwrap(),
            vec![5, 7, 11]
        );
    }

    #[test]
    fn extension_mode_needs_rootless_trailing() {
        // f(n) = f(n-1) + (z^2+2) f(n-2): z^2+2 is rootless mod 5 and 7 but
        // has the root 3 mod 11 (9 + 2 = 11).
        let spec = RecurrenceSpec::new(
            2,
            vec![QPoly::from_i64s(&[1]), QPoly::from_i64s(&[2, 0, 1])],
            vec![rat(1), rat(1)],
            2,
        )
        .validate(true)
        .unwrap();
        let r5 = check_admissible(&spec, 5, true);
        assert!(r5.admissible());
        assert_eq!(r5.leading_no_roots_ok, Some(true));
        let r11 = check_admissible(&spec, 11, true);
        assert!(!r11.admissible());
        assert_eq!(r11.leading_no_roots_ok, Some(false));
        assert!(r11.rejected.iter().any(|(_, r)| r.contains("root 3")));
        assert_eq!(
            admissible_primes(&spec, 3, 5, true, 1000).unwrap(),
            vec![5, 7, 13]
        );
    }

    #[test]
    fn trailing_z_exhausts_the_search() {
        // P_2(z) = z has the root 0 mod every prime.
        let spec = RecurrenceSpec::new(
            2,
            vec![QPoly::from_i64s(&[1]), QPoly::from_i64s(&[0, 1])],
            vec![rat(1), rat(1)],
            2,
        )
        .validate(true)
        .unwrap();
        assert!(matches!(
            admissible_primes(&spec, 1, 5, true, 200),
            Err(Error::NoAdmissiblePrime { cap: 200 })
        ));
    }

    #[test]
    fn without_extension_mode_no_root_check_is_run() {
        let r = check_admissible(&fib(), 5, false);
        assert!(r.admissible());
        assert_eq!(r.leading_no_roots_ok, None);
        assert!(r.rejected.is_empty());
    }
}
