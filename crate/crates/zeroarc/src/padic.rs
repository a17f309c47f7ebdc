//! Truncated p-adic integer arithmetic.
//!
//! Everything downstream works with residues mod p^W for a fixed prime p >= 5
//! and precision exponent W >= 2.  A [`PadicContext`] owns the pair (p, W) and
//! exposes the ring operations; a [`PadicInt`] is a canonical residue in
//! [0, p^W).  Two backing representations are used transparently: a single
//! `u64` word whenever p^W < 2^63 (so sums never overflow and products fit in
//! `u128`), and a `BigUint` otherwise.  All elements produced by one context
//! share one representation, so mixed-representation arithmetic never happens.
//!
//! Valuations are honest about truncation: a residue of 0 only tells us the
//! true valuation is at least W, reported as [`Valuation::Exhausted`] rather
//! than a number.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Residue arithmetic mod p^W.
#[derive(Debug, Clone)]
pub struct PadicContext {
    p: u64,
    w: u32,
    /// p^W as a word when it fits below 2^63, marking the fast backend.
    small_modulus: Option<u64>,
    /// p^W, always available for conversions.
    modulus: BigUint,
}

/// Canonical residue in [0, p^W) under some context's backend.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicInt(Repr);

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    Small(u64),
    Big(BigUint),
}

/// p-adic valuation of a truncated residue.
///
/// `Finite(v)` means the residue is exactly divisible by p^v with v < W.
/// `Exhausted` means the residue is 0 mod p^W: the true valuation is >= W,
/// and nothing more can be said at this precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(u32),
    Exhausted,
}

impl Valuation {
    /// Whether the valuation is known to be at least `t`.  `Exhausted`
    /// certifies any requirement up to W, and every requirement the pipeline
    /// makes is capped at W by construction.
    pub fn at_least(self, t: u32) -> bool {
        match self {
            Valuation::Finite(v) => v >= t,
            Valuation::Exhausted => true,
        }
    }

    pub fn is_exhausted(self) -> bool {
        matches!(self, Valuation::Exhausted)
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl PadicContext {
    /// Build a context for residues mod p^w.  Requires p to be a prime >= 5
    /// (2 and 3 break the valuation bookkeeping of the analytic steps) and
    /// w >= 2 (several operations peel off one power of p and must retain at
    /// least one digit of information).
    pub fn new(p: u64, w: u32) -> Result<Self> {
        if p < 5 || !is_prime(p) {
            return Err(Error::BadSpec(format!("p = {p} must be a prime >= 5")));
        }
        if w < 2 {
            return Err(Error::BadSpec(format!("precision w = {w} must be >= 2")));
        }
        let modulus = BigUint::from(p).pow(w);
        let small_modulus = modulus.to_u64().filter(|m| *m < (1u64 << 63));
        Ok(PadicContext {
            p,
            w,
            small_modulus,
            modulus,
        })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.w
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    // ---- constructors -----------------------------------------------------

    pub fn zero(&self) -> PadicInt {
        match self.small_modulus {
            Some(_) => PadicInt(Repr::Small(0)),
            None => PadicInt(Repr::Big(BigUint::zero())),
        }
    }

    pub fn one(&self) -> PadicInt {
        self.from_u64(1)
    }

    pub fn from_u64(&self, n: u64) -> PadicInt {
        match self.small_modulus {
            Some(m) => PadicInt(Repr::Small(n % m)),
            None => PadicInt(Repr::Big(BigUint::from(n) % &self.modulus)),
        }
    }

    pub fn from_i64(&self, n: i64) -> PadicInt {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_biguint(&self, n: &BigUint) -> PadicInt {
        let r = n % &self.modulus;
        match self.small_modulus {
            Some(_) => PadicInt(Repr::Small(r.to_u64().expect("residue fits modulus word"))),
            None => PadicInt(Repr::Big(r)),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> PadicInt {
        let m = BigInt::from(self.modulus.clone());
        let r = n.mod_floor(&m);
        self.from_biguint(&r.to_biguint().expect("mod_floor is nonnegative"))
    }

    /// Image of a rational number whose denominator is coprime to p.
    pub fn from_rational(&self, q: &BigRational) -> Result<PadicInt> {
        let den = q.denom();
        if den.magnitude().is_multiple_of(&BigUint::from(self.p)) {
            return Err(Error::DenominatorNotUnit {
                den: den.to_string(),
                p: self.p,
            });
        }
        let num = self.from_bigint(q.numer());
        let den = self.from_bigint(den);
        let inv = self.unit_inverse(&den)?;
        Ok(self.mul(&num, &inv))
    }

    /// p^e as a residue (0 when e >= W).
    pub fn pow_of_p(&self, e: u32) -> PadicInt {
        if e >= self.w {
            return self.zero();
        }
        self.from_biguint(&BigUint::from(self.p).pow(e))
    }

    // ---- ring operations --------------------------------------------------

    pub fn add(&self, a: &PadicInt, b: &PadicInt) -> PadicInt {
        match (&a.0, &b.0) {
            (Repr::Small(x), Repr::Small(y)) => {
                let m = self.small_modulus.expect("small operands imply small context");
                PadicInt(Repr::Small((x + y) % m))
            }
            (Repr::Big(x), Repr::Big(y)) => PadicInt(Repr::Big((x + y) % &self.modulus)),
            _ => unreachable!("mixed p-adic representations"),
        }
    }

    pub fn sub(&self, a: &PadicInt, b: &PadicInt) -> PadicInt {
        match (&a.0, &b.0) {
            (Repr::Small(x), Repr::Small(y)) => {
                let m = self.small_modulus.expect("small operands imply small context");
                PadicInt(Repr::Small((x + m - y) % m))
            }
            (Repr::Big(x), Repr::Big(y)) => {
                let s = (x + &self.modulus) - y;
                PadicInt(Repr::Big(s % &self.modulus))
            }
            _ => unreachable!("mixed p-adic representations"),
        }
    }

    pub fn neg(&self, a: &PadicInt) -> PadicInt {
        let z = self.zero();
        self.sub(&z, a)
    }

    pub fn mul(&self, a: &PadicInt, b: &PadicInt) -> PadicInt {
        match (&a.0, &b.0) {
            (Repr::Small(x), Repr::Small(y)) => {
                let m = self.small_modulus.expect("small operands imply small context") as u128;
                PadicInt(Repr::Small(((*x as u128 * *y as u128) % m) as u64))
            }
            (Repr::Big(x), Repr::Big(y)) => PadicInt(Repr::Big((x * y) % &self.modulus)),
            _ => unreachable!("mixed p-adic representations"),
        }
    }

    pub fn is_zero(&self, a: &PadicInt) -> bool {
        match &a.0 {
            Repr::Small(x) => *x == 0,
            Repr::Big(x) => x.is_zero(),
        }
    }

    // ---- valuation structure ----------------------------------------------

    /// Exact power of p dividing the residue, or `Exhausted` for residue 0.
    pub fn val(&self, a: &PadicInt) -> Valuation {
        match &a.0 {
            Repr::Small(x) => {
                if *x == 0 {
                    return Valuation::Exhausted;
                }
                let mut v = 0;
                let mut x = *x;
                while x % self.p == 0 {
                    x /= self.p;
                    v += 1;
                }
                Valuation::Finite(v)
            }
            Repr::Big(x) => {
                if x.is_zero() {
                    return Valuation::Exhausted;
                }
                let p = BigUint::from(self.p);
                let mut v = 0;
                let mut x = x.clone();
                loop {
                    let (q, r) = x.div_rem(&p);
                    if !r.is_zero() {
                        break;
                    }
                    x = q;
                    v += 1;
                }
                Valuation::Finite(v)
            }
        }
    }

    /// Multiplicative inverse of a unit (valuation 0) residue.
    pub fn unit_inverse(&self, a: &PadicInt) -> Result<PadicInt> {
        match &a.0 {
            Repr::Small(x) => {
                if *x == 0 || *x % self.p == 0 {
                    return Err(Error::NotAUnit);
                }
                let m = self.small_modulus.expect("small operands imply small context");
                Ok(PadicInt(Repr::Small(invert_mod_u64(*x, m))))
            }
            Repr::Big(x) => {
                if x.is_zero() || x.is_multiple_of(&BigUint::from(self.p)) {
                    return Err(Error::NotAUnit);
                }
                let xi = BigInt::from(x.clone());
                let mi = BigInt::from(self.modulus.clone());
                let e = xi.extended_gcd(&mi);
                debug_assert!(e.gcd.is_one());
                let inv = e.x.mod_floor(&mi);
                Ok(self.from_bigint(&inv))
            }
        }
    }

    /// Divide exactly by p^e, failing when the valuation is too small.  The
    /// result is a residue mod p^W again; its top e digits are unconstrained
    /// garbage in principle, which is why callers track trust levels
    /// separately instead of relying on this to preserve precision.
    pub fn exact_div_pow(&self, a: &PadicInt, e: u32) -> Result<PadicInt> {
        if e == 0 {
            return Ok(a.clone());
        }
        if e >= self.w {
            return Err(Error::PrecisionExhausted {
                needed: e + 1,
                have: self.w,
            });
        }
        match self.val(a) {
            Valuation::Exhausted => Ok(self.zero()),
            Valuation::Finite(v) if v >= e => match &a.0 {
                Repr::Small(x) => {
                    let pe = self.p.pow(e);
                    Ok(PadicInt(Repr::Small(*x / pe)))
                }
                Repr::Big(x) => {
                    let pe = BigUint::from(self.p).pow(e);
                    Ok(PadicInt(Repr::Big(x / pe)))
                }
            },
            Valuation::Finite(v) => Err(Error::NotDivisible { val: v, e }),
        }
    }

    // ---- views ------------------------------------------------------------

    /// Canonical residue in [0, p^W) as an integer.
    pub fn to_biguint(&self, a: &PadicInt) -> BigUint {
        match &a.0 {
            Repr::Small(x) => BigUint::from(*x),
            Repr::Big(x) => x.clone(),
        }
    }

    /// Residue of `a` mod p^t for t <= W, as an integer.  Used when a value
    /// is only trusted to a lower precision than the working one.
    pub fn reduce_to(&self, a: &PadicInt, t: u32) -> BigUint {
        debug_assert!(t <= self.w);
        self.to_biguint(a) % BigUint::from(self.p).pow(t)
    }
}

/// Extended-Euclid inverse for odd-prime-power word moduli.
fn invert_mod_u64(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "inverse of a non-unit requested");
    old_s.rem_euclid(m as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn ctx(p: u64, w: u32) -> PadicContext {
        PadicContext::new(p, w).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(PadicContext::new(4, 2).is_err());
        assert!(PadicContext::new(3, 2).is_err());
        assert!(PadicContext::new(2, 8).is_err());
        assert!(PadicContext::new(5, 1).is_err());
        assert!(PadicContext::new(5, 2).is_ok());
        assert!(PadicContext::new(1000003, 3).is_ok());
    }

    #[test]
    fn one_half_mod_25_is_13() {
        let c = ctx(5, 2);
        let x = c.from_rational(&rat(1, 2)).unwrap();
        // 2 * 13 = 26 = 1 mod 25.
        assert_eq!(c.to_biguint(&x), BigUint::from(13u32));
    }

    #[test]
    fn rational_with_p_in_denominator_is_rejected() {
        let c = ctx(5, 4);
        let err = c.from_rational(&rat(1, 10)).unwrap_err();
        assert!(matches!(err, Error::DenominatorNotUnit { p: 5, .. }));
    }

    #[test]
    fn valuation_splits_powers_of_p() {
        let c = ctx(5, 4);
        assert_eq!(c.val(&c.from_u64(10)), Valuation::Finite(1));
        assert_eq!(c.val(&c.from_u64(7)), Valuation::Finite(0));
        assert_eq!(c.val(&c.from_u64(125)), Valuation::Finite(3));
        assert_eq!(c.val(&c.from_u64(625)), Valuation::Exhausted);
        assert_eq!(c.val(&c.zero()), Valuation::Exhausted);
    }

    #[test]
    fn unit_inverse_matches_euclid_and_rejects_nonunits() {
        let c = ctx(5, 2);
        let two = c.from_u64(2);
        let inv = c.unit_inverse(&two).unwrap();
        assert_eq!(c.to_biguint(&inv), BigUint::from(13u32));
        assert!(matches!(
            c.unit_inverse(&c.from_u64(5)),
            Err(Error::NotAUnit)
        ));
        assert!(matches!(c.unit_inverse(&c.zero()), Err(Error::NotAUnit)));
    }

    #[test]
    fn exact_division_peels_powers() {
        let c = ctx(5, 4);
        let x = c.from_u64(25);
        assert_eq!(c.to_biguint(&c.exact_div_pow(&x, 2).unwrap()), BigUint::one());
        let err = c.exact_div_pow(&c.from_u64(10), 2).unwrap_err();
        assert!(matches!(err, Error::NotDivisible { val: 1, e: 2 }));
        // Dividing the zero residue is allowed: 0 / p^e = 0 at this precision.
        assert!(c.is_zero(&c.exact_div_pow(&c.zero(), 2).unwrap()));
        // e >= W can never be satisfied meaningfully.
        assert!(matches!(
            c.exact_div_pow(&c.from_u64(0), 4),
            Err(Error::PrecisionExhausted { .. })
        ));
    }

    #[test]
    fn negative_integers_reduce_canonically() {
        let c = ctx(5, 2);
        let x = c.from_i64(-1);
        assert_eq!(c.to_biguint(&x), BigUint::from(24u32));
        let y = c.from_bigint(&BigInt::from(-26));
        assert_eq!(c.to_biguint(&y), BigUint::from(24u32));
    }

    #[test]
    fn backends_agree_through_projection() {
        // 5^34 needs the big backend, 5^20 the small one; the projection
        // Z/p^34 -> Z/p^20 must commute with all ring operations.
        let big = ctx(5, 34);
        let small = ctx(5, 20);
        assert!(big.small_modulus.is_none());
        assert!(small.small_modulus.is_some());
        let pairs: [(i64, i64); 4] = [(17, -92), (35, 624), (-1, 1), (123456789, 5)];
        for (a, b) in pairs {
            let (ab, bb) = (big.from_i64(a), big.from_i64(b));
            let (as_, bs) = (small.from_i64(a), small.from_i64(b));
            for (lhs, rhs) in [
                (big.add(&ab, &bb), small.add(&as_, &bs)),
                (big.sub(&ab, &bb), small.sub(&as_, &bs)),
                (big.mul(&ab, &bb), small.mul(&as_, &bs)),
            ] {
                assert_eq!(
                    small.from_biguint(&big.to_biguint(&lhs)),
                    rhs,
                    "projection mismatch on ({a}, {b})"
                );
            }
        }
    }

    #[test]
    fn valuation_guard_interprets_exhaustion() {
        assert!(Valuation::Exhausted.at_least(7));
        assert!(Valuation::Finite(3).at_least(3));
        assert!(!Valuation::Finite(2).at_least(3));
    }

    #[test]
    fn inverse_roundtrips_on_units() {
        for (p, w) in [(5u64, 6u32), (7, 30), (11, 20)] {
            let c = ctx(p, w);
            for n in [1u64, 2, 3, 1_000_003, 98_765_432_109] {
                let x = c.from_u64(n);
                if c.val(&x) != Valuation::Finite(0) {
                    continue;
                }
                let inv = c.unit_inverse(&x).unwrap();
                assert_eq!(c.mul(&x, &inv), c.one(), "x * x^-1 != 1 for {n} mod {p}^{w}");
            }
        }
    }
}
