//! Zero counting for truncated interpolation series.
//!
//! A series in the binomial basis with the arc tail law (coefficient k has
//! valuation >= ceil(k/2)) is rigid analytic on Z_p, so the classical
//! statement applies: writing it as a power series Σ a_j z^j, if some
//! coefficient dominates — val(a_N) minimal, N the largest such index — the
//! series has at most N zeros in Z_p.
//!
//! Working mod p^W rules out rational arithmetic on the 1/k! factors, so
//! the conversion is scaled by K!: with s(k, j) the signed Stirling numbers
//! of the first kind, C(z,k) = (1/k!) Σ_j s(k,j) z^j, and
//!
//!   N_j := Σ_{k=j}^{K} beta_k · s(k,j) · (K!/k!)
//!
//! is an integer combination with val(a_j) = val(N_j) - v_p(K!).  The
//! common shift by v_p(K!) cancels in every comparison, so the dominance
//! analysis runs directly on the N_j.
//!
//! Two thresholds temper the verdict.  The truncation threshold tau bounds
//! the coefficients beyond the carried range via the tail law,
//! tau = min_{k>K} (ceil(k/2) - v_p(k!)), positive and unbounded for p >= 5;
//! a dominant coefficient below tau cannot be disturbed by the dropped
//! tail.  And coefficients are only trusted to a stated precision: a
//! valuation at or above it reads as "vanishes to precision", never as an
//! exact value.

use crate::arc::ArcSeries;
use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicInt, Valuation};

/// A truncated series in the binomial basis with the tail law attached:
/// coefficients beyond index `k` have valuation >= ceil(k/2), and the
/// carried coefficients are meaningful modulo p^trusted_exp.
#[derive(Debug, Clone)]
pub struct RigidSeries {
    /// Coefficients beta_0 .. beta_K (trailing zeros may be trimmed).
    pub coeffs: Vec<PadicInt>,
    /// Nominal truncation index K.
    pub k: usize,
    /// Coefficients are exact modulo p^trusted_exp.
    pub trusted_exp: u32,
}

impl RigidSeries {
    pub fn from_arc(s: &ArcSeries) -> Self {
        RigidSeries {
            coeffs: s.poly.coeffs().to_vec(),
            k: s.k_max(),
            trusted_exp: s.trusted_exp,
        }
    }
}

/// How the dominance analysis came out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrassmanStatus {
    /// A coefficient dominates below every disturbance threshold: the series
    /// has at most `bound` zeros in Z_p.
    Bounded,
    /// Every carried coefficient vanishes modulo p^trusted_exp; the series
    /// is indistinguishable from zero at this precision.
    VanishingToPrecision,
    /// Some coefficient is nonzero but dominance cannot be certified at
    /// this precision; escalate and retry.
    Inconclusive,
}

/// Power-basis coefficient valuations (shifted by v_p(K!)) plus the
/// thresholds needed to interpret them.
#[derive(Debug, Clone)]
pub struct PowerCoeffs {
    /// val(N_j) for j = 0..=K; None means at or above the trusted precision.
    pub vals: Vec<Option<u32>>,
    /// Truncation threshold in unshifted (a_j) units.
    pub tau: i64,
    /// v_p(K!), the common shift between N_j and a_j valuations.
    pub shift: u32,
    /// Precision the valuations are meaningful against.
    pub trusted_exp: u32,
}

#[derive(Debug, Clone)]
pub struct StrassmanResult {
    pub status: StrassmanStatus,
    /// Largest dominant index: at most this many zeros in Z_p (Bounded only).
    pub bound: Option<usize>,
    /// Minimal coefficient valuation in unshifted units (Bounded only).
    pub min_val: Option<i64>,
    pub tau: i64,
}

/// v_p(k!) via the base-p digit sum: (k - s_p(k)) / (p - 1).
pub fn vp_factorial(p: u64, k: u64) -> u32 {
    let mut digit_sum = 0u64;
    let mut n = k;
    while n > 0 {
        digit_sum += n % p;
        n /= p;
    }
    ((k - digit_sum) / (p - 1)) as u32
}

/// tau(K) = min_{k > K} (ceil(k/2) - v_p(k!)): any coefficient beyond the
/// truncation has valuation at least tau by the tail law.  The minimum is
/// effective: ceil(k/2) - v_p(k!) >= k/2 - (k-1)/(p-1) grows without bound
/// for p >= 5, so the scan stops once that envelope passes the running
/// minimum.
pub fn tau(p: u64, k_trunc: usize) -> i64 {
    let mut best: Option<i64> = None;
    let mut k = k_trunc as u64 + 1;
    loop {
        let ceil_half = k.div_ceil(2) as i64;
        if let Some(b) = best {
            // Envelope check: ceil(k/2) - (k-1)/(p-1) >= b stops the scan.
            if (p as i64 - 1) * (ceil_half - b) >= k as i64 - 1 {
                break;
            }
        }
        let g = ceil_half - vp_factorial(p, k) as i64;
        if best.map_or(true, |b| g < b) {
            best = Some(g);
        }
        k += 1;
    }
    best.expect("tau scan visits at least one index")
}

/// Signed Stirling numbers of the first kind modulo p^W, rows 0..=k_max,
/// by the triangle s(k+1, j) = s(k, j-1) - k * s(k, j).
pub fn stirling_rows(ctx: &PadicContext, k_max: usize) -> Vec<Vec<PadicInt>> {
    let mut rows: Vec<Vec<PadicInt>> = Vec::with_capacity(k_max + 1);
    rows.push(vec![ctx.one()]);
    for k in 0..k_max {
        let prev = &rows[k];
        let kf = ctx.from_u64(k as u64);
        let mut row = Vec::with_capacity(k + 2);
        for j in 0..=k + 1 {
            let from_left = if j >= 1 { prev[j - 1].clone() } else { ctx.zero() };
            let from_same = if j <= k {
                ctx.mul(&kf, &prev[j])
            } else {
                ctx.zero()
            };
            row.push(ctx.sub(&from_left, &from_same));
        }
        rows.push(row);
    }
    rows
}

/// Convert a rigid series to power-coefficient valuations and thresholds.
#[allow(clippy::needless_range_loop)] // triangular double-index sums read best as written
pub fn to_power_coeffs(ctx: &PadicContext, s: &RigidSeries) -> Result<PowerCoeffs> {
    let p = ctx.prime();
    let k_top = s.k;
    let shift = vp_factorial(p, k_top as u64);
    if shift >= s.trusted_exp {
        return Err(Error::PrecisionExhausted {
            needed: shift + 1,
            have: s.trusted_exp,
        });
    }

    let stirling = stirling_rows(ctx, k_top);
    // ratios[k] = K!/k! = (k+1)(k+2)...K.
    let mut ratios = vec![ctx.one(); k_top + 1];
    for k in (0..k_top).rev() {
        ratios[k] = ctx.mul(&ratios[k + 1], &ctx.from_u64(k as u64 + 1));
    }

    let beta = |k: usize| -> PadicInt {
        s.coeffs.get(k).cloned().unwrap_or_else(|| ctx.zero())
    };
    let mut vals = Vec::with_capacity(k_top + 1);
    for j in 0..=k_top {
        let mut n_j = ctx.zero();
        for k in j..=k_top {
            let term = ctx.mul(&ctx.mul(&beta(k), &stirling[k][j]), &ratios[k]);
            n_j = ctx.add(&n_j, &term);
        }
        vals.push(match ctx.val(&n_j) {
            Valuation::Finite(v) if v < s.trusted_exp => Some(v),
            _ => None,
        });
    }

    Ok(PowerCoeffs {
        vals,
        tau: tau(p, k_top),
        shift,
        trusted_exp: s.trusted_exp,
    })
}

/// Dominance analysis on converted coefficients.
pub fn strassman_bound(pc: &PowerCoeffs) -> StrassmanResult {
    let finite = pc.vals.iter().enumerate().filter_map(|(j, v)| v.map(|v| (j, v)));
    let v_star = finite.clone().map(|(_, v)| v).min();
    match v_star {
        None => StrassmanResult {
            status: StrassmanStatus::VanishingToPrecision,
            bound: None,
            min_val: None,
            tau: pc.tau,
        },
        Some(v) => {
            let min_val = v as i64 - pc.shift as i64;
            if min_val < pc.tau {
                let bound = finite.filter(|&(_, w)| w == v).map(|(j, _)| j).max();
                StrassmanResult {
                    status: StrassmanStatus::Bounded,
                    bound,
                    min_val: Some(min_val),
                    tau: pc.tau,
                }
            } else {
                StrassmanResult {
                    status: StrassmanStatus::Inconclusive,
                    bound: None,
                    min_val: Some(min_val),
                    tau: pc.tau,
                }
            }
        }
    }
}

/// Full analysis of one arc series.
pub fn analyze_series(ctx: &PadicContext, s: &ArcSeries) -> Result<StrassmanResult> {
    Ok(strassman_bound(&to_power_coeffs(ctx, &RigidSeries::from_arc(s))?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mahler::MahlerPoly;
    use num_bigint::BigInt;

    fn series(ctx: &PadicContext, coeffs: &[i64], trusted: u32) -> RigidSeries {
        let poly = MahlerPoly::new(ctx, coeffs.iter().map(|&c| ctx.from_i64(c)).collect());
        RigidSeries {
            coeffs: poly.coeffs().to_vec(),
            k: coeffs.len().saturating_sub(1),
            trusted_exp: trusted,
        }
    }

    #[test]
    fn vp_factorial_matches_legendre_sums() {
        for p in [5u64, 7, 13] {
            for k in 0..200u64 {
                let legendre: u32 = {
                    let mut total = 0u64;
                    let mut q = p;
                    while q <= k {
                        total += k / q;
                        q *= p;
                    }
                    total as u32
                };
                assert_eq!(vp_factorial(p, k), legendre, "p = {p}, k = {k}");
            }
        }
    }

    #[test]
    #[allow(clippy::needless_range_loop)] // triangular identities, index style
    fn stirling_rows_match_known_values_and_falling_factorials() {
        let c = PadicContext::new(5, 12).unwrap();
        let rows = stirling_rows(&c, 5);
        // Frozen rows of the signed triangle.
        let row4: Vec<i64> = vec![0, -6, 11, -6, 1];
        let row5: Vec<i64> = vec![0, 24, -50, 35, -10, 1];
        for (j, &v) in row4.iter().enumerate() {
            assert_eq!(rows[4][j], c.from_i64(v), "s(4, {j})");
        }
        for (j, &v) in row5.iter().enumerate() {
            assert_eq!(rows[5][j], c.from_i64(v), "s(5, {j})");
        }
        // Independent identity: z(z-1)...(z-k+1) = Σ_j s(k,j) z^j at z = 8.
        for k in 0..=5usize {
            let z = BigInt::from(8);
            let mut falling = BigInt::from(1);
            for i in 0..k {
                falling *= &z - BigInt::from(i as i64);
            }
            let mut sum = c.zero();
            let mut zpow = c.one();
            for j in 0..=k {
                sum = c.add(&sum, &c.mul(&rows[k][j], &zpow));
                zpow = c.mul(&zpow, &c.from_i64(8));
            }
            assert_eq!(sum, c.from_bigint(&falling), "falling factorial k = {k}");
        }
        // Row sums vanish for k >= 2 (the falling factorial has root 1).
        for k in 2..=5usize {
            let mut sum = c.zero();
            for j in 0..=k {
                sum = c.add(&sum, &rows[k][j]);
            }
            assert!(c.is_zero(&sum), "row sum k = {k}");
        }
    }

    #[test]
    fn frozen_power_coefficient_valuations() {
        // f = 5z + 25 C(z,2) = 5z + (25/2)(z^2 - z): val(a_1) = val(5 - 25/2)
        // = 1, val(a_2) = val(25/2) = 2.
        let c = PadicContext::new(5, 8).unwrap();
        let s = series(&c, &[0, 5, 25], 8);
        let pc = to_power_coeffs(&c, &s).unwrap();
        assert_eq!(pc.shift, 0); // v_5(2!) = 0
        assert_eq!(pc.vals, vec![None, Some(1), Some(2)]);
        let r = strassman_bound(&pc);
        assert_eq!(r.status, StrassmanStatus::Bounded);
        assert_eq!(r.bound, Some(1)); // at most one zero (it is z = 0)
        assert_eq!(r.min_val, Some(1));
    }

    #[test]
    fn constant_and_identity_series() {
        let c = PadicContext::new(5, 8).unwrap();
        let constant = to_power_coeffs(&c, &series(&c, &[3], 8)).unwrap();
        assert_eq!(constant.vals, vec![Some(0)]);
        let r = strassman_bound(&constant);
        assert_eq!(r.status, StrassmanStatus::Bounded);
        assert_eq!(r.bound, Some(0)); // a nonzero constant has no zeros

        let ident = to_power_coeffs(&c, &series(&c, &[0, 1], 8)).unwrap();
        assert_eq!(ident.vals, vec![None, Some(0)]);
        let r = strassman_bound(&ident);
        assert_eq!(r.bound, Some(1));
    }

    #[test]
    fn vanishing_and_inconclusive_verdicts() {
        let c = PadicContext::new(5, 8).unwrap();
        // All coefficients zero mod the trusted precision.
        let z = series(&c, &[0, 0, 0], 3);
        let r = strassman_bound(&to_power_coeffs(&c, &z).unwrap());
        assert_eq!(r.status, StrassmanStatus::VanishingToPrecision);
        assert_eq!(r.bound, None);

        // Valuations at the trusted precision read as vanishing too.
        let deep = series(&c, &[125, 0, 0], 3);
        let r = strassman_bound(&to_power_coeffs(&c, &deep).unwrap());
        assert_eq!(r.status, StrassmanStatus::VanishingToPrecision);

        // val 2 constant at K = 2: tau = 2 is not beaten, so no verdict.
        let v2 = series(&c, &[25, 0, 0], 8);
        let pc = to_power_coeffs(&c, &v2).unwrap();
        assert_eq!(pc.tau, 2);
        let r = strassman_bound(&pc);
        assert_eq!(r.status, StrassmanStatus::Inconclusive);

        // One digit shallower and dominance is restored.
        let v1 = series(&c, &[5, 0, 0], 8);
        let r = strassman_bound(&to_power_coeffs(&c, &v1).unwrap());
        assert_eq!(r.status, StrassmanStatus::Bounded);
        assert_eq!(r.bound, Some(0));
    }

    #[test]
    fn polynomial_with_integer_roots_is_bounded_by_its_degree() {
        let c = PadicContext::new(5, 10).unwrap();
        // (z-1)(z-2) = z^2 - 3z + 2 in the binomial basis.
        let mono = [c.from_i64(2), c.from_i64(-3), c.from_i64(1)];
        let poly = MahlerPoly::from_monomial(&c, &mono);
        let s = RigidSeries {
            coeffs: poly.coeffs().to_vec(),
            k: 2,
            trusted_exp: 10,
        };
        let r = strassman_bound(&to_power_coeffs(&c, &s).unwrap());
        assert_eq!(r.status, StrassmanStatus::Bounded);
        assert!(r.bound.unwrap() >= 2, "two integer roots demand bound >= 2");
    }

    #[test]
    fn tau_is_positive_and_monotone_in_truncation() {
        for p in [5u64, 7, 11] {
            let mut prev = None;
            for k in [4usize, 8, 16, 32, 64] {
                let t = tau(p, k);
                assert!(t > 0, "tau must be positive at p = {p}, K = {k}");
                if let Some(prev) = prev {
                    assert!(t >= prev, "tau must not shrink as K grows");
                }
                prev = Some(t);
            }
        }
    }

    #[test]
    fn tau_matches_direct_scan() {
        for p in [5u64, 7] {
            for k_trunc in [2usize, 5, 10, 31] {
                let direct = (k_trunc as u64 + 1..k_trunc as u64 + 600)
                    .map(|k| k.div_ceil(2) as i64 - vp_factorial(p, k) as i64)
                    .min()
                    .unwrap();
                assert_eq!(tau(p, k_trunc), direct, "p = {p}, K = {k_trunc}");
            }
        }
    }

    #[test]
    fn conversion_needs_guard_digits() {
        let c = PadicContext::new(5, 8).unwrap();
        // K = 30 gives v_5(30!) = 7; trusting only 4 digits leaves nothing.
        let mut coeffs = vec![0i64; 31];
        coeffs[1] = 1;
        let s = series(&c, &coeffs, 4);
        assert!(matches!(
            to_power_coeffs(&c, &s),
            Err(Error::PrecisionExhausted { needed: 8, have: 4 })
        ));
    }
}
