//! Analytic arcs: interpolating a residue-class subsequence by a p-adic
//! series in the binomial basis.
//!
//! Each residue class hands us a matrix A(z) in M_d(Z_p[pz]) with
//! A(n) === I mod p and a start vector v; the matrix carries the state at
//! the n-th class element to the (n+1)-th, so the states along the class
//! satisfy y(n+1) = A(n+1) y(n).  (Z_p[pz] is stable under z -> z+1, and so
//! is A === I mod p, so the shifted matrix is as good a citizen as the
//! original.)  This module builds polynomial tuples G_i that satisfy that
//! relation to ever-deeper p-adic precision:
//!
//! * start from the constants G_i = v_i;
//! * at step m the defect G_i(z+1) - Σ_j a_ij(z+1) G_j(z) is divisible by
//!   p^(m+1) (checked, not assumed); divide it out, reduce mod p to a
//!   polynomial of degree <= 2m+1 (the dropped coefficients must be
//!   non-units — also checked), and cancel it with an exact antidifference H
//!   of degree <= 2m+2 vanishing at 0;
//! * update G_i += p^(m+1) H_i and repeat.
//!
//! Why degree 2m+1: the class matrix lives in Z_p[pz], whose k-th binomial
//! coefficient has valuation >= k, i.e. a p-layer decomposition whose p^k
//! layer has degree <= k.  Feeding that profile and the accumulated
//! increment degrees (deg H_k <= 2k) through the defect shows the p^(m+1)
//! layer of the defect has degree at most 2m+1, with the worst term coming
//! from the p^1 layer of the matrix times the newest increment.  That bound
//! is tight already at m = 0 whenever the recurrence has non-constant
//! coefficients, so truncating lower would discard unit coefficients.
//!
//! The corrections shrink geometrically, so after M steps the coefficients
//! agree with the limiting analytic interpolation modulo p^(M+1), the degree
//! stays <= 2M, and the k-th coefficient has valuation >= ceil(k/2) — the
//! tail decay that later makes the zero-counting step legitimate.  Every one
//! of these claims is asserted at runtime; a violation is a bug, never a
//! property of the input.

use crate::companion::ClassSystem;
use crate::error::{Error, Result};
use crate::mahler::MahlerPoly;
use crate::padic::{PadicContext, PadicInt};

/// A truncated interpolation series for one state component along one
/// residue class: f_i(n) = Σ_k beta_k C(n, k), with f_i(n) equal to the
/// state component at the n-th class element modulo p^trusted_exp.
#[derive(Debug, Clone)]
pub struct ArcSeries {
    /// State component index (0-based; component 0 carries f itself).
    pub component: usize,
    /// The approximant; coefficient k is beta_k, degree <= 2 iterations.
    pub poly: MahlerPoly,
    /// Number of refinement steps performed (M).
    pub iterations: u32,
    /// Coefficients and values match the limiting series mod p^(M+1).
    pub trusted_exp: u32,
}

impl ArcSeries {
    pub fn beta(&self, ctx: &PadicContext, k: usize) -> PadicInt {
        self.poly.coeff(ctx, k)
    }

    /// Largest coefficient index carried: K = 2M.  Beyond it the tail law
    /// already puts every coefficient below the trusted precision p^(M+1).
    pub fn k_max(&self) -> usize {
        2 * self.iterations as usize
    }

    /// Σ beta_k C(n, k) mod p^W; trustworthy mod p^trusted_exp.
    pub fn eval(&self, ctx: &PadicContext, n: i64) -> PadicInt {
        self.poly.eval_int(ctx, n)
    }
}

/// Everything a lift produces: the d component series plus the per-iteration
/// increment degrees (h_degrees[m][i] = deg H_i produced at step m, None for
/// a zero increment), kept for the degree-law diagnostics.
#[derive(Debug, Clone)]
pub struct LiftOutcome {
    pub series: Vec<ArcSeries>,
    pub h_degrees: Vec<Vec<Option<usize>>>,
}

/// Solve the decoupled first-order difference system
/// H_i(z+1) - H_i(z) === -Q_i(z) (mod p), exactly on the low parts.
///
/// Each Q_i must be congruent mod p to a polynomial of degree <= bound: the
/// coefficients above the bound are required to be non-units.  The solution
/// is the exact antidifference of the low part, so deg H_i <= bound + 1 and
/// H_i(0) = 0 with no division anywhere.
pub fn solve_difference_system(
    ctx: &PadicContext,
    q: &[MahlerPoly],
    bound: usize,
) -> Result<Vec<MahlerPoly>> {
    let mut out = Vec::with_capacity(q.len());
    for (component, qi) in q.iter().enumerate() {
        let (low, dropped) = qi.truncate_deg(ctx, bound);
        if dropped.iter().any(|c| !ctx.val(c).at_least(1)) {
            return Err(Error::DegreeBoundViolated { component, bound });
        }
        out.push(low.antidifference_neg(ctx));
    }
    Ok(out)
}

/// Run M refinement steps on a class system, producing one series per state
/// component.
pub fn lift(ctx: &PadicContext, class: &ClassSystem, m_iters: u32) -> Result<LiftOutcome> {
    if ctx.precision() < m_iters + 2 {
        return Err(Error::PrecisionExhausted {
            needed: m_iters + 2,
            have: ctx.precision(),
        });
    }
    let d = class.d;
    let mut g: Vec<MahlerPoly> = class
        .v
        .iter()
        .map(|v| MahlerPoly::constant(ctx, v.clone()))
        .collect();
    let mut h_degrees = Vec::with_capacity(m_iters as usize);

    // The class matrix carries y(c + bz) to y(c + b(z+1)) with argument z+1,
    // so the equation the arcs satisfy is G(z+1) = A(z+1) G(z).
    let a_next: Vec<MahlerPoly> = class.a.iter().map(|a| a.shift_arg(ctx)).collect();

    for m in 0..m_iters {
        // Defects, divided down by p^(m+1) and reduced to degree <= 2m+1.
        let mut q_low = Vec::with_capacity(d);
        for i in 0..d {
            let shifted = g[i].shift_arg(ctx);
            let mut rhs = MahlerPoly::zero();
            for j in 0..d {
                rhs = rhs.add(ctx, &a_next[i * d + j].mul(ctx, &g[j]));
            }
            let defect = shifted.sub(ctx, &rhs);
            if !defect.min_val(ctx).at_least(m + 1) {
                return Err(Error::DefectNotDivisible {
                    iteration: m,
                    component: i,
                    needed: m + 1,
                });
            }
            let q = defect.div_exact_pow(ctx, m + 1)?;
            let (low, dropped) = q.truncate_deg(ctx, 2 * m as usize + 1);
            if dropped.iter().any(|c| !ctx.val(c).at_least(1)) {
                return Err(Error::TruncationShapeViolated {
                    iteration: m,
                    component: i,
                });
            }
            q_low.push(low);
        }

        let hs = solve_difference_system(ctx, &q_low, 2 * m as usize + 1)?;
        let mut degs = Vec::with_capacity(d);
        for (i, h) in hs.iter().enumerate() {
            // Degree law: the increment born at step m has degree <= 2m+2,
            // i.e. <= 2k for the k = m+1 it belongs to.
            if h.degree().is_some_and(|deg| deg > 2 * m as usize + 2) {
                return Err(Error::Internal(format!(
                    "increment degree {} exceeds {} at iteration {m}, component {i}",
                    h.degree().unwrap(),
                    2 * m + 2
                )));
            }
            degs.push(h.degree());
            g[i] = g[i].add(ctx, &h.scale_pow_p(ctx, m + 1));
        }
        h_degrees.push(degs);
    }

    // Package, asserting the shape every consumer relies on.
    let mut series = Vec::with_capacity(d);
    for (i, gi) in g.into_iter().enumerate() {
        if gi.degree().is_some_and(|deg| deg > 2 * m_iters as usize) {
            return Err(Error::Internal(format!(
                "arc degree {} exceeds {} for component {i}",
                gi.degree().unwrap(),
                2 * m_iters
            )));
        }
        if gi.coeff(ctx, 0) != class.v[i] {
            return Err(Error::Internal(format!(
                "arc constant term disagrees with the start vector at component {i}"
            )));
        }
        for (k, coeff) in gi.coeffs().iter().enumerate().skip(1) {
            let need = k.div_ceil(2) as u32;
            let need = need.max(1).min(ctx.precision());
            if !ctx.val(coeff).at_least(need) {
                return Err(Error::Internal(format!(
                    "tail law fails at coefficient {k} of component {i}"
                )));
            }
        }
        series.push(ArcSeries {
            component: i,
            poly: gi,
            iterations: m_iters,
            trusted_exp: m_iters + 1,
        });
    }
    Ok(LiftOutcome { series, h_degrees })
}
