//! Polynomials in the binomial-coefficient basis over truncated p-adics.
//!
//! A [`MahlerPoly`] is a finite sum  Σ_k a_k C(z, k)  with residue
//! coefficients, where C(z, k) = z(z-1)...(z-k+1)/k! is the falling-factorial
//! binomial.  This basis is the natural home for interpolation along residue
//! classes: the coefficients of an integer-valued function are recovered by
//! forward differences of its value table, the shift z -> z+1 is a local
//! two-term rule, and — crucially for building analytic arcs — the first
//! difference operator has an exact polynomial antiderivative here, with no
//! denominators appearing anywhere.
//!
//! All operations are images of exact computations on integer-valued
//! polynomials over the p-adic integers, so performing them directly on
//! residues mod p^W yields the correct residues: value tables, forward
//! differences, and the Pascal recurrences only ever add and multiply.

use num_bigint::BigInt;

use crate::error::Result;
use crate::padic::{PadicContext, PadicInt, Valuation};

/// Polynomial Σ a_k C(z, k), coefficients low index first, trailing zero
/// residues trimmed (so the zero polynomial is the empty vector).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MahlerPoly {
    coeffs: Vec<PadicInt>,
}

impl MahlerPoly {
    pub fn new(ctx: &PadicContext, mut coeffs: Vec<PadicInt>) -> Self {
        while coeffs.last().is_some_and(|c| ctx.is_zero(c)) {
            coeffs.pop();
        }
        MahlerPoly { coeffs }
    }

    pub fn zero() -> Self {
        MahlerPoly { coeffs: Vec::new() }
    }

    pub fn constant(ctx: &PadicContext, c: PadicInt) -> Self {
        Self::new(ctx, vec![c])
    }

    pub fn coeffs(&self) -> &[PadicInt] {
        &self.coeffs
    }

    pub fn coeff(&self, ctx: &PadicContext, k: usize) -> PadicInt {
        self.coeffs.get(k).cloned().unwrap_or_else(|| ctx.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree as a residue object (highest index with a nonzero residue).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    // ---- conversions ------------------------------------------------------

    /// Convert monomial coefficients (low first) to the binomial basis by
    /// tabulating values at 0..=deg and taking iterated forward differences:
    /// a_k = (Δ^k P)(0).
    pub fn from_monomial(ctx: &PadicContext, monomial: &[PadicInt]) -> Self {
        let mut monomial = monomial.to_vec();
        while monomial.last().is_some_and(|c| ctx.is_zero(c)) {
            monomial.pop();
        }
        if monomial.is_empty() {
            return Self::zero();
        }
        let deg = monomial.len() - 1;
        let table: Vec<PadicInt> = (0..=deg as u64)
            .map(|n| {
                // Horner at z = n.
                let zn = ctx.from_u64(n);
                let mut acc = ctx.zero();
                for c in monomial.iter().rev() {
                    acc = ctx.add(&ctx.mul(&acc, &zn), c);
                }
                acc
            })
            .collect();
        Self::from_value_table(ctx, table)
    }

    /// Recover binomial-basis coefficients from the values at 0..=deg by
    /// in-place forward differencing.
    fn from_value_table(ctx: &PadicContext, mut v: Vec<PadicInt>) -> Self {
        let n = v.len();
        for round in 1..n {
            for i in (round..n).rev() {
                v[i] = ctx.sub(&v[i], &v[i - 1]);
            }
        }
        Self::new(ctx, v)
    }

    /// Values at z = 0, 1, ..., upto, via a running Pascal row for C(n, k).
    pub fn value_table(&self, ctx: &PadicContext, upto: usize) -> Vec<PadicInt> {
        let deg = self.coeffs.len();
        // row[k] = C(n, k) for the current n, truncated at the degree.
        let mut row: Vec<PadicInt> = vec![ctx.zero(); deg];
        let mut out = Vec::with_capacity(upto + 1);
        for n in 0..=upto {
            if n == 0 {
                if let Some(r0) = row.first_mut() {
                    *r0 = ctx.one();
                }
            } else {
                for k in (1..deg.min(n + 1)).rev() {
                    row[k] = ctx.add(&row[k], &row[k - 1]);
                }
            }
            let mut acc = ctx.zero();
            for (a, c) in self.coeffs.iter().zip(&row) {
                acc = ctx.add(&acc, &ctx.mul(a, c));
            }
            out.push(acc);
        }
        out
    }

    /// Evaluate at an arbitrary integer, including negative arguments, where
    /// C(n, k) is the generalized binomial n(n-1)...(n-k+1)/k! — always an
    /// integer, computed exactly before reduction.
    pub fn eval_int(&self, ctx: &PadicContext, n: i64) -> PadicInt {
        let mut acc = ctx.zero();
        let mut binom = BigInt::from(1);
        for (k, a) in self.coeffs.iter().enumerate() {
            if k > 0 {
                // C(n, k) = C(n, k-1) * (n - k + 1) / k, exact at every step.
                binom *= BigInt::from(n - k as i64 + 1);
                binom /= BigInt::from(k as i64);
            }
            acc = ctx.add(&acc, &ctx.mul(a, &ctx.from_bigint(&binom)));
        }
        acc
    }

    // ---- ring operations --------------------------------------------------

    pub fn add(&self, ctx: &PadicContext, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(ctx.add(&self.coeff(ctx, k), &other.coeff(ctx, k)));
        }
        Self::new(ctx, out)
    }

    pub fn sub(&self, ctx: &PadicContext, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(ctx.sub(&self.coeff(ctx, k), &other.coeff(ctx, k)));
        }
        Self::new(ctx, out)
    }

    pub fn scale(&self, ctx: &PadicContext, c: &PadicInt) -> Self {
        Self::new(ctx, self.coeffs.iter().map(|a| ctx.mul(a, c)).collect())
    }

    /// Product via value tables: tabulate both factors at 0..=(da+db),
    /// multiply pointwise, and difference back.  This sidesteps the messy
    /// closed form for C(z,i)*C(z,j) in the binomial basis.
    pub fn mul(&self, ctx: &PadicContext, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let deg = (self.coeffs.len() - 1) + (other.coeffs.len() - 1);
        let va = self.value_table(ctx, deg);
        let vb = other.value_table(ctx, deg);
        let prod = va
            .iter()
            .zip(&vb)
            .map(|(a, b)| ctx.mul(a, b))
            .collect::<Vec<_>>();
        Self::from_value_table(ctx, prod)
    }

    // ---- difference calculus ----------------------------------------------

    /// G(z + 1): Pascal turns each C(z+1, k) into C(z, k) + C(z, k-1), so the
    /// new coefficient at k is a_k + a_{k+1}.
    pub fn shift_arg(&self, ctx: &PadicContext) -> Self {
        let n = self.coeffs.len();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let hi = self.coeff(ctx, k + 1);
            out.push(ctx.add(&self.coeffs[k], &hi));
        }
        Self::new(ctx, out)
    }

    /// The polynomial H with H(z+1) - H(z) = -Q(z) and H(0) = 0, namely
    /// H = -Σ_k a_k C(z, k+1).  Exact: no division happens, so this is the
    /// step that makes the binomial basis the right one for solving
    /// first-order difference systems without losing p-adic precision.
    pub fn antidifference_neg(&self, ctx: &PadicContext) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(ctx.zero());
        for a in &self.coeffs {
            out.push(ctx.neg(a));
        }
        Self::new(ctx, out)
    }

    /// Split off everything above `deg`: returns the truncation and the
    /// dropped coefficients (indices deg+1..), which callers inspect to check
    /// the shape guarantees their truncation relies on.
    pub fn truncate_deg(&self, ctx: &PadicContext, deg: usize) -> (Self, Vec<PadicInt>) {
        if self.coeffs.len() <= deg + 1 {
            return (self.clone(), Vec::new());
        }
        let kept = self.coeffs[..=deg].to_vec();
        let dropped = self.coeffs[deg + 1..].to_vec();
        (Self::new(ctx, kept), dropped)
    }

    /// Minimum valuation over the coefficients; `Exhausted` for the zero
    /// polynomial.  "All coefficients divisible by p^t" is exactly
    /// `min_val().at_least(t)`.
    pub fn min_val(&self, ctx: &PadicContext) -> Valuation {
        let mut best = Valuation::Exhausted;
        for a in &self.coeffs {
            match (ctx.val(a), best) {
                (Valuation::Finite(v), Valuation::Finite(b)) if v < b => {
                    best = Valuation::Finite(v);
                }
                (Valuation::Finite(v), Valuation::Exhausted) => {
                    best = Valuation::Finite(v);
                }
                _ => {}
            }
        }
        best
    }

    /// Divide every coefficient exactly by p^e.
    pub fn div_exact_pow(&self, ctx: &PadicContext, e: u32) -> Result<Self> {
        let out = self
            .coeffs
            .iter()
            .map(|a| ctx.exact_div_pow(a, e))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(ctx, out))
    }

    pub fn scale_pow_p(&self, ctx: &PadicContext, e: u32) -> Self {
        self.scale(ctx, &ctx.pow_of_p(e))
    }
}

/// C(n, k) over the integers for arbitrary integer n, as used by arc
/// evaluation and tests.
pub fn binomial_bigint(n: &BigInt, k: usize) -> BigInt {
    let mut acc = BigInt::from(1);
    for j in 0..k {
        acc *= n - BigInt::from(j as i64);
        acc /= BigInt::from(j as i64 + 1);
    }
    acc
}
