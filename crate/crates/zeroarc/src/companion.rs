//! First-order companion form of the recurrence and its residue-class
//! matrices.
//!
//! The order-d recurrence becomes the matrix cascade y(n) = B(n) y(n-1) on
//! state vectors y(n) = [f(n), ..., f(n+d-1)], where B(z) has shifted unit
//! rows on top and the coefficient polynomials, evaluated at z - 1 + d, along
//! the bottom.  Its determinant is (-1)^(d+1) times the trailing coefficient
//! there, so at an admissible prime every B(n) is invertible mod p.
//!
//! Reduced mod p, B(z) is periodic in z with period p, so the prefix products
//! over blocks of p steps walk through a finite monoid: a pigeonhole
//! collision yields a modulus b (a multiple of p) such that each arithmetic
//! progression c mod b carries a matrix
//!
//! ```text
//! A(z) = B(c + bz) B(c + bz - 1) ... B(c + bz - b + 1)
//! ```
//!
//! with A(n) === I mod p for every n and A in M_d(Z_p[pz]) — the two facts
//! the analytic-arc lift consumes.  A(z) carries the state at class element
//! z-1 to the state at class element z: y(c + bz) = A(z) y(c + b(z-1)).  Because every factor already lies in
//! M_d(Z_p[pz]), monomial coefficients at degree >= W vanish mod p^W, so
//! products here are computed in the monomial basis capped at degree W-1,
//! checked, and only then converted to the binomial basis.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::mahler::MahlerPoly;
use crate::padic::{PadicContext, PadicInt};
use crate::qpoly::QPoly;
use crate::recurrence::NormalizedSpec;

/// The companion system at a fixed prime and precision.
#[derive(Debug, Clone)]
pub struct CompanionSystem {
    d: usize,
    ctx: PadicContext,
    /// Bottom-row polynomials R_j(z) = P_{d-j}(z - 1 + d) over Q, j = 0..d-1
    /// (so R_0 is the trailing coefficient).
    bottom_q: Vec<QPoly>,
    /// The same as monomial residue coefficients.
    bottom_padic: Vec<Vec<PadicInt>>,
    /// B's entries in the binomial basis, row-major d x d.
    b_entries: Vec<MahlerPoly>,
    /// Initial state [f(0), ..., f(d-1)] mod p^W.
    v0: Vec<PadicInt>,
    /// The trailing coefficient as a unit residue, when it is constant.
    trailing_unit: Option<PadicInt>,
}

/// One residue class c mod b with its propagation matrix and start vector.
#[derive(Debug, Clone)]
pub struct ClassSystem {
    pub d: usize,
    pub c: u64,
    pub b: u64,
    /// A's entries in the binomial basis, row-major d x d.
    pub a: Vec<MahlerPoly>,
    /// The same entries as monomial coefficient vectors; the degree-j
    /// coefficient is divisible by p^j.
    pub a_monomial: Vec<Vec<PadicInt>>,
    /// v = B(c) ... B(1) v0: the state at the class representative.
    pub v: Vec<PadicInt>,
}

impl ClassSystem {
    /// Numeric value A(n) as a d x d residue matrix; any integer n is fine.
    pub fn eval_at(&self, ctx: &PadicContext, n: i64) -> Vec<PadicInt> {
        let zn = ctx.from_i64(n);
        self.a_monomial
            .iter()
            .map(|entry| horner(ctx, entry, &zn))
            .collect()
    }
}

fn horner(ctx: &PadicContext, coeffs: &[PadicInt], z: &PadicInt) -> PadicInt {
    let mut acc = ctx.zero();
    for c in coeffs.iter().rev() {
        acc = ctx.add(&ctx.mul(&acc, z), c);
    }
    acc
}

/// Exact determinant by fraction-free-enough Gaussian elimination (rationals
/// are exact; pivoting only needs nonzero entries).
fn det_rational(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot_row) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot_row != col {
            m.swap(pivot_row, col);
            det = -det;
        }
        let pivot_row_vals = m[col].clone();
        let pivot = pivot_row_vals[col].clone();
        det *= &pivot;
        let inv = pivot.recip();
        for row in m.iter_mut().skip(col + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] * &inv;
            for cc in col..n {
                let sub = &factor * &pivot_row_vals[cc];
                row[cc] -= sub;
            }
        }
    }
    det
}

impl CompanionSystem {
    /// Assemble B(z) and v0 and verify the determinant identity
    /// det B(z) = (-1)^(d+1) R_0(z) at enough sample points to pin the
    /// polynomial down.
    pub fn build(spec: &NormalizedSpec, ctx: &PadicContext) -> Result<CompanionSystem> {
        let d = spec.order;
        let not_admissible = |e: Error| match e {
            Error::DenominatorNotUnit { den, p } => Error::NotAdmissible {
                prime: p,
                reason: format!("denominator {den} is divisible by p"),
            },
            other => other,
        };

        let shift = BigInt::from(d as i64 - 1);
        let bottom_q: Vec<QPoly> = (0..d)
            .map(|j| spec.coeffs[d - 1 - j].shift_arg(&shift))
            .collect();
        let bottom_padic = bottom_q
            .iter()
            .map(|q| q.to_padic(ctx))
            .collect::<Result<Vec<_>>>()
            .map_err(not_admissible)?;
        let v0 = spec
            .initial
            .iter()
            .map(|v| ctx.from_rational(v))
            .collect::<Result<Vec<_>>>()
            .map_err(not_admissible)?;

        let mut b_entries = vec![MahlerPoly::zero(); d * d];
        for r in 0..d.saturating_sub(1) {
            b_entries[r * d + r + 1] = MahlerPoly::constant(ctx, ctx.one());
        }
        for (j, coeffs) in bottom_padic.iter().enumerate() {
            b_entries[(d - 1) * d + j] = MahlerPoly::from_monomial(ctx, coeffs);
        }

        let trailing_unit = match spec.trailing_constant.as_ref() {
            Some(c) => Some(ctx.from_rational(c).map_err(not_admissible)?),
            None => None,
        };

        let sys = CompanionSystem {
            d,
            ctx: ctx.clone(),
            bottom_q,
            bottom_padic,
            b_entries,
            v0,
            trailing_unit,
        };

        // det B(z) is linear in the bottom row with constant cofactors, so
        // its degree is at most the largest bottom-entry degree; checking at
        // max(d+1, that + 2) points proves the polynomial identity.
        let max_deg = sys
            .bottom_q
            .iter()
            .filter_map(|q| q.degree())
            .max()
            .unwrap_or(0);
        let sign = if d % 2 == 0 {
            -BigRational::one()
        } else {
            BigRational::one()
        };
        for t in 0..(d + 1).max(max_deg + 2) as i64 {
            let det = det_rational(sys.b_rational_at(t));
            let expect = &sign * sys.bottom_q[0].eval_i64(t);
            if det != expect {
                return Err(Error::Internal(format!(
                    "companion determinant identity fails at z = {t}: det = {det}, expected {expect}"
                )));
            }
        }
        Ok(sys)
    }

    pub fn order(&self) -> usize {
        self.d
    }

    pub fn context(&self) -> &PadicContext {
        &self.ctx
    }

    pub fn v0(&self) -> &[PadicInt] {
        &self.v0
    }

    pub fn b_entries(&self) -> &[MahlerPoly] {
        &self.b_entries
    }

    /// B(t) as an exact rational matrix.
    fn b_rational_at(&self, t: i64) -> Vec<Vec<BigRational>> {
        let d = self.d;
        let mut m = vec![vec![BigRational::zero(); d]; d];
        for r in 0..d.saturating_sub(1) {
            m[r][r + 1] = BigRational::one();
        }
        for (slot, q) in m[d - 1].iter_mut().zip(&self.bottom_q) {
            *slot = q.eval_i64(t);
        }
        m
    }

    /// Exact det B(t); a unit at every integer t when the prime is
    /// admissible.
    pub fn det_b_at(&self, t: i64) -> BigRational {
        det_rational(self.b_rational_at(t))
    }

    /// Numeric B(n) as a d x d residue matrix.
    pub fn eval_b_at(&self, n: i64) -> Vec<PadicInt> {
        let d = self.d;
        let zn = self.ctx.from_i64(n);
        let mut m = vec![self.ctx.zero(); d * d];
        for r in 0..d.saturating_sub(1) {
            m[r * d + r + 1] = self.ctx.one();
        }
        for j in 0..d {
            m[(d - 1) * d + j] = horner(&self.ctx, &self.bottom_padic[j], &zn);
        }
        m
    }

    /// Bottom row of B(n) only: the rest of the matrix is structural.
    fn bottom_at(&self, n: i64) -> Vec<PadicInt> {
        let zn = self.ctx.from_i64(n);
        self.bottom_padic
            .iter()
            .map(|entry| horner(&self.ctx, entry, &zn))
            .collect()
    }

    /// One cascade step: y(n) = B(n) y(n-1), using the companion structure.
    fn step(&self, n: i64, y: &[PadicInt]) -> Vec<PadicInt> {
        let d = self.d;
        let bottom = self.bottom_at(n);
        let mut next = Vec::with_capacity(d);
        next.extend_from_slice(&y[1..]);
        let mut acc = self.ctx.zero();
        for (r, v) in bottom.iter().zip(y) {
            acc = self.ctx.add(&acc, &self.ctx.mul(r, v));
        }
        next.push(acc);
        next
    }

    /// State B(n) ... B(1) v0 = [f(n), ..., f(n+d-1)] mod p^W.
    pub fn state_at(&self, n: u64) -> Vec<PadicInt> {
        let mut y = self.v0.clone();
        for k in 1..=n as i64 {
            y = self.step(k, &y);
        }
        y
    }

    // ---- mod-p period -----------------------------------------------------

    /// Find the pigeonhole period of the prefix products mod p: walks
    /// Pi_n = phi(B(pn) ... B(1)) in F_p, one block of p factors per step
    /// (mod-p periodicity makes every block the same matrix), and returns the
    /// first collision (m0, m1) together with b = p (m1 - m0).
    pub fn find_period(&self, cap: u64) -> Result<(u64, u64, u64)> {
        let p = self.ctx.prime();
        let d = self.d;
        // The p distinct reductions phi(B(0)) ... phi(B(p-1)) cover every
        // factor that will ever appear; all must be invertible.
        let factors: Vec<Vec<u64>> = (0..p as i64).map(|i| self.b_mod_p(i)).collect();
        for (i, f) in factors.iter().enumerate() {
            if det_mod_p(f.clone(), d, p) == 0 {
                return Err(Error::SingularReduction { index: i as u64 });
            }
        }
        // Block product C = phi(B(0)) phi(B(p-1)) ... phi(B(1)): the indices
        // pn, pn-1, ..., pn-p+1 reduce to 0, p-1, ..., 1 mod p.
        let mut block = factors[0].clone();
        for i in (1..p as usize).rev() {
            block = mul_mod_p(&block, &factors[i], d, p);
        }

        let mut pi = identity_mod_p(d);
        let mut seen: HashMap<Vec<u64>, u64> = HashMap::new();
        seen.insert(pi.clone(), 0);
        for n in 1..=cap {
            pi = mul_mod_p(&block, &pi, d, p);
            if let Some(&m0) = seen.get(&pi) {
                return Ok((m0, n, p * (n - m0)));
            }
            seen.insert(pi.clone(), n);
        }
        Err(Error::PeriodCapExceeded { cap })
    }

    fn b_mod_p(&self, n: i64) -> Vec<u64> {
        let p = self.ctx.prime();
        self.eval_b_at(n)
            .iter()
            .map(|x| (self.ctx.to_biguint(x) % p).to_u64().expect("residue < p"))
            .collect()
    }

    // ---- residue-class matrices -------------------------------------------

    /// B(t0 + b z) as a monomial matrix (substitution into each entry).
    fn factor_matrix(&self, t0: i64, b: u64) -> MonoMat {
        let d = self.d;
        let mut m = MonoMat::zero(d);
        for r in 0..d.saturating_sub(1) {
            m.entries[r * d + r + 1] = vec![self.ctx.one()];
        }
        for j in 0..d {
            m.entries[(d - 1) * d + j] =
                compose_affine(&self.ctx, &self.bottom_padic[j], t0, b);
        }
        m
    }

    /// B(t0 + b z)^(-1) as a monomial matrix; only available when the
    /// trailing coefficient is a unit constant, in which case the inverse is
    /// again polynomial: the top row is [-R_1, ..., -R_{d-1}, 1] / R_0 and
    /// the rest shifts components down.
    fn inverse_factor_matrix(&self, t0: i64, b: u64) -> MonoMat {
        let d = self.d;
        let r0_inv = self
            .ctx
            .unit_inverse(self.trailing_unit.as_ref().expect("constant trailing"))
            .expect("trailing unit inverts");
        let neg_r0_inv = self.ctx.neg(&r0_inv);
        let mut m = MonoMat::zero(d);
        for k in 0..d - 1 {
            let composed = compose_affine(&self.ctx, &self.bottom_padic[k + 1], t0, b);
            m.entries[k] = composed
                .iter()
                .map(|c| self.ctx.mul(c, &neg_r0_inv))
                .collect();
        }
        m.entries[d - 1] = vec![r0_inv];
        for r in 1..d {
            m.entries[r * d + r - 1] = vec![self.ctx.one()];
        }
        m
    }

    /// Build the class matrix for residue c by direct product of b factors,
    /// then run the structure checks and convert to the binomial basis.
    pub fn class_system(&self, c: u64, b: u64) -> Result<ClassSystem> {
        let mut acc = MonoMat::identity(&self.ctx, self.d);
        for j in 0..b {
            let f = self.factor_matrix(c as i64 - j as i64, b);
            acc = acc.mul(&self.ctx, &f)?;
        }
        self.finish_class(c, b, acc, self.state_at(c))
    }

    /// Build all b class systems.  With a constant trailing coefficient the
    /// matrices are produced by a sliding window,
    /// A_{c+1}(z) = B(c+1+bz) A_c(z) B(c+1-b+bz)^(-1), which replaces the
    /// O(b) products per class by O(1); otherwise fall back to direct
    /// products per class.
    pub fn class_systems(&self, b: u64) -> Result<Vec<ClassSystem>> {
        if self.trailing_unit.is_none() {
            return (0..b).map(|c| self.class_system(c, b)).collect();
        }
        let mut out = Vec::with_capacity(b as usize);
        let mut acc = MonoMat::identity(&self.ctx, self.d);
        for j in 0..b {
            let f = self.factor_matrix(-(j as i64), b);
            acc = acc.mul(&self.ctx, &f)?;
        }
        let mut v = self.v0.clone();
        for c in 0..b {
            out.push(self.finish_class(c, b, acc.clone(), v.clone())?);
            if c + 1 < b {
                let newest = self.factor_matrix(c as i64 + 1, b);
                let oldest_inv = self.inverse_factor_matrix(c as i64 + 1 - b as i64, b);
                acc = newest.mul(&self.ctx, &acc)?.mul(&self.ctx, &oldest_inv)?;
                v = self.step(c as i64 + 1, &v);
            }
        }
        Ok(out)
    }

    /// Verify the two invariants the lift depends on and package the class.
    fn finish_class(&self, c: u64, b: u64, m: MonoMat, v: Vec<PadicInt>) -> Result<ClassSystem> {
        let ctx = &self.ctx;
        let d = self.d;
        for (idx, entry) in m.entries.iter().enumerate() {
            // Membership in Z_p[pz]: degree-j coefficient divisible by p^j.
            for (j, coeff) in entry.iter().enumerate() {
                if !ctx.val(coeff).at_least(j as u32) {
                    return Err(Error::Internal(format!(
                        "class c={c} mod {b}: entry {idx} coefficient {j} not divisible by p^{j}"
                    )));
                }
            }
            // A(0) === I mod p.
            let constant = entry.first().cloned().unwrap_or_else(|| ctx.zero());
            let target = if idx / d == idx % d { ctx.one() } else { ctx.zero() };
            if !ctx.val(&ctx.sub(&constant, &target)).at_least(1) {
                return Err(Error::Internal(format!(
                    "class c={c} mod {b}: A(0) is not the identity mod p at entry {idx}"
                )));
            }
        }
        let a = m
            .entries
            .iter()
            .map(|e| MahlerPoly::from_monomial(ctx, e))
            .collect();
        Ok(ClassSystem {
            d,
            c,
            b,
            a,
            a_monomial: m.entries,
            v,
        })
    }
}

/// Substitute z -> t0 + b z into a monomial polynomial (Horner in the
/// polynomial ring).
fn compose_affine(ctx: &PadicContext, coeffs: &[PadicInt], t0: i64, b: u64) -> Vec<PadicInt> {
    let t = ctx.from_i64(t0);
    let bb = ctx.from_u64(b);
    let mut acc: Vec<PadicInt> = Vec::new();
    for c in coeffs.iter().rev() {
        // acc <- acc * (b z + t) + c
        let mut next = vec![ctx.zero(); acc.len() + 1];
        for (i, a) in acc.iter().enumerate() {
            next[i + 1] = ctx.add(&next[i + 1], &ctx.mul(a, &bb));
            next[i] = ctx.add(&next[i], &ctx.mul(a, &t));
        }
        if next.is_empty() {
            next.push(ctx.zero());
        }
        next[0] = ctx.add(&next[0], c);
        acc = next;
    }
    while acc.last().is_some_and(|c| ctx.is_zero(c)) {
        acc.pop();
    }
    acc
}

/// A d x d matrix of monomial polynomials capped at degree W-1; products of
/// Z_p[pz] matrices stay exact mod p^W under the cap because every discarded
/// coefficient is divisible by p^W.
#[derive(Debug, Clone)]
struct MonoMat {
    d: usize,
    entries: Vec<Vec<PadicInt>>,
}

impl MonoMat {
    fn zero(d: usize) -> Self {
        MonoMat {
            d,
            entries: vec![Vec::new(); d * d],
        }
    }

    fn identity(ctx: &PadicContext, d: usize) -> Self {
        let mut m = Self::zero(d);
        for i in 0..d {
            m.entries[i * d + i] = vec![ctx.one()];
        }
        m
    }

    fn mul(&self, ctx: &PadicContext, other: &Self) -> Result<Self> {
        let d = self.d;
        let cap = ctx.precision() as usize - 1;
        let mut out = Self::zero(d);
        for i in 0..d {
            for j in 0..d {
                let mut entry: Vec<PadicInt> = Vec::new();
                for k in 0..d {
                    let a = &self.entries[i * d + k];
                    let b = &other.entries[k * d + j];
                    if a.is_empty() || b.is_empty() {
                        continue;
                    }
                    if entry.len() < a.len() + b.len() - 1 {
                        entry.resize(a.len() + b.len() - 1, ctx.zero());
                    }
                    for (ia, ca) in a.iter().enumerate() {
                        if ctx.is_zero(ca) {
                            continue;
                        }
                        for (ib, cb) in b.iter().enumerate() {
                            entry[ia + ib] = ctx.add(&entry[ia + ib], &ctx.mul(ca, cb));
                        }
                    }
                }
                // Cap: coefficients past W-1 must already be 0 mod p^W.
                while entry.len() > cap + 1 {
                    let dropped = entry.pop().expect("nonempty");
                    if !ctx.is_zero(&dropped) {
                        return Err(Error::Internal(format!(
                            "degree-capped product dropped a nonzero coefficient at degree {}",
                            entry.len()
                        )));
                    }
                }
                while entry.last().is_some_and(|c| ctx.is_zero(c)) {
                    entry.pop();
                }
                out.entries[i * d + j] = entry;
            }
        }
        Ok(out)
    }
}

// ---- tiny F_p matrix algebra for the period walk ---------------------------

fn identity_mod_p(d: usize) -> Vec<u64> {
    let mut m = vec![0u64; d * d];
    for i in 0..d {
        m[i * d + i] = 1;
    }
    m
}

fn mul_mod_p(a: &[u64], b: &[u64], d: usize, p: u64) -> Vec<u64> {
    let mut out = vec![0u64; d * d];
    for i in 0..d {
        for k in 0..d {
            let aik = a[i * d + k] as u128;
            if aik == 0 {
                continue;
            }
            for j in 0..d {
                let v = out[i * d + j] as u128 + aik * b[k * d + j] as u128;
                out[i * d + j] = (v % p as u128) as u64;
            }
        }
    }
    out
}

fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        e >>= 1;
    }
    acc
}

fn det_mod_p(mut m: Vec<u64>, d: usize, p: u64) -> u64 {
    let mut det = 1u64;
    for col in 0..d {
        let Some(pr) = (col..d).find(|&r| m[r * d + col] % p != 0) else {
            return 0;
        };
        if pr != col {
            for j in 0..d {
                m.swap(pr * d + j, col * d + j);
            }
            det = (p - det) % p;
        }
        let pivot = m[col * d + col] % p;
        det = (det as u128 * pivot as u128 % p as u128) as u64;
        let inv = pow_mod(pivot, p - 2, p);
        for r in col + 1..d {
            let factor = (m[r * d + col] as u128 * inv as u128 % p as u128) as u64;
            if factor == 0 {
                continue;
            }
            for j in col..d {
                let sub = factor as u128 * m[col * d + j] as u128 % p as u128;
                let cur = m[r * d + j] as u128;
                m[r * d + j] = ((cur + p as u128 * p as u128 - sub) % p as u128) as u64;
            }
        }
    }
    det % p
}
