//! Recurrence specifications and the exact rational oracle.
//!
//! A [`RecurrenceSpec`] is the parsed description of
//!
//! ```text
//! f(n) = P_1(n) f(n-1) + ... + P_d(n) f(n-d)      for n >= offset,
//! ```
//!
//! together with the initial values f(0)..f(offset-1).  The offset lets the
//! recurrence start holding later than n = d, which is how "for all n large
//! enough" statements are encoded; [`RecurrenceSpec::validate`] absorbs the
//! slack into a [`NormalizedSpec`] whose recurrence holds from index d on,
//! by shifting the coefficient polynomials and remembering the cut-off
//! prefix (whose zeros are handled exactly, not analytically).
//!
//! Everything here is exact big-rational arithmetic; the evaluator doubles
//! as the ground-truth oracle that certified analytic results are checked
//! against.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qpoly::{format_rational, parse_rational, QPoly};

/// A polynomial-linear recurrence over the rationals, as read from a file.
#[derive(Debug, Clone)]
pub struct RecurrenceSpec {
    /// Order d.
    pub order: usize,
    /// P_1..P_d.  When `lhs` is present these are the P_i of the homogeneous
    /// form P_0(n) f(n) + Σ P_i(n) f(n-i) = 0 instead.
    pub coeffs: Vec<QPoly>,
    /// Optional P_0 multiplying f(n) itself (homogeneous input form).
    pub lhs: Option<QPoly>,
    /// f(0)..f(offset-1).
    pub initial: Vec<BigRational>,
    /// First index at which the recurrence is asserted; >= order.
    pub offset: usize,
}

/// A validated recurrence with the recurrence holding from index d on.
///
/// Indexing convention: the *shifted* sequence is g(n) = f(n + shift); the
/// evaluators below that mention "original" indices undo the shift and splice
/// the remembered prefix back in.
#[derive(Debug, Clone)]
pub struct NormalizedSpec {
    pub order: usize,
    /// Shifted coefficients Q_i(z) = P_i(z + shift), in solved (monic) form.
    pub coeffs: Vec<QPoly>,
    /// g(0)..g(d-1), i.e. f(shift)..f(shift + d - 1).
    pub initial: Vec<BigRational>,
    /// s = offset - d.
    pub shift: usize,
    /// f(0)..f(shift-1): original values before the recurrence kicks in.
    pub prefix: Vec<BigRational>,
    /// Indices n < shift with f(n) = 0, in original indexing.
    pub prefix_zeros: Vec<u64>,
    /// The trailing coefficient when it is constant (the hypothesis that
    /// makes the decomposition certifiable); `None` only in extension mode.
    pub trailing_constant: Option<BigRational>,
}

impl RecurrenceSpec {
    pub fn new(order: usize, coeffs: Vec<QPoly>, initial: Vec<BigRational>, offset: usize) -> Self {
        RecurrenceSpec {
            order,
            coeffs,
            lhs: None,
            initial,
            offset,
        }
    }

    /// Check the hypotheses and normalize so the recurrence holds from d on.
    ///
    /// `extension_mode` relaxes "trailing coefficient is a nonzero constant"
    /// to "trailing coefficient is nonzero"; the stronger per-prime condition
    /// (no roots mod p) is checked during prime selection.
    pub fn validate(&self, extension_mode: bool) -> Result<NormalizedSpec> {
        let d = self.order;
        if d == 0 {
            return Err(Error::BadSpec("order must be >= 1".into()));
        }
        if self.coeffs.len() != d {
            return Err(Error::BadSpec(format!(
                "expected {d} coefficient polynomials, got {}",
                self.coeffs.len()
            )));
        }

        // Resolve the homogeneous form: P_0 f(n) + Σ P_i f(n-i) = 0 is only
        // solvable for f(n) by a polynomial recurrence when P_0 is a nonzero
        // constant, in which case dividing through lands in the solved form
        // f(n) = Σ (-P_i/P_0)(n) f(n-i).
        let coeffs: Vec<QPoly> = match &self.lhs {
            None => self.coeffs.clone(),
            Some(p0) => match p0.as_constant() {
                Some(c) if !c.is_zero() => {
                    let factor = -c.recip();
                    self.coeffs.iter().map(|p| p.scale(&factor)).collect()
                }
                _ => return Err(Error::NotMonicForm),
            },
        };

        if self.offset < d {
            return Err(Error::BadSpec(format!(
                "offset {} must be >= order {d}",
                self.offset
            )));
        }
        if self.initial.len() != self.offset {
            return Err(Error::BadInitialLength {
                expected: self.offset,
                offset: self.offset,
                got: self.initial.len(),
            });
        }

        let trailing = &coeffs[d - 1];
        if trailing.is_zero() {
            let suggested = (0..d).rev().find(|&i| !coeffs[i].is_zero()).map_or(0, |i| i + 1);
            return Err(Error::TrailingZero {
                stated: d,
                suggested,
            });
        }
        let trailing_constant = trailing.as_constant();
        if trailing_constant.is_none() && !extension_mode {
            return Err(Error::TrailingNotConstant);
        }

        let s = self.offset - d;
        let shift = BigInt::from(s as u64);
        let shifted: Vec<QPoly> = coeffs.iter().map(|p| p.shift_arg(&shift)).collect();
        let prefix: Vec<BigRational> = self.initial[..s].to_vec();
        let prefix_zeros = prefix
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_zero())
            .map(|(n, _)| n as u64)
            .collect();

        Ok(NormalizedSpec {
            order: d,
            coeffs: shifted,
            initial: self.initial[s..].to_vec(),
            shift: s,
            prefix,
            prefix_zeros,
            trailing_constant,
        })
    }

    // ---- file format ------------------------------------------------------

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawSpec = serde_json::from_str(text)?;
        let coeffs = raw
            .coefficients
            .iter()
            .map(|c| QPoly::parse(c))
            .collect::<Result<Vec<_>>>()?;
        let lhs = raw.p0.as_deref().map(QPoly::parse).transpose()?;
        let initial = raw
            .initial
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(RecurrenceSpec {
            order: raw.order,
            coeffs,
            lhs,
            initial,
            offset: raw.offset,
        })
    }

    pub fn to_json(&self) -> String {
        let raw = RawSpec {
            order: self.order,
            offset: self.offset,
            coefficients: self.coeffs.iter().map(|p| p.to_strings()).collect(),
            initial: self.initial.iter().map(format_rational).collect(),
            p0: self.lhs.as_ref().map(|p| p.to_strings()),
        };
        serde_json::to_string_pretty(&raw).expect("plain data serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    order: usize,
    offset: usize,
    /// P_1..P_d, each ascending degree, rationals as "a/b" or "a" strings.
    coefficients: Vec<Vec<String>>,
    /// f(0)..f(offset-1).
    initial: Vec<String>,
    /// Optional P_0 for the homogeneous form; see `RecurrenceSpec::lhs`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p0: Option<Vec<String>>,
}

impl NormalizedSpec {
    /// Shifted-sequence values g(0)..g(N) by running the recurrence forward.
    pub fn eval_shifted_upto(&self, n: usize) -> Vec<BigRational> {
        let d = self.order;
        let mut vals = self.initial.clone();
        vals.truncate(n + 1);
        vals.reserve(n + 1);
        for m in vals.len()..=n {
            let mut acc = BigRational::zero();
            for i in 1..=d {
                acc += self.coeffs[i - 1].eval_i64(m as i64) * &vals[m - i];
            }
            vals.push(acc);
        }
        vals
    }

    /// Original-sequence values f(0)..f(N): remembered prefix, then the
    /// shifted recurrence.
    pub fn eval_upto(&self, n: usize) -> Vec<BigRational> {
        let s = self.shift;
        let mut out: Vec<BigRational> = self.prefix.iter().take(n + 1).cloned().collect();
        if n >= s {
            out.extend(self.eval_shifted_upto(n - s));
        }
        out
    }

    /// Zero indices of the original sequence up to and including N.
    pub fn zeros_upto(&self, n: usize) -> Vec<u64> {
        self.eval_upto(n)
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_zero())
            .map(|(i, _)| i as u64)
            .collect()
    }

    /// Value of the unique backward extension of the shifted sequence at a
    /// negative index: the recurrence at n + d is solved for g(n), which
    /// divides by the trailing coefficient at n + d.
    pub fn eval_at_negative(&self, n: i64) -> Result<BigRational> {
        assert!(n < 0, "only negative indices need the backward extension");
        let d = self.order;
        // window holds g(m)..g(m+d-1), starting at m = 0 and walked down.
        let mut window: Vec<BigRational> = self.initial.clone();
        for m in (n..0).rev() {
            let at = m + d as i64;
            let pd = self.coeffs[d - 1].eval_i64(at);
            if pd.is_zero() {
                return Err(Error::BackwardExtension { index: m });
            }
            // g(m) = (g(m+d) - Σ_{i=1}^{d-1} Q_i(m+d) g(m+d-i)) / Q_d(m+d)
            let mut acc = window[d - 1].clone();
            for i in 1..d {
                acc -= self.coeffs[i - 1].eval_i64(at) * &window[d - 1 - i];
            }
            window.rotate_right(1);
            window[0] = acc / pd;
        }
        Ok(window[0].clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn fibonacci() -> RecurrenceSpec {
        RecurrenceSpec::new(
            2,
            vec![QPoly::from_i64s(&[1]), QPoly::from_i64s(&[1])],
            vec![rat(0), rat(1)],
            2,
        )
    }

    /// f(n) = ((n-1)/2) f(n-2) + 2 f(n-4), initial [0,1,0,3,0], offset 5:
    /// odd positions carry h_m = m h_{m-1} + 2 h_{m-2}, even positions are 0.
    fn interleaved() -> RecurrenceSpec {
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
    }

    #[test]
    fn fibonacci_is_already_normalized() {
        let n = fibonacci().validate(false).unwrap();
        assert_eq!(n.shift, 0);
        assert!(n.prefix_zeros.is_empty());
        assert_eq!(n.trailing_constant, Some(rat(1)));
        let vals = n.eval_upto(10);
        let expect: Vec<BigRational> = [0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55]
            .iter()
            .map(|&x| rat(x))
            .collect();
        assert_eq!(vals, expect);
    }

    #[test]
    fn interleaved_normalizes_with_shift_one() {
        let n = interleaved().validate(false).unwrap();
        assert_eq!(n.shift, 1);
        assert_eq!(n.prefix_zeros, vec![0]);
        assert_eq!(n.initial, vec![rat(1), rat(0), rat(3), rat(0)]);
        // P_2 = (z-1)/2 becomes z/2 after the shift.
        assert_eq!(
            n.coeffs[1],
            QPoly::new(vec![
                BigRational::zero(),
                BigRational::new(BigInt::from(1), BigInt::from(2)),
            ])
        );
        assert_eq!(n.trailing_constant, Some(rat(2)));
    }

    #[test]
    fn interleaved_values_match_hand_iteration() {
        let n = interleaved().validate(false).unwrap();
        let vals = n.eval_upto(25);
        // Independent oracle: iterate h_m = m h_{m-1} + 2 h_{m-2} directly
        // and interleave with zeros.
        let mut h = vec![rat(1), rat(3)];
        for m in 2..13usize {
            let v = rat(m as i64) * &h[m - 1] + rat(2) * &h[m - 2];
            h.push(v);
        }
        for (i, v) in vals.iter().enumerate() {
            if i % 2 == 0 {
                assert!(v.is_zero(), "even index {i} should vanish");
            } else {
                assert_eq!(v, &h[(i - 1) / 2], "odd index {i}");
            }
        }
        assert_eq!(
            &vals[..8],
            &[rat(0), rat(1), rat(0), rat(3), rat(0), rat(8), rat(0), rat(30)]
        );
    }

    #[test]
    fn zeros_listing_uses_original_indices() {
        let fib = fibonacci().validate(false).unwrap();
        assert_eq!(fib.zeros_upto(100), vec![0]);
        let inter = interleaved().validate(false).unwrap();
        assert_eq!(
            inter.zeros_upto(20),
            vec![0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20]
        );
        let zero = RecurrenceSpec::new(
            2,
            vec![QPoly::from_i64s(&[1]), QPoly::from_i64s(&[1])],
            vec![rat(0), rat(0)],
            2,
        )
        .validate(false)
        .unwrap();
        assert_eq!(zero.zeros_upto(5), vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn backward_extension_of_fibonacci() {
        let n = fibonacci().validate(false).unwrap();
        assert_eq!(n.eval_at_negative(-1).unwrap(), rat(1));
        assert_eq!(n.eval_at_negative(-2).unwrap(), rat(-1));
        assert_eq!(n.eval_at_negative(-3).unwrap(), rat(2));
        let geometric = RecurrenceSpec::new(
            1,
            vec![QPoly::from_i64s(&[2])],
            vec![rat(1)],
            1,
        )
        .validate(false)
        .unwrap();
        assert_eq!(
            geometric.eval_at_negative(-1).unwrap(),
            BigRational::new(BigInt::from(1), BigInt::from(2))
        );
    }

    #[test]
    fn forward_recurrence_recovers_initial_from_backward_window() {
        let n = interleaved().validate(false).unwrap();
        let d = n.order;
        let k = 3i64;
        // Window g(-k)..g(-k+d-1), then run forward back to g(d-1).
        let mut vals: Vec<BigRational> = (0..d)
            .map(|i| {
                let idx = -k + i as i64;
                if idx < 0 {
                    n.eval_at_negative(idx).unwrap()
                } else {
                    n.initial[idx as usize].clone()
                }
            })
            .collect();
        for step in 0..k {
            let m = d as i64 + step - k;
            let mut acc = BigRational::zero();
            for i in 1..=d {
                acc += n.coeffs[i - 1].eval_i64(m) * &vals[d - i];
            }
            vals.rotate_left(1);
            vals[d - 1] = acc;
        }
        assert_eq!(vals, n.initial);
    }

    #[test]
    fn homogeneous_form_divides_through_constant_p0() {
        // 3 f(n) - 3 f(n-1) - 3 f(n-2) = 0 is Fibonacci again.
        let mut spec = fibonacci();
        spec.lhs = Some(QPoly::from_i64s(&[3]));
        spec.coeffs = vec![QPoly::from_i64s(&[-3]), QPoly::from_i64s(&[-3])];
        let n = spec.validate(false).unwrap();
        assert_eq!(n.coeffs[0], QPoly::from_i64s(&[1]));
        assert_eq!(n.eval_upto(6), [0, 1, 1, 2, 3, 5, 8].map(rat));
    }

    #[test]
    fn polynomial_p0_is_rejected() {
        // (n+1) f(n) = 2(2n-1) f(n-1), the central-binomial shape: written
        // homogeneously with P_0 = z, P_1 = 2 - 4z.
        let spec = RecurrenceSpec {
            order: 1,
            coeffs: vec![QPoly::from_i64s(&[2, -4])],
            lhs: Some(QPoly::from_i64s(&[0, 1])),
            initial: vec![rat(1)],
            offset: 1,
        };
        assert!(matches!(spec.validate(false), Err(Error::NotMonicForm)));
        assert!(matches!(spec.validate(true), Err(Error::NotMonicForm)));
    }

    #[test]
    fn trailing_coefficient_checks() {
        let bad = RecurrenceSpec::new(
            2,
            vec![QPoly::from_i64s(&[1]), QPoly::from_i64s(&[0, 1])],
            vec![rat(0), rat(1)],
            2,
        );
        assert!(matches!(bad.validate(false), Err(Error::TrailingNotConstant)));
        // Extension mode admits a non-constant trailing coefficient.
        let n = bad.validate(true).unwrap();
        assert_eq!(n.trailing_constant, None);

        let degenerate = RecurrenceSpec::new(
            3,
            vec![QPoly::from_i64s(&[1]), QPoly::from_i64s(&[1]), QPoly::zero()],
            vec![rat(0), rat(1), rat(1)],
            3,
        );
        assert!(matches!(
            degenerate.validate(false),
            Err(Error::TrailingZero {
                stated: 3,
                suggested: 2
            })
        ));
    }

    #[test]
    fn length_and_offset_validation() {
        let mut spec = fibonacci();
        spec.initial.push(rat(1));
        assert!(matches!(
            spec.validate(false),
            Err(Error::BadInitialLength {
                expected: 2,
                got: 3,
                ..
            })
        ));
        let mut spec = fibonacci();
        spec.offset = 1;
        assert!(spec.validate(false).is_err());
    }

    #[test]
    fn json_round_trip_matches_contract() {
        let text = r#"{
            "order": 4,
            "offset": 5,
            "coefficients": [[], ["-1/2","1/2"], [], ["2"]],
            "initial": ["0","1","0","3","0"]
        }"#;
        let spec = RecurrenceSpec::from_json(text).unwrap();
        assert_eq!(spec.order, 4);
        assert_eq!(spec.coeffs[1].to_strings(), vec!["-1/2", "1/2"]);
        assert!(spec.lhs.is_none());
        let normalized = spec.validate(false).unwrap();
        assert_eq!(normalized.eval_upto(7)[7], rat(30));

        let round = RecurrenceSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(round.to_json(), spec.to_json());
    }

    #[test]
    fn backward_extension_reports_trailing_roots() {
        // Extension mode, trailing coefficient z - 3 vanishes when walking
        // backward through n + d = 3.
        let spec = RecurrenceSpec::new(
            1,
            vec![QPoly::from_i64s(&[-3, 1])],
            vec![rat(1)],
            1,
        );
        let n = spec.validate(true).unwrap();
        // g(2) asks for division by Q_1(3) = 0... walking down from 0 hits
        // the root at m + d = 3 only for m = 2 >= 0, so negative indices stay
        // fine until Q_1(m+1) = 0, i.e. m = 2 — never negative.  Use a root
        // that actually blocks: z + 2 vanishes at m + 1 = -2.
        assert!(n.eval_at_negative(-1).is_ok());
        let spec = RecurrenceSpec::new(
            1,
            vec![QPoly::from_i64s(&[2, 1])],
            vec![rat(1)],
            1,
        );
        let n = spec.validate(true).unwrap();
        assert!(n.eval_at_negative(-2).is_ok());
        assert!(matches!(
            n.eval_at_negative(-3),
            Err(Error::BackwardExtension { index: -3 })
        ));
    }
}
