//! Standing randomized-property suite.
//!
//! The binomial-basis algebra and the exact-recurrence oracle are the two
//! foundations everything else leans on, so their identities are re-proved
//! here on every test run with fresh random inputs (1000 cases each).  A
//! smaller batch then drives whole random recurrences through the full
//! pipeline and checks the reports against exhaustive evaluation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use zeroarc::error::Error;
use zeroarc::mahler::MahlerPoly;
use zeroarc::padic::PadicContext;
use zeroarc::qpoly::QPoly;
use zeroarc::recurrence::RecurrenceSpec;
use zeroarc::zeroset::{self, AnalysisOptions};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn ctx() -> PadicContext {
    PadicContext::new(5, 10).expect("5 is admissible as a bare prime")
}

proptest! {
    #![proptest_config(config(1000))]

    /// Monomial-to-binomial conversion agrees with direct Horner evaluation
    /// at integer points, including negative ones.
    #[test]
    fn basis_conversion_matches_direct_evaluation(
        mono in proptest::collection::vec(-1000i64..=1000, 1..=7),
    ) {
        let ctx = ctx();
        let coeffs: Vec<_> = mono.iter().map(|&c| ctx.from_i64(c)).collect();
        let poly = MahlerPoly::from_monomial(&ctx, &coeffs);
        for n in -3..=8i64 {
            let direct = mono.iter().rev().fold(ctx.zero(), |acc, &c| {
                ctx.add(&ctx.mul(&acc, &ctx.from_i64(n)), &ctx.from_i64(c))
            });
            prop_assert_eq!(
                ctx.to_biguint(&poly.eval_int(&ctx, n)),
                ctx.to_biguint(&direct)
            );
        }
    }

    /// Argument shift, product, and antidifference are the pointwise
    /// operations they claim to be: P(z+1), P*Q, and an H with H(0) = 0 and
    /// H(z+1) - H(z) = -P(z).
    #[test]
    fn shift_product_antidifference_identities(
        a in proptest::collection::vec(-50i64..=50, 1..=5),
        b in proptest::collection::vec(-50i64..=50, 1..=5),
    ) {
        let ctx = ctx();
        let pa = MahlerPoly::from_monomial(
            &ctx,
            &a.iter().map(|&c| ctx.from_i64(c)).collect::<Vec<_>>(),
        );
        let pb = MahlerPoly::from_monomial(
            &ctx,
            &b.iter().map(|&c| ctx.from_i64(c)).collect::<Vec<_>>(),
        );
        let shifted = pa.shift_arg(&ctx);
        let product = pa.mul(&ctx, &pb);
        let anti = pa.antidifference_neg(&ctx);
        prop_assert_eq!(ctx.to_biguint(&anti.eval_int(&ctx, 0)), 0u32.into());
        for n in 0..=10i64 {
            prop_assert_eq!(
                ctx.to_biguint(&shifted.eval_int(&ctx, n)),
                ctx.to_biguint(&pa.eval_int(&ctx, n + 1))
            );
            prop_assert_eq!(
                ctx.to_biguint(&product.eval_int(&ctx, n)),
                ctx.to_biguint(&ctx.mul(&pa.eval_int(&ctx, n), &pb.eval_int(&ctx, n)))
            );
            let step = ctx.sub(&anti.eval_int(&ctx, n + 1), &anti.eval_int(&ctx, n));
            prop_assert_eq!(
                ctx.to_biguint(&step),
                ctx.to_biguint(&ctx.neg(&pa.eval_int(&ctx, n)))
            );
        }
    }

    /// Extending a random recurrence backward and then running it forward
    /// again lands exactly on the directly computed values.
    #[test]
    fn backward_extension_meets_the_forward_recurrence(
        d in 1usize..=3,
        polys in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 1..=3), 3),
        init in proptest::collection::vec(-3i64..=3, 3),
        trailing in prop_oneof![Just(-3i64), Just(-2), Just(-1), Just(1), Just(2), Just(3)],
        back in 1i64..=8,
    ) {
        let mut coeffs: Vec<QPoly> = polys
            .iter()
            .take(d - 1)
            .map(|c| QPoly::from_i64s(c))
            .collect();
        coeffs.push(QPoly::from_i64s(&[trailing]));
        let initial: Vec<BigRational> = init
            .iter()
            .take(d)
            .map(|&v| BigRational::from(BigInt::from(v)))
            .collect();
        let spec = RecurrenceSpec::new(d, coeffs, initial, d);
        let normalized = match spec.validate(false) {
            Ok(n) => n,
            Err(_) => return Ok(()), // degenerate spec (e.g. zero leading coefficient)
        };
        let mut window: Vec<BigRational> = (0..d as i64)
            .map(|i| {
                let idx = -back + i;
                if idx < 0 {
                    normalized.eval_at_negative(idx)
                } else {
                    Ok(normalized.eval_shifted_upto(idx as usize)[idx as usize].clone())
                }
            })
            .collect::<Result<_, _>>()
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        let forward = normalized.eval_shifted_upto(d);
        for step in 0..=(back + d as i64) {
            let at = -back + d as i64 + step;
            let mut next = BigRational::zero();
            for i in 1..=d {
                next += normalized.coeffs[i - 1].eval_i64(at) * &window[d - i];
            }
            window.rotate_left(1);
            window[d - 1] = next.clone();
            if at >= 0 && at <= d as i64 {
                prop_assert_eq!(&next, &forward[at as usize]);
            }
        }
    }
}

proptest! {
    #![proptest_config(config(64))]

    /// Random small recurrences either analyze cleanly — with a report whose
    /// membership matches exhaustive evaluation — or are declined for one of
    /// the two advertised search-budget reasons.  Internal invariant
    /// violations never surface.
    #[test]
    fn random_recurrences_analyze_soundly(
        d in 1usize..=3,
        polys in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 1..=3), 3),
        init in proptest::collection::vec(-3i64..=3, 3),
        trailing in prop_oneof![Just(-3i64), Just(-2), Just(-1), Just(1), Just(2), Just(3)],
    ) {
        let mut coeffs: Vec<QPoly> = polys
            .iter()
            .take(d - 1)
            .map(|c| QPoly::from_i64s(c))
            .collect();
        coeffs.push(QPoly::from_i64s(&[trailing]));
        let initial: Vec<BigRational> = init
            .iter()
            .take(d)
            .map(|&v| BigRational::from(BigInt::from(v)))
            .collect();
        let spec = RecurrenceSpec::new(d, coeffs, initial, d);
        if spec.validate(false).is_err() {
            return Ok(()); // degenerate spec
        }
        let opts = AnalysisOptions {
            m_iters: 3,
            m_cap: 3,
            horizon: 120,
            period_cap: 400,
            ..AnalysisOptions::default()
        };
        match zeroset::analyze(&spec, &opts) {
            Ok(report) => {
                let (agree, discrepancies) = zeroset::verify_report(&report, &spec, 120)
                    .map_err(|e| TestCaseError::fail(e.to_string()))?;
                prop_assert!(
                    agree,
                    "report disagrees with exhaustive evaluation at {:?}",
                    discrepancies
                );
            }
            Err(Error::NoAdmissiblePrime { .. }) | Err(Error::PeriodCapExceeded { .. }) => {}
            Err(e) => return Err(TestCaseError::fail(format!("unexpected error: {e}"))),
        }
    }
}
