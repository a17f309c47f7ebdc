//! End-to-end zero-set analysis: prime selection, companion construction,
//! period detection, per-class arc lifting, zero counting, and assembly of
//! the certified decomposition.
//!
//! The output describes {n : f(n) = 0} as finitely many arithmetic
//! progressions plus a finite exceptional set.  For each residue class
//! c mod b the interpolating series either vanishes to the working
//! precision (and the exact oracle confirms every sampled member is zero:
//! the class joins a progression), or admits a zero-count bound N in Z_p.
//! When the exact zeros found in the class reach N the class is complete —
//! no further zeros can exist at any height, because the ambient count over
//! Z_p already caps them.  Anything the bound leaves open is reported
//! honestly as partial, and classes the precision cannot decide trigger a
//! doubling of the iteration budget before being reported inconclusive.
//!
//! All certification rests on exact rational arithmetic for the sequence
//! itself; the p-adic side only ever supplies upper bounds on zero counts
//! and vanishing-to-precision evidence, so a disagreement between the two
//! is an internal error, never a property of the input.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arc;
use crate::companion::CompanionSystem;
use crate::error::{Error, Result};
use crate::padic::PadicContext;
use crate::primes;
use crate::recurrence::{NormalizedSpec, RecurrenceSpec};
use crate::strassman::{self, StrassmanStatus};

/// Largest prime value tried during automatic prime selection.
pub const PRIME_SEARCH_CAP: u64 = 50_000;

#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    /// Force this prime instead of searching (must be admissible).
    pub prime: Option<u64>,
    /// Initial lift iteration budget M; working precision is p^(M+2).
    pub m_iters: u32,
    /// Escalation ceiling: M doubles toward this on inconclusive classes.
    pub m_cap: u32,
    /// Exact-oracle search bound (original sequence indexing, inclusive).
    pub horizon: u64,
    /// Cap for the mod-p period search.
    pub period_cap: u64,
    /// Accept non-constant trailing coefficients with no roots mod p.
    pub extension_mode: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            prime: None,
            m_iters: 16,
            m_cap: 64,
            horizon: 2000,
            period_cap: 1_000_000,
            extension_mode: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ClassStatus {
    /// Series vanishes mod p^(M+1) and the oracle confirms every sampled
    /// member of the class is exactly zero: the class is a progression.
    AllZero,
    /// The zero-count bound is met exactly by verified zeros: the list is
    /// the complete zero set of this class at every height.
    Complete,
    /// A bound N holds but fewer than N zeros were found below the horizon;
    /// zeros beyond it cannot be excluded.
    BoundedPartial,
    /// Precision could not separate the class even at the escalation cap.
    Inconclusive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassReport {
    /// Residue class of the shifted sequence, 0 <= c < b.
    pub c: u64,
    pub status: ClassStatus,
    /// Strassman index: at most this many zeros in Z_p (bounded statuses).
    pub strassman_bound: Option<u64>,
    /// Exact zeros found in this class, in original sequence indexing.
    pub zeros: Vec<u64>,
    /// Minimal power-coefficient valuation (shift-corrected).
    pub min_val: Option<i64>,
    /// Truncation-tail threshold the dominance was tested against.
    pub tau: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Progression {
    pub modulus: u64,
    /// First member (original indexing); membership is n >= residue and
    /// n === residue (mod modulus).  May exceed the modulus when the
    /// progression starts late in the sequence.
    pub residue: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Decomposition {
    pub progressions: Vec<Progression>,
    pub exceptional: Vec<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZeroSetReport {
    pub prime: u64,
    pub modulus_b: u64,
    /// Coefficients and valuations are certified modulo p^precision_exp.
    pub precision_exp: u32,
    pub horizon: u64,
    pub classes: Vec<ClassReport>,
    pub decomposition: Decomposition,
    pub certified_equal_to_oracle_upto: u64,
}

impl ZeroSetReport {
    /// Membership test against the decomposition.
    pub fn contains(&self, n: u64) -> bool {
        self.decomposition
            .progressions
            .iter()
            .any(|pr| n >= pr.residue && (n - pr.residue) % pr.modulus == 0)
            || self.decomposition.exceptional.binary_search(&n).is_ok()
    }

    /// True when every class reached a certified status.
    pub fn fully_certified(&self) -> bool {
        self.classes
            .iter()
            .all(|c| matches!(c.status, ClassStatus::AllZero | ClassStatus::Complete))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Express a subset X of residues mod b as progressions with moduli
/// dividing b: greedy over divisors in increasing order, each emitted
/// progression a full congruence class that lies inside X and covers at
/// least one uncovered residue.  Deterministic; minimal for subsets that
/// are unions of congruence classes of a single modulus.
pub fn merge_progressions(b: u64, classes: &BTreeSet<u64>) -> Vec<(u64, u64)> {
    let mut covered: BTreeSet<u64> = BTreeSet::new();
    let mut out = Vec::new();
    let mut divisors: Vec<u64> = (1..=b).filter(|m| b % m == 0).collect();
    divisors.sort_unstable();
    for m in divisors {
        for r in 0..m {
            let members: Vec<u64> = (r..b).step_by(m as usize).collect();
            if members.iter().all(|c| classes.contains(c))
                && members.iter().any(|c| !covered.contains(c))
            {
                covered.extend(members);
                out.push((m, r));
            }
        }
        if covered.len() == classes.len() {
            break;
        }
    }
    out
}

/// Analysis of one residue class at one precision, before assembly.
struct ClassOutcome {
    report: ClassReport,
    all_zero: bool,
    inconclusive: bool,
}

fn analyze_class(
    ctx: &PadicContext,
    class: &crate::companion::ClassSystem,
    m_iters: u32,
    shift: u64,
    horizon: u64,
    zero_flags: &[bool],
) -> Result<ClassOutcome> {
    let (c, b) = (class.c, class.b);
    let lifted = arc::lift(ctx, class, m_iters)?;
    let sr = strassman::analyze_series(ctx, &lifted.series[0])?;

    // Exact zeros of this class below the horizon, original indexing.
    let mut members = 0u64;
    let mut zeros = Vec::new();
    let mut idx = shift + c;
    while idx <= horizon {
        members += 1;
        if zero_flags[idx as usize] {
            zeros.push(idx);
        }
        idx += b;
    }

    let (status, all_zero, inconclusive) = match sr.status {
        StrassmanStatus::VanishingToPrecision => {
            if members > 0 && zeros.len() as u64 == members {
                (ClassStatus::AllZero, true, false)
            } else {
                // Either no oracle sample reaches this class, or a sampled
                // value is nonzero while the series vanishes to precision:
                // the precision cannot separate the class.
                (ClassStatus::Inconclusive, false, true)
            }
        }
        StrassmanStatus::Bounded => {
            let n = sr.bound.expect("bounded result carries its index") as u64;
            if (zeros.len() as u64) > n {
                return Err(Error::Internal(format!(
                    "class {c}: {} verified zeros exceed the certified bound {n}",
                    zeros.len()
                )));
            }
            if zeros.len() as u64 == n {
                (ClassStatus::Complete, false, false)
            } else {
                (ClassStatus::BoundedPartial, false, false)
            }
        }
        StrassmanStatus::Inconclusive => (ClassStatus::Inconclusive, false, true),
    };

    Ok(ClassOutcome {
        report: ClassReport {
            c,
            status,
            strassman_bound: match sr.status {
                StrassmanStatus::Bounded => sr.bound.map(|n| n as u64),
                _ => None,
            },
            zeros,
            min_val: sr.min_val,
            tau: sr.tau,
        },
        all_zero,
        inconclusive,
    })
}

fn analyze_at(
    normalized: &NormalizedSpec,
    prime: u64,
    m_iters: u32,
    opts: &AnalysisOptions,
    zero_flags: &[bool],
) -> Result<(ZeroSetReport, bool)> {
    let ctx = PadicContext::new(prime, m_iters + 2)?;
    let sys = CompanionSystem::build(normalized, &ctx)?;
    let (_, _, b) = sys.find_period(opts.period_cap)?;
    let shift = normalized.shift as u64;

    let mut classes = Vec::with_capacity(b as usize);
    let mut all_zero_classes = BTreeSet::new();
    let mut any_inconclusive = false;
    for class in sys.class_systems(b)? {
        let outcome = analyze_class(&ctx, &class, m_iters, shift, opts.horizon, zero_flags)?;
        if outcome.all_zero {
            all_zero_classes.insert(class.c);
        }
        any_inconclusive |= outcome.inconclusive;
        classes.push(outcome.report);
    }

    // Progressions in shifted indexing, translated to the original one,
    // then extended downward through any verified zeros in front of them.
    let mut progressions = Vec::new();
    let mut covered = vec![false; zero_flags.len()];
    for (modulus, r) in merge_progressions(b, &all_zero_classes) {
        let mut start = shift + r;
        while start >= modulus && zero_flags[(start - modulus) as usize] {
            start -= modulus;
        }
        let mut idx = start;
        while idx <= opts.horizon {
            covered[idx as usize] = true;
            idx += modulus;
        }
        progressions.push(Progression {
            modulus,
            residue: start,
        });
    }

    let exceptional: Vec<u64> = (0..=opts.horizon)
        .filter(|&n| zero_flags[n as usize] && !covered[n as usize])
        .collect();

    let report = ZeroSetReport {
        prime,
        modulus_b: b,
        precision_exp: m_iters + 1,
        horizon: opts.horizon,
        classes,
        decomposition: Decomposition {
            progressions,
            exceptional,
        },
        certified_equal_to_oracle_upto: opts.horizon,
    };

    // The decomposition must reproduce the oracle on the nose.
    for n in 0..=opts.horizon {
        if report.contains(n) != zero_flags[n as usize] {
            return Err(Error::Internal(format!(
                "decomposition membership disagrees with the exact oracle at n = {n}"
            )));
        }
    }

    Ok((report, any_inconclusive))
}

/// Resolve the working prime: validate a forced choice against the
/// admissibility conditions, or search for the smallest admissible one.
pub fn choose_prime(
    normalized: &NormalizedSpec,
    forced: Option<u64>,
    extension_mode: bool,
) -> Result<u64> {
    match forced {
        Some(p) => {
            if p < 5 || !crate::padic::is_prime(p) {
                return Err(Error::NotAdmissible {
                    prime: p,
                    reason: "must be a prime >= 5".into(),
                });
            }
            let check = primes::check_admissible(normalized, p, extension_mode);
            if !check.admissible() {
                let reason = check
                    .rejected
                    .iter()
                    .map(|(what, why)| format!("{what}: {why}"))
                    .collect::<Vec<_>>()
                    .join("; ");
                return Err(Error::NotAdmissible { prime: p, reason });
            }
            Ok(p)
        }
        None => {
            Ok(primes::admissible_primes(normalized, 1, 5, extension_mode, PRIME_SEARCH_CAP)?[0])
        }
    }
}

/// Run the full pipeline on a validated recurrence.
pub fn analyze(spec: &RecurrenceSpec, opts: &AnalysisOptions) -> Result<ZeroSetReport> {
    let normalized = spec.validate(opts.extension_mode)?;
    let prime = choose_prime(&normalized, opts.prime, opts.extension_mode)?;

    let values = normalized.eval_upto(opts.horizon as usize);
    let zero_flags: Vec<bool> = values.iter().map(|v| v.is_zero()).collect();

    let mut m = opts.m_iters.clamp(1, opts.m_cap.max(1));
    loop {
        let (report, any_inconclusive) = analyze_at(&normalized, prime, m, opts, &zero_flags)?;
        if !any_inconclusive || m >= opts.m_cap {
            return Ok(report);
        }
        m = (m * 2).min(opts.m_cap);
    }
}

/// Check a report's decomposition against the exact oracle for all
/// n <= upto.  Returns whether they agree, plus every disagreeing index.
pub fn verify_report(
    report: &ZeroSetReport,
    spec: &RecurrenceSpec,
    upto: u64,
) -> Result<(bool, Vec<u64>)> {
    let normalized = spec.validate(true)?;
    let values = normalized.eval_upto(upto as usize);
    let mut discrepancies = Vec::new();
    for n in 0..=upto {
        if report.contains(n) != values[n as usize].is_zero() {
            discrepancies.push(n);
        }
    }
    Ok((discrepancies.is_empty(), discrepancies))
}

/// The next admissible prime strictly above `after` (for cross-checking).
pub fn next_admissible_prime(
    spec: &RecurrenceSpec,
    after: u64,
    extension_mode: bool,
) -> Result<u64> {
    let normalized = spec.validate(extension_mode)?;
    Ok(primes::admissible_primes(
        &normalized,
        1,
        after + 1,
        extension_mode,
        PRIME_SEARCH_CAP,
    )?[0])
}

/// Do two reports claim the same zero set below `upto`?
pub fn reports_agree(a: &ZeroSetReport, b: &ZeroSetReport, upto: u64) -> bool {
    (0..=upto).all(|n| a.contains(n) == b.contains(n))
}
