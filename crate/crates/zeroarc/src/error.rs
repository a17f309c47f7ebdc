//! Error taxonomy for the whole pipeline.
//!
//! Errors split into three bands, mirrored by the CLI exit codes:
//! problems with the input (bad JSON, malformed recurrence, no usable
//! prime), analysis failures that a larger budget might fix, and internal
//! invariant violations that indicate a bug rather than a hard instance.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    // ---- input validation -------------------------------------------------
    /// The trailing coefficient P_d is not a constant polynomial (after the
    /// normalization shift).  The analytic-arc construction needs the
    /// companion determinant to be a unit everywhere, which this guarantees;
    /// `--extension-mode` relaxes it to "no roots mod p".
    #[error("trailing coefficient is not constant; rerun with extension mode if it has no roots mod p")]
    TrailingNotConstant,

    /// The trailing coefficient is identically zero, so the stated order is
    /// wrong: the recurrence is really of lower order.
    #[error("trailing coefficient is zero; the recurrence has order {suggested} rather than {stated}")]
    TrailingZero { stated: usize, suggested: usize },

    /// The left-hand side carries a polynomial factor P_0 that is not a
    /// nonzero constant, so the equation cannot be solved for f(n) and the
    /// sequence is not generated forward by a division-free recurrence.
    #[error("coefficient of f(n) is a non-constant polynomial; cannot normalize to solved form")]
    NotMonicForm,

    /// Number of supplied initial values does not match the offset.
    #[error("expected {expected} initial values for offset {offset}, got {got}")]
    BadInitialLength {
        expected: usize,
        offset: usize,
        got: usize,
    },

    /// No prime satisfied the admissibility conditions below the search cap.
    #[error("no admissible prime found below {cap}")]
    NoAdmissiblePrime { cap: u64 },

    /// A user-supplied prime failed an admissibility condition.
    #[error("prime {prime} is not admissible: {reason}")]
    NotAdmissible { prime: u64, reason: String },

    /// Extending the sequence backward required dividing by a vanishing
    /// trailing coefficient value.
    #[error("cannot extend the sequence backward past index {index}: trailing coefficient vanishes there")]
    BackwardExtension { index: i64 },

    // ---- p-adic arithmetic ------------------------------------------------
    /// A rational number's denominator is divisible by p, so it has no image
    /// in the truncated p-adic integers.
    #[error("denominator {den} is divisible by p = {p}")]
    DenominatorNotUnit { den: String, p: u64 },

    /// Inversion was requested for a non-unit (valuation >= 1).
    #[error("cannot invert: value has positive p-adic valuation")]
    NotAUnit,

    /// Exact division by p^e was requested for a value of valuation < e.
    #[error("cannot divide by p^{e}: value has valuation {val}")]
    NotDivisible { val: u32, e: u32 },

    // ---- analysis ---------------------------------------------------------
    /// The mod-p companion product failed to return to its starting value
    /// within the period cap.
    #[error("mod-p period exceeds cap {cap}; raise --max-period")]
    PeriodCapExceeded { cap: u64 },

    /// A mod-p companion factor was singular, so the admissibility check was
    /// wrong or the prime was forced.
    #[error("companion matrix at index {index} is singular mod p")]
    SingularReduction { index: u64 },

    /// The precision budget W cannot absorb a requested division or
    /// truncation; a larger iteration budget would be needed.
    #[error("p-adic precision exhausted: need {needed} digits, have {have}")]
    PrecisionExhausted { needed: u32, have: u32 },

    // ---- internal invariants (exit code 3) --------------------------------
    /// The defect at lift iteration m was not divisible by p^(m+1); the
    /// induction hypothesis failed, which indicates a bug.
    #[error("internal: lift defect at iteration {iteration}, component {component} not divisible by p^{needed}")]
    DefectNotDivisible {
        iteration: u32,
        component: usize,
        needed: u32,
    },

    /// A coefficient discarded by degree truncation during the lift was not
    /// a p-adic non-unit, violating the shape the induction guarantees.
    #[error("internal: truncated coefficient at lift iteration {iteration}, component {component} is a unit")]
    TruncationShapeViolated { iteration: u32, component: usize },

    /// The right-hand side handed to the difference-system solver was not
    /// congruent mod p to a polynomial within the degree bound.
    #[error("internal: difference-system right-hand side has a unit coefficient above degree {bound} in component {component}")]
    DegreeBoundViolated { component: usize, bound: usize },

    /// Any other broken internal invariant (companion determinant, arc/state
    /// agreement, certified decomposition disagreeing with exact values, ...).
    #[error("internal: {0}")]
    Internal(String),

    // ---- plumbing ---------------------------------------------------------
    #[error("cannot parse rational {0:?}")]
    BadRational(String),

    #[error("invalid recurrence description: {0}")]
    BadSpec(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// CLI exit code band for this error: 1 for problems with the input or
    /// its parameters, 3 for violated internal invariants.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::DefectNotDivisible { .. }
            | Error::TruncationShapeViolated { .. }
            | Error::DegreeBoundViolated { .. }
            | Error::Internal(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
