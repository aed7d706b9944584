use thiserror::Error;

/// Every failure the library can report.
///
/// Variants that name a lemma or theorem check carry enough data to
/// reproduce the failing computation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("exact division impossible: divisor valuation {divisor} exceeds dividend valuation {dividend}")]
    DivisionImpossible { dividend: usize, divisor: usize },
    #[error("(U+I) image of (r^2+r)r^(2*{n}) is not of the form (r^2+r)C(r^2)")]
    ShapeViolation { n: usize },
    #[error("polynomial is not in M(odd): {0}")]
    NotInMOdd(String),
    #[error("sequence table covers n <= {have}, need {need}")]
    TableTooSmall { have: usize, need: usize },
    #[error("kernel theorem violated at n = {n} ({detail}); echelon state {state_hash}")]
    TheoremViolated {
        n: usize,
        detail: String,
        state_hash: String,
    },
    #[error("no dependency expected for n = {n} (n mod 6 = {})", n % 6)]
    NotApplicable { n: usize },
    #[error("window pattern violated for g_{n} at degree {degree}")]
    LemmaViolated { n: usize, degree: usize },
    #[error("dimension check failed for m = {m}: {detail}")]
    DimensionViolation { m: usize, detail: String },
    #[error("bad J/character index {0}: must be positive and prime to 10")]
    BadIndex(i64),
    #[error("element is not in N2 (obstruction at g-degree {degree})")]
    NotInN2 { degree: usize },
    #[error("projection mismatch for f_{n}: got {got:?}, expected leading {leading} with remainder <= {bound:?}")]
    ProjectionMismatch {
        n: usize,
        got: Vec<u64>,
        leading: u64,
        bound: Option<u64>,
    },
    #[error("{0} is not an admissible Hecke prime (must be an odd prime other than 5)")]
    BadPrime(u64),
    #[error("series is not in the span of (r^2+r)r^(2n): obstruction at x^{exponent}")]
    NotInMOddSpan { exponent: usize },
    #[error("U_5 and U disagree on (r^2+r)r^(2*{n}) at x^{exponent}")]
    AgreementFailure { n: usize, exponent: usize },
    #[error("f_{n} is not fixed by U_5 (first difference at x^{exponent})")]
    MembershipFailure { n: usize, exponent: usize },
    #[error("T_{p}(f_{n}) escapes the span of the truncated K basis: {detail}")]
    ClosureFailure { p: u64, n: usize, detail: String },
    #[error("no adapted vector for cell ({i},{j}) (system rank {rank}, {unknowns} unknowns)")]
    NoSolution {
        i: usize,
        j: usize,
        rank: usize,
        unknowns: usize,
    },
    #[error("T_{p} is not multiplication by a power series on the grid: {detail}")]
    NotMultiplication { p: u64, detail: String },
    #[error("K -> W_a check failed for f_{n} under T_{q}: {detail}")]
    EquivarianceFailure { n: usize, q: u64, detail: String },
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
