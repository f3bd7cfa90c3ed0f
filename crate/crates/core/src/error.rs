use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// No Daubechies filter is tabulated for this number of vanishing moments.
    FilterNotTabulated(usize),
    /// A coefficient sequence whose length is not a power of two (or is < 2).
    NotPowerOfTwo(usize),
    /// A mesh value was NaN or infinite.
    NonFinite { index: usize },
    /// A decomposition level does not hold 2^level entries.
    LevelShape { level: usize, expected: usize, found: usize },
    /// Fewer than three levels were left for the log-sup regression.
    TooFewLevels { usable: usize },
    /// All regression abscissae coincide.
    ZeroVariance,
    /// Every detail level is identically zero (e.g. the mesh of f ≡ 0).
    DegenerateInput,
    /// A parameter outside its documented domain.
    InvalidParameter(&'static str),
    /// Hash placement found no free slot within half the table.
    CollisionCascade { slot: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::FilterNotTabulated(p) => {
                write!(f, "filter order not tabulated: p = {p} (supported 1..=20)")
            }
            Error::NotPowerOfTwo(n) => write!(f, "length {n} is not a power of two >= 2"),
            Error::NonFinite { index } => write!(f, "non-finite mesh value at index {index}"),
            Error::LevelShape { level, expected, found } => write!(
                f,
                "decomposition level {level} has {found} entries, expected {expected}"
            ),
            Error::TooFewLevels { usable } => {
                write!(f, "regression needs at least 3 usable levels, got {usable}")
            }
            Error::ZeroVariance => f.write_str("regression abscissae have zero variance"),
            Error::DegenerateInput => {
                f.write_str("degenerate input: every detail level is identically zero")
            }
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::CollisionCascade { slot } => {
                write!(f, "no free mesh slot within half the table around slot {slot}")
            }
        }
    }
}

impl core::error::Error for Error {}
