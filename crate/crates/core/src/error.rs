use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("line {line}: {msg}")]
    CodeFile { line: usize, msg: String },

    #[error("width mismatch: {left} vs {right}")]
    WidthMismatch { left: usize, right: usize },

    #[error("row length {got} does not match layout width {expected}")]
    LengthMismatch { got: usize, expected: usize },

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),

    #[error("invalid modulus {0}")]
    InvalidModulus(u32),

    #[error("{0} is not prime")]
    NotPrime(u32),

    #[error("region too small: {0}")]
    RegionTooSmall(String),

    #[error("generators {first} and {second} do not commute (offending monomial {monomial})")]
    Commutation {
        first: String,
        second: String,
        monomial: String,
    },

    #[error("generator {0} is zero")]
    ZeroGenerator(usize),

    #[error("unknown code `{0}`")]
    UnknownCode(String),

    #[error("torus size {size} invalid: {msg}")]
    Torus { size: usize, msg: String },

    #[error("no y-direction string for anyon {anyon} with n_y <= {nmax}")]
    NoYString { anyon: usize, nmax: usize },

    #[error("no nontrivial boson among {0} remaining anyons")]
    NoBoson(usize),

    #[error("no partner with unit braiding for the boson")]
    NoPartner,

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
