use crate::series::Var;
use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("variable mismatch: {0:?} vs {1:?}")]
    VarMismatch(Var, Var),
    #[error("coefficient at exponent {exp} is unknown (series truncated at {trunc})")]
    Unknown { exp: i64, trunc: i64 },
    #[error("leading coefficient is not invertible")]
    NotInvertible,
    #[error("exact series has no finite inverse; supply a precision")]
    NeedsPrecision,
    #[error("exp needs a series with positive valuation")]
    BadExpInput,
    #[error("window [{lo}, {hi}] not certified (certified up to {certified})")]
    Window { lo: i64, hi: i64, certified: i64 },
    #[error("imaginary residue where a real value is required")]
    ImaginaryResidue,
    #[error("inconsistent c(m) extraction at m = {0}")]
    InconsistentC(i64),
    #[error("missing metadata: {0}")]
    MissingMetadata(&'static str),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("phi entry ({0}, {1}) is unknown")]
    UnknownPhi(i64, i64),
    #[error("margin does not vanish: {0}")]
    Margin(String),
    #[error("linear system is inconsistent at q-order {0}")]
    Inconsistent(i64),
    #[error("linear system is underdetermined at q-order {0} (rank defect {1})")]
    Underdetermined(i64, usize),
    #[error("missing data: {0}")]
    Missing(String),
}

pub type Result<T> = core::result::Result<T, Error>;
