use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by an element that is zero to the available precision")]
    DivisionByZeroPrecision,
    #[error("p-adic context mismatch (p = {0} vs p = {1})")]
    ContextMismatch(u64, u64),
    #[error("valuation {0} is not divisible by 3, no cube root")]
    NoCubeRoot(i64),
    #[error("starting residue is not a simple root mod p")]
    NotSimpleRoot,
    #[error("constant term has negative valuation, series has no zeros in the disk")]
    NoRootsGuaranteed,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("possible multiple root in residue disk {0}")]
    DoubleRoot(String),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial has degree {0}, expected 4")]
    WrongDegree(usize),
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("point does not lie in the requested residue disk")]
    WrongDisk,
    #[error("endpoints lie in different residue disks")]
    NotSameDisk,
    #[error("differential has a pole in the residue disk")]
    PoleInDisk,
    #[error("boundary expansions do not converge at e = {0}; increase e")]
    IncreaseE(u32),
    #[error("polynomial does not split completely mod {0}")]
    NotSplit(u64),
    #[error("y-rule does not give a point on the curve")]
    BadYRule,
    #[error("divisor integrals vanish identically")]
    DegenerateDivisor,
    #[error("prime {0} is not admissible: {1}")]
    BadPrime(u64, String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
