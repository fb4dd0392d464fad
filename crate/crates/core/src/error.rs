use num_bigint::BigUint;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("cyclic factor exponents must be positive")]
    ZeroExponent,
    #[error("groups are defined over different primes ({left} and {right})")]
    PrimeMismatch { left: u64, right: u64 },
    #[error("{0} requires a non-trivial group")]
    TrivialGroup(&'static str),
    #[error("K_p-series indices start at 1")]
    ZeroIndex,
    #[error("invalid active profile: {0}")]
    InvalidProfile(String),
    #[error("invalid lemma inputs: {0}")]
    InvalidLemmaInputs(String),
    #[error("wreath product is not nilpotent")]
    NotNilpotent,
    #[error("group of order {required} exceeds the size limit of {limit} elements")]
    SizeLimit { required: BigUint, limit: u64 },
    #[error("group of order {order} is not a {p}-group")]
    NotPGroup { order: u64, p: u64 },
    #[error("passive group must be abelian")]
    NotAbelian,
    #[error("invalid group description: {0}")]
    InvalidGroup(String),
}
