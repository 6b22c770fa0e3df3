use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid problem: {0}")]
    InvalidSpec(String),

    #[error("catalog of {0} items is too large to embed in a 64-bit index space")]
    EmbeddingOverflow(u64),

    #[error("index {index} out of range for a database of {size} basis states")]
    IndexOutOfRange { index: u64, size: u64 },

    #[error("prefix length j={j} outside 1..={max}")]
    PrefixOutOfRange { j: u32, max: u32 },

    #[error("dense simulation needs {required} amplitudes, above the limit of {limit}")]
    SizeGate { required: u64, limit: u64 },

    #[error("recursive expansion of {requested} iterations exceeds the limit of {limit}")]
    ExpansionGate { requested: usize, limit: usize },

    #[error("rho = {0} is outside (1/4, 1]")]
    RhoOutOfDomain(f64),

    #[error("q = {requested} exceeds the maximum of {limit} extra iterations")]
    TooManyExtraIterations { requested: u32, limit: u32 },

    #[error("the collapsed two-amplitude form starts at q = 1")]
    NoCollapsedForm,

    #[error("j = {j} outside 0..={max}")]
    StepOutOfRange { j: u32, max: u32 },

    #[error("oracle-call count overflows for {0} iterations")]
    CostOverflow(u32),

    #[error("invalid sweep grid: {0}")]
    InvalidGrid(String),
}
