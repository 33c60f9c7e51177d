use thiserror::Error;

/// Errors raised by the constructors and operations of this crate.
///
/// Mathematical verdicts (a map is not a precover, an Ext group is nonzero)
/// are reported through certificates and witnesses, not through this type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must satisfy 2 <= n <= 2^31 - 1, got {0}")]
    InvalidModulus(u64),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("ring mismatch: Z/{0} vs Z/{1}")]
    RingMismatch(u64, u64),
    #[error("morphism is not well defined: relation {relation} of the source does not map into the target relations")]
    NotWellDefined { relation: usize },
    #[error("differentials compose to a nonzero map at degree {degree}")]
    DeltaSquared { degree: i32 },
    #[error("chain map does not commute with the differentials at degree {degree}")]
    NotChainMap { degree: i32 },
    #[error("ring Z/{0} is not local")]
    NotLocal(u64),
    #[error("order bound exceeded: |M| = {order} > {bound}")]
    OrderBound { order: u64, bound: u64 },
    #[error("unknown module class {0:?}")]
    UnknownClass(String),
    #[error("not a short exact sequence: {0}")]
    NotShortExact(String),
    #[error("complex is not exact at degree {degree} (homology of order {homology_order})")]
    NotExact { degree: i32, homology_order: u64 },
    #[error("cycle module at degree {degree} is not in class {class}")]
    CycleNotInClass { degree: i32, class: String },
    #[error("provider for class {class} returned a non-epimorphism at degree {degree}")]
    ProviderNotEpic { class: String, degree: i32 },
    #[error("lifting system unsolvable at degree {degree}: Ext^1 obstruction with elementary divisors {ext_divisors:?}")]
    LiftingObstruction { degree: i32, ext_divisors: Vec<u64> },
    #[error("class {0} is not stable under duality")]
    DualityUnstable(String),
    #[error("no construction route: supply an exact precover of the complex (general special exact precovers are not built in)")]
    NoRoute,
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
