use thiserror::Error;

/// Errors raised by the geometric constructions. Variants are grouped by the
/// module that produces them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    // study
    #[error("the zero vector is not a projective point")]
    ZeroInput,
    #[error("point lies on the Study boundary (p p̄ = 0)")]
    BoundaryPoint,
    #[error("line does not pass through the identity")]
    NotThroughIdentity,
    #[error("axis direction is zero")]
    ZeroDirection,
    #[error("spanning points are projectively dependent")]
    DependentPoints,
    #[error("line is not contained in the Study quadric")]
    NotOnStudy,
    #[error("base point must have x0 != 0")]
    CenterChart,

    // moebius
    #[error("point is the centre of stereographic projection")]
    CenterOfProjection,
    #[error("witness points are projectively collinear")]
    CollinearWitnesses,
    #[error("plane section of the Moebius quadric is reducible (rank {0} < 3)")]
    ReducibleSection(usize),
    #[error("point is not on the Moebius quadric")]
    NotOnSphere,

    // orbit
    #[error("point lies in the base locus of the orbit map")]
    BaseLocus,
    #[error("every sampled point of the line lies in the base locus")]
    BaseLocusOnLine,
    #[error("motion has identically vanishing orbit")]
    DegenerateMotion,
    #[error("all five forms vanish at the parameter")]
    Basepoint,
    #[error("motion violates the Study condition")]
    StudyViolation,

    // cyclide
    #[error("image is not a Darboux cyclide: quadric pencil has dimension {0}, expected 2")]
    NotACyclide(usize),
    #[error("intersection count differs between probes: {0:?}")]
    IndeterminateCount(Vec<usize>),
    #[error("curves coincide; intersection count is infinite")]
    InfiniteIntersection,
    #[error("no parameter maps to the requested point")]
    PointNotOnSurface,
    #[error("parameter of the requested point is not rational; use float mode")]
    IrrationalParameter,

    // reconstruct
    #[error("circle is a point orbit and has no unique lift")]
    DegenerateCircle,
    #[error("constructed lines span a space of dimension {0}, expected 3")]
    DegenerateConfiguration(usize),
    #[error("quadric is not doubly ruled (rank {rank}, signature ({pos},{neg}))")]
    NotDoublyRuled { rank: usize, pos: usize, neg: usize },
    #[error("mapped sample is not on the target cyclide (residual {0:e})")]
    OrbitMismatch(f64),
    #[error("the two families do not meet in exactly one point (F·F' = {0})")]
    FamiliesNotTransversal(usize),
    #[error("rulings are not defined over the rationals; use float mode")]
    IrrationalRulings,

    // quatfactor
    #[error("biquadratic map violates X0 X4 = X1^2 + X2^2 + X3^2")]
    NotOnMoebius,
    #[error("X0 vanishes identically")]
    ZeroNormForm,
    #[error("no convergence after {restarts} restarts (best residual {best:e})")]
    NoConvergence { restarts: usize, best: f64 },

    // picard
    #[error("class {0:?} is not a conic class")]
    NotAConicClass([i64; 6]),

    #[error("generation failed: {0}")]
    Generation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
