use thiserror::Error;

/// Every failure the numerical kernel can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("both homogeneous coordinates are zero")]
    DegeneratePoint,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("map is projectively the identity")]
    IdentityMap,
    #[error("point is not a fixed point of the map")]
    NotFixedPoint,
    #[error("fixed points coincide")]
    CoincidentFixedPoints,
    #[error("multiplier must be nonzero and finite")]
    InvalidMultiplier,
    #[error("disk radius must be positive and finite, got {0}")]
    NonpositiveRadius(f64),
    #[error("Hermitian form does not describe a proper disk")]
    DegenerateDisk,
    #[error("Gamma has a pole at {re} + {im}i")]
    PoleAtNonpositiveInteger { re: f64, im: f64 },
    #[error("Gamma pole in argument `{argument}`")]
    GammaPole { argument: &'static str },
    #[error("sin(pi x) vanishes")]
    SinePole,
    #[error("connection matrix is singular")]
    SingularConnection,
    #[error("normalizing fixed point f2 vanishes")]
    DegenerateNormalization,
    #[error("disks are not disjoint")]
    DisksNotDisjoint,
    #[error("disk must be bounded")]
    UnboundedDisk,
    #[error("root {root} falls outside ({lo}, {hi})")]
    NumericalRootOutsideInterval { root: f64, lo: f64, hi: f64 },
    #[error("point is not interior to the disk")]
    PointNotInterior,
    #[error("degenerate Apollonius data only accepts a phase")]
    PhaseRequired,
    #[error("point is not on the Apollonius circle (ratio {found}, expected {expected})")]
    PointNotOnA { found: f64, expected: f64 },
    #[error("generator is not loxodromic")]
    NonLoxodromicGenerator,
    #[error("orbit depth {0} exceeds 12")]
    DepthTooLarge(usize),
    #[error("branch tracking failed near t = {t}")]
    BranchJump { t: f64 },
    #[error("profile failed its audit: {0}")]
    ProfileNotAudited(&'static str),
    #[error("could not place paired disks at t = {t}; raise theta1")]
    DiskConstructionFailed { t: f64 },
    #[error("no certifying disks found for the base point")]
    BasePointNotCertified,
    #[error("angle must be positive and finite, got {0}")]
    NonpositiveAngle(f64),
    #[error("parameters are not pure-imaginary exponent differences")]
    NotPureImaginary,
}
