//! Computational kernel for flat real projective geometry on the n-sphere.
//!
//! The sphere `S^n` is the set of unit directions of `R^{n+1}`, acted on
//! projectively by `SL±(n+1, R)`. On top of that action this crate provides:
//!
//! * spherical convex bodies represented by finitely generated homogeneous
//!   cones, with classification, supporting hyperspheres, Hausdorff metric
//!   and geometric limits ([`convex`]);
//! * KTK (Cartan) decompositions and the attractor/blow-up dynamics of
//!   diverging automorphism sequences ([`cartan`]);
//! * explicitly presented Kuiper completions: CSG domains with automorphism
//!   groups, ideal sets, crescent validation, dipping and transversal
//!   predicates, Λ-classes and two-faced components ([`kuiper`]);
//! * m-convexity probing via simplex witnesses and direct convexity checks
//!   ([`probe`]).
//!
//! All types are immutable values and every operation is pure; everything is
//! safe to share across threads. Randomized routines take explicit 64-bit
//! seeds and are bit-for-bit reproducible.

pub mod cartan;
pub mod cone;
pub mod convex;
pub mod kuiper;
pub mod probe;
pub mod sphere;

use thiserror::Error;

/// Unit-norm tolerance for points and basis vectors.
pub const EPS_NORM: f64 = 1e-12;

/// The single angular tolerance used by all geometric predicates, in radians.
pub const EPS_ANGLE: f64 = 1e-9;

/// Margin used by strict-separation and interior-feasibility certificates.
pub const EPS_MARGIN: f64 = 1e-6;

/// Number of directions in the deterministic grid used by the Hausdorff
/// metric. Part of the numeric contract of [`convex::hausdorff_distance`].
pub const HAUSDORFF_GRID: usize = 4096;

/// Boundary sample count used when pulling convex bodies back through
/// automorphisms ([`cartan::blowup_limit`]).
pub const BOUNDARY_SAMPLES: usize = 512;

/// Angular resolution of the triangulated samples used for component
/// counting on crescent ν-sides.
pub const COMPONENT_RESOLUTION: f64 = 0.01;

/// Sample count for interior/ideal checks when validating crescents and
/// simplex witnesses.
pub const VALIDATION_PROBES: usize = 10_000;

/// Points sampled per segment by the convexity checker, on top of the exact
/// removed-set intersection tests.
pub const SEGMENT_SAMPLES: usize = 256;

/// Errors shared by the geometric kernel.
#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("zero vector cannot be normalized to a sphere point")]
    ZeroVector,
    #[error("matrix is singular within tolerance and cannot act on the sphere")]
    SingularInput,
    #[error("antipodal or near-antipodal pair is not a proper pair")]
    ImproperPair,
    #[error("points do not lie on a common great circle within tolerance")]
    NonCollinear,
    #[error("degenerate cross-ratio configuration: {0}")]
    DegenerateCrossRatio(&'static str),
    #[error("point lies on or beyond the boundary of the affine patch")]
    OutOfPatch,
    #[error("a pair of antipodal points is not a convex set")]
    NotConvex,
    #[error("dimension mismatch: expected ambient dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("no supporting hypersphere: body is the whole sphere")]
    NoSupport,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("inconsistency detected: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, GeometryError>;
