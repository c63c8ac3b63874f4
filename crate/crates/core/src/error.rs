use thiserror::Error;

/// Errors raised by the geometry, orbit, fitting and locus routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid semiaxes a={a}, b={b}: need finite a >= b > 0")]
    InvalidSemiaxes { a: f64, b: f64 },

    #[error("operation requires a non-circular billiard (a > b), got a={a}, b={b}")]
    CircularBilliard { a: f64, b: f64 },

    #[error("invalid radius {0}: must be finite and > 0")]
    InvalidRadius(f64),

    #[error("point coincides with the inversion center")]
    SingularInversion,

    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),

    #[error("polygon has coincident consecutive vertices at index {0}")]
    CoincidentVertices(usize),

    #[error("non-finite coordinate in input")]
    NonFinite,

    #[error("degenerate triangle (area {area:e})")]
    DegenerateTriangle { area: f64 },

    #[error("unsupported triangle center X{0}")]
    UnsupportedCenter(u32),

    #[error("trilinear triple maps to a point at infinity")]
    PointAtInfinity,

    #[error("coincident boundary parameters")]
    CoincidentParameters,

    #[error("invalid vertex count {0}: need n >= 3")]
    InvalidVertexCount(usize),

    #[error("no periodic orbit bracket found for n={n}, t1={t1}")]
    NoBracket { n: usize, t1: f64 },

    #[error("Newton failed to converge after {iterations} iterations (max residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("solver collapsed to a lower-period orbit (repeated parameter at index {0})")]
    CollapsedOrbit(usize),

    #[error("Joachimsthal spread {spread:e} exceeds {limit:e}: not a billiard orbit")]
    NotAnOrbit { spread: f64, limit: f64 },

    #[error("caustic semiaxis {caustic_a} must lie in (0, {a})")]
    InvalidCaustic { caustic_a: f64, a: f64 },

    #[error("zero-length side at index {0}")]
    ZeroLengthSide(usize),

    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("points are collinear")]
    CollinearPoints,

    #[error("conic design matrix is rank deficient")]
    RankDeficient,

    #[error("conic is not an ellipse ({0})")]
    NotAnEllipse(&'static str),

    #[error("line passes through the origin and cannot be normalized to ux+vy=1")]
    LineThroughCenter,

    #[error("grid size {got} below minimum {min}")]
    GridTooSmall { got: usize, min: usize },

    #[error("sample at t1={t1} failed: {source}")]
    Sample {
        t1: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at(self, t1: f64) -> Error {
        match self {
            e @ Error::Sample { .. } => e,
            e => Error::Sample {
                t1,
                source: Box::new(e),
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
