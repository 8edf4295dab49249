use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("face {face} references vertex {vertex}, but the mesh has {count} vertices")]
    VertexOutOfRange { face: usize, vertex: usize, count: usize },
    #[error("face {face} repeats a vertex")]
    DegenerateFace { face: usize },
    #[error("edge ({0}, {1}) is shared by more than two faces")]
    NonManifoldEdge(usize, usize),
    #[error("mesh is not orientable (conflict reached at face {face})")]
    NonOrientable { face: usize },
    #[error("boundary edges do not form closed simple loops (at vertex {vertex})")]
    OpenChain { vertex: usize },
    #[error("corner vertex {0} is not on the boundary")]
    InteriorCorner(usize),
    #[error("section vanishes at vertex {vertex} (|psi| = {norm:e})")]
    ZeroOnVertex { vertex: usize, norm: f64 },
    #[error("phase step on edge {tail}->{head} is {step} rad, too close to pi; refine the mesh")]
    AngleStepPi { tail: usize, head: usize, step: f64 },
    #[error("winding sum {value} is not within tolerance of an integer")]
    WindingNotInteger { value: f64 },
    #[error("jacobian determinant {det:e} is below the degeneracy threshold")]
    DegenerateJacobian { det: f64 },
    #[error("winding {winding} on face {face} disagrees with jacobian sign {jacobian_sign}")]
    InconsistentDegree { face: usize, winding: i64, jacobian_sign: i8 },
    #[error("no connection value on edge ({0}, {1})")]
    MissingEdgeData(usize, usize),
    #[error("no two-form value for face {0}")]
    MissingFaceData(usize),
    #[error("boundary edge {0}->{1} has zero length")]
    DegenerateEdge(usize, usize),
    #[error("section is not tangent to the boundary at vertex {vertex} (|<n, normal>| = {dot:e})")]
    NotTangent { vertex: usize, dot: f64 },
    #[error("chart potentials disagree around a contractible cycle through edge {tail}->{head} (mismatch {mismatch:e})")]
    InconsistentAtlas { tail: usize, head: usize, mismatch: f64 },
    #[error("invalid atlas: {0}")]
    InvalidAtlas(String),
    #[error("field length {found} does not match {expected} mesh elements ({what})")]
    LengthMismatch { what: &'static str, expected: usize, found: usize },
    #[error("{0}")]
    NotApplicable(String),
    #[error("unsupported parameter: {0}")]
    UnsupportedParameter(String),
    #[error("invalid document: {0}")]
    Document(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for this error: 2 for usage problems, 3 for bad data.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::UnsupportedParameter(_) | Error::NotApplicable(_) => 2,
            _ => 3,
        }
    }
}
