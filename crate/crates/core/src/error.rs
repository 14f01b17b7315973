use thiserror::Error;

/// Every failure the library can report. Variants carry the numeric defect
/// or a short description of what did not resolve.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("not Hermitian (symmetry violation {0:.3e})")]
    NotHermitian(f64),
    #[error("Jacobi iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("corner is singular on its support (smallest eigenvalue {0:.3e})")]
    SingularOnSupport(f64),
    #[error("not idempotent (defect {0:.3e})")]
    NotIdempotent(f64),
    #[error("not a projection (defect {0:.3e})")]
    NotProjection(f64),
    #[error("not unitary (defect {0:.3e})")]
    NotUnitary(f64),
    #[error("not a partial isometry (defect {0:.3e})")]
    NotPartialIsometry(f64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("cone endpoint mismatch (defect {0:.3e})")]
    EndpointMismatch(f64),
    #[error("invalid homomorphism: {0}")]
    InvalidHomomorphism(String),
    #[error("invalid ladder: {0}")]
    InvalidLadder(String),
    #[error("invalid sampled element: {0}")]
    InvalidSampled(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("maps are not composable: {0}")]
    NotComposable(String),
    #[error("homomorphism mismatch: {0}")]
    HomMismatch(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("invalid triple: {0}")]
    InvalidTriple(String),
    #[error("source algebra is not finite-dimensional")]
    NotFiniteDimensional,
    #[error("homomorphism is not zero")]
    NotZeroHom,
    #[error("scalar parts have different classes")]
    ScalarClassMismatch,
    #[error("invalid lift: {0}")]
    LiftInvalid(String),
    #[error("class is not in the kernel: {0}")]
    NotInKernel(String),
    #[error("invalid certificate: {0}")]
    CertificateInvalid(String),
    #[error("phase step {0:.3} between adjacent nodes is too coarse")]
    StepTooCoarse(f64),
    #[error("not computable in this regime: {0}")]
    NotComputable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
