use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("series did not converge: {0}")]
    NonConvergence(String),
    #[error("potential is nonphysical near the origin: {0}")]
    NonphysicalPotential(String),
    #[error("classification ambiguous: {0}")]
    ClassificationAmbiguous(String),
    #[error("radius outside tabulated range: r = {0}")]
    OutOfTableRange(f64),
    #[error("integration step failure: {0}")]
    StepFailure(String),
    #[error("stiffness limit reached: {0}")]
    StiffnessLimit(String),
    #[error("both u and u' below threshold at r = {0}; solver failure")]
    EvaluationAtNode(f64),
    #[error("Richardson extrapolation diverged: {0}")]
    ExtrapolationDiverged(String),
    #[error("point at r = {0} is too close to a node; skipped")]
    NodeProximity(f64),
    #[error("energy grid straddles a pole of {0} after maximum refinement")]
    PoleStraddle(String),
    #[error("irregular companion construction failed: {0}")]
    CompanionUnavailable(String),
    #[error("coincident particles in configuration: {0}")]
    CoincidentParticles(String),
    #[error("numerical differentiation failed: {0}")]
    DifferentiationFailure(String),
    #[error("residual fit degenerate: {0}")]
    FitDegenerate(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}
