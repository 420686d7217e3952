//! Thresholds shared by the checks, the classifier and the acceptance suite.
//!
//! Every discrete decision (rank, "is a zero", "phi vanishes", "gradient lies
//! in the image") reads its threshold from here so that library code and
//! tests cannot drift apart.

/// Relative singular-value cutoff used by every rank and kernel decision.
pub const RANK_TOL: f64 = 1e-10;

/// Points with `|v(z)| <= ZERO_TOL * (1 + |z|) * param_scale` count as zeros.
pub const ZERO_TOL: f64 = 1e-8;

/// `phi(z)` is treated as nonzero above `PHI_ZERO_TOL * param_scale`.
pub const PHI_ZERO_TOL: f64 = 1e-8;

/// Relative least-squares residual below which the gradient of phi is taken
/// to lie in the image of the field's gradient.
pub const IMAGE_RESIDUAL_TOL: f64 = 1e-6;

/// Contract for the closed-form identities (conformality, second derivative,
/// gauge identity), relative to the scale of the inputs.
pub const IDENTITY_TOL: f64 = 1e-12;

/// Contract for the Hessian identity at a zero.
pub const HESSIAN_TOL: f64 = 1e-10;

/// Residual contract for sampled null-cone points, relative to `radius^2`.
pub const CONE_SAMPLE_TOL: f64 = 1e-12;

/// Relative agreement between integrated and directly evaluated states.
pub const PROPAGATION_TOL: f64 = 1e-8;

/// Largest admissible integrator step.
pub const MAX_STEP: f64 = 1e-3;

/// Tolerances for the geodesic identity checks.
pub const LEMMA_ZEROS_TOL: f64 = 1e-10;
pub const PROPORTIONALITY_TOL: f64 = 1e-9;
pub const CHAR_POLY_DRIFT_TOL: f64 = 1e-8;

/// Interior zeros of phi are located to this accuracy in the curve parameter.
pub const BISECTION_TOL: f64 = 1e-10;

/// Model comparison tolerance (relative to the sampling radius).
pub const MODEL_TOL: f64 = 1e-6;

/// Deduplication radius for zero samples, relative to the sampling radius.
pub const DEDUPE_FACTOR: f64 = 1e-6;

/// Variance-ratio threshold above which a local fit is considered not flat.
pub const SINGULAR_VARIANCE_RATIO: f64 = 0.5;

/// Umbilicity residual contract at `h = 1e-3`.
pub const UMBILICITY_TOL: f64 = 1e-4;

/// Angular increment below which a connecting-limit estimate has converged.
pub const LIMIT_ANGLE_TOL: f64 = 1e-4;
