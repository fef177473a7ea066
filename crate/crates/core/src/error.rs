use thiserror::Error;

/// Errors produced by the numerical layers of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A parameter failed a domain invariant (message names the field).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The integrand for the requested null-coordinate branch diverges
    /// non-integrably (the profile crosses `c = v` inside the range).
    #[error("horizon singularity: c - v vanishes inside [{lo}, {hi}]")]
    HorizonSingular { lo: f64, hi: f64 },

    /// Adaptive quadrature could not reach the requested tolerance.
    #[error("quadrature did not converge: estimated relative error {rel_err:.3e} after {panels} panels")]
    QuadratureNonConvergent { rel_err: f64, panels: usize },

    /// Decoherence time is infinite because the coupling vanishes.
    #[error("zero coupling: gamma = 0 gives an infinite decoherence time")]
    ZeroCoupling,

    /// The small-temperature expansion is not trusted at these parameters.
    #[error("out of regime: {0}")]
    OutOfRegime(String),

    /// The decoherence condition has no root below the search cap.
    /// Carries a lower bound on `t_D`.
    #[error("no root: Gamma * integral d(t) < 1 up to t = {t_max:.3e} (t_D > {t_max:.3e})")]
    NoRoot { t_max: f64 },

    /// Adaptive ODE stepping underflowed the minimum step size.
    #[error("step failure: step size underflow at t = {t:.6e}")]
    StepFailure { t: f64 },

    /// A mode sum failed its doubling convergence check.
    #[error("mode sum did not converge: doubling the grid changed the result by {rel_change:.3e}")]
    NonConvergentSum { rel_change: f64 },

    /// `C_c(k)` is below the absolute floor, so `e_r` is undefined.
    #[error("degenerate mode: |C_c(k)| = {magnitude:.3e} below floor")]
    DegenerateMode { magnitude: f64 },

    /// Noise covariance matrix has negative eigenvalues beyond the clip
    /// threshold (cutoff too low or grid too coarse).
    #[error("covariance not PSD: min eigenvalue {min_eig:.3e} vs clip threshold {threshold:.3e}")]
    CovarianceNotPsd { min_eig: f64, threshold: f64 },
}
