//! Decoherence and Hawking-pair correlations in 1+1D acoustic black holes.
//!
//! The library models a phonon field on a flowing background (an acoustic
//! black hole) bilinearly coupled to an ohmic bath of oscillators, in the
//! quantum-Brownian-motion sense. It provides:
//!
//! * [`geometry`] — ring velocity profiles, null coordinates, mode
//!   quantization and the geometric overlap factor `V`;
//! * [`environment`] — noise/dissipation kernels, the master-equation
//!   diffusion coefficient `d(t)` and its running integral;
//! * [`decoherence`] — the decoherence time `t_D` from the condition
//!   `Γ ∫ d(t) dt ≈ 1`, in closed form and by root finding, plus parameter
//!   sweeps;
//! * [`collapse`] — the collapsing-hole profile `v(x,t) = σ(t)·shape(x)`,
//!   left-moving characteristics and mode functions;
//! * [`correlations`] — the equal-time `⟨Π⁻(x₁,t) Π⁻(x,t)⟩` map, the
//!   open-system correction and the relative environment contribution `e_r`;
//! * [`stochastic`] — Monte Carlo cross-validation with colored Gaussian
//!   noise and the retarded Green function.
//!
//! All quantities are expressed in natural units with the sound speed
//! `c = 1` unless stated otherwise.

pub mod collapse;
pub mod correlations;
pub mod decoherence;
pub mod environment;
pub mod error;
pub mod geometry;
pub mod quad;
pub mod special;
pub mod stochastic;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
