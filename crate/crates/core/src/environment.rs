//! Ohmic bath: spectral kernels, coupling conversion, and the
//! master-equation diffusion coefficient.
//!
//! All kernels are reported **per unit γ²**; the coupling is reinserted by
//! the `decoherence` module through the factor `Γ`. The ohmic spectral
//! weight is regularized with a hard frequency cutoff `Λ`, so at `T = 0`
//!
//! ```text
//! N(s)  = ∫_0^Λ dν ν cos(νs) = (Λs sin Λs + cos Λs − 1)/s²
//! D(s)  = Θ(s) ∫_0^Λ dν ν sin(νs) = Θ(s) (sin Λs − Λs cos Λs)/s²
//! d(t)  = ∫_0^t ds cos(ωs) N(s)
//! ```
//!
//! `d(t)` is evaluated by swapping the `s` and `ν` integrals, which turns a
//! doubly-oscillatory nested quadrature into a single resonance integral;
//! the nested form survives in the tests as an independent oracle. The
//! running integral `∫_0^T d(t) dt` has an exact `Si`/`Ci` closed form at
//! `T = 0`, plus a thermal part that is exponentially localized below
//! `ν ≈ 46/β` and is integrated with a resonance window and Filon tails.

use crate::error::Error;
use crate::geometry::{PhysParams, RingProfile};
use crate::quad;
use crate::special::{cosine_integral, coth, one_minus_cos_over_x2, sinc, sine_integral};
use crate::Result;

/// Ohmic environment parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OhmicBath {
    /// Dimensionless stochastic-force fraction ζ.
    pub zeta: f64,
    /// Coupling γ (enters all observables as γ²).
    pub gamma: f64,
    /// Temperature in energy units with `k_B = 1`; `0` selects the vacuum.
    pub temperature: f64,
    /// Inverse temperature `β = ħ/T`; `f64::INFINITY` at `T = 0`.
    pub beta_th: f64,
    /// Hard UV cutoff Λ.
    pub cutoff: f64,
}

impl OhmicBath {
    /// Builds a bath from explicit `γ`, temperature and cutoff.
    pub fn new(zeta: f64, gamma: f64, temperature: f64, hbar: f64, cutoff: f64) -> Result<Self> {
        if zeta < 0.0 {
            return Err(Error::InvalidParameter("zeta must be >= 0".into()));
        }
        if temperature < 0.0 {
            return Err(Error::InvalidParameter("temperature must be >= 0".into()));
        }
        if !(cutoff > 0.0) {
            return Err(Error::InvalidParameter("cutoff must be > 0".into()));
        }
        let beta_th = if temperature == 0.0 { f64::INFINITY } else { hbar / temperature };
        Ok(Self { zeta, gamma, temperature, beta_th, cutoff })
    }

    /// Builds a bath from ζ via `γ = ζ √(2ρ/ħ) (v_max − v_min)`.
    pub fn from_zeta(
        zeta: f64,
        temperature: f64,
        cutoff: f64,
        params: &PhysParams,
        profile: &RingProfile,
    ) -> Result<Self> {
        let gamma = coupling_from_zeta(zeta, params, profile);
        Self::new(zeta, gamma, temperature, params.hbar, cutoff)
    }

    /// True when the bath is at zero temperature.
    pub fn is_cold(&self) -> bool {
        self.beta_th.is_infinite()
    }

    /// `coth(β ν / 2)`, evaluating to 1 at `T = 0`.
    pub(crate) fn coth_factor(&self, nu: f64) -> f64 {
        if self.is_cold() {
            1.0
        } else {
            coth(0.5 * self.beta_th * nu)
        }
    }

    /// Thermal part of the spectral weight, `2ν/(e^{βν} − 1)`; zero at `T = 0`.
    pub(crate) fn thermal_weight(&self, nu: f64) -> f64 {
        if self.is_cold() {
            return 0.0;
        }
        let x = self.beta_th * nu;
        if x > 700.0 {
            0.0
        } else if x < 1e-8 {
            2.0 / self.beta_th
        } else {
            2.0 * nu / x.exp_m1()
        }
    }

    /// Frequency above which the thermal weight is below `~1e-20`.
    pub(crate) fn thermal_support(&self) -> f64 {
        if self.is_cold() {
            0.0
        } else {
            (46.0 / self.beta_th).min(self.cutoff)
        }
    }
}

/// `γ = ζ √(2ρ/ħ) (v_max − v_min)`.
pub fn coupling_from_zeta(zeta: f64, params: &PhysParams, profile: &RingProfile) -> f64 {
    zeta * (2.0 * params.rho / params.hbar).sqrt() * (profile.v_max - profile.v_min)
}

/// Noise kernel `N(t, t') = ∫_0^Λ dν ν coth(βν/2) cos(ν(t−t'))`, per unit γ².
pub fn noise_kernel(t: f64, tprime: f64, bath: &OhmicBath) -> Result<f64> {
    let s = t - tprime;
    let f = |nu: f64| nu * bath.coth_factor(nu) * (nu * s).cos();
    quad::oscillatory_zeros(&f, 0.0, bath.cutoff, s.abs(), 1e-6, 1 << 21)
}

/// Dissipation kernel `D(t, t') = Θ(t−t') ∫_0^Λ dν ν sin(ν(t−t'))`, per unit
/// γ². Exactly zero for `t < t'` (causality).
pub fn dissipation_kernel(t: f64, tprime: f64, bath: &OhmicBath) -> Result<f64> {
    let s = t - tprime;
    if s <= 0.0 {
        return Ok(0.0);
    }
    let f = |nu: f64| nu * (nu * s).sin();
    quad::oscillatory_zeros(&f, 0.0, bath.cutoff, s, 1e-6, 1 << 21)
}

/// Closed form of the dissipation kernel, `(sin Λs − Λs cos Λs)/s²` for
/// `s > 0`, used for lattice convolutions.
pub fn dissipation_kernel_closed(s: f64, cutoff: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    let x = cutoff * s;
    if x < 1e-3 {
        cutoff * cutoff * cutoff * s * (1.0 / 3.0 - x * x / 30.0)
    } else {
        (x.sin() - x * x.cos()) / (s * s)
    }
}

/// Diffusion coefficient `d(t) = ∫_0^t ds cos(ωs) N(t, t−s)`, per unit γ².
///
/// Evaluated as the single resonance integral
/// `∫_0^Λ dν ν coth(βν/2) · ½ t [ sinc((ν+ω)t) + sinc((ν−ω)t) ]`.
pub fn diffusion_coefficient(t: f64, omega: f64, bath: &OhmicBath) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::InvalidParameter("omega must be > 0".into()));
    }
    if t < 0.0 {
        return Err(Error::InvalidParameter("t must be >= 0".into()));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let f = |nu: f64| {
        let window = 0.5 * t * (sinc((nu + omega) * t) + sinc((nu - omega) * t));
        nu * bath.coth_factor(nu) * window
    };
    quad::oscillatory_zeros(&f, 0.0, bath.cutoff, t, 1e-9, 1 << 21)
}

/// Exact `T = 0` running integral `∫_0^T d(t) dt` for the hard-cutoff ohmic
/// bath, in terms of `Si` and `Ci`.
fn diffusion_integral_t0_closed(t_upper: f64, omega: f64, cutoff: f64) -> f64 {
    if t_upper == 0.0 {
        return 0.0;
    }
    let (w, l) = (omega, cutoff);
    let t = t_upper;
    let term = ((l * l - w * w) / (w * w)).ln()
        + 2.0 * cosine_integral(w * t)
        - cosine_integral((l - w) * t)
        - cosine_integral((l + w) * t)
        + 2.0 * w * t * sine_integral(w * t)
        + w * t * (sine_integral((l - w) * t) - sine_integral((l + w) * t))
        - 2.0 * (1.0 - (w * t).cos())
        + w * ((l + w) * t * t * one_minus_cos_over_x2((l + w) * t)
            - (l - w) * t * t * one_minus_cos_over_x2((l - w) * t));
    0.5 * term
}

/// Thermal part of the running integral: `∫ dν (2ν/(e^{βν}−1)) h(ν)` with
/// `h(ν) = ½[(1−cos((ν+ω)T))/(ν+ω)² + (1−cos((ν−ω)T))/(ν−ω)²]`.
fn thermal_diffusion_integral(t_upper: f64, omega: f64, bath: &OhmicBath) -> Result<f64> {
    let t = t_upper;
    let nu_hi = bath.thermal_support();
    if nu_hi == 0.0 {
        return Ok(0.0);
    }
    let h_plus_smooth = |nu: f64| 0.5 / ((nu + omega) * (nu + omega));
    let h_minus_smooth = |nu: f64| 0.5 / ((nu - omega) * (nu - omega));
    let fth = |nu: f64| bath.thermal_weight(nu);
    // full integrand, used inside the resonance window where the smooth and
    // oscillatory parts are separately singular but their sum is stable
    let h_full = |nu: f64| {
        0.5 * t
            * t
            * (one_minus_cos_over_x2((nu + omega) * t) + one_minus_cos_over_x2((nu - omega) * t))
    };

    let mut total = 0.0;
    let (win_lo, win_hi) = if omega < nu_hi {
        let w = (30.0 * std::f64::consts::PI / t)
            .min(0.5 * omega)
            .min(0.5 * (nu_hi - omega));
        let lo = omega - w;
        let hi = omega + w;
        let f = |nu: f64| fth(nu) * h_full(nu);
        total += quad::oscillatory_zeros(&f, lo, hi, t, 1e-9, 1 << 18)?;
        (lo, hi)
    } else {
        (nu_hi, nu_hi)
    };

    for (lo, hi) in [(0.0, win_lo), (win_hi, nu_hi)] {
        if hi <= lo {
            continue;
        }
        let smooth = |nu: f64| fth(nu) * (h_plus_smooth(nu) + h_minus_smooth(nu));
        total += quad::adaptive_gk(&smooth, lo, hi, 1e-10, 1e-300, 20_000)?;
        // oscillatory parts: −½ f_th cos((ν±ω)T)/(ν±ω)², Filon with meshes
        // clustered toward both segment ends
        let mid = 0.5 * (lo + hi);
        for (seg_lo, seg_hi, cluster_lo) in [(lo, mid, false), (mid, hi, true)] {
            let phi_p = |nu: f64| -fth(nu) * h_plus_smooth(nu);
            let phi_m = |nu: f64| -fth(nu) * h_minus_smooth(nu);
            total += quad::filon_adaptive(&phi_p, seg_lo, seg_hi, t, omega * t, cluster_lo, 1e-9)?;
            total += quad::filon_adaptive(&phi_m, seg_lo, seg_hi, t, -omega * t, cluster_lo, 1e-9)?;
        }
    }
    Ok(total)
}

/// Running integral `∫_0^{t_upper} d(t) dt`, per unit γ².
///
/// Exact `Si`/`Ci` closed form at `T = 0` plus the thermal resonance
/// integral at `T > 0`; requires `ω < Λ`. For `ω t ≫ 1` it approaches
/// `ω π t coth(βω/2)/2 + 4/(ω²β²)` up to bounded cutoff terms.
pub fn diffusion_integral(t_upper: f64, omega: f64, bath: &OhmicBath) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::InvalidParameter("omega must be > 0".into()));
    }
    if !(bath.cutoff > omega) {
        return Err(Error::InvalidParameter("cutoff must exceed omega".into()));
    }
    if t_upper < 0.0 {
        return Err(Error::InvalidParameter("t_upper must be >= 0".into()));
    }
    if t_upper == 0.0 {
        return Ok(0.0);
    }
    let i0 = diffusion_integral_t0_closed(t_upper, omega, bath.cutoff);
    if bath.is_cold() {
        Ok(i0)
    } else {
        Ok(i0 + thermal_diffusion_integral(t_upper, omega, bath)?)
    }
}

/// Direct quadrature of the same resonance integral that defines
/// `∫_0^T d(t) dt`; an independent route used to cross-check the closed
/// form (cost grows with `Λ·T`, so keep `Λ·T ≲ 10⁶`).
#[doc(hidden)]
pub fn diffusion_integral_quadrature(t_upper: f64, omega: f64, bath: &OhmicBath) -> Result<f64> {
    let t = t_upper;
    if t == 0.0 {
        return Ok(0.0);
    }
    let f = |nu: f64| {
        let h = 0.5
            * t
            * t
            * (one_minus_cos_over_x2((nu + omega) * t) + one_minus_cos_over_x2((nu - omega) * t));
        nu * bath.coth_factor(nu) * h
    };
    quad::oscillatory_zeros(&f, 0.0, bath.cutoff, t, 1e-10, 1 << 22)
}
