//! Ring velocity profiles, the acoustic metric's null coordinates, mode
//! quantization on the compact ring, and the geometric overlap factor `V`.
//!
//! Conventions: the sound speed is `c = 1` by default and the ring
//! coordinate is arc length `x = R θ` with `R = 1`, so the circumference is
//! `L = 2π`. Velocities are measured in units of `c`.

use crate::error::Error;
use crate::quad;
use crate::Result;

use std::f64::consts::TAU;

/// Physical parameters of the ion ring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    /// Sound speed.
    pub c: f64,
    /// Ring circumference `L`.
    pub length: f64,
    /// Number of ions `N`.
    pub n_ions: u32,
    /// Mass density `ρ`.
    pub rho: f64,
    /// Reduced Planck constant.
    pub hbar: f64,
    /// Revolution period `τ`.
    pub tau: f64,
}

impl PhysParams {
    pub fn new(c: f64, length: f64, n_ions: u32, rho: f64, hbar: f64, tau: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::InvalidParameter("c must be > 0".into()));
        }
        if !(length > 0.0) {
            return Err(Error::InvalidParameter("length must be > 0".into()));
        }
        if n_ions < 2 {
            return Err(Error::InvalidParameter("n_ions must be >= 2".into()));
        }
        if !(rho > 0.0) {
            return Err(Error::InvalidParameter("rho must be > 0".into()));
        }
        if !(hbar > 0.0) {
            return Err(Error::InvalidParameter("hbar must be > 0".into()));
        }
        if !(tau > 0.0) {
            return Err(Error::InvalidParameter("tau must be > 0".into()));
        }
        Ok(Self { c, length, n_ions, rho, hbar, tau })
    }

    /// Ion spacing `δ = L / N`, always recomputed.
    pub fn delta(&self) -> f64 {
        self.length / self.n_ions as f64
    }
}

impl Default for PhysParams {
    fn default() -> Self {
        Self { c: 1.0, length: TAU, n_ions: 1000, rho: 1.0, hbar: 1.0, tau: 1.0 }
    }
}

/// Propagation branch of a mode: `u` rides `c + v`, `v` rides `c - v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    U,
    V,
}

/// A quantized ring mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSpec {
    pub branch: Branch,
    /// Mode index, `n >= 1`.
    pub n: u32,
    /// Angular frequency `ω_n`.
    pub omega: f64,
}

/// Five-piece ring velocity profile.
///
/// Two flat stretches at `v_min`/`v_max` joined by linear ramps of angular
/// half-width `γ₁` (black-hole side, centered at `θ_H`) and `γ₂`
/// (white-hole side, centered at `2π - θ_H`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingProfile {
    pub v_min: f64,
    pub v_max: f64,
    pub theta_h: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

impl RingProfile {
    pub fn new(v_min: f64, v_max: f64, theta_h: f64, gamma1: f64, gamma2: f64) -> Result<Self> {
        if !(gamma1 > 0.0) || !(gamma2 > 0.0) {
            return Err(Error::InvalidParameter("gamma1, gamma2 must be > 0".into()));
        }
        if v_max < v_min {
            return Err(Error::InvalidParameter("v_max must be >= v_min".into()));
        }
        // the five pieces must tile [0, 2π] without overlap
        if theta_h - gamma1 < 0.0 {
            return Err(Error::InvalidParameter("theta_h - gamma1 must be >= 0".into()));
        }
        if theta_h + gamma1 > TAU - theta_h - gamma2 {
            return Err(Error::InvalidParameter(
                "ramp pieces overlap: theta_h + gamma1 > 2pi - theta_h - gamma2".into(),
            ));
        }
        if gamma2 > theta_h {
            return Err(Error::InvalidParameter("gamma2 must be <= theta_h".into()));
        }
        Ok(Self { v_min, v_max, theta_h, gamma1, gamma2 })
    }

    /// Defaults used throughout: `v_min = 0.9`, `v_max = 1.1`, `θ_H = π/2`,
    /// `γ₁ = γ₂ = 0.05·2π`.
    pub fn defaults() -> Self {
        Self::new(0.9, 1.1, std::f64::consts::FRAC_PI_2, 0.05 * TAU, 0.05 * TAU).unwrap()
    }

    /// Solves `v_max` from the revolution constraint `mean(v) = 2π/τ` at
    /// fixed `v_min` (everything else as in `self`).
    pub fn with_revolution_constraint(self, params: &PhysParams) -> Result<Self> {
        let a_len = (self.theta_h - self.gamma1) + (self.theta_h - self.gamma2);
        let b_len = TAU - 2.0 * self.theta_h - self.gamma1 - self.gamma2;
        let c_len = 2.0 * (self.gamma1 + self.gamma2);
        // mean(v)·2π = v_min·(a_len + c_len/2) + v_max·(b_len + c_len/2)
        let rhs = (TAU / params.tau) * TAU - self.v_min * (a_len + 0.5 * c_len);
        let v_max = rhs / (b_len + 0.5 * c_len);
        if v_max < self.v_min {
            return Err(Error::InvalidParameter(
                "revolution constraint gives v_max < v_min".into(),
            ));
        }
        Self::new(self.v_min, v_max, self.theta_h, self.gamma1, self.gamma2)
    }

    /// `β = (v_max + v_min)/2`.
    pub fn beta_p(&self) -> f64 {
        0.5 * (self.v_max + self.v_min)
    }

    /// `α = (v_max - v_min)/2`.
    pub fn alpha_p(&self) -> f64 {
        0.5 * (self.v_max - self.v_min)
    }

    /// Piecewise flow velocity at angle `θ` (any real value; reduced mod 2π).
    pub fn velocity(&self, theta: f64) -> f64 {
        let th = theta.rem_euclid(TAU);
        let (b, a) = (self.beta_p(), self.alpha_p());
        if th <= self.theta_h - self.gamma1 {
            self.v_min
        } else if th <= self.theta_h + self.gamma1 {
            b + a * (th - self.theta_h) / self.gamma1
        } else if th <= TAU - self.theta_h - self.gamma2 {
            self.v_max
        } else if th <= TAU - self.theta_h + self.gamma2 {
            b - a * (th - (TAU - self.theta_h)) / self.gamma2
        } else {
            self.v_min
        }
    }

    /// Exact spatial mean of `v` over the ring.
    pub fn mean_velocity(&self) -> f64 {
        let a_len = (self.theta_h - self.gamma1) + (self.theta_h - self.gamma2);
        let b_len = TAU - 2.0 * self.theta_h - self.gamma1 - self.gamma2;
        let c_len = 2.0 * (self.gamma1 + self.gamma2);
        (self.v_min * a_len + self.v_max * b_len + self.beta_p() * c_len) / TAU
    }

    /// `mean(v) - 2π/τ`: zero when the revolution constraint holds.
    pub fn revolution_residual(&self, params: &PhysParams) -> f64 {
        self.mean_velocity() - TAU / params.tau
    }

    /// Piece boundaries in `[0, 2π]`.
    fn breakpoints(&self) -> [f64; 6] {
        [
            0.0,
            self.theta_h - self.gamma1,
            self.theta_h + self.gamma1,
            TAU - self.theta_h - self.gamma2,
            TAU - self.theta_h + self.gamma2,
            TAU,
        ]
    }

    /// Velocity as an affine function `v(θ) = p + q θ` on piece `i`.
    fn piece_coeffs(&self, i: usize) -> (f64, f64) {
        let (b, a) = (self.beta_p(), self.alpha_p());
        match i {
            0 | 4 => (self.v_min, 0.0),
            1 => (b - a * self.theta_h / self.gamma1, a / self.gamma1),
            2 => (self.v_max, 0.0),
            3 => (b + a * (TAU - self.theta_h) / self.gamma2, -a / self.gamma2),
            _ => unreachable!(),
        }
    }
}

/// `∫ dθ / (c ± v)` over `[lo, hi]` inside one affine piece `v = p + qθ`.
/// `sign = +1` for branch u, `-1` for branch v.
fn piece_null_integral(c: f64, p: f64, q: f64, sign: f64, lo: f64, hi: f64) -> Result<f64> {
    let d_lo = c + sign * (p + q * lo);
    let d_hi = c + sign * (p + q * hi);
    if d_lo * d_hi <= 0.0 {
        return Err(Error::HorizonSingular { lo, hi });
    }
    let slope = sign * q;
    if slope.abs() < 1e-300 {
        Ok((hi - lo) / d_lo)
    } else {
        Ok((d_hi / d_lo).ln() / slope)
    }
}

/// Null coordinate `x_u(x) = ∫_0^x dx'/(c+v)` or `x_v(x) = ∫_0^x dx'/(c-v)`.
///
/// Exact closed form on the constant and linear pieces, additive across
/// pieces and across full revolutions. Fails with [`Error::HorizonSingular`]
/// when the branch-v integrand crosses zero inside the range.
pub fn null_coordinate(
    profile: &RingProfile,
    params: &PhysParams,
    x: f64,
    branch: Branch,
) -> Result<f64> {
    let sign = match branch {
        Branch::U => 1.0,
        Branch::V => -1.0,
    };
    let c = params.c;
    let revs = (x / TAU).floor();
    let frac = x - revs * TAU;
    let bp = profile.breakpoints();
    let mut total = 0.0;
    let mut period = 0.0;
    for i in 0..5 {
        let (p, q) = profile.piece_coeffs(i);
        let lo = bp[i];
        let hi = bp[i + 1];
        if hi > lo {
            period += piece_null_integral(c, p, q, sign, lo, hi)?;
            let seg_hi = frac.min(hi);
            if seg_hi > lo {
                total += piece_null_integral(c, p, q, sign, lo, seg_hi)?;
            }
        }
    }
    Ok(revs * period + total)
}

/// All quantized frequencies of a branch: `ω_n = 2πn / P` with
/// `P = x_branch(L)`, truncated at `ω_max = 2π c_eff / δ` where
/// `c_eff = L / P`, so exactly `N` modes survive the `λ ≥ δ` cutoff.
pub fn allowed_frequencies(
    profile: &RingProfile,
    params: &PhysParams,
    branch: Branch,
) -> Result<Vec<ModeSpec>> {
    let period = null_coordinate(profile, params, params.length, branch)?;
    if !(period > 0.0) {
        return Err(Error::HorizonSingular { lo: 0.0, hi: params.length });
    }
    let omega1 = TAU / period;
    let c_eff = params.length / period;
    let omega_max = TAU * c_eff / params.delta();
    let n_max = (omega_max / omega1 + 1e-9).floor() as u32;
    Ok((1..=n_max)
        .map(|n| ModeSpec { branch, n, omega: n as f64 * omega1 })
        .collect())
}

/// Geometric factor `V = ∫_0^L cos²(ω x_branch(x)) dx`, computed by
/// oscillation-aware quadrature with relative tolerance `1e-8` on each
/// profile piece. Lies in `(0, L]` for quantized modes.
pub fn geometric_factor_v(
    mode: &ModeSpec,
    profile: &RingProfile,
    params: &PhysParams,
) -> Result<f64> {
    let sign = match mode.branch {
        Branch::U => 1.0,
        Branch::V => -1.0,
    };
    let omega = mode.omega;
    let bp = profile.breakpoints();
    let mut cum = [0.0f64; 6];
    for i in 0..5 {
        let (p, q) = profile.piece_coeffs(i);
        cum[i + 1] = cum[i]
            + if bp[i + 1] > bp[i] {
                piece_null_integral(params.c, p, q, sign, bp[i], bp[i + 1])?
            } else {
                0.0
            };
    }
    let xb = |x: f64| -> f64 {
        let mut i = 0;
        while i < 4 && x > bp[i + 1] {
            i += 1;
        }
        let (p, q) = profile.piece_coeffs(i);
        cum[i] + piece_null_integral(params.c, p, q, sign, bp[i].min(x), x).unwrap_or(f64::NAN)
    };
    let f = |x: f64| {
        let u = (omega * xb(x)).cos();
        u * u
    };
    let mut total = 0.0;
    for i in 0..5 {
        if bp[i + 1] > bp[i] {
            // local phase rate of cos²(ω x_b): 2ω·dx_b/dθ, bounded by the piece mean
            let rate = 2.0 * omega * (cum[i + 1] - cum[i]).abs() / (bp[i + 1] - bp[i]);
            total += quad::oscillatory_zeros(&f, bp[i], bp[i + 1], rate, 1e-8, 1 << 18)?;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn defaults() -> (RingProfile, PhysParams) {
        (RingProfile::defaults(), PhysParams::default())
    }

    #[test]
    fn velocity_examples_from_profile_display() {
        let (p, _) = defaults();
        // θ = θ_H → β (center of the ramp)
        assert_relative_eq!(p.velocity(p.theta_h), p.beta_p(), max_relative = 1e-14);
        // θ = 0 → v_min
        assert_relative_eq!(p.velocity(0.0), p.v_min);
        // inside the v_max plateau
        assert_relative_eq!(p.velocity(p.theta_h + p.gamma1 + 0.1), p.v_max);
    }

    #[test]
    fn velocity_is_continuous_at_all_junctions() {
        let (p, _) = defaults();
        for th in [
            p.theta_h - p.gamma1,
            p.theta_h + p.gamma1,
            TAU - p.theta_h - p.gamma2,
            TAU - p.theta_h + p.gamma2,
        ] {
            let below = p.velocity(th - 1e-13);
            let above = p.velocity(th + 1e-13);
            assert!((below - above).abs() < 1e-12, "jump at θ = {th}: {below} vs {above}");
        }
    }

    #[test]
    fn null_coordinate_constant_profiles() {
        let params = PhysParams::default();
        // v = 0 (flat): x_u(x) = x
        let p = RingProfile::new(0.0, 0.0, std::f64::consts::FRAC_PI_2, 0.3, 0.3).unwrap();
        assert_relative_eq!(
            null_coordinate(&p, &params, 2.0, Branch::U).unwrap(),
            2.0,
            max_relative = 1e-13
        );
        // v = 0.9 constant: x_u = x/1.9
        let p = RingProfile::new(0.9, 0.9, std::f64::consts::FRAC_PI_2, 0.3, 0.3).unwrap();
        assert_relative_eq!(
            null_coordinate(&p, &params, 2.0, Branch::U).unwrap(),
            2.0 / 1.9,
            max_relative = 1e-13
        );
    }

    #[test]
    fn null_coordinate_matches_quadrature_oracle() {
        // independent adaptive quadrature of 1/(c+v) over the full ring
        let (p, params) = defaults();
        let f = |th: f64| 1.0 / (params.c + p.velocity(th));
        let oracle = quad::adaptive_gk(&f, 0.0, TAU, 1e-12, 0.0, 4000).unwrap();
        let val = null_coordinate(&p, &params, params.length, Branch::U).unwrap();
        assert_relative_eq!(val, oracle, max_relative = 1e-10);
    }

    #[test]
    fn null_coordinate_branch_v_horizon_is_detected() {
        let (p, params) = defaults();
        // the default ring crosses c = v on the ramps
        let err = null_coordinate(&p, &params, params.length, Branch::V).unwrap_err();
        assert!(matches!(err, Error::HorizonSingular { .. }));
    }

    #[test]
    fn null_coordinate_branch_v_subsonic_profile_is_fine() {
        let params = PhysParams::default();
        let p = RingProfile::new(0.3, 0.6, std::f64::consts::FRAC_PI_2, 0.3, 0.3).unwrap();
        let f = |th: f64| 1.0 / (params.c - p.velocity(th));
        let oracle = quad::adaptive_gk(&f, 0.0, TAU, 1e-12, 0.0, 4000).unwrap();
        let val = null_coordinate(&p, &params, params.length, Branch::V).unwrap();
        assert_relative_eq!(val, oracle, max_relative = 1e-10);
    }

    #[test]
    fn frequencies_constant_profile_closed_form() {
        let params = PhysParams::default();
        let v = 0.5;
        let p = RingProfile::new(v, v, std::f64::consts::FRAC_PI_2, 0.3, 0.3).unwrap();
        let modes = allowed_frequencies(&p, &params, Branch::U).unwrap();
        // ω_n = 2π n (1+v)/L
        assert_relative_eq!(modes[0].omega, TAU * (1.0 + v) / params.length, max_relative = 1e-12);
        assert_relative_eq!(modes[4].omega, 5.0 * modes[0].omega, max_relative = 1e-12);
        // wavelength-δ cutoff gives exactly N modes
        assert_eq!(modes.len(), params.n_ions as usize);
    }

    #[test]
    fn frequencies_ring_defaults_match_quadrature_period() {
        let (p, params) = defaults();
        let modes = allowed_frequencies(&p, &params, Branch::U).unwrap();
        let f = |th: f64| 1.0 / (params.c + p.velocity(th));
        let period = quad::adaptive_gk(&f, 0.0, TAU, 1e-12, 0.0, 4000).unwrap();
        assert_eq!(modes.len(), 1000);
        for (i, m) in modes.iter().enumerate().step_by(73) {
            assert_eq!(m.n as usize, i + 1);
            assert_relative_eq!(m.omega, TAU * (i as f64 + 1.0) / period, max_relative = 1e-9);
        }
        for w in modes.windows(2) {
            assert!(w[1].omega > w[0].omega);
        }
    }

    #[test]
    fn mode_periodicity_invariant() {
        let (p, params) = defaults();
        let period = null_coordinate(&p, &params, params.length, Branch::U).unwrap();
        for m in allowed_frequencies(&p, &params, Branch::U).unwrap().iter().step_by(97) {
            // ω·P ≡ 0 mod 2π
            assert!(((m.omega * period).cos() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn geometric_factor_limits() {
        let (p, params) = defaults();
        // ω → 0: V → L
        let tiny = ModeSpec { branch: Branch::U, n: 1, omega: 1e-9 };
        assert_relative_eq!(
            geometric_factor_v(&tiny, &p, &params).unwrap(),
            params.length,
            max_relative = 1e-8
        );
        // constant profile with quantized ω: V = L/2 exactly (mean of cos²)
        let pc = RingProfile::new(0.4, 0.4, std::f64::consts::FRAC_PI_2, 0.3, 0.3).unwrap();
        let modes = allowed_frequencies(&pc, &params, Branch::U).unwrap();
        let v = geometric_factor_v(&modes[2], &pc, &params).unwrap();
        assert_relative_eq!(v, params.length / 2.0, max_relative = 1e-8);
    }

    #[test]
    fn geometric_factor_matches_riemann_oracle() {
        // brute-force Riemann sum with 10^6 panels on the default ring, n = 1
        let (p, params) = defaults();
        let modes = allowed_frequencies(&p, &params, Branch::U).unwrap();
        let mode = &modes[0];
        let n = 1_000_000usize;
        let h = params.length / n as f64;
        let mut sum = crate::quad::Kahan::default();
        for i in 0..n {
            let x = (i as f64 + 0.5) * h;
            let xu = null_coordinate(&p, &params, x, Branch::U).unwrap();
            sum.add((mode.omega * xu).cos().powi(2) * h);
        }
        let v = geometric_factor_v(mode, &p, &params).unwrap();
        assert_relative_eq!(v, sum.value(), max_relative = 1e-6);
    }

    #[test]
    fn geometric_factor_sanity_band_default_profile() {
        let (p, params) = defaults();
        let modes = allowed_frequencies(&p, &params, Branch::U).unwrap();
        for m in modes.iter().step_by(199) {
            let v = geometric_factor_v(m, &p, &params).unwrap();
            assert!(v > 0.25 * params.length && v <= params.length, "V = {v} for n = {}", m.n);
        }
    }

    #[test]
    fn revolution_constraint_solves_v_max() {
        // the symmetric default profile satisfies the constraint at τ = 2π
        let params = PhysParams { tau: TAU, ..PhysParams::default() };
        let p = RingProfile::defaults().with_revolution_constraint(&params).unwrap();
        assert_relative_eq!(p.v_max, 1.1, max_relative = 1e-12);
        assert!(p.revolution_residual(&params).abs() < 1e-12);
        // a different τ moves v_max and zeroes the residual
        let params5 = PhysParams { tau: 5.0, ..PhysParams::default() };
        assert!(RingProfile::defaults().revolution_residual(&params5).abs() > 1e-3);
        let p5 = RingProfile::defaults().with_revolution_constraint(&params5).unwrap();
        assert!(p5.revolution_residual(&params5).abs() < 1e-12);
        assert!(p5.v_max > 1.1);
    }

    proptest! {
        #[test]
        fn null_coordinate_additivity(x1 in 0.0f64..6.28, x2 in 0.0f64..6.28) {
            let (p, params) = defaults();
            let lo = x1.min(x2);
            let hi = x1.max(x2);
            let full = null_coordinate(&p, &params, hi, Branch::U).unwrap();
            let part = null_coordinate(&p, &params, lo, Branch::U).unwrap();
            let f = |th: f64| 1.0 / (params.c + p.velocity(th));
            let direct = quad::adaptive_gk(&f, lo, hi, 1e-11, 1e-14, 4000).unwrap();
            prop_assert!(((full - part) - direct).abs() <= 1e-9 * direct.abs().max(1e-12));
        }

        #[test]
        fn null_coordinate_strictly_increasing_u(x in 0.0f64..6.28) {
            let (p, params) = defaults();
            let v1 = null_coordinate(&p, &params, x, Branch::U).unwrap();
            let v2 = null_coordinate(&p, &params, x + 1e-3, Branch::U).unwrap();
            prop_assert!(v2 > v1);
        }
    }
}
