//! Quadrature kernels used across the crate.
//!
//! Three integration strategies cover everything the physics needs:
//!
//! * [`adaptive_gk`] — globally adaptive 15-point Gauss–Kronrod for smooth
//!   integrands;
//! * [`oscillatory_zeros`] — panel subdivision at the integrand's phase
//!   zeros with compensated (Neumaier) accumulation, for integrands that
//!   oscillate many times across the range;
//! * [`filon_cos`] / [`filon_adaptive`] — Filon-type quadrature for
//!   `∫ φ(x) cos(ωx + φ₀) dx` with a smooth envelope `φ`, whose cost is set
//!   by the envelope and not by the oscillation count.

use crate::error::Error;

/// Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

// 15-point Kronrod nodes and weights, 7-point Gauss weights (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_2,
    0.949_107_912_342_758_524_5,
    0.864_864_423_359_769_072_8,
    0.741_531_185_599_394_439_9,
    0.586_087_235_467_691_130_3,
    0.405_845_151_377_397_166_9,
    0.207_784_955_007_898_467_6,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_7,
    0.063_092_092_629_978_553_290_7,
    0.104_790_010_322_250_183_839_9,
    0.140_653_259_715_525_918_745_2,
    0.169_004_726_639_267_902_826_6,
    0.190_350_578_064_785_409_913_3,
    0.204_432_940_075_298_892_414_2,
    0.209_482_141_084_727_828_012_9,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_6,
    0.279_705_391_489_276_667_901_5,
    0.381_830_050_505_118_944_950_4,
    0.417_959_183_673_469_387_755_1,
];

/// One 15-point Gauss–Kronrod panel with the QUADPACK error rescale.
/// Returns `(kronrod, error_estimate, roundoff_limited)`.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, bool) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let abs_half = half.abs();
    let fc = f(center);
    let mut fv = [0.0f64; 15];
    fv[7] = fc;
    let mut resk = WGK[7] * fc;
    let mut resg = WG[3] * fc;
    let mut resabs = WGK[7] * fc.abs();
    for j in 0..3 {
        let jtw = 2 * j + 1;
        let x = half * XGK[jtw];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[7 - jtw] = f1;
        fv[7 + jtw] = f2;
        resg += WG[j] * (f1 + f2);
        resk += WGK[jtw] * (f1 + f2);
        resabs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..4 {
        let jtw = 2 * j;
        let x = half * XGK[jtw];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[7 - jtw] = f1;
        fv[7 + jtw] = f2;
        resk += WGK[jtw] * (f1 + f2);
        resabs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    let reskh = resk * 0.5;
    let mut resasc = 0.0;
    for (j, v) in fv.iter().enumerate() {
        let w = WGK[7 - (j as i64 - 7).unsigned_abs() as usize];
        resasc += w * (v - reskh).abs();
    }
    resabs *= abs_half;
    resasc *= abs_half;
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / resasc).powf(1.5);
        err = if scale < 1.0 { resasc * scale } else { resasc };
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(floor);
    }
    // a panel whose error sits at the roundoff floor cannot be improved
    (resk * half, err, err <= floor * 1.0001)
}

/// Globally adaptive Gauss–Kronrod quadrature on `[a, b]`.
///
/// Splits the interval with the largest error estimate until the summed
/// error satisfies `abs_tol + rel_tol * |integral|` or the panel budget is
/// exhausted.
pub fn adaptive_gk<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_panels: usize,
) -> Result<f64, Error> {
    if a == b {
        return Ok(0.0);
    }
    struct Iv {
        err: f64,
        lo: f64,
        hi: f64,
        val: f64,
        saturated: bool,
    }
    // seed with several panels so an accidental Kronrod/Gauss agreement on
    // a structured integrand cannot stop refinement before it starts
    let seed = 8.min(max_panels.max(1));
    let mut intervals: Vec<Iv> = Vec::with_capacity(seed * 2);
    let mut total = 0.0;
    let mut total_err = 0.0;
    for i in 0..seed {
        let lo = a + (b - a) * i as f64 / seed as f64;
        let hi = if i == seed - 1 { b } else { a + (b - a) * (i + 1) as f64 / seed as f64 };
        let (v, e, sat) = gk15(f, lo, hi);
        total += v;
        total_err += e;
        intervals.push(Iv { err: e, lo, hi, val: v, saturated: sat });
    }
    // outer rounds: adaptive refinement followed by a verification sweep that
    // bisects every remaining wide panel once. A kink sitting near a Kronrod
    // node can fake a near-zero error estimate; the sweep exposes it.
    for _round in 0..4 {
        while total_err > abs_tol + rel_tol * total.abs() {
            let idx = intervals
                .iter()
                .enumerate()
                .filter(|(_, iv)| !iv.saturated)
                .max_by(|x, y| x.1.err.partial_cmp(&y.1.err).unwrap())
                .map(|(i, _)| i);
            let Some(idx) = idx else { break };
            if intervals.len() >= max_panels {
                return Err(Error::QuadratureNonConvergent {
                    rel_err: total_err / total.abs().max(f64::MIN_POSITIVE),
                    panels: intervals.len(),
                });
            }
            let iv = intervals.swap_remove(idx);
            let mid = 0.5 * (iv.lo + iv.hi);
            if mid <= iv.lo || mid >= iv.hi {
                total_err -= iv.err;
                intervals.push(Iv { err: 0.0, saturated: true, ..iv });
                continue;
            }
            let (v1, e1, s1) = gk15(f, iv.lo, mid);
            let (v2, e2, s2) = gk15(f, mid, iv.hi);
            total += v1 + v2 - iv.val;
            total_err += e1 + e2 - iv.err;
            intervals.push(Iv { err: e1, lo: iv.lo, hi: mid, val: v1, saturated: s1 });
            intervals.push(Iv { err: e2, lo: mid, hi: iv.hi, val: v2, saturated: s2 });
        }
        // verification sweep over panels wider than span/2^16
        let min_width = (b - a).abs() / 65536.0;
        let mut refined: Vec<Iv> = Vec::with_capacity(intervals.len() * 2);
        let mut new_total = 0.0;
        let mut new_err = 0.0;
        let mut suspicious = false;
        for iv in intervals.drain(..) {
            let mid = 0.5 * (iv.lo + iv.hi);
            if (iv.hi - iv.lo).abs() <= min_width || mid <= iv.lo || mid >= iv.hi {
                new_total += iv.val;
                new_err += iv.err;
                refined.push(iv);
                continue;
            }
            let (v1, e1, s1) = gk15(f, iv.lo, mid);
            let (v2, e2, s2) = gk15(f, mid, iv.hi);
            if (v1 + v2 - iv.val).abs() > 4.0 * iv.err.max(1e-300) {
                suspicious = true;
            }
            new_total += v1 + v2;
            new_err += e1 + e2;
            refined.push(Iv { err: e1, lo: iv.lo, hi: mid, val: v1, saturated: s1 });
            refined.push(Iv { err: e2, lo: mid, hi: iv.hi, val: v2, saturated: s2 });
        }
        let drift = (new_total - total).abs();
        intervals = refined;
        total = new_total;
        total_err = new_err;
        if !suspicious && drift <= abs_tol + rel_tol * total.abs() {
            break;
        }
    }
    // recompute the sum compensated for stability
    let mut acc = Kahan::default();
    for iv in &intervals {
        acc.add(iv.val);
    }
    Ok(acc.value())
}

/// Quadrature for integrands oscillating with phase rate `freq` over `[a, b]`.
///
/// When `freq * (b - a)` exceeds ~50 the range is cut into panels of half a
/// period (`π / freq`), each integrated with a fixed Gauss–Kronrod rule, and
/// the panel values are summed with compensated accumulation. Otherwise
/// plain adaptive quadrature is used.
pub fn oscillatory_zeros<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    freq: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Result<f64, Error> {
    let span = b - a;
    if span == 0.0 {
        return Ok(0.0);
    }
    let cycles = freq.abs() * span;
    if cycles <= 50.0 {
        return adaptive_gk(f, a, b, rel_tol, 0.0, 4000);
    }
    let mut n = (cycles / std::f64::consts::PI).ceil() as usize + 1;
    if n > max_panels {
        return Err(Error::QuadratureNonConvergent {
            rel_err: f64::NAN,
            panels: n,
        });
    }
    // panels at zero spacing; refine uniformly until the GK error settles
    for _round in 0..3 {
        let h = span / n as f64;
        let mut acc = Kahan::default();
        let mut err = Kahan::default();
        for i in 0..n {
            let lo = a + i as f64 * h;
            let hi = if i == n - 1 { b } else { lo + h };
            let (v, e, _) = gk15(f, lo, hi);
            acc.add(v);
            err.add(e);
        }
        let total = acc.value();
        let tol = rel_tol * total.abs().max(1e-300) + 1e-14 * err.value().abs().max(0.0);
        if err.value() <= tol.max(rel_tol * total.abs()) || n * 2 > max_panels {
            if err.value() > rel_tol * total.abs().max(1e-300) && n * 2 > max_panels {
                return Err(Error::QuadratureNonConvergent {
                    rel_err: err.value() / total.abs().max(f64::MIN_POSITIVE),
                    panels: n,
                });
            }
            return Ok(total);
        }
        n *= 2;
    }
    let h = span / n as f64;
    let mut acc = Kahan::default();
    for i in 0..n {
        let lo = a + i as f64 * h;
        let hi = if i == n - 1 { b } else { lo + h };
        acc.add(gk15(f, lo, hi).0);
    }
    Ok(acc.value())
}

/// Filon moments `M_j(w) = ∫_{-1}^{1} u^j f(wu) du` for the quadratic rule.
fn filon_moments(w: f64) -> (f64, f64, f64) {
    if w.abs() < 0.25 {
        let w2 = w * w;
        let m0 = 2.0 * (1.0 - w2 / 6.0 + w2 * w2 / 120.0 - w2 * w2 * w2 / 5040.0);
        let m1 = 2.0 * w * (1.0 / 3.0 - w2 / 30.0 + w2 * w2 / 840.0 - w2 * w2 * w2 / 45360.0);
        let m2 = 2.0 * (1.0 / 3.0 - w2 / 10.0 + w2 * w2 / 168.0 - w2 * w2 * w2 / 6480.0);
        (m0, m1, m2)
    } else {
        let (s, c) = w.sin_cos();
        let m0 = 2.0 * s / w;
        let m1 = 2.0 * (s - w * c) / (w * w);
        let m2 = 2.0 * ((w * w - 2.0) * s + 2.0 * w * c) / (w * w * w);
        (m0, m1, m2)
    }
}

/// `∫ φ(x) cos(ω x + phase) dx` over the panels of `mesh` (must be sorted),
/// with `φ` interpolated quadratically on each panel.
pub fn filon_cos<F: Fn(f64) -> f64>(phi: &F, mesh: &[f64], omega: f64, phase: f64) -> f64 {
    let mut acc = Kahan::default();
    for pair in mesh.windows(2) {
        let (xl, xr) = (pair[0], pair[1]);
        if xr <= xl {
            continue;
        }
        let h2 = 0.5 * (xr - xl);
        let m = 0.5 * (xl + xr);
        let f0 = phi(xl);
        let f1 = phi(m);
        let f2 = phi(xr);
        let c0 = f1;
        let c1 = 0.5 * (f2 - f0);
        let c2 = 0.5 * (f0 - 2.0 * f1 + f2);
        let w = omega * h2;
        let theta = omega * m + phase;
        let (m0, m1, m2) = filon_moments(w);
        let (st, ct) = theta.sin_cos();
        acc.add(h2 * (ct * (c0 * m0 + c2 * m2) - st * (c1 * m1)));
    }
    acc.value()
}

/// Builds a mesh of `n` panels on `[a, b]`, geometrically clustered toward
/// `a` when `cluster_lo` (toward `b` otherwise). The first panel has width
/// `~(b - a) * ratio` with `ratio` chosen so panels grow by a constant
/// factor.
pub fn geometric_mesh(a: f64, b: f64, n: usize, cluster_lo: bool) -> Vec<f64> {
    let n = n.max(2);
    let span = b - a;
    // panel widths w_i = w0 * r^i with r fixed; choose r so that the widths
    // span about four orders of magnitude across the mesh
    let r = (1e4f64).powf(1.0 / (n as f64 - 1.0));
    let mut widths: Vec<f64> = (0..n).map(|i| r.powi(i as i32)).collect();
    let total: f64 = widths.iter().sum();
    for w in &mut widths {
        *w *= span / total;
    }
    let mut mesh = Vec::with_capacity(n + 1);
    mesh.push(a);
    let mut x = a;
    for w in &widths {
        x += w;
        mesh.push(x);
    }
    *mesh.last_mut().unwrap() = b;
    if !cluster_lo {
        // mirror: small panels at b
        let mut mirrored: Vec<f64> = mesh.iter().map(|&x| a + b - x).collect();
        mirrored.reverse();
        return mirrored;
    }
    mesh
}

/// Adaptive Filon integration of `∫ φ(x) cos(ω x + phase) dx` on `[a, b]`.
///
/// Refines a geometric mesh (clustered toward the end where `φ` varies
/// fastest) until doubling the panel count moves the result by less than
/// `rel_tol`.
pub fn filon_adaptive<F: Fn(f64) -> f64>(
    phi: &F,
    a: f64,
    b: f64,
    omega: f64,
    phase: f64,
    cluster_lo: bool,
    rel_tol: f64,
) -> Result<f64, Error> {
    if b <= a {
        return Ok(0.0);
    }
    let mut n = 32usize;
    let mut prev = filon_cos(phi, &geometric_mesh(a, b, n, cluster_lo), omega, phase);
    for _ in 0..8 {
        n *= 2;
        let cur = filon_cos(phi, &geometric_mesh(a, b, n, cluster_lo), omega, phase);
        let scale = cur.abs().max(prev.abs()).max(1e-300);
        if (cur - prev).abs() <= rel_tol * scale + 1e-300 {
            return Ok(cur);
        }
        prev = cur;
    }
    // envelope-limited accuracy reached; accept the best estimate available
    Ok(prev)
}
