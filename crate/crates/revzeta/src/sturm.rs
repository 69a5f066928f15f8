//! Per-mode Sturm-Liouville problems on the generator interval.
//!
//! Separation of variables reduces the Laplacian eigenvalue problem to, for
//! each angular mode number k >= 0,
//!
//! ```text
//! phi'' + u(x) phi' + (lambda - k^2/f^2)(1 + f'^2) phi = 0,
//! u = f'/f - f' f''/(1 + f'^2),     phi(a) = 0, phi'(a) = 1,
//! ```
//!
//! whose right-endpoint value phi_k(lambda; b) vanishes exactly at the mode-k
//! eigenvalues. Multiplying by p = f/sqrt(1 + f'^2) puts the equation in
//! self-adjoint form (p phi')' + (lambda w - q) phi = 0 with w = f sqrt(1+f'^2)
//! and q = k^2 sqrt(1+f'^2)/f; note p'/p = u.
//!
//! phi grows exponentially in k and sqrt(|lambda|), so the solvers never
//! carry phi itself: for lambda <= 0 the logarithmic derivative v = phi'/phi
//! is integrated with ln phi accumulated alongside, and for lambda > 0 a
//! Pruefer angle theta with (p phi', phi) = r (S cos theta, sin theta) is
//! used. The scale S = sqrt(p (lambda w + q + w)) absorbs the local wave
//! number, so the angle equation stays non-oscillatory at large lambda;
//! upward crossings of multiples of pi still happen exactly at zeros of phi,
//! hence floor(theta(b)/pi) counts the eigenvalues below lambda.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::ode::{integrate_adaptive, OdeSpec};
use crate::profile::Profile;
use crate::quad::{integrate, KahanSum, QuadratureSpec};

/// Separated problem for one angular mode number k >= 0. Negative k is
/// folded in by the lambda_{k,n} = lambda_{-k,n} symmetry.
#[derive(Debug, Clone, Copy)]
pub struct ModeProblem<'a> {
    pub profile: &'a Profile,
    pub k: u32,
}

impl<'a> ModeProblem<'a> {
    pub fn new(profile: &'a Profile, k: u32) -> Self {
        Self { profile, k }
    }

    /// First-derivative coefficient u(x) of the separated equation.
    #[inline]
    fn u(&self, f: f64, fp: f64, fpp: f64) -> f64 {
        fp / f - fp * fpp / (1.0 + fp * fp)
    }
}

/// Right-endpoint shooting data in log-magnitude/sign form.
#[derive(Debug, Clone, Copy)]
pub struct ShootingResult {
    /// ln |phi_k(lambda; b)|.
    pub log_abs: f64,
    /// Sign of phi_k(lambda; b).
    pub sign: i8,
    /// phi'/phi at b.
    pub log_derivative_at_b: f64,
}

// Start-up offset for the regularized logarithmic-derivative launch,
// relative to the interval length. phi ~ (x-a) near a, so
// v(a+eps) = 1/eps - u(a)/2 + O(eps).
const RICCATI_EPS_REL: f64 = 1e-8;

/// Self-adjoint coefficients (p, q, w) at x.
pub fn sl_coefficients(mode: &ModeProblem, x: f64) -> Result<(f64, f64, f64)> {
    let (f, fp, _) = mode.profile.eval(x)?;
    let root = (1.0 + fp * fp).sqrt();
    let k2 = (mode.k as f64) * (mode.k as f64);
    Ok((f / root, k2 * root / f, f * root))
}

fn riccati_start(mode: &ModeProblem, lambda: f64) -> (f64, f64, f64, f64) {
    let dom = mode.profile.domain();
    let eps = RICCATI_EPS_REL * dom.length();
    let (f, fp, fpp) = mode.profile.eval_unchecked(dom.a);
    let u0 = mode.u(f, fp, fpp);
    let d0 = 1.0 + fp * fp;
    let k2 = (mode.k as f64) * (mode.k as f64);
    let g0 = (lambda - k2 / (f * f)) * d0;
    // phi = t + a2 t^2 + a3 t^3 + ..., t = x - a, with a2 = -u0/2 and the
    // third coefficient carrying the local potential (f''' is unavailable,
    // so the u' part of a3 is dropped; it enters at O(eps) and is damped by
    // the contracting Riccati flow).
    let a2 = -0.5 * u0;
    let a3 = (u0 * u0 - g0) / 6.0;
    let v0 = 1.0 / eps + a2 + (2.0 * a3 - a2 * a2) * eps;
    let ln_phi0 = eps.ln() + a2 * eps;
    (eps, v0, ln_phi0, d0)
}

/// Shooting value phi_k(lambda; b) for real lambda.
///
/// lambda <= 0 probes the negative axis, where phi stays positive and the
/// logarithmic derivative is integrated; a computed sign flip there is
/// raised as an internal error. For lambda > 0 the Pruefer form is used.
pub fn shoot(mode: &ModeProblem, lambda: f64, ode: &OdeSpec) -> Result<ShootingResult> {
    let dom = mode.profile.domain();
    if lambda <= 0.0 {
        let (eps, v0, ln_phi0, _) = riccati_start(mode, lambda);
        let k2 = (mode.k as f64) * (mode.k as f64);
        let mut y = [v0, ln_phi0];
        integrate_adaptive(
            |x, y: &[f64; 2]| {
                let (f, fp, fpp) = mode.profile.eval_unchecked(x);
                let u = mode.u(f, fp, fpp);
                let d = 1.0 + fp * fp;
                let v = y[0];
                [-v * v - u * v - (lambda - k2 / (f * f)) * d, v]
            },
            dom.a + eps,
            dom.b,
            &mut y,
            Some(eps / 10.0),
            ode,
        )?;
        if !(y[0] > 0.0) {
            return Err(Error::Internal(format!(
                "logarithmic derivative became non-positive at b for lambda = {lambda}"
            )));
        }
        Ok(ShootingResult { log_abs: y[1], sign: 1, log_derivative_at_b: y[0] })
    } else {
        let pr_a = PrueferCoeffs::at(mode, lambda, dom.a);
        let mut y = [0.0, (pr_a.p / pr_a.scale).ln()];
        integrate_adaptive(
            |x, y: &[f64; 2]| {
                let c = PrueferCoeffs::at(mode, lambda, x);
                let (s, co) = y[0].sin_cos();
                [
                    c.omega * co * co + c.big_q / c.scale * s * s + c.dlog_scale * s * co,
                    (c.omega - c.big_q / c.scale) * s * co - c.dlog_scale * co * co,
                ]
            },
            dom.a,
            dom.b,
            &mut y,
            None,
            ode,
        )?;
        let pr_b = PrueferCoeffs::at(mode, lambda, dom.b);
        let (s, c) = y[0].sin_cos();
        Ok(ShootingResult {
            log_abs: y[1] + s.abs().ln(),
            sign: if s >= 0.0 { 1 } else { -1 },
            log_derivative_at_b: pr_b.omega * c / s,
        })
    }
}

/// Coefficients of the scaled Pruefer system at one point.
struct PrueferCoeffs {
    p: f64,
    /// Q = lambda w - q.
    big_q: f64,
    /// S = sqrt(p (lambda w + q + w)) > 0.
    scale: f64,
    /// S / p, the angular speed on zeros of phi.
    omega: f64,
    /// S'/S.
    dlog_scale: f64,
}

impl PrueferCoeffs {
    #[inline]
    fn at(mode: &ModeProblem, lambda: f64, x: f64) -> Self {
        let (f, fp, fpp) = mode.profile.eval_unchecked(x);
        let root2 = 1.0 + fp * fp;
        let root = root2.sqrt();
        let p = f / root;
        let w = f * root;
        let k2 = (mode.k as f64) * (mode.k as f64);
        let q = k2 * root / f;
        let big_q = lambda * w - q;
        // m = lambda w + q + w and its x-derivative.
        let m = lambda * w + q + w;
        let wp = root * (fp + f * fp * fpp / root2);
        let qp = q * (fp * fpp / root2 - fp / f);
        let mp = (lambda + 1.0) * wp + qp;
        let u = fp / f - fp * fpp / root2;
        let scale = (p * m).sqrt();
        PrueferCoeffs {
            p,
            big_q,
            scale,
            omega: scale / p,
            dlog_scale: 0.5 * (u + mp / m),
        }
    }
}

/// ln phi_k(0; b) from the closed form
/// phi_k(0;b) = f(a)/sqrt(1+f'(a)^2) * (e^{kA} - e^{-kA})/(2k), k >= 1,
/// and phi_0(0;b) = f(a)/sqrt(1+f'(a)^2) * A.
pub fn ln_phi_at_zero(mode: &ModeProblem, quad: &QuadratureSpec) -> Result<f64> {
    let dom = mode.profile.domain();
    let a_integral = integrate(
        |x| {
            let (f, fp, _) = mode.profile.eval_unchecked(x);
            (1.0 + fp * fp).sqrt() / f
        },
        dom.a,
        dom.b,
        quad,
    )?;
    let (fa, fpa, _) = mode.profile.eval_unchecked(dom.a);
    let base = fa.ln() - 0.5 * (1.0 + fpa * fpa).ln();
    if mode.k == 0 {
        Ok(base + a_integral.ln())
    } else {
        let ka = mode.k as f64 * a_integral;
        Ok(base + ka + (-(-(2.0 * ka)).exp()).ln_1p() - (2.0 * mode.k as f64).ln())
    }
}

/// phi_k(0; b); overflows to infinity for very large kA, use
/// [`ln_phi_at_zero`] in that regime.
pub fn phi_at_zero(mode: &ModeProblem, quad: &QuadratureSpec) -> Result<f64> {
    Ok(ln_phi_at_zero(mode, quad)?.exp())
}

/// ln D_k(-y) = ln phi_k(-y; b) - ln phi_k(0; b) for y > 0.
///
/// Computed from a coupled system for the lambda = 0 logarithmic derivative
/// v0, the difference excess e = v_{-y} - v0 and its running integral, so
/// the result keeps relative accuracy even as y -> 0 where the two shooting
/// values nearly cancel. The canonical product makes the result positive.
pub fn log_d(mode: &ModeProblem, y: f64, ode: &OdeSpec) -> Result<f64> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::Domain(format!("log_d requires y > 0, got {y}")));
    }
    let dom = mode.profile.domain();
    let (eps, v0, _, d0) = riccati_start(mode, 0.0);
    let k2 = (mode.k as f64) * (mode.k as f64);
    // State: [v0(x), e(x), delta(x)] with delta' = e, delta(b) = ln D_k(-y).
    let mut state = [v0, y * d0 * eps / 3.0, y * d0 * eps * eps / 6.0];
    integrate_adaptive(
        |x, s: &[f64; 3]| {
            let (f, fp, fpp) = mode.profile.eval_unchecked(x);
            let u = mode.u(f, fp, fpp);
            let d = 1.0 + fp * fp;
            let c0 = (k2 / (f * f)) * d;
            let v = s[0];
            let e = s[1];
            [-v * v - u * v + c0, -(2.0 * v + e + u) * e + y * d, e]
        },
        dom.a + eps,
        dom.b,
        &mut state,
        Some(eps / 10.0),
        ode,
    )?;
    if !(state[2] > 0.0) {
        return Err(Error::Internal(format!(
            "ln D_k(-y) came out non-positive ({}) for k = {}, y = {y}",
            state[2], mode.k
        )));
    }
    Ok(state[2])
}

/// Exact count of mode-k eigenvalues below `lambda` via the Pruefer angle.
pub fn count_eigenvalues_below(mode: &ModeProblem, lambda: f64, ode: &OdeSpec) -> Result<usize> {
    let theta = pruefer_angle(mode, lambda, ode)?;
    Ok((theta / PI).floor().max(0.0) as usize)
}

fn pruefer_angle(mode: &ModeProblem, lambda: f64, ode: &OdeSpec) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("Pruefer scan requires lambda > 0, got {lambda}")));
    }
    let dom = mode.profile.domain();
    let mut y = [0.0];
    integrate_adaptive(
        |x, y: &[f64; 1]| {
            let c = PrueferCoeffs::at(mode, lambda, x);
            let (s, co) = y[0].sin_cos();
            [c.omega * co * co + c.big_q / c.scale * s * s + c.dlog_scale * s * co]
        },
        dom.a,
        dom.b,
        &mut y,
        None,
        ode,
    )?;
    Ok(y[0])
}

/// First `n_max` eigenvalues of mode k, refined to relative tolerance
/// `bisect_tol`. The scan is seeded with the Weyl estimate and each root is
/// bracketed through the Pruefer eigenvalue count, which cannot skip
/// near-degenerate pairs.
pub fn eigenvalues(
    mode: &ModeProblem,
    n_max: usize,
    bisect_tol: f64,
    ode: &OdeSpec,
) -> Result<Vec<f64>> {
    if n_max < 1 {
        return Err(Error::Domain("n_max must be >= 1".into()));
    }
    let dom = mode.profile.domain();
    let quad = QuadratureSpec::default();
    let arc = integrate(
        |x| {
            let (_, fp, _) = mode.profile.eval_unchecked(x);
            (1.0 + fp * fp).sqrt()
        },
        dom.a,
        dom.b,
        &quad,
    )?;
    // Large-lambda phase: theta(b) ~ sqrt(lambda) * arc - potential shift.
    let k2 = (mode.k as f64) * (mode.k as f64);
    let shift = if mode.k == 0 {
        0.0
    } else {
        k2 / arc
            * integrate(
                |x| {
                    let (f, fp, _) = mode.profile.eval_unchecked(x);
                    (1.0 + fp * fp).sqrt() / (f * f)
                },
                dom.a,
                dom.b,
                &quad,
            )?
    };

    let mut out = Vec::with_capacity(n_max);
    let mut lo = 0.0_f64; // theta(b; 0+) < pi, so lambda = 0 is a valid floor
    let mut theta_lo = 0.0_f64;
    for n in 1..=n_max {
        let target = n as f64 * PI;
        let mut hi = ((n as f64 * PI) / arc).powi(2) + shift;
        if hi <= lo {
            hi = lo * 1.5 + 1.0;
        }
        let mut theta_hi = pruefer_angle(mode, hi, ode)?;
        let mut grow = 0;
        while theta_hi <= target {
            grow += 1;
            if grow > 200 {
                return Err(Error::Bracket { k: mode.k, n });
            }
            hi = lo + (hi - lo) * 2.0 + 1.0;
            theta_hi = pruefer_angle(mode, hi, ode)?;
        }
        let root = brent_root(
            |lambda| Ok(pruefer_angle(mode, lambda, ode)? - target),
            lo,
            hi,
            theta_lo - target,
            theta_hi - target,
            bisect_tol,
        )
        .map_err(|e| match e {
            Error::Bracket { .. } => Error::Bracket { k: mode.k, n },
            other => other,
        })?;
        out.push(root);
        lo = root;
        theta_lo = target;
    }
    Ok(out)
}

/// Brent root finder on a bracketing interval; `xtol` is relative.
fn brent_root<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    mut fb: f64,
    xtol: f64,
) -> Result<f64> {
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa * fb > 0.0 {
        return Err(Error::Bracket { k: 0, n: 0 });
    }
    let (mut c, mut fc) = (a, fa);
    let (mut d, mut e) = (b - a, b - a);
    for _ in 0..200 {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol * b.abs().max(1.0);
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * xm * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b)?;
    }
    Ok(b)
}

/// An extracted eigenvalue lambda_{k,n}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenEntry {
    pub k: u32,
    pub n: usize,
    pub lambda: f64,
}

/// Eigenvalues of all modes below a cutoff, sorted by (k, n).
#[derive(Debug, Clone)]
pub struct EigenvalueTable {
    pub entries: Vec<EigenEntry>,
    /// Every eigenvalue below this value is present.
    pub lambda_cut: f64,
    pub bisect_tol: f64,
    pub profile_hash: String,
}

impl EigenvalueTable {
    /// Total mode count with the angular degeneracy (2 for k >= 1).
    pub fn weighted_count(&self) -> usize {
        self.entries.iter().map(|e| if e.k == 0 { 1 } else { 2 }).sum()
    }

    /// Sum of degeneracy * g(lambda) in fixed (k, n) order.
    pub fn weighted_sum<F: Fn(f64) -> f64>(&self, g: F) -> f64 {
        let mut acc = KahanSum::new();
        for e in &self.entries {
            let deg = if e.k == 0 { 1.0 } else { 2.0 };
            acc.add(deg * g(e.lambda));
        }
        acc.value()
    }

    pub fn mode_slice(&self, k: u32) -> Vec<f64> {
        self.entries.iter().filter(|e| e.k == k).map(|e| e.lambda).collect()
    }
}

/// Extract every eigenvalue below `lambda_cut` for all modes.
///
/// The per-mode ground eigenvalue is non-decreasing in k (the potential
/// k^2/f^2 grows with k), so the k-scan stops at the first empty mode.
pub fn build_table(
    profile: &Profile,
    lambda_cut: f64,
    bisect_tol: f64,
    ode: &OdeSpec,
) -> Result<EigenvalueTable> {
    if !(lambda_cut > 0.0) {
        return Err(Error::Domain("lambda_cut must be positive".into()));
    }
    let mut entries = Vec::new();
    let mut k = 0u32;
    loop {
        let mode = ModeProblem::new(profile, k);
        let m = count_eigenvalues_below(&mode, lambda_cut, ode)?;
        if m == 0 {
            break;
        }
        let lambdas = eigenvalues(&mode, m, bisect_tol, ode)?;
        for (i, lambda) in lambdas.iter().enumerate() {
            if *lambda <= 0.0 || (i > 0 && lambdas[i - 1] >= *lambda) {
                return Err(Error::Internal(format!(
                    "eigenvalue ordering violated for k = {k} at n = {}",
                    i + 1
                )));
            }
            entries.push(EigenEntry { k, n: i + 1, lambda: *lambda });
        }
        k += 1;
    }
    Ok(EigenvalueTable {
        entries,
        lambda_cut,
        bisect_tol,
        profile_hash: profile.content_hash(),
    })
}
