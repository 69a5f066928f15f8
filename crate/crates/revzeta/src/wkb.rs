//! Asymptotic expansion coefficients of the characteristic function.
//!
//! Writing phi = exp int (S - u/2) turns the separated equation into a
//! Riccati equation for S whose solutions expand in inverse powers of the
//! large parameter (z for the k = 0 problem, k for the rest). The retained
//! coefficients drive the analytic continuation of the zeta function and
//! give the large-argument form of ln D_k used to subtract divergences.

use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::quad::{integrate, QuadratureSpec};
use crate::sturm::{ln_phi_at_zero, ModeProblem};

/// One-dimensional (k = 0) expansion coefficients at a point.
#[derive(Debug, Clone, Copy)]
pub struct Wkb1d {
    /// sqrt(1 + f'^2), the order-z coefficient.
    pub s_minus1: f64,
    /// -f' f'' / (2 (1 + f'^2)).
    pub s0: f64,
    /// Order-1/z coefficient.
    pub s1: f64,
    /// Leading coefficient of d ln S_1 / dz; identically 1.
    pub t0: f64,
    /// Next coefficient of d ln S_1 / dz; equals -2 s1 / s_minus1.
    pub t1: f64,
    /// Coefficient u of phi' in the separated equation.
    pub u: f64,
}

/// Coefficients at x from the closed formulas.
pub fn wkb1(profile: &Profile, x: f64) -> Result<Wkb1d> {
    let (f, fp, fpp) = profile.eval(x)?;
    let r2 = 1.0 + fp * fp;
    let root = r2.sqrt();
    let s1 = -0.125 * fp * fp / (f * f * root) + 0.25 * fpp / (f * r2 * root);
    Ok(Wkb1d {
        s_minus1: root,
        s0: -fp * fpp / (2.0 * r2),
        s1,
        t0: 1.0,
        t1: 0.25 * fp * fp / (f * f * r2) - 0.5 * fpp / (f * r2 * r2),
        u: fp / f - fp * fpp / r2,
    })
}

/// Two-dimensional (k -> infinity) expansion coefficients at a point, with
/// the combined variable t = z f(x)^2.
#[derive(Debug, Clone, Copy)]
pub struct Wkb2d {
    pub t: f64,
    /// sqrt(1 + f'^2)/f * sqrt(t + 1), the order-k coefficient.
    pub s_minus1: f64,
    /// Order-1/k coefficient.
    pub s1: f64,
    /// Leading t-derivative coefficient 1/(2 (1 + t)).
    pub t0: f64,
    /// Next t-derivative coefficient.
    pub t1: f64,
}

/// Coefficients at (x, z >= 0) from the closed formulas.
pub fn wkb2(profile: &Profile, x: f64, z: f64) -> Result<Wkb2d> {
    if !(z >= 0.0) {
        return Err(Error::Domain(format!("wkb2 requires z >= 0, got {z}")));
    }
    let (f, fp, fpp) = profile.eval(x)?;
    let r2 = 1.0 + fp * fp;
    let root = r2.sqrt();
    let t = z * f * f;
    let tp1 = t + 1.0;
    let s1 = t / tp1.powf(1.5)
        * (-0.125 * (t - 4.0) / tp1 * fp * fp / (f * root) + 0.25 * fpp / (r2 * root));
    let t1 = (t * t - 10.0 * t + 4.0) / (8.0 * tp1.powi(4)) * fp * fp / r2
        + (1.0 - t) / (4.0 * tp1.powi(3)) * f * fpp / (r2 * r2);
    Ok(Wkb2d {
        t,
        s_minus1: root / f * tp1.sqrt(),
        s1,
        t0: 1.0 / (2.0 * tp1),
        t1,
    })
}

/// Large-z form of ln D_0(-z^2):
///
/// ```text
/// z int s_{-1} - 1/2 int u - ln z - 1/2 (ln s_{-1}(a) + ln s_{-1}(b))
///   - ln(2 phi_0(0;b)) + (1/z) int s_1
/// ```
///
/// The dropped orders are O(1/z^2) plus an exponentially small product tail.
pub fn ln_d_asymptotic_1d(profile: &Profile, z: f64, quad: &QuadratureSpec) -> Result<f64> {
    if !(z >= 1.0) {
        return Err(Error::Domain(format!("asymptotic form needs z >= 1, got {z}")));
    }
    let dom = profile.domain();
    let i_sm1 = integrate(|x| wkb1(profile, x).unwrap().s_minus1, dom.a, dom.b, quad)?;
    let i_s1 = integrate(|x| wkb1(profile, x).unwrap().s1, dom.a, dom.b, quad)?;
    // u = (ln f - ln sqrt(1 + f'^2))', so its integral telescopes.
    let (fa, fpa, _) = profile.eval_unchecked(dom.a);
    let (fb, fpb, _) = profile.eval_unchecked(dom.b);
    let i_u = (fb / (1.0 + fpb * fpb).sqrt()).ln() - (fa / (1.0 + fpa * fpa).sqrt()).ln();
    let sa = wkb1(profile, dom.a)?.s_minus1;
    let sb = wkb1(profile, dom.b)?.s_minus1;
    let ln_phi0 = ln_phi_at_zero(&ModeProblem::new(profile, 0), quad)?;
    Ok(z * i_sm1 - 0.5 * i_u - z.ln() - 0.5 * (sa.ln() + sb.ln())
        - std::f64::consts::LN_2
        - ln_phi0
        + i_s1 / z)
}

/// Large-k form of ln D_k(-k^2 z) at fixed z >= 0:
///
/// ```text
/// k int s_{-1}(z;x) - A k + (1/k) int s_1(z;x)
///   - 1/2 ln [ s_{-1}(z;a) s_{-1}(z;b) / (s_{-1}(0;a) s_{-1}(0;b)) ]
///   + ln [ (1 - e^{-2 k int s_{-1}(z;x)}) / (1 - e^{-2 A k}) ]
/// ```
///
/// Exactly zero at z = 0, where D_k(0) = 1.
pub fn ln_d_asymptotic_2d(profile: &Profile, k: u32, z: f64, quad: &QuadratureSpec) -> Result<f64> {
    if k < 1 {
        return Err(Error::Domain("asymptotic form needs k >= 1".into()));
    }
    if !(z >= 0.0) {
        return Err(Error::Domain(format!("asymptotic form needs z >= 0, got {z}")));
    }
    let dom = profile.domain();
    let kf = k as f64;
    let i_sm1_z = integrate(|x| wkb2(profile, x, z).unwrap().s_minus1, dom.a, dom.b, quad)?;
    let i_s1_z = integrate(|x| wkb2(profile, x, z).unwrap().s1, dom.a, dom.b, quad)?;
    let a_integral = integrate(|x| wkb2(profile, x, 0.0).unwrap().s_minus1, dom.a, dom.b, quad)?;
    let sza = wkb2(profile, dom.a, z)?.s_minus1;
    let szb = wkb2(profile, dom.b, z)?.s_minus1;
    let s0a = wkb2(profile, dom.a, 0.0)?.s_minus1;
    let s0b = wkb2(profile, dom.b, 0.0)?.s_minus1;
    let product_tail = (-(-2.0 * kf * i_sm1_z).exp()).ln_1p() - (-(-2.0 * kf * a_integral).exp()).ln_1p();
    Ok(kf * i_sm1_z - a_integral * kf + i_s1_z / kf
        - 0.5 * ((sza * szb) / (s0a * s0b)).ln()
        + product_tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::OdeSpec;
    use crate::profile::{Interval, Shape};
    use crate::sturm::log_d;
    use std::f64::consts::PI;

    fn cylinder(r: f64, l: f64) -> Profile {
        Profile::new(Shape::Constant { c: r }, Interval::new(0.0, l).unwrap()).unwrap()
    }

    fn frustum() -> Profile {
        Profile::new(Shape::Linear { c0: 1.0, c1: 0.5 }, Interval::new(0.0, 2.0).unwrap()).unwrap()
    }

    fn catenoid() -> Profile {
        Profile::new(Shape::Catenoid { c: 1.0, x0: 0.0 }, Interval::new(-1.0, 1.0).unwrap()).unwrap()
    }

    fn bump() -> Profile {
        Profile::new(
            Shape::CosineBump { base: 1.0, amp: 0.25, period: 2.0 },
            Interval::new(0.0, 1.5).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn wkb1_examples() {
        let w = wkb1(&cylinder(1.0, PI), 1.0).unwrap();
        assert_eq!((w.s_minus1, w.s0, w.s1, w.t0, w.t1), (1.0, 0.0, 0.0, 1.0, 0.0));

        let w = wkb1(&frustum(), 0.0).unwrap();
        let root = 1.25f64.sqrt();
        assert!((w.s_minus1 - root).abs() < 1e-15);
        assert_eq!(w.s0, 0.0);
        assert!((w.s1 - (-0.125 * 0.25 / root)).abs() < 1e-15);
        assert!((w.t1 - (-2.0 * w.s1 / root)).abs() < 1e-15);

        let w = wkb1(&catenoid(), 0.0).unwrap();
        assert!((w.s1 - 0.25).abs() < 1e-15);
        assert!((w.t1 + 0.5).abs() < 1e-15);
    }

    #[test]
    fn wkb1_t1_identity() {
        for profile in [frustum(), catenoid(), bump()] {
            let dom = profile.domain();
            for i in 0..=10 {
                let x = dom.a + dom.length() * i as f64 / 10.0;
                let w = wkb1(&profile, x).unwrap();
                assert!(
                    (w.t1 + 2.0 * w.s1 / w.s_minus1).abs() < 1e-14,
                    "x = {x}: t1 = {}, -2 s1/s_minus1 = {}",
                    w.t1,
                    -2.0 * w.s1 / w.s_minus1
                );
            }
        }
    }

    #[test]
    fn wkb2_examples() {
        // z = 0 kills s1 and fixes t0 = 1/2.
        for profile in [frustum(), catenoid()] {
            let dom = profile.domain();
            let w = wkb2(&profile, dom.a, 0.0).unwrap();
            let (f, fp, _) = profile.eval(dom.a).unwrap();
            assert_eq!(w.s1, 0.0);
            assert_eq!(w.t0, 0.5);
            assert!((w.s_minus1 - (1.0 + fp * fp).sqrt() / f).abs() < 1e-15);
        }

        let w = wkb2(&cylinder(1.0, PI), 1.0, 3.0).unwrap();
        assert_eq!(w.t, 3.0);
        assert_eq!(w.s_minus1, 2.0);
        assert_eq!(w.s1, 0.0);
        assert_eq!(w.t0, 0.125);
        assert_eq!(w.t1, 0.0);

        // Frustum at x = 0 with t = 1.
        let w = wkb2(&frustum(), 0.0, 1.0).unwrap();
        assert_eq!(w.t0, 0.25);
        assert!((w.t1 - (-5.0 / 128.0) * 0.2).abs() < 1e-15);
    }

    #[test]
    fn wkb2_t1_is_t_derivative_of_s1_ratio() {
        // t1 = d/dt (s1/s_minus1), checked by central differences in t.
        for profile in [frustum(), catenoid(), bump()] {
            let dom = profile.domain();
            let x = dom.a + 0.37 * dom.length();
            let (f, _, _) = profile.eval(x).unwrap();
            for &t in &[0.3, 1.0, 4.7] {
                let z = t / (f * f);
                let dz = 1e-6 * z;
                let ratio = |z: f64| {
                    let w = wkb2(&profile, x, z).unwrap();
                    w.s1 / w.s_minus1
                };
                // d/dt = (1/f^2) d/dz.
                let numeric = (ratio(z + dz) - ratio(z - dz)) / (2.0 * dz) / (f * f);
                let w = wkb2(&profile, x, z).unwrap();
                assert!(
                    (numeric - w.t1).abs() < 1e-8 * w.t1.abs().max(1e-3),
                    "t = {t}: numeric {numeric} vs t1 {}",
                    w.t1
                );
            }
        }
    }

    #[test]
    fn truncated_riccati_residual_decays_like_inverse_z() {
        // S~ = s_{-1} z + s0 + s1/z leaves a residual O(1/z) in
        // S' + S^2 = (1+f'^2) z^2 + u^2/4 + u'/2; slope from a log-log fit.
        let profile = bump();
        let dom = profile.domain();
        let h = 1e-5;
        let xs: Vec<f64> = (1..8).map(|i| dom.a + dom.length() * i as f64 / 8.0).collect();
        let zs = [10.0, 20.0, 40.0, 80.0, 160.0, 320.0];
        let mut max_resid = Vec::new();
        for &z in &zs {
            let mut worst = 0.0f64;
            for &x in &xs {
                let s_at = |x: f64| {
                    let w = wkb1(&profile, x).unwrap();
                    w.s_minus1 * z + w.s0 + w.s1 / z
                };
                let u_at = |x: f64| wkb1(&profile, x).unwrap().u;
                let sp = (s_at(x + h) - s_at(x - h)) / (2.0 * h);
                let up = (u_at(x + h) - u_at(x - h)) / (2.0 * h);
                let w = wkb1(&profile, x).unwrap();
                let s = s_at(x);
                let rhs = w.s_minus1 * w.s_minus1 * z * z + 0.25 * w.u * w.u + 0.5 * up;
                worst = worst.max((sp + s * s - rhs).abs());
            }
            max_resid.push(worst);
        }
        let slope = log_log_slope(&zs, &max_resid);
        assert!(slope <= -0.9, "residual slope {slope}, residuals {max_resid:?}");
    }

    fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
        let n = xs.len() as f64;
        let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
        for (x, y) in xs.iter().zip(ys) {
            let (lx, ly) = (x.ln(), y.ln());
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        (n * sxy - sx * sy) / (n * sxx - sx * sx)
    }

    #[test]
    fn asymptotic_1d_cylinder() {
        let cyl = cylinder(1.0, PI);
        let quad = QuadratureSpec::default();
        let z = 10.0;
        let asym = ln_d_asymptotic_1d(&cyl, z, &quad).unwrap();
        let closed = PI * z - z.ln() - (2.0 * PI).ln();
        assert!((asym - closed).abs() < 1e-11, "{asym} vs {closed}");
        // ln D_0(-z^2) = ln(sinh(pi z)/(pi z)) differs only by the
        // exponentially small product tail.
        let exact = PI * z + (-(-2.0 * PI * z).exp()).ln_1p() - (2.0 * PI * z).ln();
        assert!((asym - exact).abs() < 1e-11);
        let engine = log_d(&ModeProblem::new(&cyl, 0), z * z, &OdeSpec::default()).unwrap();
        assert!((asym - engine).abs() < 1e-7, "{asym} vs engine {engine}");
    }

    #[test]
    fn asymptotic_1d_frustum_accuracy() {
        let fr = frustum();
        let quad = QuadratureSpec::default();
        let ode = OdeSpec::default();
        let err_at = |z: f64| {
            let asym = ln_d_asymptotic_1d(&fr, z, &quad).unwrap();
            let engine = log_d(&ModeProblem::new(&fr, 0), z * z, &ode).unwrap();
            (asym - engine).abs()
        };
        let e20 = err_at(20.0);
        assert!(e20 <= 1e-3, "frustum z=20 error {e20}");
        // Error shrinks at least like 1/z.
        assert!(err_at(40.0) < e20 / 2.0);
    }

    #[test]
    fn asymptotic_2d_zero_is_exact() {
        for profile in [cylinder(1.0, PI), frustum(), catenoid(), bump()] {
            let v = ln_d_asymptotic_2d(&profile, 7, 0.0, &QuadratureSpec::default()).unwrap();
            assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn asymptotic_2d_cylinder_closed_form() {
        // For a constant profile every dropped coefficient vanishes, so the
        // asymptotic form reproduces ln[sinh(sqrt(2) pi k)/(sqrt(2) sinh(pi k))].
        let cyl = cylinder(1.0, PI);
        let quad = QuadratureSpec::default();
        let k = 5u32;
        let kf = k as f64;
        let asym = ln_d_asymptotic_2d(&cyl, k, 1.0, &quad).unwrap();
        let root2 = 2f64.sqrt();
        let closed = PI * kf * (root2 - 1.0) - 0.5 * 2f64.ln()
            + (-(-2.0 * root2 * PI * kf).exp()).ln_1p()
            - (-(-2.0 * PI * kf).exp()).ln_1p();
        assert!((asym - closed).abs() < 1e-12, "{asym} vs {closed}");
        let engine = log_d(&ModeProblem::new(&cyl, k), kf * kf * 1.0, &OdeSpec::default()).unwrap();
        assert!((asym - engine).abs() < 1e-7, "{asym} vs engine {engine}");
    }

    #[test]
    fn asymptotic_2d_error_decays_in_k() {
        let fr = frustum();
        let quad = QuadratureSpec::default();
        let ode = OdeSpec::default();
        let err_at = |k: u32| {
            let asym = ln_d_asymptotic_2d(&fr, k, 1.0, &quad).unwrap();
            let engine = log_d(&ModeProblem::new(&fr, k), (k as f64).powi(2), &ode).unwrap();
            (asym - engine).abs()
        };
        let (e8, e32) = (err_at(8), err_at(32));
        assert!(e32 < e8 / 6.0, "e8 = {e8}, e32 = {e32}");
    }
}
