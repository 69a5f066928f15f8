//! Integrated heat trace, its small-time expansion coefficients, and the
//! planar-stripe benchmark.
//!
//! The trace theta(t) = sum e^{-t lambda} admits the small-t expansion
//! C_{-1}/t + C_{-1/2}/sqrt(t) + C_0 + C_{1/2} sqrt(t) + ... whose
//! coefficients are integrals of geometric invariants: area, boundary
//! length, Euler characteristic (zero for these surfaces) and boundary
//! curvatures. The same coefficients map one-to-one onto the residues and
//! values of the zeta function, which is the main cross-module check.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::profile::{geometric_invariants, Profile};
use crate::quad::QuadratureSpec;
use crate::special::zeta_r;
use crate::sturm::EigenvalueTable;

/// Relative size of the truncation bound above which a trace value is
/// rejected as under-covered.
const TRACE_TAIL_LIMIT: f64 = 1e-10;

/// Sampled heat trace with per-point truncation bounds.
#[derive(Debug, Clone)]
pub struct HeatTrace {
    pub t_grid: Vec<f64>,
    pub theta: Vec<f64>,
    pub truncation_bound: Vec<f64>,
}

/// theta(t) on the grid from an eigenvalue table, with a Weyl-density bound
/// (area/(4 pi)) e^{-t Lambda_cut}/t on the dropped modes. Grid points whose
/// bound exceeds 1e-10 of the partial sum are rejected.
pub fn heat_trace(table: &EigenvalueTable, t_grid: &[f64], area: f64) -> Result<HeatTrace> {
    if t_grid.is_empty() {
        return Err(Error::Domain("empty t grid".into()));
    }
    let density = area / (4.0 * PI);
    let mut theta = Vec::with_capacity(t_grid.len());
    let mut bounds = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("heat trace needs t > 0, got {t}")));
        }
        let value = table.weighted_sum(|l| (-t * l).exp());
        let bound = density * (-t * table.lambda_cut).exp() / t;
        if bound > TRACE_TAIL_LIMIT * value {
            // theta ~ C_{-1}/t near the window edge, so the bound falls to
            // 1e-10 theta at roughly t = ln(1e10)/Lambda_cut.
            let t_min = (1.0 / TRACE_TAIL_LIMIT).ln() / table.lambda_cut;
            return Err(Error::Coverage(format!(
                "t = {t} too small for lambda_cut = {}; smallest supported t is about {t_min:.6}",
                table.lambda_cut
            )));
        }
        theta.push(value);
        bounds.push(bound);
    }
    Ok(HeatTrace { t_grid: t_grid.to_vec(), theta, truncation_bound: bounds })
}

/// Log-spaced grid of `n` points on [t_min, t_max].
pub fn log_spaced(t_min: f64, t_max: f64, n: usize) -> Vec<f64> {
    assert!(t_min > 0.0 && t_max > t_min && n >= 2);
    let (la, lb) = (t_min.ln(), t_max.ln());
    (0..n)
        .map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Geometric small-time coefficients for the Dirichlet Laplacian.
#[derive(Debug, Clone, Copy)]
pub struct HeatKernelCoefficients {
    /// area / (4 pi).
    pub c_minus1: f64,
    /// -|boundary| / (8 sqrt(pi)); negative for Dirichlet conditions.
    pub c_minus_half: f64,
    /// chi / 6 = 0 for a surface of revolution with two boundary circles.
    pub c_0: f64,
    /// Boundary curvature integral (1/(256 sqrt(pi))) int (k_g^2 - 8 k).
    pub c_half: f64,
}

/// Coefficients from the profile. The boundary consists of the two circles
/// x = a and x = b of circumference 2 pi f; on them the geodesic curvature
/// satisfies k_g^2 = f'^2/(f^2 (1+f'^2)) and the Gaussian curvature is
/// k = -f''/(f (1+f'^2)^2).
pub fn geometric_coefficients(
    profile: &Profile,
    quad: &QuadratureSpec,
) -> Result<HeatKernelCoefficients> {
    let inv = geometric_invariants(profile, quad)?;
    let dom = profile.domain();
    let boundary_len = 2.0 * PI * (inv.radius_a + inv.radius_b);

    let circle_term = |x: f64| -> Result<f64> {
        let (f, fp, fpp) = profile.eval(x)?;
        let r2 = 1.0 + fp * fp;
        let kg2 = fp * fp / (f * f * r2);
        let gauss = -fpp / (f * r2 * r2);
        Ok(2.0 * PI * f * (kg2 - 8.0 * gauss))
    };
    let c_half = (circle_term(dom.a)? + circle_term(dom.b)?) / (256.0 * PI.sqrt());

    Ok(HeatKernelCoefficients {
        c_minus1: inv.area / (4.0 * PI),
        c_minus_half: -boundary_len / (8.0 * PI.sqrt()),
        c_0: 0.0,
        c_half,
    })
}

/// Least-squares estimates of the expansion coefficients from a trace.
#[derive(Debug, Clone, Copy)]
pub struct FittedCoefficients {
    pub c_minus1: f64,
    pub c_minus_half: f64,
    pub c_0: f64,
    pub c_half: f64,
    /// Standard errors in the same order as the coefficients.
    pub stderr: [f64; 4],
    /// Weighted root-mean-square relative residual.
    pub residual_norm: f64,
}

/// Fit theta(t) ~ C_{-1}/t + C_{-1/2}/sqrt(t) + C_0 + C_{1/2} sqrt(t) by
/// weighted least squares with weights 1/theta^2, so the 1/t term does not
/// drown the subleading coefficients.
pub fn fit_coefficients(trace: &HeatTrace) -> Result<FittedCoefficients> {
    let n = trace.t_grid.len();
    if n < 8 {
        return Err(Error::Fit(format!("need at least 8 grid points, got {n}")));
    }
    let (t_min, t_max) = (trace.t_grid[0], trace.t_grid[n - 1]);
    if !(t_max / t_min >= 2.0) {
        return Err(Error::Fit(format!("window [{t_min}, {t_max}] too narrow to separate terms")));
    }

    let basis = |t: f64| [1.0 / t, 1.0 / t.sqrt(), 1.0, t.sqrt()];
    let mut m = [[0.0f64; 4]; 4];
    let mut v = [0.0f64; 4];
    for (&t, &th) in trace.t_grid.iter().zip(&trace.theta) {
        let w = 1.0 / (th * th);
        let row = basis(t);
        for i in 0..4 {
            v[i] += w * row[i] * th;
            for j in 0..4 {
                m[i][j] += w * row[i] * row[j];
            }
        }
    }
    let minv = invert4(&m).ok_or_else(|| Error::Fit("ill-conditioned design matrix".into()))?;
    let mut beta = [0.0f64; 4];
    for i in 0..4 {
        for j in 0..4 {
            beta[i] += minv[i][j] * v[j];
        }
    }

    let mut wss = 0.0;
    for (&t, &th) in trace.t_grid.iter().zip(&trace.theta) {
        let row = basis(t);
        let model: f64 = (0..4).map(|i| beta[i] * row[i]).sum();
        wss += ((th - model) / th).powi(2);
    }
    let residual_norm = (wss / n as f64).sqrt();
    let sigma2 = wss / (n as f64 - 4.0);
    let stderr = [
        (minv[0][0] * sigma2).sqrt(),
        (minv[1][1] * sigma2).sqrt(),
        (minv[2][2] * sigma2).sqrt(),
        (minv[3][3] * sigma2).sqrt(),
    ];

    Ok(FittedCoefficients {
        c_minus1: beta[0],
        c_minus_half: beta[1],
        c_0: beta[2],
        c_half: beta[3],
        stderr,
        residual_norm,
    })
}

/// Gauss-Jordan inverse of a 4x4 matrix; None when a pivot collapses.
fn invert4(m: &[[f64; 4]; 4]) -> Option<[[f64; 4]; 4]> {
    let mut a = *m;
    let mut inv = [[0.0f64; 4]; 4];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let scale = a.iter().flatten().fold(0.0f64, |acc, x| acc.max(x.abs()));
    for col in 0..4 {
        let mut pivot = col;
        for r in col + 1..4 {
            if a[r][col].abs() > a[pivot][col].abs() {
                pivot = r;
            }
        }
        if a[pivot][col].abs() < 1e-13 * scale {
            return None;
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let d = a[col][col];
        for j in 0..4 {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for r in 0..4 {
            if r != col {
                let factor = a[r][col];
                for j in 0..4 {
                    a[r][j] -= factor * a[col][j];
                    inv[r][j] -= factor * inv[col][j];
                }
            }
        }
    }
    Some(inv)
}

/// Closed special values of the stripe zeta density zeta_c.
#[derive(Debug, Clone, Copy)]
pub struct StripeSpecialValues {
    pub res_at_1: f64,
    pub res_at_half: f64,
    pub value_at_0: f64,
    pub res_at_minus_half: f64,
    pub zeta_prime0: f64,
}

/// The infinitely long planar stripe of width L, per unit compactified
/// length: res zeta_c(1) = L/2, res zeta_c(1/2) = -1/2, zeta_c(0) = 0,
/// res zeta_c(-1/2) = 0 and zeta_c'(0) = pi^2/(6 L).
pub fn stripe_special_values(width: f64) -> Result<StripeSpecialValues> {
    if !(width > 0.0) {
        return Err(Error::Domain(format!("stripe width must be positive, got {width}")));
    }
    Ok(StripeSpecialValues {
        res_at_1: width / 2.0,
        res_at_half: -0.5,
        value_at_0: 0.0,
        res_at_minus_half: 0.0,
        zeta_prime0: PI * PI / (6.0 * width),
    })
}

/// zeta_c(s) = sqrt(pi) zeta_R(2s-1) Gamma(s - 1/2)/Gamma(s) (L/pi)^{2s-1}
/// for real s > 1.
pub fn stripe_zeta_density(width: f64, s: f64) -> Result<f64> {
    if !(width > 0.0) {
        return Err(Error::Domain(format!("stripe width must be positive, got {width}")));
    }
    if !(s > 1.0) {
        return Err(Error::Domain(format!("density formula evaluated for s > 1, got {s}")));
    }
    let gamma_ratio = (crate::special::ln_gamma(s - 0.5)? - crate::special::ln_gamma(s)?).exp();
    Ok(PI.sqrt() * zeta_r(2.0 * s - 1.0)? * gamma_ratio * (width / PI).powf(2.0 * s - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::OdeSpec;
    use crate::profile::{Interval, Shape};
    use crate::sturm::build_table;
    use crate::zeta::full_special_values;

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

    fn quad() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn cylinder_coefficients() {
        let c = geometric_coefficients(&cylinder(1.0, PI), &quad()).unwrap();
        assert!((c.c_minus1 - PI / 2.0).abs() < 1e-12);
        assert!((c.c_minus_half - (-PI.sqrt() / 2.0)).abs() < 1e-12);
        assert_eq!(c.c_0, 0.0);
        assert_eq!(c.c_half, 0.0);
    }

    #[test]
    fn frustum_c_half_is_geodesic_only() {
        // f'' = 0, so only the k_g^2 term contributes.
        let c = geometric_coefficients(&frustum(), &quad()).unwrap();
        let expect = (2.0 * PI * 1.0 * 0.2 + 2.0 * PI * 2.0 * 0.05) / (256.0 * PI.sqrt());
        assert!((c.c_half - expect).abs() < 1e-15);
    }

    #[test]
    fn dictionary_matches_zeta_special_values() {
        // res(1) = C_{-1}, res(1/2) = C_{-1/2}/sqrt(pi), zeta(0) = C_0,
        // res(-1/2) = -C_{1/2}/(2 sqrt(pi)).
        for p in [cylinder(1.0, PI), frustum(), catenoid(), bump()] {
            let c = geometric_coefficients(&p, &quad()).unwrap();
            let z = full_special_values(&p, &quad()).unwrap();
            assert!((z.res_at_1 - c.c_minus1).abs() < 1e-12);
            assert!((z.res_at_half - c.c_minus_half / PI.sqrt()).abs() < 1e-12);
            assert!((z.value_at_0 - c.c_0).abs() < 1e-12);
            assert!((z.res_at_minus_half - (-c.c_half / (2.0 * PI.sqrt()))).abs() < 1e-12);
        }
    }

    #[test]
    fn trace_matches_lattice_sum() {
        // Explicit spectrum k^2 + n^2; theta(1) factors into theta-series.
        let table = build_table(&cylinder(1.0, PI), 40.0, 1e-10, &OdeSpec::default()).unwrap();
        let trace = heat_trace(&table, &[1.0, 1.5], 2.0 * PI * PI).unwrap();

        let one_sided: f64 = (1..40).map(|n| (-((n * n) as f64)).exp()).sum();
        let full: f64 = 1.0 + 2.0 * one_sided;
        let expect = full * one_sided;
        assert!((trace.theta[0] - expect).abs() < 1e-8, "{} vs {expect}", trace.theta[0]);
        assert!(trace.theta[1] < trace.theta[0]);
        assert!(trace.truncation_bound[0] < 1e-10 * trace.theta[0]);

        // Positivity and strict decrease across a wider grid.
        let grid = log_spaced(0.6, 20.0, 12);
        let trace = heat_trace(&table, &grid, 2.0 * PI * PI).unwrap();
        for pair in trace.theta.windows(2) {
            assert!(pair[0] > pair[1] && pair[1] > 0.0);
        }
    }

    #[test]
    fn trace_large_t_dominated_by_ground_state() {
        let table = build_table(&cylinder(1.0, PI), 40.0, 1e-10, &OdeSpec::default()).unwrap();
        let trace = heat_trace(&table, &[20.0], 2.0 * PI * PI).unwrap();
        let ratio = trace.theta[0] / (-20.0f64).exp();
        assert!((ratio - 1.0).abs() < 1e-8, "ratio {ratio}");
    }

    #[test]
    fn trace_coverage_error_names_minimal_t() {
        let table = build_table(&cylinder(1.0, PI), 40.0, 1e-10, &OdeSpec::default()).unwrap();
        match heat_trace(&table, &[0.01], 2.0 * PI * PI) {
            Err(Error::Coverage(msg)) => assert!(msg.contains("0.575"), "message: {msg}"),
            other => panic!("expected coverage error, got {other:?}"),
        }
    }

    #[test]
    fn fit_recovers_exact_model() {
        let t_grid = log_spaced(0.02, 0.4, 30);
        let (c1, ch, c0, chf) = (1.3, -0.7, 0.11, 0.05);
        let theta: Vec<f64> = t_grid
            .iter()
            .map(|&t| c1 / t + ch / t.sqrt() + c0 + chf * t.sqrt())
            .collect();
        let trace = HeatTrace {
            t_grid,
            theta,
            truncation_bound: vec![0.0; 30],
        };
        let fit = fit_coefficients(&trace).unwrap();
        assert!((fit.c_minus1 - c1).abs() < 1e-10);
        assert!((fit.c_minus_half - ch).abs() < 1e-10);
        assert!((fit.c_0 - c0).abs() < 1e-10);
        assert!((fit.c_half - chf).abs() < 1e-10);
        assert!(fit.residual_norm < 1e-12);
    }

    #[test]
    fn fit_rejects_small_or_narrow_grids() {
        let small = HeatTrace {
            t_grid: vec![0.1, 0.2, 0.3, 0.4, 0.5],
            theta: vec![1.0; 5],
            truncation_bound: vec![0.0; 5],
        };
        assert!(matches!(fit_coefficients(&small), Err(Error::Fit(_))));

        let narrow = HeatTrace {
            t_grid: log_spaced(0.1, 0.12, 10),
            theta: vec![1.0; 10],
            truncation_bound: vec![0.0; 10],
        };
        assert!(matches!(fit_coefficients(&narrow), Err(Error::Fit(_))));
    }

    #[test]
    fn stripe_values() {
        let s = stripe_special_values(PI).unwrap();
        assert!((s.res_at_1 - PI / 2.0).abs() < 1e-15);
        assert_eq!(s.res_at_half, -0.5);
        assert_eq!(s.value_at_0, 0.0);
        assert_eq!(s.res_at_minus_half, 0.0);
        assert!((s.zeta_prime0 - PI / 6.0).abs() < 1e-15);

        // Density at s = 2 reduces to (pi/2) zeta_R(3) (L/pi)^3.
        let d = stripe_zeta_density(PI, 2.0).unwrap();
        let expect = PI / 2.0 * zeta_r(3.0).unwrap();
        assert!((d - expect).abs() < 1e-12, "{d} vs {expect}");
    }
}
