//! The cross-validation suite behind `verify` and the acceptance tests.
//!
//! Each criterion pits a different computational route against an
//! independent reference: closed forms against the quadrature pipeline,
//! eigenvalue sums against lattice sums, the integral representation
//! against direct spectral sums, asymptotic forms against the ODE solver,
//! and heat-trace fits against geometric coefficients.

use std::f64::consts::PI;
use std::sync::OnceLock;
use std::time::Instant;

use crate::error::Result;
use crate::heatkernel::{
    fit_coefficients, geometric_coefficients, heat_trace, log_spaced, stripe_special_values,
};
use crate::ode::OdeSpec;
use crate::profile::{geometric_invariants, Interval, Profile, Shape};
use crate::quad::{integrate, KahanSum, QuadratureSpec};
use crate::special::zeta_r;
use crate::sturm::{build_table, eigenvalues, log_d, EigenvalueTable, ModeProblem};
use crate::wkb::{ln_d_asymptotic_1d, ln_d_asymptotic_2d};
use crate::zeta::{
    determinant, euler_identity_residual, full_special_values, ln_euler_phi, zeta1_integral,
    zeta1_prime0, zeta2_prime0, zeta_direct_sum,
};

/// One measured inequality; usually |residual| <= tolerance, with
/// one-sided variants for count and slope gates.
#[derive(Debug, Clone)]
pub struct CheckLine {
    pub label: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// True for |residual| <= tolerance checks; one-sided gates are
    /// excluded from the residual-ratio summary.
    pub two_sided: bool,
}

impl CheckLine {
    fn new(label: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            label: label.into(),
            residual,
            tolerance,
            passed: residual.abs() <= tolerance,
            two_sided: true,
        }
    }

    fn gate(label: impl Into<String>, value: f64, minimum: f64) -> Self {
        Self {
            label: label.into(),
            residual: value,
            tolerance: minimum,
            passed: value >= minimum,
            two_sided: false,
        }
    }

    fn error(label: impl Into<String>, err: &crate::error::Error) -> Self {
        Self {
            label: format!("{}: {err}", label.into()),
            residual: f64::NAN,
            tolerance: 0.0,
            passed: false,
            two_sided: true,
        }
    }
}

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub runtime_s: f64,
    pub runtime_limit_s: Option<f64>,
    pub checks: Vec<CheckLine>,
}

impl CriterionResult {
    pub fn summary_line(&self) -> String {
        let worst = self
            .checks
            .iter()
            .filter(|c| c.two_sided && c.residual.is_finite() && c.tolerance > 0.0)
            .map(|c| c.residual.abs() / c.tolerance)
            .fold(0.0f64, f64::max);
        format!(
            "{} criterion {:2} {:<28} checks={:2} worst_residual_ratio={:.3e} runtime={:.2}s",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.checks.len(),
            worst,
            self.runtime_s,
        )
    }
}

fn finish(
    id: usize,
    name: &'static str,
    started: Instant,
    limit: Option<f64>,
    mut checks: Vec<CheckLine>,
) -> CriterionResult {
    let runtime_s = started.elapsed().as_secs_f64();
    if let Some(limit) = limit {
        checks.push(CheckLine::new(format!("runtime < {limit} s"), runtime_s, limit));
    }
    let passed = checks.iter().all(|c| c.passed);
    CriterionResult { id, name, passed, runtime_s, runtime_limit_s: limit, checks }
}

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

fn catalog() -> [(&'static str, Profile); 4] {
    [
        ("cylinder", cylinder(1.0, PI)),
        ("frustum", frustum()),
        ("catenoid", catenoid()),
        ("cosine-bump", bump()),
    ]
}

// Cutoffs give >= 3000 weighted modes on both reference surfaces.
const CYLINDER_CUT: f64 = 2100.0;
const FRUSTUM_CUT: f64 = 2000.0;

/// Validation suite with lazily built eigenvalue tables, shared between the
/// spectral-oracle criteria.
#[derive(Default)]
pub struct VerifySuite {
    cylinder_table: OnceLock<Result<EigenvalueTable>>,
    frustum_table: OnceLock<Result<EigenvalueTable>>,
}

impl VerifySuite {
    pub fn new() -> Self {
        Self::default()
    }

    fn table_ode() -> OdeSpec {
        OdeSpec { rel_tol: 1e-9, abs_tol: 1e-11, ..OdeSpec::default() }
    }

    fn cylinder_table(&self) -> Result<&EigenvalueTable> {
        self.cylinder_table
            .get_or_init(|| build_table(&cylinder(1.0, PI), CYLINDER_CUT, 1e-10, &Self::table_ode()))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn frustum_table(&self) -> Result<&EigenvalueTable> {
        self.frustum_table
            .get_or_init(|| build_table(&frustum(), FRUSTUM_CUT, 1e-10, &Self::table_ode()))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Criterion 1: closed forms for the constant profile.
    pub fn criterion_1(&self) -> CriterionResult {
        let start = Instant::now();
        let quad = QuadratureSpec::default();
        let tol = 1e-12;
        let mut checks = Vec::new();
        for &(r, l) in &[(1.0, PI), (2.0, 1.0), (0.5, 3.0)] {
            let profile = cylinder(r, l);
            match (full_special_values(&profile, &quad), determinant(&profile, &quad)) {
                (Ok(v), Ok(rep)) => {
                    checks.push(CheckLine::new(
                        format!("R={r} L={l}: res(1) = LR/2"),
                        v.res_at_1 - l * r / 2.0,
                        tol,
                    ));
                    checks.push(CheckLine::new(
                        format!("R={r} L={l}: res(1/2) = -R/2"),
                        v.res_at_half + r / 2.0,
                        tol,
                    ));
                    checks.push(CheckLine::new(format!("R={r} L={l}: zeta(0) = 0"), v.value_at_0, tol));
                    checks.push(CheckLine::new(
                        format!("R={r} L={l}: res(-1/2) = 0"),
                        v.res_at_minus_half,
                        tol,
                    ));
                    let closed = -2.0 * ln_euler_phi((-2.0 * PI * PI * r / l).exp()).unwrap()
                        + PI * PI * r / (6.0 * l);
                    checks.push(CheckLine::new(
                        format!("R={r} L={l}: zeta'(0) closed form"),
                        rep.zeta_prime0 - closed,
                        tol,
                    ));
                }
                (Err(e), _) | (_, Err(e)) => checks.push(CheckLine::error(format!("R={r} L={l}"), &e)),
            }
        }
        finish(1, "cylinder-closed-forms", start, Some(1.0), checks)
    }

    /// Criterion 2: the modular identity for the Euler function.
    pub fn criterion_2(&self) -> CriterionResult {
        let start = Instant::now();
        let mut checks = Vec::new();
        for &r in &[0.3, 1.0, 2.0, 5.0] {
            match euler_identity_residual(r) {
                Ok(resid) => checks.push(CheckLine::new(format!("identity residual at r={r}"), resid, 1e-12)),
                Err(e) => checks.push(CheckLine::error(format!("r={r}"), &e)),
            }
        }
        finish(2, "euler-identity", start, Some(0.1), checks)
    }

    /// Criterion 3: determinant internal consistency on the whole catalog.
    pub fn criterion_3(&self) -> CriterionResult {
        let start = Instant::now();
        let quad = QuadratureSpec::default();
        let mut checks = Vec::new();
        for (name, profile) in catalog() {
            let outcome = (|| -> Result<(f64, f64)> {
                let rep = determinant(&profile, &quad)?;
                let z1p = zeta1_prime0(&profile, &quad)?;
                let z2p = zeta2_prime0(&profile, &quad)?;
                Ok((rep.zeta_prime0 - (z1p + z2p.direct), z2p.residual))
            })();
            match outcome {
                Ok((direct_vs_parts, form_residual)) => {
                    checks.push(CheckLine::new(
                        format!("{name}: zeta'(0) vs zeta_1'(0) + zeta_2'(0)"),
                        direct_vs_parts,
                        1e-10,
                    ));
                    checks.push(CheckLine::new(
                        format!("{name}: two zeta_2'(0) forms agree"),
                        form_residual,
                        1e-10,
                    ));
                }
                Err(e) => checks.push(CheckLine::error(name, &e)),
            }
        }
        finish(3, "determinant-consistency", start, Some(5.0), checks)
    }

    /// Criterion 4: heat-kernel coefficients map onto the zeta values.
    pub fn criterion_4(&self) -> CriterionResult {
        let start = Instant::now();
        let quad = QuadratureSpec::default();
        let sqrt_pi = PI.sqrt();
        let mut checks = Vec::new();
        for (name, profile) in catalog() {
            match (geometric_coefficients(&profile, &quad), full_special_values(&profile, &quad)) {
                (Ok(c), Ok(v)) => {
                    checks.push(CheckLine::new(format!("{name}: res(1) = C_-1"), v.res_at_1 - c.c_minus1, 1e-12));
                    checks.push(CheckLine::new(
                        format!("{name}: res(1/2) = C_-1/2 / sqrt(pi)"),
                        v.res_at_half - c.c_minus_half / sqrt_pi,
                        1e-12,
                    ));
                    checks.push(CheckLine::new(format!("{name}: zeta(0) = C_0"), v.value_at_0 - c.c_0, 1e-12));
                    checks.push(CheckLine::new(
                        format!("{name}: res(-1/2) = -C_1/2 / (2 sqrt(pi))"),
                        v.res_at_minus_half + c.c_half / (2.0 * sqrt_pi),
                        1e-12,
                    ));
                }
                (Err(e), _) | (_, Err(e)) => checks.push(CheckLine::error(name, &e)),
            }
        }
        finish(4, "heat-kernel-dictionary", start, None, checks)
    }

    /// Criterion 5: Pruefer/bisection spectrum against the exact cylinder.
    pub fn criterion_5(&self) -> CriterionResult {
        let start = Instant::now();
        let ode = OdeSpec::with_rel_tol(1e-12);
        let profile = cylinder(1.0, PI);
        let mut worst = 0.0f64;
        let mut checks = Vec::new();
        'outer: for k in 0..=10u32 {
            let mode = ModeProblem::new(&profile, k);
            match eigenvalues(&mode, 10, 1e-11, &ode) {
                Ok(ls) => {
                    for (i, lambda) in ls.iter().enumerate() {
                        let exact = (k as f64).powi(2) + ((i + 1) as f64).powi(2);
                        worst = worst.max((lambda - exact).abs() / exact);
                    }
                }
                Err(e) => {
                    checks.push(CheckLine::error(format!("k={k}"), &e));
                    break 'outer;
                }
            }
        }
        checks.push(CheckLine::new(
            "max relative eigenvalue error, k <= 10, n <= 10",
            worst,
            1e-9,
        ));
        finish(5, "spectrum-oracle", start, Some(10.0), checks)
    }

    /// Criterion 6: direct zeta sums against a lattice oracle and the
    /// residue at 1 by Richardson extrapolation.
    pub fn criterion_6(&self) -> CriterionResult {
        let start = Instant::now();
        let quad = QuadratureSpec::default();
        let mut checks = Vec::new();

        let outcome = (|| -> Result<()> {
            let cyl = cylinder(1.0, PI);
            let cyl_table = self.cylinder_table()?;
            let cyl_area = geometric_invariants(&cyl, &quad)?.area;
            let engine = zeta_direct_sum(cyl_table, 2.0, cyl_area)?;
            let oracle = cylinder_lattice_zeta(2.0, 3000);
            checks.push(CheckLine::new(
                "cylinder s=2: table sum vs lattice double sum",
                engine.value - oracle,
                1e-4,
            ));
            // Companion points: at s = 3 both tails are negligible; at
            // s = 1.5 the leading-order Weyl tail leaves a boundary-term
            // error of order lambda_cut^{-1}, hence the looser tolerance.
            let engine = zeta_direct_sum(cyl_table, 3.0, cyl_area)?;
            checks.push(CheckLine::new(
                "cylinder s=3: table sum vs lattice double sum",
                engine.value - cylinder_lattice_zeta(3.0, 1500),
                1e-6,
            ));
            let engine = zeta_direct_sum(cyl_table, 1.5, cyl_area)?;
            let oracle_15 = cylinder_lattice_zeta(1.5, 3000) + PI * 3000f64.powf(-1.0);
            checks.push(CheckLine::new(
                "cylinder s=1.5: table sum vs lattice double sum",
                engine.value - oracle_15,
                1e-3,
            ));

            for (name, profile, table) in [
                ("cylinder", &cyl, cyl_table),
                ("frustum", &frustum(), self.frustum_table()?),
            ] {
                let v = full_special_values(profile, &quad)?;
                let area = geometric_invariants(profile, &quad)?.area;
                let mut points = Vec::new();
                for &h in &[0.05, 0.02, 0.01] {
                    let sum = zeta_direct_sum(table, 1.0 + h, area)?;
                    points.push((h, h * sum.value));
                }
                let extrapolated = lagrange_at_zero(&points);
                checks.push(CheckLine::new(
                    format!("{name}: (s-1) zeta(s) -> res(1), Richardson in s-1"),
                    (extrapolated - v.res_at_1) / v.res_at_1,
                    0.02,
                ));
            }
            Ok(())
        })();
        if let Err(e) = outcome {
            checks.push(CheckLine::error("zeta-sum oracle", &e));
        }
        finish(6, "zeta-sum-oracle", start, Some(60.0), checks)
    }

    /// Criterion 7: the integral representation of zeta_1 against direct
    /// k = 0 spectral sums.
    pub fn criterion_7(&self) -> CriterionResult {
        let start = Instant::now();
        let quad = QuadratureSpec::default();
        let ode = OdeSpec::default();
        let mut checks = Vec::new();
        let outcome = (|| -> Result<()> {
            for (name, profile) in [("cylinder", cylinder(1.0, PI)), ("frustum", frustum())] {
                let oracle_ode = OdeSpec { rel_tol: 1e-11, abs_tol: 1e-13, ..OdeSpec::default() };
                let lambdas = eigenvalues(&ModeProblem::new(&profile, 0), 300, 1e-11, &oracle_ode)?;
                for &s in &[0.75, 0.9] {
                    let via_integral = zeta1_integral(&profile, s, &ode, &quad)?;
                    let via_sum = mode0_sum_with_tail(&profile, &lambdas, s, &quad)?;
                    checks.push(CheckLine::new(
                        format!("{name} s={s}: integral representation vs k=0 sum"),
                        via_integral - via_sum,
                        1e-4,
                    ));
                }
            }
            let via_integral = zeta1_integral(&cylinder(1.0, PI), 0.75, &ode, &quad)?;
            checks.push(CheckLine::new(
                "cylinder s=0.75 equals zeta_R(3/2)",
                via_integral - zeta_r(1.5)?,
                1e-4,
            ));
            Ok(())
        })();
        if let Err(e) = outcome {
            checks.push(CheckLine::error("zeta_1 integral", &e));
        }
        finish(7, "zeta1-integral-representation", start, None, checks)
    }

    /// Criterion 8: the asymptotic forms of ln D converge at the expected
    /// rate (log-log slope at most -0.9).
    pub fn criterion_8(&self) -> CriterionResult {
        let start = Instant::now();
        let quad = QuadratureSpec::default();
        let ode = OdeSpec { rel_tol: 1e-11, abs_tol: 1e-13, ..OdeSpec::default() };
        let profile = frustum();
        let mut checks = Vec::new();
        let outcome = (|| -> Result<()> {
            let zs = [10.0, 20.0, 40.0, 80.0];
            let mut errs_1d = Vec::new();
            for &z in &zs {
                let asym = ln_d_asymptotic_1d(&profile, z, &quad)?;
                let exact = log_d(&ModeProblem::new(&profile, 0), z * z, &ode)?;
                errs_1d.push((asym - exact).abs());
            }
            let slope_1d = log_log_slope(&zs, &errs_1d);
            checks.push(CheckLine::gate_slope("1d: ln D asymptotics in z", slope_1d, -0.9));

            let ks = [10u32, 20, 40, 80];
            let mut errs_2d = Vec::new();
            for &k in &ks {
                let asym = ln_d_asymptotic_2d(&profile, k, 1.0, &quad)?;
                let exact = log_d(&ModeProblem::new(&profile, k), (k as f64).powi(2), &ode)?;
                errs_2d.push((asym - exact).abs());
            }
            let kfs: Vec<f64> = ks.iter().map(|&k| k as f64).collect();
            let slope_2d = log_log_slope(&kfs, &errs_2d);
            checks.push(CheckLine::gate_slope("2d: ln D asymptotics in k at z=1", slope_2d, -0.9));
            Ok(())
        })();
        if let Err(e) = outcome {
            checks.push(CheckLine::error("asymptotic match", &e));
        }
        finish(8, "wkb-asymptotic-slopes", start, None, checks)
    }

    /// Criterion 9: heat-trace fits recover the geometric coefficients.
    pub fn criterion_9(&self) -> CriterionResult {
        let start = Instant::now();
        let quad = QuadratureSpec::default();
        let mut checks = Vec::new();
        let outcome = (|| -> Result<()> {
            for (name, profile, table) in [
                ("cylinder", cylinder(1.0, PI), self.cylinder_table()?),
                ("frustum", frustum(), self.frustum_table()?),
            ] {
                checks.push(CheckLine::gate(
                    format!("{name}: weighted modes below cutoff"),
                    table.weighted_count() as f64,
                    3000.0,
                ));
                let area = geometric_invariants(&profile, &quad)?.area;
                let geo = geometric_coefficients(&profile, &quad)?;
                // Window: lower edge where the truncation bound reaches
                // 1e-10 of the trace, upper edge half the ground-state time.
                let t_min = 1.05 * (1e10f64).ln() / table.lambda_cut;
                let lambda_01 = table.entries[0].lambda;
                let t_max = 0.5 / lambda_01;
                let trace = heat_trace(table, &log_spaced(t_min, t_max, 30), area)?;
                let fit = fit_coefficients(&trace)?;
                checks.push(CheckLine::new(
                    format!("{name}: fitted C_-1 within 2%"),
                    fit.c_minus1 / geo.c_minus1 - 1.0,
                    0.02,
                ));
                checks.push(CheckLine::new(
                    format!("{name}: fitted C_-1/2 within 5%"),
                    fit.c_minus_half / geo.c_minus_half - 1.0,
                    0.05,
                ));
            }
            Ok(())
        })();
        if let Err(e) = outcome {
            checks.push(CheckLine::error("heat fit", &e));
        }
        finish(9, "heat-trace-fit", start, Some(300.0), checks)
    }

    /// Criterion 10: exactness and symmetry of the special values.
    pub fn criterion_10(&self) -> CriterionResult {
        let start = Instant::now();
        let quad = QuadratureSpec::default();
        let mut checks = Vec::new();
        let outcome = (|| -> Result<()> {
            for (name, profile) in catalog() {
                let v = full_special_values(&profile, &quad)?;
                checks.push(CheckLine::new(format!("{name}: zeta(0) exactly 0"), v.value_at_0, 0.0));
                checks.push(CheckLine::new(
                    format!("{name}: zeta_1(0) exactly -1/2"),
                    v.zeta1.value_at_0 + 0.5,
                    0.0,
                ));

                let base = determinant(&profile, &quad)?.zeta_prime0;
                for &c in &[2.0, 0.5] {
                    let scaled = determinant(&profile.scaled(c)?, &quad)?.zeta_prime0;
                    checks.push(CheckLine::new(
                        format!("{name}: zeta'(0) scale invariance, c={c}"),
                        scaled - base,
                        1e-10,
                    ));
                }

                let refl = full_special_values(&profile.reflected()?, &quad)?;
                let pairs = [
                    ("res(1)", v.res_at_1, refl.res_at_1),
                    ("res(1/2)", v.res_at_half, refl.res_at_half),
                    ("zeta(0)", v.value_at_0, refl.value_at_0),
                    ("res(-1/2)", v.res_at_minus_half, refl.res_at_minus_half),
                    ("zeta_1(-1)", v.zeta1_at_minus_1, refl.zeta1_at_minus_1),
                ];
                for (what, orig, mirrored) in pairs {
                    checks.push(CheckLine::new(
                        format!("{name}: reflection invariance of {what}"),
                        mirrored - orig,
                        1e-10,
                    ));
                }
            }

            // (R, L) swap symmetry of zeta_2'(0) for f = R/pi on [0, L].
            let (r, l) = (2.0, 1.3);
            let za = zeta2_prime0(
                &Profile::new(Shape::Constant { c: r / PI }, Interval::new(0.0, l)?)?,
                &quad,
            )?;
            let zb = zeta2_prime0(
                &Profile::new(Shape::Constant { c: l / PI }, Interval::new(0.0, r)?)?,
                &quad,
            )?;
            checks.push(CheckLine::new(
                format!("cylinder (R,L)=({r},{l}) swap symmetry of zeta_2'(0)"),
                za.modular - zb.modular,
                1e-12,
            ));
            Ok(())
        })();
        if let Err(e) = outcome {
            checks.push(CheckLine::error("invariance", &e));
        }
        finish(10, "invariance-suite", start, None, checks)
    }

    /// Criterion 11: the planar-stripe density emerges in the wide-cylinder
    /// limit. In doubles the literal difference zeta'(0)/R - pi^2/(6L)
    /// saturates at rounding (~1e-16) for R >= 10 while the stated bound
    /// 3 e^{-2 pi^2 R/L} keeps falling, so the deviation is split into its
    /// two parts: the Euler-product term, which must obey the exponential
    /// bound at full precision, and the remaining terms, which must equal
    /// pi^2/(6L) to machine accuracy. At R = 5 the literal bound is wide
    /// enough to check directly as well.
    pub fn criterion_11(&self) -> CriterionResult {
        let start = Instant::now();
        let quad = QuadratureSpec::default();
        let l = PI;
        let stripe = stripe_special_values(l).unwrap();
        let mut checks = Vec::new();
        for &r in &[5.0, 10.0, 20.0] {
            match determinant(&cylinder(r, l), &quad) {
                Ok(rep) => {
                    let bound = 3.0 * (-2.0 * PI * PI * r / l).exp();
                    let phi_term = -2.0 * ln_euler_phi(rep.q).unwrap();
                    checks.push(CheckLine::new(
                        format!("R={r}: Euler-product term obeys exponential bound"),
                        phi_term / r,
                        bound,
                    ));
                    checks.push(CheckLine::new(
                        format!("R={r}: remaining terms give zeta_c'(0) = pi^2/(6L)"),
                        (rep.zeta_prime0 - phi_term) / r - stripe.zeta_prime0,
                        1e-12,
                    ));
                    if r == 5.0 {
                        checks.push(CheckLine::new(
                            format!("R={r}: literal |zeta'(0)/R - pi^2/(6L)| within bound"),
                            rep.zeta_prime0 / r - stripe.zeta_prime0,
                            bound,
                        ));
                    }
                }
                Err(e) => checks.push(CheckLine::error(format!("R={r}"), &e)),
            }
        }
        finish(11, "stripe-limit", start, None, checks)
    }

    pub fn run_all(&self) -> Vec<CriterionResult> {
        vec![
            self.criterion_1(),
            self.criterion_2(),
            self.criterion_3(),
            self.criterion_4(),
            self.criterion_5(),
            self.criterion_6(),
            self.criterion_7(),
            self.criterion_8(),
            self.criterion_9(),
            self.criterion_10(),
            self.criterion_11(),
        ]
    }
}

impl CheckLine {
    fn gate_slope(label: &str, slope: f64, maximum: f64) -> Self {
        Self {
            label: format!("{label} (slope {slope:.3})"),
            residual: slope,
            tolerance: maximum,
            passed: slope <= maximum,
            two_sided: false,
        }
    }
}

/// Independent lattice oracle: sum over k in Z, n >= 1 of (k^2 + n^2)^{-s}
/// with a box cut at `m`; the dropped mass is below pi m^{2-2s}/(2s-2),
/// about 2e-7 for s = 2, m = 3000.
fn cylinder_lattice_zeta(s: f64, m: i64) -> f64 {
    let mut acc = KahanSum::new();
    for n in 1..=m {
        let nn = (n * n) as f64;
        acc.add(nn.powf(-s));
    }
    for k in 1..=m {
        let kk = (k * k) as f64;
        for n in 1..=m {
            let nn = (n * n) as f64;
            acc.add(2.0 * (kk + nn).powf(-s));
        }
    }
    acc.value()
}

/// Quadratic Lagrange extrapolation of (h, v(h)) samples to h = 0.
fn lagrange_at_zero(points: &[(f64, f64)]) -> f64 {
    let mut total = 0.0;
    for (i, &(hi, vi)) in points.iter().enumerate() {
        let mut weight = 1.0;
        for (j, &(hj, _)) in points.iter().enumerate() {
            if i != j {
                weight *= hj / (hj - hi);
            }
        }
        total += weight * vi;
    }
    total
}

/// sum_n lambda_{0,n}^{-s} over the computed slice plus an integral tail.
/// The tail uses lambda_n ~ beta (n^2 + c) with beta = (pi/arc)^2 and c
/// fitted from the last computed eigenvalues, integrated by the midpoint
/// rule from n = N + 1/2 (the w-substitution flattens the integrand).
fn mode0_sum_with_tail(
    profile: &Profile,
    lambdas: &[f64],
    s: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let mut head = KahanSum::new();
    for &l in lambdas {
        head.add(l.powf(-s));
    }
    let dom = profile.domain();
    let arc = integrate(
        |x| {
            let (_, fp, _) = profile.eval_unchecked(x);
            (1.0 + fp * fp).sqrt()
        },
        dom.a,
        dom.b,
        quad,
    )?;
    let beta = (PI / arc) * (PI / arc);
    let n_terms = lambdas.len();
    let fitted: f64 = lambdas[n_terms - 20..]
        .iter()
        .zip(n_terms - 19..)
        .map(|(l, n)| l - beta * (n as f64) * (n as f64))
        .sum::<f64>()
        / 20.0;
    let c = fitted / beta;
    let m = n_terms as f64 + 0.5;
    let t_int = integrate(
        |w| 4.0 * w.powf(8.0 * s - 5.0) * (1.0 + c * w.powi(8) / (m * m)).powf(-s),
        0.0,
        1.0,
        quad,
    )?;
    Ok(head.value() + beta.powf(-s) * m.powf(1.0 - 2.0 * s) * t_int)
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
