//! Residues, special values and the regularized determinant of the spectral
//! zeta function, with independent numerical validators.
//!
//! The zeta function splits into a one-dimensional part (the k = 0 mode) and
//! a two-dimensional part (the k-sum). Both have closed-form residues and
//! values at s = 1, 1/2, 0, -1/2 in terms of geometric functionals of the
//! profile, and their derivatives at 0 combine into a closed determinant
//! formula built on the Euler product phi(q) = prod (1 - q^k). Everything
//! closed-form here is cross-checked: the two printed forms of the
//! two-dimensional derivative against each other (a live test of the modular
//! identity for phi), the full derivative against the sum of its parts, and
//! the residues against direct eigenvalue sums.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::ode::OdeSpec;
use crate::profile::{geometric_invariants, GeometricInvariants, Profile};
use crate::quad::{KahanSum, QuadratureSpec};
use crate::sturm::{log_d, EigenvalueTable, ModeProblem};
use crate::wkb::wkb1;

/// Truncation threshold for the Euler product: factors with
/// |ln(1 - q^k)| below this no longer move a double.
const EULER_TERM_CUTOFF: f64 = 1e-17;

/// ln phi(q) = sum_{k>=1} ln(1 - q^k) for 0 <= q < 1.
pub fn ln_euler_phi(q: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&q) {
        return Err(Error::Domain(format!("euler_phi requires 0 <= q < 1, got {q}")));
    }
    let mut sum = KahanSum::new();
    let mut qk = q;
    for _ in 0..200_000 {
        let term = (-qk).ln_1p();
        if term.abs() < EULER_TERM_CUTOFF {
            break;
        }
        sum.add(term);
        qk *= q;
    }
    Ok(sum.value())
}

/// Euler function phi(q) = prod_{k>=1} (1 - q^k).
pub fn euler_phi(q: f64) -> Result<f64> {
    Ok(ln_euler_phi(q)?.exp())
}

/// Residual of the modular identity
/// ln phi(e^{-2 pi r}) - ln phi(e^{-2 pi / r}) = [ (pi/6)(r - 1/r) - ln r ] / 2,
/// which must vanish for every r > 0.
pub fn euler_identity_residual(r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("identity requires r > 0, got {r}")));
    }
    let lhs = ln_euler_phi((-2.0 * PI * r).exp())? - ln_euler_phi((-2.0 * PI / r).exp())?;
    Ok(lhs - 0.5 * (PI / 6.0 * (r - 1.0 / r) - r.ln()))
}

/// Special values of the one-dimensional part.
#[derive(Debug, Clone, Copy)]
pub struct Zeta1Special {
    /// Residue at s = 1/2: arc_length / (2 pi).
    pub res_at_half: f64,
    /// Value at 0; -1/2 for every profile.
    pub value_at_0: f64,
    /// Residue at s = -1/2: (int s1) / (2 pi).
    pub res_at_minus_half: f64,
    /// Value at -1: (t1(a) + t1(b)) / 4.
    pub value_at_minus_1: f64,
}

pub fn zeta1_special(profile: &Profile, quad: &QuadratureSpec) -> Result<Zeta1Special> {
    let inv = geometric_invariants(profile, quad)?;
    let dom = profile.domain();
    let t1a = wkb1(profile, dom.a)?.t1;
    let t1b = wkb1(profile, dom.b)?.t1;
    Ok(Zeta1Special {
        res_at_half: inv.arc_length / (2.0 * PI),
        value_at_0: -0.5,
        res_at_minus_half: inv.s1_integral / (2.0 * PI),
        value_at_minus_1: 0.25 * (t1a + t1b),
    })
}

/// zeta_1'(0) = -(ln f(a) + ln f(b))/2 - ln(2A).
pub fn zeta1_prime0(profile: &Profile, quad: &QuadratureSpec) -> Result<f64> {
    let inv = geometric_invariants(profile, quad)?;
    Ok(-0.5 * (inv.radius_a.ln() + inv.radius_b.ln()) - (2.0 * inv.a_integral).ln())
}

/// Special values of the two-dimensional part.
#[derive(Debug, Clone, Copy)]
pub struct Zeta2Special {
    /// Residue at 1: (1/2) int f sqrt(1 + f'^2).
    pub res_at_1: f64,
    /// Residue at 1/2: -arc_length/(2 pi) - (f(a) + f(b))/4.
    pub res_at_half: f64,
    /// Value at 0; +1/2 for every profile.
    pub value_at_0: f64,
    /// Residue at -1/2.
    pub res_at_minus_half: f64,
}

/// Boundary contribution to the residue at -1/2 from one endpoint.
fn boundary_minus_half_term(profile: &Profile, x: f64) -> Result<f64> {
    let (f, fp, fpp) = profile.eval(x)?;
    let r2 = 1.0 + fp * fp;
    Ok(1.0 / (32.0 * f) * (0.125 * fp * fp / r2 + fpp * f / (r2 * r2)))
}

pub fn zeta2_special(profile: &Profile, quad: &QuadratureSpec) -> Result<Zeta2Special> {
    let inv = geometric_invariants(profile, quad)?;
    let dom = profile.domain();
    let res_at_1 = 0.5 * crate::quad::integrate(
        |x| {
            let (f, fp, _) = profile.eval_unchecked(x);
            f * (1.0 + fp * fp).sqrt()
        },
        dom.a,
        dom.b,
        quad,
    )?;
    Ok(Zeta2Special {
        res_at_1,
        res_at_half: -inv.arc_length / (2.0 * PI) - 0.25 * (inv.radius_a + inv.radius_b),
        value_at_0: 0.5,
        res_at_minus_half: -inv.s1_integral / (2.0 * PI)
            - boundary_minus_half_term(profile, dom.a)?
            - boundary_minus_half_term(profile, dom.b)?,
    })
}

/// Residues and values of the full zeta function at the distinguished
/// points, with the per-part breakdown.
#[derive(Debug, Clone, Copy)]
pub struct ZetaSpecialValues {
    pub res_at_1: f64,
    pub res_at_half: f64,
    pub value_at_0: f64,
    pub res_at_minus_half: f64,
    /// zeta_1(-1); the two-dimensional counterpart is not available at the
    /// retained expansion order, so the full value at -1 is not formed.
    pub zeta1_at_minus_1: f64,
    pub zeta1: Zeta1Special,
    pub zeta2: Zeta2Special,
}

/// Closed-form special values of the full zeta function, cross-checked
/// against the sum of the two parts to 1e-12.
pub fn full_special_values(profile: &Profile, quad: &QuadratureSpec) -> Result<ZetaSpecialValues> {
    let z1 = zeta1_special(profile, quad)?;
    let z2 = zeta2_special(profile, quad)?;
    let dom = profile.domain();
    let (fa, _, _) = profile.eval_unchecked(dom.a);
    let (fb, _, _) = profile.eval_unchecked(dom.b);

    let res_at_half = -0.25 * (fa + fb);
    let res_at_minus_half =
        -boundary_minus_half_term(profile, dom.a)? - boundary_minus_half_term(profile, dom.b)?;
    let value_at_0 = z1.value_at_0 + z2.value_at_0;

    let checks = [
        (res_at_half, z1.res_at_half + z2.res_at_half, "res at 1/2"),
        (res_at_minus_half, z1.res_at_minus_half + z2.res_at_minus_half, "res at -1/2"),
        (0.0, value_at_0, "value at 0"),
    ];
    for (closed, parts, what) in checks {
        if (closed - parts).abs() > 1e-12 * closed.abs().max(1.0) {
            return Err(Error::Internal(format!(
                "{what}: closed form {closed} vs part sum {parts}"
            )));
        }
    }

    Ok(ZetaSpecialValues {
        res_at_1: z2.res_at_1,
        res_at_half,
        value_at_0,
        res_at_minus_half,
        zeta1_at_minus_1: z1.value_at_minus_1,
        zeta1: z1,
        zeta2: z2,
    })
}

/// Both printed forms of zeta_2'(0) and their disagreement.
#[derive(Debug, Clone, Copy)]
pub struct Zeta2Prime {
    /// Fast-converging modular form, built on phi(e^{-2 pi^2 / A}).
    pub modular: f64,
    /// Direct form, built on phi(e^{-2A}).
    pub direct: f64,
    /// |direct - modular|; bounded by 1e-10 or an error is raised.
    pub residual: f64,
}

pub fn zeta2_prime0(profile: &Profile, quad: &QuadratureSpec) -> Result<Zeta2Prime> {
    let inv = geometric_invariants(profile, quad)?;
    zeta2_prime0_from(&inv)
}

fn zeta2_prime0_from(inv: &GeometricInvariants) -> Result<Zeta2Prime> {
    let a = inv.a_integral;
    let boundary = 0.5 * (inv.radius_a.ln() + inv.radius_b.ln());
    let curvature = inv.curv1_integral / 6.0 + inv.curv2_integral / 2.0;
    let direct = -2.0 * ln_euler_phi((-2.0 * a).exp())? + a / 6.0
        - 2.0 * crate::special::zeta_r_prime_at_0()
        + boundary
        + curvature;
    let modular = -2.0 * ln_euler_phi((-2.0 * PI * PI / a).exp())?
        + PI * PI / (6.0 * a)
        + (2.0 * a).ln()
        + boundary
        + curvature;
    let residual = (direct - modular).abs();
    if residual > 1e-10 {
        return Err(Error::Internal(format!(
            "zeta_2'(0) forms disagree by {residual}: direct {direct}, modular {modular}"
        )));
    }
    Ok(Zeta2Prime { modular, direct, residual })
}

/// Determinant data: det = exp(-zeta'(0)) with
/// zeta'(0) = -2 ln phi(e^{-2 pi^2 / A}) + pi^2/(6A)
///          + (1/6) int f'^2/(f sqrt(1+f'^2)) + (1/2) int f''/(1+f'^2)^{3/2}.
#[derive(Debug, Clone, Copy)]
pub struct DeterminantReport {
    /// A = int sqrt(1 + f'^2)/f.
    pub a_integral: f64,
    /// q = e^{-2 pi^2 / A}.
    pub q: f64,
    pub euler_phi_q: f64,
    pub zeta1_prime0: f64,
    pub zeta2_prime0: f64,
    pub zeta_prime0: f64,
    pub log_det: f64,
    pub det: f64,
}

pub fn determinant(profile: &Profile, quad: &QuadratureSpec) -> Result<DeterminantReport> {
    let inv = geometric_invariants(profile, quad)?;
    let a = inv.a_integral;
    let q = (-2.0 * PI * PI / a).exp();
    let curvature = inv.curv1_integral / 6.0 + inv.curv2_integral / 2.0;
    let zeta_prime0 = -2.0 * ln_euler_phi(q)? + PI * PI / (6.0 * a) + curvature;

    let z1p = -0.5 * (inv.radius_a.ln() + inv.radius_b.ln()) - (2.0 * a).ln();
    let z2p = zeta2_prime0_from(&inv)?;
    let parts = z1p + z2p.modular;
    if (zeta_prime0 - parts).abs() > 1e-10 * zeta_prime0.abs().max(1.0) {
        return Err(Error::Internal(format!(
            "zeta'(0) direct form {zeta_prime0} vs part sum {parts}"
        )));
    }

    Ok(DeterminantReport {
        a_integral: a,
        q,
        euler_phi_q: euler_phi(q)?,
        zeta1_prime0: z1p,
        zeta2_prime0: z2p.modular,
        zeta_prime0,
        log_det: -zeta_prime0,
        det: (-zeta_prime0).exp(),
    })
}

/// Direct eigenvalue sum for zeta(s), s > 1, with a Weyl-density tail.
#[derive(Debug, Clone, Copy)]
pub struct DirectSum {
    /// Head sum plus tail estimate.
    pub value: f64,
    /// The tail estimate itself, also a bound on the truncation scale.
    pub tail_bound: f64,
}

/// Minimum weighted mode count for a meaningful tail estimate.
const DIRECT_SUM_MIN_MODES: usize = 1000;

/// sum lambda^{-s} over the table (degeneracy 2 for k >= 1) plus the
/// integral tail (area/(4 pi)) Lambda_cut^{1-s}/(s-1).
pub fn zeta_direct_sum(table: &EigenvalueTable, s: f64, area: f64) -> Result<DirectSum> {
    if !(s > 1.0) {
        return Err(Error::Domain(format!("direct sum converges for s > 1, got {s}")));
    }
    let covered = table.weighted_count();
    if covered < DIRECT_SUM_MIN_MODES {
        return Err(Error::Coverage(format!(
            "table covers {covered} weighted modes, need >= {DIRECT_SUM_MIN_MODES}"
        )));
    }
    let head = table.weighted_sum(|l| l.powf(-s));
    let tail = area / (4.0 * PI) * table.lambda_cut.powf(1.0 - s) / (s - 1.0);
    Ok(DirectSum { value: head + tail, tail_bound: tail })
}

/// Numerical evaluation of the one-dimensional zeta function on the strip
/// 1/2 < s < 1 from its integral representation
///
/// ```text
/// zeta_1(s) = sin(pi s)/pi int_0^infty y^{-s} d/dy ln D_0(-y) dy,
/// ```
///
/// with the derivative taken by central differences of `log_d` (relative
/// step 1e-5, one Richardson halving). On y in (0, 1] the substitution
/// y = u^{1/(1-s)} flattens the endpoint singularity; on y > 1 (z = sqrt(y))
/// the asymptotic derivative int s_{-1} - 1/z - (int s1)/z^2 is subtracted
/// and integrated in closed form, the remainder decaying like z^{-2s-3}.
pub fn zeta1_integral(
    profile: &Profile,
    s: f64,
    ode: &OdeSpec,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if !(s > 0.5 && s < 1.0) {
        return Err(Error::Domain(format!("integral representation needs 1/2 < s < 1, got {s}")));
    }
    let mode = ModeProblem::new(profile, 0);
    let dom = profile.domain();

    // d/dy ln D_0(-y) by central differences with Richardson halving.
    let h0 = 1e-5;
    let deriv_y = |y: f64| -> Result<f64> {
        let fd = |h: f64| -> Result<f64> {
            Ok((log_d(&mode, y * (1.0 + h), ode)? - log_d(&mode, y * (1.0 - h), ode)?)
                / (2.0 * y * h))
        };
        let coarse = fd(h0)?;
        let fine = fd(0.5 * h0)?;
        Ok((4.0 * fine - coarse) / 3.0)
    };

    // Part 1: int_0^1 y^{-s} g(y) dy = p int_0^1 g(u^p) du, p = 1/(1-s).
    // g extends continuously to y = 0, so nodes whose image underflows are
    // clamped to a representable floor.
    let p = 1.0 / (1.0 - s);
    let inner_01 = composite_gk15(
        &|u: f64| deriv_y(u.powf(p).max(1e-280)),
        &even_panels(0.0, 1.0, 8),
    )?;
    let part_01 = p * inner_01;

    // Part 2: subtracted integral over z >= 1 plus the closed-form pieces.
    let i_sm1 = crate::quad::integrate(
        |x| wkb1(profile, x).unwrap().s_minus1,
        dom.a,
        dom.b,
        quad,
    )?;
    let i_s1 = crate::quad::integrate(|x| wkb1(profile, x).unwrap().s1, dom.a, dom.b, quad)?;
    let deriv_z = |z: f64| -> Result<f64> {
        let fd = |h: f64| -> Result<f64> {
            let zp = z * (1.0 + h);
            let zm = z * (1.0 - h);
            Ok((log_d(&mode, zp * zp, ode)? - log_d(&mode, zm * zm, ode)?) / (2.0 * z * h))
        };
        let coarse = fd(h0)?;
        let fine = fd(0.5 * h0)?;
        Ok((4.0 * fine - coarse) / 3.0)
    };
    let z_max = 50.0;
    // tau = 1/z; the subtracted integrand is ~ tau^{2s+1} near tau = 0.
    let subtracted = composite_gk15(
        &|tau: f64| {
            let z = 1.0 / tau;
            let d_asym = i_sm1 - 1.0 / z - i_s1 / (z * z);
            Ok(tau.powf(2.0 * s - 2.0) * (deriv_z(z)? - d_asym))
        },
        &even_panels(1.0 / z_max, 1.0, 6),
    )?;
    let analytic = i_sm1 / (2.0 * s - 1.0) - 1.0 / (2.0 * s) - i_s1 / (2.0 * s + 1.0);
    let part_1inf = subtracted + analytic;

    Ok((PI * s).sin() / PI * (part_01 + part_1inf))
}

fn even_panels(a: f64, b: f64, n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let l = a + (b - a) * i as f64 / n as f64;
            let r = a + (b - a) * (i + 1) as f64 / n as f64;
            (l, r)
        })
        .collect()
}

// Fixed composite 15-point Kronrod evaluation over prescribed panels, for
// integrands carrying correlated solver noise that adaptive refinement
// would chase without converging.
fn composite_gk15(f: &dyn Fn(f64) -> Result<f64>, panels: &[(f64, f64)]) -> Result<f64> {
    #[allow(clippy::excessive_precision)]
    const XGK: [f64; 7] = [
        0.991_455_371_120_812_639_206_854_697_526_33,
        0.949_107_912_342_758_524_526_189_684_047_85,
        0.864_864_423_359_769_072_789_712_788_640_93,
        0.741_531_185_599_394_439_863_864_773_280_79,
        0.586_087_235_467_691_130_294_144_838_258_73,
        0.405_845_151_377_397_166_906_606_412_076_96,
        0.207_784_955_007_898_467_600_689_403_773_24,
    ];
    #[allow(clippy::excessive_precision)]
    const WGK: [f64; 8] = [
        0.022_935_322_010_529_224_963_732_008_058_97,
        0.063_092_092_629_978_553_290_700_663_189_20,
        0.104_790_010_322_250_183_839_876_322_541_52,
        0.140_653_259_715_525_918_745_189_590_510_24,
        0.169_004_726_639_267_902_826_583_426_598_55,
        0.190_350_578_064_785_409_913_256_402_421_01,
        0.204_432_940_075_298_892_414_161_999_234_65,
        0.209_482_141_084_727_828_012_999_174_891_71,
    ];
    let mut total = KahanSum::new();
    for &(a, b) in panels {
        let center = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut panel = f(center)? * WGK[7];
        for (j, x) in XGK.iter().enumerate() {
            let dx = half * x;
            panel += WGK[j] * (f(center - dx)? + f(center + dx)?);
        }
        total.add(panel * half);
    }
    Ok(total.value())
}
