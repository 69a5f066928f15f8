//! Generating profiles f on [a, b] and their geometric functionals.
//!
//! A surface of revolution is described by a positive generating function f
//! whose graph is revolved around the x-axis. Every downstream formula needs
//! f, f' and f'' pointwise, so profiles come from a small analytic catalog
//! with exact derivatives; tabulated, spline or piecewise profiles are
//! deliberately unsupported because numerical differentiation of f'' (or a
//! jump in it) would contaminate the accuracy contracts of the asymptotic
//! formulas.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::quad::{integrate, QuadratureSpec};

/// Closed interval [a, b] with a < b, both finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::Domain(format!("invalid interval [{a}, {b}]")));
        }
        Ok(Self { a, b })
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn contains(&self, x: f64) -> bool {
        let slack = 1e-12 * self.length().max(1.0);
        x >= self.a - slack && x <= self.b + slack
    }
}

/// Analytic catalog of profile shapes.
///
/// `Scaled` and `Reflected` wrap another shape under the exact coordinate
/// maps x -> x/c and x -> a+b-x; they keep derivative evaluation exact for
/// the symmetry checks without enlarging the external catalog.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// f(x) = c
    Constant { c: f64 },
    /// f(x) = c0 + c1 x
    Linear { c0: f64, c1: f64 },
    /// f(x) = c cosh((x - x0)/c)
    Catenoid { c: f64, x0: f64 },
    /// f(x) = sum_i coefficients[i] x^i
    Polynomial { coefficients: Vec<f64> },
    /// f(x) = base + amp cos(2 pi x / period)
    CosineBump { base: f64, amp: f64, period: f64 },
    /// c * inner(x / c)
    Scaled { c: f64, inner: Box<Shape> },
    /// inner(a + b - x) for the original interval [a, b]
    Reflected { sum_ab: f64, inner: Box<Shape> },
}

impl Shape {
    /// f, f' and f'' at x, from the closed-form derivatives of the catalog.
    pub fn eval_raw(&self, x: f64) -> (f64, f64, f64) {
        match self {
            Shape::Constant { c } => (*c, 0.0, 0.0),
            Shape::Linear { c0, c1 } => (c0 + c1 * x, *c1, 0.0),
            Shape::Catenoid { c, x0 } => {
                let t = (x - x0) / c;
                (c * t.cosh(), t.sinh(), t.cosh() / c)
            }
            Shape::Polynomial { coefficients } => {
                let mut f = 0.0;
                let mut fp = 0.0;
                let mut fpp = 0.0;
                for &ck in coefficients.iter().rev() {
                    fpp = fpp * x + 2.0 * fp;
                    fp = fp * x + f;
                    f = f * x + ck;
                }
                (f, fp, fpp)
            }
            Shape::CosineBump { base, amp, period } => {
                let w = 2.0 * std::f64::consts::PI / period;
                let (s, c) = (w * x).sin_cos();
                (base + amp * c, -amp * w * s, -amp * w * w * c)
            }
            Shape::Scaled { c, inner } => {
                let (f, fp, fpp) = inner.eval_raw(x / c);
                (c * f, fp, fpp / c)
            }
            Shape::Reflected { sum_ab, inner } => {
                let (f, fp, fpp) = inner.eval_raw(sum_ab - x);
                (f, -fp, fpp)
            }
        }
    }

    fn validate_params(&self) -> Result<()> {
        match self {
            Shape::Catenoid { c, .. } if *c == 0.0 || !c.is_finite() => {
                Err(Error::InvalidSpec("catenoid parameter c must be nonzero and finite".into()))
            }
            Shape::CosineBump { period, .. } if *period <= 0.0 || !period.is_finite() => {
                Err(Error::InvalidSpec("cosine-bump period must be positive".into()))
            }
            Shape::Polynomial { coefficients } if coefficients.is_empty() => {
                Err(Error::InvalidSpec("polynomial needs at least one coefficient".into()))
            }
            _ => Ok(()),
        }
    }

    /// Canonical textual form, used for the table hash.
    fn canonical(&self) -> String {
        fn bits(x: f64) -> String {
            format!("{:016x}", x.to_bits())
        }
        match self {
            Shape::Constant { c } => format!("constant({})", bits(*c)),
            Shape::Linear { c0, c1 } => format!("linear({},{})", bits(*c0), bits(*c1)),
            Shape::Catenoid { c, x0 } => format!("catenoid({},{})", bits(*c), bits(*x0)),
            Shape::Polynomial { coefficients } => {
                let cs: Vec<String> = coefficients.iter().map(|c| bits(*c)).collect();
                format!("polynomial({})", cs.join(","))
            }
            Shape::CosineBump { base, amp, period } => {
                format!("cosine-bump({},{},{})", bits(*base), bits(*amp), bits(*period))
            }
            Shape::Scaled { c, inner } => format!("scaled({},{})", bits(*c), inner.canonical()),
            Shape::Reflected { sum_ab, inner } => {
                format!("reflected({},{})", bits(*sum_ab), inner.canonical())
            }
        }
    }
}

const POSITIVITY_SAMPLES: usize = 1000;

/// A validated profile: shape plus domain, with f > 0 on [a, b].
///
/// Positivity is checked by sampling (1000 uniform points plus the two
/// endpoints), which is a heuristic, not a proof.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    shape: Shape,
    domain: Interval,
}

impl Profile {
    pub fn new(shape: Shape, domain: Interval) -> Result<Self> {
        shape.validate_params()?;
        let n = POSITIVITY_SAMPLES;
        for i in 0..=n {
            let x = domain.a + domain.length() * (i as f64) / (n as f64);
            let (f, fp, fpp) = shape.eval_raw(x);
            if !(f > 0.0) {
                return Err(Error::ProfileNotPositive { x, value: f });
            }
            if !f.is_finite() || !fp.is_finite() || !fpp.is_finite() {
                return Err(Error::InvalidSpec(format!(
                    "profile not finite at x = {x}: ({f}, {fp}, {fpp})"
                )));
            }
        }
        Ok(Self { shape, domain })
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// (f, f', f'') at x; errors if x lies outside the domain.
    pub fn eval(&self, x: f64) -> Result<(f64, f64, f64)> {
        if !self.domain.contains(x) {
            return Err(Error::Domain(format!(
                "x = {x} outside profile domain [{}, {}]",
                self.domain.a, self.domain.b
            )));
        }
        Ok(self.shape.eval_raw(x))
    }

    /// Unchecked evaluation for inner loops; callers stay inside the domain.
    #[inline]
    pub fn eval_unchecked(&self, x: f64) -> (f64, f64, f64) {
        self.shape.eval_raw(x)
    }

    /// The profile x -> c f(x/c) on [c a, c b]. Leaves A and the curvature
    /// integrals invariant; used by the scale-invariance checks.
    pub fn scaled(&self, c: f64) -> Result<Profile> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Domain("scale factor must be positive and finite".into()));
        }
        Profile::new(
            Shape::Scaled { c, inner: Box::new(self.shape.clone()) },
            Interval::new(c * self.domain.a, c * self.domain.b)?,
        )
    }

    /// The profile x -> f(a + b - x) on the same interval.
    pub fn reflected(&self) -> Result<Profile> {
        Profile::new(
            Shape::Reflected {
                sum_ab: self.domain.a + self.domain.b,
                inner: Box::new(self.shape.clone()),
            },
            self.domain,
        )
    }

    /// FNV-1a hash of the canonical description; stable across runs.
    pub fn content_hash(&self) -> String {
        let text = format!(
            "{}|[{:016x},{:016x}]",
            self.shape.canonical(),
            self.domain.a.to_bits(),
            self.domain.b.to_bits()
        );
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in text.as_bytes() {
            h ^= *byte as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        format!("{h:016x}")
    }
}

/// JSON profile specification, the normative CLI input format:
/// `{"shape": "<tag>", "params": {...}, "a": <real>, "b": <real>}`.
#[derive(Debug, Clone, Deserialize)]
pub struct ProfileSpec {
    pub shape: String,
    #[serde(default)]
    pub params: serde_json::Map<String, serde_json::Value>,
    pub a: f64,
    pub b: f64,
}

impl ProfileSpec {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))
    }

    pub fn build(&self) -> Result<Profile> {
        let need = |key: &str| -> Result<f64> {
            self.params
                .get(key)
                .and_then(|v| v.as_f64())
                .ok_or_else(|| Error::InvalidSpec(format!("missing numeric parameter \"{key}\"")))
        };
        let shape = match self.shape.as_str() {
            "constant" => Shape::Constant { c: need("c")? },
            "linear" => Shape::Linear { c0: need("c0")?, c1: need("c1")? },
            "catenoid" => Shape::Catenoid { c: need("c")?, x0: need("x0")? },
            "polynomial" => {
                let coefficients = self
                    .params
                    .get("coefficients")
                    .and_then(|v| v.as_array())
                    .ok_or_else(|| Error::InvalidSpec("missing \"coefficients\" array".into()))?
                    .iter()
                    .map(|v| v.as_f64().ok_or_else(|| Error::InvalidSpec("non-numeric coefficient".into())))
                    .collect::<Result<Vec<f64>>>()?;
                Shape::Polynomial { coefficients }
            }
            "cosine-bump" => Shape::CosineBump {
                base: need("base")?,
                amp: need("amp")?,
                period: need("period")?,
            },
            other => return Err(Error::InvalidSpec(format!("unknown catalog tag \"{other}\""))),
        };
        Profile::new(shape, Interval::new(self.a, self.b)?)
    }
}

/// Quadrature-computed functionals of the profile. These feed every
/// closed-form zeta and heat-kernel formula.
#[derive(Debug, Clone, Copy)]
pub struct GeometricInvariants {
    /// Surface area, int 2 pi f sqrt(1 + f'^2) dx.
    pub area: f64,
    /// Generator arc length, int sqrt(1 + f'^2) dx.
    pub arc_length: f64,
    /// f(a).
    pub radius_a: f64,
    /// f(b).
    pub radius_b: f64,
    /// A = int sqrt(1 + f'^2) / f dx.
    pub a_integral: f64,
    /// int f'^2 / (f sqrt(1 + f'^2)) dx.
    pub curv1_integral: f64,
    /// int f'' / (1 + f'^2)^(3/2) dx.
    pub curv2_integral: f64,
    /// int s1 dx with the third one-dimensional WKB coefficient s1.
    pub s1_integral: f64,
}

/// Compute all geometric invariants by adaptive quadrature.
pub fn geometric_invariants(profile: &Profile, spec: &QuadratureSpec) -> Result<GeometricInvariants> {
    let d = profile.domain();
    let quad = |g: &dyn Fn(f64, f64, f64) -> f64| -> Result<f64> {
        integrate(
            |x| {
                let (f, fp, fpp) = profile.eval_unchecked(x);
                g(f, fp, fpp)
            },
            d.a,
            d.b,
            spec,
        )
    };

    let area = quad(&|f, fp, _| 2.0 * std::f64::consts::PI * f * (1.0 + fp * fp).sqrt())?;
    let arc_length = quad(&|_, fp, _| (1.0 + fp * fp).sqrt())?;
    let a_integral = quad(&|f, fp, _| (1.0 + fp * fp).sqrt() / f)?;
    let curv1_integral = quad(&|f, fp, _| fp * fp / (f * (1.0 + fp * fp).sqrt()))?;
    let curv2_integral = quad(&|_, fp, fpp| fpp / (1.0 + fp * fp).powf(1.5))?;
    let s1_integral = quad(&|f, fp, fpp| {
        let q = 1.0 + fp * fp;
        -0.125 * fp * fp / (f * f * q.sqrt()) + 0.25 * fpp / (f * q.powf(1.5))
    })?;

    let (radius_a, _, _) = profile.eval_unchecked(d.a);
    let (radius_b, _, _) = profile.eval_unchecked(d.b);

    let inv = GeometricInvariants {
        area,
        arc_length,
        radius_a,
        radius_b,
        a_integral,
        curv1_integral,
        curv2_integral,
        s1_integral,
    };
    if !(inv.area > 0.0 && inv.arc_length >= d.length() * (1.0 - 1e-12) && inv.a_integral > 0.0) {
        return Err(Error::Internal(format!("implausible invariants for a positive profile: {inv:?}")));
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    pub(crate) fn cylinder(r: f64, l: f64) -> Profile {
        Profile::new(Shape::Constant { c: r }, Interval::new(0.0, l).unwrap()).unwrap()
    }

    pub(crate) fn frustum() -> Profile {
        Profile::new(Shape::Linear { c0: 1.0, c1: 0.5 }, Interval::new(0.0, 2.0).unwrap()).unwrap()
    }

    pub(crate) fn catenoid() -> Profile {
        Profile::new(Shape::Catenoid { c: 1.0, x0: 0.0 }, Interval::new(-1.0, 1.0).unwrap()).unwrap()
    }

    pub(crate) fn bump() -> Profile {
        Profile::new(
            Shape::CosineBump { base: 1.0, amp: 0.25, period: 2.0 },
            Interval::new(0.0, 1.5).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn catalog_construction() {
        let cyl = cylinder(1.0, PI);
        assert_eq!(cyl.eval(1.0).unwrap(), (1.0, 0.0, 0.0));

        let fr = frustum();
        assert_eq!(fr.eval(2.0).unwrap(), (2.0, 0.5, 0.0));
    }

    #[test]
    fn rejects_nonpositive_profile() {
        let err = Profile::new(Shape::Constant { c: -1.0 }, Interval::new(0.0, 1.0).unwrap());
        match err {
            Err(Error::ProfileNotPositive { value, .. }) => assert_eq!(value, -1.0),
            other => panic!("expected positivity error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_tag() {
        let spec = ProfileSpec::parse(r#"{"shape":"wedge","params":{},"a":0.0,"b":1.0}"#).unwrap();
        assert!(matches!(spec.build(), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(catenoid().eval(0.0).unwrap(), (1.0, 0.0, 1.0));
        let poly = Profile::new(
            Shape::Polynomial { coefficients: vec![1.0, 0.0, 1.0] },
            Interval::new(0.0, 3.0).unwrap(),
        )
        .unwrap();
        assert_eq!(poly.eval(2.0).unwrap(), (5.0, 4.0, 2.0));
    }

    #[test]
    fn eval_outside_domain_errors() {
        assert!(cylinder(1.0, PI).eval(4.0).is_err());
    }

    #[test]
    fn cylinder_invariants() {
        let inv = geometric_invariants(&cylinder(1.0, PI), &QuadratureSpec::default()).unwrap();
        assert!((inv.area - 2.0 * PI * PI).abs() < 1e-10);
        assert!((inv.arc_length - PI).abs() < 1e-12);
        assert!((inv.a_integral - PI).abs() < 1e-12);
        assert_eq!(inv.curv1_integral, 0.0);
        assert_eq!(inv.curv2_integral, 0.0);
        assert_eq!(inv.s1_integral, 0.0);
    }

    #[test]
    fn cylinder_a_is_length_over_radius() {
        for &(r, l) in &[(2.0, 1.0), (0.5, 3.0), (7.0, 0.4)] {
            let inv = geometric_invariants(&cylinder(r, l), &QuadratureSpec::default()).unwrap();
            assert!((inv.a_integral - l / r).abs() < 1e-12 * (l / r));
        }
    }

    #[test]
    fn frustum_invariants() {
        let inv = geometric_invariants(&frustum(), &QuadratureSpec::default()).unwrap();
        let exact_a = 2.0 * 1.25f64.sqrt() * std::f64::consts::LN_2;
        assert!((inv.a_integral - exact_a).abs() < 1e-12);
        assert_eq!(inv.radius_a, 1.0);
        assert_eq!(inv.radius_b, 2.0);
        assert_eq!(inv.curv2_integral, 0.0);
    }

    #[test]
    fn catenoid_invariants_against_closed_forms() {
        let inv = geometric_invariants(&catenoid(), &QuadratureSpec::default()).unwrap();
        // sqrt(1 + sinh^2) = cosh, so A = b - a and the arc length is 2 sinh 1.
        assert!((inv.a_integral - 2.0).abs() < 1e-12);
        assert!((inv.arc_length - 2.0 * 1f64.sinh()).abs() < 1e-12);
        assert!((inv.curv1_integral - (2.0 - 2.0 * 1f64.tanh())).abs() < 1e-12);
        assert!((inv.curv2_integral - 2.0 * 1f64.tanh()).abs() < 1e-12);
    }

    #[test]
    fn reflection_swaps_radii_only() {
        let spec = QuadratureSpec::default();
        for p in [frustum(), catenoid(), bump()] {
            let inv = geometric_invariants(&p, &spec).unwrap();
            let refl = geometric_invariants(&p.reflected().unwrap(), &spec).unwrap();
            assert!((inv.area - refl.area).abs() < 1e-10 * inv.area);
            assert!((inv.arc_length - refl.arc_length).abs() < 1e-10);
            assert!((inv.a_integral - refl.a_integral).abs() < 1e-10);
            assert!((inv.curv1_integral - refl.curv1_integral).abs() < 1e-10);
            assert!((inv.curv2_integral - refl.curv2_integral).abs() < 1e-10);
            assert!((inv.s1_integral - refl.s1_integral).abs() < 1e-10);
            assert!((inv.radius_a - refl.radius_b).abs() < 1e-12);
            assert!((inv.radius_b - refl.radius_a).abs() < 1e-12);
        }
    }

    #[test]
    fn scaling_preserves_a_and_curvature_integrals() {
        let spec = QuadratureSpec::default();
        for p in [frustum(), catenoid(), bump()] {
            let inv = geometric_invariants(&p, &spec).unwrap();
            for &c in &[2.0, 0.5] {
                let scaled = geometric_invariants(&p.scaled(c).unwrap(), &spec).unwrap();
                assert!((inv.a_integral - scaled.a_integral).abs() < 1e-10);
                assert!((inv.curv1_integral - scaled.curv1_integral).abs() < 1e-10);
                assert!((inv.curv2_integral - scaled.curv2_integral).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn bump_invariants_match_reference() {
        // Reference values computed with 30-digit arithmetic.
        let inv = geometric_invariants(&bump(), &QuadratureSpec::default()).unwrap();
        assert!((inv.area - 10.195264550723896).abs() < 1e-10);
        assert!((inv.arc_length - 1.709757996554135).abs() < 1e-12);
        assert!((inv.a_integral - 1.853263696794168).abs() < 1e-12);
        assert!((inv.curv1_integral - 0.405321009225724).abs() < 1e-12);
        assert!((inv.curv2_integral - 0.617667824838856).abs() < 1e-12);
        assert!((inv.s1_integral - 0.208682021296180).abs() < 1e-12);
    }

    #[test]
    fn spec_roundtrip() {
        let spec = ProfileSpec::parse(
            r#"{"shape":"catenoid","params":{"c":1.0,"x0":0.0},"a":-1.0,"b":1.0}"#,
        )
        .unwrap();
        let p = spec.build().unwrap();
        assert_eq!(p.eval(0.0).unwrap(), (1.0, 0.0, 1.0));
    }

    #[test]
    fn content_hash_is_stable() {
        let h1 = cylinder(1.0, PI).content_hash();
        let h2 = cylinder(1.0, PI).content_hash();
        assert_eq!(h1, h2);
        assert_ne!(h1, cylinder(2.0, PI).content_hash());
    }
}
