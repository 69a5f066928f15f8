//! Deterministic JSON rendering of report types.
//!
//! Every float is written with 17 significant digits in scientific
//! notation and object keys are emitted in a fixed order, so a given input
//! always produces byte-identical output.

use crate::heatkernel::{FittedCoefficients, HeatKernelCoefficients, HeatTrace};
use crate::profile::GeometricInvariants;
use crate::sturm::EigenvalueTable;
use crate::verify::CriterionResult;
use crate::zeta::{DeterminantReport, ZetaSpecialValues};

/// 17-significant-digit rendering; enough to round-trip any f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Ordered key/value JSON object builder; values arrive pre-rendered.
#[derive(Default)]
pub struct JsonObject {
    fields: Vec<(String, String)>,
}

impl JsonObject {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num(mut self, key: &str, v: f64) -> Self {
        self.fields.push((key.to_string(), fmt_f64(v)));
        self
    }

    pub fn int(mut self, key: &str, v: i64) -> Self {
        self.fields.push((key.to_string(), v.to_string()));
        self
    }

    pub fn bool(mut self, key: &str, v: bool) -> Self {
        self.fields.push((key.to_string(), v.to_string()));
        self
    }

    pub fn str(mut self, key: &str, v: &str) -> Self {
        self.fields.push((key.to_string(), format!("\"{}\"", escape(v))));
        self
    }

    pub fn raw(mut self, key: &str, rendered: String) -> Self {
        self.fields.push((key.to_string(), rendered));
        self
    }

    pub fn render(&self) -> String {
        let inner: Vec<String> =
            self.fields.iter().map(|(k, v)| format!("\"{}\":{v}", escape(k))).collect();
        format!("{{{}}}", inner.join(","))
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn num_array(values: &[f64]) -> String {
    let inner: Vec<String> = values.iter().map(|v| fmt_f64(*v)).collect();
    format!("[{}]", inner.join(","))
}

pub fn invariants_json(inv: &GeometricInvariants) -> String {
    JsonObject::new()
        .num("area", inv.area)
        .num("arc_length", inv.arc_length)
        .num("radius_a", inv.radius_a)
        .num("radius_b", inv.radius_b)
        .num("A", inv.a_integral)
        .num("I_curv1", inv.curv1_integral)
        .num("I_curv2", inv.curv2_integral)
        .num("I_s1", inv.s1_integral)
        .render()
}

pub fn determinant_json(r: &DeterminantReport) -> String {
    JsonObject::new()
        .num("A", r.a_integral)
        .num("q", r.q)
        .num("euler_phi_q", r.euler_phi_q)
        .num("zeta1_prime0", r.zeta1_prime0)
        .num("zeta2_prime0", r.zeta2_prime0)
        .num("zeta_prime0", r.zeta_prime0)
        .num("log_det", r.log_det)
        .num("det", r.det)
        .render()
}

/// Special values plus the heat-kernel dictionary residuals
/// (res(1) - C_{-1}, res(1/2) - C_{-1/2}/sqrt(pi), zeta(0) - C_0,
/// res(-1/2) + C_{1/2}/(2 sqrt(pi))).
pub fn special_values_json(v: &ZetaSpecialValues, c: &HeatKernelCoefficients) -> String {
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let zeta1 = JsonObject::new()
        .num("res_at_half", v.zeta1.res_at_half)
        .num("value_at_0", v.zeta1.value_at_0)
        .num("res_at_minus_half", v.zeta1.res_at_minus_half)
        .num("value_at_minus_1", v.zeta1.value_at_minus_1)
        .render();
    let zeta2 = JsonObject::new()
        .num("res_at_1", v.zeta2.res_at_1)
        .num("res_at_half", v.zeta2.res_at_half)
        .num("value_at_0", v.zeta2.value_at_0)
        .num("res_at_minus_half", v.zeta2.res_at_minus_half)
        .render();
    let coeffs = heat_coefficients_json(c);
    let dictionary = JsonObject::new()
        .num("res_at_1_minus_C_minus1", v.res_at_1 - c.c_minus1)
        .num("res_at_half_minus_C_minus_half_over_sqrt_pi", v.res_at_half - c.c_minus_half / sqrt_pi)
        .num("value_at_0_minus_C_0", v.value_at_0 - c.c_0)
        .num(
            "res_at_minus_half_plus_C_half_over_2_sqrt_pi",
            v.res_at_minus_half + c.c_half / (2.0 * sqrt_pi),
        )
        .render();
    JsonObject::new()
        .num("res_at_1", v.res_at_1)
        .num("res_at_half", v.res_at_half)
        .num("value_at_0", v.value_at_0)
        .num("res_at_minus_half", v.res_at_minus_half)
        .num("zeta1_at_minus_1", v.zeta1_at_minus_1)
        .raw("zeta1", zeta1)
        .raw("zeta2", zeta2)
        .raw("heat_kernel_coefficients", coeffs)
        .raw("heat_kernel_dictionary_residuals", dictionary)
        .render()
}

pub fn heat_coefficients_json(c: &HeatKernelCoefficients) -> String {
    JsonObject::new()
        .num("C_minus1", c.c_minus1)
        .num("C_minus_half", c.c_minus_half)
        .num("C_0", c.c_0)
        .num("C_half", c.c_half)
        .render()
}

pub fn fitted_coefficients_json(f: &FittedCoefficients) -> String {
    let stderr = JsonObject::new()
        .num("C_minus1", f.stderr[0])
        .num("C_minus_half", f.stderr[1])
        .num("C_0", f.stderr[2])
        .num("C_half", f.stderr[3])
        .render();
    JsonObject::new()
        .num("C_minus1", f.c_minus1)
        .num("C_minus_half", f.c_minus_half)
        .num("C_0", f.c_0)
        .num("C_half", f.c_half)
        .raw("stderr", stderr)
        .num("residual_norm", f.residual_norm)
        .render()
}

pub fn table_json(t: &EigenvalueTable) -> String {
    let entries: Vec<String> = t
        .entries
        .iter()
        .map(|e| {
            JsonObject::new()
                .int("k", e.k as i64)
                .int("n", e.n as i64)
                .num("lambda", e.lambda)
                .render()
        })
        .collect();
    JsonObject::new()
        .raw("entries", format!("[{}]", entries.join(",")))
        .num("tol", t.bisect_tol)
        .num("lambda_cut", t.lambda_cut)
        .str("profile_hash", &t.profile_hash)
        .render()
}

pub fn heat_trace_json(trace: &HeatTrace) -> String {
    JsonObject::new()
        .raw("t_grid", num_array(&trace.t_grid))
        .raw("theta", num_array(&trace.theta))
        .raw("truncation_bound", num_array(&trace.truncation_bound))
        .render()
}

pub fn verify_json(results: &[CriterionResult]) -> String {
    let all_passed = results.iter().all(|r| r.passed);
    let rendered: Vec<String> = results
        .iter()
        .map(|r| {
            let checks: Vec<String> = r
                .checks
                .iter()
                .map(|c| {
                    JsonObject::new()
                        .str("label", &c.label)
                        .num("residual", c.residual)
                        .num("tolerance", c.tolerance)
                        .bool("passed", c.passed)
                        .render()
                })
                .collect();
            let mut obj = JsonObject::new()
                .int("id", r.id as i64)
                .str("name", r.name)
                .bool("passed", r.passed)
                .num("runtime_s", r.runtime_s);
            if let Some(limit) = r.runtime_limit_s {
                obj = obj.num("runtime_limit_s", limit);
            }
            obj.raw("checks", format!("[{}]", checks.join(","))).render()
        })
        .collect();
    JsonObject::new()
        .bool("all_passed", all_passed)
        .raw("checks", format!("[{}]", rendered.join(",")))
        .render()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_has_17_significant_digits() {
        assert_eq!(fmt_f64(std::f64::consts::PI), "3.1415926535897931e0");
        assert_eq!(fmt_f64(0.5), "5.0000000000000000e-1");
        let v = 1.2345678901234567e-12;
        assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
    }

    #[test]
    fn object_rendering_is_ordered() {
        let s = JsonObject::new().num("b", 1.0).num("a", 2.0).render();
        assert_eq!(s, "{\"b\":1.0000000000000000e0,\"a\":2.0000000000000000e0}");
    }

    #[test]
    fn rendered_json_parses() {
        let s = JsonObject::new()
            .num("x", 1.5)
            .str("name", "weird \"quoted\" name")
            .raw("arr", num_array(&[1.0, 2.0]))
            .render();
        let parsed: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(parsed["x"], 1.5);
        assert_eq!(parsed["arr"][1], 2.0);
    }
}
