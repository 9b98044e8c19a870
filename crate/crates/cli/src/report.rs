//! JSON encoding of analyzer results. Objects are keyed by condition id so
//! that `analyze` reports and the `verify` table join on the same names.

use holodisk::dynamics::{Classification, GeneratorProfile};
use holodisk::holomap::{BoundaryJet, LftDetection};
use holodisk::rigidity::{AuditRow, Check, RigidityReport};
use holodisk::Complex;
use serde_json::{json, Map, Value};

pub fn complex(z: Complex) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn opt_complex(z: Option<Complex>) -> Value {
    z.map_or(Value::Null, complex)
}

/// `0.5+0i` style rendering used in tables.
pub fn complex_text(z: Complex) -> String {
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    let re = if z.re == 0.0 { 0.0 } else { z.re };
    if im < 0.0 {
        format!("{re}-{}i", -im)
    } else {
        format!("{re}+{im}i")
    }
}

pub fn jet(j: &BoundaryJet) -> Value {
    json!({
        "tau": complex(j.tau),
        "order": j.order,
        "derivatives": (0..=j.order).map(|k| complex(j.derivative(k))).collect::<Vec<_>>(),
        "residual_ok": j.residual_ok,
    })
}

pub fn check(c: &Check) -> Value {
    json!({
        "status": c.status.name(),
        "witness": opt_complex(c.witness),
        "value": c.value,
        "gating": c.gating,
        "detail": c.detail,
    })
}

pub fn audit_row(r: &AuditRow) -> Value {
    json!({
        "certified_ok": r.certified_ok,
        "printed_ok": r.printed_ok,
        "witness": opt_complex(r.witness),
        "lhs": r.lhs,
        "rhs": r.rhs,
        "detail": r.detail,
    })
}

pub fn rigidity(r: &RigidityReport) -> Value {
    let checks: Map<String, Value> = r.checks.iter().map(|c| (c.id.clone(), check(c))).collect();
    let audit: Map<String, Value> = r.audit.iter().map(|a| (a.id.clone(), audit_row(a))).collect();
    let values: Map<String, Value> = r.values.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    json!({
        "subject": r.subject,
        "jet": r.jet.as_ref().map(jet),
        "alpha": r.alpha,
        "a": opt_complex(r.a),
        "a_lambda": r.a_lambda.iter().map(|(k, a)| json!({ "k": k, "a": complex(*a) })).collect::<Vec<_>>(),
        "schwarzian": opt_complex(r.schwarzian),
        "m": r.m,
        "verdicts": r.verdicts.iter().map(|v| v.name()).collect::<Vec<_>>(),
        "checks": checks,
        "audit": audit,
        "values": values,
        "status": r.overall().name(),
    })
}

pub fn classification(c: &Classification) -> Value {
    json!({
        "kind": c.kind.name(),
        "tau_dw": complex(c.tau_dw),
        "multiplier": complex(c.multiplier),
        "iterations": c.iterations,
    })
}

pub fn lft_detection(d: &LftDetection) -> Value {
    json!({
        "is_lft": d.is_lft,
        "mobius": d.mobius.map(|m| m.to_string()),
        "structural": d.structural,
        "cross_ratio_deviation": d.cross_ratio_deviation,
        "fixed_tuple_deviation": d.fixed_tuple_deviation,
        "fit_deviation": d.fit_deviation,
    })
}

pub fn profile(p: &GeneratorProfile) -> Value {
    json!({
        "generator": p.f.to_string(),
        "beta": p.beta,
        "p": p.p.to_string(),
        "m": p.m,
        "m_uncertainty": p.m_uncertainty,
        "is_generator": p.is_generator,
        "jet": jet(&p.jet),
    })
}

/// Pretty JSON with a trailing newline; `serde_json` maps keep keys sorted.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_sorted() {
        let v = json!({ "zeta": 1, "alpha": 2, "mid": { "b": 1, "a": 2 } });
        let s = render(&v);
        assert!(s.find("alpha").unwrap() < s.find("mid").unwrap());
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
    }

    #[test]
    fn complex_rendering() {
        assert_eq!(complex_text(Complex::new(0.5, 0.0)), "0.5+0i");
        assert_eq!(complex_text(Complex::new(0.0, -1.0)), "0-1i");
        assert_eq!(complex_text(Complex::new(-0.0, -0.0)), "0+0i");
    }
}
