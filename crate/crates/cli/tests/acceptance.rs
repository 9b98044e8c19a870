//! One line per acceptance criterion, each backed by the verify suite and
//! a direct recomputation where it is cheap.

use holodisk::dynamics::{certify_generator, flow, OdeOptions};
use holodisk::holomap::{parse_map, Mobius};
use holodisk::rigidity::{repelling_analysis, Status};
use holodisk::Complex;
use holodisk_cli::verify::{run_suite, Suite};

fn rows_pass(suite: &Suite, ids: &[&str]) -> Result<(), String> {
    let bad: Vec<String> = ids
        .iter()
        .filter_map(|id| match suite.row(id) {
            Some(r) if r.certified == Status::Pass => None,
            Some(r) => Some(format!("{id}: {}", r.detail)),
            None => Some(format!("{id}: missing")),
        })
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad.join("; "))
    }
}

fn flow_end(f: &str, t: f64) -> Complex {
    let g = certify_generator(&parse_map(f).unwrap()).unwrap();
    flow(&g, Complex::default(), t, &OdeOptions::default()).unwrap().end()
}

fn criterion_3(suite: &Suite) -> Result<(), String> {
    rows_pass(suite, &["flow.affine", "flow.tanh", "flow.semigroup"])?;
    let a = (flow_end("z-1", 2f64.ln()) - 0.5).norm();
    let b = (flow_end("z^2-1", 1.0) - 1f64.tanh()).norm();
    if a <= 1e-9 && b <= 1e-9 {
        Ok(())
    } else {
        Err(format!("flow errors {a:e}, {b:e}"))
    }
}

fn criterion_7(suite: &Suite) -> Result<(), String> {
    rows_pass(suite, &["lem1.julia", "lem2.certified"])?;
    let r = suite.row("lem2.printed").ok_or("lem2.printed missing")?;
    if r.printed != Some(false) || r.witness != Some(Complex::new(0.5, 0.0)) {
        return Err(format!("printed form row: {:?} at {:?}", r.printed, r.witness));
    }
    Ok(())
}

fn criterion_8(suite: &Suite) -> Result<(), String> {
    rows_pass(suite, &["rem3.k0", "rem3.invariant"])?;
    let r = repelling_analysis(&Mobius::from_real(1.0, 0.0, -1.0, 2.0)).map_err(|e| e.to_string())?;
    let k0 = r.value("k0").unwrap_or(f64::NAN);
    if (k0 - 1.0).abs() <= 1e-9 && r.overall() == Status::Pass {
        Ok(())
    } else {
        Err(format!("k0 = {k0}"))
    }
}

#[test]
fn acceptance() {
    let suite = run_suite();
    let results: Vec<(&str, Result<(), String>)> = vec![
        ("1   example map", rows_pass(&suite, &["ex1.selfmap", "ex1.jet", "ex1.detect_lft", "ex1.th2"])),
        ("2   hyperbolic automorphism", rows_pass(&suite, &["aut.classify", "aut.re_a", "aut.d1", "aut.lem5"])),
        ("3   flow oracles", criterion_3(&suite)),
        ("4   horocycle rate", rows_pass(&suite, &["pr2.equality", "pr2.affine"])),
        (
            "5   generator rigidity",
            rows_pass(&suite, &["th4.riccati", "th4.affine", "th5.cubic", "th5.iii.certified"]),
        ),
        ("6   Burns-Krantz", rows_pass(&suite, &["bk.identity", "bk.mu", "col6.certified", "bk.falsification"])),
        ("7   lemma audits", criterion_7(&suite)),
        ("8   repelling fixed point", criterion_8(&suite)),
        ("9a  horocycle containment", rows_pass(&suite, &["inclusion.contained"])),
        ("9b  equality iff alpha = 1", rows_pass(&suite, &["inclusion.equality"])),
    ];
    let mut failed = Vec::new();
    for (name, r) in &results {
        match r {
            Ok(()) => println!("PASS  {name}"),
            Err(e) => {
                println!("FAIL  {name}: {e}");
                failed.push(*name);
            }
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
