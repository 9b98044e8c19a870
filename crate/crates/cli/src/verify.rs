//! Built-in reproduction suite behind `holodisk verify`.
//!
//! Every row runs a fixed subject through the library and compares the
//! outcome with a closed-form value or a stated verdict. `certified` is the
//! verdict that decides the exit code. `printed` is filled in for the audit
//! rows, which evaluate an inequality exactly as displayed next to the
//! re-derived form.

use std::f64::consts::LN_2;
use std::fmt::Write as _;

use holodisk::boundary::{self, julia_bound_check, reciprocal_bound_check};
use holodisk::dynamics::{
    certify_generator, denjoy_wolff, flow, null_point_profile, pr2_rate_check, selfmap_to_generator, semigroup_check,
    Kind, OdeOptions,
};
use holodisk::geometry::horocycle_inclusion;
use holodisk::holomap::{check_selfmap, detect_lft, parse_map, MapExpr, Mobius, BOUNDARY_SAMPLES, SELFMAP_TOL};
use holodisk::rigidity::{
    burns_krantz, falsification_search, generator_rigidity, is_quadratic_generator, lft_analysis, repelling_analysis,
    RigidityReport, Status, Verdict,
};
use holodisk::sampling::{seeded_rng, uniform_disk_point};
use holodisk::Complex;
use rand::Rng;

use crate::report::complex_text;
use crate::{exit_code, Output};

const SEED: u64 = 42;
const KS: [f64; 3] = [0.5, 1.0, 2.0];
const EX1: &str = "0.5*(z+1)+0.05*(z-1)^4";
const CUBIC_GENERATOR: &str = "(z^2-1)-(1-z)^2-(1-z)^3";
const BK_CUBIC: &str = "z-0.05*(z-1)^3";

type RowResult = Result<Row, String>;

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub id: String,
    pub topic: &'static str,
    pub certified: Status,
    pub printed: Option<bool>,
    pub witness: Option<Complex>,
    pub detail: String,
}

impl Row {
    fn new(id: &str, ok: bool, detail: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            topic: "",
            certified: if ok { Status::Pass } else { Status::Fail },
            printed: None,
            witness: None,
            detail: detail.into(),
        }
    }

    fn witness(mut self, w: Option<Complex>) -> Self {
        self.witness = w;
        self
    }

    fn printed(mut self, ok: bool) -> Self {
        self.printed = Some(ok);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Suite {
    pub rows: Vec<Row>,
}

impl Suite {
    pub fn row(&self, id: &str) -> Option<&Row> {
        self.rows.iter().find(|r| r.id == id)
    }

    pub fn status(&self) -> Status {
        let mut out = Status::Pass;
        for r in &self.rows {
            match r.certified {
                Status::Fail => return Status::Fail,
                Status::Inconclusive => out = Status::Inconclusive,
                _ => {}
            }
        }
        out
    }

    pub fn table(&self) -> String {
        let mut s = String::new();
        let w = self.rows.iter().map(|r| r.id.len()).max().unwrap_or(2).max(2);
        let t = self.rows.iter().map(|r| r.topic.len()).max().unwrap_or(5).max(5);
        writeln!(s, "{:<w$}  {:<t$}  {:<9}  {:<7}  {:<22}  detail", "id", "topic", "certified", "printed", "witness")
            .unwrap();
        for r in &self.rows {
            let printed = match r.printed {
                Some(true) => "pass",
                Some(false) => "fail",
                None => "-",
            };
            let witness = r.witness.map_or_else(|| "-".to_string(), complex_text);
            writeln!(
                s,
                "{:<w$}  {:<t$}  {:<9}  {:<7}  {:<22}  {}",
                r.id,
                r.topic,
                r.certified.name(),
                printed,
                witness,
                r.detail
            )
            .unwrap();
        }
        let failed: Vec<&str> = self.rows.iter().filter(|r| r.certified == Status::Fail).map(|r| r.id.as_str()).collect();
        writeln!(s, "{} rows, {} certified failures{}", self.rows.len(), failed.len(), if failed.is_empty() {
            String::new()
        } else {
            format!(": {}", failed.join(", "))
        })
        .unwrap();
        s
    }

    pub fn exit_code(&self) -> i32 {
        exit_code(self.status())
    }

    pub fn to_output(&self) -> Output {
        Output { text: self.table(), status: self.status() }
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn map(text: &str) -> Result<MapExpr, String> {
    parse_map(text).map_err(err)
}

fn one() -> Complex {
    Complex::new(1.0, 0.0)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// The hyperbolic automorphism `(z + 0.3)/(0.3z + 1)`.
fn hyperbolic_aut() -> Mobius {
    Mobius::from_real(1.0, 0.3, 0.3, 1.0)
}

/// Runs every row; a row whose computation errors is reported as failed.
pub fn run_suite() -> Suite {
    let steps: Vec<(&str, &'static str, fn() -> RowResult)> = vec![
        ("ex1.selfmap", "example map, boundary test", ex1_selfmap),
        ("ex1.jet", "example map, jet at 1", ex1_jet),
        ("ex1.detect_lft", "example map, LFT detector", ex1_detect),
        ("ex1.th2", "example map, LFT criterion", ex1_th2),
        ("aut.classify", "hyperbolic automorphism", aut_classify),
        ("aut.re_a", "hyperbolic automorphism", aut_re_a),
        ("aut.d1", "horocycle image equality", aut_d1),
        ("aut.lem5", "generator boundary identities", aut_lem5),
        ("flow.affine", "flow oracle", flow_affine),
        ("flow.tanh", "flow oracle", flow_tanh),
        ("flow.semigroup", "semigroup property", flow_semigroup),
        ("pr2.equality", "horocycle contraction rate", pr2_equality),
        ("pr2.affine", "horocycle contraction rate", pr2_affine),
        ("th4.riccati", "generator rigidity", th4_riccati),
        ("th4.affine", "generator rigidity", th4_affine),
        ("th5.cubic", "generator rigidity", th5_cubic),
        ("th5.iii.certified", "Taylor polynomial bound", th5_certified),
        ("th5.iii.printed", "Taylor polynomial bound audit", th5_printed),
        ("bk.identity", "Burns-Krantz rigidity", bk_identity),
        ("bk.mu", "Burns-Krantz continuous version", bk_mu),
        ("col6.certified", "Burns-Krantz pointwise bound", col6_certified),
        ("col6.printed", "Burns-Krantz pointwise bound audit", col6_printed),
        ("bk.falsification", "Burns-Krantz falsification search", bk_falsification),
        ("lem1.julia", "Julia bound", lem1_julia),
        ("lem2.certified", "reciprocal bound", lem2_certified),
        ("lem2.printed", "reciprocal bound audit", lem2_printed),
        ("rem3.k0", "repelling fixed point", rem3_k0),
        ("rem3.invariant", "repelling fixed point", rem3_invariant),
        ("inclusion.contained", "horocycle inclusion", inclusion_contained),
        ("inclusion.equality", "horocycle inclusion", inclusion_equality),
        ("triangle", "LFT consistency triangle", triangle),
        ("lem5.corpus", "generator boundary identities", lem5_corpus),
        ("th5.i.corpus", "generator nonnegativity", th5_i_corpus),
        ("col4", "automorphism generators", col4),
        ("pr1", "automorphism subclasses", pr1),
    ];
    let rows = steps
        .into_iter()
        .map(|(id, topic, f)| {
            let mut row = f().unwrap_or_else(|e| Row::new(id, false, format!("error: {e}")));
            row.topic = topic;
            row
        })
        .collect();
    Suite { rows }
}

fn ex1_selfmap() -> RowResult {
    let c = check_selfmap(&map(EX1)?).map_err(err)?;
    let ok = c.is_selfmap && c.max_boundary_modulus <= 1.0 + SELFMAP_TOL && c.samples >= BOUNDARY_SAMPLES;
    Ok(Row::new("ex1.selfmap", ok, format!("max |F| = {:.15} on {} samples", c.max_boundary_modulus, c.samples))
        .witness((!ok).then_some(c.argmax)))
}

fn ex1_jet() -> RowResult {
    let j = boundary::jet(&map(EX1)?, one(), 3).map_err(err)?;
    let want = [one(), Complex::new(0.5, 0.0), Complex::default(), Complex::default()];
    let dev = (0..=3).map(|k| (j.derivative(k) - want[k]).norm()).fold(0.0, f64::max);
    Ok(Row::new("ex1.jet", dev <= 1e-8, format!("max deviation from (1, 1/2, 0, 0) = {dev:.1e}")))
}

fn ex1_detect() -> RowResult {
    let d = detect_lft(&map(EX1)?, SEED);
    let ok = !d.is_lft && d.cross_ratio_deviation > 1e-3;
    Ok(Row::new("ex1.detect_lft", ok, format!("is_lft = {}, cross-ratio deviation {:.3e}", d.is_lft, d.cross_ratio_deviation)))
}

fn ex1_th2() -> RowResult {
    let r = lft_analysis(&map(EX1)?, &KS).map_err(err)?;
    let i = r.check("th2.i").ok_or("no th2.i check")?;
    let ii = r.check("th2.ii").ok_or("no th2.ii check")?;
    let ratio = i.value.unwrap_or(f64::NAN);
    let ok = i.status == Status::Fail
        && i.witness == Some(Complex::i())
        && close(ratio, 1.1212, 1e-3)
        && ii.status == Status::Pass
        && !r.has(Verdict::IsLFT);
    Ok(Row::new("ex1.th2", ok, format!("th2.i fails with ratio {ratio:.4}; th2.ii {}", ii.status.name())).witness(i.witness))
}

fn aut_classify() -> RowResult {
    let m = MapExpr::Mobius(hyperbolic_aut());
    let c = denjoy_wolff(&m, Complex::default(), 1e-12).map_err(err)?;
    let alpha = boundary::jet(&m, one(), 1).map_err(err)?.coeff(1);
    let ok = c.kind == Kind::Hyperbolic && close(alpha.re, 0.538461538, 1e-9) && alpha.im.abs() <= 1e-9;
    Ok(Row::new("aut.classify", ok, format!("{} at {}, alpha = {:.12}", c.kind.name(), complex_text(c.tau_dw), alpha.re)))
}

fn aut_report() -> Result<RigidityReport, String> {
    lft_analysis(&MapExpr::Mobius(hyperbolic_aut()), &KS).map_err(err)
}

fn aut_re_a() -> RowResult {
    let a = aut_report()?.a.ok_or("no a")?;
    Ok(Row::new("aut.re_a", a.re.abs() <= 1e-9, format!("Re a = {:.1e}", a.re)))
}

fn aut_d1() -> RowResult {
    let r = aut_report()?;
    let dev = r.value("hausdorff_d1").ok_or("no LFT verdict")?;
    Ok(Row::new("aut.d1", dev <= 1e-8, format!("Hausdorff deviation {dev:.1e} for k in 1/2, 1, 2")))
}

fn aut_lem5() -> RowResult {
    let g = selfmap_to_generator(&MapExpr::Mobius(hyperbolic_aut())).map_err(err)?;
    let j = &g.generator_jet;
    let (d1, d2, d3) = (j.derivative(1), j.derivative(2), j.derivative(3));
    let t = 26.0 / 7.0;
    let ok = (d1 - t).norm() <= 1e-8 && (d2 - t).norm() <= 1e-8 && d3.norm() <= 1e-8;
    Ok(Row::new("aut.lem5", ok, format!("f'(1) = {:.10}, f''(1) = {:.10}, |f'''(1)| = {:.1e}", d1.re, d2.re, d3.norm())))
}

fn flow_end(f: &str, z0: Complex, t: f64) -> Result<Complex, String> {
    let g = certify_generator(&map(f)?).map_err(err)?;
    Ok(flow(&g, z0, t, &OdeOptions::default()).map_err(err)?.end())
}

fn flow_affine() -> RowResult {
    let d = (flow_end("z-1", Complex::default(), LN_2)? - 0.5).norm();
    Ok(Row::new("flow.affine", d <= 1e-9, format!("|u(ln 2) - 1/2| = {d:.1e}")))
}

fn flow_tanh() -> RowResult {
    let d = (flow_end("z^2-1", Complex::default(), 1.0)? - 1f64.tanh()).norm();
    Ok(Row::new("flow.tanh", d <= 1e-9, format!("|u(1) - tanh 1| = {d:.1e}")))
}

fn flow_semigroup() -> RowResult {
    let mut worst = 0.0f64;
    for f in ["z-1", "z^2-1"] {
        let g = certify_generator(&map(f)?).map_err(err)?;
        let mut rng = seeded_rng(SEED);
        for _ in 0..20 {
            let z0 = uniform_disk_point(&mut rng, 0.9);
            let (s, t) = (rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0));
            worst = worst.max(semigroup_check(&g, z0, s, t, &OdeOptions::default()).map_err(err)?);
        }
    }
    Ok(Row::new("flow.semigroup", worst <= 1e-8, format!("largest deviation {worst:.1e} over 2 x 20 triples")))
}

fn pr2_equality() -> RowResult {
    let prof = null_point_profile(&map("z^2-1")?).map_err(err)?;
    let r = pr2_rate_check(&prof, &[(Complex::default(), 1.0)], &OdeOptions::default()).map_err(err)?;
    let ratio = r.rows[0].lhs;
    let want = (-2.0f64).exp();
    Ok(Row::new("pr2.equality", close(ratio, want, 1e-5), format!("ratio {ratio:.9} vs e^-2 = {want:.9}")))
}

fn pr2_affine() -> RowResult {
    let prof = null_point_profile(&map("z-1")?).map_err(err)?;
    let mut rng = seeded_rng(SEED);
    let pairs: Vec<(Complex, f64)> =
        (0..50).map(|_| (uniform_disk_point(&mut rng, 0.95), rng.gen_range(0.0..3.0))).collect();
    let r = pr2_rate_check(&prof, &pairs, &OdeOptions::default()).map_err(err)?;
    Ok(Row::new("pr2.affine", r.holds, format!("smallest slack {:.3e} over 50 pairs", r.min_slack))
        .witness(r.worst.filter(|_| !r.holds).map(|w| w.z)))
}

fn generator_report(f: &str) -> Result<RigidityReport, String> {
    let prof = null_point_profile(&map(f)?).map_err(err)?;
    generator_rigidity(&prof, SEED).map_err(err)
}

fn passes(r: &RigidityReport, id: &str) -> bool {
    r.check(id).is_some_and(|c| c.status == Status::Pass)
}

fn th4_riccati() -> RowResult {
    let r = generator_report("z^2-1")?;
    let m = r.m.unwrap_or(f64::NAN);
    let ok = r.has(Verdict::IsLFT) && r.has(Verdict::IsAutomorphism) && m.abs() <= 1e-6 && passes(&r, "col3.dfg");
    Ok(Row::new("th4.riccati", ok, format!("m = {m:.1e}, verdicts {:?}", names(&r))))
}

fn th4_affine() -> RowResult {
    let r = generator_report("z-1")?;
    let m = r.m.unwrap_or(f64::NAN);
    let gap = r.check("th4.i").and_then(|c| c.value).unwrap_or(f64::NAN);
    let ok = r.has(Verdict::IsAffine) && passes(&r, "col5") && close(m, 0.5, 1e-6) && gap.abs() <= 1e-6 && passes(&r, "rem6");
    Ok(Row::new("th4.affine", ok, format!("m = {m:.9}, f'(1) - Re f''(1) - 2m = {gap:.1e}")))
}

fn th5_cubic() -> RowResult {
    let r = generator_report(CUBIC_GENERATOR)?;
    let m = r.m.unwrap_or(f64::NAN);
    let f3 = r.jet.as_ref().ok_or("no jet")?.derivative(3);
    let ok = close(m, 1.0, 1e-3) && (f3 - 6.0).norm() <= 1e-6 && !r.has(Verdict::IsLFT);
    Ok(Row::new("th5.cubic", ok, format!("m = {m:.6}, f'''(1) = {:.9}", f3.re)))
}

fn th5_certified() -> RowResult {
    let r = generator_report(CUBIC_GENERATOR)?;
    let c = r.check("th5.iii.certified").ok_or("no certified check")?;
    let lhs = r.value("th5.iii.oriented.lhs_at_0").unwrap_or(f64::NAN);
    let rhs = r.value("th5.iii.oriented.rhs_at_0").unwrap_or(f64::NAN);
    let ok = c.status == Status::Pass && close(lhs, 1.0, 1e-9) && close(rhs, 1.0, 1e-9);
    Ok(Row::new("th5.iii.certified", ok, format!("{}; at z = 0: LHS {lhs:.12}, RHS {rhs:.12}", c.detail)).witness(c.witness))
}

fn audit(id: &str, r: &RigidityReport) -> RowResult {
    let a = r.audit_row(id).ok_or_else(|| format!("no audit row {id}"))?;
    let detail = match (a.lhs, a.rhs, a.witness) {
        (Some(l), Some(rh), Some(_)) => format!("{}: LHS {l:.6} vs RHS {rh:.6}", a.detail),
        _ => a.detail.clone(),
    };
    Ok(Row::new(id, a.certified_ok.unwrap_or(false), detail).printed(a.printed_ok).witness(a.witness))
}

fn th5_printed() -> RowResult {
    audit("th5.iii.printed", &generator_report(CUBIC_GENERATOR)?)
}

fn bk_identity() -> RowResult {
    let r = burns_krantz(&MapExpr::Var, SEED).map_err(err)?;
    Ok(Row::new("bk.identity", r.has(Verdict::IsIdentity) && passes(&r, "th1"), format!("verdicts {:?}", names(&r))))
}

fn bk_cubic() -> Result<RigidityReport, String> {
    burns_krantz(&map(BK_CUBIC)?, SEED).map_err(err)
}

fn bk_mu() -> RowResult {
    let mu = bk_cubic()?.value("mu").unwrap_or(f64::NAN);
    Ok(Row::new("bk.mu", close(mu, 0.05, 1e-6), format!("mu = {mu:.12}")))
}

fn col6_certified() -> RowResult {
    let r = bk_cubic()?;
    let c = r.check("col6.certified").ok_or("no certified check")?;
    Ok(Row::new("col6.certified", c.status == Status::Pass, c.detail.clone()).witness(c.witness))
}

fn col6_printed() -> RowResult {
    audit("col6.printed", &bk_cubic()?)
}

fn bk_falsification() -> RowResult {
    let f = falsification_search(200, SEED).map_err(err)?;
    Ok(Row::new(
        "bk.falsification",
        f.counterexamples.is_empty(),
        format!("{} candidates, {} self-maps, {} jet matches, {} counterexamples", f.candidates, f.selfmaps, f.jet_matches, f.counterexamples.len()),
    ))
}

/// Twenty functions with nonnegative real part: `w·C(z) + c + s·C(ζ̄z)`.
pub fn herglotz_corpus(seed: u64) -> Vec<MapExpr> {
    let mut rng = seeded_rng(seed);
    (0..20)
        .map(|_| {
            let w: f64 = rng.gen_range(0.0..2.0);
            let c = Complex::new(rng.gen_range(0.0..1.0), rng.gen_range(-1.0..1.0));
            let s: f64 = rng.gen_range(0.0..1.0);
            let zeta = Complex::from_polar(1.0, rng.gen_range(0.5..5.8));
            let other = MapExpr::scale(zeta.conj(), MapExpr::Var).cayley();
            MapExpr::add(
                MapExpr::add(MapExpr::scale(w, MapExpr::Var.cayley()), MapExpr::Const(c)),
                MapExpr::scale(s, other),
            )
        })
        .collect()
}

fn lem1_julia() -> RowResult {
    let mut worst = f64::INFINITY;
    let mut witness = None;
    for p in herglotz_corpus(SEED) {
        let r = julia_bound_check(&p, 200, SEED).map_err(err)?;
        if r.check.min_slack < worst {
            worst = r.check.min_slack;
            witness = r.check.witness;
        }
    }
    Ok(Row::new("lem1.julia", worst >= -1e-9, format!("smallest slack {worst:.3e} over 20 functions")).witness(witness))
}

/// Functions with nonnegative real part vanishing at 1.
pub fn reciprocal_corpus() -> Vec<MapExpr> {
    ["1-z", "(1-z)/(2-z)", "0.5*(1-z^2)"].iter().map(|s| parse_map(s).expect("corpus entries parse")).collect()
}

fn lem2_certified() -> RowResult {
    let mut worst = f64::INFINITY;
    let mut ok = true;
    let corpus = reciprocal_corpus();
    for q in &corpus {
        let r = reciprocal_bound_check(q, 500, SEED).map_err(err)?;
        ok &= r.certified_ok;
        worst = worst.min(r.certified.min_slack);
    }
    Ok(Row::new("lem2.certified", ok, format!("smallest slack {worst:.3e} over {} functions", corpus.len())))
}

fn lem2_printed() -> RowResult {
    let r = reciprocal_bound_check(&map("1-z")?, 500, SEED).map_err(err)?;
    let p = &r.printed;
    let detail = match (p.lhs_at_witness, p.rhs_at_witness) {
        (Some(l), Some(rh)) => format!("q = 1-z without the factor 2: LHS {l:.6} vs RHS {rh:.6}"),
        _ => "q = 1-z without the factor 2 holds".into(),
    };
    let expected = !r.printed_ok
        && p.witness == Some(Complex::new(0.5, 0.0))
        && p.lhs_at_witness.is_some_and(|l| close(l, 0.25, 1e-12))
        && p.rhs_at_witness.is_some_and(|rh| close(rh, 1.0 / 6.0, 1e-12));
    Ok(Row::new("lem2.printed", r.certified_ok && expected, detail).printed(r.printed_ok).witness(p.witness))
}

fn repelling() -> Result<RigidityReport, String> {
    repelling_analysis(&Mobius::from_real(1.0, 0.0, -1.0, 2.0)).map_err(err)
}

fn rem3_k0() -> RowResult {
    let r = repelling()?;
    let zeta = Complex::new(r.value("zeta_re").unwrap_or(f64::NAN), r.value("zeta_im").unwrap_or(f64::NAN));
    let k0 = r.value("k0").unwrap_or(f64::NAN);
    let ok = zeta.norm() <= 1e-12 && close(k0, 1.0, 1e-9) && passes(&r, "rem3.k0");
    Ok(Row::new("rem3.k0", ok, format!("zeta = {}, k0 = {k0:.12}", complex_text(zeta))))
}

fn rem3_invariant() -> RowResult {
    let r = repelling()?;
    let dev = r.value("hausdorff").unwrap_or(f64::NAN);
    Ok(Row::new("rem3.invariant", dev <= 1e-8, format!("Hausdorff deviation {dev:.1e} for the boundary of D(1, 1)")))
}

/// Seeded `(α, F''(1), k)` with `α ∈ (0, 1]`, `Re a ≥ 0`; every fifth has `α = 1`.
pub fn inclusion_triples(seed: u64) -> Vec<(f64, Complex, f64)> {
    let mut rng = seeded_rng(seed);
    (0..50)
        .map(|i| {
            let alpha = if i % 5 == 0 { 1.0 } else { rng.gen_range(0.05..1.0) };
            let a = Complex::new(rng.gen_range(0.0..2.0), rng.gen_range(-2.0..2.0));
            let f2 = alpha * alpha * a - alpha * (1.0 - alpha);
            (alpha, f2, rng.gen_range(0.1..5.0))
        })
        .collect()
}

fn inclusion_contained() -> RowResult {
    let mut worst = f64::INFINITY;
    for (alpha, f2, k) in inclusion_triples(SEED) {
        worst = worst.min(horocycle_inclusion(alpha, f2, k).map_err(err)?.gap);
    }
    Ok(Row::new("inclusion.contained", worst >= -1e-12, format!("smallest containment gap {worst:.3e} over 50 triples")))
}

fn inclusion_equality() -> RowResult {
    let mut mismatches = 0;
    let mut first = None;
    for (alpha, f2, k) in inclusion_triples(SEED) {
        let h = horocycle_inclusion(alpha, f2, k).map_err(err)?;
        if h.equal != ((alpha - 1.0).abs() <= 1e-9) {
            mismatches += 1;
            first.get_or_insert((alpha, k));
        }
    }
    let detail = match first {
        None => "equality exactly when alpha = 1".to_string(),
        Some((alpha, k)) => format!(
            "{mismatches} of 50 triples disagree; first: alpha = {alpha:.6}, k = {k:.6} gives equal horocycles"
        ),
    };
    Ok(Row::new("inclusion.equality", mismatches == 0, detail))
}

/// Self-maps fixing 1 with positive angular derivative, LFT and not.
pub fn selfmap_corpus() -> Vec<MapExpr> {
    let i = Complex::i();
    let mut out: Vec<MapExpr> = [
        "z",
        "0.5*z+0.5",
        "z/(2-z)",
        EX1,
        "0.5*(z+1)+0.02*(z-1)^4",
        BK_CUBIC,
        "(1+z)^2/4",
        "cayinv(cayley(z)+0.5)",
    ]
    .iter()
    .map(|s| parse_map(s).expect("corpus entries parse"))
    .collect();
    out.push(MapExpr::Mobius(hyperbolic_aut()));
    out.push(MapExpr::Mobius(Mobius::from_real(1.0, -0.5, -0.5, 1.0)));
    out.push(MapExpr::Mobius(Mobius::new(2.0 - i, i, -i, 2.0 + i)));
    out
}

fn triangle() -> RowResult {
    let mut bad = Vec::new();
    let corpus = selfmap_corpus();
    for f in &corpus {
        let r = lft_analysis(f, &KS).map_err(err)?;
        let det = detect_lft(f, SEED).is_lft;
        let quad = is_quadratic_generator(&selfmap_to_generator(f).map_err(err)?.f).map_err(err)?;
        let lft = r.has(Verdict::IsLFT);
        if lft != det || lft != quad {
            bad.push(format!("{f}: theorem {lft}, detector {det}, quadratic {quad}"));
        }
    }
    Ok(Row::new("triangle", bad.is_empty(), if bad.is_empty() {
        format!("all {} maps agree", corpus.len())
    } else {
        bad.join("; ")
    }))
}

fn lem5_corpus() -> RowResult {
    let mut worst = 0.0f64;
    let corpus = selfmap_corpus();
    for f in &corpus {
        let g = selfmap_to_generator(f).map_err(err)?;
        worst = worst.max(g.identity_residuals.iter().copied().fold(0.0, f64::max));
    }
    Ok(Row::new("lem5.corpus", worst <= 1e-8, format!("largest relative residual {worst:.1e} over {} maps", corpus.len())))
}

/// Twenty seeded generators `−(1−z)²(w·C(z) + c + d(1−z))` with `w ≥ 0` and
/// `Re c ≥ 2|d|`, so that the Berkson-Porta factor has nonnegative real part.
pub fn generator_corpus(seed: u64) -> Vec<MapExpr> {
    let mut rng = seeded_rng(seed);
    let u = || MapExpr::sub(MapExpr::real(1.0), MapExpr::Var);
    (0..20)
        .map(|_| {
            let w: f64 = rng.gen_range(0.0..2.0);
            let d = Complex::from_polar(rng.gen_range(0.0..0.1), rng.gen_range(0.0..std::f64::consts::TAU));
            let c = Complex::new(2.0 * d.norm() + rng.gen_range(0.0..1.0), rng.gen_range(-1.0..1.0));
            let p = MapExpr::add(
                MapExpr::add(MapExpr::scale(w, MapExpr::Var.cayley()), MapExpr::Const(c)),
                MapExpr::scale(d, u()),
            );
            MapExpr::neg(MapExpr::mul(u().pow(2), p))
        })
        .collect()
}

fn th5_i_corpus() -> RowResult {
    let mut worst = f64::INFINITY;
    let mut uncertified = 0;
    for f in generator_corpus(SEED) {
        let prof = null_point_profile(&f).map_err(err)?;
        if !prof.is_generator {
            uncertified += 1;
            continue;
        }
        worst = worst.min(prof.beta - prof.jet.derivative(2).re);
    }
    Ok(Row::new(
        "th5.i.corpus",
        uncertified == 0 && worst >= -1e-8,
        format!("smallest f'(1) - Re f''(1) = {worst:.3e}; {uncertified} uncertified"),
    ))
}

/// Automorphisms with Denjoy-Wolff point 1: `(map, parabolic)`.
fn automorphism_corpus() -> Result<Vec<(MapExpr, bool)>, String> {
    let i = Complex::i();
    Ok(vec![
        (MapExpr::Mobius(hyperbolic_aut()), false),
        (map("cayinv(cayley(z)/0.5+0.3*i)")?, false),
        (MapExpr::Mobius(Mobius::new(2.0 - i, i, -i, 2.0 + i)), true),
        (map("cayinv(cayley(z)-0.7*i)")?, true),
        (MapExpr::Var, false),
    ])
}

fn col4() -> RowResult {
    let mut bad = Vec::new();
    for (f, parabolic) in automorphism_corpus()?.into_iter().filter(|(f, _)| *f != MapExpr::Var) {
        let g = selfmap_to_generator(&f).map_err(err)?;
        let r = generator_rigidity(&g.profile, SEED).map_err(err)?;
        let two = (g.generator_jet.derivative(1) - 2.0).norm() <= 1e-8;
        if !r.has(Verdict::IsAutomorphism) || two != parabolic {
            bad.push(format!("{f}: f'(1) = {}", g.generator_jet.derivative(1)));
        }
    }
    Ok(Row::new("col4", bad.is_empty(), if bad.is_empty() {
        "parabolic exactly when f'(1) = 2, all generate automorphism groups".to_string()
    } else {
        bad.join("; ")
    }))
}

fn pr1() -> RowResult {
    let mut bad = Vec::new();
    for (f, _) in automorphism_corpus()? {
        let r = lft_analysis(&f, &KS).map_err(err)?;
        let c = denjoy_wolff(&f, Complex::default(), 1e-12).map_err(err)?;
        let theorem = if r.has(Verdict::HyperbolicAuto) {
            Kind::Hyperbolic
        } else if r.has(Verdict::ParabolicAuto) {
            Kind::Parabolic
        } else if r.has(Verdict::IsIdentity) {
            Kind::Identity
        } else {
            bad.push(format!("{f}: no subclass"));
            continue;
        };
        if theorem != c.kind {
            bad.push(format!("{f}: {} vs {}", theorem.name(), c.kind.name()));
        }
    }
    Ok(Row::new("pr1", bad.is_empty(), if bad.is_empty() {
        "subclasses match the Denjoy-Wolff classification".to_string()
    } else {
        bad.join("; ")
    }))
}

fn names(r: &RigidityReport) -> Vec<&'static str> {
    r.verdicts.iter().map(|v| v.name()).collect()
}
