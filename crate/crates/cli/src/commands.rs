//! Subcommand implementations.

use std::time::{SystemTime, UNIX_EPOCH};

use holodisk::boundary::{self, halfplane_decompose, numeric_jet, StolzProbe};
use holodisk::dynamics::{
    berkson_porta, certify_generator, classify_generator, denjoy_wolff, flow, null_point_profile, selfmap_to_generator,
    Certificate, CertifiedGenerator, DynamicsError, OdeOptions,
};
use holodisk::holomap::{detect_lft, ensure_selfmap, MapExpr};
use holodisk::rigidity::{
    burns_krantz, generator_rigidity, lft_analysis, quantitative_bounds, repelling_analysis, RigidityError,
    RigidityReport, Status,
};
use holodisk::Complex;
use serde_json::{json, Map, Value};

use crate::config::{Cli, Command, Role, RunConfig};
use crate::{report, verify, CliError, Output};

const DW_TOL: f64 = 1e-12;

fn one() -> Complex {
    Complex::new(1.0, 0.0)
}

/// Runs the parsed command line.
pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let cfg = RunConfig::resolve(&cli.opts, &cli.command)?;
    match &cli.command {
        Command::Analyze => analyze(&cfg, true),
        Command::Rigidity => analyze(&cfg, false),
        Command::Classify => classify(&cfg),
        Command::Flow { .. } => trajectory(&cfg),
        Command::Decompose => decompose(&cfg),
        Command::Verify => Ok(verify::run_suite().to_output()),
    }
}

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

/// Conjugates the subject by the rotation taking 1 to `τ`, so that the
/// analyzers, which work at 1, see the base point there.
pub fn at_base_point(e: &MapExpr, tau: Complex) -> MapExpr {
    if tau == one() {
        return e.clone();
    }
    MapExpr::scale(tau.conj(), e.substitute(&MapExpr::scale(tau, MapExpr::Var)))
}

fn finish(mut body: Map<String, Value>, cfg: &RunConfig, status: Status) -> Output {
    body.insert("status".into(), json!(status.name()));
    if !cfg.no_meta {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        body.insert("meta".into(), json!({ "version": env!("CARGO_PKG_VERSION"), "timestamp": secs }));
    }
    Output { text: report::render(&Value::Object(body)), status }
}

fn header(cfg: &RunConfig, subject: &MapExpr) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("subject".into(), json!(subject.to_string()));
    m.insert("role".into(), json!(cfg.role.name()));
    m.insert("tau".into(), report::complex(cfg.tau));
    m.insert("seed".into(), json!(cfg.seed));
    m
}

fn worse(a: Status, b: Status) -> Status {
    match (a, b) {
        (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
        (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
        _ => Status::Pass,
    }
}

/// Collects analyzer reports; out-of-scope analyzers are listed as skipped
/// and numerical breakdowns make the run inconclusive.
struct Reports {
    reports: Map<String, Value>,
    skipped: Map<String, Value>,
    errors: Map<String, Value>,
    status: Status,
}

impl Reports {
    fn new() -> Self {
        Self { reports: Map::new(), skipped: Map::new(), errors: Map::new(), status: Status::Pass }
    }

    fn add(&mut self, name: &str, r: Result<RigidityReport, RigidityError>) -> Result<Option<RigidityReport>, CliError> {
        match r {
            Ok(r) => {
                self.status = worse(self.status, r.overall());
                self.reports.insert(name.into(), report::rigidity(&r));
                Ok(Some(r))
            }
            Err(RigidityError::NotInScope(why)) => {
                self.skipped.insert(name.into(), json!(why));
                Ok(None)
            }
            Err(
                e @ (RigidityError::Eval(_)
                | RigidityError::Validation(_)
                | RigidityError::NotFixingOne(_)
                | RigidityError::BadAngularDerivative(_)),
            ) => Err(input(e)),
            Err(e) => {
                self.status = worse(self.status, Status::Inconclusive);
                self.errors.insert(name.into(), json!(e.to_string()));
                Ok(None)
            }
        }
    }

    fn into_body(self, body: &mut Map<String, Value>) -> Status {
        body.insert("reports".into(), Value::Object(self.reports));
        body.insert("skipped".into(), Value::Object(self.skipped));
        body.insert("errors".into(), Value::Object(self.errors));
        self.status
    }
}

fn analyze(cfg: &RunConfig, full: bool) -> Result<Output, CliError> {
    let subject = cfg.subject_expr()?;
    let e = at_base_point(&subject, cfg.tau);
    let mut body = header(cfg, &subject);
    let status = match cfg.role {
        Role::Selfmap => analyze_selfmap(&e, &subject, cfg, full, &mut body)?,
        Role::Generator => analyze_generator(&e, &subject, cfg, full, &mut body)?,
    };
    Ok(finish(body, cfg, status))
}

/// `map` is the subject moved to base point 1; `original` is classified as given.
fn analyze_selfmap(
    map: &MapExpr,
    original: &MapExpr,
    cfg: &RunConfig,
    full: bool,
    body: &mut Map<String, Value>,
) -> Result<Status, CliError> {
    let sm = ensure_selfmap(map).map_err(input)?;
    let jet = boundary::jet(map, one(), 3).map_err(input)?;
    let alpha = jet.coeff(1).re;
    let mut status = Status::Pass;
    let det = detect_lft(map, cfg.seed);
    if full {
        body.insert(
            "selfmap".into(),
            json!({
                "max_boundary_modulus": sm.max_boundary_modulus,
                "argmax": report::complex(sm.argmax),
                "samples": sm.samples,
            }),
        );
        body.insert("jet".into(), report::jet(&jet));
        let agreement = match numeric_jet(map, one(), 3, &StolzProbe::at_one()) {
            Ok(nj) => {
                let dev = (0..=3).map(|k| (nj.derivative(k) - jet.derivative(k)).norm()).fold(0.0, f64::max);
                let st = if dev <= cfg.jet_tol { Status::Pass } else { Status::Fail };
                json!({ "status": st.name(), "deviation": dev, "tolerance": cfg.jet_tol })
            }
            Err(e) => json!({ "status": Status::Inconclusive.name(), "detail": e.to_string() }),
        };
        if let Some(s) = agreement["status"].as_str() {
            if s != Status::Pass.name() {
                status = worse(status, if s == "fail" { Status::Fail } else { Status::Inconclusive });
            }
        }
        body.insert("jet_agreement".into(), agreement);
        body.insert("lft_detection".into(), report::lft_detection(&det));
        let cls = match denjoy_wolff(original, Complex::default(), DW_TOL) {
            Ok(c) => report::classification(&c),
            Err(e) => json!({ "error": e.to_string() }),
        };
        body.insert("classification".into(), cls);
    }

    let mut reports = Reports::new();
    reports.add("lft", lft_analysis(map, &cfg.k_list))?;
    reports.add("burns_krantz", burns_krantz(map, cfg.seed))?;
    if alpha <= 1.0 + 1e-8 {
        reports.add("quantitative", quantitative_bounds(map, cfg.seed))?;
    } else {
        reports.skipped.insert("quantitative".into(), json!("alpha > 1: 1 is not the Denjoy-Wolff point"));
    }
    match det.mobius.filter(|_| det.is_lft && alpha > 1.0 + 1e-8) {
        Some(m) => {
            reports.add("repelling", repelling_analysis(&m))?;
        }
        None => {
            reports.skipped.insert("repelling".into(), json!("needs an LFT with repelling fixed point 1"));
        }
    }
    Ok(worse(status, reports.into_body(body)))
}

fn certificate_json(c: &Certificate) -> Value {
    match *c {
        Certificate::Trivial => json!({ "kind": "trivial" }),
        Certificate::Interior { tau, min_re_p } => {
            json!({ "kind": "interior", "null_point": report::complex(tau), "min_re_p": min_re_p })
        }
        Certificate::Boundary { beta, m } => json!({ "kind": "boundary", "beta": beta, "m": m }),
    }
}

fn certified(f: &MapExpr) -> Result<CertifiedGenerator, CliError> {
    certify_generator(f).map_err(|e| match e {
        DynamicsError::NotGenerator(why) => CliError::Input(format!("not a generator: {why}")),
        e => input(e),
    })
}

fn analyze_generator(
    f: &MapExpr,
    original: &MapExpr,
    cfg: &RunConfig,
    full: bool,
    body: &mut Map<String, Value>,
) -> Result<Status, CliError> {
    let g = certified(f)?;
    body.insert("certificate".into(), certificate_json(g.certificate()));
    if full {
        let cls = match classify_generator(original) {
            Ok(c) => report::classification(&c),
            Err(e) => json!({ "error": e.to_string() }),
        };
        body.insert("classification".into(), cls);
    }
    let mut reports = Reports::new();
    let at_one = f.eval(one() * (1.0 - 1e-12)).map_or(false, |v| v.norm() <= 1e-8);
    if at_one {
        let prof = null_point_profile(f).map_err(input)?;
        if full {
            body.insert("profile".into(), report::profile(&prof));
        }
        reports.add("generator", generator_rigidity(&prof, cfg.seed))?;
    } else {
        reports.skipped.insert("generator".into(), json!("f does not vanish at the base point"));
    }
    Ok(reports.into_body(body))
}

fn classify(cfg: &RunConfig) -> Result<Output, CliError> {
    let subject = cfg.subject_expr()?;
    let mut body = header(cfg, &subject);
    let result = match cfg.role {
        Role::Selfmap => {
            ensure_selfmap(&subject).map_err(input)?;
            denjoy_wolff(&subject, Complex::default(), DW_TOL)
        }
        Role::Generator => {
            certified(&subject)?;
            classify_generator(&subject)
        }
    };
    let status = match result {
        Ok(c) => {
            body.insert("classification".into(), report::classification(&c));
            Status::Pass
        }
        Err(DynamicsError::Undetermined(why)) => {
            body.insert("classification".into(), json!({ "error": why }));
            Status::Inconclusive
        }
        Err(e) => return Err(input(e)),
    };
    Ok(finish(body, cfg, status))
}

fn trajectory(cfg: &RunConfig) -> Result<Output, CliError> {
    if cfg.role != Role::Generator {
        return Err(CliError::Input("flow needs --role generator".into()));
    }
    let g = certified(&cfg.subject_expr()?)?;
    let t = flow(&g, cfg.z0, cfg.t_end, &OdeOptions::with_tol(cfg.ode_tol)).map_err(input)?;
    Ok(Output { text: t.to_csv(), status: Status::Pass })
}

fn decompose(cfg: &RunConfig) -> Result<Output, CliError> {
    let subject = cfg.subject_expr()?;
    let e = at_base_point(&subject, cfg.tau);
    let mut body = header(cfg, &subject);
    let f = match cfg.role {
        Role::Generator => e,
        Role::Selfmap => {
            let sg = selfmap_to_generator(&e).map_err(input)?;
            body.insert("alpha".into(), json!(sg.alpha));
            sg.f
        }
    };
    body.insert("generator".into(), json!(f.to_string()));
    let bp = berkson_porta(&f, one()).map_err(input)?;
    body.insert(
        "berkson_porta".into(),
        json!({
            "p": bp.p.to_string(),
            "min_re_p": bp.min_re_p,
            "witness": report::complex(bp.witness),
            "is_generator": bp.is_generator,
        }),
    );
    let mut status = if bp.is_generator { Status::Pass } else { Status::Fail };
    match halfplane_decompose(&bp.p) {
        Ok(d) => {
            body.insert(
                "halfplane".into(),
                json!({
                    "a": d.a,
                    "b": report::complex(d.b),
                    "gamma_zero": d.gamma_zero,
                    "min_gap": d.min_gap,
                    "witness": d.witness.map(report::complex),
                }),
            );
        }
        Err(err) => {
            status = worse(status, Status::Inconclusive);
            body.insert("halfplane".into(), json!({ "error": err.to_string() }));
        }
    }
    Ok(finish(body, cfg, status))
}
