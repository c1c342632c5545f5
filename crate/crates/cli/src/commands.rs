use crate::report::{Record, Report};
use crate::{
    AlgebraArg, ClassifyArgs, Cli, Command, CurvatureArgs, Example, FlowArgs, PencilArgs,
    SearchArgs, StructureArgs,
};
use hypo_core::catalog::{Catalog, TABLE};
use hypo_core::classifier::{
    exact_certificate, recorded_floor, render_table, reproduce_table, search, Evidence,
};
use hypo_core::curvature::levi_civita;
use hypo_core::curvature::{curvature, holonomy_span};
use hypo_core::flow::{
    closed_form_solution_1, closed_form_solution_2, coframe_point, integrate, DiagonalAnsatz,
    ScalingJet,
};
use hypo_core::pencil::{
    eisenstein_expansion, flow_sample, pencil_closedness, slag_phase_check, theta_samples,
};
use hypo_core::polar::{build_polar_system, polar_rank_certificate, HypoFrame, EXPECTED_RANK};
use hypo_core::su2::{hypo_torsion_pattern, torsion_decompose, SU2Structure};
use hypo_core::{Form, HypoError, LieAlgebra, Result, Scalar, Q};
use serde_json::json;
use std::f64::consts::PI;

/// Residual bound for the structure equations of the evolved coframes.
const STRUCTURE_TOL: f64 = 1e-9;
/// Tolerance for the floating-point polar system when no rational frame exists.
const FLOAT_FRAME_TOL: f64 = 1e-10;

pub fn run(cli: &Cli) -> Result<Report> {
    let catalog = match &cli.catalog {
        Some(p) => Catalog::from_file(p)?,
        None => Catalog::load()?,
    };
    match &cli.command {
        Command::Parse(a) => parse(a),
        Command::CheckHypo(a) => check_hypo(a, &catalog),
        Command::Torsion(a) => torsion(a, &catalog),
        Command::Flow(a) => flow(a),
        Command::Curvature(a) => curvature_cmd(a),
        Command::Classify(a) => classify(a, &catalog),
        Command::Polar(a) => polar(a, &catalog),
        Command::Pencil(a) => pencil(a),
        Command::Table(a) => table(a, &catalog),
    }
}

fn algebra(arg: &AlgebraArg) -> Result<LieAlgebra> {
    if let Some(n) = arg.algebra.strip_prefix("table:") {
        let row = n
            .parse::<usize>()
            .ok()
            .and_then(|k| k.checked_sub(1))
            .and_then(|k| TABLE.get(k))
            .ok_or_else(|| {
                HypoError::InvalidArgument(format!("no table row {n:?} (rows 1..={})", TABLE.len()))
            })?;
        return LieAlgebra::parse_salamon(row.algebra);
    }
    LieAlgebra::parse_salamon(&arg.algebra)
}

fn structure(text: &str, alg: &LieAlgebra, catalog: &Catalog) -> Result<SU2Structure> {
    let s = if let Some(id) = text.strip_prefix("catalog:") {
        let id: usize = id.parse().map_err(|_| {
            HypoError::InvalidArgument(format!("catalog id {id:?} is not a number"))
        })?;
        catalog.find(alg, id)?.structure.clone()
    } else {
        let parts: Vec<&str> = text.split(';').map(str::trim).collect();
        let [a, w1, w2, w3] = parts[..] else {
            return Err(HypoError::InvalidArgument(format!(
                "structure {text:?} must be catalog:N or four forms separated by ';'"
            )));
        };
        SU2Structure::parse(a, w1, w2, w3)?
    };
    s.require_valid(0.0)?;
    Ok(s)
}

fn parse(a: &AlgebraArg) -> Result<Report> {
    let alg = algebra(a)?;
    let jac = alg.jacobi_check();
    let mut r = Report::new("parse");
    let diffs: Vec<String> = alg.differentials().iter().map(|f| f.to_string()).collect();
    r.records.push(
        Record::new(alg.to_string(), "", "jacobi")
            .residuals(jac.violations.iter().map(|(_, f)| f.max_abs()).collect())
            .pass(jac.ok)
            .detail(json!({
                "differentials": diffs,
                "b1": alg.betti1(),
                "b2": alg.betti2(),
                "nilpotency_step": alg.nilpotency_step(),
            })),
    );
    r.body = format!(
        "algebra {alg}\nb1 = {}  b2 = {}  step = {}\n",
        alg.betti1(),
        alg.betti2(),
        alg.nilpotency_step()
            .map_or("not nilpotent".into(), |s| s.to_string())
    );
    Ok(r)
}

fn check_hypo(a: &StructureArgs, catalog: &Catalog) -> Result<Report> {
    let alg = algebra(&a.algebra)?;
    let s = structure(&a.structure, &alg, catalog)?;
    let check = s.is_hypo(&alg, 0.0);
    let mut r = Report::new("check-hypo");
    r.records.push(
        Record::new(alg.to_string(), &a.structure, "hypo")
            .residuals(check.residuals.to_vec())
            .pass(check.hypo)
            .detail(json!({"conditions": ["d omega1", "d(alpha^omega2)", "d(alpha^omega3)"]})),
    );
    Ok(r)
}

fn q_text(x: &Q) -> String {
    x.to_string()
}

fn torsion(a: &StructureArgs, catalog: &Catalog) -> Result<Report> {
    let alg = algebra(&a.algebra)?;
    let s = structure(&a.structure, &alg, catalog)?;
    let t = torsion_decompose(&s, &alg, 0.0)?;
    let pattern = hypo_torsion_pattern(&t, 0.0);
    let hypo = s.is_hypo(&alg, 0.0).hypo;
    let residuals = vec![
        t.f[1].to_f64().abs(),
        t.f[2].to_f64().abs(),
        t.lambda.to_f64().abs(),
        t.g[0][1].to_f64().abs(),
        t.g[0][2].to_f64().abs(),
        t.gamma[0].max_abs(),
        t.sigma_minus[0].max_abs(),
        t.gamma[1].sub(&t.beta).max_abs(),
        t.gamma[2].sub(&t.beta).max_abs(),
    ];
    let mut r = Report::new("torsion");
    r.body = format!(
        "f = ({}, {}, {})  lambda = {}  g_2^3 = {}\nbeta = {}\n",
        q_text(&t.f[0]),
        q_text(&t.f[1]),
        q_text(&t.f[2]),
        q_text(&t.lambda),
        q_text(&t.g[1][2]),
        t.beta
    );
    r.records.push(
        Record::new(alg.to_string(), &a.structure, "hypo-torsion-pattern")
            .residuals(residuals)
            .pass(pattern)
            .detail(json!({
                "f": t.f.iter().map(q_text).collect::<Vec<_>>(),
                "lambda": q_text(&t.lambda),
                "g": t.g.iter().map(|row| row.iter().map(q_text).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "beta": t.beta.to_string(),
                "is_hypo": hypo,
            })),
    );
    // the two characterizations must agree
    r.records.push(
        Record::new(alg.to_string(), &a.structure, "pattern-matches-hypo").pass(pattern == hypo),
    );
    Ok(r)
}

fn example_name(e: Example) -> &'static str {
    match e {
        Example::One => "(0,0,0,12,13) example 1",
        Example::Two => "(0,0,0,12,13) example 2",
    }
}

fn flow(a: &FlowArgs) -> Result<Report> {
    if a.steps == 0 {
        return Err(HypoError::InvalidArgument(
            "--steps must be positive".into(),
        ));
    }
    let (ansatz, t_end) = match a.example {
        Example::One => (DiagonalAnsatz::example_one(), a.t_end.unwrap_or(0.45)),
        Example::Two => (DiagonalAnsatz::example_two(), a.t_end.unwrap_or(0.7)),
    };
    let traj = integrate(&ansatz, &[1.0, 1.0], 0.0, t_end, a.steps)?;
    let exact = |t: f64| -> Result<ScalingJet> {
        match a.example {
            Example::One => closed_form_solution_1(-2.0, 1.0, 1.0)?.jet(t),
            Example::Two => closed_form_solution_2().jet(t),
        }
    };
    let (mut err, mut conserved) = (0.0f64, 0.0f64);
    for st in &traj.states {
        let j = exact(st.t)?;
        err = err
            .max((st.s[0] - j.s[0]).abs())
            .max((st.s[1] - j.s[1]).abs());
        let c = match a.example {
            Example::One => st.s[0] / (st.s[1] * st.s[1]) - 1.0,
            Example::Two => st.s[0] * st.s[0] + st.s[1] * st.s[1] - 2.0,
        };
        conserved = conserved.max(c.abs());
    }
    let mut r = Report::new("flow");
    if a.table {
        r.body = traj.to_table();
    }
    r.records.push(
        Record::new(example_name(a.example), "", "closed-form")
            .residuals(vec![
                err,
                traj.richardson_error,
                conserved,
                traj.max_hypo_residual,
            ])
            .pass(err <= a.tol)
            .detail(json!({
                "groups": traj.groups,
                "interval": [traj.interval.0, traj.interval.1],
                "steps": a.steps,
                "residual_names": ["sup error", "richardson", "conservation", "hypo"],
                "final": traj.states.last().map(|s| s.s.clone()),
            })),
    );
    Ok(r)
}

fn curvature_cmd(a: &CurvatureArgs) -> Result<Report> {
    let (ansatz, points) = match a.example {
        Example::One => (DiagonalAnsatz::example_one(), vec![-1.0, 0.0, 0.4]),
        Example::Two => (DiagonalAnsatz::example_two(), vec![-1.0, 0.0, 1.0]),
    };
    let points = if a.at.is_empty() {
        points
    } else {
        a.at.clone()
    };
    let cf1 = closed_form_solution_1(-2.0, 1.0, 1.0)?;
    let cf2 = closed_form_solution_2();
    let mut r = Report::new("curvature");
    let mut samples = Vec::new();
    let mut omega = None;
    for &x in &points {
        let jet = match a.example {
            Example::One => cf1.jet(x)?,
            Example::Two => cf2.jet_at_u(x)?,
        };
        let s = coframe_point(&ansatz, &jet);
        let conn = levi_civita(&s.point)?;
        let structure = conn.structure_residual(&s.point);
        let curv = curvature(&conn, &s.point)?;
        let ric = curv.ricci_sup_norm();
        let label = match a.example {
            Example::One => format!("t={x}"),
            Example::Two => format!("u={x}"),
        };
        r.records.push(
            Record::new(example_name(a.example), label, "ricci-flat")
                .residuals(vec![ric, structure, curv.bianchi_residual()])
                .pass(ric <= a.tol && structure <= STRUCTURE_TOL)
                .detail(json!({"t": jet.t, "residual_names": ["ricci", "structure", "bianchi"]})),
        );
        omega.get_or_insert(s.su3.omega.clone());
        samples.push(curv);
    }
    let omega: Form<f64> =
        omega.ok_or_else(|| HypoError::InvalidArgument("no sample points".into()))?;
    let hol = holonomy_span(&samples, &omega)?;
    r.records.push(
        Record::new(example_name(a.example), "", "holonomy-su3")
            .residuals(vec![hol.commutator, hol.trace])
            .pass(hol.dimension == 8 && hol.contained_in_su3)
            .detail(json!({"dimension": hol.dimension, "singular_values": hol.singular_values})),
    );
    Ok(r)
}

fn classify(a: &ClassifyArgs, catalog: &Catalog) -> Result<Report> {
    let alg = algebra(&a.algebra)?;
    let mut r = Report::new("classify");
    let row = TABLE.iter().find(|row| row.algebra == alg.to_string());
    let entries = catalog.for_algebra(&alg);
    let exact: Vec<usize> = entries
        .iter()
        .filter(|e| e.structure.is_hypo(&alg, 0.0).hypo)
        .map(|e| e.id)
        .collect();
    if !exact.is_empty() {
        r.records.push(
            Record::new(alg.to_string(), format!("catalog:{exact:?}"), "admits-hypo")
                .residuals(vec![0.0])
                .pass(row.is_none_or(|row| row.admits_hypo))
                .detail(json!({"evidence": "exact", "catalog_ids": exact})),
        );
        return Ok(r);
    }
    let report = search(&alg, a.search.starts, a.search.seed)?;
    let certificate = exact_certificate(&report.best_b, &alg);
    let found = certificate == Some(true);
    let floor = recorded_floor(&alg);
    let evidence = if found {
        "exact certificate of the best frame"
    } else {
        "empirical; not a proof"
    };
    r.body = format!(
        "best normalized defect {:.6e} over {} starts (seed {}), {} evaluations\n",
        report.best_defect, report.starts, report.seed, report.evaluations
    );
    r.records.push(
        Record::new(
            alg.to_string(),
            "",
            if found {
                "admits-hypo"
            } else {
                "no-hypo-found"
            },
        )
        .residuals(vec![report.best_defect])
        .pass(row.is_none_or(|row| row.admits_hypo == found))
        .detail(json!({
            "evidence": evidence,
            "starts": report.starts,
            "seed": report.seed,
            "recorded_floor": floor,
            "barrier_starts": report.barrier_starts,
        })),
    );
    Ok(r)
}

fn polar(a: &StructureArgs, catalog: &Catalog) -> Result<Report> {
    let alg = algebra(&a.algebra)?;
    let s = structure(&a.structure, &alg, catalog)?;
    let mut r = Report::new("polar");
    let cert = match HypoFrame::adapted(&alg, &s, 0.0) {
        Ok(frame) => polar_rank_certificate(&build_polar_system(&frame), 0.0),
        Err(HypoError::InvalidStructure(_)) => {
            let frame = HypoFrame::adapted(&alg.to_f64(), &s.to_f64(), FLOAT_FRAME_TOL)?;
            polar_rank_certificate(&build_polar_system(&frame), FLOAT_FRAME_TOL)
        }
        Err(e) => return Err(e),
    };
    r.records.push(
        Record::new(alg.to_string(), &a.structure, "polar-rank")
            .residuals(vec![cert.violation])
            .pass(cert.rank == EXPECTED_RANK && cert.compatible)
            .detail(json!({
                "rank": cert.rank,
                "compatible": cert.compatible,
                "extension_dim": cert.extension_dim,
                "block_sizes": cert.block_sizes,
            })),
    );
    Ok(r)
}

fn pencil(a: &PencilArgs) -> Result<Report> {
    let ts = if a.t.is_empty() {
        vec![-1.0, 0.0, 0.4]
    } else {
        a.t.clone()
    };
    let mut r = Report::new("pencil");
    let thetas = theta_samples();
    let alg = "(0,0,0,12,13) example 1";
    for &t in &ts {
        let sample = flow_sample(t)?;
        let rows = pencil_closedness(&sample, &thetas)?;
        let col =
            |f: fn(&hypo_core::pencil::PencilRow) -> f64| rows.iter().map(f).fold(0.0, f64::max);
        let residuals = vec![
            col(|x| x.closedness),
            col(|x| x.span),
            col(|x| x.phase),
            col(|x| x.kahler),
            col(|x| x.equivariance),
            col(|x| x.lagrangian),
        ];
        let pass = residuals.iter().all(|x| *x <= a.tol);
        r.records.push(Record::new(alg, format!("t={t}"), "pencil").residuals(residuals).pass(pass).detail(json!({
            "thetas": thetas,
            "residual_names": ["closedness", "span", "phase", "kahler", "equivariance", "lagrangian"],
        })));
    }
    let s0 = flow_sample(0.0)?;
    for (name, th) in [
        ("0", 0.0),
        ("pi/3", PI / 3.0),
        ("2pi/3", 2.0 * PI / 3.0),
        ("pi/5", PI / 5.0),
    ] {
        let c = slag_phase_check(&s0, th);
        r.records.push(
            Record::new(alg, format!("t=0 theta={name}"), "slag-phase")
                .residuals(vec![c.residual])
                .pass(c.holds(a.tol))
                .detail(json!({"same_phase_as_v": c.shares_phase_with_v(a.tol)})),
        );
    }
    let (lhs, rhs) = eisenstein_expansion(&s0);
    let d = lhs.sub(&rhs).max_abs();
    r.records.push(
        Record::new(alg, "t=0", "eisenstein-expansion")
            .residuals(vec![d])
            .pass(d <= a.tol),
    );
    Ok(r)
}

fn table(a: &SearchArgs, catalog: &Catalog) -> Result<Report> {
    let verdicts = reproduce_table(catalog, a.starts, a.seed)?;
    let mut r = Report::new("table");
    r.body = render_table(&verdicts);
    for v in &verdicts {
        let (residual, detail) = match &v.evidence {
            Evidence::Exact { catalog_ids } => (
                0.0,
                json!({"evidence": "exact", "catalog_ids": catalog_ids}),
            ),
            Evidence::Search { report, floor } => (
                report.best_defect,
                json!({"evidence": "empirical; not a proof", "starts": report.starts, "seed": report.seed, "floor": floor}),
            ),
        };
        r.records.push(
            Record::new(v.row.algebra, "", "table-row")
                .residuals(vec![residual])
                .pass(v.matches())
                .detail(json!({
                    "step": v.step,
                    "b2": v.b2,
                    "hypo": v.admits_hypo(),
                    "detail": detail,
                })),
        );
    }
    Ok(r)
}
