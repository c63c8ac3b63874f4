use std::f64::consts::TAU;
use std::fmt;
use std::io;

use inversive_core::loci::{compare_circle, REFERENCE_CIRCLE_IDS};
use inversive_core::tables::{FIRST_N, TABLE_TOLERANCE};
use inversive_core::*;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::report::{num, Check, Report, Table};
use crate::svg::{Scene, PALETTE};

#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Solver { stage: &'static str, source: Error },
    Output(io::Error),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Validation(m) => write!(f, "invalid configuration: {m}"),
            Failure::Solver { stage, source } => write!(f, "{stage} failed: {source}"),
            Failure::Output(e) => write!(f, "writing output failed: {e}"),
        }
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Solver { .. } | Failure::Output(_) => 3,
        }
    }
}

fn root_cause(e: &Error) -> &Error {
    match e {
        Error::Sample { source, .. } => root_cause(source),
        e => e,
    }
}

/// Maps library errors raised at `stage`; configuration problems detected by
/// the library count as validation errors.
fn at(stage: &'static str) -> impl Fn(Error) -> Failure {
    move |e| match root_cause(&e) {
        Error::InvalidSemiaxes { .. }
        | Error::CircularBilliard { .. }
        | Error::InvalidRadius(_)
        | Error::GridTooSmall { .. }
        | Error::UnsupportedCenter(_)
        | Error::InvalidVertexCount(_) => Failure::Validation(format!("{stage}: {e}")),
        _ => Failure::Solver { stage, source: e },
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn ellipse_outline(a: f64, b: f64) -> Vec<Point2> {
    (0..360)
        .map(|k| {
            let t = TAU * k as f64 / 360.0;
            Point2::new(a * t.cos(), b * t.sin())
        })
        .collect()
}

fn curve(f: impl Fn(f64) -> Result<Point2>) -> Vec<Point2> {
    (0..360).filter_map(|k| f(TAU * k as f64 / 360.0).ok()).collect()
}

pub fn orbit_cmd(cfg: &RunConfig) -> std::result::Result<Report, Failure> {
    let e = cfg.ellipse();
    let o = orbit(&e, cfg.n, cfg.t1).map_err(at("orbit solver"))?;
    let j = joachimsthal(&e, &o).map_err(at("Joachimsthal constant"))?;
    let l = o.perimeter();
    let caustic = CausticSpec::from_joachimsthal(&e, j);
    let mut r = Report::new();

    r.checks
        .push(Check::at_most("reflection_residual", o.max_residual, 1e-10));
    r.checks
        .push(Check::at_most("j_spread", o.j_spread(), cfg.tolerances.invariant));
    let mut closed = Value::Null;
    if cfg.n == 3 && !e.is_circle() {
        let (jc, lc) = n3_closed_form_jl(&e).map_err(at("closed forms"))?;
        r.checks.push(Check::at_most(
            "j_closed_form",
            (j / jc - 1.0).abs(),
            cfg.tolerances.invariant,
        ));
        r.checks.push(Check::at_most(
            "l_closed_form",
            (l / lc - 1.0).abs(),
            cfg.tolerances.invariant,
        ));
        closed = json!({ "j": jc, "l": lc });
    }
    r.results.push(json!({
        "n": o.n,
        "t1": cfg.t1,
        "j": j,
        "l": l,
        "jl": j * l,
        "j_spread": o.j_spread(),
        "max_residual": o.max_residual,
        "caustic": caustic,
        "closed_form": closed,
        "params": o.params,
        "vertices": o.vertices,
    }));

    let mut t = Table::new("orbit", &["index", "t", "x", "y", "j"]);
    for (i, ((p, v), jv)) in o.params.iter().zip(&o.vertices).zip(&o.j_values).enumerate() {
        t.push(vec![i.to_string(), num(*p), num(v.x), num(v.y), num(*jv)]);
    }
    r.tables.push(t);

    let mut s = Scene::new(format!(
        "N={} orbit, a={}, b={}: J={j:.6}, L={l:.6}",
        cfg.n, cfg.a, cfg.b
    ));
    s.closed("billiard", PALETTE[1], ellipse_outline(e.a, e.b));
    s.closed("caustic", PALETTE[2], ellipse_outline(caustic.a2, caustic.b2));
    s.closed("orbit", PALETTE[0], o.vertices.clone());
    r.svg = Some(s.render());
    Ok(r)
}

fn trace_kind(t: &InvariantTrace) -> &'static str {
    match (t.closed_form.is_some(), t.name.as_str()) {
        (true, _) => "closed form",
        (false, "perimeter") => "conjecture: no closed form",
        (false, _) => "measured",
    }
}

pub fn invariants_cmd(cfg: &RunConfig) -> std::result::Result<Report, Failure> {
    let e = cfg.ellipse();
    let inv = cfg.inversive();
    let traces = sweep_family(&e, inv, cfg.n, cfg.grid).map_err(at("invariant sweep"))?;
    let tol = cfg.tolerances;
    let mut r = Report::new();
    let mut t = Table::new(
        "invariants",
        &[
            "name",
            "kind",
            "mean",
            "std",
            "rel_std",
            "closed_form",
            "rel_error",
            "branch",
        ],
    );
    for x in &traces {
        let kind = trace_kind(x);
        let branch = x
            .branch
            .map(|b| format!("{b:?}").to_lowercase())
            .unwrap_or_default();
        t.push(vec![
            x.name.clone(),
            kind.to_string(),
            num(x.mean),
            num(x.std),
            num(x.rel_std()),
            opt(x.closed_form),
            opt(x.rel_error()),
            branch.clone(),
        ]);
        match kind {
            "closed form" => {
                r.checks.push(Check::at_most(
                    format!("{}.rel_std", x.name),
                    x.rel_std(),
                    tol.invariant,
                ));
                r.checks.push(Check::at_most(
                    format!("{}.rel_error", x.name),
                    x.rel_error().unwrap(),
                    tol.invariant,
                ));
            }
            "conjecture: no closed form" => {
                r.checks.push(Check::at_most(
                    format!("{}.rel_std", x.name),
                    x.rel_std(),
                    tol.conjecture,
                ));
            }
            _ => {}
        }
        r.results.push(json!({
            "name": x.name,
            "kind": kind,
            "mean": x.mean,
            "std": x.std,
            "rel_std": x.rel_std(),
            "max_abs_dev": x.max_abs_dev,
            "closed_form": x.closed_form,
            "rel_error": x.rel_error(),
            "branch": x.branch,
        }));
    }
    r.tables.push(t);

    let mut header = vec!["t1"];
    header.extend(traces.iter().map(|x| x.name.as_str()));
    let mut samples = Table::new("invariant_samples", &header);
    for (i, (t1, _)) in traces[0].samples.iter().enumerate() {
        let mut row = vec![num(*t1)];
        row.extend(traces.iter().map(|x| num(x.samples[i].1)));
        samples.push(row);
    }
    r.tables.push(samples);

    let mut s = Scene::new(format!(
        "focus-inversive N={} family, a={}, b={}, rho={}",
        cfg.n, cfg.a, cfg.b, cfg.rho
    ));
    s.closed("billiard", PALETTE[1], ellipse_outline(e.a, e.b));
    s.closed("limacon", PALETTE[2], curve(|t| limacon_point(&e, cfg.rho, t)));
    for (k, t1) in [0.0, 0.9, 2.1].into_iter().enumerate() {
        let o = orbit(&e, cfg.n, t1).map_err(at("orbit solver"))?;
        let p = focus_inversive(&e, &o, inv).map_err(at("inversion"))?;
        s.closed(format!("polygon at t1={t1}"), PALETTE[3 + k], p.vertices);
    }
    if cfg.grid >= 64 {
        let lines =
            side_family(&e, inv, Family::FocusInversive, cfg.n, cfg.grid).map_err(at("side lines"))?;
        let env = envelope_sample(&lines).swap_remove(0);
        let mut t = Table::new("envelope", &["t1", "x", "y"]);
        for (t1, p) in lines.params.iter().zip(&env) {
            t.push(vec![num(*t1), opt(p.map(|p| p.x)), opt(p.map(|p| p.y))]);
        }
        r.tables.push(t);
        s.open("side envelope", PALETTE[6], env);
    }
    r.svg = Some(s.render());
    Ok(r)
}

fn locus_tolerances(cfg: &RunConfig) -> LocusTolerances {
    LocusTolerances {
        circle: cfg.tolerances.circle,
        conic: cfg.tolerances.conic,
        ..LocusTolerances::default()
    }
}

pub fn loci_cmd(cfg: &RunConfig) -> std::result::Result<Report, Failure> {
    let e = cfg.ellipse();
    let inv = cfg.inversive();
    let family = cfg.family.expect("family validated");
    let tols = locus_tolerances(cfg);
    let tol = cfg.tolerances;
    let mut r = Report::new();
    let mut points = Table::new("loci_points", &["id", "family", "t1", "x", "y"]);
    let mut fits = Table::new(
        "loci_fits",
        &[
            "id",
            "family",
            "verdict",
            "confident",
            "circle_cx",
            "circle_cy",
            "circle_r",
            "circle_rms",
            "conic_rel_rms",
            "ellipse_cx",
            "ellipse_cy",
            "semi_major",
            "semi_minor",
            "angle",
        ],
    );
    let mut s = Scene::new(format!(
        "{family} loci, a={}, b={}, rho={}",
        cfg.a, cfg.b, cfg.rho
    ));
    s.closed("billiard", PALETTE[1], ellipse_outline(e.a, e.b));
    match family {
        Family::FocusInversive => s.closed("limacon", PALETTE[2], curve(|t| limacon_point(&e, cfg.rho, t))),
        Family::CenterInversive => {
            s.closed("Booth curve", PALETTE[2], curve(|t| booth_point(&e, cfg.rho, t)))
        }
        Family::Billiard => {}
    }

    for (k, &index) in cfg.ids.iter().enumerate() {
        let id = CenterId::new(index).map_err(at("center lookup"))?;
        let sample = sweep_locus(&e, inv, id, family, cfg.grid).map_err(at("locus sweep"))?;
        let class = classify_locus(&sample, &tols);
        let mut result = json!({
            "id": index,
            "family": family,
            "verdict": class.verdict,
            "confident": class.confident,
            "diameter": class.diameter,
            "locus_scale": class.locus_scale,
            "circle": class.circle,
            "conic_rel_rms": class.conic_rel_rms,
            "ellipse": class.conic.and_then(|c| c.ellipse),
        });

        if family == Family::FocusInversive && REFERENCE_CIRCLE_IDS.contains(&index) {
            let (c, rad) = circle_locus_reference(&e, cfg.rho, index).map_err(at("closed forms"))?;
            let err = class.circle.map(|fit| compare_circle(&fit, c, rad));
            let worst = err.map_or(f64::INFINITY, |m| m.center_rel_error.max(m.radius_rel_error));
            r.checks.push(Check::at_most(
                format!("X{index}.closed_form_circle"),
                worst,
                tol.circle,
            ));
            result["reference"] = json!({ "center": c, "radius": rad, "match": err });
        }
        if family == Family::CenterInversive && index == 3 {
            let x3 = center_inversive_x3_check(&e, cfg.grid).map_err(at("circumcenter ellipse check"))?;
            let (ex, ey) = x3.ratio_errors;
            r.checks
                .push(Check::at_most("X3.semiaxis_ratio_x", ex.abs(), tol.conic));
            r.checks
                .push(Check::at_most("X3.semiaxis_ratio_y", ey.abs(), tol.conic));
            r.checks.push(Check::at_most(
                "X3.aspect_product",
                x3.aspect_product_error.abs(),
                tol.conic,
            ));
            r.checks.push(Check::at_most(
                "X3.power",
                x3.max_power_error / x3.delta,
                tol.invariant,
            ));
            result["ratio_report"] = json!({
                "delta": x3.delta,
                "inverse_delta": 1.0 / x3.delta,
                "billiard_axes": x3.billiard_axes,
                "inversive_axes": x3.inversive_axes,
                "ratio_errors": x3.ratio_errors,
                "aspect_product_error": x3.aspect_product_error,
                "max_power_error": x3.max_power_error,
                "center_offset": x3.center_offset,
                "tilt": x3.tilt,
            });
        }
        if family == Family::Billiard {
            let err = sample
                .points
                .iter()
                .map(|p| (e.implicit(*p) - 1.0).abs())
                .fold(0.0, f64::max);
            result["max_billiard_residual"] = json!(err);
        }

        for (t1, p) in sample.params.iter().zip(&sample.points) {
            points.push(vec![
                index.to_string(),
                family.to_string(),
                num(*t1),
                num(p.x),
                num(p.y),
            ]);
        }
        let c = class.circle;
        let el = class.conic.and_then(|c| c.ellipse);
        fits.push(vec![
            index.to_string(),
            family.to_string(),
            class.verdict.to_string(),
            class.confident.to_string(),
            opt(c.map(|c| c.center.x)),
            opt(c.map(|c| c.center.y)),
            opt(c.map(|c| c.radius)),
            opt(c.map(|c| c.rms)),
            opt(class.conic_rel_rms),
            opt(el.map(|e| e.center.x)),
            opt(el.map(|e| e.center.y)),
            opt(el.map(|e| e.semi_major)),
            opt(el.map(|e| e.semi_minor)),
            opt(el.map(|e| e.angle)),
        ]);
        let color = PALETTE[(k + 3) % PALETTE.len()];
        let label = format!("X{index}: {}", class.verdict);
        if class.verdict == Verdict::Point {
            s.dots(label, color, sample.points.clone());
        } else {
            s.closed(label, color, sample.points.clone());
        }
        r.results.push(result);
    }
    r.tables.push(points);
    r.tables.push(fits);
    r.svg = Some(s.render());
    Ok(r)
}

pub fn tables_cmd(cfg: &RunConfig) -> std::result::Result<Report, Failure> {
    let max_n = cfg.max_n.expect("max-n validated");
    let cells = reproduce_tables(max_n, cfg.t1).map_err(at("table reproduction"))?;
    let mut r = Report::new();

    let mut header: Vec<String> = vec!["a/b".into(), "quantity".into()];
    header.extend((FIRST_N..=max_n).map(|n| format!("N={n}")));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut grid = Table::new("tables", &header);
    let mut diff = Table::new(
        "tables_diff",
        &["a/b", "n", "j", "j_ref", "l", "l_ref", "max_abs_diff", "passed"],
    );
    for t in REFERENCE_TABLES.iter() {
        let row: Vec<&TableCell> = cells.iter().filter(|c| c.aspect == t.aspect).collect();
        for (q, f) in [
            ("J", (|c: &TableCell| c.j) as fn(&TableCell) -> f64),
            ("L", |c| c.l),
            ("JL", |c| c.j * c.l),
        ] {
            let mut line = vec![t.aspect.to_string(), q.to_string()];
            line.extend(row.iter().map(|c| num(f(c))));
            grid.push(line);
        }
    }
    for c in &cells {
        let passed = c.passes(TABLE_TOLERANCE);
        diff.push(vec![
            c.aspect.to_string(),
            c.n.to_string(),
            num(c.j),
            c.j_ref.to_string(),
            num(c.l),
            c.l_ref.to_string(),
            num(c.max_abs_diff()),
            passed.to_string(),
        ]);
        r.checks.push(Check::at_most(
            format!("a/b={} N={}", c.aspect, c.n),
            c.max_abs_diff(),
            TABLE_TOLERANCE,
        ));
        r.results.push(json!({
            "aspect": c.aspect,
            "n": c.n,
            "j": c.j,
            "l": c.l,
            "jl": c.j * c.l,
            "j_ref": c.j_ref,
            "l_ref": c.l_ref,
        }));
    }
    r.tables.push(grid);
    r.tables.push(diff);
    Ok(r)
}
