use inversive_core::caustics::confocal_caustic_tangent_to;
use inversive_core::centers::CIRCULAR_LOCUS_CENTERS;
use inversive_core::loci::compare_circle;
use inversive_core::*;

type Check = std::result::Result<(), String>;

const CONFIGS: [(f64, f64); 3] = [(1.25, 1.0), (1.5, 0.7), (2.0, 1.0)];
const GRID: usize = 256;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ell(a: f64) -> EllipseSpec {
    make_ellipse(a, 1.0).unwrap()
}

fn cfg(rho: f64) -> InversiveConfig {
    InversiveConfig::new(Focus::F1, rho).unwrap()
}

fn trace<'a>(t: &'a [InvariantTrace], name: &str) -> &'a InvariantTrace {
    t.iter().find(|x| x.name == name).unwrap()
}

fn n3_traces(a: f64, rho: f64) -> std::result::Result<Vec<InvariantTrace>, String> {
    sweep_family(&ell(a), cfg(rho), 3, GRID).map_err(|e| e.to_string())
}

fn circle_of(a: f64, rho: f64, id: u32) -> std::result::Result<LocusClass, String> {
    let id = CenterId::new(id).map_err(|e| e.to_string())?;
    let s = sweep_locus(&ell(a), cfg(rho), id, Family::FocusInversive, GRID).map_err(|e| e.to_string())?;
    Ok(classify_locus(&s, &LocusTolerances::default()))
}

fn tables() -> Check {
    let cells = reproduce_tables(8, 0.3).map_err(|e| e.to_string())?;
    ensure(cells.len() == 30, || format!("{} cells", cells.len()))?;
    for c in &cells {
        ensure(c.passes(TABLE_TOLERANCE), || {
            format!(
                "a/b={} N={}: J={:.6} L={:.6} vs {} {}",
                c.aspect, c.n, c.j, c.l, c.j_ref, c.l_ref
            )
        })?;
    }
    Ok(())
}

fn three_periodic_closed_forms() -> Check {
    for a in [1.1, 1.25, 1.5, 2.0, 3.0] {
        let e = ell(a);
        let (j, l) = n3_closed_form_jl(&e).map_err(|e| e.to_string())?;
        for t1 in par::grid_params(64) {
            let o = three_periodic(&e, t1).map_err(|e| e.to_string())?;
            let jm = joachimsthal(&e, &o).map_err(|e| e.to_string())?;
            let lm = o.perimeter();
            ensure(
                (jm / j - 1.0).abs() < 1e-10 && (lm / l - 1.0).abs() < 1e-10,
                || format!("a={a} t1={t1}: J {jm} vs {j}, L {lm} vs {l}"),
            )?;
        }
    }
    Ok(())
}

fn inversive_perimeter() -> Check {
    for (a, rho) in CONFIGS {
        let t = n3_traces(a, rho)?;
        let p = trace(&t, "perimeter");
        let err = p.rel_error().unwrap();
        ensure(p.rel_std() < 1e-9 && err < 1e-9, || {
            format!("({a},{rho}): rel-std {:.2e}, mean error {:.2e}", p.rel_std(), err)
        })?;
    }
    Ok(())
}

fn spoke_cosine_area_invariants() -> Check {
    for (a, rho) in CONFIGS {
        let t = n3_traces(a, rho)?;
        for name in ["sum_inv_spokes", "sum_cosines", "area_product"] {
            let x = trace(&t, name);
            let err = x.rel_error().unwrap();
            ensure(x.rel_std() < 1e-8 && err < 1e-8, || {
                format!(
                    "({a},{rho}) {name}: rel-std {:.2e}, error {:.2e}",
                    x.rel_std(),
                    err
                )
            })?;
        }
    }
    Ok(())
}

fn x7_stationary() -> Check {
    for (a, rho) in CONFIGS {
        let t = n3_traces(a, rho)?;
        let (x, y) = (trace(&t, "x7_x"), trace(&t, "x7_y"));
        let drift = x.rel_max_dev().hypot(y.rel_max_dev());
        ensure(drift < 1e-8, || format!("({a},{rho}): drift {drift:.2e}·a"))?;
        let err = x.rel_error().unwrap().hypot(y.rel_error().unwrap());
        ensure(err < 1e-8, || format!("({a},{rho}): position error {err:.2e}·a"))?;
    }
    Ok(())
}

fn x9_circle_and_circumbilliard() -> Check {
    for (a, rho) in CONFIGS {
        let e = ell(a);
        let refs = closed_form_refs(&e, rho).map_err(|e| e.to_string())?;
        let class = circle_of(a, rho, 9)?;
        let fit = class.circle.ok_or("no circle fit")?;
        ensure(fit.rms / fit.radius < 1e-7, || {
            format!("({a},{rho}): rms/R {:.2e}", fit.rms / fit.radius)
        })?;
        let m = compare_circle(&fit, refs.c9_dagger, refs.r9_dagger);
        ensure(m.within(1e-7), || format!("({a},{rho}): {m:?}"))?;

        let r = verify_rotating_billiard(&e, rho, GRID).map_err(|e| e.to_string())?;
        for s in [&r.semi_major, &r.semi_minor] {
            let err = s.rel_error().unwrap();
            ensure(s.rel_std() < 1e-7 && err < 1e-7, || {
                format!(
                    "({a},{rho}) {}: rel-std {:.2e}, error {:.2e}",
                    s.name,
                    s.rel_std(),
                    err
                )
            })?;
        }
        ensure(r.max_vertex_j_spread < 1e-7 && r.sweep_j_spread < 1e-7, || {
            format!(
                "({a},{rho}): J spread {:.2e} / {:.2e}",
                r.max_vertex_j_spread, r.sweep_j_spread
            )
        })?;
    }
    Ok(())
}

fn circular_loci() -> Check {
    let implemented: Vec<u32> = CIRCULAR_LOCUS_CENTERS
        .iter()
        .copied()
        .filter(|&k| CenterId::is_supported(k))
        .collect();
    ensure(implemented.len() >= 20, || {
        format!("only {} ids implemented", implemented.len())
    })?;
    for (a, rho) in CONFIGS {
        let e = ell(a);
        for &k in &implemented {
            let class = circle_of(a, rho, k)?;
            ensure(class.verdict == Verdict::Circle, || {
                format!("({a},{rho}) X{k}: {}", class.verdict)
            })?;
            let fit = class.circle.unwrap();
            ensure(fit.center.y.abs() < 1e-8 * a, || {
                format!("({a},{rho}) X{k}: center y {:.2e}", fit.center.y)
            })?;
            if [1, 2, 3, 4, 5, 11, 100].contains(&k) {
                let (c, r) = circle_locus_reference(&e, rho, k).map_err(|e| e.to_string())?;
                let m = compare_circle(&fit, c, r);
                ensure(m.within(1e-7), || format!("({a},{rho}) X{k}: {m:?}"))?;
            }
        }
    }
    Ok(())
}

fn swans_and_sporadic_loci() -> Check {
    let tols = LocusTolerances::default();
    for (a, rho) in CONFIGS {
        for k in [88, 162] {
            let class = circle_of(a, rho, k)?;
            ensure(class.verdict == Verdict::NonConic && class.confident, || {
                format!(
                    "({a},{rho}) X{k}: {} (conic rel {:?})",
                    class.verdict, class.conic_rel_rms
                )
            })?;
        }
        for k in [150, 934] {
            let class = circle_of(a, rho, k)?;
            ensure(class.verdict == Verdict::Circle, || {
                format!("({a},{rho}) X{k}: {}", class.verdict)
            })?;
        }
        let f934 = circle_of(a, rho, 934)?.circle.unwrap();
        let f100 = circle_of(a, rho, 100)?.circle.unwrap();
        let m = compare_circle(&f934, f100.center, f100.radius);
        ensure(
            m.within(1e-7) && m.branch == inversive_core::invariants::Branch::Direct,
            || format!("({a},{rho}) X934 vs X100: {m:?}"),
        )?;
        for k in [88, 100, 162] {
            let id = CenterId::new(k).unwrap();
            let s = swan_check(&ell(a), cfg(rho), id, GRID, &tols).map_err(|e| e.to_string())?;
            ensure(s.max_boundary_error < 1e-8, || {
                format!("({a},{rho}) X{k}: {:.2e}", s.max_boundary_error)
            })?;
        }
    }
    Ok(())
}

fn centroid_and_spieker_circles() -> Check {
    for (a, rho) in CONFIGS {
        for k in [2, 10] {
            let class = circle_of(a, rho, k)?;
            ensure(class.verdict == Verdict::Circle, || {
                format!("({a},{rho}) X{k}: {}", class.verdict)
            })?;
        }
    }
    Ok(())
}

fn center_inversive_circumcenter() -> Check {
    for a in [1.25, 1.5, 2.0, 3.0] {
        let r = center_inversive_x3_check(&ell(a), GRID).map_err(|e| e.to_string())?;
        ensure(r.center_offset < 1e-9 * a && r.tilt < 1e-9, || {
            format!("a={a}: center {:.2e}, tilt {:.2e}", r.center_offset, r.tilt)
        })?;
        let (ex, ey) = r.ratio_errors;
        ensure(ex.abs() < 1e-7 && ey.abs() < 1e-7, || {
            format!("a={a}: semiaxis ratio {ex:.2e} {ey:.2e}")
        })?;
        ensure(r.aspect_product_error.abs() < 1e-7, || {
            format!("a={a}: aspect product {:.2e}", r.aspect_product_error)
        })?;
        ensure(r.max_power_error < 1e-9, || {
            format!("a={a}: power {:.2e}", r.max_power_error)
        })?;
    }
    Ok(())
}

fn pedal_areas() -> Check {
    for (a, rho) in CONFIGS {
        let t = n3_traces(a, rho)?;
        let worst = trace(&t, "pedal_area_gap")
            .samples
            .iter()
            .fold(0.0f64, |m, s| m.max(s.1.abs()));
        ensure(worst <= 1e-10 * a * a, || format!("({a},{rho}): {worst:.2e}"))?;
    }
    Ok(())
}

fn perimeter_beyond_triangles() -> Check {
    for (a, rho) in CONFIGS {
        for n in [4, 5, 6] {
            let t = sweep_family(&ell(a), cfg(rho), n, 128).map_err(|e| e.to_string())?;
            let p = trace(&t, "perimeter");
            ensure(p.rel_std() < 1e-6, || {
                format!("({a},{rho}) N={n}: rel-std {:.2e}", p.rel_std())
            })?;
        }
    }
    Ok(())
}

fn tangency_and_stachel() -> Check {
    for a in [1.25, 1.5, 2.0, 3.0] {
        let e = ell(a);
        let caustic = confocal_caustic_n3(&e).map_err(|e| e.to_string())?;
        for t1 in par::grid_params(GRID) {
            let o = three_periodic(&e, t1).map_err(|e| e.to_string())?;
            for i in 0..3 {
                let line =
                    Line::through(o.vertices[i], o.vertices[(i + 1) % 3]).map_err(|e| e.to_string())?;
                let uv = line.normalized_coeffs().map_err(|e| e.to_string())?;
                let r = tangency_residual(uv, &caustic);
                ensure(r.abs() < 1e-9, || format!("a={a} t1={t1} side {i}: {r:.2e}"))?;
            }
        }
        for n in [3, 4, 5] {
            for t1 in [0.1, 0.7, 2.3] {
                let o = orbit(&e, n, t1).map_err(|e| e.to_string())?;
                let j = joachimsthal(&e, &o).map_err(|e| e.to_string())?;
                let line = Line::through(o.vertices[0], o.vertices[1]).map_err(|e| e.to_string())?;
                let c = confocal_caustic_tangent_to(&e, &line).map_err(|e| e.to_string())?;
                let js = stachel_j(&e, c.a2).map_err(|e| e.to_string())?;
                ensure((js / j - 1.0).abs() < 1e-9, || {
                    format!("a={a} N={n}: {js} vs {j}")
                })?;
            }
        }
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 13] = [
        ("01 J and L tables for N=3..8", tables),
        ("02 3-periodic J and L closed forms", three_periodic_closed_forms),
        ("03 focus-inversive perimeter invariant", inversive_perimeter),
        (
            "04 spoke, cosine and area-product invariants",
            spoke_cosine_area_invariants,
        ),
        ("05 stationary X7 locus", x7_stationary),
        (
            "06 X9 circle and rotating circumbilliard",
            x9_circle_and_circumbilliard,
        ),
        ("07 circular loci of the listed centers", circular_loci),
        ("08 swans and X88/X150/X162/X934 loci", swans_and_sporadic_loci),
        ("09 centroid and Spieker circles", centroid_and_spieker_circles),
        (
            "10 center-inversive circumcenter ellipse",
            center_inversive_circumcenter,
        ),
        ("11 pedal areas about both foci", pedal_areas),
        ("12 inversive perimeter for N=4,5,6", perimeter_beyond_triangles),
        ("13 caustic tangency and Stachel J", tangency_and_stachel),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        match check() {
            Ok(()) => println!("PASS {name}"),
            Err(why) => {
                println!("FAIL {name}: {why}");
                failed.push(name);
            }
        }
    }
    println!(
        "acceptance: {} passed, {} failed",
        13 - failed.len(),
        failed.len()
    );
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
