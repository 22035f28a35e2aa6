//! One PASS/FAIL line per acceptance criterion. Set UPDATE_GOLDEN=1 to
//! rewrite the chart golden files.

mod support;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use mmf_sseq::chart::{chart_dataset_page, render_svg, svg_color, ChartWindow};
use mmf_sseq::grading::{is_homogeneous, parse_expression, parse_formula, TriDegree};
use mmf_sseq::homotopy::{assemble_stem, expand_hidden_extensions, HiddenExtension};
use mmf_sseq::mmfdata::{
    extend_by_periodicity, periodicity_report, shipped, validate_dataset, Check, Dataset, PageKey,
};
use mmf_sseq::sseq::{
    check_d_squared, forced_relations, infer_differential, turn_page, unresolved_obligations,
    validate_differential_table, Differential, TurnWindow,
};
use mmf_sseq::taulin::{smith_normal_form, TauMatrix, TorsionModule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::{from_scalar, invariant_factors, to_scalar, Synthetic};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn degree_laws(d: &Dataset) -> Outcome {
    let mut rows = 0;
    for key in [PageKey::Finite(2), PageKey::Finite(3), PageKey::Finite(4)] {
        let p = &d.pages[&key];
        for c in validate_differential_table(&p.table, &d.atoms) {
            rows += 1;
            ensure(c.ok, || format!("E_{key} {} -> {}: {:?} vs {}", c.source, c.target, c.target_degree, c.expected))?;
        }
    }
    let einf = &d.pages[&PageKey::Infinity];
    for g in einf.generators() {
        let deg = is_homogeneous(&g.expr, &d.atoms).ok().flatten();
        ensure(deg == Some(g.degree), || format!("E_inf {} at {}", g.label(&d.atoms), g.degree))?;
    }
    for h in &d.hidden_tau {
        let e = &h.extension;
        ensure(e.target_degree - e.source_degree == TriDegree::new(0, 1, -1), || {
            format!("hidden {} jumps {}", e.label(&d.atoms), e.target_degree - e.source_degree)
        })?;
    }
    Ok(format!(
        "{rows} differential rows, {} E_inf rows, {} hidden rows",
        einf.table.entries.len(),
        d.hidden_tau.len()
    ))
}

fn d_squared(d: &Dataset) -> Outcome {
    let e2 = d.page(PageKey::Finite(2)).unwrap();
    let e3 = d.pages[&PageKey::Finite(3)].generators();
    let obs = check_d_squared(&e2);
    let forced = forced_relations(&e2, &e3);
    let extra: Vec<_> = forced.iter().filter_map(|o| o.value.known().cloned()).collect();
    let skipped = forced.len() - extra.len();
    let open = unresolved_obligations(&e2, &obs, &extra);
    ensure(open.is_empty(), || format!("unresolved: {}", open[0].origin))?;
    let a = &d.atoms;
    let delta2 = Differential::Known(parse_expression("tau^2 g (P h_2 n + h_0 a d)", a).unwrap());
    ensure(obs.iter().any(|o| o.value == delta2), || "d(d(Delta^2)) missing".into())?;
    let an = Differential::Known(parse_expression("P h_2 n + h_0 a d", a).unwrap());
    ensure(forced.iter().any(|o| o.value == an), || "survival of a n not forced".into())?;
    Ok(format!(
        "{} obligations closed by {} forced relations ({skipped} survival conditions not evaluable on E_2)",
        obs.len(),
        extra.len()
    ))
}

fn inferences(d: &Dataset) -> Outcome {
    let a = &d.atoms;
    let cases = [
        (2, "c u + h_1^2 e", "u", true),
        (2, "h_1 (Delta u + tau n g) + u Delta h_1", "Delta u + tau n g", false),
        (4, "P Delta^6 h_1 c + tau^4 Delta^4 P e g^2", "Delta^6 h_1 c", true),
    ];
    let mut out = Vec::new();
    for (r, rel, x, unique) in cases {
        let p = d.page(PageKey::Finite(r)).unwrap();
        let x = parse_formula(x, a).unwrap();
        let inf = infer_differential(&parse_formula(rel, a).unwrap(), &x, &p).map_err(|e| e.to_string())?;
        let listed = p
            .differentials
            .get(&x.expand(a))
            .ok_or_else(|| format!("no row for {}", x.render(a)))?;
        ensure(inf.admits(&listed.target_expr), || {
            format!("d_{r}({}) = {} rejects {}", inf.unknown, inf.solution.render(a), listed.target.render(a))
        })?;
        ensure(!unique || inf.is_unique(), || format!("d_{r}({}) is ambiguous", inf.unknown))?;
        if unique {
            ensure(inf.solution == listed.target_expr, || {
                format!("d_{r}({}) = {} vs {}", inf.unknown, inf.solution.render(a), listed.target.render(a))
            })?;
        }
        out.push(format!("d_{r}({}) = {}", inf.unknown, listed.target.render(a)));
    }
    Ok(out.join("; "))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (cases, mut columns, mut classes, mut torsion) = (24, 0, 0, 0);
    for n in 0..cases {
        let syn = Synthetic::random(&mut rng);
        let page = syn.page();
        let window = TurnWindow { max_stem: 12, max_filtration: 6 };
        let next = turn_page(&page, window).map_err(|e| format!("case {n}: {e}"))?;
        for s in 0..=window.max_stem {
            for f in 0..=window.max_filtration {
                let expected = syn.oracle_column(s, f);
                let mut got: Vec<(i32, TorsionModule)> = next
                    .columns
                    .get(&(s, f))
                    .map(|c| c.classes.iter().map(|x| (x.degree.w, x.module)).collect())
                    .unwrap_or_default();
                got.sort();
                ensure(got == expected, || format!("case {n} {syn:?} column ({s},{f}): {got:?} vs {expected:?}"))?;
                columns += 1;
                classes += got.len();
                torsion += got.iter().filter(|(_, m)| !m.is_free()).count();
            }
        }
    }
    Ok(format!("{cases} presentations, {columns} columns, {classes} summands ({torsion} torsion)"))
}

fn check_snf(rows: &[Vec<u64>]) -> Result<(), String> {
    let m = TauMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| to_scalar(x)).collect()).collect());
    let got: Vec<u64> = smith_normal_form(&m).diagonal().iter().map(from_scalar).filter(|&x| x != 0).collect();
    let want = invariant_factors(rows);
    ensure(got == want, || format!("{rows:?}: {got:?} vs {want:?}"))
}

fn exhaustive(r: usize, c: usize, max_deg: u32) -> Result<usize, String> {
    let base = 1u64 << (max_deg + 1);
    let total = base.pow((r * c) as u32);
    for code in 0..total {
        let mut k = code;
        let rows: Vec<Vec<u64>> = (0..r)
            .map(|_| {
                (0..c)
                    .map(|_| {
                        let x = k % base;
                        k /= base;
                        x
                    })
                    .collect()
            })
            .collect();
        check_snf(&rows)?;
    }
    Ok(total as usize)
}

fn snf_oracle() -> Outcome {
    let mut n = 0;
    for r in 1..=3 {
        for c in 1..=3 {
            n += exhaustive(r, c, 1)?;
            if r * c <= 6 {
                n += exhaustive(r, c, 2)?;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut random = |r: usize, c: usize, deg: u32, count: usize| -> Result<(), String> {
        for _ in 0..count {
            let rows: Vec<Vec<u64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(0..1u64 << (deg + 1))).collect()).collect();
            check_snf(&rows)?;
        }
        Ok(())
    };
    random(3, 3, 2, 20_000)?;
    random(4, 4, 3, 100)?;
    Ok(format!("{n} exhaustive matrices, 20000 random 3x3 of degree 2, 100 random 4x4"))
}

fn collapse(d: &Dataset) -> Outcome {
    let gens = d.pages[&PageKey::Infinity].generators();
    let mut pairs = 0;
    for x in &gens {
        for y in &gens {
            pairs += 1;
            let diff = y.degree - x.degree;
            ensure(!(diff.s == -1 && diff.w == 0 && diff.f >= 5), || {
                format!("{} -> {} fits d_{}", x.label(&d.atoms), y.label(&d.atoms), diff.f)
            })?;
        }
    }
    let rep = validate_dataset(d);
    ensure(rep.findings.iter().all(|f| f.check != Check::Collapse), || "validator disagrees".into())?;
    Ok(format!("{pairs} ordered pairs"))
}

fn homotopy(d: &Dataset) -> Outcome {
    let a = &d.atoms;
    let base: Vec<HiddenExtension> = d.hidden_tau.iter().map(|h| h.extension.clone()).collect();
    let hidden = expand_hidden_extensions(&base, a, 60).map_err(|e| e.to_string())?;
    let stem = |s| assemble_stem(s, &d.einf_classes, &hidden, a).map_err(|e| e.to_string());
    let e = |t: &str| parse_expression(t, a).unwrap();

    let s35 = stem(35)?;
    let f = s35.family_of(&e("h_1 d g")).ok_or("stem 35: no h_1 d g family")?;
    ensure(f.lead().expr == e("h_1 d g") && f.module == TorsionModule::Free && !f.lower_bound, || {
        format!("stem 35: {f}")
    })?;

    let s55 = stem(55)?;
    let f = s55.family_of(&e("h_1 d g^2")).ok_or("stem 55: no h_1 d g^2 family")?;
    ensure(f.lead().expr == e("h_1 d g^2") && f.module == TorsionModule::Torsion(4) && !f.lower_bound, || {
        format!("stem 55: {f}")
    })?;

    let s22 = stem(22)?;
    let f = s22.family_of(&e("h_1^2 g")).ok_or("stem 22: no h_1^2 g family")?;
    let names: Vec<_> = f.members.iter().map(|m| m.expr.clone()).collect();
    ensure(names == [e("h_1^2 g"), e("c d"), e("P d")] && s22.families.len() == 1, || format!("stem 22: {s22}"))?;
    Ok("stem 35 free from h_1 d g; stem 55 M2/tau^4 from h_1 d g^2; stem 22 h_1^2 g -> c d -> P d".into())
}

fn periodicity(d: &Dataset) -> Outcome {
    let e4 = periodicity_report(d, PageKey::Finite(4), 4, 6);
    ensure(e4.all_matched(), || format!("E_4 unmatched: {:?}", e4.unmatched))?;
    let inf = periodicity_report(d, PageKey::Infinity, 4, 6);
    ensure(inf.all_matched(), || format!("E_inf unmatched: {:?}", inf.unmatched))?;

    let max = 288;
    let ext = extend_by_periodicity(d, PageKey::Infinity, max);
    let unit = parse_expression("Delta^8", &d.atoms).unwrap();
    let step = TriDegree::new(192, 32, 96);
    let rows = &ext.pages[&PageKey::Infinity].table;
    let mut shifted = 0;
    for x in d.pages[&PageKey::Infinity].table.entries.iter().filter(|x| x.source.degree.s + step.s <= max) {
        let y = x.source.expr.mul(&unit);
        let row = rows.get(&y).ok_or_else(|| format!("Delta^8 {} missing", x.source.label(&d.atoms)))?;
        ensure(row.source.degree == x.source.degree + step, || format!("Delta^8 {} misplaced", x.source.label(&d.atoms)))?;
        shifted += 1;
    }
    ensure(validate_dataset(&ext).is_ok(), || "extended E_inf fails validation".into())?;
    Ok(format!(
        "E_4: {} Delta^4 shifts ({} differential mismatch); E_inf: {} Delta^4 shifts, {shifted} Delta^8 shifts",
        e4.matched.len(),
        e4.differential_mismatches.len(),
        inf.matched.len()
    ))
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn charts(d: &Dataset) -> Outcome {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut out = Vec::new();
    for (key, window, file) in [
        (PageKey::Finite(2), ChartWindow { max_stem: 20, max_filtration: 8 }, "e2.svg"),
        (PageKey::Infinity, ChartWindow { max_stem: 24, max_filtration: 12 }, "einf.svg"),
    ] {
        let scene = chart_dataset_page(d, key, window).map_err(|e| e.to_string())?;
        let svg = render_svg(&scene);
        let again = render_svg(&chart_dataset_page(d, key, window).map_err(|e| e.to_string())?);
        ensure(svg == again, || format!("{file}: renders differ between runs"))?;
        ensure(svg.contains(r#"<g id="legend""#), || format!("{file}: no legend"))?;
        let legend: Vec<&str> = scene.legend.iter().map(|(_, c)| c.as_str()).collect();
        for dot in &scene.dots {
            ensure(d.torsion_legend.get(&dot.torsion) == Some(&dot.color), || {
                format!("{file}: dot {} colored {} for {}", dot.label, dot.color, dot.torsion)
            })?;
            ensure(legend.contains(&dot.color.as_str()), || format!("{file}: {} not in legend", dot.color))?;
            ensure(svg.contains(&format!(r#"fill="{}""#, svg_color(&dot.color))), || format!("{file}: {} unused", dot.color))?;
        }
        let path = golden_dir().join(file);
        if update {
            std::fs::create_dir_all(golden_dir()).map_err(|e| e.to_string())?;
            std::fs::write(&path, &svg).map_err(|e| e.to_string())?;
        }
        let golden = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        ensure(golden == svg, || format!("{file} differs from the golden file"))?;
        out.push(format!("{file} {} dots", scene.dots.len()));
    }
    Ok(out.join(", "))
}

fn main() -> ExitCode {
    let d = shipped();
    let criteria: Vec<Criterion> = vec![
        ("degree laws", Box::new(|| degree_laws(&d))),
        ("d-squared closure", Box::new(|| d_squared(&d))),
        ("inference", Box::new(|| inferences(&d))),
        ("oracle equivalence", Box::new(oracle_equivalence)),
        ("smith normal form", Box::new(snf_oracle)),
        ("collapse", Box::new(|| collapse(&d))),
        ("homotopy", Box::new(|| homotopy(&d))),
        ("periodicity", Box::new(|| periodicity(&d))),
        ("charts", Box::new(|| charts(&d))),
    ];
    let filter: Option<Vec<usize>> =
        std::env::var("ACCEPTANCE_ONLY").ok().map(|v| v.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        if filter.as_ref().is_some_and(|f| !f.contains(&n)) {
            continue;
        }
        let t = Instant::now();
        let r = run();
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("criterion {n} {name}: PASS ({detail}) [{secs:.2}s]"),
            Err(why) => {
                failed += 1;
                println!("criterion {n} {name}: FAIL ({why}) [{secs:.2}s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}
