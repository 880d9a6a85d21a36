use std::path::Path;

use twophase_qn::bench::{self, Metric};
use twophase_qn::*;

fn fixture() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/published_results.csv")
}

/// Checks that every element opened is closed in order. Enough for the
/// generator's output, which uses no comments, CDATA or processing instructions.
fn tags_balance(svg: &str) -> Result<usize, String> {
    let mut stack: Vec<String> = Vec::new();
    let mut elements = 0;
    let mut rest = svg;
    while let Some(start) = rest.find('<') {
        let end = rest[start..].find('>').ok_or("unterminated tag")? + start;
        let tag = &rest[start + 1..end];
        rest = &rest[end + 1..];
        if let Some(name) = tag.strip_prefix('/') {
            let open = stack.pop().ok_or(format!("stray </{name}>"))?;
            if open != name.trim() {
                return Err(format!("<{open}> closed by </{name}>"));
            }
        } else {
            elements += 1;
            let name: String = tag.chars().take_while(|c| !c.is_whitespace() && *c != '/').collect();
            if tag.matches('"').count() % 2 != 0 {
                return Err(format!("unbalanced quotes in <{name}>"));
            }
            if !tag.ends_with('/') {
                stack.push(name);
            }
        }
    }
    if stack.is_empty() {
        Ok(elements)
    } else {
        Err(format!("unclosed {stack:?}"))
    }
}

#[test]
fn fixture_matches_suite_metadata() {
    let text = std::fs::read_to_string(fixture()).unwrap();
    assert_eq!(text, bench::results_csv(&bench::published_records()).unwrap());
    let recs = bench::load_results_csv(&fixture()).unwrap();
    assert_eq!(recs.len(), 60);
    let hager = recs.iter().find(|r| r.problem == "Hager" && r.solver == "bfgs").unwrap();
    assert_eq!(hager.iterations, 17);
}

#[test]
fn fixture_profile_counts() {
    let recs = bench::load_results_csv(&fixture()).unwrap();
    let curves = bench::dolan_more(&recs, Metric::Iterations).unwrap();
    // independent count over the two iteration columns
    let rows = bench::comparison_rows(&recs);
    let tp_best = rows.iter().filter(|r| r.tp_iters <= r.bfgs_iters).count();
    let bfgs_best = rows.iter().filter(|r| r.bfgs_iters <= r.tp_iters).count();
    assert_eq!((tp_best, bfgs_best), (27, 6));
    let find = |s: &str| curves.iter().find(|c| c.solver == s).unwrap();
    assert_eq!(find("two-phase").value_at(1.0), tp_best as f64 / 30.0);
    assert_eq!(find("bfgs").value_at(1.0), bfgs_best as f64 / 30.0);
    for c in &curves {
        assert!(c.points.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1));
        assert_eq!(c.points.last().unwrap().1, 1.0);
        assert!(c.points.iter().all(|&(t, p)| t >= 1.0 && (0.0..=1.0).contains(&p)));
    }
    let csv = bench::profile_csv(&curves).unwrap();
    assert!(csv.starts_with("solver,tau,P\n"));
    assert!(csv.contains("\ntwo-phase,1,0.9\n") && csv.contains("\nbfgs,1,0.2\n"));
}

#[test]
fn self_profile_is_constant() {
    let recs: Vec<_> = bench::published_records().into_iter().filter(|r| r.solver == "bfgs").collect();
    let curves = bench::dolan_more(&recs, Metric::Time).unwrap();
    assert_eq!(curves.len(), 1);
    assert!(curves[0].points.iter().all(|&(_, p)| p == 1.0));
}

#[test]
fn svg_files_are_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let curves = bench::dolan_more(&bench::published_records(), Metric::Iterations).unwrap();
    let two = dir.path().join("two.svg");
    bench::emit_profile_svg(&curves, "Iterations", &two).unwrap();
    let text = std::fs::read_to_string(&two).unwrap();
    assert!(tags_balance(&text).unwrap() > 10);
    assert!(!text.contains("href"));

    let one = dir.path().join("one.svg");
    bench::emit_profile_svg(&curves[..1], "a < b & c", &one).unwrap();
    let text = std::fs::read_to_string(&one).unwrap();
    tags_balance(&text).unwrap();
    assert!(text.contains("a &lt; b &amp; c"));
    assert!(bench::emit_profile_svg(&curves, "x", &dir.path().join("missing/x.svg")).is_err());
}

#[test]
fn tag_checker_rejects_broken_markup() {
    assert!(tags_balance("<svg><g></svg>").is_err());
    assert!(tags_balance("<svg><path d=\"M 0/></svg>").is_err());
    assert!(tags_balance("<svg><rect/></svg>").is_ok());
}

#[test]
fn bench_results_are_repeatable_except_time() {
    let problems: Vec<_> = ["Hager", "Raydan2", "Tridia"].iter().map(|n| lookup(n).unwrap().clone()).collect();
    let cfg = SolverConfig::default();
    let strip = |recs: Vec<bench::BenchmarkRecord>| {
        recs.into_iter()
            .map(|mut r| {
                r.median_time_ms = 0.0;
                r.mean_time_ms = 0.0;
                r
            })
            .collect::<Vec<_>>()
    };
    let a = strip(bench::run_suite(&problems, &SolverKind::ALL, &cfg, 2).unwrap());
    let b = strip(bench::run_suite(&problems, &SolverKind::ALL, &cfg, 2).unwrap());
    assert_eq!(bench::results_csv(&a).unwrap(), bench::results_csv(&b).unwrap());
    assert_eq!(a.len(), 6);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("results.csv");
    bench::write_results_csv(&a, std::fs::File::create(&path).unwrap()).unwrap();
    let back = bench::load_results_csv(&path).unwrap();
    assert_eq!(bench::results_csv(&back).unwrap(), bench::results_csv(&a).unwrap());
}

#[test]
fn parallel_validation_matches_sequential() {
    let problems: Vec<_> = suite()[..6].to_vec();
    let cfg = SolverConfig::default();
    let par = bench::validate_parallel(&problems, &SolverKind::ALL, &cfg);
    assert_eq!(par.len(), 12);
    for (v, (p, s)) in par.iter().zip(problems.iter().flat_map(|p| SolverKind::ALL.map(|s| (p, s)))) {
        assert_eq!((v.problem, v.solver), (p.name(), s));
        let seq = s.solve(&p.objective, &p.objective.standard_start(), &cfg).unwrap();
        assert_eq!(v.result.as_ref().unwrap().trace, seq.trace);
    }
}
