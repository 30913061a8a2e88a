//! Acceptance criteria, one line per criterion. Exits nonzero if any fails.
//!
//! Set `UPDATE_GOLDEN=1` to rewrite `tests/golden/fixtures.json`.

mod common;

use std::path::PathBuf;
use std::time::Instant;

use pcentral::filtration::{
    graded_ideal, initial_forms, quadratic_verdict, strongly_free_test, QuadraticVerdict,
    StrongFreeness,
};
use pcentral::graded::{free_lie_span, lie_layer, u_dim, witt_number};
use pcentral::milnor::FieldAdapter;
use pcentral::report::{analyze, fixture, fixture_reports, reports_to_json};
use pcentral::series::TruncationContext;
use pcentral::verifier::{equality_report, r_series, EqualityVerdict};
use pcentral::Presentation;

type Outcome = Result<(), String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn free_object_dimensions() -> Outcome {
    for (d, expected) in [
        (2usize, vec![1usize, 3, 7, 15, 31, 63]),
        (3, vec![1, 4, 13, 40, 121]),
    ] {
        let n = expected.len() - 1;
        let ctx = TruncationContext::new(3, d, n).map_err(|e| e.to_string())?;
        let got: Vec<usize> = (0..=n).map(|k| u_dim(ctx, k).unwrap()).collect();
        check(got == expected, || format!("u_dim d={d}: {got:?}"))?;
        let sums: Vec<usize> = (0..=n)
            .map(|k| (0..=k).map(|m| d.pow(m as u32)).sum())
            .collect();
        check(got == sums, || format!("u_dim d={d} vs Σ d^m"))?;
    }
    let ctx = TruncationContext::new(3, 2, 5).unwrap();
    let mut dims = Vec::new();
    for n in 1..=5 {
        let closure = lie_layer(ctx, n).map_err(|e| e.to_string())?;
        let hall = free_lie_span(ctx, n).map_err(|e| e.to_string())?;
        let witt: usize = (1..=n).map(|m| witt_number(2, m)).sum();
        check(closure.dim() == witt && hall.rank() == witt, || {
            format!(
                "degree {n}: closure {} hall {} witt {witt}",
                closure.dim(),
                hall.rank()
            )
        })?;
        check(
            closure.basis.is_subspace_of(&hall).unwrap()
                && hall.is_subspace_of(&closure.basis).unwrap(),
            || format!("degree {n}: closure and Hall span differ"),
        )?;
        dims.push(closure.dim());
    }
    check(dims == [2, 3, 5, 8, 14], || {
        format!("lie_layer dims {dims:?}")
    })
}

fn gap_with_obstruction(pr: &Presentation, label: &str) -> Outcome {
    let eq = equality_report(pr).map_err(|e| e.to_string())?;
    check(eq.gap_for(2) == Some(3), || {
        format!("{label}: n=2 gap {:?}", eq.gap_for(2))
    })?;
    check(
        eq.verdict == EqualityVerdict::Gap { n: 2, degree: 3 },
        || format!("{label}: verdict {:?}", eq.verdict),
    )?;
    let rep = analyze(pr).map_err(|e| e.to_string())?;
    let o = rep
        .obstruction
        .ok_or_else(|| format!("{label}: no obstruction verdict"))?;
    check(
        o.verdict == "NOT realizable as Gal(F(p)/F) for any F ∋ ζ_p (certified gap at degree 3)",
        || format!("{label}: obstruction text {:?}", o.verdict),
    )
}

fn cyclic_p_squared_detector() -> Outcome {
    for (p, rel) in [(2u64, "s^4"), (3, "s^9")] {
        for n in [4, 5] {
            let pr = Presentation::from_strings(p, &["s"], &[rel], n).map_err(|e| e.to_string())?;
            gap_with_obstruction(&pr, &format!("p={p} N={n}"))?;
        }
    }
    Ok(())
}

fn triple_commutator_detector() -> Outcome {
    for p in [2u64, 3] {
        for n in [4, 5] {
            let pr = Presentation::from_strings(p, &["s1", "s2", "s3"], &["[[s1,s2],s3]"], n)
                .map_err(|e| e.to_string())?;
            gap_with_obstruction(&pr, &format!("p={p} N={n}"))?;
        }
    }
    Ok(())
}

fn chain_containment() -> Outcome {
    let mut rng = common::rng(2024);
    let mut cases = 0;
    for case in 0..40 {
        let pr = common::random_minimal_presentation(&mut rng);
        let series = r_series(&pr).map_err(|e| format!("case {case}: {e}"))?;
        let r = series.relation_subgroup();
        for n in 1..=series.max_n() {
            for k in 1..=pr.truncation {
                let rows = series.chain(n).rows(k);
                if k <= n {
                    check(rows.is_empty(), || {
                        format!("case {case}: R^({n},S) meets degree {k}")
                    })?;
                    continue;
                }
                let target = r.echelon(k);
                for row in rows {
                    check(target.contains(row).unwrap(), || {
                        format!(
                            "case {case}: R^({n},S) ⊄ R∩S^({}) in degree {k}: {}",
                            n + 1,
                            pr.to_json()
                        )
                    })?;
                }
            }
        }
        cases += 1;
    }
    check(cases >= 20, || format!("only {cases} cases"))
}

fn demushkin() -> Outcome {
    for p in [2u64, 3, 5] {
        let pr = fixture(&format!("demushkin-p{p}")).unwrap();
        check(pr.truncation == 5, || "fixture truncation".into())?;
        let forms = initial_forms(&pr).map_err(|e| e.to_string())?;
        check(forms.is_quadratic(), || format!("p={p}: not quadratic"))?;
        let h = strongly_free_test(&forms, 5).map_err(|e| e.to_string())?;
        check(h.computed == [1, 3, 6, 10, 15, 21], || {
            format!("p={p}: computed {:?}", h.computed)
        })?;
        check(h.target == [1, 3, 6, 10, 15, 21], || {
            format!("p={p}: target {:?}", h.target)
        })?;
        check(
            h.verdict == StrongFreeness::StronglyFreeToDegree { degree: 5 },
            || format!("p={p}: {:?}", h.verdict),
        )?;
        let eq = equality_report(&pr).map_err(|e| e.to_string())?;
        check(
            eq.verdict == EqualityVerdict::EqualToDegree { degree: 5 },
            || format!("p={p}: {:?}", eq.verdict),
        )?;
        let q = quadratic_verdict(&pr).map_err(|e| e.to_string())?;
        check(q.verdict.is_quadratically_defined(), || {
            format!("p={p}: {:?}", q.verdict)
        })?;
    }
    Ok(())
}

fn sufficiency_not_necessity() -> Outcome {
    let pr = fixture("cyclic-p3").unwrap();
    let forms = initial_forms(&pr).map_err(|e| e.to_string())?;
    check(forms.is_quadratic(), || "not quadratic".into())?;
    let h = strongly_free_test(&forms, 5).map_err(|e| e.to_string())?;
    check(h.computed == [1, 2, 2, 2, 2, 2], || {
        format!("computed {:?}", h.computed)
    })?;
    check(h.target == [1, 2, 2, 1, 0, 0], || {
        format!("target {:?}", h.target)
    })?;
    check(
        h.verdict == StrongFreeness::NotStronglyFree { first_mismatch: 3 },
        || format!("{:?}", h.verdict),
    )?;
    let eq = equality_report(&pr).map_err(|e| e.to_string())?;
    check(
        eq.verdict == EqualityVerdict::EqualToDegree { degree: 5 },
        || format!("{:?}", eq.verdict),
    )?;
    let q = quadratic_verdict(&pr).map_err(|e| e.to_string())?;
    check(
        q.verdict == QuadraticVerdict::QuadraticallyDefinedGroupCertified,
        || format!("{:?}", q.verdict),
    )
}

fn oracle_equivalence() -> Outcome {
    for name in ["demushkin-p2", "demushkin-p3", "demushkin-p5", "free-d2"] {
        let pr = fixture(name).unwrap();
        let ctx = pr.ctx().unwrap();
        let group = r_series(&pr)
            .and_then(|s| s.quotient_dims())
            .map_err(|e| e.to_string())?;
        let ideal = graded_ideal(&initial_forms(&pr).map_err(|e| e.to_string())?, 5)
            .map_err(|e| e.to_string())?;
        let graded: Vec<usize> = (1..=5)
            .map(|n| lie_layer(ctx, n).unwrap().dim() - ideal.layer(n).rank())
            .collect();
        check(group == graded, || {
            format!("{name}: group {group:?} vs graded {graded:?}")
        })?;
    }
    Ok(())
}

fn milnor_suite() -> Outcome {
    let start = Instant::now();
    for (q, p) in [(7u64, 2u64), (7, 3), (4, 3), (13, 3)] {
        let f = FieldAdapter::new(q, p).map_err(|e| e.to_string())?;
        let k1 = f.milnor_dim(1).map_err(|e| e.to_string())?;
        let k2 = f.milnor_dim(2).map_err(|e| e.to_string())?;
        check(k1 == 1 && k2 == 0, || {
            format!("F_{q}, p={p}: k1={k1} k2={k2}")
        })?;
        let suite = f.steinberg_suite(2).map_err(|e| e.to_string())?;
        for c in &suite.checks {
            check(c.passed() && c.cases > 0, || {
                format!("F_{q}, p={p}: {} failed on {:?}", c.identity, c.witnesses)
            })?;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(secs <= 30.0, || format!("took {secs:.1}s"))
}

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/fixtures.json")
}

fn determinism() -> Outcome {
    let first = reports_to_json(&fixture_reports().map_err(|e| e.to_string())?);
    let second = reports_to_json(&fixture_reports().map_err(|e| e.to_string())?);
    check(first == second, || "two runs differ".into())?;
    let path = golden_path();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &first).map_err(|e| e.to_string())?;
    }
    let golden = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    check(golden == first, || {
        format!("output differs from {}", path.display())
    })
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("free-object dimensions", free_object_dimensions),
        ("<s | s^(p^2)> detector", cyclic_p_squared_detector),
        (
            "<s1,s2,s3 | [[s1,s2],s3]> detector",
            triple_commutator_detector,
        ),
        ("R^(n,S) ⊂ R∩S^(n+1) on a random corpus", chain_containment),
        ("Demushkin fixture", demushkin),
        (
            "sufficiency, not necessity, of strong freeness",
            sufficiency_not_necessity,
        ),
        ("oracle equivalence of gr_n(G)", oracle_equivalence),
        ("Milnor suite", milnor_suite),
        ("determinism of fixture reports", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {}: PASS  {name} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
