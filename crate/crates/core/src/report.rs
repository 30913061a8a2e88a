//! End-to-end analysis reports and the built-in fixture presentations.
//!
//! Reports serialize through `serde_json::Value`, whose maps are ordered by
//! key, so equal inputs give byte-identical JSON.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::Result;
use crate::filtration::{
    initial_forms, quadratic_verdict_from, strongly_free_test, HilbertVerdict, QuadraticReport,
};
use crate::milnor::{FieldAdapter, SteinbergReport};
use crate::presentation::{minimality_check, MinimalityReport, Presentation};
use crate::verifier::{
    compare_series, drop_one_independence, r_series_with, ClosureOptions, DropOne, EqualityReport,
    EqualityVerdict,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputEcho {
    pub p: u64,
    pub generators: Vec<String>,
    pub relators: Vec<String>,
    pub truncation: usize,
    pub assert_minimal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormEntry {
    pub relator: usize,
    pub degree: usize,
    pub form: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedDims {
    /// `dim gr_n(S)` for `n = 1..=N`.
    pub free: Vec<usize>,
    /// `dim gr_n(R)_ind`.
    pub relations: Vec<usize>,
    /// `dim gr_n(G)`.
    pub group: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    pub verdict: String,
    pub n: usize,
    pub degree: usize,
    pub reason: String,
    pub certification: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub name: Option<String>,
    pub input: InputEcho,
    pub warnings: Vec<String>,
    pub minimality: MinimalityReport,
    /// Drop-one tests, run when the input sets `assert_minimal`.
    pub relator_independence: Option<Vec<DropOne>>,
    pub initial_forms: Vec<FormEntry>,
    pub quadratic: QuadraticReport,
    pub strong_freeness: HilbertVerdict,
    pub graded_dims: GradedDims,
    /// Absent when a relator has weight 1 (`R ⊄ S^(2)`).
    pub equality: Option<EqualityReport>,
    pub obstruction: Option<Obstruction>,
    /// One line per verdict, each naming its certification degree.
    pub verdicts: Vec<String>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        if let Some(name) = &self.name {
            let _ = writeln!(w, "== {name} ==");
        }
        let i = &self.input;
        let _ = writeln!(
            w,
            "presentation: p = {}, generators [{}], relators [{}], truncation N = {}",
            i.p,
            i.generators.join(", "),
            i.relators.join(", "),
            i.truncation
        );
        for warning in &self.warnings {
            let _ = writeln!(w, "warning: {warning}");
        }
        let weights: Vec<String> = self
            .minimality
            .relator_weights
            .iter()
            .map(|x| x.to_string())
            .collect();
        let _ = writeln!(
            w,
            "minimality: {} (relator weights [{}])",
            if self.minimality.passes() {
                "ok"
            } else {
                "FAILED"
            },
            weights.join(", ")
        );
        for v in &self.minimality.violations {
            let _ = writeln!(w, "  {v}");
        }
        for f in &self.initial_forms {
            let _ = writeln!(
                w,
                "initial form of relator {} (degree {}): {}",
                f.relator, f.degree, f.form
            );
        }
        let g = &self.graded_dims;
        let _ = writeln!(w, "dim gr_n(S):     {:?}", g.free);
        let _ = writeln!(w, "dim gr_n(R)_ind: {:?}", g.relations);
        let _ = writeln!(w, "dim gr_n(G):     {:?}", g.group);
        let h = &self.strong_freeness;
        let _ = writeln!(w, "Hilbert series of U/J: {:?}", h.computed);
        let _ = writeln!(w, "strongly free target:  {:?}", h.target);
        match &self.equality {
            Some(eq) => write_equality(w, eq),
            None => {
                let _ = writeln!(
                    w,
                    "equality of R^(n,S) and R∩S^(n+1): skipped, R is not contained in S^(2)"
                );
            }
        }
        for v in &self.verdicts {
            let _ = writeln!(w, "verdict: {v}");
        }
        out
    }
}

fn write_equality(w: &mut String, eq: &EqualityReport) {
    let _ = writeln!(w, "equality of R^(n,S) and R∩S^(n+1):");
    for c in &eq.comparisons {
        let cells: Vec<String> = c
            .degrees
            .iter()
            .map(|d| format!("{}:{}/{}", d.degree, d.chain_dim, d.intersection_dim))
            .collect();
        let status = match c.gap_degree {
            Some(k) => format!("gap at degree {k}"),
            None => "equal".to_string(),
        };
        let _ = writeln!(w, "  n = {}: [{}] {}", c.n, cells.join(" "), status);
        if let Some(a) = &c.annotation {
            let _ = writeln!(w, "    {a}");
        }
    }
    let _ = writeln!(w, "  {}", eq.disclaimer);
}

/// Runs the whole pipeline on one presentation.
pub fn analyze(pr: &Presentation) -> Result<AnalysisReport> {
    analyze_named(None, pr)
}

pub fn analyze_named(name: Option<&str>, pr: &Presentation) -> Result<AnalysisReport> {
    analyze_with(name, pr, ClosureOptions::default())
}

/// [`analyze_named`] with explicit closure limits.
pub fn analyze_with(
    name: Option<&str>,
    pr: &Presentation,
    opts: ClosureOptions,
) -> Result<AnalysisReport> {
    let n = pr.truncation;
    let minimality = minimality_check(pr)?;
    let forms = initial_forms(pr)?;
    let relator_independence = if pr.assert_minimal {
        Some(drop_one_independence(pr, opts)?)
    } else {
        None
    };
    let series = r_series_with(pr, n - 1, opts)?;
    let equality = if minimality.weight_condition {
        Some(compare_series(&series)?)
    } else {
        None
    };
    let verdict = equality.as_ref().map(|e| e.verdict);
    let quadratic = quadratic_verdict_from(
        &forms,
        series.relation_subgroup(),
        minimality.weight_condition,
    )?;
    let strong_freeness = match &quadratic.hilbert {
        Some(h) => h.clone(),
        None => strongly_free_test(&forms, n)?,
    };
    let group = series.quotient_dims()?;
    let relations = series.relation_subgroup().dims();
    let free = group.iter().zip(&relations).map(|(a, b)| a + b).collect();

    let minimal = minimality.passes()
        && relator_independence
            .as_ref()
            .map_or(true, |v| v.iter().all(|d| d.independent));
    let obstruction = match verdict {
        Some(EqualityVerdict::Gap { n: gap_n, degree }) if (gap_n == 2 || gap_n == 3) && minimal => {
            Some(Obstruction {
                verdict: format!(
                    "NOT realizable as Gal(F(p)/F) for any F ∋ ζ_p (certified gap at degree {degree})"
                ),
                n: gap_n,
                degree,
                reason: crate::verifier::gap_annotation(gap_n).unwrap_or_default().to_string(),
                certification: format!(
                    "unconditional: R^({gap_n},S) ≠ R∩S^({}) is witnessed in degree {degree} ≤ N = {n}",
                    gap_n + 1
                ),
            })
        }
        _ => None,
    };

    let mut verdicts = Vec::new();
    if let Some(v) = &relator_independence {
        let dependent: Vec<String> = v
            .iter()
            .filter(|d| !d.independent)
            .map(|d| d.relator.to_string())
            .collect();
        verdicts.push(if dependent.is_empty() {
            "relators independent in R/R^p[R,S] (drop-one tests, unconditional)".to_string()
        } else {
            format!(
                "relators [{}] redundant modulo R^p[R,S] (drop-one tests, certified up to truncation N = {n})",
                dependent.join(", ")
            )
        });
    }
    verdicts.push(match quadratic.verdict {
        v if v.is_quadratically_defined() => {
            format!("quadratically defined (certified to degree {n})")
        }
        crate::filtration::QuadraticVerdict::RTrivial => {
            format!("R = 1: G is free (certified to degree {n})")
        }
        crate::filtration::QuadraticVerdict::NotQuadratic => {
            format!("not quadratic (certified to degree {n})")
        }
        _ => format!("quadratic definition inconclusive (certified to degree {n})"),
    });
    verdicts.push(match strong_freeness.verdict {
        crate::filtration::StrongFreeness::StronglyFreeToDegree { degree } => {
            format!("initial forms strongly free (certified to degree {degree})")
        }
        crate::filtration::StrongFreeness::NotStronglyFree { first_mismatch } => {
            format!("initial forms not strongly free (first mismatch at degree {first_mismatch}, N = {n})")
        }
        crate::filtration::StrongFreeness::TargetDegenerate { degree } => {
            format!("strong-freeness target degenerate at degree {degree} (N = {n})")
        }
    });
    verdicts.push(match verdict {
        Some(EqualityVerdict::EqualToDegree { degree }) => {
            format!(
                "R^(n,S) = R∩S^(n+1) for all n < {degree}: certified up to truncation N = {degree}"
            )
        }
        Some(EqualityVerdict::Gap { n: gap_n, degree }) => format!(
            "R^({gap_n},S) ≠ R∩S^({}) at degree {degree}: unconditional (N = {n})",
            gap_n + 1
        ),
        None => {
            "equality comparison skipped: a relator has weight 1, so R is not contained in S^(2)"
                .to_string()
        }
    });
    if let Some(o) = &obstruction {
        verdicts.push(o.verdict.clone());
    } else if let Some(EqualityVerdict::Gap { n: gap_n, .. }) = verdict {
        if gap_n <= 3 && !minimal {
            verdicts.push(
                "gap found, but minimality is not verified: no realizability verdict".to_string(),
            );
        }
    }

    Ok(AnalysisReport {
        name: name.map(str::to_string),
        input: InputEcho {
            p: pr.p,
            generators: pr.generators.clone(),
            relators: pr.relator_strings(),
            truncation: n,
            assert_minimal: pr.assert_minimal,
        },
        warnings: pr.warnings(),
        minimality,
        relator_independence,
        initial_forms: forms
            .forms
            .iter()
            .map(|f| FormEntry {
                relator: f.relator,
                degree: f.degree,
                form: f.form.to_string(),
            })
            .collect(),
        quadratic,
        strong_freeness,
        graded_dims: GradedDims {
            free,
            relations,
            group,
        },
        equality,
        obstruction,
        verdicts,
    })
}

/// Truncation used by the built-in fixtures.
pub const FIXTURE_TRUNCATION: usize = 5;

/// Built-in presentations, in report order.
pub fn fixtures() -> Vec<(&'static str, Presentation)> {
    let n = FIXTURE_TRUNCATION;
    let one =
        |p: u64, rel: &str| Presentation::from_strings(p, &["s"], &[rel], n).expect("fixture");
    let b = |p: u64| {
        Presentation::from_strings(p, &["s1", "s2", "s3"], &["[[s1,s2],s3]"], n).expect("fixture")
    };
    let dem = |p: u64| {
        Presentation::from_strings(p, &["s1", "s2"], &[&format!("s1^{p} [s1,s2]")], n)
            .expect("fixture")
    };
    vec![
        ("cyclic-p-squared-p2", one(2, "s^4")),
        ("cyclic-p-squared-p3", one(3, "s^9")),
        ("triple-commutator-p2", b(2)),
        ("triple-commutator-p3", b(3)),
        ("demushkin-p2", dem(2)),
        ("demushkin-p3", dem(3)),
        ("demushkin-p5", dem(5)),
        ("cyclic-p3", one(3, "s^3")),
        (
            "free-d2",
            Presentation::from_strings(2, &["s1", "s2"], &[], n).expect("fixture"),
        ),
    ]
}

pub fn fixture(name: &str) -> Option<Presentation> {
    fixtures()
        .into_iter()
        .find(|(k, _)| *k == name)
        .map(|(_, v)| v)
}

/// Analyses of all built-in fixtures.
pub fn fixture_reports() -> Result<Vec<AnalysisReport>> {
    fixtures()
        .iter()
        .map(|(name, pr)| analyze_named(Some(name), pr))
        .collect()
}

pub fn reports_to_json(reports: &[AnalysisReport]) -> String {
    let value = serde_json::to_value(reports).expect("reports serialize");
    let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MilnorReport {
    pub field: String,
    pub p: u64,
    pub n: usize,
    /// Representatives of a basis of `F*/F*^p`.
    pub class_basis: Vec<String>,
    /// `dim k_m F` for `m = 1..=n`.
    pub dims: Vec<usize>,
    /// Identity checks in degrees `2..=n`.
    pub steinberg: Vec<SteinbergReport>,
    pub all_identities_pass: bool,
}

impl MilnorReport {
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(w, "field {} with p = {}", self.field, self.p);
        let _ = writeln!(w, "basis of F*/F*^p: [{}]", self.class_basis.join(", "));
        for (m, d) in self.dims.iter().enumerate() {
            let _ = writeln!(w, "dim k_{} = {}", m + 1, d);
        }
        for s in &self.steinberg {
            for c in &s.checks {
                let _ = writeln!(
                    w,
                    "degree {}: {}: {} ({} cases, {} failures)",
                    s.n,
                    c.identity,
                    if c.passed() { "pass" } else { "FAIL" },
                    c.cases,
                    c.failures
                );
                for wit in &c.witnesses {
                    let _ = writeln!(w, "  witness: {wit}");
                }
            }
        }
        out
    }
}

/// `k_1..k_n` and the identity checks for `F_q`.
pub fn milnor_report(field: &FieldAdapter, n: usize) -> Result<MilnorReport> {
    let dims = (1..=n)
        .map(|m| field.milnor_dim(m))
        .collect::<Result<Vec<_>>>()?;
    let steinberg = (2..=n)
        .map(|m| field.steinberg_suite(m))
        .collect::<Result<Vec<_>>>()?;
    Ok(MilnorReport {
        field: field.descriptor(),
        p: field.p(),
        n,
        class_basis: field.basis().iter().map(|&b| field.label(b)).collect(),
        all_identities_pass: steinberg.iter().all(SteinbergReport::passed),
        dims,
        steinberg,
    })
}
