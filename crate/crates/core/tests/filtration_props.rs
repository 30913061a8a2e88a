mod common;

use pcentral::filtration::{
    graded_ideal, initial_forms, quadratic_verdict, quotient_dims, strongly_free_test,
    InitialFormSet, QuadraticVerdict,
};
use pcentral::graded::{lie_layer, u_dim, GradedElement};
use pcentral::linalg::echelonize_rows;
use pcentral::series::{TruncationContext, Weight};
use pcentral::verifier::{compare_series, r_series, EqualityVerdict};
use pcentral::Presentation;

/// `dim (U/J)_n` with `J_n` spanned by every product `π^a·u·ρ·v`, `u`, `v` words.
fn brute_force_quotient(forms: &InitialFormSet, n_max: usize) -> Vec<usize> {
    let ctx = forms.ctx();
    let p = ctx.p();
    (0..=n_max)
        .map(|n| {
            let mut rows = Vec::new();
            for f in &forms.forms {
                if f.degree > n {
                    continue;
                }
                let rest = n - f.degree;
                for a in 0..=rest {
                    for lu in 0..=rest - a {
                        let lv = rest - a - lu;
                        for iu in 0..ctx.words_of_length(lu) {
                            for iv in 0..ctx.words_of_length(lv) {
                                let u = GradedElement::monomial(ctx, a, &ctx.word_letters(lu, iu))
                                    .unwrap();
                                let v = GradedElement::monomial(ctx, 0, &ctx.word_letters(lv, iv))
                                    .unwrap();
                                let prod = u.mul(&f.form).unwrap().mul(&v).unwrap();
                                rows.push(prod.coeffs().to_vec());
                            }
                        }
                    }
                }
            }
            let cols = u_dim(ctx, n).unwrap();
            cols - echelonize_rows(p, cols, rows).unwrap().rank()
        })
        .collect()
}

fn has_forms(pr: &Presentation) -> bool {
    pr.relator_elements()
        .unwrap()
        .iter()
        .all(|g| !g.weight().is_top())
}

#[test]
fn quotient_dims_match_brute_force() {
    let mut rng = common::rng(40);
    let mut checked = 0;
    while checked < 15 {
        let pr = common::random_minimal_presentation(&mut rng);
        if !has_forms(&pr) || pr.d() == 3 {
            continue;
        }
        let forms = initial_forms(&pr).unwrap();
        let n = pr.truncation.min(4);
        assert_eq!(
            quotient_dims(&forms, n).unwrap(),
            brute_force_quotient(&forms, n)
        );
        checked += 1;
    }
    for (p, rel) in [(3u64, "s1^3 [s1,s2]"), (2, "s1^2 [s1,s2]")] {
        let pr = Presentation::from_strings(p, &["s1", "s2"], &[rel], 5).unwrap();
        let forms = initial_forms(&pr).unwrap();
        assert_eq!(brute_force_quotient(&forms, 5), vec![1, 3, 6, 10, 15, 21]);
    }
}

#[test]
fn ideal_is_lie_and_closed() {
    let mut rng = common::rng(41);
    let mut checked = 0;
    while checked < 10 {
        let pr = common::random_minimal_presentation(&mut rng);
        if !has_forms(&pr) {
            continue;
        }
        let ctx = pr.ctx().unwrap();
        let forms = initial_forms(&pr).unwrap();
        let ideal = graded_ideal(&forms, pr.truncation).unwrap();
        for n in 1..=pr.truncation {
            let layer = ideal.layer(n);
            assert!(layer
                .is_subspace_of(&lie_layer(ctx, n).unwrap().basis)
                .unwrap());
            if n == pr.truncation {
                continue;
            }
            let next = ideal.layer(n + 1);
            for row in layer.rows() {
                let x = GradedElement::from_coeffs(ctx, n, row.clone()).unwrap();
                assert!(next.contains(x.pi_times().unwrap().coeffs()).unwrap());
                for k in 0..ctx.d() {
                    let b = x
                        .bracket(&GradedElement::generator(ctx, k).unwrap())
                        .unwrap();
                    assert!(next.contains(b.coeffs()).unwrap());
                }
            }
        }
        checked += 1;
    }
}

#[test]
fn free_case_matches_u_dim() {
    for &(p, d) in &[(2u64, 1usize), (3, 2), (5, 3)] {
        let ctx = TruncationContext::new(p, d, 4).unwrap();
        let h = strongly_free_test(&InitialFormSet::new(ctx, vec![]), 4).unwrap();
        let u: Vec<usize> = (0..=4).map(|n| u_dim(ctx, n).unwrap()).collect();
        assert_eq!(h.computed, u);
        assert!(h.is_strongly_free());
    }
}

#[test]
fn adding_relators_never_increases_quotients() {
    let mut rng = common::rng(42);
    let mut checked = 0;
    while checked < 15 {
        let pr = common::random_minimal_presentation(&mut rng);
        if !has_forms(&pr) || pr.relators.len() < 2 {
            continue;
        }
        let mut fewer = pr.clone();
        fewer.relators.pop();
        let big = quotient_dims(&initial_forms(&pr).unwrap(), pr.truncation).unwrap();
        let small = quotient_dims(&initial_forms(&fewer).unwrap(), pr.truncation).unwrap();
        assert!(
            big.iter().zip(&small).all(|(a, b)| a <= b),
            "{big:?} vs {small:?}"
        );
        checked += 1;
    }
}

#[test]
fn equality_implies_ideal_matches_induced_layers() {
    let mut rng = common::rng(43);
    let mut equal_cases = 0;
    for _ in 0..60 {
        let pr = common::random_minimal_presentation(&mut rng);
        if !has_forms(&pr) {
            continue;
        }
        let ctx = pr.ctx().unwrap();
        let series = r_series(&pr).unwrap();
        if !matches!(
            compare_series(&series).unwrap().verdict,
            EqualityVerdict::EqualToDegree { .. }
        ) {
            continue;
        }
        let ideal = graded_ideal(&initial_forms(&pr).unwrap(), pr.truncation).unwrap();
        let group = series.quotient_dims().unwrap();
        let induced: Vec<usize> = (1..=pr.truncation)
            .map(|n| lie_layer(ctx, n).unwrap().dim() - group[n - 1])
            .collect();
        assert_eq!(ideal.dims(), induced, "{}", pr.to_json());
        equal_cases += 1;
    }
    assert!(equal_cases >= 5, "{equal_cases}");
}

#[test]
fn fixture_forms_and_verdicts() {
    let dem = Presentation::from_strings(3, &["s1", "s2"], &["s1^3 [s1,s2]"], 5).unwrap();
    let forms = initial_forms(&dem).unwrap();
    assert_eq!(forms.forms[0].degree, 2);
    assert_eq!(forms.forms[0].form.to_string(), "x1*x2 + 2*x2*x1 + pi*x1");
    assert_eq!(
        quadratic_verdict(&dem).unwrap().verdict,
        QuadraticVerdict::QuadraticallyDefinedStronglyFree
    );

    let b = Presentation::from_strings(3, &["s1", "s2", "s3"], &["[[s1,s2],s3]"], 4).unwrap();
    let forms = initial_forms(&b).unwrap();
    assert_eq!(forms.degrees(), vec![3]);
    assert_eq!(graded_ideal(&forms, 4).unwrap().dims()[2], 1);
    assert_eq!(
        quadratic_verdict(&b).unwrap().verdict,
        QuadraticVerdict::NotQuadratic
    );

    let a = Presentation::from_strings(2, &["s"], &["s^4"], 4).unwrap();
    let forms = initial_forms(&a).unwrap();
    assert_eq!(forms.forms[0].form.to_string(), "pi*x1*x1 + pi^2*x1");
    assert_eq!(a.relator_elements().unwrap()[0].weight(), Weight::Finite(3));

    let cyc = Presentation::from_strings(3, &["s"], &["s^3"], 5).unwrap();
    let rep = quadratic_verdict(&cyc).unwrap();
    assert_eq!(
        rep.verdict,
        QuadraticVerdict::QuadraticallyDefinedGroupCertified
    );
    assert_eq!(rep.ideal_dims, vec![0, 1, 1, 1, 1]);
    assert_eq!(rep.induced_dims, vec![0, 1, 1, 1, 1]);
}
