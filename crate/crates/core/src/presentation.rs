//! Finite presentations `1 → R → S → G → 1` read from JSON.
//!
//! ```json
//! {"p": 3, "generators": ["s1", "s2"], "relators": ["s1^3 [s1,s2]"], "truncation": 5}
//! ```
//!
//! `assert_minimal` is optional. Field order is irrelevant.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::echelonize_rows;
use crate::series::{evaluate_word, exponent_warnings, GroupElement, TruncationContext, Weight};
use crate::word::{parse_word, GroupWord};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub p: u64,
    pub generators: Vec<String>,
    pub relators: Vec<GroupWord>,
    pub truncation: usize,
    pub assert_minimal: bool,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawPresentation {
    p: u64,
    generators: Vec<String>,
    relators: Vec<String>,
    truncation: usize,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    assert_minimal: bool,
}

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

impl Presentation {
    /// Builds and validates a presentation from parts.
    pub fn new(
        p: u64,
        generators: Vec<String>,
        relators: Vec<GroupWord>,
        truncation: usize,
    ) -> Result<Self> {
        let pr = Self {
            p,
            generators,
            relators,
            truncation,
            assert_minimal: false,
        };
        pr.validate()?;
        Ok(pr)
    }

    /// Parses relator strings against the generator names.
    pub fn from_strings(
        p: u64,
        generators: &[&str],
        relators: &[&str],
        truncation: usize,
    ) -> Result<Self> {
        let generators: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
        let relators = relators
            .iter()
            .enumerate()
            .map(|(i, r)| parse_relator(i, r, &generators))
            .collect::<Result<Vec<_>>>()?;
        Self::new(p, generators, relators, truncation)
    }

    fn validate(&self) -> Result<()> {
        if self.generators.is_empty() {
            return Err(Error::NoGenerators);
        }
        for (i, g) in self.generators.iter().enumerate() {
            if !valid_identifier(g) {
                return Err(Error::Syntax {
                    location: format!("generator {i}"),
                    message: format!("`{g}` is not an identifier"),
                });
            }
            if self.generators[..i].contains(g) {
                return Err(Error::Syntax {
                    location: format!("generator {i}"),
                    message: format!("duplicate generator `{g}`"),
                });
            }
        }
        for (i, r) in self.relators.iter().enumerate() {
            if let Some(m) = r.max_generator() {
                if m >= self.generators.len() {
                    return Err(Error::Syntax {
                        location: format!("relator {i}"),
                        message: format!("generator index {} out of range", m + 1),
                    });
                }
            }
        }
        self.ctx().map(|_| ())
    }

    pub fn d(&self) -> usize {
        self.generators.len()
    }

    pub fn ctx(&self) -> Result<TruncationContext> {
        TruncationContext::new(self.p, self.d(), self.truncation)
    }

    pub fn with_truncation(&self, truncation: usize) -> Result<Self> {
        let mut pr = self.clone();
        pr.truncation = truncation;
        pr.validate()?;
        Ok(pr)
    }

    pub fn relator_strings(&self) -> Vec<String> {
        self.relators
            .iter()
            .map(|r| r.render(&self.generators))
            .collect()
    }

    /// Relators evaluated in the truncated series ring.
    pub fn relator_elements(&self) -> Result<Vec<GroupElement>> {
        let ctx = self.ctx()?;
        self.relators
            .iter()
            .map(|r| evaluate_word(ctx, r))
            .collect()
    }

    /// Exponent reduction notices for all relators.
    pub fn warnings(&self) -> Vec<String> {
        let Ok(ctx) = self.ctx() else {
            return Vec::new();
        };
        self.relators
            .iter()
            .enumerate()
            .flat_map(|(i, r)| {
                exponent_warnings(ctx, r)
                    .into_iter()
                    .map(move |w| format!("relator {i}: {w}"))
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        let raw = RawPresentation {
            p: self.p,
            generators: self.generators.clone(),
            relators: self.relator_strings(),
            truncation: self.truncation,
            assert_minimal: self.assert_minimal,
        };
        serde_json::to_string(&raw).expect("plain data serializes")
    }
}

fn parse_relator(index: usize, text: &str, names: &[String]) -> Result<GroupWord> {
    parse_word(text, names).map_err(|e| match e {
        Error::Syntax { location, message } => Error::Syntax {
            location: format!("relator {index}, {location}"),
            message,
        },
        other => other,
    })
}

/// Parses the JSON presentation format.
pub fn parse(text: &str) -> Result<Presentation> {
    let raw: RawPresentation = serde_json::from_str(text).map_err(|e| Error::Syntax {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    if !crate::arith::is_prime(raw.p) {
        return Err(Error::NonPrimeP(raw.p));
    }
    if raw.truncation < 2 {
        return Err(Error::TruncationTooSmall(raw.truncation));
    }
    let relators = raw
        .relators
        .iter()
        .enumerate()
        .map(|(i, r)| parse_relator(i, r, &raw.generators))
        .collect::<Result<Vec<_>>>()?;
    let mut pr = Presentation::new(raw.p, raw.generators, relators, raw.truncation)?;
    pr.assert_minimal = raw.assert_minimal;
    Ok(pr)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalityReport {
    /// Weight of each relator (`TOP` if trivial at the truncation).
    pub relator_weights: Vec<Weight>,
    /// All relators lie in `S^(2)`.
    pub weight_condition: bool,
    /// Initial forms of equal degree are linearly independent.
    pub forms_independent: bool,
    pub violations: Vec<String>,
    pub note: String,
}

impl MinimalityReport {
    pub fn passes(&self) -> bool {
        self.weight_condition && self.forms_independent
    }
}

/// Necessary conditions for a minimal presentation: `R ⊂ S^(2)`, plus linear
/// independence of the relators' initial forms degree by degree.
pub fn minimality_check(pr: &Presentation) -> Result<MinimalityReport> {
    let elems = pr.relator_elements()?;
    let relator_weights: Vec<Weight> = elems.iter().map(|g| g.weight()).collect();
    let mut violations = Vec::new();
    for (i, w) in relator_weights.iter().enumerate() {
        match w {
            Weight::Finite(1) => violations.push(format!(
                "relator {i} has weight 1: a generator is redundant, presentation not minimal"
            )),
            Weight::Top => violations.push(format!(
                "relator {i} is trivial modulo S^({}+1); its initial form cannot be certified",
                pr.truncation
            )),
            _ => {}
        }
    }
    let weight_condition = relator_weights.iter().all(|&w| w >= Weight::Finite(2));

    let mut by_degree: BTreeMap<usize, Vec<Vec<u64>>> = BTreeMap::new();
    let mut forms_independent = true;
    for (g, w) in elems.iter().zip(&relator_weights) {
        match w {
            Weight::Finite(n) => by_degree
                .entry(*n)
                .or_default()
                .push(g.initial_form()?.coeffs().to_vec()),
            Weight::Top => forms_independent = false,
        }
    }
    let ctx = pr.ctx()?;
    for (n, rows) in &by_degree {
        let count = rows.len();
        let rank = echelonize_rows(ctx.p(), crate::graded::u_dim(ctx, *n)?, rows.clone())?.rank();
        if rank < count {
            forms_independent = false;
            violations.push(format!(
                "initial forms in degree {n} are linearly dependent (rank {rank} < {count})"
            ));
        }
    }
    Ok(MinimalityReport {
        relator_weights,
        weight_condition,
        forms_independent,
        violations,
        note: "independence in R/R^p[R,S] is certified only by the drop-one tests, run when assert_minimal is set"
            .to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_p_squared_json() {
        let pr =
            parse(r#"{"p":2,"generators":["s1"],"relators":["s1^4"],"truncation":4}"#).unwrap();
        assert_eq!(pr.p, 2);
        assert_eq!(pr.d(), 1);
        assert_eq!(pr.relators, vec![GroupWord::gen(0).pow(4)]);
        assert_eq!(pr.truncation, 4);
        assert!(!pr.assert_minimal);
    }

    #[test]
    fn triple_commutator_is_minimal() {
        let pr = parse(
            r#"{"truncation":4,"relators":["[[s1,s2],s3]"],"generators":["s1","s2","s3"],"p":3}"#,
        )
        .unwrap();
        assert_eq!(pr.d(), 3);
        let rep = minimality_check(&pr).unwrap();
        assert!(rep.passes());
        assert_eq!(rep.relator_weights, vec![Weight::Finite(3)]);
    }

    #[test]
    fn free_presentation() {
        let pr = parse(r#"{"p":2,"generators":["s1","s2"],"relators":[],"truncation":5,"assert_minimal":true}"#)
            .unwrap();
        assert!(pr.relators.is_empty());
        assert!(pr.assert_minimal);
        assert!(minimality_check(&pr).unwrap().passes());
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            parse(r#"{"p":4,"generators":["s1"],"relators":[],"truncation":4}"#),
            Err(Error::NonPrimeP(4))
        );
        assert_eq!(
            parse(r#"{"p":2,"generators":["s1"],"relators":[],"truncation":1}"#),
            Err(Error::TruncationTooSmall(1))
        );
        assert_eq!(
            parse(r#"{"p":2,"generators":["s1"],"relators":["t"],"truncation":3}"#),
            Err(Error::UnknownGenerator { name: "t".into() })
        );
        match parse(r#"{"p":2,"generators":["s1"],"relators":["s1^"],"truncation":3}"#) {
            Err(Error::Syntax { location, .. }) => assert_eq!(location, "relator 0, offset 3"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("{\"p\":2"), Err(Error::Syntax { .. })));
        assert!(matches!(
            parse(r#"{"p":2,"generators":["s1","s1"],"relators":[],"truncation":3}"#),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn weight_one_relator_flagged() {
        let pr = Presentation::from_strings(2, &["s1", "s2"], &["s1"], 3).unwrap();
        let rep = minimality_check(&pr).unwrap();
        assert!(!rep.weight_condition);
        assert!(!rep.passes());
    }

    #[test]
    fn duplicate_relators_dependent() {
        let pr = Presentation::from_strings(2, &["s1"], &["s1^2", "s1^2"], 4).unwrap();
        let rep = minimality_check(&pr).unwrap();
        assert!(rep.weight_condition);
        assert!(!rep.forms_independent);
    }

    #[test]
    fn json_round_trip() {
        let pr = Presentation::from_strings(3, &["a", "b"], &["a^3 [a,b]", "(a b)^-9"], 5).unwrap();
        assert_eq!(parse(&pr.to_json()).unwrap(), pr);
    }
}
