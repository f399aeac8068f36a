//! Plain-text linear-model export of the arc-based tour formulation:
//! cost objective, one in- and one out-degree equality per vertex, and one
//! subtour elimination inequality per proper vertex subset of size >= 2.

use std::collections::HashSet;

use thiserror::Error;

use crate::model::{ArcSet, Instance};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExportError {
    #[error("cannot enumerate subtour constraints for n={n}: limit is n<={n_max}")]
    TooLargeToEnumerate { n: usize, n_max: usize },
    #[error("model parse error: {0}")]
    ParseError(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubtourMode {
    /// Emit every subset constraint, 2^n - n - 2 rows.
    Enumerate,
    Omit,
}

pub const DEFAULT_ENUMERATE_LIMIT: usize = 16;

#[derive(Debug, Clone)]
pub struct ExportedModel {
    pub num_variables: usize,
    pub num_degree_constraints: usize,
    pub num_subtour_constraints: usize,
    pub body: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Eq,
    Le,
}

/// One parsed constraint row: unit-coefficient terms over arc variables.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(usize, usize)>,
    pub sense: Sense,
    pub rhs: f64,
}

#[derive(Debug, Clone)]
pub struct ParsedModel {
    pub variables: Vec<(usize, usize)>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelCounts {
    pub variables: usize,
    pub degree_constraints: usize,
    pub subtour_constraints: usize,
}

fn var_name(i: usize, j: usize) -> String {
    format!("x_{i}_{j}")
}

pub fn export_ilp(
    instance: &Instance,
    arcs: &ArcSet,
    subtour_mode: SubtourMode,
    n_max: usize,
) -> Result<ExportedModel, ExportError> {
    let n = instance.n();
    if subtour_mode == SubtourMode::Enumerate && n > n_max {
        return Err(ExportError::TooLargeToEnumerate { n, n_max });
    }

    let arc_list: Vec<(usize, usize)> = arcs.iter().collect();
    let mut body = String::new();

    body.push_str("Minimize\n obj:");
    for (idx, &(i, j)) in arc_list.iter().enumerate() {
        if idx > 0 {
            body.push_str(" +");
        }
        body.push_str(&format!(" {:.6} {}", instance.cost(i, j), var_name(i, j)));
    }
    body.push('\n');

    body.push_str("Subject To\n");
    // In-degree then out-degree equalities, one per vertex.
    for j in 0..n {
        let terms: Vec<String> = (0..n)
            .filter(|&i| arcs.contains(i, j))
            .map(|i| var_name(i, j))
            .collect();
        body.push_str(&format!(" in_{j}: {} = 1\n", join_terms(&terms)));
    }
    for i in 0..n {
        let terms: Vec<String> = (0..n)
            .filter(|&j| arcs.contains(i, j))
            .map(|j| var_name(i, j))
            .collect();
        body.push_str(&format!(" out_{i}: {} = 1\n", join_terms(&terms)));
    }

    let mut num_subtour = 0usize;
    if subtour_mode == SubtourMode::Enumerate {
        // Proper subsets with |S| >= 2, by size then ascending bitmask.
        for size in 2..n {
            for mask in 0u64..(1u64 << n) {
                if mask.count_ones() as usize != size {
                    continue;
                }
                let members: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
                let terms: Vec<String> = members
                    .iter()
                    .flat_map(|&i| {
                        members
                            .iter()
                            .filter(move |&&j| j != i && arcs.contains(i, j))
                            .map(move |&j| var_name(i, j))
                    })
                    .collect();
                body.push_str(&format!(
                    " sub_{num_subtour}: {} <= {}\n",
                    join_terms(&terms),
                    size - 1
                ));
                num_subtour += 1;
            }
        }
    }

    body.push_str("Binary\n");
    for &(i, j) in &arc_list {
        body.push_str(&format!(" {}\n", var_name(i, j)));
    }
    body.push_str("End\n");

    Ok(ExportedModel {
        num_variables: arc_list.len(),
        num_degree_constraints: 2 * n,
        num_subtour_constraints: num_subtour,
        body,
    })
}

fn join_terms(terms: &[String]) -> String {
    if terms.is_empty() {
        // A subset with no interior arcs still gets its (vacuous) row.
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

fn parse_var(token: &str) -> Result<(usize, usize), ExportError> {
    let rest = token
        .strip_prefix("x_")
        .ok_or_else(|| ExportError::ParseError(format!("bad variable token {token:?}")))?;
    let (i, j) = rest
        .split_once('_')
        .ok_or_else(|| ExportError::ParseError(format!("bad variable token {token:?}")))?;
    let parse = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| ExportError::ParseError(format!("bad variable token {token:?}")))
    };
    Ok((parse(i)?, parse(j)?))
}

/// Re-parses a model body emitted by `export_ilp`.
pub fn parse_model(body: &str) -> Result<ParsedModel, ExportError> {
    #[derive(PartialEq)]
    enum Section {
        Preamble,
        Objective,
        Constraints,
        Binary,
        End,
    }
    let mut section = Section::Preamble;
    let mut variables = Vec::new();
    let mut constraints = Vec::new();

    for line in body.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        match line {
            "Minimize" => {
                section = Section::Objective;
                continue;
            }
            "Subject To" => {
                section = Section::Constraints;
                continue;
            }
            "Binary" => {
                section = Section::Binary;
                continue;
            }
            "End" => {
                section = Section::End;
                continue;
            }
            _ => {}
        }
        match section {
            Section::Preamble => {
                return Err(ExportError::ParseError(format!(
                    "unexpected text before Minimize: {line:?}"
                )))
            }
            Section::Objective => {}
            Section::Constraints => {
                let (name, expr) = line.split_once(':').ok_or_else(|| {
                    ExportError::ParseError(format!("constraint without name: {line:?}"))
                })?;
                let (sense, lhs_rhs) = if let Some(parts) = expr.split_once("<=") {
                    (Sense::Le, parts)
                } else if let Some(parts) = expr.split_once('=') {
                    (Sense::Eq, parts)
                } else {
                    return Err(ExportError::ParseError(format!(
                        "constraint without relation: {line:?}"
                    )));
                };
                let rhs: f64 = lhs_rhs.1.trim().parse().map_err(|_| {
                    ExportError::ParseError(format!("bad right-hand side: {line:?}"))
                })?;
                let mut terms = Vec::new();
                for token in lhs_rhs.0.split_whitespace() {
                    match token {
                        "+" | "0" => {}
                        var => terms.push(parse_var(var)?),
                    }
                }
                constraints.push(Constraint {
                    name: name.trim().to_string(),
                    terms,
                    sense,
                    rhs,
                });
            }
            Section::Binary => variables.push(parse_var(line)?),
            Section::End => {
                return Err(ExportError::ParseError(format!(
                    "trailing text after End: {line:?}"
                )))
            }
        }
    }
    if section != Section::End {
        return Err(ExportError::ParseError("missing End marker".to_string()));
    }
    Ok(ParsedModel {
        variables,
        constraints,
    })
}

/// Counts recovered by re-parsing the emitted body; must agree with the
/// `ExportedModel` header fields.
pub fn model_stats(model: &ExportedModel) -> Result<ModelCounts, ExportError> {
    let parsed = parse_model(&model.body)?;
    let degree = parsed
        .constraints
        .iter()
        .filter(|c| c.name.starts_with("in_") || c.name.starts_with("out_"))
        .count();
    let subtour = parsed
        .constraints
        .iter()
        .filter(|c| c.name.starts_with("sub_"))
        .count();
    Ok(ModelCounts {
        variables: parsed.variables.len(),
        degree_constraints: degree,
        subtour_constraints: subtour,
    })
}

impl Constraint {
    /// Evaluates the row against the incidence vector of `chosen`.
    pub fn satisfied_by(&self, chosen: &HashSet<(usize, usize)>) -> bool {
        let lhs = self.terms.iter().filter(|t| chosen.contains(t)).count() as f64;
        match self.sense {
            Sense::Eq => (lhs - self.rhs).abs() < 1e-9,
            Sense::Le => lhs <= self.rhs + 1e-9,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caf::caf_filter;
    use crate::model::complete_arcs;
    use crate::tsplib::parse_tsplib_str;

    const BERLIN52: &str = include_str!("../data/berlin52.tsp");

    fn prefix(n: usize) -> Instance {
        parse_tsplib_str(BERLIN52).unwrap().take_prefix(n).unwrap()
    }

    #[test]
    fn prefix5_complete_counts() {
        let inst = prefix(5);
        let model = export_ilp(
            &inst,
            &complete_arcs(&inst),
            SubtourMode::Enumerate,
            DEFAULT_ENUMERATE_LIMIT,
        )
        .unwrap();
        assert_eq!(model.num_variables, 20);
        assert_eq!(model.num_degree_constraints, 10);
        assert_eq!(model.num_subtour_constraints, 25);
        let stats = model_stats(&model).unwrap();
        assert_eq!(
            stats,
            ModelCounts {
                variables: 20,
                degree_constraints: 10,
                subtour_constraints: 25
            }
        );
    }

    #[test]
    fn prefix5_caf_has_18_variables() {
        let inst = prefix(5);
        let caf = caf_filter(&inst);
        let model = export_ilp(
            &inst,
            &caf.arcs,
            SubtourMode::Enumerate,
            DEFAULT_ENUMERATE_LIMIT,
        )
        .unwrap();
        assert_eq!(model.num_variables, 18);
    }

    #[test]
    fn n3_counts() {
        let inst = Instance::from_coords(vec![(0.0, 0.0), (3.0, 0.0), (0.0, 4.0)]);
        let model = export_ilp(
            &inst,
            &complete_arcs(&inst),
            SubtourMode::Enumerate,
            DEFAULT_ENUMERATE_LIMIT,
        )
        .unwrap();
        let stats = model_stats(&model).unwrap();
        assert_eq!(
            stats,
            ModelCounts {
                variables: 6,
                degree_constraints: 6,
                subtour_constraints: 3
            }
        );
    }

    #[test]
    fn enumerate_guard() {
        let inst = prefix(17);
        assert_eq!(
            export_ilp(
                &inst,
                &complete_arcs(&inst),
                SubtourMode::Enumerate,
                DEFAULT_ENUMERATE_LIMIT
            )
            .unwrap_err(),
            ExportError::TooLargeToEnumerate { n: 17, n_max: 16 }
        );
    }

    #[test]
    fn stats_reject_foreign_text() {
        let model = ExportedModel {
            num_variables: 0,
            num_degree_constraints: 0,
            num_subtour_constraints: 0,
            body: String::new(),
        };
        assert!(matches!(model_stats(&model), Err(ExportError::ParseError(_))));
        let garbage = ExportedModel {
            body: "this is not a model\n".to_string(),
            ..model
        };
        assert!(matches!(model_stats(&garbage), Err(ExportError::ParseError(_))));
    }

    #[test]
    fn export_is_deterministic() {
        let inst = prefix(6);
        let a = export_ilp(&inst, &complete_arcs(&inst), SubtourMode::Enumerate, 16).unwrap();
        let b = export_ilp(&inst, &complete_arcs(&inst), SubtourMode::Enumerate, 16).unwrap();
        assert_eq!(a.body, b.body);
    }

    #[test]
    fn tour_satisfies_all_constraints_and_split_violates_one() {
        let inst = prefix(6);
        let arcs = complete_arcs(&inst);
        let model = export_ilp(&inst, &arcs, SubtourMode::Enumerate, 16).unwrap();
        let parsed = parse_model(&model.body).unwrap();

        let tour: HashSet<(usize, usize)> =
            (0..6).map(|w| (w, (w + 1) % 6)).collect();
        assert!(parsed.constraints.iter().all(|c| c.satisfied_by(&tour)));

        let split: HashSet<(usize, usize)> =
            [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)].into();
        assert!(parsed
            .constraints
            .iter()
            .filter(|c| c.name.starts_with("sub_"))
            .any(|c| !c.satisfied_by(&split)));
    }
}
