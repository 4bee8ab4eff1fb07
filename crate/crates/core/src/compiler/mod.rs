//! Compilation from the model representation to standard PDDL
//! (`:strips` + `:typing`), and a reader for the emitted fragment.
//!
//! Both compile entry points take the whole bundle: the compile guard runs the
//! full consistency check and refuses to emit anything while findings remain.
//! Output is deterministic byte for byte; identifier case is preserved (PDDL
//! consumers are case-insensitive, so this costs nothing).

mod reader;

pub use reader::{parse_pddl_domain, parse_pddl_problem, PddlParseError};

use std::fmt::Write;

use thiserror::Error;

use crate::checker::{self, ErrorCode};
use crate::model::{DomainModel, Literal, ModelBundle, Parameter};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("model has outstanding consistency errors: {}", codes_list(.0))]
    ModelHasErrors(Vec<ErrorCode>),
    #[error("problem has an empty goal")]
    EmptyGoal,
    #[error("object '{object}' has type '{declared_type}' which is not declared in the domain")]
    UnknownObjectType {
        object: String,
        declared_type: String,
    },
    #[error("name '{0}' cannot be emitted as a PDDL symbol")]
    InvalidSymbol(String),
}

fn codes_list(codes: &[ErrorCode]) -> String {
    codes
        .iter()
        .map(|c| c.name())
        .collect::<Vec<_>>()
        .join(", ")
}

fn guard(bundle: &ModelBundle) -> Result<(), CompileError> {
    let report = checker::check_model(bundle);
    if !report.is_clean() {
        let mut codes: Vec<ErrorCode> = report.counts.keys().copied().collect();
        codes.sort();
        return Err(CompileError::ModelHasErrors(codes));
    }
    Ok(())
}

fn symbol(name: &str) -> Result<&str, CompileError> {
    let mut chars = name.chars();
    let head_ok = matches!(chars.next(), Some(c) if c.is_ascii_alphanumeric() || c == '_');
    let tail_ok = chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
    if head_ok && tail_ok {
        Ok(name)
    } else {
        Err(CompileError::InvalidSymbol(name.to_string()))
    }
}

fn literal_sexpr(lit: &Literal) -> Result<String, CompileError> {
    let mut atom = format!("({}", symbol(&lit.predicate)?);
    for arg in &lit.args {
        write!(atom, " ?{}", symbol(arg)?).unwrap();
    }
    atom.push(')');
    Ok(if lit.negated {
        format!("(not {atom})")
    } else {
        atom
    })
}

fn ground_atom_sexpr(lit: &Literal) -> Result<String, CompileError> {
    let mut atom = format!("({}", symbol(&lit.predicate)?);
    for arg in &lit.args {
        write!(atom, " {}", symbol(arg)?).unwrap();
    }
    atom.push(')');
    Ok(if lit.negated {
        format!("(not {atom})")
    } else {
        atom
    })
}

fn conjunction(lits: &[Literal], ground: bool) -> Result<String, CompileError> {
    let mut out = String::from("(and");
    for lit in lits {
        let rendered = if ground {
            ground_atom_sexpr(lit)?
        } else {
            literal_sexpr(lit)?
        };
        write!(out, " {rendered}").unwrap();
    }
    out.push(')');
    Ok(out)
}

fn parameter_list(params: &[Parameter]) -> Result<String, CompileError> {
    let mut out = String::from("(");
    for (i, p) in params.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        write!(out, "?{}", symbol(&p.name)?).unwrap();
        if let Some(t) = &p.declared_type {
            write!(out, " - {}", symbol(t.as_str())?).unwrap();
        }
    }
    out.push(')');
    Ok(out)
}

/// `(:types child .. - PARENT .. root ..)`: typed groups first, root types
/// trailing bare. Entries iterate in sorted name order, so output is stable.
fn types_clause(domain: &DomainModel) -> Result<String, CompileError> {
    let mut typed: Vec<(&str, &str)> = Vec::new();
    let mut roots: Vec<&str> = Vec::new();
    for (name, parent) in domain.hierarchy.entries() {
        match parent {
            Some(p) => typed.push((p.as_str(), name.as_str())),
            None => roots.push(name.as_str()),
        }
    }
    let mut out = String::from("(:types");
    let mut i = 0;
    while i < typed.len() {
        let parent = typed[i].0;
        let mut j = i;
        while j < typed.len() && typed[j].0 == parent {
            write!(out, " {}", symbol(typed[j].1)?).unwrap();
            j += 1;
        }
        write!(out, " - {}", symbol(parent)?).unwrap();
        i = j;
    }
    for root in roots {
        write!(out, " {}", symbol(root)?).unwrap();
    }
    out.push(')');
    Ok(out)
}

/// Emits the `(define (domain ...))` text for a bundle that passes every
/// consistency check.
pub fn compile_domain(bundle: &ModelBundle) -> Result<String, CompileError> {
    guard(bundle)?;
    let domain = &bundle.domain;
    let mut out = String::new();
    writeln!(out, "(define (domain {})", symbol(&domain.name)?).unwrap();
    writeln!(out, "  (:requirements :strips :typing)").unwrap();
    writeln!(out, "  {}", types_clause(domain)?).unwrap();
    if domain.predicates.is_empty() {
        writeln!(out, "  (:predicates)").unwrap();
    } else {
        writeln!(out, "  (:predicates").unwrap();
        for (i, decl) in domain.predicates.iter().enumerate() {
            let mut line = format!("    ({}", symbol(&decl.name)?);
            for p in &decl.parameters {
                write!(line, " ?{}", symbol(&p.name)?).unwrap();
                if let Some(t) = &p.declared_type {
                    write!(line, " - {}", symbol(t.as_str())?).unwrap();
                }
            }
            line.push(')');
            if i + 1 == domain.predicates.len() {
                line.push(')');
            }
            writeln!(out, "{line}").unwrap();
        }
    }
    for action in &domain.actions {
        writeln!(
            out,
            "  (:action {} :parameters {} :precondition {} :effect {})",
            symbol(&action.name)?,
            parameter_list(&action.parameters)?,
            conjunction(&action.preconditions, false)?,
            conjunction(&action.effects, false)?,
        )
        .unwrap();
    }
    out.push_str(")\n");
    Ok(out)
}

/// Emits the `(define (problem ...))` text. Refuses empty goals: a problem
/// without a goal has nothing to plan for and almost always signals a broken
/// generation.
pub fn compile_problem(bundle: &ModelBundle) -> Result<String, CompileError> {
    guard(bundle)?;
    let problem = &bundle.problem;
    if problem.goal.is_empty() {
        return Err(CompileError::EmptyGoal);
    }
    for object in &problem.objects {
        if !bundle.domain.hierarchy.contains(&object.declared_type) {
            return Err(CompileError::UnknownObjectType {
                object: object.name.clone(),
                declared_type: object.declared_type.as_str().to_string(),
            });
        }
    }

    let mut out = String::new();
    writeln!(out, "(define (problem {})", symbol(&problem.name)?).unwrap();
    writeln!(out, "  (:domain {})", symbol(&bundle.domain.name)?).unwrap();

    let mut objects = String::from("(:objects");
    let mut i = 0;
    while i < problem.objects.len() {
        let ty = &problem.objects[i].declared_type;
        let mut j = i;
        while j < problem.objects.len() && problem.objects[j].declared_type == *ty {
            write!(objects, " {}", symbol(&problem.objects[j].name)?).unwrap();
            j += 1;
        }
        write!(objects, " - {}", symbol(ty.as_str())?).unwrap();
        i = j;
    }
    objects.push(')');
    writeln!(out, "  {objects}").unwrap();

    let mut init = String::from("(:init");
    for lit in &problem.init {
        write!(init, " {}", ground_atom_sexpr(lit)?).unwrap();
    }
    init.push(')');
    writeln!(out, "  {init}").unwrap();

    writeln!(out, "  (:goal {})", conjunction(&problem.goal, true)?).unwrap();
    out.push_str(")\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markup::parse_model;
    use crate::model::ModelBundle;

    const GRIPPER: &str = include_str!("../../../../fixtures/gripper.model.json");

    fn gripper() -> ModelBundle {
        parse_model(GRIPPER).unwrap()
    }

    #[test]
    fn move_action_compiles_to_expected_line() {
        let text = compile_domain(&gripper()).unwrap();
        let expected = concat!(
            "(:action move :parameters (?from - ROOM ?to - ROOM) ",
            ":precondition (and (at_robot ?from)) ",
            ":effect (and (not (at_robot ?from)) (at_robot ?to)))",
        );
        assert!(text.contains(expected), "missing expected action line in:\n{text}");
    }

    #[test]
    fn gripper_domain_round_trips() {
        let bundle = gripper();
        let text = compile_domain(&bundle).unwrap();
        let parsed = parse_pddl_domain(&text).unwrap();
        assert_eq!(parsed, bundle.domain);
    }

    #[test]
    fn gripper_problem_round_trips() {
        let bundle = gripper();
        let text = compile_problem(&bundle).unwrap();
        let parsed = parse_pddl_problem(&text).unwrap();
        assert_eq!(parsed, bundle.problem);
        assert_eq!(bundle.problem.objects.len(), 4);
        assert_eq!(bundle.problem.init.len(), 3);
        assert_eq!(bundle.problem.goal.len(), 1);
    }

    #[test]
    fn compilation_is_deterministic() {
        let bundle = gripper();
        assert_eq!(compile_domain(&bundle).unwrap(), compile_domain(&bundle).unwrap());
        assert_eq!(
            compile_problem(&bundle).unwrap(),
            compile_problem(&bundle).unwrap()
        );
    }

    #[test]
    fn guard_refuses_models_with_errors() {
        let text = GRIPPER.replace("GRIPPER", "gripper");
        let bundle = parse_model(&text).unwrap();
        match compile_domain(&bundle) {
            Err(CompileError::ModelHasErrors(codes)) => {
                assert_eq!(codes, vec![ErrorCode::WrongTypeForm]);
            }
            other => panic!("expected guard error, got {other:?}"),
        }
    }

    #[test]
    fn empty_goal_is_refused() {
        let mut bundle = gripper();
        bundle.problem.goal.clear();
        assert_eq!(compile_problem(&bundle), Err(CompileError::EmptyGoal));
    }

    #[test]
    fn domain_with_zero_actions_compiles() {
        let doc = r#"{
            "domain": "empty", "problem": "p",
            "types": {"T": null}, "predicates": [],
            "actions": [], "objects": {}, "init": [], "goal": []
        }"#;
        let bundle = parse_model(doc).unwrap();
        let text = compile_domain(&bundle).unwrap();
        let parsed = parse_pddl_domain(&text).unwrap();
        assert_eq!(parsed, bundle.domain);
    }

    #[test]
    fn unbalanced_symbols_are_refused() {
        let mut bundle = gripper();
        bundle.problem.objects[0].name = "ball one".to_string();
        // The checker has no rule about object-name shape, so this reaches the
        // symbol guard (the problem must still be goal-reachable by name).
        bundle.problem.init[1].args[0] = "ball one".to_string();
        bundle.problem.goal[0].args[0] = "ball one".to_string();
        assert!(matches!(
            compile_problem(&bundle),
            Err(CompileError::InvalidSymbol(_))
        ));
    }

    #[test]
    fn parent_types_emit_dash_chains() {
        let doc = r#"{
            "domain": "d", "problem": "p",
            "types": {"PLACE": null, "LOCATION": "PLACE", "CITY": "PLACE", "TRUCK": null},
            "predicates": ["at(t: TRUCK, l: LOCATION)"],
            "actions": [],
            "objects": {}, "init": [], "goal": []
        }"#;
        let bundle = parse_model(doc).unwrap();
        let text = compile_domain(&bundle).unwrap();
        assert!(text.contains("(:types CITY LOCATION - PLACE PLACE TRUCK)"));
        assert_eq!(parse_pddl_domain(&text).unwrap(), bundle.domain);
    }
}
