//! Reader for the emitted PDDL fragment: `:strips` + `:typing` domains and
//! problems. Inverse of the emitter on its image; also usable for linting
//! externally produced files, in which case any construct outside the
//! fragment is reported by name instead of being silently dropped.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::model::{
    ActionSchema, DomainModel, Literal, ObjectDecl, Parameter, PredicateDecl, ProblemModel,
    TypeHierarchy, TypeName,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PddlParseError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unsupported construct '{0}'")]
    Unsupported(String),
    #[error("malformed structure: {0}")]
    Structure(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Sexpr {
    Sym(String),
    List(Vec<Sexpr>),
}

impl Sexpr {
    fn as_sym(&self) -> Option<&str> {
        match self {
            Sexpr::Sym(s) => Some(s),
            Sexpr::List(_) => None,
        }
    }

    fn as_list(&self) -> Option<&[Sexpr]> {
        match self {
            Sexpr::List(items) => Some(items),
            Sexpr::Sym(_) => None,
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<String>, PddlParseError> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '(' | ')' => tokens.push(c.to_string()),
            ';' => {
                for c in chars.by_ref() {
                    if c == '\n' {
                        break;
                    }
                }
            }
            c if c.is_whitespace() => {}
            c => {
                let mut sym = String::from(c);
                while let Some(&next) = chars.peek() {
                    if next == '(' || next == ')' || next == ';' || next.is_whitespace() {
                        break;
                    }
                    sym.push(next);
                    chars.next();
                }
                tokens.push(sym);
            }
        }
    }
    Ok(tokens)
}

fn parse_sexpr(text: &str) -> Result<Sexpr, PddlParseError> {
    let tokens = tokenize(text)?;
    let mut pos = 0usize;
    let expr = parse_expr(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(PddlParseError::Syntax(format!(
            "unexpected trailing token '{}'",
            tokens[pos]
        )));
    }
    Ok(expr)
}

fn parse_expr(tokens: &[String], pos: &mut usize) -> Result<Sexpr, PddlParseError> {
    match tokens.get(*pos) {
        None => Err(PddlParseError::Syntax("unexpected end of input".into())),
        Some(t) if t == "(" => {
            *pos += 1;
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos) {
                    None => {
                        return Err(PddlParseError::Syntax("unbalanced parenthesis".into()));
                    }
                    Some(t) if t == ")" => {
                        *pos += 1;
                        return Ok(Sexpr::List(items));
                    }
                    Some(_) => items.push(parse_expr(tokens, pos)?),
                }
            }
        }
        Some(t) if t == ")" => Err(PddlParseError::Syntax("unbalanced ')'".into())),
        Some(t) => {
            *pos += 1;
            Ok(Sexpr::Sym(t.clone()))
        }
    }
}

/// Reads a `name .. - TYPE ..` stream. Names accumulate until a dash assigns
/// them all the following type; trailing names get `None`.
fn typed_symbols(items: &[Sexpr]) -> Result<Vec<(String, Option<String>)>, PddlParseError> {
    let mut out = Vec::new();
    let mut pending: Vec<String> = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let sym = items[i]
            .as_sym()
            .ok_or_else(|| PddlParseError::Structure("expected a name, found a list".into()))?;
        if sym == "-" {
            i += 1;
            let ty = items
                .get(i)
                .and_then(Sexpr::as_sym)
                .ok_or_else(|| PddlParseError::Structure("dangling '-' without a type".into()))?;
            if pending.is_empty() {
                return Err(PddlParseError::Structure("'-' without preceding names".into()));
            }
            for name in pending.drain(..) {
                out.push((name, Some(ty.to_string())));
            }
        } else {
            pending.push(sym.to_string());
        }
        i += 1;
    }
    for name in pending {
        out.push((name, None));
    }
    Ok(out)
}

fn strip_var(sym: &str) -> String {
    sym.strip_prefix('?').unwrap_or(sym).to_string()
}

fn parse_atom(items: &[Sexpr]) -> Result<Literal, PddlParseError> {
    let head = items
        .first()
        .and_then(Sexpr::as_sym)
        .ok_or_else(|| PddlParseError::Structure("empty predicate application".into()))?;
    let mut args = Vec::new();
    for item in &items[1..] {
        let sym = item.as_sym().ok_or_else(|| {
            PddlParseError::Unsupported(
                item.as_list()
                    .and_then(|l| l.first())
                    .and_then(Sexpr::as_sym)
                    .unwrap_or("nested expression")
                    .to_string(),
            )
        })?;
        args.push(strip_var(sym));
    }
    Ok(Literal::positive(head, args))
}

fn parse_literal_expr(expr: &Sexpr) -> Result<Literal, PddlParseError> {
    let items = expr
        .as_list()
        .ok_or_else(|| PddlParseError::Structure("expected a literal list".into()))?;
    match items.first().and_then(Sexpr::as_sym) {
        Some("not") => {
            if items.len() != 2 {
                return Err(PddlParseError::Structure("(not ...) takes one atom".into()));
            }
            let inner = items[1]
                .as_list()
                .ok_or_else(|| PddlParseError::Structure("(not ...) needs an atom".into()))?;
            let mut lit = parse_atom(inner)?;
            lit.negated = true;
            Ok(lit)
        }
        Some(head) if is_unsupported_connective(head) => {
            Err(PddlParseError::Unsupported(head.to_string()))
        }
        Some(_) => parse_atom(items),
        None => Err(PddlParseError::Structure("empty literal".into())),
    }
}

fn is_unsupported_connective(head: &str) -> bool {
    matches!(
        head,
        "forall" | "exists" | "when" | "or" | "imply" | "=" | "increase" | "decrease" | "assign"
    )
}

/// `(and lit..)` or a bare literal.
fn parse_condition(expr: &Sexpr) -> Result<Vec<Literal>, PddlParseError> {
    let items = expr
        .as_list()
        .ok_or_else(|| PddlParseError::Structure("expected a condition".into()))?;
    match items.first().and_then(Sexpr::as_sym) {
        Some("and") => items[1..].iter().map(parse_literal_expr).collect(),
        _ => Ok(vec![parse_literal_expr(expr)?]),
    }
}

fn parameters_from(items: &[Sexpr]) -> Result<Vec<Parameter>, PddlParseError> {
    Ok(typed_symbols(items)?
        .into_iter()
        .map(|(name, ty)| Parameter {
            name: strip_var(&name),
            declared_type: ty.map(TypeName::new),
        })
        .collect())
}

const SUPPORTED_REQUIREMENTS: [&str; 3] = [":strips", ":typing", ":negative-preconditions"];

/// Parses a domain within the emitted fragment back into a [`DomainModel`].
pub fn parse_pddl_domain(text: &str) -> Result<DomainModel, PddlParseError> {
    let root = parse_sexpr(text)?;
    let items = root
        .as_list()
        .ok_or_else(|| PddlParseError::Structure("expected (define ...)".into()))?;
    if items.first().and_then(Sexpr::as_sym) != Some("define") {
        return Err(PddlParseError::Structure("expected (define ...)".into()));
    }
    let header = items
        .get(1)
        .and_then(Sexpr::as_list)
        .ok_or_else(|| PddlParseError::Structure("expected (domain NAME)".into()))?;
    if header.first().and_then(Sexpr::as_sym) != Some("domain") {
        return Err(PddlParseError::Structure("expected (domain NAME)".into()));
    }
    let name = header
        .get(1)
        .and_then(Sexpr::as_sym)
        .ok_or_else(|| PddlParseError::Structure("domain name missing".into()))?
        .to_string();

    let mut hierarchy = TypeHierarchy::empty();
    let mut predicates = Vec::new();
    let mut actions = Vec::new();

    for section in &items[2..] {
        let section_items = section
            .as_list()
            .ok_or_else(|| PddlParseError::Structure("stray symbol at top level".into()))?;
        let head = section_items
            .first()
            .and_then(Sexpr::as_sym)
            .ok_or_else(|| PddlParseError::Structure("empty section".into()))?;
        match head {
            ":requirements" => {
                for req in &section_items[1..] {
                    let sym = req
                        .as_sym()
                        .ok_or_else(|| PddlParseError::Structure("bad requirement".into()))?;
                    if !SUPPORTED_REQUIREMENTS.contains(&sym) {
                        return Err(PddlParseError::Unsupported(sym.to_string()));
                    }
                }
            }
            ":types" => {
                let entries: BTreeMap<TypeName, Option<TypeName>> =
                    typed_symbols(&section_items[1..])?
                        .into_iter()
                        .map(|(name, parent)| (TypeName::new(name), parent.map(TypeName::new)))
                        .collect();
                hierarchy = TypeHierarchy::new(entries)
                    .map_err(|e| PddlParseError::Structure(e.to_string()))?;
            }
            ":predicates" => {
                for decl in &section_items[1..] {
                    let decl_items = decl.as_list().ok_or_else(|| {
                        PddlParseError::Structure("predicate declaration must be a list".into())
                    })?;
                    let pname = decl_items
                        .first()
                        .and_then(Sexpr::as_sym)
                        .ok_or_else(|| PddlParseError::Structure("predicate name missing".into()))?;
                    let params = parameters_from(&decl_items[1..])?;
                    predicates.push(
                        PredicateDecl::new(pname, params)
                            .map_err(|e| PddlParseError::Structure(e.to_string()))?,
                    );
                }
            }
            ":action" => {
                let aname = section_items
                    .get(1)
                    .and_then(Sexpr::as_sym)
                    .ok_or_else(|| PddlParseError::Structure("action name missing".into()))?
                    .to_string();
                let mut parameters = Vec::new();
                let mut preconditions = Vec::new();
                let mut effects = Vec::new();
                let mut i = 2;
                while i < section_items.len() {
                    let key = section_items[i].as_sym().ok_or_else(|| {
                        PddlParseError::Structure("expected :keyword in action".into())
                    })?;
                    let value = section_items.get(i + 1).ok_or_else(|| {
                        PddlParseError::Structure(format!("{key} without a value"))
                    })?;
                    match key {
                        ":parameters" => {
                            parameters = parameters_from(value.as_list().ok_or_else(|| {
                                PddlParseError::Structure(":parameters needs a list".into())
                            })?)?;
                        }
                        ":precondition" => preconditions = parse_condition(value)?,
                        ":effect" => effects = parse_condition(value)?,
                        other => return Err(PddlParseError::Unsupported(other.to_string())),
                    }
                    i += 2;
                }
                actions.push(
                    ActionSchema::new(aname, parameters, preconditions, effects)
                        .map_err(|e| PddlParseError::Structure(e.to_string()))?,
                );
            }
            other => return Err(PddlParseError::Unsupported(other.to_string())),
        }
    }

    Ok(DomainModel {
        name,
        hierarchy,
        predicates,
        actions,
    })
}

/// Parses a problem within the emitted fragment back into a [`ProblemModel`].
/// The `:domain` reference is validated for presence but not recorded; the
/// model keeps domain and problem paired in a bundle instead.
pub fn parse_pddl_problem(text: &str) -> Result<ProblemModel, PddlParseError> {
    let root = parse_sexpr(text)?;
    let items = root
        .as_list()
        .ok_or_else(|| PddlParseError::Structure("expected (define ...)".into()))?;
    if items.first().and_then(Sexpr::as_sym) != Some("define") {
        return Err(PddlParseError::Structure("expected (define ...)".into()));
    }
    let header = items
        .get(1)
        .and_then(Sexpr::as_list)
        .ok_or_else(|| PddlParseError::Structure("expected (problem NAME)".into()))?;
    if header.first().and_then(Sexpr::as_sym) != Some("problem") {
        return Err(PddlParseError::Structure("expected (problem NAME)".into()));
    }
    let name = header
        .get(1)
        .and_then(Sexpr::as_sym)
        .ok_or_else(|| PddlParseError::Structure("problem name missing".into()))?
        .to_string();

    let mut objects = Vec::new();
    let mut init = Vec::new();
    let mut goal = Vec::new();

    for section in &items[2..] {
        let section_items = section
            .as_list()
            .ok_or_else(|| PddlParseError::Structure("stray symbol at top level".into()))?;
        let head = section_items
            .first()
            .and_then(Sexpr::as_sym)
            .ok_or_else(|| PddlParseError::Structure("empty section".into()))?;
        match head {
            ":domain" => {
                section_items
                    .get(1)
                    .and_then(Sexpr::as_sym)
                    .ok_or_else(|| PddlParseError::Structure(":domain name missing".into()))?;
            }
            ":objects" => {
                for (obj, ty) in typed_symbols(&section_items[1..])? {
                    let ty = ty.ok_or_else(|| {
                        PddlParseError::Structure(format!("object '{obj}' has no type"))
                    })?;
                    objects.push(ObjectDecl::new(obj, ty));
                }
            }
            ":init" => {
                for atom in &section_items[1..] {
                    let lit = parse_literal_expr(atom)?;
                    if lit.negated {
                        return Err(PddlParseError::Structure(format!(
                            "negated initial-state atom '{lit}'"
                        )));
                    }
                    init.push(lit);
                }
            }
            ":goal" => {
                let value = section_items
                    .get(1)
                    .ok_or_else(|| PddlParseError::Structure(":goal without a value".into()))?;
                goal = parse_condition(value)?;
            }
            other => return Err(PddlParseError::Unsupported(other.to_string())),
        }
    }

    ProblemModel::new(name, objects, init, goal)
        .map_err(|e| PddlParseError::Structure(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_domain_with_empty_action() {
        let domain = parse_pddl_domain("(define (domain x) (:action a :parameters ()))").unwrap();
        assert_eq!(domain.name, "x");
        assert_eq!(domain.actions.len(), 1);
        assert!(domain.actions[0].parameters.is_empty());
        assert!(domain.actions[0].preconditions.is_empty());
        assert!(domain.actions[0].effects.is_empty());
    }

    #[test]
    fn forall_is_reported_by_name() {
        let text = "(define (domain x) (:action a :parameters () \
                    :precondition (forall (?x) (p ?x)) :effect (and)))";
        assert_eq!(
            parse_pddl_domain(text),
            Err(PddlParseError::Unsupported("forall".to_string())),
        );
    }

    #[test]
    fn durative_actions_are_reported_by_name() {
        let text = "(define (domain x) (:durative-action a))";
        assert_eq!(
            parse_pddl_domain(text),
            Err(PddlParseError::Unsupported(":durative-action".to_string())),
        );
    }

    #[test]
    fn comments_are_skipped() {
        let text = "; header comment\n(define (domain x) ; trailing\n)";
        assert_eq!(parse_pddl_domain(text).unwrap().name, "x");
    }

    #[test]
    fn unbalanced_input_is_a_syntax_error() {
        assert!(matches!(
            parse_pddl_domain("(define (domain x)"),
            Err(PddlParseError::Syntax(_)),
        ));
    }

    #[test]
    fn grouped_parameter_types_expand() {
        let text = "(define (domain x) (:types T) (:predicates (near ?a ?b - T)))";
        let domain = parse_pddl_domain(text).unwrap();
        let decl = &domain.predicates[0];
        assert_eq!(decl.parameters.len(), 2);
        assert_eq!(decl.parameters[0].declared_type, Some(TypeName::new("T")));
        assert_eq!(decl.parameters[1].declared_type, Some(TypeName::new("T")));
    }

    #[test]
    fn negated_init_atom_rejected() {
        let text = "(define (problem p) (:domain d) (:objects o - T) \
                    (:init (not (p o))) (:goal (and (p o))))";
        assert!(matches!(
            parse_pddl_problem(text),
            Err(PddlParseError::Structure(_)),
        ));
    }

    #[test]
    fn untyped_object_rejected() {
        let text = "(define (problem p) (:domain d) (:objects o) (:init) (:goal (and (g o))))";
        assert!(matches!(
            parse_pddl_problem(text),
            Err(PddlParseError::Structure(_)),
        ));
    }
}
