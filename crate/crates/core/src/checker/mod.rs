//! Static consistency checks over a parsed model bundle.
//!
//! Fifteen closed error classes, each carrying a description and a fix
//! suggestion produced from the [`catalog`] templates. The checker only
//! diagnoses; fixing is left to the correction loop (or a human). Checks are
//! independent and never suppress one another, so one defect may legitimately
//! surface several findings.

pub mod catalog;

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::model::{ActionSchema, Literal, ModelBundle, Parameter, TypeName};

pub use catalog::{error_catalog, CatalogEntry};

/// The closed set of error classes, in fixed catalog row order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ErrorCode {
    WrongTypeUse,
    UndeclaredParameterUse,
    WrongParameter,
    MissingParameters,
    PredicateMismatch,
    WrongTypeForm,
    MissingPredicate,
    DuplicatedPredicate,
    UnusableInitialStatePredicate,
    MissingType,
    ObjectWithMultipleTypes,
    WrongObjectName,
    UnreachableGoalPredicate,
    DuplicatedAction,
    DuplicatedParameter,
}

impl ErrorCode {
    pub const ALL: [ErrorCode; 15] = [
        ErrorCode::WrongTypeUse,
        ErrorCode::UndeclaredParameterUse,
        ErrorCode::WrongParameter,
        ErrorCode::MissingParameters,
        ErrorCode::PredicateMismatch,
        ErrorCode::WrongTypeForm,
        ErrorCode::MissingPredicate,
        ErrorCode::DuplicatedPredicate,
        ErrorCode::UnusableInitialStatePredicate,
        ErrorCode::MissingType,
        ErrorCode::ObjectWithMultipleTypes,
        ErrorCode::WrongObjectName,
        ErrorCode::UnreachableGoalPredicate,
        ErrorCode::DuplicatedAction,
        ErrorCode::DuplicatedParameter,
    ];

    pub fn row_index(self) -> usize {
        Self::ALL.iter().position(|c| *c == self).expect("closed set")
    }

    pub fn name(self) -> &'static str {
        match self {
            ErrorCode::WrongTypeUse => "WrongTypeUse",
            ErrorCode::UndeclaredParameterUse => "UndeclaredParameterUse",
            ErrorCode::WrongParameter => "WrongParameter",
            ErrorCode::MissingParameters => "MissingParameters",
            ErrorCode::PredicateMismatch => "PredicateMismatch",
            ErrorCode::WrongTypeForm => "WrongTypeForm",
            ErrorCode::MissingPredicate => "MissingPredicate",
            ErrorCode::DuplicatedPredicate => "DuplicatedPredicate",
            ErrorCode::UnusableInitialStatePredicate => "UnusableInitialStatePredicate",
            ErrorCode::MissingType => "MissingType",
            ErrorCode::ObjectWithMultipleTypes => "ObjectWithMultipleTypes",
            ErrorCode::WrongObjectName => "WrongObjectName",
            ErrorCode::UnreachableGoalPredicate => "UnreachableGoalPredicate",
            ErrorCode::DuplicatedAction => "DuplicatedAction",
            ErrorCode::DuplicatedParameter => "DuplicatedParameter",
        }
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One diagnostic: class, location path, and the instantiated catalog texts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyError {
    pub code: ErrorCode,
    pub location: String,
    pub description: String,
    pub suggestion: String,
}

impl fmt::Display for ConsistencyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.code, self.location, self.description)
    }
}

/// Deterministically ordered findings: document order of the offending
/// construct, ties broken by catalog row order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CheckReport {
    pub errors: Vec<ConsistencyError>,
    pub counts: BTreeMap<ErrorCode, usize>,
}

impl CheckReport {
    pub fn is_clean(&self) -> bool {
        self.errors.is_empty()
    }

    /// The error array embedded verbatim in correction prompts.
    pub fn errors_json(&self) -> Value {
        Value::Array(
            self.errors
                .iter()
                .map(|e| {
                    json!({
                        "code": e.code.name(),
                        "location": e.location,
                        "description": e.description,
                        "suggestion": e.suggestion,
                    })
                })
                .collect(),
        )
    }

    pub fn to_json(&self) -> Value {
        let counts: Value = Value::Object(
            self.counts
                .iter()
                .map(|(code, n)| (code.name().to_string(), json!(n)))
                .collect(),
        );
        json!({ "errors": self.errors_json(), "counts": counts })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("valid JSON value")
    }
}

/// Document position of a finding; orders the final report.
/// (region, item, part, slot, catalog row).
type SortKey = (u8, usize, usize, usize, usize);

struct Keyed {
    key: SortKey,
    error: ConsistencyError,
}

struct Findings {
    items: Vec<Keyed>,
}

impl Findings {
    fn new() -> Self {
        Findings { items: Vec::new() }
    }

    fn push(
        &mut self,
        key: (u8, usize, usize, usize),
        code: ErrorCode,
        variant: usize,
        location: String,
        subs: &[(&str, &str)],
    ) {
        let entry = catalog::entry(code);
        self.items.push(Keyed {
            key: (key.0, key.1, key.2, key.3, code.row_index()),
            error: ConsistencyError {
                code,
                location,
                description: catalog::instantiate(entry.descriptions[variant], subs),
                suggestion: catalog::instantiate(entry.suggestions[variant], subs),
            },
        });
    }

    fn into_errors(self) -> Vec<ConsistencyError> {
        let mut items = self.items;
        items.sort_by(|a, b| a.key.cmp(&b.key));
        items.into_iter().map(|k| k.error).collect()
    }
}

// Document regions, in document order.
const REGION_TYPES: u8 = 0;
const REGION_PREDICATES: u8 = 1;
const REGION_ACTIONS: u8 = 2;
const REGION_OBJECTS: u8 = 3;
const REGION_INIT: u8 = 4;
const REGION_GOAL: u8 = 5;

// Position of a finding inside an action: signature first, then body.
const PART_DECL: usize = 0;
const PART_PRECONDITIONS: usize = 1;
const PART_EFFECTS: usize = 2;

/// Runs all fifteen checks. Idempotent and deterministic; an empty report
/// means the model passes every check.
pub fn check_model(bundle: &ModelBundle) -> CheckReport {
    let mut findings = Findings::new();
    declarations_pass(bundle, &mut findings);
    bodies_pass(bundle, &mut findings);
    problem_pass(bundle, &mut findings);

    let mut errors = findings.into_errors();
    errors.dedup();
    let mut counts = BTreeMap::new();
    for e in &errors {
        *counts.entry(e.code).or_insert(0) += 1;
    }
    CheckReport { errors, counts }
}

/// Declaration-level findings only: types, predicate and action signatures,
/// and object declarations. No action-body traversal.
pub fn check_declarations(bundle: &ModelBundle) -> Vec<ConsistencyError> {
    let mut findings = Findings::new();
    declarations_pass(bundle, &mut findings);
    findings.into_errors()
}

/// Findings inside action preconditions and effects, one per offending
/// literal occurrence.
pub fn check_action_bodies(bundle: &ModelBundle) -> Vec<ConsistencyError> {
    let mut findings = Findings::new();
    bodies_pass(bundle, &mut findings);
    findings.into_errors()
}

/// Findings over the problem's init and goal. "Present in preconditions /
/// effects" is judged by predicate name; the grounded analysis belongs to the
/// reachability module.
pub fn check_problem_state(bundle: &ModelBundle) -> Vec<ConsistencyError> {
    let mut findings = Findings::new();
    problem_pass(bundle, &mut findings);
    findings.into_errors()
}

fn declarations_pass(bundle: &ModelBundle, out: &mut Findings) {
    let domain = &bundle.domain;
    let hierarchy = &domain.hierarchy;

    for (i, name) in hierarchy.names().enumerate() {
        if !name.is_canonical() {
            out.push(
                (REGION_TYPES, i, 0, 0),
                ErrorCode::WrongTypeForm,
                0,
                format!("type:{name}"),
                &[("X", name.as_str())],
            );
        }
    }

    for (i, decl) in domain.predicates.iter().enumerate() {
        if domain.predicates[..i].iter().any(|d| d.name == decl.name) {
            out.push(
                (REGION_PREDICATES, i, 0, 0),
                ErrorCode::DuplicatedPredicate,
                0,
                format!("predicate:{}", decl.name),
                &[("Y", &decl.name)],
            );
        }
        for (k, param) in decl.parameters.iter().enumerate() {
            let location = format!("predicate:{}/parameter:{}", decl.name, param.name);
            match &param.declared_type {
                // No dedicated catalog row exists for an untyped predicate
                // parameter; the untyped-signature-parameter template is the
                // nearest one and names the predicate in the action slot.
                None => out.push(
                    (REGION_PREDICATES, i, 1, k),
                    ErrorCode::MissingType,
                    0,
                    location,
                    &[("X", &param.name), ("Z", &decl.name)],
                ),
                Some(ty) => {
                    type_reference_findings(
                        (REGION_PREDICATES, i, 1, k),
                        ty,
                        location,
                        hierarchy,
                        out,
                    );
                }
            }
        }
    }

    for (i, action) in domain.actions.iter().enumerate() {
        if domain.actions[..i].iter().any(|a| a.name == action.name) {
            out.push(
                (REGION_ACTIONS, i, PART_DECL, 0),
                ErrorCode::DuplicatedAction,
                0,
                format!("action:{}", action.name),
                &[("Z", &action.name)],
            );
        }
        if action.parameters.is_empty() {
            out.push(
                (REGION_ACTIONS, i, PART_DECL, 0),
                ErrorCode::MissingParameters,
                2,
                format!("action:{}", action.name),
                &[("Z", &action.name)],
            );
        }
        for (k, param) in action.parameters.iter().enumerate() {
            let location = format!("action:{}/parameter:{}", action.name, param.name);
            if action.parameters[..k].iter().any(|p| p.name == param.name) {
                out.push(
                    (REGION_ACTIONS, i, PART_DECL, k),
                    ErrorCode::DuplicatedParameter,
                    0,
                    location.clone(),
                    &[("X", &param.name), ("Z", &action.name)],
                );
            }
            match &param.declared_type {
                None => out.push(
                    (REGION_ACTIONS, i, PART_DECL, k),
                    ErrorCode::MissingType,
                    0,
                    location,
                    &[("X", &param.name), ("Z", &action.name)],
                ),
                Some(ty) => {
                    type_reference_findings(
                        (REGION_ACTIONS, i, PART_DECL, k),
                        ty,
                        location,
                        hierarchy,
                        out,
                    );
                }
            }
        }
    }

    let mut multi_reported: Vec<&str> = Vec::new();
    for (i, object) in bundle.problem.objects.iter().enumerate() {
        let location = format!("object:{}", object.name);
        if hierarchy.names().any(|t| t.as_str() == object.name) {
            out.push(
                (REGION_OBJECTS, i, 0, 0),
                ErrorCode::WrongObjectName,
                0,
                location.clone(),
                &[("X", &object.name)],
            );
        }
        type_reference_findings(
            (REGION_OBJECTS, i, 0, 1),
            &object.declared_type,
            location.clone(),
            hierarchy,
            out,
        );
        if !multi_reported.contains(&object.name.as_str()) {
            let earlier = bundle.problem.objects[..i]
                .iter()
                .find(|o| o.name == object.name && o.declared_type != object.declared_type);
            if let Some(first) = earlier {
                multi_reported.push(&object.name);
                out.push(
                    (REGION_OBJECTS, i, 0, 0),
                    ErrorCode::ObjectWithMultipleTypes,
                    0,
                    location,
                    &[
                        ("O", object.name.as_str()),
                        ("Y1", first.declared_type.as_str()),
                        ("Y2", object.declared_type.as_str()),
                    ],
                );
            }
        }
    }
}

/// Findings for a written type reference: wrong form and/or undefined name.
fn type_reference_findings(
    key: (u8, usize, usize, usize),
    ty: &TypeName,
    location: String,
    hierarchy: &crate::model::TypeHierarchy,
    out: &mut Findings,
) {
    if !ty.is_canonical() {
        out.push(
            key,
            ErrorCode::WrongTypeForm,
            0,
            location.clone(),
            &[("X", ty.as_str())],
        );
    }
    if !hierarchy.contains(ty) {
        out.push(
            key,
            ErrorCode::MissingType,
            1,
            location,
            &[("Y", ty.as_str())],
        );
    }
}

fn bodies_pass(bundle: &ModelBundle, out: &mut Findings) {
    let domain = &bundle.domain;
    let hierarchy = &domain.hierarchy;
    for (i, action) in domain.actions.iter().enumerate() {
        let sections = [
            (PART_PRECONDITIONS, "precondition", &action.preconditions),
            (PART_EFFECTS, "effect", &action.effects),
        ];
        for (part, section, literals) in sections {
            for (j, lit) in literals.iter().enumerate() {
                let key = (REGION_ACTIONS, i, part, j);
                let location = format!("action:{}/{}:{}", action.name, section, j);
                body_literal_findings(bundle, action, lit, key, &location, out);

                let Some(decl) = domain.find_predicate(&lit.predicate) else {
                    continue;
                };
                let arity = decl.arity();
                if lit.args.is_empty() && arity > 0 {
                    out.push(
                        key,
                        ErrorCode::MissingParameters,
                        1,
                        location.clone(),
                        &[("Y", lit.predicate.as_str()), ("Z", action.name.as_str())],
                    );
                } else if lit.args.len() < arity {
                    // Blame the first slot left unfilled.
                    let slot = &decl.parameters[lit.args.len()];
                    let slot_type = slot
                        .declared_type
                        .as_ref()
                        .map(|t| t.as_str())
                        .unwrap_or(slot.name.as_str());
                    out.push(
                        key,
                        ErrorCode::MissingParameters,
                        0,
                        location.clone(),
                        &[
                            ("Y", lit.predicate.as_str()),
                            ("X", slot_type),
                            ("Z", action.name.as_str()),
                        ],
                    );
                } else if lit.args.len() > arity {
                    out.push(
                        key,
                        ErrorCode::PredicateMismatch,
                        0,
                        location.clone(),
                        &[("X", lit.predicate.as_str())],
                    );
                } else {
                    let mismatch = lit.args.iter().zip(&decl.parameters).any(|(arg, slot)| {
                        let arg_type = action
                            .parameter(arg)
                            .and_then(|p| p.declared_type.as_ref());
                        match (arg_type, slot.declared_type.as_ref()) {
                            (Some(at), Some(st))
                                if hierarchy.contains(at) && hierarchy.contains(st) =>
                            {
                                !hierarchy.is_subtype(at, st).unwrap_or(true)
                            }
                            // Unresolvable sides are someone else's finding.
                            _ => false,
                        }
                    });
                    if mismatch {
                        out.push(
                            key,
                            ErrorCode::WrongTypeUse,
                            0,
                            location.clone(),
                            &[("X", lit.predicate.as_str())],
                        );
                    }
                }
            }
        }
    }
}

/// Classifies each argument of an action-body literal that does not resolve
/// to a signature parameter.
fn body_literal_findings(
    bundle: &ModelBundle,
    action: &ActionSchema,
    lit: &Literal,
    key: (u8, usize, usize, usize),
    location: &str,
    out: &mut Findings,
) {
    let domain = &bundle.domain;
    if domain.find_predicate(&lit.predicate).is_none() {
        out.push(
            key,
            ErrorCode::MissingPredicate,
            0,
            location.to_string(),
            &[("Y", lit.predicate.as_str())],
        );
    }
    for arg in &lit.args {
        if action.parameter(arg).is_some() {
            continue;
        }
        if domain.hierarchy.names().any(|t| t.as_str() == *arg) {
            out.push(
                key,
                ErrorCode::WrongParameter,
                0,
                location.to_string(),
                &[("X", arg.as_str()), ("Y", lit.predicate.as_str()), ("Z", action.name.as_str())],
            );
        } else if TypeName::new(arg.clone()).is_canonical() {
            // Written in type form but no such type exists.
            out.push(
                key,
                ErrorCode::WrongParameter,
                1,
                location.to_string(),
                &[("X", arg.as_str()), ("Y", lit.predicate.as_str())],
            );
        } else {
            out.push(
                key,
                ErrorCode::UndeclaredParameterUse,
                0,
                location.to_string(),
                &[("X", arg.as_str()), ("Y", action.name.as_str())],
            );
        }
    }
}

fn problem_pass(bundle: &ModelBundle, out: &mut Findings) {
    let domain = &bundle.domain;
    let hierarchy = &domain.hierarchy;
    let precondition_names: Vec<&str> = domain
        .actions
        .iter()
        .flat_map(|a| a.preconditions.iter().map(|l| l.predicate.as_str()))
        .collect();
    let effect_names: Vec<&str> = domain
        .actions
        .iter()
        .flat_map(|a| a.effects.iter().map(|l| l.predicate.as_str()))
        .collect();

    let sections = [
        (REGION_INIT, "init", &bundle.problem.init),
        (REGION_GOAL, "goal", &bundle.problem.goal),
    ];
    for (region, section, literals) in sections {
        for (j, lit) in literals.iter().enumerate() {
            let key = (region, j, 0, 0);
            let location = format!("{section}:{j}");
            let decl = domain.find_predicate(&lit.predicate);
            if decl.is_none() {
                out.push(
                    key,
                    ErrorCode::MissingPredicate,
                    0,
                    location.clone(),
                    &[("Y", lit.predicate.as_str())],
                );
            }
            for arg in &lit.args {
                if bundle.problem.find_object(arg).is_none() {
                    out.push(
                        key,
                        ErrorCode::WrongParameter,
                        2,
                        location.clone(),
                        &[("X", arg.as_str())],
                    );
                }
            }
            if let Some(decl) = decl {
                if lit.args.len() != decl.arity() {
                    out.push(
                        key,
                        ErrorCode::PredicateMismatch,
                        0,
                        location.clone(),
                        &[("X", lit.predicate.as_str())],
                    );
                } else {
                    let mismatch = lit.args.iter().zip(&decl.parameters).any(|(arg, slot)| {
                        let obj_type = bundle
                            .problem
                            .find_object(arg)
                            .map(|o| &o.declared_type);
                        match (obj_type, slot.declared_type.as_ref()) {
                            (Some(ot), Some(st))
                                if hierarchy.contains(ot) && hierarchy.contains(st) =>
                            {
                                !hierarchy.is_subtype(ot, st).unwrap_or(true)
                            }
                            _ => false,
                        }
                    });
                    if mismatch {
                        out.push(
                            key,
                            ErrorCode::PredicateMismatch,
                            0,
                            location.clone(),
                            &[("X", lit.predicate.as_str())],
                        );
                    }
                }
            }
            if region == REGION_INIT && !precondition_names.contains(&lit.predicate.as_str()) {
                out.push(
                    key,
                    ErrorCode::UnusableInitialStatePredicate,
                    0,
                    location.clone(),
                    &[("Y", lit.predicate.as_str())],
                );
            }
            if region == REGION_GOAL && !effect_names.contains(&lit.predicate.as_str()) {
                out.push(
                    key,
                    ErrorCode::UnreachableGoalPredicate,
                    0,
                    location.clone(),
                    &[("Y", lit.predicate.as_str())],
                );
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markup::parse_model;

    const GRIPPER: &str = include_str!("../../../../fixtures/gripper.model.json");

    fn gripper() -> ModelBundle {
        parse_model(GRIPPER).expect("gripper fixture parses")
    }

    #[test]
    fn clean_gripper_has_zero_errors() {
        let report = check_model(&gripper());
        assert!(report.is_clean(), "unexpected errors: {:#?}", report.errors);
    }

    #[test]
    fn check_model_is_deterministic() {
        let bundle = gripper();
        assert_eq!(check_model(&bundle), check_model(&bundle));
    }

    #[test]
    fn report_equals_union_of_passes() {
        let mut bundle = gripper();
        // A handful of faults across all three surfaces.
        bundle.domain.predicates.push(
            crate::model::PredicateDecl::new("at_robot", vec![Parameter::typed("room", "ROOM")])
                .unwrap(),
        );
        bundle.domain.actions[0].preconditions[0].args.swap(0, 1);
        bundle.problem.init.push(Literal::positive("mystery", vec!["ball1".into()]));

        let report = check_model(&bundle);
        let mut union = check_declarations(&bundle);
        union.extend(check_action_bodies(&bundle));
        union.extend(check_problem_state(&bundle));
        assert_eq!(report.errors.len(), union.len());
        for e in &union {
            assert!(report.errors.contains(e));
        }
        let total: usize = report.counts.values().sum();
        assert_eq!(total, report.errors.len());
    }

    #[test]
    fn swapped_args_flag_wrong_type_use() {
        let mut bundle = gripper();
        bundle.domain.actions[0].preconditions[0].args.swap(0, 1);
        let report = check_model(&bundle);
        assert_eq!(report.errors.len(), 1);
        let e = &report.errors[0];
        assert_eq!(e.code, ErrorCode::WrongTypeUse);
        assert_eq!(e.location, "action:pick/precondition:0");
        assert_eq!(
            e.description,
            "The type of the parameters used in the predicate 'at_ball' do not match the definition."
        );
    }

    #[test]
    fn unknown_body_arg_flags_undeclared_parameter_use() {
        let mut bundle = gripper();
        bundle.domain.actions[0].effects[0].args[1] = "hand".to_string();
        let report = check_model(&bundle);
        assert_eq!(report.errors.len(), 1);
        let e = &report.errors[0];
        assert_eq!(e.code, ErrorCode::UndeclaredParameterUse);
        assert_eq!(
            e.description,
            "The parameter 'hand' is not included in the signature of action 'pick'."
        );
    }

    #[test]
    fn type_name_as_body_arg_flags_wrong_parameter() {
        let mut bundle = gripper();
        bundle.domain.actions[2].preconditions[0].args[0] = "ROOM".to_string();
        let report = check_model(&bundle);
        assert_eq!(report.errors[0].code, ErrorCode::WrongParameter);
        assert_eq!(
            report.errors[0].description,
            "In predicate 'at_robot' the parameter 'ROOM' is a type while a parameter name is expected."
        );
    }

    #[test]
    fn undefined_object_in_init_flags_wrong_parameter() {
        let mut bundle = gripper();
        bundle.problem.init.push(Literal::positive(
            "at_ball",
            vec!["ball9".into(), "room_a".into()],
        ));
        let report = check_model(&bundle);
        assert_eq!(report.errors.len(), 1);
        assert_eq!(report.errors[0].code, ErrorCode::WrongParameter);
        assert_eq!(
            report.errors[0].description,
            "In initial state or goal the parameter 'ball9' is not defined'."
        );
    }

    #[test]
    fn lowercase_type_everywhere_yields_only_wrong_type_form() {
        let text = GRIPPER.replace("GRIPPER", "gripper");
        let bundle = parse_model(&text).unwrap();
        let report = check_model(&bundle);
        assert!(!report.errors.is_empty());
        for e in &report.errors {
            assert_eq!(e.code, ErrorCode::WrongTypeForm);
            assert_eq!(e.description, "The type 'gripper' is not written in upper case.");
        }
        assert!(report.errors.iter().any(|e| e.location == "type:gripper"));
    }

    #[test]
    fn removed_declaration_flags_every_usage_site() {
        let mut bundle = gripper();
        bundle.domain.predicates.retain(|d| d.name != "free");
        let report = check_model(&bundle);
        assert!(!report.errors.is_empty());
        for e in &report.errors {
            assert_eq!(e.code, ErrorCode::MissingPredicate);
            assert_eq!(e.description, "The predicate 'free' has not been defined.");
        }
        // pick precondition + pick effect + drop effect + init
        assert_eq!(report.errors.len(), 4);
    }

    #[test]
    fn empty_action_signature_flags_missing_parameters() {
        let mut bundle = gripper();
        bundle
            .domain
            .actions
            .push(ActionSchema::new("noop", vec![], vec![], vec![]).unwrap());
        let report = check_model(&bundle);
        assert_eq!(report.errors.len(), 1);
        assert_eq!(report.errors[0].code, ErrorCode::MissingParameters);
        assert_eq!(report.errors[0].description, "The action 'noop' has no parameters.");
    }

    #[test]
    fn object_name_collision_is_case_sensitive() {
        let mut bundle = gripper();
        bundle
            .problem
            .objects
            .push(crate::model::ObjectDecl::new("room_x", "ROOM"));
        assert!(check_model(&bundle).is_clean());

        bundle
            .problem
            .objects
            .push(crate::model::ObjectDecl::new("ROOM", "ROOM"));
        let report = check_model(&bundle);
        assert_eq!(report.errors.len(), 1);
        assert_eq!(report.errors[0].code, ErrorCode::WrongObjectName);
        assert_eq!(
            report.errors[0].description,
            "The object 'ROOM' has the same name as type 'ROOM'."
        );
    }

    #[test]
    fn duplicate_object_with_two_types_flagged() {
        let mut bundle = gripper();
        bundle
            .problem
            .objects
            .push(crate::model::ObjectDecl::new("ball1", "ROOM"));
        let report = check_model(&bundle);
        assert_eq!(report.errors.len(), 1);
        assert_eq!(report.errors[0].code, ErrorCode::ObjectWithMultipleTypes);
        assert_eq!(
            report.errors[0].description,
            "The object 'ball1' is at least of type 'BALL' and 'ROOM'."
        );
    }

    #[test]
    fn subtype_compatible_arguments_are_not_errors() {
        let doc = r#"{
            "domain": "d", "problem": "p",
            "types": {"OBJECT": null, "BALL": "OBJECT"},
            "predicates": ["small(thing: OBJECT)"],
            "actions": [
                {"signature": "shrink(ball: BALL)", "preconditions": [], "effects": ["small(ball)"]}
            ],
            "objects": {"ball1": "BALL"},
            "init": [],
            "goal": ["small(ball1)"]
        }"#;
        let bundle = parse_model(doc).unwrap();
        let report = check_model(&bundle);
        assert!(report.is_clean(), "{:#?}", report.errors);
    }

    #[test]
    fn missing_body_args_flag_missing_parameters_with_slot_type() {
        let mut bundle = gripper();
        bundle.domain.actions[0].preconditions[0].args.truncate(1);
        let report = check_model(&bundle);
        assert_eq!(report.errors.len(), 1);
        let e = &report.errors[0];
        assert_eq!(e.code, ErrorCode::MissingParameters);
        assert_eq!(
            e.description,
            "In predicate 'at_ball' the type 'ROOM' is not defined as parameter name in the action signature 'pick'."
        );
    }

    #[test]
    fn excess_arity_flags_predicate_mismatch() {
        let mut bundle = gripper();
        bundle.domain.actions[2].preconditions[0]
            .args
            .push("to".to_string());
        let report = check_model(&bundle);
        assert_eq!(report.errors.len(), 1);
        assert_eq!(report.errors[0].code, ErrorCode::PredicateMismatch);
    }

    #[test]
    fn init_type_violation_flags_predicate_mismatch() {
        let mut bundle = gripper();
        bundle.problem.init.push(Literal::positive(
            "at_ball",
            vec!["grip_left".into(), "room_a".into()],
        ));
        let report = check_model(&bundle);
        assert_eq!(report.errors.len(), 1);
        assert_eq!(report.errors[0].code, ErrorCode::PredicateMismatch);
        assert_eq!(report.errors[0].location, "init:3");
    }

    #[test]
    fn unusable_init_and_unreachable_goal_are_name_level() {
        let mut bundle = gripper();
        bundle.domain.predicates.push(
            crate::model::PredicateDecl::new("painted", vec![Parameter::typed("ball", "BALL")])
                .unwrap(),
        );
        bundle
            .problem
            .init
            .push(Literal::positive("painted", vec!["ball1".into()]));
        let report = check_model(&bundle);
        assert_eq!(report.errors.len(), 1);
        assert_eq!(report.errors[0].code, ErrorCode::UnusableInitialStatePredicate);

        let mut bundle = gripper();
        bundle.domain.predicates.push(
            crate::model::PredicateDecl::new("polished", vec![Parameter::typed("ball", "BALL")])
                .unwrap(),
        );
        bundle
            .problem
            .goal
            .push(Literal::positive("polished", vec!["ball1".into()]));
        let report = check_model(&bundle);
        assert_eq!(report.errors.len(), 1);
        assert_eq!(report.errors[0].code, ErrorCode::UnreachableGoalPredicate);
        assert_eq!(
            report.errors[0].description,
            "The goal predicate 'polished' is not present in the effect of any action."
        );
    }

    #[test]
    fn errors_are_ordered_by_document_position_then_row() {
        let mut bundle = gripper();
        // Fault in goal (late region) and in types (early region).
        bundle.problem.goal.push(Literal::positive("shiny", vec!["ball1".into()]));
        let mut entries = bundle.domain.hierarchy.entries().clone();
        entries.insert(TypeName::new("widget"), None);
        bundle.domain.hierarchy = crate::model::TypeHierarchy::new(entries).unwrap();

        let report = check_model(&bundle);
        let codes: Vec<ErrorCode> = report.errors.iter().map(|e| e.code).collect();
        let type_pos = codes.iter().position(|c| *c == ErrorCode::WrongTypeForm).unwrap();
        let goal_pos = codes.iter().position(|c| *c == ErrorCode::MissingPredicate).unwrap();
        assert!(type_pos < goal_pos);
    }
}
