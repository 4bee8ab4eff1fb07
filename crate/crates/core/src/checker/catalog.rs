//! The closed catalog of consistency-error classes: observed rates and the
//! description / suggestion templates sent to the correction LLM.
//!
//! Templates are instantiated by substituting the quoted placeholders 'X',
//! 'Y', 'Z', 'O', 'Y1', 'Y2' with concrete names. Rows with several numbered
//! variants carry one template string per variant.

use super::ErrorCode;

#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub code: ErrorCode,
    /// Observed fraction of all collected errors falling into this class.
    pub rate: f64,
    pub descriptions: &'static [&'static str],
    pub suggestions: &'static [&'static str],
}

pub const CATALOG: [CatalogEntry; 15] = [
    CatalogEntry {
        code: ErrorCode::WrongTypeUse,
        rate: 0.3725,
        descriptions: &[
            "The type of the parameters used in the predicate 'X' do not match the definition.",
        ],
        suggestions: &["Make sure to use parameters of correct type or create a new predicate."],
    },
    CatalogEntry {
        code: ErrorCode::UndeclaredParameterUse,
        rate: 0.2627,
        descriptions: &["The parameter 'X' is not included in the signature of action 'Y'."],
        suggestions: &["Use only parameter of the action or add a new parameter in the action."],
    },
    CatalogEntry {
        code: ErrorCode::WrongParameter,
        rate: 0.1462,
        descriptions: &[
            "In predicate 'Y' the parameter 'X' is a type while a parameter name is expected.",
            "In predicate 'Y' the type 'X' is undefined.",
            "In initial state or goal the parameter 'X' is not defined'.",
        ],
        suggestions: &[
            "Either use one of the parameter name defined in the  action signature 'Z' or create a new parameter with type 'X' in the action 'Z' and use it in this predicate 'Y'.",
            "Define a new type 'X' or use an existing one.",
            "Define a new object 'X' or use an existing one.",
        ],
    },
    CatalogEntry {
        code: ErrorCode::MissingParameters,
        rate: 0.0666,
        descriptions: &[
            "In predicate 'Y' the type 'X' is not defined as parameter name in the action signature 'Z'.",
            "The predicate 'Y' has no parameters.",
            "The action 'Z' has no parameters.",
        ],
        suggestions: &[
            "Create the parameter name for the type 'X' and use it in the action signature 'Y'.",
            "Review the need for predicate 'Y' and either remove it if it is not mandatory' or add the parameters from the variable available in the signature of action 'Z'.",
            "Review the need for this action and either remove the action if it is not mandatory', or add the parameters and their types from the variable available in the action's preconditions and effects.",
        ],
    },
    CatalogEntry {
        code: ErrorCode::PredicateMismatch,
        rate: 0.0556,
        descriptions: &[
            "The arguments of the predicate 'X' are not matching the types of the predicate definition.",
        ],
        suggestions: &[
            "Either remove the mismatched predicate if it is not mandatory or correct the parameter of the predicate 'X' or modify the predicate name to take in account the different type used for this predicate definition since polymorphism is not allowed.",
        ],
    },
    CatalogEntry {
        code: ErrorCode::WrongTypeForm,
        rate: 0.0315,
        descriptions: &["The type 'X' is not written in upper case."],
        suggestions: &["Rewrite the type using only upper case letters or underscore."],
    },
    CatalogEntry {
        code: ErrorCode::MissingPredicate,
        rate: 0.0159,
        descriptions: &["The predicate 'Y' has not been defined."],
        suggestions: &["Define the predicate 'Y'."],
    },
    CatalogEntry {
        code: ErrorCode::DuplicatedPredicate,
        rate: 0.0147,
        descriptions: &["The predicate 'Y' has already been defined."],
        suggestions: &[
            "Define a new predicate with a name that take in account the semantic of its argument types.",
        ],
    },
    CatalogEntry {
        code: ErrorCode::UnusableInitialStatePredicate,
        rate: 0.0147,
        descriptions: &[
            "The Initial State predicate 'Y' is not present in the preconditions of any action.",
        ],
        suggestions: &[
            "Either remove the predicate from Initial State if is not necessary, or add the predicate in the preconditions of an action that would require this precondition, or create a new action that can have this predicate 'Y' as precondition.",
        ],
    },
    CatalogEntry {
        code: ErrorCode::MissingType,
        rate: 0.0082,
        descriptions: &[
            "The parameter 'X' do not have a type in the signature of action 'Z'.",
            "The type name 'Y' is not defined.",
        ],
        suggestions: &[
            "Add the type of the parameter 'X' in the action signature.",
            "Either create a new type 'Y' or use an existing one.",
        ],
    },
    CatalogEntry {
        code: ErrorCode::ObjectWithMultipleTypes,
        rate: 0.0061,
        descriptions: &["The object 'O' is at least of type 'Y1' and 'Y2'."],
        suggestions: &[
            "Reorganize the type hierarchy of objects to avoid multiple types for an object, or add semantic in the object name to differentiate their belonging types.",
        ],
    },
    CatalogEntry {
        code: ErrorCode::WrongObjectName,
        rate: 0.0025,
        descriptions: &["The object 'X' has the same name as type 'X'."],
        suggestions: &[
            "Change the name of the object 'X' to avoid multiple types for an object for example by adding an index to its name.",
        ],
    },
    CatalogEntry {
        code: ErrorCode::UnreachableGoalPredicate,
        rate: 0.0016,
        descriptions: &["The goal predicate 'Y' is not present in the effect of any action."],
        suggestions: &[
            "Either remove the predicate from the goal states if is not necessary, or add the predicate in the effect of an action that could produce that effect 'Y', or create a new action that can have this predicate 'Y' as an effect.",
        ],
    },
    CatalogEntry {
        code: ErrorCode::DuplicatedAction,
        rate: 0.0008,
        descriptions: &["The action 'Z' has already been defined."],
        suggestions: &[
            "Define a new name for the action 'Z' if it is different, or remove this action if it is redundant.",
        ],
    },
    CatalogEntry {
        code: ErrorCode::DuplicatedParameter,
        rate: 0.0004,
        descriptions: &["The parameter 'X' is duplicated in signature of action 'Z'."],
        suggestions: &["Change the parameter names to avoid duplicates in the action."],
    },
];

/// The 15 catalog entries in fixed row order.
pub fn error_catalog() -> &'static [CatalogEntry; 15] {
    &CATALOG
}

pub(crate) fn entry(code: ErrorCode) -> &'static CatalogEntry {
    &CATALOG[code.row_index()]
}

/// Replaces every quoted placeholder occurrence (`'X'` and friends) in a
/// template with the quoted concrete name.
pub fn instantiate(template: &str, substitutions: &[(&str, &str)]) -> String {
    let mut out = template.to_string();
    for (placeholder, value) in substitutions {
        out = out.replace(&format!("'{placeholder}'"), &format!("'{value}'"));
    }
    out
}
