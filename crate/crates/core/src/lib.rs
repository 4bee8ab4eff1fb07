//! Generation, validation, compilation and diagnosis of STRIPS planning models.
//!
//! The crate is organized around [`model::ModelBundle`], a self-contained
//! domain-plus-problem model that flows through a pipeline of stages:
//!
//! * [`markup`] — a JSON document format with function-signature action
//!   declarations, parsed into / serialized from a `ModelBundle`.
//! * [`checker`] — fifteen classes of static consistency checks, each with a
//!   description and a fix suggestion suitable for feeding back to an LLM.
//! * [`compiler`] — emits standard PDDL (`:strips` + `:typing`) from a
//!   zero-error bundle, plus a PDDL reader for round-trip verification.
//! * [`reachability`] — grounding, delete-relaxed fixpoint analysis,
//!   static-predicate support checks and plan action-coverage.
//! * [`planner`] — a built-in breadth-first planner for desk-scale models,
//!   plan validation, and an external-planner invocation path.
//! * [`llm`] — the end-to-end generation pipeline: textual plan prompt,
//!   markup generation, error-correction loop, and per-run metrics.

pub mod checker;
pub mod compiler;
pub mod llm;
pub mod markup;
pub mod model;
pub mod planner;
pub mod reachability;

pub use model::{
    ActionSchema, DomainModel, Literal, ModelBundle, ModelError, ObjectDecl, Parameter,
    PredicateDecl, ProblemModel, TypeHierarchy, TypeName,
};
