//! Typed in-memory representation of planning domains and problems.
//!
//! All types are immutable values after construction and safe to share
//! read-only across concurrent pipeline runs. Constructors enforce the
//! structural invariants that the rest of the crate relies on (acyclic type
//! hierarchies, non-contradictory effects, closed-world initial states);
//! everything beyond that is deliberately left to the consistency checker.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown type '{0}'")]
    UnknownType(String),
    #[error("unbound parameter '{0}'")]
    UnboundParameter(String),
    #[error("undeclared predicate '{0}'")]
    UndeclaredPredicate(String),
    #[error("type hierarchy contains a cycle through '{0}'")]
    CyclicHierarchy(String),
    #[error("type '{child}' names undeclared parent '{parent}'")]
    DanglingParent { child: String, parent: String },
    #[error("duplicate parameter '{parameter}' in declaration of predicate '{predicate}'")]
    DuplicateDeclParameter {
        predicate: String,
        parameter: String,
    },
    #[error("action '{action}' has contradictory effect '{literal}'")]
    ContradictoryEffect { action: String, literal: String },
    #[error("negated literal '{0}' in initial state")]
    NegatedInit(String),
}

/// A type name as written in the source model.
///
/// Names are stored verbatim; `is_canonical` tells whether the name follows
/// the expected form (upper-case letters, digits and underscores, starting
/// with a letter). Non-canonical names are kept so the checker can flag them.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeName(String);

impl TypeName {
    pub fn new(name: impl Into<String>) -> Self {
        TypeName(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Upper-case letters, digits and underscores, starting with a letter.
    pub fn is_canonical(&self) -> bool {
        let mut chars = self.0.chars();
        match chars.next() {
            Some(c) if c.is_ascii_uppercase() => {}
            _ => return false,
        }
        chars.all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_')
    }
}

impl fmt::Display for TypeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for TypeName {
    fn from(s: &str) -> Self {
        TypeName::new(s)
    }
}

/// Mapping from each declared type to its optional parent.
///
/// Construction rejects cycles and parents that are not themselves declared,
/// so `is_subtype` always terminates.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TypeHierarchy {
    entries: BTreeMap<TypeName, Option<TypeName>>,
}

impl TypeHierarchy {
    pub fn new(entries: BTreeMap<TypeName, Option<TypeName>>) -> Result<Self, ModelError> {
        for (child, parent) in &entries {
            if let Some(parent) = parent {
                if !entries.contains_key(parent) {
                    return Err(ModelError::DanglingParent {
                        child: child.as_str().to_string(),
                        parent: parent.as_str().to_string(),
                    });
                }
            }
        }
        // With parents all declared, any walk longer than the entry count
        // must have revisited a type.
        for start in entries.keys() {
            let mut current = start;
            let mut steps = 0usize;
            while let Some(Some(parent)) = entries.get(current) {
                current = parent;
                steps += 1;
                if steps > entries.len() {
                    return Err(ModelError::CyclicHierarchy(start.as_str().to_string()));
                }
            }
        }
        Ok(TypeHierarchy { entries })
    }

    pub fn empty() -> Self {
        TypeHierarchy::default()
    }

    pub fn contains(&self, name: &TypeName) -> bool {
        self.entries.contains_key(name)
    }

    pub fn parent_of(&self, name: &TypeName) -> Option<&TypeName> {
        self.entries.get(name).and_then(|p| p.as_ref())
    }

    pub fn entries(&self) -> &BTreeMap<TypeName, Option<TypeName>> {
        &self.entries
    }

    pub fn names(&self) -> impl Iterator<Item = &TypeName> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// True iff `a == b` or `b` is reachable from `a` via parent links.
    pub fn is_subtype(&self, a: &TypeName, b: &TypeName) -> Result<bool, ModelError> {
        if !self.contains(a) {
            return Err(ModelError::UnknownType(a.as_str().to_string()));
        }
        if !self.contains(b) {
            return Err(ModelError::UnknownType(b.as_str().to_string()));
        }
        let mut current = a;
        loop {
            if current == b {
                return Ok(true);
            }
            match self.parent_of(current) {
                Some(parent) => current = parent,
                None => return Ok(false),
            }
        }
    }
}

/// A declared parameter of a predicate or action signature.
///
/// `declared_type` is `None` when the source text carried no type annotation;
/// the checker raises the corresponding error, not the parser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parameter {
    pub name: String,
    pub declared_type: Option<TypeName>,
}

impl Parameter {
    pub fn typed(name: impl Into<String>, ty: impl Into<String>) -> Self {
        Parameter {
            name: name.into(),
            declared_type: Some(TypeName::new(ty.into())),
        }
    }

    pub fn untyped(name: impl Into<String>) -> Self {
        Parameter {
            name: name.into(),
            declared_type: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateDecl {
    pub name: String,
    pub parameters: Vec<Parameter>,
}

impl PredicateDecl {
    /// Parameter names within one declaration must be pairwise distinct.
    pub fn new(name: impl Into<String>, parameters: Vec<Parameter>) -> Result<Self, ModelError> {
        let name = name.into();
        for (i, p) in parameters.iter().enumerate() {
            if parameters[..i].iter().any(|q| q.name == p.name) {
                return Err(ModelError::DuplicateDeclParameter {
                    predicate: name,
                    parameter: p.name.clone(),
                });
            }
        }
        Ok(PredicateDecl { name, parameters })
    }

    pub fn arity(&self) -> usize {
        self.parameters.len()
    }
}

/// A possibly negated predicate application. Arguments are parameter names
/// inside action bodies and object names in ground (init/goal/state) context.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub predicate: String,
    pub args: Vec<String>,
    pub negated: bool,
}

impl Literal {
    pub fn positive(predicate: impl Into<String>, args: Vec<String>) -> Self {
        Literal {
            predicate: predicate.into(),
            args,
            negated: false,
        }
    }

    pub fn negative(predicate: impl Into<String>, args: Vec<String>) -> Self {
        Literal {
            predicate: predicate.into(),
            args,
            negated: true,
        }
    }

    /// The same literal with `negated` forced off.
    pub fn atom(&self) -> Literal {
        Literal {
            predicate: self.predicate.clone(),
            args: self.args.clone(),
            negated: false,
        }
    }

    /// Replaces each argument through `binding`; predicate and negation are
    /// unchanged. Every argument must be bound.
    pub fn substitute(&self, binding: &BTreeMap<String, String>) -> Result<Literal, ModelError> {
        let mut args = Vec::with_capacity(self.args.len());
        for arg in &self.args {
            match binding.get(arg) {
                Some(value) => args.push(value.clone()),
                None => return Err(ModelError::UnboundParameter(arg.clone())),
            }
        }
        Ok(Literal {
            predicate: self.predicate.clone(),
            args,
            negated: self.negated,
        })
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("not ")?;
        }
        write!(f, "{}({})", self.predicate, self.args.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSchema {
    pub name: String,
    pub parameters: Vec<Parameter>,
    pub preconditions: Vec<Literal>,
    pub effects: Vec<Literal>,
}

impl ActionSchema {
    /// Rejects effect lists containing the same atom both negated and
    /// non-negated.
    pub fn new(
        name: impl Into<String>,
        parameters: Vec<Parameter>,
        preconditions: Vec<Literal>,
        effects: Vec<Literal>,
    ) -> Result<Self, ModelError> {
        let name = name.into();
        for (i, e) in effects.iter().enumerate() {
            let contradicts = effects[..i]
                .iter()
                .any(|o| o.predicate == e.predicate && o.args == e.args && o.negated != e.negated);
            if contradicts {
                return Err(ModelError::ContradictoryEffect {
                    action: name,
                    literal: e.atom().to_string(),
                });
            }
        }
        Ok(ActionSchema {
            name,
            parameters,
            preconditions,
            effects,
        })
    }

    pub fn parameter(&self, name: &str) -> Option<&Parameter> {
        self.parameters.iter().find(|p| p.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainModel {
    pub name: String,
    pub hierarchy: TypeHierarchy,
    pub predicates: Vec<PredicateDecl>,
    pub actions: Vec<ActionSchema>,
}

impl DomainModel {
    /// First declaration with the given name (polymorphism is not allowed;
    /// duplicates are a checker error and lookups use the first).
    pub fn find_predicate(&self, name: &str) -> Option<&PredicateDecl> {
        self.predicates.iter().find(|p| p.name == name)
    }

    pub fn arity_of(&self, predicate: &str) -> Result<usize, ModelError> {
        self.find_predicate(predicate)
            .map(PredicateDecl::arity)
            .ok_or_else(|| ModelError::UndeclaredPredicate(predicate.to_string()))
    }

    pub fn find_action(&self, name: &str) -> Option<&ActionSchema> {
        self.actions.iter().find(|a| a.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectDecl {
    pub name: String,
    pub declared_type: TypeName,
}

impl ObjectDecl {
    pub fn new(name: impl Into<String>, ty: impl Into<String>) -> Self {
        ObjectDecl {
            name: name.into(),
            declared_type: TypeName::new(ty.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemModel {
    pub name: String,
    pub objects: Vec<ObjectDecl>,
    pub init: Vec<Literal>,
    pub goal: Vec<Literal>,
}

impl ProblemModel {
    /// Initial-state literals must be non-negated (closed world).
    pub fn new(
        name: impl Into<String>,
        objects: Vec<ObjectDecl>,
        init: Vec<Literal>,
        goal: Vec<Literal>,
    ) -> Result<Self, ModelError> {
        if let Some(lit) = init.iter().find(|l| l.negated) {
            return Err(ModelError::NegatedInit(lit.atom().to_string()));
        }
        Ok(ProblemModel {
            name: name.into(),
            objects,
            init,
            goal,
        })
    }

    /// First declaration with the given object name.
    pub fn find_object(&self, name: &str) -> Option<&ObjectDecl> {
        self.objects.iter().find(|o| o.name == name)
    }
}

/// The full domain-plus-problem model: the unit flowing through the pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelBundle {
    pub domain: DomainModel,
    pub problem: ProblemModel,
}
