//! The JSON model markup: a single self-contained document holding domain and
//! problem, with function-signature strings for predicates/actions and call
//! expression strings for literals.
//!
//! The parser only rejects grammar and structure violations. Semantically
//! broken models (undeclared predicates, wrong arity, lower-case types, ...)
//! parse fine and are diagnosed by the consistency checker, which is the one
//! source of truth for those error classes.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{Map, Value};

use crate::model::{
    ActionSchema, DomainModel, Literal, ModelBundle, ObjectDecl, Parameter, PredicateDecl,
    ProblemModel, TypeHierarchy, TypeName,
};

/// Shape of the model document, as handed to the markup-generation prompt.
pub const DOCUMENT_GRAMMAR: &str = r#"{
  "domain": "<domain name>",
  "problem": "<problem name>",
  "types": {"TYPE_NAME": "PARENT_TYPE" or null, ...},
  "predicates": ["predicate_name(param: TYPE, ...)", ...],
  "actions": [
    {
      "signature": "action_name(param: TYPE, ...)",
      "preconditions": ["predicate_name(param, ...)", "not predicate_name(param, ...)", ...],
      "effects": ["predicate_name(param, ...)", "not predicate_name(param, ...)", ...]
    },
    ...
  ],
  "objects": {"object_name": "TYPE", ...},
  "init": ["predicate_name(object, ...)", ...],
  "goal": ["predicate_name(object, ...)", ...]
}"#;

/// One parse diagnostic. `path` is a JSON-pointer-like location into the
/// document ("" for document-level problems).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkupError {
    pub path: String,
    pub message: String,
}

impl MarkupError {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        MarkupError {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for MarkupError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

// ---------------------------------------------------------------------------
// Signature / literal grammar
// ---------------------------------------------------------------------------

struct Scanner<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        Scanner { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_char() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_char()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), String> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(match self.peek() {
                Some(got) => format!("expected '{c}' but found '{got}' at offset {}", self.pos),
                None => format!("expected '{c}' but input ended"),
            })
        }
    }

    fn ident(&mut self) -> Result<String, String> {
        self.skip_ws();
        let start = self.pos;
        match self.peek_char() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => self.pos += c.len_utf8(),
            Some(c) => return Err(format!("expected identifier but found '{c}' at offset {start}")),
            None => return Err("expected identifier but input ended".to_string()),
        }
        while let Some(c) = self.peek_char() {
            if c.is_ascii_alphanumeric() || c == '_' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        Ok(self.src[start..self.pos].to_string())
    }

    fn finish(&mut self) -> Result<(), String> {
        self.skip_ws();
        if self.pos == self.src.len() {
            Ok(())
        } else {
            Err(format!(
                "unexpected trailing input '{}' at offset {}",
                &self.src[self.pos..],
                self.pos
            ))
        }
    }
}

/// Parses `name(param: TYPE, untyped_param, ...)`. A parameter without a
/// `: TYPE` annotation comes back with `declared_type = None`.
pub fn parse_signature(s: &str) -> Result<(String, Vec<Parameter>), MarkupError> {
    parse_signature_inner(s).map_err(|m| MarkupError::new("", m))
}

fn parse_signature_inner(s: &str) -> Result<(String, Vec<Parameter>), String> {
    let mut sc = Scanner::new(s);
    let name = sc.ident()?;
    sc.expect('(')?;
    let mut params = Vec::new();
    if sc.peek() != Some(')') {
        loop {
            let pname = sc.ident()?;
            let declared_type = if sc.eat(':') {
                Some(TypeName::new(sc.ident()?))
            } else {
                None
            };
            params.push(Parameter {
                name: pname,
                declared_type,
            });
            if !sc.eat(',') {
                break;
            }
        }
    }
    sc.expect(')')?;
    sc.finish()?;
    Ok((name, params))
}

/// Parses `name(a, b)` or `not name(a, b)`; `name()` is allowed.
pub fn parse_literal(s: &str) -> Result<Literal, MarkupError> {
    parse_literal_inner(s).map_err(|m| MarkupError::new("", m))
}

fn parse_literal_inner(s: &str) -> Result<Literal, String> {
    let mut sc = Scanner::new(s);
    let first = sc.ident()?;
    let (negated, predicate) = if first == "not" && sc.peek() != Some('(') {
        (true, sc.ident()?)
    } else {
        (false, first)
    };
    sc.expect('(')?;
    let mut args = Vec::new();
    if sc.peek() != Some(')') {
        loop {
            args.push(sc.ident()?);
            if !sc.eat(',') {
                break;
            }
        }
    }
    sc.expect(')')?;
    sc.finish()?;
    Ok(Literal {
        predicate,
        args,
        negated,
    })
}

// ---------------------------------------------------------------------------
// Document parsing
// ---------------------------------------------------------------------------

const REQUIRED_KEYS: [&str; 8] = [
    "domain",
    "problem",
    "types",
    "predicates",
    "actions",
    "objects",
    "init",
    "goal",
];

struct DocParser {
    errors: Vec<MarkupError>,
}

impl DocParser {
    fn err(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.errors.push(MarkupError::new(path, message));
    }

    fn str_field(&mut self, root: &Map<String, Value>, key: &str) -> Option<String> {
        match root.get(key) {
            Some(Value::String(s)) => Some(s.clone()),
            Some(_) => {
                self.err(format!("/{key}"), format!("\"{key}\" must be a string"));
                None
            }
            None => None, // missing-key error already recorded
        }
    }

    fn types(&mut self, root: &Map<String, Value>) -> Option<TypeHierarchy> {
        let map = match root.get("types") {
            Some(Value::Object(map)) => map,
            Some(_) => {
                self.err("/types", "\"types\" must be an object mapping type names to a parent type or null");
                return None;
            }
            None => return None,
        };
        let mut entries = BTreeMap::new();
        let mut broken = false;
        for (name, parent) in map {
            let parent = match parent {
                Value::Null => None,
                Value::String(p) => Some(TypeName::new(p.clone())),
                _ => {
                    self.err(
                        format!("/types/{name}"),
                        "parent must be a type name or null",
                    );
                    broken = true;
                    continue;
                }
            };
            entries.insert(TypeName::new(name.clone()), parent);
        }
        if broken {
            return None;
        }
        match TypeHierarchy::new(entries) {
            Ok(h) => Some(h),
            Err(e) => {
                self.err("/types", e.to_string());
                None
            }
        }
    }

    fn predicates(&mut self, root: &Map<String, Value>) -> Option<Vec<PredicateDecl>> {
        let arr = match root.get("predicates") {
            Some(Value::Array(arr)) => arr,
            Some(_) => {
                self.err("/predicates", "\"predicates\" must be an array of signature strings");
                return None;
            }
            None => return None,
        };
        let mut decls = Vec::new();
        let mut broken = false;
        for (i, item) in arr.iter().enumerate() {
            let path = format!("/predicates/{i}");
            let Some(s) = item.as_str() else {
                self.err(path, "predicate entry must be a signature string");
                broken = true;
                continue;
            };
            match parse_signature_inner(s) {
                Ok((name, params)) => match PredicateDecl::new(name, params) {
                    Ok(d) => decls.push(d),
                    Err(e) => {
                        self.err(path, e.to_string());
                        broken = true;
                    }
                },
                Err(m) => {
                    self.err(path, m);
                    broken = true;
                }
            }
        }
        if broken {
            None
        } else {
            Some(decls)
        }
    }

    fn literal_list(&mut self, value: &Value, path: &str) -> Option<Vec<Literal>> {
        let arr = match value {
            Value::Array(arr) => arr,
            _ => {
                self.err(path, "must be an array of literal strings");
                return None;
            }
        };
        let mut lits = Vec::new();
        let mut broken = false;
        for (i, item) in arr.iter().enumerate() {
            let lit_path = format!("{path}/{i}");
            let Some(s) = item.as_str() else {
                self.err(lit_path, "literal entry must be a string");
                broken = true;
                continue;
            };
            match parse_literal_inner(s) {
                Ok(lit) => lits.push(lit),
                Err(m) => {
                    self.err(lit_path, m);
                    broken = true;
                }
            }
        }
        if broken {
            None
        } else {
            Some(lits)
        }
    }

    fn actions(&mut self, root: &Map<String, Value>) -> Option<Vec<ActionSchema>> {
        let arr = match root.get("actions") {
            Some(Value::Array(arr)) => arr,
            Some(_) => {
                self.err("/actions", "\"actions\" must be an array of action objects");
                return None;
            }
            None => return None,
        };
        let mut actions = Vec::new();
        let mut broken = false;
        for (i, item) in arr.iter().enumerate() {
            let path = format!("/actions/{i}");
            let Some(obj) = item.as_object() else {
                self.err(path, "action entry must be an object");
                broken = true;
                continue;
            };
            let signature = match obj.get("signature") {
                Some(Value::String(s)) => match parse_signature_inner(s) {
                    Ok(sig) => Some(sig),
                    Err(m) => {
                        self.err(format!("{path}/signature"), m);
                        None
                    }
                },
                _ => {
                    self.err(format!("{path}/signature"), "missing \"signature\" string");
                    None
                }
            };
            let pre = match obj.get("preconditions") {
                Some(v) => self.literal_list(v, &format!("{path}/preconditions")),
                None => {
                    self.err(format!("{path}/preconditions"), "missing \"preconditions\" array");
                    None
                }
            };
            let eff = match obj.get("effects") {
                Some(v) => self.literal_list(v, &format!("{path}/effects")),
                None => {
                    self.err(format!("{path}/effects"), "missing \"effects\" array");
                    None
                }
            };
            match (signature, pre, eff) {
                (Some((name, params)), Some(pre), Some(eff)) => {
                    match ActionSchema::new(name, params, pre, eff) {
                        Ok(a) => actions.push(a),
                        Err(e) => {
                            self.err(format!("{path}/effects"), e.to_string());
                            broken = true;
                        }
                    }
                }
                _ => broken = true,
            }
        }
        if broken {
            None
        } else {
            Some(actions)
        }
    }

    fn objects(&mut self, root: &Map<String, Value>) -> Option<Vec<ObjectDecl>> {
        let map = match root.get("objects") {
            Some(Value::Object(map)) => map,
            Some(_) => {
                self.err("/objects", "\"objects\" must be an object mapping object names to types");
                return None;
            }
            None => return None,
        };
        let mut objects = Vec::new();
        let mut broken = false;
        for (name, ty) in map {
            match ty {
                Value::String(t) => objects.push(ObjectDecl::new(name.clone(), t.clone())),
                _ => {
                    self.err(format!("/objects/{name}"), "object type must be a string");
                    broken = true;
                }
            }
        }
        if broken {
            None
        } else {
            Some(objects)
        }
    }
}

/// Parses a model document. On failure returns at least one error; a bundle
/// and errors are never produced together. Duplicate keys inside `types` /
/// `objects` keep the last occurrence, by design.
pub fn parse_model(text: &str) -> Result<ModelBundle, Vec<MarkupError>> {
    let value: Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) => return Err(vec![MarkupError::new("", format!("invalid JSON: {e}"))]),
    };
    let Some(root) = value.as_object() else {
        return Err(vec![MarkupError::new("", "document must be a JSON object")]);
    };

    let mut p = DocParser { errors: Vec::new() };
    for key in REQUIRED_KEYS {
        if !root.contains_key(key) {
            p.err(format!("/{key}"), format!("missing required key \"{key}\""));
        }
    }

    let domain_name = p.str_field(root, "domain");
    let problem_name = p.str_field(root, "problem");
    let hierarchy = p.types(root);
    let predicates = p.predicates(root);
    let actions = p.actions(root);
    let objects = p.objects(root);
    let init = root.get("init").and_then(|v| {
        let lits = p.literal_list(v, "/init")?;
        let mut ok = true;
        for (i, lit) in lits.iter().enumerate() {
            if lit.negated {
                p.err(
                    format!("/init/{i}"),
                    format!("initial-state literal '{lit}' must not be negated"),
                );
                ok = false;
            }
        }
        ok.then_some(lits)
    });
    let goal = root.get("goal").and_then(|v| p.literal_list(v, "/goal"));

    if !p.errors.is_empty() {
        return Err(p.errors);
    }
    // All fields parsed cleanly; the unwraps below can no longer fail.
    let domain = DomainModel {
        name: domain_name.unwrap(),
        hierarchy: hierarchy.unwrap(),
        predicates: predicates.unwrap(),
        actions: actions.unwrap(),
    };
    let problem = match ProblemModel::new(
        problem_name.unwrap(),
        objects.unwrap(),
        init.unwrap(),
        goal.unwrap(),
    ) {
        Ok(p) => p,
        Err(e) => return Err(vec![MarkupError::new("/init", e.to_string())]),
    };
    Ok(ModelBundle { domain, problem })
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

/// Renders a signature string, e.g. `pick(ball: BALL, room: ROOM)`.
pub fn format_signature(name: &str, parameters: &[Parameter]) -> String {
    let params: Vec<String> = parameters
        .iter()
        .map(|p| match &p.declared_type {
            Some(t) => format!("{}: {}", p.name, t),
            None => p.name.clone(),
        })
        .collect();
    format!("{}({})", name, params.join(", "))
}

/// Serializes a bundle back to document text. The serializer is faithful: it
/// never repairs content, and `parse_model(serialize_model(m)) == m` for any
/// bundle constructible from the model-type invariants.
pub fn serialize_model(bundle: &ModelBundle) -> String {
    let mut root = Map::new();
    root.insert("domain".into(), Value::String(bundle.domain.name.clone()));
    root.insert("problem".into(), Value::String(bundle.problem.name.clone()));

    let mut types = Map::new();
    for (name, parent) in bundle.domain.hierarchy.entries() {
        let parent = match parent {
            Some(p) => Value::String(p.as_str().to_string()),
            None => Value::Null,
        };
        types.insert(name.as_str().to_string(), parent);
    }
    root.insert("types".into(), Value::Object(types));

    let predicates: Vec<Value> = bundle
        .domain
        .predicates
        .iter()
        .map(|d| Value::String(format_signature(&d.name, &d.parameters)))
        .collect();
    root.insert("predicates".into(), Value::Array(predicates));

    let actions: Vec<Value> = bundle
        .domain
        .actions
        .iter()
        .map(|a| {
            let mut obj = Map::new();
            obj.insert(
                "signature".into(),
                Value::String(format_signature(&a.name, &a.parameters)),
            );
            obj.insert("preconditions".into(), literal_strings(&a.preconditions));
            obj.insert("effects".into(), literal_strings(&a.effects));
            Value::Object(obj)
        })
        .collect();
    root.insert("actions".into(), Value::Array(actions));

    let mut objects = Map::new();
    for o in &bundle.problem.objects {
        objects.insert(
            o.name.clone(),
            Value::String(o.declared_type.as_str().to_string()),
        );
    }
    root.insert("objects".into(), Value::Object(objects));
    root.insert("init".into(), literal_strings(&bundle.problem.init));
    root.insert("goal".into(), literal_strings(&bundle.problem.goal));

    serde_json::to_string_pretty(&Value::Object(root)).expect("JSON value is always serializable")
}

fn literal_strings(literals: &[Literal]) -> Value {
    Value::Array(
        literals
            .iter()
            .map(|l| Value::String(l.to_string()))
            .collect(),
    )
}
