//! Grounding and delete-relaxed reachability analysis.
//!
//! Works on bundles that already pass the consistency checker. Grounding is
//! exhaustive; instances stay desk-scale (a few thousand ground actions), so
//! clarity wins over pruning here. The fixpoint ignores delete effects, which
//! makes every answer an over-approximation: a goal reported unreachable is
//! certainly unreachable, a reachable verdict still needs a planner.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use crate::model::{Literal, ModelBundle};
use crate::planner::{validate_plan, Plan, PlanValidity};

/// One type-respecting instantiation of an action schema. `args` follow the
/// signature's parameter order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundAction {
    pub schema: String,
    pub args: Vec<String>,
    pub preconditions: Vec<Literal>,
    pub effects: Vec<Literal>,
}

impl GroundAction {
    /// Sequential-plan rendering: `(pick ball1 room_a grip_left)`.
    pub fn id_string(&self) -> String {
        if self.args.is_empty() {
            format!("({})", self.schema)
        } else {
            format!("({} {})", self.schema, self.args.join(" "))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SupportFailureReason {
    MissingFromInit,
    TypeMismatch,
}

impl SupportFailureReason {
    pub fn name(self) -> &'static str {
        match self {
            SupportFailureReason::MissingFromInit => "missing-from-init",
            SupportFailureReason::TypeMismatch => "type-mismatch",
        }
    }
}

/// A static precondition with no usable supporting atom in the initial state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportFailure {
    pub action: String,
    pub precondition: Literal,
    pub reason: SupportFailureReason,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachabilityReport {
    /// Ground atoms attainable under delete relaxation (including init).
    pub reachable_facts: BTreeSet<Literal>,
    pub reachable_schemas: BTreeSet<String>,
    /// Unreachable schemas with the positive preconditions that stayed
    /// unsatisfied across every grounding (the strongest common explanation).
    pub unreachable_schemas: BTreeMap<String, Vec<Literal>>,
    pub static_predicates: BTreeSet<String>,
    pub unsupported_static: Vec<SupportFailure>,
    pub goal_reachable: bool,
    /// Filled only when a plan was supplied for coverage analysis.
    pub uninvolved_actions: Option<BTreeSet<String>>,
}

impl ReachabilityReport {
    pub fn to_json(&self) -> Value {
        let facts: Vec<String> = self.reachable_facts.iter().map(|l| l.to_string()).collect();
        let unreachable: Value = Value::Object(
            self.unreachable_schemas
                .iter()
                .map(|(name, blamed)| {
                    let lits: Vec<String> = blamed.iter().map(|l| l.to_string()).collect();
                    (name.clone(), json!(lits))
                })
                .collect(),
        );
        let unsupported: Vec<Value> = self
            .unsupported_static
            .iter()
            .map(|f| {
                json!({
                    "action": f.action,
                    "precondition": f.precondition.to_string(),
                    "reason": f.reason.name(),
                })
            })
            .collect();
        json!({
            "goal_reachable": self.goal_reachable,
            "reachable_schemas": self.reachable_schemas,
            "unreachable_schemas": unreachable,
            "static_predicates": self.static_predicates,
            "unsupported_static": unsupported,
            "reachable_facts": facts,
            "uninvolved_actions": self.uninvolved_actions,
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("valid JSON value")
    }
}

/// All type-respecting instantiations of every schema, in deterministic
/// order: schema order, then lexicographic argument tuples.
pub fn ground(bundle: &ModelBundle) -> Vec<GroundAction> {
    let hierarchy = &bundle.domain.hierarchy;

    // First declaration wins for duplicate object names; candidates per type
    // are sorted so tuples enumerate lexicographically.
    let mut seen = BTreeSet::new();
    let mut objects = Vec::new();
    for o in &bundle.problem.objects {
        if seen.insert(o.name.as_str()) {
            objects.push(o);
        }
    }
    objects.sort_by(|a, b| a.name.cmp(&b.name));

    let mut out = Vec::new();
    for action in &bundle.domain.actions {
        let candidates: Vec<Vec<&str>> = action
            .parameters
            .iter()
            .map(|p| match &p.declared_type {
                Some(ty) if hierarchy.contains(ty) => objects
                    .iter()
                    .filter(|o| {
                        hierarchy.contains(&o.declared_type)
                            && hierarchy.is_subtype(&o.declared_type, ty).unwrap_or(false)
                    })
                    .map(|o| o.name.as_str())
                    .collect(),
                _ => Vec::new(),
            })
            .collect();
        if candidates.iter().any(Vec::is_empty) && !action.parameters.is_empty() {
            continue;
        }

        let mut tuple: Vec<usize> = vec![0; candidates.len()];
        loop {
            let args: Vec<String> = tuple
                .iter()
                .enumerate()
                .map(|(slot, &i)| candidates[slot][i].to_string())
                .collect();
            let binding: BTreeMap<String, String> = action
                .parameters
                .iter()
                .zip(&args)
                .map(|(p, a)| (p.name.clone(), a.clone()))
                .collect();
            // Arguments that are not signature parameters (a checker finding)
            // pass through unchanged, as if they were constants.
            let substitute = |lits: &[Literal]| -> Vec<Literal> {
                lits.iter()
                    .map(|l| {
                        l.substitute(&binding).unwrap_or_else(|_| {
                            let args = l
                                .args
                                .iter()
                                .map(|a| binding.get(a).cloned().unwrap_or_else(|| a.clone()))
                                .collect();
                            Literal {
                                predicate: l.predicate.clone(),
                                args,
                                negated: l.negated,
                            }
                        })
                    })
                    .collect()
            };
            out.push(GroundAction {
                schema: action.name.clone(),
                args,
                preconditions: substitute(&action.preconditions),
                effects: substitute(&action.effects),
            });

            // Advance the odometer; most-significant slot first keeps tuples
            // in lexicographic order.
            let mut slot = tuple.len();
            loop {
                if slot == 0 {
                    break;
                }
                slot -= 1;
                tuple[slot] += 1;
                if tuple[slot] < candidates[slot].len() {
                    break;
                }
                tuple[slot] = 0;
                if slot == 0 {
                    break;
                }
            }
            if tuple.iter().all(|&i| i == 0) {
                break;
            }
        }
    }
    out
}

/// Predicates that appear in no action's effects (positively or negatively):
/// their truth is fixed by the initial state.
pub fn static_predicates(domain: &crate::model::DomainModel) -> BTreeSet<String> {
    let mut out: BTreeSet<String> = domain.predicates.iter().map(|d| d.name.clone()).collect();
    for action in &domain.actions {
        for effect in &action.effects {
            out.remove(&effect.predicate);
        }
    }
    out
}

/// For every positive action precondition over a static predicate, verifies
/// that at least one init atom could support it: same predicate, and argument
/// types compatible with the action's parameter types.
pub fn support_check(bundle: &ModelBundle) -> Vec<SupportFailure> {
    let statics = static_predicates(&bundle.domain);
    let hierarchy = &bundle.domain.hierarchy;
    let mut failures = Vec::new();
    for action in &bundle.domain.actions {
        for precondition in &action.preconditions {
            if precondition.negated || !statics.contains(&precondition.predicate) {
                continue;
            }
            let atoms: Vec<&Literal> = bundle
                .problem
                .init
                .iter()
                .filter(|l| l.predicate == precondition.predicate)
                .collect();
            if atoms.is_empty() {
                failures.push(SupportFailure {
                    action: action.name.clone(),
                    precondition: precondition.clone(),
                    reason: SupportFailureReason::MissingFromInit,
                });
                continue;
            }
            let supported = atoms.iter().any(|atom| {
                atom.args.len() == precondition.args.len()
                    && atom.args.iter().zip(&precondition.args).all(|(obj, param)| {
                        let obj_type = bundle.problem.find_object(obj).map(|o| &o.declared_type);
                        let param_type = action
                            .parameter(param)
                            .and_then(|p| p.declared_type.as_ref());
                        match (obj_type, param_type) {
                            (Some(ot), Some(pt))
                                if hierarchy.contains(ot) && hierarchy.contains(pt) =>
                            {
                                hierarchy.is_subtype(ot, pt).unwrap_or(false)
                            }
                            // Unresolvable sides don't disqualify an atom.
                            _ => true,
                        }
                    })
            });
            if !supported {
                failures.push(SupportFailure {
                    action: action.name.clone(),
                    precondition: precondition.clone(),
                    reason: SupportFailureReason::TypeMismatch,
                });
            }
        }
    }
    failures
}

/// Least fixpoint of delete-free action application from the initial state.
///
/// A ground action applies when its positive preconditions are all reachable
/// and none of its negated preconditions contradicts a static init atom
/// (non-static negations are optimistically ignored). Applying adds positive
/// effects only.
pub fn relaxed_fixpoint(bundle: &ModelBundle) -> ReachabilityReport {
    let grounds = ground(bundle);
    let statics = static_predicates(&bundle.domain);
    let init: BTreeSet<Literal> = bundle.problem.init.iter().map(Literal::atom).collect();
    let mut facts = init.clone();

    let mut applied = vec![false; grounds.len()];
    let atom_bound = possible_atom_count(bundle);
    let mut passes = 0usize;
    loop {
        let mut grew = false;
        for (i, ga) in grounds.iter().enumerate() {
            if applied[i] {
                continue;
            }
            let applicable = ga.preconditions.iter().all(|p| {
                if p.negated {
                    !(statics.contains(&p.predicate) && init.contains(&p.atom()))
                } else {
                    facts.contains(p)
                }
            });
            if applicable {
                applied[i] = true;
                grew = true;
                for e in ga.effects.iter().filter(|e| !e.negated) {
                    facts.insert(e.clone());
                }
            }
        }
        if !grew {
            break;
        }
        passes += 1;
        debug_assert!(
            passes <= atom_bound + 1,
            "fixpoint ran {passes} passes for {atom_bound} possible atoms"
        );
    }

    let mut reachable_schemas = BTreeSet::new();
    for (i, ga) in grounds.iter().enumerate() {
        if applied[i] {
            reachable_schemas.insert(ga.schema.clone());
        }
    }

    let mut unreachable_schemas = BTreeMap::new();
    for action in &bundle.domain.actions {
        if reachable_schemas.contains(&action.name) {
            continue;
        }
        // Intersect the unsatisfied positive preconditions over every
        // grounding; with no groundings, the whole positive set stands.
        let positive_indices: Vec<usize> = action
            .preconditions
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.negated)
            .map(|(i, _)| i)
            .collect();
        let mut common: Option<BTreeSet<usize>> = None;
        for ga in grounds.iter().filter(|g| g.schema == action.name) {
            let unsatisfied: BTreeSet<usize> = positive_indices
                .iter()
                .copied()
                .filter(|&i| !facts.contains(&ga.preconditions[i]))
                .collect();
            common = Some(match common {
                None => unsatisfied,
                Some(prev) => prev.intersection(&unsatisfied).copied().collect(),
            });
        }
        let blamed_indices = common.unwrap_or_else(|| positive_indices.iter().copied().collect());
        let blamed: Vec<Literal> = blamed_indices
            .into_iter()
            .map(|i| action.preconditions[i].clone())
            .collect();
        unreachable_schemas.insert(action.name.clone(), blamed);
    }

    let goal_reachable = bundle
        .problem
        .goal
        .iter()
        .filter(|g| !g.negated)
        .all(|g| facts.contains(&g.atom()));

    ReachabilityReport {
        reachable_facts: facts,
        reachable_schemas,
        unreachable_schemas,
        static_predicates: statics,
        unsupported_static: support_check(bundle),
        goal_reachable,
        uninvolved_actions: None,
    }
}

/// Upper bound on the number of distinct type-respecting ground atoms.
fn possible_atom_count(bundle: &ModelBundle) -> usize {
    let hierarchy = &bundle.domain.hierarchy;
    bundle
        .domain
        .predicates
        .iter()
        .map(|decl| {
            decl.parameters
                .iter()
                .map(|p| match &p.declared_type {
                    Some(ty) if hierarchy.contains(ty) => bundle
                        .problem
                        .objects
                        .iter()
                        .filter(|o| {
                            hierarchy.contains(&o.declared_type)
                                && hierarchy.is_subtype(&o.declared_type, ty).unwrap_or(false)
                        })
                        .count(),
                    _ => bundle.problem.objects.len(),
                })
                .product::<usize>()
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvalidPlan {
    pub step_index: usize,
    pub detail: String,
}

/// Fraction of declared schemas used by the plan, plus the unused ones.
/// The plan must validate against the bundle.
pub fn action_coverage(
    bundle: &ModelBundle,
    plan: &Plan,
) -> Result<(f64, BTreeSet<String>), InvalidPlan> {
    match validate_plan(bundle, plan) {
        PlanValidity::Valid => {}
        PlanValidity::Invalid { step_index, reason } => {
            return Err(InvalidPlan {
                step_index,
                detail: reason.to_string(),
            });
        }
    }
    let declared: BTreeSet<String> = bundle
        .domain
        .actions
        .iter()
        .map(|a| a.name.clone())
        .collect();
    let used: BTreeSet<String> = plan
        .steps
        .iter()
        .map(|s| s.schema.clone())
        .filter(|s| declared.contains(s))
        .collect();
    let uninvolved: BTreeSet<String> = declared.difference(&used).cloned().collect();
    let fraction = if declared.is_empty() {
        1.0
    } else {
        used.len() as f64 / declared.len() as f64
    };
    Ok((fraction, uninvolved))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markup::parse_model;
    use crate::planner::{PlanSource, PlanStep};

    const GRIPPER: &str = include_str!("../../../../fixtures/gripper.model.json");
    const GRIPPER_NO_FREE: &str = include_str!("../../../../fixtures/gripper_no_free.model.json");
    const LOGISTICS: &str = include_str!("../../../../fixtures/logistics_mini.model.json");
    const LOGISTICS_NO_LINK: &str =
        include_str!("../../../../fixtures/logistics_mini_missing_link.model.json");
    const LOGISTICS_BAD_LINK: &str =
        include_str!("../../../../fixtures/logistics_mini_type_mismatch.model.json");

    fn bundle(text: &str) -> ModelBundle {
        parse_model(text).unwrap()
    }

    #[test]
    fn gripper_grounds_to_eight_actions() {
        let grounds = ground(&bundle(GRIPPER));
        assert_eq!(grounds.len(), 8);
        let per_schema = |name: &str| grounds.iter().filter(|g| g.schema == name).count();
        assert_eq!(per_schema("pick"), 2);
        assert_eq!(per_schema("drop"), 2);
        assert_eq!(per_schema("move"), 4); // includes self-moves
    }

    #[test]
    fn grounding_order_is_schema_then_lexicographic() {
        let grounds = ground(&bundle(GRIPPER));
        let moves: Vec<String> = grounds
            .iter()
            .filter(|g| g.schema == "move")
            .map(GroundAction::id_string)
            .collect();
        assert_eq!(
            moves,
            vec![
                "(move room_a room_a)",
                "(move room_a room_b)",
                "(move room_b room_a)",
                "(move room_b room_b)",
            ]
        );
    }

    #[test]
    fn uninhabited_parameter_type_grounds_to_nothing() {
        let mut b = bundle(GRIPPER);
        b.problem.objects.retain(|o| o.declared_type.as_str() != "GRIPPER");
        let grounds = ground(&b);
        assert!(grounds.iter().all(|g| g.schema == "move"));
    }

    #[test]
    fn no_objects_means_no_groundings() {
        let mut b = bundle(GRIPPER);
        b.problem.objects.clear();
        assert!(ground(&b).is_empty());
    }

    #[test]
    fn grounding_respects_subtypes() {
        let b = bundle(GRIPPER);
        let hierarchy = &b.domain.hierarchy;
        for ga in ground(&b) {
            let schema = b.domain.find_action(&ga.schema).unwrap();
            for (param, arg) in schema.parameters.iter().zip(&ga.args) {
                let obj = b.problem.find_object(arg).unwrap();
                let ty = param.declared_type.as_ref().unwrap();
                assert!(hierarchy.is_subtype(&obj.declared_type, ty).unwrap());
            }
        }
    }

    #[test]
    fn gripper_is_fully_reachable() {
        let report = relaxed_fixpoint(&bundle(GRIPPER));
        assert!(report.goal_reachable);
        assert_eq!(report.reachable_schemas.len(), 3);
        assert!(report.unreachable_schemas.is_empty());
        assert!(report.static_predicates.is_empty());
        assert!(report.unsupported_static.is_empty());
    }

    #[test]
    fn missing_free_blames_the_pick_precondition() {
        let report = relaxed_fixpoint(&bundle(GRIPPER_NO_FREE));
        assert!(!report.goal_reachable);
        let blamed = &report.unreachable_schemas["pick"];
        assert_eq!(blamed.len(), 1);
        assert_eq!(blamed[0].to_string(), "free(gripper)");
        // drop depends on carrying, which only pick provides
        assert!(report.unreachable_schemas.contains_key("drop"));
        assert_eq!(report.reachable_schemas.len(), 1);
    }

    #[test]
    fn goal_inside_init_is_reachable_without_actions() {
        let mut b = bundle(GRIPPER);
        b.problem.goal = vec![Literal::positive(
            "at_robot",
            vec!["room_a".to_string()],
        )];
        let report = relaxed_fixpoint(&b);
        assert!(report.goal_reachable);
    }

    #[test]
    fn static_predicates_of_logistics() {
        let b = bundle(LOGISTICS);
        let statics = static_predicates(&b.domain);
        assert_eq!(statics.into_iter().collect::<Vec<_>>(), vec!["in_city"]);
    }

    #[test]
    fn zero_action_domain_makes_everything_static() {
        let mut b = bundle(GRIPPER);
        b.domain.actions.clear();
        assert_eq!(static_predicates(&b.domain).len(), 4);
    }

    #[test]
    fn missing_link_atoms_reported_missing_from_init() {
        let failures = support_check(&bundle(LOGISTICS_NO_LINK));
        assert_eq!(failures.len(), 2);
        assert!(failures.iter().all(|f| {
            f.action == "drive"
                && f.precondition.predicate == "in_city"
                && f.reason == SupportFailureReason::MissingFromInit
        }));
        let report = relaxed_fixpoint(&bundle(LOGISTICS_NO_LINK));
        assert!(!report.goal_reachable);
        assert!(report.unreachable_schemas.contains_key("drive"));
    }

    #[test]
    fn incompatible_link_types_reported_as_mismatch() {
        let failures = support_check(&bundle(LOGISTICS_BAD_LINK));
        assert_eq!(failures.len(), 1);
        assert_eq!(failures[0].action, "drive");
        assert_eq!(failures[0].precondition.to_string(), "linked(from, to)");
        assert_eq!(failures[0].reason, SupportFailureReason::TypeMismatch);
    }

    #[test]
    fn clean_support_check_on_gripper() {
        assert!(support_check(&bundle(GRIPPER)).is_empty());
    }

    #[test]
    fn fixpoint_is_monotone_in_init() {
        let b = bundle(GRIPPER_NO_FREE);
        let before = relaxed_fixpoint(&b).reachable_facts;
        let mut grown = b.clone();
        grown
            .problem
            .init
            .push(Literal::positive("free", vec!["grip_left".to_string()]));
        let after = relaxed_fixpoint(&grown).reachable_facts;
        assert!(before.is_subset(&after));
        assert!(after.len() > before.len());
    }

    #[test]
    fn blamed_preconditions_are_unreachable_under_every_binding() {
        let b = bundle(GRIPPER_NO_FREE);
        let report = relaxed_fixpoint(&b);
        for (schema, blamed) in &report.unreachable_schemas {
            for ga in ground(&b).iter().filter(|g| &g.schema == schema) {
                let action = b.domain.find_action(schema).unwrap();
                for lit in blamed {
                    let idx = action.preconditions.iter().position(|p| p == lit).unwrap();
                    assert!(!report.reachable_facts.contains(&ga.preconditions[idx]));
                }
            }
        }
    }

    #[test]
    fn coverage_full_plan() {
        let b = bundle(GRIPPER);
        let plan = Plan {
            steps: vec![
                PlanStep::new("pick", &["ball1", "room_a", "grip_left"]),
                PlanStep::new("move", &["room_a", "room_b"]),
                PlanStep::new("drop", &["ball1", "room_b", "grip_left"]),
            ],
            source: PlanSource::Internal,
        };
        let (fraction, uninvolved) = action_coverage(&b, &plan).unwrap();
        assert_eq!(fraction, 1.0);
        assert!(uninvolved.is_empty());
    }

    #[test]
    fn coverage_counts_unused_schemas() {
        let mut b = bundle(GRIPPER);
        b.domain.actions.push(
            crate::model::ActionSchema::new(
                "wave",
                vec![crate::model::Parameter::typed("gripper", "GRIPPER")],
                vec![Literal::positive("free", vec!["gripper".into()])],
                vec![Literal::positive("free", vec!["gripper".into()])],
            )
            .unwrap(),
        );
        let plan = Plan {
            steps: vec![
                PlanStep::new("pick", &["ball1", "room_a", "grip_left"]),
                PlanStep::new("move", &["room_a", "room_b"]),
                PlanStep::new("drop", &["ball1", "room_b", "grip_left"]),
            ],
            source: PlanSource::Internal,
        };
        let (fraction, uninvolved) = action_coverage(&b, &plan).unwrap();
        assert_eq!(fraction, 0.75);
        assert_eq!(uninvolved.into_iter().collect::<Vec<_>>(), vec!["wave"]);
    }

    #[test]
    fn empty_plan_with_satisfied_goal_has_zero_coverage() {
        let mut b = bundle(GRIPPER);
        b.problem.goal = vec![Literal::positive("at_robot", vec!["room_a".into()])];
        let plan = Plan {
            steps: vec![],
            source: PlanSource::Internal,
        };
        let (fraction, uninvolved) = action_coverage(&b, &plan).unwrap();
        assert_eq!(fraction, 0.0);
        assert_eq!(uninvolved.len(), 3);
    }

    #[test]
    fn invalid_plan_is_rejected_for_coverage() {
        let b = bundle(GRIPPER);
        let plan = Plan {
            steps: vec![PlanStep::new("drop", &["ball1", "room_a", "grip_left"])],
            source: PlanSource::Internal,
        };
        let err = action_coverage(&b, &plan).unwrap_err();
        assert_eq!(err.step_index, 0);
    }
}
