//! Plan search and validation.
//!
//! The built-in planner is a plain breadth-first search over ground states:
//! deterministic and length-minimal, which keeps tests exact. Production-size
//! instances go through [`external`] instead, mirroring a conventional
//! planner setup.

pub mod external;

pub use external::{invoke_external, parse_plan_text, ExternalPlannerConfig, InvocationError};

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::time::{Duration, Instant};

use crate::model::{Literal, ModelBundle};
use crate::reachability::{ground, GroundAction};

/// One plan step: a schema name with ground arguments in signature order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanStep {
    pub schema: String,
    pub args: Vec<String>,
}

impl PlanStep {
    pub fn new(schema: &str, args: &[&str]) -> Self {
        PlanStep {
            schema: schema.to_string(),
            args: args.iter().map(|a| a.to_string()).collect(),
        }
    }
}

impl fmt::Display for PlanStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.args.is_empty() {
            write!(f, "({})", self.schema)
        } else {
            write!(f, "({} {})", self.schema, self.args.join(" "))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanSource {
    Internal,
    External,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    pub steps: Vec<PlanStep>,
    pub source: PlanSource,
}

impl Plan {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Sequential-plan text: one `(name arg..)` line per step.
    pub fn to_ipc_string(&self) -> String {
        let mut out = String::new();
        for step in &self.steps {
            out.push_str(&step.to_string());
            out.push('\n');
        }
        out
    }
}

/// Resource budget for the internal search. Both bounds must be positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_expanded_states: usize,
    pub wall_clock_budget: Duration,
}

impl SearchLimits {
    pub fn new(max_expanded_states: usize, wall_clock_budget: Duration) -> Option<Self> {
        if max_expanded_states == 0 || wall_clock_budget.is_zero() {
            return None;
        }
        Some(SearchLimits {
            max_expanded_states,
            wall_clock_budget,
        })
    }
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_expanded_states: 1_000_000,
            wall_clock_budget: Duration::from_secs(30),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    Plan(Plan),
    Unsolvable,
    ResourcesExhausted,
}

type State = BTreeSet<Literal>;

fn applicable(action: &GroundAction, state: &State) -> bool {
    action.preconditions.iter().all(|p| {
        if p.negated {
            !state.contains(&p.atom())
        } else {
            state.contains(p)
        }
    })
}

/// Delete before add, standard STRIPS step semantics.
fn apply(action: &GroundAction, state: &State) -> State {
    let mut next = state.clone();
    for e in &action.effects {
        if e.negated {
            next.remove(&e.atom());
        }
    }
    for e in &action.effects {
        if !e.negated {
            next.insert(e.clone());
        }
    }
    next
}

fn goal_satisfied(goal: &[Literal], state: &State) -> bool {
    goal.iter().all(|g| {
        if g.negated {
            !state.contains(&g.atom())
        } else {
            state.contains(g)
        }
    })
}

/// Uniform-cost breadth-first search from the initial state. Returns a
/// shortest plan; `Unsolvable` only after the whole reachable state space is
/// exhausted, `ResourcesExhausted` when a limit is hit first.
pub fn solve_internal(bundle: &ModelBundle, limits: &SearchLimits) -> SolveResult {
    let start = Instant::now();
    let grounds = ground(bundle);
    let init: State = bundle.problem.init.iter().map(Literal::atom).collect();
    let goal = &bundle.problem.goal;

    if goal_satisfied(goal, &init) {
        return SolveResult::Plan(Plan {
            steps: vec![],
            source: PlanSource::Internal,
        });
    }

    // parent node index and the ground action that produced each node
    let mut nodes: Vec<(usize, usize)> = vec![(usize::MAX, usize::MAX)];
    let mut states: Vec<State> = vec![init.clone()];
    let mut visited: HashMap<State, ()> = HashMap::new();
    visited.insert(init, ());
    let mut queue: VecDeque<usize> = VecDeque::new();
    queue.push_back(0);
    let mut expanded = 0usize;

    while let Some(node) = queue.pop_front() {
        if expanded >= limits.max_expanded_states || start.elapsed() > limits.wall_clock_budget {
            return SolveResult::ResourcesExhausted;
        }
        expanded += 1;
        let state = states[node].clone();
        for (gi, ga) in grounds.iter().enumerate() {
            if !applicable(ga, &state) {
                continue;
            }
            let next = apply(ga, &state);
            if visited.contains_key(&next) {
                continue;
            }
            let child = nodes.len();
            nodes.push((node, gi));
            states.push(next.clone());
            if goal_satisfied(goal, &next) {
                let mut steps = Vec::new();
                let mut cursor = child;
                while cursor != 0 {
                    let (parent, via) = nodes[cursor];
                    let ga = &grounds[via];
                    steps.push(PlanStep {
                        schema: ga.schema.clone(),
                        args: ga.args.clone(),
                    });
                    cursor = parent;
                }
                steps.reverse();
                return SolveResult::Plan(Plan {
                    steps,
                    source: PlanSource::Internal,
                });
            }
            visited.insert(next, ());
            queue.push_back(child);
        }
    }
    SolveResult::Unsolvable
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvalidStep {
    UnknownAction(String),
    UnknownObject(String),
    ArityMismatch { expected: usize, got: usize },
    UnmetPrecondition(Literal),
    GoalUnsatisfied(Literal),
}

impl fmt::Display for InvalidStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvalidStep::UnknownAction(name) => write!(f, "unknown action '{name}'"),
            InvalidStep::UnknownObject(name) => write!(f, "unknown object '{name}'"),
            InvalidStep::ArityMismatch { expected, got } => {
                write!(f, "expected {expected} arguments, got {got}")
            }
            InvalidStep::UnmetPrecondition(lit) => write!(f, "unmet precondition '{lit}'"),
            InvalidStep::GoalUnsatisfied(lit) => write!(f, "goal literal '{lit}' unsatisfied"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanValidity {
    Valid,
    /// `step_index == plan length` marks a goal failure after the last step.
    Invalid {
        step_index: usize,
        reason: InvalidStep,
    },
}

/// Simulates the plan from the initial state: every step's preconditions must
/// hold when it executes and the final state must satisfy the goal.
pub fn validate_plan(bundle: &ModelBundle, plan: &Plan) -> PlanValidity {
    let mut state: State = bundle.problem.init.iter().map(Literal::atom).collect();
    for (index, step) in plan.steps.iter().enumerate() {
        let invalid = |reason| PlanValidity::Invalid {
            step_index: index,
            reason,
        };
        let Some(schema) = bundle.domain.find_action(&step.schema) else {
            return invalid(InvalidStep::UnknownAction(step.schema.clone()));
        };
        if schema.parameters.len() != step.args.len() {
            return invalid(InvalidStep::ArityMismatch {
                expected: schema.parameters.len(),
                got: step.args.len(),
            });
        }
        for arg in &step.args {
            if bundle.problem.find_object(arg).is_none() {
                return invalid(InvalidStep::UnknownObject(arg.clone()));
            }
        }
        let binding: std::collections::BTreeMap<String, String> = schema
            .parameters
            .iter()
            .zip(&step.args)
            .map(|(p, a)| (p.name.clone(), a.clone()))
            .collect();
        let mut preconditions = Vec::new();
        for lit in &schema.preconditions {
            match lit.substitute(&binding) {
                Ok(ground) => preconditions.push(ground),
                Err(_) => return invalid(InvalidStep::UnmetPrecondition(lit.clone())),
            }
        }
        for p in &preconditions {
            let holds = if p.negated {
                !state.contains(&p.atom())
            } else {
                state.contains(p)
            };
            if !holds {
                return invalid(InvalidStep::UnmetPrecondition(p.clone()));
            }
        }
        let mut effects = Vec::new();
        for lit in &schema.effects {
            match lit.substitute(&binding) {
                Ok(ground) => effects.push(ground),
                Err(_) => return invalid(InvalidStep::UnmetPrecondition(lit.clone())),
            }
        }
        for e in &effects {
            if e.negated {
                state.remove(&e.atom());
            }
        }
        for e in &effects {
            if !e.negated {
                state.insert(e.clone());
            }
        }
    }
    for g in &bundle.problem.goal {
        let holds = if g.negated {
            !state.contains(&g.atom())
        } else {
            state.contains(g)
        };
        if !holds {
            return PlanValidity::Invalid {
                step_index: plan.steps.len(),
                reason: InvalidStep::GoalUnsatisfied(g.clone()),
            };
        }
    }
    PlanValidity::Valid
}
