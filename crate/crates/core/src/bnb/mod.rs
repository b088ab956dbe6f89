//! Best-first branch and bound with three branching strategies.
//!
//! All strategies share the same engine: the open subproblem with the
//! highest Dantzig bound is selected (ties to the lowest id), integer
//! relaxations close their node and feed the incumbent, fractional ones are
//! branched. Children are evaluated as soon as they are created, and
//! `nodes_evaluated` counts every child created this way, including the
//! ones discarded because their One-fixings exceed the capacity or because
//! their bound cannot beat the incumbent.
//!
//! The strategies differ in three points:
//!
//! | strategy            | branching variable(s)          | heuristic incumbent | capacity fixing |
//! |---------------------|--------------------------------|---------------------|-----------------|
//! | Kolesar             | lowest free index              | no                  | no              |
//! | Greenberg&Hegerich  | critical (fractional) item     | no                  | no              |
//! | Cascading tree      | ones of the greedy completion  | yes                 | yes             |

mod branching;
mod frontier;

pub use branching::{
    branch_cascade, branch_gh, branch_kolesar, cascade_branches, gh_branches, kolesar_branches, Branch,
};
pub use frontier::Frontier;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::model::{Fixings, Instance, Rational, Solution};
use crate::relax::{capacity_fix, dantzig_bound, greedy_complete, RelaxedSolution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    Kolesar,
    GreenbergHegerich,
    CascadingTree,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Kolesar, Strategy::GreenbergHegerich, Strategy::CascadingTree];

    /// Command-line key: `kolesar`, `gh` or `cascade`.
    pub fn key(self) -> &'static str {
        match self {
            Strategy::Kolesar => "kolesar",
            Strategy::GreenbergHegerich => "gh",
            Strategy::CascadingTree => "cascade",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Strategy::Kolesar => "Kolesar",
            Strategy::GreenbergHegerich => "Greenberg & Hegerich",
            Strategy::CascadingTree => "Cascading Tree",
        }
    }

    /// Whether children get their unfittable free items fixed to zero.
    pub fn fixes_capacity(self) -> bool {
        self == Strategy::CascadingTree
    }

    /// Whether fractional nodes contribute a greedy incumbent.
    pub fn uses_heuristic(self) -> bool {
        self == Strategy::CascadingTree
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.display_name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "kolesar" | "k" => Ok(Strategy::Kolesar),
            "gh" | "greenberg-hegerich" | "greenberg" => Ok(Strategy::GreenbergHegerich),
            "cascade" | "cascading-tree" | "cta" => Ok(Strategy::CascadingTree),
            other => Err(Error::InvalidConfig(format!("unknown strategy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub time_limit: Duration,
    pub node_limit: Option<u64>,
}

impl Limits {
    pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(3600);

    pub fn new(time_limit: Duration, node_limit: Option<u64>) -> Result<Self> {
        if time_limit.is_zero() {
            return Err(Error::InvalidConfig("time limit must be positive".into()));
        }
        Ok(Limits { time_limit, node_limit })
    }

    pub fn with_node_limit(mut self, nodes: u64) -> Self {
        self.node_limit = Some(nodes);
        self
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            time_limit: Self::DEFAULT_TIME_LIMIT,
            node_limit: None,
        }
    }
}

/// An evaluated, feasible subproblem.
#[derive(Debug, Clone)]
pub struct Node {
    pub id: u64,
    pub fixings: Fixings,
    pub upper_bound: Rational,
    pub relaxed: RelaxedSolution,
    pub heuristic: Option<Solution>,
    pub parent_id: Option<u64>,
    pub branch_label: String,
}

/// Best feasible solution found so far; its value is the global lower bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Incumbent {
    pub solution: Solution,
    /// Node that produced the solution; `None` for the all-zeros seed.
    pub node: Option<u64>,
}

impl Incumbent {
    pub fn new(n: usize) -> Self {
        Incumbent {
            solution: Solution::empty(n),
            node: None,
        }
    }

    pub fn value(&self) -> Rational {
        self.solution.value
    }

    /// Replaces the incumbent iff `candidate` is strictly better.
    pub fn offer(&mut self, candidate: Solution, node: Option<u64>) -> bool {
        if candidate.value > self.solution.value {
            self.solution = candidate;
            self.node = node;
            true
        } else {
            false
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Termination {
    /// No open node can beat the incumbent.
    Optimal,
    TimeLimit,
    NodeLimit,
}

/// Final state of a node in the search trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeStatus {
    /// Selected and branched.
    Branched,
    /// Selected with an integer relaxation.
    Integer,
    /// Selected, fractional, but the heuristic left nothing to cascade on.
    Closed,
    /// Bound did not exceed the incumbent when the child was created.
    PrunedAtCreation,
    /// Inserted, then dominated by a later incumbent.
    PrunedByBound,
    /// One-fixings exceed the capacity; no relaxation exists.
    Infeasible,
    /// Still open when a limit stopped the search.
    Open,
}

impl NodeStatus {
    pub fn name(self) -> &'static str {
        match self {
            NodeStatus::Branched => "branched",
            NodeStatus::Integer => "integer",
            NodeStatus::Closed => "closed",
            NodeStatus::PrunedAtCreation => "pruned-at-creation",
            NodeStatus::PrunedByBound => "pruned-by-bound",
            NodeStatus::Infeasible => "infeasible",
            NodeStatus::Open => "open",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceNode {
    pub id: u64,
    pub parent: Option<u64>,
    pub label: String,
    pub fixings: Fixings,
    /// Dantzig bound; `None` for infeasible children.
    pub upper_bound: Option<Rational>,
    pub relaxed_integer: bool,
    /// Heuristic or integer-relaxation value, once the node was selected.
    pub lower_bound: Option<Rational>,
    pub status: NodeStatus,
}

impl TraceNode {
    /// Number of 0-1 assignments of the free variables.
    pub fn cardinality(&self) -> u128 {
        let free = self.fixings.free_count() as u32;
        1u128.checked_shl(free).unwrap_or(u128::MAX)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    Select {
        node: u64,
        upper_bound: Rational,
    },
    Incumbent {
        node: u64,
        value: Rational,
    },
    Prune {
        node: u64,
        upper_bound: Rational,
        incumbent: Rational,
    },
    Branch {
        node: u64,
        children: Vec<u64>,
    },
}

/// Every node created during a solve, by id, plus the ordered event log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub strategy: Strategy,
    pub nodes: Vec<TraceNode>,
    pub events: Vec<TraceEvent>,
}

impl Trace {
    pub fn node(&self, id: u64) -> Option<&TraceNode> {
        // ids are dense from 1
        self.nodes.get((id as usize).checked_sub(1)?).filter(|n| n.id == id)
    }

    pub fn children(&self, id: u64) -> impl Iterator<Item = &TraceNode> {
        self.nodes.iter().filter(move |n| n.parent == Some(id))
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub best: Solution,
    pub optimal: bool,
    pub termination: Termination,
    pub nodes_evaluated: u64,
    pub nodes_pruned: u64,
    pub nodes_infeasible: u64,
    pub wall_time: Duration,
    pub strategy: Strategy,
    pub trace: Option<Trace>,
}

struct Search<'a> {
    instance: &'a Instance,
    strategy: Strategy,
    frontier: Frontier,
    incumbent: Incumbent,
    next_id: u64,
    nodes_evaluated: u64,
    nodes_pruned: u64,
    nodes_infeasible: u64,
    trace: Option<Trace>,
}

impl<'a> Search<'a> {
    fn record_node(&mut self, node: TraceNode) {
        if let Some(t) = &mut self.trace {
            debug_assert_eq!(t.nodes.len() as u64 + 1, node.id);
            t.nodes.push(node);
        }
    }

    fn set_status(&mut self, id: u64, status: NodeStatus) {
        if let Some(t) = &mut self.trace {
            t.nodes[id as usize - 1].status = status;
        }
    }

    fn set_lower_bound(&mut self, id: u64, value: Rational) {
        if let Some(t) = &mut self.trace {
            t.nodes[id as usize - 1].lower_bound = Some(value);
        }
    }

    fn event(&mut self, event: impl FnOnce() -> TraceEvent) {
        if let Some(t) = &mut self.trace {
            t.events.push(event());
        }
    }

    fn offer(&mut self, candidate: Solution, node: u64) {
        let value = candidate.value;
        if self.incumbent.offer(candidate, Some(node)) {
            self.event(|| TraceEvent::Incumbent { node, value });
        }
    }

    /// Evaluates a newly created subproblem and inserts it unless it is
    /// infeasible or cannot beat the incumbent. Returns the new id.
    fn create(&mut self, fixings: Fixings, parent: Option<u64>, label: String) -> Result<u64> {
        let id = self.next_id;
        self.next_id += 1;
        self.nodes_evaluated += 1;
        if !fixings.is_feasible(self.instance) {
            self.nodes_infeasible += 1;
            self.record_node(TraceNode {
                id,
                parent,
                label,
                fixings,
                upper_bound: None,
                relaxed_integer: false,
                lower_bound: None,
                status: NodeStatus::Infeasible,
            });
            return Ok(id);
        }
        let fixings = if self.strategy.fixes_capacity() {
            capacity_fix(self.instance, &fixings)?
        } else {
            fixings
        };
        let relaxed = dantzig_bound(self.instance, &fixings)?;
        let upper_bound = relaxed.upper_bound;
        // the root is always inserted; children must beat the incumbent
        let pruned = parent.is_some() && upper_bound <= self.incumbent.value();
        if self.trace.is_some() {
            self.record_node(TraceNode {
                id,
                parent,
                label: label.clone(),
                fixings: fixings.clone(),
                upper_bound: Some(upper_bound),
                relaxed_integer: relaxed.is_integer,
                lower_bound: None,
                status: if pruned {
                    NodeStatus::PrunedAtCreation
                } else {
                    NodeStatus::Open
                },
            });
        }
        if pruned {
            self.nodes_pruned += 1;
            let incumbent = self.incumbent.value();
            self.event(|| TraceEvent::Prune {
                node: id,
                upper_bound,
                incumbent,
            });
        } else {
            self.frontier.push(Node {
                id,
                fixings,
                upper_bound,
                relaxed,
                heuristic: None,
                parent_id: parent,
                branch_label: label,
            });
        }
        Ok(id)
    }

    fn expand(&mut self, mut node: Node) -> Result<()> {
        let id = node.id;
        if let Some(selection) = node.relaxed.integer_selection() {
            let solution = Solution::from_selection(self.instance, selection)?;
            self.set_lower_bound(id, solution.value);
            self.set_status(id, NodeStatus::Integer);
            self.offer(solution, id);
            return Ok(());
        }
        let branches = match self.strategy {
            Strategy::Kolesar => kolesar_branches(&node)?,
            Strategy::GreenbergHegerich => gh_branches(&node)?,
            Strategy::CascadingTree => {
                let heuristic = greedy_complete(self.instance, &node.fixings, &node.relaxed)?;
                self.set_lower_bound(id, heuristic.value);
                self.offer(heuristic.clone(), id);
                let branches = cascade_branches(&node, &heuristic);
                node.heuristic = Some(heuristic);
                branches
            }
        };
        if branches.is_empty() {
            self.set_status(id, NodeStatus::Closed);
            return Ok(());
        }
        self.set_status(id, NodeStatus::Branched);
        let mut children = Vec::with_capacity(branches.len());
        for branch in &branches {
            let child = self.create(branch.apply(&node.fixings), Some(id), branch.label())?;
            children.push(child);
        }
        self.event(|| TraceEvent::Branch { node: id, children });
        Ok(())
    }
}

/// Solves a canonicalized instance with the given branching strategy.
pub fn solve(instance: &Instance, strategy: Strategy, limits: Limits, trace_enabled: bool) -> Result<SolveReport> {
    let start = Instant::now();
    let n = instance.len();
    let mut search = Search {
        instance,
        strategy,
        frontier: Frontier::new(),
        incumbent: Incumbent::new(n),
        next_id: 1,
        nodes_evaluated: 0,
        nodes_pruned: 0,
        nodes_infeasible: 0,
        trace: trace_enabled.then(|| Trace {
            strategy,
            nodes: Vec::new(),
            events: Vec::new(),
        }),
    };
    search.create(Fixings::all_free(n), None, String::new())?;

    let termination = loop {
        match search.frontier.best_bound() {
            None => break Termination::Optimal,
            Some(bound) if bound <= search.incumbent.value() => break Termination::Optimal,
            Some(_) => {}
        }
        if start.elapsed() >= limits.time_limit {
            break Termination::TimeLimit;
        }
        if limits.node_limit.is_some_and(|cap| search.nodes_evaluated >= cap) {
            break Termination::NodeLimit;
        }
        let node = search.frontier.pop().expect("frontier checked non-empty");
        let upper_bound = node.upper_bound;
        search.event(|| TraceEvent::Select {
            node: node.id,
            upper_bound,
        });
        search.expand(node)?;
    };

    let optimal = termination == Termination::Optimal;
    let leftover: Vec<(u64, Rational)> = search.frontier.drain().map(|n| (n.id, n.upper_bound)).collect();
    if optimal {
        search.nodes_pruned += leftover.len() as u64;
    }
    if search.trace.is_some() {
        let mut leftover = leftover;
        leftover.sort_unstable_by_key(|&(id, _)| id);
        let incumbent = search.incumbent.value();
        for (id, upper_bound) in leftover {
            if optimal {
                search.set_status(id, NodeStatus::PrunedByBound);
                search.event(|| TraceEvent::Prune {
                    node: id,
                    upper_bound,
                    incumbent,
                });
            }
        }
    }

    Ok(SolveReport {
        best: search.incumbent.solution,
        optimal,
        termination,
        nodes_evaluated: search.nodes_evaluated,
        nodes_pruned: search.nodes_pruned,
        nodes_infeasible: search.nodes_infeasible,
        wall_time: start.elapsed(),
        strategy,
        trace: search.trace,
    })
}
