//! Branching rules. Each rule describes its children as assignments layered
//! on top of the parent's fixings; the engine materializes and evaluates them.

use std::fmt;

use super::Node;
use crate::error::{Error, Result};
use crate::model::{Fix, Fixings, Instance, Solution};
use crate::relax::capacity_fix;

/// Assignments a child adds to its parent's fixings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub assignments: Vec<(usize, Fix)>,
}

impl Branch {
    fn single(index: usize, fix: Fix) -> Self {
        Branch {
            assignments: vec![(index, fix)],
        }
    }

    pub fn apply(&self, parent: &Fixings) -> Fixings {
        let mut out = parent.clone();
        for &(k, fix) in &self.assignments {
            out.set(k, fix);
        }
        out
    }

    /// Edge label with 1-based variable names, e.g. `x1=1,x2=0`.
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &(k, fix)) in self.assignments.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            let v = match fix {
                Fix::Zero => "0",
                Fix::One => "1",
                Fix::Free => "*",
            };
            write!(f, "x{}={}", k + 1, v)?;
        }
        Ok(())
    }
}

fn require_fractional(node: &Node) -> Result<usize> {
    node.relaxed.fractional_index.ok_or(Error::IntegerRelaxation)
}

/// Lowest-index free variable, fixed to 0 then to 1.
pub fn kolesar_branches(node: &Node) -> Result<Vec<Branch>> {
    require_fractional(node)?;
    let k = node.fixings.free_indices().next().ok_or(Error::NoFreeVariable)?;
    Ok(vec![Branch::single(k, Fix::Zero), Branch::single(k, Fix::One)])
}

/// The critical (fractional) variable, fixed to 0 then to 1.
pub fn gh_branches(node: &Node) -> Result<Vec<Branch>> {
    let s = require_fractional(node)?;
    Ok(vec![Branch::single(s, Fix::Zero), Branch::single(s, Fix::One)])
}

/// Cascade over the free positions `i_1 < ... < i_r` the heuristic sets to
/// one: child `k` fixes `i_1..i_{k-1}` to one and `i_k` to zero.
///
/// Returns no branches when the heuristic selects no free variable.
pub fn cascade_branches(node: &Node, heuristic: &Solution) -> Vec<Branch> {
    let ones: Vec<usize> = node
        .fixings
        .free_indices()
        .filter(|&k| heuristic.selection[k])
        .collect();
    (0..ones.len())
        .map(|k| {
            let mut assignments: Vec<(usize, Fix)> = ones[..k].iter().map(|&i| (i, Fix::One)).collect();
            assignments.push((ones[k], Fix::Zero));
            Branch { assignments }
        })
        .collect()
}

fn feasible_children(instance: &Instance, node: &Node, branches: &[Branch]) -> Vec<Fixings> {
    branches
        .iter()
        .map(|b| b.apply(&node.fixings))
        .filter(|f| f.is_feasible(instance))
        .collect()
}

/// Kolesar children whose One-fixings fit the capacity.
pub fn branch_kolesar(instance: &Instance, node: &Node) -> Result<Vec<Fixings>> {
    Ok(feasible_children(instance, node, &kolesar_branches(node)?))
}

/// Greenberg & Hegerich children whose One-fixings fit the capacity.
pub fn branch_gh(instance: &Instance, node: &Node) -> Result<Vec<Fixings>> {
    Ok(feasible_children(instance, node, &gh_branches(node)?))
}

/// Cascade children with capacity fixing applied.
///
/// Fails with [`Error::NoFreeVariable`] when the heuristic selects none of
/// the node's free variables.
pub fn branch_cascade(instance: &Instance, node: &Node, heuristic: &Solution) -> Result<Vec<Fixings>> {
    let branches = cascade_branches(node, heuristic);
    if branches.is_empty() {
        return Err(Error::NoFreeVariable);
    }
    feasible_children(instance, node, &branches)
        .iter()
        .map(|f| capacity_fix(instance, f))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{canonicalize, five_item_example, Item, Rational};
    use crate::relax::{dantzig_bound, greedy_complete};

    fn fixings(pattern: &str) -> Fixings {
        Fixings::from_states(
            pattern
                .chars()
                .map(|c| match c {
                    '0' => Fix::Zero,
                    '1' => Fix::One,
                    _ => Fix::Free,
                })
                .collect(),
        )
    }

    fn node(instance: &Instance, pattern: &str) -> Node {
        let fixings = fixings(pattern);
        let relaxed = dantzig_bound(instance, &fixings).unwrap();
        Node {
            id: 1,
            upper_bound: relaxed.upper_bound,
            fixings,
            relaxed,
            heuristic: None,
            parent_id: None,
            branch_label: String::new(),
        }
    }

    #[test]
    fn kolesar_root() {
        let inst = five_item_example();
        let children = branch_kolesar(&inst, &node(&inst, "-----")).unwrap();
        assert_eq!(children, vec![fixings("0----"), fixings("1----")]);
    }

    #[test]
    fn kolesar_next_free() {
        let inst = five_item_example();
        let children = branch_kolesar(&inst, &node(&inst, "1----")).unwrap();
        assert_eq!(children, vec![fixings("10---"), fixings("11---")]);
    }

    #[test]
    fn kolesar_drops_infeasible_one() {
        let inst = five_item_example();
        // 9 + 8 fixed, residual 3, x3 (5) cannot be forced in
        let n = node(&inst, "11---");
        assert!(!n.relaxed.is_integer);
        let children = branch_kolesar(&inst, &n).unwrap();
        assert_eq!(children, vec![fixings("110--")]);
        assert_eq!(kolesar_branches(&n).unwrap().len(), 2);
    }

    #[test]
    fn gh_root() {
        let inst = five_item_example();
        let children = branch_gh(&inst, &node(&inst, "-----")).unwrap();
        assert_eq!(children, vec![fixings("--0--"), fixings("--1--")]);
    }

    #[test]
    fn gh_drops_infeasible_one() {
        let inst = five_item_example();
        let n = node(&inst, "11---");
        assert_eq!(n.relaxed.fractional_index, Some(2));
        assert_eq!(branch_gh(&inst, &n).unwrap(), vec![fixings("110--")]);
    }

    #[test]
    fn integer_node_not_branched() {
        let inst = five_item_example();
        let n = node(&inst, "10---");
        assert_eq!(gh_branches(&n), Err(Error::IntegerRelaxation));
        assert_eq!(kolesar_branches(&n), Err(Error::IntegerRelaxation));
    }

    #[test]
    fn cascade_root() {
        let inst = five_item_example();
        let n = node(&inst, "-----");
        let h = greedy_complete(&inst, &n.fixings, &n.relaxed).unwrap();
        let branches = cascade_branches(&n, &h);
        let labels: Vec<String> = branches.iter().map(Branch::label).collect();
        assert_eq!(labels, vec!["x1=0", "x1=1,x2=0"]);
        let children = branch_cascade(&inst, &n, &h).unwrap();
        assert_eq!(children, vec![fixings("0----"), fixings("10---")]);
    }

    #[test]
    fn cascade_single_one() {
        let inst = five_item_example();
        let n = node(&inst, "-----");
        let h = Solution::from_selection(&inst, vec![false, false, false, true, false]).unwrap();
        let branches = cascade_branches(&n, &h);
        assert_eq!(branches, vec![Branch::single(3, Fix::Zero)]);
    }

    #[test]
    fn cascade_layers_over_existing_fixings() {
        let inst = five_item_example();
        let n = node(&inst, "-1---");
        let h = Solution::from_selection(&inst, vec![false, true, false, true, true]).unwrap();
        let labels: Vec<String> = cascade_branches(&n, &h).iter().map(Branch::label).collect();
        assert_eq!(labels, vec!["x4=0", "x4=1,x5=0"]);
        let children = branch_cascade(&inst, &n, &h).unwrap();
        // x2 + x4 = 14 leaves 6: x1 (9) and x5 (7) are fixed out, x3 (5) stays free
        assert_eq!(children, vec![fixings("-1-0-"), fixings("01-10")]);
    }

    #[test]
    fn cascade_without_ones() {
        let items = vec![Item::new(3, Rational::ONE)];
        let inst = canonicalize(items, 2, "x").unwrap();
        let n = node(&inst, "-");
        let h = Solution::empty(1);
        assert!(cascade_branches(&n, &h).is_empty());
        assert_eq!(branch_cascade(&inst, &n, &h), Err(Error::NoFreeVariable));
    }
}
