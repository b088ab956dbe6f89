use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use super::Node;
use crate::model::Rational;

struct Entry(Node);

impl Entry {
    fn key(&self) -> (Rational, Reverse<u64>) {
        (self.0.upper_bound, Reverse(self.0.id))
    }
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Open subproblems, highest upper bound first, then lowest id.
#[derive(Default)]
pub struct Frontier {
    heap: BinaryHeap<Entry>,
}

impl Frontier {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, node: Node) {
        self.heap.push(Entry(node));
    }

    pub fn pop(&mut self) -> Option<Node> {
        self.heap.pop().map(|e| e.0)
    }

    pub fn best_bound(&self) -> Option<Rational> {
        self.heap.peek().map(|e| e.0.upper_bound)
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    /// Removes every remaining node, in no particular order.
    pub fn drain(&mut self) -> impl Iterator<Item = Node> + '_ {
        self.heap.drain().map(|e| e.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{five_item_example, Fixings};
    use crate::relax::dantzig_bound;

    fn node(id: u64, bound: i64) -> Node {
        let inst = five_item_example();
        let fixings = Fixings::all_free(inst.len());
        let mut relaxed = dantzig_bound(&inst, &fixings).unwrap();
        relaxed.upper_bound = Rational::from_integer(bound);
        Node {
            id,
            upper_bound: relaxed.upper_bound,
            fixings,
            relaxed,
            heuristic: None,
            parent_id: None,
            branch_label: String::new(),
        }
    }

    #[test]
    fn highest_bound_then_lowest_id() {
        let mut f = Frontier::new();
        for (id, b) in [(1, 3), (2, 5), (3, 5), (4, 1)] {
            f.push(node(id, b));
        }
        assert_eq!(f.best_bound(), Some(Rational::from_integer(5)));
        let order: Vec<u64> = std::iter::from_fn(|| f.pop()).map(|n| n.id).collect();
        assert_eq!(order, vec![2, 3, 1, 4]);
        assert!(f.is_empty());
    }
}
