//! Exact reference solvers used to check the branch-and-bound results.

use crate::error::{Error, Result};
use crate::model::{Instance, Rational, Solution};

/// Upper limit on `n * capacity` for [`dp_solve`].
pub const DP_CELL_LIMIT: u128 = 100_000_000;
/// Largest instance [`brute_force`] accepts.
pub const BRUTE_FORCE_LIMIT: usize = 25;

/// Capacity-indexed dynamic program with backtracking.
pub fn dp_solve(instance: &Instance) -> Result<Solution> {
    let n = instance.len();
    let cap = instance.capacity();
    let cells = n as u128 * cap as u128;
    if cells > DP_CELL_LIMIT {
        return Err(Error::TableTooLarge {
            cells,
            limit: DP_CELL_LIMIT,
        });
    }
    if n == 0 {
        return Ok(Solution::empty(0));
    }
    let width = cap as usize + 1;
    let mut best = vec![Rational::ZERO; width];
    let mut take = vec![false; n * width];
    for (k, item) in instance.items().iter().enumerate() {
        let w = item.weight;
        if w > cap {
            continue;
        }
        let row = &mut take[k * width..(k + 1) * width];
        for c in (w as usize..width).rev() {
            let candidate = best[c - w as usize].checked_add(item.value)?;
            if candidate > best[c] {
                best[c] = candidate;
                row[c] = true;
            }
        }
    }
    let mut selection = vec![false; n];
    let mut c = cap as usize;
    for k in (0..n).rev() {
        if take[k * width + c] {
            selection[k] = true;
            c -= instance.item(k).weight as usize;
        }
    }
    let solution = Solution::from_selection(instance, selection)?;
    debug_assert_eq!(solution.value, best[cap as usize]);
    Ok(solution)
}

/// Enumerates all 2^n selections. Among optimal ones the lexicographically
/// smallest selection (item 1 most significant, 0 before 1) is returned.
pub fn brute_force(instance: &Instance) -> Result<Solution> {
    let n = instance.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut search = Enumeration {
        instance,
        current: vec![false; n],
        best: Solution::empty(n),
    };
    search.visit(0, Rational::ZERO, 0)?;
    Ok(search.best)
}

struct Enumeration<'a> {
    instance: &'a Instance,
    current: Vec<bool>,
    best: Solution,
}

impl Enumeration<'_> {
    fn visit(&mut self, depth: usize, value: Rational, weight: u64) -> Result<()> {
        if depth == self.instance.len() {
            // strict: the first optimum met in lexicographic order is kept
            if value > self.best.value {
                self.best = Solution {
                    selection: self.current.clone(),
                    value,
                    weight,
                };
            }
            return Ok(());
        }
        self.visit(depth + 1, value, weight)?;
        let item = self.instance.item(depth);
        let weight = weight + item.weight;
        // selections over capacity are infeasible whatever the remaining bits
        if weight <= self.instance.capacity() {
            self.current[depth] = true;
            self.visit(depth + 1, value.checked_add(item.value)?, weight)?;
            self.current[depth] = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{generate, CorrelationClass, GeneratorConfig};
    use crate::model::{canonicalize, five_item_example, Item};

    #[test]
    fn example_optimum() {
        let inst = five_item_example();
        let dp = dp_solve(&inst).unwrap();
        assert_eq!((dp.value, dp.weight), (Rational::from_integer(3), 20));
        assert_eq!(brute_force(&inst).unwrap().value, Rational::from_integer(3));
    }

    #[test]
    fn empty_instance() {
        let inst = canonicalize(vec![], 0, "empty").unwrap();
        assert_eq!(dp_solve(&inst).unwrap(), Solution::empty(0));
        assert_eq!(brute_force(&inst).unwrap(), Solution::empty(0));
    }

    #[test]
    fn nothing_fits() {
        let items = vec![Item::new(5, Rational::ONE), Item::new(7, Rational::ONE)];
        let inst = canonicalize(items, 4, "tight").unwrap();
        assert_eq!(brute_force(&inst).unwrap(), Solution::empty(2));
        assert_eq!(dp_solve(&inst).unwrap().value, Rational::ZERO);
    }

    #[test]
    fn larger_capacity_agreement() {
        let inst = five_item_example().with_capacity(35);
        let bf = brute_force(&inst).unwrap();
        assert_eq!(bf.value, dp_solve(&inst).unwrap().value);
        assert_eq!(bf.value, Rational::new(51, 10).unwrap());
    }

    #[test]
    fn seeded_agreement() {
        let inst = generate(&GeneratorConfig::new(CorrelationClass::Uncorrelated, 10, 42)).unwrap();
        assert_eq!(dp_solve(&inst).unwrap().value, brute_force(&inst).unwrap().value);
    }

    #[test]
    fn guards() {
        let items = vec![Item::new(1, Rational::ONE); 26];
        let inst = canonicalize(items, 10, "big").unwrap();
        assert_eq!(brute_force(&inst), Err(Error::TooLarge { n: 26, limit: 25 }));
        let inst = inst.with_capacity(10_000_000);
        assert!(matches!(dp_solve(&inst), Err(Error::TableTooLarge { .. })));
    }

    #[test]
    fn lexicographic_tie_break() {
        // {x1} and {x2, x3} both reach value 2 at weight 2
        let items = vec![
            Item::new(2, Rational::from_integer(2)),
            Item::new(1, Rational::ONE),
            Item::new(1, Rational::ONE),
        ];
        let inst = canonicalize(items, 2, "tie").unwrap();
        assert_eq!(brute_force(&inst).unwrap().bits(), "011");
    }
}
