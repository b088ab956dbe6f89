//! Domain types: items, canonicalized instances, variable fixings and
//! integer solutions.

mod rational;

pub use rational::{ParseRationalError, Rational};

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Item {
    pub weight: u64,
    pub value: Rational,
}

impl Item {
    pub fn new(weight: u64, value: Rational) -> Self {
        Item { weight, value }
    }

    /// Compares `self.value / self.weight` against `other`'s without division.
    pub fn cmp_ratio(&self, other: &Item) -> std::cmp::Ordering {
        // n1/(d1*w1) vs n2/(d2*w2)  <=>  n1*d2*w2 vs n2*d1*w1, which needs ~190 bits
        let lhs = (self.value.numer() as i128) * (other.value.denom() as i128);
        let rhs = (other.value.numer() as i128) * (self.value.denom() as i128);
        let l = widen_mul(lhs, other.weight as i128);
        let r = widen_mul(rhs, self.weight as i128);
        l.cmp(&r)
    }
}

// 128x64-bit products of non-negative values as (high, low) limbs.
fn widen_mul(a: i128, b: i128) -> (u128, u128) {
    debug_assert!(a >= 0 && b >= 0);
    let (a, b) = (a as u128, b as u128);
    let mask = u64::MAX as u128;
    let (a_hi, a_lo) = (a >> 64, a & mask);
    let lo = a_lo * b;
    let hi = a_hi * b + (lo >> 64);
    (hi, lo & mask)
}

/// A 0-1 knapsack instance with items in non-increasing value/weight order.
///
/// Item `k` of the instance is item `original_order[k]` of the input the
/// instance was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    name: String,
    items: Vec<Item>,
    capacity: u64,
    original_order: Vec<usize>,
    total_weight: u64,
}

impl Instance {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn item(&self, index: usize) -> &Item {
        &self.items[index]
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }

    pub fn original_order(&self) -> &[usize] {
        &self.original_order
    }

    /// Items in the order they were supplied to [`canonicalize`].
    pub fn input_items(&self) -> Vec<Item> {
        let mut out = vec![Item::new(1, Rational::ONE); self.len()];
        for (k, &orig) in self.original_order.iter().enumerate() {
            out[orig] = self.items[k];
        }
        out
    }

    /// Same items with a different capacity.
    pub fn with_capacity(&self, capacity: u64) -> Instance {
        Instance {
            capacity,
            ..self.clone()
        }
    }

    /// Maps a selection over canonical indices back to input indices.
    pub fn to_input_order<T: Copy + Default>(&self, canonical: &[T]) -> Vec<T> {
        let mut out = vec![T::default(); canonical.len()];
        for (k, &orig) in self.original_order.iter().enumerate() {
            out[orig] = canonical[k];
        }
        out
    }
}

/// Sorts items by non-increasing value/weight ratio, stable on ties.
pub fn canonicalize(raw_items: Vec<Item>, capacity: u64, name: impl Into<String>) -> Result<Instance> {
    let mut total: u64 = 0;
    for (index, item) in raw_items.iter().enumerate() {
        if item.weight < 1 || !item.value.is_positive() {
            return Err(Error::NonPositiveInput { index });
        }
        total = total.checked_add(item.weight).ok_or(Error::Overflow("total weight"))?;
    }
    let mut order: Vec<usize> = (0..raw_items.len()).collect();
    order.sort_by(|&a, &b| raw_items[b].cmp_ratio(&raw_items[a]));
    let items = order.iter().map(|&i| raw_items[i]).collect();
    Ok(Instance {
        name: name.into(),
        items,
        capacity,
        original_order: order,
        total_weight: total,
    })
}

/// Sums value and weight of the selected items. Feasibility is not checked.
pub fn evaluate(instance: &Instance, selection: &[bool]) -> Result<(Rational, u64)> {
    if selection.len() != instance.len() {
        return Err(Error::LengthMismatch {
            expected: instance.len(),
            got: selection.len(),
        });
    }
    let mut value = Rational::ZERO;
    let mut weight = 0u64;
    for (item, _) in instance.items.iter().zip(selection).filter(|(_, &s)| s) {
        value = value.checked_add(item.value)?;
        weight += item.weight;
    }
    Ok((value, weight))
}

/// State of a single decision variable within a subproblem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Fix {
    #[default]
    Free,
    Zero,
    One,
}

/// Per-variable assignment defining a subproblem.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fixings {
    states: Vec<Fix>,
}

impl Fixings {
    pub fn all_free(n: usize) -> Self {
        Fixings {
            states: vec![Fix::Free; n],
        }
    }

    pub fn from_states(states: Vec<Fix>) -> Self {
        Fixings { states }
    }

    pub fn states(&self) -> &[Fix] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn get(&self, index: usize) -> Fix {
        self.states[index]
    }

    pub fn set(&mut self, index: usize, fix: Fix) {
        self.states[index] = fix;
    }

    pub fn with(mut self, index: usize, fix: Fix) -> Self {
        self.states[index] = fix;
        self
    }

    pub fn is_free(&self, index: usize) -> bool {
        self.states[index] == Fix::Free
    }

    pub fn free_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.states
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == Fix::Free)
            .map(|(i, _)| i)
    }

    pub fn free_count(&self) -> usize {
        self.states.iter().filter(|&&s| s == Fix::Free).count()
    }

    /// Total weight of One-fixed items.
    pub fn fixed_weight(&self, instance: &Instance) -> u64 {
        self.states
            .iter()
            .zip(instance.items())
            .filter(|(&s, _)| s == Fix::One)
            .map(|(_, it)| it.weight)
            .sum()
    }

    pub fn is_feasible(&self, instance: &Instance) -> bool {
        self.fixed_weight(instance) <= instance.capacity()
    }

    /// Remaining capacity after the One-fixed items, or an error when they do not fit.
    pub fn residual(&self, instance: &Instance) -> Result<u64> {
        let fixed_weight = self.fixed_weight(instance);
        instance
            .capacity()
            .checked_sub(fixed_weight)
            .ok_or(Error::InfeasibleFixings {
                fixed_weight,
                capacity: instance.capacity(),
            })
    }

    /// Whether a full assignment is consistent with these fixings.
    pub fn admits(&self, selection: &[bool]) -> bool {
        self.states.iter().zip(selection).all(|(s, &x)| match s {
            Fix::Free => true,
            Fix::Zero => !x,
            Fix::One => x,
        })
    }
}

/// A feasible 0-1 assignment over canonical item order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Solution {
    pub selection: Vec<bool>,
    pub value: Rational,
    pub weight: u64,
}

impl Solution {
    /// The all-zeros solution.
    pub fn empty(n: usize) -> Self {
        Solution {
            selection: vec![false; n],
            value: Rational::ZERO,
            weight: 0,
        }
    }

    pub fn from_selection(instance: &Instance, selection: Vec<bool>) -> Result<Self> {
        let (value, weight) = evaluate(instance, &selection)?;
        Ok(Solution {
            selection,
            value,
            weight,
        })
    }

    pub fn is_feasible(&self, instance: &Instance) -> bool {
        self.weight <= instance.capacity()
    }

    /// Selection as 0/1 digits, e.g. `10110`.
    pub fn bits(&self) -> String {
        bits(&self.selection)
    }
}

pub(crate) fn bits(selection: &[bool]) -> String {
    selection.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) value={} weight={}", self.bits(), self.value, self.weight)
    }
}

/// The five-item instance used throughout the tests and docs:
/// values 1.5, 1.2, 0.7, 0.8, 0.9, weights 9, 8, 5, 6, 7, capacity 20.
pub fn five_item_example() -> Instance {
    let raw = [(9, (3, 2)), (8, (6, 5)), (5, (7, 10)), (6, (4, 5)), (7, (9, 10))];
    let items = raw
        .iter()
        .map(|&(w, (n, d))| Item::new(w, Rational::new(n, d).unwrap()))
        .collect();
    canonicalize(items, 20, "five-item").expect("valid example")
}
