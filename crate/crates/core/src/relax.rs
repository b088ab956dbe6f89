//! Linear relaxation bound, capacity fixing and the greedy completion
//! heuristic.

use crate::error::{Error, Result};
use crate::model::{Fix, Fixings, Instance, Rational, Solution};

/// Value a variable takes in the relaxed solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Implied {
    Zero,
    One,
    Fractional,
}

/// Optimal solution of the LP relaxation of a subproblem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelaxedSolution {
    pub upper_bound: Rational,
    /// The critical item, taken fractionally. `None` iff the solution is integer.
    pub fractional_index: Option<usize>,
    /// Share of the critical item in `[0, 1)`; zero when integer.
    pub fractional_amount: Rational,
    pub is_integer: bool,
    pub implied_selection: Vec<Implied>,
}

impl RelaxedSolution {
    /// The integer selection when `is_integer` holds.
    pub fn integer_selection(&self) -> Option<Vec<bool>> {
        self.is_integer
            .then(|| self.implied_selection.iter().map(|&x| x == Implied::One).collect())
    }

    /// Recomputes the objective from `implied_selection`.
    pub fn recomputed_value(&self, instance: &Instance) -> Result<Rational> {
        let mut value = Rational::ZERO;
        for (k, x) in self.implied_selection.iter().enumerate() {
            let add = match x {
                Implied::Zero => continue,
                Implied::One => instance.item(k).value,
                Implied::Fractional => instance.item(k).value.checked_mul(self.fractional_amount)?,
            };
            value = value.checked_add(add)?;
        }
        Ok(value)
    }
}

/// Dantzig bound: One-fixed items plus a greedy fill of the free items in
/// ratio order, with the first item that does not fit taken fractionally.
pub fn dantzig_bound(instance: &Instance, fixings: &Fixings) -> Result<RelaxedSolution> {
    let mut residual = fixings.residual(instance)?;
    let n = instance.len();
    let mut implied = vec![Implied::Zero; n];
    let mut bound = Rational::ZERO;
    for (k, item) in instance.items().iter().enumerate() {
        if fixings.get(k) == Fix::One {
            implied[k] = Implied::One;
            bound = bound.checked_add(item.value)?;
        }
    }
    let mut fractional_index = None;
    let mut fractional_amount = Rational::ZERO;
    for k in fixings.free_indices() {
        if residual == 0 {
            break;
        }
        let item = instance.item(k);
        if item.weight <= residual {
            residual -= item.weight;
            implied[k] = Implied::One;
            bound = bound.checked_add(item.value)?;
        } else {
            let amount = Rational::new(
                i64::try_from(residual).map_err(|_| Error::Overflow("residual capacity"))?,
                i64::try_from(item.weight).map_err(|_| Error::Overflow("item weight"))?,
            )?;
            implied[k] = Implied::Fractional;
            fractional_index = Some(k);
            fractional_amount = amount;
            bound = bound.checked_add(item.value.checked_mul(amount)?)?;
            break;
        }
    }
    Ok(RelaxedSolution {
        upper_bound: bound,
        is_integer: fractional_index.is_none(),
        fractional_index,
        fractional_amount,
        implied_selection: implied,
    })
}

/// Sets to Zero every free variable whose weight exceeds the residual capacity.
pub fn capacity_fix(instance: &Instance, fixings: &Fixings) -> Result<Fixings> {
    let residual = fixings.residual(instance)?;
    let mut out = fixings.clone();
    for k in fixings.free_indices() {
        if instance.item(k).weight > residual {
            out.set(k, Fix::Zero);
        }
    }
    Ok(out)
}

/// Rounds a relaxed solution down to a feasible integer one.
///
/// Keeps the relaxation's entries before the critical item, drops the
/// critical item, then adds later free items in order whenever they still
/// fit. Zero-fixed variables stay out and One-fixed ones stay in.
pub fn greedy_complete(instance: &Instance, fixings: &Fixings, relaxed: &RelaxedSolution) -> Result<Solution> {
    let n = instance.len();
    let Some(critical) = relaxed.fractional_index else {
        let selection = relaxed
            .integer_selection()
            .expect("integer relaxation without fractional index");
        return Solution::from_selection(instance, selection);
    };
    let mut selection = vec![false; n];
    for (k, x) in relaxed.implied_selection.iter().enumerate() {
        if k < critical || fixings.get(k) == Fix::One {
            selection[k] = *x == Implied::One;
        }
    }
    let used: u64 = (0..n).filter(|&k| selection[k]).map(|k| instance.item(k).weight).sum();
    let mut residual = instance.capacity() - used;
    for (k, slot) in selection.iter_mut().enumerate().skip(critical + 1) {
        if fixings.is_free(k) && instance.item(k).weight <= residual {
            *slot = true;
            residual -= instance.item(k).weight;
        }
    }
    Solution::from_selection(instance, selection)
}
