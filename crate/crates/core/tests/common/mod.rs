#![allow(dead_code)]

use knapsack_bnb::gen::{generate, CorrelationClass, GeneratorConfig, SplitMix64};
use knapsack_bnb::model::{evaluate, Fix, Fixings, Instance, Rational};

/// Every tri-state fixing vector of length `n` (3^n of them).
pub fn all_fixings(n: usize) -> impl Iterator<Item = Fixings> {
    let total = 3usize.pow(n as u32);
    (0..total).map(move |mut code| {
        let mut states = Vec::with_capacity(n);
        for _ in 0..n {
            states.push(match code % 3 {
                0 => Fix::Free,
                1 => Fix::Zero,
                _ => Fix::One,
            });
            code /= 3;
        }
        Fixings::from_states(states)
    })
}

/// All feasible 0-1 selections with their values.
pub fn feasible_solutions(instance: &Instance) -> Vec<(Vec<bool>, Rational)> {
    let n = instance.len();
    (0u32..1 << n)
        .filter_map(|mask| {
            let sel: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            let (value, weight) = evaluate(instance, &sel).unwrap();
            (weight <= instance.capacity()).then_some((sel, value))
        })
        .collect()
}

/// Best value among feasible selections admitted by `fixings`, if any.
pub fn subproblem_optimum(feasible: &[(Vec<bool>, Rational)], fixings: &Fixings) -> Option<Rational> {
    feasible
        .iter()
        .filter(|(sel, _)| fixings.admits(sel))
        .map(|(_, v)| *v)
        .max()
}

/// Small instances of every class, with a narrow data range so that
/// branching actually happens.
pub fn small_instances(count: usize, max_n: usize, seed: u64) -> Vec<Instance> {
    let mut rng = SplitMix64::new(seed);
    (0..count)
        .map(|i| {
            let class = CorrelationClass::ALL[i % 3];
            let n = rng.uniform(3, max_n as u64) as usize;
            let range = rng.uniform(10, 40);
            generate(&GeneratorConfig::new(class, n, rng.next_u64()).with_range(range)).unwrap()
        })
        .collect()
}

/// The 90-instance sweep: 3 classes x n in {10, 15, 20} x 10 seeds.
pub fn oracle_sweep() -> Vec<Instance> {
    let mut out = Vec::new();
    for class in CorrelationClass::ALL {
        for n in [10, 15, 20] {
            for seed in 0..10 {
                out.push(generate(&GeneratorConfig::new(class, n, seed)).unwrap());
            }
        }
    }
    out
}
