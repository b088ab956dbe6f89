//! Seeded instance generator for uncorrelated, weakly and strongly
//! correlated instances.
//!
//! The random stream is SplitMix64, implemented here so that generated
//! instances are bit-identical on every platform and toolchain.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{canonicalize, Instance, Item, Rational};

/// SplitMix64 pseudorandom generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform integer in `[lo, hi]` by reduction modulo the range size.
    pub fn uniform(&mut self, lo: u64, hi: u64) -> u64 {
        uniform_from(self.next_u64(), lo, hi)
    }
}

pub fn uniform_from(output: u64, lo: u64, hi: u64) -> u64 {
    assert!(lo <= hi, "empty range [{lo}, {hi}]");
    match (hi - lo).checked_add(1) {
        Some(span) => lo + output % span,
        None => output,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CorrelationClass {
    Uncorrelated,
    WeaklyCorrelated,
    StronglyCorrelated,
}

impl CorrelationClass {
    pub const ALL: [CorrelationClass; 3] = [
        CorrelationClass::Uncorrelated,
        CorrelationClass::WeaklyCorrelated,
        CorrelationClass::StronglyCorrelated,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            CorrelationClass::Uncorrelated => "uncorrelated",
            CorrelationClass::WeaklyCorrelated => "weak",
            CorrelationClass::StronglyCorrelated => "strong",
        }
    }

    pub fn index(self) -> u64 {
        self as u64
    }
}

impl fmt::Display for CorrelationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for CorrelationClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "uncorrelated" | "uncorr" | "u" => Ok(CorrelationClass::Uncorrelated),
            "weak" | "weakly" | "weakly-correlated" | "w" => Ok(CorrelationClass::WeaklyCorrelated),
            "strong" | "strongly" | "strongly-correlated" | "s" => Ok(CorrelationClass::StronglyCorrelated),
            other => Err(Error::InvalidConfig(format!("unknown class {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GeneratorConfig {
    pub class: CorrelationClass,
    pub n: usize,
    /// Data range; weights are drawn from `[1, range]`.
    pub range: u64,
    pub seed: u64,
}

impl GeneratorConfig {
    pub const DEFAULT_RANGE: u64 = 100;

    pub fn new(class: CorrelationClass, n: usize, seed: u64) -> Self {
        GeneratorConfig {
            class,
            n,
            range: Self::DEFAULT_RANGE,
            seed,
        }
    }

    pub fn with_range(mut self, range: u64) -> Self {
        self.range = range;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidConfig("n must be at least 1".into()));
        }
        if self.range < 10 {
            return Err(Error::InvalidConfig(format!(
                "range must be at least 10, got {}",
                self.range
            )));
        }
        if self.range > (i64::MAX as u64) / 4 {
            return Err(Error::InvalidConfig("range too large".into()));
        }
        Ok(())
    }

    /// Default instance name, e.g. `strong-n10-r100-s7`.
    pub fn name(&self) -> String {
        format!("{}-n{}-r{}-s{}", self.class, self.n, self.range, self.seed)
    }
}

/// Draws `w_j` then `v_j` for j = 1..n, sets the capacity to half the total
/// weight (rounded down) and canonicalizes.
pub fn generate(config: &GeneratorConfig) -> Result<Instance> {
    config.validate()?;
    let mut rng = SplitMix64::new(config.seed);
    let r = config.range;
    let spread = r / 10;
    let mut items = Vec::with_capacity(config.n);
    let mut total = 0u64;
    for _ in 0..config.n {
        let weight = rng.uniform(1, r);
        let value = match config.class {
            CorrelationClass::Uncorrelated => rng.uniform(1, r),
            CorrelationClass::WeaklyCorrelated => rng.uniform(weight.saturating_sub(spread).max(1), weight + spread),
            CorrelationClass::StronglyCorrelated => weight + spread,
        };
        total = total.checked_add(weight).ok_or(Error::Overflow("total weight"))?;
        items.push(Item::new(weight, Rational::from_integer(value as i64)));
    }
    canonicalize(items, total / 2, config.name())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Straight transcription of the reference SplitMix64 algorithm, kept
    /// apart from `SplitMix64` so the two can be checked against each other.
    fn reference_splitmix(seed: u64, count: usize) -> Vec<u64> {
        let mut x = seed;
        (0..count)
            .map(|_| {
                x = x.wrapping_add(0x9e3779b97f4a7c15);
                let mut z = x;
                z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
                z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
                z ^ (z >> 31)
            })
            .collect()
    }

    #[test]
    fn splitmix_seed_zero_vector() {
        let mut rng = SplitMix64::new(0);
        assert_eq!(rng.next_u64(), 0xE220_A839_7B1D_CDAF);
        // further outputs of the same stream, computed independently
        assert_eq!(rng.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(rng.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn splitmix_matches_reference() {
        for seed in [0u64, 1, 42, u64::MAX, 0xDEAD_BEEF] {
            let mut rng = SplitMix64::new(seed);
            let ours: Vec<u64> = (0..16).map(|_| rng.next_u64()).collect();
            assert_eq!(ours, reference_splitmix(seed, 16));
        }
    }

    #[test]
    fn uniform_examples() {
        assert_eq!(uniform_from(0xE220_A839_7B1D_CDAF, 5, 5), 5);
        assert_eq!(SplitMix64::new(0).uniform(1, 100), 1 + 0xE220_A839_7B1D_CDAF % 100);
        assert_eq!(SplitMix64::new(0).uniform(1, 100), 36);
        assert_eq!(uniform_from(7, 0, u64::MAX), 7);
    }

    #[test]
    fn strong_values_offset_by_tenth_of_range() {
        let inst = generate(&GeneratorConfig::new(CorrelationClass::StronglyCorrelated, 40, 3)).unwrap();
        for it in inst.items() {
            assert_eq!(it.value, Rational::from_integer(it.weight as i64 + 10));
        }
    }

    #[test]
    fn capacity_is_half_total_weight() {
        for seed in 0..20 {
            let inst = generate(&GeneratorConfig::new(CorrelationClass::Uncorrelated, 1, seed)).unwrap();
            assert_eq!(inst.capacity(), inst.item(0).weight / 2);
            assert!(inst.item(0).weight > inst.capacity());
        }
    }

    #[test]
    fn draw_order_is_weight_then_value() {
        let config = GeneratorConfig::new(CorrelationClass::Uncorrelated, 3, 9);
        let outs = reference_splitmix(9, 6);
        let expected: Vec<(u64, u64)> = outs.chunks(2).map(|c| (1 + c[0] % 100, 1 + c[1] % 100)).collect();
        let inst = generate(&config).unwrap();
        let got: Vec<(u64, u64)> = inst
            .input_items()
            .iter()
            .map(|it| (it.weight, it.value.numer() as u64))
            .collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn rejects_bad_config() {
        let bad_range = GeneratorConfig::new(CorrelationClass::Uncorrelated, 5, 1).with_range(5);
        assert!(matches!(generate(&bad_range), Err(Error::InvalidConfig(_))));
        let bad_n = GeneratorConfig::new(CorrelationClass::Uncorrelated, 0, 1);
        assert!(generate(&bad_n).is_err());
    }

    #[test]
    fn class_names_parse() {
        for class in CorrelationClass::ALL {
            assert_eq!(class.short_name().parse::<CorrelationClass>().unwrap(), class);
        }
        assert!("inverse".parse::<CorrelationClass>().is_err());
    }

    fn any_class() -> impl Strategy<Value = CorrelationClass> {
        prop::sample::select(CorrelationClass::ALL.to_vec())
    }

    proptest! {
        #[test]
        fn values_in_documented_ranges(class in any_class(), n in 1usize..60, range in 10u64..500, seed in any::<u64>()) {
            let config = GeneratorConfig::new(class, n, seed).with_range(range);
            let inst = generate(&config).unwrap();
            let spread = range / 10;
            for it in inst.items() {
                prop_assert!((1..=range).contains(&it.weight));
                prop_assert!(it.value.is_integer());
                let v = it.value.numer() as u64;
                prop_assert!(v >= 1);
                match class {
                    CorrelationClass::Uncorrelated => prop_assert!(v <= range),
                    CorrelationClass::WeaklyCorrelated => {
                        prop_assert!(v + spread >= it.weight && v <= it.weight + spread)
                    }
                    CorrelationClass::StronglyCorrelated => prop_assert_eq!(v, it.weight + spread),
                }
            }
            prop_assert_eq!(inst.capacity(), inst.total_weight() / 2);
        }

        #[test]
        fn same_config_same_instance(class in any_class(), n in 1usize..40, seed in any::<u64>()) {
            let config = GeneratorConfig::new(class, n, seed);
            prop_assert_eq!(generate(&config).unwrap(), generate(&config).unwrap());
        }
    }
}
