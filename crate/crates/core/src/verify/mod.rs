//! Independent oracles, generators, experiments and property suites.

mod counterexample;
mod experiment;
mod partition;
mod suite;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use counterexample::{counterexample, counterexample_pair, CounterexampleReport, ReportLine};
pub use experiment::{continuity_experiment, ContinuityReport, ContinuityRow, Thresholds, Verdict};
pub use partition::{alternating_partition, PartitionTarget};
pub use suite::{lemma_suite, point_blind_variation, shrink, CorpusItem, SuiteOptions, SuiteReport, SuiteRow, VariationFn, CHECKS};

use crate::error::{Error, Result};
use crate::exactnum::Rat;
use crate::stepfn::{Breakpoint, Side, StepFunction};

/// Interval family for the brute-force oracle.
///
/// Endpoints are a uniform grid over the hull of the breakpoints and `x`
/// widened by `span`, plus every breakpoint and `x` itself displaced by
/// `±offset`, so no endpoint coincides with a breakpoint. With `count = 0`
/// the grid is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub count: usize,
    pub span: Rat,
    pub offset: Rat,
    pub random_intervals: usize,
    pub seed: u64,
}

impl GridSpec {
    /// About 10⁴ intervals around a query point.
    pub fn standard(seed: u64) -> Self {
        GridSpec { count: 120, span: Rat::from_int(8), offset: Rat::frac(1, 1_000_000), random_intervals: 4000, seed }
    }

    /// A light grid for property suites.
    pub fn coarse(seed: u64) -> Self {
        GridSpec { count: 12, span: Rat::from_int(4), offset: Rat::frac(1, 1000), random_intervals: 40, seed }
    }

    pub fn empty() -> Self {
        GridSpec { count: 0, span: Rat::one(), offset: Rat::frac(1, 1000), random_intervals: 0, seed: 0 }
    }

    fn endpoints(&self, f: &StepFunction, x: &Rat) -> Vec<Rat> {
        if self.count == 0 {
            return vec![];
        }
        let mut anchors: Vec<Rat> = f.breakpoint_locations().cloned().collect();
        anchors.push(x.clone());
        let lo = anchors.iter().min().expect("x is present") - &self.span;
        let hi = anchors.iter().max().expect("x is present") + &self.span;
        let mut pts: Vec<Rat> = Vec::with_capacity(self.count + 2 * anchors.len());
        let steps = (self.count.max(2) - 1) as i64;
        for i in 0..self.count as i64 {
            pts.push(&lo + (&hi - &lo) * Rat::frac(i, steps) + &self.offset);
        }
        for a in &anchors {
            pts.push(a - &self.offset);
            pts.push(a + &self.offset);
        }
        pts.sort();
        pts.dedup();
        pts
    }
}

/// Lower bound for `M̃f(x)`: the best exact average of `|f|` over the grid's
/// intervals containing `x`, or one of the four limit values. Averages are
/// integrated segment by segment, independent of the engine's primitive.
pub fn oracle_maximal(f: &StepFunction, x: &Rat, grid: &GridSpec) -> Rat {
    let mut best = [
        f.tail_left().abs(),
        f.tail_right().abs(),
        f.eval(x, Side::LeftLimit).abs(),
        f.eval(x, Side::RightLimit).abs(),
    ]
    .into_iter()
    .max()
    .expect("four limits");
    let avg = |a: &Rat, b: &Rat| f.integral_of_modulus(a, b) / (b - a);

    let pts = grid.endpoints(f, x);
    let split = pts.partition_point(|p| p <= x);
    let (lefts, rights) = pts.split_at(split);
    for a in lefts {
        for b in rights {
            best = Rat::max_of(&best, &avg(a, b));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(grid.seed);
    for _ in 0..grid.random_intervals {
        let u = &grid.span * Rat::frac(rng.gen_range(1..=10_000), 10_000);
        let v = &grid.span * Rat::frac(rng.gen_range(1..=10_000), 10_000);
        best = Rat::max_of(&best, &avg(&(x - u), &(x + v)));
    }
    best
}

/// Deterministic pseudo-random step function with at most `n_max` breakpoints.
///
/// Values are `p/q` with `|p| ≤ value_bound`, `1 ≤ q ≤ denom_bound`, and may be
/// negative. Gaps between breakpoints are positive `p/q` with `p ≤ 2·denom_bound`.
/// Point values usually match one side and occasionally stand alone.
pub fn random_stepfn(seed: u64, n_max: usize, value_bound: i64, denom_bound: i64) -> Result<StepFunction> {
    if value_bound <= 0 || denom_bound <= 0 {
        return Err(Error::InvalidArgument(format!(
            "bounds must be positive, got value {value_bound} and denominator {denom_bound}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let value = |rng: &mut ChaCha8Rng| {
        Rat::frac(rng.gen_range(-value_bound..=value_bound), rng.gen_range(1..=denom_bound))
    };
    let n = rng.gen_range(0..=n_max);
    let tail = value(&mut rng);
    let mut at = Rat::frac(rng.gen_range(-4 * denom_bound..=0), rng.gen_range(1..=denom_bound));
    let mut left = tail.clone();
    let mut bps = Vec::with_capacity(n);
    for _ in 0..n {
        at = at + Rat::frac(rng.gen_range(1..=2 * denom_bound), rng.gen_range(1..=denom_bound));
        let right = value(&mut rng);
        let point = match rng.gen_range(0..4) {
            0 => value(&mut rng),
            1 => left.clone(),
            _ => right.clone(),
        };
        bps.push(Breakpoint::new(at.clone(), point, right.clone()));
        left = right;
    }
    StepFunction::new(tail, bps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maximal::maximal_value;
    use crate::stepfn::tests::{r, unit_box};

    #[test]
    fn oracle_examples() {
        let f = unit_box();
        let x = r("2");
        assert!(oracle_maximal(&f, &x, &GridSpec::coarse(1)) <= r("1/2"));
        let gap = |g: &GridSpec| r("1/2") - oracle_maximal(&f, &x, g);
        assert!(gap(&GridSpec::standard(1)) < r("1/1000"));
        assert!(gap(&GridSpec::standard(1)) <= gap(&GridSpec::coarse(1)));
        let k = StepFunction::constant(r("-7"));
        assert_eq!(oracle_maximal(&k, &r("3"), &GridSpec::standard(2)), r("7"));
        assert_eq!(oracle_maximal(&f, &r("1/2"), &GridSpec::empty()), r("1"));
        assert_eq!(oracle_maximal(&f, &x, &GridSpec::empty()), r("0"));
        assert_eq!(oracle_maximal(&f, &r("1"), &GridSpec::empty()), r("1"));
    }

    #[test]
    fn oracle_never_exceeds_engine() {
        for seed in 0..30 {
            let f = random_stepfn(seed, 5, 3, 3).unwrap();
            for i in -6..=6 {
                let x = Rat::frac(i, 2);
                assert!(oracle_maximal(&f, &x, &GridSpec::coarse(seed)) <= maximal_value(&f, &x).value);
            }
        }
    }

    #[test]
    fn generator_examples() {
        assert!(random_stepfn(9, 0, 5, 5).unwrap().is_empty());
        assert_eq!(random_stepfn(42, 8, 5, 5).unwrap(), random_stepfn(42, 8, 5, 5).unwrap());
        assert!(random_stepfn(1, 3, 0, 5).is_err());
        let corpus: Vec<StepFunction> = (0..1000).map(|s| random_stepfn(s, 6, 4, 4).unwrap()).collect();
        assert!(corpus.iter().all(|f| f.len() <= 6));
        let sign_change = corpus.iter().any(|f| {
            let vals: Vec<&Rat> = std::iter::once(f.tail_left()).chain(f.breakpoints().iter().map(|b| &b.right)).collect();
            vals.iter().any(|v| v.is_positive()) && vals.iter().any(|v| v.is_negative())
        });
        let point_jump = corpus.iter().any(|f| {
            f.breakpoints().iter().enumerate().any(|(k, b)| b.value != b.right && &b.value != f.left_constant(k))
        });
        assert!(sign_change && point_jump);
    }
}
