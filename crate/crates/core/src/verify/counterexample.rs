//! A sequence with `‖f_n − f‖_BV → 0` but `‖M̃f_n − M̃f‖_BV ≥ 2`.
//!
//! `f = χ_{(−∞,0) ∪ A}` with `A = ⋃_{k≥1} (4k−2, 4k)` and
//! `f_n = f + (1/n)·χ_{(0, 4n+2)}`. Only bumps with `k ≤ K` are kept, `K ≥ n+1`.
//! Truncating is harmless for every asserted value: `M̃f ≡ 1` already follows
//! from the left tail, the bumps beyond `4n+2` lie outside the perturbation,
//! and dropping bumps only lowers averages, which the upper bounds tolerate
//! while the exact values `1 + 1/n` are attained on single bumps.

use std::fmt;

use crate::envelope::{bv_distance, VariationEnclosure};
use crate::error::{Error, Result};
use crate::exactnum::Rat;
use crate::maximal::MaximalEvaluator;
use crate::stepfn::{Breakpoint, Partition, PointEval, StepFunction};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportLine {
    pub label: String,
    pub detail: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterexampleReport {
    pub n: u32,
    pub truncation: u32,
    pub bv_distance: VariationEnclosure,
    pub lines: Vec<ReportLine>,
}

impl CounterexampleReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }
}

impl fmt::Display for CounterexampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "counterexample n = {} K = {}", self.n, self.truncation)?;
        for line in &self.lines {
            let verdict = if line.pass { "PASS" } else { "FAIL" };
            writeln!(f, "# {}", line.detail)?;
            writeln!(f, "{} : {verdict}", line.label)?;
        }
        Ok(())
    }
}

/// `(f, f_n)` for the given `n` and truncation `K`.
pub fn counterexample_pair(n: u32, truncation: u32) -> Result<(StepFunction, StepFunction)> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("n must be at least 3, got {n}")));
    }
    if truncation < n + 1 {
        return Err(Error::InvalidArgument(format!("K must be at least n + 1 = {}, got {truncation}", n + 1)));
    }
    let zero = Rat::zero;
    let mut bps = vec![Breakpoint::new(zero(), zero(), zero())];
    for k in 1..=truncation as i64 {
        bps.push(Breakpoint::new(Rat::from_int(4 * k - 2), zero(), Rat::one()));
        bps.push(Breakpoint::new(Rat::from_int(4 * k), zero(), zero()));
    }
    let f = StepFunction::new(Rat::one(), bps)?;
    let bump = StepFunction::indicator_open(zero(), Rat::from_int(4 * n as i64 + 2))?;
    let fn_ = StepFunction::linear_combine(&f, &bump, &Rat::one(), &Rat::frac(1, n as i64));
    Ok((f, fn_))
}

struct Difference<'a>(&'a MaximalEvaluator<'a>, &'a MaximalEvaluator<'a>);

impl PointEval for Difference<'_> {
    fn value_at(&self, x: &Rat) -> Rat {
        self.0.value(x).value - self.1.value(x).value
    }
}

/// Builds the pair and checks every claimed value exactly.
pub fn counterexample(n: u32, truncation: u32, precision: &Rat) -> Result<CounterexampleReport> {
    let (f, fn_) = counterexample_pair(n, truncation)?;
    let (mf, mfn) = (MaximalEvaluator::new(&f), MaximalEvaluator::new(&fn_));
    let ni = n as i64;
    let inv_n = Rat::frac(1, ni);
    let mut lines = Vec::new();
    let mut line = |label: String, detail: String, pass: bool| lines.push(ReportLine { label, detail, pass });

    let norm = fn_.sub(&f).bv_norm();
    line(format!("bv_norm(f_{n} - f) = 2/{n}"), norm.to_string(), norm == Rat::frac(2, ni));

    // 50 points spread over [-3, 4K + 3]
    let span = Rat::from_int(4 * truncation as i64 + 6);
    let samples: Vec<Rat> = (0..50).map(|i| Rat::from_int(-3) + &span * Rat::frac(i, 49)).collect();
    let off: Vec<&Rat> = samples.iter().filter(|x| mf.value(x).value != Rat::one()).collect();
    line(
        "Mf = 1 at 50 samples".into(),
        format!("{} mismatches", off.len()),
        off.is_empty(),
    );

    let peak = Rat::one() + &inv_n;
    let peaks: Vec<Rat> = (1..=ni).map(|k| mfn.value(&Rat::from_int(4 * k - 1)).value).collect();
    line(
        format!("Mf_{n}(4k-1) = 1 + 1/{n}, k = 1..{n}"),
        peaks.iter().map(Rat::to_string).collect::<Vec<_>>().join(","),
        peaks.iter().all(|v| *v == peak),
    );

    let valleys: Vec<Rat> = (0..=ni).map(|k| mfn.value(&Rat::from_int(4 * k + 1)).value).collect();
    line(
        format!("Mf_{n}(4k+1) <= 1, k = 0..{n}"),
        valleys.iter().map(Rat::to_string).collect::<Vec<_>>().join(","),
        valleys.iter().all(|v| *v <= Rat::one()),
    );

    let dist = bv_distance(&fn_, &f, precision)?;
    line(
        format!("bv_distance(f_{n}, f) >= 2"),
        format!("{}..{}", dist.lo, dist.hi),
        dist.lo >= Rat::from_int(2),
    );

    let partition = Partition::new((0..=2 * ni).map(|i| Rat::from_int(2 * i + 1)).collect())?;
    let var = partition.variation_of(&Difference(&mfn, &mf));
    line(format!("Var(P_{n}) >= 2"), var.to_string(), var >= Rat::from_int(2));

    Ok(CounterexampleReport { n, truncation, bv_distance: dist, lines })
}
