//! Pointwise evaluation of the uncentered maximal function
//! `M̃f(x) = sup { avg_I |f| : I ∋ x }`.
//!
//! # Why a finite candidate set suffices
//!
//! Fix the right endpoint `b`. On a constancy piece of `|f|` (value `c`) the
//! average `a ↦ (F(b) - F(a)) / (b - a)` is a Möbius function of `a` with
//! linear numerator, hence monotone on that piece. Its supremum over the piece
//! is therefore reached at a piece end: a breakpoint, the query point `x`, or
//! the limit `a → -∞`. The same holds for `b` with `a` fixed. Taking the
//! supremum in `a` first and then in `b` shows that
//!
//! - finite intervals `(a, b)` with `a ∈ {breakpoints ≤ x} ∪ {x}` and
//!   `b ∈ {breakpoints ≥ x} ∪ {x}`,
//! - the one-sided shrinking limits `|f|(x⁻)`, `|f|(x⁺)`,
//! - the tail limits `|f|(-∞)`, `|f|(∞)` (an interval growing to one side
//!   averages to the tail constant on that side),
//!
//! exhaust every value the supremum can take, so `M̃f(x)` is their maximum.

use std::cmp::Ordering;
use std::fmt;

use crate::exactnum::Rat;
use crate::stepfn::{ModulusPrimitive, Side, StepFunction};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    Finite { a: Rat, b: Rat },
    /// intervals `(x - h, x)` with `h → 0`
    ShrinkLeft,
    /// intervals `(x, x + h)` with `h → 0`
    ShrinkRight,
    /// intervals `(-R, x)` with `R → ∞`
    TailLeft,
    /// intervals `(x, R)` with `R → ∞`
    TailRight,
}

impl WitnessKind {
    fn limit_rank(&self) -> u8 {
        match self {
            WitnessKind::Finite { .. } => 0,
            WitnessKind::TailLeft => 1,
            WitnessKind::TailRight => 2,
            WitnessKind::ShrinkLeft => 3,
            WitnessKind::ShrinkRight => 4,
        }
    }

    pub fn length(&self) -> Option<Rat> {
        match self {
            WitnessKind::Finite { a, b } => Some(b - a),
            _ => None,
        }
    }
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessKind::Finite { a, b } => write!(f, "finite({a},{b})"),
            WitnessKind::ShrinkLeft => write!(f, "shrink_left"),
            WitnessKind::ShrinkRight => write!(f, "shrink_right"),
            WitnessKind::TailLeft => write!(f, "tail_left"),
            WitnessKind::TailRight => write!(f, "tail_right"),
        }
    }
}

/// An interval (or limit of intervals) together with the average it realizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessInterval {
    pub kind: WitnessKind,
    pub value: Rat,
}

impl WitnessInterval {
    /// Deterministic preference among equal values: finite before limits,
    /// shorter before longer, leftmost first; limits in the order
    /// tail_left, tail_right, shrink_left, shrink_right.
    fn preference(&self, other: &Self) -> Ordering {
        match (&self.kind, &other.kind) {
            (WitnessKind::Finite { a: a1, b: b1 }, WitnessKind::Finite { a: a2, b: b2 }) => {
                (b1 - a1).cmp(&(b2 - a2)).then_with(|| a1.cmp(a2))
            }
            (k1, k2) => k1.limit_rank().cmp(&k2.limit_rank()),
        }
    }

    /// True if `self` should be reported instead of `other`.
    fn beats(&self, other: &Self) -> bool {
        match self.value.cmp(&other.value) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => self.preference(other) == Ordering::Less,
        }
    }

    pub fn is_one_sided_at(&self, x: &Rat) -> bool {
        matches!(&self.kind, WitnessKind::Finite { a, b } if a == x || b == x)
    }
}

impl fmt::Display for WitnessInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalValue {
    pub value: Rat,
    pub witness: WitnessInterval,
    /// A finite witness with an endpoint at `x`, recorded whenever the value
    /// exceeds both `|f|‾(x)` and the limit at infinity.
    pub one_sided_witness: Option<WitnessInterval>,
}

/// `max(|f|(∞), |f|(-∞))`, the common limit of `M̃f` at both infinities.
pub fn maximal_limit_at_infinity(f: &StepFunction) -> Rat {
    Rat::max_of(&f.tail_left().abs(), &f.tail_right().abs())
}

/// All candidate intervals for `M̃f(x)` with their exact averages.
pub fn candidate_set(f: &StepFunction, x: &Rat) -> Vec<WitnessInterval> {
    candidates_with(f, &ModulusPrimitive::new(f), x)
}

fn candidates_with(f: &StepFunction, prim: &ModulusPrimitive, x: &Rat) -> Vec<WitnessInterval> {
    let mut lefts: Vec<&Rat> = f.breakpoint_locations().filter(|p| *p <= x).collect();
    let mut rights: Vec<&Rat> = f.breakpoint_locations().filter(|p| *p >= x).collect();
    if lefts.last() != Some(&x) {
        lefts.push(x);
    }
    if rights.first() != Some(&x) {
        rights.insert(0, x);
    }
    let mut out = Vec::with_capacity(lefts.len() * rights.len() + 4);
    for a in &lefts {
        for b in &rights {
            if a < b {
                out.push(WitnessInterval {
                    kind: WitnessKind::Finite { a: (*a).clone(), b: (*b).clone() },
                    value: prim.average(a, b),
                });
            }
        }
    }
    let limits = [
        (WitnessKind::TailLeft, f.tail_left().abs()),
        (WitnessKind::TailRight, f.tail_right().abs()),
        (WitnessKind::ShrinkLeft, f.eval(x, Side::LeftLimit).abs()),
        (WitnessKind::ShrinkRight, f.eval(x, Side::RightLimit).abs()),
    ];
    out.extend(limits.into_iter().map(|(kind, value)| WitnessInterval { kind, value }));
    out
}

fn best<'a>(it: impl Iterator<Item = &'a WitnessInterval>) -> Option<&'a WitnessInterval> {
    it.fold(None, |acc: Option<&WitnessInterval>, w| match acc {
        Some(cur) if !w.beats(cur) => Some(cur),
        _ => Some(w),
    })
}

/// Exact `M̃f(x)` with its witness.
pub fn maximal_value(f: &StepFunction, x: &Rat) -> MaximalValue {
    MaximalEvaluator::new(f).value(x)
}

/// Evaluates `M̃f` repeatedly for one function, sharing the tabulated primitive.
pub struct MaximalEvaluator<'f> {
    f: &'f StepFunction,
    prim: ModulusPrimitive,
    at_infinity: Rat,
}

impl<'f> MaximalEvaluator<'f> {
    pub fn new(f: &'f StepFunction) -> Self {
        MaximalEvaluator { f, prim: ModulusPrimitive::new(f), at_infinity: maximal_limit_at_infinity(f) }
    }

    pub fn function(&self) -> &StepFunction {
        self.f
    }

    pub fn primitive(&self) -> &ModulusPrimitive {
        &self.prim
    }

    pub fn value(&self, x: &Rat) -> MaximalValue {
        let cands = candidates_with(self.f, &self.prim, x);
        let witness = best(cands.iter()).expect("candidate set is never empty").clone();
        let value = witness.value.clone();
        let adjusted = adjusted_modulus_at(self.f, x);
        let one_sided_witness = if value > adjusted && value > self.at_infinity {
            let found = best(cands.iter().filter(|w| w.value == value && w.is_one_sided_at(x))).cloned();
            debug_assert!(found.is_some(), "no one-sided witness at {x} for {:?}", self.f);
            found
        } else {
            None
        };
        MaximalValue { value, witness, one_sided_witness }
    }
}

/// `|f|‾(x)`: larger adjacent constant at a breakpoint, `|f|(x)` elsewhere.
pub fn adjusted_modulus_at(f: &StepFunction, x: &Rat) -> Rat {
    match f.locate(x) {
        Ok(k) => Rat::max_of(&f.left_constant(k).abs(), &f.breakpoints()[k].right.abs()),
        Err(k) => f.segment_constant(k).abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stepfn::tests::{r, two_bump, unit_box};
    use crate::stepfn::Breakpoint;

    /// Lower bound from a dense grid of interval endpoints, computed directly.
    fn grid_sup(f: &StepFunction, x: &Rat, span: i64, steps: i64) -> Rat {
        let mut best = Rat::zero();
        for i in 0..=steps {
            for j in 0..=steps {
                if i == 0 && j == 0 {
                    continue;
                }
                let a = x - Rat::frac(span * i, steps);
                let b = x + Rat::frac(span * j, steps);
                let avg = f.integral_of_modulus(&a, &b) / (&b - &a);
                best = Rat::max_of(&best, &avg);
            }
        }
        best
    }

    #[test]
    fn candidate_set_examples() {
        let cands = candidate_set(&unit_box(), &r("2"));
        assert!(cands.contains(&WitnessInterval {
            kind: WitnessKind::Finite { a: r("0"), b: r("2") },
            value: r("1/2")
        }));
        assert!(cands.contains(&WitnessInterval { kind: WitnessKind::TailRight, value: r("0") }));
        let c = StepFunction::constant(r("-4"));
        assert!(candidate_set(&c, &r("3")).iter().all(|w| w.value == r("4")));
        let mid = candidate_set(&unit_box(), &r("1/2"));
        assert!(mid.iter().any(|w| w.kind == WitnessKind::Finite { a: r("0"), b: r("1") } && w.value == r("1")));
    }

    #[test]
    fn maximal_value_examples() {
        let m = maximal_value(&unit_box(), &r("2"));
        assert_eq!(m.value, r("1/2"));
        assert_eq!(m.witness.kind, WitnessKind::Finite { a: r("0"), b: r("2") });
        assert_eq!(m.witness.to_string(), "finite(0,2)");
        // grid oracle: (0,2) is on the grid, so it matches
        assert_eq!(grid_sup(&unit_box(), &r("2"), 4, 8), r("1/2"));

        assert_eq!(maximal_value(&unit_box(), &r("1/2")).value, r("1"));

        let m = maximal_value(&two_bump(), &r("3/2"));
        assert_eq!(m.value, r("2/3"));
        assert_eq!(m.witness.kind, WitnessKind::Finite { a: r("0"), b: r("3/2") });
        assert_eq!(grid_sup(&two_bump(), &r("3/2"), 3, 12), r("2/3"));
        assert!(m.one_sided_witness.is_some());
    }

    #[test]
    fn constant_reports_tail_left() {
        let m = maximal_value(&StepFunction::constant(r("5")), &r("0"));
        assert_eq!(m.value, r("5"));
        assert_eq!(m.witness.kind, WitnessKind::TailLeft);
        assert_eq!(m.one_sided_witness, None);
    }

    #[test]
    fn limits_at_infinity() {
        assert_eq!(maximal_limit_at_infinity(&unit_box()), r("0"));
        let left_half = StepFunction::new(Rat::one(), vec![Breakpoint::new(r("0"), r("0"), r("0"))]).unwrap();
        assert_eq!(maximal_limit_at_infinity(&left_half), r("1"));
        let tails = StepFunction::new(r("-2"), vec![Breakpoint::new(r("0"), r("0"), r("1"))]).unwrap();
        assert_eq!(maximal_limit_at_infinity(&tails), r("2"));
    }

    #[test]
    fn point_values_are_invisible() {
        let spiky = StepFunction::new(
            Rat::zero(),
            vec![Breakpoint::new(r("0"), r("9"), r("1")), Breakpoint::new(r("1"), r("-9"), r("0"))],
        )
        .unwrap();
        for x in ["-1", "0", "1/2", "1", "3"] {
            assert_eq!(maximal_value(&spiky, &r(x)).value, maximal_value(&unit_box(), &r(x)).value);
        }
    }

    #[test]
    fn adjusted_modulus_pointwise() {
        let f = StepFunction::new(r("-3"), vec![Breakpoint::new(r("0"), r("7"), r("1"))]).unwrap();
        assert_eq!(adjusted_modulus_at(&f, &r("0")), r("3"));
        assert_eq!(adjusted_modulus_at(&f, &r("1")), r("1"));
        assert_eq!(adjusted_modulus_at(&f, &r("-1")), r("3"));
    }
}
