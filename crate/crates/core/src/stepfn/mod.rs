//! Rational step functions with explicit point values at breakpoints.
//!
//! A [`StepFunction`] is described by the constant on `(-∞, x₁)`, and for each
//! breakpoint `x_k` the value `f(x_k)` together with the constant on
//! `(x_k, x_{k+1})`. Point values are first-class: the variation and the BV
//! norm see them, interval averages do not.

mod format;
mod variation;

pub use format::{parse_stepfn, FORMAT_TAG};
pub use variation::{JumpRecord, Partition};

use crate::error::{Error, Result};
use crate::exactnum::Rat;

/// Something that can be evaluated at a rational point.
pub trait PointEval {
    fn value_at(&self, x: &Rat) -> Rat;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Point,
    LeftLimit,
    RightLimit,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Breakpoint {
    pub at: Rat,
    /// `f(at)`
    pub value: Rat,
    /// constant on `(at, next breakpoint)`
    pub right: Rat,
}

impl Breakpoint {
    pub fn new(at: Rat, value: Rat, right: Rat) -> Self {
        Breakpoint { at, value, right }
    }
}

/// Piecewise-constant function on ℝ with finitely many breakpoints.
///
/// Always stored in canonical form: breakpoints strictly increasing and none
/// of them invisible (a breakpoint whose left constant, point value and right
/// constant all agree is dropped).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StepFunction {
    tail_left: Rat,
    breakpoints: Vec<Breakpoint>,
}

impl StepFunction {
    pub fn new(tail_left: Rat, breakpoints: Vec<Breakpoint>) -> Result<Self> {
        for (i, w) in breakpoints.windows(2).enumerate() {
            if w[0].at >= w[1].at {
                return Err(Error::InvalidArgument(format!(
                    "breakpoints must be strictly increasing: #{} = {} is followed by {}",
                    i + 1,
                    w[0].at,
                    w[1].at
                )));
            }
        }
        Ok(Self::canonical(tail_left, breakpoints))
    }

    fn canonical(tail_left: Rat, breakpoints: Vec<Breakpoint>) -> Self {
        let mut kept: Vec<Breakpoint> = Vec::with_capacity(breakpoints.len());
        let mut left = tail_left.clone();
        for bp in breakpoints {
            if bp.value == left && bp.right == left {
                continue;
            }
            left = bp.right.clone();
            kept.push(bp);
        }
        StepFunction { tail_left, breakpoints: kept }
    }

    pub fn constant(c: Rat) -> Self {
        StepFunction { tail_left: c, breakpoints: Vec::new() }
    }

    pub fn zero() -> Self {
        Self::constant(Rat::zero())
    }

    /// `χ_[a,b]`.
    pub fn indicator_closed(a: Rat, b: Rat) -> Result<Self> {
        Self::bump(a, b, Rat::one(), true)
    }

    /// `χ_(a,b)`.
    pub fn indicator_open(a: Rat, b: Rat) -> Result<Self> {
        Self::bump(a, b, Rat::one(), false)
    }

    /// `height · χ` of `[a,b]` (closed) or `(a,b)` (open).
    pub fn bump(a: Rat, b: Rat, height: Rat, closed: bool) -> Result<Self> {
        if a >= b {
            return Err(Error::EmptyInterval { lo: a.to_string(), hi: b.to_string() });
        }
        let edge = if closed { height.clone() } else { Rat::zero() };
        Self::new(
            Rat::zero(),
            vec![
                Breakpoint::new(a, edge.clone(), height),
                Breakpoint::new(b, edge, Rat::zero()),
            ],
        )
    }

    pub fn tail_left(&self) -> &Rat {
        &self.tail_left
    }

    pub fn tail_right(&self) -> &Rat {
        self.breakpoints.last().map_or(&self.tail_left, |bp| &bp.right)
    }

    pub fn breakpoints(&self) -> &[Breakpoint] {
        &self.breakpoints
    }

    pub fn len(&self) -> usize {
        self.breakpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.breakpoints.is_empty()
    }

    pub fn breakpoint_locations(&self) -> impl Iterator<Item = &Rat> + '_ {
        self.breakpoints.iter().map(|bp| &bp.at)
    }

    /// Constant immediately left of breakpoint `k`.
    pub fn left_constant(&self, k: usize) -> &Rat {
        if k == 0 {
            &self.tail_left
        } else {
            &self.breakpoints[k - 1].right
        }
    }

    /// Constant on the k-th open segment: segment 0 is `(-∞, x₁)`, segment `n` is `(x_n, ∞)`.
    pub fn segment_constant(&self, k: usize) -> &Rat {
        self.left_constant(k)
    }

    /// `Ok(k)` if `x` is breakpoint `k`, `Err(k)` if `x` lies in open segment `k`.
    pub fn locate(&self, x: &Rat) -> std::result::Result<usize, usize> {
        self.breakpoints.binary_search_by(|bp| bp.at.cmp(x))
    }

    pub fn eval(&self, x: &Rat, side: Side) -> Rat {
        match self.locate(x) {
            Ok(k) => match side {
                Side::Point => self.breakpoints[k].value.clone(),
                Side::LeftLimit => self.left_constant(k).clone(),
                Side::RightLimit => self.breakpoints[k].right.clone(),
            },
            Err(k) => self.segment_constant(k).clone(),
        }
    }

    /// `α·f + β·g`, canonicalized.
    pub fn linear_combine(f: &StepFunction, g: &StepFunction, alpha: &Rat, beta: &Rat) -> StepFunction {
        let combine = |u: &Rat, v: &Rat| alpha * u + beta * v;
        let mut locations: Vec<&Rat> = f.breakpoint_locations().chain(g.breakpoint_locations()).collect();
        locations.sort();
        locations.dedup();
        let bps = locations
            .into_iter()
            .map(|x| {
                Breakpoint::new(
                    x.clone(),
                    combine(&f.eval(x, Side::Point), &g.eval(x, Side::Point)),
                    combine(&f.eval(x, Side::RightLimit), &g.eval(x, Side::RightLimit)),
                )
            })
            .collect();
        Self::canonical(combine(&f.tail_left, &g.tail_left), bps)
    }

    pub fn add(&self, other: &StepFunction) -> StepFunction {
        Self::linear_combine(self, other, &Rat::one(), &Rat::one())
    }

    pub fn sub(&self, other: &StepFunction) -> StepFunction {
        Self::linear_combine(self, other, &Rat::one(), &-Rat::one())
    }

    pub fn scale(&self, k: &Rat) -> StepFunction {
        self.map_values(|v| k * v)
    }

    fn map_values(&self, op: impl Fn(&Rat) -> Rat) -> StepFunction {
        let bps = self
            .breakpoints
            .iter()
            .map(|bp| Breakpoint::new(bp.at.clone(), op(&bp.value), op(&bp.right)))
            .collect();
        Self::canonical(op(&self.tail_left), bps)
    }

    /// Pointwise `|f|`.
    pub fn modulus(&self) -> StepFunction {
        self.map_values(Rat::abs)
    }

    /// `|f|` with each point value replaced by the larger adjacent constant:
    /// the limsup of averages of `|f|` over intervals shrinking to the point.
    pub fn adjusted_modulus(&self) -> StepFunction {
        let bps = self
            .breakpoints
            .iter()
            .enumerate()
            .map(|(k, bp)| {
                let left = self.left_constant(k).abs();
                let right = bp.right.abs();
                Breakpoint::new(bp.at.clone(), Rat::max_of(&left, &right), right)
            })
            .collect();
        Self::canonical(self.tail_left.abs(), bps)
    }

    /// Largest absolute value attained anywhere, point values included.
    pub fn sup_abs(&self) -> Rat {
        self.breakpoints
            .iter()
            .flat_map(|bp| [bp.value.abs(), bp.right.abs()])
            .fold(self.tail_left.abs(), |m, v| Rat::max_of(&m, &v))
    }

    /// `∫_a^b |f|` for finite `a <= b`.
    pub fn integral_of_modulus(&self, a: &Rat, b: &Rat) -> Rat {
        debug_assert!(a <= b);
        let mut total = Rat::zero();
        let mut cursor = a.clone();
        let start = match self.locate(a) {
            Ok(k) => k,
            Err(k) => k,
        };
        for k in start..=self.breakpoints.len() {
            let seg_end = self.breakpoints.get(k).map(|bp| &bp.at);
            let stop = match seg_end {
                Some(e) if e < b => e.clone(),
                _ => b.clone(),
            };
            if stop > cursor {
                total += (&stop - &cursor) * self.segment_constant(k).abs();
                cursor = stop;
            }
            if cursor == *b {
                break;
            }
        }
        total
    }
}

/// `t ↦ ∫_{x₁}^t |f|` (negative left of the first breakpoint), with the values
/// at breakpoints tabulated so each evaluation is a binary search.
#[derive(Clone, Debug)]
pub struct ModulusPrimitive {
    origin: Rat,
    at_breakpoints: Vec<Rat>,
    locations: Vec<Rat>,
    slopes: Vec<Rat>,
}

impl ModulusPrimitive {
    pub fn new(f: &StepFunction) -> Self {
        let locations: Vec<Rat> = f.breakpoint_locations().cloned().collect();
        let slopes: Vec<Rat> = (0..=f.len()).map(|k| f.segment_constant(k).abs()).collect();
        let origin = locations.first().cloned().unwrap_or_else(Rat::zero);
        let mut at_breakpoints = Vec::with_capacity(locations.len());
        let mut acc = Rat::zero();
        for (k, x) in locations.iter().enumerate() {
            if k > 0 {
                acc += (x - &locations[k - 1]) * &slopes[k];
            }
            at_breakpoints.push(acc.clone());
        }
        ModulusPrimitive { origin, at_breakpoints, locations, slopes }
    }

    pub fn at(&self, t: &Rat) -> Rat {
        match self.locations.binary_search(t) {
            Ok(k) => self.at_breakpoints[k].clone(),
            Err(0) => (t - &self.origin) * &self.slopes[0],
            Err(k) => &self.at_breakpoints[k - 1] + (t - &self.locations[k - 1]) * &self.slopes[k],
        }
    }

    /// `∫_a^b |f|`.
    pub fn integral(&self, a: &Rat, b: &Rat) -> Rat {
        self.at(b) - self.at(a)
    }

    /// Average of `|f|` over `(a, b)`, `a < b`.
    pub fn average(&self, a: &Rat, b: &Rat) -> Rat {
        self.integral(a, b) / (b - a)
    }
}

impl PointEval for StepFunction {
    fn value_at(&self, x: &Rat) -> Rat {
        self.eval(x, Side::Point)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    /// χ_[0,1] with point values 1 at both ends.
    pub(crate) fn unit_box() -> StepFunction {
        StepFunction::indicator_closed(Rat::zero(), Rat::one()).unwrap()
    }

    pub(crate) fn two_bump() -> StepFunction {
        StepFunction::indicator_open(r("0"), r("1"))
            .unwrap()
            .add(&StepFunction::indicator_open(r("2"), r("3")).unwrap())
    }

    /// tail 1, at 0: value 1, right -1.
    pub(crate) fn sign_flip() -> StepFunction {
        StepFunction::new(Rat::one(), vec![Breakpoint::new(r("0"), r("1"), r("-1"))]).unwrap()
    }

    #[test]
    fn eval_sides() {
        let f = unit_box();
        assert_eq!(f.eval(&r("0"), Side::LeftLimit), r("0"));
        assert_eq!(f.eval(&r("0"), Side::Point), r("1"));
        assert_eq!(f.eval(&r("1/2"), Side::Point), r("1"));
        assert_eq!(f.eval(&r("1"), Side::RightLimit), r("0"));
        for side in [Side::Point, Side::LeftLimit, Side::RightLimit] {
            assert_eq!(f.eval(&r("5"), side), r("0"));
            assert_eq!(f.eval(&r("1/3"), side), r("1"));
        }
    }

    #[test]
    fn linear_combination_examples() {
        let f = unit_box();
        let g = two_bump();
        assert_eq!(StepFunction::linear_combine(&f, &g, &Rat::one(), &Rat::zero()), f);
        assert_eq!(f.sub(&f), StepFunction::zero());
        assert!(f.sub(&f).is_empty());
        let bumps = f.add(&StepFunction::indicator_closed(r("2"), r("3")).unwrap());
        assert_eq!(bumps.len(), 4);
    }

    #[test]
    fn non_increasing_breakpoints_are_rejected() {
        let bps = vec![
            Breakpoint::new(r("1"), r("0"), r("1")),
            Breakpoint::new(r("1"), r("0"), r("0")),
        ];
        assert!(StepFunction::new(Rat::zero(), bps).is_err());
    }

    #[test]
    fn canonical_form_drops_invisible_breakpoints() {
        let f = StepFunction::new(
            r("2"),
            vec![Breakpoint::new(r("0"), r("2"), r("2")), Breakpoint::new(r("1"), r("2"), r("3"))],
        )
        .unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.breakpoints()[0].at, r("1"));
    }

    #[test]
    fn modulus_examples() {
        let f = sign_flip();
        let m = f.modulus();
        assert!(m.is_empty(), "|f| is the constant 1, got {m:?}");
        // sampled pointwise check
        for i in -50..50 {
            let x = Rat::frac(i, 25);
            assert_eq!(m.value_at(&x), f.value_at(&x).abs());
        }
        assert_eq!(unit_box().modulus(), unit_box());
        assert_eq!(unit_box().scale(&r("-1")).modulus(), unit_box());
    }

    #[test]
    fn adjusted_modulus_examples() {
        assert_eq!(unit_box().adjusted_modulus().value_at(&r("0")), r("1"));
        let spike = StepFunction::new(Rat::zero(), vec![Breakpoint::new(r("0"), r("5"), r("1"))]).unwrap();
        assert_eq!(spike.adjusted_modulus().value_at(&r("0")), r("1"));
        let c = StepFunction::constant(r("-3/2"));
        assert_eq!(c.adjusted_modulus(), StepFunction::constant(r("3/2")));
    }

    #[test]
    fn integral_of_modulus_across_pieces() {
        let f = two_bump().sub(&unit_box().scale(&r("3")));
        // |f| = 2 on (0,1), 1 on (2,3)
        assert_eq!(f.integral_of_modulus(&r("-1"), &r("4")), r("3"));
        assert_eq!(f.integral_of_modulus(&r("1/2"), &r("5/2")), r("3/2"));
        assert_eq!(f.integral_of_modulus(&r("1"), &r("2")), r("0"));
        assert_eq!(f.integral_of_modulus(&r("1/4"), &r("1/4")), r("0"));
        let prim = ModulusPrimitive::new(&f);
        for (a, b) in [("-1", "4"), ("1/2", "5/2"), ("1", "2"), ("-3", "-1"), ("7/2", "9"), ("1/3", "2/3")] {
            assert_eq!(prim.integral(&r(a), &r(b)), f.integral_of_modulus(&r(a), &r(b)), "({a},{b})");
        }
    }
}
