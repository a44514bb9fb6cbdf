use crate::envelope::MaximalProfile;
use crate::error::{Error, Result};
use crate::exactnum::{AlgebraicValue, Rat};
use crate::stepfn::{Partition, PointEval, StepFunction};

#[derive(Clone, Copy, Debug)]
pub enum PartitionTarget<'a> {
    Profile(&'a MaximalProfile),
    Step(&'a StepFunction),
}

impl PointEval for PartitionTarget<'_> {
    fn value_at(&self, x: &Rat) -> Rat {
        match self {
            PartitionTarget::Profile(p) => p.value(x),
            PartitionTarget::Step(f) => f.value_at(x),
        }
    }
}

/// Keeps only turning points so consecutive increments alternate in sign.
/// The partition variation is unchanged: dropped points sat inside monotone runs.
fn turning_points(points: Vec<Rat>, g: &impl PointEval) -> Vec<Rat> {
    let mut kept: Vec<(Rat, Rat)> = Vec::with_capacity(points.len());
    let mut dir = 0;
    for x in points {
        let v = g.value_at(&x);
        let Some((_, last)) = kept.last() else {
            kept.push((x, v));
            continue;
        };
        let step = (&v - last).signum();
        if step == 0 {
            continue;
        }
        if step == dir {
            *kept.last_mut().expect("nonempty") = (x, v);
        } else {
            kept.push((x, v));
            dir = step;
        }
    }
    kept.into_iter().map(|(x, _)| x).collect()
}

/// Candidate points inside `(a, b)` where a step function takes each of its
/// values: every breakpoint and the plateaus `δ` to either side, with `δ` a
/// quarter of the smallest gap among `a`, the inner breakpoints and `b`.
fn step_points(f: &StepFunction, a: &Rat, b: &Rat) -> Vec<Rat> {
    let inner: Vec<&Rat> = f.breakpoint_locations().filter(|x| *x > a && *x < b).collect();
    if inner.is_empty() {
        let third = (b - a) / Rat::from_int(3);
        return vec![a + &third, b - &third];
    }
    let mut marks = vec![a];
    marks.extend(inner.iter().copied());
    marks.push(b);
    let delta = marks.windows(2).map(|w| w[1] - w[0]).min().expect("two marks") / Rat::from_int(4);
    inner.iter().flat_map(|x| [*x - &delta, (*x).clone(), *x + &delta]).collect()
}

/// A partition of `[a, b]` with property (V) (or two points) whose variation is
/// within `ε` of `Var_(a,b)`. Profiles are monotone between junctions, which
/// are rational, so sampling `a`, the inner junctions and `b` captures the
/// variation exactly.
pub fn alternating_partition(target: PartitionTarget<'_>, a: &Rat, b: &Rat, eps: &Rat) -> Result<Partition> {
    if !eps.is_positive() {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {eps}")));
    }
    if a >= b {
        return Err(Error::EmptyInterval { lo: a.to_string(), hi: b.to_string() });
    }
    let points = match target {
        PartitionTarget::Step(f) => step_points(f, a, b),
        PartitionTarget::Profile(p) => {
            let mut pts = vec![a.clone()];
            for j in p.junctions() {
                if j.cmp_rat(a).is_gt() && j.cmp_rat(b).is_lt() {
                    pts.push(junction_point(&j, eps));
                }
            }
            pts.push(b.clone());
            pts.sort();
            pts.dedup();
            pts
        }
    };
    let kept = turning_points(points.clone(), &target);
    if kept.len() >= 2 {
        Partition::new(kept)
    } else {
        Partition::new(vec![points[0].clone(), points[points.len() - 1].clone()])
    }
}

/// Junctions are rational (crossings of same-segment candidates solve linear
/// equations); the surd branch is a fallback that samples beside the point.
fn junction_point(j: &AlgebraicValue, eps: &Rat) -> Rat {
    match j.as_rat() {
        Some(r) => r.clone(),
        None => j.refine_to(&eps.square()).midpoint(),
    }
}
