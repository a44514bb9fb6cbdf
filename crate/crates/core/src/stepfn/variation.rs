use super::{PointEval, StepFunction};
use crate::error::{Error, Result};
use crate::exactnum::{Ext, Rat};

/// Jumps of `f` and of `|f|` at one breakpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JumpRecord {
    pub location: Rat,
    /// `|f(x) - f(x⁻)|`
    pub left_jump: Rat,
    /// `|f(x) - f(x⁺)|`
    pub right_jump: Rat,
    /// `||f|(x) - |f|(x⁻)|`
    pub modulus_left_jump: Rat,
    /// `||f|(x) - |f|(x⁺)|`
    pub modulus_right_jump: Rat,
}

impl JumpRecord {
    /// What the jump loses when passing to `|f|`.
    pub fn defect(&self) -> Rat {
        &self.left_jump - &self.modulus_left_jump + &self.right_jump - &self.modulus_right_jump
    }
}

/// Finite strictly increasing set of at least two points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    points: Vec<Rat>,
}

impl Partition {
    pub fn new(points: Vec<Rat>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "a partition needs at least two points, got {}",
                points.len()
            )));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("partition points must be strictly increasing".into()));
        }
        Ok(Partition { points })
    }

    pub fn points(&self) -> &[Rat] {
        &self.points
    }

    pub fn first(&self) -> &Rat {
        &self.points[0]
    }

    pub fn last(&self) -> &Rat {
        &self.points[self.points.len() - 1]
    }

    /// `Σ |g(a_i) - g(a_{i-1})|`.
    pub fn variation_of(&self, g: &impl PointEval) -> Rat {
        let values: Vec<Rat> = self.points.iter().map(|x| g.value_at(x)).collect();
        values.windows(2).map(|w| (&w[1] - &w[0]).abs()).sum()
    }

    /// Consecutive increments of `g` strictly alternate in sign (zero increments fail).
    pub fn has_property_v(&self, g: &impl PointEval) -> bool {
        let values: Vec<Rat> = self.points.iter().map(|x| g.value_at(x)).collect();
        let signs: Vec<i32> = values.windows(2).map(|w| (&w[1] - &w[0]).signum()).collect();
        signs.windows(2).all(|s| s[0] * s[1] < 0)
    }
}

fn check_interval(a: &Ext<Rat>, b: &Ext<Rat>) -> Result<()> {
    if a >= b || *a == Ext::PosInf || *b == Ext::NegInf {
        return Err(Error::EmptyInterval { lo: a.to_string(), hi: b.to_string() });
    }
    Ok(())
}

fn strictly_inside(x: &Rat, a: &Ext<Rat>, b: &Ext<Rat>) -> bool {
    let above = match a {
        Ext::Finite(a) => x > a,
        Ext::NegInf => true,
        Ext::PosInf => false,
    };
    let below = match b {
        Ext::Finite(b) => x < b,
        Ext::PosInf => true,
        Ext::NegInf => false,
    };
    above && below
}

impl StepFunction {
    /// `Var_(a,b)(f)`: the jumps at breakpoints strictly inside the open interval.
    pub fn variation_on(&self, a: &Ext<Rat>, b: &Ext<Rat>) -> Result<Rat> {
        check_interval(a, b)?;
        Ok(self
            .breakpoints
            .iter()
            .enumerate()
            .filter(|(_, bp)| strictly_inside(&bp.at, a, b))
            .map(|(k, bp)| (&bp.value - self.left_constant(k)).abs() + (&bp.right - &bp.value).abs())
            .sum())
    }

    pub fn total_variation(&self) -> Rat {
        self.variation_on(&Ext::NegInf, &Ext::PosInf).expect("(-inf, inf) is nonempty")
    }

    /// `|f(-∞)| + Var(f)`.
    pub fn bv_norm(&self) -> Rat {
        self.tail_left.abs() + self.total_variation()
    }

    pub fn variation_on_partition(&self, partition: &Partition) -> Rat {
        partition.variation_of(self)
    }

    /// One record per breakpoint where `f` jumps on at least one side.
    pub fn jump_sets(&self) -> Vec<JumpRecord> {
        self.breakpoints
            .iter()
            .enumerate()
            .filter_map(|(k, bp)| {
                let left = self.left_constant(k);
                let rec = JumpRecord {
                    location: bp.at.clone(),
                    left_jump: (&bp.value - left).abs(),
                    right_jump: (&bp.value - &bp.right).abs(),
                    modulus_left_jump: (bp.value.abs() - left.abs()).abs(),
                    modulus_right_jump: (bp.value.abs() - bp.right.abs()).abs(),
                };
                (rec.left_jump.is_positive() || rec.right_jump.is_positive()).then_some(rec)
            })
            .collect()
    }

    /// Sum of jump defects `|Δf| - |Δ|f||` over jumps strictly inside `(a, b)`.
    pub fn modulus_defect(&self, a: &Ext<Rat>, b: &Ext<Rat>) -> Result<Rat> {
        check_interval(a, b)?;
        Ok(self
            .jump_sets()
            .iter()
            .filter(|j| strictly_inside(&j.location, a, b))
            .map(JumpRecord::defect)
            .sum())
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{r, sign_flip, two_bump, unit_box};
    use super::super::Breakpoint;
    use super::*;

    const ALL: (Ext<Rat>, Ext<Rat>) = (Ext::NegInf, Ext::PosInf);

    fn fin(s: &str) -> Ext<Rat> {
        Ext::Finite(r(s))
    }

    /// Independent check: the sup over partitions is reached by sampling each
    /// breakpoint and the midpoints of the segments around it.
    fn sweep_variation(f: &StepFunction, lo: &Rat, hi: &Rat) -> Rat {
        let mut pts: Vec<Rat> = vec![];
        let inner: Vec<&Rat> = f.breakpoint_locations().filter(|x| *x > lo && *x < hi).collect();
        let mut marks: Vec<Rat> = vec![lo.clone()];
        marks.extend(inner.iter().map(|x| (*x).clone()));
        marks.push(hi.clone());
        for w in marks.windows(2) {
            pts.push(w[0].clone());
            pts.push(Rat::midpoint(&w[0], &w[1]));
        }
        pts.remove(0);
        Partition::new(pts).map(|p| p.variation_of(f)).unwrap_or_else(|_| Rat::zero())
    }

    #[test]
    fn variation_examples() {
        assert_eq!(unit_box().variation_on(&ALL.0, &ALL.1).unwrap(), r("2"));
        assert_eq!(sweep_variation(&unit_box(), &r("-10"), &r("10")), r("2"));
        assert_eq!(two_bump().variation_on(&ALL.0, &ALL.1).unwrap(), r("4"));
        assert_eq!(sweep_variation(&two_bump(), &r("-10"), &r("10")), r("4"));
        assert_eq!(unit_box().variation_on(&fin("0"), &fin("1")).unwrap(), r("0"));
        assert!(unit_box().variation_on(&fin("1"), &fin("1")).is_err());
        assert!(unit_box().variation_on(&fin("2"), &fin("1")).is_err());
        assert!(unit_box().variation_on(&Ext::PosInf, &Ext::PosInf).is_err());
    }

    #[test]
    fn bv_norm_examples() {
        assert_eq!(unit_box().bv_norm(), r("2"));
        assert_eq!(StepFunction::constant(r("5")).bv_norm(), r("5"));
        assert_eq!(StepFunction::constant(r("-5")).bv_norm(), r("5"));
    }

    #[test]
    fn partition_examples() {
        let p = Partition::new(vec![r("-1"), r("1/2"), r("2")]).unwrap();
        assert_eq!(unit_box().variation_on_partition(&p), r("2"));
        let flat = Partition::new(vec![r("3"), r("4")]).unwrap();
        assert_eq!(unit_box().variation_on_partition(&flat), r("0"));
        let stairs = StepFunction::new(
            Rat::zero(),
            vec![Breakpoint::new(r("0"), r("1"), r("1")), Breakpoint::new(r("1"), r("2"), r("2"))],
        )
        .unwrap();
        let mids = Partition::new(vec![r("-1/2"), r("1/2"), r("3/2")]).unwrap();
        assert_eq!(stairs.variation_on_partition(&mids), r("2"));
        assert!(!mids.has_property_v(&stairs));
        assert!(p.has_property_v(&unit_box()));
        assert!(Partition::new(vec![r("1")]).is_err());
        assert!(Partition::new(vec![r("1"), r("1")]).is_err());
    }

    #[test]
    fn jump_set_examples() {
        let jumps = unit_box().jump_sets();
        assert_eq!(jumps.len(), 2);
        assert_eq!((jumps[0].left_jump.clone(), jumps[0].right_jump.clone()), (r("1"), r("0")));
        assert_eq!((jumps[1].left_jump.clone(), jumps[1].right_jump.clone()), (r("0"), r("1")));
        assert!(StepFunction::constant(r("3")).jump_sets().is_empty());
        let flip = sign_flip().jump_sets();
        assert_eq!(flip.len(), 1);
        assert_eq!(flip[0].right_jump, r("2"));
        assert_eq!(flip[0].modulus_right_jump, r("0"));
    }

    #[test]
    fn modulus_defect_examples() {
        let f = sign_flip();
        assert_eq!(f.modulus_defect(&ALL.0, &ALL.1).unwrap(), r("2"));
        assert_eq!(f.total_variation() - f.modulus().total_variation(), r("2"));
        assert_eq!(two_bump().modulus_defect(&ALL.0, &ALL.1).unwrap(), r("0"));
        let through_zero =
            StepFunction::new(Rat::one(), vec![Breakpoint::new(r("0"), r("0"), r("-1"))]).unwrap();
        assert_eq!(through_zero.modulus_defect(&ALL.0, &ALL.1).unwrap(), r("0"));
        assert!(f.modulus_defect(&fin("1"), &fin("0")).is_err());
    }
}
