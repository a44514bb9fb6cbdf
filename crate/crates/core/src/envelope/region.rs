use std::fmt;

use super::{ext_cmp_rat, sample_between, MaximalProfile};
use crate::exactnum::{AlgebraicValue, Ext, Rat};
use crate::maximal::adjusted_modulus_at;
use crate::stepfn::StepFunction;

/// An interval of the real line with exact endpoints; `lo == hi` with both
/// ends closed is a single point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub lo: Ext<AlgebraicValue>,
    pub hi: Ext<AlgebraicValue>,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Region {
    pub fn open(lo: Ext<AlgebraicValue>, hi: Ext<AlgebraicValue>) -> Self {
        Region { lo, hi, lo_closed: false, hi_closed: false }
    }

    pub fn contains(&self, x: &Rat) -> bool {
        let lo_ok = match ext_cmp_rat(&self.lo, x) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Equal => self.lo_closed,
            std::cmp::Ordering::Greater => false,
        };
        let hi_ok = match ext_cmp_rat(&self.hi, x) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Equal => self.hi_closed,
            std::cmp::Ordering::Less => false,
        };
        lo_ok && hi_ok
    }

    pub fn is_open(&self) -> bool {
        !self.lo_closed && !self.hi_closed
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            return write!(f, "{{{}}}", self.lo);
        }
        let open = if self.lo_closed { '[' } else { '(' };
        let close = if self.hi_closed { ']' } else { ')' };
        write!(f, "{open}{},{}{close}", self.lo, self.hi)
    }
}

/// Sorted union of disjoint, non-touching regions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RegionSet {
    regions: Vec<Region>,
}

impl RegionSet {
    pub fn empty() -> Self {
        RegionSet::default()
    }

    pub fn whole_line() -> Self {
        RegionSet { regions: vec![Region::open(Ext::NegInf, Ext::PosInf)] }
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn contains(&self, x: &Rat) -> bool {
        self.regions.iter().any(|r| r.contains(x))
    }

    pub fn complement(&self) -> RegionSet {
        let mut out = Vec::new();
        let mut lo = Ext::NegInf;
        let mut lo_closed = false;
        for r in &self.regions {
            let gap_has_room = lo < r.lo || (lo_closed && !r.lo_closed);
            if r.lo != Ext::NegInf && gap_has_room {
                out.push(Region { lo: lo.clone(), hi: r.lo.clone(), lo_closed, hi_closed: !r.lo_closed });
            }
            lo = r.hi.clone();
            lo_closed = !r.hi_closed;
        }
        if lo != Ext::PosInf {
            out.push(Region { lo, hi: Ext::PosInf, lo_closed, hi_closed: false });
        }
        RegionSet { regions: out }
    }
}

impl fmt::Display for RegionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.regions.is_empty() {
            return write!(f, "empty");
        }
        for (i, r) in self.regions.iter().enumerate() {
            if i > 0 {
                write!(f, " U ")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

/// `E = {M̃f > |f|‾}` and its complement `C`.
///
/// Between consecutive breakpoints and junctions the profile is a single
/// monotone map and `|f|‾` a constant dominated by it, so membership is
/// constant on each such open cell and decided at one rational sample.
pub fn region_e(f: &StepFunction, p: &MaximalProfile) -> (RegionSet, RegionSet) {
    let mut marks: Vec<AlgebraicValue> =
        f.breakpoint_locations().map(|x| AlgebraicValue::from_rat(x.clone())).collect();
    marks.extend(p.junctions());
    marks.sort();
    marks.dedup();

    // atoms alternate: cell, mark, cell, ..., cell
    let mut members: Vec<bool> = Vec::with_capacity(2 * marks.len() + 1);
    let bound = |i: usize| -> Ext<AlgebraicValue> {
        if i == 0 {
            Ext::NegInf
        } else {
            marks.get(i - 1).cloned().map(Ext::Finite).unwrap_or(Ext::PosInf)
        }
    };
    for i in 0..=marks.len() {
        let (lo, hi) = (bound(i), bound(i + 1));
        let s = sample_between(&lo, &hi);
        members.push(p.value(&s) > adjusted_modulus_at(f, &s));
        if let Ext::Finite(m) = hi {
            let inside = match m.as_rat() {
                Some(r) => p.value(r) > adjusted_modulus_at(f, r),
                None => {
                    // a surd never coincides with a breakpoint, so |f|‾ there equals it at the sample
                    let floor = adjusted_modulus_at(f, &s);
                    p.value_algebraic(&m).cmp_rat(&floor) == std::cmp::Ordering::Greater
                }
            };
            members.push(inside);
        }
    }

    let mut e = Vec::new();
    let mut run_start: Option<usize> = None;
    for (atom, inside) in members.iter().enumerate().chain([(members.len(), &false)]) {
        match (inside, run_start) {
            (true, None) => run_start = Some(atom),
            (false, Some(start)) => {
                debug_assert!(start % 2 == 0 && atom % 2 == 1, "E must be open");
                e.push(Region::open(bound(start / 2), bound((atom + 1) / 2)));
                run_start = None;
            }
            _ => {}
        }
    }
    let e = RegionSet { regions: e };
    let c = e.complement();
    (e, c)
}
