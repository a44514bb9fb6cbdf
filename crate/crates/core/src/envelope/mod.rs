//! `M̃f` as a continuous piecewise-Möbius function.
//!
//! On an open segment `(x_k, x_{k+1})` where `|f| = c`, every candidate
//! average from the maximal module is one of
//!
//! - a constant (a finite interval spanning the segment, a tail, or `c` itself),
//! - `A(a, x) = (F(x_k) − F(a) + c(x − x_k)) / (x − a)` for a breakpoint `a < x_k`,
//! - `A(x, b) = (F(b) − F(x_{k+1}) + c(x_{k+1} − x)) / (b − x)` for `b > x_{k+1}`,
//!
//! with `F` a primitive of `|f|`. The profile is the upper envelope of these,
//! found by sweeping left to right and jumping to the next root of the
//! crossing quadratic between the current leader and each rival.

mod moebius;
mod region;
mod variation;

use std::cmp::Ordering;
use std::fmt;
use std::fmt::Write;

pub use moebius::Moebius;
pub use region::{region_e, Region, RegionSet};
pub use variation::{bv_distance, variation_of_difference, variation_of_profile, VariationEnclosure};

use crate::error::{Error, Result};
use crate::exactnum::{isolate_quadratic_roots, AlgebraicValue, Ext, Quadratic, Rat};
use crate::stepfn::{ModulusPrimitive, PointEval, StepFunction};
use moebius::crossing_polynomial;

/// Which candidate family a piece comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// `x ↦ A(a, x)`
    LeftAnchored { a: Rat },
    /// `x ↦ A(x, b)`
    RightAnchored { b: Rat },
    /// average over a fixed interval spanning the segment
    Interval { a: Rat, b: Rat },
    TailLeft,
    TailRight,
    /// the value of `|f|` on the segment
    Local,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::LeftAnchored { a } => write!(f, "left({a})"),
            Provenance::RightAnchored { b } => write!(f, "right({b})"),
            Provenance::Interval { a, b } => write!(f, "const({a},{b})"),
            Provenance::TailLeft => write!(f, "tail_left"),
            Provenance::TailRight => write!(f, "tail_right"),
            Provenance::Local => write!(f, "local"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MoebiusPiece {
    pub map: Moebius,
    pub lo: Ext<AlgebraicValue>,
    pub hi: Ext<AlgebraicValue>,
    pub provenance: Provenance,
}

#[derive(Clone, Debug)]
struct Candidate {
    map: Moebius,
    provenance: Provenance,
}

/// Where a rational point falls in a profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Interior(usize),
    /// the junction between pieces `i` and `i + 1`
    Junction(usize),
}

#[derive(Clone, Debug)]
pub struct MaximalProfile {
    f: StepFunction,
    pieces: Vec<MoebiusPiece>,
    junction_values: Vec<AlgebraicValue>,
}

pub(crate) fn ext_cmp_rat(e: &Ext<AlgebraicValue>, x: &Rat) -> Ordering {
    match e {
        Ext::NegInf => Ordering::Less,
        Ext::Finite(v) => v.cmp_rat(x),
        Ext::PosInf => Ordering::Greater,
    }
}

/// A rational strictly inside `(lo, hi)`; requires `lo < hi`.
pub(crate) fn sample_between(lo: &Ext<AlgebraicValue>, hi: &Ext<AlgebraicValue>) -> Rat {
    match (lo, hi) {
        (Ext::Finite(l), Ext::Finite(h)) => l.rational_between(h),
        (Ext::Finite(l), _) => Rat::from_bigint(l.hi().floor()) + Rat::one(),
        (_, Ext::Finite(h)) => Rat::from_bigint(h.lo().floor()) - Rat::one(),
        _ => Rat::zero(),
    }
}

/// First root of `q` strictly inside `(lo, hi)`.
pub(crate) fn first_root_inside(
    q: &Quadratic,
    lo: &Ext<AlgebraicValue>,
    hi: &Ext<AlgebraicValue>,
) -> Option<AlgebraicValue> {
    if q.is_zero() {
        return None;
    }
    isolate_quadratic_roots(q)
        .expect("nonzero polynomial")
        .into_iter()
        .map(Ext::Finite)
        .find(|r| r > lo && r < hi)
        .and_then(|r| r.finite().cloned())
}

/// All roots of `q` strictly inside `(lo, hi)`, ascending.
pub(crate) fn roots_inside(q: &Quadratic, lo: &Ext<AlgebraicValue>, hi: &Ext<AlgebraicValue>) -> Vec<AlgebraicValue> {
    if q.is_zero() {
        return vec![];
    }
    isolate_quadratic_roots(q)
        .expect("nonzero polynomial")
        .into_iter()
        .filter(|r| {
            let e = Ext::Finite(r.clone());
            &e > lo && &e < hi
        })
        .collect()
}

fn segment_candidates(f: &StepFunction, prim: &ModulusPrimitive, k: usize) -> Vec<Candidate> {
    let bps = f.breakpoints();
    let c = f.segment_constant(k).abs();
    let lefts: Vec<&Rat> = bps[..k].iter().map(|bp| &bp.at).collect();
    let rights: Vec<&Rat> = bps[k..].iter().map(|bp| &bp.at).collect();

    // constants in tie-break order: shorter then leftmost intervals, tails, local
    let mut intervals: Vec<(Rat, &Rat, &Rat)> = lefts
        .iter()
        .flat_map(|a| rights.iter().map(move |b| (*b - *a, *a, *b)))
        .collect();
    intervals.sort_by(|x, y| x.0.cmp(&y.0).then_with(|| x.1.cmp(y.1)));
    let constants = intervals
        .into_iter()
        .map(|(_, a, b)| (prim.average(a, b), Provenance::Interval { a: a.clone(), b: b.clone() }))
        .chain([
            (f.tail_left().abs(), Provenance::TailLeft),
            (f.tail_right().abs(), Provenance::TailRight),
            (c.clone(), Provenance::Local),
        ]);
    let (value, provenance) = constants
        .reduce(|best, next| if next.0 > best.0 { next } else { best })
        .expect("at least three constants");
    let mut out = vec![Candidate { map: Moebius::constant(value), provenance }];

    if let Some((lo, anchors)) = lefts.split_last() {
        let f_lo = prim.at(lo);
        for a in anchors {
            let map = Moebius::new(&f_lo - prim.at(a) - &c * *lo, c.clone(), -*a, Rat::one());
            if !map.is_constant() {
                out.push(Candidate { map, provenance: Provenance::LeftAnchored { a: (*a).clone() } });
            }
        }
    }
    if let Some((hi, anchors)) = rights.split_first() {
        let f_hi = prim.at(hi);
        for b in anchors {
            let map = Moebius::new(prim.at(b) - &f_hi + &c * *hi, -&c, (*b).clone(), -Rat::one());
            if !map.is_constant() {
                out.push(Candidate { map, provenance: Provenance::RightAnchored { b: (*b).clone() } });
            }
        }
    }
    let mut unique: Vec<Candidate> = Vec::with_capacity(out.len());
    for cand in out {
        if !unique.iter().any(|u| u.map == cand.map) {
            unique.push(cand);
        }
    }
    unique
}

/// Whether `g > h` on some interval `(pos, pos + ε)`.
fn leads_after(g: &Moebius, h: &Moebius, pos: &Ext<AlgebraicValue>, end: &Ext<AlgebraicValue>) -> bool {
    let q = crossing_polynomial(g, h);
    let limit = first_root_inside(&q, pos, end).map(Ext::Finite).unwrap_or_else(|| end.clone());
    let t = sample_between(pos, &limit);
    g.eval(&t) > h.eval(&t)
}

fn push_piece(pieces: &mut Vec<MoebiusPiece>, piece: MoebiusPiece) {
    if let Some(last) = pieces.last_mut() {
        if last.map == piece.map {
            last.hi = piece.hi;
            return;
        }
    }
    pieces.push(piece);
}

fn sweep_segment(cands: &[Candidate], lo: Ext<AlgebraicValue>, hi: Ext<AlgebraicValue>, pieces: &mut Vec<MoebiusPiece>) {
    let mut pos = lo;
    while pos < hi {
        let mut leader = 0;
        for (i, cand) in cands.iter().enumerate().skip(1) {
            if leads_after(&cand.map, &cands[leader].map, &pos, &hi) {
                leader = i;
            }
        }
        let lead = &cands[leader];
        let next = cands
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != leader)
            .filter_map(|(_, g)| first_root_inside(&crossing_polynomial(&g.map, &lead.map), &pos, &hi))
            .min()
            .map(Ext::Finite)
            .unwrap_or_else(|| hi.clone());
        push_piece(
            pieces,
            MoebiusPiece { map: lead.map.clone(), lo: pos, hi: next.clone(), provenance: lead.provenance.clone() },
        );
        pos = next;
    }
}

/// The exact profile of `M̃f`.
pub fn build_profile(f: &StepFunction) -> MaximalProfile {
    let prim = ModulusPrimitive::new(f);
    let locs: Vec<Ext<AlgebraicValue>> = f
        .breakpoint_locations()
        .map(|x| Ext::Finite(AlgebraicValue::from_rat(x.clone())))
        .collect();
    let mut pieces = Vec::new();
    for k in 0..=f.len() {
        let lo = if k == 0 { Ext::NegInf } else { locs[k - 1].clone() };
        let hi = locs.get(k).cloned().unwrap_or(Ext::PosInf);
        sweep_segment(&segment_candidates(f, &prim, k), lo, hi, &mut pieces);
    }
    let junction_values = pieces
        .windows(2)
        .map(|w| match &w[0].hi {
            Ext::Finite(x) => w[0].map.eval_algebraic(x),
            _ => unreachable!("junctions are finite"),
        })
        .collect();
    MaximalProfile { f: f.clone(), pieces, junction_values }
}

impl MaximalProfile {
    pub fn function(&self) -> &StepFunction {
        &self.f
    }

    pub fn pieces(&self) -> &[MoebiusPiece] {
        &self.pieces
    }

    /// Finite piece boundaries, ascending.
    pub fn junctions(&self) -> Vec<AlgebraicValue> {
        self.pieces.iter().skip(1).filter_map(|p| p.lo.finite().cloned()).collect()
    }

    pub fn junction_values(&self) -> &[AlgebraicValue] {
        &self.junction_values
    }

    pub fn limit_at_infinity(&self) -> Rat {
        self.pieces[0].map.limit_at_infinity()
    }

    pub fn locate(&self, x: &Rat) -> Location {
        let i = self.pieces.partition_point(|p| ext_cmp_rat(&p.hi, x) == Ordering::Less);
        if ext_cmp_rat(&self.pieces[i].hi, x) == Ordering::Equal {
            Location::Junction(i)
        } else {
            Location::Interior(i)
        }
    }

    pub fn piece_at(&self, x: &Rat) -> &MoebiusPiece {
        match self.locate(x) {
            Location::Interior(i) | Location::Junction(i) => &self.pieces[i],
        }
    }

    pub fn value(&self, x: &Rat) -> Rat {
        self.piece_at(x).map.eval(x)
    }

    /// Exact value at an algebraic point.
    pub fn value_algebraic(&self, x: &AlgebraicValue) -> AlgebraicValue {
        if let Some(r) = x.as_rat() {
            return AlgebraicValue::from_rat(self.value(r));
        }
        let target = Ext::Finite(x.clone());
        let i = self.pieces.partition_point(|p| p.hi < target);
        self.pieces[i].map.eval_algebraic(x)
    }

    /// Tab-separated dump: `lo hi α β γ δ provenance`, one line per piece.
    pub fn to_tsv(&self, digits: usize) -> String {
        let width = Rat::frac(1, 1_000_000_000);
        let show = |e: &Ext<AlgebraicValue>| match e {
            Ext::Finite(v) => v.render(&width, digits),
            Ext::NegInf => "-inf".to_string(),
            Ext::PosInf => "inf".to_string(),
        };
        let mut out = String::new();
        for p in &self.pieces {
            let m = &p.map;
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                show(&p.lo),
                show(&p.hi),
                m.alpha,
                m.beta,
                m.gamma,
                m.delta,
                p.provenance
            );
        }
        out
    }
}

impl PointEval for MaximalProfile {
    fn value_at(&self, x: &Rat) -> Rat {
        self.value(x)
    }
}

/// Derivative of `M̃f` at a rational point interior to a piece.
pub fn profile_derivative(p: &MaximalProfile, x: &Rat) -> Result<Rat> {
    match p.locate(x) {
        Location::Interior(i) => Ok(p.pieces[i].map.derivative(x)),
        Location::Junction(_) => Err(Error::AtJunction(x.to_string())),
    }
}
