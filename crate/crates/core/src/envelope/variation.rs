use std::collections::BTreeMap;
use std::fmt;

use super::moebius::critical_polynomial;
use super::{build_profile, roots_inside, sample_between, MaximalProfile, Moebius};
use crate::error::{Error, Result};
use crate::exactnum::{check_precision, AlgebraicValue, Ext, Rat, SurdForm};
use crate::maximal::maximal_limit_at_infinity;
use crate::stepfn::StepFunction;

/// Certified `lo ≤ value ≤ hi` with `hi − lo ≤ requested_precision`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariationEnclosure {
    pub lo: Rat,
    pub hi: Rat,
    pub requested_precision: Rat,
}

impl VariationEnclosure {
    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn contains(&self, v: &Rat) -> bool {
        self.lo <= *v && *v <= self.hi
    }

    pub fn exact(&self) -> Option<&Rat> {
        (self.lo == self.hi).then_some(&self.lo)
    }

    pub fn midpoint(&self) -> Rat {
        Rat::midpoint(&self.lo, &self.hi)
    }

    fn shifted(self, by: &Rat) -> Self {
        VariationEnclosure { lo: &self.lo + by, hi: &self.hi + by, ..self }
    }
}

impl fmt::Display for VariationEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "{}..{}", self.lo, self.hi),
        }
    }
}

/// `g − h` on the open interval `(lo, hi)`.
struct Cell<'a> {
    lo: Ext<AlgebraicValue>,
    hi: Ext<AlgebraicValue>,
    g: &'a Moebius,
    h: &'a Moebius,
}

fn difference_at(g: &Moebius, h: &Moebius, x: &Ext<AlgebraicValue>) -> SurdForm {
    g.eval_ext(x).sub(&h.eval_ext(x))
}

/// Signed sum of values grouped by quadratic field, so that terms from the
/// same field cancel exactly before any enclosure is taken.
#[derive(Default)]
struct Ledger {
    by_radicand: BTreeMap<Rat, SurdForm>,
}

impl Ledger {
    fn add(&mut self, sign: i32, v: SurdForm) {
        let v = v.scale_add(&Rat::from_int(sign as i64), &Rat::zero());
        let key = if v.coeff.is_zero() { Rat::zero() } else { v.radicand.clone() };
        let slot = self.by_radicand.entry(key).or_insert_with(|| SurdForm::from_rat(Rat::zero()));
        *slot = slot.add(&v);
    }

    fn total(self, precision: &Rat) -> VariationEnclosure {
        let values: Vec<AlgebraicValue> = self.by_radicand.into_values().map(|s| s.to_algebraic()).collect();
        let irrational = values.iter().filter(|v| !v.is_rational()).count().max(1);
        let budget = precision / Rat::from_int(irrational as i64);
        let (mut lo, mut hi) = (Rat::zero(), Rat::zero());
        for v in values {
            let v = v.refine_to(&budget);
            lo += v.lo();
            hi += v.hi();
        }
        // a variation is never negative
        let lo = Rat::max_of(&lo, &Rat::zero());
        let hi = Rat::max_of(&hi, &lo);
        VariationEnclosure { lo, hi, requested_precision: precision.clone() }
    }
}

fn variation_over_cells(cells: &[Cell<'_>], precision: &Rat) -> VariationEnclosure {
    let mut ledger = Ledger::default();
    for cell in cells {
        let mut cuts = vec![cell.lo.clone()];
        cuts.extend(
            roots_inside(&critical_polynomial(cell.g, cell.h), &cell.lo, &cell.hi)
                .into_iter()
                .map(Ext::Finite),
        );
        cuts.push(cell.hi.clone());
        for w in cuts.windows(2) {
            let t = sample_between(&w[0], &w[1]);
            let dir = (cell.g.derivative(&t) - cell.h.derivative(&t)).signum();
            if dir != 0 {
                ledger.add(dir, difference_at(cell.g, cell.h, &w[1]));
                ledger.add(-dir, difference_at(cell.g, cell.h, &w[0]));
            }
        }
    }
    ledger.total(precision)
}

fn check_interval(a: &Ext<Rat>, b: &Ext<Rat>) -> Result<()> {
    if a >= b || *a == Ext::PosInf || *b == Ext::NegInf {
        return Err(Error::EmptyInterval { lo: a.to_string(), hi: b.to_string() });
    }
    Ok(())
}

/// `Var_(a,b)(M̃f)` as a certified enclosure.
pub fn variation_of_profile(
    p: &MaximalProfile,
    a: &Ext<Rat>,
    b: &Ext<Rat>,
    precision: &Rat,
) -> Result<VariationEnclosure> {
    check_precision(precision)?;
    check_interval(a, b)?;
    let (a, b) = (a.to_algebraic(), b.to_algebraic());
    let zero = Moebius::constant(Rat::zero());
    let cells: Vec<Cell<'_>> = p
        .pieces()
        .iter()
        .filter(|piece| piece.hi > a && piece.lo < b)
        .map(|piece| Cell {
            lo: Ext::max(piece.lo.clone(), a.clone()),
            hi: Ext::min(piece.hi.clone(), b.clone()),
            g: &piece.map,
            h: &zero,
        })
        .collect();
    Ok(variation_over_cells(&cells, precision))
}

/// `Var(M̃f₁ − M̃f₂)` over the whole line.
pub fn variation_of_difference(
    p1: &MaximalProfile,
    p2: &MaximalProfile,
    precision: &Rat,
) -> Result<VariationEnclosure> {
    check_precision(precision)?;
    let mut grid: Vec<AlgebraicValue> = p1.junctions();
    grid.extend(p2.junctions());
    grid.sort();
    grid.dedup();
    let mut bounds: Vec<Ext<AlgebraicValue>> = vec![Ext::NegInf];
    bounds.extend(grid.into_iter().map(Ext::Finite));
    bounds.push(Ext::PosInf);

    let (pieces1, pieces2) = (p1.pieces(), p2.pieces());
    let (mut i, mut j) = (0, 0);
    let mut cells = Vec::with_capacity(bounds.len());
    for w in bounds.windows(2) {
        while pieces1[i].hi <= w[0] {
            i += 1;
        }
        while pieces2[j].hi <= w[0] {
            j += 1;
        }
        cells.push(Cell { lo: w[0].clone(), hi: w[1].clone(), g: &pieces1[i].map, h: &pieces2[j].map });
    }
    Ok(variation_over_cells(&cells, precision))
}

/// `|M̃f(−∞) − M̃g(−∞)| + Var(M̃f − M̃g)`.
pub fn bv_distance(f: &StepFunction, g: &StepFunction, precision: &Rat) -> Result<VariationEnclosure> {
    check_precision(precision)?;
    let at_infinity = (maximal_limit_at_infinity(f) - maximal_limit_at_infinity(g)).abs();
    let var = variation_of_difference(&build_profile(f), &build_profile(g), precision)?;
    Ok(var.shifted(&at_infinity))
}
