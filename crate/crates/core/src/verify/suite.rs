use std::fmt::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{oracle_maximal, random_stepfn, GridSpec};
use crate::envelope::{build_profile, profile_derivative, region_e, variation_of_profile, Location, MaximalProfile};
use crate::error::{Error, Result};
use crate::exactnum::{Ext, Rat};
use crate::maximal::{adjusted_modulus_at, maximal_limit_at_infinity, maximal_value, WitnessKind};
use crate::stepfn::{Breakpoint, Partition, PointEval, Side, StepFunction};

/// Signature of `StepFunction::variation_on`, swappable for fault injection.
pub type VariationFn = fn(&StepFunction, &Ext<Rat>, &Ext<Rat>) -> Result<Rat>;

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub precision: Rat,
    /// random sample points per function and check
    pub samples: usize,
    pub variation: VariationFn,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { precision: Rat::frac(1, 1_000_000_000), samples: 12, variation: StepFunction::variation_on }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusItem {
    pub id: u64,
    pub f: StepFunction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteRow {
    pub id: u64,
    pub check: &'static str,
    pub passed: bool,
    pub detail: String,
    /// smallest failing function found by dropping breakpoints
    pub witness: Option<StepFunction>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub rows: Vec<SuiteRow>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SuiteRow> {
        self.rows.iter().filter(|r| !r.passed)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("id\tcheck\tstatus\tdetail\twitness\n");
        for r in &self.rows {
            let witness = r.witness.as_ref().map(|w| w.to_text().trim_end().replace('\n', ";")).unwrap_or_default();
            let status = if r.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{}\t{}\t{status}\t{}\t{witness}", r.id, r.check, r.detail);
        }
        out
    }
}

struct Ctx<'o> {
    opts: &'o SuiteOptions,
    seed: u64,
}

impl Ctx<'_> {
    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt)
    }

    fn var(&self, f: &StepFunction, a: &Ext<Rat>, b: &Ext<Rat>) -> std::result::Result<Rat, String> {
        (self.opts.variation)(f, a, b).map_err(|e| e.to_string())
    }
}

type Outcome = std::result::Result<(), String>;
type Check = fn(&StepFunction, &Ctx<'_>) -> Outcome;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Breakpoints, points beside them, and random rationals across the hull.
fn sample_points(f: &StepFunction, rng: &mut ChaCha8Rng, count: usize) -> Vec<Rat> {
    let mut xs: Vec<Rat> = Vec::new();
    for x in f.breakpoint_locations() {
        xs.push(x.clone());
        xs.push(x - Rat::frac(1, 3));
        xs.push(x + Rat::frac(1, 3));
    }
    let lo = f.breakpoint_locations().next().cloned().unwrap_or_else(Rat::zero) - Rat::from_int(3);
    let hi = f.breakpoint_locations().last().cloned().unwrap_or_else(Rat::zero) + Rat::from_int(3);
    for _ in 0..count {
        xs.push(&lo + (&hi - &lo) * Rat::frac(rng.gen_range(0..=997), 997));
    }
    xs.sort();
    xs.dedup();
    xs
}

fn random_pairs(xs: &[Rat], rng: &mut ChaCha8Rng, count: usize) -> Vec<(Rat, Rat)> {
    (0..count)
        .filter_map(|_| {
            let a = xs.choose(rng)?;
            let b = xs.choose(rng)?;
            (a < b).then(|| (a.clone(), b.clone()))
        })
        .collect()
}

fn partner(ctx: &Ctx<'_>) -> StepFunction {
    random_stepfn(ctx.seed ^ 0x5EED, 4, 3, 3).expect("positive bounds")
}

fn modulus_identity(f: &StepFunction, ctx: &Ctx<'_>) -> Outcome {
    let mut rng = ctx.rng(1);
    let xs = sample_points(f, &mut rng, ctx.opts.samples);
    let mut intervals = vec![(Ext::NegInf, Ext::PosInf)];
    intervals.extend(random_pairs(&xs, &mut rng, 6).into_iter().map(|(a, b)| (Ext::Finite(a), Ext::Finite(b))));
    for (a, b) in intervals {
        let lhs = ctx.var(f, &a, &b)? - ctx.var(&f.modulus(), &a, &b)?;
        let rhs = f.modulus_defect(&a, &b).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("on ({a},{b}): Var f - Var |f| = {lhs}, defect = {rhs}"))?;
    }
    Ok(())
}

fn partition_bound(f: &StepFunction, ctx: &Ctx<'_>) -> Outcome {
    let mut rng = ctx.rng(2);
    let xs = sample_points(f, &mut rng, ctx.opts.samples);
    for _ in 0..4 {
        let k = rng.gen_range(2..=6.min(xs.len()).max(2));
        let mut pts: Vec<Rat> = xs.choose_multiple(&mut rng, k).cloned().collect();
        pts.sort();
        pts.dedup();
        let Ok(p) = Partition::new(pts) else { continue };
        let lhs = f.variation_on_partition(&p);
        let rhs = ctx.var(f, &Ext::Finite(p.first() - Rat::one()), &Ext::Finite(p.last() + Rat::one()))?;
        ensure(lhs <= rhs, || format!("partition {:?} gives {lhs} > {rhs}", p.points()))?;
    }
    Ok(())
}

fn uniform_control(f: &StepFunction, ctx: &Ctx<'_>) -> Outcome {
    let g = partner(ctx);
    let bound = Rat::from_int(2) * StepFunction::linear_combine(f, &g, &Rat::one(), &-Rat::one()).bv_norm();
    let mut rng = ctx.rng(3);
    for x in sample_points(f, &mut rng, ctx.opts.samples) {
        let d = (f.value_at(&x) - g.value_at(&x)).abs();
        ensure(d <= bound, || format!("|f - g|({x}) = {d} > {bound}"))?;
    }
    Ok(())
}

fn adjusted_modulus_bounds(f: &StepFunction, _ctx: &Ctx<'_>) -> Outcome {
    let adj = f.adjusted_modulus();
    for x in f.breakpoint_locations() {
        let left = f.eval(x, Side::LeftLimit).abs();
        let right = f.eval(x, Side::RightLimit).abs();
        let v = adjusted_modulus_at(f, x);
        ensure(v >= left && v >= right, || format!("|f|‾({x}) = {v} below a one-sided limit"))?;
        ensure(v <= Rat::max_of(&left, &right), || format!("|f|‾({x}) = {v} above the neighbourhood bound"))?;
        ensure(adj.value_at(x) == v, || format!("adjusted_modulus disagrees at {x}"))?;
    }
    Ok(())
}

fn linear_combine_exact(f: &StepFunction, ctx: &Ctx<'_>) -> Outcome {
    let g = partner(ctx);
    let mut rng = ctx.rng(5);
    let (alpha, beta) = (Rat::frac(rng.gen_range(-5..=5), 3), Rat::frac(rng.gen_range(-5..=5), 2));
    let h = StepFunction::linear_combine(f, &g, &alpha, &beta);
    let mut xs = sample_points(f, &mut rng, ctx.opts.samples);
    xs.extend(g.breakpoint_locations().cloned());
    for x in xs {
        for side in [Side::Point, Side::LeftLimit, Side::RightLimit] {
            let expect = &alpha * f.eval(&x, side) + &beta * g.eval(&x, side);
            ensure(h.eval(&x, side) == expect, || format!("combination wrong at {x}"))?;
        }
    }
    Ok(())
}

fn oracle_dominance(f: &StepFunction, ctx: &Ctx<'_>) -> Outcome {
    let mut rng = ctx.rng(6);
    for x in sample_points(f, &mut rng, 3).into_iter().step_by(3) {
        let lower = oracle_maximal(f, &x, &GridSpec::coarse(ctx.seed));
        let m = maximal_value(f, &x).value;
        ensure(lower <= m, || format!("oracle {lower} exceeds M̃f({x}) = {m}"))?;
    }
    Ok(())
}

fn dominates_adjusted_modulus(f: &StepFunction, ctx: &Ctx<'_>) -> Outcome {
    let mut rng = ctx.rng(7);
    for x in sample_points(f, &mut rng, ctx.opts.samples) {
        let (m, a) = (maximal_value(f, &x).value, adjusted_modulus_at(f, &x));
        ensure(m >= a, || format!("M̃f({x}) = {m} < |f|‾ = {a}"))?;
    }
    Ok(())
}

fn sublinearity(f: &StepFunction, ctx: &Ctx<'_>) -> Outcome {
    let g = partner(ctx);
    let bound = Rat::from_int(2) * f.sub(&g).bv_norm();
    let mut rng = ctx.rng(8);
    for x in sample_points(f, &mut rng, ctx.opts.samples) {
        let d = (maximal_value(f, &x).value - maximal_value(&g, &x).value).abs();
        ensure(d <= bound, || format!("|M̃f - M̃g|({x}) = {d} > {bound}"))?;
    }
    Ok(())
}

fn point_value_insensitivity(f: &StepFunction, ctx: &Ctx<'_>) -> Outcome {
    let moved: Vec<Breakpoint> = f
        .breakpoints()
        .iter()
        .map(|b| Breakpoint::new(b.at.clone(), &b.value * Rat::from_int(3) + Rat::from_int(7), b.right.clone()))
        .collect();
    let g = StepFunction::new(f.tail_left().clone(), moved).map_err(|e| e.to_string())?;
    let mut rng = ctx.rng(9);
    for x in sample_points(f, &mut rng, ctx.opts.samples) {
        let (a, b) = (maximal_value(f, &x).value, maximal_value(&g, &x).value);
        ensure(a == b, || format!("point values changed M̃f({x}): {a} vs {b}"))?;
    }
    Ok(())
}

fn limit_at_infinity(f: &StepFunction, _ctx: &Ctx<'_>) -> Outcome {
    let l = maximal_limit_at_infinity(f);
    let expect = Rat::max_of(&f.tail_left().abs(), &f.tail_right().abs());
    ensure(l == expect, || format!("limit {l} != max(|c0|, |cn|) = {expect}"))?;
    let last = f.breakpoint_locations().last().cloned().unwrap_or_else(Rat::zero);
    let gaps: Vec<Rat> = (1..=20).map(|t| (maximal_value(f, &(&last + Rat::pow2(t))).value - &l).abs()).collect();
    ensure(gaps.windows(2).all(|w| w[1] <= w[0]), || format!("gaps not shrinking: {gaps:?}"))?;
    ensure(gaps[19] < Rat::frac(1, 1000), || format!("gap {} at 2^20", gaps[19]))
}

fn profile_agreement(f: &StepFunction, ctx: &Ctx<'_>) -> Outcome {
    let p = build_profile(f);
    let mut rng = ctx.rng(11);
    for x in sample_points(f, &mut rng, ctx.opts.samples) {
        let (a, b) = (p.value(&x), maximal_value(f, &x).value);
        ensure(a == b, || format!("profile {a} vs engine {b} at {x}"))?;
    }
    Ok(())
}

fn whole_line(p: &MaximalProfile, precision: &Rat) -> std::result::Result<crate::envelope::VariationEnclosure, String> {
    variation_of_profile(p, &Ext::NegInf, &Ext::PosInf, precision).map_err(|e| e.to_string())
}

fn contraction(f: &StepFunction, ctx: &Ctx<'_>) -> Outcome {
    let v = whole_line(&build_profile(f), &ctx.opts.precision)?;
    let var = ctx.var(f, &Ext::NegInf, &Ext::PosInf)?;
    ensure(v.hi <= &var + &ctx.opts.precision, || format!("Var M̃f in {v} exceeds Var f = {var}"))
}

fn local_bound(f: &StepFunction, ctx: &Ctx<'_>) -> Outcome {
    let p = build_profile(f);
    let adj = f.adjusted_modulus();
    let mut rng = ctx.rng(13);
    let xs = sample_points(f, &mut rng, ctx.opts.samples);
    for (a, b) in random_pairs(&xs, &mut rng, 6) {
        let (ea, eb) = (Ext::Finite(a.clone()), Ext::Finite(b.clone()));
        let lhs = variation_of_profile(&p, &ea, &eb, &ctx.opts.precision).map_err(|e| e.to_string())?;
        // |f|‾ is measured on [a, b]: the open convention fails whenever it jumps at an endpoint
        let rhs = ctx.var(&adj, &ea, &eb)?
            + (adj.eval(&a, Side::RightLimit) - adj.value_at(&a)).abs()
            + (adj.eval(&b, Side::LeftLimit) - adj.value_at(&b)).abs()
            + (p.value(&a) - adjusted_modulus_at(f, &a)).abs()
            + (p.value(&b) - adjusted_modulus_at(f, &b)).abs();
        ensure(lhs.lo <= &rhs + &ctx.opts.precision, || format!("on ({a},{b}): Var M̃f in {lhs} > {rhs}"))?;
    }
    Ok(())
}

fn flat_on_c(f: &StepFunction, _ctx: &Ctx<'_>) -> Outcome {
    let p = build_profile(f);
    let (_, c) = region_e(f, &p);
    for region in c.regions().iter().filter(|r| r.lo < r.hi) {
        for piece in p.pieces() {
            let overlaps = piece.lo < region.hi && piece.hi > region.lo;
            ensure(!overlaps || piece.map.is_constant(), || format!("piece {} not flat on {region}", piece.map))?;
        }
    }
    Ok(())
}

/// Random rationals in `E` that are neither breakpoints nor junctions.
fn points_in_e(f: &StepFunction, p: &MaximalProfile, ctx: &Ctx<'_>, salt: u64) -> Vec<Rat> {
    let (e, _) = region_e(f, p);
    let mut rng = ctx.rng(salt);
    sample_points(f, &mut rng, 4 * ctx.opts.samples)
        .into_iter()
        .filter(|x| e.contains(x) && f.locate(x).is_err() && matches!(p.locate(x), Location::Interior(_)))
        .collect()
}

fn derivative_formula(f: &StepFunction, ctx: &Ctx<'_>) -> Outcome {
    let p = build_profile(f);
    for x in points_in_e(f, &p, ctx, 15) {
        let d = profile_derivative(&p, &x).map_err(|e| e.to_string())?;
        let mv = maximal_value(f, &x);
        let modulus = f.value_at(&x).abs();
        let expect = match mv.one_sided_witness.map(|w| w.kind) {
            Some(WitnessKind::Finite { a, b }) if a == x => (&mv.value - &modulus) / (&b - &x),
            Some(WitnessKind::Finite { a, .. }) => (&modulus - &mv.value) / (&x - &a),
            // the value is the limit at infinity, a global minimum of M̃f
            _ => Rat::zero(),
        };
        ensure(d == expect, || format!("derivative {d} vs formula {expect} at {x}"))?;
    }
    Ok(())
}

fn finite_difference(f: &StepFunction, ctx: &Ctx<'_>) -> Outcome {
    let p = build_profile(f);
    let (h1, h2) = (Rat::pow2(-8), Rat::pow2(-16));
    for x in points_in_e(f, &p, ctx, 16) {
        let Location::Interior(i) = p.locate(&x) else { continue };
        if [&x - &h1, &x + &h1].iter().any(|y| p.locate(y) != Location::Interior(i)) {
            continue;
        }
        let d = profile_derivative(&p, &x).map_err(|e| e.to_string())?;
        let err = |h: &Rat| ((p.value(&(&x + h)) - p.value(&(&x - h))) / (Rat::from_int(2) * h) - &d).abs();
        let (e1, e2) = (err(&h1), err(&h2));
        ensure(e2 <= e1, || format!("difference quotient error grew at {x}: {e1} -> {e2}"))?;
    }
    Ok(())
}

fn no_interior_max_in_e(f: &StepFunction, _ctx: &Ctx<'_>) -> Outcome {
    let p = build_profile(f);
    let (e, _) = region_e(f, &p);
    for region in e.regions() {
        let dirs: Vec<i32> = p
            .pieces()
            .iter()
            .filter(|q| q.lo < region.hi && q.hi > region.lo)
            .map(|q| q.map.direction())
            .filter(|d| *d != 0)
            .collect();
        ensure(!dirs.windows(2).any(|w| w[0] > 0 && w[1] < 0), || format!("local maximum inside {region}"))?;
    }
    Ok(())
}

const SUITE: &[(&str, Check)] = &[
    ("modulus_identity", modulus_identity),
    ("partition_bound", partition_bound),
    ("uniform_control", uniform_control),
    ("adjusted_modulus_bounds", adjusted_modulus_bounds),
    ("linear_combine_exact", linear_combine_exact),
    ("oracle_dominance", oracle_dominance),
    ("dominates_adjusted_modulus", dominates_adjusted_modulus),
    ("sublinearity", sublinearity),
    ("point_value_insensitivity", point_value_insensitivity),
    ("limit_at_infinity", limit_at_infinity),
    ("profile_agreement", profile_agreement),
    ("contraction", contraction),
    ("local_bound", local_bound),
    ("flat_on_c", flat_on_c),
    ("derivative_formula", derivative_formula),
    ("finite_difference", finite_difference),
    ("no_interior_max_in_e", no_interior_max_in_e),
];

/// Names of every check, in report order.
pub const CHECKS: [&str; 17] = [
    "modulus_identity",
    "partition_bound",
    "uniform_control",
    "adjusted_modulus_bounds",
    "linear_combine_exact",
    "oracle_dominance",
    "dominates_adjusted_modulus",
    "sublinearity",
    "point_value_insensitivity",
    "limit_at_infinity",
    "profile_agreement",
    "contraction",
    "local_bound",
    "flat_on_c",
    "derivative_formula",
    "finite_difference",
    "no_interior_max_in_e",
];

/// A deliberately wrong variation that forgets point values, counting each
/// breakpoint as `|right − left|`. For checking that the suite notices.
pub fn point_blind_variation(f: &StepFunction, a: &Ext<Rat>, b: &Ext<Rat>) -> Result<Rat> {
    let inside = |x: &Rat| {
        let x = Ext::Finite(x.clone());
        &x > a && &x < b
    };
    Ok(f.breakpoints()
        .iter()
        .enumerate()
        .filter(|(_, bp)| inside(&bp.at))
        .map(|(k, bp)| (&bp.right - f.left_constant(k)).abs())
        .sum())
}

/// Drops breakpoints, in halves and then singly, while `fails` still holds.
pub fn shrink(f: &StepFunction, fails: impl Fn(&StepFunction) -> bool) -> StepFunction {
    let mut cur = f.clone();
    'outer: loop {
        let n = cur.len();
        let mut chunk = n.div_ceil(2);
        while chunk >= 1 {
            for start in (0..n).step_by(chunk) {
                let kept: Vec<Breakpoint> = cur
                    .breakpoints()
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i < start || *i >= start + chunk)
                    .map(|(_, b)| b.clone())
                    .collect();
                let Ok(candidate) = StepFunction::new(cur.tail_left().clone(), kept) else { continue };
                if candidate.len() < n && fails(&candidate) {
                    cur = candidate;
                    continue 'outer;
                }
            }
            chunk /= 2;
        }
        return cur;
    }
}

/// Runs every check on every function; corpus items run in parallel and the
/// report is ordered by id, then check.
pub fn lemma_suite(corpus: &[CorpusItem], opts: &SuiteOptions) -> Result<SuiteReport> {
    if corpus.is_empty() {
        return Err(Error::InvalidArgument("empty corpus".into()));
    }
    let mut items: Vec<&CorpusItem> = corpus.iter().collect();
    items.sort_by_key(|item| item.id);
    let rows = items
        .par_iter()
        .flat_map_iter(|item| {
            let ctx = Ctx { opts, seed: item.id };
            SUITE.iter().map(move |(name, check)| match check(&item.f, &ctx) {
                Ok(()) => SuiteRow { id: item.id, check: name, passed: true, detail: String::new(), witness: None },
                Err(detail) => {
                    let witness = shrink(&item.f, |g| check(g, &ctx).is_err());
                    SuiteRow { id: item.id, check: name, passed: false, detail, witness: Some(witness) }
                }
            })
        })
        .collect();
    Ok(SuiteReport { rows })
}
