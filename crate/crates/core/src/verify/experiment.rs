use std::fmt::Write;

use crate::envelope::{build_profile, variation_of_difference, variation_of_profile, VariationEnclosure};
use crate::error::{Error, Result};
use crate::exactnum::{check_precision, Ext, Rat};
use crate::maximal::maximal_limit_at_infinity;
use crate::stepfn::StepFunction;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuityRow {
    pub index: usize,
    pub scale: Rat,
    /// `‖f_j − f‖_BV`
    pub bv_norm: Rat,
    /// `‖M̃f_j − M̃f‖_BV`
    pub distance: VariationEnclosure,
    /// `Var(M̃f_j)`
    pub variation: VariationEnclosure,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuityReport {
    pub rows: Vec<ContinuityRow>,
    /// `Var(M̃f)`
    pub base_variation: VariationEnclosure,
    pub precision: Rat,
}

/// PASS thresholds; calibrations, not theorems.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thresholds {
    /// bound on the last row's distance
    pub final_distance: Rat,
    /// slack allowed when comparing consecutive distances
    pub monotone_tolerance: Rat,
    /// bound on `|mid Var(M̃f_j) − mid Var(M̃f)|`
    pub variation_gap: Rat,
    /// first row index the variation bound applies to
    pub variation_from: usize,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            final_distance: Rat::frac(1, 1000),
            monotone_tolerance: Rat::frac(1, 1_000_000),
            variation_gap: Rat::frac(1, 1000),
            variation_from: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub final_distance_ok: bool,
    /// distances nonincreasing (within tolerance) over the second half of the rows
    pub eventually_nonincreasing: bool,
    pub variation_converges: bool,
    pub worst_variation_gap: Rat,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.final_distance_ok && self.eventually_nonincreasing && self.variation_converges
    }
}

/// Runs `f_j = f + scale_j·perturbation_j` and measures `M̃f_j` against `M̃f`.
pub fn continuity_experiment(
    f: &StepFunction,
    perturbations: &[StepFunction],
    scales: &[Rat],
    precision: &Rat,
) -> Result<ContinuityReport> {
    check_precision(precision)?;
    if perturbations.len() != scales.len() {
        return Err(Error::InvalidArgument(format!(
            "{} perturbations for {} scales",
            perturbations.len(),
            scales.len()
        )));
    }
    if scales.iter().any(|s| !s.is_positive()) || scales.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::InvalidArgument("scales must be positive and strictly decreasing".into()));
    }
    let base = build_profile(f);
    let base_variation = variation_of_profile(&base, &Ext::NegInf, &Ext::PosInf, precision)?;
    let at_infinity = maximal_limit_at_infinity(f);
    let mut rows = Vec::with_capacity(scales.len());
    for (index, (g, s)) in perturbations.iter().zip(scales).enumerate() {
        let fj = StepFunction::linear_combine(f, g, &Rat::one(), s);
        let pj = build_profile(&fj);
        let head = (maximal_limit_at_infinity(&fj) - &at_infinity).abs();
        let var = variation_of_difference(&pj, &base, precision)?;
        let distance = VariationEnclosure { lo: &var.lo + &head, hi: &var.hi + &head, ..var };
        rows.push(ContinuityRow {
            index,
            scale: s.clone(),
            bv_norm: fj.sub(f).bv_norm(),
            distance,
            variation: variation_of_profile(&pj, &Ext::NegInf, &Ext::PosInf, precision)?,
        });
    }
    Ok(ContinuityReport { rows, base_variation, precision: precision.clone() })
}

impl ContinuityReport {
    pub fn verdict(&self, t: &Thresholds) -> Verdict {
        let final_distance_ok = self.rows.last().map_or(true, |r| r.distance.hi <= t.final_distance);
        let tail = &self.rows[self.rows.len() / 2..];
        let eventually_nonincreasing =
            tail.windows(2).all(|w| w[1].distance.lo <= &w[0].distance.hi + &t.monotone_tolerance);
        let base_mid = self.base_variation.midpoint();
        let worst_variation_gap = self
            .rows
            .iter()
            .filter(|r| r.index >= t.variation_from)
            .map(|r| (r.variation.midpoint() - &base_mid).abs())
            .max()
            .unwrap_or_else(Rat::zero);
        Verdict {
            final_distance_ok,
            eventually_nonincreasing,
            variation_converges: worst_variation_gap <= t.variation_gap,
            worst_variation_gap,
        }
    }

    /// Header row, then one row per index; enclosures as `lo..hi`.
    pub fn to_tsv(&self, decimal: Option<usize>) -> String {
        let mut out = String::from("j\tscale\tbv_norm\tbv_distance\tvar_profile\tvar_base");
        if decimal.is_some() {
            out.push_str("\tbv_distance_dec\tvar_profile_dec");
        }
        out.push('\n');
        for r in &self.rows {
            let _ = write!(
                out,
                "{}\t{}\t{}\t{}..{}\t{}..{}\t{}..{}",
                r.index,
                r.scale,
                r.bv_norm,
                r.distance.lo,
                r.distance.hi,
                r.variation.lo,
                r.variation.hi,
                self.base_variation.lo,
                self.base_variation.hi
            );
            if let Some(k) = decimal {
                let _ = write!(out, "\t{}\t{}", r.distance.midpoint().to_decimal(k), r.variation.midpoint().to_decimal(k));
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stepfn::tests::{r, two_bump, unit_box};

    fn harmonic(n: i64) -> Vec<Rat> {
        (1..=n).map(|j| Rat::frac(1, j)).collect()
    }

    #[test]
    fn zero_perturbation_gives_zero_distance() {
        let f = two_bump();
        let zeros = vec![StepFunction::zero(); 4];
        let rep = continuity_experiment(&f, &zeros, &harmonic(4), &r("1/1000000")).unwrap();
        assert!(rep.rows.iter().all(|row| row.distance.exact() == Some(&Rat::zero())));
        assert!(rep.verdict(&Thresholds::default()).passed());
    }

    #[test]
    fn unit_box_scaled_by_itself() {
        let f = unit_box();
        let scales: Vec<Rat> = [1, 10, 100, 10_000].iter().map(|j| Rat::frac(1, *j)).collect();
        let rep = continuity_experiment(&f, &vec![f.clone(); 4], &scales, &r("1/1000000000")).unwrap();
        for row in &rep.rows {
            assert_eq!(row.bv_norm, Rat::from_int(2) * &row.scale);
            // M̃f_j = (1 + s)·M̃f
            assert_eq!(row.distance.exact(), Some(&(Rat::from_int(2) * &row.scale)));
        }
        assert!(rep.rows[3].distance.hi < r("1/1000"));
        let tsv = rep.to_tsv(Some(4));
        assert!(tsv.starts_with("j\tscale"));
        assert_eq!(tsv.lines().count(), 5);
        assert!(tsv.contains("1/5000..1/5000"));
    }

    #[test]
    fn malformed_schedules_are_rejected() {
        let f = unit_box();
        let gs = vec![f.clone(); 2];
        assert!(continuity_experiment(&f, &gs, &[r("1/2"), r("1")], &r("1/10")).is_err());
        assert!(continuity_experiment(&f, &gs, &[r("1")], &r("1/10")).is_err());
        assert!(continuity_experiment(&f, &gs, &[r("1"), r("0")], &r("1/10")).is_err());
        assert!(continuity_experiment(&f, &gs, &[r("1"), r("1/2")], &r("0")).is_err());
    }
}
