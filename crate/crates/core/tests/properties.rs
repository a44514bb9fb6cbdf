use maxvar::envelope::{build_profile, bv_distance, region_e, variation_of_profile};
use maxvar::maximal::{maximal_limit_at_infinity, maximal_value};
use maxvar::stepfn::{Breakpoint, PointEval, Side};
use maxvar::verify::{oracle_maximal, GridSpec};
use maxvar::{Ext, Rat, StepFunction};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| Rat::frac(p, q))
}

/// Up to six breakpoints with positive rational gaps and arbitrary point values.
fn stepfn() -> impl Strategy<Value = StepFunction> {
    let bp = ((1i64..=8, 1i64..=3), rat(), rat(), 0u8..4);
    (rat(), -4i64..=0, prop::collection::vec(bp, 0..=6)).prop_map(|(tail, start, raw)| {
        let mut at = Rat::from_int(start);
        let mut left = tail.clone();
        let mut bps = Vec::new();
        for ((p, q), right, odd, kind) in raw {
            at = at + Rat::frac(p, q);
            let value = match kind {
                0 => odd,
                1 => left.clone(),
                _ => right.clone(),
            };
            bps.push(Breakpoint::new(at.clone(), value, right.clone()));
            left = right;
        }
        StepFunction::new(tail, bps).unwrap()
    })
}

fn eps() -> Rat {
    Rat::frac(1, 1_000_000_000)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn text_round_trip(f in stepfn()) {
        let back: StepFunction = f.to_text().parse().unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.to_text(), f.to_text());
    }

    #[test]
    fn modulus_identity_on_whole_line(f in stepfn()) {
        let (a, b) = (Ext::NegInf, Ext::PosInf);
        let lhs = f.variation_on(&a, &b).unwrap() - f.modulus().variation_on(&a, &b).unwrap();
        prop_assert_eq!(lhs, f.modulus_defect(&a, &b).unwrap());
    }

    #[test]
    fn maximal_function_contracts_variation(f in stepfn()) {
        let var = variation_of_profile(&build_profile(&f), &Ext::NegInf, &Ext::PosInf, &eps()).unwrap();
        prop_assert!(var.hi <= f.variation_on(&Ext::NegInf, &Ext::PosInf).unwrap() + eps());
    }

    #[test]
    fn profile_matches_pointwise_engine(f in stepfn(), x in rat()) {
        let p = build_profile(&f);
        prop_assert_eq!(p.value(&x), maximal_value(&f, &x).value);
        prop_assert_eq!(p.limit_at_infinity(), maximal_limit_at_infinity(&f));
    }

    #[test]
    fn oracle_is_a_lower_bound(f in stepfn(), x in rat()) {
        let m = maximal_value(&f, &x).value;
        prop_assert!(oracle_maximal(&f, &x, &GridSpec::coarse(3)) <= m.clone());
        prop_assert!(m >= f.eval(&x, Side::LeftLimit).abs());
        prop_assert!(m >= f.eval(&x, Side::RightLimit).abs());
    }

    #[test]
    fn maximal_operator_is_uniformly_controlled(f in stepfn(), g in stepfn(), x in rat()) {
        let bound = Rat::from_int(2) * f.sub(&g).bv_norm();
        prop_assert!((f.value_at(&x) - g.value_at(&x)).abs() <= bound.clone());
        prop_assert!((maximal_value(&f, &x).value - maximal_value(&g, &x).value).abs() <= bound);
    }

    #[test]
    fn detachment_set_and_complement_partition_the_line(f in stepfn(), x in rat()) {
        let (e, c) = region_e(&f, &build_profile(&f));
        prop_assert!(e.contains(&x) != c.contains(&x));
    }

    #[test]
    fn distance_is_symmetric_and_vanishes_on_the_diagonal(f in stepfn(), g in stepfn()) {
        let same = bv_distance(&f, &f, &eps()).unwrap();
        prop_assert_eq!(same.exact(), Some(&Rat::zero()));
        let (fg, gf) = (bv_distance(&f, &g, &eps()).unwrap(), bv_distance(&g, &f, &eps()).unwrap());
        prop_assert!(fg.lo <= gf.hi.clone() + eps() && gf.lo <= fg.hi.clone() + eps());
    }
}
