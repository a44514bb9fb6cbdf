//! Exact numeric substrate: rationals, quadratic surds and rational enclosures.

mod algebraic;
mod rat;

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

pub use algebraic::{isolate_quadratic_roots, AlgebraicValue, Quadratic, SurdForm};
pub use rat::{rat_arith, ArithOp, Rat};

use crate::error::{Error, Result};

/// Closed rational interval `[lo, hi]` certified to contain some real value.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Enclosure {
    pub lo: Rat,
    pub hi: Rat,
}

impl Enclosure {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        debug_assert!(lo <= hi, "enclosure {lo}..{hi} is inverted");
        Enclosure { lo, hi }
    }

    pub fn point(r: Rat) -> Self {
        Enclosure { lo: r.clone(), hi: r }
    }

    pub fn zero() -> Self {
        Self::point(Rat::zero())
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rat {
        Rat::midpoint(&self.lo, &self.hi)
    }

    pub fn contains(&self, r: &Rat) -> bool {
        self.lo <= *r && *r <= self.hi
    }

    pub fn intersects(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn scale(&self, k: &Rat) -> Enclosure {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if a <= b {
            Enclosure::new(a, b)
        } else {
            Enclosure::new(b, a)
        }
    }

    pub fn abs(&self) -> Enclosure {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self
        } else {
            Enclosure::new(Rat::zero(), Rat::max_of(&-&self.lo, &self.hi))
        }
    }

    /// Clamps to `[0, ∞)`, for quantities known to be nonnegative.
    pub fn nonnegative(self) -> Enclosure {
        let lo = Rat::max_of(&self.lo, &Rat::zero());
        let hi = Rat::max_of(&self.hi, &Rat::zero());
        Enclosure::new(lo, hi)
    }
}

impl Add for &Enclosure {
    type Output = Enclosure;
    fn add(self, rhs: &Enclosure) -> Enclosure {
        Enclosure::new(&self.lo + &rhs.lo, &self.hi + &rhs.hi)
    }
}

impl Sub for &Enclosure {
    type Output = Enclosure;
    fn sub(self, rhs: &Enclosure) -> Enclosure {
        Enclosure::new(&self.lo - &rhs.hi, &self.hi - &rhs.lo)
    }
}

impl Neg for &Enclosure {
    type Output = Enclosure;
    fn neg(self) -> Enclosure {
        Enclosure::new(-&self.hi, -&self.lo)
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

/// A point of the extended real line.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum Ext<T> {
    NegInf,
    Finite(T),
    PosInf,
}

impl<T> Ext<T> {
    pub fn finite(&self) -> Option<&T> {
        match self {
            Ext::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn map<U>(&self, f: impl FnOnce(&T) -> U) -> Ext<U> {
        match self {
            Ext::NegInf => Ext::NegInf,
            Ext::Finite(v) => Ext::Finite(f(v)),
            Ext::PosInf => Ext::PosInf,
        }
    }
}

impl Ext<Rat> {
    pub fn to_algebraic(&self) -> Ext<AlgebraicValue> {
        self.map(|r| AlgebraicValue::from_rat(r.clone()))
    }
}

impl<T: fmt::Display> fmt::Display for Ext<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::NegInf => write!(f, "-inf"),
            Ext::Finite(v) => write!(f, "{v}"),
            Ext::PosInf => write!(f, "inf"),
        }
    }
}

impl FromStr for Ext<Rat> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "-inf" => Ok(Ext::NegInf),
            "inf" | "+inf" => Ok(Ext::PosInf),
            _ => s.parse().map(Ext::Finite),
        }
    }
}

/// Rejects nonpositive precisions.
pub fn check_precision(precision: &Rat) -> Result<()> {
    if precision.is_positive() {
        Ok(())
    } else {
        Err(Error::NonPositivePrecision(precision.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small_rat() -> impl Strategy<Value = Rat> {
        (-60i64..60, 1i64..25).prop_map(|(n, d)| Rat::frac(n, d))
    }

    proptest! {
        #[test]
        fn field_axioms_hold_exactly(a in small_rat(), b in small_rat(), c in small_rat()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            if !b.is_zero() {
                prop_assert_eq!(&a.checked_div(&b).unwrap() * &b, a.clone());
            }
        }

        #[test]
        fn rational_roundtrips_through_text(a in small_rat()) {
            prop_assert_eq!(a.to_string().parse::<Rat>().unwrap(), a);
        }

        #[test]
        fn refinement_is_nested_and_keeps_the_root(a in 1i64..5, b in -20i64..20, c in -20i64..20, k in 1u32..40) {
            let q = Quadratic::new(Rat::from_int(a), Rat::from_int(b), Rat::from_int(c));
            for root in isolate_quadratic_roots(&q).unwrap() {
                let coarse = root.refine(k / 2);
                let fine = coarse.refine(k);
                prop_assert!(fine.width() <= Rat::pow2(-(k as i32)));
                prop_assert!(coarse.lo() <= fine.lo() && fine.hi() <= coarse.hi());
                prop_assert_eq!(fine.compare(&root), std::cmp::Ordering::Equal);
                let x = root.to_f64();
                prop_assert!(fine.lo().to_f64() <= x + 1e-12 && x - 1e-12 <= fine.hi().to_f64());
            }
        }

        #[test]
        fn compare_agrees_with_floats(a in -30i64..30, b in -30i64..30, c in -30i64..30, d in -30i64..30) {
            let p = Quadratic::new(Rat::one(), Rat::from_int(a), Rat::from_int(b));
            let q = Quadratic::new(Rat::one(), Rat::from_int(c), Rat::from_int(d));
            for x in isolate_quadratic_roots(&p).unwrap() {
                for y in isolate_quadratic_roots(&q).unwrap() {
                    let (fx, fy) = (x.to_f64(), y.to_f64());
                    if (fx - fy).abs() > 1e-6 {
                        prop_assert_eq!(x.compare(&y), fx.partial_cmp(&fy).unwrap());
                        prop_assert_eq!(y.compare(&x), fy.partial_cmp(&fx).unwrap());
                    }
                    if x.compare(&y) == std::cmp::Ordering::Less {
                        let m = x.rational_between(&y);
                        prop_assert_eq!(x.cmp_rat(&m), std::cmp::Ordering::Less);
                        prop_assert_eq!(y.cmp_rat(&m), std::cmp::Ordering::Greater);
                    }
                }
            }
        }
    }

    #[test]
    fn enclosure_arithmetic() {
        let a = Enclosure::new(Rat::from_int(-1), Rat::from_int(2));
        let b = Enclosure::new(Rat::from_int(3), Rat::from_int(4));
        assert_eq!((&a + &b).to_string(), "2..6");
        assert_eq!((&a - &b).to_string(), "-5..-1");
        assert_eq!(a.abs().to_string(), "0..2");
        assert_eq!((-&b).abs().to_string(), "3..4");
        assert!(a.intersects(&Enclosure::point(Rat::from_int(2))));
        assert!(!a.intersects(&b));
    }

    #[test]
    fn extended_endpoints_parse_and_order() {
        let lo: Ext<Rat> = "-inf".parse().unwrap();
        let hi: Ext<Rat> = "inf".parse().unwrap();
        let mid: Ext<Rat> = "3/4".parse().unwrap();
        assert!(lo < mid && mid < hi);
        assert_eq!(mid.to_string(), "3/4");
        assert!("infinity".parse::<Ext<Rat>>().is_err());
    }

    #[test]
    fn precision_must_be_positive() {
        assert!(check_precision(&Rat::frac(1, 10)).is_ok());
        assert!(check_precision(&Rat::zero()).is_err());
        assert!(check_precision(&Rat::from_int(-1)).is_err());
    }
}
