use std::cmp::Ordering;
use std::fmt;

use super::{Enclosure, Rat};
use crate::error::{Error, Result};

/// `a·x² + b·x + c` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quadratic {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
}

impl Quadratic {
    pub fn new(a: Rat, b: Rat, c: Rat) -> Self {
        Quadratic { a, b, c }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        (&self.a * x + &self.b) * x + &self.c
    }

    pub fn discriminant(&self) -> Rat {
        self.b.square() - Rat::from_int(4) * &self.a * &self.c
    }
}

/// Monic irreducible quadratic `x² + b·x + c` with a positive non-square discriminant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Surd {
    b: Rat,
    c: Rat,
    /// true for the larger of the two roots
    upper: bool,
}

impl Surd {
    fn centre(&self) -> Rat {
        -&self.b / Rat::from_int(2)
    }

    fn eval(&self, x: &Rat) -> Rat {
        (x + &self.b) * x + &self.c
    }

    /// Exact position of the root relative to `r`.
    fn cmp_rat(&self, r: &Rat) -> Ordering {
        let m = self.centre();
        if self.upper {
            if *r <= m {
                return Ordering::Greater;
            }
            // r lies right of the lower root, so sign P(r) = sign(r - root)
            if self.eval(r).is_positive() {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        } else {
            if *r >= m {
                return Ordering::Less;
            }
            if self.eval(r).is_positive() {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        }
    }
}

/// A real number that is rational or a root of a rational quadratic, held as a
/// rational enclosure that can be refined to any width.
///
/// Rationals are the width-0 case. Irrational values carry their (monic,
/// irreducible) defining polynomial and the enclosure never straddles the
/// midpoint between the two roots, so it isolates exactly one of them.
#[derive(Clone)]
pub struct AlgebraicValue {
    surd: Option<Surd>,
    lo: Rat,
    hi: Rat,
}

impl AlgebraicValue {
    pub fn from_rat(r: Rat) -> Self {
        AlgebraicValue { surd: None, lo: r.clone(), hi: r }
    }

    /// The unique root of `poly` inside `[lo, hi]`.
    pub fn from_poly_enclosure(poly: &Quadratic, lo: &Rat, hi: &Rat) -> Result<Self> {
        if lo > hi {
            return Err(Error::EmptyInterval { lo: lo.to_string(), hi: hi.to_string() });
        }
        let inside: Vec<_> = isolate_quadratic_roots(poly)?
            .into_iter()
            .filter(|v| v.cmp_rat(lo) != Ordering::Less && v.cmp_rat(hi) != Ordering::Greater)
            .collect();
        match <[AlgebraicValue; 1]>::try_from(inside) {
            Ok([v]) => Ok(v),
            Err(v) => Err(Error::InvalidArgument(format!(
                "[{lo}, {hi}] contains {} roots of the polynomial, expected exactly one",
                v.len()
            ))),
        }
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn enclosure(&self) -> Enclosure {
        Enclosure::new(self.lo.clone(), self.hi.clone())
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        if self.surd.is_none() {
            Some(&self.lo)
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.surd.is_none()
    }

    /// Monic defining polynomial for irrational values.
    pub fn defining_polynomial(&self) -> Option<Quadratic> {
        self.surd
            .as_ref()
            .map(|s| Quadratic::new(Rat::one(), s.b.clone(), s.c.clone()))
    }

    /// Exact comparison of the represented value with a rational.
    pub fn cmp_rat(&self, r: &Rat) -> Ordering {
        match &self.surd {
            None => self.lo.cmp(r),
            Some(s) => {
                if self.hi <= *r {
                    Ordering::Less
                } else if self.lo >= *r {
                    Ordering::Greater
                } else {
                    s.cmp_rat(r)
                }
            }
        }
    }

    /// One bisection step.
    fn bisect(&mut self) {
        if let Some(s) = &self.surd {
            let mid = Rat::midpoint(&self.lo, &self.hi);
            match s.cmp_rat(&mid) {
                Ordering::Less => self.hi = mid,
                _ => self.lo = mid,
            }
        }
    }

    /// A new value whose enclosure has width at most `2^-k`.
    pub fn refine(&self, k: u32) -> Self {
        self.refine_to(&Rat::pow2(-(k as i32)))
    }

    /// A new value whose enclosure has width at most `width` (> 0).
    pub fn refine_to(&self, width: &Rat) -> Self {
        let mut out = self.clone();
        while out.width() > *width {
            out.bisect();
        }
        out
    }

    pub fn midpoint(&self) -> Rat {
        Rat::midpoint(&self.lo, &self.hi)
    }

    pub fn to_f64(&self) -> f64 {
        match &self.surd {
            None => self.lo.to_f64(),
            Some(s) => {
                let m = s.centre().to_f64();
                let d = (s.b.to_f64().powi(2) - 4.0 * s.c.to_f64()).sqrt() / 2.0;
                if s.upper {
                    m + d
                } else {
                    m - d
                }
            }
        }
    }

    /// Decides the order of two values. Distinct surds are separated by
    /// refinement; equal surds are recognised through their shared minimal
    /// polynomial, never by enclosure width.
    pub fn compare(&self, other: &Self) -> Ordering {
        match (&self.surd, &other.surd) {
            (None, None) => self.lo.cmp(&other.lo),
            (None, Some(_)) => other.cmp_rat(&self.lo).reverse(),
            (Some(_), None) => self.cmp_rat(&other.lo),
            (Some(s), Some(t)) => {
                if s.b == t.b && s.c == t.c {
                    // same irreducible polynomial: same root iff same branch
                    return s.upper.cmp(&t.upper);
                }
                let mut x = self.clone();
                let mut y = other.clone();
                loop {
                    if x.hi <= y.lo {
                        return Ordering::Less;
                    }
                    if y.hi <= x.lo {
                        return Ordering::Greater;
                    }
                    if x.width() >= y.width() {
                        x.bisect();
                    } else {
                        y.bisect();
                    }
                }
            }
        }
    }

    /// A rational strictly between `self` and `other`; requires `self < other`.
    pub fn rational_between(&self, other: &Self) -> Rat {
        debug_assert_eq!(self.compare(other), Ordering::Less);
        let mut x = self.clone();
        let mut y = other.clone();
        while x.hi >= y.lo {
            if x.surd.is_some() && (y.surd.is_none() || x.width() >= y.width()) {
                x.bisect();
            } else {
                y.bisect();
            }
        }
        Rat::midpoint(&x.hi, &y.lo)
    }

    /// `mid±halfwidth` at the given enclosure width, or the exact rational.
    pub fn render(&self, width: &Rat, digits: usize) -> String {
        match self.as_rat() {
            Some(r) => r.to_string(),
            None => {
                let v = self.refine_to(width);
                let half = v.width() / Rat::from_int(2);
                format!("{}±{}", v.midpoint().to_decimal(digits), half.to_decimal(digits))
            }
        }
    }
}

impl PartialEq for AlgebraicValue {
    fn eq(&self, other: &Self) -> bool {
        self.compare(other) == Ordering::Equal
    }
}

impl Eq for AlgebraicValue {}

impl PartialOrd for AlgebraicValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AlgebraicValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl From<Rat> for AlgebraicValue {
    fn from(r: Rat) -> Self {
        AlgebraicValue::from_rat(r)
    }
}

impl fmt::Display for AlgebraicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.surd, self.as_rat()) {
            (_, Some(r)) => write!(f, "{r}"),
            (Some(s), None) => {
                let side = if s.upper { "upper" } else { "lower" };
                write!(
                    f,
                    "{} root of x^2 + ({})x + ({}) ≈ {}",
                    side,
                    s.b,
                    s.c,
                    self.render(&Rat::pow2(-34), 9)
                )
            }
            (None, None) => unreachable!(),
        }
    }
}

impl fmt::Debug for AlgebraicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `rational + coeff·√radicand` with a non-square positive radicand, or a plain
/// rational when `coeff` is zero. Values sharing a radicand form a field, so
/// Möbius maps evaluated at a quadratic surd stay exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurdForm {
    pub rational: Rat,
    pub coeff: Rat,
    pub radicand: Rat,
}

impl SurdForm {
    pub fn from_rat(r: Rat) -> Self {
        SurdForm { rational: r, coeff: Rat::zero(), radicand: Rat::zero() }
    }

    fn shared_radicand(&self, other: &SurdForm) -> Rat {
        if self.coeff.is_zero() {
            other.radicand.clone()
        } else {
            debug_assert!(other.coeff.is_zero() || other.radicand == self.radicand, "mixing quadratic fields");
            self.radicand.clone()
        }
    }

    fn with(rational: Rat, coeff: Rat, radicand: Rat) -> Self {
        if coeff.is_zero() {
            SurdForm::from_rat(rational)
        } else {
            SurdForm { rational, coeff, radicand }
        }
    }

    pub fn add(&self, other: &SurdForm) -> SurdForm {
        let q = self.shared_radicand(other);
        Self::with(&self.rational + &other.rational, &self.coeff + &other.coeff, q)
    }

    pub fn sub(&self, other: &SurdForm) -> SurdForm {
        let q = self.shared_radicand(other);
        Self::with(&self.rational - &other.rational, &self.coeff - &other.coeff, q)
    }

    pub fn scale_add(&self, k: &Rat, c: &Rat) -> SurdForm {
        Self::with(k * &self.rational + c, k * &self.coeff, self.radicand.clone())
    }

    pub fn mul(&self, other: &SurdForm) -> SurdForm {
        let q = self.shared_radicand(other);
        let rational = &self.rational * &other.rational + &self.coeff * &other.coeff * &q;
        let coeff = &self.rational * &other.coeff + &self.coeff * &other.rational;
        Self::with(rational, coeff, q)
    }

    pub fn div(&self, other: &SurdForm) -> Result<SurdForm> {
        let q = self.shared_radicand(other);
        let norm = other.rational.square() - other.coeff.square() * &q;
        if norm.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let conj = SurdForm::with(other.rational.clone(), -&other.coeff, q);
        let top = self.mul(&conj);
        Ok(Self::with(&top.rational / &norm, &top.coeff / &norm, top.radicand))
    }

    /// Sign of the represented real number.
    pub fn signum(&self) -> i32 {
        self.to_algebraic().cmp_rat(&Rat::zero()) as i32
    }

    pub fn to_algebraic(&self) -> AlgebraicValue {
        if self.coeff.is_zero() {
            return AlgebraicValue::from_rat(self.rational.clone());
        }
        // y = u + v√q solves y² - 2u·y + (u² - v²q) = 0; v > 0 picks the upper root
        let u = &self.rational;
        let poly = Quadratic::new(
            Rat::one(),
            -(u * Rat::from_int(2)),
            u.square() - self.coeff.square() * &self.radicand,
        );
        let mut roots = isolate_quadratic_roots(&poly).expect("monic polynomial");
        debug_assert_eq!(roots.len(), 2);
        if self.coeff.is_positive() {
            roots.pop().expect("two roots")
        } else {
            roots.swap_remove(0)
        }
    }
}

impl AlgebraicValue {
    /// The value as `centre ± √radicand`.
    pub fn surd_form(&self) -> SurdForm {
        match &self.surd {
            None => SurdForm::from_rat(self.lo.clone()),
            Some(s) => SurdForm {
                rational: s.centre(),
                coeff: if s.upper { Rat::one() } else { -Rat::one() },
                radicand: s.b.square() / Rat::from_int(4) - &s.c,
            },
        }
    }
}

/// Distinct real roots of a polynomial of degree at most two, ascending.
/// Rational roots come back exact.
pub fn isolate_quadratic_roots(p: &Quadratic) -> Result<Vec<AlgebraicValue>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.a.is_zero() {
        if p.b.is_zero() {
            return Ok(Vec::new());
        }
        return Ok(vec![AlgebraicValue::from_rat(-&p.c / &p.b)]);
    }
    let b = &p.b / &p.a;
    let c = &p.c / &p.a;
    let disc = b.square() - Rat::from_int(4) * &c;
    let centre = -&b / Rat::from_int(2);
    if disc.is_negative() {
        return Ok(Vec::new());
    }
    if disc.is_zero() {
        return Ok(vec![AlgebraicValue::from_rat(centre)]);
    }
    if let Some(root) = disc.sqrt_exact() {
        let half = root / Rat::from_int(2);
        return Ok(vec![
            AlgebraicValue::from_rat(&centre - &half),
            AlgebraicValue::from_rat(&centre + &half),
        ]);
    }
    // offset of each root from the centre is sqrt(disc/4) <= max(1, disc/4)
    let quarter = &disc / Rat::from_int(4);
    let reach = Rat::max_of(&Rat::one(), &quarter);
    let lower = AlgebraicValue {
        surd: Some(Surd { b: b.clone(), c: c.clone(), upper: false }),
        lo: &centre - &reach,
        hi: centre.clone(),
    };
    let upper = AlgebraicValue {
        surd: Some(Surd { b, c, upper: true }),
        lo: centre.clone(),
        hi: &centre + &reach,
    };
    Ok(vec![lower, upper])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn quad(a: i64, b: i64, c: i64) -> Quadratic {
        Quadratic::new(Rat::from_int(a), Rat::from_int(b), Rat::from_int(c))
    }

    fn sqrt2() -> AlgebraicValue {
        isolate_quadratic_roots(&quad(1, 0, -2)).unwrap().pop().unwrap()
    }

    #[test]
    fn root_two_refines_below_1e9() {
        let roots = isolate_quadratic_roots(&quad(1, 0, -2)).unwrap();
        assert_eq!(roots.len(), 2);
        let eps = Rat::frac(1, 1_000_000_000);
        for (root, expected) in roots.iter().zip([-std::f64::consts::SQRT_2, std::f64::consts::SQRT_2]) {
            let fine = root.refine_to(&eps);
            assert!(fine.width() <= eps);
            assert!(fine.lo().to_f64() <= expected && expected <= fine.hi().to_f64());
            // the square of the enclosure brackets 2
            let (lo, hi) = (fine.lo().clone(), fine.hi().clone());
            let sq = if lo.is_negative() { (hi.square(), lo.square()) } else { (lo.square(), hi.square()) };
            assert!(sq.0 < Rat::from_int(2) && Rat::from_int(2) < sq.1);
        }
        assert_eq!(roots[0].compare(&roots[1]), Ordering::Less);
    }

    #[test]
    fn rational_roots_are_exact() {
        let roots = isolate_quadratic_roots(&quad(1, 0, -1)).unwrap();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].as_rat(), Some(&Rat::from_int(-1)));
        assert_eq!(roots[1].as_rat(), Some(&Rat::from_int(1)));
        assert!(roots.iter().all(|v| v.width().is_zero()));
    }

    #[test]
    fn no_real_roots() {
        assert!(isolate_quadratic_roots(&quad(1, 0, 1)).unwrap().is_empty());
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(isolate_quadratic_roots(&quad(0, 0, 0)), Err(Error::ZeroPolynomial));
        assert!(isolate_quadratic_roots(&quad(0, 0, 3)).unwrap().is_empty());
        let lin = isolate_quadratic_roots(&quad(0, 2, -1)).unwrap();
        assert_eq!(lin[0].as_rat(), Some(&r("1/2")));
        let double = isolate_quadratic_roots(&quad(1, -2, 1)).unwrap();
        assert_eq!(double.len(), 1);
        assert_eq!(double[0].as_rat(), Some(&Rat::one()));
    }

    #[test]
    fn surd_field_arithmetic() {
        let s = sqrt2().surd_form();
        assert_eq!(s.radicand, Rat::from_int(2));
        // (1 + √2)(1 - √2) = -1
        let a = s.scale_add(&Rat::one(), &Rat::one());
        let b = s.scale_add(&-Rat::one(), &Rat::one());
        assert_eq!(a.mul(&b), SurdForm::from_rat(Rat::from_int(-1)));
        // 1 / (1 + √2) = √2 - 1
        let inv = SurdForm::from_rat(Rat::one()).div(&a).unwrap();
        assert_eq!(inv, s.scale_add(&Rat::one(), &-Rat::one()));
        let v = inv.to_algebraic();
        assert!((v.to_f64() - (std::f64::consts::SQRT_2 - 1.0)).abs() < 1e-12);
        assert_eq!(v.compare(&AlgebraicValue::from_rat(r("2/5"))), Ordering::Greater);
        assert_eq!(v.compare(&AlgebraicValue::from_rat(r("5/12"))), Ordering::Less);
        assert_eq!(b.signum(), -1);
        assert_eq!(a.sub(&a).to_algebraic(), AlgebraicValue::from_rat(Rat::zero()));
        // round trip through the algebraic representation
        assert_eq!(v.surd_form(), inv);
    }

    #[test]
    fn compare_examples() {
        let s = sqrt2();
        assert_eq!(s.compare(&AlgebraicValue::from_rat(r("3/2"))), Ordering::Less);
        assert_eq!(AlgebraicValue::from_rat(Rat::zero()).compare(&s), Ordering::Less);
        let a = AlgebraicValue::from_poly_enclosure(&quad(1, 0, -2), &r("1"), &r("2")).unwrap();
        let b = AlgebraicValue::from_poly_enclosure(&quad(2, 0, -4), &r("1"), &r("2")).unwrap();
        assert_eq!(a.compare(&b), Ordering::Equal);
        assert_eq!(a, b.refine(20));
        assert_ne!(a, AlgebraicValue::from_rat(r("3/2")));
        let lower = isolate_quadratic_roots(&quad(1, 0, -2)).unwrap().remove(0);
        assert_eq!(lower.compare(&s), Ordering::Less);
        // different fields are separated by refinement
        let sqrt3 = isolate_quadratic_roots(&quad(1, 0, -3)).unwrap().pop().unwrap();
        assert_eq!(s.compare(&sqrt3), Ordering::Less);
        assert_eq!(sqrt3.compare(&s), Ordering::Greater);
    }
}
