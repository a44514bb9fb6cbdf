use std::fmt;

use crate::exactnum::{AlgebraicValue, Ext, Quadratic, Rat, SurdForm};

/// `x ↦ (α + βx) / (γ + δx)`, normalised so that equal maps have equal
/// coefficients: constants are `(c, 0, 1, 0)`, everything else has `δ = 1`
/// (or `γ = 1` when `δ = 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Moebius {
    pub alpha: Rat,
    pub beta: Rat,
    pub gamma: Rat,
    pub delta: Rat,
}

impl Moebius {
    /// Panics if the denominator is identically zero.
    pub fn new(alpha: Rat, beta: Rat, gamma: Rat, delta: Rat) -> Self {
        assert!(!(gamma.is_zero() && delta.is_zero()), "zero denominator");
        let det = &beta * &gamma - &alpha * &delta;
        if det.is_zero() {
            let c = if gamma.is_zero() { &beta / &delta } else { &alpha / &gamma };
            return Moebius::constant(c);
        }
        let s = if delta.is_zero() { gamma.clone() } else { delta.clone() };
        Moebius { alpha: alpha / &s, beta: beta / &s, gamma: gamma / &s, delta: delta / &s }
    }

    pub fn constant(c: Rat) -> Self {
        Moebius { alpha: c, beta: Rat::zero(), gamma: Rat::one(), delta: Rat::zero() }
    }

    /// `βγ − αδ`; the derivative is this over the squared denominator.
    pub fn determinant(&self) -> Rat {
        &self.beta * &self.gamma - &self.alpha * &self.delta
    }

    pub fn is_constant(&self) -> bool {
        self.beta.is_zero() && self.delta.is_zero()
    }

    /// +1 increasing, -1 decreasing, 0 constant (on any pole-free interval).
    pub fn direction(&self) -> i32 {
        self.determinant().signum()
    }

    pub fn denominator_at(&self, x: &Rat) -> Rat {
        &self.gamma + &self.delta * x
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        (&self.alpha + &self.beta * x) / self.denominator_at(x)
    }

    pub fn derivative(&self, x: &Rat) -> Rat {
        self.determinant() / self.denominator_at(x).square()
    }

    pub fn eval_surd(&self, x: &SurdForm) -> SurdForm {
        let num = x.scale_add(&self.beta, &self.alpha);
        let den = x.scale_add(&self.delta, &self.gamma);
        num.div(&den).expect("evaluation away from the pole")
    }

    pub fn eval_algebraic(&self, x: &AlgebraicValue) -> AlgebraicValue {
        match x.as_rat() {
            Some(r) => AlgebraicValue::from_rat(self.eval(r)),
            None => self.eval_surd(&x.surd_form()).to_algebraic(),
        }
    }

    /// Common limit at `±∞`; only bounded maps (constant or `δ ≠ 0`) occur here.
    pub fn limit_at_infinity(&self) -> Rat {
        if self.delta.is_zero() {
            debug_assert!(self.beta.is_zero(), "unbounded map {self}");
            &self.alpha / &self.gamma
        } else {
            &self.beta / &self.delta
        }
    }

    pub fn eval_ext(&self, x: &Ext<AlgebraicValue>) -> SurdForm {
        match x {
            Ext::Finite(v) => self.eval_surd(&v.surd_form()),
            _ => SurdForm::from_rat(self.limit_at_infinity()),
        }
    }
}

impl fmt::Display for Moebius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}x)/({} + {}x)", self.alpha, self.beta, self.gamma, self.delta)
    }
}

/// `num_g·den_h − num_h·den_g`: vanishes exactly where `g = h`.
pub(crate) fn crossing_polynomial(g: &Moebius, h: &Moebius) -> Quadratic {
    let a = &g.beta * &h.delta - &h.beta * &g.delta;
    let b = &g.alpha * &h.delta + &g.beta * &h.gamma - &h.alpha * &g.delta - &h.beta * &g.gamma;
    let c = &g.alpha * &h.gamma - &h.alpha * &g.gamma;
    Quadratic::new(a, b, c)
}

/// `det_g·den_h² − det_h·den_g²`: vanishes exactly where `(g − h)' = 0`.
pub(crate) fn critical_polynomial(g: &Moebius, h: &Moebius) -> Quadratic {
    let (dg, dh) = (g.determinant(), h.determinant());
    let two = Rat::from_int(2);
    let a = &dg * h.delta.square() - &dh * g.delta.square();
    let b = &dg * &two * &h.gamma * &h.delta - &dh * &two * &g.gamma * &g.delta;
    let c = &dg * h.gamma.square() - &dh * g.gamma.square();
    Quadratic::new(a, b, c)
}
