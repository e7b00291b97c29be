//! Truncated power series over an arbitrary coefficient ring.
//!
//! A series stores the coefficients it knows, an explicit truncation order
//! (coefficients of `x^e` for `e > order` are unknown, not zero), and a
//! variable tag. Negative exponents are allowed so that products with `1/L`
//! on the orbifold side stay representable; precision is tracked through
//! them.

use std::fmt;

use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::arith::{rat, rational_to_string, Field, Rational, Ring};
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Var {
    Q,
    Psi,
    Z,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::Q => "q",
            Var::Psi => "psi",
            Var::Z => "z",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Rational series, the common case.
pub type Series = TruncSeries<Rational>;

/// `sum_{e <= order} c_e x^e + O(x^{order+1})`.
#[derive(Clone, Debug)]
pub struct TruncSeries<C = Rational> {
    var: Var,
    /// Exponent of `coeffs[0]`.
    start: i64,
    /// Trimmed: no leading or trailing zeros.
    coeffs: Vec<C>,
    order: i64,
    zero: C,
}

impl<C: Ring> PartialEq for TruncSeries<C> {
    fn eq(&self, other: &Self) -> bool {
        self.var == other.var
            && self.order == other.order
            && self.start == other.start
            && self.coeffs == other.coeffs
    }
}

impl<C: Ring> TruncSeries<C> {
    /// Series with `coeffs[i]` the coefficient of `x^(start + i)`.
    pub fn new(var: Var, start: i64, coeffs: Vec<C>, order: i64, zero: C) -> Self {
        let mut s = Self {
            var,
            start,
            coeffs,
            order,
            zero,
        };
        s.normalize();
        s
    }

    pub fn zero_with(var: Var, zero: C, order: i64) -> Self {
        Self::new(var, 0, Vec::new(), order, zero)
    }

    pub fn constant(var: Var, c: C, order: i64) -> Self {
        let zero = c.zero_like();
        Self::new(var, 0, vec![c], order, zero)
    }

    pub fn monomial(var: Var, exponent: i64, c: C, order: i64) -> Self {
        let zero = c.zero_like();
        Self::new(var, exponent, vec![c], order, zero)
    }

    fn normalize(&mut self) {
        let keep = (self.order - self.start + 1).max(0) as usize;
        self.coeffs.truncate(keep);
        while self.coeffs.last().is_some_and(Ring::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.start += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.start = 0;
        }
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn zero_coeff(&self) -> &C {
        &self.zero
    }

    /// Coefficient of `x^e`; zero for unstored exponents (including `e > order`,
    /// which callers must not rely on).
    pub fn coeff(&self, e: i64) -> &C {
        let i = e - self.start;
        if i < 0 || i as usize >= self.coeffs.len() {
            &self.zero
        } else {
            &self.coeffs[i as usize]
        }
    }

    /// First exponent with a nonzero coefficient, or `order + 1` for a series
    /// that vanishes to its truncation.
    pub fn valuation(&self) -> i64 {
        if self.coeffs.is_empty() {
            self.order + 1
        } else {
            self.start
        }
    }

    /// Largest stored exponent, if any.
    pub fn degree(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then(|| self.start + self.coeffs.len() as i64 - 1)
    }

    /// Nonzero `(exponent, coefficient)` pairs in increasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.start + i as i64, c))
    }

    pub fn is_zero_to_order(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Same series with the truncation lowered to `min(order, new_order)`.
    pub fn truncate(&self, new_order: i64) -> Self {
        let mut s = self.clone();
        s.order = s.order.min(new_order);
        s.normalize();
        s
    }

    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        let mut s = self.clone();
        if !s.coeffs.is_empty() {
            s.start += k;
        }
        s.order += k;
        s
    }

    /// Replaces each coefficient `c_e` by `f(e, c_e)`.
    pub fn map_terms(&self, f: impl Fn(i64, &C) -> C) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| f(self.start + i as i64, c))
            .collect();
        Self::new(self.var, self.start, coeffs, self.order, self.zero.clone())
    }

    /// Agreement of all coefficients through `x^through` (both series must be
    /// known that far).
    pub fn agrees_through(&self, other: &Self, through: i64) -> bool {
        if self.order < through || other.order < through {
            return false;
        }
        let lo = self.start.min(other.start);
        (lo..=through).all(|e| self.coeff(e) == other.coeff(e))
    }

    /// `x d/dx`, preserving the truncation order.
    pub fn d_operator(&self) -> Result<Self> {
        if self.var == Var::Z {
            return Err(Error::WrongVariable("z"));
        }
        Ok(self.map_terms(|e, c| c.scaled(&rat(e, 1))))
    }

    /// Inverse of `x d/dx` with zero constant term.
    pub fn integrate(&self) -> Result<Self> {
        if self.var == Var::Z {
            return Err(Error::WrongVariable("z"));
        }
        let c0 = self.coeff(0);
        if !c0.is_zero() && self.order >= 0 {
            return Err(Error::NonIntegrable(format!("{c0:?}")));
        }
        Ok(self.map_terms(|e, c| if e == 0 { c.zero_like() } else { c.scaled(&rat(1, e)) }))
    }

    /// `exp(f)` for `f` with positive valuation, via `D E = (D f) E`.
    pub fn exp(&self) -> Result<Self> {
        if self.start < 1 && !self.coeffs.is_empty() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order.max(0) as usize;
        let one = self.zero.one_like();
        let mut e: Vec<C> = Vec::with_capacity(n + 1);
        e.push(one);
        for m in 1..=n {
            let mut acc = self.zero.clone();
            for k in 1..=m {
                let fk = self.coeff(k as i64);
                if fk.is_zero() || e[m - k].is_zero() {
                    continue;
                }
                acc = acc.plus(&fk.times(&e[m - k]).scaled(&rat(k as i64, 1)));
            }
            e.push(acc.scaled(&rat(1, m as i64)));
        }
        Ok(Self::new(self.var, 0, e, self.order, self.zero.clone()))
    }

    fn binary(&self, other: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        let order = self.order.min(other.order);
        if self.coeffs.is_empty() && other.coeffs.is_empty() {
            return Self::zero_with(self.var, self.zero.clone(), order);
        }
        let lo = match (self.coeffs.is_empty(), other.coeffs.is_empty()) {
            (true, _) => other.start,
            (_, true) => self.start,
            _ => self.start.min(other.start),
        };
        let coeffs = (lo..=order).map(|e| f(self.coeff(e), other.coeff(e))).collect();
        Self::new(self.var, lo, coeffs, order, self.zero.clone())
    }

    /// Order of a product: the minimum of the operand orders, lowered further
    /// when an operand has a pole.
    fn product_order(&self, other: &Self) -> i64 {
        let va = self.valuation().min(0);
        let vb = other.valuation().min(0);
        (self.order + vb).min(other.order + va)
    }
}

impl<C: Ring> Ring for TruncSeries<C> {
    fn zero_like(&self) -> Self {
        Self::zero_with(self.var, self.zero.clone(), self.order)
    }

    fn one_like(&self) -> Self {
        Self::constant(self.var, self.zero.one_like(), self.order)
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn plus(&self, other: &Self) -> Self {
        self.binary(other, |a, b| a.plus(b))
    }

    fn minus(&self, other: &Self) -> Self {
        self.binary(other, |a, b| a.minus(b))
    }

    fn times(&self, other: &Self) -> Self {
        let order = self.product_order(other);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero_with(self.var, self.zero.clone(), order);
        }
        let lo = self.start + other.start;
        if lo > order {
            return Self::zero_with(self.var, self.zero.clone(), order);
        }
        let len = (order - lo + 1) as usize;
        let mut out: Vec<C> = vec![self.zero.clone(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let k = i + j;
                if k >= len {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                out[k] = out[k].plus(&a.times(b));
            }
        }
        Self::new(self.var, lo, out, order, self.zero.clone())
    }

    fn negated(&self) -> Self {
        self.map_terms(|_, c| c.negated())
    }

    fn scaled(&self, r: &Rational) -> Self {
        if Zero::is_zero(r) {
            return self.zero_like();
        }
        self.map_terms(|_, c| c.scaled(r))
    }
}

impl<C: Field> TruncSeries<C> {
    /// `1/f` for any `f` that does not vanish to its truncation order.
    ///
    /// If `f = x^v u` with `u` a unit known through relative order `r`, the
    /// inverse is `x^{-v} u^{-1}`, known through absolute order `r - v`.
    pub fn inverse(&self) -> Result<Self> {
        if self.coeffs.is_empty() {
            return Err(Error::NonInvertibleDivision {
                detail: format!("divisor vanishes through {}^{}", self.var, self.order),
            });
        }
        let v = self.start;
        let rel = self.order - v;
        let a0_inv = self.coeffs[0].inverse()?;
        let mut r: Vec<C> = Vec::with_capacity(rel as usize + 1);
        r.push(a0_inv.clone());
        for n in 1..=rel as usize {
            let mut acc = self.zero.clone();
            for k in 1..=n.min(self.coeffs.len() - 1) {
                if self.coeffs[k].is_zero() {
                    continue;
                }
                acc = acc.plus(&self.coeffs[k].times(&r[n - k]));
            }
            r.push(acc.times(&a0_inv).negated());
        }
        Ok(Self::new(self.var, -v, r, rel - v, self.zero.clone()))
    }

    /// `self / g`, cancelling a common power of `x` first.
    pub fn div(&self, g: &Self) -> Result<Self> {
        if g.coeffs.is_empty() {
            return Err(Error::NonInvertibleDivision {
                detail: format!("divisor vanishes through {}^{}", g.var, g.order),
            });
        }
        let v = g.start;
        let unit = g.shift(-v);
        let num = self.shift(-v);
        let q = num.times(&unit.inverse()?);
        Ok(q.truncate(self.order.min(g.order)))
    }
}

impl TruncSeries<Rational> {
    /// Rational series `sum_i coeffs[i] x^i + O(x^{order+1})`.
    pub fn from_rationals(var: Var, coeffs: Vec<Rational>, order: i64) -> Self {
        Self::new(var, 0, coeffs, order, Rational::zero())
    }

    pub fn rational_constant(var: Var, c: Rational, order: i64) -> Self {
        Self::constant(var, c, order)
    }

    /// `(1 + c x^step)^alpha`, binomial series.
    pub fn binomial(var: Var, alpha: &Rational, c: &Rational, step: i64, order: i64) -> Self {
        let mut coeffs = vec![Rational::zero(); order.max(0) as usize + 1];
        let mut term = Rational::from_integer(1.into());
        let mut k = 0i64;
        while k * step <= order {
            coeffs[(k * step) as usize] = term.clone();
            term = term * (alpha - rat(k, 1)) / rat(k + 1, 1) * c;
            k += 1;
        }
        Self::from_rationals(var, coeffs, order)
    }
}

impl fmt::Display for TruncSeries<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*{}", self.var)?,
                _ => write!(f, "({c})*{}^{e}", self.var)?,
            }
        }
        if !first {
            f.write_str(" + ")?;
        }
        write!(f, "O({}^{})", self.var, self.order + 1)
    }
}

/// `{"var", "order", "start", "coeffs"}` with `coeffs[i]` the `p/q` string of
/// the coefficient of `x^(start+i)`, dense through `order`. `start` is 0
/// unless the series has a pole.
impl Serialize for TruncSeries<Rational> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let start = self.valuation().min(0);
        let coeffs: Vec<String> =
            (start..=self.order).map(|e| rational_to_string(self.coeff(e))).collect();
        let mut s = serializer.serialize_struct("TruncSeries", 4)?;
        s.serialize_field("var", self.var.name())?;
        s.serialize_field("order", &self.order)?;
        s.serialize_field("start", &start)?;
        s.serialize_field("coeffs", &coeffs)?;
        s.end()
    }
}

/// Free-function form of [`TruncSeries::d_operator`].
pub fn d_operator<C: Ring>(f: &TruncSeries<C>) -> Result<TruncSeries<C>> {
    f.d_operator()
}

pub fn series_div<C: Field>(f: &TruncSeries<C>, g: &TruncSeries<C>) -> Result<TruncSeries<C>> {
    f.div(g)
}

pub fn series_exp<C: Ring>(f: &TruncSeries<C>) -> Result<TruncSeries<C>> {
    f.exp()
}
