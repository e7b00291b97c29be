//! The cyclotomic field Q(zeta) for a primitive fifth root of unity, and its
//! tensor products with other rings.
//!
//! An element is stored as `a0 + a1 zeta + a2 zeta^2 + a3 zeta^3`; products are
//! reduced with `zeta^4 = -(1 + zeta + zeta^2 + zeta^3)` and `zeta^5 = 1`.

use std::fmt;

use num_traits::{One, Zero};
use serde::ser::SerializeTuple;
use serde::{Serialize, Serializer};

use super::{rational_to_string, Field, Rational, Ring};
use crate::error::{Error, Result};

/// `T[zeta] / (1 + zeta + zeta^2 + zeta^3 + zeta^4)`.
///
/// With `T = Rational` this is the field Q(zeta); with `T` a series or
/// differential-ring type it is the scalar extension used by the R-matrices.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Cyclotomic<T> {
    coeffs: [T; 4],
}

pub type Cyclotomic5 = Cyclotomic<Rational>;

impl<T: Ring> Cyclotomic<T> {
    pub fn from_coeffs(coeffs: [T; 4]) -> Self {
        Self { coeffs }
    }

    /// Embeds `t` as `t * zeta^0`.
    pub fn from_base(t: T) -> Self {
        let z = t.zero_like();
        Self {
            coeffs: [t, z.clone(), z.clone(), z],
        }
    }

    /// `c * t` for a field scalar `c`.
    pub fn from_scalar(c: &Cyclotomic5, t: &T) -> Self {
        Self {
            coeffs: std::array::from_fn(|m| t.scaled(&c.coeffs[m])),
        }
    }

    pub fn coeffs(&self) -> &[T; 4] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> [T; 4] {
        self.coeffs
    }

    /// The `zeta^0` component.
    pub fn base(&self) -> &T {
        &self.coeffs[0]
    }

    /// True when the zeta, zeta^2, zeta^3 components vanish.
    pub fn is_base(&self) -> bool {
        self.coeffs[1..].iter().all(Ring::is_zero)
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Cyclotomic<U> {
        Cyclotomic {
            coeffs: std::array::from_fn(|m| f(&self.coeffs[m])),
        }
    }

    /// Multiplies by `zeta^k`.
    pub fn mul_zeta_power(&self, k: i64) -> Self {
        let k = k.rem_euclid(5) as usize;
        let zero = self.coeffs[0].zero_like();
        let mut wide: [T; 5] = std::array::from_fn(|_| zero.clone());
        for (e, c) in self.coeffs.iter().enumerate() {
            wide[(e + k) % 5] = c.clone();
        }
        Self::reduce5(wide)
    }

    /// Multiplies by a field scalar without forming `T`-products.
    pub fn times_scalar(&self, c: &Cyclotomic5) -> Self {
        let zero = self.coeffs[0].zero_like();
        let mut wide: [T; 7] = std::array::from_fn(|_| zero.clone());
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, r) in c.coeffs.iter().enumerate() {
                if Zero::is_zero(r) {
                    continue;
                }
                wide[i + j] = wide[i + j].plus(&a.scaled(r));
            }
        }
        let [w0, w1, w2, w3, w4, w5, w6] = wide;
        Self::reduce5([w0.plus(&w5), w1.plus(&w6), w2, w3, w4])
    }

    /// Galois automorphism `zeta -> zeta^m`, `m` coprime to 5.
    pub fn galois(&self, m: i64) -> Self {
        let zero = self.coeffs[0].zero_like();
        let mut wide: [T; 5] = std::array::from_fn(|_| zero.clone());
        for (e, c) in self.coeffs.iter().enumerate() {
            let t = (e as i64 * m).rem_euclid(5) as usize;
            wide[t] = wide[t].plus(c);
        }
        Self::reduce5(wide)
    }

    fn reduce5(wide: [T; 5]) -> Self {
        let [a0, a1, a2, a3, a4] = wide;
        Self {
            coeffs: [a0.minus(&a4), a1.minus(&a4), a2.minus(&a4), a3.minus(&a4)],
        }
    }
}

impl<T: Ring> Ring for Cyclotomic<T> {
    fn zero_like(&self) -> Self {
        let z = self.coeffs[0].zero_like();
        Self {
            coeffs: [z.clone(), z.clone(), z.clone(), z],
        }
    }

    fn one_like(&self) -> Self {
        Self::from_base(self.coeffs[0].one_like())
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Ring::is_zero)
    }

    fn plus(&self, other: &Self) -> Self {
        Self {
            coeffs: std::array::from_fn(|m| self.coeffs[m].plus(&other.coeffs[m])),
        }
    }

    fn minus(&self, other: &Self) -> Self {
        Self {
            coeffs: std::array::from_fn(|m| self.coeffs[m].minus(&other.coeffs[m])),
        }
    }

    fn times(&self, other: &Self) -> Self {
        let zero = self.coeffs[0].zero_like();
        let mut wide: [T; 7] = std::array::from_fn(|_| zero.clone());
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                wide[i + j] = wide[i + j].plus(&a.times(b));
            }
        }
        let [w0, w1, w2, w3, w4, w5, w6] = wide;
        // zeta^5 = 1, zeta^6 = zeta
        Self::reduce5([w0.plus(&w5), w1.plus(&w6), w2, w3, w4])
    }

    fn negated(&self) -> Self {
        Self {
            coeffs: std::array::from_fn(|m| self.coeffs[m].negated()),
        }
    }

    fn scaled(&self, r: &Rational) -> Self {
        Self {
            coeffs: std::array::from_fn(|m| self.coeffs[m].scaled(r)),
        }
    }
}

impl Cyclotomic5 {
    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::from_base(r)
    }

    /// The rational value, or an error naming the nonzero zeta-components.
    pub fn to_rational(&self, context: &str) -> Result<Rational> {
        if self.is_base() {
            Ok(self.coeffs[0].clone())
        } else {
            Err(Error::NotRational {
                context: context.to_string(),
                components: self.coeffs[1..].iter().map(rational_to_string).collect(),
            })
        }
    }

    /// Field norm `prod_{m=1..4} sigma_m(self)`, a rational number.
    pub fn norm(&self) -> Rational {
        let p = self.times(&self.galois(2)).times(&self.galois(3)).times(&self.galois(4));
        debug_assert!(p.is_base());
        p.coeffs[0].clone()
    }
}

impl Field for Cyclotomic5 {
    /// `a^{-1} = sigma_2(a) sigma_3(a) sigma_4(a) / N(a)`.
    fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let conj = self.galois(2).times(&self.galois(3)).times(&self.galois(4));
        let n = self.times(&conj);
        let n = n.to_rational("cyclotomic norm")?;
        Ok(conj.scaled(&n.recip()))
    }
}

impl fmt::Display for Cyclotomic5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate() {
            if Zero::is_zero(c) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*zeta")?,
                _ => write!(f, "({c})*zeta^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Serialized as the 4-tuple of `p/q` coefficient strings.
impl Serialize for Cyclotomic5 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = serializer.serialize_tuple(4)?;
        for c in &self.coeffs {
            t.serialize_element(&rational_to_string(c))?;
        }
        t.end()
    }
}

/// `zeta^(k mod 5)` in the canonical basis.
pub fn zeta_power(k: i64) -> Cyclotomic5 {
    Cyclotomic5::one().mul_zeta_power(k)
}

pub fn cyc_inverse(a: &Cyclotomic5) -> Result<Cyclotomic5> {
    a.inverse()
}

/// `N_k = (-1/5)^k + sum_{i=1..4} (1 - zeta^i)^{-k}`, proven rational.
pub fn n_constant(k: u32) -> Result<Rational> {
    n_constant_with_root(k, 1)
}

/// [`n_constant`] computed with `zeta^root` in place of `zeta`.
pub fn n_constant_with_root(k: u32, root: i64) -> Result<Rational> {
    if root.rem_euclid(5) == 0 {
        return Err(Error::InvalidArgument("root must be a primitive fifth root".into()));
    }
    let terms: Vec<Cyclotomic5> = (1..=4)
        .map(|i| Cyclotomic5::one().minus(&zeta_power(root * i)))
        .collect();
    n_constant_from_terms(k, &terms)
}

/// Sums `(-1/5)^k + sum_t t^{-k}`. Split out so fault-injection tests can feed
/// a corrupted term list.
pub(crate) fn n_constant_from_terms(k: u32, terms: &[Cyclotomic5]) -> Result<Rational> {
    let mut sum = Cyclotomic5::from_rational(super::rat(-1, 5).pow(k as i32));
    for t in terms {
        sum = sum.plus(&t.inverse()?.pow(k));
    }
    sum.to_rational(&format!("N_{k}"))
}
