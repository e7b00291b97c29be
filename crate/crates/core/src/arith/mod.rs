//! Exact scalar arithmetic: big rationals, the cyclotomic field Q(zeta_5),
//! Bernoulli numbers and polynomials, and the constants N_k.

mod bernoulli;
mod constants;
mod cyclotomic;
mod rational;

pub use constants::Constants;
pub use bernoulli::{bernoulli_number, bernoulli_poly, BernoulliTable};
pub use cyclotomic::{cyc_inverse, n_constant, n_constant_with_root, zeta_power, Cyclotomic, Cyclotomic5};
pub use rational::{parse_rational, rat, rational_to_string, Rational};

use crate::error::Result;

/// Commutative ring with rational scalars.
///
/// Methods take references and return fresh values. Zero and one are produced
/// from an existing element because some carriers (series, ring elements) need
/// context such as a truncation order or a geometry tag.
pub trait Ring: Clone + PartialEq + std::fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scaled(&self, r: &Rational) -> Self;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn pow(&self, n: u32) -> Self {
        let mut acc = self.one_like();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.times(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.times(&base);
            }
        }
        acc
    }
}

/// A [`Ring`] in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inverse(&self) -> Result<Self>;
}
