//! 5x5 matrices of polynomials in `z` with cyclotomic-extended coefficients.

use serde_json::{json, Value};

use crate::arith::{zeta_power, Cyclotomic, Cyclotomic5, Ring};
use crate::hypergeom::Geometry;
use crate::series::{TruncSeries, Var};

/// A polynomial in `z` (through `z^order`) over `C[zeta]`.
pub type ZPoly<C> = TruncSeries<Cyclotomic<C>>;

/// `sum_k levels[k] (z / zeta^i)^k`.
pub fn row_scaled<C: Ring>(levels: &[C], i: usize, order: i64) -> ZPoly<C> {
    let zero = Cyclotomic::from_base(levels[0].zero_like());
    let coeffs = levels
        .iter()
        .take(order as usize + 1)
        .enumerate()
        .map(|(k, c)| Cyclotomic::from_scalar(&zeta_power(-((i * k) as i64)), c))
        .collect();
    TruncSeries::new(Var::Z, 0, coeffs, order, zero)
}

/// `prefactor(z) * entry(z)` for a scalar prefactor.
pub fn apply_prefactor<C: Ring>(entry: &ZPoly<C>, prefactor: &TruncSeries<Cyclotomic5>) -> ZPoly<C> {
    let order = entry.order().min(prefactor.order());
    let zero = entry.zero_coeff().clone();
    let coeffs = (0..=order)
        .map(|k| {
            (0..=k).fold(zero.clone(), |acc, a| {
                let p = prefactor.coeff(a);
                if p.is_zero() {
                    acc
                } else {
                    acc.plus(&entry.coeff(k - a).times_scalar(p))
                }
            })
        })
        .collect();
    TruncSeries::new(Var::Z, 0, coeffs, order, zero)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RMatrix<C: Ring> {
    pub geometry: Geometry,
    pub z_order: i64,
    /// `entries[i][j]`.
    pub entries: Vec<Vec<ZPoly<C>>>,
}

impl<C: Ring> RMatrix<C> {
    pub fn entry(&self, i: usize, j: usize) -> &ZPoly<C> {
        &self.entries[i][j]
    }

    /// `{"geometry", "z_order", "entries"}` where `entries[i][j][k]` is the
    /// `z^k` coefficient as four `zeta`-components, each rendered by `f`.
    pub fn to_json(&self, f: impl Fn(&C) -> Value) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|row| {
                Value::Array(
                    row.iter()
                        .map(|e| {
                            Value::Array(
                                (0..=self.z_order)
                                    .map(|k| Value::Array(e.coeff(k).coeffs().iter().map(&f).collect()))
                                    .collect(),
                            )
                        })
                        .collect(),
                )
            })
            .collect();
        json!({
            "geometry": self.geometry.name(),
            "z_order": self.z_order,
            "entries": entries,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, Rational};

    #[test]
    fn row_scaling_and_prefactor() {
        let levels = vec![rat(1, 1), rat(2, 1), rat(3, 1)];
        let e = row_scaled(&levels, 1, 2);
        assert_eq!(e.coeff(1), &zeta_power(-1).scaled(&rat(2, 1)));
        assert_eq!(e.coeff(2), &zeta_power(-2).scaled(&rat(3, 1)));
        let pref = TruncSeries::new(Var::Z, 0, vec![Cyclotomic5::one(), zeta_power(1)], 2, Cyclotomic5::zero());
        let p = apply_prefactor(&e, &pref);
        // z^1: 2 zeta^-1 + zeta
        assert_eq!(p.coeff(1), &zeta_power(-1).scaled(&rat(2, 1)).plus(&zeta_power(1)));
        let generic: ZPoly<Rational> = e;
        assert_eq!(generic.times(&pref), p);
    }
}
