//! The constants `a^i_k = M(R_{ik})` and the rational identity they satisfy.

use serde_json::{json, Value};

use crate::arith::{rat, rational_to_string, Constants, Rational, Ring};
use crate::error::Result;
use crate::rmatrix_kp4::{kp4_prefactor, RTableKP4};
use crate::rmatrix_orb::orb_prefactor;
use crate::series::{Series, Var};
use crate::verify::report::VerificationReport;

/// `a[i][k]` for `i = 0..4`, `k = 0..=K`.
#[derive(Clone, Debug, PartialEq)]
pub struct AConstants {
    pub a: Vec<Vec<Rational>>,
}

impl AConstants {
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.a
                .iter()
                .map(|row| Value::Array(row.iter().map(|r| Value::String(rational_to_string(r))).collect()))
                .collect(),
        )
    }
}

pub fn a_constants(table: &RTableKP4) -> AConstants {
    let a = (0..5)
        .map(|i| table.row(i).iter().map(|r| r.m_restrict()).collect())
        .collect();
    AConstants { a }
}

fn rational_series(s: &crate::series::TruncSeries<crate::arith::Cyclotomic5>, context: &str) -> Result<Series> {
    let coeffs = (0..=s.order())
        .map(|k| s.coeff(k).to_rational(context))
        .collect::<Result<Vec<_>>>()?;
    Ok(Series::from_rationals(Var::Z, coeffs, s.order()))
}

/// Per-row residual `LHS_i - RHS_i` through `z^K`, where
/// `LHS_i = Exp(-sum N_{2k-1}/(2k-1) B_{2k}/(2k) z^{2k-1}) sum_k a^i_k z^k`
/// and `RHS_i = Exp(5 sum (-1)^{k+1} B_{5k+1}(i/5)/(5k+1) z^{5k}/(5k))`.
pub fn prop1_residuals(a: &AConstants, k_max: usize, consts: &Constants) -> Result<Vec<Series>> {
    let order = k_max as i64;
    let lhs_pref = rational_series(&kp4_prefactor(0, order, consts)?, "local P4 prefactor")?;
    (0..5)
        .map(|i| {
            let sum = Series::from_rationals(Var::Z, a.a[i][..=k_max].to_vec(), order);
            let rhs = rational_series(&orb_prefactor(i, order, consts)?, "orbifold prefactor")?;
            Ok(lhs_pref.times(&sum).minus(&rhs))
        })
        .collect()
}

/// The identity through `z^K`, with residuals listed per row and power.
pub fn verify_prop1(table: &RTableKP4, k_max: usize, consts: &Constants) -> VerificationReport {
    let mut report = VerificationReport::new("prop1").param("z_order", k_max);
    let a = a_constants(table);
    match prop1_residuals(&a, k_max, consts) {
        Ok(res) => {
            for (i, r) in res.iter().enumerate() {
                for k in 0..=k_max as i64 {
                    report.residual(format!("i{i}:z^{k}"), r.coeff(k));
                }
            }
        }
        Err(e) => report.fail(format!("could not form the identity: {e}")),
    }
    report.with_data(json!({ "a": a.to_json(), "genus_assumption": "z-order K covers genus g with K = 2g" }))
}

/// `a^i_1 = 3/20` for every row, forced by the `z^1` coefficient.
pub fn verify_z1(table: &RTableKP4) -> VerificationReport {
    let mut report = VerificationReport::new("prop1:z1");
    if table.levels() < 1 {
        report.fail("table has no z^1 level");
        return report;
    }
    let a = a_constants(table);
    for (i, row) in a.a.iter().enumerate() {
        report.residual(format!("a{i}1-3/20"), &(&row[1] - rat(3, 20)));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmatrix_kp4::chain_rows;

    #[test]
    fn seeds_and_first_level() {
        let t = chain_rows(1).unwrap();
        let a = a_constants(&t);
        for i in 0..5 {
            assert_eq!(a.a[i][0], rat(1, 1));
        }
        assert_eq!(a.a[1][1], rat(3, 20));
        assert!(verify_z1(&t).passed());
    }

    #[test]
    fn low_orders_hold() {
        let t = chain_rows(2).unwrap();
        let c = Constants::exact();
        assert!(verify_prop1(&t, 0, &c).passed());
        assert!(verify_prop1(&t, 2, &c).passed());
    }
}
