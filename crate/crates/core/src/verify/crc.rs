//! The transformed local P4 R-matrix against the orbifold one: their
//! entrywise ratio must be constant in `psi` at every power of `z`.

use num_traits::One;
use serde_json::{json, Value};

use crate::arith::{rational_to_string, Constants, Cyclotomic, Cyclotomic5, Rational, Ring};
use crate::diffring::EvalCache;
use crate::error::{Error, Result};
use crate::hypergeom::{compute_hg_data, Geometry};
use crate::rmatrix::{apply_prefactor, row_scaled, RMatrix, ZPoly};
use crate::rmatrix_kp4::{kp4_prefactor, RTableKP4};
use crate::rmatrix_orb::{assemble_orb_r_matrix, OrbRTable};
use crate::series::{Series, Var};
use crate::verify::report::VerificationReport;

/// `T(R_{jp})` as `psi`-series through `order`, for `p <= K`.
pub fn transformed_rows(table: &RTableKP4, k_max: usize, order: i64) -> Result<Vec<Vec<Series>>> {
    let images = (0..5)
        .map(|j| table.row(j)[..=k_max].iter().map(|r| r.transform_t()).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let lowest = images
        .iter()
        .flatten()
        .filter_map(|e| e.l_degree_range())
        .map(|(lo, _)| lo)
        .min()
        .unwrap_or(0);
    let mut pad = (-lowest as i64).max(0) + 4;
    loop {
        let d = compute_hg_data(Geometry::C5z5, order + pad)?;
        let mut cache = EvalCache::new(&d);
        let rows: Vec<Vec<Series>> = images
            .iter()
            .map(|row| row.iter().map(|e| cache.eval(e)).collect())
            .collect();
        let have = rows.iter().flatten().map(Series::order).min().unwrap_or(order);
        if have >= order {
            return Ok(rows
                .into_iter()
                .map(|r| r.into_iter().map(|s| s.truncate(order)).collect())
                .collect());
        }
        if pad > 4 * order + 40 {
            return Err(Error::InsufficientOrder {
                needed: order,
                available: have,
            });
        }
        pad += (order - have).max(2);
    }
}

/// The transformed local P4 matrix, with or without its prefactor.
pub fn transformed_matrix(rows: &[Vec<Series>], k_max: usize, with_prefactor: bool, consts: &Constants) -> Result<RMatrix<Series>> {
    let k = k_max as i64;
    let mut entries = Vec::with_capacity(5);
    for i in 0..5 {
        let pref = kp4_prefactor(i, k, consts)?;
        let row = (0..5)
            .map(|j| {
                let raw = row_scaled(&rows[j], i, k);
                if with_prefactor {
                    apply_prefactor(&raw, &pref)
                } else {
                    raw
                }
            })
            .collect();
        entries.push(row);
    }
    Ok(RMatrix {
        geometry: Geometry::C5z5,
        z_order: k,
        entries,
    })
}

/// `a / b` as a polynomial in `z` through `z^K`, given `b(z = 0) = 1`.
fn z_ratio(a: &ZPoly<Series>, b: &ZPoly<Series>, k_max: i64) -> Vec<Cyclotomic<Series>> {
    let mut rho: Vec<Cyclotomic<Series>> = Vec::with_capacity(k_max as usize + 1);
    for k in 0..=k_max {
        let mut v = a.coeff(k).clone();
        for m in 0..k {
            v = v.minus(&rho[m as usize].times(b.coeff(k - m)));
        }
        rho.push(v);
    }
    rho
}

fn psi_constant(c: &Cyclotomic<Series>) -> Cyclotomic5 {
    let parts = c.coeffs();
    Cyclotomic5::from_coeffs([
        parts[0].coeff(0).clone(),
        parts[1].coeff(0).clone(),
        parts[2].coeff(0).clone(),
        parts[3].coeff(0).clone(),
    ])
}

fn cyc_json(c: &Cyclotomic5) -> Value {
    Value::Array(c.coeffs().iter().map(|r| Value::String(rational_to_string(r))).collect())
}

/// Entrywise ratio `T(R^{KP4})_{ij} / R^{orb}_{ij}` through `z^K`: every
/// `psi^{!=0}` coefficient is a residual, and so is any difference between
/// columns of one row. The constant parts are emitted as the diagonal
/// matrices `A_k`.
pub fn verify_crc(kp4: &RTableKP4, orb: &OrbRTable, k_max: usize, consts: &Constants) -> Result<VerificationReport> {
    let order = orb.order();
    let mut report = VerificationReport::new(format!("crc:z{k_max}"))
        .param("z_order", k_max)
        .param("order", order);
    if kp4.levels() < k_max || orb.levels() < k_max {
        return Err(Error::InvalidArgument(format!("tables do not reach z^{k_max}")));
    }
    let rows = transformed_rows(kp4, k_max, order)?;
    let left = transformed_matrix(&rows, k_max, true, consts)?;
    let right = assemble_orb_r_matrix(&orb.truncate(order), true, consts)?;
    let k = k_max as i64;
    let one = Cyclotomic::from_base(Series::rational_constant(Var::Psi, Rational::one(), order));
    let mut a_mats: Vec<Vec<Value>> = vec![Vec::new(); k_max + 1];
    for i in 0..5 {
        let mut first: Option<Vec<Cyclotomic<Series>>> = None;
        for j in 0..5 {
            let b = right.entry(i, j);
            let b0 = b.coeff(0).minus(&one);
            for (m, s) in b0.coeffs().iter().enumerate() {
                report.series_residual(&format!("orb({i},{j}):z^0-1[zeta^{m}]"), s, order);
            }
            let rho = z_ratio(left.entry(i, j), b, k);
            for (kk, c) in rho.iter().enumerate() {
                for (m, s) in c.coeffs().iter().enumerate() {
                    if s.order() < order {
                        report.fail(format!("ratio ({i},{j}) z^{kk} known only through psi^{}", s.order()));
                    }
                    for (e, v) in s.terms().filter(|(e, _)| *e != 0) {
                        report.nonzero_residual(format!("({i},{j}):z^{kk}[zeta^{m}]:psi^{e}"), v);
                    }
                }
            }
            match &first {
                None => first = Some(rho),
                Some(f) => {
                    for kk in 0..=k_max {
                        let diff = psi_constant(&rho[kk]).minus(&psi_constant(&f[kk]));
                        for (m, v) in diff.coeffs().iter().enumerate() {
                            report.nonzero_residual(format!("({i},{j})-({i},0):z^{kk}[zeta^{m}]"), v);
                        }
                    }
                }
            }
        }
        let f = first.expect("five columns");
        for (kk, c) in f.iter().enumerate() {
            a_mats[kk].push(cyc_json(&psi_constant(c)));
        }
    }
    let levels_constant = (0..=k_max)
        .filter(|kk| !report.residuals.iter().any(|r| r.power.contains(&format!(":z^{kk}["))))
        .count();
    report.push_detail(format!(
        "{levels_constant} of {} z-levels constant; A_k = diag(ratio row constants)",
        k_max + 1
    ));
    let a_json: Vec<Value> = a_mats
        .into_iter()
        .enumerate()
        .map(|(kk, diag)| json!({ "k": kk, "diagonal": diag }))
        .collect();
    Ok(report.with_data(json!({ "A": a_json, "genus_assumption": "z-order K covers genus g with K = 2g" })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmatrix_kp4::chain_rows;
    use crate::rmatrix_orb::solve_e2;

    #[test]
    fn low_levels_are_constant() {
        let kp4 = chain_rows(2).unwrap();
        let orb = solve_e2(2, 10).unwrap();
        let r = verify_crc(&kp4, &orb, 2, &Constants::exact()).unwrap();
        assert!(r.passed(), "{r}");
        let a0 = &r.data.as_ref().unwrap()["A"][0]["diagonal"][0];
        assert_eq!(a0, &json!(["1/1", "0/1", "0/1", "0/1"]));
    }

    #[test]
    fn transformed_rows_start_at_one() {
        let kp4 = chain_rows(1).unwrap();
        let rows = transformed_rows(&kp4, 1, 8).unwrap();
        for row in &rows {
            assert_eq!(row[0], Series::rational_constant(Var::Psi, Rational::one(), 8));
        }
    }
}
