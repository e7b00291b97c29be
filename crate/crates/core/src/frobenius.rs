//! Quantum product, idempotents and transition matrix of the orbifold
//! `[C^5/Z_5]`, in the flat basis `phi_0 .. phi_4`.

use num_traits::{One, Zero};
use serde_json::json;

use crate::arith::{rat, zeta_power, Cyclotomic, Rational, Ring};
use crate::error::{Error, Result};
use crate::hypergeom::{birkhoff_chain, compute_hg_data, i_function, CohomSeries, Geometry, HGData};
use crate::series::{Series, Var};
use crate::verify::report::VerificationReport;

const G: Geometry = Geometry::C5z5;

/// Extra working precision for the divisions by `C_i` and `L`, which vanish
/// to first order at `psi = 0`.
const PAD: i64 = 8;

/// `eta = (1/5) antidiag`, with `eta(phi_0, phi_0) = 1/5`.
pub fn metric() -> [[Rational; 5]; 5] {
    let mut m: [[Rational; 5]; 5] = Default::default();
    for (i, row) in m.iter_mut().enumerate() {
        row[(5 - i) % 5] = rat(1, 5);
    }
    m
}

/// Sorted index triples `a <= b <= c` in `0..5` (35 of them).
pub fn symmetric_triples() -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..5 {
        for b in a..5 {
            for c in b..5 {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn sorted(i: usize, j: usize, k: usize) -> [usize; 3] {
    let mut t = [i, j, k];
    t.sort_unstable();
    t
}

/// The three-point correlators `<<phi_i phi_j phi_k>>`, totally symmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct Correlators {
    order: i64,
    values: Vec<Series>,
}

impl Correlators {
    fn from_sorted(order: i64, f: impl Fn([usize; 3]) -> Result<Series>) -> Result<Self> {
        let mut values = Vec::with_capacity(125);
        for i in 0..5 {
            for j in 0..5 {
                for k in 0..5 {
                    let v = f(sorted(i, j, k))?;
                    if v.order() < order {
                        return Err(Error::InsufficientOrder {
                            needed: order,
                            available: v.order(),
                        });
                    }
                    values.push(v.truncate(order));
                }
            }
        }
        Ok(Self { order, values })
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Series {
        &self.values[25 * i + 5 * j + k]
    }
}

fn constant(c: Rational, order: i64) -> Series {
    Series::rational_constant(Var::Psi, c, order)
}

/// The closed forms in terms of `C_1, C_2, L`.
pub fn closed_form_correlators(d: &HGData, order: i64) -> Result<Correlators> {
    let (c1, c2, l) = (&d.c[1], &d.c[2], &d.l);
    let l5 = l.pow(5);
    let fifth = rat(1, 5);
    let c113 = c2.div(c1)?.scaled(&fifth);
    let c122 = l5.div(&c1.pow(3).times(&c2.pow(2)))?.scaled(&rat(-1, 5));
    let c244 = c1.div(c2)?.scaled(&fifth);
    let c334 = c1.pow(3).times(&c2.pow(2)).div(&l5)?.scaled(&rat(-1, 5));
    let n = d.order;
    Correlators::from_sorted(order, |t| {
        Ok(match t {
            [0, 0, 0] | [0, 1, 4] | [0, 2, 3] => constant(fifth.clone(), n),
            [1, 1, 3] => c113.clone(),
            [1, 2, 2] => c122.clone(),
            [2, 4, 4] => c244.clone(),
            [3, 3, 4] => c334.clone(),
            _ => Series::zero_with(Var::Psi, Rational::zero(), n),
        })
    })
}

/// `S(phi_k) = M^k(I) / C_k`, with components through `psi^order`.
pub fn s_operator(k: usize, order: i64) -> Result<CohomSeries> {
    let i = i_function(G, order + 3 * PAD, k + 5);
    let chain = birkhoff_chain(&i, k)?;
    let f = &chain[k];
    let c = f.leading().expect("chain element has a leading term").clone();
    f.divided_by(&c)
}

/// Correlators from the Birkhoff chain alone: `phi_1 * phi_k = m_k phi_{k+1}`
/// with `m_k = C_{k+1}/C_1` read off `z D S(phi_k)`, so that
/// `phi_a * phi_b = P_{a+b}/(P_a P_b) phi_{a+b}` with `P_n = m_0 .. m_{n-1}`.
pub fn s_route_correlators(order: i64) -> Result<Correlators> {
    let i = i_function(G, order + 3 * PAD, 6);
    let chain = birkhoff_chain(&i, 5)?;
    let c: Vec<Series> = chain
        .iter()
        .map(|f| f.leading().expect("chain element has a leading term").clone())
        .collect();
    let m: Vec<Series> = (0..5).map(|k| c[k + 1].div(&c[1])).collect::<Result<_>>()?;
    let mut p = vec![constant(Rational::one(), order + 3 * PAD)];
    for n in 0..8 {
        let next = p[n].times(&m[n % 5]);
        p.push(next);
    }
    Correlators::from_sorted(order, |[a, b, cc]| {
        if (a + b + cc) % 5 != 0 {
            return Ok(Series::zero_with(Var::Psi, Rational::zero(), order));
        }
        Ok(p[a + b].div(&p[a].times(&p[b]))?.scaled(&rat(1, 5)))
    })
}

/// The product table `phi_i * phi_j = s_{ij} phi_{i+j mod 5}` and the
/// normalizations of `phi~_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbFrobenius {
    order: i64,
    data: HGData,
    correlators: Correlators,
    structure: Vec<Vec<Series>>,
    norms: [Series; 5],
}

impl OrbFrobenius {
    pub fn new(order: i64) -> Result<Self> {
        let data = compute_hg_data(G, (order + PAD).max(6))?;
        let correlators = closed_form_correlators(&data, order)?;
        let structure = (0..5)
            .map(|i| {
                (0..5)
                    .map(|j| correlators.get(i, j, (10 - i - j) % 5).scaled(&rat(5, 1)))
                    .collect()
            })
            .collect();
        let (c1, c2, l) = (&data.c[1], &data.c[2], &data.l);
        let c1c2 = c1.times(c2);
        let l2 = l.pow(2);
        let t = |s: Series| s.truncate(order);
        let norms = [
            constant(Rational::one(), order),
            t(c1.div(l)?.negated()),
            t(c1c2.div(&l2)?),
            t(l2.div(&c1c2)?),
            t(l.div(c1)?.negated()),
        ];
        Ok(Self {
            order,
            data,
            correlators,
            structure,
            norms,
        })
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn data(&self) -> &HGData {
        &self.data
    }

    pub fn correlators(&self) -> &Correlators {
        &self.correlators
    }

    /// `s_{ij}` with `phi_i * phi_j = s_{ij} phi_{i+j mod 5}`.
    pub fn structure_constant(&self, i: usize, j: usize) -> &Series {
        &self.structure[i][j]
    }

    /// `phi_i * phi_j` as a coefficient vector.
    pub fn quantum_product(&self, i: usize, j: usize) -> Vec<Series> {
        let zero = Series::zero_with(Var::Psi, Rational::zero(), self.order);
        let mut v = vec![zero; 5];
        v[(i + j) % 5] = self.structure[i][j].clone();
        v
    }

    /// Normalization of `phi~_i = n_i phi_i`.
    pub fn normalization(&self, i: usize) -> &Series {
        &self.norms[i]
    }

    /// Product of two vectors with coefficients in any ring containing the
    /// structure constants via `lift`.
    pub fn multiply<T: Ring>(&self, u: &[T], v: &[T], lift: impl Fn(&Series) -> T) -> Vec<T> {
        let mut out: Vec<T> = (0..5).map(|_| u[0].zero_like()).collect();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                let k = (i + j) % 5;
                out[k] = out[k].plus(&ui.times(vj).times(&lift(&self.structure[i][j])));
            }
        }
        out
    }

    /// `e_alpha = (1/5) sum_i zeta^{-alpha i} phi~_i` in the `phi`-basis.
    pub fn idempotent(&self, alpha: usize) -> Vec<Cyclotomic<Series>> {
        (0..5)
            .map(|i| {
                let s = self.norms[i].scaled(&rat(1, 5));
                Cyclotomic::from_scalar(&zeta_power(-((alpha * i) as i64)), &s)
            })
            .collect()
    }

    /// `eta(u, v)` for `phi`-basis vectors.
    pub fn pairing<T: Ring>(&self, u: &[T], v: &[T]) -> T {
        let eta = metric();
        let mut acc = u[0].zero_like();
        for i in 0..5 {
            let j = (5 - i) % 5;
            acc = acc.plus(&u[i].times(&v[j]).scaled(&eta[i][j]));
        }
        acc
    }

    /// `Psi_{alpha i} = eta(e~_alpha, phi_i)` with `e~ = e / sqrt(eta(e, e))`,
    /// given `eta(e_alpha, e_alpha) = 1/25`.
    pub fn transition_matrix(&self) -> Vec<Vec<Cyclotomic<Series>>> {
        (0..5)
            .map(|alpha| {
                let e: Vec<Cyclotomic<Series>> =
                    self.idempotent(alpha).iter().map(|c| c.scaled(&rat(5, 1))).collect();
                (0..5)
                    .map(|i| {
                        let phi_i: Vec<Cyclotomic<Series>> = (0..5)
                            .map(|m| {
                                let c = if m == i { Rational::one() } else { Rational::zero() };
                                lift_cyc(&constant(c, self.order))
                            })
                            .collect();
                        self.pairing(&e, &phi_i)
                    })
                    .collect()
            })
            .collect()
    }

    /// Row `alpha` of the transition matrix as printed:
    /// `(1/5)(1, -zeta^a L/C_1, zeta^2a L^2/(C_1 C_2), zeta^3a C_1 C_2/L^2, -zeta^4a C_1/L)`.
    pub fn printed_transition_row(&self, alpha: usize) -> Result<Vec<Cyclotomic<Series>>> {
        let (c1, c2, l) = (&self.data.c[1], &self.data.c[2], &self.data.l);
        let l2 = l.pow(2);
        let c1c2 = c1.times(c2);
        let t = |s: Series| s.truncate(self.order);
        let base = [
            constant(Rational::one(), self.order),
            t(l.div(c1)?.negated()),
            t(l2.div(&c1c2)?),
            t(c1c2.div(&l2)?),
            t(c1.div(l)?.negated()),
        ];
        Ok(base
            .iter()
            .enumerate()
            .map(|(i, s)| Cyclotomic::from_scalar(&zeta_power((alpha * i) as i64), &s.scaled(&rat(1, 5))))
            .collect())
    }

    /// `du^alpha / dpsi = -zeta^alpha L / psi`, regular at `psi = 0`.
    pub fn canonical_coordinate_derivative(&self, alpha: usize) -> Cyclotomic<Series> {
        let s = self.data.l.shift(-1).negated().truncate(self.order - 1);
        Cyclotomic::from_scalar(&zeta_power(alpha as i64), &s)
    }
}

fn lift_cyc(s: &Series) -> Cyclotomic<Series> {
    Cyclotomic::from_base(s.clone())
}

fn cyc_residual(report: &mut VerificationReport, name: &str, r: &Cyclotomic<Series>, order: i64) {
    for (m, s) in r.coeffs().iter().enumerate() {
        report.series_residual(&format!("{name}[zeta^{m}]"), s, order);
    }
}

/// S-operator route against the closed forms, all 35 symmetric triples.
pub fn check_correlators(order: i64) -> Result<VerificationReport> {
    let frob = OrbFrobenius::new(order)?;
    let s_route = s_route_correlators(order)?;
    let mut report = VerificationReport::new("frobenius:correlators").param("order", order);
    let mut nonzero = 0;
    for [a, b, c] in symmetric_triples() {
        let lhs = frob.correlators().get(a, b, c);
        if !lhs.is_zero_to_order() {
            nonzero += 1;
        }
        report.series_residual(&format!("<{a}{b}{c}>"), &lhs.minus(s_route.get(a, b, c)), order);
    }
    for k in 0..5 {
        let s = s_operator(k, order)?;
        let lead = s.leading().expect("S has a leading term");
        report.series_residual(&format!("S(phi_{k})|z^0-1"), &lead.minus(&constant(Rational::one(), order)).truncate(order), order);
    }
    let mut compat = 0;
    for i in 0..5 {
        for j in 0..5 {
            let prod = frob.quantum_product(i, j);
            for k in 0..5 {
                let unit = |m: usize| constant(if m == k { Rational::one() } else { Rational::zero() }, order);
                let phi_k: Vec<Series> = (0..5).map(unit).collect();
                let lhs = frob.pairing(&prod, &phi_k);
                let r = lhs.minus(frob.correlators().get(i, j, k));
                if !r.is_zero_to_order() {
                    compat += 1;
                }
                report.series_residual(&format!("eta(phi{i}*phi{j},phi{k})"), &r, order);
            }
        }
    }
    report.push_detail(format!("{nonzero} nonzero patterns of 35; {compat} compatibility mismatches"));
    Ok(report.with_data(json!({ "nonzero_patterns": nonzero })))
}

/// `(phi_i phi_j) phi_k = phi_i (phi_j phi_k)` for all 125 triples, plus the
/// unit and the normalized-basis relations `phi~_i phi~_j = phi~_{i+j}`.
pub fn check_associativity(order: i64) -> Result<VerificationReport> {
    let frob = OrbFrobenius::new(order)?;
    let mut report = VerificationReport::new("frobenius:associativity").param("order", order);
    let s = |i: usize, j: usize| frob.structure_constant(i, j);
    for i in 0..5 {
        for j in 0..5 {
            for k in 0..5 {
                let left = s(i, j).times(s((i + j) % 5, k));
                let right = s(j, k).times(s(i, (j + k) % 5));
                report.series_residual(&format!("({i}{j}){k}"), &left.minus(&right), order);
            }
        }
        let unit = s(0, i).minus(&constant(Rational::one(), order));
        report.series_residual(&format!("phi0*phi{i}"), &unit, order);
    }
    for i in 0..5 {
        for j in 0..5 {
            let k = (i + j) % 5;
            let lhs = frob.normalization(i).times(frob.normalization(j)).times(s(i, j));
            report.series_residual(&format!("~{i}*~{j}"), &lhs.minus(frob.normalization(k)), order);
        }
    }
    Ok(report)
}

/// `e_a e_b = delta_ab e_a`, `sum e_a = phi_0`, `eta(e_a, e_a) = 1/25`, the
/// transition matrix against its printed rows, and
/// `sum_a (du^a/dpsi) psi e_a = (D s) phi_1`.
pub fn check_idempotents(order: i64) -> Result<VerificationReport> {
    let frob = OrbFrobenius::new(order)?;
    let mut report = VerificationReport::new("frobenius:idempotents").param("order", order);
    let es: Vec<Vec<Cyclotomic<Series>>> = (0..5).map(|a| frob.idempotent(a)).collect();
    let zero_c = lift_cyc(&Series::zero_with(Var::Psi, Rational::zero(), order));
    for a in 0..5 {
        for b in a..5 {
            let prod = frob.multiply(&es[a], &es[b], lift_cyc);
            for m in 0..5 {
                let expect = if a == b { es[a][m].clone() } else { zero_c.clone() };
                cyc_residual(&mut report, &format!("e{a}*e{b}[phi{m}]"), &prod[m].minus(&expect), order);
            }
        }
        let norm = frob.pairing(&es[a], &es[a]);
        cyc_residual(
            &mut report,
            &format!("eta(e{a},e{a})-1/25"),
            &norm.minus(&lift_cyc(&constant(rat(1, 25), order))),
            order,
        );
    }
    for m in 0..5 {
        let sum = es.iter().fold(zero_c.clone(), |acc, e| acc.plus(&e[m]));
        let expect = lift_cyc(&constant(if m == 0 { Rational::one() } else { Rational::zero() }, order));
        cyc_residual(&mut report, &format!("sum e[phi{m}]"), &sum.minus(&expect), order);
    }
    let psi_mat = frob.transition_matrix();
    for (a, row) in psi_mat.iter().enumerate() {
        let printed = frob.printed_transition_row(a)?;
        for i in 0..5 {
            cyc_residual(&mut report, &format!("Psi[{a}][{i}]"), &row[i].minus(&printed[i]), order);
        }
    }
    let ds = frob.data().mirror.d_operator()?;
    let psi = Series::monomial(Var::Psi, 1, Rational::one(), order + 1);
    for m in 0..5 {
        let mut acc = zero_c.clone();
        for (a, e) in es.iter().enumerate() {
            let du = frob.canonical_coordinate_derivative(a);
            acc = acc.plus(&du.times(&lift_cyc(&psi)).times(&e[m]));
        }
        let expect = if m == 1 {
            ds.truncate(order)
        } else {
            Series::zero_with(Var::Psi, Rational::zero(), order)
        };
        cyc_residual(&mut report, &format!("sum du*e[phi{m}]-Ds*phi1"), &acc.minus(&lift_cyc(&expect)), order - 1);
    }
    let du0 = frob.canonical_coordinate_derivative(0);
    let closed = Series::binomial(Var::Psi, &rat(-1, 5), &rat(1, 3125), 5, order - 1);
    cyc_residual(&mut report, "du0/dpsi-(1+psi^5/5^5)^(-1/5)", &du0.minus(&lift_cyc(&closed)), order - 1);
    Ok(report)
}
