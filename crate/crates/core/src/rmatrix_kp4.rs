//! The local P4 R-matrix: Picard-Fuchs recursion for the first row, chaining
//! of the remaining rows, and the Bernoulli prefactor.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::arith::{rat, zeta_power, Constants, Cyclotomic, Cyclotomic5, Rational, Ring};
use crate::diffring::{DiffRingElem, Generator, Monomial};
use crate::error::{Error, Result};
use crate::hypergeom::Geometry;
use crate::rmatrix::{apply_prefactor, row_scaled, RMatrix};
use crate::series::{TruncSeries, Var};

const G: Geometry = Geometry::Kp4;

/// `sum_k c_k(L) D^k` with `c_k` Laurent polynomials in `L`.
#[derive(Clone, Debug, PartialEq)]
pub struct PFOperator {
    terms: Vec<(DiffRingElem, u32)>,
}

impl PFOperator {
    /// Coefficients given as `(k, [(L-exponent, coefficient)])`.
    pub fn new(terms: Vec<(u32, Vec<(i32, Rational)>)>) -> Self {
        let terms = terms
            .into_iter()
            .map(|(k, c)| {
                let coeff = DiffRingElem::from_terms(G, c.into_iter().map(|(e, r)| (Monomial::l(e), r)));
                (coeff, k)
            })
            .collect();
        Self { terms }
    }

    pub fn terms(&self) -> &[(DiffRingElem, u32)] {
        &self.terms
    }

    pub fn apply(&self, f: &DiffRingElem) -> DiffRingElem {
        let top = self.terms.iter().map(|(_, k)| *k).max().unwrap_or(0);
        let mut derivs = vec![f.clone()];
        for _ in 0..top {
            let next = derivs.last().expect("nonempty").derive();
            derivs.push(next);
        }
        self.terms
            .iter()
            .fold(DiffRingElem::zero(G), |acc, (c, k)| acc.plus(&c.times(&derivs[*k as usize])))
    }
}

/// `(1 - L^5)`-multiples are common: `c (1 - L^5)`.
fn one_minus_l5(c: Rational) -> Vec<(i32, Rational)> {
    vec![(0, c.clone()), (5, -c)]
}

/// The five operators driving the first-row recursion.
pub fn pf_operators() -> [PFOperator; 5] {
    let r = rat;
    [
        PFOperator::new(vec![(0, one_minus_l5(r(1, 1))), (1, vec![(0, r(5, 1))])]),
        PFOperator::new(vec![
            (0, vec![(0, r(4, 5)), (5, r(-1, 5)), (10, r(-3, 5))]),
            (1, one_minus_l5(r(6, 1))),
            (2, vec![(0, r(10, 1))]),
        ]),
        PFOperator::new(vec![
            (0, vec![(0, r(12, 25)), (5, r(-7, 25)), (10, r(-2, 25)), (15, r(-3, 25))]),
            (1, vec![(0, r(22, 5)), (5, r(-13, 5)), (10, r(-9, 5))]),
            (2, one_minus_l5(r(12, 1))),
            (3, vec![(0, r(10, 1))]),
        ]),
        PFOperator::new(vec![
            (
                0,
                vec![(0, r(120, 625)), (5, r(-103, 625)), (10, r(61, 625)), (15, r(-144, 625)), (20, r(66, 625))],
            ),
            (1, vec![(0, r(50, 25)), (5, r(-41, 25)), (10, r(-3, 25)), (15, r(-6, 25))]),
            (2, vec![(0, r(7, 1)), (5, r(-29, 5)), (10, r(-6, 5))]),
            (3, one_minus_l5(r(10, 1))),
            (4, vec![(0, r(5, 1))]),
        ]),
        PFOperator::new(vec![
            (0, one_minus_l5(r(24, 625))),
            (1, one_minus_l5(r(274, 625))),
            (2, one_minus_l5(r(9, 5))),
            (3, one_minus_l5(r(17, 5))),
            (4, one_minus_l5(r(3, 1))),
            (5, vec![(0, r(1, 1))]),
        ]),
    ]
}

/// Default degree cap for `Q_p`.
pub fn default_cap(p_max: usize) -> i32 {
    5 * p_max as i32 + 5
}

/// The polynomial `Q` with `L_1(Q) = target` and `Q(L = 1) = 0`.
///
/// `L_1(L^m) = (1 - m)(L^m - L^{m+5})`, so with `a_m = (1 - m) q_m` the
/// equation reads `a_n - a_{n-5} = t_n`: solved upward from the lowest
/// exponent. A polynomial solution exists iff the `a_n` stop (five consecutive
/// zeros past the top of `target`) and `a_1 = 0`; the kernel is `span{L}`.
fn solve_l1(target: &DiffRingElem, p: usize, cap: i32) -> Result<DiffRingElem> {
    if !target.is_pure_l() {
        return Err(Error::InconsistentSystem {
            p,
            detail: "right-hand side involves X, DX, D2X or Y".into(),
        });
    }
    let t: BTreeMap<i32, Rational> = target.terms().map(|(m, c)| (m.l, c.clone())).collect();
    let Some((&lo, &hi)) = t.keys().next().zip(t.keys().next_back()) else {
        return Ok(DiffRingElem::zero(G));
    };
    let mut a: BTreeMap<i32, Rational> = BTreeMap::new();
    for n in lo..=hi {
        let v = t.get(&n).cloned().unwrap_or_else(Rational::zero) + a.get(&(n - 5)).cloned().unwrap_or_else(Rational::zero);
        a.insert(n, v);
    }
    if let Some(n) = (hi - 4..=hi).find(|n| a.get(n).is_some_and(|v| !Zero::is_zero(v))) {
        return Err(Error::InconsistentSystem {
            p,
            detail: format!("no polynomial solution: L^{n} coefficient does not terminate"),
        });
    }
    if let Some(v) = a.get(&1).filter(|v| !Zero::is_zero(*v)) {
        return Err(Error::InconsistentSystem {
            p,
            detail: format!("obstruction {v} at L^1"),
        });
    }
    if hi > cap {
        return Err(Error::InconsistentSystem {
            p,
            detail: format!("solution degree {hi} exceeds cap {cap}"),
        });
    }
    let mut q: BTreeMap<i32, Rational> = a
        .into_iter()
        .filter(|(n, v)| *n != 1 && !Zero::is_zero(v))
        .map(|(n, v)| (n, v / rat(1 - n as i64, 1)))
        .collect();
    let q1 = -q.values().fold(Rational::zero(), |s, v| s + v);
    q.insert(1, q1);
    Ok(DiffRingElem::from_terms(G, q.into_iter().map(|(e, c)| (Monomial::l(e), c))))
}

/// `Q_0 .. Q_P` with `Q_0 = L`, `Q_p(q = 0) = 0`.
pub fn solve_q_sequence(p_max: usize) -> Result<Vec<DiffRingElem>> {
    solve_q_sequence_with_cap(p_max, default_cap(p_max))
}

pub fn solve_q_sequence_with_cap(p_max: usize, cap: i32) -> Result<Vec<DiffRingElem>> {
    let ops = pf_operators();
    let mut q = vec![DiffRingElem::generator(G, Generator::L)];
    for p in 1..=p_max {
        let mut rhs = DiffRingElem::zero(G);
        for s in 1..=4usize {
            if p >= s {
                let term = ops[s].apply(&q[p - s]);
                rhs = rhs.plus(&term.times(&DiffRingElem::l_power(G, -(s as i32), Rational::one())));
            }
        }
        q.push(solve_l1(&rhs.negated(), p, cap)?);
    }
    Ok(q)
}

/// `R_{jp}` for `j = 0..4`, `p = 0..P`, together with the residuals of the
/// first system line, which is not used for chaining.
#[derive(Clone, Debug, PartialEq)]
pub struct RTableKP4 {
    rows: Vec<Vec<DiffRingElem>>,
    consistency: Vec<DiffRingElem>,
}

impl RTableKP4 {
    pub fn entry(&self, j: usize, p: usize) -> &DiffRingElem {
        &self.rows[j][p]
    }

    pub fn row(&self, j: usize) -> &[DiffRingElem] {
        &self.rows[j]
    }

    /// Highest computed `p`.
    pub fn levels(&self) -> usize {
        self.rows[0].len() - 1
    }

    /// Residual of `R_{1,p+1} = R_{0,p+1} + D R_{0p} / L` for each `p < P`.
    pub fn consistency_residuals(&self) -> &[DiffRingElem] {
        &self.consistency
    }
}

/// Coefficient multiplying `R_{jp}` in the line producing row `j + 1`.
pub fn e1_coefficients() -> [DiffRingElem; 5] {
    let l = |e: i32, c: i64| DiffRingElem::l_power(G, e, rat(c, 1));
    let x = DiffRingElem::generator(G, Generator::X);
    let y = DiffRingElem::generator(G, Generator::Y);
    let inv_l = l(-1, 1);
    let dl_l2 = DiffRingElem::generator(G, Generator::L).derive().times(&l(-2, 1));
    let x_l = x.times(&inv_l);
    let xy_l = x.plus(&y).times(&inv_l);
    [
        DiffRingElem::zero(G),
        dl_l2.minus(&x_l),
        dl_l2.scaled(&rat(2, 1)).minus(&xy_l),
        xy_l.minus(&dl_l2.scaled(&rat(2, 1))),
        x_l.minus(&dl_l2),
    ]
}

/// Chains rows `2, 3, 4, 0` from row 1 (`R_{1p} = Q_p / L`) and checks the
/// remaining line.
pub fn chain_from_row1(q: &[DiffRingElem]) -> Result<RTableKP4> {
    let p_max = q.len() - 1;
    let inv_l = DiffRingElem::l_power(G, -1, Rational::one());
    let coef = e1_coefficients();
    let mut rows: Vec<Vec<DiffRingElem>> = vec![vec![DiffRingElem::one(G)]; 5];
    let mut consistency = Vec::with_capacity(p_max);
    for p in 0..p_max {
        rows[1].push(q[p + 1].times(&inv_l));
        for j in 1..=4 {
            let prev = &rows[j][p];
            let next = rows[j][p + 1]
                .plus(&coef[j].times(prev))
                .plus(&prev.derive().times(&inv_l));
            rows[(j + 1) % 5].push(next);
        }
        let residual = rows[1][p + 1].minus(&rows[0][p + 1].plus(&rows[0][p].derive().times(&inv_l)));
        if !residual.is_zero() {
            return Err(Error::ConsistencyFailure {
                level: p,
                detail: format!("first-line residual {residual}"),
            });
        }
        consistency.push(residual);
    }
    Ok(RTableKP4 { rows, consistency })
}

pub fn chain_rows(p_max: usize) -> Result<RTableKP4> {
    chain_from_row1(&solve_q_sequence(p_max)?)
}

/// `Exp(-sum_k N_{2k-1}/(2k-1) B_{2k}/(2k) (z/zeta^i)^{2k-1})` through `z^order`.
pub fn kp4_prefactor(i: usize, order: i64, consts: &Constants) -> Result<TruncSeries<Cyclotomic5>> {
    let mut coeffs = vec![Cyclotomic5::zero(); order.max(0) as usize + 1];
    let mut m = 1usize;
    while m as i64 <= order {
        let n = consts.n(m as u32)?;
        let b = consts.bernoulli(m + 1);
        let scalar = -(n / rat(m as i64, 1)) * b / rat(m as i64 + 1, 1);
        coeffs[m] = zeta_power(-((i * m) as i64)).scaled(&scalar);
        m += 2;
    }
    TruncSeries::new(Var::Z, 0, coeffs, order, Cyclotomic5::zero()).exp()
}

/// Entry `(i, j)` is `prefactor_i(z) sum_p R_{jp} (z/zeta^i)^p` (or the sum
/// alone when `with_prefactor` is false).
pub fn assemble_r_matrix(
    table: &RTableKP4,
    with_prefactor: bool,
    consts: &Constants,
) -> Result<RMatrix<DiffRingElem>> {
    let order = table.levels() as i64;
    let mut entries = Vec::with_capacity(5);
    for i in 0..5 {
        let pref = if with_prefactor {
            Some(kp4_prefactor(i, order, consts)?)
        } else {
            None
        };
        let row = (0..5)
            .map(|j| {
                let raw = row_scaled(table.row(j), i, order);
                match &pref {
                    Some(p) => apply_prefactor(&raw, p),
                    None => raw,
                }
            })
            .collect();
        entries.push(row);
    }
    Ok(RMatrix {
        geometry: G,
        z_order: order,
        entries,
    })
}

/// Cyclotomic scalar as an element of the extended ring.
pub fn lift(c: &Cyclotomic5) -> Cyclotomic<DiffRingElem> {
    Cyclotomic::from_scalar(c, &DiffRingElem::one(G))
}

/// The six first-row polynomials printed with the recursion (`R_{11}..R_{16}`),
/// as `(overall factor, [(L-exponent, integer coefficient)])`.
pub fn printed_first_row() -> Vec<(Rational, Vec<(i32, i64)>)> {
    vec![
        (rat(3, 20), vec![(0, 1), (4, -1)]),
        (rat(9, 800), vec![(0, 1), (4, -2), (8, 1)]),
        (
            rat(1, 80000),
            vec![(0, 269), (2, 4288), (4, -135), (7, -16128), (8, 135), (12, 11571)],
        ),
        (
            rat(1, 6_400_000),
            vec![
                (0, 2823),
                (1, 137216),
                (2, 51456),
                (4, -3228),
                (6, -2041088),
                (7, -193536),
                (8, 810),
                (11, 4322304),
                (12, 138852),
                (16, -2415609),
            ],
        ),
        (
            rat(3, 128_000_000),
            vec![
                (0, 50532),
                (1, 137216),
                (2, 25728),
                (4, -2823),
                (5, -4634624),
                (6, -2041088),
                (7, -96768),
                (8, 1614),
                (10, 23404672),
                (11, 4322304),
                (12, 69426),
                (15, -34732544),
                (16, -2415609),
                (20, 15911973),
            ],
        ),
        (
            rat(1, 25_600_000_000),
            vec![
                (0, 4564757),
                (1, 6174720),
                (2, 4613888),
                (4, 4493426178),
                (5, -417116160),
                (6, -91848960),
                (7, -17353728),
                (8, 127035),
                (9, -47045380096),
                (10, 2106420480),
                (11, 194503680),
                (12, 12450396),
                (14, 132709674240),
                (15, -3125928960),
                (16, -108702405),
                (19, -143147676672),
                (20, 1432077570),
                (24, 52989974037),
            ],
        ),
    ]
}

pub fn printed_first_row_elements() -> Vec<DiffRingElem> {
    printed_first_row()
        .into_iter()
        .map(|(f, terms)| {
            DiffRingElem::from_terms(G, terms.into_iter().map(|(e, c)| (Monomial::l(e), &f * rat(c, 1))))
        })
        .collect()
}
