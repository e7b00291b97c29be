//! I-functions, the Birkhoff operator and the series `C_i, L, X, Y, B_k`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{rat, Rational, Ring};
use crate::error::{Error, Result};
use crate::series::{Series, Var};
use crate::verify::report::VerificationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Kp4,
    C5z5,
}

impl Geometry {
    pub const ALL: [Geometry; 2] = [Geometry::Kp4, Geometry::C5z5];

    /// 0 for local P4, 1 for the orbifold.
    pub fn delta(self) -> u32 {
        match self {
            Geometry::Kp4 => 0,
            Geometry::C5z5 => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Geometry::Kp4 => "kp4",
            Geometry::C5z5 => "c5z5",
        }
    }

    /// `q` for local P4, `psi` for the orbifold.
    pub fn var(self) -> Var {
        match self {
            Geometry::Kp4 => Var::Q,
            Geometry::C5z5 => Var::Psi,
        }
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Geometry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "kp4" => Ok(Geometry::Kp4),
            "c5z5" => Ok(Geometry::C5z5),
            other => Err(Error::InvalidArgument(format!("unknown geometry {other:?}"))),
        }
    }
}

/// A cohomology-valued series in `x` and `z`, at Birkhoff level `i`.
///
/// Component `n` (for `n >= i`) is the coefficient of `z^{i-n}` and sits on
/// basis element `n mod 5` (`H^n` for local P4, `phi_{n mod 5}` for the
/// orbifold). Local P4 series carry an implicit factor `q^{H/z}`, so that
/// every component is an honest power series in `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct CohomSeries {
    geometry: Geometry,
    level: usize,
    comps: Vec<Series>,
}

impl CohomSeries {
    pub fn new(geometry: Geometry, level: usize, comps: Vec<Series>) -> Self {
        Self {
            geometry,
            level,
            comps,
        }
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// One past the largest stored component index.
    pub fn depth(&self) -> usize {
        self.level + self.comps.len()
    }

    pub fn component(&self, n: usize) -> Option<&Series> {
        n.checked_sub(self.level).and_then(|i| self.comps.get(i))
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &Series)> + '_ {
        self.comps.iter().enumerate().map(move |(i, s)| (self.level + i, s))
    }

    /// Exponent of `z` carried by component `n`.
    pub fn z_power(&self, n: usize) -> i64 {
        self.level as i64 - n as i64
    }

    pub fn basis_index(n: usize) -> usize {
        n % 5
    }

    /// The `z^0` coefficient, `F(x, infinity)`.
    pub fn leading(&self) -> Option<&Series> {
        self.component(self.level)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Series::is_zero_to_order)
    }

    /// Divides every component by the scalar series `c`.
    pub fn divided_by(&self, c: &Series) -> Result<Self> {
        let comps = self.comps.iter().map(|s| s.div(c)).collect::<Result<_>>()?;
        Ok(Self::new(self.geometry, self.level, comps))
    }

    fn twisted(&self) -> bool {
        self.geometry == Geometry::Kp4
    }
}

fn hpoly(c0: Rational, c1: Rational) -> Series {
    Series::from_rationals(Var::Z, vec![c0, c1], 4)
}

/// Expansion of `sum_d q^d prod_{k<5d}(-5H - kz) / prod_{k=1}^d (H + kz)^5`
/// (local P4, `H^5 = 0`) or `sum_a psi^a/(z^a a!) prod (1 - (kz)^5) phi_{a mod 5}`
/// (orbifold). Components `0..=z_order` are kept; local P4 has at most five.
#[allow(clippy::needless_range_loop)]
pub fn i_function(g: Geometry, x_order: i64, z_order: usize) -> CohomSeries {
    let n = x_order.max(0) as usize;
    match g {
        Geometry::Kp4 => {
            let depth = z_order.min(4) + 1;
            let mut cols = vec![vec![Rational::zero(); n + 1]; depth];
            for d in 0..=n {
                // The d-th term is homogeneous of degree 0 in (H, z); with h = H/z
                // it is a polynomial in h truncated at h^4.
                let mut num = hpoly(Rational::one(), Rational::zero());
                for k in 0..5 * d as i64 {
                    num = num.times(&hpoly(rat(-k, 1), rat(-5, 1)));
                }
                let mut den = hpoly(Rational::one(), Rational::zero());
                for k in 1..=d as i64 {
                    den = den.times(&hpoly(rat(k, 1), Rational::one()).pow(5));
                }
                let f = num.div(&den).expect("denominator has a nonzero constant term");
                for (m, col) in cols.iter_mut().enumerate() {
                    col[d] = f.coeff(m as i64).clone();
                }
            }
            let comps = cols.into_iter().map(|c| Series::from_rationals(Var::Q, c, x_order)).collect();
            CohomSeries::new(g, 0, comps)
        }
        Geometry::C5z5 => {
            let depth = z_order + 1;
            let mut cols = vec![vec![Rational::zero(); n + 1]; depth];
            let mut factorial = Rational::one();
            for a in 0..=n {
                if a > 0 {
                    factorial *= rat(a as i64, 1);
                }
                // prod over k = frac(a/5) + m < a/5 of (1 - k^5 z^5), as a polynomial in z^5
                let frac = rat((a % 5) as i64, 5);
                let top = rat(a as i64, 5);
                let mut poly = vec![Rational::one()];
                let mut k = frac;
                while k < top {
                    let k5 = k.pow(5);
                    let mut next = poly.clone();
                    next.push(Rational::zero());
                    for (m, c) in poly.iter().enumerate() {
                        next[m + 1] -= c * &k5;
                    }
                    poly = next;
                    k += Rational::one();
                }
                for (m, c) in poly.iter().enumerate() {
                    let comp = a - 5 * m;
                    if comp < depth {
                        cols[comp][a] += c / &factorial;
                    }
                }
            }
            let comps = cols.into_iter().map(|c| Series::from_rationals(Var::Psi, c, x_order)).collect();
            CohomSeries::new(g, 0, comps)
        }
    }
}

/// `t(q)` (the `H`-component of the `1/z` coefficient) or `s(psi)`.
pub fn mirror_map(g: Geometry, order: i64) -> Series {
    i_function(g, order, 1)
        .component(1)
        .cloned()
        .expect("the I-function has a 1/z component")
}

/// `F -> z D (F / F(x, infinity))`.
///
/// For local P4 the implicit `q^{H/z}` contributes `z D q^{H/z} = H q^{H/z}`,
/// which moves each component one step along `H`.
pub fn birkhoff_step(f: &CohomSeries) -> Result<CohomSeries> {
    let c = f
        .leading()
        .ok_or_else(|| Error::NonUnitLeadingTerm(format!("no z^0 coefficient at level {}", f.level)))?;
    if c.is_zero_to_order() {
        return Err(Error::NonUnitLeadingTerm(format!(
            "z^0 coefficient at level {} vanishes through {}^{}",
            f.level,
            c.var(),
            c.order()
        )));
    }
    let quot = f.divided_by(c)?;
    let mut comps = Vec::new();
    for n in f.level + 1..f.depth() {
        let own = quot.component(n).expect("n below depth").d_operator()?;
        let next = if f.twisted() {
            quot.component(n - 1).expect("n - 1 at or above level").plus(&own)
        } else {
            own
        };
        comps.push(next);
    }
    Ok(CohomSeries::new(f.geometry, f.level + 1, comps))
}

/// `[F_0, ..., F_steps]` with `F_0 = f` and `F_{i+1} = M F_i`.
pub fn birkhoff_chain(f: &CohomSeries, steps: usize) -> Result<Vec<CohomSeries>> {
    let mut out = vec![f.clone()];
    for _ in 0..steps {
        let next = birkhoff_step(out.last().expect("nonempty"))?;
        out.push(next);
    }
    Ok(out)
}

/// The basic series of one geometry, all known through `x^order`.
#[derive(Clone, Debug, PartialEq)]
pub struct HGData {
    pub geometry: Geometry,
    pub order: i64,
    /// `C_0 .. C_4` for local P4, `C_0 .. C_5` for the orbifold.
    pub c: Vec<Series>,
    pub l: Series,
    pub l_inv: Series,
    pub x: Series,
    pub dx: Series,
    pub d2x: Series,
    pub d3x: Series,
    pub y: Series,
    pub dy: Series,
    /// `B_1 .. B_4`.
    pub b: [Series; 4],
    pub mirror: Series,
}

/// `L` and `1/L` from their closed forms.
pub fn l_series(g: Geometry, order: i64) -> (Series, Series) {
    match g {
        Geometry::Kp4 => (
            Series::binomial(Var::Q, &rat(-1, 5), &rat(3125, 1), 1, order),
            Series::binomial(Var::Q, &rat(1, 5), &rat(3125, 1), 1, order),
        ),
        Geometry::C5z5 => (
            Series::binomial(Var::Psi, &rat(-1, 5), &rat(1, 3125), 5, order - 1)
                .shift(1)
                .negated(),
            Series::binomial(Var::Psi, &rat(1, 5), &rat(1, 3125), 5, order + 1)
                .shift(-1)
                .negated(),
        ),
    }
}

/// `B_1 .. B_4` from `X, DX, D^2X, D^3X`, scaled by `-5` (local P4) or `1/5`.
pub fn b_series(g: Geometry, x: &Series, dx: &Series, d2x: &Series, d3x: &Series) -> [Series; 4] {
    let s = match g {
        Geometry::Kp4 => rat(-5, 1),
        Geometry::C5z5 => rat(1, 5),
    };
    let x2 = x.times(x);
    let x3 = x2.times(x);
    let b1 = x.scaled(&s);
    let b2 = dx.plus(&x2).scaled(&s.pow(2));
    let b3 = d2x.plus(&x.times(dx).scaled(&rat(3, 1))).plus(&x3).scaled(&s.pow(3));
    let b4 = d3x
        .plus(&x.times(d2x).scaled(&rat(4, 1)))
        .plus(&dx.times(dx).scaled(&rat(3, 1)))
        .plus(&x2.times(dx).scaled(&rat(6, 1)))
        .plus(&x2.times(&x2))
        .scaled(&s.pow(4));
    [b1, b2, b3, b4]
}

impl HGData {
    fn compute_at(g: Geometry, work: i64) -> Result<Self> {
        let steps = match g {
            Geometry::Kp4 => 4,
            Geometry::C5z5 => 5,
        };
        let i = i_function(g, work, steps);
        let chain = birkhoff_chain(&i, steps)?;
        let c: Vec<Series> = chain
            .iter()
            .map(|f| f.leading().cloned().expect("chain levels have a z^0 coefficient"))
            .collect();
        let (l, l_inv) = l_series(g, work);
        let x = c[1].d_operator()?.div(&c[1])?;
        let y = c[2].d_operator()?.div(&c[2])?;
        let dx = x.d_operator()?;
        let d2x = dx.d_operator()?;
        let d3x = d2x.d_operator()?;
        let dy = y.d_operator()?;
        let b = b_series(g, &x, &dx, &d2x, &d3x);
        let mirror = i.component(1).cloned().expect("I-function has a 1/z component");
        Ok(Self {
            geometry: g,
            order: work,
            c,
            l,
            l_inv,
            x,
            dx,
            d2x,
            d3x,
            y,
            dy,
            b,
            mirror,
        })
    }

    fn fields(&self) -> impl Iterator<Item = &Series> + '_ {
        self.c
            .iter()
            .chain([&self.l, &self.l_inv, &self.x, &self.dx, &self.d2x, &self.d3x, &self.y, &self.dy])
            .chain(self.b.iter())
            .chain([&self.mirror])
    }

    /// Smallest truncation order among the fields.
    pub fn certified_order(&self) -> i64 {
        self.fields().map(Series::order).min().expect("fields are nonempty")
    }

    pub fn truncate(&self, order: i64) -> Self {
        let t = |s: &Series| s.truncate(order);
        Self {
            geometry: self.geometry,
            order: order.min(self.order),
            c: self.c.iter().map(t).collect(),
            l: t(&self.l),
            l_inv: t(&self.l_inv),
            x: t(&self.x),
            dx: t(&self.dx),
            d2x: t(&self.d2x),
            d3x: t(&self.d3x),
            y: t(&self.y),
            dy: t(&self.dy),
            b: [t(&self.b[0]), t(&self.b[1]), t(&self.b[2]), t(&self.b[3])],
            mirror: t(&self.mirror),
        }
    }

    /// The series a consumer names by the CLI keys `c1|c2|l|x|y|mirror`.
    pub fn named(&self, key: &str) -> Option<&Series> {
        match key {
            "c0" => self.c.first(),
            "c1" => self.c.get(1),
            "c2" => self.c.get(2),
            "c3" => self.c.get(3),
            "c4" => self.c.get(4),
            "c5" => self.c.get(5),
            "l" => Some(&self.l),
            "x" => Some(&self.x),
            "y" => Some(&self.y),
            "mirror" => Some(&self.mirror),
            _ => None,
        }
    }
}

/// All basic series of `g` through `x^order`. Division by the orbifold `C_i`
/// (which vanish at `psi = 0`) costs precision, so the computation is rerun at
/// a higher working order until every field is certified through `order`.
pub fn compute_hg_data(g: Geometry, order: i64) -> Result<HGData> {
    if order < 6 {
        return Err(Error::InvalidArgument(format!("x-order must be at least 6, got {order}")));
    }
    let mut pad = match g {
        Geometry::Kp4 => 0,
        Geometry::C5z5 => 10,
    };
    loop {
        let d = HGData::compute_at(g, order + pad)?;
        let have = d.certified_order();
        if have >= order {
            return Ok(d.truncate(order));
        }
        if pad > 4 * order + 40 {
            return Err(Error::InsufficientOrder {
                needed: order,
                available: have,
            });
        }
        pad += (order - have).max(5);
    }
}

/// Residuals of the `C`-relations and of the two closure relations among
/// `X, Y` (the `B_4` line and the `DY` line).
pub fn check_relations(d: &HGData) -> VerificationReport {
    let g = d.geometry;
    let mut report = VerificationReport::new(format!("hgdata-relations:{g}"))
        .param("geometry", g.name())
        .param("order", d.order);
    let n = d.order;
    let one = Series::rational_constant(g.var(), Rational::one(), n);
    report.series_residual("C0-1", &d.c[0].minus(&one), n);
    report.series_residual("C2-C4", &d.c[2].minus(&d.c[4]), n);
    let l5 = d.l.pow(5);
    let sign = if g.delta() == 0 { rat(1, 1) } else { rat(-1, 1) };
    let lhs = d.c[1].pow(2).times(&d.c[2].pow(2)).times(&d.c[3]);
    report.series_residual("C1^2C2^2C3-(-1)^delta*L^5", &lhs.minus(&l5.scaled(&sign)), n);
    if let Some(c5) = d.c.get(5) {
        report.series_residual("C5-C1", &c5.minus(&d.c[1]), n);
    }
    let [b1, b2, b3, b4] = &d.b;
    let (x, y, dx) = (&d.x, &d.y, &d.dx);
    let k = |r: Rational| Series::rational_constant(g.var(), r, n);
    match g {
        Geometry::Kp4 => {
            let w = one.minus(&l5);
            let inner = b3
                .scaled(&rat(10, 1))
                .minus(&b2.scaled(&rat(35, 1)))
                .plus(&b1.scaled(&rat(50, 1)))
                .minus(&k(rat(24, 1)));
            report.series_residual("B4-line", &b4.minus(&w.times(&inner)), n);
            let l5m1 = l5.minus(&one);
            let rhs = l5m1
                .scaled(&rat(2, 5))
                .plus(&l5m1.times(x).scaled(&rat(2, 1)))
                .minus(&x.times(x).scaled(&rat(2, 1)))
                .minus(&dx.scaled(&rat(4, 1)))
                .plus(&l5m1.times(y))
                .minus(&y.times(y))
                .minus(&x.times(y).scaled(&rat(2, 1)));
            report.series_residual("DY-line", &d.dy.minus(&rhs), n);
        }
        Geometry::C5z5 => {
            let w = one.plus(&l5.scaled(&rat(1, 3125)));
            let inner = b3
                .scaled(&rat(2, 1))
                .minus(&b2.scaled(&rat(7, 5)))
                .plus(&b1.scaled(&rat(2, 5)))
                .minus(&k(rat(24, 625)));
            report.series_residual("B4-line", &b4.minus(&w.times(&inner)), n);
            let rhs = w
                .scaled(&rat(-10, 1))
                .plus(&w.times(x).scaled(&rat(10, 1)))
                .plus(&w.times(y).scaled(&rat(5, 1)))
                .minus(&x.times(x).scaled(&rat(2, 1)))
                .minus(&dx.scaled(&rat(4, 1)))
                .minus(&x.times(y).scaled(&rat(2, 1)))
                .minus(&y.times(y));
            report.series_residual("DY-line", &d.dy.minus(&rhs), n);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kp4_i_function_low_terms() {
        let i = i_function(Geometry::Kp4, 3, 4);
        // every d >= 1 term is divisible by H
        let h0 = i.component(0).unwrap();
        assert_eq!(h0, &Series::from_rationals(Var::Q, vec![rat(1, 1)], 3));
        assert_eq!(i.component(1).unwrap().coeff(1), &rat(-120, 1));
    }

    #[test]
    fn orbifold_i_function_low_terms() {
        let i = i_function(Geometry::C5z5, 4, 4);
        let expect = [rat(1, 1), rat(1, 1), rat(1, 2), rat(1, 6), rat(1, 24)];
        for (n, e) in expect.iter().enumerate() {
            let s = i.component(n).unwrap();
            assert_eq!(s.coeff(n as i64), e);
            assert_eq!(s.terms().count(), 1);
        }
    }

    #[test]
    fn mirror_maps() {
        let s = mirror_map(Geometry::C5z5, 6);
        assert_eq!(s.coeff(1), &rat(1, 1));
        assert!((2..=5).all(|e| Zero::is_zero(s.coeff(e))));
        assert_eq!(s.coeff(6), &rat(-1, 2_250_000));
        assert!(Zero::is_zero(s.coeff(0)));
        let t = mirror_map(Geometry::Kp4, 4);
        assert_eq!(t.coeff(1), &rat(-120, 1));
        assert!(Zero::is_zero(t.coeff(0)));
    }

    #[test]
    fn birkhoff_of_constant_is_zero() {
        let f = CohomSeries::new(
            Geometry::C5z5,
            0,
            vec![Series::rational_constant(Var::Psi, rat(1, 1), 5)],
        );
        assert!(birkhoff_step(&f).unwrap().is_zero());
        let empty = CohomSeries::new(Geometry::C5z5, 1, vec![]);
        assert!(matches!(birkhoff_step(&empty), Err(Error::NonUnitLeadingTerm(_))));
        let zero_lead =
            CohomSeries::new(Geometry::C5z5, 0, vec![Series::from_rationals(Var::Psi, vec![], 5)]);
        assert!(matches!(birkhoff_step(&zero_lead), Err(Error::NonUnitLeadingTerm(_))));
    }

    #[test]
    fn orbifold_first_step_has_c1_psi_unit() {
        let i = i_function(Geometry::C5z5, 12, 5);
        let f1 = birkhoff_step(&i).unwrap();
        let c1 = f1.leading().unwrap();
        assert_eq!(c1.valuation(), 1);
        assert_eq!(c1.coeff(1), &rat(1, 1));
        assert!((2..=5).all(|e| Zero::is_zero(c1.coeff(e))));
    }

    #[test]
    fn kp4_l_expansion() {
        let d = compute_hg_data(Geometry::Kp4, 8).unwrap();
        assert_eq!(d.l.coeff(0), &rat(1, 1));
        assert_eq!(d.l.coeff(1), &rat(-625, 1));
        assert_eq!(d.l.coeff(2), &rat(1_171_875, 1));
        assert_eq!(d.b[0], d.x.scaled(&rat(-5, 1)));
        assert!(Zero::is_zero(d.x.coeff(0)));
    }

    #[test]
    fn orbifold_l_and_x() {
        let d = compute_hg_data(Geometry::C5z5, 12).unwrap();
        assert_eq!(d.l.valuation(), 1);
        assert_eq!(d.l.coeff(1), &rat(-1, 1));
        assert_eq!(d.l.coeff(6), &rat(1, 15625));
        assert_eq!(d.x.coeff(0), &rat(1, 1));
        assert_eq!(d.l.times(&d.l_inv), Series::rational_constant(Var::Psi, rat(1, 1), 11));
        assert_eq!(d.order, 12);
        assert!(d.certified_order() >= 12);
    }

    #[test]
    fn order_below_six_is_rejected() {
        assert!(matches!(compute_hg_data(Geometry::Kp4, 5), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn geometry_parsing() {
        assert_eq!("kp4".parse::<Geometry>().unwrap(), Geometry::Kp4);
        assert_eq!("C5Z5".parse::<Geometry>().unwrap(), Geometry::C5z5);
        assert!("p4".parse::<Geometry>().is_err());
        assert_eq!(Geometry::Kp4.delta(), 0);
        assert_eq!(Geometry::C5z5.delta(), 1);
    }

    #[test]
    fn relations_vanish_for_both_geometries() {
        for g in Geometry::ALL {
            let d = compute_hg_data(g, 20).unwrap();
            let r = check_relations(&d);
            assert!(r.passed(), "{r}");
        }
    }
}
