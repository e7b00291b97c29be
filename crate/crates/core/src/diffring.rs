//! The differential rings `Q[L, 1/L][X, DX, D^2X, Y]` of both geometries.
//!
//! `D` is closed on the four generators by the `B_4`-relation (which gives
//! `D^3X`) and the `DY`-relation; `D L` comes from the closed form of `L`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::arith::{rat, rational_to_string, Rational, Ring};
use crate::error::{Error, Result};
use crate::hypergeom::{Geometry, HGData};
use crate::series::Series;

/// `L^l X^x (DX)^dx (D^2X)^d2x Y^y`; the derived order is lexicographic in
/// `(L, X, DX, D^2X, Y)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub l: i32,
    pub x: u32,
    pub dx: u32,
    pub d2x: u32,
    pub y: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        l: 0,
        x: 0,
        dx: 0,
        d2x: 0,
        y: 0,
    };

    pub fn l(e: i32) -> Self {
        Self { l: e, ..Self::ONE }
    }

    fn times(self, o: Self) -> Self {
        Self {
            l: self.l + o.l,
            x: self.x + o.x,
            dx: self.dx + o.dx,
            d2x: self.d2x + o.d2x,
            y: self.y + o.y,
        }
    }

    /// True when only `L` occurs.
    pub fn is_pure_l(&self) -> bool {
        self.x == 0 && self.dx == 0 && self.d2x == 0 && self.y == 0
    }

    /// The non-`L` part.
    fn rest(&self) -> Self {
        Self { l: 0, ..*self }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let mut push = |name: &str, e: i64| match e {
            0 => {}
            1 => parts.push(name.to_string()),
            _ => parts.push(format!("{name}^{e}")),
        };
        push("L", self.l as i64);
        push("X", self.x as i64);
        push("DX", self.dx as i64);
        push("D2X", self.d2x as i64);
        push("Y", self.y as i64);
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    L,
    X,
    DX,
    D2X,
    Y,
}

impl Generator {
    pub const ALL: [Generator; 5] = [Generator::L, Generator::X, Generator::DX, Generator::D2X, Generator::Y];

    fn monomial(self) -> Monomial {
        let mut m = Monomial::ONE;
        match self {
            Generator::L => m.l = 1,
            Generator::X => m.x = 1,
            Generator::DX => m.dx = 1,
            Generator::D2X => m.d2x = 1,
            Generator::Y => m.y = 1,
        }
        m
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffRingElem {
    geometry: Geometry,
    terms: BTreeMap<Monomial, Rational>,
}

impl DiffRingElem {
    pub fn zero(g: Geometry) -> Self {
        Self {
            geometry: g,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(g: Geometry, c: Rational) -> Self {
        Self::from_terms(g, [(Monomial::ONE, c)])
    }

    pub fn one(g: Geometry) -> Self {
        Self::constant(g, Rational::one())
    }

    pub fn generator(g: Geometry, gen: Generator) -> Self {
        Self::from_terms(g, [(gen.monomial(), Rational::one())])
    }

    /// `c L^e`.
    pub fn l_power(g: Geometry, e: i32, c: Rational) -> Self {
        Self::from_terms(g, [(Monomial::l(e), c)])
    }

    /// Sums repeated monomials and drops zeros.
    pub fn from_terms(g: Geometry, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut out = Self::zero(g);
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if Zero::is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if Zero::is_zero(o.get()) {
                    o.remove();
                }
            }
        }
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// True when no `X, DX, D^2X, Y` occur.
    pub fn is_pure_l(&self) -> bool {
        self.terms.keys().all(Monomial::is_pure_l)
    }

    /// Smallest and largest `L`-exponent, if nonzero.
    pub fn l_degree_range(&self) -> Option<(i32, i32)> {
        let lo = self.terms.keys().map(|m| m.l).min()?;
        let hi = self.terms.keys().map(|m| m.l).max()?;
        Some((lo, hi))
    }

    fn times_monomial(&self, m: Monomial, c: &Rational) -> Self {
        Self {
            geometry: self.geometry,
            terms: self.terms.iter().map(|(k, v)| (k.times(m), v * c)).collect(),
        }
    }

    fn check_geometry(&self, expected: Geometry) -> Result<()> {
        if self.geometry == expected {
            Ok(())
        } else {
            Err(Error::WrongGeometry {
                expected,
                found: self.geometry,
            })
        }
    }

    /// `D`, extended from the generator rules by the Leibniz rule.
    pub fn derive(&self) -> Self {
        let rules = rules(self.geometry);
        let mut out = Self::zero(self.geometry);
        for (m, c) in &self.terms {
            if m.l != 0 {
                let base = Monomial { l: m.l - 1, ..*m };
                let k = c * rat(m.l as i64, 1);
                for (rm, rc) in &rules.dl.terms {
                    out.add_term(base.times(*rm), &k * rc);
                }
            }
            let parts: [(u32, Monomial, &DiffRingElem); 4] = [
                (m.x, Monomial { x: m.x.wrapping_sub(1), ..*m }, &rules.dx),
                (m.dx, Monomial { dx: m.dx.wrapping_sub(1), ..*m }, &rules.d2x),
                (m.d2x, Monomial { d2x: m.d2x.wrapping_sub(1), ..*m }, &rules.d3x),
                (m.y, Monomial { y: m.y.wrapping_sub(1), ..*m }, &rules.dy),
            ];
            for (e, base, rule) in parts {
                if e == 0 {
                    continue;
                }
                let k = c * rat(e as i64, 1);
                for (rm, rc) in &rule.terms {
                    out.add_term(base.times(*rm), &k * rc);
                }
            }
        }
        out
    }

    /// `L -> -L/5, X -> -X/5, DX -> DX/25, D^2X -> -D^2X/125, Y -> -Y/5`,
    /// from the local P4 ring to the orbifold ring.
    pub fn transform_t(&self) -> Result<Self> {
        self.check_geometry(Geometry::Kp4)?;
        let fifth = rat(-1, 5);
        let scale = |m: &Monomial| {
            fifth.pow(m.l)
                * fifth.pow((m.x + m.y) as i32)
                * rat(1, 25).pow(m.dx as i32)
                * rat(-1, 125).pow(m.d2x as i32)
        };
        Ok(Self {
            geometry: Geometry::C5z5,
            terms: self.terms.iter().map(|(m, c)| (*m, c * scale(m))).collect(),
        })
    }

    /// The `L^0` part at `X = Y = -1/5`, `DX = D^2X = 0`.
    pub fn m_restrict(&self) -> Rational {
        let fifth = rat(-1, 5);
        self.terms
            .iter()
            .filter(|(m, _)| m.l == 0 && m.dx == 0 && m.d2x == 0)
            .map(|(m, c)| c * fifth.pow((m.x + m.y) as i32))
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Substitutes the series of `d` for the generators and truncates at
    /// `order`. Fails if the result is not known that far (negative powers of
    /// the orbifold `L` cost one order each).
    pub fn eval_series(&self, d: &HGData, order: i64) -> Result<Series> {
        self.check_geometry(d.geometry)?;
        if d.order < order {
            return Err(Error::InsufficientOrder {
                needed: order,
                available: d.order,
            });
        }
        let mut cache = EvalCache::new(d);
        let out = cache.eval(self);
        let out = out.truncate(order);
        if out.order() < order {
            return Err(Error::InsufficientOrder {
                needed: order,
                available: out.order(),
            });
        }
        Ok(out)
    }

    /// A random element with up to `max_terms` terms, small exponents and
    /// small rational coefficients.
    pub fn random(g: Geometry, rng: &mut impl rand::Rng, max_terms: usize) -> Self {
        let n = rng.gen_range(1..=max_terms.max(1));
        let terms = (0..n).map(|_| {
            let m = Monomial {
                l: rng.gen_range(-3..=4),
                x: rng.gen_range(0..=2),
                dx: rng.gen_range(0..=1),
                d2x: rng.gen_range(0..=1),
                y: rng.gen_range(0..=2),
            };
            let num: i64 = rng.gen_range(-9..=9);
            let den: i64 = rng.gen_range(1..=7);
            (m, rat(num, den))
        });
        Self::from_terms(g, terms)
    }
}

impl Ring for DiffRingElem {
    fn zero_like(&self) -> Self {
        Self::zero(self.geometry)
    }

    fn one_like(&self) -> Self {
        Self::one(self.geometry)
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn plus(&self, other: &Self) -> Self {
        debug_assert_eq!(self.geometry, other.geometry);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    fn minus(&self, other: &Self) -> Self {
        debug_assert_eq!(self.geometry, other.geometry);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c);
        }
        out
    }

    fn times(&self, other: &Self) -> Self {
        debug_assert_eq!(self.geometry, other.geometry);
        let mut out = Self::zero(self.geometry);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.times(*m2), c1 * c2);
            }
        }
        out
    }

    fn negated(&self) -> Self {
        Self {
            geometry: self.geometry,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    fn scaled(&self, r: &Rational) -> Self {
        if Zero::is_zero(r) {
            return self.zero_like();
        }
        self.times_monomial(Monomial::ONE, r)
    }
}

impl fmt::Display for DiffRingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if *m == Monomial::ONE {
                    format!("({c})")
                } else {
                    format!("({c})*{m}")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Sorted `monomial -> "p/q"` map.
impl Serialize for DiffRingElem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.terms.len()))?;
        for (m, c) in &self.terms {
            map.serialize_entry(&m.to_string(), &rational_to_string(c))?;
        }
        map.end()
    }
}

/// `D` on the generators.
#[derive(Debug)]
pub struct GeneratorRules {
    pub dl: DiffRingElem,
    pub dx: DiffRingElem,
    pub d2x: DiffRingElem,
    pub d3x: DiffRingElem,
    pub dy: DiffRingElem,
}

pub fn rules(g: Geometry) -> &'static GeneratorRules {
    static KP4: OnceLock<GeneratorRules> = OnceLock::new();
    static ORB: OnceLock<GeneratorRules> = OnceLock::new();
    match g {
        Geometry::Kp4 => KP4.get_or_init(|| build_rules(g)),
        Geometry::C5z5 => ORB.get_or_init(|| build_rules(g)),
    }
}

fn build_rules(g: Geometry) -> GeneratorRules {
    let gen = |x| DiffRingElem::generator(g, x);
    let c = |r: Rational| DiffRingElem::constant(g, r);
    let lp = |e: i32, r: Rational| DiffRingElem::l_power(g, e, r);
    let (x, dx, d2x, y) = (gen(Generator::X), gen(Generator::DX), gen(Generator::D2X), gen(Generator::Y));
    let x2 = x.times(&x);
    // B_k = s^k P_k with P_1 = X, P_2 = DX + X^2, P_3 = D^2X + 3 X DX + X^3 and
    // P_4 = D^3X + rest.
    let p1 = x.clone();
    let p2 = dx.plus(&x2);
    let p3 = d2x.plus(&x.times(&dx).scaled(&rat(3, 1))).plus(&x2.times(&x));
    let rest = x
        .times(&d2x)
        .scaled(&rat(4, 1))
        .plus(&dx.times(&dx).scaled(&rat(3, 1)))
        .plus(&x2.times(&dx).scaled(&rat(6, 1)))
        .plus(&x2.times(&x2));
    let l5 = lp(5, Rational::one());
    match g {
        Geometry::Kp4 => {
            let s = rat(-5, 1);
            let b = |k: i32, p: &DiffRingElem| p.scaled(&s.pow(k));
            let dl = lp(6, rat(1, 5)).minus(&lp(1, rat(1, 5)));
            let w = c(Rational::one()).minus(&l5);
            let inner = b(3, &p3)
                .scaled(&rat(10, 1))
                .minus(&b(2, &p2).scaled(&rat(35, 1)))
                .plus(&b(1, &p1).scaled(&rat(50, 1)))
                .minus(&c(rat(24, 1)));
            // s^4 (D^3X + rest) = w * inner
            let d3x = w.times(&inner).scaled(&s.pow(-4)).minus(&rest);
            let l5m1 = l5.minus(&c(Rational::one()));
            let dy = l5m1
                .scaled(&rat(2, 5))
                .plus(&l5m1.times(&x).scaled(&rat(2, 1)))
                .minus(&x2.scaled(&rat(2, 1)))
                .minus(&dx.scaled(&rat(4, 1)))
                .plus(&l5m1.times(&y))
                .minus(&y.times(&y))
                .minus(&x.times(&y).scaled(&rat(2, 1)));
            GeneratorRules {
                dl,
                dx: dx.clone(),
                d2x: d2x.clone(),
                d3x,
                dy,
            }
        }
        Geometry::C5z5 => {
            let s = rat(1, 5);
            let b = |k: i32, p: &DiffRingElem| p.scaled(&s.pow(k));
            let dl = lp(1, Rational::one()).plus(&lp(6, rat(1, 3125)));
            let w = c(Rational::one()).plus(&l5.scaled(&rat(1, 3125)));
            let inner = b(3, &p3)
                .scaled(&rat(2, 1))
                .minus(&b(2, &p2).scaled(&rat(7, 5)))
                .plus(&b(1, &p1).scaled(&rat(2, 5)))
                .minus(&c(rat(24, 625)));
            let d3x = w.times(&inner).scaled(&s.pow(-4)).minus(&rest);
            let dy = w
                .scaled(&rat(-10, 1))
                .plus(&w.times(&x).scaled(&rat(10, 1)))
                .plus(&w.times(&y).scaled(&rat(5, 1)))
                .minus(&x2.scaled(&rat(2, 1)))
                .minus(&dx.scaled(&rat(4, 1)))
                .minus(&x.times(&y).scaled(&rat(2, 1)))
                .minus(&y.times(&y));
            GeneratorRules {
                dl,
                dx: dx.clone(),
                d2x: d2x.clone(),
                d3x,
                dy,
            }
        }
    }
}

/// Memoised powers of the generator series for repeated evaluation.
pub struct EvalCache<'a> {
    data: &'a HGData,
    l_pos: Vec<Series>,
    l_neg: Vec<Series>,
    pows: HashMap<(u8, u32), Series>,
    rest: HashMap<Monomial, Series>,
}

impl<'a> EvalCache<'a> {
    pub fn new(data: &'a HGData) -> Self {
        let one = Series::rational_constant(data.geometry.var(), Rational::one(), data.order);
        Self {
            data,
            l_pos: vec![one.clone()],
            l_neg: vec![one],
            pows: HashMap::new(),
            rest: HashMap::new(),
        }
    }

    fn l_power(&mut self, e: i32) -> &Series {
        let (table, base) = if e >= 0 {
            (&mut self.l_pos, &self.data.l)
        } else {
            (&mut self.l_neg, &self.data.l_inv)
        };
        let k = e.unsigned_abs() as usize;
        while table.len() <= k {
            let next = table.last().expect("nonempty").times(base);
            table.push(next);
        }
        &table[k]
    }

    fn gen_power(&mut self, which: u8, e: u32) -> Series {
        if let Some(s) = self.pows.get(&(which, e)) {
            return s.clone();
        }
        let base = match which {
            0 => &self.data.x,
            1 => &self.data.dx,
            2 => &self.data.d2x,
            _ => &self.data.y,
        };
        let s = if e == 0 {
            Series::rational_constant(base.var(), Rational::one(), self.data.order)
        } else {
            self.gen_power(which, e - 1).times(base)
        };
        self.pows.insert((which, e), s.clone());
        s
    }

    fn rest_value(&mut self, m: Monomial) -> Series {
        if let Some(s) = self.rest.get(&m) {
            return s.clone();
        }
        let s = self
            .gen_power(0, m.x)
            .times(&self.gen_power(1, m.dx))
            .times(&self.gen_power(2, m.d2x))
            .times(&self.gen_power(3, m.y));
        self.rest.insert(m, s.clone());
        s
    }

    /// Groups terms by their non-`L` part so that each such part is multiplied
    /// once against a linear combination of powers of `L`.
    pub fn eval(&mut self, f: &DiffRingElem) -> Series {
        let var = self.data.geometry.var();
        let mut groups: BTreeMap<Monomial, Vec<(i32, &Rational)>> = BTreeMap::new();
        for (m, c) in &f.terms {
            groups.entry(m.rest()).or_default().push((m.l, c));
        }
        let mut total = Series::zero_with(var, Rational::zero(), self.data.order);
        for (rest, ls) in groups {
            let mut lsum: Option<Series> = None;
            for (e, c) in ls {
                let term = self.l_power(e).scaled(c);
                lsum = Some(match lsum {
                    None => term,
                    Some(acc) => acc.plus(&term),
                });
            }
            let lsum = lsum.expect("group is nonempty");
            let value = if rest == Monomial::ONE {
                lsum
            } else {
                lsum.times(&self.rest_value(rest))
            };
            total = total.plus(&value);
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergeom::compute_hg_data;
    use crate::series::Var;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn el(g: Geometry, gen: Generator) -> DiffRingElem {
        DiffRingElem::generator(g, gen)
    }

    #[test]
    fn derive_generators() {
        let g = Geometry::Kp4;
        let l = el(g, Generator::L);
        let expect = DiffRingElem::l_power(g, 6, rat(1, 5)).minus(&DiffRingElem::l_power(g, 1, rat(1, 5)));
        assert_eq!(l.derive(), expect);
        assert!(DiffRingElem::constant(g, rat(7, 3)).derive().is_zero());
        let (x, y) = (el(g, Generator::X), el(g, Generator::Y));
        let xy = x.times(&y);
        let leib = el(g, Generator::DX).times(&y).plus(&x.times(&rules(g).dy));
        assert_eq!(xy.derive(), leib);
        let lo = el(Geometry::C5z5, Generator::L);
        assert_eq!(
            lo.derive(),
            lo.plus(&DiffRingElem::l_power(Geometry::C5z5, 6, rat(1, 3125)))
        );
    }

    #[test]
    fn transform_examples() {
        let g = Geometry::Kp4;
        let l = el(g, Generator::L);
        assert_eq!(l.transform_t().unwrap(), DiffRingElem::l_power(Geometry::C5z5, 1, rat(-1, 5)));
        let l2x = l.times(&l).times(&el(g, Generator::X));
        let t = l2x.transform_t().unwrap();
        assert_eq!(t.terms().next().unwrap().1, &rat(-1, 125));
        assert_eq!(DiffRingElem::one(g).transform_t().unwrap(), DiffRingElem::one(Geometry::C5z5));
        assert!(matches!(
            DiffRingElem::one(Geometry::C5z5).transform_t(),
            Err(Error::WrongGeometry { .. })
        ));
    }

    #[test]
    fn m_restrict_examples() {
        let g = Geometry::Kp4;
        let r11 = DiffRingElem::constant(g, rat(3, 20)).minus(&DiffRingElem::l_power(g, 4, rat(3, 20)));
        assert_eq!(r11.m_restrict(), rat(3, 20));
        let f = DiffRingElem::l_power(g, -1, rat(1, 1)).times(&el(g, Generator::X));
        assert_eq!(f.m_restrict(), rat(0, 1));
        assert_eq!(DiffRingElem::one(g).m_restrict(), rat(1, 1));
        let xy = el(g, Generator::X).times(&el(g, Generator::Y)).plus(&el(g, Generator::DX));
        assert_eq!(xy.m_restrict(), rat(1, 25));
    }

    #[test]
    fn eval_examples() {
        let d = compute_hg_data(Geometry::Kp4, 8).unwrap();
        let l = el(Geometry::Kp4, Generator::L).eval_series(&d, 2).unwrap();
        assert_eq!(
            l,
            Series::from_rationals(Var::Q, vec![rat(1, 1), rat(-625, 1), rat(1_171_875, 1)], 2)
        );
        let seven = DiffRingElem::constant(Geometry::Kp4, rat(7, 1))
            .plus(&el(Geometry::Kp4, Generator::X).scaled(&rat(0, 1)));
        assert_eq!(seven.eval_series(&d, 8).unwrap(), Series::rational_constant(Var::Q, rat(7, 1), 8));
        assert!(matches!(seven.eval_series(&d, 9), Err(Error::InsufficientOrder { .. })));
    }

    #[test]
    fn closure_rules_hold_on_series() {
        for g in Geometry::ALL {
            let d = compute_hg_data(g, 16).unwrap();
            for gen in Generator::ALL {
                let e = el(g, gen);
                let lhs = e.derive().eval_series(&d, 15).unwrap();
                let rhs = e.eval_series(&d, 15).unwrap().d_operator().unwrap();
                assert_eq!(lhs, rhs, "{g} {gen:?}");
            }
        }
    }

    #[test]
    fn derivation_and_intertwining_on_random_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            for g in Geometry::ALL {
                let f = DiffRingElem::random(g, &mut rng, 4);
                let h = DiffRingElem::random(g, &mut rng, 4);
                let lhs = f.times(&h).derive();
                let rhs = f.derive().times(&h).plus(&f.times(&h.derive()));
                assert_eq!(lhs, rhs);
            }
            let f = DiffRingElem::random(Geometry::Kp4, &mut rng, 4);
            let lhs = f.derive().transform_t().unwrap();
            let rhs = f.transform_t().unwrap().derive().scaled(&rat(-1, 5));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn serialization_is_sorted() {
        let g = Geometry::Kp4;
        let f = el(g, Generator::Y)
            .plus(&DiffRingElem::l_power(g, -1, rat(-3, 20)))
            .plus(&DiffRingElem::one(g));
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"L^-1":"-3/20","1":"1/1","Y":"1/1"}"#);
    }
}
