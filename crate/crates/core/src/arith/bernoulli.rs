use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Rational;

/// Bernoulli numbers `B_0, B_1, ...` with `B_1 = -1/2` (generating function
/// `t / (e^t - 1)`), grown on demand.
///
/// The shared instance behind [`bernoulli_number`] is an append-only table:
/// concurrent readers see either the old or the extended prefix, never a
/// partially written entry.
#[derive(Debug, Default)]
pub struct BernoulliTable {
    numbers: RwLock<Vec<Rational>>,
    overrides: Vec<(usize, Rational)>,
}

impl BernoulliTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Process-wide shared table.
    pub fn global() -> &'static BernoulliTable {
        static TABLE: OnceLock<BernoulliTable> = OnceLock::new();
        TABLE.get_or_init(BernoulliTable::new)
    }

    /// A table whose entry `m` is replaced by `value`. Used for fault injection.
    pub fn with_override(m: usize, value: Rational) -> Self {
        Self {
            numbers: RwLock::default(),
            overrides: vec![(m, value)],
        }
    }

    pub fn number(&self, m: usize) -> Rational {
        if let Some((_, v)) = self.overrides.iter().find(|(i, _)| *i == m) {
            return v.clone();
        }
        {
            let cached = self.numbers.read().expect("bernoulli table poisoned");
            if let Some(b) = cached.get(m) {
                return b.clone();
            }
        }
        let mut cached = self.numbers.write().expect("bernoulli table poisoned");
        extend_to(&mut cached, m);
        cached[m].clone()
    }

    /// `B_m(x) = sum_j C(m, j) B_j x^{m-j}`.
    pub fn poly(&self, m: usize, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        let mut binom = BigInt::one();
        for j in 0..=m {
            acc += Rational::from_integer(binom.clone()) * self.number(j) * x.pow((m - j) as i32);
            binom = binom * BigInt::from(m - j) / BigInt::from(j + 1);
        }
        acc
    }
}

/// Uses `sum_{j=0}^{n} C(n+1, j) B_j = 0`.
fn extend_to(table: &mut Vec<Rational>, m: usize) {
    if table.is_empty() {
        table.push(Rational::one());
    }
    while table.len() <= m {
        let n = table.len();
        if n > 1 && n % 2 == 1 {
            table.push(Rational::zero());
            continue;
        }
        let mut acc = Rational::zero();
        let mut binom = BigInt::one(); // C(n+1, 0)
        for (j, b) in table.iter().enumerate() {
            acc += Rational::from_integer(binom.clone()) * b;
            binom = binom * BigInt::from(n + 1 - j) / BigInt::from(j + 1);
        }
        table.push(-acc / Rational::from_integer(BigInt::from(n + 1)));
    }
}

pub fn bernoulli_number(m: usize) -> Rational {
    BernoulliTable::global().number(m)
}

pub fn bernoulli_poly(m: usize, x: &Rational) -> Rational {
    BernoulliTable::global().poly(m, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn small_numbers() {
        assert_eq!(bernoulli_number(0), rat(1, 1));
        assert_eq!(bernoulli_number(1), rat(-1, 2));
        assert_eq!(bernoulli_number(2), rat(1, 6));
        assert_eq!(bernoulli_number(3), rat(0, 1));
        assert_eq!(bernoulli_number(4), rat(-1, 30));
        assert_eq!(bernoulli_number(6), rat(1, 42));
        assert_eq!(bernoulli_number(12), rat(-691, 2730));
        for k in 1..20 {
            assert_eq!(bernoulli_number(2 * k + 1), rat(0, 1));
        }
    }

    #[test]
    fn polynomial_values() {
        assert_eq!(bernoulli_poly(1, &rat(1, 5)), rat(-3, 10));
        assert_eq!(bernoulli_poly(6, &rat(0, 1)), rat(1, 42));
        assert_eq!(bernoulli_poly(2, &rat(1, 1)), rat(1, 6));
        for m in 0..15 {
            let sign = if m % 2 == 0 { rat(1, 1) } else { rat(-1, 1) };
            assert_eq!(bernoulli_poly(m, &rat(1, 1)), sign * bernoulli_number(m));
            assert_eq!(bernoulli_poly(m, &rat(0, 1)), bernoulli_number(m));
        }
    }

    #[test]
    fn difference_identity() {
        let points = [rat(0, 1), rat(1, 5), rat(-7, 3), rat(2, 1), rat(11, 13)];
        for m in 1..=12usize {
            for x in &points {
                let lhs = bernoulli_poly(m, &(x + rat(1, 1))) - bernoulli_poly(m, x);
                let rhs = Rational::from_integer(BigInt::from(m)) * x.pow(m as i32 - 1);
                assert_eq!(lhs, rhs, "m={m} x={x}");
            }
        }
    }

    #[test]
    fn reflection_symmetry() {
        // B_m(1 - x) = (-1)^m B_m(x)
        for m in [6usize, 11, 16] {
            for i in 0..5 {
                let x = rat(i, 5);
                let s = if m % 2 == 0 { rat(1, 1) } else { rat(-1, 1) };
                assert_eq!(bernoulli_poly(m, &(rat(1, 1) - &x)), s * bernoulli_poly(m, &x));
            }
        }
    }

    #[test]
    fn override_changes_only_one_entry() {
        let t = BernoulliTable::with_override(6, rat(1, 41));
        assert_eq!(t.number(6), rat(1, 41));
        assert_eq!(t.number(4), rat(-1, 30));
    }

    #[test]
    fn concurrent_reads_agree() {
        let t = BernoulliTable::new();
        let values: Vec<Vec<Rational>> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..4)
                .map(|k| {
                    let t = &t;
                    s.spawn(move || (0..30).map(|m| t.number((m * (k + 1)) % 30)).collect())
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for (k, v) in values.iter().enumerate() {
            for (m, b) in v.iter().enumerate() {
                assert_eq!(*b, bernoulli_number((m * (k + 1)) % 30));
            }
        }
    }
}
