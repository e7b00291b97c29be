use super::{cyclotomic::n_constant_from_terms, zeta_power, BernoulliTable, Cyclotomic5, Rational, Ring};
use crate::error::Result;

/// Source of the Bernoulli numbers and the constants `N_k` used by the
/// R-matrix prefactors. The default reads the exact shared tables; the other
/// constructors inject faults so that error paths can be exercised.
#[derive(Debug, Default)]
pub struct Constants {
    table: Option<BernoulliTable>,
    corrupt_n: bool,
}

impl Constants {
    pub fn exact() -> Self {
        Self::default()
    }

    /// Replaces `B_m` by `value`.
    pub fn with_bernoulli_override(m: usize, value: Rational) -> Self {
        Self {
            table: Some(BernoulliTable::with_override(m, value)),
            corrupt_n: false,
        }
    }

    /// Drops one of the four terms of the cyclotomic sum defining `N_k`, so
    /// that the sum is no longer rational.
    pub fn with_corrupted_cyclotomic_sum() -> Self {
        Self {
            table: None,
            corrupt_n: true,
        }
    }

    fn table(&self) -> &BernoulliTable {
        self.table.as_ref().unwrap_or_else(|| BernoulliTable::global())
    }

    pub fn bernoulli(&self, m: usize) -> Rational {
        self.table().number(m)
    }

    pub fn bernoulli_poly(&self, m: usize, x: &Rational) -> Rational {
        self.table().poly(m, x)
    }

    pub fn n(&self, k: u32) -> Result<Rational> {
        let count = if self.corrupt_n { 3 } else { 4 };
        let terms: Vec<Cyclotomic5> =
            (1..=count).map(|i| Cyclotomic5::one().minus(&zeta_power(i))).collect();
        n_constant_from_terms(k, &terms)
    }
}
