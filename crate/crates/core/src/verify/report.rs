use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use serde_json::Value;

use crate::arith::{rational_to_string, Rational};
use crate::series::Series;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Warn,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Warn => "warn",
        })
    }
}

/// One coefficient position and its exact value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Residual {
    pub power: String,
    pub value: String,
}

/// Outcome of one check. `status` is `Pass` exactly when every residual is
/// zero, unless the check is advisory (then a nonzero residual gives `Warn`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub params: BTreeMap<String, Value>,
    pub status: Status,
    pub residuals: Vec<Residual>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ms: Option<u64>,
}

impl VerificationReport {
    pub fn new(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            params: BTreeMap::new(),
            status: Status::Pass,
            residuals: Vec::new(),
            detail: None,
            data: None,
            ms: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn with_data(mut self, data: Value) -> Self {
        self.data = Some(data);
        self
    }

    /// Records a residual; a nonzero value fails the report.
    pub fn residual(&mut self, power: impl Into<String>, value: &Rational) {
        if !num_traits::Zero::is_zero(value) {
            self.status = Status::Fail;
        }
        self.residuals.push(Residual {
            power: power.into(),
            value: rational_to_string(value),
        });
    }

    /// Records a residual only if it is nonzero.
    pub fn nonzero_residual(&mut self, power: impl Into<String>, value: &Rational) {
        if !num_traits::Zero::is_zero(value) {
            self.residual(power, value);
        }
    }

    /// Records the nonzero coefficients of a residual series named `name`,
    /// failing if it is not known through `order`.
    pub fn series_residual(&mut self, name: &str, residual: &Series, order: i64) {
        if residual.order() < order {
            self.fail(format!("{name}: residual known only through {}^{}", residual.var(), residual.order()));
        }
        for (e, c) in residual.terms() {
            self.nonzero_residual(format!("{name}:{}^{e}", residual.var()), c);
        }
    }

    /// A failure that is not a coefficient (an error from the pipeline).
    pub fn fail(&mut self, detail: impl Into<String>) {
        self.status = Status::Fail;
        self.push_detail(detail.into());
    }

    pub fn push_detail(&mut self, text: String) {
        self.detail = Some(match self.detail.take() {
            Some(d) => format!("{d}; {text}"),
            None => text,
        });
    }

    /// Downgrades a failure to a warning (advisory checks).
    pub fn advisory(mut self) -> Self {
        if self.status == Status::Fail {
            self.status = Status::Warn;
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<4} {}", self.status, self.id)?;
        if !self.params.is_empty() {
            let p: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, " [{}]", p.join(" "))?;
        }
        if let Some(ms) = self.ms {
            write!(f, " ({ms} ms)")?;
        }
        let bad: Vec<&Residual> = self.residuals.iter().filter(|r| r.value != "0/1").collect();
        for r in bad.iter().take(8) {
            write!(f, "\n       {} = {}", r.power, r.value)?;
        }
        if bad.len() > 8 {
            write!(f, "\n       ... {} more nonzero residuals", bad.len() - 8)?;
        }
        if let Some(d) = &self.detail {
            write!(f, "\n       {d}")?;
        }
        Ok(())
    }
}
