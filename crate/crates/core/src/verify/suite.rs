//! The full battery of checks, run as independent jobs and reported in a
//! fixed order.

use std::time::Instant;

use serde_json::Value;

use crate::arith::Constants;
use crate::error::Result;
use crate::frobenius::{check_associativity, check_correlators, check_idempotents};
use crate::hypergeom::{check_relations, compute_hg_data, Geometry};
use crate::rmatrix_kp4::{chain_rows, RTableKP4};
use crate::rmatrix_orb::{assemble_orb_r_matrix, e2_residuals, initial_condition_report, solve_e2, symplectic_report};
use crate::verify::crc::verify_crc;
use crate::verify::prop1::{verify_prop1, verify_z1};
use crate::verify::properties::{
    printed_row_golden, bernoulli_difference, cyclotomic_norm, e1_lines, eval_commutes_with_derive, leibniz, n1,
    t_intertwining, SEED,
};
use crate::verify::report::{Status, VerificationReport};

/// Which checks to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    /// The local P4 constant identity, its `z^1` sub-check and the constancy test.
    Verify,
    /// Everything.
    All,
}

#[derive(Debug)]
pub struct SuiteConfig {
    /// `x`-order of the relation checks.
    pub order: i64,
    /// Highest asserted power of `z`.
    pub z_order: usize,
    /// `psi`-order of the orbifold R-matrix and the constancy test.
    pub psi_order: i64,
    /// `psi`-order of the Frobenius checks.
    pub frobenius_order: i64,
    /// Order of the `eval . D = D . eval` suite.
    pub eval_order: i64,
    /// Powers of `z` above `z_order` and up to this value are run as
    /// advisory checks.
    pub exploratory: Option<usize>,
    pub constants: Constants,
    pub timings: bool,
    pub scope: Scope,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            order: 20,
            z_order: 6,
            psi_order: 25,
            frobenius_order: 15,
            eval_order: 15,
            exploratory: None,
            constants: Constants::exact(),
            timings: false,
            scope: Scope::All,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteResult {
    pub reports: Vec<VerificationReport>,
}

impl SuiteResult {
    pub fn failed(&self) -> bool {
        self.reports.iter().any(VerificationReport::failed)
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed())
    }

    pub fn get(&self, id: &str) -> Option<&VerificationReport> {
        self.reports.iter().find(|r| r.id == id)
    }

    pub fn count(&self, status: Status) -> usize {
        self.reports.iter().filter(|r| r.status == status).count()
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(&self.reports).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.reports {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        out.push_str(&format!(
            "{} checks: {} pass, {} warn, {} fail\n",
            self.reports.len(),
            self.count(Status::Pass),
            self.count(Status::Warn),
            self.count(Status::Fail)
        ));
        out
    }
}

type Job<'a> = (String, Box<dyn FnOnce() -> Result<VerificationReport> + Send + 'a>);

fn job<'a>(id: &str, f: impl FnOnce() -> Result<VerificationReport> + Send + 'a) -> Job<'a> {
    (id.to_string(), Box::new(f))
}

fn run_job((id, f): Job<'_>, timings: bool) -> VerificationReport {
    let start = Instant::now();
    let exploratory = id.ends_with(":exploratory");
    let mut report = match f() {
        Ok(r) => r,
        Err(e) => {
            let mut r = VerificationReport::new(id);
            r.fail(e.to_string());
            r
        }
    };
    if exploratory {
        report = report.advisory();
    }
    if timings {
        report.ms = Some(start.elapsed().as_millis() as u64);
    }
    report
}

fn exploratory_id(mut r: VerificationReport) -> VerificationReport {
    r.id = format!("{}:exploratory", r.id);
    r.advisory()
}

/// Runs the configured checks concurrently; reports come back in job order.
pub fn run_all(config: &SuiteConfig) -> SuiteResult {
    let k = config.z_order;
    let k_top = config.exploratory.map_or(k, |e| e.max(k));
    let consts = &config.constants;
    let kp4: Result<RTableKP4> = chain_rows(k_top);
    let kp4 = &kp4;
    let table_err = |e: &crate::error::Error| crate::error::Error::InvalidArgument(format!("local P4 table: {e}"));

    let mut jobs: Vec<Job<'_>> = Vec::new();
    if config.scope == Scope::All {
        jobs.push(job("arith:n1", || Ok(n1(consts))));
        jobs.push(job("arith:cyclotomic-product", || Ok(cyclotomic_norm())));
        jobs.push(job("arith:bernoulli-difference", || Ok(bernoulli_difference(consts))));
        for g in Geometry::ALL {
            let order = config.order;
            jobs.push(job(&format!("hgdata-relations:{g}"), move || {
                Ok(check_relations(&compute_hg_data(g, order)?))
            }));
        }
        jobs.push(job("diffring:leibniz", || Ok(leibniz(200, SEED))));
        jobs.push(job("diffring:eval-derive", || eval_commutes_with_derive(20, config.eval_order, SEED)));
        jobs.push(job("diffring:t-intertwining", || t_intertwining(100, SEED)));
        jobs.push(job("rmatrix-kp4:printed-row", printed_row_golden));
        jobs.push(job("rmatrix-kp4:e1-lines", || {
            let t = kp4.as_ref().map_err(table_err)?;
            e1_lines(t, config.eval_order)
        }));
        jobs.push(job("rmatrix-orb:e2-lines", || {
            let t = solve_e2(k, config.psi_order)?;
            let d = compute_hg_data(Geometry::C5z5, config.psi_order + 2 * k as i64 + 10)?;
            e2_residuals(&t, &d, config.psi_order)
        }));
        jobs.push(job("rmatrix-orb:initial-values", || {
            Ok(initial_condition_report(&solve_e2(k, config.psi_order)?))
        }));
        jobs.push(job("rmatrix-orb:symplectic", || {
            let t = solve_e2(k, config.psi_order)?;
            Ok(symplectic_report(&assemble_orb_r_matrix(&t, true, consts)?, config.psi_order))
        }));
        let fo = config.frobenius_order;
        jobs.push(job("frobenius:correlators", move || check_correlators(fo)));
        jobs.push(job("frobenius:associativity", move || check_associativity(fo)));
        jobs.push(job("frobenius:idempotents", move || check_idempotents(fo)));
    }
    jobs.push(job("prop1:z1", || Ok(verify_z1(kp4.as_ref().map_err(table_err)?))));
    jobs.push(job("prop1", || Ok(verify_prop1(kp4.as_ref().map_err(table_err)?, k, consts))));
    jobs.push(job(&format!("crc:z{k}"), || {
        let orb = solve_e2(k, config.psi_order)?;
        verify_crc(kp4.as_ref().map_err(table_err)?, &orb, k, consts)
    }));
    for e in k + 1..=k_top {
        jobs.push(job(&format!("prop1:z{e}:exploratory"), move || {
            let mut r = verify_prop1(kp4.as_ref().map_err(table_err)?, e, consts);
            r.id = format!("prop1:z{e}");
            Ok(exploratory_id(r))
        }));
        jobs.push(job(&format!("crc:z{e}:exploratory"), move || {
            let orb = solve_e2(e, config.psi_order)?;
            Ok(exploratory_id(verify_crc(kp4.as_ref().map_err(table_err)?, &orb, e, consts)?))
        }));
    }

    let timings = config.timings;
    let reports = std::thread::scope(|s| {
        let handles: Vec<_> = jobs
            .into_iter()
            .map(|j| s.spawn(move || run_job(j, timings)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("check thread panicked"))
            .collect()
    });
    SuiteResult { reports }
}
