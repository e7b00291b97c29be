//! The check battery end to end, including injected faults.

use crepant_core::arith::{rat, Constants};
use crepant_core::rmatrix_kp4::chain_rows;
use crepant_core::verify::prop1::verify_prop1;
use crepant_core::verify::suite::{run_all, Scope, SuiteConfig};
use crepant_core::Status;

fn small(scope: Scope) -> SuiteConfig {
    SuiteConfig {
        order: 10,
        z_order: 2,
        psi_order: 10,
        frobenius_order: 8,
        eval_order: 8,
        scope,
        ..SuiteConfig::default()
    }
}

#[test]
fn verify_scope_passes() {
    let r = run_all(&small(Scope::Verify));
    let ids: Vec<&str> = r.reports.iter().map(|r| r.id.as_str()).collect();
    assert_eq!(ids, ["prop1:z1", "prop1", "crc:z2"]);
    assert_eq!(r.exit_code(), 0, "{}", r.to_text());
}

#[test]
fn full_scope_has_only_known_warnings() {
    let r = run_all(&small(Scope::All));
    assert_eq!(r.exit_code(), 0, "{}", r.to_text());
    let warned: Vec<&str> = r.reports.iter().filter(|r| r.status == Status::Warn).map(|r| r.id.as_str()).collect();
    for id in &warned {
        assert!(
            ["rmatrix-kp4:printed-row", "rmatrix-orb:initial-values", "rmatrix-orb:symplectic"].contains(id),
            "unexpected warning {id}"
        );
    }
    assert!(r.to_text().ends_with(&format!("{} checks: {} pass, {} warn, 0 fail\n", r.reports.len(), r.count(Status::Pass), warned.len())));
}

#[test]
fn exploratory_checks_never_fail() {
    let config = SuiteConfig {
        exploratory: Some(3),
        ..small(Scope::Verify)
    };
    let r = run_all(&config);
    let exploratory: Vec<_> = r.reports.iter().filter(|r| r.id.ends_with(":exploratory")).collect();
    assert_eq!(exploratory.len(), 2);
    assert!(exploratory.iter().all(|r| r.status != Status::Fail));
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn wrong_bernoulli_number_fails_prop1() {
    let t = chain_rows(2).unwrap();
    let r = verify_prop1(&t, 2, &Constants::with_bernoulli_override(2, rat(1, 5)));
    assert!(r.failed(), "{r}");
    let config = SuiteConfig {
        constants: Constants::with_bernoulli_override(2, rat(1, 5)),
        ..small(Scope::Verify)
    };
    let suite = run_all(&config);
    assert_eq!(suite.exit_code(), 1);
    assert!(suite.get("prop1").unwrap().failed());
}

#[test]
fn corrupted_cyclotomic_sum_is_diagnosed() {
    let config = SuiteConfig {
        constants: Constants::with_corrupted_cyclotomic_sum(),
        ..small(Scope::All)
    };
    let suite = run_all(&config);
    assert_eq!(suite.exit_code(), 1);
    let n1 = suite.get("arith:n1").unwrap();
    assert!(n1.failed());
    assert!(n1.detail.as_deref().unwrap_or("").contains("N_1"), "{n1}");
}

#[test]
fn json_is_reproducible() {
    let a = run_all(&small(Scope::Verify)).to_json();
    let b = run_all(&small(Scope::Verify)).to_json();
    assert_eq!(a, b);
    assert!(a[0].get("ms").is_none());
}
