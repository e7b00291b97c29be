//! One line per acceptance criterion. Exact arithmetic throughout; a
//! criterion passes only if every residual is zero and it meets its time
//! budget.
//!
//! Criterion 1 is reported as FAIL: the printed R15 differs from the computed
//! one in its constant term, and the printed polynomial violates the stated
//! normalization R(L = 1) = 0. This target exits nonzero unless that is the
//! only discrepancy.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use crepant_core::arith::{rat, Constants, Rational};
use crepant_core::diffring::{DiffRingElem, Monomial};
use crepant_core::frobenius::{check_associativity, check_correlators, check_idempotents};
use crepant_core::hypergeom::check_relations;
use crepant_core::rmatrix_kp4::{chain_rows, printed_first_row_elements, solve_q_sequence};
use crepant_core::rmatrix_orb::{e2_residuals, solve_e2};
use crepant_core::verify::crc::verify_crc;
use crepant_core::verify::prop1::{verify_prop1, verify_z1};
use crepant_core::verify::properties::{
    bernoulli_difference, cyclotomic_norm, e1_lines, eval_commutes_with_derive, leibniz, n1, t_intertwining, SEED,
};
use crepant_core::{compute_hg_data, Geometry, Ring, VerificationReport};

struct Outcome {
    pass: bool,
    detail: String,
    elapsed: Duration,
    budget: Duration,
}

fn timed(budget_s: u64, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (pass, detail) = f();
    Outcome {
        pass,
        detail,
        elapsed: start.elapsed(),
        budget: Duration::from_secs(budget_s),
    }
}

fn line(n: usize, o: &Outcome) -> bool {
    let ok = o.pass && o.elapsed <= o.budget;
    println!(
        "criterion {n}: {}: {} ({:.1} s, budget {} s)",
        if ok { "PASS" } else { "FAIL" },
        o.detail,
        o.elapsed.as_secs_f64(),
        o.budget.as_secs()
    );
    ok
}

fn summarize(reports: &[VerificationReport]) -> (bool, String) {
    let pass = reports.iter().all(VerificationReport::passed);
    let parts: Vec<String> = reports.iter().map(|r| format!("{} {}", r.id, r.status)).collect();
    (pass, parts.join(", "))
}

/// `A_k = diag(..)` with purely rational entries shown as rationals and the
/// zero matrix as `0`.
fn compact_a(a: &serde_json::Value) -> String {
    let mut parts = Vec::new();
    for level in a.as_array().into_iter().flatten() {
        let entries: Vec<String> = level["diagonal"]
            .as_array()
            .into_iter()
            .flatten()
            .map(|c| {
                let cs: Vec<&str> = c.as_array().into_iter().flatten().filter_map(|v| v.as_str()).collect();
                if cs[1..].iter().all(|v| *v == "0/1") {
                    cs[0].trim_end_matches("/1").to_string()
                } else {
                    c.to_string()
                }
            })
            .collect();
        let k = &level["k"];
        if entries.iter().all(|e| e == "0") {
            parts.push(format!("A{k}=0"));
        } else {
            parts.push(format!("A{k}=diag({})", entries.join(",")));
        }
    }
    parts.join(" ")
}

/// Returns whether criterion 1 failed in exactly the documented way.
fn criterion_1() -> (Outcome, bool) {
    let mut known = false;
    let o = timed(30, || {
        let q = solve_q_sequence(6).expect("first-row recursion solves");
        let inv_l = DiffRingElem::l_power(Geometry::Kp4, -1, rat(1, 1));
        let printed = printed_first_row_elements();
        let mut mismatched = Vec::new();
        for p in 1..=6 {
            let diff = q[p].times(&inv_l).minus(&printed[p - 1]);
            if !diff.is_zero() {
                mismatched.push((p, diff));
            }
        }
        if let [(5, diff)] = mismatched.as_slice() {
            let only_constant = diff.len() == 1 && diff.coefficient(&Monomial::l(0)) == rat(-27, 128_000_000);
            let printed_at_one: Rational = printed[4].terms().map(|(_, c)| c.clone()).sum();
            known = only_constant && printed_at_one == rat(27, 128_000_000);
        }
        let exact: Vec<String> = (1..=6)
            .filter(|p| !mismatched.iter().any(|(m, _)| m == p))
            .map(|p| format!("R1{p}"))
            .collect();
        let mut detail = format!("exact: {}", exact.join(" "));
        for (p, diff) in &mismatched {
            detail.push_str(&format!("; R1{p} differs by {diff}"));
        }
        if known {
            detail.push_str(
                "; printed R15 constant 50532 vs computed 50523, and the printed R15 has R15(L=1) = 27/128000000 != 0",
            );
        }
        (mismatched.is_empty(), detail)
    });
    (o, known)
}

fn main() -> ExitCode {
    let consts = Constants::exact();
    let mut unexpected = 0;

    let (o1, known) = criterion_1();
    if !line(1, &o1) && !known {
        unexpected += 1;
    }

    let o = timed(20, || {
        let reports: Vec<VerificationReport> = Geometry::ALL
            .iter()
            .map(|&g| check_relations(&compute_hg_data(g, 20).expect("series compute")))
            .collect();
        summarize(&reports)
    });
    unexpected += usize::from(!line(2, &o));

    let kp4 = chain_rows(6).expect("tables chain");
    let o = timed(120, || {
        let z1 = verify_z1(&kp4);
        let full = verify_prop1(&kp4, 6, &consts);
        summarize(&[z1, full])
    });
    unexpected += usize::from(!line(3, &o));

    let o = timed(30, || {
        let r = check_correlators(15).expect("correlators compute");
        let d = r.detail.clone().unwrap_or_default();
        (r.passed(), format!("{} {}: {d}", r.id, r.status))
    });
    unexpected += usize::from(!line(4, &o));

    let o = timed(180, || {
        let orb = solve_e2(6, 25).expect("orbifold table solves");
        let r = verify_crc(&kp4, &orb, 6, &consts).expect("ratio computes");
        let a = r.data.as_ref().map(|d| compact_a(&d["A"])).unwrap_or_default();
        (r.passed(), format!("{} {}; {a}", r.id, r.status))
    });
    unexpected += usize::from(!line(5, &o));

    let o = timed(300, || {
        let reports = vec![
            leibniz(200, SEED),
            eval_commutes_with_derive(20, 15, SEED).expect("evaluation"),
            t_intertwining(100, SEED).expect("transform"),
            check_associativity(15).expect("associativity"),
            check_idempotents(15).expect("idempotents"),
            n1(&consts),
            cyclotomic_norm(),
            bernoulli_difference(&consts),
        ];
        summarize(&reports)
    });
    unexpected += usize::from(!line(6, &o));

    let o = timed(120, || {
        let e1 = e1_lines(&kp4, 15).expect("evaluation");
        let orb = solve_e2(6, 25).expect("orbifold table solves");
        let d = compute_hg_data(Geometry::C5z5, 47).expect("series compute");
        let e2 = e2_residuals(&orb, &d, 25).expect("residuals");
        summarize(&[e1, e2])
    });
    unexpected += usize::from(!line(7, &o));

    let o = timed(300, || {
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_crepant"))
                .args(["all", "--format", "json"])
                .output()
                .expect("binary runs")
        };
        let first = run();
        let second = run();
        let same = first.stdout == second.stdout;
        let ok = first.status.success() && second.status.success();
        (
            same && ok && !first.stdout.is_empty(),
            format!(
                "`crepant all` twice: exit {:?}/{:?}, {} bytes, identical = {same}",
                first.status.code(),
                second.status.code(),
                first.stdout.len()
            ),
        )
    });
    unexpected += usize::from(!line(8, &o));

    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criteria failed beyond the documented R15 discrepancy");
        ExitCode::FAILURE
    }
}
