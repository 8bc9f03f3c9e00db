//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs as a plain binary so the lines are always printed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rayon::prelude::*;

use partlab::bounds::{
    asymptotic_ratio, check_erdos, check_nathanson_chain, check_rplus_poly_bound, check_theorem1,
    erdos_rhs, EPS_LOG,
};
use partlab::counting::{
    convolution_reports, count_bruteforce, count_dp, count_recurrence, eq4_rhs, table_for,
};
use partlab::num::Count;
use partlab::partset::{parts_up_to, PartSetVariant, ResidueSpec};
use partlab::series::{
    check_derivative_nonpositive, check_eq1, check_eq2_pointwise, check_eq3,
    check_sinh_inequality, check_sqrt_inequality, default_t_grid, default_x_grid,
    find_counterexample_odd_remark, remark_grid, EPS, IDENTITY_REL_TOL,
};

const VARIANTS: [PartSetVariant; 3] = [
    PartSetVariant::FullA,
    PartSetVariant::APlus,
    PartSetVariant::RPlus,
];

fn specs(m_max: usize, include_empty: bool) -> Vec<ResidueSpec> {
    (1..=m_max)
        .flat_map(|m| ResidueSpec::all_subsets(m, include_empty).unwrap())
        .collect()
}

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        ok,
        detail: detail.into(),
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Verdict) -> Verdict {
    let start = Instant::now();
    let mut v = f();
    let took = start.elapsed();
    v.detail = format!("{} [{:.1}s]", v.detail, took.as_secs_f64());
    if let Some(limit) = limit {
        if took > limit {
            v.ok = false;
            v.detail.push_str(&format!(" exceeded {}s", limit.as_secs()));
        }
    }
    v
}

fn oracle_equivalence() -> Verdict {
    let work: Vec<(ResidueSpec, PartSetVariant)> = specs(6, false)
        .into_iter()
        .flat_map(|s| VARIANTS.iter().map(move |v| (s.clone(), v.clone())))
        .collect();
    let bad: Vec<String> = work
        .par_iter()
        .flat_map_iter(|(s, v)| {
            let parts = parts_up_to(s, v, 40);
            let dp = count_dp::<BigUint>(&parts, 40).unwrap();
            let rec = count_recurrence::<BigUint>(&parts, 40).unwrap();
            (0..=40)
                .filter(|&n| {
                    dp[n] != rec[n] || count_bruteforce(&parts, n).unwrap() != dp[n]
                })
                .map(|n| format!("{s} {v} n={n}"))
                .collect::<Vec<_>>()
        })
        .collect();
    verdict(
        bad.is_empty(),
        format!("{} part sets x n<=40, mismatches={:?}", work.len(), bad),
    )
}

fn eq4_integrity() -> Verdict {
    let work: Vec<(ResidueSpec, PartSetVariant)> = specs(6, false)
        .into_iter()
        .flat_map(|s| VARIANTS.iter().map(move |v| (s.clone(), v.clone())))
        .collect();
    let bad: Vec<String> = work
        .par_iter()
        .flat_map_iter(|(s, v)| {
            let table = table_for(s, v, 500);
            (1..=500)
                .filter(|&n| {
                    eq4_rhs(table.parts(), table.values(), n).unwrap()
                        != table[n].mul_small(n).unwrap()
                })
                .map(|n| format!("{s} {v} n={n}"))
                .collect::<Vec<_>>()
        })
        .collect();
    verdict(
        bad.is_empty(),
        format!("{} part sets x 1<=n<=500, mismatches={:?}", work.len(), bad),
    )
}

fn theorem1_sweep() -> Verdict {
    let all = specs(8, false);
    let results: Vec<(usize, usize, f64)> = all
        .par_iter()
        .map(|s| {
            let reps = check_theorem1::<f64>(s, 2000).unwrap();
            let failed = reps.iter().filter(|r| !r.holds).count();
            let worst = reps.iter().filter_map(|r| r.slack).fold(f64::INFINITY, f64::min);
            (reps.len(), failed, worst)
        })
        .collect();
    let failed: usize = results.iter().map(|r| r.1).sum();
    let worst = results.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
    verdict(
        failed == 0 && worst >= -EPS_LOG,
        format!(
            "{} specs x n<=2000, failed={failed}, min slack={worst:e}",
            all.len()
        ),
    )
}

fn erdos_special_case() -> Verdict {
    let reps = check_erdos::<f64>(2000);
    let failed = reps.iter().filter(|r| !r.holds).count();
    let naturals: Vec<usize> = (1..=100).collect();
    let dp = count_dp::<BigUint>(&naturals, 100).unwrap();
    let rec = count_recurrence::<BigUint>(&naturals, 100).unwrap();
    let want = BigUint::from(190_569_292u64);
    let at_100 = reps[100].log_count.unwrap() <= erdos_rhs::<f64>(100);
    verdict(
        failed == 0 && dp[100] == want && rec[100] == want && at_100,
        format!(
            "n<=2000 failed={failed}, p(100) dp={} recurrence={}",
            dp[100], rec[100]
        ),
    )
}

fn nathanson_chain() -> Verdict {
    let chain: Vec<usize> = specs(8, false)
        .par_iter()
        .map(|s| {
            check_nathanson_chain::<f64>(s, 2000)
                .unwrap()
                .iter()
                .filter(|r| !r.holds)
                .count()
        })
        .collect();
    let all = specs(8, true);
    let poly: Vec<usize> = all
        .par_iter()
        .map(|s| {
            check_rplus_poly_bound(s, 2000)
                .iter()
                .filter(|r| !r.holds)
                .count()
        })
        .collect();
    let (cf, pf): (usize, usize) = (chain.iter().sum(), poly.iter().sum());
    verdict(
        cf == 0 && pf == 0,
        format!(
            "chain over {} specs failed={cf}; integer R+ bound over {} specs failed={pf}",
            chain.len(),
            all.len()
        ),
    )
}

fn convolution_identity() -> Verdict {
    let all = specs(6, true);
    let failed: usize = all
        .par_iter()
        .map(|s| convolution_reports(s, 200).iter().filter(|r| !r.holds).count())
        .sum();
    verdict(
        failed == 0,
        format!("{} specs (incl. empty R) x n<=200, failed={failed}", all.len()),
    )
}

fn eq1_identity() -> Verdict {
    let all = specs(8, false);
    let ts = default_t_grid::<f64>();
    let devs: Vec<(bool, f64)> = all
        .par_iter()
        .flat_map_iter(|s| {
            ts.iter()
                .map(|&t| {
                    let r = check_eq1(s, t).unwrap();
                    (r.holds, r.margin / r.rhs.abs())
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let failed = devs.iter().filter(|d| !d.0).count();
    let worst = devs.iter().map(|d| d.1).fold(0.0, f64::max);
    verdict(
        failed == 0 && worst <= IDENTITY_REL_TOL,
        format!("{} points, failed={failed}, max rel dev={worst:e}", devs.len()),
    )
}

fn pointwise_inequalities() -> Verdict {
    let xs = default_x_grid::<f64>();
    let mut eq2_failed = 0;
    let mut deriv_failed = 0;
    let mut dgrid = vec![0.0];
    dgrid.extend(&xs);
    for m in 1..=8 {
        for r in 0..m {
            eq2_failed += xs
                .iter()
                .filter(|&&x| !check_eq2_pointwise(r, m, x).unwrap().holds)
                .count();
            deriv_failed += check_derivative_nonpositive(r, m, &dgrid)
                .unwrap()
                .iter()
                .filter(|rep| !rep.holds)
                .count();
        }
    }
    let eq3_failed: usize = specs(8, false)
        .par_iter()
        .map(|s| xs.iter().filter(|&&x| !check_eq3(s, x).unwrap().holds).count())
        .sum();
    let sinh_failed = xs
        .iter()
        .filter(|&&x| !check_sinh_inequality(x).unwrap().holds)
        .count();
    let mut sqrt_failed = 0;
    let mut sqrt_total = 0;
    for n in 1..=200 {
        for a in 1..=n {
            for k in 1..=n / a {
                sqrt_total += 1;
                if !check_sqrt_inequality(n, a, k).unwrap() {
                    sqrt_failed += 1;
                }
            }
        }
    }
    let ok = eq2_failed + eq3_failed + sinh_failed + sqrt_failed + deriv_failed == 0;
    verdict(
        ok,
        format!(
            "eq2 failed={eq2_failed}, eq3 failed={eq3_failed}, derivative failed={deriv_failed}, \
             sinh failed={sinh_failed}, sqrt failed={sqrt_failed}/{sqrt_total} (eps={EPS:e})"
        ),
    )
}

fn remark_counterexample() -> Verdict {
    let on_default = find_counterexample_odd_remark(&default_x_grid::<f64>()).unwrap();
    let found = find_counterexample_odd_remark(&remark_grid::<f64>()).unwrap();
    let at_one = found.iter().find(|c| c.x == 1.0).map(|c| c.excess);
    verdict(
        !on_default.is_empty() && at_one.is_some_and(|e| e >= 0.05),
        format!(
            "{} failures on default grid, {} with x=1 added, excess at x=1 = {:?}",
            on_default.len(),
            found.len(),
            at_one
        ),
    )
}

fn asymptotic_diagnostic() -> Verdict {
    let nat = ResidueSpec::new(1, &[0]).unwrap();
    let ratio = asymptotic_ratio::<f64>(&nat, 10_000).unwrap();
    verdict(
        ratio > 0.9 && ratio < 1.0,
        format!("log p(10^4) / (pi sqrt(2*10^4/3)) = {ratio}"),
    )
}

fn main() -> ExitCode {
    // Libtest-style flags (e.g. --nocapture) are accepted and ignored.
    let criteria: Vec<(&str, Option<Duration>, fn() -> Verdict)> = vec![
        ("1 oracle equivalence", Some(Duration::from_secs(60)), oracle_equivalence),
        ("2 weighted recurrence integrity", None, eq4_integrity),
        ("3 A+ bound sweep", Some(Duration::from_secs(300)), theorem1_sweep),
        ("4 unrestricted bound and p(100)", None, erdos_special_case),
        ("5 convolved bound and R+ polynomial bound", None, nathanson_chain),
        ("6 convolution identity", None, convolution_identity),
        ("7 closed-form series identity", None, eq1_identity),
        ("8 pointwise and helper inequalities", None, pointwise_inequalities),
        ("9 odd-integer counterexample", None, remark_counterexample),
        ("10 asymptotic ratio at n=10^4", Some(Duration::from_secs(60)), asymptotic_diagnostic),
    ];
    let mut failures = 0;
    for (name, limit, f) in criteria {
        let v = timed(limit, f);
        println!("[{}] criterion {name}: {}", if v.ok { "PASS" } else { "FAIL" }, v.detail);
        failures += usize::from(!v.ok);
    }
    println!("acceptance: {failures} failed");
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
