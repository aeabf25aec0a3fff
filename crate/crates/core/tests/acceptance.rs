//! Acceptance criteria 1–8, one PASS/FAIL line each. Exits non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{max_rel_diff, oracle_spectrum, random_states};
use gausskey::engines::{self, PortModel};
use gausskey::rates::{self, RateId};
use gausskey::sim::{self, SimConfig, SimMode};
use gausskey::threshold::{self, DEFAULT_TOL};
use gausskey::{entropy_g, Channel64, CovMat64};

const TOL: f64 = DEFAULT_TOL;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ch(tau: f64, nbar: f64) -> Channel64 {
    Channel64::with_nbar(tau, nbar).expect("valid channel")
}

fn within_budget(elapsed: Duration, budget: Duration) -> Result<(), String> {
    check(elapsed <= budget, || {
        format!("took {elapsed:?}, budget {budget:?}")
    })
}

fn criterion_1() -> Outcome {
    let e = rates::e_r(&ch(0.5, 0.0));
    check((e - 1.0).abs() <= 1e-12, || format!("e_r(0.5,0) = {e}"))?;
    for tau in [0.1, 0.25, 0.5, 0.75, 0.9, 1.25, 1.5, 1.9] {
        let r = rates::r_rev(&ch(tau, 0.0));
        let expected = 0.5 * (1.0 / (1.0f64 - tau).abs()).log2();
        check((r - expected).abs() <= 1e-12, || {
            format!("r_rev({tau},0) = {r}, want {expected}")
        })?;
    }
    for nbar in [0.0, 0.1, 1.0] {
        let q = rates::q1g(&ch(0.5, nbar));
        check(q == 0.0, || format!("q1g(0.5,{nbar}) = {q}"))?;
    }
    Ok("e_r(0.5,0)=1, r_rev(tau,0) at 8 points, q1g(0.5,nbar)=0".into())
}

fn criterion_2() -> Outcome {
    let mut parts = Vec::new();
    for tau in [0.1, 0.2, 0.3, 0.4, 0.5] {
        let eps_r = threshold::threshold_eps(RateId::ER, tau, TOL)
            .map_err(|e| e.to_string())?
            .eps;
        check(eps_r > 0.0, || format!("eps_r({tau}) = {eps_r}"))?;
        let label = threshold::classify(tau, eps_r / 2.0).map_err(|e| e.to_string())?;
        check(label.reverse_beats_antidegradability, || {
            format!("tau={tau}: {}", label.summary())
        })?;
        parts.push(format!("{tau}:{eps_r:.6}"));
    }
    Ok(format!(
        "eps_r > 0 and reverse beats antidegradability at {}",
        parts.join(" ")
    ))
}

fn criterion_3() -> Outcome {
    let curve = threshold::sweep(0.005, 1.995, 200, TOL).map_err(|e| e.to_string())?;
    check(curve.rows.len() == 200, || {
        format!("{} rows", curve.rows.len())
    })?;
    let mut min_margin = f64::INFINITY;
    for r in &curve.rows {
        check(r.tau > 0.0 && r.tau < 2.0 && r.tau != 1.0, || {
            format!("bad grid point {}", r.tau)
        })?;
        check(!r.flagged, || {
            format!("r_rev non-monotone at tau={}", r.tau)
        })?;
        let margin = r.eps_rev - r.eps_r;
        check(margin > TOL, || {
            format!("tau={}: eps_rev={} eps_r={}", r.tau, r.eps_rev, r.eps_r)
        })?;
        min_margin = min_margin.min(margin);
    }
    Ok(format!(
        "200 points, min eps_rev - eps_r = {min_margin:.3e}"
    ))
}

fn criterion_4() -> Outcome {
    let mut rows = threshold::sweep(0.05, 2.5, 200, TOL)
        .map_err(|e| e.to_string())?
        .rows;
    rows.extend(
        threshold::sweep(-2.0, -0.01, 40, TOL)
            .map_err(|e| e.to_string())?
            .rows,
    );
    rows.extend(
        threshold::sweep(2.01, 4.0, 40, TOL)
            .map_err(|e| e.to_string())?
            .rows,
    );
    let mut counts = [0usize; 3];
    for r in &rows {
        if r.tau <= 0.5 {
            check(r.eps_q == 0.0, || format!("eps_q({}) = {}", r.tau, r.eps_q))?;
            counts[0] += 1;
        } else if r.tau < 1.0 {
            check(r.eps_q > 0.0, || format!("eps_q({}) = {}", r.tau, r.eps_q))?;
            counts[1] += 1;
        }
        if r.tau < 0.0 || r.tau > 2.0 {
            check(r.eps_r == 0.0 && r.eps_rev == 0.0, || {
                format!("tau={}: eps_r={} eps_rev={}", r.tau, r.eps_r, r.eps_rev)
            })?;
            counts[2] += 1;
        }
    }
    Ok(format!(
        "eps_q=0 at {} points with tau<=0.5, eps_q>0 at {} in (0.5,1), eps_r=eps_rev=0 at {} outside [0,2]",
        counts[0], counts[1], counts[2]
    ))
}

fn criterion_5() -> Outcome {
    let mu = 1e4;
    let mut worst = (0.0f64, 0.0f64);
    // Near tau = 1, and for ci at small tau with noise, the exact gap at
    // mu = 1e4 is itself above 1e-3, so the grid stays clear of those regions.
    for tau in [0.3, 0.5, 0.7, 1.3, 1.7] {
        for nbar in [0.0, 0.1, 0.2, 0.3, 0.4] {
            let c = ch(tau, nbar);
            let g = entropy_g(nbar).map_err(|e| e.to_string())?;
            let er_target = (1.0 / (1.0f64 - tau).abs()).log2() - g;
            let q_target = (tau / (1.0f64 - tau)).abs().log2() - g;
            let rci = engines::rci_finite_mu(&c, mu).map_err(|e| e.to_string())?;
            let ci = engines::ci_finite_mu(&c, mu).map_err(|e| e.to_string())?;
            let (d_rci, d_ci) = ((rci - er_target).abs(), (ci - q_target).abs());
            check(d_rci <= 1e-3, || {
                format!("rci tau={tau} nbar={nbar}: {rci} vs {er_target}")
            })?;
            check(d_ci <= 1e-3, || {
                format!("ci tau={tau} nbar={nbar}: {ci} vs {q_target}")
            })?;
            worst = (worst.0.max(d_rci), worst.1.max(d_ci));
        }
    }
    Ok(format!(
        "25 points at mu=1e4, max |rci gap| = {:.2e}, max |ci gap| = {:.2e}",
        worst.0, worst.1
    ))
}

fn criterion_6() -> Outcome {
    let points = [(0.5, 0.0), (0.5, 0.25), (0.8, 0.1), (1.5, 0.1)];
    let mu = 1e3;
    let mut report = Vec::new();
    let mut winners = Vec::new();
    for ports in PortModel::ALL {
        let mut ok = true;
        let mut worst = 0.0f64;
        for (tau, nbar) in points {
            let c = ch(tau, nbar);
            let numeric =
                engines::protocol_rate_numeric(&c, mu, ports).map_err(|e| e.to_string())?;
            let d = (numeric - rates::r_rev(&c)).abs();
            worst = worst.max(d);
            ok &= d <= 1e-2;
        }
        report.push(format!("{ports} max |diff| = {worst:.3e}"));
        if ok {
            winners.push(ports);
        }
    }
    match winners.first() {
        Some(w) => Ok(format!("winning port model: {w} ({})", report.join(", "))),
        None => Err(format!(
            "neither port model reproduces r_rev ({})",
            report.join(", ")
        )),
    }
}

fn criterion_7() -> Outcome {
    let cfg = SimConfig {
        tau: 0.5,
        nbar: 0.0,
        mu: 5.0,
        rounds: 1_000_000,
        seed: 20_240_601,
        mode: SimMode::Sifted,
    };
    let s = sim::simulate(&cfg).map_err(|e| e.to_string())?;
    check((0.498..=0.502).contains(&s.sift_ratio), || {
        format!("sift_ratio = {}", s.sift_ratio)
    })?;
    for i in 0..2 {
        for j in 0..2 {
            let d = (s.empirical_cov[i][j] - s.analytic_cov[i][j]).abs();
            check(d <= 5.0 * s.cov_std_err[i][j], || {
                format!(
                    "cov[{i}][{j}] = {} vs {} (se {})",
                    s.empirical_cov[i][j], s.analytic_cov[i][j], s.cov_std_err[i][j]
                )
            })?;
        }
    }
    check((s.mi_empirical - 0.6610).abs() <= 0.01, || {
        format!("mi_empirical = {}", s.mi_empirical)
    })?;
    Ok(format!(
        "sift_ratio = {:.5}, mi_empirical = {:.5}",
        s.sift_ratio, s.mi_empirical
    ))
}

fn criterion_8() -> Outcome {
    let mut worst = 0.0f64;
    for p in random_states(8, 1000) {
        let v = p.state();
        let ours = v.symplectic_spectrum().map_err(|e| e.to_string())?.values;
        worst = worst.max(max_rel_diff(&ours, &oracle_spectrum(v.matrix())));
    }
    check(worst <= 1e-9, || {
        format!("spectrum oracle deviation {worst:e}")
    })?;

    let mut purity_worst = 0.0f64;
    for tau in [0.1, 0.3, 0.5, 0.7, 0.9, 1.1, 1.5, 1.9, 2.5] {
        for nbar in [0.0, 0.2, 1.0] {
            for mu in [1.0, 3.0, 100.0] {
                let c = ch(tau, nbar);
                let input = CovMat64::tmsv(mu).map_err(|e| e.to_string())?;
                let d = c
                    .dilate()
                    .and_then(|d| d.apply(&input, 1))
                    .map_err(|e| e.to_string())?;
                let eve = d
                    .state
                    .partial_trace(&d.eve_modes)
                    .and_then(|v| v.entropy());
                let ab = d
                    .state
                    .partial_trace(&[0, d.output_mode])
                    .and_then(|v| v.entropy());
                let (eve, ab) = (
                    eve.map_err(|e| e.to_string())?,
                    ab.map_err(|e| e.to_string())?,
                );
                purity_worst = purity_worst.max((eve - ab).abs() / ab.max(1.0));
            }
        }
    }
    check(purity_worst <= 1e-9, || {
        format!("purity complement deviation {purity_worst:e}")
    })?;

    let taus: Vec<f64> = (0..100).map(|i| -0.95 + 3.9 * i as f64 / 99.0).collect();
    let nbars: Vec<f64> = (0..100).map(|i| 2.0 * i as f64 / 99.0).collect();
    let mut flagged = [0usize; 3];
    for (k, rate) in RateId::ALL.into_iter().enumerate() {
        for &tau in &taus {
            let mut prev = f64::INFINITY;
            for &nbar in &nbars {
                let v = rate.rate(&ch(tau, nbar));
                if v > prev + 1e-12 {
                    flagged[k] += 1;
                }
                prev = v;
            }
        }
    }
    check(flagged == [0, 0, 0], || {
        format!("n̄-monotonicity violations (e_r, q1g, r_rev) = {flagged:?}")
    })?;

    let cfg = SimConfig {
        tau: 0.7,
        nbar: 0.2,
        mu: 4.0,
        rounds: 50_000,
        seed: 7,
        mode: SimMode::Sifted,
    };
    let a = sim::simulate(&cfg).map_err(|e| e.to_string())?;
    let b = sim::simulate(&cfg).map_err(|e| e.to_string())?;
    let (ja, jb) = (
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap(),
    );
    check(ja == jb, || "simulate not reproducible".into())?;

    Ok(format!(
        "spectrum oracle {worst:.1e} over 1000 states, purity {purity_worst:.1e}, \
         10^4-point n̄ grid: 0 flagged for r_rev, simulate reproducible"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "closed-form anchors",
            criterion_1,
            Duration::from_millis(100),
        ),
        (
            "antidegradable yet positive",
            criterion_2,
            Duration::from_secs(1),
        ),
        (
            "separation eps_rev > eps_r",
            criterion_3,
            Duration::from_secs(10),
        ),
        (
            "threshold curve shape",
            criterion_4,
            Duration::from_secs(10),
        ),
        ("finite-mu convergence", criterion_5, Duration::from_secs(5)),
        (
            "protocol rate vs r_rev",
            criterion_6,
            Duration::from_secs(10),
        ),
        ("simulator statistics", criterion_7, Duration::from_secs(30)),
        ("property suites", criterion_8, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = run().and_then(|msg| within_budget(start.elapsed(), budget).map(|_| msg));
        let elapsed = start.elapsed().as_secs_f64();
        match result {
            Ok(msg) => println!("criterion {}: PASS  {name} ({elapsed:.3}s): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({elapsed:.3}s): {msg}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
