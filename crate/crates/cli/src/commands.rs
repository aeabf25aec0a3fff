use std::io::Write;

use gausskey::engines::{self, Engine};
use gausskey::sim::{self, SimConfig, ROUNDS_CSV_HEADER};
use gausskey::threshold;
use gausskey::{Channel64, Error, Quadrature, RateReport64};
use serde::Serialize;

use crate::args::{
    ClassifyArgs, ConvergeArgs, EngineArg, NoiseArgs, RatesArgs, SimulateArgs, ThresholdsArgs,
    VerifyArgs,
};
use crate::output::{core_err, io_err, open_output, table, CliResult, Failure, Fmt};
use crate::svg;

fn channel(tau: f64, noise: NoiseArgs) -> CliResult<Channel64> {
    match (noise.nbar, noise.eps) {
        (Some(nbar), None) => Channel64::with_nbar(tau, nbar).map_err(|e| core_err("--nbar", e)),
        (None, Some(eps)) => Channel64::with_eps(tau, eps).map_err(|e| core_err("--eps", e)),
        _ => Err(Failure::Usage(
            "exactly one of --nbar or --eps is required".into(),
        )),
    }
}

fn nbar_channel(tau: f64, nbar: f64) -> CliResult<Channel64> {
    channel(
        tau,
        NoiseArgs {
            nbar: Some(nbar),
            eps: None,
        },
    )
}

/// Re-attributes a domain error on parameter `name` to `flag`.
fn renamed(name: &str, flag: &str, e: Error) -> Failure {
    match &e {
        Error::Domain { name: n, .. } if *n == name => Failure::Domain(format!("{flag}: {e}")),
        _ => core_err(flag, e),
    }
}

#[derive(Serialize)]
struct RatesOut {
    e_r: f64,
    q1g: f64,
    r_rev: f64,
    k_rev_lower_bound: f64,
    tau: f64,
    nbar: f64,
    eps: f64,
    class: &'static str,
    rank: u8,
    lambda: f64,
    w: f64,
}

pub fn rates(a: &RatesArgs, f: Fmt) -> CliResult<String> {
    let ch = channel(a.tau, a.noise)?;
    let r = RateReport64::new(&ch);
    let out = RatesOut {
        e_r: r.e_r,
        q1g: r.q1g,
        r_rev: r.r_rev,
        k_rev_lower_bound: r.reverse_key_bound(),
        tau: r.tau,
        nbar: r.nbar,
        eps: r.eps,
        class: ch.class().label(),
        rank: ch.rank(),
        lambda: r.lambda,
        w: r.w,
    };
    if a.json {
        return Ok(f.json(&out) + "\n");
    }
    Ok(table(&[
        ("tau", f.num(out.tau)),
        ("nbar", f.num(out.nbar)),
        ("eps", f.num(out.eps)),
        ("class", format!("{} (rank {})", out.class, out.rank)),
        ("w", f.num(out.w)),
        ("lambda", f.num(out.lambda)),
        ("e_r", f.num(out.e_r)),
        ("q1g", f.num(out.q1g)),
        ("r_rev", f.num(out.r_rev)),
        ("K_rev >= max(e_r, r_rev)", f.num(out.k_rev_lower_bound)),
    ]))
}

pub fn thresholds(a: &ThresholdsArgs, f: Fmt) -> CliResult<String> {
    let curve = threshold::sweep(a.tau_min, a.tau_max, a.steps, a.tol)
        .map_err(|e| core_err("--tau-min/--tau-max/--steps", e))?;
    let mut out = open_output("--out", &a.out)?;
    curve
        .write_csv(&mut out, f.digits)
        .and_then(|_| out.flush())
        .map_err(|e| io_err("--out", &a.out, e))?;
    if let Some(path) = &a.svg {
        std::fs::write(path, svg::render(&curve)).map_err(|e| io_err("--svg", path, e))?;
    }
    let flagged: Vec<String> = curve
        .rows
        .iter()
        .filter(|r| r.flagged)
        .map(|r| f.num(r.tau))
        .collect();
    let mut msg = format!("{} rows written to {}", curve.rows.len(), a.out.display());
    if !flagged.is_empty() {
        msg.push_str(&format!(
            "; eps_rev found by scan (non-monotone) at tau = {}",
            flagged.join(", ")
        ));
    }
    // the summary goes to stderr so that `--out -` leaves clean CSV on stdout
    eprintln!("{msg}");
    Ok(String::new())
}

#[derive(Serialize)]
struct ConvergeOut<'a> {
    engine: &'static str,
    ports: Option<&'static str>,
    tau: f64,
    nbar: f64,
    rows: &'a [gausskey::ConvergenceRow64],
}

pub fn converge(a: &ConvergeArgs, f: Fmt) -> CliResult<String> {
    let ch = nbar_channel(a.tau, a.nbar)?;
    let (engine, name, ports) = match a.engine {
        EngineArg::Rci => (Engine::Rci, "rci", None),
        EngineArg::Ci => (Engine::Ci, "ci", None),
        EngineArg::Protocol => {
            let p = a.ports.into();
            (
                Engine::Protocol(p),
                "protocol",
                Some(engines::PortModel::name(p)),
            )
        }
    };
    if let Some(mu) = a
        .mu_list
        .0
        .iter()
        .find(|m| m.is_nan() || **m < 1.0 || m.is_infinite())
    {
        return Err(Failure::Domain(format!(
            "--mu-list: source variance {mu} must be finite and >= 1"
        )));
    }
    let rows = engines::convergence(&ch, &a.mu_list.0, engine)
        .map_err(|e| renamed("mu", "--mu-list", e))?;
    let out = ConvergeOut {
        engine: name,
        ports,
        tau: a.tau,
        nbar: a.nbar,
        rows: &rows,
    };
    if a.json {
        return Ok(f.json(&out) + "\n");
    }
    let mut s = format!("# engine {name}");
    if let Some(p) = ports {
        s.push_str(&format!(" ({p} port)"));
    }
    s.push_str(&format!(
        ", tau {}, nbar {}\nmu,value,target,gap\n",
        f.num(a.tau),
        f.num(a.nbar)
    ));
    for r in &rows {
        s.push_str(&format!(
            "{},{},{},{}\n",
            f.num(r.mu),
            f.num(r.value),
            f.num(r.target),
            f.num(r.gap)
        ));
    }
    Ok(s)
}

#[derive(Serialize)]
struct VerifyOut {
    tau: f64,
    nbar: f64,
    mu: f64,
    ports: &'static str,
    rate_numeric: f64,
    r_rev: f64,
    difference: f64,
    mutual_info: f64,
    holevo_eve: f64,
    eve_entropy: f64,
    eve_conditional_entropy: f64,
    complement_entropy: f64,
}

pub fn verify(a: &VerifyArgs, f: Fmt) -> CliResult<String> {
    let ch = nbar_channel(a.tau, a.nbar)?;
    let ports = a.ports.into();
    let b = engines::protocol_breakdown(&ch, a.mu, ports, Quadrature::Q)
        .map_err(|e| core_err("--tau", e))?;
    let r_rev = gausskey::rates::r_rev(&ch);
    let out = VerifyOut {
        tau: a.tau,
        nbar: a.nbar,
        mu: a.mu,
        ports: ports.name(),
        rate_numeric: b.rate,
        r_rev,
        difference: b.rate - r_rev,
        mutual_info: b.mutual_info,
        holevo_eve: b.holevo_eve,
        eve_entropy: b.eve_entropy,
        eve_conditional_entropy: b.eve_conditional_entropy,
        complement_entropy: b.complement_entropy,
    };
    if a.json {
        return Ok(f.json(&out) + "\n");
    }
    Ok(table(&[
        ("tau", f.num(out.tau)),
        ("nbar", f.num(out.nbar)),
        ("mu", f.num(out.mu)),
        ("ports", out.ports.to_string()),
        ("I(x_A:x_B)", f.num(out.mutual_info)),
        ("S(E)", f.num(out.eve_entropy)),
        ("S(E|x_B)", f.num(out.eve_conditional_entropy)),
        ("chi(E:x_B)", f.num(out.holevo_eve)),
        ("S(complement)", f.num(out.complement_entropy)),
        ("rate (numeric)", f.num(out.rate_numeric)),
        ("r_rev (closed form)", f.num(out.r_rev)),
        ("difference", f.num(out.difference)),
    ]))
}

pub fn simulate(a: &SimulateArgs, f: Fmt) -> CliResult<String> {
    let cfg = SimConfig {
        tau: a.tau,
        nbar: a.nbar,
        mu: a.mu,
        rounds: a.rounds,
        seed: a.seed,
        mode: a.mode.into(),
    };
    let stats = match &a.rounds_csv {
        None => sim::simulate(&cfg),
        Some(path) => {
            let mut out = open_output("--rounds-csv", path)?;
            let mut write_err = None;
            let _ = writeln!(out, "{ROUNDS_CSV_HEADER}").map_err(|e| write_err = Some(e));
            let stats = sim::simulate_with(&cfg, |r| {
                if write_err.is_none() {
                    let res = writeln!(
                        out,
                        "{},{},{},{},{}",
                        quad(r.basis_b),
                        quad(r.basis_a),
                        r.kept,
                        f.num(r.x_a),
                        f.num(r.x_b)
                    );
                    if let Err(e) = res {
                        write_err = Some(e);
                    }
                }
            });
            if let Some(e) = write_err.or_else(|| out.flush().err()) {
                return Err(io_err("--rounds-csv", path, e));
            }
            stats
        }
    }
    .map_err(|e| core_err("--rounds", e))?;
    Ok(f.json(&stats) + "\n")
}

fn quad(q: Quadrature) -> &'static str {
    match q {
        Quadrature::Q => "q",
        Quadrature::P => "p",
    }
}

#[derive(Serialize)]
struct ClassifyOut {
    tau: f64,
    eps: f64,
    summary: String,
    #[serde(flatten)]
    label: gausskey::RegionLabel,
}

pub fn classify(a: &ClassifyArgs, f: Fmt) -> CliResult<String> {
    let label = threshold::classify(a.tau, a.eps).map_err(|e| core_err("--eps", e))?;
    let out = ClassifyOut {
        tau: a.tau,
        eps: a.eps,
        summary: label.summary(),
        label,
    };
    if a.json {
        return Ok(f.json(&out) + "\n");
    }
    let yn = |b: bool| if b { "yes" } else { "no" }.to_string();
    let mut s = format!(
        "tau {}, eps {}: {}\n",
        f.num(a.tau),
        f.num(a.eps),
        out.summary
    );
    s.push_str(&table(&[
        ("antidegradable", yn(label.antidegradable)),
        ("e_r > 0", yn(label.e_r_positive)),
        ("q1g > 0", yn(label.q1g_positive)),
        ("r_rev > 0", yn(label.r_rev_positive)),
        (
            "reverse beats antidegradability",
            yn(label.reverse_beats_antidegradability),
        ),
    ]));
    Ok(s)
}
