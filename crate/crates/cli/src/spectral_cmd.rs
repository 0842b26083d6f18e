//! The `spectral` subcommand: parallel eigensolves over `(t, k)` jobs.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use cone_morse::spectral::{default_cutoff, fit_gap, report, GapFit, SpectralError, SpectralProblem, SpectralReport};
use serde_json::json;

use crate::render::{sci, Format};

pub struct Request {
    pub t_values: Vec<f64>,
    pub cutoff: Option<usize>,
    pub degrees: Vec<usize>,
    pub morse_scale: f64,
    pub reversed: bool,
    pub gap_growth: bool,
}

pub struct Outcome {
    pub reports: Vec<SpectralReport>,
    pub fit: Option<GapFit>,
    /// First adequacy failure, if any.
    pub inadequate: Option<SpectralError>,
}

fn problems(req: &Request) -> Vec<SpectralProblem> {
    let degrees: &[usize] = if req.gap_growth { &[0, 1, 2, 3] } else { &req.degrees };
    req.t_values
        .iter()
        .flat_map(|&t| {
            let cutoff = req.cutoff.unwrap_or_else(|| default_cutoff(t));
            degrees.iter().map(move |&k| SpectralProblem {
                morse_scale: req.morse_scale,
                reversed: req.reversed,
                ..SpectralProblem::new(t, cutoff, k)
            })
        })
        .collect()
}

/// Runs every job on a pool of scoped threads; results keep job order.
fn solve_all(jobs: &[SpectralProblem]) -> Result<Vec<SpectralReport>, SpectralError> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(jobs.len().max(1));
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<SpectralReport, SpectralError>>>> = Mutex::new(vec![None; jobs.len()]);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(job) = jobs.get(i) else { break };
                let result = report(job);
                slots.lock().expect("result lock")[i] = Some(result);
            });
        }
    });
    slots.into_inner().expect("result lock").into_iter().map(|r| r.expect("every job ran")).collect()
}

pub fn run(req: &Request) -> Result<Outcome, SpectralError> {
    for &k in &req.degrees {
        if k > 3 {
            return Err(SpectralError::InvalidProblem(format!("cone degree must be 0..=3, got {k}")));
        }
    }
    let jobs = problems(req);
    for job in &jobs {
        job.validate()?;
    }
    let reports = solve_all(&jobs)?;
    let inadequate = reports.iter().find_map(|r| r.checked_count().err());
    let fit = if req.gap_growth {
        if let Some(e) = &inadequate {
            return Err(e.clone());
        }
        let points = req
            .t_values
            .iter()
            .map(|&t| {
                let gap = reports.iter().filter(|r| r.problem.t == t).map(|r| r.gap).fold(f64::INFINITY, f64::min);
                (t, gap)
            })
            .collect();
        Some(fit_gap(points)?)
    } else {
        None
    };
    Ok(Outcome { reports, fit, inadequate })
}

pub fn render(out: &Outcome, format: Format) -> String {
    match format {
        Format::Text | Format::Csv => {
            let mut s = String::new();
            let _ = writeln!(s, "{:>8}  {:>3}  {:>2}  {:>5}  {:>15}  {:>15}  {:>15}  adequate", "t", "N", "k", "count", "low_max", "gap", "ratio");
            for r in &out.reports {
                let low_max = r.low_cluster().last().map_or_else(|| "-".to_string(), |&x| sci(x));
                let _ = writeln!(
                    s,
                    "{:>8}  {:>3}  {:>2}  {:>5}  {:>15}  {:>15}  {:>15}  {}",
                    r.problem.t,
                    r.problem.cutoff,
                    r.problem.degree,
                    r.low_count,
                    low_max,
                    sci(r.gap),
                    sci(r.cluster_ratio),
                    if r.is_adequate() { "yes" } else { "no" }
                );
            }
            let mut ts: Vec<f64> = out.reports.iter().map(|r| r.problem.t).collect();
            ts.dedup();
            for t in ts {
                let counts: Vec<String> =
                    out.reports.iter().filter(|r| r.problem.t == t).map(|r| r.low_count.to_string()).collect();
                let _ = writeln!(s, "counts t={t}: {}", counts.join(","));
            }
            if let Some(fit) = &out.fit {
                for (t, gap) in &fit.points {
                    let _ = writeln!(s, "gap t={t}: {}", sci(*gap));
                }
                let _ = writeln!(s, "slope {} intercept {}{}", sci(fit.slope), sci(fit.intercept), if fit.degenerate { " (degenerate)" } else { "" });
            }
            s
        }
        Format::Json => {
            let reports: Vec<_> = out
                .reports
                .iter()
                .map(|r| {
                    json!({
                        "t": r.problem.t,
                        "cutoff": r.problem.cutoff,
                        "degree": r.problem.degree,
                        "morse_scale": r.problem.morse_scale,
                        "reversed": r.problem.reversed,
                        "low_count": r.low_count,
                        "low_cluster": r.low_cluster().iter().map(|&x| sci(x)).collect::<Vec<_>>(),
                        "gap": sci(r.gap),
                        "cluster_ratio": sci(r.cluster_ratio),
                        "adequate": r.is_adequate(),
                    })
                })
                .collect();
            let fit = out.fit.as_ref().map(|f| {
                json!({
                    "points": f.points.iter().map(|(t, g)| json!({"t": t, "gap": sci(*g)})).collect::<Vec<_>>(),
                    "slope": sci(f.slope),
                    "intercept": sci(f.intercept),
                    "degenerate": f.degenerate,
                })
            });
            let value = json!({
                "reports": reports,
                "gap_growth": fit,
                "error": out.inadequate.as_ref().map(ToString::to_string),
            });
            let mut s = serde_json::to_string_pretty(&value).expect("spectral serializes");
            s.push('\n');
            s
        }
    }
}

/// Eigenvalue table: `t,cutoff,degree,index,eigenvalue`.
pub fn eigenvalue_csv(out: &Outcome) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "cutoff", "degree", "index", "eigenvalue"])?;
    for r in &out.reports {
        for (i, x) in r.eigenvalues.iter().enumerate() {
            w.write_record([
                r.problem.t.to_string(),
                r.problem.cutoff.to_string(),
                r.problem.degree.to_string(),
                i.to_string(),
                sci(*x),
            ])?;
        }
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("utf-8"))
}

/// Two-column `# t gap` file.
pub fn gap_file(fit: &GapFit) -> String {
    let mut s = String::from("# t gap\n");
    for (t, g) in &fit.points {
        let _ = writeln!(s, "{t} {}", sci(*g));
    }
    s
}
