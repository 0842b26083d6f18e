//! Text, JSON and CSV renderings of reports.

use std::fmt::Write as _;

use cone_morse::inequalities::InequalityReport;
use serde::Serialize;
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

fn at<T: Copy + Default>(xs: &[T], k: usize) -> T {
    xs.get(k).copied().unwrap_or_default()
}

/// `Q(s)` as a polynomial in `s`.
pub fn polynomial(q: &[i64]) -> String {
    let terms: Vec<String> = q
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| {
            let mono = match i {
                0 => String::new(),
                1 => "s".into(),
                _ => format!("s^{i}"),
            };
            match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                (-1, _) => format!("-{mono}"),
                _ => format!("{c}{mono}"),
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ").replace("+ -", "- ")
    }
}

/// Machon check degree `n + p + 1` and the compared count `m_{n−p}`.
fn machon_terms(rep: &InequalityReport) -> (usize, Option<usize>) {
    let n = rep.manifold_dim / 2;
    let k = n + rep.p + 1;
    (k, n.checked_sub(rep.p).map(|j| at(&rep.m, j)))
}

#[derive(Serialize)]
struct Row {
    k: usize,
    m: usize,
    b: usize,
    v: usize,
    r: usize,
    b_omega: usize,
    weak_slack: i64,
    strong_slack: i64,
    weak_bound: i64,
    mb_weak_bound: Option<i64>,
    mb_weak_slack: Option<i64>,
    mb_strong_slack: Option<i64>,
}

fn rows(rep: &InequalityReport) -> Vec<Row> {
    (0..rep.cone_len())
        .map(|k| {
            let bw = rep.b_omega[k] as i64;
            let mb = rep.morse_bott.as_ref();
            Row {
                k,
                m: at(&rep.m, k),
                b: at(&rep.b, k),
                v: at(&rep.v, k),
                r: at(&rep.r, k),
                b_omega: rep.b_omega[k],
                weak_slack: rep.weak_slack[k],
                strong_slack: rep.strong_slack[k],
                weak_bound: bw + rep.weak_slack[k],
                mb_weak_bound: mb.map(|x| bw + x.weak[k]),
                mb_weak_slack: mb.map(|x| x.weak[k]),
                mb_strong_slack: mb.map(|x| x.strong[k]),
            }
        })
        .collect()
}

pub fn analyze(rep: &InequalityReport, format: Format) -> String {
    match format {
        Format::Text => analyze_text(rep),
        Format::Json => analyze_json(rep),
        Format::Csv => analyze_csv(rep),
    }
}

fn analyze_text(rep: &InequalityReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "datum {} (dimension {}, p = {})", rep.name, rep.manifold_dim, rep.p);
    let header = ["k", "m_k", "b_k", "v_k", "r_k", "b^w_k", "weak", "strong", "bound", "mb_bound", "mb_weak", "mb_strong"];
    let opt = |x: Option<i64>| x.map_or_else(|| "-".to_string(), |x| x.to_string());
    let table: Vec<[String; 12]> = rows(rep)
        .into_iter()
        .map(|r| {
            [
                r.k.to_string(),
                r.m.to_string(),
                r.b.to_string(),
                r.v.to_string(),
                r.r.to_string(),
                r.b_omega.to_string(),
                r.weak_slack.to_string(),
                r.strong_slack.to_string(),
                r.weak_bound.to_string(),
                opt(r.mb_weak_bound),
                opt(r.mb_weak_slack),
                opt(r.mb_strong_slack),
            ]
        })
        .collect();
    let widths: Vec<usize> =
        (0..header.len()).map(|i| table.iter().map(|r| r[i].len()).max().unwrap_or(0).max(header[i].len())).collect();
    let line = |cells: &[&str]| {
        cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ")
    };
    let _ = writeln!(out, "{}", line(&header));
    for r in &table {
        let cells: Vec<&str> = r.iter().map(String::as_str).collect();
        let _ = writeln!(out, "{}", line(&cells));
    }
    match &rep.q {
        Some(q) => {
            let _ = writeln!(out, "Q(s) = {}", polynomial(q));
        }
        None => {
            let _ = writeln!(out, "Q(s) = n/a (p > 0)");
        }
    }
    let _ = writeln!(out, "perfect: {}", rep.perfect);
    let (k, m) = machon_terms(rep);
    if rep.machon_violations.is_empty() {
        let _ = writeln!(out, "machon check at k={k}: ok");
    }
    for &k in &rep.machon_violations {
        let _ = writeln!(out, "machon violation k={k}: {} > {}", at(&rep.b_omega, k), m.unwrap_or(0));
    }
    if rep.has_negative() {
        let _ = writeln!(out, "ANOMALY: negative slack or Q coefficient");
    }
    out
}

fn analyze_json(rep: &InequalityReport) -> String {
    let (k, m) = machon_terms(rep);
    let value = json!({
        "name": rep.name,
        "manifold_dim": rep.manifold_dim,
        "p": rep.p,
        "m": rep.m,
        "b": rep.b,
        "v": rep.v,
        "r": rep.r,
        "b_omega": rep.b_omega,
        "weak_slack": rep.weak_slack,
        "strong_slack": rep.strong_slack,
        "q": rep.q,
        "morse_bott": rep.morse_bott.as_ref().map(|mb| json!({"weak_slack": mb.weak, "strong_slack": mb.strong})),
        "perfect": rep.perfect,
        "machon": {
            "degree": k,
            "b_omega": at(&rep.b_omega, k),
            "m": m,
            "violations": rep.machon_violations,
        },
        "anomaly": rep.has_negative(),
        "table": rows(rep),
    });
    let mut s = serde_json::to_string_pretty(&value).expect("report serializes");
    s.push('\n');
    s
}

fn analyze_csv(rep: &InequalityReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows(rep) {
        w.serialize(row).expect("csv row");
    }
    String::from_utf8(w.into_inner().expect("csv flush")).expect("utf-8")
}

/// Cone cohomology by the rank decomposition and directly, per cone degree.
pub struct ConeComparison {
    pub name: String,
    pub degrees: Vec<i32>,
    pub cone_dims: Vec<usize>,
    pub direct: Vec<usize>,
    pub decomposition: Vec<usize>,
}

impl ConeComparison {
    pub fn agrees(&self) -> bool {
        self.direct == self.decomposition
    }
}

#[derive(Serialize)]
struct ConeRow {
    k: i32,
    cone_dim: usize,
    direct: usize,
    decomposition: usize,
}

pub fn cone(c: &ConeComparison, format: Format) -> String {
    let rows: Vec<ConeRow> = (0..c.degrees.len())
        .map(|i| ConeRow { k: c.degrees[i], cone_dim: c.cone_dims[i], direct: c.direct[i], decomposition: c.decomposition[i] })
        .collect();
    match format {
        Format::Text => {
            let mut out = format!("cone of {}\n{:>3}  {:>8}  {:>6}  {:>13}\n", c.name, "k", "cone_dim", "direct", "decomposition");
            for r in &rows {
                let _ = writeln!(out, "{:>3}  {:>8}  {:>6}  {:>13}", r.k, r.cone_dim, r.direct, r.decomposition);
            }
            let _ = writeln!(out, "{}", if c.agrees() { "agree" } else { "MISMATCH" });
            out
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json!({"name": c.name, "agree": c.agrees(), "degrees": rows}))
                .expect("cone serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r).expect("csv row");
            }
            String::from_utf8(w.into_inner().expect("csv flush")).expect("utf-8")
        }
    }
}

/// C-style `%.9e`: mantissa with nine decimals and a signed two-digit exponent.
pub fn sci(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.9e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}
