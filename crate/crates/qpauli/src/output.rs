//! CSV/JSON rendering of command results. All exact values serialize as
//! `"numerator/denominator"` strings; stochastic outputs carry their seed.

use serde_json::{json, Value};

use crate::exact::Rational;
use crate::laws::density::DensityPoint;
use crate::laws::mc::McLawReport;
use crate::s4::AtomicLaw;
use crate::weingarten::GramMatrix;
use crate::linalg::QMatrix;

#[derive(Clone, Copy, PartialEq, Eq, Debug, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub const SCHEMA: &str = "1";

fn render(value: Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("serializable value");
    s.push('\n');
    s
}

pub fn moments_csv(moments: &[(u32, Rational)]) -> String {
    let mut out = String::from("k,value\n");
    for (k, v) in moments {
        out.push_str(&format!("{k},{}\n", v.fraction_string()));
    }
    out
}

pub fn moments_json(variable: &str, t: Option<&Rational>, moments: &[(u32, Rational)]) -> String {
    let rows: Vec<Value> = moments
        .iter()
        .map(|(k, v)| json!({"k": k, "value": v.fraction_string()}))
        .collect();
    let mut obj = json!({
        "schema": SCHEMA,
        "variable": variable,
        "moments": rows,
    });
    if let Some(t) = t {
        obj["t"] = json!(t.fraction_string());
    }
    render(obj)
}

pub fn density_csv(points: &[DensityPoint]) -> String {
    let mut out = String::from("x,density,converged\n");
    for p in points {
        out.push_str(&format!("{:.6},{:.12e},{}\n", p.x, p.density, p.converged));
    }
    out
}

pub fn density_json(variable: &str, t: Option<&Rational>, points: &[DensityPoint]) -> String {
    let rows: Vec<Value> = points
        .iter()
        .map(|p| json!({"x": p.x, "density": p.density, "converged": p.converged}))
        .collect();
    let mut obj = json!({
        "schema": SCHEMA,
        "variable": variable,
        "points": rows,
    });
    if let Some(t) = t {
        obj["t"] = json!(t.fraction_string());
    }
    render(obj)
}

pub fn mc_csv(report: &McLawReport) -> String {
    let mut out = format!(
        "# schema={} variable={} samples={} seed={} rejected={}\n",
        SCHEMA, report.variable, report.samples, report.seed, report.rejected
    );
    out.push_str("k,value,stderr\n");
    for (k, m) in report.moments.iter().enumerate() {
        out.push_str(&format!("{},{:.12e},{:.12e}\n", k + 1, m.mean, m.stderr));
    }
    out
}

pub fn mc_json(report: &McLawReport, t: Option<&Rational>) -> String {
    let moments: Vec<Value> = report
        .moments
        .iter()
        .enumerate()
        .map(|(k, m)| json!({"k": k + 1, "value": m.mean, "stderr": m.stderr}))
        .collect();
    let mut obj = json!({
        "schema": SCHEMA,
        "variable": report.variable,
        "seed": report.seed,
        "samples": report.samples,
        "rejected": report.rejected,
        "moments": moments,
        "zero_eigenvalue_fraction": report.zero_eigenvalue_fraction,
        "histogram": {
            "lo": report.histogram.lo,
            "hi": report.histogram.hi,
            "counts": report.histogram.counts,
        },
    });
    if let Some(t) = t {
        obj["t"] = json!(t.fraction_string());
    }
    render(obj)
}

pub fn s4_csv(law: &AtomicLaw) -> String {
    let mut out = String::from("location,weight\n");
    for (x, w) in law.atoms() {
        out.push_str(&format!("{},{}\n", x.fraction_string(), w.fraction_string()));
    }
    out
}

pub fn s4_json(weights: &[Rational; 4], law: &AtomicLaw) -> String {
    let atoms: Vec<Value> = law
        .atoms()
        .iter()
        .map(|(x, w)| json!({"location": x.fraction_string(), "weight": w.fraction_string()}))
        .collect();
    render(json!({
        "schema": SCHEMA,
        "weights": weights.iter().map(Rational::fraction_string).collect::<Vec<_>>(),
        "atoms": atoms,
    }))
}

fn matrix_rows(m: &QMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).fraction_string()).collect())
        .collect()
}

pub fn weingarten_json(g: &GramMatrix, inverse: &QMatrix) -> String {
    let labels: Vec<String> = g.partitions().iter().map(|p| p.to_string()).collect();
    render(json!({
        "schema": SCHEMA,
        "k": g.order(),
        "partitions": labels,
        "gram": matrix_rows(g.matrix()),
        "weingarten": matrix_rows(inverse),
    }))
}

pub fn weingarten_csv(g: &GramMatrix, inverse: &QMatrix) -> String {
    let labels: Vec<String> = g.partitions().iter().map(|p| p.to_string()).collect();
    let mut out = String::from("matrix,row,col,value\n");
    for (name, m) in [("gram", g.matrix()), ("weingarten", inverse)] {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.push_str(&format!(
                    "{name},\"{}\",\"{}\",{}\n",
                    labels[i],
                    labels[j],
                    m.get(i, j).fraction_string()
                ));
            }
        }
    }
    out
}
