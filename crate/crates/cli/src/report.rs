//! Output formatting. Every number written to JSON or CSV is rounded to 15
//! significant digits so output is stable across platforms and thread counts.

use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use num_complex::Complex64;
use serde_json::{json, Value};
use spincav::{State, SweepTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

pub struct Report {
    text: String,
    value: Value,
    csv: Option<String>,
    default: Format,
}

/// Rounds to 15 significant digits.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.14e}").parse().expect("formatted float parses")
}

pub fn num(x: f64) -> Value {
    let r = round15(x);
    if r == 0.0 {
        return json!(0.0);
    }
    json!(r)
}

pub fn fmt_c(z: Complex64) -> String {
    let (re, im) = (round15(z.re) + 0.0, round15(z.im) + 0.0);
    if im == 0.0 {
        format!("{re}")
    } else if im < 0.0 {
        format!("{re}-{}i", -im)
    } else {
        format!("{re}+{im}i")
    }
}

const CUTOFF: f64 = 1e-14;

pub fn terms_text(s: &State) -> String {
    let terms = s.terms(CUTOFF);
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .iter()
        .map(|(label, a)| format!("({:+.6}{:+.6}i)|{label}>", a.re, a.im))
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn terms_json(s: &State) -> Value {
    Value::Array(
        s.terms(CUTOFF)
            .into_iter()
            .map(|(label, a)| json!({ "ket": label, "re": num(a.re), "im": num(a.im) }))
            .collect(),
    )
}

impl Report {
    pub fn new(text: String, value: Value) -> Self {
        Self {
            text,
            value,
            csv: None,
            default: Format::Text,
        }
    }

    pub fn sweep(table: &SweepTable<f64>) -> Result<Self> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["kappa_s_over_kappa", "g_over_kappa", "fidelity"])?;
        let mut text = format!(
            "{:>20}{:>14}{:>20}\n",
            "kappa_s/kappa", "g/kappa", "fidelity"
        );
        let mut rows = Vec::with_capacity(table.rows.len());
        for r in &table.rows {
            let (k, g, f) = (
                round15(r.kappa_s_over_kappa),
                round15(r.g_over_kappa),
                round15(r.fidelity),
            );
            w.write_record([k.to_string(), g.to_string(), f.to_string()])?;
            text += &format!("{k:>20}{g:>14}{f:>20.12}\n");
            rows.push(json!({
                "kappa_s_over_kappa": num(k),
                "g_over_kappa": num(g),
                "fidelity": num(f),
            }));
        }
        let csv = String::from_utf8(w.into_inner().context("flushing csv")?)?;
        let s = &table.spec;
        let value = json!({
            "quantity": s.quantity.name(),
            "kappa_s_range": [num(s.kappa_s_range.0), num(s.kappa_s_range.1)],
            "g_range": [num(s.g_range.0), num(s.g_range.1)],
            "resolution": s.resolution,
            "gamma": num(s.gamma),
            "convention": serde_json::to_value(s.convention)?,
            "grid_n": s.grid_n,
            "rows": rows,
        });
        Ok(Self {
            text,
            value,
            csv: Some(csv),
            default: Format::Csv,
        })
    }

    pub fn emit(&self, format: Option<Format>, path: Option<&Path>) -> Result<()> {
        let body = match format.unwrap_or(self.default) {
            Format::Text => self.text.clone(),
            Format::Json => serde_json::to_string_pretty(&self.value)? + "\n",
            Format::Csv => match &self.csv {
                Some(c) => c.clone(),
                None => bail!("csv output is only available for sweep"),
            },
        };
        match path {
            Some(p) => std::fs::write(p, body).with_context(|| format!("writing {}", p.display())),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(body.as_bytes())?;
                Ok(out.flush()?)
            }
        }
    }
}
