//! Tabular artifacts: CSV with the config echoed as `#` comment lines, or
//! JSON with the config under `"config"`.

use std::fmt::Write as _;
use std::path::Path;

use quantvar::config::{OutputFormat, RunConfig};
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Informational output with no threshold attached.
    None,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::None => "none",
        }
    }
}

pub struct Artifact {
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    pub summary: Vec<(String, Value)>,
    pub verdict: Verdict,
}

impl Artifact {
    pub fn new(name: impl Into<String>, columns: Vec<&'static str>) -> Self {
        Artifact {
            name: name.into(),
            columns,
            rows: Vec::new(),
            summary: Vec::new(),
            verdict: Verdict::None,
        }
    }

    pub fn row(&mut self, cells: Vec<Value>) {
        self.rows.push(cells);
    }

    pub fn note(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.push((key.to_string(), value.into()));
    }

    /// Every numeric cell is finite (non-finite floats become `null` when
    /// converted to `Value`).
    pub fn all_finite(&self) -> bool {
        fn finite(v: &Value) -> bool {
            match v {
                Value::Null => false,
                Value::Array(a) => a.iter().all(finite),
                Value::Object(o) => o.values().all(finite),
                _ => true,
            }
        }
        self.rows.iter().flatten().all(finite)
    }

    pub fn render(&self, format: OutputFormat, config: &RunConfig) -> String {
        match format {
            OutputFormat::Csv => self.render_csv(config),
            OutputFormat::Json => self.render_json(config),
        }
    }

    fn render_csv(&self, config: &RunConfig) -> String {
        let mut out = String::new();
        for line in config.to_toml().lines() {
            writeln!(out, "{}", format!("# {line}").trim_end()).unwrap();
        }
        writeln!(out, "{}", self.columns.join(",")).unwrap();
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(csv_cell).collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
        for (k, v) in &self.summary {
            writeln!(out, "# {k} = {}", csv_cell(v)).unwrap();
        }
        writeln!(out, "# verdict = {}", self.verdict.label()).unwrap();
        out
    }

    fn render_json(&self, config: &RunConfig) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect()))
            .collect();
        let summary: Map<String, Value> = self.summary.iter().cloned().collect();
        let doc = json!({
            "command": self.name,
            "config": config,
            "rows": rows,
            "summary": summary,
            "verdict": self.verdict.label(),
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("json value serializes");
        s.push('\n');
        s
    }

    pub fn write(&self, format: OutputFormat, config: &RunConfig, out_dir: Option<&Path>) -> std::io::Result<()> {
        let text = self.render(format, config);
        match out_dir {
            Some(dir) => {
                std::fs::create_dir_all(dir)?;
                let path = dir.join(format!("{}.{format}", self.name));
                std::fs::write(&path, text)?;
                eprintln!("wrote {}", path.display());
                Ok(())
            }
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        Value::Null => "NaN".to_string(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut a = Artifact::new("demo", vec!["m", "value", "label"]);
        a.row(vec![json!(4), json!(0.5), json!("a,b")]);
        a.note("slope", -1.0);
        a.verdict = Verdict::Pass;
        let text = a.render(OutputFormat::Csv, &RunConfig::default());
        let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body, vec!["m,value,label", "4,0.5,\"a,b\""]);
        assert!(text.ends_with("# slope = -1.0\n# verdict = pass\n"));
        assert!(text.starts_with("# "));
    }

    #[test]
    fn json_layout_and_finiteness() {
        let mut a = Artifact::new("demo", vec!["x"]);
        a.row(vec![json!(1.25)]);
        let doc: Value = serde_json::from_str(&a.render(OutputFormat::Json, &RunConfig::default())).unwrap();
        assert_eq!(doc["rows"][0]["x"], json!(1.25));
        assert_eq!(doc["config"]["lattice_cutoff"], json!(60));
        assert!(a.all_finite());
        a.row(vec![json!(f64::NAN)]);
        assert!(!a.all_finite());
    }
}
