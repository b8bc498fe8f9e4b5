//! Report assembly and emission. Floats are written with 17 significant
//! digits so that every value round-trips bit for bit.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::tasks::PointRecord;

pub const REPORT_FILE: &str = "report.json";

pub fn float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Pretty JSON with floats in `{:.16e}` form.
struct Exact<'a>(PrettyFormatter<'a>);

impl Formatter for Exact<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(float(value).as_bytes())
    }
    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json_string(v: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Exact(PrettyFormatter::with_indent(b"  ")));
    serde::Serialize::serialize(v, &mut ser).expect("in-memory JSON");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON is UTF-8")
}

pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub points: Vec<PointRecord>,
    pub total_seconds: f64,
}

impl Report {
    pub fn failed(&self) -> bool {
        self.points.iter().any(PointRecord::failed)
    }

    /// Everything except the timings is a function of config and seed.
    pub fn to_value(&self) -> Value {
        let points: Vec<Value> = self
            .points
            .iter()
            .map(|p| {
                let tasks: Vec<Value> = p
                    .tasks
                    .iter()
                    .map(|t| {
                        let mut v = json!({
                            "kind": t.kind,
                            "spec": t.spec,
                            "provenance": {
                                "model": self.config.model.name,
                                "sites": self.config.model.sites,
                                "boundary": self.config.model.boundary,
                                "params": p.params,
                                "tolerances": self.config.tolerances,
                                "seed": self.config.seed,
                            },
                        });
                        match &t.outcome {
                            Ok(r) => {
                                v["status"] = json!("ok");
                                v["result"] = r.clone();
                            }
                            Err(e) => {
                                v["status"] = json!("error");
                                v["error"] = json!(e);
                            }
                        }
                        v
                    })
                    .collect();
                json!({ "sweep_value": p.sweep_value, "params": p.params, "tasks": tasks })
            })
            .collect();
        let timings: Vec<Vec<f64>> = self
            .points
            .iter()
            .map(|p| p.tasks.iter().map(|t| t.seconds).collect())
            .collect();
        json!({
            "tool": { "name": "mchain", "version": env!("CARGO_PKG_VERSION") },
            "command": self.command,
            "config": self.config,
            "points": points,
            "status": if self.failed() { "failed" } else { "ok" },
            "timings": { "total_seconds": self.total_seconds, "task_seconds": timings },
        })
    }

    /// Writes the requested files and returns their paths.
    pub fn emit(&self, dir: &Path, formats: &[Format]) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir).with_context(|| format!("creating output directory {}", dir.display()))?;
        let mut written = Vec::new();
        if formats.contains(&Format::Json) {
            let path = dir.join(REPORT_FILE);
            fs::write(&path, to_json_string(&self.to_value())).with_context(|| format!("writing {}", path.display()))?;
            written.push(path);
        }
        if formats.contains(&Format::Csv) {
            let sweep = self.points.len() > 1 || self.points.first().is_some_and(|p| p.sweep_value.is_some());
            for (pi, p) in self.points.iter().enumerate() {
                for (ti, t) in p.tasks.iter().enumerate() {
                    let Some(series) = &t.series else { continue };
                    let name = if sweep {
                        format!("p{pi:03}-task{ti:02}-{}.csv", t.kind)
                    } else {
                        format!("task{ti:02}-{}.csv", t.kind)
                    };
                    let mut text = format!("{},value\n", series.label_name);
                    for (label, v) in &series.rows {
                        text.push_str(&format!("{label},{}\n", float(*v)));
                    }
                    let path = dir.join(name);
                    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
                    written.push(path);
                }
            }
        }
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_exactly() {
        for v in [0.1, 1e-6, 1.0 / 3.0, -2.5e-300, 1e300, 0.0, f64::MIN_POSITIVE] {
            let s = float(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
            assert_eq!(serde_json::from_str::<f64>(&s).unwrap(), v, "{s}");
        }
        let text = to_json_string(&json!({ "x": 0.1, "n": 3, "list": [1.5] }));
        assert!(text.contains("\"x\": 1.0000000000000001e-1"), "{text}");
        assert!(text.contains("\"n\": 3"));
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["x"].as_f64(), Some(0.1));
    }
}
