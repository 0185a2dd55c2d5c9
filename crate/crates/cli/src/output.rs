//! CSV and manifest writers.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use ceo_core::{model, Params, Trajectory};

pub const TRAJECTORY_HEADER: &str = "t,x,p,y,q,H,G";

/// `t,x,p,y,q,H,G` rows with `H` and `G` recomputed from each state.
pub fn trajectory_csv(params: Params, traj: &Trajectory) -> String {
    let mut out = String::with_capacity(128 * traj.len());
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for (i, &t) in traj.times.iter().enumerate() {
        let s = traj.state_1d(i);
        let e = model::eval_energy_pair(params, s);
        let _ = writeln!(
            out,
            "{t:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            s.x, s.p, s.y, s.q, e.h, e.g
        );
    }
    out
}

/// Two-column CSV.
pub fn xy_csv(header: &str, points: &[[f64; 2]]) -> String {
    let mut out = format!("{header}\n");
    for [a, b] in points {
        let _ = writeln!(out, "{a:.16e},{b:.16e}");
    }
    out
}

/// Ordered `key=value` record, written one pair per line.
#[derive(Debug, Default)]
pub struct Manifest {
    entries: Vec<(String, String)>,
    outputs: Vec<String>,
}

impl Manifest {
    pub fn new(command: &str) -> Self {
        let mut m = Self::default();
        m.set("version", env!("CARGO_PKG_VERSION"));
        m.set("command", command);
        m
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        let value = value.to_string().replace('\n', " ");
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(entry) => entry.1 = value,
            None => self.entries.push((key.to_string(), value)),
        }
    }

    /// Full-precision float.
    pub fn set_f64(&mut self, key: &str, value: f64) {
        self.set(key, format!("{value:.16e}"));
    }

    pub fn add_output(&mut self, name: &str) {
        self.outputs.push(name.to_string());
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{k}={v}");
        }
        let _ = writeln!(out, "outputs={}", self.outputs.join(","));
        out
    }
}

/// Writes `contents` to `dir/name` and records it in the manifest.
pub fn write_output(
    dir: &Path,
    name: &str,
    contents: &str,
    manifest: &mut Manifest,
) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    manifest.add_output(name);
    Ok(path)
}

pub fn write_manifest(dir: &Path, name: &str, manifest: &Manifest) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, manifest.render()).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_keeps_insertion_order_and_overwrites() {
        let mut m = Manifest::new("simulate");
        m.set("b", 0.5);
        m.set("status", "running");
        m.set("status", "ok");
        m.add_output("run.csv");
        let text = m.render();
        let keys: Vec<&str> = text.lines().map(|l| l.split('=').next().unwrap()).collect();
        assert_eq!(keys, ["version", "command", "b", "status", "outputs"]);
        assert!(text.contains("status=ok\n"));
        assert!(text.ends_with("outputs=run.csv\n"));
    }

    #[test]
    fn csv_values_round_trip() {
        let v = 0.1_f64 + 0.2;
        let row = xy_csv("x,p", &[[v, -1e-300]]);
        let fields: Vec<f64> = row
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .map(|f| f.parse().unwrap())
            .collect();
        assert_eq!(fields, [v, -1e-300]);
    }
}
