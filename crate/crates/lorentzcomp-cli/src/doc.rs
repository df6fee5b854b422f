//! Sectioned text files: `key = value` lines and named blocks of numbers.
//!
//! ```text
//! K = 0
//! alpha:
//! 0 0
//! 1 0.6
//! ```

use anyhow::{anyhow, bail, Result};
use lorentzcomp::model::{curvature_gauge, CurvatureGauge, ModelPoint};

#[derive(Debug, Clone, Default)]
pub struct Doc {
    pub keys: Vec<(String, String)>,
    pub sections: Vec<(String, Vec<Vec<f64>>)>,
}

impl Doc {
    pub fn parse(text: &str) -> Result<Doc> {
        let mut doc = Doc::default();
        let mut current: Option<usize> = None;
        for (no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_suffix(':') {
                doc.sections.push((name.trim().to_string(), Vec::new()));
                current = Some(doc.sections.len() - 1);
            } else if let Some((k, v)) = line.split_once('=') {
                doc.keys.push((k.trim().to_string(), v.trim().to_string()));
                current = None;
            } else {
                let idx =
                    current.ok_or_else(|| anyhow!("line {}: data outside a section", no + 1))?;
                let row = line
                    .split_whitespace()
                    .map(|w| {
                        w.parse::<f64>()
                            .map_err(|_| anyhow!("line {}: bad number {w:?}", no + 1))
                    })
                    .collect::<Result<Vec<_>>>()?;
                doc.sections[idx].1.push(row);
            }
        }
        Ok(doc)
    }

    pub fn key(&self, name: &str) -> Option<&str> {
        self.keys
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
    }

    pub fn section(&self, name: &str) -> Option<&[Vec<f64>]> {
        self.sections
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, rows)| rows.as_slice())
    }

    /// Gauge from the file's `K`, falling back to the command line.
    pub fn gauge(&self, cli_k: Option<f64>) -> Result<CurvatureGauge> {
        let file_k = match self.key("K") {
            Some(v) => Some(v.parse::<f64>().map_err(|_| anyhow!("bad K {v:?}"))?),
            None => None,
        };
        let k = match (file_k, cli_k) {
            (Some(a), Some(b)) if a != b => bail!("file has K = {a} but --k {b} was given"),
            (Some(a), _) => a,
            (None, Some(b)) => b,
            (None, None) => 0.0,
        };
        Ok(curvature_gauge(k))
    }

    /// Points of a section with two coordinates per row.
    pub fn points(&self, g: &CurvatureGauge, name: &str) -> Result<Option<Vec<ModelPoint>>> {
        let Some(rows) = self.section(name) else {
            return Ok(None);
        };
        rows.iter()
            .map(|r| match r.as_slice() {
                [t, x] => Ok(ModelPoint::from_coords(g, *t, *x)),
                _ => bail!(
                    "section {name}: expected two coordinates per row, got {}",
                    r.len()
                ),
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }
}

pub fn write_points(out: &mut String, g: &CurvatureGauge, name: &str, pts: &[ModelPoint]) {
    out.push_str(name);
    out.push_str(":\n");
    for p in pts {
        let (t, x) = p.coords(g);
        out.push_str(&format!(
            "{} {}\n",
            crate::config::f17(t),
            crate::config::f17(x)
        ));
    }
}

pub fn write_values(out: &mut String, name: &str, vals: &[f64]) {
    out.push_str(name);
    out.push_str(":\n");
    for v in vals {
        out.push_str(&crate::config::f17(*v));
        out.push('\n');
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_and_keys() {
        let d = Doc::parse("# c\nK = -1\nalpha:\n0 0\n1 0.5\nbeta:\n0 0\n2 0\nseed = 3\n").unwrap();
        assert_eq!(d.key("K"), Some("-1"));
        assert_eq!(d.section("alpha").unwrap().len(), 2);
        assert_eq!(d.section("beta").unwrap()[1], vec![2.0, 0.0]);
        assert_eq!(d.key("seed"), Some("3"));
        assert!(d.gauge(Some(0.0)).is_err());
        assert_eq!(d.gauge(None).unwrap().k, -1.0);
        assert!(Doc::parse("1 2\n").is_err());
    }
}
