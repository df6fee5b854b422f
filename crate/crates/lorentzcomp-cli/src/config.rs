use std::fmt::Write as _;
use std::path::PathBuf;

/// Float with 17 significant digits.
pub fn f17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Everything that determines a run; echoed at the top of every output file.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub command: String,
    pub k: Vec<f64>,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub seed: u64,
    pub tol: f64,
    pub samples: usize,
    pub level: Option<u32>,
    /// Command-specific settings, in the order given.
    pub extra: Vec<(String, String)>,
}

impl RunConfig {
    /// Header lines, each starting with `prefix`.
    pub fn header(&self, prefix: &str) -> String {
        let path = |p: &Option<PathBuf>| {
            p.as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_else(|| "-".into())
        };
        let ks: Vec<String> = self.k.iter().map(|k| f17(*k)).collect();
        let mut out = String::new();
        let _ = writeln!(out, "{prefix} lorentzcomp {}", self.command);
        let _ = writeln!(out, "{prefix} k = {}", ks.join(","));
        let _ = writeln!(out, "{prefix} in = {}", path(&self.input));
        let _ = writeln!(out, "{prefix} out = {}", path(&self.output));
        let _ = writeln!(out, "{prefix} svg = {}", path(&self.svg));
        let _ = writeln!(out, "{prefix} seed = {}", self.seed);
        let _ = writeln!(out, "{prefix} tol = {}", f17(self.tol));
        let _ = writeln!(out, "{prefix} samples = {}", self.samples);
        let level = self
            .level
            .map(|l| l.to_string())
            .unwrap_or_else(|| "-".into());
        let _ = writeln!(out, "{prefix} level = {level}");
        for (key, val) in &self.extra {
            let _ = writeln!(out, "{prefix} {key} = {val}");
        }
        out
    }
}
