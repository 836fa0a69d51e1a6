use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::shape::ShapeKind;

/// Exponents visited in max mode.
pub const MAX_MODE_SCHEDULE: [f64; 7] = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0];

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub shape: ShapeKind,
    pub k: usize,
    /// Norm exponent for a single-stage run (1 gives the mean).
    pub p: f64,
    /// Penalization constant `C`.
    pub c: f64,
    /// Per level, `C` is capped at `c_gamma * n^2` so the penetration length stays above `h`.
    pub c_gamma: f64,
    /// Initial step, in density units on the node with the steepest gradient.
    pub step: f64,
    /// Iteration cap per stage.
    pub max_outer: usize,
    pub n: usize,
    pub seed: u64,
    /// Increasing exponents traversed with warm starts; empty means `[p]`.
    pub p_schedule: Vec<f64>,
    /// Coarser resolutions solved first, each result seeding the next.
    pub coarse_levels: Vec<usize>,
    /// Stop when the relative decrease over this many iterations falls below `stall_rtol`.
    pub stall_window: usize,
    pub stall_rtol: f64,
    /// Residual tolerance of the penalized eigensolves.
    pub eig_tol: f64,
}

impl OptimizerConfig {
    pub fn new(shape: ShapeKind, k: usize) -> Self {
        OptimizerConfig {
            shape,
            k,
            p: 1.0,
            c: 1e4,
            c_gamma: 0.1,
            step: 0.5,
            max_outer: 300,
            n: 128,
            seed: 0,
            p_schedule: Vec::new(),
            coarse_levels: vec![32, 64],
            stall_window: 20,
            stall_rtol: 1e-6,
            eig_tol: 1e-8,
        }
    }

    /// Max mode: the full exponent schedule up to 64.
    pub fn max_mode(mut self) -> Self {
        self.p_schedule = MAX_MODE_SCHEDULE.to_vec();
        self.p = 64.0;
        self
    }

    pub fn stages(&self) -> Vec<f64> {
        if self.p_schedule.is_empty() {
            vec![self.p]
        } else {
            self.p_schedule.clone()
        }
    }

    pub fn is_max_mode(&self) -> bool {
        self.stages().last().is_some_and(|&p| p > 1.0)
    }

    /// Resolutions visited in order, ending at `n`.
    pub fn levels(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.coarse_levels.iter().copied().filter(|&m| m < self.n).collect();
        out.sort_unstable();
        out.dedup();
        out.push(self.n);
        out
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Parameter("k must be >= 1".into()));
        }
        let stages = self.stages();
        if stages.iter().any(|&p| !(p >= 1.0) || !p.is_finite()) {
            return Err(Error::Parameter("every exponent p must be >= 1".into()));
        }
        if stages.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Parameter("p_schedule must be increasing".into()));
        }
        if !(self.c > 0.0) {
            return Err(Error::Parameter(format!("C = {} must be positive", self.c)));
        }
        if !(self.c_gamma > 0.0) {
            return Err(Error::Parameter(format!("c_gamma = {} must be positive", self.c_gamma)));
        }
        if !(self.step > 0.0) {
            return Err(Error::Parameter(format!("step = {} must be positive", self.step)));
        }
        if self.n < crate::grid::MIN_RESOLUTION {
            return Err(Error::Resolution { n: self.n, min: crate::grid::MIN_RESOLUTION });
        }
        Ok(())
    }

    /// Flat `key = value` text; `#` starts a comment. Unknown keys are errors.
    pub fn from_kv(text: &str) -> Result<Self> {
        let mut cfg = OptimizerConfig::new(ShapeKind::Square, 2);
        let mut max_mode = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Format(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| Error::Format(format!("line {}: bad {what} '{value}'", lineno + 1));
            match key {
                "shape" => cfg.shape = value.parse()?,
                "k" => cfg.k = value.parse().map_err(|_| bad("k"))?,
                "p" if value == "max" => max_mode = true,
                "p" => cfg.p = value.parse().map_err(|_| bad("p"))?,
                "C" | "c" => cfg.c = value.parse().map_err(|_| bad("C"))?,
                "c_gamma" => cfg.c_gamma = value.parse().map_err(|_| bad("c_gamma"))?,
                "step" => cfg.step = value.parse().map_err(|_| bad("step"))?,
                "max_outer" => cfg.max_outer = value.parse().map_err(|_| bad("max_outer"))?,
                "n" => cfg.n = value.parse().map_err(|_| bad("n"))?,
                "seed" => cfg.seed = value.parse().map_err(|_| bad("seed"))?,
                "p_schedule" => cfg.p_schedule = parse_list(value).map_err(|_| bad("p_schedule"))?,
                "coarse_levels" => cfg.coarse_levels = parse_list(value).map_err(|_| bad("coarse_levels"))?,
                "stall_window" => cfg.stall_window = value.parse().map_err(|_| bad("stall_window"))?,
                "stall_rtol" => cfg.stall_rtol = value.parse().map_err(|_| bad("stall_rtol"))?,
                "eig_tol" => cfg.eig_tol = value.parse().map_err(|_| bad("eig_tol"))?,
                other => return Err(Error::Format(format!("line {}: unknown key '{other}'", lineno + 1))),
            }
        }
        if max_mode && cfg.p_schedule.is_empty() {
            cfg = cfg.max_mode();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_kv(&self) -> String {
        let join = |v: Vec<String>| v.join(",");
        let mut out = String::new();
        let _ = writeln!(out, "shape = {}", self.shape);
        let _ = writeln!(out, "k = {}", self.k);
        let _ = writeln!(out, "p = {}", self.p);
        let _ = writeln!(out, "C = {}", self.c);
        let _ = writeln!(out, "c_gamma = {}", self.c_gamma);
        let _ = writeln!(out, "step = {}", self.step);
        let _ = writeln!(out, "max_outer = {}", self.max_outer);
        let _ = writeln!(out, "n = {}", self.n);
        let _ = writeln!(out, "seed = {}", self.seed);
        let _ = writeln!(out, "p_schedule = {}", join(self.p_schedule.iter().map(|p| p.to_string()).collect()));
        let _ = writeln!(out, "coarse_levels = {}", join(self.coarse_levels.iter().map(|p| p.to_string()).collect()));
        let _ = writeln!(out, "stall_window = {}", self.stall_window);
        let _ = writeln!(out, "stall_rtol = {}", self.stall_rtol);
        let _ = writeln!(out, "eig_tol = {}", self.eig_tol);
        out
    }
}

fn parse_list<T: std::str::FromStr>(s: &str) -> std::result::Result<Vec<T>, ()> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(|t| t.parse().map_err(|_| ())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kv_round_trip() {
        let mut cfg = OptimizerConfig::new(ShapeKind::Disk, 5).max_mode();
        cfg.seed = 9;
        cfg.n = 96;
        assert_eq!(OptimizerConfig::from_kv(&cfg.to_kv()).unwrap(), cfg);
    }

    #[test]
    fn kv_parsing() {
        let cfg = OptimizerConfig::from_kv("# run\nshape = triangle\nk=3\np = max\nC = 5e3\n").unwrap();
        assert_eq!(cfg.shape, ShapeKind::Triangle);
        assert_eq!(cfg.stages(), MAX_MODE_SCHEDULE.to_vec());
        assert_eq!(cfg.c, 5e3);
        assert!(OptimizerConfig::from_kv("k = 2\nbogus = 1\n").is_err());
        assert!(OptimizerConfig::from_kv("p = 0.5\n").is_err());
        assert!(OptimizerConfig::from_kv("p_schedule = 4,2\n").is_err());
    }

    #[test]
    fn levels_end_at_n() {
        let mut cfg = OptimizerConfig::new(ShapeKind::Square, 2);
        assert_eq!(cfg.levels(), vec![32, 64, 128]);
        cfg.n = 48;
        assert_eq!(cfg.levels(), vec![32, 48]);
        cfg.coarse_levels.clear();
        assert_eq!(cfg.levels(), vec![48]);
    }
}
