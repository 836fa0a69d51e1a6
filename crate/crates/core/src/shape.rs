use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// The three reference domains: the unit square `[0,1]²`, the unit disk
/// centred at the origin, and the equilateral triangle with vertices
/// `(0,0)`, `(1,0)`, `(1/2, √3/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShapeKind {
    Square,
    Disk,
    Triangle,
}

impl ShapeKind {
    pub const ALL: [ShapeKind; 3] = [ShapeKind::Square, ShapeKind::Disk, ShapeKind::Triangle];

    pub fn area(self) -> f64 {
        match self {
            ShapeKind::Square => 1.0,
            ShapeKind::Disk => std::f64::consts::PI,
            ShapeKind::Triangle => 3f64.sqrt() / 4.0,
        }
    }

    /// Strict interior test.
    pub fn contains(self, x: f64, y: f64) -> bool {
        match self {
            ShapeKind::Square => x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0,
            ShapeKind::Disk => x * x + y * y < 1.0,
            ShapeKind::Triangle => {
                let s = 3f64.sqrt();
                y > 0.0 && s * x - y > 0.0 && s * (1.0 - x) - y > 0.0
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ShapeKind::Square => "square",
            ShapeKind::Disk => "disk",
            ShapeKind::Triangle => "triangle",
        }
    }
}

impl fmt::Display for ShapeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ShapeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "square" => Ok(ShapeKind::Square),
            "disk" | "disc" => Ok(ShapeKind::Disk),
            "triangle" => Ok(ShapeKind::Triangle),
            other => Err(Error::Parameter(format!("unknown shape '{other}' (expected square, disk or triangle)"))),
        }
    }
}
