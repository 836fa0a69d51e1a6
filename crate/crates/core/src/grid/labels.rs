use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{rasterize_shape, GridSpec, Mask};
use crate::error::{Error, Result};
use crate::shape::ShapeKind;

/// Integer-labelled partition of a grid: −1 marks exterior and interface
/// nodes, `0..k` the cells.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelGrid {
    spec: GridSpec,
    k: usize,
    labels: Vec<i32>,
}

impl LabelGrid {
    /// Checked constructor: labels in `-1..k`, every cell nonempty.
    pub fn new(spec: GridSpec, k: usize, labels: Vec<i32>) -> Result<Self> {
        if labels.len() != spec.len() {
            return Err(Error::Domain(format!("{} labels for a grid of {} nodes", labels.len(), spec.len())));
        }
        let mut sizes = vec![0usize; k];
        for &l in &labels {
            if l < -1 || l >= k as i32 {
                return Err(Error::Domain(format!("label {l} outside -1..{k}")));
            }
            if l >= 0 {
                sizes[l as usize] += 1;
            }
        }
        if let Some(empty) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::Degenerate(format!("cell {empty} has no nodes")));
        }
        Ok(LabelGrid { spec, k, labels })
    }

    pub(crate) fn from_raw(spec: GridSpec, k: usize, labels: Vec<i32>) -> Self {
        LabelGrid { spec, k, labels }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn label(&self, index: usize) -> i32 {
        self.labels[index]
    }

    pub fn labels(&self) -> &[i32] {
        &self.labels
    }

    pub fn cell_size(&self, i: usize) -> usize {
        self.labels.iter().filter(|&&l| l == i as i32).count()
    }

    pub fn cell_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            if l >= 0 {
                sizes[l as usize] += 1;
            }
        }
        sizes
    }

    /// PLBL text: header `PLBL rows cols k h`, then one line per grid row.
    pub fn to_plbl(&self) -> String {
        let mut out = String::with_capacity(self.labels.len() * 3 + 64);
        let _ = writeln!(out, "PLBL {} {} {} {}", self.spec.rows, self.spec.cols, self.k, self.spec.h());
        for row in self.labels.chunks(self.spec.cols) {
            let mut first = true;
            for l in row {
                if !first {
                    out.push(' ');
                }
                first = false;
                let _ = write!(out, "{l}");
            }
            out.push('\n');
        }
        out
    }

    /// Parses PLBL text. The shape is recovered from the grid dimensions.
    pub fn from_plbl(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Format("empty PLBL input".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 5 || fields[0] != "PLBL" {
            return Err(Error::Format(format!("bad PLBL header '{header}'")));
        }
        let parse_usize = |s: &str, what: &str| s.parse::<usize>().map_err(|_| Error::Format(format!("bad {what} '{s}'")));
        let rows = parse_usize(fields[1], "rows")?;
        let cols = parse_usize(fields[2], "cols")?;
        let k = parse_usize(fields[3], "k")?;
        let h: f64 = fields[4].parse().map_err(|_| Error::Format(format!("bad h '{}'", fields[4])))?;
        let spec = spec_from_dims(rows, cols, h)?;
        let mut labels = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let line = lines.next().ok_or_else(|| Error::Format(format!("PLBL ends after {r} of {rows} rows")))?;
            let before = labels.len();
            for tok in line.split_whitespace() {
                labels.push(tok.parse::<i32>().map_err(|_| Error::Format(format!("bad label '{tok}' in row {r}")))?);
            }
            if labels.len() - before != cols {
                return Err(Error::Format(format!("row {r} has {} entries, expected {cols}", labels.len() - before)));
            }
        }
        LabelGrid::new(spec, k, labels)
    }
}

/// Recovers the grid of one of the reference shapes from its dimensions and spacing.
pub(crate) fn spec_from_dims(rows: usize, cols: usize, h: f64) -> Result<GridSpec> {
    if !(h > 0.0) {
        return Err(Error::Format(format!("grid spacing {h} must be positive")));
    }
    let n = (1.0 / h).round() as usize;
    for shape in ShapeKind::ALL {
        if let Ok(spec) = GridSpec::new(shape, n) {
            if spec.rows == rows && spec.cols == cols {
                return Ok(spec);
            }
        }
    }
    Err(Error::Format(format!("no reference grid has {rows}x{cols} nodes at h = {h}")))
}

/// Nodes carrying label `i`.
pub fn cell_mask(part: &LabelGrid, i: usize) -> Result<Mask> {
    if i >= part.k {
        return Err(Error::Index { index: i, k: part.k });
    }
    Ok(Mask::from_fn(part.spec, |p| part.labels[p] == i as i32))
}

/// Interface nodes between cells `i` and `j`: in-shape nodes labelled −1
/// with a 4-neighbour in each of the two cells.
fn interface_nodes(part: &LabelGrid, inside: &Mask, i: i32, j: i32) -> Vec<usize> {
    let spec = &part.spec;
    (0..spec.len())
        .filter(|&p| part.labels[p] == -1 && inside.get(p))
        .filter(|&p| {
            let mut hit = (false, false);
            for q in spec.neighbors(p) {
                hit.0 |= part.labels[q] == i;
                hit.1 |= part.labels[q] == j;
            }
            hit.0 && hit.1
        })
        .collect()
}

fn directly_adjacent(part: &LabelGrid, i: i32, j: i32) -> bool {
    let spec = &part.spec;
    (0..spec.len()).any(|p| part.labels[p] == i && spec.neighbors(p).any(|q| part.labels[q] == j))
}

/// Interior of the closure of cells `i` and `j`: both cells plus the
/// interface nodes separating them.
pub fn union_mask(part: &LabelGrid, i: usize, j: usize) -> Result<Mask> {
    for idx in [i, j] {
        if idx >= part.k {
            return Err(Error::Index { index: idx, k: part.k });
        }
    }
    if i == j {
        return Err(Error::Domain(format!("union of cell {i} with itself")));
    }
    let inside = rasterize_shape(&part.spec);
    let (a, b) = (i as i32, j as i32);
    let bridge = interface_nodes(part, &inside, a, b);
    if bridge.is_empty() && !directly_adjacent(part, a, b) {
        return Err(Error::NotAdjacent(i, j));
    }
    let mut mask = Mask::from_fn(part.spec, |p| part.labels[p] == a || part.labels[p] == b);
    for p in bridge {
        mask.set(p, true);
    }
    Ok(mask)
}

/// Adjacent cell pairs `(i, j)` with `i < j`, sorted.
pub fn adjacency(part: &LabelGrid) -> Vec<(usize, usize)> {
    let spec = &part.spec;
    let inside = rasterize_shape(spec);
    let mut pairs = BTreeSet::new();
    for p in 0..spec.len() {
        let l = part.labels[p];
        if l >= 0 {
            for q in spec.neighbors(p) {
                let m = part.labels[q];
                if m >= 0 && m != l {
                    pairs.insert((l.min(m) as usize, l.max(m) as usize));
                }
            }
        } else if inside.get(p) {
            let around: BTreeSet<i32> = spec.neighbors(p).map(|q| part.labels[q]).filter(|&m| m >= 0).collect();
            let around: Vec<i32> = around.into_iter().collect();
            for (x, &a) in around.iter().enumerate() {
                for &b in &around[x + 1..] {
                    pairs.insert((a as usize, b as usize));
                }
            }
        }
    }
    pairs.into_iter().collect()
}
