use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{rasterize_shape, GridSpec, LabelGrid, Mask};

/// `k` density fields on a shape's grid, nonnegative and summing to one at
/// every interior node (zero elsewhere).
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionState {
    pub spec: GridSpec,
    pub fields: Vec<Vec<f64>>,
    pub iteration: usize,
}

impl PartitionState {
    pub fn new(spec: GridSpec, fields: Vec<Vec<f64>>) -> Result<Self> {
        if fields.is_empty() {
            return Err(Error::Parameter("a partition needs at least one field".into()));
        }
        if fields.iter().any(|f| f.len() != spec.len()) {
            return Err(Error::Domain("density field does not match the grid".into()));
        }
        Ok(PartitionState { spec, fields, iteration: 0 })
    }

    pub fn k(&self) -> usize {
        self.fields.len()
    }

    pub fn interior(&self) -> Mask {
        rasterize_shape(&self.spec)
    }

    pub fn uniform(spec: GridSpec, k: usize) -> Self {
        let inside = rasterize_shape(&spec);
        let field: Vec<f64> = (0..spec.len()).map(|p| if inside.get(p) { 1.0 / k as f64 } else { 0.0 }).collect();
        PartitionState { spec, fields: vec![field; k], iteration: 0 }
    }

    /// Sharp indicator densities of a labelled partition. Interface nodes
    /// (label −1 inside the shape) are shared equally by their neighbouring
    /// cells, or by all cells when isolated.
    pub fn from_labels(part: &LabelGrid) -> Self {
        let spec = *part.spec();
        let k = part.k();
        let inside = rasterize_shape(&spec);
        let mut fields = vec![vec![0.0; spec.len()]; k];
        for p in inside.indices() {
            let l = part.label(p);
            if l >= 0 {
                fields[l as usize][p] = 1.0;
                continue;
            }
            let mut near: Vec<usize> = spec.neighbors(p).filter_map(|q| usize::try_from(part.label(q)).ok()).collect();
            near.sort_unstable();
            near.dedup();
            if near.is_empty() {
                near = (0..k).collect();
            }
            for &c in &near {
                fields[c][p] = 1.0 / near.len() as f64;
            }
        }
        PartitionState { spec, fields, iteration: 0 }
    }

    /// Sharp Voronoi cells of `k` seed points drawn uniformly in the shape.
    pub fn voronoi(spec: GridSpec, k: usize, seed: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Parameter("k must be >= 1".into()));
        }
        let inside = rasterize_shape(&spec);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x0, y0) = spec.origin;
        let (w, hgt) = ((spec.cols - 1) as f64 * spec.h(), (spec.rows - 1) as f64 * spec.h());
        let mut points = Vec::with_capacity(k);
        while points.len() < k {
            let (x, y) = (x0 + rng.random::<f64>() * w, y0 + rng.random::<f64>() * hgt);
            if spec.shape.contains(x, y) {
                points.push((x, y));
            }
        }
        let mut fields = vec![vec![0.0; spec.len()]; k];
        for p in inside.indices() {
            let (x, y) = spec.coords(p);
            let nearest = points
                .iter()
                .enumerate()
                .map(|(i, &(px, py))| (i, (px - x).powi(2) + (py - y).powi(2)))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .map(|(i, _)| i)
                .unwrap_or(0);
            fields[nearest][p] = 1.0;
        }
        Ok(PartitionState { spec, fields, iteration: 0 })
    }

    /// Largest violation of the simplex constraints over interior nodes.
    pub fn feasibility_defect(&self) -> f64 {
        let inside = self.interior();
        let mut worst = 0.0f64;
        for p in inside.indices() {
            let mut sum = 0.0;
            for f in &self.fields {
                worst = worst.max(-f[p]);
                sum += f[p];
            }
            worst = worst.max((sum - 1.0).abs());
        }
        worst
    }

    /// Fields carried to a grid of another resolution by bilinear
    /// interpolation over interior nodes, then projected.
    pub fn resample(&self, target: GridSpec) -> Result<Self> {
        if target.shape != self.spec.shape {
            return Err(Error::Parameter("cannot resample across shapes".into()));
        }
        let src_inside = self.interior();
        let dst_inside = rasterize_shape(&target);
        let k = self.k();
        let hs = self.spec.h();
        let mut fields = vec![vec![0.0; target.len()]; k];
        for p in dst_inside.indices() {
            let (x, y) = target.coords(p);
            let gx = (x - self.spec.origin.0) / hs;
            let gy = (y - self.spec.origin.1) / hs;
            let (c0, r0) = (gx.floor().max(0.0) as usize, gy.floor().max(0.0) as usize);
            let mut acc = vec![0.0; k];
            let mut wsum = 0.0;
            for (dr, dc) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                let (r, c) = (r0 + dr, c0 + dc);
                if r >= self.spec.rows || c >= self.spec.cols {
                    continue;
                }
                let q = self.spec.index(r, c);
                if !src_inside.get(q) {
                    continue;
                }
                let w = (1.0 - (gx - c as f64).abs()).max(0.0) * (1.0 - (gy - r as f64).abs()).max(0.0) + 1e-12;
                wsum += w;
                for i in 0..k {
                    acc[i] += w * self.fields[i][q];
                }
            }
            if wsum == 0.0 {
                // Thin boundary sliver: borrow the nearest interior source node.
                let q = src_inside
                    .indices()
                    .min_by(|&a, &b| {
                        let da = dist2(self.spec.coords(a), (x, y));
                        let db = dist2(self.spec.coords(b), (x, y));
                        da.total_cmp(&db)
                    })
                    .ok_or_else(|| Error::Domain("source grid has no interior".into()))?;
                for i in 0..k {
                    acc[i] = self.fields[i][q];
                }
                wsum = 1.0;
            }
            for i in 0..k {
                fields[i][p] = acc[i] / wsum;
            }
        }
        let mut out = PartitionState { spec: target, fields, iteration: self.iteration };
        project(&mut out.fields, &dst_inside);
        Ok(out)
    }
}

fn dist2(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)
}

/// Euclidean projection of a point onto the probability simplex.
pub fn project_point(v: &mut [f64]) {
    let mut sorted: Vec<f64> = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut tau = 0.0;
    for (j, &s) in sorted.iter().enumerate() {
        cum += s;
        let t = (cum - 1.0) / (j + 1) as f64;
        if s - t > 0.0 {
            tau = t;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - tau).max(0.0);
    }
}

/// Pointwise simplex projection at every node of `mask`; other nodes are zeroed.
pub fn project(fields: &mut [Vec<f64>], mask: &Mask) {
    let k = fields.len();
    let mut buf = vec![0.0; k];
    for p in 0..mask.spec.len() {
        if !mask.get(p) {
            for f in fields.iter_mut() {
                f[p] = 0.0;
            }
            continue;
        }
        for i in 0..k {
            buf[i] = fields[i][p];
        }
        project_point(&mut buf);
        for i in 0..k {
            fields[i][p] = buf[i];
        }
    }
}

/// Argmax labelling, lowest index on ties.
pub fn sharpen(state: &PartitionState) -> Result<LabelGrid> {
    let inside = state.interior();
    let k = state.k();
    let labels: Vec<i32> = (0..state.spec.len())
        .map(|p| {
            if !inside.get(p) {
                return -1;
            }
            let mut best = 0;
            for i in 1..k {
                if state.fields[i][p] > state.fields[best][p] {
                    best = i;
                }
            }
            best as i32
        })
        .collect();
    LabelGrid::new(state.spec, k, labels).map_err(|e| match e {
        Error::Degenerate(msg) => Error::Degenerate(format!("sharpened partition: {msg}")),
        other => other,
    })
}
