//! Uniform spatial hash grid for neighbor search.
//!
//! Cell size equals the largest kernel support radius, so all interaction
//! partners of a particle live in the 3×3 cell block around it. Neighbor
//! lists are sorted by neighbor position (x, then y, then index) so that
//! per-particle accumulation order is canonical: results do not depend on
//! worker count or on how particles happen to be labelled.

use crate::vec2::Vec2;
use rayon::prelude::*;

/// Below this particle count the parallel passes run sequentially; the
/// dispatch overhead dominates for small systems.
pub const PAR_THRESHOLD: usize = 512;

#[derive(Debug, Clone)]
pub struct SpatialGrid {
    cell_size: f64,
    min: Vec2<f64>,
    nx: usize,
    ny: usize,
    /// CSR layout: `cell_start[c]..cell_start[c+1]` indexes into `entries`.
    cell_start: Vec<usize>,
    entries: Vec<u32>,
}

impl SpatialGrid {
    /// Build a grid over `positions` with the given cell size (the maximum
    /// interaction radius).
    pub fn build(positions: &[Vec2<f64>], cell_size: f64) -> Self {
        assert!(cell_size > 0.0 && cell_size.is_finite());
        if positions.is_empty() {
            return SpatialGrid {
                cell_size,
                min: Vec2::zero(),
                nx: 1,
                ny: 1,
                cell_start: vec![0, 0],
                entries: Vec::new(),
            };
        }
        let mut min = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut max = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in positions {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        let nx = (((max.x - min.x) / cell_size).floor() as usize) + 1;
        let ny = (((max.y - min.y) / cell_size).floor() as usize) + 1;
        let n_cells = nx * ny;

        let cell_of = |p: &Vec2<f64>| -> usize {
            let cx = (((p.x - min.x) / cell_size).floor() as usize).min(nx - 1);
            let cy = (((p.y - min.y) / cell_size).floor() as usize).min(ny - 1);
            cy * nx + cx
        };

        // Counting sort by cell, stable in particle index.
        let mut counts = vec![0usize; n_cells + 1];
        for p in positions {
            counts[cell_of(p) + 1] += 1;
        }
        for c in 0..n_cells {
            counts[c + 1] += counts[c];
        }
        let cell_start = counts.clone();
        let mut cursor = counts;
        let mut entries = vec![0u32; positions.len()];
        for (i, p) in positions.iter().enumerate() {
            let c = cell_of(p);
            entries[cursor[c]] = i as u32;
            cursor[c] += 1;
        }

        SpatialGrid {
            cell_size,
            min,
            nx,
            ny,
            cell_start,
            entries,
        }
    }

    /// Visit all candidate indices in the 3×3 cell block around `p`.
    #[inline]
    pub fn for_candidates(&self, p: Vec2<f64>, mut visit: impl FnMut(usize)) {
        let cx = (((p.x - self.min.x) / self.cell_size).floor() as i64).clamp(0, self.nx as i64 - 1);
        let cy = (((p.y - self.min.y) / self.cell_size).floor() as i64).clamp(0, self.ny as i64 - 1);
        for dy in -1..=1i64 {
            let yy = cy + dy;
            if yy < 0 || yy >= self.ny as i64 {
                continue;
            }
            for dx in -1..=1i64 {
                let xx = cx + dx;
                if xx < 0 || xx >= self.nx as i64 {
                    continue;
                }
                let c = yy as usize * self.nx + xx as usize;
                for &e in &self.entries[self.cell_start[c]..self.cell_start[c + 1]] {
                    visit(e as usize);
                }
            }
        }
    }
}

/// Per-particle neighbor lists in CSR form, in canonical order.
#[derive(Debug, Clone, Default)]
pub struct NeighborLists {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl NeighborLists {
    pub fn of(&self, i: usize) -> &[u32] {
        &self.neighbors[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn len(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn canonical_sort(ids: &mut Vec<u32>, targets: &[Vec2<f64>]) {
    ids.sort_unstable_by(|&a, &b| {
        let pa = &targets[a as usize];
        let pb = &targets[b as usize];
        pa.x.total_cmp(&pb.x)
            .then(pa.y.total_cmp(&pb.y))
            .then(a.cmp(&b))
    });
}

/// Neighbors of each `sources[i]` among `targets` within `radius`,
/// excluding the identical index when `exclude_self` (self-pairs in a
/// same-set search). Lists are sorted by target position.
pub fn find_neighbors(
    sources: &[Vec2<f64>],
    targets: &[Vec2<f64>],
    grid: &SpatialGrid,
    radius: f64,
    exclude_self: bool,
) -> NeighborLists {
    let r2 = radius * radius;
    let collect_one = |i: usize| {
        let p = sources[i];
        let mut ids: Vec<u32> = Vec::with_capacity(32);
        grid.for_candidates(p, |j| {
            if exclude_self && j == i {
                return;
            }
            let d = p - targets[j];
            if d.norm_sq() < r2 {
                ids.push(j as u32);
            }
        });
        canonical_sort(&mut ids, targets);
        ids
    };

    let per_particle: Vec<Vec<u32>> = if sources.len() >= PAR_THRESHOLD {
        (0..sources.len()).into_par_iter().map(collect_one).collect()
    } else {
        (0..sources.len()).map(collect_one).collect()
    };

    let mut offsets = Vec::with_capacity(sources.len() + 1);
    offsets.push(0usize);
    let mut total = 0usize;
    for l in &per_particle {
        total += l.len();
        offsets.push(total);
    }
    let mut neighbors = Vec::with_capacity(total);
    for l in per_particle {
        neighbors.extend_from_slice(&l);
    }
    NeighborLists { offsets, neighbors }
}
