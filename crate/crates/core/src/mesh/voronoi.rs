use std::collections::HashMap;

use rand_core::Rng;
use rand_pcg::Pcg64;

use super::{MeshError, Point, PolygonalMesh};

/// Stream selector for the seed generator; fixed so seeds alone determine meshes.
const STREAM: u128 = 0xa02b_db00_5c1f_6d3b_8f3e_0e25_7d4c_1a97;
const COINCIDENT_SEEDS: f64 = 1e-12;
const SNAP_TOL: f64 = 1e-9;

/// Seed-point generator.
///
/// PCG-XSL-RR 128/64: state `s ← s·M + inc (mod 2¹²⁸)` with the standard
/// 128-bit multiplier and `inc = 2·STREAM + 1`; each output is the
/// xor-folded high and low halves rotated right by the top 6 bits. A draw in
/// `(0, 1)` is `((u >> 11) + 0.5) · 2⁻⁵³`; a point takes `x` then `y`.
pub struct SeedRng(Pcg64);

impl SeedRng {
    pub fn new(seed: u64) -> Self {
        Self(Pcg64::new(seed as u128, STREAM))
    }

    pub fn next_unit(&mut self) -> f64 {
        ((self.0.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_point(&mut self) -> Point {
        let x = self.next_unit();
        [x, self.next_unit()]
    }
}

/// Lloyd-relaxed Voronoi mesh of the unit square.
pub fn generate_voronoi(
    n_cells: usize,
    seed: u64,
    lloyd_iters: usize,
) -> Result<PolygonalMesh, MeshError> {
    generate_voronoi_with_history(n_cells, seed, lloyd_iters).map(|(mesh, _)| mesh)
}

/// Like [`generate_voronoi`], also returning the total seed displacement
/// `Σ_i |s_i^{new} − s_i^{old}|` of every Lloyd iteration.
pub fn generate_voronoi_with_history(
    n_cells: usize,
    seed: u64,
    lloyd_iters: usize,
) -> Result<(PolygonalMesh, Vec<f64>), MeshError> {
    if n_cells == 0 {
        return Err(MeshError::InvalidArgument("n_cells must be at least 1".into()));
    }
    let mut rng = SeedRng::new(seed);
    let mut seeds: Vec<Point> = (0..n_cells).map(|_| rng.next_point()).collect();
    let mut history = Vec::with_capacity(lloyd_iters);
    for _ in 0..lloyd_iters {
        let mesh = voronoi_from_seeds(&seeds)?;
        let mut moved = 0.0;
        for (cell, s) in seeds.iter_mut().enumerate() {
            let c = mesh.cell_geometry(cell).centroid;
            moved += super::dist(*s, c);
            *s = c;
        }
        history.push(moved);
    }
    Ok((voronoi_from_seeds(&seeds)?, history))
}

/// Voronoi diagram of explicit seeds clipped to the unit square.
pub fn voronoi_from_seeds(seeds: &[Point]) -> Result<PolygonalMesh, MeshError> {
    if seeds.is_empty() {
        return Err(MeshError::InvalidArgument("at least one seed is required".into()));
    }
    check_seeds(seeds)?;
    let cells: Vec<Vec<Point>> = (0..seeds.len()).map(|i| clip_cell(seeds, i)).collect();
    weld(&cells)
}

fn check_seeds(seeds: &[Point]) -> Result<(), MeshError> {
    let mut order: Vec<usize> = (0..seeds.len()).collect();
    order.sort_by(|&a, &b| seeds[a][0].total_cmp(&seeds[b][0]));
    for (pos, &a) in order.iter().enumerate() {
        for &b in &order[pos + 1..] {
            if seeds[b][0] - seeds[a][0] > COINCIDENT_SEEDS {
                break;
            }
            if super::dist(seeds[a], seeds[b]) <= COINCIDENT_SEEDS {
                let (first, second) = (a.min(b), a.max(b));
                return Err(MeshError::DegenerateSeeds { first, second });
            }
        }
    }
    Ok(())
}

fn clip_cell(seeds: &[Point], i: usize) -> Vec<Point> {
    let s = seeds[i];
    let mut others: Vec<(f64, usize)> = seeds
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(j, &p)| (super::dist(s, p), j))
        .collect();
    others.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut poly = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
    for (d, j) in others {
        let reach = poly.iter().map(|&p| super::dist(s, p)).fold(0.0, f64::max);
        // bisectors further than twice the cell radius cannot cut it
        if 0.5 * d > reach {
            break;
        }
        let t = seeds[j];
        let normal = [2.0 * (t[0] - s[0]), 2.0 * (t[1] - s[1])];
        let offset = (t[0] * t[0] + t[1] * t[1]) - (s[0] * s[0] + s[1] * s[1]);
        poly = clip_half_plane(&poly, normal, offset);
    }
    poly
}

/// Sutherland–Hodgman clip against `normal · x ≤ offset`.
fn clip_half_plane(poly: &[Point], normal: [f64; 2], offset: f64) -> Vec<Point> {
    let side = |p: Point| normal[0] * p[0] + normal[1] * p[1] - offset;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for k in 0..poly.len() {
        let (p, q) = (poly[k], poly[(k + 1) % poly.len()]);
        let (fp, fq) = (side(p), side(q));
        if fp <= 0.0 {
            out.push(p);
        }
        if (fp <= 0.0) != (fq <= 0.0) {
            let t = fp / (fp - fq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out
}

/// Merges coordinates closer than the snap tolerance into shared vertices.
fn weld(cells: &[Vec<Point>]) -> Result<PolygonalMesh, MeshError> {
    let key = |p: Point| ((p[0] / SNAP_TOL).floor() as i64, (p[1] / SNAP_TOL).floor() as i64);
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let mut vertices: Vec<Point> = Vec::new();
    let mut loops = Vec::with_capacity(cells.len());
    for poly in cells {
        let mut ids: Vec<usize> = Vec::with_capacity(poly.len());
        for &p in poly {
            let (kx, ky) = key(p);
            let mut found = None;
            'search: for dx in -1..=1 {
                for dy in -1..=1 {
                    if let Some(list) = buckets.get(&(kx + dx, ky + dy)) {
                        if let Some(&v) =
                            list.iter().find(|&&v| super::dist(vertices[v], p) <= SNAP_TOL)
                        {
                            found = Some(v);
                            break 'search;
                        }
                    }
                }
            }
            let id = found.unwrap_or_else(|| {
                vertices.push(p);
                buckets.entry((kx, ky)).or_default().push(vertices.len() - 1);
                vertices.len() - 1
            });
            if ids.last() != Some(&id) {
                ids.push(id);
            }
        }
        while ids.len() > 1 && ids.first() == ids.last() {
            ids.pop();
        }
        loops.push(ids);
    }
    PolygonalMesh::new(vertices, loops)
}
