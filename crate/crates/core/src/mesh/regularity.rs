use super::{dist, polygon_geometry, MeshDefect, MeshError, Point, PolygonalMesh};

const TILING_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct CellRegularity {
    pub diameter: f64,
    pub area: f64,
    /// Centre of the largest disc inside all edge half-planes, if one exists.
    pub star_center: Option<Point>,
    pub star_radius: f64,
    /// `min_e h_e / h_P`.
    pub min_edge_ratio: f64,
}

impl CellRegularity {
    pub fn gamma(&self) -> f64 {
        (self.star_radius / self.diameter).min(self.min_edge_ratio)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegularityReport {
    /// Mesh size, the largest cell diameter.
    pub h: f64,
    pub cells: Vec<CellRegularity>,
    pub gamma_observed: f64,
    pub gamma_required: f64,
    pub passed: bool,
}

/// Structural checks followed by per-cell shape-regularity measurements.
pub fn validate(mesh: &PolygonalMesh, gamma: f64) -> Result<RegularityReport, MeshError> {
    check_structure(mesh)?;
    let cells: Vec<CellRegularity> = (0..mesh.n_cells()).map(|c| cell_regularity(mesh, c)).collect();
    let h = cells.iter().map(|c| c.diameter).fold(0.0, f64::max);
    let gamma_observed = cells.iter().map(CellRegularity::gamma).fold(f64::INFINITY, f64::min);
    Ok(RegularityReport { h, cells, gamma_observed, gamma_required: gamma, passed: gamma_observed >= gamma })
}

fn check_structure(mesh: &PolygonalMesh) -> Result<(), MeshDefect> {
    let mut area_sum = 0.0;
    for c in 0..mesh.n_cells() {
        let poly = mesh.cell_polygon(c);
        let area = polygon_geometry(&poly).area;
        if area <= 0.0 {
            return Err(MeshDefect::Orientation { cell: c });
        }
        if !is_simple(&poly) {
            return Err(MeshDefect::SelfIntersection { cell: c });
        }
        area_sum += area;
    }
    for (id, e) in mesh.edges().iter().enumerate() {
        if let Some(right) = e.right {
            let along = |cell: usize| {
                mesh.cell_edges(cell).iter().find(|ce| ce.edge == id).map(|ce| ce.forward)
            };
            if along(e.left) == along(right) {
                return Err(MeshDefect::InconsistentEdge(e.vertices[0], e.vertices[1]));
            }
        }
    }
    let (lo, hi) = mesh.bounding_box();
    let domain_area = (hi[0] - lo[0]) * (hi[1] - lo[1]);
    if (area_sum - domain_area).abs() > TILING_TOL {
        return Err(MeshDefect::Tiling { area_sum, domain_area });
    }
    let chi = mesh.euler_characteristic();
    if chi != 1 {
        return Err(MeshDefect::Euler(chi));
    }
    Ok(())
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |a: Point, b: Point, p: Point, d: f64| {
        d == 0.0
            && p[0] >= a[0].min(b[0])
            && p[0] <= a[0].max(b[0])
            && p[1] >= a[1].min(b[1])
            && p[1] <= a[1].max(b[1])
    };
    on(q1, q2, p1, d1) || on(q1, q2, p2, d2) || on(p1, p2, q1, d3) || on(p1, p2, q2, d4)
}

/// No two non-adjacent edges touch.
fn is_simple(poly: &[Point]) -> bool {
    let m = poly.len();
    for i in 0..m {
        for j in i + 1..m {
            let adjacent = j == i + 1 || (i == 0 && j == m - 1);
            if !adjacent
                && segments_intersect(poly[i], poly[(i + 1) % m], poly[j], poly[(j + 1) % m])
            {
                return false;
            }
        }
    }
    true
}

fn cell_regularity(mesh: &PolygonalMesh, cell: usize) -> CellRegularity {
    let poly = mesh.cell_polygon(cell);
    let geom = polygon_geometry(&poly);
    let m = poly.len();
    let min_edge = (0..m).map(|i| dist(poly[i], poly[(i + 1) % m])).fold(f64::INFINITY, f64::min);
    let (star_center, star_radius) = match chebyshev_center(&poly) {
        Some((c, r)) => (Some(c), r),
        None => (None, 0.0),
    };
    CellRegularity {
        diameter: geom.diameter,
        area: geom.area,
        star_center,
        star_radius,
        min_edge_ratio: min_edge / geom.diameter,
    }
}

/// Largest disc inside the intersection of the inner half-planes of a CCW
/// polygon's edges (its kernel). Solves the 3-variable LP by enumerating
/// vertices defined by triples of active constraints.
fn chebyshev_center(poly: &[Point]) -> Option<(Point, f64)> {
    let m = poly.len();
    // constraint rows: n·x + r ≤ c with unit outward normal n
    let rows: Vec<[f64; 3]> = (0..m)
        .map(|i| {
            let (p, q) = (poly[i], poly[(i + 1) % m]);
            let len = dist(p, q);
            let n = [(q[1] - p[1]) / len, -(q[0] - p[0]) / len];
            [n[0], n[1], n[0] * p[0] + n[1] * p[1]]
        })
        .collect();
    let scale = poly.iter().flat_map(|p| p.iter()).fold(1.0f64, |a, &b| a.max(b.abs()));
    let feas_tol = 1e-12 * scale;
    let mut best: Option<(Point, f64)> = None;
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let Some((x, y, r)) = solve3([rows[i], rows[j], rows[k]]) else {
                    continue;
                };
                if r <= 0.0 || best.is_some_and(|(_, b)| r <= b) {
                    continue;
                }
                if rows.iter().all(|c| c[0] * x + c[1] * y + r <= c[2] + feas_tol) {
                    best = Some(([x, y], r));
                }
            }
        }
    }
    best
}

/// Solves `[n_x n_y 1]·(x, y, r) = c` for three rows by Cramer's rule.
fn solve3(rows: [[f64; 3]; 3]) -> Option<(f64, f64, f64)> {
    let a = |i: usize, j: usize| if j == 2 { 1.0 } else { rows[i][j] };
    let det3 = |col: usize| {
        let e = |i: usize, j: usize| if j == col { rows[i][2] } else { a(i, j) };
        e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
            - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
            + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
    };
    let det = det3(usize::MAX);
    if det.abs() < 1e-14 {
        return None;
    }
    Some((det3(0) / det, det3(1) / det, det3(2) / det))
}
