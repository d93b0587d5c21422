use super::basis::ScaledMonomialBasis;
use super::quadrature::{edge_rule, PolygonQuadrature};
use super::VemError;
use crate::mesh::{polygon_geometry, Point, PolygonalMesh};

/// A polygon together with the global direction of each of its edges.
///
/// Edge `i` joins vertex `i` to vertex `i + 1`; `edge_forward[i]` says
/// whether that walk agrees with the edge's global orientation. Edge
/// moments are taken in the global orientation so neighbouring elements
/// see the same values.
#[derive(Clone, Debug)]
pub struct ElementGeometry {
    pub vertices: Vec<Point>,
    pub edge_forward: Vec<bool>,
    pub area: f64,
    pub centroid: Point,
    pub diameter: f64,
}

/// Quadrature data along one local edge, in global orientation.
pub(crate) struct EdgeSamples {
    /// Local vertex indices at `t = −1/2` and `t = 1/2`.
    pub start: usize,
    pub end: usize,
    pub length: f64,
    /// Outward unit normal.
    pub normal: [f64; 2],
    pub t: Vec<f64>,
    pub weights: Vec<f64>,
    pub points: Vec<Point>,
}

impl ElementGeometry {
    pub fn new(vertices: Vec<Point>, edge_forward: Vec<bool>) -> Result<Self, VemError> {
        if vertices.len() < 3 || edge_forward.len() != vertices.len() {
            return Err(VemError::DegenerateCell("need ≥ 3 vertices and one flag per edge".into()));
        }
        let g = polygon_geometry(&vertices);
        if !(g.area > 0.0) {
            return Err(VemError::DegenerateCell(format!("non-positive area {}", g.area)));
        }
        Ok(Self { vertices, edge_forward, area: g.area, centroid: g.centroid, diameter: g.diameter })
    }

    /// Standalone polygon: every edge oriented along the counterclockwise walk.
    pub fn from_polygon(vertices: Vec<Point>) -> Result<Self, VemError> {
        let n = vertices.len();
        Self::new(vertices, vec![true; n])
    }

    pub fn from_mesh(mesh: &PolygonalMesh, cell: usize) -> Result<Self, VemError> {
        let forward = mesh.cell_edges(cell).iter().map(|e| e.forward).collect();
        Self::new(mesh.cell_polygon(cell), forward)
    }

    pub fn translated(&self, offset: Point) -> Result<Self, VemError> {
        let vertices = self.vertices.iter().map(|p| [p[0] + offset[0], p[1] + offset[1]]).collect();
        Self::new(vertices, self.edge_forward.clone())
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Scaled monomials centred at the centroid with `h = h_P`.
    pub fn basis(&self, k: usize) -> ScaledMonomialBasis {
        ScaledMonomialBasis::new(k, self.centroid, self.diameter)
    }

    pub fn quadrature(&self, degree: usize) -> Result<PolygonQuadrature, VemError> {
        PolygonQuadrature::fan(&self.vertices, self.centroid, degree)
    }

    pub(crate) fn edge_samples(&self, n_points: usize) -> Vec<EdgeSamples> {
        let m = self.n_vertices();
        let (t, weights) = edge_rule(n_points);
        (0..m)
            .map(|i| {
                let j = (i + 1) % m;
                let (p, q) = (self.vertices[i], self.vertices[j]);
                let length = crate::mesh::dist(p, q);
                let normal = [(q[1] - p[1]) / length, -(q[0] - p[0]) / length];
                let (start, end) = if self.edge_forward[i] { (i, j) } else { (j, i) };
                let (a, b) = (self.vertices[start], self.vertices[end]);
                let mid = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
                let points =
                    t.iter().map(|&s| [mid[0] + s * (b[0] - a[0]), mid[1] + s * (b[1] - a[1])]).collect();
                EdgeSamples { start, end, length, normal, t: t.clone(), weights: weights.clone(), points }
            })
            .collect()
    }

    /// DoFs of a function: vertex values, scaled edge moments and internal
    /// moments. Integrals are exact when `f` is a polynomial of degree ≤ k.
    pub fn sample_dofs(&self, k: usize, f: impl Fn(Point) -> f64) -> Result<Vec<f64>, VemError> {
        let layout = super::DofLayout::new(k, self.n_vertices());
        let mut dofs = vec![0.0; layout.len()];
        for (v, &p) in self.vertices.iter().enumerate() {
            dofs[layout.vertex(v)] = f(p);
        }
        if k >= 2 {
            for (e, s) in self.edge_samples(k + 1).iter().enumerate() {
                for j in 0..k - 1 {
                    dofs[layout.edge_moment(e, j)] = s
                        .points
                        .iter()
                        .zip(s.t.iter().zip(&s.weights))
                        .map(|(&p, (t, w))| w * f(p) * t.powi(j as i32))
                        .sum();
                }
            }
            let quad = self.quadrature(2 * k)?;
            let low = self.basis(k - 2);
            let mut moments = vec![0.0; low.len()];
            for (&p, w) in quad.points.iter().zip(&quad.weights) {
                let fw = w * f(p);
                for (acc, m) in moments.iter_mut().zip(low.eval(p)) {
                    *acc += fw * m;
                }
            }
            for (b, m) in moments.into_iter().enumerate() {
                dofs[layout.internal(b)] = m / self.area;
            }
        }
        Ok(dofs)
    }
}
