//! Polygonal meshes of the unit square.

mod io;
mod regularity;
mod voronoi;

use std::collections::HashMap;

use thiserror::Error;

pub use io::{load, read_vempoly, save, write_vempoly};
pub use regularity::{validate, CellRegularity, RegularityReport};
pub use voronoi::{generate_voronoi, generate_voronoi_with_history, voronoi_from_seeds, SeedRng};

pub type Point = [f64; 2];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshDefect {
    #[error("cell {cell} references vertex {index} out of range")]
    VertexIndex { cell: usize, index: usize },
    #[error("cell {cell} has fewer than 3 distinct vertices")]
    TooFewVertices { cell: usize },
    #[error("cell {cell} repeats a vertex")]
    RepeatedVertex { cell: usize },
    #[error("edge ({0}, {1}) is shared by more than two cells")]
    NonManifoldEdge(usize, usize),
    #[error("cell {cell} is not counterclockwise")]
    Orientation { cell: usize },
    #[error("cell {cell} is not a simple polygon")]
    SelfIntersection { cell: usize },
    #[error("edge ({0}, {1}) is traversed in the same direction by both of its cells")]
    InconsistentEdge(usize, usize),
    #[error("cell areas sum to {area_sum}, domain area is {domain_area}")]
    Tiling { area_sum: f64, domain_area: f64 },
    #[error("V - E + F = {0}, expected 1")]
    Euler(i64),
    #[error("non-finite vertex coordinate at vertex {0}")]
    NonFinite(usize),
}

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("malformed mesh: {0}")]
    Malformed(#[from] MeshDefect),
    #[error("seeds {first} and {second} coincide")]
    DegenerateSeeds { first: usize, second: usize },
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Mesh edge with endpoints stored as `(low, high)` vertex indices.
#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub vertices: [usize; 2],
    /// Lower-index incident cell.
    pub left: usize,
    /// Other incident cell; `None` on the boundary.
    pub right: Option<usize>,
}

impl Edge {
    pub fn is_boundary(&self) -> bool {
        self.right.is_none()
    }
}

/// Local edge `i` of a cell (from its vertex `i` to vertex `i+1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CellEdge {
    pub edge: usize,
    /// The cell walks this edge from its low to its high vertex.
    pub forward: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellGeometry {
    /// Maximum distance between two vertices.
    pub diameter: f64,
    /// Signed shoelace area (positive for counterclockwise loops).
    pub area: f64,
    pub centroid: Point,
}

/// Vertices, counterclockwise cells and derived edges.
#[derive(Clone, Debug, PartialEq)]
pub struct PolygonalMesh {
    vertices: Vec<Point>,
    cells: Vec<Vec<usize>>,
    edges: Vec<Edge>,
    cell_edges: Vec<Vec<CellEdge>>,
}

impl PolygonalMesh {
    /// Builds the mesh and derives its edges. Checks indices and edge
    /// multiplicity only; geometric checks live in [`validate`].
    pub fn new(vertices: Vec<Point>, cells: Vec<Vec<usize>>) -> Result<Self, MeshError> {
        if let Some(i) = vertices.iter().position(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return Err(MeshDefect::NonFinite(i).into());
        }
        let mut edge_ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edges: Vec<Edge> = Vec::new();
        let mut cell_edges = Vec::with_capacity(cells.len());
        for (c, cell) in cells.iter().enumerate() {
            if cell.len() < 3 {
                return Err(MeshDefect::TooFewVertices { cell: c }.into());
            }
            if let Some(&index) = cell.iter().find(|&&v| v >= vertices.len()) {
                return Err(MeshDefect::VertexIndex { cell: c, index }.into());
            }
            let mut sorted = cell.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(MeshDefect::RepeatedVertex { cell: c }.into());
            }
            let m = cell.len();
            let mut local = Vec::with_capacity(m);
            for i in 0..m {
                let (a, b) = (cell[i], cell[(i + 1) % m]);
                let key = (a.min(b), a.max(b));
                let id = match edge_ids.get(&key) {
                    Some(&id) => {
                        let e = &mut edges[id];
                        if e.right.is_some() {
                            return Err(MeshDefect::NonManifoldEdge(key.0, key.1).into());
                        }
                        e.right = Some(c);
                        id
                    }
                    None => {
                        edges.push(Edge { vertices: [key.0, key.1], left: c, right: None });
                        edge_ids.insert(key, edges.len() - 1);
                        edges.len() - 1
                    }
                };
                local.push(CellEdge { edge: id, forward: a < b });
            }
            cell_edges.push(local);
        }
        Ok(Self { vertices, cells, edges, cell_edges })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn cell_edges(&self, cell: usize) -> &[CellEdge] {
        &self.cell_edges[cell]
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    /// `V − E + F`.
    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices() as i64 - self.n_edges() as i64 + self.n_cells() as i64
    }

    /// Flags vertices lying on a boundary edge.
    pub fn boundary_vertices(&self) -> Vec<bool> {
        let mut flags = vec![false; self.n_vertices()];
        for e in self.edges.iter().filter(|e| e.is_boundary()) {
            flags[e.vertices[0]] = true;
            flags[e.vertices[1]] = true;
        }
        flags
    }

    pub fn cell_polygon(&self, cell: usize) -> Vec<Point> {
        self.cells[cell].iter().map(|&v| self.vertices[v]).collect()
    }

    pub fn cell_geometry(&self, cell: usize) -> CellGeometry {
        polygon_geometry(&self.cell_polygon(cell))
    }

    /// `h = max_P h_P`.
    pub fn mesh_size(&self) -> f64 {
        (0..self.n_cells()).map(|c| self.cell_geometry(c).diameter).fold(0.0, f64::max)
    }

    /// Axis-aligned bounding box `(min, max)` of the vertices.
    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in &self.vertices {
            for d in 0..2 {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
        }
        (lo, hi)
    }
}

/// Diameter, signed area and area centroid of a closed polygon.
pub fn polygon_geometry(poly: &[Point]) -> CellGeometry {
    let m = poly.len();
    let mut diameter = 0.0f64;
    for i in 0..m {
        for j in i + 1..m {
            diameter = diameter.max(dist(poly[i], poly[j]));
        }
    }
    // shoelace relative to the first vertex to limit cancellation
    let o = poly[0];
    let (mut a2, mut cx, mut cy) = (0.0, 0.0, 0.0);
    for i in 0..m {
        let p = [poly[i][0] - o[0], poly[i][1] - o[1]];
        let q = [poly[(i + 1) % m][0] - o[0], poly[(i + 1) % m][1] - o[1]];
        let cross = p[0] * q[1] - q[0] * p[1];
        a2 += cross;
        cx += (p[0] + q[0]) * cross;
        cy += (p[1] + q[1]) * cross;
    }
    let area = 0.5 * a2;
    let centroid = [o[0] + cx / (3.0 * a2), o[1] + cy / (3.0 * a2)];
    CellGeometry { diameter, area, centroid }
}

pub(crate) fn dist(p: Point, q: Point) -> f64 {
    ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt()
}

/// `m × m` uniform squares on the unit square; vertex `(i, j)` has index `j·(m+1) + i`.
pub fn generate_square_grid(m: usize) -> Result<PolygonalMesh, MeshError> {
    if m == 0 {
        return Err(MeshError::InvalidArgument("grid size must be at least 1".into()));
    }
    let h = 1.0 / m as f64;
    let mut vertices = Vec::with_capacity((m + 1) * (m + 1));
    for j in 0..=m {
        for i in 0..=m {
            let coord = |k: usize| if k == m { 1.0 } else { k as f64 * h };
            vertices.push([coord(i), coord(j)]);
        }
    }
    let id = |i: usize, j: usize| j * (m + 1) + i;
    let mut cells = Vec::with_capacity(m * m);
    for j in 0..m {
        for i in 0..m {
            cells.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    PolygonalMesh::new(vertices, cells)
}
