use super::VemError;
use crate::mesh::Point;

/// Gauss–Legendre nodes and weights on `[−1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = -(std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let step = p / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let dp = legendre(n, x).1;
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    for j in 2..=n {
        let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}

/// Gauss–Legendre rule on `[−1/2, 1/2]` with weights summing to 1.
pub fn edge_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    (x.iter().map(|t| 0.5 * t).collect(), w.iter().map(|w| 0.5 * w).collect())
}

/// Points and weights for integration over a polygon.
#[derive(Clone, Debug)]
pub struct PolygonQuadrature {
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
}

impl PolygonQuadrature {
    /// Fan of triangles from `center`, each integrated with a collapsed
    /// tensor Gauss rule exact for polynomials of total degree `degree`.
    pub fn fan(vertices: &[Point], center: Point, degree: usize) -> Result<Self, VemError> {
        let n = degree / 2 + 1;
        let (x, w) = gauss_legendre(n);
        let unit: Vec<(f64, f64)> = x.iter().zip(&w).map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w)).collect();
        let m = vertices.len();
        let mut points = Vec::with_capacity(m * n * n);
        let mut weights = Vec::with_capacity(m * n * n);
        for i in 0..m {
            let (a, b) = (vertices[i], vertices[(i + 1) % m]);
            let e1 = [a[0] - center[0], a[1] - center[1]];
            let e2 = [b[0] - a[0], b[1] - a[1]];
            let det = e1[0] * e2[1] - e1[1] * e2[0];
            if det <= 0.0 {
                return Err(VemError::NonStarShaped { triangle: i });
            }
            // (u, v) ↦ c + u·(a − c) + u·v·(b − a), Jacobian u·det
            for &(u, wu) in &unit {
                for &(v, wv) in &unit {
                    points.push([
                        center[0] + u * e1[0] + u * v * e2[0],
                        center[1] + u * e1[1] + u * v * e2[1],
                    ]);
                    weights.push(wu * wv * u * det);
                }
            }
        }
        Ok(Self { points, weights })
    }

    pub fn integrate(&self, f: impl Fn(Point) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(&p, w)| w * f(p)).sum()
    }
}
