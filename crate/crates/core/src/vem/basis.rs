use crate::mesh::Point;

/// Number of monomials of total degree at most `k`.
pub const fn dim(k: usize) -> usize {
    (k + 1) * (k + 2) / 2
}

/// Position of `x^a y^b` in graded lexicographic order.
pub const fn index_of(a: usize, b: usize) -> usize {
    let d = a + b;
    d * (d + 1) / 2 + b
}

/// Scaled monomials `((x − c_x)/h)^a ((y − c_y)/h)^b`, `a + b ≤ k`, ordered
/// `1, x, y, x², xy, y², …`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledMonomialBasis {
    pub k: usize,
    pub center: Point,
    pub h: f64,
    pub exponents: Vec<(usize, usize)>,
}

impl ScaledMonomialBasis {
    pub fn new(k: usize, center: Point, h: f64) -> Self {
        let exponents = (0..=k).flat_map(|d| (0..=d).map(move |b| (d - b, b))).collect();
        Self { k, center, h, exponents }
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    fn scaled(&self, p: Point) -> (f64, f64) {
        ((p[0] - self.center[0]) / self.h, (p[1] - self.center[1]) / self.h)
    }

    pub fn eval(&self, p: Point) -> Vec<f64> {
        let (x, y) = self.scaled(p);
        self.exponents.iter().map(|&(a, b)| x.powi(a as i32) * y.powi(b as i32)).collect()
    }

    /// Gradients in physical coordinates.
    pub fn grad(&self, p: Point) -> Vec<[f64; 2]> {
        let (x, y) = self.scaled(p);
        let pw = |t: f64, e: usize| if e == 0 { 0.0 } else { e as f64 * t.powi(e as i32 - 1) };
        self.exponents
            .iter()
            .map(|&(a, b)| {
                [
                    pw(x, a) * y.powi(b as i32) / self.h,
                    x.powi(a as i32) * pw(y, b) / self.h,
                ]
            })
            .collect()
    }

    /// Evaluates `Σ c_α m_α` at `p`.
    pub fn eval_poly(&self, coeffs: &[f64], p: Point) -> f64 {
        self.eval(p).iter().zip(coeffs).map(|(m, c)| m * c).sum()
    }

    /// Same centre and scale, different degree.
    pub fn with_degree(&self, k: usize) -> Self {
        Self::new(k, self.center, self.h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let b = ScaledMonomialBasis::new(3, [0.0, 0.0], 1.0);
        assert_eq!(
            b.exponents,
            vec![(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3)]
        );
        for (i, &(a, c)) in b.exponents.iter().enumerate() {
            assert_eq!(index_of(a, c), i);
        }
        for k in 0..5 {
            assert_eq!(ScaledMonomialBasis::new(k, [0.0; 2], 1.0).len(), dim(k));
        }
    }

    #[test]
    fn centred_scaled_values() {
        let b = ScaledMonomialBasis::new(2, [0.5, 0.5], 2f64.sqrt());
        let v = b.eval([1.0, 0.0]);
        let s = 0.5 / 2f64.sqrt();
        let expected = [1.0, s, -s, s * s, -s * s, s * s];
        for (x, y) in v.iter().zip(expected) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn gradient_matches_finite_difference() {
        let b = ScaledMonomialBasis::new(3, [0.3, -0.2], 0.7);
        let p = [0.45, 0.1];
        let g = b.grad(p);
        let eps = 1e-6;
        for d in 0..2 {
            let mut hi = p;
            let mut lo = p;
            hi[d] += eps;
            lo[d] -= eps;
            for (i, (f1, f0)) in b.eval(hi).iter().zip(b.eval(lo)).enumerate() {
                assert!(((f1 - f0) / (2.0 * eps) - g[i][d]).abs() < 1e-8);
            }
        }
    }
}
