use faer::prelude::Solve;
use faer::{Mat, Side};

use super::basis::{dim, index_of, ScaledMonomialBasis};
use super::dofs::DofLayout;
use super::geometry::ElementGeometry;
use super::{StabilizationMode, VemError};
use crate::pencil::SymmetricMatrix;

/// Everything the global assembly needs from one polygon.
#[derive(Clone, Debug)]
pub struct LocalElement {
    pub k: usize,
    pub diameter: f64,
    pub area: f64,
    pub basis: ScaledMonomialBasis,
    pub layout: DofLayout,
    /// `dim P_k × N_P`: DoFs to coefficients of `Π∇ v`.
    pub pi_nabla: Mat<f64>,
    /// `dim P_k × N_P`: DoFs to coefficients of `Π⁰ v`.
    pub pi_zero: Mat<f64>,
    /// `N_P × dim P_k`: DoFs of each scaled monomial.
    pub dof_matrix: Mat<f64>,
    /// Polynomial stiffness `∫ ∇m_α·∇m_β`.
    pub stiffness: Mat<f64>,
    /// Polynomial mass `∫ m_α m_β`.
    pub mass: Mat<f64>,
    pub a1_local: SymmetricMatrix,
    pub b1_local: SymmetricMatrix,
    /// Identity on DoF vectors.
    pub sa_local: SymmetricMatrix,
    /// `h_P² ×` identity on DoF vectors.
    pub sb_local: SymmetricMatrix,
}

/// `∫_P m_γ` for every scaled monomial of degree ≤ `degree` in the layout of `basis`.
pub fn integrate_monomials(
    geom: &ElementGeometry,
    basis: &ScaledMonomialBasis,
    degree: usize,
) -> Result<Vec<f64>, VemError> {
    let quad = geom.quadrature(degree)?;
    let monomials = basis.with_degree(degree);
    let mut moments = vec![0.0; monomials.len()];
    for (&p, w) in quad.points.iter().zip(&quad.weights) {
        for (acc, m) in moments.iter_mut().zip(monomials.eval(p)) {
            *acc += w * m;
        }
    }
    Ok(moments)
}

/// Polynomial mass matrix `∫_P m_α m_β` over `basis`.
pub fn mass_matrix(geom: &ElementGeometry, basis: &ScaledMonomialBasis) -> Result<Mat<f64>, VemError> {
    let moments = integrate_monomials(geom, basis, 2 * basis.k)?;
    let e = &basis.exponents;
    Ok(Mat::from_fn(e.len(), e.len(), |i, j| moments[index_of(e[i].0 + e[j].0, e[i].1 + e[j].1)]))
}

fn stiffness_matrix(basis: &ScaledMonomialBasis, moments: &[f64]) -> Mat<f64> {
    let e = &basis.exponents;
    let h2 = basis.h * basis.h;
    Mat::from_fn(e.len(), e.len(), |i, j| {
        let ((a1, b1), (a2, b2)) = (e[i], e[j]);
        let mut v = 0.0;
        if a1 > 0 && a2 > 0 {
            v += (a1 * a2) as f64 * moments[index_of(a1 + a2 - 2, b1 + b2)];
        }
        if b1 > 0 && b2 > 0 {
            v += (b1 * b2) as f64 * moments[index_of(a1 + a2, b1 + b2 - 2)];
        }
        v / h2
    })
}

/// Maps `[v(t=−½), v(t=½), ∫ v t^0, …, ∫ v t^{k−2}]` on `[−½, ½]` to the
/// coefficients of the degree-`k` polynomial `v(t) = Σ c_l t^l`.
fn edge_reconstruction(k: usize) -> Mat<f64> {
    let n = k + 1;
    let power_integral = |p: usize| (0.5f64.powi(p as i32 + 1) - (-0.5f64).powi(p as i32 + 1)) / (p + 1) as f64;
    let conditions = Mat::from_fn(n, n, |r, l| match r {
        0 => (-0.5f64).powi(l as i32),
        1 => 0.5f64.powi(l as i32),
        _ => power_integral(l + r - 2),
    });
    conditions.partial_piv_lu().solve(Mat::<f64>::identity(n, n))
}

/// Ritz projector: DoFs to coefficients of `Π∇ v`.
pub fn projector_nabla(geom: &ElementGeometry, k: usize) -> Result<Mat<f64>, VemError> {
    Ok(local_matrices(geom, k)?.pi_nabla)
}

/// Enhanced-space L² projector: DoFs to coefficients of `Π⁰ v`.
pub fn projector_l2(geom: &ElementGeometry, k: usize) -> Result<Mat<f64>, VemError> {
    Ok(local_matrices(geom, k)?.pi_zero)
}

pub fn local_matrices(geom: &ElementGeometry, k: usize) -> Result<LocalElement, VemError> {
    if !(1..=3).contains(&k) {
        return Err(VemError::UnsupportedDegree(k));
    }
    let reported_basis = geom.basis(k);
    // work relative to the centroid so small cells far from the origin keep their digits
    let geom = &geom.translated([-geom.centroid[0], -geom.centroid[1]])?;
    let basis = geom.basis(k);
    let nk = dim(k);
    let n_low = if k >= 2 { dim(k - 2) } else { 0 };
    let layout = DofLayout::new(k, geom.n_vertices());
    let n = layout.len();
    let (h, area) = (basis.h, geom.area);

    let moments = integrate_monomials(geom, &basis, 2 * k)?;
    let e = &basis.exponents;
    let mass = Mat::from_fn(nk, nk, |i, j| moments[index_of(e[i].0 + e[j].0, e[i].1 + e[j].1)]);
    let stiffness = stiffness_matrix(&basis, &moments);

    // DoFs of the monomials
    let mut dof_matrix = Mat::<f64>::zeros(n, nk);
    for (v, &p) in geom.vertices.iter().enumerate() {
        for (a, m) in basis.eval(p).into_iter().enumerate() {
            dof_matrix[(layout.vertex(v), a)] = m;
        }
    }
    let edges = geom.edge_samples(k + 1);
    for (ei, s) in edges.iter().enumerate() {
        for (q, &p) in s.points.iter().enumerate() {
            let values = basis.eval(p);
            for j in 0..k.saturating_sub(1) {
                let wt = s.weights[q] * s.t[q].powi(j as i32);
                for (a, m) in values.iter().enumerate() {
                    dof_matrix[(layout.edge_moment(ei, j), a)] += wt * m;
                }
            }
        }
    }
    for b in 0..n_low {
        for a in 0..nk {
            dof_matrix[(layout.internal(b), a)] = mass[(b, a)] / area;
        }
    }

    // right-hand side a^P(φ_i, m_α), row 0 replaced by ∫_∂P φ_i
    let recon = edge_reconstruction(k);
    let mut rhs = Mat::<f64>::zeros(nk, n);
    let mut boundary_row = vec![0.0; nk];
    for (ei, s) in edges.iter().enumerate() {
        let mut local = vec![layout.vertex(s.start), layout.vertex(s.end)];
        local.extend((0..k - 1).map(|j| layout.edge_moment(ei, j)));
        for (q, &p) in s.points.iter().enumerate() {
            let lw = s.length * s.weights[q];
            let phi: Vec<f64> =
                (0..=k).map(|r| (0..=k).map(|l| s.t[q].powi(l as i32) * recon[(l, r)]).sum()).collect();
            let normal_derivative: Vec<f64> =
                basis.grad(p).iter().map(|g| g[0] * s.normal[0] + g[1] * s.normal[1]).collect();
            for (r, &dof) in local.iter().enumerate() {
                rhs[(0, dof)] += lw * phi[r];
                for a in 1..nk {
                    rhs[(a, dof)] += lw * phi[r] * normal_derivative[a];
                }
            }
            for (acc, m) in boundary_row.iter_mut().zip(basis.eval(p)) {
                *acc += lw * m;
            }
        }
    }
    for (a, &(ea, eb)) in e.iter().enumerate() {
        if ea >= 2 {
            rhs[(a, layout.internal(index_of(ea - 2, eb)))] -= area * (ea * (ea - 1)) as f64 / (h * h);
        }
        if eb >= 2 {
            rhs[(a, layout.internal(index_of(ea, eb - 2)))] -= area * (eb * (eb - 1)) as f64 / (h * h);
        }
    }

    // Π∇: stiffness block for non-constant modes, constant from the boundary mean
    let inner = stiffness.submatrix(1, 1, nk - 1, nk - 1).to_owned();
    let inner_llt = inner.llt(Side::Lower).map_err(|_| VemError::SingularConstraint)?;
    let upper = inner_llt.solve(rhs.submatrix(1, 0, nk - 1, n).to_owned());
    let mut pi_nabla = Mat::<f64>::zeros(nk, n);
    for j in 0..n {
        let mut c0 = rhs[(0, j)];
        for a in 1..nk {
            pi_nabla[(a, j)] = upper[(a - 1, j)];
            c0 -= boundary_row[a] * upper[(a - 1, j)];
        }
        pi_nabla[(0, j)] = c0 / boundary_row[0];
    }

    // Π⁰: moments against P_{k−2} from internal DoFs, the L²-complement of
    // P_{k−2} in P_k through Π∇
    let mass_llt = mass.llt(Side::Lower).map_err(|_| VemError::SingularMass)?;
    let mut moments_of_v = &mass * &pi_nabla;
    if n_low > 0 {
        let low_llt = mass
            .submatrix(0, 0, n_low, n_low)
            .to_owned()
            .llt(Side::Lower)
            .map_err(|_| VemError::SingularMass)?;
        // q[:, α]: L² projection of m_α onto P_{k−2}
        let q = low_llt.solve(mass.submatrix(0, 0, n_low, nk).to_owned());
        let correction = q.transpose() * mass.submatrix(0, 0, n_low, nk);
        let through_pi = &mass - &correction;
        moments_of_v = &through_pi * &pi_nabla;
        for a in 0..nk {
            for b in 0..n_low {
                moments_of_v[(a, layout.internal(b))] += q[(b, a)] * area;
            }
        }
    }
    let pi_zero = mass_llt.solve(moments_of_v);

    let a1 = pi_nabla.transpose() * &stiffness * &pi_nabla;
    let b1 = pi_zero.transpose() * &mass * &pi_zero;
    Ok(LocalElement {
        k,
        diameter: geom.diameter,
        area,
        basis: reported_basis,
        layout,
        pi_nabla,
        pi_zero,
        dof_matrix,
        stiffness,
        mass,
        a1_local: SymmetricMatrix::symmetrized(a1.as_ref()),
        b1_local: SymmetricMatrix::symmetrized(b1.as_ref()),
        sa_local: SymmetricMatrix::identity(n),
        sb_local: SymmetricMatrix::from_diagonal(&vec![h * h; n]),
    })
}

impl LocalElement {
    pub fn n_dofs(&self) -> usize {
        self.layout.len()
    }

    /// `(σ_P, τ_P)`.
    pub fn stabilization_scales(&self, mode: StabilizationMode) -> (f64, f64) {
        match mode {
            StabilizationMode::DofIdentity => (1.0, 1.0),
            StabilizationMode::MeanEigenvalue => {
                let n = self.n_dofs() as f64;
                let trace = |m: &SymmetricMatrix| m.diagonal().iter().sum::<f64>();
                let h2 = self.diameter * self.diameter;
                (trace(&self.a1_local) / n, trace(&self.b1_local) / (h2 * n))
            }
        }
    }

    /// Stabilizations acting on the projection remainder:
    /// `σ_P (I − DΠ∇)ᵀ S_a (I − DΠ∇)` and `τ_P (I − DΠ⁰)ᵀ S_b (I − DΠ⁰)`.
    pub fn stabilization(&self, mode: StabilizationMode) -> (SymmetricMatrix, SymmetricMatrix) {
        let (sigma, tau) = self.stabilization_scales(mode);
        let compose = |pi: &Mat<f64>, s: &SymmetricMatrix, scale: f64| {
            let n = self.n_dofs();
            let remainder = Mat::<f64>::identity(n, n) - &self.dof_matrix * pi;
            let m = remainder.transpose() * s.as_mat() * &remainder * faer::Scale(scale);
            SymmetricMatrix::symmetrized(m.as_ref())
        };
        (compose(&self.pi_nabla, &self.sa_local, sigma), compose(&self.pi_zero, &self.sb_local, tau))
    }
}
