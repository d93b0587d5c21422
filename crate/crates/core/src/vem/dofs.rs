use super::basis::dim;

/// What a local degree of freedom measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DofKind {
    /// Value at local vertex `vertex`.
    Vertex { vertex: usize },
    /// `(1/|e|) ∫_e v t^order` on local edge `edge`, with `t` the
    /// midpoint-centred, length-scaled coordinate running from the edge's
    /// lower global vertex to its higher one.
    EdgeMoment { edge: usize, order: usize },
    /// `(1/|P|) ∫_P v m_index` against the scaled monomial `m_index` of degree ≤ k − 2.
    InternalMoment { index: usize },
}

/// Local DoF ordering: vertices, then edges with moments innermost, then
/// internal moments.
#[derive(Clone, Debug, PartialEq)]
pub struct DofLayout {
    pub k: usize,
    pub n_vertex: usize,
    pub n_edge: usize,
    pub n_internal: usize,
    pub descriptors: Vec<DofKind>,
}

impl DofLayout {
    pub fn new(k: usize, n_vertices: usize) -> Self {
        let per_edge = k.saturating_sub(1);
        let n_internal = if k >= 2 { dim(k - 2) } else { 0 };
        let mut descriptors = Vec::with_capacity(n_vertices * (1 + per_edge) + n_internal);
        descriptors.extend((0..n_vertices).map(|vertex| DofKind::Vertex { vertex }));
        for edge in 0..n_vertices {
            descriptors.extend((0..per_edge).map(|order| DofKind::EdgeMoment { edge, order }));
        }
        descriptors.extend((0..n_internal).map(|index| DofKind::InternalMoment { index }));
        Self { k, n_vertex: n_vertices, n_edge: n_vertices * per_edge, n_internal, descriptors }
    }

    pub fn len(&self) -> usize {
        self.n_vertex + self.n_edge + self.n_internal
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn vertex(&self, v: usize) -> usize {
        v
    }

    pub fn edge_moment(&self, edge: usize, order: usize) -> usize {
        self.n_vertex + edge * (self.k - 1) + order
    }

    pub fn internal(&self, index: usize) -> usize {
        self.n_vertex + self.n_edge + index
    }
}
