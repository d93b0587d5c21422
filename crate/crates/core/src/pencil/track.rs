use faer::Mat;

/// Overlap below which two modes at neighbouring grid points are never linked.
pub const DEFAULT_MIN_OVERLAP: f64 = 0.5;

/// A branch followed across consecutive grid points: grid point `start + j`
/// contributes its eigenvalue number `indices[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrackedCurve {
    pub start: usize,
    pub indices: Vec<usize>,
}

impl TrackedCurve {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// `(grid index, eigenvalue index)` pairs.
    pub fn points(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.indices.iter().enumerate().map(move |(j, &e)| (self.start + j, e))
    }
}

/// Links eigenpairs at neighbouring grid points by the overlap of their
/// modes, greedily taking the largest `|⟨u, v⟩|` first.
///
/// `modes[i]` holds unit modes for grid point `i` as columns; a point with no
/// columns (for instance a failed solve) ends every curve. Curves are returned
/// ordered by start point, then by eigenvalue index.
pub fn track_modes(modes: &[Mat<f64>], min_overlap: f64) -> Vec<TrackedCurve> {
    let mut curves: Vec<TrackedCurve> = Vec::new();
    let Some(first) = modes.first() else { return curves };
    let mut open: Vec<usize> = (0..first.ncols()).collect();
    curves.extend((0..first.ncols()).map(|e| TrackedCurve { start: 0, indices: vec![e] }));

    for (i, pair) in modes.windows(2).enumerate() {
        let (prev, next) = (&pair[0], &pair[1]);
        let mut link: Vec<Option<usize>> = vec![None; next.ncols()];
        if prev.ncols() > 0 && next.ncols() > 0 && prev.nrows() == next.nrows() {
            let overlap = prev.transpose() * next;
            let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
            for r in 0..overlap.nrows() {
                for c in 0..overlap.ncols() {
                    let o = overlap[(r, c)].abs();
                    if o >= min_overlap {
                        candidates.push((o, r, c));
                    }
                }
            }
            candidates.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
            let mut used = vec![false; prev.ncols()];
            for (_, r, c) in candidates {
                if !used[r] && link[c].is_none() {
                    used[r] = true;
                    link[c] = Some(open[r]);
                }
            }
        }
        let mut next_open = Vec::with_capacity(next.ncols());
        for (c, l) in link.into_iter().enumerate() {
            let id = match l {
                Some(id) => {
                    curves[id].indices.push(c);
                    id
                }
                None => {
                    curves.push(TrackedCurve { start: i + 1, indices: vec![c] });
                    curves.len() - 1
                }
            };
            next_open.push(id);
        }
        open = next_open;
    }
    curves
}
