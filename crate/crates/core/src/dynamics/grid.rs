use alloc::vec;
use alloc::vec::Vec;

use crate::ga::Multivector;
use crate::hamiltonian::SpacetimeSplit;
use crate::{Error, Result};

/// Uniform Cartesian grid over a spacetime box holding `N` field values per
/// node and, once recovered, a grade-`D` momentum per node.
///
/// Nodes are numbered with axis 0 varying fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldGrid {
    split: SpacetimeSplit,
    lo: Vec<f64>,
    hi: Vec<f64>,
    cells: Vec<usize>,
    strides: Vec<usize>,
    phi: Vec<f64>,
    momentum: Option<Vec<Multivector>>,
}

impl FieldGrid {
    /// Zero field on `[lo, hi]` with `cells[k]` cells along axis `k`.
    pub fn new(split: SpacetimeSplit, lo: &[f64], hi: &[f64], cells: &[usize]) -> Result<Self> {
        let d = split.spacetime_dim();
        for len in [lo.len(), hi.len(), cells.len()] {
            if len != d {
                return Err(Error::LengthMismatch { expected: d, got: len });
            }
        }
        if cells.iter().any(|&c| c < 2) {
            return Err(Error::Invalid("grid needs at least two cells per axis"));
        }
        if lo.iter().zip(hi).any(|(a, b)| !(b > a) || !a.is_finite() || !b.is_finite()) {
            return Err(Error::Invalid("grid box must have hi > lo on every axis"));
        }
        let mut strides = Vec::with_capacity(d);
        let mut n = 1;
        for &c in cells {
            strides.push(n);
            n *= c + 1;
        }
        Ok(Self {
            split,
            lo: lo.to_vec(),
            hi: hi.to_vec(),
            cells: cells.to_vec(),
            strides,
            phi: vec![0.0; n * split.field_dim()],
            momentum: None,
        })
    }

    /// Unit box `[0,1]^D` with `cells` cells per axis.
    pub fn unit(split: SpacetimeSplit, cells: usize) -> Result<Self> {
        let d = split.spacetime_dim();
        Self::new(split, &vec![0.0; d], &vec![1.0; d], &vec![cells; d])
    }

    pub fn split(&self) -> &SpacetimeSplit {
        &self.split
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn field_dim(&self) -> usize {
        self.split.field_dim()
    }

    pub fn spacetime_dim(&self) -> usize {
        self.split.spacetime_dim()
    }

    pub fn node_count(&self) -> usize {
        self.phi.len() / self.field_dim()
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.strides[axis]
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        (self.hi[axis] - self.lo[axis]) / self.cells[axis] as f64
    }

    pub fn max_spacing(&self) -> f64 {
        (0..self.spacetime_dim()).map(|k| self.spacing(k)).fold(0.0, f64::max)
    }

    /// Volume of one grid cell.
    pub fn cell_volume(&self) -> f64 {
        (0..self.spacetime_dim()).map(|k| self.spacing(k)).product()
    }

    pub fn multi_index(&self, node: usize) -> Vec<usize> {
        self.cells.iter().zip(&self.strides).map(|(c, s)| (node / s) % (c + 1)).collect()
    }

    pub fn index(&self, multi: &[usize]) -> usize {
        multi.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    /// Position along `axis` of a node.
    pub fn axis_index(&self, node: usize, axis: usize) -> usize {
        (node / self.strides[axis]) % (self.cells[axis] + 1)
    }

    pub fn coords(&self, node: usize) -> Vec<f64> {
        (0..self.spacetime_dim())
            .map(|k| self.lo[k] + self.axis_index(node, k) as f64 * self.spacing(k))
            .collect()
    }

    pub fn is_boundary(&self, node: usize) -> bool {
        (0..self.spacetime_dim()).any(|k| {
            let i = self.axis_index(node, k);
            i == 0 || i == self.cells[k]
        })
    }

    pub fn phi(&self, node: usize) -> &[f64] {
        let n = self.field_dim();
        &self.phi[node * n..(node + 1) * n]
    }

    pub fn set_phi(&mut self, node: usize, values: &[f64]) {
        let n = self.field_dim();
        self.phi[node * n..(node + 1) * n].copy_from_slice(&values[..n]);
        self.momentum = None;
    }

    pub(crate) fn phi_raw(&self) -> &[f64] {
        &self.phi
    }

    pub(crate) fn phi_raw_mut(&mut self) -> &mut [f64] {
        self.momentum = None;
        &mut self.phi
    }

    /// Sets every node to `f(x)`.
    pub fn fill(&mut self, f: impl Fn(&[f64]) -> Vec<f64>) {
        for i in 0..self.node_count() {
            let v = f(&self.coords(i));
            self.set_phi(i, &v);
        }
    }

    /// Sets boundary nodes to `f(x)`, leaving the interior untouched.
    pub fn set_boundary(&mut self, f: impl Fn(&[f64]) -> Vec<f64>) {
        for i in 0..self.node_count() {
            if self.is_boundary(i) {
                let v = f(&self.coords(i));
                self.set_phi(i, &v);
            }
        }
    }

    /// `q = x + Σ φ_a e_a` at a node.
    pub fn point(&self, node: usize) -> Multivector {
        self.split.point(&self.coords(node), self.phi(node))
    }

    /// `∂φ_a/∂x_k` at a node: central differences inside, second-order
    /// one-sided stencils on the boundary. Indexed `[a][k]`.
    pub fn gradient(&self, node: usize) -> Vec<Vec<f64>> {
        let n = self.field_dim();
        let d = self.spacetime_dim();
        let mut out = vec![vec![0.0; d]; n];
        for k in 0..d {
            let i = self.axis_index(node, k);
            let s = self.strides[k];
            let h = self.spacing(k);
            for (a, row) in out.iter_mut().enumerate() {
                let f = |m: usize| self.phi[m * n + a];
                row[k] = if i == 0 {
                    (-3.0 * f(node) + 4.0 * f(node + s) - f(node + 2 * s)) / (2.0 * h)
                } else if i == self.cells[k] {
                    (3.0 * f(node) - 4.0 * f(node - s) + f(node - 2 * s)) / (2.0 * h)
                } else {
                    (f(node + s) - f(node - s)) / (2.0 * h)
                };
            }
        }
        out
    }

    pub fn momentum(&self, node: usize) -> Option<&Multivector> {
        self.momentum.as_ref().map(|m| &m[node])
    }

    pub fn momenta(&self) -> Option<&[Multivector]> {
        self.momentum.as_deref()
    }

    pub(crate) fn set_momenta(&mut self, m: Vec<Multivector>) {
        self.momentum = Some(m);
    }

    pub fn interior_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.node_count()).filter(move |&i| !self.is_boundary(i))
    }

    /// Lowest corner node of every cell.
    pub fn cell_origins(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.node_count()).filter(move |&i| (0..self.spacetime_dim()).all(|k| self.axis_index(i, k) < self.cells[k]))
    }

    /// The `2^D` corner nodes of the cell with lowest corner `origin`.
    pub fn cell_corners(&self, origin: usize) -> Vec<usize> {
        let d = self.spacetime_dim();
        (0..1usize << d)
            .map(|mask| origin + (0..d).filter(|k| mask & (1 << k) != 0).map(|k| self.strides[k]).sum::<usize>())
            .collect()
    }

    /// Whether `[from[k], to[k]]` on each axis is a non-empty box of cells.
    pub fn contains_index_box(&self, from: &[usize], to: &[usize]) -> bool {
        from.len() == self.spacetime_dim()
            && to.len() == self.spacetime_dim()
            && (0..self.spacetime_dim()).all(|k| from[k] < to[k] && to[k] <= self.cells[k])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::Orientation;

    fn split(d: usize, n: usize) -> SpacetimeSplit {
        SpacetimeSplit::new(d, n, Orientation::Positive).unwrap()
    }

    #[test]
    fn indexing_round_trips() {
        let g = FieldGrid::new(split(3, 1), &[0.0, -1.0, 2.0], &[1.0, 1.0, 3.0], &[4, 5, 2]).unwrap();
        assert_eq!(g.node_count(), 5 * 6 * 3);
        for i in 0..g.node_count() {
            assert_eq!(g.index(&g.multi_index(i)), i);
        }
        assert_eq!(g.coords(g.index(&[4, 5, 2])), vec![1.0, 1.0, 3.0]);
        assert_eq!(g.interior_nodes().count(), 3 * 4 * 1);
        assert_eq!(g.cell_origins().count(), 4 * 5 * 2);
        assert_eq!(g.cell_corners(0).len(), 8);
    }

    #[test]
    fn gradients_are_exact_for_quadratics() {
        let mut g = FieldGrid::unit(split(2, 2), 4).unwrap();
        g.fill(|x| vec![x[0] * x[0] - 2.0 * x[0] * x[1], 3.0 * x[1]]);
        for i in 0..g.node_count() {
            let x = g.coords(i);
            let grad = g.gradient(i);
            assert!((grad[0][0] - (2.0 * x[0] - 2.0 * x[1])).abs() < 1e-12);
            assert!((grad[0][1] + 2.0 * x[0]).abs() < 1e-12);
            assert!((grad[1][1] - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_boxes() {
        assert!(FieldGrid::new(split(2, 1), &[0.0, 0.0], &[1.0, 0.0], &[4, 4]).is_err());
        assert!(FieldGrid::new(split(2, 1), &[0.0], &[1.0], &[4]).is_err());
        assert!(FieldGrid::unit(split(2, 1), 1).is_err());
    }
}
