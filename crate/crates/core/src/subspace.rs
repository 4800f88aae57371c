//! Subspaces of a fixed coordinate space, represented by spanning columns.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::{columns_to_matrix, Reduction, SparseMatrix, SparseVec};

#[derive(Debug, Clone)]
pub struct Subspace {
    pub field: Field,
    /// Dimension of the surrounding coordinate space.
    pub ambient: usize,
    /// Spanning vectors; not required to be independent on input, but
    /// constructors prune to an independent set.
    pub basis: Vec<SparseVec>,
}

impl Subspace {
    pub fn full(field: Field, ambient: usize) -> Subspace {
        let basis = (0..ambient).map(|i| SparseVec::unit(i, &field)).collect();
        Subspace { field, ambient, basis }
    }

    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace { field, ambient, basis: Vec::new() }
    }

    /// Spanning set, pruned to a basis via reduction.
    pub fn spanned_by(field: Field, ambient: usize, vectors: &[SparseVec]) -> Subspace {
        let m = columns_to_matrix(field, ambient, vectors);
        let red = m.reduce();
        let basis = (0..vectors.len())
            .filter(|&j| !red.r[j].is_zero())
            .map(|j| vectors[j].clone())
            .collect();
        Subspace { field, ambient, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn reduction(&self) -> Reduction {
        columns_to_matrix(self.field, self.ambient, &self.basis).reduce()
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduction().contains(v)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        let red = self.reduction();
        other.basis.iter().all(|v| red.contains(v))
    }

    pub fn equals(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other)
    }

    /// Intersection via the kernel of [A | -B]: a kernel vector (x, y) gives
    /// the common element A x = B y.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        let field = self.field;
        let a = columns_to_matrix(field, self.ambient, &self.basis);
        let b = columns_to_matrix(field, self.ambient, &other.basis);
        let stacked = a.hstack(&b.scaled(&field.from_i64(-1)));
        let mut vectors = Vec::new();
        for k in stacked.kernel() {
            let mut x = SparseVec::new();
            for (j, c) in k.iter() {
                if j < self.basis.len() {
                    x.add_scaled(&field, c, &self.basis[j]);
                }
            }
            if !x.is_zero() {
                vectors.push(x);
            }
        }
        Subspace::spanned_by(field, self.ambient, &vectors)
    }

    /// Image of this subspace under a linear map out of the ambient space.
    pub fn map_forward(&self, m: &SparseMatrix) -> Subspace {
        assert_eq!(m.ncols(), self.ambient, "map domain mismatch");
        let images: Vec<SparseVec> = self.basis.iter().map(|v| m.apply(v)).collect();
        Subspace::spanned_by(self.field, m.rows, &images)
    }

    /// Preimage of this subspace under m: { x : m x in self }.
    pub fn preimage(&self, m: &SparseMatrix) -> Subspace {
        assert_eq!(m.rows, self.ambient, "map codomain mismatch");
        let field = self.field;
        // Kernel of [m | -basis] projected to the first block.
        let b = columns_to_matrix(field, self.ambient, &self.basis);
        let stacked = m.hstack(&b.scaled(&field.from_i64(-1)));
        let mut vectors = Vec::new();
        for k in stacked.kernel() {
            let mut x = SparseVec::new();
            for (j, c) in k.iter() {
                if j < m.ncols() {
                    x.set(&field, j, c.clone());
                }
            }
            if !x.is_zero() {
                vectors.push(x);
            }
        }
        Subspace::spanned_by(field, m.ncols(), &vectors)
    }

    /// Expresses a linear map in the coordinates of chosen bases: given
    /// `m` acting on ambient coordinates, with `self` a domain subspace
    /// carried into the subspace `target`, returns the matrix of the
    /// restriction with respect to the two bases.
    pub fn restrict_map(&self, m: &SparseMatrix, target: &Subspace) -> Result<SparseMatrix> {
        assert_eq!(m.ncols(), self.ambient, "map domain mismatch");
        assert_eq!(m.rows, target.ambient, "map codomain mismatch");
        let red = target.reduction();
        let mut out = SparseMatrix::zero(self.field, target.dim(), self.dim());
        for (j, v) in self.basis.iter().enumerate() {
            let img = m.apply(v);
            let coords = red.solve(&img).map_err(|_| {
                Error::pre("restriction does not land in the target subspace".to_string())
            })?;
            out.cols[j] = coords;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;

    fn vec_of(entries: &[(usize, i64)]) -> SparseVec {
        SparseVec::from_entries(&Field::Q, entries.iter().map(|&(i, v)| (i, rat(v, 1))))
    }

    #[test]
    fn intersection_of_planes_in_three_space() {
        // span{e0, e1} intersect span{e1, e2} = span{e1}.
        let a = Subspace::spanned_by(Field::Q, 3, &[vec_of(&[(0, 1)]), vec_of(&[(1, 1)])]);
        let b = Subspace::spanned_by(Field::Q, 3, &[vec_of(&[(1, 1)]), vec_of(&[(2, 1)])]);
        let c = a.intersect(&b);
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&vec_of(&[(1, 1)])));
        assert!(!c.contains(&vec_of(&[(0, 1)])));
    }

    #[test]
    fn spanning_set_gets_pruned() {
        let s = Subspace::spanned_by(
            Field::Q,
            2,
            &[vec_of(&[(0, 1), (1, 1)]), vec_of(&[(0, 2), (1, 2)]), vec_of(&[(0, 1)])],
        );
        assert_eq!(s.dim(), 2);
        assert!(s.equals(&Subspace::full(Field::Q, 2)));
    }

    #[test]
    fn preimage_of_line() {
        // m: Q^2 -> Q^2, (x, y) -> (x, 0); preimage of span{e1} is kernel = span{e1}.
        let m = SparseMatrix::from_triples(Field::Q, 2, 2, &[(0, 0, 1)]);
        let line = Subspace::spanned_by(Field::Q, 2, &[vec_of(&[(1, 1)])]);
        let pre = line.preimage(&m);
        assert_eq!(pre.dim(), 1);
        assert!(pre.contains(&vec_of(&[(1, 1)])));
    }

    #[test]
    fn restriction_matrix_in_given_bases() {
        // m doubles e0, sends e1 to e0.
        let m = SparseMatrix::from_triples(Field::Q, 2, 2, &[(0, 0, 2), (0, 1, 1)]);
        let dom = Subspace::full(Field::Q, 2);
        let tgt = Subspace::spanned_by(Field::Q, 2, &[vec_of(&[(0, 1)])]);
        // e1 maps into span{e0}: restriction of m to dom -> tgt fails since
        // m(e0 + e1) has no e1 component but m(e0)=2e0 is fine; the full
        // domain maps into tgt here because m kills all e1 components.
        let r = dom.restrict_map(&m, &tgt).unwrap();
        assert_eq!(r.get(0, 0), rat(2, 1));
        assert_eq!(r.get(0, 1), rat(1, 1));
    }
}
