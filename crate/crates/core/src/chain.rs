//! Chain complexes over a field, simplicial boundary matrices, Betti
//! numbers, and homology bases with class-coordinate projection.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::{columns_to_matrix, Reduction, SparseMatrix, SparseVec};
use crate::simplicial::{simplex_label, SimplicialComplex};

#[derive(Debug, Clone)]
pub struct ChainComplex {
    pub field: Field,
    pub dims: Vec<usize>,
    pub labels: Vec<Vec<String>>,
    /// differentials[p]: C_p -> C_{p-1}; the entry at p = 0 maps into the
    /// zero space (0 rows).
    pub differentials: Vec<SparseMatrix>,
}

impl ChainComplex {
    pub fn top_degree(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    pub fn dim(&self, p: usize) -> usize {
        self.dims.get(p).copied().unwrap_or(0)
    }

    /// Boundary map C_p -> C_{p-1}; a fresh zero matrix outside the range.
    pub fn boundary(&self, p: usize) -> SparseMatrix {
        match self.differentials.get(p) {
            Some(m) => m.clone(),
            None => {
                let rows = if p == 0 { 0 } else { self.dim(p - 1) };
                SparseMatrix::zero(self.field, rows, self.dim(p))
            }
        }
    }

    /// Coboundary on degree-p cochains, the transpose of the boundary
    /// C_{p+1} -> C_p.
    pub fn coboundary(&self, p: usize) -> SparseMatrix {
        self.boundary(p + 1).transpose()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Checks d . d = 0 in every degree.
    pub fn verify_dd(&self) -> Result<()> {
        for p in 1..=self.top_degree() {
            let dd = self.boundary(p).compose(&self.boundary(p + 1));
            if !dd.is_zero() {
                return Err(Error::internal(format!(
                    "boundary squared is nonzero between degrees {} and {}",
                    p + 1,
                    p - 1
                )));
            }
        }
        Ok(())
    }

    pub fn betti(&self, p: usize) -> usize {
        if self.dim(p) == 0 {
            return 0;
        }
        let ker = self.dim(p) - self.boundary(p).rank();
        let img = self.boundary(p + 1).rank();
        ker - img
    }

    pub fn betti_vector(&self) -> Vec<usize> {
        (0..self.dims.len()).map(|p| self.betti(p)).collect()
    }

    pub fn cohomology_betti(&self, p: usize) -> usize {
        if self.dim(p) == 0 {
            return 0;
        }
        let ker = self.dim(p) - self.coboundary(p).rank();
        let img = if p == 0 { 0 } else { self.coboundary(p - 1).rank() };
        ker - img
    }
}

/// Simplicial chain complex with standard alternating-sign boundaries.
///
/// With `reduced` set, degree zero is replaced by the kernel of the
/// augmentation: the basis vectors are v - v0 for each vertex v other than
/// the first, so homology in degree zero is reduced homology. The boundary
/// of an edge keeps the same coefficients with the v0 coordinate dropped.
pub fn chain_complex(k: &SimplicialComplex, field: Field, reduced: bool) -> ChainComplex {
    let top = match k.dim() {
        Some(d) => d,
        None => {
            return ChainComplex {
                field,
                dims: Vec::new(),
                labels: Vec::new(),
                differentials: Vec::new(),
            }
        }
    };
    let mut dims = Vec::with_capacity(top + 1);
    let mut labels = Vec::with_capacity(top + 1);
    for p in 0..=top {
        let simplices = k.simplices(p);
        if p == 0 && reduced {
            dims.push(simplices.len().saturating_sub(1));
            labels.push(
                simplices
                    .iter()
                    .skip(1)
                    .map(|s| format!("{}-{}", simplex_label(s), simplex_label(&k.simplices(0)[0])))
                    .collect(),
            );
        } else {
            dims.push(simplices.len());
            labels.push(simplices.iter().map(|s| simplex_label(s)).collect());
        }
    }
    let mut differentials = Vec::with_capacity(top + 1);
    differentials.push(SparseMatrix::zero(field, 0, dims[0]));
    for p in 1..=top {
        let mut d = SparseMatrix::zero(field, dims[p - 1], dims[p]);
        for (j, s) in k.simplices(p).iter().enumerate() {
            for drop in 0..s.len() {
                let mut face = s.clone();
                face.remove(drop);
                let i = k.simplex_index(&face).expect("complex is face-closed");
                let sign = field.sign(drop as i64);
                if p == 1 && reduced {
                    if i == 0 {
                        continue;
                    }
                    let cur = d.get(i - 1, j);
                    d.set(i - 1, j, field.add(&cur, &sign));
                } else {
                    let cur = d.get(i, j);
                    d.set(i, j, field.add(&cur, &sign));
                }
            }
        }
        differentials.push(d);
    }
    ChainComplex { field, dims, labels, differentials }
}

pub fn betti(k: &SimplicialComplex, field: Field, p: usize) -> usize {
    chain_complex(k, field, false).betti(p)
}

/// A basis of H = ker(d_out) / im(d_in) with cycle representatives and exact
/// projection of cycles to class coordinates.
#[derive(Debug, Clone)]
pub struct HomologyBasis {
    pub field: Field,
    pub ambient: usize,
    pub reps: Vec<SparseVec>,
    n_img: usize,
    solver: Reduction,
}

impl HomologyBasis {
    /// d_out: C -> C', d_in: C'' -> C with d_out . d_in = 0.
    pub fn of_pair(field: Field, d_out: &SparseMatrix, d_in: &SparseMatrix) -> HomologyBasis {
        assert_eq!(d_out.ncols(), d_in.rows, "middle dimension mismatch");
        let ambient = d_out.ncols();
        let red_out = d_out.reduce();
        let red_in = d_in.reduce();
        let image: Vec<SparseVec> = red_in.image();
        let img_lows: std::collections::BTreeSet<usize> =
            image.iter().map(|c| c.low().expect("nonzero")).collect();
        // Kernel columns of the outgoing reduction have low j at the diagonal;
        // those whose index is matched by an image low are homologous to
        // boundaries and are skipped.
        let mut reps = Vec::new();
        for (j, (r, v)) in red_out.r.iter().zip(&red_out.v).enumerate() {
            if r.is_zero() && !img_lows.contains(&j) {
                reps.push(v.clone());
            }
        }
        let mut span = image.clone();
        span.extend(reps.iter().cloned());
        let solver = columns_to_matrix(field, ambient, &span).reduce();
        debug_assert_eq!(solver.rank(), span.len(), "image + reps not independent");
        HomologyBasis { field, ambient, reps, n_img: image.len(), solver }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// A vector is a cycle exactly when it lies in the span of the image
    /// basis and the representatives.
    pub fn is_cycle(&self, z: &SparseVec) -> bool {
        self.solver.contains(z)
    }

    /// Coordinates of the class of a cycle in the representative basis.
    pub fn class_coords(&self, z: &SparseVec) -> Result<SparseVec> {
        let x = self
            .solver
            .solve(z)
            .map_err(|_| Error::pre("vector is not a cycle".to_string()))?;
        let mut out = SparseVec::new();
        for (j, c) in x.iter() {
            if j >= self.n_img {
                out.set(&self.field, j - self.n_img, c.clone());
            }
        }
        Ok(out)
    }

    pub fn is_boundary(&self, z: &SparseVec) -> Result<bool> {
        Ok(self.class_coords(z)?.is_zero())
    }

    /// The cycle Sum coords_i . reps_i.
    pub fn from_coords(&self, coords: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, c) in coords.iter() {
            out.add_scaled(&self.field, c, &self.reps[i]);
        }
        out
    }
}

pub fn homology_basis(cx: &ChainComplex, p: usize) -> HomologyBasis {
    HomologyBasis::of_pair(cx.field, &cx.boundary(p), &cx.boundary(p + 1))
}

pub fn cohomology_basis(cx: &ChainComplex, p: usize) -> HomologyBasis {
    let d_in = if p == 0 {
        SparseMatrix::zero(cx.field, cx.dim(0), 0)
    } else {
        cx.coboundary(p - 1)
    };
    HomologyBasis::of_pair(cx.field, &cx.coboundary(p), &d_in)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::parse_complex;

    fn torus() -> SimplicialComplex {
        let mut text = String::new();
        for i in 0..7u32 {
            text += &format!("{} {} {}\n", i, (i + 1) % 7, (i + 3) % 7);
            text += &format!("{} {} {}\n", i, (i + 2) % 7, (i + 3) % 7);
        }
        parse_complex(&text).unwrap()
    }

    #[test]
    fn triangle_boundary_is_a_circle() {
        let k = parse_complex("0 1\n1 2\n0 2\n").unwrap();
        let cx = chain_complex(&k, Field::Q, false);
        cx.verify_dd().unwrap();
        assert_eq!(cx.betti_vector(), vec![1, 1]);
    }

    #[test]
    fn reduced_chain_complex_of_an_edge_is_acyclic() {
        let k = parse_complex("0 1\n").unwrap();
        let cx = chain_complex(&k, Field::Q, true);
        cx.verify_dd().unwrap();
        assert_eq!(cx.betti_vector(), vec![0, 0]);
    }

    #[test]
    fn torus_betti_over_gf2_and_q() {
        let k = torus();
        let gf2 = chain_complex(&k, Field::gf(2).unwrap(), false);
        gf2.verify_dd().unwrap();
        assert_eq!(gf2.betti_vector(), vec![1, 2, 1]);
        let q = chain_complex(&k, Field::Q, false);
        assert_eq!(q.betti_vector(), vec![1, 2, 1]);
        // Euler characteristic agrees with the alternating Betti sum.
        assert_eq!(k.euler_characteristic(), 1 - 2 + 1);
    }

    #[test]
    fn wedge_model_matches_torus_homology() {
        // Tetrahedron boundary (S^2) wedged with two triangle boundaries at vertex 0.
        let text = "0 3 4\n0 3 5\n0 4 5\n3 4 5\n0 1\n1 2\n0 2\n0 6\n6 7\n0 7\n";
        let k = parse_complex(text).unwrap();
        let cx = chain_complex(&k, Field::gf(2).unwrap(), false);
        assert_eq!(cx.betti_vector(), vec![1, 2, 1]);
    }

    #[test]
    fn homology_basis_projects_classes() {
        let k = parse_complex("0 1\n1 2\n0 2\n").unwrap();
        let cx = chain_complex(&k, Field::Q, false);
        let h1 = homology_basis(&cx, 1);
        assert_eq!(h1.dim(), 1);
        let z = &h1.reps[0];
        let coords = h1.class_coords(z).unwrap();
        assert_eq!(coords.get(0).cloned(), Some(Field::Q.one()));
        // Twice the cycle has coordinate 2.
        let mut z2 = z.clone();
        z2.scale(&Field::Q, &Field::Q.from_i64(2));
        assert_eq!(h1.class_coords(&z2).unwrap().get(0).cloned(), Some(Field::Q.from_i64(2)));
    }

    #[test]
    fn boundaries_have_zero_class() {
        let k = parse_complex("0 1 2\n").unwrap();
        let cx = chain_complex(&k, Field::Q, false);
        let h1 = homology_basis(&cx, 1);
        assert_eq!(h1.dim(), 0);
        let b = cx.boundary(2).apply(&SparseVec::unit(0, &Field::Q));
        assert!(h1.is_boundary(&b).unwrap());
    }

    #[test]
    fn cohomology_matches_homology_dimensions() {
        let k = torus();
        for field in [Field::Q, Field::gf(2).unwrap(), Field::gf(7).unwrap()] {
            let cx = chain_complex(&k, field, false);
            for p in 0..=2 {
                assert_eq!(cx.betti(p), cx.cohomology_betti(p), "degree {p}");
                assert_eq!(cohomology_basis(&cx, p).dim(), cx.betti(p));
            }
        }
    }
}
