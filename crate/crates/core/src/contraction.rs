//! Contractions (strong deformation retracts) of a chain complex onto its
//! homology: projection pi, inclusion iota, and a homotopy phi with
//! phi d + d phi = iota pi - id and the side conditions
//! pi iota = id, pi phi = 0, phi iota = 0, phi phi = 0.
//!
//! The construction reduces each boundary matrix once and partitions the
//! standard basis indices of every degree into three groups with pairwise
//! distinct leading indices: boundary columns (from the reduced incoming
//! differential), homology representatives, and complement columns mapped
//! isomorphically onto boundaries below. Expressing a vector in this adapted
//! basis is a triangular elimination, so pi and phi apply lazily without any
//! matrix inversion; materialized matrices are read off by applying to unit
//! vectors.

use crate::chain::ChainComplex;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{Deg, GradedDims, GradedMap};
use crate::matrix::{SparseMatrix, SparseVec};

#[derive(Debug, Clone)]
pub struct Contraction {
    /// The complex being contracted.
    pub big: ChainComplex,
    /// Its homology, as a complex with zero differential.
    pub small: ChainComplex,
    pub proj: GradedMap,
    pub incl: GradedMap,
    pub htpy: GradedMap,
}

/// Which adapted-basis member eliminates a given leading index.
#[derive(Debug, Clone)]
enum Owner {
    /// Boundary: column k of the reduced incoming differential; carries the
    /// preimage column under d so phi can invert.
    Boundary { column: SparseVec, preimage: SparseVec },
    /// Homology representative number `pos`.
    Homology { column: SparseVec, pos: usize },
    /// Complement of the kernel; phi and pi both vanish here.
    Complement { column: SparseVec },
}

/// One degree of the adapted-basis data: a full partition of the row indices
/// by owner, usable for triangular elimination.
struct DegreeData {
    owners: Vec<Option<Owner>>,
    h_dim: usize,
}

/// Lazy contraction machinery over a chain complex.
pub struct HomologyReduction {
    pub field: Field,
    pub complex: ChainComplex,
    degrees: Vec<DegreeData>,
}

impl HomologyReduction {
    pub fn new(complex: ChainComplex) -> HomologyReduction {
        let field = complex.field;
        let top = complex.dims.len();
        let mut reductions = Vec::with_capacity(top);
        for p in 0..top {
            reductions.push(complex.boundary(p).reduce());
        }
        let mut degrees = Vec::with_capacity(top);
        for p in 0..top {
            let n = complex.dim(p);
            let mut owners: Vec<Option<Owner>> = vec![None; n];
            // Incoming boundaries: nonzero reduced columns of d_{p+1}.
            if p + 1 < top {
                let red_in = &reductions[p + 1];
                for (k, r) in red_in.r.iter().enumerate() {
                    if let Some(low) = r.low() {
                        owners[low] = Some(Owner::Boundary {
                            column: r.clone(),
                            preimage: red_in.v[k].clone(),
                        });
                    }
                }
            }
            // Kernel columns of d_p not claimed by a boundary give homology
            // representatives; nonzero columns give the complement.
            let red_out = &reductions[p];
            let mut h_dim = 0;
            for (j, r) in red_out.r.iter().enumerate() {
                if r.is_zero() {
                    if owners[j].is_none() {
                        owners[j] = Some(Owner::Homology {
                            column: red_out.v[j].clone(),
                            pos: h_dim,
                        });
                        h_dim += 1;
                    }
                } else {
                    // A nonzero kernel-test column whose index is also the
                    // leading index of an incoming boundary would contradict
                    // d d = 0; reaching this on a non-complex is a usage bug.
                    assert!(owners[j].is_none(), "pairing clash at degree {p} index {j}");
                    owners[j] = Some(Owner::Complement { column: red_out.v[j].clone() });
                }
            }
            debug_assert!(
                owners.iter().all(|o| o.is_some()),
                "adapted basis does not cover degree {p}"
            );
            degrees.push(DegreeData { owners, h_dim });
        }
        HomologyReduction { field, complex, degrees }
    }

    pub fn h_dims(&self) -> GradedDims {
        GradedDims(self.degrees.iter().map(|d| d.h_dim).collect())
    }

    /// Expresses v in the adapted basis of degree p and hands each
    /// (owner, coefficient) pair to the sink.
    fn eliminate(
        &self,
        p: usize,
        v: &SparseVec,
        mut sink: impl FnMut(&Owner, &crate::field::Scalar),
    ) {
        let field = self.field;
        let data = &self.degrees[p];
        let mut residue = v.clone();
        while let Some(low) = residue.low() {
            let owner = data.owners[low].as_ref().expect("full partition");
            let column = match owner {
                Owner::Boundary { column, .. } => column,
                Owner::Homology { column, .. } => column,
                Owner::Complement { column } => column,
            };
            let c = {
                let num = residue.get(low).unwrap().clone();
                let den = column.get(low).unwrap().clone();
                field.div(&num, &den)
            };
            sink(owner, &c);
            residue.add_scaled(&field, &field.neg(&c), column);
        }
    }

    /// Homology coordinates of a degree-p vector.
    pub fn project(&self, p: usize, v: &SparseVec) -> SparseVec {
        let field = self.field;
        let mut out = SparseVec::new();
        self.eliminate(p, v, |owner, c| {
            if let Owner::Homology { pos, .. } = owner {
                let cur = match out.get(*pos) {
                    Some(x) => field.add(x, c),
                    None => c.clone(),
                };
                out.set(&field, *pos, cur);
            }
        });
        out
    }

    /// The chosen cycle representative of homology coordinates in degree p.
    pub fn include(&self, p: usize, h: &SparseVec) -> SparseVec {
        let field = self.field;
        let mut out = SparseVec::new();
        let data = &self.degrees[p];
        let mut reps: Vec<Option<&SparseVec>> = vec![None; data.h_dim];
        for owner in data.owners.iter().flatten() {
            if let Owner::Homology { column, pos } = owner {
                reps[*pos] = Some(column);
            }
        }
        for (i, c) in h.iter() {
            out.add_scaled(&field, c, reps[i].expect("homology position"));
        }
        out
    }

    /// The homotopy: phi inverts d on the boundary part and vanishes on the
    /// homology and complement parts. The sign makes
    /// phi d + d phi = iota pi - id hold.
    pub fn homotopy(&self, p: usize, v: &SparseVec) -> SparseVec {
        let field = self.field;
        let mut out = SparseVec::new();
        self.eliminate(p, v, |owner, c| {
            if let Owner::Boundary { preimage, .. } = owner {
                out.add_scaled(&field, &field.neg(c), preimage);
            }
        });
        out
    }

    /// Materializes the contraction as per-degree matrices.
    pub fn contraction(&self) -> Contraction {
        let field = self.field;
        let h = self.h_dims();
        let small = ChainComplex {
            field,
            dims: h.0.clone(),
            labels: h
                .0
                .iter()
                .enumerate()
                .map(|(p, &n)| (0..n).map(|i| format!("h{p}_{i}")).collect())
                .collect(),
            differentials: h
                .0
                .iter()
                .enumerate()
                .map(|(p, &n)| {
                    let rows = if p == 0 { 0 } else { h.0[p - 1] };
                    SparseMatrix::zero(field, rows, n)
                })
                .collect(),
        };
        let mut proj = GradedMap::zero(field, 0);
        let mut incl = GradedMap::zero(field, 0);
        let mut htpy = GradedMap::zero(field, 1);
        for p in 0..self.complex.dims.len() {
            let n = self.complex.dim(p);
            let hd = self.degrees[p].h_dim;
            let mut pm = SparseMatrix::zero(field, hd, n);
            let mut hm = SparseMatrix::zero(field, self.complex.dim(p + 1), n);
            for j in 0..n {
                let e = SparseVec::unit(j, &field);
                pm.cols[j] = self.project(p, &e);
                hm.cols[j] = self.homotopy(p, &e);
            }
            let mut im = SparseMatrix::zero(field, n, hd);
            for i in 0..hd {
                im.cols[i] = self.include(p, &SparseVec::unit(i, &field));
            }
            proj.blocks.insert(p as Deg, pm);
            incl.blocks.insert(p as Deg, im);
            htpy.blocks.insert(p as Deg, hm);
        }
        Contraction { big: self.complex.clone(), small, proj, incl, htpy }
    }
}

pub fn homology_contraction(cx: &ChainComplex) -> Contraction {
    HomologyReduction::new(cx.clone()).contraction()
}

/// Checks the five side conditions as exact matrix identities and reports
/// every violated block.
pub fn verify_contraction(c: &Contraction) -> Result<()> {
    let field = c.big.field;
    let big_dims = GradedDims(c.big.dims.clone());
    let small_dims = GradedDims(c.small.dims.clone());
    c.proj.validate(&big_dims, &small_dims)?;
    c.incl.validate(&small_dims, &big_dims)?;
    c.htpy.validate(&big_dims, &big_dims)?;
    let mut violations = Vec::new();
    // pi iota = id.
    let pi_iota = c.proj.compose(&c.incl);
    let id_small = GradedMap::identity(field, &small_dims);
    if !pi_iota.sub(&id_small, &small_dims, &small_dims).is_zero() {
        violations.push("pi iota = id".to_string());
    }
    if !c.proj.compose(&c.htpy).is_zero() {
        violations.push("pi phi = 0".to_string());
    }
    if !c.htpy.compose(&c.incl).is_zero() {
        violations.push("phi iota = 0".to_string());
    }
    if !c.htpy.compose(&c.htpy).is_zero() {
        violations.push("phi phi = 0".to_string());
    }
    // phi d + d phi = iota pi - id.
    let mut d = GradedMap::zero(field, -1);
    for p in 0..c.big.dims.len() {
        d.blocks.insert(p as Deg, c.big.boundary(p));
    }
    let lhs = {
        let phi_d = c.htpy.compose(&d);
        let d_phi = d.compose(&c.htpy);
        let mut sum = GradedMap::zero(field, 0);
        let degs: std::collections::BTreeSet<Deg> =
            phi_d.blocks.keys().chain(d_phi.blocks.keys()).copied().collect();
        for p in degs {
            let rows = big_dims.dim(p);
            let cols = big_dims.dim(p);
            let a = phi_d
                .blocks
                .get(&p)
                .cloned()
                .unwrap_or_else(|| SparseMatrix::zero(field, rows, cols));
            let b = d_phi
                .blocks
                .get(&p)
                .cloned()
                .unwrap_or_else(|| SparseMatrix::zero(field, rows, cols));
            sum.blocks.insert(p, a.add(&b));
        }
        sum
    };
    let rhs = {
        let iota_pi = c.incl.compose(&c.proj);
        let id_big = GradedMap::identity(field, &big_dims);
        iota_pi.sub(&id_big, &big_dims, &big_dims)
    };
    if !lhs.sub(&rhs, &big_dims, &big_dims).is_zero() {
        violations.push("phi d + d phi = iota pi - id".to_string());
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::internal(format!(
            "contraction side conditions violated: {}",
            violations.join(", ")
        )))
    }
}
