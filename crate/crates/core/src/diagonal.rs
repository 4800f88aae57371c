//! The Alexander-Whitney diagonal, its reduced variant, and the simplicial
//! cup product.

use crate::chain::{chain_complex, cohomology_basis, ChainComplex};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{apply_span, op_lookup, Combo, Deg, OpMap, Word};
use crate::matrix::SparseVec;
use crate::simplicial::SimplicialComplex;

/// Alexander-Whitney diagonal on simplicial chains:
/// Delta(v0..vn) = sum_i (v0..vi) (x) (vi..vn). Sign-free.
pub fn aw_diagonal(k: &SimplicialComplex, field: Field) -> OpMap {
    let mut op = OpMap::new();
    let top = match k.dim() {
        Some(d) => d,
        None => return op,
    };
    for p in 0..=top {
        for (j, s) in k.simplices(p).iter().enumerate() {
            let mut img = Combo::zero();
            for cut in 0..=p {
                let front = &s[..=cut];
                let back = &s[cut..];
                let fi = k.simplex_index(front).expect("face-closed");
                let bi = k.simplex_index(back).expect("face-closed");
                img.add_term(
                    &field,
                    Word(vec![(cut as Deg, fi), ((p - cut) as Deg, bi)]),
                    field.one(),
                );
            }
            op.insert(Word::single(p as Deg, j), img);
        }
    }
    op
}

/// The diagonal induced on the augmentation-kernel model of reduced chains:
/// degree-zero basis vectors are v - v0 (v runs over the non-initial
/// vertices, index shifted down by one) and every degree-zero tensor factor
/// v in the Alexander-Whitney formula is replaced by v - v0.
pub fn reduced_aw_diagonal(k: &SimplicialComplex, field: Field) -> OpMap {
    let mut op = OpMap::new();
    let top = match k.dim() {
        Some(d) => d,
        None => return op,
    };
    // Reduces an AW tensor factor: degree-zero factors drop onto the reduced
    // basis (None for the base vertex), positive degrees pass through.
    let reduce_factor = |d: usize, i: usize| -> Option<(Deg, usize)> {
        if d == 0 {
            if i == 0 {
                None
            } else {
                Some((0, i - 1))
            }
        } else {
            Some((d as Deg, i))
        }
    };
    for p in 0..=top {
        let count = if p == 0 {
            k.n_simplices(0).saturating_sub(1)
        } else {
            k.n_simplices(p)
        };
        for jr in 0..count {
            // Index in the unreduced complex.
            let j = if p == 0 { jr + 1 } else { jr };
            let s = &k.simplices(p)[j];
            let mut img = Combo::zero();
            if p == 0 {
                // Delta(v - v0) = (v - v0) (x) (v - v0).
                img.add_term(&field, Word(vec![(0, jr), (0, jr)]), field.one());
            } else {
                for cut in 0..=p {
                    let front = &s[..=cut];
                    let back = &s[cut..];
                    let fi = k.simplex_index(front).expect("face-closed");
                    let bi = k.simplex_index(back).expect("face-closed");
                    let (Some(ff), Some(bb)) =
                        (reduce_factor(cut, fi), reduce_factor(p - cut, bi))
                    else {
                        continue;
                    };
                    img.add_term(&field, Word(vec![ff, bb]), field.one());
                }
            }
            if !img.is_zero() {
                op.insert(Word::single(p as Deg, jr), img);
            }
        }
    }
    op
}

/// Checks that `diag` is a coassociative chain-map comultiplication on `cx`
/// (degree 0): for every basis element, (Delta (x) 1) Delta = (1 (x) Delta)
/// Delta, and Delta d = (d (x) 1 + 1 (x) d) Delta with the Koszul sign.
pub fn verify_dgc_diagonal(cx: &ChainComplex, diag: &OpMap) -> Result<()> {
    let field = cx.field;
    let mut apply_diag = |fac: &[(Deg, usize)]| op_lookup(diag, fac);
    for p in 0..cx.dims.len() {
        for i in 0..cx.dim(p) {
            let x = Combo::of(Word::single(p as Deg, i), &field);
            let dx = apply_span(&field, &x, 0, 1, 0, &mut apply_diag);
            for (w, _) in &dx.terms {
                if w.total_degree() != p as Deg {
                    return Err(Error::pre(format!(
                        "diagonal is not degree zero on degree {p} index {i}"
                    )));
                }
            }
            // Coassociativity.
            let left = apply_span(&field, &dx, 0, 1, 0, &mut apply_diag);
            let right = apply_span(&field, &dx, 1, 1, 0, &mut apply_diag);
            let mut difference = left.clone();
            difference.add_scaled(&field, &right, &field.from_i64(-1));
            if !difference.is_zero() {
                return Err(Error::pre(format!(
                    "diagonal fails coassociativity on degree {p} index {i}"
                )));
            }
            // Chain map: Delta(d x) = (d (x) 1 + 1 (x) d)(Delta x).
            let mut apply_d = |fac: &[(Deg, usize)]| {
                let (d, j) = fac[0];
                let img = match cx.differentials.get(d as usize) {
                    Some(m) => m.cols[j].clone(),
                    None => SparseVec::new(),
                };
                let mut out = Combo::zero();
                for (r, c) in img.iter() {
                    out.add_term(&field, Word::single(d - 1, r), c.clone());
                }
                out
            };
            let lhs = {
                let dxx = apply_span(&field, &x, 0, 1, -1, &mut apply_d);
                apply_span(&field, &dxx, 0, 1, 0, &mut apply_diag)
            };
            let mut rhs = apply_span(&field, &dx, 0, 1, -1, &mut apply_d);
            rhs.add_scaled(&field, &apply_span(&field, &dx, 1, 1, -1, &mut apply_d), &field.one());
            let mut diff = lhs;
            diff.add_scaled(&field, &rhs, &field.from_i64(-1));
            if !diff.is_zero() {
                return Err(Error::pre(format!(
                    "diagonal is not a chain map on degree {p} index {i}"
                )));
            }
        }
    }
    Ok(())
}

/// Simplicial cup product of cochains of pure degrees p and q:
/// (a cup b)(v0..v_{p+q}) = a(v0..v_p) b(v_p..v_{p+q}).
pub fn cup_on_cochains(
    k: &SimplicialComplex,
    field: Field,
    p: usize,
    q: usize,
    a: &SparseVec,
    b: &SparseVec,
) -> SparseVec {
    let mut out = SparseVec::new();
    for (j, s) in k.simplices(p + q).iter().enumerate() {
        let front = &s[..=p];
        let back = &s[p..];
        let fi = k.simplex_index(front).expect("face-closed");
        let bi = k.simplex_index(back).expect("face-closed");
        let (Some(av), Some(bv)) = (a.get(fi), b.get(bi)) else { continue };
        out.set(&field, j, field.mul(av, bv));
    }
    out
}

/// The unit for the cup product: the 0-cochain taking value 1 on every vertex.
pub fn cochain_unit(k: &SimplicialComplex, field: Field) -> SparseVec {
    SparseVec::from_entries(&field, (0..k.n_simplices(0)).map(|i| (i, field.one())))
}

/// Rank of the pairing H^p (x) H^q -> H^{p+q} induced by the cup product.
pub fn cup_pairing_rank(k: &SimplicialComplex, field: Field, p: usize, q: usize) -> Result<usize> {
    let cx = chain_complex(k, field, false);
    let hp = cohomology_basis(&cx, p);
    let hq = cohomology_basis(&cx, q);
    let hpq = cohomology_basis(&cx, p + q);
    if hp.dim() == 0 || hq.dim() == 0 || hpq.dim() == 0 {
        return Ok(0);
    }
    let mut cols = Vec::with_capacity(hp.dim() * hq.dim());
    for a in &hp.reps {
        for b in &hq.reps {
            let ab = cup_on_cochains(k, field, p, q, a, b);
            cols.push(hpq.class_coords(&ab)?);
        }
    }
    let m = crate::matrix::columns_to_matrix(field, hpq.dim(), &cols);
    Ok(m.rank())
}

/// Coboundary of a degree-p cochain, for tests and bounding-cochain solves.
pub fn coboundary(cx: &ChainComplex, p: usize, a: &SparseVec) -> SparseVec {
    cx.coboundary(p).apply(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::op_lookup;
    use crate::simplicial::parse_complex;

    fn torus() -> SimplicialComplex {
        let mut text = String::new();
        for i in 0..7u32 {
            text += &format!("{} {} {}\n", i, (i + 1) % 7, (i + 3) % 7);
            text += &format!("{} {} {}\n", i, (i + 2) % 7, (i + 3) % 7);
        }
        parse_complex(&text).unwrap()
    }

    fn wedge() -> SimplicialComplex {
        parse_complex("0 3 4\n0 3 5\n0 4 5\n3 4 5\n0 1\n1 2\n0 2\n0 6\n6 7\n0 7\n").unwrap()
    }

    #[test]
    fn aw_on_vertex_and_edge() {
        let k = parse_complex("0 1\n").unwrap();
        let f = Field::Q;
        let op = aw_diagonal(&k, f);
        let v = op_lookup(&op, &[(0, 0)]);
        assert_eq!(v.terms.len(), 1);
        assert_eq!(v.terms[&Word(vec![(0, 0), (0, 0)])], f.one());
        let e = op_lookup(&op, &[(1, 0)]);
        assert_eq!(e.terms.len(), 2);
        assert_eq!(e.terms[&Word(vec![(0, 0), (1, 0)])], f.one());
        assert_eq!(e.terms[&Word(vec![(1, 0), (0, 1)])], f.one());
    }

    #[test]
    fn aw_diagonals_are_dgc_comultiplications() {
        for k in [torus(), wedge()] {
            for field in [Field::Q, Field::gf(2).unwrap()] {
                let cx = chain_complex(&k, field, false);
                verify_dgc_diagonal(&cx, &aw_diagonal(&k, field)).unwrap();
                let rcx = chain_complex(&k, field, true);
                verify_dgc_diagonal(&rcx, &reduced_aw_diagonal(&k, field)).unwrap();
            }
        }
    }

    #[test]
    fn cup_with_unit_is_identity() {
        let k = torus();
        let f = Field::Q;
        let unit = cochain_unit(&k, f);
        for j in 0..k.n_simplices(1) {
            let a = SparseVec::unit(j, &f);
            assert_eq!(cup_on_cochains(&k, f, 0, 1, &unit, &a), a);
            assert_eq!(cup_on_cochains(&k, f, 1, 0, &a, &unit), a);
        }
    }

    #[test]
    fn cup_satisfies_leibniz() {
        let k = torus();
        let f = Field::Q;
        let cx = chain_complex(&k, f, false);
        for i in 0..k.n_simplices(0) {
            for j in 0..k.n_simplices(1) {
                let a = SparseVec::unit(i, &f);
                let b = SparseVec::unit(j, &f);
                // deg a = 0: delta(a cup b) = delta a cup b + a cup delta b.
                let lhs = coboundary(&cx, 1, &cup_on_cochains(&k, f, 0, 1, &a, &b));
                let mut rhs = cup_on_cochains(&k, f, 1, 1, &coboundary(&cx, 0, &a), &b);
                rhs.add_scaled(&f, &f.one(), &cup_on_cochains(&k, f, 0, 2, &a, &coboundary(&cx, 1, &b)));
                assert_eq!(lhs, rhs, "leibniz fails at a=e{i}, b=e{j}");
            }
        }
        // Two degree-1 cochains: the second term picks up a minus sign.
        for i in [0usize, 5, 13] {
            for j in [2usize, 8, 20] {
                let a = SparseVec::unit(i, &f);
                let b = SparseVec::unit(j, &f);
                let lhs = coboundary(&cx, 2, &cup_on_cochains(&k, f, 1, 1, &a, &b));
                let mut rhs = cup_on_cochains(&k, f, 2, 1, &coboundary(&cx, 1, &a), &b);
                rhs.add_scaled(
                    &f,
                    &f.from_i64(-1),
                    &cup_on_cochains(&k, f, 1, 2, &a, &coboundary(&cx, 1, &b)),
                );
                assert_eq!(lhs, rhs, "leibniz fails at a=e{i}, b=e{j}");
            }
        }
    }

    #[test]
    fn torus_and_wedge_cup_ranks_differ() {
        let gf2 = Field::gf(2).unwrap();
        assert_eq!(cup_pairing_rank(&torus(), gf2, 1, 1).unwrap(), 1);
        assert_eq!(cup_pairing_rank(&wedge(), gf2, 1, 1).unwrap(), 0);
        assert_eq!(cup_pairing_rank(&torus(), Field::Q, 1, 1).unwrap(), 1);
        assert_eq!(cup_pairing_rank(&wedge(), Field::Q, 1, 1).unwrap(), 0);
    }

    #[test]
    fn cohomology_cup_classes_graded_commute() {
        let k = torus();
        let f = Field::Q;
        let cx = chain_complex(&k, f, false);
        let h1 = cohomology_basis(&cx, 1);
        let h2 = cohomology_basis(&cx, 2);
        for a in &h1.reps {
            for b in &h1.reps {
                let ab = cup_on_cochains(&k, f, 1, 1, a, b);
                let ba = cup_on_cochains(&k, f, 1, 1, b, a);
                // Odd degrees: [a cup b] = -[b cup a], so the sum bounds.
                let mut s = ab;
                s.add_scaled(&f, &f.one(), &ba);
                assert!(h2.is_boundary(&s).unwrap());
            }
        }
    }
}
