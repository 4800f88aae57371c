//! Homotopy transfer of (co)multiplicative structure onto homology.
//!
//! Coalgebra side: a chain-level comultiplication transfers through a
//! contraction to a family Delta_n on homology. The evaluation happens on
//! desuspended tensor words: the arity-n operation is the composite
//! pi* D2 (phi* D2)^{n-2} iota*, where D2 splits one factor through the
//! diagonal, phi* applies the homotopy in one slot and rounds everything to
//! its left through iota pi, and the outer (de)suspensions contribute the
//! sign conventions fixed here.
//!
//! Algebra side: the simplicial cup product transfers to a family mu_n on
//! cohomology through a cochain contraction, by the mirror composite that
//! merges adjacent factors with the cup product.
//!
//! Intermediate states are kept as short lists of tensor words whose factors
//! are whole (co)chain vectors, so the factor count never exceeds the arity
//! being computed.

use crate::ainfty::{AInftyStructure, Flavor};
use crate::chain::{chain_complex, ChainComplex};
use crate::contraction::HomologyReduction;
use crate::diagonal::{cup_on_cochains, reduced_aw_diagonal};
use crate::error::Result;
use crate::field::{Field, Scalar};
use crate::graded::{Combo, Deg, GradedDims, OpMap, Word};
use crate::matrix::SparseVec;
use crate::simplicial::SimplicialComplex;

/// One tensor word in flight: a coefficient and (degree, vector) factors.
#[derive(Clone, Debug)]
struct TensorTerm {
    coeff: Scalar,
    factors: Vec<(usize, SparseVec)>,
}

fn prefix_sign(field: &Field, factors: &[(usize, SparseVec)], slot: usize) -> Scalar {
    let e: i64 = factors[..slot].iter().map(|&(d, _)| d as i64 - 1).sum();
    field.sign(e)
}

/// Splits a degree-p chain vector through the diagonal into rank-one pieces
/// (sign, left basis factor, right vector factor), grouped by the left basis
/// element. The sign (-1)^a on an (a, p-a) piece comes from desuspending the
/// two output factors.
fn split_factor(
    field: &Field,
    diag: &OpMap,
    p: usize,
    v: &SparseVec,
) -> Vec<(Scalar, (usize, SparseVec), (usize, SparseVec))> {
    let mut groups: std::collections::BTreeMap<(usize, usize), SparseVec> = Default::default();
    for (idx, c) in v.iter() {
        let Some(img) = diag.get(&Word::single(p as Deg, idx)) else { continue };
        for (w, cw) in &img.terms {
            let (a, fi) = w.0[0];
            let (_, bi) = w.0[1];
            let right = groups.entry((a as usize, fi)).or_default();
            let contrib = field.mul(c, cw);
            let cur = match right.get(bi) {
                Some(x) => field.add(x, &contrib),
                None => contrib,
            };
            right.set(field, bi, cur);
        }
    }
    groups
        .into_iter()
        .filter(|(_, right)| !right.is_zero())
        .map(|((a, fi), right)| {
            (
                field.sign(a as i64),
                (a, SparseVec::unit(fi, field)),
                (p - a, right),
            )
        })
        .collect()
}

/// Applies the diagonal to every slot of every term, with the Koszul sign
/// for passing a desuspension-degree -1 operator over the prefix.
fn diagonal_round(field: &Field, diag: &OpMap, terms: &[TensorTerm]) -> Vec<TensorTerm> {
    let mut out = Vec::new();
    for t in terms {
        for k in 0..t.factors.len() {
            let slot_sign = prefix_sign(field, &t.factors, k);
            let (p, v) = &t.factors[k];
            for (s, left, right) in split_factor(field, diag, *p, v) {
                let mut factors = Vec::with_capacity(t.factors.len() + 1);
                factors.extend_from_slice(&t.factors[..k]);
                factors.push(left);
                factors.push(right);
                factors.extend_from_slice(&t.factors[k + 1..]);
                let coeff = field.mul(&t.coeff, &field.mul(&slot_sign, &s));
                out.push(TensorTerm { coeff, factors });
            }
        }
    }
    out
}

/// Applies the tensor extension of a homotopy to every slot: factors to the
/// left of the slot are rounded through iota pi, the slot factor goes through
/// the homotopy (shifting its degree), and the rest pass unchanged. Terms
/// with a vanished factor are dropped.
fn homotopy_round(
    field: &Field,
    terms: &[TensorTerm],
    round: impl Fn(usize, &SparseVec) -> SparseVec,
    htpy: impl Fn(usize, &SparseVec) -> SparseVec,
    deg_shift: i64,
) -> Vec<TensorTerm> {
    let mut out = Vec::new();
    for t in terms {
        'slots: for k in 0..t.factors.len() {
            let slot_sign = prefix_sign(field, &t.factors, k);
            let mut factors = Vec::with_capacity(t.factors.len());
            for (i, (d, v)) in t.factors.iter().enumerate() {
                let new = if i < k {
                    (*d, round(*d, v))
                } else if i == k {
                    let nd = *d as i64 + deg_shift;
                    if nd < 0 {
                        continue 'slots;
                    }
                    (nd as usize, htpy(*d, v))
                } else {
                    (*d, v.clone())
                };
                if new.1.is_zero() {
                    continue 'slots;
                }
                factors.push(new);
            }
            out.push(TensorTerm { coeff: field.mul(&t.coeff, &slot_sign), factors });
        }
    }
    out
}

/// The suspension sign accumulated over an n-factor word whose i-th factor
/// (from zero) has displayed degree d_i: the exponent is
/// sum_i (n-1-i)(d_i - 1), and the transferred operations carry an extra
/// global minus sign.
fn outer_sign(field: &Field, degrees: &[usize]) -> Scalar {
    let n = degrees.len();
    let e: i64 = degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| (n - 1 - i) as i64 * (d as i64 - 1))
        .sum();
    field.neg(&field.sign(e))
}

/// Transfers a chain-level comultiplication through a homology contraction,
/// producing the operations of arity 2..=n_max on homology.
pub fn transfer_coalgebra(
    red: &HomologyReduction,
    diag: &OpMap,
    n_max: usize,
) -> Result<AInftyStructure> {
    let field = red.field;
    let h = red.h_dims();
    let mut ops: std::collections::BTreeMap<usize, OpMap> = Default::default();
    for p in 0..h.0.len() {
        for zi in 0..h.0[p] {
            let start = TensorTerm {
                coeff: field.one(),
                factors: vec![(p, red.include(p, &SparseVec::unit(zi, &field)))],
            };
            let mut terms = diagonal_round(&field, diag, &[start]);
            for n in 2..=n_max {
                if terms.is_empty() {
                    break;
                }
                let mut img = Combo::zero();
                for t in &terms {
                    collect_projected(&field, red, t, &mut img);
                }
                if !img.is_zero() {
                    ops.entry(n)
                        .or_default()
                        .insert(Word::single(p as Deg, zi), img);
                }
                if n == n_max {
                    break;
                }
                let lifted = homotopy_round(
                    &field,
                    &terms,
                    |d, v| red.include(d, &red.project(d, v)),
                    |d, v| red.homotopy(d, v),
                    1,
                );
                terms = diagonal_round(&field, diag, &lifted);
            }
        }
    }
    let mut st = AInftyStructure::new(field, h, Flavor::Coalgebra, n_max.max(2));
    for (n, op) in ops {
        st.set_op(n, op);
    }
    st.validate()?;
    Ok(st)
}

/// Projects every factor of a term to homology coordinates and expands the
/// product of coordinate vectors into basis words, with the outer
/// suspension sign.
fn collect_projected(field: &Field, red: &HomologyReduction, t: &TensorTerm, out: &mut Combo) {
    let mut coords = Vec::with_capacity(t.factors.len());
    for (d, v) in &t.factors {
        let c = red.project(*d, v);
        if c.is_zero() {
            return;
        }
        coords.push((*d, c));
    }
    let degrees: Vec<usize> = coords.iter().map(|&(d, _)| d).collect();
    let base = field.mul(&t.coeff, &outer_sign(field, &degrees));
    expand_product(field, &coords, &base, &mut Vec::new(), out);
}

fn expand_product(
    field: &Field,
    coords: &[(usize, SparseVec)],
    coeff: &Scalar,
    prefix: &mut Vec<(Deg, usize)>,
    out: &mut Combo,
) {
    if coords.is_empty() {
        out.add_term(field, Word(prefix.clone()), coeff.clone());
        return;
    }
    let (d, v) = &coords[0];
    for (i, c) in v.iter() {
        prefix.push((*d as Deg, i));
        expand_product(field, &coords[1..], &field.mul(coeff, c), prefix, out);
        prefix.pop();
    }
}

/// The transferred coalgebra structure on the reduced homology of a
/// simplicial complex, using the Alexander-Whitney diagonal.
pub fn homology_coalgebra(
    k: &SimplicialComplex,
    field: Field,
    n_max: usize,
) -> Result<AInftyStructure> {
    let cx = chain_complex(k, field, true);
    let diag = reduced_aw_diagonal(k, field);
    let red = HomologyReduction::new(cx);
    transfer_coalgebra(&red, &diag, n_max)
}

/// The cochain complex of `cx` rewritten as a chain complex by reversing the
/// grading: degree q holds the cochains of degree top - q, and the
/// differential is the coboundary. Contracting it contracts the cochain
/// complex onto cohomology.
pub fn reversed_cochain_complex(cx: &ChainComplex) -> ChainComplex {
    let top = cx.dims.len().saturating_sub(1);
    let dims: Vec<usize> = (0..=top).map(|q| cx.dims[top - q]).collect();
    let labels: Vec<Vec<String>> = (0..=top).map(|q| cx.labels[top - q].clone()).collect();
    let differentials = (0..=top)
        .map(|q| {
            if q == 0 {
                crate::matrix::SparseMatrix::zero(cx.field, 0, dims[0])
            } else {
                cx.boundary(top - q + 1).transpose()
            }
        })
        .collect();
    ChainComplex { field: cx.field, dims, labels, differentials }
}

/// A contraction of the cochain complex onto cohomology, indexed by cochain
/// degree. The homotopy lowers cochain degree by one.
pub struct CochainContraction {
    pub field: Field,
    pub top: usize,
    red: HomologyReduction,
    h_dims: Vec<usize>,
}

pub fn cochain_contraction(cx: &ChainComplex) -> CochainContraction {
    let top = cx.dims.len().saturating_sub(1);
    let red = HomologyReduction::new(reversed_cochain_complex(cx));
    let hat = red.h_dims();
    let h_dims = (0..=top).map(|q| hat.0[top - q]).collect();
    CochainContraction { field: cx.field, top, red, h_dims }
}

impl CochainContraction {
    pub fn h_dims(&self) -> GradedDims {
        GradedDims(self.h_dims.clone())
    }

    pub fn h_dim(&self, q: usize) -> usize {
        self.h_dims.get(q).copied().unwrap_or(0)
    }

    /// Cohomology coordinates of a degree-q cochain.
    pub fn project(&self, q: usize, v: &SparseVec) -> SparseVec {
        if q > self.top {
            return SparseVec::new();
        }
        self.red.project(self.top - q, v)
    }

    /// The chosen cocycle representative of cohomology coordinates.
    pub fn include(&self, q: usize, h: &SparseVec) -> SparseVec {
        if q > self.top {
            return SparseVec::new();
        }
        self.red.include(self.top - q, h)
    }

    /// The homotopy C^q -> C^{q-1} with
    /// delta homotopy + homotopy delta = include project - id.
    pub fn homotopy(&self, q: usize, v: &SparseVec) -> SparseVec {
        if q > self.top {
            return SparseVec::new();
        }
        self.red.homotopy(self.top - q, v)
    }
}

/// Merges each adjacent pair of cochain factors through the cup product,
/// over every slot, with the Koszul slot sign and the desuspension sign
/// (-1)^{|a|} on the merged pair.
fn cup_round(
    k: &SimplicialComplex,
    field: &Field,
    top: usize,
    terms: &[TensorTerm],
) -> Vec<TensorTerm> {
    let mut out = Vec::new();
    for t in terms {
        for slot in 0..t.factors.len() - 1 {
            let slot_sign = prefix_sign(field, &t.factors, slot);
            let (qa, va) = &t.factors[slot];
            let (qb, vb) = &t.factors[slot + 1];
            if qa + qb > top {
                continue;
            }
            let merged = cup_on_cochains(k, *field, *qa, *qb, va, vb);
            if merged.is_zero() {
                continue;
            }
            let mut factors = Vec::with_capacity(t.factors.len() - 1);
            factors.extend_from_slice(&t.factors[..slot]);
            factors.push((qa + qb, merged));
            factors.extend_from_slice(&t.factors[slot + 2..]);
            let coeff = field.mul(
                &t.coeff,
                &field.mul(&slot_sign, &field.sign(*qa as i64)),
            );
            out.push(TensorTerm { coeff, factors });
        }
    }
    out
}

/// The canonical representative of the transferred arity-n product on the
/// given cocycles: the full composite including the outer sign, stopped
/// just before the final projection to cohomology. The result is a cochain
/// of degree (sum of input degrees) + 2 - n.
pub fn bar_transfer_value(
    k: &SimplicialComplex,
    con: &CochainContraction,
    inputs: &[(usize, SparseVec)],
) -> (usize, SparseVec) {
    let field = con.field;
    let n = inputs.len();
    assert!(n >= 2, "transfer needs at least two factors");
    let total: usize = inputs.iter().map(|&(q, _)| q).sum();
    let out_deg = (total + 2).saturating_sub(n);
    let degrees: Vec<usize> = inputs.iter().map(|&(q, _)| q).collect();
    let start = TensorTerm { coeff: outer_sign(&field, &degrees), factors: inputs.to_vec() };
    let mut terms = cup_round(k, &field, con.top, &[start]);
    for _ in 0..n.saturating_sub(2) {
        let lowered = homotopy_round(
            &field,
            &terms,
            |d, v| con.include(d, &con.project(d, v)),
            |d, v| con.homotopy(d, v),
            -1,
        );
        terms = cup_round(k, &field, con.top, &lowered);
    }
    let mut out = SparseVec::new();
    for t in terms {
        debug_assert_eq!(t.factors.len(), 1);
        debug_assert_eq!(t.factors[0].0, out_deg);
        out.add_scaled(&field, &t.coeff, &t.factors[0].1);
    }
    (out_deg, out)
}

/// Transfers the cup product through a cochain contraction to the operations
/// mu_n on cohomology for 2 <= n <= n_max.
pub fn transfer_algebra(
    k: &SimplicialComplex,
    con: &CochainContraction,
    n_max: usize,
) -> Result<AInftyStructure> {
    let field = con.field;
    let h = con.h_dims();
    let mut st = AInftyStructure::new(field, h.clone(), Flavor::Algebra, n_max.max(2));
    for n in 2..=n_max {
        let mut op = OpMap::new();
        for word in crate::graded::all_basis_words(&h, n) {
            let inputs: Vec<(usize, SparseVec)> = word
                .0
                .iter()
                .map(|&(q, i)| (q as usize, con.include(q as usize, &SparseVec::unit(i, &field))))
                .collect();
            let (deg, rep) = bar_transfer_value(k, con, &inputs);
            let coords = con.project(deg, &rep);
            if coords.is_zero() {
                continue;
            }
            let mut img = Combo::zero();
            for (j, c) in coords.iter() {
                img.add_term(&field, Word::single(deg as Deg, j), c.clone());
            }
            op.insert(word, img);
        }
        st.set_op(n, op);
    }
    st.validate()?;
    Ok(st)
}

/// The transferred algebra structure on the cohomology of a simplicial
/// complex.
pub fn cohomology_algebra(
    k: &SimplicialComplex,
    field: Field,
    n_max: usize,
) -> Result<AInftyStructure> {
    let cx = chain_complex(k, field, false);
    let con = cochain_contraction(&cx);
    transfer_algebra(k, &con, n_max)
}
