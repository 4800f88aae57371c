//! The cobar construction over a coalgebra-flavored structure: the tensor
//! algebra on the desuspension, with the differential induced by the
//! operations. Squaring to zero there is equivalent to the full family of
//! Stasheff identities, which makes it an independent cross-check on signs.
//!
//! Conventions. Desuspending an n-factor word multiplies by
//! (-1)^{sum_j (n-j) d_j} over the displayed degrees d_j (1-based j), and
//! the generator-level differential of arity n is
//!   d_n = -(-1)^{n(n-1)/2} (desuspend)^n Delta_n (suspend),
//! so re-suspending gives back Delta_n = -(suspend)^n d_n (desuspend).
//! Algebra morphisms of cobar constructions are carried by their values on
//! generators and extend multiplicatively without signs, being degree zero.

use crate::ainfty::{AInftyMorphism, AInftyStructure, Flavor};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{apply_span, op_lookup, Combo, Deg, GradedDims, OpMap, Word};
use crate::matrix::{Reduction, SparseMatrix, SparseVec};
use std::collections::BTreeMap;

/// sum_j (n-j) d_j over the factors of a word, the exponent shared by the
/// suspension and desuspension of tensor words.
fn suspension_exponent(w: &Word) -> i64 {
    let n = w.len();
    w.0.iter()
        .enumerate()
        .map(|(j, &(d, _))| (n - 1 - j) as i64 * d)
        .sum()
}

fn shift_word(w: &Word, by: Deg) -> Word {
    Word(w.0.iter().map(|&(d, i)| (d + by, i)).collect())
}

/// Dimensions of the desuspension; the structure must have nothing in
/// degree zero.
pub fn desuspended_dims(dims: &GradedDims) -> Result<GradedDims> {
    if dims.dim(0) != 0 {
        return Err(Error::pre(
            "cobar construction needs an empty degree zero".to_string(),
        ));
    }
    Ok(GradedDims(dims.0.iter().skip(1).copied().collect()))
}

/// The differential of the cobar construction, stored by its values on
/// generators (single desuspended factors) and extended as a derivation.
pub struct CobarDifferential {
    pub field: Field,
    /// arity -> images of generators as combinations of desuspended words.
    pub parts: BTreeMap<usize, OpMap>,
}

impl CobarDifferential {
    pub fn generator_image(&self, d: Deg, i: usize) -> Combo {
        let mut out = Combo::zero();
        for op in self.parts.values() {
            out.add_scaled(&self.field, &op_lookup(op, &[(d, i)]), &self.field.one());
        }
        out
    }

    /// Derivation extension to combinations of words: the differential acts
    /// on each slot in turn with the sign of carrying a degree -1 operator
    /// over the prefix.
    pub fn apply(&self, c: &Combo) -> Combo {
        let field = self.field;
        let mut out = Combo::zero();
        let max_len = c.terms.keys().map(Word::len).max().unwrap_or(0);
        for slot in 0..max_len {
            let contribution = apply_span_at(&field, c, slot, |fac| {
                self.generator_image(fac[0].0, fac[0].1)
            });
            out.add_scaled(&field, &contribution, &field.one());
        }
        out
    }
}

/// apply_span over only the terms long enough to have the slot.
fn apply_span_at(
    field: &Field,
    c: &Combo,
    slot: usize,
    op: impl Fn(&[(Deg, usize)]) -> Combo,
) -> Combo {
    let mut eligible = Combo::zero();
    for (w, coeff) in &c.terms {
        if w.len() > slot {
            eligible.add_term(field, w.clone(), coeff.clone());
        }
    }
    if eligible.is_zero() {
        return Combo::zero();
    }
    apply_span(field, &eligible, slot, 1, -1, &mut |fac| op(fac))
}

pub fn cobar_differential(st: &AInftyStructure) -> Result<CobarDifferential> {
    if st.flavor != Flavor::Coalgebra {
        return Err(Error::pre(
            "the cobar construction applies to coalgebra-flavored structures".to_string(),
        ));
    }
    desuspended_dims(&st.dims)?;
    let field = st.field;
    let mut parts: BTreeMap<usize, OpMap> = BTreeMap::new();
    for (&n, op) in &st.ops {
        let global = field.neg(&field.sign((n * (n - 1) / 2) as i64));
        let mut part = OpMap::new();
        for (input, output) in op {
            let (p, i) = input.0[0];
            let mut img = Combo::zero();
            for (w, c) in &output.terms {
                let sign = field.sign(suspension_exponent(w));
                img.add_term(
                    &field,
                    shift_word(w, -1),
                    field.mul(c, &field.mul(&sign, &global)),
                );
            }
            if !img.is_zero() {
                part.insert(Word::single(p - 1, i), img);
            }
        }
        if !part.is_empty() {
            parts.insert(n, part);
        }
    }
    Ok(CobarDifferential { field, parts })
}

/// Word lengths at which the squared cobar differential fails to vanish on a
/// generator; empty means the differential squares to zero, which holds
/// exactly when every Stasheff identity does.
pub fn cobar_dd_violations(st: &AInftyStructure) -> Result<Vec<usize>> {
    let d = cobar_differential(st)?;
    let field = st.field;
    let mut bad = std::collections::BTreeSet::new();
    for (p, &count) in st.dims.0.iter().enumerate() {
        for i in 0..count {
            let gen = Combo::of(Word::single(p as Deg - 1, i), &field);
            let dd = d.apply(&d.apply(&gen));
            for (w, _) in &dd.terms {
                bad.insert(w.len());
            }
        }
    }
    Ok(bad.into_iter().collect())
}

/// Fails with an internal-consistency error when the cobar differential of
/// the structure does not square to zero.
pub fn cobar_cross_check(st: &AInftyStructure) -> Result<()> {
    let bad = cobar_dd_violations(st)?;
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::internal(format!(
            "cobar differential squares to nonzero words of lengths {bad:?}"
        )))
    }
}

/// An algebra morphism between cobar constructions, stored by generator
/// images; component k sends a generator to k-factor words.
#[derive(Debug, Clone)]
pub struct CobarMorphism {
    pub field: Field,
    pub components: BTreeMap<usize, OpMap>,
}

impl CobarMorphism {
    pub fn image_of_generator(&self, d: Deg, i: usize) -> Combo {
        let mut out = Combo::zero();
        for op in self.components.values() {
            out.add_scaled(&self.field, &op_lookup(op, &[(d, i)]), &self.field.one());
        }
        out
    }

    /// Multiplicative extension to combinations of words.
    pub fn apply(&self, c: &Combo) -> Combo {
        let field = self.field;
        let mut out = Combo::zero();
        'words: for (w, coeff) in &c.terms {
            let mut product = Combo::of(Word(Vec::new()), &field);
            for &(d, i) in &w.0 {
                let img = self.image_of_generator(d, i);
                if img.is_zero() {
                    continue 'words;
                }
                product = concat_product(&field, &product, &img);
            }
            out.add_scaled(&field, &product, coeff);
        }
        out
    }
}

fn concat_product(field: &Field, a: &Combo, b: &Combo) -> Combo {
    let mut out = Combo::zero();
    for (wa, ca) in &a.terms {
        for (wb, cb) in &b.terms {
            let mut factors = wa.0.clone();
            factors.extend_from_slice(&wb.0);
            out.add_term(field, Word(factors), field.mul(ca, cb));
        }
    }
    out
}

fn length_component(c: &Combo, len: usize) -> Combo {
    let mut out = Combo::default();
    for (w, coeff) in &c.terms {
        if w.len() == len {
            out.terms.insert(w.clone(), coeff.clone());
        }
    }
    out
}

/// Generators at which the morphism fails to commute with the cobar
/// differentials of the two structures; empty means it is a chain algebra
/// morphism.
pub fn cobar_morphism_violations(
    g: &CobarMorphism,
    src: &AInftyStructure,
    tgt: &AInftyStructure,
) -> Result<Vec<(Deg, usize)>> {
    let d_src = cobar_differential(src)?;
    let d_tgt = cobar_differential(tgt)?;
    let field = g.field;
    let mut bad = Vec::new();
    for (p, &count) in src.dims.0.iter().enumerate() {
        for i in 0..count {
            let gen = Combo::of(Word::single(p as Deg - 1, i), &field);
            let lhs = g.apply(&d_src.apply(&gen));
            let rhs = d_tgt.apply(&g.apply(&gen));
            let mut diff = lhs;
            diff.add_scaled(&field, &rhs, &field.from_i64(-1));
            if !diff.is_zero() {
                bad.push((p as Deg, i));
            }
        }
    }
    Ok(bad)
}

/// Translates a structure morphism to the generator images of the induced
/// algebra morphism of cobar constructions.
pub fn cobar_from_morphism(f: &AInftyMorphism) -> CobarMorphism {
    let field = f.field;
    let mut components = BTreeMap::new();
    for (&k, comp) in &f.components {
        let mut op = OpMap::new();
        for (input, output) in comp {
            let (p, i) = input.0[0];
            let mut img = Combo::zero();
            for (w, c) in &output.terms {
                let sign = field.sign(suspension_exponent(w));
                img.add_term(&field, shift_word(w, -1), field.mul(c, &sign));
            }
            if !img.is_zero() {
                op.insert(Word::single(p - 1, i), img);
            }
        }
        if !op.is_empty() {
            components.insert(k, op);
        }
    }
    CobarMorphism { field, components }
}

/// The inverse translation, from cobar generator images back to structure
/// morphism components. Suspending k factors twice costs (-1)^{k(k-1)/2}, so
/// that factor appears here to make the two translations mutually inverse.
pub fn morphism_from_cobar(g: &CobarMorphism) -> AInftyMorphism {
    let field = g.field;
    let mut components = BTreeMap::new();
    for (&k, op) in &g.components {
        let global = field.sign((k * (k - 1) / 2) as i64);
        let mut comp = OpMap::new();
        for (input, output) in op {
            let (d, i) = input.0[0];
            let mut img = Combo::zero();
            for (w, c) in &output.terms {
                let sign = field.mul(&field.sign(suspension_exponent(w)), &global);
                img.add_term(&field, shift_word(w, 1), field.mul(c, &sign));
            }
            if !img.is_zero() {
                comp.insert(Word::single(d + 1, i), img);
            }
        }
        if !comp.is_empty() {
            components.insert(k, comp);
        }
    }
    AInftyMorphism { field, components }
}

/// Per-degree inverse of the linear part of a cobar morphism, as matrices on
/// desuspended generators.
fn invert_linear_part(
    g: &CobarMorphism,
    src: &GradedDims,
    tgt: &GradedDims,
) -> Result<BTreeMap<Deg, SparseMatrix>> {
    let field = g.field;
    let empty = OpMap::new();
    let g1 = g.components.get(&1).unwrap_or(&empty);
    let mut out = BTreeMap::new();
    let degrees = src.0.len().max(tgt.0.len());
    for d in 0..degrees {
        let n_src = src.dim(d as Deg);
        let n_tgt = tgt.dim(d as Deg);
        if n_src == 0 && n_tgt == 0 {
            continue;
        }
        if n_src != n_tgt {
            return Err(Error::pre(format!(
                "linear part is not square in degree {d}: {n_src} generators against {n_tgt}"
            )));
        }
        let mut m = SparseMatrix::zero(field, n_tgt, n_src);
        for j in 0..n_src {
            let img = op_lookup(g1, &[(d as Deg, j)]);
            for (w, c) in &img.terms {
                if w.len() != 1 || w.0[0].0 != d as Deg {
                    return Err(Error::pre(
                        "linear part must preserve the degree of generators".to_string(),
                    ));
                }
                m.set(w.0[0].1, j, c.clone());
            }
        }
        let red = Reduction::of(&m);
        let mut inv = SparseMatrix::zero(field, n_src, n_tgt);
        for j in 0..n_tgt {
            let e = SparseVec::unit(j, &field);
            inv.cols[j] = red.solve(&e).map_err(|_| {
                Error::pre(format!("linear part is not invertible in degree {d}"))
            })?;
        }
        out.insert(d as Deg, inv);
    }
    Ok(out)
}

/// Applies a degree-zero factorwise substitution to every factor of every
/// word.
fn substitute_factors(
    field: &Field,
    c: &Combo,
    sub: impl Fn(Deg, usize) -> Combo,
) -> Combo {
    let mut out = Combo::zero();
    'words: for (w, coeff) in &c.terms {
        let mut product = Combo::of(Word(Vec::new()), field);
        for &(d, i) in &w.0 {
            let img = sub(d, i);
            if img.is_zero() {
                continue 'words;
            }
            product = concat_product(field, &product, &img);
        }
        out.add_scaled(field, &product, coeff);
    }
    out
}

/// Carries a structure across a cobar morphism with invertible linear part:
/// returns the unique family of operations on the source space, computed up
/// to arity `n_max`, whose cobar differential commutes with the morphism
/// into the cobar construction of `tgt`. The source space is described by
/// its (suspended) dimensions.
pub fn transport_structure(
    tgt: &AInftyStructure,
    g: &CobarMorphism,
    src_dims: &GradedDims,
    n_max: usize,
) -> Result<AInftyStructure> {
    let field = tgt.field;
    let d_tgt = cobar_differential(tgt)?;
    let src_desusp = desuspended_dims(src_dims)?;
    let tgt_desusp = desuspended_dims(&tgt.dims)?;
    let inv1 = invert_linear_part(g, &src_desusp, &tgt_desusp)?;
    let invert_factor = |d: Deg, i: usize| -> Combo {
        let mut out = Combo::zero();
        if let Some(m) = inv1.get(&d) {
            for (r, c) in m.cols[i].iter() {
                out.add_term(&field, Word::single(d, r), c.clone());
            }
        }
        out
    };
    let mut ops: BTreeMap<usize, OpMap> = BTreeMap::new();
    for (p, &count) in src_dims.0.iter().enumerate() {
        for i in 0..count {
            let gen = Combo::of(Word::single(p as Deg - 1, i), &field);
            let rhs = d_tgt.apply(&g.apply(&gen));
            let max_rhs = rhs.terms.keys().map(Word::len).max().unwrap_or(0);
            let bound = n_max.max(max_rhs);
            // Solve for the generator image of the transported differential
            // by word length: the linear part of the morphism carries the
            // length-l unknown onto whatever the shorter parts do not yet
            // account for.
            let mut accounted = Combo::zero();
            for l in 1..=bound {
                let mut diff = length_component(&rhs, l);
                diff.add_scaled(&field, &length_component(&accounted, l), &field.from_i64(-1));
                if diff.is_zero() {
                    continue;
                }
                let t = substitute_factors(&field, &diff, invert_factor);
                accounted.add_scaled(&field, &g.apply(&t), &field.one());
                // Re-suspend: Delta_l = -(suspend)^l d_l (desuspend).
                let mut img = Combo::zero();
                for (w, c) in &t.terms {
                    let sign = field.neg(&field.sign(suspension_exponent(w)));
                    img.add_term(&field, shift_word(w, 1), field.mul(c, &sign));
                }
                if !img.is_zero() {
                    ops.entry(l)
                        .or_default()
                        .insert(Word::single(p as Deg, i), img);
                }
            }
            debug_assert!(
                (1..=bound).all(|l| {
                    let mut r = length_component(&rhs, l);
                    r.add_scaled(&field, &length_component(&accounted, l), &field.from_i64(-1));
                    r.is_zero()
                }),
                "transport solve left a residue"
            );
        }
    }
    let mut st = AInftyStructure::new(field, src_dims.clone(), Flavor::Coalgebra, n_max.max(2));
    for (n, op) in ops {
        st.set_op(n, op);
    }
    st.validate()?;
    Ok(st)
}
