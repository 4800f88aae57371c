//! Graded vector spaces, basis words, linear combinations of words, graded
//! maps, and tensor-power bases.
//!
//! A *word* is a tensor product of basis elements of a graded space, stored
//! as (degree, index) factors. Operations like Delta_n or mu_n act on
//! combinations of words; every Koszul sign in the crate is produced by
//! moving an operator of known degree past a prefix of factors, so the only
//! sign primitive needed here is the prefix degree sum.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::{SparseMatrix, SparseVec};
use std::collections::BTreeMap;

/// Degrees are signed so desuspensions cannot underflow.
pub type Deg = i64;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Word(pub Vec<(Deg, usize)>);

impl Word {
    pub fn single(d: Deg, i: usize) -> Word {
        Word(vec![(d, i)])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> Deg {
        self.0.iter().map(|&(d, _)| d).sum()
    }
}

/// Sum of the true degrees of the first `slot` factors.
pub fn prefix_degree(w: &Word, slot: usize) -> Deg {
    w.0[..slot].iter().map(|&(d, _)| d).sum()
}

/// Finite linear combination of words with nonzero coefficients.
#[derive(Clone, Debug, Default)]
pub struct Combo {
    pub terms: BTreeMap<Word, Scalar>,
}

impl Combo {
    pub fn zero() -> Combo {
        Combo::default()
    }

    pub fn of(word: Word, field: &Field) -> Combo {
        let mut c = Combo::zero();
        c.terms.insert(word, field.one());
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, field: &Field, word: Word, coeff: Scalar) {
        if field.is_zero(&coeff) {
            return;
        }
        let new = match self.terms.get(&word) {
            Some(cur) => field.add(cur, &coeff),
            None => coeff,
        };
        if field.is_zero(&new) {
            self.terms.remove(&word);
        } else {
            self.terms.insert(word, new);
        }
    }

    pub fn add_scaled(&mut self, field: &Field, other: &Combo, coeff: &Scalar) {
        if field.is_zero(coeff) {
            return;
        }
        for (w, c) in &other.terms {
            self.add_term(field, w.clone(), field.mul(c, coeff));
        }
    }

    pub fn scale(&mut self, field: &Field, coeff: &Scalar) {
        if field.is_zero(coeff) {
            self.terms.clear();
            return;
        }
        for c in self.terms.values_mut() {
            *c = field.mul(c, coeff);
        }
    }
}

/// Applies an operator to `span` consecutive factors starting at `slot`,
/// with the Koszul sign for carrying an operator of degree `op_deg` past the
/// preceding factors. `op` returns the image of the consumed factors as a
/// combination of replacement words (empty = zero); replacement factors are
/// spliced in place.
pub fn apply_span(
    field: &Field,
    c: &Combo,
    slot: usize,
    span: usize,
    op_deg: Deg,
    op: &mut impl FnMut(&[(Deg, usize)]) -> Combo,
) -> Combo {
    let mut out = Combo::zero();
    for (word, coeff) in &c.terms {
        assert!(slot + span <= word.len(), "slot range exceeds word length");
        let img = op(&word.0[slot..slot + span]);
        if img.is_zero() {
            continue;
        }
        let sign = field.sign(op_deg * prefix_degree(word, slot));
        let scaled = field.mul(coeff, &sign);
        for (rep, c2) in &img.terms {
            let mut factors = Vec::with_capacity(word.len() - span + rep.len());
            factors.extend_from_slice(&word.0[..slot]);
            factors.extend_from_slice(&rep.0);
            factors.extend_from_slice(&word.0[slot + span..]);
            out.add_term(field, Word(factors), field.mul(&scaled, c2));
        }
    }
    out
}

/// Dimensions per degree of a non-negatively graded space.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedDims(pub Vec<usize>);

impl GradedDims {
    pub fn dim(&self, d: Deg) -> usize {
        if d < 0 {
            0
        } else {
            self.0.get(d as usize).copied().unwrap_or(0)
        }
    }

    pub fn top(&self) -> Deg {
        self.0.len() as Deg - 1
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

/// A degree-homogeneous linear map between graded spaces, one matrix block
/// per source degree; the block at source degree d maps into degree
/// d + shift. Missing blocks are zero.
#[derive(Clone, Debug)]
pub struct GradedMap {
    pub field: Field,
    pub shift: Deg,
    pub blocks: BTreeMap<Deg, SparseMatrix>,
}

impl GradedMap {
    pub fn zero(field: Field, shift: Deg) -> GradedMap {
        GradedMap { field, shift, blocks: BTreeMap::new() }
    }

    pub fn identity(field: Field, dims: &GradedDims) -> GradedMap {
        let mut m = GradedMap::zero(field, 0);
        for (d, &n) in dims.0.iter().enumerate() {
            if n > 0 {
                m.blocks.insert(d as Deg, SparseMatrix::identity(field, n));
            }
        }
        m
    }

    pub fn block(&self, d: Deg) -> Option<&SparseMatrix> {
        self.blocks.get(&d)
    }

    pub fn set_block(&mut self, d: Deg, m: SparseMatrix) {
        if m.is_zero() && m.rows == 0 && m.ncols() == 0 {
            return;
        }
        self.blocks.insert(d, m);
    }

    pub fn apply(&self, d: Deg, v: &SparseVec) -> SparseVec {
        match self.blocks.get(&d) {
            Some(m) => m.apply(v),
            None => SparseVec::new(),
        }
    }

    pub fn apply_elem(&self, d: Deg, i: usize) -> SparseVec {
        match self.blocks.get(&d) {
            Some(m) => m.cols[i].clone(),
            None => SparseVec::new(),
        }
    }

    /// self after other (matrix-style composition).
    pub fn compose(&self, other: &GradedMap) -> GradedMap {
        let mut out = GradedMap::zero(self.field, self.shift + other.shift);
        for (&d, blk) in &other.blocks {
            if let Some(mine) = self.blocks.get(&(d + other.shift)) {
                let m = mine.compose(blk);
                if !m.is_zero() {
                    out.blocks.insert(d, m);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(|m| m.is_zero())
    }

    /// Checks that every block has the shape demanded by the source and
    /// target dimensions, and that no block sits at a degree without one.
    pub fn validate(&self, src: &GradedDims, tgt: &GradedDims) -> Result<()> {
        for (&d, m) in &self.blocks {
            let want_cols = src.dim(d);
            let want_rows = tgt.dim(d + self.shift);
            if m.ncols() != want_cols || m.rows != want_rows {
                return Err(Error::dims(format!(
                    "block at degree {d}: {}x{} but expected {want_rows}x{want_cols}",
                    m.rows,
                    m.ncols()
                )));
            }
        }
        Ok(())
    }

    /// Difference, used by the verifiers; blocks are matched by degree and
    /// missing blocks are treated as zero of the right shape.
    pub fn sub(&self, other: &GradedMap, src: &GradedDims, tgt: &GradedDims) -> GradedMap {
        assert_eq!(self.shift, other.shift, "shift mismatch");
        let mut out = GradedMap::zero(self.field, self.shift);
        let degs: std::collections::BTreeSet<Deg> =
            self.blocks.keys().chain(other.blocks.keys()).copied().collect();
        for d in degs {
            let rows = tgt.dim(d + self.shift);
            let cols = src.dim(d);
            let a = self
                .blocks
                .get(&d)
                .cloned()
                .unwrap_or_else(|| SparseMatrix::zero(self.field, rows, cols));
            let b = other
                .blocks
                .get(&d)
                .cloned()
                .unwrap_or_else(|| SparseMatrix::zero(self.field, rows, cols));
            out.blocks.insert(d, a.sub(&b));
        }
        out
    }
}

/// A sparse operation stored by its values on basis words: the key is an
/// input word (one factor for coalgebra-style operations, several for
/// algebra-style ones), the value its image. Missing keys are zero.
pub type OpMap = BTreeMap<Word, Combo>;

pub fn op_lookup(op: &OpMap, factors: &[(Deg, usize)]) -> Combo {
    op.get(&Word(factors.to_vec())).cloned().unwrap_or_default()
}

/// Ordered basis of the degree-`total` part of the n-fold tensor power of a
/// graded space, enumerated in lexicographic (degree, index) order.
#[derive(Clone, Debug)]
pub struct TensorBasis {
    pub words: Vec<Word>,
    pub lookup: BTreeMap<Word, usize>,
}

impl TensorBasis {
    pub fn new(dims: &GradedDims, n: usize, total: Deg) -> TensorBasis {
        let mut words = Vec::new();
        let mut prefix: Vec<(Deg, usize)> = Vec::with_capacity(n);
        enumerate_words(dims, n, total, &mut prefix, &mut words);
        let lookup = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        TensorBasis { words, lookup }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.lookup.get(w).copied()
    }
}

fn enumerate_words(
    dims: &GradedDims,
    remaining: usize,
    total: Deg,
    prefix: &mut Vec<(Deg, usize)>,
    out: &mut Vec<Word>,
) {
    if remaining == 0 {
        if total == 0 {
            out.push(Word(prefix.clone()));
        }
        return;
    }
    if total < 0 {
        return;
    }
    let max_d = total.min(dims.top().max(0));
    for d in 0..=max_d {
        for i in 0..dims.dim(d) {
            prefix.push((d, i));
            enumerate_words(dims, remaining - 1, total - d, prefix, out);
            prefix.pop();
        }
    }
}

/// Every n-factor word over the basis of a graded space, all total degrees,
/// in lexicographic order.
pub fn all_basis_words(dims: &GradedDims, n: usize) -> Vec<Word> {
    let singles: Vec<(Deg, usize)> = (0..dims.0.len() as Deg)
        .flat_map(|d| (0..dims.dim(d)).map(move |i| (d, i)))
        .collect();
    let mut out = vec![Word(Vec::new())];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * singles.len());
        for w in &out {
            for &f in &singles {
                let mut v = w.0.clone();
                v.push(f);
                next.push(Word(v));
            }
        }
        out = next;
    }
    out
}

/// Coordinates of a combination of n-factor words in a tensor basis.
pub fn combo_to_vec(field: &Field, c: &Combo, basis: &TensorBasis) -> Result<SparseVec> {
    let mut out = SparseVec::new();
    for (w, coeff) in &c.terms {
        let i = basis
            .index_of(w)
            .ok_or_else(|| Error::internal(format!("word {w:?} outside tensor basis")))?;
        out.set(field, i, coeff.clone());
    }
    Ok(out)
}

pub fn vec_to_combo(field: &Field, v: &SparseVec, basis: &TensorBasis) -> Combo {
    let mut out = Combo::zero();
    for (i, coeff) in v.iter() {
        out.add_term(field, basis.words[i].clone(), coeff.clone());
    }
    out
}
