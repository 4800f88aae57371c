//! Persistence of coproduct kernels along a filtration-indexed diagram.
//!
//! The input is a diagram of graded spaces H(K_0) -> ... -> H(K_N), each
//! carrying a minimal coalgebra structure. For a fixed degree p and arity n,
//! the persistent group at (i, j) collects the degree-p classes at stage i
//! that stay inside the stage kernels all the way to j:
//!
//!   D(i, j) = dim f^{i,j}( intersection over k in i..=j of Ker(Dn^k o f^{i,k}) )
//!
//! and the closed-interval barcode is read off the table D by the same
//! inclusion-exclusion as ordinary persistence. When every stage kernel is
//! carried into the next one (the compatibility condition), the kernels form
//! an honest persistence submodule whose own barcode must agree bar for bar.
//! When compatibility fails, a class can leave the kernel and later re-enter
//! it; [`APersistenceInput::sleep_wake_diagnostic`] hunts for exactly those
//! classes, because their bars split in ways no single interval can report.

use serde_json::{json, Value};

use crate::ainfty::{AInftyStructure, Flavor};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{Deg, GradedMap};
use crate::matrix::{columns_to_matrix, SparseMatrix, SparseVec};
use crate::persistence::{bars_from_ranks, BarKind, Barcode, IntervalStyle, PersistenceModule, RankTable};
use crate::subspace::Subspace;

/// Stagewise homology with chosen coalgebra structures and the inclusion
/// maps between consecutive stages, plus the degree and arity under study.
#[derive(Debug, Clone)]
pub struct APersistenceInput {
    pub field: Field,
    /// structures[k] lives on the homology of stage k.
    pub structures: Vec<AInftyStructure>,
    /// maps[k] sends stage k to stage k+1, degreewise.
    pub maps: Vec<GradedMap>,
    /// Homological degree p under study.
    pub degree: Deg,
    /// Coproduct arity n under study.
    pub arity: usize,
}

/// Outcome of the kernel-compatibility check. A witness is a class in the
/// kernel at `stage` whose pushforward leaves the kernel at `stage + 1`.
#[derive(Debug, Clone)]
pub struct Compatibility {
    pub compatible: bool,
    pub witness: Option<(usize, SparseVec)>,
}

/// Kernel membership of one class pushed forward from its birth stage.
/// entries[k - start] is None once the image vanishes, otherwise whether the
/// image lies in the stage kernel.
#[derive(Debug, Clone)]
pub struct KernelPattern {
    pub start: usize,
    pub class: SparseVec,
    pub entries: Vec<Option<bool>>,
}

impl KernelPattern {
    /// True when the in-kernel support has a gap: the class is in the
    /// kernel, later alive but out of it, and later in it again.
    pub fn has_split_support(&self) -> bool {
        let mut seen_in = false;
        let mut gap_after_in = false;
        for e in &self.entries {
            match e {
                Some(true) => {
                    if seen_in && gap_after_in {
                        return true;
                    }
                    seen_in = true;
                }
                Some(false) => {
                    if seen_in {
                        gap_after_in = true;
                    }
                }
                None => break,
            }
        }
        false
    }

    /// Stages at which the class sits in the kernel.
    pub fn support(&self) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| **e == Some(true))
            .map(|(off, _)| self.start + off)
            .collect()
    }
}

impl APersistenceInput {
    /// Number of stages N + 1.
    pub fn stages(&self) -> usize {
        self.structures.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.structures.is_empty() {
            return Err(Error::pre("at least one stage required"));
        }
        if self.maps.len() + 1 != self.structures.len() {
            return Err(Error::dims(format!(
                "{} stages need {} maps, got {}",
                self.structures.len(),
                self.structures.len() - 1,
                self.maps.len()
            )));
        }
        if self.arity < 2 {
            return Err(Error::pre("arity must be at least 2"));
        }
        for (k, st) in self.structures.iter().enumerate() {
            if st.field != self.field {
                return Err(Error::pre(format!("stage {k} uses a different field")));
            }
            if st.flavor != Flavor::Coalgebra {
                return Err(Error::pre(format!("stage {k} is not a coalgebra")));
            }
            if !st.is_minimal() {
                return Err(Error::pre(format!("stage {k} structure is not minimal")));
            }
            st.validate()?;
        }
        for (k, m) in self.maps.iter().enumerate() {
            if m.shift != 0 {
                return Err(Error::pre(format!("map {k} is not degree-preserving")));
            }
            m.validate(&self.structures[k].dims, &self.structures[k + 1].dims)?;
        }
        Ok(())
    }

    fn h_dim(&self, k: usize) -> usize {
        self.structures[k].dims.dim(self.degree)
    }

    /// Degree-p block of the step map k -> k+1.
    fn step_block(&self, k: usize) -> SparseMatrix {
        match self.maps[k].block(self.degree) {
            Some(m) => m.clone(),
            None => SparseMatrix::zero(self.field, self.h_dim(k + 1), self.h_dim(k)),
        }
    }

    /// Degree-p block of the arity-n coproduct at stage k.
    fn op_matrix(&self, k: usize) -> Result<SparseMatrix> {
        Ok(self.structures[k].coalgebra_op_matrix(self.arity, self.degree)?.0)
    }

    /// Ker of the stage-k coproduct in degree p, as a subspace.
    pub fn kernel_at(&self, k: usize) -> Result<Subspace> {
        let m = self.op_matrix(k)?;
        Ok(Subspace::spanned_by(self.field, self.h_dim(k), &m.kernel()))
    }

    /// dim f^{i,j} of the classes staying in every stage kernel from i to j.
    pub fn delta_group_dim(&self, i: usize, j: usize) -> Result<usize> {
        if i > j || j >= self.stages() {
            return Err(Error::pre(format!(
                "stage pair ({i}, {j}) out of range 0..{}",
                self.stages()
            )));
        }
        let mut cur = SparseMatrix::identity(self.field, self.h_dim(i));
        let mut surviving = Subspace::full(self.field, self.h_dim(i));
        for k in i..=j {
            let dk = self.op_matrix(k)?.compose(&cur);
            surviving = surviving.intersect(&Subspace::spanned_by(
                self.field,
                self.h_dim(i),
                &dk.kernel(),
            ));
            if k < j {
                cur = self.step_block(k).compose(&cur);
            }
        }
        let basis = columns_to_matrix(self.field, self.h_dim(i), &surviving.basis);
        Ok(cur.compose(&basis).rank())
    }

    /// Full table D(i, j); rows share the incremental kernel intersection.
    pub fn delta_table(&self) -> Result<RankTable> {
        let n = self.stages();
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut cur = SparseMatrix::identity(self.field, self.h_dim(i));
            let mut surviving = Subspace::full(self.field, self.h_dim(i));
            let mut row = Vec::with_capacity(n - i);
            for j in i..n {
                let dj = self.op_matrix(j)?.compose(&cur);
                surviving = surviving.intersect(&Subspace::spanned_by(
                    self.field,
                    self.h_dim(i),
                    &dj.kernel(),
                ));
                let basis = columns_to_matrix(self.field, self.h_dim(i), &surviving.basis);
                row.push(cur.compose(&basis).rank());
                if j + 1 < n {
                    cur = self.step_block(j).compose(&cur);
                }
            }
            rows.push(row);
        }
        RankTable::from_rows(rows)
    }

    /// Closed-interval barcode of the kernel-persistent groups.
    pub fn delta_barcode(&self) -> Result<Barcode> {
        let table = self.delta_table()?;
        let bars = bars_from_ranks(&table, self.degree)?;
        Ok(Barcode {
            kind: BarKind::Delta,
            style: IntervalStyle::Closed,
            levels: self.stages(),
            bars,
        })
    }

    /// Does every step carry the stage kernel into the next stage kernel?
    pub fn compatibility_check(&self) -> Result<Compatibility> {
        for i in 0..self.stages() - 1 {
            let kernel = self.kernel_at(i)?;
            let next_op = self.op_matrix(i + 1)?.compose(&self.step_block(i));
            for v in &kernel.basis {
                if !next_op.apply(v).is_zero() {
                    return Ok(Compatibility { compatible: false, witness: Some((i, v.clone())) });
                }
            }
        }
        Ok(Compatibility { compatible: true, witness: None })
    }

    /// Barcode of the persistence module formed by the stage kernels with
    /// the restricted step maps. Requires compatibility; always agrees with
    /// [`APersistenceInput::delta_barcode`] when defined.
    pub fn kernel_submodule_barcode(&self) -> Result<Barcode> {
        let comp = self.compatibility_check()?;
        if let Some((stage, _)) = comp.witness {
            return Err(Error::pre(format!(
                "stage {stage} kernel is not carried into stage {} kernel",
                stage + 1
            )));
        }
        let kernels: Vec<Subspace> =
            (0..self.stages()).map(|k| self.kernel_at(k)).collect::<Result<_>>()?;
        let dims: Vec<usize> = kernels.iter().map(Subspace::dim).collect();
        let mut maps = Vec::with_capacity(self.stages() - 1);
        for i in 0..self.stages() - 1 {
            let g = kernels[i]
                .restrict_map(&self.step_block(i), &kernels[i + 1])
                .map_err(|_| Error::internal("restricted map left the kernel after the compatibility check passed"))?;
            maps.push(g);
        }
        let module = PersistenceModule { field: self.field, dims, maps };
        let bars = bars_from_ranks(&module.rank_table(), self.degree)?;
        Ok(Barcode {
            kind: BarKind::Delta,
            style: IntervalStyle::Closed,
            levels: self.stages(),
            bars,
        })
    }

    /// Kernel-membership patterns with split support. Each newborn class
    /// (one not arriving from the previous stage) is pushed forward to the
    /// end of the diagram, recording at each stage whether its image is
    /// still nonzero and whether it lies in the stage kernel; patterns whose
    /// in-kernel stages are interrupted by live out-of-kernel stages are the
    /// ambiguous ones and get returned.
    pub fn sleep_wake_diagnostic(&self) -> Result<Vec<KernelPattern>> {
        let ops: Vec<SparseMatrix> =
            (0..self.stages()).map(|k| self.op_matrix(k)).collect::<Result<_>>()?;
        let mut flagged = Vec::new();
        for start in 0..self.stages() {
            let dim = self.h_dim(start);
            let mut span = if start == 0 {
                Subspace::zero(self.field, dim)
            } else {
                let prev = self.step_block(start - 1);
                Subspace::full(self.field, self.h_dim(start - 1)).map_forward(&prev)
            };
            for t in 0..dim {
                let e = SparseVec::unit(t, &self.field);
                if span.contains(&e) {
                    continue;
                }
                let mut extended = span.basis.clone();
                extended.push(e.clone());
                span = Subspace::spanned_by(self.field, dim, &extended);

                let mut entries = Vec::with_capacity(self.stages() - start);
                let mut image = e.clone();
                for k in start..self.stages() {
                    if image.is_zero() {
                        entries.push(None);
                    } else {
                        entries.push(Some(ops[k].apply(&image).is_zero()));
                        if k + 1 < self.stages() {
                            image = self.step_block(k).apply(&image);
                        }
                    }
                }
                let pattern = KernelPattern { start, class: e, entries };
                if pattern.has_split_support() {
                    flagged.push(pattern);
                }
            }
        }
        Ok(flagged)
    }

    pub fn to_json(&self) -> Value {
        let maps: Vec<Value> = self
            .maps
            .iter()
            .map(|m| {
                let mut obj = serde_json::Map::new();
                for (&d, block) in &m.blocks {
                    let mut entries = Vec::new();
                    for (c, col) in block.cols.iter().enumerate() {
                        for (r, coeff) in col.iter() {
                            entries.push(json!([r, c, self.field.format_scalar(coeff)]));
                        }
                    }
                    obj.insert(d.to_string(), Value::Array(entries));
                }
                Value::Object(obj)
            })
            .collect();
        json!({
            "field": self.field.to_string(),
            "degree": self.degree,
            "arity": self.arity,
            "structures": self.structures.iter().map(AInftyStructure::to_json).collect::<Vec<_>>(),
            "maps": maps,
        })
    }

    pub fn from_json(v: &Value) -> Result<APersistenceInput> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::parse("diagram input must be an object".to_string()))?;
        let field = Field::parse(
            obj.get("field")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::parse("missing field".to_string()))?,
        )?;
        let degree = obj
            .get("degree")
            .and_then(Value::as_i64)
            .ok_or_else(|| Error::parse("missing degree".to_string()))?;
        let arity = obj
            .get("arity")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::parse("missing arity".to_string()))? as usize;
        let structures: Vec<AInftyStructure> = obj
            .get("structures")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse("missing structures".to_string()))?
            .iter()
            .map(AInftyStructure::from_json)
            .collect::<Result<_>>()?;
        let mut maps = Vec::new();
        for (k, m) in obj
            .get("maps")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse("missing maps".to_string()))?
            .iter()
            .enumerate()
        {
            let m = m
                .as_object()
                .ok_or_else(|| Error::parse(format!("map {k} must be an object")))?;
            if k + 1 >= structures.len() {
                return Err(Error::parse("more maps than gaps between stages".to_string()));
            }
            let mut gm = GradedMap::zero(field, 0);
            for (dk, entries) in m {
                let d: Deg = dk
                    .parse()
                    .map_err(|_| Error::parse(format!("bad degree key {dk:?}")))?;
                let rows = structures[k + 1].dims.dim(d);
                let cols = structures[k].dims.dim(d);
                let mut block = SparseMatrix::zero(field, rows, cols);
                for e in entries
                    .as_array()
                    .ok_or_else(|| Error::parse("map entries must be arrays".to_string()))?
                {
                    let e = e
                        .as_array()
                        .filter(|a| a.len() == 3)
                        .ok_or_else(|| Error::parse("map entry must be [row, col, coeff]".to_string()))?;
                    let r = e[0]
                        .as_u64()
                        .ok_or_else(|| Error::parse("bad row index".to_string()))?
                        as usize;
                    let c = e[1]
                        .as_u64()
                        .ok_or_else(|| Error::parse("bad column index".to_string()))?
                        as usize;
                    let coeff = field.parse_scalar(
                        e[2].as_str()
                            .ok_or_else(|| Error::parse("coefficient must be a string".to_string()))?,
                    )?;
                    if r >= rows || c >= cols {
                        return Err(Error::parse(format!(
                            "map {k} degree {d}: entry ({r}, {c}) out of {rows}x{cols}"
                        )));
                    }
                    block.set(r, c, coeff);
                }
                gm.set_block(d, block);
            }
            maps.push(gm);
        }
        let inp = APersistenceInput { field, structures, maps, degree, arity };
        inp.validate()?;
        Ok(inp)
    }
}

pub fn parse_apersistence(text: &str) -> Result<APersistenceInput> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| Error::parse(format!("bad JSON: {e}")))?;
    APersistenceInput::from_json(&v)
}

pub fn load_apersistence(path: impl AsRef<std::path::Path>) -> Result<APersistenceInput> {
    parse_apersistence(&std::fs::read_to_string(path)?)
}

/// Builds the single-lineage drop-pattern diagram: one tracked class v in
/// degree p at every stage, mapped identically forward, with the arity-2
/// coproduct sending v to a fixed decomposable target exactly at the stages
/// where `in_kernel` is false. Auxiliary classes in degrees 1 and p-1 supply
/// the target.
pub fn kernel_drop_instance(
    field: Field,
    degree: Deg,
    in_kernel: &[bool],
) -> Result<APersistenceInput> {
    use crate::graded::{Combo, GradedDims, OpMap, Word};

    if in_kernel.is_empty() {
        return Err(Error::pre("at least one stage required"));
    }
    let p = degree;
    if p < 2 {
        return Err(Error::pre("tracked degree must be at least 2"));
    }
    let mut dims_vec = vec![0usize; p as usize + 1];
    dims_vec[1] = 1;
    dims_vec[p as usize - 1] = 1;
    dims_vec[p as usize] = 1;
    let dims = GradedDims(dims_vec);

    let mut structures = Vec::with_capacity(in_kernel.len());
    for &keep in in_kernel {
        let mut st = AInftyStructure::new(field, dims.clone(), Flavor::Coalgebra, 2);
        if !keep {
            let mut op = OpMap::new();
            let target = Word(vec![(1, 0), (p - 1, 0)]);
            op.insert(Word::single(p, 0), Combo::of(target, &field));
            st.set_op(2, op);
        }
        st.validate()?;
        structures.push(st);
    }
    let maps = vec![GradedMap::identity(field, &dims); in_kernel.len() - 1];
    let inp = APersistenceInput { field, structures, maps, degree: p, arity: 2 };
    inp.validate()?;
    Ok(inp)
}

/// Builds a diagram whose degree-p coproducts are rank-at-most-one, given
/// explicit step matrices on degree p and one covector per stage: stage k
/// sends a class v to ell_k(v) times a fixed decomposable target. Handy for
/// cooking up both compatible and incompatible families.
pub fn covector_line_instance(
    field: Field,
    degree: Deg,
    steps: &[SparseMatrix],
    covectors: &[SparseVec],
) -> Result<APersistenceInput> {
    use crate::graded::{Combo, GradedDims, OpMap, Word};

    if covectors.is_empty() || steps.len() + 1 != covectors.len() {
        return Err(Error::dims("one covector per stage, one step per gap"));
    }
    let p = degree;
    if p < 2 {
        return Err(Error::pre("tracked degree must be at least 2"));
    }
    let stage_dim = |k: usize| -> usize {
        if k == 0 {
            steps.first().map_or(0, |m| m.ncols())
        } else {
            steps[k - 1].rows
        }
    };
    let n = covectors.len();
    let dim0 = if steps.is_empty() {
        covectors[0].iter().map(|(i, _)| i + 1).max().unwrap_or(0)
    } else {
        stage_dim(0)
    };

    let mut structures = Vec::with_capacity(n);
    let mut maps = Vec::with_capacity(n - 1);
    for k in 0..n {
        let dk = if k == 0 { dim0 } else { stage_dim(k) };
        let mut dims_vec = vec![0usize; p as usize + 1];
        dims_vec[1] = 1;
        dims_vec[p as usize - 1] = 1;
        dims_vec[p as usize] = dk;
        let dims = GradedDims(dims_vec);
        let mut st = AInftyStructure::new(field, dims.clone(), Flavor::Coalgebra, 2);
        let mut op = OpMap::new();
        for (i, c) in covectors[k].iter() {
            if i >= dk {
                return Err(Error::dims(format!("covector {k} exceeds stage dimension {dk}")));
            }
            let mut image = Combo::zero();
            image.add_term(&field, Word(vec![(1, 0), (p - 1, 0)]), c.clone());
            op.insert(Word::single(p, i), image);
        }
        if !op.is_empty() {
            st.set_op(2, op);
        }
        st.validate()?;
        structures.push(st);

        if k + 1 < n {
            let mut gm = GradedMap::identity(field, &dims);
            gm.set_block(p, steps[k].clone());
            maps.push(gm);
        }
    }
    let inp = APersistenceInput { field, structures, maps, degree: p, arity: 2 };
    inp.validate()?;
    Ok(inp)
}

/// Covector family making [`covector_line_instance`] kernel-compatible by
/// construction: ell_{k+1} = c_k * ell_k * inverse(M_k), so the kernel of
/// each stage maps exactly into the next kernel. Step matrices must be
/// square and invertible.
pub fn compatible_covectors(
    field: Field,
    steps: &[SparseMatrix],
    first: &SparseVec,
    scales: &[i64],
) -> Result<Vec<SparseVec>> {
    if scales.len() != steps.len() {
        return Err(Error::dims("one scale per step"));
    }
    let mut out = vec![first.clone()];
    let mut cur = first.clone();
    for (m, &c) in steps.iter().zip(scales) {
        let inv_t = m.transpose().inverse()?;
        let mut next = inv_t.apply(&cur);
        next.scale(&field, &field.from_i64(c));
        out.push(next.clone());
        cur = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;
    use crate::persistence::Bar;

    fn q() -> Field {
        Field::Q
    }

    fn bars_of(bc: &Barcode) -> Vec<(usize, usize, usize)> {
        let mut v: Vec<(usize, usize, usize)> =
            bc.bars.iter().map(|b| (b.birth, b.last, b.multiplicity)).collect();
        v.sort();
        v
    }

    #[test]
    fn desk_scale_drop_pattern_splits_into_two_bars() {
        let in_kernel: Vec<bool> = (0..10).map(|k| k != 5).collect();
        let inp = kernel_drop_instance(q(), 2, &in_kernel).unwrap();
        assert_eq!(inp.stages(), 10);

        // Diagonal entries: kernel dimension at each stage.
        for k in 0..10 {
            assert_eq!(inp.delta_group_dim(k, k).unwrap(), usize::from(k != 5));
        }
        let bc = inp.delta_barcode().unwrap();
        assert_eq!(bc.kind, BarKind::Delta);
        assert_eq!(bc.style, IntervalStyle::Closed);
        assert_eq!(bars_of(&bc), vec![(0, 4, 1), (6, 9, 1)]);
        // Closed rendering keeps the right endpoint at the last live stage.
        assert_eq!(bc.bars[0].death_value(bc.style, bc.levels), Some(4));
        assert_eq!(bc.bars[1].death_value(bc.style, bc.levels), None);

        let comp = inp.compatibility_check().unwrap();
        assert!(!comp.compatible);
        assert_eq!(comp.witness.as_ref().unwrap().0, 4);
        assert!(inp.kernel_submodule_barcode().is_err());

        let flags = inp.sleep_wake_diagnostic().unwrap();
        assert_eq!(flags.len(), 1);
        assert_eq!(flags[0].start, 0);
        assert_eq!(
            flags[0].support(),
            vec![0, 1, 2, 3, 4, 6, 7, 8, 9]
        );
    }

    #[test]
    fn all_kernel_diagram_reduces_to_ordinary_persistence() {
        let inp = kernel_drop_instance(q(), 3, &[true; 6]).unwrap();
        let bc = inp.delta_barcode().unwrap();
        assert_eq!(bars_of(&bc), vec![(0, 5, 1)]);
        let comp = inp.compatibility_check().unwrap();
        assert!(comp.compatible);
        let sub = inp.kernel_submodule_barcode().unwrap();
        assert_eq!(bars_of(&sub), bars_of(&bc));
        assert!(inp.sleep_wake_diagnostic().unwrap().is_empty());
    }

    #[test]
    fn single_stage_counts_kernel_dimension() {
        let inp = kernel_drop_instance(q(), 2, &[false]).unwrap();
        let bc = inp.delta_barcode().unwrap();
        assert!(bc.bars.is_empty());
        let inp = kernel_drop_instance(q(), 2, &[true]).unwrap();
        let bc = inp.delta_barcode().unwrap();
        assert_eq!(bars_of(&bc), vec![(0, 0, 1)]);
        assert!(inp.delta_group_dim(0, 1).is_err());
    }

    #[test]
    fn compatible_covector_family_agrees_across_both_pathways() {
        let f = q();
        // Invertible steps on a three-dimensional degree-2 line bundle.
        let m0 = SparseMatrix::from_triples(f, 3, 3, &[(0, 0, 1), (1, 1, 2), (2, 2, 1), (0, 2, 3)]);
        let m1 = SparseMatrix::from_triples(f, 3, 3, &[(0, 1, 1), (1, 0, 1), (2, 2, 5)]);
        let m2 = SparseMatrix::from_triples(f, 3, 3, &[(0, 0, 1), (1, 1, 1), (2, 2, 1), (1, 0, 7)]);
        let steps = [m0, m1, m2];
        let first = SparseVec::from_entries(&f, [(0, rat(1, 1)), (2, rat(2, 1))]);
        let ells = compatible_covectors(f, &steps, &first, &[1, 0, 3]).unwrap();
        let inp = covector_line_instance(f, 2, &steps, &ells).unwrap();

        let comp = inp.compatibility_check().unwrap();
        assert!(comp.compatible, "construction should be kernel-compatible");
        let direct = inp.delta_barcode().unwrap();
        let restricted = inp.kernel_submodule_barcode().unwrap();
        assert_eq!(bars_of(&direct), bars_of(&restricted));
        assert!(inp.sleep_wake_diagnostic().unwrap().is_empty());

        // After the zero scale every class is in the kernel, so the tail of
        // the diagram contributes full-dimensional bars.
        assert_eq!(inp.delta_group_dim(2, 3).unwrap(), 3);
        assert_eq!(inp.delta_group_dim(0, 0).unwrap(), 2);
    }

    #[test]
    fn zero_coproducts_reproduce_homology_ranks() {
        let f = q();
        let steps = [
            SparseMatrix::from_triples(f, 2, 3, &[(0, 0, 1), (1, 1, 1)]),
            SparseMatrix::from_triples(f, 2, 2, &[(0, 0, 1)]),
        ];
        let zero = SparseVec::new();
        let ells = vec![zero.clone(), zero.clone(), zero];
        let inp = covector_line_instance(f, 2, &steps, &ells).unwrap();
        let table = inp.delta_table().unwrap();
        assert_eq!(table.rank(0, 0), 3);
        assert_eq!(table.rank(0, 1), 2);
        assert_eq!(table.rank(0, 2), 1);
        assert_eq!(table.rank(1, 2), 1);
        let bars = inp.delta_barcode().unwrap();
        assert_eq!(
            bars_of(&bars),
            vec![(0, 0, 1), (0, 1, 1), (0, 2, 1), (2, 2, 1)]
        );
    }

    #[test]
    fn json_round_trip_preserves_the_table() {
        let in_kernel: Vec<bool> = (0..5).map(|k| k != 2).collect();
        let inp = kernel_drop_instance(q(), 2, &in_kernel).unwrap();
        let text = serde_json::to_string_pretty(&inp.to_json()).unwrap();
        let back = parse_apersistence(&text).unwrap();
        assert_eq!(back.stages(), 5);
        assert_eq!(back.degree, 2);
        assert_eq!(back.arity, 2);
        assert_eq!(back.delta_table().unwrap(), inp.delta_table().unwrap());
        assert_eq!(
            bars_of(&back.delta_barcode().unwrap()),
            vec![(0, 1, 1), (3, 4, 1)]
        );
    }

    #[test]
    fn delta_bars_respect_the_counting_property() {
        let in_kernel = [true, false, true, true, false, true];
        let inp = kernel_drop_instance(q(), 2, &in_kernel).unwrap();
        let table = inp.delta_table().unwrap();
        let bars = bars_from_ranks(&table, 2).unwrap();
        let restored = crate::persistence::ranks_from_bars(&bars, 2, inp.stages());
        assert_eq!(restored, table);
        let expected: Vec<Bar> = vec![
            Bar { degree: 2, birth: 0, last: 0, multiplicity: 1 },
            Bar { degree: 2, birth: 2, last: 3, multiplicity: 1 },
            Bar { degree: 2, birth: 5, last: 5, multiplicity: 1 },
        ];
        assert_eq!(bars, expected);
    }
}
