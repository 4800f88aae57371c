//! Persistence modules and barcodes.
//!
//! A persistence module here is a finite diagram V_0 -> V_1 -> ... -> V_N of
//! vector spaces over a fixed field. Its complete invariant is the table of
//! ranks d(i, j) of the composite maps V_i -> V_j, and the barcode is read
//! off that table by inclusion-exclusion: the number of interval summands
//! [i, j] equals
//!
//!   d(i, j) - d(i-1, j) - d(i, j+1) + d(i-1, j+1)
//!
//! with out-of-range entries treated as zero. A negative count means the
//! input table did not come from a genuine module and is reported as an
//! internal-consistency error rather than clamped.
//!
//! [`FilteredHomology`] applies this to a filtered simplicial complex: it
//! runs one boundary reduction per stage and expresses the inclusion-induced
//! maps on homology in the resulting bases, so downstream code that needs
//! structure on those same bases (transferred coproducts, for instance) can
//! reuse the reductions directly.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::chain::chain_complex;
use crate::contraction::HomologyReduction;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{Deg, GradedDims, GradedMap};
use crate::matrix::{SparseMatrix, SparseVec};
use crate::simplicial::{Filtration, SimplicialComplex};

/// A diagram V_0 -> V_1 -> ... -> V_N over a fixed field.
#[derive(Debug, Clone)]
pub struct PersistenceModule {
    pub field: Field,
    /// dims[i] = dim V_i.
    pub dims: Vec<usize>,
    /// maps[i] sends V_i to V_{i+1}; one fewer entry than `dims`.
    pub maps: Vec<SparseMatrix>,
}

impl PersistenceModule {
    /// Number of indices N + 1.
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if !self.dims.is_empty() && self.maps.len() + 1 != self.dims.len() {
            return Err(Error::dims(format!(
                "{} spaces need {} maps, got {}",
                self.dims.len(),
                self.dims.len() - 1,
                self.maps.len()
            )));
        }
        for (i, m) in self.maps.iter().enumerate() {
            if m.ncols() != self.dims[i] || m.rows != self.dims[i + 1] {
                return Err(Error::dims(format!(
                    "map {} is {}x{}, expected {}x{}",
                    i,
                    m.rows,
                    m.ncols(),
                    self.dims[i + 1],
                    self.dims[i]
                )));
            }
        }
        Ok(())
    }

    /// The composite V_i -> V_j (identity when i = j).
    pub fn composite(&self, i: usize, j: usize) -> SparseMatrix {
        assert!(i <= j && j < self.len(), "bad composite range");
        let mut m = SparseMatrix::identity(self.field, self.dims[i]);
        for k in i..j {
            m = self.maps[k].compose(&m);
        }
        m
    }

    /// Ranks of all composites.
    pub fn rank_table(&self) -> RankTable {
        let n = self.len();
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n - i);
            row.push(self.dims[i]);
            let mut cur = SparseMatrix::identity(self.field, self.dims[i]);
            for j in i + 1..n {
                cur = self.maps[j - 1].compose(&cur);
                row.push(cur.rank());
            }
            rows.push(row);
        }
        RankTable { rows }
    }

    /// Direct sum of interval modules: each (birth, last) pair contributes a
    /// one-dimensional summand supported on indices birth..=last, with
    /// identity structure maps inside the interval.
    pub fn from_intervals(field: Field, len: usize, intervals: &[(usize, usize)]) -> Result<Self> {
        for &(b, l) in intervals {
            if b > l || l >= len {
                return Err(Error::pre(format!(
                    "interval ({b}, {l}) does not fit in 0..{len}"
                )));
            }
        }
        let alive: Vec<Vec<usize>> = (0..len)
            .map(|i| {
                intervals
                    .iter()
                    .enumerate()
                    .filter(|(_, &(b, l))| b <= i && i <= l)
                    .map(|(k, _)| k)
                    .collect()
            })
            .collect();
        let dims: Vec<usize> = alive.iter().map(|a| a.len()).collect();
        let mut maps = Vec::new();
        for i in 0..len.saturating_sub(1) {
            let mut m = SparseMatrix::zero(field, dims[i + 1], dims[i]);
            for (col, k) in alive[i].iter().enumerate() {
                if let Some(row) = alive[i + 1].iter().position(|x| x == k) {
                    m.set(row, col, field.one());
                }
            }
            maps.push(m);
        }
        Ok(PersistenceModule { field, dims, maps })
    }

    /// Rewrites the module in new bases: `changes[i]` columns are the new
    /// basis vectors of V_i in the old coordinates. The rank table and hence
    /// the barcode are unchanged.
    pub fn change_basis(&self, changes: &[SparseMatrix]) -> Result<PersistenceModule> {
        if changes.len() != self.len() {
            return Err(Error::dims("one basis change per index required"));
        }
        let mut maps = Vec::with_capacity(self.maps.len());
        for (i, m) in self.maps.iter().enumerate() {
            let inv = changes[i + 1].inverse()?;
            maps.push(inv.compose(&m.compose(&changes[i])));
        }
        Ok(PersistenceModule { field: self.field, dims: self.dims.clone(), maps })
    }
}

/// Table of ranks d(i, j) = rank of V_i -> V_j for i <= j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTable {
    /// rows[i][j - i] = d(i, j).
    rows: Vec<Vec<usize>>,
}

impl RankTable {
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<RankTable> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n - i {
                return Err(Error::dims(format!(
                    "row {i} has {} entries, expected {}",
                    row.len(),
                    n - i
                )));
            }
        }
        Ok(RankTable { rows })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rank(&self, i: usize, j: usize) -> usize {
        assert!(i <= j && j < self.len(), "rank index out of range");
        self.rows[i][j - i]
    }

    /// d(i, j) with indices outside the diagram treated as zero maps.
    fn rank_or_zero(&self, i: isize, j: isize) -> isize {
        let n = self.len() as isize;
        if i < 0 || j >= n || i > j {
            0
        } else {
            self.rows[i as usize][(j - i) as usize] as isize
        }
    }

    /// Number of interval summands [i, j], by inclusion-exclusion.
    fn multiplicity(&self, i: usize, j: usize) -> isize {
        let (i, j) = (i as isize, j as isize);
        self.rank_or_zero(i, j) - self.rank_or_zero(i - 1, j) - self.rank_or_zero(i, j + 1)
            + self.rank_or_zero(i - 1, j + 1)
    }
}

/// rank(B) - rank(AB) - rank(BC) + rank(ABC) for conformable A, B, C.
/// Nonnegative for every honest matrix triple; this is the inequality that
/// guarantees the interval multiplicities below never go negative.
pub fn frobenius_defect(a: &SparseMatrix, b: &SparseMatrix, c: &SparseMatrix) -> Result<i64> {
    if a.ncols() != b.rows || b.ncols() != c.rows {
        return Err(Error::dims(format!(
            "cannot chain {}x{}, {}x{}, {}x{}",
            a.rows,
            a.ncols(),
            b.rows,
            b.ncols(),
            c.rows,
            c.ncols()
        )));
    }
    let ab = a.compose(b);
    let bc = b.compose(c);
    let abc = a.compose(&bc);
    Ok(b.rank() as i64 - ab.rank() as i64 - bc.rank() as i64 + abc.rank() as i64)
}

/// Smallest slack in the composition-rank inequality
/// d(i, k) >= d(i, j) + d(j, k) - dim V_j over all triples i <= j <= k.
/// Any table of honest matrix ranks satisfies it, so a negative value
/// indicates a corrupted table; the diagonal triples pin the minimum of a
/// valid table at exactly zero.
pub fn rank_table_slack(table: &RankTable) -> i64 {
    let n = table.len();
    let mut min = 0i64;
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                let slack = table.rank(i, k) as i64 + table.rank(j, j) as i64
                    - table.rank(i, j) as i64
                    - table.rank(j, k) as i64;
                min = min.min(slack);
            }
        }
    }
    min
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BarKind {
    Homology,
    Delta,
}

/// How the right endpoint of a finite bar is reported: `HalfOpen` renders a
/// bar alive on indices i..=j as [i, j+1), `Closed` as [i, j].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalStyle {
    HalfOpen,
    Closed,
}

/// One interval summand. `last` is the largest index at which the class is
/// alive; presentation as half-open or closed happens only at output time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Bar {
    pub degree: i64,
    pub birth: usize,
    pub last: usize,
    pub multiplicity: usize,
}

impl Bar {
    /// Reported death index, or None for a bar still alive at the final
    /// stage of the diagram.
    pub fn death_value(&self, style: IntervalStyle, levels: usize) -> Option<usize> {
        if self.last + 1 >= levels {
            None
        } else {
            match style {
                IntervalStyle::Closed => Some(self.last),
                IntervalStyle::HalfOpen => Some(self.last + 1),
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Barcode {
    pub kind: BarKind,
    pub style: IntervalStyle,
    /// Number of diagram indices; bars live on 0..levels.
    pub levels: usize,
    pub bars: Vec<Bar>,
}

/// Reads the bars of one degree off a rank table. Fails with an
/// internal-consistency error if any multiplicity comes out negative.
pub fn bars_from_ranks(table: &RankTable, degree: i64) -> Result<Vec<Bar>> {
    let n = table.len();
    let mut bars = Vec::new();
    for i in 0..n {
        for j in i..n {
            let m = table.multiplicity(i, j);
            if m < 0 {
                return Err(Error::internal(format!(
                    "negative multiplicity {m} for interval [{i}, {j}] in degree {degree}"
                )));
            }
            if m > 0 {
                bars.push(Bar { degree, birth: i, last: j, multiplicity: m as usize });
            }
        }
    }
    Ok(bars)
}

/// Inverse of [`bars_from_ranks`]: the rank table of a direct sum of the
/// given intervals, d(i, j) = number of bars alive on all of i..=j.
pub fn ranks_from_bars(bars: &[Bar], degree: i64, len: usize) -> RankTable {
    let mut rows = Vec::with_capacity(len);
    for i in 0..len {
        let mut row = Vec::with_capacity(len - i);
        for j in i..len {
            row.push(
                bars.iter()
                    .filter(|b| b.degree == degree && b.birth <= i && j <= b.last)
                    .map(|b| b.multiplicity)
                    .sum(),
            );
        }
        rows.push(row);
    }
    RankTable { rows }
}

impl Barcode {
    pub fn total_multiplicity(&self) -> usize {
        self.bars.iter().map(|b| b.multiplicity).sum()
    }

    pub fn bars_in_degree(&self, degree: i64) -> Vec<Bar> {
        self.bars.iter().copied().filter(|b| b.degree == degree).collect()
    }

    pub fn to_json(&self) -> Value {
        let style = match self.style {
            IntervalStyle::HalfOpen => "half-open",
            IntervalStyle::Closed => "closed",
        };
        let kind = match self.kind {
            BarKind::Homology => "H",
            BarKind::Delta => "Delta",
        };
        Value::Array(
            self.bars
                .iter()
                .map(|b| {
                    json!({
                        "degree": b.degree,
                        "birth": b.birth,
                        "death": b.death_value(self.style, self.levels),
                        "multiplicity": b.multiplicity,
                        "flavor": style,
                        "kind": kind,
                    })
                })
                .collect(),
        )
    }

    /// Renders the barcode as a standalone SVG document. Output is a pure
    /// function of the barcode contents: bars are sorted, multiplicities are
    /// expanded into separate rows, and all coordinates are integers.
    pub fn to_svg(&self) -> String {
        const MARGIN: i64 = 40;
        const STEP: i64 = 60;
        const ROW_H: i64 = 18;
        const PALETTE: [&str; 6] =
            ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

        let mut bars = self.bars.clone();
        bars.sort();
        let cols = self.levels.max(1) as i64;
        let x = |t: i64| MARGIN + t * STEP;
        let n_rows: usize = bars.iter().map(|b| b.multiplicity).sum();
        let width = x(cols) + MARGIN;
        let height = 2 * MARGIN + (n_rows.max(1) as i64) * ROW_H;
        let axis_y = height - MARGIN / 2;

        let mut s = String::new();
        let _ = writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
        );
        let _ = writeln!(s, "<rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>");
        let _ = writeln!(
            s,
            "<line x1=\"{}\" y1=\"{axis_y}\" x2=\"{}\" y2=\"{axis_y}\" stroke=\"#333\" stroke-width=\"1\"/>",
            x(0),
            x(cols)
        );
        for t in 0..=cols {
            let xt = x(t);
            let _ = writeln!(
                s,
                "<line x1=\"{xt}\" y1=\"{}\" x2=\"{xt}\" y2=\"{}\" stroke=\"#333\" stroke-width=\"1\"/>",
                axis_y - 4,
                axis_y + 4
            );
            let _ = writeln!(
                s,
                "<text x=\"{xt}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">{t}</text>",
                axis_y + 18
            );
        }
        let mut row = 0i64;
        for bar in &bars {
            let color = PALETTE[bar.degree.rem_euclid(PALETTE.len() as i64) as usize];
            let label = match self.kind {
                BarKind::Homology => format!("H{}", bar.degree),
                BarKind::Delta => format!("K{}", bar.degree),
            };
            for _ in 0..bar.multiplicity {
                let y = MARGIN + row * ROW_H + ROW_H / 2;
                let x1 = x(bar.birth as i64);
                let _ = writeln!(
                    s,
                    "<text x=\"4\" y=\"{}\" font-family=\"monospace\" font-size=\"11\" fill=\"{color}\">{label}</text>",
                    y + 4
                );
                match bar.death_value(self.style, self.levels) {
                    None => {
                        let x2 = x(cols);
                        let _ = writeln!(
                            s,
                            "<line x1=\"{x1}\" y1=\"{y}\" x2=\"{x2}\" y2=\"{y}\" stroke=\"{color}\" stroke-width=\"6\"/>"
                        );
                        let _ = writeln!(
                            s,
                            "<polygon points=\"{x2},{} {},{y} {x2},{}\" fill=\"{color}\"/>",
                            y - 6,
                            x2 + 12,
                            y + 6
                        );
                    }
                    Some(d) => {
                        let x2 = x(d as i64);
                        if x2 > x1 {
                            let _ = writeln!(
                                s,
                                "<line x1=\"{x1}\" y1=\"{y}\" x2=\"{x2}\" y2=\"{y}\" stroke=\"{color}\" stroke-width=\"6\"/>"
                            );
                        }
                        let _ = writeln!(
                            s,
                            "<circle cx=\"{x1}\" cy=\"{y}\" r=\"4\" fill=\"{color}\"/>"
                        );
                        match self.style {
                            IntervalStyle::Closed => {
                                let _ = writeln!(
                                    s,
                                    "<circle cx=\"{x2}\" cy=\"{y}\" r=\"4\" fill=\"{color}\"/>"
                                );
                            }
                            IntervalStyle::HalfOpen => {
                                let _ = writeln!(
                                    s,
                                    "<circle cx=\"{x2}\" cy=\"{y}\" r=\"4\" fill=\"white\" stroke=\"{color}\" stroke-width=\"2\"/>"
                                );
                            }
                        }
                    }
                }
                row += 1;
            }
        }
        s.push_str("</svg>\n");
        s
    }
}

/// Homology of every stage of a filtration together with the maps induced by
/// inclusion, all in the bases chosen by one boundary reduction per stage.
pub struct FilteredHomology {
    pub field: Field,
    pub reduced: bool,
    pub complexes: Vec<SimplicialComplex>,
    pub reductions: Vec<HomologyReduction>,
    pub h_dims: Vec<GradedDims>,
    /// steps[i] holds the degreewise matrices of H(K_i) -> H(K_{i+1}).
    pub steps: Vec<GradedMap>,
}

impl FilteredHomology {
    pub fn new(filt: &Filtration, field: Field, reduced: bool) -> Result<FilteredHomology> {
        filt.check_monotone()?;
        let n = filt.max_level + 1;
        let mut complexes = Vec::with_capacity(n);
        let mut reductions = Vec::with_capacity(n);
        let mut h_dims = Vec::with_capacity(n);
        for lv in 0..n {
            let k = filt.complex_at(lv);
            let cx = chain_complex(&k, field, reduced);
            let red = HomologyReduction::new(cx);
            h_dims.push(red.h_dims());
            complexes.push(k);
            reductions.push(red);
        }
        let mut steps = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            let mut step = GradedMap::zero(field, 0);
            let degrees = h_dims[i].0.len().max(h_dims[i + 1].0.len());
            for p in 0..degrees {
                let src = h_dims[i].dim(p as Deg);
                let tgt = h_dims[i + 1].dim(p as Deg);
                if src == 0 && tgt == 0 {
                    continue;
                }
                let mut m = SparseMatrix::zero(field, tgt, src);
                for col in 0..src {
                    let rep = reductions[i].include(p, &SparseVec::unit(col, &field));
                    let pushed =
                        include_chain(&field, &rep, p, &complexes[i], &complexes[i + 1], reduced)?;
                    let coords = reductions[i + 1].project(p, &pushed);
                    for (r, c) in coords.iter() {
                        m.set(r, col, c.clone());
                    }
                }
                step.set_block(p as Deg, m);
            }
            steps.push(step);
        }
        Ok(FilteredHomology { field, reduced, complexes, reductions, h_dims, steps })
    }

    pub fn len(&self) -> usize {
        self.complexes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.complexes.is_empty()
    }

    /// Largest homological degree seen at any stage.
    pub fn top_degree(&self) -> usize {
        self.h_dims.iter().map(|d| d.0.len()).max().unwrap_or(0).saturating_sub(1)
    }

    /// The degree-p persistence module.
    pub fn module(&self, p: usize) -> PersistenceModule {
        let dims: Vec<usize> = self.h_dims.iter().map(|d| d.dim(p as Deg)).collect();
        let maps: Vec<SparseMatrix> = self
            .steps
            .iter()
            .enumerate()
            .map(|(i, step)| match step.block(p as Deg) {
                Some(m) => m.clone(),
                None => SparseMatrix::zero(self.field, dims[i + 1], dims[i]),
            })
            .collect();
        PersistenceModule { field: self.field, dims, maps }
    }

    /// Bars of all degrees, rendered half-open as is usual for homology.
    pub fn barcode(&self) -> Result<Barcode> {
        let mut bars = Vec::new();
        for p in 0..=self.top_degree() {
            let table = self.module(p).rank_table();
            bars.extend(bars_from_ranks(&table, p as i64)?);
        }
        Ok(Barcode {
            kind: BarKind::Homology,
            style: IntervalStyle::HalfOpen,
            levels: self.len(),
            bars,
        })
    }
}

/// Persistent homology barcode of a filtered complex.
pub fn homology_barcode(filt: &Filtration, field: Field, reduced: bool) -> Result<Barcode> {
    FilteredHomology::new(filt, field, reduced)?.barcode()
}

/// Rank of the inclusion-induced map H_p(K_i) -> H_p(K_j).
pub fn persistent_betti(
    filt: &Filtration,
    field: Field,
    p: usize,
    i: usize,
    j: usize,
) -> Result<usize> {
    if i > j || j > filt.max_level {
        return Err(Error::pre(format!(
            "stage pair ({i}, {j}) out of range 0..={}",
            filt.max_level
        )));
    }
    let fh = FilteredHomology::new(filt, field, false)?;
    Ok(fh.module(p).composite(i, j).rank())
}

/// Pushes a chain of `from` forward along the inclusion into `to`, in the
/// coordinate systems of the respective chain complexes. With `reduced` set,
/// degree-zero coordinates index the differences v - base against each
/// complex's first vertex, and the two base vertices need not agree.
fn include_chain(
    field: &Field,
    v: &SparseVec,
    p: usize,
    from: &SimplicialComplex,
    to: &SimplicialComplex,
    reduced: bool,
) -> Result<SparseVec> {
    let missing = |s: &[usize]| {
        Error::internal(format!("simplex {s:?} missing from a later filtration stage"))
    };
    let mut out = SparseVec::new();
    if reduced && p == 0 {
        let from_verts = from.simplices(0);
        let to_coord = |s: &[usize]| -> Result<Option<usize>> {
            let j = to.simplex_index(s).ok_or_else(|| missing(s))?;
            Ok(if j == 0 { None } else { Some(j - 1) })
        };
        let mut total = field.zero();
        for (i, c) in v.iter() {
            total = field.add(&total, c);
            if let Some(idx) = to_coord(&from_verts[i + 1])? {
                let cur = out.get(idx).cloned().unwrap_or_else(|| field.zero());
                out.set(field, idx, field.add(&cur, c));
            }
        }
        if let Some(idx) = to_coord(&from_verts[0])? {
            let cur = out.get(idx).cloned().unwrap_or_else(|| field.zero());
            out.set(field, idx, field.sub(&cur, &total));
        }
    } else {
        for (i, c) in v.iter() {
            let s = &from.simplices(p)[i];
            let j = to.simplex_index(s).ok_or_else(|| missing(s))?;
            out.set(field, j, c.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::parse_filtration;

    fn q() -> Field {
        Field::Q
    }

    #[test]
    fn interval_sum_recovers_its_own_barcode() {
        let m = PersistenceModule::from_intervals(q(), 5, &[(0, 2), (1, 3), (1, 3), (4, 4)])
            .unwrap();
        m.validate().unwrap();
        assert_eq!(m.dims, vec![1, 3, 3, 2, 1]);
        let table = m.rank_table();
        let bars = bars_from_ranks(&table, 0).unwrap();
        assert_eq!(
            bars,
            vec![
                Bar { degree: 0, birth: 0, last: 2, multiplicity: 1 },
                Bar { degree: 0, birth: 1, last: 3, multiplicity: 2 },
                Bar { degree: 0, birth: 4, last: 4, multiplicity: 1 },
            ]
        );
        assert_eq!(ranks_from_bars(&bars, 0, 5), table);
        assert_eq!(rank_table_slack(&table), 0);
    }

    #[test]
    fn basis_changes_leave_the_rank_table_alone() {
        for field in [q(), Field::Gf(5)] {
            let m =
                PersistenceModule::from_intervals(field, 4, &[(0, 3), (1, 2), (2, 3)]).unwrap();
            let mut changes = Vec::new();
            for (i, &d) in m.dims.iter().enumerate() {
                let mut c = SparseMatrix::identity(field, d);
                for r in 1..d {
                    c.set(r - 1, r, field.from_i64(2 + (i + r) as i64));
                }
                if d > 0 {
                    c.set(d - 1, 0, field.from_i64(1));
                    c.set(0, 0, field.from_i64(3));
                }
                changes.push(c);
            }
            let twisted = m.change_basis(&changes).unwrap();
            twisted.validate().unwrap();
            assert_eq!(twisted.rank_table(), m.rank_table());
        }
    }

    #[test]
    fn inconsistent_tables_are_rejected() {
        // Full-rank steps through a one-dimensional middle space cannot
        // compose to zero; both the multiplicity and the slack checks see it.
        let table = RankTable::from_rows(vec![vec![1, 1, 0], vec![1, 1], vec![1]]).unwrap();
        let err = bars_from_ranks(&table, 0).unwrap_err();
        assert!(matches!(err, Error::Internal(_)));
        assert_eq!(rank_table_slack(&table), -1);
    }

    #[test]
    fn matrix_triple_defect_is_nonnegative() {
        let f = q();
        let a = SparseMatrix::from_triples(f, 2, 3, &[(0, 0, 1), (1, 2, 2)]);
        let b = SparseMatrix::from_triples(f, 3, 2, &[(0, 0, 1), (1, 1, 1), (2, 1, 3)]);
        let c = SparseMatrix::from_triples(f, 2, 2, &[(0, 1, 5)]);
        assert!(frobenius_defect(&a, &b, &c).unwrap() >= 0);

        let id = SparseMatrix::identity(f, 2);
        assert_eq!(frobenius_defect(&id, &id, &id).unwrap(), 0);
        let zero = SparseMatrix::zero(f, 2, 2);
        assert_eq!(frobenius_defect(&id, &zero, &id).unwrap(), 0);
        assert!(frobenius_defect(&a, &a, &a).is_err());
    }

    #[test]
    fn filtered_triangle_with_tail_has_the_expected_barcode() {
        let text = "0 1 @ 0\n1 2 @ 1\n0 2 @ 2\n0 1 2 @ 4\n3 @ 0\n0 3 @ 3\n";
        let filt = parse_filtration(text).unwrap();
        assert_eq!(filt.max_level, 4);
        for field in [q(), Field::Gf(2)] {
            let bc = homology_barcode(&filt, field, false).unwrap();
            assert_eq!(bc.levels, 5);
            let mut bars = bc.bars.clone();
            bars.sort();
            assert_eq!(
                bars,
                vec![
                    Bar { degree: 0, birth: 0, last: 2, multiplicity: 1 },
                    Bar { degree: 0, birth: 0, last: 4, multiplicity: 1 },
                    Bar { degree: 1, birth: 2, last: 3, multiplicity: 1 },
                ]
            );
            // Half-open rendering: the tail component dies entering level 3,
            // the cycle entering level 4, and the base component survives.
            let deaths: Vec<Option<usize>> =
                bars.iter().map(|b| b.death_value(bc.style, bc.levels)).collect();
            assert_eq!(deaths, vec![Some(3), None, Some(4)]);
        }

        assert_eq!(persistent_betti(&filt, q(), 0, 0, 0).unwrap(), 2);
        assert_eq!(persistent_betti(&filt, q(), 0, 0, 4).unwrap(), 1);
        assert_eq!(persistent_betti(&filt, q(), 1, 2, 3).unwrap(), 1);
        assert_eq!(persistent_betti(&filt, q(), 1, 2, 4).unwrap(), 0);
        assert!(persistent_betti(&filt, q(), 0, 3, 1).is_err());
    }

    #[test]
    fn reduced_degree_zero_handles_shifting_base_vertices() {
        // At level 0 the earliest vertex is 3; once vertex 0 arrives the
        // reduced bases at consecutive stages are built against different
        // base vertices, and the induced map must absorb the change.
        let text = "5 @ 0\n3 @ 0\n0 @ 1\n0 5 @ 2\n0 3 @ 2\n";
        let filt = parse_filtration(text).unwrap();
        let fh = FilteredHomology::new(&filt, q(), true).unwrap();
        let m = fh.module(0);
        assert_eq!(m.dims, vec![1, 2, 0]);
        let table = m.rank_table();
        assert_eq!(table.rank(0, 1), 1);
        let bars = bars_from_ranks(&table, 0).unwrap();
        assert_eq!(
            bars,
            vec![
                Bar { degree: 0, birth: 0, last: 1, multiplicity: 1 },
                Bar { degree: 0, birth: 1, last: 1, multiplicity: 1 },
            ]
        );
    }

    #[test]
    fn barcode_json_uses_the_agreed_fields() {
        let filt = parse_filtration("0 1 @ 0\n1 2 @ 1\n0 2 @ 2\n0 1 2 @ 4\n3 @ 0\n0 3 @ 3\n")
            .unwrap();
        let bc = homology_barcode(&filt, q(), false).unwrap();
        let v = bc.to_json();
        let arr = v.as_array().unwrap();
        assert_eq!(arr.len(), 3);
        for bar in arr {
            assert_eq!(bar["kind"], "H");
            assert_eq!(bar["flavor"], "half-open");
        }
        let infinite: Vec<&Value> = arr.iter().filter(|b| b["death"].is_null()).collect();
        assert_eq!(infinite.len(), 1);
        assert_eq!(infinite[0]["birth"], 0);
        assert_eq!(infinite[0]["degree"], 0);

        let closed = Barcode {
            kind: BarKind::Delta,
            style: IntervalStyle::Closed,
            levels: 5,
            bars: vec![Bar { degree: 1, birth: 1, last: 3, multiplicity: 2 }],
        };
        let v = closed.to_json();
        assert_eq!(v[0]["death"], 3);
        assert_eq!(v[0]["kind"], "Delta");
        assert_eq!(v[0]["flavor"], "closed");
        assert_eq!(v[0]["multiplicity"], 2);
    }

    #[test]
    fn svg_rendering_is_deterministic() {
        let filt = parse_filtration("0 1 @ 0\n1 2 @ 1\n0 2 @ 2\n0 1 2 @ 4\n3 @ 0\n0 3 @ 3\n")
            .unwrap();
        let bc = homology_barcode(&filt, q(), false).unwrap();
        let svg = bc.to_svg();
        assert_eq!(svg, bc.to_svg());
        assert!(svg.starts_with("<svg "));
        assert!(svg.ends_with("</svg>\n"));
        // Three bars: one infinite (arrowhead), two finite half-open (one
        // open endpoint marker each).
        assert_eq!(svg.matches("stroke-width=\"6\"").count(), 3);
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert_eq!(svg.matches("fill=\"white\" stroke=").count(), 2);

        let empty = Barcode {
            kind: BarKind::Homology,
            style: IntervalStyle::HalfOpen,
            levels: 3,
            bars: Vec::new(),
        };
        let svg = empty.to_svg();
        assert!(svg.starts_with("<svg ") && svg.ends_with("</svg>\n"));
    }

    #[test]
    fn composites_and_identity_edges() {
        let m = PersistenceModule::from_intervals(q(), 3, &[(0, 2), (1, 1)]).unwrap();
        let id = m.composite(1, 1);
        assert_eq!(id, SparseMatrix::identity(q(), 2));
        assert_eq!(m.composite(0, 2).rank(), 1);

        let empty = PersistenceModule { field: q(), dims: Vec::new(), maps: Vec::new() };
        assert!(empty.rank_table().is_empty());
        assert_eq!(rank_table_slack(&empty.rank_table()), 0);
    }
}
