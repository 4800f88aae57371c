//! Simplicial complexes, filtrations, and their text file format.
//!
//! File format: one simplex per line as whitespace-separated vertex ids,
//! optionally followed by `@ <level>`; `#` starts a comment. Faces are
//! completed automatically; an auto-completed face inherits the smallest
//! level of any simplex that forces it.

use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

pub type Simplex = Vec<usize>;

/// A finite abstract simplicial complex, face-closed, with per-dimension
/// lexicographically sorted simplex lists.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SimplicialComplex {
    /// by_dim[p] lists the p-simplices in lexicographic vertex order.
    pub by_dim: Vec<Vec<Simplex>>,
    /// index[p] maps a p-simplex to its position in by_dim[p].
    index: Vec<BTreeMap<Simplex, usize>>,
}

impl SimplicialComplex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds the complex generated by the given simplices (faces completed).
    pub fn from_simplices<I>(simplices: I) -> Result<Self>
    where
        I: IntoIterator<Item = Simplex>,
    {
        let mut all: BTreeMap<Simplex, ()> = BTreeMap::new();
        for s in simplices {
            let s = normalize(&s)?;
            insert_closure(&mut all, &s);
        }
        let mut complex = SimplicialComplex::new();
        for s in all.into_keys() {
            complex.push_sorted(s);
        }
        Ok(complex)
    }

    fn push_sorted(&mut self, s: Simplex) {
        let p = s.len() - 1;
        while self.by_dim.len() <= p {
            self.by_dim.push(Vec::new());
            self.index.push(BTreeMap::new());
        }
        let i = self.by_dim[p].len();
        self.index[p].insert(s.clone(), i);
        self.by_dim[p].push(s);
    }

    /// Highest dimension carrying a simplex, or None when empty.
    pub fn dim(&self) -> Option<usize> {
        if self.by_dim.is_empty() {
            None
        } else {
            Some(self.by_dim.len() - 1)
        }
    }

    pub fn n_simplices(&self, p: usize) -> usize {
        self.by_dim.get(p).map_or(0, |v| v.len())
    }

    pub fn simplex_index(&self, s: &[usize]) -> Option<usize> {
        let p = s.len().checked_sub(1)?;
        self.index.get(p)?.get(s).copied()
    }

    pub fn simplices(&self, p: usize) -> &[Simplex] {
        self.by_dim.get(p).map_or(&[], |v| v.as_slice())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim
            .iter()
            .enumerate()
            .map(|(p, v)| if p % 2 == 0 { v.len() as i64 } else { -(v.len() as i64) })
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.by_dim.is_empty()
    }
}

fn normalize(s: &[usize]) -> Result<Simplex> {
    if s.is_empty() {
        return Err(Error::parse("empty simplex".to_string()));
    }
    let mut v = s.to_vec();
    v.sort_unstable();
    v.dedup();
    if v.len() != s.len() {
        return Err(Error::parse(format!("repeated vertex in simplex {s:?}")));
    }
    Ok(v)
}

fn insert_closure(all: &mut BTreeMap<Simplex, ()>, s: &Simplex) {
    if all.contains_key(s) {
        return;
    }
    all.insert(s.clone(), ());
    if s.len() > 1 {
        for k in 0..s.len() {
            let mut face = s.clone();
            face.remove(k);
            insert_closure(all, &face);
        }
    }
}

/// A simplicial complex together with a monotone level function; the
/// subcomplex at level i consists of all simplices with level <= i.
#[derive(Debug, Clone)]
pub struct Filtration {
    pub complex: SimplicialComplex,
    /// levels[p][i] is the level of the i-th p-simplex.
    pub levels: Vec<Vec<usize>>,
    /// Largest level index N; levels range over 0..=N.
    pub max_level: usize,
}

impl Filtration {
    /// Wraps a complex as a one-level filtration.
    pub fn constant(complex: SimplicialComplex) -> Filtration {
        let levels = complex.by_dim.iter().map(|v| vec![0; v.len()]).collect();
        Filtration { complex, levels, max_level: 0 }
    }

    pub fn level_of(&self, p: usize, i: usize) -> usize {
        self.levels[p][i]
    }

    /// The subcomplex of simplices with level <= i.
    pub fn complex_at(&self, level: usize) -> SimplicialComplex {
        let mut out = SimplicialComplex::new();
        for (p, simplices) in self.complex.by_dim.iter().enumerate() {
            for (i, s) in simplices.iter().enumerate() {
                if self.levels[p][i] <= level {
                    out.push_sorted(s.clone());
                }
            }
        }
        out
    }

    /// Checks that every face appears no later than its cofaces.
    pub fn check_monotone(&self) -> Result<()> {
        for (p, simplices) in self.complex.by_dim.iter().enumerate() {
            if p == 0 {
                continue;
            }
            for (i, s) in simplices.iter().enumerate() {
                let lv = self.levels[p][i];
                for k in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(k);
                    let fi = self.complex.simplex_index(&face).expect("face-closed");
                    if self.levels[p - 1][fi] > lv {
                        return Err(Error::pre(format!(
                            "level of face {face:?} exceeds level of {s:?}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn parse_lines(text: &str) -> Result<Vec<(Simplex, Option<usize>)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.split_once('#') {
            Some((head, _)) => head,
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (verts_part, level) = match line.split_once('@') {
            Some((head, tail)) => {
                let lv: usize = tail.trim().parse().map_err(|_| {
                    Error::parse(format!("line {}: bad level {:?}", lineno + 1, tail.trim()))
                })?;
                (head, Some(lv))
            }
            None => (line, None),
        };
        let mut verts = Vec::new();
        for tok in verts_part.split_whitespace() {
            let v: usize = tok
                .parse()
                .map_err(|_| Error::parse(format!("line {}: bad vertex id {tok:?}", lineno + 1)))?;
            verts.push(v);
        }
        if verts.is_empty() {
            return Err(Error::parse(format!("line {}: no vertices", lineno + 1)));
        }
        let simplex = normalize(&verts)
            .map_err(|e| Error::parse(format!("line {}: {e}", lineno + 1)))?;
        out.push((simplex, level));
    }
    Ok(out)
}

pub fn parse_complex(text: &str) -> Result<SimplicialComplex> {
    let lines = parse_lines(text)?;
    SimplicialComplex::from_simplices(lines.into_iter().map(|(s, _)| s))
}

pub fn load_complex(path: impl AsRef<Path>) -> Result<SimplicialComplex> {
    parse_complex(&std::fs::read_to_string(path)?)
}

/// Parses a filtration. Lines without an explicit level default to level 0.
/// Auto-completed faces take the minimum level over all simplices containing
/// them; an explicit level that breaks monotonicity is an error.
pub fn parse_filtration(text: &str) -> Result<Filtration> {
    let lines = parse_lines(text)?;
    let mut explicit: BTreeMap<Simplex, usize> = BTreeMap::new();
    for (s, lv) in &lines {
        let lv = lv.unwrap_or(0);
        if let Some(&prev) = explicit.get(s) {
            if prev != lv {
                return Err(Error::parse(format!(
                    "simplex {s:?} given two levels ({prev} and {lv})"
                )));
            }
        }
        explicit.insert(s.clone(), lv);
    }
    let complex = SimplicialComplex::from_simplices(lines.into_iter().map(|(s, _)| s))?;
    // Assign levels top-down: a simplex keeps its explicit level if given;
    // every face is forced down to at most the levels of its cofaces.
    let mut level_map: BTreeMap<Simplex, usize> = explicit.clone();
    if let Some(top) = complex.dim() {
        for p in (0..=top).rev() {
            for s in complex.simplices(p) {
                let lv = *level_map.get(s).unwrap_or(&0);
                if p == 0 {
                    level_map.entry(s.clone()).or_insert(lv);
                    continue;
                }
                level_map.entry(s.clone()).or_insert(lv);
                for k in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(k);
                    match (explicit.get(&face), level_map.get(&face)) {
                        (Some(&e), _) if e > lv => {
                            return Err(Error::pre(format!(
                                "explicit level {e} of face {face:?} exceeds level {lv} of {s:?}"
                            )));
                        }
                        (_, Some(&cur)) if cur > lv => {
                            level_map.insert(face, lv);
                        }
                        (_, None) => {
                            level_map.insert(face, lv);
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    let levels: Vec<Vec<usize>> = complex
        .by_dim
        .iter()
        .map(|simplices| simplices.iter().map(|s| level_map[s]).collect())
        .collect();
    let max_level = level_map.values().copied().max().unwrap_or(0);
    let f = Filtration { complex, levels, max_level };
    f.check_monotone()?;
    Ok(f)
}

pub fn load_filtration(path: impl AsRef<Path>) -> Result<Filtration> {
    parse_filtration(&std::fs::read_to_string(path)?)
}

pub fn simplex_label(s: &[usize]) -> String {
    let mut out = String::new();
    for (k, v) in s.iter().enumerate() {
        if k > 0 {
            out.push('-');
        }
        let _ = write!(out, "{v}");
    }
    out
}
