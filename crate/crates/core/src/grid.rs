//! Link complements in the three-sphere, built on a cubical grid.
//!
//! The unit cube is cut into resolution^3 cells and each cell into six
//! tetrahedra along the standard diagonal subdivision, which matches up
//! across shared faces. A link is a list of closed polygonal curves with
//! exact rational coordinates; every cell whose center is within the tube
//! radius of a curve, or that the curve passes through, is removed, and the
//! outer boundary of the cube is coned to an extra vertex so the result is a
//! triangulated S^3 minus an open tube around the link.
//!
//! All geometric predicates (point-segment and segment-segment distances,
//! segment-box intersection, membrane crossings) are computed exactly over
//! the rationals, so cell removal and crossing signs never depend on
//! floating-point rounding.

use std::collections::BTreeSet;

use num::rational::BigRational;
use num::{Signed, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::field::{parse_decimal, Field};
use crate::matrix::SparseVec;
use crate::simplicial::SimplicialComplex;

pub type Point = [BigRational; 3];

/// A link given by closed polygonal curves (closing edge implied), the tube
/// radius to carve out, and the grid resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkSpec {
    pub curves: Vec<Vec<Point>>,
    pub tube_radius: BigRational,
    pub resolution: usize,
}

impl LinkSpec {
    pub fn with_resolution(&self, resolution: usize) -> LinkSpec {
        LinkSpec { curves: self.curves.clone(), tube_radius: self.tube_radius.clone(), resolution }
    }
}

pub fn parse_link_spec(text: &str) -> Result<LinkSpec> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| Error::parse(format!("bad JSON: {e}")))?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::parse("link spec must be an object".to_string()))?;
    let mut curves = Vec::new();
    for curve in obj
        .get("curves")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::parse("missing curves".to_string()))?
    {
        let mut pts = Vec::new();
        for p in curve
            .as_array()
            .ok_or_else(|| Error::parse("curve must be an array of points".to_string()))?
        {
            let coords = p
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| Error::parse("point must have three coordinates".to_string()))?;
            let mut pt: Vec<BigRational> = Vec::with_capacity(3);
            for c in coords {
                let s = c
                    .as_str()
                    .ok_or_else(|| Error::parse("coordinates must be decimal strings".to_string()))?;
                pt.push(parse_decimal(s)?);
            }
            pts.push([pt[0].clone(), pt[1].clone(), pt[2].clone()]);
        }
        curves.push(pts);
    }
    let tube_radius = parse_decimal(
        obj.get("tube_radius")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::parse("missing tube_radius".to_string()))?,
    )?;
    let resolution = obj
        .get("resolution")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::parse("missing resolution".to_string()))? as usize;
    Ok(LinkSpec { curves, tube_radius, resolution })
}

pub fn load_link_spec(path: impl AsRef<std::path::Path>) -> Result<LinkSpec> {
    parse_link_spec(&std::fs::read_to_string(path)?)
}

fn sub(a: &Point, b: &Point) -> Point {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

fn dot(a: &Point, b: &Point) -> BigRational {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

fn norm2(a: &Point) -> BigRational {
    dot(a, a)
}

fn lerp(a: &Point, b: &Point, t: &BigRational) -> Point {
    let one_minus = BigRational::from_integer(1.into()) - t;
    [
        &a[0] * &one_minus + &b[0] * t,
        &a[1] * &one_minus + &b[1] * t,
        &a[2] * &one_minus + &b[2] * t,
    ]
}

fn clamp01(t: BigRational) -> BigRational {
    let zero = BigRational::zero();
    let one = BigRational::from_integer(1.into());
    if t < zero {
        zero
    } else if t > one {
        one
    } else {
        t
    }
}

/// Squared distance from point p to segment [a, b].
pub fn segment_point_dist2(a: &Point, b: &Point, p: &Point) -> BigRational {
    let u = sub(b, a);
    let uu = norm2(&u);
    if uu.is_zero() {
        return norm2(&sub(p, a));
    }
    let t = clamp01(dot(&sub(p, a), &u) / uu);
    norm2(&sub(p, &lerp(a, b, &t)))
}

/// Squared distance between segments [a, b] and [c, d].
pub fn segment_segment_dist2(a: &Point, b: &Point, c: &Point, d: &Point) -> BigRational {
    let mut best = segment_point_dist2(a, b, c);
    for cand in [
        segment_point_dist2(a, b, d),
        segment_point_dist2(c, d, a),
        segment_point_dist2(c, d, b),
    ] {
        if cand < best {
            best = cand;
        }
    }
    // Interior critical point of the distance between the two lines.
    let u = sub(b, a);
    let v = sub(d, c);
    let w = sub(a, c);
    let uu = norm2(&u);
    let vv = norm2(&v);
    let uv = dot(&u, &v);
    let det = &uu * &vv - &uv * &uv;
    if !det.is_zero() {
        let uw = dot(&u, &w);
        let vw = dot(&v, &w);
        let s = (&uv * &vw - &vv * &uw) / &det;
        let t = (&uu * &vw - &uv * &uw) / &det;
        let zero = BigRational::zero();
        let one = BigRational::from_integer(1.into());
        if s >= zero && s <= one && t >= zero && t <= one {
            let p = lerp(a, b, &s);
            let q = lerp(c, d, &t);
            let cand = norm2(&sub(&p, &q));
            if cand < best {
                best = cand;
            }
        }
    }
    best
}

/// Does segment [a, b] meet the closed box [lo, hi]?
fn segment_box_intersects(a: &Point, b: &Point, lo: &Point, hi: &Point) -> bool {
    let mut t0 = BigRational::zero();
    let mut t1 = BigRational::from_integer(1.into());
    for axis in 0..3 {
        let d = &b[axis] - &a[axis];
        if d.is_zero() {
            if a[axis] < lo[axis] || a[axis] > hi[axis] {
                return false;
            }
        } else {
            let mut ta = (&lo[axis] - &a[axis]) / &d;
            let mut tb = (&hi[axis] - &a[axis]) / &d;
            if ta > tb {
                std::mem::swap(&mut ta, &mut tb);
            }
            if ta > t0 {
                t0 = ta;
            }
            if tb < t1 {
                t1 = tb;
            }
            if t0 > t1 {
                return false;
            }
        }
    }
    true
}

/// The complement complex together with the grid bookkeeping needed to read
/// geometric positions back off vertex indices.
#[derive(Debug)]
pub struct GridComplement {
    pub resolution: usize,
    pub complex: SimplicialComplex,
    /// Index of the coning vertex closing the cube up to S^3.
    pub infinity: usize,
    /// Number of grid cells carved out for the tubes.
    pub removed_cells: usize,
}

impl GridComplement {
    /// Coordinates of a grid vertex; None for the coning vertex.
    pub fn vertex_point(&self, v: usize) -> Option<Point> {
        if v >= self.infinity {
            return None;
        }
        let n = self.resolution + 1;
        let x = v / (n * n);
        let y = (v / n) % n;
        let z = v % n;
        let res = BigRational::from_integer((self.resolution as i64).into());
        let coord = |k: usize| BigRational::from_integer((k as i64).into()) / res.clone();
        Some([coord(x), coord(y), coord(z)])
    }
}

fn closed_segments(curve: &[Point]) -> Vec<(Point, Point)> {
    let n = curve.len();
    (0..n).map(|i| (curve[i].clone(), curve[(i + 1) % n].clone())).collect()
}

/// Triangulates S^3 minus an open tube around the link. Cells are removed
/// when their center is within the tube radius of a curve or the curve
/// passes through them, so the carved tube always contains the curve no
/// matter how the radius compares to the cell size.
pub fn build_link_complement(spec: &LinkSpec) -> Result<GridComplement> {
    let res = spec.resolution;
    if res < 2 {
        return Err(Error::pre("resolution must be at least 2"));
    }
    if !spec.tube_radius.is_positive() {
        return Err(Error::pre("tube radius must be positive"));
    }
    let r = &spec.tube_radius;
    let r2 = r * r;
    let one = BigRational::from_integer(1.into());

    let mut segments: Vec<Vec<(Point, Point)>> = Vec::new();
    for (ci, curve) in spec.curves.iter().enumerate() {
        if curve.len() < 3 {
            return Err(Error::pre(format!("curve {ci} needs at least three vertices")));
        }
        let segs = closed_segments(curve);
        for (a, b) in &segs {
            if norm2(&sub(a, b)).is_zero() {
                return Err(Error::pre(format!("curve {ci} repeats a vertex")));
            }
        }
        // The tube must stay strictly inside the cube.
        for p in curve {
            for c in p {
                if c <= r || *c >= &one - r {
                    return Err(Error::pre(format!(
                        "curve {ci} comes within the tube radius of the cube boundary"
                    )));
                }
            }
        }
        segments.push(segs);
    }
    // Tubes of distinct curves must not merge.
    let four_r2 = BigRational::from_integer(4.into()) * &r2;
    for i in 0..segments.len() {
        for j in i + 1..segments.len() {
            for (a, b) in &segments[i] {
                for (c, d) in &segments[j] {
                    if segment_segment_dist2(a, b, c, d) <= four_r2 {
                        return Err(Error::pre(format!(
                            "curves {i} and {j} are within twice the tube radius of each other"
                        )));
                    }
                }
            }
        }
    }

    let res_rat = BigRational::from_integer((res as i64).into());
    let coord = |k: usize| BigRational::from_integer((k as i64).into()) / res_rat.clone();
    let center_coord = |k: usize| {
        BigRational::from_integer((2 * k as i64 + 1).into())
            / (BigRational::from_integer(2.into()) * res_rat.clone())
    };

    let mut removed = vec![false; res * res * res];
    let cell_id = |i: usize, j: usize, k: usize| (i * res + j) * res + k;
    let mut removed_cells = 0;
    for i in 0..res {
        for j in 0..res {
            for k in 0..res {
                let center = [center_coord(i), center_coord(j), center_coord(k)];
                let lo = [coord(i), coord(j), coord(k)];
                let hi = [coord(i + 1), coord(j + 1), coord(k + 1)];
                let hit = segments.iter().flatten().any(|(a, b)| {
                    segment_point_dist2(a, b, &center) <= r2
                        || segment_box_intersects(a, b, &lo, &hi)
                });
                if hit {
                    removed[cell_id(i, j, k)] = true;
                    removed_cells += 1;
                }
            }
        }
    }

    let n = res + 1;
    let vid = |x: usize, y: usize, z: usize| (x * n + y) * n + z;
    let infinity = n * n * n;
    const PERMS: [[usize; 3]; 6] =
        [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

    let mut tets: Vec<Vec<usize>> = Vec::new();
    for i in 0..res {
        for j in 0..res {
            for k in 0..res {
                if removed[cell_id(i, j, k)] {
                    continue;
                }
                for perm in &PERMS {
                    let mut corner = [i, j, k];
                    let mut tet = vec![vid(corner[0], corner[1], corner[2])];
                    for &axis in perm {
                        corner[axis] += 1;
                        tet.push(vid(corner[0], corner[1], corner[2]));
                    }
                    tet.sort_unstable();
                    tets.push(tet);
                }
            }
        }
    }

    // Cone every triangle on the outer surface of the cube to the extra
    // vertex. Tubes stay strictly interior, so the surface is complete and
    // each outer triangle belongs to exactly one surviving tetrahedron.
    let on_outer_plane = |t: &[usize]| -> bool {
        (0..3).any(|axis| {
            let coord_of = |v: usize| match axis {
                0 => v / (n * n),
                1 => (v / n) % n,
                _ => v % n,
            };
            t.iter().all(|&v| coord_of(v) == 0) || t.iter().all(|&v| coord_of(v) == res)
        })
    };
    let mut cone_tets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for tet in &tets {
        for drop in 0..4 {
            let mut tri: Vec<usize> = tet.clone();
            tri.remove(drop);
            if on_outer_plane(&tri) {
                let mut cone = tri;
                cone.push(infinity);
                cone_tets.insert(cone);
            }
        }
    }
    tets.extend(cone_tets);

    let complex = SimplicialComplex::from_simplices(tets)?;
    Ok(GridComplement { resolution: res, complex, infinity, removed_cells })
}

/// An ellipsoid-sphere inside the unit cube of any dimension: the solution
/// set of w_a = 0 for the pinned axes together with
/// sum_unit w_j^2 + sum_quarter w_j^2 / 4 = 1, where w = scale (u - center)
/// maps cube coordinates to world coordinates.
#[derive(Debug, Clone)]
pub struct FlatSphere {
    pub pinned: Vec<usize>,
    pub unit: Vec<usize>,
    pub quarter: Vec<usize>,
    /// Cube coordinates of the center, one entry per ambient axis.
    pub center: Vec<BigRational>,
    /// World units per cube edge; larger scale means a smaller sphere.
    pub scale: BigRational,
}

/// Interval bounds of x^2 for x in [lo, hi].
fn square_interval(lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
    let l2 = lo * lo;
    let h2 = hi * hi;
    let max = if l2 > h2 { l2.clone() } else { h2.clone() };
    if !lo.is_positive() && !hi.is_negative() {
        (BigRational::zero(), max)
    } else {
        (if l2 < h2 { l2 } else { h2 }, max)
    }
}

impl FlatSphere {
    pub fn sphere_dim(&self) -> usize {
        self.unit.len() + self.quarter.len() - 1
    }

    fn world(&self, axis: usize, u: &BigRational) -> BigRational {
        &self.scale * (u - &self.center[axis])
    }

    /// The quadric sum_unit w^2 + sum_quarter w^2/4 at a cube point.
    fn f_value(&self, u: &[BigRational]) -> BigRational {
        let four = BigRational::from_integer(4.into());
        let mut acc = BigRational::zero();
        for &j in &self.unit {
            let w = self.world(j, &u[j]);
            acc += &w * &w;
        }
        for &j in &self.quarter {
            let w = self.world(j, &u[j]);
            acc += &w * &w / &four;
        }
        acc
    }

    fn g_value(&self, u: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for &j in &self.pinned {
            let w = self.world(j, &u[j]);
            acc += &w * &w;
        }
        acc
    }

    fn f_interval(&self, lo: &[BigRational], hi: &[BigRational]) -> (BigRational, BigRational) {
        let four = BigRational::from_integer(4.into());
        let mut min = BigRational::zero();
        let mut max = BigRational::zero();
        for &j in &self.unit {
            let (a, b) = square_interval(&self.world(j, &lo[j]), &self.world(j, &hi[j]));
            min += a;
            max += b;
        }
        for &j in &self.quarter {
            let (a, b) = square_interval(&self.world(j, &lo[j]), &self.world(j, &hi[j]));
            min += a / &four;
            max += b / &four;
        }
        (min, max)
    }

    fn g_min(&self, lo: &[BigRational], hi: &[BigRational]) -> BigRational {
        let mut min = BigRational::zero();
        for &j in &self.pinned {
            let (a, _) = square_interval(&self.world(j, &lo[j]), &self.world(j, &hi[j]));
            min += a;
        }
        min
    }

    fn validate(&self, dim: usize) -> Result<()> {
        if self.center.len() != dim {
            return Err(Error::pre("sphere center has the wrong dimension"));
        }
        if !self.scale.is_positive() {
            return Err(Error::pre("sphere scale must be positive"));
        }
        if self.unit.len() + self.quarter.len() < 2 {
            return Err(Error::pre("sphere needs at least two radial axes"));
        }
        let mut seen = vec![false; dim];
        for &j in self.pinned.iter().chain(&self.unit).chain(&self.quarter) {
            if j >= dim || seen[j] {
                return Err(Error::pre("sphere axes must partition distinct coordinates"));
            }
            seen[j] = true;
        }
        Ok(())
    }
}

/// A triangulated S^d minus tubes around flat spheres, any dimension.
#[derive(Debug)]
pub struct HyperComplement {
    pub dim: usize,
    pub resolution: usize,
    pub complex: SimplicialComplex,
    pub infinity: usize,
    pub removed_cells: usize,
    /// True when tubes around different spheres share or neighbor a cell;
    /// results are then qualitative only.
    pub tubes_touch: bool,
}

impl HyperComplement {
    /// Cube coordinates of a grid vertex; None for the coning vertex.
    pub fn vertex_point(&self, v: usize) -> Option<Vec<BigRational>> {
        if v >= self.infinity {
            return None;
        }
        let n = self.resolution + 1;
        let res = BigRational::from_integer((self.resolution as i64).into());
        let mut rest = v;
        let mut out = vec![BigRational::zero(); self.dim];
        for axis in (0..self.dim).rev() {
            out[axis] = BigRational::from_integer(((rest % n) as i64).into()) / res.clone();
            rest /= n;
        }
        Some(out)
    }
}

fn permutations(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(d - 1) {
        for slot in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(slot, d - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

/// Triangulates S^dim minus tubes around the given spheres. A cell goes when
/// its center lies in the shell G <= r^2, (1-r)^2 <= F <= (1+r)^2 around
/// some sphere, or when interval bounds show the sphere passes through the
/// cell. The shell sits between the true r-tube and the 2r-tube, and both
/// tests are exact rational comparisons. Tubes reaching the cube boundary
/// are always rejected because the coning needs the full outer surface; in
/// strict mode tubes touching each other are rejected too, otherwise the
/// contact is only flagged and the result is qualitative.
pub fn build_sphere_complement(
    dim: usize,
    resolution: usize,
    spheres: &[FlatSphere],
    tube_radius: &BigRational,
    strict: bool,
) -> Result<HyperComplement> {
    if dim < 2 {
        return Err(Error::pre("ambient dimension must be at least 2"));
    }
    if resolution < 2 {
        return Err(Error::pre("resolution must be at least 2"));
    }
    if !tube_radius.is_positive() {
        return Err(Error::pre("tube radius must be positive"));
    }
    if spheres.len() > 8 {
        return Err(Error::pre("at most eight spheres are supported"));
    }
    for s in spheres {
        s.validate(dim)?;
    }
    let r2 = tube_radius * tube_radius;
    let one = BigRational::from_integer(1.into());
    let f_lo = {
        let t = &one - tube_radius;
        if t.is_positive() { &t * &t } else { BigRational::zero() }
    };
    let f_hi = {
        let t = &one + tube_radius;
        &t * &t
    };

    let res = resolution;
    let n_cells: usize = res.pow(dim as u32);
    let res_rat = BigRational::from_integer((res as i64).into());
    let cell_coords = |mut id: usize| -> Vec<usize> {
        let mut c = vec![0usize; dim];
        for axis in (0..dim).rev() {
            c[axis] = id % res;
            id /= res;
        }
        c
    };

    let mut masks = vec![0u8; n_cells];
    let mut removed_cells = 0;
    for id in 0..n_cells {
        let cell = cell_coords(id);
        let lo: Vec<BigRational> = cell
            .iter()
            .map(|&k| BigRational::from_integer((k as i64).into()) / res_rat.clone())
            .collect();
        let hi: Vec<BigRational> = cell
            .iter()
            .map(|&k| BigRational::from_integer((k as i64 + 1).into()) / res_rat.clone())
            .collect();
        let center: Vec<BigRational> = lo
            .iter()
            .zip(&hi)
            .map(|(a, b)| (a + b) / BigRational::from_integer(2.into()))
            .collect();
        let mut mask = 0u8;
        for (si, s) in spheres.iter().enumerate() {
            let in_shell = s.g_value(&center) <= r2 && {
                let f = s.f_value(&center);
                f_lo <= f && f <= f_hi
            };
            let may_touch = s.g_min(&lo, &hi).is_zero() && {
                let (fmin, fmax) = s.f_interval(&lo, &hi);
                fmin <= one && one <= fmax
            };
            if in_shell || may_touch {
                mask |= 1 << si;
            }
        }
        if mask != 0 {
            masks[id] = mask;
            removed_cells += 1;
            if cell.iter().any(|&k| k == 0 || k == res - 1) {
                return Err(Error::pre(
                    "a tube reaches the cube boundary; shrink the radius or raise the resolution",
                ));
            }
        }
    }

    // Tubes of different spheres should stay a full cell apart.
    let mut tubes_touch = masks.iter().any(|&m| m != 0 && m & (m - 1) != 0);
    let offsets: Vec<Vec<isize>> = {
        let mut out = vec![Vec::new()];
        for _ in 0..dim {
            out = out
                .into_iter()
                .flat_map(|v| {
                    [-1isize, 0, 1].iter().map(move |&d| {
                        let mut w = v.clone();
                        w.push(d);
                        w
                    })
                })
                .collect();
        }
        out
    };
    'scan: for id in 0..n_cells {
        if tubes_touch {
            break;
        }
        if masks[id] == 0 {
            continue;
        }
        let cell = cell_coords(id);
        for off in &offsets {
            let mut neighbor = 0usize;
            let mut ok = true;
            for axis in 0..dim {
                let c = cell[axis] as isize + off[axis];
                if c < 0 || c >= res as isize {
                    ok = false;
                    break;
                }
                neighbor = neighbor * res + c as usize;
            }
            if ok && masks[neighbor] != 0 && masks[neighbor] != masks[id] {
                tubes_touch = true;
                continue 'scan;
            }
        }
    }
    if strict && tubes_touch {
        return Err(Error::pre(
            "tubes around different spheres merge; shrink the radius or raise the resolution",
        ));
    }

    let n = res + 1;
    let n_vertices: usize = n.pow(dim as u32);
    let infinity = n_vertices;
    let vid = |coords: &[usize]| -> usize {
        coords.iter().fold(0usize, |acc, &c| acc * n + c)
    };
    let perms = permutations(dim);
    let mut tops: Vec<Vec<usize>> = Vec::new();
    for id in 0..n_cells {
        if masks[id] != 0 {
            continue;
        }
        let cell = cell_coords(id);
        for perm in &perms {
            let mut corner = cell.clone();
            let mut simplex = vec![vid(&corner)];
            for &axis in perm {
                corner[axis] += 1;
                simplex.push(vid(&corner));
            }
            simplex.sort_unstable();
            tops.push(simplex);
        }
    }

    let axis_coord = |v: usize, axis: usize| -> usize {
        (v / n.pow((dim - 1 - axis) as u32)) % n
    };
    let on_outer_plane = |f: &[usize]| -> bool {
        (0..dim).any(|axis| {
            f.iter().all(|&v| axis_coord(v, axis) == 0)
                || f.iter().all(|&v| axis_coord(v, axis) == res)
        })
    };
    let mut cone_tops: BTreeSet<Vec<usize>> = BTreeSet::new();
    for top in &tops {
        for drop in 0..top.len() {
            let mut facet = top.clone();
            facet.remove(drop);
            if on_outer_plane(&facet) {
                let mut cone = facet;
                cone.push(infinity);
                cone_tops.insert(cone);
            }
        }
    }
    tops.extend(cone_tops);

    let complex = SimplicialComplex::from_simplices(tops)?;
    Ok(HyperComplement { dim, resolution, complex, infinity, removed_cells, tubes_touch })
}

enum DenseSolve {
    Unique(Vec<BigRational>),
    NoSolution,
    Underdetermined,
}

/// Exact Gaussian elimination on a small dense system.
fn solve_dense(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> DenseSolve {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivot_of_col = vec![usize::MAX; cols];
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(row, p);
        b.swap(row, p);
        for i in 0..rows {
            if i != row && !a[i][col].is_zero() {
                let factor = &a[i][col] / &a[row][col];
                for j in col..cols {
                    let t = &a[row][j] * &factor;
                    a[i][j] = &a[i][j] - &t;
                }
                let t = &b[row] * &factor;
                b[i] = &b[i] - &t;
            }
        }
        pivot_of_col[col] = row;
        row += 1;
        if row == rows {
            break;
        }
    }
    if (row..rows).any(|i| !b[i].is_zero()) {
        return DenseSolve::NoSolution;
    }
    if pivot_of_col.iter().any(|&p| p == usize::MAX) {
        return DenseSolve::Underdetermined;
    }
    let mut x = vec![BigRational::zero(); cols];
    for col in 0..cols {
        let p = pivot_of_col[col];
        x[col] = &b[p] / &a[p][col];
    }
    DenseSolve::Unique(x)
}

fn det_dense(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::from_integer(1.into());
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !a[i][col].is_zero()) else {
            return BigRational::zero();
        };
        if p != col {
            a.swap(col, p);
            det = -det;
        }
        det *= &a[col][col];
        for i in col + 1..n {
            if !a[i][col].is_zero() {
                let factor = &a[i][col] / &a[col][col];
                for j in col..n {
                    let t = &a[col][j] * &factor;
                    a[i][j] = &a[i][j] - &t;
                }
            }
        }
    }
    det
}

/// Signed crossing count of each simplex of matching degree with the flat
/// membrane {w_pinned = 0, F <= 1} bounded by the sphere: its Alexander
/// dual in the complement. Exact linear solves decide every crossing; any
/// tangency or boundary hit is reported as a precondition failure rather
/// than resolved by convention.
pub fn flat_membrane_cochain(
    g: &HyperComplement,
    field: &Field,
    s: &FlatSphere,
) -> Result<SparseVec> {
    s.validate(g.dim)?;
    let m = s.pinned.len();
    if m == 0 {
        return Err(Error::pre("membrane needs at least one pinned axis"));
    }
    let res = BigRational::from_integer((g.resolution as i64).into());
    for &axis in &s.pinned {
        if (&s.center[axis] * &res).is_integer() {
            return Err(Error::pre(
                "membrane subspace passes through grid vertices; perturb the center",
            ));
        }
    }
    let one = BigRational::from_integer(1.into());
    let mut out = SparseVec::new();
    'simplex: for (idx, simplex) in g.complex.simplices(m).iter().enumerate() {
        let mut points = Vec::with_capacity(m + 1);
        for &v in simplex.iter() {
            match g.vertex_point(v) {
                Some(p) => points.push(p),
                None => continue 'simplex,
            }
        }
        // Barycentric coordinates of the point of the simplex hitting the
        // pinned subspace.
        let mut a = vec![vec![BigRational::from_integer(1.into()); m + 1]];
        let mut b = vec![one.clone()];
        for &axis in &s.pinned {
            a.push(points.iter().map(|p| &p[axis] - &s.center[axis]).collect());
            b.push(BigRational::zero());
        }
        let lambda = match solve_dense(a, b) {
            DenseSolve::Unique(x) => x,
            DenseSolve::NoSolution => continue,
            DenseSolve::Underdetermined => {
                return Err(Error::pre(
                    "a simplex lies parallel to the membrane subspace; perturb the center",
                ))
            }
        };
        if lambda.iter().any(|l| l.is_zero()) {
            return Err(Error::pre(
                "a crossing lands on a simplex boundary; perturb the center",
            ));
        }
        if lambda.iter().any(|l| l.is_negative()) {
            continue;
        }
        let mut hit = vec![BigRational::zero(); g.dim];
        for (l, p) in lambda.iter().zip(&points) {
            for axis in 0..g.dim {
                hit[axis] += l * &p[axis];
            }
        }
        let f = s.f_value(&hit);
        if f == one {
            return Err(Error::pre(
                "a crossing lands exactly on the membrane boundary sphere; perturb the curve",
            ));
        }
        if f > one {
            continue;
        }
        let mat: Vec<Vec<BigRational>> = s
            .pinned
            .iter()
            .map(|&axis| (1..=m).map(|k| &points[k][axis] - &points[0][axis]).collect())
            .collect();
        let det = det_dense(mat);
        let sign = if det.is_positive() { field.one() } else { field.neg(&field.one()) };
        out.set(field, idx, sign);
    }
    Ok(out)
}

enum Containment {
    Inside,
    Outside,
    OnBoundary,
}

/// Even-odd containment of a point in a closed polygon, exactly.
fn point_in_polygon(
    poly: &[(BigRational, BigRational)],
    p: &(BigRational, BigRational),
) -> Containment {
    let n = poly.len();
    // Boundary pass: exact point-on-segment tests.
    for i in 0..n {
        let s = &poly[i];
        let e = &poly[(i + 1) % n];
        let cross = (&e.0 - &s.0) * (&p.1 - &s.1) - (&e.1 - &s.1) * (&p.0 - &s.0);
        if cross.is_zero() {
            let in_x = (&p.0 >= &s.0 && &p.0 <= &e.0) || (&p.0 >= &e.0 && &p.0 <= &s.0);
            let in_y = (&p.1 >= &s.1 && &p.1 <= &e.1) || (&p.1 >= &e.1 && &p.1 <= &s.1);
            if in_x && in_y {
                return Containment::OnBoundary;
            }
        }
    }
    let mut inside = false;
    for i in 0..n {
        let s = &poly[i];
        let e = &poly[(i + 1) % n];
        if (s.1 > p.1) != (e.1 > p.1) {
            let x_int = &s.0 + (&p.1 - &s.1) * (&e.0 - &s.0) / (&e.1 - &s.1);
            if x_int > p.0 {
                inside = !inside;
            }
        }
    }
    if inside {
        Containment::Inside
    } else {
        Containment::Outside
    }
}

/// The 1-cochain counting signed crossings of each edge with the flat
/// membrane spanned by a planar axis-aligned curve: the discrete Alexander
/// dual of that link component. Requires the membrane plane to miss all grid
/// vertices and every crossing to stay clear of the membrane boundary, which
/// exact arithmetic lets us verify rather than assume.
pub fn membrane_cochain(
    g: &GridComplement,
    field: &Field,
    curve: &[Point],
) -> Result<SparseVec> {
    if curve.len() < 3 {
        return Err(Error::pre("curve needs at least three vertices"));
    }
    let axis = (0..3)
        .find(|&a| curve.iter().all(|p| p[a] == curve[0][a]))
        .ok_or_else(|| Error::pre("membranes need a curve lying in a coordinate plane"))?;
    let c = curve[0][axis].clone();
    let res = BigRational::from_integer((g.resolution as i64).into());
    let scaled = &c * &res;
    if scaled.is_integer() {
        return Err(Error::pre(
            "membrane plane passes through grid vertices; perturb the curve",
        ));
    }
    let (u_axis, v_axis) = match axis {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let poly: Vec<(BigRational, BigRational)> =
        curve.iter().map(|p| (p[u_axis].clone(), p[v_axis].clone())).collect();

    let mut out = SparseVec::new();
    for (idx, edge) in g.complex.simplices(1).iter().enumerate() {
        let (p, q) = match (g.vertex_point(edge[0]), g.vertex_point(edge[1])) {
            (Some(p), Some(q)) => (p, q),
            _ => continue,
        };
        let pa = &p[axis];
        let qa = &q[axis];
        if (pa < &c) == (qa < &c) {
            continue;
        }
        let t = (&c - pa) / (qa - pa);
        let hit = lerp(&p, &q, &t);
        let point = (hit[u_axis].clone(), hit[v_axis].clone());
        match point_in_polygon(&poly, &point) {
            Containment::Outside => {}
            Containment::OnBoundary => {
                return Err(Error::pre(
                    "an edge crosses the membrane exactly on its boundary; perturb the curve",
                ))
            }
            Containment::Inside => {
                let sign = if qa > pa { field.one() } else { field.neg(&field.one()) };
                out.set(field, idx, sign);
            }
        }
    }
    Ok(out)
}
