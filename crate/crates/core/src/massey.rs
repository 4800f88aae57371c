//! Triple Massey products on simplicial cochains, with the indeterminacy
//! coset made explicit, the comparison against the transferred mu_3, and an
//! end-to-end link detection pipeline on grid complements: spaces the cup
//! product cannot tell apart, told apart here.

use num::BigRational;
use serde_json::json;

use crate::ainfty::AInftyStructure;
use crate::chain::{chain_complex, cohomology_basis};
use crate::diagonal::{coboundary, cup_on_cochains, cup_pairing_rank};
use crate::error::{Error, Result};
use crate::field::{parse_decimal, Field};
use crate::graded::{op_lookup, Deg};
use crate::grid::{
    build_link_complement, build_sphere_complement, flat_membrane_cochain, membrane_cochain,
    FlatSphere, LinkSpec, Point,
};
use crate::matrix::SparseVec;
use crate::simplicial::SimplicialComplex;
use crate::subspace::Subspace;
use crate::transfer::{cochain_contraction, transfer_algebra, CochainContraction};

/// A triple Massey product <[a], [b], [c]>: one representative class plus
/// the indeterminacy subspace [a] cup H^{q+r-1} + H^{p+q-1} cup [c], both as
/// coordinates on a fixed basis of H^{p+q+r-1}. When `defined` is false the
/// coset fields are zero and meaningless.
#[derive(Debug, Clone)]
pub struct MasseyTriple {
    pub field: Field,
    pub degree: usize,
    pub defined: bool,
    pub representative: SparseVec,
    pub indeterminacy: Subspace,
}

impl MasseyTriple {
    /// Whether the class with these coordinates belongs to the coset.
    pub fn contains(&self, class: &SparseVec) -> bool {
        if !self.defined {
            return false;
        }
        let mut diff = class.clone();
        diff.add_scaled(&self.field, &self.field.neg(&self.field.one()), &self.representative);
        self.indeterminacy.contains(&diff)
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&SparseVec::new())
    }
}

/// The triple Massey product of cocycles a, b, c of pure degrees p, q, r.
/// If [a cup b] or [b cup c] is nonzero the product is undefined; otherwise
/// bounding cochains x, y with dx = a cup b and dy = b cup c are solved for
/// exactly and the representative is [x cup c - (-1)^p a cup y].
pub fn triple_massey(
    k: &SimplicialComplex,
    field: Field,
    p: usize,
    a: &SparseVec,
    q: usize,
    b: &SparseVec,
    r: usize,
    c: &SparseVec,
) -> Result<MasseyTriple> {
    if p == 0 || q == 0 || r == 0 {
        return Err(Error::pre("Massey product arguments must have positive degree"));
    }
    let cx = chain_complex(k, field, false);
    for (deg, v, name) in [(p, a, "first"), (q, b, "second"), (r, c, "third")] {
        if !coboundary(&cx, deg, v).is_zero() {
            return Err(Error::pre(format!("{name} argument is not a cocycle")));
        }
    }
    let degree = p + q + r - 1;
    let h_out = cohomology_basis(&cx, degree);
    let ab = cup_on_cochains(k, field, p, q, a, b);
    let bc = cup_on_cochains(k, field, q, r, b, c);
    let obstructed = !cohomology_basis(&cx, p + q).is_boundary(&ab)?
        || !cohomology_basis(&cx, q + r).is_boundary(&bc)?;
    if obstructed {
        return Ok(MasseyTriple {
            field,
            degree,
            defined: false,
            representative: SparseVec::new(),
            indeterminacy: Subspace::zero(field, h_out.dim()),
        });
    }
    let x = cx.coboundary(p + q - 1).reduce().solve(&ab)?;
    let y = cx.coboundary(q + r - 1).reduce().solve(&bc)?;
    let mut w = cup_on_cochains(k, field, p + q - 1, r, &x, c);
    let ay = cup_on_cochains(k, field, p, q + r - 1, a, &y);
    w.add_scaled(&field, &field.neg(&field.sign(p as i64)), &ay);
    let representative = h_out.class_coords(&w)?;
    let mut span = Vec::new();
    for z in &cohomology_basis(&cx, q + r - 1).reps {
        span.push(h_out.class_coords(&cup_on_cochains(k, field, p, q + r - 1, a, z))?);
    }
    for z in &cohomology_basis(&cx, p + q - 1).reps {
        span.push(h_out.class_coords(&cup_on_cochains(k, field, p + q - 1, r, z, c))?);
    }
    let indeterminacy = Subspace::spanned_by(field, h_out.dim(), &span);
    Ok(MasseyTriple { field, degree, defined: true, representative, indeterminacy })
}

/// Rank of the cup pairing H^1 (x) H^1 -> H^2: zero on split unlink
/// complements, nonzero on the Hopf link complement.
pub fn hopf_cup_check(k: &SimplicialComplex, field: Field) -> Result<usize> {
    cup_pairing_rank(k, field, 1, 1)
}

/// mu_3 of the classes of three cochains through a transferred structure,
/// in the contraction's class coordinates of degree p + q + r - 1.
fn transferred_mu3(
    st: &AInftyStructure,
    con: &CochainContraction,
    p: usize,
    a: &SparseVec,
    q: usize,
    b: &SparseVec,
    r: usize,
    c: &SparseVec,
) -> SparseVec {
    let field = st.field;
    let (pa, pb, pc) = (con.project(p, a), con.project(q, b), con.project(r, c));
    let mut value = SparseVec::new();
    let Some(op3) = st.op(3) else {
        return value;
    };
    for (i, ca) in pa.iter() {
        for (j, cb) in pb.iter() {
            for (l, cc) in pc.iter() {
                let combo = op_lookup(op3, &[(p as Deg, i), (q as Deg, j), (r as Deg, l)]);
                let w = field.mul(&field.mul(ca, cb), cc);
                for (word, coeff) in &combo.terms {
                    debug_assert_eq!(word.len(), 1, "algebra op images are single letters");
                    let unit = SparseVec::unit(word.0[0].1, &field);
                    value.add_scaled(&field, &field.mul(&w, coeff), &unit);
                }
            }
        }
    }
    value
}

/// Checks that (-1)^{1+q} mu_3([a] (x) [b] (x) [c]) lies in the Massey coset
/// <[a], [b], [c]>, which holds whenever the structure really is transferred
/// from the cochains of k; a false return means the two computations
/// disagree. Errors when the product is undefined.
pub fn mu3_membership_check(
    st: &AInftyStructure,
    k: &SimplicialComplex,
    p: usize,
    a: &SparseVec,
    q: usize,
    b: &SparseVec,
    r: usize,
    c: &SparseVec,
) -> Result<bool> {
    let field = st.field;
    let triple = triple_massey(k, field, p, a, q, b, r, c)?;
    if !triple.defined {
        return Err(Error::pre("the triple Massey product is not defined for these classes"));
    }
    let cx = chain_complex(k, field, false);
    let con = cochain_contraction(&cx);
    if st.dims != con.h_dims() {
        return Err(Error::pre("structure dimensions do not match the complex's cohomology"));
    }
    let degree = p + q + r - 1;
    let value = transferred_mu3(st, &con, p, a, q, b, r, c);
    let h_out = cohomology_basis(&cx, degree);
    let mut coords = h_out.class_coords(&con.include(degree, &value))?;
    coords.scale(&field, &field.sign(1 + q as i64));
    Ok(triple.contains(&coords))
}

fn dec(s: &str) -> BigRational {
    parse_decimal(s).expect("fixture decimal")
}

/// Axis-aligned rectangle in the plane {coordinate `plane_axis` = level};
/// `u` spans the next axis cyclically and `v` the one after that.
fn rectangle(plane_axis: usize, level: &str, u: [&str; 2], v: [&str; 2]) -> Vec<Point> {
    let (ua, va) = ((plane_axis + 1) % 3, (plane_axis + 2) % 3);
    [(0, 0), (1, 0), (1, 1), (0, 1)]
        .into_iter()
        .map(|(i, j)| {
            let mut p: Point = [dec(level), dec(level), dec(level)];
            p[ua] = dec(u[i]);
            p[va] = dec(v[j]);
            p
        })
        .collect()
}

/// One flat rectangular unknot in the middle of the cube.
pub fn unknot_spec(resolution: usize) -> LinkSpec {
    let side = ["0.2875", "0.7125"];
    LinkSpec {
        curves: vec![rectangle(2, "0.5125", side, side)],
        tube_radius: dec("0.03"),
        resolution,
    }
}

/// Two split unknots in parallel planes.
pub fn two_unlink_spec(resolution: usize) -> LinkSpec {
    let side = ["0.3125", "0.6875"];
    LinkSpec {
        curves: vec![rectangle(2, "0.2625", side, side), rectangle(2, "0.7375", side, side)],
        tube_radius: dec("0.03"),
        resolution,
    }
}

/// Three split unknots stacked in parallel planes.
pub fn three_unlink_spec(resolution: usize) -> LinkSpec {
    let side = ["0.3125", "0.6875"];
    LinkSpec {
        curves: vec![
            rectangle(2, "0.2125", side, side),
            rectangle(2, "0.5125", side, side),
            rectangle(2, "0.8125", side, side),
        ],
        tube_radius: dec("0.03"),
        resolution,
    }
}

/// The Hopf link: two perpendicular rectangles clasped through each other
/// exactly once.
pub fn hopf_spec(resolution: usize) -> LinkSpec {
    LinkSpec {
        curves: vec![
            rectangle(2, "0.4875", ["0.2375", "0.7375"], ["0.1375", "0.5375"]),
            rectangle(0, "0.4875", ["0.3375", "0.7375"], ["0.2375", "0.7375"]),
        ],
        tube_radius: dec("0.03"),
        resolution,
    }
}

/// Borromean rings as three mutually perpendicular rectangles, cyclically
/// symmetric under rotating the axes: each one's long span straddles the
/// next one's plane outside its outline, so every pair is unlinked while
/// the triple is inseparable.
pub fn borromean_spec(resolution: usize) -> LinkSpec {
    let long = ["0.1375", "0.7875"];
    let short = ["0.2875", "0.6375"];
    LinkSpec {
        curves: vec![
            rectangle(2, "0.4875", long, short),
            rectangle(0, "0.4875", long, short),
            rectangle(1, "0.4875", long, short),
        ],
        tube_radius: dec("0.03"),
        resolution,
    }
}

/// Complement build plus the Massey triple of the membrane duals, for the
/// three-sphere families living in any ambient dimension.
#[derive(Debug)]
pub struct SphereLinkOutcome {
    pub complex: SimplicialComplex,
    pub triple: MasseyTriple,
    /// Carried over from the grid builder: true means tube contact made the
    /// result qualitative only.
    pub tubes_touch: bool,
}

/// Top-cell count permitted for sphere-family complements; beyond this the
/// exact solves stop being feasible.
pub const SPHERE_CELL_CAP: usize = 20_000;

/// The complement in S^{p+q+r} of the three flat spheres
/// S1 = {x = 0, |y|^2 + |z|^2/4 = 1} and its two cyclic rotations, where x,
/// y, z are blocks of p, q and r coordinates: the (1, 1, 1) case is the
/// Borromean rings, and the Massey triple of the membrane duals detects the
/// higher-dimensional linking the cup product misses.
pub fn higher_sphere_link(
    p: usize,
    q: usize,
    r: usize,
    resolution: usize,
    field: Field,
) -> Result<SphereLinkOutcome> {
    if p == 0 || q == 0 || r == 0 {
        return Err(Error::pre("sphere blocks need positive dimension"));
    }
    if (p, q, r) == (1, 1, 1) {
        let g = build_link_complement(&borromean_spec(resolution))?;
        let spec = borromean_spec(resolution);
        let duals: Vec<SparseVec> = spec
            .curves
            .iter()
            .map(|curve| membrane_cochain(&g, &field, curve))
            .collect::<Result<_>>()?;
        let triple =
            triple_massey(&g.complex, field, 1, &duals[0], 1, &duals[1], 1, &duals[2])?;
        return Ok(SphereLinkOutcome { complex: g.complex, triple, tubes_touch: false });
    }
    let dim = p + q + r;
    // res^dim cells, dim! top simplices each.
    let cells = (1..=dim)
        .try_fold(1usize, |acc, f| acc.checked_mul(f)?.checked_mul(resolution))
        .unwrap_or(usize::MAX);
    if cells > SPHERE_CELL_CAP {
        return Err(Error::pre(format!(
            "cell count {cells} above cap {SPHERE_CELL_CAP}: resolution {resolution} in dimension {dim} is out of reach"
        )));
    }
    // Distinct prime denominators keep every membrane crossing away from
    // lines through pairs of grid points, which the dual cochains require.
    let center: Vec<BigRational> = [101, 103, 107, 109, 113][..dim]
        .iter()
        .map(|&p| {
            BigRational::new(1.into(), 2.into()) + BigRational::new(1.into(), p.into())
        })
        .collect();
    let scale = dec("10");
    let x: Vec<usize> = (0..p).collect();
    let y: Vec<usize> = (p..p + q).collect();
    let z: Vec<usize> = (p + q..dim).collect();
    let spheres = [
        FlatSphere {
            pinned: x.clone(),
            unit: y.clone(),
            quarter: z.clone(),
            center: center.clone(),
            scale: scale.clone(),
        },
        FlatSphere {
            pinned: y.clone(),
            unit: z.clone(),
            quarter: x.clone(),
            center: center.clone(),
            scale: scale.clone(),
        },
        FlatSphere { pinned: z, unit: x, quarter: y, center, scale },
    ];
    let g = build_sphere_complement(dim, resolution, &spheres, &dec("0.25"), false)?;
    let a = flat_membrane_cochain(&g, &field, &spheres[0])?;
    let b = flat_membrane_cochain(&g, &field, &spheres[1])?;
    let c = flat_membrane_cochain(&g, &field, &spheres[2])?;
    let triple = triple_massey(&g.complex, field, p, &a, q, &b, r, &c)?;
    Ok(SphereLinkOutcome { complex: g.complex, triple, tubes_touch: g.tubes_touch })
}

/// Runs complement build, Betti numbers, cup pairing, Massey product,
/// transfer and the mu_3 membership verdict on one link, returning a JSON
/// report. The build starts at the requested resolution and is retried at 12
/// when the homology fails the duality screen beta = (1, m, m-1, 0) for an
/// m-component link.
pub fn link_pipeline(spec: &LinkSpec, field: Field) -> Result<serde_json::Value> {
    let m = spec.curves.len();
    if m == 0 {
        return Err(Error::pre("link needs at least one curve"));
    }
    let expected: Vec<usize> = vec![1, m, m - 1, 0];
    let mut attempts = Vec::new();
    let mut build = None;
    let mut resolutions = vec![spec.resolution];
    if spec.resolution < 12 {
        resolutions.push(12);
    }
    for res in resolutions {
        let g = build_link_complement(&spec.with_resolution(res))?;
        let cx = chain_complex(&g.complex, field, false);
        let mut betti = cx.betti_vector();
        betti.resize(4, 0);
        if betti == expected {
            build = Some((res, g, cx, betti));
            break;
        }
        attempts.push(format!("resolution {res} gave Betti numbers {betti:?}"));
    }
    let Some((resolution, g, cx, betti)) = build else {
        return Err(Error::pre(format!(
            "complement homology never matched the {m}-component pattern {expected:?}: {}",
            attempts.join("; ")
        )));
    };
    let cup_rank = cup_pairing_rank(&g.complex, field, 1, 1)?;
    let duals: Vec<SparseVec> = spec
        .curves
        .iter()
        .map(|curve| membrane_cochain(&g, &field, curve))
        .collect::<Result<_>>()?;
    let (a, b, c) = match m {
        1 => (&duals[0], &duals[0], &duals[0]),
        2 => (&duals[0], &duals[1], &duals[0]),
        _ => (&duals[0], &duals[1], &duals[2]),
    };
    let triple = triple_massey(&g.complex, field, 1, a, 1, b, 1, c)?;
    let massey = if triple.defined {
        let zero_in = triple.contains_zero();
        json!({
            "defined": true,
            "contains_zero": zero_in,
            "status": if zero_in { "contains zero" } else { "excludes zero" },
        })
    } else {
        json!({ "defined": false, "status": "undefined" })
    };
    let mu3 = if triple.defined {
        let con = cochain_contraction(&cx);
        let st = transfer_algebra(&g.complex, &con, 3)?;
        let value = transferred_mu3(&st, &con, 1, a, 1, b, 1, c);
        let h_out = cohomology_basis(&cx, 2);
        let mut coords = h_out.class_coords(&con.include(2, &value))?;
        coords.scale(&field, &field.sign(2));
        json!({
            "nonzero": !coords.is_zero(),
            "in_massey_coset": triple.contains(&coords),
            "in_indeterminacy": triple.indeterminacy.contains(&coords),
        })
    } else {
        json!({ "status": "skipped: product undefined" })
    };
    Ok(json!({
        "components": m,
        "resolution": resolution,
        "field": field.to_string(),
        "removed_cells": g.removed_cells,
        "betti": betti,
        "cup_rank_h1_h1": cup_rank,
        "massey": massey,
        "mu3": mu3,
    }))
}
