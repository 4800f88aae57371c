//! Vietoris-Rips filtrations from point clouds.
//!
//! Coordinates are exact rationals and all distance comparisons happen on
//! squared distances, so membership of a simplex at a given radius is never
//! subject to rounding. Levels index the supplied radii list: a simplex
//! enters at the first radius r with every pairwise squared distance at most
//! (2r)^2, and simplices that are still too wide at the last radius are left
//! out entirely.

use num::rational::BigRational;
use num::Zero;

use crate::error::{Error, Result};
use crate::simplicial::{Filtration, SimplicialComplex};

#[derive(Debug, Clone)]
pub struct PointCloud {
    /// One coordinate vector per point, all of the same length.
    pub points: Vec<Vec<BigRational>>,
}

impl PointCloud {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dist2(&self, i: usize, j: usize) -> BigRational {
        let mut acc = BigRational::zero();
        for (a, b) in self.points[i].iter().zip(&self.points[j]) {
            let d = a - b;
            acc += &d * &d;
        }
        acc
    }
}

/// Parses a CSV point cloud: one point per row, comma-separated exact
/// decimal coordinates, '#' starting a comment.
pub fn parse_point_cloud(text: &str) -> Result<PointCloud> {
    let mut points: Vec<Vec<BigRational>> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.split_once('#') {
            Some((head, _)) => head,
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let mut coords = Vec::new();
        for tok in line.split(',') {
            let c = crate::field::parse_decimal(tok.trim())
                .map_err(|e| Error::parse(format!("line {}: {e}", lineno + 1)))?;
            coords.push(c);
        }
        if let Some(first) = points.first() {
            if coords.len() != first.len() {
                return Err(Error::parse(format!(
                    "line {}: point has {} coordinates, expected {}",
                    lineno + 1,
                    coords.len(),
                    first.len()
                )));
            }
        }
        points.push(coords);
    }
    Ok(PointCloud { points })
}

pub fn load_point_cloud(path: impl AsRef<std::path::Path>) -> Result<PointCloud> {
    parse_point_cloud(&std::fs::read_to_string(path)?)
}

/// Builds the Vietoris-Rips filtration of a point cloud over the given
/// radii, as a flag complex on the edges present at the final radius,
/// truncated at `max_dim`. Vertices enter at level 0; any other simplex
/// enters at the first level where its diameter is at most twice the radius.
pub fn rips_filtration(
    cloud: &PointCloud,
    radii: &[BigRational],
    max_dim: usize,
) -> Result<Filtration> {
    if cloud.is_empty() {
        return Err(Error::pre("empty point set"));
    }
    if radii.is_empty() {
        return Err(Error::pre("empty radii list"));
    }
    for w in radii.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::pre("radii must be strictly ascending"));
        }
    }
    let thresholds: Vec<BigRational> = radii
        .iter()
        .map(|r| {
            let two_r = BigRational::from_integer(2.into()) * r;
            &two_r * &two_r
        })
        .collect();
    let n = cloud.len();

    // Level of each edge, or None when the endpoints stay too far apart.
    let edge_level = |i: usize, j: usize| -> Option<usize> {
        let d2 = cloud.dist2(i, j);
        thresholds.iter().position(|t| d2 <= *t)
    };
    let mut edges = vec![vec![None; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let lv = edge_level(i, j);
            edges[i][j] = lv;
            edges[j][i] = lv;
        }
    }

    // Grow the flag complex one dimension at a time: a simplex extends by a
    // vertex past its largest one if that vertex is close enough to every
    // current vertex, and its level is the largest of its edge levels.
    let mut simplices: Vec<(Vec<usize>, usize)> = (0..n).map(|v| (vec![v], 0)).collect();
    let mut frontier: Vec<(Vec<usize>, usize)> = simplices.clone();
    for _ in 0..max_dim {
        let mut next = Vec::new();
        for (s, lv) in &frontier {
            let top = *s.last().expect("nonempty simplex");
            for v in top + 1..n {
                let mut level = *lv;
                let mut ok = true;
                for &u in s {
                    match edges[u][v] {
                        Some(e) => level = level.max(e),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    let mut bigger = s.clone();
                    bigger.push(v);
                    next.push((bigger, level));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        simplices.extend(next.iter().cloned());
        frontier = next;
    }

    let complex = SimplicialComplex::from_simplices(simplices.iter().map(|(s, _)| s.clone()))?;
    let mut levels: Vec<Vec<usize>> = complex
        .by_dim
        .iter()
        .map(|by| vec![0; by.len()])
        .collect();
    let mut max_level = 0;
    for (s, lv) in &simplices {
        let p = s.len() - 1;
        let i = complex.simplex_index(s).expect("simplex was just inserted");
        levels[p][i] = *lv;
        max_level = max_level.max(*lv);
    }
    let filt = Filtration { complex, levels, max_level: max_level.max(radii.len() - 1) };
    filt.check_monotone()?;
    Ok(filt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::betti;
    use crate::field::{parse_decimal, Field};
    use crate::persistence::{homology_barcode, Bar};

    fn rationals(vals: &[&str]) -> Vec<BigRational> {
        vals.iter().map(|v| parse_decimal(v).unwrap()).collect()
    }

    #[test]
    fn edge_appears_once_the_radius_reaches_half_the_distance() {
        let cloud = parse_point_cloud("0\n1\n").unwrap();
        let radii = rationals(&["0.4", "0.6"]);
        let filt = rips_filtration(&cloud, &radii, 2).unwrap();
        assert_eq!(filt.complex.n_simplices(0), 2);
        assert_eq!(filt.complex.n_simplices(1), 1);
        assert_eq!(filt.levels[0], vec![0, 0]);
        assert_eq!(filt.levels[1], vec![1]);
        assert_eq!(filt.max_level, 1);
    }

    #[test]
    fn huge_radius_gives_the_full_skeleton_up_to_the_cap() {
        let cloud = parse_point_cloud("0,0\n3,0\n0,4\n5,7\n").unwrap();
        let filt = rips_filtration(&cloud, &rationals(&["100"]), 2).unwrap();
        assert_eq!(filt.complex.n_simplices(0), 4);
        assert_eq!(filt.complex.n_simplices(1), 6);
        assert_eq!(filt.complex.n_simplices(2), 4);
        assert_eq!(filt.complex.dim(), Some(2));
        assert!(filt.levels.iter().flatten().all(|&lv| lv == 0));
    }

    #[test]
    fn hexagon_cycle_lives_at_the_middle_radius() {
        let text = "2,0\n1,2\n-1,2\n-2,0\n-1,-2\n1,-2\n";
        let cloud = parse_point_cloud(text).unwrap();
        let radii = rationals(&["0.5", "1.2", "3"]);
        let filt = rips_filtration(&cloud, &radii, 2).unwrap();
        filt.check_monotone().unwrap();

        let b1_per_level: Vec<usize> = (0..=filt.max_level)
            .map(|lv| betti(&filt.complex_at(lv), Field::Q, 1))
            .collect();
        assert_eq!(b1_per_level, vec![0, 1, 0]);

        let bc = homology_barcode(&filt, Field::Q, false).unwrap();
        let h1 = bc.bars_in_degree(1);
        assert_eq!(h1, vec![Bar { degree: 1, birth: 1, last: 1, multiplicity: 1 }]);
        let h0 = bc.bars_in_degree(0);
        assert_eq!(h0.iter().map(|b| b.multiplicity).sum::<usize>(), 6);
        assert_eq!(h0.iter().filter(|b| b.last == 2).count(), 1);
    }

    #[test]
    fn bad_inputs_are_rejected() {
        let empty = PointCloud { points: Vec::new() };
        assert!(matches!(
            rips_filtration(&empty, &rationals(&["1"]), 1),
            Err(Error::Precondition(_))
        ));
        let cloud = parse_point_cloud("0\n1\n").unwrap();
        assert!(matches!(
            rips_filtration(&cloud, &rationals(&["1", "1"]), 1),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            rips_filtration(&cloud, &[], 1),
            Err(Error::Precondition(_))
        ));
        assert!(parse_point_cloud("1,2\n3\n").is_err());
        assert!(parse_point_cloud("1,x\n").is_err());
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let cloud = parse_point_cloud("# corners\n0, 0\n\n1, 0 # right\n").unwrap();
        assert_eq!(cloud.len(), 2);
        assert_eq!(cloud.dist2(0, 1), BigRational::from_integer(1.into()));
    }
}
