//! Two-dimensional Euclidean and projective geometries over GF(2^s) and
//! their point-line incidence matrices.
//!
//! With q even the incidence matrix H (points as rows, lines as columns)
//! satisfies H·Hᵀ = all-ones over GF(2): the diagonal is the odd per-point
//! line count q+1 and any two distinct points share exactly one line.

use crate::binmat::BinaryMatrix;
use crate::error::Result;
use crate::gf2ext::Gf2Ext;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeometryKind {
    Euclidean,
    Projective,
}

impl GeometryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GeometryKind::Euclidean => "euclidean",
            GeometryKind::Projective => "projective",
        }
    }
}

#[derive(Clone, Debug)]
pub struct FiniteGeometry {
    pub kind: GeometryKind,
    pub s: usize,
    /// Field size q = 2^s.
    pub q: usize,
    pub point_count: usize,
    pub line_count: usize,
    /// rho: number of points on every line.
    pub points_per_line: usize,
    /// gamma: number of lines through every point.
    pub lines_per_point: usize,
    /// Point indices per line, ascending.
    pub lines: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct IncidenceMatrix {
    /// point_count x line_count; column j is the incidence vector of line j.
    pub h: BinaryMatrix,
    pub geometry: FiniteGeometry,
}

fn incidence_from_lines(geometry: FiniteGeometry) -> IncidenceMatrix {
    let mut h = BinaryMatrix::zeros(geometry.point_count, geometry.line_count);
    for (j, line) in geometry.lines.iter().enumerate() {
        for &p in line {
            h.set(p, j, true);
        }
    }
    IncidenceMatrix { h, geometry }
}

/// Euclidean plane EG(2, 2^s): points are pairs (x, y) indexed x·q + y.
/// Lines y = a·x + b come first, ordered by (a, b) and indexed a·q + b,
/// followed by the vertical lines x = c at index q² + c.
pub fn construct_eg(s: usize) -> Result<IncidenceMatrix> {
    let field = Gf2Ext::new(s)?;
    let q = field.size();
    let mut lines = Vec::with_capacity(q * q + q);
    for a in field.elements() {
        for b in field.elements() {
            let line: Vec<usize> = field
                .elements()
                .map(|t| t as usize * q + field.add(field.mul(a, t), b) as usize)
                .collect();
            lines.push(sorted(line));
        }
    }
    for c in field.elements() {
        lines.push((0..q).map(|t| c as usize * q + t).collect());
    }
    Ok(incidence_from_lines(FiniteGeometry {
        kind: GeometryKind::Euclidean,
        s,
        q,
        point_count: q * q,
        line_count: q * q + q,
        points_per_line: q,
        lines_per_point: q + 1,
        lines,
    }))
}

/// Projective plane PG(2, 2^s): points are the nonzero triples over F_q
/// normalized so their first nonzero coordinate is 1, in lexicographic
/// order. The plane is self-dual; line j uses the same triple list, and
/// point i lies on line j iff the triples are orthogonal.
pub fn construct_pg(s: usize) -> Result<IncidenceMatrix> {
    let field = Gf2Ext::new(s)?;
    let q = field.size();
    let mut triples: Vec<[u32; 3]> = Vec::with_capacity(q * q + q + 1);
    triples.push([0, 0, 1]);
    for z in field.elements() {
        triples.push([0, 1, z]);
    }
    for y in field.elements() {
        for z in field.elements() {
            triples.push([1, y, z]);
        }
    }
    triples.sort_unstable();

    let dot_is_zero = |a: &[u32; 3], x: &[u32; 3]| {
        field.add(field.add(field.mul(a[0], x[0]), field.mul(a[1], x[1])), field.mul(a[2], x[2]))
            == 0
    };
    let lines: Vec<Vec<usize>> = triples
        .iter()
        .map(|a| {
            (0..triples.len())
                .filter(|&i| dot_is_zero(a, &triples[i]))
                .collect()
        })
        .collect();
    let n = q * q + q + 1;
    Ok(incidence_from_lines(FiniteGeometry {
        kind: GeometryKind::Projective,
        s,
        q,
        point_count: n,
        line_count: n,
        points_per_line: q + 1,
        lines_per_point: q + 1,
        lines,
    }))
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

/// Exhaustive check that every unordered point pair lies on exactly one
/// common line.
pub fn two_points_one_line(g: &FiniteGeometry) -> bool {
    let n = g.point_count;
    let mut pair_count = vec![0u8; n * n];
    for line in &g.lines {
        for (i, &a) in line.iter().enumerate() {
            for &b in &line[i + 1..] {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                pair_count[lo * n + hi] = pair_count[lo * n + hi].saturating_add(1);
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if pair_count[a * n + b] != 1 {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eg_s1_exact_incidence() {
        // Hand enumeration over GF(2): points (0,0),(0,1),(1,0),(1,1) as
        // rows, slope lines (a,b) in order then verticals as columns.
        let inc = construct_eg(1).unwrap();
        let g = &inc.geometry;
        assert_eq!((g.point_count, g.line_count), (4, 6));
        assert_eq!((g.points_per_line, g.lines_per_point), (2, 3));
        assert_eq!(
            g.lines,
            vec![
                vec![0, 2],
                vec![1, 3],
                vec![0, 3],
                vec![1, 2],
                vec![0, 1],
                vec![2, 3],
            ]
        );
        let expect = BinaryMatrix::from_rows(&[
            vec![1, 0, 1, 0, 1, 0],
            vec![0, 1, 0, 1, 1, 0],
            vec![1, 0, 0, 1, 0, 1],
            vec![0, 1, 1, 0, 0, 1],
        ]);
        assert_eq!(inc.h, expect);
    }

    #[test]
    fn eg_counts() {
        for (s, n, m) in [(1, 4, 6), (2, 16, 20), (3, 64, 72), (4, 256, 272)] {
            let inc = construct_eg(s).unwrap();
            assert_eq!(inc.geometry.point_count, n);
            assert_eq!(inc.geometry.line_count, m);
            assert_eq!((inc.h.rows(), inc.h.cols()), (n, m));
        }
    }

    #[test]
    fn pg_counts() {
        for (s, n) in [(1, 7), (2, 21), (3, 73), (4, 273)] {
            let inc = construct_pg(s).unwrap();
            assert_eq!(inc.geometry.point_count, n);
            assert_eq!(inc.geometry.line_count, n);
            assert_eq!(inc.geometry.points_per_line, inc.geometry.q + 1);
        }
    }

    #[test]
    fn incidence_weights() {
        for s in 1..=4 {
            for inc in [construct_eg(s).unwrap(), construct_pg(s).unwrap()] {
                let g = &inc.geometry;
                for r in 0..inc.h.rows() {
                    assert_eq!(inc.h.row_weight(r), g.lines_per_point, "{:?} s={s}", g.kind);
                }
                for c in 0..inc.h.cols() {
                    assert_eq!(inc.h.column_weight(c), g.points_per_line, "{:?} s={s}", g.kind);
                }
            }
        }
    }

    #[test]
    fn product_is_all_ones() {
        for s in 1..=4 {
            for inc in [construct_eg(s).unwrap(), construct_pg(s).unwrap()] {
                let prod = inc.h.mul_transpose(&inc.h).unwrap();
                assert!(prod.is_all_ones(), "{:?} s={s}", inc.geometry.kind);
            }
        }
    }

    #[test]
    fn pair_coverage() {
        assert!(two_points_one_line(&construct_eg(2).unwrap().geometry));
        assert!(two_points_one_line(&construct_pg(1).unwrap().geometry));
        assert!(two_points_one_line(&construct_eg(3).unwrap().geometry));
        assert!(two_points_one_line(&construct_pg(3).unwrap().geometry));
    }

    #[test]
    fn mutated_incidence_fails_pair_coverage() {
        let mut g = construct_eg(1).unwrap().geometry;
        // Adding a stray point to a line double-covers one pair.
        g.lines[0].push(1);
        assert!(!two_points_one_line(&g));
    }

    #[test]
    fn line_pairs_meet_in_at_most_one_point() {
        for s in 1..=4 {
            for inc in [construct_eg(s).unwrap(), construct_pg(s).unwrap()] {
                let lines = &inc.geometry.lines;
                for i in 0..lines.len() {
                    for j in i + 1..lines.len() {
                        let common = lines[i].iter().filter(|p| lines[j].contains(p)).count();
                        let projective = inc.geometry.kind == GeometryKind::Projective;
                        if projective {
                            assert_eq!(common, 1, "{:?} s={s} lines {i},{j}", inc.geometry.kind);
                        } else {
                            assert!(common <= 1, "{:?} s={s} lines {i},{j}", inc.geometry.kind);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dropping_an_origin_line_breaks_the_product() {
        // The all-ones product needs every line kept, including the family
        // through the origin; deleting any one of those columns uncovers
        // some point pair.
        let inc = construct_eg(2).unwrap();
        let q = inc.geometry.q;
        let origin_lines: Vec<usize> = (0..inc.geometry.line_count)
            .filter(|&j| inc.geometry.lines[j].contains(&0))
            .collect();
        assert_eq!(origin_lines.len(), q + 1);
        for &drop in &origin_lines {
            let kept: Vec<Vec<u8>> = (0..inc.h.rows())
                .map(|r| {
                    (0..inc.h.cols())
                        .filter(|&c| c != drop)
                        .map(|c| inc.h.get(r, c) as u8)
                        .collect()
                })
                .collect();
            let m = BinaryMatrix::from_rows(&kept);
            assert!(!m.mul_transpose(&m).unwrap().is_all_ones(), "line {drop}");
        }
    }

    #[test]
    fn construction_is_deterministic() {
        let a = construct_pg(2).unwrap();
        let b = construct_pg(2).unwrap();
        assert_eq!(a.h, b.h);
        assert_eq!(a.geometry.lines, b.geometry.lines);
    }
}
