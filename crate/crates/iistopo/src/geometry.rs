//! Exact rational linear algebra over barycentric coordinates.
//!
//! Every geometric quantity in this crate is a [`Rat`] — an
//! arbitrary-precision rational — and every predicate here is decided by
//! exact arithmetic: there are no tolerances and no floating point. Points
//! are barycentric coordinate vectors over the corners of a fixed base
//! simplex, so a point in the standard n-simplex is a vector of n+1
//! nonnegative rationals summing to 1.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar used for all coordinates and volumes.
pub type Rat = BigRational;

/// The rational `num/den`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// The rational `n`.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Render a rational canonically: `"p/q"` in lowest terms, or `"p"` when
/// the denominator is 1.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `"p/q"` or `"p"`; inverse of [`format_rat`] on canonical forms.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = |why: &str| Error::invalid("rational", format!("{why}: {s:?}"));
    match s.split_once('/') {
        None => {
            let n: BigInt = s.parse().map_err(|_| bad("not an integer"))?;
            Ok(Rat::from_integer(n))
        }
        Some((p, q)) => {
            let p: BigInt = p.parse().map_err(|_| bad("bad numerator"))?;
            let q: BigInt = q.parse().map_err(|_| bad("bad denominator"))?;
            if q.is_zero() {
                return Err(bad("zero denominator"));
            }
            Ok(Rat::new(p, q))
        }
    }
}

/// Arithmetic mean of a nonempty set of points of equal dimension.
pub fn barycenter(points: &[&[Rat]]) -> Vec<Rat> {
    assert!(!points.is_empty(), "barycenter of no points");
    let dim = points[0].len();
    let k = rat_int(points.len() as i64);
    let mut acc = vec![Rat::zero(); dim];
    for p in points {
        assert_eq!(p.len(), dim, "mixed dimensions");
        for (a, x) in acc.iter_mut().zip(p.iter()) {
            *a += x;
        }
    }
    for a in &mut acc {
        *a /= &k;
    }
    acc
}

/// Exact determinant by Gaussian elimination with rational pivots.
pub fn det(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    for row in &m {
        assert_eq!(row.len(), n, "determinant of a non-square matrix");
    }
    let mut result = Rat::one();
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !m[r][col].is_zero()) {
            Some(p) => p,
            None => return Rat::zero(),
        };
        if pivot != col {
            m.swap(pivot, col);
            result = -result;
        }
        let p = m[col][col].clone();
        result *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            for c in col..n {
                let sub = &factor * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    result
}

/// Normalized volume of the simplex spanned by `points`, each given in
/// barycentric coordinates over the base corners: the fraction of the base
/// simplex's volume, computed as |det| of the coordinate matrix. Defined
/// when the number of points equals the coordinate dimension (a top
/// simplex of the base); the base simplex itself has volume exactly 1.
pub fn normalized_volume(points: &[&[Rat]]) -> Result<Rat> {
    let k = points.len();
    if k == 0 || points.iter().any(|p| p.len() != k) {
        return Err(Error::invalid(
            "volume",
            format!(
                "need k points of k barycentric coordinates, got {} of {:?}",
                k,
                points.iter().map(|p| p.len()).collect::<Vec<_>>()
            ),
        ));
    }
    let m: Vec<Vec<Rat>> = points.iter().map(|p| p.to_vec()).collect();
    Ok(det(m).abs())
}

/// Solve for the barycentric expression of `point` in terms of `verts`:
/// coefficients λ with Σλ_i·v_i = point and Σλ_i = 1.
///
/// Returns `Ok(None)` when `point` is outside the affine hull, the unique
/// solution otherwise. Affinely dependent `verts` (a degenerate simplex)
/// are an error: no simplex of a subdivision is degenerate, so hitting
/// this indicates corrupted input.
pub fn solve_barycentric(point: &[Rat], verts: &[&[Rat]]) -> Result<Option<Vec<Rat>>> {
    let dim = point.len();
    let k = verts.len();
    if k == 0 || verts.iter().any(|v| v.len() != dim) {
        return Err(Error::invalid("simplex", "dimension mismatch".to_string()));
    }
    // rows: dim coordinate equations plus the affine constraint Σλ = 1
    let mut m: Vec<Vec<Rat>> = Vec::with_capacity(dim + 1);
    for d in 0..dim {
        let mut row: Vec<Rat> = verts.iter().map(|v| v[d].clone()).collect();
        row.push(point[d].clone());
        m.push(row);
    }
    let mut ones = vec![Rat::one(); k];
    ones.push(Rat::one());
    m.push(ones);

    let rows = m.len();
    let mut pivot_of_col = vec![usize::MAX; k];
    let mut r = 0;
    for c in 0..k {
        let pivot = match (r..rows).find(|&i| !m[i][c].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        m.swap(r, pivot);
        let p = m[r][c].clone();
        for entry in &mut m[r] {
            *entry /= &p;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for cc in 0..=k {
                    let sub = &factor * &m[r][cc];
                    m[i][cc] -= sub;
                }
            }
        }
        pivot_of_col[c] = r;
        r += 1;
    }
    // rank deficiency in the columns = affinely dependent vertices
    if pivot_of_col.iter().any(|&p| p == usize::MAX) {
        return Err(Error::invalid(
            "simplex",
            "affinely dependent vertices (degenerate simplex)".to_string(),
        ));
    }
    // inconsistent row = point outside the affine hull
    for i in r..rows {
        if !m[i][k].is_zero() {
            return Ok(None);
        }
    }
    let lambda: Vec<Rat> = (0..k).map(|c| m[pivot_of_col[c]][k].clone()).collect();
    Ok(Some(lambda))
}

/// Is `point` inside the closed simplex spanned by `verts` (all barycentric
/// coefficients ≥ 0)?
pub fn point_in_simplex(point: &[Rat], verts: &[&[Rat]]) -> Result<bool> {
    Ok(match solve_barycentric(point, verts)? {
        None => false,
        Some(lambda) => lambda.iter().all(|l| !l.is_negative()),
    })
}

/// Is `point` in the relative interior of the simplex (all coefficients > 0)?
pub fn point_in_simplex_interior(point: &[Rat], verts: &[&[Rat]]) -> Result<bool> {
    Ok(match solve_barycentric(point, verts)? {
        None => false,
        Some(lambda) => lambda.iter().all(|l| l.is_positive()),
    })
}

/// Drop the first barycentric coordinate, producing coordinates in the
/// affine chart spanned by the remaining corners. An affine bijection on
/// the base simplex's hull, so incidence questions transfer exactly.
pub fn chart(coords: &[Rat]) -> Vec<Rat> {
    coords[1..].to_vec()
}

fn proj_interval(points: &[Vec<Rat>], axis: &(Rat, Rat)) -> (Rat, Rat) {
    let mut lo: Option<Rat> = None;
    let mut hi: Option<Rat> = None;
    for p in points {
        let d = &p[0] * &axis.0 + &p[1] * &axis.1;
        if lo.as_ref().is_none_or(|l| d < *l) {
            lo = Some(d.clone());
        }
        if hi.as_ref().is_none_or(|h| d > *h) {
            hi = Some(d);
        }
    }
    (lo.unwrap(), hi.unwrap())
}

/// Exact separating-axis test for two nondegenerate triangles in 2-d chart
/// coordinates: true iff their open interiors are disjoint (sharing a
/// boundary point or edge still counts as disjoint).
pub fn triangle_interiors_disjoint(t1: &[Vec<Rat>], t2: &[Vec<Rat>]) -> bool {
    debug_assert!(t1.len() == 3 && t2.len() == 3);
    debug_assert!(t1.iter().chain(t2).all(|p| p.len() == 2));
    // candidate axes: outward-rotated edges of both triangles
    let mut axes = Vec::with_capacity(6);
    for t in [t1, t2] {
        for i in 0..3 {
            let (a, b) = (&t[i], &t[(i + 1) % 3]);
            let ex = &b[0] - &a[0];
            let ey = &b[1] - &a[1];
            // normal to the edge
            axes.push((-ey, ex));
        }
    }
    for axis in &axes {
        let (lo1, hi1) = proj_interval(t1, axis);
        let (lo2, hi2) = proj_interval(t2, axis);
        // projections may touch at endpoints: interiors still disjoint
        if hi1 <= lo2 || hi2 <= lo1 {
            return true;
        }
    }
    false
}

/// 1-d analogue: do two closed segments on the line have disjoint open
/// interiors?
pub fn segment_interiors_disjoint(s1: (&Rat, &Rat), s2: (&Rat, &Rat)) -> bool {
    let (lo1, hi1) = if s1.0 <= s1.1 { (s1.0, s1.1) } else { (s1.1, s1.0) };
    let (lo2, hi2) = if s2.0 <= s2.1 { (s2.0, s2.1) } else { (s2.1, s2.0) };
    hi1 <= lo2 || hi2 <= lo1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[(i64, i64)]) -> Vec<Rat> {
        xs.iter().map(|&(n, d)| rat(n, d)).collect()
    }

    #[test]
    fn rational_round_trip() {
        for s in ["0", "1", "-3", "2/5", "-7/3", "100/7"] {
            assert_eq!(format_rat(&parse_rat(s).unwrap()), s);
        }
        // non-canonical forms normalize
        assert_eq!(format_rat(&parse_rat("4/8").unwrap()), "1/2");
        assert_eq!(format_rat(&parse_rat("3/-6").unwrap()), "-1/2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("a/b").is_err());
    }

    #[test]
    fn determinant_small_cases() {
        assert_eq!(det(vec![v(&[(2, 1)])]), rat_int(2));
        assert_eq!(
            det(vec![v(&[(1, 1), (2, 1)]), v(&[(3, 1), (4, 1)])]),
            rat_int(-2)
        );
        // identity in dimension 3
        let id = vec![
            v(&[(1, 1), (0, 1), (0, 1)]),
            v(&[(0, 1), (1, 1), (0, 1)]),
            v(&[(0, 1), (0, 1), (1, 1)]),
        ];
        assert_eq!(det(id), rat_int(1));
        // repeated row
        let sing = vec![
            v(&[(1, 2), (1, 2)]),
            v(&[(1, 2), (1, 2)]),
        ];
        assert_eq!(det(sing), rat_int(0));
    }

    #[test]
    fn base_simplex_has_unit_volume() {
        for n in 1..=3 {
            let corners: Vec<Vec<Rat>> = (0..=n)
                .map(|i| {
                    (0..=n)
                        .map(|j| if i == j { rat_int(1) } else { rat_int(0) })
                        .collect()
                })
                .collect();
            let refs: Vec<&[Rat]> = corners.iter().map(|c| c.as_slice()).collect();
            assert_eq!(normalized_volume(&refs).unwrap(), rat_int(1));
        }
    }

    #[test]
    fn barycentric_solve_finds_midpoint() {
        let a = v(&[(1, 1), (0, 1)]);
        let b = v(&[(0, 1), (1, 1)]);
        let mid = v(&[(1, 2), (1, 2)]);
        let lambda = solve_barycentric(&mid, &[&a, &b]).unwrap().unwrap();
        assert_eq!(lambda, v(&[(1, 2), (1, 2)]));
        assert!(point_in_simplex(&mid, &[&a, &b]).unwrap());
        assert!(point_in_simplex_interior(&mid, &[&a, &b]).unwrap());
        // endpoints are in the closed simplex, not the interior
        assert!(point_in_simplex(&a, &[&a, &b]).unwrap());
        assert!(!point_in_simplex_interior(&a, &[&a, &b]).unwrap());
    }

    #[test]
    fn point_outside_hull_is_rejected() {
        // 1-point "simplex" in the 2-corner chart
        let a = v(&[(1, 1), (0, 1)]);
        let p = v(&[(1, 2), (1, 2)]);
        assert_eq!(solve_barycentric(&p, &[&a]).unwrap(), None);
        // degenerate pair: same point twice
        assert!(solve_barycentric(&p, &[&a, &a]).is_err());
    }

    #[test]
    fn triangle_separation_cases() {
        let t = |pts: &[(i64, i64, i64, i64)]| -> Vec<Vec<Rat>> {
            pts.iter()
                .map(|&(xn, xd, yn, yd)| vec![rat(xn, xd), rat(yn, yd)])
                .collect()
        };
        let unit = t(&[(0, 1, 0, 1), (1, 1, 0, 1), (0, 1, 1, 1)]);
        // sharing the hypotenuse: interiors disjoint
        let other_half = t(&[(1, 1, 0, 1), (0, 1, 1, 1), (1, 1, 1, 1)]);
        assert!(triangle_interiors_disjoint(&unit, &other_half));
        // sharing only the corner at the origin
        let kissing = t(&[(0, 1, 0, 1), (-1, 1, 0, 1), (0, 1, -1, 1)]);
        assert!(triangle_interiors_disjoint(&unit, &kissing));
        // genuinely overlapping
        let shifted = t(&[(1, 4, 1, 4), (5, 4, 1, 4), (1, 4, 5, 4)]);
        assert!(!triangle_interiors_disjoint(&unit, &shifted));
        // one inside the other
        let inner = t(&[(1, 8, 1, 8), (1, 4, 1, 8), (1, 8, 1, 4)]);
        assert!(!triangle_interiors_disjoint(&unit, &inner));
        // far apart
        let far = t(&[(5, 1, 5, 1), (6, 1, 5, 1), (5, 1, 6, 1)]);
        assert!(triangle_interiors_disjoint(&unit, &far));
    }

    #[test]
    fn segment_separation_cases() {
        let half = rat(1, 2);
        let zero = rat_int(0);
        let one = rat_int(1);
        let two = rat_int(2);
        assert!(segment_interiors_disjoint((&zero, &half), (&half, &one)));
        assert!(segment_interiors_disjoint((&zero, &one), (&one, &two)));
        assert!(!segment_interiors_disjoint((&zero, &one), (&half, &two)));
        // containment overlaps
        assert!(!segment_interiors_disjoint((&zero, &two), (&half, &one)));
    }
}
