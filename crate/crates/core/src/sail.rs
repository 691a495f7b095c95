//! Geometric cross-check for LLS periods via lattice sails.
//!
//! A hyperbolic matrix with positive eigenvalues has two invariant
//! eigenlines; inside one of the four complementary cones, the boundary of
//! the convex hull of the nonzero lattice points is the sail. The matrix maps
//! the sail to itself, and reading one fundamental domain of the sail as
//! alternating integer edge lengths and integer vertex sines reproduces the
//! LLS period. Everything is exact: cone membership compares quadratic
//! integers a + b*sqrt(D), hulls are integer convex hulls.

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::sl2::LLSPeriod;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// One fundamental domain of a sail: its vertices in walk order plus the
/// alternating edge-length / vertex-sine reading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sail2D {
    pub vertices: Vec<(BigInt, BigInt)>,
    pub edge_lengths: Vec<BigInt>,
    pub vertex_sines: Vec<BigInt>,
}

/// a + b*sqrt(disc) with disc > 0 a fixed nonsquare; only signs are needed.
struct QuadInt {
    a: BigInt,
    b: BigInt,
}

impl QuadInt {
    fn sign(&self, disc: &BigInt) -> i8 {
        let (sa, sb) = (sign_of(&self.a), sign_of(&self.b));
        match (sa, sb) {
            (0, 0) => 0,
            (s, 0) => s,
            (0, s) => s,
            (1, 1) => 1,
            (-1, -1) => -1,
            _ => {
                // Opposite signs: compare a^2 with b^2 * disc; equality is
                // impossible because disc is not a perfect square.
                let lhs = &self.a * &self.a;
                let rhs = &self.b * &self.b * disc;
                if lhs > rhs {
                    sa
                } else {
                    sb
                }
            }
        }
    }
}

fn sign_of(x: &BigInt) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

struct Cone {
    disc: BigInt,
    two_r: BigInt,
    s_minus_p: BigInt,
    orientation: i8,
}

impl Cone {
    fn new(m: &IntMatrix) -> Self {
        let p = m.get(0, 0).clone();
        let r = m.get(0, 1).clone();
        let s = m.get(1, 1).clone();
        let tr = m.trace();
        let disc = &tr * &tr - BigInt::from(4);
        Cone {
            disc,
            two_r: &r + &r,
            s_minus_p: s - p,
            orientation: sign_of(&r),
        }
    }

    /// sign of det(v_minus, (x, y)) relative to the cone orientation.
    fn lower_edge_side(&self, x: &BigInt, y: &BigInt) -> i8 {
        let q = QuadInt {
            a: &self.two_r * y - &self.s_minus_p * x,
            b: x.clone(),
        };
        q.sign(&self.disc) * self.orientation
    }

    /// sign of det((x, y), v_plus) relative to the cone orientation.
    fn upper_edge_side(&self, x: &BigInt, y: &BigInt) -> i8 {
        let q = QuadInt {
            a: &self.s_minus_p * x - &self.two_r * y,
            b: x.clone(),
        };
        q.sign(&self.disc) * self.orientation
    }

    fn contains(&self, x: &BigInt, y: &BigInt) -> bool {
        self.lower_edge_side(x, y) > 0 && self.upper_edge_side(x, y) > 0
    }
}

type Point = (BigInt, BigInt);

fn cross(o: &Point, a: &Point, b: &Point) -> BigInt {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

/// Andrew's monotone chain; returns the hull in counterclockwise order with
/// collinear points dropped.
fn convex_hull(mut points: Vec<Point>) -> Vec<Point> {
    points.sort();
    points.dedup();
    let n = points.len();
    if n <= 2 {
        return points;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &points {
        while lower.len() >= 2
            && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= BigInt::zero()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in points.iter().rev() {
        while upper.len() >= 2
            && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= BigInt::zero()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn apply(m: &IntMatrix, v: &Point) -> Point {
    (
        m.get(0, 0) * &v.0 + m.get(0, 1) * &v.1,
        m.get(1, 0) * &v.0 + m.get(1, 1) * &v.1,
    )
}

fn check_preconditions(m: &IntMatrix) -> Result<()> {
    if m.dim() != 2 {
        return Err(Error::DimensionMismatch {
            left: m.dim(),
            right: 2,
        });
    }
    if !m.det().is_one() {
        return Err(Error::precondition(format!(
            "sail oracle needs determinant 1, got {}",
            m.det()
        )));
    }
    let tr = m.trace();
    if tr <= BigInt::from(2) {
        return Err(Error::precondition(
            "sail oracle needs two distinct positive real eigenvalues (trace > 2)",
        ));
    }
    Ok(())
}

/// Smallest y in [lo, hi] satisfying a predicate that is false below a
/// threshold and true at and above it.
fn lowest_true(
    lo: &BigInt,
    hi: &BigInt,
    mut pred: impl FnMut(&BigInt) -> bool,
) -> Option<BigInt> {
    if !pred(hi) {
        return None;
    }
    if pred(lo) {
        return Some(lo.clone());
    }
    let mut lo = lo.clone();
    let mut hi = hi.clone();
    // Invariant: pred(lo) false, pred(hi) true.
    while &hi - &lo > BigInt::one() {
        let mid = (&lo + &hi) / 2;
        if pred(&mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// One fundamental domain of the sail of an invariant eigen-cone.
///
/// Lattice points with coordinates bounded by `search_bound` inside the cone
/// are enumerated column by column (only their extremes can be hull
/// vertices), the convex hull is taken, and the chain of hull vertices facing
/// the origin is the sail. The matrix maps the sail to itself, so the chain
/// from the vertex nearest the apex to its image is one fundamental domain.
pub fn sail_fundamental_domain(m: &IntMatrix, search_bound: u64) -> Result<Sail2D> {
    check_preconditions(m)?;
    let cone = Cone::new(m);
    let bound = BigInt::from(search_bound);
    let too_small = || Error::SailBoundTooSmall { bound: search_bound };

    // The chosen cone lies in the half plane sign(x) = orientation.
    let mut candidates: Vec<Point> = Vec::new();
    let mut xi = BigInt::one();
    while xi <= bound {
        let x = if cone.orientation > 0 { xi.clone() } else { -&xi };
        let lo = -&bound;
        let hi = bound.clone();
        // lower_edge_side is increasing in y, upper_edge_side decreasing.
        let y_min = lowest_true(&lo, &hi, |y| cone.lower_edge_side(&x, y) > 0);
        let y_max = lowest_true(&lo, &hi, |y| cone.upper_edge_side(&x, &(-y)) > 0).map(|y| -y);
        if let (Some(y_min), Some(y_max)) = (y_min, y_max) {
            if y_min <= y_max {
                debug_assert!(cone.contains(&x, &y_min) && cone.contains(&x, &y_max));
                candidates.push((x.clone(), y_min.clone()));
                if y_max != y_min {
                    candidates.push((x.clone(), y_max));
                }
            }
        }
        xi += 1;
    }
    if candidates.len() < 3 {
        return Err(too_small());
    }

    let hull = convex_hull(candidates);
    let h = hull.len();
    if h < 3 {
        return Err(too_small());
    }

    // Edges whose supporting line separates the origin from the polygon.
    let origin = (BigInt::zero(), BigInt::zero());
    let facing: Vec<bool> = (0..h)
        .map(|i| cross(&hull[i], &hull[(i + 1) % h], &origin) < BigInt::zero())
        .collect();
    let Some(start) = (0..h).find(|&i| facing[i] && !facing[(i + h - 1) % h]) else {
        return Err(too_small());
    };
    let mut chain: Vec<Point> = vec![hull[start].clone()];
    let mut i = start;
    loop {
        let next = (i + 1) % h;
        chain.push(hull[next].clone());
        i = next;
        if !facing[i] {
            break;
        }
        if i == start {
            return Err(too_small());
        }
    }

    // Vertices on the search frame may be artifacts of the truncation.
    let on_frame = |p: &Point| p.0.abs() >= bound || p.1.abs() >= bound;
    while chain.first().is_some_and(&on_frame) {
        chain.remove(0);
    }
    while chain.last().is_some_and(&on_frame) {
        chain.pop();
    }
    if chain.len() < 2 {
        return Err(too_small());
    }

    // Anchor at the vertex nearest the apex and walk to its image.
    let norm = |p: &Point| p.0.abs() + p.1.abs();
    let anchor_idx = (0..chain.len())
        .min_by_key(|&i| norm(&chain[i]))
        .unwrap();
    let image = apply(m, &chain[anchor_idx]);
    let Some(image_idx) = chain.iter().position(|p| *p == image) else {
        return Err(too_small());
    };
    let (i0, i1, forward) = if image_idx >= anchor_idx {
        (anchor_idx, image_idx, true)
    } else {
        (
            chain.len() - 1 - anchor_idx,
            chain.len() - 1 - image_idx,
            false,
        )
    };
    if !forward {
        chain.reverse();
    }
    if i1 <= i0 {
        return Err(too_small());
    }

    let window: Vec<Point> = chain[i0..=i1].to_vec();
    if window.iter().any(&on_frame) {
        return Err(too_small());
    }
    let continuation = apply(m, &chain[i0 + 1]);
    // When the chain extends past the image vertex, it must continue with
    // the image of the second window vertex; anything else is truncation.
    if let Some(next) = chain.get(i1 + 1) {
        if *next != continuation {
            return Err(too_small());
        }
    }
    let edge_count = window.len() - 1;
    let mut edges: Vec<Point> = Vec::with_capacity(edge_count + 1);
    for t in 0..edge_count {
        edges.push((&window[t + 1].0 - &window[t].0, &window[t + 1].1 - &window[t].1));
    }
    edges.push((
        &continuation.0 - &window[edge_count].0,
        &continuation.1 - &window[edge_count].1,
    ));

    let mut edge_lengths = Vec::with_capacity(edge_count);
    let mut vertex_sines = Vec::with_capacity(edge_count);
    let primitive = |e: &Point| -> (BigInt, Point) {
        let g = e.0.gcd(&e.1);
        (g.clone(), (&e.0 / &g, &e.1 / &g))
    };
    for t in 0..edge_count {
        let (len, dir_in) = primitive(&edges[t]);
        let (_, dir_out) = primitive(&edges[t + 1]);
        let sine = (&dir_in.0 * &dir_out.1 - &dir_in.1 * &dir_out.0).abs();
        if !len.is_positive() || !sine.is_positive() {
            return Err(too_small());
        }
        edge_lengths.push(len);
        vertex_sines.push(sine);
    }

    Ok(Sail2D {
        vertices: window,
        edge_lengths,
        vertex_sines,
    })
}

/// LLS period read geometrically from the sail; must agree cyclically with
/// the reduction-based computation whenever the bound suffices.
pub fn sail_lls_oracle(m: &IntMatrix, search_bound: u64) -> Result<LLSPeriod> {
    let sail = sail_fundamental_domain(m, search_bound)?;
    let mut entries = Vec::with_capacity(2 * sail.edge_lengths.len());
    for (len, sine) in sail.edge_lengths.iter().zip(&sail.vertex_sines) {
        entries.push(len.clone());
        entries.push(sine.clone());
    }
    LLSPeriod::new(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2::lls_period;

    fn m2(p: i64, r: i64, q: i64, s: i64) -> IntMatrix {
        IntMatrix::from_rows(&[vec![p, r], vec![q, s]]).unwrap()
    }

    #[test]
    fn sail_matches_reduction_on_named_matrices() {
        for (mat, bound) in [
            (m2(7, 18, 5, 13), 10_000),
            (m2(2, 1, 1, 1), 1_000),
            (m2(2, 7, 5, 18), 10_000),
            (m2(1, 2, 2, 5), 1_000),
            (m2(0, -1, 1, 6), 1_000),
            (m2(3, 8, 4, 11), 10_000),
        ] {
            let geometric = sail_lls_oracle(&mat, bound).unwrap();
            let algebraic = lls_period(&mat).unwrap();
            assert!(
                geometric.cyclically_equal(&algebraic),
                "matrix {mat}: sail {:?} vs reduction {:?}",
                geometric.entries(),
                algebraic.entries()
            );
        }
    }

    #[test]
    fn sail_rejects_bad_inputs() {
        assert!(sail_lls_oracle(&m2(1, 1, -1, 0), 100).is_err()); // complex spectrum
        assert!(sail_lls_oracle(&m2(0, 1, 1, 0), 100).is_err()); // det -1
        assert!(sail_lls_oracle(&m2(-7, -18, -5, -13), 100).is_err()); // negative eigenvalues
    }

    #[test]
    fn tiny_bound_reports_too_small() {
        let wide = m2(1519, 1164, -1964, -1505);
        match sail_lls_oracle(&wide, 3) {
            Err(Error::SailBoundTooSmall { .. }) => {}
            other => panic!("expected a bound error, got {other:?}"),
        }
    }
}
