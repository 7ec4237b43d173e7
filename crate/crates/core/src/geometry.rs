//! Dimension-generic Euclidean primitives: unit directions, regular simplices,
//! minimum enclosing balls, diameters and Hausdorff distances.

use std::ops::Deref;

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A point of `R^d`.
pub type Vector = DVector<f64>;

/// A finite list of points sharing one dimension.
pub type PointSet = Vec<Vector>;

/// Tolerance for containment and equality tests.
pub const EPS_NUM: f64 = 1e-9;

/// Tolerance on `| ‖v‖ - 1 |` for directions.
pub const EPS_UNIT: f64 = 1e-12;

/// A unit vector; the query object of the game.
#[derive(Clone, Debug, PartialEq)]
pub struct Direction(Vector);

impl Direction {
    /// Wraps `v`, rejecting it unless its norm is one within [`EPS_UNIT`].
    pub fn new(v: Vector) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > EPS_UNIT {
            return Err(Error::NonUnitQuery { norm });
        }
        Ok(Direction(v))
    }

    /// Normalizes `v`. Fails on zero or non-finite input.
    pub fn normalize(v: Vector) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() || norm <= f64::MIN_POSITIVE {
            return Err(Error::invalid(
                "cannot normalize a zero or non-finite vector",
            ));
        }
        Ok(Direction(v / norm))
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Direction::new(Vector::from_column_slice(coords))
    }

    /// The `k`-th coordinate axis of `R^d`.
    pub fn axis(d: usize, k: usize) -> Self {
        let mut v = Vector::zeros(d);
        v[k] = 1.0;
        Direction(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_vector(&self) -> &Vector {
        &self.0
    }

    pub fn into_vector(self) -> Vector {
        self.0
    }

    pub fn negated(&self) -> Self {
        Direction(-&self.0)
    }
}

impl Deref for Direction {
    type Target = Vector;

    fn deref(&self) -> &Vector {
        &self.0
    }
}

/// Center and radius of a Euclidean ball.
#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    pub center: Vector,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vector, radius: f64) -> Self {
        debug_assert!(radius >= 0.0);
        Ball { center, radius }
    }

    pub fn contains(&self, p: &Vector, tol: f64) -> bool {
        (p - &self.center).norm() <= self.radius + tol
    }
}

/// `√(d / (2(d+1)))`: the largest ratio of Chebyshev radius to diameter in `R^d`.
pub fn jung_constant(d: usize) -> f64 {
    assert!(d >= 1, "jung_constant requires d >= 1");
    let d = d as f64;
    (d / (2.0 * (d + 1.0))).sqrt()
}

/// The `d + 1` vertices of a regular simplex with the given edge length.
///
/// Vertices are the images of the scaled standard basis of `R^{d+1}` under the
/// Helmert basis of the hyperplane `Σ x_i = 0`, so the centroid sits at the
/// origin. With `centered = false` the simplex is translated so that vertex 0
/// is the origin instead.
pub fn regular_simplex(d: usize, edge: f64, centered: bool) -> Result<PointSet> {
    if d == 0 {
        return Err(Error::invalid("regular_simplex requires d >= 1"));
    }
    if !(edge.is_finite() && edge > 0.0) {
        return Err(Error::invalid(format!("edge must be positive, got {edge}")));
    }
    let scale = edge / std::f64::consts::SQRT_2;
    let mut points: PointSet = (0..=d)
        .map(|i| {
            // coordinate k of scale * e_i against the Helmert vector
            // h_k = (1, .., 1, -k, 0, ..) / √(k(k+1)), k = 1..d
            Vector::from_fn(d, |row, _| {
                let k = row + 1;
                let norm = ((k * (k + 1)) as f64).sqrt();
                let entry = if i < k {
                    1.0
                } else if i == k {
                    -(k as f64)
                } else {
                    0.0
                };
                scale * entry / norm
            })
        })
        .collect();
    if !centered {
        let origin = points[0].clone();
        for p in points.iter_mut() {
            *p -= &origin;
        }
    }
    Ok(points)
}

/// Centroid of a nonempty point set.
pub fn centroid(points: &[Vector]) -> Result<Vector> {
    let first = points
        .first()
        .ok_or(Error::Empty("centroid of empty set"))?;
    let mut sum = Vector::zeros(first.len());
    for p in points {
        sum += p;
    }
    Ok(sum / points.len() as f64)
}

pub(crate) fn check_same_dim(points: &[Vector]) -> Result<usize> {
    let d = points.first().ok_or(Error::Empty("point set"))?.len();
    for p in points {
        if p.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: p.len(),
            });
        }
    }
    Ok(d)
}

/// Smallest ball whose boundary passes through every point of `support`,
/// with center in their affine hull. Affinely dependent input is handled by
/// the minimum-norm least-squares solution.
pub(crate) fn circumball(support: &[&Vector]) -> Option<Ball> {
    let (first, rest) = support.split_first()?;
    if rest.is_empty() {
        return Some(Ball::new((*first).clone(), 0.0));
    }
    let d = first.len();
    let k = rest.len();
    let mut a = DMatrix::<f64>::zeros(d, k);
    for (j, p) in rest.iter().enumerate() {
        a.set_column(j, &(*p - *first));
    }
    let gram = a.transpose() * &a * 2.0;
    let rhs = DVector::from_fn(k, |j, _| a.column(j).norm_squared());
    let lambda = solve_min_norm(gram, &rhs);
    if !lambda.iter().all(|x| x.is_finite()) {
        return None;
    }
    let center = *first + &a * lambda;
    let radius = support
        .iter()
        .map(|p| (*p - &center).norm())
        .fold(0.0, f64::max);
    radius.is_finite().then(|| Ball::new(center, radius))
}

/// Minimum-norm least-squares solution of `m x = b` via SVD.
pub(crate) fn solve_min_norm(m: DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let scale = m.amax().max(f64::MIN_POSITIVE);
    let svd = m.svd(true, true);
    let eps = scale * 1e-12;
    svd.solve(b, eps)
        .unwrap_or_else(|_| DVector::zeros(b.len()))
}

struct MebSolver<'a> {
    order: Vec<&'a Vector>,
    dim: usize,
}

impl<'a> MebSolver<'a> {
    fn contains(ball: &Option<Ball>, p: &Vector) -> bool {
        match ball {
            Some(b) => (p - &b.center).norm() <= b.radius + 1e-12 * (1.0 + b.radius),
            None => false,
        }
    }

    /// Move-to-front Welzl recursion over the first `end` points with the
    /// given boundary set.
    fn mtf(
        &mut self,
        end: usize,
        support: &mut Vec<&'a Vector>,
    ) -> (Option<Ball>, Vec<&'a Vector>) {
        let mut ball = circumball(support);
        let mut best_support = support.clone();
        if support.len() == self.dim + 1 {
            return (ball, best_support);
        }
        for i in 0..end {
            let p = self.order[i];
            if !Self::contains(&ball, p) {
                support.push(p);
                let (b, s) = self.mtf(i, support);
                support.pop();
                ball = b;
                best_support = s;
                self.order[..=i].rotate_right(1);
            }
        }
        (ball, best_support)
    }
}

/// Minimum enclosing ball of a finite set, together with a support set of at
/// most `d + 1` input points whose own enclosing ball has the same radius.
pub fn min_enclosing_ball(points: &[Vector]) -> Result<(Ball, PointSet)> {
    let d = check_same_dim(points)?;
    let mut order: Vec<&Vector> = points.iter().collect();
    // fixed shuffle keeps the expected running time linear and the output deterministic
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d65_625f_7365_6564);
    order.shuffle(&mut rng);
    let mut solver = MebSolver { order, dim: d };
    let mut support = Vec::with_capacity(d + 1);
    let n = solver.order.len();
    let (ball, support) = solver.mtf(n, &mut support);
    let mut ball = ball.expect("nonempty input yields a ball");
    // the recursion tolerates 1e-12 slack; widen so containment is exact
    ball.radius = points
        .iter()
        .map(|p| (p - &ball.center).norm())
        .fold(ball.radius, f64::max);
    Ok((ball, support.into_iter().cloned().collect()))
}

/// Largest pairwise distance; zero for singletons.
pub fn diameter(points: &[Vector]) -> Result<f64> {
    check_same_dim(points)?;
    Ok(diameter_pair(points)
        .map(|(_, _, dist)| dist)
        .unwrap_or(0.0))
}

/// Indices and distance of a farthest pair, `None` for singletons.
pub(crate) fn diameter_pair(points: &[Vector]) -> Option<(usize, usize, f64)> {
    let mut best: Option<(usize, usize, f64)> = None;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let dist = (&points[i] - &points[j]).norm_squared();
            if best.is_none_or(|(_, _, b)| dist > b) {
                best = Some((i, j, dist));
            }
        }
    }
    best.map(|(i, j, sq)| (i, j, sq.sqrt()))
}

fn directed_hausdorff(from: &[Vector], to: &[Vector]) -> f64 {
    from.iter()
        .map(|a| {
            to.iter()
                .map(|b| (a - b).norm_squared())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
        .sqrt()
}

/// Hausdorff distance between two finite point sets.
pub fn hausdorff_distance(a: &[Vector], b: &[Vector]) -> Result<f64> {
    let da = check_same_dim(a)?;
    let db = check_same_dim(b)?;
    if da != db {
        return Err(Error::DimensionMismatch {
            expected: da,
            found: db,
        });
    }
    Ok(directed_hausdorff(a, b).max(directed_hausdorff(b, a)))
}

/// Angle between two unit directions, in `[0, π]`.
pub fn angular_distance(u: &Direction, v: &Direction) -> f64 {
    u.dot(v).clamp(-1.0, 1.0).acos()
}
