//! Regular simplices: fitting, stability probes and plane rotations.
//!
//! The robust form of Jung's theorem says that two unit regular simplices
//! whose union has diameter `1 + β` are `O(β)`-close in Hausdorff distance.
//! This module provides the numerical side of that statement: a Procrustes
//! fit of a point set to a regular simplex, probes for closeness, and the
//! rotation used by the rotating adversary, together with Monte Carlo suites
//! that sweep them.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{
    centroid, diameter, hausdorff_distance, regular_simplex, Direction, PointSet, Vector,
};

/// Tolerance on edge lengths of a [`RegularSimplex`].
pub const EDGE_TOL: f64 = 1e-9;

/// Largest rotation angle accepted by [`rotate_simplex`].
pub const MAX_ROTATION: f64 = std::f64::consts::PI / 18.0;

/// Largest `β` at which the bilipschitz inequality is checked.
pub fn beta_test(d: usize) -> f64 {
    if d <= 2 {
        1e-3
    } else {
        1.5e-3 / d as f64
    }
}

/// `d + 1` points with all pairwise distances equal to `edge`.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularSimplex {
    vertices: PointSet,
    edge: f64,
}

impl RegularSimplex {
    pub fn new(vertices: PointSet, edge: f64) -> Result<Self> {
        let n = vertices.len();
        if n < 2 {
            return Err(Error::invalid("a simplex needs at least two vertices"));
        }
        let d = vertices[0].len();
        if n != d + 1 {
            return Err(Error::invalid(format!(
                "a simplex in R^{d} has {} vertices, got {n}",
                d + 1
            )));
        }
        let tol = EDGE_TOL * edge.max(1.0);
        for i in 0..n {
            if vertices[i].len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: vertices[i].len(),
                });
            }
            for j in (i + 1)..n {
                let e = (&vertices[i] - &vertices[j]).norm();
                if (e - edge).abs() > tol {
                    return Err(Error::invalid(format!(
                        "edge ({i}, {j}) has length {e}, expected {edge}"
                    )));
                }
            }
        }
        Ok(RegularSimplex { vertices, edge })
    }

    /// The reference simplex from [`regular_simplex`].
    pub fn standard(d: usize, edge: f64, centered: bool) -> Result<Self> {
        Ok(RegularSimplex {
            vertices: regular_simplex(d, edge, centered)?,
            edge,
        })
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn into_vertices(self) -> PointSet {
        self.vertices
    }

    pub fn edge(&self) -> f64 {
        self.edge
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Applies `x ↦ q x + t` to every vertex. `q` must be orthogonal.
    pub fn moved(&self, q: &DMatrix<f64>, t: &Vector) -> Self {
        RegularSimplex {
            vertices: self.vertices.iter().map(|x| q * x + t).collect(),
            edge: self.edge,
        }
    }

    pub fn translated(&self, t: &Vector) -> Self {
        RegularSimplex {
            vertices: self.vertices.iter().map(|x| x + t).collect(),
            edge: self.edge,
        }
    }
}

/// A rotation by `angle` in the plane spanned by an orthonormal pair, acting
/// as the identity on the orthogonal complement.
#[derive(Clone, Debug, PartialEq)]
pub struct RotationSpec {
    pub plane: (Direction, Direction),
    pub angle: f64,
}

impl RotationSpec {
    pub fn new(first: Direction, second: Direction, angle: f64) -> Result<Self> {
        if first.dim() != second.dim() {
            return Err(Error::DimensionMismatch {
                expected: first.dim(),
                found: second.dim(),
            });
        }
        if first.dot(&second).abs() > 1e-12 {
            return Err(Error::invalid("rotation plane vectors must be orthogonal"));
        }
        if !(angle.is_finite() && angle.abs() <= std::f64::consts::PI) {
            return Err(Error::invalid(format!(
                "rotation angle {angle} outside [-pi, pi]"
            )));
        }
        Ok(RotationSpec {
            plane: (first, second),
            angle,
        })
    }

    /// Rotates `y`; positive angles turn the first plane vector toward the second.
    pub fn apply(&self, y: &Vector) -> Vector {
        let (d1, d2) = (&*self.plane.0, &*self.plane.1);
        let (a, b) = (y.dot(d1), y.dot(d2));
        let (s, c) = self.angle.sin_cos();
        y + d1 * ((c - 1.0) * a - s * b) + d2 * ((c - 1.0) * b + s * a)
    }
}

/// Nearest regular simplex of the given edge, by centroid alignment followed
/// by an orthogonal Procrustes fit of the reference simplex. Returns the fit
/// and its Hausdorff distance to `w`.
///
/// Any relabelling of the reference vertices is itself an orthogonal map of
/// the centered reference, so the fit over `O(d)` already optimizes over
/// vertex correspondences.
pub fn fit_regular(w: &[Vector], edge: f64) -> Result<(RegularSimplex, f64)> {
    let c = centroid(w)?;
    let d = c.len();
    if w.len() != d + 1 {
        return Err(Error::invalid(format!(
            "fitting needs {} points in R^{d}, got {}",
            d + 1,
            w.len()
        )));
    }
    let reference = regular_simplex(d, edge, true)?;
    let mut cross = DMatrix::<f64>::zeros(d, d);
    for (x, r) in w.iter().zip(&reference) {
        cross += (x - &c) * r.transpose();
    }
    let svd = cross.svd(true, true);
    let q = svd.u.expect("requested u") * svd.v_t.expect("requested v_t");
    let fitted = RegularSimplex {
        vertices: reference.iter().map(|r| &q * r + &c).collect(),
        edge,
    };
    let residual = hausdorff_distance(w, fitted.vertices())?;
    Ok((fitted, residual))
}

fn require_unit_edges(a: &RegularSimplex, b: &RegularSimplex) -> Result<()> {
    if (a.edge - 1.0).abs() > EDGE_TOL || (b.edge - 1.0).abs() > EDGE_TOL {
        return Err(Error::invalid("unit-edge simplices required"));
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

fn union_diameter(a: &RegularSimplex, b: &RegularSimplex) -> f64 {
    let mut all = a.vertices.clone();
    all.extend(b.vertices.iter().cloned());
    diameter(&all).expect("nonempty")
}

/// Probe of the equality case: if the union has diameter 1 the two simplices
/// must coincide. Returns whether the implication holds numerically.
pub fn check_uniqueness(a: &RegularSimplex, b: &RegularSimplex) -> Result<bool> {
    require_unit_edges(a, b)?;
    if union_diameter(a, b) > 1.0 + 1e-9 {
        return Ok(true);
    }
    Ok(hausdorff_distance(a.vertices(), b.vertices())? <= 1e-6)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BilipschitzCheck {
    /// `diam(Δ ∪ Δ') - 1`, clamped at zero.
    pub beta: f64,
    pub dist_h: f64,
    /// Whether `beta` is small enough for the upper inequality to be tested.
    pub applicable: bool,
    /// `dist_h <= (d+1) d² beta` when applicable, true otherwise.
    pub holds: bool,
}

pub fn check_bilipschitz(a: &RegularSimplex, b: &RegularSimplex) -> Result<BilipschitzCheck> {
    require_unit_edges(a, b)?;
    let d = a.dim() as f64;
    let beta = (union_diameter(a, b) - 1.0).max(0.0);
    let dist_h = hausdorff_distance(a.vertices(), b.vertices())?;
    let applicable = beta <= beta_test(a.dim());
    let holds = !applicable || dist_h <= (d + 1.0) * d * d * beta + 1e-9;
    Ok(BilipschitzCheck {
        beta,
        dist_h,
        applicable,
        holds,
    })
}

/// Plane of rotation for [`rotate_simplex`]: `v` and the part of `x1`
/// orthogonal to it, or the first coordinate axis not parallel to `v` when
/// `x1` is parallel to `v`.
pub fn rotation_plane(v: &Direction, x1: &Vector) -> (Direction, Direction) {
    let off = x1 - v.as_vector() * v.dot(x1);
    if off.norm() > 1e-9 {
        return (v.clone(), orthonormal_to(v, off));
    }
    for k in 0..v.dim() {
        let mut e = Vector::zeros(v.dim());
        e[k] = 1.0;
        let off = &e - v.as_vector() * v[k];
        if off.norm() > 1e-6 {
            return (v.clone(), orthonormal_to(v, off));
        }
    }
    unreachable!("a unit vector in dimension >= 2 is not parallel to every axis")
}

/// Normalizes `off` after a second Gram-Schmidt pass against `v`, which
/// removes the cancellation error of a short residual.
fn orthonormal_to(v: &Direction, off: Vector) -> Direction {
    let u = off.normalize();
    let u = &u - v.as_vector() * v.dot(&u);
    Direction::normalize(u).expect("nonzero")
}

/// Rotates a unit simplex with vertex 0 at the origin by `theta` in the plane
/// of `v` and `x1`, turning `x1` away from `v`.
///
/// Requires `0 <= theta <= π/18`, `⟨v, x1⟩ > cos θ`, and that the edge from
/// vertex 0 to vertex 1 maximizes `⟨v, x_i - x_j⟩` over all ordered pairs.
pub fn rotate_simplex(delta: &RegularSimplex, v: &Direction, theta: f64) -> Result<RegularSimplex> {
    let d = delta.dim();
    if v.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: v.dim(),
        });
    }
    if (delta.edge - 1.0).abs() > EDGE_TOL {
        return Err(Error::invalid("rotation needs a unit-edge simplex"));
    }
    if delta.vertices[0].norm() > 1e-9 {
        return Err(Error::invalid("vertex 0 must sit at the origin"));
    }
    if !(0.0..=MAX_ROTATION).contains(&theta) {
        return Err(Error::invalid(format!("theta {theta} outside [0, pi/18]")));
    }
    if theta == 0.0 {
        return Ok(delta.clone());
    }
    let x1 = &delta.vertices[1];
    let lead = v.dot(x1);
    if lead <= theta.cos() {
        return Err(Error::invalid(format!(
            "<v, x1> = {lead} does not exceed cos(theta) = {}",
            theta.cos()
        )));
    }
    let (lo, hi) = crate::polytope::project_points(&delta.vertices, v)?;
    if hi - lo > lead + 1e-12 {
        return Err(Error::invalid(
            "edge 0-1 does not attain the maximal projection",
        ));
    }
    let (d1, d2) = rotation_plane(v, x1);
    let rotation = RotationSpec::new(d1, d2, theta)?;
    Ok(RegularSimplex {
        vertices: delta.vertices.iter().map(|x| rotation.apply(x)).collect(),
        edge: delta.edge,
    })
}

/// Uniformly random orthogonal matrix (Haar measure on `O(d)`).
pub fn random_orthogonal(d: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    let g = DMatrix::<f64>::from_fn(d, d, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..d {
        if r[(k, k)] < 0.0 {
            q.column_mut(k).neg_mut();
        }
    }
    q
}

pub fn random_unit(d: usize, rng: &mut impl Rng) -> Vector {
    loop {
        let x = Vector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
        let n = x.norm();
        if n > 1e-9 {
            return x / n;
        }
    }
}

/// A rotation by at most `max_angle` in a random plane, as a matrix.
fn small_rotation(d: usize, max_angle: f64, rng: &mut impl Rng) -> DMatrix<f64> {
    let a = random_unit(d, rng);
    let mut b = random_unit(d, rng);
    b -= &a * a.dot(&b);
    let b = b.normalize();
    let spec = RotationSpec {
        plane: (
            Direction::new(a).expect("unit"),
            Direction::new(b).expect("unit"),
        ),
        angle: rng.random_range(-max_angle..=max_angle),
    };
    let mut m = DMatrix::<f64>::identity(d, d);
    for k in 0..d {
        let col = spec.apply(&m.column(k).into_owned());
        m.set_column(k, &col);
    }
    m
}

/// Summary of a Monte Carlo sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub dimension: usize,
    pub trials: usize,
    pub seed: u64,
    pub failures: usize,
    /// Number of trials on which the main inequality was actually tested.
    pub checked: usize,
    /// Largest observed ratio of left to right side (≤ 1 means passing).
    pub worst_ratio: f64,
    pub passed: bool,
}

/// Random small Euclidean motions of a unit simplex: rotation angle and
/// translation length up to 1e-3. Checks `dist_H <= (d+1) d² β` when
/// `β <= beta_test(d)` and `β <= 2 dist_H` always.
pub fn verify_bilipschitz_suite(d: usize, trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = RegularSimplex::standard(d, 1.0, true)?;
    let bound = ((d + 1) * d * d) as f64;
    let (mut failures, mut checked, mut worst) = (0, 0, 0.0f64);
    for _ in 0..trials {
        let frame = random_orthogonal(d, &mut rng);
        let a = base.moved(&frame, &Vector::zeros(d));
        let q = small_rotation(d, 1e-3, &mut rng);
        let t = random_unit(d, &mut rng) * rng.random_range(0.0..=1e-3);
        let b = a.moved(&q, &t);
        let check = check_bilipschitz(&a, &b)?;
        let lower_ok = check.beta <= 2.0 * check.dist_h + 1e-9;
        if check.applicable {
            checked += 1;
            if check.dist_h > 0.0 {
                worst = worst.max(check.dist_h / (bound * check.beta));
            }
        }
        if !check.holds || !lower_ok {
            failures += 1;
        }
    }
    Ok(SuiteReport {
        suite: "bilipschitz".into(),
        dimension: d,
        trials,
        seed,
        failures,
        checked,
        worst_ratio: worst,
        passed: failures == 0,
    })
}

/// A unit simplex with vertex 0 at the origin in random orientation, and an
/// admissible `(v, θ)` for [`rotate_simplex`].
pub fn random_rotation_case(
    d: usize,
    rng: &mut impl Rng,
) -> Result<(RegularSimplex, Direction, f64)> {
    let frame = random_orthogonal(d, rng);
    let delta = RegularSimplex::standard(d, 1.0, false)?.moved(&frame, &Vector::zeros(d));
    let theta = rng.random_range(1e-4..=MAX_ROTATION);
    let phi = rng.random_range(0.0..0.95 * theta);
    let x1 = delta.vertices[1].clone();
    let mut u = random_unit(d, rng);
    u -= &x1 * x1.dot(&u);
    let u = u.normalize();
    let v = Direction::normalize(&x1 * phi.cos() + u * phi.sin())?;
    Ok((delta, v, theta))
}

/// Random admissible rotations: checks `cos 2θ <= ⟨x1', v⟩ <= cos θ`, edge
/// preservation within 1e-10, and that the largest vertex displacement is
/// that of `x1`, equal to `√(2(1 - cos θ))` within 1e-9.
pub fn verify_rotation_suite(d: usize, trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut failures, mut worst) = (0, 0.0f64);
    for _ in 0..trials {
        let (delta, v, theta) = random_rotation_case(d, &mut rng)?;
        let rotated = rotate_simplex(&delta, &v, theta)?;
        let lead = v.dot(&rotated.vertices[1]);
        let inner_ok = (2.0 * theta).cos() - 1e-12 <= lead && lead <= theta.cos() + 1e-12;
        let mut edge_err = 0.0f64;
        for i in 0..=d {
            for j in (i + 1)..=d {
                let e = (&rotated.vertices[i] - &rotated.vertices[j]).norm();
                edge_err = edge_err.max((e - 1.0).abs());
            }
        }
        let expected = (2.0 * (1.0 - theta.cos())).sqrt();
        let moves: Vec<f64> = delta
            .vertices
            .iter()
            .zip(&rotated.vertices)
            .map(|(a, b)| (a - b).norm())
            .collect();
        let max_move = moves.iter().cloned().fold(0.0, f64::max);
        let move_ok = (max_move - expected).abs() <= 1e-9 && (moves[1] - expected).abs() <= 1e-9;
        worst = worst
            .max(edge_err / 1e-10)
            .max((max_move - expected).abs() / 1e-9);
        if !(inner_ok && edge_err <= 1e-10 && move_ok) {
            failures += 1;
        }
    }
    Ok(SuiteReport {
        suite: "rotation".into(),
        dimension: d,
        trials,
        seed,
        failures,
        checked: trials,
        worst_ratio: worst,
        passed: failures == 0,
    })
}

/// Perturbs a unit simplex by per-vertex noise of norm up to `noise` and
/// checks that the fit recovers it within `5 noise`.
pub fn verify_fit_suite(d: usize, trials: usize, noise: f64, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = RegularSimplex::standard(d, 1.0, true)?;
    let (mut failures, mut worst) = (0, 0.0f64);
    for _ in 0..trials {
        let frame = random_orthogonal(d, &mut rng);
        let shift = random_unit(d, &mut rng) * rng.random_range(0.0..3.0);
        let clean = base.moved(&frame, &shift);
        let noisy: PointSet = clean
            .vertices()
            .iter()
            .map(|x| x + random_unit(d, &mut rng) * rng.random_range(0.0..=noise))
            .collect();
        let (_, residual) = fit_regular(&noisy, 1.0)?;
        worst = worst.max(residual / (5.0 * noise));
        if residual > 5.0 * noise {
            failures += 1;
        }
    }
    Ok(SuiteReport {
        suite: "fit".into(),
        dimension: d,
        trials,
        seed,
        failures,
        checked: trials,
        worst_ratio: worst,
        passed: failures == 0,
    })
}
