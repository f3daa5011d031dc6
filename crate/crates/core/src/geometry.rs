//! Geometry selection, edge-length solving and isometries of the three model
//! surfaces.
//!
//! Points live on the unit sphere (spherical), the plane `z = 1` (Euclidean) or
//! the upper sheet of the hyperboloid `x² + y² − z² = −1` (hyperbolic). In all
//! three models the base vertex is `(0, 0, 1)` and the rotation about it by `φ`
//! is the same matrix, which keeps the generator frames model-independent.
//!
//! Every isometry and point carries an entrywise absolute error bound so that
//! [`certified_equal`] can tell a genuine coincidence from rounding noise.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{BigReal, Real};
use crate::scheme::{FaceLength, LabelingScheme, TypeVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometryClass {
    Spherical,
    Euclidean,
    Hyperbolic,
}

impl fmt::Display for GeometryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GeometryClass::Spherical => "spherical",
            GeometryClass::Euclidean => "euclidean",
            GeometryClass::Hyperbolic => "hyperbolic",
        };
        f.write_str(s)
    }
}

/// Sum of the Euclidean interior angles divided by π, exactly.
pub fn angle_sum_over_pi(tv: &TypeVector) -> Ratio<i64> {
    tv.entries()
        .iter()
        .map(|l| match l {
            FaceLength::Finite(k) => Ratio::new(*k as i64 - 2, *k as i64),
            FaceLength::Infinite => Ratio::from_integer(1),
        })
        .sum()
}

pub fn classify(tv: &TypeVector) -> GeometryClass {
    let s = angle_sum_over_pi(tv);
    let two = Ratio::from_integer(2);
    if s < two {
        GeometryClass::Spherical
    } else if s == two {
        GeometryClass::Euclidean
    } else {
        GeometryClass::Hyperbolic
    }
}

fn cos_pi_over<R: Real>(k: FaceLength, like: &R) -> R {
    match k {
        FaceLength::Finite(k) => (R::pi(like.bits()) / like.lift(k as f64)).cos(),
        FaceLength::Infinite => like.lift(1.0),
    }
}

/// Interior angle of the regular `k`-gon of side `l`, at any precision.
pub fn interior_angle_real<R: Real>(geometry: GeometryClass, k: FaceLength, l: &R) -> Result<R> {
    let two = l.lift(2.0);
    match geometry {
        GeometryClass::Euclidean => Ok(match k {
            FaceLength::Finite(k) => {
                R::pi(l.bits()) * l.lift(k as f64 - 2.0) / l.lift(k as f64)
            }
            FaceLength::Infinite => R::pi(l.bits()),
        }),
        GeometryClass::Spherical => {
            let c = l.half().cos();
            let arg = cos_pi_over(k, l) / c;
            if arg > l.lift(1.0 + 1e-15) || *l >= R::pi(l.bits()) {
                return Err(Error::DomainError(format!(
                    "no spherical {k}-gon has side {:e}",
                    l.to_f64()
                )));
            }
            Ok(two * arg.asin())
        }
        GeometryClass::Hyperbolic => {
            let arg = cos_pi_over(k, l) / l.half().cosh();
            Ok(two * arg.asin())
        }
    }
}

/// Interior angle of the regular `k`-gon of side `l`.
pub fn interior_angle(geometry: GeometryClass, k: FaceLength, l: f64) -> Result<f64> {
    interior_angle_real(geometry, k, &l)
}

/// Edge length and angles that make the faces of a type vector fit around a vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleSolution {
    pub geometry: GeometryClass,
    pub type_vector: TypeVector,
    pub edge_length: f64,
    pub angles: Vec<f64>,
    pub residual: f64,
}

/// Odd faces force equal neighbours at degree 3: walking around a face of odd
/// length the two other faces must alternate.
fn degree_three_obstruction(tv: &TypeVector) -> Option<String> {
    let e = tv.entries();
    if e.len() != 3 {
        return None;
    }
    for i in 0..3 {
        if let FaceLength::Finite(k) = e[i] {
            let (a, b) = (e[(i + 1) % 3], e[(i + 2) % 3]);
            if k % 2 == 1 && a != b {
                return Some(format!(
                    "the faces around a {k}-gon would have to alternate between {a} and {b}"
                ));
            }
        }
    }
    None
}

fn angle_sum<R: Real>(geometry: GeometryClass, tv: &TypeVector, l: &R) -> Result<R> {
    let mut s = l.lift(0.0);
    for &k in tv.entries() {
        s = s + interior_angle_real(geometry, k, l)?;
    }
    Ok(s)
}

const RESIDUAL_TOL: f64 = 1e-12;

/// Solves `Σ θ_i(l) = 2π` for the edge length.
pub fn solve_edge_length(tv: &TypeVector) -> Result<AngleSolution> {
    tv.check_well_formed(tv.len())?;
    if tv.len() < 3 {
        return Err(Error::DegreeTooSmall(tv.len()));
    }
    let no_solution = |reason: String| Error::NoSolution {
        vector: tv.to_string(),
        reason,
    };
    if let Some(reason) = degree_three_obstruction(tv) {
        return Err(no_solution(reason));
    }
    let geometry = classify(tv);
    let two_pi = 2.0 * std::f64::consts::PI;
    let (l, residual) = match geometry {
        GeometryClass::Euclidean => (1.0, 0.0),
        GeometryClass::Spherical => {
            let kmax = tv.entries().iter().map(|k| k.finite()).max().flatten();
            let Some(kmax) = kmax.filter(|_| tv.entries().iter().all(|k| !k.is_infinite()))
            else {
                return Err(no_solution("infinite faces cannot lie on the sphere".into()));
            };
            let lmax = two_pi / kmax as f64;
            let f = |l: f64| angle_sum(geometry, tv, &l).map(|s| s - two_pi);
            if f(lmax)? <= RESIDUAL_TOL {
                return Err(no_solution(format!(
                    "the angle sum stays below 2π up to the largest admissible side {lmax:.6}"
                )));
            }
            bisect(f, 0.0, lmax, true)?
        }
        GeometryClass::Hyperbolic => {
            let f = |l: f64| angle_sum(geometry, tv, &l).map(|s| s - two_pi);
            let mut hi = 1.0;
            while f(hi)? > 0.0 {
                hi *= 2.0;
                if hi > 1e3 {
                    return Err(no_solution("angle sum does not fall below 2π".into()));
                }
            }
            bisect(f, 0.0, hi, false)?
        }
    };
    let angles = tv
        .entries()
        .iter()
        .map(|&k| interior_angle(geometry, k, l))
        .collect::<Result<Vec<_>>>()?;
    Ok(AngleSolution {
        geometry,
        type_vector: tv.clone(),
        edge_length: l,
        angles,
        residual,
    })
}

/// Bisection on a monotone function; `increasing` gives the direction.
fn bisect(
    f: impl Fn(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
    increasing: bool,
) -> Result<(f64, f64)> {
    let mut best = (hi, f64::INFINITY);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let v = f(mid)?;
        if v.abs() < best.1 {
            best = (mid, v.abs());
        }
        if v.abs() <= RESIDUAL_TOL && hi - lo < 1e-15 {
            break;
        }
        if (v < 0.0) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    Ok(best)
}

/// The edge length and angles recomputed at `bits` of precision, seeded by
/// the `f64` solution.
pub fn solve_at_precision<R: Real>(solution: &AngleSolution, bits: u32) -> Result<(R, Vec<R>)> {
    let tv = &solution.type_vector;
    let geometry = solution.geometry;
    let l = if geometry == GeometryClass::Euclidean {
        R::with_bits(1.0, bits)
    } else {
        let two_pi = R::pi(bits) * R::with_bits(2.0, bits);
        let f = |l: &R| angle_sum(geometry, tv, l).map(|s| s - two_pi.clone());
        let increasing = geometry == GeometryClass::Spherical;
        let l0 = solution.edge_length;
        let mut lo = R::with_bits(l0 * (1.0 - 1e-9), bits);
        let mut hi = R::with_bits(l0 * (1.0 + 1e-9), bits);
        let below = |v: &R| (*v < v.lift(0.0)) == increasing;
        if !below(&f(&lo)?) || below(&f(&hi)?) {
            lo = R::with_bits(0.0, bits);
            hi = R::with_bits(
                if increasing {
                    solution.edge_length.max(1e-3) * 1.5
                } else {
                    l0 * 2.0 + 1.0
                },
                bits,
            );
        }
        illinois(&f, lo, hi, bits)?
    };
    let angles = tv
        .entries()
        .iter()
        .map(|&k| interior_angle_real(geometry, k, &l))
        .collect::<Result<Vec<_>>>()?;
    Ok((l, angles))
}

/// Regula falsi with the Illinois correction on a bracket `[lo, hi]`.
fn illinois<R: Real>(f: &impl Fn(&R) -> Result<R>, mut lo: R, mut hi: R, bits: u32) -> Result<R> {
    let zero = lo.lift(0.0);
    let tol = lo.lift(16.0 * (R::abs_eps(bits) + R::rel_eps(bits)));
    let mut flo = f(&lo)?;
    let mut fhi = f(&hi)?;
    let mut side = 0i8;
    let mut c = (lo.clone() + hi.clone()).half();
    for _ in 0..bits + 200 {
        let denom = fhi.clone() - flo.clone();
        c = if denom == zero {
            (lo.clone() + hi.clone()).half()
        } else {
            (lo.clone() * fhi.clone() - hi.clone() * flo.clone()) / denom
        };
        if !(c > lo && c < hi) {
            c = (lo.clone() + hi.clone()).half();
        }
        let fc = f(&c)?;
        if fc.abs() <= tol || (hi.clone() - lo.clone()) <= tol {
            break;
        }
        if (fc > zero) == (fhi > zero) {
            hi = c.clone();
            fhi = fc;
            if side == -1 {
                flo = flo.half();
            }
            side = -1;
        } else {
            lo = c.clone();
            flo = fc;
            if side == 1 {
                fhi = fhi.half();
            }
            side = 1;
        }
    }
    Ok(c)
}

/// 3×3 matrix with an entrywise absolute error bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry<R: Real = f64> {
    pub geometry: GeometryClass,
    pub m: [[R; 3]; 3],
    pub err: [[f64; 3]; 3],
}

/// Point of a model surface with an entrywise absolute error bound.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelPoint<R: Real = f64> {
    pub geometry: GeometryClass,
    pub coords: [R; 3],
    pub err: [f64; 3],
}

fn gamma3<R: Real>(bits: u32) -> f64 {
    let u = R::rel_eps(bits);
    3.0 * u / (1.0 - 3.0 * u)
}

impl<R: Real> Isometry<R> {
    pub fn from_matrix(geometry: GeometryClass, m: [[R; 3]; 3], err: [[f64; 3]; 3]) -> Self {
        Isometry { geometry, m, err }
    }

    pub fn identity(geometry: GeometryClass, bits: u32) -> Self {
        let z = R::with_bits(0.0, bits);
        let o = R::with_bits(1.0, bits);
        Isometry {
            geometry,
            m: [
                [o.clone(), z.clone(), z.clone()],
                [z.clone(), o.clone(), z.clone()],
                [z.clone(), z, o],
            ],
            err: [[0.0; 3]; 3],
        }
    }

    pub fn bits(&self) -> u32 {
        self.m[0][0].bits()
    }

    /// Rotation about the base vertex by `angle`.
    pub fn rotation(geometry: GeometryClass, angle: &R) -> Self {
        let (c, s) = (angle.cos(), angle.sin());
        let z = angle.lift(0.0);
        let o = angle.lift(1.0);
        let e = 4.0 * (R::rel_eps(angle.bits()) + R::abs_eps(angle.bits()));
        Isometry {
            geometry,
            m: [
                [c.clone(), -s.clone(), z.clone()],
                [s, c, z.clone()],
                [z.clone(), z, o],
            ],
            err: [[e, e, 0.0], [e, e, 0.0], [0.0; 3]],
        }
    }

    /// Translation moving the base vertex a distance `l` along the x-axis.
    pub fn translation(geometry: GeometryClass, l: &R) -> Self {
        let z = l.lift(0.0);
        let o = l.lift(1.0);
        let (c, s) = match geometry {
            GeometryClass::Spherical => (l.cos(), l.sin()),
            GeometryClass::Euclidean => (o.clone(), l.clone()),
            GeometryClass::Hyperbolic => (l.cosh(), l.sinh()),
        };
        let e = 4.0 * (R::rel_eps(l.bits()) * c.to_f64().abs() + R::abs_eps(l.bits()));
        let m = match geometry {
            GeometryClass::Spherical => [
                [c.clone(), z.clone(), s.clone()],
                [z.clone(), o.clone(), z.clone()],
                [-s, z, c],
            ],
            GeometryClass::Euclidean => [
                [o.clone(), z.clone(), s],
                [z.clone(), o.clone(), z.clone()],
                [z.clone(), z, o],
            ],
            GeometryClass::Hyperbolic => [
                [c.clone(), z.clone(), s.clone()],
                [z.clone(), o.clone(), z.clone()],
                [s, z, c],
            ],
        };
        Isometry {
            geometry,
            m,
            err: [[e, 0.0, e], [0.0; 3], [e, 0.0, e]],
        }
    }

    /// Reflection across the x-axis through the base vertex.
    pub fn reflection(geometry: GeometryClass, bits: u32) -> Self {
        let mut r = Self::identity(geometry, bits);
        r.m[1][1] = R::with_bits(-1.0, bits);
        r
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry<R>) -> Isometry<R> {
        compose(self, other)
    }

    pub fn apply(&self, p: &ModelPoint<R>) -> ModelPoint<R> {
        apply(self, p)
    }

    /// Largest entry of the error bound.
    pub fn max_error(&self) -> f64 {
        self.err.iter().flatten().fold(0.0, |a: f64, &b| a.max(b))
    }

    pub fn to_f64(&self) -> Isometry<f64> {
        let m = std::array::from_fn(|i| std::array::from_fn(|j| self.m[i][j].to_f64()));
        Isometry {
            geometry: self.geometry,
            m,
            err: self.err,
        }
    }

    /// Largest deviation of `Mᵀ J M` from `J` for the model's bilinear form `J`
    /// (Euclidean: deviation of the linear part from orthogonality).
    pub fn form_defect(&self) -> f64 {
        let m = self.to_f64().m;
        let j = match self.geometry {
            GeometryClass::Spherical => [1.0, 1.0, 1.0],
            GeometryClass::Hyperbolic => [1.0, 1.0, -1.0],
            GeometryClass::Euclidean => [1.0, 1.0, 0.0],
        };
        let n = if self.geometry == GeometryClass::Euclidean { 2 } else { 3 };
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                let v: f64 = (0..3).map(|k| m[k][a] * j[k] * m[k][b]).sum();
                let target = if a == b { j[a] } else { 0.0 };
                worst = worst.max((v - target).abs());
            }
        }
        worst
    }
}

impl Isometry<f64> {
    /// Inverse isometry (error bounds are carried over unchanged).
    pub fn inverse(&self) -> Isometry<f64> {
        let m = &self.m;
        let inv = match self.geometry {
            GeometryClass::Spherical => std::array::from_fn(|i| std::array::from_fn(|j| m[j][i])),
            GeometryClass::Hyperbolic => {
                let s = [1.0, 1.0, -1.0];
                std::array::from_fn(|i| std::array::from_fn(|j| s[i] * m[j][i] * s[j]))
            }
            GeometryClass::Euclidean => [
                [m[0][0], m[1][0], -(m[0][0] * m[0][2] + m[1][0] * m[1][2])],
                [m[0][1], m[1][1], -(m[0][1] * m[0][2] + m[1][1] * m[1][2])],
                [0.0, 0.0, 1.0],
            ],
        };
        Isometry {
            geometry: self.geometry,
            m: inv,
            err: self.err,
        }
    }
}

/// Matrix product with error propagation.
pub fn compose<R: Real>(a: &Isometry<R>, b: &Isometry<R>) -> Isometry<R> {
    debug_assert_eq!(a.geometry, b.geometry);
    let bits = a.bits();
    let g3 = gamma3::<R>(bits);
    let abs = 3.0 * R::abs_eps(bits);
    let af: [[f64; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| a.m[i][j].to_f64().abs()));
    let bf: [[f64; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| b.m[i][j].to_f64().abs()));
    let m = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            a.m[i][0].clone() * b.m[0][j].clone()
                + a.m[i][1].clone() * b.m[1][j].clone()
                + a.m[i][2].clone() * b.m[2][j].clone()
        })
    });
    let err = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut e = abs;
            for k in 0..3 {
                e += af[i][k] * b.err[k][j]
                    + a.err[i][k] * bf[k][j]
                    + a.err[i][k] * b.err[k][j]
                    + g3 * af[i][k] * bf[k][j];
            }
            // slack for the f64 magnitudes used above
            e * (1.0 + 1e-12)
        })
    });
    Isometry {
        geometry: a.geometry,
        m,
        err,
    }
}

pub fn apply<R: Real>(a: &Isometry<R>, p: &ModelPoint<R>) -> ModelPoint<R> {
    debug_assert_eq!(a.geometry, p.geometry);
    let bits = a.bits();
    let g3 = gamma3::<R>(bits);
    let abs = 3.0 * R::abs_eps(bits);
    let coords = std::array::from_fn(|i| {
        a.m[i][0].clone() * p.coords[0].clone()
            + a.m[i][1].clone() * p.coords[1].clone()
            + a.m[i][2].clone() * p.coords[2].clone()
    });
    let err = std::array::from_fn(|i| {
        let mut e = abs;
        for k in 0..3 {
            let am = a.m[i][k].to_f64().abs();
            let pm = p.coords[k].to_f64().abs();
            e += am * p.err[k] + a.err[i][k] * pm + a.err[i][k] * p.err[k] + g3 * am * pm;
        }
        e * (1.0 + 1e-12)
    });
    ModelPoint {
        geometry: a.geometry,
        coords,
        err,
    }
}

impl<R: Real> ModelPoint<R> {
    /// The base vertex `(0, 0, 1)`.
    pub fn base(geometry: GeometryClass, bits: u32) -> Self {
        ModelPoint {
            geometry,
            coords: [
                R::with_bits(0.0, bits),
                R::with_bits(0.0, bits),
                R::with_bits(1.0, bits),
            ],
            err: [0.0; 3],
        }
    }

    pub fn to_f64(&self) -> [f64; 3] {
        std::array::from_fn(|i| self.coords[i].to_f64())
    }

    /// Deviation from the model constraint.
    pub fn constraint_defect(&self) -> f64 {
        let [x, y, z] = self.to_f64();
        match self.geometry {
            GeometryClass::Spherical => (x * x + y * y + z * z - 1.0).abs(),
            GeometryClass::Euclidean => (z - 1.0).abs(),
            GeometryClass::Hyperbolic => (x * x + y * y - z * z + 1.0).abs(),
        }
    }
}

/// Model distance between two `f64` points.
pub fn distance(geometry: GeometryClass, p: &[f64; 3], q: &[f64; 3]) -> f64 {
    match geometry {
        GeometryClass::Spherical => {
            let c = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt();
            2.0 * (c / 2.0).min(1.0).asin()
        }
        GeometryClass::Euclidean => ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt(),
        GeometryClass::Hyperbolic => {
            let b = p[2] * q[2] - p[0] * q[0] - p[1] * q[1];
            b.max(1.0).acosh()
        }
    }
}

/// Decides whether `p` and `q` are within `separation / 2` of each other.
///
/// Returns [`Error::NeedsMorePrecision`] when the error bounds straddle the
/// threshold.
pub fn certified_equal<R: Real>(p: &ModelPoint<R>, q: &ModelPoint<R>, separation: f64) -> Result<bool> {
    debug_assert_eq!(p.geometry, q.geometry);
    let half = separation / 2.0;
    let u = f64::EPSILON;
    // (statistic, its error bound, threshold); "equal" iff statistic < threshold
    let (stat, bound, threshold) = match p.geometry {
        GeometryClass::Spherical | GeometryClass::Euclidean => {
            let n = if p.geometry == GeometryClass::Euclidean { 2 } else { 3 };
            let mut sq = 0.0;
            let mut e2 = 0.0;
            for i in 0..n {
                let diff = (p.coords[i].clone() - q.coords[i].clone()).to_f64();
                sq += diff * diff;
                let e = p.err[i] + q.err[i] + u * diff.abs();
                e2 += e * e;
            }
            let chord = sq.sqrt();
            let err = e2.sqrt() + 4.0 * u * chord;
            let threshold = if p.geometry == GeometryClass::Spherical {
                2.0 * (half / 2.0).sin()
            } else {
                half
            };
            (chord, err, threshold)
        }
        GeometryClass::Hyperbolic => {
            let prod = p.coords[2].clone() * q.coords[2].clone()
                - p.coords[0].clone() * q.coords[0].clone()
                - p.coords[1].clone() * q.coords[1].clone();
            let b = prod.to_f64();
            let mut err = 4.0 * u * b.abs() + 4.0 * R::abs_eps(p.coords[0].bits());
            for i in 0..3 {
                let (pi, qi) = (p.coords[i].to_f64().abs(), q.coords[i].to_f64().abs());
                err += pi * q.err[i] + qi * p.err[i] + p.err[i] * q.err[i] + 4.0 * u * pi * qi;
            }
            (b, err, half.cosh())
        }
    };
    if stat + bound < threshold {
        Ok(true)
    } else if stat - bound > threshold {
        Ok(false)
    } else {
        Err(Error::NeedsMorePrecision)
    }
}

/// Isometries attached to the generators of a scheme at one precision.
#[derive(Debug, Clone)]
pub struct GeneratorFrames<R: Real = f64> {
    pub geometry: GeometryClass,
    pub edge_length: R,
    /// Direction of slot `j` at the base vertex, measured from slot 1.
    pub slot_angles: Vec<R>,
    /// Map carrying the base vertex frame to the frame of its `a_x` neighbour.
    pub crossing: Vec<Isometry<R>>,
    /// Rotation about the base vertex by `θ_i` (from slot `i` to slot `i + 1`).
    pub rotation: Vec<Isometry<R>>,
}

/// Generator frames at `f64` precision.
pub fn generator_frames(scheme: &LabelingScheme, solution: &AngleSolution) -> Result<GeneratorFrames<f64>> {
    generator_frames_at::<f64>(scheme, solution, 53)
}

/// Generator frames with all quantities recomputed at `bits` of precision.
///
/// Letter `a_x` leaves the vertex through slot `σ(x)` and arrives through slot
/// `x`; the neighbour's slots turn the other way when `a_x` is indirect.
pub fn generator_frames_at<R: Real>(
    scheme: &LabelingScheme,
    solution: &AngleSolution,
    bits: u32,
) -> Result<GeneratorFrames<R>> {
    let d = scheme.degree();
    if solution.type_vector.len() != d {
        return Err(Error::MalformedVector(format!(
            "solution is for degree {} but scheme has degree {d}",
            solution.type_vector.len()
        )));
    }
    let geometry = solution.geometry;
    let (l, angles): (R, Vec<R>) = if bits <= 53 {
        (
            R::with_bits(solution.edge_length, bits),
            solution.angles.iter().map(|&a| R::with_bits(a, bits)).collect(),
        )
    } else {
        solve_at_precision(solution, bits)?
    };
    let mut slot_angles = Vec::with_capacity(d);
    let mut acc = R::with_bits(0.0, bits);
    for a in &angles {
        slot_angles.push(acc.clone());
        acc = acc + a.clone();
    }
    let pi = R::pi(bits);
    let translate = Isometry::translation(geometry, &l);
    let half_turn = Isometry::rotation(geometry, &pi);
    let flip = Isometry::reflection(geometry, bits);
    let crossing = (0..d)
        .map(|x| {
            let out = Isometry::rotation(geometry, &slot_angles[scheme.inverse_of(x)]);
            let back = Isometry::rotation(geometry, &-slot_angles[x].clone());
            let mut m = out.compose(&translate).compose(&half_turn);
            if !scheme.is_direct(x) {
                m = m.compose(&flip);
            }
            m.compose(&back)
        })
        .collect();
    let rotation = angles
        .iter()
        .map(|a| Isometry::rotation(geometry, a))
        .collect();
    Ok(GeneratorFrames {
        geometry,
        edge_length: l,
        slot_angles,
        crossing,
        rotation,
    })
}

impl<R: Real> GeneratorFrames<R> {
    /// Composite isometry of a word, read left to right.
    pub fn word_isometry(&self, word: &[usize]) -> Isometry<R> {
        let bits = self.edge_length.bits();
        word.iter()
            .fold(Isometry::identity(self.geometry, bits), |acc, &x| {
                acc.compose(&self.crossing[x])
            })
    }
}

/// Frames at increasing precision: `f64`, then fixed point with 106, 212, … bits.
pub fn precision_ladder() -> impl Iterator<Item = u32> {
    std::iter::successors(Some(53u32), |&b| if b < 1 << 14 { Some(b * 2) } else { None })
}

/// `BigReal` frames at `bits` (used by the word problem when `f64` is inconclusive).
pub fn big_frames(scheme: &LabelingScheme, solution: &AngleSolution, bits: u32) -> Result<GeneratorFrames<BigReal>> {
    generator_frames_at::<BigReal>(scheme, solution, bits)
}
