//! Floating-point kernels: the smooth bump, the shrinking map `R_t`,
//! stereographic projection and the conformal scaling `M_{p,t}` of `Sⁿ`.

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const SPHERE_TOL: f64 = 1e-9;
const SINGULAR_TOL: f64 = 1e-12;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// A unit vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint(Vec<f64>);

impl SpherePoint {
    /// Renormalises if the norm is within `1e-9` of one, rejects otherwise.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let r = norm(&coords);
        if coords.is_empty() || !r.is_finite() || (r - 1.0).abs() > SPHERE_TOL {
            return Err(Error::Domain(format!("|q| = {r} is not 1")));
        }
        Ok(SpherePoint(coords.into_iter().map(|x| x / r).collect()))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn antipode(&self) -> SpherePoint {
        SpherePoint(self.0.iter().map(|x| -x).collect())
    }
}

/// `exp(-1/s)` for `s > 0`, else `0`.
pub fn g(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

pub fn g_derivative(s: f64) -> f64 {
    if s > 0.0 {
        g(s) / (s * s)
    } else {
        0.0
    }
}

/// Smooth even step: `0` at `0`, `1` for `|t| ≥ 1`, nondecreasing in `|t|`.
pub fn bump(t: f64) -> f64 {
    let u = t * t;
    let (a, b) = (g(u), g(1.0 - u));
    if b == 0.0 {
        return if u > 0.0 { 1.0 } else { 0.0 };
    }
    a / (a + b)
}

pub fn bump_derivative(t: f64) -> f64 {
    let u = t * t;
    let (a, b) = (g(u), g(1.0 - u));
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let d = a + b;
    (g_derivative(u) * b + a * g_derivative(1.0 - u)) / (d * d) * 2.0 * t
}

/// `R(t, x, v) = (x, (t + (1-t) β(|x|²)) v)`.
pub fn shrink(t: f64, x: &[f64], v: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t = {t} is outside [0, 1]")));
    }
    if norm(v) > 1.0 + SPHERE_TOL {
        return Err(Error::Domain(format!("|v| = {} exceeds 1", norm(v))));
    }
    // same polynomial as t + (1-t)β, written so that β = 1 or t = 1 give exactly 1
    let scale = 1.0 - (1.0 - t) * (1.0 - bump(dot(x, x)));
    Ok((x.to_vec(), v.iter().map(|c| scale * c).collect()))
}

fn same_dim(a: &SpherePoint, b: &SpherePoint) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::Domain(format!(
            "points in R^{} and R^{}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

/// The scaling formula before any renormalisation.
pub fn moebius_scale_raw(p: &SpherePoint, t: f64, q: &SpherePoint) -> Result<Vec<f64>> {
    same_dim(p, q)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("scale t = {t} must be positive")));
    }
    let qp = dot(&q.0, &p.0);
    let den = (t * t - 1.0) * qp + t * t + 1.0;
    if den.abs() < SINGULAR_TOL {
        return Err(Error::Singularity(format!("denominator {den} at t = {t}")));
    }
    let a = (t - 1.0) * (t - 1.0) * qp + t * t - 1.0;
    Ok(p.0
        .iter()
        .zip(&q.0)
        .map(|(pi, qi)| (a * pi + 2.0 * t * qi) / den)
        .collect())
}

/// The conformal map of `Sⁿ` fixing `±p` that scales by `1/t` in the
/// stereographic chart centred at `p`.
pub fn moebius_scale(p: &SpherePoint, t: f64, q: &SpherePoint) -> Result<SpherePoint> {
    SpherePoint::new(moebius_scale_raw(p, t, q)?)
}

/// Projection from `-a` onto the tangent plane at `a`, as a vector in `a^⊥`.
pub fn stereo(a: &SpherePoint, q: &SpherePoint) -> Result<Vec<f64>> {
    same_dim(a, q)?;
    let qa = dot(&q.0, &a.0);
    if 1.0 + qa < SINGULAR_TOL {
        return Err(Error::Singularity("point is the projection pole".into()));
    }
    let s = 2.0 / (1.0 + qa);
    Ok(q.0
        .iter()
        .zip(&a.0)
        .map(|(qi, ai)| s * (qi - qa * ai))
        .collect())
}

/// Inverse of [`stereo`] on vectors orthogonal to `a`.
pub fn stereo_inv(a: &SpherePoint, v: &[f64]) -> Result<SpherePoint> {
    if v.len() != a.dim() {
        return Err(Error::Domain("tangent vector has the wrong length".into()));
    }
    let r2 = dot(v, v);
    let d = 4.0 + r2;
    SpherePoint::new(
        a.0.iter()
            .zip(v)
            .map(|(ai, vi)| ((4.0 - r2) * ai + 4.0 * vi) / d)
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub max_error: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.max_error <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelfTestReport {
    pub samples: usize,
    pub checks: Vec<Check>,
}

impl SelfTestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

impl fmt::Display for SelfTestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "geometry self-test, {} samples per check", self.samples)?;
        for c in &self.checks {
            writeln!(
                f,
                "  {:<28} max error {:.3e}  tolerance {:.0e}  {}",
                c.name,
                c.max_error,
                c.tolerance,
                if c.passed() { "ok" } else { "FAIL" }
            )?;
        }
        Ok(())
    }
}

pub fn random_sphere_point<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> SpherePoint {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r = norm(&v);
        if r > 0.1 && r <= 1.0 {
            return SpherePoint(v.into_iter().map(|x| x / r).collect());
        }
    }
}

fn random_ball<R: Rng + ?Sized>(rng: &mut R, dim: usize, radius: f64) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-radius..radius)).collect();
        if norm(&v) <= radius {
            return v;
        }
    }
}

/// Checks every kernel property on `samples` seeded random inputs.
pub fn selftest(seed: u64, samples: usize) -> SelfTestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max = [0.0f64; 12];
    let mut bump_grid_drop = 0.0f64;
    let grid = 10_000;
    let mut prev = bump(0.0);
    for i in 1..=grid {
        let b = bump(1.2 * i as f64 / grid as f64);
        bump_grid_drop = bump_grid_drop.max(prev - b);
        prev = b;
    }
    let mut endpoint = 0.0f64;
    endpoint = endpoint.max(bump(0.0).abs());
    for t in [1.0, 1.5, 2.0, 1e6, -1.0, -3.0] {
        endpoint = endpoint.max((bump(t) - 1.0).abs());
    }

    for _ in 0..samples {
        let dim = rng.gen_range(2..=5);
        let p = random_sphere_point(&mut rng, dim);
        let q = random_sphere_point(&mut rng, dim);
        let t = (rng.gen_range(-2.0f64..2.0)).exp();
        let s = (rng.gen_range(-1.5f64..1.5)).exp();

        let m = moebius_scale_raw(&p, t, &q).expect("t > 0");
        max[0] = max[0].max((norm(&m) - 1.0).abs());

        let mq = SpherePoint::new(m).expect("on the sphere");
        let lhs = moebius_scale(&p, s, &mq).expect("t > 0");
        let rhs = moebius_scale(&p, s * t, &q).expect("t > 0");
        max[1] = max[1].max(max_abs_diff(lhs.coords(), rhs.coords()));

        max[2] = max[2].max(max_abs_diff(
            moebius_scale_raw(&p, 1.0, &q).unwrap().as_slice(),
            q.coords(),
        ));
        max[3] = max[3].max(max_abs_diff(
            &moebius_scale_raw(&p, t, &p).unwrap(),
            p.coords(),
        ));
        let ap = p.antipode();
        max[3] = max[3].max(max_abs_diff(
            &moebius_scale_raw(&p, t, &ap).unwrap(),
            ap.coords(),
        ));

        if dot(q.coords(), p.coords()) > -0.9 {
            let tc = rng.gen_range(0.25..4.0);
            let image = moebius_scale(&p, tc, &q).unwrap();
            let left = stereo(&p, &image).unwrap();
            let right: Vec<f64> = stereo(&p, &q).unwrap().iter().map(|x| x / tc).collect();
            let scale = 1.0f64.max(norm(&right));
            max[4] = max[4].max(max_abs_diff(&left, &right) / scale);
            let back = stereo_inv(&p, &stereo(&p, &q).unwrap()).unwrap();
            max[5] = max[5].max(max_abs_diff(back.coords(), q.coords()));
        }

        let xdim = rng.gen_range(1..=3);
        let x = random_ball(&mut rng, xdim, 1.5);
        let v = random_ball(&mut rng, dim, 1.0);
        let ts = rng.gen_range(0.0..=1.0);
        let (x1, v1) = shrink(1.0, &x, &v).unwrap();
        max[6] = max[6].max(max_abs_diff(&x1, &x)).max(max_abs_diff(&v1, &v));
        let far: Vec<f64> = x.iter().map(|c| c * 2.0 / norm(&x).max(1e-3)).collect();
        let (x2, v2) = shrink(ts, &far, &v).unwrap();
        max[6] = max[6]
            .max(max_abs_diff(&x2, &far))
            .max(max_abs_diff(&v2, &v));
        let zero = vec![0.0; xdim];
        let (_, v0) = shrink(0.0, &zero, &v).unwrap();
        max[6] = max[6].max(norm(&v0));

        let w = random_ball(&mut rng, dim, 1.0);
        let tpos = rng.gen_range(0.01..=1.0);
        let (_, a) = shrink(tpos, &x, &v).unwrap();
        let (_, b) = shrink(tpos, &x, &w).unwrap();
        let gap = tpos * norm(&v.iter().zip(&w).map(|(i, j)| i - j).collect::<Vec<_>>());
        let out_gap = norm(&a.iter().zip(&b).map(|(i, j)| i - j).collect::<Vec<_>>());
        max[7] = max[7].max(gap - out_gap - 1e-15 * gap.max(1.0));

        let sg = rng.gen_range(0.05..2.0);
        let h = 1e-6 * sg;
        let fd = (g(sg + h) - g(sg - h)) / (2.0 * h);
        max[8] = max[8].max(((fd - g_derivative(sg)) / g_derivative(sg)).abs());

        let tb = rng.gen_range(-1.0..1.0);
        max[9] = max[9].max((bump(-tb) - bump(tb)).abs());
    }

    for i in 0..100 {
        let theta = -3.0 + 6.0 * i as f64 / 99.0;
        let p = SpherePoint(vec![1.0, 0.0]);
        let q = SpherePoint(vec![theta.cos(), theta.sin()]);
        let m = moebius_scale(&p, 2.0, &q).unwrap();
        let theta2 = m.coords()[1].atan2(m.coords()[0]);
        max[10] = max[10].max(((theta2 / 2.0).tan() - (theta / 2.0).tan() / 2.0).abs());
    }

    let check = |name, max_error, tolerance| Check {
        name,
        max_error,
        tolerance,
    };
    SelfTestReport {
        samples,
        checks: vec![
            check("unit norm of M", max[0], 1e-12),
            check("semigroup law", max[1], 1e-9),
            check("M at t = 1 is the identity", max[2], 1e-12),
            check("fixed points p and -p", max[3], 1e-12),
            check("conjugation to 1/t scaling", max[4], 1e-9),
            check("stereographic round trip", max[5], 1e-10),
            check("shrink identity and support", max[6], 0.0),
            check("shrink expansion bound", max[7].max(0.0), 0.0),
            check("g' against finite difference", max[8], 1e-5),
            check("bump symmetry", max[9], 0.0),
            check("bump endpoints", endpoint, 0.0),
            check("bump monotone on grid", bump_grid_drop.max(0.0), 0.0),
            check("half-angle law at t = 2", max[10], 1e-9),
        ],
    }
}
