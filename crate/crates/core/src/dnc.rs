//! Deformation to the normal cone in local charts, in binary64.
//!
//! A point of the deformation space over the pair `(ℝ^{p+q}, ℝ^p × 0)` is
//! `(x, ξ, t)`. The chart `psi` sends it to `(x, tξ, t)` for `t != 0` and leaves
//! it alone at `t = 0`. A pair map `F` acts by `F` itself away from `t = 0` and by
//! `(x, ξ) ↦ (f(x), d_N f_x ξ)` at `t = 0`, where `d_N f_x` is the normal block of
//! the Jacobian at `(x, 0)`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};

/// Step for central finite differences.
pub const FD_STEP: f64 = 1e-6;

/// Tolerance for `f(x, 0)` having zero normal part.
const PAIR_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct DncPoint {
    pub x: Vec<f64>,
    pub xi: Vec<f64>,
    pub t: f64,
}

impl DncPoint {
    pub fn new(x: Vec<f64>, xi: Vec<f64>, t: f64) -> Self {
        Self { x, xi, t }
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().chain(&self.xi).all(|v| v.is_finite()) && self.t.is_finite()
    }

    /// Max-norm distance, including `t`.
    pub fn distance(&self, other: &Self) -> f64 {
        let coords = self.x.iter().zip(&other.x).chain(self.xi.iter().zip(&other.xi));
        coords.map(|(a, b)| (a - b).abs()).fold((self.t - other.t).abs(), f64::max)
    }
}

/// `(x, ξ, t) ↦ (x, tξ, t)`, the identity at `t = 0`.
pub fn psi(p: &DncPoint) -> DncPoint {
    if p.t == 0.0 {
        return p.clone();
    }
    DncPoint { x: p.x.clone(), xi: p.xi.iter().map(|v| p.t * v).collect(), t: p.t }
}

pub fn psi_inv(p: &DncPoint) -> DncPoint {
    if p.t == 0.0 {
        return p.clone();
    }
    DncPoint { x: p.x.clone(), xi: p.xi.iter().map(|v| v / p.t).collect(), t: p.t }
}

type VecFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
type JacFn = Arc<dyn Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync>;

/// A smooth map `ℝ^{p+q} → ℝ^{p'+q'}` that should send `ℝ^p × 0` into `ℝ^{p'} × 0`.
#[derive(Clone)]
pub struct SmoothPairMap {
    pub source: (usize, usize),
    pub target: (usize, usize),
    f: VecFn,
    jacobian: Option<JacFn>,
}

impl fmt::Debug for SmoothPairMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothPairMap")
            .field("source", &self.source)
            .field("target", &self.target)
            .field("analytic_jacobian", &self.jacobian.is_some())
            .finish()
    }
}

impl SmoothPairMap {
    pub fn new(
        source: (usize, usize),
        target: (usize, usize),
        f: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        Self { source, target, f: Arc::new(f), jacobian: None }
    }

    pub fn with_jacobian(mut self, j: impl Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync + 'static) -> Self {
        self.jacobian = Some(Arc::new(j));
        self
    }

    /// Drops the analytic Jacobian, forcing finite differences.
    pub fn without_jacobian(mut self) -> Self {
        self.jacobian = None;
        self
    }

    pub fn identity(p: usize, q: usize) -> Self {
        let n = p + q;
        Self::new((p, q), (p, q), |m| m.to_vec())
            .with_jacobian(move |_| (0..n).map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect()).collect())
    }

    /// `m ↦ A m`; `A` must be block upper-triangular for the pair to be preserved.
    pub fn linear(source: (usize, usize), target: (usize, usize), a: Vec<Vec<f64>>) -> Self {
        let a = Arc::new(a);
        let b = Arc::clone(&a);
        Self::new(source, target, move |m| a.iter().map(|row| row.iter().zip(m).map(|(r, v)| r * v).sum()).collect())
            .with_jacobian(move |_| (*b).clone())
    }

    pub fn has_analytic_jacobian(&self) -> bool {
        self.jacobian.is_some()
    }

    pub fn eval(&self, m: &[f64]) -> Vec<f64> {
        (self.f)(m)
    }

    /// Analytic if supplied, else central differences with step [`FD_STEP`].
    pub fn jacobian_at(&self, m: &[f64]) -> Vec<Vec<f64>> {
        if let Some(j) = &self.jacobian {
            return j(m);
        }
        let n_out = self.target.0 + self.target.1;
        let mut jac = vec![vec![0.0; m.len()]; n_out];
        let mut probe = m.to_vec();
        for c in 0..m.len() {
            probe[c] = m[c] + FD_STEP;
            let plus = self.eval(&probe);
            probe[c] = m[c] - FD_STEP;
            let minus = self.eval(&probe);
            probe[c] = m[c];
            for r in 0..n_out {
                jac[r][c] = (plus[r] - minus[r]) / (2.0 * FD_STEP);
            }
        }
        jac
    }

    /// `d_N f_x`: rows and columns of the normal coordinates at `(x, 0)`.
    pub fn normal_block(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let (p, q) = self.source;
        let mut m = x.to_vec();
        m.resize(p + q, 0.0);
        let jac = self.jacobian_at(&m);
        jac[self.target.0..].iter().map(|row| row[p..p + q].to_vec()).collect()
    }

    /// `other ∘ self`, with the chain-rule Jacobian when both are analytic.
    pub fn then(&self, other: &SmoothPairMap) -> SmoothPairMap {
        assert_eq!(self.target, other.source, "pair maps are not composable");
        let (f, g) = (Arc::clone(&self.f), Arc::clone(&other.f));
        let mut out = SmoothPairMap::new(self.source, other.target, move |m| g(&f(m)));
        if let (Some(jf), Some(jg)) = (self.jacobian.clone(), other.jacobian.clone()) {
            let f = Arc::clone(&self.f);
            out = out.with_jacobian(move |m| {
                let a = jf(m);
                let b = jg(&f(m));
                b.iter()
                    .map(|row| (0..a[0].len()).map(|c| row.iter().zip(&a).map(|(x, arow)| x * arow[c]).sum()).collect())
                    .collect()
            });
        }
        out
    }

    fn normal_part_at_zero(&self, x: &[f64]) -> f64 {
        let mut m = x.to_vec();
        m.resize(self.source.0 + self.source.1, 0.0);
        self.eval(&m)[self.target.0..].iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Samples points of `ℝ^p × 0` in `[-1, 1]^p` and checks they land in `ℝ^{p'} × 0`.
    pub fn verify_pair(&self, samples: usize, rng: &mut impl Rng) -> Result<()> {
        for _ in 0..samples {
            let x: Vec<f64> = (0..self.source.0).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let err = self.normal_part_at_zero(&x);
            if err > PAIR_TOL {
                return Err(Error::PairNotPreserved(format!("normal part {err:e} at x = {x:?}")));
            }
        }
        Ok(())
    }
}

/// `𝒟(F)` in chart coordinates.
pub fn dnc_map(f: &SmoothPairMap, p: &DncPoint) -> Result<DncPoint> {
    let (sp, sq) = f.source;
    if p.x.len() != sp || p.xi.len() != sq {
        return Err(Error::DegreeMismatch(format!(
            "point of shape ({}, {}) for a map from ({sp}, {sq})",
            p.x.len(),
            p.xi.len()
        )));
    }
    if p.t != 0.0 {
        let chart = psi(p);
        let mut m = chart.x;
        m.extend(chart.xi);
        let out = f.eval(&m);
        let (x, y) = out.split_at(f.target.0);
        return Ok(psi_inv(&DncPoint { x: x.to_vec(), xi: y.to_vec(), t: p.t }));
    }
    let err = f.normal_part_at_zero(&p.x);
    if err > PAIR_TOL {
        return Err(Error::PairNotPreserved(format!("normal part {err:e} at x = {:?}", p.x)));
    }
    let mut m = p.x.clone();
    m.resize(sp + sq, 0.0);
    let image = f.eval(&m);
    let block = f.normal_block(&p.x);
    let xi = block.iter().map(|row| row.iter().zip(&p.xi).map(|(a, b)| a * b).sum()).collect();
    Ok(DncPoint { x: image[..f.target.0].to_vec(), xi, t: 0.0 })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DncReport {
    pub samples: usize,
    pub max_error: f64,
    pub worst: Option<DncPoint>,
}

/// Max over the points of `|𝒟(G∘F)(p) − 𝒟(G)(𝒟(F)(p))|`.
pub fn check_dnc_functoriality(f: &SmoothPairMap, g: &SmoothPairMap, points: &[DncPoint]) -> Result<DncReport> {
    let gf = f.then(g);
    let mut report = DncReport { samples: points.len(), max_error: 0.0, worst: None };
    for p in points {
        let direct = dnc_map(&gf, p)?;
        let stepwise = dnc_map(g, &dnc_map(f, p)?)?;
        let err = direct.distance(&stepwise);
        if err > report.max_error || err.is_nan() {
            report.max_error = err;
            report.worst = Some(p.clone());
        }
    }
    Ok(report)
}

/// Random points with coordinates in `[-1, 1]`; every fourth has `t = 0`.
pub fn sample_points(p: usize, q: usize, n: usize, rng: &mut impl Rng) -> Vec<DncPoint> {
    (0..n)
        .map(|i| {
            let x = (0..p).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let xi = (0..q).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let t = if i % 4 == 0 { 0.0 } else { rng.gen_range(0.0..1.0) };
            DncPoint { x, xi, t }
        })
        .collect()
}

/// Polynomial extrapolation to `t = 0` of `dnc_map(F, (x, ξ, t))` from
/// `t ∈ {1e-2, 1e-4, 1e-6}` (Neville), compared with the `t = 0` value.
pub fn continuity_error(f: &SmoothPairMap, x: &[f64], xi: &[f64]) -> Result<f64> {
    const TS: [f64; 3] = [1e-2, 1e-4, 1e-6];
    let at = |t: f64| dnc_map(f, &DncPoint::new(x.to_vec(), xi.to_vec(), t));
    let values: Vec<DncPoint> = TS.iter().map(|&t| at(t)).collect::<Result<_>>()?;
    let limit = at(0.0)?;
    let flat = |p: &DncPoint| p.x.iter().chain(&p.xi).copied().collect::<Vec<f64>>();
    let series: Vec<Vec<f64>> = values.iter().map(flat).collect();
    let target = flat(&limit);
    let mut worst: f64 = 0.0;
    for (c, want) in target.iter().enumerate() {
        let mut table: Vec<f64> = series.iter().map(|s| s[c]).collect();
        for level in 1..TS.len() {
            for i in 0..TS.len() - level {
                let (ti, tj) = (TS[i], TS[i + level]);
                table[i] = (tj * table[i] - ti * table[i + 1]) / (tj - ti);
            }
        }
        worst = worst.max((table[0] - want).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cubic() -> SmoothPairMap {
        SmoothPairMap::new((1, 1), (1, 1), |m| vec![m[0], m[1] + m[1].powi(3)])
    }

    #[test]
    fn psi_examples() {
        let p = DncPoint::new(vec![1.0], vec![2.0, 3.0], 0.0);
        assert_eq!(psi(&p), p);
        let p = DncPoint::new(vec![0.0], vec![1.0, 0.0], 0.5);
        assert_eq!(psi(&p), DncPoint::new(vec![0.0], vec![0.5, 0.0], 0.5));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in sample_points(2, 2, 1000, &mut rng) {
            assert!(psi_inv(&psi(&p)).distance(&p) <= 1e-12);
        }
    }

    #[test]
    fn identity_and_linear() {
        let id = SmoothPairMap::identity(2, 1);
        let p = DncPoint::new(vec![0.3, -0.2], vec![0.7], 0.0);
        assert_eq!(dnc_map(&id, &p).unwrap(), p);
        let a = SmoothPairMap::linear((1, 1), (1, 1), vec![vec![2.0, 1.0], vec![0.0, 3.0]]);
        let q = dnc_map(&a, &DncPoint::new(vec![1.0], vec![0.5], 0.0)).unwrap();
        assert_eq!(q, DncPoint::new(vec![2.0], vec![1.5], 0.0));
    }

    #[test]
    fn cubic_normal_derivative() {
        let f = cubic();
        let q = dnc_map(&f, &DncPoint::new(vec![0.4], vec![0.9], 0.0)).unwrap();
        assert!((q.xi[0] - 0.9).abs() < 1e-8);
        let q = dnc_map(&f, &DncPoint::new(vec![0.4], vec![0.9], 0.1)).unwrap();
        let y = 0.09 + 0.09f64.powi(3);
        assert!((q.xi[0] - y / 0.1).abs() < 1e-12);
    }

    #[test]
    fn pair_violation_is_detected() {
        let bad = SmoothPairMap::new((1, 1), (1, 1), |m| vec![m[0], m[1] + 1.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert!(matches!(bad.verify_pair(10, &mut rng), Err(Error::PairNotPreserved(_))));
        assert!(matches!(dnc_map(&bad, &DncPoint::new(vec![0.0], vec![1.0], 0.0)), Err(Error::PairNotPreserved(_))));
    }

    #[test]
    fn functoriality_and_continuity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let points = sample_points(1, 1, 200, &mut rng);
        let g = SmoothPairMap::new((1, 1), (1, 1), |m| vec![m[0] * m[0] - m[1], m[1] * (1.0 + m[0] * m[0])]);
        let report = check_dnc_functoriality(&cubic(), &g, &points).unwrap();
        assert!(report.max_error <= 1e-8, "{report:?}");
        assert!(continuity_error(&cubic(), &[0.3], &[0.8]).unwrap() <= 1e-6);
    }
}
