//! Globally adaptive Gauss–Kronrod (7, 15) quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate meets the tolerance. Intervals are kept in a heap ordered by
//! (error, creation index), so the sequence of splits, and therefore the
//! result, is a pure function of the integrand and the spec.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{require, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of interval bisections per one-dimensional integral.
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 0.0, max_subdivisions: 1_000_000 }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        require(rel_tol.is_finite() && rel_tol > 0.0, || format!("rel_tol must be positive, got {rel_tol}"))?;
        require(abs_tol.is_finite() && abs_tol >= 0.0, || format!("abs_tol must be >= 0, got {abs_tol}"))?;
        require(max_subdivisions >= 1, || "max_subdivisions must be at least 1".to_string())?;
        Ok(Self { rel_tol, abs_tol, max_subdivisions })
    }

    pub fn with_rel_tol(&self, rel_tol: f64) -> Self {
        Self { rel_tol, ..*self }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleReport {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions_used: usize,
    pub converged: bool,
}

impl OracleReport {
    pub fn zero() -> Self {
        Self { value: 0.0, error_estimate: 0.0, subdivisions_used: 0, converged: true }
    }

    /// Multiplies value and error by a constant.
    pub fn scaled(&self, factor: f64) -> Self {
        Self { value: self.value * factor, error_estimate: self.error_estimate * factor.abs(), ..*self }
    }

    /// Sum of independent integrals.
    pub fn plus(&self, other: &Self) -> Self {
        Self {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            subdivisions_used: self.subdivisions_used + other.subdivisions_used,
            converged: self.converged && other.converged,
        }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Interval {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    index: usize,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error).then_with(|| other.index.cmp(&self.index))
    }
}

/// One 15-point Kronrod rule with the QUADPACK error estimate.
fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let reskh = resk * 0.5;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let result = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (result, err)
}

/// Integrates `f` over `[points[0], points[last]]`, starting from the
/// subintervals delimited by `points` (which must be increasing).
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, points: &[f64], spec: &QuadratureSpec) -> OracleReport {
    assert!(points.len() >= 2, "need at least two breakpoints");
    let mut heap = BinaryHeap::new();
    let mut done: Vec<Interval> = Vec::new();
    let mut next_index = 0;
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in points.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (value, error) = gk15(&mut f, w[0], w[1]);
        total += value;
        total_err += error;
        heap.push(Interval { a: w[0], b: w[1], value, error, index: next_index });
        next_index += 1;
    }
    let mut splits = 0;
    while total_err > spec.target(total) && splits < spec.max_subdivisions {
        let Some(iv) = heap.pop() else { break };
        let mid = 0.5 * (iv.a + iv.b);
        if !(mid > iv.a && mid < iv.b) || (iv.b - iv.a) <= 4.0 * f64::EPSILON * iv.a.abs().max(iv.b.abs()) {
            // cannot split any further
            done.push(iv);
            continue;
        }
        let (v1, e1) = gk15(&mut f, iv.a, mid);
        let (v2, e2) = gk15(&mut f, mid, iv.b);
        total += v1 + v2 - iv.value;
        total_err += e1 + e2 - iv.error;
        heap.push(Interval { a: iv.a, b: mid, value: v1, error: e1, index: next_index });
        heap.push(Interval { a: mid, b: iv.b, value: v2, error: e2, index: next_index + 1 });
        next_index += 2;
        splits += 1;
        if splits % 256 == 0 {
            // resynchronise the running sums
            let (t, e) = heap.iter().chain(done.iter()).fold((0.0, 0.0), |(t, e), iv| (t + iv.value, e + iv.error));
            total = t;
            total_err = e;
        }
    }
    done.extend(heap);
    done.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut value = 0.0;
    let mut comp = 0.0;
    let mut error = 0.0;
    for iv in &done {
        // Neumaier summation in interval order
        let t = value + iv.value;
        if value.abs() >= iv.value.abs() {
            comp += (value - t) + iv.value;
        } else {
            comp += (iv.value - t) + value;
        }
        value = t;
        error += iv.error;
    }
    let value = value + comp;
    let converged = value.is_finite() && error <= spec.target(value);
    OracleReport { value, error_estimate: error, subdivisions_used: splits, converged }
}

/// Integrates `f` over `[a, ∞)` through `x = a + s·t/(1 − t)`, `t ∈ [0, 1)`.
///
/// `t_points` are optional interior breakpoints in `t`.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    scale: f64,
    t_points: &[f64],
    spec: &QuadratureSpec,
) -> OracleReport {
    let mut pts = vec![0.0];
    pts.extend(t_points.iter().copied().filter(|&t| t > 0.0 && t < 1.0));
    pts.push(1.0);
    integrate(
        |t| {
            if t >= 1.0 {
                return 0.0;
            }
            let u = 1.0 - t;
            let x = a + scale * t / u;
            let v = f(x) * scale / (u * u);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        &pts,
        spec,
    )
}

/// Breakpoints `lo, lo + h, lo + 2h, lo + 4h, …` up to `hi`, for integrands
/// that decay away from `lo` on the scale `h`.
pub fn geometric_points(lo: f64, hi: f64, h: f64) -> Vec<f64> {
    let mut pts = vec![lo];
    let mut step = h;
    while lo + step < hi && pts.len() < 200 {
        pts.push(lo + step);
        step *= 2.0;
    }
    pts.push(hi);
    pts
}

/// Same as [`geometric_points`] but clustered towards `hi`.
pub fn geometric_points_rev(lo: f64, hi: f64, h: f64) -> Vec<f64> {
    let mut pts: Vec<f64> = geometric_points(lo, hi, h).iter().map(|&x| lo + hi - x).collect();
    pts.reverse();
    if let Some(first) = pts.first_mut() {
        *first = lo;
    }
    if let Some(last) = pts.last_mut() {
        *last = hi;
    }
    pts
}

/// Iterated integral `∫ dx ∫ dy f(x, y)`. The inner integral at each `x` is
/// computed by `inner(x, spec)` at a quarter of the outer relative tolerance,
/// the outer one at half of it; inner errors are propagated as the largest
/// relative inner error times the outer value.
pub fn integrate_nested<I>(mut inner: I, outer_points: &[f64], spec: &QuadratureSpec) -> OracleReport
where
    I: FnMut(f64, &QuadratureSpec) -> OracleReport,
{
    let inner_spec = spec.with_rel_tol(spec.rel_tol / 4.0);
    let outer_spec = spec.with_rel_tol(spec.rel_tol / 2.0);
    let mut worst_rel: f64 = 0.0;
    let mut inner_splits = 0;
    let mut all_converged = true;
    let report = integrate(
        |x| {
            let r = inner(x, &inner_spec);
            inner_splits += r.subdivisions_used;
            all_converged &= r.converged;
            if r.value != 0.0 {
                worst_rel = worst_rel.max(r.error_estimate / r.value.abs());
            }
            r.value
        },
        outer_points,
        &outer_spec,
    );
    let error = report.error_estimate + worst_rel * report.value.abs();
    OracleReport {
        value: report.value,
        error_estimate: error,
        subdivisions_used: report.subdivisions_used + inner_splits,
        converged: report.converged && all_converged && error <= spec.target(report.value),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| x.powi(5) - 3.0 * x * x, &[0.0, 2.0], &QuadratureSpec::default());
        assert!((r.value - (64.0 / 6.0 - 8.0)).abs() < 1e-13);
        assert!(r.converged);
    }

    #[test]
    fn sharp_peak_and_infinite_range() {
        let spec = QuadratureSpec::default();
        let r = integrate(|x| (-x / 1e-6).exp(), &geometric_points(0.0, 1.0, 1e-6), &spec);
        assert!((r.value / 1e-6 - 1.0).abs() < 1e-10, "{r:?}");
        let r = integrate_to_infinity(|x| (-x * x).exp(), 0.0, 1.0, &[], &spec);
        assert!((r.value - 0.5 * std::f64::consts::PI.sqrt()).abs() < 1e-12);
        assert!(r.converged);
    }

    #[test]
    fn nested_product() {
        let spec = QuadratureSpec::default();
        let r = integrate_nested(|x, s| integrate(|y| x * y.exp(), &[0.0, 1.0], s), &[0.0, 1.0], &spec);
        assert!((r.value - 0.5 * (std::f64::consts::E - 1.0)).abs() < 1e-13);
        assert!(r.converged);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let spec = QuadratureSpec::new(1e-14, 0.0, 3).unwrap();
        let r = integrate(|x: f64| x.abs().sqrt().recip(), &[1e-300, 1.0], &spec);
        assert!(!r.converged);
        assert_eq!(r.subdivisions_used, 3);
    }

    #[test]
    fn heap_order_is_deterministic() {
        let spec = QuadratureSpec::default();
        let f = |x: f64| (10.0 * x).sin() * (-x).exp();
        let a = integrate(f, &[0.0, 5.0, 20.0], &spec);
        let b = integrate(f, &[0.0, 5.0, 20.0], &spec);
        assert_eq!(a, b);
    }
}
