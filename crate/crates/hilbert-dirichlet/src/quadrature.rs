//! Adaptive one-dimensional quadrature on bounded intervals, divergence
//! probing toward an endpoint, and supremum estimation on geometric grids.
//!
//! Every integrand in this crate lives on (0, 1) and degenerates, if at all,
//! at an endpoint. The integrator therefore seeds geometric panels toward
//! flagged endpoints (widths halving toward the endpoint) and runs a
//! fixed-order Gauss rule per panel with adaptive bisection driven by a
//! coarse/fine error estimate.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const GAUSS_ORDER: usize = 16;

/// Tolerances and budget for [`integrate`].
#[derive(Debug, Clone)]
pub struct IntegrationSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
    pub singular_at_0: bool,
    pub singular_at_1: bool,
}

impl Default for IntegrationSpec {
    fn default() -> Self {
        IntegrationSpec {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_panels: 2000,
            singular_at_0: false,
            singular_at_1: false,
        }
    }
}

impl IntegrationSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::InvalidInput(
                "integration tolerances must be strictly positive".into(),
            ));
        }
        if self.max_panels < 4 {
            return Err(Error::InvalidInput("max_panels must be at least 4".into()));
        }
        Ok(())
    }

    pub fn singular_at_1() -> Self {
        IntegrationSpec {
            singular_at_1: true,
            ..Default::default()
        }
    }

    pub fn singular_at_0() -> Self {
        IntegrationSpec {
            singular_at_0: true,
            ..Default::default()
        }
    }
}

/// Result of a successful adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    /// Conservative bound on |value - true integral|.
    pub error_estimate: f64,
    pub panels: usize,
}

fn gauss_nodes() -> &'static ([f64; GAUSS_ORDER], [f64; GAUSS_ORDER]) {
    static NODES: OnceLock<([f64; GAUSS_ORDER], [f64; GAUSS_ORDER])> = OnceLock::new();
    NODES.get_or_init(|| {
        // Gauss-Legendre nodes on (-1, 1) by Newton iteration on P_n.
        let n = GAUSS_ORDER;
        let mut xs = [0.0f64; GAUSS_ORDER];
        let mut ws = [0.0f64; GAUSS_ORDER];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre(n, x);
            xs[i] = x;
            ws[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (xs, ws)
    })
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0f64;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Fixed-order Gauss rule on a single panel. Nodes are kept strictly
/// interior even when the panel is a few ulps wide.
fn panel_gauss<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<f64> {
    let (xs, ws) = gauss_nodes();
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let inner_lo = lo.next_up();
    let inner_hi = hi.next_down();
    let mut acc = 0.0;
    for (x, w) in xs.iter().zip(ws.iter()) {
        let t = (c + h * x).clamp(inner_lo.min(c), inner_hi.max(c));
        let v = f(t);
        if !v.is_finite() {
            return Err(Error::NonFiniteIntegrand { at: t, nan: v.is_nan() });
        }
        acc += w * v;
    }
    Ok(acc * h)
}

struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    /// Width at machine resolution; no further splitting is possible.
    frozen: bool,
}

fn estimate_panel<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<Panel> {
    let coarse = panel_gauss(f, lo, hi)?;
    let mid = 0.5 * (lo + hi);
    let fine = panel_gauss(f, lo, mid)? + panel_gauss(f, mid, hi)?;
    let mut error = (fine - coarse).abs() + f64::EPSILON * fine.abs();
    let frozen = mid - lo < 4.0 * f64::EPSILON * mid.abs().max(1.0);
    if frozen {
        // The rule cannot certify anything inside an ulp-wide panel.
        error = error.max(fine.abs());
    }
    Ok(Panel {
        lo,
        hi,
        value: fine,
        error,
        frozen,
    })
}

/// Adaptive integration of `f` over the open interval (a, b).
///
/// A flagged endpoint is peeled off by a geometric cascade of panels whose
/// widths halve toward the endpoint; the unresolved endpoint mass is
/// recovered by geometric extrapolation of the cascade (exact for pure
/// power behavior, conservative for log factors). The remaining interval
/// runs through plain adaptive bisection with a coarse/fine Gauss error
/// estimate per panel.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &IntegrationSpec) -> Result<Quadrature> {
    spec.validate()?;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidInput(format!(
            "integration interval ({a}, {b}) is not a finite interval with a < b"
        )));
    }

    let mut total = 0.0f64;
    let mut total_err = 0.0f64;
    let mut panels_used = 0usize;
    let mut lo = a;
    let mut hi = b;

    if spec.singular_at_0 {
        let peeled = peel_endpoint(&f, a, b, false, spec)?;
        total += peeled.value;
        total_err += peeled.error_estimate;
        panels_used += peeled.panels;
        lo = a + 0.5 * (b - a);
    }
    if spec.singular_at_1 {
        let peeled = peel_endpoint(&f, a, b, true, spec)?;
        total += peeled.value;
        total_err += peeled.error_estimate;
        panels_used += peeled.panels;
        hi = b - if spec.singular_at_0 { 0.25 } else { 0.5 } * (b - a);
        if spec.singular_at_0 {
            lo = a + 0.25 * (b - a);
        }
    }

    if lo < hi {
        let core = adaptive_core(&f, lo, hi, spec)?;
        total += core.value;
        total_err += core.error_estimate;
        panels_used += core.panels;
    }
    Ok(Quadrature {
        value: total,
        error_estimate: total_err,
        panels: panels_used,
    })
}

/// Geometric cascade toward one endpoint covering half (or, with both
/// endpoints flagged, a quarter) of the interval, with the unresolved tail
/// recovered by geometric extrapolation of the panel values.
fn peel_endpoint<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    toward_hi: bool,
    spec: &IntegrationSpec,
) -> Result<Quadrature> {
    let width = b - a;
    let both = spec.singular_at_0 && spec.singular_at_1;
    let start_frac = if both { 0.25 } else { 0.5 };
    let seg_spec = IntegrationSpec {
        abs_tol: (0.05 * spec.abs_tol).max(1e-300),
        rel_tol: spec.rel_tol,
        max_panels: 64,
        singular_at_0: false,
        singular_at_1: false,
    };
    // Segment edge at distance width * start_frac * 2^(1-k) from the endpoint.
    let edge = |k: i32| -> f64 {
        let d = width * start_frac * 0.5f64.powi(k - 1);
        if toward_hi {
            b - d
        } else {
            a + d
        }
    };

    let mut total = 0.0f64;
    let mut err = 0.0f64;
    let mut panels = 0usize;
    let mut increments: Vec<f64> = Vec::new();

    // Geometric ratio of the cascade, if the last four increments support
    // one. Exact-zero increments are uninformative: an interior spike may
    // still be ahead.
    let fitted_rho = |increments: &[f64]| -> Option<f64> {
        let m = increments.len();
        if m < 4 || increments[m - 4..].iter().any(|d| *d == 0.0) {
            return None;
        }
        let r1 = ratio(increments[m - 1], increments[m - 2]);
        let r2 = ratio(increments[m - 2], increments[m - 3]);
        let r3 = ratio(increments[m - 3], increments[m - 4]);
        let rho = r1.max(r2).max(r3);
        (rho.is_finite() && (0.0..0.95).contains(&rho)).then_some(rho)
    };

    const MAX_LEVELS: i32 = 46;
    for k in 1..=MAX_LEVELS {
        let (slo, shi) = if toward_hi {
            (edge(k), edge(k + 1))
        } else {
            (edge(k + 1), edge(k))
        };
        if shi - slo < 4.0 * f64::EPSILON * shi.abs().max(1.0) {
            break;
        }
        let q = match adaptive_core(f, slo, shi, &seg_spec) {
            Ok(q) => q,
            Err(Error::AccuracyNotReached { best, error }) => Quadrature {
                value: best,
                error_estimate: error,
                panels: seg_spec.max_panels,
            },
            Err(e) => return Err(e),
        };
        total += q.value;
        err += q.error_estimate;
        panels += q.panels;
        increments.push(q.value);

        if let Some(rho) = fitted_rho(&increments) {
            let last = increments[increments.len() - 1];
            let tail = last.abs() * rho / (1.0 - rho);
            let tol = spec.abs_tol.max(spec.rel_tol * total.abs());
            if tail <= 0.25 * tol {
                total += tail.copysign(last);
                // The extrapolation is exact for pure powers; keep half the
                // tail as its uncertainty.
                err += 0.5 * tail + f64::EPSILON * total.abs();
                return Ok(Quadrature {
                    value: total,
                    error_estimate: err,
                    panels,
                });
            }
        }
    }
    // The cascade ran out of levels or hit machine width. Recover the
    // remaining endpoint mass by the same extrapolation when available;
    // otherwise bound it by the last increments.
    if let Some(rho) = fitted_rho(&increments) {
        let last = increments[increments.len() - 1];
        let tail = last.abs() * rho / (1.0 - rho);
        total += tail.copysign(last);
        err += 0.5 * tail + f64::EPSILON * total.abs();
    } else {
        let residual = increments.last().map(|d| d.abs()).unwrap_or(0.0);
        err += 2.0 * residual;
    }
    Ok(Quadrature {
        value: total,
        error_estimate: err,
        panels,
    })
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (num / den).abs()
    }
}

/// Plain adaptive bisection with a coarse/fine Gauss estimate per panel.
fn adaptive_core<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    spec: &IntegrationSpec,
) -> Result<Quadrature> {
    let mut panels: Vec<Panel> = vec![estimate_panel(f, a, b)?];

    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let total_err: f64 = panels.iter().map(|p| p.error).sum();
        let tol = spec.abs_tol.max(spec.rel_tol * total.abs());
        if total_err <= tol {
            return Ok(Quadrature {
                value: total,
                error_estimate: total_err,
                panels: panels.len(),
            });
        }
        // Split the worst splittable panel.
        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.frozen)
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .map(|(i, _)| i);
        let Some(worst) = worst else {
            // Nothing left to split: every remaining panel is at machine
            // width. Return the best estimate with its honest error bound.
            return Ok(Quadrature {
                value: total,
                error_estimate: total_err,
                panels: panels.len(),
            });
        };
        if panels.len() >= spec.max_panels {
            return Err(Error::AccuracyNotReached {
                best: total,
                error: total_err,
            });
        }
        let Panel { lo, hi, .. } = panels.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        panels.push(estimate_panel(f, lo, mid)?);
        panels.push(estimate_panel(f, mid, hi)?);
    }
}

/// Which endpoint of (0, 1) a [`divergence_probe`] marches toward.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeSide {
    Toward1,
    Toward0,
}

/// How a divergent integral grows along the cutoff trail: partial integrals
/// behave like 2^(k * exponent) for `Power`, like k (bounded increments) for
/// `Log`, and faster than any geometric rate for `Faster`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DivergenceRate {
    Power { exponent: f64 },
    Log,
    Faster,
}

/// Verdict of a finiteness probe, with the cutoff trail that produced it.
#[derive(Debug, Clone)]
pub enum DivergenceVerdict {
    Finite {
        value: f64,
        error: f64,
        trail: Vec<TrailPoint>,
    },
    Diverging {
        rate: DivergenceRate,
        trail: Vec<TrailPoint>,
    },
    /// Oscillating or otherwise unclassifiable trail; never silently treated
    /// as finite.
    Indeterminate { trail: Vec<TrailPoint> },
}

impl DivergenceVerdict {
    pub fn is_finite(&self) -> bool {
        matches!(self, DivergenceVerdict::Finite { .. })
    }

    pub fn finite_value(&self) -> Option<f64> {
        match self {
            DivergenceVerdict::Finite { value, .. } => Some(*value),
            _ => None,
        }
    }

    pub fn trail(&self) -> &[TrailPoint] {
        match self {
            DivergenceVerdict::Finite { trail, .. }
            | DivergenceVerdict::Diverging { trail, .. }
            | DivergenceVerdict::Indeterminate { trail } => trail,
        }
    }
}

/// One cutoff of a probe trail: the partial integral up to `cutoff`.
#[derive(Debug, Clone, Copy)]
pub struct TrailPoint {
    pub cutoff: f64,
    pub partial: f64,
}

/// Probes whether the improper integral of `f` over (0, 1) converges at the
/// given endpoint.
///
/// Partial integrals are accumulated over the geometric cutoffs
/// r_k = 1 - 2^-k (or 2^-k toward 0), k = 1..=depth. The trail is classified
/// by the least-squares slope of log2(increment) against k over the last
/// depth/2 cutoffs: geometric decay (slope <= -0.05) means convergence,
/// anything slower is divergence, with the slope doubling as the reported
/// power-growth exponent.
pub fn divergence_probe<F: Fn(f64) -> f64>(
    f: F,
    side: ProbeSide,
    depth: usize,
) -> Result<DivergenceVerdict> {
    if depth < 8 {
        return Err(Error::InvalidInput("probe depth must be at least 8".into()));
    }
    if depth > 48 {
        return Err(Error::InvalidInput(
            "probe depth beyond 48 exceeds double-precision cutoff resolution".into(),
        ));
    }
    match side {
        ProbeSide::Toward1 => probe_toward_1(&f, depth),
        ProbeSide::Toward0 => {
            let flipped = |s: f64| f(1.0 - s);
            let verdict = probe_toward_1(&flipped, depth)?;
            // Map cutoffs back to the probed endpoint.
            Ok(map_trail(verdict, |c| 1.0 - c))
        }
    }
}

fn map_trail(v: DivergenceVerdict, m: impl Fn(f64) -> f64) -> DivergenceVerdict {
    let remap = |trail: Vec<TrailPoint>| {
        trail
            .into_iter()
            .map(|p| TrailPoint {
                cutoff: m(p.cutoff),
                partial: p.partial,
            })
            .collect()
    };
    match v {
        DivergenceVerdict::Finite { value, error, trail } => DivergenceVerdict::Finite {
            value,
            error,
            trail: remap(trail),
        },
        DivergenceVerdict::Diverging { rate, trail } => DivergenceVerdict::Diverging {
            rate,
            trail: remap(trail),
        },
        DivergenceVerdict::Indeterminate { trail } => DivergenceVerdict::Indeterminate {
            trail: remap(trail),
        },
    }
}

fn probe_toward_1<F: Fn(f64) -> f64>(f: &F, depth: usize) -> Result<DivergenceVerdict> {
    let spec = IntegrationSpec {
        rel_tol: 1e-11,
        abs_tol: 1e-14,
        max_panels: 400,
        singular_at_0: false,
        singular_at_1: false,
    };
    let mut trail = Vec::with_capacity(depth);
    let mut increments = Vec::with_capacity(depth);
    let mut partial = 0.0f64;
    let mut quad_err = 0.0f64;
    for k in 1..=depth as i32 {
        let lo = 1.0 - 0.5f64.powi(k - 1);
        let hi = 1.0 - 0.5f64.powi(k);
        // Pre-scan for overflow: an integrand exceeding the double range on
        // this segment is divergence evidence, not an input error.
        let mut overflowed = false;
        for i in 1..8 {
            let t = lo + (hi - lo) * (i as f64) / 8.0;
            let v = f(t);
            if v.is_nan() {
                return Err(Error::NonFiniteIntegrand { at: t, nan: true });
            }
            if v.is_infinite() || v.abs() > 1e290 {
                overflowed = true;
                break;
            }
        }
        if overflowed {
            increments.push(f64::INFINITY);
            trail.push(TrailPoint {
                cutoff: hi,
                partial: f64::INFINITY,
            });
            return Ok(DivergenceVerdict::Diverging {
                rate: DivergenceRate::Faster,
                trail,
            });
        }
        let q = match integrate(|t| f(t), lo, hi, &spec) {
            Ok(q) => q,
            Err(Error::AccuracyNotReached { best, error }) => Quadrature {
                value: best,
                error_estimate: error,
                panels: spec.max_panels,
            },
            Err(e) => return Err(e),
        };
        partial += q.value;
        quad_err += q.error_estimate;
        increments.push(q.value);
        trail.push(TrailPoint {
            cutoff: hi,
            partial,
        });
    }
    Ok(classify(increments, trail, partial, quad_err))
}

fn classify(
    increments: Vec<f64>,
    trail: Vec<TrailPoint>,
    partial: f64,
    quad_err: f64,
) -> DivergenceVerdict {
    let half = increments.len() / 2;
    let window = &increments[half..];

    // Negligible increments: already converged.
    let scale = partial.abs().max(1e-300);
    if window.iter().all(|d| d.abs() <= 1e-14 * scale) {
        return DivergenceVerdict::Finite {
            value: partial,
            error: quad_err + 1e-14 * scale,
            trail,
        };
    }
    // Sign changes in the tail window: refuse to classify.
    if window.iter().any(|d| *d <= 0.0) {
        return DivergenceVerdict::Indeterminate { trail };
    }

    let slope = log2_slope(window);
    if !slope.is_finite() {
        return DivergenceVerdict::Indeterminate { trail };
    }

    if slope <= -0.05 {
        // Geometric tail extrapolation from the fitted ratio.
        let rho = 2.0f64.powf(slope).min(0.97);
        let last = *window.last().unwrap();
        let tail = last * rho / (1.0 - rho);
        return DivergenceVerdict::Finite {
            value: partial + tail,
            error: quad_err + tail + f64::EPSILON * partial.abs(),
            trail,
        };
    }

    // Divergent. Distinguish accelerating growth from a steady rate.
    let (first_half, second_half) = window.split_at(window.len() / 2);
    let s1 = log2_slope(first_half);
    let s2 = log2_slope(second_half);
    let rate = if s2.is_finite() && s1.is_finite() && s2 > s1 + 0.5 {
        DivergenceRate::Faster
    } else if slope >= 0.3 {
        DivergenceRate::Power { exponent: slope }
    } else {
        DivergenceRate::Log
    };
    DivergenceVerdict::Diverging { rate, trail }
}

/// Least-squares slope of log2(values) against the index.
fn log2_slope(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return f64::NAN;
    }
    let n = values.len() as f64;
    let mut sx = 0.0;
    let mut sy = 0.0;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (i, v) in values.iter().enumerate() {
        let x = i as f64;
        let y = v.abs().max(1e-300).log2();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Supremum estimate over the geometric grid r_k = 1 - 2^-k.
#[derive(Debug, Clone)]
pub struct GridSup {
    pub sup: f64,
    pub arg: f64,
    /// f(r_k) along the grid; non-finite entries mark divergence.
    pub trail: Vec<(f64, f64)>,
}

/// Evaluates `f` over the geometric grid r_k = 1 - 2^-k (k = 1..=depth) and
/// refines around the grid argmax by golden-section search. The trail is
/// returned so callers can detect unbounded growth.
pub fn grid_sup<F: Fn(f64) -> f64>(f: F, depth: usize) -> Result<GridSup> {
    if depth < 8 {
        return Err(Error::InvalidInput("grid depth must be at least 8".into()));
    }
    if depth > 48 {
        return Err(Error::InvalidInput(
            "grid depth beyond 48 exceeds double-precision grid resolution".into(),
        ));
    }
    let grid_r = |k: i32| 1.0 - 0.5f64.powi(k);
    let mut trail = Vec::with_capacity(depth);
    let mut best = f64::NEG_INFINITY;
    let mut best_k = 1i32;
    for k in 1..=depth as i32 {
        let r = grid_r(k);
        let v = f(r);
        trail.push((r, v));
        if v.is_finite() && v > best {
            best = v;
            best_k = k;
        }
    }
    if !best.is_finite() {
        // Every grid value non-finite; report the trail as-is.
        return Ok(GridSup {
            sup: f64::INFINITY,
            arg: grid_r(depth as i32),
            trail,
        });
    }

    // Golden-section refinement around the bracketing neighbors.
    let lo = grid_r(best_k - 1); // k = 1 brackets down to r = 0
    let hi = if (best_k as usize) < depth {
        grid_r(best_k + 1)
    } else {
        grid_r(depth as i32 + 1)
    };
    let (arg0, sup0) = (grid_r(best_k), best);
    let (arg, sup) = golden_max(&f, lo, hi, 60);
    let (arg, sup) = if sup.is_finite() && sup > sup0 {
        (arg, sup)
    } else {
        (arg0, sup0)
    };
    Ok(GridSup { sup, arg, trail })
}

/// Appends the 16-point Gauss nodes and weights of one panel; used by
/// fixed composite rules that evaluate an integrand once and reuse it.
pub(crate) fn gauss_panel_nodes(lo: f64, hi: f64, nodes: &mut Vec<f64>, weights: &mut Vec<f64>) {
    let (xs, ws) = gauss_nodes();
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    for (x, w) in xs.iter().zip(ws.iter()) {
        nodes.push(c + h * x);
        weights.push(w * h);
    }
}

/// Golden-section search for a local maximum of `f` on [lo, hi].
/// Returns the best (argument, value) pair seen, ignoring non-finite values.
pub(crate) fn golden_max<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, iters: usize) -> (f64, f64) {
    let inv_phi = 0.618_033_988_749_894_9_f64;
    let mut lo = lo;
    let mut hi = hi;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut arg = x1;
    let mut sup = f64::NEG_INFINITY;
    for _ in 0..iters {
        if f1.is_finite() && f1 > sup {
            sup = f1;
            arg = x1;
        }
        if f2.is_finite() && f2 > sup {
            sup = f2;
            arg = x2;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    (arg, sup)
}

/// Growth classification of a positive trail (used for sup trails and
/// doubling ratios).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrailClass {
    /// Last five values within 1% of each other.
    Stabilized,
    /// Log-scale slope above 0.05 over the last half, or non-finite values.
    Growing { slope: f64 },
    Indeterminate,
}

pub fn classify_trail(values: &[f64]) -> TrailClass {
    if values.len() < 5 {
        return TrailClass::Indeterminate;
    }
    if values.iter().any(|v| !v.is_finite()) {
        return TrailClass::Growing { slope: f64::INFINITY };
    }
    let last5 = &values[values.len() - 5..];
    let mx = last5.iter().cloned().fold(f64::MIN, f64::max);
    let mn = last5.iter().cloned().fold(f64::MAX, f64::min);
    if mx <= 0.0 {
        return TrailClass::Indeterminate;
    }
    if (mx - mn) / mx.abs() < 0.01 {
        return TrailClass::Stabilized;
    }
    let half = &values[values.len() / 2..];
    let slope = log2_slope(half);
    if slope > 0.05 {
        TrailClass::Growing { slope }
    } else {
        TrailClass::Indeterminate
    }
}


#[cfg(test)]
mod prop_tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        // Linearity on random cubic pairs, within 10x tolerance.
        #[test]
        fn integrate_is_linear(
            a0 in -2.0f64..2.0, a1 in -2.0f64..2.0, a2 in -2.0f64..2.0,
            b0 in -2.0f64..2.0, b1 in -2.0f64..2.0, b3 in -2.0f64..2.0,
            ca in -3.0f64..3.0, cb in -3.0f64..3.0,
        ) {
            let spec = IntegrationSpec::default();
            let f = move |s: f64| a0 + a1 * s + a2 * s * s;
            let g = move |s: f64| b0 + b1 * s + b3 * s * s * s;
            let fi = integrate(f, 0.0, 1.0, &spec).unwrap().value;
            let gi = integrate(g, 0.0, 1.0, &spec).unwrap().value;
            let combined = integrate(move |s| ca * f(s) + cb * g(s), 0.0, 1.0, &spec).unwrap().value;
            let expected = ca * fi + cb * gi;
            prop_assert!((combined - expected).abs() <= 10.0 * spec.abs_tol.max(spec.rel_tol * expected.abs()) + 1e-12);
        }

        // Exactness on monomials against the closed form.
        #[test]
        fn integrate_monomials_exact(n in 0u32..12) {
            let q = integrate(|s| s.powi(n as i32), 0.0, 1.0, &IntegrationSpec::default()).unwrap();
            let exact = 1.0 / (n as f64 + 1.0);
            prop_assert!((q.value - exact).abs() <= q.error_estimate.max(1e-13));
        }
    }
}
