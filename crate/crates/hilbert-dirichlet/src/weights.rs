//! Radial weights on [0, 1): tails, moments, membership in the doubling
//! class, and the Muckenhoupt-type condition evaluators.
//!
//! A radial weight `v` induces the Dirichlet-type space `D_v`. The
//! quantities computed here are
//!
//! - the tail `v̂(r) = int_r^1 v(s) ds` and moments `v_x = int_0^1 s^x v(s) ds`;
//! - the doubling ratio `v̂(r) / v̂((1+r)/2)` whose boundedness defines the
//!   admissible weight class;
//! - the condition values
//!   `M1(v) = sup_r (int_r^1 v̂/(1-s)^2)^(1/2) (int_0^r 1/v̂)^(1/2)`,
//!   `M2(v) = sup_r (int_0^r v̂/(1-s)^4)^(1/2) (int_r^1 (1-s)^2/v̂)^(1/2)`,
//!   and the auxiliary `M3`, `M4` variants;
//! - the well-definedness integral `int_0^1 (1-s)^2 / v̂(s) ds`, whose
//!   finiteness makes the generalized Hilbert operator well defined on the
//!   whole space.
//!
//! For the standard weights `(1-s)^alpha`, `M1` is finite exactly for
//! `alpha > 0` and `M2` exactly for `alpha < 2`.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::quadrature::{
    classify_trail, divergence_probe, golden_max, integrate, DivergenceVerdict, IntegrationSpec,
    ProbeSide, TrailClass,
};

/// Natural log of the Beta function via log-Gamma.
pub(crate) fn lbeta(a: f64, b: f64) -> f64 {
    libm::lgamma(a) + libm::lgamma(b) - libm::lgamma(a + b)
}

/// Depth of the geometric grid r_k = 1 - 2^-k cached at construction.
const GRID_CACHE_DEPTH: usize = 40;
/// Grid depth used for the cached hypothesis summary.
const HYPOTHESIS_DEPTH: usize = 24;

/// Floating-point mode for moment evaluation. `Extended` carries values in
/// log scale, so moments that underflow the double range (heavy weights at
/// x beyond ~1e5) stay usable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    #[default]
    Double,
    Extended,
}

#[derive(Debug, Clone)]
enum WeightKind {
    /// v(s) = (1-s)^alpha, alpha > -1.
    Standard { alpha: f64 },
    /// v(s) = (1-s) * base(s); the lift that turns a Bergman-space norm
    /// into an equivalent Dirichlet-type norm.
    BergmanLift { base: Box<RadialWeight> },
    /// v(s) = exp(-c / (1-s)^gamma); the non-doubling control family.
    Exponential { c: f64, gamma: f64 },
    /// Piecewise-linear interpolation of (s, v) samples, extended as a
    /// constant beyond the first/last knot.
    Tabulated { knots: Vec<(f64, f64)>, source: String },
}

/// A radial weight profile on [0, 1) with cached geometric-grid tails.
/// Immutable after construction; cheap to clone and safe to share.
#[derive(Debug, Clone)]
pub struct RadialWeight {
    kind: WeightKind,
    precision: Precision,
    grid_tails_ln: Vec<f64>,
    hypotheses: OnceLock<HypothesisSummary>,
}

impl fmt::Display for RadialWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl RadialWeight {
    pub fn standard(alpha: f64) -> Result<Self> {
        if !(alpha > -1.0) || !alpha.is_finite() {
            return Err(Error::InvalidInput(format!(
                "standard weight needs alpha > -1, got {alpha}"
            )));
        }
        Ok(Self::finish(WeightKind::Standard { alpha }))
    }

    pub fn bergman_lift(base: RadialWeight) -> Self {
        Self::finish(WeightKind::BergmanLift { base: Box::new(base) })
    }

    pub fn exponential(c: f64, gamma: f64) -> Result<Self> {
        if !(c > 0.0) || !(gamma > 0.0) {
            return Err(Error::InvalidInput(format!(
                "exponential weight needs c > 0 and gamma > 0, got c = {c}, gamma = {gamma}"
            )));
        }
        Ok(Self::finish(WeightKind::Exponential { c, gamma }))
    }

    /// Builds a tabulated weight from (s, v) samples with strictly
    /// increasing s in [0, 1) and v > 0.
    pub fn tabulated(knots: Vec<(f64, f64)>, source: impl Into<String>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidInput(
                "tabulated weight needs at least two samples".into(),
            ));
        }
        for w in knots.windows(2) {
            if !(w[0].0 < w[1].0) {
                return Err(Error::InvalidInput(
                    "tabulated weight samples must have strictly increasing s".into(),
                ));
            }
        }
        for &(s, v) in &knots {
            if !(0.0..1.0).contains(&s) || !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "tabulated weight sample (s = {s}, v = {v}) outside s in [0,1), v > 0"
                )));
            }
        }
        Ok(Self::finish(WeightKind::Tabulated {
            knots,
            source: source.into(),
        }))
    }

    fn finish(kind: WeightKind) -> Self {
        let mut w = RadialWeight {
            kind,
            precision: Precision::Double,
            grid_tails_ln: Vec::new(),
            hypotheses: OnceLock::new(),
        };
        let mut cache = Vec::with_capacity(GRID_CACHE_DEPTH);
        for k in 1..=GRID_CACHE_DEPTH as i32 {
            cache.push(w.tail_ln_unchecked(0.5f64.powi(k)));
        }
        w.grid_tails_ln = cache;
        w
    }

    pub fn with_precision(mut self, precision: Precision) -> Self {
        self.precision = precision;
        self
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    /// Weight specification in the CLI mini-language:
    /// `std:<alpha>`, `bergman:<base>`, `exp:<c>:<gamma>`, `table:<path>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if let Some(rest) = spec.strip_prefix("std:") {
            let alpha: f64 = rest
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad alpha in weight spec '{spec}'")))?;
            return Self::standard(alpha);
        }
        if let Some(rest) = spec.strip_prefix("bergman:") {
            return Ok(Self::bergman_lift(Self::parse(rest)?));
        }
        if let Some(rest) = spec.strip_prefix("exp:") {
            let mut it = rest.split(':');
            let c: f64 = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::InvalidInput(format!("bad c in weight spec '{spec}'")))?;
            let gamma: f64 = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::InvalidInput(format!("bad gamma in weight spec '{spec}'")))?;
            return Self::exponential(c, gamma);
        }
        if let Some(path) = spec.strip_prefix("table:") {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::InvalidInput(format!("cannot read weight table '{path}': {e}"))
            })?;
            let mut knots = Vec::new();
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let mut cols = line.split([' ', '\t', ',']).filter(|t| !t.is_empty());
                let s: f64 = cols.next().and_then(|t| t.parse().ok()).ok_or_else(|| {
                    Error::InvalidInput(format!("bad s on line {} of '{path}'", lineno + 1))
                })?;
                let v: f64 = cols.next().and_then(|t| t.parse().ok()).ok_or_else(|| {
                    Error::InvalidInput(format!("bad v on line {} of '{path}'", lineno + 1))
                })?;
                knots.push((s, v));
            }
            return Self::tabulated(knots, format!("table:{path}"));
        }
        Err(Error::InvalidInput(format!(
            "unknown weight spec '{spec}' (expected std:<alpha>, bergman:<base>, exp:<c>:<gamma>, table:<path>)"
        )))
    }

    pub fn id(&self) -> String {
        match &self.kind {
            WeightKind::Standard { alpha } => format!("std:{alpha}"),
            WeightKind::BergmanLift { base } => format!("bergman:{}", base.id()),
            WeightKind::Exponential { c, gamma } => format!("exp:{c}:{gamma}"),
            WeightKind::Tabulated { source, .. } => source.clone(),
        }
    }

    /// Point value v(s).
    pub fn density(&self, s: f64) -> f64 {
        match &self.kind {
            WeightKind::Standard { alpha } => (1.0 - s).powf(*alpha),
            WeightKind::BergmanLift { base } => (1.0 - s) * base.density(s),
            WeightKind::Exponential { c, gamma } => (-c / (1.0 - s).powf(*gamma)).exp(),
            WeightKind::Tabulated { knots, .. } => {
                if s <= knots[0].0 {
                    return knots[0].1;
                }
                if s >= knots[knots.len() - 1].0 {
                    return knots[knots.len() - 1].1;
                }
                let i = knots.partition_point(|k| k.0 <= s) - 1;
                let (s0, v0) = knots[i];
                let (s1, v1) = knots[i + 1];
                v0 + (v1 - v0) * (s - s0) / (s1 - s0)
            }
        }
    }

    /// Tail v̂(r) = int_r^1 v(s) ds. Strictly decreasing in r.
    pub fn tail(&self, r: f64) -> Result<f64> {
        self.check_radius(r)?;
        Ok(self.tail_unchecked(r))
    }

    pub(crate) fn tail_unchecked(&self, r: f64) -> f64 {
        match &self.kind {
            WeightKind::Standard { alpha } => (1.0 - r).powf(alpha + 1.0) / (alpha + 1.0),
            WeightKind::BergmanLift { base } => match &base.kind {
                WeightKind::Standard { alpha } => (1.0 - r).powf(alpha + 2.0) / (alpha + 2.0),
                _ => quadrature_tail(|s| (1.0 - s) * base.density(s), r),
            },
            WeightKind::Exponential { .. } => self.tail_ln_unchecked(1.0 - r).exp(),
            WeightKind::Tabulated { knots, .. } => tabulated_tail(knots, r),
        }
    }

    /// ln v̂(1 - eps), robust where the tail underflows. Taking the distance
    /// to 1 as the argument lets grid callers keep full precision.
    pub fn tail_ln_at(&self, one_minus_r: f64) -> Result<f64> {
        if !(one_minus_r > 0.0 && one_minus_r <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "tail distance must be in (0, 1], got {one_minus_r}"
            )));
        }
        // Exact powers of two hit the construction-time cache.
        let l = one_minus_r.log2();
        if l.fract() == 0.0 {
            let k = (-l) as i64;
            if k >= 1 && (k as usize) <= self.grid_tails_ln.len() {
                return Ok(self.grid_tails_ln[k as usize - 1]);
            }
        }
        Ok(self.tail_ln_unchecked(one_minus_r))
    }

    pub fn tail_ln(&self, r: f64) -> Result<f64> {
        self.check_radius(r)?;
        self.tail_ln_at(1.0 - r)
    }

    fn tail_ln_unchecked(&self, eps: f64) -> f64 {
        match &self.kind {
            WeightKind::Standard { alpha } => (alpha + 1.0) * eps.ln() - (alpha + 1.0).ln(),
            WeightKind::BergmanLift { base } => match &base.kind {
                WeightKind::Standard { alpha } => (alpha + 2.0) * eps.ln() - (alpha + 2.0).ln(),
                _ => quadrature_tail(|s| (1.0 - s) * base.density(s), 1.0 - eps).ln(),
            },
            WeightKind::Exponential { c, gamma } => {
                // v̂(1-eps) = int_0^eps exp(-c/u^gamma) du
                //          = exp(L) int_0^eps exp(-c/u^gamma - L) du, L = -c/eps^gamma.
                let l = -c / eps.powf(*gamma);
                let spec = IntegrationSpec {
                    singular_at_0: true,
                    ..Default::default()
                };
                let inner = integrate(
                    |u| {
                        let e = -c / u.powf(*gamma) - l;
                        if e < -700.0 {
                            0.0
                        } else {
                            e.exp()
                        }
                    },
                    0.0,
                    eps,
                    &spec,
                )
                .map(|q| q.value)
                .unwrap_or(0.0);
                l + inner.max(f64::MIN_POSITIVE).ln()
            }
            WeightKind::Tabulated { knots, .. } => tabulated_tail(knots, 1.0 - eps).ln(),
        }
    }

    fn check_radius(&self, r: f64) -> Result<()> {
        if !(0.0..1.0).contains(&r) {
            return Err(Error::InvalidInput(format!(
                "radius must be in [0, 1), got {r}"
            )));
        }
        Ok(())
    }

    /// Moment v_x = int_0^1 s^x v(s) ds. Monotone decreasing in x.
    ///
    /// In `Double` precision an underflowing moment is an error carrying the
    /// log-scale value; in `Extended` precision the value is reconstructed
    /// from the log-scale computation (possibly subnormal or zero), with
    /// [`RadialWeight::moment_ln`] holding the usable number.
    pub fn moment(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::InvalidInput(format!("moment needs x >= 0, got {x}")));
        }
        match &self.kind {
            WeightKind::Standard { alpha } => Ok(lbeta(x + 1.0, alpha + 1.0).exp()),
            WeightKind::BergmanLift { base } => match &base.kind {
                WeightKind::Standard { alpha } => Ok(lbeta(x + 1.0, alpha + 2.0).exp()),
                _ => {
                    let q = integrate(
                        |s| s.powf(x) * (1.0 - s) * base.density(s),
                        0.0,
                        1.0,
                        &IntegrationSpec::singular_at_1(),
                    )?;
                    Ok(q.value)
                }
            },
            WeightKind::Exponential { .. } => {
                let ln = self.moment_ln(x)?;
                if ln < f64::MIN_POSITIVE.ln() {
                    match self.precision {
                        Precision::Double => Err(Error::Underflow { log_value: ln }),
                        Precision::Extended => Ok(ln.exp()),
                    }
                } else {
                    Ok(ln.exp())
                }
            }
            WeightKind::Tabulated { knots, .. } => Ok(tabulated_moment(knots, x)),
        }
    }

    /// ln v_x, available in both precision modes. For the exponential family
    /// the integral is carried in log scale (peak-shifted), so arbitrarily
    /// small moments keep full relative accuracy on the log.
    pub fn moment_ln(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::InvalidInput(format!("moment needs x >= 0, got {x}")));
        }
        match &self.kind {
            WeightKind::Standard { alpha } => Ok(lbeta(x + 1.0, alpha + 1.0)),
            WeightKind::BergmanLift { base } => match &base.kind {
                WeightKind::Standard { alpha } => Ok(lbeta(x + 1.0, alpha + 2.0)),
                _ => Ok(self.moment(x)?.ln()),
            },
            WeightKind::Exponential { c, gamma } => {
                // phi(s) = x ln s - c/(1-s)^gamma; shift by the interior peak.
                let phi = move |s: f64| {
                    if x == 0.0 {
                        -c / (1.0 - s).powf(*gamma)
                    } else {
                        x * s.ln() - c / (1.0 - s).powf(*gamma)
                    }
                };
                let (_, peak) = golden_max(&phi, 1e-12, 1.0 - 1e-12, 200);
                let inner = integrate(
                    |s| {
                        let e = phi(s) - peak;
                        if e < -700.0 {
                            0.0
                        } else {
                            e.exp()
                        }
                    },
                    0.0,
                    1.0,
                    &IntegrationSpec::singular_at_1(),
                )?;
                Ok(peak + inner.value.max(f64::MIN_POSITIVE).ln())
            }
            WeightKind::Tabulated { knots, .. } => Ok(tabulated_moment(knots, x).ln()),
        }
    }

    /// Cached doubling / condition summary used as the hypothesis gate by
    /// the operator assembly routines.
    pub fn hypotheses(&self) -> &HypothesisSummary {
        self.hypotheses.get_or_init(|| match self.condition_report(HYPOTHESIS_DEPTH) {
            Ok(report) => HypothesisSummary {
                doubling: report.doubling.verdict,
                m1: report.m1.verdict,
                m2: report.m2.verdict,
                welldef: if report.welldef.is_finite() {
                    Finiteness::Finite
                } else if matches!(report.welldef, DivergenceVerdict::Diverging { .. }) {
                    Finiteness::Infinite
                } else {
                    Finiteness::Indeterminate
                },
                m1_value: report.m1.value,
                m2_value: report.m2.value,
            },
            Err(_) => HypothesisSummary {
                doubling: false,
                m1: Finiteness::Indeterminate,
                m2: Finiteness::Indeterminate,
                welldef: Finiteness::Indeterminate,
                m1_value: f64::NAN,
                m2_value: f64::NAN,
            },
        })
    }

    /// Evaluates the doubling ratio, all Muckenhoupt-type conditions and the
    /// well-definedness integral on the geometric grid of the given depth.
    pub fn condition_report(&self, depth: usize) -> Result<ConditionReport> {
        if depth < 10 {
            return Err(Error::InvalidInput(
                "condition report needs grid depth >= 10".into(),
            ));
        }
        if depth > 40 {
            return Err(Error::InvalidInput(
                "condition report grid depth beyond 40 exceeds double resolution".into(),
            ));
        }

        let doubling = self.doubling_report(depth);

        // One-shot probes of the integrals with a possibly divergent
        // endpoint at 1; they decide per-point finiteness of the factors.
        let m1_inner = probe_quiet(|s| self.tail_unchecked(s) / sq(1.0 - s), depth.min(24));
        let welldef = probe_quiet(|s| sq(1.0 - s) / self.tail_unchecked(s), depth.min(24));
        let always_finite = DivergenceVerdict::Finite {
            value: 0.0,
            error: 0.0,
            trail: vec![],
        };

        let m1 = self.sup_condition(depth, &m1_inner, M1_FACTORS);
        let m2 = self.sup_condition(depth, &welldef, M2_FACTORS);
        let m3 = self.sup_condition(depth, &always_finite, M3_FACTORS);
        let m4 = self.sup_condition(depth, &welldef, M4_FACTORS);

        Ok(ConditionReport {
            doubling,
            m1,
            m2,
            m3,
            m4,
            welldef,
            grid_depth: depth,
        })
    }

    fn doubling_report(&self, depth: usize) -> DoublingReport {
        // ratio_k = v̂(r_k) / v̂((1+r_k)/2) = v̂(1-2^-k) / v̂(1-2^-(k+1)),
        // in log scale so the exponential family overflows cleanly to inf.
        let mut ratios = Vec::with_capacity(depth);
        for k in 1..=depth as i32 {
            let a = self.tail_ln_at(0.5f64.powi(k)).unwrap_or(f64::NAN);
            let b = self.tail_ln_at(0.5f64.powi(k + 1)).unwrap_or(f64::NAN);
            ratios.push((a - b).exp());
        }
        let class = classify_trail(&ratios);
        let sup_ratio = ratios.iter().cloned().fold(f64::NAN, f64::max);

        // beta from the log-log regression of the tail along the grid.
        let mut sx = 0.0;
        let mut sy = 0.0;
        let mut sxx = 0.0;
        let mut sxy = 0.0;
        let mut pts = Vec::new();
        for k in 4..=depth as i32 {
            let eps = 0.5f64.powi(k);
            if let Ok(y) = self.tail_ln_at(eps) {
                if y.is_finite() {
                    let x = eps.ln();
                    pts.push((x, y));
                    sx += x;
                    sy += y;
                    sxx += x * x;
                    sxy += x * y;
                }
            }
        }
        let n = pts.len() as f64;
        let (beta, residual) = if pts.len() >= 3 {
            let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
            let intercept = (sy - slope * sx) / n;
            let res = pts
                .iter()
                .map(|(x, y)| (y - slope * x - intercept).abs())
                .fold(0.0, f64::max);
            (slope.max(0.0), res)
        } else {
            (f64::NAN, f64::NAN)
        };

        DoublingReport {
            verdict: class == TrailClass::Stabilized,
            sup_ratio,
            beta_estimate: beta,
            beta_residual: residual,
            trail: ratios,
        }
    }

    /// Evaluates sup_r F1(r) * F2(r) over the geometric grid with golden
    /// refinement, classifying the trail. `gate` is the verdict of the
    /// one-shot probe for the factor whose integral runs into the endpoint.
    fn sup_condition(
        &self,
        depth: usize,
        gate: &DivergenceVerdict,
        factors: MuckenhouptFactors,
    ) -> ConditionVerdict {
        if let DivergenceVerdict::Diverging { trail, .. } = gate {
            return ConditionVerdict {
                verdict: Finiteness::Infinite,
                value: f64::INFINITY,
                trail: trail.iter().map(|p| (p.cutoff, p.partial)).collect(),
            };
        }
        if matches!(gate, DivergenceVerdict::Indeterminate { .. }) {
            return ConditionVerdict {
                verdict: Finiteness::Indeterminate,
                value: f64::NAN,
                trail: vec![],
            };
        }

        let product = |r: f64| -> Result<f64> {
            let f1 = (factors.first)(self, r)?;
            let f2 = (factors.second)(self, r)?;
            Ok(f1 * f2)
        };

        let mut trail = Vec::with_capacity(depth);
        let mut overflowed = false;
        for k in 1..=depth as i32 {
            let r = 1.0 - 0.5f64.powi(k);
            match product(r) {
                Ok(p) if p.is_finite() => trail.push((r, p)),
                Ok(_) | Err(Error::NonFiniteIntegrand { nan: false, .. }) => {
                    trail.push((r, f64::INFINITY));
                    overflowed = true;
                    break;
                }
                Err(_) => {
                    return ConditionVerdict {
                        verdict: Finiteness::Indeterminate,
                        value: f64::NAN,
                        trail,
                    };
                }
            }
        }
        if overflowed {
            return ConditionVerdict {
                verdict: Finiteness::Infinite,
                value: f64::INFINITY,
                trail,
            };
        }
        let values: Vec<f64> = trail.iter().map(|t| t.1).collect();
        match classify_trail(&values) {
            TrailClass::Stabilized => {
                let grid_best = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                // Refine around the end of the grid, where these products
                // attain their supremum.
                let lo = 1.0 - 0.5f64.powi(depth as i32 - 1);
                let hi = 1.0 - 0.5f64.powi(depth as i32 + 1);
                let (_, refined) =
                    golden_max(&|r| product(r).unwrap_or(f64::NEG_INFINITY), lo, hi, 40);
                let sup = grid_best.max(refined);
                ConditionVerdict {
                    verdict: Finiteness::Finite,
                    value: sup.max(0.0).sqrt(),
                    trail,
                }
            }
            TrailClass::Growing { .. } => ConditionVerdict {
                verdict: Finiteness::Infinite,
                value: f64::INFINITY,
                trail,
            },
            TrailClass::Indeterminate => ConditionVerdict {
                verdict: Finiteness::Indeterminate,
                value: f64::NAN,
                trail,
            },
        }
    }

    /// Two-sided ratio report for the comparison lemmas that hold for every
    /// doubling weight: moment against tail (v_x vs v̂(1-1/x)), the
    /// log-kernel integral against v̂(r)(1-r), geometric tail/head sums of
    /// 2^(-3qn) v_{2^(n+1)}^(-q) type, and the M4-against-M2 domination.
    pub fn lemma_checks(&self, q: f64, kmax: usize, xmax: f64) -> Result<LemmaReport> {
        if !(q > 0.0) {
            return Err(Error::InvalidInput(format!(
                "lemma checks need q > 0, got {q}"
            )));
        }
        if kmax < 6 {
            return Err(Error::InvalidInput("lemma checks need kmax >= 6".into()));
        }
        if !(xmax > 2.0) {
            return Err(Error::InvalidInput("lemma checks need xmax > 2".into()));
        }
        if !self.hypotheses().doubling {
            return Err(Error::HypothesisNotMet {
                weight: self.id(),
                condition: "doubling".into(),
                detail: "the comparison lemmas assume a doubling weight".into(),
            });
        }

        let mut per_lemma = Vec::new();

        // v_x against v̂(1 - 1/x) over log-spaced x.
        {
            let mut points = Vec::new();
            let steps = 12usize;
            for i in 0..=steps {
                let x = (xmax.ln() * i as f64 / steps as f64).exp().max(1.0);
                let lhs = self.moment(x)?;
                let rhs = self.tail(1.0 - 1.0 / x)?;
                points.push(RatioPoint::new(x, lhs, rhs));
            }
            per_lemma.push(LemmaRatios::new("moment-vs-tail", points));
        }

        // Log-kernel: int_r^1 s ln(s/r) v(s) ds against v̂(r)(1-r), r >= 1/2.
        {
            let mut points = Vec::new();
            for k in 1..=(kmax.min(20)) as i32 {
                let r = 1.0 - 0.5f64.powi(k);
                let lhs = integrate(
                    |s| s * (s / r).ln() * self.density(s),
                    r,
                    1.0,
                    &IntegrationSpec::singular_at_1(),
                )?
                .value;
                let rhs = self.tail(r)? * (1.0 - r);
                points.push(RatioPoint::new(r, lhs, rhs));
            }
            per_lemma.push(LemmaRatios::new("log-kernel-vs-tail", points));
        }

        // Tail sums: sum_{n>=k} 2^(-3qn) v_{2^(n+1)}^(-q) <= C 2^(-3qk) v_{2^(k+1)}^(-q).
        {
            let term = |n: i32| -> Result<f64> {
                let ln = -3.0 * q * n as f64 * std::f64::consts::LN_2
                    - q * self.moment_ln(2f64.powi(n + 1))?;
                Ok(ln.exp())
            };
            let mut points = Vec::new();
            for k in 1..=kmax as i32 {
                let mut sum = 0.0;
                for n in k..(k + 400) {
                    let t = term(n)?;
                    sum += t;
                    if t < 1e-14 * sum {
                        break;
                    }
                }
                let rhs = term(k)?;
                points.push(RatioPoint::new(k as f64, sum, rhs));
            }
            per_lemma.push(LemmaRatios::new("geometric-tail-sum", points));
        }

        // Head sums: sum_{n=1..k} 2^(-qn) v_{2^(n+1)}^(-q) <= C 2^(-qk) v_{2^(k+1)}^(-q).
        {
            let term = |n: i32| -> Result<f64> {
                let ln = -q * n as f64 * std::f64::consts::LN_2
                    - q * self.moment_ln(2f64.powi(n + 1))?;
                Ok(ln.exp())
            };
            let mut points = Vec::new();
            for k in 1..=kmax as i32 {
                let mut sum = 0.0;
                for n in 1..=k {
                    sum += term(n)?;
                }
                let rhs = term(k)?;
                points.push(RatioPoint::new(k as f64, sum, rhs));
            }
            per_lemma.push(LemmaRatios::new("geometric-head-sum", points));
        }

        // M4 dominated by M2 (one aggregate point).
        {
            let report = self.condition_report(HYPOTHESIS_DEPTH)?;
            if report.m2.verdict == Finiteness::Finite && report.m4.verdict == Finiteness::Finite {
                let points = vec![RatioPoint::new(
                    HYPOTHESIS_DEPTH as f64,
                    report.m4.value,
                    report.m2.value,
                )];
                per_lemma.push(LemmaRatios::new("m4-vs-m2", points));
            }
        }

        Ok(LemmaReport { per_lemma })
    }
}

fn sq(x: f64) -> f64 {
    x * x
}

fn probe_quiet<F: Fn(f64) -> f64>(f: F, depth: usize) -> DivergenceVerdict {
    divergence_probe(f, ProbeSide::Toward1, depth.max(10))
        .unwrap_or(DivergenceVerdict::Indeterminate { trail: vec![] })
}

fn quadrature_tail<F: Fn(f64) -> f64>(density: F, r: f64) -> f64 {
    integrate(density, r, 1.0, &IntegrationSpec::singular_at_1())
        .map(|q| q.value)
        .unwrap_or(f64::NAN)
}

fn tabulated_tail(knots: &[(f64, f64)], r: f64) -> f64 {
    // Piecewise-linear density integrated exactly, with constant extension
    // beyond the first/last knot.
    let mut total = 0.0;
    let last = knots.len() - 1;
    total += knots[last].1 * (1.0 - knots[last].0.max(r));
    for i in 0..last {
        let (s0, v0) = knots[i];
        let (s1, v1) = knots[i + 1];
        if s1 <= r {
            continue;
        }
        let lo = s0.max(r);
        let w0 = v0 + (v1 - v0) * (lo - s0) / (s1 - s0);
        total += 0.5 * (w0 + v1) * (s1 - lo);
    }
    if r < knots[0].0 {
        total += knots[0].1 * (knots[0].0 - r);
    }
    total
}

fn tabulated_moment(knots: &[(f64, f64)], x: f64) -> f64 {
    // int s^x (a + b s) ds = a s^(x+1)/(x+1) + b s^(x+2)/(x+2) per piece.
    let piece = |a: f64, b: f64, s0: f64, s1: f64| -> f64 {
        a * (s1.powf(x + 1.0) - s0.powf(x + 1.0)) / (x + 1.0)
            + b * (s1.powf(x + 2.0) - s0.powf(x + 2.0)) / (x + 2.0)
    };
    let mut total = 0.0;
    total += piece(knots[0].1, 0.0, 0.0, knots[0].0);
    for w in knots.windows(2) {
        let (s0, v0) = w[0];
        let (s1, v1) = w[1];
        let b = (v1 - v0) / (s1 - s0);
        let a = v0 - b * s0;
        total += piece(a, b, s0, s1);
    }
    let (sl, vl) = knots[knots.len() - 1];
    total += piece(vl, 0.0, sl, 1.0);
    total
}

/// Finiteness verdict of a condition evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Finiteness {
    Finite,
    Infinite,
    Indeterminate,
}

impl fmt::Display for Finiteness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finiteness::Finite => f.write_str("finite"),
            Finiteness::Infinite => f.write_str("infinite"),
            Finiteness::Indeterminate => f.write_str("indeterminate"),
        }
    }
}

/// One Muckenhoupt-type condition: verdict, sup value (after the square
/// root) and the grid trail of factor products.
#[derive(Debug, Clone)]
pub struct ConditionVerdict {
    pub verdict: Finiteness,
    pub value: f64,
    pub trail: Vec<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct DoublingReport {
    pub verdict: bool,
    pub sup_ratio: f64,
    /// Exponent from the log-log regression of the tail along the grid;
    /// sizes the singular exponent of the extremal family f_N.
    pub beta_estimate: f64,
    pub beta_residual: f64,
    pub trail: Vec<f64>,
}

/// Finiteness verdicts and values for the doubling condition, M1-M4 and the
/// well-definedness integral.
#[derive(Debug, Clone)]
pub struct ConditionReport {
    pub doubling: DoublingReport,
    pub m1: ConditionVerdict,
    pub m2: ConditionVerdict,
    pub m3: ConditionVerdict,
    pub m4: ConditionVerdict,
    /// Finiteness probe of int_0^1 (1-s)^2 / v̂(s) ds.
    pub welldef: DivergenceVerdict,
    pub grid_depth: usize,
}

/// Cached hypothesis gate consumed by operator assembly.
#[derive(Debug, Clone)]
pub struct HypothesisSummary {
    pub doubling: bool,
    pub m1: Finiteness,
    pub m2: Finiteness,
    pub welldef: Finiteness,
    pub m1_value: f64,
    pub m2_value: f64,
}

type FactorFn = fn(&RadialWeight, f64) -> Result<f64>;

struct MuckenhouptFactors {
    first: FactorFn,
    second: FactorFn,
}

fn int_spec() -> IntegrationSpec {
    IntegrationSpec {
        rel_tol: 1e-9,
        abs_tol: 1e-13,
        max_panels: 600,
        singular_at_0: false,
        singular_at_1: true,
    }
}

fn integral(
    w: &RadialWeight,
    lo: f64,
    hi: f64,
    f: impl Fn(&RadialWeight, f64) -> f64,
) -> Result<f64> {
    match integrate(|s| f(w, s), lo, hi, &int_spec()) {
        Ok(q) => Ok(q.value),
        Err(Error::AccuracyNotReached { best, .. }) => Ok(best),
        Err(e) => Err(e),
    }
}

const M1_FACTORS: MuckenhouptFactors = MuckenhouptFactors {
    first: |w, r| integral(w, r, 1.0, |w, s| w.tail_unchecked(s) / sq(1.0 - s)),
    second: |w, r| integral(w, 0.0, r, |w, s| 1.0 / w.tail_unchecked(s)),
};

const M2_FACTORS: MuckenhouptFactors = MuckenhouptFactors {
    first: |w, r| {
        integral(w, 0.0, r, |w, s| {
            w.tail_unchecked(s) / (sq(1.0 - s) * sq(1.0 - s))
        })
    },
    second: |w, r| integral(w, r, 1.0, |w, s| sq(1.0 - s) / w.tail_unchecked(s)),
};

const M3_FACTORS: MuckenhouptFactors = MuckenhouptFactors {
    first: |w, r| w.tail(r),
    second: |w, r| integral(w, 0.0, r, |w, s| 1.0 / ((1.0 - s) * w.tail_unchecked(s))),
};

const M4_FACTORS: MuckenhouptFactors = MuckenhouptFactors {
    first: |w, r| {
        integral(w, 0.0, r, |w, s| {
            w.density(s) / ((1.0 - s) * sq(1.0 - s))
        })
    },
    second: |w, r| integral(w, r, 1.0, |w, s| sq(1.0 - s) / w.tail_unchecked(s)),
};

/// Ratio of a left-hand side against a right-hand side in a two-sided
/// comparison.
#[derive(Debug, Clone, Copy)]
pub struct RatioPoint {
    pub param: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

impl RatioPoint {
    fn new(param: f64, lhs: f64, rhs: f64) -> Self {
        RatioPoint {
            param,
            lhs,
            rhs,
            ratio: lhs / rhs,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LemmaRatios {
    pub name: String,
    pub points: Vec<RatioPoint>,
    pub min_ratio: f64,
    pub max_ratio: f64,
}

impl LemmaRatios {
    fn new(name: &str, points: Vec<RatioPoint>) -> Self {
        let min = points.iter().map(|p| p.ratio).fold(f64::INFINITY, f64::min);
        let max = points
            .iter()
            .map(|p| p.ratio)
            .fold(f64::NEG_INFINITY, f64::max);
        LemmaRatios {
            name: name.into(),
            points,
            min_ratio: min,
            max_ratio: max,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LemmaReport {
    pub per_lemma: Vec<LemmaRatios>,
}

impl LemmaReport {
    pub fn get(&self, name: &str) -> Option<&LemmaRatios> {
        self.per_lemma.iter().find(|l| l.name == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn standard_tail_closed_forms() {
        let w = RadialWeight::standard(1.0).unwrap();
        assert_relative_eq!(w.tail(0.5).unwrap(), 0.125, epsilon = 1e-14);
        let w0 = RadialWeight::standard(0.0).unwrap();
        assert_relative_eq!(w0.tail(0.25).unwrap(), 0.75, epsilon = 1e-14);
    }

    #[test]
    fn exponential_tail_at_zero() {
        // Same oracle as the quadrature example: int_0^1 exp(-1/(1-s)) ds.
        let w = RadialWeight::exponential(1.0, 1.0).unwrap();
        assert_relative_eq!(w.tail(0.0).unwrap(), 0.148_495_506_775_921_8, epsilon = 1e-9);
    }

    #[test]
    fn standard_moments() {
        let w = RadialWeight::standard(1.0).unwrap();
        assert_relative_eq!(w.moment(3.0).unwrap(), 0.05, epsilon = 1e-13);
        assert_relative_eq!(w.moment(1.0).unwrap(), 1.0 / 6.0, epsilon = 1e-13);
        let wh = RadialWeight::standard(0.5).unwrap();
        assert_relative_eq!(wh.moment(0.0).unwrap(), 2.0 / 3.0, epsilon = 1e-13);
    }

    #[test]
    fn tail_at_zero_equals_zeroth_moment() {
        let table = (0..=20)
            .map(|i| {
                let s = i as f64 / 20.0 * 0.95;
                (s, 1.0 + 0.5 * (3.0 * s).sin().abs())
            })
            .collect::<Vec<_>>();
        let weights = vec![
            RadialWeight::standard(0.7).unwrap(),
            RadialWeight::bergman_lift(RadialWeight::standard(-0.5).unwrap()),
            RadialWeight::exponential(1.0, 1.0).unwrap(),
            RadialWeight::tabulated(table, "table:test").unwrap(),
        ];
        for w in weights {
            let t0 = w.tail(0.0).unwrap();
            let m0 = w.moment(0.0).unwrap();
            assert_relative_eq!(t0, m0, max_relative = 1e-8);
        }
    }

    #[test]
    fn tail_strictly_decreasing_on_grid() {
        for w in [
            RadialWeight::standard(0.5).unwrap(),
            RadialWeight::standard(1.75).unwrap(),
        ] {
            let mut prev = f64::INFINITY;
            for k in 1..=30 {
                let t = w.tail(1.0 - 0.5f64.powi(k)).unwrap();
                assert!(t < prev, "tail not strictly decreasing at k={k}");
                prev = t;
            }
        }
    }

    #[test]
    fn moment_monotone_and_doubling_ratio_bounded() {
        // v_n <= C v_2n with C near 2^(alpha+1) for standard weights.
        for alpha in [0.25, 1.0, 1.75] {
            let w = RadialWeight::standard(alpha).unwrap();
            let cap = 2f64.powf(alpha + 1.0) + 0.5;
            let mut n = 1u64;
            let mut prev = w.moment(1.0).unwrap();
            while n <= 2048 {
                let m2n = w.moment(2.0 * n as f64).unwrap();
                assert!(m2n <= prev, "moment not decreasing at n={n}");
                assert!(prev / m2n <= cap, "ratio {} exceeds {cap}", prev / m2n);
                n *= 2;
                prev = m2n;
            }
        }
    }

    #[test]
    fn bergman_lift_of_standard_tail_closed_form() {
        // v = (1-s) * (1-s)^alpha has tail (1-r)^(alpha+2) / (alpha+2).
        for alpha in [-0.5, 0.5, 1.0] {
            let w = RadialWeight::bergman_lift(RadialWeight::standard(alpha).unwrap());
            for k in 1..=20 {
                let r = 1.0 - 0.5f64.powi(k);
                let expected = (1.0 - r).powf(alpha + 2.0) / (alpha + 2.0);
                let ratio = w.tail(r).unwrap() / expected;
                assert!((0.9..=1.1).contains(&ratio), "ratio {ratio} at r={r}");
                assert_relative_eq!(ratio, 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn exponential_fails_doubling() {
        let w = RadialWeight::exponential(1.0, 1.0).unwrap();
        let report = w.condition_report(16).unwrap();
        assert!(!report.doubling.verdict);
        // Ratio trail must exceed 1e3 by k = 12.
        assert!(report.doubling.trail[11] > 1e3);
    }

    #[test]
    fn condition_report_alpha_one() {
        // Closed forms: doubling ratio exactly 2^(alpha+1) = 4, and both
        // condition products reduce to r, so M1 = M2 = 1 in the limit.
        let w = RadialWeight::standard(1.0).unwrap();
        let report = w.condition_report(24).unwrap();
        assert!(report.doubling.verdict);
        assert_relative_eq!(report.doubling.sup_ratio, 4.0, epsilon = 1e-9);
        assert_relative_eq!(report.doubling.beta_estimate, 2.0, epsilon = 1e-9);
        assert_eq!(report.m1.verdict, Finiteness::Finite);
        assert_eq!(report.m2.verdict, Finiteness::Finite);
        assert!((report.m1.value - 1.0).abs() < 0.01, "M1 = {}", report.m1.value);
        assert!((report.m2.value - 1.0).abs() < 0.01, "M2 = {}", report.m2.value);
        assert!(report.welldef.is_finite());
        assert_eq!(report.m3.verdict, Finiteness::Finite);
        assert_eq!(report.m4.verdict, Finiteness::Finite);
    }

    #[test]
    fn m1_infinite_at_alpha_zero() {
        let w = RadialWeight::standard(0.0).unwrap();
        let report = w.condition_report(20).unwrap();
        assert_eq!(report.m1.verdict, Finiteness::Infinite);
        assert_eq!(report.m2.verdict, Finiteness::Finite);
    }

    #[test]
    fn m2_infinite_at_alpha_two() {
        let w = RadialWeight::standard(2.0).unwrap();
        let report = w.condition_report(20).unwrap();
        assert_eq!(report.m2.verdict, Finiteness::Infinite);
        assert_eq!(report.m1.verdict, Finiteness::Finite);
        // M2 infinite comes with a divergent well-definedness integral here.
        assert!(!report.welldef.is_finite());
    }

    #[test]
    fn lemma_checks_standard_alpha_one() {
        // Exact ratio for moment-vs-tail at alpha = 1:
        // v_x / v̂(1-1/x) = 2x^2 / ((x+1)(x+2)), bounded in [0.5, 2.5].
        let w = RadialWeight::standard(1.0).unwrap();
        let report = w.lemma_checks(1.0, 10, 128.0).unwrap();

        let vi = report.get("moment-vs-tail").unwrap();
        for x in [2.0f64, 8.0, 32.0, 128.0] {
            let computed = w.moment(x).unwrap() / w.tail(1.0 - 1.0 / x).unwrap();
            let exact = 2.0 * x * x / ((x + 1.0) * (x + 2.0));
            assert_relative_eq!(computed, exact, max_relative = 1e-10);
            assert!((0.5..=2.5).contains(&computed));
        }
        // Over the whole sweep from x = 1 the exact ratio spans [1/3, 2).
        assert!(vi.min_ratio >= 1.0 / 3.0 - 1e-9 && vi.max_ratio <= 2.5, "{vi:?}");

        // Tail-sum ratio bounded by 4 (oracle: direct summation to n = 60
        // with the exact moments v_x = 1/((x+1)(x+2)) of alpha = 1).
        let tech = report.get("geometric-tail-sum").unwrap();
        let oracle = |k: i32| -> f64 {
            let term = |n: i32| {
                let x = 2f64.powi(n + 1);
                0.125f64.powi(n) * (x + 1.0) * (x + 2.0)
            };
            let mut sum = 0.0;
            for n in k..=60 {
                sum += term(n);
            }
            sum / term(k)
        };
        for (i, p) in tech.points.iter().enumerate() {
            let k = (i + 1) as i32;
            assert_relative_eq!(p.ratio, oracle(k), max_relative = 1e-6);
            assert!(p.ratio <= 4.0, "tail-sum ratio {} at k={k}", p.ratio);
        }

        // Log-kernel comparison at r = 0.75 within [0.3, 3].
        let star = report.get("log-kernel-vs-tail").unwrap();
        let p = star
            .points
            .iter()
            .find(|p| (p.param - 0.75).abs() < 1e-12)
            .unwrap();
        assert!((0.3..=3.0).contains(&p.ratio), "ratio {}", p.ratio);

        let head = report.get("geometric-head-sum").unwrap();
        assert!(head.max_ratio.is_finite() && head.max_ratio < 10.0);
        let m4 = report.get("m4-vs-m2").unwrap();
        assert!(m4.points[0].ratio.is_finite());
    }

    #[test]
    fn lemma_checks_refuse_non_doubling() {
        let w = RadialWeight::exponential(1.0, 1.0).unwrap();
        match w.lemma_checks(1.0, 8, 64.0) {
            Err(Error::HypothesisNotMet { condition, .. }) => {
                assert_eq!(condition, "doubling");
            }
            other => panic!("expected hypothesis refusal, got {other:?}"),
        }
    }

    #[test]
    fn tabulated_matches_sampled_standard() {
        let knots: Vec<(f64, f64)> = (0..400)
            .map(|i| {
                let s = i as f64 / 400.0;
                (s, 1.0 - s)
            })
            .collect();
        let w = RadialWeight::tabulated(knots, "table:lin").unwrap();
        let exact = RadialWeight::standard(1.0).unwrap();
        for r in [0.0, 0.3, 0.9] {
            assert_relative_eq!(
                w.tail(r).unwrap(),
                exact.tail(r).unwrap(),
                max_relative = 2e-2
            );
        }
        assert_relative_eq!(
            w.moment(3.0).unwrap(),
            exact.moment(3.0).unwrap(),
            max_relative = 2e-2
        );
    }

    #[test]
    fn tabulated_validation() {
        assert!(RadialWeight::tabulated(vec![(0.0, 1.0)], "t").is_err());
        assert!(RadialWeight::tabulated(vec![(0.2, 1.0), (0.1, 1.0)], "t").is_err());
        assert!(RadialWeight::tabulated(vec![(0.0, 1.0), (0.5, -1.0)], "t").is_err());
        assert!(RadialWeight::tabulated(vec![(0.0, 1.0), (1.0, 1.0)], "t").is_err());
    }

    #[test]
    fn moment_underflow_double_vs_extended() {
        let w = RadialWeight::exponential(1.0, 1.0).unwrap();
        // Moderate x: log route agrees with the plain value.
        let plain = w.moment(100.0).unwrap();
        let logged = w.moment_ln(100.0).unwrap().exp();
        assert_relative_eq!(plain, logged, max_relative = 1e-8);

        // Huge x: double mode refuses with the log value attached.
        match w.moment(4.0e5) {
            Err(Error::Underflow { log_value }) => {
                assert!(log_value < -700.0);
            }
            other => panic!("expected underflow, got {other:?}"),
        }
        let ext = w.clone().with_precision(Precision::Extended);
        assert_eq!(ext.moment(4.0e5).unwrap(), 0.0);
        assert!(ext.moment_ln(4.0e5).unwrap() < -700.0);
    }

    #[test]
    fn moment_ln_log_convex_in_x() {
        // Moments of a positive measure are log-convex in x.
        let w = RadialWeight::exponential(1.0, 1.0).unwrap();
        let xs = [1.0f64, 10.0, 100.0, 1000.0, 10000.0];
        for win in xs.windows(3) {
            let (a, b, c) = (win[0], win[1], win[2]);
            let la = w.moment_ln(a).unwrap();
            let lb = w.moment_ln(b).unwrap();
            let lc = w.moment_ln(c).unwrap();
            let t = (b - a) / (c - a);
            assert!(lb <= (1.0 - t) * la + t * lc + 1e-6);
        }
    }

    #[test]
    fn parse_round_trips() {
        for spec in ["std:1", "std:-0.5", "bergman:std:0.5", "exp:1:1"] {
            let w = RadialWeight::parse(spec).unwrap();
            assert_eq!(w.id(), spec);
        }
        assert!(RadialWeight::parse("foo:1").is_err());
        assert!(RadialWeight::parse("std:x").is_err());
    }

    #[test]
    fn parse_table_file() {
        let dir = std::env::temp_dir().join("hilbert-dirichlet-weights-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("w.tsv");
        let mut text = String::from("# s v(s)\n");
        for i in 0..50 {
            let s = i as f64 / 50.0;
            text.push_str(&format!("{s} {}\n", 1.0 - s * 0.5));
        }
        std::fs::write(&path, text).unwrap();
        let spec = format!("table:{}", path.display());
        let w = RadialWeight::parse(&spec).unwrap();
        assert_eq!(w.id(), spec);
        assert_relative_eq!(w.tail(0.0).unwrap(), 0.75, max_relative = 1e-3);
        assert!(w.tail(0.5).unwrap() > 0.0);

        std::fs::write(&path, "0.0 1.0\n0.5 nope\n").unwrap();
        assert!(RadialWeight::parse(&spec).is_err());
        assert!(RadialWeight::parse("table:/no/such/file").is_err());
    }

    #[test]
    fn radius_validation() {
        let w = RadialWeight::standard(1.0).unwrap();
        assert!(w.tail(1.0).is_err());
        assert!(w.tail(-0.1).is_err());
        assert!(w.moment(-1.0).is_err());
    }
}
