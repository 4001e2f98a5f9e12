//! Analytic symbols g given by Maclaurin coefficient rules, their dyadic
//! block profiles, and the mixed-norm sizes B(2, p).
//!
//! Throughout, `ĝ(k)` are the Maclaurin coefficients of g and
//! `g̃_k = k^2 |ĝ(k)|^2`. The dyadic blocks `I(n) = [2^n, 2^(n+1))`
//! partition the positive integers, and
//!
//! ```text
//! B_n = 2^-n * sum_{k in I(n)} g̃_k
//! ```
//!
//! is the block profile. `||g - g(0)||_{B(2,p)}` is computed two ways:
//! from the blocks as `(sum_n B_n^(p/2))^(1/p)` (sup for p = infinity)
//! and from the integral means as
//! `(int_0^1 M_2^p(r, g') (1-r)^(p/2-1) dr)^(1/p)`, where
//! `M_2^2(r, g') = sum_m (m+1)^2 ĝ(m+1)^2 r^(2m)`. The two routes agree up
//! to a fixed constant per symbol family, which is exactly what the
//! operator-norm equivalences need.
//!
//! The symbol `g(z) = log 1/(1-z)` (coefficients `ĝ(k) = 1/k`) induces the
//! classical Hilbert operator; its block profile is identically 1, the
//! boundary case of the boundedness class.

use std::fmt;

use crate::error::{Error, Result};
use crate::quadrature::{
    classify_trail, divergence_probe, grid_sup, DivergenceVerdict, ProbeSide, TrailClass,
};

#[derive(Debug, Clone)]
enum SymbolKind {
    /// ĝ(k) = 1/k for k >= 1, ĝ(0) = 0: g(z) = log 1/(1-z).
    Log,
    /// g with g'(z) = (1-z)^-b: derivative coefficients c_0 = 1,
    /// c_m = c_{m-1} (m-1+b)/m, so ĝ(k) = c_{k-1}/k, ĝ(0) = 0.
    Power { b: f64 },
    /// Finite Maclaurin coefficients, ĝ(k) = coeffs[k].
    Polynomial { coeffs: Vec<f64> },
    /// ĝ(k) = a_n / k for k in I(n), with a_n = (n+1)^-theta.
    BlockWeighted { theta: f64 },
}

/// An analytic symbol with an eagerly cached coefficient prefix.
/// Immutable after construction; all operations are pure.
#[derive(Debug, Clone)]
pub struct Symbol {
    kind: SymbolKind,
    prefix: Vec<f64>,
}

const DEFAULT_PREFIX: usize = 4096;

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl Symbol {
    pub fn log() -> Self {
        Self::finish(SymbolKind::Log)
    }

    /// Symbol with derivative (1-z)^-b, b in (1/2, 1).
    pub fn power(b: f64) -> Result<Self> {
        if !(b > 0.5 && b < 1.0) {
            return Err(Error::InvalidInput(format!(
                "power symbol needs b in (1/2, 1), got {b}"
            )));
        }
        Ok(Self::finish(SymbolKind::Power { b }))
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(
                "polynomial symbol coefficients must be finite".into(),
            ));
        }
        Ok(Self::finish(SymbolKind::Polynomial { coeffs }))
    }

    pub fn block_weighted(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::InvalidInput(
                "block weight theta must be finite".into(),
            ));
        }
        Ok(Self::finish(SymbolKind::BlockWeighted { theta }))
    }

    fn finish(kind: SymbolKind) -> Self {
        let mut s = Symbol {
            kind,
            prefix: Vec::new(),
        };
        s.prefix = s.coeff_range(DEFAULT_PREFIX);
        s
    }

    /// Symbol specification in the CLI mini-language:
    /// `log`, `pow:<b>`, `poly:<c0,c1,...>`, `blockw:<theta>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec == "log" {
            return Ok(Self::log());
        }
        if let Some(rest) = spec.strip_prefix("pow:") {
            let b: f64 = rest
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad b in symbol spec '{spec}'")))?;
            return Self::power(b);
        }
        if let Some(rest) = spec.strip_prefix("poly:") {
            let coeffs: Vec<f64> = rest
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| {
                    Error::InvalidInput(format!("bad coefficient in symbol spec '{spec}'"))
                })?;
            return Self::polynomial(coeffs);
        }
        if let Some(rest) = spec.strip_prefix("blockw:") {
            let theta: f64 = rest
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad theta in symbol spec '{spec}'")))?;
            return Self::block_weighted(theta);
        }
        Err(Error::InvalidInput(format!(
            "unknown symbol spec '{spec}' (expected log, pow:<b>, poly:<c0,c1,...>, blockw:<theta>)"
        )))
    }

    pub fn id(&self) -> String {
        match &self.kind {
            SymbolKind::Log => "log".into(),
            SymbolKind::Power { b } => format!("pow:{b}"),
            SymbolKind::Polynomial { coeffs } => {
                let parts: Vec<String> = coeffs.iter().map(|c| format!("{c}")).collect();
                format!("poly:{}", parts.join(","))
            }
            SymbolKind::BlockWeighted { theta } => format!("blockw:{theta}"),
        }
    }

    /// Maclaurin coefficient ĝ(k).
    pub fn coeff(&self, k: usize) -> f64 {
        if k < self.prefix.len() {
            return self.prefix[k];
        }
        match &self.kind {
            SymbolKind::Log => 1.0 / k as f64,
            SymbolKind::Power { b } => {
                // Recurrence from scratch; bulk callers use coeff_range.
                let mut c = 1.0f64;
                for m in 1..k {
                    c *= (m as f64 - 1.0 + b) / m as f64;
                }
                c / k as f64
            }
            SymbolKind::Polynomial { .. } => 0.0,
            SymbolKind::BlockWeighted { theta } => {
                let n = k.ilog2() as f64;
                (n + 1.0).powf(-theta) / k as f64
            }
        }
    }

    /// ĝ(0..max), in one pass.
    pub fn coeff_range(&self, max: usize) -> Vec<f64> {
        let mut out = vec![0.0; max];
        match &self.kind {
            SymbolKind::Log => {
                for (k, o) in out.iter_mut().enumerate().skip(1) {
                    *o = 1.0 / k as f64;
                }
            }
            SymbolKind::Power { b } => {
                // c_m = c_{m-1} (m-1+b)/m; ĝ(k) = c_{k-1}/k.
                let mut c = 1.0f64;
                for k in 1..max {
                    out[k] = c / k as f64;
                    c *= (k as f64 - 1.0 + b) / k as f64;
                }
            }
            SymbolKind::Polynomial { coeffs } => {
                let upto = coeffs.len().min(max);
                out[..upto].copy_from_slice(&coeffs[..upto]);
            }
            SymbolKind::BlockWeighted { theta } => {
                for (k, o) in out.iter_mut().enumerate().skip(1) {
                    let n = k.ilog2() as f64;
                    *o = (n + 1.0).powf(-theta) / k as f64;
                }
            }
        }
        out
    }

    /// g̃_k = k^2 ĝ(k)^2.
    pub fn gtilde(&self, k: usize) -> f64 {
        let c = self.coeff(k) * k as f64;
        c * c
    }

    /// Derivative coefficients (m+1) ĝ(m+1) for m in 0..max, i.e. the
    /// Maclaurin coefficients of g'.
    pub fn derivative_coeffs(&self, max: usize) -> Vec<f64> {
        let g = self.coeff_range(max + 1);
        (0..max).map(|m| (m as f64 + 1.0) * g[m + 1]).collect()
    }

    /// Dyadic block profile B_n = 2^-n sum_{k in I(n)} g̃_k for n = 0..=n_max.
    pub fn block_profile(&self, n_max: usize) -> Result<BlockProfile> {
        if n_max < 1 {
            return Err(Error::InvalidInput("block profile needs n_max >= 1".into()));
        }
        if n_max > 24 {
            return Err(Error::Resource(format!(
                "block profile to n_max = {n_max} needs 2^{} coefficients",
                n_max + 1
            )));
        }
        let top = 1usize << (n_max + 1);
        let g = self.coeff_range(top);
        let mut values = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let lo = 1usize << n;
            let hi = 1usize << (n + 1);
            let mut sum = 0.0;
            for (k, gk) in g.iter().enumerate().take(hi).skip(lo) {
                let t = gk * k as f64;
                sum += t * t;
            }
            values.push(sum / (1u64 << n) as f64);
        }
        Ok(BlockProfile { values })
    }

    /// ||g - g(0)||_{B(2,p)} by the requested method. The constant term is
    /// excluded throughout; it does not enter the operator.
    pub fn bnorm(&self, p: f64, method: &BnormMethod) -> Result<BnormOutcome> {
        if !(p > 0.0) {
            return Err(Error::InvalidInput(format!(
                "B(2,p) norm needs p > 0, got {p}"
            )));
        }
        match method {
            BnormMethod::Blocks { n_max } => self.bnorm_blocks(p, *n_max),
            BnormMethod::Integral { depth } => self.bnorm_integral(p, *depth),
        }
    }

    fn bnorm_blocks(&self, p: f64, n_max: usize) -> Result<BnormOutcome> {
        let profile = self.block_profile(n_max)?;
        if p.is_infinite() {
            let sup = profile.values.iter().cloned().fold(0.0, f64::max);
            return match classify_trail(&profile.values) {
                TrailClass::Growing { .. } => Ok(BnormOutcome::Diverging {
                    partials: profile.values.clone(),
                    note: "block profile grows without bound".into(),
                }),
                _ => Ok(BnormOutcome::Finite {
                    value: sup.sqrt(),
                    partial: sup.sqrt(),
                    tail_estimate: 0.0,
                }),
            };
        }

        let increments: Vec<f64> = profile.values.iter().map(|b| b.powf(p / 2.0)).collect();
        let mut partials = Vec::with_capacity(increments.len());
        let mut acc = 0.0;
        for d in &increments {
            acc += d;
            partials.push(acc);
        }
        let total = acc;

        // Trailing zeros (polynomial symbols): the sum is exact.
        if increments[increments.len() / 2..].iter().all(|d| *d == 0.0) {
            return Ok(BnormOutcome::Finite {
                value: total.powf(1.0 / p),
                partial: total.powf(1.0 / p),
                tail_estimate: 0.0,
            });
        }

        // Fit both decay models on the tail window and keep the better one:
        // geometric (log2 d linear in n) or power-law (linear in log2 n).
        // The geometric case converges for any negative rate; the power-law
        // case sits against the harmonic boundary at slope -1.
        let m = increments.len();
        let window = &increments[m / 2..];
        let offset = m / 2;
        let geo = fit_line(window, |i| (offset + i) as f64);
        let pow = fit_line(window, |i| ((offset + i + 1) as f64).log2());
        let d_last = increments[m - 1];
        let n_last = (m - 1) as f64;

        let tail = if geo.sse <= pow.sse {
            if geo.slope <= -0.05 {
                let rho = 2.0f64.powf(geo.slope).min(0.95);
                Some(d_last * rho / (1.0 - rho))
            } else if geo.slope >= 0.05 {
                None
            } else {
                // Flat in n is also flat against log2 n: divergent.
                None
            }
        } else if pow.slope <= -1.1 {
            // p-series tail: sum_{n > N} (n+1)^s ~ d_N (N+1) / (-s-1).
            Some(d_last * (n_last + 1.0) / (-pow.slope - 1.0))
        } else {
            None
        };

        match tail {
            Some(tail) => Ok(BnormOutcome::Finite {
                value: (total + tail).powf(1.0 / p),
                partial: total.powf(1.0 / p),
                tail_estimate: tail,
            }),
            None => {
                let (slope, axis) = if geo.sse <= pow.sse {
                    (geo.slope, "n")
                } else {
                    (pow.slope, "log2 n")
                };
                if axis == "log2 n" && slope > -0.9 || axis == "n" {
                    Ok(BnormOutcome::Diverging {
                        partials,
                        note: format!(
                            "block partial sums grow (slope {slope:.3} against {axis})"
                        ),
                    })
                } else {
                    Ok(BnormOutcome::Indeterminate { partials })
                }
            }
        }
    }

    fn bnorm_integral(&self, p: f64, depth: usize) -> Result<BnormOutcome> {
        let depth = depth.clamp(10, 18);
        // M_2^2(r, g') = sum_m c_m^2 r^(2m) with c_m = (m+1) ĝ(m+1); the
        // series needs ~40/(1-r) terms at the deepest grid point.
        let m_cap = (48usize << (depth + 2)).min(1 << 26);
        let c = self.derivative_coeffs(m_cap);
        let c2: Vec<f64> = c.iter().map(|x| x * x).collect();
        let m2_sq = move |r: f64| -> f64 {
            let rr = r * r;
            let mut pow = 1.0f64;
            let mut acc = 0.0f64;
            for v in &c2 {
                acc += v * pow;
                pow *= rr;
                if pow < 1e-18 {
                    break;
                }
            }
            acc
        };

        if p.is_infinite() {
            // sup_r M_2(r, g')(1-r)^(1/2) on the geometric grid.
            let s = grid_sup(|r| m2_sq(r).sqrt() * (1.0 - r).sqrt(), depth.min(14))?;
            let vals: Vec<f64> = s.trail.iter().map(|t| t.1).collect();
            return match classify_trail(&vals) {
                TrailClass::Growing { .. } => Ok(BnormOutcome::Diverging {
                    partials: vals,
                    note: "integral means grow without bound".into(),
                }),
                _ => Ok(BnormOutcome::Finite {
                    value: s.sup,
                    partial: s.sup,
                    tail_estimate: 0.0,
                }),
            };
        }

        let integrand = move |r: f64| m2_sq(r).powf(p / 2.0) * (1.0 - r).powf(p / 2.0 - 1.0);
        match divergence_probe(integrand, ProbeSide::Toward1, depth.min(14))? {
            DivergenceVerdict::Finite { value, .. } => Ok(BnormOutcome::Finite {
                value: value.powf(1.0 / p),
                partial: value.powf(1.0 / p),
                tail_estimate: 0.0,
            }),
            DivergenceVerdict::Diverging { trail, rate } => Ok(BnormOutcome::Diverging {
                partials: trail.iter().map(|t| t.partial).collect(),
                note: format!("integral diverges ({rate:?})"),
            }),
            DivergenceVerdict::Indeterminate { trail } => Ok(BnormOutcome::Indeterminate {
                partials: trail.iter().map(|t| t.partial).collect(),
            }),
        }
    }

    /// Membership in the little-oh class: B_n -> 0, tested by the fitted
    /// log2 slope over the last n_max/2 blocks (slope < -0.1 passes).
    pub fn little_oh_verdict(&self, n_max: usize) -> Result<LittleOhVerdict> {
        if n_max < 10 {
            return Err(Error::InvalidInput(
                "little-oh verdict needs n_max >= 10".into(),
            ));
        }
        let profile = self.block_profile(n_max)?;
        let window = &profile.values[profile.values.len() / 2..];
        if window.iter().all(|b| *b == 0.0) {
            return Ok(LittleOhVerdict {
                member: true,
                trail: profile.values,
            });
        }
        let n = window.len() as f64;
        let mut sx = 0.0;
        let mut sy = 0.0;
        let mut sxx = 0.0;
        let mut sxy = 0.0;
        for (i, b) in window.iter().enumerate() {
            let x = i as f64;
            let y = b.max(1e-300).log2();
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        Ok(LittleOhVerdict {
            member: slope < -0.1,
            trail: profile.values,
        })
    }
}

struct LineFit {
    slope: f64,
    sse: f64,
}

/// Least-squares fit of log2(values) against the given abscissa.
fn fit_line(values: &[f64], x_of: impl Fn(usize) -> f64) -> LineFit {
    let n = values.len() as f64;
    if values.len() < 2 {
        return LineFit {
            slope: f64::NAN,
            sse: f64::INFINITY,
        };
    }
    let mut sx = 0.0;
    let mut sy = 0.0;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (i, d) in values.iter().enumerate() {
        let x = x_of(i);
        let y = d.max(1e-300).log2();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let sse = values
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let r = d.max(1e-300).log2() - slope * x_of(i) - intercept;
            r * r
        })
        .sum();
    LineFit { slope, sse }
}

/// Dyadic block values B_n for n = 0..=n_max.
#[derive(Debug, Clone)]
pub struct BlockProfile {
    pub values: Vec<f64>,
}

/// How to evaluate a B(2,p) norm.
#[derive(Debug, Clone)]
pub enum BnormMethod {
    Blocks { n_max: usize },
    Integral { depth: usize },
}

/// Outcome of a B(2,p) norm evaluation. Non-membership (divergence) is a
/// meaningful outcome, not an error: a symbol outside B(2,p) means the
/// operator is outside S_p.
#[derive(Debug, Clone)]
pub enum BnormOutcome {
    Finite {
        /// Partial plus geometric tail estimate.
        value: f64,
        /// Plain truncated value; nondecreasing in the truncation for p < inf.
        partial: f64,
        tail_estimate: f64,
    },
    Diverging {
        partials: Vec<f64>,
        note: String,
    },
    Indeterminate {
        partials: Vec<f64>,
    },
}

impl BnormOutcome {
    pub fn is_finite(&self) -> bool {
        matches!(self, BnormOutcome::Finite { .. })
    }

    pub fn finite_value(&self) -> Option<f64> {
        match self {
            BnormOutcome::Finite { value, .. } => Some(*value),
            _ => None,
        }
    }

    pub fn partial_value(&self) -> Option<f64> {
        match self {
            BnormOutcome::Finite { partial, .. } => Some(*partial),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LittleOhVerdict {
    pub member: bool,
    pub trail: Vec<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn coefficient_rules() {
        let g = Symbol::log();
        assert_relative_eq!(g.coeff(5), 0.2, epsilon = 1e-15);
        assert_eq!(g.coeff(0), 0.0);

        let p = Symbol::power(0.75).unwrap();
        assert_relative_eq!(p.coeff(1), 1.0, epsilon = 1e-15);

        let z2 = Symbol::polynomial(vec![0.0, 0.0, 1.0]).unwrap();
        assert_eq!(z2.coeff(2), 1.0);
        assert_eq!(z2.coeff(1), 0.0);
        assert_eq!(z2.coeff(7), 0.0);
    }

    #[test]
    fn log_symbol_k_ghat_is_one() {
        let g = Symbol::log();
        for k in 1..2000 {
            assert_relative_eq!(g.coeff(k) * k as f64, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn power_coefficients_positive_decreasing() {
        // c_m > 0 and decreasing for b < 1.
        let g = Symbol::power(0.8).unwrap();
        let c = g.derivative_coeffs(5000);
        for w in c.windows(2) {
            assert!(w[0] > 0.0 && w[1] > 0.0);
            assert!(w[1] <= w[0]);
        }
    }

    #[test]
    fn prefix_matches_direct_rule() {
        let g = Symbol::power(0.6).unwrap();
        let r = g.coeff_range(6000);
        // Beyond the cached prefix the from-scratch recurrence must agree.
        assert_relative_eq!(g.coeff(5500), r[5500], max_relative = 1e-12);
    }

    #[test]
    fn block_profile_log_is_flat() {
        let g = Symbol::log();
        let profile = g.block_profile(14).unwrap();
        for b in &profile.values {
            assert_relative_eq!(*b, 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn block_profile_monomial() {
        let g = Symbol::polynomial(vec![0.0, 1.0]).unwrap(); // g = z
        let profile = g.block_profile(6).unwrap();
        assert_relative_eq!(profile.values[0], 1.0, epsilon = 1e-15);
        for b in &profile.values[1..] {
            assert_eq!(*b, 0.0);
        }
    }

    #[test]
    fn block_profile_power_asymptotics() {
        // B_8 for b = 3/4 within 25% of 2^-4 / Gamma(3/4)^2.
        let g = Symbol::power(0.75).unwrap();
        let profile = g.block_profile(10).unwrap();
        let expected = 0.0625 / (2.0 * libm::lgamma(0.75)).exp();
        let ratio = profile.values[8] / expected;
        assert!((0.75..=1.25).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn bnorm_monomial_is_one_both_methods() {
        let g = Symbol::polynomial(vec![0.0, 1.0]).unwrap();
        let blocks = g
            .bnorm(2.0, &BnormMethod::Blocks { n_max: 10 })
            .unwrap()
            .finite_value()
            .unwrap();
        assert_relative_eq!(blocks, 1.0, epsilon = 1e-12);
        let integral = g
            .bnorm(2.0, &BnormMethod::Integral { depth: 12 })
            .unwrap()
            .finite_value()
            .unwrap();
        assert_relative_eq!(integral, 1.0, max_relative = 1e-8);
    }

    #[test]
    fn bnorm_log_sup_is_one() {
        let g = Symbol::log();
        let v = g
            .bnorm(f64::INFINITY, &BnormMethod::Blocks { n_max: 14 })
            .unwrap()
            .finite_value()
            .unwrap();
        assert_relative_eq!(v, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn bnorm_log_p2_diverges_linearly() {
        let g = Symbol::log();
        match g.bnorm(2.0, &BnormMethod::Blocks { n_max: 14 }).unwrap() {
            BnormOutcome::Diverging { partials, .. } => {
                // Partial sums of B_n^1 = 1 are n+1: exactly linear.
                for (n, s) in partials.iter().enumerate() {
                    assert_relative_eq!(*s, (n + 1) as f64, max_relative = 1e-10);
                }
            }
            other => panic!("expected divergence, got {other:?}"),
        }
        // The integral route agrees on the verdict.
        assert!(!g
            .bnorm(2.0, &BnormMethod::Integral { depth: 12 })
            .unwrap()
            .is_finite());
    }

    #[test]
    fn bnorm_scaling_is_homogeneous() {
        let base = vec![0.0, 1.0, 0.0, -0.5, 0.25];
        let g = Symbol::polynomial(base.clone()).unwrap();
        let scaled = Symbol::polynomial(base.iter().map(|c| 3.5 * c).collect()).unwrap();
        for p in [1.0, 2.0, 4.0, f64::INFINITY] {
            for method in [
                BnormMethod::Blocks { n_max: 10 },
                BnormMethod::Integral { depth: 12 },
            ] {
                let a = g.bnorm(p, &method).unwrap().finite_value().unwrap();
                let b = scaled.bnorm(p, &method).unwrap().finite_value().unwrap();
                assert_relative_eq!(b, 3.5 * a, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn bnorm_blocks_partial_monotone_in_nmax() {
        let g = Symbol::power(0.75).unwrap();
        let mut prev = 0.0;
        for n_max in [4usize, 8, 12, 16] {
            let v = g
                .bnorm(1.0, &BnormMethod::Blocks { n_max })
                .unwrap()
                .partial_value()
                .unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn norm_method_consistency() {
        // Blocks and integral methods agree within a fixed family constant
        // and the ratio is stable as the block range doubles.
        let symbols: Vec<Symbol> = vec![
            Symbol::polynomial(vec![0.0, 1.0]).unwrap(),
            Symbol::polynomial(vec![0.0, 1.0, 0.0, 1.0]).unwrap(),
            Symbol::power(0.6).unwrap(),
            Symbol::power(0.9).unwrap(),
        ];
        for g in &symbols {
            for p in [1.0, 2.0, 4.0, f64::INFINITY] {
                let b1 = g
                    .bnorm(p, &BnormMethod::Blocks { n_max: 8 })
                    .unwrap()
                    .finite_value()
                    .unwrap();
                let b2 = g
                    .bnorm(p, &BnormMethod::Blocks { n_max: 16 })
                    .unwrap()
                    .finite_value()
                    .unwrap();
                let i = g
                    .bnorm(p, &BnormMethod::Integral { depth: 12 })
                    .unwrap()
                    .finite_value()
                    .unwrap();
                let ratio1 = b1 / i;
                let ratio2 = b2 / i;
                assert!(
                    (0.125..=8.0).contains(&ratio2),
                    "{} p={p}: blocks/integral = {ratio2}",
                    g.id()
                );
                assert!(
                    (ratio2 / ratio1 - 1.0).abs() < 0.2,
                    "{} p={p}: ratio drifts {ratio1} -> {ratio2}",
                    g.id()
                );
            }
        }
    }

    #[test]
    fn block_weighted_convergence_dichotomy() {
        // sum (n+1)^(-theta p) converges iff theta * p > 1.
        let cases = [(1.0, 2.0, true), (0.4, 2.0, false), (0.6, 4.0, true)];
        for (theta, p, converges) in cases {
            let g = Symbol::block_weighted(theta).unwrap();
            let out = g.bnorm(p, &BnormMethod::Blocks { n_max: 18 }).unwrap();
            assert_eq!(out.is_finite(), converges, "theta={theta} p={p}: {out:?}");
        }
    }

    #[test]
    fn little_oh_verdicts() {
        assert!(!Symbol::log().little_oh_verdict(14).unwrap().member);
        assert!(Symbol::power(0.75)
            .unwrap()
            .little_oh_verdict(14)
            .unwrap()
            .member);
        assert!(Symbol::polynomial(vec![0.0, 1.0, 2.0])
            .unwrap()
            .little_oh_verdict(12)
            .unwrap()
            .member);
    }

    #[test]
    fn parse_round_trips() {
        for spec in ["log", "pow:0.75", "poly:0,1,2", "blockw:0.6"] {
            let s = Symbol::parse(spec).unwrap();
            assert_eq!(s.id(), spec);
        }
        assert!(Symbol::parse("pow:0.3").is_err());
        assert!(Symbol::parse("pow:1.5").is_err());
        assert!(Symbol::parse("wat").is_err());
    }
}
