//! The Hilbert-space geometry: the D_v inner product on coefficient
//! sequences, the radial space L^2_{V2}, orthonormal bases, the Bergman
//! lift, and Hardy-Littlewood-type inequality checks.
//!
//! On coefficient sequences the D_v inner product is
//!
//! ```text
//! <f, h> = f̂(0) ĥ(0) + 2 sum_{k>=1} k^2 f̂(k) ĥ(k) v_{2k-1},
//! ```
//!
//! so distinct monomials are orthogonal and `||z^n|| = sqrt(2 n^2 v_{2n-1})`.
//! The factor 2 is carried uniformly; every basis element returned here is
//! normalized in this inner product.
//!
//! `V2(t) = v̂(t)/(1-t)^2` defines the radial space `L^2_{V2}`, the natural
//! restriction of D_v to the segment [0, 1); its indicator-scaled elements
//! `phi_r = (1/V2) 1_{[r,1)}` are the probe inputs for operator-norm lower
//! bounds.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::{
    divergence_probe, integrate, DivergenceVerdict, IntegrationSpec, ProbeSide, TrailPoint,
};
use crate::symbols::Symbol;
use crate::weights::{Finiteness, RadialWeight};

/// An analytic function given by finitely many Maclaurin coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientFunction {
    coeffs: Vec<f64>,
}

impl CoefficientFunction {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        CoefficientFunction { coeffs }
    }

    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        CoefficientFunction { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        CoefficientFunction { coeffs: vec![c] }
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation at a real point.
    pub fn eval(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    /// |f(s e^{i theta})| by Horner in real/imaginary parts.
    pub fn eval_modulus(&self, s: f64, theta: f64) -> f64 {
        let (zr, zi) = (s * theta.cos(), s * theta.sin());
        let mut re = 0.0f64;
        let mut im = 0.0f64;
        for c in self.coeffs.iter().rev() {
            let nre = re * zr - im * zi + c;
            let nim = re * zi + im * zr;
            re = nre;
            im = nim;
        }
        (re * re + im * im).sqrt()
    }

    pub fn scale(&self, c: f64) -> Self {
        CoefficientFunction::new(self.coeffs.iter().map(|x| c * x).collect())
    }
}

/// A function on (0, 1): either one of the closed-form probe families or a
/// generic callable.
#[derive(Clone)]
pub enum RadialFunction {
    /// phi_r(t) = (1/V2(t)) 1_{[r,1)}(t).
    PhiR { r: f64, weight: RadialWeight },
    /// amp * (1 - a t)^exponent; the radial restriction of the extremal
    /// family used for operator-norm lower bounds.
    PowerKernel { amp: f64, a: f64, exponent: f64 },
    Callable(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl std::fmt::Debug for RadialFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RadialFunction::PhiR { r, weight } => {
                write!(f, "PhiR {{ r: {r}, weight: {} }}", weight.id())
            }
            RadialFunction::PowerKernel { amp, a, exponent } => {
                write!(f, "PowerKernel {{ amp: {amp}, a: {a}, exponent: {exponent} }}")
            }
            RadialFunction::Callable(_) => f.write_str("Callable(..)"),
        }
    }
}

impl RadialFunction {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            RadialFunction::PhiR { r, weight } => {
                if t < *r || t >= 1.0 {
                    0.0
                } else {
                    let v2 = weight.tail_unchecked(t) / ((1.0 - t) * (1.0 - t));
                    1.0 / v2
                }
            }
            RadialFunction::PowerKernel { amp, a, exponent } => {
                amp * (1.0 - a * t).powf(*exponent)
            }
            RadialFunction::Callable(f) => f(t),
        }
    }
}

/// V2(t) = v̂(t) / (1-t)^2.
pub fn v2(w: &RadialWeight, t: f64) -> f64 {
    w.tail_unchecked(t) / ((1.0 - t) * (1.0 - t))
}

/// The D_v inner product on coefficient sequences:
/// f̂(0)ĥ(0) + 2 sum_k k^2 f̂(k)ĥ(k) v_{2k-1}. Symmetric and positive
/// definite.
pub fn dv_inner(w: &RadialWeight, f: &CoefficientFunction, h: &CoefficientFunction) -> f64 {
    let upto = f.coeffs.len().min(h.coeffs.len());
    let mut acc = f.coeff(0) * h.coeff(0);
    for k in 1..upto {
        let fk = f.coeffs[k];
        let hk = h.coeffs[k];
        if fk == 0.0 || hk == 0.0 {
            continue;
        }
        let kk = k as f64;
        let v = w.moment(2.0 * kk - 1.0).unwrap_or(f64::NAN);
        acc += 2.0 * kk * kk * fk * hk * v;
    }
    acc
}

pub fn dv_norm(w: &RadialWeight, f: &CoefficientFunction) -> f64 {
    dv_inner(w, f, f).max(0.0).sqrt()
}

/// ||z^n||_{D_v} = sqrt(2 n^2 v_{2n-1}), with ||z^0|| = 1.
pub fn monomial_norm(w: &RadialWeight, n: usize) -> Result<f64> {
    if n == 0 {
        return Ok(1.0);
    }
    let nn = n as f64;
    Ok((2.0 * nn * nn * w.moment(2.0 * nn - 1.0)?).sqrt())
}

/// Outcome of a radial-space norm: divergence is an outcome, not a number.
#[derive(Debug, Clone)]
pub enum RadialNorm {
    Finite(f64),
    Diverging { trail: Vec<TrailPoint> },
    Indeterminate,
}

impl RadialNorm {
    pub fn finite_value(&self) -> Option<f64> {
        match self {
            RadialNorm::Finite(v) => Some(*v),
            _ => None,
        }
    }
}

/// ||phi||_{L^2_{V2}} = (int_0^1 phi(t)^2 V2(t) dt)^(1/2), guarded by a
/// divergence probe.
pub fn l2v2_norm(w: &RadialWeight, phi: &RadialFunction) -> Result<RadialNorm> {
    let integrand = |t: f64| {
        let p = phi.eval(t);
        p * p * v2(w, t)
    };
    match divergence_probe(integrand, ProbeSide::Toward1, 24)? {
        DivergenceVerdict::Finite { value, .. } => Ok(RadialNorm::Finite(value.max(0.0).sqrt())),
        DivergenceVerdict::Diverging { trail, .. } => Ok(RadialNorm::Diverging { trail }),
        DivergenceVerdict::Indeterminate { .. } => Ok(RadialNorm::Indeterminate),
    }
}

/// Which orthonormal family to draw from.
#[derive(Debug, Clone)]
pub enum BasisKind<'a> {
    /// e_0 = 1, e_n = z^n / ||z^n||.
    Monomial,
    /// e_n = (sum of z^k over k+1 in I(n)) normalized; e_0 = 1.
    Block,
    /// sigma_n = (sum of (k+1) ĝ(k+1) z^k over k+1 in I(n)) normalized;
    /// the dual family that witnesses Schatten-norm lower bounds.
    Sigma(&'a Symbol),
}

/// Returns the n-th element of the requested orthonormal family; every
/// element satisfies dv_inner(e, e) = 1 to machine accuracy and distinct
/// indices are orthogonal by disjoint coefficient support.
pub fn basis_element(w: &RadialWeight, kind: &BasisKind, n: usize) -> Result<CoefficientFunction> {
    match kind {
        BasisKind::Monomial => {
            let norm = monomial_norm(w, n)?;
            Ok(CoefficientFunction::monomial(n).scale(1.0 / norm))
        }
        BasisKind::Block => {
            if n == 0 {
                return Ok(CoefficientFunction::constant(1.0));
            }
            block_support_element(w, n, |_k| 1.0)
        }
        BasisKind::Sigma(g) => {
            if n == 0 {
                // M_0 block is the single coefficient ĝ(1).
                let g1 = g.coeff(1);
                if g1 == 0.0 {
                    return Err(Error::DegenerateBlock { n });
                }
                return Ok(CoefficientFunction::constant(1.0));
            }
            block_support_element(w, n, |k| (k as f64 + 1.0) * g.coeff(k + 1))
        }
    }
}

/// Builds sum_k c(k) z^k over k+1 in I(n) = [2^n, 2^(n+1)) and normalizes
/// it in D_v.
fn block_support_element(
    w: &RadialWeight,
    n: usize,
    c: impl Fn(usize) -> f64,
) -> Result<CoefficientFunction> {
    if n > 22 {
        return Err(Error::Resource(format!(
            "block basis index {n} needs 2^{} coefficients",
            n + 1
        )));
    }
    let lo = (1usize << n) - 1;
    let hi = (1usize << (n + 1)) - 1;
    let mut coeffs = vec![0.0; hi];
    let mut any = false;
    for (k, slot) in coeffs.iter_mut().enumerate().take(hi).skip(lo) {
        let v = c(k);
        if v != 0.0 {
            any = true;
        }
        *slot = v;
    }
    if !any {
        return Err(Error::DegenerateBlock { n });
    }
    let f = CoefficientFunction::new(coeffs);
    let norm = dv_norm(w, &f);
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::DegenerateBlock { n });
    }
    Ok(f.scale(1.0 / norm))
}

/// Hardy-Littlewood-type inequality measurements for one function.
#[derive(Debug, Clone)]
pub struct HlReport {
    /// int_0^1 |f(t)| dt divided by ||f||_{D_v}.
    pub fejer_ratio: f64,
    /// int_0^1 M_inf^2(s, f) V2(s) ds divided by ||f||^2_{D_v}.
    pub hl_ratio: f64,
}

/// Checks the two Hardy-Littlewood-type inequalities on `f`, refusing when
/// the weight hypotheses (well-definedness integral for the first, finite
/// M1 for the second) do not hold.
pub fn hl_checks(w: &RadialWeight, f: &CoefficientFunction, circle_samples: usize) -> Result<HlReport> {
    let hyp = w.hypotheses();
    if hyp.welldef != Finiteness::Finite {
        return Err(Error::HypothesisNotMet {
            weight: w.id(),
            condition: "well-definedness integral".into(),
            detail: "int (1-s)^2/v̂ must be finite for the segment-integral bound".into(),
        });
    }
    if hyp.m1 != Finiteness::Finite {
        return Err(Error::HypothesisNotMet {
            weight: w.id(),
            condition: "M1".into(),
            detail: "M1 must be finite for the maximal-function bound".into(),
        });
    }
    hl_checks_unchecked(w, f, circle_samples)
}

/// Same measurements without the hypothesis gate; negative controls call
/// this to watch the ratios blow up outside the hypotheses.
pub fn hl_checks_unchecked(
    w: &RadialWeight,
    f: &CoefficientFunction,
    circle_samples: usize,
) -> Result<HlReport> {
    let norm = dv_norm(w, f);
    if !(norm > 0.0) {
        return Err(Error::InvalidInput(
            "Hardy-Littlewood checks need a nonzero function".into(),
        ));
    }

    // int_0^1 |f|: exact moment sum for nonnegative coefficients, else
    // quadrature of |f|.
    let nonneg = f.coeffs().iter().all(|c| *c >= 0.0);
    let int_abs = if nonneg {
        f.coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| c / (k as f64 + 1.0))
            .sum::<f64>()
    } else {
        integrate(|t| f.eval(t).abs(), 0.0, 1.0, &IntegrationSpec::default())?.value
    };

    let m_inf = |s: f64| m_inf_circle(f, s, circle_samples, nonneg);
    let hl_int = integrate(
        |s| {
            let m = m_inf(s);
            m * m * v2(w, s)
        },
        0.0,
        1.0,
        &IntegrationSpec::singular_at_1(),
    )?
    .value;

    Ok(HlReport {
        fejer_ratio: int_abs / norm,
        hl_ratio: hl_int / (norm * norm),
    })
}

/// M_inf(s, f) = max over the circle |z| = s. For nonnegative coefficients
/// the maximum sits at theta = 0; otherwise sample the circle and double
/// the sample count until the estimate moves less than 1e-6 relative.
fn m_inf_circle(f: &CoefficientFunction, s: f64, samples: usize, nonneg: bool) -> f64 {
    if nonneg {
        return f.eval(s);
    }
    let mut n = samples.max(4 * f.degree().max(1)).max(16);
    let mut best = circle_max(f, s, n);
    for _ in 0..6 {
        n *= 2;
        let refined = circle_max(f, s, n);
        let done = (refined - best).abs() <= 1e-6 * refined.abs().max(1e-12);
        best = refined;
        if done {
            break;
        }
    }
    best
}

fn circle_max(f: &CoefficientFunction, s: f64, n: usize) -> f64 {
    let mut best = 0.0f64;
    for i in 0..n {
        let theta = std::f64::consts::PI * (i as f64) / (n as f64); // real coefficients: symmetric
        best = best.max(f.eval_modulus(s, theta));
    }
    best
}

/// Result of lifting a Bergman-space weight to its Dirichlet-type
/// equivalent v(s) = (1-s) omega(s).
#[derive(Debug, Clone)]
pub struct BergmanLiftReport {
    pub lifted: RadialWeight,
    /// Verdict of sup_r (int_0^r omegâ/(1-t)^2)^(1/2) (int_r^1 1/omegâ)^(1/2).
    pub m2cond: Finiteness,
    pub m2cond_value: f64,
    /// (polynomial id, ||f||^2_{A^2_omega} / ||f||^2_{D_v}) over the sample set.
    pub equivalence_samples: Vec<(String, f64)>,
}

/// ||f||^2_{A^2_omega} = sum_k 2 omega_{2k+1} |f̂(k)|^2 (normalized area
/// measure).
pub fn bergman_norm_sq(omega: &RadialWeight, f: &CoefficientFunction) -> Result<f64> {
    let mut acc = 0.0;
    for (k, c) in f.coeffs().iter().enumerate() {
        if *c == 0.0 {
            continue;
        }
        acc += 2.0 * omega.moment(2.0 * k as f64 + 1.0)? * c * c;
    }
    Ok(acc)
}

/// Lifts omega to v = (1-s) omega, evaluates the lift-side Muckenhoupt
/// condition on omega, and samples the norm-equivalence ratios
/// ||f||^2_{A^2_omega} / ||f||^2_{D_v} over a fixed polynomial corpus.
pub fn bergman_lift(omega: &RadialWeight) -> Result<BergmanLiftReport> {
    if !omega.hypotheses().doubling {
        return Err(Error::HypothesisNotMet {
            weight: omega.id(),
            condition: "doubling".into(),
            detail: "the Bergman lift equivalence needs a doubling base weight".into(),
        });
    }
    let lifted = RadialWeight::bergman_lift(omega.clone());

    // One-shot probe of the factor reaching the endpoint.
    let inv_tail = |t: f64| 1.0 / omega.tail_unchecked(t);
    let gate = divergence_probe(inv_tail, ProbeSide::Toward1, 20)?;
    let (m2cond, m2cond_value) = match gate {
        DivergenceVerdict::Diverging { .. } => (Finiteness::Infinite, f64::INFINITY),
        DivergenceVerdict::Indeterminate { .. } => (Finiteness::Indeterminate, f64::NAN),
        DivergenceVerdict::Finite { .. } => {
            let spec = IntegrationSpec::singular_at_1();
            let mut sup: f64 = 0.0;
            let mut sup_ok = true;
            let mut prev = Vec::new();
            for k in 1..=20 {
                let r = 1.0 - 0.5f64.powi(k);
                let head = integrate(
                    |t| omega.tail_unchecked(t) / ((1.0 - t) * (1.0 - t)),
                    0.0,
                    r,
                    &spec,
                );
                let tail = integrate(inv_tail, r, 1.0, &spec);
                match (head, tail) {
                    (Ok(h), Ok(t)) => {
                        let p = (h.value * t.value).max(0.0).sqrt();
                        sup = sup.max(p);
                        prev.push(p);
                    }
                    _ => {
                        sup_ok = false;
                        break;
                    }
                }
            }
            if !sup_ok {
                (Finiteness::Indeterminate, f64::NAN)
            } else {
                match crate::quadrature::classify_trail(&prev) {
                    crate::quadrature::TrailClass::Growing { .. } => {
                        (Finiteness::Infinite, f64::INFINITY)
                    }
                    crate::quadrature::TrailClass::Stabilized => (Finiteness::Finite, sup),
                    crate::quadrature::TrailClass::Indeterminate => {
                        (Finiteness::Indeterminate, sup)
                    }
                }
            }
        }
    };

    // Fixed 20-polynomial corpus: monomials to degree 10 and mixtures.
    let mut corpus: Vec<CoefficientFunction> = (0..=10).map(CoefficientFunction::monomial).collect();
    corpus.push(CoefficientFunction::new(vec![1.0, 1.0, 1.0]));
    corpus.push(CoefficientFunction::new(vec![0.0, 1.0, 0.0, 1.0]));
    corpus.push(CoefficientFunction::new(vec![0.5, -1.0, 2.0]));
    corpus.push(CoefficientFunction::new(vec![0.0, 2.0, 0.0, 0.0, -1.0]));
    corpus.push(CoefficientFunction::new(vec![1.0, 0.0, 0.0, 0.0, 0.0, 1.0]));
    corpus.push(CoefficientFunction::new(vec![0.0, 1.0, -1.0, 1.0, -1.0]));
    corpus.push(CoefficientFunction::new(vec![2.0, 0.0, 1.0, 0.0, 0.5, 0.0, 0.25]));
    corpus.push(CoefficientFunction::new(vec![0.0, 0.5, 0.5, 0.5, 0.5, 0.5]));
    corpus.push(CoefficientFunction::new(vec![1.0, -0.5, 0.25, -0.125]));

    let mut equivalence_samples = Vec::with_capacity(corpus.len());
    for f in &corpus {
        let a2 = bergman_norm_sq(omega, f)?;
        let dv = dv_inner(&lifted, f, f);
        let label = format!("deg{}", f.degree());
        equivalence_samples.push((label, a2 / dv));
    }

    Ok(BergmanLiftReport {
        lifted,
        m2cond,
        m2cond_value,
        equivalence_samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn std1() -> RadialWeight {
        RadialWeight::standard(1.0).unwrap()
    }

    #[test]
    fn inner_product_closed_forms() {
        let w = std1();
        let z = CoefficientFunction::monomial(1);
        assert_relative_eq!(dv_inner(&w, &z, &z), 1.0 / 3.0, epsilon = 1e-14);
        let one = CoefficientFunction::constant(1.0);
        assert_relative_eq!(dv_inner(&w, &one, &one), 1.0, epsilon = 1e-15);
        let z2 = CoefficientFunction::monomial(2);
        assert_eq!(dv_inner(&w, &z, &z2), 0.0);
    }

    #[test]
    fn l2v2_closed_forms() {
        let w = std1(); // V2 = 1/2
        let one = RadialFunction::Callable(Arc::new(|_| 1.0));
        let n = l2v2_norm(&w, &one).unwrap().finite_value().unwrap();
        assert_relative_eq!(n, 0.5f64.sqrt(), max_relative = 1e-9);

        let phi = RadialFunction::PhiR {
            r: 0.5,
            weight: w.clone(),
        };
        let n = l2v2_norm(&w, &phi).unwrap().finite_value().unwrap();
        assert_relative_eq!(n, 1.0, max_relative = 1e-9);

        let t = RadialFunction::Callable(Arc::new(|t| t));
        let n = l2v2_norm(&w, &t).unwrap().finite_value().unwrap();
        assert_relative_eq!(n, (1.0f64 / 6.0).sqrt(), max_relative = 1e-9);
    }

    #[test]
    fn l2v2_divergence_is_reported() {
        // alpha = 2: 1/V2 = 3/(1-t), so phi_r itself has infinite norm.
        let w = RadialWeight::standard(2.0).unwrap();
        let phi = RadialFunction::PhiR {
            r: 0.5,
            weight: w.clone(),
        };
        assert!(matches!(
            l2v2_norm(&w, &phi).unwrap(),
            RadialNorm::Diverging { .. }
        ));
    }

    #[test]
    fn monomial_basis_element() {
        let w = std1();
        let e2 = basis_element(&w, &BasisKind::Monomial, 2).unwrap();
        // 2 * 4 * v_3 = 0.4
        assert_relative_eq!(e2.coeff(2), 1.0 / 0.4f64.sqrt(), epsilon = 1e-12);
        let e0 = basis_element(&w, &BasisKind::Monomial, 0).unwrap();
        assert_eq!(e0.coeffs(), &[1.0]);
    }

    #[test]
    fn block_basis_element_n1() {
        // (z + z^2) / sqrt(2 (v_1 + 4 v_3)) = (z + z^2) / sqrt(11/15).
        let w = std1();
        let e1 = basis_element(&w, &BasisKind::Block, 1).unwrap();
        let expected = 1.0 / (11.0f64 / 15.0).sqrt();
        assert_relative_eq!(e1.coeff(1), expected, epsilon = 1e-12);
        assert_relative_eq!(e1.coeff(2), expected, epsilon = 1e-12);
    }

    #[test]
    fn parseval_all_bases() {
        let w = std1();
        let g = Symbol::power(0.75).unwrap();
        // Monomial family up to 64.
        for n in 0..=64usize {
            let en = basis_element(&w, &BasisKind::Monomial, n).unwrap();
            assert!((dv_inner(&w, &en, &en) - 1.0).abs() <= 1e-10, "monomial {n}");
            if n >= 1 {
                let em = basis_element(&w, &BasisKind::Monomial, n - 1).unwrap();
                assert!(dv_inner(&w, &en, &em).abs() <= 1e-12);
            }
        }
        // Block-indexed families: the degree grows like 2^n, so the Parseval
        // sweep stays in the feasible range n <= 12.
        for kind in [BasisKind::Block, BasisKind::Sigma(&g)] {
            for n in 0..=12usize {
                let en = basis_element(&w, &kind, n).unwrap();
                assert!(
                    (dv_inner(&w, &en, &en) - 1.0).abs() <= 1e-10,
                    "{kind:?} {n}: {}",
                    dv_inner(&w, &en, &en)
                );
                if n >= 1 {
                    let em = basis_element(&w, &kind, n - 1).unwrap();
                    // Disjoint support: exact zero.
                    assert_eq!(dv_inner(&w, &en, &em), 0.0);
                }
            }
        }
    }

    #[test]
    fn sigma_degenerate_block() {
        let w = std1();
        let g = Symbol::polynomial(vec![0.0, 1.0]).unwrap(); // only ĝ(1) nonzero
        match basis_element(&w, &BasisKind::Sigma(&g), 3) {
            Err(Error::DegenerateBlock { n: 3 }) => {}
            other => panic!("expected degenerate block, got {other:?}"),
        }
    }

    #[test]
    fn hl_closed_forms() {
        let w = std1();
        let one = CoefficientFunction::constant(1.0);
        let r = hl_checks(&w, &one, 64).unwrap();
        assert_relative_eq!(r.fejer_ratio, 1.0, max_relative = 1e-9);

        let z = CoefficientFunction::monomial(1);
        let r = hl_checks(&w, &z, 64).unwrap();
        assert_relative_eq!(r.fejer_ratio, 0.5 / (1.0f64 / 3.0).sqrt(), max_relative = 1e-9);
        assert!(r.hl_ratio.is_finite() && r.hl_ratio > 0.0);
    }

    #[test]
    fn hl_refuses_outside_hypotheses() {
        let w = RadialWeight::standard(3.0).unwrap();
        let one = CoefficientFunction::constant(1.0);
        assert!(matches!(
            hl_checks(&w, &one, 32),
            Err(Error::HypothesisNotMet { .. })
        ));
        // The unchecked route still measures.
        assert!(hl_checks_unchecked(&w, &one, 32).is_ok());
    }

    #[test]
    fn bergman_lift_conditions() {
        let good = RadialWeight::standard(-0.5).unwrap();
        let report = bergman_lift(&good).unwrap();
        assert_eq!(report.m2cond, Finiteness::Finite);

        // 1/omegâ = 1.5 (1-t)^(-3/2) is not integrable near 1.
        let bad = RadialWeight::standard(0.5).unwrap();
        let report = bergman_lift(&bad).unwrap();
        assert_eq!(report.m2cond, Finiteness::Infinite);
    }

    #[test]
    fn bergman_lift_ratio_for_z() {
        // ||z||^2_{A^2} = 2 B(4, 1/2) = 64/35; ||z||^2_{D_v} = 2 B(2, 3/2) = 8/15;
        // ratio 24/7.
        let omega = RadialWeight::standard(-0.5).unwrap();
        let lifted = RadialWeight::bergman_lift(omega.clone());
        let z = CoefficientFunction::monomial(1);
        let a2 = bergman_norm_sq(&omega, &z).unwrap();
        let dv = dv_inner(&lifted, &z, &z);
        assert_relative_eq!(a2, 64.0 / 35.0, epsilon = 1e-12);
        assert_relative_eq!(dv, 8.0 / 15.0, epsilon = 1e-12);
        assert_relative_eq!(a2 / dv, 24.0 / 7.0, epsilon = 1e-10);
    }

    #[test]
    fn bergman_lift_refuses_non_doubling() {
        let w = RadialWeight::exponential(1.0, 1.0).unwrap();
        assert!(matches!(
            bergman_lift(&w),
            Err(Error::HypothesisNotMet { .. })
        ));
    }

    #[test]
    fn m_inf_matches_positive_case() {
        // Mixed-sign coefficients: circle sampling must beat t = 1 value.
        let f = CoefficientFunction::new(vec![0.0, 1.0, 0.0, -0.8]);
        let m = m_inf_circle(&f, 0.9, 32, false);
        // |f| at theta = pi: |-0.9 + 0.8*0.729| = 0.3167; at theta = 0: 0.3167.
        // Somewhere between, modulus is larger.
        assert!(m >= f.eval(0.9).abs());
        assert!(m >= f.eval_modulus(0.9, std::f64::consts::PI) - 1e-12);
    }
}
