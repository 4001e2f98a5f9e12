//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Heavy suite reports are computed once and shared across criteria.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use hilbert_dirichlet::operators::OperatorMatrix;
use hilbert_dirichlet::quadrature::{integrate, IntegrationSpec};
use hilbert_dirichlet::schatten::{singular_values, SpectrumCache};
use hilbert_dirichlet::verify::{run_suite, Suite, SuiteId, SuiteReport, Verdict};
use hilbert_dirichlet::weights::RadialWeight;

fn shared_report(id: SuiteId) -> SuiteReport {
    static REPORTS: OnceLock<Mutex<HashMap<&'static str, SuiteReport>>> = OnceLock::new();
    static CACHE: OnceLock<SpectrumCache> = OnceLock::new();
    let lock = REPORTS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = lock.lock().unwrap();
    map.entry(id.name())
        .or_insert_with(|| {
            let cache = CACHE.get_or_init(SpectrumCache::new);
            run_suite(&Suite::default_for(id), cache).expect("suite runs")
        })
        .clone()
}

fn conclude(criterion: &str, pass: bool, detail: String) {
    println!(
        "{criterion}: {}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{criterion}: {detail}");
}

fn suite_clean(criterion: &str, report: &SuiteReport) {
    let mut detail = String::new();
    for s in &report.scenarios {
        for a in &s.assertions {
            if a.verdict == Verdict::Fail || a.verdict == Verdict::Indeterminate {
                detail.push_str(&format!(
                    "\n  [{}] {} / {} value={:?} bound={:?}",
                    a.verdict, s.name, a.name, a.value, a.bound
                ));
            }
        }
    }
    conclude(
        criterion,
        report.failed() == 0 && report.indeterminate() == 0,
        detail,
    );
}

/// Independent Beta-moment oracle: the product recurrence
/// v_x = v_{x-1} * x / (x + alpha + 1) walked up from v_0 = 1/(alpha+1),
/// in plain and log arithmetic. Accumulates only one rounding per step.
fn moment_oracle(alpha: f64, x: u64) -> f64 {
    let mut v = 1.0 / (alpha + 1.0);
    for k in 1..=x {
        v *= k as f64 / (k as f64 + alpha + 1.0);
    }
    v
}

fn moment_oracle_ln(alpha: f64, x: u64) -> f64 {
    let mut v = -(alpha + 1.0f64).ln();
    for k in 1..=x {
        v += (k as f64 / (k as f64 + alpha + 1.0)).ln();
    }
    v
}

/// Criterion 1: tails and moments of standard weights match the
/// log-Gamma/Beta closed forms against independent oracles, to 1e-10
/// relative for x up to 200 and (in the log-scale route) 1e-8 beyond 1e3.
#[test]
fn criterion_01_closed_form_weight_layer() {
    let mut worst_small: f64 = 0.0;
    let mut worst_large: f64 = 0.0;
    for alpha in [-0.5f64, 0.0, 0.5, 1.0, 1.5] {
        let w = RadialWeight::standard(alpha).unwrap();
        // Tails against the complement identity v̂(r) = v_0 - int_0^r v,
        // whose quadrature never touches the endpoint.
        for r in [0.0, 0.25, 0.5, 0.9, 0.99] {
            let closed = w.tail(r).unwrap();
            let tight = IntegrationSpec {
                rel_tol: 1e-13,
                abs_tol: 1e-15,
                ..Default::default()
            };
            let head = if r > 0.0 {
                integrate(|s| (1.0 - s).powf(alpha), 0.0, r, &tight)
                    .unwrap()
                    .value
            } else {
                0.0
            };
            let oracle = moment_oracle(alpha, 0) - head;
            worst_small = worst_small.max((oracle / closed - 1.0).abs());
        }
        // Moments on the integer grid against the product recurrence.
        for x in [1u64, 2, 3, 5, 10, 20, 50, 100, 200] {
            let closed = w.moment(x as f64).unwrap();
            worst_small = worst_small.max((moment_oracle(alpha, x) / closed - 1.0).abs());
        }
        // One non-integer spot check by quadrature (honest tolerance of the
        // generic endpoint route).
        let closed = w.moment(7.5).unwrap();
        let quad = integrate(
            |s| s.powf(7.5) * (1.0 - s).powf(alpha),
            0.0,
            1.0,
            &IntegrationSpec::singular_at_1(),
        )
        .unwrap()
        .value;
        assert!((quad / closed - 1.0).abs() <= 1e-8, "non-integer moment");

        // Log-scale route beyond x = 1e3.
        for x in [2048u64, 16384, 131072] {
            let closed_ln = w.moment_ln(x as f64).unwrap();
            let diff = (closed_ln - moment_oracle_ln(alpha, x)).abs();
            // A log difference of d means a relative value error of ~d.
            worst_large = worst_large.max(diff);
        }
    }
    conclude(
        "criterion 01 (closed-form weight layer)",
        worst_small <= 1e-10 && worst_large <= 1e-8,
        format!("worst x<=200: {worst_small:.3e}, worst log-scale: {worst_large:.3e}"),
    );
}

/// Criterion 2: M1 finite exactly for alpha > 0, M2 exactly for alpha < 2,
/// and M1 = M2 = 1.00 +- 0.01 at alpha = 1.
#[test]
fn criterion_02_muckenhoupt_dichotomy() {
    let report = shared_report(SuiteId::MuckenhouptDichotomy);
    assert_eq!(report.scenarios.len(), 7);
    suite_clean("criterion 02 (Muckenhoupt dichotomy)", &report);
}

/// Criterion 3: spectral S_2 of the N = 512 truncation agrees with the
/// coefficient-series Frobenius value to 1e-8 relative across the
/// (weight, symbol) grid.
#[test]
fn criterion_03_hilbert_schmidt_identity() {
    let report = shared_report(SuiteId::HsIdentity);
    let identity_rows: usize = report
        .scenarios
        .iter()
        .flat_map(|s| s.assertions.iter())
        .filter(|a| a.name == "s2-spectral-vs-series")
        .count();
    assert_eq!(identity_rows, 6, "expected the 2 x 3 grid");
    suite_clean("criterion 03 (Hilbert-Schmidt identity)", &report);
}

/// Criterion 4: the S_p(N) / B(2,p) ratio stabilizes across the final
/// doubling (< 2%) and the within-family spread stays below a factor 8,
/// over alpha in {0.5, 1, 1.5}, pow symbols, p in {1, 2, 4, inf}.
#[test]
fn criterion_04_schatten_equivalence() {
    let report = shared_report(SuiteId::SchattenEquivalence);
    let stab_rows: usize = report
        .scenarios
        .iter()
        .flat_map(|s| s.assertions.iter())
        .filter(|a| a.name.starts_with("ratio-stabilizes"))
        .count();
    assert_eq!(stab_rows, 36, "3 weights x 3 symbols x 4 exponents");
    suite_clean("criterion 04 (Schatten equivalence)", &report);
}

/// Criterion 5: for the classical log symbol, S_2^2 is affine in log2 N
/// (R^2 > 0.99) while B(2,p) diverges for every finite p; the symbol stays
/// bounded and non-compact.
#[test]
fn criterion_05_divergence_law() {
    let report = shared_report(SuiteId::CompactnessDichotomy);
    let affine = report
        .assertion("log divergence law", "s2-affine-in-log2n")
        .expect("affine-law row");
    assert!(affine.value.unwrap() > 0.99);
    suite_clean("criterion 05 (divergence law)", &report);
}

/// Criterion 6: the discretized Hilbert operator dominates every phi_r
/// probe, grows monotonically in D, stabilizes within 5% at D 32 -> 64 for
/// alpha in {0.5, 1, 1.5}, and the alpha = 2 control grows without
/// stabilizing.
#[test]
fn criterion_06_hilbert_sandwich() {
    let report = shared_report(SuiteId::HilbertSandwich);
    // The control scenario must exhibit growth (recorded outside-hypotheses).
    let control = report
        .assertion("std:2", "trail-grows-without-stabilizing")
        .expect("control row");
    assert_eq!(control.verdict, Verdict::OutsideHypotheses);
    assert!(control.value.unwrap() >= 0.05);
    suite_clean("criterion 06 (Hilbert-operator sandwich)", &report);
}

/// Criterion 7: basis orthonormality at 1e-10 and matrix columns matching
/// applied basis images at 1e-10.
#[test]
fn criterion_07_bases_and_consistency() {
    let report = shared_report(SuiteId::HsIdentity);
    let parseval = report.assertion("bases", "parseval").expect("parseval row");
    let columns = report
        .assertion("bases", "columns-match-apply")
        .expect("columns row");
    conclude(
        "criterion 07 (bases and operator consistency)",
        parseval.verdict == Verdict::Pass && columns.verdict == Verdict::Pass,
        format!("parseval {:?}, columns {:?}", parseval.value, columns.value),
    );
}

/// Criterion 8: the Bergman lift of std:-0.5 sits inside the hypotheses,
/// its norm-equivalence ratios stay within a factor 10, and the
/// equivalence protocol passes on the lifted weight.
#[test]
fn criterion_08_bergman_corollary() {
    let report = shared_report(SuiteId::BergmanCorollary);
    suite_clean("criterion 08 (Bergman corollary)", &report);
}

/// Criterion 9: S_p norms are nondecreasing along nested truncations in
/// every sweep produced by the suites above - zero violations.
#[test]
fn criterion_09_compression_monotonicity() {
    let mut checked = 0usize;
    let mut violations = String::new();
    for id in [
        SuiteId::SchattenEquivalence,
        SuiteId::BergmanCorollary,
        SuiteId::CompactnessDichotomy,
    ] {
        let report = shared_report(id);
        for s in &report.scenarios {
            for a in &s.assertions {
                if a.name.starts_with("sp-monotone") {
                    checked += 1;
                    if a.verdict != Verdict::Pass {
                        violations.push_str(&format!("\n  {} / {} / {}", report.suite, s.name, a.name));
                    }
                }
            }
        }
    }
    conclude(
        "criterion 09 (compression monotonicity)",
        checked >= 38 && violations.is_empty(),
        format!("checked {checked} sweeps{violations}"),
    );
}

/// Criterion 10: spectral cross-check on the explicit section matrix
/// [1/(j+n+1)]: the top singular value is increasing in N and lies in
/// (3.0, pi) at N = 512.
#[test]
fn criterion_10_classical_cross_check() {
    let mut tops = Vec::new();
    for n in [64usize, 128, 256, 512] {
        let mut entries = vec![0.0f64; n * n];
        for j in 0..n {
            for i in 0..n {
                entries[j * n + i] = 1.0 / ((i + j + 1) as f64);
            }
        }
        let m =
            OperatorMatrix::from_entries(entries, n, n, "none", "hilbert-section", "canonical")
                .unwrap();
        tops.push(singular_values(&m, 1e-12).unwrap().values[0]);
    }
    let increasing = tops.windows(2).all(|w| w[1] > w[0]);
    let top = *tops.last().unwrap();
    conclude(
        "criterion 10 (classical cross-check)",
        increasing && top > 3.0 && top < std::f64::consts::PI,
        format!(
            "top singular values over N in 64..512: {tops:?}; finite sections of this \
             kernel approach pi only logarithmically, and the measured value at N = 512 \
             is {top:.12}, far below the stated lower bracket 3.0 (the upper bracket pi \
             and the monotonicity do hold: increasing = {increasing})"
        ),
    );
}
