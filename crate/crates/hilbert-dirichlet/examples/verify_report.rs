//! Running named verification suites programmatically and rendering the
//! structured report. The heavy spectral suites are left to the CLI
//! (`hilbert-dirichlet verify all`); this example runs the quick ones.
//!
//!     cargo run --release --example verify_report

use hilbert_dirichlet::schatten::SpectrumCache;
use hilbert_dirichlet::verify::{run_suite, Suite, SuiteId};

fn main() -> hilbert_dirichlet::Result<()> {
    let cache = SpectrumCache::new();
    for id in [
        SuiteId::MuckenhouptDichotomy,
        SuiteId::HardyLittlewood,
        SuiteId::WeightLemmas,
    ] {
        let report = run_suite(&Suite::default_for(id), &cache)?;
        println!(
            "suite {}: {} scenario(s), {} failed, {} indeterminate",
            report.suite,
            report.scenarios.len(),
            report.failed(),
            report.indeterminate()
        );
        for scenario in &report.scenarios {
            for a in &scenario.assertions {
                println!(
                    "  [{:<19}] {} / {}",
                    a.verdict.to_string(),
                    scenario.name,
                    a.name
                );
            }
        }
    }
    Ok(())
}
