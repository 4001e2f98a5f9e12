//! The Bergman lift: v(s) = (1-s) omega(s) turns the Bergman-space norm of
//! omega into an equivalent Dirichlet-type norm, so the Schatten theory
//! transfers to Bergman spaces whose base weight satisfies the lift-side
//! condition.
//!
//!     cargo run --release --example bergman_lift

use hilbert_dirichlet::spaces::bergman_lift;
use hilbert_dirichlet::weights::RadialWeight;

fn main() -> hilbert_dirichlet::Result<()> {
    for alpha in [-0.5, 0.5] {
        let omega = RadialWeight::standard(alpha)?;
        let report = bergman_lift(&omega)?;
        println!(
            "omega = {}: lift = {}, lift-side condition {} (value {:.4})",
            omega.id(),
            report.lifted.id(),
            report.m2cond,
            report.m2cond_value
        );
        if report.m2cond == hilbert_dirichlet::weights::Finiteness::Finite {
            let ratios: Vec<f64> = report.equivalence_samples.iter().map(|s| s.1).collect();
            let mx = ratios.iter().cloned().fold(f64::MIN, f64::max);
            let mn = ratios.iter().cloned().fold(f64::MAX, f64::min);
            println!(
                "  norm-equivalence ratios over {} polynomials: [{mn:.4}, {mx:.4}], spread {:.2}",
                ratios.len(),
                mx / mn
            );
            for (label, ratio) in report.equivalence_samples.iter().take(4) {
                println!("    {label}: {ratio:.6}");
            }
        }
    }
    Ok(())
}
