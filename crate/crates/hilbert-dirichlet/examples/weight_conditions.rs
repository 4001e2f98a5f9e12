//! Muckenhoupt-type condition verdicts across the standard weight scale:
//! M1 is finite exactly for alpha > 0 and M2 exactly for alpha < 2, so the
//! Hilbert operator is bounded on D_alpha exactly for alpha in (0, 2).
//!
//!     cargo run --release --example weight_conditions

use hilbert_dirichlet::weights::RadialWeight;

fn main() -> hilbert_dirichlet::Result<()> {
    println!(
        "{:>6} {:>9} {:>20} {:>20} {:>9} {:>7}",
        "alpha", "doubling", "M1", "M2", "welldef", "beta"
    );
    for alpha in [-0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 2.5] {
        let w = RadialWeight::standard(alpha)?;
        let r = w.condition_report(24)?;
        println!(
            "{alpha:>6} {:>9} {:>20} {:>20} {:>9} {:>7.4}",
            if r.doubling.verdict { "yes" } else { "no" },
            format!("{} ({:.4})", r.m1.verdict, r.m1.value),
            format!("{} ({:.4})", r.m2.verdict, r.m2.value),
            if r.welldef.is_finite() { "finite" } else { "infinite" },
            r.doubling.beta_estimate,
        );
    }

    // A non-doubling control: the doubling ratio explodes along the grid.
    let e = RadialWeight::exponential(1.0, 1.0)?;
    let r = e.condition_report(14)?;
    println!(
        "\nexp:1:1 doubling trail (first 12 ratios): {:?}",
        r.doubling.trail.iter().take(12).map(|x| format!("{x:.3e}")).collect::<Vec<_>>()
    );
    Ok(())
}
