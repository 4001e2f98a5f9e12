//! The extremal input family f_N and the Hardy-Littlewood type
//! measurements: inside the well-definedness condition the segment
//! integral int_0^1 |f| is dominated by the space norm; outside it the
//! ratio blows up along the family.
//!
//!     cargo run --release --example extremal_probes

use hilbert_dirichlet::operators::{default_lambda, extremal_fn};
use hilbert_dirichlet::spaces::{dv_norm, hl_checks, hl_checks_unchecked};
use hilbert_dirichlet::weights::RadialWeight;

fn main() -> hilbert_dirichlet::Result<()> {
    let w = RadialWeight::standard(1.0)?;
    let lambda = default_lambda(&w)?;
    println!("alpha = 1, lambda = {lambda}:");
    for big_n in [1u32, 3, 5, 8, 10] {
        let f = extremal_fn(&w, big_n, lambda)?;
        let norm = dv_norm(&w, &f.coeffs);
        let checks = hl_checks(&w, &f.coeffs, 64)?;
        println!(
            "  N = {big_n:>2}: ||f_N|| = {norm:.6}, int|f| / ||f_N|| = {:.6}, maximal ratio = {:.6}",
            checks.fejer_ratio, checks.hl_ratio
        );
    }

    let bad = RadialWeight::standard(3.0)?;
    let lambda = default_lambda(&bad)?;
    println!("\nalpha = 3 (divergent well-definedness integral), lambda = {lambda}:");
    for big_n in [1u32, 5, 10] {
        let f = extremal_fn(&bad, big_n, lambda)?;
        let checks = hl_checks_unchecked(&bad, &f.coeffs, 64)?;
        println!("  N = {big_n:>2}: int|f| / ||f_N|| = {:.4} (growing)", checks.fejer_ratio);
    }
    Ok(())
}
