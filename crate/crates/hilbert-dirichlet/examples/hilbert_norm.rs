//! Norm estimation of the classical Hilbert operator from the radial space
//! L^2_{V2} into D_v: discretized top singular values over nested geometric
//! cell systems, probe lower bounds from the indicator-scaled inputs, and
//! the Muckenhoupt sandwich shape.
//!
//!     cargo run --release --example hilbert_norm

use hilbert_dirichlet::operators::{hilbert_discretized, hilbert_discretized_unchecked, phi_probe};
use hilbert_dirichlet::schatten::singular_values;
use hilbert_dirichlet::weights::RadialWeight;

fn main() -> hilbert_dirichlet::Result<()> {
    for alpha in [0.5, 1.0, 1.5] {
        let w = RadialWeight::standard(alpha)?;
        print!("alpha = {alpha}: top sv over D = ");
        let mut top = 0.0;
        for d in [4usize, 8, 16, 32, 64] {
            let m = hilbert_discretized(&w, d, d)?;
            top = singular_values(&m, 1e-12)?.values[0];
            print!("{top:.5} ");
        }
        let hyp = w.hypotheses();
        println!("\n  M1 = {:.4}, M2 = {:.4}, M2/M1 = {:.4}", hyp.m1_value, hyp.m2_value, hyp.m2_value / hyp.m1_value);
        for r in [0.5, 0.9, 0.99] {
            let p = phi_probe(&w, r)?;
            println!("  probe r = {r}: {:.6} (<= top sv {top:.6})", p.value);
        }
    }

    // alpha = 2 sits outside the boundedness condition: the trail grows.
    let w = RadialWeight::standard(2.0)?;
    print!("alpha = 2 (control): top sv over D = ");
    for d in [4usize, 8, 16, 32, 64] {
        let m = hilbert_discretized_unchecked(&w, d, d)?;
        print!("{:.4} ", singular_values(&m, 1e-12)?.values[0]);
    }
    println!("(grows without stabilizing)");
    Ok(())
}
