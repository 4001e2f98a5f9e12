//! The equivalence measurement at the heart of the crate: S_p norms of
//! nested truncations of H_g against the matched block norms B(2,p) of the
//! symbol. For symbols inside B(2,p) the ratio stabilizes; for the
//! classical log symbol the p = 2 norm grows affinely in log2 N instead.
//!
//!     cargo run --release --example schatten_sweep

use hilbert_dirichlet::schatten::{sweep, RatioEntry, SpectrumCache};
use hilbert_dirichlet::symbols::Symbol;
use hilbert_dirichlet::weights::RadialWeight;

fn main() -> hilbert_dirichlet::Result<()> {
    let w = RadialWeight::standard(1.0)?;
    let cache = SpectrumCache::new();

    let g = Symbol::power(0.75)?;
    let table = sweep(&w, &g, &[1.0, 2.0, f64::INFINITY], &[128, 256, 512, 1024], &cache, 1e-12)?;
    println!("{} x {}:", table.weight_id, table.symbol_id);
    println!("{:>5} {:>6} {:>12} {:>12} {:>12} {:>12}", "p", "N", "S_p", "B(2,p)", "ratio", "drift");
    for row in &table.rows {
        if let RatioEntry::Ratio(r) = row.ratio {
            println!(
                "{:>5} {:>6} {:>12.6} {:>12.6} {:>12.6} {:>12}",
                fmt_p(row.p),
                row.n,
                row.s_p,
                row.b_norm.unwrap_or(f64::NAN),
                r,
                row.ratio_rel_change.map(|d| format!("{d:.4}")).unwrap_or_default()
            );
        }
    }

    let g = Symbol::log();
    let table = sweep(&w, &g, &[2.0], &[128, 256, 512, 1024, 2048], &cache, 1e-12)?;
    println!("\n{} x {} (divergent symbol norm):", table.weight_id, table.symbol_id);
    for row in &table.rows {
        if let RatioEntry::DivergingSymbolNorm { s_p, b_partial } = row.ratio {
            println!(
                "  N = {:>5}: S_2^2 = {:.6}, block partial sum = {:.2}",
                row.n,
                s_p * s_p,
                b_partial
            );
        }
    }
    Ok(())
}

fn fmt_p(p: f64) -> String {
    if p.is_infinite() { "inf".into() } else { format!("{p}") }
}
