//! Dyadic block profiles and B(2,p) norms of symbols, by the block route
//! and the integral-means route.
//!
//!     cargo run --release --example symbol_norms

use hilbert_dirichlet::symbols::{BnormMethod, BnormOutcome, Symbol};

fn main() -> hilbert_dirichlet::Result<()> {
    let symbols = [Symbol::log(), Symbol::power(0.75)?, Symbol::polynomial(vec![0.0, 1.0, 0.0, 1.0])?];
    for g in &symbols {
        let profile = g.block_profile(12)?;
        println!("{}: B_n = {:?}", g.id(), profile.values.iter().map(|b| format!("{b:.4}")).collect::<Vec<_>>());
        for p in [1.0, 2.0, f64::INFINITY] {
            let blocks = g.bnorm(p, &BnormMethod::Blocks { n_max: 16 })?;
            let integral = g.bnorm(p, &BnormMethod::Integral { depth: 12 })?;
            println!("  p = {:>4}: blocks {} | integral {}", fmt_p(p), render(&blocks), render(&integral));
        }
        let little_oh = g.little_oh_verdict(14)?;
        println!("  little-oh (compactness) member: {}", little_oh.member);
    }
    Ok(())
}

fn fmt_p(p: f64) -> String {
    if p.is_infinite() { "inf".into() } else { format!("{p}") }
}

fn render(o: &BnormOutcome) -> String {
    match o {
        BnormOutcome::Finite { value, .. } => format!("{value:.8}"),
        BnormOutcome::Diverging { note, .. } => format!("diverging ({note})"),
        BnormOutcome::Indeterminate { .. } => "indeterminate".into(),
    }
}
