//! Time one layer of single-qubit gates per register size.
//!
//! ```text
//! cargo run --release --example kernel_bench -- 16 24
//! ```

use qreg::cli::time_layer;
use qreg::GateKind;

fn main() -> qreg::Result<()> {
    let mut args = std::env::args().skip(1);
    let lo: usize = args.next().map_or(14, |s| s.parse().expect("lowest size"));
    let hi: usize = args.next().map_or(20, |s| s.parse().expect("highest size"));

    let mut prev: Option<f64> = None;
    println!(" q   layer (ms)   ratio");
    for q in lo..=hi {
        let t = time_layer(q, GateKind::H, 5)?;
        match prev {
            Some(p) => println!("{q:>2}   {:>10.3}   {:.2}", t * 1e3, t / p),
            None => println!("{q:>2}   {:>10.3}", t * 1e3),
        }
        prev = Some(t);
    }
    Ok(())
}
