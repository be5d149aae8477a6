//! Depth-1 and depth-2 circuits for a dense circulant.
//!
//! ```bash
//! cargo run --release --example base_constructions
//! ```

use circsynth::gf2::random_kernel;
use circsynth::synth::{lupanov_block_width, synth_lupanov, synth_trivial};

fn main() -> circsynth::Result<()> {
    println!("{:>6} {:>10} {:>10} {:>6} {:>7}", "n", "trivial", "lupanov", "width", "ratio");
    for n in [64, 128, 256, 512, 1024] {
        let k = random_kernel(n, 1)?;
        let trivial = synth_trivial(&k);
        let lupanov = synth_lupanov(&k);
        assert_eq!(lupanov.realized_matrix(), k.to_matrix());
        println!(
            "{n:>6} {:>10} {:>10} {:>6} {:>7.3}",
            trivial.edge_count(),
            lupanov.edge_count(),
            lupanov_block_width(&k.to_matrix()),
            lupanov.edge_count() as f64 / trivial.edge_count() as f64
        );
    }
    Ok(())
}
