//! Exact and randomized checking, mutation detection and bound auditing.
//!
//! ```bash
//! cargo run --release --example verification
//! ```

use circsynth::gf2::random_kernel;
use circsynth::synth::synth;
use circsynth::verify::{audit_bounds, verify_exact, verify_freivalds};

fn main() -> circsynth::Result<()> {
    let k = random_kernel(243, 11)?;
    let c = synth(&k, 3)?;
    println!("exact: {:?}", verify_exact(&c, &k)?);
    println!("freivalds(40): {:?}", verify_freivalds(&c, &k, 40, 1)?);

    // drop one edge into output 7
    let out = c.output_node(7).expect("complete circuit");
    let pred = c.node(out).preds()[0];
    let broken = c.with_edge_toggled(pred, out)?;
    println!("mutant exact: {:?}", verify_exact(&broken, &k)?);
    println!("mutant freivalds(40): {:?}", verify_freivalds(&broken, &k, 40, 1)?);

    println!("audit: {}", audit_bounds(&c, 3)?.to_json());
    Ok(())
}
