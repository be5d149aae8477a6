//! Depth-3 growth against n^1.5 and the trivial circuit.
//!
//! ```bash
//! cargo run --release --example scaling
//! ```

use std::time::Instant;

use circsynth::gf2::random_kernel;
use circsynth::synth::{plan_parameters, synth, synth_trivial, ToomStageData};
use circsynth::verify::audit_bounds;

fn main() -> circsynth::Result<()> {
    println!("    n   q  s  m  live   eval  recomb    edges  trivial  ratio  millis");
    for n in [27usize, 81, 243, 729] {
        let k = random_kernel(n, 1)?;
        let plan = plan_parameters(n, 3)?;
        let t = plan.toom().expect("recursive plan");
        let stages = ToomStageData::build(&plan, &k)?;
        let live = stages.live_points(&plan).iter().filter(|&&b| b).count();
        let start = Instant::now();
        let c = synth(&k, 3)?;
        let millis = start.elapsed().as_millis();
        let report = audit_bounds(&c, 3)?;
        println!(
            "{n:>5} {:>3} {:>2} {:>2} {live:>2}/{:<2} {:>6} {:>7} {:>8} {:>8} {:>6.2} {millis:>7}",
            t.q,
            t.s,
            t.m,
            t.points(),
            stages.eval_edges(),
            stages.recomb_edges(),
            report.edges,
            synth_trivial(&k).edge_count(),
            report.ratio,
        );
    }
    Ok(())
}
