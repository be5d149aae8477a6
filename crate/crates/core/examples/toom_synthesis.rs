//! Recursive synthesis at depths 3 to 6, with the chosen parameters.
//!
//! ```bash
//! cargo run --release --example toom_synthesis -- 100
//! ```

use circsynth::gf2::random_kernel;
use circsynth::synth::{plan_parameters, synth, PlanKind, SynthPlan};
use circsynth::verify::verify_exact;

fn describe(plan: &SynthPlan) -> String {
    match &plan.kind {
        PlanKind::Trivial => format!("trivial(n={})", plan.n),
        PlanKind::Lupanov => format!("lupanov(n={})", plan.n),
        PlanKind::Toom(t) => format!(
            "toom(n={}, q={}, s={}, m={}, block={}) -> {}",
            plan.n,
            t.q,
            t.s,
            t.m,
            t.block_len,
            describe(&t.sub_plan)
        ),
    }
}

fn main() -> circsynth::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(81);
    let k = random_kernel(n, 1)?;
    for d in 1..=6 {
        let plan = plan_parameters(n, d)?;
        let c = synth(&k, d)?;
        let ok = verify_exact(&c, &k)?.is_ok();
        println!(
            "d={d} edges={:>7} depth={} exact={ok}  {}",
            c.edge_count(),
            c.depth(),
            describe(&plan)
        );
    }
    Ok(())
}
