//! Synthesis of bounded-depth XOR circuits for circulant matrices.
//!
//! Depth 1 and 2 use the trivial and Lupanov constructions. Larger budgets
//! recurse: two depth-1 layers (DFT evaluation and interpolation) around
//! parallel depth-`(d-2)` constant multiplications. Odd budgets bottom out in
//! trivial circuits and even budgets in Lupanov circuits.

mod base;
mod plan;
mod toom;

pub use base::{
    lupanov_block_width, lupanov_for_matrix, lupanov_for_matrix_with_width, synth_lupanov, synth_trivial,
    trivial_for_matrix,
};
pub use plan::{plan_parameters, PlanKind, SynthPlan, ToomParams};
pub use toom::{
    constant_points, evaluation_rows, kernel_blocks, recombination_rows, synth_constant_mult, synth_ring_mult,
    synth_toom, synth_toom_with_plan, ToomStageData,
};

use crate::circuit::RectifierCircuit;
use crate::error::Result;
use crate::gf2::CirculantKernel;

/// Circuit of depth at most `d` realizing the circulant of `kernel`.
pub fn synth(kernel: &CirculantKernel, d: usize) -> Result<RectifierCircuit> {
    let plan = plan_parameters(kernel.n(), d)?;
    synth_with_plan(&plan, kernel)
}

pub fn synth_with_plan(plan: &SynthPlan, kernel: &CirculantKernel) -> Result<RectifierCircuit> {
    match plan.kind {
        PlanKind::Trivial => Ok(synth_trivial(kernel)),
        PlanKind::Lupanov => Ok(synth_lupanov(kernel)),
        PlanKind::Toom(_) => synth_toom_with_plan(plan, kernel),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::to_json;
    use crate::gf2::{random_kernel, BitVector};

    #[test]
    fn identity_kernel_depth_one() {
        let k = CirculantKernel::new(BitVector::unit(12, 0)).unwrap();
        let c = synth(&k, 1).unwrap();
        assert_eq!(c.edge_count(), 12);
    }

    #[test]
    fn exact_on_small_grid() {
        for n in 1..=20 {
            for d in 1..=6 {
                let k = random_kernel(n, 7 * n as u64 + d as u64).unwrap();
                let c = synth(&k, d).unwrap();
                assert!(c.depth() <= d);
                assert_eq!(c.realized_matrix(), k.to_matrix(), "n={n} d={d}");
            }
        }
    }

    #[test]
    fn deterministic_output() {
        let k = random_kernel(40, 3).unwrap();
        for d in 3..=4 {
            assert_eq!(to_json(&synth(&k, d).unwrap()), to_json(&synth(&k, d).unwrap()));
        }
    }

    #[test]
    fn dense_circuits_use_full_depth() {
        for (n, d) in [(27, 3), (81, 3), (81, 4)] {
            let k = random_kernel(n, 1).unwrap();
            assert_eq!(synth(&k, d).unwrap().depth(), d);
        }
    }
}
