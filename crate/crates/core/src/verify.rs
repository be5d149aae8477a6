//! Checking synthesized circuits.
//!
//! [`verify_exact`] compares the full path-parity matrix with the circulant.
//! [`verify_freivalds`] evaluates on random inputs against the reference
//! convolution: a wrong GF(2)-linear map `M` differs from the target on every
//! `x` outside the kernel of the difference, a subspace of dimension at most
//! `n - 1`, so each trial catches it with probability at least 1/2.
//! [`audit_bounds`] reports size against the growth rates the construction
//! targets; only depth is a hard gate there.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::RectifierCircuit;
use crate::error::{Error, Result};
use crate::gf2::{BitVector, CirculantKernel};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verification {
    Ok,
    /// First differing entry: output `row`, input `col`.
    Mismatch { row: usize, col: usize },
}

impl Verification {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verification::Ok)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FreivaldsOutcome {
    Pass,
    Fail { trial: usize },
}

impl FreivaldsOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, FreivaldsOutcome::Pass)
    }
}

fn check_shape(c: &RectifierCircuit, kernel: &CirculantKernel) -> Result<()> {
    let n = kernel.n();
    for found in [c.n_inputs(), c.n_outputs()] {
        if found != n {
            return Err(Error::LengthMismatch { expected: n, found });
        }
    }
    Ok(())
}

pub fn verify_exact(c: &RectifierCircuit, kernel: &CirculantKernel) -> Result<Verification> {
    check_shape(c, kernel)?;
    Ok(match c.realized_matrix().first_difference(&kernel.to_matrix()) {
        None => Verification::Ok,
        Some((row, col)) => Verification::Mismatch { row, col },
    })
}

/// Random-input check with per-trial streams derived from `seed`. Reports
/// the first failing trial; a wrong circuit passes with probability at most
/// `2^-trials`.
pub fn verify_freivalds(
    c: &RectifierCircuit,
    kernel: &CirculantKernel,
    trials: usize,
    seed: u64,
) -> Result<FreivaldsOutcome> {
    check_shape(c, kernel)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let failed = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<bool> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            let x = BitVector::random(kernel.n(), &mut rng);
            Ok(c.evaluate(&x)? != kernel.apply(&x)?)
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .position(|bad| bad);
    Ok(match failed {
        None => FreivaldsOutcome::Pass,
        Some(trial) => FreivaldsOutcome::Fail { trial },
    })
}

/// Measured size and depth next to the target growth rate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsReport {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub edges: usize,
    #[serde(rename = "depth")]
    pub depth_measured: usize,
    pub nodes: usize,
    /// `n^(1+1/k)` for odd `d`, `n * (n / log2 n)^(1/k)` for even `d`.
    pub bound_base: f64,
    /// `edges / bound_base`, the empirical constant.
    pub ratio: f64,
}

impl BoundsReport {
    pub fn depth_ok(&self) -> bool {
        self.depth_measured <= self.d
    }

    /// `{"n","d","edges","depth","bound_base","ratio"}`.
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "n": self.n,
            "d": self.d,
            "edges": self.edges,
            "depth": self.depth_measured,
            "bound_base": self.bound_base,
            "ratio": self.ratio,
        })
        .to_string()
    }
}

/// Growth rate for order `n` and depth `d`. `log2 n` is floored at 1 so the
/// even-depth base stays finite for `n <= 2`.
pub fn bound_base(n: usize, d: usize) -> f64 {
    let k = d.div_ceil(2).max(1) as f64;
    let nf = n as f64;
    if d % 2 == 1 {
        nf.powf(1.0 + 1.0 / k)
    } else {
        nf * (nf / nf.log2().max(1.0)).powf(1.0 / k)
    }
}

/// Fills a [`BoundsReport`]. Fails if the circuit is deeper than `d`.
pub fn audit_bounds(c: &RectifierCircuit, d: usize) -> Result<BoundsReport> {
    if d == 0 {
        return Err(Error::InvalidParameter("depth budget must be >= 1".into()));
    }
    let stats = c.stats();
    let base = bound_base(c.n_inputs(), d);
    let report = BoundsReport {
        n: c.n_inputs(),
        d,
        k: d.div_ceil(2),
        edges: stats.edges,
        depth_measured: stats.depth,
        nodes: stats.nodes,
        bound_base: base,
        ratio: if base > 0.0 { stats.edges as f64 / base } else { 0.0 },
    };
    Ok(report)
}

/// [`audit_bounds`] that turns a depth overrun into an error.
pub fn audit_bounds_strict(c: &RectifierCircuit, d: usize) -> Result<BoundsReport> {
    let report = audit_bounds(c, d)?;
    if !report.depth_ok() {
        return Err(Error::InvalidParameter(format!(
            "circuit depth {} exceeds budget {d}",
            report.depth_measured
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::random_kernel;
    use crate::synth::{synth, synth_trivial};

    #[test]
    fn exact_accepts_and_rejects() {
        let k = random_kernel(20, 1).unwrap();
        let c = synth(&k, 3).unwrap();
        assert!(verify_exact(&c, &k).unwrap().is_ok());

        let other = random_kernel(20, 2).unwrap();
        let t = synth_trivial(&k);
        assert!(!verify_exact(&t, &other).unwrap().is_ok());
        assert!(verify_exact(&t, &random_kernel(21, 1).unwrap()).is_err());
    }

    #[test]
    fn deleted_edge_is_located() {
        let k = random_kernel(16, 3).unwrap();
        let t = synth_trivial(&k);
        let out = t.output_node(5).unwrap();
        let pred = t.node(out).preds()[0];
        let broken = t.with_edge_toggled(pred, out).unwrap();
        match verify_exact(&broken, &k).unwrap() {
            Verification::Mismatch { row, col } => assert_eq!((row, col), (5, pred)),
            Verification::Ok => panic!("mutation not detected"),
        }
    }

    #[test]
    fn freivalds_behaviour() {
        let k = random_kernel(30, 4).unwrap();
        let c = synth(&k, 4).unwrap();
        assert!(verify_freivalds(&c, &k, 40, 9).unwrap().passed());
        assert_eq!(verify_freivalds(&c, &k, 40, 9).unwrap(), verify_freivalds(&c, &k, 40, 9).unwrap());
        assert!(verify_freivalds(&c, &k, 0, 9).is_err());

        let out = c.output_node(3).unwrap();
        let pred = c.node(out).preds()[0];
        let broken = c.with_edge_toggled(pred, out).unwrap();
        for seed in 0..5 {
            assert!(!verify_freivalds(&broken, &k, 40, seed).unwrap().passed());
        }
    }

    #[test]
    fn audit_examples() {
        let k = random_kernel(64, 5).unwrap();
        let t = synth_trivial(&k);
        let r = audit_bounds(&t, 1).unwrap();
        assert_eq!(r.edges, 64 * k.a().count_ones());
        assert!(r.ratio <= 1.0);
        assert!((r.ratio - r.edges as f64 / 4096.0).abs() < 1e-12);

        let c = synth(&k, 3).unwrap();
        assert!(audit_bounds(&c, 3).unwrap().depth_ok());
        // a depth-3 circuit audited against budget 2
        let r = audit_bounds(&c, 2).unwrap();
        assert!(!r.depth_ok());
        assert!(audit_bounds_strict(&c, 2).is_err());

        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["n", "d", "edges", "depth", "bound_base", "ratio"] {
            assert!(json.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn bound_base_values() {
        assert!((bound_base(64, 3) - 512.0).abs() < 1e-9);
        assert!((bound_base(64, 1) - 4096.0).abs() < 1e-9);
        assert!((bound_base(64, 4) - 64.0 * (64.0f64 / 6.0).sqrt()).abs() < 1e-9);
        assert!(bound_base(1, 2).is_finite());
    }
}
