//! Bounded-depth modulo-2 rectifier circuits (XOR networks) for linear maps
//! with circulant matrices over GF(2).
//!
//! * [`gf2`]: bit vectors, matrices, the reference cyclic convolution.
//! * [`ring`]: arithmetic in `GF(2)[y]/(y^(2*3^s)+y^(3^s)+1)` and its DFT.
//! * [`circuit`]: the circuit DAG, its semantics and serialization.
//! * [`synth`]: the trivial, Lupanov and recursive DFT constructions.
//! * [`verify`]: exact and randomized checking, size/depth audits.
//! * [`cli`]: the command-line front end used by the `circsynth` binary.
//!
//! ```
//! use circsynth::{gf2::random_kernel, synth::synth, verify::verify_exact};
//!
//! let kernel = random_kernel(27, 1).unwrap();
//! let circuit = synth(&kernel, 3).unwrap();
//! assert!(circuit.depth() <= 3);
//! assert!(verify_exact(&circuit, &kernel).unwrap().is_ok());
//! ```

pub mod circuit;
pub mod cli;
pub mod error;
pub mod gf2;
pub mod ring;
pub mod synth;
pub mod verify;

pub use circuit::{CircuitStats, NodeKind, RectifierCircuit};
pub use error::{Error, Result};
pub use gf2::{BitVector, CirculantKernel, GF2Matrix};
