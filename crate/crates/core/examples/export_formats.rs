//! Circuit JSON round trip and DOT export.
//!
//! ```bash
//! cargo run --example export_formats -- /tmp/circuit
//! ```

use std::path::PathBuf;

use circsynth::circuit::{from_json, to_dot, to_json};
use circsynth::gf2::CirculantKernel;
use circsynth::synth::synth;

fn main() -> anyhow::Result<()> {
    let stem = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "circuit".into()));
    let k = CirculantKernel::parse_first_row_text("9\n110100100\n")?;
    let c = synth(&k, 3)?;

    let json = to_json(&c);
    let back = from_json(&json)?;
    assert_eq!(back.stats(), c.stats());
    assert_eq!(to_json(&back), json);

    std::fs::write(stem.with_extension("json"), &json)?;
    std::fs::write(stem.with_extension("dot"), to_dot(&c))?;
    println!("{}", serde_json::to_string(&c.stats())?);
    println!("wrote {} and {}", stem.with_extension("json").display(), stem.with_extension("dot").display());
    Ok(())
}
