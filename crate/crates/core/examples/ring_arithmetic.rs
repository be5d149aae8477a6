//! Arithmetic in GF(2)[y]/(y^(2*3^s) + y^(3^s) + 1) and the ternary DFT.
//!
//! ```bash
//! cargo run --example ring_arithmetic
//! ```

use circsynth::gf2::BitVector;
use circsynth::ring::{dft_points, ring_mul, y_pow, zeta, RingContext, RingElement};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> circsynth::Result<()> {
    let ctx = RingContext::new(1);
    println!("s = 1: ring degree {}, y has order {}", ctx.deg(), ctx.y_order());

    // y^3 * y^3 = y^6 = y^3 + 1
    let y3 = y_pow(ctx, 3);
    println!("y^3 * y^3 = {}", ring_mul(&y3, &y3)?.coeffs());

    for m in 1..=2 {
        let z = zeta(ctx, m)?;
        let order = (1..=ctx.y_order() as u64).find(|&e| z.pow(e).is_one()).unwrap();
        println!("zeta({m}) = {} has order {order}", z.coeffs());
    }

    // DFT of length 9 followed by the inverse DFT gives 9 * v = v.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let v: Vec<RingElement> = (0..9)
        .map(|_| RingElement::from_coeffs(ctx, BitVector::random(ctx.deg(), &mut rng)))
        .collect::<Result<_, _>>()?;
    let back = dft_points(&dft_points(&v, 2, false)?, 2, true)?;
    println!("DFT round trip at m = 2: {}", if back == v { "identity" } else { "BROKEN" });
    Ok(())
}
