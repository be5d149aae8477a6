//! The recursive construction for depth `d >= 3`.
//!
//! The input vector is cut into `q` blocks of `block_len` bits, each read as
//! an element of the ring `R` (see [`crate::ring`]). The circuit then
//!
//! 1. evaluates `B(x) = sum B_i x^i` at the `3^m` powers of the root
//!    `zeta` (one depth-1 layer, every monomial lands on at most two ring
//!    positions),
//! 2. multiplies each point value by the constant `A(zeta^j)` with a
//!    depth-`(d-2)` sub-circuit built recursively from a circulant of order
//!    `4 * 3^s`, reduced modulo the ring's trinomial inside the sub-circuit's
//!    output layer,
//! 3. recovers the product coefficients by the inverse DFT, overlap-adds them
//!    at stride `block_len` and folds index `t + n` onto `t` (one depth-1
//!    layer).

use rayon::prelude::*;

use super::plan::{plan_parameters, SynthPlan, ToomParams};
use crate::circuit::{xor_reduce, NodeId, RectifierCircuit};
use crate::error::{Error, Result};
use crate::gf2::{BitVector, CirculantKernel};
use crate::ring::{monomial_support, poly_eval_horner, reduction_support, y_pow, zeta_exponent, RingContext, RingElement};

/// Everything the assembly step needs for one level.
#[derive(Clone, Debug)]
pub struct ToomStageData {
    /// Stage-1 rows, index `j * ring_deg + p`, over the circuit inputs.
    pub eval_rows: Vec<Vec<usize>>,
    /// `A(zeta^j)` for every point `j`.
    pub constants: Vec<RingElement>,
    /// Stage-3 rows, one per output, over the reduced products, index
    /// `j * ring_deg + w`.
    pub recomb_rows: Vec<Vec<usize>>,
}

impl ToomStageData {
    pub fn build(plan: &SynthPlan, kernel: &CirculantKernel) -> Result<Self> {
        Ok(Self {
            eval_rows: evaluation_rows(plan)?,
            constants: constant_points(plan, kernel)?,
            recomb_rows: recombination_rows(plan)?,
        })
    }

    pub fn eval_edges(&self) -> usize {
        self.eval_rows.iter().map(Vec::len).sum()
    }

    pub fn recomb_edges(&self) -> usize {
        self.recomb_rows.iter().map(Vec::len).sum()
    }

    /// Points whose products feed at least one output.
    pub fn live_points(&self, plan: &SynthPlan) -> Vec<bool> {
        let t = toom_params(plan).expect("toom plan");
        let deg = t.ring_deg();
        let mut live = vec![false; t.points()];
        for row in &self.recomb_rows {
            for &src in row {
                live[src / deg] = true;
            }
        }
        live
    }
}

fn toom_params(plan: &SynthPlan) -> Result<&ToomParams> {
    plan.toom()
        .ok_or_else(|| Error::InvalidParameter(format!("plan for n={} d={} is not recursive", plan.n, plan.d)))
}

fn ring_of(t: &ToomParams) -> RingContext {
    RingContext::new(t.s)
}

/// Exponent of `zeta^(i*j)` as a power of `y`.
fn root_power(ctx: RingContext, t: &ToomParams, i: usize, j: usize) -> usize {
    let step = zeta_exponent(ctx, t.m).expect("planner guarantees m <= s + 1");
    (step * ((i * j) % t.points())) % ctx.y_order()
}

/// Stage 1: bit `p` of `B(zeta^j) = sum_i B_i zeta^(ij)` as a set of inputs.
pub fn evaluation_rows(plan: &SynthPlan) -> Result<Vec<Vec<usize>>> {
    let t = toom_params(plan)?;
    let ctx = ring_of(t);
    let deg = ctx.deg();
    let mut rows = vec![Vec::new(); t.points() * deg];
    for j in 0..t.points() {
        for i in 0..t.q {
            let e = root_power(ctx, t, i, j);
            for u in 0..t.block_len {
                let x = i * t.block_len + u;
                if x >= plan.n {
                    break;
                }
                for &p in &monomial_support(ctx, u, e) {
                    rows[j * deg + p].push(x);
                }
            }
        }
    }
    Ok(rows.into_iter().map(xor_reduce).collect())
}

/// Splits a length-`n` kernel into `q` ring elements of `block_len` low
/// coefficients each.
pub fn kernel_blocks(plan: &SynthPlan, kernel: &CirculantKernel) -> Result<Vec<RingElement>> {
    let t = toom_params(plan)?;
    if kernel.n() != plan.n {
        return Err(Error::LengthMismatch {
            expected: plan.n,
            found: kernel.n(),
        });
    }
    let ctx = ring_of(t);
    (0..t.q)
        .map(|i| {
            let lo = i * t.block_len;
            let ones = kernel
                .a()
                .ones()
                .filter(|&x| x >= lo && x < lo + t.block_len)
                .map(|x| x - lo);
            RingElement::from_coeffs(ctx, BitVector::from_ones(ctx.deg(), ones))
        })
        .collect()
}

/// Stage-2 constants `A(zeta^j)` by Horner evaluation.
pub fn constant_points(plan: &SynthPlan, kernel: &CirculantKernel) -> Result<Vec<RingElement>> {
    let t = toom_params(plan)?;
    let ctx = ring_of(t);
    let blocks = kernel_blocks(plan, kernel)?;
    (0..t.points())
        .map(|j| poly_eval_horner(&blocks, &y_pow(ctx, root_power(ctx, t, 1, j))))
        .collect()
}

/// Circuit with `2*3^s` inputs and `4*3^s - 1` outputs computing the raw,
/// unreduced polynomial product of its input with `value`, at depth `<= d`.
///
/// The product is embedded in a cyclic convolution of order `4*3^s`, long
/// enough that nothing wraps around; the unused inputs and the last output are
/// dropped after synthesis.
pub fn synth_constant_mult(value: &RingElement, d: usize) -> Result<RectifierCircuit> {
    let ctx = value.ctx();
    let deg = ctx.deg();
    let len = 4 * ctx.third();
    let kernel = CirculantKernel::new(BitVector::from_ones(len, value.coeffs().ones()))?;
    let full = super::synth(&kernel, d)?;
    full.restrict(&(0..deg).collect::<Vec<_>>(), &(0..len - 1).collect::<Vec<_>>())
}

/// [`synth_constant_mult`] with the modular reduction merged into the output
/// layer: `2*3^s` inputs and outputs, realizing multiplication by `value` in
/// `R`. Each raw coefficient feeds at most two reduced outputs.
pub fn synth_ring_mult(value: &RingElement, d: usize) -> Result<RectifierCircuit> {
    let ctx = value.ctx();
    let raw = synth_constant_mult(value, d)?;
    let mut rows = vec![Vec::new(); ctx.deg()];
    for r in 0..4 * ctx.third() - 1 {
        for &w in &reduction_support(ctx, r)? {
            rows[w].push(r);
        }
    }
    raw.map_outputs(&rows)
}

fn sym_diff(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn sym_diff_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut common) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    a.len() + b.len() - 2 * common
}

/// Stage 3: one row per output over the reduced point products.
///
/// Coefficient `p` of `C_i = sum_j P_j zeta^(-ij)` reads the point-product
/// bits whose monomial shifted by `zeta^(-ij)` lands on `p`. Output `t`
/// collects every coefficient `(i, p)` with `(i*block_len + p) mod n = t`.
///
/// Coefficients with `i >= 2q - 1` or `p >= 2*block_len - 1` are identically
/// zero on genuine products (the product has lower degree in both `x` and
/// `y`). They may be added to a row without changing the realized map, and
/// are added greedily whenever they shrink it. When the block structure is
/// compatible with the cyclic fold this cancels the contributions of all
/// points that are not roots of `x^n - 1`.
pub fn recombination_rows(plan: &SynthPlan) -> Result<Vec<Vec<usize>>> {
    let t = toom_params(plan)?;
    let ctx = ring_of(t);
    let deg = ctx.deg();
    let points = t.points();
    let n = plan.n;

    let mut coef: Vec<Vec<usize>> = vec![Vec::new(); points * deg];
    for i in 0..points {
        for j in 0..points {
            let e = ctx.neg_exponent(root_power(ctx, t, i, j));
            for w in 0..deg {
                for &p in &monomial_support(ctx, w, e) {
                    coef[i * deg + p].push(j * deg + w);
                }
            }
        }
    }
    let coef: Vec<Vec<usize>> = coef.into_iter().map(xor_reduce).collect();

    let real_i = 2 * t.q - 1;
    let real_p = 2 * t.block_len - 1;
    let mut terms = vec![Vec::new(); n];
    let mut spare = vec![Vec::new(); n];
    for i in 0..points {
        for p in 0..deg {
            let target = (i * t.block_len + p) % n;
            if i < real_i && p < real_p {
                terms[target].push(i * deg + p);
            } else {
                spare[target].push(i * deg + p);
            }
        }
    }

    Ok(terms
        .into_par_iter()
        .zip(spare.into_par_iter())
        .map(|(terms, spare)| {
            let mut row = Vec::new();
            for c in terms {
                row = sym_diff(&row, &coef[c]);
            }
            let mut unused = spare;
            loop {
                let best = unused
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| (sym_diff_len(&row, &coef[c]), k))
                    .min();
                match best {
                    Some((len, k)) if len < row.len() => {
                        let c = unused.swap_remove(k);
                        row = sym_diff(&row, &coef[c]);
                    }
                    _ => break,
                }
            }
            row
        })
        .collect())
}

/// Builds the depth-`d` circuit for a plan of kind toom.
pub fn synth_toom_with_plan(plan: &SynthPlan, kernel: &CirculantKernel) -> Result<RectifierCircuit> {
    let t = toom_params(plan)?;
    let data = ToomStageData::build(plan, kernel)?;
    let deg = t.ring_deg();
    let n = plan.n;
    let live = data.live_points(plan);

    let subs: Vec<Option<RectifierCircuit>> = data
        .constants
        .par_iter()
        .zip(live.par_iter())
        .map(|(value, &is_live)| {
            if is_live {
                synth_ring_mult(value, plan.d - 2).map(Some)
            } else {
                Ok(None)
            }
        })
        .collect::<Result<_>>()?;

    let mut c = RectifierCircuit::new(n, n);
    let mut stage1: Vec<Vec<NodeId>> = vec![Vec::new(); t.points()];
    for (j, is_live) in live.iter().enumerate() {
        if !is_live {
            continue;
        }
        for p in 0..deg {
            let row = &data.eval_rows[j * deg + p];
            let id = match row.as_slice() {
                [single] => c.input_node(*single),
                _ => c.add_inner(row.iter().map(|&x| c.input_node(x)).collect())?,
            };
            stage1[j].push(id);
        }
    }

    let mut sources = vec![NodeId::MAX; t.points() * deg];
    for (j, sub) in subs.iter().enumerate() {
        if let Some(sub) = sub {
            let map = c.splice(&stage1[j], sub)?;
            for w in 0..deg {
                let out = sub.output_node(w).expect("complete sub-circuit");
                sources[j * deg + w] = map[out];
            }
        }
    }
    c.add_linear_layer(&sources, &data.recomb_rows, true)?;
    Ok(c.pruned())
}

/// Recursive synthesis; requires `d >= 3`. Small sizes for which the planner
/// finds no feasible split fall back to the base construction.
pub fn synth_toom(kernel: &CirculantKernel, d: usize) -> Result<RectifierCircuit> {
    if d < 3 {
        return Err(Error::InvalidParameter(format!("recursive synthesis needs depth >= 3, got {d}")));
    }
    let plan = plan_parameters(kernel.n(), d)?;
    super::synth_with_plan(&plan, kernel)
}
