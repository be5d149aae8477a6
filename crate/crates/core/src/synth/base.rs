//! Depth-1 and depth-2 constructions for arbitrary Boolean matrices.

use crate::circuit::{NodeId, RectifierCircuit};
use crate::gf2::{CirculantKernel, GF2Matrix};

/// One output per row reading the inputs at that row's ones.
pub fn trivial_for_matrix(m: &GF2Matrix) -> RectifierCircuit {
    let mut c = RectifierCircuit::new(m.cols(), m.rows());
    for row in m.row_iter() {
        c.add_output(row.ones().collect()).expect("fresh output");
    }
    c
}

/// Depth-1 circuit for the circulant of `kernel`: `n * weight` edges.
pub fn synth_trivial(kernel: &CirculantKernel) -> RectifierCircuit {
    trivial_for_matrix(&kernel.to_matrix())
}

fn block_pattern(m: &GF2Matrix, row: usize, start: usize, width: usize) -> usize {
    (0..width).fold(0, |acc, b| acc | (usize::from(m.get(row, start + b)) << b))
}

/// Edge count of the depth-2 construction with column blocks of `width`.
fn lupanov_cost(m: &GF2Matrix, width: usize) -> usize {
    let mut seen = vec![usize::MAX; 1 << width];
    let mut edges = 0;
    for (bi, start) in (0..m.cols()).step_by(width).enumerate() {
        let w = width.min(m.cols() - start);
        for r in 0..m.rows() {
            let p = block_pattern(m, r, start, w);
            if p == 0 {
                continue;
            }
            edges += 1;
            if seen[p] != bi {
                seen[p] = bi;
                let ones = p.count_ones() as usize;
                if ones > 1 {
                    edges += ones;
                }
            }
        }
    }
    edges
}

/// Block width with the fewest edges among `1..=max(1, floor(log2 cols))`.
/// Ties go to the narrower block.
pub fn lupanov_block_width(m: &GF2Matrix) -> usize {
    let max_width = (usize::BITS - 1 - m.cols().max(1).leading_zeros()).max(1) as usize;
    (1..=max_width.min(20))
        .min_by_key(|&w| (lupanov_cost(m, w), w))
        .unwrap_or(1)
}

/// Depth-2 circuit: columns are cut into blocks; per block, every distinct
/// nonzero row pattern gets one shared middle node, and each output reads
/// the middle node of its pattern in every block. A single-column pattern
/// reads the input directly.
pub fn lupanov_for_matrix_with_width(m: &GF2Matrix, width: usize) -> RectifierCircuit {
    assert!(width >= 1);
    let mut c = RectifierCircuit::new(m.cols(), m.rows());
    let mut row_preds: Vec<Vec<NodeId>> = vec![Vec::new(); m.rows()];
    let mut node_of = vec![(usize::MAX, 0usize); 1 << width.min(20)];
    for (bi, start) in (0..m.cols()).step_by(width).enumerate() {
        let w = width.min(m.cols() - start);
        for (r, preds) in row_preds.iter_mut().enumerate() {
            let p = block_pattern(m, r, start, w);
            if p == 0 {
                continue;
            }
            let (stamp, id) = node_of[p];
            let id = if stamp == bi {
                id
            } else {
                let cols: Vec<NodeId> = (0..w).filter(|b| p >> b & 1 == 1).map(|b| start + b).collect();
                let id = if cols.len() == 1 {
                    cols[0]
                } else {
                    c.add_inner(cols).expect("inputs precede middle nodes")
                };
                node_of[p] = (bi, id);
                id
            };
            preds.push(id);
        }
    }
    for preds in row_preds {
        c.add_output(preds).expect("fresh output");
    }
    c
}

pub fn lupanov_for_matrix(m: &GF2Matrix) -> RectifierCircuit {
    lupanov_for_matrix_with_width(m, lupanov_block_width(m))
}

/// Depth-2 Lupanov circuit for the circulant of `kernel`.
pub fn synth_lupanov(kernel: &CirculantKernel) -> RectifierCircuit {
    lupanov_for_matrix(&kernel.to_matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::{random_kernel, BitVector};

    fn kernel(first_row: &str) -> CirculantKernel {
        CirculantKernel::from_first_row(&first_row.parse().unwrap()).unwrap()
    }

    #[test]
    fn trivial_examples() {
        assert_eq!(synth_trivial(&kernel("0000")).edge_count(), 0);
        let id = synth_trivial(&kernel("10000"));
        assert_eq!(id.edge_count(), 5);
        assert_eq!(id.depth(), 1);
        assert_eq!(synth_trivial(&kernel("1010")).edge_count(), 8);
        let k = random_kernel(8, 1).unwrap();
        let c = synth_trivial(&k);
        assert_eq!(c.edge_count(), 8 * k.a().count_ones());
        assert_eq!(c.realized_matrix(), k.to_matrix());
    }

    #[test]
    fn lupanov_examples() {
        let id = synth_lupanov(&kernel("1000000000000000"));
        assert!(id.edge_count() <= 32);
        assert_eq!(id.realized_matrix(), GF2Matrix::identity(16));
        let zero = synth_lupanov(&CirculantKernel::new(BitVector::zeros(16)).unwrap());
        assert_eq!(zero.edge_count(), 0);
    }

    #[test]
    fn lupanov_exact_for_every_width() {
        for n in [1, 2, 7, 33, 64] {
            let k = random_kernel(n, 5).unwrap();
            let m = k.to_matrix();
            for w in 1..=7 {
                let c = lupanov_for_matrix_with_width(&m, w);
                assert_eq!(c.realized_matrix(), m, "n={n} w={w}");
                assert!(c.depth() <= 2);
                assert_eq!(c.edge_count(), lupanov_cost(&m, w));
            }
        }
    }

    #[test]
    fn lupanov_beats_trivial_when_dense() {
        let k = random_kernel(512, 2).unwrap();
        let lup = synth_lupanov(&k).edge_count();
        assert!(lup < 512 * 512 / 2, "{lup}");
        assert!(lup < synth_trivial(&k).edge_count());
    }
}
