//! Modulo-2 rectifier circuits.
//!
//! A circuit is a DAG whose nodes are numbered topologically: every
//! predecessor id is smaller than the node's own id. Entry `(i, j)` of the
//! realized matrix is the parity of the number of paths from input `j` to
//! output `i`, which is the same as evaluating every node as the XOR of its
//! predecessors.
//!
//! Predecessor lists are sets. Two parallel edges contribute path pairs that
//! cancel mod 2, so they are removed at construction time.

mod io;

pub use io::{from_json, to_dot, to_json};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{BitVector, GF2Matrix};

pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Input(usize),
    Inner,
    Output(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    kind: NodeKind,
    preds: Vec<NodeId>,
}

impl Node {
    pub fn kind(&self) -> NodeKind {
        self.kind
    }

    /// Sorted, duplicate-free predecessor ids.
    pub fn preds(&self) -> &[NodeId] {
        &self.preds
    }
}

/// Size and depth of a circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CircuitStats {
    pub n_inputs: usize,
    pub n_outputs: usize,
    pub nodes: usize,
    pub edges: usize,
    pub depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RectifierCircuit {
    n_inputs: usize,
    n_outputs: usize,
    nodes: Vec<Node>,
    input_nodes: Vec<NodeId>,
    output_nodes: Vec<Option<NodeId>>,
    next_output: usize,
}

/// Sorts `ids` and removes pairs of equal entries.
pub(crate) fn xor_reduce(mut ids: Vec<NodeId>) -> Vec<NodeId> {
    ids.sort_unstable();
    let mut out = Vec::with_capacity(ids.len());
    for id in ids {
        if out.last() == Some(&id) {
            out.pop();
        } else {
            out.push(id);
        }
    }
    out
}

impl RectifierCircuit {
    /// A circuit holding only its input nodes, with ids `0..n_inputs`.
    pub fn new(n_inputs: usize, n_outputs: usize) -> Self {
        Self {
            n_inputs,
            n_outputs,
            nodes: (0..n_inputs)
                .map(|i| Node {
                    kind: NodeKind::Input(i),
                    preds: Vec::new(),
                })
                .collect(),
            input_nodes: (0..n_inputs).collect(),
            output_nodes: vec![None; n_outputs],
            next_output: 0,
        }
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn n_outputs(&self) -> usize {
        self.n_outputs
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn input_node(&self, index: usize) -> NodeId {
        self.input_nodes[index]
    }

    pub fn input_nodes(&self) -> &[NodeId] {
        &self.input_nodes
    }

    pub fn output_node(&self, index: usize) -> Option<NodeId> {
        self.output_nodes[index]
    }

    /// True once every output index has been assigned.
    pub fn is_complete(&self) -> bool {
        self.output_nodes.iter().all(Option::is_some)
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.iter().map(|n| n.preds.len()).sum()
    }

    fn push_node(&mut self, kind: NodeKind, preds: Vec<NodeId>) -> Result<NodeId> {
        let id = self.nodes.len();
        let preds = xor_reduce(preds);
        if let Some(&bad) = preds.last() {
            if bad >= id {
                return Err(Error::Schema {
                    node: id,
                    msg: format!("predecessor {bad} is not an earlier node"),
                });
            }
        }
        match kind {
            NodeKind::Output(o) => {
                if o >= self.n_outputs {
                    return Err(Error::OutOfRange {
                        what: "output index",
                        value: o,
                        limit: self.n_outputs,
                    });
                }
                if self.output_nodes[o].is_some() {
                    return Err(Error::Schema {
                        node: id,
                        msg: format!("output index {o} already assigned"),
                    });
                }
                self.output_nodes[o] = Some(id);
            }
            NodeKind::Input(_) => {
                return Err(Error::Schema {
                    node: id,
                    msg: "input nodes are created with the circuit".into(),
                })
            }
            NodeKind::Inner => {}
        }
        self.nodes.push(Node { kind, preds });
        Ok(id)
    }

    /// Adds an inner node computing the XOR of `preds`.
    pub fn add_inner(&mut self, preds: Vec<NodeId>) -> Result<NodeId> {
        self.push_node(NodeKind::Inner, preds)
    }

    /// Adds an output node with the next unassigned output index.
    pub fn add_output(&mut self, preds: Vec<NodeId>) -> Result<NodeId> {
        let o = self.next_output;
        if o >= self.n_outputs {
            return Err(Error::Schema {
                node: self.nodes.len(),
                msg: format!("all {} outputs are already assigned", self.n_outputs),
            });
        }
        let id = self.push_node(NodeKind::Output(o), preds)?;
        self.next_output += 1;
        Ok(id)
    }

    /// Adds one node per row, reading `sources[t]` for every `t` in the row.
    /// With `as_outputs` the new nodes take consecutive output indices.
    pub fn add_linear_layer(
        &mut self,
        sources: &[NodeId],
        rows: &[Vec<usize>],
        as_outputs: bool,
    ) -> Result<Vec<NodeId>> {
        if as_outputs && self.next_output + rows.len() > self.n_outputs {
            return Err(Error::Schema {
                node: self.nodes.len(),
                msg: format!(
                    "layer of {} outputs exceeds the {} remaining output indices",
                    rows.len(),
                    self.n_outputs - self.next_output
                ),
            });
        }
        rows.iter()
            .map(|row| {
                let preds = row
                    .iter()
                    .map(|&t| {
                        sources.get(t).copied().ok_or(Error::OutOfRange {
                            what: "layer source index",
                            value: t,
                            limit: sources.len(),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                if as_outputs {
                    self.add_output(preds)
                } else {
                    self.add_inner(preds)
                }
            })
            .collect()
    }

    /// Copies `sub` into this circuit, identifying sub's input `i` with
    /// `attach_ids[i]`. Sub's outputs become inner nodes. Returns the new id
    /// of every sub node.
    pub fn splice(&mut self, attach_ids: &[NodeId], sub: &RectifierCircuit) -> Result<Vec<NodeId>> {
        if attach_ids.len() != sub.n_inputs {
            return Err(Error::LengthMismatch {
                expected: sub.n_inputs,
                found: attach_ids.len(),
            });
        }
        if let Some(&bad) = attach_ids.iter().find(|&&a| a >= self.nodes.len()) {
            return Err(Error::OutOfRange {
                what: "attach node id",
                value: bad,
                limit: self.nodes.len(),
            });
        }
        let mut map = Vec::with_capacity(sub.nodes.len());
        for node in &sub.nodes {
            let id = match node.kind {
                NodeKind::Input(i) => attach_ids[i],
                _ => self.add_inner(node.preds.iter().map(|&p| map[p]).collect())?,
            };
            map.push(id);
        }
        Ok(map)
    }

    /// Longest path (in edges) ending at each node.
    pub fn node_depths(&self) -> Vec<usize> {
        let mut depth = vec![0usize; self.nodes.len()];
        for (id, node) in self.nodes.iter().enumerate() {
            depth[id] = node.preds.iter().map(|&p| depth[p] + 1).max().unwrap_or(0);
        }
        depth
    }

    pub fn depth(&self) -> usize {
        self.node_depths().into_iter().max().unwrap_or(0)
    }

    pub fn stats(&self) -> CircuitStats {
        CircuitStats {
            n_inputs: self.n_inputs,
            n_outputs: self.n_outputs,
            nodes: self.nodes.len(),
            edges: self.edge_count(),
            depth: self.depth(),
        }
    }

    /// The `n_outputs x n_inputs` matrix of path-count parities.
    pub fn realized_matrix(&self) -> GF2Matrix {
        let n = self.n_inputs;
        let input_map: Vec<Option<usize>> = (0..n).map(Some).collect();
        let (buf, stride) = self.node_functions(&input_map, n);
        let rows = self
            .output_nodes
            .iter()
            .map(|o| match o {
                Some(id) => {
                    let words = &buf[id * stride..(id + 1) * stride];
                    BitVector::from_ones(
                        n,
                        (0..n).filter(|&j| (words[j / 64] >> (j % 64)) & 1 == 1),
                    )
                }
                None => BitVector::zeros(n),
            })
            .collect();
        GF2Matrix::from_rows(n, rows).expect("rows have n_inputs columns")
    }

    /// Input support of every node as packed bit rows of `stride` words,
    /// with old input `i` mapped to column `input_map[i]` (or tied to 0).
    fn node_functions(&self, input_map: &[Option<usize>], cols: usize) -> (Vec<u64>, usize) {
        let stride = cols.div_ceil(64).max(1);
        let mut buf = vec![0u64; stride * self.nodes.len()];
        for id in 0..self.nodes.len() {
            let (done, rest) = buf.split_at_mut(id * stride);
            let row = &mut rest[..stride];
            match self.nodes[id].kind {
                NodeKind::Input(i) => {
                    if let Some(j) = input_map[i] {
                        row[j / 64] |= 1 << (j % 64);
                    }
                }
                _ => {
                    for &p in &self.nodes[id].preds {
                        for (a, b) in row.iter_mut().zip(&done[p * stride..(p + 1) * stride]) {
                            *a ^= b;
                        }
                    }
                }
            }
        }
        (buf, stride)
    }

    /// Values of every node on input `x`.
    fn node_values(&self, x: &BitVector) -> Result<Vec<bool>> {
        if x.len() != self.n_inputs {
            return Err(Error::LengthMismatch {
                expected: self.n_inputs,
                found: x.len(),
            });
        }
        let mut val = vec![false; self.nodes.len()];
        for id in 0..self.nodes.len() {
            val[id] = match self.nodes[id].kind {
                NodeKind::Input(i) => x.get(i),
                _ => self.nodes[id].preds.iter().fold(false, |acc, &p| acc ^ val[p]),
            };
        }
        Ok(val)
    }

    /// Output values on input `x` (unassigned outputs read as 0).
    pub fn evaluate(&self, x: &BitVector) -> Result<BitVector> {
        let val = self.node_values(x)?;
        Ok(BitVector::from_bools(
            self.output_nodes.iter().map(|o| o.is_some_and(|id| val[id])),
        ))
    }

    /// Rebuilds the circuit keeping only nodes that can influence the chosen
    /// outputs. `input_map[i]` is the new index of old input `i`, or `None` if
    /// the input is tied to zero. `outputs[k]` is the old node that becomes
    /// output `k`. Nodes computing the zero function are dropped; a zero output
    /// keeps no predecessors.
    fn rebuild(&self, input_map: &[Option<usize>], n_new_inputs: usize, outputs: &[NodeId]) -> Result<RectifierCircuit> {
        let len = self.nodes.len();
        let mut out_index = vec![None; len];
        for (k, &id) in outputs.iter().enumerate() {
            if id >= len {
                return Err(Error::OutOfRange {
                    what: "output node id",
                    value: id,
                    limit: len,
                });
            }
            if matches!(self.nodes[id].kind, NodeKind::Input(_)) {
                return Err(Error::Schema {
                    node: id,
                    msg: "an input cannot also be an output".into(),
                });
            }
            if out_index[id].replace(k).is_some() {
                return Err(Error::Schema {
                    node: id,
                    msg: "node selected as output twice".into(),
                });
            }
        }

        let (funcs, stride) = self.node_functions(input_map, n_new_inputs);
        let zero: Vec<bool> = funcs.chunks(stride).map(|row| row.iter().all(|&w| w == 0)).collect();
        let mut live = vec![false; len];
        for &id in outputs {
            live[id] = true;
        }
        for id in (0..len).rev() {
            if live[id] && !zero[id] {
                for &p in &self.nodes[id].preds {
                    if !zero[p] {
                        live[p] = true;
                    }
                }
            }
        }

        let mut c = RectifierCircuit::new(n_new_inputs, outputs.len());
        let mut map: Vec<Option<NodeId>> = vec![None; len];
        for (id, node) in self.nodes.iter().enumerate() {
            match node.kind {
                NodeKind::Input(i) => map[id] = input_map[i].map(|k| c.input_nodes[k]),
                _ if live[id] => {
                    let preds: Vec<NodeId> = if zero[id] {
                        Vec::new()
                    } else {
                        node.preds.iter().filter_map(|&p| map[p]).collect()
                    };
                    let kind = out_index[id].map_or(NodeKind::Inner, NodeKind::Output);
                    map[id] = Some(c.push_node(kind, preds)?);
                }
                _ => {}
            }
        }
        c.next_output = outputs.len();
        Ok(c)
    }

    /// Removes nodes that reach no output and nodes that compute 0.
    pub fn pruned(&self) -> RectifierCircuit {
        let input_map: Vec<Option<usize>> = (0..self.n_inputs).map(Some).collect();
        let mut c = self.clone();
        // unassigned outputs get an explicit zero node so indices stay fixed
        for o in 0..self.n_outputs {
            if c.output_nodes[o].is_none() {
                c.push_node(NodeKind::Output(o), Vec::new()).expect("fresh output index");
            }
        }
        let outputs: Vec<NodeId> = c.output_nodes.iter().map(|o| o.expect("assigned")).collect();
        c.rebuild(&input_map, self.n_inputs, &outputs)
            .expect("pruning a valid circuit cannot fail")
    }

    /// Keeps the listed inputs (in order, the rest tied to 0) and the listed
    /// outputs (in order), then prunes.
    pub fn restrict(&self, inputs: &[usize], outputs: &[usize]) -> Result<RectifierCircuit> {
        let mut input_map = vec![None; self.n_inputs];
        for (k, &i) in inputs.iter().enumerate() {
            if i >= self.n_inputs {
                return Err(Error::OutOfRange {
                    what: "input index",
                    value: i,
                    limit: self.n_inputs,
                });
            }
            if input_map[i].replace(k).is_some() {
                return Err(Error::InvalidParameter(format!("input {i} listed twice")));
            }
        }
        let mut c = self.clone();
        let mut out_ids = Vec::with_capacity(outputs.len());
        for &o in outputs {
            if o >= self.n_outputs {
                return Err(Error::OutOfRange {
                    what: "output index",
                    value: o,
                    limit: self.n_outputs,
                });
            }
            let id = match c.output_nodes[o] {
                Some(id) => id,
                None => c.push_node(NodeKind::Output(o), Vec::new())?,
            };
            out_ids.push(id);
        }
        c.rebuild(&input_map, inputs.len(), &out_ids)
    }

    /// New circuit whose output `k` is the XOR of the old outputs in
    /// `rows[k]`. The merge is folded into the output nodes' predecessor
    /// sets, so depth does not grow.
    pub fn map_outputs(&self, rows: &[Vec<usize>]) -> Result<RectifierCircuit> {
        let mut c = self.clone();
        for o in 0..self.n_outputs {
            if c.output_nodes[o].is_none() {
                c.push_node(NodeKind::Output(o), Vec::new())?;
            }
        }
        let old_outputs: Vec<NodeId> = c.output_nodes.iter().map(|o| o.expect("assigned")).collect();
        let mut new_ids = Vec::with_capacity(rows.len());
        for row in rows {
            let mut preds = Vec::new();
            for &o in row {
                let id = *old_outputs.get(o).ok_or(Error::OutOfRange {
                    what: "output index",
                    value: o,
                    limit: self.n_outputs,
                })?;
                preds.extend_from_slice(&c.nodes[id].preds);
            }
            new_ids.push(c.add_inner(preds)?);
        }
        let input_map: Vec<Option<usize>> = (0..self.n_inputs).map(Some).collect();
        let mut out = c.rebuild(&input_map, self.n_inputs, &new_ids)?;
        out.n_outputs = rows.len();
        Ok(out)
    }

    /// Copy of the circuit with the edge `from -> to` added if absent or
    /// removed if present.
    pub fn with_edge_toggled(&self, from: NodeId, to: NodeId) -> Result<RectifierCircuit> {
        if from >= to || to >= self.nodes.len() {
            return Err(Error::InvalidParameter(format!("edge {from} -> {to} breaks topological order")));
        }
        if matches!(self.nodes[to].kind, NodeKind::Input(_)) {
            return Err(Error::Schema {
                node: to,
                msg: "input nodes have no predecessors".into(),
            });
        }
        let mut c = self.clone();
        let mut preds = c.nodes[to].preds.clone();
        preds.push(from);
        c.nodes[to].preds = xor_reduce(preds);
        Ok(c)
    }

    /// Assembles a circuit from already validated parts (used by the JSON reader).
    pub(crate) fn from_parts(n_inputs: usize, n_outputs: usize, nodes: Vec<(NodeKind, Vec<NodeId>)>) -> Result<Self> {
        let mut input_nodes = vec![None; n_inputs];
        let mut output_nodes = vec![None; n_outputs];
        let mut out = Vec::with_capacity(nodes.len());
        for (id, (kind, preds)) in nodes.into_iter().enumerate() {
            match kind {
                NodeKind::Input(i) => {
                    if i >= n_inputs {
                        return Err(Error::Schema {
                            node: id,
                            msg: format!("input index {i} >= n_inputs {n_inputs}"),
                        });
                    }
                    if input_nodes[i].replace(id).is_some() {
                        return Err(Error::Schema {
                            node: id,
                            msg: format!("duplicate input index {i}"),
                        });
                    }
                    if !preds.is_empty() {
                        return Err(Error::Schema {
                            node: id,
                            msg: "input node has predecessors".into(),
                        });
                    }
                }
                NodeKind::Output(o) => {
                    if o >= n_outputs {
                        return Err(Error::Schema {
                            node: id,
                            msg: format!("output index {o} >= n_outputs {n_outputs}"),
                        });
                    }
                    if output_nodes[o].replace(id).is_some() {
                        return Err(Error::Schema {
                            node: id,
                            msg: format!("duplicate output index {o}"),
                        });
                    }
                }
                NodeKind::Inner => {}
            }
            for w in preds.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::Schema {
                        node: id,
                        msg: "predecessors must be strictly increasing".into(),
                    });
                }
            }
            if let Some(&p) = preds.last() {
                if p >= id {
                    return Err(Error::Schema {
                        node: id,
                        msg: format!("predecessor {p} is not an earlier node"),
                    });
                }
            }
            out.push(Node { kind, preds });
        }
        let input_nodes = input_nodes
            .into_iter()
            .enumerate()
            .map(|(i, n)| n.ok_or_else(|| Error::Malformed(format!("input index {i} missing"))))
            .collect::<Result<Vec<_>>>()?;
        if let Some(o) = output_nodes.iter().position(Option::is_none) {
            return Err(Error::Malformed(format!("output index {o} missing")));
        }
        Ok(Self {
            n_inputs,
            n_outputs,
            nodes: out,
            input_nodes,
            output_nodes,
            next_output: n_outputs,
        })
    }
}
