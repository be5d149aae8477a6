//! JSON and DOT encodings of circuits.
//!
//! JSON layout:
//! `{"version":1,"n_inputs":N,"n_outputs":M,"nodes":[{"id":..,"kind":"input"|"inner"|"output","index":..,"preds":[..]}]}`
//! with ids strictly increasing and preds sorted ascending. `index` appears on
//! input and output nodes only, `preds` on inner and output nodes only.

use std::collections::HashMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{NodeKind, RectifierCircuit};
use crate::error::{Error, Result};

const VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitDoc {
    version: u32,
    n_inputs: usize,
    n_outputs: usize,
    nodes: Vec<NodeDoc>,
}

#[derive(Serialize, Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum KindDoc {
    Input,
    Inner,
    Output,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    id: usize,
    kind: KindDoc,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    preds: Option<Vec<usize>>,
}

pub fn to_json(c: &RectifierCircuit) -> String {
    let nodes = c
        .nodes()
        .iter()
        .enumerate()
        .map(|(id, n)| match n.kind() {
            NodeKind::Input(i) => NodeDoc {
                id,
                kind: KindDoc::Input,
                index: Some(i),
                preds: None,
            },
            NodeKind::Inner => NodeDoc {
                id,
                kind: KindDoc::Inner,
                index: None,
                preds: Some(n.preds().to_vec()),
            },
            NodeKind::Output(o) => NodeDoc {
                id,
                kind: KindDoc::Output,
                index: Some(o),
                preds: Some(n.preds().to_vec()),
            },
        })
        .collect();
    let doc = CircuitDoc {
        version: VERSION,
        n_inputs: c.n_inputs(),
        n_outputs: c.n_outputs(),
        nodes,
    };
    serde_json::to_string(&doc).expect("circuit documents always serialize")
}

/// Parses and validates a circuit. Ids only need to be strictly increasing;
/// they are renumbered densely in array order.
pub fn from_json(text: &str) -> Result<RectifierCircuit> {
    let doc: CircuitDoc = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    if doc.version != VERSION {
        return Err(Error::Malformed(format!("unsupported version {}", doc.version)));
    }
    let mut position = HashMap::with_capacity(doc.nodes.len());
    let mut last_id = None;
    let mut parts = Vec::with_capacity(doc.nodes.len());
    for (pos, node) in doc.nodes.into_iter().enumerate() {
        let id = node.id;
        if last_id.is_some_and(|l| id <= l) {
            return Err(Error::Schema {
                node: id,
                msg: "node ids must be strictly increasing".into(),
            });
        }
        last_id = Some(id);
        let kind = match (node.kind, node.index) {
            (KindDoc::Input, Some(i)) => NodeKind::Input(i),
            (KindDoc::Output, Some(o)) => NodeKind::Output(o),
            (KindDoc::Inner, None) => NodeKind::Inner,
            (KindDoc::Inner, Some(_)) => {
                return Err(Error::Schema {
                    node: id,
                    msg: "inner node must not carry an index".into(),
                })
            }
            (_, None) => {
                return Err(Error::Schema {
                    node: id,
                    msg: "input/output node is missing its index".into(),
                })
            }
        };
        let preds = match (node.kind, node.preds) {
            (KindDoc::Input, Some(_)) => {
                return Err(Error::Schema {
                    node: id,
                    msg: "input node must not list predecessors".into(),
                })
            }
            (KindDoc::Input, None) => Vec::new(),
            (_, None) => {
                return Err(Error::Schema {
                    node: id,
                    msg: "missing predecessor list".into(),
                })
            }
            (_, Some(preds)) => preds
                .into_iter()
                .map(|p| {
                    if p >= id {
                        return Err(Error::Schema {
                            node: id,
                            msg: format!("predecessor {p} is not an earlier node"),
                        });
                    }
                    position.get(&p).copied().ok_or_else(|| Error::Schema {
                        node: id,
                        msg: format!("unknown predecessor {p}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?,
        };
        for w in preds.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Schema {
                    node: id,
                    msg: "predecessors must be sorted and free of duplicates".into(),
                });
            }
        }
        position.insert(id, pos);
        parts.push((kind, preds));
    }
    RectifierCircuit::from_parts(doc.n_inputs, doc.n_outputs, parts)
}

fn dot_name(c: &RectifierCircuit, id: usize) -> String {
    match c.node(id).kind() {
        NodeKind::Input(i) => format!("in{i}"),
        NodeKind::Inner => format!("v{id}"),
        NodeKind::Output(o) => format!("out{o}"),
    }
}

/// Graphviz rendering: one declaration line per node, one `a -> b;` line per
/// edge, inputs and outputs pinned to the first and last rank.
pub fn to_dot(c: &RectifierCircuit) -> String {
    let mut s = String::from("digraph circuit {\n  rankdir=LR;\n");
    let ranked = |pick: fn(NodeKind) -> bool| -> String {
        c.nodes()
            .iter()
            .enumerate()
            .filter(|(_, n)| pick(n.kind()))
            .map(|(id, _)| dot_name(c, id))
            .collect::<Vec<_>>()
            .join("; ")
    };
    let ins = ranked(|k| matches!(k, NodeKind::Input(_)));
    let outs = ranked(|k| matches!(k, NodeKind::Output(_)));
    if !ins.is_empty() {
        let _ = writeln!(s, "  {{ rank=source; {ins}; }}");
    }
    if !outs.is_empty() {
        let _ = writeln!(s, "  {{ rank=sink; {outs}; }}");
    }
    for (id, n) in c.nodes().iter().enumerate() {
        let shape = match n.kind() {
            NodeKind::Inner => "circle",
            _ => "box",
        };
        let _ = writeln!(s, "  {} [shape={shape}];", dot_name(c, id));
    }
    for (id, n) in c.nodes().iter().enumerate() {
        let to = dot_name(c, id);
        for &p in n.preds() {
            let _ = writeln!(s, "  {} -> {to};", dot_name(c, p));
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RectifierCircuit {
        let mut c = RectifierCircuit::new(3, 2);
        let x = c.add_inner(vec![0, 2]).unwrap();
        c.add_output(vec![x, 1]).unwrap();
        c.add_output(vec![x]).unwrap();
        c
    }

    #[test]
    fn json_round_trip() {
        let c = sample();
        let text = to_json(&c);
        assert_eq!(from_json(&text).unwrap(), c);
        assert!(text.starts_with(r#"{"version":1,"n_inputs":3,"n_outputs":2,"nodes":[{"id":0,"kind":"input","index":0}"#));
    }

    #[test]
    fn json_accepts_sparse_ids() {
        let text = r#"{"version":1,"n_inputs":1,"n_outputs":1,"nodes":[
            {"id":4,"kind":"input","index":0},
            {"id":9,"kind":"output","index":0,"preds":[4]}]}"#;
        let c = from_json(text).unwrap();
        assert_eq!(c.node(1).preds(), &[0]);
    }

    #[test]
    fn json_rejections() {
        let bad = [
            // pred not earlier
            r#"{"version":1,"n_inputs":1,"n_outputs":1,"nodes":[{"id":0,"kind":"input","index":0},{"id":1,"kind":"output","index":0,"preds":[1]}]}"#,
            // duplicate output index
            r#"{"version":1,"n_inputs":1,"n_outputs":1,"nodes":[{"id":0,"kind":"input","index":0},{"id":1,"kind":"output","index":0,"preds":[0]},{"id":2,"kind":"output","index":0,"preds":[0]}]}"#,
            // missing output
            r#"{"version":1,"n_inputs":1,"n_outputs":2,"nodes":[{"id":0,"kind":"input","index":0},{"id":1,"kind":"output","index":0,"preds":[0]}]}"#,
            // duplicate preds
            r#"{"version":1,"n_inputs":1,"n_outputs":1,"nodes":[{"id":0,"kind":"input","index":0},{"id":1,"kind":"output","index":0,"preds":[0,0]}]}"#,
            // input with preds
            r#"{"version":1,"n_inputs":1,"n_outputs":1,"nodes":[{"id":0,"kind":"input","index":0,"preds":[]},{"id":1,"kind":"output","index":0,"preds":[0]}]}"#,
            // wrong version
            r#"{"version":2,"n_inputs":0,"n_outputs":0,"nodes":[]}"#,
            // ids not increasing
            r#"{"version":1,"n_inputs":2,"n_outputs":0,"nodes":[{"id":1,"kind":"input","index":0},{"id":0,"kind":"input","index":1}]}"#,
            "not json",
        ];
        for text in bad {
            assert!(from_json(text).is_err(), "accepted: {text}");
        }
        match from_json(bad[0]) {
            Err(Error::Schema { node, .. }) => assert_eq!(node, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dot_counts() {
        let empty = RectifierCircuit::new(0, 0);
        let text = to_dot(&empty);
        assert!(text.starts_with("digraph circuit {"));
        assert_eq!(text.matches("->").count(), 0);

        let mut one = RectifierCircuit::new(1, 1);
        one.add_output(vec![0]).unwrap();
        assert_eq!(to_dot(&one).lines().filter(|l| l.contains("->")).count(), 1);
        assert!(to_dot(&one).contains("in0 -> out0;"));

        let c = sample();
        let text = to_dot(&c);
        let edges = text.lines().filter(|l| l.contains("->")).count();
        let nodes = text.lines().filter(|l| l.contains("[shape=")).count();
        assert_eq!((nodes, edges), (c.stats().nodes, c.stats().edges));
    }
}
