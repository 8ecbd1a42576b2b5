//! Local pieces of the Hasse diagram of the minor poset.

use std::collections::HashMap;
use std::fmt::Write as _;

use ncp_core::ascent::all_covering_codes;
use ncp_core::descent::all_covered_codes;
use ncp_core::{canonical_key, Code, Codeword, CoverType, Result};
use serde::Serialize;

/// DOT labels longer than this are truncated.
const LABEL_WIDTH: usize = 28;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HasseNode {
    pub key: String,
    pub code: Code,
    /// Steps above (positive) or below (negative) the root.
    pub level: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    CoveredNeuron {
        neuron: usize,
    },
    Construction {
        isolated: Vec<Codeword>,
        mu: Codeword,
        #[serde(rename = "type")]
        cover_type: CoverType,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HasseEdge {
    pub upper: String,
    pub lower: String,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HasseFragment {
    pub nodes: Vec<HasseNode>,
    pub edges: Vec<HasseEdge>,
}

impl HasseFragment {
    /// Everything reachable from `root` by at most `up` covering steps
    /// upward or `down` steps downward. Nodes are identified by canonical
    /// key and appear in discovery order.
    pub fn build(root: &Code, up: usize, down: usize) -> Result<HasseFragment> {
        let mut frag = HasseFragment::default();
        let mut index: HashMap<String, usize> = HashMap::new();
        let root_key = canonical_key(root);
        index.insert(root_key.clone(), 0);
        frag.nodes.push(HasseNode { key: root_key, code: root.clone(), level: 0 });

        let mut frontier = vec![0usize];
        for step in 1..=down {
            let mut next = Vec::new();
            for &u in &frontier {
                let upper = frag.nodes[u].clone();
                for cc in all_covered_codes(&upper.code)? {
                    let key = canonical_key(&cc.code);
                    frag.add(&mut index, &mut next, key.clone(), cc.code, -(step as i64));
                    frag.edges.push(HasseEdge {
                        upper: upper.key.clone(),
                        lower: key,
                        provenance: Provenance::CoveredNeuron { neuron: cc.neuron },
                    });
                }
            }
            frontier = next;
        }

        let mut frontier = vec![0usize];
        for step in 1..=up {
            let mut next = Vec::new();
            for &l in &frontier {
                let lower = frag.nodes[l].clone();
                for cc in all_covering_codes(&lower.code)? {
                    let key = canonical_key(&cc.result);
                    frag.add(&mut index, &mut next, key.clone(), cc.result.clone(), step as i64);
                    frag.edges.push(HasseEdge {
                        upper: key,
                        lower: lower.key.clone(),
                        provenance: Provenance::Construction {
                            isolated: cc.isolated.members().to_vec(),
                            mu: cc.isolated.mu(),
                            cover_type: cc.cover_type,
                        },
                    });
                }
            }
            frontier = next;
        }

        let mut seen = std::collections::HashSet::new();
        frag.edges.retain(|e| seen.insert((e.upper.clone(), e.lower.clone())));
        Ok(frag)
    }

    fn add(&mut self, index: &mut HashMap<String, usize>, next: &mut Vec<usize>, key: String, code: Code, level: i64) {
        if !index.contains_key(&key) {
            index.insert(key.clone(), self.nodes.len());
            next.push(self.nodes.len());
            self.nodes.push(HasseNode { key, code, level });
        }
    }

    /// Directed edges run from the covering code to the covered code.
    pub fn to_dot(&self) -> String {
        let ids: HashMap<&str, usize> = self.nodes.iter().enumerate().map(|(k, n)| (n.key.as_str(), k)).collect();
        let mut s = String::from("digraph hasse {\n  node [shape=box, fontname=\"monospace\"];\n");
        for (k, node) in self.nodes.iter().enumerate() {
            let style = if node.level == 0 { ", style=bold" } else { "" };
            writeln!(
                s,
                "  n{k} [label=\"{}\", tooltip=\"{}\"{style}];",
                escape(&truncate(&node.key)),
                escape(&node.key)
            )
            .unwrap();
        }
        for e in &self.edges {
            let label = match &e.provenance {
                Provenance::CoveredNeuron { neuron } => format!("i={neuron}"),
                Provenance::Construction { isolated, cover_type, .. } => {
                    let members: Vec<String> = isolated.iter().map(|w| w.to_string()).collect();
                    format!("I={{{}}} t={}", members.join(","), cover_type.number())
                }
            };
            writeln!(s, "  n{} -> n{} [label=\"{}\"];", ids[e.upper.as_str()], ids[e.lower.as_str()], escape(&label))
                .unwrap();
        }
        s.push_str("}\n");
        s
    }
}

fn truncate(key: &str) -> String {
    if key.chars().count() <= LABEL_WIDTH {
        key.to_string()
    } else {
        let head: String = key.chars().take(LABEL_WIDTH - 1).collect();
        format!("{head}…")
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
