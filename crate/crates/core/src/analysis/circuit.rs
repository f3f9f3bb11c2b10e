//! Boolean circuits with unbounded fan-in AND/OR.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gate {
    /// Input bit `x_k`, 1-based.
    Input(usize),
    Const(bool),
    Not,
    And,
    Or,
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Input(k) => write!(f, "x{k}"),
            Gate::Const(b) => write!(f, "{}", u8::from(*b)),
            Gate::Not => write!(f, "NOT"),
            Gate::And => write!(f, "AND"),
            Gate::Or => write!(f, "OR"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub gate: Gate,
    /// Indices of predecessor nodes.
    pub inputs: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Circuit {
    pub nodes: Vec<Node>,
    pub outputs: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("circuit contains a cycle through {0:?}")]
    CycleDetected(String),
    #[error("{node}: {gate} cannot have fan-in {fan_in}")]
    ArityViolation { node: String, gate: String, fan_in: usize },
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("node {0:?} defined twice")]
    DuplicateNode(String),
    #[error("input x{0} must occur exactly once")]
    InputOccurrence(usize),
    #[error("expected {expected} input bits, got {got}")]
    InputLength { expected: usize, got: usize },
    #[error("line {line}: {detail}")]
    Syntax { line: usize, detail: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitMetrics {
    pub depth: usize,
    pub wires: usize,
    pub inputs: usize,
    pub gates: usize,
}

impl Circuit {
    /// Number of input variables.
    pub fn arity(&self) -> usize {
        self.nodes
            .iter()
            .filter_map(|n| match n.gate {
                Gate::Input(k) => Some(k),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Checks fan-in rules, input occurrences and acyclicity; returns a
    /// topological order.
    pub fn validate(&self) -> Result<Vec<usize>, CircuitError> {
        let n = self.arity();
        let mut seen = vec![0usize; n + 1];
        for node in &self.nodes {
            let bad = match node.gate {
                Gate::Input(k) => {
                    seen[k] += 1;
                    !node.inputs.is_empty()
                }
                Gate::Const(_) => !node.inputs.is_empty(),
                Gate::Not => node.inputs.len() != 1,
                Gate::And | Gate::Or => false,
            };
            if bad {
                return Err(CircuitError::ArityViolation {
                    node: node.id.clone(),
                    gate: node.gate.to_string(),
                    fan_in: node.inputs.len(),
                });
            }
            if let Some(&p) = node.inputs.iter().find(|&&p| p >= self.nodes.len()) {
                return Err(CircuitError::UnknownNode(p.to_string()));
            }
        }
        if let Some(k) = (1..=n).find(|&k| seen[k] != 1) {
            return Err(CircuitError::InputOccurrence(k));
        }
        if let Some(&o) = self.outputs.iter().find(|&&o| o >= self.nodes.len()) {
            return Err(CircuitError::UnknownNode(o.to_string()));
        }
        self.topological_order()
    }

    fn topological_order(&self) -> Result<Vec<usize>, CircuitError> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; self.nodes.len()];
        let mut order = Vec::with_capacity(self.nodes.len());
        for root in 0..self.nodes.len() {
            if state[root] != 0 {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            state[root] = 1;
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if let Some(&u) = self.nodes[v].inputs.get(*next) {
                    *next += 1;
                    match state[u] {
                        0 => {
                            state[u] = 1;
                            stack.push((u, 0));
                        }
                        1 => return Err(CircuitError::CycleDetected(self.nodes[u].id.clone())),
                        _ => {}
                    }
                } else {
                    state[v] = 2;
                    order.push(v);
                    stack.pop();
                }
            }
        }
        Ok(order)
    }
}

pub fn eval_circuit(c: &Circuit, bits: &[bool]) -> Result<Vec<bool>, CircuitError> {
    let order = c.validate()?;
    if bits.len() != c.arity() {
        return Err(CircuitError::InputLength { expected: c.arity(), got: bits.len() });
    }
    let mut val = vec![false; c.nodes.len()];
    for v in order {
        let node = &c.nodes[v];
        let ins = node.inputs.iter().map(|&u| val[u]);
        val[v] = match node.gate {
            Gate::Input(k) => bits[k - 1],
            Gate::Const(b) => b,
            Gate::Not => !val[node.inputs[0]],
            Gate::And => ins.fold(true, |a, b| a && b),
            Gate::Or => ins.fold(false, |a, b| a || b),
        };
    }
    Ok(c.outputs.iter().map(|&o| val[o]).collect())
}

/// Depth is the longest path (in wires) anywhere in the circuit; size is
/// the number of wires.
pub fn circuit_metrics(c: &Circuit) -> Result<CircuitMetrics, CircuitError> {
    let order = c.topological_order()?;
    let mut depth = vec![0usize; c.nodes.len()];
    for v in order {
        depth[v] = c.nodes[v].inputs.iter().map(|&u| depth[u] + 1).max().unwrap_or(0);
    }
    Ok(CircuitMetrics {
        depth: depth.into_iter().max().unwrap_or(0),
        wires: c.nodes.iter().map(|n| n.inputs.len()).sum(),
        inputs: c.arity(),
        gates: c.nodes.iter().filter(|n| matches!(n.gate, Gate::Not | Gate::And | Gate::Or)).count(),
    })
}

/// Parses a netlist: one `id label input-ids…` line per node (labels `x<k>`,
/// `0`, `1`, `NOT`, `AND`, `OR`), then `out id…`. `#` starts a comment.
pub fn parse_netlist(text: &str) -> Result<Circuit, CircuitError> {
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut raw: Vec<(usize, String, Gate, Vec<String>)> = Vec::new();
    let mut outputs: Option<Vec<String>> = None;
    for (k, line) in text.lines().enumerate() {
        let lineno = k + 1;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        let head = toks.next().expect("non-empty line");
        if outputs.is_some() {
            return Err(CircuitError::Syntax { line: lineno, detail: "content after the out line".into() });
        }
        if head == "out" {
            outputs = Some(toks.map(str::to_string).collect());
            continue;
        }
        let label = toks.next().ok_or_else(|| CircuitError::Syntax { line: lineno, detail: "missing label".into() })?;
        let gate = match label {
            "0" => Gate::Const(false),
            "1" => Gate::Const(true),
            "NOT" => Gate::Not,
            "AND" => Gate::And,
            "OR" => Gate::Or,
            x => match x.strip_prefix('x').and_then(|k| k.parse::<usize>().ok()).filter(|&k| k >= 1) {
                Some(k) => Gate::Input(k),
                None => return Err(CircuitError::Syntax { line: lineno, detail: format!("unknown label {x:?}") }),
            },
        };
        if ids.insert(head.to_string(), raw.len()).is_some() {
            return Err(CircuitError::DuplicateNode(head.to_string()));
        }
        raw.push((lineno, head.to_string(), gate, toks.map(str::to_string).collect()));
    }
    let outputs = outputs.ok_or_else(|| CircuitError::Syntax { line: 0, detail: "missing out line".into() })?;
    let resolve = |name: &String| ids.get(name).copied().ok_or_else(|| CircuitError::UnknownNode(name.clone()));
    let mut nodes = Vec::with_capacity(raw.len());
    for (_, id, gate, ins) in &raw {
        let inputs = ins.iter().map(resolve).collect::<Result<Vec<_>, _>>()?;
        nodes.push(Node { id: id.clone(), gate: *gate, inputs });
    }
    let outputs = outputs.iter().map(resolve).collect::<Result<Vec<_>, _>>()?;
    let c = Circuit { nodes, outputs };
    c.validate()?;
    Ok(c)
}

/// Inverse of [`parse_netlist`].
pub fn write_netlist(c: &Circuit) -> String {
    let mut s = String::new();
    for node in &c.nodes {
        s.push_str(&node.id);
        s.push(' ');
        s.push_str(&node.gate.to_string());
        for &u in &node.inputs {
            s.push(' ');
            s.push_str(&c.nodes[u].id);
        }
        s.push('\n');
    }
    s.push_str("out");
    for &o in &c.outputs {
        s.push(' ');
        s.push_str(&c.nodes[o].id);
    }
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ckt(text: &str) -> Circuit {
        parse_netlist(text).unwrap()
    }

    #[test]
    fn single_and() {
        let c = ckt("a x1\nb x2\ng AND a b\nout g\n");
        assert_eq!(eval_circuit(&c, &[true, true]).unwrap(), vec![true]);
        assert_eq!(eval_circuit(&c, &[true, false]).unwrap(), vec![false]);
        let m = circuit_metrics(&c).unwrap();
        assert_eq!((m.depth, m.wires), (1, 2));
    }

    #[test]
    fn empty_fan_in() {
        let c = ckt("e OR\nf AND\nout e f\n");
        assert_eq!(eval_circuit(&c, &[]).unwrap(), vec![false, true]);
    }

    #[test]
    fn not_chain() {
        let c = ckt("a x1\nn1 NOT a\nn2 NOT n1\nout n1 n2\n");
        assert_eq!(eval_circuit(&c, &[false]).unwrap(), vec![true, false]);
        assert_eq!(circuit_metrics(&c).unwrap().depth, 2);
    }

    #[test]
    fn or_of_ands() {
        let c = ckt("a x1\nb x2\nc x3\nd x4\np AND a b\nq AND c d\nr OR p q\nout r\n");
        let m = circuit_metrics(&c).unwrap();
        assert_eq!((m.depth, m.wires), (2, 6));
        assert_eq!(write_netlist(&c), "a x1\nb x2\nc x3\nd x4\np AND a b\nq AND c d\nr OR p q\nout r\n");
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_netlist("a x1\nn NOT a a\nout n"), Err(CircuitError::ArityViolation { .. })));
        assert!(matches!(parse_netlist("a x1\nn AND a m\nm OR n\nout m"), Err(CircuitError::CycleDetected(_))));
        assert!(matches!(parse_netlist("a x2\nout a"), Err(CircuitError::InputOccurrence(1))));
        assert!(matches!(parse_netlist("a x1\nout b"), Err(CircuitError::UnknownNode(_))));
        assert!(matches!(parse_netlist("a x1\n"), Err(CircuitError::Syntax { .. })));
        assert!(matches!(parse_netlist("a FOO\nout a"), Err(CircuitError::Syntax { .. })));
        let c = ckt("a x1\nout a");
        assert_eq!(eval_circuit(&c, &[]).unwrap_err(), CircuitError::InputLength { expected: 1, got: 0 });
    }
}
