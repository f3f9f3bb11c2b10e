use proptest::prelude::*;

use uhatlab_core::analysis::{circuit_metrics, eval_circuit, parse_netlist, write_netlist, Circuit, Gate, Node};

/// Random DAG: `n` inputs then gates whose inputs point strictly backwards.
fn dag(allow_not: bool) -> impl Strategy<Value = Circuit> {
    (1usize..=4, prop::collection::vec((0u8..4, prop::collection::vec(any::<prop::sample::Index>(), 0..4)), 1..8))
        .prop_map(move |(n, gates)| {
            let mut nodes: Vec<Node> =
                (1..=n).map(|k| Node { id: format!("x{k}"), gate: Gate::Input(k), inputs: vec![] }).collect();
            for (kind, ins) in gates {
                let m = nodes.len();
                let mut inputs: Vec<usize> = ins.iter().map(|ix| ix.index(m)).collect();
                let gate = match kind {
                    0 if allow_not => {
                        inputs.truncate(1);
                        if inputs.is_empty() {
                            inputs.push(m - 1);
                        }
                        Gate::Not
                    }
                    0 | 1 => Gate::And,
                    2 => Gate::Or,
                    _ if inputs.is_empty() => Gate::Const(m % 2 == 0),
                    _ => Gate::Or,
                };
                if matches!(gate, Gate::Const(_)) {
                    inputs.clear();
                }
                nodes.push(Node { id: format!("g{m}"), gate, inputs });
            }
            let outputs = (0..nodes.len()).collect();
            Circuit { nodes, outputs }
        })
}

/// Longest path by enumerating every path backwards from each node.
fn brute_depth(c: &Circuit) -> usize {
    fn longest(c: &Circuit, v: usize) -> usize {
        c.nodes[v].inputs.iter().map(|&u| 1 + longest(c, u)).max().unwrap_or(0)
    }
    (0..c.nodes.len()).map(|v| longest(c, v)).max().unwrap_or(0)
}

fn bits(mask: u32, n: usize) -> Vec<bool> {
    (0..n).map(|k| mask >> k & 1 == 1).collect()
}

proptest! {
    #[test]
    fn monotone_without_not(c in dag(false)) {
        let n = c.arity();
        for lo in 0u32..1 << n {
            let before = eval_circuit(&c, &bits(lo, n)).unwrap();
            for k in 0..n {
                if lo >> k & 1 == 0 {
                    let after = eval_circuit(&c, &bits(lo | 1 << k, n)).unwrap();
                    for (b, a) in before.iter().zip(&after) {
                        prop_assert!(!*b || *a);
                    }
                }
            }
        }
    }

    #[test]
    fn depth_is_longest_path(c in dag(true)) {
        let m = circuit_metrics(&c).unwrap();
        prop_assert_eq!(m.depth, brute_depth(&c));
        prop_assert_eq!(m.wires, c.nodes.iter().map(|n| n.inputs.len()).sum::<usize>());
    }

    #[test]
    fn netlist_round_trip(c in dag(true)) {
        let text = write_netlist(&c);
        let back = parse_netlist(&text).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(write_netlist(&back), text);
    }
}
