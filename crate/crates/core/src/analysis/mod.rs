//! Verification harness.

mod audit;
mod circuit;
mod encode;
mod equivalence;
mod fixability;

pub use audit::{audit_sbar, SbarAudit, SbarViolation};
pub use circuit::{
    circuit_metrics, eval_circuit, parse_netlist, write_netlist, Circuit, CircuitError, CircuitMetrics, Gate, Node,
};
pub use encode::{code_width, default_encoding, encode_binary, EncodeError};
pub use equivalence::{check_equivalence, check_equivalence_with};
pub use fixability::{
    check_fixability, fix_budget, search_unfixable, verify_witness, FixabilityWitness, Restriction, SearchScope,
    Verdict,
};
