//! Serializable run summaries and the CSV trace writer.
//!
//! JSON field order follows struct declaration order and `serde_json`
//! prints floats with the shortest round-trip representation, so a given
//! summary always serializes to the same bytes — seed-identical runs
//! produce byte-identical reports. Non-finite floats (a diverged residual,
//! say) serialize as `null`.

use std::io::Write;

use dgsor::scheme::IterationTrace;
use serde::Serialize;

/// Summary of a `solve` run.
#[derive(Debug, Serialize)]
pub struct SolveSummary {
    pub method: String,
    /// Stepsize `h` for the flow schemes, relaxation parameter `omega` for
    /// the classical methods.
    pub parameter: f64,
    pub iterations: usize,
    pub final_residual: f64,
    pub spectral_radius: f64,
    pub converged: bool,
}

/// Summary of an `equiv` run.
#[derive(Debug, Serialize)]
pub struct EquivSummary {
    pub pair: String,
    pub omega: f64,
    pub h: f64,
    pub matrix_gap: f64,
    pub vector_gap: f64,
    pub sequence_gap: f64,
    pub matrix_tolerance: f64,
    pub sequence_tolerance: f64,
    pub passed: bool,
}

/// Summary of a `spectrum` run.
#[derive(Debug, Serialize)]
pub struct SpectrumSummary {
    pub method: String,
    pub parameter: f64,
    pub spectral_radius: f64,
    pub convergent: bool,
}

/// Summary of an `axioms` run.
#[derive(Debug, Serialize)]
pub struct AxiomsSummary {
    pub kind: String,
    pub pairs: usize,
    pub max_chain_rule_residual: f64,
    pub max_consistency_residual: f64,
    pub max_tolerance: f64,
    pub passed: bool,
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("summaries always serialize");
    text.push('\n');
    text
}

/// Writes the trace as CSV with schema `k,energy,residual,decrement`,
/// 17 significant digits per value.
pub fn write_trace_csv<W: Write>(writer: &mut W, trace: &IterationTrace) -> std::io::Result<()> {
    writeln!(writer, "k,energy,residual,decrement")?;
    for k in 0..trace.iterates.len() {
        writeln!(
            writer,
            "{k},{:.16e},{:.16e},{:.16e}",
            trace.energies[k], trace.residual_norms[k], trace.decrements[k]
        )?;
    }
    Ok(())
}
