//! The full diagnostic battery and its report document.

use serde::Serialize;

use crate::controlled::{
    controlled_gram, diagnose_controlled, gram_row_bound, schatten_report, ControlledDiagnosis,
    ControlledSystem, Finding, SchattenReport,
};
use crate::frame::{classify, frame_operator, FrameClassification};
use crate::linalg::{hermitian_eig, Tolerances};
use crate::riesz::{
    quadratic_form_bounds_seeded, riesz_diagnose_seeded, RieszDiagnosis, DEFAULT_SAMPLING_SEED,
};

use super::document::SystemDocument;

pub const TOOL_NAME: &str = "ctlframe";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramSummary {
    pub size: usize,
    pub op_norm: f64,
    pub hs_norm: f64,
    pub trace_norm: f64,
    pub min_singular: f64,
    pub rank: usize,
    /// `max_J sum_k |G[k][J]|^2`
    pub column_bound: f64,
    pub singular_values: Vec<f64>,
    pub schatten: SchattenReport,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub input_digest: String,
    pub tolerance: f64,
    pub seed: u64,
    pub dim: usize,
    pub count: usize,
    pub classification: FrameClassification,
    pub frame_spectrum: Vec<f64>,
    pub controlled: ControlledDiagnosis,
    pub gram: GramSummary,
    pub riesz: RieszDiagnosis,
    pub form_eigenvalues: Vec<f64>,
    pub notes: Vec<String>,
    pub exit_code: i32,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `quantity,index,value` rows for every spectrum in the report.
    pub fn spectrum_csv(&self) -> String {
        let mut out = String::from("quantity,index,value\n");
        let mut push = |name: &str, values: &[f64]| {
            for (i, v) in values.iter().enumerate() {
                out.push_str(&format!("{name},{i},{v:e}\n"));
            }
        };
        push("frame_operator_eigenvalue", &self.frame_spectrum);
        push("controlled_operator_eigenvalue", &self.controlled.spectrum);
        push("controlled_gram_singular_value", &self.gram.singular_values);
        push("form_eigenvalue", &self.form_eigenvalues);
        out
    }
}

/// 0 when the family is a frame, a controlled frame and a controlled Riesz
/// basis; 1 when any of those verdicts is negative.
pub fn verdict_exit_code(
    classification: &FrameClassification,
    controlled: &ControlledDiagnosis,
    riesz: &RieszDiagnosis,
) -> i32 {
    if classification.is_frame && controlled.is_controlled_frame && riesz.is_controlled_riesz {
        0
    } else {
        1
    }
}

pub fn run_battery(sys: &ControlledSystem, tol: f64) -> ReportDocument {
    run_battery_seeded(sys, tol, DEFAULT_SAMPLING_SEED)
}

pub fn run_battery_seeded(sys: &ControlledSystem, tol: f64, seed: u64) -> ReportDocument {
    let classification = classify(sys.family(), tol);
    let frame_spectrum = hermitian_eig(&frame_operator(sys.family()), &Tolerances::uniform(tol))
        .map(|e| e.values)
        .unwrap_or_default();
    let controlled = diagnose_controlled(sys, tol);
    let gram = controlled_gram(sys);
    let gram_summary = GramSummary {
        size: gram.size,
        op_norm: gram.op_norm,
        hs_norm: gram.hs_norm,
        trace_norm: gram.trace_norm,
        min_singular: gram.min_singular,
        rank: gram.rank(),
        column_bound: gram_row_bound(&gram),
        singular_values: gram.singular_values.clone(),
        schatten: schatten_report(sys),
        tolerance: tol,
    };
    let riesz = riesz_diagnose_seeded(sys, tol, seed);
    let form = quadratic_form_bounds_seeded(sys, tol, seed);

    let mut notes = Vec::new();
    for finding in &controlled.findings {
        match finding {
            Finding::SignDiscrepancy { lower, upper } => notes.push(format!(
                "sign discrepancy: S_UC is negative definite; |<S_UC f, f>| lies in [{lower}, {upper}] * ||f||^2, so -S_UC satisfies the controlled frame inequalities"
            )),
            Finding::NonSelfAdjointForm { residual } => notes.push(format!(
                "S_UC is not self-adjoint (relative residual {residual:e}); the controlled quadratic form is not real-valued"
            )),
        }
    }
    if classification.is_frame && controlled.positivity_of_csu && !controlled.is_controlled_frame {
        notes.push(
            "inconsistent: frame with C S_F U* in GL+ but no controlled frame verdict".into(),
        );
    }
    if riesz.is_controlled_riesz && !riesz.hypotheses_hold {
        notes.push("U, C are not commuting positive operators; the Gram criterion is used outside its equivalence hypotheses".into());
    }
    if riesz.form_sampled {
        notes.push("quadratic form is not Hermitian; L and P are sampled estimates".into());
    }

    let exit_code = verdict_exit_code(&classification, &controlled, &riesz);
    ReportDocument {
        tool: TOOL_NAME.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        input_digest: SystemDocument::from_system(sys).digest(),
        tolerance: tol,
        seed,
        dim: sys.dim(),
        count: sys.family().len(),
        classification,
        frame_spectrum,
        controlled,
        gram: gram_summary,
        riesz,
        form_eigenvalues: form.eigenvalues,
        notes,
        exit_code,
    }
}
