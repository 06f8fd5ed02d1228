//! Report documents and their text rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::eval::EvaluationReport;
use crate::forest::ForestParams;
use crate::ingest::LabelMap;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Run details that legitimately differ between identical runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct RunMetadata {
    pub elapsed_seconds: f64,
    pub threads: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub model: String,
    pub params: ForestParams,
    pub folds: usize,
    pub seed: u64,
    pub labels: LabelMap,
    pub evaluation: EvaluationReport,
    pub metadata: RunMetadata,
}

impl ReportDocument {
    /// The document with `metadata` cleared, for reproducibility checks.
    pub fn without_metadata(&self) -> Self {
        ReportDocument {
            metadata: RunMetadata::default(),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Model-by-metric summary followed by per-person one-vs-others accuracy,
/// one column per report.
pub fn render_tables(docs: &[ReportDocument]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<8} {:>9} {:>9} {:>9}",
        "Model", "Accuracy", "AUC", "Recall"
    );
    for d in docs {
        let h = &d.evaluation.headline;
        let _ = writeln!(
            out,
            "{:<8} {:>9.4} {:>9.4} {:>9.4}",
            d.model.to_uppercase(),
            h.accuracy,
            h.auc,
            h.recall
        );
    }
    let Some(first) = docs.first() else {
        return out;
    };
    out.push('\n');
    let _ = write!(out, "{:<8}", "Person");
    for d in docs {
        let _ = write!(out, " {:>9}", d.model.to_uppercase());
    }
    out.push('\n');
    for (label, name) in first.labels.names.iter().enumerate() {
        let _ = write!(out, "{name:<8}");
        for d in docs {
            let acc = d
                .evaluation
                .aggregate
                .per_class
                .get(label)
                .map_or(f64::NAN, |m| m.accuracy);
            let _ = write!(out, " {acc:>9.4}");
        }
        out.push('\n');
    }
    out
}

/// Per-class rows as CSV: name, support, weight, recall, specificity, AUC,
/// one-vs-others accuracy.
pub fn render_class_csv(doc: &ReportDocument) -> String {
    let mut out = String::from("person,support,weight,recall,specificity,auc,accuracy\n");
    for m in &doc.evaluation.aggregate.per_class {
        let name = doc.labels.name_of(m.class).unwrap_or("?");
        let _ = writeln!(
            out,
            "{name},{},{},{},{},{},{}",
            m.support, m.weight, m.recall, m.specificity, m.auc, m.accuracy
        );
    }
    out
}
