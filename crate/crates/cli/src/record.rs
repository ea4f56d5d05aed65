//! Serializable form of an instantiated operator.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use nakajima::bv_ring::SurfaceModel;
use nakajima::operator::ConcreteOperator;
use nakajima::scalar::fmt_q;

/// A matrix with labelled bases and exact entries as `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub expr: String,
    pub n: u32,
    pub source_weight: u32,
    pub target_weight: u32,
    pub degree_shift: Option<i64>,
    pub source_basis: Vec<String>,
    pub target_basis: Vec<String>,
    /// `(row, col, value)`, column-major.
    pub entries: Vec<(usize, usize, String)>,
}

impl MatrixRecord {
    pub fn new(model: &SurfaceModel, expr: String, n: u32, op: &ConcreteOperator) -> Self {
        let names = |b: &nakajima::operator::GradedBasis| -> Vec<String> {
            b.states().iter().map(|s| s.display(model)).collect()
        };
        Self {
            expr,
            n,
            source_weight: op.source.weight(),
            target_weight: op.target.weight(),
            degree_shift: op.degree_shift,
            source_basis: names(&op.source),
            target_basis: names(&op.target),
            entries: op
                .matrix
                .triplets()
                .into_iter()
                .map(|(r, c, v)| (r, c, fmt_q(&v)))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable record")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,col,value\n");
        for (r, c, v) in &self.entries {
            let _ = writeln!(out, "{r},{c},{v}");
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{}  on weight {} -> {} ({} x {}, {} nonzero)\n",
            self.expr,
            self.source_weight,
            self.target_weight,
            self.target_basis.len(),
            self.source_basis.len(),
            self.entries.len()
        );
        for (c, src) in self.source_basis.iter().enumerate() {
            let image: Vec<String> = self
                .entries
                .iter()
                .filter(|e| e.1 == c)
                .map(|(r, _, v)| format!("{v} * {}", self.target_basis[*r]))
                .collect();
            let image = if image.is_empty() {
                "0".to_string()
            } else {
                image.join(" + ")
            };
            let _ = writeln!(out, "  {src} -> {image}");
        }
        out
    }
}
