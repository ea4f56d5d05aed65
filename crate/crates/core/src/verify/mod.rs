//! Verification suites producing deterministic reports.

mod properties;
pub mod random;
mod relations;
mod spectral;

use serde::{Deserialize, Serialize};

use crate::bv_ring::{ModelConfig, SurfaceModel};
use crate::error::Result;
use crate::fock::FockVector;
use crate::operator::{ConcreteOperator, Instantiator, OperatorExpr};

pub use properties::{
    confluence_suite, heisenberg_suite, lemma_suite, rho_suite, t_bracket_suite, widening_suite,
};
pub use relations::{grading_suite, relation_suite};
pub use spectral::{injectivity_rank, lie_closure_dimension, zero_cycle_spectrum};

/// A basis vector where two operators differ, with both images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub source: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool) -> Self {
        Self {
            name: name.into(),
            pass,
            detail: None,
            witness: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    fn failed(name: impl Into<String>, err: crate::Error) -> Self {
        Self::new(name, false).with_detail(err.to_string())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub model: ModelConfig,
    pub n: u32,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: &str, model: &SurfaceModel, n: u32, checks: Vec<Check>) -> Self {
        let passed = checks.iter().filter(|c| c.pass).count();
        Self {
            suite: suite.into(),
            model: model.to_config(),
            n,
            passed,
            failed: checks.len() - passed,
            checks,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable report")
    }

    /// One line per check, then a summary line.
    pub fn to_table(&self) -> String {
        let mut out = format!("suite {} (n = {})\n", self.suite, self.n);
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status}  {}", c.name));
            if let Some(d) = &c.detail {
                out.push_str(&format!("  [{d}]"));
            }
            out.push('\n');
            if let Some(w) = &c.witness {
                out.push_str(&format!(
                    "      at {}: lhs = {}, rhs = {}\n",
                    w.source, w.lhs, w.rhs
                ));
            }
        }
        out.push_str(&format!("{} passed, {} failed\n", self.passed, self.failed));
        out
    }
}

/// Compares two instantiated operators, recording the first differing column.
pub fn compare(
    model: &SurfaceModel,
    name: impl Into<String>,
    lhs: &ConcreteOperator,
    rhs: &ConcreteOperator,
) -> Check {
    let name = name.into();
    if lhs.target.weight() != rhs.target.weight() || lhs.source.weight() != rhs.source.weight() {
        return Check::new(name, false).with_detail(format!(
            "shapes differ: {}->{} vs {}->{}",
            lhs.source.weight(),
            lhs.target.weight(),
            rhs.source.weight(),
            rhs.target.weight()
        ));
    }
    match lhs.matrix.first_difference(&rhs.matrix) {
        None => Check::new(name, true),
        Some(col) => {
            let state = lhs.source.states()[col].clone();
            let x = FockVector::basis(state.clone());
            let show =
                |op: &ConcreteOperator| op.apply(&x).map(|v| v.display(model)).unwrap_or_default();
            let mut c = Check::new(name, false);
            c.witness = Some(Witness {
                source: state.display(model),
                lhs: show(lhs),
                rhs: show(rhs),
            });
            c
        }
    }
}

/// Instantiates both sides at weight `n` and compares them.
pub fn check_identity(
    inst: &Instantiator,
    lhs: &OperatorExpr,
    rhs: &OperatorExpr,
    n: u32,
) -> Check {
    let model = inst.model();
    let name = format!("{} = {}", lhs.print(model), rhs.print(model));
    let run = || -> Result<Check> {
        let a = inst.instantiate(lhs, n)?;
        let b = inst.instantiate(rhs, n)?;
        Ok(compare(model, name.clone(), &a, &b))
    };
    run().unwrap_or_else(|e| Check::failed(name.clone(), e))
}
