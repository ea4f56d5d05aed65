//! Beauville-Voisin model of the Chow rings `A*(S^k)` of powers of a K3 surface.
//!
//! `R(S)` has basis `u` (unit), `v_1..v_r` (divisors), `c` (the Beauville-Voisin
//! point class) and optional formal point symbols `p_1..p_s`. Classes on `S^k`
//! are rational combinations of normal-form [`Term`]s: a set of disjoint slot
//! pairs carrying diagonals, and basis decorations on the remaining slots.

mod class;
mod ops;
mod reduce;

pub use class::{MultiPointClass, Pair, PairKind, Term};
pub use ops::embed;
pub use reduce::RawProduct;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadratic::QuadraticSpace;
use crate::scalar::{fmt_q, parse_q, Q};

/// Euler characteristic of a K3 surface; `c_2(T_S) = 24 c`.
pub const EULER: i64 = 24;

/// Index of a basis element of `R(S)`.
pub type Basis = u8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Chow,
    Cohomology,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisKind {
    Unit,
    Divisor(usize),
    Point,
    Symbol(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurfaceModel {
    divisors: QuadraticSpace,
    points: usize,
    mode: Mode,
}

impl SurfaceModel {
    pub fn new(divisors: QuadraticSpace, points: usize, mode: Mode) -> Result<Self> {
        if divisors.rank() + points + 2 > Basis::MAX as usize {
            return Err(Error::Model("too many basis elements".into()));
        }
        Ok(Self {
            divisors,
            points,
            mode,
        })
    }

    /// Model with a diagonal Gram matrix and no point symbols.
    pub fn diagonal(entries: &[i64], mode: Mode) -> Self {
        let r = entries.len();
        let gram = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        if i == j {
                            crate::scalar::q(entries[i])
                        } else {
                            Q::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        let space = QuadraticSpace::with_default_labels(gram).expect("diagonal gram");
        Self::new(space, 0, mode).expect("small model")
    }

    pub fn with_points(mut self, points: usize) -> Self {
        self.points = points;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn divisors(&self) -> &QuadraticSpace {
        &self.divisors
    }

    pub fn rank(&self) -> usize {
        self.divisors.rank()
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn euler(&self) -> i64 {
        EULER
    }

    /// Number of basis elements of `R(S)`, point symbols included.
    pub fn basis_len(&self) -> usize {
        self.rank() + 2 + self.points
    }

    /// Basis elements spanning the graded pieces: point symbols are dropped in
    /// cohomology, where each of them equals `c`.
    pub fn state_basis(&self) -> Vec<Basis> {
        let top = match self.mode {
            Mode::Chow => self.basis_len(),
            Mode::Cohomology => self.rank() + 2,
        };
        (0..top as Basis).collect()
    }

    pub const UNIT: Basis = 0;

    pub fn div(&self, a: usize) -> Basis {
        debug_assert!(a < self.rank());
        (1 + a) as Basis
    }

    pub fn point(&self) -> Basis {
        (self.rank() + 1) as Basis
    }

    pub fn symbol(&self, i: usize) -> Basis {
        debug_assert!(i < self.points);
        (self.rank() + 2 + i) as Basis
    }

    pub fn kind(&self, b: Basis) -> BasisKind {
        let b = b as usize;
        let r = self.rank();
        if b == 0 {
            BasisKind::Unit
        } else if b <= r {
            BasisKind::Divisor(b - 1)
        } else if b == r + 1 {
            BasisKind::Point
        } else {
            BasisKind::Symbol(b - r - 2)
        }
    }

    /// Chow degree of a basis element.
    pub fn deg(&self, b: Basis) -> usize {
        match self.kind(b) {
            BasisKind::Unit => 0,
            BasisKind::Divisor(_) => 1,
            BasisKind::Point | BasisKind::Symbol(_) => 2,
        }
    }

    /// Product of two basis elements of `R(S)`.
    pub fn basis_product(&self, x: Basis, y: Basis) -> Option<(Q, Basis)> {
        match (self.kind(x), self.kind(y)) {
            (BasisKind::Unit, _) => Some((Q::from_integer(1.into()), y)),
            (_, BasisKind::Unit) => Some((Q::from_integer(1.into()), x)),
            (BasisKind::Divisor(a), BasisKind::Divisor(b)) => {
                let g = self.divisors.entry(a, b);
                (!g.is_zero()).then(|| (g.clone(), self.point()))
            }
            _ => None,
        }
    }

    /// Whether the basis element integrates to 1 (otherwise to 0).
    pub fn integral(&self, b: Basis) -> bool {
        matches!(self.kind(b), BasisKind::Point | BasisKind::Symbol(_))
    }

    /// `∫ x·y` over S for basis elements.
    pub fn pairing(&self, x: Basis, y: Basis) -> Q {
        match self.basis_product(x, y) {
            Some((s, b)) if self.integral(b) => s,
            _ => Q::zero(),
        }
    }

    /// Trace of the identity on the transcendental part of `H^2(S)`.
    pub fn transcendental_rank(&self) -> i64 {
        EULER - 2 - self.rank() as i64
    }

    pub fn basis_label(&self, b: Basis) -> String {
        match self.kind(b) {
            BasisKind::Unit => "u".into(),
            BasisKind::Divisor(a) => self.divisors.labels()[a].clone(),
            BasisKind::Point => "c".into(),
            BasisKind::Symbol(i) => format!("p{}", i + 1),
        }
    }

    pub fn basis_by_label(&self, label: &str) -> Option<Basis> {
        (0..self.basis_len() as Basis).find(|&b| self.basis_label(b) == label)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ModelConfig =
            serde_json::from_str(text).map_err(|e| Error::Model(e.to_string()))?;
        cfg.build()
    }

    pub fn to_config(&self) -> ModelConfig {
        ModelConfig {
            rank: self.rank(),
            gram: self
                .divisors
                .gram()
                .iter()
                .map(|row| row.iter().map(|x| GramEntry::Text(fmt_q(x))).collect())
                .collect(),
            points: self.points,
            mode: self.mode,
            labels: Some(self.divisors.labels().to_vec()),
        }
    }

    /// Canonical JSON, used as the model part of cache keys.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(&self.to_config()).expect("serializable")
    }

    pub fn describe(&self) -> String {
        let rows: Vec<String> = self
            .divisors
            .gram()
            .iter()
            .map(|row| row.iter().map(fmt_q).collect::<Vec<_>>().join(" "))
            .collect();
        format!(
            "K3 model: r={} gram=[{}] points={} mode={:?}",
            self.rank(),
            rows.join("; "),
            self.points,
            self.mode
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GramEntry {
    Int(i64),
    Text(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelConfig {
    pub rank: usize,
    pub gram: Vec<Vec<GramEntry>>,
    #[serde(default)]
    pub points: usize,
    #[serde(default = "default_mode")]
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

fn default_mode() -> Mode {
    Mode::Chow
}

impl ModelConfig {
    pub fn build(&self) -> Result<SurfaceModel> {
        if self.gram.len() != self.rank {
            return Err(Error::Model(format!(
                "rank {} but gram has {} rows",
                self.rank,
                self.gram.len()
            )));
        }
        let gram =
            self.gram
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|e| match e {
                            GramEntry::Int(i) => Ok(crate::scalar::q(*i)),
                            GramEntry::Text(s) => parse_q(s)
                                .map_err(|_| Error::Model(format!("bad gram entry {s:?}"))),
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
        let space = match &self.labels {
            Some(l) => QuadraticSpace::new(gram, l.clone())?,
            None => QuadraticSpace::with_default_labels(gram)?,
        };
        SurfaceModel::new(space, self.points, self.mode)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, q};

    #[test]
    fn ring_law() {
        let m = SurfaceModel::diagonal(&[2, -2], Mode::Chow).with_points(1);
        let (v1, v2, c, p) = (m.div(0), m.div(1), m.point(), m.symbol(0));
        assert_eq!(m.basis_product(v1, v1), Some((q(2), c)));
        assert_eq!(m.basis_product(v1, v2), None);
        assert_eq!(m.basis_product(v2, v2), Some((q(-2), c)));
        assert_eq!(m.basis_product(c, p), None);
        assert_eq!(m.basis_product(SurfaceModel::UNIT, p), Some((q(1), p)));
        assert!(m.integral(c) && m.integral(p) && !m.integral(v1));
        assert_eq!(m.deg(v1) + m.deg(c), 3);
        assert_eq!(m.euler(), 24);
    }

    #[test]
    fn config_roundtrip() {
        let m = SurfaceModel::from_json(
            r#"{"rank": 2, "gram": [[2, "1/2"], ["1/2", -4]], "points": 2, "mode": "cohomology"}"#,
        )
        .unwrap();
        assert_eq!(m.divisors().entry(0, 1), &frac(1, 2));
        assert_eq!(m.mode(), Mode::Cohomology);
        assert_eq!(m.state_basis().len(), 4);
        let again = SurfaceModel::from_json(&m.canonical_json()).unwrap();
        assert_eq!(again, m);
        assert!(SurfaceModel::from_json(r#"{"rank": 1, "gram": [["0.5"]]}"#).is_err());
        assert!(SurfaceModel::from_json(r#"{"rank": 2, "gram": [[1]]}"#).is_err());
    }
}
