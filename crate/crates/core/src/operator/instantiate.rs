use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::Zero;
use rayon::prelude::*;

use super::expr::OperatorExpr;
use crate::bv_ring::{MultiPointClass, SurfaceModel};
use crate::error::{Error, Result};
use crate::fock::{apply_word, graded_basis, FockState, FockVector};
use crate::matrix::SparseMatrix;
use crate::scalar::{q, Q};

/// Ordered basis of one weight piece with a reverse index.
#[derive(Debug)]
pub struct GradedBasis {
    weight: u32,
    states: Vec<FockState>,
    index: HashMap<FockState, usize>,
}

impl GradedBasis {
    pub fn new(model: &SurfaceModel, weight: u32) -> Self {
        let states = graded_basis(model, weight);
        let index = states
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        Self {
            weight,
            states,
            index,
        }
    }

    fn empty(weight: u32) -> Self {
        Self {
            weight,
            states: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn states(&self) -> &[FockState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, s: &FockState) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Coordinates of `v`; fails if `v` leaves this piece.
    pub fn coordinates(&self, v: &FockVector) -> Result<BTreeMap<usize, Q>> {
        let mut out = BTreeMap::new();
        for (s, c) in v.terms() {
            let i = self.index_of(s).ok_or_else(|| {
                Error::Grading(format!("state of weight {} outside basis", s.weight()))
            })?;
            out.insert(i, c.clone());
        }
        Ok(out)
    }

    pub fn vector(&self, coords: &BTreeMap<usize, Q>) -> FockVector {
        let mut v = FockVector::zero();
        for (&i, c) in coords {
            v.add_state(self.states[i].clone(), c.clone());
        }
        v
    }
}

/// An operator restricted to the weight-`n` piece.
#[derive(Clone, Debug)]
pub struct ConcreteOperator {
    pub source: Arc<GradedBasis>,
    pub target: Arc<GradedBasis>,
    pub degree_shift: Option<i64>,
    pub matrix: SparseMatrix,
}

impl ConcreteOperator {
    pub fn source_weight(&self) -> u32 {
        self.source.weight
    }

    pub fn weight_shift(&self) -> i64 {
        self.target.weight as i64 - self.source.weight as i64
    }

    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        let x = self.source.coordinates(v)?;
        let mut out = BTreeMap::<usize, Q>::new();
        for (c, xc) in x {
            for (r, a) in self.matrix.column(c) {
                *out.entry(*r).or_insert_with(Q::zero) += a * &xc;
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(self.target.vector(&out))
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.source.weight != other.source.weight || self.target.weight != other.target.weight {
            return Err(Error::Grading(format!(
                "weights {}->{} vs {}->{}",
                self.source.weight, self.target.weight, other.source.weight, other.target.weight
            )));
        }
        Ok(())
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            matrix: self.matrix.plus(&other.matrix)?,
            degree_shift: merge_degree(self, other)?,
            ..self.clone()
        })
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.plus(&other.scaled(&q(-1)))
    }

    pub fn scaled(&self, s: &Q) -> Self {
        Self {
            matrix: self.matrix.scaled(s),
            ..self.clone()
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if other.target.weight != self.source.weight {
            return Err(Error::Grading(format!(
                "cannot compose {}->{} after {}->{}",
                self.source.weight, self.target.weight, other.source.weight, other.target.weight
            )));
        }
        Ok(Self {
            source: other.source.clone(),
            target: self.target.clone(),
            degree_shift: match (self.degree_shift, other.degree_shift) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
            matrix: self.matrix.mul(&other.matrix)?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }
}

fn merge_degree(a: &ConcreteOperator, b: &ConcreteOperator) -> Result<Option<i64>> {
    Ok(if a.is_zero() {
        b.degree_shift
    } else if b.is_zero() || a.degree_shift == b.degree_shift {
        a.degree_shift
    } else {
        None
    })
}

/// Builds and memoizes matrices of operator expressions over one model.
pub struct Instantiator {
    model: SurfaceModel,
    widen: u32,
    bases: Mutex<HashMap<u32, Arc<GradedBasis>>>,
    memo: Mutex<HashMap<(String, u32), Arc<ConcreteOperator>>>,
    words: Mutex<HashMap<(String, u32), Arc<Words>>>,
}

type Words = Vec<(Vec<i32>, MultiPointClass)>;

impl Instantiator {
    pub fn new(model: SurfaceModel) -> Self {
        Self::with_widening(model, 0)
    }

    /// Extra index range beyond the weight bound; results must not depend on it.
    pub fn with_widening(model: SurfaceModel, widen: u32) -> Self {
        Self {
            model,
            widen,
            bases: Mutex::default(),
            memo: Mutex::default(),
            words: Mutex::default(),
        }
    }

    pub fn model(&self) -> &SurfaceModel {
        &self.model
    }

    pub fn basis(&self, weight: u32) -> Arc<GradedBasis> {
        if let Some(b) = self.bases.lock().unwrap().get(&weight) {
            return b.clone();
        }
        let b = Arc::new(GradedBasis::new(&self.model, weight));
        self.bases
            .lock()
            .unwrap()
            .entry(weight)
            .or_insert(b)
            .clone()
    }

    fn target_basis(&self, n: u32, shift: i32) -> Arc<GradedBasis> {
        let w = n as i64 + shift as i64;
        if w < 0 {
            Arc::new(GradedBasis::empty(0))
        } else {
            self.basis(w as u32)
        }
    }

    /// The matrix of `expr` on the weight-`n` piece.
    pub fn instantiate(&self, expr: &OperatorExpr, n: u32) -> Result<Arc<ConcreteOperator>> {
        let key = (expr.print(&self.model), n);
        if let Some(op) = self.memo.lock().unwrap().get(&key) {
            return Ok(op.clone());
        }
        let op = Arc::new(self.build(expr, n)?);
        self.memo.lock().unwrap().insert(key, op.clone());
        Ok(op)
    }

    fn build(&self, expr: &OperatorExpr, n: u32) -> Result<ConcreteOperator> {
        match expr {
            OperatorExpr::Sum(items) => {
                let shift = expr.weight_shift()?;
                let mut acc = self.zero_op(n, shift, expr.degree_shift(&self.model)?);
                for x in items {
                    acc = acc.plus(&*self.instantiate(x, n)?)?;
                }
                Ok(acc)
            }
            OperatorExpr::Scale(s, x) => Ok(self.instantiate(x, n)?.scaled(s)),
            // products go column by column so no intermediate basis is built
            OperatorExpr::Compose(..) | OperatorExpr::Bracket(..) => {
                let shift = expr.weight_shift()?;
                let mut op = self.zero_op(n, shift, expr.degree_shift(&self.model)?);
                if n as i64 + (shift as i64) < 0 {
                    return Ok(op);
                }
                let target = op.target.clone();
                let cols = op
                    .source
                    .states
                    .par_iter()
                    .map(|state| {
                        let y = self.apply(expr, &FockVector::basis(state.clone()))?;
                        target.coordinates(&y)
                    })
                    .collect::<Result<Vec<_>>>()?;
                op.matrix = SparseMatrix::from_columns(target.len(), cols);
                Ok(op)
            }
            atom => self.build_atom(atom, n),
        }
    }

    /// Applies `expr` to an arbitrary vector.
    pub fn apply(&self, expr: &OperatorExpr, x: &FockVector) -> Result<FockVector> {
        if x.is_zero() {
            return Ok(FockVector::zero());
        }
        match expr {
            OperatorExpr::Sum(items) => {
                let mut acc = FockVector::zero();
                for item in items {
                    acc.add_assign_scaled(&self.apply(item, x)?, &q(1));
                }
                Ok(acc)
            }
            OperatorExpr::Scale(s, a) => Ok(self.apply(a, x)?.scaled(s)),
            OperatorExpr::Compose(a, b) => self.apply(a, &self.apply(b, x)?),
            OperatorExpr::Bracket(a, b) => {
                let ab = self.apply(a, &self.apply(b, x)?)?;
                let ba = self.apply(b, &self.apply(a, x)?)?;
                Ok(ab.minus(&ba))
            }
            atom => {
                let mut by_weight: BTreeMap<u32, FockVector> = BTreeMap::new();
                for (s, c) in x.terms() {
                    by_weight
                        .entry(s.weight())
                        .or_default()
                        .add_state(s.clone(), c.clone());
                }
                let mut out = FockVector::zero();
                for (w, part) in by_weight {
                    for (word, cls) in self.words(atom, w)?.iter() {
                        out.add_assign_scaled(&apply_word(&self.model, word, cls, &part)?, &q(1));
                    }
                }
                Ok(out)
            }
        }
    }

    /// Index words of an atom acting on weight `n`, memoized.
    fn words(&self, atom: &OperatorExpr, n: u32) -> Result<Arc<Words>> {
        let key = (atom.print(&self.model), n);
        if let Some(w) = self.words.lock().unwrap().get(&key) {
            return Ok(w.clone());
        }
        let model = &self.model;
        let mut words = Vec::new();
        let shift = atom.weight_shift()?;
        if n as i64 + shift as i64 >= 0 {
            for s in &atom.lower(model, n)? {
                for a in s.assignments(n, self.widen) {
                    let (word, cls) = s.instance(model, &a);
                    if !cls.is_zero() {
                        words.push((word, cls));
                    }
                }
            }
        }
        let words = Arc::new(words);
        self.words.lock().unwrap().insert(key, words.clone());
        Ok(words)
    }

    fn zero_op(&self, n: u32, shift: i32, degree_shift: Option<i64>) -> ConcreteOperator {
        let source = self.basis(n);
        let target = self.target_basis(n, shift);
        let matrix = SparseMatrix::zero(target.len(), source.len());
        ConcreteOperator {
            source,
            target,
            degree_shift,
            matrix,
        }
    }

    fn build_atom(&self, atom: &OperatorExpr, n: u32) -> Result<ConcreteOperator> {
        let model = &self.model;
        let shift = atom.weight_shift()?;
        let mut op = self.zero_op(n, shift, atom.degree_shift(model)?);
        if n as i64 + (shift as i64) < 0 {
            return Ok(op);
        }
        let words = self.words(atom, n)?;
        let target = op.target.clone();
        let cols = op
            .source
            .states
            .par_iter()
            .map(|state| {
                let x = FockVector::basis(state.clone());
                let mut y = FockVector::zero();
                for (word, cls) in words.iter() {
                    y.add_assign_scaled(&apply_word(model, word, cls, &x)?, &q(1));
                }
                target.coordinates(&y)
            })
            .collect::<Result<Vec<_>>>()?;
        op.matrix = SparseMatrix::from_columns(target.len(), cols);
        Ok(op)
    }
}
