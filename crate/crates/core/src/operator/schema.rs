use num_traits::Zero;

use crate::bv_ring::{MultiPointClass, SurfaceModel};
use crate::error::{Error, Result};
use crate::scalar::{ipow, Q};

/// Range of a summation index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarSign {
    Positive,
    Negative,
    /// Any nonzero integer.
    Free,
    Fixed(i32),
}

/// `Σ_{vars, Σ vars = shift} q_{i_1}⋯q_{i_m}( Σ_t mono_t(i) · Γ_t )`, optionally
/// normal ordered. `mono_t` is the Laurent monomial `Π i_j^{e_tj}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexedTermSchema {
    vars: Vec<VarSign>,
    shift: i32,
    terms: Vec<(Vec<i32>, MultiPointClass)>,
    normal_ordered: bool,
}

impl IndexedTermSchema {
    pub fn new(
        vars: Vec<VarSign>,
        shift: i32,
        terms: Vec<(Vec<i32>, MultiPointClass)>,
        normal_ordered: bool,
    ) -> Result<Self> {
        let m = vars.len();
        for (exps, cls) in &terms {
            if exps.len() != m || cls.slots() != m {
                return Err(Error::ArityMismatch {
                    word: m,
                    slots: cls.slots(),
                });
            }
        }
        let fixed: Option<i32> = vars
            .iter()
            .map(|v| match v {
                VarSign::Fixed(i) => Some(*i),
                _ => None,
            })
            .sum();
        if fixed.is_some_and(|s| s != shift) {
            return Err(Error::Grading(format!(
                "fixed indices do not sum to {shift}"
            )));
        }
        let mut merged: Vec<(Vec<i32>, MultiPointClass)> = Vec::new();
        let mut sorted = terms;
        sorted.sort_by(|a, b| a.0.cmp(&b.0));
        for (exps, cls) in sorted {
            match merged.last_mut() {
                Some((e, c)) if *e == exps => *c = c.plus(&cls),
                _ => merged.push((exps, cls)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        Ok(Self {
            vars,
            shift,
            terms: merged,
            normal_ordered,
        })
    }

    pub fn vars(&self) -> &[VarSign] {
        &self.vars
    }

    pub fn weight_shift(&self) -> i32 {
        self.shift
    }

    pub fn terms(&self) -> &[(Vec<i32>, MultiPointClass)] {
        &self.terms
    }

    pub fn is_normal_ordered(&self) -> bool {
        self.normal_ordered
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, s: &Q) -> Self {
        let terms = if s.is_zero() {
            Vec::new()
        } else {
            self.terms
                .iter()
                .map(|(e, c)| (e.clone(), c.scaled(s)))
                .collect()
        };
        Self {
            terms,
            ..self.clone()
        }
    }

    /// `deg Γ + shift − m` for `q_{i_1}⋯q_{i_m}(Γ)`.
    pub fn degree_shift(&self, model: &SurfaceModel) -> Result<Option<i64>> {
        let mut degs: Vec<usize> = self
            .terms
            .iter()
            .flat_map(|(_, c)| c.degrees(model))
            .collect();
        degs.sort_unstable();
        degs.dedup();
        match degs.as_slice() {
            [] => Ok(None),
            [d] => Ok(Some(*d as i64 + self.shift as i64 - self.vars.len() as i64)),
            _ => Err(Error::Inhomogeneous(degs)),
        }
    }

    /// Index assignments contributing on a weight-`n` source. Annihilators
    /// deeper than `n + widen` and creators above `n + shift + widen` are
    /// dropped; normal-ordered words also need total annihilation within that bound.
    pub fn assignments(&self, n: u32, widen: u32) -> Vec<Vec<i32>> {
        let lo = -((n + widen) as i32);
        let hi = n as i32 + self.shift.max(0) + widen as i32;
        let ranges: Vec<Vec<i32>> = self
            .vars
            .iter()
            .map(|v| match v {
                VarSign::Positive => (1..=hi).collect(),
                VarSign::Negative => (lo..=-1).collect(),
                VarSign::Free => (lo..=-1).chain(1..=hi).collect(),
                VarSign::Fixed(i) => vec![*i],
            })
            .collect();
        let mut out = Vec::new();
        let mut acc = Vec::with_capacity(self.vars.len());
        self.enumerate(&ranges, 0, &mut acc, &mut out);
        if self.normal_ordered {
            out.retain(|a| a.iter().filter(|&&i| i < 0).sum::<i32>() >= lo);
        }
        out
    }

    fn enumerate(
        &self,
        ranges: &[Vec<i32>],
        sum: i32,
        acc: &mut Vec<i32>,
        out: &mut Vec<Vec<i32>>,
    ) {
        let pos = acc.len();
        if pos == ranges.len() {
            if sum == self.shift {
                out.push(acc.clone());
            }
            return;
        }
        if pos + 1 == ranges.len() {
            let last = self.shift - sum;
            if ranges[pos].contains(&last) {
                acc.push(last);
                out.push(acc.clone());
                acc.pop();
            }
            return;
        }
        for &i in &ranges[pos] {
            acc.push(i);
            self.enumerate(ranges, sum + i, acc, out);
            acc.pop();
        }
    }

    /// The word and class for one assignment, normal ordered if requested.
    pub fn instance(&self, model: &SurfaceModel, assign: &[i32]) -> (Vec<i32>, MultiPointClass) {
        let m = assign.len();
        let mut cls = MultiPointClass::zero(m);
        for (exps, c) in &self.terms {
            let coeff: Q = assign
                .iter()
                .zip(exps)
                .map(|(&i, &e)| ipow(i as i64, e))
                .product();
            cls.add_assign_scaled(c, &coeff);
        }
        if !self.normal_ordered {
            return (assign.to_vec(), cls);
        }
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| assign[b].cmp(&assign[a]));
        let mut perm = vec![0; m];
        for (pos, &slot) in order.iter().enumerate() {
            perm[slot] = pos;
        }
        let word = order.iter().map(|&s| assign[s]).collect();
        (word, model.permute(&cls, &perm).expect("valid permutation"))
    }
}
