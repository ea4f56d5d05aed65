use std::collections::BTreeMap;

use num_traits::Zero;

use super::{Basis, SurfaceModel};
use crate::scalar::{fmt_linear, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairKind {
    /// The diagonal `Δ_ij`.
    Diagonal,
    /// Transcendental remainder of a Künneth-expanded diagonal,
    /// `Σ t_a ⊗ t_a^∨` over a basis of `H^2(S)` orthogonal to the divisors.
    Transcendental,
}

/// Slot pair `a < b` (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pair {
    pub a: u8,
    pub b: u8,
    pub kind: PairKind,
}

impl Pair {
    pub fn new(x: usize, y: usize, kind: PairKind) -> Self {
        debug_assert_ne!(x, y);
        let (a, b) = if x < y { (x, y) } else { (y, x) };
        Pair {
            a: a as u8,
            b: b as u8,
            kind,
        }
    }

    pub fn diagonal(x: usize, y: usize) -> Self {
        Self::new(x, y, PairKind::Diagonal)
    }

    pub fn contains(&self, s: usize) -> bool {
        self.a as usize == s || self.b as usize == s
    }

    pub fn other(&self, s: usize) -> usize {
        if self.a as usize == s {
            self.b as usize
        } else {
            self.a as usize
        }
    }
}

/// Normal-form monomial: disjoint pairs over undecorated slots, basis
/// decorations elsewhere (matched slots hold the unit).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub pairs: Vec<Pair>,
    pub deco: Vec<Basis>,
}

impl Term {
    pub fn unit(slots: usize) -> Self {
        Term {
            pairs: Vec::new(),
            deco: vec![SurfaceModel::UNIT; slots],
        }
    }

    pub fn slots(&self) -> usize {
        self.deco.len()
    }

    pub fn degree(&self, model: &SurfaceModel) -> usize {
        2 * self.pairs.len() + self.deco.iter().map(|&b| model.deg(b)).sum::<usize>()
    }

    /// Relabels slot `i` as `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Term {
        let mut deco = vec![SurfaceModel::UNIT; self.deco.len()];
        for (i, &b) in self.deco.iter().enumerate() {
            deco[perm[i]] = b;
        }
        let mut pairs: Vec<Pair> = self
            .pairs
            .iter()
            .map(|p| Pair::new(perm[p.a as usize], perm[p.b as usize], p.kind))
            .collect();
        pairs.sort();
        Term { pairs, deco }
    }

    pub fn display(&self, model: &SurfaceModel) -> String {
        let mut parts = Vec::new();
        for p in &self.pairs {
            let tag = match p.kind {
                super::PairKind::Diagonal => "D",
                super::PairKind::Transcendental => "T",
            };
            parts.push(format!("{tag}({},{})", p.a + 1, p.b + 1));
        }
        for (slot, &b) in self.deco.iter().enumerate() {
            if b == SurfaceModel::UNIT {
                continue;
            }
            let label = model.basis_label(b);
            if b == model.point() {
                parts.push(format!("c{}", slot + 1));
            } else {
                parts.push(format!("{label}_{}", slot + 1));
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Element of the model of `A*(S^k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPointClass {
    slots: usize,
    terms: BTreeMap<Term, Q>,
}

impl MultiPointClass {
    pub fn zero(slots: usize) -> Self {
        Self {
            slots,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(slots: usize) -> Self {
        Self::from_term(Q::from_integer(1.into()), Term::unit(slots))
    }

    pub fn from_term(coeff: Q, term: Term) -> Self {
        let mut c = Self::zero(term.slots());
        c.add_term(term, coeff);
        c
    }

    /// Decorations on the given slots, unit elsewhere. Not reduced: callers
    /// pass distinct slots.
    pub fn decorated(slots: usize, decos: &[(usize, Basis)]) -> Self {
        let mut t = Term::unit(slots);
        for &(s, b) in decos {
            t.deco[s] = b;
        }
        Self::from_term(Q::from_integer(1.into()), t)
    }

    /// `Δ_ij` on `slots` slots.
    pub fn diagonal(slots: usize, i: usize, j: usize) -> Self {
        let mut t = Term::unit(slots);
        t.pairs.push(Pair::diagonal(i, j));
        Self::from_term(Q::from_integer(1.into()), t)
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Term, &Q)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Term, Q)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, t: &Term) -> Q {
        self.terms.get(t).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, term: Term, coeff: Q) {
        debug_assert_eq!(term.slots(), self.slots);
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(term) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &MultiPointClass, s: &Q) {
        for (t, c) in other.terms() {
            self.add_term(t.clone(), c * s);
        }
    }

    pub fn plus(&self, other: &MultiPointClass) -> Self {
        let mut r = self.clone();
        r.add_assign_scaled(other, &Q::from_integer(1.into()));
        r
    }

    pub fn minus(&self, other: &MultiPointClass) -> Self {
        let mut r = self.clone();
        r.add_assign_scaled(other, &Q::from_integer((-1).into()));
        r
    }

    pub fn scaled(&self, s: &Q) -> Self {
        let mut r = Self::zero(self.slots);
        if s.is_zero() {
            return r;
        }
        for (t, c) in self.terms() {
            r.terms.insert(t.clone(), c * s);
        }
        r
    }

    /// Sorted distinct degrees of the terms.
    pub fn degrees(&self, model: &SurfaceModel) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(|t| t.degree(model)).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// The degree if homogeneous (zero counts as homogeneous of degree 0).
    pub fn homogeneous_degree(&self, model: &SurfaceModel) -> Option<usize> {
        match self.degrees(model).as_slice() {
            [] => Some(0),
            [d] => Some(*d),
            _ => None,
        }
    }

    pub fn display(&self, model: &SurfaceModel) -> String {
        fmt_linear(
            self.terms
                .iter()
                .map(|(t, c)| (c.clone(), t.display(model))),
        )
    }
}

impl MultiPointClass {
    /// `self ⊗ other` on `self.slots() + other.slots()` slots.
    pub fn tensor(&self, other: &MultiPointClass) -> MultiPointClass {
        let shift = self.slots as u8;
        let mut out = MultiPointClass::zero(self.slots + other.slots);
        for (ta, ca) in self.terms() {
            for (tb, cb) in other.terms() {
                let mut deco = ta.deco.clone();
                deco.extend_from_slice(&tb.deco);
                let mut pairs = ta.pairs.clone();
                pairs.extend(tb.pairs.iter().map(|p| Pair {
                    a: p.a + shift,
                    b: p.b + shift,
                    kind: p.kind,
                }));
                out.add_term(Term { pairs, deco }, ca * cb);
            }
        }
        out
    }
}
