//! Fock-space model of `⊕_n A*(Hilb^n S)`.
//!
//! A state `q_{n_1}⋯q_{n_k}(C)|0⟩` is stored with weights sorted descending
//! and `C` replaced by the representative of its orbit under permutations of
//! slots with equal weight (creation operators commute).

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use num_traits::Zero;

use crate::bv_ring::{Basis, BasisKind, MultiPointClass, Pair, PairKind, SurfaceModel, Term};
use crate::error::{Error, Result};
use crate::scalar::{fmt_linear, q, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockState {
    weights: Vec<u32>,
    term: Term,
}

impl FockState {
    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn term(&self) -> &Term {
        &self.term
    }

    pub fn weight(&self) -> u32 {
        self.weights.iter().sum()
    }

    /// `Σ (n_j − 1) + deg(class)`.
    pub fn chow_degree(&self, model: &SurfaceModel) -> usize {
        self.weights.iter().map(|&w| w as usize - 1).sum::<usize>() + self.term.degree(model)
    }

    pub fn display(&self, model: &SurfaceModel) -> String {
        if self.weights.is_empty() {
            return "|0>".into();
        }
        let word: String = self.weights.iter().map(|w| format!("q{w}")).collect();
        format!("{word}[{}]", self.term.display(model))
    }
}

type Perms = Vec<Vec<usize>>;

thread_local! {
    static STABILIZERS: RefCell<HashMap<Vec<u32>, Rc<Perms>>> = RefCell::new(HashMap::new());
}

/// Slot permutations preserving a descending weight vector, identity excluded.
fn stabilizer(weights: &[u32]) -> Rc<Vec<Vec<usize>>> {
    STABILIZERS.with(|cache| {
        if let Some(p) = cache.borrow().get(weights) {
            return p.clone();
        }
        let mut perms: Vec<Vec<usize>> = vec![Vec::new()];
        let mut start = 0;
        while start < weights.len() {
            let mut end = start;
            while end < weights.len() && weights[end] == weights[start] {
                end += 1;
            }
            let block: Vec<usize> = (start..end).collect();
            let block_perms = permutations(&block);
            perms = perms
                .into_iter()
                .flat_map(|p| {
                    block_perms.iter().map(move |bp| {
                        let mut q = p.clone();
                        q.extend_from_slice(bp);
                        q
                    })
                })
                .collect();
            start = end;
        }
        perms.retain(|p| p.iter().enumerate().any(|(i, &x)| i != x));
        let rc = Rc::new(perms);
        cache.borrow_mut().insert(weights.to_vec(), rc.clone());
        rc
    })
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Orbit representative of a term under the weight stabilizer.
pub fn canonical_term(weights: &[u32], term: Term) -> Term {
    let perms = stabilizer(weights);
    let mut best = term.clone();
    for p in perms.iter() {
        let t = term.permuted(p);
        if t < best {
            best = t;
        }
    }
    best
}

/// Rational combination of Fock states.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FockVector {
    terms: BTreeMap<FockState, Q>,
}

impl FockVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn vacuum() -> Self {
        Self::basis(FockState {
            weights: Vec::new(),
            term: Term::unit(0),
        })
    }

    pub fn basis(state: FockState) -> Self {
        let mut v = Self::zero();
        v.add_state(state, q(1));
        v
    }

    /// `(1/n!) q_1(u)^n |0⟩`, the fundamental class of `Hilb^n`.
    pub fn unit_class(n: usize) -> Self {
        let fact: Q = (1..=n as i64).map(q).product();
        let state = FockState {
            weights: vec![1; n],
            term: Term::unit(n),
        };
        let mut v = Self::zero();
        v.add_state(state, fact.recip());
        v
    }

    /// `q_{n_1}⋯q_{n_k}(C)|0⟩` for positive `n_j` in any order.
    pub fn from_class(
        model: &SurfaceModel,
        weights: &[u32],
        class: &MultiPointClass,
    ) -> Result<Self> {
        if weights.len() != class.slots() {
            return Err(Error::ArityMismatch {
                word: weights.len(),
                slots: class.slots(),
            });
        }
        if weights.contains(&0) {
            return Ok(Self::zero());
        }
        let mut v = Self::zero();
        v.add_creators(weights, &model.normalize(class), &q(1));
        Ok(v)
    }

    /// `q_{n_1}(x_1)⋯q_{n_k}(x_k)|0⟩`.
    pub fn creators(model: &SurfaceModel, items: &[(u32, Basis)]) -> Self {
        let weights: Vec<u32> = items.iter().map(|x| x.0).collect();
        let decos: Vec<(usize, Basis)> = items.iter().enumerate().map(|(i, x)| (i, x.1)).collect();
        Self::from_class(
            model,
            &weights,
            &MultiPointClass::decorated(items.len(), &decos),
        )
        .expect("matching arity")
    }

    fn add_creators(&mut self, weights: &[u32], class: &MultiPointClass, scale: &Q) {
        let mut order: Vec<usize> = (0..weights.len()).collect();
        order.sort_by(|&a, &b| weights[b].cmp(&weights[a]));
        // slot order[i] moves to position i
        let mut perm = vec![0; weights.len()];
        for (pos, &slot) in order.iter().enumerate() {
            perm[slot] = pos;
        }
        let sorted: Vec<u32> = order.iter().map(|&s| weights[s]).collect();
        for (t, c) in class.terms() {
            let t = canonical_term(&sorted, t.permuted(&perm));
            self.add_state(
                FockState {
                    weights: sorted.clone(),
                    term: t,
                },
                c * scale,
            );
        }
    }

    pub fn add_state(&mut self, state: FockState, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(state).or_insert_with(Q::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn add_assign_scaled(&mut self, other: &FockVector, s: &Q) {
        for (st, c) in &other.terms {
            self.add_state(st.clone(), c * s);
        }
    }

    pub fn plus(&self, other: &FockVector) -> Self {
        let mut r = self.clone();
        r.add_assign_scaled(other, &q(1));
        r
    }

    pub fn minus(&self, other: &FockVector) -> Self {
        let mut r = self.clone();
        r.add_assign_scaled(other, &q(-1));
        r
    }

    pub fn scaled(&self, s: &Q) -> Self {
        let mut r = Self::zero();
        r.add_assign_scaled(self, s);
        r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FockState, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, s: &FockState) -> Q {
        self.terms.get(s).cloned().unwrap_or_else(Q::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Splits into `(weight, chow degree)` components.
    pub fn grade(&self, model: &SurfaceModel) -> BTreeMap<(u32, usize), FockVector> {
        let mut out: BTreeMap<(u32, usize), FockVector> = BTreeMap::new();
        for (s, c) in &self.terms {
            out.entry((s.weight(), s.chow_degree(model)))
                .or_default()
                .add_state(s.clone(), c.clone());
        }
        out
    }

    /// Applies the cycle-class map to every state class.
    pub fn kunneth_expand(&self, model: &SurfaceModel) -> Result<FockVector> {
        let mut out = FockVector::zero();
        for (s, c) in &self.terms {
            let cls = MultiPointClass::from_term(c.clone(), s.term.clone());
            out.add_creators(&s.weights, &model.kunneth_expand(&cls)?, &q(1));
        }
        Ok(out)
    }

    pub fn display(&self, model: &SurfaceModel) -> String {
        fmt_linear(
            self.terms
                .iter()
                .map(|(s, c)| (c.clone(), s.display(model))),
        )
    }
}

/// Applies `q_{i_1}⋯q_{i_m}(Γ)` (leftmost acting last) by Wick contraction with
/// `[q_a, q_b] = a δ_{a+b,0} (id × Δ)`.
pub fn apply_word(
    model: &SurfaceModel,
    indices: &[i32],
    gamma: &MultiPointClass,
    x: &FockVector,
) -> Result<FockVector> {
    if indices.len() != gamma.slots() {
        return Err(Error::ArityMismatch {
            word: indices.len(),
            slots: gamma.slots(),
        });
    }
    let mut out = FockVector::zero();
    if indices.contains(&0) {
        return Ok(out);
    }
    for (state, coeff) in x.terms() {
        let mut word = indices.to_vec();
        word.extend(state.weights.iter().map(|&w| w as i32));
        let cls = gamma.tensor(&MultiPointClass::from_term(
            coeff.clone(),
            state.term.clone(),
        ));
        wick(model, word, cls, &mut out);
    }
    Ok(out)
}

fn wick(model: &SurfaceModel, word: Vec<i32>, cls: MultiPointClass, out: &mut FockVector) {
    if cls.is_zero() {
        return;
    }
    let Some(p) = word.iter().rposition(|&i| i < 0) else {
        let weights: Vec<u32> = word.iter().map(|&i| i as u32).collect();
        out.add_creators(&weights, &model.normalize(&cls), &q(1));
        return;
    };
    let a = word[p];
    for j in p + 1..word.len() {
        if word[j] != -a {
            continue;
        }
        let contracted = model.contract(&cls, p, j).scaled(&q(a as i64));
        let mut rest = word.clone();
        rest.remove(j);
        rest.remove(p);
        wick(model, rest, contracted, out);
    }
}

/// All partial matchings of `k` slots, each as sorted pair list.
fn matchings(k: usize) -> Vec<Vec<Pair>> {
    fn go(free: &[usize], acc: &mut Vec<Pair>, out: &mut Vec<Vec<Pair>>) {
        let Some((&first, rest)) = free.split_first() else {
            let mut m = acc.clone();
            m.sort();
            out.push(m);
            return;
        };
        go(rest, acc, out);
        for (idx, &other) in rest.iter().enumerate() {
            let mut remaining = rest.to_vec();
            remaining.remove(idx);
            acc.push(Pair::new(first, other, PairKind::Diagonal));
            go(&remaining, acc, out);
            acc.pop();
        }
    }
    let slots: Vec<usize> = (0..k).collect();
    let mut out = Vec::new();
    go(&slots, &mut Vec::new(), &mut out);
    out
}

/// Partitions of `n` in descending lexicographic order.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(acc.clone());
            return;
        }
        for part in (1..=max.min(n)).rev() {
            acc.push(part);
            go(n - part, part, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Canonical basis of the weight-`n` piece (all Chow degrees): partitions
/// descending, then class terms in normal-form order.
pub fn graded_basis(model: &SurfaceModel, n: u32) -> Vec<FockState> {
    let basis = model.state_basis();
    let mut out = Vec::new();
    for weights in partitions(n) {
        let k = weights.len();
        let mut seen = BTreeSet::new();
        for m in matchings(k) {
            let free: Vec<usize> = (0..k)
                .filter(|s| !m.iter().any(|p| p.contains(*s)))
                .collect();
            let mut idx = vec![0usize; free.len()];
            loop {
                let mut deco = vec![SurfaceModel::UNIT; k];
                for (f, &i) in free.iter().zip(&idx) {
                    deco[*f] = basis[i];
                }
                // a point symbol on two slots is not a normal form
                let repeated = deco.iter().enumerate().any(|(i, &b)| {
                    matches!(model.kind(b), BasisKind::Symbol(_)) && deco[i + 1..].contains(&b)
                });
                if !repeated {
                    seen.insert(canonical_term(
                        &weights,
                        Term {
                            pairs: m.clone(),
                            deco,
                        },
                    ));
                }
                // odometer
                let mut pos = 0;
                while pos < idx.len() {
                    idx[pos] += 1;
                    if idx[pos] < basis.len() {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == idx.len() {
                    break;
                }
            }
        }
        out.extend(seen.into_iter().map(|term| FockState {
            weights: weights.clone(),
            term,
        }));
    }
    out
}
