use num_traits::{One, Signed, Zero};

use super::schema::{IndexedTermSchema, VarSign};
use crate::bv_ring::{MultiPointClass, SurfaceModel};
use crate::error::{Error, Result};
use crate::scalar::{fmt_linear, frac, q, Q};

/// An element `α + m·δ` of `A¹(S) ⊕ Qδ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    pub divisor: Vec<Q>,
    pub delta: Q,
}

impl DivisorClass {
    pub fn zero(rank: usize) -> Self {
        Self {
            divisor: vec![Q::zero(); rank],
            delta: Q::zero(),
        }
    }

    /// Basis vector `i` of `(v_1, …, v_r, δ)`.
    pub fn basis(rank: usize, i: usize) -> Self {
        let mut a = Self::zero(rank);
        if i < rank {
            a.divisor[i] = q(1);
        } else {
            a.delta = q(1);
        }
        a
    }

    pub fn delta(rank: usize) -> Self {
        Self::basis(rank, rank)
    }

    pub fn divisor(coords: Vec<Q>) -> Self {
        Self {
            divisor: coords,
            delta: Q::zero(),
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self {
            divisor: self
                .divisor
                .iter()
                .zip(&other.divisor)
                .map(|(a, b)| a + b)
                .collect(),
            delta: &self.delta + &other.delta,
        }
    }

    pub fn scaled(&self, s: &Q) -> Self {
        Self {
            divisor: self.divisor.iter().map(|a| a * s).collect(),
            delta: &self.delta * s,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.delta.is_zero() && self.divisor.iter().all(Q::is_zero)
    }

    /// Pairing on `A¹(Hilb^n)`, with `(δ,δ) = 2 − 2n`.
    pub fn pairing(&self, other: &Self, model: &SurfaceModel, n: u32) -> Q {
        model.divisors().pair(&self.divisor, &other.divisor)
            + &self.delta * &other.delta * q(2 - 2 * n as i64)
    }

    /// The divisor part as a class on one slot.
    pub fn surface_class(&self, model: &SurfaceModel) -> MultiPointClass {
        let mut out = MultiPointClass::zero(1);
        for (a, x) in self.divisor.iter().enumerate() {
            out.add_assign_scaled(&MultiPointClass::decorated(1, &[(0, model.div(a))]), x);
        }
        out
    }

    pub fn print(&self, model: &SurfaceModel) -> String {
        let labels = model.divisors().labels();
        let mut terms: Vec<(Q, String)> = self
            .divisor
            .iter()
            .zip(labels)
            .map(|(x, l)| (x.clone(), l.clone()))
            .collect();
        terms.push((self.delta.clone(), "delta".into()));
        fmt_linear(terms.into_iter().filter(|(x, _)| !x.is_zero()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OperatorExpr {
    Zero,
    /// `q_n(γ)` for a class `γ` on one slot.
    Nakajima(i32, MultiPointClass),
    /// `q_{n_1}⋯q_{n_k}(C)` with fixed indices, not normal ordered.
    Word(Vec<i32>, MultiPointClass),
    E(DivisorClass),
    Ft(DivisorClass),
    F(DivisorClass),
    H,
    L0,
    T(MultiPointClass),
    Sum(Vec<OperatorExpr>),
    Scale(Q, Box<OperatorExpr>),
    Compose(Box<OperatorExpr>, Box<OperatorExpr>),
    Bracket(Box<OperatorExpr>, Box<OperatorExpr>),
}

pub fn nakajima(n: i32, gamma: MultiPointClass) -> OperatorExpr {
    if n == 0 {
        OperatorExpr::Zero
    } else {
        OperatorExpr::Nakajima(n, gamma)
    }
}

pub fn e_div(alpha: Vec<Q>) -> OperatorExpr {
    OperatorExpr::E(DivisorClass::divisor(alpha))
}

pub fn e_delta(model: &SurfaceModel) -> OperatorExpr {
    OperatorExpr::E(DivisorClass::delta(model.rank()))
}

pub fn h_op() -> OperatorExpr {
    OperatorExpr::H
}

pub fn ft_div(alpha: Vec<Q>) -> OperatorExpr {
    OperatorExpr::Ft(DivisorClass::divisor(alpha))
}

pub fn ft_delta(model: &SurfaceModel) -> OperatorExpr {
    OperatorExpr::Ft(DivisorClass::delta(model.rank()))
}

pub fn e_general(a: DivisorClass) -> OperatorExpr {
    OperatorExpr::E(a)
}

pub fn ft_general(a: DivisorClass) -> OperatorExpr {
    OperatorExpr::Ft(a)
}

/// `f_a = f̃_a / (a,a)` on `A*(Hilb^n)`.
pub fn f_general(model: &SurfaceModel, a: DivisorClass, n: u32) -> Result<OperatorExpr> {
    if a.pairing(&a, model, n).is_zero() {
        return Err(Error::Isotropic(n as usize));
    }
    Ok(OperatorExpr::F(a))
}

pub fn t_gamma(model: &SurfaceModel, gamma: MultiPointClass) -> Result<OperatorExpr> {
    if gamma.slots() != 2 {
        return Err(Error::NotCorrespondence(gamma.slots()));
    }
    if gamma.homogeneous_degree(model).is_none() {
        return Err(Error::Inhomogeneous(gamma.degrees(model)));
    }
    Ok(recognize_correspondence(model, &gamma).unwrap_or(OperatorExpr::T(gamma)))
}

/// Maps `Γ` to a named operator when `T_Γ` is one of `0`, `e_α`, `f̃_α`, `h`.
fn recognize_correspondence(model: &SurfaceModel, gamma: &MultiPointClass) -> Option<OperatorExpr> {
    if gamma.is_zero() {
        return Some(OperatorExpr::Zero);
    }
    let c = model.point();
    let h = MultiPointClass::decorated(2, &[(1, c)])
        .minus(&MultiPointClass::decorated(2, &[(0, c)]))
        .scaled(&q(2));
    if *gamma == h {
        return Some(OperatorExpr::H);
    }
    let coords = |decos: &dyn Fn(u8) -> MultiPointClass| -> Vec<Q> {
        (0..model.rank())
            .map(|a| {
                let (t, _) = decos(model.div(a)).into_terms().next().expect("one term");
                gamma.coeff(&t)
            })
            .collect()
    };
    let alpha = coords(&|v| MultiPointClass::decorated(2, &[(0, c), (1, v)]));
    if alpha.iter().any(|x| !x.is_zero()) && *gamma == diagonal_pushforward(model, &alpha) {
        return Some(OperatorExpr::E(DivisorClass::divisor(alpha)));
    }
    let alpha: Vec<Q> = coords(&|v| MultiPointClass::decorated(2, &[(0, v)]))
        .into_iter()
        .map(|x| x / q(2))
        .collect();
    let a = DivisorClass::divisor(alpha);
    let sym = a.surface_class(model);
    let sym = model
        .pullback_insert(&sym, 1)
        .ok()?
        .plus(&model.pullback_insert(&sym, 0).ok()?);
    if !a.is_zero() && *gamma == sym.scaled(&q(2)) {
        return Some(OperatorExpr::Ft(a));
    }
    None
}

pub fn l0() -> OperatorExpr {
    OperatorExpr::L0
}

/// `κ_ab = [e_a, f̃_b]`.
pub fn kappa(a: DivisorClass, b: DivisorClass) -> OperatorExpr {
    bracket(e_general(a), ft_general(b))
}

pub fn bracket(a: OperatorExpr, b: OperatorExpr) -> OperatorExpr {
    OperatorExpr::Bracket(Box::new(a), Box::new(b))
}

pub fn compose(a: OperatorExpr, b: OperatorExpr) -> OperatorExpr {
    OperatorExpr::Compose(Box::new(a), Box::new(b))
}

/// `s·a`; unit factors and nested scalings fold.
pub fn scale(s: Q, a: OperatorExpr) -> OperatorExpr {
    match a {
        OperatorExpr::Scale(t, x) => scale(s * t, *x),
        a if s.is_one() => a,
        a => OperatorExpr::Scale(s, Box::new(a)),
    }
}

/// A sum; empty and one-term sums collapse.
pub fn sum(mut items: Vec<OperatorExpr>) -> OperatorExpr {
    match items.len() {
        0 => OperatorExpr::Zero,
        1 => items.pop().expect("one item"),
        _ => OperatorExpr::Sum(items),
    }
}

/// `Δ_*α = c_1 α_2 + α_1 c_2`.
pub fn diagonal_pushforward(model: &SurfaceModel, alpha: &[Q]) -> MultiPointClass {
    let mut out = MultiPointClass::zero(2);
    let c = model.point();
    for (a, x) in alpha.iter().enumerate() {
        let v = model.div(a);
        out.add_assign_scaled(&MultiPointClass::decorated(2, &[(0, c), (1, v)]), x);
        out.add_assign_scaled(&MultiPointClass::decorated(2, &[(0, v), (1, c)]), x);
    }
    out
}

/// `Δ_123 = Δ_12 c_3 + Δ_13 c_2 + Δ_23 c_1 − c_1c_2 − c_1c_3 − c_2c_3`.
pub fn small_diagonal(model: &SurfaceModel) -> MultiPointClass {
    let c = model.point();
    let mut out = MultiPointClass::zero(3);
    for (a, b, z) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        let d = model
            .multiply(
                &MultiPointClass::diagonal(3, a, b),
                &MultiPointClass::decorated(3, &[(z, c)]),
            )
            .expect("same slots");
        out = out
            .plus(&d)
            .minus(&MultiPointClass::decorated(3, &[(a, c), (b, c)]));
    }
    out
}

const PAIR: [VarSign; 2] = [VarSign::Positive, VarSign::Negative];
const TRIPLE: [VarSign; 3] = [VarSign::Free, VarSign::Free, VarSign::Free];

fn pair_schema(exp: i32, cls: MultiPointClass) -> IndexedTermSchema {
    IndexedTermSchema::new(PAIR.to_vec(), 0, vec![(vec![exp, 0], cls)], false).expect("pair schema")
}

fn surface_pair(model: &SurfaceModel, x: (usize, u8), y: (usize, u8)) -> MultiPointClass {
    let _ = model;
    MultiPointClass::decorated(2, &[x, y])
}

impl OperatorExpr {
    /// Summation schemas of an atom at source weight `n`; empty for zero.
    pub fn lower(&self, model: &SurfaceModel, n: u32) -> Result<Vec<IndexedTermSchema>> {
        let c = model.point();
        let mut out = Vec::new();
        match self {
            OperatorExpr::Zero => {}
            OperatorExpr::Nakajima(k, g) => {
                if g.slots() != 1 {
                    return Err(Error::ArityMismatch {
                        word: 1,
                        slots: g.slots(),
                    });
                }
                if *k != 0 {
                    out.push(IndexedTermSchema::new(
                        vec![VarSign::Fixed(*k)],
                        *k,
                        vec![(vec![0], g.clone())],
                        false,
                    )?);
                }
            }
            OperatorExpr::Word(idx, cls) => {
                if idx.len() != cls.slots() {
                    return Err(Error::ArityMismatch {
                        word: idx.len(),
                        slots: cls.slots(),
                    });
                }
                if !idx.contains(&0) {
                    out.push(IndexedTermSchema::new(
                        idx.iter().map(|&i| VarSign::Fixed(i)).collect(),
                        idx.iter().sum(),
                        vec![(vec![0; idx.len()], cls.clone())],
                        false,
                    )?);
                }
            }
            OperatorExpr::E(a) => {
                // e_α = −Σ q_n q_{−n}(Δ_*α)
                let ea = diagonal_pushforward(model, &a.divisor);
                out.push(pair_schema(0, ea.scaled(&q(-1))));
                // e_δ = −1/6 Σ :q_i q_j q_k(Δ_123):
                if !a.delta.is_zero() {
                    let cls = small_diagonal(model).scaled(&(-&a.delta / q(6)));
                    out.push(IndexedTermSchema::new(
                        TRIPLE.to_vec(),
                        0,
                        vec![(vec![0, 0, 0], cls)],
                        true,
                    )?);
                }
            }
            OperatorExpr::Ft(a) | OperatorExpr::F(a) => {
                let scale = match self {
                    OperatorExpr::F(_) => {
                        let aa = a.pairing(a, model, n);
                        if aa.is_zero() {
                            return Err(Error::Isotropic(n as usize));
                        }
                        aa.recip()
                    }
                    _ => Q::one(),
                };
                // f̃_α = −2 Σ n^{-2} q_n q_{−n}(α_1 + α_2)
                let alpha = a.surface_class(model);
                let sym = model
                    .pullback_insert(&alpha, 1)?
                    .plus(&model.pullback_insert(&alpha, 0)?);
                out.push(pair_schema(-2, sym.scaled(&(q(-2) * &scale))));
                if !a.delta.is_zero() {
                    out.push(ft_delta_schema(model).scaled(&(&a.delta * &scale)));
                }
            }
            OperatorExpr::H => {
                // h = 2 Σ (1/n) q_n q_{−n}(c_2 − c_1)
                let cls =
                    surface_pair(model, (1, c), (0, 0)).minus(&surface_pair(model, (0, c), (1, 0)));
                out.push(pair_schema(-1, cls.scaled(&q(2))));
            }
            OperatorExpr::L0 => {
                out.push(pair_schema(0, MultiPointClass::diagonal(2, 0, 1)));
            }
            OperatorExpr::T(g) => {
                // T_Γ = −Σ n^{deg Γ − 3} q_n q_{−n}(Γ')
                let deg = g
                    .homogeneous_degree(model)
                    .ok_or_else(|| Error::Inhomogeneous(g.degrees(model)))?;
                let gt = model.transpose(g)?;
                out.push(pair_schema(deg as i32 - 3, gt.scaled(&q(-1))));
            }
            _ => return Err(Error::Grading("lower() applies to atoms only".into())),
        }
        out.retain(|s| !s.is_zero());
        Ok(out)
    }

    pub fn is_atom(&self) -> bool {
        !matches!(
            self,
            OperatorExpr::Sum(_)
                | OperatorExpr::Scale(..)
                | OperatorExpr::Compose(..)
                | OperatorExpr::Bracket(..)
        )
    }

    pub fn weight_shift(&self) -> Result<i32> {
        Ok(match self {
            OperatorExpr::Nakajima(k, _) => *k,
            OperatorExpr::Word(idx, _) => idx.iter().sum(),
            OperatorExpr::Sum(items) => {
                let mut shifts = items
                    .iter()
                    .map(|x| x.weight_shift())
                    .collect::<Result<Vec<_>>>()?;
                shifts.dedup();
                match shifts.as_slice() {
                    [] => 0,
                    [d] => *d,
                    _ => return Err(Error::Grading(format!("sum of weight shifts {shifts:?}"))),
                }
            }
            OperatorExpr::Scale(_, x) => x.weight_shift()?,
            OperatorExpr::Compose(a, b) | OperatorExpr::Bracket(a, b) => {
                a.weight_shift()? + b.weight_shift()?
            }
            _ => 0,
        })
    }

    /// Chow-degree shift; `None` for zero or inhomogeneous operators.
    pub fn degree_shift(&self, model: &SurfaceModel) -> Result<Option<i64>> {
        Ok(match self {
            OperatorExpr::Zero => None,
            OperatorExpr::E(_) => Some(1),
            OperatorExpr::Ft(_) | OperatorExpr::F(_) => Some(-1),
            OperatorExpr::H | OperatorExpr::L0 => Some(0),
            OperatorExpr::Nakajima(..) | OperatorExpr::Word(..) | OperatorExpr::T(_) => {
                let mut ds = Vec::new();
                for s in &self.lower(model, 0)? {
                    match s.degree_shift(model) {
                        Ok(Some(d)) => ds.push(d),
                        Ok(None) => {}
                        Err(_) => return Ok(None),
                    }
                }
                single(ds)
            }
            OperatorExpr::Sum(items) => {
                let mut ds = Vec::new();
                for x in items {
                    if !matches!(x, OperatorExpr::Zero) {
                        match x.degree_shift(model)? {
                            Some(d) => ds.push(d),
                            None => return Ok(None),
                        }
                    }
                }
                single(ds)
            }
            OperatorExpr::Scale(_, x) => x.degree_shift(model)?,
            OperatorExpr::Compose(a, b) | OperatorExpr::Bracket(a, b) => {
                match (a.degree_shift(model)?, b.degree_shift(model)?) {
                    (Some(x), Some(y)) => Some(x + y),
                    _ => None,
                }
            }
        })
    }

    fn level(&self) -> u8 {
        match self {
            OperatorExpr::Sum(_) => 1,
            OperatorExpr::Compose(..) => 2,
            OperatorExpr::Scale(..) => 3,
            _ => 4,
        }
    }

    /// Canonical text in the expression grammar.
    pub fn print(&self, model: &SurfaceModel) -> String {
        self.print_at(model, 0)
    }

    fn print_at(&self, model: &SurfaceModel, min: u8) -> String {
        let body = match self {
            OperatorExpr::Zero => "0".to_string(),
            OperatorExpr::Nakajima(k, g) => format!("q({k}, {})", print_surface_class(model, g)),
            OperatorExpr::Word(idx, c) => {
                let idx: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
                format!("W[{}]({})", idx.join(","), c.display(model))
            }
            OperatorExpr::E(a) => format!("e({})", a.print(model)),
            OperatorExpr::Ft(a) => format!("ft({})", a.print(model)),
            OperatorExpr::F(a) => format!("f({})", a.print(model)),
            OperatorExpr::H => "h".into(),
            OperatorExpr::L0 => "L0".into(),
            OperatorExpr::T(g) => format!("T({})", g.display(model)),
            OperatorExpr::Sum(items) => {
                if items.is_empty() {
                    "()".into()
                } else {
                    let mut out = items[0].print_at(model, 2);
                    for x in &items[1..] {
                        match x {
                            OperatorExpr::Scale(s, y) if s.is_negative() => {
                                out.push_str(" - ");
                                out.push_str(&scale(-s.clone(), (**y).clone()).print_at(model, 2));
                            }
                            _ => {
                                out.push_str(" + ");
                                out.push_str(&x.print_at(model, 2));
                            }
                        }
                    }
                    out
                }
            }
            OperatorExpr::Scale(s, x) => {
                format!("{}*{}", crate::scalar::fmt_q(s), x.print_at(model, 4))
            }
            OperatorExpr::Compose(a, b) => {
                format!("{} . {}", a.print_at(model, 2), b.print_at(model, 3))
            }
            OperatorExpr::Bracket(a, b) => format!("[{}, {}]", a.print(model), b.print(model)),
        };
        if self.level() < min {
            format!("({body})")
        } else {
            body
        }
    }
}

fn single(mut ds: Vec<i64>) -> Option<i64> {
    ds.sort_unstable();
    ds.dedup();
    match ds.as_slice() {
        [d] => Some(*d),
        _ => None,
    }
}

/// Prints a one-slot class with basis labels (`u`, `v1`, `c`, `p1`).
pub fn print_surface_class(model: &SurfaceModel, g: &MultiPointClass) -> String {
    fmt_linear(
        g.terms()
            .map(|(t, c)| (c.clone(), model.basis_label(t.deco[0]))),
    )
}

/// `f̃_δ = −1/3 Σ :q_i q_j q_k(k⁻²Δ_12 + j⁻²Δ_13 + i⁻²Δ_23 + 2(jk)⁻¹c_1 + 2(ik)⁻¹c_2 + 2(ij)⁻¹c_3):`
fn ft_delta_schema(model: &SurfaceModel) -> IndexedTermSchema {
    let c = model.point();
    let third = frac(-1, 3);
    let d = |a, b| MultiPointClass::diagonal(3, a, b).scaled(&third);
    let pt = |s| MultiPointClass::decorated(3, &[(s, c)]).scaled(&(q(2) * &third));
    let terms = vec![
        (vec![0, 0, -2], d(0, 1)),
        (vec![0, -2, 0], d(0, 2)),
        (vec![-2, 0, 0], d(1, 2)),
        (vec![0, -1, -1], pt(0)),
        (vec![-1, 0, -1], pt(1)),
        (vec![-1, -1, 0], pt(2)),
    ];
    IndexedTermSchema::new(TRIPLE.to_vec(), 0, terms, true).expect("cubic schema")
}
