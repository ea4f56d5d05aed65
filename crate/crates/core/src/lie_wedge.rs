//! The Lie algebra `∧²W` for `W = A¹(Hilb^n) ⊕ U` and its map into operators.
//!
//! Basis of `W` is `(v_1, …, v_r, δ, e, f)` with `(δ,δ) = 2 − 2n`,
//! `(e,f) = 1` and `(e,e) = (f,f) = 0`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::bv_ring::SurfaceModel;
use crate::error::{Error, Result};
use crate::operator::{
    bracket, e_general, ft_general, h_op, scale, sum, DivisorClass, OperatorExpr,
};
use crate::scalar::{fmt_linear, frac, q, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WedgeAmbient {
    rank: usize,
    n: u32,
    gram: Vec<Vec<Q>>,
    labels: Vec<String>,
}

impl WedgeAmbient {
    pub fn new(model: &SurfaceModel, n: u32) -> Arc<Self> {
        let r = model.rank();
        let d = r + 3;
        let mut gram = vec![vec![Q::zero(); d]; d];
        for (i, row) in model.divisors().gram().iter().enumerate() {
            gram[i][..r].clone_from_slice(row);
        }
        gram[r][r] = q(2 - 2 * n as i64);
        gram[r + 1][r + 2] = q(1);
        gram[r + 2][r + 1] = q(1);
        let mut labels = model.divisors().labels().to_vec();
        labels.extend(["delta", "e", "f"].map(String::from));
        Arc::new(Self {
            rank: r,
            n,
            gram,
            labels,
        })
    }

    pub fn dim(&self) -> usize {
        self.rank + 3
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn delta(&self) -> usize {
        self.rank
    }

    pub fn e(&self) -> usize {
        self.rank + 1
    }

    pub fn f(&self) -> usize {
        self.rank + 2
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn form(&self, i: usize, j: usize) -> &Q {
        &self.gram[i][j]
    }

    pub fn pair(&self, x: &[Q], y: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (i, xi) in x.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                acc += xi * &self.gram[i][j] * yj;
            }
        }
        acc
    }

    /// `dim ∧²W`.
    pub fn wedge_dim(&self) -> usize {
        let d = self.dim();
        d * (d - 1) / 2
    }
}

/// An antisymmetric tensor, stored on pairs `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeElement {
    ambient: Arc<WedgeAmbient>,
    coords: BTreeMap<(usize, usize), Q>,
}

impl WedgeElement {
    pub fn zero(ambient: &Arc<WedgeAmbient>) -> Self {
        Self {
            ambient: ambient.clone(),
            coords: BTreeMap::new(),
        }
    }

    /// `e_i ∧ e_j`.
    pub fn basis(ambient: &Arc<WedgeAmbient>, i: usize, j: usize) -> Self {
        let mut x = Self::zero(ambient);
        x.add(i, j, q(1));
        x
    }

    /// `a ∧ b` for vectors in `W`.
    pub fn wedge(ambient: &Arc<WedgeAmbient>, a: &[Q], b: &[Q]) -> Self {
        let mut x = Self::zero(ambient);
        for (i, ai) in a.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, bj) in b.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                x.add(i, j, ai * bj);
            }
        }
        x
    }

    pub fn ambient(&self) -> &Arc<WedgeAmbient> {
        &self.ambient
    }

    pub fn coords(&self) -> &BTreeMap<(usize, usize), Q> {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    /// Adds `c · e_i ∧ e_j`, folding onto `i < j`.
    pub fn add(&mut self, i: usize, j: usize, c: Q) {
        if i == j || c.is_zero() {
            return;
        }
        let (key, c) = if i < j { ((i, j), c) } else { ((j, i), -c) };
        let e = self.coords.entry(key).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.coords.remove(&key);
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ambient == other.ambient {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (&(i, j), c) in &other.coords {
            out.add(i, j, c.clone());
        }
        Ok(out)
    }

    pub fn scaled(&self, s: &Q) -> Self {
        let mut out = Self::zero(&self.ambient);
        for (&(i, j), c) in &self.coords {
            out.add(i, j, c * s);
        }
        out
    }

    /// `[a∧b, c∧d] = (a,d)b∧c − (a,c)b∧d − (b,d)a∧c + (b,c)a∧d`, bilinearly.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let g = |i, j| self.ambient.form(i, j);
        let mut out = Self::zero(&self.ambient);
        for (&(a, b), x) in &self.coords {
            for (&(c, d), y) in &other.coords {
                let xy = x * y;
                out.add(b, c, g(a, d) * &xy);
                out.add(b, d, -(g(a, c) * &xy));
                out.add(a, c, -(g(b, d) * &xy));
                out.add(a, d, g(b, c) * &xy);
            }
        }
        Ok(out)
    }

    /// `(a∧b)v = (b,v)a − (a,v)b`.
    pub fn act(&self, v: &[Q]) -> Vec<Q> {
        let amb = &self.ambient;
        let mut out = vec![Q::zero(); amb.dim()];
        for (&(a, b), x) in &self.coords {
            let bv: Q = (0..amb.dim()).map(|k| amb.form(b, k) * &v[k]).sum();
            let av: Q = (0..amb.dim()).map(|k| amb.form(a, k) * &v[k]).sum();
            out[a] += x * bv;
            out[b] -= x * av;
        }
        out
    }

    /// The operator `ρ(x)`: `e∧a ↦ e_a`, `f∧a ↦ −½f̃_a`, `e∧f ↦ ½h`,
    /// `a∧b ↦ ½κ_ab − ½(a,b)h`.
    pub fn rho(&self) -> OperatorExpr {
        let amb = &self.ambient;
        let (e, f) = (amb.e(), amb.f());
        let div = |i: usize| DivisorClass::basis(amb.rank, i);
        let half = frac(1, 2);
        let mut items = Vec::new();
        for (&(i, j), c) in &self.coords {
            // i < j, so e and f only ever appear as the second factor
            let term = if (i, j) == (e, f) {
                scale(half.clone(), h_op())
            } else if j == e {
                scale(q(-1), e_general(div(i)))
            } else if j == f {
                scale(half.clone(), ft_general(div(i)))
            } else {
                let kappa = scale(half.clone(), bracket(e_general(div(i)), ft_general(div(j))));
                let g = amb.form(i, j);
                if g.is_zero() {
                    kappa
                } else {
                    sum(vec![kappa, scale(-(g * &half), h_op())])
                }
            };
            items.push(scale(c.clone(), term));
        }
        sum(items)
    }

    pub fn display(&self) -> String {
        let l = self.ambient.labels();
        fmt_linear(
            self.coords
                .iter()
                .map(|(&(i, j), c)| (c.clone(), format!("{}^{}", l[i], l[j]))),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bv_ring::Mode;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn amb(n: u32) -> Arc<WedgeAmbient> {
        WedgeAmbient::new(&SurfaceModel::diagonal(&[2], Mode::Chow), n)
    }

    fn random(a: &Arc<WedgeAmbient>, rng: &mut ChaCha8Rng) -> WedgeElement {
        let mut x = WedgeElement::zero(a);
        for i in 0..a.dim() {
            for j in i + 1..a.dim() {
                x.add(i, j, q(rng.gen_range(-3..=3)));
            }
        }
        x
    }

    #[test]
    fn sl2_inside() {
        let a = amb(2);
        let (v, e, f) = (0, a.e(), a.f());
        let ev = WedgeElement::basis(&a, e, v);
        let fv = WedgeElement::basis(&a, f, v);
        let ef = WedgeElement::basis(&a, e, f);
        // [e∧v, f∧v] = −v∧v − (v,v) e∧f
        assert_eq!(ev.bracket(&fv).unwrap(), ef.scaled(&q(-2)));
        let h = ef.scaled(&q(2));
        assert_eq!(h.bracket(&ev).unwrap(), ev.scaled(&q(2)));
        assert!(ev
            .bracket(&WedgeElement::basis(&a, e, a.delta()))
            .unwrap()
            .is_zero());
        assert_eq!(a.wedge_dim(), 6);
    }

    #[test]
    fn action_examples() {
        let a = amb(2);
        let ef = WedgeElement::basis(&a, a.e(), a.f());
        let mut e = vec![Q::zero(); a.dim()];
        e[a.e()] = q(1);
        assert_eq!(ef.act(&e), e);
    }

    #[test]
    fn jacobi_and_so_properties() {
        let a = amb(3);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let (x, y, z) = (
                random(&a, &mut rng),
                random(&a, &mut rng),
                random(&a, &mut rng),
            );
            let j = x
                .bracket(&y.bracket(&z).unwrap())
                .unwrap()
                .plus(&y.bracket(&z.bracket(&x).unwrap()).unwrap())
                .unwrap()
                .plus(&z.bracket(&x.bracket(&y).unwrap()).unwrap())
                .unwrap();
            assert!(j.is_zero());
            let v: Vec<Q> = (0..a.dim()).map(|_| q(rng.gen_range(-4..=4))).collect();
            let w: Vec<Q> = (0..a.dim()).map(|_| q(rng.gen_range(-4..=4))).collect();
            assert!((a.pair(&x.act(&v), &w) + a.pair(&v, &x.act(&w))).is_zero());
            let lhs = x.bracket(&y).unwrap().act(&v);
            let rhs: Vec<Q> = x
                .act(&y.act(&v))
                .into_iter()
                .zip(y.act(&x.act(&v)))
                .map(|(p, m)| p - m)
                .collect();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn ambient_mismatch() {
        let x = WedgeElement::basis(&amb(2), 0, 1);
        let y = WedgeElement::basis(&amb(3), 0, 1);
        assert_eq!(x.bracket(&y), Err(Error::AmbientMismatch));
    }
}

#[cfg(test)]
mod rho_tests {
    use super::*;
    use crate::bv_ring::Mode;
    use crate::operator::Instantiator;

    #[test]
    fn rho_on_generators_and_brackets() {
        let m = SurfaceModel::diagonal(&[2], Mode::Chow);
        let a = WedgeAmbient::new(&m, 2);
        let inst = Instantiator::new(m.clone());
        let mat = |x: &OperatorExpr| inst.instantiate(x, 2).unwrap().matrix.clone();
        let ed = WedgeElement::basis(&a, a.e(), a.delta());
        assert_eq!(mat(&ed.rho()), mat(&crate::operator::e_delta(&m)));
        let h = WedgeElement::basis(&a, a.e(), a.f()).scaled(&q(2));
        assert_eq!(mat(&h.rho()), mat(&h_op()));
        let d = a.dim();
        let pairs: Vec<(usize, usize)> = (0..d)
            .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
            .collect();
        for &(i, j) in &pairs {
            for &(k, l) in &pairs {
                let x = WedgeElement::basis(&a, i, j);
                let y = WedgeElement::basis(&a, k, l);
                let lhs = mat(&x.bracket(&y).unwrap().rho());
                let rhs = mat(&bracket(x.rho(), y.rho()));
                assert_eq!(lhs, rhs, "[{}, {}]", x.display(), y.display());
            }
        }
    }
}
