//! Push, pull, permutation and correspondence algebra.

use num_traits::Zero;

use super::reduce::RawProduct;
use super::{Basis, BasisKind, Mode, MultiPointClass, Pair, PairKind, SurfaceModel, Term};
use crate::error::{Error, Result};
use crate::scalar::{q, Q};

fn drop_slot(t: &Term, m: usize) -> Term {
    let shift = |s: u8| if s as usize > m { s - 1 } else { s };
    let mut deco = t.deco.clone();
    deco.remove(m);
    let pairs = t
        .pairs
        .iter()
        .map(|p| Pair {
            a: shift(p.a),
            b: shift(p.b),
            kind: p.kind,
        })
        .collect();
    Term { pairs, deco }
}

impl SurfaceModel {
    /// Integrates out slot `m` (0-based).
    pub fn pushforward_forget(&self, a: &MultiPointClass, m: usize) -> Result<MultiPointClass> {
        if m >= a.slots() {
            return Err(Error::SlotOutOfRange {
                slot: m,
                slots: a.slots(),
            });
        }
        Ok(self.forget_unchecked(a, m))
    }

    pub(crate) fn forget_unchecked(&self, a: &MultiPointClass, m: usize) -> MultiPointClass {
        let mut out = MultiPointClass::zero(a.slots() - 1);
        for (t, cf) in a.terms() {
            if let Some(idx) = t.pairs.iter().position(|p| p.contains(m)) {
                if t.pairs[idx].kind == PairKind::Transcendental {
                    continue;
                }
                let mut t = t.clone();
                t.pairs.remove(idx);
                out.add_term(drop_slot(&t, m), cf.clone());
            } else if self.integral(t.deco[m]) {
                out.add_term(drop_slot(t, m), cf.clone());
            }
        }
        out
    }

    /// Pulls back along the projection forgetting a new slot inserted at `position`.
    pub fn pullback_insert(&self, a: &MultiPointClass, position: usize) -> Result<MultiPointClass> {
        if position > a.slots() {
            return Err(Error::SlotOutOfRange {
                slot: position,
                slots: a.slots() + 1,
            });
        }
        let shift = |s: u8| if s as usize >= position { s + 1 } else { s };
        let mut out = MultiPointClass::zero(a.slots() + 1);
        for (t, cf) in a.terms() {
            let mut deco = t.deco.clone();
            deco.insert(position, SurfaceModel::UNIT);
            let pairs = t
                .pairs
                .iter()
                .map(|p| Pair {
                    a: shift(p.a),
                    b: shift(p.b),
                    kind: p.kind,
                })
                .collect();
            out.add_term(Term { pairs, deco }, cf.clone());
        }
        Ok(out)
    }

    /// Relabels slot `i` as `perm[i]`.
    pub fn permute(&self, a: &MultiPointClass, perm: &[usize]) -> Result<MultiPointClass> {
        let k = a.slots();
        let mut seen = vec![false; k];
        if perm.len() != k
            || perm
                .iter()
                .any(|&p| p >= k || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::Model(format!(
                "{perm:?} is not a permutation of {k} slots"
            )));
        }
        Ok(permute_unchecked(a, perm))
    }

    pub fn transpose(&self, g: &MultiPointClass) -> Result<MultiPointClass> {
        check_corr(g)?;
        Ok(permute_unchecked(g, &[1, 0]))
    }

    /// `Γ∘Γ̃ = π13*(Γ̃_12 · Γ_23)`: apply `Γ̃` first.
    pub fn compose_correspondences(
        &self,
        g: &MultiPointClass,
        g_tilde: &MultiPointClass,
    ) -> Result<MultiPointClass> {
        check_corr(g)?;
        check_corr(g_tilde)?;
        let first = self.pullback_insert(g_tilde, 2)?;
        let second = self.pullback_insert(g, 0)?;
        let prod = self.multiply(&first, &second)?;
        self.pushforward_forget(&prod, 1)
    }

    /// `[Γ, Γ̃] = Γ∘Γ̃ − Γ̃∘Γ`.
    pub fn correspondence_bracket(
        &self,
        g: &MultiPointClass,
        g_tilde: &MultiPointClass,
    ) -> Result<MultiPointClass> {
        Ok(self
            .compose_correspondences(g, g_tilde)?
            .minus(&self.compose_correspondences(g_tilde, g)?))
    }

    /// `Γ(γ) = π2*(π1*(γ) · Γ)` for `γ` on one slot.
    pub fn apply_correspondence(
        &self,
        g: &MultiPointClass,
        x: &MultiPointClass,
    ) -> Result<MultiPointClass> {
        check_corr(g)?;
        if x.slots() != 1 {
            return Err(Error::SlotMismatch {
                left: x.slots(),
                right: 1,
            });
        }
        let lifted = self.pullback_insert(x, 1)?;
        let prod = self.multiply(&lifted, g)?;
        self.pushforward_forget(&prod, 0)
    }

    /// `(id × Γ × id)(C)` acting on slot `i` of `C`.
    pub fn apply_in_slot(
        &self,
        g: &MultiPointClass,
        cls: &MultiPointClass,
        i: usize,
    ) -> Result<MultiPointClass> {
        check_corr(g)?;
        let k = cls.slots();
        if i >= k {
            return Err(Error::SlotOutOfRange { slot: i, slots: k });
        }
        let lifted = self.pullback_insert(cls, k)?;
        let g_big = embed(g, &[i, k], k + 1);
        let prod = self.multiply(&lifted, &g_big)?;
        let reduced = self.forget_unchecked(&prod, i);
        // the new slot now sits last; move it back to position i
        let mut back: Vec<usize> = (0..k).map(|s| if s >= i { s + 1 } else { s }).collect();
        back[k - 1] = i;
        Ok(permute_unchecked(&reduced, &back))
    }

    /// Multiplies by `Δ_ij` and integrates out both slots.
    pub fn contract(&self, a: &MultiPointClass, i: usize, j: usize) -> MultiPointClass {
        let prod = self.times_diagonal(a, i, j);
        let (hi, lo) = if i > j { (i, j) } else { (j, i) };
        let once = self.forget_unchecked(&prod, hi);
        self.forget_unchecked(&once, lo)
    }

    /// Cycle-class image: each diagonal becomes its Künneth decomposition
    /// `u⊗c + c⊗u + Σ G⁻¹_ab v_a⊗v_b + T`, point symbols become `c`.
    pub fn kunneth_expand(&self, a: &MultiPointClass) -> Result<MultiPointClass> {
        if self.mode() == Mode::Chow {
            return Err(Error::ChowMode);
        }
        let ginv = self.divisors().inverse()?;
        let c = self.point();
        let mut pieces: Vec<(Q, Basis, Basis)> =
            vec![(q(1), SurfaceModel::UNIT, c), (q(1), c, SurfaceModel::UNIT)];
        for (x, row) in ginv.iter().enumerate() {
            for (y, g) in row.iter().enumerate() {
                if !g.is_zero() {
                    pieces.push((g.clone(), self.div(x), self.div(y)));
                }
            }
        }
        let mut out = MultiPointClass::zero(a.slots());
        for (t, cf) in a.terms() {
            let base: Vec<Basis> = t
                .deco
                .iter()
                .map(|&b| {
                    if matches!(self.kind(b), BasisKind::Symbol(_)) {
                        c
                    } else {
                        b
                    }
                })
                .collect();
            let mut partial: Vec<(Q, RawProduct)> = vec![(
                cf.clone(),
                RawProduct {
                    pairs: Vec::new(),
                    deco: base,
                },
            )];
            for p in &t.pairs {
                let (i, j) = (p.a as usize, p.b as usize);
                let mut next = Vec::new();
                for (coeff, raw) in &partial {
                    if p.kind == PairKind::Transcendental {
                        let mut r2 = raw.clone();
                        r2.pairs.push(*p);
                        next.push((coeff.clone(), r2));
                        continue;
                    }
                    for (s, x, y) in &pieces {
                        let mut r2 = raw.clone();
                        r2.deco[i] = *x;
                        r2.deco[j] = *y;
                        next.push((coeff * s, r2));
                    }
                    let mut r2 = raw.clone();
                    r2.pairs.push(Pair::new(i, j, PairKind::Transcendental));
                    next.push((coeff.clone(), r2));
                }
                partial = next;
            }
            for (coeff, raw) in partial {
                self.reduce_into(coeff, raw, &mut out);
            }
        }
        Ok(out)
    }
}

/// Places a class on the given slots of a larger product, unit elsewhere.
pub fn embed(a: &MultiPointClass, targets: &[usize], total: usize) -> MultiPointClass {
    debug_assert_eq!(targets.len(), a.slots());
    let mut out = MultiPointClass::zero(total);
    for (t, cf) in a.terms() {
        let mut deco = vec![SurfaceModel::UNIT; total];
        for (s, &b) in t.deco.iter().enumerate() {
            deco[targets[s]] = b;
        }
        let mut pairs: Vec<Pair> = t
            .pairs
            .iter()
            .map(|p| Pair::new(targets[p.a as usize], targets[p.b as usize], p.kind))
            .collect();
        pairs.sort();
        out.add_term(Term { pairs, deco }, cf.clone());
    }
    out
}

pub(crate) fn permute_unchecked(a: &MultiPointClass, perm: &[usize]) -> MultiPointClass {
    let mut out = MultiPointClass::zero(a.slots());
    for (t, cf) in a.terms() {
        out.add_term(t.permuted(perm), cf.clone());
    }
    out
}

fn check_corr(g: &MultiPointClass) -> Result<()> {
    if g.slots() != 2 {
        return Err(Error::NotCorrespondence(g.slots()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::frac;

    fn model(mode: Mode) -> SurfaceModel {
        SurfaceModel::diagonal(&[2], mode)
    }

    fn d(m: &SurfaceModel, slots: usize, decos: &[(usize, Basis)]) -> MultiPointClass {
        let _ = m;
        MultiPointClass::decorated(slots, decos)
    }

    #[test]
    fn forget_examples() {
        let m = model(Mode::Chow);
        let (v, c) = (m.div(0), m.point());
        let delta = MultiPointClass::diagonal(2, 0, 1);
        assert_eq!(
            m.pushforward_forget(&delta, 1).unwrap(),
            MultiPointClass::one(1)
        );
        assert_eq!(
            m.pushforward_forget(&d(&m, 2, &[(0, c), (1, c)]), 1)
                .unwrap(),
            d(&m, 1, &[(0, c)])
        );
        assert!(m
            .pushforward_forget(&d(&m, 2, &[(1, v)]), 1)
            .unwrap()
            .is_zero());
        assert!(m
            .pushforward_forget(&MultiPointClass::one(2), 0)
            .unwrap()
            .is_zero());
        assert!(m.pushforward_forget(&delta, 2).is_err());
    }

    #[test]
    fn insert_examples() {
        let m = model(Mode::Chow);
        assert_eq!(
            m.pullback_insert(&MultiPointClass::one(0), 0).unwrap(),
            MultiPointClass::one(1)
        );
        let delta = MultiPointClass::diagonal(2, 0, 1);
        assert_eq!(
            m.pullback_insert(&delta, 2).unwrap(),
            MultiPointClass::diagonal(3, 0, 1)
        );
        // projection formula instance
        let x = m.multiply(&delta, &d(&m, 2, &[(0, m.div(0))])).unwrap();
        for j in 0..=2 {
            let lifted = m.pullback_insert(&x, j).unwrap();
            let with_c = m.multiply(&lifted, &d(&m, 3, &[(j, m.point())])).unwrap();
            assert_eq!(m.pushforward_forget(&with_c, j).unwrap(), x);
        }
    }

    #[test]
    fn permute_examples() {
        let m = model(Mode::Chow);
        let (v, c) = (m.div(0), m.point());
        let delta = MultiPointClass::diagonal(2, 0, 1);
        assert_eq!(m.permute(&delta, &[1, 0]).unwrap(), delta);
        assert_eq!(
            m.permute(&d(&m, 2, &[(0, c), (1, v)]), &[1, 0]).unwrap(),
            d(&m, 2, &[(0, v), (1, c)])
        );
        let x = m
            .multiply(&MultiPointClass::diagonal(3, 0, 2), &d(&m, 3, &[(1, v)]))
            .unwrap();
        let sigma = [2, 0, 1];
        let inv = [1, 2, 0];
        assert_eq!(m.permute(&m.permute(&x, &sigma).unwrap(), &inv).unwrap(), x);
        assert!(m.permute(&x, &[0, 0, 1]).is_err());
    }

    fn h_corr(m: &SurfaceModel) -> MultiPointClass {
        let c = m.point();
        d(m, 2, &[(1, c)]).minus(&d(m, 2, &[(0, c)])).scaled(&q(2))
    }

    #[test]
    fn composition_examples() {
        let m = model(Mode::Chow);
        let (v, c) = (m.div(0), m.point());
        let delta = MultiPointClass::diagonal(2, 0, 1);
        let g = d(&m, 2, &[(0, v), (1, c)]).plus(&d(&m, 2, &[(0, c)]));
        assert_eq!(m.compose_correspondences(&delta, &g).unwrap(), g);
        assert_eq!(m.compose_correspondences(&g, &delta).unwrap(), g);
        // h∘h: expanded by hand, 4·π13*((c2 − c1)(c3 − c2)) = 4(c1 + c3)
        let h = h_corr(&m);
        let hh = m.compose_correspondences(&h, &h).unwrap();
        assert_eq!(
            hh,
            d(&m, 2, &[(0, c)]).plus(&d(&m, 2, &[(1, c)])).scaled(&q(4))
        );
        // [e_α, f̃_α] on S equals (α,α)·h
        let e = d(&m, 2, &[(0, c), (1, v)]).plus(&d(&m, 2, &[(0, v), (1, c)]));
        let ft = d(&m, 2, &[(0, v)]).plus(&d(&m, 2, &[(1, v)])).scaled(&q(2));
        assert_eq!(m.correspondence_bracket(&e, &ft).unwrap(), h.scaled(&q(2)));
        assert!(m
            .compose_correspondences(&MultiPointClass::one(3), &delta)
            .is_err());
    }

    #[test]
    fn application_examples() {
        let m = model(Mode::Chow).with_points(1);
        let (v, c) = (m.div(0), m.point());
        let delta = MultiPointClass::diagonal(2, 0, 1);
        for b in m.state_basis() {
            let x = d(&m, 1, &[(0, b)]);
            assert_eq!(m.apply_correspondence(&delta, &x).unwrap(), x);
        }
        let h = h_corr(&m);
        let u = MultiPointClass::one(1);
        assert_eq!(m.apply_correspondence(&h, &u).unwrap(), u.scaled(&q(-2)));
        let sum = d(&m, 2, &[(0, v)]).plus(&d(&m, 2, &[(1, v)]));
        assert_eq!(
            m.apply_correspondence(&sum, &d(&m, 1, &[(0, c)])).unwrap(),
            d(&m, 1, &[(0, v)])
        );
    }

    #[test]
    fn composition_matches_sequential_application() {
        let m = model(Mode::Chow).with_points(1);
        let basis: Vec<MultiPointClass> = m
            .state_basis()
            .into_iter()
            .map(|b| d(&m, 1, &[(0, b)]))
            .collect();
        let mut corrs = vec![MultiPointClass::diagonal(2, 0, 1), h_corr(&m)];
        for &x in &m.state_basis() {
            for &y in &m.state_basis() {
                corrs.push(d(&m, 2, &[(0, x), (1, y)]));
            }
        }
        for g in &corrs {
            for gt in corrs.iter().step_by(3) {
                let comp = m.compose_correspondences(g, gt).unwrap();
                for x in &basis {
                    let seq = m
                        .apply_correspondence(g, &m.apply_correspondence(gt, x).unwrap())
                        .unwrap();
                    assert_eq!(m.apply_correspondence(&comp, x).unwrap(), seq);
                }
            }
        }
    }

    #[test]
    fn slot_application_on_one_slot_matches_correspondence() {
        let m = model(Mode::Chow);
        let h = h_corr(&m);
        let x = d(&m, 1, &[(0, m.div(0))]).plus(&MultiPointClass::one(1));
        assert_eq!(
            m.apply_in_slot(&h, &x, 0).unwrap(),
            m.apply_correspondence(&h, &x).unwrap()
        );
        // on a product class it acts on the chosen factor only
        let y = d(&m, 3, &[(0, m.point()), (2, m.div(0))]);
        assert_eq!(m.apply_in_slot(&h, &y, 1).unwrap(), y.scaled(&q(-2)));
        assert_eq!(m.apply_in_slot(&h, &y, 0).unwrap(), y.scaled(&q(2)));
        assert!(m.apply_in_slot(&h, &y, 2).unwrap().is_zero());
    }

    #[test]
    fn kunneth_examples() {
        let m = model(Mode::Cohomology);
        let (v, c) = (m.div(0), m.point());
        let delta = MultiPointClass::diagonal(2, 0, 1);
        let ex = m.kunneth_expand(&delta).unwrap();
        let mut t = Term::unit(2);
        t.pairs.push(Pair::new(0, 1, PairKind::Transcendental));
        let expect = d(&m, 2, &[(1, c)])
            .plus(&d(&m, 2, &[(0, c)]))
            .plus(&d(&m, 2, &[(0, v), (1, v)]).scaled(&frac(1, 2)))
            .plus(&MultiPointClass::from_term(q(1), t));
        assert_eq!(ex, expect);
        for b in m.state_basis() {
            let x = d(&m, 1, &[(0, b)]);
            assert_eq!(m.apply_correspondence(&ex, &x).unwrap(), x);
        }
        let c1 = d(&m, 2, &[(0, c)]);
        assert_eq!(m.kunneth_expand(&c1).unwrap(), c1);
        assert_eq!(
            model(Mode::Chow).kunneth_expand(&delta),
            Err(Error::ChowMode)
        );
        let singular = SurfaceModel::diagonal(&[0], Mode::Cohomology);
        assert_eq!(singular.kunneth_expand(&delta), Err(Error::SingularGram));
    }

    #[test]
    fn kunneth_respects_self_intersection() {
        let m = model(Mode::Cohomology);
        let delta = MultiPointClass::diagonal(2, 0, 1);
        let lhs = m
            .kunneth_expand(&m.multiply(&delta, &delta).unwrap())
            .unwrap();
        let e = m.kunneth_expand(&delta).unwrap();
        assert_eq!(m.multiply(&e, &e).unwrap(), lhs);
    }
}
