//! Normal-form reduction of products of diagonals and decorations.

use num_traits::Zero;

use super::{BasisKind, MultiPointClass, Pair, PairKind, SurfaceModel, Term};
use crate::error::{Error, Result};
use crate::scalar::{q, Q};

/// A formal product over `k` slots: pairs may overlap and decorated slots may
/// be matched.
#[derive(Clone, Debug)]
pub struct RawProduct {
    pub pairs: Vec<Pair>,
    pub deco: Vec<super::Basis>,
}

/// Two slots carrying the same point symbol.
fn repeated_symbol(model: &SurfaceModel, deco: &[super::Basis]) -> Option<(usize, usize)> {
    for i in 0..deco.len() {
        if matches!(model.kind(deco[i]), BasisKind::Symbol(_)) {
            if let Some(j) = (i + 1..deco.len()).find(|&j| deco[j] == deco[i]) {
                return Some((i, j));
            }
        }
    }
    None
}

impl SurfaceModel {
    /// Rewrites a raw product to normal form, accumulating `coeff * nf` into `out`.
    pub fn reduce_into(&self, coeff: Q, raw: RawProduct, out: &mut MultiPointClass) {
        if coeff.is_zero() {
            return;
        }
        let mut stack = vec![(coeff, raw)];
        while let Some((coeff, raw)) = stack.pop() {
            if let Some(done) = self.rewrite_step(coeff, raw, &mut stack) {
                out.add_term(done.1, done.0);
            }
        }
    }

    pub fn reduce(&self, raw: RawProduct) -> MultiPointClass {
        let mut out = MultiPointClass::zero(raw.deco.len());
        self.reduce_into(q(1), raw, &mut out);
        out
    }

    /// Applies one rule, pushing successors; returns the term when already normal.
    fn rewrite_step(
        &self,
        mut coeff: Q,
        mut raw: RawProduct,
        stack: &mut Vec<(Q, RawProduct)>,
    ) -> Option<(Q, Term)> {
        let unit = SurfaceModel::UNIT;
        let c = self.point();
        loop {
            // absorb decorations sitting on matched slots
            let hit = raw
                .pairs
                .iter()
                .position(|p| raw.deco[p.a as usize] != unit || raw.deco[p.b as usize] != unit);
            if let Some(idx) = hit {
                let p = raw.pairs.swap_remove(idx);
                let (i, j) = (p.a as usize, p.b as usize);
                let (s, x) = self.basis_product(raw.deco[i], raw.deco[j])?;
                coeff *= s;
                raw.deco[i] = unit;
                raw.deco[j] = unit;
                match (p.kind, self.kind(x)) {
                    (_, BasisKind::Unit) => raw.pairs.push(p),
                    (PairKind::Transcendental, _) => return None,
                    (PairKind::Diagonal, BasisKind::Point | BasisKind::Symbol(_)) => {
                        raw.deco[i] = x;
                        raw.deco[j] = x;
                    }
                    (PairKind::Diagonal, BasisKind::Divisor(_)) => {
                        // Δ·ℓ_i = c_i ℓ_j + ℓ_i c_j
                        let mut other = raw.clone();
                        other.deco[i] = x;
                        other.deco[j] = c;
                        stack.push((coeff.clone(), other));
                        raw.deco[i] = c;
                        raw.deco[j] = x;
                    }
                }
                continue;
            }

            // collisions between pairs sharing a slot
            let mut collision = None;
            'outer: for x in 0..raw.pairs.len() {
                for y in x + 1..raw.pairs.len() {
                    let (p, r) = (raw.pairs[x], raw.pairs[y]);
                    if p.contains(r.a as usize) || p.contains(r.b as usize) {
                        collision = Some((x, y));
                        break 'outer;
                    }
                }
            }
            let Some((x, y)) = collision else {
                // p⊗p = p⊗c + c⊗p − c⊗c, forced by the small-diagonal expansion
                if let Some((i, j)) = repeated_symbol(self, &raw.deco) {
                    let p = raw.deco[i];
                    for (a, b, s) in [(p, c, coeff.clone()), (c, p, coeff.clone()), (c, c, -coeff)]
                    {
                        let mut next = raw.clone();
                        next.deco[i] = a;
                        next.deco[j] = b;
                        stack.push((s, next));
                    }
                    return None;
                }
                raw.pairs.sort();
                return Some((
                    coeff,
                    Term {
                        pairs: raw.pairs,
                        deco: raw.deco,
                    },
                ));
            };
            let r = raw.pairs.swap_remove(y);
            let p = raw.pairs.swap_remove(x);
            if p.a == r.a && p.b == r.b {
                let (i, j) = (p.a as usize, p.b as usize);
                let trace = match (p.kind, r.kind) {
                    (PairKind::Diagonal, PairKind::Diagonal) => self.euler(),
                    _ => self.transcendental_rank(),
                };
                coeff *= q(trace);
                raw.deco[i] = c;
                raw.deco[j] = c;
                continue;
            }
            let shared = if p.contains(r.a as usize) {
                r.a as usize
            } else {
                r.b as usize
            };
            let pi = p.other(shared);
            let rk = r.other(shared);
            match (p.kind, r.kind) {
                (PairKind::Diagonal, PairKind::Diagonal) => {
                    // small diagonal on {pi, shared, rk}
                    let tri = [pi, shared, rk];
                    for t in 0..3 {
                        let (a, b, z) = (tri[t], tri[(t + 1) % 3], tri[(t + 2) % 3]);
                        let mut with_pair = raw.clone();
                        with_pair.pairs.push(Pair::diagonal(a, b));
                        with_pair.deco[z] = c;
                        stack.push((coeff.clone(), with_pair));
                        let mut points = raw.clone();
                        points.deco[a] = c;
                        points.deco[b] = c;
                        stack.push((-coeff.clone(), points));
                    }
                    return None;
                }
                (PairKind::Transcendental, PairKind::Transcendental) => {
                    raw.pairs.push(Pair::new(pi, rk, PairKind::Transcendental));
                    raw.deco[shared] = c;
                }
                _ => {
                    // Δ_{d s} T_{s t} = T_{d t} c_s + c_d T_{s t}
                    let (d, t) = if p.kind == PairKind::Diagonal {
                        (pi, rk)
                    } else {
                        (rk, pi)
                    };
                    let mut other = raw.clone();
                    other
                        .pairs
                        .push(Pair::new(shared, t, PairKind::Transcendental));
                    other.deco[d] = c;
                    stack.push((coeff.clone(), other));
                    raw.pairs.push(Pair::new(d, t, PairKind::Transcendental));
                    raw.deco[shared] = c;
                }
            }
        }
    }

    /// Brings a class assembled slot by slot (e.g. by tensoring) to normal form.
    pub fn normalize(&self, a: &MultiPointClass) -> MultiPointClass {
        let mut out = MultiPointClass::zero(a.slots());
        for (t, cf) in a.terms() {
            if repeated_symbol(self, &t.deco).is_some() {
                let raw = RawProduct {
                    pairs: t.pairs.clone(),
                    deco: t.deco.clone(),
                };
                self.reduce_into(cf.clone(), raw, &mut out);
            } else {
                out.add_term(t.clone(), cf.clone());
            }
        }
        out
    }

    /// Ring product on `A*(S^k)`.
    pub fn multiply(&self, a: &MultiPointClass, b: &MultiPointClass) -> Result<MultiPointClass> {
        if a.slots() != b.slots() {
            return Err(Error::SlotMismatch {
                left: a.slots(),
                right: b.slots(),
            });
        }
        let mut out = MultiPointClass::zero(a.slots());
        for (ta, ca) in a.terms() {
            for (tb, cb) in b.terms() {
                let mut coeff = ca * cb;
                let mut deco = Vec::with_capacity(ta.slots());
                let mut dead = false;
                for (&x, &y) in ta.deco.iter().zip(&tb.deco) {
                    match self.basis_product(x, y) {
                        Some((s, z)) => {
                            coeff *= s;
                            deco.push(z);
                        }
                        None => {
                            dead = true;
                            break;
                        }
                    }
                }
                if dead {
                    continue;
                }
                let pairs = ta.pairs.iter().chain(&tb.pairs).copied().collect();
                self.reduce_into(coeff, RawProduct { pairs, deco }, &mut out);
            }
        }
        Ok(out)
    }

    /// Multiplies by `Δ_ij`.
    pub fn times_diagonal(&self, a: &MultiPointClass, i: usize, j: usize) -> MultiPointClass {
        let mut out = MultiPointClass::zero(a.slots());
        for (t, cf) in a.terms() {
            let mut pairs = t.pairs.clone();
            pairs.push(Pair::diagonal(i, j));
            self.reduce_into(
                cf.clone(),
                RawProduct {
                    pairs,
                    deco: t.deco.clone(),
                },
                &mut out,
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bv_ring::Mode;

    fn model() -> SurfaceModel {
        SurfaceModel::diagonal(&[2], Mode::Chow).with_points(1)
    }

    #[test]
    fn self_intersection_of_diagonal() {
        let m = model();
        let d = MultiPointClass::diagonal(2, 0, 1);
        let dd = m.multiply(&d, &d).unwrap();
        let c = m.point();
        assert_eq!(
            dd,
            MultiPointClass::decorated(2, &[(0, c), (1, c)]).scaled(&q(24))
        );
    }

    #[test]
    fn diagonal_times_point() {
        let m = model();
        let d = MultiPointClass::diagonal(2, 0, 1);
        let c1 = MultiPointClass::decorated(2, &[(0, m.point())]);
        let c2 = MultiPointClass::decorated(2, &[(1, m.point())]);
        let c1c2 = MultiPointClass::decorated(2, &[(0, m.point()), (1, m.point())]);
        assert_eq!(m.multiply(&d, &c1).unwrap(), c1c2);
        assert_eq!(m.multiply(&d, &c2).unwrap(), c1c2);
        let p = m.symbol(0);
        let p1 = MultiPointClass::decorated(2, &[(0, p)]);
        let c = m.point();
        let want = MultiPointClass::decorated(2, &[(0, p), (1, c)])
            .plus(&MultiPointClass::decorated(2, &[(0, c), (1, p)]))
            .plus(&c1c2.scaled(&q(-1)));
        assert_eq!(m.multiply(&d, &p1).unwrap(), want);
        // both routes through Δ12·Δ23·p1 agree
        let d3 = |i, j| MultiPointClass::diagonal(3, i, j);
        let p3 = MultiPointClass::decorated(3, &[(0, p)]);
        let left = m
            .multiply(&m.multiply(&d3(0, 1), &d3(1, 2)).unwrap(), &p3)
            .unwrap();
        let right = m
            .multiply(&d3(0, 1), &m.multiply(&d3(1, 2), &p3).unwrap())
            .unwrap();
        let right2 = m
            .multiply(&m.multiply(&d3(0, 1), &p3).unwrap(), &d3(1, 2))
            .unwrap();
        assert_eq!(left, right);
        assert_eq!(left, right2);
        assert!(m.multiply(&c1, &c1).unwrap().is_zero());
    }

    #[test]
    fn diagonal_times_divisor() {
        let m = model();
        let (v, c) = (m.div(0), m.point());
        let d = MultiPointClass::diagonal(2, 0, 1);
        let v1 = MultiPointClass::decorated(2, &[(0, v)]);
        let expect = MultiPointClass::decorated(2, &[(0, c), (1, v)])
            .plus(&MultiPointClass::decorated(2, &[(0, v), (1, c)]));
        assert_eq!(m.multiply(&d, &v1).unwrap(), expect);
        let vv = m.multiply(
            &MultiPointClass::decorated(1, &[(0, v)]),
            &MultiPointClass::decorated(1, &[(0, v)]),
        );
        assert_eq!(
            vv.unwrap(),
            MultiPointClass::decorated(1, &[(0, c)]).scaled(&q(2))
        );
    }

    #[test]
    fn small_diagonal_decomposition() {
        let m = model();
        let c = m.point();
        let got = m
            .multiply(
                &MultiPointClass::diagonal(3, 0, 1),
                &MultiPointClass::diagonal(3, 1, 2),
            )
            .unwrap();
        let mut expect = MultiPointClass::zero(3);
        for (a, b, z) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
            let mut t = MultiPointClass::diagonal(3, a, b);
            t = m
                .multiply(&t, &MultiPointClass::decorated(3, &[(z, c)]))
                .unwrap();
            expect = expect.plus(&t);
            expect = expect.minus(&MultiPointClass::decorated(3, &[(a, c), (b, c)]));
        }
        assert_eq!(got, expect);
        assert_eq!(got.len(), 6);
    }

    #[test]
    fn slot_mismatch() {
        let m = model();
        assert_eq!(
            m.multiply(&MultiPointClass::one(1), &MultiPointClass::one(2)),
            Err(Error::SlotMismatch { left: 1, right: 2 })
        );
    }
}
