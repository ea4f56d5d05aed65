//! Seeded generators for randomized checks.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bv_ring::{Mode, MultiPointClass, Pair, PairKind, RawProduct, SurfaceModel, Term};
use crate::lie_wedge::{WedgeAmbient, WedgeElement};
use crate::operator::{
    bracket, compose, e_general, ft_general, h_op, l0, nakajima, scale, t_gamma, DivisorClass,
    OperatorExpr,
};
use crate::scalar::{frac, q, Q};

/// A nonzero rational with small numerator and denominator.
pub fn small_rational<R: Rng>(rng: &mut R) -> Q {
    let mut n = rng.gen_range(1..=4);
    if rng.gen_bool(0.5) {
        n = -n;
    }
    frac(n, *[1, 1, 1, 2, 3].choose(rng).expect("nonempty"))
}

fn pair_kind<R: Rng>(model: &SurfaceModel, rng: &mut R) -> PairKind {
    if model.mode() == Mode::Cohomology && rng.gen_bool(0.3) {
        PairKind::Transcendental
    } else {
        PairKind::Diagonal
    }
}

/// A normal-form monomial on `slots` slots.
pub fn random_term<R: Rng>(model: &SurfaceModel, rng: &mut R, slots: usize) -> Term {
    let basis = model.state_basis();
    let mut order: Vec<usize> = (0..slots).collect();
    order.shuffle(rng);
    let mut term = Term::unit(slots);
    let mut free = Vec::new();
    let mut it = order.into_iter();
    while let Some(s) = it.next() {
        if rng.gen_bool(0.3) {
            if let Some(t) = it.next() {
                term.pairs.push(Pair::new(s, t, pair_kind(model, rng)));
                continue;
            }
        }
        free.push(s);
    }
    for s in free {
        term.deco[s] = *basis.choose(rng).expect("nonempty basis");
    }
    term.pairs.sort();
    term
}

/// A class with up to `max_terms` monomials, all of Chow degree `degree` when given.
pub fn random_class<R: Rng>(
    model: &SurfaceModel,
    rng: &mut R,
    slots: usize,
    degree: Option<usize>,
    max_terms: usize,
) -> MultiPointClass {
    let mut out = MultiPointClass::zero(slots);
    let want = rng.gen_range(1..=max_terms.max(1));
    for _ in 0..200 {
        if out.len() >= want {
            break;
        }
        let t = random_term(model, rng, slots);
        if degree.is_some_and(|d| t.degree(model) != d) {
            continue;
        }
        out.add_term(t, small_rational(rng));
    }
    model.normalize(&out)
}

/// A nonzero homogeneous class on `S × S`.
pub fn random_correspondence<R: Rng>(model: &SurfaceModel, rng: &mut R) -> MultiPointClass {
    loop {
        let d = rng.gen_range(0..=4);
        let g = random_class(model, rng, 2, Some(d), 3);
        if !g.is_zero() {
            return g;
        }
    }
}

/// An unreduced product: overlapping pairs and arbitrary decorations.
pub fn random_raw_product<R: Rng>(model: &SurfaceModel, rng: &mut R, slots: usize) -> RawProduct {
    let basis = model.state_basis();
    let npairs = rng.gen_range(0..=slots + 1);
    let mut pairs = Vec::new();
    if slots >= 2 {
        for _ in 0..npairs {
            let a = rng.gen_range(0..slots);
            let mut b = rng.gen_range(0..slots - 1);
            if b >= a {
                b += 1;
            }
            pairs.push(Pair::new(a, b, pair_kind(model, rng)));
        }
    }
    let deco = (0..slots)
        .map(|_| {
            if rng.gen_bool(0.5) {
                SurfaceModel::UNIT
            } else {
                *basis.choose(rng).expect("nonempty basis")
            }
        })
        .collect();
    RawProduct { pairs, deco }
}

/// A wedge element with one to three basis components.
pub fn random_wedge<R: Rng>(ambient: &Arc<WedgeAmbient>, rng: &mut R) -> WedgeElement {
    let d = ambient.dim();
    let mut x = WedgeElement::zero(ambient);
    while x.is_zero() {
        for _ in 0..rng.gen_range(1..=3) {
            let i = rng.gen_range(0..d);
            let j = rng.gen_range(0..d);
            x.add(i, j, Q::from_integer(rng.gen_range(-2i64..=2).into()));
        }
    }
    x
}

fn random_divisor<R: Rng>(model: &SurfaceModel, rng: &mut R) -> DivisorClass {
    let r = model.rank();
    loop {
        let d = (0..=r).fold(DivisorClass::zero(r), |acc, i| {
            acc.plus(&DivisorClass::basis(r, i).scaled(&q(rng.gen_range(-3..=3))))
        });
        if !d.is_zero() {
            return d;
        }
    }
}

fn nonzero_index<R: Rng>(rng: &mut R) -> i32 {
    let k = rng.gen_range(1..=3);
    if rng.gen_bool(0.5) {
        -k
    } else {
        k
    }
}

/// An operator expression of nesting depth at most `depth`, built only
/// through the normalizing constructors.
pub fn random_operator<R: Rng>(model: &SurfaceModel, rng: &mut R, depth: u32) -> OperatorExpr {
    if depth == 0 || rng.gen_bool(0.4) {
        return match rng.gen_range(0..9) {
            0 => OperatorExpr::Zero,
            1 => h_op(),
            2 => l0(),
            3 => e_general(random_divisor(model, rng)),
            4 => ft_general(random_divisor(model, rng)),
            5 => OperatorExpr::F(random_divisor(model, rng)),
            6 => nakajima(nonzero_index(rng), random_class(model, rng, 1, None, 2)),
            7 => {
                let ks: Vec<i32> = (0..rng.gen_range(1..=3))
                    .map(|_| nonzero_index(rng))
                    .collect();
                let g = random_class(model, rng, ks.len(), None, 3);
                OperatorExpr::Word(ks, g)
            }
            _ => t_gamma(model, random_correspondence(model, rng)).expect("homogeneous"),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..4) {
        0 => {
            let k = rng.gen_range(2..=4);
            OperatorExpr::Sum((0..k).map(|_| random_operator(model, rng, d)).collect())
        }
        1 => {
            let s = frac(rng.gen_range(-4..=4), rng.gen_range(1..=3));
            scale(s, random_operator(model, rng, d))
        }
        2 => compose(
            random_operator(model, rng, d),
            random_operator(model, rng, d),
        ),
        _ => bracket(
            random_operator(model, rng, d),
            random_operator(model, rng, d),
        ),
    }
}
