use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::random::{random_class, random_correspondence, random_raw_product, random_wedge};
use super::{check_identity, compare, Check, Report};
use crate::bv_ring::{MultiPointClass, RawProduct, SurfaceModel};
use crate::error::Result;
use crate::lie_wedge::WedgeAmbient;
use crate::matrix::SparseMatrix;
use crate::operator::{
    bracket, e_general, ft_general, h_op, l0, nakajima, scale, DivisorClass, Instantiator,
    OperatorExpr,
};
use crate::scalar::{fmt_q, ipow, q};

/// `[q_a(x), q_b(y)] = a δ_{a+b,0} ⟨x, y⟩` on every weight `≤ max_weight`,
/// for basis classes `x, y` and `1 ≤ |a|, |b| ≤ max_weight`.
pub fn heisenberg_suite(model: &SurfaceModel, max_weight: u32) -> Report {
    let inst = Instantiator::new(model.clone());
    let basis = model.state_basis();
    let m = max_weight as i32;
    let idx: Vec<i32> = (-m..=m).filter(|&i| i != 0).collect();
    let mut cases = Vec::new();
    for &x in &basis {
        for &y in &basis {
            for &a in &idx {
                for &b in &idx {
                    cases.push((x, y, a, b));
                }
            }
        }
    }
    let checks = cases
        .par_iter()
        .map(|&(x, y, a, b)| {
            let one = |g| MultiPointClass::decorated(1, &[(0, g)]);
            let lhs = bracket(nakajima(a, one(x)), nakajima(b, one(y)));
            let k = if a + b == 0 {
                q(a as i64) * model.pairing(x, y)
            } else {
                q(0)
            };
            let name = format!("{} = {}", lhs.print(model), fmt_q(&k));
            for w in 0..=max_weight {
                let t = w as i32 + a + b;
                if t < 0 || t > m {
                    continue;
                }
                let op = match inst.instantiate(&lhs, w) {
                    Ok(op) => op,
                    Err(e) => return Check::new(name, false).with_detail(e.to_string()),
                };
                let want = if a + b == 0 {
                    SparseMatrix::identity(op.source.len()).scaled(&k)
                } else {
                    SparseMatrix::zero(op.target.len(), op.source.len())
                };
                let expected = crate::operator::ConcreteOperator {
                    matrix: want,
                    ..(*op).clone()
                };
                let c = compare(model, name.clone(), &op, &expected);
                if !c.pass {
                    return c.with_detail(format!("weight {w}"));
                }
            }
            Check::new(name, true)
        })
        .collect();
    Report::new("heisenberg", model, max_weight, checks)
}

/// `[T_Γ, q_{n_1}⋯q_{n_k}(C)]` against the slotwise action of `Γ` and `Γ'` on `C`,
/// for random `Γ`, `C`, indices and source weight `≤ max_weight`.
pub fn lemma_suite(model: &SurfaceModel, samples: usize, seed: u64, max_weight: u32) -> Report {
    let inst = Instantiator::new(model.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = max_weight as i32;
    let mut cases = Vec::new();
    while cases.len() < samples {
        let k = rng.gen_range(1..=3usize);
        let idx: Vec<i32> = (0..k)
            .map(|_| {
                let i = rng.gen_range(1..=m);
                if rng.gen_bool(0.5) {
                    -i
                } else {
                    i
                }
            })
            .collect();
        let shift: i32 = idx.iter().sum();
        let w = rng.gen_range(0..=m);
        if w + shift < 0 || w + shift > m {
            continue;
        }
        let gamma = random_correspondence(model, &mut rng);
        let deg = rng.gen_range(0..=2 * k);
        let c = random_class(model, &mut rng, k, Some(deg), 3);
        if c.is_zero() {
            continue;
        }
        cases.push((gamma, c, idx, w as u32));
    }
    let checks = cases
        .par_iter()
        .map(|(gamma, c, idx, w)| {
            let run = || -> Result<Check> {
                let d = gamma.homogeneous_degree(model).expect("homogeneous") as i32;
                let gt = model.transpose(gamma)?;
                let mut rhs = MultiPointClass::zero(c.slots());
                for (i, &ni) in idx.iter().enumerate() {
                    let coeff = ipow(ni as i64, d - 2);
                    if ni > 0 {
                        rhs.add_assign_scaled(&model.apply_in_slot(gamma, c, i)?, &coeff);
                    } else {
                        let sign = ipow(-1, d - 3);
                        rhs.add_assign_scaled(&model.apply_in_slot(&gt, c, i)?, &(coeff * sign));
                    }
                }
                let word = OperatorExpr::Word(idx.clone(), c.clone());
                let lhs = bracket(OperatorExpr::T(gamma.clone()), word);
                let rhs = if rhs.is_zero() {
                    OperatorExpr::Zero
                } else {
                    OperatorExpr::Word(idx.clone(), rhs)
                };
                let a = inst.instantiate(&lhs, *w)?;
                let b = inst.instantiate(&rhs, *w)?;
                let name = format!("[T({}), W{:?}(C)] at weight {w}", gamma.display(model), idx);
                Ok(compare(model, name, &a, &zero_if_empty(&b, &a))
                    .with_detail(format!("C = {}", c.display(model))))
            };
            run().unwrap_or_else(|e| Check::new("lemma instance", false).with_detail(e.to_string()))
        })
        .collect();
    Report::new("lemma", model, max_weight, checks)
}

/// The zero operator is instantiated with the shape of its partner.
fn zero_if_empty(
    op: &crate::operator::ConcreteOperator,
    like: &crate::operator::ConcreteOperator,
) -> crate::operator::ConcreteOperator {
    if op.target.weight() == like.target.weight() {
        op.clone()
    } else {
        crate::operator::ConcreteOperator {
            matrix: SparseMatrix::zero(like.target.len(), like.source.len()),
            ..like.clone()
        }
    }
}

/// `[T_Γ, T_Γ̃] = T_{[Γ, Γ̃]}` for random homogeneous pairs at each `n`.
pub fn t_bracket_suite(model: &SurfaceModel, ns: &[u32], samples: usize, seed: u64) -> Report {
    let inst = Instantiator::new(model.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<_> = (0..samples)
        .map(|_| {
            (
                random_correspondence(model, &mut rng),
                random_correspondence(model, &mut rng),
            )
        })
        .collect();
    let cases: Vec<_> = pairs
        .iter()
        .flat_map(|p| ns.iter().map(move |&n| (p, n)))
        .collect();
    let checks = cases
        .par_iter()
        .map(|((g, gt), n)| {
            let run = || -> Result<Check> {
                let br = model.correspondence_bracket(g, gt)?;
                let lhs = bracket(OperatorExpr::T(g.clone()), OperatorExpr::T(gt.clone()));
                let rhs = if br.is_zero() {
                    OperatorExpr::Zero
                } else {
                    OperatorExpr::T(br)
                };
                Ok(check_identity(&inst, &lhs, &rhs, *n))
            };
            run().unwrap_or_else(|e| {
                Check::new("T bracket instance", false).with_detail(e.to_string())
            })
        })
        .collect();
    Report::new(
        "t-bracket",
        model,
        ns.iter().copied().max().unwrap_or(0),
        checks,
    )
}

/// `ρ([x, y]) = [ρ(x), ρ(y)]` for random wedge elements.
pub fn rho_suite(model: &SurfaceModel, n: u32, samples: usize, seed: u64) -> Report {
    let inst = Instantiator::new(model.clone());
    let amb = WedgeAmbient::new(model, n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<_> = (0..samples)
        .map(|_| (random_wedge(&amb, &mut rng), random_wedge(&amb, &mut rng)))
        .collect();
    let checks = pairs
        .par_iter()
        .map(|(x, y)| {
            let xy = x.bracket(y).expect("same ambient");
            let mut c = check_identity(&inst, &xy.rho(), &bracket(x.rho(), y.rho()), n);
            c.name = format!("rho([{}, {}]) = [rho, rho]", x.display(), y.display());
            c
        })
        .collect();
    Report::new("rho", model, n, checks)
}

/// Matrices do not change when the summation window is widened.
pub fn widening_suite(model: &SurfaceModel, n: u32, widen: u32) -> Report {
    let base = Instantiator::new(model.clone());
    let wide = Instantiator::with_widening(model.clone(), widen);
    let r = model.rank();
    let mut ops = vec![h_op(), l0()];
    for i in 0..=r {
        let a = DivisorClass::basis(r, i);
        ops.push(e_general(a.clone()));
        ops.push(ft_general(a));
    }
    for m in 1..=n.max(1) as i32 {
        for g in [SurfaceModel::UNIT, model.point()] {
            let cls = MultiPointClass::decorated(1, &[(0, g)]);
            ops.push(nakajima(m, cls.clone()));
            ops.push(nakajima(-m, cls));
        }
    }
    ops.push(scale(q(3), bracket(ops[2].clone(), ops[3].clone())));
    let checks = ops
        .par_iter()
        .map(|op| {
            let name = format!("{} unchanged by widening {widen}", op.print(model));
            match (base.instantiate(op, n), wide.instantiate(op, n)) {
                (Ok(a), Ok(b)) => compare(model, name, &a, &b),
                (Err(e), _) | (_, Err(e)) => Check::new(name, false).with_detail(e.to_string()),
            }
        })
        .collect();
    Report::new("widening", model, n, checks)
}

fn relabel(raw: &RawProduct, perm: &[usize]) -> RawProduct {
    let mut deco = vec![SurfaceModel::UNIT; raw.deco.len()];
    for (s, &b) in raw.deco.iter().enumerate() {
        deco[perm[s]] = b;
    }
    let pairs = raw
        .pairs
        .iter()
        .map(|p| crate::bv_ring::Pair::new(perm[p.a as usize], perm[p.b as usize], p.kind))
        .collect();
    RawProduct { pairs, deco }
}

/// Normal forms do not depend on rewrite order or slot labels, and the
/// product is associative and commutative.
pub fn confluence_suite(model: &SurfaceModel, samples: usize, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::with_capacity(samples);
    for i in 0..samples {
        let k = rng.gen_range(1..=4usize);
        let raw = random_raw_product(model, &mut rng, k);
        let nf = model.reduce(raw.clone());

        let mut shuffled = raw.clone();
        shuffled.pairs.shuffle(&mut rng);
        let order_ok = model.reduce(shuffled) == nf;

        let mut perm: Vec<usize> = (0..k).collect();
        perm.shuffle(&mut rng);
        let relabeled = model.reduce(relabel(&raw, &perm));
        let label_ok = model.permute(&nf, &perm).is_ok_and(|p| p == relabeled);

        let a = random_class(model, &mut rng, k, None, 3);
        let b = random_class(model, &mut rng, k, None, 3);
        let c = random_class(model, &mut rng, k, None, 3);
        let mul =
            |x: &MultiPointClass, y: &MultiPointClass| model.multiply(x, y).expect("same slots");
        let assoc_ok = mul(&mul(&a, &b), &c) == mul(&a, &mul(&b, &c));
        let comm_ok = mul(&a, &b) == mul(&b, &a);

        let pass = order_ok && label_ok && assoc_ok && comm_ok;
        let mut check = Check::new(format!("product #{i} on {k} slots"), pass);
        if !pass {
            check = check.with_detail(format!(
                "order {order_ok}, relabel {label_ok}, assoc {assoc_ok}, comm {comm_ok}; \
                 raw pairs {:?} deco {:?}; a = {}, b = {}, c = {}",
                raw.pairs,
                raw.deco,
                a.display(model),
                b.display(model),
                c.display(model)
            ));
        }
        checks.push(check);
    }
    Report::new("confluence", model, 0, checks)
}
