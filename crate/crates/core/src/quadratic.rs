//! Finite-rank rational quadratic spaces.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Q;

/// A symmetric bilinear form on `Q^rank` with named basis vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticSpace {
    gram: Vec<Vec<Q>>,
    labels: Vec<String>,
}

impl QuadraticSpace {
    pub fn new(gram: Vec<Vec<Q>>, labels: Vec<String>) -> Result<Self> {
        let r = gram.len();
        if labels.len() != r || gram.iter().any(|row| row.len() != r) {
            return Err(Error::Model(
                "gram must be square with one label per row".into(),
            ));
        }
        if (0..r).any(|i| (0..i).any(|j| gram[i][j] != gram[j][i])) {
            return Err(Error::AsymmetricGram);
        }
        Ok(Self { gram, labels })
    }

    /// Basis labels default to `v1 .. vr`.
    pub fn with_default_labels(gram: Vec<Vec<Q>>) -> Result<Self> {
        let labels = (1..=gram.len()).map(|i| format!("v{i}")).collect();
        Self::new(gram, labels)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<Q>] {
        &self.gram
    }

    pub fn entry(&self, i: usize, j: usize) -> &Q {
        &self.gram[i][j]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn pair(&self, x: &[Q], y: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() {
                    acc += xi * &self.gram[i][j] * yj;
                }
            }
        }
        acc
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Vec<Vec<Q>>> {
        invert(&self.gram)
    }

    /// (positive, negative, zero) counts of the form's signature.
    pub fn signature(&self) -> (usize, usize, usize) {
        signature(&self.gram)
    }
}

pub fn invert(m: &[Vec<Q>]) -> Result<Vec<Vec<Q>>> {
    let r = m.len();
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let mut inv: Vec<Vec<Q>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| if i == j { Q::one() } else { Q::zero() })
                .collect()
        })
        .collect();
    for col in 0..r {
        let piv = (col..r)
            .find(|&i| !a[i][col].is_zero())
            .ok_or(Error::SingularGram)?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let s = a[col][col].recip();
        for j in 0..r {
            a[col][j] *= &s;
            inv[col][j] *= &s;
        }
        for i in 0..r {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..r {
                    let t = &f * &a[col][j];
                    a[i][j] -= t;
                    let t = &f * &inv[col][j];
                    inv[i][j] -= t;
                }
            }
        }
    }
    Ok(inv)
}

/// Sylvester signature via symmetric elimination.
pub fn signature(m: &[Vec<Q>]) -> (usize, usize, usize) {
    use num_traits::Signed;
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let mut n = a.len();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    while n > 0 {
        // bring a nonzero diagonal entry to the front, or create one
        if let Some(k) = (0..n).find(|&k| !a[k][k].is_zero()) {
            a.swap(0, k);
            for row in a.iter_mut() {
                row.swap(0, k);
            }
        } else if let Some((i, j)) = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i][j].is_zero())
        {
            // replace e_i by e_i + e_j
            let row_j = a[j].clone();
            for (x, y) in a[i].iter_mut().zip(row_j) {
                *x += y;
            }
            for row in a.iter_mut() {
                let t = row[j].clone();
                row[i] += t;
            }
            a.swap(0, i);
            for row in a.iter_mut() {
                row.swap(0, i);
            }
        } else {
            zero += n;
            break;
        }
        let p = a[0][0].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        let mut next = vec![vec![Q::zero(); n - 1]; n - 1];
        for i in 1..n {
            for j in 1..n {
                next[i - 1][j - 1] = &a[i][j] - &a[i][0] * &a[0][j] / &p;
            }
        }
        a = next;
        n -= 1;
    }
    (pos, neg, zero)
}
