//! Dense box-constrained convex QP by a primal active-set method:
//!
//! minimize ½ dᵀ H d + gᵀ d  subject to  lo ≤ d ≤ hi
//!
//! `H` must be symmetric positive definite. Problems here are at most a
//! handful of variables, so each working-set change refactorizes.

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Bound {
    Free,
    Lower,
    Upper,
    Fixed,
}

/// Returns the minimizer, or `None` if a reduced Hessian fails to factor.
pub fn solve_box_qp(
    h: &DMatrix<f64>,
    g: &DVector<f64>,
    lo: &DVector<f64>,
    hi: &DVector<f64>,
) -> Option<DVector<f64>> {
    let n = g.len();
    let mut state: Vec<Bound> = (0..n)
        .map(|i| if lo[i] >= hi[i] { Bound::Fixed } else { Bound::Free })
        .collect();
    let mut d = DVector::from_fn(n, |i, _| 0.0f64.clamp(lo[i], hi[i].max(lo[i])));
    for i in 0..n {
        if state[i] == Bound::Fixed {
            d[i] = lo[i];
        } else if d[i] == lo[i] && lo[i] == 0.0 {
            // start on the bound; released below if the gradient points inward
            state[i] = Bound::Lower;
        } else if d[i] == hi[i] && hi[i] == 0.0 {
            state[i] = Bound::Upper;
        }
    }

    for _ in 0..(10 * n + 20) {
        let free: Vec<usize> = (0..n).filter(|&i| state[i] == Bound::Free).collect();
        let target = if free.is_empty() {
            d.clone()
        } else {
            let nf = free.len();
            let mut hff = DMatrix::zeros(nf, nf);
            let mut rhs = DVector::zeros(nf);
            for (a, &i) in free.iter().enumerate() {
                let mut acc = -g[i];
                for j in 0..n {
                    if state[j] != Bound::Free {
                        acc -= h[(i, j)] * d[j];
                    }
                }
                rhs[a] = acc;
                for (b, &j) in free.iter().enumerate() {
                    hff[(a, b)] = h[(i, j)];
                }
            }
            let sol = hff.cholesky()?.solve(&rhs);
            let mut t = d.clone();
            for (a, &i) in free.iter().enumerate() {
                t[i] = sol[a];
            }
            t
        };

        // Longest step toward the subspace minimizer that stays in the box.
        let mut step = 1.0;
        let mut blocking = None;
        for &i in &free {
            let delta = target[i] - d[i];
            if delta < 0.0 && target[i] < lo[i] {
                let t = (lo[i] - d[i]) / delta;
                if t < step {
                    step = t;
                    blocking = Some((i, Bound::Lower));
                }
            } else if delta > 0.0 && target[i] > hi[i] {
                let t = (hi[i] - d[i]) / delta;
                if t < step {
                    step = t;
                    blocking = Some((i, Bound::Upper));
                }
            }
        }
        for &i in &free {
            d[i] += step * (target[i] - d[i]);
        }
        if let Some((i, b)) = blocking {
            state[i] = b;
            d[i] = if b == Bound::Lower { lo[i] } else { hi[i] };
            continue;
        }

        // At the subspace minimizer: release the bound with the most negative
        // multiplier, if any.
        let grad = h * &d + g;
        let mut worst = 0.0;
        let mut release = None;
        for i in 0..n {
            let violation = match state[i] {
                Bound::Lower => -grad[i],
                Bound::Upper => grad[i],
                _ => 0.0,
            };
            if violation > worst {
                worst = violation;
                release = Some(i);
            }
        }
        match release {
            Some(i) if worst > 1e-14 * (1.0 + grad.amax()) => state[i] = Bound::Free,
            _ => return Some(d),
        }
    }
    Some(d)
}
