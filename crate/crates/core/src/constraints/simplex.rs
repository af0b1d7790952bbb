//! Dense bounded-variable primal simplex for
//! `max cᵀx s.t. Ax ≤ b, 0 ≤ x ≤ u` with `b ≥ 0`.

use crate::error::{check_dim, Error, Result};

const EPS: f64 = 1e-11;

#[derive(Clone, Copy, Debug, PartialEq)]
enum Status {
    Basic(usize),
    Lower,
    Upper,
}

/// Solves the LP starting from the slack basis at `x = 0`.
///
/// Entering and leaving variables follow Bland's smallest-index rule, so the
/// method terminates and its output is deterministic. Variables with
/// `u_j ≤ 0` stay at zero.
pub fn maximize(c: &[f64], a: &[Vec<f64>], b: &[f64], upper: &[f64]) -> Result<Vec<f64>> {
    let n = c.len();
    let m = a.len();
    check_dim(m, b.len())?;
    check_dim(n, upper.len())?;
    for row in a {
        check_dim(n, row.len())?;
    }
    if b.iter().any(|&v| !(v >= 0.0)) {
        return Err(Error::InvalidParameter("simplex requires b >= 0".into()));
    }
    let total = n + m;
    // Tableau B⁻¹[A | I]; the initial basis is the slacks.
    let mut t: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut full = row.clone();
            full.extend((0..m).map(|i| if i == r { 1.0 } else { 0.0 }));
            full
        })
        .collect();
    let ub: Vec<f64> = upper
        .iter()
        .map(|&u| u.max(0.0))
        .chain(std::iter::repeat_n(f64::INFINITY, m))
        .collect();
    let cost: Vec<f64> = c.iter().copied().chain(std::iter::repeat_n(0.0, m)).collect();
    let mut status: Vec<Status> = (0..total)
        .map(|k| if k < n { Status::Lower } else { Status::Basic(k - n) })
        .collect();
    let mut basic: Vec<usize> = (n..total).collect();
    let mut beta = b.to_vec();

    let max_iter = 50 * total + 1_000;
    for _ in 0..max_iter {
        // Reduced costs d_k = c_k − c_Bᵀ T_k, entering by smallest index.
        let entering = (0..total).find_map(|k| {
            let increase = match status[k] {
                Status::Basic(_) => return None,
                Status::Lower => true,
                Status::Upper => false,
            };
            if ub[k] <= 0.0 {
                return None;
            }
            let d = cost[k] - (0..m).map(|r| cost[basic[r]] * t[r][k]).sum::<f64>();
            let improving = if increase { d > EPS } else { d < -EPS };
            improving.then_some((k, increase))
        });
        let Some((k, increase)) = entering else {
            let mut x = vec![0.0; n];
            for (j, xj) in x.iter_mut().enumerate() {
                *xj = match status[j] {
                    Status::Basic(r) => beta[r],
                    Status::Lower => 0.0,
                    Status::Upper => ub[j],
                }
                .clamp(0.0, ub[j]);
            }
            return Ok(x);
        };
        let sign = if increase { 1.0 } else { -1.0 };
        // Basic variable r moves by delta_r per unit step θ.
        let mut theta = ub[k];
        let mut leave: Option<(usize, bool)> = None;
        for r in 0..m {
            let delta = -sign * t[r][k];
            let j = basic[r];
            let limit = if delta < -EPS {
                (beta[r].max(0.0)) / -delta
            } else if delta > EPS && ub[j].is_finite() {
                (ub[j] - beta[r]).max(0.0) / delta
            } else {
                continue;
            };
            // Ties prefer a bound flip, then the smallest leaving index.
            let better = if limit < theta - EPS {
                true
            } else if limit <= theta + EPS {
                matches!(leave, Some((r0, _)) if j < basic[r0])
            } else {
                false
            };
            if better {
                theta = limit;
                leave = Some((r, delta > 0.0));
            }
        }
        if !theta.is_finite() {
            return Err(Error::Internal("LP unbounded over a compact region".into()));
        }
        for r in 0..m {
            beta[r] += -sign * t[r][k] * theta;
        }
        match leave {
            None => {
                status[k] = if increase { Status::Upper } else { Status::Lower };
            }
            Some((r, to_upper)) => {
                let j = basic[r];
                status[j] = if to_upper { Status::Upper } else { Status::Lower };
                let entering_value = if increase { theta } else { ub[k] - theta };
                let pivot = t[r][k];
                for v in t[r].iter_mut() {
                    *v /= pivot;
                }
                let pivot_row = t[r].clone();
                for (i, row) in t.iter_mut().enumerate() {
                    if i != r {
                        let factor = row[k];
                        if factor != 0.0 {
                            for (v, p) in row.iter_mut().zip(&pivot_row) {
                                *v -= factor * p;
                            }
                        }
                    }
                }
                beta[r] = entering_value;
                basic[r] = k;
                status[k] = Status::Basic(r);
            }
        }
    }
    Err(Error::Internal("simplex iteration limit reached".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_budget_row() {
        // max 3x + y + 2z, x + y + z ≤ 2, x, y, z ∈ [0, 1]
        let x = maximize(&[3.0, 1.0, 2.0], &[vec![1.0; 3]], &[2.0], &[1.0; 3]).unwrap();
        assert_eq!(x, vec![1.0, 0.0, 1.0]);
    }

    #[test]
    fn two_rows() {
        // max x + y, x + 2y ≤ 2, 2x + y ≤ 2 → (2/3, 2/3)
        let x = maximize(&[1.0, 1.0], &[vec![1.0, 2.0], vec![2.0, 1.0]], &[2.0, 2.0], &[5.0, 5.0]).unwrap();
        assert!((x[0] - 2.0 / 3.0).abs() < 1e-12 && (x[1] - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_zero_budget() {
        let x = maximize(&[1.0, 1.0], &[vec![1.0, 1.0]], &[0.0], &[1.0, 1.0]).unwrap();
        assert_eq!(x, vec![0.0, 0.0]);
    }

    #[test]
    fn negative_costs_stay_at_zero() {
        let x = maximize(&[-1.0, 2.0], &[vec![1.0, 1.0]], &[10.0], &[3.0, 3.0]).unwrap();
        assert_eq!(x, vec![0.0, 3.0]);
    }
}
