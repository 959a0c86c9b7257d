//! Binomial, Bezier and generalized (alpha-power) bases on [0, 1].
//!
//! `p_{n,k}` is the binomial density, `J_{n,k} = sum_{i>=k} p_{n,i}` its upper
//! tail (the Bezier basis), and `Q_{n,k} = J_{n,k}^alpha - J_{n,k+1}^alpha`.
//! Index `n + 1` of the Bezier basis is a sentinel that is identically zero.

use crate::error::{check_unit, domain, Result};
use crate::special::binom_pmf;

/// Mass below this is treated as zero when filling whole basis rows.
const NEGLIGIBLE: f64 = 1e-300;

fn check_degree(n: usize) -> Result<()> {
    if n == 0 {
        return Err(domain("basis degree must be positive"));
    }
    Ok(())
}

fn check_index(n: usize, k: usize, max: usize) -> Result<()> {
    if k > max {
        return Err(domain(format!("index k = {k} out of range for degree {n}")));
    }
    Ok(())
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha >= 1.0 {
        Ok(())
    } else {
        Err(domain(format!("alpha = {alpha} must be a finite real >= 1")))
    }
}

/// `p_{n,k}(x) = C(n,k) x^k (1-x)^(n-k)`.
pub fn binom_basis(n: usize, k: usize, x: f64) -> Result<f64> {
    check_degree(n)?;
    check_index(n, k, n)?;
    check_unit("x", x)?;
    Ok(binom_pmf(n as u64, k as u64, x, 1.0 - x))
}

/// All of `p_{n,0..=n}(x)`. Entries far in the tails underflow to zero.
pub fn binom_basis_all(n: usize, x: f64) -> Result<Vec<f64>> {
    check_degree(n)?;
    check_unit("x", x)?;
    Ok(binom_row(n, x))
}

pub(crate) fn binom_row(n: usize, x: f64) -> Vec<f64> {
    let mut row = vec![0.0; n + 1];
    if x == 0.0 {
        row[0] = 1.0;
        return row;
    }
    if x == 1.0 {
        row[n] = 1.0;
        return row;
    }
    let q = 1.0 - x;
    let (nn, mode) = (n as u64, ((n as f64 + 1.0) * x).floor().min(n as f64) as usize);
    // the density is unimodal, so walk outward from the mode until it vanishes
    for k in (0..=mode).rev() {
        let v = binom_pmf(nn, k as u64, x, q);
        row[k] = v;
        if v < NEGLIGIBLE {
            break;
        }
    }
    for k in mode + 1..=n {
        let v = binom_pmf(nn, k as u64, x, q);
        row[k] = v;
        if v < NEGLIGIBLE {
            break;
        }
    }
    row
}

/// `(J_{n,0}, ..., J_{n,n}, J_{n,n+1})` at `x`.
pub fn bezier_basis_all(n: usize, x: f64) -> Result<Vec<f64>> {
    check_degree(n)?;
    check_unit("x", x)?;
    Ok(bezier_row(&binom_row(n, x)))
}

/// Tail sums of a binomial row, accumulated from the top index down.
pub(crate) fn bezier_row(p: &[f64]) -> Vec<f64> {
    let n = p.len() - 1;
    let mut j = vec![0.0; n + 2];
    for k in (0..=n).rev() {
        j[k] = (j[k + 1] + p[k]).clamp(0.0, 1.0);
    }
    j[0] = 1.0;
    j
}

/// `J_{n,k}(x)` for `0 <= k <= n + 1`.
pub fn bezier_basis(n: usize, k: usize, x: f64) -> Result<f64> {
    check_degree(n)?;
    check_index(n, k, n + 1)?;
    Ok(bezier_basis_all(n, x)?[k])
}

/// `J_{k+1}^alpha ((1 + p_k / J_{k+1})^alpha - 1)`, which equals
/// `J_k^alpha - J_{k+1}^alpha` without subtracting two numbers near one.
pub(crate) fn q_from_tail(tail_above: f64, pk: f64, alpha: f64) -> f64 {
    if alpha == 1.0 {
        return pk;
    }
    if pk == 0.0 {
        return 0.0;
    }
    if tail_above == 0.0 {
        return pk.powf(alpha);
    }
    let r = pk / tail_above;
    if r > 1e8 {
        (tail_above + pk).powf(alpha) - tail_above.powf(alpha)
    } else {
        tail_above.powf(alpha) * (alpha * r.ln_1p()).exp_m1()
    }
}

/// `Q_{n,k}^(alpha)(x)`.
pub fn q_basis(n: usize, k: usize, alpha: f64, x: f64) -> Result<f64> {
    check_degree(n)?;
    check_index(n, k, n)?;
    check_alpha(alpha)?;
    Ok(q_basis_all(n, alpha, x)?[k])
}

/// `Q_{n,0..=n}^(alpha)(x)`; a partition of unity.
pub fn q_basis_all(n: usize, alpha: f64, x: f64) -> Result<Vec<f64>> {
    check_degree(n)?;
    check_alpha(alpha)?;
    check_unit("x", x)?;
    Ok(q_row(n, alpha, x))
}

pub(crate) fn q_row(n: usize, alpha: f64, x: f64) -> Vec<f64> {
    let p = binom_row(n, x);
    if alpha == 1.0 {
        return p;
    }
    let j = bezier_row(&p);
    (0..=n).map(|k| q_from_tail(j[k + 1], p[k], alpha)).collect()
}

/// `p'_{n,k}(x)`, with the exact one-sided values at the endpoints.
pub fn binom_basis_deriv(n: usize, k: usize, x: f64) -> Result<f64> {
    check_degree(n)?;
    check_index(n, k, n)?;
    check_unit("x", x)?;
    let nf = n as f64;
    if x == 0.0 {
        return Ok(match k {
            0 => -nf,
            1 => nf,
            _ => 0.0,
        });
    }
    if x == 1.0 {
        return Ok(if k == n {
            nf
        } else if k + 1 == n {
            -nf
        } else {
            0.0
        });
    }
    let p = binom_pmf(n as u64, k as u64, x, 1.0 - x);
    Ok((k as f64 - nf * x) / (x * (1.0 - x)) * p)
}

/// `J'_{n,k}(x) = n p_{n-1,k-1}(x)` for `1 <= k <= n`, zero at `k = 0` and
/// at the sentinel `k = n + 1`.
pub fn bezier_basis_deriv(n: usize, k: usize, x: f64) -> Result<f64> {
    check_degree(n)?;
    check_index(n, k, n + 1)?;
    check_unit("x", x)?;
    if k == 0 || k == n + 1 {
        return Ok(0.0);
    }
    if n == 1 {
        return Ok(1.0);
    }
    Ok(n as f64 * binom_pmf((n - 1) as u64, (k - 1) as u64, x, 1.0 - x))
}

/// `Q'_{n,k} = alpha (J_{n,k}^(alpha-1) J'_{n,k} - J_{n,k+1}^(alpha-1) J'_{n,k+1})`.
pub fn q_basis_deriv(n: usize, k: usize, alpha: f64, x: f64) -> Result<f64> {
    check_degree(n)?;
    check_index(n, k, n)?;
    check_alpha(alpha)?;
    check_unit("x", x)?;
    Ok(q_deriv_row(n, alpha, x)[k])
}

/// `Q'_{n,0..=n}^(alpha)(x)`.
pub fn q_basis_deriv_all(n: usize, alpha: f64, x: f64) -> Result<Vec<f64>> {
    check_degree(n)?;
    check_alpha(alpha)?;
    check_unit("x", x)?;
    Ok(q_deriv_row(n, alpha, x))
}

pub(crate) fn q_deriv_row(n: usize, alpha: f64, x: f64) -> Vec<f64> {
    let nf = n as f64;
    // jd[k] = J'_{n,k}
    let mut jd = vec![0.0; n + 2];
    if n == 1 {
        jd[1] = 1.0;
    } else {
        for (i, v) in binom_row(n - 1, x).into_iter().enumerate() {
            jd[i + 1] = nf * v;
        }
    }
    if alpha == 1.0 {
        return (0..=n).map(|k| jd[k] - jd[k + 1]).collect();
    }
    let j = bezier_row(&binom_row(n, x));
    let weighted: Vec<f64> = (0..n + 2)
        .map(|k| if jd[k] == 0.0 { 0.0 } else { j[k].powf(alpha - 1.0) * jd[k] })
        .collect();
    (0..=n).map(|k| alpha * (weighted[k] - weighted[k + 1])).collect()
}
