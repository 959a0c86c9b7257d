//! Exact rational oracles for the bases and the closed-form moments.

use bbops::basis::{bezier_basis_all, binom_basis, binom_basis_all, q_basis_all};
use bbops::beta_functional::f_functional_moment;
use bbops::operators::{moment_closed_form, OperatorConfig};
use num::{BigInt, BigRational, One, ToPrimitive, Zero};

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn exact_binom_row(n: usize, x: &BigRational) -> Vec<BigRational> {
    let y = BigRational::one() - x;
    (0..=n)
        .map(|k| BigRational::from_integer(binomial(n, k)) * num::pow(x.clone(), k) * num::pow(y.clone(), n - k))
        .collect()
}

fn exact_tails(p: &[BigRational]) -> Vec<BigRational> {
    let mut j = vec![BigRational::zero(); p.len() + 1];
    for k in (0..p.len()).rev() {
        j[k] = &j[k + 1] + &p[k];
    }
    j
}

fn close(got: f64, want: &BigRational, rel: f64) -> bool {
    let w = want.to_f64().unwrap();
    (got - w).abs() <= rel * w.abs().max(f64::MIN_POSITIVE)
}

#[test]
fn binomial_basis_matches_rational_arithmetic_at_large_degree() {
    for &(n, p, q) in &[(60, 1, 3), (250, 37, 100), (400, 1, 2), (500, 9, 10)] {
        let x = rat(p, q);
        let exact = exact_binom_row(n, &x);
        let xf = p as f64 / q as f64;
        let row = binom_basis_all(n, xf).unwrap();
        for k in 0..=n {
            let w = exact[k].to_f64().unwrap();
            // skip entries that underflow the f64 range
            if w < 1e-280 {
                continue;
            }
            assert!(close(row[k], &exact[k], 1e-12), "row n={n} k={k}: {} vs {w}", row[k]);
            assert!(close(binom_basis(n, k, xf).unwrap(), &exact[k], 1e-12), "single n={n} k={k}");
        }
    }
}

#[test]
fn bezier_and_generalized_bases_match_rational_tails() {
    for &(n, p, q) in &[(12, 1, 4), (40, 3, 5), (90, 1, 2)] {
        let x = rat(p, q);
        let xf = p as f64 / q as f64;
        let j = exact_tails(&exact_binom_row(n, &x));
        let jf = bezier_basis_all(n, xf).unwrap();
        for k in 0..=n {
            assert!(close(jf[k], &j[k], 1e-12), "J n={n} k={k}");
        }
        // integer alpha keeps Q rational
        for alpha in [2usize, 3] {
            let qf = q_basis_all(n, alpha as f64, xf).unwrap();
            for k in 0..=n {
                let exact = num::pow(j[k].clone(), alpha) - num::pow(j[k + 1].clone(), alpha);
                if exact.to_f64().unwrap() < 1e-280 {
                    continue;
                }
                assert!(close(qf[k], &exact, 1e-11), "Q alpha={alpha} n={n} k={k}: {} vs {}", qf[k], exact.to_f64().unwrap());
            }
        }
    }
}

/// `E[(beta t + (1-beta) m)^j]` for `t ~ Beta(a, b)` with integer shapes and `m = a/(a+b)`.
fn exact_smoothed_moment(a: usize, b: usize, beta: &BigRational, j: usize) -> BigRational {
    let s = BigRational::from_integer(BigInt::from(a + b));
    let m = BigRational::from_integer(BigInt::from(a)) / &s;
    // raw moments E t^i = prod_{r<i} (a + r)/(a + b + r)
    let raw = |i: usize| {
        (0..i).fold(BigRational::one(), |acc, r| {
            acc * BigRational::from_integer(BigInt::from(a + r)) / BigRational::from_integer(BigInt::from(a + b + r))
        })
    };
    let w = BigRational::one() - beta;
    (0..=j).fold(BigRational::zero(), |acc, i| {
        acc + BigRational::from_integer(binomial(j, i))
            * num::pow(beta.clone(), i)
            * raw(i)
            * num::pow(w.clone() * &m, j - i)
    })
}

/// `L(t^j; x)` for `alpha = 1`, summed exactly.
fn exact_operator_moment(n: usize, beta: &BigRational, j: usize, x: &BigRational) -> BigRational {
    let p = exact_binom_row(n, x);
    let m = n - 1;
    let mut total = if j == 0 { p[0].clone() } else { BigRational::zero() } + &p[n];
    for k in 1..n {
        let value = if k == m {
            // point mass at 1
            BigRational::one()
        } else {
            exact_smoothed_moment(m * k, m * (m - k), beta, j)
        };
        total += value * &p[k];
    }
    total
}

#[test]
fn smoothing_functional_moments_match_exact_beta_moments() {
    for n in [2usize, 3, 7, 20, 40] {
        for k in 1..n {
            for (bp, bq) in [(0, 1), (1, 4), (1, 2), (1, 1)] {
                let beta = rat(bp, bq);
                for j in 0..=2u32 {
                    let want = if k == n - 1 {
                        BigRational::one()
                    } else {
                        exact_smoothed_moment((n - 1) * k, (n - 1) * (n - 1 - k), &beta, j as usize)
                    };
                    let got = f_functional_moment(n, k, bp as f64 / bq as f64, j).unwrap();
                    assert!(close(got, &want, 1e-13), "n={n} k={k} beta={beta} j={j}: {got}");
                }
            }
        }
    }
}

#[test]
fn operator_moment_closed_forms_match_exact_sums() {
    for n in [2usize, 3, 5, 11, 30] {
        for (bp, bq) in [(0, 1), (1, 2), (1, 1), (3, 10)] {
            let beta = rat(bp, bq);
            let config = OperatorConfig::generalized(n, 1.0, bp as f64 / bq as f64).unwrap();
            for (xp, xq) in [(0, 1), (1, 7), (1, 2), (5, 6), (1, 1)] {
                let x = rat(xp, xq);
                for j in 0..=2u32 {
                    let want = exact_operator_moment(n, &beta, j as usize, &x).to_f64().unwrap();
                    let got = moment_closed_form(&config, j, xp as f64 / xq as f64).unwrap();
                    assert!((got - want).abs() <= 1e-14, "n={n} beta={beta} x={x} j={j}: {got} vs {want}");
                }
            }
        }
    }
}

#[test]
fn weighted_bezier_sum_at_the_smallest_degree() {
    // n = 2, x = 1/2: J_{2,1} = p_1 + p_2 = 3/4
    let j = exact_tails(&exact_binom_row(2, &rat(1, 2)));
    assert_eq!(j[1], rat(3, 4));
    let s = bbops::operators::lemma3_sums(2, 0.5).unwrap();
    assert!((s.s2_direct - 0.75).abs() < 1e-15);
    assert!((s.s2 - 0.25).abs() < 1e-15);
    assert!((s.s2_corrected - 0.75).abs() < 1e-15);
}
