//! Log-gamma and the saddle-point binomial density.
//!
//! The binomial mass is evaluated with Loader's deviance form
//! `exp(-stirlerr terms - bd0 terms) / sqrt(2 pi k (n-k) / n)`, which keeps
//! relative accuracy near machine precision for large `n` where
//! `lgamma(n+1) - lgamma(k+1) - lgamma(n-k+1)` would cancel badly.

use std::f64::consts::PI;

/// Natural log of |Gamma(x)|.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

// stirlerr(m) = ln(m!) - ln(sqrt(2 pi m) (m/e)^m) for m = 0..=15.
#[allow(clippy::excessive_precision)]
const STIRLERR_SMALL: [f64; 16] = [
    0.0,
    0.081_061_466_795_327_258_219_670_2,
    0.041_340_695_955_409_294_093_822_1,
    0.027_677_925_684_998_339_148_789_29,
    0.020_790_672_103_765_093_111_522_77,
    0.016_644_691_189_821_192_163_194_87,
    0.013_876_128_823_070_747_998_745_73,
    0.011_896_709_945_891_770_095_055_72,
    0.010_411_265_261_972_096_497_478_567,
    0.009_255_462_182_712_732_917_728_637,
    0.008_330_563_433_362_871_256_469_318,
    0.007_573_675_487_951_840_794_972_024,
    0.006_942_840_107_209_529_865_664_152,
    0.006_408_994_188_004_207_068_439_631,
    0.005_951_370_112_758_847_735_624_416,
    0.005_554_733_551_962_801_371_038_690,
];

/// Error of Stirling's approximation to ln(m!) for a nonnegative integer `m`.
pub fn stirlerr(m: u64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if m <= 15 {
        return STIRLERR_SMALL[m as usize];
    }
    let n = m as f64;
    let nn = n * n;
    if m > 500 {
        (S0 - S1 / nn) / n
    } else if m > 80 {
        (S0 - (S1 - S2 / nn) / nn) / n
    } else if m > 35 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n
    }
}

/// `ln Gamma(x) - ((x - 1/2) ln x - x + ln sqrt(2 pi))` for `x >= 10`,
/// by the Stirling series.
pub fn lgammacor(x: f64) -> f64 {
    const C: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
        -3617.0 / 122_400.0,
    ];
    debug_assert!(x >= 10.0);
    let x2 = 1.0 / (x * x);
    C.iter().rev().fold(0.0, |acc, &c| acc * x2 + c) / x
}

/// `ln B(p, q)` for positive arguments, avoiding the cancellation of three
/// large log-gamma values when either argument is large.
pub(crate) fn ln_beta_unchecked(a: f64, b: f64) -> f64 {
    const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_741_780_329_736_4;
    let (p, q) = if a < b { (a, b) } else { (b, a) };
    if p >= 10.0 {
        let corr = lgammacor(p) + lgammacor(q) - lgammacor(p + q);
        -0.5 * q.ln() + LN_SQRT_2PI + corr + (p - 0.5) * (p / (p + q)).ln()
            + q * (-p / (p + q)).ln_1p()
    } else if q >= 10.0 {
        let corr = lgammacor(q) - lgammacor(p + q);
        ln_gamma(p) + corr + p - p * (p + q).ln() + (q - 0.5) * (-p / (p + q)).ln_1p()
    } else {
        ln_gamma(p) + ln_gamma(q) - ln_gamma(p + q)
    }
}

/// Deviance term `x ln(x/np) + np - x`, evaluated without cancellation when
/// `x` is close to `np`.
pub fn bd0(x: f64, np: f64) -> f64 {
    if (x - np).abs() < 0.1 * (x + np) {
        let mut v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        if s.abs() < f64::MIN_POSITIVE {
            return s;
        }
        let mut ej = 2.0 * x * v;
        v *= v;
        for j in 1..1000 {
            ej *= v;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * (x / np).ln() + np - x
    }
}

/// Binomial mass `C(n,k) p^k q^(n-k)` with `q = 1 - p` supplied separately.
///
/// Callers guarantee `k <= n` and `p, q` in `[0, 1]`.
pub fn binom_pmf(n: u64, k: u64, p: f64, q: f64) -> f64 {
    if p == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if q == 0.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    let nf = n as f64;
    if k == 0 {
        if n == 0 {
            return 1.0;
        }
        let lc = if p < 0.1 { -bd0(nf, nf * q) - nf * p } else { nf * q.ln() };
        return lc.exp();
    }
    if k == n {
        let lc = if q < 0.1 { -bd0(nf, nf * p) - nf * q } else { nf * p.ln() };
        return lc.exp();
    }
    let kf = k as f64;
    let lc = stirlerr(n)
        - stirlerr(k)
        - stirlerr(n - k)
        - bd0(kf, nf * p)
        - bd0(nf - kf, nf * q);
    let lf = (2.0 * PI).ln() + kf.ln() + (-kf / nf).ln_1p();
    (lc - 0.5 * lf).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stirlerr_table_matches_lgamma() {
        for m in 1..=15u64 {
            let n = m as f64;
            let direct = ln_gamma(n + 1.0) - (n + 0.5) * n.ln() + n - 0.5 * (2.0 * PI).ln();
            assert!((direct - stirlerr(m)).abs() < 1e-14, "m = {m}");
        }
    }

    #[test]
    fn stirlerr_series_is_continuous_with_lgamma() {
        for m in [16u64, 20, 36, 50, 81, 200, 501, 5000] {
            let n = m as f64;
            let direct = ln_gamma(n + 1.0) - (n + 0.5) * n.ln() + n - 0.5 * (2.0 * PI).ln();
            // lgamma loses absolute digits as n grows
            let tol = 1e-15 * ln_gamma(n + 1.0).abs().max(1.0) * 8.0;
            assert!((direct - stirlerr(m)).abs() < tol, "m = {m}");
        }
    }

    #[test]
    fn bd0_agrees_with_naive_form_away_from_np() {
        for (x, np) in [(3.0f64, 10.0f64), (50.0, 20.0), (7.0, 7.5), (100.0, 101.0)] {
            let naive: f64 = x * (x / np).ln() + np - x;
            assert!((bd0(x, np) - naive).abs() <= 1e-12 * naive.abs().max(1e-3));
        }
    }

    #[test]
    fn pmf_small_cases() {
        assert_eq!(binom_pmf(5, 0, 0.0, 1.0), 1.0);
        assert_eq!(binom_pmf(5, 5, 1.0, 0.0), 1.0);
        assert_eq!(binom_pmf(5, 2, 1.0, 0.0), 0.0);
        assert!((binom_pmf(2, 1, 0.5, 0.5) - 0.5).abs() < 1e-15);
        assert!((binom_pmf(3, 3, 0.5, 0.5) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn lgammacor_matches_lgamma_difference() {
        for x in [10.0, 12.5, 100.0, 1e4] {
            let direct = ln_gamma(x) - ((x - 0.5) * f64::ln(x) - x + 0.5 * (2.0 * PI).ln());
            assert!((direct - lgammacor(x)).abs() < 1e-15 * ln_gamma(x).abs() * 4.0);
        }
    }

    #[test]
    fn ln_beta_large_and_small_shapes() {
        // B(1, q) = 1/q exactly
        for q in [10.0, 1e3, 1e6, 9.9e6] {
            let got = ln_beta_unchecked(1.0, q);
            let want = -f64::ln(q);
            assert!((got - want).abs() <= 1e-13 * want.abs(), "q = {q}");
        }
        // B(2, q) = 1/(q (q+1))
        let q = 5e6;
        let want = -(f64::ln(q) + f64::ln(q + 1.0));
        assert!((ln_beta_unchecked(2.0, q) - want).abs() <= 1e-13 * want.abs());
    }

    #[test]
    fn log_gamma_known_values() {
        assert!((ln_gamma(0.5) - PI.sqrt().ln()).abs() < 1e-15);
        assert!((ln_gamma(5.0) - 24f64.ln()).abs() < 1e-15);
    }
}
