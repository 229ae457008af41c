//! Log binomial probabilities in the saddle-point form of Loader (2000),
//! "Fast and accurate computation of binomial probabilities".
//!
//! `ln C(N,k) + k ln p + (N−k) ln q` is rewritten as
//! `δ(N) − δ(k) − δ(N−k) − D(k, Np) − D(N−k, Nq) + ½ ln(N / (2π k (N−k)))`
//! where `δ` is the Stirling error and `D` the deviance. No large logs are
//! subtracted, so relative accuracy does not degrade with `N`.

use std::f64::consts::PI;

/// `ln Γ(n+1) − (n+½) ln n + n − ½ ln 2π` for `n = 0..=15`.
#[allow(clippy::excessive_precision)]
const STIRLERR_SMALL: [f64; 16] = [
    0.0,
    0.081_061_466_795_327_258,
    0.041_340_695_955_409_294,
    0.027_677_925_684_998_339,
    0.020_790_672_103_765_093,
    0.016_644_691_189_821_192,
    0.013_876_128_823_070_748,
    0.011_896_709_945_891_770,
    0.010_411_265_261_972_096,
    0.009_255_462_182_712_732_9,
    0.008_330_563_433_362_871_3,
    0.007_573_675_487_951_840_8,
    0.006_942_840_107_209_529_9,
    0.006_408_994_188_004_207_1,
    0.005_951_370_112_758_847_7,
    0.005_554_733_551_962_801_4,
];

fn stirlerr(n: u32) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if n <= 15 {
        return STIRLERR_SMALL[n as usize];
    }
    let n = n as f64;
    let nn = n * n;
    if n > 500.0 {
        (S0 - S1 / nn) / n
    } else if n > 80.0 {
        (S0 - (S1 - S2 / nn) / nn) / n
    } else if n > 35.0 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n
    }
}

/// Deviance `x ln(x/m) + m − x`, summed as a series when `x ≈ m`.
fn bd0(x: f64, m: f64) -> f64 {
    if (x - m).abs() < 0.1 * (x + m) {
        let mut v = (x - m) / (x + m);
        let mut s = (x - m) * v;
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
        x * (x / m).ln() + m - x
    }
}

/// `ln P(K = k)` for `K ~ Binomial(n, p)` with `0 < p < 1`, `q = 1 − p`.
pub(crate) fn log_pmf(k: u32, n: u32, p: f64, q: f64) -> f64 {
    debug_assert!(p > 0.0 && q > 0.0 && k <= n);
    let nf = n as f64;
    if k == 0 {
        return nf * (-p).ln_1p();
    }
    if k == n {
        return nf * p.ln();
    }
    let kf = k as f64;
    let rest = nf - kf;
    let lc = stirlerr(n) - stirlerr(k) - stirlerr(n - k) - bd0(kf, nf * p) - bd0(rest, nf * q);
    lc + 0.5 * (nf / (2.0 * PI * kf * rest)).ln()
}
