//! Independent reference computations used to derive and freeze expected
//! values. Nothing in here calls into the library's numeric paths.

#![allow(dead_code)]

use std::f64::consts::{PI, SQRT_2};

/// erf(x) for 0 <= x <= 4.5 via the all-positive series
/// erf(x) = 2/sqrt(pi) * exp(-x^2) * sum 2^k x^(2k+1) / (1*3*...*(2k+1)).
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= 2.0 * x2 / (2.0 * k + 1.0);
        sum += term;
        if term <= sum * 1e-18 {
            break;
        }
    }
    2.0 / PI.sqrt() * (-x2).exp() * sum
}

/// erfc(x) for x >= 3 via the Laplace continued fraction, evaluated backwards.
fn erfc_continued_fraction(x: f64) -> f64 {
    let mut frac = 0.0;
    for k in (1..=400).rev() {
        frac = (k as f64 / 2.0) / (x + frac);
    }
    (-x * x).exp() / PI.sqrt() / (x + frac)
}

/// Standard normal CDF reference.
pub fn phi(z: f64) -> f64 {
    let x = z.abs() / SQRT_2;
    let upper_tail = if x < 3.0 {
        0.5 * (1.0 - erf_series(x))
    } else {
        0.5 * erfc_continued_fraction(x)
    };
    if z >= 0.0 {
        1.0 - upper_tail
    } else {
        upper_tail
    }
}

/// Upper tail 1 - Phi(z) without cancellation for large z.
pub fn phi_upper(z: f64) -> f64 {
    phi(-z)
}

/// Quantile by plain bisection on the reference CDF.
pub fn quantile(p: f64) -> f64 {
    let (mut lo, mut hi) = (-40.0_f64, 40.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if phi(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// SplitMix64 + Box-Muller, deliberately unrelated to the library generator.
pub struct RefRng(u64);

impl RefRng {
    pub fn new(seed: u64) -> Self {
        Self(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) / (1u64 << 53) as f64
    }

    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
    }
}

/// Per-observation Gaussian log density written out longhand.
pub fn log_density(x: f64, mean: f64, variance: f64) -> f64 {
    let d = x - mean;
    -0.5 * (2.0 * PI * variance).ln() - d * d / (2.0 * variance)
}

/// Brute-force Monte Carlo of Pr(r21 >= k | theta) for point hypotheses
/// theta1 and theta1 + delta, unit variance, summing per-observation densities.
pub fn brute_force_rl_strong_prob(
    theta: f64,
    theta1: f64,
    delta: f64,
    n: usize,
    k: f64,
    draws: usize,
    seed: u64,
) -> f64 {
    let mut rng = RefRng::new(seed);
    let theta2 = theta1 + delta;
    let mut hits = 0usize;
    for _ in 0..draws {
        let mut log_r21 = 0.0;
        for _ in 0..n {
            let x = theta + rng.normal();
            log_r21 += log_density(x, theta2, 1.0) - log_density(x, theta1, 1.0);
        }
        if log_r21.exp() >= k {
            hits += 1;
        }
    }
    hits as f64 / draws as f64
}

/// Midpoint Riemann sum of f over [a, b] with `cells` cells.
pub fn riemann(f: impl Fn(f64) -> f64, a: f64, b: f64, cells: usize) -> f64 {
    let h = (b - a) / cells as f64;
    (0..cells).map(|i| f(a + (i as f64 + 0.5) * h)).sum::<f64>() * h
}

/// Grid maximiser of a function over [a, b] with `points` equally spaced nodes.
pub fn grid_argmax(f: impl Fn(f64) -> f64, a: f64, b: f64, points: usize) -> (f64, f64) {
    let mut best = (a, f(a));
    for i in 0..points {
        let t = a + (b - a) * i as f64 / (points - 1) as f64;
        let v = f(t);
        if v > best.1 {
            best = (t, v);
        }
    }
    best
}

/// One-sample Kolmogorov-Smirnov distance against a continuous CDF.
pub fn ks_one_sample(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / m).abs().max(((i + 1) as f64 / m - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Two-sample Kolmogorov-Smirnov distance.
pub fn ks_two_sample(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}
