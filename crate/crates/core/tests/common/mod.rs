//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use rfso_relay::RateTriple;
use statrs::function::gamma::gamma_lr;
use std::f64::consts::LN_2;

/// Two-sided Kolmogorov-Smirnov statistic of `samples` against `cdf`.
pub fn ks_statistic(mut samples: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Tabulates a CDF on a log-spaced grid and interpolates linearly in ln x.
pub struct CdfTable {
    ln_lo: f64,
    step: f64,
    values: Vec<f64>,
}

impl CdfTable {
    pub fn new(lo: f64, hi: f64, points: usize, cdf: impl Fn(f64) -> f64) -> Self {
        let (ln_lo, ln_hi) = (lo.ln(), hi.ln());
        let step = (ln_hi - ln_lo) / (points - 1) as f64;
        let values = (0..points).map(|i| cdf((ln_lo + i as f64 * step).exp())).collect();
        CdfTable { ln_lo, step, values }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let pos = (x.ln() - self.ln_lo) / self.step;
        if pos <= 0.0 {
            return self.values[0];
        }
        let i = pos.floor() as usize;
        if i + 1 >= self.values.len() {
            return *self.values.last().unwrap();
        }
        let t = pos - i as f64;
        self.values[i] * (1.0 - t) + self.values[i + 1] * t
    }
}

/// CDF of the Rice amplitude with direct-to-scattered ratio ω and total
/// power ψ, as a Poisson mixture of central chi-square CDFs.
pub fn rice_cdf(r: f64, omega: f64, psi: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let sigma2 = psi / (2.0 * (1.0 + omega));
    let half_nc = omega; // ν²/(2σ²)
    let x = r * r / (2.0 * sigma2);
    let mut weight = (-half_nc).exp();
    let mut total = 0.0;
    let mut j = 0usize;
    loop {
        total += weight * gamma_lr(j as f64 + 1.0, x);
        j += 1;
        weight *= half_nc / j as f64;
        if (j as f64 > half_nc && weight < 1e-17) || j > 2000 {
            break;
        }
    }
    total.min(1.0)
}

/// CDF of the product of two unit-mean Gamma variables with shapes α, β:
/// F(z) = E_Y[P(α, α z / Y)] with Y ~ Gamma(β, 1/β), integrated by the
/// trapezoid rule in ln y.
pub fn gamma_gamma_cdf(z: f64, alpha: f64, beta: f64) -> f64 {
    if z <= 0.0 {
        return 0.0;
    }
    let ln_gamma_beta = statrs::function::gamma::ln_gamma(beta);
    // Density of u = ln y.
    let density = |u: f64| {
        let y = u.exp();
        (beta * beta.ln() + beta * u - beta * y - ln_gamma_beta).exp()
    };
    let (lo, hi) = (-50.0 / beta - 5.0, (10.0 + 60.0 / beta).ln());
    let n = 4000;
    let h = (hi - lo) / n as f64;
    let mut s = 0.0;
    for i in 0..=n {
        let u = lo + i as f64 * h;
        let w = if i == 0 || i == n { 0.5 } else { 1.0 };
        s += w * density(u) * gamma_lr(alpha, alpha * z / u.exp());
    }
    (s * h).min(1.0)
}

/// OOK mutual information (bits) for equiprobable inputs {0, p} in Gaussian
/// noise of variance σ², by Monte Carlo over `n` draws.
pub fn ook_mutual_information_mc(p: f64, sigma2: f64, n: usize, seed: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let sigma = sigma2.sqrt();
    let mut acc = 0.0;
    for _ in 0..n {
        let x = if rng.random::<bool>() { p } else { 0.0 };
        let z: f64 = StandardNormal.sample(&mut rng);
        let y = x + sigma * z;
        // log f(y|x) − log ½(f(y|0) + f(y|p)), Gaussian normalizers cancel.
        let l0 = -y * y / (2.0 * sigma2);
        let l1 = -(y - p) * (y - p) / (2.0 * sigma2);
        let lx = if x == 0.0 { l0 } else { l1 };
        let m = l0.max(l1);
        let mix = m + ((l0 - m).exp() + (l1 - m).exp()).ln() - LN_2;
        acc += (lx - mix) / LN_2;
    }
    acc / n as f64
}

/// Dual function D(λ) = E{max(λc1, (1−λ)c2)} + (1−λ)·M·E{c_fso} over
/// equally weighted states.
pub fn dual_value(states: &[RateTriple], lambda: f64, m: f64) -> f64 {
    let n = states.len() as f64;
    states
        .iter()
        .map(|s| (lambda * s.c1).max((1.0 - lambda) * s.c2) + (1.0 - lambda) * m * s.c_fso)
        .sum::<f64>()
        / n
}

/// Minimizer of the dual function over the grid λ = i/points, i = 1..=points.
pub fn dual_grid_minimizer(states: &[RateTriple], m: f64, points: usize) -> f64 {
    (1..=points)
        .map(|i| i as f64 / points as f64)
        .map(|l| (l, dual_value(states, l, m)))
        .fold((1.0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
        .0
}

/// Waterfilling capacity by greedy allocation of `quanta` equal power
/// increments to the mode with the largest marginal gain.
pub fn greedy_waterfill(singular_values: &[f64], sigma2: f64, power: f64, quanta: usize) -> f64 {
    let dp = power / quanta as f64;
    let gains: Vec<f64> = singular_values.iter().map(|s| s * s / sigma2).collect();
    let mut alloc = vec![0.0; gains.len()];
    let rate = |g: f64, p: f64| (1.0 + g * p).log2();
    for _ in 0..quanta {
        let best = (0..gains.len())
            .max_by(|&a, &b| {
                let da = rate(gains[a], alloc[a] + dp) - rate(gains[a], alloc[a]);
                let db = rate(gains[b], alloc[b] + dp) - rate(gains[b], alloc[b]);
                da.total_cmp(&db)
            })
            .unwrap();
        alloc[best] += dp;
    }
    gains.iter().zip(&alloc).map(|(&g, &p)| rate(g, p)).sum()
}

/// Water level μ with Σ (μ − σ²/s²)^+ = P, by bisection.
pub fn bisect_water_level(singular_values: &[f64], sigma2: f64, power: f64) -> f64 {
    let floors: Vec<f64> = singular_values
        .iter()
        .filter(|&&s| s > 0.0)
        .map(|s| sigma2 / (s * s))
        .collect();
    let used = |mu: f64| floors.iter().map(|f| (mu - f).max(0.0)).sum::<f64>();
    let mut lo = 0.0;
    let mut hi = floors.iter().cloned().fold(0.0, f64::max) + power;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if used(mid) < power {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Four equiprobable channel states used by the allocation tests.
pub fn four_states() -> Vec<RateTriple> {
    vec![
        RateTriple { c1: 40.0, c2: 20.0, c_fso: 0.10 },
        RateTriple { c1: 24.0, c2: 35.0, c_fso: 0.05 },
        RateTriple { c1: 8.0, c2: 50.0, c_fso: 0.0 },
        RateTriple { c1: 32.0, c2: 12.0, c_fso: 0.20 },
    ]
}

/// Uniformly resamples `states` `n` times.
pub fn resample(states: &[RateTriple], n: usize, seed: u64) -> Vec<RateTriple> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    (0..n).map(|_| states[rng.random_range(0..states.len())]).collect()
}
