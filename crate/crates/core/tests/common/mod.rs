//! Independent numerical oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

/// Adaptive Simpson quadrature of `f` on `[a, b]`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 48)
}

/// `∫_a^b f` split into `pieces` equal panels.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, pieces: usize, tol: f64) -> f64 {
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            adaptive_simpson(
                f,
                a + i as f64 * h,
                a + (i + 1) as f64 * h,
                tol / pieces as f64,
            )
        })
        .sum()
}

fn exp_on_grid(rate: f64, h: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| rate * (-rate * i as f64 * h).exp())
        .collect()
}

/// Trapezoid-rule convolution of two densities sampled at `i h`.
fn convolve(f: &[f64], g: &[f64], h: f64) -> Vec<f64> {
    (0..f.len())
        .map(|i| {
            let s: f64 = (0..=i).map(|j| f[j] * g[i - j]).sum();
            h * (s - 0.5 * (f[0] * g[i] + f[i] * g[0]))
        })
        .collect()
}

/// Density of `Σ X_k`, `X_k ~ Exp(rates[k])`, at `i h`, `i < points`, by
/// repeated numerical convolution of the exponential densities.
pub fn convolution_density(rates: &[f64], h: f64, points: usize) -> Vec<f64> {
    let mut acc = exp_on_grid(rates[0], h, points);
    for &r in &rates[1..] {
        acc = convolve(&acc, &exp_on_grid(r, h, points), h);
    }
    acc
}

/// Richardson-extrapolated convolution density at `i h`, `i < points`:
/// `(4 f_{h/2} - f_h) / 3`.
pub fn convolution_density_richardson(rates: &[f64], h: f64, points: usize) -> Vec<f64> {
    let coarse = convolution_density(rates, h, points);
    let fine = convolution_density(rates, 0.5 * h, 2 * points - 1);
    (0..points)
        .map(|i| (4.0 * fine[2 * i] - coarse[i]) / 3.0)
        .collect()
}

/// `λ^n x^{n-1} e^{-λx} / (n-1)!` evaluated directly.
pub fn erlang_pdf_direct(n: u32, lambda: f64, x: f64) -> f64 {
    let fact: f64 = (1..n).map(f64::from).product();
    lambda.powi(n as i32) * x.powi(n as i32 - 1) * (-lambda * x).exp() / fact
}

/// `Σ ℓ_j r_j e^{-r_j x}` with `ℓ_j = Π_{k≠j} r_k / (r_k - r_j)` for distinct rates.
pub fn hypo_pdf_direct(rates: &[f64], x: f64) -> f64 {
    rates
        .iter()
        .enumerate()
        .map(|(j, &rj)| {
            let l: f64 = rates
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, &rk)| rk / (rk - rj))
                .product();
            l * rj * (-rj * x).exp()
        })
        .sum()
}

/// Stage rates of EME(n, λ, w): `n` copies of `λ` followed by `λ/w`.
pub fn eme_rates(n: u32, lambda: f64, w: f64) -> Vec<f64> {
    let mut r = vec![lambda; n as usize];
    r.push(lambda / w);
    r
}

/// Upper integration limit beyond which the EME mass is negligible.
pub fn eme_upper(n: u32, lambda: f64, w: f64) -> f64 {
    let slow = lambda.min(lambda / w);
    (60.0 + 4.0 * n as f64) / slow
}

/// Kolmogorov-Smirnov distance computed with an independent sort.
pub fn ks_distance(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}
