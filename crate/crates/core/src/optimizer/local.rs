//! Multistart BFGS with central finite-difference gradients.

use rayon::prelude::*;

const FD_STEP: f64 = 1e-5;
const ARMIJO: f64 = 1e-4;
const MAX_STEP: f64 = std::f64::consts::PI;

pub(crate) fn gradient<const N: usize>(f: &impl Fn(&[f64; N]) -> f64, x: &[f64; N], h: f64) -> [f64; N] {
    let mut g = [0.0; N];
    let mut probe = *x;
    for i in 0..N {
        probe[i] = x[i] + h;
        let up = f(&probe);
        probe[i] = x[i] - h;
        let down = f(&probe);
        probe[i] = x[i];
        g[i] = (up - down) / (2.0 * h);
    }
    g
}

fn dot<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn max_abs<const N: usize>(a: &[f64; N]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Local minimum from `x0`. Stops when the gradient's largest component is
/// below `tol`, when no descent step is found, or after `max_iter` iterations.
pub(crate) fn bfgs<const N: usize>(
    f: &impl Fn(&[f64; N]) -> f64,
    x0: [f64; N],
    tol: f64,
    max_iter: usize,
) -> ([f64; N], f64) {
    let mut x = x0;
    let mut fx = f(&x);
    let mut g = gradient(f, &x, FD_STEP);
    let mut h = identity::<N>();
    for _ in 0..max_iter {
        if max_abs(&g) < tol {
            break;
        }
        let mut d = mat_vec(&h, &g).map(|v| -v);
        let mut slope = dot(&g, &d);
        if slope >= 0.0 {
            h = identity();
            d = g.map(|v| -v);
            slope = -dot(&g, &g);
        }
        let len = dot(&d, &d).sqrt();
        if len > MAX_STEP {
            let scale = MAX_STEP / len;
            d = d.map(|v| v * scale);
            slope *= scale;
        }

        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let mut trial = x;
            for i in 0..N {
                trial[i] += t * d[i];
            }
            let ft = f(&trial);
            if ft <= fx + ARMIJO * t * slope {
                accepted = Some((trial, ft));
                break;
            }
            t *= 0.5;
        }
        let Some((x_new, f_new)) = accepted else { break };

        let g_new = gradient(f, &x_new, FD_STEP);
        let mut s = [0.0; N];
        let mut y = [0.0; N];
        for i in 0..N {
            s[i] = x_new[i] - x[i];
            y[i] = g_new[i] - g[i];
        }
        let sy = dot(&s, &y);
        if sy > 1e-14 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() && sy > 0.0 {
            h = bfgs_update(&h, &s, &y, sy);
        }
        let stalled = f_new == fx && s.iter().all(|v| *v == 0.0);
        x = x_new;
        fx = f_new;
        g = g_new;
        if stalled {
            break;
        }
    }
    (x, fx)
}

fn identity<const N: usize>() -> [[f64; N]; N] {
    let mut m = [[0.0; N]; N];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

fn mat_vec<const N: usize>(m: &[[f64; N]; N], v: &[f64; N]) -> [f64; N] {
    let mut out = [0.0; N];
    for i in 0..N {
        out[i] = dot(&m[i], v);
    }
    out
}

/// `H⁺ = (I − ρ s yᵀ) H (I − ρ y sᵀ) + ρ s sᵀ`.
fn bfgs_update<const N: usize>(h: &[[f64; N]; N], s: &[f64; N], y: &[f64; N], sy: f64) -> [[f64; N]; N] {
    let rho = 1.0 / sy;
    let hy = mat_vec(h, y);
    let yhy = dot(y, &hy);
    let mut out = *h;
    for i in 0..N {
        for j in 0..N {
            out[i][j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
        }
    }
    out
}

/// Lower value wins; exact ties go to the lexicographically smaller point.
pub(crate) fn better<const N: usize>(a: &([f64; N], f64), b: &([f64; N], f64)) -> bool {
    match a.1.total_cmp(&b.1) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => a.0.iter().zip(&b.0).find(|(x, y)| x != y).is_some_and(|(x, y)| x < y),
    }
}

/// Runs [`bfgs`] from every seed in parallel and reduces deterministically.
pub(crate) fn multistart<const N: usize, F>(f: &F, seeds: &[[f64; N]], tol: f64, max_iter: usize) -> ([f64; N], f64)
where
    F: Fn(&[f64; N]) -> f64 + Sync,
{
    let results: Vec<_> = seeds.par_iter().map(|&x0| bfgs(f, x0, tol, max_iter)).collect();
    let mut best = results[0];
    for r in &results[1..] {
        if better(r, &best) {
            best = *r;
        }
    }
    best
}
