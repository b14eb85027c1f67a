//! Nelder–Mead downhill simplex with restarts.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Debug)]
pub(crate) struct Outcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Settings {
    pub max_iterations: usize,
    /// Spread of objective values across the simplex, relative to
    /// `1 + |best value|`.
    pub f_tolerance: f64,
    pub max_restarts: usize,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;
const STALL_ITERATIONS: usize = 100;
const STALL_SPREAD: f64 = 1e-8;

fn eval<F: FnMut(&[f64]) -> f64>(f: &mut F, x: &[f64]) -> f64 {
    let v = f(x);
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

fn blend(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    // a + t (b - a)
    a.iter().zip(b).map(|(&ai, &bi)| ai + t * (bi - ai)).collect()
}

/// One descent from `start` with an axis-aligned initial simplex.
fn descend<F: FnMut(&[f64]) -> f64>(
    f: &mut F,
    start: &[f64],
    step: &[f64],
    settings: &Settings,
    budget: usize,
) -> Outcome {
    let n = start.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(start.to_vec());
    for i in 0..n {
        let mut v = start.to_vec();
        v[i] += step[i];
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(f, v)).collect();
    let mut order: Vec<usize> = (0..=n).collect();
    let mut iterations = 0;
    let mut converged = false;
    let mut record = f64::INFINITY;
    let mut last_progress = 0;

    while iterations < budget {
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        let best = order[0];
        let worst = order[n];
        let second_worst = order[n - 1];

        let spread = values[worst] - values[best];
        let scale = 1.0 + values[best].abs();
        if spread <= settings.f_tolerance * scale {
            converged = true;
            break;
        }
        if values[best] < record - settings.f_tolerance * scale {
            record = values[best];
            last_progress = iterations;
        }
        // rounding noise in the objective can keep the spread above the
        // tolerance forever; stop once the best value has stalled
        if iterations - last_progress > STALL_ITERATIONS * (n + 1) && spread <= STALL_SPREAD * scale {
            converged = true;
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for &i in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&simplex[i]) {
                *c += x / n as f64;
            }
        }

        let reflected = blend(&centroid, &simplex[worst], -REFLECT);
        let fr = eval(f, &reflected);
        if fr < values[best] {
            let expanded = blend(&centroid, &simplex[worst], -EXPAND);
            let fe = eval(f, &expanded);
            if fe < fr {
                simplex[worst] = expanded;
                values[worst] = fe;
            } else {
                simplex[worst] = reflected;
                values[worst] = fr;
            }
            continue;
        }
        if fr < values[second_worst] {
            simplex[worst] = reflected;
            values[worst] = fr;
            continue;
        }
        let (candidate, fc) = if fr < values[worst] {
            let c = blend(&centroid, &reflected, CONTRACT);
            let v = eval(f, &c);
            (c, v)
        } else {
            let c = blend(&centroid, &simplex[worst], CONTRACT);
            let v = eval(f, &c);
            (c, v)
        };
        if fc < values[worst].min(fr) {
            simplex[worst] = candidate;
            values[worst] = fc;
            continue;
        }
        let anchor = simplex[best].clone();
        for &i in &order[1..] {
            simplex[i] = blend(&anchor, &simplex[i], SHRINK);
            values[i] = eval(f, &simplex[i]);
        }
    }

    let best = (0..=n).min_by(|&i, &j| values[i].total_cmp(&values[j])).unwrap();
    Outcome { x: simplex[best].clone(), value: values[best], iterations, converged }
}

/// Minimizes `f` from `start`, restarting from the incumbent until a restart
/// no longer improves it.
pub(crate) fn minimize<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    start: &[f64],
    step: &[f64],
    settings: &Settings,
) -> Outcome {
    let mut total = 0;
    let mut best = descend(&mut f, start, step, settings, settings.max_iterations);
    total += best.iterations;
    for _ in 0..settings.max_restarts {
        if !best.converged || total >= settings.max_iterations {
            break;
        }
        let next = descend(&mut f, &best.x, step, settings, settings.max_iterations - total);
        total += next.iterations;
        let improved = next.value < best.value - settings.f_tolerance * (1.0 + best.value.abs());
        if next.value <= best.value {
            best = next;
        }
        if !improved {
            break;
        }
    }
    best.iterations = total;
    best
}
