//! Nelder-Mead simplex minimizer for the low-dimensional unitary-parameter
//! searches. Derivative-free on purpose: the l1 objective has kinks where
//! off-diagonal entries pass through zero.

#[derive(Debug, Clone)]
pub struct NmOptions {
    /// Max simplex iterations (each costs one to `n+1` function evaluations).
    pub max_iters: usize,
    /// Stall tolerance on the spread `f_worst - f_best`.
    pub ftol: f64,
    /// Initial simplex step added to each coordinate of the start point.
    pub initial_step: f64,
}

impl Default for NmOptions {
    fn default() -> Self {
        Self {
            max_iters: 800,
            ftol: 1e-9,
            initial_step: 0.4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NmOutcome {
    pub x: Vec<f64>,
    pub fx: f64,
    pub converged: bool,
}

pub fn nelder_mead(
    f: &mut dyn FnMut(&[f64]) -> f64,
    x0: &[f64],
    opts: &NmOptions,
) -> NmOutcome {
    let n = x0.len();
    assert!(n > 0, "nelder_mead needs at least one parameter");
    let (alpha, gamma, beta, delta) = (1.0, 2.0, 0.5, 0.5);


    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for k in 0..n {
        let mut v = x0.to_vec();
        v[k] += opts.initial_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| f(x)).collect();

    let mut converged = false;
    for _ in 0..opts.max_iters {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite objective"));
        let best = order[0];
        let worst = order[n];
        let second_worst = order[n - 1];

        if values[worst] - values[best] <= opts.ftol {
            converged = true;
            break;
        }

        let mut centroid = vec![0.0; n];
        for &idx in order.iter().take(n) {
            for k in 0..n {
                centroid[k] += simplex[idx][k];
            }
        }
        for c in centroid.iter_mut() {
            *c /= n as f64;
        }

        let reflect: Vec<f64> = (0..n)
            .map(|k| centroid[k] + alpha * (centroid[k] - simplex[worst][k]))
            .collect();
        let f_reflect = f(&reflect);

        if f_reflect < values[best] {
            let expand: Vec<f64> = (0..n)
                .map(|k| centroid[k] + gamma * (centroid[k] - simplex[worst][k]))
                .collect();
            let f_expand = f(&expand);
            if f_expand < f_reflect {
                simplex[worst] = expand;
                values[worst] = f_expand;
            } else {
                simplex[worst] = reflect;
                values[worst] = f_reflect;
            }
        } else if f_reflect < values[second_worst] {
            simplex[worst] = reflect;
            values[worst] = f_reflect;
        } else {
            let (pivot, f_pivot) = if f_reflect < values[worst] {
                (reflect.clone(), f_reflect)
            } else {
                (simplex[worst].clone(), values[worst])
            };
            let contract: Vec<f64> = (0..n)
                .map(|k| centroid[k] + beta * (pivot[k] - centroid[k]))
                .collect();
            let f_contract = f(&contract);
            if f_contract < f_pivot {
                simplex[worst] = contract;
                values[worst] = f_contract;
            } else {
                for &idx in order.iter().skip(1) {
                    for k in 0..n {
                        simplex[idx][k] =
                            simplex[best][k] + delta * (simplex[idx][k] - simplex[best][k]);
                    }
                    values[idx] = f(&simplex[idx].clone());
                }
            }
        }
    }

    let mut best_idx = 0usize;
    for k in 1..=n {
        if values[k] < values[best_idx] {
            best_idx = k;
        }
    }
    NmOutcome {
        x: simplex[best_idx].clone(),
        fx: values[best_idx],
        converged,
    }
}
