//! Derivative-free Nelder-Mead simplex minimizer.
//!
//! Standard coefficients: reflection 1, expansion 2, contraction 0.5,
//! shrink 0.5. Vertices are ordered with a stable sort, so the search path
//! is a deterministic function of the objective values.

#[derive(Debug, Clone)]
pub struct NelderMeadOptions {
    /// Initial simplex offset along each coordinate.
    pub steps: Vec<f64>,
    pub max_iterations: usize,
    /// Stop once `f_worst - f_best <= rel_tol * |f_best|`.
    pub rel_tol: f64,
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Objective at every vertex of the final simplex, best first.
    pub simplex_values: Vec<f64>,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

struct Vertex {
    x: Vec<f64>,
    f: f64,
}

pub fn minimize<F>(mut objective: F, start: &[f64], opts: &NelderMeadOptions) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let n = start.len();
    assert_eq!(opts.steps.len(), n, "one initial step per coordinate");

    let mut eval = |x: &[f64]| {
        let v = objective(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<Vertex> = Vec::with_capacity(n + 1);
    simplex.push(Vertex { x: start.to_vec(), f: eval(start) });
    for i in 0..n {
        let mut x = start.to_vec();
        x[i] += opts.steps[i];
        let f = eval(&x);
        simplex.push(Vertex { x, f });
    }

    let mut iterations = 0;
    let mut converged = false;
    loop {
        simplex.sort_by(|a, b| a.f.total_cmp(&b.f));
        let best = simplex[0].f;
        let worst = simplex[n].f;
        let spread = worst - best;
        if spread <= opts.rel_tol * best.abs() {
            converged = true;
            break;
        }
        if iterations >= opts.max_iterations {
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..n).map(|j| simplex[..n].iter().map(|v| v.x[j]).sum::<f64>() / n as f64).collect();
        let along =
            |t: f64, from: &[f64]| -> Vec<f64> { centroid.iter().zip(from).map(|(c, w)| c + t * (c - w)).collect() };

        let xr = along(REFLECT, &simplex[n].x);
        let fr = eval(&xr);
        if fr < simplex[0].f {
            let xe = along(EXPAND, &simplex[n].x);
            let fe = eval(&xe);
            simplex[n] = if fe < fr { Vertex { x: xe, f: fe } } else { Vertex { x: xr, f: fr } };
            continue;
        }
        if fr < simplex[n - 1].f {
            simplex[n] = Vertex { x: xr, f: fr };
            continue;
        }
        // contraction: outside if the reflected point beat the worst vertex
        let t = if fr < simplex[n].f { REFLECT * CONTRACT } else { -CONTRACT };
        let xc = along(t, &simplex[n].x);
        let fc = eval(&xc);
        let threshold = fr.min(simplex[n].f);
        if fc < threshold {
            simplex[n] = Vertex { x: xc, f: fc };
            continue;
        }
        let anchor = simplex[0].x.clone();
        for v in simplex.iter_mut().skip(1) {
            for (xj, aj) in v.x.iter_mut().zip(&anchor) {
                *xj = aj + SHRINK * (*xj - aj);
            }
            v.f = eval(&v.x);
        }
    }

    Minimum {
        x: simplex[0].x.clone(),
        f: simplex[0].f,
        iterations,
        converged,
        simplex_values: simplex.iter().map(|v| v.f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(n: usize) -> NelderMeadOptions {
        NelderMeadOptions { steps: vec![0.1; n], max_iterations: 5000, rel_tol: 1e-14 }
    }

    #[test]
    fn quadratic_bowl() {
        let m = minimize(|x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2) + 5.0, &[0.0, 0.0], &opts(2));
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() < 1e-5);
        assert!((m.x[1] + 2.0).abs() < 1e-5);
        assert!((m.f - 5.0).abs() < 1e-10);
    }

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2) + 1.0;
        let m = minimize(f, &[-1.2, 1.0], &opts(2));
        assert!((m.x[0] - 1.0).abs() < 1e-4, "{:?}", m.x);
        assert!((m.x[1] - 1.0).abs() < 1e-4, "{:?}", m.x);
    }

    #[test]
    fn iteration_cap_is_respected() {
        let o = NelderMeadOptions { steps: vec![1.0], max_iterations: 3, rel_tol: 0.0 };
        let m = minimize(|x| (x[0] - 100.0).powi(2) + 1.0, &[0.0], &o);
        assert_eq!(m.iterations, 3);
        assert!(!m.converged);
    }

    #[test]
    fn start_at_optimum_stays_put() {
        let m = minimize(|x| x[0] * x[0] + 1.0, &[0.0], &opts(1));
        assert_eq!(m.x, vec![0.0]);
    }

    #[test]
    fn nan_is_treated_as_worst() {
        let f = |x: &[f64]| if x[0] < 0.0 { f64::NAN } else { (x[0] - 0.5).powi(2) + 1.0 };
        let m = minimize(f, &[0.07], &opts(1));
        assert!((m.x[0] - 0.5).abs() < 1e-5, "{m:?}");
    }
}
