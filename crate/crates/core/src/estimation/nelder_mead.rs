//! Nelder–Mead simplex minimizer with standard coefficients
//! (reflection 1, expansion 2, contraction 1/2, shrink 1/2).

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct NelderMead {
    pub max_iterations: usize,
    /// Relative spread of objective values across the simplex at which the
    /// search stops.
    pub tolerance: f64,
}

impl NelderMead {
    /// Minimizes `f` from `x0`, with initial simplex edge `steps[i]` along
    /// each axis. After the first convergence the search is restarted once
    /// from the best point to guard against a collapsed simplex.
    pub fn minimize<F>(&self, mut f: F, x0: &[f64], steps: &[f64]) -> NelderMeadResult
    where
        F: FnMut(&[f64]) -> f64,
    {
        assert_eq!(x0.len(), steps.len());
        let mut first = self.run(&mut f, x0, steps, self.max_iterations);
        if !first.converged || first.iterations >= self.max_iterations {
            return first;
        }
        let budget = self.max_iterations - first.iterations;
        let second = self.run(&mut f, &first.x, steps, budget);
        let improved = first.fx - second.fx > self.tolerance * (first.fx.abs() + self.tolerance);
        first.iterations += second.iterations;
        if second.fx < first.fx {
            first.x = second.x;
            first.fx = second.fx;
        }
        first.converged = second.converged || !improved;
        first
    }

    fn run<F>(&self, f: &mut F, x0: &[f64], steps: &[f64], budget: usize) -> NelderMeadResult
    where
        F: FnMut(&[f64]) -> f64,
    {
        let n = x0.len();
        let eval = |f: &mut F, x: &[f64]| {
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };

        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        let f0 = eval(f, x0);
        simplex.push((x0.to_vec(), f0));
        for i in 0..n {
            let mut x = x0.to_vec();
            x[i] += steps[i];
            let fx = eval(f, &x);
            simplex.push((x, fx));
        }

        let mut iterations = 0;
        let mut converged = false;
        while iterations < budget {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let best = simplex[0].1;
            let worst = simplex[n].1;
            if (worst - best).abs() <= self.tolerance * (best.abs() + self.tolerance) {
                converged = true;
                break;
            }
            iterations += 1;

            let mut centroid = vec![0.0; n];
            for (x, _) in &simplex[..n] {
                for (c, xi) in centroid.iter_mut().zip(x) {
                    *c += xi / n as f64;
                }
            }
            let towards = |t: f64, from: &[f64]| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(from)
                    .map(|(c, w)| c + t * (w - c))
                    .collect()
            };

            let xr = towards(-1.0, &simplex[n].0);
            let fr = eval(f, &xr);
            if fr < best {
                let xe = towards(-2.0, &simplex[n].0);
                let fe = eval(f, &xe);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
                continue;
            }
            let (xc, fc) = if fr < worst {
                let xc = towards(-0.5, &simplex[n].0);
                let fc = eval(f, &xc);
                (xc, fc)
            } else {
                let xc = towards(0.5, &simplex[n].0);
                let fc = eval(f, &xc);
                (xc, fc)
            };
            if fc < worst.min(fr) {
                simplex[n] = (xc, fc);
                continue;
            }
            // shrink towards the best vertex
            let x_best = simplex[0].0.clone();
            for vertex in simplex.iter_mut().skip(1) {
                let x: Vec<f64> = x_best
                    .iter()
                    .zip(&vertex.0)
                    .map(|(b, v)| b + 0.5 * (v - b))
                    .collect();
                let fx = eval(f, &x);
                *vertex = (x, fx);
            }
        }

        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (x, fx) = simplex.swap_remove(0);
        NelderMeadResult {
            x,
            fx,
            iterations,
            converged,
        }
    }
}
