//! Budgeted Nelder-Mead minimization with restarts on simplex collapse.

const REFLECTION: f64 = 1.0;
const EXPANSION: f64 = 2.0;
const CONTRACTION: f64 = 0.5;
const SHRINK: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    /// Total objective evaluations allowed.
    pub max_evals: usize,
    /// Edge length of the axis-aligned starting simplex.
    pub init_radius: f64,
    /// The simplex counts as collapsed once every vertex lies within this
    /// (max-norm) distance of the best one; the search then restarts from a
    /// fresh simplex around the best point.
    pub convergence_eps: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub collapses: usize,
}

struct Vertex {
    x: Vec<f64>,
    f: f64,
}

struct Budgeted<F> {
    objective: F,
    evals: usize,
    max_evals: usize,
    best: Option<(Vec<f64>, f64)>,
}

impl<F, E> Budgeted<F>
where
    F: FnMut(&[f64]) -> Result<f64, E>,
{
    /// `Ok(None)` once the budget is spent. NaN is treated as `+inf`.
    fn eval(&mut self, x: &[f64]) -> Result<Option<f64>, E> {
        if self.evals >= self.max_evals {
            return Ok(None);
        }
        self.evals += 1;
        let mut f = (self.objective)(x)?;
        if f.is_nan() {
            f = f64::INFINITY;
        }
        if self.best.as_ref().is_none_or(|(_, b)| f < *b) {
            self.best = Some((x.to_vec(), f));
        }
        Ok(Some(f))
    }
}

fn axpy(base: &[f64], dir_from: &[f64], dir_to: &[f64], t: f64) -> Vec<f64> {
    base.iter()
        .zip(dir_from.iter().zip(dir_to))
        .map(|(&b, (&from, &to))| b + t * (to - from))
        .collect()
}

fn diameter(simplex: &[Vertex]) -> f64 {
    let best = &simplex[0].x;
    simplex[1..]
        .iter()
        .flat_map(|v| v.x.iter().zip(best).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max)
}

fn sort(simplex: &mut [Vertex]) {
    simplex.sort_by(|a, b| a.f.total_cmp(&b.f));
}

/// Minimizes `objective` starting from `x0` with the standard coefficients
/// (reflection 1, expansion 2, contraction 1/2, shrink 1/2). Stops when the
/// evaluation budget is spent and returns the best point seen.
pub fn minimize<F, E>(objective: F, x0: &[f64], opts: &NelderMeadOptions) -> Result<Minimum, E>
where
    F: FnMut(&[f64]) -> Result<f64, E>,
{
    let dim = x0.len();
    let mut b = Budgeted {
        objective,
        evals: 0,
        max_evals: opts.max_evals,
        best: None,
    };
    let mut collapses = 0;
    let mut start = x0.to_vec();

    'outer: loop {
        // Fresh simplex around `start`.
        let mut simplex = Vec::with_capacity(dim + 1);
        for i in 0..=dim {
            let mut x = start.clone();
            if i > 0 {
                x[i - 1] += opts.init_radius;
            }
            match b.eval(&x)? {
                Some(f) => simplex.push(Vertex { x, f }),
                None => break 'outer,
            }
        }
        sort(&mut simplex);

        loop {
            if diameter(&simplex) < opts.convergence_eps {
                collapses += 1;
                start = simplex[0].x.clone();
                continue 'outer;
            }
            let worst = dim;
            let mut centroid = vec![0.0; dim];
            for v in &simplex[..worst] {
                for (c, x) in centroid.iter_mut().zip(&v.x) {
                    *c += x / dim as f64;
                }
            }
            let reflected = axpy(&centroid, &simplex[worst].x, &centroid, REFLECTION);
            let Some(fr) = b.eval(&reflected)? else {
                break 'outer;
            };

            if fr < simplex[0].f {
                let expanded = axpy(&centroid, &centroid, &reflected, EXPANSION);
                let Some(fe) = b.eval(&expanded)? else {
                    break 'outer;
                };
                simplex[worst] = if fe < fr {
                    Vertex { x: expanded, f: fe }
                } else {
                    Vertex {
                        x: reflected,
                        f: fr,
                    }
                };
            } else if fr < simplex[worst - 1].f {
                simplex[worst] = Vertex {
                    x: reflected,
                    f: fr,
                };
            } else {
                let outside = fr < simplex[worst].f;
                let contracted = if outside {
                    axpy(&centroid, &centroid, &reflected, CONTRACTION)
                } else {
                    axpy(&centroid, &centroid, &simplex[worst].x, CONTRACTION)
                };
                let Some(fc) = b.eval(&contracted)? else {
                    break 'outer;
                };
                let accept = if outside {
                    fc <= fr
                } else {
                    fc < simplex[worst].f
                };
                if accept {
                    simplex[worst] = Vertex {
                        x: contracted,
                        f: fc,
                    };
                } else {
                    let best = simplex[0].x.clone();
                    for v in simplex[1..].iter_mut() {
                        let x = axpy(&best, &best, &v.x, SHRINK);
                        let Some(f) = b.eval(&x)? else { break 'outer };
                        *v = Vertex { x, f };
                    }
                }
            }
            sort(&mut simplex);
        }
    }

    let (x, value) = b.best.unwrap_or_else(|| (x0.to_vec(), f64::INFINITY));
    Ok(Minimum {
        x,
        value,
        evals: b.evals,
        collapses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    fn opts(max_evals: usize) -> NelderMeadOptions {
        NelderMeadOptions {
            max_evals,
            init_radius: 0.5,
            convergence_eps: 1e-10,
        }
    }

    #[test]
    fn minimizes_rosenbrock() {
        let f = |x: &[f64]| -> Result<f64, Infallible> {
            Ok((1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2))
        };
        let m = minimize(f, &[-1.2, 1.0], &opts(4000)).unwrap();
        assert!(m.value < 1e-10, "{m:?}");
        assert!((m.x[0] - 1.0).abs() < 1e-4 && (m.x[1] - 1.0).abs() < 1e-4);
        assert!(m.evals <= 4000);
    }

    #[test]
    fn respects_budget_exactly() {
        let mut calls = 0;
        let f = |x: &[f64]| -> Result<f64, Infallible> {
            calls += 1;
            Ok(x.iter().map(|v| v * v).sum())
        };
        let m = minimize(f, &[3.0; 5], &opts(137)).unwrap();
        assert_eq!(m.evals, 137);
        assert_eq!(calls, 137);
    }

    #[test]
    fn restarts_after_collapse() {
        let f =
            |x: &[f64]| -> Result<f64, Infallible> { Ok((x[0] - 2.0).abs() + (x[1] + 1.0).abs()) };
        let m = minimize(f, &[0.0, 0.0], &opts(3000)).unwrap();
        assert!(m.collapses >= 1);
        assert!(m.value < 1e-8);
    }

    #[test]
    fn nan_counts_as_worse() {
        let f = |x: &[f64]| -> Result<f64, Infallible> {
            Ok(if x[0] < 0.0 {
                f64::NAN
            } else {
                (x[0] - 1.0).powi(2) + x[1] * x[1]
            })
        };
        let m = minimize(f, &[0.2, 0.3], &opts(2000)).unwrap();
        assert!(m.value < 1e-10);
    }

    #[test]
    fn errors_propagate() {
        let f = |x: &[f64]| -> Result<f64, &'static str> {
            if x[0] > 1.0 {
                Err("boom")
            } else {
                Ok(-x[0])
            }
        };
        assert_eq!(minimize(f, &[0.0, 0.0], &opts(500)), Err("boom"));
    }
}
