//! Small Nelder–Mead minimizer used to polish grid optima.

/// Stopping rules for [`nelder_mead`].
#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    pub max_iter: usize,
    /// Stop when the spread of objective values falls below this.
    pub f_tol: f64,
    /// Stop when every vertex is within this distance of the best one.
    pub x_tol: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            max_iter: 500,
            f_tol: 1e-15,
            x_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
}

/// Minimizes `f` from `x0` with an axis-aligned initial simplex of the given
/// step sizes. Infeasible points should evaluate to `f64::INFINITY`.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], steps: &[f64], opts: SimplexOptions) -> SimplexResult
where
    F: FnMut(&[f64]) -> f64,
{
    const REFLECT: f64 = 1.0;
    const EXPAND: f64 = 2.0;
    const CONTRACT: f64 = 0.5;
    const SHRINK: f64 = 0.5;

    let dim = x0.len();
    let mut verts: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    verts.push(x0.to_vec());
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += steps[i];
        verts.push(v);
    }
    let mut vals: Vec<f64> = verts.iter().map(|v| f(v)).collect();

    let mut iterations = 0;
    while iterations < opts.max_iter {
        iterations += 1;
        let mut order: Vec<usize> = (0..=dim).collect();
        // stable sort keeps earlier vertices first on ties
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        verts = order.iter().map(|&i| verts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();

        let spread = vals[dim] - vals[0];
        let size = verts[1..]
            .iter()
            .map(|v| v.iter().zip(&verts[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if (spread.is_finite() && spread <= opts.f_tol) || size <= opts.x_tol {
            break;
        }

        let centroid: Vec<f64> = (0..dim)
            .map(|j| verts[..dim].iter().map(|v| v[j]).sum::<f64>() / dim as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&verts[dim])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = along(REFLECT);
        let fr = f(&xr);
        if fr < vals[0] {
            let xe = along(EXPAND);
            let fe = f(&xe);
            if fe < fr {
                verts[dim] = xe;
                vals[dim] = fe;
            } else {
                verts[dim] = xr;
                vals[dim] = fr;
            }
            continue;
        }
        if fr < vals[dim - 1] {
            verts[dim] = xr;
            vals[dim] = fr;
            continue;
        }
        let (xc, fc) = if fr < vals[dim] {
            let xc = along(CONTRACT);
            let fc = f(&xc);
            (xc, fc)
        } else {
            let xc = along(-CONTRACT);
            let fc = f(&xc);
            (xc, fc)
        };
        if fc < vals[dim].min(fr) {
            verts[dim] = xc;
            vals[dim] = fc;
            continue;
        }
        for i in 1..=dim {
            let shrunk: Vec<f64> = verts[i]
                .iter()
                .zip(&verts[0])
                .map(|(v, b)| b + SHRINK * (v - b))
                .collect();
            vals[i] = f(&shrunk);
            verts[i] = shrunk;
        }
    }

    let best = (0..=dim)
        .min_by(|&a, &b| vals[a].total_cmp(&vals[b]))
        .unwrap_or(0);
    SimplexResult {
        x: verts[best].clone(),
        f: vals[best],
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_rosenbrock_minimum() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let res = nelder_mead(
            rosen,
            &[-1.2, 1.0],
            &[0.1, 0.1],
            SimplexOptions {
                max_iter: 5000,
                ..Default::default()
            },
        );
        assert!((res.x[0] - 1.0).abs() < 1e-4 && (res.x[1] - 1.0).abs() < 1e-4, "{:?}", res.x);
    }

    #[test]
    fn respects_infeasible_region() {
        let f = |x: &[f64]| if x[0] < 0.5 { f64::INFINITY } else { (x[0] - 0.2).powi(2) };
        let res = nelder_mead(f, &[1.0], &[0.1], SimplexOptions::default());
        assert!(res.x[0] >= 0.5 && res.x[0] < 0.5 + 1e-6);
    }

    #[test]
    fn never_worse_than_start() {
        let f = |x: &[f64]| (x[0] * 3.0).sin() + 0.1 * x[0] * x[0];
        let start = f(&[0.7]);
        let res = nelder_mead(f, &[0.7], &[0.5], SimplexOptions::default());
        assert!(res.f <= start);
    }
}
