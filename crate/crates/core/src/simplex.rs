//! Minimal Nelder–Mead simplex minimizer for the derivative-free searches.

/// Minimizes `f` over R², starting from `x0` with initial simplex edge
/// `scale`. Returns the best point and its value.
pub(crate) fn nelder_mead_2d<F>(
    mut f: F,
    x0: [f64; 2],
    scale: f64,
    max_iter: usize,
    f_tol: f64,
) -> ([f64; 2], f64)
where
    F: FnMut([f64; 2]) -> f64,
{
    const ALPHA: f64 = 1.0; // reflection
    const GAMMA: f64 = 2.0; // expansion
    const RHO: f64 = 0.5; // contraction
    const SIGMA: f64 = 0.5; // shrink

    let mut simplex = vec![x0, [x0[0] + scale, x0[1]], [x0[0], x0[1] + scale]];
    let mut values: Vec<f64> = simplex.iter().map(|&x| f(x)).collect();

    for _ in 0..max_iter {
        let mut order: Vec<usize> = (0..3).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i]).collect();
        values = order.iter().map(|&i| values[i]).collect();

        if (values[2] - values[0]).abs() < f_tol {
            break;
        }

        let centroid = [
            0.5 * (simplex[0][0] + simplex[1][0]),
            0.5 * (simplex[0][1] + simplex[1][1]),
        ];
        let worst = simplex[2];
        let reflect = [
            centroid[0] + ALPHA * (centroid[0] - worst[0]),
            centroid[1] + ALPHA * (centroid[1] - worst[1]),
        ];
        let f_reflect = f(reflect);

        if f_reflect < values[0] {
            let expand = [
                centroid[0] + GAMMA * (reflect[0] - centroid[0]),
                centroid[1] + GAMMA * (reflect[1] - centroid[1]),
            ];
            let f_expand = f(expand);
            if f_expand < f_reflect {
                simplex[2] = expand;
                values[2] = f_expand;
            } else {
                simplex[2] = reflect;
                values[2] = f_reflect;
            }
        } else if f_reflect < values[1] {
            simplex[2] = reflect;
            values[2] = f_reflect;
        } else {
            let contract = [
                centroid[0] + RHO * (worst[0] - centroid[0]),
                centroid[1] + RHO * (worst[1] - centroid[1]),
            ];
            let f_contract = f(contract);
            if f_contract < values[2] {
                simplex[2] = contract;
                values[2] = f_contract;
            } else {
                for i in 1..3 {
                    simplex[i] = [
                        simplex[0][0] + SIGMA * (simplex[i][0] - simplex[0][0]),
                        simplex[0][1] + SIGMA * (simplex[i][1] - simplex[0][1]),
                    ];
                    values[i] = f(simplex[i]);
                }
            }
        }
    }

    let mut best = 0;
    for i in 1..3 {
        if values[i] < values[best] {
            best = i;
        }
    }
    (simplex[best], values[best])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_minimum() {
        let f = |x: [f64; 2]| (x[0] - 2.0).powi(2) + 3.0 * (x[1] + 1.0).powi(2);
        let (x, v) = nelder_mead_2d(f, [0.0, 0.0], 0.5, 300, 1e-16);
        assert!(v < 1e-12);
        assert!((x[0] - 2.0).abs() < 1e-6 && (x[1] + 1.0).abs() < 1e-6);
    }
}
