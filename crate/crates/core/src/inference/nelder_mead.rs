//! Derivative-free minimisation in two dimensions.

const ALPHA: f64 = 1.0;
const GAMMA: f64 = 2.0;
const RHO: f64 = 0.5;
const SIGMA: f64 = 0.5;

pub(crate) struct Outcome {
    pub point: [f64; 2],
    pub value: f64,
}

/// Minimises `f` from `start` with an initial simplex of edge `step`.
/// Infinite values are allowed and act as walls.
pub(crate) fn minimize(f: impl Fn([f64; 2]) -> f64, start: [f64; 2], step: [f64; 2], max_iter: usize) -> Outcome {
    let mut simplex = [start, [start[0] + step[0], start[1]], [start[0], start[1] + step[1]]];
    let mut values = simplex.map(&f);
    for _ in 0..max_iter {
        let mut order = [0, 1, 2];
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);

        let spread = (values[2] - values[0]).abs();
        let size = (0..2)
            .map(|k| (simplex[1][k] - simplex[0][k]).abs().max((simplex[2][k] - simplex[0][k]).abs()))
            .fold(0.0, f64::max);
        if values[0].is_finite() && spread <= 1e-15 * values[0].abs().max(1e-300) && size <= 1e-12 {
            break;
        }
        if size <= 1e-15 {
            break;
        }

        let centroid = [0.5 * (simplex[0][0] + simplex[1][0]), 0.5 * (simplex[0][1] + simplex[1][1])];
        let along = |t: f64| [centroid[0] + t * (simplex[2][0] - centroid[0]), centroid[1] + t * (simplex[2][1] - centroid[1])];

        let reflected = along(-ALPHA);
        let fr = f(reflected);
        if fr < values[0] {
            let expanded = along(-GAMMA);
            let fe = f(expanded);
            if fe < fr {
                simplex[2] = expanded;
                values[2] = fe;
            } else {
                simplex[2] = reflected;
                values[2] = fr;
            }
            continue;
        }
        if fr < values[1] {
            simplex[2] = reflected;
            values[2] = fr;
            continue;
        }
        let contracted = if fr < values[2] { along(-RHO) } else { along(RHO) };
        let fc = f(contracted);
        if fc < values[2].min(fr) {
            simplex[2] = contracted;
            values[2] = fc;
            continue;
        }
        let best = simplex[0];
        for i in 1..3 {
            for (v, b) in simplex[i].iter_mut().zip(best) {
                *v = b + SIGMA * (*v - b);
            }
            values[i] = f(simplex[i]);
        }
    }
    let best = (0..3).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
    Outcome { point: simplex[best], value: values[best] }
}
