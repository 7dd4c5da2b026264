//! One-dimensional grid scan followed by golden-section refinement.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of a unimodal `f` on `[a, b]`.
/// Returns `(x, f(x))` once the bracket is narrower than `tol`.
pub fn golden_section_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Index of the smallest value, first occurrence on ties.
pub fn argmin(values: &[f64]) -> Option<usize> {
    values
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.total_cmp(b))
        .map(|(i, _)| i)
}

pub fn argmax(values: &[f64]) -> Option<usize> {
    values
        .iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.total_cmp(b).then(j.cmp(i)))
        .map(|(i, _)| i)
}

/// Scans `grid`, then refines the interior minimum between its neighbours.
/// Returns `None` when the smallest grid value sits on either end.
pub fn scan_and_refine_min(f: impl Fn(f64) -> f64, grid: &[f64], tol: f64) -> Option<(f64, f64)> {
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let i = argmin(&values)?;
    if i == 0 || i + 1 == grid.len() {
        return None;
    }
    let (x, fx) = golden_section_min(&f, grid[i - 1], grid[i + 1], tol);
    // a kink (e.g. |gap| hitting zero) can leave the bracket midpoint slightly worse
    if fx <= values[i] {
        Some((x, fx))
    } else {
        Some((grid[i], values[i]))
    }
}
