use alloc::vec::Vec;

/// Thomas algorithm for `lower[j]·x[j-1] + diag[j]·x[j] + upper[j]·x[j+1] = rhs[j]`.
///
/// `lower[0]` and `upper[n-1]` are ignored. Returns `None` when a pivot
/// vanishes or the result is not finite.
pub(crate) fn solve(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = diag.len();
    debug_assert!(lower.len() == n && upper.len() == n && rhs.len() == n);
    if n == 0 {
        return Some(Vec::new());
    }
    let mut c = Vec::with_capacity(n);
    let mut d = Vec::with_capacity(n);
    let mut pivot = diag[0];
    if !(pivot.abs() > f64::MIN_POSITIVE) {
        return None;
    }
    c.push(upper[0] / pivot);
    d.push(rhs[0] / pivot);
    for j in 1..n {
        pivot = diag[j] - lower[j] * c[j - 1];
        if !(pivot.abs() > f64::MIN_POSITIVE) {
            return None;
        }
        c.push(upper[j] / pivot);
        d.push((rhs[j] - lower[j] * d[j - 1]) / pivot);
    }
    let mut x = d;
    for j in (0..n - 1).rev() {
        x[j] -= c[j] * x[j + 1];
    }
    if x.iter().all(|v| v.is_finite()) {
        Some(x)
    } else {
        None
    }
}
