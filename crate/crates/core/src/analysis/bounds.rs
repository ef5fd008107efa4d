/// Upper bound on the probability that a maximal run of full servers has
/// length at least `l`: `exp(-alpha^2 (l+1)^2 / (2m))`.
pub fn mscfs_tail_bound(alpha: usize, m: usize, l: usize) -> f64 {
    let (a, l) = (alpha as f64, l as f64 + 1.0);
    (-(a * a) * l * l / (2.0 * m as f64)).exp()
}

/// Variant with a linear `(l+1)` in the exponent.
pub fn mscfs_tail_bound_linear(alpha: usize, m: usize, l: usize) -> f64 {
    let a = alpha as f64;
    (-(a * a) * (l as f64 + 1.0) / (2.0 * m as f64)).exp()
}

/// Bound on the expected longest run of full servers:
/// `sum_{i=1}^{n-1} exp(-alpha^2 (i+1)^2 / (2m))`.
pub fn lmax_expectation_bound(alpha: usize, m: usize, n: usize) -> f64 {
    (1..n).map(|i| mscfs_tail_bound(alpha, m, i)).sum()
}

/// Variant of [`lmax_expectation_bound`] with a linear exponent.
pub fn lmax_expectation_bound_linear(alpha: usize, m: usize, n: usize) -> f64 {
    (1..n).map(|i| mscfs_tail_bound_linear(alpha, m, i)).sum()
}
