//! Finite-difference derivatives with Richardson extrapolation.

/// Central first difference `(f(h) − f(−h))/(2h)`.
pub fn central_first(f: &impl Fn(f64) -> f64, h: f64) -> f64 {
    (f(h) - f(-h)) / (2.0 * h)
}

/// Central second difference `(f(h) − 2f(0) + f(−h))/h²`.
pub fn central_second(f: &impl Fn(f64) -> f64, h: f64) -> f64 {
    (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h)
}

/// Eliminates the `h²` error term of two central differences at steps `h1`, `h2`.
pub fn richardson(d1: f64, h1: f64, d2: f64, h2: f64) -> f64 {
    (d2 * h1 * h1 - d1 * h2 * h2) / (h1 * h1 - h2 * h2)
}

/// `f′(0)` by two central differences and one Richardson step.
pub fn first_derivative(f: impl Fn(f64) -> f64, h1: f64, h2: f64) -> f64 {
    richardson(central_first(&f, h1), h1, central_first(&f, h2), h2)
}

/// `f″(0)` by two central differences and one Richardson step.
pub fn second_derivative(f: impl Fn(f64) -> f64, h1: f64, h2: f64) -> f64 {
    richardson(central_second(&f, h1), h1, central_second(&f, h2), h2)
}

/// Observed convergence order between residuals at grid sizes `n1 < n2`.
pub fn observed_order(r1: f64, n1: usize, r2: f64, n2: usize) -> f64 {
    (r1 / r2).ln() / (n2 as f64 / n1 as f64).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_of_exp() {
        let d1 = first_derivative(|t| (2.0 * t).exp(), 1e-2, 1e-3);
        assert!((d1 - 2.0).abs() < 1e-9);
        let d2 = second_derivative(|t| (2.0 * t).exp(), 1e-2, 1e-3);
        assert!((d2 - 4.0).abs() < 1e-6);
    }

    #[test]
    fn order_of_power_law() {
        let o = observed_order(1.0 / 16f64.powi(4), 16, 1.0 / 32f64.powi(4), 32);
        assert!((o - 4.0).abs() < 1e-12);
    }
}
