//! Small least-squares helpers used by the reports.

/// Ordinary least-squares slope of `ys` against `xs`; `None` with fewer than
/// two points or when every `x` coincides.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    if n < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(sxy / sxx)
}

/// Slope of `log y` against `log x` over the points with `x, y > 0`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .unzip();
    least_squares_slope(&xs, &ys)
}

/// Least-squares coefficient `b` of the model `y = b x` (no intercept).
pub fn slope_through_origin(xs: &[f64], ys: &[f64]) -> Option<f64> {
    assert_eq!(xs.len(), ys.len());
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(xs.iter().zip(ys).map(|(x, y)| x * y).sum::<f64>() / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_lines() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x - 1.0).collect();
        assert!((least_squares_slope(&xs, &ys).unwrap() - 3.0).abs() < 1e-12);
        let pts: Vec<(f64, f64)> = xs.iter().map(|&x| (x, 5.0 * x * x)).collect();
        assert!((loglog_slope(&pts).unwrap() - 2.0).abs() < 1e-12);
        let ys: Vec<f64> = xs.iter().map(|x| 0.25 * x).collect();
        assert!((slope_through_origin(&xs, &ys).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn degenerate_fits() {
        assert_eq!(least_squares_slope(&[1.0], &[2.0]), None);
        assert_eq!(least_squares_slope(&[1.0, 1.0], &[2.0, 3.0]), None);
        assert_eq!(loglog_slope(&[(10.0, 0.0), (20.0, 4.0)]), None);
    }
}
