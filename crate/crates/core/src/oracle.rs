//! Independent reference formulas, used by the identity checks and the tests.
//! Nothing here shares code with the fast paths it is compared against.

use std::f64::consts::PI;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Euler's totient by direct counting.
pub fn totient(n: u64) -> u64 {
    (1..=n).filter(|&a| gcd(a, n) == 1).count() as u64
}

fn mobius_by_counting(n: u64) -> i64 {
    let mut rest = n;
    let mut mu = 1;
    let mut p = 2;
    while rest > 1 {
        if rest % p == 0 {
            rest /= p;
            if rest % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    mu
}

/// `c_q(n) = mu(q/g) phi(q) / phi(q/g)` with `g = gcd(n, q)`.
pub fn ramanujan_closed_form(q: u64, n: u64) -> i64 {
    let g = gcd(n, q);
    mobius_by_counting(q / g) * totient(q) as i64 / totient(q / g) as i64
}

/// `c_q(n) = sum_{1 <= a <= q, (a, q) = 1} cos(2 pi a n / q)`.
pub fn ramanujan_cosine_sum(q: u64, n: u64) -> f64 {
    (1..=q)
        .filter(|&a| gcd(a, q) == 1)
        .map(|a| (2.0 * PI * ((a * n) % q) as f64 / q as f64).cos())
        .sum()
}

/// `|sum_{n <= N} e(nθ)| = |sin(pi N θ) / sin(pi θ)|`, `N` at integers.
pub fn s1_closed_form(theta: f64, n: usize) -> f64 {
    let s = (PI * theta).sin();
    if s.abs() < 1e-300 {
        return n as f64;
    }
    ((PI * n as f64 * theta).sin() / s).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_values() {
        assert_eq!(ramanujan_closed_form(4, 2), -2);
        assert_eq!(ramanujan_closed_form(6, 6), 2);
        assert_eq!(ramanujan_closed_form(7, 3), -1);
        assert!((ramanujan_cosine_sum(6, 6) - 2.0).abs() < 1e-12);
        assert_eq!(totient(12), 4);
        assert!((s1_closed_form(0.5, 10)).abs() < 1e-12);
    }
}
