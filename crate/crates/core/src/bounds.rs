//! Avoidance bounds: the analytic rate c_q, exact big-integer monomial
//! counts, and the combined report, including the r ≥ 4 obstruction where the
//! per-coordinate rate degenerates to q.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

const GRID_POINTS: usize = 10_000;
const GOLDEN_TOL: f64 = 1e-10;
/// switch to the explicit geometric series this close to x = 1
const SERIES_GUARD: f64 = 1e-6;

/// Minimization outcome for (1 - x^q) / (x^{(q-1)/m} (1 - x)) over (0, 1).
#[derive(Clone, Copy, Debug)]
pub struct Minimum {
    /// interior minimizer; None when the infimum sits on the x -> 1 boundary
    pub x_star: Option<f64>,
    pub c_value: f64,
    pub boundary: bool,
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub q: u64,
    pub k: usize,
    pub n: usize,
    pub r: usize,
    /// m = r / (r - 2)
    pub m: f64,
    pub x_star: Option<f64>,
    pub c_value: f64,
    pub boundary: bool,
    /// 3 c_q^{kn}; None when it overflows f64 (log form still carried)
    pub analytic_bound: Option<f64>,
    /// ln(r) + kn ln(c)
    pub log_analytic_bound: f64,
    pub exact_count: BigUint,
    /// r * exact_count
    pub exact_bound: BigUint,
    /// c_value < q (strictly), i.e. the bound is exponentially small in kn
    pub exponential_saving: bool,
}

fn validate_q(q: u64) -> Result<()> {
    if q < 3 || q.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "q must be an odd prime power >= 3, got {q}"
        )));
    }
    Ok(())
}

/// (1 - x^q) / (x^{(q-1)/m} (1 - x)) for x in the open interval (0, 1).
/// Near x = 1 the ratio (1 - x^q)/(1 - x) is computed as the geometric
/// series Σ_{i<q} x^i to dodge cancellation.
pub fn objective(q: u64, m: f64, x: f64) -> Result<f64> {
    validate_q(q)?;
    if m <= 1.0 || m.is_nan() {
        return Err(Error::InvalidParameter(format!("m must exceed 1, got {m}")));
    }
    if !(0.0 < x && x < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "x must lie strictly inside (0, 1), got {x}"
        )));
    }
    let series = if 1.0 - x < SERIES_GUARD {
        let mut acc = 0.0;
        let mut pw = 1.0;
        for _ in 0..q {
            acc += pw;
            pw *= x;
        }
        acc
    } else {
        (1.0 - x.powi(q as i32)) / (1.0 - x)
    };
    Ok(series / x.powf((q - 1) as f64 / m))
}

/// Global minimum of the objective over (0, 1): dense grid scan followed by
/// golden-section refinement. For m <= 2 the infimum is only approached at
/// the x -> 1 boundary (value q); that case is reported with the boundary
/// flag instead of a minimizer.
pub fn minimize_objective(q: u64, m: f64) -> Result<Minimum> {
    validate_q(q)?;
    if m <= 1.0 || m.is_nan() {
        return Err(Error::InvalidParameter(format!("m must exceed 1, got {m}")));
    }
    if m <= 2.0 {
        return Ok(Minimum {
            x_star: None,
            c_value: q as f64,
            boundary: true,
        });
    }
    let h = 1.0 / (GRID_POINTS as f64 + 1.0);
    let mut best_i = 1usize;
    let mut best_v = f64::INFINITY;
    for i in 1..=GRID_POINTS {
        let x = i as f64 * h;
        let v = objective(q, m, x)?;
        if v < best_v {
            best_v = v;
            best_i = i;
        }
    }
    let mut a = (best_i as f64 - 1.0) * h;
    let mut b = (best_i as f64 + 1.0) * h;
    a = a.max(h * 0.5);
    b = b.min(1.0 - h * 0.5);
    // golden section on [a, b]
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INVPHI * (b - a);
    let mut x2 = a + INVPHI * (b - a);
    let mut f1 = objective(q, m, x1)?;
    let mut f2 = objective(q, m, x2)?;
    while b - a > GOLDEN_TOL {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INVPHI * (b - a);
            f1 = objective(q, m, x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INVPHI * (b - a);
            f2 = objective(q, m, x2)?;
        }
    }
    let (x_star, c_value) = if f1 < f2 { (x1, f1) } else { (x2, f2) };
    Ok(Minimum {
        x_star: Some(x_star),
        c_value,
        boundary: false,
    })
}

/// Exact count of exponent vectors e in {0..q-1}^D with
/// Σ e ≤ floor(D (r-2) (q-1) / r), by dynamic programming on the coefficient
/// prefix of (1 + t + ... + t^{q-1})^D.
pub fn monomial_count(q: u64, d: usize, r: usize) -> Result<BigUint> {
    validate_q(q)?;
    if d == 0 {
        return Err(Error::InvalidParameter("D must be at least 1".into()));
    }
    if r < 3 {
        return Err(Error::InvalidParameter(format!("r must be at least 3, got {r}")));
    }
    let qm1 = (q - 1) as usize;
    let threshold = d * (r - 2) * qm1 / r; // integer floor
    let mut coeffs: Vec<BigUint> = vec![BigUint::one()];
    for _ in 0..d {
        let mut next = vec![BigUint::zero(); (coeffs.len() + qm1).min(threshold + 1)];
        for (s, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for e in 0..=qm1 {
                if s + e > threshold {
                    break;
                }
                next[s + e] += c;
            }
        }
        coeffs = next;
    }
    Ok(coeffs.into_iter().sum())
}

/// Full report for an r-point pattern over (F_q^n)^k. Full-rankness of the
/// generators is the caller's concern; the bound depends only on (q, k, n, r).
pub fn avoidance_bound(q: u64, k: usize, n: usize, r: usize) -> Result<BoundReport> {
    validate_q(q)?;
    if k == 0 || n == 0 {
        return Err(Error::InvalidParameter("k and n must be at least 1".into()));
    }
    if r < 3 {
        return Err(Error::InvalidParameter(format!("r must be at least 3, got {r}")));
    }
    let m = r as f64 / (r as f64 - 2.0);
    let d = k * n;
    let min = minimize_objective(q, m)?;
    let exact_count = monomial_count(q, d, r)?;
    let exact_bound = &exact_count * BigUint::from(r);
    let log_analytic = (r as f64).ln() + d as f64 * min.c_value.ln();
    let analytic = r as f64 * min.c_value.powi(d as i32);
    let analytic_bound = if analytic.is_finite() { Some(analytic) } else { None };
    // a whisker below q absorbs float roundoff in the comparison
    let exponential_saving = min.c_value < q as f64 - 1e-9;
    Ok(BoundReport {
        q,
        k,
        n,
        r,
        m,
        x_star: min.x_star,
        c_value: min.c_value,
        boundary: min.boundary,
        analytic_bound,
        log_analytic_bound: log_analytic,
        exact_count,
        exact_bound,
        exponential_saving,
    })
}

/// Odd prime powers up to `limit`, ascending. Used by the c_q interval sweep.
pub fn odd_prime_powers(limit: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for p in (3..=limit).step_by(2) {
        let mut is_p = p >= 2;
        let mut dv = 2;
        while dv * dv <= p {
            if p % dv == 0 {
                is_p = false;
                break;
            }
            dv += 1;
        }
        if !is_p {
            continue;
        }
        let mut pw = p;
        while pw <= limit {
            out.push(pw);
            match pw.checked_mul(p) {
                Some(nx) => pw = nx,
                None => break,
            }
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn brute_count(q: u64, d: usize, r: usize) -> BigUint {
        let qm1 = (q - 1) as usize;
        let threshold = d * (r - 2) * qm1 / r;
        let mut count = 0u64;
        let mut e = vec![0usize; d];
        loop {
            if e.iter().sum::<usize>() <= threshold {
                count += 1;
            }
            let mut pos = d;
            loop {
                if pos == 0 {
                    return BigUint::from(count);
                }
                pos -= 1;
                e[pos] += 1;
                if e[pos] <= qm1 {
                    break;
                }
                e[pos] = 0;
            }
        }
    }

    #[test]
    fn objective_examples() {
        let v = objective(3, 3.0, 0.5).unwrap();
        assert!((v - 2.77795).abs() < 1e-4, "got {v}");
        let xs = (-1.0 + 33f64.sqrt()) / 8.0;
        let v = objective(3, 3.0, xs).unwrap();
        assert!((v - 2.75510).abs() < 1e-4, "got {v}");
        // m = 2: objective is x^{-1} + 1 + x for q = 3
        for i in 1..100 {
            let x = i as f64 / 100.0;
            let v = objective(3, 2.0, x).unwrap();
            assert!((v - (1.0 / x + 1.0 + x)).abs() < 1e-9);
            assert!(v >= 3.0);
        }
        assert!(objective(3, 3.0, 0.0).is_err());
        assert!(objective(3, 3.0, 1.0).is_err());
        assert!(objective(4, 3.0, 0.5).is_err());
    }

    #[test]
    fn series_guard_is_continuous() {
        // the two numerator routes agree where they hand off
        for q in [3u64, 7, 13] {
            let x = 1.0 - 2.0 * SERIES_GUARD;
            let closed = objective(q, 3.0, x).unwrap();
            let x2 = 1.0 - 0.5 * SERIES_GUARD;
            let series = objective(q, 3.0, x2).unwrap();
            assert!((closed - series).abs() < 1e-2 * q as f64);
        }
    }

    #[test]
    fn minimize_q3_matches_calculus_oracle() {
        // critical point of (1 + x + x^2)/x^{2/3} solves 4x^2 + x - 2 = 0
        let xs = (-1.0 + 33f64.sqrt()) / 8.0;
        let cs = (1.0 + xs + xs * xs) / xs.powf(2.0 / 3.0);
        let min = minimize_objective(3, 3.0).unwrap();
        assert!(!min.boundary);
        assert!((min.c_value - cs).abs() < 1e-9, "c={} vs {}", min.c_value, cs);
        assert!((min.x_star.unwrap() - xs).abs() < 1e-6);
        assert!((min.c_value / 3.0 - 0.91837).abs() < 1e-4);
    }

    #[test]
    fn interval_holds_for_small_q() {
        for q in [3u64, 5, 7, 9, 11, 13] {
            let min = minimize_objective(q, 3.0).unwrap();
            let ratio = min.c_value / q as f64;
            assert!(
                (0.8414 - 1e-4..=0.9184 + 1e-4).contains(&ratio),
                "q={q}, ratio={ratio}"
            );
        }
    }

    #[test]
    fn boundary_case_m2() {
        let min = minimize_objective(3, 2.0).unwrap();
        assert!(min.boundary);
        assert!(min.x_star.is_none());
        assert!((min.c_value - 3.0).abs() < 1e-6);
    }

    #[test]
    fn monomial_count_examples() {
        assert_eq!(monomial_count(3, 2, 3).unwrap(), BigUint::from(3u32));
        assert_eq!(monomial_count(3, 4, 3).unwrap(), BigUint::from(15u32));
        assert_eq!(monomial_count(3, 1, 3).unwrap(), BigUint::from(1u32));
        assert!(monomial_count(3, 0, 3).is_err());
        assert!(monomial_count(3, 2, 2).is_err());
    }

    #[test]
    fn monomial_count_matches_brute_force() {
        for q in [3u64, 5] {
            for d in 1..=4 {
                for r in [3usize, 4, 5] {
                    assert_eq!(
                        monomial_count(q, d, r).unwrap(),
                        brute_count(q, d, r),
                        "q={q}, d={d}, r={r}"
                    );
                }
            }
        }
    }

    #[test]
    fn full_cube_threshold_counts_everything() {
        // with r chosen so the threshold reaches D(q-1), the count is q^D
        for q in [3u64, 5, 7] {
            for d in 1..=5usize {
                let qm1 = (q - 1) as usize;
                let mut coeffs: Vec<BigUint> = vec![BigUint::one()];
                for _ in 0..d {
                    let mut next = vec![BigUint::zero(); coeffs.len() + qm1];
                    for (s, c) in coeffs.iter().enumerate() {
                        for e in 0..=qm1 {
                            next[s + e] += c;
                        }
                    }
                    coeffs = next;
                }
                let total: BigUint = coeffs.into_iter().sum();
                assert_eq!(total, BigUint::from(q).pow(d as u32));
            }
        }
    }

    #[test]
    fn count_is_monotone_in_q_and_d() {
        for r in [3usize, 4] {
            for d in 1..=6usize {
                let a = monomial_count(3, d, r).unwrap();
                let b = monomial_count(5, d, r).unwrap();
                let c = monomial_count(7, d, r).unwrap();
                assert!(a <= b && b <= c, "d={d}, r={r}");
            }
            for q in [3u64, 5, 7] {
                let mut prev = BigUint::zero();
                for d in 1..=6usize {
                    let c = monomial_count(q, d, r).unwrap();
                    assert!(c >= prev);
                    prev = c;
                }
            }
        }
    }

    #[test]
    fn chernoff_domination() {
        for q in [3u64, 5, 7] {
            for d in 1..=12usize {
                let count = monomial_count(q, d, 3).unwrap().to_f64().unwrap();
                for i in 1..=100 {
                    let x = i as f64 / 101.0;
                    let bound = objective(q, 3.0, x).unwrap().powi(d as i32);
                    assert!(
                        count <= bound * (1.0 + 1e-9),
                        "q={q}, d={d}, x={x}: {count} > {bound}"
                    );
                }
            }
        }
    }

    #[test]
    fn avoidance_bound_examples() {
        let rep = avoidance_bound(3, 1, 4, 3).unwrap();
        assert_eq!(rep.exact_bound, BigUint::from(45u32));
        let analytic = rep.analytic_bound.unwrap();
        assert!((analytic - 172.9).abs() < 0.5, "got {analytic}");
        assert!(rep.exponential_saving);

        let rep = avoidance_bound(3, 1, 1, 3).unwrap();
        assert_eq!(rep.exact_bound, BigUint::from(3u32));

        let rep = avoidance_bound(3, 1, 2, 4).unwrap();
        assert!(!rep.exponential_saving);
        assert!(rep.boundary);
        assert!((rep.c_value - 3.0).abs() < 1e-6);
        assert_eq!(rep.exact_bound, &rep.exact_count * BigUint::from(4u32));
    }

    #[test]
    fn exact_bound_never_exceeds_analytic() {
        for q in [3u64, 5, 7] {
            for d in 1..=8usize {
                let rep = avoidance_bound(q, 1, d, 3).unwrap();
                let exact = rep.exact_bound.to_f64().unwrap();
                let analytic = rep.analytic_bound.unwrap();
                assert!(exact <= analytic.ceil() * (1.0 + 1e-9), "q={q}, d={d}");
            }
        }
    }

    #[test]
    fn odd_prime_powers_list() {
        let pps = odd_prime_powers(30);
        assert_eq!(pps, vec![3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29]);
    }
}
