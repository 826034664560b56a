//! Bounds on `psi_c(n)`.
//!
//! Analytic pieces:
//! * `f_n(x) = n(n-1) / (2x)`: at most this many classes when the smallest
//!   has `x` edges;
//! * `g_n(x) = (n(x^2+2x+1) - x^3 - 2x^2 - 2x - 1) / (2x)`: average-degree
//!   estimate of classes meeting a class of size `x`;
//! * the two cross at `x_0 = (sqrt(4n-3) - 1) / 2`, giving the approximate
//!   upper bound `n(n-1) / (sqrt(4n-3) - 1)` for `n >= 8`;
//! * the classical `(n-1)^{3/2} / 2` lower and
//!   `(n-1)(sqrt(n/2 + 1/16) + 1/4)` upper bounds;
//! * `ceil(q/2) n <= psi_c(n)` for `n = q^2 + q + 1`, `q` an odd prime power.
//!
//! Plus the published reference values for `2 <= n <= 31`.

use std::fmt::Write;

use serde::Serialize;

use crate::error::{domain, Error, Result};

pub fn f_n(x: f64, n: usize) -> Result<f64> {
    check_x(x)?;
    check_n(n)?;
    let n = n as f64;
    Ok(n * (n - 1.0) / (2.0 * x))
}

pub fn g_n(x: f64, n: usize) -> Result<f64> {
    check_x(x)?;
    check_n(n)?;
    let n = n as f64;
    Ok((n * (x * x + 2.0 * x + 1.0) - x * x * x - 2.0 * x * x - 2.0 * x - 1.0) / (2.0 * x))
}

fn check_x(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        domain(format!("x must be positive, got {x}"))
    }
}

fn check_n(n: usize) -> Result<()> {
    if n >= 2 {
        Ok(())
    } else {
        domain(format!("n must be >= 2, got {n}"))
    }
}

/// Positive root of `n = x^2 + x + 1`, where `f_n` and `g_n` first meet.
pub fn crossing_x0(n: usize) -> Result<f64> {
    check_n(n)?;
    Ok((((4 * n - 3) as f64).sqrt() - 1.0) / 2.0)
}

/// `floor(n(n-1) / (sqrt(4n-3) - 1))`, defined for `n >= 8`.
pub fn approx_upper(n: usize) -> Result<u64> {
    if n < 8 {
        return domain(format!("approximate upper bound needs n >= 8, got {n}"));
    }
    let num = (n * (n - 1)) as u64;
    let disc = (4 * n - 3) as u64;
    let root = disc.isqrt();
    if root * root == disc {
        // Exact when 4n-3 is a perfect square.
        return Ok(num / (root - 1));
    }
    Ok((num as f64 / ((disc as f64).sqrt() - 1.0)).floor() as u64)
}

pub fn classic_lower(n: usize) -> Result<f64> {
    check_n(n)?;
    Ok(((n - 1) as f64).powf(1.5) / 2.0)
}

pub fn classic_upper(n: usize) -> Result<f64> {
    check_n(n)?;
    let nf = n as f64;
    Ok((nf - 1.0) * ((nf / 2.0 + 1.0 / 16.0).sqrt() + 0.25))
}

/// `(n, ceil(q/2) n)` with `n = q^2 + q + 1`, for an odd prime power `q >= 3`.
pub fn projective_lower(q: u64) -> Result<(u64, u64)> {
    if q < 3 || q.is_multiple_of(2) || !is_prime_power(q) {
        return domain(format!("q must be an odd prime power >= 3, got {q}"));
    }
    let n = q * q + q + 1;
    Ok((n, q.div_ceil(2) * n))
}

/// Trial factorization; `q` is a prime power iff it has exactly one prime factor.
pub fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut m = q;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            while m.is_multiple_of(d) {
                m /= d;
            }
            return m == 1;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsRecord {
    pub n: usize,
    pub exact: Option<u64>,
    pub known_lower: Option<u64>,
    pub improved_lower: Option<u64>,
    /// Only defined for `n >= 8`.
    pub approx_upper: Option<u64>,
    pub known_upper: Option<u64>,
    pub classic_lower: f64,
    pub classic_upper: f64,
}

pub const TABLE_MIN: usize = 2;
pub const TABLE_MAX: usize = 31;

// Indexed by n - 2.
const KNOWN_UPPER: [u64; 30] = [
    1, 3, 4, 6, 7, 10, 14, 18, 22, 25, 28, 31, 34, 37, 40, 45, 51, 57, 63, 70, 74, 78, 82, 86, 90, 94, 98, 102, 106,
    116,
];
const KNOWN_LOWER: [u64; 30] =
    [1, 3, 4, 6, 7, 10, 11, 12, 13, 14, 19, 26, 27, 28, 29, 30, 31, 32, 33, 42, 43, 44, 45, 46, 47, 48, 49, 50, 51, 93];
const EXACT_UP_TO: usize = 7;
const IMPROVED_LOWER: [(usize, u64); 18] = [
    (9, 13),
    (10, 16),
    (11, 18),
    (12, 21),
    (17, 32),
    (18, 35),
    (19, 37),
    (20, 39),
    (21, 43),
    (22, 46),
    (23, 50),
    (24, 52),
    (25, 54),
    (26, 55),
    (27, 59),
    (28, 62),
    (29, 64),
    (30, 66),
];

/// Reference values for `2 <= n <= 31`.
pub fn table_lookup(n: usize) -> Result<BoundsRecord> {
    if !(TABLE_MIN..=TABLE_MAX).contains(&n) {
        return Err(Error::LookupMiss(n));
    }
    Ok(bounds_record(n))
}

/// Analytic bounds for any `n >= 2`, with table values where available.
pub fn bounds_record(n: usize) -> BoundsRecord {
    let n = n.max(2);
    let in_table = (TABLE_MIN..=TABLE_MAX).contains(&n);
    let at = |t: &[u64; 30]| in_table.then(|| t[n - 2]);
    BoundsRecord {
        n,
        exact: (n <= EXACT_UP_TO).then(|| KNOWN_UPPER[n - 2]),
        known_lower: at(&KNOWN_LOWER),
        improved_lower: IMPROVED_LOWER.iter().find(|(m, _)| *m == n).map(|&(_, v)| v),
        approx_upper: approx_upper(n).ok(),
        known_upper: at(&KNOWN_UPPER),
        classic_lower: classic_lower(n).expect("n >= 2"),
        classic_upper: classic_upper(n).expect("n >= 2"),
    }
}

pub const CSV_HEADER: &str = "n,exact,known_lower,improved_lower,approx_upper,known_upper,classic_lower,classic_upper";

/// One CSV row per `n` in `n_min..=n_max`; absent values are empty fields,
/// the classical bounds carry four decimals.
pub fn bounds_csv(n_min: usize, n_max: usize) -> Result<String> {
    if n_min < 2 || n_min > n_max {
        return domain(format!("need 2 <= n_min <= n_max, got {n_min}..{n_max}"));
    }
    let opt = |v: Option<u64>| v.map(|v| v.to_string()).unwrap_or_default();
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for n in n_min..=n_max {
        let r = bounds_record(n);
        writeln!(
            out,
            "{},{},{},{},{},{},{:.4},{:.4}",
            r.n,
            opt(r.exact),
            opt(r.known_lower),
            opt(r.improved_lower),
            opt(r.approx_upper),
            opt(r.known_upper),
            r.classic_lower,
            r.classic_upper
        )
        .expect("writing to a String");
    }
    Ok(out)
}
