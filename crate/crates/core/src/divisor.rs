//! `Z(n, d)`: lattice points under the hyperbolic surface `prod (a_i + 1) = d`.
//!
//! Equivalently the summatory `n`-fold divisor function
//! `#{a in Z_{>0}^n : prod a_i <= d}`.

use std::collections::HashMap;

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Default guard for [`z_count_bruteforce`], in visited lattice points.
pub const BRUTE_FORCE_GUARD: u64 = 100_000_000;

/// Integer part of a real threshold. `Z` depends on `d` only through
/// `floor(d)`; negative and NaN inputs floor to 0.
pub fn threshold_floor(d: f64) -> u64 {
    if d.is_nan() || d < 1.0 {
        0
    } else if d >= u64::MAX as f64 {
        u64::MAX
    } else {
        d.floor() as u64
    }
}

/// Exact `Z(n, d)` for a real threshold.
pub fn z_count(n: usize, d: f64) -> Result<BigUint> {
    z_count_int(n, threshold_floor(d))
}

/// Exact `Z(n, m)` for an integer threshold, via
/// `Z(1, m) = m` and `Z(n, m) = sum_{a=1}^{m} Z(n-1, floor(m/a))`,
/// with the sum grouped over runs of equal quotient.
pub fn z_count_int(n: usize, m: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Precondition("Z(n, d) needs n >= 1".into()));
    }
    let mut memo = HashMap::new();
    z_rec(n, m, &mut memo).map(BigUint::from)
}

fn z_rec(n: usize, m: u64, memo: &mut HashMap<(usize, u64), u128>) -> Result<u128> {
    if m == 0 {
        return Ok(0);
    }
    match n {
        1 => return Ok(m as u128),
        2 => return Ok(divisor_summatory(m)),
        _ => {}
    }
    if let Some(&v) = memo.get(&(n, m)) {
        return Ok(v);
    }
    let mut total: u128 = 0;
    let mut a = 1u64;
    while a <= m {
        let q = m / a;
        let last = m / q;
        let inner = z_rec(n - 1, q, memo)?;
        total = ((last - a + 1) as u128)
            .checked_mul(inner)
            .and_then(|block| block.checked_add(total))
            .ok_or(Error::Overflow("Z(n, d)"))?;
        a = last + 1;
    }
    memo.insert((n, m), total);
    Ok(total)
}

/// `sum_{a=1}^{m} floor(m / a)` by the hyperbola method.
fn divisor_summatory(m: u64) -> u128 {
    let r = m.isqrt();
    let mut s: u128 = 0;
    for a in 1..=r {
        s += (m / a) as u128;
    }
    2 * s - (r as u128) * (r as u128)
}

/// Ungrouped recursion `sum_{a=1}^{m} Z(n-1, floor(m/a))`, one term per `a`.
pub fn z_count_naive_sum(n: usize, m: u64) -> Result<BigUint> {
    fn rec(n: usize, m: u64) -> u128 {
        if m == 0 {
            return 0;
        }
        if n == 1 {
            return m as u128;
        }
        (1..=m).map(|a| rec(n - 1, m / a)).sum()
    }
    if n == 0 {
        return Err(Error::Precondition("Z(n, d) needs n >= 1".into()));
    }
    Ok(BigUint::from(rec(n, m)))
}

/// Direct lattice enumeration of `{a : prod (a_i + 1) <= d}`.
pub fn z_count_bruteforce(n: usize, d: f64, guard: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Precondition("Z(n, d) needs n >= 1".into()));
    }
    let m = threshold_floor(d);
    if m == 0 {
        return Ok(BigUint::from(0u32));
    }
    let product = |p: &[u64]| {
        p.iter()
            .try_fold(1u64, |acc, &a| acc.checked_mul(a + 1))
            .unwrap_or(u64::MAX)
    };
    let mut visited: u64 = 0;
    let mut count: u64 = 0;
    let mut point = vec![0u64; n];
    // Odometer over [0, m-1]^n; once coordinate 0 leaves the region, carry
    // into the next coordinate that can still be advanced.
    'walk: loop {
        visited += 1;
        if visited > guard {
            return Err(Error::GuardExceeded {
                needed: visited as u128,
                guard,
            });
        }
        if product(&point) <= m {
            count += 1;
            point[0] += 1;
            continue;
        }
        let mut pos = 0;
        loop {
            point[pos] = 0;
            pos += 1;
            if pos == n {
                break 'walk;
            }
            point[pos] += 1;
            if product(&point) <= m {
                continue 'walk;
            }
        }
    }
    Ok(BigUint::from(count))
}

/// Main term `d (ln d)^{n-1} / (n-1)!` of the asymptotic expansion.
pub fn z_asymptotic(n: usize, d: f64) -> Result<f64> {
    if n == 0 || d <= 1.0 {
        return Err(Error::Precondition("z_asymptotic needs n >= 1 and d > 1".into()));
    }
    let factorial: f64 = (1..n).map(|i| i as f64).product();
    Ok(d * d.ln().powi(n as i32 - 1) / factorial)
}
