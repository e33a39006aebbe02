//! Exact integer kernels: arbitrary-precision binomials, factorials, and
//! checked exact division. Everything downstream counts with these.

use std::sync::{LazyLock, RwLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// The universal scalar. All public counts and series coefficients are exact.
pub type Integer = num_bigint::BigInt;

/// Binomial coefficient `C(n, k)` by the multiplicative formula with running
/// exact division, which keeps intermediates no larger than the result.
///
/// Out-of-range lower indices follow the summation convention `C(n, k) = 0`
/// for `k < 0` or `k > n`, so unrestricted sums over binomials are correct.
/// A negative upper index is a hard error: no formula in this crate evaluates
/// one, so hitting it means an index bug.
pub fn binom(n: i64, k: i64) -> Integer {
    assert!(n >= 0, "binom: negative upper index n = {n}");
    if k < 0 || k > n {
        return Integer::zero();
    }
    let k = k.min(n - k);
    let mut acc = Integer::one();
    for i in 0..k {
        // C(n, i+1) = C(n, i) * (n - i) / (i + 1), exact at every step.
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `n!` for `n >= 0`.
pub fn factorial(n: i64) -> Integer {
    assert!(n >= 0, "factorial: negative argument n = {n}");
    let mut acc = Integer::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// Exact quotient `a / b`; `b` must divide `a`.
///
/// A remainder is reported as [`Error::DivisibilityViolation`] rather than
/// rounded away: callers clear rational prefactors with this and rely on the
/// error to surface transcription bugs.
pub fn exact_div(a: &Integer, b: &Integer) -> Result<Integer> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let q = a / b;
    if &q * b == *a {
        Ok(q)
    } else {
        Err(Error::DivisibilityViolation {
            numerator: a.clone(),
            divisor: b.clone(),
        })
    }
}

static PASCAL: LazyLock<RwLock<Vec<Vec<Integer>>>> =
    LazyLock::new(|| RwLock::new(vec![vec![Integer::one()]]));

/// Memoized `C(n, k)` backed by a Pascal-triangle table grown on demand.
///
/// Same contract as [`binom`]. Safe for concurrent callers; the sweep code
/// prefers this when the same coefficients recur millions of times.
pub fn binom_memo(n: i64, k: i64) -> Integer {
    assert!(n >= 0, "binom_memo: negative upper index n = {n}");
    if k < 0 || k > n {
        return Integer::zero();
    }
    let (n, k) = (n as usize, k as usize);
    {
        let table = PASCAL.read().unwrap();
        if n < table.len() {
            return table[n][k].clone();
        }
    }
    let mut table = PASCAL.write().unwrap();
    while table.len() <= n {
        let prev = table.last().unwrap();
        let mut row = Vec::with_capacity(prev.len() + 1);
        row.push(Integer::one());
        for i in 1..prev.len() {
            row.push(&prev[i - 1] + &prev[i]);
        }
        row.push(Integer::one());
        table.push(row);
    }
    table[n][k].clone()
}
