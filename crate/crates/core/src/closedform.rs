//! Closed-form big-integer evaluation of the pair counts and every relation
//! among them.
//!
//! All evaluators are total: queries outside the support
//! `n >= 1, 0 <= r,s <= n, 0 <= k <= n-1` answer zero, matching the
//! combinatorial meaning (no such pairs exist). Rational prefactors are
//! cleared and checked by exact division, never evaluated as rationals, so a
//! non-integral intermediate surfaces as [`Error::DivisibilityViolation`]
//! instead of being rounded away.
//!
//! [`Error::DivisibilityViolation`]: crate::error::Error::DivisibilityViolation

use num_traits::{One, Zero};

use crate::error::Result;
use crate::exactmath::{binom_memo, exact_div, factorial, Integer};

/// Addresses one pair count: n-step paths ending at `(r, n-r)` and
/// `(s, n-s)` meeting exactly `k` times in the interior.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairQuery {
    pub n: i64,
    pub k: i64,
    pub r: i64,
    pub s: i64,
}

impl PairQuery {
    pub fn new(n: i64, k: i64, r: i64, s: i64) -> Self {
        PairQuery { n, k, r, s }
    }

    /// The region where the count can be nonzero.
    pub fn in_support(&self) -> bool {
        self.n >= 1
            && (0..=self.n).contains(&self.r)
            && (0..=self.n).contains(&self.s)
            && (0..self.n).contains(&self.k)
    }
}

/// Addresses one even/odd endpoint-sum count via the half-sum index `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiagQuery {
    pub n: i64,
    pub k: i64,
    pub p: i64,
}

impl DiagQuery {
    pub fn new(n: i64, k: i64, p: i64) -> Self {
        DiagQuery { n, k, p }
    }
}

/// The pair count for an arbitrary query.
///
/// Dispatch: zero out of support; the diagonal `r = s` delegates to
/// [`nk_value`]; `r > s` uses the swap symmetry; `r < s` evaluates
///
/// ```text
/// sum_{i=0}^{k} C(k,i) [ C(n-k+i-1, s-1) C(n-i-1, n-r-1)
///                      - C(n-k+i-1, s)   C(n-i-1, n-r) ]
/// ```
///
/// with out-of-range binomials equal to zero.
pub fn m_value(q: PairQuery) -> Result<Integer> {
    if !q.in_support() {
        return Ok(Integer::zero());
    }
    let PairQuery { n, k, r, s } = q;
    if r == s {
        return nk_value(n, k, r);
    }
    let (r, s) = if r < s { (r, s) } else { (s, r) };
    let mut acc = Integer::zero();
    for i in 0..=k {
        let pos = binom_memo(n - k + i - 1, s - 1) * binom_memo(n - i - 1, n - r - 1);
        let neg = binom_memo(n - k + i - 1, s) * binom_memo(n - i - 1, n - r);
        acc += binom_memo(k, i) * (pos - neg);
    }
    Ok(acc)
}

/// The diagonal count: pairs ending at the same point `(r, n-r)` with `k`
/// intersections.
///
/// For `k = n-1` the only contributing pairs are `(p, p)`, so the value is
/// `C(n, r)`. For `0 <= k <= n-2`:
///
/// ```text
/// 2(k+1) / (n-k-1) * sum_i C(k,i) C(n-k+i-1, r) C(n-i-1, n-r)
/// ```
///
/// cleared of its divisor by exact division.
pub fn nk_value(n: i64, k: i64, r: i64) -> Result<Integer> {
    if n < 1 || k < 0 || k > n - 1 || r < 0 || r > n {
        return Ok(Integer::zero());
    }
    if k == n - 1 {
        return Ok(binom_memo(n, r));
    }
    let mut sum = Integer::zero();
    for i in 0..=k {
        sum += binom_memo(k, i) * binom_memo(n - k + i - 1, r) * binom_memo(n - i - 1, n - r);
    }
    exact_div(&(sum * (2 * (k + 1))), &Integer::from(n - k - 1))
}

/// The zero-intersection diagonal through the one-apart pair count:
/// `2 * m(n-1, 0, r-1, r)`. Agrees with `nk_value(n, 0, r)` for `n >= 2`.
pub fn n0_via_m(n: i64, r: i64) -> Result<Integer> {
    Ok(m_value(PairQuery::new(n - 1, 0, r - 1, r))? * 2)
}

/// Even endpoint-sum count: `n/(k+1) * nk_value(n, k, p)`, exact.
pub fn ne_value(q: DiagQuery) -> Result<Integer> {
    let DiagQuery { n, k, p } = q;
    if n < 1 || k < 0 || k > n - 1 || p < 0 || p > n {
        return Ok(Integer::zero());
    }
    exact_div(&(nk_value(n, k, p)? * n), &Integer::from(k + 1))
}

/// Odd endpoint-sum count:
/// `2 [ C(n-1,p)^2 - sum_{i=0}^{k-2} nk_value(n-1, i, p) ]`,
/// the sum empty for `k < 2`.
pub fn no_value(q: DiagQuery) -> Result<Integer> {
    let DiagQuery { n, k, p } = q;
    if n < 1 || k < 0 || k > n - 1 || p < 0 || p > n - 1 {
        return Ok(Integer::zero());
    }
    let b = binom_memo(n - 1, p);
    let mut acc = &b * &b;
    for i in 0..=k - 2 {
        acc -= nk_value(n - 1, i, p)?;
    }
    Ok(acc * 2)
}

/// Definitional even sum: `sum over r+s = 2p` of the pair counts. The
/// independent route the closed form is tested against.
pub fn ne_def(q: DiagQuery) -> Result<Integer> {
    let mut acc = Integer::zero();
    for r in 0..=q.n {
        acc += m_value(PairQuery::new(q.n, q.k, r, 2 * q.p - r))?;
    }
    Ok(acc)
}

/// Definitional odd sum: `sum over r+s = 2p+1` of the pair counts.
pub fn no_def(q: DiagQuery) -> Result<Integer> {
    let mut acc = Integer::zero();
    for r in 0..=q.n {
        acc += m_value(PairQuery::new(q.n, q.k, r, 2 * q.p + 1 - r))?;
    }
    Ok(acc)
}

/// Common value of the even and odd row sums: `2^{k+1} C(2n-k-2, n-1)`.
pub fn row_sum(n: i64, k: i64) -> Integer {
    if n < 1 || k < 0 || k > n - 1 {
        return Integer::zero();
    }
    (Integer::one() << (k + 1) as usize) * binom_memo(2 * n - k - 2, n - 1)
}

/// Row sum of the diagonal counts over r:
/// `2^{k+1} (k+1) (2n-k-2)! / (n! (n-k-1)!)`.
pub fn nk_row_sum(n: i64, k: i64) -> Result<Integer> {
    if n < 1 || k < 0 || k > n - 1 {
        return Ok(Integer::zero());
    }
    let numerator = (Integer::one() << (k + 1) as usize) * (k + 1) * factorial(2 * n - k - 2);
    exact_div(&numerator, &(factorial(n) * factorial(n - k - 1)))
}

/// Check the diagonal-count recurrence in denominator-cleared form:
///
/// ```text
/// (n-k-1) k N(n,k,r) = (n-2k)(k+1) N(n,k-1,r)
///                    + k(k+1) [ N(n-1,k-2,r) + N(n-1,k-2,r-1) ]
/// ```
///
/// with `N(_, j, _) = 0` for `j < 0`. Requires `k >= 1`, `n >= 1`.
pub fn nk_recurrence_holds(n: i64, k: i64, r: i64) -> Result<bool> {
    assert!(k >= 1 && n >= 1, "recurrence needs k >= 1 and n >= 1");
    let lhs = nk_value(n, k, r)? * ((n - k - 1) * k);
    let rhs = nk_value(n, k - 1, r)? * ((n - 2 * k) * (k + 1))
        + (nk_value(n - 1, k - 2, r)? + nk_value(n - 1, k - 2, r - 1)?) * (k * (k + 1));
    Ok(lhs == rhs)
}

/// Coefficient of `x^{l-c} y^m` in `(x+f)^a (y+f)^b (f/x)^c`, extracted in
/// closed form:
///
/// ```text
/// C(l+m-b-c-1, l-1) C(l+m-a-c-1, m-1) - C(l+m-b-c-1, l) C(l+m-a-c-1, m)
/// ```
///
/// Out-of-range binomials vanish, which makes the support
/// `l >= a+c, m >= b+c` emergent. Three degenerate corners where an upper
/// index would go negative are handled directly: the empty product
/// (`a = b = c = 0`) is the constant series 1, and the pure powers
/// `(y+f)^b` at `x^0` and `(x+f)^a` at `y^0` reduce to plain monomials
/// because every term of `f` is divisible by `xy`.
pub fn lagrange_coeff(a: i64, b: i64, c: i64, l: i64, m: i64) -> Integer {
    assert!(a >= 0 && b >= 0 && c >= 0, "exponents must be nonnegative");
    if l < 0 || m < 0 || l + m - a - b - c < 0 {
        return Integer::zero();
    }
    if a == 0 && b == 0 && c == 0 {
        return if l == 0 && m == 0 {
            Integer::one()
        } else {
            Integer::zero()
        };
    }
    if a == 0 && c == 0 && l == 0 {
        return if m == b { Integer::one() } else { Integer::zero() };
    }
    if b == 0 && c == 0 && m == 0 {
        return if l == a { Integer::one() } else { Integer::zero() };
    }
    let n1 = l + m - b - c - 1;
    let n2 = l + m - a - c - 1;
    if n1 < 0 || n2 < 0 {
        return Integer::zero();
    }
    binom_memo(n1, l - 1) * binom_memo(n2, m - 1) - binom_memo(n1, l) * binom_memo(n2, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_m;

    fn i(v: i64) -> Integer {
        Integer::from(v)
    }

    fn m(n: i64, k: i64, r: i64, s: i64) -> Integer {
        m_value(PairQuery::new(n, k, r, s)).unwrap()
    }

    #[test]
    fn m_value_examples() {
        assert_eq!(m(3, 0, 1, 2), i(3));
        assert_eq!(m(2, 0, 0, 1), i(1));
        assert_eq!(m(3, 0, 2, 1), i(3)); // swap symmetry
        assert_eq!(m(3, 5, 1, 2), i(0)); // k out of support
        assert_eq!(m(0, 0, 0, 0), i(0)); // support needs n >= 1
        assert_eq!(m(4, 0, -1, 2), i(0));
        // Oracle confirmation of the derived values.
        assert_eq!(brute_m(3, 0, 1, 2).unwrap(), i(3));
        assert_eq!(brute_m(2, 0, 0, 1).unwrap(), i(1));
    }

    #[test]
    fn m_value_matches_oracle_to_n6() {
        for n in 1..=6 {
            for k in 0..=n + 1 {
                for r in -1..=n + 1 {
                    for s in -1..=n + 1 {
                        assert_eq!(
                            m(n, k, r, s),
                            brute_m(n, k, r, s).unwrap(),
                            "n={n} k={k} r={r} s={s}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn nk_value_examples() {
        assert_eq!(nk_value(3, 2, 1).unwrap(), i(3)); // boundary row C(3,1)
        assert_eq!(nk_value(3, 0, 1).unwrap(), i(2));
        assert_eq!(nk_value(3, 1, 1).unwrap(), i(4));
        assert_eq!(nk_value(5, -1, 2).unwrap(), i(0));
        assert_eq!(brute_m(3, 0, 1, 1).unwrap(), i(2));
        assert_eq!(brute_m(3, 1, 1, 1).unwrap(), i(4));
    }

    #[test]
    fn n0_relation_examples() {
        assert_eq!(n0_via_m(3, 1).unwrap(), i(2));
        assert_eq!(n0_via_m(2, 1).unwrap(), i(2));
        assert_eq!(n0_via_m(4, 0).unwrap(), i(0));
        for n in 2..=9 {
            for r in -1..=n + 1 {
                assert_eq!(
                    n0_via_m(n, r).unwrap(),
                    nk_value(n, 0, r).unwrap(),
                    "n={n} r={r}"
                );
            }
        }
    }

    #[test]
    fn ne_value_examples() {
        assert_eq!(ne_value(DiagQuery::new(2, 0, 1)).unwrap(), i(4));
        assert_eq!(ne_value(DiagQuery::new(3, 2, 1)).unwrap(), i(3));
        assert_eq!(ne_value(DiagQuery::new(2, 0, 0)).unwrap(), i(0));
        assert_eq!(ne_def(DiagQuery::new(2, 0, 1)).unwrap(), i(4));
    }

    #[test]
    fn no_value_examples() {
        assert_eq!(no_value(DiagQuery::new(2, 0, 0)).unwrap(), i(2));
        assert_eq!(no_value(DiagQuery::new(2, 1, 0)).unwrap(), i(2));
        assert_eq!(no_value(DiagQuery::new(1, 0, 0)).unwrap(), i(2));
        assert_eq!(no_def(DiagQuery::new(2, 0, 0)).unwrap(), i(2));
        assert_eq!(ne_def(DiagQuery::new(5, 9, 2)).unwrap(), i(0));
    }

    #[test]
    fn definitional_sums_match_closed_forms_small() {
        for n in 1..=7 {
            for k in 0..=n + 1 {
                for p in -1..=n + 1 {
                    let q = DiagQuery::new(n, k, p);
                    assert_eq!(ne_def(q).unwrap(), ne_value(q).unwrap(), "even {q:?}");
                    assert_eq!(no_def(q).unwrap(), no_value(q).unwrap(), "odd {q:?}");
                }
            }
        }
    }

    #[test]
    fn row_sum_examples() {
        assert_eq!(row_sum(2, 0), i(4));
        assert_eq!(row_sum(2, 1), i(4));
        assert_eq!(row_sum(1, 0), i(2));
        assert_eq!(row_sum(1, 5), i(0));
        // Matches the definitional sums.
        for n in 1..=7 {
            for k in 0..=n - 1 {
                let mut even = Integer::zero();
                let mut odd = Integer::zero();
                for p in 0..=n {
                    even += ne_value(DiagQuery::new(n, k, p)).unwrap();
                    odd += no_value(DiagQuery::new(n, k, p)).unwrap();
                }
                assert_eq!(even, row_sum(n, k), "even n={n} k={k}");
                assert_eq!(odd, row_sum(n, k), "odd n={n} k={k}");
            }
        }
    }

    #[test]
    fn nk_row_sum_examples() {
        assert_eq!(nk_row_sum(2, 0).unwrap(), i(2));
        assert_eq!(nk_row_sum(3, 2).unwrap(), i(8));
        assert_eq!(nk_row_sum(3, 0).unwrap(), i(4));
        for n in 1..=9 {
            for k in 0..=n - 1 {
                let mut total = Integer::zero();
                for r in 0..=n {
                    total += nk_value(n, k, r).unwrap();
                }
                assert_eq!(total, nk_row_sum(n, k).unwrap(), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn recurrence_examples() {
        assert!(nk_recurrence_holds(3, 1, 1).unwrap());
        assert!(nk_recurrence_holds(4, 1, 2).unwrap());
        assert!(nk_recurrence_holds(2, 1, 1).unwrap());
        for n in 1..=10 {
            for k in 1..=n - 1 {
                for r in -1..=n + 1 {
                    assert!(nk_recurrence_holds(n, k, r).unwrap(), "n={n} k={k} r={r}");
                }
            }
        }
    }

    #[test]
    fn completeness_small() {
        for n in 1..=8 {
            for r in 0..=n {
                for s in 0..=n {
                    let mut total = Integer::zero();
                    for k in 0..=n - 1 {
                        total += m(n, k, r, s);
                    }
                    assert_eq!(total, binom_memo(n, r) * binom_memo(n, s));
                }
            }
        }
    }

    #[test]
    fn lagrange_examples() {
        assert_eq!(lagrange_coeff(0, 0, 1, 2, 2), i(3));
        assert_eq!(lagrange_coeff(0, 0, 0, 0, 0), i(1));
        assert_eq!(lagrange_coeff(1, 1, 0, 1, 1), i(1));
        // Degenerate corners: pure powers at the axis.
        assert_eq!(lagrange_coeff(0, 3, 0, 0, 3), i(1));
        assert_eq!(lagrange_coeff(0, 3, 0, 0, 4), i(0));
        assert_eq!(lagrange_coeff(2, 0, 0, 2, 0), i(1));
        assert_eq!(lagrange_coeff(0, 0, 0, 1, 0), i(0));
    }

    #[test]
    fn lagrange_matches_series_expansion() {
        use crate::series::{solve_f, BiSeries};
        let cap = 8usize;
        let f = solve_f(cap + 1);
        let x_plus_f = BiSeries::var_x(cap).add(&f.truncated(cap));
        let y_plus_f = BiSeries::var_y(cap).add(&f.truncated(cap));
        let f_over_x = f.div_x().unwrap().truncated(cap);
        for a in 0..=3i64 {
            for b in 0..=3i64 {
                for c in 0..=3i64 {
                    let series = x_plus_f
                        .pow(a as u32)
                        .mul(&y_plus_f.pow(b as u32))
                        .mul(&f_over_x.pow(c as u32));
                    for i in 0..=cap {
                        for j in 0..=cap - i {
                            let expected = series.coefficient(i, j).unwrap();
                            let got = lagrange_coeff(a, b, c, i as i64 + c, j as i64);
                            assert_eq!(
                                got, *expected,
                                "a={a} b={b} c={c} i={i} j={j}"
                            );
                        }
                    }
                }
            }
        }
    }
}
