//! Truncated bivariate formal power series over [`Integer`].
//!
//! A series stores the dense triangle of coefficients with total degree at
//! most `cap`; ring operations on mixed caps truncate to the smaller one, so
//! cap-shrinking operations (derivatives, monomial division) compose freely.
//! The central object is the series `f` with `f(0,0) = 0` satisfying
//! `f = (x+f)(y+f)`; every generating function exposed by [`build`] is
//! assembled from it.

use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmath::Integer;

/// Dense triangular series: coefficient of `x^i y^j` is kept iff `i+j <= cap`.
#[derive(Clone, Debug)]
pub struct BiSeries {
    cap: usize,
    rows: Vec<Vec<Integer>>, // rows[i][j], defined for i + j <= cap
}

impl BiSeries {
    /// The zero series at the given cap.
    pub fn zero(cap: usize) -> Self {
        let rows = (0..=cap)
            .map(|i| vec![Integer::zero(); cap + 1 - i])
            .collect();
        BiSeries { cap, rows }
    }

    /// The constant series 1.
    pub fn one(cap: usize) -> Self {
        Self::monomial(cap, 0, 0, Integer::one())
    }

    /// The series `c * x^i y^j`; zero if the monomial is beyond the cap.
    pub fn monomial(cap: usize, i: usize, j: usize, c: Integer) -> Self {
        let mut s = Self::zero(cap);
        if i + j <= cap {
            s.rows[i][j] = c;
        }
        s
    }

    pub fn var_x(cap: usize) -> Self {
        Self::monomial(cap, 1, 0, Integer::one())
    }

    pub fn var_y(cap: usize) -> Self {
        Self::monomial(cap, 0, 1, Integer::one())
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Coefficient of `x^i y^j`. Requesting a coefficient past the cap is an
    /// error, never a silent zero.
    pub fn coefficient(&self, i: usize, j: usize) -> Result<&Integer> {
        if i + j > self.cap {
            return Err(Error::OutOfCap { i, j, cap: self.cap });
        }
        Ok(&self.rows[i][j])
    }

    /// Overwrite the coefficient of `x^i y^j` (used by perturbation tests).
    pub fn set_coefficient(&mut self, i: usize, j: usize, value: Integer) -> Result<()> {
        if i + j > self.cap {
            return Err(Error::OutOfCap { i, j, cap: self.cap });
        }
        self.rows[i][j] = value;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|row| row.iter().all(|c| c.is_zero()))
    }

    /// Copy truncated to `min(self.cap, cap)`.
    pub fn truncated(&self, cap: usize) -> Self {
        let cap = cap.min(self.cap);
        let mut out = Self::zero(cap);
        for i in 0..=cap {
            for j in 0..=cap - i {
                out.rows[i][j] = self.rows[i][j].clone();
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&Integer, &Integer) -> Integer) -> Self {
        let cap = self.cap.min(other.cap);
        let mut out = Self::zero(cap);
        for i in 0..=cap {
            for j in 0..=cap - i {
                out.rows[i][j] = op(&self.rows[i][j], &other.rows[i][j]);
            }
        }
        out
    }

    pub fn scale(&self, c: &Integer) -> Self {
        let mut out = Self::zero(self.cap);
        for i in 0..=self.cap {
            for j in 0..=self.cap - i {
                out.rows[i][j] = &self.rows[i][j] * c;
            }
        }
        out
    }

    /// Product truncated at the smaller operand cap.
    pub fn mul(&self, other: &Self) -> Self {
        let cap = self.cap.min(other.cap);
        let mut out = Self::zero(cap);
        for i1 in 0..=cap {
            for j1 in 0..=cap - i1 {
                let a = &self.rows[i1][j1];
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..=cap - i1 - j1 {
                    for j2 in 0..=cap - i1 - j1 - i2 {
                        let b = &other.rows[i2][j2];
                        if b.is_zero() {
                            continue;
                        }
                        out.rows[i1 + i2][j1 + j2] += a * b;
                    }
                }
            }
        }
        out
    }

    /// `self^e` by repeated squaring; `e = 0` gives the constant series 1.
    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(self.cap);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Quotient by the monomial `x`. Every coefficient with `x`-exponent 0
    /// must vanish; the result cap drops by one because the top total degree
    /// of the quotient would need unavailable coefficients.
    pub fn div_x(&self) -> Result<Self> {
        if self.rows[0].iter().any(|c| !c.is_zero()) {
            return Err(Error::NotDivisible { variable: 'x' });
        }
        let cap = self.cap.saturating_sub(1);
        let mut out = Self::zero(cap);
        if self.cap > 0 {
            for i in 0..=cap {
                for j in 0..=cap - i {
                    out.rows[i][j] = self.rows[i + 1][j].clone();
                }
            }
        }
        Ok(out)
    }

    /// Quotient by the monomial `y`; mirror of [`Self::div_x`].
    pub fn div_y(&self) -> Result<Self> {
        if self.rows.iter().any(|row| !row[0].is_zero()) {
            return Err(Error::NotDivisible { variable: 'y' });
        }
        let cap = self.cap.saturating_sub(1);
        let mut out = Self::zero(cap);
        if self.cap > 0 {
            for i in 0..=cap {
                for j in 0..=cap - i {
                    out.rows[i][j] = self.rows[i][j + 1].clone();
                }
            }
        }
        Ok(out)
    }

    /// Formal partial derivative in `x`; result cap drops by one.
    pub fn partial_x(&self) -> Self {
        let cap = self.cap.saturating_sub(1);
        let mut out = Self::zero(cap);
        if self.cap > 0 {
            for i in 0..=cap {
                for j in 0..=cap - i {
                    out.rows[i][j] = &self.rows[i + 1][j] * Integer::from(i as u64 + 1);
                }
            }
        }
        out
    }

    /// Formal partial derivative in `y`; result cap drops by one.
    pub fn partial_y(&self) -> Self {
        let cap = self.cap.saturating_sub(1);
        let mut out = Self::zero(cap);
        if self.cap > 0 {
            for i in 0..=cap {
                for j in 0..=cap - i {
                    out.rows[i][j] = &self.rows[i][j + 1] * Integer::from(j as u64 + 1);
                }
            }
        }
        out
    }

    /// `1/(1 - self)` for a series with zero constant term, by Horner
    /// accumulation: `cap` fused multiply-adds instead of `cap` powers.
    pub fn geom_inverse(&self) -> Result<Self> {
        if !self.rows[0][0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let one = Self::one(self.cap);
        let mut acc = one.clone();
        for _ in 0..self.cap {
            acc = acc.mul(self).add(&one);
        }
        Ok(acc)
    }

    /// Dump format: header `cap=<D>`, then one `i j value` line per nonzero
    /// coefficient, sorted by total degree then by `i`.
    pub fn dump(&self) -> String {
        let mut out = format!("cap={}\n", self.cap);
        for d in 0..=self.cap {
            for i in 0..=d {
                let j = d - i;
                let c = &self.rows[i][j];
                if !c.is_zero() {
                    writeln!(out, "{i} {j} {c}").unwrap();
                }
            }
        }
        out
    }
}

/// Entrywise equality over the smaller cap, matching the truncation
/// semantics of the ring operations.
impl PartialEq for BiSeries {
    fn eq(&self, other: &Self) -> bool {
        let cap = self.cap.min(other.cap);
        for i in 0..=cap {
            for j in 0..=cap - i {
                if self.rows[i][j] != other.rows[i][j] {
                    return false;
                }
            }
        }
        true
    }
}

/// The unique series with zero constant term satisfying `f = (x+f)(y+f)`,
/// i.e. `f = xy + (x+y)f + f^2`, truncated at total degree `cap`.
///
/// Fixed-point iteration from 0: coefficients of total degree `m` are
/// stationary after `m` rounds, so `cap` rounds suffice — deterministic cost,
/// no convergence test.
pub fn solve_f(cap: usize) -> BiSeries {
    let xy = BiSeries::monomial(cap, 1, 1, Integer::one());
    let x_plus_y = BiSeries::var_x(cap).add(&BiSeries::var_y(cap));
    let mut f = BiSeries::zero(cap);
    for _ in 0..cap {
        f = xy.add(&x_plus_y.mul(&f)).add(&f.mul(&f));
    }
    f
}

/// `u0 = x + y + 2f`, whose k-th power generates the diagonal counts.
pub fn u0(cap: usize) -> BiSeries {
    u0_from(&solve_f(cap), cap)
}

fn u0_from(f: &BiSeries, cap: usize) -> BiSeries {
    BiSeries::var_x(cap)
        .add(&BiSeries::var_y(cap))
        .add(&f.truncated(cap).scale(&Integer::from(2)))
}

/// Names for the generating functions this crate can expand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesId {
    /// `f` itself.
    F,
    /// `(x + y + 2f)^k`; for `k >= 1` the coefficient of `x^r y^{n-r}` is
    /// the diagonal count for `k-1` intersections.
    U0Pow(u32),
    /// `(x+y+2f)^k (f/x)^j`: coefficient of `x^r y^{n-r}` is the pair count
    /// for endpoints `r` and `r+j` with `k` intersections. For `j = 0` the
    /// correct generator is `u0^{k+1}`, and that is what this builds.
    MDiag { k: u32, j: u32 },
    /// `2 (x+y+2f)^k (f^2/xy) / (1 - f^2/xy) + (x+y+2f)^{k+1}`: coefficient
    /// of `x^p y^{n-p}` is the even endpoint-sum count.
    Ne(u32),
    /// `2 (x+y+2f)^k (f/x) / (1 - f^2/xy)`: coefficient of `x^p y^{n-p}` is
    /// the odd endpoint-sum count.
    No(u32),
    /// `1 / (1 - x - y - 2f)`: coefficient of `x^p y^{n-p}` is `C(n,p)^2`.
    SquareBinom,
    /// `(f/x) / (1 - f^2/xy)`, equal to `yf / (xy - f^2)`: coefficient of
    /// `x^p y^{n-p}` is `C(n-1,p)^2`.
    SquareBinomShifted,
}

impl SeriesId {
    /// Extra cap needed on `f` before the monomial divisions eat into it.
    pub fn headroom(&self) -> usize {
        match self {
            SeriesId::F | SeriesId::U0Pow(_) | SeriesId::SquareBinom => 0,
            SeriesId::MDiag { .. } => 1,
            SeriesId::Ne(_) | SeriesId::No(_) | SeriesId::SquareBinomShifted => 2,
        }
    }
}

/// Build the named generating function at total-degree cap `cap`.
pub fn build(id: SeriesId, cap: usize) -> BiSeries {
    build_with_f(&solve_f(cap + id.headroom()), id, cap)
}

/// Like [`build`], reusing a caller-supplied `f` across many builds. The
/// supplied series must satisfy the functional equation and have cap at
/// least `cap + id.headroom()`.
pub fn build_with_f(f: &BiSeries, id: SeriesId, cap: usize) -> BiSeries {
    assert!(
        f.cap() >= cap + id.headroom(),
        "build_with_f: f cap {} too small for cap {} plus headroom {}",
        f.cap(),
        cap,
        id.headroom()
    );
    match id {
        SeriesId::F => f.truncated(cap),
        SeriesId::U0Pow(k) => u0_from(f, cap).pow(k),
        SeriesId::MDiag { k, j } => {
            if j == 0 {
                return build_with_f(f, SeriesId::U0Pow(k + 1), cap);
            }
            let fx = f
                .truncated(cap + 1)
                .div_x()
                .expect("f is divisible by x")
                .truncated(cap);
            u0_from(f, cap).pow(k).mul(&fx.pow(j))
        }
        SeriesId::Ne(k) => {
            let g = f_squared_over_xy(f, cap);
            let u = u0_from(f, cap);
            let even_tail = u
                .pow(k)
                .mul(&g.mul(&g.geom_inverse().expect("f^2/xy has no constant term")))
                .scale(&Integer::from(2));
            even_tail.add(&u.pow(k + 1))
        }
        SeriesId::No(k) => u0_from(f, cap)
            .pow(k)
            .mul(&build_with_f(f, SeriesId::SquareBinomShifted, cap))
            .scale(&Integer::from(2)),
        SeriesId::SquareBinom => u0_from(f, cap)
            .geom_inverse()
            .expect("u0 has no constant term"),
        SeriesId::SquareBinomShifted => {
            let g = f_squared_over_xy(f, cap);
            let fx = f
                .truncated(cap + 1)
                .div_x()
                .expect("f is divisible by x")
                .truncated(cap);
            fx.mul(&g.geom_inverse().expect("f^2/xy has no constant term"))
        }
    }
}

fn f_squared_over_xy(f: &BiSeries, cap: usize) -> BiSeries {
    f.truncated(cap + 2)
        .mul(&f.truncated(cap + 2))
        .div_x()
        .expect("f^2 is divisible by x")
        .div_y()
        .expect("f^2/x is divisible by y")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::binom;
    use proptest::prelude::*;

    fn coeff(s: &BiSeries, i: usize, j: usize) -> Integer {
        s.coefficient(i, j).unwrap().clone()
    }

    #[test]
    fn solve_f_first_terms() {
        // One hand iteration of the fixed point: f = xy at cap 2.
        let f2 = solve_f(2);
        assert_eq!(f2, BiSeries::monomial(2, 1, 1, Integer::one()));
        // Two iterations: f = xy + x^2 y + x y^2 at cap 3.
        let f3 = solve_f(3);
        let mut expected = BiSeries::zero(3);
        expected.set_coefficient(1, 1, Integer::one()).unwrap();
        expected.set_coefficient(2, 1, Integer::one()).unwrap();
        expected.set_coefficient(1, 2, Integer::one()).unwrap();
        assert_eq!(f3, expected);
    }

    #[test]
    fn solve_f_known_coefficients() {
        let f = solve_f(6);
        assert_eq!(coeff(&f, 0, 0), Integer::zero());
        assert_eq!(coeff(&f, 1, 1), Integer::one());
        // Pair count for endpoints one apart at n = 3 with no intersections.
        assert_eq!(coeff(&f, 2, 2), Integer::from(3));
        // Every monomial of f is divisible by xy.
        for j in 0..=6 {
            assert_eq!(coeff(&f, 0, j), Integer::zero());
        }
        for i in 0..=6 {
            assert_eq!(coeff(&f, i, 0), Integer::zero());
        }
    }

    #[test]
    fn solve_f_is_symmetric() {
        let f = solve_f(10);
        for i in 0..=10 {
            for j in 0..=10 - i {
                assert_eq!(coeff(&f, i, j), coeff(&f, j, i));
            }
        }
    }

    #[test]
    fn functional_equation_residual_vanishes() {
        for cap in [0, 1, 4, 16] {
            let f = solve_f(cap);
            let xy = BiSeries::monomial(cap, 1, 1, Integer::one());
            let x_plus_y = BiSeries::var_x(cap).add(&BiSeries::var_y(cap));
            let residual = f.sub(&xy).sub(&x_plus_y.mul(&f)).sub(&f.mul(&f));
            assert!(residual.is_zero(), "cap {cap}");
        }
    }

    #[test]
    fn quadratic_identity() {
        // f^2 = f - xf - yf - xy at every degree within cap.
        let cap = 12;
        let f = solve_f(cap);
        let x = BiSeries::var_x(cap);
        let y = BiSeries::var_y(cap);
        let xy = BiSeries::monomial(cap, 1, 1, Integer::one());
        let rhs = f.sub(&x.mul(&f)).sub(&y.mul(&f)).sub(&xy);
        assert_eq!(f.mul(&f), rhs);
    }

    #[test]
    fn derivative_identity() {
        // (1 - x - y - 2f) * df/dx = y + f, checked at cap 12.
        let cap = 12;
        let f = solve_f(cap);
        let one_minus = BiSeries::one(cap)
            .sub(&BiSeries::var_x(cap))
            .sub(&BiSeries::var_y(cap))
            .sub(&f.scale(&Integer::from(2)));
        let lhs = one_minus.mul(&f.partial_x());
        let rhs = BiSeries::var_y(cap).add(&f);
        assert_eq!(lhs, rhs);
        let lhs_y = one_minus.mul(&f.partial_y());
        let rhs_y = BiSeries::var_x(cap).add(&f);
        assert_eq!(lhs_y, rhs_y);
    }

    #[test]
    fn reciprocal_identity_cross_multiplied() {
        // f * (1 - x - y - 2f) = xy - f^2.
        let cap = 12;
        let f = solve_f(cap);
        let one_minus = BiSeries::one(cap)
            .sub(&BiSeries::var_x(cap))
            .sub(&BiSeries::var_y(cap))
            .sub(&f.scale(&Integer::from(2)));
        let xy = BiSeries::monomial(cap, 1, 1, Integer::one());
        assert_eq!(f.mul(&one_minus), xy.sub(&f.mul(&f)));
    }

    #[test]
    fn mul_and_pow_basics() {
        let x = BiSeries::var_x(4);
        let y = BiSeries::var_y(4);
        assert_eq!(x.mul(&y), BiSeries::monomial(4, 1, 1, Integer::one()));
        assert_eq!(x.pow(0), BiSeries::one(4));
        // Truncation: xy * xy vanishes at cap 2.
        let xy2 = BiSeries::monomial(2, 1, 1, Integer::one());
        assert!(xy2.mul(&xy2).is_zero());
    }

    #[test]
    fn mixed_caps_truncate_to_smaller() {
        let a = solve_f(8);
        let b = BiSeries::one(5);
        let prod = a.mul(&b);
        assert_eq!(prod.cap(), 5);
        assert_eq!(prod, a.truncated(5));
    }

    #[test]
    fn div_x_examples() {
        let f = solve_f(3);
        let q = f.div_x().unwrap();
        assert_eq!(q.cap(), 2);
        let mut expected = BiSeries::zero(2);
        expected.set_coefficient(0, 1, Integer::one()).unwrap(); // y
        expected.set_coefficient(1, 1, Integer::one()).unwrap(); // xy
        expected.set_coefficient(0, 2, Integer::one()).unwrap(); // y^2
        assert_eq!(q, expected);

        let x = BiSeries::var_x(4);
        assert_eq!(x.div_x().unwrap(), BiSeries::one(3));

        let y = BiSeries::var_y(4);
        assert_eq!(
            y.div_x(),
            Err(Error::NotDivisible { variable: 'x' })
        );
    }

    #[test]
    fn geom_inverse_examples() {
        assert_eq!(BiSeries::zero(5).geom_inverse().unwrap(), BiSeries::one(5));

        let x = BiSeries::var_x(3);
        let inv = x.geom_inverse().unwrap();
        let mut expected = BiSeries::zero(3);
        for i in 0..=3 {
            expected.set_coefficient(i, 0, Integer::one()).unwrap();
        }
        assert_eq!(inv, expected);

        assert_eq!(
            BiSeries::one(3).geom_inverse(),
            Err(Error::NonzeroConstantTerm)
        );
    }

    #[test]
    fn partial_derivative_examples() {
        let s = BiSeries::monomial(5, 2, 1, Integer::one());
        assert_eq!(
            s.partial_x(),
            BiSeries::monomial(4, 1, 1, Integer::from(2))
        );
        assert!(BiSeries::one(5).partial_x().is_zero());
    }

    #[test]
    fn coefficient_out_of_cap_is_an_error() {
        let f = solve_f(8);
        assert_eq!(
            f.coefficient(5, 9).err(),
            Some(Error::OutOfCap { i: 5, j: 9, cap: 8 })
        );
    }

    #[test]
    fn build_examples() {
        // u0^1: coefficient of x y is 2 (the 2f term).
        let u = build(SeriesId::U0Pow(1), 4);
        assert_eq!(coeff(&u, 1, 1), Integer::from(2));
        assert_eq!(coeff(&u, 1, 0), Integer::one());
        assert_eq!(coeff(&u, 0, 1), Integer::one());

        // Even endpoint-sum generator at k = 0: coefficient of x y is 4.
        let ne = build(SeriesId::Ne(0), 4);
        assert_eq!(coeff(&ne, 1, 1), Integer::from(4));

        // 1/(1-u0): coefficient of x^2 y^2 is C(4,2)^2 = 36.
        let sq = build(SeriesId::SquareBinom, 6);
        assert_eq!(coeff(&sq, 2, 2), Integer::from(36));

        // yf/(xy - f^2): coefficient of x y^2 is C(2,1)^2 = 4.
        let shifted = build(SeriesId::SquareBinomShifted, 6);
        assert_eq!(coeff(&shifted, 1, 2), Integer::from(4));
    }

    #[test]
    fn square_binom_coefficients_are_squared_binomials() {
        let cap = 10;
        let sq = build(SeriesId::SquareBinom, cap);
        let shifted = build(SeriesId::SquareBinomShifted, cap);
        for i in 0..=cap {
            for j in 0..=cap - i {
                let n = (i + j) as i64;
                let b = binom(n, i as i64);
                assert_eq!(coeff(&sq, i, j), &b * &b, "square at ({i},{j})");
                let expected = if n >= 1 {
                    let b = binom(n - 1, i as i64);
                    &b * &b
                } else {
                    Integer::zero()
                };
                assert_eq!(coeff(&shifted, i, j), expected, "shifted at ({i},{j})");
            }
        }
    }

    #[test]
    fn dump_format() {
        let f = solve_f(2);
        assert_eq!(f.dump(), "cap=2\n1 1 1\n");
        let u = u0(2);
        assert_eq!(u.dump(), "cap=2\n0 1 1\n1 0 1\n1 1 2\n");
    }

    // Random sparse series for the ring-law properties.
    fn sparse_series(cap: usize) -> impl Strategy<Value = BiSeries> {
        let term = (0..=cap, 0..=cap, -3i64..=3);
        proptest::collection::vec(term, 0..6).prop_map(move |terms| {
            let mut s = BiSeries::zero(cap);
            for (i, j, c) in terms {
                if i + j <= cap {
                    let cur = s.coefficient(i, j).unwrap() + Integer::from(c);
                    s.set_coefficient(i, j, cur).unwrap();
                }
            }
            s
        })
    }

    proptest! {
        #[test]
        fn ring_laws(
            a in sparse_series(7),
            b in sparse_series(7),
            c in sparse_series(7),
        ) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        }
    }
}
