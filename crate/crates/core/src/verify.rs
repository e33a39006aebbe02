//! The identity suite: every closed form, recurrence, series expansion, and
//! the brute-force oracle cross-checked against each other over configurable
//! parameter grids, with first-counterexample capture.
//!
//! Grids are derived from `n` alone and deliberately include an
//! out-of-support fringe (`k` up to `n+2`, `r`, `s`, `p` in `-1..=n+1`);
//! convention bugs live on the fringe. Comparisons are exact integer
//! equality throughout. A check stops at its first counterexample, but the
//! suite always runs every check.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::closedform::{self, DiagQuery, PairQuery};
use crate::error::Result;
use crate::exactmath::{binom_memo, exact_div, Integer};
use crate::oracle::{self, BruteTable};
use crate::par::find_first_map;
use crate::series::{self, BiSeries, SeriesId};

/// Identifies one check of the suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckId {
    /// Pair counts against the brute-force oracle, full fringe grid.
    MVsOracle,
    /// Diagonal counts against the oracle's diagonal.
    NkVsOracle,
    /// Even endpoint sums: definitional sum vs closed form.
    EvenSumDefinitional,
    /// Even endpoint sums: divisibility and the cleared closed form.
    EvenSumClosed,
    /// Odd endpoint sums: definitional sum vs closed form.
    OddSumDefinitional,
    /// Odd endpoint sums: rearranged closed form against squared binomials.
    OddSumClosed,
    /// Even and odd row sums both equal `2^{k+1} C(2n-k-2, n-1)`.
    RowSumsEqual,
    /// Diagonal row sums against the factorial closed form.
    NkRowSum,
    /// The cleared-denominator recurrence for diagonal counts.
    NkRecurrence,
    /// Zero-intersection diagonal via the one-apart pair count.
    N0Relation,
    /// Counts over all k sum to `C(n,r) C(n,s)`.
    Completeness,
    /// Pair counts against series coefficients.
    MVsSeries,
    /// Diagonal counts against powers of `u0`.
    NkVsSeries,
    /// Even/odd endpoint sums against their generating series.
    EvenOddVsSeries,
    /// Closed-form coefficient extractor against direct expansion.
    LagrangeVsSeries,
    /// Functional-equation, quadratic, derivative, reciprocal, symmetry and
    /// divisibility identities of `f`.
    SeriesFunctionalEq,
    /// Coefficients of `1/(1-u0)` and `yf/(xy-f^2)` are squared binomials.
    SquareBinom,
}

impl CheckId {
    pub const ALL: [CheckId; 17] = [
        CheckId::MVsOracle,
        CheckId::NkVsOracle,
        CheckId::EvenSumDefinitional,
        CheckId::EvenSumClosed,
        CheckId::OddSumDefinitional,
        CheckId::OddSumClosed,
        CheckId::RowSumsEqual,
        CheckId::NkRowSum,
        CheckId::NkRecurrence,
        CheckId::N0Relation,
        CheckId::Completeness,
        CheckId::MVsSeries,
        CheckId::NkVsSeries,
        CheckId::EvenOddVsSeries,
        CheckId::LagrangeVsSeries,
        CheckId::SeriesFunctionalEq,
        CheckId::SquareBinom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::MVsOracle => "m-vs-oracle",
            CheckId::NkVsOracle => "nk-vs-oracle",
            CheckId::EvenSumDefinitional => "even-sum-definitional",
            CheckId::EvenSumClosed => "even-sum-closed",
            CheckId::OddSumDefinitional => "odd-sum-definitional",
            CheckId::OddSumClosed => "odd-sum-closed",
            CheckId::RowSumsEqual => "row-sums-equal",
            CheckId::NkRowSum => "nk-row-sum",
            CheckId::NkRecurrence => "nk-recurrence",
            CheckId::N0Relation => "n0-relation",
            CheckId::Completeness => "completeness",
            CheckId::MVsSeries => "m-vs-series",
            CheckId::NkVsSeries => "nk-vs-series",
            CheckId::EvenOddVsSeries => "even-odd-vs-series",
            CheckId::LagrangeVsSeries => "lagrange-vs-series",
            CheckId::SeriesFunctionalEq => "series-functional-eq",
            CheckId::SquareBinom => "square-binom",
        }
    }
}

/// One check plus its grid bounds. `max_n` drives the closed-form grids;
/// `cap` drives the series grids; oracle checks are additionally limited by
/// the enumeration ceiling in [`SuiteEnv`].
#[derive(Clone, Copy, Debug)]
pub struct CheckSpec {
    pub id: CheckId,
    pub max_n: i64,
    pub cap: usize,
}

/// Bounds for [`default_specs`].
#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    /// Deepest n for closed-form identity grids.
    pub max_n: i64,
    /// Deepest n for the definitional sums (quartic in n; kept smaller).
    pub max_n_def: i64,
    /// Deepest n enumerated by the oracle; 0 disables oracle checks.
    pub max_n_oracle: i64,
    /// Total-degree cap for series grids.
    pub cap: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            max_n: 25,
            max_n_def: 12,
            max_n_oracle: 8,
            cap: 12,
        }
    }
}

/// The full suite with per-check grids derived from the options.
pub fn default_specs(opts: &SuiteOptions) -> Vec<CheckSpec> {
    CheckId::ALL
        .iter()
        .map(|&id| {
            let max_n = match id {
                CheckId::MVsOracle | CheckId::NkVsOracle => opts.max_n_oracle,
                CheckId::EvenSumDefinitional | CheckId::OddSumDefinitional => {
                    opts.max_n_def.min(opts.max_n)
                }
                _ => opts.max_n,
            };
            CheckSpec {
                id,
                max_n,
                cap: opts.cap,
            }
        })
        .collect()
}

/// Which computation route a [`Mutation`] perturbs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MutatedRoute {
    M,
    Nk,
    Ne,
    No,
    RowSum,
    NkRowSum,
    Lagrange,
    SeriesF,
    Oracle,
}

impl MutatedRoute {
    fn arity(self) -> usize {
        match self {
            MutatedRoute::M | MutatedRoute::Oracle => 4,
            MutatedRoute::Nk | MutatedRoute::Ne | MutatedRoute::No => 3,
            MutatedRoute::RowSum | MutatedRoute::NkRowSum | MutatedRoute::SeriesF => 2,
            MutatedRoute::Lagrange => 5,
        }
    }
}

/// A deliberate single-entry corruption of one route, used to demonstrate
/// that the suite detects it. Parsed from `route:p1,p2,...`, e.g.
/// `nk:3,1,1` (value at n=3, k=1, r=1), `m:3,0,1,2`, `f:1,1` (series
/// coefficient of x y), `oracle:3,0,1,2` (table entry at n=3).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mutation {
    pub route: MutatedRoute,
    pub at: Vec<i64>,
    pub delta: i64,
}

impl Mutation {
    pub fn new(route: MutatedRoute, at: Vec<i64>) -> Self {
        assert_eq!(at.len(), route.arity(), "wrong parameter count for route");
        Mutation {
            route,
            at,
            delta: 1,
        }
    }
}

impl FromStr for Mutation {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (name, rest) = s
            .split_once(':')
            .ok_or_else(|| format!("expected route:params, got {s:?}"))?;
        let route = match name {
            "m" => MutatedRoute::M,
            "nk" => MutatedRoute::Nk,
            "ne" => MutatedRoute::Ne,
            "no" => MutatedRoute::No,
            "rowsum" => MutatedRoute::RowSum,
            "nkrowsum" => MutatedRoute::NkRowSum,
            "lagrange" => MutatedRoute::Lagrange,
            "f" => MutatedRoute::SeriesF,
            "oracle" => MutatedRoute::Oracle,
            other => return Err(format!("unknown route {other:?}")),
        };
        let at: Vec<i64> = rest
            .split(',')
            .map(|p| p.trim().parse::<i64>().map_err(|e| format!("{p:?}: {e}")))
            .collect::<std::result::Result<_, _>>()?;
        if at.len() != route.arity() {
            return Err(format!(
                "route {name} takes {} parameters, got {}",
                route.arity(),
                at.len()
            ));
        }
        Ok(Mutation {
            route,
            at,
            delta: 1,
        })
    }
}

/// Environment shared by all checks of one run.
#[derive(Clone, Debug)]
pub struct SuiteEnv {
    /// Hard bound on brute-force n (4^n blowup guard).
    pub oracle_ceiling: u32,
    /// Directory of per-n oracle cache documents (`oracle-n<k>.json`).
    pub cache_dir: Option<PathBuf>,
    /// Optional single-entry corruption.
    pub mutation: Option<Mutation>,
}

impl Default for SuiteEnv {
    fn default() -> Self {
        SuiteEnv {
            oracle_ceiling: oracle::DEFAULT_CEILING,
            cache_dir: None,
            mutation: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

/// First failing comparison of a check: full parameters plus both routes'
/// values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub params: BTreeMap<String, i64>,
    /// Value from `left_route`.
    pub expected: String,
    /// Value from `right_route`.
    pub actual: String,
    pub left_route: String,
    pub right_route: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub instances: u64,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckReport>,
    pub verdict: CheckStatus,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.verdict == CheckStatus::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for check in &self.checks {
            let status = match check.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "FAIL",
            };
            writeln!(
                f,
                "{:<24} {}  {} instances",
                check.name, status, check.instances
            )?;
            if let Some(ce) = &check.counterexample {
                let params = ce
                    .params
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect::<Vec<_>>()
                    .join(" ");
                writeln!(
                    f,
                    "    at {params}: {} = {}, {} = {}",
                    ce.left_route, ce.expected, ce.right_route, ce.actual
                )?;
            }
        }
        write!(
            f,
            "verdict: {}",
            match self.verdict {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "FAIL",
            }
        )
    }
}

fn counterexample(
    params: &[(&str, i64)],
    expected: &Integer,
    actual: &Integer,
    left_route: &str,
    right_route: &str,
) -> Counterexample {
    Counterexample {
        params: params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        expected: expected.to_string(),
        actual: actual.to_string(),
        left_route: left_route.to_string(),
        right_route: right_route.to_string(),
    }
}

fn error_counterexample(
    params: &[(&str, i64)],
    err: &crate::error::Error,
    route: &str,
) -> Counterexample {
    Counterexample {
        params: params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        expected: "an exact value".to_string(),
        actual: format!("error: {err}"),
        left_route: route.to_string(),
        right_route: route.to_string(),
    }
}

/// Run context: oracle/series memoization, cache IO, mutation injection.
struct Ctx<'a> {
    env: &'a SuiteEnv,
    tables: Mutex<HashMap<u32, Arc<BruteTable>>>,
    f_memo: Mutex<HashMap<usize, Arc<BiSeries>>>,
    warnings: Mutex<Vec<String>>,
}

impl<'a> Ctx<'a> {
    fn new(env: &'a SuiteEnv) -> Self {
        Ctx {
            env,
            tables: Mutex::new(HashMap::new()),
            f_memo: Mutex::new(HashMap::new()),
            warnings: Mutex::new(Vec::new()),
        }
    }

    fn warn(&self, message: String) {
        self.warnings.lock().unwrap().push(message);
    }

    fn apply(&self, route: MutatedRoute, at: &[i64], value: &mut Integer) {
        if let Some(m) = &self.env.mutation {
            if m.route == route && m.at == at {
                *value += m.delta;
            }
        }
    }

    fn m(&self, n: i64, k: i64, r: i64, s: i64) -> Result<Integer> {
        let mut v = closedform::m_value(PairQuery::new(n, k, r, s))?;
        self.apply(MutatedRoute::M, &[n, k, r, s], &mut v);
        Ok(v)
    }

    fn nk(&self, n: i64, k: i64, r: i64) -> Result<Integer> {
        let mut v = closedform::nk_value(n, k, r)?;
        self.apply(MutatedRoute::Nk, &[n, k, r], &mut v);
        Ok(v)
    }

    fn ne(&self, n: i64, k: i64, p: i64) -> Result<Integer> {
        let mut v = closedform::ne_value(DiagQuery::new(n, k, p))?;
        self.apply(MutatedRoute::Ne, &[n, k, p], &mut v);
        Ok(v)
    }

    fn no(&self, n: i64, k: i64, p: i64) -> Result<Integer> {
        let mut v = closedform::no_value(DiagQuery::new(n, k, p))?;
        self.apply(MutatedRoute::No, &[n, k, p], &mut v);
        Ok(v)
    }

    fn row_sum(&self, n: i64, k: i64) -> Integer {
        let mut v = closedform::row_sum(n, k);
        self.apply(MutatedRoute::RowSum, &[n, k], &mut v);
        v
    }

    fn nk_row_sum(&self, n: i64, k: i64) -> Result<Integer> {
        let mut v = closedform::nk_row_sum(n, k)?;
        self.apply(MutatedRoute::NkRowSum, &[n, k], &mut v);
        Ok(v)
    }

    fn lagrange(&self, a: i64, b: i64, c: i64, l: i64, m: i64) -> Integer {
        let mut v = closedform::lagrange_coeff(a, b, c, l, m);
        self.apply(MutatedRoute::Lagrange, &[a, b, c, l, m], &mut v);
        v
    }

    /// `f` at the requested cap, with the series mutation applied.
    fn f(&self, cap: usize) -> Arc<BiSeries> {
        let mut memo = self.f_memo.lock().unwrap();
        memo.entry(cap)
            .or_insert_with(|| {
                let mut f = series::solve_f(cap);
                if let Some(m) = &self.env.mutation {
                    if m.route == MutatedRoute::SeriesF {
                        let (i, j) = (m.at[0] as usize, m.at[1] as usize);
                        if i + j <= cap {
                            let bumped = f.coefficient(i, j).unwrap() + Integer::from(m.delta);
                            f.set_coefficient(i, j, bumped).unwrap();
                        }
                    }
                }
                Arc::new(f)
            })
            .clone()
    }

    /// Oracle table for one n: cache directory first, enumeration otherwise,
    /// with the oracle mutation applied after either path.
    fn table(&self, n: u32) -> Result<Arc<BruteTable>> {
        if let Some(t) = self.tables.lock().unwrap().get(&n) {
            return Ok(t.clone());
        }
        let cache_file = self
            .env
            .cache_dir
            .as_ref()
            .map(|dir| dir.join(format!("oracle-n{n}.json")));
        let mut table = None;
        if let Some(file) = &cache_file {
            if file.exists() {
                match oracle::read_cache(file) {
                    Ok(t) if t.n() == n => table = Some(t),
                    Ok(t) => self.warn(format!(
                        "cache {} holds n = {}, expected {n}; recomputing",
                        file.display(),
                        t.n()
                    )),
                    Err(e) => self.warn(format!("{e}; recomputing")),
                }
            }
        }
        let table = match table {
            Some(t) => t,
            None => {
                let t = oracle::brute_table_with_ceiling(n, self.env.oracle_ceiling)?;
                if let Some(file) = &cache_file {
                    if let Some(dir) = file.parent() {
                        let _ = std::fs::create_dir_all(dir);
                    }
                    if let Err(e) = oracle::write_cache(file, &t) {
                        self.warn(format!("{e}"));
                    }
                }
                t
            }
        };
        let mut table = table;
        if let Some(m) = &self.env.mutation {
            if m.route == MutatedRoute::Oracle && m.at[0] == n as i64 {
                let dims_ok = m.at[1] >= 0 && m.at[2] >= 0 && m.at[3] >= 0;
                if dims_ok {
                    table.bump(m.at[1] as usize, m.at[2] as usize, m.at[3] as usize, m.delta);
                }
            }
        }
        let arc = Arc::new(table);
        self.tables.lock().unwrap().insert(n, arc.clone());
        Ok(arc)
    }
}

fn report(id: CheckId, instances: u64, ce: Option<Counterexample>) -> CheckReport {
    CheckReport {
        name: id.name().to_string(),
        instances,
        status: if ce.is_none() {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        counterexample: ce,
    }
}

/// Run the given checks in order and collect the report. The verdict is
/// `pass` exactly when no check found a counterexample; failures are data,
/// not errors.
pub fn run_suite(specs: &[CheckSpec], env: &SuiteEnv) -> VerifyReport {
    let ctx = Ctx::new(env);
    // Prefill the shared binomial table so parallel sweeps only read it.
    let deepest = specs
        .iter()
        .map(|s| (2 * s.max_n).max(3 * s.cap as i64))
        .max()
        .unwrap_or(0);
    binom_memo(deepest.max(1), 0);

    let checks: Vec<CheckReport> = specs.iter().map(|spec| run_check(&ctx, spec)).collect();
    let verdict = if checks.iter().all(|c| c.status == CheckStatus::Pass) {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    };
    VerifyReport {
        checks,
        verdict,
        warnings: ctx.warnings.into_inner().unwrap(),
    }
}

fn run_check(ctx: &Ctx, spec: &CheckSpec) -> CheckReport {
    match spec.id {
        CheckId::MVsOracle => m_vs_oracle(ctx, spec),
        CheckId::NkVsOracle => nk_vs_oracle(ctx, spec),
        CheckId::EvenSumDefinitional => even_sum_definitional(ctx, spec),
        CheckId::EvenSumClosed => even_sum_closed(ctx, spec),
        CheckId::OddSumDefinitional => odd_sum_definitional(ctx, spec),
        CheckId::OddSumClosed => odd_sum_closed(ctx, spec),
        CheckId::RowSumsEqual => row_sums_equal(ctx, spec),
        CheckId::NkRowSum => nk_row_sum_check(ctx, spec),
        CheckId::NkRecurrence => nk_recurrence(ctx, spec),
        CheckId::N0Relation => n0_relation(ctx, spec),
        CheckId::Completeness => completeness(ctx, spec),
        CheckId::MVsSeries => m_vs_series(ctx, spec),
        CheckId::NkVsSeries => nk_vs_series(ctx, spec),
        CheckId::EvenOddVsSeries => even_odd_vs_series(ctx, spec),
        CheckId::LagrangeVsSeries => lagrange_vs_series(ctx, spec),
        CheckId::SeriesFunctionalEq => series_functional_eq(ctx, spec),
        CheckId::SquareBinom => square_binom(ctx, spec),
    }
}

/// Oracle tables for 1..=max_n, or a failed report if enumeration refuses.
fn oracle_tables(
    ctx: &Ctx,
    id: CheckId,
    max_n: i64,
) -> std::result::Result<Vec<Arc<BruteTable>>, CheckReport> {
    let mut tables = Vec::new();
    for n in 1..=max_n {
        match ctx.table(n as u32) {
            Ok(t) => tables.push(t),
            Err(e) => {
                let ce = error_counterexample(&[("n", n)], &e, "oracle enumeration");
                return Err(report(id, 0, Some(ce)));
            }
        }
    }
    Ok(tables)
}

fn m_vs_oracle(ctx: &Ctx, spec: &CheckSpec) -> CheckReport {
    let tables = match oracle_tables(ctx, spec.id, spec.max_n) {
        Ok(t) => t,
        Err(r) => return r,
    };
    let mut params = Vec::new();
    for n in 1..=spec.max_n {
        for k in 0..=n + 2 {
            for r in -1..=n + 1 {
                for s in -1..=n + 1 {
                    params.push((n, k, r, s));
                }
            }
        }
    }
    let ce = find_first_map(&params, |&(n, k, r, s)| {
        let expected = tables[(n - 1) as usize].count(k, r, s);
        let p = [("n", n), ("k", k), ("r", r), ("s", s)];
        match ctx.m(n, k, r, s) {
            Ok(actual) if actual == expected => None,
            Ok(actual) => Some(counterexample(
                &p,
                &expected,
                &actual,
                "oracle",
                "closed form",
            )),
            Err(e) => Some(error_counterexample(&p, &e, "closed form")),
        }
    });
    report(spec.id, params.len() as u64, ce)
}

fn nk_vs_oracle(ctx: &Ctx, spec: &CheckSpec) -> CheckReport {
    let tables = match oracle_tables(ctx, spec.id, spec.max_n) {
        Ok(t) => t,
        Err(r) => return r,
    };
    let mut params = Vec::new();
    for n in 1..=spec.max_n {
        for k in 0..=n + 2 {
            for r in -1..=n + 1 {
                params.push((n, k, r));
            }
        }
    }
    let ce = find_first_map(&params, |&(n, k, r)| {
        let expected = tables[(n - 1) as usize].count(k, r, r);
        let p = [("n", n), ("k", k), ("r", r)];
        match ctx.nk(n, k, r) {
            Ok(actual) if actual == expected => None,
            Ok(actual) => Some(counterexample(
                &p,
                &expected,
                &actual,
                "oracle diagonal",
                "closed form",
            )),
            Err(e) => Some(error_counterexample(&p, &e, "closed form")),
        }
    });
    report(spec.id, params.len() as u64, ce)
}

fn diag_grid(max_n: i64) -> Vec<(i64, i64, i64)> {
    let mut params = Vec::new();
    for n in 1..=max_n {
        for k in 0..=n + 1 {
            for p in -1..=n + 1 {
                params.push((n, k, p));
            }
        }
    }
    params
}

fn even_sum_definitional(ctx: &Ctx, spec: &CheckSpec) -> CheckReport {
    let params = diag_grid(spec.max_n);
    let ce = find_first_map(&params, |&(n, k, p)| {
        let q = [("n", n), ("k", k), ("p", p)];
        let expected = match closedform::ne_def(DiagQuery::new(n, k, p)) {
            Ok(v) => v,
            Err(e) => return Some(error_counterexample(&q, &e, "definitional sum")),
        };
        match ctx.ne(n, k, p) {
            Ok(actual) if actual == expected => None,
            Ok(actual) => Some(counterexample(
                &q,
                &expected,
                &actual,
                "definitional sum",
                "closed form",
            )),
            Err(e) => Some(error_counterexample(&q, &e, "closed form")),
        }
    });
    report(spec.id, params.len() as u64, ce)
}

fn even_sum_closed(ctx: &Ctx, spec: &CheckSpec) -> CheckReport {
    let mut params = Vec::new();
    for n in 1..=spec.max_n {
        for k in 0..=n - 1 {
            for p in 0..=n {
                params.push((n, k, p));
            }
        }
    }
    let ce = find_first_map(&params, |&(n, k, p)| {
        let q = [("n", n), ("k", k), ("p", p)];
        let nk = match ctx.nk(n, k, p) {
            Ok(v) => v,
            Err(e) => return Some(error_counterexample(&q, &e, "diagonal closed form")),
        };
        let product = nk * n;
        let quotient = match exact_div(&product, &Integer::from(k + 1)) {
            Ok(v) => v,
            Err(e) => return Some(error_counterexample(&q, &e, "divisibility (k+1) | n*N")),
        };
        match ctx.ne(n, k, p) {
            Ok(actual) if actual == quotient => None,
            Ok(actual) => Some(counterexample(
                &q,
                &quotient,
                &actual,
                "n/(k+1) * diagonal",
                "even-sum closed form",
            )),
            Err(e) => Some(error_counterexample(&q, &e, "even-sum closed form")),
        }
    });
    report(spec.id, params.len() as u64, ce)
}

fn odd_sum_definitional(ctx: &Ctx, spec: &CheckSpec) -> CheckReport {
    let params = diag_grid(spec.max_n);
    let ce = find_first_map(&params, |&(n, k, p)| {
        let q = [("n", n), ("k", k), ("p", p)];
        let expected = match closedform::no_def(DiagQuery::new(n, k, p)) {
            Ok(v) => v,
            Err(e) => return Some(error_counterexample(&q, &e, "definitional sum")),
        };
        match ctx.no(n, k, p) {
            Ok(actual) if actual == expected => None,
            Ok(actual) => Some(counterexample(
                &q,
                &expected,
                &actual,
                "definitional sum",
                "closed form",
            )),
            Err(e) => Some(error_counterexample(&q, &e, "closed form")),
        }
    });
    report(spec.id, params.len() as u64, ce)
}

fn odd_sum_closed(ctx: &Ctx, spec: &CheckSpec) -> CheckReport {
    // k stays within support: past k = n-1 the rearranged form would need
    // the diagonal tail at n-1 to absorb the whole squared binomial, which
    // degenerates at n = 1.
    let mut params = Vec::new();
    for n in 1..=spec.max_n {
        for k in 0..=n - 1 {
            for p in -1..=n + 1 {
                params.push((n, k, p));
            }
        }
    }
    let ce = find_first_map(&params, |&(n, k, p)| {
        let q = [("n", n), ("k", k), ("p", p)];
        let half = match ctx.no(n, k, p).and_then(|v| exact_div(&v, &Integer::from(2))) {
            Ok(v) => v,
            Err(e) => return Some(error_counterexample(&q, &e, "half odd sum")),
        };
        let mut lhs = half;
        for i in 0..=k - 2 {
            match ctx.nk(n - 1, i, p) {
                Ok(v) => lhs += v,
                Err(e) => return Some(error_counterexample(&q, &e, "diagonal closed form")),
            }
        }
        let b = binom_memo(n - 1, p);
        let rhs = &b * &b;
        if lhs == rhs {
            None
        } else {
            Some(counterexample(
                &q,
                &rhs,
                &lhs,
                "squared binomial",
                "half odd sum plus diagonal tail",
            ))
        }
    });
    report(spec.id, params.len() as u64, ce)
}

fn row_sums_equal(ctx: &Ctx, spec: &CheckSpec) -> CheckReport {
    let mut params = Vec::new();
    for n in 1..=spec.max_n {
        for k in 0..=n - 1 {
            params.push((n, k));
        }
    }
    let ce = find_first_map(&params, |&(n, k)| {
        let q = [("n", n), ("k", k)];
        let expected = ctx.row_sum(n, k);
        let mut even = Integer::zero();
        let mut odd = Integer::zero();
        for p in 0..=n {
            match ctx.ne(n, k, p) {
                Ok(v) => even += v,
                Err(e) => return Some(error_counterexample(&q, &e, "even sum")),
            }
            match ctx.no(n, k, p) {
                Ok(v) => odd += v,
                Err(e) => return Some(error_counterexample(&q, &e, "odd sum")),
            }
        }
        if even != expected {
            return Some(counterexample(
                &q,
                &expected,
                &even,
                "2^{k+1} C(2n-k-2, n-1)",
                "sum of even counts",
            ));
        }
        if odd != expected {
            return Some(counterexample(
                &q,
                &expected,
                &odd,
                "2^{k+1} C(2n-k-2, n-1)",
                "sum of odd counts",
            ));
        }
        None
    });
    report(spec.id, params.len() as u64, ce)
}

fn nk_row_sum_check(ctx: &Ctx, spec: &CheckSpec) -> CheckReport {
    let mut params = Vec::new();
    for n in 1..=spec.max_n {
        for k in 0..=n - 1 {
            params.push((n, k));
        }
    }
    let ce = find_first_map(&params, |&(n, k)| {
        let q = [("n", n), ("k", k)];
        let expected = match ctx.nk_row_sum(n, k) {
            Ok(v) => v,
            Err(e) => return Some(error_counterexample(&q, &e, "factorial closed form")),
        };
        let mut total = Integer::zero();
        for r in 0..=n {
            match ctx.nk(n, k, r) {
                Ok(v) => total += v,
                Err(e) => return Some(error_counterexample(&q, &e, "diagonal closed form")),
            }
        }
        if total == expected {
            None
        } else {
            Some(counterexample(
                &q,
                &expected,
                &total,
                "factorial closed form",
                "sum over r",
            ))
        }
    });
    report(spec.id, params.len() as u64, ce)
}

fn nk_recurrence(ctx: &Ctx, spec: &CheckSpec) -> CheckReport {
    let mut params = Vec::new();
    for n in 1..=spec.max_n {
        for k in 1..=n - 1 {
            for r in -1..=n + 1 {
                params.push((n, k, r));
            }
        }
    }
    let ce = find_first_map(&params, |&(n, k, r)| {
        let q = [("n", n), ("k", k), ("r", r)];
        let evaluate = || -> Result<(Integer, Integer)> {
            let lhs = ctx.nk(n, k, r)? * ((n - k - 1) * k);
            let rhs = ctx.nk(n, k - 1, r)? * ((n - 2 * k) * (k + 1))
                + (ctx.nk(n - 1, k - 2, r)? + ctx.nk(n - 1, k - 2, r - 1)?) * (k * (k + 1));
            Ok((lhs, rhs))
        };
        match evaluate() {
            Ok((lhs, rhs)) if lhs == rhs => None,
            Ok((lhs, rhs)) => Some(counterexample(
                &q,
                &rhs,
                &lhs,
                "recurrence right side",
                "recurrence left side",
            )),
            Err(e) => Some(error_counterexample(&q, &e, "diagonal closed form")),
        }
    });
    report(spec.id, params.len() as u64, ce)
}

fn n0_relation(ctx: &Ctx, spec: &CheckSpec) -> CheckReport {
    // The one-apart decomposition needs a nonempty interior, so n starts at 2.
    let mut params = Vec::new();
    for n in 2..=spec.max_n {
        for r in -1..=n + 1 {
            params.push((n, r));
        }
    }
    let ce = find_first_map(&params, |&(n, r)| {
        let q = [("n", n), ("r", r)];
        let via_m = match closedform::n0_via_m(n, r) {
            Ok(v) => v,
            Err(e) => return Some(error_counterexample(&q, &e, "one-apart pair route")),
        };
        match ctx.nk(n, 0, r) {
            Ok(actual) if actual == via_m => None,
            Ok(actual) => Some(counterexample(
                &q,
                &via_m,
                &actual,
                "one-apart pair route",
                "diagonal closed form",
            )),
            Err(e) => Some(error_counterexample(&q, &e, "diagonal closed form")),
        }
    });
    report(spec.id, params.len() as u64, ce)
}

fn completeness(ctx: &Ctx, spec: &CheckSpec) -> CheckReport {
    let mut params = Vec::new();
    for n in 1..=spec.max_n {
        for r in -1..=n + 1 {
            for s in -1..=n + 1 {
                params.push((n, r, s));
            }
        }
    }
    let ce = find_first_map(&params, |&(n, r, s)| {
        let q = [("n", n), ("r", r), ("s", s)];
        let mut total = Integer::zero();
        for k in 0..=n - 1 {
            match ctx.m(n, k, r, s) {
                Ok(v) => total += v,
                Err(e) => return Some(error_counterexample(&q, &e, "pair closed form")),
            }
        }
        let expected = binom_memo(n, r) * binom_memo(n, s);
        if total == expected {
            None
        } else {
            Some(counterexample(
                &q,
                &expected,
                &total,
                "C(n,r) C(n,s)",
                "sum over k",
            ))
        }
    });
    report(spec.id, params.len() as u64, ce)
}

fn triangle(cap: usize) -> u64 {
    ((cap + 1) * (cap + 2) / 2) as u64
}

fn m_vs_series(ctx: &Ctx, spec: &CheckSpec) -> CheckReport {
    let cap = spec.cap;
    let f = ctx.f(cap + 2);
    let mut params = Vec::new();
    for k in 0..=cap as u32 {
        for j in 0..=cap as u32 - k {
            params.push((k, j));
        }
    }
    let instances = params.len() as u64 * triangle(cap);
    let ce = find_first_map(&params, |&(k, j)| {
        let gf = series::build_with_f(&f, SeriesId::MDiag { k, j }, cap);
        for i in 0..=cap {
            for jy in 0..=cap - i {
                let expected = gf.coefficient(i, jy).unwrap();
                let (n, r, s) = ((i + jy) as i64, i as i64, i as i64 + j as i64);
                let q = [
                    ("k", k as i64),
                    ("j", j as i64),
                    ("n", n),
                    ("r", r),
                    ("s", s),
                ];
                match ctx.m(n, k as i64, r, s) {
                    Ok(actual) if actual == *expected => {}
                    Ok(actual) => {
                        return Some(counterexample(
                            &q,
                            expected,
                            &actual,
                            "series coefficient",
                            "closed form",
                        ))
                    }
                    Err(e) => return Some(error_counterexample(&q, &e, "closed form")),
                }
            }
        }
        None
    });
    report(spec.id, instances, ce)
}

fn nk_vs_series(ctx: &Ctx, spec: &CheckSpec) -> CheckReport {
    let cap = spec.cap;
    let f = ctx.f(cap + 2);
    let params: Vec<u32> = (1..=cap as u32).collect();
    let instances = params.len() as u64 * triangle(cap);
    let ce = find_first_map(&params, |&t| {
        let gf = series::build_with_f(&f, SeriesId::U0Pow(t), cap);
        for i in 0..=cap {
            for jy in 0..=cap - i {
                let expected = gf.coefficient(i, jy).unwrap();
                let (n, k, r) = ((i + jy) as i64, t as i64 - 1, i as i64);
                let q = [("t", t as i64), ("n", n), ("k", k), ("r", r)];
                match ctx.nk(n, k, r) {
                    Ok(actual) if actual == *expected => {}
                    Ok(actual) => {
                        return Some(counterexample(
                            &q,
                            expected,
                            &actual,
                            "series coefficient",
                            "closed form",
                        ))
                    }
                    Err(e) => return Some(error_counterexample(&q, &e, "closed form")),
                }
            }
        }
        None
    });
    report(spec.id, instances, ce)
}

fn even_odd_vs_series(ctx: &Ctx, spec: &CheckSpec) -> CheckReport {
    let cap = spec.cap;
    let f = ctx.f(cap + 2);
    let mut params = Vec::new();
    for k in 0..=cap as u32 {
        params.push((k, false));
        params.push((k, true));
    }
    let instances = params.len() as u64 * triangle(cap);
    let ce = find_first_map(&params, |&(k, odd)| {
        let id = if odd { SeriesId::No(k) } else { SeriesId::Ne(k) };
        let gf = series::build_with_f(&f, id, cap);
        for i in 0..=cap {
            for jy in 0..=cap - i {
                let expected = gf.coefficient(i, jy).unwrap();
                let (n, p) = ((i + jy) as i64, i as i64);
                let q = [("k", k as i64), ("n", n), ("p", p)];
                let got = if odd {
                    ctx.no(n, k as i64, p)
                } else {
                    ctx.ne(n, k as i64, p)
                };
                let route = if odd { "odd closed form" } else { "even closed form" };
                match got {
                    Ok(actual) if actual == *expected => {}
                    Ok(actual) => {
                        return Some(counterexample(
                            &q,
                            expected,
                            &actual,
                            "series coefficient",
                            route,
                        ))
                    }
                    Err(e) => return Some(error_counterexample(&q, &e, route)),
                }
            }
        }
        None
    });
    report(spec.id, instances, ce)
}

fn lagrange_vs_series(ctx: &Ctx, spec: &CheckSpec) -> CheckReport {
    let cap = spec.cap;
    let f = ctx.f(cap + 2);
    let x_plus_f = BiSeries::var_x(cap).add(&f.truncated(cap));
    let y_plus_f = BiSeries::var_y(cap).add(&f.truncated(cap));
    let f_over_x = f
        .truncated(cap + 1)
        .div_x()
        .expect("f divisible by x")
        .truncated(cap);
    let mut params = Vec::new();
    for a in 0..=4i64 {
        for b in 0..=4i64 {
            for c in 0..=4i64 {
                params.push((a, b, c));
            }
        }
    }
    let instances = params.len() as u64 * triangle(cap);
    let ce = find_first_map(&params, |&(a, b, c)| {
        let product = x_plus_f
            .pow(a as u32)
            .mul(&y_plus_f.pow(b as u32))
            .mul(&f_over_x.pow(c as u32));
        for i in 0..=cap {
            for j in 0..=cap - i {
                let expected = product.coefficient(i, j).unwrap();
                let (l, m) = (i as i64 + c, j as i64);
                let actual = ctx.lagrange(a, b, c, l, m);
                if actual != *expected {
                    let q = [("a", a), ("b", b), ("c", c), ("l", l), ("m", m)];
                    return Some(counterexample(
                        &q,
                        expected,
                        &actual,
                        "direct expansion",
                        "coefficient extractor",
                    ));
                }
            }
        }
        None
    });
    report(spec.id, instances, ce)
}

fn series_functional_eq(ctx: &Ctx, spec: &CheckSpec) -> CheckReport {
    let cap = spec.cap;
    let f = ctx.f(cap);
    let x = BiSeries::var_x(cap);
    let y = BiSeries::var_y(cap);
    let xy = BiSeries::monomial(cap, 1, 1, Integer::from(1));
    let one_minus = BiSeries::one(cap)
        .sub(&x)
        .sub(&y)
        .sub(&f.scale(&Integer::from(2)));

    // (name, residual that must vanish identically)
    let residuals = vec![
        (
            "f - xy - (x+y)f - f^2",
            f.sub(&xy).sub(&x.add(&y).mul(&f)).sub(&f.mul(&f)),
        ),
        (
            "f^2 - (f - xf - yf - xy)",
            f.mul(&f)
                .sub(&f.sub(&x.mul(&f)).sub(&y.mul(&f)).sub(&xy)),
        ),
        (
            "(1-x-y-2f) df/dx - (y+f)",
            one_minus.mul(&f.partial_x()).sub(&y.add(&f)),
        ),
        (
            "(1-x-y-2f) df/dy - (x+f)",
            one_minus.mul(&f.partial_y()).sub(&x.add(&f)),
        ),
        (
            "f(1-x-y-2f) - (xy - f^2)",
            f.mul(&one_minus).sub(&xy.sub(&f.mul(&f))),
        ),
    ];

    let mut instances = 0u64;
    for (name, residual) in &residuals {
        let rcap = residual.cap();
        instances += triangle(rcap);
        for i in 0..=rcap {
            for j in 0..=rcap - i {
                let c = residual.coefficient(i, j).unwrap();
                if !c.is_zero() {
                    let q = [("i", i as i64), ("j", j as i64)];
                    return report(
                        spec.id,
                        instances,
                        Some(counterexample(&q, &Integer::zero(), c, "zero", name)),
                    );
                }
            }
        }
    }

    // Symmetry and divisibility-by-xy of f itself.
    for i in 0..=cap {
        for j in 0..=cap - i {
            instances += 1;
            let c = f.coefficient(i, j).unwrap();
            if *f.coefficient(j, i).unwrap() != *c {
                let q = [("i", i as i64), ("j", j as i64)];
                return report(
                    spec.id,
                    instances,
                    Some(counterexample(
                        &q,
                        c,
                        f.coefficient(j, i).unwrap(),
                        "f(x,y)",
                        "f(y,x)",
                    )),
                );
            }
            if (i == 0 || j == 0) && !c.is_zero() {
                let q = [("i", i as i64), ("j", j as i64)];
                return report(
                    spec.id,
                    instances,
                    Some(counterexample(
                        &q,
                        &Integer::zero(),
                        c,
                        "zero (f divisible by xy)",
                        "f coefficient",
                    )),
                );
            }
        }
    }
    report(spec.id, instances, None)
}

fn square_binom(ctx: &Ctx, spec: &CheckSpec) -> CheckReport {
    let cap = spec.cap;
    let f = ctx.f(cap + 2);
    let plain = series::build_with_f(&f, SeriesId::SquareBinom, cap);
    let shifted = series::build_with_f(&f, SeriesId::SquareBinomShifted, cap);
    let mut instances = 0u64;
    for i in 0..=cap {
        for j in 0..=cap - i {
            instances += 2;
            let n = (i + j) as i64;
            let q = [("n", n), ("p", i as i64)];
            let b = binom_memo(n, i as i64);
            let expected = &b * &b;
            let actual = plain.coefficient(i, j).unwrap();
            if *actual != expected {
                return report(
                    spec.id,
                    instances,
                    Some(counterexample(
                        &q,
                        &expected,
                        actual,
                        "C(n,p)^2",
                        "1/(1-u0) coefficient",
                    )),
                );
            }
            let expected_shift = if n >= 1 {
                let b = binom_memo(n - 1, i as i64);
                &b * &b
            } else {
                Integer::zero()
            };
            let actual_shift = shifted.coefficient(i, j).unwrap();
            if *actual_shift != expected_shift {
                return report(
                    spec.id,
                    instances,
                    Some(counterexample(
                        &q,
                        &expected_shift,
                        actual_shift,
                        "C(n-1,p)^2",
                        "yf/(xy-f^2) coefficient",
                    )),
                );
            }
        }
    }
    report(spec.id, instances, None)
}

/// One mismatch between two tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub k: i64,
    pub r: i64,
    pub s: i64,
    pub left: Integer,
    pub right: Integer,
}

/// Entrywise comparison of two same-n tables over the full (k, r, s)
/// triangle plus the zero-extension fringe.
pub fn diff_tables(left: &BruteTable, right: &BruteTable) -> Vec<Discrepancy> {
    assert_eq!(left.n(), right.n(), "tables must describe the same n");
    let n = left.n() as i64;
    let mut out = Vec::new();
    for k in 0..=n + 2 {
        for r in -1..=n + 1 {
            for s in -1..=n + 1 {
                let (a, b) = (left.count(k, r, s), right.count(k, r, s));
                if a != b {
                    out.push(Discrepancy {
                        k,
                        r,
                        s,
                        left: a,
                        right: b,
                    });
                }
            }
        }
    }
    out
}

/// A table of closed-form pair counts shaped like an oracle table, for
/// [`diff_tables`].
pub fn closed_table(n: u32) -> Result<BruteTable> {
    let mut table = BruteTable::zeroed(n);
    for k in 0..n.max(1) {
        for r in 0..=n {
            for s in 0..=n {
                let v =
                    closedform::m_value(PairQuery::new(n as i64, k as i64, r as i64, s as i64))?;
                let v: u64 = v.try_into().expect("pair count fits in u64 for n <= 31");
                if v != 0 {
                    table.bump(k as usize, r as usize, s as usize, v as i64);
                }
            }
        }
    }
    Ok(table)
}
