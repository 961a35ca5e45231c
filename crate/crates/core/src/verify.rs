//! Executable certification of the identity stock this crate is built on.
//!
//! Every identity gets a stable id, a checker sweeping a parameter grid,
//! and a machine-readable report. Exact identities admit zero tolerance;
//! numeric ones compare independent routes within `margin` times the
//! combined heuristic error bound. Identical inputs (suite, grid, seed,
//! precision) produce byte-identical JSON reports: case ordering is
//! canonical and timing data stays out of the serialized form.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::euler_sums::{harmonic_pole_parts, ones_partial_exact, s_partial_exact, split_np, u_closed,
    u_truncated};
use crate::hyperharmonic::{gen_hh_closed, gen_hh_direct, gen_hh_recurrence, ones_convolution,
    HyperharmonicKey};
use crate::mhn::{mhn, mhsn, shifted_mhn, CompositionIndex};
use crate::symmetric::{bell_harmonic, binomial_via_stirling, complete_sum, elementary_sum,
    stirling1, WeightSequence};
use crate::zeta::{adz_series, bits_for_digits, float_to_decimal, pow10, riemann_zeta};

// ---------------------------------------------------------------------------
// Identity ids, cases, and reports
// ---------------------------------------------------------------------------

/// Stable identifiers of the certified identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum IdentityId {
    #[serde(rename = "EQ_2_1")]
    Eq2_1,
    #[serde(rename = "EQ_2_2")]
    Eq2_2,
    #[serde(rename = "EQ_2_4")]
    Eq2_4,
    #[serde(rename = "EQ_2_6")]
    Eq2_6,
    #[serde(rename = "EQ_2_7")]
    Eq2_7,
    #[serde(rename = "EQ_2_8")]
    Eq2_8,
    #[serde(rename = "EQ_2_12")]
    Eq2_12,
    #[serde(rename = "EQ_2_13")]
    Eq2_13,
    #[serde(rename = "EQ_2_14")]
    Eq2_14,
    #[serde(rename = "EQ_3_1")]
    Eq3_1,
    #[serde(rename = "EQ_3_2")]
    Eq3_2,
    #[serde(rename = "EQ_4_1")]
    Eq4_1,
    #[serde(rename = "EQ_4_5")]
    Eq4_5,
    #[serde(rename = "EQ_4_6")]
    Eq4_6,
    #[serde(rename = "EQ_5_1_DUALITY")]
    Eq5_1Duality,
    #[serde(rename = "EQ_5_1_ROWS")]
    Eq5_1Rows,
    #[serde(rename = "THM_1_1_PARTIAL")]
    Thm1_1Partial,
    #[serde(rename = "THM_1_2_NUMERIC")]
    Thm1_2Numeric,
}

impl IdentityId {
    pub const ALL: [IdentityId; 18] = [
        IdentityId::Eq2_1,
        IdentityId::Eq2_2,
        IdentityId::Eq2_4,
        IdentityId::Eq2_6,
        IdentityId::Eq2_7,
        IdentityId::Eq2_8,
        IdentityId::Eq2_12,
        IdentityId::Eq2_13,
        IdentityId::Eq2_14,
        IdentityId::Eq3_1,
        IdentityId::Eq3_2,
        IdentityId::Eq4_1,
        IdentityId::Eq4_5,
        IdentityId::Eq4_6,
        IdentityId::Eq5_1Duality,
        IdentityId::Eq5_1Rows,
        IdentityId::Thm1_1Partial,
        IdentityId::Thm1_2Numeric,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IdentityId::Eq2_1 => "EQ_2_1",
            IdentityId::Eq2_2 => "EQ_2_2",
            IdentityId::Eq2_4 => "EQ_2_4",
            IdentityId::Eq2_6 => "EQ_2_6",
            IdentityId::Eq2_7 => "EQ_2_7",
            IdentityId::Eq2_8 => "EQ_2_8",
            IdentityId::Eq2_12 => "EQ_2_12",
            IdentityId::Eq2_13 => "EQ_2_13",
            IdentityId::Eq2_14 => "EQ_2_14",
            IdentityId::Eq3_1 => "EQ_3_1",
            IdentityId::Eq3_2 => "EQ_3_2",
            IdentityId::Eq4_1 => "EQ_4_1",
            IdentityId::Eq4_5 => "EQ_4_5",
            IdentityId::Eq4_6 => "EQ_4_6",
            IdentityId::Eq5_1Duality => "EQ_5_1_DUALITY",
            IdentityId::Eq5_1Rows => "EQ_5_1_ROWS",
            IdentityId::Thm1_1Partial => "THM_1_1_PARTIAL",
            IdentityId::Thm1_2Numeric => "THM_1_2_NUMERIC",
        }
    }

    /// The mode in which this identity is checked.
    pub fn mode(self) -> CaseMode {
        match self {
            IdentityId::Eq4_6 | IdentityId::Eq5_1Duality | IdentityId::Eq5_1Rows
            | IdentityId::Thm1_2Numeric => CaseMode::Numeric,
            _ => CaseMode::Exact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseMode {
    Exact,
    Numeric,
}

/// A parameter value of an identity case: an integer or a rendered
/// rational/real.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Text(String),
}

impl From<i64> for ParamValue {
    fn from(v: i64) -> Self {
        ParamValue::Int(v)
    }
}

impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        ParamValue::Text(v.to_owned())
    }
}

/// One parameter point of one identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct IdentityCase {
    pub id: IdentityId,
    pub params: BTreeMap<String, ParamValue>,
    pub mode: CaseMode,
}

impl IdentityCase {
    pub fn new<P, V>(id: IdentityId, params: P, mode: CaseMode) -> Self
    where
        P: IntoIterator<Item = (&'static str, V)>,
        V: Into<ParamValue>,
    {
        Self {
            id,
            params: params
                .into_iter()
                .map(|(k, v)| (k.to_owned(), v.into()))
                .collect(),
            mode,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Discrepancy between the two routes of a case: an exact-zero flag, an
/// exact nonzero magnitude, or a float magnitude with its allowance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Discrepancy {
    ExactZero,
    ExactNonzero { magnitude: String },
    Numeric { value: String, allowed: String },
}

/// Outcome of one identity case. `elapsed` is informational only and is
/// not serialized, so reports stay byte-identical across runs.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    #[serde(flatten)]
    pub case: IdentityCase,
    pub lhs: String,
    pub rhs: String,
    pub discrepancy: Discrepancy,
    pub verdict: Verdict,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

// ---------------------------------------------------------------------------
// Suite configuration
// ---------------------------------------------------------------------------

/// Grid ceilings for the sweeps. Each checker intersects its own criterion
/// grid with these limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridLimits {
    /// upper summation limits (documented maximum 30)
    pub max_n: u32,
    /// index depths (documented maximum 6)
    pub max_depth: u32,
    /// order/shift parameters (documented maximum 6)
    pub max_shift: u32,
    /// series truncation cutoff (documented maximum 10^6)
    pub series_terms: u64,
}

impl Default for GridLimits {
    fn default() -> Self {
        Self {
            max_n: 30,
            max_depth: 6,
            max_shift: 6,
            series_terms: 1_000_000,
        }
    }
}

impl GridLimits {
    pub fn validate(&self) -> Result<()> {
        let checks: [(&'static str, u64, u64, u64); 4] = [
            ("n", u64::from(self.max_n), 1, 30),
            ("depth", u64::from(self.max_depth), 1, 6),
            ("shift", u64::from(self.max_shift), 0, 6),
            ("terms", self.series_terms, 10, 1_000_000),
        ];
        for (name, got, min, max) in checks {
            if got < min || got > max {
                return Err(Error::GridLimit {
                    name,
                    got,
                    min,
                    max,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Exact,
    Numeric,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Suite::Exact),
            "numeric" => Ok(Suite::Numeric),
            "all" => Ok(Suite::All),
            other => Err(Error::UnknownSuite {
                got: other.to_owned(),
            }),
        }
    }
}

impl Suite {
    fn includes(self, mode: CaseMode) -> bool {
        match self {
            Suite::Exact => mode == CaseMode::Exact,
            Suite::Numeric => mode == CaseMode::Numeric,
            Suite::All => true,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub grid: GridLimits,
    pub seed: u64,
    pub margin: f64,
    pub precision: u32,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            suite: Suite::All,
            grid: GridLimits::default(),
            seed: 42,
            margin: 4.0,
            precision: 50,
        }
    }
}

/// Full run result: configuration header plus the canonical report list.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub run_id: String,
    pub suite: Suite,
    pub seed: u64,
    pub precision: u32,
    pub margin: f64,
    pub grid: GridLimits,
    pub reports: Vec<VerificationReport>,
}

impl RunReport {
    pub fn all_passed(&self) -> bool {
        self.reports.iter().all(VerificationReport::passed)
    }

    pub fn failures(&self) -> usize {
        self.reports.iter().filter(|r| !r.passed()).count()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }
}

// ---------------------------------------------------------------------------
// Deterministic random weights
// ---------------------------------------------------------------------------

/// Deterministic pseudo-random rational weights with numerators in
/// `[-9, 9]` and denominators in `[1, 9]`. The same `(len, seed)` pair
/// always produces the same sequence.
pub fn random_weights(len: usize, seed: u64) -> WeightSequence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len)
        .map(|_| {
            let numer: i64 = rng.gen_range(-9..=9);
            let denom: i64 = rng.gen_range(1..=9);
            Rational::from((numer, denom))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Report constructors
// ---------------------------------------------------------------------------

fn exact_outcome(lhs: &Rational, rhs: &Rational) -> (String, String, Discrepancy, Verdict) {
    let discrepancy = if lhs == rhs {
        Discrepancy::ExactZero
    } else {
        Discrepancy::ExactNonzero {
            magnitude: Rational::from(lhs - rhs).abs().to_string(),
        }
    };
    let verdict = if lhs == rhs { Verdict::Pass } else { Verdict::Fail };
    (lhs.to_string(), rhs.to_string(), discrepancy, verdict)
}

fn exact_report(
    id: IdentityId,
    params: Vec<(&'static str, i64)>,
    lhs: &Rational,
    rhs: &Rational,
    started: Instant,
) -> VerificationReport {
    let (lhs, rhs, discrepancy, verdict) = exact_outcome(lhs, rhs);
    VerificationReport {
        case: IdentityCase::new(id, params, CaseMode::Exact),
        lhs,
        rhs,
        discrepancy,
        verdict,
        elapsed: started.elapsed(),
    }
}

#[allow(clippy::too_many_arguments)]
fn numeric_report(
    id: IdentityId,
    params: Vec<(&'static str, i64)>,
    lhs: &Float,
    rhs: &Float,
    allowed: &Float,
    digits: u32,
    extra_ok: bool,
    started: Instant,
) -> VerificationReport {
    let diff = Float::with_val(64, lhs - rhs).abs();
    let verdict = if extra_ok && diff <= *allowed {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    VerificationReport {
        case: IdentityCase::new(id, params, CaseMode::Numeric),
        lhs: float_to_decimal(lhs, digits),
        rhs: float_to_decimal(rhs, digits),
        discrepancy: Discrepancy::Numeric {
            value: float_to_decimal(&diff, 8),
            allowed: float_to_decimal(allowed, 8),
        },
        verdict,
        elapsed: started.elapsed(),
    }
}

fn panicked_report(id: IdentityId, params: Vec<(&'static str, i64)>, mode: CaseMode) -> VerificationReport {
    VerificationReport {
        case: IdentityCase::new(id, params, mode),
        lhs: "<checker panicked>".to_owned(),
        rhs: String::new(),
        discrepancy: Discrepancy::ExactNonzero {
            magnitude: "unknown".to_owned(),
        },
        verdict: Verdict::Fail,
        elapsed: Duration::ZERO,
    }
}

/// Runs one case body, isolating panics so a broken case cannot stop the
/// rest of the suite.
fn guarded<F>(id: IdentityId, params: Vec<(&'static str, i64)>, mode: CaseMode, body: F) -> VerificationReport
where
    F: FnOnce() -> VerificationReport,
{
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(report) => report,
        Err(_) => panicked_report(id, params, mode),
    }
}

// ---------------------------------------------------------------------------
// Individual checkers
// ---------------------------------------------------------------------------

/// Stirling numbers of the first kind as rescaled all-ones multiple
/// harmonic numbers: `[n, k] = (n-1)! zeta_{n-1}({1}_{k-1})`.
fn check_stirling_mhn(config: &SuiteConfig) -> Vec<VerificationReport> {
    let max_n = config.grid.max_n.min(30);
    let mut jobs = Vec::new();
    for n in 1..=max_n {
        for k in 1..=n {
            jobs.push((n, k));
        }
    }
    jobs.into_par_iter()
        .map(|(n, k)| {
            let params = vec![("k", i64::from(k)), ("n", i64::from(n))];
            guarded(IdentityId::Eq2_1, params.clone(), CaseMode::Exact, || {
                let started = Instant::now();
                let lhs = Rational::from(stirling1(n, k));
                let rhs = Rational::from(Integer::factorial(n - 1))
                    * mhn(n - 1, &CompositionIndex::ones(k as usize - 1)).expect("ones");
                exact_report(IdentityId::Eq2_1, params, &lhs, &rhs, started)
            })
        })
        .collect()
}

/// Generalized hyperharmonic recurrence route vs the direct nested sum.
fn check_gen_hh_recurrence(config: &SuiteConfig) -> Vec<VerificationReport> {
    hyperharmonic_grid(config, IdentityId::Eq2_2, |key| {
        (gen_hh_recurrence(key), gen_hh_direct(key).expect("k >= 1"))
    })
}

/// Closed form of the generalized hyperharmonic numbers vs the direct
/// nested sum, plus the binomial-times-shifted-sum identity.
fn check_gen_hh_closed(config: &SuiteConfig) -> Vec<VerificationReport> {
    hyperharmonic_grid(config, IdentityId::Eq2_14, |key| {
        let closed = gen_hh_closed(key.n, key.m - 1, key.k).expect("valid key");
        let direct = gen_hh_direct(key).expect("k >= 1");
        // fold in the binomial route: C(n+r, r) * shifted all-ones sum
        let binom = Integer::from(u64::from(key.n) + u64::from(key.m) - 1).binomial(key.m - 1);
        let shifted = Rational::from(binom) * shifted_mhn(key.n, key.k, key.m - 1);
        let lhs = if closed == shifted {
            closed
        } else {
            // surface a binomial-route mismatch as a failed case
            shifted
        };
        (lhs, direct)
    })
}

fn hyperharmonic_grid<F>(
    config: &SuiteConfig,
    id: IdentityId,
    eval: F,
) -> Vec<VerificationReport>
where
    F: Fn(&HyperharmonicKey) -> (Rational, Rational) + Sync,
{
    let max_n = config.grid.max_n.min(10);
    let max_m = config.grid.max_depth.min(5);
    let max_k = config.grid.max_depth.min(5);
    let mut jobs = Vec::new();
    for n in 1..=max_n {
        for m in 1..=max_m {
            for k in 1..=max_k {
                jobs.push((n, m, k));
            }
        }
    }
    jobs.into_par_iter()
        .map(|(n, m, k)| {
            let params = vec![("k", i64::from(k)), ("m", i64::from(m)), ("n", i64::from(n))];
            guarded(id, params.clone(), CaseMode::Exact, || {
                let started = Instant::now();
                let key = HyperharmonicKey::new(n, m, k).expect("positive");
                let (lhs, rhs) = eval(&key);
                exact_report(id, params, &lhs, &rhs, started)
            })
        })
        .collect()
}

/// Star all-ones values as Bell polynomials:
/// `zeta_n^*({1}_m) = Y_m(n)/m!`.
fn check_star_ones_bell(config: &SuiteConfig) -> Vec<VerificationReport> {
    let max_n = config.grid.max_n.min(20);
    let max_m = config.grid.max_depth.min(6);
    let mut reports = Vec::new();
    for n in 0..=max_n {
        for m in 0..=max_m {
            let params = vec![("m", i64::from(m)), ("n", i64::from(n))];
            reports.push(guarded(IdentityId::Eq2_6, params.clone(), CaseMode::Exact, || {
                let started = Instant::now();
                let lhs = mhsn(n, &CompositionIndex::ones(m as usize)).expect("ones");
                let rhs = bell_harmonic(m as usize, n)
                    / Rational::from(Integer::factorial(m));
                exact_report(IdentityId::Eq2_6, params, &lhs, &rhs, started)
            }));
        }
    }
    reports
}

/// The alternating convolution of elementary and complete symmetric sums
/// vanishes: `sum_{i+j=m} (-1)^i e_i h_j = 0` for `m >= 1`.
fn check_symmetric_convolution(config: &SuiteConfig) -> Vec<VerificationReport> {
    let max_len = 8usize;
    let max_m = config.grid.max_depth.min(6);
    let mut reports = Vec::new();
    for len in 0..=max_len {
        let weights = random_weights(len, config.seed.wrapping_add(len as u64));
        for m in 1..=max_m {
            let params = vec![("len", len as i64), ("m", i64::from(m))];
            let weights = weights.clone();
            reports.push(guarded(IdentityId::Eq2_7, params.clone(), CaseMode::Exact, || {
                let started = Instant::now();
                let mut acc = Rational::new();
                for i in 0..=m as usize {
                    let term = elementary_sum(i, &weights) * complete_sum(m as usize - i, &weights);
                    if i % 2 == 0 {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
                exact_report(IdentityId::Eq2_7, params, &acc, &Rational::new(), started)
            }));
        }
    }
    reports
}

/// Shifted all-ones sums as convolutions of star and plain values:
/// `sum 1/((k_1+r)...(k_m+r)) = sum_{i+j=m} (-1)^i zeta_r^*({1}_i)
/// zeta_{n+r}({1}_j)`.
fn check_shifted_ones_convolution(config: &SuiteConfig) -> Vec<VerificationReport> {
    let max_n = config.grid.max_n.min(12);
    let max_m = config.grid.max_depth.min(6);
    let max_r = config.grid.max_shift.min(6);
    let mut jobs = Vec::new();
    for n in 1..=max_n {
        for m in 1..=max_m {
            for r in 0..=max_r {
                jobs.push((n, m, r));
            }
        }
    }
    jobs.into_par_iter()
        .map(|(n, m, r)| {
            let params = vec![("m", i64::from(m)), ("n", i64::from(n)), ("r", i64::from(r))];
            guarded(IdentityId::Eq2_8, params.clone(), CaseMode::Exact, || {
                let started = Instant::now();
                let lhs = shifted_mhn(n, m, r);
                let rhs = ones_convolution(n, r, m);
                exact_report(IdentityId::Eq2_8, params, &lhs, &rhs, started)
            })
        })
        .collect()
}

/// Both displays of the constant-exponent convolution theorem for integer
/// exponents: strict sums against star/plain convolutions and weak sums
/// against plain/star convolutions.
fn exponent_convolution_exact(p: u32, n: u32, m: u32, r: u32) -> (Rational, Rational, Rational, Rational) {
    let weights: WeightSequence = (1..=u64::from(n))
        .map(|j| Rational::from((Integer::from(1), Integer::from(j + u64::from(r)).pow(p))))
        .collect();
    let strict_lhs = elementary_sum(m as usize, &weights);
    let weak_lhs = complete_sum(m as usize, &weights);
    let mut strict_rhs = Rational::new();
    let mut weak_rhs = Rational::new();
    for i in 0..=m {
        let j = m - i;
        let star_r = mhsn(r, &CompositionIndex::repeated(p, i as usize)).expect("p >= 1");
        let plain_r = mhn(r, &CompositionIndex::repeated(p, i as usize)).expect("p >= 1");
        let plain_nr = mhn(n + r, &CompositionIndex::repeated(p, j as usize)).expect("p >= 1");
        let star_nr = mhsn(n + r, &CompositionIndex::repeated(p, j as usize)).expect("p >= 1");
        let strict_term = star_r * plain_nr;
        let weak_term = plain_r * star_nr;
        if i % 2 == 0 {
            strict_rhs += strict_term;
            weak_rhs += weak_term;
        } else {
            strict_rhs -= strict_term;
            weak_rhs -= weak_term;
        }
    }
    (strict_lhs, strict_rhs, weak_lhs, weak_rhs)
}

/// Exponent of a constant-exponent convolution check: a positive integer
/// (checked exactly) or a positive real (checked numerically at 50 digits).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConvolutionExponent {
    Integer(u32),
    Real(f64),
}

/// Checks both displays of the constant-exponent convolution theorem at
/// one parameter point; returns the strict-display report followed by the
/// weak-display one.
pub fn check_exponent_convolution(p: ConvolutionExponent, n: u32, m: u32, r: u32) -> Result<Vec<VerificationReport>> {
    match p {
        ConvolutionExponent::Integer(0) => Err(Error::PositiveRequired { name: "p", got: 0 }),
        ConvolutionExponent::Real(v) if v <= 0.0 => Err(Error::PositiveRequired {
            name: "p",
            got: 0,
        }),
        ConvolutionExponent::Integer(p) => {
            let started = Instant::now();
            let (sl, sr, wl, wr) = exponent_convolution_exact(p, n, m, r);
            let params = vec![
                ("m", i64::from(m)),
                ("n", i64::from(n)),
                ("p", i64::from(p)),
                ("r", i64::from(r)),
            ];
            Ok(vec![
                exact_report(IdentityId::Eq2_12, params.clone(), &sl, &sr, started),
                exact_report(IdentityId::Eq2_13, params, &wl, &wr, started),
            ])
        }
        ConvolutionExponent::Real(p) => {
            let started = Instant::now();
            let digits = 50u32;
            let bits = bits_for_digits(digits + 10);
            let pf = Float::with_val(bits, p);
            let pow_inv = |base: u64| -> Float {
                Float::with_val(bits, base).pow(Float::with_val(bits, -&pf))
            };
            let elementary_f = |depth: usize, weights: &[Float]| -> Float {
                let mut state = vec![Float::with_val(bits, 0); depth + 1];
                state[0] = Float::with_val(bits, 1);
                for w in weights {
                    for d in (1..=depth).rev() {
                        let add = Float::with_val(bits, &state[d - 1] * w);
                        state[d] += add;
                    }
                }
                state[depth].clone()
            };
            let complete_f = |depth: usize, weights: &[Float]| -> Float {
                let mut state = vec![Float::with_val(bits, 0); depth + 1];
                state[0] = Float::with_val(bits, 1);
                for w in weights {
                    for d in 1..=depth {
                        let add = Float::with_val(bits, &state[d - 1] * w);
                        state[d] += add;
                    }
                }
                state[depth].clone()
            };
            let shifted: Vec<Float> =
                (1..=u64::from(n)).map(|j| pow_inv(j + u64::from(r))).collect();
            let up_to_r: Vec<Float> = (1..=u64::from(r)).map(pow_inv).collect();
            let up_to_nr: Vec<Float> = (1..=u64::from(n + r)).map(pow_inv).collect();
            let strict_lhs = elementary_f(m as usize, &shifted);
            let weak_lhs = complete_f(m as usize, &shifted);
            let mut strict_rhs = Float::with_val(bits, 0);
            let mut weak_rhs = Float::with_val(bits, 0);
            for i in 0..=m as usize {
                let j = m as usize - i;
                let strict_term = Float::with_val(
                    bits,
                    complete_f(i, &up_to_r) * elementary_f(j, &up_to_nr),
                );
                let weak_term = Float::with_val(
                    bits,
                    elementary_f(i, &up_to_r) * complete_f(j, &up_to_nr),
                );
                if i % 2 == 0 {
                    strict_rhs += strict_term;
                    weak_rhs += weak_term;
                } else {
                    strict_rhs -= strict_term;
                    weak_rhs -= weak_term;
                }
            }
            let tolerance = pow10(-40);
            let rendered = format!("{p}");
            let params = |id: IdentityId| {
                let mut map = BTreeMap::new();
                map.insert("m".to_owned(), ParamValue::Int(i64::from(m)));
                map.insert("n".to_owned(), ParamValue::Int(i64::from(n)));
                map.insert("p".to_owned(), ParamValue::Text(rendered.clone()));
                map.insert("r".to_owned(), ParamValue::Int(i64::from(r)));
                IdentityCase {
                    id,
                    params: map,
                    mode: CaseMode::Numeric,
                }
            };
            let make = |id: IdentityId, lhs: &Float, rhs: &Float| {
                let diff = Float::with_val(64, lhs - rhs).abs();
                VerificationReport {
                    case: params(id),
                    lhs: float_to_decimal(lhs, digits),
                    rhs: float_to_decimal(rhs, digits),
                    discrepancy: Discrepancy::Numeric {
                        value: float_to_decimal(&diff, 8),
                        allowed: float_to_decimal(&tolerance, 8),
                    },
                    verdict: if diff <= tolerance {
                        Verdict::Pass
                    } else {
                        Verdict::Fail
                    },
                    elapsed: started.elapsed(),
                }
            };
            Ok(vec![
                make(IdentityId::Eq2_12, &strict_lhs, &strict_rhs),
                make(IdentityId::Eq2_13, &weak_lhs, &weak_rhs),
            ])
        }
    }
}

fn check_constant_exponent_convolution(config: &SuiteConfig, weak: bool) -> Vec<VerificationReport> {
    let id = if weak { IdentityId::Eq2_13 } else { IdentityId::Eq2_12 };
    let max_n = config.grid.max_n.min(8);
    let max_m = config.grid.max_depth.min(4);
    let max_r = config.grid.max_shift.min(4);
    let mut jobs = Vec::new();
    for p in 1..=3u32 {
        for n in 1..=max_n {
            for m in 1..=max_m {
                for r in 0..=max_r {
                    jobs.push((p, n, m, r));
                }
            }
        }
    }
    jobs.into_par_iter()
        .map(|(p, n, m, r)| {
            let params = vec![
                ("m", i64::from(m)),
                ("n", i64::from(n)),
                ("p", i64::from(p)),
                ("r", i64::from(r)),
            ];
            guarded(id, params.clone(), CaseMode::Exact, || {
                let started = Instant::now();
                let (sl, sr, wl, wr) = exponent_convolution_exact(p, n, m, r);
                if weak {
                    exact_report(id, params, &wl, &wr, started)
                } else {
                    exact_report(id, params, &sl, &sr, started)
                }
            })
        })
        .collect()
}

/// Binomial coefficients recovered from a Stirling row.
fn check_binomial_from_stirling(config: &SuiteConfig) -> Vec<VerificationReport> {
    let max_n = config.grid.max_n.min(10);
    let mut reports = Vec::new();
    for n in 0..=u64::from(max_n) {
        for r in 0..=10u32 {
            let params = vec![("n", n as i64), ("r", i64::from(r))];
            reports.push(guarded(IdentityId::Eq3_1, params.clone(), CaseMode::Exact, || {
                let started = Instant::now();
                let lhs = Rational::from(binomial_via_stirling(n, r));
                let rhs = Rational::from(Integer::from(n + u64::from(r)).binomial(r));
                exact_report(IdentityId::Eq3_1, params, &lhs, &rhs, started)
            }));
        }
    }
    reports
}

/// Generalized hyperharmonic numbers through the Stirling-row expansion of
/// the binomial prefactor.
fn check_stirling_expansion_of_hyperharmonic(config: &SuiteConfig) -> Vec<VerificationReport> {
    let max_n = config.grid.max_n.min(10);
    let max_k = config.grid.max_depth.min(4);
    let max_r = config.grid.max_shift.min(4);
    let mut jobs = Vec::new();
    for n in 1..=max_n {
        for k in 1..=max_k {
            for r in 0..=max_r {
                jobs.push((n, k, r));
            }
        }
    }
    jobs.into_par_iter()
        .map(|(n, k, r)| {
            let params = vec![("k", i64::from(k)), ("n", i64::from(n)), ("r", i64::from(r))];
            guarded(IdentityId::Eq3_2, params.clone(), CaseMode::Exact, || {
                let started = Instant::now();
                let key = HyperharmonicKey::new(n, r + 1, k).expect("positive");
                let lhs = gen_hh_direct(&key).expect("k >= 1");
                let convolution = ones_convolution(n, r, k);
                let mut sum = Rational::new();
                for l in 1..=r + 1 {
                    sum += Rational::from(stirling1(r + 1, l))
                        * Rational::from(Integer::from(u64::from(n)).pow(l - 1));
                }
                let rhs = sum * convolution / Rational::from(Integer::factorial(r));
                exact_report(IdentityId::Eq3_2, params, &lhs, &rhs, started)
            })
        })
        .collect()
}

/// Exact partial-sum form of the Euler-sum closed form: for every cutoff
/// `N`, the truncated Euler sum equals the Stirling/star convolution of
/// truncated shifted series.
fn check_partial_sum_theorem(config: &SuiteConfig) -> Vec<VerificationReport> {
    let n_terms = config.grid.series_terms.min(200);
    let mut jobs = Vec::new();
    for k in 1..=4u32 {
        for r in 0..=3u32 {
            for p in (r + 2)..=6u32 {
                jobs.push((k, r, p));
            }
        }
    }
    jobs.into_par_iter()
        .map(|(k, r, p)| {
            let params = vec![
                ("N", n_terms as i64),
                ("k", i64::from(k)),
                ("p", i64::from(p)),
                ("r", i64::from(r)),
            ];
            guarded(IdentityId::Thm1_1Partial, params.clone(), CaseMode::Exact, || {
                let started = Instant::now();
                let lhs = s_partial_exact(k, r + 1, p, n_terms);
                let mut rhs = Rational::new();
                for l in 1..=r + 1 {
                    let stirling = stirling1(r + 1, l);
                    if stirling == 0 {
                        continue;
                    }
                    let mut convolution = Rational::new();
                    for i in 0..=k {
                        let j = k - i;
                        let star = mhsn(r, &CompositionIndex::ones(i as usize)).expect("ones");
                        if star == 0 {
                            continue;
                        }
                        let series = ones_partial_exact(false, j, r, p + 1 - l, &[], n_terms);
                        let term = star * series;
                        if i % 2 == 0 {
                            convolution += term;
                        } else {
                            convolution -= term;
                        }
                    }
                    rhs += Rational::from(stirling) * convolution;
                }
                rhs /= Rational::from(Integer::factorial(r));
                exact_report(IdentityId::Thm1_1Partial, params, &lhs, &rhs, started)
            })
        })
        .collect()
}

/// Closed vs truncated shifted-ones series within the margin.
fn check_u_closed_numeric(config: &SuiteConfig) -> Vec<VerificationReport> {
    let n_terms = config.grid.series_terms;
    let digits = config.precision;
    let margin = config.margin;
    let mut jobs = Vec::new();
    for m in 1..=3u32 {
        for r in 0..=3u32 {
            for p in 2..=5u32 {
                jobs.push((m, r, p));
            }
        }
    }
    jobs.into_par_iter()
        .map(|(m, r, p)| {
            let params = vec![
                ("N", n_terms as i64),
                ("m", i64::from(m)),
                ("p", i64::from(p)),
                ("r", i64::from(r)),
            ];
            guarded(IdentityId::Thm1_2Numeric, params.clone(), CaseMode::Numeric, || {
                let started = Instant::now();
                let closed = u_closed(m, r, p, digits).expect("params in range");
                let trunc = u_truncated(m, r, p, n_terms, digits).expect("params in range");
                let allowed = Float::with_val(
                    64,
                    Float::with_val(64, trunc.error_bound() + closed.error_bound()) * margin,
                );
                numeric_report(
                    IdentityId::Thm1_2Numeric,
                    params,
                    closed.value(),
                    trunc.value(),
                    &allowed,
                    digits,
                    true,
                    started,
                )
            })
        })
        .collect()
}

/// Exact equivalence of the Bell-polynomial and star-harmonic renderings
/// of the closed harmonic/pole series.
fn check_bell_star_equivalence(config: &SuiteConfig) -> Vec<VerificationReport> {
    let _ = config;
    let mut reports = Vec::new();
    for p in 2..=6u32 {
        for k in 1..=10u32 {
            let params = vec![("k", i64::from(k)), ("p", i64::from(p))];
            reports.push(guarded(IdentityId::Eq2_4, params.clone(), CaseMode::Exact, || {
                let started = Instant::now();
                let star_hi = mhsn(k, &CompositionIndex::ones(p as usize)).expect("ones");
                let star_lo = mhsn(k, &CompositionIndex::ones(p as usize - 1)).expect("ones");
                let lhs = bell_harmonic(p as usize, k) / Rational::from(p)
                    - bell_harmonic(p as usize - 1, k) / Rational::from(k);
                let rhs = Rational::from(Integer::factorial(p - 1))
                    * (star_hi - star_lo / Rational::from(k));
                exact_report(IdentityId::Eq2_4, params, &lhs, &rhs, started)
            }));
        }
    }
    reports
}

/// Exact shift decomposition of the truncated shifted-ones series into the
/// unshifted head plus pole-coupled corrections.
fn check_shift_decomposition(config: &SuiteConfig) -> Vec<VerificationReport> {
    let n_terms = config.grid.series_terms.min(200);
    let max_m = config.grid.max_depth.min(4);
    let max_r = config.grid.max_shift.min(4);
    let mut jobs = Vec::new();
    for m in 1..=max_m {
        for r in 0..=max_r {
            for p in 2..=3u32 {
                jobs.push((m, r, p));
            }
        }
    }
    jobs.into_par_iter()
        .map(|(m, r, p)| {
            let params = vec![
                ("N", n_terms as i64),
                ("m", i64::from(m)),
                ("p", i64::from(p)),
                ("r", i64::from(r)),
            ];
            guarded(IdentityId::Eq4_1, params.clone(), CaseMode::Exact, || {
                let started = Instant::now();
                let lhs = ones_partial_exact(false, m, r, p, &[], n_terms);
                let mut rhs = ones_partial_exact(false, m, 0, p, &[], n_terms);
                for c in 1..=u64::from(r) {
                    rhs += ones_partial_exact(false, m - 1, c as u32 - 1, p, &[c], n_terms);
                }
                exact_report(IdentityId::Eq4_1, params, &lhs, &rhs, started)
            })
        })
        .collect()
}

/// Recombination certificate for the power/pole split.
fn check_split_recombination(config: &SuiteConfig) -> Vec<VerificationReport> {
    let max_r = config.grid.max_shift.clamp(1, 6);
    let mut reports = Vec::new();
    for p in 2..=6u32 {
        for r in 1..=u64::from(max_r) {
            let params = vec![("p", i64::from(p)), ("r", r as i64)];
            reports.push(guarded(IdentityId::Eq4_5, params.clone(), CaseMode::Exact, || {
                let started = Instant::now();
                let split = split_np(p, r).expect("r >= 1");
                let mut lhs = Rational::new();
                let mut rhs = Rational::new();
                for n in 1..=u64::from(2 * p + 2) {
                    lhs += split.recombine_at(n);
                    rhs += split.target_at(n);
                }
                exact_report(IdentityId::Eq4_5, params, &lhs, &rhs, started)
            }));
        }
    }
    reports
}

/// Truncated harmonic/pole series against the closed star-harmonic right
/// side, within the margin.
fn check_harmonic_pole_numeric(config: &SuiteConfig) -> Vec<VerificationReport> {
    let n_terms = config.grid.series_terms;
    let digits = config.precision;
    let margin = config.margin;
    let mut jobs = Vec::new();
    for p in 2..=4u32 {
        for k in 1..=5u64 {
            jobs.push((p, k));
        }
    }
    jobs.into_par_iter()
        .map(|(p, k)| {
            let params = vec![("N", n_terms as i64), ("k", k as i64), ("p", i64::from(p))];
            guarded(IdentityId::Eq4_6, params.clone(), CaseMode::Numeric, || {
                let started = Instant::now();
                let parts = harmonic_pole_parts(p, k, n_terms, digits).expect("params in range");
                let allowed = Float::with_val(64, &parts.tail_bound * margin);
                numeric_report(
                    IdentityId::Eq4_6,
                    params,
                    &parts.truncated,
                    &parts.closed,
                    &allowed,
                    digits,
                    parts.renderings_agree,
                    started,
                )
            })
        })
        .collect()
}

/// Symmetry of the height-one multiple zeta table under index swap.
fn check_duality(config: &SuiteConfig) -> Vec<VerificationReport> {
    let digits = config.precision;
    let weight = 12u32;
    let started = Instant::now();
    let table = match adz_series(weight, digits) {
        Ok(t) => t,
        Err(_) => unreachable!("weight >= 2"),
    };
    let tolerance = pow10(-(digits as i32 - 5));
    let mut reports = Vec::new();
    for i in 1..weight {
        for j in i..=(weight - i) {
            if i == j {
                continue;
            }
            let params = vec![("i", i64::from(i)), ("j", i64::from(j))];
            let a = table.coefficient(i, j).expect("in table").clone();
            let b = table.coefficient(j, i).expect("in table").clone();
            reports.push(numeric_report(
                IdentityId::Eq5_1Duality,
                params,
                &a,
                &b,
                &tolerance,
                digits,
                true,
                started,
            ));
        }
    }
    reports
}

/// Boundary row of the height-one table: coefficient `(1, m)` equals
/// `zeta(m+1)`.
fn check_adz_boundary(config: &SuiteConfig) -> Vec<VerificationReport> {
    let digits = config.precision;
    let weight = 12u32;
    let started = Instant::now();
    let table = match adz_series(weight, digits) {
        Ok(t) => t,
        Err(_) => unreachable!("weight >= 2"),
    };
    let tolerance = pow10(-(digits as i32 - 5));
    let mut reports = Vec::new();
    for m in 1..weight {
        let params = vec![("m", i64::from(m))];
        let lhs = table.coefficient(1, m).expect("in table").clone();
        let rhs = riemann_zeta(m + 1, digits).expect("s >= 2");
        reports.push(numeric_report(
            IdentityId::Eq5_1Rows,
            params,
            &lhs,
            rhs.value(),
            &tolerance,
            digits,
            true,
            started,
        ));
    }
    reports
}

// ---------------------------------------------------------------------------
// The suite driver
// ---------------------------------------------------------------------------

fn run_id(config: &SuiteConfig) -> String {
    let suite = match config.suite {
        Suite::Exact => "exact",
        Suite::Numeric => "numeric",
        Suite::All => "all",
    };
    format!(
        "{suite}-seed{}-p{}-m{}-n{}-d{}-r{}-N{}",
        config.seed,
        config.precision,
        config.margin,
        config.grid.max_n,
        config.grid.max_depth,
        config.grid.max_shift,
        config.grid.series_terms,
    )
}

/// Executes every registered identity checker selected by the suite over
/// its grid, in parallel, and returns the reports in canonical order
/// (identity id, then parameters). A failing or panicking case never
/// prevents the remaining cases from running.
pub fn run_suite(config: &SuiteConfig) -> Result<RunReport> {
    config.grid.validate()?;
    if config.margin <= 0.0 || config.margin.is_nan() {
        return Err(Error::InvalidMargin {
            got: config.margin.to_string(),
        });
    }
    type Checker = fn(&SuiteConfig) -> Vec<VerificationReport>;
    let checkers: [(IdentityId, Checker); 18] = [
        (IdentityId::Eq2_1, check_stirling_mhn),
        (IdentityId::Eq2_2, check_gen_hh_recurrence),
        (IdentityId::Eq2_4, check_bell_star_equivalence),
        (IdentityId::Eq2_6, check_star_ones_bell),
        (IdentityId::Eq2_7, check_symmetric_convolution),
        (IdentityId::Eq2_8, check_shifted_ones_convolution),
        (IdentityId::Eq2_12, |c| {
            check_constant_exponent_convolution(c, false)
        }),
        (IdentityId::Eq2_13, |c| {
            check_constant_exponent_convolution(c, true)
        }),
        (IdentityId::Eq2_14, check_gen_hh_closed),
        (IdentityId::Eq3_1, check_binomial_from_stirling),
        (IdentityId::Eq3_2, check_stirling_expansion_of_hyperharmonic),
        (IdentityId::Eq4_1, check_shift_decomposition),
        (IdentityId::Eq4_5, check_split_recombination),
        (IdentityId::Eq4_6, check_harmonic_pole_numeric),
        (IdentityId::Eq5_1Duality, check_duality),
        (IdentityId::Eq5_1Rows, check_adz_boundary),
        (IdentityId::Thm1_1Partial, check_partial_sum_theorem),
        (IdentityId::Thm1_2Numeric, check_u_closed_numeric),
    ];
    let selected: Vec<&(IdentityId, Checker)> = checkers
        .iter()
        .filter(|(id, _)| config.suite.includes(id.mode()))
        .collect();
    let mut reports: Vec<VerificationReport> = selected
        .par_iter()
        .flat_map(|(_, checker)| checker(config))
        .collect();
    reports.sort_by(|a, b| a.case.cmp(&b.case));

    // self-test: every selected identity must have produced cases
    for (id, _) in &checkers {
        if config.suite.includes(id.mode()) && !reports.iter().any(|r| r.case.id == *id) {
            return Err(Error::HarnessIncomplete { id: id.as_str() });
        }
    }
    Ok(RunReport {
        run_id: run_id(config),
        suite: config.suite,
        seed: config.seed,
        precision: config.precision,
        margin: config.margin,
        grid: config.grid,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config(suite: Suite) -> SuiteConfig {
        SuiteConfig {
            suite,
            grid: GridLimits {
                max_n: 6,
                max_depth: 3,
                max_shift: 2,
                series_terms: 2_000,
            },
            seed: 42,
            margin: 4.0,
            precision: 30,
        }
    }

    #[test]
    fn random_weights_are_deterministic() {
        assert!(random_weights(0, 3).is_empty());
        let a = random_weights(5, 7);
        let b = random_weights(5, 7);
        assert_eq!(a, b);
        let c = random_weights(5, 8);
        assert_ne!(a, c);
        for w in a.weights() {
            assert!(*w >= -9 && *w <= 9);
        }
    }

    #[test]
    fn exact_suite_passes_on_reduced_grid() {
        let report = run_suite(&small_config(Suite::Exact)).unwrap();
        assert!(report.all_passed(), "{} failures", report.failures());
        // canonical ordering
        let mut sorted = report.reports.clone();
        sorted.sort_by(|a, b| a.case.cmp(&b.case));
        assert!(report
            .reports
            .iter()
            .zip(&sorted)
            .all(|(x, y)| x.case == y.case));
    }

    #[test]
    fn numeric_suite_passes_on_reduced_grid() {
        let report = run_suite(&small_config(Suite::Numeric)).unwrap();
        assert!(report.all_passed(), "{} failures", report.failures());
    }

    #[test]
    fn degenerate_grid_still_passes() {
        let mut config = small_config(Suite::Exact);
        config.grid.max_n = 1;
        config.grid.max_depth = 1;
        config.grid.max_shift = 0;
        config.grid.series_terms = 10;
        let report = run_suite(&config).unwrap();
        assert!(report.all_passed(), "{} failures", report.failures());
    }

    #[test]
    fn suite_reports_are_byte_identical() {
        let config = small_config(Suite::Exact);
        let a = run_suite(&config).unwrap().to_json();
        let b = run_suite(&config).unwrap().to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn every_selected_identity_appears() {
        let report = run_suite(&small_config(Suite::All)).unwrap();
        for id in IdentityId::ALL {
            assert!(
                report.reports.iter().any(|r| r.case.id == id),
                "missing {}",
                id.as_str()
            );
        }
    }

    #[test]
    fn tight_margin_forces_failures_without_aborting() {
        let mut config = small_config(Suite::Numeric);
        config.margin = 1e-12;
        let report = run_suite(&config).unwrap();
        assert!(report.failures() > 0);
        // isolation: all cases still executed
        assert!(report.reports.len() > report.failures());
    }

    #[test]
    fn grid_limits_are_validated() {
        let mut config = small_config(Suite::Exact);
        config.grid.max_n = 31;
        assert!(matches!(
            run_suite(&config),
            Err(Error::GridLimit { name: "n", .. })
        ));
        config.grid.max_n = 30;
        config.grid.series_terms = 2_000_000;
        assert!(matches!(
            run_suite(&config),
            Err(Error::GridLimit { name: "terms", .. })
        ));
    }

    #[test]
    fn exponent_convolution_exact_and_numeric() {
        // integer exponent: exact pass, and p = 1 reduces to the shifted
        // ones convolution
        for (p, n, m, r) in [(1u32, 4u32, 2u32, 2u32), (2, 4, 2, 2), (3, 3, 2, 1)] {
            let reports = check_exponent_convolution(ConvolutionExponent::Integer(p), n, m, r).unwrap();
            assert_eq!(reports.len(), 2);
            assert!(reports.iter().all(VerificationReport::passed), "p={p}");
        }
        // real exponent: numeric pass at 1e-40
        let reports = check_exponent_convolution(ConvolutionExponent::Real(1.5), 3, 2, 1).unwrap();
        assert!(reports.iter().all(VerificationReport::passed));
        assert!(check_exponent_convolution(ConvolutionExponent::Integer(0), 3, 2, 1).is_err());
        assert!(check_exponent_convolution(ConvolutionExponent::Real(-0.5), 3, 2, 1).is_err());
    }

    #[test]
    fn shifted_weight_convolutions() {
        // strict and weak shifted sums over a_{k+r} as convolutions of the
        // prefix/full symmetric sums, for seeded random rational weights
        for n in 0..=6u32 {
            for r in 0..=6u32 {
                let weights = random_weights((n + r) as usize, 11 + u64::from(n * 7 + r));
                let shifted: WeightSequence = weights.weights()[r as usize..]
                    .iter()
                    .cloned()
                    .collect();
                let prefix: WeightSequence =
                    weights.weights()[..r as usize].iter().cloned().collect();
                for m in 1..=5usize {
                    let strict_lhs = elementary_sum(m, &shifted);
                    let weak_lhs = complete_sum(m, &shifted);
                    let mut strict_rhs = Rational::new();
                    let mut weak_rhs = Rational::new();
                    for i in 0..=m {
                        let j = m - i;
                        let strict_term =
                            complete_sum(i, &prefix) * elementary_sum(j, &weights);
                        let weak_term =
                            elementary_sum(i, &prefix) * complete_sum(j, &weights);
                        if i % 2 == 0 {
                            strict_rhs += strict_term;
                            weak_rhs += weak_term;
                        } else {
                            strict_rhs -= strict_term;
                            weak_rhs -= weak_term;
                        }
                    }
                    assert_eq!(strict_lhs, strict_rhs, "strict n={n} r={r} m={m}");
                    assert_eq!(weak_lhs, weak_rhs, "weak n={n} r={r} m={m}");
                }
            }
        }
    }
}
