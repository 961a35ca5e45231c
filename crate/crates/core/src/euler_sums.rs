//! Euler-type series built from generalized hyperharmonic numbers.
//!
//! The target quantities are
//!
//! * `S(k,m;p) = sum_n h_n^{(m)}(k) / n^p` (convergent for `p >= m+1`),
//! * `U_{m,r}(p) = sum_n zeta_{n+r}({1}_m) / n^p`,
//! * `V_{m,r}(p) = sum_n zeta^*_{n+r}({1}_m) / n^p`,
//!
//! each evaluated by two independent routes: truncated partial sums (exact
//! rational arithmetic for small cutoffs, high-precision floating point with
//! compensated accumulation beyond) and closed forms reducing to height-one
//! multiple zeta values, Riemann zeta values, Stirling numbers, and exact
//! harmonic-type prefactors. The partial-fraction helpers used by the
//! closed-form reductions are exposed with exact residue arithmetic.
//!
//! All truncation error bounds in this module are heuristic tail models of
//! the shape `C (ln N + 1)^depth N^-order`; closed-vs-truncated comparisons
//! apply a configurable safety margin (4x by default) on top of them.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::mhn::{harmonic, mhsn, CompositionIndex};
use crate::symmetric::{bell_harmonic, stirling1};
use crate::verify::{CaseMode, Discrepancy, IdentityCase, IdentityId, Verdict, VerificationReport};
use crate::zeta::{
    bits_for_digits, float_to_decimal, mzv_height_one, pow10, zeta_float, Method, SeriesValue,
    GUARD_DIGITS,
};

/// Largest cutoff for which truncated sums are accumulated in exact
/// rational arithmetic and rounded once at the end. Beyond it the common
/// denominator (roughly `e^N`) makes exact accumulation quadratic in `N`,
/// so evaluation switches to high-precision floats and the result is
/// flagged accordingly.
pub const EXACT_TRUNCATION_LIMIT: u64 = 2_000;

/// Parameters of an Euler sum `S(k,m;p)`: inner depth `k`, order `m`, and
/// exponent `p`, with the convergence requirement `p >= m+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EulerSumKey {
    pub k: u32,
    pub m: u32,
    pub p: u32,
}

impl EulerSumKey {
    pub fn new(k: u32, m: u32, p: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::PositiveRequired { name: "k", got: 0 });
        }
        if m == 0 {
            return Err(Error::PositiveRequired { name: "m", got: 0 });
        }
        if p <= m {
            return Err(Error::EulerSumDivergent { p, m });
        }
        Ok(Self { k, m, p })
    }
}

// ---------------------------------------------------------------------------
// Exact partial sums
// ---------------------------------------------------------------------------

/// Exact partial sum `sum_{n<=N} zeta_{n+shift}({1}_q) /
/// (n^p * prod_a (n + poles[a]))`, the building block of the shifted-series
/// identities. Star mode uses weakly decreasing inner indices.
pub(crate) fn ones_partial_exact(
    star: bool,
    ones_depth: u32,
    shift: u32,
    p: u32,
    poles: &[u64],
    n_terms: u64,
) -> Rational {
    let d = ones_depth as usize;
    let mut state = vec![Rational::new(); d + 1];
    state[0] = Rational::from(1);
    fn step(state: &mut [Rational], d: usize, star: bool, t: u64) {
        if star {
            for lvl in 1..=d {
                let add = state[lvl - 1].clone() / Rational::from(t);
                state[lvl] += add;
            }
        } else {
            for lvl in (1..=d).rev() {
                let add = state[lvl - 1].clone() / Rational::from(t);
                state[lvl] += add;
            }
        }
    }
    for t in 1..=u64::from(shift) {
        step(&mut state, d, star, t);
    }
    let mut acc = Rational::new();
    for n in 1..=n_terms {
        step(&mut state, d, star, n + u64::from(shift));
        let mut denom = Integer::from(n).pow(p);
        for &c in poles {
            denom *= Integer::from(n + c);
        }
        acc += state[d].clone() / Rational::from(denom);
    }
    acc
}

/// Exact partial sum of the shifted ones series:
/// `sum_{n<=N} zeta_{n+r}({1}_m) / n^p`, in rational arithmetic.
/// `m = 0` reduces to the plain power sum `sum_{n<=N} n^-p`.
pub fn u_partial(m: u32, r: u32, p: u32, n_terms: u64) -> Rational {
    ones_partial_exact(false, m, r, p, &[], n_terms)
}

/// Exact partial sum of the star variant:
/// `sum_{n<=N} zeta^*_{n+r}({1}_m) / n^p`.
pub fn v_partial(m: u32, r: u32, p: u32, n_terms: u64) -> Rational {
    ones_partial_exact(true, m, r, p, &[], n_terms)
}

/// Exact partial sum `sum_{n<=N} h_n^{(m)}(k) / n^p` of the Euler sum.
pub fn s_partial(k: u32, m: u32, p: u32, n_terms: u64) -> Result<Rational> {
    if k == 0 {
        return Err(Error::PositiveRequired { name: "k", got: 0 });
    }
    if m == 0 {
        return Err(Error::PositiveRequired { name: "m", got: 0 });
    }
    Ok(s_partial_exact(k, m, p, n_terms))
}

/// Exact partial sum `sum_{n<=N} h_n^{(m)}(k) / n^p`.
pub(crate) fn s_partial_exact(k: u32, m: u32, p: u32, n_terms: u64) -> Rational {
    let kd = k as usize;
    let md = m as usize;
    let mut ones = vec![Rational::new(); kd + 1];
    ones[0] = Rational::from(1);
    let mut orders = vec![Rational::new(); md + 1];
    let mut acc = Rational::new();
    for n in 1..=n_terms {
        for lvl in (1..=kd).rev() {
            let add = ones[lvl - 1].clone() / Rational::from(n);
            ones[lvl] += add;
        }
        orders[1] = ones[kd].clone();
        for i in 2..=md {
            let add = orders[i - 1].clone();
            orders[i] += add;
        }
        acc += orders[md].clone() / Rational::from(Integer::from(n).pow(p));
    }
    acc
}

// ---------------------------------------------------------------------------
// Floating partial sums
// ---------------------------------------------------------------------------

/// Kahan-compensated accumulator.
struct CompensatedSum {
    sum: Float,
    compensation: Float,
}

impl CompensatedSum {
    fn new(bits: u32) -> Self {
        Self {
            sum: Float::with_val(bits, 0),
            compensation: Float::with_val(bits, 0),
        }
    }

    fn add(&mut self, term: Float) {
        let bits = self.sum.prec();
        let adjusted = term - &self.compensation;
        let next = Float::with_val(bits, &self.sum + &adjusted);
        self.compensation = Float::with_val(bits, &next - &self.sum) - &adjusted;
        self.sum = next;
    }

    fn value(self) -> Float {
        self.sum
    }
}

fn ones_partial_float(
    star: bool,
    ones_depth: u32,
    shift: u32,
    p: u32,
    poles: &[u64],
    n_terms: u64,
    bits: u32,
) -> Float {
    let d = ones_depth as usize;
    let mut state = vec![Float::with_val(bits, 0); d + 1];
    state[0] = Float::with_val(bits, 1);
    fn step(state: &mut [Float], d: usize, star: bool, t: u64, bits: u32) {
        if star {
            for lvl in 1..=d {
                let add = Float::with_val(bits, &state[lvl - 1] / Float::with_val(bits, t));
                state[lvl] += add;
            }
        } else {
            for lvl in (1..=d).rev() {
                let add = Float::with_val(bits, &state[lvl - 1] / Float::with_val(bits, t));
                state[lvl] += add;
            }
        }
    }
    for t in 1..=u64::from(shift) {
        step(&mut state, d, star, t, bits);
    }
    let mut acc = CompensatedSum::new(bits);
    for n in 1..=n_terms {
        step(&mut state, d, star, n + u64::from(shift), bits);
        let mut term = Float::with_val(bits, &state[d] / Float::with_val(bits, n).pow(p));
        for &c in poles {
            term /= Float::with_val(bits, n + c);
        }
        acc.add(term);
    }
    acc.value()
}

fn s_partial_float(k: u32, m: u32, p: u32, n_terms: u64, bits: u32) -> Float {
    let kd = k as usize;
    let md = m as usize;
    let mut ones = vec![Float::with_val(bits, 0); kd + 1];
    ones[0] = Float::with_val(bits, 1);
    let mut orders = vec![Float::with_val(bits, 0); md + 1];
    let mut acc = CompensatedSum::new(bits);
    for n in 1..=n_terms {
        for lvl in (1..=kd).rev() {
            let add = Float::with_val(bits, &ones[lvl - 1] / Float::with_val(bits, n));
            ones[lvl] += add;
        }
        orders[1] = ones[kd].clone();
        for i in 2..=md {
            let add = orders[i - 1].clone();
            orders[i] += add;
        }
        let term = Float::with_val(bits, &orders[md] / Float::with_val(bits, n).pow(p));
        acc.add(term);
    }
    acc.value()
}

// ---------------------------------------------------------------------------
// Heuristic tail bounds
// ---------------------------------------------------------------------------

fn ln_factorial(k: u32) -> f64 {
    (2..=k).map(f64::from).map(f64::ln).sum()
}

/// Tail model for `S(k,m;p)` after `N` terms:
/// `2 (ln N + 1)^k N^{m-p} / ((p-m) (m-1)! k!)`.
fn s_tail_bound(k: u32, m: u32, p: u32, n_terms: u64) -> Float {
    let ln_n = (n_terms as f64).ln();
    let log_bound = (2.0f64).ln() + f64::from(k) * (ln_n + 1.0).ln()
        - f64::from(p - m) * ln_n
        - f64::from(p - m).ln()
        - ln_factorial(m - 1)
        - ln_factorial(k);
    Float::with_val(64, log_bound).exp()
}

/// Tail model for `U_{m,r}(p)` after `N` terms:
/// `2 (ln N + 1)^m / (m! (p-1) N^{p-1})`.
fn u_tail_bound(m: u32, p: u32, n_terms: u64) -> Float {
    let ln_n = (n_terms as f64).ln();
    let log_bound = (2.0f64).ln() + f64::from(m) * (ln_n + 1.0).ln()
        - f64::from(p - 1) * ln_n
        - f64::from(p - 1).ln()
        - ln_factorial(m);
    Float::with_val(64, log_bound).exp()
}

// ---------------------------------------------------------------------------
// Truncated series
// ---------------------------------------------------------------------------

/// Truncated Euler sum `sum_{n<=N} h_n^{(m)}(k) / n^p` with a heuristic
/// tail bound. Exact rational accumulation is used up to
/// [`EXACT_TRUNCATION_LIMIT`], high-precision floats beyond.
pub fn s_truncated(key: &EulerSumKey, n_terms: u64, digits: u32) -> Result<SeriesValue> {
    let key = EulerSumKey::new(key.k, key.m, key.p)?;
    let bits = bits_for_digits(digits + GUARD_DIGITS);
    let (value, exact) = if n_terms <= EXACT_TRUNCATION_LIMIT {
        (
            Float::with_val(bits, &s_partial_exact(key.k, key.m, key.p, n_terms)),
            true,
        )
    } else {
        (s_partial_float(key.k, key.m, key.p, n_terms, bits), false)
    };
    Ok(SeriesValue::new(
        value,
        s_tail_bound(key.k, key.m, key.p, n_terms),
        Method::Truncation { exact },
    ))
}

fn validate_series_params(m: u32, p: u32) -> Result<()> {
    if m == 0 {
        return Err(Error::PositiveRequired { name: "m", got: 0 });
    }
    if p < 2 {
        return Err(Error::SeriesExponentTooSmall { got: p });
    }
    Ok(())
}

/// Truncated `U_{m,r}(p) = sum_{n<=N} zeta_{n+r}({1}_m) / n^p` with a
/// heuristic tail bound; exact accumulation for small `N`.
pub fn u_truncated(m: u32, r: u32, p: u32, n_terms: u64, digits: u32) -> Result<SeriesValue> {
    validate_series_params(m, p)?;
    let bits = bits_for_digits(digits + GUARD_DIGITS);
    let (value, exact) = if n_terms <= EXACT_TRUNCATION_LIMIT {
        (
            Float::with_val(bits, &ones_partial_exact(false, m, r, p, &[], n_terms)),
            true,
        )
    } else {
        (
            ones_partial_float(false, m, r, p, &[], n_terms, bits),
            false,
        )
    };
    Ok(SeriesValue::new(
        value,
        u_tail_bound(m, p, n_terms),
        Method::Truncation { exact },
    ))
}

/// One correction block of the star-series decomposition: the truncated
/// sum `sum_{n<=N} zeta^*_n({1}_{m-j}) / (n^p prod_a (n + i_a))` for one
/// weakly decreasing pole tuple `i_1 >= ... >= i_j`.
#[derive(Debug, Clone)]
pub struct VCorrection {
    pub poles: Vec<u64>,
    pub value: SeriesValue,
}

/// Evaluation of the truncated star series `V_{m,r}(p)` together with its
/// head-plus-corrections decomposition.
///
/// The decomposition mirrors the exact rearrangement
/// `sum_{n<=N} zeta^*_{n+r}({1}_m)/n^p = sum_{n<=N} zeta^*_n({1}_m)/n^p +
/// sum_{j=1}^{m} sum_{1<=i_j<=...<=i_1<=r} (correction sums)`, so `direct`
/// equals `star_head + sum(corrections)` at matched cutoffs, exactly in
/// rational mode. The infinite star head `zeta^*(p, {1}_m)` has its own
/// oracle in [`mzsv_truncated`].
#[derive(Debug)]
pub struct VSumEvaluation {
    pub direct: SeriesValue,
    pub star_head: SeriesValue,
    pub corrections: Vec<VCorrection>,
}

impl VSumEvaluation {
    /// `|direct - star_head - sum(corrections)|`; zero (or rounding-level)
    /// at matched cutoffs.
    pub fn consistency_residual(&self) -> Float {
        let bits = self.direct.value().prec();
        let mut total = Float::with_val(bits, self.star_head.value());
        for c in &self.corrections {
            total += c.value.value();
        }
        Float::with_val(bits, self.direct.value() - &total).abs()
    }
}

fn weak_tuples(r: u32, j: u32) -> Vec<Vec<u64>> {
    fn recurse(j: usize, max: u64, current: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if current.len() == j {
            out.push(current.clone());
            return;
        }
        for i in (1..=max).rev() {
            current.push(i);
            recurse(j, i, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    recurse(j as usize, u64::from(r), &mut Vec::new(), &mut out);
    out
}

fn strict_tuples(r: u32, j: u32) -> Vec<Vec<u64>> {
    fn recurse(j: usize, max: u64, current: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if current.len() == j {
            out.push(current.clone());
            return;
        }
        for i in (1..=max).rev() {
            current.push(i);
            recurse(j, i - 1, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    recurse(j as usize, u64::from(r), &mut Vec::new(), &mut out);
    out
}

/// Truncated `V_{m,r}(p) = sum_{n<=N} zeta^*_{n+r}({1}_m) / n^p` with its
/// decomposition into the unshifted star head plus pole-product correction
/// sums over weakly decreasing tuples.
pub fn v_truncated(m: u32, r: u32, p: u32, n_terms: u64, digits: u32) -> Result<VSumEvaluation> {
    validate_series_params(m, p)?;
    let bits = bits_for_digits(digits + GUARD_DIGITS);
    let exact_mode = n_terms <= EXACT_TRUNCATION_LIMIT;
    let evaluate = |depth: u32, shift: u32, poles: &[u64]| -> (Float, bool) {
        if exact_mode {
            (
                Float::with_val(
                    bits,
                    &ones_partial_exact(true, depth, shift, p, poles, n_terms),
                ),
                true,
            )
        } else {
            (
                ones_partial_float(true, depth, shift, p, poles, n_terms, bits),
                false,
            )
        }
    };
    let star_bound = u_tail_bound(m, p, n_terms) * 2u32;
    let (direct_value, exact) = evaluate(m, r, &[]);
    let direct = SeriesValue::new(
        direct_value,
        star_bound.clone(),
        Method::Truncation { exact },
    );
    let (head_value, exact) = evaluate(m, 0, &[]);
    let star_head = SeriesValue::new(head_value, star_bound, Method::Truncation { exact });
    let mut corrections = Vec::new();
    for j in 1..=m {
        for tuple in weak_tuples(r, j) {
            let (value, exact) = evaluate(m - j, 0, &tuple);
            // each correction term decays like n^{-(p+j)}; reuse the
            // dominant-order tail model with the enlarged exponent
            let bound = u_tail_bound((m - j).max(1), p + j, n_terms) * 2u32;
            corrections.push(VCorrection {
                poles: tuple,
                value: SeriesValue::new(value, bound, Method::Truncation { exact }),
            });
        }
    }
    Ok(VSumEvaluation {
        direct,
        star_head,
        corrections,
    })
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

/// `sum_n zeta_n({1}_q) / n^s` as zeta values: `zeta(s)` for `q = 0`,
/// `zeta(s, {1}_q) + zeta(s+1, {1}_{q-1})` for `q >= 1`.
fn unshifted_ones_series(q: u32, s: u32, digits: u32) -> Float {
    if q == 0 {
        zeta_float(s, digits)
    } else {
        let a = mzv_height_one(s, q, digits).expect("s >= 2");
        let b = mzv_height_one(s + 1, q - 1, digits).expect("s+1 >= 2");
        Float::with_val(a.value().prec(), a.value() + b.value())
    }
}

/// Closed form of the pole-coupled series
/// `sum_n zeta_n({1}_q) / (n^p (n+c))`: inverse powers of `n` split off via
/// the power/pole decomposition, the terminal `1/(n(n+c))` piece closed
/// with exact star-harmonic values.
fn pole_series_closed(q: u32, c: u64, p: u32, digits: u32, bits: u32) -> Float {
    let mut acc = Float::with_val(bits, 0);
    let c_f = Float::with_val(bits, c);
    for b in 1..p {
        let series = unshifted_ones_series(q, p + 1 - b, digits);
        let term = Float::with_val(bits, series / c_f.clone().pow(b));
        if b % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    let c_u32 = u32::try_from(c).expect("pole shifts stay desk scale");
    let terminal = if q == 0 {
        // sum_n 1/(n(n+c)) = H_c / c
        let h = harmonic(c_u32, 1).expect("order 1");
        Float::with_val(bits, Float::with_val(bits, &h) / c)
    } else {
        // (1/c) { zeta(q+1) + zeta_c^*({1}_{q+1}) - zeta_c^*({1}_q)/c }
        let mut inner = zeta_float(q + 1, digits);
        let star_hi = mhsn(c_u32, &CompositionIndex::ones(q as usize + 1)).expect("ones");
        let star_lo = mhsn(c_u32, &CompositionIndex::ones(q as usize)).expect("ones");
        inner += Float::with_val(bits, &star_hi);
        inner -= Float::with_val(bits, &(star_lo / Rational::from(c)));
        Float::with_val(bits, inner / c)
    };
    let mut terminal = Float::with_val(bits, terminal / c_f.pow(p - 1));
    if p.is_multiple_of(2) {
        terminal = -terminal;
    }
    acc + terminal
}

/// Closed-form value of `U_{m,r}(p)` at `work_digits` working digits.
fn u_value_float(m: u32, r: u32, p: u32, work_digits: u32) -> Float {
    let bits = bits_for_digits(work_digits);
    let mut acc = Float::with_val(bits, unshifted_ones_series(m, p, work_digits));
    for j in 1..=m {
        let q = m - j;
        for tuple in strict_tuples(r, j) {
            for (l, &pole) in tuple.iter().enumerate() {
                let mut residue = Rational::from(1);
                for (a, &other) in tuple.iter().enumerate() {
                    if a != l {
                        residue *= Rational::from((
                            Integer::from(1),
                            Integer::from(other as i64 - pole as i64),
                        ));
                    }
                }
                let series = pole_series_closed(q, pole, p, work_digits, bits);
                acc += Float::with_val(bits, &residue) * series;
            }
        }
    }
    acc
}

/// Closed form of `U_{m,r}(p)`: two height-one multiple zeta head terms
/// plus finite pole-correction blocks with exact rational prefactors
/// (residue products, harmonic numbers, star-harmonic values).
pub fn u_closed(m: u32, r: u32, p: u32, digits: u32) -> Result<SeriesValue> {
    validate_series_params(m, p)?;
    let value = u_value_float(m, r, p, digits + GUARD_DIGITS);
    Ok(SeriesValue::new(
        value,
        pow10(-(digits as i32)),
        Method::ClosedForm,
    ))
}

/// Closed form of the Euler sum `S(k,r+1;p)` for `p >= r+2`:
/// `(1/r!) sum_{l=1}^{r+1} [r+1, l] sum_{i+j=k} (-1)^i zeta_r^*({1}_i)
/// U_{j,r}(p+1-l)`, with `U_{0,r}(s) = zeta(s)`.
pub fn s_closed(k: u32, r: u32, p: u32, digits: u32) -> Result<SeriesValue> {
    if k == 0 {
        return Err(Error::PositiveRequired { name: "k", got: 0 });
    }
    if p < r + 2 {
        return Err(Error::ClosedFormRange { p, r });
    }
    let work_digits = digits + GUARD_DIGITS;
    let bits = bits_for_digits(work_digits);
    let mut acc = Float::with_val(bits, 0);
    for l in 1..=r + 1 {
        let stirling = stirling1(r + 1, l);
        if stirling == 0 {
            continue;
        }
        let exponent = p + 1 - l;
        let mut convolution = Float::with_val(bits, 0);
        for i in 0..=k {
            let j = k - i;
            let star = mhsn(r, &CompositionIndex::ones(i as usize)).expect("ones");
            if star == 0 {
                continue;
            }
            let series = if j == 0 {
                zeta_float(exponent, work_digits)
            } else {
                u_value_float(j, r, exponent, work_digits)
            };
            let term = Float::with_val(bits, &star) * series;
            if i % 2 == 0 {
                convolution += term;
            } else {
                convolution -= term;
            }
        }
        acc += Float::with_val(bits, &Rational::from(stirling)) * convolution;
    }
    acc /= Float::with_val(bits, &Rational::from(Integer::factorial(r)));
    Ok(SeriesValue::new(
        acc,
        pow10(-(digits as i32)),
        Method::ClosedForm,
    ))
}

// ---------------------------------------------------------------------------
// Partial fractions and the power/pole split
// ---------------------------------------------------------------------------

/// Exact simple-pole expansion `1/prod_a (n + i_a) = sum_l A_l/(n + i_l)`
/// with residues `A_l = prod_{a != l} (i_a - i_l)^{-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialFractionDecomposition {
    shifts: Vec<u64>,
    residues: Vec<Rational>,
}

impl PartialFractionDecomposition {
    pub fn shifts(&self) -> &[u64] {
        &self.shifts
    }

    pub fn residues(&self) -> &[Rational] {
        &self.residues
    }

    /// `sum_l A_l/(n + i_l)` at a sample point.
    pub fn recombine_at(&self, n: u64) -> Rational {
        let mut acc = Rational::new();
        for (shift, residue) in self.shifts.iter().zip(&self.residues) {
            acc += residue.clone() / Rational::from(n + shift);
        }
        acc
    }

    /// `1/prod_a (n + i_a)` at a sample point.
    pub fn product_inverse_at(&self, n: u64) -> Rational {
        let mut denom = Integer::from(1);
        for shift in &self.shifts {
            denom *= Integer::from(n + shift);
        }
        Rational::from((Integer::from(1), denom))
    }
}

/// Exact residues of `1/prod_a (n + i_a)` for pairwise distinct shifts.
pub fn partial_fractions(shifts: &[u64]) -> Result<PartialFractionDecomposition> {
    if shifts.is_empty() {
        return Err(Error::EmptyShifts);
    }
    for (idx, &s) in shifts.iter().enumerate() {
        if shifts[..idx].contains(&s) {
            return Err(Error::RepeatedShift { shift: s });
        }
    }
    let residues = shifts
        .iter()
        .map(|&pole| {
            let mut acc = Rational::from(1);
            for &other in shifts {
                if other != pole {
                    acc *= Rational::from((
                        Integer::from(1),
                        Integer::from(other as i64 - pole as i64),
                    ));
                }
            }
            acc
        })
        .collect();
    Ok(PartialFractionDecomposition {
        shifts: shifts.to_vec(),
        residues,
    })
}

/// The exact split
/// `1/(n^p (n+r)) = sum_{b=1}^{p-1} (-1)^{b-1} r^{-b} n^{-(p+1-b)}
///  + (-1)^{p-1} r^{-(p-1)} / (n (n+r))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitDecomposition {
    p: u32,
    r: u64,
    /// coefficient of `n^{-(p+1-b)}` for `b = 1..p-1`, in order
    power_coefficients: Vec<Rational>,
    /// coefficient of `1/(n(n+r))`
    terminal: Rational,
}

impl SplitDecomposition {
    pub fn power_coefficients(&self) -> &[Rational] {
        &self.power_coefficients
    }

    pub fn terminal(&self) -> &Rational {
        &self.terminal
    }

    /// Right side evaluated at a sample `n`.
    pub fn recombine_at(&self, n: u64) -> Rational {
        let mut acc = Rational::new();
        for (idx, coeff) in self.power_coefficients.iter().enumerate() {
            let b = idx as u32 + 1;
            acc += coeff.clone() / Rational::from(Integer::from(n).pow(self.p + 1 - b));
        }
        acc += self.terminal.clone() / Rational::from(Integer::from(n) * Integer::from(n + self.r));
        acc
    }

    /// Left side `1/(n^p (n+r))` at a sample `n`.
    pub fn target_at(&self, n: u64) -> Rational {
        Rational::from((
            Integer::from(1),
            Integer::from(n).pow(self.p) * Integer::from(n + self.r),
        ))
    }
}

/// Splits `1/(n^p (n+r))` into inverse powers of `n` plus a terminal
/// `1/(n(n+r))` piece, all coefficients exact.
pub fn split_np(p: u32, r: u64) -> Result<SplitDecomposition> {
    if r == 0 {
        return Err(Error::ZeroSplitShift);
    }
    if p < 2 {
        return Err(Error::SeriesExponentTooSmall { got: p });
    }
    let mut power_coefficients = Vec::with_capacity(p as usize - 1);
    for b in 1..p {
        let mut c = Rational::from((Integer::from(1), Integer::from(r).pow(b)));
        if b % 2 == 0 {
            c = -c;
        }
        power_coefficients.push(c);
    }
    let mut terminal = Rational::from((Integer::from(1), Integer::from(r).pow(p - 1)));
    if p.is_multiple_of(2) {
        terminal = -terminal;
    }
    Ok(SplitDecomposition {
        p,
        r,
        power_coefficients,
        terminal,
    })
}

// ---------------------------------------------------------------------------
// The harmonic/pole series check (truncation vs closed right side)
// ---------------------------------------------------------------------------

/// The pieces of the harmonic/pole series check: truncated left side,
/// closed right side, the heuristic tail bound of the truncation, and the
/// exact agreement flag of the two closed renderings.
pub(crate) struct HarmonicPoleParts {
    pub truncated: Float,
    pub closed: Float,
    pub tail_bound: Float,
    pub renderings_agree: bool,
}

pub(crate) fn harmonic_pole_parts(p: u32, k: u64, n_terms: u64, digits: u32) -> Result<HarmonicPoleParts> {
    if p < 2 {
        return Err(Error::SeriesExponentTooSmall { got: p });
    }
    if k == 0 {
        return Err(Error::PositiveRequired { name: "k", got: 0 });
    }
    let work_digits = digits + GUARD_DIGITS;
    let bits = bits_for_digits(work_digits);
    let k_u32 = u32::try_from(k).expect("k stays desk scale");

    // exact equivalence of the two right-side renderings (the zeta(p)
    // term is common): Y_p(k)/p - Y_{p-1}(k)/k
    // == (p-1)! (zeta_k^*({1}_p) - zeta_k^*({1}_{p-1})/k)
    let star_hi = mhsn(k_u32, &CompositionIndex::ones(p as usize)).expect("ones");
    let star_lo = mhsn(k_u32, &CompositionIndex::ones(p as usize - 1)).expect("ones");
    let bell_side = bell_harmonic(p as usize, k_u32) / Rational::from(p)
        - bell_harmonic(p as usize - 1, k_u32) / Rational::from(k);
    let star_side = Rational::from(Integer::factorial(p - 1))
        * (star_hi.clone() - star_lo.clone() / Rational::from(k));
    let renderings_agree = bell_side == star_side;

    let truncated = ones_partial_float(false, p - 1, 0, 1, &[k], n_terms, bits);
    let mut closed = zeta_float(p, work_digits);
    closed += Float::with_val(bits, &star_hi);
    closed -= Float::with_val(bits, &(star_lo / Rational::from(k)));
    let closed = Float::with_val(bits, closed / k);

    // tail of sum zeta_n({1}_{p-1})/(n(n+k)) ~ (ln N)^{p-1}/((p-1)! N)
    let ln_n = (n_terms as f64).ln();
    let log_bound =
        (2.0f64).ln() + f64::from(p - 1) * (ln_n + 1.0).ln() - ln_n - ln_factorial(p - 1);
    let tail_bound = Float::with_val(64, log_bound).exp();

    Ok(HarmonicPoleParts {
        truncated,
        closed,
        tail_bound,
        renderings_agree,
    })
}

/// Checks the closed evaluation of `sum_n zeta_n({1}_{p-1})/(n(n+k))`
/// against its truncation at `n_terms`, and asserts exactly that the two
/// closed renderings of the right side (Bell-polynomial form and
/// star-harmonic form) coincide.
///
/// The closed right side is `(1/k){ zeta(p) + zeta_k^*({1}_p) -
/// zeta_k^*({1}_{p-1})/k }`; the Bell form replaces the star values by
/// `Y_p(k)/p!` and `Y_{p-1}(k)/(p-1)!`. The truncation is accepted within
/// four times its heuristic tail bound.
pub fn harmonic_pole_check(p: u32, k: u64, n_terms: u64, digits: u32) -> Result<VerificationReport> {
    let started = std::time::Instant::now();
    let parts = harmonic_pole_parts(p, k, n_terms, digits)?;
    let discrepancy = Float::with_val(64, &parts.closed - &parts.truncated).abs();
    let allowed = Float::with_val(64, &parts.tail_bound * 4u32);
    let pass = parts.renderings_agree && discrepancy <= allowed;
    let case = IdentityCase::new(
        IdentityId::Eq4_6,
        [("N", n_terms as i64), ("k", k as i64), ("p", i64::from(p))],
        CaseMode::Numeric,
    );
    Ok(VerificationReport {
        case,
        lhs: float_to_decimal(&parts.truncated, digits),
        rhs: float_to_decimal(&parts.closed, digits),
        discrepancy: Discrepancy::Numeric {
            value: float_to_decimal(&discrepancy, 8),
            allowed: float_to_decimal(&allowed, 8),
        },
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        elapsed: started.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta::mzsv_truncated;

    const TWO_ZETA3: &str = "2.404113806319188570799476323022899981529972584680998";
    const U_1_1_2: &str = "3.049047873167415007271891489668925170748922485887796";
    const PI4_OVER_72: &str = "1.352904042138922739395004620676459878468438689898409";

    fn parse(s: &str) -> Float {
        Float::with_val(256, Float::parse(s).unwrap())
    }

    fn assert_close(a: &Float, b: &Float, tol_exp: i32) {
        let diff = Float::with_val(256, a - b).abs();
        assert!(
            diff <= pow10(tol_exp),
            "difference {} exceeds 1e{}",
            diff.to_string_radix(10, Some(5)),
            tol_exp
        );
    }

    #[test]
    fn key_validation() {
        assert!(EulerSumKey::new(1, 1, 2).is_ok());
        assert_eq!(
            EulerSumKey::new(1, 2, 2),
            Err(Error::EulerSumDivergent { p: 2, m: 2 })
        );
        assert!(EulerSumKey::new(0, 1, 2).is_err());
    }

    #[test]
    fn s_partial_exact_small_value() {
        // sum_{n<=10} H_n/n^2
        assert_eq!(
            s_partial_exact(1, 1, 2, 10),
            Rational::from((32452469713i64, 16003008000i64))
        );
    }

    #[test]
    fn s_partial_at_order_one_is_ones_mhn_series() {
        // h_n^{(1)}(k) = zeta_n({1}_k), so the order-one Euler sum is the
        // plain nested-ones series
        let ones = crate::mhn::CompositionIndex::ones(2);
        for n_terms in [1u64, 5, 20] {
            let direct: Rational = (1..=n_terms)
                .map(|n| {
                    crate::mhn::mhn(n as u32, &ones).unwrap()
                        / Rational::from(Integer::from(n).pow(3))
                })
                .fold(Rational::new(), |acc, v| acc + v);
            assert_eq!(s_partial_exact(2, 1, 3, n_terms), direct, "N={n_terms}");
        }
    }

    #[test]
    fn s_truncated_modes_agree() {
        let key = EulerSumKey::new(2, 1, 3).unwrap();
        let exact = s_truncated(&key, 2_000, 40).unwrap();
        assert_eq!(exact.method(), Method::Truncation { exact: true });
        let float_value = s_partial_float(2, 1, 3, 2_000, bits_for_digits(50));
        assert_close(exact.value(), &float_value, -45);
    }

    #[test]
    fn u_partial_matches_derived_identity() {
        // U_{1,1}(2) = zeta(2) + 2 zeta(3) - 1
        let v = u_truncated(1, 1, 2, 300_000, 40).unwrap();
        let target = parse(U_1_1_2);
        let diff = Float::with_val(256, v.value() - &target).abs();
        assert!(diff <= *v.error_bound());
    }

    #[test]
    fn u_closed_examples() {
        let v = u_closed(1, 0, 2, 50).unwrap();
        assert_close(v.value(), &parse(TWO_ZETA3), -45);
        let v = u_closed(1, 1, 2, 50).unwrap();
        assert_close(v.value(), &parse(U_1_1_2), -45);
        assert!(u_closed(0, 1, 2, 50).is_err());
        assert!(u_closed(1, 1, 1, 50).is_err());
    }

    #[test]
    fn u_closed_vs_truncated_grid() {
        let n_terms = 50_000u64;
        for (m, r, p) in [(1, 0, 2), (2, 1, 3), (2, 2, 2), (3, 3, 2), (3, 2, 4)] {
            let closed = u_closed(m, r, p, 40).unwrap();
            let trunc = u_truncated(m, r, p, n_terms, 40).unwrap();
            let diff = closed.abs_diff(&trunc);
            assert!(
                diff <= *trunc.error_bound(),
                "m={m} r={r} p={p}: diff {} bound {}",
                diff.to_string_radix(10, Some(4)),
                trunc.error_bound().to_string_radix(10, Some(4))
            );
        }
    }

    #[test]
    fn s_closed_examples() {
        let v = s_closed(1, 0, 2, 50).unwrap();
        assert_close(v.value(), &parse(TWO_ZETA3), -45);
        let v = s_closed(1, 0, 3, 50).unwrap();
        assert_close(v.value(), &parse(PI4_OVER_72), -45);
        assert_eq!(
            s_closed(1, 1, 2, 50).unwrap_err(),
            Error::ClosedFormRange { p: 2, r: 1 }
        );
    }

    #[test]
    fn s_closed_vs_truncated() {
        for (k, m, p) in [(1u32, 1u32, 2u32), (2, 1, 3), (1, 2, 3)] {
            let closed = s_closed(k, m - 1, p, 40).unwrap();
            let key = EulerSumKey::new(k, m, p).unwrap();
            let trunc = s_truncated(&key, 50_000, 40).unwrap();
            let diff = closed.abs_diff(&trunc);
            assert!(
                diff <= *trunc.error_bound(),
                "k={k} m={m} p={p}: diff {} bound {}",
                diff.to_string_radix(10, Some(4)),
                trunc.error_bound().to_string_radix(10, Some(4))
            );
        }
    }

    #[test]
    fn v_decomposition_is_exact_at_matched_cutoff() {
        for (m, r, p) in [(1u32, 0u32, 2u32), (1, 1, 2), (2, 2, 3), (3, 2, 2)] {
            let eval = v_truncated(m, r, p, 500, 40).unwrap();
            let residual = eval.consistency_residual();
            assert!(
                residual <= pow10(-40),
                "m={m} r={r} p={p}: residual {}",
                residual.to_string_radix(10, Some(4))
            );
        }
    }

    #[test]
    fn v_approaches_star_value() {
        // V_{1,0}(2) -> zeta^*(2,1) = 2 zeta(3)
        let eval = v_truncated(1, 0, 2, 200_000, 40).unwrap();
        let target = parse(TWO_ZETA3);
        let diff = Float::with_val(256, eval.direct.value() - &target).abs();
        assert!(diff <= *eval.direct.error_bound());
        let oracle = mzsv_truncated(&CompositionIndex::new(vec![2, 1]), 200_000, 40).unwrap();
        let diff = Float::with_val(256, eval.direct.value() - oracle.value()).abs();
        let budget = Float::with_val(64, eval.direct.error_bound() + oracle.error_bound());
        assert!(diff <= budget);
    }

    #[test]
    fn v_dominates_u_termwise() {
        // star terms dominate strict ones; at depth 1 the two coincide
        let u = u_truncated(1, 1, 2, 1_000, 40).unwrap();
        let v = v_truncated(1, 1, 2, 1_000, 40).unwrap();
        assert_eq!(v.direct.value(), u.value());
        let u = u_truncated(2, 1, 2, 1_000, 40).unwrap();
        let v = v_truncated(2, 1, 2, 1_000, 40).unwrap();
        assert!(v.direct.value() > u.value());
    }

    #[test]
    fn v_rejects_zero_depth() {
        assert!(v_truncated(0, 1, 2, 100, 40).is_err());
    }

    #[test]
    fn partial_fraction_examples() {
        let pf = partial_fractions(&[1]).unwrap();
        assert_eq!(pf.residues(), &[Rational::from(1)]);
        let pf = partial_fractions(&[2, 1]).unwrap();
        assert_eq!(pf.residues(), &[Rational::from(-1), Rational::from(1)]);
        let pf = partial_fractions(&[3, 1]).unwrap();
        assert_eq!(
            pf.residues(),
            &[Rational::from((-1, 2)), Rational::from((1, 2))]
        );
        assert_eq!(
            partial_fractions(&[2, 2]),
            Err(Error::RepeatedShift { shift: 2 })
        );
        assert!(partial_fractions(&[]).is_err());
    }

    #[test]
    fn partial_fraction_recombination_certificate() {
        for shifts in [&[1u64][..], &[2, 1], &[3, 1], &[5, 3, 2], &[7, 4, 2, 0]] {
            let pf = partial_fractions(shifts).unwrap();
            for n in 1..=(2 * shifts.len() as u64 + 2) {
                assert_eq!(
                    pf.recombine_at(n),
                    pf.product_inverse_at(n),
                    "shifts={shifts:?} n={n}"
                );
            }
        }
    }

    #[test]
    fn split_np_examples() {
        let split = split_np(3, 2).unwrap();
        assert_eq!(
            split.power_coefficients(),
            &[Rational::from((1, 2)), Rational::from((-1, 4))]
        );
        assert_eq!(*split.terminal(), Rational::from((1, 4)));
        assert_eq!(split_np(2, 0), Err(Error::ZeroSplitShift));
        for p in 2..=6u32 {
            for r in 1..=6u64 {
                let split = split_np(p, r).unwrap();
                for n in 1..=8u64 {
                    assert_eq!(
                        split.recombine_at(n),
                        split.target_at(n),
                        "p={p} r={r} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn harmonic_pole_small_cases() {
        let report = harmonic_pole_check(2, 1, 100_000, 40).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        let report = harmonic_pole_check(2, 2, 100_000, 40).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        assert!(harmonic_pole_check(1, 1, 100, 40).is_err());
        assert!(harmonic_pole_check(2, 0, 100, 40).is_err());
    }

    #[test]
    fn exact_shifted_series_decomposition() {
        // sum_{n<=N} zeta_{n+r}({1}_m)/n^p
        //   = sum_{n<=N} zeta_n({1}_m)/n^p
        //   + sum_{c=1}^{r} sum_{n<=N} zeta_{n+c-1}({1}_{m-1})/(n^p (n+c))
        for (m, r, p, n) in [(1u32, 1u32, 2u32, 60u64), (2, 3, 2, 50), (4, 4, 3, 40)] {
            let lhs = ones_partial_exact(false, m, r, p, &[], n);
            let mut rhs = ones_partial_exact(false, m, 0, p, &[], n);
            for c in 1..=u64::from(r) {
                rhs += ones_partial_exact(false, m - 1, c as u32 - 1, p, &[c], n);
            }
            assert_eq!(lhs, rhs, "m={m} r={r} p={p} n={n}");
        }
    }
}
