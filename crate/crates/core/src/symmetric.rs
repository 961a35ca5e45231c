//! Stirling numbers of the first kind, complete exponential Bell
//! polynomials, and elementary/complete symmetric sums over rational
//! weight sequences, together with the Newton-type recurrence connecting
//! them.

use std::sync::{OnceLock, RwLock};

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::mhn::harmonic;

/// A finite sequence of rational weights `a_1, ..., a_n`.
///
/// Weights are unrestricted: zero and negative values are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSequence {
    weights: Vec<Rational>,
}

impl WeightSequence {
    pub fn new(weights: impl Into<Vec<Rational>>) -> Self {
        Self {
            weights: weights.into(),
        }
    }

    pub fn empty() -> Self {
        Self {
            weights: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// Power sum `X(q) = sum_i a_i^q`.
    pub fn power_sum(&self, q: u32) -> Rational {
        let mut acc = Rational::new();
        for w in &self.weights {
            acc += w.clone().pow(q);
        }
        acc
    }
}

impl FromIterator<Rational> for WeightSequence {
    fn from_iter<T: IntoIterator<Item = Rational>>(iter: T) -> Self {
        Self {
            weights: iter.into_iter().collect(),
        }
    }
}

/// Triangular table of unsigned Stirling numbers of the first kind,
/// built row by row with the additive recurrence
/// `[n+1, k] = n [n, k] + [n, k-1]`.
///
/// Boundary conventions: `[0,0] = 1`, `[n,0] = [0,k] = 0` for `n,k >= 1`,
/// and `[n,k] = 0` whenever `n < k`.
#[derive(Debug, Clone)]
pub struct StirlingTable {
    rows: Vec<Vec<Integer>>,
}

impl StirlingTable {
    /// Builds rows `0..=max_n`.
    pub fn new(max_n: usize) -> Self {
        let mut table = Self {
            rows: vec![vec![Integer::from(1)]],
        };
        table.extend_to(max_n);
        table
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn extend_to(&mut self, max_n: usize) {
        while self.rows.len() <= max_n {
            let n = self.rows.len(); // building row n from row n-1
            let prev = &self.rows[n - 1];
            let mut row = vec![Integer::new(); n + 1];
            for k in 1..=n {
                let mut v = Integer::from(n as u64 - 1) * prev.get(k).unwrap_or(&Integer::ZERO);
                v += &prev[k - 1];
                row[k] = v;
            }
            self.rows.push(row);
        }
    }

    /// `[n, k]`; zero outside the triangle.
    pub fn get(&self, n: usize, k: usize) -> Integer {
        if k > n {
            return Integer::new();
        }
        self.rows[n][k].clone()
    }
}

fn stirling_cache() -> &'static RwLock<StirlingTable> {
    static CACHE: OnceLock<RwLock<StirlingTable>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(StirlingTable::new(32)))
}

/// Unsigned Stirling number of the first kind `[n, k]`.
///
/// Values come from a shared process-wide table that grows on demand;
/// lookups take a read lock only.
pub fn stirling1(n: u32, k: u32) -> Integer {
    let n = n as usize;
    let k = k as usize;
    if k > n {
        return Integer::new();
    }
    {
        let table = stirling_cache().read().unwrap();
        if table.max_n() >= n {
            return table.get(n, k);
        }
    }
    let mut table = stirling_cache().write().unwrap();
    table.extend_to(n);
    table.get(n, k)
}

/// Complete exponential Bell polynomial `Y_k(x_1, ..., x_k)` via the
/// binomial recurrence `Y_k = sum_{i=0}^{k-1} C(k-1, i) Y_i x_{k-i}`,
/// with `Y_0 = 1`.
pub fn bell_complete(k: usize, x: &[Rational]) -> Result<Rational> {
    if x.len() < k {
        return Err(Error::BellArgumentsTooShort {
            order: k,
            got: x.len(),
        });
    }
    let mut y = Vec::with_capacity(k + 1);
    y.push(Rational::from(1));
    for j in 1..=k {
        let mut acc = Rational::new();
        for i in 0..j {
            let c = Integer::from(j as u64 - 1).binomial(i as u32);
            acc += Rational::from(c) * &y[i] * &x[j - 1 - i];
        }
        y.push(acc);
    }
    Ok(y[k].clone())
}

/// `Y_k(n)`: the complete Bell polynomial evaluated at the harmonic
/// arguments `x_r = (r-1)! H_n^{(r)}`.
pub fn bell_harmonic(k: usize, n: u32) -> Rational {
    let mut args = Vec::with_capacity(k);
    let mut fact = Integer::from(1);
    for r in 1..=k as u32 {
        if r > 1 {
            fact *= r - 1;
        }
        args.push(Rational::from(fact.clone()) * harmonic(n, r).expect("r >= 1"));
    }
    bell_complete(k, &args).expect("argument list has length k")
}

/// Elementary symmetric sum over strictly decreasing index tuples:
/// `e_m = sum_{1 <= k_m < ... < k_1 <= n} a_{k_1} ... a_{k_m}`;
/// 1 at `m = 0`, 0 when `m > n`.
pub fn elementary_sum(m: usize, w: &WeightSequence) -> Rational {
    if m == 0 {
        return Rational::from(1);
    }
    // strict DP: state[d] folds in a_t using previous-step state[d-1],
    // so process depths in decreasing order
    let mut state = vec![Rational::new(); m + 1];
    state[0] = Rational::from(1);
    for a in w.weights() {
        for d in (1..=m).rev() {
            let add = state[d - 1].clone() * a;
            state[d] += add;
        }
    }
    state[m].clone()
}

/// Complete homogeneous symmetric sum over weakly decreasing index tuples:
/// `h_m = sum_{1 <= k_m <= ... <= k_1 <= n} a_{k_1} ... a_{k_m}`; 1 at `m = 0`.
pub fn complete_sum(m: usize, w: &WeightSequence) -> Rational {
    if m == 0 {
        return Rational::from(1);
    }
    // weak DP: state[d] folds in a_t using the already-updated state[d-1],
    // so process depths in increasing order
    let mut state = vec![Rational::new(); m + 1];
    state[0] = Rational::from(1);
    for a in w.weights() {
        for d in 1..=m {
            let add = state[d - 1].clone() * a;
            state[d] += add;
        }
    }
    state[m].clone()
}

/// Newton-type recurrence for the elementary symmetric sums from power
/// sums: `B_m = ((-1)^{m-1}/m) sum_{i=0}^{m-1} (-1)^i B_i X(m-i)`.
/// Must agree with [`elementary_sum`] for every weight sequence.
pub fn bbar_recurrence(m: usize, w: &WeightSequence) -> Rational {
    let mut power_sums = Vec::with_capacity(m + 1);
    power_sums.push(Rational::new()); // X(0) unused
    for q in 1..=m as u32 {
        power_sums.push(w.power_sum(q));
    }
    let mut b = Vec::with_capacity(m + 1);
    b.push(Rational::from(1));
    for j in 1..=m {
        let mut acc = Rational::new();
        for i in 0..j {
            let term = b[i].clone() * &power_sums[j - i];
            if i % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        if j % 2 == 0 {
            acc = -acc;
        }
        b.push(acc / Rational::from(j as u64));
    }
    b[m].clone()
}

/// Binomial coefficient `C(n+r, r)` recovered from the Stirling row `r+1`
/// as `(1/r!) sum_{l=1}^{r+1} [r+1, l] n^{l-1}`.
pub fn binomial_via_stirling(n: u64, r: u32) -> Integer {
    let mut acc = Integer::new();
    let np = Integer::from(n);
    for l in 1..=r + 1 {
        acc += stirling1(r + 1, l) * np.clone().pow(l - 1);
    }
    let fact = Integer::from(Integer::factorial(r));
    acc.div_exact(&fact)
}
