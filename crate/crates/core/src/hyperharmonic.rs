//! Hyperharmonic and generalized hyperharmonic numbers.
//!
//! `h_n^{(m)}` is the m-fold repeated partial sum of the harmonic sequence;
//! `h_n^{(m)}(k)` attaches a strictly decreasing depth-k harmonic block
//! below the hyperharmonic index. Three independent evaluation routes are
//! provided: the direct nested-sum definition, a recurrence driven by
//! shifted power sums, and a closed form through the convolution of star
//! and plain all-ones multiple harmonic numbers. They must agree exactly.

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::mhn::{harmonic, mhn, mhsn, mixed_mhn, CompositionIndex, MixedIndex};

/// Parameters of a generalized hyperharmonic number: upper limit `n`,
/// order `m` (both >= 1), and the depth `k >= 0` of the strict block.
///
/// At `k = 0` the value is fixed by the convention
/// `h_n^{(m)}(0) = C(m+n-1, m-1)`, honored by the recurrence and closed
/// routes; the direct route requires `k >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HyperharmonicKey {
    pub n: u32,
    pub m: u32,
    pub k: u32,
}

impl HyperharmonicKey {
    pub fn new(n: u32, m: u32, k: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::PositiveRequired {
                name: "n",
                got: 0,
            });
        }
        if m == 0 {
            return Err(Error::PositiveRequired {
                name: "m",
                got: 0,
            });
        }
        Ok(Self { n, m, k })
    }
}

/// Classical hyperharmonic number `h_n^{(m)}`, the star nested sum with
/// index `({0}_{m-1}, 1)`.
pub fn hyperharmonic(n: u32, m: u32) -> Result<Rational> {
    let key = HyperharmonicKey::new(n, m, 1)?;
    let mut outer = vec![0u32; key.m as usize - 1];
    outer.push(1);
    Ok(mixed_mhn(
        key.n,
        &MixedIndex::new(CompositionIndex::new(outer), CompositionIndex::empty()),
    ))
}

/// Direct route for `h_n^{(m)}(k)`: the mixed nested sum with outer block
/// `({0}_{m-1}, 1)` and inner block `{1}_{k-1}`. Requires `k >= 1`.
pub fn gen_hh_direct(key: &HyperharmonicKey) -> Result<Rational> {
    if key.k == 0 {
        return Err(Error::InnerDepthZero);
    }
    let mut outer = vec![0u32; key.m as usize - 1];
    outer.push(1);
    Ok(mixed_mhn(
        key.n,
        &MixedIndex::new(
            CompositionIndex::new(outer),
            CompositionIndex::ones(key.k as usize - 1),
        ),
    ))
}

/// Values `z(0..=max_k)` of the shifted all-ones sums
/// `z(i) = sum_{1 <= k_i < ... < k_1 <= n} prod 1/(k_j + r)` computed by the
/// Newton-type recurrence from the shifted power sums
/// `X(q) = H_{n+r}^{(q)} - H_r^{(q)}`.
///
/// This is the single recurrence path shared by the generalized
/// hyperharmonic recurrence (scaled by a binomial) and the shifted
/// multiple-harmonic recurrence.
pub(crate) fn shifted_ones_recurrence(n: u32, r: u32, max_k: u32) -> Vec<Rational> {
    let max_k = max_k as usize;
    let mut power_sums = Vec::with_capacity(max_k + 1);
    power_sums.push(Rational::new()); // X(0) unused
    for q in 1..=max_k as u32 {
        let x = harmonic(n + r, q).expect("q >= 1") - harmonic(r, q).expect("q >= 1");
        power_sums.push(x);
    }
    let mut z = Vec::with_capacity(max_k + 1);
    z.push(Rational::from(1));
    for j in 1..=max_k {
        let mut acc = Rational::new();
        for i in 0..j {
            let term = z[i].clone() * &power_sums[j - i];
            if i % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        if j % 2 == 0 {
            acc = -acc;
        }
        z.push(acc / Rational::from(j as u64));
    }
    z
}

/// Recurrence route for `h_n^{(m)}(k)`, seeded by
/// `h_n^{(m)}(0) = C(m+n-1, m-1)` and driven by the power sums
/// `H_{m+n-1}^{(q)} - H_{m-1}^{(q)}`. Accepts `k = 0`.
pub fn gen_hh_recurrence(key: &HyperharmonicKey) -> Rational {
    let base = Integer::from(u64::from(key.m) + u64::from(key.n) - 1).binomial(key.m - 1);
    let z = shifted_ones_recurrence(key.n, key.m - 1, key.k);
    Rational::from(base) * &z[key.k as usize]
}

/// Closed form for `h_n^{(r+1)}(k)` with `k >= 1`:
/// `C(n+r, r) * sum_{i+j=k} (-1)^i zeta_r^*({1}_i) zeta_{n+r}({1}_j)`.
pub fn gen_hh_closed(n: u32, r: u32, k: u32) -> Result<Rational> {
    if n == 0 {
        return Err(Error::PositiveRequired {
            name: "n",
            got: 0,
        });
    }
    if k == 0 {
        return Err(Error::InnerDepthZero);
    }
    let binom = Integer::from(u64::from(n) + u64::from(r)).binomial(r);
    Ok(Rational::from(binom) * ones_convolution(n, r, k))
}

/// `sum_{i+j=k} (-1)^i zeta_r^*({1}_i) zeta_{n+r}({1}_j)` in exact rationals.
pub(crate) fn ones_convolution(n: u32, r: u32, k: u32) -> Rational {
    let mut acc = Rational::new();
    for i in 0..=k {
        let j = k - i;
        let star = mhsn(r, &CompositionIndex::ones(i as usize)).expect("all-ones index");
        if star == 0 {
            continue;
        }
        let plain = mhn(n + r, &CompositionIndex::ones(j as usize)).expect("all-ones index");
        let term = star * plain;
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Generalized hyperharmonic star number `H_n^{(m)}(k)`: the fully weak
/// nested sum with index `({0}_{m-1}, {1}_k)`.
pub fn gen_hh_star(n: u32, m: u32, k: u32) -> Result<Rational> {
    let key = HyperharmonicKey::new(n, m, k)?;
    if k == 0 {
        return Err(Error::InnerDepthZero);
    }
    let mut outer = vec![0u32; key.m as usize - 1];
    outer.extend(vec![1; k as usize]);
    Ok(mixed_mhn(
        n,
        &MixedIndex::new(CompositionIndex::new(outer), CompositionIndex::empty()),
    ))
}
