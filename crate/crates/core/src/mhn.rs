//! Exact evaluation of finite harmonic-type nested sums.
//!
//! The central objects are the multiple harmonic numbers
//! `zeta_n(s_1,...,s_m) = sum_{n >= n_1 > ... > n_m >= 1} prod n_i^{-s_i}`,
//! their star variant with weak inequalities, the mixed variant whose index
//! is split into a weakly ordered outer block and a strictly ordered inner
//! block, and the shifted all-ones sum over `1/(k_i + r)` factors.
//!
//! Everything here is computed in exact rational arithmetic by dynamic
//! programming over (upper limit, index suffix); no floating point is
//! involved. All functions are pure, so values can be computed from any
//! number of threads concurrently.

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Relation between one summation index and the next inner one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Rel {
    /// `n_{j+1} < n_j`
    Strict,
    /// `n_{j+1} <= n_j`
    Weak,
}

/// A finite sequence of non-negative integer exponents `(s_1, ..., s_m)`.
///
/// Plain and star multiple harmonic numbers require every part to be >= 1;
/// zero parts are meaningful only in the mixed form, where a zero exponent
/// contributes the factor 1 and acts as a pure ordering constraint.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompositionIndex {
    parts: Vec<u32>,
}

impl CompositionIndex {
    pub fn new(parts: impl Into<Vec<u32>>) -> Self {
        Self {
            parts: parts.into(),
        }
    }

    /// The empty index; plain and star values of it are 1 by convention.
    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    /// `{1}_m`: the all-ones index of depth `m`.
    pub fn ones(m: usize) -> Self {
        Self::repeated(1, m)
    }

    /// `{p}_m`: the exponent `p` repeated `m` times.
    pub fn repeated(p: u32, m: usize) -> Self {
        Self {
            parts: vec![p; m],
        }
    }

    pub fn depth(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Sum of all exponents.
    pub fn weight(&self) -> u64 {
        self.parts.iter().map(|&p| u64::from(p)).sum()
    }

    fn ensure_positive_parts(&self) -> Result<()> {
        if self.parts.contains(&0) {
            Err(Error::ZeroPart)
        } else {
            Ok(())
        }
    }
}

impl From<&[u32]> for CompositionIndex {
    fn from(parts: &[u32]) -> Self {
        Self::new(parts.to_vec())
    }
}

impl std::fmt::Display for CompositionIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Index of a mixed nested sum: a weakly ordered `outer` block followed by a
/// strictly ordered `inner` block, with a strict inequality at the junction.
///
/// An empty outer block reduces the sum to the plain value of `inner`; an
/// empty inner block reduces it to the star value of `outer`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedIndex {
    outer: CompositionIndex,
    inner: CompositionIndex,
}

impl MixedIndex {
    pub fn new(outer: CompositionIndex, inner: CompositionIndex) -> Self {
        Self { outer, inner }
    }

    pub fn outer(&self) -> &CompositionIndex {
        &self.outer
    }

    pub fn inner(&self) -> &CompositionIndex {
        &self.inner
    }

    pub fn depth(&self) -> usize {
        self.outer.depth() + self.inner.depth()
    }
}

/// Core DP for nested sums: `F_j(t) = sum_{v <= t} v^{-e_j} F_{j+1}(v')`
/// where `v' = v - 1` for a strict relation and `v' = v` for a weak one.
/// `exponents` lists levels outermost first; `rels[j]` relates level `j` to
/// level `j+1` (the relation of the last level is irrelevant and omitted).
pub(crate) fn nested_sum_exact(n: u32, exponents: &[u32], rels: &[Rel]) -> Rational {
    let d = exponents.len();
    debug_assert!(d == 0 || rels.len() == d - 1);
    if d == 0 {
        return Rational::from(1);
    }
    let mut old = vec![Rational::new(); d];
    let mut new = vec![Rational::new(); d];
    for t in 1..=n {
        let tp = Integer::from(t);
        for j in (0..d).rev() {
            let inner = if j + 1 == d {
                Rational::from(1)
            } else if rels[j] == Rel::Strict {
                old[j + 1].clone()
            } else {
                new[j + 1].clone()
            };
            let weight = Rational::from((Integer::from(1), tp.clone().pow(exponents[j])));
            new[j] = old[j].clone() + inner * weight;
        }
        std::mem::swap(&mut old, &mut new);
    }
    old[0].clone()
}

/// Generalized harmonic number `H_n^{(p)} = sum_{j=1}^{n} j^{-p}`; `H_0 = 0`.
pub fn harmonic(n: u32, p: u32) -> Result<Rational> {
    if p == 0 {
        return Err(Error::ZeroHarmonicOrder);
    }
    let mut acc = Rational::new();
    for j in 1..=u64::from(n) {
        acc += Rational::from((Integer::from(1), Integer::from(j).pow(p)));
    }
    Ok(acc)
}

/// Multiple harmonic number `zeta_n(s)` over strictly decreasing indices.
///
/// Returns 1 for the empty index and 0 whenever `n < depth(s)`.
pub fn mhn(n: u32, s: &CompositionIndex) -> Result<Rational> {
    s.ensure_positive_parts()?;
    let rels = vec![Rel::Strict; s.depth().saturating_sub(1)];
    Ok(nested_sum_exact(n, s.parts(), &rels))
}

/// Multiple harmonic star number `zeta_n^*(s)` over weakly decreasing indices.
pub fn mhsn(n: u32, s: &CompositionIndex) -> Result<Rational> {
    s.ensure_positive_parts()?;
    let rels = vec![Rel::Weak; s.depth().saturating_sub(1)];
    Ok(nested_sum_exact(n, s.parts(), &rels))
}

/// Mixed nested sum: weak inequalities across the outer block, a strict
/// inequality at the junction, strict inequalities across the inner block.
/// Zero exponents are allowed and contribute the factor 1.
pub fn mixed_mhn(n: u32, idx: &MixedIndex) -> Rational {
    let m = idx.outer.depth();
    let k = idx.inner.depth();
    let mut exponents = Vec::with_capacity(m + k);
    exponents.extend_from_slice(idx.outer.parts());
    exponents.extend_from_slice(idx.inner.parts());
    let mut rels = vec![Rel::Weak; m.saturating_sub(1)];
    if m > 0 && k > 0 {
        rels.push(Rel::Strict);
    }
    rels.extend(vec![Rel::Strict; k.saturating_sub(1)]);
    nested_sum_exact(n, &exponents, &rels)
}

/// Shifted all-ones sum `sum_{1 <= k_m < ... < k_1 <= n} prod 1/(k_i + r)`.
///
/// Equals `mhn(n, {1}_m)` at `r = 0`, is 1 at `m = 0`, and 0 when `n < m`.
pub fn shifted_mhn(n: u32, m: u32, r: u32) -> Rational {
    let d = m as usize;
    if d == 0 {
        return Rational::from(1);
    }
    let mut old = vec![Rational::new(); d];
    let mut new = vec![Rational::new(); d];
    for t in 1..=n {
        let weight = Rational::from((1u32, u64::from(t) + u64::from(r)));
        for j in (0..d).rev() {
            let inner = if j + 1 == d {
                Rational::from(1)
            } else {
                old[j + 1].clone()
            };
            new[j] = old[j].clone() + inner * &weight;
        }
        std::mem::swap(&mut old, &mut new);
    }
    old[0].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force enumeration of the mixed nested sum, used as an
    /// independent oracle for small upper limits.
    fn brute_force_mixed(n: u32, outer: &[u32], inner: &[u32]) -> Rational {
        let mut exps = outer.to_vec();
        exps.extend_from_slice(inner);
        let m = outer.len();
        let d = exps.len();
        if d == 0 {
            return Rational::from(1);
        }
        let mut total = Rational::new();
        let mut stack: Vec<u32> = Vec::with_capacity(d);
        fn recurse(
            level: usize,
            d: usize,
            m: usize,
            n: u32,
            exps: &[u32],
            stack: &mut Vec<u32>,
            total: &mut Rational,
        ) {
            if level == d {
                let mut term = Rational::from(1);
                for (i, &v) in stack.iter().enumerate() {
                    term /= Rational::from(Integer::from(v).pow(exps[i]));
                }
                *total += term;
                return;
            }
            let hi = if level == 0 {
                n
            } else {
                let prev = stack[level - 1];
                // weak inside the outer block, strict at the junction and inside
                // the inner block
                if level < m {
                    prev
                } else {
                    prev.saturating_sub(1)
                }
            };
            for v in 1..=hi {
                stack.push(v);
                recurse(level + 1, d, m, n, exps, stack, total);
                stack.pop();
            }
        }
        recurse(0, d, m, n, &exps, &mut stack, &mut total);
        total
    }

    fn rat(n: i64, d: u64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn rational_results_are_canonical() {
        // all exact values stay in lowest terms with positive denominators
        let v = harmonic(6, 1).unwrap();
        assert_eq!((v.numer().to_u32(), v.denom().to_u32()), (Some(49), Some(20)));
        let w = mhsn(4, &CompositionIndex::ones(2)).unwrap();
        assert_eq!(w.denom().to_u32(), Some(576 / 4));
        assert_eq!(Rational::from((6, -4)), Rational::from((-3, 2)));
    }

    #[test]
    fn harmonic_basics() {
        assert_eq!(harmonic(0, 1).unwrap(), Rational::new());
        assert_eq!(harmonic(3, 1).unwrap(), rat(11, 6));
        assert_eq!(harmonic(2, 2).unwrap(), rat(5, 4));
        assert_eq!(harmonic(5, 0), Err(Error::ZeroHarmonicOrder));
    }

    #[test]
    fn mhn_conventions() {
        assert_eq!(mhn(5, &CompositionIndex::empty()).unwrap(), rat(1, 1));
        assert_eq!(mhn(1, &CompositionIndex::ones(2)).unwrap(), Rational::new());
        assert_eq!(mhn(2, &CompositionIndex::ones(2)).unwrap(), rat(1, 2));
        assert_eq!(mhn(3, &CompositionIndex::ones(2)).unwrap(), rat(1, 1));
        assert_eq!(
            mhn(4, &CompositionIndex::new(vec![0, 1])),
            Err(Error::ZeroPart)
        );
    }

    #[test]
    fn mhsn_conventions() {
        assert_eq!(mhsn(0, &CompositionIndex::ones(1)).unwrap(), Rational::new());
        assert_eq!(mhsn(0, &CompositionIndex::empty()).unwrap(), rat(1, 1));
        assert_eq!(mhsn(2, &CompositionIndex::ones(2)).unwrap(), rat(7, 4));
        assert_eq!(mhsn(2, &CompositionIndex::ones(1)).unwrap(), rat(3, 2));
    }

    #[test]
    fn mhn_depth_one_is_harmonic() {
        for n in 0..=12 {
            for p in 1..=4 {
                assert_eq!(
                    mhn(n, &CompositionIndex::repeated(p, 1)).unwrap(),
                    harmonic(n, p).unwrap()
                );
                assert_eq!(
                    mhsn(n, &CompositionIndex::repeated(p, 1)).unwrap(),
                    harmonic(n, p).unwrap()
                );
            }
        }
    }

    #[test]
    fn mixed_reduces_to_plain_and_star() {
        let s = CompositionIndex::new(vec![2, 1]);
        for n in 0..=8 {
            let plain = mixed_mhn(n, &MixedIndex::new(CompositionIndex::empty(), s.clone()));
            assert_eq!(plain, mhn(n, &s).unwrap());
            let star = mixed_mhn(n, &MixedIndex::new(s.clone(), CompositionIndex::empty()));
            assert_eq!(star, mhsn(n, &s).unwrap());
        }
    }

    #[test]
    fn mixed_star_zero_exponent_example() {
        // zeta_2^*(0,1) counts weakly decreasing pairs with weight 1/n_2.
        let idx = MixedIndex::new(CompositionIndex::new(vec![0, 1]), CompositionIndex::empty());
        assert_eq!(mixed_mhn(2, &idx), rat(5, 2));
    }

    #[test]
    fn mixed_agrees_with_enumeration() {
        // All block shapes with total depth <= 4, upper limits <= 6,
        // exponents in {0,1,2}.
        let blocks: &[&[u32]] = &[&[], &[1], &[2], &[0, 1], &[1, 1], &[2, 1]];
        for n in 0..=6u32 {
            for outer in blocks {
                for inner in blocks {
                    if outer.len() + inner.len() > 4 {
                        continue;
                    }
                    // zero parts only make sense in the outer block here
                    if inner.contains(&0) {
                        continue;
                    }
                    let idx = MixedIndex::new(
                        CompositionIndex::new(outer.to_vec()),
                        CompositionIndex::new(inner.to_vec()),
                    );
                    assert_eq!(
                        mixed_mhn(n, &idx),
                        brute_force_mixed(n, outer, inner),
                        "n={n} outer={outer:?} inner={inner:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn shifted_mhn_values() {
        assert_eq!(shifted_mhn(5, 0, 3), rat(1, 1));
        assert_eq!(shifted_mhn(2, 1, 1), rat(5, 6));
        assert_eq!(shifted_mhn(3, 2, 0), rat(1, 1));
        assert_eq!(shifted_mhn(2, 3, 1), Rational::new());
    }

    #[test]
    fn shifted_mhn_matches_plain_at_zero_shift() {
        for n in 0..=30 {
            for m in 0..=6 {
                assert_eq!(
                    shifted_mhn(n, m, 0),
                    mhn(n, &CompositionIndex::ones(m as usize)).unwrap(),
                    "n={n} m={m}"
                );
            }
        }
    }

    #[test]
    fn star_dominates_plain_for_all_ones() {
        // star sums include every strict tuple plus the ones with repeats,
        // so equality holds only when no repeats are possible: depth <= 1,
        // or n = 0 where both sums are empty
        for n in 0..=10u32 {
            for m in 0..=5usize {
                let star = mhsn(n, &CompositionIndex::ones(m)).unwrap();
                let plain = mhn(n, &CompositionIndex::ones(m)).unwrap();
                assert!(star >= plain, "n={n} m={m}");
                let equal = star == plain;
                let boundary = m <= 1 || n == 0;
                assert_eq!(equal, boundary, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn outer_index_peeling() {
        // zeta_n(1,s) - zeta_{n-1}(1,s) = zeta_{n-1}(s)/n
        let suffixes: &[&[u32]] = &[&[], &[1], &[2], &[1, 1], &[2, 1, 1]];
        for suffix in suffixes {
            for n in 1..=30u32 {
                let mut s = vec![1u32];
                s.extend_from_slice(suffix);
                let s = CompositionIndex::new(s);
                let lhs = mhn(n, &s).unwrap() - mhn(n - 1, &s).unwrap();
                let rhs = mhn(n - 1, &CompositionIndex::new(suffix.to_vec())).unwrap()
                    / Rational::from(n);
                assert_eq!(lhs, rhs, "n={n} suffix={suffix:?}");
            }
        }
    }
}
