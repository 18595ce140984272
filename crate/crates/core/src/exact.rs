//! Exact integers, rationals and the counting functions everything else is
//! built from: factorials, binomials, Stirling numbers of the second kind and
//! the circled-partition counts `p_j(N, c)`.
//!
//! `p_j(N, c)` is the number of ways to partition `N` cells into `c` blocks
//! when `j` designated cells must each sit in a different block (the circled
//! cells). It has two independent evaluations here: [`p_count`] expands the
//! exponential generating function `e^{jz} (e^z - 1)^{c-j} / (c-j)!` by the
//! binomial theorem, and [`p_count_sum`] evaluates the Stirling-number sum.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Unbounded non-negative integer. All final counts live here.
pub type Natural = BigUint;

/// Exact rational, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn factorial(k: usize) -> Natural {
    (1..=k as u64).fold(Natural::one(), |acc, i| acc * i)
}

pub fn binomial(n: usize, k: i64) -> Natural {
    if k < 0 || k as u64 > n as u64 {
        return Natural::zero();
    }
    let k = (k as usize).min(n - k as usize);
    let mut acc = Natural::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Stirling number of the second kind `{n, t}`, by the triangle recurrence.
pub fn stirling2(n: usize, t: usize) -> Natural {
    if t > n {
        return Natural::zero();
    }
    let mut row = vec![Natural::zero(); t + 1];
    row[0] = Natural::one();
    for i in 1..=n {
        for k in (1..=t.min(i)).rev() {
            let carried = std::mem::take(&mut row[k]) * k;
            row[k] = carried + &row[k - 1];
        }
        row[0] = Natural::zero();
    }
    row[t].clone()
}

/// `p_j(N, c)` from its generating function:
/// `(N-j)! [z^{N-j}] e^{jz}(e^z-1)^r / r! = (1/r!) sum_i C(r,i) (-1)^{r-i} (i+j)^{N-j}`
/// with `r = c - j`.
pub fn p_count(j: usize, total: usize, c: usize) -> Natural {
    if j > c || c > total {
        return Natural::zero();
    }
    let r = c - j;
    let k = (total - j) as u32;
    let mut acc = BigInt::zero();
    for i in 0..=r {
        let term = BigInt::from(binomial(r, i as i64)) * Pow::pow(BigInt::from(i + j), k);
        if (r - i).is_multiple_of(2) {
            acc += term;
        } else {
            acc -= term;
        }
    }
    let r_fact = BigInt::from(factorial(r));
    debug_assert!((&acc % &r_fact).is_zero());
    (acc / r_fact)
        .to_biguint()
        .expect("circled-partition count is non-negative")
}

/// Triangle of Stirling numbers used by the closed-sum evaluations.
///
/// Kept as an explicit value (rather than recomputed on demand) so a caller
/// can substitute a deliberately corrupted table and watch the cross-checks
/// catch it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StirlingTable {
    rows: Vec<Vec<Natural>>,
}

impl StirlingTable {
    pub fn new(max_n: usize) -> Self {
        let mut rows: Vec<Vec<Natural>> = Vec::with_capacity(max_n + 1);
        rows.push(vec![Natural::one()]);
        for n in 1..=max_n {
            let prev = &rows[n - 1];
            let mut row = vec![Natural::zero(); n + 1];
            for t in 1..=n {
                let stay = if t < n { &prev[t] * t } else { Natural::zero() };
                row[t] = stay + &prev[t - 1];
            }
            rows.push(row);
        }
        StirlingTable { rows }
    }

    /// Shared table covering `n <= 64`.
    pub fn standard() -> &'static StirlingTable {
        static TABLE: OnceLock<StirlingTable> = OnceLock::new();
        TABLE.get_or_init(|| StirlingTable::new(64))
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, n: usize, t: usize) -> Natural {
        if t > n {
            return Natural::zero();
        }
        match self.rows.get(n) {
            Some(row) => row[t].clone(),
            None => panic!("Stirling table covers n <= {}, asked for {n}", self.max_n()),
        }
    }

    /// Overwrite one entry. Used for fault injection.
    pub fn set(&mut self, n: usize, t: usize, value: Natural) {
        self.rows[n][t] = value;
    }

    /// `p_j(N, c) = sum_{p=0}^{N-c} C(N-j, p) {N-j-p, c-j} j^p`.
    ///
    /// `p` counts the uncircled cells that join a circled block; the Stirling
    /// factor partitions the remaining `N-j-p` cells into the `c-j` uncircled
    /// blocks.
    pub fn p_count_sum(&self, j: usize, total: usize, c: usize) -> Natural {
        if j > c || c > total {
            return Natural::zero();
        }
        let mut acc = Natural::zero();
        for p in 0..=total - c {
            let ways = binomial(total - j, p as i64) * self.get(total - j - p, c - j);
            acc += ways * Pow::pow(Natural::from(j), p as u32);
        }
        acc
    }
}

/// [`StirlingTable::p_count_sum`] against the standard table.
pub fn p_count_sum(j: usize, total: usize, c: usize) -> Natural {
    StirlingTable::standard().p_count_sum(j, total, c)
}

pub fn pow2(exponent: i64) -> Rational {
    let base = Rational::from_integer(BigInt::from(2));
    if exponent >= 0 {
        Pow::pow(base, exponent as u64)
    } else {
        Pow::pow(base.recip(), exponent.unsigned_abs())
    }
}

pub fn rational_from(n: &Natural) -> Rational {
    Rational::from_integer(BigInt::from(n.clone()))
}

/// Converts an exact rational that must be a count into a [`Natural`].
pub fn to_natural(value: &Rational, what: &str) -> Result<Natural> {
    if !value.is_integer() || value.is_negative() {
        return Err(Error::NonIntegral {
            what: what.to_string(),
            value: value.to_string(),
        });
    }
    Ok(value
        .to_integer()
        .to_biguint()
        .expect("non-negative integer"))
}

pub fn to_u64(n: &Natural) -> Option<u64> {
    n.to_u64()
}
