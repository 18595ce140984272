//! Direct evaluation of the explicit multi-index sums for P, H, R and S.
//!
//! These never touch the series engine: each term is a product of
//! factorials, circled-partition counts `p_j(N, c)` (from a
//! [`StirlingTable`]) and small powers, accumulated as an exact rational.
//! The totals must come out as non-negative integers; anything else is
//! reported as an error rather than rounded.
//!
//! Lower summation bounds are the ones the combinatorics needs: the letter
//! count `j` may be 0 when the half being filled is empty, and the circle and
//! pair counts of the full-symmetry sum start at 0.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Pow, Zero};

use crate::egf::GridShape;
use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, pow2, to_natural, Natural, Rational, StirlingTable};

struct Terms<'a> {
    table: &'a StirlingTable,
    facts: Vec<Natural>,
    p_cache: HashMap<(usize, usize, usize), Natural>,
}

impl<'a> Terms<'a> {
    fn new(table: &'a StirlingTable, max: usize) -> Self {
        Terms {
            table,
            facts: (0..=max).map(factorial).collect(),
            p_cache: HashMap::new(),
        }
    }

    fn fact(&self, k: usize) -> &Natural {
        &self.facts[k]
    }

    fn p(&mut self, j: usize, total: usize, c: usize) -> Natural {
        let table = self.table;
        self.p_cache
            .entry((j, total, c))
            .or_insert_with(|| table.p_count_sum(j, total, c))
            .clone()
    }

    fn ratio(num: Natural, den: Natural) -> Rational {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }
}

fn parity_error(operation: &'static str, requirement: &'static str, shape: GridShape) -> Error {
    Error::ParityMismatch {
        operation,
        requirement,
        shape,
    }
}

/// `P = sum_{c=1}^{N} sum_{j=0}^{c} C(N, j) p_j(N, c)` with `N = mn`.
pub fn sum_p(shape: GridShape, table: &StirlingTable) -> Natural {
    let n = shape.cells();
    let mut total = Natural::zero();
    for c in 1..=n {
        for j in 0..=c {
            total += binomial(n, j as i64) * table.p_count_sum(j, n, c);
        }
    }
    total
}

/// Horizontal-reflection count for an even number of rows.
///
/// The top half has `K = (m/2) n` cells holding `j` letters, `q` of them
/// circled. `t` counts circled/uncircled interchanges and `w` interchanges
/// between two uncircled letters; every remaining uncircled letter reflects
/// to itself or to a fresh letter.
pub fn sum_h_even(shape: GridShape, table: &StirlingTable) -> Result<Natural> {
    if !shape.rows().is_multiple_of(2) {
        return Err(parity_error("sum_h_even", "an even number of rows", shape));
    }
    let k = shape.rows() / 2 * shape.cols();
    let mut t_ = Terms::new(table, k);
    let mut total = Rational::zero();
    for j in 1..=k {
        for q in 0..=j {
            let pq = t_.p(q, k, j);
            let lead = t_.fact(k) * pq * t_.fact(j - q);
            if lead.is_zero() {
                continue;
            }
            for t in 0..=(j - q).min(q) {
                for w in 0..=(j - q - t) / 2 {
                    let den = t_.fact(k - q)
                        * t_.fact(t)
                        * t_.fact(q - t)
                        * t_.fact(w)
                        * t_.fact(j - q - t - 2 * w);
                    let e = (j - q - t) as i64 - 3 * w as i64;
                    total += Terms::ratio(lead.clone(), den) * pow2(e);
                }
            }
        }
    }
    to_natural(&total, &format!("even-row reflection sum for {shape}"))
}

/// Horizontal-reflection count for an odd number of rows.
///
/// Index roles: `j` letters in the top half (`K = ((m-1)/2) n` cells), `i`
/// of them circled; `q` of the uncircled ones reappear in the middle row,
/// covering `k` of its cells with `E` circles among them; the other `n-k`
/// middle cells hold `v` fresh letters with `l` circles; `t` and `w` count
/// interchanges as in the even case.
pub fn sum_h_odd(shape: GridShape, table: &StirlingTable) -> Result<Natural> {
    if shape.rows().is_multiple_of(2) {
        return Err(parity_error("sum_h_odd", "an odd number of rows", shape));
    }
    let n = shape.cols();
    let big_k = shape.rows() / 2 * n;
    let mut t_ = Terms::new(table, big_k.max(n));
    let mut total = Rational::zero();
    for j in 0..=big_k {
        for i in 0..=j {
            let pi = t_.p(i, big_k, j);
            let top = t_.fact(big_k) * t_.fact(n) * pi * t_.fact(j - i);
            if top.is_zero() {
                continue;
            }
            for q in 0..=(j - i).min(n) {
                for k in q..=n {
                    for e in 0..=q {
                        let mid = t_.p(e, k, q);
                        if mid.is_zero() {
                            continue;
                        }
                        for v in (n - k).min(1)..=n - k {
                            for l in 0..=v {
                                let rest = t_.p(l, n - k, v);
                                if rest.is_zero() {
                                    continue;
                                }
                                let num = &top * &mid * rest;
                                let fixed_den = t_.fact(big_k - i)
                                    * t_.fact(e)
                                    * t_.fact(k - e)
                                    * t_.fact(n - k - l)
                                    * t_.fact(l);
                                for t in 0..=(j - i - q).min(i) {
                                    for w in 0..=(j - i - q - t) / 2 {
                                        let den = &fixed_den
                                            * t_.fact(i - t)
                                            * t_.fact(t)
                                            * t_.fact(w)
                                            * t_.fact(j - i - q - t - 2 * w);
                                        let pw = (j - i - q - t) as i64 - 3 * w as i64;
                                        total += Terms::ratio(num.clone(), den) * pow2(pw);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    to_natural(&total, &format!("odd-row reflection sum for {shape}"))
}

/// Half-turn count for odd x odd shapes, summing over the top L of
/// `N = n floor(m/2) + floor(n/2)` cells.
///
/// `q` counts uncircled letters that rotate onto themselves; the `(1+q)`
/// factor chooses the central cell's letter (fresh, or one of those `q`) and
/// the leading 2 chooses whether it is circled.
pub fn sum_r_oddodd(shape: GridShape, table: &StirlingTable) -> Result<Natural> {
    if shape.rows().is_multiple_of(2) || shape.cols().is_multiple_of(2) {
        return Err(parity_error(
            "sum_r_oddodd",
            "odd rows and odd columns",
            shape,
        ));
    }
    let big_n = shape.rotation_half();
    if big_n == 0 {
        // Lone central cell: a fresh letter, circled or not.
        return Ok(Natural::from(2u32));
    }
    let mut t_ = Terms::new(table, big_n);
    let mut total = Rational::zero();
    for j in 1..=big_n {
        for i in 0..=j {
            let pi = t_.p(i, big_n, j);
            let lead = t_.fact(big_n) * pi * t_.fact(j - i);
            if lead.is_zero() {
                continue;
            }
            for q in 0..=j - i {
                let num = &lead * Natural::from(1 + q);
                for t in 0..=i.min(j - i - q) {
                    for s in 0..=(j - i - q - t) / 2 {
                        let den = t_.fact(big_n - i)
                            * t_.fact(t)
                            * t_.fact(q)
                            * t_.fact(i - t)
                            * t_.fact(s)
                            * t_.fact(j - i - q - t - 2 * s);
                        total += Terms::ratio(num.clone(), den) * pow2(1 - s as i64);
                    }
                }
            }
        }
    }
    to_natural(&total, &format!("rotation sum for {shape}"))
}

/// Full-symmetry count for even x even shapes over the upper-left quadrant.
///
/// `j` letters, `q` circled; `l` pairs a circled with an uncircled letter
/// (3 ways each), `s` pairs two uncircled letters (3 ways each); every
/// remaining uncircled letter is a singleton in one of 5 ways.
pub fn sum_s_eveneven(shape: GridShape, table: &StirlingTable) -> Result<Natural> {
    if !shape.rows().is_multiple_of(2) || !shape.cols().is_multiple_of(2) {
        return Err(parity_error(
            "sum_s_eveneven",
            "even rows and even columns",
            shape,
        ));
    }
    let quad = (shape.rows() / 2) * (shape.cols() / 2);
    let mut t_ = Terms::new(table, quad);
    let mut acc = Rational::zero();
    for j in 1..=quad {
        for q in 0..=j {
            let pq = t_.p(q, quad, j);
            let lead = t_.fact(quad) * pq * t_.fact(j - q);
            if lead.is_zero() {
                continue;
            }
            for l in 0..=q.min(j - q) {
                for s in 0..=(j - q - l) / 2 {
                    let num = &lead
                        * Pow::pow(Natural::from(3u32), (l + s) as u32)
                        * Pow::pow(Natural::from(5u32), (j - q - l - 2 * s) as u32);
                    let den = t_.fact(quad - q)
                        * t_.fact(l)
                        * t_.fact(q - l)
                        * t_.fact(s)
                        * t_.fact(j - q - l - 2 * s);
                    acc += Terms::ratio(num, den);
                }
            }
        }
    }
    to_natural(&acc, &format!("full-symmetry sum for {shape}"))
}
