//! Truncated power series in `x`, `y`, `z` over exact rationals.
//!
//! Coefficients are stored densely for every multi-degree up to the caps, so a
//! series is exact modulo `(x^(dx+1), y^(dy+1), z^(dz+1))`. Binary operations
//! work at the componentwise minimum of the operands' caps.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::exact::{factorial, rational_from, Rational};

/// Per-variable degree bounds `(dx, dy, dz)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Caps {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

impl Caps {
    pub const fn new(x: usize, y: usize, z: usize) -> Self {
        Caps { x, y, z }
    }

    pub fn meet(self, other: Caps) -> Caps {
        Caps::new(
            self.x.min(other.x),
            self.y.min(other.y),
            self.z.min(other.z),
        )
    }

    pub fn contains(self, d: Degree) -> bool {
        d.x <= self.x && d.y <= self.y && d.z <= self.z
    }

    fn len(self) -> usize {
        (self.x + 1) * (self.y + 1) * (self.z + 1)
    }

    fn index(self, d: Degree) -> usize {
        (d.x * (self.y + 1) + d.y) * (self.z + 1) + d.z
    }

    /// All multi-degrees within the caps, in storage order (lexicographic in
    /// `x`, `y`, `z`).
    pub fn degrees(self) -> impl Iterator<Item = Degree> {
        (0..=self.x).flat_map(move |i| {
            (0..=self.y).flat_map(move |j| (0..=self.z).map(move |k| Degree::new(i, j, k)))
        })
    }
}

impl fmt::Display for Caps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.x, self.y, self.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Degree {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

impl Degree {
    pub const fn new(x: usize, y: usize, z: usize) -> Self {
        Degree { x, y, z }
    }

    pub fn total(self) -> usize {
        self.x + self.y + self.z
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    caps: Caps,
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    pub fn zero(caps: Caps) -> Self {
        TruncatedSeries {
            caps,
            coeffs: vec![Rational::zero(); caps.len()],
        }
    }

    pub fn constant(caps: Caps, value: Rational) -> Self {
        let mut s = Self::zero(caps);
        s.coeffs[0] = value;
        s
    }

    pub fn one(caps: Caps) -> Self {
        Self::constant(caps, Rational::one())
    }

    pub fn build(caps: Caps, terms: impl IntoIterator<Item = (Degree, Rational)>) -> Result<Self> {
        let mut s = Self::zero(caps);
        for (d, c) in terms {
            if !caps.contains(d) {
                return Err(Error::DegreeOutOfCaps(d.x, d.y, d.z));
            }
            let idx = caps.index(d);
            s.coeffs[idx] += c;
        }
        Ok(s)
    }

    /// The monomial `x^i y^j z^k`, or zero if it lies beyond the caps.
    pub fn monomial(caps: Caps, d: Degree) -> Self {
        let mut s = Self::zero(caps);
        if caps.contains(d) {
            s.coeffs[caps.index(d)] = Rational::one();
        }
        s
    }

    pub fn x(caps: Caps) -> Self {
        Self::monomial(caps, Degree::new(1, 0, 0))
    }

    pub fn y(caps: Caps) -> Self {
        Self::monomial(caps, Degree::new(0, 1, 0))
    }

    pub fn z(caps: Caps) -> Self {
        Self::monomial(caps, Degree::new(0, 0, 1))
    }

    /// `e^{ax + by + cz}` from its closed-form coefficients
    /// `a^i b^j c^k / (i! j! k!)`.
    pub fn exp_linear(caps: Caps, a: i64, b: i64, c: i64) -> Self {
        let term = |base: i64, e: usize| -> Rational {
            Rational::new(
                Pow::pow(BigInt::from(base), e as u32),
                BigInt::from(factorial(e)),
            )
        };
        let coeffs = caps
            .degrees()
            .map(|d| term(a, d.x) * term(b, d.y) * term(c, d.z))
            .collect();
        TruncatedSeries { caps, coeffs }
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    pub fn coeff(&self, d: Degree) -> Result<&Rational> {
        if !self.caps.contains(d) {
            return Err(Error::DegreeOutOfCaps(d.x, d.y, d.z));
        }
        Ok(&self.coeffs[self.caps.index(d)])
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    /// Coefficients paired with their multi-degrees, in storage order.
    pub fn terms(&self) -> impl Iterator<Item = (Degree, &Rational)> {
        self.caps.degrees().zip(self.coeffs.iter())
    }

    /// Drops every coefficient beyond `caps` (which must not exceed ours).
    pub fn truncate(&self, caps: Caps) -> Self {
        let caps = caps.meet(self.caps);
        let coeffs = caps
            .degrees()
            .map(|d| self.coeffs[self.caps.index(d)].clone())
            .collect();
        TruncatedSeries { caps, coeffs }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        TruncatedSeries {
            caps: self.caps,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&Rational::from_integer(BigInt::from(k)))
    }

    /// Formal partial derivative in `z`; the result's `z` cap drops by one.
    pub fn derivative_z(&self) -> Self {
        let caps = Caps::new(self.caps.x, self.caps.y, self.caps.z.saturating_sub(1));
        let coeffs = caps
            .degrees()
            .map(|d| {
                let src = Degree::new(d.x, d.y, d.z + 1);
                if self.caps.contains(src) {
                    &self.coeffs[self.caps.index(src)]
                        * Rational::from_integer(BigInt::from(d.z + 1))
                } else {
                    Rational::zero()
                }
            })
            .collect();
        TruncatedSeries { caps, coeffs }
    }

    /// `exp(f)` for `f` with zero constant term.
    ///
    /// With `E = x d/dx + y d/dy + z d/dz`, `g = exp(f)` satisfies
    /// `E g = (E f) g`, which at multi-degree `a` reads
    /// `|a| g_a = sum_{0 < b <= a} |b| f_b g_{a-b}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm(self.constant_term().to_string()));
        }
        let caps = self.caps;
        let mut g = Self::zero(caps);
        g.coeffs[0] = Rational::one();
        let weighted: Vec<(Degree, Rational)> = self
            .terms()
            .filter(|(d, c)| d.total() > 0 && !c.is_zero())
            .map(|(d, c)| (d, c * Rational::from_integer(BigInt::from(d.total()))))
            .collect();
        for a in caps.degrees().skip(1) {
            let mut acc = Rational::zero();
            for (b, fb) in &weighted {
                if b.x <= a.x && b.y <= a.y && b.z <= a.z {
                    let rest = Degree::new(a.x - b.x, a.y - b.y, a.z - b.z);
                    let gr = &g.coeffs[caps.index(rest)];
                    if !gr.is_zero() {
                        acc += fb * gr;
                    }
                }
            }
            g.coeffs[caps.index(a)] = acc / Rational::from_integer(BigInt::from(a.total()));
        }
        Ok(g)
    }

    /// Coefficient at `d` times `d.x! d.y! d.z!`, i.e. the EGF reading.
    pub fn egf_coeff(&self, d: Degree) -> Result<Rational> {
        let c = self.coeff(d)?;
        let norm = factorial(d.x) * factorial(d.y) * factorial(d.z);
        Ok(c * rational_from(&norm))
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let caps = self.caps.meet(other.caps);
        let coeffs = caps
            .degrees()
            .map(|d| {
                op(
                    &self.coeffs[self.caps.index(d)],
                    &other.coeffs[other.caps.index(d)],
                )
            })
            .collect();
        TruncatedSeries { caps, coeffs }
    }

    fn product(&self, other: &Self) -> Self {
        let caps = self.caps.meet(other.caps);
        let mut out = Self::zero(caps);
        let lhs: Vec<(Degree, &Rational)> = self
            .terms()
            .filter(|(d, c)| caps.contains(*d) && !c.is_zero())
            .collect();
        let rhs: Vec<(Degree, &Rational)> = other
            .terms()
            .filter(|(d, c)| caps.contains(*d) && !c.is_zero())
            .collect();
        for (da, ca) in &lhs {
            for (db, cb) in &rhs {
                let d = Degree::new(da.x + db.x, da.y + db.y, da.z + db.z);
                if caps.contains(d) {
                    out.coeffs[caps.index(d)] += *ca * *cb;
                }
            }
        }
        out
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.product(rhs)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            caps: self.caps,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $method(self, rhs: TruncatedSeries) -> TruncatedSeries {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&TruncatedSeries> for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $method(self, rhs: &TruncatedSeries) -> TruncatedSeries {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
