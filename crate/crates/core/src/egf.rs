//! Counts of circled-letter arrays from exponential generating functions.
//!
//! Every count is read off as an EGF coefficient: the coefficient of
//! `x^i y^j z^k` in `exp(f)` multiplied by `i! j! k!`. Which exponent `f` and
//! which multi-degree depends on the symmetry and on the parity of the shape.
//!
//! For odd x odd shapes the rotation and full-symmetry exponents, taken
//! literally, produce exactly half of the true count (e.g. 4 instead of 8 for
//! the 3x1 rotation count, 1 instead of 2 for a single cell). The shipped
//! values are scaled by [`ROTATION_SCALE`] and [`FULL_SYMMETRY_SCALE`]; the
//! scale is re-derived against brute force and the closed sums by
//! `wordrep verify`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{to_natural, Natural, Rational};
use crate::series::{Caps, Degree, TruncatedSeries};

/// Global factor applied to the odd x odd rotation coefficient.
pub const ROTATION_SCALE: u32 = 2;

/// Global factor applied to the odd x odd full-symmetry coefficient.
pub const FULL_SYMMETRY_SCALE: u32 = 2;

/// An `m x n` grid: `m` rows, `n` columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridShape {
    m: usize,
    n: usize,
}

impl GridShape {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidShape { m, n });
        }
        Ok(GridShape { m, n })
    }

    pub fn rows(self) -> usize {
        self.m
    }

    pub fn cols(self) -> usize {
        self.n
    }

    pub fn cells(self) -> usize {
        self.m * self.n
    }

    pub fn transpose(self) -> Self {
        GridShape {
            m: self.n,
            n: self.m,
        }
    }

    pub fn is_square(self) -> bool {
        self.m == self.n
    }

    /// Cells in one of the two L shapes swapped by the half turn of an
    /// odd x odd grid.
    pub fn rotation_half(self) -> usize {
        self.n * (self.m / 2) + self.n / 2
    }

    /// Every shape with at most `max_cells` cells, ordered by
    /// `(cells, rows, cols)`.
    pub fn all_up_to(max_cells: usize) -> Vec<GridShape> {
        let mut out: Vec<GridShape> = (1..=max_cells)
            .flat_map(|m| (1..=max_cells / m).map(move |n| GridShape { m, n }))
            .collect();
        out.sort_by_key(|s| (s.cells(), s.m, s.n));
        out
    }
}

impl fmt::Display for GridShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.m, self.n)
    }
}

/// The seven generating-function exponents, one per symmetry and parity class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exponent {
    /// `e^z - 1 + z e^z`: all arrays.
    All,
    /// `2(e^z - 1) + (e^z - 1)^2/2 + z e^{2z}`: reflection through a line
    /// between rows.
    ReflectEven,
    /// `(y+1) e^{y+z} + (z + 1/2) e^{2z} - 3/2`: reflection fixing a middle
    /// row of length tracked by `y`.
    ReflectOdd,
    /// `(e^z - 1)^2/2 + 2(e^z - 1) + z + z e^{2z}`: half turn with a fixed
    /// central cell.
    RotateOddOdd,
    /// `3(1+z) e^{2z} - (2z+1) e^z - 2`: both reflections, no middle line.
    FullEvenEven,
    /// `(z + 1/2) e^{2x+2z} + (3x + 5/2) e^{2x} - 2(x+1) e^x + e^{z+x} - 2`:
    /// both reflections with a middle column (`z`) and quadrants (`x`).
    FullEvenOdd,
    /// Both reflections with a middle cross: `x`, `y` track the half column
    /// and half row, `z` the quadrant.
    FullOddOdd,
}

impl Exponent {
    pub const ALL: [Exponent; 7] = [
        Exponent::All,
        Exponent::ReflectEven,
        Exponent::ReflectOdd,
        Exponent::RotateOddOdd,
        Exponent::FullEvenEven,
        Exponent::FullEvenOdd,
        Exponent::FullOddOdd,
    ];

    pub fn selector(self) -> &'static str {
        match self {
            Exponent::All => "P",
            Exponent::ReflectEven => "Heven",
            Exponent::ReflectOdd => "Hodd",
            Exponent::RotateOddOdd => "Roddodd",
            Exponent::FullEvenEven => "See",
            Exponent::FullEvenOdd => "Seo",
            Exponent::FullOddOdd => "Soo",
        }
    }

    /// The exponent truncated at `caps`. Its constant term is always zero;
    /// a nonzero one would be a transcription error and is reported as such.
    pub fn series(self, caps: Caps) -> Result<TruncatedSeries> {
        let one = TruncatedSeries::one(caps);
        let x = TruncatedSeries::x(caps);
        let y = TruncatedSeries::y(caps);
        let z = TruncatedSeries::z(caps);
        let e = |a, b, c| TruncatedSeries::exp_linear(caps, a, b, c);
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        let konst = |num: i64, den: i64| {
            TruncatedSeries::constant(caps, Rational::new(BigInt::from(num), BigInt::from(den)))
        };

        let f = match self {
            Exponent::All => &(&e(0, 0, 1) - &one) + &(&z * &e(0, 0, 1)),
            Exponent::ReflectEven => {
                let em1 = &e(0, 0, 1) - &one;
                em1.scale_int(2) + (&em1 * &em1).scale(&half) + &z * &e(0, 0, 2)
            }
            Exponent::ReflectOdd => {
                (&y + &one) * e(0, 1, 1) + (&z + &konst(1, 2)) * e(0, 0, 2) - konst(3, 2)
            }
            Exponent::RotateOddOdd => {
                let em1 = &e(0, 0, 1) - &one;
                (&em1 * &em1).scale(&half) + em1.scale_int(2) + &z + &z * &e(0, 0, 2)
            }
            Exponent::FullEvenEven => {
                (&one + &z).scale_int(3) * e(0, 0, 2)
                    - (z.scale_int(2) + &one) * e(0, 0, 1)
                    - konst(2, 1)
            }
            Exponent::FullEvenOdd => {
                (&z + &konst(1, 2)) * e(2, 0, 2) + (x.scale_int(3) + konst(5, 2)) * e(2, 0, 0)
                    - ((&x + &one) * e(1, 0, 0)).scale_int(2)
                    + e(1, 0, 1)
                    - konst(2, 1)
            }
            Exponent::FullOddOdd => {
                &y + &z + &x - konst(2, 1)
                    + &y * &e(0, 2, 2)
                    + &x * &e(2, 0, 2)
                    + (&z * &e(0, 0, 2)).scale_int(3)
                    - (&z * &e(0, 0, 1)).scale_int(2)
                    + e(1, 1, 1)
                    - e(0, 0, 1).scale_int(2)
                    + e(0, 0, 2).scale_int(2)
                    + e(2, 0, 2).scale(&half)
                    + e(0, 2, 2).scale(&half)
            }
        };
        if !f.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm(format!(
                "{} exponent has constant term {}",
                self.selector(),
                f.constant_term()
            )));
        }
        Ok(f)
    }

    /// `d.x! d.y! d.z! [x^d.x y^d.y z^d.z] exp(f)`, which must be a count.
    pub fn count_at(self, d: Degree) -> Result<Natural> {
        let caps = Caps::new(d.x, d.y, d.z);
        let g = self.series(caps)?.exp()?;
        to_natural(
            &g.egf_coeff(d)?,
            &format!("{} coefficient at {:?}", self.selector(), d),
        )
    }
}

impl FromStr for Exponent {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Exponent::ALL
            .into_iter()
            .find(|e| e.selector() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Exponent::ALL.iter().map(|e| e.selector()).collect();
                format!(
                    "unknown selector {s:?}; expected one of {}",
                    names.join("|")
                )
            })
    }
}

pub fn count_p(shape: GridShape) -> Result<Natural> {
    Exponent::All.count_at(Degree::new(0, 0, shape.cells()))
}

/// Arrays fixed by the reflection that swaps row `r` with row `m-1-r`.
pub fn count_h(shape: GridShape) -> Result<Natural> {
    let (m, n) = (shape.rows(), shape.cols());
    let half = m / 2;
    if m % 2 == 0 {
        Exponent::ReflectEven.count_at(Degree::new(0, 0, half * n))
    } else {
        Exponent::ReflectOdd.count_at(Degree::new(0, n, half * n))
    }
}

pub fn count_v(shape: GridShape) -> Result<Natural> {
    count_h(shape.transpose())
}

pub fn count_r(shape: GridShape) -> Result<Natural> {
    let (m, n) = (shape.rows(), shape.cols());
    if m % 2 == 0 {
        count_h(shape)
    } else if n % 2 == 0 {
        count_h(shape.transpose())
    } else {
        Ok(count_r_unscaled(shape)? * ROTATION_SCALE)
    }
}

/// The odd x odd rotation coefficient without [`ROTATION_SCALE`].
pub fn count_r_unscaled(shape: GridShape) -> Result<Natural> {
    if shape.rows().is_multiple_of(2) || shape.cols().is_multiple_of(2) {
        return Err(Error::ParityMismatch {
            operation: "unscaled rotation count",
            requirement: "odd rows and odd columns",
            shape,
        });
    }
    Exponent::RotateOddOdd.count_at(Degree::new(0, 0, shape.rotation_half()))
}

/// Arrays fixed by both reflections (and hence by the half turn).
pub fn count_s(shape: GridShape) -> Result<Natural> {
    let (m, n) = (shape.rows(), shape.cols());
    let (h, w) = (m / 2, n / 2);
    let quadrant = h * w;
    match (m % 2, n % 2) {
        (0, 0) => Exponent::FullEvenEven.count_at(Degree::new(0, 0, quadrant)),
        (0, _) => Exponent::FullEvenOdd.count_at(Degree::new(quadrant, 0, h)),
        (_, 0) => count_s(shape.transpose()),
        _ => Ok(count_s_unscaled(shape)? * FULL_SYMMETRY_SCALE),
    }
}

/// The odd x odd full-symmetry coefficient without [`FULL_SYMMETRY_SCALE`].
pub fn count_s_unscaled(shape: GridShape) -> Result<Natural> {
    if shape.rows().is_multiple_of(2) || shape.cols().is_multiple_of(2) {
        return Err(Error::ParityMismatch {
            operation: "unscaled full-symmetry count",
            requirement: "odd rows and odd columns",
            shape,
        });
    }
    let (h, w) = (shape.rows() / 2, shape.cols() / 2);
    Exponent::FullOddOdd.count_at(Degree::new(h, w, h * w))
}

/// Orbits under D2 by Burnside: `(P + H + V + R) / 4`.
pub fn burnside_orbits(
    shape: GridShape,
    p: &Natural,
    h: &Natural,
    v: &Natural,
    r: &Natural,
) -> Result<Natural> {
    if shape.is_square() {
        return Err(Error::SquareShape(shape));
    }
    let total = p + h + v + r;
    let (q, rem) = total.div_rem(&Natural::from(4u32));
    if !rem.is_zero() {
        return Err(Error::Inconsistent(format!(
            "P+H+V+R = {total} is not divisible by 4 for {shape}"
        )));
    }
    Ok(q)
}

/// Arrays fixed by no non-identity symmetry: `P - (H-S) - (V-S) - (R-S) - S`.
pub fn free_arrays(
    shape: GridShape,
    p: &Natural,
    h: &Natural,
    v: &Natural,
    r: &Natural,
    s: &Natural,
) -> Result<Natural> {
    if shape.is_square() {
        return Err(Error::SquareShape(shape));
    }
    let big = |n: &Natural| BigInt::from(n.clone());
    let c = big(p) - big(h) - big(v) - big(r) + big(s) * 2;
    let c = to_natural(
        &Rational::from_integer(c),
        &format!("free-array count for {shape}"),
    )?;
    if !(&c % 4u32).is_zero() {
        return Err(Error::Inconsistent(format!(
            "free-array count {c} for {shape} is not a multiple of 4"
        )));
    }
    Ok(c)
}

pub fn count_w(shape: GridShape) -> Result<Natural> {
    if shape.is_square() {
        return Err(Error::SquareShape(shape));
    }
    burnside_orbits(
        shape,
        &count_p(shape)?,
        &count_h(shape)?,
        &count_v(shape)?,
        &count_r(shape)?,
    )
}

pub fn count_c(shape: GridShape) -> Result<Natural> {
    if shape.is_square() {
        return Err(Error::SquareShape(shape));
    }
    free_arrays(
        shape,
        &count_p(shape)?,
        &count_h(shape)?,
        &count_v(shape)?,
        &count_r(shape)?,
        &count_s(shape)?,
    )
}

/// Raw exponent and exponential for the `series` debugging command.
pub fn exponent_and_exp(which: Exponent, caps: Caps) -> Result<(TruncatedSeries, TruncatedSeries)> {
    let f = which.series(caps)?;
    let g = f.exp()?;
    Ok((f, g))
}

/// `num/den` rendering used by the `series` command.
pub fn render_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}
