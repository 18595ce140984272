//! Per-shape bundles of counts with provenance and cross-checks.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::egf::{self, GridShape};
use crate::error::{Error, Result};
use crate::exact::{Natural, StirlingTable};
use crate::oracle::{self, OracleLimit, SymmetryOp};
use crate::sums;

/// Closed sums are cross-checked automatically up to this many cells.
pub const AUTO_SUM_CELLS: usize = 16;
/// ... and the rotation sum up to this L-shape size.
pub const AUTO_ROTATION_HALF: usize = 10;
/// ... and the full-symmetry sum up to this quadrant size.
pub const AUTO_QUADRANT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantity {
    P,
    H,
    V,
    R,
    S,
    W,
    C,
}

impl Quantity {
    pub const ALL: [Quantity; 7] = [
        Quantity::P,
        Quantity::H,
        Quantity::V,
        Quantity::R,
        Quantity::S,
        Quantity::W,
        Quantity::C,
    ];

    /// The fixed-point counts W and C are built from.
    pub const BASE: [Quantity; 5] = [
        Quantity::P,
        Quantity::H,
        Quantity::V,
        Quantity::R,
        Quantity::S,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::P => "P",
            Quantity::H => "H",
            Quantity::V => "V",
            Quantity::R => "R",
            Quantity::S => "S",
            Quantity::W => "W",
            Quantity::C => "C",
        }
    }

    pub fn needs_non_square(self) -> bool {
        matches!(self, Quantity::W | Quantity::C)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == s.trim())
            .ok_or_else(|| format!("unknown quantity {s:?}; expected P, H, V, R, S, W or C"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Egf,
    ClosedSum,
    Oracle,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Egf => "egf",
            Method::ClosedSum => "sum",
            Method::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MethodPolicy {
    /// Generating functions, cross-checked by whatever else is in range.
    #[default]
    Auto,
    Only(Method),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn compare(name: String, lhs: (&str, &Natural), rhs: (&str, &Natural)) -> Self {
        let passed = lhs.1 == rhs.1;
        CheckOutcome {
            name,
            passed,
            detail: format!("{}={} {}={}", lhs.0, lhs.1, rhs.0, rhs.1),
        }
    }

    fn predicate(name: &str, passed: bool, detail: String) -> Self {
        CheckOutcome {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Settings<'a> {
    pub oracle_limit: OracleLimit,
    pub stirling: &'a StirlingTable,
}

impl Default for Settings<'static> {
    fn default() -> Self {
        Settings {
            oracle_limit: OracleLimit::default(),
            stirling: StirlingTable::standard(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CountReport {
    pub shape: GridShape,
    values: BTreeMap<Quantity, Natural>,
    methods: BTreeMap<Quantity, Method>,
    pub consistency: Vec<CheckOutcome>,
}

impl CountReport {
    pub fn get(&self, q: Quantity) -> Option<&Natural> {
        self.values.get(&q)
    }

    pub fn method(&self, q: Quantity) -> Option<Method> {
        self.methods.get(&q).copied()
    }

    pub fn p(&self) -> Option<&Natural> {
        self.get(Quantity::P)
    }
    pub fn h(&self) -> Option<&Natural> {
        self.get(Quantity::H)
    }
    pub fn v(&self) -> Option<&Natural> {
        self.get(Quantity::V)
    }
    pub fn r(&self) -> Option<&Natural> {
        self.get(Quantity::R)
    }
    pub fn s(&self) -> Option<&Natural> {
        self.get(Quantity::S)
    }
    pub fn w(&self) -> Option<&Natural> {
        self.get(Quantity::W)
    }
    pub fn c(&self) -> Option<&Natural> {
        self.get(Quantity::C)
    }

    pub fn all_consistent(&self) -> bool {
        self.consistency.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.consistency.iter().filter(|c| !c.passed)
    }

    /// Distinct methods used for cross-checks, e.g. `["oracle", "sum"]`.
    pub fn check_methods(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        for c in &self.consistency {
            for m in [Method::Oracle, Method::ClosedSum] {
                if c.name.starts_with(m.name()) && !out.contains(&m.name()) {
                    out.push(m.name());
                }
            }
        }
        out.sort_unstable();
        out
    }
}

pub fn count_egf(q: Quantity, shape: GridShape) -> Result<Natural> {
    match q {
        Quantity::P => egf::count_p(shape),
        Quantity::H => egf::count_h(shape),
        Quantity::V => egf::count_v(shape),
        Quantity::R => egf::count_r(shape),
        Quantity::S => egf::count_s(shape),
        Quantity::W => egf::count_w(shape),
        Quantity::C => egf::count_c(shape),
    }
}

fn sum_h(shape: GridShape, table: &StirlingTable) -> Result<Natural> {
    if shape.rows().is_multiple_of(2) {
        sums::sum_h_even(shape, table)
    } else {
        sums::sum_h_odd(shape, table)
    }
}

/// Evaluates a fixed-point count by its explicit sum. S has a sum for even x
/// even shapes only.
pub fn count_sum(q: Quantity, shape: GridShape, table: &StirlingTable) -> Result<Natural> {
    let (m, n) = (shape.rows(), shape.cols());
    match q {
        Quantity::P => Ok(sums::sum_p(shape, table)),
        Quantity::H => sum_h(shape, table),
        Quantity::V => sum_h(shape.transpose(), table),
        Quantity::R if m % 2 == 0 => sum_h(shape, table),
        Quantity::R if n % 2 == 0 => sum_h(shape.transpose(), table),
        Quantity::R => sums::sum_r_oddodd(shape, table),
        Quantity::S if m % 2 == 0 && n % 2 == 0 => sums::sum_s_eveneven(shape, table),
        Quantity::S | Quantity::W | Quantity::C => Err(Error::MethodUnavailable {
            quantity: q.name(),
            method: "closed-sum",
            shape,
        }),
    }
}

/// Whether `count_sum` exists for `q` and is cheap enough to run unasked.
pub fn sum_in_auto_range(q: Quantity, shape: GridShape) -> bool {
    let (m, n) = (shape.rows(), shape.cols());
    match q {
        Quantity::P | Quantity::H | Quantity::V => shape.cells() <= AUTO_SUM_CELLS,
        Quantity::R if m % 2 == 1 && n % 2 == 1 => shape.rotation_half() <= AUTO_ROTATION_HALF,
        Quantity::R => shape.cells() <= AUTO_SUM_CELLS,
        Quantity::S => m % 2 == 0 && n % 2 == 0 && (m / 2) * (n / 2) <= AUTO_QUADRANT,
        Quantity::W | Quantity::C => false,
    }
}

pub fn count_oracle(q: Quantity, shape: GridShape, limit: OracleLimit) -> Result<Natural> {
    use SymmetryOp::*;
    match q {
        Quantity::P => oracle::count_all(shape, limit),
        Quantity::H => oracle::count_fixed(shape, &[HorizontalReflect], limit),
        Quantity::V => oracle::count_fixed(shape, &[VerticalReflect], limit),
        Quantity::R => oracle::count_fixed(shape, &[Rotate180], limit),
        Quantity::S => oracle::count_fixed(shape, &[HorizontalReflect, VerticalReflect], limit),
        Quantity::W => {
            if shape.is_square() {
                return Err(Error::SquareShape(shape));
            }
            oracle::count_orbits(shape, limit)
        }
        Quantity::C => Err(Error::MethodUnavailable {
            quantity: "C",
            method: "direct oracle",
            shape,
        }),
    }
}

/// Computes the requested quantities (plus whatever they depend on) for one
/// shape. Under [`MethodPolicy::Only`] every value comes from that method or
/// the call fails; nothing is silently taken from another method.
pub fn count_report(
    shape: GridShape,
    policy: MethodPolicy,
    requested: &[Quantity],
    settings: &Settings<'_>,
) -> Result<CountReport> {
    if shape.is_square() && requested.iter().any(|q| q.needs_non_square()) {
        return Err(Error::SquareShape(shape));
    }
    let primary = match policy {
        MethodPolicy::Auto => Method::Egf,
        MethodPolicy::Only(m) => m,
    };
    if primary == Method::Oracle {
        settings.oracle_limit.check(shape)?;
    }

    let wants = |q: Quantity| requested.contains(&q);
    let mut base: Vec<Quantity> = Vec::new();
    for q in Quantity::BASE {
        let needed = wants(q)
            || (wants(Quantity::W) && q != Quantity::S && primary != Method::Oracle)
            || wants(Quantity::C);
        if needed {
            base.push(q);
        }
    }

    let mut values = BTreeMap::new();
    let mut methods = BTreeMap::new();
    for &q in &base {
        let v = match primary {
            Method::Egf => count_egf(q, shape)?,
            Method::ClosedSum => count_sum(q, shape, settings.stirling)?,
            Method::Oracle => count_oracle(q, shape, settings.oracle_limit)?,
        };
        values.insert(q, v);
        methods.insert(q, primary);
    }

    let mut consistency = Vec::new();
    if wants(Quantity::W) {
        let w = if primary == Method::Oracle {
            count_oracle(Quantity::W, shape, settings.oracle_limit)?
        } else {
            egf::burnside_orbits(
                shape,
                &values[&Quantity::P],
                &values[&Quantity::H],
                &values[&Quantity::V],
                &values[&Quantity::R],
            )?
        };
        values.insert(Quantity::W, w);
        methods.insert(Quantity::W, primary);
    }
    if wants(Quantity::C) {
        let c = egf::free_arrays(
            shape,
            &values[&Quantity::P],
            &values[&Quantity::H],
            &values[&Quantity::V],
            &values[&Quantity::R],
            &values[&Quantity::S],
        )?;
        values.insert(Quantity::C, c);
        methods.insert(Quantity::C, primary);
    }

    if policy == MethodPolicy::Auto {
        cross_check(shape, &values, settings, &mut consistency)?;
    }
    invariants(shape, &values, &mut consistency);

    values.retain(|q, _| requested.contains(q));
    methods.retain(|q, _| requested.contains(q));
    Ok(CountReport {
        shape,
        values,
        methods,
        consistency,
    })
}

fn cross_check(
    shape: GridShape,
    values: &BTreeMap<Quantity, Natural>,
    settings: &Settings<'_>,
    out: &mut Vec<CheckOutcome>,
) -> Result<()> {
    let oracle_ok = settings.oracle_limit.allows(shape);
    for (&q, egf_value) in values {
        if q == Quantity::C {
            continue;
        }
        if q == Quantity::W {
            if oracle_ok {
                let direct = count_oracle(q, shape, settings.oracle_limit)?;
                out.push(CheckOutcome::compare(
                    format!("oracle orbits vs Burnside W at {shape}"),
                    ("oracle", &direct),
                    ("egf", egf_value),
                ));
            }
            continue;
        }
        if oracle_ok {
            let o = count_oracle(q, shape, settings.oracle_limit)?;
            out.push(CheckOutcome::compare(
                format!("oracle vs egf {q} at {shape}"),
                ("oracle", &o),
                ("egf", egf_value),
            ));
        }
        if sum_in_auto_range(q, shape) {
            let s = count_sum(q, shape, settings.stirling)?;
            out.push(CheckOutcome::compare(
                format!("sum vs egf {q} at {shape}"),
                ("sum", &s),
                ("egf", egf_value),
            ));
        }
    }
    Ok(())
}

fn invariants(shape: GridShape, values: &BTreeMap<Quantity, Natural>, out: &mut Vec<CheckOutcome>) {
    let get = |q| values.get(&q);
    if let (Some(p), Some(h), Some(v), Some(r), Some(w)) = (
        get(Quantity::P),
        get(Quantity::H),
        get(Quantity::V),
        get(Quantity::R),
        get(Quantity::W),
    ) {
        let total = p + h + v + r;
        out.push(CheckOutcome::predicate(
            "invariant 4W = P+H+V+R",
            w * 4u32 == total,
            format!("4W={} P+H+V+R={total}", w * 4u32),
        ));
    }
    if let Some(c) = get(Quantity::C) {
        out.push(CheckOutcome::predicate(
            "invariant C = 0 mod 4",
            (c % 4u32).is_zero(),
            format!("C={c}"),
        ));
    }
    if let (Some(p), Some(h), Some(v), Some(r), Some(s)) = (
        get(Quantity::P),
        get(Quantity::H),
        get(Quantity::V),
        get(Quantity::R),
        get(Quantity::S),
    ) {
        let lo = h.min(v).min(r);
        let hi = h.max(v).max(r);
        out.push(CheckOutcome::predicate(
            "invariant S <= min(H,V,R) <= max(H,V,R) <= P",
            s <= lo && hi <= p,
            format!("S={s} H={h} V={v} R={r} P={p} at {shape}"),
        ));
    }
}
