//! The full cross-validation sweep behind `wordrep verify`.
//!
//! Each check walks a family of shapes, compares two independent evaluations
//! and stops at the first disagreement, keeping it as the counterexample.

use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::egf::{self, GridShape, FULL_SYMMETRY_SCALE, ROTATION_SCALE};
use crate::error::Result;
use crate::exact::{p_count, Natural, StirlingTable};
use crate::oracle::{self, OracleLimit, SymmetryOp, NAIVE_LIMIT};
use crate::report::{count_egf, count_oracle, count_sum, Quantity};

pub const DEFAULT_MAX_CELLS: usize = 10;

/// Closed sums are compared on shapes up to this many cells (or the oracle
/// bound, if larger).
pub const SUM_CELLS: usize = 16;
pub const ROTATION_HALF_LIMIT: usize = 10;
pub const QUADRANT_LIMIT: usize = 10;
pub const P_COUNT_LIMIT: usize = 12;
pub const INTEGRALITY_CELLS: usize = 30;

/// Independently published values that pin the odd x odd scale factors.
pub const ROTATION_ANCHOR: ((usize, usize), u64) = ((3, 5), 3_302_472);
pub const FULL_SYMMETRY_ANCHOR: ((usize, usize), u64) = ((3, 5), 26_168);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Number of cases compared.
    pub cases: usize,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

struct Sweep {
    name: String,
    cases: usize,
    failure: Option<String>,
}

impl Sweep {
    fn new(name: impl Into<String>) -> Self {
        Sweep {
            name: name.into(),
            cases: 0,
            failure: None,
        }
    }

    /// Records one comparison; only the first mismatch is kept.
    fn compare(&mut self, case: &str, lhs: (&str, Result<Natural>), rhs: (&str, Result<Natural>)) {
        if self.failure.is_some() {
            return;
        }
        self.cases += 1;
        match (lhs.1, rhs.1) {
            (Ok(a), Ok(b)) if a == b => {}
            (Ok(a), Ok(b)) => {
                self.failure = Some(format!("{case}: {}={a} {}={b}", lhs.0, rhs.0));
            }
            (Err(e), _) | (_, Err(e)) => self.failure = Some(format!("{case}: {e}")),
        }
    }

    fn require(&mut self, case: &str, ok: bool, detail: impl FnOnce() -> String) {
        if self.failure.is_some() {
            return;
        }
        self.cases += 1;
        if !ok {
            self.failure = Some(format!("{case}: {}", detail()));
        }
    }

    fn finish(self, summary: impl Into<String>) -> Check {
        match self.failure {
            None => Check {
                name: self.name,
                passed: true,
                cases: self.cases,
                detail: summary.into(),
            },
            Some(f) => Check {
                name: self.name,
                passed: false,
                cases: self.cases,
                detail: format!("first counterexample {f}"),
            },
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Largest shape (in cells) handed to the brute-force oracle.
    pub max_cells: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_cells: DEFAULT_MAX_CELLS,
        }
    }
}

pub fn run(options: VerifyOptions, table: &StirlingTable) -> Result<VerifyReport> {
    let limit = OracleLimit::new(options.max_cells)?;
    let sum_cells = SUM_CELLS.max(options.max_cells);
    let mut checks = vec![check_p_count(table)];
    checks.extend(check_sums(table, sum_cells));
    checks.extend(check_oracle(limit));
    checks.push(check_integrality());
    checks.push(audit_rotation(table, limit)?);
    checks.push(audit_full_symmetry(limit)?);
    Ok(VerifyReport { checks })
}

fn check_p_count(table: &StirlingTable) -> Check {
    let mut sweep = Sweep::new("circled-partition counts: Stirling sum vs generating function");
    for n in 0..=P_COUNT_LIMIT {
        for c in 0..=n {
            for j in 0..=c {
                sweep.compare(
                    &format!("p_{j}({n},{c})"),
                    ("sum", Ok(table.p_count_sum(j, n, c))),
                    ("egf", Ok(p_count(j, n, c))),
                );
            }
        }
    }
    sweep.finish(format!("all j <= c <= N <= {P_COUNT_LIMIT}"))
}

fn check_sums(table: &StirlingTable, sum_cells: usize) -> Vec<Check> {
    let shapes = GridShape::all_up_to(sum_cells.max(4 * QUADRANT_LIMIT));
    let within = |s: &GridShape| s.cells() <= sum_cells;

    let mut p = Sweep::new("P: closed sum vs EGF");
    let mut h_even = Sweep::new("H (even rows): closed sum vs EGF");
    let mut h_odd = Sweep::new("H (odd rows): closed sum vs EGF");
    let mut r_odd = Sweep::new(format!(
        "R (odd x odd, L size <= {ROTATION_HALF_LIMIT}): closed sum vs EGF"
    ));
    let mut s_even = Sweep::new(format!(
        "S (even x even, quadrant <= {QUADRANT_LIMIT}): closed sum vs EGF"
    ));

    for &s in &shapes {
        let case = s.to_string();
        let (m, n) = (s.rows(), s.cols());
        if within(&s) {
            p.compare(
                &case,
                ("sum", count_sum(Quantity::P, s, table)),
                ("egf", count_egf(Quantity::P, s)),
            );
            let target = if m % 2 == 0 { &mut h_even } else { &mut h_odd };
            target.compare(
                &case,
                ("sum", count_sum(Quantity::H, s, table)),
                ("egf", count_egf(Quantity::H, s)),
            );
        }
        if m % 2 == 1 && n % 2 == 1 && s.rotation_half() <= ROTATION_HALF_LIMIT {
            r_odd.compare(
                &case,
                ("sum", count_sum(Quantity::R, s, table)),
                ("egf", count_egf(Quantity::R, s)),
            );
        }
        if m % 2 == 0 && n % 2 == 0 && (m / 2) * (n / 2) <= QUADRANT_LIMIT {
            s_even.compare(
                &case,
                ("sum", count_sum(Quantity::S, s, table)),
                ("egf", count_egf(Quantity::S, s)),
            );
        }
    }
    let up_to = format!("shapes with mn <= {sum_cells}");
    vec![
        p.finish(up_to.clone()),
        h_even.finish(up_to.clone()),
        h_odd.finish(up_to),
        r_odd.finish("odd x odd shapes"),
        s_even.finish("even x even shapes"),
    ]
}

fn check_oracle(limit: OracleLimit) -> Vec<Check> {
    let shapes = GridShape::all_up_to(limit.cells());
    let up_to = format!("shapes with mn <= {}", limit.cells());
    let mut checks = Vec::new();
    for q in [
        Quantity::P,
        Quantity::H,
        Quantity::V,
        Quantity::R,
        Quantity::S,
    ] {
        let mut sweep = Sweep::new(format!("{q}: EGF vs oracle"));
        for &s in &shapes {
            sweep.compare(
                &s.to_string(),
                ("egf", count_egf(q, s)),
                ("oracle", count_oracle(q, s, limit)),
            );
        }
        checks.push(sweep.finish(up_to.clone()));
    }

    let mut orbits = Sweep::new("orbits: oracle vs (P+H+V+R)/4");
    for &s in &shapes {
        let burnside = burnside_any(s);
        orbits.compare(
            &s.to_string(),
            ("oracle", oracle::count_orbits(s, limit)),
            ("burnside", burnside),
        );
    }
    checks.push(orbits.finish(up_to));

    let naive_limit = limit.cells().min(NAIVE_LIMIT);
    let mut naive = Sweep::new("fixed points: orbit product vs circle-by-circle enumeration");
    use SymmetryOp::*;
    let subsets: [&[SymmetryOp]; 4] = [
        &[HorizontalReflect],
        &[VerticalReflect],
        &[Rotate180],
        &[HorizontalReflect, VerticalReflect],
    ];
    for &s in GridShape::all_up_to(naive_limit).iter() {
        for ops in subsets {
            naive.compare(
                &format!("{s} {ops:?}"),
                ("product", oracle::count_fixed(s, ops, limit)),
                ("naive", oracle::count_fixed_naive(s, ops)),
            );
        }
    }
    checks.push(naive.finish(format!("shapes with mn <= {naive_limit}")));

    let mut closure = Sweep::new("fixed by h and v implies fixed by rotation");
    for &s in &shapes {
        closure.compare(
            &s.to_string(),
            (
                "{h,v}",
                oracle::count_fixed(s, &[HorizontalReflect, VerticalReflect], limit),
            ),
            (
                "{h,v,r}",
                oracle::count_fixed(s, &SymmetryOp::NON_IDENTITY, limit),
            ),
        );
    }
    checks.push(closure.finish(format!("shapes with mn <= {}", limit.cells())));
    checks
}

/// Burnside over the four-element group, squares included (the oracle
/// only ever acts by h, v and the half turn).
fn burnside_any(s: GridShape) -> Result<Natural> {
    let total = count_egf(Quantity::P, s)?
        + count_egf(Quantity::H, s)?
        + count_egf(Quantity::V, s)?
        + count_egf(Quantity::R, s)?;
    let (q, r) = total.div_rem(&Natural::from(4u32));
    if r.is_zero() {
        Ok(q)
    } else {
        Err(crate::Error::Inconsistent(format!(
            "P+H+V+R = {total} is not divisible by 4"
        )))
    }
}

fn check_integrality() -> Check {
    let mut sweep = Sweep::new("Burnside integrality: 4 | P+H+V+R");
    for s in GridShape::all_up_to(INTEGRALITY_CELLS) {
        if s.is_square() {
            continue;
        }
        let w = egf::count_w(s);
        sweep.require(&s.to_string(), w.is_ok(), || format!("{:?}", w.err()));
    }
    sweep.finish(format!("m != n, mn <= {INTEGRALITY_CELLS}"))
}

/// Derives the factor `truth / unscaled` at each anchor and requires it to be
/// the same integer everywhere and equal to the shipped constant. The 3x1
/// anchor must also show the unscaled value differing from the truth, so the
/// audit cannot pass vacuously.
fn audit(
    name: &str,
    shipped: u32,
    unscaled: fn(GridShape) -> Result<Natural>,
    anchors: Vec<(GridShape, &'static str, Result<Natural>)>,
) -> Result<Check> {
    let mut sweep = Sweep::new(name.to_string());
    let mut confirmed = Vec::new();
    for (shape, source, truth) in anchors {
        let case = format!("{shape} ({source})");
        let truth = match truth {
            Ok(t) => t,
            Err(e) => {
                sweep.require(&case, false, || e.to_string());
                continue;
            }
        };
        let literal = unscaled(shape)?;
        let (factor, rem) = truth.div_rem(&literal);
        sweep.require(
            &case,
            rem.is_zero() && factor == Natural::from(shipped),
            || format!("truth={truth} unscaled={literal}, factor is not {shipped}"),
        );
        if shape == GridShape::new(3, 1)? {
            sweep.require(&format!("{case} non-vacuous"), literal != truth, || {
                format!("unscaled value {literal} already equals {truth}")
            });
        }
        let label = format!("({},{})", shape.rows(), shape.cols());
        if !confirmed.contains(&label) {
            confirmed.push(label);
        }
    }
    Ok(sweep.finish(format!("K={shipped} confirmed at {}", confirmed.join(","))))
}

fn audit_rotation(table: &StirlingTable, limit: OracleLimit) -> Result<Check> {
    let audit_limit = OracleLimit::new(limit.cells().max(9))?;
    let rot = |s: GridShape| oracle::count_fixed(s, &[SymmetryOp::Rotate180], audit_limit);
    let ((am, an), value) = ROTATION_ANCHOR;
    let s31 = GridShape::new(3, 1)?;
    let s11 = GridShape::new(1, 1)?;
    let anchor = GridShape::new(am, an)?;
    audit(
        "rotation normalization audit (odd x odd)",
        ROTATION_SCALE,
        egf::count_r_unscaled,
        vec![
            (s31, "oracle", rot(s31)),
            (s11, "oracle", rot(s11)),
            (s31, "closed sum", count_sum(Quantity::R, s31, table)),
            (anchor, "closed sum", count_sum(Quantity::R, anchor, table)),
            (anchor, "reference value", Ok(Natural::from(value))),
        ],
    )
}

fn audit_full_symmetry(limit: OracleLimit) -> Result<Check> {
    let audit_limit = OracleLimit::new(limit.cells().max(9))?;
    let both = [SymmetryOp::HorizontalReflect, SymmetryOp::VerticalReflect];
    let full = |s: GridShape| oracle::count_fixed(s, &both, audit_limit);
    let ((am, an), value) = FULL_SYMMETRY_ANCHOR;
    let s31 = GridShape::new(3, 1)?;
    let s11 = GridShape::new(1, 1)?;
    let s33 = GridShape::new(3, 3)?;
    audit(
        "full-symmetry normalization audit (odd x odd)",
        FULL_SYMMETRY_SCALE,
        egf::count_s_unscaled,
        vec![
            (s31, "oracle", full(s31)),
            (s11, "oracle", full(s11)),
            (s33, "oracle", full(s33)),
            (
                GridShape::new(am, an)?,
                "reference value",
                Ok(Natural::from(value)),
            ),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweep_passes() {
        let report = run(VerifyOptions { max_cells: 4 }, StirlingTable::standard()).unwrap();
        for c in &report.checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
            assert!(c.cases > 0, "{} compared nothing", c.name);
        }
    }

    #[test]
    fn corrupted_stirling_table_is_caught() {
        let mut table = StirlingTable::new(64);
        table.set(3, 2, table.get(3, 2) + 1u32);
        let report = run(VerifyOptions { max_cells: 4 }, &table).unwrap();
        assert!(!report.passed());
        let failed: Vec<_> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        assert!(failed.contains(&"P: closed sum vs EGF"), "{failed:?}");
    }

    #[test]
    fn audit_rejects_wrong_constant() {
        let s31 = GridShape::new(3, 1).unwrap();
        let check = audit(
            "test audit",
            3,
            egf::count_r_unscaled,
            vec![(s31, "oracle", Ok(Natural::from(8u32)))],
        )
        .unwrap();
        assert!(!check.passed);
    }
}
