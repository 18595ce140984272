//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! All comparisons are exact integer or rational equality; the only numeric
//! tolerances are the wall-clock budgets.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use wordrep::cli::run_with;
use wordrep::egf;
use wordrep::exact::StirlingTable;
use wordrep::oracle::{self, OracleLimit, SymmetryOp};
use wordrep::report::{count_egf, count_oracle, count_sum};
use wordrep::series::Caps;
use wordrep::{sums, GridShape, Natural, Quantity, Rational, TruncatedSeries};

const TABLE_BUDGET: Duration = Duration::from_secs(10);
const ORACLE_BUDGET: Duration = Duration::from_secs(300);

/// Published rows as printed: (m, n, P, H, V, R, S).
const PUBLISHED: [(usize, usize, u64, u64, u64, u64, u64); 6] = [
    (2, 3, 5653, 107, 197, 107, 23),
    (2, 4, 306419, 851, 851, 851, 55),
    (2, 5, 22277080, 770, 12976, 770, 234),
    (3, 2, 5653, 197, 107, 107, 23),
    (3, 4, 2062199125, 463973, 79525, 79525, 1525),
    (3, 5, 2678973711602, 35802956, 8315630, 3302472, 26168),
];

const BASE: [Quantity; 5] = [
    Quantity::P,
    Quantity::H,
    Quantity::V,
    Quantity::R,
    Quantity::S,
];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn shape(m: usize, n: usize) -> GridShape {
    GridShape::new(m, n).unwrap()
}

fn nat(v: u64) -> Natural {
    Natural::from(v)
}

fn egf_value(q: Quantity, s: GridShape) -> Natural {
    count_egf(q, s).unwrap_or_else(|e| panic!("EGF {q} at {s}: {e}"))
}

fn published_table() -> Outcome {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    for (m, n, p, h, v, r, s) in PUBLISHED {
        for (q, want) in BASE.iter().zip([p, h, v, r, s]) {
            let got = egf_value(*q, shape(m, n));
            if got != nat(want) {
                mismatches.push(format!("{q}({m},{n}) computed {got}, published {want}"));
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > TABLE_BUDGET {
        mismatches.push(format!("took {elapsed:?}, budget {TABLE_BUDGET:?}"));
    }
    if mismatches.is_empty() {
        Ok(format!("30 values exact in {elapsed:.2?}"))
    } else {
        Err(mismatches.join("; "))
    }
}

fn three_by_one() -> Outcome {
    let s = shape(3, 1);
    let got: Vec<Natural> = [
        Quantity::P,
        Quantity::H,
        Quantity::V,
        Quantity::R,
        Quantity::W,
    ]
    .into_iter()
    .map(|q| egf_value(q, s))
    .collect();
    let want: Vec<Natural> = [30, 8, 30, 8, 19].into_iter().map(nat).collect();
    if got == want {
        Ok("P=30 H=8 V=30 R=8 W=19".into())
    } else {
        Err(format!("got {got:?}"))
    }
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let limit = OracleLimit::new(10).unwrap();
    let shapes = GridShape::all_up_to(10);
    for &s in &shapes {
        for q in BASE {
            let direct = count_oracle(q, s, limit).map_err(|e| format!("{q} at {s}: {e}"))?;
            let e = egf_value(q, s);
            if direct != e {
                return Err(format!("{q} at {s}: oracle {direct}, EGF {e}"));
            }
        }
        let orbits = oracle::count_orbits(s, limit).map_err(|e| e.to_string())?;
        let total: Natural = [Quantity::P, Quantity::H, Quantity::V, Quantity::R]
            .into_iter()
            .map(|q| egf_value(q, s))
            .sum();
        if &orbits * 4u32 != total {
            return Err(format!(
                "orbits at {s}: oracle {orbits}, (P+H+V+R)/4 from {total}"
            ));
        }
    }
    let elapsed = start.elapsed();
    if elapsed > ORACLE_BUDGET {
        return Err(format!("took {elapsed:?}, budget {ORACLE_BUDGET:?}"));
    }
    Ok(format!(
        "{} shapes with mn <= 10 in {elapsed:.2?}",
        shapes.len()
    ))
}

fn cross_path() -> Outcome {
    let table = StirlingTable::standard();
    let mut compared = 0;
    let mut cmp = |label: &str, s: GridShape, sum: Natural, q: Quantity| -> Result<(), String> {
        compared += 1;
        let e = egf_value(q, s);
        if sum == e {
            Ok(())
        } else {
            Err(format!("{label} at {s}: sum {sum}, EGF {e}"))
        }
    };
    let err = |e: wordrep::Error| e.to_string();
    for s in GridShape::all_up_to(16) {
        let (m, n) = (s.rows(), s.cols());
        cmp("sum_p", s, sums::sum_p(s, table), Quantity::P)?;
        if m % 2 == 0 {
            cmp(
                "sum_h_even",
                s,
                sums::sum_h_even(s, table).map_err(err)?,
                Quantity::H,
            )?;
        } else {
            cmp(
                "sum_h_odd",
                s,
                sums::sum_h_odd(s, table).map_err(err)?,
                Quantity::H,
            )?;
        }
        if m % 2 == 1 && n % 2 == 1 && s.rotation_half() <= 10 {
            cmp(
                "sum_r_oddodd",
                s,
                sums::sum_r_oddodd(s, table).map_err(err)?,
                Quantity::R,
            )?;
        }
        if m % 2 == 0 && n % 2 == 0 {
            cmp(
                "sum_s_eveneven",
                s,
                sums::sum_s_eveneven(s, table).map_err(err)?,
                Quantity::S,
            )?;
        }
    }
    Ok(format!("{compared} sum/EGF pairs equal"))
}

fn normalization_audit() -> Outcome {
    let limit = OracleLimit::new(9).unwrap();
    let table = StirlingTable::standard();
    let rot = |s| oracle::count_fixed(s, &[SymmetryOp::Rotate180], limit).unwrap();
    let both = |s| {
        oracle::count_fixed(
            s,
            &[SymmetryOp::HorizontalReflect, SymmetryOp::VerticalReflect],
            limit,
        )
        .unwrap()
    };
    let (s31, s11, s33, s35) = (shape(3, 1), shape(1, 1), shape(3, 3), shape(3, 5));
    let checks: Vec<(&str, Natural, Natural)> = vec![
        ("oracle R(3,1)", rot(s31), nat(8)),
        ("oracle R(1,1)", rot(s11), nat(2)),
        ("oracle S(3,1)", both(s31), nat(8)),
        ("oracle S(1,1)", both(s11), nat(2)),
        ("EGF R(3,1)", egf_value(Quantity::R, s31), rot(s31)),
        ("EGF R(1,1)", egf_value(Quantity::R, s11), rot(s11)),
        ("EGF S(3,1)", egf_value(Quantity::S, s31), both(s31)),
        ("EGF S(1,1)", egf_value(Quantity::S, s11), both(s11)),
        ("EGF S(3,3)", egf_value(Quantity::S, s33), both(s33)),
        ("EGF R(3,5)", egf_value(Quantity::R, s35), nat(3302472)),
        (
            "sum R(3,5)",
            count_sum(Quantity::R, s35, table).unwrap(),
            nat(3302472),
        ),
        ("EGF S(3,5)", egf_value(Quantity::S, s35), nat(26168)),
    ];
    for (label, got, want) in &checks {
        if got != want {
            return Err(format!("{label}: {got} != {want}"));
        }
    }
    let raw_r = egf::count_r_unscaled(s31).unwrap();
    let raw_s = egf::count_s_unscaled(s31).unwrap();
    if raw_r == nat(8) || raw_s == nat(8) {
        return Err(format!(
            "unscaled values at (3,1) already match: R {raw_r}, S {raw_s}"
        ));
    }
    Ok(format!(
        "K={} K'={} confirmed; unscaled (3,1) values R={raw_r} S={raw_s} differ",
        egf::ROTATION_SCALE,
        egf::FULL_SYMMETRY_SCALE
    ))
}

fn arb_series(caps: Caps) -> impl Strategy<Value = TruncatedSeries> {
    let len = caps.degrees().count();
    prop::collection::vec((-9i64..=9, 1i64..=6), len).prop_map(move |pairs| {
        let terms = caps.degrees().zip(pairs).map(|(d, (a, b))| {
            let q = if d.total() == 0 {
                Rational::zero()
            } else {
                Rational::new(BigInt::from(a), BigInt::from(b))
            };
            (d, q)
        });
        TruncatedSeries::build(caps, terms).unwrap()
    })
}

fn properties() -> Outcome {
    for s in GridShape::all_up_to(30)
        .into_iter()
        .filter(|s| !s.is_square())
    {
        egf::count_w(s).map_err(|e| format!("integrality at {s}: {e}"))?;
    }
    for s in GridShape::all_up_to(20) {
        let t = s.transpose();
        let pairs = [
            (Quantity::P, Quantity::P),
            (Quantity::H, Quantity::V),
            (Quantity::S, Quantity::S),
            (Quantity::R, Quantity::R),
        ];
        for (a, b) in pairs {
            if egf_value(a, s) != egf_value(b, t) {
                return Err(format!("transpose {a}{s} vs {b}{t}"));
            }
        }
        let [p, h, v, r, sv] = BASE.map(|q| egf_value(q, s));
        let lo = h.clone().min(v.clone()).min(r.clone());
        let hi = h.clone().max(v.clone()).max(r.clone());
        if !(sv <= lo && lo <= hi && hi <= p) {
            return Err(format!("sandwich fails at {s}"));
        }
        if s.rows() == 1 && h != p {
            return Err(format!("H != P at {s}"));
        }
        if s.cols() == 1 && v != p {
            return Err(format!("V != P at {s}"));
        }
    }

    let caps = Caps::new(2, 1, 3);
    let mut runner = TestRunner::new(Config {
        cases: 48,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&(arb_series(caps), arb_series(caps)), |(f, g)| {
            let (ef, eg) = (f.exp().unwrap(), g.exp().unwrap());
            prop_assert_eq!((&f + &g).exp().unwrap(), &ef * &eg);
            prop_assert_eq!(ef.derivative_z(), &f.derivative_z() * &ef);
            prop_assert!((&ef * &(-&f).exp().unwrap() - TruncatedSeries::one(caps))
                .terms()
                .all(|(_, c)| c.is_zero()));
            Ok(())
        })
        .map_err(|e| format!("series laws: {e}"))?;
    Ok("integrality, transposes, sandwich, edge rows, 48 random series".into())
}

fn exactness() -> Outcome {
    let src = concat!(env!("CARGO_MANIFEST_DIR"), "/src");
    for entry in std::fs::read_dir(src).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        for token in ["f32", "f64"] {
            if text
                .split(|c: char| !c.is_alphanumeric() && c != '_')
                .any(|w| w == token)
            {
                return Err(format!("{} mentions {token}", path.display()));
            }
        }
    }

    let mut table = StirlingTable::new(64);
    let bumped = table.get(4, 2) + Natural::one();
    table.set(4, 2, bumped);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(
        ["wordrep", "verify", "--max-cells", "4"],
        &table,
        &mut out,
        &mut err,
    );
    if code == 0 {
        return Err("verify accepted a perturbed Stirling table".into());
    }
    Ok(format!(
        "no floating-point types in src; perturbed table makes verify exit {code}"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("published table rows", published_table),
        ("3x1 worked example", three_by_one),
        ("oracle equivalence, mn <= 10", oracle_equivalence),
        ("closed sums equal EGF", cross_path),
        ("normalization audit", normalization_audit),
        ("property suite", properties),
        ("exact arithmetic and fault injection", exactness),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS  {}. {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {}. {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
