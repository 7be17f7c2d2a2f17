//! Verification suites behind the `check` CLI subcommand: oracle equality
//! for every derivation route, polynomial-level route identity, the
//! variance-algorithm identity, the symmetry structure checks, the exact
//! asymptotic inequalities, and the combinatorial identities. Each runner
//! returns a serializable report; all pass/fail decisions are exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::asymptotics::envelope_report;
use crate::combinatorics::{
    compositions_min2, compositions_positive, factorial, falling_power, multinomial, StirlingTable,
};
use crate::moments::{
    central_moment_fast, central_moment_from_raw, central_moment_stable,
    central_moment_variance_form, central_moment_variance_from, factorial_moment,
    raw_moment_via_counting, raw_moment_via_factorial, FormulaDoc, MomentKind, VarianceMethod,
};
use crate::numeric::{parse_rational, rational_str};
use crate::oracle::{evaluate_formula, oracle_moment};
use crate::poly::VarId;

#[derive(Serialize, Clone, Debug)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn from_failure(name: &str, failure: Option<String>, ok_detail: String) -> Self {
        CheckOutcome {
            name: name.to_string(),
            passed: failure.is_none(),
            detail: failure.unwrap_or(ok_detail),
        }
    }
}

#[derive(Serialize, Clone, Copy, Debug)]
pub struct RatioBand {
    pub min: f64,
    pub max: f64,
}

/// One grid row of the bounds report, with exact values as strings.
#[derive(Serialize, Clone, Debug)]
pub struct BoundsRow {
    pub n: u64,
    pub p: String,
    pub d: u32,
    pub moment: String,
    pub upper_bound: String,
    pub best_lower: Option<String>,
    pub best_lower_k: Option<u32>,
    pub moment_root: f64,
    pub envelope: Option<f64>,
    pub ratio: Option<f64>,
    pub upper_holds: bool,
    pub lower_holds: bool,
}

#[derive(Serialize, Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub dmax: u32,
    pub nmax: u64,
    pub ps: Vec<String>,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_band: Option<RatioBand>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<BoundsRow>>,
}

impl SuiteReport {
    fn new(suite: &str, dmax: u32, nmax: u64, ps: &[BigRational], checks: Vec<CheckOutcome>) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            dmax,
            nmax,
            ps: ps.iter().map(rational_str).collect(),
            passed: checks.iter().all(|c| c.passed),
            checks,
            ratio_band: None,
            rows: None,
        }
    }
}

/// The oracle-equality grid probabilities, including both endpoints.
pub fn default_oracle_ps() -> Vec<BigRational> {
    ["0", "1", "1/2", "1/3", "2/7", "9/10"]
        .iter()
        .map(|s| parse_rational(s).unwrap())
        .collect()
}

/// The asymptotic-inequality grid probabilities.
pub fn default_bounds_ps() -> Vec<BigRational> {
    ["1/10", "1/4", "1/2"]
        .iter()
        .map(|s| parse_rational(s).unwrap())
        .collect()
}

fn grid_equality(
    name: &str,
    kind: MomentKind,
    docs: &[FormulaDoc],
    nmax: u64,
    ps: &[BigRational],
) -> CheckOutcome {
    let mut points = 0usize;
    let mut failure = None;
    for doc in docs {
        let d = doc.query.d;
        for n in 0..=nmax {
            for p in ps {
                let lhs = evaluate_formula(doc, n, p).expect("grid p is a probability");
                let rhs = oracle_moment(n, p, d, kind).expect("grid p is a probability");
                points += 1;
                if lhs != rhs && failure.is_none() {
                    failure = Some(format!("d={d} n={n} p={p}: formula {lhs} != oracle {rhs}"));
                }
            }
        }
    }
    CheckOutcome::from_failure(name, failure, format!("{points} grid points agree exactly"))
}

/// Exact oracle equality for every derivation route over the full grid.
pub fn run_oracle_suite(dmax: u32, nmax: u64, ps: &[BigRational]) -> SuiteReport {
    let raw_factorial: Vec<_> = (1..=dmax).map(raw_moment_via_factorial).collect();
    let raw_counting: Vec<_> = (1..=dmax).map(raw_moment_via_counting).collect();
    let factorial: Vec<_> = (0..=dmax).map(factorial_moment).collect();
    let stable: Vec<_> = (0..=dmax).map(central_moment_stable).collect();
    let fast: Vec<_> = (0..=dmax)
        .map(|d| central_moment_fast(d).expect("fast derivation"))
        .collect();
    let from_raw: Vec<_> = (0..=dmax).map(central_moment_from_raw).collect();
    let alg1: Vec<_> = (0..=dmax)
        .map(|d| central_moment_variance_form(d, VarianceMethod::Symmetrize).expect("symmetrize"))
        .collect();
    let alg2: Vec<_> = (0..=dmax)
        .map(|d| central_moment_variance_form(d, VarianceMethod::Reduction).expect("reduction"))
        .collect();

    let checks = vec![
        grid_equality("raw via factorial moments", MomentKind::Raw, &raw_factorial, nmax, ps),
        grid_equality("raw via direct counting", MomentKind::Raw, &raw_counting, nmax, ps),
        grid_equality("factorial moments", MomentKind::Factorial, &factorial, nmax, ps),
        grid_equality("central stable expansion", MomentKind::Central, &stable, nmax, ps),
        grid_equality("central fast form", MomentKind::Central, &fast, nmax, ps),
        grid_equality("central raw expansion", MomentKind::Central, &from_raw, nmax, ps),
        grid_equality("central variance (symmetrize)", MomentKind::Central, &alg1, nmax, ps),
        grid_equality("central variance (reduction)", MomentKind::Central, &alg2, nmax, ps),
    ];
    SuiteReport::new("oracle", dmax, nmax, ps, checks)
}

/// Polynomial-level route identity: every route yields the identical
/// canonical polynomial.
pub fn run_routes_suite(dmax: u32) -> SuiteReport {
    let mut raw_failure = None;
    let mut central_failure = None;
    let mut faithful_failure = None;
    for d in 0..=dmax {
        let via_factorial = raw_moment_via_factorial(d);
        let via_counting = raw_moment_via_counting(d);
        if via_factorial.body != via_counting.body && raw_failure.is_none() {
            raw_failure = Some(format!("raw routes disagree at d={d}"));
        }

        let stable = central_moment_stable(d).to_p_basis_poly();
        let fast = central_moment_fast(d).expect("fast derivation").to_p_basis_poly();
        let from_raw = central_moment_from_raw(d).to_p_basis_poly();
        if (stable != fast || stable != from_raw) && central_failure.is_none() {
            central_failure = Some(format!("central routes disagree at d={d}"));
        }

        let variance = central_moment_variance_form(d, VarianceMethod::Symmetrize)
            .expect("symmetrize")
            .to_p_basis_poly();
        if variance != from_raw && faithful_failure.is_none() {
            faithful_failure = Some(format!("variance form is not faithful at d={d}"));
        }
    }
    let checks = vec![
        CheckOutcome::from_failure(
            "raw routes identical as polynomials",
            raw_failure,
            format!("orders 0..={dmax}"),
        ),
        CheckOutcome::from_failure(
            "central routes identical in Z[n,p]",
            central_failure,
            format!("orders 0..={dmax}"),
        ),
        CheckOutcome::from_failure(
            "variance form reproduces the raw expansion",
            faithful_failure,
            format!("orders 0..={dmax}"),
        ),
    ];
    SuiteReport::new("routes", dmax, 0, &[], checks)
}

/// Identity of the two variance algorithms, from both U sources.
pub fn run_algs_suite(dmax: u32) -> SuiteReport {
    let mut failure = None;
    let mut source_failure = None;
    for d in 0..=dmax {
        let alg1 = central_moment_variance_form(d, VarianceMethod::Symmetrize).expect("symmetrize");
        let alg2 = central_moment_variance_form(d, VarianceMethod::Reduction).expect("reduction");
        if (alg1.body != alg2.body || alg1.odd_factor != alg2.odd_factor) && failure.is_none() {
            failure = Some(format!("algorithms disagree at d={d}"));
        }
        let fast = central_moment_fast(d).expect("fast derivation");
        let from_fast =
            central_moment_variance_from(&fast, VarianceMethod::Symmetrize).expect("symmetrize");
        if from_fast.body != alg1.body && source_failure.is_none() {
            source_failure = Some(format!("fast-sourced variance form disagrees at d={d}"));
        }
    }
    let checks = vec![
        CheckOutcome::from_failure(
            "symmetrization and ideal reduction agree",
            failure,
            format!("orders 0..={dmax}"),
        ),
        CheckOutcome::from_failure(
            "variance form is independent of the U source",
            source_failure,
            format!("orders 0..={dmax}"),
        ),
    ];
    SuiteReport::new("algs", dmax, 0, &[], checks)
}

/// Structure checks: parity symmetry of the p,q form and purity of the
/// variance body.
pub fn run_symmetry_suite(dmax: u32) -> SuiteReport {
    let mut parity_failure = None;
    let mut purity_failure = None;
    for d in 2..=dmax {
        let body = central_moment_stable(d).body;
        let ok = if d % 2 == 0 {
            body.is_symmetric_pq()
        } else {
            body.is_antisymmetric_pq()
        };
        if !ok && parity_failure.is_none() {
            parity_failure = Some(format!("parity symmetry fails at d={d}"));
        }
        let variance = central_moment_variance_form(d, VarianceMethod::Symmetrize).expect("symmetrize");
        let pure = !variance.body.contains_var(VarId::P)
            && !variance.body.contains_var(VarId::Q)
            && variance.body.has_integer_coefficients()
            && variance.odd_factor == (d % 2 == 1);
        if !pure && purity_failure.is_none() {
            purity_failure = Some(format!("variance body impure at d={d}"));
        }
    }
    let checks = vec![
        CheckOutcome::from_failure(
            "even orders symmetric, odd orders anti-symmetric in p,q",
            parity_failure,
            format!("orders 2..={dmax}"),
        ),
        CheckOutcome::from_failure(
            "variance bodies lie in Z[n, s2]",
            purity_failure,
            format!("orders 2..={dmax}"),
        ),
    ];
    SuiteReport::new("symmetry", dmax, 0, &[], checks)
}

/// Exact upper inequality and exact lower witnesses over the grid, plus the
/// reported (not asserted) band of moment_root / envelope.
pub fn run_bounds_suite(dmax: u32, nmax: u64, ps: &[BigRational]) -> SuiteReport {
    let mut rows = Vec::new();
    let mut upper_failure = None;
    let mut lower_failure = None;
    let mut band: Option<RatioBand> = None;
    for d in (2..=dmax).step_by(2) {
        for n in 0..=nmax {
            for p in ps {
                let report = envelope_report(n, p, d).expect("grid point");
                let upper_holds = report.moment <= report.upper_bound;
                // every per-k witness holds iff the largest one does
                let lower_holds = match &report.best_lower {
                    Some((_, bound)) => &report.moment >= bound,
                    None => true,
                };
                if !upper_holds && upper_failure.is_none() {
                    upper_failure = Some(format!("upper inequality fails at d={d} n={n} p={p}"));
                }
                if !lower_holds && lower_failure.is_none() {
                    lower_failure = Some(format!("lower witness fails at d={d} n={n} p={p}"));
                }
                if let Some(ratio) = report.ratio {
                    band = Some(match band {
                        None => RatioBand { min: ratio, max: ratio },
                        Some(b) => RatioBand {
                            min: b.min.min(ratio),
                            max: b.max.max(ratio),
                        },
                    });
                }
                rows.push(BoundsRow {
                    n,
                    p: rational_str(p),
                    d,
                    moment: rational_str(&report.moment),
                    upper_bound: rational_str(&report.upper_bound),
                    best_lower: report.best_lower.as_ref().map(|(_, b)| rational_str(b)),
                    best_lower_k: report.best_lower.as_ref().map(|(k, _)| *k),
                    moment_root: report.moment_root,
                    envelope: report.envelope,
                    ratio: report.ratio,
                    upper_holds,
                    lower_holds,
                });
            }
        }
    }
    let points = rows.len();
    let checks = vec![
        CheckOutcome::from_failure(
            "exact upper inequality",
            upper_failure,
            format!("{points} grid points"),
        ),
        CheckOutcome::from_failure(
            "exact lower witnesses for every k",
            lower_failure,
            format!("{points} grid points"),
        ),
    ];
    let mut report = SuiteReport::new("bounds", dmax, nmax, ps, checks);
    report.ratio_band = band;
    report.rows = Some(rows);
    report
}

/// The combinatorial identities: the falling-power base change and the
/// ordered-partition counts for both part constraints.
pub fn run_identities_suite(dmax: u32) -> SuiteReport {
    let table = StirlingTable::new(dmax.max(10));

    let mut base_change_failure = None;
    for x in 0..=12i64 {
        for m in 0..=10u32 {
            let lhs = BigInt::from(x).pow(m);
            let rhs: BigInt = (0..=m)
                .map(|j| table.stirling2(m, j) * falling_power(x, j))
                .sum();
            if lhs != rhs && base_change_failure.is_none() {
                base_change_failure = Some(format!("base change fails at x={x} m={m}"));
            }
        }
    }

    let mut positive_failure = None;
    let mut min2_failure = None;
    let mut dominance_failure = None;
    for d in 1..=dmax {
        for k in 1..=d {
            let positive: BigInt = compositions_positive(d, k)
                .map(|c| multinomial(d, c.parts()))
                .sum();
            if positive != factorial(k) * table.stirling2(d, k) && positive_failure.is_none() {
                positive_failure = Some(format!("positive-part count fails at d={d} k={k}"));
            }
            let min2: BigInt = compositions_min2(d, k)
                .map(|c| multinomial(d, c.parts()))
                .sum();
            if min2 != factorial(k) * table.assoc_stirling2(d, k) && min2_failure.is_none() {
                min2_failure = Some(format!("parts>=2 count fails at d={d} k={k}"));
            }
            if table.assoc_stirling2(d, k) > table.stirling2(d, k) && dominance_failure.is_none() {
                dominance_failure = Some(format!("S2 exceeds S at d={d} k={k}"));
            }
        }
    }

    let checks = vec![
        CheckOutcome::from_failure(
            "falling-power base change x^m = sum S(m,j) x^(falling j)",
            base_change_failure,
            "x <= 12, m <= 10".to_string(),
        ),
        CheckOutcome::from_failure(
            "sum of multinomials over positive compositions = k! S(d,k)",
            positive_failure,
            format!("d <= {dmax}"),
        ),
        CheckOutcome::from_failure(
            "sum of multinomials over parts>=2 compositions = k! S2(d,k)",
            min2_failure,
            format!("d <= {dmax}"),
        ),
        CheckOutcome::from_failure(
            "S2(m,j) <= S(m,j)",
            dominance_failure,
            format!("m <= {dmax}"),
        ),
    ];
    SuiteReport::new("identities", dmax, 0, &[], checks)
}
