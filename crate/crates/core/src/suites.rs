//! Named verification suites producing serializable reports.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::catalog::{self, check_relations};
use crate::error::{Error, Result};
use crate::fields::{select_lambda, FieldElement, PrimeField};
use crate::invariants::{
    hilbert_denominator, hilbert_dims, quotient_numerator, relative_reynolds_image_dims,
    s_invariant, series_expand, verify_free_basis, verify_generating_set, DegreeCheck,
    GenerationReport, IntPoly,
};
use crate::matgroups::{
    orthogonal_group, special_subgroup, stabilizer_bruteforce, Mat2, MatrixGroup, OrthogonalType,
    ProductGroup,
};
use crate::polyring::MonomialOrder;
use crate::zerocheck::{build_covariant_matrix, det_nonzero, leading_term_matrix_det};

/// Number of evaluations per seed in the determinant test.
pub const ZERO_TEST_TRIALS: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Thm1,
    Thm2,
    Thm3,
    Thm4,
    Lemma31,
    Lemma33,
    ExampleP3,
    OracleGroups,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Thm1,
        Suite::Thm2,
        Suite::Thm3,
        Suite::Thm4,
        Suite::Lemma31,
        Suite::Lemma33,
        Suite::ExampleP3,
        Suite::OracleGroups,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Thm1 => "thm1",
            Suite::Thm2 => "thm2",
            Suite::Thm3 => "thm3",
            Suite::Thm4 => "thm4",
            Suite::Lemma31 => "lemma31",
            Suite::Lemma33 => "lemma33",
            Suite::ExampleP3 => "example-p3",
            Suite::OracleGroups => "oracle-groups",
        }
    }

    /// Largest prime accepted unless the caller raises the cap.
    pub fn default_prime_cap(self) -> u32 {
        match self {
            Suite::ExampleP3 => 3,
            Suite::Thm1 | Suite::Thm2 | Suite::OracleGroups => 13,
            Suite::Thm3 | Suite::Thm4 | Suite::Lemma31 | Suite::Lemma33 => 7,
        }
    }

    /// `2p` for the plus-type suites, `2(p + 1) + 4` for the minus-type ones.
    pub fn default_max_degree(self, p: u32) -> u32 {
        match self {
            Suite::Thm1 | Suite::Thm2 | Suite::ExampleP3 => 2 * p,
            Suite::Thm3 | Suite::Thm4 | Suite::Lemma31 => 2 * (p + 1) + 4,
            Suite::Lemma33 | Suite::OracleGroups => 0,
        }
    }

    fn uses_lambda(self) -> bool {
        matches!(
            self,
            Suite::Thm3 | Suite::Thm4 | Suite::Lemma31 | Suite::Lemma33 | Suite::OracleGroups
        )
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite `{s}`")))
    }
}

/// Inputs of one suite run; `None` fields take the suite defaults.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub p: u32,
    pub lambda: Option<u32>,
    pub max_degree: Option<u32>,
    pub seed: u64,
    pub prime_cap: Option<u32>,
}

impl SuiteConfig {
    pub fn new(suite: Suite, p: u32) -> Self {
        Self {
            suite,
            p,
            lambda: None,
            max_degree: None,
            seed: 0,
            prime_cap: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

/// Result of a suite run. Everything except `elapsed_ms` is determined by
/// the configuration.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub p: u32,
    pub lambda: Option<u32>,
    pub max_degree: u32,
    pub seed: u64,
    pub per_degree: Vec<DegreeCheck>,
    pub first_failure: Option<DegreeCheck>,
    pub extras: Map<String, Value>,
    pub overall: Verdict,
    pub version: String,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Human-readable summary.
    pub fn render(&self) -> String {
        let mut out = format!("suite {} p={}", self.suite, self.p);
        if let Some(l) = self.lambda {
            out += &format!(" lambda={l}");
        }
        if !self.per_degree.is_empty() {
            out += &format!(" max_degree={}", self.max_degree);
        }
        out += "\n";
        for c in &self.per_degree {
            out += &format!(
                "  degree {:>3}: expected {:>5}  actual {:>5}  {}\n",
                c.degree,
                c.dim_expected,
                c.dim_actual,
                if c.ok { "ok" } else { "MISMATCH" }
            );
        }
        for (k, v) in &self.extras {
            out += &format!("  {k}: {v}\n");
        }
        if let Some(c) = &self.first_failure {
            out += &format!(
                "  first failure at degree {}: expected {}, got {}\n",
                c.degree, c.dim_expected, c.dim_actual
            );
        }
        out += &format!("{}\n", self.overall);
        out
    }
}

struct Outcome {
    lambda: Option<u32>,
    max_degree: u32,
    per_degree: Vec<DegreeCheck>,
    extras: Map<String, Value>,
    ok: bool,
}

/// Runs one suite.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report> {
    let start = Instant::now();
    let suite = cfg.suite;
    if suite == Suite::ExampleP3 && cfg.p != 3 {
        return Err(Error::InvalidArgument(format!(
            "suite example-p3 requires p = 3 (got {})",
            cfg.p
        )));
    }
    let cap = cfg.prime_cap.unwrap_or(suite.default_prime_cap());
    if cfg.p > cap {
        return Err(Error::PrimeTooLarge { p: cfg.p, max: cap });
    }
    let field = PrimeField::new(cfg.p as u64)?;
    let lambda = match cfg.lambda {
        Some(l) => field.elem(l as i64),
        None => select_lambda(field),
    };
    let d = cfg.max_degree.unwrap_or(suite.default_max_degree(cfg.p));
    let mut outcome = match suite {
        Suite::Thm1 => thm1(field, d)?,
        Suite::Thm2 => thm2(field, d)?,
        Suite::Thm3 => thm3(field, lambda, d)?,
        Suite::Thm4 => thm4(field, lambda, d)?,
        Suite::Lemma31 => lemma31(field, lambda, d)?,
        Suite::Lemma33 => lemma33(field, lambda, cfg.seed)?,
        Suite::ExampleP3 => example_p3(field, d)?,
        Suite::OracleGroups => oracle_groups(field, lambda)?,
    };
    if !suite.uses_lambda() {
        outcome.lambda = None;
    }
    let first_failure = outcome.per_degree.iter().find(|c| !c.ok).copied();
    Ok(Report {
        suite: suite.name().to_string(),
        p: cfg.p,
        lambda: outcome.lambda,
        max_degree: outcome.max_degree,
        seed: cfg.seed,
        per_degree: outcome.per_degree,
        first_failure,
        extras: outcome.extras,
        overall: Verdict::from_bool(outcome.ok),
        version: env!("CARGO_PKG_VERSION").to_string(),
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

fn generation_outcome(
    group: &MatrixGroup,
    report: GenerationReport,
    generators: usize,
    lambda: Option<FieldElement>,
) -> Outcome {
    let mut extras = Map::new();
    extras.insert("group_order".into(), json!(group.order()));
    extras.insert("generators".into(), json!(generators));
    Outcome {
        lambda: lambda.map(FieldElement::value),
        max_degree: report.max_degree,
        ok: report.pass,
        per_degree: report.per_degree,
        extras,
    }
}

fn plus(field: PrimeField) -> Result<MatrixGroup> {
    orthogonal_group(field, OrthogonalType::Plus, None)
}

fn minus(field: PrimeField, lambda: FieldElement) -> Result<MatrixGroup> {
    orthogonal_group(field, OrthogonalType::Minus, Some(lambda))
}

fn thm1(field: PrimeField, d: u32) -> Result<Outcome> {
    let so = special_subgroup(&plus(field)?);
    let a = catalog::set_a(field)?;
    let report = verify_generating_set(&so, &a.members, d)?;
    Ok(generation_outcome(&so, report, a.len(), None))
}

fn thm2(field: PrimeField, d: u32) -> Result<Outcome> {
    let o = plus(field)?;
    let so = special_subgroup(&o);
    let b = catalog::set_b(field)?;
    let report = verify_generating_set(&o, &b.members, d)?;
    let mut out = generation_outcome(&o, report, b.len(), None);
    let surj = relative_reynolds_image_dims(&o, &so, d)?;
    let surj_ok = surj.iter().all(|c| c.ok);
    out.extras
        .insert("relative_reynolds_surjective".into(), json!(surj_ok));
    out.extras.insert(
        "relative_reynolds_image".into(),
        serde_json::to_value(&surj)?,
    );
    out.ok &= surj_ok;
    Ok(out)
}

fn thm3(field: PrimeField, lambda: FieldElement, d: u32) -> Result<Outcome> {
    let g = minus(field, lambda)?;
    let c = catalog::set_c(field, lambda)?;
    let report = verify_generating_set(&g, &c.members, d)?;
    let mut out = generation_outcome(&g, report, c.len(), Some(lambda));
    if !g.notes().is_empty() {
        out.extras.insert("group_notes".into(), json!(g.notes()));
    }
    Ok(out)
}

fn thm4(field: PrimeField, lambda: FieldElement, d: u32) -> Result<Outcome> {
    let g = minus(field, lambda)?;
    let product = ProductGroup::square(&g);
    let hsop = catalog::forms(field, lambda)?;
    let basis = catalog::covariant_basis(field, lambda)?;
    let report = verify_free_basis(&g, &product, &hsop.members, &basis.members, d)?;
    let mut extras = Map::new();
    let degrees: Vec<u32> = basis
        .polynomials()
        .filter_map(|f| f.homogeneous_degree())
        .collect();
    extras.insert("basis_degrees".into(), json!(degrees));
    extras.insert(
        "series_dims".into(),
        json!(report
            .per_degree
            .iter()
            .map(|c| c.series_dim)
            .collect::<Vec<_>>()),
    );
    extras.insert(
        "free_up_to_degree".into(),
        json!(report.pass.then_some(report.max_degree)),
    );
    Ok(Outcome {
        lambda: Some(lambda.value()),
        max_degree: d,
        per_degree: report.checks(),
        ok: report.pass,
        extras,
    })
}

fn lemma31(field: PrimeField, lambda: FieldElement, d: u32) -> Result<Outcome> {
    let p = field.p();
    let g = minus(field, lambda)?;
    let product = ProductGroup::square(&g);
    let hsop_degrees = [2, p + 1, 2, p + 1];

    // Invariants of the product against 1 / ((1 − t²)²(1 − t^{p+1})²).
    let product_dims = hilbert_dims(&product, d);
    let series = series_expand(&IntPoly::one(), &hilbert_denominator(&hsop_degrees), d)?;
    let per_degree: Vec<DegreeCheck> = product_dims
        .iter()
        .zip(&series.coefficients)
        .enumerate()
        .map(|(k, (&dim, &coef))| DegreeCheck {
            degree: k as u32,
            dim_expected: coef as usize,
            dim_actual: dim,
            ok: coef == dim as i128,
        })
        .collect();

    let small_dims = hilbert_dims(&g, d);
    let mut extras = Map::new();
    extras.insert("small_dims".into(), json!(small_dims));
    let expected_r = 2 * (p as i128 + 1);
    let expected_s = 2 * (p as i128 + 1).pow(2);
    extras.insert("expected_r".into(), json!(expected_r));
    extras.insert("expected_s_invariant".into(), json!(expected_s));
    let quotient_ok = match quotient_numerator(&small_dims, &hsop_degrees, d) {
        Ok(num) => {
            let s = s_invariant(&num);
            // the numerator must stop at the top basis degree 2(p + 1), and
            // D must reach past it for that to be visible
            let top = 2 * (p as usize + 1);
            let bounded = num.degree().is_some_and(|k| k <= top) && d as usize > top;
            extras.insert("numerator".into(), json!(num.to_string()));
            extras.insert("numerator_coefficients".into(), json!(num.coeffs()));
            extras.insert("r".into(), json!(s.r));
            extras.insert("s_invariant".into(), json!(s.s));
            extras.insert("numerator_bounded".into(), json!(bounded));
            bounded && s.r == expected_r && s.s == expected_s
        }
        Err(e) => {
            extras.insert("numerator_error".into(), json!(e.to_string()));
            false
        }
    };
    let ok = quotient_ok && per_degree.iter().all(|c| c.ok);
    Ok(Outcome {
        lambda: Some(lambda.value()),
        max_degree: d,
        per_degree,
        extras,
        ok,
    })
}

fn lemma33(field: PrimeField, lambda: FieldElement, seed: u64) -> Result<Outcome> {
    let m = build_covariant_matrix(field, lambda)?;
    let verdict = det_nonzero(&m, seed, ZERO_TEST_TRIALS)?;
    let mut extras = Map::new();
    extras.insert("matrix_size".into(), json!(m.size()));
    extras.insert("rows".into(), json!(m.row_labels()));
    extras.insert("verdict".into(), serde_json::to_value(&verdict)?);
    let mut ok = verdict.nonzero;
    if field.p() == 3 {
        let j = leading_term_matrix_det(&m, MonomialOrder::Lex)?;
        extras.insert("leading_term_determinant".into(), json!(j.to_text()));
        extras.insert("leading_term_nonzero".into(), json!(!j.is_zero()));
        ok &= !j.is_zero();
    }
    Ok(Outcome {
        lambda: Some(lambda.value()),
        max_degree: 0,
        per_degree: Vec::new(),
        extras,
        ok,
    })
}

fn example_p3(field: PrimeField, d: u32) -> Result<Outcome> {
    let relations = catalog::p3_relations(field);
    let relations_ok = check_relations(&relations).is_ok();
    let o = plus(field)?;
    let b = catalog::set_b(field)?;
    let report = verify_generating_set(&o, &b.members, d)?;
    let mut out = generation_outcome(&o, report, b.len(), None);
    out.extras.insert(
        "relations".into(),
        json!(relations
            .members
            .iter()
            .map(|m| json!({"label": m.label, "value": m.poly.to_text()}))
            .collect::<Vec<_>>()),
    );
    out.extras
        .insert("relations_vanish".into(), json!(relations_ok));
    out.ok &= relations_ok;
    Ok(out)
}

fn oracle_groups(field: PrimeField, lambda: FieldElement) -> Result<Outcome> {
    let p = field.p() as usize;
    let o_plus = plus(field)?;
    let so = special_subgroup(&o_plus);
    let o_minus = minus(field, lambda)?;
    let mut extras = Map::new();
    let orders = [
        ("so2plus", so.order(), p - 1),
        ("o2plus", o_plus.order(), 2 * (p - 1)),
        ("o2minus", o_minus.order(), 2 * (p + 1)),
    ];
    let mut ok = true;
    for (name, actual, expected) in orders {
        extras.insert(
            format!("order_{name}"),
            json!({"actual": actual, "expected": expected}),
        );
        ok &= actual == expected;
    }
    let split_form = Mat2::new(field, [[0, 1], [1, 0]]);
    let nonsplit_form = Mat2::diagonal(field, 1, -(lambda.value() as i64));
    let plus_oracle = stabilizer_bruteforce(field, &split_form)?;
    let minus_oracle = stabilizer_bruteforce(field, &nonsplit_form)?;
    let plus_eq = plus_oracle.elements() == o_plus.elements();
    let minus_eq = minus_oracle.elements() == o_minus.elements();
    extras.insert("plus_matches_stabilizer".into(), json!(plus_eq));
    extras.insert("minus_matches_stabilizer".into(), json!(minus_eq));
    if !o_minus.notes().is_empty() {
        extras.insert("group_notes".into(), json!(o_minus.notes()));
    }
    Ok(Outcome {
        lambda: Some(lambda.value()),
        max_degree: 0,
        per_degree: Vec::new(),
        extras,
        ok: ok && plus_eq && minus_eq,
    })
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidArgument(e.to_string())
    }
}
