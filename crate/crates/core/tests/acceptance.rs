//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Runs without the libtest harness so that every criterion is executed and
//! reported even when an earlier one fails. Positional arguments filter by
//! substring of the criterion name.

use std::process::ExitCode;
use std::time::Instant;

use orthinv_core::catalog::{self, check_relations};
use orthinv_core::fields::select_lambda;
use orthinv_core::invariants::{
    act, hilbert_denominator, hilbert_dims, is_invariant, quotient_numerator,
    relative_reynolds_image_dims, reynolds, s_invariant, series_expand, transfer,
    verify_free_basis, verify_generating_set_in, IntPoly, LinearAction, Support,
};
use orthinv_core::matgroups::{orthogonal_group, special_subgroup, stabilizer_bruteforce};
use orthinv_core::polyring::random_polynomial;
use orthinv_core::zerocheck::{build_covariant_matrix, det_nonzero, leading_term_matrix_det};
use orthinv_core::{Mat2, MatrixGroup, MonomialOrder, OrthogonalType, PrimeField, ProductGroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const SMALL_PRIMES: [u32; 3] = [3, 5, 7];
const ORACLE_PRIMES: [u32; 5] = [3, 5, 7, 11, 13];
const PROPERTY_CASES: usize = 1000;

fn field(p: u32) -> PrimeField {
    PrimeField::new(p as u64).unwrap()
}

fn plus(f: PrimeField) -> MatrixGroup {
    orthogonal_group(f, OrthogonalType::Plus, None).unwrap()
}

fn minus(f: PrimeField) -> MatrixGroup {
    orthogonal_group(f, OrthogonalType::Minus, Some(select_lambda(f))).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn group_orders() -> Outcome {
    for p in ORACLE_PRIMES {
        let f = field(p);
        let o_plus = plus(f);
        let p = p as usize;
        let orders = [
            ("SO2+", special_subgroup(&o_plus).order(), p - 1),
            ("O2+", o_plus.order(), 2 * (p - 1)),
            ("O2-", minus(f).order(), 2 * (p + 1)),
        ];
        for (name, actual, expected) in orders {
            ensure(actual == expected, || {
                format!("p={p}: |{name}| = {actual}, expected {expected}")
            })?;
        }
    }
    Ok("p in {3,5,7,11,13}".into())
}

fn oracle_equivalence() -> Outcome {
    for p in ORACLE_PRIMES {
        let f = field(p);
        let lambda = select_lambda(f);
        let split = stabilizer_bruteforce(f, &Mat2::new(f, [[0, 1], [1, 0]])).unwrap();
        let nonsplit =
            stabilizer_bruteforce(f, &Mat2::diagonal(f, 1, -(lambda.value() as i64))).unwrap();
        ensure(split.elements() == plus(f).elements(), || {
            format!("p={p}: O2+ differs from the stabilizer of x1x2")
        })?;
        ensure(nonsplit.elements() == minus(f).elements(), || {
            format!("p={p}: O2- differs from the stabilizer of diag(1,-lambda)")
        })?;
    }
    Ok("p in {3,5,7,11,13}".into())
}

fn generation(
    p: u32,
    g: &dyn LinearAction,
    gens: &[orthinv_core::invariants::LabeledPoly],
    d: u32,
    support: Support,
) -> Result<(), String> {
    let report = verify_generating_set_in(g, gens, d, support).map_err(|e| e.to_string())?;
    match report.first_failure() {
        None => Ok(()),
        Some(c) => Err(format!(
            "p={p}: degree {} spans {} of {}",
            c.degree, c.dim_actual, c.dim_expected
        )),
    }
}

fn theorem_so2plus() -> Outcome {
    for p in SMALL_PRIMES {
        let f = field(p);
        let so = special_subgroup(&plus(f));
        let a = catalog::set_a(f).unwrap();
        generation(p, &so, &a.members, 2 * p, Support::All)?;
    }
    Ok("set A generates up to D=2p, p in {3,5,7}".into())
}

fn theorem_o2plus() -> Outcome {
    for p in SMALL_PRIMES {
        let f = field(p);
        let o = plus(f);
        let b = catalog::set_b(f).unwrap();
        generation(p, &o, &b.members, 2 * p, Support::All)?;
        let so = special_subgroup(&o);
        for c in relative_reynolds_image_dims(&o, &so, 2 * p).unwrap() {
            ensure(c.ok, || {
                format!(
                    "p={p}: relative Reynolds image in degree {} has dim {} of {}",
                    c.degree, c.dim_actual, c.dim_expected
                )
            })?;
        }
    }
    Ok("set B generates and relative Reynolds is onto up to D=2p".into())
}

fn theorem_o2minus() -> Outcome {
    for p in SMALL_PRIMES {
        let f = field(p);
        let c = catalog::set_c(f, select_lambda(f)).unwrap();
        generation(p, &minus(f), &c.members, 2 * (p + 1) + 4, Support::All)?;
    }
    Ok("set C generates up to D=2(p+1)+4".into())
}

fn free_basis() -> Outcome {
    for p in SMALL_PRIMES {
        let f = field(p);
        let lambda = select_lambda(f);
        let g = minus(f);
        let product = ProductGroup::square(&g);
        let hsop = catalog::forms(f, lambda).unwrap();
        let basis = catalog::covariant_basis(f, lambda).unwrap();
        let d = 2 * (p + 1) + 4;
        let report = verify_free_basis(&g, &product, &hsop.members, &basis.members, d).unwrap();
        if let Some(c) = report.first_failure() {
            return Err(format!(
                "p={p}: degree {} span {} fixed {} series {}",
                c.degree, c.span_dim, c.fixed_dim, c.series_dim
            ));
        }
    }
    Ok("span = fixed = series up to D=2(p+1)+4".into())
}

fn product_hilbert_series() -> Outcome {
    for p in SMALL_PRIMES {
        let f = field(p);
        let d = 2 * (p + 1) + 2;
        let dims = hilbert_dims(&ProductGroup::square(&minus(f)), d);
        let den = hilbert_denominator(&[2, 2, p + 1, p + 1]);
        let series = series_expand(&IntPoly::one(), &den, d).unwrap();
        let dims: Vec<i128> = dims.iter().map(|&x| x as i128).collect();
        ensure(dims == series.coefficients, || {
            format!("p={p}: dims {dims:?} vs series {:?}", series.coefficients)
        })?;
    }
    Ok("matches 1/((1-t^2)^2(1-t^(p+1))^2) up to D=2(p+1)+2".into())
}

fn s_invariants() -> Outcome {
    let mut found = Vec::new();
    for p in SMALL_PRIMES {
        let f = field(p);
        let d = 2 * (p + 1) + 4;
        let hsop = [2, p + 1, 2, p + 1];
        let dims = hilbert_dims(&minus(f), d);
        let num = quotient_numerator(&dims, &hsop, d).map_err(|e| format!("p={p}: {e}"))?;
        ensure(num.degree() <= Some(2 * (p as usize + 1)), || {
            format!("p={p}: numerator {num} exceeds degree 2(p+1)")
        })?;
        let s = s_invariant(&num);
        let (r, sv) = (2 * (p as i128 + 1), 2 * (p as i128 + 1).pow(2));
        ensure(s.r == r && s.s == sv, || {
            format!("p={p}: r={} s={}, expected r={r} s={sv}", s.r, s.s)
        })?;
        found.push(format!("p={p}: r={} s={}", s.r, s.s));
    }
    Ok(found.join(", "))
}

fn determinant() -> Outcome {
    for p in SMALL_PRIMES {
        let f = field(p);
        let m = build_covariant_matrix(f, select_lambda(f)).unwrap();
        for seed in 0..3 {
            let v = det_nonzero(&m, seed, 3).unwrap();
            ensure(v.nonzero, || {
                format!("p={p} seed={seed}: no nonzero witness")
            })?;
        }
    }
    let f = field(3);
    let m = build_covariant_matrix(f, select_lambda(f)).unwrap();
    for order in [MonomialOrder::Lex, MonomialOrder::Grlex] {
        let j = leading_term_matrix_det(&m, order).unwrap();
        ensure(!j.is_zero(), || {
            format!(
                "randomized determinant nonzero for p in {{3,5,7}}, seeds {{0,1,2}}; \
                 but the p=3 leading-term determinant ({order:?}) is 0"
            )
        })?;
    }
    Ok("nonzero for p in {3,5,7}, seeds {0,1,2}; p=3 leading-term determinant nonzero".into())
}

fn p3_relations() -> Outcome {
    check_relations(&catalog::p3_relations(field(3))).map_err(|e| e.to_string())?;
    Ok("both relations vanish over F_3".into())
}

fn set_c_fixed_by_every_element() -> Outcome {
    for (p, lambda) in [(5u32, 2i64), (7, -1)] {
        let f = field(p);
        let lambda = f.elem(lambda);
        let g = orthogonal_group(f, OrthogonalType::Minus, Some(lambda)).unwrap();
        let c = catalog::set_c(f, lambda).unwrap();
        for m in &c.members {
            for e in g.elements() {
                ensure(act(e, &m.poly).unwrap() == m.poly, || {
                    format!("p={p}: {} moved by {e}", m.label)
                })?;
            }
        }
    }
    Ok("every member fixed by all of O2- at p=5 (lambda=2), p=7 (lambda=-1)".into())
}

fn vector_invariants() -> Outcome {
    for p in SMALL_PRIMES {
        let f = field(p);
        let o = plus(f);
        let so = special_subgroup(&o);
        let d = 2 * p;
        let so_family = catalog::vector_so2plus(f).unwrap();
        generation(p, &so, &so_family.members, d, Support::XOnly)?;
        let plus_family = catalog::vector_plus(f).unwrap();
        generation(p, &o, &plus_family.members, d, Support::XOnly)?;
        let minus_family = catalog::vector_minus(f, select_lambda(f)).unwrap();
        generation(p, &minus(f), &minus_family.members, d, Support::XOnly)?;
    }
    Ok("SO2+, O2+, O2- x-only families generate up to D=2p".into())
}

fn operator_properties() -> Outcome {
    let mut cases = 0;
    for p in SMALL_PRIMES {
        let f = field(p);
        let lambda = select_lambda(f);
        let o = plus(f);
        let groups = [special_subgroup(&o), o, minus(f)];
        let invariants = [
            catalog::set_a(f).unwrap(),
            catalog::set_b(f).unwrap(),
            catalog::set_c(f, lambda).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(p as u64);
        for case in 0..PROPERTY_CASES {
            let which = case % 3;
            let g = &groups[which];
            let fam = &invariants[which];
            let poly = random_polynomial(f, 4, 5, &mut rng);
            let h = &fam.members[rng.random_range(0..fam.len())].poly;
            let e1 = &g.elements()[rng.random_range(0..g.order())];
            let e2 = &g.elements()[rng.random_range(0..g.order())];
            let fail = |what: &str| format!("p={p} case {case}: {what} fails for {poly}");

            let r = reynolds(g, &poly).unwrap();
            ensure(reynolds(g, &r).unwrap() == r, || {
                fail("Reynolds idempotence")
            })?;
            ensure(is_invariant(g, &r).unwrap(), || {
                fail("Reynolds image invariance")
            })?;
            ensure(reynolds(g, &act(e1, &poly).unwrap()).unwrap() == r, || {
                fail("Reynolds absorbs the action")
            })?;
            ensure(act(e2, &r).unwrap() == r, || fail("Reynolds image fixed"))?;
            ensure(reynolds(g, h).unwrap() == *h, || {
                fail("Reynolds fixes invariants")
            })?;
            ensure(reynolds(g, &(h * &poly)).unwrap() == h * &r, || {
                fail("Reynolds module property")
            })?;

            let t = transfer(g, &poly).unwrap();
            ensure(act(e1, &t).unwrap() == t, || fail("transfer invariance"))?;
            ensure(transfer(g, &(h * &poly)).unwrap() == h * &t, || {
                fail("transfer module property")
            })?;

            let composed = act(&e1.mul(e2), &poly).unwrap();
            let stepwise = act(e1, &act(e2, &poly).unwrap()).unwrap();
            ensure(composed == stepwise, || fail("composition law"))?;
            cases += 1;
        }
    }
    Ok(format!("0 failures over {cases} cases (1000 per prime)"))
}

type Criterion = (&'static str, fn() -> Outcome);

const CRITERIA: [Criterion; 13] = [
    ("criterion_01_group_orders", group_orders),
    ("criterion_02_oracle_equivalence", oracle_equivalence),
    ("criterion_03_so2plus_generators", theorem_so2plus),
    ("criterion_04_o2plus_generators", theorem_o2plus),
    ("criterion_05_o2minus_generators", theorem_o2minus),
    ("criterion_06_free_covariant_basis", free_basis),
    (
        "criterion_07_product_hilbert_series",
        product_hilbert_series,
    ),
    ("criterion_08_s_invariant", s_invariants),
    ("criterion_09_covariant_determinant", determinant),
    ("criterion_10_p3_relations", p3_relations),
    (
        "criterion_11_set_c_invariance",
        set_c_fixed_by_every_element,
    ),
    ("criterion_12_vector_invariants", vector_invariants),
    ("criterion_13_operator_properties", operator_properties),
];

fn main() -> ExitCode {
    let filters: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let selected: Vec<&Criterion> = CRITERIA
        .iter()
        .filter(|(name, _)| filters.is_empty() || filters.iter().any(|f| name.contains(f.as_str())))
        .collect();
    println!("\nrunning {} acceptance criteria", selected.len());
    let mut failed = 0;
    for (name, run) in selected {
        let start = Instant::now();
        let outcome = run();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("{name} ... PASS ({ms} ms) {detail}"),
            Err(detail) => {
                failed += 1;
                println!("{name} ... FAIL ({ms} ms) {detail}");
            }
        }
    }
    println!("\nacceptance: {failed} failed\n");
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
