//! MAGMA scripts recomputing the dimensions a suite checks.

use std::fmt::Write as _;

use orthinv_core::catalog;
use orthinv_core::invariants::{hilbert_dims, LabeledPoly, LinearAction};
use orthinv_core::matgroups::{orthogonal_group, special_subgroup};
use orthinv_core::suites::Suite;
use orthinv_core::{Error, FieldElement, OrthogonalType, PrimeField, ProductGroup, Result};

/// The script text; deterministic in its inputs.
pub fn script(suite: Suite, field: PrimeField, lambda: FieldElement, d: u32) -> Result<String> {
    let p = field.p();
    let mut s = String::new();
    writeln!(
        s,
        "// orthinv {} export: suite {suite}, p = {p}",
        env!("CARGO_PKG_VERSION")
    )
    .unwrap();
    writeln!(
        s,
        "// Recomputes the invariant dimensions checked by the suite."
    )
    .unwrap();
    writeln!(
        s,
        "// Matrices act on (x1, x2, y1, y2) by right multiplication of row vectors."
    )
    .unwrap();
    writeln!(s, "F := GF({p});").unwrap();
    writeln!(s, "P<x1,x2,y1,y2> := PolynomialRing(F, 4);").unwrap();
    writeln!(s, "D := {d};").unwrap();
    writeln!(s, "ok := true;").unwrap();
    let plus = || orthogonal_group(field, OrthogonalType::Plus, None);
    let minus = || orthogonal_group(field, OrthogonalType::Minus, Some(lambda));
    match suite {
        Suite::Thm1 => {
            let g = special_subgroup(&plus()?);
            group_block(&mut s, "G", &g, d);
            generators_block(&mut s, "G", &catalog::set_a(field)?.members);
        }
        Suite::Thm2 => {
            let g = plus()?;
            group_block(&mut s, "G", &g, d);
            generators_block(&mut s, "G", &catalog::set_b(field)?.members);
        }
        Suite::Thm3 => {
            writeln!(s, "// lambda = {}", lambda.value()).unwrap();
            let g = minus()?;
            group_block(&mut s, "G", &g, d);
            generators_block(&mut s, "G", &catalog::set_c(field, lambda)?.members);
        }
        Suite::Thm4 | Suite::Lemma31 => {
            writeln!(s, "// lambda = {}", lambda.value()).unwrap();
            let g = minus()?;
            group_block(&mut s, "G", &g, d);
            group_block(&mut s, "H", &ProductGroup::square(&g), d);
            if suite == Suite::Thm4 {
                generators_block(&mut s, "H", &catalog::forms(field, lambda)?.members);
                generators_block(
                    &mut s,
                    "H",
                    &catalog::covariant_basis(field, lambda)?.members,
                );
            }
        }
        Suite::Lemma33 | Suite::ExampleP3 | Suite::OracleGroups => {
            return Err(Error::InvalidArgument(format!(
                "suite {suite} has no MAGMA export"
            )))
        }
    }
    writeln!(s, "print ok select \"PASS\" else \"FAIL\";").unwrap();
    Ok(s)
}

fn group_block(s: &mut String, name: &str, g: &dyn LinearAction, d: u32) {
    let gens: Vec<String> = g
        .generator_actions()
        .iter()
        .map(|a| {
            let entries: Vec<String> = a.rows().iter().flatten().map(u32::to_string).collect();
            format!("[{}]", entries.join(","))
        })
        .collect();
    writeln!(s, "{name} := MatrixGroup<4, F | {}>;", gens.join(", ")).unwrap();
    writeln!(s, "assert #{name} eq {};", g.order()).unwrap();
    writeln!(s, "R{name} := InvariantRing({name});").unwrap();
    let dims: Vec<String> = hilbert_dims(g, d).iter().map(usize::to_string).collect();
    writeln!(s, "expected{name} := [{}];", dims.join(", ")).unwrap();
    writeln!(
        s,
        "computed{name} := [#InvariantsOfDegree(R{name}, d) : d in [0..D]];"
    )
    .unwrap();
    writeln!(s, "print \"{name} dimensions:\", computed{name};").unwrap();
    writeln!(s, "ok := ok and computed{name} eq expected{name};").unwrap();
}

fn generators_block(s: &mut String, group: &str, polys: &[LabeledPoly]) {
    let texts: Vec<String> = polys.iter().map(|m| m.poly.to_text()).collect();
    writeln!(s, "gens := [P | {}];", texts.join(", ")).unwrap();
    writeln!(
        s,
        "ok := ok and &and[f^g eq f : f in gens, g in Generators({group})];"
    )
    .unwrap();
}

#[cfg(test)]
mod tests {
    use super::*;
    use orthinv_core::fields::select_lambda;

    #[test]
    fn minus_scripts_define_both_groups() {
        let f = PrimeField::new(3).unwrap();
        let s = script(Suite::Thm4, f, select_lambda(f), 8).unwrap();
        assert!(s.contains("// lambda = 2"));
        assert!(s.contains("assert #G eq 8;"));
        assert!(s.contains("assert #H eq 64;"));
        assert!(s.contains("expectedH := [1, 0, 2, 0, 5, 0, 8, 0, 14];"));
        assert!(s.ends_with("print ok select \"PASS\" else \"FAIL\";\n"));
    }

    #[test]
    fn unsupported_suites() {
        let f = PrimeField::new(5).unwrap();
        for suite in [Suite::Lemma33, Suite::ExampleP3, Suite::OracleGroups] {
            assert!(matches!(
                script(suite, f, select_lambda(f), 4),
                Err(Error::InvalidArgument(_))
            ));
        }
    }
}
