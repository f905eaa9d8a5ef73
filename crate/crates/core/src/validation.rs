//! Structural check battery for an assembled code, producing a
//! pass/fail-per-check report suitable for printing or serialization.

use crate::css::{ConstructionParams, CssCode};
use crate::decoder::DecodingGraph;
use crate::graph::girth_from_supports;

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub checks: Vec<CheckOutcome>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(name: &'static str, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome { name, passed, detail }
}

/// Girth of one stabilizer half with the appended column removed.
fn half_girth(code: &CssCode) -> Option<usize> {
    let hx = code.hx();
    let keep = hx.cols() - 1;
    let supports: Vec<Vec<usize>> = (0..hx.rows())
        .map(|r| hx.row_support(r).into_iter().filter(|&c| c < keep).collect())
        .collect();
    girth_from_supports(&supports, keep)
}

pub fn validate_code(code: &CssCode) -> ValidationReport {
    let mut checks = Vec::new();

    let product = code.hx().mul_transpose(code.hz()).expect("shapes agree");
    checks.push(check(
        "orthogonality",
        product.is_zero(),
        if product.is_zero() {
            "H_X * H_Z^T = 0".into()
        } else {
            "H_X * H_Z^T has a nonzero entry".into()
        },
    ));

    let n = code.n();
    let last_ok = (0..code.m_x()).all(|r| code.hx().get(r, n - 1))
        && (0..code.m_z()).all(|r| code.hz().get(r, n - 1));
    checks.push(check(
        "appended column",
        last_ok,
        if last_ok {
            "last column of both halves is all ones".into()
        } else {
            "last column has a zero entry".into()
        },
    ));

    let rank_sum = code.rank_x() + code.rank_z();
    let k_ok = code.k() == n - rank_sum;
    checks.push(check(
        "dimension",
        k_ok,
        format!(
            "n = {}, rank H_X = {}, rank H_Z = {}, k = {}",
            n,
            code.rank_x(),
            code.rank_z(),
            code.k()
        ),
    ));

    // Girth excluding the appended qubit: for the quasi-cyclic family the
    // whole stacked graph must clear 4-cycles; the two geometry halves are
    // mirror images, so only a single half can be (and is) 4-cycle free.
    let girth_outcome = match code.params() {
        ConstructionParams::QuasiCyclic { .. } => {
            let girth = DecodingGraph::reduced(code).girth();
            let passed = girth.is_none_or(|g| g >= 6);
            check(
                "stacked girth",
                passed,
                match girth {
                    Some(g) => format!("stacked graph without the appended qubit has girth {g}"),
                    None => "stacked graph without the appended qubit is cycle-free".into(),
                },
            )
        }
        _ => {
            let girth = half_girth(code);
            let passed = girth.is_none_or(|g| g >= 6);
            check(
                "half girth",
                passed,
                match girth {
                    Some(g) => format!("each half without the appended qubit has girth {g}"),
                    None => "each half without the appended qubit is cycle-free".into(),
                },
            )
        }
    };
    checks.push(girth_outcome);

    // Every overlapping row pair must run through the appended qubit:
    // nested pairs do by definition, and any wider overlap must still
    // include the appended column.
    let report = code.four_cycle_localization();
    let through_appended = report.residual.iter().all(|p| p.columns.contains(&(n - 1)));
    checks.push(check(
        "four-cycle localization",
        through_appended,
        format!(
            "{} of {} short-cycle row pairs nest on the appended qubit, all pass through it",
            report.appended_pair_count, report.pair_count
        ),
    ));

    let residual_outcome = match code.params() {
        ConstructionParams::Geometry { .. } => {
            let m = code.m_x();
            let ok = report.residual_only_between_mirrored_rows(m);
            check(
                "residual cycles",
                ok,
                format!(
                    "{} residual pairs, all between mirrored rows (j, j+{})",
                    report.residual.len(),
                    m
                ),
            )
        }
        _ => check(
            "residual cycles",
            report.residual.is_empty(),
            format!("{} residual pairs off the appended qubit", report.residual.len()),
        ),
    };
    checks.push(residual_outcome);

    ValidationReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fg::{construct_eg, construct_pg};
    use crate::qc::{choose_coset_representatives, qc_pair};

    fn qc_code(p: u64, sigma: u64) -> CssCode {
        let params = choose_coset_representatives(p, sigma).unwrap();
        let (h1, h2) = qc_pair(&params).unwrap();
        CssCode::assemble(
            &h1,
            &h2,
            ConstructionParams::QuasiCyclic { p, sigma },
            None,
        )
        .unwrap()
    }

    #[test]
    fn q1_passes_every_check() {
        let report = validate_code(&qc_code(7, 3));
        assert!(report.all_passed(), "{report:?}");
        assert_eq!(report.checks.len(), 6);
    }

    #[test]
    fn geometry_codes_pass_with_mirrored_residuals() {
        for code in [
            CssCode::from_incidence(&construct_eg(2).unwrap(), None).unwrap(),
            CssCode::from_incidence(&construct_pg(1).unwrap(), None).unwrap(),
        ] {
            let report = validate_code(&code);
            assert!(report.all_passed(), "{report:?}");
            let residual = report
                .checks
                .iter()
                .find(|c| c.name == "residual cycles")
                .unwrap();
            assert!(residual.passed);
        }
    }

    #[test]
    fn check_names_are_stable() {
        let report = validate_code(&qc_code(7, 3));
        let names: Vec<_> = report.checks.iter().map(|c| c.name).collect();
        assert_eq!(
            names,
            vec![
                "orthogonality",
                "appended column",
                "dimension",
                "stacked girth",
                "four-cycle localization",
                "residual cycles"
            ]
        );
    }
}
