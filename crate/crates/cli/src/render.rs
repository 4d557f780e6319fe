//! Table and JSON output.

use std::fmt::Write;

use ddbar_core::cohomology::CohomologyReport;
use ddbar_core::group::DifferentialRelation;
use ddbar_core::Form;
use serde::{Deserialize, Serialize};

/// Machine-readable cohomology report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonReport {
    pub name: String,
    pub n: usize,
    pub field_order: u32,
    pub hodge: Vec<Vec<usize>>,
    pub bott_chern: Vec<Vec<usize>>,
    pub aeppli: Vec<Vec<usize>>,
    pub betti: Vec<usize>,
    pub verdict_numeric: bool,
    pub verdict_direct: bool,
    pub frolicher_e1: bool,
}

impl JsonReport {
    pub fn new(name: &str, field_order: u32, r: &CohomologyReport) -> JsonReport {
        JsonReport {
            name: name.to_string(),
            n: r.n,
            field_order,
            hodge: r.hodge.clone(),
            bott_chern: r.bc.clone(),
            aeppli: r.aeppli.clone(),
            betti: r.betti.clone(),
            verdict_numeric: r.verdict_numeric,
            verdict_direct: r.verdict_direct,
            frolicher_e1: r.frolicher_degenerate,
        }
    }
}

/// Quotient report: the cohomology keys plus the invariant subcomplex data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonQuotient {
    #[serde(flatten)]
    pub report: JsonReport,
    pub action: String,
    pub group_order: usize,
    pub invariant_dims: Vec<Vec<usize>>,
    pub differentials: Vec<String>,
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

pub fn verdict_line(numeric: bool, direct: bool) -> String {
    format!(
        "ddbar: {} (numeric), {} (direct)",
        pass(numeric),
        pass(direct)
    )
}

/// One row per bidegree in lexicographic order, then Betti numbers and verdicts.
pub fn render_table(name: &str, field_order: u32, r: &CohomologyReport) -> String {
    let mut out = String::new();
    writeln!(out, "{name}: n = {}, field Q(zeta_{field_order})", r.n).unwrap();
    writeln!(
        out,
        "{:<9}{:>10}{:>10}{:>12}{:>8}",
        "", "dolbeault", "conjugate", "bott-chern", "aeppli"
    )
    .unwrap();
    for p in 0..=r.n {
        for q in 0..=r.n {
            writeln!(
                out,
                "{:<9}{:>10}{:>10}{:>12}{:>8}",
                format!("H^{{{p},{q}}}"),
                r.hodge[p][q],
                r.hodge_conj[p][q],
                r.bc[p][q],
                r.aeppli[p][q]
            )
            .unwrap();
        }
    }
    writeln!(out, "betti: {}", join(&r.betti, " ")).unwrap();
    writeln!(out, "{}", verdict_line(r.verdict_numeric, r.verdict_direct)).unwrap();
    let frolicher = if r.frolicher_degenerate {
        "degenerates at E1"
    } else {
        "does not degenerate at E1"
    };
    writeln!(out, "frolicher: {frolicher}").unwrap();
    if let Some(reps) = &r.representatives {
        writeln!(out, "representatives:").unwrap();
        let mut line = |label: String, forms: &[Form]| {
            if !forms.is_empty() {
                writeln!(out, "  {label}: {}", join(forms, ", ")).unwrap();
            }
        };
        for p in 0..=r.n {
            for q in 0..=r.n {
                line(format!("H^{{{p},{q}}} dolbeault"), &reps.dolbeault[p][q]);
                line(format!("H^{{{p},{q}}} bott-chern"), &reps.bott_chern[p][q]);
            }
        }
        for (k, forms) in reps.de_rham.iter().enumerate() {
            line(format!("H^{k} de rham"), forms);
        }
    }
    out
}

/// Invariant dimensions and nonzero differentials of a quotient subcomplex.
pub fn render_quotient_header(
    name: &str,
    action: &str,
    group_order: usize,
    dims: &[Vec<usize>],
    relations: &[DifferentialRelation],
) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "quotient of {name} by {action} (group order {group_order})"
    )
    .unwrap();
    writeln!(out, "invariant dimensions (row p, columns q):").unwrap();
    for (p, row) in dims.iter().enumerate() {
        writeln!(out, "  p={p}: {}", join(row, " ")).unwrap();
    }
    writeln!(out, "invariant differentials:").unwrap();
    if relations.is_empty() {
        writeln!(out, "  none").unwrap();
    }
    for rel in relations {
        writeln!(out, "  {rel}").unwrap();
    }
    out
}
