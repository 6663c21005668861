use super::audit::AuditReport;
use super::{Inequality, Verdict};
use crate::scalar::Scalar;

fn cell<T: Scalar>(audit: &AuditReport<T>, ineq: Inequality) -> String {
    let Some(r) = audit.property(ineq) else {
        return "-".into();
    };
    match r.verdict {
        Verdict::HoldsOnSample => "holds".into(),
        Verdict::Undetermined => "n/a".into(),
        Verdict::Fails => match r.witnesses.first().and_then(|w| w.sample) {
            Some(i) => format!("fails#{i}"),
            None => "fails*".into(),
        },
    }
}

/// Text table with one row per property, one column per audited model.
///
/// `fails#i` names the sample index of the first witness, `fails*` a
/// witness that is not a sample, `n/a` an undetermined property.
pub fn summary_table<T: Scalar>(audits: &[AuditReport<T>]) -> String {
    let rows = [
        Inequality::Etss,
        Inequality::Wetss,
        Inequality::BePlus,
        Inequality::Be,
        Inequality::Bicoax,
        Inequality::Semi,
        Inequality::InvertWitness,
    ];
    let mut table: Vec<Vec<String>> = vec![std::iter::once("property".to_string())
        .chain(audits.iter().map(|a| a.model.clone()))
        .collect()];
    for ineq in rows {
        table.push(
            std::iter::once(ineq.label().to_string())
                .chain(audits.iter().map(|a| cell(a, ineq)))
                .collect(),
        );
    }
    table.push(
        std::iter::once("chain".to_string())
            .chain(audits.iter().map(|a| {
                if a.is_sound() {
                    "sound".to_string()
                } else {
                    format!("{} viol.", a.chain_violations.len() + a.derivative_mismatches + a.evaluation_errors)
                }
            }))
            .collect(),
    );
    let cols = table[0].len();
    let widths: Vec<usize> = (0..cols)
        .map(|j| table.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::from("ETSS => WETSS => BEplus => BICOAX <=> SEMI\n");
    for (k, row) in table.iter().enumerate() {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}", w = *w))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
        if k == 0 {
            out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (cols - 1)));
            out.push('\n');
        }
    }
    if let Some(a) = audits.first() {
        out.push_str(&format!("samples per model: {}\n", a.samples_tested));
    }
    out
}
