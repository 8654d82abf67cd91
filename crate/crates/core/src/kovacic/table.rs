//! Candidate counts per case: which degrees `d` occur and how many exponent
//! selections lead to each.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::{candidates_for, FuchsianOde, KovacicError, CASES};
use crate::algebra::{Field, Rational};
use crate::nve::equatorial_nve;

/// Case label `N` → (`d` → number of selections).
pub type Table1Row = BTreeMap<u32, BTreeMap<usize, usize>>;

pub fn candidate_counts<K: Field>(ode: &FuchsianOde<K>) -> Result<Table1Row, KovacicError> {
    let mut row = Table1Row::new();
    for case in CASES {
        let cell = row.entry(case).or_default();
        for c in candidates_for(ode, case)? {
            *cell.entry(c.d).or_default() += 1;
        }
    }
    Ok(row)
}

/// Counts for the equatorial NVE of the order-`n` sectoral surface. The
/// result does not depend on `eps`.
pub fn table1(n: u32, eps: &Rational) -> Result<Table1Row, KovacicError> {
    let data = equatorial_nve(n, eps)?;
    candidate_counts(&FuchsianOde::from_nve(&data))
}

fn cell_text(cell: Option<&BTreeMap<usize, usize>>) -> String {
    match cell {
        Some(m) if !m.is_empty() => m.iter().map(|(d, k)| format!("{d}({k})")).collect::<Vec<_>>().join(", "),
        _ => "-".into(),
    }
}

/// Aligned text: one row per `n`, columns `N = 1, 2, 4, 6, 12`, entries
/// `d(count)`, `-` when empty.
pub fn table1_text(rows: &[(u32, Table1Row)]) -> String {
    let mut grid = vec![std::iter::once("n".to_string()).chain(CASES.iter().map(|c| format!("N={c}"))).collect::<Vec<_>>()];
    for (n, row) in rows {
        grid.push(std::iter::once(n.to_string()).chain(CASES.iter().map(|c| cell_text(row.get(c)))).collect());
    }
    let widths: Vec<usize> = (0..=CASES.len())
        .map(|i| grid.iter().map(|r| r[i].chars().count()).max().unwrap_or(0))
        .collect();
    let line = |r: &[String]| {
        let cells: Vec<String> = r.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
        cells.join(" | ").trim_end().to_string()
    };
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    let mut out = vec![line(&grid[0]), rule.join("-+-")];
    out.extend(grid[1..].iter().map(|r| line(r)));
    out.join("\n") + "\n"
}

pub fn table1_json(rows: &[(u32, Table1Row)]) -> Value {
    let rows: Vec<Value> = rows
        .iter()
        .map(|(n, row)| {
            let cells: BTreeMap<String, BTreeMap<String, usize>> = row
                .iter()
                .map(|(c, m)| (c.to_string(), m.iter().map(|(d, k)| (d.to_string(), *k)).collect()))
                .collect();
            json!({ "n": n, "counts": cells })
        })
        .collect();
    json!({ "rows": rows })
}
