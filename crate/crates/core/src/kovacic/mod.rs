//! Kovacic's algorithm for Fuchsian equations `ξ″ = r(z) ξ`: exponent
//! bookkeeping, the polynomial searches of cases 1–3 and exact verification
//! of any Liouvillian solution found.

mod candidates;
mod search;
mod table;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::{partial_fractions, AlgebraError, Field, PartialFractions, Poly, QuadExt, RatFunc};
use crate::nve::{NveData, NveError};

pub use candidates::{case1_candidates, case2_candidates, case3_candidates, candidates_for, CaseCandidate};
pub use search::{case1_search, case2_search, case3_recursion, case3_search, search, verify_solution, SearchResult, Witness};
pub use table::{candidate_counts, table1, table1_json, table1_text, Table1Row};

/// Case labels in the order they are tried: 1, 2, then the three subcases
/// of case 3 by the degree of the minimal polynomial of ω.
pub const CASES: [u32; 5] = [1, 2, 4, 6, 12];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KovacicError {
    #[error("not a Fuchsian equation: {0}")]
    NotFuchsian(#[from] AlgebraError),
    #[error("√(1 + 4β) with β = {0} is not in the coefficient field")]
    ExponentOutsideField(String),
    #[error(transparent)]
    Nve(#[from] NveError),
}

/// `ξ″ = r ξ` with `r = Σ β_j/(z−a_j)² + Σ δ_j/(z−a_j)` and `Σ δ_j = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FuchsianOde<K: Field> {
    pub poles: Vec<K>,
    pub beta: Vec<K>,
    pub delta: Vec<K>,
    /// Coefficient of `z⁻²` at infinity.
    pub beta_inf: K,
    pub r: RatFunc<K>,
}

impl<K: Field> FuchsianOde<K> {
    /// Expands `r` over the listed points. Points where `r` turns out to be
    /// regular are dropped; anything that is not Fuchsian is rejected.
    pub fn new(r: RatFunc<K>, poles: &[K]) -> Result<Self, KovacicError> {
        let pf = partial_fractions(&r, poles)?;
        Ok(Self::from_partial(&pf))
    }

    pub fn from_partial(pf: &PartialFractions<K>) -> Self {
        let keep: Vec<usize> = (0..pf.poles.len())
            .filter(|&j| !(pf.beta[j].is_zero() && pf.delta[j].is_zero()))
            .collect();
        let pick = |v: &[K]| keep.iter().map(|&j| v[j].clone()).collect::<Vec<_>>();
        Self {
            poles: pick(&pf.poles),
            beta: pick(&pf.beta),
            delta: pick(&pf.delta),
            beta_inf: pf.beta_inf.clone(),
            r: pf.reconstruct(),
        }
    }

    /// Order of the pole at `a_j`: 1 or 2.
    pub fn order(&self, j: usize) -> usize {
        if self.beta[j].is_zero() {
            1
        } else {
            2
        }
    }

    /// Order of vanishing of `r` at infinity; `None` when `r = 0`.
    pub fn order_at_infinity(&self) -> Option<usize> {
        Some(self.r.den().degree()? - self.r.num().degree()?)
    }

    /// `S = Π (z − a_j)`.
    pub fn s(&self) -> Poly<K> {
        Poly::from_roots(&self.poles)
    }

    /// Kovacic's necessary conditions for cases 1, 2 and 3.
    pub fn necessary_conditions(&self) -> [bool; 3] {
        let inf = self.order_at_infinity();
        let orders: Vec<usize> = (0..self.poles.len()).map(|j| self.order(j)).collect();
        let case1 = orders.iter().all(|&o| o == 1 || o % 2 == 0) && inf.is_none_or(|o| o % 2 == 0 || o > 2);
        let case2 = orders.iter().any(|&o| o == 2 || (o > 2 && o % 2 == 1));
        let case3 = orders.iter().all(|&o| o <= 2) && inf.is_none_or(|o| o >= 2);
        [case1, case2, case3]
    }
}

impl FuchsianOde<QuadExt> {
    pub fn from_nve(data: &NveData) -> Self {
        Self::from_partial(&data.fuchsian)
    }
}

/// `√(1 + 4β)` inside the field, if it exists there.
pub(crate) fn exponent_root<K: Field>(beta: &K) -> Option<K> {
    K::one().add_ref(&K::from_i64(4).mul_ref(beta)).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LedgerEntry<K: Field> {
    pub candidate: CaseCandidate<K>,
    pub result: SearchResult<K>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict<K: Field> {
    /// A verified Liouvillian solution `ξ = exp ∫ω`.
    Solvable { case: u32, d: usize, witness: Witness<K> },
    /// Every candidate of every case failed: the Galois group is SL(2, ℂ).
    Unsolvable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KovacicOutcome<K: Field> {
    pub verdict: Verdict<K>,
    /// All candidates searched, sorted by case, d and selection.
    pub ledger: Vec<LedgerEntry<K>>,
    pub necessary: [bool; 3],
}

impl<K: Field> KovacicOutcome<K> {
    pub fn is_solvable(&self) -> bool {
        matches!(self.verdict, Verdict::Solvable { .. })
    }
}

/// Tries cases 1, 2, 4, 6, 12 in order; within a case all candidates are
/// searched in parallel and the first verified success in ledger order wins.
pub fn run_kovacic<K: Field>(ode: &FuchsianOde<K>) -> Result<KovacicOutcome<K>, KovacicError> {
    let necessary = ode.necessary_conditions();
    let mut ledger = Vec::new();
    for case in CASES {
        let allowed = match case {
            1 => necessary[0],
            2 => necessary[1],
            _ => necessary[2],
        };
        if !allowed {
            continue;
        }
        let entries: Vec<LedgerEntry<K>> = candidates_for(ode, case)?
            .into_par_iter()
            .map(|candidate| LedgerEntry {
                result: search(ode, &candidate),
                candidate,
            })
            .collect();
        let hit = entries.iter().find_map(|e| match &e.result {
            SearchResult::Found(w) => Some((e.candidate.d, w.clone())),
            _ => None,
        });
        ledger.extend(entries);
        if let Some((d, witness)) = hit {
            return Ok(KovacicOutcome {
                verdict: Verdict::Solvable { case, d, witness },
                ledger,
                necessary,
            });
        }
    }
    Ok(KovacicOutcome {
        verdict: Verdict::Unsolvable,
        ledger,
        necessary,
    })
}

/// JSON report: the Fuchsian data, the ledger with each search outcome and
/// the verdict (with ω for a solvable equation). Field elements are written
/// with their `Display` form.
pub fn outcome_json<K: Field>(ode: &FuchsianOde<K>, outcome: &KovacicOutcome<K>) -> Value {
    let s = |v: &[K]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
    let ledger: Vec<Value> = outcome
        .ledger
        .iter()
        .map(|e| {
            let c = &e.candidate;
            json!({
                "case": c.case,
                "d": c.d,
                "selection": c.selection,
                "exponents": s(&c.exponents),
                "at_infinity": c.at_infinity.to_string(),
                "result": e.result.to_json(),
            })
        })
        .collect();
    let verdict = match &outcome.verdict {
        Verdict::Solvable { case, d, witness } => json!({
            "solvable": true,
            "case": case,
            "d": d,
            "witness": witness.to_json(),
        }),
        Verdict::Unsolvable => json!({ "solvable": false }),
    };
    json!({
        "poles": s(&ode.poles),
        "beta": s(&ode.beta),
        "delta": s(&ode.delta),
        "beta_inf": ode.beta_inf.to_string(),
        "r": ode.r.to_string(),
        "necessary_conditions": outcome.necessary,
        "ledger": ledger,
        "verdict": verdict,
    })
}

#[cfg(test)]
mod tests;
