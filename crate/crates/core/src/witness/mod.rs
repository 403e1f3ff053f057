//! Finite instances of the explicit constructions behind the dividing-line
//! results, each checked by exhaustive 4-subset scans and solver calls.

mod claim1;
mod ip2;
mod nsop4;
mod sop3;
mod template;
mod tp2;

pub use claim1::{claim1_sweep, claim1_witness, Claim1Outcome};
pub use ip2::{ip2_build, Ip2Witness, IP2_MAX_POINTS};
pub use nsop4::{nsop4_build_cycle, nsop4_make_input, nsop4_sweep, Nsop4Input};
pub use sop3::{sop3_build, sop3_cycle_check, Sop3Witness};
pub use template::{empty_base_obstruction, invariant_extension_template, TemplateExtension};
pub use tp2::{tp2_build, tp2_pair_claim_check, Tp2Witness, TP2_MAX_CELLS};

use crate::classify::find_h4;
use crate::error::Result;
use crate::format::write_total;
use crate::report::WitnessReport;
use crate::solver::{solve, ConstraintSet, SolveOutcome};
use crate::structure::{Hypertournament, PartialHypertournament};

/// Exhaustive H4 scan recorded in `report`; a hit becomes the counterexample.
pub(crate) fn check_h4_free(report: &mut WitnessReport, h: &Hypertournament, what: &str) -> bool {
    report.completions_checked += 1;
    match find_h4(h) {
        None => report.check(true, format!("{what}: H4-free ({} points)", h.len())),
        Some(s) => {
            report.fail_with(format!("{what}: H4 at {s:?}"), Some(write_total(h)));
            false
        }
    }
}

pub(crate) fn counted_solve(
    report: &mut WitnessReport,
    base: &PartialHypertournament,
    cs: &ConstraintSet,
) -> Result<SolveOutcome> {
    report.solver_calls += 1;
    solve(base, cs)
}
