// 2-out-of-4-SAT to minimum output entropy, checked end to end.

use qcap::reductions::{self, verify_gap, Budgets, ReductionKind, SourceInstance, VerifyRequest};
use qcap::seed;

pub fn run_example() -> qcap::Result<()> {
    let mut rng = seed::rng(5, 0);
    let instances = [
        ("satisfiable", reductions::random::satisfiable_sat24(4, 3, &mut rng)),
        ("unsatisfiable", reductions::random::unsatisfiable_sat24(4, 3, &mut rng)),
    ];
    for (label, inst) in instances {
        let report = verify_gap(&VerifyRequest {
            reduction: ReductionKind::Sat24entropy,
            instance: SourceInstance::Sat24(inst),
            seed: 1,
            budgets: Budgets { samples: 2000, restarts: 4 },
        })?;
        println!(
            "{label:>13}: source yes = {:?}, target min H = {:.9}, verdict {:?}",
            report.source.yes, report.target.value, report.verdict
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qcap::Result<()> {
    run_example()
}
