// Holevo quantity by alternating ascent, and the covariant lift that turns
// a minimum-entropy question into a Holevo one.

use qcap::capacity::{holevo_ascent, lift_capacity_identity_check};
use qcap::channels::{dephasing, depolarizing_qubit, Channel};

pub fn run_example() -> qcap::Result<()> {
    let channels: Vec<(&str, Channel)> = vec![
        ("identity", Channel::identity(2)),
        ("dephasing", dephasing(2).into()),
        ("depolarizing p=0.5", depolarizing_qubit(0.5)?.into()),
    ];
    for (name, ch) in &channels {
        let chi = holevo_ascent(ch, 0, 4, 1, 1e-10)?;
        let lift = lift_capacity_identity_check(ch, 2000, 1)?;
        println!(
            "{name:>18}: chi >= {:.6}; lift chi {:.6} vs log2 n - min H {:.6} (residual {:.1e})",
            chi.value, lift.chi_estimate, lift.logn_minus_min_h, lift.residual
        );
        assert!(lift.residual < 1e-3);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qcap::Result<()> {
    run_example()
}
