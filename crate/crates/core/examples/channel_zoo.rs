// Builds the structured channels, checks them through their Choi matrices
// and shows the flagged-sum entropy identity on one random input.

use qcap::channels::{
    build_cube_channel, build_swap_channel, build_trace_channel, build_trace_channel_eb, dephasing,
    depolarizing_qubit, orthomix, Channel,
};
use qcap::linalg::{random, von_neumann_entropy, PureState};
use qcap::seed;

pub fn run_example() -> qcap::Result<()> {
    let v = PureState::basis(2, 0);
    let v_prime = PureState::basis(2, 1);
    let zoo: Vec<(&str, Channel)> = vec![
        ("swap test d=2", build_swap_channel(2).into()),
        ("partial trace d=3", build_trace_channel(3).into()),
        ("noisy trace d=2", build_trace_channel_eb(2, 0.1)?.channel()),
        ("cube d=2", build_cube_channel(2, &v, &v_prime)?.into()),
        ("dephasing d=3", dephasing(3).into()),
        ("depolarizing p=0.3", depolarizing_qubit(0.3)?.into()),
    ];
    for (name, ch) in &zoo {
        let r = ch.validate_cptp()?;
        println!(
            "{name:>20}: {} -> {}, completeness {:.1e}, choi min eig {:+.1e}",
            ch.dim_in(),
            ch.dim_out(),
            r.completeness_residual,
            r.choi_min_eigenvalue
        );
        assert!(r.pass);
    }

    let trace: Channel = build_trace_channel(2).into();
    let swap: Channel = build_swap_channel(2).into();
    let mix = orthomix(vec![(0.5, trace.clone()), (0.5, swap.clone())])?;
    let mut rng = seed::rng(3, 0);
    let rho = random::density(4, &mut rng);
    let lhs = von_neumann_entropy(&mix.apply(&rho)?)?;
    let rhs = 1.0 + 0.5 * von_neumann_entropy(&trace.apply(&rho)?)? + 0.5 * von_neumann_entropy(&swap.apply(&rho)?)?;
    println!("flagged sum: H = {lhs:.12}, H(p) + sum p_i H_i = {rhs:.12}");
    assert!((lhs - rhs).abs() < 1e-9);
    Ok(())
}

#[allow(dead_code)]
fn main() -> qcap::Result<()> {
    run_example()
}
