// Minimum output entropy of flagged sums of the partial trace, swap-test
// and cube channels, by local descent and by the sampling oracle.

use qcap::capacity::{min_entropy_ascent, min_entropy_oracle};
use qcap::channels::{build_cube_channel, build_swap_channel, build_trace_channel, orthomix, Channel};
use qcap::linalg::PureState;

pub fn run_example() -> qcap::Result<()> {
    for d in [2, 3] {
        let pair = orthomix(vec![
            (0.5, build_trace_channel(d).into()),
            (0.5, build_swap_channel(d).into()),
        ])?;
        let oracle = min_entropy_oracle(&pair, 2000, 7)?;
        let descent = min_entropy_ascent(&pair, 8, 7, 1e-10)?;
        println!("trace+swap d={d}: oracle {:.6}, descent {:.6}", oracle.value, descent.value);
        assert!((oracle.value - 1.0).abs() < 2e-3);

        let cube: Channel = build_cube_channel(d, &PureState::basis(2, 0), &PureState::basis(2, 1))?.into();
        let third = 1.0 / 3.0;
        let triple = orthomix(vec![
            (third, build_trace_channel(d).into()),
            (third, build_swap_channel(d).into()),
            (third, cube),
        ])?;
        let oracle = min_entropy_oracle(&triple, 2000, 7)?;
        println!("trace+swap+cube d={d}: oracle {:.6} (log2 3 = {:.6})", oracle.value, 3f64.log2());
        assert!((oracle.value - 3f64.log2()).abs() < 5e-3);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qcap::Result<()> {
    run_example()
}
