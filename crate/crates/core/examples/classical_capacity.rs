// Capacity of binary symmetric channels by Arimoto-Blahut iteration.

use qcap::capacity::arimoto_blahut;
use qcap::zero_error::ClassicalChannel;

fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

pub fn run_example() -> qcap::Result<()> {
    for p in [0.0, 0.11, 0.25, 0.5] {
        let bsc = ClassicalChannel::new(vec![vec![1.0 - p, p], vec![p, 1.0 - p]])?;
        let res = arimoto_blahut(&bsc, 1e-9, 10_000)?;
        let exact = 1.0 - binary_entropy(p);
        println!("BSC({p}): {:.9} after {} iterations, closed form {:.9}", res.value, res.iterations, exact);
        assert!((res.value - exact).abs() < 1e-6);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qcap::Result<()> {
    run_example()
}
