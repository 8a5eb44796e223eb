// Independence numbers and zero-error capacity lower bounds for small graphs.

use qcap::zero_error::{
    confusability_graph, graph_power, independence_number, shannon_capacity_lower_bound, ClassicalChannel, Graph,
};

pub fn run_example() -> qcap::Result<()> {
    let c5 = Graph::cycle(5);
    let ind = independence_number(&c5)?;
    println!("alpha(C5) = {} via {:?}", ind.alpha, ind.witness);
    assert_eq!(ind.alpha, 2);

    let square = graph_power(&c5, 2)?;
    let ind2 = independence_number(&square)?;
    println!("alpha(C5 x C5) = {} on {} vertices", ind2.alpha, square.n());
    assert_eq!(ind2.alpha, 5);

    for b in shannon_capacity_lower_bound(&c5, 2)? {
        println!("  t = {}: alpha = {}, rate bound = {:.6}", b.power, b.alpha, b.bound);
    }

    // Noisy typewriter on five letters: each letter may turn into its successor.
    let rows: Vec<Vec<f64>> = (0..5)
        .map(|x| (0..5).map(|y| if y == x || y == (x + 1) % 5 { 0.5 } else { 0.0 }).collect())
        .collect();
    let typewriter = ClassicalChannel::new(rows)?;
    let g = confusability_graph(&typewriter, 0.0);
    println!("typewriter confusability graph has {} edges", g.edge_count());
    assert_eq!(independence_number(&g)?.alpha, 2);
    Ok(())
}

#[allow(dead_code)]
fn main() -> qcap::Result<()> {
    run_example()
}
