#[allow(dead_code)]
mod graph_capacity_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/graph_capacity.rs"));
}

#[test]
fn graph_capacity_example_runs() {
    graph_capacity_example::run_example().expect("graph_capacity example should run");
}

#[allow(dead_code)]
mod channel_zoo_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/channel_zoo.rs"));
}

#[test]
fn channel_zoo_example_runs() {
    channel_zoo_example::run_example().expect("channel_zoo example should run");
}

#[allow(dead_code)]
mod min_entropy_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/min_entropy.rs"));
}

#[test]
fn min_entropy_example_runs() {
    min_entropy_example::run_example().expect("min_entropy example should run");
}

#[allow(dead_code)]
mod holevo_lift_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/holevo_lift.rs"));
}

#[test]
fn holevo_lift_example_runs() {
    holevo_lift_example::run_example().expect("holevo_lift example should run");
}

#[allow(dead_code)]
mod classical_capacity_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/classical_capacity.rs"));
}

#[test]
fn classical_capacity_example_runs() {
    classical_capacity_example::run_example().expect("classical_capacity example should run");
}

#[allow(dead_code)]
mod quantum_clique_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/quantum_clique.rs"));
}

#[test]
fn quantum_clique_example_runs() {
    quantum_clique_example::run_example().expect("quantum_clique example should run");
}

#[allow(dead_code)]
mod sat24_reduction_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/sat24_reduction.rs"));
}

#[test]
fn sat24_reduction_example_runs() {
    sat24_reduction_example::run_example().expect("sat24_reduction example should run");
}

#[allow(dead_code)]
mod fixture_documents_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/fixture_documents.rs"));
}

#[test]
fn fixture_documents_example_runs() {
    fixture_documents_example::run_example().expect("fixture_documents example should run");
}
