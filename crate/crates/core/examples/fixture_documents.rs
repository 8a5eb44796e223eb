// Writes one JSON document per input kind, then reloads each and checks it
// is already in canonical form.
//
// `cargo run --example fixture_documents -- <dir>` regenerates the fixtures
// shipped under `fixtures/`.

use std::path::{Path, PathBuf};

use qcap::channels::{self, build_swap_channel, build_trace_channel, dephasing, depolarizing_qubit, orthomix, Channel};
use qcap::doc::{self, Document, Payload};
use qcap::linalg::{c, ComplexMatrix};
use qcap::reductions::{self, ham_to_clique, Clause, LocalHamInstance, LocalTerm, QSatInstance, Sat24Instance};
use qcap::seed;
use qcap::zero_error::{ClassicalChannel, Graph};

fn projector_11() -> ComplexMatrix {
    ComplexMatrix::diagonal(&[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])
}

pub fn write_fixtures(dir: &Path) -> qcap::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let p = 0.11;
    let trace_swap = orthomix(vec![(0.5, build_trace_channel(2).into()), (0.5, build_swap_channel(2).into())])?;

    // Coupling favouring aligned qubits plus a transverse field; ground energy is positive.
    let coupling = LocalTerm {
        support: vec![0, 1],
        matrix: ComplexMatrix::diagonal(&[c(0.2, 0.0), c(0.8, 0.0), c(0.8, 0.0), c(0.2, 0.0)]),
    };
    let field = LocalTerm { support: vec![1], matrix: ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]])? };
    let localham = LocalHamInstance::new(2, vec![coupling, field], 0.45, 0.9)?;

    // Frustrated 2-qubit instance: |11> forbidden on both orderings, satisfiable by |00>.
    let qsat = QSatInstance::new(
        2,
        vec![LocalTerm { support: vec![0, 1], matrix: projector_11() }, LocalTerm { support: vec![1, 0], matrix: projector_11() }],
        0.25,
    )?;

    let sat = Sat24Instance::new(
        4,
        vec![Clause { vars: [0, 1, 2, 3], signs: [1, 1, -1, -1] }, Clause { vars: [0, 2, 1, 3], signs: [1, -1, 1, -1] }],
    )?;
    let mut rng = seed::rng(2024, 0);
    let unsat = reductions::random::unsatisfiable_sat24(4, 3, &mut rng);

    let docs: Vec<(&str, Payload)> = vec![
        ("c5.json", Payload::Graph(Graph::cycle(5))),
        ("bsc011.json", Payload::ClassicalChannel(ClassicalChannel::new(vec![vec![1.0 - p, p], vec![p, 1.0 - p]])?)),
        ("trace_swap_d2.json", Payload::Channel(trace_swap)),
        ("identity_qubit.json", Payload::Channel(Channel::identity(2))),
        ("dephasing_qubit.json", Payload::Channel(dephasing(2).into())),
        ("depolarizing_qubit.json", Payload::Channel(depolarizing_qubit(0.5)?.into())),
        ("random_kraus_qutrit.json", Payload::Channel(channels::random::kraus_channel(3, 3, 2, &mut rng).into())),
        ("clique_localham.json", Payload::Clique(ham_to_clique(&localham)?)),
        ("localham_two_qubit.json", Payload::Localham(localham)),
        ("qsat_two_qubit.json", Payload::Qsat(qsat)),
        ("sat24_satisfiable.json", Payload::Sat24(sat)),
        ("sat24_unsatisfiable.json", Payload::Sat24(unsat)),
    ];
    let mut written = Vec::new();
    for (name, payload) in docs {
        let path = dir.join(name);
        let d = Document::new(payload)?;
        doc::save(&d, &path)?;
        let text = std::fs::read_to_string(&path)?;
        assert_eq!(doc::load(&path)?.to_canonical_string()?, text, "{name} is not canonical");
        written.push(path);
    }
    Ok(written)
}

pub fn run_example() -> qcap::Result<()> {
    let dir = std::env::temp_dir().join(format!("qcap-fixtures-{}", std::process::id()));
    for path in write_fixtures(&dir)? {
        println!("wrote {}", path.display());
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> qcap::Result<()> {
    match std::env::args().nth(1) {
        Some(dir) => write_fixtures(Path::new(&dir)).map(|_| ()),
        None => run_example(),
    }
}
