// Quantum independence number search and the local-Hamiltonian clique
// construction evaluated on its ground-state witness.

use qcap::channels::{dephasing, Channel};
use qcap::reductions::{self, flagged_witness_pair, ham_to_clique, localham_ground_state};
use qcap::seed;
use qcap::zero_error::{alpha_certificate_check, alpha_search, clique_score};

pub fn run_example() -> qcap::Result<()> {
    let deph: Channel = dephasing(3).into();
    let cert = alpha_search(&deph, 3, 4, 0)?;
    let check = alpha_certificate_check(&deph.to_kraus(), &cert, 1e-9)?;
    println!("dephasing d=3, k=3: residual {:.2e}, pass {}", cert.residual, check.pass);
    assert!(check.pass);

    let mut rng = seed::rng(11, 0);
    let inst = reductions::random::local_ham(2, 2, 2, &mut rng);
    let clique = ham_to_clique(&inst)?;
    let (lambda, ground) = localham_ground_state(&inst)?;
    let pair = flagged_witness_pair(&ground)?;
    let rhos: Vec<_> = pair.iter().map(|p| p.projector()).collect();
    let score = clique_score(&clique.channel, &rhos)?;
    let s = inst.scale() as f64;
    println!("ground energy {lambda:.6}: score {score:.12}, (lambda/s)^2 = {:.12}", (lambda / s).powi(2));
    assert!((score - (lambda / s).powi(2)).abs() < 1e-9);
    Ok(())
}

#[allow(dead_code)]
fn main() -> qcap::Result<()> {
    run_example()
}
