use super::*;
use crate::zero_error::clique_score;

fn proj(bit: usize) -> ComplexMatrix {
    PureState::basis(2, bit).projector().into_matrix()
}

fn term(support: Vec<usize>, matrix: ComplexMatrix) -> LocalTerm {
    LocalTerm { support, matrix }
}

#[test]
fn local_ham_oracle_examples() {
    let one = LocalHamInstance::new(1, vec![term(vec![0], proj(1))], 0.1, 0.9).unwrap();
    assert!(localham_min_eig(&one).unwrap().abs() < 1e-12);
    let full = LocalHamInstance::new(1, vec![term(vec![0], proj(1)), term(vec![0], proj(0))], 0.1, 0.9).unwrap();
    assert!((localham_min_eig(&full).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn embedding_matches_explicit_tensor_products() {
    let mut rng = seed::rng(4, 0);
    let t = random::local_term(3, 2, &mut rng);
    let h = embed_sum(std::slice::from_ref(&t), 3);
    let id = ComplexMatrix::identity(2);
    // Build by tensoring and conjugating with qubit swaps.
    let expected = match t.support.as_slice() {
        [0, 1] => linalg::tensor(&t.matrix, &id).unwrap(),
        [1, 2] => linalg::tensor(&id, &t.matrix).unwrap(),
        [0, 2] => {
            let raw = linalg::tensor(&t.matrix, &id).unwrap();
            // Swap qubits 1 and 2.
            let p = ComplexMatrix::from_fn(8, 8, |r, col| {
                let s = (col & 4) | ((col & 1) << 1) | ((col & 2) >> 1);
                if r == s { c(1.0, 0.0) } else { c(0.0, 0.0) }
            });
            &(&p * &raw) * &p
        }
        other => panic!("unexpected support {other:?}"),
    };
    assert!(h.max_abs_diff(&expected) < 1e-12);

    // Reversed support order reverses the local qubit order.
    let sx = crate::channels::pauli_matrices()[1].clone();
    let a = term(vec![0, 1], linalg::tensor(&proj(1), &sx).unwrap());
    let b = term(vec![1, 0], linalg::tensor(&sx, &proj(1)).unwrap());
    assert!(embed_sum(&[a], 2).max_abs_diff(&embed_sum(&[b], 2)) < 1e-15);
}

#[test]
fn random_local_ham_matches_dense_eigensolver() {
    let mut rng = seed::rng(8, 0);
    let inst = random::local_ham(3, 4, 2, &mut rng);
    let h = inst.hamiltonian();
    let dense = h.as_na().clone().symmetric_eigen();
    let min = dense.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    assert!((localham_min_eig(&inst).unwrap() - min).abs() < 1e-9);
}

#[test]
fn qsat_examples() {
    let single = QSatInstance::new(1, vec![term(vec![0], proj(1))], 1.0).unwrap();
    assert!(qsat_satisfiable(&single).unwrap().satisfiable);
    let pair = QSatInstance::new(1, vec![term(vec![0], proj(0)), term(vec![0], proj(1))], 1.0).unwrap();
    let sol = qsat_satisfiable(&pair).unwrap();
    assert!(!sol.satisfiable && (sol.energy - 1.0).abs() < 1e-12);
    let p11 = linalg::tensor(&proj(1), &proj(1)).unwrap();
    let chain = QSatInstance::new(3, vec![term(vec![0, 1], p11.clone()), term(vec![1, 2], p11)], 1.0).unwrap();
    assert!(qsat_satisfiable(&chain).unwrap().satisfiable);
    assert!(QSatInstance::new(1, vec![term(vec![0], ComplexMatrix::identity(2).scale_re(0.5))], 1.0).is_err());
}

#[test]
fn sat24_oracle_examples() {
    let one = Sat24Instance::new(4, vec![Clause { vars: [0, 1, 2, 3], signs: [1, 1, 1, 1] }]).unwrap();
    assert!(sat24_brute_force(&one).satisfiable);
    assert!(sat24_brute_force(&Sat24Instance::new(5, vec![]).unwrap()).satisfiable);
    // x0 + x1 + x2 + x3 = 0 and x0 + x1 - x2 - x3 = 0 force x0 = -x1 and x2 = -x3;
    // x0 - x1 + x2 + x3 = 0 then forces x0 = x1.
    let contradiction = Sat24Instance::new(
        4,
        vec![
            Clause { vars: [0, 1, 2, 3], signs: [1, 1, 1, 1] },
            Clause { vars: [0, 1, 2, 3], signs: [1, 1, -1, -1] },
            Clause { vars: [0, 1, 2, 3], signs: [1, -1, 1, 1] },
        ],
    )
    .unwrap();
    let sol = sat24_brute_force(&contradiction);
    assert!(!sol.satisfiable);
    assert!(sol.best_violation >= 1.0 / 4.0 - 1e-15);
    // The violation equals sum_k <A_k|psi_x>^2 at the reported assignment.
    let psi = assignment_state(&sol.assignment);
    let direct: f64 = (0..3).map(|k| contradiction.clause_vector(k).inner(&psi).norm_sqr()).sum();
    assert!((direct - sol.best_violation).abs() < 1e-12);
    assert!(Sat24Instance::new(4, vec![Clause { vars: [0, 1, 1, 3], signs: [1, 1, 1, 1] }]).is_err());
}

#[test]
fn ham_to_clique_scores() {
    let h1 = LocalHamInstance::new(1, vec![term(vec![0], proj(1))], 0.1, 0.9).unwrap();
    let clique = ham_to_clique(&h1).unwrap();
    assert_eq!(clique.k, 2);
    assert!((clique.a - 0.01).abs() < 1e-15 && (clique.b - 0.81).abs() < 1e-15);
    let score = |psi: &PureState| {
        let [x, y] = flagged_witness_pair(psi).unwrap();
        clique_score(&clique.channel, &[x.projector(), y.projector()]).unwrap()
    };
    assert!(score(&PureState::basis(2, 0)).abs() < 1e-15);
    assert!((score(&PureState::basis(2, 1)) - 1.0).abs() < 1e-12);
    let empty = LocalHamInstance::new(2, vec![], 0.0, 1.0).unwrap();
    let ce = ham_to_clique(&empty).unwrap();
    let mut rng = seed::rng(2, 0);
    let psi = linalg::random::pure_state(4, &mut rng);
    let [x, y] = flagged_witness_pair(&psi).unwrap();
    assert!(clique_score(&ce.channel, &[x.projector(), y.projector()]).unwrap().abs() < 1e-15);
    assert!(ce.channel.validate_cptp().unwrap().pass);
}

#[test]
fn qsat_to_clique_yes_witness_scores_zero() {
    let p11 = linalg::tensor(&proj(1), &proj(1)).unwrap();
    let inst = QSatInstance::new(2, vec![term(vec![0, 1], p11)], 0.5).unwrap();
    let clique = qsat_to_clique(&inst).unwrap();
    assert_eq!((clique.a, clique.b), (0.0, 0.5));
    let [x, y] = flagged_witness_pair(&PureState::basis(4, 0)).unwrap();
    assert!(clique_score(&clique.channel, &[x.projector(), y.projector()]).unwrap().abs() < 1e-15);
    let cert = crate::zero_error::alpha_search(&clique.channel, 2, 8, 3).unwrap();
    assert!(cert.residual < 1e-6);
}

#[test]
fn sat24_channel_equality_case() {
    let mut rng = seed::rng(10, 0);
    let inst = random::satisfiable_sat24(4, 3, &mut rng);
    let ch = sat24_to_minentropy(&inst).unwrap();
    assert_eq!((ch.dim_in(), ch.dim_out()), (16, 38));
    assert!(ch.validate_cptp().unwrap().pass);
    let sol = sat24_brute_force(&inst);
    assert!(sol.satisfiable);
    let phi = assignment_state(&sol.assignment);
    let h = capacity::output_entropy(&ch, &phi.tensor(&phi).unwrap()).unwrap();
    assert!((h - 2.0).abs() < 1e-9);

    let free = sat24_to_minentropy(&Sat24Instance::new(2, vec![]).unwrap()).unwrap();
    for x in [[1i8, 1], [1, -1], [-1, 1]] {
        let p = assignment_state(&x);
        assert!((capacity::output_entropy(&free, &p.tensor(&p).unwrap()).unwrap() - 2.0).abs() < 1e-9);
    }
}

#[test]
fn eb_variant_target() {
    let inst = Sat24Instance::new(2, vec![]).unwrap();
    let eps = 1.0 / 16.0;
    let ch = sat24_to_minentropy_eb(&inst, eps).unwrap();
    assert!(ch.validate_cptp().unwrap().pass);
    let p = assignment_state(&[1, -1]);
    let h = capacity::output_entropy(&ch, &p.tensor(&p).unwrap()).unwrap();
    assert!((h - sat24_eb_target(2, eps)).abs() < 1e-9);
}

#[test]
fn verify_gap_examples() {
    let budgets = Budgets { samples: 2000, restarts: 4 };
    let h = LocalHamInstance::new(1, vec![term(vec![0], ComplexMatrix::identity(2))], 0.1, 0.9).unwrap();
    let req = VerifyRequest { reduction: ReductionKind::Ham2clique, instance: SourceInstance::Localham(h), seed: 1, budgets };
    let rep = verify_gap(&req).unwrap();
    assert_eq!(rep.verdict, Verdict::NoConsistent, "{:?}", rep.notes);
    assert!(rep.target.search_value >= rep.thresholds.no_at_least - 1e-6);

    let empty = LocalHamInstance::new(1, vec![], 0.0, 1.0).unwrap();
    let req = VerifyRequest { reduction: ReductionKind::Ham2clique, instance: SourceInstance::Localham(empty), seed: 1, budgets };
    assert_eq!(verify_gap(&req).unwrap().verdict, Verdict::YesConsistent);

    let gap = LocalHamInstance::new(1, vec![term(vec![0], ComplexMatrix::identity(2).scale_re(0.5))], 0.1, 0.9).unwrap();
    let req = VerifyRequest { reduction: ReductionKind::Ham2clique, instance: SourceInstance::Localham(gap), seed: 1, budgets };
    assert_eq!(verify_gap(&req).unwrap().verdict, Verdict::Inconclusive);

    let bad = VerifyRequest { reduction: ReductionKind::Sat24entropy, ..req.clone() };
    assert!(verify_gap(&bad).is_err());
}

#[test]
fn verify_sat24_and_replay() {
    let mut rng = seed::rng(13, 0);
    let inst = random::satisfiable_sat24(4, 2, &mut rng);
    let req = VerifyRequest {
        reduction: ReductionKind::Sat24entropy,
        instance: SourceInstance::Sat24(inst),
        seed: 5,
        budgets: Budgets { samples: 2000, restarts: 4 },
    };
    let rep = verify_gap(&req).unwrap();
    assert_eq!(rep.verdict, Verdict::YesConsistent, "{:?}", rep.notes);
    let again = replay(&rep).unwrap();
    assert_eq!(doc::canonical_json(&rep).unwrap(), doc::canonical_json(&again).unwrap());
    assert_eq!(rep.instance_digest.len(), 64);
}
