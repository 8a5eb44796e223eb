use proptest::prelude::*;
use qcap::channels::{self, build_pauli_generalized, build_swap_channel, build_trace_channel, orthomix, Channel};
use qcap::linalg::{self, random, schmidt_decompose, swap_expectation, von_neumann_entropy, ComplexMatrix, DensityMatrix, PureState};
use qcap::reductions::{self, assignment_state, sat24_brute_force};
use qcap::seed;
use qcap::zero_error::{
    self, graph_tensor_product, independence_number, independence_number_heuristic, Graph,
};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 48, ..ProptestConfig::default() }
}

fn random_channel(s: u64, dim_in: usize, dim_out: usize) -> Channel {
    let mut rng = seed::rng(s, 0);
    if s % 2 == 0 {
        channels::random::kraus_channel(dim_in, dim_out, dim_in.div_ceil(dim_out) + (s as usize / 2) % 3, &mut rng).into()
    } else {
        channels::random::meas_prep_channel(dim_in, dim_out, dim_in + (s as usize / 2) % 3, &mut rng).into()
    }
}

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in (u + 1)..n {
                    if bits[k] {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            Graph::new(n, edges).unwrap()
        })
    })
}

fn trace_distance_to(m: &ComplexMatrix, target: &ComplexMatrix) -> f64 {
    m.max_abs_diff(target)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn entropy_is_bounded_by_log_dim(s in any::<u64>(), d in 1usize..6) {
        let rho = random::density(d, &mut seed::rng(s, 0));
        let h = von_neumann_entropy(&rho).unwrap();
        prop_assert!(h >= 0.0 && h <= (d as f64).log2() + 1e-10);
    }

    #[test]
    fn channels_preserve_trace_and_positivity(s in any::<u64>(), dim_in in 1usize..5, dim_out in 1usize..5) {
        let ch = random_channel(s, dim_in, dim_out);
        let rho = random::density(dim_in, &mut seed::rng(s, 1));
        let out = ch.apply(&rho).unwrap();
        prop_assert!((out.matrix().trace().re - 1.0).abs() < 1e-9);
        prop_assert!(out.spectrum()[0] > -1e-9);
    }

    #[test]
    fn adjoint_is_dual(s in any::<u64>(), dim_in in 1usize..5, dim_out in 1usize..5) {
        let ch = random_channel(s, dim_in, dim_out);
        let mut rng = seed::rng(s, 2);
        let x = random::gaussian_matrix(dim_in, dim_in, &mut rng);
        let y = random::gaussian_matrix(dim_out, dim_out, &mut rng);
        let lhs = y.try_mul(&ch.apply_operator(&x).unwrap()).unwrap().trace();
        let rhs = ch.adjoint_apply(&y).unwrap().try_mul(&x).unwrap().trace();
        prop_assert!((lhs - rhs).norm() < 1e-9 * (1.0 + lhs.norm()));
    }

    #[test]
    fn kraus_conversion_preserves_action(s in any::<u64>(), d in 1usize..4) {
        let ch = random_channel(s, d, d);
        let rho = random::density(d, &mut seed::rng(s, 3));
        let a = ch.apply(&rho).unwrap();
        let b = Channel::from(ch.to_kraus()).apply(&rho).unwrap();
        prop_assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-10);
    }

    #[test]
    fn flagged_sum_entropy_identity(s in any::<u64>(), w in 0.05f64..0.95) {
        let a = random_channel(s, 2, 3);
        let b = random_channel(s.wrapping_add(1), 2, 2);
        let mix = orthomix(vec![(w, a.clone()), (1.0 - w, b.clone())]).unwrap();
        let rho = random::density(2, &mut seed::rng(s, 4));
        let lhs = von_neumann_entropy(&mix.apply(&rho).unwrap()).unwrap();
        let hp = -w * w.log2() - (1.0 - w) * (1.0 - w).log2();
        let rhs = hp
            + w * von_neumann_entropy(&a.apply(&rho).unwrap()).unwrap()
            + (1.0 - w) * von_neumann_entropy(&b.apply(&rho).unwrap()).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-9);
    }

    #[test]
    fn swap_test_outcome_matches_swap_expectation(s in any::<u64>(), d in 2usize..4) {
        let sigma = random::density(d * d, &mut seed::rng(s, 5));
        let out = Channel::from(build_swap_channel(d)).apply(&sigma).unwrap();
        let t = swap_expectation(sigma.matrix(), d).unwrap().re;
        prop_assert!((out.matrix()[(1, 1)].re - (1.0 - t) / 2.0).abs() < 1e-10);
    }

    #[test]
    fn pauli_twirl_is_maximally_mixing(s in any::<u64>(), n in 2usize..5) {
        let rho = random::density(n, &mut seed::rng(s, 6));
        let paulis = build_pauli_generalized(n);
        prop_assert_eq!(paulis.len(), n * n);
        let mut avg = ComplexMatrix::zeros(n, n);
        for x in &paulis {
            avg = &avg + &rho.conjugate(x).matrix().scale_re(1.0 / (n * n) as f64);
        }
        prop_assert!(trace_distance_to(&avg, DensityMatrix::maximally_mixed(n).matrix()) < 1e-9);
    }

    #[test]
    fn partial_trace_of_product_recovers_factor(s in any::<u64>(), d in 1usize..4) {
        let mut rng = seed::rng(s, 7);
        let a = random::density(d, &mut rng);
        let b = random::density(d + 1, &mut rng);
        let ab = a.tensor(&b).unwrap();
        let left = linalg::partial_trace(&ab, (d, d + 1), linalg::TraceOut::Second).unwrap();
        prop_assert!(left.matrix().max_abs_diff(a.matrix()) < 1e-10);
        let trace: Channel = build_trace_channel(d).into();
        if d >= 2 {
            let sq = a.tensor(&a).unwrap();
            prop_assert!(trace.apply(&sq).unwrap().matrix().max_abs_diff(a.matrix()) < 1e-10);
        }
    }

    #[test]
    fn schmidt_reassembles(s in any::<u64>(), d1 in 1usize..5, d2 in 1usize..5) {
        let psi = random::pure_state(d1 * d2, &mut seed::rng(s, 8));
        let sch = schmidt_decompose(&psi, (d1, d2)).unwrap();
        let norm: f64 = sch.coefficients.iter().map(|x| x * x).sum();
        prop_assert!((norm - 1.0).abs() < 1e-10);
        prop_assert!(sch.coefficients.windows(2).all(|w| w[0] >= w[1]));
        let back = sch.reassemble();
        let err = back.iter().zip(psi.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-9);
    }

    #[test]
    fn exact_alpha_dominates_heuristic(g in graph_strategy(14)) {
        let exact = independence_number(&g).unwrap();
        let greedy = independence_number_heuristic(&g);
        prop_assert!(g.is_independent(&exact.witness));
        prop_assert_eq!(exact.witness.len(), exact.alpha);
        prop_assert!(g.is_independent(&greedy.witness));
        prop_assert!(greedy.alpha <= exact.alpha);
    }

    #[test]
    fn alpha_is_supermultiplicative(g in graph_strategy(5), h in graph_strategy(5)) {
        let prod = graph_tensor_product(&g, &h).unwrap();
        let a = independence_number(&g).unwrap().alpha * independence_number(&h).unwrap().alpha;
        prop_assert!(independence_number(&prod).unwrap().alpha >= a);
    }

    #[test]
    fn graph_documents_round_trip(g in graph_strategy(10)) {
        let d = qcap::doc::Document::new(qcap::doc::Payload::Graph(g.clone())).unwrap();
        let text = d.to_canonical_string().unwrap();
        let back = qcap::doc::Document::parse(&text).unwrap();
        prop_assert_eq!(&back.payload, &qcap::doc::Payload::Graph(g));
        prop_assert_eq!(back.to_canonical_string().unwrap(), text);
    }

    #[test]
    fn clique_score_is_sum_of_pair_overlaps(s in any::<u64>(), k in 2usize..4) {
        let ch = random_channel(s, 2, 2);
        let mut rng = seed::rng(s, 9);
        let rhos: Vec<DensityMatrix> = (0..k).map(|_| random::pure_state(2, &mut rng).projector()).collect();
        let score = zero_error::clique_score(&ch, &rhos).unwrap();
        let outs: Vec<_> = rhos.iter().map(|r| ch.apply(r).unwrap()).collect();
        let mut pairs = 0.0;
        for i in 0..k {
            for j in (i + 1)..k {
                pairs += outs[i].matrix().try_mul(outs[j].matrix()).unwrap().trace().re;
            }
        }
        prop_assert!((score - pairs).abs() < 1e-10);
    }

    #[test]
    fn satisfying_assignments_have_zero_penalty(s in any::<u64>(), m in 1usize..5) {
        let inst = reductions::random::satisfiable_sat24(4, m, &mut seed::rng(s, 10));
        let sol = sat24_brute_force(&inst);
        prop_assert!(sol.satisfiable);
        let x = sol.assignment;
        let psi = assignment_state(&x);
        let pair = psi.tensor(&psi).unwrap();
        let energy = inst.penalty().unwrap().expectation(&pair).re;
        prop_assert!(energy.abs() < 1e-12);
    }
}

#[test]
fn pure_state_entropy_is_zero() {
    let psi = PureState::normalized(vec![linalg::c(1.0, 0.0), linalg::c(0.0, 1.0)]).unwrap();
    assert!(von_neumann_entropy(&psi.projector()).unwrap().abs() < 1e-12);
}
