use super::*;
use crate::channels::{self, CqChannel};

fn h2(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

fn bsc(p: f64) -> ClassicalChannel {
    ClassicalChannel::new(vec![vec![1.0 - p, p], vec![p, 1.0 - p]]).unwrap()
}

fn mutual_information(ch: &ClassicalChannel, r: &[f64]) -> f64 {
    let mut total = 0.0;
    for y in 0..ch.outputs() {
        let q: f64 = (0..ch.inputs()).map(|x| r[x] * ch.prob(x, y)).sum();
        for x in 0..ch.inputs() {
            let p = ch.prob(x, y);
            if r[x] > 0.0 && p > 0.0 {
                total += r[x] * p * (p / q).log2();
            }
        }
    }
    total
}

#[test]
fn arimoto_blahut_closed_forms() {
    for p in [0.0, 0.11, 0.25, 0.5] {
        let res = arimoto_blahut(&bsc(p), 1e-10, 10_000).unwrap();
        assert!((res.value - (1.0 - h2(p))).abs() < 1e-6, "p = {p}: {}", res.value);
        assert!(res.converged);
    }
    let useless = ClassicalChannel::new(vec![vec![0.2, 0.8]; 3]).unwrap();
    assert!(arimoto_blahut(&useless, 1e-12, 100).unwrap().value.abs() < 1e-9);
}

#[test]
fn arimoto_blahut_matches_grid_search() {
    let mut rng = seed::rng(11, 0);
    for trial in 0..6 {
        let (nx, ny) = if trial % 2 == 0 { (2, 2) } else { (3, 3) };
        let rows: Vec<Vec<f64>> = (0..nx).map(|_| linalg::random::simplex(ny, &mut rng)).collect();
        let ch = ClassicalChannel::new(rows).unwrap();
        let steps = 40;
        let mut best: f64 = 0.0;
        for a in 0..=steps {
            if nx == 2 {
                let t = a as f64 / steps as f64;
                best = best.max(mutual_information(&ch, &[t, 1.0 - t]));
            } else {
                for b in 0..=steps - a {
                    let (t, u) = (a as f64 / steps as f64, b as f64 / steps as f64);
                    best = best.max(mutual_information(&ch, &[t, u, 1.0 - t - u]));
                }
            }
        }
        let ab = arimoto_blahut(&ch, 1e-9, 100_000).unwrap().value;
        assert!(ab >= best - 1e-12 && ab - best < 1e-3, "ab {ab} grid {best}");
    }
}

fn central_difference(f: impl Fn(&[f64]) -> f64, x: &[f64]) -> Vec<f64> {
    let h = 1e-5;
    (0..x.len())
        .map(|i| {
            let mut a = x.to_vec();
            let mut b = x.to_vec();
            a[i] += h;
            b[i] -= h;
            (f(&a) - f(&b)) / (2.0 * h)
        })
        .collect()
}

fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let scale: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt().max(1e-8);
    diff / scale
}

#[test]
fn min_entropy_gradient_matches_finite_differences() {
    let mut rng = seed::rng(5, 0);
    let ch: Channel = channels::random::kraus_channel(3, 3, 2, &mut rng).into();
    for _ in 0..10 {
        let theta: Vec<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
        let (_, g) = min_entropy_objective(&ch, &theta).unwrap();
        let fd = central_difference(|t| min_entropy_objective(&ch, t).unwrap().0, &theta);
        assert!(rel_err(&g, &fd) < 1e-4, "{g:?} vs {fd:?}");
    }
}

#[test]
fn holevo_gradient_matches_finite_differences() {
    let mut rng = seed::rng(6, 0);
    let ch: Channel = channels::random::kraus_channel(2, 3, 2, &mut rng).into();
    let m = 3;
    for _ in 0..10 {
        let params: Vec<f64> = (0..m + 4 * m).map(|_| rng.random_range(-1.0..1.0)).collect();
        let (_, g) = holevo_objective(&ch, &params, m).unwrap();
        let fd = central_difference(|t| holevo_objective(&ch, t, m).unwrap().0, &params);
        assert!(rel_err(&g, &fd) < 1e-4, "{g:?} vs {fd:?}");
    }
}

#[test]
fn min_entropy_examples() {
    let pure = PureState::basis(2, 1).projector();
    let constant: Channel = MeasPrepChannel::constant(3, pure.clone()).into();
    assert!(min_entropy_ascent(&constant, 4, 0, 1e-10).unwrap().value.abs() < 1e-9);

    let cq: Channel = CqChannel::new(vec![pure, DensityMatrix::maximally_mixed(2)]).unwrap().into();
    let res = min_entropy_ascent(&cq, 4, 0, 1e-10).unwrap();
    assert_eq!(res.value, 0.0);
    assert_eq!(res.payload, Payload::State(PureState::basis(2, 0)));

    let trace: Channel = channels::build_trace_channel(2).into();
    assert!(min_entropy_ascent(&trace, 16, 1, 1e-10).unwrap().value < 1e-6);
    assert!(min_entropy_oracle(&Channel::identity(3), 500, 1).unwrap().value < 1e-6);
}

#[test]
fn ascent_is_deterministic_and_bounded() {
    let mut rng = seed::rng(9, 0);
    let ch: Channel = channels::random::kraus_channel(3, 4, 3, &mut rng).into();
    let a = min_entropy_ascent(&ch, 8, 42, 1e-9).unwrap();
    let b = min_entropy_ascent(&ch, 8, 42, 1e-9).unwrap();
    assert_eq!(a, b);
    let oracle = min_entropy_oracle(&ch, 2000, 42).unwrap();
    assert!(a.value >= 0.0 && a.value <= 2.0);
    assert!((a.value - oracle.value).abs() < 1e-3, "{} vs {}", a.value, oracle.value);
}

#[test]
fn holevo_examples() {
    let constant: Channel = MeasPrepChannel::constant(2, DensityMatrix::maximally_mixed(2)).into();
    assert!(holevo_ascent(&constant, 0, 2, 0, 1e-12).unwrap().value.abs() < 1e-9);
    assert!(holevo_oracle(&constant, 50, 0).unwrap().value.abs() < 1e-6);

    let id = Channel::identity(2);
    assert!((holevo_ascent(&id, 0, 4, 1, 1e-12).unwrap().value - 1.0).abs() < 1e-4);
    assert!(holevo_oracle(&id, 500, 1).unwrap().value >= 1.0 - 1e-3);

    let qc: Channel = channels::QcChannel::basis_measurement(2).into();
    assert!((holevo_ascent(&qc, 0, 4, 1, 1e-12).unwrap().value - 1.0).abs() < 1e-4);

    let cq: Channel =
        CqChannel::new(vec![PureState::basis(2, 0).projector(), PureState::basis(2, 1).projector()]).unwrap().into();
    assert!((holevo_oracle(&cq, 500, 2).unwrap().value - 1.0).abs() < 1e-3);
}

#[test]
fn holevo_ascent_is_monotone() {
    let mut rng = seed::rng(12, 0);
    let ch: Channel = channels::random::kraus_channel(2, 2, 2, &mut rng).into();
    let (res, history) = holevo_ascent_traced(&ch, 0, 3, 7, 1e-12).unwrap();
    assert!(history.windows(2).all(|w| w[1] >= w[0]));
    assert!(res.value <= 1.0 + 1e-9);
    let oracle = holevo_oracle(&ch, 300, 7).unwrap();
    assert!((res.value - oracle.value).abs() < 1e-3, "{} vs {}", res.value, oracle.value);
}

#[test]
fn lift_examples() {
    let id = Channel::identity(2);
    let lift = covariant_lift(&id).unwrap();
    assert!(lift.validate_cptp().unwrap().pass);
    let paulis = build_pauli_generalized(2);
    let mut rng = seed::rng(1, 0);
    let rho = linalg::random::density(2, &mut rng);
    let mut avg = ComplexMatrix::zeros(2, 2);
    for (i, x) in paulis.iter().enumerate() {
        let flag = PureState::basis(4, i).projector();
        let out = lift.apply(&rho.tensor(&flag).unwrap()).unwrap();
        let expected = rho.conjugate(x);
        assert!(out.matrix().max_abs_diff(expected.matrix()) < 1e-10);
        avg = &avg + &out.matrix().scale_re(0.25);
    }
    assert!(avg.max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-10);

    let r = lift_capacity_identity_check(&id, 500, 0).unwrap();
    assert!((r.chi_estimate - 1.0).abs() < 1e-6 && r.residual < 1e-6);
    let dep: Channel = MeasPrepChannel::depolarizing(2).into();
    let r = lift_capacity_identity_check(&dep, 500, 0).unwrap();
    assert!(r.chi_estimate.abs() < 1e-6 && r.residual < 1e-6);
    let deph: Channel = channels::dephasing(2).into();
    let r = lift_capacity_identity_check(&deph, 2000, 0).unwrap();
    assert!((r.chi_estimate - 1.0).abs() < 1e-3 && r.residual < 1e-3);
}

#[test]
fn orthomix_entropy_lower_bound() {
    // min H(sum-mix) >= sum p_i min H(Phi_i) + H(p).
    let mut rng = seed::rng(21, 0);
    for _ in 0..3 {
        let a: Channel = channels::random::kraus_channel(2, 2, 2, &mut rng).into();
        let b: Channel = channels::random::kraus_channel(2, 3, 2, &mut rng).into();
        let p = rng.random_range(0.2..0.8);
        let mixed = channels::orthomix(vec![(p, a.clone()), (1.0 - p, b.clone())]).unwrap();
        let est = |ch: &Channel| min_entropy_ascent(ch, 16, 3, 1e-10).unwrap().value;
        let bound = p * est(&a) + (1.0 - p) * est(&b) + h2(p);
        assert!(est(&mixed) >= bound - 3e-3);
    }
}
