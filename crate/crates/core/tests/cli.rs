use std::path::{Path, PathBuf};
use std::process::Command;

use qcap::cli::{run, EXIT_INCONCLUSIVE, EXIT_INVALID, EXIT_OK, EXIT_USAGE};
use qcap::doc;
use serde_json::Value;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).to_string_lossy().into_owned()
}

fn qcap(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("qcap").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).expect("stdout is JSON")
}

#[test]
fn every_fixture_is_canonical() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path: PathBuf = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") {
            let text = std::fs::read_to_string(&path).unwrap();
            let d = doc::load(&path).unwrap();
            assert_eq!(d.to_canonical_string().unwrap(), text, "{}", path.display());
            seen += 1;
        }
    }
    assert!(seen >= 10);
}

#[test]
fn graph_alpha_of_c5() {
    let (code, out, _) = qcap(&["graph-alpha", "--in", &fixture("c5.json")]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["alpha"], 2);
    assert_eq!(v["witness"], serde_json::json!([0, 2]));
}

#[test]
fn min_entropy_of_trace_swap_pair() {
    let (code, out, _) =
        qcap(&["min-entropy", "--in", &fixture("trace_swap_d2.json"), "--oracle", "--samples", "20000", "--seed", "7"]);
    assert_eq!(code, EXIT_OK);
    let value = json(&out)["value"].as_f64().unwrap();
    assert!((value - 1.0).abs() < 2e-3, "{value}");
}

#[test]
fn arimoto_blahut_on_bsc() {
    let (code, out, _) = qcap(&["arimoto-blahut", "--in", &fixture("bsc011.json"), "--tol", "1e-6"]);
    assert_eq!(code, EXIT_OK);
    let value = json(&out)["value"].as_f64().unwrap();
    let h = -(0.11f64 * 0.11f64.log2() + 0.89 * 0.89f64.log2());
    assert!((value - (1.0 - h)).abs() < 1e-6);
}

#[test]
fn validation_failures_exit_2_with_path() {
    let (code, out, err) = qcap(&["validate-channel", "--in", &fixture("invalid/broken_povm.json")]);
    assert_eq!(code, EXIT_INVALID);
    assert!(out.is_empty());
    assert!(err.contains("payload.effects"), "{err}");

    let (code, out, err) = qcap(&["graph-alpha", "--in", &fixture("invalid/bad_edge.json")]);
    assert_eq!(code, EXIT_INVALID);
    assert!(out.is_empty());
    assert!(err.contains("payload.edges[1]"), "{err}");

    // Right file, wrong kind.
    let (code, _, err) = qcap(&["graph-alpha", "--in", &fixture("bsc011.json")]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("kind"), "{err}");
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(qcap(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(qcap(&[]).0, EXIT_USAGE);
    // verify demands an explicit seed.
    let (code, _, err) = qcap(&["verify", "--reduction", "sat24entropy", "--in", &fixture("sat24_satisfiable.json")]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("--seed"));
    assert_eq!(qcap(&["--help"]).0, EXIT_OK);
}

#[test]
fn budget_exceeded_exits_3() {
    let (code, _, err) = qcap(&["graph-alpha", "--in", &fixture("c5.json"), "--cap", "4"]);
    assert_eq!(code, EXIT_INCONCLUSIVE, "{err}");

    // The Z channel is not optimal at the uniform start, so two sweeps cannot reach 1e-15.
    let dir = tempfile::tempdir().unwrap();
    let z = dir.path().join("z.json");
    let zc = qcap::zero_error::ClassicalChannel::new(vec![vec![1.0, 0.0], vec![0.4, 0.6]]).unwrap();
    doc::save(&doc::Document::new(doc::Payload::ClassicalChannel(zc)).unwrap(), &z).unwrap();
    let z = z.to_string_lossy().into_owned();
    let (code, out, _) = qcap(&["arimoto-blahut", "--in", &z, "--tol", "1e-15", "--max-iters", "2"]);
    assert_eq!(code, EXIT_INCONCLUSIVE);
    assert_eq!(json(&out)["converged"], false);
    let (code, _, _) = qcap(&["arimoto-blahut", "--in", &z, "--tol", "1e-9"]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn reduce_emits_documents_that_reload() {
    let dir = tempfile::tempdir().unwrap();
    for (which, input) in [
        ("ham2clique", "localham_two_qubit.json"),
        ("qsat2clique", "qsat_two_qubit.json"),
        ("sat24entropy", "sat24_satisfiable.json"),
    ] {
        let out = dir.path().join(format!("{which}.json"));
        let out_s = out.to_string_lossy().into_owned();
        let (code, stdout, err) = qcap(&["reduce", which, "--in", &fixture(input), "--out", &out_s]);
        assert_eq!(code, EXIT_OK, "{which}: {err}");
        assert!(stdout.is_empty());
        let d = doc::load(&out).unwrap();
        assert_eq!(d.to_canonical_string().unwrap(), std::fs::read_to_string(&out).unwrap());
    }
    let clique = dir.path().join("ham2clique.json").to_string_lossy().into_owned();
    let (code, out, _) = qcap(&["clique-score", "--in", &clique]);
    assert_eq!(code, EXIT_OK);
    assert!(json(&out)["score"].as_f64().unwrap() >= 0.0);

    let channel = dir.path().join("sat24entropy.json").to_string_lossy().into_owned();
    let (code, out, _) = qcap(&["validate-channel", "--in", &channel]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out)["pass"], true);

    let (code, out, _) = qcap(&["reduce", "lift-holevo", "--in", &fixture("dephasing_qubit.json")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out)["pass"], true);
}

#[test]
fn clique_score_with_explicit_witness() {
    let dir = tempfile::tempdir().unwrap();
    let clique = dir.path().join("clique.json");
    let clique_s = clique.to_string_lossy().into_owned();
    assert_eq!(qcap(&["reduce", "ham2clique", "--in", &fixture("localham_two_qubit.json"), "--out", &clique_s]).0, 0);
    let d = doc::load(&clique).unwrap();
    let qcap::doc::Payload::Clique(inst) = d.payload else { panic!("not a clique document") };
    let dim = inst.channel.dim_in();
    let witness = dir.path().join("witness.json");
    let states: Vec<_> = (0..inst.k).map(|i| qcap::linalg::PureState::basis(dim, i)).collect();
    std::fs::write(&witness, serde_json::to_string(&states).unwrap()).unwrap();
    let (code, out, err) = qcap(&["clique-score", "--in", &clique_s, "--witness", &witness.to_string_lossy()]);
    assert_eq!(code, EXIT_OK, "{err}");
    let rhos: Vec<_> = states.iter().map(|s| s.projector()).collect();
    let expected = qcap::zero_error::clique_score(&inst.channel, &rhos).unwrap();
    assert_eq!(json(&out)["score"].as_f64().unwrap(), expected);

    std::fs::write(&witness, serde_json::to_string(&states[..1]).unwrap()).unwrap();
    assert_eq!(qcap(&["clique-score", "--in", &clique_s, "--witness", &witness.to_string_lossy()]).0, EXIT_INVALID);
}

#[test]
fn seeded_commands_are_deterministic() {
    let runs: Vec<Vec<&str>> = vec![
        vec!["min-entropy", "--in", "dephasing_qubit.json", "--seed", "5", "--restarts", "4"],
        vec!["holevo", "--in", "depolarizing_qubit.json", "--seed", "5", "--restarts", "2"],
        vec!["alpha-quantum", "--in", "dephasing_qubit.json", "--k", "2", "--seed", "9"],
    ];
    for args in runs {
        let resolved: Vec<String> =
            args.iter().map(|a| if a.ends_with(".json") { fixture(a) } else { a.to_string() }).collect();
        let refs: Vec<&str> = resolved.iter().map(String::as_str).collect();
        let (c1, o1, _) = qcap(&refs);
        let (c2, o2, _) = qcap(&refs);
        assert_eq!(c1, c2);
        assert_eq!(o1, o2, "{args:?}");
    }
}

#[test]
fn verify_and_replay_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json").to_string_lossy().into_owned();
    let args = ["verify", "--reduction", "qsat2clique", "--in", &fixture("qsat_two_qubit.json"), "--seed", "11"];
    let (code, first, _) = qcap(&args);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&first)["payload"]["verdict"], "yes-consistent");
    let (_, second, _) = qcap(&args);
    assert_eq!(first, second);
    std::fs::write(&report, &first).unwrap();
    let (code, replayed, _) = qcap(&["verify", "--replay", &report]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(replayed, first);
}

#[test]
fn binary_matches_library_entry_point() {
    let out = Command::new(env!("CARGO_BIN_EXE_qcap"))
        .args(["graph-alpha", "--in", &fixture("c5.json")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let (_, lib_out, _) = qcap(&["graph-alpha", "--in", &fixture("c5.json")]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), lib_out);

    let out = Command::new(env!("CARGO_BIN_EXE_qcap")).arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
    assert!(String::from_utf8(out.stderr).unwrap().contains("Usage"));
}
