use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use tempfile::TempDir;
use ultracone::covering::express_as_conjugates;
use ultracone::permgroup::Permutation;
use ultracone_cli::certificate::{certify_commutator, certify_intnorm, check, Certificate};
use ultracone_cli::{run_suite, RunConfig, Status, Suite};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ultracone"));
    cmd.env_remove("ULTRACONE_CONFIG");
    cmd
}

fn status(cmd: &mut Command) -> i32 {
    cmd.output().expect("binary runs").status.code().expect("exit code")
}

fn p(s: &str) -> Permutation {
    s.parse().unwrap()
}

fn small_cutting(dir: &Path) -> RunConfig {
    RunConfig {
        suites: vec![Suite::Cutting],
        max_degree: 5,
        permutation_pairs: 1000,
        out: dir.join("cutting.json"),
        ..RunConfig::default()
    }
}

#[test]
fn cutting_on_s5_is_fast_and_passes() {
    let dir = TempDir::new().unwrap();
    let config = small_cutting(dir.path());
    let start = Instant::now();
    let outcome = run_suite(&config).unwrap();
    assert!(start.elapsed() < Duration::from_secs(1), "{:?}", start.elapsed());
    assert_eq!(outcome.exit_code(), 0);
    let report = &outcome.report;
    assert_eq!(report.suites.len(), 1);
    let shift = report.check("cutting.exhaustive.cutting.shift").unwrap();
    assert_eq!(shift.constants["group"], "S5");
    assert_eq!(shift.constants["bound"], 2.0);
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(&config.out).unwrap()).unwrap();
    assert_eq!(json["seed"], 0);
    assert_eq!(json["status"], "pass");
}

#[test]
fn binary_runs_cutting_subcommand() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("r.json");
    let code = status(
        bin().args(["cutting", "--max-degree", "5", "--permutation-pairs", "500", "--seed", "3", "--out"]).arg(&out),
    );
    assert_eq!(code, 0);
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(json["seed"], 3);
    assert_eq!(json["config"]["suites"], serde_json::json!(["cutting"]));
}

#[test]
fn broken_projection_exits_one_with_witness() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("broken.json");
    let output = bin().args(["products", "--broken-projection", "--out"]).arg(&out).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("FAIL products.registered"), "{stdout}");
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(json["status"], "fail");
    let failed = json["summary"]["failed_ids"].as_array().unwrap();
    assert!(failed.iter().all(|id| id.as_str().unwrap().starts_with("products.registered")), "{failed:?}");
    assert!(failed.iter().any(|id| id == "products.registered.z2_z3.(iii)"));
    let check = json["suites"][0]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == "products.registered.z2_z3.(iii)")
        .unwrap();
    assert!(check["witness"].as_str().is_some_and(|w| !w.is_empty()));
    // the built-in negative control itself still counts as a pass
    let control = json["suites"][0]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == "products.negative_control.identity");
    assert_eq!(control.unwrap()["status"], "pass");
}

#[test]
fn invalid_configs_exit_two() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("x.json");
    assert_eq!(status(bin().args(["run", "--max-degree", "40", "--out"]).arg(&out)), 2);
    assert_eq!(status(bin().args(["run", "--suite", "bogus"])), 2);
    assert_eq!(status(bin().args(["run", "--tau", "0.5", "--out"]).arg(&out)), 2);
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "samples = \"many\"").unwrap();
    assert_eq!(status(bin().args(["run", "--config"]).arg(&bad)), 2);
    assert_eq!(status(bin().arg("run").env("ULTRACONE_CONFIG", &bad)), 2);
    assert!(!out.exists());
}

#[test]
fn config_file_overrides_flags() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("from-file.json");
    let file = dir.path().join("run.toml");
    std::fs::write(&file, format!("suites = [\"intnorm\"]\nseed = 77\ndepth = 5\nout = {:?}\n", out.to_str().unwrap()))
        .unwrap();
    let code = status(bin().args(["run", "--suite", "matnorm", "--seed", "1", "--config"]).arg(&file));
    assert_eq!(code, 0);
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(json["seed"], 77);
    assert_eq!(json["config"]["suites"], serde_json::json!(["intnorm"]));
    // the same file through the environment variable
    let code = status(bin().arg("run").env("ULTRACONE_CONFIG", &file));
    assert_eq!(code, 0);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let mut config = RunConfig {
        suites: vec![Suite::Covering, Suite::Products, Suite::Norms],
        max_degree: 6,
        certificates: 20,
        seed: 42,
        out: dir.path().join("a.json"),
        ..RunConfig::default()
    };
    run_suite(&config).unwrap();
    config.out = dir.path().join("b.json");
    config.jobs = 3;
    run_suite(&config).unwrap();
    let (a, b) = (std::fs::read(dir.path().join("a.json")).unwrap(), std::fs::read(&config.out).unwrap());
    assert_eq!(a, b);
}

#[test]
fn coneprobe_writes_series_csv() {
    let dir = TempDir::new().unwrap();
    let config = RunConfig {
        suites: vec![Suite::Coneprobe],
        samples: 25,
        out: dir.path().join("cone.json"),
        ..RunConfig::default()
    };
    let outcome = run_suite(&config).unwrap();
    assert_eq!(outcome.exit_code(), 0, "{:?}", outcome.report.summary);
    let csv = std::fs::read_to_string(dir.path().join("cone.involutions_tr.csv")).unwrap();
    assert!(csv.starts_with("index,element,norm,scale,ratio\n"));
    assert_eq!(csv.lines().count(), 2000);
}

fn write_cert(dir: &Path, name: &str, cert: &Certificate) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, cert.to_json()).unwrap();
    path
}

#[test]
fn certificates_verify_through_the_binary() {
    let dir = TempDir::new().unwrap();
    let commutator = certify_commutator(&p("(1 2 3 4 5)"), 5).unwrap();
    let path = write_cert(dir.path(), "comm.json", &commutator);
    assert_eq!(status(bin().arg("verify-certificate").arg(&path)), 0);

    let intnorm = certify_intnorm(&24.into(), 2, true).unwrap();
    let Certificate::Intnorm(r) = &intnorm else { unreachable!() };
    assert_eq!(r.certificate, vec![8.into(), 8.into(), 8.into()]);
    let path = write_cert(dir.path(), "int.json", &intnorm);
    let output = bin().arg("verify-certificate").arg(&path).output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    assert!(String::from_utf8(output.stdout).unwrap().contains("24 = 8 + 8 + 8"));

    let path = dir.path().join("garbage.json");
    std::fs::write(&path, "{\"kind\": \"conjugate-product\"}").unwrap();
    assert_eq!(status(bin().arg("verify-certificate").arg(&path)), 2);
    assert_eq!(status(bin().arg("verify-certificate").arg(dir.path().join("missing.json"))), 2);
}

#[test]
fn perturbed_conjugator_is_rejected() {
    let dir = TempDir::new().unwrap();
    let h = p("(1 2 3 4 5 6)").compose(&p("(6 7)"));
    let g = p("(1 2)(3 4)");
    let cert = express_as_conjugates(&h, &g).unwrap();
    let good = Certificate::ConjugateProduct(cert.clone());
    assert!(check(&good).is_ok());
    assert_eq!(status(bin().arg("verify-certificate").arg(write_cert(dir.path(), "good.json", &good))), 0);

    // change one conjugator until the product really moves
    let mut bad = cert;
    let original = bad.factors[0].conjugator.clone();
    let perturbed = [p("(1 5)"), p("(2 6)"), p("(3 7)"), p("(1 2 3)")]
        .into_iter()
        .map(|t| original.compose(&t))
        .find(|c| {
            let mut trial = bad.clone();
            trial.factors[0].conjugator = c.clone();
            trial.recompose() != trial.target
        })
        .unwrap();
    bad.factors[0].conjugator = perturbed;
    let path = write_cert(dir.path(), "bad.json", &Certificate::ConjugateProduct(bad));
    let output = bin().arg("verify-certificate").arg(&path).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8(output.stderr).unwrap().contains("does not recompose"));
}

#[test]
fn certify_subcommand_round_trips() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("c.json");
    let code =
        status(bin().args(["certify", "conjugates", "--target", "(1 2 3)", "--base", "(1 2)(3 4)", "--out"]).arg(&out));
    assert_eq!(code, 0);
    assert_eq!(status(bin().arg("verify-certificate").arg(&out)), 0);
    let code = status(bin().args(["certify", "intnorm", "--target", "-383", "--out"]).arg(&out));
    assert_eq!(code, 0);
    assert_eq!(status(bin().arg("verify-certificate").arg(&out)), 0);
}

#[test]
fn failing_report_lists_status_per_check() {
    let dir = TempDir::new().unwrap();
    let config = RunConfig {
        suites: vec![Suite::Products],
        broken_projection: true,
        out: dir.path().join("p.json"),
        ..RunConfig::default()
    };
    let outcome = run_suite(&config).unwrap();
    assert_eq!(outcome.exit_code(), 1);
    assert!(outcome.report.checks().any(|c| c.status == Status::Fail && c.witness.is_some()));
    assert!(config.out.exists());
}
