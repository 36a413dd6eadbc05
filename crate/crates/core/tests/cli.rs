mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use flatnorm::chainlp::{flat_norm_lp, LpConfig};
use flatnorm::complex::format::{read_chain, write_chain};
use flatnorm::complex::{boundary_of_set, BinarySet, Cell, Chain, CubicalComplex};
use flatnorm::netpbm::{Bitmap, Pixmap};

fn flatnorm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flatnorm"))
        .args(args)
        .env_remove("FLATNORM_SEED")
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn report_value(dir: &Path, key: &str) -> String {
    let text = fs::read_to_string(dir.join("report.txt")).unwrap();
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")).map(str::to_string))
        .unwrap_or_else(|| panic!("no {key} in\n{text}"))
}

fn write_set(path: &Path, set: &BinarySet) {
    fs::write(path, Bitmap::from_set(set).unwrap().write()).unwrap();
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn denoise_disk_and_empty() {
    let dir = tempfile::tempdir().unwrap();
    let cx = CubicalComplex::grid2(32, 32).unwrap();
    let disk = common::disk(&cx, (16.0, 16.0), 10.0);
    let img = dir.path().join("disk.pbm");
    write_set(&img, &disk);
    let out = dir.path().join("out");
    let o = flatnorm(&["denoise", s(&img), "--lambda", "0.5", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let sigma = Bitmap::parse(&fs::read_to_string(out.join("sigma.pbm")).unwrap()).unwrap();
    assert_eq!(sigma.to_set().unwrap(), disk);
    let per = boundary_of_set(&disk).unit_mass();
    assert_eq!(report_value(&out, "value").parse::<f64>().unwrap(), per);
    let ppm = Pixmap::parse(&fs::read_to_string(out.join("decomposition.ppm")).unwrap()).unwrap();
    assert_eq!((ppm.width, ppm.height), (129, 129));

    let empty = dir.path().join("empty.pbm");
    write_set(&empty, &BinarySet::empty(&cx));
    let out = dir.path().join("out_empty");
    assert_eq!(code(&flatnorm(&["denoise", s(&empty), "--lambda", "1", "--out", s(&out)])), 0);
    assert_eq!(report_value(&out, "value"), "0");
    assert_eq!(report_value(&out, "sigma_cells"), "0");
}

#[test]
fn denoise_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let img = dir.path().join("t.pbm");
    fs::write(&img, "P1\n4 4\n0 1 0 1\n1 1\n").unwrap();
    let out = dir.path().join("out");
    let o = flatnorm(&["denoise", s(&img), "--lambda", "1", "--out", s(&out)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("truncated"));

    fs::write(&img, "P1\n2 2\n0 1 1 0\n").unwrap();
    assert_eq!(code(&flatnorm(&["denoise", s(&img), "--lambda", "0", "--out", s(&out)])), 2);
    assert_eq!(code(&flatnorm(&["denoise", s(&img), "--lambda", "-1", "--out", s(&out)])), 2);
    assert_eq!(code(&flatnorm(&["denoise", s(&img), "--lambda", "1", "--connectivity", "6", "--out", s(&out)])), 2);
    let missing = dir.path().join("missing.pbm");
    assert_eq!(code(&flatnorm(&["denoise", s(&missing), "--lambda", "1", "--out", s(&out)])), 2);
    assert_eq!(code(&flatnorm(&["bogus"])), 2);
}

#[test]
fn outputs_never_overwrite_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let img = dir.path().join("report.txt");
    fs::write(&img, "P1\n2 2\n0 1 1 0\n").unwrap();
    let o = flatnorm(&["denoise", s(&img), "--lambda", "1", "--out", s(dir.path())]);
    assert_eq!(code(&o), 2);
    assert_eq!(fs::read_to_string(&img).unwrap(), "P1\n2 2\n0 1 1 0\n");
}

fn square_chain(dir: &Path) -> std::path::PathBuf {
    let cx = CubicalComplex::grid2(3, 3).unwrap();
    let face = Chain::from_cells(&cx, 2, [(Cell::face2(1, 1), 1.0)]).unwrap();
    let path = dir.join("square.fc");
    fs::write(&path, write_chain(&face.boundary().unwrap()).unwrap()).unwrap();
    path
}

#[test]
fn flatnorm_both_methods_on_the_square() {
    let dir = tempfile::tempdir().unwrap();
    let chain = square_chain(dir.path());
    let out = dir.path().join("out");
    let o = flatnorm(&["flatnorm", s(&chain), "--lambda", "3", "--method", "both", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(report_value(&out, "primal_dual_gap").parse::<f64>().unwrap() <= 1e-9);
    assert_eq!(report_value(&out, "value"), "3");
    assert_eq!(report_value(&out, "slackness_passed"), "true");
    for f in ["s.fc", "residual.fc", "phi.fc", "x.fc"] {
        let text = fs::read_to_string(out.join(f)).unwrap();
        let c = read_chain(&text).unwrap();
        assert_eq!(write_chain(&c).unwrap(), text, "{f} does not round-trip");
    }
    let s_chain = read_chain(&fs::read_to_string(out.join("s.fc")).unwrap()).unwrap();
    assert_eq!(s_chain.len(), 1);
    assert!(fs::read_to_string(out.join("slackness.txt")).unwrap().contains("passed=true"));
}

#[test]
fn flatnorm_flags_three_circle_ties() {
    let dir = tempfile::tempdir().unwrap();
    let t = common::three_circles(30, [0, 10, 20]);
    let path = dir.path().join("circles.fc");
    fs::write(&path, write_chain(&t).unwrap()).unwrap();
    let out = dir.path().join("out");
    let o = flatnorm(&[
        "flatnorm", s(&path), "--lambda", "0.1", "--method", "both", "--probe-uniqueness", "--out", s(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(report_value(&out, "value"), "60");
    assert_eq!(report_value(&out, "x_exceeds_support"), "true");
    assert_eq!(report_value(&out, "unique"), "false");
}

#[test]
fn flatnorm_zero_and_mismatched_chains() {
    let dir = tempfile::tempdir().unwrap();
    let cx = CubicalComplex::grid2(3, 3).unwrap();
    let zero = dir.path().join("zero.fc");
    fs::write(&zero, write_chain(&Chain::zero(&cx, 1).unwrap()).unwrap()).unwrap();
    let out = dir.path().join("out");
    for method in ["lp", "dual", "both"] {
        let o = flatnorm(&["flatnorm", s(&zero), "--lambda", "1", "--method", method, "--out", s(&out)]);
        assert_eq!(code(&o), 0, "{method}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(report_value(&out, "value"), "0");
    }
    let top = dir.path().join("top.fc");
    fs::write(&top, write_chain(&Chain::from_cells(&cx, 2, [(Cell::face2(0, 0), 1.0)]).unwrap()).unwrap()).unwrap();
    assert_eq!(code(&flatnorm(&["flatnorm", s(&top), "--lambda", "1", "--out", s(&out)])), 2);
    let bad = dir.path().join("bad.fc");
    fs::write(&bad, "FLATCHAIN 1\ndim 2 extent 3 3 periodic 0 0\ndegree 1\nE 9 9 X 1\n").unwrap();
    assert_eq!(code(&flatnorm(&["flatnorm", s(&bad), "--lambda", "1", "--out", s(&out)])), 2);
}

#[test]
fn distance_cases() {
    let dir = tempfile::tempdir().unwrap();
    let cx = CubicalComplex::grid2(40, 40).unwrap();
    let outer = BinarySet::from_fn(&cx, |[x, y, _]| (4..36).contains(&x) && (4..36).contains(&y));
    let inner = BinarySet::from_fn(&cx, |[x, y, _]| (12..28).contains(&x) && (12..28).contains(&y));
    let mut plus = inner.clone();
    plus.insert(cx.cell_id(&Cell::face2(0, 0)).unwrap());
    let (a, b, c) = (dir.path().join("a.pbm"), dir.path().join("b.pbm"), dir.path().join("c.pbm"));
    write_set(&a, &outer);
    write_set(&b, &inner);
    write_set(&c, &plus);
    let out = dir.path().join("out");

    assert_eq!(code(&flatnorm(&["distance", s(&a), s(&a), "--lambda", "1", "--out", s(&out)])), 0);
    assert_eq!(report_value(&out, "distance"), "0");

    for method in ["mincut", "lp"] {
        assert_eq!(code(&flatnorm(&["distance", s(&b), s(&c), "--lambda", "1", "--method", method, "--out", s(&out)])), 0);
        assert_eq!(report_value(&out, "distance"), "1");
    }

    let frame = outer.symmetric_difference(&inner).unwrap();
    let oracle = flat_norm_lp(&boundary_of_set(&frame), &LpConfig::new(0.2)).unwrap().value;
    assert_eq!(code(&flatnorm(&["distance", s(&a), s(&b), "--lambda", "0.2", "--out", s(&out)])), 0);
    let got: f64 = report_value(&out, "distance").parse().unwrap();
    assert!((got - oracle).abs() < 1e-6);

    let small = dir.path().join("small.pbm");
    fs::write(&small, "P1\n2 2\n0 1 1 0\n").unwrap();
    assert_eq!(code(&flatnorm(&["distance", s(&a), s(&small), "--lambda", "1", "--out", s(&out)])), 2);
}

#[test]
fn sweep_cases() {
    let dir = tempfile::tempdir().unwrap();
    let cx = CubicalComplex::grid2(32, 32).unwrap();
    let img = dir.path().join("disk.pbm");
    write_set(&img, &common::disk(&cx, (16.0, 16.0), 10.0));
    let out = dir.path().join("out");
    let o = flatnorm(&["sweep", s(&img), "--lambdas", "0.05,0.1,0.2,0.5,1", "--out", s(&out), "--jobs", "3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("signature.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "lambda,value,mass_s,mass_t_minus_ds");
    assert_eq!(csv.lines().count(), 6);
    assert_eq!(report_value(&out, "monotone"), "true");
    assert_eq!(report_value(&out, "concave"), "true");
    assert!(out.join("lambda_004.ppm").exists());

    let single = dir.path().join("single");
    assert_eq!(code(&flatnorm(&["sweep", s(&img), "--lambdas", "0.3", "--method", "mincut", "--out", s(&single)])), 0);
    assert_eq!(fs::read_to_string(single.join("signature.csv")).unwrap().lines().count(), 2);

    assert_eq!(code(&flatnorm(&["sweep", s(&img), "--lambdas", "1,0.5", "--out", s(&out)])), 2);

    let chain = square_chain(dir.path());
    let cs = dir.path().join("chain_sweep");
    assert_eq!(code(&flatnorm(&["sweep", s(&chain), "--lambdas", "1,3,5", "--out", s(&cs)])), 0);
    assert_eq!(code(&flatnorm(&["sweep", s(&chain), "--lambdas", "1", "--method", "mincut", "--out", s(&cs)])), 2);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let t = common::three_circles(30, [0, 10, 20]);
    let path = dir.path().join("circles.fc");
    fs::write(&path, write_chain(&t).unwrap()).unwrap();
    let out = dir.path().join("out");
    let snapshot = || {
        let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(&out)
            .unwrap()
            .map(|e| {
                let e = e.unwrap();
                (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap())
            })
            .collect();
        files.sort();
        files
    };
    let args = ["flatnorm", s(&path), "--lambda", "0.1", "--method", "both", "--out", s(&out)];
    assert_eq!(code(&flatnorm(&args)), 0);
    let first = snapshot();
    assert_eq!(code(&flatnorm(&args)), 0);
    assert_eq!(first, snapshot());

    let img = dir.path().join("disk.pbm");
    let cx = CubicalComplex::grid2(20, 20).unwrap();
    write_set(&img, &common::disk(&cx, (10.0, 10.0), 6.0));
    let serial = dir.path().join("serial");
    let parallel = dir.path().join("parallel");
    let lambdas = "0.1,0.2,0.3,0.4,0.6,1";
    assert_eq!(code(&flatnorm(&["sweep", s(&img), "--lambdas", lambdas, "--jobs", "1", "--out", s(&serial)])), 0);
    assert_eq!(code(&flatnorm(&["sweep", s(&img), "--lambdas", lambdas, "--jobs", "4", "--out", s(&parallel)])), 0);
    assert_eq!(
        fs::read(serial.join("signature.csv")).unwrap(),
        fs::read(parallel.join("signature.csv")).unwrap()
    );
}

#[test]
fn seed_variable_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let chain = square_chain(dir.path());
    let out = dir.path().join("out");
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_flatnorm"))
            .args(["flatnorm", s(&chain), "--lambda", "3", "--out", s(&out)])
            .env("FLATNORM_SEED", seed)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("42")), 0);
    assert!(fs::read_to_string(out.join("manifest.txt")).unwrap().contains("seed=42"));
    assert_eq!(code(&run("not a number")), 2);
}
