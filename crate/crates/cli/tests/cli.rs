use std::fs;
use std::process::{Command, Output};

fn dqd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dqd"))
        .args(args)
        .env_remove("DQD_THREADS")
        .output()
        .expect("spawn dqd")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(k).unwrap().parse().unwrap()).collect()
}

const SPECTRUM: &[&str] = &[
    "spectrum",
    "--t",
    "7",
    "--bz",
    "16",
    "--bx",
    "100",
    "--eps-min",
    "-200",
    "--eps-max",
    "200",
    "--n",
    "801",
];

#[test]
fn spectrum_columns_and_shape() {
    let o = dqd(SPECTRUM);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("eps,E1,E2,E3,E4\n"));
    assert_eq!(s.lines().count(), 802);
    assert!(!s.contains('\r'));
    let eps = column(&s, "eps");
    assert_eq!((eps[0], eps[400], eps[800]), (-200.0, 0.0, 200.0));
}

#[test]
fn reruns_are_byte_identical() {
    let coherence = [
        "coherence",
        "--t",
        "15.4",
        "--bz",
        "24",
        "--bx",
        "100",
        "--eps",
        "1",
        "--t-min",
        "0.1",
        "--t-max",
        "100",
        "--n",
        "400",
        "--log",
    ];
    for args in [SPECTRUM, &coherence[..]] {
        let a = dqd(args);
        let b = dqd(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
    let serial = Command::new(env!("CARGO_BIN_EXE_dqd"))
        .args(coherence)
        .env("DQD_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(serial.stdout, dqd(&coherence).stdout);
}

#[test]
fn coherence_peak_moves_with_parameters() {
    let peak = |t: &str, bz: &str| {
        let o = dqd(&[
            "coherence",
            "--t",
            t,
            "--bz",
            bz,
            "--bx",
            "100",
            "--eps",
            "1",
            "--t-min",
            "0.1",
            "--t-max",
            "100",
            "--n",
            "400",
            "--log",
        ]);
        let s = stdout(&o);
        assert!(s.starts_with("T,C,Ccc\n"));
        let (temps, ccc) = (column(&s, "T"), column(&s, "Ccc"));
        let i = (0..ccc.len()).max_by(|&a, &b| ccc[a].total_cmp(&ccc[b])).unwrap();
        temps[i]
    };
    assert!((peak("7", "16") - 6.01).abs() < 0.6);
    assert!((peak("15.4", "24") - 9.8).abs() < 1.0);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pops.csv");
    let o = dqd(&[
        "populations",
        "--eps",
        "0.5",
        "--t",
        "7",
        "--bz",
        "16",
        "--bx",
        "100",
        "--t-min",
        "0.01",
        "--t-max",
        "10000",
        "--n",
        "50",
        "--log",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let s = fs::read_to_string(&path).unwrap();
    assert!(s.starts_with("T,rho11,rho22,rho33,rho44\n"));
    let last: Vec<f64> = s
        .lines()
        .last()
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    assert_eq!(last[0], 10000.0);
    assert!(last[1..].iter().all(|p| (p - 0.25).abs() < 1e-3));
}

#[test]
fn fidelity_and_concurrence_map() {
    let o = dqd(&[
        "fidelity", "--eps", "10", "--t", "7", "--bz", "16", "--bx", "100", "--t-min", "0.001", "--t-max", "1", "--n",
        "3", "--log",
    ]);
    let f = column(&stdout(&o), "F");
    assert!((f[0] - 1.0).abs() < 1e-6);

    let o = dqd(&[
        "concurrence-map",
        "--x",
        "bx",
        "--x-min",
        "0",
        "--x-max",
        "200",
        "--nx",
        "5",
        "--y",
        "T",
        "--y-min",
        "0.1",
        "--y-max",
        "30",
        "--ny",
        "4",
        "--y-log",
        "--eps",
        "1",
        "--t",
        "7",
        "--bz",
        "16",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("bx,T,C\n"));
    assert_eq!(s.lines().count(), 21);
    let bx = column(&s, "bx");
    let c = column(&s, "C");
    assert!(bx.iter().zip(&c).filter(|(b, _)| **b == 0.0).all(|(_, c)| *c == 0.0));
}

#[test]
fn sweep_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("coherence.cfg");
    fs::write(
        &cfg,
        "measures = concurrence, correlated_coherence\n\n[fixed]\nepsilon = 1\nt = 7\nbz = 16\nbx = 100\n\n\
         [axis1]\nparam = T\nmin = 0.01\nmax = 100\ncount = 40\nscale = log\n",
    )
    .unwrap();
    let o = dqd(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    assert!(s.starts_with("epsilon,t,bz,bx,T,C,Ccc\n"));
    assert_eq!(s.lines().count(), 41);
    assert!(s.lines().nth(1).unwrap().starts_with("1,7,16,100,0.01,"));
}

#[test]
fn validate_is_deterministic_and_passes() {
    let a = dqd(&["validate", "--samples", "200", "--seed", "42"]);
    let b = dqd(&["validate", "--samples", "200", "--seed", "42"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
    let report = String::from_utf8(a.stderr.clone()).unwrap();
    assert!(report.contains("verdict: PASS"));
    assert!(report.contains("flag closed_form_concurrence"));
    assert_eq!(stdout(&a).lines().count(), 201);
}

#[test]
fn bad_input_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    fs::write(
        &bad,
        "measures = concurrence\n[axis1]\nparam = T\nmin = 0\nmax = 1\ncount = 5\nscale = log\n",
    )
    .unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["spectrum", "--t", "7"],
        vec![
            "spectrum",
            "--t",
            "7",
            "--bz",
            "16",
            "--bx",
            "100",
            "--eps-min",
            "-1",
            "--eps-max",
            "1",
            "--n",
            "1",
        ],
        vec![
            "spectrum",
            "--t",
            "-7",
            "--bz",
            "16",
            "--bx",
            "100",
            "--eps-min",
            "-1",
            "--eps-max",
            "1",
        ],
        vec![
            "fidelity", "--eps", "1", "--t", "7", "--bz", "16", "--bx", "100", "--t-min", "0", "--t-max", "1", "--log",
        ],
        vec![
            "concurrence-map",
            "--x",
            "bx",
            "--x-min",
            "0",
            "--x-max",
            "1",
            "--nx",
            "2",
            "--y",
            "bx",
            "--y-min",
            "0",
            "--y-max",
            "1",
            "--ny",
            "2",
        ],
        vec![
            "concurrence-map",
            "--x",
            "foo",
            "--x-min",
            "0",
            "--x-max",
            "1",
            "--nx",
            "2",
            "--y",
            "T",
            "--y-min",
            "1",
            "--y-max",
            "2",
            "--ny",
            "2",
        ],
        vec!["sweep", "--config", bad.to_str().unwrap()],
        vec!["sweep", "--config", "/nonexistent/x.cfg"],
        vec!["nonsense"],
    ];
    for args in cases {
        assert_eq!(dqd(&args).status.code(), Some(2), "{args:?}");
    }
    let threads = Command::new(env!("CARGO_BIN_EXE_dqd"))
        .args(SPECTRUM)
        .env("DQD_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(threads.status.code(), Some(2));
}
