use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

struct Workspace {
    dir: TempDir,
}

struct Csv {
    meta: HashMap<String, String>,
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    fn read(path: &Path) -> Self {
        let text = fs::read_to_string(path).unwrap();
        let mut meta = HashMap::new();
        let mut lines = text.lines();
        let mut header = None;
        for line in lines.by_ref() {
            match line.strip_prefix("# ") {
                Some(kv) => {
                    let (k, v) = kv.split_once('=').unwrap();
                    meta.insert(k.to_string(), v.to_string());
                }
                None => {
                    header = Some(line);
                    break;
                }
            }
        }
        let columns = header.unwrap().split(',').map(String::from).collect();
        let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
        Self { meta, columns, rows }
    }

    fn col(&self, name: &str) -> usize {
        self.columns.iter().position(|c| c == name).unwrap_or_else(|| panic!("no column {name}"))
    }

    fn f(&self, row: usize, name: &str) -> f64 {
        self.rows[row][self.col(name)].parse().unwrap()
    }

    fn text(&self, row: usize, name: &str) -> &str {
        &self.rows[row][self.col(name)]
    }
}

impl Workspace {
    fn new() -> Self {
        Self { dir: tempfile::tempdir().unwrap() }
    }

    fn config(&self, name: &str, body: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        fs::write(&path, body).unwrap();
        path
    }

    fn out(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn run(&self, args: &[&str], config: Option<&Path>, out: &str) -> Output {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_rotdirac"));
        cmd.args(args).arg("--out").arg(self.out(out));
        if let Some(c) = config {
            cmd.arg("--config").arg(c);
        }
        cmd.output().unwrap()
    }

    fn csv(&self, out: &str, name: &str) -> Csv {
        Csv::read(&self.out(out).join(format!("{name}.csv")))
    }
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn verify_flags(csv: &Csv) -> HashMap<String, bool> {
    (0..csv.rows.len()).map(|r| (csv.text(r, "invariant").to_string(), csv.text(r, "pass") == "true")).collect()
}

#[test]
fn default_verify_passes_every_invariant() {
    let ws = Workspace::new();
    let o = ws.run(&["verify"], None, "v");
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = ws.csv("v", "verify");
    assert_eq!(csv.meta["phase_branch"], "(-pi,pi]");
    assert_eq!(csv.meta["failed"], "0");
    let flags = verify_flags(&csv);
    for name in ["clifford", "gram", "leakage", "invariance", "unitarity", "cyclicity", "phase_identity"] {
        assert!(flags[name], "{name}");
    }
}

#[test]
fn sabotaged_frame_fails_the_phase_identity() {
    let ws = Workspace::new();
    let cfg = ws.config("s.cfg", "sabotage = true\n");
    let o = ws.run(&["verify"], Some(&cfg), "v");
    assert_eq!(code(&o), 2);
    let flags = verify_flags(&ws.csv("v", "verify"));
    assert!(!flags["phase_identity"]);
    assert!(flags["clifford"] && flags["gram"] && flags["invariance"]);
}

#[test]
fn tiny_truncation_fails_the_leakage_check_with_its_value() {
    let ws = Workspace::new();
    let cfg = ws.config("t.cfg", "shells = 0\n");
    let o = ws.run(&["verify"], Some(&cfg), "v");
    assert_eq!(code(&o), 2);
    let csv = ws.csv("v", "verify");
    let row = (0..csv.rows.len()).find(|&r| csv.text(r, "invariant") == "leakage").unwrap();
    assert_eq!(csv.text(row, "pass"), "false");
    assert!(csv.f(row, "measured") > csv.f(row, "limit"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("leakage"));
}

#[test]
fn configuration_errors_exit_with_one() {
    let ws = Workspace::new();
    let unknown = ws.config("u.cfg", "b = 0.5\ncolour = red\n");
    assert_eq!(code(&ws.run(&["spectrum"], Some(&unknown), "x")), 1);
    let missing = ws.dir.path().join("absent.cfg");
    assert_eq!(code(&ws.run(&["spectrum"], Some(&missing), "x")), 1);
    assert_eq!(code(&ws.run(&["pauli"], None, "x")), 1);
    assert_eq!(code(&ws.run(&["bogus"], None, "x")), 1);
    assert!(!ws.out("x").exists());
}

#[test]
fn truncation_warning_escalates_after_writing_the_spectrum() {
    let ws = Workspace::new();
    let cfg = ws.config("t.cfg", "shells = 0\n");
    assert_eq!(code(&ws.run(&["spectrum"], Some(&cfg), "s")), 2);
    assert!(!ws.csv("s", "spectrum").rows.is_empty());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let ws = Workspace::new();
    let cfg = ws.config("r.cfg", "initial_state = random\nt_end = 250\nt_samples = 6\n");
    for command in ["spectrum", "phases", "evolve"] {
        ws.run(&[command, "--seed", "9"], Some(&cfg), "a");
        ws.run(&[command, "--seed", "9"], Some(&cfg), "b");
        let name = format!("{command}.csv");
        let a = fs::read(ws.out("a").join(&name)).unwrap();
        let b = fs::read(ws.out("b").join(&name)).unwrap();
        assert_eq!(a, b, "{command}");
    }
    ws.run(&["evolve", "--seed", "10"], Some(&cfg), "c");
    assert_ne!(fs::read(ws.out("a").join("evolve.csv")).unwrap(), fs::read(ws.out("c").join("evolve.csv")).unwrap());
}

#[test]
fn static_axial_field_spectrum_is_unshifted() {
    let ws = Workspace::new();
    let cfg = ws.config("a.cfg", "theta_b = 0\nomega = 0\n");
    assert_eq!(code(&ws.run(&["spectrum"], Some(&cfg), "s")), 0);
    let csv = ws.csv("s", "spectrum");
    for r in 0..csv.rows.len() {
        let e0 = csv.f(r, "E0");
        assert_eq!(csv.f(r, "E_pert"), e0);
        assert!((csv.f(r, "E_exact") - e0).abs() < 1e-12);
    }
}

fn ground_row(csv: &Csv) -> usize {
    (0..csv.rows.len())
        .find(|&r| {
            ["n_z", "n_rho", "m"].iter().all(|c| csv.text(r, c) == "0")
                && csv.f(r, "m_s") == 0.5
                && csv.text(r, "sign") == "1"
        })
        .unwrap()
}

#[test]
fn perturbative_column_and_its_quadratic_error() {
    let ws = Workspace::new();
    let gap = |omega: f64, out: &str| {
        let cfg = ws.config(&format!("{out}.cfg"), &format!("omega = {omega}\n"));
        assert_eq!(code(&ws.run(&["spectrum"], Some(&cfg), out)), 0);
        let csv = ws.csv(out, "spectrum");
        let r = ground_row(&csv);
        let shift = 0.5 * omega * (std::f64::consts::PI / 3.0).cos();
        assert!((csv.f(r, "E_pert") - (csv.f(r, "E0") - shift)).abs() < 1e-15);
        (csv.f(r, "E_exact") - csv.f(r, "E_pert")).abs()
    };
    let ratio = gap(0.01, "w1") / gap(0.005, "w2");
    assert!((3.2..=4.8).contains(&ratio), "{ratio}");
}

#[test]
fn phase_table_identities() {
    let ws = Workspace::new();
    assert_eq!(code(&ws.run(&["phases"], None, "p")), 0);
    let csv = ws.csv("p", "phases");
    assert_eq!(csv.rows.len(), 4);
    assert_eq!(csv.text(0, "state"), "0:0:0:+1/2:+");
    let tau = 2.0 * std::f64::consts::PI;
    for r in 0..csv.rows.len() {
        let x = csv.f(r, "delta") - csv.f(r, "beta_unreduced") - csv.f(r, "gamma");
        assert!((x - tau * (x / tau).round()).abs() < 1e-10);
    }
    assert!((csv.f(0, "gamma") + std::f64::consts::FRAC_PI_2).abs() < 0.2);
    assert!(csv.f(0, "defect") < 0.2);

    let axial = ws.config("a.cfg", "theta_b = 0\n");
    assert_eq!(code(&ws.run(&["phases"], Some(&axial), "q")), 0);
    let csv = ws.csv("q", "phases");
    for r in 0..csv.rows.len() {
        let g = csv.f(r, "gamma");
        assert!((g - tau * (g / tau).round()).abs() < 1e-10, "{g}");
    }
}

#[test]
fn evolved_eigenstate_is_cyclic_and_matches_the_oracle() {
    let ws = Workspace::new();
    let o = ws.run(&["evolve", "--oracle"], None, "e");
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = ws.csv("e", "evolve");
    assert_eq!(csv.rows.len(), 17);
    assert_eq!(csv.f(0, "t"), 0.0);
    assert!((csv.f(0, "norm") - 1.0).abs() < 1e-14);
    let last = csv.rows.len() - 1;
    assert!((csv.f(last, "t") - 200.0 * std::f64::consts::PI).abs() < 1e-12);
    assert!(csv.f(last, "cyclic_defect") <= 1e-8);
    for r in 0..csv.rows.len() {
        assert!((csv.f(r, "jz") - csv.f(0, "jz")).abs() < 1e-8);
        assert!(csv.f(r, "discrepancy") <= 1e-6);
    }
    assert!(csv.meta["max_discrepancy"].parse::<f64>().unwrap() <= 1e-6);
}

#[test]
fn integrator_failure_exits_with_three() {
    let ws = Workspace::new();
    let cfg = ws.config("i.cfg", "integrator_tolerance = 1e-300\nt_end = 10\nt_samples = 2\n");
    let o = ws.run(&["evolve", "--oracle"], Some(&cfg), "e");
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("last good time"));
}

#[test]
fn json_output_and_pauli_table() {
    let ws = Workspace::new();
    let cfg = ws.config("p.cfg", "mu_a = 0.1\n");
    let o = ws.run(&["pauli", "--format", "json"], Some(&cfg), "j");
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(ws.out("j").join("pauli.json")).unwrap()).unwrap();
    assert_eq!(doc["phase_branch"], "(-pi,pi]");
    assert_eq!(doc["columns"][3], "shift");
    let residual = doc["meta"]["invariance_residual"].as_f64().unwrap();
    assert!(residual <= doc["meta"]["invariance_bound"].as_f64().unwrap());
    assert_eq!(doc["rows"].as_array().unwrap().len(), doc["meta"]["dim"].as_u64().unwrap() as usize);

    let zero = ws.config("z.cfg", "mu_a = 0\n");
    ws.run(&["pauli"], Some(&zero), "z");
    let csv = ws.csv("z", "pauli");
    for r in 0..csv.rows.len() {
        assert!(csv.f(r, "shift").abs() < 1e-10);
    }
}
