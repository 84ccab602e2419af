use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dispersion"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn solve_t4_maxmin() {
    let t4 = fixture("t4.txt");
    let o = run(&["solve", p(&t4), "--model", "maxmin", "--m", "3"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("value: 4\n"), "{s}");
    assert!(s.contains("subset: 1,2,3\n"), "{s}");
    assert!(s.contains("status: Optimal\n"));
}

#[test]
fn solve_every_model_on_t4() {
    let t4 = fixture("t4.txt");
    for (model, value) in [
        ("maxsum", "15"),
        ("maxminsum", "9"),
        ("mindiff", "2"),
        ("bilevel-maxsum", "15"),
        ("bilevel-maxminsum", "9"),
    ] {
        let o = run(&["solve", p(&t4), "--model", model]);
        assert!(o.status.success(), "{model}");
        assert!(stdout(&o).contains(&format!("value: {value}\n")), "{model}: {}", stdout(&o));
    }
    let o = run(&["solve", p(&t4), "--model", "maxmin", "--original", "--timings"]);
    assert!(stdout(&o).contains("model: maxmin-original\n"));
    assert!(stdout(&o).contains("decision_solves: "));
    let o = run(&["solve", p(&t4), "--model", "bilevel-maxsum", "--mode", "exact"]);
    assert!(stdout(&o).contains("d_star: 4\n"));
}

#[test]
fn export_lp_matches_golden() {
    let golden = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/t4_maxminsum.lp")).unwrap();
    let o = run(&["export-lp", p(&fixture("t4.txt")), "--kind", "maxminsum", "--m", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), golden);
}

#[test]
fn usage_errors() {
    let t4 = fixture("t4.txt");
    assert_eq!(run(&["solve", p(&t4), "--model", "nope"]).status.code(), Some(1));
    assert_eq!(run(&["solve", p(&t4), "--model", "maxmin", "--m", "9"]).status.code(), Some(1));
    assert_eq!(run(&["solve", "/nonexistent", "--model", "maxmin"]).status.code(), Some(1));
    assert_eq!(run(&["export-lp", p(&t4), "--kind", "node-packing"]).status.code(), Some(1));
    assert_eq!(run(&["solve", p(&t4), "--model", "maxmin", "--time-limit", "0"]).status.code(), Some(1));
    let o = run(&["generate", "--family", "XYZ", "--n", "5", "--m", "2", "--out", "/tmp/never"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn evaluate_subset() {
    let o = run(&["evaluate", p(&fixture("t4.txt")), "--subset", "1,2,3"]);
    assert_eq!(stdout(&o), "maxsum: 15\nmaxmin: 4\nmaxminsum: 9\nmindiff: 2\nmaxmean: 5\n");
    let o = run(&["evaluate", p(&fixture("t4.txt")), "--subset", "0,0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn generate_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = run(&["generate", "--family", "GKD_D", "--n", "10", "--m", "3", "--seed", "4", "--count", "3", "--out", p(d.path())]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let manifest = std::fs::read_to_string(a.path().join("manifest.csv")).unwrap();
    assert_eq!(manifest.lines().next(), Some("family,n,m,seed,filename"));
    assert_eq!(manifest.lines().count(), 4);
    for s in 4..7 {
        let name = format!("GKD_D_n10_m3_s{s}.txt");
        assert_eq!(std::fs::read(a.path().join(&name)).unwrap(), std::fs::read(b.path().join(&name)).unwrap());
    }
}

fn batch(dir: &Path, family: &str, n: &str, m: &str, count: &str) -> Vec<String> {
    let o = run(&["generate", "--family", family, "--n", n, "--m", m, "--count", count, "--out", p(dir)]);
    assert!(o.status.success());
    let mut files: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "txt"))
        .map(|p| p.to_str().unwrap().to_string())
        .collect();
    files.sort();
    files
}

#[test]
fn bench_solves_small_batch() {
    let dir = tempfile::tempdir().unwrap();
    let files = batch(dir.path(), "GKD_D", "10", "3", "5");
    let out = dir.path().join("bench.csv");
    let jobs = dir.path().join("jobs.csv");
    let mut args = vec!["bench"];
    args.extend(files.iter().map(String::as_str));
    args.extend(["--original", "--out", p(&out), "--jobs-out", p(&jobs)]);
    let o = run(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("set,model,count,solved_count,avg_dev_from_best"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5);
    for r in rows {
        let f: Vec<&str> = r.split(',').collect();
        assert_eq!(f[0], "GKD_D");
        assert_eq!((f[2], f[3], f[4]), ("5", "5", "0"), "{r}");
    }
    assert_eq!(std::fs::read_to_string(&jobs).unwrap().lines().count(), 1 + 25);

    let again = dir.path().join("bench2.csv");
    let jobs2 = dir.path().join("jobs2.csv");
    let mut args = vec!["bench"];
    args.extend(files.iter().map(String::as_str));
    args.extend(["--original", "--threads", "1", "--out", p(&again), "--jobs-out", p(&jobs2)]);
    assert!(run(&args).status.success());
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&again).unwrap());
    assert_eq!(std::fs::read(&jobs).unwrap(), std::fs::read(&jobs2).unwrap());
}

#[test]
fn strict_budget_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let files = batch(dir.path(), "GKD_D", "40", "8", "1");
    let base = ["solve", files[0].as_str(), "--model", "maxsum", "--max-nodes", "1"];
    let lax = run(&base);
    assert_eq!(lax.status.code(), Some(0));
    assert!(stdout(&lax).contains("status: BudgetExceeded"));
    let mut strict = base.to_vec();
    strict.push("--strict");
    assert_eq!(run(&strict).status.code(), Some(2));
}

#[test]
fn scatter_plot_marker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let files = batch(dir.path(), "GKD_D", "25", "3", "1");
    let svg = dir.path().join("fig.svg");
    let o = run(&["plot", "scatter", &files[0], "--models", "mindiff", "--range", "0,100", "--out", p(&svg)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&svg).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    let count = |c: &str| doc.descendants().filter(|n| n.attribute("class") == Some(c)).count();
    assert_eq!((count("point"), count("selected")), (25, 3));

    let o = run(&["plot", "scatter", p(&fixture("t4.txt")), "--m", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn histogram_plot_avoids_small_classes() {
    let dir = tempfile::tempdir().unwrap();
    let files = batch(dir.path(), "GKD_D", "30", "4", "4");
    let svg = dir.path().join("hist.svg");
    let mut args = vec!["plot", "histogram"];
    args.extend(files.iter().map(String::as_str));
    args.extend(["--model", "maxmin", "--out", p(&svg)]);
    assert!(run(&args).status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    let bars: Vec<u64> = doc
        .descendants()
        .filter(|n| n.attribute("class") == Some("bar"))
        .map(|n| n.attribute("data-count").unwrap().parse().unwrap())
        .collect();
    assert_eq!(bars.len(), 10);
    assert_eq!(bars.iter().sum::<u64>(), 4 * 6);
    assert_eq!(bars[0], 0);
}

#[test]
fn analyze_reports() {
    let dir = tempfile::tempdir().unwrap();
    let files = batch(dir.path(), "GKD_D", "12", "3", "6");
    let run_report = |report: &str, extra: &[&str]| {
        let mut args = vec!["analyze"];
        args.extend(files.iter().map(String::as_str));
        args.extend(["--report", report, "--set", "GKD_D_12"]);
        args.extend(extra);
        let o = run(&args);
        assert!(o.status.success(), "{report}: {}", String::from_utf8_lossy(&o.stderr));
        stdout(&o)
    };
    let cross = run_report("cross", &[]);
    assert!(cross.starts_with("set,instances,correlation,min_dev,max_dev,avg_dev,negative_dev\nGKD_D_12,6,"), "{cross}");
    let hist = run_report("histogram", &["--model", "maxmin"]);
    assert_eq!(hist.lines().count(), 11);
    let geo = run_report("geometry", &["--model", "maxsum,maxmin"]);
    assert_eq!(geo.lines().count(), 1 + 12);
    let mult = run_report("multiplicity", &[]);
    assert!(mult.starts_with("set,instances,avg_count,max_count,truncated\nGKD_D_12,6,"));
    let mut args = vec!["analyze"];
    args.extend(files.iter().map(String::as_str));
    args.extend(["--report", "bogus"]);
    assert_eq!(run(&args).status.code(), Some(1));
}

#[test]
fn verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let sol = dir.path().join("sol.txt");
    std::fs::write(&sol, "x_0 0\nx_1 1\nx_2 1\nx_3 1\nw 4\n").unwrap();
    let t4 = fixture("t4.txt");
    let o = run(&["verify", p(&t4), "--kind", "maxmin-kuo", "--solution", p(&sol)]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("value: 4\n"));
    let o = run(&["verify", p(&t4), "--kind", "packing-feasibility", "--l", "5", "--solution", p(&sol)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("violated: 1,2\n"));
}
