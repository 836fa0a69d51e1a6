use std::path::Path;
use std::process::{Command, Output};

use specpart::grid::LabelGrid;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_specpart")).args(args).env("SPECPART_THREADS", "2").output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn tables_are_deterministic_csv() {
    let a = stdout(&run(&["tables", "--kmax", "4"]));
    assert_eq!(a, stdout(&run(&["tables", "--kmax", "4"])));
    assert!(a.contains("# square\nk,mean,lambda_k,L_k\n1,19.74,19.74,19.74\n"));
    assert!(a.contains("4,15.38,26.37,26.37"));
    let text = stdout(&run(&["tables", "--kmax", "2", "--format", "text"]));
    assert!(text.contains("49.35"));
}

#[test]
fn spectrum_lists_exact_and_discrete_values() {
    let out = stdout(&run(&["spectrum", "--shape", "square", "--k", "3", "--n", "32"]));
    let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert!(rows[0].contains("lambda_fd"), "{out}");
    assert_eq!(rows.len(), 4);
    assert!(rows[1].contains("19.739"));
}

#[test]
fn parameter_errors_exit_with_2() {
    assert_eq!(run(&["spectrum", "--shape", "square"]).status.code(), Some(2));
    assert_eq!(run(&["spectrum", "--shape", "hexagon", "--k", "2"]).status.code(), Some(2));
    assert_eq!(run(&["curved-sweep", "--shape", "square", "--k", "4"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn optimize_writes_history_and_partition() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("sq2");
    let base_str = base.to_str().unwrap();
    let args = ["optimize", "--shape", "square", "--k", "2", "--n", "16", "--seed", "3", "--out", base_str];
    let summary = stdout(&run(&args));
    assert!(summary.lines().count() >= 2, "{summary}");

    let history = std::fs::read_to_string(base.with_extension("csv")).unwrap();
    assert!(history.starts_with("iteration,energy\n"));
    let plbl = std::fs::read_to_string(base.with_extension("plbl")).unwrap();
    let part = LabelGrid::from_plbl(&plbl).unwrap();
    assert_eq!(part.k(), 2);
    assert!(part.cell_sizes().iter().all(|&s| s > 0));

    // Same seed, same bytes.
    let again = dir.path().join("again");
    let args2 = ["optimize", "--shape", "square", "--k", "2", "--n", "16", "--seed", "3", "--out", again.to_str().unwrap()];
    stdout(&run(&args2));
    assert_eq!(plbl, std::fs::read_to_string(again.with_extension("plbl")).unwrap());

    render_round_trip(&base.with_extension("plbl"), dir.path());
}

fn render_round_trip(plbl: &Path, dir: &Path) {
    let svg_path = dir.join("part.svg");
    stdout(&run(&["render", "--in", plbl.to_str().unwrap(), "--out", svg_path.to_str().unwrap()]));
    let svg = std::fs::read_to_string(svg_path).unwrap();
    assert!(svg.starts_with("<?xml") || svg.starts_with("<svg"));
    assert!(svg.trim_end().ends_with("</svg>"));
}

#[test]
fn render_curved_construction() {
    let svg = stdout(&run(&["render", "--shape", "disk", "--k", "6", "--ell", "0.41"]));
    assert!(svg.contains("<svg") && svg.contains("</svg>"));
    assert_eq!(run(&["render", "--shape", "disk", "--k", "6", "--ell", "5"]).status.code(), Some(2));
}

#[test]
fn criterion_reads_a_partition_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("strips.plbl");
    // Two unequal strips are not an equipartition.
    let spec = specpart::grid::GridSpec::new(specpart::ShapeKind::Square, 16).unwrap();
    let inside = specpart::grid::rasterize_shape(&spec);
    let labels = (0..spec.len()).map(|p| if inside.get(p) { (spec.row_col(p).1 >= 5) as i32 } else { -1 }).collect();
    std::fs::write(&path, LabelGrid::new(spec, 2, labels).unwrap().to_plbl()).unwrap();
    let out = run(&["criterion", "--in", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}
