use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bslab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn data(name: &str) -> String {
    let p: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name);
    p.to_str().unwrap().to_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn law_of_p3_and_c5() {
    let out = bslab(&["law", &data("graphs/p3.txt")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines.iter().all(|l| l.starts_with("atom ")));
    assert!(lines[0].ends_with(" 2/3") && lines[1].ends_with(" 1/3"));

    let out = bslab(&["law", &data("graphs/c5.txt")]);
    assert_eq!(stdout(&out).lines().count(), 1);
    assert!(stdout(&out).trim_end().ends_with(" 1/1"));
}

#[test]
fn law_output_feeds_check() {
    let dir = tempfile::tempdir().unwrap();
    let law = stdout(&bslab(&["law", &data("graphs/star_with_loner.txt")]));
    let path = write(&dir, "law.txt", &law);
    let out = bslab(&["check", &path]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "verdict pass\ndiscrepancy 0/1\nwitness none\n"
    );
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(&dir, "empty.txt", "");
    assert_eq!(bslab(&["law", &empty]).status.code(), Some(2));

    let looped = write(&dir, "loop.txt", "0 1\n# fine\n2 2\n");
    let out = bslab(&["law", &looped]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));

    let out = bslab(&["--delta", "2", "law", &data("graphs/star_with_loner.txt")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("degree"));

    assert_eq!(bslab(&["law", "/no/such/file"]).status.code(), Some(2));
    assert_eq!(
        bslab(&["law", &data("graphs/p3.txt"), "--bogus"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bslab(&["profile", &data("graphs/p3.txt")]).status.code(),
        Some(2)
    );
    assert_eq!(
        bslab(&["--delta", "0", "law", &data("graphs/p3.txt")])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn check_measures() {
    let out = bslab(&["check", &data("measures/law_p3.txt")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("verdict pass\n"));

    let out = bslab(&["check", &data("measures/end_of_p3.txt")]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("verdict fail\n") && text.contains("discrepancy 1/1\n"));
    // The witness is the P3 end-rooted edge towards the middle.
    assert!(text.contains("witness 01010000000300000003a0\n"));

    let dir = tempfile::tempdir().unwrap();
    let short = fs::read_to_string(data("measures/law_p3.txt"))
        .unwrap()
        .replace(" 2/3", " 17/30");
    let short = write(&dir, "short.txt", &short);
    assert_eq!(bslab(&["check", &short]).status.code(), Some(2));
}

#[test]
fn check_profiles() {
    let dir = tempfile::tempdir().unwrap();
    let family = stdout(&bslab(&[
        "profile",
        &data("graphs/c9.txt"),
        "--radius",
        "3",
        "--family",
    ]));
    assert_eq!(family.lines().count(), 4);
    let path = write(&dir, "family.txt", &family);
    let out = bslab(&["check", &path]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).matches("verdict pass").count(), 2);

    let low = stdout(&bslab(&[
        "profile",
        &data("graphs/c9.txt"),
        "--radius",
        "1",
    ]));
    let path = write(&dir, "low.txt", &low);
    assert_eq!(bslab(&["check", &path]).status.code(), Some(2));
}

#[test]
fn distances() {
    let out = bslab(&[
        "dist",
        "rho",
        &data("graphs/c5.txt"),
        "0",
        &data("graphs/c8.txt"),
        "3",
    ]);
    assert_eq!(stdout(&out), "rho 1/2\n");
    let out = bslab(&[
        "dist",
        "rho",
        &data("graphs/c8.txt"),
        "0",
        &data("graphs/c8.txt"),
        "5",
    ]);
    assert_eq!(stdout(&out), "rho 0/1\n");
    let out = bslab(&[
        "dist",
        "rho",
        &data("graphs/c5.txt"),
        "9",
        &data("graphs/c8.txt"),
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let p3 = write(
        &dir,
        "p3.txt",
        &stdout(&bslab(&[
            "profile",
            &data("graphs/p3.txt"),
            "--radius",
            "1",
        ])),
    );
    let c4 = write(&dir, "c4.txt", "0 1\n1 2\n2 3\n3 0\n");
    let c4 = write(
        &dir,
        "c4p.txt",
        &stdout(&bslab(&["profile", &c4, "--radius", "1"])),
    );
    assert_eq!(stdout(&bslab(&["dist", "tv", &c4, &p3])), "tv 2/3\n");

    let family = write(
        &dir,
        "fam.txt",
        &stdout(&bslab(&[
            "profile",
            &data("graphs/p3.txt"),
            "--radius",
            "2",
            "--family",
        ])),
    );
    assert_eq!(bslab(&["dist", "tv", &family, &p3]).status.code(), Some(2));
    assert_eq!(
        stdout(&bslab(&["dist", "tv", &family, &p3, "--radius", "1"])),
        "tv 0/1\n"
    );
}

#[test]
fn converge_over_cycles() {
    let dir = tempfile::tempdir().unwrap();
    let limit = write(
        &dir,
        "lim.txt",
        &stdout(&bslab(&[
            "profile",
            &data("graphs/c10.txt"),
            "--radius",
            "3",
        ])),
    );
    let graphs: Vec<String> = [7, 8, 9, 10, 11, 12]
        .iter()
        .map(|n| data(&format!("graphs/c{n}.txt")))
        .collect();
    let mut args = vec!["converge", "--radius", "3", "--limit-file", &limit];
    args.extend(graphs.iter().map(String::as_str));
    let out = bslab(&args);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("r 3 n 1 tv 1/1\nr 3 n 2 tv 0/1\n"));
    assert!(text.contains("cauchy_from 1\n"));
    assert!(text.contains("limit r 3 n 0 tv 1/1\nlimit r 3 n 1 tv 0/1\n"));

    let out = bslab(&[
        "converge",
        "--radius",
        "1",
        &data("graphs/p3.txt"),
        &data("graphs/c5.txt"),
    ]);
    assert!(stdout(&out).contains("cauchy_from none\n"));
}

#[test]
fn graphing_validation() {
    let out = bslab(&["graphing-validate", &data("graphings/beta_one_fifth.txt")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("verdict pass\n"));

    let out = bslab(&["graphing-validate", &data("graphings/overlap.txt")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("overlap"));

    let out = bslab(&[
        "--delta",
        "1",
        "graphing-validate",
        &data("graphings/beta_one_fifth.txt"),
    ]);
    assert_eq!(out.status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let bad = write(&dir, "bad.txt", "involution rotate 1/2\n");
    assert_eq!(bslab(&["graphing-validate", &bad]).status.code(), Some(2));
}

#[test]
fn graphing_estimate_of_k2() {
    let out = bslab(&[
        "graphing-estimate",
        &data("graphings/k2.txt"),
        "--radius",
        "2",
        "--samples",
        "1000",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("samples 1000\nseed 1\n"));
    let rows: Vec<&str> = text.lines().filter(|l| l.starts_with("r ")).collect();
    assert_eq!(rows.len(), 1);
    let cols: Vec<&str> = rows[0].split(' ').collect();
    assert_eq!(cols.len(), 5);
    assert_eq!(cols[3], "1.00000");
}

#[test]
fn graphing_check_of_beta_one_fifth() {
    let args = [
        "graphing-check",
        &data("graphings/beta_one_fifth.txt"),
        "--radius",
        "2",
        "--samples",
        "100000",
        "--seed",
        "5",
        "--tolerance",
        "0.01",
    ];
    let first = bslab(&args);
    assert_eq!(first.status.code(), Some(0), "{}", stdout(&first));
    assert!(stdout(&first).starts_with("verdict pass\n"));
    assert_eq!(first.stdout, bslab(&args).stdout);

    let out = bslab(&[
        "graphing-check",
        &data("graphings/beta_one_fifth.txt"),
        "--radius",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = bslab(&[
        "graphing-check",
        &data("graphings/overlap.txt"),
        "--radius",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = bslab(&[
        "graphing-check",
        &data("graphings/k2.txt"),
        "--radius",
        "2",
        "--tolerance",
        "-1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn shipped_specs_pass_edge_check() {
    for name in ["beta_one_fifth", "single_reflection", "third_swap", "k2"] {
        let out = bslab(&[
            "graphing-check",
            &data(&format!("graphings/{name}.txt")),
            "--radius",
            "2",
            "--samples",
            "5000",
        ]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", stdout(&out));
    }
}
