use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_otfs-ddr")).args(args).output().unwrap()
}

const SMALL: &[&str] = &["--snr", "5:10:5", "--frames", "3", "--seed", "7"];

#[test]
fn simulate_writes_csv_to_stdout() {
    let out = bin(&[&["simulate"], SMALL].concat());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "receiver,snr_db,frames,bits,bit_errors,ber,mean_sinr_db");
    assert_eq!(lines.len(), 1 + 2 * 3);
    // Frames stop at the budget or once every receiver has 500 errors.
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(&fields[..2], ["ddr", "5"]);
    let frames: u64 = fields[2].parse().unwrap();
    assert!((1..=3).contains(&frames));
    assert_eq!(fields[3].parse::<u64>().unwrap(), frames * 2048);
    assert!(lines.iter().filter(|l| l.starts_with("tr,")).all(|l| l.ends_with(',')));
}

#[test]
fn simulate_output_is_independent_of_workers() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, workers) in [(&a, "1"), (&b, "3")] {
        let out = bin(&[&["simulate", "--workers", workers, "--out", path.to_str().unwrap()], SMALL].concat());
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "m = 16\nn = 8\nreceivers = [\"dp\"]\nmodulation = \"bpsk\"\n").unwrap();
    let out = bin(&["simulate", "--config", cfg.to_str().unwrap(), "--snr", "10:10:1", "--frames", "2", "--antennas", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().starts_with("dp,10,2,256,"));
}

#[test]
fn analyze_emits_summary_rows() {
    let out = bin(&["analyze", "--snr", "10:10:1", "--frames", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("snr_db,realizations,"));
    assert!(lines[1].starts_with("10,20,"));
}

#[test]
fn exit_codes() {
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
    assert_eq!(bin(&["--version"]).status.code(), Some(0));
    assert_eq!(bin(&["simulate", "--bogus"]).status.code(), Some(1));
    assert_eq!(bin(&["simulate", "--receivers", "ddr,xyz"]).status.code(), Some(1));
    assert_eq!(bin(&["simulate", "--snr", "0:10"]).status.code(), Some(1));
    assert_eq!(bin(&["simulate", "--config", "/nonexistent/run.toml"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let unwritable = dir.path().join("missing").join("out.csv");
    let out = bin(&[&["simulate", "--out", unwritable.to_str().unwrap()], SMALL].concat());
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}
