use std::io::Write;
use std::process::{Command, Output};

fn levygof(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_levygof"))
        .args(args)
        .env_remove("LEVYGOF_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn rainfall_r_rejects() {
    let o = levygof(&["test", "--data", "rainfall", "--stat", "R", "--a", "0.5", "--estimator", "mle", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert!(v["p_value"].as_f64().unwrap() < 0.005);
    assert_eq!(v["reject"], true);
}

#[test]
fn hillside_r5_retains() {
    let o = levygof(&["test", "--data", "hillside", "--stat", "R", "--a", "5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let p = json(&o)["p_value"].as_f64().unwrap();
    assert!(p > 0.4 && p < 0.6, "{p}");
}

#[test]
fn hillside_j1_mbe() {
    let o = levygof(&["test", "--data", "hillside", "--stat", "J", "--a", "1", "--estimator", "mbe", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let p = json(&o)["p_value"].as_f64().unwrap();
    assert!((p - 0.014).abs() <= 0.006, "{p}");
}

#[test]
fn seeded_runs_are_byte_identical() {
    let args = ["test", "--data", "hillside", "--stat", "J,R", "--reps", "500", "--seed", "99"];
    let a = levygof(&args);
    let b = levygof(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
    let env = Command::new(env!("CARGO_BIN_EXE_levygof"))
        .args(["test", "--data", "hillside", "--stat", "J,R", "--reps", "500"])
        .env("LEVYGOF_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);
    let other = levygof(&["test", "--data", "hillside", "--stat", "J,R", "--reps", "500", "--seed", "100"]);
    assert_ne!(other.stdout, a.stdout);
}

#[test]
fn file_input_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.csv");
    let mut f = std::fs::File::create(&good).unwrap();
    writeln!(f, "yield").unwrap();
    for v in [0.5, 1.2, 3.3, 0.9, 12.0, 2.2, 0.7, 5.1] {
        writeln!(f, "{v}").unwrap();
    }
    drop(f);
    let o = levygof(&["test", "--input", good.to_str().unwrap(), "--stat", "KS", "--reps", "200", "--format", "json"]);
    assert!(matches!(o.status.code(), Some(0 | 1)));
    assert_eq!(json(&o)["n"], 8);

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "1.0\n2.0\nfoo\n").unwrap();
    let o = levygof(&["test", "--input", bad.to_str().unwrap(), "--stat", "J"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    std::fs::write(&bad, "1.0\n-2.0\n").unwrap();
    let o = levygof(&["test", "--input", bad.to_str().unwrap(), "--stat", "J"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(levygof(&["test", "--data", "rainfall", "--stat", "nope"]).status.code(), Some(2));
    assert_eq!(levygof(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(levygof(&["test", "--data", "rainfall", "--stat", "J", "--alpha", "2"]).status.code(), Some(2));
    assert_eq!(levygof(&["power", "--alt", "W(2)", "--reps", "10"]).status.code(), Some(2));
}

#[test]
fn critvals_csv_and_json_agree() {
    let base = ["critvals", "--stat", "R,N1a", "--a", "1", "--n", "20,30", "--reps", "300", "--seed", "5"];
    let csv_out = levygof(&[&base[..], &["--format", "csv"]].concat());
    let json_out = levygof(&[&base[..], &["--format", "json"]].concat());
    let v = json(&json_out);
    let rows = v["rows"].as_array().unwrap();
    let mut rdr = csv::Reader::from_reader(csv_out.stdout.as_slice());
    let recs: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(recs.len(), rows.len());
    assert_eq!(recs.len(), 4);
    for (rec, row) in recs.iter().zip(rows) {
        assert_eq!(rec[0].parse::<u64>().unwrap(), row["n"].as_u64().unwrap());
        assert_eq!(&rec[2], row["statistic"].as_str().unwrap());
        assert_eq!(rec[4].parse::<f64>().unwrap(), row["upper"].as_f64().unwrap());
        match row["lower"].as_f64() {
            Some(lo) => assert_eq!(rec[3].parse::<f64>().unwrap(), lo),
            None => assert!(rec[3].is_empty()),
        }
    }
}

#[test]
fn power_csv_and_json_agree() {
    let base = ["power", "--alt", "W(2,1);LN(0,1)", "--n", "20", "--stat", "KS,R", "--a", "1", "--reps", "200"];
    let v = json(&levygof(&[&base[..], &["--format", "json"]].concat()));
    let csv_out = levygof(&[&base[..], &["--format", "csv"]].concat());
    let mut rdr = csv::Reader::from_reader(csv_out.stdout.as_slice());
    let recs: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    let stats = v["statistics"].as_array().unwrap();
    let mut k = 0;
    for row in v["rows"].as_array().unwrap() {
        for (name, cell) in stats.iter().zip(row["cells"].as_array().unwrap()) {
            let rec = &recs[k];
            assert_eq!(&rec[2], name.as_str().unwrap());
            assert_eq!(rec[3].parse::<f64>().unwrap(), cell["Ok"]["rate"].as_f64().unwrap());
            assert_eq!(rec[4].parse::<f64>().unwrap(), cell["Ok"]["se"].as_f64().unwrap());
            k += 1;
        }
    }
    assert_eq!(k, recs.len());
}

#[test]
fn constants_and_efficiency() {
    let v = json(&levygof(&["constants", "--pairs", "1:2", "--format", "json"]));
    let rows = v.as_array().unwrap();
    let published = [4.58804, 0.267_202_4, 0.020_688_68, 0.001_194_688, 1.925_016e-5];
    for (row, p) in rows.iter().zip(published) {
        assert_eq!(row["name"], "sigma_R2");
        assert!((row["value"].as_f64().unwrap() / p - 1.0).abs() < 1e-4);
    }
    assert_eq!(rows.len(), 7);

    let o = levygof(&["efficiency", "--stat", "J", "--a", "1", "--alt", "g2", "--format", "csv"]);
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let rec = rdr.records().next().unwrap().unwrap();
    let eff: f64 = rec[4].parse().unwrap();
    assert!((eff - 0.66).abs() < 0.01, "{eff}");
    assert_eq!(levygof(&["efficiency", "--alt", "W(2,1)"]).status.code(), Some(2));
}

#[test]
fn datasets_round_trip() {
    let v = json(&levygof(&["datasets", "--name", "rainfall", "--format", "json"]));
    let values: Vec<f64> = v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(values.len(), 31);
    assert_eq!((values[0], values[30]), (29.3, 6.8));
    let csv_out = levygof(&["datasets", "--name", "hillside", "--format", "csv"]);
    let mut rdr = csv::Reader::from_reader(csv_out.stdout.as_slice());
    let hill: Vec<f64> = rdr.records().map(|r| r.unwrap()[0].parse().unwrap()).collect();
    assert_eq!(hill.len(), 41);
    assert!(hill.contains(&0.003) && hill.contains(&7.5));
    let listing = stdout(&levygof(&["datasets"]));
    assert!(listing.contains("rainfall") && listing.contains("hillside"));
}

#[test]
fn curve_dump_has_grid() {
    let o = levygof(&["constants", "--dump-curve", "variance", "--a", "1", "--format", "csv"]);
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let pts: Vec<(f64, f64)> =
        rdr.records().map(|r| r.unwrap()).map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap())).collect();
    assert_eq!(pts.len(), 999);
    let max = pts.iter().map(|p| p.1).fold(0.0, f64::max);
    assert!((max - 0.003_888_89).abs() < 1e-6);
}
