use std::path::PathBuf;
use std::process::Command;

fn data(name: &str) -> String {
    format!("{}/../core/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn fcc(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_fcc")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

/// CSV body without the `#` header.
fn body(s: &str) -> Vec<&str> {
    s.lines().filter(|l| !l.starts_with('#')).collect()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fcc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn drm_matches_fixture() {
    let (code, out, _) = fcc(&["drm", "--func", &data("f_1110_0110.fn"), "--t", "2"]);
    assert_eq!(code, 0);
    let want = std::fs::read_to_string(data("drm_t2_1110_0110.txt")).unwrap();
    let want: Vec<String> = want.lines().map(|l| l.split_whitespace().collect::<Vec<_>>().join(",")).collect();
    assert_eq!(body(&out), want);
}

#[test]
fn output_header_records_the_run() {
    let (_, out, _) = fcc(&["fdm", "--matrix", "1110;0110", "--t", "2", "--budget-nodes", "1000"]);
    let header: Vec<&str> = out.lines().take_while(|l| l.starts_with('#')).collect();
    assert!(header[0].starts_with("# fcc "));
    assert!(header[1].contains("fdm --matrix 1110;0110"));
    assert!(header[2].contains("nodes=1000"));
    assert_eq!(header[3], "# classes: 00 11 10 01");
    assert_eq!(body(&out), ["0,4,4,3", "4,0,3,4", "4,3,0,4", "3,4,4,0"]);
}

#[test]
fn json_output() {
    let (code, out, _) = fcc(&["fdm", "--matrix", "1110;0110", "--t", "2", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rows"][0], serde_json::json!([0, 4, 4, 3]));
    assert_eq!(v["labels"][1], "11");
    assert!(v["header"].is_array());
}

#[test]
fn construct_verify_decode_round_trip() {
    let enc = tmp("ternary.enc");
    let f = data("f_220_111.fn");
    let (code, _, err) = fcc(&[
        "construct",
        "--func",
        &f,
        "--parity",
        &data("parity_493_ternary.txt"),
        "--out",
        enc.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let (code, out, _) = fcc(&["verify", "--func", &f, "--encoder", enc.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(body(&out), ["valid,a,b,distance", "true,,,"]);
    // message 100 has f = 21 and parity 11; flip one symbol
    let (code, out, _) = fcc(&["decode", "--func", &f, "--encoder", enc.to_str().unwrap(), "--word", "10012"]);
    assert_eq!(code, 0);
    assert!(body(&out)[1].starts_with("true,21,"), "{out}");
}

#[test]
fn construct_without_a_source_uses_the_fdm() {
    let (code, out, _) = fcc(&["construct", "--matrix", "1110;0110", "--t", "1"]);
    assert_eq!(code, 0);
    assert!(body(&out)[0].starts_with("2 4 3 1"));
}

#[test]
fn verify_rejects_a_bad_encoder() {
    let enc = tmp("bad.enc");
    std::fs::write(&enc, "2 2 1 1\n0 0\n1 1\n2 1\n3 0\n").unwrap();
    let (code, out, _) = fcc(&["verify", "--matrix", "11", "--encoder", enc.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(body(&out)[1].starts_with("false,0,1,"));
}

#[test]
fn alpha_decision_and_exact() {
    let (code, out, _) = fcc(&["alpha", "--matrix", "11", "--t", "1", "--r", "1", "--target", "4"]);
    assert_eq!(code, 1);
    assert_eq!(body(&out)[1], "1,1,4,below,");
    let (code, out, _) = fcc(&["alpha", "--matrix", "011;110", "--t", "1"]);
    assert_eq!(code, 0);
    assert_eq!(body(&out)[1], "1,0,,exact,2");
}

#[test]
fn nq_from_matrix_file() {
    let dm = tmp("d.csv");
    std::fs::write(&dm, "0,3,3,3\n3,0,3,3\n3,3,0,3\n3,3,3,0\n").unwrap();
    let (code, out, _) = fcc(&["nq", "--dm", dm.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("# length: 5"));
}

#[test]
fn spectrum_bound_trace() {
    let (code, out, _) = fcc(&["spectrum", "--func", &data("f_011_110.fn"), "--r-max", "4"]);
    assert_eq!(code, 0);
    assert!(out.contains("# bound: 3"));
    assert_eq!(body(&out).last().unwrap(), &"3,22,-4,6.5,true");
}

#[test]
fn bounds_report_and_classical_bounds() {
    let (code, out, _) = fcc(&["bounds", "--func", &data("f_1110_0110.fn"), "--t", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("# best lower 3 / best upper 3"), "{out}");
    let (code, out, _) = fcc(&["bounds", "--k", "12", "--d", "7"]);
    assert_eq!(code, 0);
    assert!(body(&out).contains(&"singleton,6,singleton_upper = 64"));
}

#[test]
fn compare_with_range_and_table() {
    let table = tmp("aq.csv");
    std::fs::write(&table, "q,n,d,value,kind\n2,8,4,16,exact\n").unwrap();
    let (code, out, _) = fcc(&["compare", "--d", "4", "--k-range", "4:6", "--aq-table", table.to_str().unwrap()]);
    assert_eq!(code, 0);
    let rows = body(&out);
    assert_eq!(rows[0], "k,r_prime,r_bgs,delta_bgs,delta_blb,delta_bub");
    assert_eq!(rows.len(), 4);
}

#[test]
fn exit_codes_for_errors_and_budgets() {
    let (code, _, err) = fcc(&["drm", "--matrix", "12"]);
    assert_eq!(code, 2, "{err}");
    let (code, _, _) = fcc(&["drm"]);
    assert_eq!(code, 2);
    let (code, _, _) = fcc(&["compare", "--d", "4", "--k-range", "6:4"]);
    assert_eq!(code, 2);
    let (code, _, err) = fcc(&["nq", "--matrix", "1110;0110", "--t", "2", "--budget-nodes", "3"]);
    assert_eq!(code, 3, "{err}");
    assert!(err.contains("budget"));
}
