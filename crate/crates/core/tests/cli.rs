use std::path::Path;
use std::process::{Command, Output};

use clap::Parser;
use freecorr::cli::ExperimentConfig;
use proptest::prelude::*;

fn freecorr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freecorr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn expect_commuting_alternating_word() {
    let o = freecorr(&["expect", "--word", "e(1) e(2) e(1) e(2)", "--stream", "constant:0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(data_lines(&stdout(&o)), vec!["1"]);
}

#[test]
fn law_symbolic_free_expression() {
    let o = freecorr(&["law", "--law", "free", "--word", "A_1 B_2 C_1 D_2", "--marginals", "symbolic"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        data_lines(&stdout(&o)),
        vec!["<A><BD><C> + <AC><B><D> - <A><B><C><D>"]
    );
}

#[test]
fn law_with_marginal_table() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("m.txt");
    std::fs::write(&table, "# two observables\nA = 0.5\nB = 0,1\nA C = 2\nC = 1\n").unwrap();
    let o = freecorr(&["law", "--law", "tensor", "--word", "A_1 B_2 C_1", "--marginals", table.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(data_lines(&stdout(&o)), vec!["re,im", "0.0,2.0"]);

    let missing = freecorr(&["law", "--law", "tensor", "--word", "D_1", "--marginals", table.to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(stderr(&missing).contains("<D>"));
}

#[test]
fn verify_reports_matches() {
    let o = freecorr(&["verify", "--words", "100", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(data_lines(&stdout(&o)), vec!["100/100 oracle matches"]);
}

#[test]
fn bad_word_exits_two_with_token_and_position() {
    let o = freecorr(&["law", "--law", "free", "--word", "A_1 B_x", "--marginals", "symbolic"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("position 6"), "{err}");
    assert!(err.contains('x'), "{err}");

    let o = freecorr(&["expect", "--word", "e(1) f(2)", "--stream", "constant:0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("position 5"), "{}", stderr(&o));

    let o = freecorr(&["fluct", "--law", "shift:periodic:2", "--N", "4", "--max-moment", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("position 15"), "{}", stderr(&o));
}

#[test]
fn mode_bounds_exit_two() {
    let o = freecorr(&["fluct", "--law", "free", "--N", "10", "--max-moment", "13"]);
    assert_eq!(o.status.code(), Some(2));
    let o = freecorr(&["fluct", "--law", "shift:thue-morse", "--N", "51", "--max-moment", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cesaro_csv_and_plot_script() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c.csv");
    let o = freecorr(&[
        "cesaro", "--pattern", "1212", "--stream", "constant:1", "--horizons", "10,100,1000",
        "--output", csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines = data_lines(&text);
    assert_eq!(lines[0], "T,estimate,delta");
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first[0], "10");
    assert!((first[1].parse::<f64>().unwrap() - (2.0 / 11.0 - 1.0)).abs() < 1e-12);
    assert_eq!(first[2], "");
    assert_eq!(lines.len(), 4);

    let header = text.lines().next().unwrap();
    let config = ExperimentConfig::from_header(header).unwrap();
    assert_eq!(config.output.as_deref(), Some(csv.as_path()));

    let script = freecorr(&["plot", "--csv", csv.to_str().unwrap()]);
    assert_eq!(script.status.code(), Some(0));
    let s = stdout(&script);
    assert!(s.contains("logscale x") && s.contains(csv.to_str().unwrap()));
}

#[test]
fn plot_rejects_unknown_schema() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "x,y\n1,2\n").unwrap();
    assert_eq!(freecorr(&["plot", "--csv", bad.to_str().unwrap()]).status.code(), Some(2));
    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "").unwrap();
    assert_eq!(freecorr(&["plot", "--csv", empty.to_str().unwrap()]).status.code(), Some(2));
}

fn write_obs(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn koopman_matches_prediction() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_obs(dir.path(), "a.obs", "mode 0 = 0.8\nmode 1 = 0.3,0.1\nmode -2 = 0.2\n");
    let b = write_obs(dir.path(), "b.obs", "ket mode 0 = 0.5,0.5\nket mode 3 = 1\nbra mode 0 = 0.7\nbra mode -1 = 0,0.4\n");
    let c = write_obs(dir.path(), "c.obs", "mode 0 = 0.6\nmode -2 = -0.4\n");
    let ops = format!("{a},{b},{c}");
    let o = freecorr(&["koopman", "--pattern", "121", "--ops", &ops, "--horizons", "16,32,64"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let lines = data_lines(&text);
    assert!(lines[0].starts_with("T,estimate_re,estimate_im,prediction_re,prediction_im,error"));
    for row in &lines[1..] {
        let error: f64 = row.split(',').nth(5).unwrap().parse().unwrap();
        assert!(error < 1e-12, "{row}");
    }
    let prediction: f64 = lines[1].split(',').nth(3).unwrap().parse().unwrap();
    assert!(prediction.abs() > 1e-3);
}

#[test]
fn fluct_free_rows_and_json() {
    let o = freecorr(&["fluct", "--law", "free", "--N", "1000", "--max-moment", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines = data_lines(&text);
    assert_eq!(lines[0], "m,value,gaussian_ref,semicircle_ref");
    assert_eq!(lines.len(), 9);
    let m4: Vec<f64> = lines[4].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(m4[0], 4.0);
    assert!((m4[1] - 1.999).abs() < 1e-9);
    assert_eq!(m4[2], 3.0);
    assert_eq!(m4[3], 2.0);
    assert!(text.contains("\"label\":\"semicircle\""));

    let j = freecorr(&["fluct", "--law", "free-shift", "--N", "10", "--max-moment", "4", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&j)).unwrap();
    assert_eq!(doc["config"]["command"]["subcommand"], "fluct");
    let value = doc["rows"][3]["value"].as_f64().unwrap();
    assert!((value - 1.9).abs() < 1e-12, "{value}");
}

#[test]
fn output_is_identical_across_thread_counts() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_freecorr"))
            .env("FREECORR_THREADS", threads)
            .args([
                "cesaro", "--pattern", "e_1 e_2 e_1 e_2", "--stream", "bernoulli:0.5:seed=9", "--horizons", "100,400",
            ])
            .output()
            .unwrap()
            .stdout
    };
    let one = run("1");
    assert_eq!(one, run("2"));
    assert_eq!(one, run("8"));
    assert_eq!(one, run("1"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn config_header_round_trips(
        word in "[A-C]_[1-3]( [A-C]_[1-3]){0,4}",
        n in 1u64..1000,
        m in 1u32..12,
        horizons in prop::collection::vec(1u64..10_000, 1..4),
        json in any::<bool>(),
    ) {
        let h: Vec<String> = horizons.iter().map(|x| x.to_string()).collect();
        let h = h.join(",");
        let n_text = n.to_string();
        let m_text = m.to_string();
        let format = if json { "json" } else { "csv" };
        let variants: Vec<Vec<&str>> = vec![
            vec!["law", "--law", "koopman", "--word", &word, "--marginals", "symbolic"],
            vec!["fluct", "--law", "tensor", "--N", &n_text, "--max-moment", &m_text],
            vec!["cesaro", "--pattern", "121", "--stream", "thue-morse", "--horizons", &h, "--min-gap", "2"],
            vec!["verify", "--words", &n_text, "--seed", &m_text],
        ];
        for mut args in variants {
            args.insert(0, "freecorr");
            args.extend(["--format", format]);
            let config = ExperimentConfig::try_parse_from(&args).unwrap();
            prop_assert_eq!(ExperimentConfig::from_header(&config.header()).unwrap(), config);
        }
    }
}
