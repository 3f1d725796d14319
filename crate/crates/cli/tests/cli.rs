//! End-to-end runs of the binary, including fault injection.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BIN: &str = env!("CARGO_BIN_EXE_hazcast");

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(format!("{name}.txt"))
}

fn tables_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/assets/scales")
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Asserts the exit code and a single diagnostic line containing `needle`.
fn assert_fails(o: &Output, code: i32, needle: &str) {
    let err = stderr(o);
    assert_eq!(o.status.code(), Some(code), "stderr: {err}");
    assert_eq!(err.lines().count(), 1, "one diagnostic line: {err}");
    assert!(err.starts_with("hazcast: input-error: "), "{err}");
    assert!(err.contains(needle), "expected '{needle}' in: {err}");
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

const ACTIVITIES: &str =
    "car_trip,day_hike,mountaineering,backcountry_skiing,single_night_camping,multi_night_camping";

/// Writes a small balanced study: four conditions, five participants each,
/// two forecasts per participant.
fn write_study(dir: &Path) -> (PathBuf, PathBuf) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let conditions = ["baseline", "summary-last", "icons", "per-day-icons"];
    let mut responses = format!("participant_id,forecast_id,{ACTIVITIES}\n");
    let mut participants = String::from(
        "participant_id,condition,grips_score,mentioned_per_day_info,mentioned_summary_only_info\n",
    );
    for (c, condition) in conditions.iter().enumerate() {
        for i in 0..5 {
            let id = format!("p{c}{i}");
            participants.push_str(&format!(
                "{id},{condition},{:.1},{},{}\n",
                rng.random_range(1.0..5.0),
                rng.random_bool(0.5),
                rng.random_bool(0.5)
            ));
            for f in ["severe-day", "calm-clear"] {
                let ratings: Vec<String> = (0..6)
                    .map(|_| format!("{}", rng.random_range(0..=100) / 2 + 10 * c as i32))
                    .collect();
                responses.push_str(&format!("{id},{f},{}\n", ratings.join(",")));
            }
        }
    }
    let r = dir.join("responses.csv");
    let p = dir.join("participants.csv");
    fs::write(&r, responses).unwrap();
    fs::write(&p, participants).unwrap();
    (r, p)
}

#[test]
fn classify_severe_day_lists_four_icons() {
    let o = run(&["classify", path(&fixture("severe-day"))]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("# hazcast icons v1\n"));
    assert_eq!(out.lines().filter(|l| l.starts_with("icon\t")).count(), 4);
}

#[test]
fn classify_per_period_covers_every_period() {
    let o = run(&["classify", "--mode", "per-period", path(&fixture("calm-clear"))]);
    assert!(o.status.success(), "{}", stderr(&o));
    let scopes: std::collections::BTreeSet<String> = stdout(&o)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split('\t').nth(1).unwrap().to_string())
        .collect();
    assert_eq!(scopes.len(), 4);
}

#[test]
fn classify_with_thresholds_adds_advisory() {
    let dir = tempfile::tempdir().unwrap();
    let th = dir.path().join("triad.toml");
    fs::write(&th, "wind_mph = 50\ntemperature_f = 0\n").unwrap();
    let o = run(&["classify", path(&fixture("severe-day")), "--thresholds", path(&th)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let advisory: Vec<&str> = out.lines().filter(|l| l.starts_with("advisory\t")).collect();
    assert_eq!(advisory.len(), 1);
    assert!(advisory[0].starts_with("advisory\toverall\t"));
}

#[test]
fn malformed_thresholds_are_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let th = dir.path().join("triad.toml");
    fs::write(&th, "wind_mph = \"fast\"\n").unwrap();
    let o = run(&["classify", path(&fixture("severe-day")), "--thresholds", path(&th)]);
    assert_fails(&o, 1, "invalid triad thresholds");
}

#[test]
fn parse_emits_canonical_that_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("doc.toml");
    let o = run(&["parse", path(&fixture("flood-thaw")), "--out", path(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let again = dir.path().join("again.toml");
    let o = run(&["parse", path(&out), "--out", path(&again)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read(&out).unwrap(), fs::read(&again).unwrap());
}

#[test]
fn render_is_deterministic_and_writes_manifest() {
    let dir = tempfile::tempdir().unwrap();
    for n in ["a", "b"] {
        let o = run(&[
            "render",
            path(&fixture("mixed-transition")),
            "--condition",
            "per-day-icons",
            "--format",
            "svg",
            "--out",
            path(&dir.path().join(format!("{n}.svg"))),
            "--manifest",
            path(&dir.path().join(format!("{n}.tsv"))),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let a = fs::read(dir.path().join("a.svg")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b.svg")).unwrap());
    assert!(a.starts_with(b"<svg"));
    let manifest = fs::read_to_string(dir.path().join("a.tsv")).unwrap();
    assert!(manifest.starts_with("# hazcast manifest v1\n"));
    assert!(manifest.contains("period-1-icons"));
}

#[test]
fn stimuli_writes_set_and_index() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("set");
    let o = run(&[
        "stimuli",
        path(&fixture("severe-day")),
        path(&fixture("calm-clear")),
        "--condition",
        "icons",
        "--format",
        "plain",
        "--out",
        path(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let index = fs::read_to_string(out.join("index.tsv")).unwrap();
    let files: Vec<&str> = index
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("position"))
        .map(|l| l.split('\t').nth(2).unwrap())
        .collect();
    assert_eq!(files, ["01-severe-day.icons.txt", "02-calm-clear.icons.txt"]);
    for f in files {
        assert!(out.join(f).is_file());
    }
}

#[test]
fn stats_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let (r, p) = write_study(dir.path());
    let out = dir.path().join("report");
    let o = run(&["stats", "--responses", path(&r), "--participants", path(&p), "--out", path(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(json["participants"], 20);
    assert_eq!(json["anova"]["df_between"], 3.0);
    assert_eq!(json["anova"]["df_within"], 16.0);
    let plot = fs::read_to_string(out.join("plot.csv")).unwrap();
    assert_eq!(plot.lines().count(), 5);
    assert!(out.join("report.txt").is_file());

    let o2 = run(&["stats", "--responses", path(&r), "--participants", path(&p)]);
    assert_eq!(stdout(&o2), fs::read_to_string(out.join("report.txt")).unwrap());
}

#[test]
fn validate_shipped_tables() {
    let o = run(&["validate-tables", "--tables", path(&tables_dir())]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("ok\t")).count(), 4);
}

// Fault injection

#[test]
fn unknown_condition_names_valid_ones() {
    let o = run(&["render", path(&fixture("severe-day")), "--condition", "fancy"]);
    assert_fails(&o, 1, "valid conditions: baseline, summary-last, icons, per-day-icons");
}

#[test]
fn unknown_format_and_mode() {
    let o = run(&["render", path(&fixture("severe-day")), "--condition", "icons", "--format", "pdf"]);
    assert_fails(&o, 1, "valid formats: svg, html, plain");
    let o = run(&["classify", path(&fixture("severe-day")), "--mode", "daily"]);
    assert_fails(&o, 1, "valid modes: overall, per-period");
}

#[test]
fn missing_subcommand_and_arguments() {
    assert_fails(&run(&[]), 1, "valid subcommands");
    assert_fails(&run(&["render", path(&fixture("severe-day"))]), 1, "--condition");
}

#[test]
fn missing_input_files() {
    let dir = tempfile::tempdir().unwrap();
    let gone = dir.path().join("gone.txt");
    for args in [
        vec!["parse", path(&gone)],
        vec!["classify", path(&gone)],
        vec!["render", path(&gone), "--condition", "baseline"],
        vec!["stimuli", path(&gone), "--condition", "baseline", "--out", path(dir.path())],
        vec!["stats", "--responses", path(&gone), "--participants", path(&gone)],
    ] {
        assert_fails(&run(&args), 1, "gone.txt");
    }
}

#[test]
fn unparseable_forecast() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "Nothing here resembles a forecast.\n").unwrap();
    assert_fails(&run(&["parse", path(&bad)]), 1, "bad.txt");
    fs::write(&bad, "").unwrap();
    assert_fails(&run(&["parse", path(&bad)]), 1, "empty input");
    fs::write(&bad, "schema_version = 1\nsource_id = 3\n").unwrap();
    assert_fails(&run(&["classify", path(&bad)]), 1, "bad.txt");
}

fn copy_tables(dir: &Path) {
    for e in fs::read_dir(tables_dir()).unwrap() {
        let e = e.unwrap();
        fs::copy(e.path(), dir.join(e.file_name())).unwrap();
    }
}

#[test]
fn malformed_tables() {
    let dir = tempfile::tempdir().unwrap();
    copy_tables(dir.path());
    let beaufort = dir.path().join("beaufort.toml");
    let original = fs::read_to_string(&beaufort).unwrap();

    fs::write(&beaufort, "this is [not toml").unwrap();
    for args in [
        vec!["validate-tables", "--tables", path(dir.path())],
        vec!["classify", path(&fixture("severe-day")), "--tables", path(dir.path())],
        vec!["render", path(&fixture("severe-day")), "--condition", "icons", "--tables", path(dir.path())],
    ] {
        assert_fails(&run(&args), 1, "beaufort.toml");
    }

    let gapped = original.replacen("low = 1", "low = 2", 1);
    assert_ne!(gapped, original, "fixture edit applies");
    fs::write(&beaufort, gapped).unwrap();
    assert_fails(&run(&["validate-tables", "--tables", path(dir.path())]), 1, "integrity");

    fs::remove_file(&beaufort).unwrap();
    assert_fails(&run(&["validate-tables", "--tables", path(dir.path())]), 1, "beaufort.toml");
}

#[test]
fn out_of_range_rating() {
    let dir = tempfile::tempdir().unwrap();
    let (r, p) = write_study(dir.path());
    let text = fs::read_to_string(&r).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    lines[1] = "p00,severe-day,10,20,130,40,50,60".into();
    fs::write(&r, lines.join("\n")).unwrap();
    let o = run(&["stats", "--responses", path(&r), "--participants", path(&p)]);
    assert_fails(&o, 1, "outside [0, 100]");
}

#[test]
fn malformed_stats_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let (r, p) = write_study(dir.path());
    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "").unwrap();
    assert_fails(&run(&["stats", "--responses", path(&empty), "--participants", path(&p)]), 1, "no records");

    let header_only = dir.path().join("header.csv");
    fs::write(&header_only, format!("participant_id,forecast_id,{ACTIVITIES}\n")).unwrap();
    assert_fails(&run(&["stats", "--responses", path(&header_only), "--participants", path(&p)]), 1, "no records");

    let text = fs::read_to_string(&p).unwrap().replace(",icons,", ",pictures,");
    let bad_p = dir.path().join("bad_p.csv");
    fs::write(&bad_p, text).unwrap();
    assert_fails(&run(&["stats", "--responses", path(&r), "--participants", path(&bad_p)]), 1, "bad_p.csv");

    let orphan = dir.path().join("orphan.csv");
    fs::write(&orphan, format!("participant_id,forecast_id,{ACTIVITIES}\nzz,f,1,2,3,4,5,6\n")).unwrap();
    assert_fails(&run(&["stats", "--responses", path(&orphan), "--participants", path(&p)]), 1, "no participant row for 'zz'");
}

#[test]
fn unwritable_output() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = blocker.join("sub.txt");
    let o = run(&["parse", path(&fixture("calm-clear")), "--out", path(&out)]);
    assert_fails(&o, 1, "sub.txt");
}
