//! Delimited-text inputs and report outputs.
//!
//! Responses file, one row per (participant, forecast):
//!
//! ```text
//! participant_id,forecast_id,car_trip,day_hike,mountaineering,backcountry_skiing,single_night_camping,multi_night_camping
//! ```
//!
//! Participants file, one row per participant:
//!
//! ```text
//! participant_id,condition,grips_score,mentioned_per_day_info,mentioned_summary_only_info
//! ```
//!
//! An empty rating cell is a missing answer. Booleans accept
//! `true`/`false`, `yes`/`no` and `1`/`0`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::Read;

use super::{Activity, ResponseRecord, StatsError, StatsReport};
use crate::render::LayoutCondition;

#[derive(Debug, Clone, PartialEq)]
pub struct Participant {
    pub participant_id: String,
    pub condition: LayoutCondition,
    pub grips_score: f64,
    pub mentioned_per_day_info: bool,
    pub mentioned_summary_only_info: bool,
}

/// A response row before it is joined with its participant.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseRow {
    pub participant_id: String,
    pub forecast_id: String,
    pub ratings: [Option<f64>; 6],
}

const PARTICIPANT_COLUMNS: [&str; 5] = [
    "participant_id",
    "condition",
    "grips_score",
    "mentioned_per_day_info",
    "mentioned_summary_only_info",
];

fn input_err(origin: &str, message: impl Into<String>) -> StatsError {
    StatsError::Input {
        origin: origin.to_string(),
        message: message.into(),
    }
}

struct Table {
    columns: BTreeMap<String, usize>,
    rows: Vec<(u64, csv::StringRecord)>,
}

impl Table {
    fn read<R: Read>(reader: R, origin: &str, required: &[&str]) -> Result<Self, StatsError> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| input_err(origin, e.to_string()))?
            .clone();
        let mut columns = BTreeMap::new();
        for (i, h) in headers.iter().enumerate() {
            if h.is_empty() {
                continue;
            }
            if !required.contains(&h) {
                return Err(input_err(origin, format!("unknown column '{h}'")));
            }
            if columns.insert(h.to_string(), i).is_some() {
                return Err(input_err(origin, format!("duplicate column '{h}'")));
            }
        }
        if columns.is_empty() {
            return Err(StatsError::NoRecords);
        }
        if let Some(missing) = required.iter().find(|c| !columns.contains_key(**c)) {
            return Err(input_err(origin, format!("missing column '{missing}'")));
        }
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| input_err(origin, e.to_string()))?;
            let line = rec.position().map_or(0, |p| p.line());
            rows.push((line, rec));
        }
        Ok(Self { columns, rows })
    }

    fn cell<'r>(&self, rec: &'r csv::StringRecord, column: &str) -> &'r str {
        rec.get(self.columns[column]).unwrap_or("")
    }
}

fn parse_bool(s: &str) -> Option<bool> {
    match s.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Some(true),
        "false" | "no" | "0" => Some(false),
        _ => None,
    }
}

pub fn read_responses<R: Read>(reader: R, origin: &str) -> Result<Vec<ResponseRow>, StatsError> {
    let mut required = vec!["participant_id", "forecast_id"];
    required.extend(Activity::ALL.iter().map(|a| a.column()));
    let table = Table::read(reader, origin, &required)?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(table.rows.len());
    for (line, rec) in &table.rows {
        let at = format!("{origin}:{line}");
        let participant_id = table.cell(rec, "participant_id").to_string();
        let forecast_id = table.cell(rec, "forecast_id").to_string();
        if participant_id.is_empty() || forecast_id.is_empty() {
            return Err(input_err(&at, "empty participant_id or forecast_id"));
        }
        if !seen.insert((participant_id.clone(), forecast_id.clone())) {
            return Err(input_err(
                &at,
                format!("duplicate response for participant '{participant_id}', forecast '{forecast_id}'"),
            ));
        }
        let mut ratings = [None; 6];
        for (slot, activity) in ratings.iter_mut().zip(Activity::ALL) {
            let raw = table.cell(rec, activity.column());
            if raw.is_empty() {
                continue;
            }
            let v: f64 = raw
                .parse()
                .map_err(|_| input_err(&at, format!("{activity}: '{raw}' is not a number")))?;
            *slot = Some(v);
        }
        out.push(ResponseRow {
            participant_id,
            forecast_id,
            ratings,
        });
    }
    Ok(out)
}

pub fn read_participants<R: Read>(reader: R, origin: &str) -> Result<Vec<Participant>, StatsError> {
    let table = Table::read(reader, origin, &PARTICIPANT_COLUMNS)?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(table.rows.len());
    for (line, rec) in &table.rows {
        let at = format!("{origin}:{line}");
        let participant_id = table.cell(rec, "participant_id").to_string();
        if participant_id.is_empty() {
            return Err(input_err(&at, "empty participant_id"));
        }
        if !seen.insert(participant_id.clone()) {
            return Err(input_err(&at, format!("duplicate participant '{participant_id}'")));
        }
        let condition = table
            .cell(rec, "condition")
            .parse::<LayoutCondition>()
            .map_err(|e| input_err(&at, e.to_string()))?;
        let raw = table.cell(rec, "grips_score");
        let grips_score: f64 = raw
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| input_err(&at, format!("grips_score: '{raw}' is not a number")))?;
        let flag = |col: &str| {
            let raw = table.cell(rec, col);
            parse_bool(raw).ok_or_else(|| input_err(&at, format!("{col}: '{raw}' is not a boolean")))
        };
        out.push(Participant {
            participant_id,
            condition,
            grips_score,
            mentioned_per_day_info: flag("mentioned_per_day_info")?,
            mentioned_summary_only_info: flag("mentioned_summary_only_info")?,
        });
    }
    Ok(out)
}

/// Attaches each response row to its participant.
pub fn join_records(
    responses: &[ResponseRow],
    participants: &[Participant],
) -> Result<Vec<ResponseRecord>, StatsError> {
    if responses.is_empty() {
        return Err(StatsError::NoRecords);
    }
    let by_id: BTreeMap<&str, &Participant> = participants
        .iter()
        .map(|p| (p.participant_id.as_str(), p))
        .collect();
    responses
        .iter()
        .map(|r| {
            let p = by_id.get(r.participant_id.as_str()).ok_or_else(|| {
                input_err(
                    "participants",
                    format!("no participant row for '{}'", r.participant_id),
                )
            })?;
            Ok(ResponseRecord {
                participant_id: r.participant_id.clone(),
                condition: p.condition,
                forecast_id: r.forecast_id.clone(),
                activity_ratings: r.ratings,
                grips_score: p.grips_score,
                mentioned_per_day_info: p.mentioned_per_day_info,
                mentioned_summary_only_info: p.mentioned_summary_only_info,
            })
        })
        .collect()
}

fn p_text(p: f64) -> String {
    if p < 0.0001 {
        "< 0.0001".to_string()
    } else {
        format!("= {p:.4}")
    }
}

/// Human-readable report.
pub fn text_report(report: &StatsReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "Perceived risk by forecast design ({} participants, {} responses)\n",
        report.participants, report.records
    );
    let _ = writeln!(s, "{:<16} {:>4} {:>9} {:>9} {:>21}", "condition", "n", "M", "SD", "95% CI");
    for g in &report.groups {
        let _ = writeln!(
            s,
            "{:<16} {:>4} {:>9.2} {:>9.2} [{:>8.2}, {:>8.2}]",
            g.condition.as_str(),
            g.n,
            g.mean,
            g.sd,
            g.ci95_low,
            g.ci95_high
        );
    }
    let a = &report.anova;
    let _ = writeln!(
        s,
        "\nOne-way ANOVA: F({}, {}) = {:.3}, p {}",
        a.df_between,
        a.df_within,
        a.f,
        p_text(a.p)
    );
    let _ = writeln!(s, "\nPairwise t tests (Bonferroni, {} comparisons):", report.pairwise.len());
    for t in &report.pairwise {
        let _ = writeln!(
            s,
            "  {} vs {}: t({}) = {:.3}, p {}, adjusted p {}",
            t.group_a,
            t.group_b,
            t.df,
            t.t,
            p_text(t.p_raw),
            p_text(t.p_adjusted)
        );
    }
    let r = &report.regression;
    let _ = writeln!(
        s,
        "\nRisk propensity regression: slope = {:.4}, R² = {:.4}, p {}",
        r.slope,
        r.r_squared,
        p_text(r.p)
    );
    let c = &report.coding;
    let _ = writeln!(s, "\nMentions of per-period information: {}", c.overall.per_day_info);
    let _ = writeln!(s, "Mentions of summary-only information: {}", c.overall.summary_only_info);
    for (cond, rates) in &c.per_condition {
        let _ = writeln!(
            s,
            "  {:<16} per-period {}; summary-only {}",
            cond.as_str(),
            rates.per_day_info,
            rates.summary_only_info
        );
    }
    s
}

/// Group means with confidence bounds, one row per condition.
pub fn plot_csv(report: &StatsReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let _ = w.write_record(["condition", "n", "mean", "ci95_low", "ci95_high"]);
    for g in &report.groups {
        let _ = w.write_record([
            g.condition.as_str().to_string(),
            g.n.to_string(),
            format!("{:.6}", g.mean),
            format!("{:.6}", g.ci95_low),
            format!("{:.6}", g.ci95_high),
        ]);
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv output is UTF-8")
}
