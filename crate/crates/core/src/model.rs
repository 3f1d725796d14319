//! Structured representation of a 48-hour higher-summits forecast.
//!
//! Units are fixed internally: temperatures and wind chills in °F, wind
//! speeds in mph. Anything else is converted at the parse boundary.

use std::fmt;

use chrono::{DateTime, FixedOffset};
use serde::{Deserialize, Serialize};

/// Number of 12-hour periods in a forecast (two days, two nights).
pub const PERIOD_COUNT: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Unit {
    #[serde(rename = "F")]
    Fahrenheit,
    #[serde(rename = "mph")]
    Mph,
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Unit::Fahrenheit => f.write_str("°F"),
            Unit::Mph => f.write_str("mph"),
        }
    }
}

/// Closed numeric range. A point value is stored with `low == high`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueRange {
    pub low: f64,
    pub high: f64,
    pub unit: Unit,
}

impl ValueRange {
    pub fn new(low: f64, high: f64, unit: Unit) -> Self {
        Self { low, high, unit }
    }

    pub fn fahrenheit(low: f64, high: f64) -> Self {
        Self::new(low, high, Unit::Fahrenheit)
    }

    pub fn mph(low: f64, high: f64) -> Self {
        Self::new(low, high, Unit::Mph)
    }

    /// Smallest range containing every value.
    pub fn envelope(values: &[f64], unit: Unit) -> Option<Self> {
        let first = *values.first()?;
        let (low, high) = values
            .iter()
            .fold((first, first), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        Some(Self { low, high, unit })
    }

    fn is_finite(&self) -> bool {
        self.low.is_finite() && self.high.is_finite()
    }
}

/// 16-point compass rose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    N,
    NNE,
    NE,
    ENE,
    E,
    ESE,
    SE,
    SSE,
    S,
    SSW,
    SW,
    WSW,
    W,
    WNW,
    NW,
    NNW,
}

impl Direction {
    pub const ALL: [Direction; 16] = [
        Direction::N,
        Direction::NNE,
        Direction::NE,
        Direction::ENE,
        Direction::E,
        Direction::ESE,
        Direction::SE,
        Direction::SSE,
        Direction::S,
        Direction::SSW,
        Direction::SW,
        Direction::WSW,
        Direction::W,
        Direction::WNW,
        Direction::NW,
        Direction::NNW,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Direction::N => "N",
            Direction::NNE => "NNE",
            Direction::NE => "NE",
            Direction::ENE => "ENE",
            Direction::E => "E",
            Direction::ESE => "ESE",
            Direction::SE => "SE",
            Direction::SSE => "SSE",
            Direction::S => "S",
            Direction::SSW => "SSW",
            Direction::SW => "SW",
            Direction::WSW => "WSW",
            Direction::W => "W",
            Direction::WNW => "WNW",
            Direction::NW => "NW",
            Direction::NNW => "NNW",
        }
    }

    /// Accepts abbreviations ("WNW") and spelled-out words ("northwest",
    /// "west-northwest"), case-insensitively.
    pub fn from_token(token: &str) -> Option<Self> {
        let t = token.to_ascii_uppercase();
        if let Some(d) = Self::ALL.iter().find(|d| d.as_str() == t) {
            return Some(*d);
        }
        let compact: String = t
            .chars()
            .filter(|c| c.is_ascii_alphabetic())
            .collect();
        let abbrev = compact
            .replace("NORTH", "N")
            .replace("SOUTH", "S")
            .replace("EAST", "E")
            .replace("WEST", "W");
        if abbrev.len() == compact.len() {
            // no spelled-out words were present
            return None;
        }
        Self::ALL.iter().copied().find(|d| d.as_str() == abbrev)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindPrediction {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Direction>,
    pub sustained: ValueRange,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gust_high: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrecipKind {
    Snow,
    Sleet,
    FreezingRain,
    Rain,
    Mixed,
}

impl PrecipKind {
    /// Snow, sleet and freezing rain. Plain rain and unspecified mixes are not.
    pub fn is_winter(&self) -> bool {
        matches!(self, PrecipKind::Snow | PrecipKind::Sleet | PrecipKind::FreezingRain)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            PrecipKind::Snow => "snow",
            PrecipKind::Sleet => "sleet",
            PrecipKind::FreezingRain => "freezing rain",
            PrecipKind::Rain => "rain",
            PrecipKind::Mixed => "mixed precipitation",
        }
    }
}

/// Qualitative certainty word carried over from the forecast text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certainty {
    Mentioned,
    Likely,
    Chance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrecipEvent {
    pub kind: PrecipKind,
    pub certainty: Certainty,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForecastPeriod {
    pub label: String,
    pub temperature: ValueRange,
    pub wind: WindPrediction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wind_chill: Option<ValueRange>,
    #[serde(default)]
    pub precip_events: Vec<PrecipEvent>,
    #[serde(default)]
    pub extra_hazard_notes: Vec<String>,
}

impl ForecastPeriod {
    /// True when the label names a night period ("Tonight", "Friday Night").
    pub fn is_night(&self) -> bool {
        is_night_label(&self.label)
    }
}

pub(crate) fn is_night_label(label: &str) -> bool {
    label.to_ascii_lowercase().contains("night")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForecastDocument {
    pub source_id: String,
    pub issued_at: DateTime<FixedOffset>,
    pub summary_text: String,
    pub periods: Vec<ForecastPeriod>,
}

/// One broken invariant: the offending field path and the rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: String,
    pub rule: String,
}

impl Violation {
    fn new(field: impl Into<String>, rule: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            rule: rule.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.rule)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid forecast document: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct InvalidDocument(pub Vec<Violation>);

fn check_range(out: &mut Vec<Violation>, field: &str, range: &ValueRange, unit: Unit) {
    if !range.is_finite() {
        out.push(Violation::new(field, "bounds must be finite"));
        return;
    }
    if range.low > range.high {
        out.push(Violation::new(
            field,
            format!("range order: low {} exceeds high {}", range.low, range.high),
        ));
    }
    if range.unit != unit {
        out.push(Violation::new(field, format!("unit must be {unit}")));
    }
}

/// Checks a single period's invariants. Field paths are prefixed with `prefix`.
pub fn validate_period(period: &ForecastPeriod, prefix: &str) -> Vec<Violation> {
    let mut out = Vec::new();
    if period.label.trim().is_empty() {
        out.push(Violation::new(format!("{prefix}.label"), "label must be non-empty"));
    }
    check_range(
        &mut out,
        &format!("{prefix}.temperature"),
        &period.temperature,
        Unit::Fahrenheit,
    );
    let sustained = &period.wind.sustained;
    check_range(&mut out, &format!("{prefix}.wind.sustained"), sustained, Unit::Mph);
    if sustained.low < 0.0 {
        out.push(Violation::new(
            format!("{prefix}.wind.sustained"),
            "wind speeds must be non-negative",
        ));
    }
    if let Some(gust) = period.wind.gust_high {
        if !gust.is_finite() {
            out.push(Violation::new(format!("{prefix}.wind.gust_high"), "must be finite"));
        } else if gust < sustained.high {
            out.push(Violation::new(
                format!("{prefix}.wind.gust_high"),
                format!("gust {gust} below sustained high {}", sustained.high),
            ));
        }
    }
    if let Some(wc) = &period.wind_chill {
        check_range(&mut out, &format!("{prefix}.wind_chill"), wc, Unit::Fahrenheit);
    }
    out
}

/// Returns every invariant the document breaks; empty when valid.
pub fn validate(doc: &ForecastDocument) -> Vec<Violation> {
    let mut out = Vec::new();
    if doc.summary_text.trim().is_empty() {
        out.push(Violation::new("summary_text", "summary must be non-empty"));
    }
    if doc.periods.len() != PERIOD_COUNT {
        out.push(Violation::new(
            "periods",
            format!(
                "period count: expected {PERIOD_COUNT}, found {}",
                doc.periods.len()
            ),
        ));
    }
    for (i, period) in doc.periods.iter().enumerate() {
        let prefix = format!("periods[{i}]");
        out.extend(validate_period(period, &prefix));
        // day 1, night 1, day 2, night 2
        let want_night = i % 2 == 1;
        if period.is_night() != want_night && !period.label.trim().is_empty() {
            let expected = if want_night { "night" } else { "day" };
            out.push(Violation::new(
                format!("{prefix}.label"),
                format!("chronology: expected a {expected} period, found '{}'", period.label),
            ));
        }
    }
    out
}

pub fn ensure_valid(doc: &ForecastDocument) -> Result<(), InvalidDocument> {
    let violations = validate(doc);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(InvalidDocument(violations))
    }
}

/// Collapses a document into one synthetic period holding the per-field
/// extremes: coldest temperature and wind chill, highest sustained wind and
/// gust, and the union of precipitation events and hazard notes.
pub fn worst_case_view(doc: &ForecastDocument) -> Result<ForecastPeriod, InvalidDocument> {
    ensure_valid(doc)?;
    Ok(worst_case_of(&doc.periods))
}

pub(crate) fn worst_case_of(periods: &[ForecastPeriod]) -> ForecastPeriod {
    let first = &periods[0];
    let mut temperature = first.temperature;
    let mut sustained = first.wind.sustained;
    let mut gust_high: Option<f64> = None;
    let mut wind_chill: Option<ValueRange> = None;
    let mut precip_events: Vec<PrecipEvent> = Vec::new();
    let mut notes: Vec<String> = Vec::new();

    for p in periods {
        temperature.low = temperature.low.min(p.temperature.low);
        temperature.high = temperature.high.min(p.temperature.high).max(temperature.low);
        sustained.high = sustained.high.max(p.wind.sustained.high);
        sustained.low = sustained.low.max(p.wind.sustained.low).min(sustained.high);
        if let Some(g) = p.wind.gust_high {
            gust_high = Some(gust_high.map_or(g, |cur| cur.max(g)));
        }
        if let Some(wc) = p.wind_chill {
            wind_chill = Some(match wind_chill {
                None => wc,
                Some(cur) => {
                    let low = cur.low.min(wc.low);
                    ValueRange::fahrenheit(low, cur.high.min(wc.high).max(low))
                }
            });
        }
        for ev in &p.precip_events {
            if !precip_events.contains(ev) {
                precip_events.push(*ev);
            }
        }
        for note in &p.extra_hazard_notes {
            if !notes.contains(note) {
                notes.push(note.clone());
            }
        }
    }
    precip_events.sort();
    notes.sort();
    // A gust slower than the worst sustained wind says nothing about the
    // worst case.
    let gust_high = gust_high.filter(|g| *g >= sustained.high);

    // Directions differ across periods; the worst-case view keeps the one
    // attached to the windiest period.
    let direction = periods
        .iter()
        .filter(|p| p.wind.sustained.high == sustained.high)
        .find_map(|p| p.wind.direction);

    ForecastPeriod {
        label: "Worst case (48 h)".to_string(),
        temperature,
        wind: WindPrediction {
            direction,
            sustained,
            gust_high,
        },
        wind_chill,
        precip_events,
        extra_hazard_notes: notes,
    }
}
