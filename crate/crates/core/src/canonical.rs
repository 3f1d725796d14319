//! Canonical interchange format for [`ForecastDocument`].
//!
//! The format is TOML with a mandatory `schema_version` key. Parsing is
//! strict: unknown keys are errors. An absent wind chill is written by
//! omitting the `wind_chill` table.
//!
//! ```toml
//! schema_version = 1
//! source_id = "severe-day"
//! issued_at = "2026-01-15T05:00:00-05:00"
//! summary_text = "..."
//!
//! [[periods]]
//! label = "Today"
//! precip_events = [{ kind = "snow", certainty = "likely" }]
//! extra_hazard_notes = []
//!
//! [periods.temperature]
//! low = 0.0
//! high = 10.0
//! unit = "F"
//! ...
//! ```

use chrono::{DateTime, FixedOffset};
use serde::{Deserialize, Serialize};

use crate::diagnostics::{Diagnostic, ParseResult};
use crate::model::{ensure_valid, validate, ForecastDocument, ForecastPeriod, InvalidDocument};

pub const SCHEMA_VERSION: i64 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CanonicalFile {
    schema_version: i64,
    source_id: String,
    issued_at: DateTime<FixedOffset>,
    summary_text: String,
    periods: Vec<ForecastPeriod>,
}

#[derive(Debug, thiserror::Error)]
pub enum EmitError {
    #[error(transparent)]
    Invalid(#[from] InvalidDocument),
    #[error("serialization failed: {0}")]
    Serialize(#[from] toml::ser::Error),
}

pub fn emit_canonical(doc: &ForecastDocument) -> Result<String, EmitError> {
    ensure_valid(doc)?;
    let file = CanonicalFile {
        schema_version: SCHEMA_VERSION,
        source_id: doc.source_id.clone(),
        issued_at: doc.issued_at,
        summary_text: doc.summary_text.clone(),
        periods: doc.periods.clone(),
    };
    Ok(toml::to_string(&file)?)
}

pub fn parse_canonical(text: &str) -> ParseResult {
    let whole = 0..text.len();
    let table: toml::Table = match text.parse() {
        Ok(t) => t,
        Err(e) => {
            let span = e.span().unwrap_or(whole);
            return ParseResult::finish(None, vec![Diagnostic::error(span, e.message().to_string())], 0.0);
        }
    };
    match table.get("schema_version") {
        None => {
            return ParseResult::finish(None, vec![Diagnostic::error(whole, "missing schema version")], 0.0)
        }
        Some(toml::Value::Integer(SCHEMA_VERSION)) => {}
        Some(other) => {
            return ParseResult::finish(
                None,
                vec![Diagnostic::error(whole, format!("unsupported schema version {other}"))],
                0.0,
            )
        }
    }
    let file: CanonicalFile = match toml::from_str(text) {
        Ok(f) => f,
        Err(e) => {
            let span = e.span().unwrap_or(whole);
            return ParseResult::finish(None, vec![Diagnostic::error(span, e.message().to_string())], 0.0);
        }
    };
    let doc = ForecastDocument {
        source_id: file.source_id,
        issued_at: file.issued_at,
        summary_text: file.summary_text,
        periods: file.periods,
    };
    let diagnostics: Vec<Diagnostic> = validate(&doc)
        .into_iter()
        .map(|v| Diagnostic::error(whole.clone(), v.to_string()))
        .collect();
    ParseResult::finish(Some(doc), diagnostics, 1.0)
}

/// Heuristic used by the CLI to tell canonical files from raw forecast text.
pub fn looks_canonical(text: &str) -> bool {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.starts_with("schema_version"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::four;
    use crate::model::ValueRange;

    #[test]
    fn round_trip_simple() {
        let mut doc = four([10.0, 5.0, 8.0, 12.0], [40.0, 90.0, 60.0, 50.0]);
        doc.periods[1].wind_chill = Some(ValueRange::fahrenheit(-30.5, -20.0));
        doc.periods[1].wind.gust_high = Some(101.25);
        doc.periods[2].extra_hazard_notes.push("Dense fog, \"zero\" visibility.".into());
        let text = emit_canonical(&doc).unwrap();
        let back = parse_canonical(&text);
        assert!(back.diagnostics.is_empty(), "{:?}", back.diagnostics);
        assert_eq!(back.document.unwrap(), doc);
        assert_eq!(back.coverage, 1.0);
    }

    #[test]
    fn absent_wind_chill_has_no_key() {
        let doc = four([10.0; 4], [40.0; 4]);
        let text = emit_canonical(&doc).unwrap();
        assert!(!text.contains("wind_chill"));
    }

    #[test]
    fn emission_is_deterministic() {
        let doc = four([10.0; 4], [40.0; 4]);
        assert_eq!(emit_canonical(&doc).unwrap(), emit_canonical(&doc).unwrap());
    }

    #[test]
    fn unknown_key_is_named() {
        let doc = four([10.0; 4], [40.0; 4]);
        let text = emit_canonical(&doc).unwrap().replacen(
            "label = \"Today\"",
            "label = \"Today\"\nhumidity = 40",
            1,
        );
        let res = parse_canonical(&text);
        assert!(res.document.is_none());
        let msg = &res.errors().next().unwrap().message;
        assert!(msg.contains("humidity"), "{msg}");
        let span = &res.diagnostics[0].span;
        assert!(span.end <= text.len());
    }

    #[test]
    fn empty_text_is_missing_version() {
        let res = parse_canonical("");
        assert!(res.document.is_none());
        assert_eq!(res.diagnostics[0].message, "missing schema version");
    }

    #[test]
    fn wrong_version_rejected() {
        let res = parse_canonical("schema_version = 7\n");
        assert!(res.errors().next().unwrap().message.contains("unsupported schema version 7"));
    }

    #[test]
    fn invalid_document_not_emitted_and_not_accepted() {
        let mut doc = four([10.0; 4], [40.0; 4]);
        doc.periods[0].temperature = ValueRange::fahrenheit(20.0, 10.0);
        assert!(matches!(emit_canonical(&doc), Err(EmitError::Invalid(_))));

        let good = four([10.0; 4], [40.0; 4]);
        let text = emit_canonical(&good)
            .unwrap()
            .replacen("low = 10.0", "low = 30.0", 1);
        let res = parse_canonical(&text);
        assert!(res.document.is_none());
        assert!(res.diagnostics[0].message.contains("range order"));
    }

    #[test]
    fn sniffing() {
        assert!(looks_canonical("# c\nschema_version = 1\n"));
        assert!(!looks_canonical("Issued: 2026-01-01T00:00:00Z\n"));
    }
}
