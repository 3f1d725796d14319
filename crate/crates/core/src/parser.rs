//! Raw forecast text to [`ForecastDocument`].
//!
//! Expected layout (keywords are case-insensitive):
//!
//! ```text
//! Issued: 2026-01-15T05:00:00-05:00
//! Source: severe-day                      (optional)
//! <summary narrative, any number of lines>
//!
//! Today:
//! Temperatures: 0-10F
//! Winds: NW 70-90 mph with higher gusts 100-110 mph
//! Wind chill: -50 to -40F
//! Snow likely. Visibility under 1/4 mile in blowing snow.
//! Tonight:
//! ...
//! ```
//!
//! Closed keyword sets:
//!
//! * period headers: `today`, `this afternoon`, `tonight`, `tomorrow`,
//!   `tomorrow night`, weekday names with optional `night`, `day 1`/`day 2`,
//!   `night 1`/`night 2`. A header occupies the start of a line and is either
//!   alone on the line or followed by `:`.
//! * field labels: `temperatures:`/`temperature:`/`temps:`/`temp:`,
//!   `winds:`/`wind:`, `wind chills:`/`wind chill:`.
//! * units: `F`, `°F`, `degrees`, `fahrenheit` (default for temperatures);
//!   `C`, `°C`, `celsius`; `mph` (default for winds); `kph`, `km/h`, `kmh`;
//!   `kt`, `kts`, `knots`.
//! * precipitation: see [`PRECIP_KEYWORDS`]. Certainty words: `likely`,
//!   `chance`, `possible` (counted as chance).
//! * hazards: see [`HAZARD_KEYWORDS`].
//!
//! A labeled field keeps the min/max envelope of every number bound to it.
//! A hyphen is a range separator only directly after a complete number;
//! otherwise a hyphen before a digit is a minus sign. `N below (zero)` is
//! read as `-N` for the whole range it closes ("40 to 50 below zero").

use std::ops::Range;

use chrono::DateTime;

use crate::diagnostics::{Diagnostic, ParseResult};
use crate::model::{
    validate, Certainty, Direction, ForecastDocument, ForecastPeriod, PrecipEvent, PrecipKind,
    Unit, ValueRange, WindPrediction, PERIOD_COUNT,
};

/// Precipitation phrases, longest first so that "freezing rain" wins over "rain".
pub const PRECIP_KEYWORDS: &[(&str, PrecipKind)] = &[
    ("mixed precipitation", PrecipKind::Mixed),
    ("freezing drizzle", PrecipKind::FreezingRain),
    ("freezing rain", PrecipKind::FreezingRain),
    ("ice pellets", PrecipKind::Sleet),
    ("snow showers", PrecipKind::Snow),
    ("rain showers", PrecipKind::Rain),
    ("wintry mix", PrecipKind::Mixed),
    ("snowfall", PrecipKind::Snow),
    ("flurries", PrecipKind::Snow),
    ("drizzle", PrecipKind::Rain),
    ("sleet", PrecipKind::Sleet),
    ("snow", PrecipKind::Snow),
    ("rain", PrecipKind::Rain),
];

pub const HAZARD_KEYWORDS: &[&str] = &[
    "flood",
    "flooding",
    "floods",
    "fog",
    "foggy",
    "icing",
    "visibility",
    "visibilities",
    "whiteout",
];

const WEEKDAYS: [&str; 7] = [
    "monday",
    "tuesday",
    "wednesday",
    "thursday",
    "friday",
    "saturday",
    "sunday",
];

/// Parses raw forecast text. Never panics; problems are reported as
/// diagnostics and the document is withheld when any is an error.
pub fn parse_forecast(text: &str) -> ParseResult {
    if text.trim().is_empty() {
        return ParseResult::finish(None, vec![Diagnostic::error(0..text.len(), "empty input")], 0.0);
    }
    let mut p = Parser {
        text,
        diagnostics: Vec::new(),
        unrecognized_chars: 0,
    };
    let doc = p.run();
    let total = text.chars().count().max(1);
    let coverage = 1.0 - p.unrecognized_chars as f64 / total as f64;
    ParseResult::finish(doc, p.diagnostics, coverage)
}

struct Line<'a> {
    start: usize,
    text: &'a str,
}

fn lines(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    let mut start = 0;
    for piece in text.split_inclusive('\n') {
        let body = piece.trim_end_matches(['\n', '\r']);
        out.push(Line { start, text: body });
        start += piece.len();
    }
    out
}

struct Header {
    line: usize,
    label: String,
    /// Byte offset where the block content starts (after the colon).
    content_start: usize,
    span: Range<usize>,
}

/// Recognizes a period header at the start of `line`.
fn match_header(line: &Line<'_>) -> Option<Header> {
    let trimmed = line.text.trim_start();
    let lead = line.text.len() - trimmed.len();
    let (head, has_colon) = match trimmed.find(':') {
        Some(i) => (&trimmed[..i], true),
        None => (trimmed, false),
    };
    let words: Vec<&str> = head.split_whitespace().collect();
    let lower: Vec<String> = words.iter().map(|w| w.to_ascii_lowercase()).collect();
    let lower: Vec<&str> = lower.iter().map(String::as_str).collect();
    let ok = match lower.as_slice() {
        ["today"] | ["tonight"] | ["tomorrow"] | ["tomorrow", "night"] => true,
        ["this", "afternoon"] => true,
        ["day" | "night", n] => matches!(*n, "1" | "2"),
        [day] => WEEKDAYS.contains(day),
        [day, "night"] => WEEKDAYS.contains(day),
        _ => false,
    };
    if !ok {
        return None;
    }
    if !has_colon && head.trim_end().len() != trimmed.trim_end().len() {
        return None;
    }
    let label = words.join(" ");
    let head_end = line.start + lead + if has_colon { head.len() + 1 } else { trimmed.len() };
    Some(Header {
        line: 0,
        label,
        content_start: head_end,
        span: line.start + lead..head_end,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Temperature,
    Wind,
    WindChill,
}

const FIELD_LABELS: &[(&str, Field)] = &[
    ("wind chills", Field::WindChill),
    ("wind chill", Field::WindChill),
    ("temperatures", Field::Temperature),
    ("temperature", Field::Temperature),
    ("temps", Field::Temperature),
    ("temp", Field::Temperature),
    ("winds", Field::Wind),
    ("wind", Field::Wind),
];

/// Finds a field label (`name` + optional spaces + `:`) starting at byte `at`.
fn label_at(s: &str, at: usize) -> Option<(Field, usize)> {
    if at > 0 {
        let prev = s[..at].chars().next_back()?;
        if prev.is_alphanumeric() {
            return None;
        }
    }
    let rest = &s[at..];
    for (name, field) in FIELD_LABELS {
        if rest.len() >= name.len() && rest.is_char_boundary(name.len()) && rest[..name.len()].eq_ignore_ascii_case(name) {
            let after = &rest[name.len()..];
            let trimmed = after.trim_start_matches([' ', '\t']);
            if trimmed.starts_with(':') {
                let len = name.len() + (after.len() - trimmed.len()) + 1;
                return Some((*field, len));
            }
        }
    }
    None
}

/// Splits `s` at sentence ends: a `.`, `!` or `?` followed by whitespace or end of text.
fn sentence_ends(s: &str) -> Vec<usize> {
    let mut ends = Vec::new();
    let mut it = s.char_indices().peekable();
    while let Some((i, c)) = it.next() {
        if matches!(c, '.' | '!' | '?') {
            match it.peek() {
                None => ends.push(i + 1),
                Some((_, n)) if n.is_whitespace() => ends.push(i + 1),
                _ => {}
            }
        }
    }
    ends
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Word(String),
    RangeSep,
    Punct,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: Range<usize>,
}

fn lex(s: &str, base: usize) -> Vec<Token> {
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut out: Vec<Token> = Vec::new();
    let mut i = 0;
    let end_of = |k: usize| chars.get(k).map_or(s.len(), |(b, _)| *b);
    while i < chars.len() {
        let (b, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let next_is_digit = chars.get(i + 1).is_some_and(|(_, n)| n.is_ascii_digit());
        let prev_is_num = matches!(out.last(), Some(Token { tok: Tok::Num(_), .. }));
        if matches!(c, '-' | '\u{2212}' | '\u{2013}' | '\u{2014}') && prev_is_num {
            out.push(Token {
                tok: Tok::RangeSep,
                span: base + b..base + end_of(i + 1),
            });
            i += 1;
            continue;
        }
        let signed = matches!(c, '-' | '\u{2212}' | '+') && next_is_digit;
        if c.is_ascii_digit() || signed || (c == '.' && next_is_digit) {
            let start = i;
            let negative = matches!(c, '-' | '\u{2212}');
            if signed {
                i += 1;
            }
            let digits_start = i;
            while i < chars.len() && (chars[i].1.is_ascii_digit() || chars[i].1 == ',') {
                i += 1;
            }
            if i + 1 < chars.len() && chars[i].1 == '.' && chars[i + 1].1.is_ascii_digit() {
                i += 1;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
            }
            let digits: String = s[end_of(digits_start)..end_of(i)].chars().filter(|c| *c != ',').collect();
            let mut value: f64 = digits.parse().unwrap_or(0.0);
            if negative {
                value = -value;
            }
            out.push(Token {
                tok: Tok::Num(value),
                span: base + end_of(start)..base + end_of(i),
            });
            continue;
        }
        if c.is_alphabetic() || c == '°' {
            let start = i;
            i += 1;
            while i < chars.len() {
                let ch = chars[i].1;
                let joins = (ch == '-' || ch == '/')
                    && chars.get(i + 1).is_some_and(|(_, n)| n.is_alphabetic());
                if ch.is_alphabetic() || joins {
                    i += 1;
                } else {
                    break;
                }
            }
            out.push(Token {
                tok: Tok::Word(s[end_of(start)..end_of(i)].to_lowercase()),
                span: base + end_of(start)..base + end_of(i),
            });
            continue;
        }
        out.push(Token {
            tok: Tok::Punct,
            span: base + b..base + end_of(i + 1),
        });
        i += 1;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum InUnit {
    Fahrenheit,
    Celsius,
    Mph,
    Kph,
    Knots,
}

fn unit_word(w: &str) -> Option<InUnit> {
    Some(match w {
        "f" | "°f" | "°" | "degrees" | "degree" | "fahrenheit" => InUnit::Fahrenheit,
        "c" | "°c" | "celsius" => InUnit::Celsius,
        "mph" => InUnit::Mph,
        "kph" | "km/h" | "kmh" => InUnit::Kph,
        "kt" | "kts" | "knots" | "knot" => InUnit::Knots,
        _ => return None,
    })
}

fn to_internal(v: f64, unit: InUnit) -> f64 {
    match unit {
        InUnit::Fahrenheit | InUnit::Mph => v,
        InUnit::Celsius => v * 9.0 / 5.0 + 32.0,
        InUnit::Kph => v / 1.609_344,
        InUnit::Knots => v * 1.150_779_448,
    }
}

/// Numbers bound to a field, in internal units. Handles "below (zero)",
/// the word "zero", and unit propagation within a range.
fn field_numbers(tokens: &[Token], default: InUnit) -> Vec<f64> {
    struct Num {
        value: f64,
        unit: Option<InUnit>,
        group: usize,
    }
    let mut nums: Vec<Num> = Vec::new();
    let mut group = 0;
    let mut open_group = false;
    for (k, t) in tokens.iter().enumerate() {
        match &t.tok {
            Tok::Num(v) => {
                if !open_group {
                    group += 1;
                    open_group = true;
                }
                nums.push(Num {
                    value: *v,
                    unit: None,
                    group,
                });
            }
            Tok::RangeSep => {}
            Tok::Word(w) => {
                if let Some(u) = unit_word(w) {
                    if matches!(tokens.get(k.wrapping_sub(1)).map(|t| &t.tok), Some(Tok::Num(_))) {
                        if let Some(last) = nums.last_mut() {
                            last.unit = Some(u);
                        }
                    }
                } else if w == "below" && open_group {
                    for n in nums.iter_mut().filter(|n| n.group == group) {
                        n.value = -n.value.abs();
                    }
                    open_group = false;
                } else if w == "zero" {
                    let after_below = matches!(
                        tokens.get(k.wrapping_sub(1)).map(|t| &t.tok),
                        Some(Tok::Word(p)) if p == "below"
                    );
                    if !after_below {
                        if !open_group {
                            group += 1;
                            open_group = true;
                        }
                        nums.push(Num {
                            value: 0.0,
                            unit: None,
                            group,
                        });
                    }
                } else if w != "to" && w != "and" {
                    open_group = false;
                }
            }
            Tok::Punct => open_group = false,
        }
    }
    // a number without a unit takes the next explicit unit in its group
    let mut out = Vec::with_capacity(nums.len());
    for (i, n) in nums.iter().enumerate() {
        let unit = n.unit.or_else(|| {
            nums[i + 1..]
                .iter()
                .take_while(|m| m.group == n.group)
                .find_map(|m| m.unit)
        });
        out.push(to_internal(n.value, unit.unwrap_or(default)));
    }
    out
}

struct Parser<'a> {
    text: &'a str,
    diagnostics: Vec<Diagnostic>,
    unrecognized_chars: usize,
}

#[derive(Default)]
struct PeriodDraft {
    temperature: Vec<f64>,
    wind_chill: Vec<f64>,
    wind_chill_seen: bool,
    sustained: Vec<f64>,
    gusts: Vec<f64>,
    calm: bool,
    direction: Option<Direction>,
    wind_seen: bool,
    temperature_seen: bool,
    precip: Vec<PrecipEvent>,
    notes: Vec<String>,
}

impl<'a> Parser<'a> {
    fn run(&mut self) -> Option<ForecastDocument> {
        let lines = lines(self.text);
        let mut headers: Vec<Header> = Vec::new();
        for (i, line) in lines.iter().enumerate() {
            if let Some(mut h) = match_header(line) {
                h.line = i;
                headers.push(h);
            }
        }

        let preamble_end = headers.first().map_or(lines.len(), |h| h.line);
        let mut issued = None;
        let mut source_id = None;
        let mut summary_parts: Vec<&str> = Vec::new();
        for line in &lines[..preamble_end] {
            let trimmed = line.text.trim();
            let span = line.start..line.start + line.text.len();
            if let Some(value) = strip_key(trimmed, "issued") {
                match DateTime::parse_from_rfc3339(value) {
                    Ok(t) => issued = Some(t),
                    Err(e) => self
                        .diagnostics
                        .push(Diagnostic::error(span, format!("invalid issued timestamp '{value}': {e}"))),
                }
            } else if let Some(value) = strip_key(trimmed, "source") {
                source_id = Some(value.to_string());
            } else if !trimmed.is_empty() {
                summary_parts.push(trimmed);
            }
        }

        if headers.len() != PERIOD_COUNT {
            let span = match headers.get(PERIOD_COUNT) {
                Some(extra) => extra.span.clone(),
                None => 0..self.text.len(),
            };
            self.diagnostics.push(Diagnostic::error(
                span,
                format!("expected {PERIOD_COUNT} periods, found {}", headers.len()),
            ));
        }
        if issued.is_none() && !self.diagnostics.iter().any(|d| d.message.starts_with("invalid issued")) {
            self.diagnostics
                .push(Diagnostic::error(0..0, "missing 'Issued:' line with an RFC 3339 timestamp"));
        }
        let summary = summary_parts.join(" ").split_whitespace().collect::<Vec<_>>().join(" ");
        if summary.is_empty() {
            let end = headers.first().map_or(self.text.len(), |h| h.span.start);
            self.diagnostics
                .push(Diagnostic::error(0..end, "missing summary text before the first period"));
        }

        let mut periods = Vec::new();
        for (k, header) in headers.iter().enumerate() {
            let block_end = headers
                .get(k + 1)
                .map_or(self.text.len(), |h| lines[h.line].start);
            if let Some(p) = self.parse_block(header, block_end) {
                periods.push(p);
            }
        }

        let doc = ForecastDocument {
            source_id: source_id.unwrap_or_else(|| "unlabeled".to_string()),
            issued_at: issued?,
            summary_text: summary,
            periods,
        };
        if self.diagnostics.iter().any(|d| d.severity == crate::diagnostics::Severity::Error) {
            return None;
        }
        for v in validate(&doc) {
            self.diagnostics.push(Diagnostic::error(0..self.text.len(), v.to_string()));
        }
        Some(doc)
    }

    fn parse_block(&mut self, header: &Header, end: usize) -> Option<ForecastPeriod> {
        let mut draft = PeriodDraft::default();
        let block = &self.text[header.content_start..end];
        for line in lines(block) {
            let base = header.content_start + line.start;
            self.scan_line(line.text, base, &mut draft);
        }
        self.finish_period(header, draft)
    }

    fn scan_line(&mut self, line: &str, base: usize, draft: &mut PeriodDraft) {
        // split into (label, segment) pieces at field labels
        let mut cuts: Vec<(usize, Option<(Field, usize)>)> = Vec::new();
        for (i, _) in line.char_indices() {
            if let Some(found) = label_at(line, i) {
                cuts.push((i, Some(found)));
            }
        }
        if cuts.first().is_none_or(|c| c.0 != 0) {
            cuts.insert(0, (0, None));
        }
        cuts.push((line.len(), None));
        for w in cuts.windows(2) {
            let (start, label) = w[0];
            let stop = w[1].0;
            let segment = &line[start..stop];
            match label {
                None => self.scan_free(segment, base + start, draft),
                Some((field, label_len)) => {
                    let body = &segment[label_len..];
                    // the field ends at the first sentence end; the rest is free text
                    let cut = sentence_ends(body).first().copied().unwrap_or(body.len());
                    self.scan_field(field, &body[..cut], base + start + label_len, draft);
                    self.scan_free(&body[cut..], base + start + label_len + cut, draft);
                }
            }
        }
    }

    fn scan_field(&mut self, field: Field, body: &str, base: usize, draft: &mut PeriodDraft) {
        let tokens = lex(body, base);
        let span = base..base + body.len();
        match field {
            Field::Temperature => {
                draft.temperature_seen = true;
                let nums = field_numbers(&tokens, InUnit::Fahrenheit);
                if nums.is_empty() {
                    self.diagnostics
                        .push(Diagnostic::warning(span, "temperature label without a value"));
                }
                draft.temperature.extend(nums);
            }
            Field::WindChill => {
                draft.wind_chill_seen = true;
                let nums = field_numbers(&tokens, InUnit::Fahrenheit);
                if nums.is_empty() {
                    self.diagnostics
                        .push(Diagnostic::note(span, "wind chill label without a value; treated as absent"));
                }
                draft.wind_chill.extend(nums);
            }
            Field::Wind => {
                draft.wind_seen = true;
                let gust_at = tokens.iter().position(
                    |t| matches!(&t.tok, Tok::Word(w) if w.starts_with("gust")),
                );
                let (sustained, gusts) = match gust_at {
                    Some(g) => tokens.split_at(g),
                    None => (&tokens[..], &[][..]),
                };
                if draft.direction.is_none() {
                    draft.direction = sustained.iter().find_map(|t| match &t.tok {
                        Tok::Word(w) => Direction::from_token(w),
                        _ => None,
                    });
                }
                if sustained
                    .iter()
                    .any(|t| matches!(&t.tok, Tok::Word(w) if w == "calm"))
                {
                    draft.calm = true;
                }
                let nums = field_numbers(sustained, InUnit::Mph);
                if nums.is_empty() && !draft.calm {
                    self.diagnostics.push(Diagnostic::warning(span.clone(), "no sustained wind speed found"));
                }
                draft.sustained.extend(nums);
                if let Some(g) = gust_at {
                    let gust_nums = field_numbers(gusts, InUnit::Mph);
                    if gust_nums.is_empty() {
                        self.diagnostics.push(Diagnostic::warning(
                            tokens[g].span.clone(),
                            "gusts mentioned without a speed; gust left unset",
                        ));
                    }
                    draft.gusts.extend(gust_nums);
                }
            }
        }
    }

    fn scan_free(&mut self, segment: &str, base: usize, draft: &mut PeriodDraft) {
        let mut start = 0;
        let mut ends = sentence_ends(segment);
        if ends.last() != Some(&segment.len()) {
            ends.push(segment.len());
        }
        for end in ends {
            let raw = &segment[start..end];
            let sentence_start = base + start;
            start = end;
            let text = raw.trim();
            if text.is_empty() || !text.chars().any(char::is_alphanumeric) {
                continue;
            }
            let lower = text.to_lowercase();
            let events = precip_events(&lower);
            let hazard = HAZARD_KEYWORDS.iter().any(|k| contains_word(&lower, k));
            for ev in &events {
                if !draft.precip.contains(ev) {
                    draft.precip.push(*ev);
                }
            }
            if hazard {
                let note = text.to_string();
                if !draft.notes.contains(&note) {
                    draft.notes.push(note);
                }
            }
            if events.is_empty() && !hazard {
                self.unrecognized_chars += text.chars().count();
                let lead = raw.len() - raw.trim_start().len();
                let s = sentence_start + lead;
                self.diagnostics
                    .push(Diagnostic::note(s..s + text.len(), "sentence not recognized; not carried into the period"));
            }
        }
    }

    fn finish_period(&mut self, header: &Header, d: PeriodDraft) -> Option<ForecastPeriod> {
        let span = header.span.clone();
        let temperature = ValueRange::envelope(&d.temperature, Unit::Fahrenheit);
        let mut sustained_values = d.sustained.clone();
        if d.calm && sustained_values.is_empty() {
            sustained_values.push(0.0);
        }
        let sustained = ValueRange::envelope(&sustained_values, Unit::Mph);
        let (temperature, sustained) = match (temperature, sustained) {
            (Some(t), Some(w)) => (t, w),
            (None, None) => {
                self.diagnostics.push(Diagnostic::error(
                    span,
                    format!("period '{}' has neither temperature nor wind", header.label),
                ));
                return None;
            }
            (None, Some(_)) => {
                self.diagnostics.push(Diagnostic::error(
                    span,
                    format!("period '{}' has no temperature", header.label),
                ));
                return None;
            }
            (Some(_), None) => {
                self.diagnostics
                    .push(Diagnostic::error(span, format!("period '{}' has no wind", header.label)));
                return None;
            }
        };
        let mut gust_high = d.gusts.iter().copied().reduce(f64::max);
        if let Some(g) = gust_high {
            if g < sustained.high {
                self.diagnostics.push(Diagnostic::warning(
                    span.clone(),
                    format!("gust {g} mph below sustained {} mph; gust dropped", sustained.high),
                ));
                gust_high = None;
            }
        }
        Some(ForecastPeriod {
            label: header.label.clone(),
            temperature,
            wind: WindPrediction {
                direction: d.direction,
                sustained,
                gust_high,
            },
            wind_chill: ValueRange::envelope(&d.wind_chill, Unit::Fahrenheit),
            precip_events: d.precip,
            extra_hazard_notes: d.notes,
        })
    }
}

fn strip_key<'t>(line: &'t str, key: &str) -> Option<&'t str> {
    let (k, v) = line.split_once(':')?;
    k.trim().eq_ignore_ascii_case(key).then(|| v.trim())
}

fn is_word_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric()
}

/// Whole-word, already-lowercased containment.
fn contains_word(haystack: &str, word: &str) -> bool {
    find_word(haystack, word, 0).is_some()
}

fn find_word(haystack: &str, word: &str, from: usize) -> Option<usize> {
    let bytes = haystack.as_bytes();
    let mut at = from;
    while let Some(i) = haystack[at..].find(word) {
        let s = at + i;
        let e = s + word.len();
        let left_ok = s == 0 || !is_word_byte(bytes[s - 1]);
        let right_ok = e == bytes.len() || !is_word_byte(bytes[e]);
        if left_ok && right_ok {
            return Some(s);
        }
        at = s + 1;
        while !haystack.is_char_boundary(at) {
            at += 1;
        }
    }
    None
}

/// Precipitation events in one lowercased sentence. Each keyword takes the
/// certainty word nearest to it within the sentence. Blowing or drifting
/// snow is lifted from the ground, not falling, and is skipped.
fn precip_events(lower: &str) -> Vec<PrecipEvent> {
    let mut taken = vec![false; lower.len()];
    let mut hits: Vec<(usize, usize, PrecipKind)> = Vec::new();
    for (kw, kind) in PRECIP_KEYWORDS {
        let mut from = 0;
        while let Some(s) = find_word(lower, kw, from) {
            let e = s + kw.len();
            let lifted = ["blowing ", "drifting "].iter().any(|w| lower[..s].ends_with(w));
            if !lifted && !taken[s..e].iter().any(|t| *t) {
                taken[s..e].iter_mut().for_each(|t| *t = true);
                hits.push((s, e, *kind));
            }
            from = e;
        }
    }
    hits.sort_by_key(|h| h.0);
    let mut certainty_words: Vec<(usize, Certainty)> = Vec::new();
    for (w, c) in [
        ("likely", Certainty::Likely),
        ("chance", Certainty::Chance),
        ("possible", Certainty::Chance),
    ] {
        let mut from = 0;
        while let Some(s) = find_word(lower, w, from) {
            certainty_words.push((s, c));
            from = s + w.len();
        }
    }
    let mut out: Vec<PrecipEvent> = Vec::new();
    for (s, e, kind) in hits {
        let certainty = certainty_words
            .iter()
            .min_by_key(|(pos, _)| if *pos >= e { pos - e } else { s.saturating_sub(*pos) })
            .map_or(Certainty::Mentioned, |(_, c)| *c);
        let ev = PrecipEvent { kind, certainty };
        if !out.contains(&ev) {
            out.push(ev);
        }
    }
    out
}
