//! Forecast layouts: baseline, summary-last, overall icons and per-period
//! icons, each as SVG, HTML or plain text.
//!
//! A render first lays the document out as a list of [`Block`]s in the
//! order the condition asks for, then a format writer serializes the
//! blocks. Text is never dropped: icon rows are added next to the forecast
//! text, not instead of it.

mod glyphs;
mod html;
mod plain;
mod svg;

use std::fmt;
use std::str::FromStr;

use crate::hazard::{HazardEngine, HazardError, HazardIcon, IconMode, IconSet};
use crate::model::{ensure_valid, Certainty, ForecastDocument, ForecastPeriod, InvalidDocument};
use crate::scale::HazardKind;

pub use glyphs::{Glyph, GlyphSet, GLYPH_LICENSE};

pub const STYLESHEET: &str = include_str!("../../assets/style.css");
pub const TITLE: &str = "Higher Summits Forecast";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LayoutCondition {
    Baseline,
    SummaryLast,
    Icons,
    PerDayIcons,
}

impl LayoutCondition {
    pub const ALL: [LayoutCondition; 4] = [
        LayoutCondition::Baseline,
        LayoutCondition::SummaryLast,
        LayoutCondition::Icons,
        LayoutCondition::PerDayIcons,
    ];

    /// Flag spelling: `baseline`, `summary-last`, `icons`, `per-day-icons`.
    pub fn as_str(&self) -> &'static str {
        match self {
            LayoutCondition::Baseline => "baseline",
            LayoutCondition::SummaryLast => "summary-last",
            LayoutCondition::Icons => "icons",
            LayoutCondition::PerDayIcons => "per-day-icons",
        }
    }

    fn summary_first(&self) -> bool {
        matches!(self, LayoutCondition::Baseline | LayoutCondition::Icons)
    }
}

impl fmt::Display for LayoutCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl serde::Serialize for LayoutCondition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown condition '{0}'; valid conditions: baseline, summary-last, icons, per-day-icons")]
pub struct UnknownCondition(pub String);

impl FromStr for LayoutCondition {
    type Err = UnknownCondition;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == norm)
            .ok_or_else(|| UnknownCondition(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Format {
    Svg,
    Html,
    Plain,
}

impl Format {
    pub const ALL: [Format; 3] = [Format::Svg, Format::Html, Format::Plain];

    pub fn extension(&self) -> &'static str {
        match self {
            Format::Svg => "svg",
            Format::Html => "html",
            Format::Plain => "txt",
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Format::Svg => "svg",
            Format::Html => "html",
            Format::Plain => "plain",
        }
    }
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "svg" => Ok(Format::Svg),
            "html" => Ok(Format::Html),
            "plain" | "txt" | "text" => Ok(Format::Plain),
            _ => Err(format!("unknown format '{s}'; valid formats: svg, html, plain")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RenderError {
    #[error(transparent)]
    InvalidDocument(#[from] InvalidDocument),
    #[error(transparent)]
    Hazard(#[from] HazardError),
    #[error("unknown glyph '{0}'")]
    UnknownGlyph(String),
}

/// Links a rendered element to the document field it shows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub element_id: String,
    pub source_field: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderedDocument {
    pub format: Format,
    pub condition: LayoutCondition,
    pub payload: Vec<u8>,
    pub manifest: Vec<ManifestEntry>,
}

impl RenderedDocument {
    pub fn payload_str(&self) -> &str {
        std::str::from_utf8(&self.payload).expect("renderers emit UTF-8")
    }

    /// One `element_id<TAB>source_field` line per entry.
    pub fn manifest_text(&self) -> String {
        manifest_text(&self.manifest)
    }
}

pub fn manifest_text(entries: &[ManifestEntry]) -> String {
    let mut out = String::from("# hazcast manifest v1\n");
    for e in entries {
        out.push_str(&e.element_id);
        out.push('\t');
        out.push_str(&e.source_field);
        out.push('\n');
    }
    out
}

/// One line of forecast text inside a block.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Row {
    pub id: String,
    pub source: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Block {
    Header {
        rows: Vec<Row>,
    },
    IconRow {
        id: String,
        source: String,
        caption: String,
        icons: IconSet,
    },
    Summary {
        id: String,
        text: String,
    },
    Period {
        id: String,
        source: String,
        label: String,
        icons: Option<(String, IconSet)>,
        rows: Vec<Row>,
    },
}

/// Number formatting shared by every format: integers without a fraction.
pub(crate) fn fmt_num(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

fn fmt_range(low: f64, high: f64, unit: &str) -> String {
    if low == high {
        format!("{} {unit}", fmt_num(low))
    } else {
        format!("{} to {} {unit}", fmt_num(low), fmt_num(high))
    }
}

/// Text of each field of a period, in display order.
pub(crate) fn period_rows(period: &ForecastPeriod, index: usize) -> Vec<Row> {
    let id = |f: &str| format!("period-{index}-{f}");
    let src = |f: &str| format!("periods[{index}].{f}");
    let mut rows = Vec::new();
    rows.push(Row {
        id: id("temperature"),
        source: src("temperature"),
        text: format!(
            "Temperatures: {}",
            fmt_range(period.temperature.low, period.temperature.high, "°F")
        ),
    });
    let w = &period.wind;
    let mut wind = String::from("Winds: ");
    if w.sustained.high == 0.0 {
        wind.push_str("calm");
    } else {
        if let Some(d) = w.direction {
            wind.push_str(d.as_str());
            wind.push(' ');
        }
        wind.push_str(&fmt_range(w.sustained.low, w.sustained.high, "mph"));
    }
    if let Some(g) = w.gust_high {
        wind.push_str(&format!(", gusts to {} mph", fmt_num(g)));
    }
    rows.push(Row {
        id: id("wind"),
        source: src("wind"),
        text: wind,
    });
    if let Some(wc) = &period.wind_chill {
        rows.push(Row {
            id: id("wind-chill"),
            source: src("wind_chill"),
            text: format!("Wind chill: {}", fmt_range(wc.low, wc.high, "°F")),
        });
    }
    if !period.precip_events.is_empty() {
        let parts: Vec<String> = period
            .precip_events
            .iter()
            .map(|e| match e.certainty {
                Certainty::Mentioned => e.kind.as_str().to_string(),
                Certainty::Likely => format!("{} (likely)", e.kind.as_str()),
                Certainty::Chance => format!("{} (chance)", e.kind.as_str()),
            })
            .collect();
        rows.push(Row {
            id: id("precip"),
            source: src("precip_events"),
            text: format!("Precipitation: {}", parts.join(", ")),
        });
    }
    for (k, note) in period.extra_hazard_notes.iter().enumerate() {
        rows.push(Row {
            id: id(&format!("note-{k}")),
            source: format!("periods[{index}].extra_hazard_notes[{k}]"),
            text: note.clone(),
        });
    }
    rows
}

/// Display text of every field of a period, as it appears in each format.
pub fn period_texts(period: &ForecastPeriod, index: usize) -> Vec<String> {
    period_rows(period, index).into_iter().map(|r| r.text).collect()
}

pub(crate) fn layout(
    doc: &ForecastDocument,
    condition: LayoutCondition,
    engine: &HazardEngine,
) -> Result<Vec<Block>, RenderError> {
    ensure_valid(doc)?;
    let mut blocks = vec![Block::Header {
        rows: vec![
            Row {
                id: "source".into(),
                source: "source_id".into(),
                text: format!("Forecast: {}", doc.source_id),
            },
            Row {
                id: "issued".into(),
                source: "issued_at".into(),
                text: format!("Issued: {}", doc.issued_at.to_rfc3339()),
            },
        ],
    }];
    if condition == LayoutCondition::Icons {
        let icons = engine
            .derive_document_icons(doc, IconMode::Overall)?
            .pop()
            .unwrap_or_default();
        blocks.push(Block::IconRow {
            id: "icons-overall".into(),
            source: "derived:worst_case(periods)".into(),
            caption: "Hazards, next 48 hours".into(),
            icons,
        });
    }
    let per_period = if condition == LayoutCondition::PerDayIcons {
        Some(engine.derive_document_icons(doc, IconMode::PerPeriod)?)
    } else {
        None
    };
    let summary = Block::Summary {
        id: "summary".into(),
        text: doc.summary_text.clone(),
    };
    let periods: Vec<Block> = doc
        .periods
        .iter()
        .enumerate()
        .map(|(i, p)| Block::Period {
            id: format!("period-{i}"),
            source: format!("periods[{i}].label"),
            label: p.label.clone(),
            icons: per_period
                .as_ref()
                .map(|sets| (format!("period-{i}-icons"), sets[i].clone())),
            rows: period_rows(p, i),
        })
        .collect();
    if condition.summary_first() {
        blocks.push(summary);
        blocks.extend(periods);
    } else {
        blocks.extend(periods);
        blocks.push(summary);
    }
    Ok(blocks)
}

pub(crate) fn manifest_of(blocks: &[Block]) -> Vec<ManifestEntry> {
    let mut out = Vec::new();
    let mut push = |id: &str, src: &str| {
        out.push(ManifestEntry {
            element_id: id.to_string(),
            source_field: src.to_string(),
        })
    };
    for block in blocks {
        match block {
            Block::Header { rows } => rows.iter().for_each(|r| push(&r.id, &r.source)),
            Block::IconRow { id, source, icons, .. } => {
                push(id, source);
                for (k, icon) in icons.iter().enumerate() {
                    push(&format!("{id}-{k}"), &format!("{source}:{}", icon.kind));
                }
            }
            Block::Summary { id, .. } => push(id, "summary_text"),
            Block::Period {
                id,
                source,
                icons,
                rows,
                ..
            } => {
                push(id, source);
                if let Some((icon_id, set)) = icons {
                    let src = source.trim_end_matches(".label");
                    push(icon_id, &format!("derived:{src}"));
                    for (k, icon) in set.iter().enumerate() {
                        push(&format!("{icon_id}-{k}"), &format!("derived:{src}:{}", icon.kind));
                    }
                }
                rows.iter().for_each(|r| push(&r.id, &r.source));
            }
        }
    }
    out
}

/// Renders one document under one layout condition.
pub fn render(
    doc: &ForecastDocument,
    condition: LayoutCondition,
    format: Format,
    engine: &HazardEngine,
) -> Result<RenderedDocument, RenderError> {
    let blocks = layout(doc, condition, engine)?;
    let glyphs = GlyphSet::shipped();
    let payload = match format {
        Format::Plain => plain::write(&blocks),
        Format::Html => html::write(&blocks, condition, glyphs)?,
        Format::Svg => svg::write(&blocks, condition, glyphs)?,
    };
    Ok(RenderedDocument {
        format,
        condition,
        payload: payload.into_bytes(),
        manifest: manifest_of(&blocks),
    })
}

/// Accessible name of an icon: scale name and level label.
pub fn icon_label(icon: &HazardIcon) -> String {
    let mut s = match icon.kind {
        HazardKind::Wind => format!("{} force {}: {}", icon.scale_name, icon.level, icon.level_label),
        _ => format!("{}: {}", icon.scale_name, icon.level_label),
    };
    if let Some(g) = icon.gust {
        s.push_str(&format!(", gusts to {} mph (force {})", fmt_num(g.gust_mph), g.force));
    }
    s
}

/// Bracketed text used for icons in plain renders, e.g. `[WIND F11]`.
pub fn icon_text(icon: &HazardIcon) -> String {
    match icon.kind {
        HazardKind::Wind => match icon.gust {
            Some(g) => format!("[WIND F{} GUSTS F{}]", icon.level, g.force),
            None => format!("[WIND F{}]", icon.level),
        },
        HazardKind::WindChill => match icon.level {
            1 => "[WIND CHILL 30 MIN]".to_string(),
            2 => "[WIND CHILL 10 MIN]".to_string(),
            3 => "[WIND CHILL 5 MIN]".to_string(),
            l => format!("[WIND CHILL L{l}]"),
        },
        HazardKind::FreezingTemp => "[FREEZING]".to_string(),
        HazardKind::WinterPrecip => "[WINTER PRECIP]".to_string(),
    }
}

/// A single icon as a standalone fragment: glyph over a solid background
/// in the icon's scale color, with an accessible label.
pub fn render_icon(icon: &HazardIcon, format: Format) -> Result<String, RenderError> {
    let glyphs = GlyphSet::shipped();
    match format {
        Format::Plain => {
            glyphs.get(&icon.glyph_id)?;
            Ok(icon_text(icon))
        }
        Format::Svg => svg::icon_fragment(icon, glyphs, None),
        Format::Html => html::icon_fragment(icon, glyphs, None),
    }
}

/// Foreground color readable on `background` (`#RRGGBB`).
pub(crate) fn foreground_for(background: &str) -> &'static str {
    let channel = |i: usize| u8::from_str_radix(&background[i..i + 2], 16).unwrap_or(0) as f64;
    let (r, g, b) = (channel(1), channel(3), channel(5));
    let luma = 0.299 * r + 0.587 * g + 0.114 * b;
    if luma > 140.0 {
        "#1A1A1A"
    } else {
        "#FFFFFF"
    }
}

pub(crate) fn escape_xml(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            _ => out.push(c),
        }
    }
    out
}

/// Human-visible text of a rendered payload: markup and `<style>` blocks
/// removed, entities decoded, whitespace collapsed.
pub fn visible_text(payload: &str) -> String {
    let mut text = String::with_capacity(payload.len());
    let mut rest = payload;
    while let Some(start) = rest.find('<') {
        text.push_str(&rest[..start]);
        text.push(' ');
        rest = &rest[start..];
        let skip_to = if rest.starts_with("<style") { "</style>" } else { ">" };
        match rest.find(skip_to) {
            Some(end) => rest = &rest[end + skip_to.len()..],
            None => rest = "",
        }
    }
    text.push_str(rest);
    let decoded = text
        .replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&quot;", "\"")
        .replace("&#39;", "'")
        .replace("&amp;", "&");
    decoded.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Entry in a stimulus set index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StimulusEntry {
    pub position: usize,
    pub source_id: String,
    pub file_name: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StimulusSet {
    pub condition: LayoutCondition,
    pub format: Format,
    pub documents: Vec<RenderedDocument>,
    pub index: Vec<StimulusEntry>,
}

impl StimulusSet {
    /// Tab-separated study administration index.
    pub fn index_text(&self) -> String {
        let mut out = format!(
            "# hazcast stimulus index v1\n# condition\t{}\n# format\t{}\nposition\tsource_id\tfile\n",
            self.condition, self.format
        );
        for e in &self.index {
            out.push_str(&format!("{}\t{}\t{}\n", e.position, e.source_id, e.file_name));
        }
        out
    }
}

/// Renders every document under the same condition (between-subjects: one
/// condition per set).
pub fn render_stimulus_set(
    docs: &[ForecastDocument],
    condition: LayoutCondition,
    format: Format,
    engine: &HazardEngine,
) -> Result<StimulusSet, RenderError> {
    let mut documents = Vec::with_capacity(docs.len());
    let mut index = Vec::with_capacity(docs.len());
    for (i, doc) in docs.iter().enumerate() {
        documents.push(render(doc, condition, format, engine)?);
        let stem: String = doc
            .source_id
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
            .collect();
        index.push(StimulusEntry {
            position: i + 1,
            source_id: doc.source_id.clone(),
            file_name: format!("{:02}-{}.{}.{}", i + 1, stem, condition, format.extension()),
        });
    }
    Ok(StimulusSet {
        condition,
        format,
        documents,
        index,
    })
}
