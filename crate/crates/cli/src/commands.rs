use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use hazcast_core::canonical::{emit_canonical, looks_canonical, parse_canonical};
use hazcast_core::diagnostics::Severity;
use hazcast_core::hazard::{HazardEngine, HazardError, IconMode, IconSet, TriadThresholds};
use hazcast_core::model::{worst_case_view, ForecastDocument, ForecastPeriod};
use hazcast_core::parser::parse_forecast;
use hazcast_core::render::{render_stimulus_set, Format, LayoutCondition, RenderError};
use hazcast_core::scale::{HazardKind, ScaleError, ScaleSet};
use hazcast_core::stats::{self, StatsError};
use hazcast_core::ParseResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Internal,
}

impl ErrorKind {
    pub fn code(self) -> u8 {
        match self {
            ErrorKind::Input => 1,
            ErrorKind::Internal => 2,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Input,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Internal,
            message: message.into(),
        }
    }
}

impl From<ScaleError> for CliError {
    fn from(e: ScaleError) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<StatsError> for CliError {
    fn from(e: StatsError) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<HazardError> for CliError {
    fn from(e: HazardError) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<RenderError> for CliError {
    fn from(e: RenderError) -> Self {
        match e {
            RenderError::UnknownGlyph(_) => CliError::internal(e.to_string()),
            _ => CliError::input(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => write(path, bytes),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::input(format!("stdout: {e}")))
        }
    }
}

/// Parses either format, picked by content. Warnings go to stderr.
fn load_document(path: &Path) -> Result<ForecastDocument, CliError> {
    let text = read(path)?;
    let result: ParseResult = if looks_canonical(&text) {
        parse_canonical(&text)
    } else {
        parse_forecast(&text)
    };
    let errors: Vec<String> = result
        .diagnostics
        .iter()
        .filter(|d| d.severity == Severity::Error)
        .map(|d| d.render(&text))
        .collect();
    if let Some(first) = errors.first() {
        let more = match errors.len() {
            1 => String::new(),
            n => format!(" (+{} more)", n - 1),
        };
        return Err(CliError::input(format!("{}: {first}{more}", path.display())));
    }
    for d in &result.diagnostics {
        eprintln!("hazcast: {}: {}", path.display(), d.render(&text));
    }
    result
        .document
        .ok_or_else(|| CliError::internal(format!("{}: parser returned no document and no error", path.display())))
}

pub fn engine(tables: Option<&Path>, wind_floor: Option<u8>) -> Result<HazardEngine, CliError> {
    let scales = match tables {
        Some(dir) => ScaleSet::load_dir(dir)?,
        None => ScaleSet::shipped(),
    };
    let engine = HazardEngine::new(scales);
    Ok(match wind_floor {
        Some(f) => engine.with_wind_floor(f),
        None => engine,
    })
}

pub fn parse(input: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let doc = load_document(input)?;
    let text = emit_canonical(&doc).map_err(|e| CliError::internal(e.to_string()))?;
    emit(out, text.as_bytes())
}

fn push_icons(listing: &mut String, scope: &str, icons: &IconSet) {
    if icons.is_empty() {
        let _ = writeln!(listing, "none\t{scope}");
    }
    for icon in icons.iter() {
        let gust = icon.gust.map_or("-".to_string(), |g| format!("F{}", g.force));
        let _ = writeln!(
            listing,
            "icon\t{scope}\t{}\t{}\t{}\t{}\t{gust}",
            icon.kind, icon.level, icon.color, icon.level_label
        );
    }
}

fn push_advisory(
    listing: &mut String,
    scope: &str,
    engine: &HazardEngine,
    period: &ForecastPeriod,
    thresholds: &TriadThresholds,
) -> Result<(), CliError> {
    let advisory = engine.triad_advisory(period, Some(thresholds))?;
    let factors: Vec<&str> = advisory
        .factors_dangerous
        .iter()
        .map(|f| match f {
            hazcast_core::hazard::TriadFactor::Wind => "wind",
            hazcast_core::hazard::TriadFactor::Visibility => "visibility",
            hazcast_core::hazard::TriadFactor::Temperature => "temperature",
        })
        .collect();
    let factors = if factors.is_empty() { "-".to_string() } else { factors.join(",") };
    let _ = writeln!(listing, "advisory\t{scope}\t{}\t{factors}", advisory.verdict);
    Ok(())
}

/// Tab-separated icon listing for one document.
pub fn icon_listing(
    doc: &ForecastDocument,
    mode: IconMode,
    engine: &HazardEngine,
    thresholds: Option<&TriadThresholds>,
) -> Result<String, CliError> {
    let sets = engine.derive_document_icons(doc, mode)?;
    let mut listing = format!(
        "# hazcast icons v1\n# source\t{}\n# mode\t{mode}\n# record\tscope\tkind\tlevel\tcolor\tlabel\tgust\n",
        doc.source_id
    );
    match mode {
        IconMode::Overall => push_icons(&mut listing, "overall", &sets[0]),
        IconMode::PerPeriod => {
            for (p, icons) in doc.periods.iter().zip(&sets) {
                push_icons(&mut listing, &p.label, icons);
            }
        }
    }
    if let Some(th) = thresholds {
        match mode {
            IconMode::Overall => {
                let worst = worst_case_view(doc).map_err(|e| CliError::input(e.to_string()))?;
                push_advisory(&mut listing, "overall", engine, &worst, th)?;
            }
            IconMode::PerPeriod => {
                for p in &doc.periods {
                    push_advisory(&mut listing, &p.label, engine, p, th)?;
                }
            }
        }
    }
    Ok(listing)
}

pub fn classify(
    input: &Path,
    mode: IconMode,
    thresholds: Option<&Path>,
    out: Option<&Path>,
    engine: &HazardEngine,
) -> Result<(), CliError> {
    let thresholds = thresholds.map(TriadThresholds::load).transpose()?;
    let doc = load_document(input)?;
    let listing = icon_listing(&doc, mode, engine, thresholds.as_ref())?;
    emit(out, listing.as_bytes())
}

pub fn render(
    input: &Path,
    condition: LayoutCondition,
    format: Format,
    out: Option<&Path>,
    manifest: Option<&Path>,
    engine: &HazardEngine,
) -> Result<(), CliError> {
    let doc = load_document(input)?;
    let rendered = hazcast_core::render(&doc, condition, format, engine)?;
    emit(out, &rendered.payload)?;
    if let Some(path) = manifest {
        write(path, rendered.manifest_text().as_bytes())?;
    }
    Ok(())
}

pub fn stimuli(
    inputs: &[std::path::PathBuf],
    condition: LayoutCondition,
    format: Format,
    out: &Path,
    engine: &HazardEngine,
) -> Result<(), CliError> {
    let docs = inputs
        .iter()
        .map(|p| load_document(p))
        .collect::<Result<Vec<_>, _>>()?;
    let set = render_stimulus_set(&docs, condition, format, engine)?;
    fs::create_dir_all(out).map_err(|e| CliError::input(format!("{}: {e}", out.display())))?;
    for (doc, entry) in set.documents.iter().zip(&set.index) {
        write(&out.join(&entry.file_name), &doc.payload)?;
        let manifest = Path::new(&entry.file_name).with_extension("manifest.tsv");
        write(&out.join(manifest), doc.manifest_text().as_bytes())?;
    }
    write(&out.join("index.tsv"), set.index_text().as_bytes())
}

pub fn stats(responses: &Path, participants: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let open = |p: &Path| fs::File::open(p).map_err(|e| CliError::input(format!("{}: {e}", p.display())));
    let rows = stats::read_responses(open(responses)?, &responses.display().to_string())?;
    let people = stats::read_participants(open(participants)?, &participants.display().to_string())?;
    let records = stats::join_records(&rows, &people)?;
    let report = stats::analyze(&records)?;
    let text = stats::text_report(&report);
    match out {
        None => emit(None, text.as_bytes()),
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| CliError::input(format!("{}: {e}", dir.display())))?;
            let mut json = serde_json::to_string_pretty(&report).map_err(|e| CliError::internal(e.to_string()))?;
            json.push('\n');
            write(&dir.join("report.json"), json.as_bytes())?;
            write(&dir.join("report.txt"), text.as_bytes())?;
            write(&dir.join("plot.csv"), stats::plot_csv(&report).as_bytes())
        }
    }
}

pub fn validate_tables(tables: Option<&Path>) -> Result<(), CliError> {
    let scales = match tables {
        Some(dir) => ScaleSet::load_dir(dir)?,
        None => ScaleSet::shipped(),
    };
    let mut listing = String::new();
    for kind in HazardKind::ORDER {
        let table = scales.table(kind);
        let _ = writeln!(
            listing,
            "ok\t{}\t{} bands\tlevels 0-{}",
            kind.file_name(),
            table.bands.len(),
            table.max_level()
        );
    }
    emit(None, listing.as_bytes())
}
