use std::fmt;
use std::ops::Range;

use crate::model::ForecastDocument;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Note,
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Note => "note",
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

/// A message attached to a byte span of the parsed input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub span: Range<usize>,
    pub message: String,
}

impl Diagnostic {
    pub fn error(span: Range<usize>, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Error,
            span,
            message: message.into(),
        }
    }

    pub fn warning(span: Range<usize>, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Warning,
            span,
            message: message.into(),
        }
    }

    pub fn note(span: Range<usize>, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Note,
            span,
            message: message.into(),
        }
    }

    /// `severity:line:col message`, 1-based line and column (columns count
    /// characters, not bytes).
    pub fn render(&self, source: &str) -> String {
        let (line, col) = line_col(source, self.span.start);
        format!("{}:{}:{} {}", self.severity, line, col, self.message)
    }
}

pub fn line_col(source: &str, offset: usize) -> (usize, usize) {
    let mut offset = offset.min(source.len());
    while !source.is_char_boundary(offset) {
        offset -= 1;
    }
    let before = &source[..offset];
    let line = before.matches('\n').count() + 1;
    let line_start = before.rfind('\n').map_or(0, |i| i + 1);
    let col = source[line_start..offset].chars().count() + 1;
    (line, col)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseResult {
    /// Present iff no diagnostic has error severity.
    pub document: Option<ForecastDocument>,
    pub diagnostics: Vec<Diagnostic>,
    /// Fraction of input characters consumed by recognized constructs.
    pub coverage: f64,
}

impl ParseResult {
    pub(crate) fn finish(
        document: Option<ForecastDocument>,
        mut diagnostics: Vec<Diagnostic>,
        coverage: f64,
    ) -> Self {
        diagnostics.sort_by(|a, b| a.span.start.cmp(&b.span.start).then(b.severity.cmp(&a.severity)));
        let has_error = diagnostics.iter().any(|d| d.severity == Severity::Error);
        Self {
            document: if has_error { None } else { document },
            diagnostics,
            coverage: coverage.clamp(0.0, 1.0),
        }
    }

    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(|d| d.severity == Severity::Error)
    }

    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics.iter().filter(|d| d.severity == Severity::Error)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_col_counts_characters() {
        let src = "ab\n°F x";
        assert_eq!(line_col(src, 0), (1, 1));
        assert_eq!(line_col(src, 3), (2, 1));
        // '°' is two bytes
        assert_eq!(line_col(src, 6), (2, 3));
        assert_eq!(line_col(src, 99), (2, 5));
    }

    #[test]
    fn render_format() {
        let d = Diagnostic::error(3..5, "expected 4 periods, found 2");
        assert_eq!(d.render("ab\ncd"), "error:2:1 expected 4 periods, found 2");
    }
}
