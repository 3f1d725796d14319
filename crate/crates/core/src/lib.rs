//! Summit forecast tooling: parse the two-day/two-night text forecast,
//! derive cold-weather hazard icons from published scales, render the
//! forecast under four layouts and analyze risk-perception responses.

pub mod canonical;
pub mod diagnostics;
pub mod hazard;
pub mod model;
pub mod parser;
pub mod render;
pub mod scale;
pub mod stats;
pub mod synth;

pub use canonical::{emit_canonical, parse_canonical};
pub use diagnostics::{Diagnostic, ParseResult, Severity};
pub use hazard::{HazardEngine, HazardError, HazardIcon, IconMode, IconSet};
pub use model::{
    Certainty, Direction, ForecastDocument, ForecastPeriod, InvalidDocument, PrecipEvent,
    PrecipKind, ValueRange, WindPrediction,
};
pub use parser::parse_forecast;
pub use render::{render, Format, LayoutCondition, RenderedDocument};
pub use scale::{HazardKind, ScaleSet, ScaleTable};
pub use stats::{ResponseRecord, StatsError, StatsReport};
