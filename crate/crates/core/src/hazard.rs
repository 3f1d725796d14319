//! Wind chill, scale classification and hazard icon derivation.
//!
//! Icon derivation reads nothing but the forecast period and the loaded
//! scale tables.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::model::{
    ensure_valid, validate_period, worst_case_of, ForecastDocument, ForecastPeriod, InvalidDocument,
    ValueRange, Violation,
};
use crate::scale::{HazardKind, ScaleSet};

/// NWS (2001) wind chill temperature index coefficients, °F and mph:
/// `WC = 35.74 + 0.6215·T − 35.75·V^0.16 + 0.4275·T·V^0.16`.
pub const WIND_CHILL_C0: f64 = 35.74;
pub const WIND_CHILL_C_T: f64 = 0.6215;
pub const WIND_CHILL_C_V: f64 = 35.75;
pub const WIND_CHILL_C_TV: f64 = 0.4275;
pub const WIND_CHILL_EXPONENT: f64 = 0.16;
/// The index is defined for air temperatures at or below 50 °F ...
pub const WIND_CHILL_MAX_TEMP_F: f64 = 50.0;
/// ... and winds above 3 mph.
pub const WIND_CHILL_MIN_WIND_MPH: f64 = 3.0;

/// Default Beaufort force from which the wind icon is shown.
pub const DEFAULT_WIND_FLOOR: u8 = 6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindChillInput {
    /// Air temperature, °F.
    pub temperature: f64,
    /// Wind speed, mph; never negative.
    pub wind_speed: f64,
}

/// Wind chill in °F, unrounded. Outside the index's validity domain the air
/// temperature is returned unchanged.
pub fn wind_chill(input: WindChillInput) -> f64 {
    let WindChillInput {
        temperature: t,
        wind_speed: v,
    } = input;
    if t > WIND_CHILL_MAX_TEMP_F || v <= WIND_CHILL_MIN_WIND_MPH {
        return t;
    }
    let vp = v.powf(WIND_CHILL_EXPONENT);
    WIND_CHILL_C0 + WIND_CHILL_C_T * t - WIND_CHILL_C_V * vp + WIND_CHILL_C_TV * t * vp
}

/// Half-away-from-zero rounding to whole degrees, matching the chart.
pub fn round_wind_chill(wc: f64) -> f64 {
    wc.round()
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HazardError {
    #[error("wind speed must be non-negative, got {0}")]
    NegativeWind(f64),
    #[error("invalid forecast period: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidPeriod(Vec<Violation>),
    #[error(transparent)]
    InvalidDocument(#[from] InvalidDocument),
    #[error("triad advisory requires explicit thresholds")]
    MissingThresholds,
    #[error("invalid triad thresholds: {0}")]
    BadThresholds(String),
}

/// Carried on a wind icon when gusts reach a higher Beaufort force than the
/// sustained wind. The icon level itself stays on sustained wind.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GustAnnotation {
    pub gust_mph: f64,
    pub force: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HazardIcon {
    pub kind: HazardKind,
    pub level: u8,
    /// `#RRGGBB`, looked up from the scale table by (kind, level).
    pub color: String,
    pub scale_name: String,
    pub level_label: String,
    pub glyph_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gust: Option<GustAnnotation>,
}

pub fn glyph_id(kind: HazardKind) -> &'static str {
    match kind {
        HazardKind::Wind => "wind",
        HazardKind::WindChill => "wind-chill",
        HazardKind::FreezingTemp => "freezing",
        HazardKind::WinterPrecip => "winter-precip",
    }
}

/// Icons in the fixed kind order, at most one per kind.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct IconSet(Vec<HazardIcon>);

impl IconSet {
    pub fn icons(&self) -> &[HazardIcon] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, kind: HazardKind) -> Option<&HazardIcon> {
        self.0.iter().find(|i| i.kind == kind)
    }

    /// Level of the icon of `kind`, or 0 when that icon is absent.
    pub fn level_of(&self, kind: HazardKind) -> u8 {
        self.get(kind).map_or(0, |i| i.level)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, HazardIcon> {
        self.0.iter()
    }
}

impl<'a> IntoIterator for &'a IconSet {
    type Item = &'a HazardIcon;
    type IntoIter = std::slice::Iter<'a, HazardIcon>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IconMode {
    Overall,
    PerPeriod,
}

impl fmt::Display for IconMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IconMode::Overall => "overall",
            IconMode::PerPeriod => "per-period",
        })
    }
}

impl std::str::FromStr for IconMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "overall" => Ok(IconMode::Overall),
            "per-period" => Ok(IconMode::PerPeriod),
            _ => Err(format!("unknown mode '{s}'; valid modes: overall, per-period")),
        }
    }
}

/// Loaded scale tables plus the wind display floor. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct HazardEngine {
    scales: ScaleSet,
    wind_floor: u8,
}

impl Default for HazardEngine {
    fn default() -> Self {
        Self::new(ScaleSet::shipped())
    }
}

impl HazardEngine {
    pub fn new(scales: ScaleSet) -> Self {
        Self {
            scales,
            wind_floor: DEFAULT_WIND_FLOOR,
        }
    }

    pub fn with_wind_floor(mut self, floor: u8) -> Self {
        self.wind_floor = floor;
        self
    }

    pub fn wind_floor(&self) -> u8 {
        self.wind_floor
    }

    pub fn scales(&self) -> &ScaleSet {
        &self.scales
    }

    pub fn beaufort_force(&self, sustained_high_mph: f64) -> Result<u8, HazardError> {
        if sustained_high_mph.is_nan() || sustained_high_mph < 0.0 {
            return Err(HazardError::NegativeWind(sustained_high_mph));
        }
        Ok(self.scales.wind.lookup(sustained_high_mph).level)
    }

    /// Frostbite-time category 0..=3 of a wind chill, rounded first.
    pub fn wind_chill_category(&self, wc: f64) -> u8 {
        self.scales.wind_chill.lookup(round_wind_chill(wc)).level
    }

    /// Worst wind chill of a period: the stated low when the forecast gives
    /// one, otherwise computed from the coldest temperature and strongest wind.
    pub fn effective_wind_chill(period: &ForecastPeriod) -> f64 {
        match &period.wind_chill {
            Some(range) => range.low,
            None => wind_chill(WindChillInput {
                temperature: period.temperature.low,
                wind_speed: period.wind.sustained.high,
            }),
        }
    }

    pub fn derive_icons(&self, period: &ForecastPeriod) -> Result<IconSet, HazardError> {
        let violations = validate_period(period, "period");
        if !violations.is_empty() {
            return Err(HazardError::InvalidPeriod(violations));
        }
        let mut icons = Vec::with_capacity(4);

        let force = self.beaufort_force(period.wind.sustained.high)?;
        if force >= self.wind_floor {
            let gust = period.wind.gust_high.and_then(|g| {
                let gust_force = self.scales.wind.lookup(g).level;
                (gust_force > force).then_some(GustAnnotation {
                    gust_mph: g,
                    force: gust_force,
                })
            });
            let mut icon = self.icon(HazardKind::Wind, force);
            icon.gust = gust;
            icons.push(icon);
        }

        let wc_level = self.wind_chill_category(Self::effective_wind_chill(period));
        if wc_level >= 1 {
            icons.push(self.icon(HazardKind::WindChill, wc_level));
        }

        let freezing = self.scales.freezing.lookup(period.temperature.low).level;
        if freezing >= 1 {
            icons.push(self.icon(HazardKind::FreezingTemp, freezing));
        }

        let winter_events = period
            .precip_events
            .iter()
            .filter(|e| e.kind.is_winter())
            .count();
        let precip = self.scales.winter_precip.lookup(winter_events as f64).level;
        if precip >= 1 {
            icons.push(self.icon(HazardKind::WinterPrecip, precip));
        }

        Ok(IconSet(icons))
    }

    fn icon(&self, kind: HazardKind, level: u8) -> HazardIcon {
        let table = self.scales.table(kind);
        let band = table
            .band_for_level(level)
            .expect("level produced by this table's own lookup");
        HazardIcon {
            kind,
            level,
            color: band.color.clone(),
            scale_name: table.name.clone(),
            level_label: band.label.clone(),
            glyph_id: glyph_id(kind).to_string(),
            gust: None,
        }
    }

    /// Overall mode gives one set for the 48-hour worst case; per-period
    /// mode one set per period, in order.
    pub fn derive_document_icons(
        &self,
        doc: &ForecastDocument,
        mode: IconMode,
    ) -> Result<Vec<IconSet>, HazardError> {
        ensure_valid(doc)?;
        match mode {
            IconMode::PerPeriod => doc.periods.iter().map(|p| self.derive_icons(p)).collect(),
            IconMode::Overall => {
                // Missing wind chills are filled per period first so the worst
                // case never pairs one period's temperature with another's wind.
                let resolved: Vec<ForecastPeriod> =
                    doc.periods.iter().map(resolve_wind_chill).collect();
                Ok(vec![self.derive_icons(&worst_case_of(&resolved))?])
            }
        }
    }

    /// Triad rule: one dangerous factor among wind, visibility and
    /// temperature is caution, two or more is no-go. Thresholds have no
    /// defaults and must be supplied.
    pub fn triad_advisory(
        &self,
        period: &ForecastPeriod,
        thresholds: Option<&TriadThresholds>,
    ) -> Result<TriadAdvisory, HazardError> {
        let th = thresholds.ok_or(HazardError::MissingThresholds)?;
        let violations = validate_period(period, "period");
        if !violations.is_empty() {
            return Err(HazardError::InvalidPeriod(violations));
        }
        let mut factors = Vec::new();
        if period.wind.sustained.high >= th.wind_mph {
            factors.push(TriadFactor::Wind);
        }
        let poor_visibility = period.extra_hazard_notes.iter().any(|note| {
            let lower = note.to_lowercase();
            lower
                .split(|c: char| !c.is_alphanumeric())
                .any(|w| VISIBILITY_WORDS.contains(&w))
        });
        if poor_visibility {
            factors.push(TriadFactor::Visibility);
        }
        if period.temperature.low <= th.temperature_f {
            factors.push(TriadFactor::Temperature);
        }
        Ok(TriadAdvisory::from_factors(factors))
    }
}

const VISIBILITY_WORDS: &[&str] = &["fog", "foggy", "visibility", "visibilities", "whiteout"];

/// Copy of `period` with its wind chill filled from the formula when absent.
pub fn resolve_wind_chill(period: &ForecastPeriod) -> ForecastPeriod {
    let mut p = period.clone();
    if p.wind_chill.is_none() {
        let coldest = wind_chill(WindChillInput {
            temperature: p.temperature.low,
            wind_speed: p.wind.sustained.high,
        });
        let mildest = wind_chill(WindChillInput {
            temperature: p.temperature.high,
            wind_speed: p.wind.sustained.low,
        });
        p.wind_chill = Some(ValueRange::fahrenheit(coldest, mildest.max(coldest)));
    }
    p
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriadThresholds {
    /// Sustained wind at or above this is dangerous, mph.
    pub wind_mph: f64,
    /// Low temperature at or below this is dangerous, °F.
    pub temperature_f: f64,
}

impl TriadThresholds {
    pub fn from_toml(text: &str) -> Result<Self, HazardError> {
        let th: TriadThresholds =
            toml::from_str(text).map_err(|e| HazardError::BadThresholds(e.message().to_string()))?;
        if !th.wind_mph.is_finite() || !th.temperature_f.is_finite() || th.wind_mph < 0.0 {
            return Err(HazardError::BadThresholds("thresholds must be finite, wind non-negative".into()));
        }
        Ok(th)
    }

    pub fn load(path: &Path) -> Result<Self, HazardError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HazardError::BadThresholds(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TriadFactor {
    Wind,
    Visibility,
    Temperature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Go,
    Caution,
    NoGo,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Go => "go",
            Verdict::Caution => "caution",
            Verdict::NoGo => "no_go",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriadAdvisory {
    pub factors_dangerous: Vec<TriadFactor>,
    pub verdict: Verdict,
}

impl TriadAdvisory {
    pub fn from_factors(mut factors: Vec<TriadFactor>) -> Self {
        factors.sort();
        factors.dedup();
        let verdict = match factors.len() {
            0 => Verdict::Go,
            1 => Verdict::Caution,
            _ => Verdict::NoGo,
        };
        Self {
            factors_dangerous: factors,
            verdict,
        }
    }
}
