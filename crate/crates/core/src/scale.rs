//! Hazard scale tables: versioned TOML files mapping a measured value to a
//! severity level, color and label.
//!
//! The four shipped tables live in `assets/scales/` and are compiled in;
//! [`ScaleSet::load_dir`] reads replacements from disk. Every table passes
//! the integrity checks in [`ScaleTable::from_toml`] or is rejected.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub const TABLE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HazardKind {
    Wind,
    WindChill,
    FreezingTemp,
    WinterPrecip,
}

impl HazardKind {
    /// Fixed display order of icons.
    pub const ORDER: [HazardKind; 4] = [
        HazardKind::Wind,
        HazardKind::WindChill,
        HazardKind::FreezingTemp,
        HazardKind::WinterPrecip,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            HazardKind::Wind => "wind",
            HazardKind::WindChill => "wind_chill",
            HazardKind::FreezingTemp => "freezing_temp",
            HazardKind::WinterPrecip => "winter_precip",
        }
    }

    pub fn file_name(&self) -> &'static str {
        match self {
            HazardKind::Wind => "beaufort.toml",
            HazardKind::WindChill => "wind_chill.toml",
            HazardKind::FreezingTemp => "freezing.toml",
            HazardKind::WinterPrecip => "winter_precip.toml",
        }
    }
}

impl fmt::Display for HazardKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which bound of a band belongs to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedEnd {
    Lower,
    Upper,
}

/// Direction along the value axis in which severity grows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Ascending,
    Descending,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Band {
    pub level: u8,
    pub low: f64,
    pub high: f64,
    pub color: String,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaleTable {
    pub version: u32,
    pub kind: HazardKind,
    pub name: String,
    pub unit: String,
    pub domain: [f64; 2],
    pub closed_end: ClosedEnd,
    pub severity: Severity,
    pub provenance: String,
    pub transcribed: String,
    /// Sorted by `low` after loading.
    pub bands: Vec<Band>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScaleError {
    #[error("{origin}: malformed table: {message}")]
    Malformed { origin: String, message: String },
    #[error("{origin}: integrity check failed: {message}")]
    Integrity { origin: String, message: String },
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
}

impl ScaleTable {
    /// Parses and checks a table. `origin` names the source in errors.
    pub fn from_toml(text: &str, origin: &str) -> Result<Self, ScaleError> {
        let mut table: ScaleTable = toml::from_str(text).map_err(|e| ScaleError::Malformed {
            origin: origin.to_string(),
            message: e.message().to_string(),
        })?;
        table.bands.sort_by(|a, b| a.low.total_cmp(&b.low));
        table.check().map_err(|message| ScaleError::Integrity {
            origin: origin.to_string(),
            message,
        })?;
        Ok(table)
    }

    fn check(&self) -> Result<(), String> {
        if self.version != TABLE_VERSION {
            return Err(format!("unsupported table version {}", self.version));
        }
        let [lo, hi] = self.domain;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(format!("domain [{lo}, {hi}] is not a finite interval"));
        }
        let bands = &self.bands;
        let (first, last) = match (bands.first(), bands.last()) {
            (Some(f), Some(l)) => (f, l),
            _ => return Err("no bands".into()),
        };
        if first.low != lo || last.high != hi {
            return Err(format!(
                "bands cover [{}, {}] but the domain is [{lo}, {hi}]",
                first.low, last.high
            ));
        }
        for b in bands {
            if b.low.partial_cmp(&b.high) != Some(std::cmp::Ordering::Less) {
                return Err(format!("level {} band [{}, {}] is empty", b.level, b.low, b.high));
            }
            if !is_hex_color(&b.color) {
                return Err(format!("level {} color '{}' is not #RRGGBB", b.level, b.color));
            }
        }
        for w in bands.windows(2) {
            if w[0].high != w[1].low {
                let what = if w[0].high < w[1].low { "gap" } else { "overlap" };
                return Err(format!(
                    "{what} between {} and {} (levels {} and {})",
                    w[0].high, w[1].low, w[0].level, w[1].level
                ));
            }
            let rising = w[1].level > w[0].level;
            let ok = match self.severity {
                Severity::Ascending => rising,
                Severity::Descending => w[1].level < w[0].level,
            };
            if !ok {
                return Err(format!(
                    "levels {} then {} do not strictly follow {:?} severity",
                    w[0].level, w[1].level, self.severity
                ));
            }
        }
        let mut levels: Vec<u8> = bands.iter().map(|b| b.level).collect();
        levels.sort_unstable();
        if levels.iter().enumerate().any(|(i, l)| *l as usize != i) {
            return Err("levels must be exactly 0..n".into());
        }
        Ok(())
    }

    /// Band containing `value`; values outside the domain clamp to the end bands.
    pub fn lookup(&self, value: f64) -> &Band {
        let [lo, hi] = self.domain;
        let v = value.clamp(lo, hi);
        let n = self.bands.len();
        let idx = match self.closed_end {
            // low <= v < high; the top band also holds the domain maximum
            ClosedEnd::Lower => self.bands.partition_point(|b| b.high <= v).min(n - 1),
            // low < v <= high; the bottom band also holds the domain minimum
            ClosedEnd::Upper => self.bands.partition_point(|b| b.high < v).min(n - 1),
        };
        &self.bands[idx]
    }

    pub fn band_for_level(&self, level: u8) -> Option<&Band> {
        self.bands.iter().find(|b| b.level == level)
    }

    pub fn max_level(&self) -> u8 {
        self.bands.iter().map(|b| b.level).max().unwrap_or(0)
    }
}

fn is_hex_color(s: &str) -> bool {
    s.len() == 7 && s.starts_with('#') && s[1..].chars().all(|c| c.is_ascii_hexdigit())
}

pub const SHIPPED_BEAUFORT: &str = include_str!("../assets/scales/beaufort.toml");
pub const SHIPPED_WIND_CHILL: &str = include_str!("../assets/scales/wind_chill.toml");
pub const SHIPPED_FREEZING: &str = include_str!("../assets/scales/freezing.toml");
pub const SHIPPED_WINTER_PRECIP: &str = include_str!("../assets/scales/winter_precip.toml");

/// The four tables the hazard engine needs.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleSet {
    pub wind: ScaleTable,
    pub wind_chill: ScaleTable,
    pub freezing: ScaleTable,
    pub winter_precip: ScaleTable,
}

impl ScaleSet {
    pub fn shipped() -> Self {
        Self::from_sources(|kind| {
            Ok(match kind {
                HazardKind::Wind => SHIPPED_BEAUFORT.to_string(),
                HazardKind::WindChill => SHIPPED_WIND_CHILL.to_string(),
                HazardKind::FreezingTemp => SHIPPED_FREEZING.to_string(),
                HazardKind::WinterPrecip => SHIPPED_WINTER_PRECIP.to_string(),
            })
        })
        .expect("shipped scale tables pass integrity checks")
    }

    /// Loads `beaufort.toml`, `wind_chill.toml`, `freezing.toml` and
    /// `winter_precip.toml` from `dir`.
    pub fn load_dir(dir: &Path) -> Result<Self, ScaleError> {
        Self::from_sources(|kind| {
            let path = dir.join(kind.file_name());
            std::fs::read_to_string(&path).map_err(|e| ScaleError::Io {
                path,
                message: e.to_string(),
            })
        })
    }

    fn from_sources(mut read: impl FnMut(HazardKind) -> Result<String, ScaleError>) -> Result<Self, ScaleError> {
        let mut load = |kind: HazardKind| -> Result<ScaleTable, ScaleError> {
            let text = read(kind)?;
            let table = ScaleTable::from_toml(&text, kind.file_name())?;
            if table.kind != kind {
                return Err(ScaleError::Integrity {
                    origin: kind.file_name().to_string(),
                    message: format!("table kind is {} but {} was expected", table.kind, kind),
                });
            }
            Ok(table)
        };
        Ok(Self {
            wind: load(HazardKind::Wind)?,
            wind_chill: load(HazardKind::WindChill)?,
            freezing: load(HazardKind::FreezingTemp)?,
            winter_precip: load(HazardKind::WinterPrecip)?,
        })
    }

    pub fn table(&self, kind: HazardKind) -> &ScaleTable {
        match kind {
            HazardKind::Wind => &self.wind,
            HazardKind::WindChill => &self.wind_chill,
            HazardKind::FreezingTemp => &self.freezing,
            HazardKind::WinterPrecip => &self.winter_precip,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_tables_load() {
        let set = ScaleSet::shipped();
        assert_eq!(set.wind.bands.len(), 13);
        assert_eq!(set.wind.max_level(), 12);
        assert_eq!(set.wind_chill.max_level(), 3);
        assert_eq!(set.wind.domain, [0.0, 200.0]);
        assert_eq!(set.wind_chill.domain, [-120.0, 50.0]);
    }

    #[test]
    fn closed_end_semantics() {
        let set = ScaleSet::shipped();
        assert_eq!(set.wind.lookup(1.0).level, 1);
        assert_eq!(set.wind.lookup(0.999).level, 0);
        assert_eq!(set.wind.lookup(200.0).level, 12);
        assert_eq!(set.wind.lookup(500.0).level, 12);
        assert_eq!(set.wind_chill.lookup(-16.0).level, 1);
        assert_eq!(set.wind_chill.lookup(-15.0).level, 0);
        assert_eq!(set.wind_chill.lookup(-120.0).level, 3);
        assert_eq!(set.wind_chill.lookup(-300.0).level, 3);
        assert_eq!(set.freezing.lookup(32.0).level, 0);
        assert_eq!(set.freezing.lookup(31.999).level, 1);
    }

    fn broken(edit: impl Fn(String) -> String) -> ScaleError {
        ScaleTable::from_toml(&edit(SHIPPED_BEAUFORT.to_string()), "test").unwrap_err()
    }

    #[test]
    fn gap_is_rejected() {
        let e = broken(|s| s.replacen("low = 4.0", "low = 5.0", 1));
        assert!(matches!(&e, ScaleError::Integrity { message, .. } if message.contains("gap")), "{e}");
    }

    #[test]
    fn overlap_is_rejected() {
        let e = broken(|s| s.replacen("low = 4.0", "low = 3.0", 1));
        assert!(matches!(&e, ScaleError::Integrity { message, .. } if message.contains("overlap")), "{e}");
    }

    #[test]
    fn short_coverage_is_rejected() {
        let e = broken(|s| s.replace("high = 200.0", "high = 150.0"));
        assert!(matches!(e, ScaleError::Integrity { .. }));
    }

    #[test]
    fn non_monotone_levels_rejected() {
        let e = broken(|s| s.replacen("level = 2", "level = 99", 1));
        assert!(matches!(e, ScaleError::Integrity { .. }));
    }

    #[test]
    fn bad_color_and_unknown_key_rejected() {
        let e = broken(|s| s.replacen("#AEF1F9", "blue", 1));
        assert!(e.to_string().contains("color"));
        let e = broken(|s| s.replacen("version = 1", "version = 1\nextra = 2", 1));
        assert!(matches!(e, ScaleError::Malformed { .. }));
    }

    #[test]
    fn wrong_kind_in_slot_rejected() {
        let dir = std::env::temp_dir().join(format!("hazcast-scale-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        std::fs::write(dir.join("beaufort.toml"), SHIPPED_WIND_CHILL).unwrap();
        std::fs::write(dir.join("wind_chill.toml"), SHIPPED_WIND_CHILL).unwrap();
        std::fs::write(dir.join("freezing.toml"), SHIPPED_FREEZING).unwrap();
        std::fs::write(dir.join("winter_precip.toml"), SHIPPED_WINTER_PRECIP).unwrap();
        let e = ScaleSet::load_dir(&dir).unwrap_err();
        assert!(e.to_string().contains("kind"), "{e}");
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn missing_dir_is_io_error() {
        let e = ScaleSet::load_dir(Path::new("/nonexistent/scales")).unwrap_err();
        assert!(matches!(e, ScaleError::Io { .. }));
    }
}
