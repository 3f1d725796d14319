//! Random valid forecasts for property tests and benchmarks.

use chrono::{DateTime, FixedOffset, TimeZone};
use rand::seq::IndexedRandom;
use rand::Rng;

use crate::model::{
    Certainty, Direction, ForecastDocument, ForecastPeriod, PrecipEvent, PrecipKind, ValueRange,
    WindPrediction,
};

const KINDS: [PrecipKind; 5] = [
    PrecipKind::Snow,
    PrecipKind::Sleet,
    PrecipKind::FreezingRain,
    PrecipKind::Rain,
    PrecipKind::Mixed,
];
const CERTAINTIES: [Certainty; 3] = [Certainty::Mentioned, Certainty::Likely, Certainty::Chance];
const NOTES: [&str; 5] = [
    "Dense fog with visibility near zero.",
    "Flood watch in effect for steep drainages.",
    "Whiteout conditions in blowing snow.",
    "Heavy rime icing on exposed surfaces.",
    "Rivers running \"bank-full\" after 2\" of rain; use caution.",
];
const SUMMARIES: [&str; 4] = [
    "Arctic air arrives behind a strong cold front.",
    "High pressure brings clear skies and light winds.",
    "Low pressure tracks up the coast with snow and strong winds.",
    "Milder air moves in aloft; a wintry mix changes to rain.",
];
pub const LABELS: [&str; 4] = ["Today", "Tonight", "Tomorrow", "Tomorrow Night"];

fn range<R: Rng + ?Sized>(rng: &mut R, min: f64, max: f64, max_width: f64) -> (f64, f64) {
    let low = rng.random_range(min..max);
    (low, low + rng.random_range(0.0..=max_width))
}

pub fn random_period<R: Rng + ?Sized>(rng: &mut R, label: &str) -> ForecastPeriod {
    let (tlo, thi) = range(rng, -50.0, 70.0, 20.0);
    let (wlo, whi) = range(rng, 0.0, 120.0, 30.0);
    let gust_high = rng
        .random_bool(0.4)
        .then(|| whi + rng.random_range(0.0..40.0));
    let wind_chill = rng
        .random_bool(0.3)
        .then(|| {
            let (lo, hi) = range(rng, -80.0, 30.0, 15.0);
            ValueRange::fahrenheit(lo, hi)
        });
    let mut precip_events: Vec<PrecipEvent> = (0..rng.random_range(0..=3))
        .map(|_| PrecipEvent {
            kind: *KINDS.choose(rng).unwrap(),
            certainty: *CERTAINTIES.choose(rng).unwrap(),
        })
        .collect();
    precip_events.sort();
    precip_events.dedup();
    let extra_hazard_notes = (0..rng.random_range(0..=2))
        .map(|_| NOTES.choose(rng).unwrap().to_string())
        .collect();
    ForecastPeriod {
        label: label.to_string(),
        temperature: ValueRange::fahrenheit(tlo, thi),
        wind: WindPrediction {
            direction: rng
                .random_bool(0.8)
                .then(|| *Direction::ALL.choose(rng).unwrap()),
            sustained: ValueRange::mph(wlo, whi),
            gust_high,
        },
        wind_chill,
        precip_events,
        extra_hazard_notes,
    }
}

pub fn random_issued_at<R: Rng + ?Sized>(rng: &mut R) -> DateTime<FixedOffset> {
    let offset = FixedOffset::east_opt(rng.random_range(-12..=14) * 3600 + 60 * *[0, 30, 45].choose(rng).unwrap())
        .expect("offset within a day");
    let secs = rng.random_range(1_600_000_000i64..2_000_000_000);
    offset.timestamp_opt(secs, 0).unwrap()
}

pub fn random_document<R: Rng + ?Sized>(rng: &mut R, source_id: &str) -> ForecastDocument {
    ForecastDocument {
        source_id: source_id.to_string(),
        issued_at: random_issued_at(rng),
        summary_text: (0..rng.random_range(1..=3))
            .map(|_| *SUMMARIES.choose(rng).unwrap())
            .collect::<Vec<_>>()
            .join(" "),
        periods: LABELS.iter().map(|l| random_period(rng, l)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_documents_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for i in 0..200 {
            let doc = random_document(&mut rng, &format!("doc-{i}"));
            assert!(validate(&doc).is_empty(), "{:?}", validate(&doc));
        }
    }
}
