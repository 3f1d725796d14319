//! Analysis of participant risk ratings: per-participant aggregation,
//! one-way ANOVA across layout conditions, pairwise t tests with
//! Bonferroni correction, t confidence intervals, risk-propensity
//! regression and coding tabulations.

mod io;
pub mod special;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::render::LayoutCondition;

pub use io::{join_records, plot_csv, read_participants, read_responses, text_report, Participant, ResponseRow};

/// Activities rated for risk, in column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Activity {
    CarTrip,
    DayHike,
    Mountaineering,
    BackcountrySkiing,
    SingleNightCamping,
    MultiNightCamping,
}

impl Activity {
    pub const ALL: [Activity; 6] = [
        Activity::CarTrip,
        Activity::DayHike,
        Activity::Mountaineering,
        Activity::BackcountrySkiing,
        Activity::SingleNightCamping,
        Activity::MultiNightCamping,
    ];

    pub fn column(&self) -> &'static str {
        match self {
            Activity::CarTrip => "car_trip",
            Activity::DayHike => "day_hike",
            Activity::Mountaineering => "mountaineering",
            Activity::BackcountrySkiing => "backcountry_skiing",
            Activity::SingleNightCamping => "single_night_camping",
            Activity::MultiNightCamping => "multi_night_camping",
        }
    }
}

impl fmt::Display for Activity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.column())
    }
}

pub const RATING_MIN: f64 = 0.0;
pub const RATING_MAX: f64 = 100.0;

/// One participant's ratings for one forecast.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseRecord {
    pub participant_id: String,
    pub condition: LayoutCondition,
    pub forecast_id: String,
    /// Indexed like [`Activity::ALL`]; `None` is a missing answer.
    pub activity_ratings: [Option<f64>; 6],
    pub grips_score: f64,
    pub mentioned_per_day_info: bool,
    pub mentioned_summary_only_info: bool,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StatsError {
    #[error("no records")]
    NoRecords,
    #[error("missing {activity} rating for participant '{participant}', forecast '{forecast}'")]
    MissingRating {
        participant: String,
        forecast: String,
        activity: Activity,
    },
    #[error("{activity} rating {value} for participant '{participant}', forecast '{forecast}' is outside [0, 100]")]
    RatingOutOfRange {
        participant: String,
        forecast: String,
        activity: Activity,
        value: f64,
    },
    #[error("participant '{0}' appears under more than one condition")]
    InconsistentCondition(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("{origin}: {message}")]
    Input { origin: String, message: String },
}

/// Sum of the six ratings of one record, in [0, 600].
pub fn aggregate_risk(record: &ResponseRecord) -> Result<f64, StatsError> {
    let mut sum = 0.0;
    for (activity, rating) in Activity::ALL.iter().zip(&record.activity_ratings) {
        let value = rating.ok_or_else(|| StatsError::MissingRating {
            participant: record.participant_id.clone(),
            forecast: record.forecast_id.clone(),
            activity: *activity,
        })?;
        if !(RATING_MIN..=RATING_MAX).contains(&value) {
            return Err(StatsError::RatingOutOfRange {
                participant: record.participant_id.clone(),
                forecast: record.forecast_id.clone(),
                activity: *activity,
                value,
            });
        }
        sum += value;
    }
    Ok(sum)
}

/// Mean aggregate risk over every forecast a participant rated.
pub fn participant_mean_risk(records: &[ResponseRecord]) -> Result<f64, StatsError> {
    if records.is_empty() {
        return Err(StatsError::NoRecords);
    }
    let mut total = 0.0;
    for r in records {
        total += aggregate_risk(r)?;
    }
    Ok(total / records.len() as f64)
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sum of squared deviations from the mean.
fn centered_ss(values: &[f64]) -> f64 {
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum()
}

/// Sample standard deviation (n − 1 denominator).
pub fn sample_sd(values: &[f64]) -> f64 {
    (centered_ss(values) / (values.len() as f64 - 1.0)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Anova {
    pub f: f64,
    pub df_between: usize,
    pub df_within: usize,
    pub p: f64,
    pub ss_between: f64,
    pub ss_within: f64,
}

fn check_groups<G: AsRef<[f64]>>(groups: &[G]) -> Result<(), StatsError> {
    if groups.len() < 2 {
        return Err(StatsError::Degenerate(format!(
            "need at least 2 groups, got {}",
            groups.len()
        )));
    }
    for (i, g) in groups.iter().enumerate() {
        let g = g.as_ref();
        if g.len() < 2 {
            return Err(StatsError::Degenerate(format!(
                "group {i} has {} value(s), need at least 2",
                g.len()
            )));
        }
        if g.iter().any(|v| !v.is_finite()) {
            return Err(StatsError::Degenerate(format!("group {i} has a non-finite value")));
        }
    }
    Ok(())
}

pub fn one_way_anova<G: AsRef<[f64]>>(groups: &[G]) -> Result<Anova, StatsError> {
    check_groups(groups)?;
    let all: Vec<f64> = groups.iter().flat_map(|g| g.as_ref().iter().copied()).collect();
    let grand = mean(&all);
    let ss_between: f64 = groups
        .iter()
        .map(|g| {
            let g = g.as_ref();
            let d = mean(g) - grand;
            g.len() as f64 * d * d
        })
        .sum();
    let ss_within: f64 = groups.iter().map(|g| centered_ss(g.as_ref())).sum();
    if ss_within == 0.0 {
        return Err(StatsError::Degenerate("zero variance within every group".into()));
    }
    let df_between = groups.len() - 1;
    let df_within = all.len() - groups.len();
    let f = (ss_between / df_between as f64) / (ss_within / df_within as f64);
    Ok(Anova {
        f,
        df_between,
        df_within,
        p: special::f_sf(f, df_between as f64, df_within as f64),
        ss_between,
        ss_within,
    })
}

/// `min(1, p × count)`.
pub fn bonferroni(p: f64, count: usize) -> f64 {
    (p * count as f64).min(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TTest {
    pub t: f64,
    pub df: usize,
    pub p: f64,
}

/// Independent-samples t test with pooled variance; `t > 0` when `a` has
/// the larger mean.
pub fn two_sample_t(a: &[f64], b: &[f64]) -> Result<TTest, StatsError> {
    check_groups(&[a, b])?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let df = a.len() + b.len() - 2;
    let pooled = (centered_ss(a) + centered_ss(b)) / df as f64;
    if pooled == 0.0 {
        return Err(StatsError::Degenerate("zero variance in both groups".into()));
    }
    let t = (mean(a) - mean(b)) / (pooled * (1.0 / na + 1.0 / nb)).sqrt();
    Ok(TTest {
        t,
        df,
        p: special::t_two_sided_p(t, df as f64),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairwiseTest {
    pub group_a: String,
    pub group_b: String,
    pub t: f64,
    pub df: usize,
    pub p_raw: f64,
    pub p_adjusted: f64,
}

/// Every pair of groups in input order. `correction_count` defaults to the
/// number of pairs.
pub fn pairwise_t_tests<G: AsRef<[f64]>>(
    groups: &[(String, G)],
    correction_count: Option<usize>,
) -> Result<Vec<PairwiseTest>, StatsError> {
    if groups.len() < 2 {
        return Err(StatsError::Degenerate(format!(
            "need at least 2 groups, got {}",
            groups.len()
        )));
    }
    let pairs = groups.len() * (groups.len() - 1) / 2;
    let count = correction_count.unwrap_or(pairs);
    let mut out = Vec::with_capacity(pairs);
    for i in 0..groups.len() {
        for j in i + 1..groups.len() {
            let test = two_sample_t(groups[i].1.as_ref(), groups[j].1.as_ref())?;
            out.push(PairwiseTest {
                group_a: groups[i].0.clone(),
                group_b: groups[j].0.clone(),
                t: test.t,
                df: test.df,
                p_raw: test.p,
                p_adjusted: bonferroni(test.p, count),
            });
        }
    }
    Ok(out)
}

/// 95% t confidence interval of the mean.
pub fn t_ci95(values: &[f64]) -> Result<(f64, f64), StatsError> {
    if values.len() < 2 {
        return Err(StatsError::Degenerate(format!(
            "confidence interval needs at least 2 values, got {}",
            values.len()
        )));
    }
    let n = values.len() as f64;
    let m = mean(values);
    let half = special::t_quantile(0.975, n - 1.0) * sample_sd(values) / n.sqrt();
    Ok((m - half, m + half))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Regression {
    pub n: usize,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub p: f64,
}

/// Least-squares line of risk on risk propensity; `p` tests slope = 0.
pub fn grips_regression(pairs: &[(f64, f64)]) -> Result<Regression, StatsError> {
    if pairs.len() < 3 {
        return Err(StatsError::Degenerate(format!(
            "regression needs at least 3 pairs, got {}",
            pairs.len()
        )));
    }
    if pairs.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(StatsError::Degenerate("non-finite regression input".into()));
    }
    let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let (mx, my) = (mean(&xs), mean(&ys));
    let sxx = centered_ss(&xs);
    if sxx == 0.0 {
        return Err(StatsError::Degenerate("predictor has zero variance".into()));
    }
    let sxy: f64 = pairs.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy = centered_ss(&ys);
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = pairs
        .iter()
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let r_squared = if syy == 0.0 {
        0.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    let df = (pairs.len() - 2) as f64;
    let p = if syy == 0.0 || slope == 0.0 {
        1.0
    } else if ss_res <= syy * 1e-24 {
        0.0
    } else {
        let se = (ss_res / df / sxx).sqrt();
        special::t_two_sided_p(slope / se, df)
    };
    Ok(Regression {
        n: pairs.len(),
        slope,
        intercept,
        r_squared,
        p,
    })
}

/// `count / total` with the percentage rounded half away from zero to two
/// decimals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Proportion {
    pub count: usize,
    pub total: usize,
    /// Percentage times 100, so 96.88% is 9688.
    pub percent_hundredths: u64,
}

impl Proportion {
    pub fn new(count: usize, total: usize) -> Self {
        let percent_hundredths = if total == 0 {
            0
        } else {
            let (c, t) = (count as u64, total as u64);
            (c * 20_000 + t) / (2 * t)
        };
        Self {
            count,
            total,
            percent_hundredths,
        }
    }

    pub fn percent(&self) -> f64 {
        self.percent_hundredths as f64 / 100.0
    }
}

impl fmt::Display for Proportion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{} = {}.{:02}%",
            self.count,
            self.total,
            self.percent_hundredths / 100,
            self.percent_hundredths % 100
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CodingRates {
    pub per_day_info: Proportion,
    pub summary_only_info: Proportion,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodingTable {
    pub overall: CodingRates,
    pub per_condition: Vec<(LayoutCondition, CodingRates)>,
}

fn rates<'a>(flags: impl Iterator<Item = (bool, bool)> + Clone + 'a) -> CodingRates {
    let total = flags.clone().count();
    CodingRates {
        per_day_info: Proportion::new(flags.clone().filter(|f| f.0).count(), total),
        summary_only_info: Proportion::new(flags.filter(|f| f.1).count(), total),
    }
}

/// Proportions of participants whose answers mention per-period details or
/// summary-only details. Each participant counts once.
pub fn coding_tabulation(records: &[ResponseRecord]) -> CodingTable {
    let mut by_participant: BTreeMap<&str, (LayoutCondition, bool, bool)> = BTreeMap::new();
    for r in records {
        by_participant.entry(&r.participant_id).or_insert((
            r.condition,
            r.mentioned_per_day_info,
            r.mentioned_summary_only_info,
        ));
    }
    let flags = || by_participant.values().map(|(_, a, b)| (*a, *b));
    let overall = rates(flags());
    let per_condition = LayoutCondition::ALL
        .iter()
        .filter(|c| by_participant.values().any(|v| v.0 == **c))
        .map(|c| {
            let it = by_participant
                .values()
                .filter(move |v| v.0 == *c)
                .map(|(_, a, b)| (*a, *b));
            (*c, rates(it))
        })
        .collect();
    CodingTable {
        overall,
        per_condition,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSummary {
    pub condition: LayoutCondition,
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsReport {
    pub records: usize,
    pub participants: usize,
    pub groups: Vec<GroupSummary>,
    pub anova: Anova,
    pub pairwise: Vec<PairwiseTest>,
    pub regression: Regression,
    pub coding: CodingTable,
}

/// Per-participant mean risk with the participant's condition and GRIPS
/// score, ordered by participant id.
pub fn participant_summaries(
    records: &[ResponseRecord],
) -> Result<Vec<(String, LayoutCondition, f64, f64)>, StatsError> {
    if records.is_empty() {
        return Err(StatsError::NoRecords);
    }
    let mut by: BTreeMap<&str, Vec<ResponseRecord>> = BTreeMap::new();
    for r in records {
        by.entry(&r.participant_id).or_default().push(r.clone());
    }
    let mut out = Vec::with_capacity(by.len());
    for (id, recs) in by {
        let condition = recs[0].condition;
        if recs.iter().any(|r| r.condition != condition) {
            return Err(StatsError::InconsistentCondition(id.to_string()));
        }
        out.push((
            id.to_string(),
            condition,
            recs[0].grips_score,
            participant_mean_risk(&recs)?,
        ));
    }
    Ok(out)
}

/// Full analysis: one value per participant, groups by condition.
pub fn analyze(records: &[ResponseRecord]) -> Result<StatsReport, StatsError> {
    let participants = participant_summaries(records)?;
    let mut by_condition: BTreeMap<LayoutCondition, Vec<f64>> = BTreeMap::new();
    for (_, c, _, risk) in &participants {
        by_condition.entry(*c).or_default().push(*risk);
    }
    let groups: Vec<(LayoutCondition, Vec<f64>)> = by_condition.into_iter().collect();
    let values: Vec<&[f64]> = groups.iter().map(|g| g.1.as_slice()).collect();
    let anova = one_way_anova(&values)?;
    let named: Vec<(String, &[f64])> = groups
        .iter()
        .map(|(c, v)| (c.to_string(), v.as_slice()))
        .collect();
    let pairwise = pairwise_t_tests(&named, None)?;
    let mut summaries = Vec::with_capacity(groups.len());
    for (c, v) in &groups {
        let (lo, hi) = t_ci95(v)?;
        summaries.push(GroupSummary {
            condition: *c,
            n: v.len(),
            mean: mean(v),
            sd: sample_sd(v),
            ci95_low: lo,
            ci95_high: hi,
        });
    }
    let pairs: Vec<(f64, f64)> = participants.iter().map(|p| (p.2, p.3)).collect();
    Ok(StatsReport {
        records: records.len(),
        participants: participants.len(),
        groups: summaries,
        anova,
        pairwise,
        regression: grips_regression(&pairs)?,
        coding: coding_tabulation(records),
    })
}
