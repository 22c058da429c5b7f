//! Prediction accuracy of the interference metrics against the measured
//! network performance metrics.
//!
//! For every pair of channel assignments, each prediction metric implies a
//! performance relationship (lower interference estimate = better CA). The
//! prediction error (PE) of a metric for a given performance measure is the
//! number of CA pairs whose observed relationship disagrees; the degree of
//! confidence is `(1 - PE / C(n, 2)) * 100`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::netsim::NpmSummary;
use crate::{Error, Result};

/// CA performance prediction metrics. All are oriented lower-is-better.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Cppm {
    Tid,
    CdalCost,
    CxlsWt,
}

impl Cppm {
    pub const ALL: [Cppm; 3] = [Cppm::Tid, Cppm::CdalCost, Cppm::CxlsWt];

    pub fn name(self) -> &'static str {
        match self {
            Cppm::Tid => "TID",
            Cppm::CdalCost => "CDAL_cost",
            Cppm::CxlsWt => "CXLS_wt",
        }
    }
}

impl std::fmt::Display for Cppm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Network performance metrics and their orientations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Npm {
    Throughput,
    Dfc,
    Pdr,
    Eed,
}

impl Npm {
    pub const ALL: [Npm; 4] = [Npm::Throughput, Npm::Dfc, Npm::Pdr, Npm::Eed];

    pub fn name(self) -> &'static str {
        match self {
            Npm::Throughput => "Throughput",
            Npm::Dfc => "DFC",
            Npm::Pdr => "PDR",
            Npm::Eed => "EED",
        }
    }

    /// Throughput and PDR improve as they rise; DFC and EED as they fall.
    pub fn higher_is_better(self) -> bool {
        matches!(self, Npm::Throughput | Npm::Pdr)
    }

    pub fn of(self, s: &NpmSummary) -> f64 {
        match self {
            Npm::Throughput => s.throughput_mbps,
            Npm::Dfc => s.dfc,
            Npm::Pdr => s.pdr_pct,
            Npm::Eed => s.eed_us,
        }
    }
}

impl std::fmt::Display for Npm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of comparing two values under an orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relationship {
    ABetter,
    BBetter,
    Tie,
}

/// Compare `a` and `b`: a tie within `eps`, otherwise whichever is better
/// under the orientation.
pub fn performance_relationship(a: f64, b: f64, higher_is_better: bool, eps: f64) -> Relationship {
    if (a - b).abs() <= eps {
        Relationship::Tie
    } else if (a > b) == higher_is_better {
        Relationship::ABetter
    } else {
        Relationship::BBetter
    }
}

/// Count CA pairs whose predicted relationship (lower metric = better)
/// disagrees with the observed one. A tie on exactly one side is a wrong
/// prediction; ties on both sides agree.
pub fn prediction_error(
    cppm_values: &BTreeMap<String, f64>,
    npm_values: &BTreeMap<String, f64>,
    npm_higher_is_better: bool,
    cppm_eps: f64,
    npm_eps: f64,
) -> Result<u32> {
    if cppm_values.len() != npm_values.len()
        || !cppm_values.keys().eq(npm_values.keys())
    {
        return Err(Error::Evaluation(format!(
            "CA key sets differ: [{}] vs [{}]",
            cppm_values.keys().cloned().collect::<Vec<_>>().join(","),
            npm_values.keys().cloned().collect::<Vec<_>>().join(","),
        )));
    }
    if cppm_values.len() < 2 {
        return Err(Error::Evaluation("need at least 2 CAs".into()));
    }
    let keys: Vec<&String> = cppm_values.keys().collect();
    let mut pe = 0;
    for i in 0..keys.len() {
        for j in (i + 1)..keys.len() {
            let predicted = performance_relationship(
                cppm_values[keys[i]],
                cppm_values[keys[j]],
                false, // lower estimate predicts better performance
                cppm_eps,
            );
            let observed = performance_relationship(
                npm_values[keys[i]],
                npm_values[keys[j]],
                npm_higher_is_better,
                npm_eps,
            );
            if predicted != observed {
                pe += 1;
            }
        }
    }
    Ok(pe)
}

/// `(1 - pe / C(n_cas, 2)) * 100`.
pub fn degree_of_confidence(pe: u32, n_cas: usize) -> Result<f64> {
    if n_cas < 2 {
        return Err(Error::Evaluation("need at least 2 CAs".into()));
    }
    let pairs = (n_cas * (n_cas - 1) / 2) as u32;
    if pe > pairs {
        return Err(Error::Evaluation(format!(
            "pe {pe} exceeds the {pairs} CA pairs"
        )));
    }
    Ok((1.0 - pe as f64 / pairs as f64) * 100.0)
}

/// The three interference estimates of one channel assignment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeMetrics {
    pub tid: u64,
    pub cdal_cost: f64,
    pub cxls_wt: u64,
}

impl SchemeMetrics {
    pub fn value(&self, cppm: Cppm) -> f64 {
        match cppm {
            Cppm::Tid => self.tid as f64,
            Cppm::CdalCost => self.cdal_cost,
            Cppm::CxlsWt => self.cxls_wt as f64,
        }
    }
}

/// Tie thresholds. Prediction metrics compare exactly by default; observed
/// metrics tie within a fraction of the largest observed magnitude.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EpsPolicy {
    pub cppm_eps: f64,
    pub npm_rel_eps: f64,
}

impl Default for EpsPolicy {
    fn default() -> Self {
        EpsPolicy {
            cppm_eps: 0.0,
            npm_rel_eps: 0.005,
        }
    }
}

/// One correlation point: `(metric value, npm value, scheme)`.
pub type SeriesPoint = (f64, f64, String);

/// PE and DoC for every (prediction metric, performance metric) cell plus
/// the correlation series behind them.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub n_cas: usize,
    pub pe: BTreeMap<(Cppm, Npm), u32>,
    pub doc: BTreeMap<(Cppm, Npm), f64>,
    /// Per cell: points sorted ascending by metric value.
    pub series: BTreeMap<(Cppm, Npm), Vec<SeriesPoint>>,
}

/// Build the full evaluation report from per-CA prediction metrics and
/// per-CA averaged performance metrics.
pub fn build_report(
    metrics: &BTreeMap<String, SchemeMetrics>,
    npms: &BTreeMap<String, NpmSummary>,
    eps: &EpsPolicy,
) -> Result<EvaluationReport> {
    if metrics.len() < 2 {
        return Err(Error::Evaluation("need at least 2 CAs".into()));
    }
    if !metrics.keys().eq(npms.keys()) {
        return Err(Error::Evaluation(
            "prediction metrics and NPM summaries cover different CA sets".into(),
        ));
    }
    let n_cas = metrics.len();
    let mut pe_map = BTreeMap::new();
    let mut doc_map = BTreeMap::new();
    let mut series_map = BTreeMap::new();
    for cppm in Cppm::ALL {
        let cppm_values: BTreeMap<String, f64> = metrics
            .iter()
            .map(|(k, m)| (k.clone(), m.value(cppm)))
            .collect();
        for npm in Npm::ALL {
            let npm_values: BTreeMap<String, f64> = npms
                .iter()
                .map(|(k, s)| (k.clone(), npm.of(s)))
                .collect();
            let npm_eps =
                eps.npm_rel_eps * npm_values.values().fold(0.0f64, |m, v| m.max(v.abs()));
            let pe = prediction_error(
                &cppm_values,
                &npm_values,
                npm.higher_is_better(),
                eps.cppm_eps,
                npm_eps,
            )?;
            let doc = degree_of_confidence(pe, n_cas)?;
            let mut series: Vec<SeriesPoint> = cppm_values
                .iter()
                .map(|(k, &mv)| (mv, npm_values[k], k.clone()))
                .collect();
            series.sort_by(|a, b| {
                a.0.partial_cmp(&b.0)
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then_with(|| a.2.cmp(&b.2))
            });
            pe_map.insert((cppm, npm), pe);
            doc_map.insert((cppm, npm), doc);
            series_map.insert((cppm, npm), series);
        }
    }
    Ok(EvaluationReport {
        n_cas,
        pe: pe_map,
        doc: doc_map,
        series: series_map,
    })
}

impl EvaluationReport {
    /// Human-readable DoC grid (rows: NPMs, columns: prediction metrics).
    pub fn doc_grid_string(&self) -> String {
        let mut out = String::new();
        writeln!(out, "Degree of Confidence (%)").unwrap();
        write!(out, "{:<12}", "NPM").unwrap();
        for cppm in Cppm::ALL {
            write!(out, "{:>12}", cppm.name()).unwrap();
        }
        out.push('\n');
        for npm in Npm::ALL {
            write!(out, "{:<12}", npm.name()).unwrap();
            for cppm in Cppm::ALL {
                write!(out, "{:>12.2}", self.doc[&(cppm, npm)]).unwrap();
            }
            out.push('\n');
        }
        out
    }

    fn grid_csv<T: std::fmt::Display>(map: &BTreeMap<(Cppm, Npm), T>) -> String {
        let mut out = String::from("npm");
        for cppm in Cppm::ALL {
            out.push(',');
            out.push_str(cppm.name());
        }
        out.push('\n');
        for npm in Npm::ALL {
            out.push_str(npm.name());
            for cppm in Cppm::ALL {
                write!(out, ",{}", map[&(cppm, npm)]).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn pe_grid_csv(&self) -> String {
        Self::grid_csv(&self.pe)
    }

    pub fn doc_grid_csv(&self) -> String {
        let rounded: BTreeMap<(Cppm, Npm), String> = self
            .doc
            .iter()
            .map(|(&k, &v)| (k, format!("{v:.2}")))
            .collect();
        Self::grid_csv(&rounded)
    }

    /// Plot data for one cell: `metric_value,npm_value,scheme`, ascending
    /// by metric value.
    pub fn series_csv(&self, cppm: Cppm, npm: Npm) -> String {
        let mut out = String::from("metric_value,npm_value,scheme\n");
        for (mv, nv, scheme) in &self.series[&(cppm, npm)] {
            writeln!(out, "{mv},{nv},{scheme}").unwrap();
        }
        out
    }
}
