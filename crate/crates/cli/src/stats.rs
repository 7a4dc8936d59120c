//! Small summary statistics over experiment records.

use crate::record::SampleRecord;

pub fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[mid] } else { 0.5 * (v[mid - 1] + v[mid]) })
}

/// Least-squares line `y ≈ slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination.
    pub r_squared: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let mx = mean(xs)?;
    let my = mean(ys)?;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Some(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Per-parameter aggregate of one experiment id.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamSummary {
    pub param: f64,
    pub samples: usize,
    pub mean_ratio: Option<f64>,
    pub mean_eps_det: Option<f64>,
    pub mean_eps_rnd: Option<f64>,
    pub mean_t_rnd_ms: Option<f64>,
    pub mean_t_det_ms: Option<f64>,
}

/// Groups the records of `experiment` by parameter value, in first-seen order.
pub fn summarize(records: &[SampleRecord], experiment: &str) -> Vec<ParamSummary> {
    let mut params: Vec<f64> = Vec::new();
    for r in records.iter().filter(|r| r.experiment == experiment) {
        if !params.contains(&r.param) {
            params.push(r.param);
        }
    }
    params
        .into_iter()
        .map(|param| {
            let group: Vec<&SampleRecord> = records
                .iter()
                .filter(|r| r.experiment == experiment && r.param == param)
                .collect();
            let collect = |f: fn(&SampleRecord) -> Option<f64>| {
                mean(&group.iter().filter_map(|r| f(r)).collect::<Vec<_>>())
            };
            ParamSummary {
                param,
                samples: group.len(),
                mean_ratio: collect(|r| r.ratio),
                mean_eps_det: collect(|r| r.eps_det),
                mean_eps_rnd: collect(|r| r.eps_rnd),
                mean_t_rnd_ms: collect(|r| r.t_rnd_ms),
                mean_t_det_ms: collect(|r| r.t_det_ms),
            }
        })
        .collect()
}
