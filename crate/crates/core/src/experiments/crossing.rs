use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossingStatus {
    Found,
    /// The function never dropped below the target over the scan.
    AboveTargetEverywhere,
}

impl CrossingStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CrossingStatus::Found => "found",
            CrossingStatus::AboveTargetEverywhere => "above target everywhere",
        }
    }
}

/// Location of the first downward crossing of a target level.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalValue {
    pub target: f64,
    pub status: CrossingStatus,
    /// `None` unless `status` is [`CrossingStatus::Found`].
    pub value: Option<f64>,
    /// Final bracket `(lo, hi)` with `f(lo) >= target > f(hi)`.
    pub bracket: Option<(f64, f64)>,
    /// An increase of `f` was seen before the crossing.
    pub non_monotone: bool,
    pub evaluations: usize,
}

/// `start, start * ratio, ...` up to and including the first point `>= stop`.
pub fn geometric_scan(start: f64, stop: f64, ratio: f64) -> Result<Vec<f64>> {
    if !(start > 0.0 && stop > start && ratio > 1.0) {
        return Err(Error::Config(format!(
            "geometric scan needs 0 < start < stop and ratio > 1, got {start}, {stop}, {ratio}"
        )));
    }
    let mut out = vec![start];
    let mut x = start;
    while x < stop {
        x = (x * ratio).min(stop);
        out.push(x);
    }
    Ok(out)
}

/// Finds the smallest `x` where `f` drops below `target`, assuming
/// `f(0) > target`.
///
/// `scan` is walked in ascending order until the first point with
/// `f < target`; the last point at or above target (or `0`) and that point
/// bracket the crossing, which is then bisected until the bracket is no wider
/// than `min(abs_tol, rel_tol * hi)`.
pub fn first_downward_crossing(
    mut f: impl FnMut(f64) -> Result<f64>,
    scan: &[f64],
    target: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<CriticalValue> {
    if scan.is_empty() || scan[0] <= 0.0 || scan.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Config("crossing scan must be positive and strictly increasing".into()));
    }
    let mut evaluations = 0;
    let mut non_monotone = false;
    let mut lo = 0.0;
    let mut f_lo = f64::INFINITY;
    let mut hi = None;
    for &x in scan {
        let fx = f(x)?;
        evaluations += 1;
        if fx > f_lo + 1e-12 {
            non_monotone = true;
        }
        if fx < target {
            hi = Some(x);
            break;
        }
        lo = x;
        f_lo = fx;
    }
    let Some(mut hi) = hi else {
        return Ok(CriticalValue {
            target,
            status: CrossingStatus::AboveTargetEverywhere,
            value: None,
            bracket: None,
            non_monotone,
            evaluations,
        });
    };
    while hi - lo > abs_tol.min(rel_tol * hi) {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        evaluations += 1;
        if fm > f_lo + 1e-12 {
            non_monotone = true;
        }
        if fm < target {
            hi = mid;
        } else {
            lo = mid;
            f_lo = fm;
        }
    }
    Ok(CriticalValue {
        target,
        status: CrossingStatus::Found,
        value: Some(0.5 * (lo + hi)),
        bracket: Some((lo, hi)),
        non_monotone,
        evaluations,
    })
}
