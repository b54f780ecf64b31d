use rayon::prelude::*;

use super::fit::{power_law_fit, FitResult};
use crate::error::Result;
use crate::splitter::{find_balance_time, BalanceResult, BALANCE_THRESHOLD};

pub const SCALING_SITES: [usize; 5] = [3, 4, 5, 7, 9];
pub const SCALING_WINDOW: (f64, f64) = (0.0, 600.0);

/// Balance times across ring sizes with the fitted law `tau J = c S^p`.
#[derive(Debug, Clone)]
pub struct JtScaling {
    pub balances: Vec<BalanceResult>,
    pub fit: FitResult,
    pub max_tau: f64,
    /// Every ring reached `chi <= threshold`.
    pub all_balanced: bool,
}

/// Searches each ring size for its balance time over `window` and fits
/// `tau J` against `S` in log-log space. Rings that never balance enter the
/// fit with their best time and clear `all_balanced`.
pub fn jt_scaling(sites: &[usize], window: (f64, f64)) -> Result<JtScaling> {
    let balances: Vec<BalanceResult> = sites
        .par_iter()
        .map(|&s| find_balance_time(s, window, BALANCE_THRESHOLD))
        .collect::<Result<_>>()?;
    let points: Vec<(f64, f64)> = balances.iter().map(|b| (b.sites as f64, b.tau)).collect();
    let fit = power_law_fit(&points)?;
    let max_tau = balances.iter().map(|b| b.tau).fold(0.0, f64::max);
    let all_balanced = balances.iter().all(BalanceResult::is_balanced);
    Ok(JtScaling {
        balances,
        fit,
        max_tau,
        all_balanced,
    })
}
