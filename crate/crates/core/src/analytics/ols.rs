use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::AnalyticsError;

/// Relative size below which an R diagonal marks a dependent column.
const RANK_TOLERANCE: f64 = 1e-10;

/// Ordinary least squares fit with an intercept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RegressionModel {
    pub feature_names: Vec<String>,
    /// Intercept first, then one coefficient per feature.
    pub coefficients: Vec<f64>,
    pub standard_errors: Vec<f64>,
    pub r_squared: f64,
    pub observations: usize,
}

impl RegressionModel {
    pub fn intercept(&self) -> f64 {
        self.coefficients[0]
    }

    pub fn coefficient(&self, name: &str) -> Option<f64> {
        let i = self.feature_names.iter().position(|n| n == name)?;
        Some(self.coefficients[i + 1])
    }

    pub fn r_squared_percent(&self) -> f64 {
        self.r_squared * 100.0
    }

    pub fn predict(&self, row: &[f64]) -> f64 {
        self.coefficients[0]
            + self.coefficients[1..]
                .iter()
                .zip(row)
                .map(|(b, x)| b * x)
                .sum::<f64>()
    }
}

/// Fits `response ~ 1 + features` by Householder QR.
///
/// Needs more rows than coefficients and no constant or linearly dependent
/// feature columns; offending columns are named in the error. R² is
/// `1 - SSres/SStot`, taken as 0 when the response has no variance.
pub fn fit_ols<S: AsRef<str>>(
    feature_names: &[S],
    rows: &[Vec<f64>],
    response: &[f64],
) -> Result<RegressionModel, AnalyticsError> {
    let n = rows.len();
    let k = feature_names.len();
    let names: Vec<String> = feature_names
        .iter()
        .map(|s| s.as_ref().to_string())
        .collect();
    if response.len() != n {
        return Err(AnalyticsError::Regression(format!(
            "{n} rows but {} responses",
            response.len()
        )));
    }
    if let Some(bad) = rows.iter().position(|r| r.len() != k) {
        return Err(AnalyticsError::Regression(format!(
            "row {bad} has {} values, expected {k}",
            rows[bad].len()
        )));
    }
    if n <= k + 1 {
        return Err(AnalyticsError::Regression(format!(
            "{n} rows cannot support {k} features plus an intercept"
        )));
    }
    let constant: Vec<String> = (0..k)
        .filter(|&j| rows.iter().all(|r| r[j] == rows[0][j]))
        .map(|j| names[j].clone())
        .collect();
    if !constant.is_empty() {
        return Err(AnalyticsError::Collinear {
            columns: constant,
            reason: "zero variance".into(),
        });
    }

    let x = DMatrix::from_fn(n, k + 1, |i, j| if j == 0 { 1.0 } else { rows[i][j - 1] });
    let y = DVector::from_column_slice(response);
    let qr = x.clone().qr();
    let r = qr.r();
    let dependent: Vec<String> = (1..=k)
        .filter(|&j| r[(j, j)].abs() <= RANK_TOLERANCE * x.column(j).norm())
        .map(|j| names[j - 1].clone())
        .collect();
    if !dependent.is_empty() {
        return Err(AnalyticsError::Collinear {
            columns: dependent,
            reason: "linearly dependent on earlier columns".into(),
        });
    }

    let qty = qr.q().transpose() * &y;
    let beta = r
        .solve_upper_triangular(&qty)
        .ok_or_else(|| AnalyticsError::Regression("singular design matrix".into()))?;
    let residuals = &y - &x * &beta;
    let ss_res = residuals.norm_squared();
    let mean = y.mean();
    let ss_tot: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).max(0.0)
    } else {
        0.0
    };

    let sigma2 = ss_res / (n - k - 1) as f64;
    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(k + 1, k + 1))
        .ok_or_else(|| AnalyticsError::Regression("singular design matrix".into()))?;
    let cov = &r_inv * r_inv.transpose() * sigma2;
    let standard_errors = (0..=k).map(|j| cov[(j, j)].sqrt()).collect();

    Ok(RegressionModel {
        feature_names: names,
        coefficients: beta.iter().copied().collect(),
        standard_errors,
        r_squared,
        observations: n,
    })
}
