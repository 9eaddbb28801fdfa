use crate::discretize::{assemble, BoxDomain, ProblemKind};
use crate::eigensolve::{solve_form, SolverConfig};
use crate::error::{Error, Result};

/// Discrete eigenvalues of one problem over a sequence of refined grids.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    pub label: String,
    /// Interior nodes per axis at each level.
    pub resolutions: Vec<usize>,
    pub values: Vec<f64>,
    /// Richardson limit from the last three levels.
    pub extrapolated: f64,
    /// Observed order from the last three levels; NaN when the differences
    /// are not monotone.
    pub observed_order: f64,
}

impl ConvergenceStudy {
    pub fn finest(&self) -> f64 {
        *self.values.last().expect("a study has at least three levels")
    }

    /// `|extrapolated - finest|`, or the last difference when no order was
    /// observed.
    pub fn error_estimate(&self) -> f64 {
        if self.observed_order.is_finite() {
            (self.extrapolated - self.finest()).abs()
        } else {
            let n = self.values.len();
            (self.values[n - 1] - self.values[n - 2]).abs()
        }
    }
}

/// Refinement ratio `h_coarse / h_fine` between two resolutions.
fn ratio(coarse: usize, fine: usize) -> f64 {
    (fine as f64 + 1.0) / (coarse as f64 + 1.0)
}

/// Richardson extrapolation over the last three `(resolution, value)` levels.
/// Returns `(extrapolated, observed_order)`.
pub fn richardson(resolutions: &[usize], values: &[f64]) -> Result<(f64, f64)> {
    if resolutions.len() != values.len() || resolutions.len() < 3 {
        return Err(Error::InvalidInput("need at least three levels with one value each".into()));
    }
    if resolutions.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(format!("resolutions must increase strictly: {resolutions:?}")));
    }
    let n = resolutions.len();
    let (rc, rm, rf) = (resolutions[n - 3], resolutions[n - 2], resolutions[n - 1]);
    let (r1, r2) = (ratio(rc, rm), ratio(rm, rf));
    if (r1 - r2).abs() > 1e-12 * r1 {
        return Err(Error::InvalidInput(format!(
            "levels {rc}, {rm}, {rf} are not refined by a constant ratio"
        )));
    }
    let (vc, vm, vf) = (values[n - 3], values[n - 2], values[n - 1]);
    let q = (vc - vm) / (vm - vf);
    if q <= 1.0 || !q.is_finite() {
        return Ok((vf, f64::NAN));
    }
    let order = q.ln() / r2.ln();
    let extrapolated = vf + (vf - vm) / (r2.powf(order) - 1.0);
    Ok((extrapolated, order))
}

/// First-eigenvalue study on the box `Π [0, extent_k]` with the same number
/// of interior nodes on every axis.
pub fn convergence_study(
    extent: &[f64],
    kind: ProblemKind,
    degree: usize,
    resolutions: &[usize],
    config: &SolverConfig,
) -> Result<ConvergenceStudy> {
    convergence_study_at(extent, kind, degree, 0, resolutions, config)
}

/// Study of the `index`-th (zero-based) eigenvalue.
pub fn convergence_study_at(
    extent: &[f64],
    kind: ProblemKind,
    degree: usize,
    index: usize,
    resolutions: &[usize],
    config: &SolverConfig,
) -> Result<ConvergenceStudy> {
    if resolutions.len() < 3 {
        return Err(Error::InvalidInput("a convergence study needs at least three resolutions".into()));
    }
    let mut values = Vec::with_capacity(resolutions.len());
    for &r in resolutions {
        let domain = BoxDomain::new(extent, &vec![r; extent.len()])?;
        let spectrum = solve_form(&assemble(&domain, degree, kind)?, index + 1, config)?;
        values.push(spectrum.values[index]);
    }
    study_from_values(study_label(kind, degree, index), resolutions, values)
}

pub(crate) fn study_label(kind: ProblemKind, degree: usize, index: usize) -> String {
    format!("{}[p={degree}]#{}", kind.name(), index + 1)
}

pub(crate) fn study_from_values(label: String, resolutions: &[usize], values: Vec<f64>) -> Result<ConvergenceStudy> {
    let (extrapolated, observed_order) = richardson(resolutions, &values)?;
    Ok(ConvergenceStudy { label, resolutions: resolutions.to_vec(), values, extrapolated, observed_order })
}
