//! Constants, the inequality battery and mesh-convergence studies.

pub mod constants;
pub mod convergence;
pub mod inequalities;

pub use constants::{c_np, c_np_fraction, evaluate_constants, half_degree_ratio, ConstantsBundle};
pub use convergence::{convergence_study, convergence_study_at, richardson, ConvergenceStudy};
pub use inequalities::{
    check_inequalities, Check, CheckStatus, InequalityReport, Relation, SpectrumEntry, SpectrumSet,
};

use crate::discretize::{assemble, BoxDomain, ProblemKind};
use crate::eigensolve::{solve_form, SolverConfig, Spectrum};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatteryOptions {
    /// Eigenvalues per spectrum; at least 2 so the Payne check has `λ₂`.
    pub count: usize,
    /// Grid levels per convergence study, the finest being the domain's own.
    pub levels: usize,
    pub gamma: f64,
}

impl Default for BatteryOptions {
    fn default() -> Self {
        BatteryOptions { count: 3, levels: 3, gamma: 1.0 }
    }
}

/// Spectra of every problem kind and degree on one box, with convergence
/// studies and the resulting inequality report.
#[derive(Debug, Clone)]
pub struct BoxBattery {
    pub spectra: Vec<Spectrum>,
    pub studies: Vec<ConvergenceStudy>,
    pub set: SpectrumSet,
    pub report: InequalityReport,
}

/// Values whose error is estimated by a study.
pub const STUDIED_VALUES: usize = 2;

/// Successively halved grids ending at `finest`, coarsest first, or `None`
/// when some level would drop below the minimum cell count.
pub fn study_levels(finest: &[usize], levels: usize) -> Option<Vec<Vec<usize>>> {
    let mut out = vec![finest.to_vec()];
    while out.len() < levels {
        let last = out.last().expect("non-empty");
        let mut next = Vec::with_capacity(last.len());
        for &c in last {
            if (c + 1) % 2 != 0 || c.div_ceil(2) - 1 < BoxDomain::MIN_CELLS {
                return None;
            }
            next.push(c.div_ceil(2) - 1);
        }
        out.push(next);
    }
    out.reverse();
    Some(out)
}

pub fn box_battery(domain: &BoxDomain, options: &BatteryOptions, config: &SolverConfig) -> Result<BoxBattery> {
    if options.count < STUDIED_VALUES {
        return Err(Error::InvalidInput(format!("battery needs count >= {STUDIED_VALUES}")));
    }
    if options.levels < 3 {
        return Err(Error::InvalidInput("battery needs at least three study levels".into()));
    }
    let levels = study_levels(domain.cells(), options.levels);
    let n = domain.dim();
    let mut set = SpectrumSet::new(n, true)?.with_gamma(options.gamma)?;
    let mut spectra = Vec::new();
    let mut studies = Vec::new();
    let source = format!("box {}", domain.cells().iter().map(|c| c.to_string()).collect::<Vec<_>>().join("x"));

    for kind in ProblemKind::ALL {
        for p in 0..=n {
            let spectrum = solve_form(&assemble(domain, p, kind)?, options.count, config)?;
            let mut estimates = [0.0; STUDIED_VALUES];
            if let Some(levels) = &levels {
                let mut per_level: Vec<Vec<f64>> = Vec::with_capacity(levels.len());
                for cells in &levels[..levels.len() - 1] {
                    let coarse = solve_form(&assemble(&domain.with_cells(cells)?, p, kind)?, STUDIED_VALUES, config)?;
                    per_level.push(coarse.values);
                }
                per_level.push(spectrum.values.clone());
                let resolutions: Vec<usize> = levels.iter().map(|c| c[0]).collect();
                for (i, estimate) in estimates.iter_mut().enumerate() {
                    let values = per_level.iter().map(|v| v[i]).collect();
                    let study =
                        convergence::study_from_values(convergence::study_label(kind, p, i), &resolutions, values)?;
                    *estimate = study.error_estimate();
                    studies.push(study);
                }
            }
            let tolerances = spectrum
                .values
                .iter()
                .enumerate()
                .map(|(i, v)| config.tol * v.abs() + estimates[i.min(STUDIED_VALUES - 1)])
                .collect();
            set.insert_spectrum(&spectrum, tolerances, source.clone())?;
            spectra.push(spectrum);
        }
    }
    let report = check_inequalities(&set);
    Ok(BoxBattery { spectra, studies, set, report })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halving_levels() {
        assert_eq!(study_levels(&[63, 63], 3), Some(vec![vec![15, 15], vec![31, 31], vec![63, 63]]));
        assert_eq!(study_levels(&[15], 3), Some(vec![vec![3], vec![7], vec![15]]));
        assert_eq!(study_levels(&[7], 3), None);
        assert_eq!(study_levels(&[62], 3), None);
    }

    #[test]
    fn small_interval_battery() {
        let domain = BoxDomain::new(&[1.0], &[31]).unwrap();
        let battery = box_battery(&domain, &BatteryOptions::default(), &SolverConfig::default()).unwrap();
        assert_eq!(battery.spectra.len(), 10);
        assert_eq!(battery.studies.len(), 20);
        let report = &battery.report;
        for name in ["BuckCP[p=0]", "DBCP.lower[p=0]", "DBCP.upper[p=0]", "AL.3", "IS"] {
            assert_eq!(report.get(name).unwrap().status, CheckStatus::Pass, "{name}");
        }
        assert_eq!(report.get("HodgeDuality.Gamma[p=0]~Gamma[p=1]").unwrap().status, CheckStatus::Pass);
        assert_eq!(report.get("HodgeDuality.mu[p=0]~kappa[p=1]").unwrap().status, CheckStatus::Pass);
    }

    #[test]
    fn rejects_small_counts() {
        let domain = BoxDomain::new(&[1.0], &[31]).unwrap();
        let options = BatteryOptions { count: 1, ..BatteryOptions::default() };
        assert!(box_battery(&domain, &options, &SolverConfig::default()).is_err());
    }
}
