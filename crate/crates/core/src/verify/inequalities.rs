use std::collections::BTreeMap;
use std::fmt;

use crate::bessel::BallSpectrum;
use crate::discretize::ProblemKind;
use crate::eigensolve::Spectrum;
use crate::error::{Error, Result};

use super::constants::{c_np, half_degree_ratio};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Less,
    LessEq,
    Equal,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Less => "<",
            Relation::LessEq => "<=",
            Relation::Equal => "==",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// An input was missing or the hypotheses do not apply.
    Skipped,
    /// Only the constants of the inequality could be evaluated.
    ConstantsOnly,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped => "skipped",
            CheckStatus::ConstantsOnly => "constants-only",
        }
    }
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One evaluated inequality `lhs relation rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub relation: Relation,
    /// `rhs - lhs`.
    pub margin: Option<f64>,
    /// Combined absolute tolerance of the inputs.
    pub tolerance: f64,
    pub status: CheckStatus,
    /// Spectral values that fed the check.
    pub provenance: Vec<String>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct InequalityReport {
    pub checks: Vec<Check>,
}

impl InequalityReport {
    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn count(&self, status: CheckStatus) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    /// True when no check failed.
    pub fn all_passed(&self) -> bool {
        self.count(CheckStatus::Fail) == 0
    }
}

/// Sorted eigenvalues of one problem with an absolute tolerance per value.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEntry {
    pub values: Vec<f64>,
    pub tolerances: Vec<f64>,
    pub source: String,
}

impl SpectrumEntry {
    pub fn new(values: Vec<f64>, tolerances: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("a spectrum entry needs at least one value".into()));
        }
        if tolerances.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "{} values but {} tolerances",
                values.len(),
                tolerances.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) || tolerances.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return Err(Error::InvalidInput("spectrum values and tolerances must be finite".into()));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidInput("spectrum values must be sorted ascending".into()));
        }
        Ok(SpectrumEntry { values, tolerances, source: source.into() })
    }

    /// Entry whose values carry no uncertainty.
    pub fn exact(values: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        let tolerances = vec![0.0; values.len()];
        Self::new(values, tolerances, source)
    }
}

/// Labelled spectra of one domain, the input of [`check_inequalities`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSet {
    dim: usize,
    euclidean: bool,
    gamma: f64,
    entries: BTreeMap<(ProblemKind, usize), SpectrumEntry>,
}

/// Relative accuracy attached to closed-form ball eigenvalues.
pub const BALL_RELATIVE_TOLERANCE: f64 = 1e-9;

impl SpectrumSet {
    pub fn new(dim: usize, euclidean: bool) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("spectrum set dimension must be >= 1".into()));
        }
        Ok(SpectrumSet { dim, euclidean, gamma: 1.0, entries: BTreeMap::new() })
    }

    /// Sets the curvature parameter used by the constants-only checks.
    pub fn with_gamma(mut self, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidInput(format!("gamma must be positive, got {gamma}")));
        }
        self.gamma = gamma;
        Ok(self)
    }

    /// Ball eigenvalues as degree-0 entries.
    pub fn from_ball(ball: &BallSpectrum) -> Result<Self> {
        let mut set = SpectrumSet::new(ball.dim as usize, true)?;
        let source = format!("ball n={} R={}", ball.dim, ball.radius);
        for (kind, value) in [
            (ProblemKind::DirichletLaplace, ball.lambda1),
            (ProblemKind::Buckling, ball.big_lambda1),
            (ProblemKind::ClampedPlate, ball.big_gamma1),
        ] {
            let entry = SpectrumEntry::new(vec![value], vec![BALL_RELATIVE_TOLERANCE * value], source.clone())?;
            set.insert(kind, 0, entry)?;
        }
        Ok(set)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn euclidean(&self) -> bool {
        self.euclidean
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn insert(&mut self, kind: ProblemKind, degree: usize, entry: SpectrumEntry) -> Result<()> {
        if degree > self.dim {
            return Err(Error::InvalidInput(format!("degree {degree} exceeds dimension {}", self.dim)));
        }
        if self.entries.contains_key(&(kind, degree)) {
            return Err(Error::InvalidInput(format!("duplicate spectrum {kind}[p={degree}]")));
        }
        self.entries.insert((kind, degree), entry);
        Ok(())
    }

    /// Inserts a labelled solver spectrum with the given per-value tolerances.
    pub fn insert_spectrum(&mut self, spectrum: &Spectrum, tolerances: Vec<f64>, source: impl Into<String>) -> Result<()> {
        let label = spectrum
            .label
            .ok_or_else(|| Error::InvalidInput("spectrum has no problem label".into()))?;
        let entry = SpectrumEntry::new(spectrum.values.clone(), tolerances, source)?;
        self.insert(label.kind, label.degree, entry)
    }

    pub fn get(&self, kind: ProblemKind, degree: usize) -> Option<&SpectrumEntry> {
        self.entries.get(&(kind, degree))
    }

    pub fn entries(&self) -> impl Iterator<Item = (ProblemKind, usize, &SpectrumEntry)> {
        self.entries.iter().map(|(&(k, p), e)| (k, p, e))
    }

    fn term(&self, kind: ProblemKind, degree: usize, index: usize) -> std::result::Result<Term, String> {
        let label = format!("{}[p={degree}]#{}", kind.symbol(), index + 1);
        let entry = self.get(kind, degree).ok_or_else(|| format!("missing {label}"))?;
        match entry.values.get(index) {
            Some(&value) => Ok(Term {
                value,
                tol: entry.tolerances[index],
                sources: vec![if entry.source.is_empty() { label } else { format!("{label} ({})", entry.source) }],
            }),
            None => Err(format!("missing {label}")),
        }
    }
}

/// A derived value with a first-order absolute error bound.
#[derive(Debug, Clone)]
struct Term {
    value: f64,
    tol: f64,
    sources: Vec<String>,
}

impl Term {
    fn merged_sources(&self, other: &Term) -> Vec<String> {
        let mut s = self.sources.clone();
        for src in &other.sources {
            if !s.contains(src) {
                s.push(src.clone());
            }
        }
        s
    }

    fn mul(&self, other: &Term) -> Term {
        Term {
            value: self.value * other.value,
            tol: self.value.abs() * other.tol + other.value.abs() * self.tol,
            sources: self.merged_sources(other),
        }
    }

    fn square(&self) -> Term {
        self.mul(self)
    }

    fn sqrt(&self) -> Term {
        let root = self.value.max(0.0).sqrt();
        let tol = if root > 0.0 { self.tol / (2.0 * root) } else { self.tol.sqrt() };
        Term { value: root, tol, sources: self.sources.clone() }
    }

    fn min(&self, other: &Term) -> Term {
        let value = self.value.min(other.value);
        Term { value, tol: self.tol.max(other.tol), sources: self.merged_sources(other) }
    }

    fn max(&self, other: &Term) -> Term {
        let value = self.value.max(other.value);
        Term { value, tol: self.tol.max(other.tol), sources: self.merged_sources(other) }
    }
}

type Lookup = std::result::Result<Term, String>;

fn compare(name: String, lhs: Lookup, relation: Relation, rhs: Lookup, note: Option<String>) -> Check {
    let (lhs, rhs) = match (lhs, rhs) {
        (Ok(l), Ok(r)) => (l, r),
        (Err(reason), _) | (_, Err(reason)) => return skipped(name, relation, reason),
    };
    let margin = rhs.value - lhs.value;
    let tolerance = lhs.tol + rhs.tol;
    let holds = match relation {
        Relation::Less | Relation::LessEq => margin > tolerance,
        Relation::Equal => margin.abs() <= tolerance,
    };
    Check {
        name,
        lhs: Some(lhs.value),
        rhs: Some(rhs.value),
        relation,
        margin: Some(margin),
        tolerance,
        status: if holds { CheckStatus::Pass } else { CheckStatus::Fail },
        provenance: lhs.merged_sources(&rhs),
        note,
    }
}

fn skipped(name: String, relation: Relation, reason: String) -> Check {
    Check {
        name,
        lhs: None,
        rhs: None,
        relation,
        margin: None,
        tolerance: 0.0,
        status: CheckStatus::Skipped,
        provenance: Vec::new(),
        note: Some(reason),
    }
}

/// Bitwise comparison of two whole spectra.
fn duality(set: &SpectrumSet, name: String, left: (ProblemKind, usize), right: (ProblemKind, usize)) -> Check {
    let (a, b) = match (set.get(left.0, left.1), set.get(right.0, right.1)) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            let missing = if set.get(left.0, left.1).is_none() { left } else { right };
            let reason = format!("missing {}[p={}]", missing.0.symbol(), missing.1);
            return skipped(name, Relation::Equal, reason);
        }
    };
    let shared = a.values.len().min(b.values.len());
    let identical = a.values[..shared]
        .iter()
        .zip(&b.values[..shared])
        .all(|(x, y)| x.to_bits() == y.to_bits());
    let worst = a.values[..shared]
        .iter()
        .zip(&b.values[..shared])
        .map(|(x, y)| (y - x).abs())
        .fold(0.0, f64::max);
    let label = |(k, p): (ProblemKind, usize)| format!("{}[p={p}]", k.symbol());
    Check {
        name,
        lhs: Some(a.values[0]),
        rhs: Some(b.values[0]),
        relation: Relation::Equal,
        margin: Some(if identical { 0.0 } else { worst }),
        tolerance: 0.0,
        status: if identical { CheckStatus::Pass } else { CheckStatus::Fail },
        provenance: vec![label(left), label(right)],
        note: Some(format!("{shared} values compared bitwise")),
    }
}

fn constants_only(name: String, lhs: Option<f64>, relation: Relation, rhs: f64, note: &str) -> Check {
    Check {
        name,
        lhs,
        rhs: Some(rhs),
        relation,
        margin: lhs.map(|l| rhs - l),
        tolerance: 0.0,
        status: CheckStatus::ConstantsOnly,
        provenance: Vec::new(),
        note: Some(note.to_string()),
    }
}

/// Every inequality of the battery for the spectra in `set`. Checks whose
/// inputs are missing, or whose hypotheses the set does not meet, are
/// reported as skipped with a reason.
pub fn check_inequalities(set: &SpectrumSet) -> InequalityReport {
    use ProblemKind::*;
    let n = set.dim;
    let t = |kind, p, i| set.term(kind, p, i);
    let mut checks = Vec::new();

    for p in 0..=n {
        checks.push(compare(
            format!("BuckCP[p={p}]"),
            t(ClampedPlate, p, 0),
            Relation::Less,
            t(Buckling, p, 0).map(|l| l.square()),
            None,
        ));
        checks.push(compare(
            format!("BCP_Dirichlet.1[p={p}]"),
            t(Buckling, p, 0).and_then(|bl| Ok(bl.mul(&t(DirichletLaplace, p, 0)?))),
            Relation::Less,
            t(ClampedPlate, p, 0),
            None,
        ));
        if p >= 1 {
            let lower = if p < n {
                t(DirichletLaplace, p + 1, 0).and_then(|up| Ok(up.min(&t(DirichletLaplace, p - 1, 0)?)))
            } else {
                t(DirichletLaplace, p - 1, 0)
            };
            checks.push(compare(
                format!("BCP_Dirichlet.2[p={p}]"),
                lower,
                Relation::LessEq,
                t(Buckling, p, 0),
                None,
            ));
        }
        checks.push(compare(
            format!("DBCP.lower[p={p}]"),
            t(DirichletLaplace, p, 0),
            Relation::Less,
            t(ClampedPlate, p, 0).map(|g| g.sqrt()),
            None,
        ));
        checks.push(compare(
            format!("DBCP.upper[p={p}]"),
            t(ClampedPlate, p, 0).map(|g| g.sqrt()),
            Relation::Less,
            t(Buckling, p, 0),
            None,
        ));
        checks.push(compare(
            format!("BuckAbs[p={p}]"),
            t(AbsoluteLaplace, p, 0).and_then(|mu| Ok(mu.max(&t(AbsoluteLaplace, n - p, 0)?))),
            Relation::LessEq,
            t(Buckling, p, 0),
            None,
        ));
    }

    let (rel3, note3) = if set.euclidean {
        (Relation::Less, Some("strict on Euclidean domains through degree independence".to_string()))
    } else {
        (Relation::LessEq, None)
    };
    checks.push(compare(
        "BCP_Dirichlet.3".into(),
        t(DirichletLaplace, 1, 0),
        rel3,
        t(Buckling, 0, 0),
        note3,
    ));

    checks.push(compare(
        "AL.1".into(),
        t(ClampedPlate, 0, 0),
        Relation::LessEq,
        t(Buckling, 0, 0).map(|l| l.square()),
        None,
    ));
    checks.push(compare(
        "AL.2".into(),
        t(Buckling, 0, 0).and_then(|bl| Ok(bl.mul(&t(DirichletLaplace, 0, 0)?))),
        Relation::LessEq,
        t(ClampedPlate, 0, 0),
        None,
    ));
    checks.push(compare(
        "AL.3".into(),
        t(DirichletLaplace, 0, 0).map(|l| l.square()),
        Relation::Less,
        t(Buckling, 0, 0).and_then(|bl| Ok(bl.mul(&t(DirichletLaplace, 0, 0)?))),
        None,
    ));

    if n == 2 {
        checks.push(compare("Payne".into(), t(DirichletLaplace, 0, 1), Relation::LessEq, t(Buckling, 0, 0), None));
    } else {
        checks.push(skipped("Payne".into(), Relation::LessEq, format!("planar domains only, dimension is {n}")));
    }
    checks.push(compare("IS".into(), t(AbsoluteLaplace, 0, 0), Relation::Less, t(Buckling, 0, 0), None));
    if set.euclidean {
        checks.push(compare("Polya".into(), t(AbsoluteLaplace, 0, 0), Relation::Less, t(DirichletLaplace, 0, 0), None));
    } else {
        checks.push(skipped("Polya".into(), Relation::Less, "Euclidean domains only".into()));
    }

    for kind in [Buckling, ClampedPlate, DirichletLaplace] {
        for p in 1..=n {
            let name = format!("PIndependence.{}[p={p}]", kind.symbol());
            if set.euclidean {
                checks.push(compare(name, t(kind, p, 0), Relation::Equal, t(kind, 0, 0), None));
            } else {
                checks.push(skipped(name, Relation::Equal, "Euclidean domains only".into()));
            }
        }
    }

    for kind in ProblemKind::ALL {
        for p in 0..=n {
            let q = n - p;
            let dual = kind.hodge_dual();
            if (dual, q) < (kind, p) || (dual == kind && p == q) {
                continue;
            }
            let name = format!("HodgeDuality.{}[p={p}]~{}[p={q}]", kind.symbol(), dual.symbol());
            checks.push(duality(set, name, (kind, p), (dual, q)));
        }
    }

    let flat_note = "curvature hypothesis W >= gamma p(n-p) > 0 cannot hold on a flat domain";
    let sphere_note = "sphere-domain eigenvalues are not computed";
    for p in 1..=n / 2 {
        let spread = (p * (n - p + 1)) as f64;
        let bound = set.gamma * spread;
        let lambda = set.get(DirichletLaplace, p).map(|e| e.values[0]);
        let gamma1 = set.get(ClampedPlate, p).map(|e| e.values[0]);
        checks.push(constants_only(format!("GM_Dirichlet[p={p}]"), Some(bound), Relation::Less, lambda.unwrap_or(f64::NAN), flat_note)
            .with_missing_rhs(lambda.is_none()));
        checks.push(constants_only(format!("BCDL[p={p}]"), Some(bound * bound), Relation::Less, gamma1.unwrap_or(f64::NAN), flat_note)
            .with_missing_rhs(gamma1.is_none()));
        let c = c_np(n as u32, p as u32);
        checks.push(constants_only(format!("SphereClamped[p={p}]"), None, Relation::Less, c, sphere_note));
        checks.push(constants_only(format!("SphereBuckling[p={p}]"), None, Relation::Less, c / 2.0, sphere_note));
    }
    if n.is_multiple_of(2) {
        let half = (n / 2) as u32;
        let ratio = c_np(n as u32, half) / n as f64;
        let target = half_degree_ratio(n as u32);
        let margin = target - ratio;
        checks.push(Check {
            name: "SphereHalfDegreeIdentity".into(),
            lhs: Some(ratio),
            rhs: Some(target),
            relation: Relation::Equal,
            margin: Some(margin),
            tolerance: IDENTITY_TOLERANCE,
            status: if margin.abs() <= IDENTITY_TOLERANCE { CheckStatus::Pass } else { CheckStatus::Fail },
            provenance: Vec::new(),
            note: Some("C_{n,n/2}/n against 1 + 16/(n^2(n+2))".into()),
        });
    }

    InequalityReport { checks }
}

/// Tolerance of the algebraic identity between constants.
pub const IDENTITY_TOLERANCE: f64 = 1e-14;

impl Check {
    fn with_missing_rhs(mut self, missing: bool) -> Self {
        if missing {
            self.rhs = None;
            self.margin = None;
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::ball_spectrum;

    fn entry(v: &[f64]) -> SpectrumEntry {
        SpectrumEntry::exact(v.to_vec(), "synthetic").unwrap()
    }

    #[test]
    fn unit_disk_chain_passes() {
        let set = SpectrumSet::from_ball(&ball_spectrum(2, 1.0).unwrap()).unwrap();
        let report = check_inequalities(&set);
        let al1 = report.get("AL.1").unwrap();
        assert_eq!(al1.status, CheckStatus::Pass);
        assert!((al1.rhs.unwrap() - 215.56).abs() < 0.01);
        assert!((al1.lhs.unwrap() - 104.36).abs() < 0.01);
        let al2 = report.get("AL.2").unwrap();
        assert!((al2.lhs.unwrap() - 84.91).abs() < 0.01);
        let al3 = report.get("AL.3").unwrap();
        assert!((al3.lhs.unwrap() - 33.45).abs() < 0.01);
        for name in ["AL.1", "AL.2", "AL.3", "BuckCP[p=0]", "DBCP.lower[p=0]", "DBCP.upper[p=0]", "BCP_Dirichlet.1[p=0]"] {
            assert_eq!(report.get(name).unwrap().status, CheckStatus::Pass, "{name}");
        }
        assert!(report.all_passed());
        assert_eq!(report.get("Polya").unwrap().status, CheckStatus::Skipped);
    }

    #[test]
    fn constructed_violation_fails() {
        let mut set = SpectrumSet::new(2, true).unwrap();
        set.insert(ProblemKind::Buckling, 0, entry(&[10.0])).unwrap();
        set.insert(ProblemKind::ClampedPlate, 0, entry(&[101.0])).unwrap();
        let report = check_inequalities(&set);
        let c = report.get("BuckCP[p=0]").unwrap();
        assert_eq!(c.status, CheckStatus::Fail);
        assert_eq!(c.margin, Some(-1.0));
        assert!(!report.all_passed());
    }

    #[test]
    fn equal_buckling_values_are_degree_independent() {
        let mut set = SpectrumSet::new(2, true).unwrap();
        set.insert(ProblemKind::Buckling, 0, SpectrumEntry::new(vec![52.3], vec![1e-6], "a").unwrap()).unwrap();
        set.insert(ProblemKind::Buckling, 1, SpectrumEntry::new(vec![52.3000005], vec![1e-6], "b").unwrap()).unwrap();
        let report = check_inequalities(&set);
        assert_eq!(report.get("PIndependence.Lambda[p=1]").unwrap().status, CheckStatus::Pass);
        assert_eq!(report.get("PIndependence.Lambda[p=2]").unwrap().status, CheckStatus::Skipped);
    }

    #[test]
    fn margin_within_tolerance_does_not_pass() {
        let mut set = SpectrumSet::new(2, true).unwrap();
        set.insert(ProblemKind::AbsoluteLaplace, 0, SpectrumEntry::new(vec![9.0], vec![0.6], "").unwrap()).unwrap();
        set.insert(ProblemKind::DirichletLaplace, 0, SpectrumEntry::new(vec![10.0], vec![0.6], "").unwrap()).unwrap();
        assert_eq!(check_inequalities(&set).get("Polya").unwrap().status, CheckStatus::Fail);
    }

    #[test]
    fn tolerance_propagates_through_products() {
        let mut set = SpectrumSet::new(1, true).unwrap();
        set.insert(ProblemKind::Buckling, 0, SpectrumEntry::new(vec![4.0], vec![0.1], "").unwrap()).unwrap();
        set.insert(ProblemKind::ClampedPlate, 0, SpectrumEntry::new(vec![10.0], vec![0.2], "").unwrap()).unwrap();
        let c = check_inequalities(&set).get("BuckCP[p=0]").cloned().unwrap();
        // d(Λ²) = 2Λ dΛ = 0.8
        assert!((c.tolerance - 1.0).abs() < 1e-15);
        assert_eq!(c.status, CheckStatus::Pass);
    }

    #[test]
    fn every_check_present_even_when_empty() {
        let set = SpectrumSet::new(3, true).unwrap();
        let report = check_inequalities(&set);
        for c in &report.checks {
            assert!(
                matches!(c.status, CheckStatus::Skipped | CheckStatus::ConstantsOnly),
                "{} {:?}",
                c.name,
                c.status
            );
            if c.status == CheckStatus::Skipped {
                assert!(c.note.is_some());
            }
        }
        assert!(report.get("Payne").is_some());
        assert!(report.get("BCP_Dirichlet.3").is_some());
        assert!(report.get("HodgeDuality.mu[p=0]~kappa[p=3]").is_some());
        assert!(report.get("SphereHalfDegreeIdentity").is_none());
    }

    #[test]
    fn duality_is_bitwise() {
        let mut set = SpectrumSet::new(2, true).unwrap();
        set.insert(ProblemKind::DirichletLaplace, 0, entry(&[1.0, 2.0])).unwrap();
        set.insert(ProblemKind::DirichletLaplace, 2, entry(&[1.0, 2.0 + 1e-15])).unwrap();
        let report = check_inequalities(&set);
        let c = report.get("HodgeDuality.lambda[p=0]~lambda[p=2]").unwrap();
        assert_eq!(c.status, CheckStatus::Fail);
    }

    #[test]
    fn even_dimensions_report_the_identity() {
        let set = SpectrumSet::new(4, true).unwrap();
        let report = check_inequalities(&set);
        assert_eq!(report.get("SphereHalfDegreeIdentity").unwrap().status, CheckStatus::Pass);
        assert_eq!(report.get("SphereClamped[p=2]").unwrap().rhs, Some(14.0 / 3.0));
    }

    #[test]
    fn rejects_inconsistent_labels() {
        let mut set = SpectrumSet::new(2, true).unwrap();
        assert!(set.insert(ProblemKind::Buckling, 3, entry(&[1.0])).is_err());
        set.insert(ProblemKind::Buckling, 1, entry(&[1.0])).unwrap();
        assert!(set.insert(ProblemKind::Buckling, 1, entry(&[1.0])).is_err());
        assert!(SpectrumEntry::exact(vec![2.0, 1.0], "").is_err());
        assert!(SpectrumEntry::exact(vec![], "").is_err());
        assert!(SpectrumEntry::new(vec![1.0], vec![], "").is_err());
        assert!(SpectrumSet::new(0, true).is_err());
    }
}
