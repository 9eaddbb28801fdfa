//! Smallest eigenpairs of symmetric pencils `A x = θ B x`, `B ≻ 0`.
//!
//! Small pencils are reduced through the Cholesky factor of `B` and solved
//! densely. Larger ones use block shift-invert subspace iteration: each sweep
//! solves `(A - σB) Y = B X` with a banded Cholesky factor, then extracts Ritz
//! pairs by Rayleigh-Ritz in the `B` inner product. A block (rather than
//! single-vector) iteration resolves the exact multiplicities that symmetric
//! grids produce.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::discretize::{ComponentIndex, FormProblem, ProblemKind, SymOperator};
use crate::error::{Error, Result};
use crate::sparse::{dot, norm2, BandCholesky, CsrMatrix};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_MAX_ITERATIONS: usize = 10_000;

/// Largest pencil solved densely under [`SolverMethod::Auto`].
pub const DENSE_LIMIT: usize = 400;

/// Relative gap below which consecutive values are reported as one multiple
/// eigenvalue.
pub const MULTIPLICITY_GAP: f64 = 1e-7;

const START_SEED: u64 = 0x5eed_f0e5;

/// Residual level from which the shifted solves are refined.
const REFINE_BELOW: f64 = 1e-6;

/// Sweeps without halving the worst residual before giving up.
const STALL_LIMIT: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverMethod {
    Auto,
    Dense,
    ShiftInvert,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Bound on `‖Ax - θBx‖ / ‖Ax‖` for every reported pair.
    pub tol: f64,
    pub max_iterations: usize,
    pub method: SolverMethod,
    /// Upper bound on worker threads used across independent blocks.
    pub threads: usize,
    pub keep_vectors: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOLERANCE,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            method: SolverMethod::Auto,
            threads: 1,
            keep_vectors: false,
        }
    }
}

impl SolverConfig {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

/// Which problem a spectrum belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpectrumLabel {
    pub kind: ProblemKind,
    pub degree: usize,
}

/// Lowest eigenvalues of a pencil with their residual certificates.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub label: Option<SpectrumLabel>,
    pub values: Vec<f64>,
    pub residuals: Vec<f64>,
    pub vectors: Option<Vec<Vec<f64>>>,
    /// Component each value came from, for form problems.
    pub components: Vec<Option<ComponentIndex>>,
    pub deflated_kernel_dim: usize,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn first(&self) -> Option<f64> {
        self.values.first().copied()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Groups of numerically equal values as `(value, multiplicity)`.
    pub fn multiplicities(&self) -> Vec<(f64, usize)> {
        let mut groups: Vec<(f64, usize)> = Vec::new();
        for &v in &self.values {
            match groups.last_mut() {
                Some((g, count)) if (v - *g).abs() <= MULTIPLICITY_GAP * g.abs().max(v.abs()) => *count += 1,
                _ => groups.push((v, 1)),
            }
        }
        groups
    }
}

/// A pencil restricted to the `B`-orthogonal complement of known null vectors
/// of `A`.
#[derive(Debug, Clone)]
pub struct DeflatedPencil<'a> {
    a: &'a SymOperator,
    b: &'a CsrMatrix,
    /// `B`-orthonormal basis of the removed subspace.
    basis: Vec<Vec<f64>>,
}

impl<'a> DeflatedPencil<'a> {
    pub fn new(a: &'a SymOperator, b: &'a CsrMatrix) -> Self {
        Self { a, b, basis: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn kernel_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    /// Removes the `B`-components along the deflated basis.
    fn project(&self, x: &mut [f64]) {
        for v in &self.basis {
            let c = dot(v, &self.b.mul_vec(x));
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi -= c * vi;
            }
        }
    }
}

/// Restricts `(A, B)` to the `B`-orthogonal complement of `basis`.
///
/// Every basis vector must satisfy `‖Av‖ ≤ tol · ‖A‖_∞ · ‖v‖`.
pub fn deflate_kernel<'a>(
    a: &'a SymOperator,
    b: &'a CsrMatrix,
    basis: &[Vec<f64>],
    tol: f64,
) -> Result<DeflatedPencil<'a>> {
    let n = a.dim();
    let scale = a.matrix().norm_inf();
    let mut orthonormal: Vec<Vec<f64>> = Vec::new();
    for v in basis {
        if v.len() != n {
            return Err(Error::InvalidInput(format!("kernel vector has length {}, expected {n}", v.len())));
        }
        let residual = norm2(&a.apply(v));
        if residual > tol * scale * norm2(v) {
            return Err(Error::InvalidInput(format!(
                "vector is not in the kernel: ‖Av‖ = {residual:e} exceeds {tol:e}·‖A‖·‖v‖"
            )));
        }
        let mut w = v.clone();
        b_orthogonalize(b, &orthonormal, &mut w);
        let norm = dot(&w, &b.mul_vec(&w)).sqrt();
        if norm > 0.0 {
            w.iter_mut().for_each(|x| *x /= norm);
            orthonormal.push(w);
        }
    }
    Ok(DeflatedPencil { a, b, basis: orthonormal })
}

fn b_orthogonalize(b: &CsrMatrix, against: &[Vec<f64>], x: &mut [f64]) {
    for _ in 0..2 {
        for v in against {
            let c = dot(v, &b.mul_vec(x));
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi -= c * vi;
            }
        }
    }
}

/// `m` smallest eigenpairs of `(A, B)` with the default configuration.
pub fn solve_generalized(a: &SymOperator, b: &CsrMatrix, m: usize, tol: f64) -> Result<Spectrum> {
    solve_pencil(&DeflatedPencil::new(a, b), m, &SolverConfig::with_tol(tol))
}

fn validate(pencil: &DeflatedPencil<'_>, m: usize, config: &SolverConfig) -> Result<()> {
    let n = pencil.dim();
    if pencil.b.rows() != n || pencil.b.cols() != n {
        return Err(Error::InvalidInput("A and B differ in size".into()));
    }
    if m == 0 {
        return Err(Error::InvalidInput("eigenvalue count must be at least 1".into()));
    }
    if m + pencil.kernel_dim() > n {
        return Err(Error::InvalidInput(format!(
            "requested {m} eigenvalues but the deflated pencil has dimension {}",
            n - pencil.kernel_dim()
        )));
    }
    if config.tol.is_nan() || config.tol <= 0.0 {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {}", config.tol)));
    }
    if !pencil.a.matrix().is_symmetric() || !pencil.b.is_symmetric() {
        return Err(Error::InvalidInput("pencil matrices must be symmetric".into()));
    }
    Ok(())
}

/// `m` smallest eigenpairs of a (possibly deflated) pencil.
pub fn solve_pencil(pencil: &DeflatedPencil<'_>, m: usize, config: &SolverConfig) -> Result<Spectrum> {
    validate(pencil, m, config)?;
    let dense = match config.method {
        SolverMethod::Dense => true,
        SolverMethod::ShiftInvert => false,
        SolverMethod::Auto => pencil.dim() <= DENSE_LIMIT,
    };
    let block = block_size(pencil, m);
    let start = if dense { Some(dense_solve(pencil, block)?.1) } else { None };
    let (values, vectors, iterations) = subspace_iteration(pencil, m, block, start, config)?;
    let spectrum = certify(pencil, values, vectors, config);
    if let Some(worst) = spectrum.residuals.iter().copied().find(|r| r.is_nan() || *r > config.tol) {
        return Err(Error::NonConvergence {
            iterations,
            worst_residual: worst,
            partial: Box::new(spectrum),
        });
    }
    Ok(spectrum)
}

fn residual(pencil: &DeflatedPencil<'_>, theta: f64, x: &[f64]) -> f64 {
    let ax = pencil.a.apply(x);
    let bx = pencil.b.mul_vec(x);
    let r: Vec<f64> = ax.iter().zip(&bx).map(|(a, b)| a - theta * b).collect();
    let denom = norm2(&ax);
    if denom == 0.0 {
        norm2(&r)
    } else {
        norm2(&r) / denom
    }
}

fn certify(pencil: &DeflatedPencil<'_>, values: Vec<f64>, vectors: Vec<Vec<f64>>, config: &SolverConfig) -> Spectrum {
    let residuals = values.iter().zip(&vectors).map(|(&t, x)| residual(pencil, t, x)).collect();
    Spectrum {
        label: None,
        components: vec![None; values.len()],
        values,
        residuals,
        vectors: config.keep_vectors.then_some(vectors),
        deflated_kernel_dim: pencil.kernel_dim(),
    }
}

/// Cholesky reduction `C = L⁻¹ A L⁻ᵀ` and a full symmetric eigendecomposition.
fn dense_solve(pencil: &DeflatedPencil<'_>, m: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = pencil.dim();
    let b = pencil.b.to_dense();
    let chol = nalgebra::Cholesky::new(b).ok_or_else(|| Error::Factorization("B is not numerically SPD".into()))?;
    let l = chol.l();
    let a = pencil.a.matrix().to_dense();
    let li_a = l.solve_lower_triangular(&a).ok_or_else(|| Error::Factorization("singular Cholesky factor".into()))?;
    let c = l
        .solve_lower_triangular(&li_a.transpose())
        .ok_or_else(|| Error::Factorization("singular Cholesky factor".into()))?;
    let mut c = 0.5 * (&c + c.transpose());

    if !pencil.basis.is_empty() {
        // In the reduced coordinates the kernel is spanned by Lᵀv (orthonormal).
        let k = pencil.basis.len();
        let mut y = DMatrix::zeros(n, k);
        for (j, v) in pencil.basis.iter().enumerate() {
            let col = l.transpose() * nalgebra::DVector::from_column_slice(v);
            y.set_column(j, &col);
        }
        let p = DMatrix::identity(n, n) - &y * y.transpose();
        let lift = 2.0 * c.norm() + 1.0;
        c = &p * &c * &p + lift * (&y * y.transpose());
        c = 0.5 * (&c + c.transpose());
    }

    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]).then(i.cmp(&j)));
    let lt = l.transpose();
    let mut values = Vec::with_capacity(m);
    let mut vectors = Vec::with_capacity(m);
    for &i in order.iter().take(m) {
        let z = eig.eigenvectors.column(i).into_owned();
        let x = lt
            .solve_upper_triangular(&z)
            .ok_or_else(|| Error::Factorization("singular Cholesky factor".into()))?;
        values.push(eig.eigenvalues[i]);
        vectors.push(x.as_slice().to_vec());
    }
    Ok((values, vectors))
}

/// Dense solve of the small projected problem `H v = θ v` (`H` symmetric),
/// eigenvalues ascending.
fn small_symmetric_eigen(h: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let q = h.nrows();
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..q).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut v = DMatrix::zeros(q, q);
    for (dst, &src) in order.iter().enumerate() {
        v.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, v)
}

/// Shift: zero when `A` is definite; below the spectrum when a kernel is deflated.
fn choose_shift(pencil: &DeflatedPencil<'_>) -> f64 {
    if pencil.basis.is_empty() {
        return 0.0;
    }
    let a = pencil.a.matrix().diagonal_values();
    let b = pencil.b.diagonal_values();
    let ratio = a
        .iter()
        .zip(&b)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0)
        .map(|(a, b)| a / b)
        .fold(f64::INFINITY, f64::min);
    if ratio.is_finite() {
        -1e-3 * ratio
    } else {
        -1e-3 * pencil.a.matrix().norm_inf() / pencil.b.norm_inf().max(f64::MIN_POSITIVE)
    }
}

struct ShiftedSolver<'p, 'a> {
    pencil: &'p DeflatedPencil<'a>,
    shift: f64,
    factor: BandCholesky,
}

impl ShiftedSolver<'_, '_> {
    /// `(A - σB)⁻¹` applied to each column, optionally with one step of
    /// iterative refinement whose residual is evaluated through the accurate
    /// operator product.
    fn solve(&self, mut columns: Vec<Vec<f64>>, refine: bool) -> Vec<Vec<f64>> {
        if !refine {
            self.factor.solve_in_place(&mut columns);
            return columns;
        }
        let rhs = columns.clone();
        self.factor.solve_in_place(&mut columns);
        let mut corrections: Vec<Vec<f64>> = columns
            .iter()
            .zip(&rhs)
            .map(|(y, f)| {
                let ay = self.pencil.a.apply(y);
                let by = self.pencil.b.mul_vec(y);
                f.iter().zip(ay.iter().zip(&by)).map(|(f, (a, b))| f - (a - self.shift * b)).collect()
            })
            .collect();
        self.factor.solve_in_place(&mut corrections);
        for (y, dy) in columns.iter_mut().zip(&corrections) {
            y.iter_mut().zip(dy).for_each(|(y, d)| *y += d);
        }
        columns
    }
}

/// `B`-orthonormalizes the columns in place (modified Gram-Schmidt, twice).
/// Columns that vanish are replaced by fresh random directions.
fn b_orthonormalize(pencil: &DeflatedPencil<'_>, columns: &mut [Vec<f64>], rng: &mut ChaCha8Rng) {
    let b = pencil.b;
    for j in 0..columns.len() {
        let mut attempts = 0;
        loop {
            let original = dot(&columns[j], &b.mul_vec(&columns[j])).sqrt();
            for _ in 0..2 {
                for i in 0..j {
                    let c = dot(&columns[i], &b.mul_vec(&columns[j]));
                    let (head, tail) = columns.split_at_mut(j);
                    tail[0].iter_mut().zip(&head[i]).for_each(|(x, v)| *x -= c * v);
                }
            }
            pencil.project(&mut columns[j]);
            let norm = dot(&columns[j], &b.mul_vec(&columns[j])).sqrt();
            if norm > 1e-10 * original && norm > 0.0 {
                columns[j].iter_mut().for_each(|x| *x /= norm);
                break;
            }
            attempts += 1;
            assert!(attempts < 10, "cannot extend the B-orthonormal basis");
            columns[j] = random_vector(rng, pencil.dim());
        }
    }
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Subspace dimension used to resolve the `m` smallest pairs.
fn block_size(pencil: &DeflatedPencil<'_>, m: usize) -> usize {
    (m + m.max(8)).min(pencil.dim() - pencil.kernel_dim())
}

/// Shift-invert subspace iteration on a block of `q` vectors, from random
/// vectors or from `start` (dense eigenvectors, which then need only a few
/// sweeps to reach residuals that the reduced dense problem cannot).
fn subspace_iteration(
    pencil: &DeflatedPencil<'_>,
    m: usize,
    q: usize,
    start: Option<Vec<Vec<f64>>>,
    config: &SolverConfig,
) -> Result<(Vec<f64>, Vec<Vec<f64>>, usize)> {
    let n = pencil.dim();
    let shift = choose_shift(pencil);
    let shifted = pencil.a.matrix().add_scaled(-shift, pencil.b);
    let solver = ShiftedSolver { pencil, shift, factor: BandCholesky::factor(&shifted)? };

    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let mut x: Vec<Vec<f64>> = match start {
        Some(vectors) => vectors,
        None => (0..q).map(|_| random_vector(&mut rng, n)).collect(),
    };
    b_orthonormalize(pencil, &mut x, &mut rng);

    let target = 0.01 * config.tol;
    let mut best = f64::INFINITY;
    let mut stalled = 0;
    let mut values = vec![0.0; q];
    let mut iterations = 0;
    while iterations < config.max_iterations {
        iterations += 1;
        let refine = best < REFINE_BELOW;
        let mut y = solver.solve(x.iter().map(|col| pencil.b.mul_vec(col)).collect(), refine);
        b_orthonormalize(pencil, &mut y, &mut rng);

        let ay: Vec<Vec<f64>> = y.iter().map(|col| pencil.a.apply(col)).collect();
        let mut h = DMatrix::zeros(q, q);
        for i in 0..q {
            for j in i..q {
                let v = 0.5 * (dot(&y[i], &ay[j]) + dot(&y[j], &ay[i]));
                h[(i, j)] = v;
                h[(j, i)] = v;
            }
        }
        let (ritz, v) = small_symmetric_eigen(h);
        values = ritz;
        x = (0..q)
            .map(|k| {
                let mut col = vec![0.0; n];
                for (i, yi) in y.iter().enumerate() {
                    let c = v[(i, k)];
                    col.iter_mut().zip(yi).for_each(|(acc, yv)| *acc += c * yv);
                }
                col
            })
            .collect();

        let worst = (0..m).map(|k| residual(pencil, values[k], &x[k])).fold(0.0, f64::max);
        if worst <= target {
            break;
        }
        if worst < 0.5 * best || (best >= REFINE_BELOW && worst < REFINE_BELOW) {
            best = worst;
            stalled = 0;
        } else {
            stalled += 1;
            if (stalled >= 2 && worst <= config.tol) || stalled >= STALL_LIMIT {
                break;
            }
        }
    }
    x.truncate(m);
    values.truncate(m);
    Ok((values, x, iterations))
}

/// `m` smallest eigenvalues of an assembled form problem.
///
/// Each distinct component block is solved once for its own `m` smallest
/// pairs; the union is merged and truncated. Blocks sharing operators yield
/// bitwise-identical values.
pub fn solve_form(problem: &FormProblem, m: usize, config: &SolverConfig) -> Result<Spectrum> {
    let blocks = problem.blocks();
    if m == 0 {
        return Err(Error::InvalidInput("eigenvalue count must be at least 1".into()));
    }
    // Distinct operators, in first-appearance order.
    let mut distinct: Vec<usize> = Vec::new();
    let mut owner: Vec<usize> = Vec::with_capacity(blocks.len());
    for (i, block) in blocks.iter().enumerate() {
        match distinct.iter().position(|&d| *blocks[d].operators == *block.operators) {
            Some(pos) => owner.push(pos),
            None => {
                owner.push(distinct.len());
                distinct.push(i);
            }
        }
    }

    let solve_one = |d: usize| -> Result<Spectrum> {
        let ops = &blocks[d].operators;
        let pencil = deflate_kernel(&ops.a, &ops.b, &ops.kernel, config.tol)?;
        let count = m.min(ops.dof_count() - pencil.kernel_dim());
        solve_pencil(&pencil, count, config)
    };

    let threads = config.threads.max(1).min(distinct.len().max(1));
    let results: Vec<Result<Spectrum>> = if threads <= 1 {
        distinct.iter().map(|&d| solve_one(d)).collect()
    } else {
        let mut slots: Vec<Option<Result<Spectrum>>> = (0..distinct.len()).map(|_| None).collect();
        std::thread::scope(|scope| {
            let chunk = distinct.len().div_ceil(threads);
            for (chunk_slots, chunk_ids) in slots.chunks_mut(chunk).zip(distinct.chunks(chunk)) {
                let solve_one = &solve_one;
                scope.spawn(move || {
                    for (slot, &d) in chunk_slots.iter_mut().zip(chunk_ids) {
                        *slot = Some(solve_one(d));
                    }
                });
            }
        });
        slots.into_iter().map(|s| s.expect("every block solved")).collect()
    };

    let mut failed: Option<usize> = None;
    let mut solved: Vec<Spectrum> = Vec::with_capacity(results.len());
    for (k, r) in results.into_iter().enumerate() {
        match r {
            Ok(s) => solved.push(s),
            Err(Error::NonConvergence { partial, .. }) if failed.is_none() => {
                failed = Some(k);
                solved.push(*partial);
            }
            Err(e) => return Err(e),
        }
    }

    let offsets: Vec<usize> = blocks
        .iter()
        .scan(0, |acc, b| {
            let start = *acc;
            *acc += b.operators.dof_count();
            Some(start)
        })
        .collect();
    let total = problem.dof_count();

    let mut entries: Vec<(f64, usize, usize)> = Vec::new();
    for (block_idx, &o) in owner.iter().enumerate() {
        for (k, &v) in solved[o].values.iter().enumerate() {
            entries.push((v, block_idx, k));
        }
    }
    entries.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    entries.truncate(m);

    let vectors = config.keep_vectors.then(|| {
        entries
            .iter()
            .map(|&(_, b, k)| {
                let mut full = vec![0.0; total];
                let local = &solved[owner[b]].vectors.as_ref().expect("vectors kept")[k];
                full[offsets[b]..offsets[b] + local.len()].copy_from_slice(local);
                full
            })
            .collect()
    });
    let spectrum = Spectrum {
        label: Some(SpectrumLabel { kind: problem.kind(), degree: problem.degree() }),
        values: entries.iter().map(|e| e.0).collect(),
        residuals: entries.iter().map(|&(_, b, k)| solved[owner[b]].residuals[k]).collect(),
        vectors,
        components: entries.iter().map(|&(_, b, _)| Some(blocks[b].component.clone())).collect(),
        deflated_kernel_dim: owner.iter().map(|&o| solved[o].deflated_kernel_dim).sum(),
    };
    if let Some(k) = failed {
        return Err(Error::NonConvergence {
            iterations: config.max_iterations,
            worst_residual: solved[k].max_residual(),
            partial: Box::new(spectrum),
        });
    }
    Ok(spectrum)
}
