//! Finite-difference assembly of the form eigenproblems on axis-aligned boxes.
//!
//! On a flat box the Hodge Laplacian acts as the scalar Laplacian on each
//! coefficient `ω_I` of `ω = Σ ω_I dx^I`, and every boundary system splits
//! into per-face conditions on each coefficient. A p-form problem is therefore
//! block diagonal with one scalar block per component, and blocks whose face
//! conditions coincide share the same matrices.
//!
//! Grid conventions, per axis with `N` interior nodes and `h = extent/(N+1)`:
//!
//! * nodes `0..=N+1`; nodes `0` and `N+1` lie on the faces;
//! * a face with a zero value drops its boundary node;
//! * a face with only a zero normal derivative keeps its boundary node as an
//!   unknown and closes the stencil with the ghost value `u_{-1} = u_1`;
//! * quadrature weights are `h` inside and `h/2` on boundary nodes.
//!
//! The Laplacian is the positive one, `Δ = -Σ ∂²_k`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

/// Axis-aligned box `Π [0, extent_k]` with a uniform grid per axis.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxDomain {
    extent: Vec<f64>,
    cells: Vec<usize>,
    spacing: Vec<f64>,
}

impl BoxDomain {
    pub const MIN_CELLS: usize = 3;

    pub fn new(extent: &[f64], cells: &[usize]) -> Result<Self> {
        build_domain(extent.len(), extent, cells)
    }

    /// Cube of side `side` with `cells` interior nodes per axis.
    pub fn cube(dim: usize, side: f64, cells: usize) -> Result<Self> {
        build_domain(dim, &vec![side; dim], &vec![cells; dim])
    }

    pub fn dim(&self) -> usize {
        self.extent.len()
    }

    pub fn extent(&self) -> &[f64] {
        &self.extent
    }

    /// Interior node counts per axis.
    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    /// Same box, different resolution.
    pub fn with_cells(&self, cells: &[usize]) -> Result<Self> {
        build_domain(self.dim(), &self.extent, cells)
    }
}

pub fn build_domain(dim: usize, extent: &[f64], cells: &[usize]) -> Result<BoxDomain> {
    if !(1..=3).contains(&dim) {
        return Err(Error::InvalidInput(format!("box dimension must be 1, 2 or 3, got {dim}")));
    }
    if extent.len() != dim || cells.len() != dim {
        return Err(Error::InvalidInput(format!(
            "expected {dim} extents and {dim} cell counts, got {} and {}",
            extent.len(),
            cells.len()
        )));
    }
    if let Some(bad) = extent.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
        return Err(Error::InvalidInput(format!("box extents must be positive, got {bad}")));
    }
    if let Some(bad) = cells.iter().find(|&&c| c < BoxDomain::MIN_CELLS) {
        return Err(Error::InvalidInput(format!(
            "each axis needs at least {} interior nodes, got {bad}",
            BoxDomain::MIN_CELLS
        )));
    }
    let spacing = extent.iter().zip(cells).map(|(e, &c)| e / (c as f64 + 1.0)).collect();
    Ok(BoxDomain { extent: extent.to_vec(), cells: cells.to_vec(), spacing })
}

/// Multi-index `I = (i_1 < … < i_p)` of the coefficient `ω_I`. Axes are
/// zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComponentIndex {
    dim: usize,
    axes: Vec<usize>,
}

impl ComponentIndex {
    pub fn new(dim: usize, axes: &[usize]) -> Result<Self> {
        if axes.len() > dim
            || axes.iter().any(|&a| a >= dim)
            || axes.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::InvalidInput(format!(
                "component axes {axes:?} are not a strictly increasing subset of 0..{dim}"
            )));
        }
        Ok(Self { dim, axes: axes.to_vec() })
    }

    /// All `C(n, p)` components in lexicographic order.
    pub fn all(dim: usize, degree: usize) -> Vec<Self> {
        fn extend(dim: usize, degree: usize, from: usize, acc: &mut Vec<usize>, out: &mut Vec<ComponentIndex>) {
            if acc.len() == degree {
                out.push(ComponentIndex { dim, axes: acc.clone() });
                return;
            }
            for a in from..dim {
                acc.push(a);
                extend(dim, degree, a + 1, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        if degree <= dim {
            extend(dim, degree, 0, &mut Vec::new(), &mut out);
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.axes.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn axes(&self) -> &[usize] {
        &self.axes
    }

    pub fn contains(&self, axis: usize) -> bool {
        self.axes.contains(&axis)
    }

    /// Index of `⋆dx^I` (up to sign).
    pub fn complement(&self) -> Self {
        Self { dim: self.dim, axes: (0..self.dim).filter(|a| !self.contains(*a)).collect() }
    }
}

impl fmt::Display for ComponentIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.axes.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.axes.iter().map(|a| format!("dx{}", a + 1)).collect();
        write!(f, "{}", parts.join("^"))
    }
}

/// Boundary system imposed on a form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryKind {
    /// `ω = 0` and `∇_ν ω = 0`.
    Clamped,
    /// `ω = 0`.
    Dirichlet,
    /// `ν⌟ω = 0` and `ν⌟dω = 0`.
    Absolute,
    /// `ι*ω = 0` and `ι*δω = 0`; the Hodge dual of `Absolute`.
    Relative,
}

/// What a single face imposes on a single component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FaceCondition {
    Value,
    NormalDerivative,
    /// Value and normal derivative both zero.
    Clamped,
}

impl FaceCondition {
    pub fn fixes_value(self) -> bool {
        matches!(self, FaceCondition::Value | FaceCondition::Clamped)
    }
}

/// Conditions on the faces `x_k = 0` (`[k][0]`) and `x_k = extent_k` (`[k][1]`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComponentConditions {
    faces: Vec<[FaceCondition; 2]>,
}

impl ComponentConditions {
    pub fn face(&self, axis: usize, upper: bool) -> FaceCondition {
        self.faces[axis][usize::from(upper)]
    }

    pub fn faces(&self) -> &[[FaceCondition; 2]] {
        &self.faces
    }

    fn all(&self, condition: FaceCondition) -> bool {
        self.faces.iter().flatten().all(|&c| c == condition)
    }
}

pub fn component_conditions(
    domain: &BoxDomain,
    index: &ComponentIndex,
    kind: BoundaryKind,
) -> ComponentConditions {
    let faces = (0..domain.dim())
        .map(|axis| {
            let normal_in_index = index.contains(axis);
            let c = match kind {
                BoundaryKind::Clamped => FaceCondition::Clamped,
                BoundaryKind::Dirichlet => FaceCondition::Value,
                // ν⌟ω keeps the components containing the normal direction.
                BoundaryKind::Absolute if normal_in_index => FaceCondition::Value,
                BoundaryKind::Absolute => FaceCondition::NormalDerivative,
                // ι*ω keeps the components tangent to the face.
                BoundaryKind::Relative if normal_in_index => FaceCondition::NormalDerivative,
                BoundaryKind::Relative => FaceCondition::Value,
            };
            [c, c]
        })
        .collect();
    ComponentConditions { faces }
}

/// The eigenvalue problems that can be assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProblemKind {
    /// `Δ²ω = Γω`, clamped.
    ClampedPlate,
    /// `Δ²ω = ΛΔω`, clamped.
    Buckling,
    /// `Δω = λω`, `ω = 0` on the boundary.
    DirichletLaplace,
    /// `Δω = μω`, absolute conditions.
    AbsoluteLaplace,
    /// `Δω = κω`, relative conditions.
    RelativeLaplace,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 5] = [
        ProblemKind::ClampedPlate,
        ProblemKind::Buckling,
        ProblemKind::DirichletLaplace,
        ProblemKind::AbsoluteLaplace,
        ProblemKind::RelativeLaplace,
    ];

    pub fn boundary(self) -> BoundaryKind {
        match self {
            ProblemKind::ClampedPlate | ProblemKind::Buckling => BoundaryKind::Clamped,
            ProblemKind::DirichletLaplace => BoundaryKind::Dirichlet,
            ProblemKind::AbsoluteLaplace => BoundaryKind::Absolute,
            ProblemKind::RelativeLaplace => BoundaryKind::Relative,
        }
    }

    /// Kind whose degree-`(n-p)` spectrum equals this kind's degree-`p` one.
    pub fn hodge_dual(self) -> Self {
        match self {
            ProblemKind::AbsoluteLaplace => ProblemKind::RelativeLaplace,
            ProblemKind::RelativeLaplace => ProblemKind::AbsoluteLaplace,
            other => other,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::ClampedPlate => "clamped_plate",
            ProblemKind::Buckling => "buckling",
            ProblemKind::DirichletLaplace => "dirichlet_laplace",
            ProblemKind::AbsoluteLaplace => "absolute_laplace",
            ProblemKind::RelativeLaplace => "relative_laplace",
        }
    }

    /// Conventional symbol of the eigenvalues.
    pub fn symbol(self) -> &'static str {
        match self {
            ProblemKind::ClampedPlate => "Gamma",
            ProblemKind::Buckling => "Lambda",
            ProblemKind::DirichletLaplace => "lambda",
            ProblemKind::AbsoluteLaplace => "mu",
            ProblemKind::RelativeLaplace => "kappa",
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "clamped_plate" | "clamped" => Ok(ProblemKind::ClampedPlate),
            "buckling" => Ok(ProblemKind::Buckling),
            "dirichlet_laplace" | "dirichlet" => Ok(ProblemKind::DirichletLaplace),
            "absolute_laplace" | "absolute" => Ok(ProblemKind::AbsoluteLaplace),
            "relative_laplace" | "relative" => Ok(ProblemKind::RelativeLaplace),
            other => Err(Error::InvalidInput(format!("unknown problem kind `{other}`"))),
        }
    }
}

/// A symmetric operator, optionally known in Gram form `Lᵀ diag(w) L`.
///
/// When the factor is present, products are evaluated through it: applying
/// `L` to a smooth vector loses far fewer digits than applying the assembled
/// fourth-difference matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymOperator {
    matrix: CsrMatrix,
    gram: Option<(CsrMatrix, Vec<f64>)>,
}

impl SymOperator {
    pub fn explicit(matrix: CsrMatrix) -> Self {
        Self { matrix, gram: None }
    }

    pub fn gram(factor: CsrMatrix, weights: Vec<f64>) -> Self {
        let matrix = factor.weighted_gram(&weights);
        Self { matrix, gram: Some((factor, weights)) }
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn factor(&self) -> Option<(&CsrMatrix, &[f64])> {
        self.gram.as_ref().map(|(l, w)| (l, w.as_slice()))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        match &self.gram {
            Some((l, w)) => {
                let mut lx = l.mul_vec(x);
                for (v, wi) in lx.iter_mut().zip(w) {
                    *v *= wi;
                }
                l.transpose_mul_vec(&lx)
            }
            None => self.matrix.mul_vec(x),
        }
    }
}

/// Unknowns of one component block: per axis, the node range kept after
/// eliminating zero-value faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeLayout {
    interior: Vec<usize>,
    first: Vec<usize>,
    count: Vec<usize>,
}

impl NodeLayout {
    fn new(domain: &BoxDomain, conditions: &ComponentConditions) -> Self {
        let mut first = Vec::new();
        let mut count = Vec::new();
        for (axis, &n) in domain.cells().iter().enumerate() {
            let lo = usize::from(conditions.face(axis, false).fixes_value());
            let hi = if conditions.face(axis, true).fixes_value() { n } else { n + 1 };
            first.push(lo);
            count.push(hi + 1 - lo);
        }
        Self { interior: domain.cells().to_vec(), first, count }
    }

    pub fn len(&self) -> usize {
        self.count.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat index of the grid node `node` (axis 0 fastest), if it is an unknown.
    pub fn index_of(&self, node: &[isize]) -> Option<usize> {
        let mut flat = 0;
        let mut stride = 1;
        for ((&x, &first), &count) in node.iter().zip(&self.first).zip(&self.count) {
            let local = x - first as isize;
            if local < 0 || local >= count as isize {
                return None;
            }
            flat += local as usize * stride;
            stride *= count;
        }
        Some(flat)
    }

    /// Grid nodes of the unknowns, in flat order.
    pub fn nodes(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.len()).map(move |mut flat| {
            self.count
                .iter()
                .zip(&self.first)
                .map(|(&c, &f)| {
                    let local = flat % c;
                    flat /= c;
                    local + f
                })
                .collect()
        })
    }

    fn is_boundary(&self, axis: usize, node: usize) -> bool {
        node == 0 || node == self.interior[axis] + 1
    }
}

/// Matrices of one component block.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockOperators {
    pub conditions: ComponentConditions,
    pub layout: NodeLayout,
    pub a: SymOperator,
    pub b: CsrMatrix,
    /// Known null vectors of `a` (the constants when every face is Neumann).
    pub kernel: Vec<Vec<f64>>,
}

impl BlockOperators {
    pub fn dof_count(&self) -> usize {
        self.layout.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormBlock {
    pub component: ComponentIndex,
    pub operators: Arc<BlockOperators>,
}

/// An assembled p-form eigenproblem `A x = θ B x`, block diagonal over the
/// components.
#[derive(Debug, Clone, PartialEq)]
pub struct FormProblem {
    domain: BoxDomain,
    degree: usize,
    kind: ProblemKind,
    blocks: Vec<FormBlock>,
}

impl FormProblem {
    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    pub fn blocks(&self) -> &[FormBlock] {
        &self.blocks
    }

    pub fn dof_count(&self) -> usize {
        self.blocks.iter().map(|b| b.operators.dof_count()).sum()
    }

    /// The full block-diagonal pair `(A, B)`.
    pub fn operator_pair(&self) -> (CsrMatrix, CsrMatrix) {
        let a: Vec<_> = self.blocks.iter().map(|b| b.operators.a.matrix()).collect();
        let b: Vec<_> = self.blocks.iter().map(|b| &b.operators.b).collect();
        (CsrMatrix::block_diagonal(&a), CsrMatrix::block_diagonal(&b))
    }

    /// Factor `(L, w)` with `A = Lᵀ diag(w) L` for block `block`: the clamped
    /// Laplacian for the plate problems, the forward-difference gradient for
    /// the others.
    pub fn energy_factor(&self, block: usize) -> (CsrMatrix, Vec<f64>) {
        let ops = &self.blocks[block].operators;
        match ops.a.factor() {
            Some((l, w)) => (l.clone(), w.to_vec()),
            None => gradient(&self.domain, &ops.layout),
        }
    }

    /// Applies the Hodge star: degree `n - p`, components relabeled by their
    /// complements, absolute and relative exchanged. Block matrices are shared.
    pub fn hodge_dual(&self) -> FormProblem {
        let mut blocks: Vec<FormBlock> = self
            .blocks
            .iter()
            .map(|b| FormBlock { component: b.component.complement(), operators: Arc::clone(&b.operators) })
            .collect();
        blocks.sort_by(|x, y| x.component.cmp(&y.component));
        FormProblem {
            domain: self.domain.clone(),
            degree: self.domain.dim() - self.degree,
            kind: self.kind.hodge_dual(),
            blocks,
        }
    }
}

pub fn assemble(domain: &BoxDomain, degree: usize, kind: ProblemKind) -> Result<FormProblem> {
    let dim = domain.dim();
    if degree > dim {
        return Err(Error::InvalidInput(format!("form degree {degree} exceeds dimension {dim}")));
    }
    let mut cache: HashMap<ComponentConditions, Arc<BlockOperators>> = HashMap::new();
    let blocks = ComponentIndex::all(dim, degree)
        .into_iter()
        .map(|component| {
            let conditions = component_conditions(domain, &component, kind.boundary());
            let operators = Arc::clone(
                cache
                    .entry(conditions.clone())
                    .or_insert_with(|| Arc::new(block_operators(domain, conditions, kind))),
            );
            FormBlock { component, operators }
        })
        .collect();
    Ok(FormProblem { domain: domain.clone(), degree, kind, blocks })
}

fn block_operators(domain: &BoxDomain, conditions: ComponentConditions, kind: ProblemKind) -> BlockOperators {
    let layout = NodeLayout::new(domain, &conditions);
    let mass = mass_diagonal(domain, &layout);
    let (a, b) = match kind {
        ProblemKind::ClampedPlate => {
            let (l, w) = clamped_laplacian(domain, &layout);
            (SymOperator::gram(l, w), CsrMatrix::diagonal(&mass))
        }
        ProblemKind::Buckling => {
            let (l, w) = clamped_laplacian(domain, &layout);
            (SymOperator::gram(l, w), stiffness(domain, &layout))
        }
        ProblemKind::DirichletLaplace | ProblemKind::AbsoluteLaplace | ProblemKind::RelativeLaplace => {
            (SymOperator::explicit(stiffness(domain, &layout)), CsrMatrix::diagonal(&mass))
        }
    };
    let kernel = if conditions.all(FaceCondition::NormalDerivative) {
        vec![vec![1.0; layout.len()]]
    } else {
        Vec::new()
    };
    BlockOperators { conditions, layout, a, b, kernel }
}

/// Trapezoid weight of `node` along `axis`.
fn axis_weight(domain: &BoxDomain, layout: &NodeLayout, axis: usize, node: usize) -> f64 {
    let h = domain.spacing()[axis];
    if layout.is_boundary(axis, node) {
        0.5 * h
    } else {
        h
    }
}

fn mass_diagonal(domain: &BoxDomain, layout: &NodeLayout) -> Vec<f64> {
    layout
        .nodes()
        .map(|node| (0..node.len()).map(|k| axis_weight(domain, layout, k, node[k])).product())
        .collect()
}

/// Product of the trapezoid weights of `node` over all axes except `skip`.
fn transverse_weight(domain: &BoxDomain, layout: &NodeLayout, node: &[usize], skip: usize) -> f64 {
    (0..node.len())
        .filter(|&k| k != skip)
        .map(|k| axis_weight(domain, layout, k, node[k]))
        .product()
}

/// `K = M Δ_h`, assembled as `Σ_k S_k ⊗ Π_{l≠k} W_l` from 1D stiffness
/// matrices `S_k` (diagonal `2/h`, or `1/h` on a kept boundary node;
/// off-diagonal `-1/h`).
fn stiffness(domain: &BoxDomain, layout: &NodeLayout) -> CsrMatrix {
    let mut upper = Vec::new();
    for (row, node) in layout.nodes().enumerate() {
        let mut diag = 0.0;
        for axis in 0..node.len() {
            let h = domain.spacing()[axis];
            let s = if layout.is_boundary(axis, node[axis]) { 1.0 / h } else { 2.0 / h };
            let transverse = transverse_weight(domain, layout, &node, axis);
            diag += s * transverse;
            let mut next: Vec<isize> = node.iter().map(|&v| v as isize).collect();
            next[axis] += 1;
            if let Some(col) = layout.index_of(&next) {
                upper.push((row, col, -transverse / h));
            }
        }
        upper.push((row, row, diag));
    }
    CsrMatrix::symmetric_from_upper(layout.len(), &upper)
}

/// Forward differences along every grid edge with at least one unknown
/// endpoint, weighted so that `Gᵀ diag(w) G` equals [`stiffness`].
fn gradient(domain: &BoxDomain, layout: &NodeLayout) -> (CsrMatrix, Vec<f64>) {
    let dim = domain.dim();
    let full: Vec<usize> = domain.cells().iter().map(|&n| n + 2).collect();
    let total: usize = full.iter().product();
    let mut triplets = Vec::new();
    let mut weights = Vec::new();
    let mut node = vec![0isize; dim];
    for axis in 0..dim {
        let h = domain.spacing()[axis];
        for flat in 0..total {
            let mut rest = flat;
            for k in 0..dim {
                node[k] = (rest % full[k]) as isize;
                rest /= full[k];
            }
            if node[axis] as usize + 1 >= full[axis] {
                continue;
            }
            let mut next = node.clone();
            next[axis] += 1;
            let (from, to) = (layout.index_of(&node), layout.index_of(&next));
            if from.is_none() && to.is_none() {
                continue;
            }
            let row = weights.len();
            let coords: Vec<usize> = node.iter().map(|&v| v as usize).collect();
            weights.push(transverse_weight(domain, layout, &coords, axis) / h);
            if let Some(c) = from {
                triplets.push((row, c, -1.0));
            }
            if let Some(c) = to {
                triplets.push((row, c, 1.0));
            }
        }
    }
    (CsrMatrix::from_triplets(weights.len(), layout.len(), &triplets), weights)
}

/// Discrete Laplacian of a clamped component evaluated on the interior nodes
/// and on the face nodes (exactly one boundary coordinate), together with the
/// trapezoid weights of those evaluation nodes.
///
/// On a face node the value is zero and the ghost across the face mirrors the
/// first interior node, so `(Δ_h u)_face = -2 u_1 / h²`. Nodes with two or
/// more boundary coordinates see only zero neighbors and are omitted.
fn clamped_laplacian(domain: &BoxDomain, layout: &NodeLayout) -> (CsrMatrix, Vec<f64>) {
    let dim = domain.dim();
    let cells = domain.cells();
    let h2: Vec<f64> = domain.spacing().iter().map(|h| h * h).collect();
    let full: Vec<usize> = cells.iter().map(|&n| n + 2).collect();
    let total: usize = full.iter().product();

    let mut triplets = Vec::new();
    let mut weights = Vec::new();
    let mut node = vec![0isize; dim];
    for flat in 0..total {
        let mut rest = flat;
        for axis in 0..dim {
            node[axis] = (rest % full[axis]) as isize;
            rest /= full[axis];
        }
        let on_boundary = (0..dim).filter(|&k| node[k] == 0 || node[k] == cells[k] as isize + 1).count();
        if on_boundary > 1 {
            continue;
        }
        let row = weights.len();
        let mut entries: Vec<(usize, f64)> = Vec::new();
        if let Some(col) = layout.index_of(&node) {
            let centre: f64 = h2.iter().map(|h2| 2.0 / h2).sum();
            entries.push((col, centre));
        }
        for axis in 0..dim {
            for step in [-1isize, 1] {
                let mut neighbor = node.clone();
                neighbor[axis] += step;
                if neighbor[axis] == -1 {
                    neighbor[axis] = 1;
                } else if neighbor[axis] == cells[axis] as isize + 2 {
                    neighbor[axis] = cells[axis] as isize;
                }
                if let Some(col) = layout.index_of(&neighbor) {
                    entries.push((col, -1.0 / h2[axis]));
                }
            }
        }
        if entries.is_empty() {
            continue;
        }
        let weight: f64 = (0..dim)
            .map(|k| {
                let h = domain.spacing()[k];
                if node[k] == 0 || node[k] == cells[k] as isize + 1 {
                    0.5 * h
                } else {
                    h
                }
            })
            .product();
        weights.push(weight);
        triplets.extend(entries.into_iter().map(|(c, v)| (row, c, v)));
    }
    (CsrMatrix::from_triplets(weights.len(), layout.len(), &triplets), weights)
}

/// Biharmonic pair for the hinged plate (`u = Δu = 0`): the Gram form of the
/// Dirichlet Laplacian alone, without face rows. Its admissible space is
/// larger than the clamped one.
pub fn hinged_biharmonic(domain: &BoxDomain) -> (SymOperator, CsrMatrix) {
    let conditions = component_conditions(domain, &ComponentIndex::all(domain.dim(), 0)[0], BoundaryKind::Dirichlet);
    let layout = NodeLayout::new(domain, &conditions);
    let mass = mass_diagonal(domain, &layout);
    let k = stiffness(domain, &layout);
    // Δ_h = M⁻¹ K on the interior nodes.
    let triplets: Vec<_> = k.iter().map(|(r, c, v)| (r, c, v / mass[r])).collect();
    let l = CsrMatrix::from_triplets(layout.len(), layout.len(), &triplets);
    (SymOperator::gram(l, mass.clone()), CsrMatrix::diagonal(&mass))
}
