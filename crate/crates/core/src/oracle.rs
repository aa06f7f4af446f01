//! Numerical Lie closure and the checks built on it.
//!
//! Skew-Hermitian `D × D` matrices are handled as vectors in `R^{D²}` with the
//! real Hilbert-Schmidt inner product `Re tr(A†B)` (see
//! [`crate::linalg::skew_to_coords`]). The closure of a generating set is the
//! smallest subspace containing the generators and invariant under `ad_g` for
//! every generator `g`; right-nested brackets of generators span the whole
//! generated algebra, so this is the generated Lie algebra.

use nalgebra::{DMatrix, DMatrixView, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cg::{enumerate_subspaces, restrict, subspace_basis, SubspaceBasis, SubspaceSelection};
use crate::classify::{predict_descriptor, LieAlgebraDescriptor};
use crate::error::{Error, Result};
use crate::linalg::{coords_to_skew, frobenius, identity, kron, skew_to_coords, skewness_defect, trace, Operator, I};
use crate::network::{SpinLevelNetwork, SpinNetwork};
use crate::operators::{full_generators, reduced_generators, spin_level_full_generators};

pub const DEFAULT_TOL: f64 = 1e-9;
/// Largest full-space dimension the oracle handles by default (six spins).
pub const DEFAULT_DIM_CAP: usize = 64;
/// Skewness defect tolerated on generator input.
const SKEW_TOL: f64 = 1e-10;
/// Candidates projected together against the current basis.
const BATCH: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosureOptions {
    /// Residual below which a candidate direction counts as already spanned,
    /// relative to the largest generator norm.
    pub tol: f64,
    /// Optional extra cap on the algebra dimension.
    pub ambient_cap: Option<usize>,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, ambient_cap: None }
    }
}

impl ClosureOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

/// Orthonormal basis of a generated real Lie algebra.
#[derive(Debug, Clone)]
pub struct ClosureResult {
    pub dim: usize,
    /// Dimension of the matrices the algebra acts on.
    pub space_dim: usize,
    pub rounds: usize,
    /// The dimension reached the ambient maximum and iteration stopped.
    pub saturated_early: bool,
    /// Some basis element has a nonzero trace, i.e. the algebra has a
    /// direction outside su(D).
    pub trace_direction: bool,
    coords: Vec<f64>,
}

impl ClosureResult {
    fn empty(space_dim: usize) -> Self {
        Self { dim: 0, space_dim, rounds: 0, saturated_early: false, trace_direction: false, coords: Vec::new() }
    }

    /// Dimension of the traceless part of the algebra.
    pub fn traceless_dim(&self) -> usize {
        self.dim - usize::from(self.trace_direction)
    }

    fn n(&self) -> usize {
        self.space_dim * self.space_dim
    }

    pub fn coords(&self, k: usize) -> &[f64] {
        let n = self.n();
        &self.coords[k * n..(k + 1) * n]
    }

    /// Basis element `k` as a skew-Hermitian matrix.
    pub fn element(&self, k: usize) -> Operator {
        coords_to_skew(self.coords(k), self.space_dim)
    }

    pub fn basis(&self) -> Vec<Operator> {
        (0..self.dim).map(|k| self.element(k)).collect()
    }

    fn view(&self) -> DMatrixView<'_, f64> {
        DMatrixView::from_slice(&self.coords, self.n(), self.dim)
    }

    /// Norm of the component of `x` (in coordinates) orthogonal to the span.
    fn residual_coords(&self, x: &[f64]) -> f64 {
        let v = DVector::from_column_slice(x);
        if self.dim == 0 {
            return v.norm();
        }
        let q = self.view();
        let coef = q.tr_mul(&v);
        (v - q * coef).norm()
    }

    /// Largest commutator residual over basis pairs, taking every pair when
    /// there are at most `max_pairs` of them and an evenly strided subset
    /// otherwise.
    pub fn closure_defect(&self, max_pairs: usize) -> f64 {
        let pairs: Vec<(usize, usize)> = (0..self.dim).flat_map(|a| ((a + 1)..self.dim).map(move |b| (a, b))).collect();
        let stride = pairs.len().div_ceil(max_pairs.max(1)).max(1);
        let mut buf = vec![0.0; self.n()];
        let mut worst: f64 = 0.0;
        for &(a, b) in pairs.iter().step_by(stride) {
            let x = self.element(a);
            let y = self.element(b);
            skew_to_coords(&(&x * &y - &y * &x), &mut buf);
            worst = worst.max(self.residual_coords(&buf));
        }
        worst
    }

    /// Largest `|tr X| / ‖X‖` over the basis.
    pub fn max_trace(&self) -> f64 {
        (0..self.dim).map(|k| self.coords(k)[..self.space_dim].iter().sum::<f64>().abs()).fold(0.0, f64::max)
    }

    /// Orthogonal projector onto the span, in coordinates.
    pub fn projector(&self) -> DMatrix<f64> {
        if self.dim == 0 {
            return DMatrix::zeros(self.n(), self.n());
        }
        let q = self.view();
        q * q.transpose()
    }
}

/// Growing orthonormal basis plus matrix forms of its elements.
struct Basis {
    d: usize,
    n: usize,
    tol: f64,
    coords: Vec<f64>,
    re: Vec<f64>,
    im: Vec<f64>,
    dim: usize,
}

impl Basis {
    fn new(d: usize, tol: f64) -> Self {
        Self { d, n: d * d, tol, coords: Vec::new(), re: Vec::new(), im: Vec::new(), dim: 0 }
    }

    fn push(&mut self, v: &DVector<f64>) {
        self.coords.extend_from_slice(v.as_slice());
        let m = coords_to_skew(v.as_slice(), self.d);
        // Column-major D×D blocks, so consecutive elements form one wide matrix.
        for col in 0..self.d {
            for row in 0..self.d {
                self.re.push(m[(row, col)].re);
                self.im.push(m[(row, col)].im);
            }
        }
        self.dim += 1;
    }

    /// Orthogonalises the columns of `cands` against the basis and appends
    /// those with residual above `tol`, stopping once `cap` is reached.
    /// Returns how many were appended.
    fn insert_batch(&mut self, mut cands: DMatrix<f64>, cap: usize) -> usize {
        let start = self.dim;
        if self.dim > 0 {
            project_out(&self.coords, self.n, self.dim, cands.as_mut_slice());
        }
        for k in 0..cands.ncols() {
            if self.dim >= cap {
                break;
            }
            let mut r = cands.column(k).into_owned();
            let fresh = &self.coords[start * self.n..];
            project_out_vec(fresh, self.n, self.dim - start, r.as_mut_slice());
            if r.norm() <= self.tol {
                continue;
            }
            // Second full pass keeps the basis orthonormal to working precision.
            project_out_vec(&self.coords, self.n, self.dim, r.as_mut_slice());
            let norm = r.norm();
            if norm <= self.tol {
                continue;
            }
            r /= norm;
            self.push(&r);
        }
        self.dim - start
    }

    /// Coordinates of `[a, q_k]` for basis elements `k` in `range`, as columns.
    fn commutators_with(
        &self,
        a_re: &DMatrix<f64>,
        a_im: &DMatrix<f64>,
        range: std::ops::Range<usize>,
    ) -> DMatrix<f64> {
        let d = self.d;
        let count = range.len();
        let lo = range.start * self.n;
        let hi = range.end * self.n;
        let q_re = DMatrixView::from_slice(&self.re[lo..hi], d, d * count);
        let q_im = DMatrixView::from_slice(&self.im[lo..hi], d, d * count);
        let p_re = a_re * q_re - a_im * q_im;
        let p_im = a_re * q_im + a_im * q_re;
        let s = std::f64::consts::SQRT_2;
        let mut out = DMatrix::zeros(self.n, count);
        for k in 0..count {
            let off = k * d;
            let mut col = out.column_mut(k);
            // X = P − P†; coordinates of H = −iX.
            for j in 0..d {
                col[j] = 2.0 * p_im[(j, off + j)];
            }
            let mut p = d;
            for j in 0..d {
                for l in (j + 1)..d {
                    let x_re = p_re[(j, off + l)] - p_re[(l, off + j)];
                    let x_im = p_im[(j, off + l)] + p_im[(l, off + j)];
                    col[p] = s * x_im;
                    col[p + 1] = -s * x_re;
                    p += 2;
                }
            }
        }
        out
    }

    fn element_parts(&self, k: usize) -> (DMatrix<f64>, DMatrix<f64>) {
        let lo = k * self.n;
        let hi = lo + self.n;
        (
            DMatrix::from_column_slice(self.d, self.d, &self.re[lo..hi]),
            DMatrix::from_column_slice(self.d, self.d, &self.im[lo..hi]),
        )
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `r ← r − Q (Qᵀ r)` for a single vector.
fn project_out_vec(q: &[f64], n: usize, m: usize, r: &mut [f64]) {
    let coef: Vec<f64> = (0..m).map(|j| dot(&q[j * n..(j + 1) * n], r)).collect();
    for (j, &cj) in coef.iter().enumerate() {
        for (x, qv) in r.iter_mut().zip(&q[j * n..(j + 1) * n]) {
            *x -= cj * qv;
        }
    }
}

/// `C ← C − Q (Qᵀ C)` for column-major `Q` (`n × m`) and `C` (`n × b`).
fn project_out(q: &[f64], n: usize, m: usize, c: &mut [f64]) {
    let b = c.len() / n;
    let mut coef = vec![0.0; m * b];
    // SAFETY: slices are sized for the given shapes and strides; `coef` does
    // not alias `q` or `c`.
    unsafe {
        // coef (m×b) = Qᵀ C
        matrixmultiply::dgemm(
            m,
            n,
            b,
            1.0,
            q.as_ptr(),
            n as isize,
            1,
            c.as_ptr(),
            1,
            n as isize,
            0.0,
            coef.as_mut_ptr(),
            1,
            m as isize,
        );
        // C −= Q coef
        matrixmultiply::dgemm(
            n,
            m,
            b,
            -1.0,
            q.as_ptr(),
            1,
            n as isize,
            coef.as_ptr(),
            1,
            m as isize,
            1.0,
            c.as_mut_ptr(),
            1,
            n as isize,
        );
    }
}

fn check_generators(generators: &[Operator]) -> Result<usize> {
    let d = generators.first().map(|g| g.nrows()).unwrap_or(0);
    for g in generators {
        if g.nrows() != d || g.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: g.nrows().max(g.ncols()) });
        }
        let defect = skewness_defect(g);
        if defect > SKEW_TOL {
            return Err(Error::NotSkewHermitian { defect });
        }
    }
    Ok(d)
}

/// Real Lie algebra generated by skew-Hermitian `generators`.
///
/// The generators are scaled by the largest generator norm and
/// orthonormalised; each round brackets every element added in the previous
/// round with the orthonormalised generators and keeps the directions whose
/// residual exceeds `tol`. Iteration stops when a round adds nothing or the
/// dimension reaches `D² − 1` (`D²` when some generator has a trace) or the
/// optional `ambient_cap`.
pub fn lie_closure(generators: &[Operator], opts: ClosureOptions) -> Result<ClosureResult> {
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::BadTolerance(opts.tol));
    }
    let d = check_generators(generators)?;
    let scale = generators.iter().map(frobenius).fold(0.0, f64::max);
    if d == 0 || scale == 0.0 {
        return Ok(ClosureResult::empty(d));
    }
    let traceless = generators.iter().all(|g| trace(g).norm() <= 1e-12 * scale * (d as f64).sqrt());
    let ambient = if traceless { d * d - 1 } else { d * d };
    let cap = opts.ambient_cap.map_or(ambient, |c| c.min(ambient));

    let n = d * d;
    let mut basis = Basis::new(d, opts.tol);
    let mut seeds = DMatrix::zeros(n, generators.len());
    for (k, g) in generators.iter().enumerate() {
        let mut col = vec![0.0; n];
        skew_to_coords(&(g / Complex64::new(scale, 0.0)), &mut col);
        seeds.set_column(k, &DVector::from_vec(col));
    }
    basis.insert_batch(seeds, cap);
    let ad: Vec<(DMatrix<f64>, DMatrix<f64>)> = (0..basis.dim).map(|k| basis.element_parts(k)).collect();

    let mut new = 0..basis.dim;
    let mut rounds = 0;
    let first_round_len = basis.dim;
    while !new.is_empty() && basis.dim < cap {
        rounds += 1;
        let round_start = basis.dim;
        let mut pending: Vec<DMatrix<f64>> = Vec::new();
        let mut pending_cols = 0;
        'round: for (a_idx, (a_re, a_im)) in ad.iter().enumerate() {
            // The first round only needs each unordered generator pair once.
            let lo = if rounds == 1 { (a_idx + 1).min(first_round_len) } else { new.start };
            let mut k = lo.max(new.start);
            while k < new.end {
                let hi = (k + BATCH).min(new.end);
                let cands = basis.commutators_with(a_re, a_im, k..hi);
                pending_cols += cands.ncols();
                pending.push(cands);
                if pending_cols >= BATCH {
                    basis.insert_batch(concat_columns(&pending, n), cap);
                    pending.clear();
                    pending_cols = 0;
                    if basis.dim >= cap {
                        break 'round;
                    }
                }
                k = hi;
            }
        }
        if pending_cols > 0 && basis.dim < cap {
            basis.insert_batch(concat_columns(&pending, n), cap);
        }
        new = round_start..basis.dim;
    }

    let saturated_early = basis.dim >= cap;
    let mut result = ClosureResult {
        dim: basis.dim,
        space_dim: d,
        rounds,
        saturated_early,
        trace_direction: false,
        coords: basis.coords,
    };
    result.trace_direction = result.max_trace() > 1e-9;
    Ok(result)
}

fn concat_columns(parts: &[DMatrix<f64>], rows: usize) -> DMatrix<f64> {
    let cols: usize = parts.iter().map(|p| p.ncols()).sum();
    let mut data = Vec::with_capacity(rows * cols);
    for p in parts {
        data.extend_from_slice(p.as_slice());
    }
    DMatrix::from_vec(rows, cols, data)
}

/// Whether `op` lies in the span of the closure, up to `tol · ‖op‖`.
pub fn in_span(op: &Operator, result: &ClosureResult, tol: f64) -> Result<bool> {
    if op.nrows() != result.space_dim || op.ncols() != result.space_dim {
        return Err(Error::DimensionMismatch { expected: result.space_dim, found: op.nrows() });
    }
    let defect = skewness_defect(op);
    if defect > SKEW_TOL {
        return Err(Error::NotSkewHermitian { defect });
    }
    let norm = frobenius(op);
    if norm == 0.0 {
        return Ok(true);
    }
    let mut buf = vec![0.0; result.n()];
    skew_to_coords(op, &mut buf);
    Ok(result.residual_coords(&buf) < tol * norm)
}

/// Dimension of the span of a set of skew-Hermitian matrices.
pub fn span_dim(ops: &[Operator], tol: f64) -> usize {
    let Some(first) = ops.first() else { return 0 };
    let d = first.nrows();
    let scale = ops.iter().map(frobenius).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let mut basis = Basis::new(d, tol);
    let mut col = vec![0.0; d * d];
    for chunk in ops.chunks(BATCH) {
        let mut m = DMatrix::zeros(d * d, chunk.len());
        for (k, op) in chunk.iter().enumerate() {
            skew_to_coords(&(op / Complex64::new(scale, 0.0)), &mut col);
            m.set_column(k, &DVector::from_column_slice(&col));
        }
        basis.insert_batch(m, usize::MAX);
    }
    basis.dim
}

/// Index bookkeeping for a tensor product with some factors singled out.
struct FactorSplit {
    /// Position of each full index inside the kept factors.
    kept: Vec<usize>,
    /// Full indices grouped by their digits on the remaining factors.
    groups: Vec<Vec<usize>>,
    kept_dim: usize,
}

impl FactorSplit {
    fn new(dims: &[usize], keep: &[usize]) -> Self {
        let total: usize = dims.iter().product();
        let kept_dim: usize = keep.iter().map(|&j| dims[j]).product();
        let mut kept = Vec::with_capacity(total);
        let mut groups = vec![Vec::with_capacity(kept_dim); total / kept_dim];
        for index in 0..total {
            // Mixed-radix digits, first factor most significant.
            let mut rest = index;
            let mut digits = vec![0; dims.len()];
            for (slot, &d) in digits.iter_mut().zip(dims).rev() {
                *slot = rest % d;
                rest /= d;
            }
            let (mut k, mut o) = (0, 0);
            for (j, (&g, &d)) in digits.iter().zip(dims).enumerate() {
                if keep.contains(&j) {
                    k = k * d + g;
                } else {
                    o = o * d + g;
                }
            }
            kept.push(k);
            groups[o].push(index);
        }
        Self { kept, groups, kept_dim }
    }

    fn total(&self) -> usize {
        self.kept.len()
    }

    fn is_everything(&self) -> bool {
        self.kept_dim == self.total()
    }
}

/// Partial trace of `x` onto the kept factors, divided by the dimension of
/// the traced-out factors.
fn reduce_to(x: &Operator, split: &FactorSplit) -> Operator {
    if split.is_everything() {
        // Kept factors in original order already index the full space.
        return x.clone();
    }
    let kd = split.kept_dim;
    let mut m = Operator::zeros(kd, kd);
    for group in &split.groups {
        for &r in group {
            for &c in group {
                m[(split.kept[r], split.kept[c])] += x[(r, c)];
            }
        }
    }
    m / Complex64::new(split.groups.len() as f64, 0.0)
}

/// `m` on the kept factors, identity elsewhere.
fn embed_local(m: &Operator, split: &FactorSplit) -> Operator {
    if split.is_everything() {
        return m.clone();
    }
    let total = split.total();
    let mut out = Operator::zeros(total, total);
    for group in &split.groups {
        for &r in group {
            for &c in group {
                out[(r, c)] = m[(split.kept[r], split.kept[c])];
            }
        }
    }
    out
}

fn traceless_part(m: &Operator) -> Operator {
    let d = m.nrows();
    m - identity(d) * (trace(m) / Complex64::new(d as f64, 0.0))
}

/// Outcome of comparing a measured subspace algebra with its prediction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub selection: SubspaceSelection,
    pub subspace_dim: usize,
    pub predicted: LieAlgebraDescriptor,
    pub measured_dim: usize,
    /// Measured dimension with any identity direction removed.
    pub measured_traceless_dim: usize,
    pub identity_direction: bool,
    /// Dimension of the algebra's image in each predicted block.
    pub block_dims: Vec<usize>,
    /// Every basis element splits as a sum of per-block local terms.
    pub block_structure_ok: bool,
    pub matches: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub tol: f64,
    /// Largest full-space dimension for which bases are built.
    pub full_dim_cap: usize,
    /// Largest subspace dimension whose algebra is computed.
    pub subspace_dim_cap: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, full_dim_cap: DEFAULT_DIM_CAP, subspace_dim_cap: DEFAULT_DIM_CAP }
    }
}

/// Restricts every reduced generator to the subspace and measures the
/// generated algebra against the prediction of the associated graph.
pub fn verify_prediction(
    net: &SpinNetwork,
    selection: &SubspaceSelection,
    opts: VerifyOptions,
) -> Result<Verification> {
    let predicted = predict_descriptor(selection, net)?;
    let basis = subspace_basis(selection, net, opts.full_dim_cap)?;
    if basis.dim() > opts.subspace_dim_cap {
        return Err(Error::CapExceeded { dim: basis.dim(), cap: opts.subspace_dim_cap });
    }
    let generators = reduced_generators(net)?.iter().map(|g| restrict(g, &basis)).collect::<Result<Vec<_>>>()?;
    let closure = lie_closure(&generators, ClosureOptions::with_tol(opts.tol))?;
    let (block_dims, block_structure_ok) = block_structure(&closure, &basis, &predicted, opts.tol);
    let measured_traceless_dim = closure.traceless_dim();
    let matches = measured_traceless_dim == predicted.total_algebra_dim
        && block_structure_ok
        && block_dims.iter().zip(&predicted.blocks).all(|(&m, b)| m == b.algebra_dim());
    Ok(Verification {
        selection: selection.clone(),
        subspace_dim: basis.dim(),
        predicted,
        measured_dim: closure.dim,
        measured_traceless_dim,
        identity_direction: closure.trace_direction,
        block_dims,
        block_structure_ok,
        matches,
    })
}

/// Splits every closure element into per-block local parts and reports the
/// dimension of each block's image, plus whether the split is exact.
fn block_structure(
    closure: &ClosureResult,
    basis: &SubspaceBasis,
    predicted: &LieAlgebraDescriptor,
    tol: f64,
) -> (Vec<usize>, bool) {
    let dims = basis.factor_dims();
    let total = basis.dim();
    let splits: Vec<FactorSplit> = predicted.blocks.iter().map(|b| FactorSplit::new(&dims, &b.clusters())).collect();
    let mut locals: Vec<Vec<Operator>> = vec![Vec::new(); predicted.blocks.len()];
    let mut ok = true;
    for k in 0..closure.dim {
        let x = closure.element(k);
        let mut rebuilt = identity(total) * (trace(&x) / Complex64::new(total as f64, 0.0));
        for (h, split) in splits.iter().enumerate() {
            let local = traceless_part(&reduce_to(&x, split));
            rebuilt += embed_local(&local, split);
            locals[h].push(local);
        }
        if frobenius(&(x - rebuilt)) > 1e3 * tol {
            ok = false;
        }
    }
    let block_dims = locals.iter().map(|ops| span_dim(ops, tol)).collect();
    (block_dims, ok)
}

/// Either network model, for full-space checks.
#[derive(Debug, Clone, PartialEq)]
pub enum NetworkModel {
    Uniform(SpinNetwork),
    SpinLevel(SpinLevelNetwork),
}

/// Restriction of the full-space algebra to one invariant subspace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceBlock {
    pub selection: SubspaceSelection,
    pub subspace_dim: usize,
    /// Dimension of the traceless parts of the restricted elements.
    pub restricted_dim: usize,
    /// Some restricted element has a trace on this subspace.
    pub identity_direction: bool,
    /// Prediction when the ratios allow one.
    pub predicted_dim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullSpaceReport {
    pub full_dim: usize,
    pub dim: usize,
    pub traceless_dim: usize,
    pub identity_direction: bool,
    /// Present when the model has a uniform cluster description.
    pub blocks: Vec<SubspaceBlock>,
    /// Every closure element preserves every invariant subspace.
    pub block_diagonal: bool,
    /// `Σ` of predicted subspace dimensions; an upper bound on `dim`.
    pub predicted_sum: Option<usize>,
}

impl FullSpaceReport {
    /// Restrictions agree with their predictions and `dim` does not exceed
    /// their sum.
    pub fn consistent(&self) -> bool {
        self.block_diagonal
            && self.blocks.iter().all(|b| b.predicted_dim.is_none_or(|p| p == b.restricted_dim))
            && self.predicted_sum.is_none_or(|s| self.traceless_dim <= s)
    }
}

/// Closure of the unreduced generators `{iA, iB_x, iB_y, iB_z}` on the full
/// space, followed by its block decomposition over the invariant subspaces
/// when the model is (equivalent to) a uniform multipartite network.
pub fn verify_full_space(model: &NetworkModel, opts: VerifyOptions) -> Result<FullSpaceReport> {
    let (generators, uniform) = match model {
        NetworkModel::Uniform(net) => (full_generators_checked(net, opts.full_dim_cap)?, Some(net.clone())),
        NetworkModel::SpinLevel(net) => {
            if net.full_dim() > opts.full_dim_cap {
                return Err(Error::CapExceeded { dim: net.full_dim(), cap: opts.full_dim_cap });
            }
            (spin_level_full_generators(net), net.as_uniform())
        }
    };
    let closure = lie_closure(&generators, ClosureOptions::with_tol(opts.tol))?;
    let mut blocks = Vec::new();
    let mut block_diagonal = true;
    let mut predicted_sum = None;
    if let Some(net) = uniform {
        let predictable = net.require_distinct_gammas().is_ok();
        let elements = closure.basis();
        let mut sum = 0;
        for selection in enumerate_subspaces(&net, true) {
            let basis = subspace_basis(&selection, &net, opts.full_dim_cap)?;
            let mut restricted = Vec::with_capacity(elements.len());
            for x in &elements {
                match restrict(x, &basis) {
                    Ok(r) => restricted.push(r),
                    Err(Error::Leakage { .. }) => block_diagonal = false,
                    Err(e) => return Err(e),
                }
            }
            let traceless: Vec<Operator> = restricted.iter().map(traceless_part).collect();
            let restricted_dim = span_dim(&traceless, opts.tol);
            let identity_direction = span_dim(&restricted, opts.tol) > restricted_dim;
            let predicted_dim =
                if predictable { Some(predict_descriptor(&selection, &net)?.total_algebra_dim) } else { None };
            sum += predicted_dim.unwrap_or(0);
            blocks.push(SubspaceBlock {
                selection: selection.clone(),
                subspace_dim: basis.dim(),
                restricted_dim,
                identity_direction,
                predicted_dim,
            });
        }
        if predictable {
            predicted_sum = Some(sum);
        }
    }
    Ok(FullSpaceReport {
        full_dim: closure.space_dim,
        dim: closure.dim,
        traceless_dim: closure.traceless_dim(),
        identity_direction: closure.trace_direction,
        blocks,
        block_diagonal,
        predicted_sum,
    })
}

fn full_generators_checked(net: &SpinNetwork, cap: usize) -> Result<Vec<Operator>> {
    if net.full_dim() > cap {
        return Err(Error::CapExceeded { dim: net.full_dim(), cap });
    }
    Ok(full_generators(net))
}

/// Skew-Hermitian basis of su(d): `i(E_jk + E_kj)`, `E_jk − E_kj` for
/// `j < k`, and `i(E_jj − E_{j+1,j+1})`.
pub fn su_basis(d: usize) -> Vec<Operator> {
    let mut out = Vec::with_capacity(d * d - 1);
    for j in 0..d {
        for k in (j + 1)..d {
            let mut sym = Operator::zeros(d, d);
            sym[(j, k)] = I;
            sym[(k, j)] = I;
            out.push(sym);
            let mut anti = Operator::zeros(d, d);
            anti[(j, k)] = Complex64::new(1.0, 0.0);
            anti[(k, j)] = Complex64::new(-1.0, 0.0);
            out.push(anti);
        }
    }
    for j in 0..d.saturating_sub(1) {
        let mut diag = Operator::zeros(d, d);
        diag[(j, j)] = I;
        diag[(j + 1, j + 1)] = -I;
        out.push(diag);
    }
    out
}

fn random_traceless_hermitian(d: usize, rng: &mut ChaCha8Rng) -> Operator {
    let a = Operator::from_fn(d, d, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let h = (&a + a.adjoint()) * Complex64::new(0.5, 0.0);
    traceless_part(&h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynkinOutcome {
    pub r: usize,
    pub s: usize,
    /// Closure of `su(r)⊗1 + 1⊗su(s)` alone.
    pub without_product: usize,
    /// Closure after adding one random `i A⊗B`.
    pub with_product: usize,
}

impl DynkinOutcome {
    pub fn passed(&self) -> bool {
        let rs = self.r * self.s;
        self.with_product == rs * rs - 1 && self.without_product == (self.r * self.r - 1) + (self.s * self.s - 1)
    }
}

/// Adds a random traceless `i A⊗B` to `su(r)⊗1 + 1⊗su(s)` and measures both
/// closures; the product term should generate all of `su(rs)`.
pub fn dynkin_check(r: usize, s: usize, seed: u64, opts: ClosureOptions) -> Result<DynkinOutcome> {
    if r < 2 || s < 2 {
        return Err(Error::Spec(format!("dynkin check needs r, s ≥ 2, got ({r}, {s})")));
    }
    let mut generators: Vec<Operator> = su_basis(r).iter().map(|x| kron(x, &identity(s))).collect();
    generators.extend(su_basis(s).iter().map(|y| kron(&identity(r), y)));
    let without_product = lie_closure(&generators, opts)?.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_traceless_hermitian(r, &mut rng);
    let b = random_traceless_hermitian(s, &mut rng);
    generators.push(kron(&a, &b) * I);
    let with_product = lie_closure(&generators, opts)?.dim;
    Ok(DynkinOutcome { r, s, without_product, with_product })
}
