//! Dense complex matrix helpers shared by the operator builders and the oracle.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Dense square complex matrix acting on a spin Hilbert space.
pub type Operator = DMatrix<Complex64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(dim: usize) -> Operator {
    Operator::identity(dim, dim)
}

pub fn zeros(dim: usize) -> Operator {
    Operator::zeros(dim, dim)
}

/// Kronecker product with `a` as the more significant (leftmost) factor.
pub fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

/// Kronecker product of a sequence of factors, leftmost first.
pub fn kron_all<'a, It>(factors: It) -> DMatrix<Complex64>
where
    It: IntoIterator<Item = &'a DMatrix<Complex64>>,
{
    factors.into_iter().fold(DMatrix::from_element(1, 1, c(1.0)), |acc, f| acc.kronecker(f))
}

pub fn commutator(a: &Operator, b: &Operator) -> Operator {
    a * b - b * a
}

pub fn anticommutator(a: &Operator, b: &Operator) -> Operator {
    a * b + b * a
}

pub fn frobenius(a: &DMatrix<Complex64>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn trace(a: &Operator) -> Complex64 {
    a.diagonal().iter().sum()
}

/// `‖A − A†‖ / ‖A‖`, zero for the zero matrix.
pub fn hermiticity_defect(a: &Operator) -> f64 {
    relative(frobenius(&(a - a.adjoint())), frobenius(a))
}

/// `‖A + A†‖ / ‖A‖`, zero for the zero matrix.
pub fn skewness_defect(a: &Operator) -> f64 {
    relative(frobenius(&(a + a.adjoint())), frobenius(a))
}

fn relative(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

/// Number of real coordinates of a `dim × dim` skew-Hermitian matrix.
pub fn real_dim(dim: usize) -> usize {
    dim * dim
}

/// Real coordinates of a skew-Hermitian `X = iH` that are isometric for the
/// inner product `Re tr(X†Y)`: the diagonal of `H`, then `√2·Re H_jk` and
/// `√2·Im H_jk` for `j < k` in row-major order.
pub fn skew_to_coords(x: &Operator, out: &mut [f64]) {
    let d = x.nrows();
    debug_assert_eq!(out.len(), d * d);
    let s = std::f64::consts::SQRT_2;
    for j in 0..d {
        out[j] = x[(j, j)].im;
    }
    let mut p = d;
    for j in 0..d {
        for k in (j + 1)..d {
            // H = -iX, averaged with the mirror entry to absorb rounding.
            let upper = x[(j, k)];
            let lower = x[(k, j)].conj();
            let xjk = (upper - lower) * 0.5;
            out[p] = s * xjk.im;
            out[p + 1] = -s * xjk.re;
            p += 2;
        }
    }
}

/// Inverse of [`skew_to_coords`].
pub fn coords_to_skew(coords: &[f64], d: usize) -> Operator {
    debug_assert_eq!(coords.len(), d * d);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut x = Operator::zeros(d, d);
    for j in 0..d {
        x[(j, j)] = Complex64::new(0.0, coords[j]);
    }
    let mut p = d;
    for j in 0..d {
        for k in (j + 1)..d {
            let hjk = Complex64::new(coords[p] * h, coords[p + 1] * h);
            let xjk = I * hjk;
            x[(j, k)] = xjk;
            x[(k, j)] = -xjk.conj();
            p += 2;
        }
    }
    x
}

/// Orthonormal basis of the null space of `m` (columns of the result).
///
/// Singular values below `rel_tol · σ_max` count as zero; a zero matrix has
/// the whole domain as kernel. The returned basis is canonicalised by
/// pivoted Gram-Schmidt on the kernel projector, so it does not depend on the
/// rotation freedom of the SVD inside degenerate singular subspaces.
pub fn null_space(m: &DMatrix<Complex64>, rel_tol: f64) -> DMatrix<Complex64> {
    let cols = m.ncols();
    if cols == 0 {
        return DMatrix::zeros(0, 0);
    }
    let max_abs = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max_abs == 0.0 {
        return DMatrix::identity(cols, cols);
    }
    // Pad to at least square so the thin SVD returns a full V^T.
    let padded = if m.nrows() < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let cut = rel_tol * svd.singular_values.max();
    let kernel: Vec<DVector<Complex64>> =
        svd.singular_values.iter().enumerate().filter(|(_, &s)| s <= cut).map(|(i, _)| v_t.row(i).adjoint()).collect();
    if kernel.is_empty() {
        return DMatrix::zeros(cols, 0);
    }
    let k = DMatrix::from_columns(&kernel);
    let projector = &k * k.adjoint();
    pivoted_orthonormal_columns(&projector, kernel.len())
}

/// Picks `count` orthonormal vectors spanning the column space of `m` by
/// Gram-Schmidt with greedy pivoting on residual norm (ties go to the lowest
/// column index).
pub fn pivoted_orthonormal_columns(m: &DMatrix<Complex64>, count: usize) -> DMatrix<Complex64> {
    let mut residual: Vec<DVector<Complex64>> = (0..m.ncols()).map(|j| m.column(j).into_owned()).collect();
    let mut used = vec![false; m.ncols()];
    let mut picked: Vec<DVector<Complex64>> = Vec::with_capacity(count);
    for _ in 0..count {
        let norms: Vec<f64> = residual.iter().map(|v| v.norm()).collect();
        let best = norms.iter().enumerate().filter(|(j, _)| !used[*j]).map(|(_, &n)| n).fold(0.0, f64::max);
        let Some(pivot) = (0..norms.len()).find(|&j| !used[j] && norms[j] >= best - 1e-12) else {
            break;
        };
        if best <= 0.0 {
            break;
        }
        used[pivot] = true;
        let mut q = residual[pivot].clone();
        for p in &picked {
            let coef = p.dotc(&q);
            q -= p * coef;
        }
        let norm = q.norm();
        q /= c(norm);
        for (j, r) in residual.iter_mut().enumerate() {
            if !used[j] {
                let coef = q.dotc(r);
                *r -= &q * coef;
            }
        }
        picked.push(q);
    }
    if picked.is_empty() {
        return DMatrix::zeros(m.nrows(), 0);
    }
    DMatrix::from_columns(&picked)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_skew(d: usize, seed: u64) -> Operator {
        let mut state = seed;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let a = Operator::from_fn(d, d, |_, _| Complex64::new(next(), next()));
        &a - a.adjoint()
    }

    #[test]
    fn coords_are_isometric() {
        let x = sample_skew(5, 3);
        let y = sample_skew(5, 7);
        let mut cx = vec![0.0; 25];
        let mut cy = vec![0.0; 25];
        skew_to_coords(&x, &mut cx);
        skew_to_coords(&y, &mut cy);
        let dot: f64 = cx.iter().zip(&cy).map(|(a, b)| a * b).sum();
        let hs = (x.adjoint() * &y).trace().re;
        assert!((dot - hs).abs() < 1e-12);
        let back = coords_to_skew(&cx, 5);
        assert!(frobenius(&(back - x)) < 1e-13);
    }

    #[test]
    fn null_space_of_rank_one() {
        let m = DMatrix::from_row_slice(1, 3, &[c(1.0), c(1.0), c(0.0)]);
        let k = null_space(&m, 1e-9);
        assert_eq!(k.ncols(), 2);
        assert!(frobenius(&(&m * &k)) < 1e-12);
        let g = k.adjoint() * &k;
        assert!(frobenius(&(g - DMatrix::identity(2, 2))) < 1e-12);
    }

    #[test]
    fn null_space_of_zero_is_everything() {
        let m = DMatrix::<Complex64>::zeros(4, 2);
        assert_eq!(null_space(&m, 1e-9).ncols(), 2);
    }

    #[test]
    fn kron_ordering_is_leftmost_significant() {
        let a = DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.0)]);
        let b = DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]);
        let k = kron(&a, &b);
        assert_eq!(k[(0, 1)], c(1.0));
        assert_eq!(frobenius(&k), 1.0);
    }
}
