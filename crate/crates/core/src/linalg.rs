//! Small numerical kernels: sorted Hermitian eigendecomposition and sparse
//! products used by the propagators.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use nalgebra_sparse::CsrMatrix;

use crate::error::{Error, Result};
use crate::scalar::{cabs, Real, C};

/// Eigenvalues in ascending order with matching eigenvector columns.
pub fn eigh<T: Real>(m: DMatrix<C<T>>) -> Result<(Vec<T>, DMatrix<C<T>>)> {
    let n = m.nrows();
    let eig = SymmetricEigen::try_new(m, T::eps(), 100_000).ok_or(Error::Eigensolver(n))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

pub fn eigvalsh<T: Real>(m: DMatrix<C<T>>) -> Result<Vec<T>> {
    let n = m.nrows();
    let vals = SymmetricEigen::try_new(m, T::eps(), 100_000)
        .ok_or(Error::Eigensolver(n))?
        .eigenvalues;
    let mut v: Vec<T> = vals.iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Ok(v)
}

/// Max absolute row sum; an upper bound on the spectral radius.
pub fn csr_norm_inf<T: Real>(a: &CsrMatrix<C<T>>) -> T {
    let mut best = T::zero();
    for row in a.row_iter() {
        let s = row.values().iter().fold(T::zero(), |acc, &z| acc + cabs(z));
        if s > best {
            best = s;
        }
    }
    best
}

/// `out = A x`.
pub fn csr_mul_vec<T: Real>(a: &CsrMatrix<C<T>>, x: &DVector<C<T>>, out: &mut DVector<C<T>>) {
    let offs = a.row_offsets();
    let cols = a.col_indices();
    let vals = a.values();
    for r in 0..a.nrows() {
        let mut acc = C::new(T::zero(), T::zero());
        for p in offs[r]..offs[r + 1] {
            acc += vals[p] * x[cols[p]];
        }
        out[r] = acc;
    }
}

/// `A M` for sparse `A`, dense `M`.
pub fn csr_mul_dense<T: Real>(a: &CsrMatrix<C<T>>, m: &DMatrix<C<T>>) -> DMatrix<C<T>> {
    let offs = a.row_offsets();
    let cols = a.col_indices();
    let vals = a.values();
    let mut out = DMatrix::zeros(a.nrows(), m.ncols());
    // Column-major storage: walk columns of M outermost.
    for c in 0..m.ncols() {
        let src = m.column(c);
        let mut dst = out.column_mut(c);
        for r in 0..a.nrows() {
            let mut acc = C::new(T::zero(), T::zero());
            for p in offs[r]..offs[r + 1] {
                acc += vals[p] * src[cols[p]];
            }
            dst[r] = acc;
        }
    }
    out
}

/// `M A` for dense `M`, sparse `A`.
pub fn dense_mul_csr<T: Real>(m: &DMatrix<C<T>>, a: &CsrMatrix<C<T>>) -> DMatrix<C<T>> {
    let offs = a.row_offsets();
    let cols = a.col_indices();
    let vals = a.values();
    let mut out = DMatrix::zeros(m.nrows(), a.ncols());
    for r in 0..a.nrows() {
        let src = m.column(r);
        for p in offs[r]..offs[r + 1] {
            let v = vals[p];
            let mut dst = out.column_mut(cols[p]);
            for i in 0..m.nrows() {
                dst[i] += src[i] * v;
            }
        }
    }
    out
}

pub fn csr_to_dense<T: Real>(a: &CsrMatrix<C<T>>) -> DMatrix<C<T>> {
    let mut out = DMatrix::zeros(a.nrows(), a.ncols());
    for (r, c, v) in a.triplet_iter() {
        out[(r, c)] += *v;
    }
    out
}

fn max_abs_vec<T: Real>(x: &DVector<C<T>>) -> T {
    x.iter().fold(T::zero(), |m, &z| {
        let a = cabs(z);
        if a > m {
            a
        } else {
            m
        }
    })
}

/// Applies `exp(-i h A)` to `x` in place by a truncated Taylor series.
///
/// Intended for `h ‖A‖ ≲ 0.5`; terms are summed until they fall below machine
/// precision relative to `x`. Returns the number of terms used.
pub fn expm_action<T: Real>(
    a: &CsrMatrix<C<T>>,
    h: T,
    x: &mut DVector<C<T>>,
    scratch: &mut (DVector<C<T>>, DVector<C<T>>),
) -> usize {
    let (term, next) = scratch;
    term.copy_from(x);
    let scale = max_abs_vec(x);
    let tol = T::eps() * scale;
    let mih = C::new(T::zero(), -h);
    for k in 1..=64 {
        csr_mul_vec(a, term, next);
        let f = mih / C::new(T::of_usize(k), T::zero());
        for (t, n) in term.iter_mut().zip(next.iter()) {
            *t = *n * f;
        }
        *x += &*term;
        if max_abs_vec(term) <= tol {
            return k;
        }
    }
    64
}

/// Applies `exp(-i h [A, ·])` to `rho` in place, i.e. `e^{-ihA} ρ e^{ihA}`.
pub fn expm_commutator_action<T: Real>(a: &CsrMatrix<C<T>>, h: T, rho: &mut DMatrix<C<T>>) -> usize {
    let scale = rho.iter().fold(T::zero(), |m, &z| m.max(cabs(z)));
    let tol = T::eps() * scale;
    let mut term = rho.clone();
    let mih = C::new(T::zero(), -h);
    for k in 1..=64 {
        let comm = csr_mul_dense(a, &term) - dense_mul_csr(&term, a);
        let f = mih / C::new(T::of_usize(k), T::zero());
        term = comm * f;
        *rho += &term;
        if term.iter().fold(T::zero(), |m, &z| m.max(cabs(z))) <= tol {
            return k;
        }
    }
    64
}
