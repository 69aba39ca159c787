//! Occupation-diagonal observables: site populations, center of mass and
//! density-density correlations. All of them only need the probability of
//! each Fock state.

use nalgebra::DMatrix;

use crate::dynamics::{DensityMatrix, QuantumState};
use crate::model::FockBasis;
use crate::scalar::{Real, C};

pub trait Measurable<T: Real> {
    fn fock_basis(&self) -> &FockBasis;
    /// Probability of every basis state.
    fn probabilities(&self) -> Vec<T>;
}

impl<T: Real> Measurable<T> for QuantumState<T> {
    fn fock_basis(&self) -> &FockBasis {
        self.basis()
    }

    fn probabilities(&self) -> Vec<T> {
        self.amplitudes().iter().map(|z: &C<T>| z.norm_sqr()).collect()
    }
}

impl<T: Real> Measurable<T> for DensityMatrix<T> {
    fn fock_basis(&self) -> &FockBasis {
        self.basis()
    }

    fn probabilities(&self) -> Vec<T> {
        self.matrix().diagonal().iter().map(|z| z.re).collect()
    }
}

/// `P(n_j = 0, 1, 2)` for every site.
pub fn populations_from<T: Real>(basis: &FockBasis, probs: &[T]) -> Vec<[T; 3]> {
    let mut out = vec![[T::zero(); 3]; basis.n_sites()];
    for (s, &p) in basis.states().iter().zip(probs) {
        for (site, &n) in out.iter_mut().zip(s) {
            site[n as usize] += p;
        }
    }
    out
}

pub fn measure_populations<T: Real, S: Measurable<T>>(state: &S) -> Vec<[T; 3]> {
    populations_from(state.fock_basis(), &state.probabilities())
}

/// `x = (d/2) Σ j⟨n_j⟩ / Σ⟨n_j⟩` with `j` the 1-based site index; 0 for the vacuum.
pub fn com_from<T: Real>(basis: &FockBasis, probs: &[T], d: T) -> T {
    let (mut num, mut den) = (T::zero(), T::zero());
    for (s, &p) in basis.states().iter().zip(probs) {
        for (j, &n) in s.iter().enumerate() {
            let n = T::of(n as f64);
            num += p * n * T::of_usize(j + 1);
            den += p * n;
        }
    }
    if den == T::zero() {
        T::zero()
    } else {
        d * T::of(0.5) * num / den
    }
}

pub fn measure_com<T: Real, S: Measurable<T>>(state: &S, d: T) -> T {
    com_from(state.fock_basis(), &state.probabilities(), d)
}

/// `Γ_ij = ⟨a†_i a†_j a_i a_j⟩`: `⟨n_i n_j⟩` off the diagonal, `⟨n_i(n_i − 1)⟩` on it.
pub fn correlations_from<T: Real>(basis: &FockBasis, probs: &[T]) -> DMatrix<T> {
    let n = basis.n_sites();
    let mut g = DMatrix::zeros(n, n);
    for (s, &p) in basis.states().iter().zip(probs) {
        if p == T::zero() {
            continue;
        }
        let occupied: Vec<(usize, T)> = s
            .iter()
            .enumerate()
            .filter(|(_, &x)| x > 0)
            .map(|(j, &x)| (j, T::of(x as f64)))
            .collect();
        for &(i, ni) in &occupied {
            for &(j, nj) in &occupied {
                let v = if i == j { ni * (ni - T::one()) } else { ni * nj };
                g[(i, j)] += p * v;
            }
        }
    }
    g
}

pub fn measure_correlations<T: Real, S: Measurable<T>>(state: &S) -> DMatrix<T> {
    correlations_from(state.fock_basis(), &state.probabilities())
}

/// `Γ / max Γ` for one time slice (unchanged if all entries vanish).
pub fn normalize_correlations<T: Real>(g: &DMatrix<T>) -> DMatrix<T> {
    let m = g.iter().fold(T::zero(), |a, &b| a.max(b));
    if m > T::zero() {
        g / m
    } else {
        g.clone()
    }
}

/// Fraction of `Σ Γ` carried by off-diagonal entries.
pub fn off_diagonal_fraction<T: Real>(g: &DMatrix<T>) -> T {
    let total = g.iter().fold(T::zero(), |a, &b| a + b);
    if total == T::zero() {
        return T::zero();
    }
    let diag = g.diagonal().iter().fold(T::zero(), |a, &b| a + b);
    (total - diag) / total
}

/// Total probability on `|1_j 1_{j+1}⟩` pair states of an open chain.
pub fn pair_population_from<T: Real>(basis: &FockBasis, probs: &[T]) -> T {
    let n = basis.n_sites();
    probs
        .iter()
        .zip(basis.states())
        .filter(|(_, s)| {
            s.iter().map(|&x| x as usize).sum::<usize>() == 2 && (0..n - 1).any(|j| s[j] == 1 && s[j + 1] == 1)
        })
        .fold(T::zero(), |a, (&p, _)| a + p)
}

pub fn neighbour_pair_population<T: Real, S: Measurable<T>>(state: &S) -> T {
    pair_population_from(state.fock_basis(), &state.probabilities())
}

/// `|⟨ψ(t)|ψ(0)⟩|²`.
pub fn loschmidt_echo<T: Real>(psi_t: &QuantumState<T>, psi_0: &QuantumState<T>) -> T {
    psi_t.fidelity(psi_0)
}
