//! Floquet (extended-space) picture of the single-particle pump.
//!
//! With `H(t) = Σ_n H⁽ⁿ⁾ e^{inωt}` and `ψ(t) = e^{−iεt} Σ_m e^{imωt} φ_m`, the
//! quasienergies are eigenvalues of
//! `(H_F)_{m,m'} = mω δ_{mm'} + H⁽ᵐ⁻ᵐ'⁾`, a tilted two-dimensional lattice
//! in `(m, j)`. Only the harmonics `n = 0, ±1` are present.
//!
//! The cutoff needed grows with `Δ₀/ω`: the ladder couples blocks with
//! amplitude `Δ₀/2` against a tilt `ω`, so converged quasienergies need
//! `M` somewhat above `Δ₀/ω`. For many particles the same construction has a
//! single collective index `m` (all particles change `m` together); only
//! the single-particle sector is built here.

use nalgebra::DMatrix;
use nalgebra_sparse::{CooMatrix, CsrMatrix};
use rayon::prelude::*;

use crate::bands::{bloch_hamiltonian_single, BlochGrid};
use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{bond_hoppings, DriveKind, DriveProtocol, HamiltonianMatrix, LatticeSpec};
use crate::scalar::{cis, cr, Real, C};

#[derive(Debug, Clone)]
pub struct FloquetSpec<T> {
    /// Floquet indices run over `−m_range..=m_range`.
    pub m_range: usize,
    pub drive: DriveProtocol<T>,
    pub spec: LatticeSpec<T>,
}

/// Static and first-harmonic Fourier components of `(Δ_j(t), δ(t))`.
struct Harmonics<T> {
    capdelta_static: Vec<T>,
    smalldelta_static: T,
    capdelta_plus: C<T>,
    smalldelta_plus: C<T>,
}

fn harmonics<T: Real>(drive: &DriveProtocol<T>, n_sites: usize) -> Harmonics<T> {
    let half = T::of(0.5);
    let zero = cr(T::zero());
    let xi = drive.schedule(n_sites).xi().to_vec();
    let disorder = |base: T| -> Vec<T> {
        xi.iter().map(|&x| base + drive.capdelta0 * drive.disorder_w * x).collect()
    };
    match drive.kind {
        DriveKind::BulkPump => {
            let e = cis(drive.phase0);
            Harmonics {
                capdelta_static: disorder(drive.capdelta0 * drive.offset_r),
                smalldelta_static: T::zero(),
                capdelta_plus: e * (drive.capdelta0 * half),
                // sin x = (e^{ix} − e^{−ix}) / 2i
                smalldelta_plus: e * C::new(T::zero(), -drive.delta0 * half),
            }
        }
        DriveKind::EdgePump => Harmonics {
            capdelta_static: vec![T::zero(); n_sites],
            smalldelta_static: T::zero(),
            capdelta_plus: C::new(T::zero(), -drive.capdelta0 * half),
            smalldelta_plus: cr(-drive.delta0 * half),
        },
        DriveKind::Static => {
            let (cd, sd) = drive.uniform_at(T::zero());
            Harmonics {
                capdelta_static: disorder(cd),
                smalldelta_static: sd,
                capdelta_plus: zero,
                smalldelta_plus: zero,
            }
        }
    }
}

/// Extended-space Hamiltonian of dimension `N(2M+1)`; index `(m + M)·N + j`.
pub fn build_floquet_hamiltonian<T: Real>(fspec: &FloquetSpec<T>) -> Result<HamiltonianMatrix<T>> {
    if fspec.m_range < 1 {
        return Err(Error::InvalidArgument("Floquet cutoff must be at least 1".into()));
    }
    fspec.drive.validate()?;
    let spec = &fspec.spec;
    let n = spec.n_sites();
    let mm = fspec.m_range as isize;
    let blocks = 2 * fspec.m_range + 1;
    let omega = fspec.drive.omega();
    let h = harmonics(&fspec.drive, n);
    let static_hops = bond_hoppings(spec, h.smalldelta_static, fspec.drive.j_hop);
    let bonds = spec.bonds();
    let idx = |m: isize, j: usize| ((m + mm) as usize) * n + j;

    let mut coo = CooMatrix::new(n * blocks, n * blocks);
    for m in -mm..=mm {
        let tilt = omega * T::of(m as f64);
        for j in 0..n {
            coo.push(idx(m, j), idx(m, j), cr(tilt + spec.parity(j) * h.capdelta_static[j]));
        }
        for (&(l, r), &t) in bonds.iter().zip(&static_hops) {
            coo.push(idx(m, l), idx(m, r), cr(t));
            coo.push(idx(m, r), idx(m, l), cr(t));
        }
        if m + 1 <= mm {
            // block (m+1, m) carries H⁽⁺¹⁾, block (m, m+1) its adjoint
            let mut push = |a: usize, b: usize, v: C<T>| {
                if v == cr(T::zero()) {
                    return;
                }
                coo.push(idx(m + 1, a), idx(m, b), v);
                coo.push(idx(m, b), idx(m + 1, a), v.conj());
            };
            for j in 0..n {
                push(j, j, h.capdelta_plus * spec.parity(j));
            }
            for &(l, r) in &bonds {
                let v = h.smalldelta_plus * spec.parity(l);
                push(l, r, v);
                push(r, l, v);
            }
        }
    }
    Ok(HamiltonianMatrix::from_csr(CsrMatrix::from(&coo)))
}

/// Fold into the first Floquet zone `(−ω/2, ω/2]`.
pub fn fold_quasienergy<T: Real>(e: T, omega: T) -> T {
    let half = omega * T::of(0.5);
    e - omega * ((e - half) / omega).ceil()
}

#[derive(Debug, Clone)]
pub struct FloquetSpectrum<T> {
    pub omega: T,
    pub m_range: usize,
    /// Unfolded eigenvalues of the extended-space Hamiltonian, ascending.
    pub raw: Vec<T>,
    /// Folded quasienergy of each eigenvector.
    pub quasienergies: Vec<T>,
    /// `weights[α][m + M] = Σ_j |C^α_{m,j}|²`.
    pub weights: Vec<Vec<T>>,
}

impl<T: Real> FloquetSpectrum<T> {
    /// Weighted mean Floquet index of eigenvector `α`.
    pub fn mean_m(&self, alpha: usize) -> T {
        let mm = self.m_range as f64;
        self.weights[alpha]
            .iter()
            .enumerate()
            .fold(T::zero(), |s, (i, &w)| s + w * T::of(i as f64 - mm))
    }

    /// The `n` folded quasienergies whose eigenvectors are most central in `m`
    /// (one copy of each physical quasienergy once the cutoff is converged), ascending.
    pub fn central_quasienergies(&self, n: usize) -> Vec<T> {
        let mut idx: Vec<usize> = (0..self.raw.len()).collect();
        idx.sort_by(|&a, &b| {
            self.mean_m(a).abs().partial_cmp(&self.mean_m(b).abs()).unwrap_or(std::cmp::Ordering::Equal)
        });
        let mut q: Vec<T> = idx.into_iter().take(n).map(|a| self.quasienergies[a]).collect();
        q.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        q
    }

    /// Weight of eigenvector `α` on blocks with `|m| ≤ m_max`.
    pub fn central_weight(&self, alpha: usize, m_max: usize) -> T {
        let mm = self.m_range;
        self.weights[alpha]
            .iter()
            .enumerate()
            .filter(|(i, _)| (*i as isize - mm as isize).unsigned_abs() <= m_max)
            .fold(T::zero(), |s, (_, &w)| s + w)
    }
}

pub fn floquet_spectrum<T: Real>(fspec: &FloquetSpec<T>) -> Result<FloquetSpectrum<T>> {
    let h = build_floquet_hamiltonian(fspec)?;
    let (raw, vecs) = h.eigh()?;
    let n = fspec.spec.n_sites();
    let blocks = 2 * fspec.m_range + 1;
    let omega = fspec.drive.omega();
    let weights = (0..raw.len())
        .map(|a| {
            (0..blocks)
                .map(|b| (0..n).fold(T::zero(), |s, j| s + vecs[(b * n + j, a)].norm_sqr()))
                .collect()
        })
        .collect();
    let quasienergies = raw.iter().map(|&e| fold_quasienergy(e, omega)).collect();
    Ok(FloquetSpectrum { omega, m_range: fspec.m_range, raw, quasienergies, weights })
}

/// Quasienergies from the one-period propagator `U(T)`: `ε = −arg(λ)/T` for
/// each eigenvalue `λ` of `U`, folded and sorted. Independent of the
/// extended-space construction; `steps` midpoint-exponential steps per period.
pub fn quasienergies_from_propagator<T: Real>(
    spec: &LatticeSpec<T>,
    drive: &DriveProtocol<T>,
    steps: usize,
) -> Result<Vec<T>> {
    drive.validate()?;
    let n = spec.n_sites();
    let sched = drive.schedule(n);
    let period = drive.period;
    let h = period / T::of_usize(steps);
    let mut u = DMatrix::<C<T>>::identity(n, n);
    for s in 0..steps {
        let t = h * (T::of_usize(s) + T::of(0.5));
        let p = sched.at(t);
        let mut m = DMatrix::<C<T>>::zeros(n, n);
        for j in 0..n {
            m[(j, j)] = cr(spec.parity(j) * p.capdelta[j]);
        }
        for (&(l, r), &t) in spec.bonds().iter().zip(&bond_hoppings(spec, p.smalldelta, drive.j_hop)) {
            m[(l, r)] += cr(t);
            m[(r, l)] += cr(t);
        }
        let (w, v) = linalg::eigh(m)?;
        let phases = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            w.iter().map(|&e| cis(-e * h)),
        ));
        u = &v * phases * v.adjoint() * u;
    }
    // U is normal: a generic Hermitian combination of its Hermitian and
    // anti-Hermitian parts shares its eigenvectors.
    let a = (&u + u.adjoint()) * cr(T::of(0.5));
    let b = (&u - u.adjoint()) * C::new(T::zero(), T::of(-0.5));
    let mix = a + b * cr(T::of(std::f64::consts::FRAC_1_SQRT_2 * 0.7310585786));
    let (_, vecs) = linalg::eigh(mix)?;
    let omega = drive.omega();
    let mut q: Vec<T> = (0..n)
        .map(|c| {
            let col = vecs.column(c);
            let lam = (col.adjoint() * &u * col)[(0, 0)];
            fold_quasienergy(-lam.im.atan2(lam.re) / period, omega)
        })
        .collect();
    q.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Ok(q)
}

/// The extended-space Bloch matrix
/// `[[−Δ, 2(J cos k_x + iδ sin k_x)], [c.c., Δ]]` with `k_x = kd/2` and
/// `(Δ, δ)` the drive at `k_y = ωt`.
pub fn extended_bloch_hamiltonian<T: Real>(kx: T, t: T, drive: &DriveProtocol<T>) -> DMatrix<C<T>> {
    let (capdelta, smalldelta) = drive.uniform_at(t);
    let two = T::of(2.0);
    let off = C::new(two * drive.j_hop * kx.cos(), two * smalldelta * kx.sin());
    DMatrix::from_row_slice(2, 2, &[cr(-capdelta), off, off.conj(), cr(capdelta)])
}

#[derive(Debug, Clone, Copy)]
pub struct EquivalenceReport<T> {
    pub max_deviation: T,
    pub worst_k_index: usize,
    pub worst_t_index: usize,
    pub points: usize,
}

/// Largest eigenvalue discrepancy between the extended-space 2×2 matrix and
/// the cell Bloch Hamiltonian over the grid (`d = 1`).
pub fn verify_bloch_equivalence<T: Real>(drive: &DriveProtocol<T>, grid: BlochGrid) -> Result<EquivalenceReport<T>> {
    drive.validate()?;
    let devs: Vec<Result<T>> = (0..grid.len())
        .into_par_iter()
        .map(|p| {
            let (i, j) = (p / grid.n_t, p % grid.n_t);
            let k = grid.k(i, T::one());
            let t = grid.t(j, drive.period);
            let a = linalg::eigvalsh(bloch_hamiltonian_single(k, t, drive))?;
            let b = linalg::eigvalsh(extended_bloch_hamiltonian(k * T::of(0.5), t, drive))?;
            Ok(a.iter().zip(&b).fold(T::zero(), |m, (x, y)| m.max((*x - *y).abs())))
        })
        .collect();
    let mut report = EquivalenceReport { max_deviation: T::zero(), worst_k_index: 0, worst_t_index: 0, points: grid.len() };
    for (p, d) in devs.into_iter().enumerate() {
        let d = d?;
        if d > report.max_deviation {
            report = EquivalenceReport { max_deviation: d, worst_k_index: p / grid.n_t, worst_t_index: p % grid.n_t, ..report };
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mild() -> (LatticeSpec<f64>, DriveProtocol<f64>) {
        let spec = LatticeSpec::new(6, 2, 0.0).unwrap();
        let drive = DriveProtocol::bulk(1.0, 0.8, 2.0, 2.0 * std::f64::consts::PI / 5.0);
        (spec, drive)
    }

    #[test]
    fn folding_is_idempotent_and_half_open() {
        let w = 3.0_f64;
        for e in [-7.3, -1.5, 0.0, 1.5, 4.4, 100.0] {
            let f = fold_quasienergy(e, w);
            assert!(f > -1.5 && f <= 1.5, "{e} -> {f}");
            assert_eq!(fold_quasienergy(f, w), f);
            let n = ((e - f) / w).round();
            assert!((e - f - n * w).abs() < 1e-12);
        }
        assert_eq!(fold_quasienergy(-1.5, w), 1.5);
    }

    #[test]
    fn undriven_blocks_decouple() {
        let (spec, mut drive) = mild();
        drive.capdelta0 = 0.0;
        drive.delta0 = 0.0;
        let fs = FloquetSpec { m_range: 2, drive: drive.clone(), spec: spec.clone() };
        let h = build_floquet_hamiltonian(&fs).unwrap();
        assert_eq!(h.dim(), 6 * 5);
        let n = 6;
        for (r, c, _) in h.csr().triplet_iter() {
            assert_eq!(r / n, c / n);
        }
        let stat = build_single_particle_hamiltonian_eigs(&spec, &drive);
        let w = drive.omega();
        let mut expect: Vec<f64> = (-2..=2).flat_map(|m| stat.iter().map(move |e| e + m as f64 * w)).collect();
        expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let got = floquet_spectrum(&fs).unwrap().raw;
        for (a, b) in got.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    fn build_single_particle_hamiltonian_eigs(spec: &LatticeSpec<f64>, drive: &DriveProtocol<f64>) -> Vec<f64> {
        let (cd, sd) = drive.uniform_at(0.0);
        crate::model::build_single_particle_hamiltonian(spec, cd, sd, drive.j_hop)
            .eigenvalues()
            .unwrap()
    }

    #[test]
    fn off_diagonal_blocks_are_adjoint() {
        let (spec, drive) = mild();
        let h = build_floquet_hamiltonian(&FloquetSpec { m_range: 3, drive, spec }).unwrap();
        assert!(h.hermiticity_error() < 1e-15);
        let dense = h.to_dense();
        let n = 6;
        let up = dense.view((n, 0), (n, n)).into_owned();
        let down = dense.view((0, n), (n, n)).into_owned();
        assert!((up - down.adjoint()).norm() < 1e-15);
    }

    #[test]
    fn converged_ladder_matches_propagator() {
        let (spec, drive) = mild();
        let oracle = quasienergies_from_propagator(&spec, &drive, 4000).unwrap();
        let fs = floquet_spectrum(&FloquetSpec { m_range: 12, drive, spec }).unwrap();
        let q = fs.central_quasienergies(6);
        for (a, b) in q.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-5, "{a} vs {b}");
        }
    }

    #[test]
    fn extended_form_matches_cell_bloch_hamiltonian() {
        let drive = DriveProtocol::bulk(1.0, 0.7, 3.0, 1.3);
        let r = verify_bloch_equivalence(&drive, BlochGrid::square(16).unwrap()).unwrap();
        assert!(r.max_deviation < 1e-12);
        assert_eq!(r.points, 256);
    }
}
