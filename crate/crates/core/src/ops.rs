//! Charge-basis operators, tensor products and the dense Hermitian eigensolver.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Truncated charge basis with states `N = -n_max ..= n_max` in ascending order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChargeBasis {
    n_max: usize,
}

impl ChargeBasis {
    pub fn new(n_max: usize) -> Self {
        ChargeBasis { n_max }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        2 * self.n_max + 1
    }

    /// Position of charge `n` in the basis, if it lies inside the cutoff.
    pub fn index(&self, n: i64) -> Option<usize> {
        let shifted = n + self.n_max as i64;
        (0..self.dim() as i64)
            .contains(&shifted)
            .then_some(shifted as usize)
    }

    pub fn charge(&self, index: usize) -> i64 {
        index as i64 - self.n_max as i64
    }

    pub fn charges(&self) -> impl Iterator<Item = i64> {
        let n = self.n_max as i64;
        -n..=n
    }
}

/// Matrix of `|N + m><N|` summed over all `N` whose image stays inside the basis.
pub fn charge_shift(basis: &ChargeBasis, m: i64) -> Result<CMatrix> {
    if m.unsigned_abs() as usize > 2 * basis.n_max() {
        return Err(Error::domain(format!(
            "shift exceeds basis: |{m}| > 2·{}",
            basis.n_max()
        )));
    }
    let dim = basis.dim();
    let mut out = CMatrix::zeros(dim, dim);
    for n in basis.charges() {
        if let Some(row) = basis.index(n + m) {
            out[(row, basis.index(n).unwrap())] = Complex64::new(1.0, 0.0);
        }
    }
    Ok(out)
}

/// Diagonal charge operator `diag(-n_max, ..., n_max)`.
pub fn number_operator(basis: &ChargeBasis) -> CMatrix {
    let diag: Vec<Complex64> = basis
        .charges()
        .map(|n| Complex64::new(n as f64, 0.0))
        .collect();
    CMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag))
}

/// Half-phase operator `e^{iφ/2}` restricted to the branch `φ ∈ [-π, π)` and
/// expressed on the integer lattice of `basis`.
///
/// Entry `(k', k)` is the Fourier coefficient `(-1)^d / ((1/2 - d)π)` with
/// `d = k' - k`. The matrix is not unitary at finite cutoff, but
/// `W + W†` is the exact window representation of `2 cos(φ/2)`.
pub fn half_phase_window(basis: &ChargeBasis) -> CMatrix {
    let dim = basis.dim();
    CMatrix::from_fn(dim, dim, |r, c| {
        let d = r as i64 - c as i64;
        let sign = if d.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        Complex64::new(sign / ((0.5 - d as f64) * PI), 0.0)
    })
}

/// Tensor product with the row index of `a` as the major index.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `‖H − H†‖_max / max(1, ‖H‖_max)`.
pub fn hermiticity_defect(h: &CMatrix) -> f64 {
    max_abs(&(h - h.adjoint())) / max_abs(h).max(1.0)
}

/// Tolerance used to accept a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Largest eigen-residual `‖Hv − λv‖` accepted, relative to the spectral radius.
pub const EIG_RESIDUAL_TOL: f64 = 1e-10;

/// Ascending eigenvalues with phase-fixed orthonormal eigenvectors as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigenSystem {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigenSystem {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `V Λ V†`.
    pub fn reconstruct(&self) -> CMatrix {
        let lam = nalgebra::DVector::from_iterator(
            self.values.len(),
            self.values.iter().map(|&v| Complex64::new(v, 0.0)),
        );
        &self.vectors * CMatrix::from_diagonal(&lam) * self.vectors.adjoint()
    }
}

/// Largest column norm of `A V − V diag(λ)`.
fn max_residual<T: nalgebra::ComplexField<RealField = f64>>(
    a: &nalgebra::DMatrix<T>,
    values: &nalgebra::DVector<f64>,
    vectors: &nalgebra::DMatrix<T>,
) -> f64 {
    let av = a * vectors;
    (0..values.len())
        .map(|k| (av.column(k) - vectors.column(k) * T::from_real(values[k])).norm())
        .fold(0.0, f64::max)
}

/// Unsorted eigenpairs and the worst residual; real input takes the faster real solver.
fn raw_eigen(sym: &CMatrix) -> Option<(nalgebra::DVector<f64>, CMatrix, f64)> {
    let max_iter = 1000 * sym.nrows().max(10);
    if sym.iter().all(|z| z.im == 0.0) {
        let re = sym.map(|z| z.re);
        let eig = re.clone().try_symmetric_eigen(f64::EPSILON, max_iter)?;
        let resid = max_residual(&re, &eig.eigenvalues, &eig.eigenvectors);
        let vectors = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
        Some((eig.eigenvalues, vectors, resid))
    } else {
        let eig = sym.clone().try_symmetric_eigen(f64::EPSILON, max_iter)?;
        let resid = max_residual(sym, &eig.eigenvalues, &eig.eigenvectors);
        Some((eig.eigenvalues, eig.eigenvectors, resid))
    }
}

/// Diagonalize a Hermitian matrix.
///
/// Eigenvalues are returned ascending. Each eigenvector is rotated so that its
/// largest-magnitude component (first one on ties) is real and positive.
pub fn hermitian_eig(h: &CMatrix) -> Result<HermitianEigenSystem> {
    if !h.is_square() {
        return Err(Error::domain(format!(
            "eigensolver needs a square matrix, got {}x{}",
            h.nrows(),
            h.ncols()
        )));
    }
    let defect = hermiticity_defect(h);
    if defect > HERMITIAN_TOL {
        return Err(Error::domain(format!(
            "matrix is not Hermitian (relative defect {defect:e})"
        )));
    }
    let dim = h.nrows();
    if dim == 0 {
        return Ok(HermitianEigenSystem {
            values: Vec::new(),
            vectors: CMatrix::zeros(0, 0),
        });
    }
    let sym = (h + h.adjoint()).scale(0.5);
    let (eigenvalues, eigenvectors, worst) = raw_eigen(&sym).ok_or(Error::EigenConvergence {
        residual: f64::INFINITY,
    })?;

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eigenvalues[a].total_cmp(&eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(dim, dim);
    for (col, &src) in order.iter().enumerate() {
        let v = eigenvectors.column(src);
        let mut pivot = 0;
        let mut best = -1.0;
        for (i, z) in v.iter().enumerate() {
            if z.norm() > best * (1.0 + 1e-12) {
                best = z.norm();
                pivot = i;
            }
        }
        let phase = v[pivot].conj() / v[pivot].norm();
        vectors.set_column(col, &(v * phase));
    }

    let scale = values
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    if worst > EIG_RESIDUAL_TOL * scale {
        return Err(Error::EigenConvergence { residual: worst });
    }
    Ok(HermitianEigenSystem { values, vectors })
}

/// Pauli matrices and ladder operators on a two-level factor, basis order `(|0>, |1>)`.
pub mod pauli {
    use super::CMatrix;
    use num_complex::Complex64;

    fn m2(a: [[Complex64; 2]; 2]) -> CMatrix {
        CMatrix::from_fn(2, 2, |r, c| a[r][c])
    }

    const O: Complex64 = Complex64::new(0.0, 0.0);
    const I1: Complex64 = Complex64::new(1.0, 0.0);
    const IM: Complex64 = Complex64::new(0.0, 1.0);

    pub fn identity() -> CMatrix {
        CMatrix::identity(2, 2)
    }

    pub fn x() -> CMatrix {
        m2([[O, I1], [I1, O]])
    }

    pub fn y() -> CMatrix {
        m2([[O, -IM], [IM, O]])
    }

    pub fn z() -> CMatrix {
        m2([[I1, O], [O, -I1]])
    }

    /// Lowering operator `|0><1|`.
    pub fn lower() -> CMatrix {
        m2([[O, I1], [O, O]])
    }

    /// Projector `|1><1|`.
    pub fn occupied() -> CMatrix {
        m2([[O, O], [O, I1]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
        let a = CMatrix::from_fn(n, n, |_, _| {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        (&a + a.adjoint()).scale(0.5)
    }

    fn random_unitary_2x2(rng: &mut ChaCha8Rng) -> CMatrix {
        let th: f64 = rng.random_range(0.0..PI);
        let a: f64 = rng.random_range(0.0..2.0 * PI);
        let b: f64 = rng.random_range(0.0..2.0 * PI);
        let (s, co) = th.sin_cos();
        CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::from_polar(co, a),
                Complex64::from_polar(-s, b),
                Complex64::from_polar(s, -b),
                Complex64::from_polar(co, -a),
            ],
        )
    }

    #[test]
    fn basis_indexing() {
        let b = ChargeBasis::new(3);
        assert_eq!(b.dim(), 7);
        for (i, n) in b.charges().enumerate() {
            assert_eq!(b.index(n), Some(i));
            assert_eq!(b.charge(i), n);
        }
        assert_eq!(b.index(4), None);
        assert_eq!(b.index(-4), None);
    }

    #[test]
    fn shift_by_two_moves_zero_to_two() {
        let b = ChargeBasis::new(2);
        let s = charge_shift(&b, 2).unwrap();
        assert_eq!(s[(4, 2)], c(1.0, 0.0));
        assert_eq!(s.iter().filter(|z| z.norm() > 0.0).count(), 3);
    }

    #[test]
    fn shift_zero_is_identity_and_adjoints_pair_up() {
        let b = ChargeBasis::new(4);
        assert_eq!(charge_shift(&b, 0).unwrap(), CMatrix::identity(9, 9));
        assert_eq!(
            charge_shift(&b, 1).unwrap().adjoint(),
            charge_shift(&b, -1).unwrap()
        );
    }

    #[test]
    fn shift_out_of_range_is_domain_error() {
        let b = ChargeBasis::new(2);
        assert!(matches!(charge_shift(&b, 5), Err(Error::Domain(_))));
        assert!(charge_shift(&b, -4).is_ok());
    }

    #[test]
    fn shift_products_project_on_interior() {
        let b = ChargeBasis::new(5);
        for m in 0..=3i64 {
            let p = charge_shift(&b, m).unwrap() * charge_shift(&b, -m).unwrap();
            for (i, n) in b.charges().enumerate() {
                // |N><N| survives when N - m is inside the basis.
                let inside = b.index(n - m).is_some();
                assert_eq!(p[(i, i)].re, if inside { 1.0 } else { 0.0 });
            }
            let off: f64 = (0..b.dim())
                .flat_map(|r| (0..b.dim()).map(move |c| (r, c)))
                .filter(|(r, c)| r != c)
                .map(|rc| p[rc].norm())
                .sum();
            assert_eq!(off, 0.0);
        }
    }

    #[test]
    fn number_operator_entries() {
        let n = number_operator(&ChargeBasis::new(1));
        assert_eq!(n[(0, 0)].re, -1.0);
        assert_eq!(n[(1, 1)].re, 0.0);
        assert_eq!(n[(2, 2)].re, 1.0);
        for k in 0..6 {
            assert_eq!(number_operator(&ChargeBasis::new(k)).trace(), c(0.0, 0.0));
        }
        let b = ChargeBasis::new(3);
        let s0 = charge_shift(&b, 0).unwrap();
        let nn = number_operator(&b);
        assert_eq!(&nn * &s0, &s0 * &nn);
    }

    #[test]
    fn half_phase_window_reproduces_cosine_on_branch() {
        // W + W† is the Fourier matrix of 2cos(φ/2) on φ ∈ [-π, π):
        // <k'|2cos(φ/2)|k> = 4(-1)^d / (π(1 - 4d²)).
        let b = ChargeBasis::new(6);
        let w = half_phase_window(&b);
        let cw = &w + w.adjoint();
        for r in 0..b.dim() {
            for col in 0..b.dim() {
                let d = r as f64 - col as f64;
                let sign = if (r + col) % 2 == 0 { 1.0 } else { -1.0 };
                let expect = 4.0 * sign / (PI * (1.0 - 4.0 * d * d));
                assert!((cw[(r, col)].re - expect).abs() < 1e-14);
                assert_eq!(cw[(r, col)].im, 0.0);
            }
        }
    }

    #[test]
    fn half_phase_window_squares_to_shift_in_the_bulk() {
        // (e^{iφ/2})² = e^{iφ}: the product approaches the unit shift far from the edges.
        let b = ChargeBasis::new(400);
        let w = half_phase_window(&b);
        let centre = b.index(0).unwrap();
        let row = b.index(1).unwrap();
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..b.dim() {
            acc += w[(row, k)] * w[(k, centre)];
        }
        assert!((acc.re - 1.0).abs() < 2e-3, "{acc}");
    }

    #[test]
    fn eig_of_diagonal_matrix() {
        let h =
            CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(2.0, 0.0), c(1.0, 0.0)]));
        let e = hermitian_eig(&h).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0]);
        assert_eq!(e.vectors[(1, 0)], c(1.0, 0.0));
    }

    #[test]
    fn eig_of_pauli_x() {
        let e = hermitian_eig(&pauli::x()).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        let r = 1.0 / 2f64.sqrt();
        // Phase fixing makes the first (largest, tie-broken) component real positive.
        assert!((e.vectors[(0, 0)] - c(r, 0.0)).norm() < 1e-14);
        assert!((e.vectors[(1, 0)] - c(-r, 0.0)).norm() < 1e-14);
        assert!((e.vectors[(0, 1)] - c(r, 0.0)).norm() < 1e-14);
        assert!((e.vectors[(1, 1)] - c(r, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn eig_rejects_bad_input() {
        let rect = CMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eig(&rect), Err(Error::Domain(_))));
        let mut h = pauli::x();
        h[(0, 1)] = c(1.0, 0.5);
        assert!(matches!(hermitian_eig(&h), Err(Error::Domain(_))));
    }

    #[test]
    fn eig_reconstructs_random_50x50() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = random_hermitian(&mut rng, 50);
        let e = hermitian_eig(&h).unwrap();
        let scale = h.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let err = (e.reconstruct() - &h)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-10 * scale, "{err}");
        let gram = e.vectors.adjoint() * &e.vectors;
        let id_err = (gram - CMatrix::identity(50, 50))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(id_err < 1e-10);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn eigenvalues_survive_unitary_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = random_hermitian(&mut rng, 8);
        let u = kron(
            &kron(&random_unitary_2x2(&mut rng), &random_unitary_2x2(&mut rng)),
            &random_unitary_2x2(&mut rng),
        );
        let hu = &u * &h * u.adjoint();
        let a = hermitian_eig(&h).unwrap().values;
        let b = hermitian_eig(&hu).unwrap().values;
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= 1e-10 * x.abs().max(1.0));
        }
    }

    #[test]
    fn kron_examples() {
        let zero = CMatrix::from_column_slice(2, 1, &[c(1.0, 0.0), c(0.0, 0.0)]);
        let ket = kron(&zero, &zero);
        let out = kron(&pauli::identity(), &pauli::x()) * ket;
        let expect = kron(
            &zero,
            &CMatrix::from_column_slice(2, 1, &[c(0.0, 0.0), c(1.0, 0.0)]),
        );
        assert_eq!(out, expect);
        let k = kron(&CMatrix::identity(2, 2), &CMatrix::identity(3, 3));
        assert_eq!(k.shape(), (6, 6));
    }

    fn arb_2x2() -> impl Strategy<Value = CMatrix> {
        proptest::collection::vec(-2.0f64..2.0, 8).prop_map(|v| {
            CMatrix::from_fn(2, 2, |r, col| {
                c(v[2 * (2 * r + col)], v[2 * (2 * r + col) + 1])
            })
        })
    }

    proptest! {
        #[test]
        fn kron_mixed_product(a in arb_2x2(), b in arb_2x2(), cc in arb_2x2(), d in arb_2x2()) {
            let lhs = kron(&a, &b) * kron(&cc, &d);
            let rhs = kron(&(&a * &cc), &(&b * &d));
            let err = (lhs - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max);
            prop_assert!(err < 1e-12);
        }

        #[test]
        fn eig_residuals_bounded(seed in 0u64..500, n in 1usize..24) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = random_hermitian(&mut rng, n);
            let e = hermitian_eig(&h).unwrap();
            let norm2 = e.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for k in 0..n {
                let v = e.vectors.column(k).into_owned();
                let r = &h * &v - v.scale(e.values[k]);
                prop_assert!(r.norm() <= 1e-10 * norm2.max(1e-300));
            }
        }
    }
}
