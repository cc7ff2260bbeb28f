//! Laplacian matrices and a cyclic Jacobi eigensolver for dense symmetric
//! matrices.

use crate::error::SpectralError;
use crate::graph::Graph;

/// Eigenvalues below this are counted as zero when computing multiplicities.
pub const ZERO_EIGENVALUE_THRESHOLD: f64 = 1e-6;

/// Relative off-diagonal tolerance at which Jacobi sweeps stop.
pub const JACOBI_TOLERANCE: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;

/// Dense real symmetric matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    order: usize,
    entries: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(order: usize) -> Self {
        SymMatrix {
            order,
            entries: vec![0.0; order * order],
        }
    }

    /// Builds a matrix from rows, requiring exact symmetry.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, SpectralError> {
        let n = rows.len();
        let mut m = SymMatrix::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "row {i} has the wrong length");
            for (j, &x) in row.iter().enumerate() {
                if rows[j][i] != x {
                    return Err(SpectralError::NotSymmetric { i, j });
                }
                m.entries[i * n + j] = x;
            }
        }
        Ok(m)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.order + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.entries[i * self.order + j] = value;
        self.entries[j * self.order + i] = value;
    }

    pub fn trace(&self) -> f64 {
        (0..self.order).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Eigenvalues in ascending order plus the final off-diagonal norm.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub residual: f64,
}

impl Spectrum {
    pub fn smallest(&self) -> f64 {
        self.values[0]
    }

    /// Second-smallest eigenvalue.
    pub fn second(&self) -> f64 {
        self.values[1]
    }

    pub fn largest(&self) -> f64 {
        *self.values.last().expect("nonempty spectrum")
    }

    pub fn zero_multiplicity(&self) -> usize {
        self.values
            .iter()
            .filter(|v| v.abs() < ZERO_EIGENVALUE_THRESHOLD)
            .count()
    }
}

#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub spectrum: Spectrum,
    /// `vectors[k]` is a unit eigenvector for `spectrum.values[k]`.
    pub vectors: Vec<Vec<f64>>,
}

pub fn laplacian(g: &Graph) -> SymMatrix {
    let n = g.order();
    let mut m = SymMatrix::zeros(n);
    for v in 0..n {
        m.set(v, v, g.degree(v) as f64);
    }
    for (a, b) in g.edges() {
        m.set(a, b, -1.0);
    }
    m
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for p in 0..n {
        for q in p + 1..n {
            s += a[p * n + q] * a[p * n + q];
        }
    }
    (2.0 * s).sqrt()
}

/// Diagonal, optional row-major eigenvector matrix, final off-diagonal norm.
type JacobiResult = Result<(Vec<f64>, Option<Vec<f64>>, f64), SpectralError>;

fn jacobi(m: &SymMatrix, want_vectors: bool) -> JacobiResult {
    let n = m.order;
    let mut a = m.entries.clone();
    let mut v = want_vectors.then(|| {
        let mut id = vec![0.0; n * n];
        for i in 0..n {
            id[i * n + i] = 1.0;
        }
        id
    });
    let tol = JACOBI_TOLERANCE * (1.0 + m.frobenius_norm());

    let mut off = off_diagonal_norm(&a, n);
    let mut sweeps = 0;
    while off >= tol {
        if sweeps == MAX_SWEEPS {
            return Err(SpectralError::NoConvergence { sweeps, off_norm: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                // A <- A J, then A <- J^T A, with J the (p, q) plane rotation.
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
        off = off_diagonal_norm(&a, n);
    }
    let diag = (0..n).map(|i| a[i * n + i]).collect();
    Ok((diag, v, off))
}

/// All eigenvalues of `m` in ascending order.
pub fn eigenvalues_sym(m: &SymMatrix) -> Result<Spectrum, SpectralError> {
    let (mut values, _, residual) = jacobi(m, false)?;
    values.sort_by(f64::total_cmp);
    Ok(Spectrum { values, residual })
}

/// Eigenvalues with their eigenvectors, ascending.
pub fn eigen_decomposition_sym(m: &SymMatrix) -> Result<EigenDecomposition, SpectralError> {
    let n = m.order;
    let (values, v, residual) = jacobi(m, true)?;
    let v = v.expect("vectors requested");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    Ok(EigenDecomposition {
        spectrum: Spectrum {
            values: order.iter().map(|&k| values[k]).collect(),
            residual,
        },
        vectors: order
            .iter()
            .map(|&k| (0..n).map(|i| v[i * n + k]).collect())
            .collect(),
    })
}

pub fn laplacian_spectrum(g: &Graph) -> Result<Spectrum, SpectralError> {
    eigenvalues_sym(&laplacian(g))
}

fn require_two(g: &Graph) -> Result<(), SpectralError> {
    if g.order() < 2 {
        return Err(SpectralError::TooSmall { n: g.order(), needed: 2 });
    }
    Ok(())
}

/// Algebraic connectivity: the second-smallest Laplacian eigenvalue.
pub fn lambda2(g: &Graph) -> Result<f64, SpectralError> {
    require_two(g)?;
    Ok(laplacian_spectrum(g)?.second())
}

/// Laplacian spread `λn - λ2`.
pub fn spread(g: &Graph) -> Result<f64, SpectralError> {
    require_two(g)?;
    let s = laplacian_spectrum(g)?;
    Ok(s.largest() - s.second())
}

/// Tolerance for the complement-spectrum identity.
pub const COMPLEMENT_IDENTITY_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct ComplementSpectrumReport {
    pub graph: Spectrum,
    pub complement: Spectrum,
    /// `{0} ∪ {n - λk(G) : k = n..2}`, ascending.
    pub predicted: Vec<f64>,
    pub max_deviation: f64,
    pub holds: bool,
}

/// Compares the complement's Laplacian spectrum with the one predicted from
/// the graph's spectrum.
pub fn complement_spectrum_check(g: &Graph) -> Result<ComplementSpectrumReport, SpectralError> {
    require_two(g)?;
    let graph = laplacian_spectrum(g)?;
    let complement = laplacian_spectrum(&g.complement())?;
    Ok(compare_complement_spectra(g.order(), graph, complement))
}

pub(crate) fn compare_complement_spectra(
    n: usize,
    graph: Spectrum,
    complement: Spectrum,
) -> ComplementSpectrumReport {
    let nf = n as f64;
    let predicted: Vec<f64> = std::iter::once(0.0)
        .chain(graph.values[1..].iter().rev().map(|l| nf - l))
        .collect();
    let max_deviation = predicted
        .iter()
        .zip(&complement.values)
        .map(|(p, c)| (p - c).abs())
        .fold(0.0, f64::max);
    ComplementSpectrumReport {
        graph,
        complement,
        predicted,
        max_deviation,
        holds: max_deviation <= COMPLEMENT_IDENTITY_TOLERANCE,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormIdentityReport {
    pub norm_squared: f64,
    /// Sum over unordered pairs of `(f(x) - f(y))^2`.
    pub pair_sum: f64,
    pub relative_error: f64,
    pub holds: bool,
}

/// For a zero-sum vector `f`, checks `‖f‖² = (1/n) Σ_{x<y} (f(x) - f(y))²`
/// with the pair sum taken by brute force.
pub fn rayleigh_norm_identity_check(f: &[f64]) -> Result<NormIdentityReport, SpectralError> {
    let sum: f64 = f.iter().sum();
    let scale = f.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
    if sum.abs() > 1e-12 * scale {
        return Err(SpectralError::NotZeroSum { sum });
    }
    let n = f.len();
    let norm_squared: f64 = f.iter().map(|x| x * x).sum();
    let mut pair_sum = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            pair_sum += (f[i] - f[j]).powi(2);
        }
    }
    let rhs = if n == 0 { 0.0 } else { pair_sum / n as f64 };
    let relative_error = (norm_squared - rhs).abs() / norm_squared.max(f64::MIN_POSITIVE);
    Ok(NormIdentityReport {
        norm_squared,
        pair_sum,
        relative_error,
        holds: norm_squared == rhs || relative_error <= 1e-10,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, empty, path_graph, star};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn laplacian_examples() {
        let k2 = laplacian(&complete(2).unwrap());
        assert_eq!(k2, SymMatrix::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap());
        let p4 = laplacian(&path_graph(4).unwrap());
        assert_eq!((0..4).map(|i| p4.get(i, i)).collect::<Vec<_>>(), vec![1.0, 2.0, 2.0, 1.0]);
        for i in 0..4 {
            assert_eq!((0..4).map(|j| p4.get(i, j)).sum::<f64>(), 0.0);
        }
        assert_eq!(laplacian(&empty(3).unwrap()), SymMatrix::zeros(3));
    }

    #[test]
    fn complete_graph_spectrum() {
        let s = laplacian_spectrum(&complete(4).unwrap()).unwrap();
        assert_close(&s.values, &[0.0, 4.0, 4.0, 4.0], 1e-9);
    }

    #[test]
    fn p4_second_eigenvalue() {
        let l2 = lambda2(&path_graph(4).unwrap()).unwrap();
        assert!((l2 - (2.0 - 2f64.sqrt())).abs() < 1e-9);
        let sp = spread(&path_graph(4).unwrap()).unwrap();
        assert!((sp - 2.0 * 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn path_spectrum_closed_form() {
        for n in 2..=8 {
            let mut expected: Vec<f64> = (0..n)
                .map(|k| 2.0 - 2.0 * (k as f64 * PI / n as f64).cos())
                .collect();
            expected.sort_by(f64::total_cmp);
            let s = laplacian_spectrum(&path_graph(n).unwrap()).unwrap();
            assert_close(&s.values, &expected, 1e-9);
        }
    }

    #[test]
    fn star_and_disconnected() {
        assert!((lambda2(&star(4).unwrap()).unwrap() - 1.0).abs() < 1e-9);
        assert!(lambda2(&empty(3).unwrap()).unwrap().abs() < 1e-9);
        assert!(matches!(lambda2(&empty(1).unwrap()), Err(SpectralError::TooSmall { .. })));
    }

    #[test]
    fn complement_identity_examples() {
        let r = complement_spectrum_check(&complete(4).unwrap()).unwrap();
        assert!(r.holds);
        assert_close(&r.complement.values, &[0.0; 4], 1e-9);

        let r = complement_spectrum_check(&path_graph(4).unwrap()).unwrap();
        assert!(r.holds);
        let s2 = 2f64.sqrt();
        assert_close(&r.complement.values, &[0.0, 2.0 - s2, 2.0, 2.0 + s2], 1e-9);

        let r = complement_spectrum_check(&star(5).unwrap()).unwrap();
        assert!(r.holds);
        assert_close(&r.graph.values, &[0.0, 1.0, 1.0, 1.0, 5.0], 1e-9);
        assert_close(&r.complement.values, &[0.0, 0.0, 4.0, 4.0, 4.0], 1e-9);
    }

    #[test]
    fn cycle_spectrum() {
        let s = laplacian_spectrum(&cycle(5).unwrap()).unwrap();
        let l2 = 2.0 - 2.0 * (2.0 * PI / 5.0).cos();
        assert!((s.second() - l2).abs() < 1e-9);
    }

    #[test]
    fn eigenvectors_satisfy_definition() {
        let m = laplacian(&crate::generators::random_gnp(9, 0.4, 7).unwrap());
        let d = eigen_decomposition_sym(&m).unwrap();
        for (lambda, v) in d.spectrum.values.iter().zip(&d.vectors) {
            for i in 0..m.order() {
                let mv: f64 = (0..m.order()).map(|j| m.get(i, j) * v[j]).sum();
                assert!((mv - lambda * v[i]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn asymmetric_rows_rejected() {
        assert!(SymMatrix::from_rows(&[vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
    }

    #[test]
    fn norm_identity_examples() {
        let r = rayleigh_norm_identity_check(&[1.0, -1.0]).unwrap();
        assert_eq!((r.norm_squared, r.pair_sum), (2.0, 4.0));
        assert!(r.holds);
        let r = rayleigh_norm_identity_check(&[1.0, 0.0, -1.0]).unwrap();
        assert_eq!((r.norm_squared, r.pair_sum), (2.0, 6.0));
        assert!(r.holds);
        assert!(matches!(
            rayleigh_norm_identity_check(&[1.0, 1.0]),
            Err(SpectralError::NotZeroSum { .. })
        ));
    }

    #[test]
    fn fiedler_vector_satisfies_norm_identity() {
        let m = laplacian(&path_graph(6).unwrap());
        let d = eigen_decomposition_sym(&m).unwrap();
        let f = &d.vectors[1];
        let mean = f.iter().sum::<f64>() / f.len() as f64;
        let centered: Vec<f64> = f.iter().map(|x| x - mean).collect();
        assert!(rayleigh_norm_identity_check(&centered).unwrap().holds);
    }

    proptest! {
        #[test]
        fn norm_identity_on_random_zero_sum_vectors(
            raw in (2usize..=10).prop_flat_map(|n| prop::collection::vec(-10.0f64..10.0, n))
        ) {
            let mean = raw.iter().sum::<f64>() / raw.len() as f64;
            let f: Vec<f64> = raw.iter().map(|x| x - mean).collect();
            let sum: f64 = f.iter().sum();
            // Re-centre exactly on the last entry to absorb rounding.
            let mut f = f;
            let last = f.len() - 1;
            f[last] -= sum;
            prop_assume!(f.iter().sum::<f64>().abs() <= 1e-12);
            prop_assert!(rayleigh_norm_identity_check(&f).unwrap().holds);
        }

        #[test]
        fn trace_and_zero_multiplicity(n in 2usize..=12, p in 0.0f64..=1.0, seed in any::<u64>()) {
            let g = crate::generators::random_gnp(n, p, seed).unwrap();
            let s = laplacian_spectrum(&g).unwrap();
            prop_assert!(s.smallest().abs() < 1e-9);
            prop_assert!((s.values.iter().sum::<f64>() - 2.0 * g.edge_count() as f64).abs() < 1e-8);
            prop_assert_eq!(s.zero_multiplicity(), g.component_count());
            prop_assert!(s.largest() - s.second() <= n as f64 + 1e-9);
            let c = complement_spectrum_check(&g).unwrap();
            prop_assert!(c.holds);
            let l2c = c.complement.second();
            let spread = s.largest() - s.second();
            prop_assert!((spread - (n as f64 - l2c - s.second())).abs() <= 1e-8);
        }
    }
}
