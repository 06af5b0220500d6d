//! Density matrices, Pauli-coefficient expansion, the example states and the
//! projection of an arbitrary Hermitian matrix onto the set of physical states.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;
use crate::pauli::{labels, PauliAction, QubitCount};

/// Trace tolerance for [`DensityMatrix`].
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest admissible eigenvalue for [`DensityMatrix`].
pub const PSD_TOL: f64 = 1e-10;

/// A Hermitian, positive semidefinite, unit-trace matrix of dimension 2ⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: HermitianMatrix,
    n: QubitCount,
}

impl DensityMatrix {
    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        let n = QubitCount::new(matrix.qubits()?)?;
        let tr = matrix.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotDensity(format!("trace {tr} differs from 1")));
        }
        let min = matrix.eigen()?.values[0];
        if min < -PSD_TOL {
            return Err(Error::NotDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { matrix, n })
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> HermitianMatrix {
        self.matrix
    }

    pub fn qubits(&self) -> QubitCount {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Eigenvalues in decreasing order.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        let mut v = self.matrix.eigen()?.values;
        v.reverse();
        Ok(v)
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> Result<usize> {
        Ok(self.spectrum()?.iter().filter(|&&l| l > tol).count())
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.matrix.frobenius_norm_sq()
    }

    pub fn maximally_mixed(n: QubitCount) -> Self {
        Self {
            matrix: HermitianMatrix::identity(n.dim()).scale(1.0 / n.dim() as f64),
            n,
        }
    }
}

/// Real coefficients `ρ_b` of `ρ = Σ_b ρ_b σ_b`, in label enumeration order.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliCoefficients {
    n: QubitCount,
    coeffs: Vec<f64>,
}

impl PauliCoefficients {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        let len = coeffs.len();
        if len < 4 || !len.is_power_of_two() || !len.trailing_zeros().is_multiple_of(2) {
            return Err(Error::NotPowerOfFour(len));
        }
        let n = QubitCount::new(len.trailing_zeros() as usize / 2)?;
        Ok(Self { n, coeffs })
    }

    pub fn qubits(&self) -> QubitCount {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.coeffs
    }

    /// Coefficient of the all-identity label.
    pub fn identity_coefficient(&self) -> f64 {
        self.coeffs[0]
    }
}

/// `ρ_b = Tr(ρ·σ_b) / 2ⁿ` for every label.
pub fn pauli_expand(rho: &HermitianMatrix) -> Result<PauliCoefficients> {
    let n = QubitCount::new(rho.qubits()?)?;
    let dim = n.dim();
    let m = rho.as_matrix();
    let scale = 1.0 / dim as f64;
    let coeffs = labels(n)
        .map(|b| {
            let action = PauliAction::new(&b);
            let mut acc = Complex64::new(0.0, 0.0);
            // Tr(ρσ) = Σ_k ρ[col(k), k]·σ[k, col(k)]
            for k in 0..dim {
                let (col, v) = action.entry(k);
                acc += m[(col, k)] * v;
            }
            acc.re * scale
        })
        .collect();
    PauliCoefficients::new(coeffs)
}

/// `Σ_b c_b σ_b`.
pub fn pauli_assemble(c: &PauliCoefficients) -> Result<HermitianMatrix> {
    let n = c.qubits();
    let dim = n.dim();
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for (b, &cb) in labels(n).zip(c.as_slice()) {
        if cb == 0.0 {
            continue;
        }
        let action = PauliAction::new(&b);
        for row in 0..dim {
            let (col, v) = action.entry(row);
            m[(row, col)] += v * cb;
        }
    }
    HermitianMatrix::symmetrized(m)
}

/// `D_d = diag(1/d, …, 1/d, 0, …, 0)` with `d` nonzero entries.
pub fn diag_state(n: QubitCount, d: usize) -> Result<DensityMatrix> {
    let dim = n.dim();
    if d == 0 || d > dim {
        return Err(Error::Range(format!("rank d = {d} outside 1..={dim}")));
    }
    let diag: Vec<f64> = (0..dim)
        .map(|i| if i < d { 1.0 / d as f64 } else { 0.0 })
        .collect();
    Ok(DensityMatrix {
        matrix: HermitianMatrix::from_real_diagonal(&diag),
        n,
    })
}

fn pure_state(n: QubitCount, amplitudes: &[(usize, f64)]) -> DensityMatrix {
    let dim = n.dim();
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for &(i, ai) in amplitudes {
        for &(j, aj) in amplitudes {
            m[(i, j)] = Complex64::new(ai * aj, 0.0);
        }
    }
    DensityMatrix {
        matrix: HermitianMatrix::new(m).expect("outer product of a real vector is symmetric"),
        n,
    }
}

fn require_two_qubits(n: QubitCount, what: &str) -> Result<()> {
    if n.get() < 2 {
        return Err(Error::Range(format!("{what} needs n >= 2, got {n}")));
    }
    Ok(())
}

/// `|g⟩⟨g|` with `|g⟩ = (|0…0⟩ + |1…1⟩)/√2`.
pub fn ghz(n: QubitCount) -> Result<DensityMatrix> {
    require_two_qubits(n, "GHZ state")?;
    let a = std::f64::consts::FRAC_1_SQRT_2;
    Ok(pure_state(n, &[(0, a), (n.dim() - 1, a)]))
}

/// `|w⟩⟨w|` with `|w⟩` the uniform superposition of single-excitation states.
pub fn w_state(n: QubitCount) -> Result<DensityMatrix> {
    require_two_qubits(n, "W state")?;
    let a = 1.0 / (n.get() as f64).sqrt();
    let amps: Vec<(usize, f64)> = (0..n.get()).map(|k| (1usize << k, a)).collect();
    Ok(pure_state(n, &amps))
}

/// `M_{d,p} = p·GHZ + (1−p)·D_d`.
pub fn mixture(n: QubitCount, d: usize, p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Range(format!(
            "mixture weight p = {p} outside [0,1]"
        )));
    }
    let g = ghz(n)?;
    let dd = diag_state(n, d)?;
    let m = g.matrix.scale(p).add(&dd.matrix.scale(1.0 - p))?;
    Ok(DensityMatrix { matrix: m, n })
}

/// Euclidean projection of `v` onto the probability simplex.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    if v.is_empty() {
        return Vec::new();
    }
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut tau = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let t = (cumsum - 1.0) / (k + 1) as f64;
        if u - t > 0.0 {
            tau = t;
        } else {
            break;
        }
    }
    v.iter().map(|&x| (x - tau).max(0.0)).collect()
}

/// Closest density matrix to `h` in Frobenius norm, optionally restricted to
/// the eigenvectors of the `max_rank` largest eigenvalues of `h`.
///
/// Ties among equal eigenvalues keep the lower eigen-index.
pub fn nearest_density(h: &HermitianMatrix, max_rank: Option<usize>) -> Result<DensityMatrix> {
    let n = QubitCount::new(h.qubits()?)?;
    let dim = n.dim();
    let keep = match max_rank {
        Some(0) => return Err(Error::Range("max_rank must be at least 1".into())),
        Some(k) => k.min(dim),
        None => dim,
    };
    let eig = h.eigen()?;
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.values[b].total_cmp(&eig.values[a]));
    let retained: Vec<f64> = order[..keep].iter().map(|&i| eig.values[i]).collect();
    let projected = project_simplex(&retained);
    let mut weights = vec![0.0; dim];
    for (&i, w) in order[..keep].iter().zip(projected) {
        weights[i] = w;
    }
    let matrix = HermitianMatrix::from_spectrum(&weights, &eig.vectors);
    Ok(DensityMatrix { matrix, n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::BasisLabel;
    use proptest::prelude::*;

    fn q(n: usize) -> QubitCount {
        QubitCount::new(n).unwrap()
    }

    fn coeff(c: &PauliCoefficients, label: &str) -> f64 {
        c.as_slice()[label.parse::<BasisLabel>().unwrap().index()]
    }

    #[test]
    fn expand_z_eigenstate() {
        let rho = HermitianMatrix::from_real_diagonal(&[1.0, 0.0]);
        let c = pauli_expand(&rho).unwrap();
        assert!((coeff(&c, "i") - 0.5).abs() < 1e-15);
        assert!((coeff(&c, "z") - 0.5).abs() < 1e-15);
        assert!(coeff(&c, "x").abs() < 1e-15);
        assert!(coeff(&c, "y").abs() < 1e-15);
        let back = pauli_assemble(&c).unwrap();
        assert!(back.frobenius_distance(&rho).unwrap() < 1e-15);
    }

    #[test]
    fn expand_maximally_mixed() {
        for n in 1..=3 {
            let rho = DensityMatrix::maximally_mixed(q(n));
            let c = pauli_expand(rho.matrix()).unwrap();
            assert!((c.identity_coefficient() - 1.0 / (1 << n) as f64).abs() < 1e-15);
            assert!(c.as_slice()[1..].iter().all(|v| v.abs() < 1e-15));
            let back = pauli_assemble(&c).unwrap();
            assert!(back.frobenius_distance(rho.matrix()).unwrap() < 1e-15);
        }
    }

    #[test]
    fn expand_ghz_two_qubits() {
        let c = pauli_expand(ghz(q(2)).unwrap().matrix()).unwrap();
        let expected = [("ii", 0.25), ("xx", 0.25), ("yy", -0.25), ("zz", 0.25)];
        for b in labels(q(2)) {
            let name = b.to_string();
            let want = expected
                .iter()
                .find(|(l, _)| *l == name)
                .map_or(0.0, |(_, v)| *v);
            assert!((c.as_slice()[b.index()] - want).abs() < 1e-14, "{name}");
        }
    }

    #[test]
    fn coefficient_length_must_be_power_of_four() {
        assert!(matches!(
            PauliCoefficients::new(vec![0.0; 8]),
            Err(Error::NotPowerOfFour(8))
        ));
        assert!(PauliCoefficients::new(vec![0.0; 3]).is_err());
        assert!(PauliCoefficients::new(vec![0.0; 16]).is_ok());
    }

    #[test]
    fn diag_state_examples() {
        let d = diag_state(q(1), 1).unwrap();
        assert_eq!(
            d.matrix(),
            &HermitianMatrix::from_real_diagonal(&[1.0, 0.0])
        );
        let d = diag_state(q(2), 2).unwrap();
        assert_eq!(
            d.matrix(),
            &HermitianMatrix::from_real_diagonal(&[0.5, 0.5, 0.0, 0.0])
        );
        let d = diag_state(q(4), 6).unwrap();
        let spec = d.spectrum().unwrap();
        assert!((spec[0] - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(d.rank(1e-9).unwrap(), 6);
        assert!(diag_state(q(2), 5).is_err());
        assert!(diag_state(q(2), 0).is_err());
    }

    #[test]
    fn ghz_w_mixture() {
        let g = ghz(q(2)).unwrap();
        assert!((g.matrix().trace() - 1.0).abs() < 1e-15);
        assert!((g.purity() - 1.0).abs() < 1e-14);
        assert_eq!(g.rank(1e-9).unwrap(), 1);

        let w = w_state(q(4)).unwrap();
        for k in 0..4 {
            let i = 1 << k;
            assert!((w.matrix().get(i, i).re - 0.25).abs() < 1e-15);
        }
        assert_eq!(w.rank(1e-9).unwrap(), 1);

        let m = mixture(q(4), 3, 0.2).unwrap();
        assert_eq!(m.rank(1e-9).unwrap(), 4);
        assert!(ghz(q(1)).is_err());
        assert!(mixture(q(4), 3, 1.5).is_err());
    }

    #[test]
    fn example_states_are_valid_density_matrices() {
        for n in 2..=4 {
            let mut states = vec![ghz(q(n)).unwrap(), w_state(q(n)).unwrap()];
            for d in 1..=(1 << n) {
                states.push(diag_state(q(n), d).unwrap());
                states.push(mixture(q(n), d, 0.3).unwrap());
            }
            for s in states {
                DensityMatrix::new(s.matrix().clone()).unwrap();
            }
        }
    }

    #[test]
    fn simplex_examples() {
        assert_eq!(project_simplex(&[1.2, -0.2]), vec![1.0, 0.0]);
        let p = project_simplex(&[0.9, 0.3, -0.2, 0.0]);
        let want = [0.8, 0.2, 0.0, 0.0];
        for (a, b) in p.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn nearest_density_examples() {
        let h = HermitianMatrix::from_real_diagonal(&[1.2, -0.2]);
        let d = nearest_density(&h, None).unwrap();
        assert!(
            d.matrix()
                .frobenius_distance(&HermitianMatrix::from_real_diagonal(&[1.0, 0.0]))
                .unwrap()
                < 1e-14
        );

        let h = HermitianMatrix::from_real_diagonal(&[0.9, 0.3, -0.2, 0.0]);
        let d = nearest_density(&h, None).unwrap();
        let want = HermitianMatrix::from_real_diagonal(&[0.8, 0.2, 0.0, 0.0]);
        assert!(d.matrix().frobenius_distance(&want).unwrap() < 1e-14);

        let g = ghz(q(3)).unwrap();
        let same = nearest_density(g.matrix(), None).unwrap();
        assert!(same.matrix().frobenius_distance(g.matrix()).unwrap() < 1e-12);
    }

    #[test]
    fn nearest_density_rank_restriction() {
        let h = HermitianMatrix::from_real_diagonal(&[0.5, 0.3, 0.2, 0.1]);
        let d = nearest_density(&h, Some(2)).unwrap();
        // retained (0.5, 0.3) shifted by τ = -0.1
        let want = HermitianMatrix::from_real_diagonal(&[0.6, 0.4, 0.0, 0.0]);
        assert!(d.matrix().frobenius_distance(&want).unwrap() < 1e-14);
        assert!(nearest_density(&h, Some(0)).is_err());
    }

    fn random_hermitian(dim: usize, vals: &[f64]) -> HermitianMatrix {
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        let mut it = vals.iter().cycle();
        for i in 0..dim {
            for j in i..dim {
                let re = *it.next().unwrap();
                let im = if i == j { 0.0 } else { *it.next().unwrap() };
                m[(i, j)] = Complex64::new(re, im);
                m[(j, i)] = Complex64::new(re, -im);
            }
        }
        HermitianMatrix::new(m).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn expand_assemble_round_trip(n in 1usize..=3, vals in prop::collection::vec(-1.0f64..1.0, 64)) {
            let h = random_hermitian(1 << n, &vals);
            let c = pauli_expand(&h).unwrap();
            let back = pauli_assemble(&c).unwrap();
            prop_assert!(back.frobenius_distance(&h).unwrap() < 1e-10);
            let c2 = pauli_expand(&back).unwrap();
            for (a, b) in c.as_slice().iter().zip(c2.as_slice()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }

        #[test]
        fn nearest_density_valid_and_idempotent(n in 1usize..=3, vals in prop::collection::vec(-1.0f64..1.0, 64), rank in 1usize..=8) {
            let h = random_hermitian(1 << n, &vals);
            let max_rank = Some(rank.min(1 << n));
            let d = nearest_density(&h, max_rank).unwrap();
            prop_assert!((d.matrix().trace() - 1.0).abs() < 1e-12);
            let spec = d.spectrum().unwrap();
            prop_assert!(*spec.last().unwrap() >= -1e-12);
            let twice = nearest_density(d.matrix(), max_rank).unwrap();
            prop_assert!(twice.matrix().frobenius_distance(d.matrix()).unwrap() < 1e-10);
        }

        #[test]
        fn nearest_density_beats_random_states(n in 1usize..=2, vals in prop::collection::vec(-1.0f64..1.0, 64), cand in prop::collection::vec(-1.0f64..1.0, 64)) {
            let h = random_hermitian(1 << n, &vals);
            let best = nearest_density(&h, None).unwrap();
            // candidate state: normalized G·G^H
            let g = random_hermitian(1 << n, &cand);
            let gg = g.as_matrix() * g.as_matrix().adjoint();
            let tr: f64 = (0..(1 << n)).map(|i| gg[(i, i)].re).sum();
            let sigma = HermitianMatrix::symmetrized(gg.scale(1.0 / tr)).unwrap();
            let d_best = best.matrix().frobenius_distance(&h).unwrap();
            let d_cand = sigma.frobenius_distance(&h).unwrap();
            prop_assert!(d_best <= d_cand + 1e-12);
        }

        #[test]
        fn simplex_projection_lands_on_simplex(v in prop::collection::vec(-2.0f64..2.0, 1..16)) {
            let p = project_simplex(&v);
            prop_assert!(p.iter().all(|x| *x >= 0.0));
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
