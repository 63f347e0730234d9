//! Diagonal n-qubit states.
//!
//! Every protocol in this crate maps diagonal density matrices to diagonal
//! density matrices, so a register is stored as its vector of 2^n
//! computational-basis populations.
//!
//! Bit convention: qubit 0 (the target) is the most significant bit of the
//! basis index and qubit n-1 the least significant. For two qubits the basis
//! order is |00>, |01>, |10>, |11> with the target written first.

use serde::Serialize;

use crate::error::{HbacError, Result};

/// Largest register, counted in populations.
pub const MAX_POPULATIONS: usize = 1 << 20;

/// Allowed deviation of the population sum from 1.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Negative populations down to this value are clamped to zero.
pub const NEGATIVE_TOLERANCE: f64 = 1e-15;

/// Heat-bath polarization `eps_b = tanh(delta)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BathSpec {
    eps: f64,
    delta: f64,
}

impl BathSpec {
    pub fn new(eps_b: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&eps_b) {
            return Err(HbacError::InvalidBathPolarization(eps_b));
        }
        Ok(Self {
            eps: eps_b,
            delta: eps_b.atanh(),
        })
    }

    /// Builds the bath from its dimensionless inverse temperature.
    pub fn from_delta(delta: f64) -> Result<Self> {
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(HbacError::InvalidBathPolarization(delta.tanh()));
        }
        let eps = delta.tanh();
        if eps >= 1.0 {
            return Err(HbacError::InvalidBathPolarization(eps));
        }
        Ok(Self { eps, delta })
    }

    pub fn polarization(&self) -> f64 {
        self.eps
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Population ratio `p(|0>) / p(|1>) = e^{2 delta}` of a thermal qubit.
    pub fn boltzmann_ratio(&self) -> f64 {
        (2.0 * self.delta).exp()
    }
}

/// Per-qubit Pauli-Z expectations, indexed like the register.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PolarizationVector(pub Vec<f64>);

impl PolarizationVector {
    pub fn get(&self, qubit: usize) -> Option<f64> {
        self.0.get(qubit).copied()
    }

    pub fn target(&self) -> f64 {
        self.0[0]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalState {
    qubits: usize,
    populations: Vec<f64>,
}

pub(crate) fn register_len(qubits: usize) -> Result<usize> {
    if qubits == 0 || qubits > MAX_POPULATIONS.trailing_zeros() as usize {
        return Err(HbacError::RegisterTooLarge {
            qubits,
            max: MAX_POPULATIONS,
        });
    }
    Ok(1 << qubits)
}

impl DiagonalState {
    /// Validates and wraps a population vector.
    ///
    /// Entries in `[-1e-15, 0)` are clamped to zero; anything more negative,
    /// non-finite, or a sum off by more than 1e-12 is rejected.
    pub fn new(qubits: usize, mut populations: Vec<f64>) -> Result<Self> {
        let expected = register_len(qubits)?;
        if populations.len() != expected {
            return Err(HbacError::LengthMismatch {
                len: populations.len(),
                expected,
            });
        }
        for (index, p) in populations.iter_mut().enumerate() {
            if !p.is_finite() || *p < -NEGATIVE_TOLERANCE {
                return Err(HbacError::NegativePopulation { index, value: *p });
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let sum: f64 = populations.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(HbacError::NotNormalized { sum });
        }
        Ok(Self {
            qubits,
            populations,
        })
    }

    /// Infers the qubit count from the vector length.
    pub fn from_populations(populations: Vec<f64>) -> Result<Self> {
        let len = populations.len();
        if !len.is_power_of_two() || len < 2 {
            return Err(HbacError::LengthMismatch {
                len,
                expected: len.next_power_of_two().max(2),
            });
        }
        Self::new(len.trailing_zeros() as usize, populations)
    }

    pub fn maximally_mixed(qubits: usize) -> Result<Self> {
        let len = register_len(qubits)?;
        Ok(Self {
            qubits,
            populations: vec![1.0 / len as f64; len],
        })
    }

    /// The pure basis state `|index>`.
    pub fn basis(qubits: usize, index: usize) -> Result<Self> {
        let len = register_len(qubits)?;
        if index >= len {
            return Err(HbacError::BasisIndexOutOfRange { index, len });
        }
        let mut populations = vec![0.0; len];
        populations[index] = 1.0;
        Ok(Self {
            qubits,
            populations,
        })
    }

    /// `n` uncorrelated qubits each at the bath polarization.
    pub fn thermal(qubits: usize, bath: BathSpec) -> Result<Self> {
        register_len(qubits)?;
        let single = thermal_qubit(bath);
        let mut state = single.clone();
        for _ in 1..qubits {
            state = state.tensor(&single)?;
        }
        Ok(state)
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits
    }

    pub fn populations(&self) -> &[f64] {
        &self.populations
    }

    pub fn into_populations(self) -> Vec<f64> {
        self.populations
    }

    pub fn len(&self) -> usize {
        self.populations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.populations.is_empty()
    }

    /// Bit mask of `qubit` inside a basis index.
    pub fn qubit_mask(&self, qubit: usize) -> Result<usize> {
        self.check_qubit(qubit)?;
        Ok(1 << (self.qubits - 1 - qubit))
    }

    pub(crate) fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.qubits {
            return Err(HbacError::QubitOutOfRange {
                index: qubit,
                qubits: self.qubits,
            });
        }
        Ok(())
    }

    pub(crate) fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.len() {
            return Err(HbacError::BasisIndexOutOfRange {
                index,
                len: self.len(),
            });
        }
        Ok(())
    }

    /// `<Z_i> = sum_k p[k] (-1)^{bit_i(k)}`.
    pub fn polarization(&self, qubit: usize) -> Result<f64> {
        let mask = self.qubit_mask(qubit)?;
        let (up, down) =
            self.populations
                .iter()
                .enumerate()
                .fold((0.0, 0.0), |(up, down), (k, &p)| {
                    if k & mask == 0 {
                        (up + p, down)
                    } else {
                        (up, down + p)
                    }
                });
        Ok(up - down)
    }

    pub fn polarizations(&self) -> PolarizationVector {
        PolarizationVector(
            (0..self.qubits)
                .map(|q| self.polarization(q).expect("qubit in range"))
                .collect(),
        )
    }

    /// Product state `self ⊗ other`; `self` occupies the high bits.
    pub fn tensor(&self, other: &DiagonalState) -> Result<DiagonalState> {
        let qubits = self.qubits + other.qubits;
        register_len(qubits)?;
        let populations = self
            .populations
            .iter()
            .flat_map(|&a| other.populations.iter().map(move |&b| a * b))
            .collect();
        DiagonalState::new(qubits, populations)
    }

    /// Marginal over every qubit except `qubit`.
    pub fn trace_out(&self, qubit: usize) -> Result<DiagonalState> {
        self.check_qubit(qubit)?;
        if self.qubits == 1 {
            return Err(HbacError::TraceSingleQubit);
        }
        let shift = self.qubits - 1 - qubit;
        let low = (1usize << shift) - 1;
        let mut marginal = vec![0.0; self.len() / 2];
        for (k, &p) in self.populations.iter().enumerate() {
            marginal[((k >> (shift + 1)) << shift) | (k & low)] += p;
        }
        DiagonalState::new(self.qubits - 1, marginal)
    }

    pub fn l1_distance(&self, other: &DiagonalState) -> Result<f64> {
        if self.len() != other.len() {
            return Err(HbacError::LengthMismatch {
                len: other.len(),
                expected: self.len(),
            });
        }
        Ok(self
            .populations
            .iter()
            .zip(&other.populations)
            .map(|(a, b)| (a - b).abs())
            .sum())
    }
}

/// Single qubit in equilibrium with the bath: `[(1+eps)/2, (1-eps)/2]`.
pub fn thermal_qubit(bath: BathSpec) -> DiagonalState {
    let down = 0.5 * (1.0 - bath.polarization());
    DiagonalState {
        qubits: 1,
        populations: vec![1.0 - down, down],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bath(eps: f64) -> BathSpec {
        BathSpec::new(eps).unwrap()
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn thermal_qubit_examples() {
        assert_eq!(thermal_qubit(bath(0.0)).populations(), &[0.5, 0.5]);

        let t = thermal_qubit(bath(0.1));
        assert_close(t.populations(), &[0.55, 0.45], 1e-16);
        assert!((t.polarization(0).unwrap() - 0.1).abs() < 1e-16);

        let t = thermal_qubit(bath(1.0 - 1e-9));
        let p = t.populations();
        assert!(p[0] >= 1.0 - 5e-10 && p[1] <= 5e-10);
        assert_eq!(p[0] + p[1], 1.0);
    }

    #[test]
    fn bath_rejects_out_of_range() {
        for eps in [-0.1, 1.0, 1.5, f64::NAN] {
            assert!(matches!(
                BathSpec::new(eps),
                Err(HbacError::InvalidBathPolarization(_))
            ));
        }
        let b = bath(0.3);
        assert!((b.delta() - 0.3f64.atanh()).abs() <= 1e-14);
        assert!((BathSpec::from_delta(b.delta()).unwrap().polarization() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn tensor_examples() {
        let pure = DiagonalState::new(1, vec![1.0, 0.0]).unwrap();
        let mixed = DiagonalState::maximally_mixed(1).unwrap();
        assert_eq!(
            pure.tensor(&mixed).unwrap().populations(),
            &[0.5, 0.5, 0.0, 0.0]
        );

        let t = thermal_qubit(bath(0.1));
        assert_close(
            t.tensor(&t).unwrap().populations(),
            &[0.3025, 0.2475, 0.2475, 0.2025],
            1e-15,
        );
        assert_close(
            mixed.tensor(&t).unwrap().populations(),
            &[0.275, 0.225, 0.275, 0.225],
            1e-15,
        );
    }

    #[test]
    fn tensor_respects_size_limit() {
        let big = DiagonalState::maximally_mixed(15).unwrap();
        let small = DiagonalState::maximally_mixed(6).unwrap();
        assert!(matches!(
            big.tensor(&small),
            Err(HbacError::RegisterTooLarge { qubits: 21, .. })
        ));
        assert!(DiagonalState::maximally_mixed(21).is_err());
        assert!(DiagonalState::maximally_mixed(0).is_err());
    }

    #[test]
    fn polarization_examples() {
        let mixed = DiagonalState::maximally_mixed(3).unwrap();
        for q in 0..3 {
            assert_eq!(mixed.polarization(q).unwrap(), 0.0);
        }
        let s = DiagonalState::new(2, vec![0.275, 0.275, 0.225, 0.225]).unwrap();
        assert!((s.polarization(0).unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(s.polarization(1).unwrap(), 0.0);
        assert!(matches!(
            s.polarization(2),
            Err(HbacError::QubitOutOfRange {
                index: 2,
                qubits: 2
            })
        ));
    }

    #[test]
    fn trace_out_examples() {
        let s = DiagonalState::new(2, vec![0.3025, 0.2475, 0.2475, 0.2025]).unwrap();
        assert_close(s.trace_out(1).unwrap().populations(), &[0.55, 0.45], 1e-15);

        let bell = DiagonalState::new(2, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert_eq!(bell.trace_out(0).unwrap().populations(), &[0.5, 0.5]);

        assert_eq!(
            DiagonalState::maximally_mixed(1).unwrap().trace_out(0),
            Err(HbacError::TraceSingleQubit)
        );
        assert!(bell.trace_out(2).is_err());
    }

    #[test]
    fn trace_out_matches_direct_summation() {
        // qubit q of a 3-qubit index k = (b0 b1 b2)
        let p = [0.05, 0.2, 0.1, 0.15, 0.08, 0.12, 0.17, 0.13];
        let s = DiagonalState::new(3, p.to_vec()).unwrap();
        for q in 0..3 {
            let mut expected = vec![0.0; 4];
            for (k, &pk) in p.iter().enumerate() {
                let bits = [(k >> 2) & 1, (k >> 1) & 1, k & 1];
                let rest: Vec<usize> = (0..3).filter(|&i| i != q).map(|i| bits[i]).collect();
                expected[rest[0] * 2 + rest[1]] += pk;
            }
            assert_close(s.trace_out(q).unwrap().populations(), &expected, 1e-15);
        }
    }

    #[test]
    fn validation() {
        assert!(matches!(
            DiagonalState::new(1, vec![0.5, 0.5, 0.0]),
            Err(HbacError::LengthMismatch { .. })
        ));
        assert!(matches!(
            DiagonalState::new(1, vec![1.1, -0.1]),
            Err(HbacError::NegativePopulation { index: 1, .. })
        ));
        assert!(matches!(
            DiagonalState::new(1, vec![0.5, 0.4]),
            Err(HbacError::NotNormalized { .. })
        ));
        let clamped = DiagonalState::new(1, vec![1.0, -5e-16]).unwrap();
        assert_eq!(clamped.populations()[1], 0.0);
        assert_eq!(
            DiagonalState::from_populations(vec![0.25; 4])
                .unwrap()
                .num_qubits(),
            2
        );
        assert!(DiagonalState::from_populations(vec![0.5; 3]).is_err());
    }

    #[test]
    fn thermal_register_is_product() {
        let s = DiagonalState::thermal(3, bath(0.2)).unwrap();
        for q in 0..3 {
            assert!((s.polarization(q).unwrap() - 0.2).abs() < 1e-15);
        }
    }
}
