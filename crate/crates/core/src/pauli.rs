//! Index types and exact primitives of the n-qubit Pauli measurement design.
//!
//! Three index spaces appear everywhere:
//!
//! * [`BasisLabel`] `b ∈ {I,x,y,z}ⁿ` indexes the Pauli expansion basis (4ⁿ items),
//! * [`Setting`] `a ∈ {x,y,z}ⁿ` is one measurement configuration (3ⁿ items),
//! * [`Outcome`] `r ∈ {−1,+1}ⁿ` is one observed sign pattern (2ⁿ items).
//!
//! All three enumerate in lexicographic order with position 1 (the leftmost
//! character of the string form) most significant, `I < x < y < z` and `− < +`.
//! The enumeration index of an item is its rank in that order, so vectors
//! indexed by labels or by `(setting, outcome)` pairs are reproducible.
//!
//! Qubit 1 is also the most significant bit of the computational basis index,
//! i.e. `σ_b = σ_{b1} ⊗ … ⊗ σ_{bn}` with the usual Kronecker layout.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;

/// Default upper bound on the qubit count (dimension 4096).
pub const DEFAULT_MAX_QUBITS: usize = 12;

/// Largest `n` for which the brute-force Gram oracle runs (6ⁿ·... work).
pub const GRAM_ORACLE_MAX_QUBITS: usize = 6;

/// Number of qubits, validated against a configurable upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitCount(usize);

impl QubitCount {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_limit(n, DEFAULT_MAX_QUBITS)
    }

    pub fn with_limit(n: usize, limit: usize) -> Result<Self> {
        if n == 0 || n > limit {
            return Err(Error::QubitLimit { n, limit });
        }
        Ok(Self(n))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Hilbert-space dimension 2ⁿ.
    pub fn dim(self) -> usize {
        1 << self.0
    }

    pub fn num_labels(self) -> usize {
        4usize.pow(self.0 as u32)
    }

    pub fn num_settings(self) -> usize {
        3usize.pow(self.0 as u32)
    }

    pub fn num_outcomes(self) -> usize {
        self.dim()
    }
}

impl fmt::Display for QubitCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Single-qubit Pauli operator, including the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// Measurement axis of one qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Eigenvalue observed on one qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    fn digit(self) -> usize {
        self as usize
    }

    pub fn axis(self) -> Option<Axis> {
        match self {
            Pauli::I => None,
            Pauli::X => Some(Axis::X),
            Pauli::Y => Some(Axis::Y),
            Pauli::Z => Some(Axis::Z),
        }
    }

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'i',
            Pauli::X => 'x',
            Pauli::Y => 'y',
            Pauli::Z => 'z',
        }
    }

    /// The 2x2 matrix `σ_I`, `σ_x`, `σ_y` or `σ_z`.
    pub fn matrix(self) -> DMatrix<Complex64> {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let entries = match self {
            Pauli::I => [l, o, o, l],
            Pauli::X => [o, l, l, o],
            Pauli::Y => [o, -i, i, o],
            Pauli::Z => [l, o, o, -l],
        };
        DMatrix::from_row_slice(2, 2, &entries)
    }
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    fn digit(self) -> usize {
        self as usize
    }

    pub fn pauli(self) -> Pauli {
        match self {
            Axis::X => Pauli::X,
            Axis::Y => Pauli::Y,
            Axis::Z => Pauli::Z,
        }
    }

    fn symbol(self) -> char {
        self.pauli().symbol()
    }
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Minus => -1,
            Sign::Plus => 1,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Plus => '+',
        }
    }
}

/// Projector onto the eigenvector of `σ_axis` with eigenvalue `sign`:
/// `(I + s·σ_t) / 2`.
pub fn single_projector(axis: Axis, sign: Sign) -> DMatrix<Complex64> {
    let id = Pauli::I.matrix();
    let s = f64::from(sign.value());
    (id + axis.pauli().matrix().scale(s)).scale(0.5)
}

macro_rules! index_type {
    ($name:ident, $sym:ty, $radix:expr, $field:ident) => {
        impl $name {
            pub fn new($field: Vec<$sym>) -> Self {
                Self($field)
            }

            /// Number of qubits.
            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn $field(&self) -> &[$sym] {
                &self.0
            }

            /// Rank of this item in the lexicographic enumeration.
            pub fn index(&self) -> usize {
                self.0.iter().fold(0, |acc, s| acc * $radix + s.digit())
            }

            /// Inverse of [`Self::index`] for `n` qubits.
            pub fn from_index(n: usize, mut index: usize) -> Self {
                let mut items = Vec::with_capacity(n);
                for _ in 0..n {
                    items.push(<$sym>::from_digit(index % $radix));
                    index /= $radix;
                }
                items.reverse();
                Self(items)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                for s in &self.0 {
                    write!(f, "{}", s.symbol())?;
                }
                Ok(())
            }
        }
    };
}

trait Digit: Sized {
    fn from_digit(d: usize) -> Self;
    fn digit(self) -> usize;
}

impl Digit for Pauli {
    fn from_digit(d: usize) -> Self {
        Pauli::ALL[d]
    }
    fn digit(self) -> usize {
        Pauli::digit(self)
    }
}

impl Digit for Axis {
    fn from_digit(d: usize) -> Self {
        Axis::ALL[d]
    }
    fn digit(self) -> usize {
        Axis::digit(self)
    }
}

impl Digit for Sign {
    fn from_digit(d: usize) -> Self {
        if d == 0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
    fn digit(self) -> usize {
        match self {
            Sign::Minus => 0,
            Sign::Plus => 1,
        }
    }
}

/// Element of `{I,x,y,z}ⁿ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisLabel(Vec<Pauli>);

/// Element of `{x,y,z}ⁿ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Setting(Vec<Axis>);

/// Element of `{−1,+1}ⁿ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Outcome(Vec<Sign>);

index_type!(BasisLabel, Pauli, 4, paulis);
index_type!(Setting, Axis, 3, axes);
index_type!(Outcome, Sign, 2, signs);

impl BasisLabel {
    pub fn identity(n: usize) -> Self {
        Self(vec![Pauli::I; n])
    }

    /// `d(b)`: number of identity positions.
    pub fn degree(&self) -> usize {
        self.0.iter().filter(|p| **p == Pauli::I).count()
    }

    /// Bitmask (qubit 1 = most significant) of positions that are not `I`.
    pub(crate) fn support_mask(&self) -> usize {
        let n = self.len();
        self.0
            .iter()
            .enumerate()
            .filter(|(_, p)| **p != Pauli::I)
            .fold(0, |acc, (j, _)| acc | (1 << (n - 1 - j)))
    }
}

impl Setting {
    pub fn uniform(n: usize, axis: Axis) -> Self {
        Self(vec![axis; n])
    }
}

impl FromStr for BasisLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_symbols(s, "basis label", |c| match c {
            'i' => Some(Pauli::I),
            'x' => Some(Pauli::X),
            'y' => Some(Pauli::Y),
            'z' => Some(Pauli::Z),
            _ => None,
        })
        .map(Self)
    }
}

impl FromStr for Setting {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_symbols(s, "setting", |c| match c {
            'x' => Some(Axis::X),
            'y' => Some(Axis::Y),
            'z' => Some(Axis::Z),
            _ => None,
        })
        .map(Self)
    }
}

impl FromStr for Outcome {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_symbols(s, "outcome", |c| match c {
            '+' => Some(Sign::Plus),
            '-' => Some(Sign::Minus),
            _ => None,
        })
        .map(Self)
    }
}

fn parse_symbols<T>(s: &str, what: &str, f: impl Fn(char) -> Option<T>) -> Result<Vec<T>> {
    if s.is_empty() {
        return Err(Error::Parse(format!("empty {what}")));
    }
    s.chars()
        .map(|c| {
            f(c).ok_or_else(|| Error::Parse(format!("invalid character {c:?} in {what} {s:?}")))
        })
        .collect()
}

/// `d(b)`, the number of identity positions of `b`.
pub fn degree(b: &BasisLabel) -> usize {
    b.degree()
}

fn same_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::LengthMismatch { expected, found });
    }
    Ok(())
}

/// Entry `P_{(r,a),b} = ∏_{j∉E_b} r_j·𝟙(a_j = b_j)` of the design operator.
pub fn design_entry(r: &Outcome, a: &Setting, b: &BasisLabel) -> Result<i8> {
    let n = b.len();
    same_len(n, a.len())?;
    same_len(n, r.len())?;
    let mut value = 1i8;
    for ((bj, aj), rj) in b.paulis().iter().zip(a.axes()).zip(r.signs()) {
        match bj.axis() {
            None => {}
            Some(axis) if axis == *aj => value *= rj.value(),
            Some(_) => return Ok(0),
        }
    }
    Ok(value)
}

/// Sparse action of `σ_b`: each row has exactly one nonzero entry.
///
/// `σ_b[row, row ^ flip] = base · (−1)^{popcount(row & sign_mask)}`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PauliAction {
    pub flip: usize,
    pub sign_mask: usize,
    pub base: Complex64,
}

impl PauliAction {
    pub fn new(b: &BasisLabel) -> Self {
        let n = b.len();
        let mut flip = 0;
        let mut sign_mask = 0;
        let mut ny = 0u32;
        for (j, p) in b.paulis().iter().enumerate() {
            let bit = 1 << (n - 1 - j);
            match p {
                Pauli::I => {}
                Pauli::X => flip |= bit,
                Pauli::Y => {
                    flip |= bit;
                    sign_mask |= bit;
                    ny += 1;
                }
                Pauli::Z => sign_mask |= bit,
            }
        }
        // σ_y has −i in row 0 and +i in row 1: (−i) per y, times a row sign.
        let base = match ny % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, -1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, 1.0),
        };
        Self {
            flip,
            sign_mask,
            base,
        }
    }

    #[inline]
    pub fn entry(&self, row: usize) -> (usize, Complex64) {
        let v = if (row & self.sign_mask).count_ones().is_multiple_of(2) {
            self.base
        } else {
            -self.base
        };
        (row ^ self.flip, v)
    }
}

/// Dense `σ_b = σ_{b1} ⊗ … ⊗ σ_{bn}`.
pub fn pauli_matrix(b: &BasisLabel) -> Result<HermitianMatrix> {
    let n = QubitCount::new(b.len())?;
    let dim = n.dim();
    let action = PauliAction::new(b);
    let mut m = DMatrix::zeros(dim, dim);
    for row in 0..dim {
        let (col, v) = action.entry(row);
        m[(row, col)] = v;
    }
    HermitianMatrix::new(m)
}

/// `P_r^a = P_{r1}^{a1} ⊗ … ⊗ P_{rn}^{an}`.
pub fn projector(a: &Setting, r: &Outcome) -> Result<HermitianMatrix> {
    same_len(a.len(), r.len())?;
    QubitCount::new(a.len())?;
    let mut m = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
    for (axis, sign) in a.axes().iter().zip(r.signs()) {
        m = m.kronecker(&single_projector(*axis, *sign));
    }
    HermitianMatrix::new(m)
}

/// All 4ⁿ basis labels in enumeration order.
pub fn labels(n: QubitCount) -> impl Iterator<Item = BasisLabel> {
    let k = n.get();
    (0..n.num_labels()).map(move |i| BasisLabel::from_index(k, i))
}

/// All 3ⁿ settings in enumeration order.
pub fn settings(n: QubitCount) -> impl Iterator<Item = Setting> {
    let k = n.get();
    (0..n.num_settings()).map(move |i| Setting::from_index(k, i))
}

/// All 2ⁿ outcomes in enumeration order.
pub fn outcomes(n: QubitCount) -> impl Iterator<Item = Outcome> {
    let k = n.get();
    (0..n.num_outcomes()).map(move |i| Outcome::from_index(k, i))
}

/// `(PᵀP)_{b1,b2}` by brute-force summation over all `(r, a)` pairs.
pub fn gram_entry(b1: &BasisLabel, b2: &BasisLabel) -> Result<i64> {
    let n = b1.len();
    same_len(n, b2.len())?;
    if n > GRAM_ORACLE_MAX_QUBITS {
        return Err(Error::CostGuard {
            n,
            limit: GRAM_ORACLE_MAX_QUBITS,
        });
    }
    let q = QubitCount::new(n)?;
    let mut sum = 0i64;
    for a in settings(q) {
        for r in outcomes(q) {
            let e1 = design_entry(&r, &a, b1)?;
            if e1 == 0 {
                continue;
            }
            sum += i64::from(e1) * i64::from(design_entry(&r, &a, b2)?);
        }
    }
    Ok(sum)
}
