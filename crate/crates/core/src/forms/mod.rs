//! Diagonal cubic forms, the discriminant `Δ(F, c)` of the hyperplane
//! section `F = c·x = 0`, and its zero locus.

mod disc;
mod singular;

pub use disc::{disc_delta, e_exponent, is_smooth_section, DiscNormalization};
pub use singular::{
    enumerate_singular_c, enumerate_singular_c_brute, is_singular_c, square_class_decompose,
    SquareClass, SquareClassDecomposition,
};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// `F(x) = Σ F_i x_i³` with nonzero integer coefficients and `m ≥ 3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiagonalCubicForm {
    coeffs: Vec<i64>,
}

impl DiagonalCubicForm {
    pub fn new(coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() < 3 {
            return domain(format!("need at least 3 variables, got {}", coeffs.len()));
        }
        if coeffs.iter().any(|&f| f == 0) {
            return domain("diagonal coefficients must be nonzero");
        }
        Ok(DiagonalCubicForm { coeffs })
    }

    /// `x_1³ + … + x_m³`.
    pub fn fermat(m: usize) -> Result<Self> {
        Self::new(vec![1; m])
    }

    pub fn m(&self) -> usize {
        self.coeffs.len()
    }

    /// `m − 3`, the dimension of a smooth hyperplane section.
    pub fn m_star(&self) -> usize {
        self.coeffs.len() - 3
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn eval(&self, x: &[i64]) -> i128 {
        self.coeffs
            .iter()
            .zip(x)
            .map(|(&f, &v)| f as i128 * (v as i128).pow(3))
            .sum()
    }

    /// `λF`.
    pub fn scaled(&self, lambda: i64) -> Result<Self> {
        Self::new(self.coeffs.iter().map(|f| f * lambda).collect())
    }

    /// Apply an index permutation: coefficient `i` of the result is `F_{σ(i)}`.
    pub fn permuted(&self, sigma: &[usize]) -> Self {
        DiagonalCubicForm {
            coeffs: sigma.iter().map(|&i| self.coeffs[i]).collect(),
        }
    }
}

/// The dual vector `c` (coefficients of the hyperplane `c·x = 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CVector(pub Vec<i64>);

impl CVector {
    pub fn new(c: Vec<i64>) -> Self {
        CVector(c)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// `e_i` (1-based index `i`) in dimension `m`.
    pub fn unit(m: usize, i: usize) -> Self {
        let mut v = vec![0; m];
        v[i - 1] = 1;
        CVector(v)
    }

    pub fn max_abs(&self) -> u64 {
        self.0.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
    }
}

pub(crate) fn check_pair(f: &DiagonalCubicForm, c: &CVector) -> Result<()> {
    if f.m() != c.len() {
        return domain(format!("form has {} variables but c has {}", f.m(), c.len()));
    }
    Ok(())
}
