//! Vectors, covectors, and the bilinear pairing between them.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) fn ensure_finite_slice(entries: &[Complex64], what: &'static str) -> Result<()> {
    if entries
        .iter()
        .all(|z| z.re.is_finite() && z.im.is_finite())
    {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

pub(crate) fn ensure_finite_matrix(m: &DMatrix<Complex64>, what: &'static str) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Element of the state space `V`.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(DVector<Complex64>);

/// Element of the dual space `V*`. A separate type from [`Vector`] so the
/// pairing cannot be fed two vectors by accident.
#[derive(Debug, Clone, PartialEq)]
pub struct Covector(DVector<Complex64>);

macro_rules! impl_dual_pair {
    ($name:ident, $what:literal) => {
        impl $name {
            pub fn from_entries(entries: Vec<Complex64>) -> Result<Self> {
                if entries.is_empty() {
                    return Err(Error::InvalidInput(concat!($what, " must be nonempty").into()));
                }
                ensure_finite_slice(&entries, $what)?;
                Ok(Self(DVector::from_vec(entries)))
            }

            /// Convenience constructor from real entries.
            pub fn from_real(entries: &[f64]) -> Result<Self> {
                Self::from_entries(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn norm(&self) -> f64 {
                self.0.norm()
            }

            pub fn entries(&self) -> &[Complex64] {
                self.0.as_slice()
            }

            #[allow(dead_code)]
            pub(crate) fn as_dvector(&self) -> &DVector<Complex64> {
                &self.0
            }

            /// `self + coeff * other`, used by the soliton polarization updates.
            pub fn add_scaled(&self, coeff: Complex64, other: &Self) -> Result<Self> {
                if self.len() != other.len() {
                    return Err(Error::DimensionMismatch {
                        context: $what,
                        left: self.len(),
                        right: other.len(),
                    });
                }
                Ok(Self(&self.0 + &other.0 * coeff))
            }
        }
    };
}

impl_dual_pair!(Vector, "vector");
impl_dual_pair!(Covector, "covector");

/// Canonical bilinear pairing `(xi, eta) = sum_i xi_i eta_i`.
///
/// No conjugation takes place: this couples `V` with `V*` and is bilinear,
/// not a Hermitian inner product.
pub fn pairing(xi: &Vector, eta: &Covector) -> Result<Complex64> {
    if xi.len() != eta.len() {
        return Err(Error::LengthMismatch {
            vector: xi.len(),
            covector: eta.len(),
        });
    }
    Ok(xi
        .entries()
        .iter()
        .zip(eta.entries())
        .map(|(a, b)| a * b)
        .sum())
}

/// Outer product `xi (x) eta` as a dense matrix, `(xi (x) eta) v = (v, eta) xi`.
pub fn outer(xi: &Vector, eta: &Covector) -> Result<DMatrix<Complex64>> {
    if xi.len() != eta.len() {
        return Err(Error::LengthMismatch {
            vector: xi.len(),
            covector: eta.len(),
        });
    }
    let n = xi.len();
    Ok(DMatrix::from_fn(n, n, |i, j| {
        xi.entries()[i] * eta.entries()[j]
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pairing_disjoint_supports_vanishes() {
        let xi = Vector::from_real(&[1.0, 0.0]).unwrap();
        let eta = Covector::from_real(&[0.0, 1.0]).unwrap();
        assert_eq!(pairing(&xi, &eta).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn pairing_direct_sum() {
        let xi = Vector::from_real(&[1.0, 1.0]).unwrap();
        let eta = Covector::from_real(&[2.0, 0.0]).unwrap();
        assert_eq!(pairing(&xi, &eta).unwrap(), c(2.0, 0.0));
    }

    #[test]
    fn pairing_is_bilinear_not_sesquilinear() {
        // (i, 1) paired with (i, 1) gives i*i + 1*1 = 0; a Hermitian product
        // would give 2.
        let xi = Vector::from_entries(vec![c(0.0, 1.0), c(1.0, 0.0)]).unwrap();
        let eta = Covector::from_entries(vec![c(0.0, 1.0), c(1.0, 0.0)]).unwrap();
        let p = pairing(&xi, &eta).unwrap();
        assert!(p.norm() < 1e-15);
    }

    #[test]
    fn pairing_length_mismatch() {
        let xi = Vector::from_real(&[1.0, 0.0]).unwrap();
        let eta = Covector::from_real(&[1.0]).unwrap();
        assert!(matches!(
            pairing(&xi, &eta),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn constructors_reject_non_finite() {
        assert!(matches!(
            Vector::from_entries(vec![c(f64::NAN, 0.0)]),
            Err(Error::NonFinite(_))
        ));
        assert!(matches!(
            Covector::from_real(&[f64::INFINITY]),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn outer_matches_by_hand() {
        let xi = Vector::from_real(&[1.0, 1.0]).unwrap();
        let eta = Covector::from_real(&[2.0, 0.0]).unwrap();
        let m = outer(&xi, &eta).unwrap();
        assert_eq!(m[(0, 0)], c(2.0, 0.0));
        assert_eq!(m[(1, 0)], c(2.0, 0.0));
        assert_eq!(m[(0, 1)], c(0.0, 0.0));
        assert_eq!(m[(1, 1)], c(0.0, 0.0));
    }
}
