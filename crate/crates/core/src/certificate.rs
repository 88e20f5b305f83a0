//! Gauge certificates `(H_U, H_V)` witnessing `H_V · T · H_U⁻¹ ≡ T'`.
//!
//! An exact certificate has constant nonzero determinants and proves the
//! identity in the Laurent ring. A certificate of order `N` proves it modulo
//! `u^{N+1}`; its determinants need only be units of the jet ring whose `u⁰`
//! part is a nonzero constant, which is what invertibility on a neighborhood
//! of `ℓ` requires of a truncated gauge.

use std::fmt;

use crate::algebra::Mat2;
use crate::charts::{mat_holomorphic_u, mat_holomorphic_v};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CongruenceOrder {
    Exact,
    UpTo(u32),
}

impl CongruenceOrder {
    pub fn min(self, other: Self) -> Self {
        match (self, other) {
            (CongruenceOrder::Exact, o) | (o, CongruenceOrder::Exact) => o,
            (CongruenceOrder::UpTo(a), CongruenceOrder::UpTo(b)) => CongruenceOrder::UpTo(a.min(b)),
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            CongruenceOrder::Exact => None,
            CongruenceOrder::UpTo(n) => Some(n),
        }
    }
}

impl fmt::Display for CongruenceOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CongruenceOrder::Exact => write!(f, "exact"),
            CongruenceOrder::UpTo(n) => write!(f, "mod u^{}", n + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertificateError {
    #[error("H_U is not holomorphic on U")]
    NotHolomorphicU,
    #[error("H_V is not holomorphic on V")]
    NotHolomorphicV,
    #[error("determinant of {0} is not an admissible unit")]
    BadDeterminant(&'static str),
    #[error("gauge identity fails at {0}")]
    IdentityFails(CongruenceOrder),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeCertificate {
    pub k: u32,
    pub h_u: Mat2,
    pub h_v: Mat2,
    pub order: CongruenceOrder,
}

impl GaugeCertificate {
    pub fn identity(k: u32) -> Self {
        GaugeCertificate {
            k,
            h_u: Mat2::identity(),
            h_v: Mat2::identity(),
            order: CongruenceOrder::Exact,
        }
    }

    fn det_ok(&self, h: &Mat2) -> bool {
        let det = h.det();
        match self.order {
            CongruenceOrder::Exact => det.as_constant().is_some_and(|c| !c.is_zero()),
            CongruenceOrder::UpTo(_) => {
                det.at_u_zero().as_constant().is_some_and(|c| !c.is_zero())
            }
        }
    }

    /// Checks chart holomorphicity, determinant units and
    /// `H_V · source ≡ target · H_U` at the stated order.
    pub fn verify(&self, source: &Mat2, target: &Mat2) -> Result<(), CertificateError> {
        if !mat_holomorphic_u(&self.h_u) {
            return Err(CertificateError::NotHolomorphicU);
        }
        if !mat_holomorphic_v(&self.h_v, self.k) {
            return Err(CertificateError::NotHolomorphicV);
        }
        if !self.det_ok(&self.h_u) {
            return Err(CertificateError::BadDeterminant("H_U"));
        }
        if !self.det_ok(&self.h_v) {
            return Err(CertificateError::BadDeterminant("H_V"));
        }
        let holds = match self.order {
            CongruenceOrder::Exact => &self.h_v * source == target * &self.h_u,
            CongruenceOrder::UpTo(n) => {
                self.h_v.mul_trunc(source, n) == target.mul_trunc(&self.h_u, n)
            }
        };
        if holds {
            Ok(())
        } else {
            Err(CertificateError::IdentityFails(self.order))
        }
    }

    /// Certificate for `target → source`.
    pub fn inverse(&self) -> Option<Self> {
        let (h_u, h_v) = match self.order {
            CongruenceOrder::Exact => (self.h_u.inverse_laurent()?, self.h_v.inverse_laurent()?),
            CongruenceOrder::UpTo(n) => (self.h_u.jet_inverse(n)?, self.h_v.jet_inverse(n)?),
        };
        Some(GaugeCertificate { k: self.k, h_u, h_v, order: self.order })
    }

    /// If `self: A → B` and `next: B → C`, returns `A → C`.
    pub fn then(&self, next: &GaugeCertificate) -> Self {
        let order = self.order.min(next.order);
        let (h_u, h_v) = match order {
            CongruenceOrder::Exact => (&next.h_u * &self.h_u, &next.h_v * &self.h_v),
            CongruenceOrder::UpTo(n) => {
                (next.h_u.mul_trunc(&self.h_u, n), next.h_v.mul_trunc(&self.h_v, n))
            }
        };
        GaugeCertificate { k: self.k, h_u, h_v, order }
    }

    /// Weakens an exact certificate to a finite order, truncating the gauges.
    pub fn truncated(&self, n: u32) -> Self {
        let order = self.order.min(CongruenceOrder::UpTo(n));
        let n = order.finite().expect("finite after min");
        GaugeCertificate {
            k: self.k,
            h_u: self.h_u.truncate_u(n),
            h_v: self.h_v.truncate_u(n),
            order,
        }
    }
}
