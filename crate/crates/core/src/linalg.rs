//! Thin wrappers over nalgebra's dense LU (partial pivoting).

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Largest system the exact solvers accept.
pub const DENSE_CAP: usize = 5000;

pub fn check_cap(what: &'static str, size: usize) -> Result<()> {
    if size > DENSE_CAP {
        Err(Error::TooLarge {
            what,
            size,
            cap: DENSE_CAP,
        })
    } else {
        Ok(())
    }
}

/// A factorized square matrix for repeated solves.
pub struct Factorized {
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    what: &'static str,
}

impl Factorized {
    pub fn new(a: DMatrix<f64>, what: &'static str) -> Result<Self> {
        let lu = a.lu();
        if !lu.is_invertible() {
            return Err(Error::Singular(what.into()));
        }
        Ok(Factorized { lu, what })
    }

    pub fn solve(&self, b: &DVector<f64>) -> Result<DVector<f64>> {
        let x = self
            .lu
            .solve(b)
            .ok_or_else(|| Error::Singular(self.what.into()))?;
        if x.iter().all(|v| v.is_finite()) {
            Ok(x)
        } else {
            Err(Error::Singular(self.what.into()))
        }
    }
}

pub fn solve(a: DMatrix<f64>, b: &DVector<f64>, what: &'static str) -> Result<DVector<f64>> {
    Factorized::new(a, what)?.solve(b)
}
