//! The small models every property check runs over.

use std::sync::Arc;

use crate::error::Result;
use crate::exact::BoundQuiverAlgebra;
use crate::model::interval::IntervalModel;
use crate::model::twoterm::TwoTermModel;
use crate::model::Handle;

/// `per[0,1](k)`.
pub fn field() -> Result<Handle> {
    Ok(Arc::new(TwoTermModel::new(BoundQuiverAlgebra::linear_a(1))?.with_name("per(k)")))
}

/// `per[0,1](k[x]/x²)`.
pub fn dual_numbers() -> Result<Handle> {
    Ok(Arc::new(TwoTermModel::new(BoundQuiverAlgebra::truncated_loop(2))?.with_name("per(k[x]/x²)")))
}

/// `per[0,1](kA₂)`.
pub fn a2() -> Result<Handle> {
    Ok(Arc::new(TwoTermModel::new(BoundQuiverAlgebra::linear_a(2))?.with_name("per(kA₂)")))
}

/// `mod(Λ_n)` for the linearly oriented `A_n`.
pub fn lambda(n: usize) -> Handle {
    Arc::new(IntervalModel::new(n))
}

pub fn all() -> Result<Vec<Handle>> {
    Ok(vec![field()?, dual_numbers()?, a2()?, lambda(2), lambda(3)])
}
