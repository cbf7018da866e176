use std::sync::Arc;

use super::MatrixLieGroup;
use crate::liealg::{AlgCovector, AlgVector};
use crate::numcore::{self, Matrix};
use crate::tolerances::MEMBERSHIP;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct GroupElement {
    group: Arc<MatrixLieGroup>,
    matrix: Matrix,
}

fn same_group(a: &MatrixLieGroup, b: &MatrixLieGroup) -> Result<()> {
    if a.name() == b.name() {
        Ok(())
    } else {
        Err(Error::GroupMismatch {
            left: a.name().to_string(),
            right: b.name().to_string(),
        })
    }
}

impl GroupElement {
    pub fn new(group: Arc<MatrixLieGroup>, matrix: Matrix) -> Result<Self> {
        let residual = group.membership_residual(&matrix);
        if !(residual < MEMBERSHIP) {
            return Err(Error::OffConstraint { residual });
        }
        Ok(Self { group, matrix })
    }

    pub fn identity(group: Arc<MatrixLieGroup>) -> Self {
        let matrix = group.identity();
        Self { group, matrix }
    }

    pub fn exp(group: Arc<MatrixLieGroup>, x: &AlgVector) -> Self {
        let matrix = group.exp(x);
        Self { group, matrix }
    }

    pub fn group(&self) -> &Arc<MatrixLieGroup> {
        &self.group
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        same_group(&self.group, &other.group)?;
        Ok(Self {
            group: self.group.clone(),
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(Self {
            group: self.group.clone(),
            matrix: numcore::inverse(&self.matrix)?,
        })
    }

    pub fn ad(&self, x: &AlgVector) -> Result<AlgVector> {
        self.group.ad(&self.matrix, x)
    }

    pub fn coadjoint(&self, theta: &AlgCovector) -> Result<AlgCovector> {
        self.group.coadjoint(&self.matrix, theta)
    }

    /// `T(L_self)(ξ)`: velocity `h V` at base `h g`.
    pub fn translate_left(&self, xi: &GroupTangent) -> Result<GroupTangent> {
        Ok(GroupTangent {
            base: self.mul(&xi.base)?,
            velocity: &self.matrix * &xi.velocity,
        })
    }

    /// `T(R_self)(ξ)`: velocity `V g` at base `h g`.
    pub fn translate_right(&self, xi: &GroupTangent) -> Result<GroupTangent> {
        Ok(GroupTangent {
            base: xi.base.mul(self)?,
            velocity: &xi.velocity * &self.matrix,
        })
    }
}

#[derive(Clone, Debug)]
pub struct GroupTangent {
    base: GroupElement,
    velocity: Matrix,
}

impl GroupTangent {
    /// Checks that `V g⁻¹` lies in the algebra span.
    pub fn new(base: GroupElement, velocity: Matrix) -> Result<Self> {
        let t = Self { base, velocity };
        t.right_trivialized()?;
        Ok(t)
    }

    /// The tangent vector `W g` for `W = Σ w_i E_i`.
    pub fn from_right_trivialized(base: GroupElement, w: &AlgVector) -> Self {
        let velocity = base.group.hat(w) * &base.matrix;
        Self { base, velocity }
    }

    pub fn zero(base: GroupElement) -> Self {
        let m = base.group.size();
        Self {
            base,
            velocity: Matrix::zeros(m, m),
        }
    }

    pub fn base(&self) -> &GroupElement {
        &self.base
    }

    pub fn velocity(&self) -> &Matrix {
        &self.velocity
    }

    /// Coordinates of `V g⁻¹`.
    pub fn right_trivialized(&self) -> Result<AlgVector> {
        let g_inv = numcore::inverse(&self.base.matrix)?;
        self.base.group.vee(&(&self.velocity * g_inv))
    }
}

/// `Y • X = T(L_h)(X) + T(R_g)(Y)` for `Y ∈ T_hG`, `X ∈ T_gG`.
pub fn tangent_group_mul(y: &GroupTangent, x: &GroupTangent) -> Result<GroupTangent> {
    same_group(&y.base.group, &x.base.group)?;
    let (h, g) = (&y.base.matrix, &x.base.matrix);
    Ok(GroupTangent {
        base: y.base.mul(&x.base)?,
        velocity: h * &x.velocity + &y.velocity * g,
    })
}

/// Right-trivialized covector at `g`: acts on `V` by `⟨μ, V g⁻¹⟩`.
#[derive(Clone, Debug)]
pub struct GroupCovector {
    pub base: GroupElement,
    pub mu: AlgCovector,
}

impl GroupCovector {
    pub fn pair(&self, xi: &GroupTangent) -> Result<f64> {
        same_group(&self.base.group, &xi.base.group)?;
        if (&self.base.matrix - &xi.base.matrix).amax() > MEMBERSHIP {
            return Err(Error::OffConstraint {
                residual: (&self.base.matrix - &xi.base.matrix).amax(),
            });
        }
        Ok(self.mu.dot(&xi.right_trivialized()?))
    }
}
