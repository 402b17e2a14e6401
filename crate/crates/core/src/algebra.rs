//! Group identifiers, tangent-vector layouts and the wedge / curlywedge maps.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{canonical_skew, set_block, skew2, skew3, Mat3, MatN, Vec2, Vec3, VecN};

/// The twelve matrix representations handled by the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupId {
    So2,
    Se2,
    AdSe2,
    So3,
    Se3,
    AdSe3,
    Se23,
    AdSe23,
    SGal3,
    AdSGal3,
    Sim3,
    AdSim3,
}

impl GroupId {
    pub const ALL: [GroupId; 12] = [
        GroupId::So2,
        GroupId::Se2,
        GroupId::AdSe2,
        GroupId::So3,
        GroupId::Se3,
        GroupId::AdSe3,
        GroupId::Se23,
        GroupId::AdSe23,
        GroupId::SGal3,
        GroupId::AdSGal3,
        GroupId::Sim3,
        GroupId::AdSim3,
    ];

    /// Groups that carry their own tangent-vector layout.
    pub const BASE: [GroupId; 7] = [
        GroupId::So2,
        GroupId::Se2,
        GroupId::So3,
        GroupId::Se3,
        GroupId::Se23,
        GroupId::SGal3,
        GroupId::Sim3,
    ];

    /// Side length of the square matrices representing this group.
    pub fn dim(self) -> usize {
        match self {
            GroupId::So2 => 2,
            GroupId::Se2 | GroupId::AdSe2 | GroupId::So3 => 3,
            GroupId::Se3 | GroupId::Sim3 => 4,
            GroupId::Se23 | GroupId::SGal3 => 5,
            GroupId::AdSe3 => 6,
            GroupId::AdSim3 => 7,
            GroupId::AdSe23 => 9,
            GroupId::AdSGal3 => 10,
        }
    }

    pub fn is_adjoint(self) -> bool {
        matches!(
            self,
            GroupId::AdSe2 | GroupId::AdSe3 | GroupId::AdSe23 | GroupId::AdSGal3 | GroupId::AdSim3
        )
    }

    /// The group whose tangent vectors parameterize this representation.
    pub fn base(self) -> GroupId {
        match self {
            GroupId::AdSe2 => GroupId::Se2,
            GroupId::AdSe3 => GroupId::Se3,
            GroupId::AdSe23 => GroupId::Se23,
            GroupId::AdSGal3 => GroupId::SGal3,
            GroupId::AdSim3 => GroupId::Sim3,
            g => g,
        }
    }

    /// The adjoint representation of a base group. SO(3) is self-adjoint and
    /// SO(2) has the degenerate scalar adjoint, so both map to themselves.
    pub fn adjoint(self) -> GroupId {
        match self.base() {
            GroupId::Se2 => GroupId::AdSe2,
            GroupId::Se3 => GroupId::AdSe3,
            GroupId::Se23 => GroupId::AdSe23,
            GroupId::SGal3 => GroupId::AdSGal3,
            GroupId::Sim3 => GroupId::AdSim3,
            g => g,
        }
    }

    /// Length of the coordinate vector of the base group.
    pub fn tangent_dim(self) -> usize {
        match self.base() {
            GroupId::So2 => 1,
            GroupId::Se2 | GroupId::So3 => 3,
            GroupId::Se3 => 6,
            GroupId::Sim3 => 7,
            GroupId::Se23 => 9,
            GroupId::SGal3 => 10,
            _ => unreachable!("base() only returns base groups"),
        }
    }

    /// Side length of the adjoint-algebra matrix produced by `curlywedge`.
    pub fn adjoint_dim(self) -> usize {
        match self.base() {
            GroupId::So2 => 1,
            g => g.tangent_dim(),
        }
    }

    /// Human-readable coordinate layout of the base group.
    pub fn layout(self) -> &'static str {
        match self.base() {
            GroupId::So2 => "phi",
            GroupId::Se2 => "rho_x,rho_y,phi",
            GroupId::So3 => "phi_x,phi_y,phi_z",
            GroupId::Se3 => "rho(3),phi(3)",
            GroupId::Se23 => "rho(3),nu(3),phi(3)",
            GroupId::SGal3 => "rho(3),nu(3),phi(3),tau",
            GroupId::Sim3 => "rho(3),phi(3),lambda",
            _ => unreachable!("base() only returns base groups"),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GroupId::So2 => "SO2",
            GroupId::Se2 => "SE2",
            GroupId::AdSe2 => "AdSE2",
            GroupId::So3 => "SO3",
            GroupId::Se3 => "SE3",
            GroupId::AdSe3 => "AdSE3",
            GroupId::Se23 => "SE23",
            GroupId::AdSe23 => "AdSE23",
            GroupId::SGal3 => "SGal3",
            GroupId::AdSGal3 => "AdSGal3",
            GroupId::Sim3 => "Sim3",
            GroupId::AdSim3 => "AdSim3",
        }
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GroupId {
    type Err = Error;

    /// Case-insensitive; punctuation such as `_`, `-`, `(` and `)` is ignored,
    /// so `se3`, `SE(3)`, `ad-se3` and `SE_2(3)` all parse.
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        GroupId::ALL
            .iter()
            .copied()
            .find(|g| g.name().to_ascii_lowercase() == key)
            .ok_or_else(|| Error::UnknownGroup(s.to_string()))
    }
}

/// A Lie-algebra coordinate vector tagged with its group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TangentVector {
    So2 { phi: f64 },
    Se2 { rho: Vec2, phi: f64 },
    So3 { phi: Vec3 },
    Se3 { rho: Vec3, phi: Vec3 },
    Se23 { rho: Vec3, nu: Vec3, phi: Vec3 },
    SGal3 { rho: Vec3, nu: Vec3, phi: Vec3, tau: f64 },
    Sim3 { rho: Vec3, phi: Vec3, lambda: f64 },
}

fn v3(c: &[f64]) -> Vec3 {
    Vec3::new(c[0], c[1], c[2])
}

impl TangentVector {
    /// Builds a tangent vector from coordinates in the group's printed order.
    pub fn new(group: GroupId, coords: &[f64]) -> Result<Self> {
        if group.is_adjoint() {
            return Err(Error::AdjointGroupNotSupported(group));
        }
        let expected = group.tangent_dim();
        if coords.len() != expected {
            return Err(Error::LayoutMismatch {
                group,
                expected,
                got: coords.len(),
                layout: group.layout(),
            });
        }
        let c = coords;
        Ok(match group {
            GroupId::So2 => TangentVector::So2 { phi: c[0] },
            GroupId::Se2 => TangentVector::Se2 {
                rho: Vec2::new(c[0], c[1]),
                phi: c[2],
            },
            GroupId::So3 => TangentVector::So3 { phi: v3(c) },
            GroupId::Se3 => TangentVector::Se3 {
                rho: v3(c),
                phi: v3(&c[3..]),
            },
            GroupId::Se23 => TangentVector::Se23 {
                rho: v3(c),
                nu: v3(&c[3..]),
                phi: v3(&c[6..]),
            },
            GroupId::SGal3 => TangentVector::SGal3 {
                rho: v3(c),
                nu: v3(&c[3..]),
                phi: v3(&c[6..]),
                tau: c[9],
            },
            GroupId::Sim3 => TangentVector::Sim3 {
                rho: v3(c),
                phi: v3(&c[3..]),
                lambda: c[6],
            },
            _ => unreachable!("adjoint ids rejected above"),
        })
    }

    pub fn from_vector(group: GroupId, v: &VecN) -> Result<Self> {
        Self::new(group, v.as_slice())
    }

    pub fn zero(group: GroupId) -> Result<Self> {
        Self::new(group, &vec![0.0; group.base().tangent_dim()])
    }

    pub fn group(&self) -> GroupId {
        match self {
            TangentVector::So2 { .. } => GroupId::So2,
            TangentVector::Se2 { .. } => GroupId::Se2,
            TangentVector::So3 { .. } => GroupId::So3,
            TangentVector::Se3 { .. } => GroupId::Se3,
            TangentVector::Se23 { .. } => GroupId::Se23,
            TangentVector::SGal3 { .. } => GroupId::SGal3,
            TangentVector::Sim3 { .. } => GroupId::Sim3,
        }
    }

    pub fn coords(&self) -> Vec<f64> {
        match *self {
            TangentVector::So2 { phi } => vec![phi],
            TangentVector::Se2 { rho, phi } => vec![rho.x, rho.y, phi],
            TangentVector::So3 { phi } => phi.iter().copied().collect(),
            TangentVector::Se3 { rho, phi } => rho.iter().chain(phi.iter()).copied().collect(),
            TangentVector::Se23 { rho, nu, phi } => rho.iter().chain(nu.iter()).chain(phi.iter()).copied().collect(),
            TangentVector::SGal3 { rho, nu, phi, tau } => rho
                .iter()
                .chain(nu.iter())
                .chain(phi.iter())
                .copied()
                .chain(std::iter::once(tau))
                .collect(),
            TangentVector::Sim3 { rho, phi, lambda } => rho
                .iter()
                .chain(phi.iter())
                .copied()
                .chain(std::iter::once(lambda))
                .collect(),
        }
    }

    pub fn to_vector(&self) -> VecN {
        VecN::from_vec(self.coords())
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        let c: Vec<f64> = self.coords().into_iter().map(f).collect();
        Self::new(self.group(), &c).expect("layout is preserved")
    }

    pub fn scaled(&self, a: f64) -> Self {
        self.map(|x| a * x)
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: f64, other: &Self) -> Result<Self> {
        if self.group() != other.group() {
            return Err(Error::GroupMismatch {
                expected: self.group(),
                got: other.group(),
            });
        }
        let c: Vec<f64> = self
            .coords()
            .iter()
            .zip(other.coords())
            .map(|(x, y)| x + a * y)
            .collect();
        Self::new(self.group(), &c)
    }

    /// Rotation-angle magnitude ‖φ‖ (|φ| for the planar groups).
    pub fn angle(&self) -> f64 {
        match self {
            TangentVector::So2 { phi } | TangentVector::Se2 { phi, .. } => phi.abs(),
            TangentVector::So3 { phi }
            | TangentVector::Se3 { phi, .. }
            | TangentVector::Se23 { phi, .. }
            | TangentVector::SGal3 { phi, .. }
            | TangentVector::Sim3 { phi, .. } => phi.norm(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.to_vector().norm()
    }
}

/// Lie-algebra matrix `ξ^∧`.
pub fn wedge(xi: &TangentVector) -> MatN {
    let n = xi.group().dim();
    let mut m = MatN::zeros(n, n);
    match *xi {
        TangentVector::So2 { phi } => set_block(&mut m, 0, 0, &skew2(phi)),
        TangentVector::Se2 { rho, phi } => {
            set_block(&mut m, 0, 0, &skew2(phi));
            set_block(&mut m, 0, 2, &rho);
        }
        TangentVector::So3 { phi } => set_block(&mut m, 0, 0, &skew3(&phi)),
        TangentVector::Se3 { rho, phi } => {
            set_block(&mut m, 0, 0, &skew3(&phi));
            set_block(&mut m, 0, 3, &rho);
        }
        TangentVector::Se23 { rho, nu, phi } => {
            set_block(&mut m, 0, 0, &skew3(&phi));
            set_block(&mut m, 0, 3, &nu);
            set_block(&mut m, 0, 4, &rho);
        }
        TangentVector::SGal3 { rho, nu, phi, tau } => {
            set_block(&mut m, 0, 0, &skew3(&phi));
            set_block(&mut m, 0, 3, &nu);
            set_block(&mut m, 0, 4, &rho);
            m[(3, 4)] = tau;
        }
        TangentVector::Sim3 { rho, phi, lambda } => {
            set_block(&mut m, 0, 0, &skew3(&phi));
            set_block(&mut m, 0, 3, &rho);
            m[(3, 3)] = -lambda;
        }
    }
    m
}

/// Adjoint-algebra matrix `ξ^⋏`. SO(2) yields the 1×1 zero matrix.
pub fn curlywedge(xi: &TangentVector) -> MatN {
    let n = xi.group().adjoint_dim();
    let mut m = MatN::zeros(n, n);
    match *xi {
        TangentVector::So2 { .. } => {}
        TangentVector::Se2 { rho, phi } => {
            set_block(&mut m, 0, 0, &skew2(phi));
            set_block(&mut m, 0, 2, &(-(canonical_skew() * rho)));
        }
        TangentVector::So3 { phi } => set_block(&mut m, 0, 0, &skew3(&phi)),
        TangentVector::Se3 { rho, phi } => {
            let p = skew3(&phi);
            set_block(&mut m, 0, 0, &p);
            set_block(&mut m, 0, 3, &skew3(&rho));
            set_block(&mut m, 3, 3, &p);
        }
        TangentVector::Se23 { rho, nu, phi } => {
            let p = skew3(&phi);
            set_block(&mut m, 0, 0, &p);
            set_block(&mut m, 3, 3, &p);
            set_block(&mut m, 6, 6, &p);
            set_block(&mut m, 0, 6, &skew3(&rho));
            set_block(&mut m, 3, 6, &skew3(&nu));
        }
        TangentVector::SGal3 { rho, nu, phi, tau } => {
            let p = skew3(&phi);
            set_block(&mut m, 0, 0, &p);
            set_block(&mut m, 3, 3, &p);
            set_block(&mut m, 6, 6, &p);
            set_block(&mut m, 0, 3, &(-Mat3::identity() * tau));
            set_block(&mut m, 0, 6, &skew3(&rho));
            set_block(&mut m, 0, 9, &nu);
            set_block(&mut m, 3, 6, &skew3(&nu));
        }
        TangentVector::Sim3 { rho, phi, lambda } => {
            let p = skew3(&phi);
            set_block(&mut m, 0, 0, &(p + Mat3::identity() * lambda));
            set_block(&mut m, 0, 3, &skew3(&rho));
            set_block(&mut m, 0, 6, &(-rho));
            set_block(&mut m, 3, 3, &p);
        }
    }
    m
}

/// Inverse of [`wedge`] for matrices laid out as the group's algebra.
/// Entries outside the layout are ignored.
pub fn vee(group: GroupId, m: &MatN) -> Result<TangentVector> {
    let group = group.base();
    let n = group.dim();
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::InvalidArgument(format!(
            "{group} algebra elements are {n}x{n}, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let phi3 = || Vec3::new(m[(2, 1)], m[(0, 2)], m[(1, 0)]);
    let col = |j: usize| Vec3::new(m[(0, j)], m[(1, j)], m[(2, j)]);
    let c: Vec<f64> = match group {
        GroupId::So2 => vec![m[(1, 0)]],
        GroupId::Se2 => vec![m[(0, 2)], m[(1, 2)], m[(1, 0)]],
        GroupId::So3 => phi3().iter().copied().collect(),
        GroupId::Se3 => col(3).iter().chain(phi3().iter()).copied().collect(),
        GroupId::Se23 => col(4)
            .iter()
            .chain(col(3).iter())
            .chain(phi3().iter())
            .copied()
            .collect(),
        GroupId::SGal3 => col(4)
            .iter()
            .chain(col(3).iter())
            .chain(phi3().iter())
            .copied()
            .chain(std::iter::once(m[(3, 4)]))
            .collect(),
        GroupId::Sim3 => col(3)
            .iter()
            .chain(phi3().iter())
            .copied()
            .chain(std::iter::once(-m[(3, 3)]))
            .collect(),
        _ => unreachable!("base() only returns base groups"),
    };
    TangentVector::new(group, &c)
}
