//! Reproducible random tangent vectors for the property suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, UnitSphere};

use crate::algebra::{GroupId, TangentVector};
use crate::linalg::{Vec2, Vec3};

pub const DEFAULT_SEED: u64 = 42;
pub const SEED_ENV: &str = "LIEGAMMA_SEED";

/// Rotation magnitudes are drawn from `(MIN_ANGLE, MAX_ANGLE)`.
pub const MIN_ANGLE: f64 = 1e-6;
pub const MAX_ANGLE: f64 = std::f64::consts::PI - 1e-3;

/// Parses a seed from the environment value, if one is set.
pub fn seed_from_env(value: Option<&str>) -> Option<u64> {
    value.and_then(|v| v.trim().parse().ok())
}

#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    pub fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    pub fn normal3(&mut self) -> Vec3 {
        Vec3::new(self.normal(), self.normal(), self.normal())
    }

    pub fn angle(&mut self) -> f64 {
        self.uniform(MIN_ANGLE, MAX_ANGLE)
    }

    /// Uniform direction with magnitude in the sampling range.
    pub fn rotation(&mut self) -> Vec3 {
        let d: [f64; 3] = UnitSphere.sample(&mut self.rng);
        Vec3::from(d) * self.angle()
    }

    /// Uniform direction with unit magnitude.
    pub fn unit3(&mut self) -> Vec3 {
        let d: [f64; 3] = UnitSphere.sample(&mut self.rng);
        Vec3::from(d)
    }

    fn signed_angle(&mut self) -> f64 {
        let a = self.angle();
        if self.rng.random_bool(0.5) {
            a
        } else {
            -a
        }
    }

    /// A random tangent vector of the base group of `group`.
    pub fn tangent(&mut self, group: GroupId) -> TangentVector {
        match group.base() {
            GroupId::So2 => TangentVector::So2 {
                phi: self.signed_angle(),
            },
            GroupId::Se2 => {
                let rho = Vec2::new(self.normal(), self.normal());
                TangentVector::Se2 {
                    rho,
                    phi: self.signed_angle(),
                }
            }
            GroupId::So3 => TangentVector::So3 { phi: self.rotation() },
            GroupId::Se3 => TangentVector::Se3 {
                rho: self.normal3(),
                phi: self.rotation(),
            },
            GroupId::Se23 => TangentVector::Se23 {
                rho: self.normal3(),
                nu: self.normal3(),
                phi: self.rotation(),
            },
            GroupId::SGal3 => TangentVector::SGal3 {
                rho: self.normal3(),
                nu: self.normal3(),
                phi: self.rotation(),
                tau: self.uniform(-2.0, 2.0),
            },
            _ => TangentVector::Sim3 {
                rho: self.normal3(),
                phi: self.rotation(),
                lambda: self.uniform(-2.0, 2.0),
            },
        }
    }
}
