//! Space-fixed positions around the fibre axis `(OZ)`.

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cylindrical<T> {
    pub r: T,
    pub theta: T,
    pub z: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cartesian<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Cylindrical<T> {
    pub fn new(r: T, theta: T, z: T) -> Self {
        Self { r, theta, z }
    }

    pub fn to_cartesian(self) -> Cartesian<T> {
        Cartesian { x: self.r * self.theta.cos(), y: self.r * self.theta.sin(), z: self.z }
    }
}

impl<T: Real> Cartesian<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn to_cylindrical(self) -> Cylindrical<T> {
        Cylindrical { r: self.x.hypot(self.y), theta: self.y.atan2(self.x), z: self.z }
    }

    pub fn offset(self, dx: T, dy: T, dz: T) -> Self {
        Self { x: self.x + dx, y: self.y + dy, z: self.z + dz }
    }
}

impl<T: Real> From<Cylindrical<T>> for Cartesian<T> {
    fn from(c: Cylindrical<T>) -> Self {
        c.to_cartesian()
    }
}

impl<T: Real> From<Cartesian<T>> for Cylindrical<T> {
    fn from(c: Cartesian<T>) -> Self {
        c.to_cylindrical()
    }
}
