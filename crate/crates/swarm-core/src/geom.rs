//! Plane geometry primitives shared by every module.

use core::f64::consts::TAU;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// A point (or vector) in the Euclidean plane. Doubles as the real and
/// imaginary parts of a complex number z = x + iy.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ZERO: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// Angle of the vector measured from the positive x-axis, in [0, 2π).
    pub fn angle(self) -> f64 {
        normalize_angle(libm::atan2(self.y, self.x))
    }

    /// Rotation about the origin by `angle` radians.
    pub fn rotated(self, angle: f64) -> Point2 {
        let (s, c) = (libm::sin(angle), libm::cos(angle));
        Point2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn scaled(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, k: f64) -> Point2 {
        self.scaled(k)
    }
}

/// Euclidean distance between two points.
pub fn linear_distance(a: Point2, b: Point2) -> f64 {
    (b - a).norm()
}

/// Normalizes an angle into [0, 2π).
pub fn normalize_angle(a: f64) -> f64 {
    let mut a = a % TAU;
    if a < 0.0 {
        a += TAU;
    }
    // -1e-17 % TAU rounds to TAU itself; fold it back.
    if a >= TAU {
        a = 0.0;
    }
    a
}

/// Signed angular difference a - b folded into (-π, π].
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = normalize_angle(a - b);
    if d > core::f64::consts::PI {
        d - TAU
    } else {
        d
    }
}

/// A complex number in polar form: modulus·(cos θ + i sin θ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarComplex {
    modulus: f64,
    argument: f64,
}

impl PolarComplex {
    /// The argument is normalized into [0, 2π).
    pub fn new(modulus: f64, argument: f64) -> Result<Self> {
        if !(modulus >= 0.0) || !modulus.is_finite() || !argument.is_finite() {
            return Err(Error::InvalidArgument("modulus must be finite and >= 0"));
        }
        Ok(PolarComplex {
            modulus,
            argument: normalize_angle(argument),
        })
    }

    pub fn modulus(self) -> f64 {
        self.modulus
    }

    pub fn argument(self) -> f64 {
        self.argument
    }

    pub fn to_cartesian(self) -> Point2 {
        Point2::new(
            self.modulus * libm::cos(self.argument),
            self.modulus * libm::sin(self.argument),
        )
    }
}
