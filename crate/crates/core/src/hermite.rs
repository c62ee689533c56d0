//! Piecewise quintic Hermite interpolation from nodal values, first and
//! second derivatives.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Value and slope of the quintic through `(f, f', f'')` at `x0` and `x1`,
/// evaluated at `x`.
pub fn quintic(x0: f64, x1: f64, left: [f64; 3], right: [f64; 3], x: f64) -> (f64, f64) {
    let h = x1 - x0;
    let u = (x - x0) / h;
    let (u2, u3) = (u * u, u * u * u);
    let (u4, u5) = (u3 * u, u3 * u2);

    let h0 = 1.0 - 10.0 * u3 + 15.0 * u4 - 6.0 * u5;
    let h1 = u - 6.0 * u3 + 8.0 * u4 - 3.0 * u5;
    let h2 = 0.5 * u2 - 1.5 * u3 + 1.5 * u4 - 0.5 * u5;
    let h3 = 0.5 * u3 - u4 + 0.5 * u5;
    let h4 = -4.0 * u3 + 7.0 * u4 - 3.0 * u5;
    let h5 = 10.0 * u3 - 15.0 * u4 + 6.0 * u5;

    let d0 = -30.0 * u2 + 60.0 * u3 - 30.0 * u4;
    let d1 = 1.0 - 18.0 * u2 + 32.0 * u3 - 15.0 * u4;
    let d2 = u - 4.5 * u2 + 6.0 * u3 - 2.5 * u4;
    let d3 = 1.5 * u2 - 4.0 * u3 + 2.5 * u4;
    let d4 = -12.0 * u2 + 28.0 * u3 - 15.0 * u4;
    let d5 = -d0;

    let value = h0 * left[0]
        + h * h1 * left[1]
        + h * h * h2 * left[2]
        + h * h * h3 * right[2]
        + h * h4 * right[1]
        + h5 * right[0];
    let slope = d0 / h * left[0]
        + d1 * left[1]
        + h * d2 * left[2]
        + h * d3 * right[2]
        + d4 * right[1]
        + d5 / h * right[0];
    (value, slope)
}

/// One node of a complex interpolant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub x: f64,
    pub value: Complex64,
    pub slope: Complex64,
    pub curvature: Complex64,
}

/// Piecewise quintic Hermite interpolant of a complex function on a
/// strictly increasing node list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexHermite {
    nodes: Vec<Node>,
}

impl ComplexHermite {
    pub fn new(nodes: Vec<Node>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::Config("an interpolant needs at least two nodes".into()));
        }
        if nodes.windows(2).any(|w| !(w[1].x > w[0].x)) {
            return Err(Error::Config("interpolant nodes must be strictly increasing".into()));
        }
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn lo(&self) -> f64 {
        self.nodes[0].x
    }

    pub fn hi(&self) -> f64 {
        self.nodes[self.nodes.len() - 1].x
    }

    /// Value and derivative at `x`; `None` outside `[lo, hi]`.
    pub fn eval(&self, x: f64) -> Option<(Complex64, Complex64)> {
        if !(x >= self.lo() && x <= self.hi()) {
            return None;
        }
        let i = match self.nodes.partition_point(|n| n.x <= x) {
            0 => 0,
            p => (p - 1).min(self.nodes.len() - 2),
        };
        let (a, b) = (&self.nodes[i], &self.nodes[i + 1]);
        let (re, dre) = quintic(
            a.x,
            b.x,
            [a.value.re, a.slope.re, a.curvature.re],
            [b.value.re, b.slope.re, b.curvature.re],
            x,
        );
        let (im, dim) = quintic(
            a.x,
            b.x,
            [a.value.im, a.slope.im, a.curvature.im],
            [b.value.im, b.slope.im, b.curvature.im],
            x,
        );
        Some((Complex64::new(re, im), Complex64::new(dre, dim)))
    }
}
