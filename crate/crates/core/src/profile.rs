//! Smooth scalar profiles with analytic first and second derivatives.
//!
//! The same type describes the time profiles of a frame (Euler angles,
//! scalings, translations, `T̃₀(t)`) and the value-only functions
//! `F_{a0}(ω_a)` of a potential; in the latter case only [`Profile::value`]
//! is used.
//!
//! JSON form (internally tagged by `type`):
//!
//! ```json
//! {"type": "constant", "value": 1.0}
//! {"type": "poly", "coefficients": [c0, c1, c2]}
//! {"type": "sin", "amplitude": A, "frequency": w, "phase": p, "offset": c}
//! {"type": "exp", "scale": A, "rate": r}
//! {"type": "product", "factors": [ ... ]}
//! {"type": "sum", "terms": [ ... ]}
//! ```

use serde::{Deserialize, Serialize};

/// Value with first and second derivative.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub fn constant(value: f64) -> Self {
        Self {
            value,
            d1: 0.0,
            d2: 0.0,
        }
    }

    fn add(self, other: Jet) -> Jet {
        Jet {
            value: self.value + other.value,
            d1: self.d1 + other.d1,
            d2: self.d2 + other.d2,
        }
    }

    fn mul(self, other: Jet) -> Jet {
        Jet {
            value: self.value * other.value,
            d1: self.d1 * other.value + self.value * other.d1,
            d2: self.d2 * other.value + 2.0 * self.d1 * other.d1 + self.value * other.d2,
        }
    }
}

fn default_scale() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Profile {
    Constant {
        value: f64,
    },
    /// `Σ c_n tⁿ`.
    Poly {
        coefficients: Vec<f64>,
    },
    /// `A sin(ω t + φ) + c`.
    Sin {
        amplitude: f64,
        frequency: f64,
        #[serde(default)]
        phase: f64,
        #[serde(default)]
        offset: f64,
    },
    /// `A e^{r t}`.
    Exp {
        #[serde(default = "default_scale")]
        scale: f64,
        rate: f64,
    },
    Product {
        factors: Vec<Profile>,
    },
    Sum {
        terms: Vec<Profile>,
    },
}

impl Default for Profile {
    fn default() -> Self {
        Profile::zero()
    }
}

impl Profile {
    pub fn zero() -> Self {
        Profile::Constant { value: 0.0 }
    }

    pub fn constant(value: f64) -> Self {
        Profile::Constant { value }
    }

    pub fn poly(coefficients: impl Into<Vec<f64>>) -> Self {
        Profile::Poly {
            coefficients: coefficients.into(),
        }
    }

    pub fn sin(amplitude: f64, frequency: f64, phase: f64, offset: f64) -> Self {
        Profile::Sin {
            amplitude,
            frequency,
            phase,
            offset,
        }
    }

    pub fn exp(scale: f64, rate: f64) -> Self {
        Profile::Exp { scale, rate }
    }

    /// `f(t) = rate · t`, the uniform-rotation angle.
    pub fn linear(rate: f64) -> Self {
        Profile::poly(vec![0.0, rate])
    }

    pub fn jet(&self, t: f64) -> Jet {
        match self {
            Profile::Constant { value } => Jet::constant(*value),
            Profile::Poly { coefficients } => {
                // Horner on value, first and second derivative at once
                let mut jet = Jet::default();
                for &c in coefficients.iter().rev() {
                    jet.d2 = jet.d2 * t + 2.0 * jet.d1;
                    jet.d1 = jet.d1 * t + jet.value;
                    jet.value = jet.value * t + c;
                }
                jet
            }
            Profile::Sin {
                amplitude,
                frequency,
                phase,
                offset,
            } => {
                let (s, c) = (frequency * t + phase).sin_cos();
                Jet {
                    value: amplitude * s + offset,
                    d1: amplitude * frequency * c,
                    d2: -amplitude * frequency * frequency * s,
                }
            }
            Profile::Exp { scale, rate } => {
                let v = scale * (rate * t).exp();
                Jet {
                    value: v,
                    d1: rate * v,
                    d2: rate * rate * v,
                }
            }
            Profile::Product { factors } => factors
                .iter()
                .fold(Jet::constant(1.0), |acc, f| acc.mul(f.jet(t))),
            Profile::Sum { terms } => terms
                .iter()
                .fold(Jet::constant(0.0), |acc, f| acc.add(f.jet(t))),
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.jet(t).value
    }

    /// Largest deviation of the analytic first derivative from a central
    /// difference of the value, over `n` points of `[lo, hi]`.
    pub fn derivative_mismatch(&self, lo: f64, hi: f64, n: usize) -> f64 {
        let h = 1e-5;
        probe_grid(lo, hi, n)
            .map(|t| {
                let fd = (self.value(t + h) - self.value(t - h)) / (2.0 * h);
                (self.jet(t).d1 - fd).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// `n` equally spaced points covering `[lo, hi]`.
pub fn probe_grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = if n > 1 { (hi - lo) / (n - 1) as f64 } else { 0.0 };
    (0..n).map(move |i| lo + step * i as f64)
}
