//! Jacobi elliptic functions `sn`, `cn`, `dn` and the complete elliptic
//! integral of the first kind.
//!
//! Every function here takes the **modulus** `k` (not the parameter
//! `m = k²`), matching the convention of the ellipsoidal and conical
//! coordinate maps, where `k' = sqrt(1 − k²)` is the complementary modulus
//! and `K`, `K'` are the quarter periods.
//!
//! Evaluation uses the descending Landen (arithmetic–geometric mean)
//! transformation with at most [`LANDEN_ITERATIONS`] stages.

use std::f64::consts::FRAC_PI_2;

use crate::{Error, Result};

/// Iteration cap of the AGM / descending Landen sequence.
pub const LANDEN_ITERATIONS: usize = 32;

/// Complementary modulus `sqrt(1 − k²)`, computed as `sqrt((1 − k)(1 + k))`
/// to keep precision when `k` is close to one.
pub fn complementary(k: f64) -> f64 {
    ((1.0 - k) * (1.0 + k)).max(0.0).sqrt()
}

fn check_modulus(k: f64, allow_one: bool) -> Result<()> {
    let ok = if allow_one {
        (0.0..=1.0).contains(&k)
    } else {
        (0.0..1.0).contains(&k)
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "elliptic modulus k",
            value: k,
            range: if allow_one { "[0, 1]" } else { "[0, 1)" },
        })
    }
}

/// Complete elliptic integral of the first kind `K(k)` for modulus `k`.
///
/// `K(k) = π / (2 · AGM(1, k'))`. Errors when `k < 0` or `k ≥ 1`.
pub fn complete_k(k: f64) -> Result<f64> {
    check_modulus(k, false)?;
    let mut a = 1.0_f64;
    let mut b = complementary(k);
    for _ in 0..LANDEN_ITERATIONS {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    Ok(FRAC_PI_2 / a)
}

/// An elliptic modulus together with its quarter periods.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Modulus {
    k: f64,
    kprime: f64,
    quarter: f64,
    quarter_prime: f64,
}

impl Modulus {
    /// Requires `0 < k < 1`.
    pub fn new(k: f64) -> Result<Self> {
        if !(k > 0.0 && k < 1.0) {
            return Err(Error::Domain {
                what: "elliptic modulus k",
                value: k,
                range: "(0, 1)",
            });
        }
        let kprime = complementary(k);
        Ok(Self {
            k,
            kprime,
            quarter: complete_k(k)?,
            quarter_prime: complete_k(kprime)?,
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// `k' = sqrt(1 − k²)`.
    pub fn kprime(&self) -> f64 {
        self.kprime
    }

    /// Quarter period `K = K(k)`.
    pub fn quarter_period(&self) -> f64 {
        self.quarter
    }

    /// Complementary quarter period `K' = K(k')`.
    pub fn complementary_quarter_period(&self) -> f64 {
        self.quarter_prime
    }
}

/// Values of `sn`, `cn`, `dn` at one argument.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jacobi {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

impl Jacobi {
    /// First derivatives with respect to the argument for modulus `k`:
    /// `sn' = cn·dn`, `cn' = −sn·dn`, `dn' = −k²·sn·cn`.
    pub fn derivatives(&self, k: f64) -> (f64, f64, f64) {
        (
            self.cn * self.dn,
            -self.sn * self.dn,
            -k * k * self.sn * self.cn,
        )
    }
}

/// Jacobi elliptic functions `(sn, cn, dn)(u, k)` for modulus `k`.
///
/// `0 ≤ k ≤ 1`; `k = 1` is evaluated with the hyperbolic closed forms and is
/// meant for tests of the limiting behaviour.
pub fn jacobi(u: f64, k: f64) -> Result<Jacobi> {
    check_modulus(k, true)?;
    if k == 0.0 {
        let (s, c) = u.sin_cos();
        return Ok(Jacobi { sn: s, cn: c, dn: 1.0 });
    }
    if k == 1.0 {
        let sech = 1.0 / u.cosh();
        return Ok(Jacobi {
            sn: u.tanh(),
            cn: sech,
            dn: sech,
        });
    }

    let mut a = [0.0_f64; LANDEN_ITERATIONS + 1];
    let mut c = [0.0_f64; LANDEN_ITERATIONS + 1];
    a[0] = 1.0;
    c[0] = k;
    let mut b = complementary(k);
    let mut n = 0;
    while n < LANDEN_ITERATIONS {
        if c[n].abs() <= f64::EPSILON * a[n] {
            break;
        }
        let an = a[n];
        a[n + 1] = 0.5 * (an + b);
        c[n + 1] = 0.5 * (an - b);
        b = (an * b).sqrt();
        n += 1;
    }

    let mut phi = 2.0_f64.powi(n as i32) * a[n] * u;
    for j in (1..=n).rev() {
        phi = 0.5 * (phi + (c[j] / a[j] * phi.sin()).asin());
    }
    let (sn, cn) = phi.sin_cos();
    // dn² = k'² + k² cn² has no cancellation, unlike cn / cos(φ₁ − φ₀) near
    // the zeros of cn.
    let kp = complementary(k);
    let dn = (kp * kp + k * k * cn * cn).sqrt();
    Ok(Jacobi { sn, cn, dn })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Independent oracle: composite Gauss–Legendre (5 points, 400 panels)
    /// on `∫₀^{π/2} dθ / sqrt(1 − k² sin²θ)`.
    fn k_by_quadrature(k: f64) -> f64 {
        let nodes = [
            (0.0, 128.0 / 225.0),
            (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
            (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
            (0.906_179_845_938_664, 0.236_926_885_056_189_1),
            (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
        ];
        let panels = 400;
        let h = FRAC_PI_2 / panels as f64;
        let mut sum = 0.0;
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * h;
            for (x, w) in nodes {
                let th: f64 = mid + 0.5 * h * x;
                sum += w * 0.5 * h / (1.0 - k * k * th.sin().powi(2)).sqrt();
            }
        }
        sum
    }

    #[test]
    fn quarter_period_values() {
        assert_eq!(complete_k(0.0).unwrap(), FRAC_PI_2);
        let k08 = complete_k(0.8).unwrap();
        // frozen from the quadrature oracle and an mpmath cross-check
        assert!((k08 - 1.995_302_777_664_729_4).abs() < 1e-13 * k08);
        assert!((k08 - k_by_quadrature(0.8)).abs() < 1e-13 * k08);
        let m = Modulus::new(0.6).unwrap();
        assert!((m.complementary_quarter_period() - k08).abs() < 1e-15);
        assert!((m.quarter_period() - 1.750_753_802_915_752_5).abs() < 1e-13);
    }

    #[test]
    fn quarter_period_grows_with_modulus() {
        let mut prev = FRAC_PI_2;
        for i in 1..50 {
            let k = i as f64 / 50.0;
            let kk = complete_k(k).unwrap();
            assert!(kk > prev);
            prev = kk;
        }
        assert!((complete_k(1e-8).unwrap() - FRAC_PI_2).abs() < 1e-14);
    }

    #[test]
    fn modulus_domain_errors() {
        assert!(complete_k(1.0).is_err());
        assert!(complete_k(-0.1).is_err());
        assert!(Modulus::new(0.0).is_err());
        assert!(jacobi(0.3, 1.2).is_err());
        let m = Modulus::new(0.3).unwrap();
        assert!((m.k().powi(2) + m.kprime().powi(2) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn origin_and_degenerate_values() {
        for k in [0.0, 0.3, 0.9, 1.0] {
            let j = jacobi(0.0, k).unwrap();
            assert_eq!((j.sn, j.cn, j.dn), (0.0, 1.0, 1.0));
        }
        let j = jacobi(1.2, 0.0).unwrap();
        assert_eq!((j.sn, j.cn, j.dn), (1.2_f64.sin(), 1.2_f64.cos(), 1.0));
        let j = jacobi(0.7, 1.0).unwrap();
        assert!((j.sn - 0.7_f64.tanh()).abs() < 1e-15);
    }

    #[test]
    fn half_quarter_period_identity() {
        // sn(K/2) = 1/sqrt(1 + k')
        let m = Modulus::new(0.8).unwrap();
        let j = jacobi(0.5 * m.quarter_period(), 0.8).unwrap();
        let oracle = 1.0 / (1.0 + m.kprime()).sqrt();
        assert!((j.sn - oracle).abs() < 1e-12);
        assert!((j.sn - 0.790_569_415_042_094_8).abs() < 1e-12);
    }

    #[test]
    fn matches_reference_values() {
        // mpmath ellipfun(·, 0.7, m = 0.25)
        let j = jacobi(0.7, 0.5).unwrap();
        assert!((j.sn - 0.634_293_276_335_112_4).abs() < 1e-14);
        assert!((j.cn - 0.773_092_516_841_334_3).abs() < 1e-14);
        assert!((j.dn - 0.948_376_512_730_580_6).abs() < 1e-14);
    }

    #[test]
    fn pythagorean_identities_at_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let u: f64 = rng.gen_range(-10.0..10.0);
            let k: f64 = rng.gen_range(0.0..0.999);
            let j = jacobi(u, k).unwrap();
            assert!((j.sn * j.sn + j.cn * j.cn - 1.0).abs() < 1e-12);
            assert!((j.dn * j.dn + k * k * j.sn * j.sn - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn periodicity_in_four_quarter_periods() {
        for k in [0.2, 0.6, 0.95] {
            let four_k = 4.0 * complete_k(k).unwrap();
            for u in [-1.3, 0.1, 0.77, 2.5] {
                let a = jacobi(u, k).unwrap();
                let b = jacobi(u + four_k, k).unwrap();
                assert!((a.sn - b.sn).abs() < 1e-10);
                assert!((a.cn - b.cn).abs() < 1e-10);
                assert!((a.dn - b.dn).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn derivatives_match_central_differences() {
        // fourth-order stencil keeps rounding noise below the tolerance
        let h = 1e-3;
        for k in [0.1, 0.6, 0.9] {
            for u in [-2.0, -0.4, 0.3, 1.1, 3.7] {
                let j = jacobi(u, k).unwrap();
                let (ds, dc, dd) = j.derivatives(k);
                let at = |d: f64| jacobi(u + d * h, k).unwrap();
                let (p2, p1, m1, m2) = (at(2.0), at(1.0), at(-1.0), at(-2.0));
                let fd = |f: fn(&Jacobi) -> f64| {
                    (-f(&p2) + 8.0 * f(&p1) - 8.0 * f(&m1) + f(&m2)) / (12.0 * h)
                };
                let rel = |x: f64, y: f64| (x - y).abs() / y.abs().max(1e-3);
                assert!(rel(fd(|j| j.sn), ds) < 1e-8);
                assert!(rel(fd(|j| j.cn), dc) < 1e-8);
                assert!(rel(fd(|j| j.dn), dd) < 1e-8);
            }
        }
    }
}
