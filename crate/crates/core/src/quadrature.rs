//! Adaptive Gauss–Kronrod (7/15) quadrature on finite intervals.

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: usize = 40;
const MAX_EVALUATIONS: usize = 200_000;

fn g7k15(f: &mut impl FnMut(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(centre);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// `∫_lo^hi f`, adaptively bisected until every panel's Kronrod–Gauss
/// difference is below `rel_tol · |total| + abs_tol` in sum.
///
/// `lo > hi` is allowed and flips the sign.
pub fn integrate(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, rel_tol: f64, abs_tol: f64) -> Result<f64> {
    if lo == hi {
        return Ok(0.0);
    }
    if lo > hi {
        return integrate(f, hi, lo, rel_tol, abs_tol).map(|v| -v);
    }
    let (value, error) = g7k15(&mut f, lo, hi);
    // work list of (lo, hi, value, error, depth)
    let mut panels = vec![(lo, hi, value, error, 0usize)];
    let mut evaluations = 15;
    loop {
        let total: f64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        if !total.is_finite() {
            return Err(Error::Quadrature { lo, hi, estimate: total });
        }
        if err <= rel_tol * total.abs() + abs_tol {
            return Ok(total);
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .3.total_cmp(&b.1 .3))
            .expect("at least one panel");
        let (a, b, _, _, depth) = panels.swap_remove(worst);
        if depth >= MAX_DEPTH || evaluations >= MAX_EVALUATIONS {
            return Err(Error::Quadrature { lo, hi, estimate: total });
        }
        let mid = 0.5 * (a + b);
        let (v1, e1) = g7k15(&mut f, a, mid);
        let (v2, e2) = g7k15(&mut f, mid, b);
        evaluations += 30;
        panels.push((a, mid, v1, e1, depth + 1));
        panels.push((mid, b, v2, e2, depth + 1));
    }
}

/// Nodes and weights of 8-point Gauss–Legendre on `[-1, 1]`.
pub const GAUSS_LEGENDRE_8: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_3, 0.101_228_536_290_376_3),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_5),
    (-0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_5),
    (0.960_289_856_497_536_3, 0.101_228_536_290_376_3),
];

/// Fixed 8-point Gauss–Legendre rule on `[lo, hi]`.
pub fn gauss_legendre_8(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    GAUSS_LEGENDRE_8
        .iter()
        .map(|&(x, w)| w * f(centre + half * x))
        .sum::<f64>()
        * half
}
