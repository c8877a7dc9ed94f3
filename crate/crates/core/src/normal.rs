//! Standard normal distribution function and its inverse.
//!
//! `cdf` goes through `erfc` so both tails keep full relative precision.
//! `inv_cdf` is Wichura's AS 241 (PPND16), accurate to about 1e-16.

// AS 241 coefficients are kept exactly as published.
#![allow(clippy::excessive_precision)]

use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Largest |u| accepted by the Rosenblatt transform. Past this the tail
/// probability 1 - Φ(u) is below ~1e-16 and no longer distinguishable from 1.
pub const U_LIMIT: f64 = 8.2;

pub fn pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Φ(x).
pub fn cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// 1 - Φ(x), without cancellation for large x.
pub fn sf(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

const A: [f64; 8] = [
    3.387_132_872_796_366_608,
    1.331_416_678_917_843_774_5e2,
    1.971_590_950_306_551_442_7e3,
    1.373_169_376_550_946_112_5e4,
    4.592_195_393_154_987_145_7e4,
    6.726_577_092_700_870_085_3e4,
    3.343_057_558_358_812_810_5e4,
    2.509_080_928_730_122_672_7e3,
];
const B: [f64; 8] = [
    1.0,
    4.231_333_070_160_091_125_2e1,
    6.871_870_074_920_579_083e2,
    5.394_196_021_424_751_107_7e3,
    2.121_379_430_158_659_586_7e4,
    3.930_789_580_009_271_061e4,
    2.872_908_573_572_194_267_4e4,
    5.226_495_278_852_854_561e3,
];
const C: [f64; 8] = [
    1.423_437_110_749_683_577_34,
    4.630_337_846_156_545_295_9,
    5.769_497_221_460_691_405_5,
    3.647_848_324_763_204_605_04,
    1.270_458_252_452_368_382_58,
    2.417_807_251_774_506_117_7e-1,
    2.272_384_498_926_918_458_33e-2,
    7.745_450_142_783_414_076_4e-4,
];
const D: [f64; 8] = [
    1.0,
    2.053_191_626_637_758_821_87,
    1.676_384_830_183_803_849_4,
    6.897_673_349_851_000_045_5e-1,
    1.481_039_764_274_800_745_9e-1,
    1.519_866_656_361_645_719_66e-2,
    5.475_938_084_995_344_946e-4,
    1.050_750_071_644_416_843_24e-9,
];
const E: [f64; 8] = [
    6.657_904_643_501_103_777_2,
    5.463_784_911_164_114_369_9,
    1.784_826_539_917_291_335_8,
    2.965_605_718_285_048_912_3e-1,
    2.653_218_952_657_612_309_3e-2,
    1.242_660_947_388_078_438_6e-3,
    2.711_555_568_743_487_578_15e-5,
    2.010_334_399_292_288_132_65e-7,
];
const F: [f64; 8] = [
    1.0,
    5.998_322_065_558_879_376_9e-1,
    1.369_298_809_227_358_053_1e-1,
    1.487_536_129_085_061_485_25e-2,
    7.868_691_311_456_132_591e-4,
    1.846_318_317_510_054_681_8e-5,
    1.421_511_758_316_445_888_7e-7,
    2.044_263_103_389_939_785_64e-15,
];

fn poly(coef: &[f64; 8], x: f64) -> f64 {
    coef.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Φ⁻¹(p). Returns ±∞ at p ∈ {0, 1} and NaN outside [0, 1].
pub fn inv_cdf(p: f64) -> f64 {
    if !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    if p == 0.0 {
        return f64::NEG_INFINITY;
    }
    if p == 1.0 {
        return f64::INFINITY;
    }
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180_625 - q * q;
        return q * poly(&A, r) / poly(&B, r);
    }
    let tail = if q < 0.0 { p } else { 1.0 - p };
    let x = tail_quantile(tail);
    if q < 0.0 {
        -x
    } else {
        x
    }
}

/// Φ⁻¹(1 - p) computed from the upper-tail probability `p` directly.
pub fn inv_sf(p: f64) -> f64 {
    -inv_cdf(p)
}

// Magnitude of the quantile for a tail probability p < 0.075.
fn tail_quantile(p: f64) -> f64 {
    let r = (-p.ln()).sqrt();
    if r <= 5.0 {
        let r = r - 1.6;
        poly(&C, r) / poly(&D, r)
    } else {
        let r = r - 5.0;
        poly(&E, r) / poly(&F, r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from oracles/oracles.py (mpmath, 50 digits).
    const CDF_REF: [(f64, f64); 9] = [
        (-8.0, 6.2209605742717841235e-16),
        (-5.0, 2.8665157187919391167e-7),
        (-2.0, 0.0227501319481792072),
        (-0.5, 0.30853753872598689636),
        (0.0, 0.5),
        (1.0, 0.84134474606854294859),
        (3.0, 0.99865010196836990547),
        (5.0, 0.99999971334842812081),
        (8.0, 0.9999999999999993779),
    ];

    const INV_REF: [(f64, f64); 9] = [
        (1e-300, -37.047096299361199237),
        (1e-20, -9.2623400897984075737),
        (1e-10, -6.3613409024040562047),
        (1e-5, -4.2648907939228246285),
        (0.01, -2.3263478740408411009),
        (0.3, -0.52440051270804078404),
        (0.5, 0.0),
        (0.7, 0.52440051270804078404),
        (0.999, 3.0902323061678135415),
    ];

    #[test]
    fn cdf_matches_reference() {
        for (x, want) in CDF_REF {
            let got = cdf(x);
            assert!(
                ((got - want) / want).abs() < 1e-14,
                "Φ({x}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn sf_is_mirror_of_cdf() {
        for (x, want) in CDF_REF {
            let got = sf(-x);
            assert!(((got - want) / want).abs() < 1e-14);
        }
    }

    #[test]
    fn inv_cdf_matches_reference() {
        for (p, want) in INV_REF {
            let got = inv_cdf(p);
            let err = if want == 0.0 {
                got.abs()
            } else {
                ((got - want) / want).abs()
            };
            assert!(err < 1e-14, "Φ⁻¹({p}) = {got}, want {want}");
        }
    }

    #[test]
    fn inv_sf_matches_negated_inv_cdf() {
        for (p, want) in INV_REF {
            let got = inv_sf(p);
            let err = if want == 0.0 {
                got.abs()
            } else {
                ((got + want) / want).abs()
            };
            assert!(err < 1e-14, "inv_sf({p}) = {got}, want {}", -want);
        }
    }

    #[test]
    fn round_trip_within_limit() {
        let mut u = -U_LIMIT;
        while u <= U_LIMIT {
            let back = if u > 0.0 {
                inv_sf(sf(u))
            } else {
                inv_cdf(cdf(u))
            };
            assert!((back - u).abs() < 1e-12, "u = {u}, back = {back}");
            u += 0.01;
        }
    }

    #[test]
    fn edges() {
        assert_eq!(inv_cdf(0.0), f64::NEG_INFINITY);
        assert_eq!(inv_cdf(1.0), f64::INFINITY);
        assert!(inv_cdf(1.5).is_nan());
        assert_eq!(inv_sf(0.0), f64::INFINITY);
    }
}
