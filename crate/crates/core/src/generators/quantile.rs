// SPDX-License-Identifier: MIT OR Apache-2.0

//! Inverse CDFs for inverse-transform sampling.

// published coefficients, kept digit for digit
#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};

fn poly(coeffs: &[f64], r: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + c)
}

// Wichura, Algorithm AS 241 (PPND16).
const A: [f64; 8] = [
    3.387_132_872_796_366_608_0,
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
    6.871_870_074_920_579_083_0e2,
    5.394_196_021_424_751_107_7e3,
    2.121_379_430_158_659_586_7e4,
    3.930_789_580_009_271_061_0e4,
    2.872_908_573_572_194_267_4e4,
    5.226_495_278_852_854_561_0e3,
];
const C: [f64; 8] = [
    1.423_437_110_749_683_577_34,
    4.630_337_846_156_545_295_90,
    5.769_497_221_460_691_405_50,
    3.647_848_324_763_204_605_04,
    1.270_458_252_452_368_382_58,
    2.417_807_251_774_506_117_70e-1,
    2.272_384_498_926_918_458_33e-2,
    7.745_450_142_783_414_076_40e-4,
];
const D: [f64; 8] = [
    1.0,
    2.053_191_626_637_758_821_87,
    1.676_384_830_183_803_849_40,
    6.897_673_349_851_000_045_50e-1,
    1.481_039_764_274_800_745_90e-1,
    1.519_866_656_361_645_719_66e-2,
    5.475_938_084_995_344_946_00e-4,
    1.050_750_071_644_416_843_24e-9,
];
const E: [f64; 8] = [
    6.657_904_643_501_103_777_20,
    5.463_784_911_164_114_369_90,
    1.784_826_539_917_291_335_80,
    2.965_605_718_285_048_912_30e-1,
    2.653_218_952_657_612_309_30e-2,
    1.242_660_947_388_078_438_60e-3,
    2.711_555_568_743_487_578_15e-5,
    2.010_334_399_292_288_132_65e-7,
];
const F: [f64; 8] = [
    1.0,
    5.998_322_065_558_879_376_90e-1,
    1.369_298_809_227_358_053_10e-1,
    1.487_536_129_085_061_485_25e-2,
    7.868_691_311_456_132_591_00e-4,
    1.846_318_317_510_054_681_80e-5,
    1.421_511_758_316_445_888_70e-7,
    2.044_263_103_389_939_785_64e-15,
];

/// `Φ⁻¹(u)` for the standard normal distribution.
pub fn quantile_standard_normal(u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "normal quantile needs 0 < u < 1, got {u}"
        )));
    }
    let q = u - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180_625 - q * q;
        return Ok(q * poly(&A, r) / poly(&B, r));
    }
    let tail = if q < 0.0 { u } else { 1.0 - u };
    let mut r = (-tail.ln()).sqrt();
    let z = if r <= 5.0 {
        r -= 1.6;
        poly(&C, r) / poly(&D, r)
    } else {
        r -= 5.0;
        poly(&E, r) / poly(&F, r)
    };
    Ok(if q < 0.0 { -z } else { z })
}

/// `F⁻¹(u) = −ln(1 − u) / rate`.
pub fn quantile_exponential(u: f64, rate: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "exponential quantile needs 0 < u < 1, got {u}"
        )));
    }
    Ok(-(-u).ln_1p() / rate)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_is_zero() {
        assert_eq!(quantile_standard_normal(0.5).unwrap(), 0.0);
    }

    #[test]
    fn table_values() {
        assert!((quantile_standard_normal(0.841_344_7).unwrap() - 1.0).abs() < 1e-4);
        assert!((quantile_standard_normal(0.977_249_9).unwrap() - 2.0).abs() < 1e-4);
    }

    #[test]
    fn rejects_closed_endpoints() {
        for u in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(quantile_standard_normal(u).is_err());
            assert!(quantile_exponential(u, 1.0).is_err());
        }
    }

    #[test]
    fn antisymmetric() {
        for u in [2f64.powi(-40), 2f64.powi(-17), 0.01, 0.2, 0.4] {
            let a = quantile_standard_normal(u).unwrap();
            let b = quantile_standard_normal(1.0 - u).unwrap();
            assert!((a + b).abs() < 1e-9, "{u}");
        }
    }

    #[test]
    fn exponential_median() {
        let m = quantile_exponential(0.5, 1.0).unwrap();
        assert!((m - std::f64::consts::LN_2).abs() < 1e-15);
    }

    // reference values from an independent implementation (scipy.special.ndtri)
    #[test]
    fn frozen_reference_values() {
        let cases = [
            (1e-300, -37.0470962993612),
            (1e-20, -9.262340089798409),
            (1e-10, -6.361340902404056),
            (1e-06, -4.753424308822899),
            (0.001, -3.090232306167813),
            (0.02, -2.053748910631823),
            (0.0749, -1.4402382675279635),
            (0.075, -1.4395314709384563),
            (0.0751, -1.4388253927525403),
            (0.3, -0.5244005127080409),
            (0.62, 0.3054807880993974),
            (0.924, 1.432502720825812),
            (0.9999, 3.719016485455709),
            (0.999999999999, 7.0344869100478356),
        ];
        for (u, expected) in cases {
            let z = quantile_standard_normal(u).unwrap();
            assert!(
                (z - expected).abs() <= 1e-9 * expected.abs().max(1.0),
                "{u}: {z} vs {expected}"
            );
        }
    }
}
