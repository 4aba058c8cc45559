//! Error-function family.
//!
//! `erfc` follows the FreeBSD/SunPro rational approximations:
//! Copyright (C) 1993 by Sun Microsystems, Inc. All rights reserved.
//! Developed at SunPro, a Sun Microsystems, Inc. business. Permission to
//! use, copy, modify, and distribute this software is freely granted,
//! provided that this notice is preserved.

#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

const ERX: f64 = 8.45062911510467529297e-01;
const PP0: f64 = 1.28379167095512558561e-01;
const PP1: f64 = -3.25042107247001499370e-01;
const PP2: f64 = -2.84817495755985104766e-02;
const PP3: f64 = -5.77027029648944159157e-03;
const PP4: f64 = -2.37630166566501626084e-05;
const QQ1: f64 = 3.97917223959155352819e-01;
const QQ2: f64 = 6.50222499887672944485e-02;
const QQ3: f64 = 5.08130628187576562776e-03;
const QQ4: f64 = 1.32494738004321644526e-04;
const QQ5: f64 = -3.96022827877536812320e-06;
const PA0: f64 = -2.36211856075265944077e-03;
const PA1: f64 = 4.14856118683748331666e-01;
const PA2: f64 = -3.72207876035701323847e-01;
const PA3: f64 = 3.18346619901161753674e-01;
const PA4: f64 = -1.10894694282396677476e-01;
const PA5: f64 = 3.54783043256182359371e-02;
const PA6: f64 = -2.16637559486879084300e-03;
const QA1: f64 = 1.06420880400844228286e-01;
const QA2: f64 = 5.40397917702171048937e-01;
const QA3: f64 = 7.18286544141962662868e-02;
const QA4: f64 = 1.26171219808761642112e-01;
const QA5: f64 = 1.36370839120290507362e-02;
const QA6: f64 = 1.19844998467991074170e-02;
const RA0: f64 = -9.86494403484714822705e-03;
const RA1: f64 = -6.93858572707181764372e-01;
const RA2: f64 = -1.05586262253232909814e+01;
const RA3: f64 = -6.23753324503260060396e+01;
const RA4: f64 = -1.62396669462573470355e+02;
const RA5: f64 = -1.84605092906711035994e+02;
const RA6: f64 = -8.12874355063065934246e+01;
const RA7: f64 = -9.81432934416914548592e+00;
const SA1: f64 = 1.96512716674392571292e+01;
const SA2: f64 = 1.37657754143519042600e+02;
const SA3: f64 = 4.34565877475229228821e+02;
const SA4: f64 = 6.45387271733267880336e+02;
const SA5: f64 = 4.29008140027567833386e+02;
const SA6: f64 = 1.08635005541779435134e+02;
const SA7: f64 = 6.57024977031928170135e+00;
const SA8: f64 = -6.04244152148580987438e-02;
const RB0: f64 = -9.86494292470009928597e-03;
const RB1: f64 = -7.99283237680523006574e-01;
const RB2: f64 = -1.77579549177547519889e+01;
const RB3: f64 = -1.60636384855821916062e+02;
const RB4: f64 = -6.37566443368389627722e+02;
const RB5: f64 = -1.02509513161107724954e+03;
const RB6: f64 = -4.83519191608651397019e+02;
const SB1: f64 = 3.03380607434824582924e+01;
const SB2: f64 = 3.25792512996573918826e+02;
const SB3: f64 = 1.53672958608443695994e+03;
const SB4: f64 = 3.19985821950859553908e+03;
const SB5: f64 = 2.55305040643316442583e+03;
const SB6: f64 = 4.74528541206955367215e+02;
const SB7: f64 = -2.24409524465858183362e+01;

fn tail_ratio(x: f64) -> f64 {
    let s = 1.0 / (x * x);
    if x < 1.0 / 0.35 {
        let r = RA0 + s * (RA1 + s * (RA2 + s * (RA3 + s * (RA4 + s * (RA5 + s * (RA6 + s * RA7))))));
        let q = 1.0 + s * (SA1 + s * (SA2 + s * (SA3 + s * (SA4 + s * (SA5 + s * (SA6 + s * (SA7 + s * SA8)))))));
        r / q
    } else {
        let r = RB0 + s * (RB1 + s * (RB2 + s * (RB3 + s * (RB4 + s * (RB5 + s * RB6)))));
        let q = 1.0 + s * (SB1 + s * (SB2 + s * (SB3 + s * (SB4 + s * (SB5 + s * (SB6 + s * SB7))))));
        r / q
    }
}

/// `erfc` for `x >= 0`.
fn erfc_pos(x: f64) -> f64 {
    if x < 0.84375 {
        if x < 1.387_778_780_781_445_7e-17 {
            return 1.0 - x;
        }
        let z = x * x;
        let r = PP0 + z * (PP1 + z * (PP2 + z * (PP3 + z * PP4)));
        let s = 1.0 + z * (QQ1 + z * (QQ2 + z * (QQ3 + z * (QQ4 + z * QQ5))));
        let y = r / s;
        if x < 0.25 {
            1.0 - (x + x * y)
        } else {
            0.5 - (x * y + (x - 0.5))
        }
    } else if x < 1.25 {
        let s = x - 1.0;
        let p = PA0 + s * (PA1 + s * (PA2 + s * (PA3 + s * (PA4 + s * (PA5 + s * PA6)))));
        let q = 1.0 + s * (QA1 + s * (QA2 + s * (QA3 + s * (QA4 + s * (QA5 + s * QA6)))));
        1.0 - ERX - p / q
    } else if x < 28.0 {
        // split x^2 so the large exponent is formed exactly
        let z = f64::from_bits(x.to_bits() & 0xffff_ffff_0000_0000);
        (-z * z - 0.5625).exp() * ((z - x) * (z + x) + tail_ratio(x)).exp() / x
    } else {
        0.0
    }
}

pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        f64::NAN
    } else if x < 0.0 {
        2.0 - erfc_pos(-x)
    } else {
        erfc_pos(x)
    }
}

/// Scaled complement `exp(x^2) erfc(x)`.
pub fn erfcx(x: f64) -> f64 {
    if x < 1.25 {
        erfc(x) * (x * x).exp()
    } else if x < 10.0 {
        (tail_ratio(x) - 0.5625).exp() / x
    } else {
        erfcx_asymptotic(x)
    }
}

fn erfcx_asymptotic(x: f64) -> f64 {
    let v = 1.0 / (2.0 * x * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..20 {
        term *= -((2 * k - 1) as f64) * v;
        sum += term;
    }
    sum / (x * PI.sqrt())
}

/// `ln erfc(x)`, finite far into the right tail.
pub fn ln_erfc(x: f64) -> f64 {
    if x < 1.25 {
        erfc(x).ln()
    } else {
        erfcx(x).ln() - x * x
    }
}

/// Inverse of `erfc` on (0, 2): `statrs` starting value, Newton steps on `ln erfc`.
pub fn erfc_inv(p: f64) -> f64 {
    if !(p > 0.0 && p < 2.0) {
        return if p == 0.0 {
            f64::INFINITY
        } else if p == 2.0 {
            f64::NEG_INFINITY
        } else {
            f64::NAN
        };
    }
    if p > 1.0 {
        return -erfc_inv(2.0 - p);
    }
    let lp = p.ln();
    let mut x = statrs::function::erf::erfc_inv(p);
    for _ in 0..2 {
        let g = ln_erfc(x) - lp;
        x += g * PI.sqrt() * erfcx(x) / 2.0;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erfc_reference_values() {
        assert!((erfc(std::f64::consts::FRAC_1_SQRT_2) - 0.317_310_507_862_914_1).abs() < 1e-15);
        assert!((erfc(3.0) - 2.209_049_699_858_544e-5).abs() < 1e-19);
        assert_eq!(erfc(0.0), 1.0);
    }

    #[test]
    fn erfc_inv_half() {
        assert!((erfc_inv(0.5) - 0.476_936_276_204_469_9).abs() < 1e-15);
        assert!((erfc_inv(1.0)).abs() < 1e-15);
    }

    #[test]
    fn erfc_inv_round_trip() {
        for &p in &[1e-300, 1e-12, 1e-5, 0.01, 0.3, 0.9, 1.0, 1.5, 1.99, 2.0 - 1e-12] {
            let x = erfc_inv(p);
            let back = erfc(x);
            assert!(((back - p) / p).abs() < 1e-12, "p={p} back={back}");
        }
    }

    #[test]
    fn erfcx_reference_values() {
        let cases = [
            (0.5, 0.615_690_344_192_925_874_87),
            (2.0, 0.255_395_676_310_505_743_87),
            (10.0, 0.056_140_992_743_822_585_858),
            (25.9, 0.021_767_181_150_738_212_562),
            (30.0, 0.018_795_888_861_416_751_497),
        ];
        for (x, v) in cases {
            assert!(((erfcx(x) - v) / v).abs() < 2e-15, "x={x}: {}", erfcx(x));
        }
    }

    #[test]
    fn erfc_inv_reference_values() {
        assert!((erfc_inv(1e-12) - 5.042_029_745_639_059_376_2).abs() < 1e-14);
        assert!((erfc_inv(0.3) - 0.732_869_077_959_216_869_05).abs() < 1e-15);
        assert!((erfc_inv(1.5) + 0.476_936_276_204_469_873_38).abs() < 1e-15);
    }

    #[test]
    fn ln_erfc_tail() {
        assert!((ln_erfc(30.0) - (-903.974_117_110_643_9)).abs() < 1e-9);
        assert!((ln_erfc(1.0) - 0.157_299_207_050_285_13f64.ln()).abs() < 1e-14);
    }
}
