//! Special functions against 50-digit reference values and structural
//! identities.

#![allow(clippy::excessive_precision)]

use bdlab::special::{
    bessel_i_scaled, bessel_j, hankel_threshold, j_hankel, j_recurrence, j_series, log_gamma_complex,
    log_gamma_diff, series_limit,
};
use num_complex::Complex64;
use proptest::prelude::*;

const J_REF: &[(u32, f64, f64)] = &[
    (0, 0.5, 0.93846980724081290423),
    (0, 7.3, 0.28821694763501439904),
    (0, 29.9, -0.097811150066062445526),
    (0, 30.1, -0.074101372324018583354),
    (0, 45.0, 0.11581867067325632359),
    (0, 63.9, 0.095903016769300181718),
    (0, 64.5, 0.063236776899489306968),
    (0, 80.0, -0.06974216551221002284),
    (0, 150.0, -0.00077409037539429124695),
    (0, 333.3, 0.038466654416718674802),
    (0, 1000.0, 0.024786686152420174561),
    (0, 12345.6, -0.00052905008073917817065),
    (0, 1000000.0, 0.00033104301373987374099),
    (0, 987654321.0, 0.000017585597130951488284),
    (1, 0.5, 0.24226845767487388638),
    (1, 7.3, 0.082570430493257831051),
    (1, 29.9, -0.10991681070937225935),
    (1, 30.1, -0.12637268272143993114),
    (1, 45.0, 0.028348854376424527534),
    (1, 63.9, 0.028410883657146786718),
    (1, 64.5, 0.077114197011384367164),
    (1, 80.0, -0.05605729667571257751),
    (1, 150.0, -0.065145163657727360305),
    (1, 333.3, -0.020687550206813364829),
    (1, 1000.0, 0.0047283119070895239176),
    (1, 12345.6, -0.0071614903850201077317),
    (1, 1000000.0, -0.00072596835681376304185),
    (1, 987654321.0, 0.000018311862095047571022),
    (2, 0.5, 0.030604023458682641307),
    (2, 7.3, -0.26559491188343691053),
    (2, 29.9, 0.090458855035335203749),
    (2, 30.1, 0.065704516329238521881),
    (2, 45.0, -0.11455872158985967792),
    (2, 63.9, -0.095013787233865227498),
    (2, 64.5, -0.060845639007663435118),
    (2, 80.0, 0.068340733095317208402),
    (2, 150.0, -0.000094511806708740223781),
    (2, 333.3, -0.038590792131731056224),
    (2, 1000.0, -0.024777229528605995513),
    (2, 12345.6, 0.00052788991187172416152),
    (2, 1000000.0, -0.00033104446567658736851),
    (2, 987654321.0, -0.000017585597093869967542),
    (5, 0.5, 8.053627241357474086e-6),
    (5, 7.3, 0.31370617089730907746),
    (5, 29.9, -0.13967012147474550433),
    (5, 30.1, -0.14540941593910261471),
    (5, 45.0, 0.057984499200954131219),
    (5, 63.9, 0.045849948069597958146),
    (5, 64.5, 0.087501053866915333377),
    (5, 80.0, -0.065862349140031570485),
    (5, 150.0, -0.064998631740725846593),
    (5, 333.3, -0.019289404054658286498),
    (5, 1000.0, 0.0050254069452331860742),
    (5, 12345.6, -0.0071620012418617876845),
    (5, 1000000.0, -0.00072596438424532850524),
    (5, 987654321.0, 0.000018311862308712574808),
    (11, 0.5, 5.9418539622324614067e-15),
    (11, 7.3, 0.01198881934533281642),
    (11, 29.9, 0.038860016782369585805),
    (11, 30.1, 0.011087160874610731653),
    (11, 45.0, -0.12077675290488213657),
    (11, 63.9, -0.094775259187261670339),
    (11, 64.5, -0.096966797827938003923),
    (11, 80.0, 0.088752558559857845374),
    (11, 150.0, 0.060295851682693915314),
    (11, 333.3, 0.013463307810594515713),
    (11, 1000.0, -0.0062061716181024621873),
    (11, 12345.6, 0.0071639769987143556207),
    (11, 1000000.0, 0.00072594849292620673055),
    (11, 987654321.0, -0.000018311863163372562923),
    (20, 0.5, 3.7272019617047144607e-31),
    (20, 7.3, 3.8026628466865908758e-8),
    (20, 29.9, -0.0077622941535710424706),
    (20, 30.1, 0.017355582370263987195),
    (20, 45.0, 0.0047633437900312990997),
    (20, 63.9, -0.097993981317005943116),
    (20, 64.5, -0.066078986700020673937),
    (20, 80.0, 0.090565405489918360332),
    (20, 150.0, 0.063447240953861972933),
    (20, 333.3, 0.043499656715052581012),
    (20, 1000.0, 0.023357967932679334591),
    (20, 12345.6, -0.00041296944040854992802),
    (20, 1000000.0, 0.00033118820085563614687),
    (20, 987654321.0, 0.000017585593422799057129),
    (33, 0.5, 1.5578880385147400948e-57),
    (33, 7.3, 2.7915086192261931017e-19),
    (33, 29.9, 0.039690125481353215167),
    (33, 30.1, 0.044006684513873523163),
    (33, 45.0, 0.057999763250259886933),
    (33, 63.9, 0.043772843903620099824),
    (33, 64.5, -0.010361420680312782974),
    (33, 80.0, -0.089990440119946545617),
    (33, 150.0, 0.058158388262573656532),
    (33, 333.3, 0.039816230361920875469),
    (33, 1000.0, 0.0168787178889816663),
    (33, 12345.6, -0.0071778436243883946373),
    (33, 1000000.0, -0.00072578816200302241878),
    (33, 987654321.0, 0.000018311871781191692896),
    (47, 0.5, 1.9496082849437632842e-88),
    (47, 7.3, 7.8381541504751563825e-34),
    (47, 29.9, 4.5989783533934074987e-7),
    (47, 30.1, 5.866270376887885592e-7),
    (47, 45.0, 0.066086281498552246648),
    (47, 63.9, 0.040474444443586132622),
    (47, 64.5, -0.0082288441483871293425),
    (47, 80.0, 0.070049446570703200488),
    (47, 150.0, 0.028513122929091054695),
    (47, 333.3, -0.013685564065603822382),
    (47, 1000.0, -0.024275457827055843439),
    (47, 12345.6, 0.0071801222608556003226),
    (47, 1000000.0, 0.00072560244298968586641),
    (47, 987654321.0, -0.000018311881752216603626),
    (64, 0.5, 2.3138013161941938442e-128),
    (64, 7.3, 6.2254963203724625164e-54),
    (64, 29.9, 3.4550188152185781366e-16),
    (64, 30.1, 5.0411499907597239231e-16),
    (64, 45.0, 6.5194951713857207937e-7),
    (64, 63.9, 0.10928669996377619989),
    (64, 64.5, 0.12435982158540959418),
    (64, 80.0, 0.11112833093796253959),
    (64, 150.0, 0.065897347715264459217),
    (64, 333.3, 0.036055963707415548123),
    (64, 1000.0, -0.015603391100457084476),
    (64, 12345.6, 0.00066078786158093020725),
    (64, 1000000.0, 0.00033252910232801970239),
    (64, 987654321.0, 0.000017585559159436477992),
];

const I_REF: &[(u32, f64, f64)] = &[
    (0, 0.1, 0.90710092578230109165),
    (0, 5.0, 0.18354081260932835307),
    (0, 17.0, 0.097494300535103393011),
    (0, 50.0, 0.05656162664745419253),
    (0, 400.0, 0.019953356281939989871),
    (0, 3000.0, 0.0072839597465456906371),
    (0, 1000000.0, 0.00039894233026924577878),
    (1, 0.1, 0.045298446808809327277),
    (1, 5.0, 0.16397226694454235693),
    (1, 17.0, 0.094581910679577763456),
    (1, 50.0, 0.055993123892895399644),
    (1, 400.0, 0.019928398958903541852),
    (1, 3000.0, 0.0072827456520547524861),
    (1, 1000000.0, 0.00039894213079803077631),
    (11, 0.1, 1.1070707050623950132e-22),
    (11, 5.0, 6.7079034374726758039e-6),
    (11, 17.0, 0.0028291884233068732574),
    (11, 50.0, 0.016744525656934678897),
    (11, 400.0, 0.017149472051283990397),
    (11, 3000.0, 0.0071385139839298778642),
    (11, 1000000.0, 0.00039891819497629705273),
    (30, 0.1, 3.1772078775728791229e-72),
    (30, 5.0, 2.6937267526846668602e-23),
    (30, 17.0, 1.1332043623894127691e-11),
    (30, 50.0, 8.2453933520899676429e-6),
    (30, 400.0, 0.006472210569364378797),
    (30, 3000.0, 0.0062692133092063968998),
    (30, 1000000.0, 0.00039876284651776902348),
    (64, 0.1, 3.8659001758120769826e-173),
    (64, 5.0, 1.7179082767744523841e-66),
    (64, 17.0, 2.9863825410894695577e-37),
    (64, 50.0, 3.6991009524758721758e-18),
    (64, 400.0, 0.00011977992362383856952),
    (64, 3000.0, 0.0036800269044714682877),
    (64, 1000000.0, 0.00039812613204130110325),
];

const LOG_GAMMA_REF: &[((f64, f64), (f64, f64))] = &[
    ((0.3, 0.0), (1.0957979948180755606, 0.0)),
    ((-2.5, 0.0), (-0.056243716497674050673, -9.4247779607693797154)),
    ((-3.7, 4.1), (-12.018735042855550769, -6.7856733704127956341)),
    ((6.0, 0.0), (4.7874917427820459942, 0.0)),
    ((0.5, 100.0), (-156.16069414628498918, 360.51743526790643592)),
    ((6.5, -1024.0), (-1565.9876351776613956, -6083.2343695589002989)),
    ((1.0, 10000.0), (-15702.439159229773428, 82104.189109591891473)),
    ((7.0, 5000.0), (-7797.7009378770737901, 37596.171916539863272)),
    ((-10.3, 20.0), (-63.33445211091605879, 20.163036499286594209)),
    ((2.0, -0.5), (-0.079373723529674486449, -0.21958931009537835355)),
];

#[test]
fn bessel_j_matches_reference() {
    for &(nu, x, want) in J_REF {
        let got = bessel_j(nu, x).unwrap();
        assert!((got - want).abs() <= 1e-12, "J_{nu}({x}) = {got}, want {want}");
    }
}

#[test]
fn bessel_i_scaled_matches_reference() {
    for &(nu, x, want) in I_REF {
        let got = bessel_i_scaled(nu, x).unwrap();
        let err = if want.abs() > 1e-290 { (got / want - 1.0).abs() } else { got.abs() };
        assert!(err <= 1e-12, "e^-x I_{nu}({x}) = {got:e}, want {want:e}");
    }
}

#[test]
fn log_gamma_matches_reference() {
    for &((sr, si), (wr, wi)) in LOG_GAMMA_REF {
        let got = log_gamma_complex(Complex64::new(sr, si)).unwrap();
        let scale = 1.0f64.max(wr.abs()).max(wi.abs());
        assert!((got.re - wr).abs() <= 1e-15 * scale + 1e-13, "re at {sr}+{si}i: {} vs {wr}", got.re);
        assert!((got.im - wi).abs() <= 1e-15 * scale + 1e-13, "im at {sr}+{si}i: {} vs {wi}", got.im);
    }
}

#[test]
fn gamma_ratio_is_relatively_accurate_at_large_height() {
    // Gamma(conj s) / Gamma(s) has modulus one and phase -2 Im log Gamma(s)
    for &((sr, si), (_, wi)) in LOG_GAMMA_REF.iter().filter(|r| (r.0).1.abs() >= 1000.0) {
        let s = Complex64::new(sr, si);
        let d = log_gamma_diff(s.conj(), s).unwrap();
        let got = Complex64::from_polar(d.re.exp(), d.im);
        let want = Complex64::from_polar(1.0, -2.0 * wi);
        assert!((got - want).norm() <= 1e-12, "{s}: {got} vs {want}");
    }
}

#[test]
fn branches_agree_at_both_handovers() {
    for nu in 2..=20u32 {
        // series against recurrence just above the series limit
        let x = series_limit(nu) * (1.0 + 1e-9);
        let (a, b) = (j_series(nu, x), j_recurrence(nu, x));
        assert!((a - b).abs() <= 1e-10, "nu={nu} x={x}: series {a} recurrence {b}");
        // recurrence against Hankel at the Hankel threshold
        let x = hankel_threshold(nu).max(series_limit(nu) + 1.0);
        let (a, b) = (j_recurrence(nu, x), j_hankel(nu, x).0);
        assert!((a - b).abs() <= 1e-10, "nu={nu} x={x}: recurrence {a} Hankel {b}");
    }
    for nu in 0..=1u32 {
        for &x in &[20.0, 25.0, 30.0] {
            let (a, b) = (j_series(nu, x), j_hankel(nu, x).0);
            assert!((a - b).abs() <= 1e-10, "nu={nu} x={x}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn three_term_recurrence(nu in 1u32..=20, x in 0.01f64..100.0) {
        let lhs = bessel_j(nu - 1, x).unwrap() + bessel_j(nu + 1, x).unwrap();
        let rhs = 2.0 * nu as f64 / x * bessel_j(nu, x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10, "nu={} x={}: {} vs {}", nu, x, lhs, rhs);
    }

    #[test]
    fn log_gamma_reflection(re in -5.0f64..5.0, im in 0.05f64..8.0) {
        // log Gamma(s) + log Gamma(1 - s) = log(pi / sin(pi s)) mod 2 pi i
        let s = Complex64::new(re, im);
        let lhs = log_gamma_complex(s).unwrap() + log_gamma_complex(1.0 - s).unwrap();
        let rhs = (Complex64::new(std::f64::consts::PI, 0.0) / (s * std::f64::consts::PI).sin()).ln();
        let d = lhs - rhs;
        let k = (d.im / std::f64::consts::TAU).round();
        let scale = 1.0f64.max(lhs.norm());
        prop_assert!(d.re.abs() <= 1e-10 * scale, "re diff {}", d.re);
        prop_assert!((d.im - k * std::f64::consts::TAU).abs() <= 1e-10 * scale, "im diff {}", d.im);
    }

    #[test]
    fn i_scaled_recurrence(nu in 1u32..=30, x in 0.1f64..2000.0) {
        // I_{nu-1} - I_{nu+1} = (2 nu / x) I_nu
        let lhs = bessel_i_scaled(nu - 1, x).unwrap() - bessel_i_scaled(nu + 1, x).unwrap();
        let rhs = 2.0 * nu as f64 / x * bessel_i_scaled(nu, x).unwrap();
        let scale = bessel_i_scaled(nu - 1, x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-11 * scale + 1e-300);
    }
}
