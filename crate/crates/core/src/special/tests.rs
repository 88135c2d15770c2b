use super::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn uh(re: f64, im: f64) -> UpperHalfArgument {
    UpperHalfArgument::new(c(re, im)).unwrap()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

// [H0, H0', H0'', H0'''] at selected points, 50-digit reference values.
const GOLDEN: [((f64, f64), [(f64, f64); 4]); 9] = [
    ((0.0, 1.0), [(0.0, -0.26803248203398855), (0.38318604387456484, 0.0), (0.0, 0.6512185259085534), (-1.417590613657683, 0.0)]),
    ((0.0, 0.5), [(0.0, -0.5885034586972077), (1.0545231687568029, 0.0), (0.0, 2.6975497962108133), (-10.667715436205642, 0.0)]),
    (
        (0.3, 2.0),
        [
            (0.02595941365945455, -0.06733491770739915),
            (0.08158473401205542, 0.03386276054452954),
            (-0.04850243109042661, 0.10474583209878105),
            (-0.14588787788098118, -0.07903095638556773),
        ],
    ),
    (
        (-5.0, 3.0),
        [
            (0.011491471543250507, -0.01150470257779589),
            (0.012835219682808293, 0.01120220213651539),
            (-0.01059236883723594, 0.014284604628707709),
            (-0.015766391762071983, -0.009548004048149698),
        ],
    ),
    (
        (6.0, 1.0),
        [
            (0.04613671738446531, -0.10908810919434624),
            (0.10720153111482929, 0.05557550180767137),
            (-0.06502279004653685, 0.10297320433674627),
            (-0.09621248039124809, -0.07355006017479261),
        ],
    ),
    (
        (0.0, 10.0),
        [(0.0, -1.1319139224400061e-05), (1.1872177911109038e-05, 0.0), (0.0, 1.2506357015510966e-05), (-1.3241535391771225e-05, 0.0)],
    ),
    (
        (7.0, 7.0),
        [
            (0.00020438530380453227, -0.00010372300385725503),
            (0.00010036279376555502, 0.0002152510498545314),
            (-0.0002269291497773956, 9.551669985089958e-05),
            (-8.877975091514682e-05, -0.00023930700639701735),
        ],
    ),
    (
        (-2.0, 0.1),
        [
            (-0.21289839425450388, 0.4554565516985421),
            (-0.5223126526206523, -0.11248733771019713),
            (-0.044801498880230516, -0.5245852152103774),
            (0.38624497278082476, -0.19117298564290058),
        ],
    ),
    (
        (20.0, 5.0),
        [
            (0.0011491882609597792, 0.00027726830203516825),
            (-0.0003058380192121067, 0.0011497519508627022),
            (-0.0011483223771246531, -0.00033497237053708496),
            (0.00036445569464971976, -0.0011447725477701555),
        ],
    ),
];

#[test]
fn digamma_values() {
    assert!((digamma(1).unwrap() + 0.577_215_664_901_532_86).abs() < 1e-16);
    assert!((digamma(2).unwrap() - (1.0 - EULER)).abs() < 1e-15);
    assert!((digamma(4).unwrap() - (11.0 / 6.0 - EULER)).abs() < 1e-15);
    assert!(digamma(0).is_err());
    assert!(digamma(-3).is_err());
}

#[test]
fn coefficient_examples() {
    let s0 = series_coefficients(0);
    assert_eq!((s0.a, s0.b, s0.c, s0.d), (1.0, 0.0, 0.0, 0.0));
    assert!((s0.cc - c(-std::f64::consts::LN_2 + EULER, -0.5 * PI)).norm() < 1e-15);
    let s1 = series_coefficients(1);
    assert_eq!((s1.a, s1.b, s1.c, s1.d), (-0.25, -0.5, -0.5, 0.0));
    let s2 = series_coefficients(2);
    assert_eq!((s2.a, s2.b, s2.c, s2.d), (1.0 / 64.0, 1.0 / 16.0, 3.0 / 16.0, 3.0 / 8.0));
    for l in 0..40 {
        assert_eq!(series_coefficients(l).cc.im, -0.5 * PI);
        let r = series_coefficients(l + 1).a / series_coefficients(l).a;
        let expect = -1.0 / (4.0 * ((l + 1) * (l + 1)) as f64);
        assert!(((r - expect) / expect).abs() < 4.0 * f64::EPSILON);
    }
}

#[test]
fn golden_values_on_dispatching_path() {
    for (zz, vals) in GOLDEN.iter() {
        let got = hankel0_derivs(uh(zz.0, zz.1)).unwrap();
        for m in 0..4 {
            let want = c(vals[m].0, vals[m].1);
            assert!(rel(got[m], want) < 5e-13, "z={zz:?} m={m} got {} want {}", got[m], want);
        }
    }
}

#[test]
fn series_path_matches_golden_up_to_ten() {
    for (zz, vals) in GOLDEN.iter().filter(|(z, _)| z.0.hypot(z.1) <= 10.0) {
        let got = hankel0_series(uh(zz.0, zz.1), 3).unwrap();
        for m in 0..4 {
            let want = c(vals[m].0, vals[m].1);
            assert!(rel(got[m], want) < 1e-13, "z={zz:?} m={m}");
        }
    }
}

#[test]
fn integral_half_order_closed_form() {
    let z = c(0.0, 10.0);
    let h = hankel_integral(0.5, uh(0.0, 10.0)).unwrap();
    let exact = c(0.0, -1.0) * (2.0 / (PI * z)).sqrt() * (c(0.0, 1.0) * z).exp();
    assert!(rel(h, exact) < 1e-14);
    let h = hankel_integral(1.5, uh(5.0, 5.0)).unwrap();
    assert!(rel(h, c(3.221820910173506e-05, 0.0022328516036995353)) < 1e-13);
}

#[test]
fn integral_integer_orders() {
    let h1 = hankel_integral(1.0, uh(0.0, 10.0)).unwrap();
    assert!(rel(h1, c(-1.1872177911109038e-05, 0.0)) < 1e-13);
    let h2 = hankel_integral(2.0, uh(12.0, 3.0)).unwrap();
    assert!(rel(h2, c(-0.0028065772606764077, 0.011440804049434919)) < 1e-13);
    assert!(hankel_integral(0.0, uh(1.0, 1.0)).is_err());
    assert!(hankel_integral(0.7, uh(1.0, 1.0)).is_err());
}

#[test]
fn first_derivative_equals_minus_h1_small_argument() {
    let s = hankel0_series(uh(0.0, 0.5), 1).unwrap();
    let h1 = hankel_integral(1.0, uh(0.0, 0.5)).unwrap();
    assert!(rel(s[1], -h1) < 1e-12);
}

#[test]
fn bessel_ode_residual() {
    for &(x, y) in &[(0.1, 0.2), (1.0, 1.0), (-3.0, 2.0), (4.0, 0.5), (-7.0, 3.0)] {
        let z = c(x, y);
        let h = hankel0_series(uh(x, y), 2).unwrap();
        let res = z * h[2] + h[1] + z * h[0];
        let scale = (z * h[2]).norm() + h[1].norm() + (z * h[0]).norm();
        assert!(res.norm() < 1e-13 * scale, "z={z}");
    }
}

#[test]
fn rejects_bad_arguments() {
    assert!(UpperHalfArgument::new(c(1.0, 0.0)).is_err());
    assert!(UpperHalfArgument::new(c(1.0, -1.0)).is_err());
    assert!(hankel0_series(uh(1.0, 1.0), 4).is_err());
}

#[rustfmt::skip]
const SEQUENCE_GOLDEN: [(f64, f64, usize, [f64; 2], [f64; 2]); 30] = [
    (0.3, 0.2, 0, [0.987314945728005, -0.029812142560859498], [0.5772492441660396, -0.7245707521415663]),
    (0.3, 0.2, 1, [0.15054697730054617, 0.09712821258261556], [-0.7854306483621127, -1.5654099819316434]),
    (0.3, 0.2, 5, [-1.5498491238156774e-06, 3.2480317934905284e-07], [-8353.445748455975, 39368.02391269604]),
    (0.3, 0.2, 17, [-5.308977884945413e-28, -3.3998893805501064e-28], [1.6013466814986427e+25, 2.501674333771793e+25]),
    (0.3, 0.2, 32, [5.882213542684159e-60, -2.0232028196283047e-61], [5.819626252289509e+55, -1.689100987734971e+57]),
    (0.0, 31.6, 0, [3771535636788.6855, 0.0], [0.0, -2.6711561892505527e-15]),
    (0.0, 31.6, 1, [0.0, 3711371585844.458], [-2.7130970329803275e-15, 0.0]),
    (0.0, 31.6, 5, [0.0, 2525227541454.253], [-3.9403828793532214e-15, 0.0]),
    (0.0, 31.6, 17, [0.0, 40400491096.02501], [-2.1957136459799486e-13, 0.0]),
    (0.0, 31.6, 32, [857562.5464233069, 0.0], [0.0, -8.253028131081519e-09]),
    (22.0, 9.0, 0, [-552.9948039460328, -368.12611818435767], [-1.1302036847330972e-05, 1.6687831806866195e-05]),
    (22.0, 9.0, 1, [354.4057319072582, -555.9049242164764], [1.6604982774212988e-05, 1.17159970026532e-05]),
    (22.0, 9.0, 5, [50.380821712596386, -545.649735819462], [1.1817209147121509e-05, 2.1829688626407976e-05]),
    (22.0, 9.0, 17, [47.37121396567592, -28.053999674089262], [0.00028354667707055666, -3.13320966105972e-05]),
    (22.0, 9.0, 32, [-0.004470084328569425, 0.0013706705129346148], [-1.37759364081594, 2.094492175622829]),
    (0.001, 0.0001, 0, [0.9999997525000147, -4.999999381250025e-08], [0.9365484780995527, -4.468249383075996]),
    (0.001, 0.0001, 1, [0.0004999999393750024, 4.9999981312501276e-05], [-63.030953028101884, -630.318952757029]),
    (0.001, 0.0001, 5, [2.345051997233834e-19, 1.2760676361534415e-19], [-1.1397495736355762e+17, -2.0945379106887366e+17]),
    (0.001, 0.0001, 17, [-2.8771541708061946e-72, 2.3164822470174406e-71], [-7.960195306283425e+68, 9.886848513680209e+67]),
    (0.001, 0.0001, 32, [-1.0363678821900224e-141, -4.958053664912244e-143], [4.581320061067295e+137, 9.576203284460729e+138]),
    (-4.0, 0.5, 0, [-0.44550544269072156, -0.036337927869234864], [0.23930995475087635, 0.004384287922647838]),
    (-4.0, 0.5, 1, [0.08611737063491678, -0.19654688389402303], [-0.024211961076141594, -0.24504421272221352]),
    (-4.0, 0.5, 5, [-0.12625188465893303, 0.05888640351981294], [-0.10517371358002284, 0.6700339006373323]),
    (-4.0, 0.5, 17, [1.5790776353309002e-10, 2.981763804644136e-10], [-50633122.34331185, -26339320.983388133]),
    (-4.0, 0.5, 32, [-1.2833745672130789e-26, 1.341012535094278e-26], [-3.894380378101105e+23, 3.741840449025866e+23]),
    (70.0, 30.0, 0, [466933582779.8641, -144691737915.58624], [8.503433718957118e-15, -8.908535508409743e-16]),
    (70.0, 30.0, 1, [147144665142.4134, 464857677197.9088], [-8.419901617831639e-16, -8.530911349379705e-15]),
    (70.0, 30.0, 5, [200343581907.30408, 412473426357.1846], [4.171201380592458e-16, -9.1186509812141e-15]),
    (70.0, 30.0, 17, [204998661982.8315, -108196300053.24602], [1.8307214128950438e-14, 1.1381476758514706e-15]),
    (70.0, 30.0, 32, [31232113290.731945, -8455085226.434752], [1.3402639871262997e-13, -2.895103956168261e-14]),
];

#[test]
fn integer_order_sequences_match_golden() {
    let mut worst = (0.0f64, 0.0f64);
    for &(re, im, m, j, h) in &SEQUENCE_GOLDEN {
        let z = if im == 0.0 { continue } else { uh(re, im) };
        let js = bessel::bessel_j_sequence(z, 32).unwrap();
        let hs = bessel::hankel_sequence(z, 32).unwrap();
        worst.0 = worst.0.max(rel(js[m], c(j[0], j[1])));
        worst.1 = worst.1.max(rel(hs[m], c(h[0], h[1])));
    }
    assert!(worst.0 < 1e-12 && worst.1 < 1e-12, "{worst:?}");
}

#[test]
fn sequences_satisfy_wronskian() {
    // J_{m+1} H_m − J_m H_{m+1} = 2i/(πz)
    for (re, im) in [(0.5, 0.5), (3.0, 0.01), (0.0, 12.0), (-9.0, 4.0), (40.0, 20.0)] {
        let z = uh(re, im);
        let js = bessel::bessel_j_sequence(z, 40).unwrap();
        let hs = bessel::hankel_sequence(z, 41).unwrap();
        let want = c(0.0, 2.0 / std::f64::consts::PI) / z.value();
        for m in 0..40 {
            let w = js[m + 1] * hs[m] - js[m] * hs[m + 1];
            let scale = (js[m + 1] * hs[m]).norm() + (js[m] * hs[m + 1]).norm();
            assert!((w - want).norm() < 1e-12 * scale.max(want.norm()), "z={re}+{im}i m={m}");
        }
    }
}
