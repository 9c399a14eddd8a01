use num_complex::Complex64;

use super::SpecError;

const LANCZOS_G: f64 = 671.0 / 128.0;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_1;
const LANCZOS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;
const POLE_TOL: f64 = 1e-12;

fn lanczos_ln_gamma(z: Complex64) -> Complex64 {
    let t = z + LANCZOS_G;
    let head = (z + 0.5) * t.ln() - t;
    let mut ser = Complex64::new(LANCZOS_C0, 0.0);
    for (j, c) in LANCZOS.iter().enumerate() {
        ser += *c / (z + (j + 1) as f64);
    }
    head + (ser * SQRT_2PI / z).ln()
}

fn check_pole(z: Complex64) -> Result<(), SpecError> {
    if z.re < 0.5 {
        let n = z.re.round();
        if n <= 0.0 && (z - n).norm() < POLE_TOL {
            return Err(SpecError::Pole { z, nearest: n as i64 });
        }
    }
    Ok(())
}

/// Principal branch of log Gamma: the continuation of the real function from
/// the positive axis, cut along the negative real axis.
pub fn ln_gamma(z: Complex64) -> Result<Complex64, SpecError> {
    check_pole(z)?;
    if z.re >= 0.5 {
        return Ok(lanczos_ln_gamma(z));
    }
    // lnG(z) = lnG(z + n) - sum ln(z + k) keeps the principal branch
    let n = (0.5 - z.re).ceil() as usize;
    let mut shift = Complex64::new(0.0, 0.0);
    for k in 0..n {
        shift += (z + k as f64).ln();
    }
    Ok(lanczos_ln_gamma(z + n as f64) - shift)
}

/// Gamma function; reflection is used left of `Re z = 1/2`.
pub fn gamma(z: Complex64) -> Result<Complex64, SpecError> {
    check_pole(z)?;
    if z.re >= 0.5 || z.im.abs() > 30.0 {
        return Ok(ln_gamma(z)?.exp());
    }
    let pi = std::f64::consts::PI;
    let s = (z * pi).sin();
    Ok(pi / (s * lanczos_ln_gamma(1.0 - z).exp()))
}

/// Rising factorial `(a)_n`.
pub fn pochhammer(a: Complex64, n: u32) -> Complex64 {
    (0..n).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (a + j as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn integer_and_half_values() {
        assert!(ln_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        assert!((ln_gamma(c(0.5, 0.0)).unwrap().re - 0.572_364_942_924_700_1).abs() < 1e-14);
        let mut fact = 1.0;
        for n in 1..20 {
            let g = gamma(c(n as f64, 0.0)).unwrap();
            assert!((g.re / fact - 1.0).abs() < 1e-13, "n={n}");
            fact *= n as f64;
        }
    }

    #[test]
    fn modulus_on_critical_lines() {
        for y in [0.1, 1.0, 3.0, 10.0, 40.0] {
            let half = ln_gamma(c(0.5, y)).unwrap().re * 2.0;
            let expect = (PI / (PI * y).cosh()).ln();
            assert!((half - expect).abs() < 1e-12 * expect.abs().max(1.0), "y={y}");
            let one = ln_gamma(c(1.0, y)).unwrap().re * 2.0;
            let expect = (PI * y / (PI * y).sinh()).ln();
            assert!((one - expect).abs() < 1e-12 * expect.abs().max(1.0), "y={y}");
        }
        let g = gamma(c(0.5, 1.0)).unwrap();
        assert!((g.norm_sqr() - 0.271_014_951_399_418_3).abs() < 1e-14);
    }

    #[test]
    fn left_half_plane() {
        // G(-1/2) = -2 sqrt(pi)
        let g = gamma(c(-0.5, 0.0)).unwrap();
        assert!((g.re + 2.0 * PI.sqrt()).abs() < 1e-13);
        assert!(g.im.abs() < 1e-14);
        // exp(lnG) agrees with the reflection formula off the axis
        let z = c(-2.3, 0.7);
        let a = gamma(z).unwrap();
        let b = ln_gamma(z).unwrap().exp();
        assert!((a - b).norm() < 1e-13 * a.norm());
    }

    #[test]
    fn branch_is_continuous_across_shift() {
        // principal loggamma: Im is continuous in z across Re z = 1/2
        let a = ln_gamma(c(0.5 - 1e-9, 3.0)).unwrap();
        let b = ln_gamma(c(0.5 + 1e-9, 3.0)).unwrap();
        assert!((a - b).norm() < 1e-7);
        let a = ln_gamma(c(-3.5, 1e-300)).unwrap();
        let b = ln_gamma(c(-3.5, -1e-300)).unwrap();
        assert!((a.im - b.im).abs() > 6.0);
    }

    #[test]
    fn poles_are_reported() {
        match gamma(c(-3.0, 1e-14)) {
            Err(SpecError::Pole { nearest, .. }) => assert_eq!(nearest, -3),
            other => panic!("{other:?}"),
        }
        assert!(ln_gamma(c(0.0, 0.0)).is_err());
        assert!(gamma(c(-3.0, 1e-9)).is_ok());
    }

    #[test]
    fn recurrence() {
        for z in [c(0.3, 0.2), c(2.7, -5.0), c(-4.2, 1.5), c(11.0, 20.0)] {
            let lhs = ln_gamma(z + 1.0).unwrap().exp();
            let rhs = z * ln_gamma(z).unwrap().exp();
            assert!((lhs - rhs).norm() < 1e-13 * lhs.norm(), "{z}");
        }
    }
}
