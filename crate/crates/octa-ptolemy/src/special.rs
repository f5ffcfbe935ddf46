//! Complex special functions for the volume formulas.
//!
//! All branch cuts are principal: `log` has its cut on the negative real axis
//! with `arg` in `(-pi, pi]`, `sqrt` maps into the right half plane with the
//! positive imaginary axis included, and the dilogarithm has its cut on
//! `[1, inf)` with the value there taken as the limit from below.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SpecialError {
    #[error("Bloch-Wigner function is undefined at {0}")]
    BlochWignerDomain(Complex64),
}

const PI: f64 = std::f64::consts::PI;
pub const PI2_6: f64 = PI * PI / 6.0;

/// Bernoulli numbers B_0..B_50 (odd ones beyond B_1 vanish).
const BERNOULLI: [f64; 51] = [
    1.0,
    -0.5,
    1.0 / 6.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    1.0 / 42.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    5.0 / 66.0,
    0.0,
    -691.0 / 2730.0,
    0.0,
    7.0 / 6.0,
    0.0,
    -3617.0 / 510.0,
    0.0,
    43867.0 / 798.0,
    0.0,
    -174611.0 / 330.0,
    0.0,
    854513.0 / 138.0,
    0.0,
    -236364091.0 / 2730.0,
    0.0,
    8553103.0 / 6.0,
    0.0,
    -23749461029.0 / 870.0,
    0.0,
    8615841276005.0 / 14322.0,
    0.0,
    -7709321041217.0 / 510.0,
    0.0,
    2577687858367.0 / 6.0,
    0.0,
    -26315271553053477373.0 / 1919190.0,
    0.0,
    2929993913841559.0 / 6.0,
    0.0,
    -261082718496449122051.0 / 13530.0,
    0.0,
    1520097643918070802691.0 / 1806.0,
    0.0,
    -27833269579301024235023.0 / 690.0,
    0.0,
    596451111593912163277961.0 / 282.0,
    0.0,
    -5609403368997817686249127547.0 / 46410.0,
    0.0,
    495057205241079648212477525.0 / 66.0,
];

fn dilog_series(z: Complex64) -> Complex64 {
    // plain power series, good for |z| <= 1/2
    let mut term = z;
    let mut sum = z;
    for k in 2..80u32 {
        term *= z;
        let add = term / ((k * k) as f64);
        sum += add;
        if add.norm() < 1e-18 * sum.norm().max(1e-3) {
            break;
        }
    }
    sum
}

/// Principal log with the imaginary part of the argument normalised so that a
/// negative-zero imaginary part counts as the upper side of the cut.
fn ln_pc(z: Complex64) -> Complex64 {
    let z = if z.im == 0.0 {
        Complex64::new(z.re, 0.0)
    } else {
        z
    };
    z.ln()
}

fn dilog_bernoulli(z: Complex64) -> Complex64 {
    // Li2(z) = sum_{n>=0} B_n w^{n+1}/(n+1)!,  w = -log(1-z)
    let w = -ln_pc(Complex64::new(1.0, 0.0) - z);
    let mut pow = w; // w^{n+1}
    let mut fact = 1.0f64; // (n+1)!
    let mut sum = Complex64::new(0.0, 0.0);
    for (n, &b) in BERNOULLI.iter().enumerate() {
        fact *= (n + 1) as f64;
        if b != 0.0 {
            sum += pow * (b / fact);
        }
        pow *= w;
    }
    sum
}

/// Principal dilogarithm Li_2.
pub fn dilog(z: Complex64) -> Complex64 {
    if z == Complex64::new(0.0, 0.0) {
        return z;
    }
    if z == Complex64::new(1.0, 0.0) {
        return Complex64::new(PI2_6, 0.0);
    }
    let r = z.norm();
    if r <= 0.5 {
        return dilog_series(z);
    }
    if r >= 2.0 {
        // inversion: Li2(z) = -Li2(1/z) - pi^2/6 - log(-z)^2 / 2
        let l = ln_pc(-z);
        return -dilog(1.0 / z) - Complex64::new(PI2_6, 0.0) - 0.5 * l * l;
    }
    if (Complex64::new(1.0, 0.0) - z).norm() <= 0.5 {
        // reflection: Li2(z) = pi^2/6 - log(z) log(1-z) - Li2(1-z)
        let one_minus = Complex64::new(1.0, 0.0) - z;
        return Complex64::new(PI2_6, 0.0) - ln_pc(z) * ln_pc(one_minus) - dilog(one_minus);
    }
    dilog_bernoulli(z)
}

/// Bloch-Wigner function `D(z) = Im Li2(z) + log|z| arg(1-z)`.
///
/// Vanishes on the reals and gives the hyperbolic volume of the ideal
/// tetrahedron with cross-ratio `z`.
pub fn bloch_wigner(z: Complex64) -> Result<f64, SpecialError> {
    if z == Complex64::new(0.0, 0.0) || z == Complex64::new(1.0, 0.0) {
        return Err(SpecialError::BlochWignerDomain(z));
    }
    let li = dilog(z);
    let one_minus = Complex64::new(1.0, 0.0) - z;
    let arg = if one_minus.im == 0.0 {
        Complex64::new(one_minus.re, 0.0).arg()
    } else {
        one_minus.arg()
    };
    Ok(li.im + z.norm().ln() * arg)
}

/// Principal square root: argument of the result in `(-pi/2, pi/2]`.
pub fn principal_sqrt(z: Complex64) -> Complex64 {
    z.sqrt()
}
