//! Holonomy-level invariants of a gluing-equation solution: obstruction class,
//! cusp shape, peripheral and Wirtinger holonomy, and the complex volume with
//! an independent Bloch-Wigner tetrahedron-sum oracle.

use num_complex::Complex64;
use thiserror::Error;

use crate::diagram::Diagram;
use crate::gluing::{check_nondegenerate, Assignment, Mode, Violation};
use crate::special::{bloch_wigner, dilog};

const PI: f64 = std::f64::consts::PI;
const TWO_PI: f64 = 2.0 * PI;

#[derive(Debug, Error)]
pub enum InvariantError {
    #[error("degenerate assignment: {0}")]
    Degenerate(Violation),
    #[error("sigma product {0} is farther than 1e-6 from ±1: not on the gluing variety")]
    NotOnVariety(Complex64),
    #[error("cusp-shape cross-check failed: lambda sum {lambda} vs lambda' sum {lambda_prime}")]
    LambdaMismatch {
        lambda: Complex64,
        lambda_prime: Complex64,
    },
    #[error("potential derivative for variable {id} is {value}, {err:.3e} away from the 2*pi*i lattice: not a gluing-variety point or branch failure")]
    OffLattice {
        id: usize,
        value: Complex64,
        err: f64,
    },
}

fn check(d: &Diagram, a: &Assignment) -> Result<(), InvariantError> {
    check_nondegenerate(d, a).map_err(InvariantError::Degenerate)
}

/// A 2x2 complex matrix considered up to global sign (a PSL(2,C) element).
///
/// Representatives are normalised to determinant 1 with the first entry of
/// largest modulus given argument in (-pi/2, pi/2].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjMat2(pub [[Complex64; 2]; 2]);

impl ProjMat2 {
    pub fn identity() -> Self {
        ProjMat2([
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        ])
    }

    pub fn upper(x: Complex64) -> Self {
        ProjMat2([
            [Complex64::new(1.0, 0.0), x],
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        ])
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn mul(&self, other: &ProjMat2) -> ProjMat2 {
        let a = &self.0;
        let b = &other.0;
        ProjMat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }

    /// Inverse, assuming determinant 1.
    pub fn inv(&self) -> ProjMat2 {
        let a = &self.0;
        ProjMat2([[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]])
    }

    /// Canonical representative: det-1, leading entry argument in (-pi/2, pi/2].
    pub fn normalized(&self) -> ProjMat2 {
        let det = self.det();
        let s = det.sqrt();
        let mut m = ProjMat2([
            [self.0[0][0] / s, self.0[0][1] / s],
            [self.0[1][0] / s, self.0[1][1] / s],
        ]);
        let entries = [m.0[0][0], m.0[0][1], m.0[1][0], m.0[1][1]];
        let lead = entries
            .iter()
            .find(|e| e.norm() > 1e-12)
            .copied()
            .unwrap_or(Complex64::new(1.0, 0.0));
        let arg = lead.arg();
        if !(-PI / 2.0 < arg && arg <= PI / 2.0) {
            m = ProjMat2([[-m.0[0][0], -m.0[0][1]], [-m.0[1][0], -m.0[1][1]]]);
        }
        m
    }

    /// Distance to `other` modulo global sign.
    pub fn dist_up_to_sign(&self, other: &ProjMat2) -> f64 {
        let mut dp = 0.0f64;
        let mut dm = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                dp = dp.max((self.0[i][j] - other.0[i][j]).norm());
                dm = dm.max((self.0[i][j] + other.0[i][j]).norm());
            }
        }
        dp.min(dm)
    }
}

/// Product of the sigma values rounded to ±1.
pub fn obstruction_class(d: &Diagram, a: &Assignment) -> Result<i8, InvariantError> {
    check(d, a)?;
    let prod: Complex64 = d
        .underpass_order()
        .iter()
        .map(|&ci| crate::ptolemy::sigma_at_crossing(d, ci, a))
        .product();
    let dp = (prod - 1.0).norm();
    let dm = (prod + 1.0).norm();
    if dp.min(dm) > 1e-6 {
        return Err(InvariantError::NotOnVariety(prod));
    }
    Ok(if dp <= dm { 1 } else { -1 })
}

/// lambda(c_i) per crossing, in under-pass order.
pub fn lambda_in_order(d: &Diagram, a: &Assignment) -> Vec<Complex64> {
    d.underpass_order()
        .iter()
        .map(|&ci| lambda_at(d, ci, a))
        .collect()
}

pub fn lambda_at(d: &Diagram, ci: usize, a: &Assignment) -> Complex64 {
    match a.mode {
        Mode::Z => {
            let f = d.z_frame(ci);
            let (za, zb, zc, zd) = (a.get(f.a), a.get(f.b), a.get(f.c), a.get(f.d));
            zb * zd * (zc - za) / (za * zc * (zb - zd))
        }
        Mode::W => {
            let f = d.w_frame(ci);
            let (wa, wb, wc, wd) = (a.get(f.a), a.get(f.b), a.get(f.c), a.get(f.d));
            (wa * wc - wb * wd) / ((wa - wd) * (wc - wb))
        }
    }
}

pub fn lambda_prime_at(d: &Diagram, ci: usize, a: &Assignment) -> Complex64 {
    match a.mode {
        Mode::Z => {
            let f = d.z_frame(ci);
            (a.get(f.b) - a.get(f.d)) / (a.get(f.c) - a.get(f.a))
        }
        Mode::W => {
            let f = d.w_frame(ci);
            let (wa, wb, wc, wd) = (a.get(f.a), a.get(f.b), a.get(f.c), a.get(f.d));
            (wa * wc - wb * wd) / ((wa - wb) * (wc - wd))
        }
    }
}

/// Cusp shape with the per-crossing lambda data backing it.
#[derive(Debug, Clone)]
pub struct CuspShape {
    pub cusp: Complex64,
    pub lambda: Vec<Complex64>,
    pub lambda_prime: Vec<Complex64>,
}

/// Cusp shape `sum lambda(c_i) - writhe`, cross-checked against the top-face
/// variant `sum lambda'(c_i) - writhe`.
pub fn cusp_shape(d: &Diagram, a: &Assignment) -> Result<CuspShape, InvariantError> {
    check(d, a)?;
    let lambda = lambda_in_order(d, a);
    let lambda_prime: Vec<Complex64> = d
        .underpass_order()
        .iter()
        .map(|&ci| lambda_prime_at(d, ci, a))
        .collect();
    let w = Complex64::new(d.writhe() as f64, 0.0);
    let s1: Complex64 = lambda.iter().sum::<Complex64>() - w;
    let s2: Complex64 = lambda_prime.iter().sum::<Complex64>() - w;
    if (s1 - s2).norm() > 1e-9 * (1.0 + s1.norm()) {
        return Err(InvariantError::LambdaMismatch {
            lambda: s1,
            lambda_prime: s2,
        });
    }
    Ok(CuspShape {
        cusp: s1,
        lambda,
        lambda_prime,
    })
}

/// Meridian and blackboard-framed longitude holonomy, in the gauge where the
/// meridian is `[[1,1],[0,1]]`.
pub fn peripheral_holonomy(
    d: &Diagram,
    a: &Assignment,
) -> Result<(ProjMat2, ProjMat2), InvariantError> {
    let cs = cusp_shape(d, a)?;
    let total: Complex64 = cs.lambda.iter().sum();
    Ok((
        ProjMat2::upper(Complex64::new(1.0, 0.0)),
        ProjMat2::upper(total),
    ))
}

/// M(c_i) from the mode's closed form.
pub fn crossing_matrix(d: &Diagram, ci: usize, a: &Assignment) -> ProjMat2 {
    match a.mode {
        Mode::Z => {
            let f = d.z_frame(ci);
            let (za, zb, zc, zd) = (a.get(f.a), a.get(f.b), a.get(f.c), a.get(f.d));
            ProjMat2([
                [za / zc, zb * zd * (zc - za) / (zc * zc * (zb - zd))],
                [
                    (za - zc) * (zb - zd) / (zb * zd),
                    Complex64::new(2.0, 0.0) - za / zc,
                ],
            ])
        }
        Mode::W => {
            let f = d.w_frame(ci);
            let (wa, wb, wc, wd) = (a.get(f.a), a.get(f.b), a.get(f.c), a.get(f.d));
            let s = wa - wb + wc - wd;
            ProjMat2([
                [
                    (wa - wd) / (wb - wc),
                    (wb * wd - wa * wc) / ((wb - wc) * (wb - wc)),
                ],
                [
                    s * s / (wa * wc - wb * wd),
                    Complex64::new(2.0, 0.0) - (wa - wd) / (wb - wc),
                ],
            ])
        }
    }
}

/// The Wirtinger generator images.
#[derive(Debug, Clone)]
pub struct WirtingerData {
    /// M(c_i) in under-pass order
    pub crossing_matrices: Vec<ProjMat2>,
    /// rho(mu_i^{e_i}) in under-pass order
    pub signed_generators: Vec<ProjMat2>,
    /// rho(mu_i) (inverted when e_i = -1)
    pub generators: Vec<ProjMat2>,
}

/// Holonomy images of the Wirtinger generators, computed inductively in the
/// gauge where the meridian is `[[1,1],[0,1]]`.
pub fn wirtinger_matrices(d: &Diagram, a: &Assignment) -> Result<WirtingerData, InvariantError> {
    let cs = cusp_shape(d, a)?;
    let e = d.signs_in_order();
    let mut crossing_matrices = Vec::with_capacity(d.n());
    let mut signed = Vec::with_capacity(d.n());
    let mut gens = Vec::with_capacity(d.n());
    let mut prefix = ProjMat2::identity();
    let mut lam_sum = Complex64::new(0.0, 0.0);
    for (i, &ci) in d.underpass_order().iter().enumerate() {
        let m = crossing_matrix(d, ci, a);
        lam_sum += cs.lambda[i];
        let l = ProjMat2::upper(lam_sum);
        let conj = prefix.inv().mul(&l).mul(&m).mul(&l.inv()).mul(&prefix);
        prefix = prefix.mul(&conj);
        let gen = if e[i] == 1 { conj } else { conj.inv() };
        crossing_matrices.push(m.normalized());
        signed.push(conj.normalized());
        gens.push(gen.normalized());
    }
    Ok(WirtingerData {
        crossing_matrices,
        signed_generators: signed,
        generators: gens,
    })
}

/// Result of checking that per-crossing generator matrices define a
/// boundary-parabolic representation of the knot group.
#[derive(Debug, Clone)]
pub struct WirtingerReport {
    /// worst Wirtinger-relation deviation (up to global sign)
    pub max_relation_err: f64,
    /// worst |trace ± 2| over the generators
    pub max_trace_err: f64,
    /// worst determinant deviation from 1
    pub max_det_err: f64,
    /// deviation of the longitude word from an upper unipotent (up to sign)
    pub longitude_err: f64,
    /// off-diagonal of the longitude word; recovers the lambda sum
    pub longitude_translation: Complex64,
    /// true when all generators are (numerically) the identity
    pub degenerate_identity: bool,
    pub failures: Vec<String>,
}

impl WirtingerReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Verify the Wirtinger relations for per-crossing generator matrices.
///
/// `mats[i]` is the holonomy of the meridian winding the over-arc at `c_{i+1}`.
/// Arc generators are read off from the crossings where the arc passes over;
/// arcs that never pass over are derived by propagating the relations. The
/// relation checked at `c_i` is `x_{a_i} = m^{-e_i} x_{a_{i-1}} m^{e_i}` up to
/// global sign, with `m` the over-arc generator.
pub fn verify_wirtinger(d: &Diagram, mats: &[ProjMat2]) -> WirtingerReport {
    let n = d.n();
    let e = d.signs_in_order();
    let over_arc = d.over_arc_in_order();
    let mut failures = Vec::new();

    let mut max_det_err = 0.0f64;
    let mut max_trace_err = 0.0f64;
    for (i, m) in mats.iter().enumerate() {
        let det_err = (m.det() - 1.0).norm();
        if det_err > 1e-10 {
            failures.push(format!(
                "generator {i} determinant deviates by {det_err:.3e}"
            ));
        }
        max_det_err = max_det_err.max(det_err);
        let t = m.trace();
        let terr = (t - 2.0).norm().min((t + 2.0).norm());
        if terr > 1e-8 {
            failures.push(format!("generator {i} is not parabolic (trace {t})"));
        }
        max_trace_err = max_trace_err.max(terr);
    }

    // arc -> generator matrix; start from the over-arc data
    let mut arc_mat: Vec<Option<ProjMat2>> = vec![None; n + 1];
    for (i, &arc) in over_arc.iter().enumerate() {
        match &arc_mat[arc] {
            Some(existing) => {
                let derr = existing.dist_up_to_sign(&mats[i]);
                if derr > 1e-8 {
                    failures.push(format!(
                        "arc {arc} receives inconsistent generators from two crossings (err {derr:.3e})"
                    ));
                }
            }
            None => arc_mat[arc] = Some(mats[i].normalized()),
        }
    }
    // derive missing arcs by propagation around the knot
    for _ in 0..n {
        for i in 1..=n {
            let a_in = if i == 1 { n } else { i - 1 };
            let a_out = i;
            let m = arc_mat[over_arc[i - 1]];
            if let Some(m) = m {
                let conj = |x: &ProjMat2, k: i8| {
                    if k == 1 {
                        m.mul(x).mul(&m.inv())
                    } else {
                        m.inv().mul(x).mul(&m)
                    }
                };
                if arc_mat[a_out].is_none() {
                    if let Some(xin) = arc_mat[a_in] {
                        arc_mat[a_out] = Some(conj(&xin, -e[i - 1]).normalized());
                    }
                }
                if arc_mat[a_in].is_none() {
                    if let Some(xout) = arc_mat[a_out] {
                        arc_mat[a_in] = Some(conj(&xout, e[i - 1]).normalized());
                    }
                }
            }
        }
    }

    let mut max_relation_err = 0.0f64;
    for i in 1..=n {
        let a_in = if i == 1 { n } else { i - 1 };
        let (xin, xout, m) = match (arc_mat[a_in], arc_mat[i], arc_mat[over_arc[i - 1]]) {
            (Some(a), Some(b), Some(m)) => (a, b, m),
            _ => {
                failures.push(format!(
                    "could not derive a generator for the arcs at c_{i}"
                ));
                continue;
            }
        };
        let rhs = if e[i - 1] == 1 {
            m.inv().mul(&xin).mul(&m)
        } else {
            m.mul(&xin).mul(&m.inv())
        };
        let err = xout.dist_up_to_sign(&rhs);
        if err > 1e-8 {
            failures.push(format!("Wirtinger relation fails at c_{i} (err {err:.3e})"));
        }
        max_relation_err = max_relation_err.max(err);
    }

    // blackboard longitude word: must be ±[[1, sum lambda],[0,1]]; the ratio
    // of the off-diagonal to the diagonal is sign-free and recovers sum lambda
    let mut word = ProjMat2::identity();
    for i in 0..n {
        let m = arc_mat[over_arc[i]].unwrap_or_else(ProjMat2::identity);
        word = word.mul(&if e[i] == 1 { m } else { m.inv() });
    }
    let longitude_err = word.0[1][0]
        .norm()
        .max((word.0[0][0] - word.0[1][1]).norm());
    let longitude_translation = word.0[0][1] / word.0[0][0];

    let degenerate_identity = mats
        .iter()
        .all(|m| m.dist_up_to_sign(&ProjMat2::identity()) < 1e-10);

    WirtingerReport {
        max_relation_err,
        max_trace_err,
        max_det_err,
        longitude_err,
        longitude_translation,
        degenerate_identity,
        failures,
    }
}

// ---------------------------------------------------------------------------
// complex volume

/// A dilogarithm term `sign * Li2(prod vars^exp)` of the potential.
struct DilogTerm {
    sign: f64,
    mono: Vec<(usize, i32)>,
}

/// A product-of-logs term `sign * log(m1) log(m2)`.
struct LogLogTerm {
    sign: f64,
    m1: Vec<(usize, i32)>,
    m2: Vec<(usize, i32)>,
}

struct Potential {
    dilogs: Vec<DilogTerm>,
    loglogs: Vec<LogLogTerm>,
    constant: f64,
}

fn potential_terms(d: &Diagram, mode: Mode) -> Potential {
    let mut dilogs = Vec::new();
    let mut loglogs = Vec::new();
    let mut constant = 0.0;
    match mode {
        Mode::Z => {
            for ci in 0..d.n() {
                let f = d.z_frame(ci);
                let (a, b, c, dd) = (f.a, f.b, f.c, f.d);
                dilogs.push(DilogTerm {
                    sign: 1.0,
                    mono: vec![(c, 1), (b, -1)],
                });
                dilogs.push(DilogTerm {
                    sign: -1.0,
                    mono: vec![(c, 1), (dd, -1)],
                });
                dilogs.push(DilogTerm {
                    sign: 1.0,
                    mono: vec![(a, 1), (dd, -1)],
                });
                dilogs.push(DilogTerm {
                    sign: -1.0,
                    mono: vec![(a, 1), (b, -1)],
                });
            }
        }
        Mode::W => {
            for ci in 0..d.n() {
                let f = d.w_frame(ci);
                let (a, b, c, dd) = (f.a, f.b, f.c, f.d);
                if d.crossings()[ci].sign > 0 {
                    dilogs.push(DilogTerm {
                        sign: -1.0,
                        mono: vec![(dd, 1), (a, -1)],
                    });
                    dilogs.push(DilogTerm {
                        sign: -1.0,
                        mono: vec![(dd, 1), (c, -1)],
                    });
                    dilogs.push(DilogTerm {
                        sign: 1.0,
                        mono: vec![(b, 1), (dd, 1), (a, -1), (c, -1)],
                    });
                    dilogs.push(DilogTerm {
                        sign: 1.0,
                        mono: vec![(a, 1), (b, -1)],
                    });
                    dilogs.push(DilogTerm {
                        sign: 1.0,
                        mono: vec![(c, 1), (b, -1)],
                    });
                    loglogs.push(LogLogTerm {
                        sign: 1.0,
                        m1: vec![(a, 1), (b, -1)],
                        m2: vec![(c, 1), (b, -1)],
                    });
                    constant -= PI * PI / 6.0;
                } else {
                    dilogs.push(DilogTerm {
                        sign: 1.0,
                        mono: vec![(a, 1), (b, -1)],
                    });
                    dilogs.push(DilogTerm {
                        sign: 1.0,
                        mono: vec![(a, 1), (dd, -1)],
                    });
                    dilogs.push(DilogTerm {
                        sign: -1.0,
                        mono: vec![(a, 1), (c, 1), (b, -1), (dd, -1)],
                    });
                    dilogs.push(DilogTerm {
                        sign: -1.0,
                        mono: vec![(b, 1), (c, -1)],
                    });
                    dilogs.push(DilogTerm {
                        sign: -1.0,
                        mono: vec![(dd, 1), (c, -1)],
                    });
                    loglogs.push(LogLogTerm {
                        sign: -1.0,
                        m1: vec![(b, 1), (c, -1)],
                        m2: vec![(dd, 1), (c, -1)],
                    });
                    constant += PI * PI / 6.0;
                }
            }
        }
    }
    Potential {
        dilogs,
        loglogs,
        constant,
    }
}

fn mono_eval(mono: &[(usize, i32)], a: &Assignment) -> Complex64 {
    let mut out = Complex64::new(1.0, 0.0);
    for &(v, e) in mono {
        out *= a.get(v).powi(e);
    }
    out
}

/// The complex volume and its backing data.
#[derive(Debug, Clone)]
pub struct ComplexVolume {
    /// hyperbolic volume of the representation
    pub vol: f64,
    /// Chern-Simons part, reduced mod pi^2 into (-pi^2/2, pi^2/2]
    pub cs: f64,
    /// branch-corrected potential value
    pub corrected_potential: Complex64,
    /// lattice indices k_v with x_v dV/dx_v = 2 pi i k_v
    pub lattice: Vec<(usize, i64)>,
    /// worst distance of a derivative from the lattice, in units of 2 pi
    pub max_lattice_err: f64,
}

/// Evaluate the potential function of the diagram, its analytic derivative
/// corrections, and the branch-corrected value; returns (vol, cs mod pi^2).
pub fn complex_volume(d: &Diagram, a: &Assignment) -> Result<ComplexVolume, InvariantError> {
    check(d, a)?;
    let pot = potential_terms(d, a.mode);
    let nvars = match a.mode {
        Mode::Z => d.num_segments(),
        Mode::W => d.num_regions(),
    };
    let mut value = Complex64::new(pot.constant, 0.0);
    let mut corr = vec![Complex64::new(0.0, 0.0); nvars + 1];
    for t in &pot.dilogs {
        let r = mono_eval(&t.mono, a);
        value += t.sign * dilog(r);
        let l = (Complex64::new(1.0, 0.0) - r).ln();
        for &(v, e) in &t.mono {
            corr[v] += -t.sign * (e as f64) * l;
        }
    }
    for t in &pot.loglogs {
        let r1 = mono_eval(&t.m1, a);
        let r2 = mono_eval(&t.m2, a);
        value += t.sign * r1.ln() * r2.ln();
        for &(v, e) in &t.m1 {
            corr[v] += t.sign * (e as f64) * r2.ln();
        }
        for &(v, e) in &t.m2 {
            corr[v] += t.sign * (e as f64) * r1.ln();
        }
    }

    let mut corrected = value;
    let mut lattice = Vec::with_capacity(nvars);
    let mut max_err = 0.0f64;
    #[allow(clippy::needless_range_loop)]
    for v in 1..=nvars {
        let k = corr[v] / Complex64::new(0.0, TWO_PI);
        let kk = k.re.round();
        let err = (k - kk).norm();
        max_err = max_err.max(err);
        if err > 1e-8 {
            return Err(InvariantError::OffLattice {
                id: v,
                value: corr[v],
                err,
            });
        }
        lattice.push((v, kk as i64));
        corrected -= Complex64::new(0.0, TWO_PI * kk) * a.get(v).ln();
    }

    let vol = corrected.im;
    let pi2 = PI * PI;
    let mut cs = -corrected.re;
    cs -= pi2 * (cs / pi2).round();
    if cs <= -pi2 / 2.0 {
        cs += pi2;
    } else if cs > pi2 / 2.0 {
        cs -= pi2;
    }
    Ok(ComplexVolume {
        vol,
        cs,
        corrected_potential: corrected,
        lattice,
        max_lattice_err: max_err,
    })
}

/// The potential derivatives alone (used by property tests for the lattice
/// quantization statement).
pub fn potential_derivatives(d: &Diagram, a: &Assignment) -> Vec<Complex64> {
    let pot = potential_terms(d, a.mode);
    let nvars = match a.mode {
        Mode::Z => d.num_segments(),
        Mode::W => d.num_regions(),
    };
    let mut corr = vec![Complex64::new(0.0, 0.0); nvars + 1];
    for t in &pot.dilogs {
        let r = mono_eval(&t.mono, a);
        let l = (Complex64::new(1.0, 0.0) - r).ln();
        for &(v, e) in &t.mono {
            corr[v] += -t.sign * (e as f64) * l;
        }
    }
    for t in &pot.loglogs {
        let r1 = mono_eval(&t.m1, a);
        let r2 = mono_eval(&t.m2, a);
        for &(v, e) in &t.m1 {
            corr[v] += t.sign * (e as f64) * r2.ln();
        }
        for &(v, e) in &t.m2 {
            corr[v] += t.sign * (e as f64) * r1.ln();
        }
    }
    corr.remove(0);
    corr
}

// ---------------------------------------------------------------------------
// tetrahedron-sum volume oracle

/// Cross-ratio `[p0,p1,p2,p3] = (p0-p3)(p1-p2)/((p0-p2)(p1-p3))`, `None` = inf.
fn cross_ratio(p: [Option<Complex64>; 4]) -> Option<Complex64> {
    let d = |x: Option<Complex64>, y: Option<Complex64>| match (x, y) {
        (Some(a), Some(b)) => Some(a - b),
        _ => None,
    };
    let [p0, p1, p2, p3] = p;
    let v = match (p0, p1, p2, p3) {
        (None, _, _, _) => d(p1, p2)? / d(p1, p3)?,
        (_, None, _, _) => d(p0, p3)? / d(p0, p2)?,
        (_, _, None, _) => d(p0, p3)? / d(p1, p3)?,
        (_, _, _, None) => d(p1, p2)? / d(p0, p2)?,
        _ => d(p0, p3)? * d(p1, p2)? / (d(p0, p2)? * d(p1, p3)?),
    };
    if v.is_finite() {
        Some(v)
    } else {
        None
    }
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub volume: f64,
    /// number of flat tetrahedra that contributed zero (with a warning)
    pub flat_tetrahedra: usize,
}

/// Independent volume oracle: reconstruct the six ideal vertex positions of
/// each octahedron, subdivide (4 tetrahedra per crossing in z-mode, 5 in
/// w-mode), and sum the Bloch-Wigner function over the cross-ratios. Flat or
/// degenerate tetrahedra contribute zero.
pub fn tetra_volume_oracle(d: &Diagram, a: &Assignment) -> Result<OracleResult, InvariantError> {
    check(d, a)?;
    let mut total = 0.0f64;
    let mut flat = 0usize;
    let mut add = |cr: Option<Complex64>| match cr {
        Some(z) if z.im.abs() > 1e-14 * (1.0 + z.norm()) => {
            total += bloch_wigner(z).unwrap_or(0.0);
        }
        _ => flat += 1,
    };
    for ci in 0..d.n() {
        match a.mode {
            Mode::Z => {
                let f = d.z_frame(ci);
                let (za, zb, zc, zd) = (a.get(f.a), a.get(f.b), a.get(f.c), a.get(f.d));
                let den = zc - za;
                let va = Some(za / den);
                let vb = Some(zb / den);
                let vc = Some(zc / den);
                let vd = Some(zd / den);
                let v0 = Some(Complex64::new(0.0, 0.0));
                let vinf = None;
                add(cross_ratio([v0, vinf, vd, va]));
                add(cross_ratio([v0, vinf, vc, vd]));
                add(cross_ratio([v0, vinf, vb, vc]));
                add(cross_ratio([v0, vinf, va, vb]));
            }
            Mode::W => {
                let f = d.w_frame(ci);
                let (wa, wb, wc, wd) = (a.get(f.a), a.get(f.b), a.get(f.c), a.get(f.d));
                let va = Some(Complex64::new(0.0, 0.0));
                let vc = Some(Complex64::new(1.0, 0.0));
                let vb = Some(wa / (wa - wb));
                let vd = Some(wd / (wd - wc));
                let den0 = wa - wb + wc - wd;
                let v0 = if den0.norm() < 1e-13 * a.scale() {
                    None
                } else {
                    Some((wa - wd) / den0)
                };
                let vinf = None;
                add(cross_ratio([vinf, vb, va, vc]));
                add(cross_ratio([vinf, vd, vc, va]));
                add(cross_ratio([v0, vc, vd, vb]));
                add(cross_ratio([v0, va, vb, vd]));
                add(cross_ratio([va, vc, vb, vd]));
            }
        }
    }
    Ok(OracleResult {
        volume: total,
        flat_tetrahedra: flat,
    })
}

// ---------------------------------------------------------------------------
// full report

/// Everything the invariant engine computes from one verified solution.
#[derive(Debug, Clone)]
pub struct InvariantReport {
    pub obstruction: i8,
    pub cusp_shape: Complex64,
    pub lambda: Vec<Complex64>,
    pub lambda_prime: Vec<Complex64>,
    pub wirtinger: Vec<ProjMat2>,
    pub volume: ComplexVolume,
    pub oracle_volume: f64,
    pub max_residual: f64,
}

/// Compute the full invariant report for a verified solution.
pub fn invariant_report(
    d: &Diagram,
    a: &Assignment,
    max_residual: f64,
) -> Result<InvariantReport, InvariantError> {
    let obstruction = obstruction_class(d, a)?;
    let cs = cusp_shape(d, a)?;
    let wd = wirtinger_matrices(d, a)?;
    let vol = complex_volume(d, a)?;
    let oracle = tetra_volume_oracle(d, a)?;
    Ok(InvariantReport {
        obstruction,
        cusp_shape: cs.cusp,
        lambda: cs.lambda,
        lambda_prime: cs.lambda_prime,
        wirtinger: wd.generators,
        volume: vol,
        oracle_volume: oracle.volume,
        max_residual,
    })
}
