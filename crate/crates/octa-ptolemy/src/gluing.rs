//! Gluing-equation systems for the two octahedral triangulations.
//!
//! T4 carries one equation per segment (segment variables `z`); T5 one per
//! region (region variables `w`). Equations are stored in factored form: a
//! product of homogeneous polynomial bases raised to integer exponents, with
//! target value 1. Every equation is homogeneous of total degree zero, so
//! residuals are invariant under the global scaling action on the variables.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::diagram::{Diagram, SegCase};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Mode {
    Z,
    W,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Z => write!(f, "z"),
            Mode::W => write!(f, "w"),
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "z" | "Z" => Ok(Mode::Z),
            "w" | "W" => Ok(Mode::W),
            other => Err(format!("unknown mode `{other}`, expected z or w")),
        }
    }
}

/// Map from variable ids (segments or regions) to nonzero complex values.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub mode: Mode,
    pub values: BTreeMap<usize, Complex64>,
}

impl Assignment {
    pub fn new(mode: Mode, values: BTreeMap<usize, Complex64>) -> Self {
        Assignment { mode, values }
    }

    pub fn from_pairs(mode: Mode, pairs: &[(usize, Complex64)]) -> Self {
        Assignment {
            mode,
            values: pairs.iter().copied().collect(),
        }
    }

    pub fn get(&self, id: usize) -> Complex64 {
        self.values[&id]
    }

    /// Largest |value|; the reference scale for degeneracy tolerances.
    pub fn scale(&self) -> f64 {
        self.values
            .values()
            .map(|v| v.norm())
            .fold(0.0f64, f64::max)
    }

    pub fn scaled(&self, c: Complex64) -> Assignment {
        Assignment {
            mode: self.mode,
            values: self.values.iter().map(|(&k, &v)| (k, c * v)).collect(),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GluingError {
    #[error("T4 degenerate: diagram has a kink (segment {0} has both ends at one crossing); the segment-variable system has no solution")]
    T4Degenerate(usize),
    #[error("assignment mode {actual} does not match system mode {expected}")]
    ModeMismatch { expected: Mode, actual: Mode },
    #[error("assignment is missing variable {0}")]
    MissingVariable(usize),
    #[error("degenerate assignment: {0}")]
    Degenerate(Violation),
}

/// A violated non-degeneracy constraint.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    ZeroValue {
        id: usize,
    },
    EqualAtCrossing {
        crossing: usize,
        seg_a: usize,
        seg_b: usize,
    },
    EqualAcrossSegment {
        segment: usize,
        region_a: usize,
        region_b: usize,
    },
    CrossingProducts {
        crossing: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroValue { id } => write!(f, "variable {id} is zero"),
            Violation::EqualAtCrossing {
                crossing,
                seg_a,
                seg_b,
            } => write!(
                f,
                "segments {seg_a} and {seg_b} share crossing {crossing} but have equal values"
            ),
            Violation::EqualAcrossSegment {
                segment,
                region_a,
                region_b,
            } => write!(
                f,
                "regions {region_a} and {region_b} share segment {segment} but have equal values"
            ),
            Violation::CrossingProducts { crossing } => {
                write!(f, "w_a w_c = w_b w_d at crossing {crossing}")
            }
        }
    }
}

/// Monomial: coefficient times a product of variables with integer exponents.
#[derive(Debug, Clone)]
pub struct Monomial {
    pub coeff: f64,
    pub vars: Vec<(usize, i32)>,
}

impl Monomial {
    fn degree(&self) -> i32 {
        self.vars.iter().map(|&(_, e)| e).sum()
    }

    fn eval(&self, a: &Assignment) -> Complex64 {
        let mut out = Complex64::new(self.coeff, 0.0);
        for &(v, e) in &self.vars {
            out *= a.get(v).powi(e);
        }
        out
    }

    /// v d(monomial)/dv evaluated at `a` equals exponent * monomial value.
    fn log_deriv_weight(&self, var: usize) -> i32 {
        self.vars
            .iter()
            .filter(|&&(v, _)| v == var)
            .map(|&(_, e)| e)
            .sum()
    }
}

/// A homogeneous polynomial base of an equation factor.
#[derive(Debug, Clone)]
pub struct Poly {
    pub monomials: Vec<Monomial>,
}

impl Poly {
    fn var(id: usize) -> Poly {
        Poly {
            monomials: vec![Monomial {
                coeff: 1.0,
                vars: vec![(id, 1)],
            }],
        }
    }

    /// x - y
    fn diff(x: usize, y: usize) -> Poly {
        Poly {
            monomials: vec![
                Monomial {
                    coeff: 1.0,
                    vars: vec![(x, 1)],
                },
                Monomial {
                    coeff: -1.0,
                    vars: vec![(y, 1)],
                },
            ],
        }
    }

    /// x*y - u*v (a degree-2 base; ids may repeat)
    fn prod_diff(x: usize, y: usize, u: usize, v: usize) -> Poly {
        let pair = |a: usize, b: usize, coeff: f64| {
            let vars = if a == b {
                vec![(a, 2)]
            } else {
                vec![(a, 1), (b, 1)]
            };
            Monomial { coeff, vars }
        };
        Poly {
            monomials: vec![pair(x, y, 1.0), pair(u, v, -1.0)],
        }
    }

    fn degree(&self) -> i32 {
        self.monomials[0].degree()
    }

    fn is_homogeneous(&self) -> bool {
        let d = self.degree();
        self.monomials.iter().all(|m| m.degree() == d)
    }

    pub fn eval(&self, a: &Assignment) -> Complex64 {
        self.monomials.iter().map(|m| m.eval(a)).sum()
    }

    /// v * d(poly)/dv at `a`.
    fn euler_deriv(&self, var: usize, a: &Assignment) -> Complex64 {
        self.monomials
            .iter()
            .map(|m| m.eval(a) * (m.log_deriv_weight(var) as f64))
            .sum()
    }

    fn variables(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .monomials
            .iter()
            .flat_map(|m| m.vars.iter().map(|&(v, _)| v))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

#[derive(Debug, Clone)]
pub struct Factor {
    pub base: Poly,
    pub exponent: i32,
}

/// Provenance of an equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquationTag {
    Segment(usize),
    Region(usize),
}

#[derive(Debug, Clone)]
pub struct Equation {
    pub tag: EquationTag,
    pub factors: Vec<Factor>,
}

impl Equation {
    pub fn eval(&self, a: &Assignment) -> Complex64 {
        let mut out = Complex64::new(1.0, 0.0);
        for f in &self.factors {
            out *= f.base.eval(a).powi(f.exponent);
        }
        out
    }

    /// log of the equation value, as a sum of principal logs of the factors.
    pub fn log_eval(&self, a: &Assignment) -> Complex64 {
        let mut out = Complex64::new(0.0, 0.0);
        for f in &self.factors {
            out += f.base.eval(a).ln() * (f.exponent as f64);
        }
        out
    }

    fn degree(&self) -> i32 {
        self.factors
            .iter()
            .map(|f| f.base.degree() * f.exponent)
            .sum()
    }
}

/// System of degree-zero equations with target value 1.
#[derive(Debug, Clone)]
pub struct GluingSystem {
    pub mode: Mode,
    pub equations: Vec<Equation>,
    /// All variable ids, ascending.
    pub variables: Vec<usize>,
    diagram: Diagram,
}

impl GluingSystem {
    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn num_equations(&self) -> usize {
        self.equations.len()
    }

    pub fn check_assignment(&self, a: &Assignment) -> Result<(), GluingError> {
        if a.mode != self.mode {
            return Err(GluingError::ModeMismatch {
                expected: self.mode,
                actual: a.mode,
            });
        }
        for &v in &self.variables {
            if !a.values.contains_key(&v) {
                return Err(GluingError::MissingVariable(v));
            }
        }
        check_nondegenerate(&self.diagram, a).map_err(GluingError::Degenerate)
    }

    /// Vector of (equation value - 1).
    pub fn residuals(&self, a: &Assignment) -> Result<Vec<Complex64>, GluingError> {
        self.check_assignment(a)?;
        Ok(self
            .equations
            .iter()
            .map(|e| e.eval(a) - Complex64::new(1.0, 0.0))
            .collect())
    }

    pub fn max_residual(&self, a: &Assignment) -> Result<f64, GluingError> {
        Ok(self
            .residuals(a)?
            .iter()
            .map(|r| r.norm())
            .fold(0.0, f64::max))
    }

    /// Principal-branch logs of the equation values (zero mod 2*pi*i at solutions).
    pub fn log_residuals(&self, a: &Assignment) -> Result<Vec<Complex64>, GluingError> {
        self.check_assignment(a)?;
        Ok(self.equations.iter().map(|e| e.log_eval(a)).collect())
    }

    /// Analytic Jacobian of the equation logs with respect to variable logs:
    /// entry (e, v) = v * d(log eq_e)/dv. Row sums vanish (degree zero).
    pub fn log_derivatives(&self, a: &Assignment) -> Result<Vec<Vec<Complex64>>, GluingError> {
        self.check_assignment(a)?;
        let mut out = Vec::with_capacity(self.equations.len());
        for eq in &self.equations {
            let mut row = vec![Complex64::new(0.0, 0.0); self.variables.len()];
            for f in &eq.factors {
                let val = f.base.eval(a);
                for v in f.base.variables() {
                    let idx = self.variables.binary_search(&v).unwrap();
                    row[idx] += f.base.euler_deriv(v, a) / val * (f.exponent as f64);
                }
            }
            out.push(row);
        }
        Ok(out)
    }
}

/// Check the non-degeneracy assumptions for `a` on `d`.
///
/// z-mode: segment values sharing a crossing are pairwise distinct; w-mode:
/// regions sharing a segment have distinct values and `w_a w_c != w_b w_d`
/// at every crossing. Tolerances are relative to the assignment scale.
pub fn check_nondegenerate(d: &Diagram, a: &Assignment) -> Result<(), Violation> {
    let scale = a.scale();
    let tol = 1e-12 * scale;
    for (&id, v) in &a.values {
        if v.norm() <= tol {
            return Err(Violation::ZeroValue { id });
        }
    }
    match a.mode {
        Mode::Z => {
            for (ci, c) in d.crossings().iter().enumerate() {
                for i in 0..4 {
                    for j in (i + 1)..4 {
                        let (si, sj) = (c.slots[i], c.slots[j]);
                        if si != sj && (a.get(si) - a.get(sj)).norm() <= tol {
                            return Err(Violation::EqualAtCrossing {
                                crossing: ci,
                                seg_a: si,
                                seg_b: sj,
                            });
                        }
                    }
                }
            }
        }
        Mode::W => {
            for s in 1..=d.num_segments() {
                let (l, r) = d.flanking_regions(s);
                if l != r && (a.get(l) - a.get(r)).norm() <= tol {
                    return Err(Violation::EqualAcrossSegment {
                        segment: s,
                        region_a: l,
                        region_b: r,
                    });
                }
            }
            for ci in 0..d.n() {
                let f = d.w_frame(ci);
                let prod = a.get(f.a) * a.get(f.c) - a.get(f.b) * a.get(f.d);
                if prod.norm() <= 1e-12 * scale * scale {
                    return Err(Violation::CrossingProducts { crossing: ci });
                }
            }
        }
    }
    Ok(())
}

/// One equation per segment of the diagram (Mode::Z). Fails on kinks.
pub fn build_t4_system(d: &Diagram) -> Result<GluingSystem, GluingError> {
    for s in 1..=d.num_segments() {
        if d.head_dart(s).crossing == d.tail_dart(s).crossing {
            return Err(GluingError::T4Degenerate(s));
        }
    }
    let mut equations = Vec::with_capacity(d.num_segments());
    for s in 1..=d.num_segments() {
        let f = d.segment_frame(s);
        let (a, b, c, dd, e) = (f.a, f.b, f.c, f.d, f.e);
        let factors = match f.case {
            // (z_c-z_a)/(z_c-z_b) * z_d (z_c-z_e) / (z_e (z_c-z_d))
            SegCase::A => vec![
                Factor {
                    base: Poly::diff(c, a),
                    exponent: 1,
                },
                Factor {
                    base: Poly::diff(c, b),
                    exponent: -1,
                },
                Factor {
                    base: Poly::var(dd),
                    exponent: 1,
                },
                Factor {
                    base: Poly::diff(c, e),
                    exponent: 1,
                },
                Factor {
                    base: Poly::var(e),
                    exponent: -1,
                },
                Factor {
                    base: Poly::diff(c, dd),
                    exponent: -1,
                },
            ],
            // z_a (z_c-z_b) / (z_b (z_c-z_a)) * (z_c-z_d)/(z_c-z_e)
            SegCase::B => vec![
                Factor {
                    base: Poly::var(a),
                    exponent: 1,
                },
                Factor {
                    base: Poly::diff(c, b),
                    exponent: 1,
                },
                Factor {
                    base: Poly::var(b),
                    exponent: -1,
                },
                Factor {
                    base: Poly::diff(c, a),
                    exponent: -1,
                },
                Factor {
                    base: Poly::diff(c, dd),
                    exponent: 1,
                },
                Factor {
                    base: Poly::diff(c, e),
                    exponent: -1,
                },
            ],
            // (z_c-z_a)/(z_c-z_b) * (z_c-z_e)/(z_c-z_d)
            SegCase::C => vec![
                Factor {
                    base: Poly::diff(c, a),
                    exponent: 1,
                },
                Factor {
                    base: Poly::diff(c, b),
                    exponent: -1,
                },
                Factor {
                    base: Poly::diff(c, e),
                    exponent: 1,
                },
                Factor {
                    base: Poly::diff(c, dd),
                    exponent: -1,
                },
            ],
            // z_a (z_c-z_b)/(z_b (z_c-z_a)) * z_e (z_c-z_d)/(z_d (z_c-z_e))
            SegCase::D => vec![
                Factor {
                    base: Poly::var(a),
                    exponent: 1,
                },
                Factor {
                    base: Poly::diff(c, b),
                    exponent: 1,
                },
                Factor {
                    base: Poly::var(b),
                    exponent: -1,
                },
                Factor {
                    base: Poly::diff(c, a),
                    exponent: -1,
                },
                Factor {
                    base: Poly::var(e),
                    exponent: 1,
                },
                Factor {
                    base: Poly::diff(c, dd),
                    exponent: 1,
                },
                Factor {
                    base: Poly::var(dd),
                    exponent: -1,
                },
                Factor {
                    base: Poly::diff(c, e),
                    exponent: -1,
                },
            ],
        };
        equations.push(Equation {
            tag: EquationTag::Segment(s),
            factors,
        });
    }
    finish_system(d, Mode::Z, equations, (1..=d.num_segments()).collect())
}

/// The tau factor contributed by the corner of a region sitting at quadrant
/// position `label` ('a'..'d') of a crossing with w-frame `(a,b,c,d)`.
fn tau_factors(label: char, a: usize, b: usize, c: usize, d: usize) -> Vec<Factor> {
    // eta_bar = w_a w_c - w_b w_d
    let eta_bar = || Poly::prod_diff(a, c, b, d);
    let neg_eta_bar = || Poly::prod_diff(b, d, a, c);
    match label {
        // (w_d - w_a)(w_b - w_a) / (w_b w_d - w_a w_c)
        'a' => vec![
            Factor {
                base: Poly::diff(d, a),
                exponent: 1,
            },
            Factor {
                base: Poly::diff(b, a),
                exponent: 1,
            },
            Factor {
                base: neg_eta_bar(),
                exponent: -1,
            },
        ],
        // (w_a w_c - w_b w_d) / ((w_a - w_b)(w_c - w_b))
        'b' => vec![
            Factor {
                base: eta_bar(),
                exponent: 1,
            },
            Factor {
                base: Poly::diff(a, b),
                exponent: -1,
            },
            Factor {
                base: Poly::diff(c, b),
                exponent: -1,
            },
        ],
        // (w_b - w_c)(w_d - w_c) / (w_b w_d - w_a w_c)
        'c' => vec![
            Factor {
                base: Poly::diff(b, c),
                exponent: 1,
            },
            Factor {
                base: Poly::diff(d, c),
                exponent: 1,
            },
            Factor {
                base: neg_eta_bar(),
                exponent: -1,
            },
        ],
        // (w_a w_c - w_b w_d) / ((w_a - w_d)(w_c - w_d))
        'd' => vec![
            Factor {
                base: eta_bar(),
                exponent: 1,
            },
            Factor {
                base: Poly::diff(a, d),
                exponent: -1,
            },
            Factor {
                base: Poly::diff(c, d),
                exponent: -1,
            },
        ],
        _ => unreachable!(),
    }
}

/// One equation per region of the diagram (Mode::W); kinks are allowed.
pub fn build_t5_system(d: &Diagram) -> Result<GluingSystem, GluingError> {
    let mut equations = Vec::with_capacity(d.num_regions());
    for r in d.regions() {
        let mut factors = Vec::new();
        for &(ci, quad) in &r.corners {
            let f = d.w_frame(ci);
            let label = d.w_label_of_quadrant(quad);
            factors.extend(tau_factors(label, f.a, f.b, f.c, f.d));
        }
        equations.push(Equation {
            tag: EquationTag::Region(r.id),
            factors,
        });
    }
    finish_system(d, Mode::W, equations, (1..=d.num_regions()).collect())
}

fn finish_system(
    d: &Diagram,
    mode: Mode,
    equations: Vec<Equation>,
    variables: Vec<usize>,
) -> Result<GluingSystem, GluingError> {
    for eq in &equations {
        debug_assert!(eq.factors.iter().all(|f| f.base.is_homogeneous()));
        debug_assert_eq!(eq.degree(), 0, "equation {:?} not degree zero", eq.tag);
    }
    Ok(GluingSystem {
        mode,
        equations,
        variables,
        diagram: d.clone(),
    })
}
