//! Built-in example diagrams with known solutions of their gluing systems.
//!
//! `fig8` is the standard alternating figure-eight diagram, segments labelled
//! along the orientation so that crossing `c_i` of the under-pass order has
//! under-strand labels `2i-1 -> 2i`. Its segment variables solve the T4
//! system. `trefoil-kink` is a right-handed trefoil with one negative kink
//! (the strand passes under itself first); its region variables solve T5.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::gluing::{Assignment, Mode};

pub const FIG8_PD: &str = "X[1,4,2,5];X[5,8,6,1];X[3,7,4,6];X[7,3,8,2]";
pub const TREFOIL_KINK_PD: &str = "X[1,5,2,4];X[3,1,4,8];X[5,6,6,7];X[7,3,8,2]";

/// Segment variables solving the figure-eight T4 system.
pub fn fig8_solution() -> Assignment {
    let s3 = 3.0f64.sqrt();
    let vals: [Complex64; 8] = [
        Complex64::new(1.0, 1.0),
        Complex64::new(0.0, 1.0 + s3),
        Complex64::new(-1.0, s3) / (s3 - 1.0),
        Complex64::new(0.0, 2.0),
        Complex64::new(-1.0, 1.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(1.0, s3) / (s3 - 1.0),
        Complex64::new(0.0, -2.0) / (s3 - 1.0),
    ];
    let map: BTreeMap<usize, Complex64> =
        vals.iter().enumerate().map(|(i, &v)| (i + 1, v)).collect();
    Assignment::new(Mode::Z, map)
}

/// Region variables solving the trefoil-with-kink T5 system.
///
/// Regions are numbered in face-discovery order for [`TREFOIL_KINK_PD`].
pub fn trefoil_kink_solution() -> Assignment {
    let vals = [7.0, 5.0, 2.0, 1.0, 3.0, 8.0];
    let map: BTreeMap<usize, Complex64> = vals
        .iter()
        .enumerate()
        .map(|(i, &v)| (i + 1, Complex64::new(v, 0.0)))
        .collect();
    Assignment::new(Mode::W, map)
}

/// Named builtin examples for the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Fig8,
    TrefoilKink,
}

impl Builtin {
    pub fn pd(self) -> &'static str {
        match self {
            Builtin::Fig8 => FIG8_PD,
            Builtin::TrefoilKink => TREFOIL_KINK_PD,
        }
    }

    /// The mode in which a reference solution ships.
    pub fn native_mode(self) -> Mode {
        match self {
            Builtin::Fig8 => Mode::Z,
            Builtin::TrefoilKink => Mode::W,
        }
    }

    pub fn solution(self, mode: Mode) -> Option<Assignment> {
        match (self, mode) {
            (Builtin::Fig8, Mode::Z) => Some(fig8_solution()),
            (Builtin::TrefoilKink, Mode::W) => Some(trefoil_kink_solution()),
            _ => None,
        }
    }
}

impl std::str::FromStr for Builtin {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fig8" => Ok(Builtin::Fig8),
            "trefoil-kink" => Ok(Builtin::TrefoilKink),
            other => Err(format!(
                "unknown builtin `{other}`; expected fig8 or trefoil-kink"
            )),
        }
    }
}
