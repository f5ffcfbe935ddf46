//! Explicit per-crossing Ptolemy data computed from a gluing-equation solution:
//! sigma values, scaling parameters (stored as squares, eliminating their sign
//! ambiguity), eta values, the 24 short-edge parameters per crossing, and the
//! intercusp/translation parameters of the crossing graph.

use num_complex::Complex64;
use thiserror::Error;

use crate::diagram::{CrossingFrame, Diagram, SegCase};
use crate::gluing::{check_nondegenerate, Assignment, Mode, Violation};
use crate::special::principal_sqrt;

#[derive(Debug, Error)]
pub enum PtolemyError {
    #[error("degenerate assignment: {0}")]
    Degenerate(Violation),
    #[error("scaling-parameter relation violated at segment {segment} (relative error {rel_err:.3e}); the assignment is not on the gluing variety")]
    InconsistentScaling { segment: usize, rel_err: f64 },
    #[error("assignment mode does not match the requested computation")]
    ModeMismatch,
    #[error("sigma product {0} is not within 1e-6 of ±1; not on the gluing variety")]
    SigmaProductOffLattice(Complex64),
}

fn frame_values(a: &Assignment, f: &CrossingFrame) -> (Complex64, Complex64, Complex64, Complex64) {
    (a.get(f.a), a.get(f.b), a.get(f.c), a.get(f.d))
}

/// sigma(c_i): z_a/z_c in z-mode, (w_a - w_d)/(w_b - w_c) in w-mode.
pub fn sigma_at_crossing(d: &Diagram, ci: usize, a: &Assignment) -> Complex64 {
    match a.mode {
        Mode::Z => {
            let f = d.z_frame(ci);
            a.get(f.a) / a.get(f.c)
        }
        Mode::W => {
            let f = d.w_frame(ci);
            (a.get(f.a) - a.get(f.d)) / (a.get(f.b) - a.get(f.c))
        }
    }
}

/// Sigma values in under-pass order.
pub fn sigma_in_order(d: &Diagram, a: &Assignment) -> Vec<Complex64> {
    d.underpass_order()
        .iter()
        .map(|&ci| sigma_at_crossing(d, ci, a))
        .collect()
}

/// eta value at a crossing (w-mode): w_b w_d - w_a w_c at a positive crossing,
/// w_a w_c - w_b w_d at a negative one.
pub fn eta_at_crossing(d: &Diagram, ci: usize, a: &Assignment) -> Complex64 {
    let f = d.w_frame(ci);
    let (wa, wb, wc, wd) = frame_values(a, &f);
    if d.crossings()[ci].sign > 0 {
        wb * wd - wa * wc
    } else {
        wa * wc - wb * wd
    }
}

/// Per-crossing scaling parameters, stored as squares (`p_i^2` for T4,
/// `q_i^2` for T5); defined up to sign, and every downstream formula consumes
/// only the squares.
#[derive(Debug, Clone)]
pub struct ScalingParams {
    pub mode: Mode,
    /// squares indexed by crossing id
    pub squares: Vec<Complex64>,
}

/// The multiplier `rho` such that `p_head^2 = rho * p_tail^2` across a segment.
fn scaling_ratio(d: &Diagram, a: &Assignment, s: usize) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    match a.mode {
        Mode::Z => {
            let f = d.segment_frame(s);
            let (zb, zc, ze) = (a.get(f.b), a.get(f.c), a.get(f.e));
            match f.case {
                SegCase::A => (one - zb / zc) / (one - zc / ze),
                SegCase::B => (one - zc / zb) / (one - ze / zc),
                SegCase::C => (one - zb / zc) / (one - ze / zc),
                SegCase::D => (one - zc / zb) / (one - zc / ze),
            }
        }
        Mode::W => {
            let f = d.segment_frame(s);
            let (l, r) = d.flanking_regions(s);
            let diff2 = (a.get(l) - a.get(r)).powi(2);
            let eta_tail = eta_at_crossing(d, f.tail_crossing, a);
            let eta_head = eta_at_crossing(d, f.head_crossing, a);
            match f.case {
                // (q_tail/q_head)^2 = diff2/eta_head
                SegCase::A => eta_head / diff2,
                SegCase::B => diff2 / eta_tail,
                SegCase::C => one,
                SegCase::D => eta_head / eta_tail,
            }
        }
    }
}

/// Propagate the scaling parameters along a breadth-first spanning tree of the
/// crossing-adjacency graph rooted at `c_1`, then verify every non-tree
/// segment relation (up to the sign absorbed in the squares).
pub fn scaling_parameters(d: &Diagram, a: &Assignment) -> Result<ScalingParams, PtolemyError> {
    check_nondegenerate(d, a).map_err(PtolemyError::Degenerate)?;
    let n = d.n();
    let root = d.underpass_order()[0];
    let mut squares = vec![Complex64::new(0.0, 0.0); n];
    let mut known = vec![false; n];
    squares[root] = Complex64::new(1.0, 0.0);
    known[root] = true;

    // segment edges: tail crossing -> head crossing with multiplier
    let edges: Vec<(usize, usize, usize, Complex64)> = (1..=d.num_segments())
        .map(|s| {
            let f = d.segment_frame(s);
            (s, f.tail_crossing, f.head_crossing, scaling_ratio(d, a, s))
        })
        .collect();

    let mut queue = std::collections::VecDeque::from([root]);
    let mut tree_segments = vec![false; d.num_segments() + 1];
    while let Some(ci) = queue.pop_front() {
        for &(s, t, h, rho) in &edges {
            if t == ci && !known[h] {
                squares[h] = squares[t] * rho;
                known[h] = true;
                tree_segments[s] = true;
                queue.push_back(h);
            } else if h == ci && !known[t] {
                squares[t] = squares[h] / rho;
                known[t] = true;
                tree_segments[s] = true;
                queue.push_back(t);
            }
        }
    }
    debug_assert!(known.iter().all(|&k| k));

    for &(s, t, h, rho) in &edges {
        if tree_segments[s] {
            continue;
        }
        let lhs = squares[h];
        let rhs = squares[t] * rho;
        let rel = (lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1e-300);
        if rel > 1e-8 {
            return Err(PtolemyError::InconsistentScaling {
                segment: s,
                rel_err: rel,
            });
        }
    }
    Ok(ScalingParams {
        mode: a.mode,
        squares,
    })
}

/// The 24 short-edge parameters of a crossing, labelled a..x.
pub type ShortEdges = [Complex64; 24];

fn idx(c: char) -> usize {
    (c as u8 - b'a') as usize
}

/// Short-edge table of one crossing from the mode's closed form.
///
/// Negative crossings flip the signs of entries a..d (z-mode) or a..l and q..x
/// (w-mode) relative to the positive table.
pub fn short_edge_table(d: &Diagram, ci: usize, a: &Assignment, sp: &ScalingParams) -> ShortEdges {
    let sq = sp.squares[ci];
    let sign = d.crossings()[ci].sign;
    let mut t = [Complex64::new(0.0, 0.0); 24];
    match a.mode {
        Mode::Z => {
            let f = d.z_frame(ci);
            let (za, zb, zc, zd) = frame_values(a, &f);
            let p2 = sq;
            t[idx('a')] = (za - zd) / (zc - za);
            t[idx('b')] = (zb - za) / (zc - za);
            t[idx('c')] = (zc - zb) / (zc - za);
            t[idx('d')] = (zd - zc) / (zc - za);
            t[idx('e')] = zb / (p2 * za * (zb - za));
            t[idx('f')] = zd / (p2 * za * (za - zd));
            t[idx('g')] = 1.0 / (p2 * (zd - za));
            t[idx('h')] = 1.0 / (p2 * (za - zb));
            t[idx('i')] = za * zb / (p2 * (za - zb));
            t[idx('j')] = zb * zc / (p2 * (zb - zc));
            t[idx('k')] = zb * zb / (p2 * (zc - zb));
            t[idx('l')] = zb * zb / (p2 * (zb - za));
            t[idx('m')] = zd * (zc - zb) / (zc * (zb - zd));
            t[idx('n')] = zb * (zd - zc) / (zc * (zb - zd));
            t[idx('o')] = zb * (za - zd) / (za * (zb - zd));
            t[idx('p')] = zd * (zb - za) / (za * (zb - zd));
            t[idx('q')] = zb / (p2 * zc * (zb - zc));
            t[idx('r')] = zd / (p2 * zc * (zc - zd));
            t[idx('s')] = 1.0 / (p2 * (zd - zc));
            t[idx('t')] = 1.0 / (p2 * (zc - zb));
            t[idx('u')] = za * zd / (p2 * (za - zd));
            t[idx('v')] = zc * zd / (p2 * (zd - zc));
            t[idx('w')] = zd * zd / (p2 * (zc - zd));
            t[idx('x')] = zd * zd / (p2 * (zd - za));
            if sign < 0 {
                for c in 'a'..='d' {
                    t[idx(c)] = -t[idx(c)];
                }
            }
        }
        Mode::W => {
            let f = d.w_frame(ci);
            let (wa, wb, wc, wd) = frame_values(a, &f);
            let q2 = sq;
            let eta_bar = wb * wd - wa * wc; // w_b w_d - w_a w_c
            t[idx('a')] = wd / (wc - wd);
            t[idx('b')] = wa / (wa - wb);
            t[idx('c')] = wb / (wb - wa);
            t[idx('d')] = wc / (wd - wc);
            t[idx('e')] = eta_bar / (q2 * wa * (wa - wd));
            t[idx('f')] = eta_bar / (q2 * wd * (wd - wa));
            t[idx('g')] = (wd - wc) / (q2 * wd);
            t[idx('h')] = (wb - wa) / (q2 * wa);
            t[idx('i')] = q2 * (wd - wa) / (wa * eta_bar);
            t[idx('j')] = q2 * (wb - wc) / (wb * eta_bar);
            t[idx('k')] = q2 / (wb * (wb - wa));
            t[idx('l')] = q2 / (wa * (wa - wb));
            t[idx('m')] = wb / (wc - wb);
            t[idx('n')] = wc / (wb - wc);
            t[idx('o')] = wd / (wd - wa);
            t[idx('p')] = wa / (wa - wd);
            t[idx('q')] = eta_bar / (q2 * wb * (wb - wc));
            t[idx('r')] = eta_bar / (q2 * wc * (wc - wb));
            t[idx('s')] = (wd - wc) / (q2 * wc);
            t[idx('t')] = (wb - wa) / (q2 * wb);
            t[idx('u')] = q2 * (wd - wa) / (wd * eta_bar);
            t[idx('v')] = q2 * (wb - wc) / (wc * eta_bar);
            t[idx('w')] = q2 / (wc * (wc - wd));
            t[idx('x')] = q2 / (wd * (wd - wc));
            if sign < 0 {
                for c in 'a'..='l' {
                    t[idx(c)] = -t[idx(c)];
                }
                for c in 'q'..='x' {
                    t[idx(c)] = -t[idx(c)];
                }
            }
        }
    }
    t
}

/// Per-edge parameters of the crossing graph (z-mode): an intercusp parameter
/// on the vertical edge of each crossing (defined up to sign; the principal
/// square root is reported) and a translation parameter along each segment.
#[derive(Debug, Clone)]
pub struct GraphParameters {
    /// vertical long-edge parameter per crossing, in C^x/{±1}
    pub vertical: Vec<Complex64>,
    /// horizontal short-edge parameter per segment (index 0 unused)
    pub horizontal: Vec<Complex64>,
}

pub fn graph_parameters(d: &Diagram, a: &Assignment) -> Result<GraphParameters, PtolemyError> {
    if a.mode != Mode::Z {
        return Err(PtolemyError::ModeMismatch);
    }
    check_nondegenerate(d, a).map_err(PtolemyError::Degenerate)?;
    let one = Complex64::new(1.0, 0.0);
    let vertical = (0..d.n())
        .map(|ci| {
            let f = d.z_frame(ci);
            let (za, zb, _, zd) = frame_values(a, &f);
            let zc = a.get(f.c);
            let base = if d.crossings()[ci].sign > 0 {
                (za - zc) * (one / zd - one / zb)
            } else {
                (za - zc) * (one / zb - one / zd)
            };
            principal_sqrt(base)
        })
        .collect();
    let mut horizontal = vec![Complex64::new(0.0, 0.0); d.num_segments() + 1];
    #[allow(clippy::needless_range_loop)]
    for s in 1..=d.num_segments() {
        let f = d.segment_frame(s);
        let (za, zb, zc, zd, ze) = (a.get(f.a), a.get(f.b), a.get(f.c), a.get(f.d), a.get(f.e));
        horizontal[s] = match f.case {
            SegCase::A => zc / (za - zb) - zd / (zd - ze),
            SegCase::B => za / (za - zb) - zc / (zd - ze),
            SegCase::C => zc / (za - zb) - zc / (zd - ze),
            SegCase::D => za / (za - zc) - zd / (zd - ze),
        };
    }
    Ok(GraphParameters {
        vertical,
        horizontal,
    })
}

/// Result of the Ptolemy consistency checks at a claimed solution.
#[derive(Debug, Clone)]
pub struct ConsistencyReport {
    pub sigma_product: Complex64,
    pub obstruction_sign: i8,
    /// worst deviation of the sigma product from ±1
    pub sigma_product_err: f64,
    /// worst relative error of the recovered cross-ratios against the direct
    /// formulas, per crossing
    pub recovery_err: Vec<f64>,
    pub failures: Vec<String>,
}

impl ConsistencyReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Verify the Ptolemy-level identities at a solution: the sigma product lies
/// in {±1} (equivalently, the hypotenuse parameters propagate consistently
/// around the diagram), the scaling parameters are compatible, and the
/// tetrahedron cross-ratios recovered from short-edge ratios match the direct
/// formulas.
pub fn ptolemy_consistency_check(
    d: &Diagram,
    a: &Assignment,
    sp: &ScalingParams,
) -> Result<ConsistencyReport, PtolemyError> {
    check_nondegenerate(d, a).map_err(PtolemyError::Degenerate)?;
    let mut failures = Vec::new();

    let mut prod = Complex64::new(1.0, 0.0);
    for &ci in d.underpass_order() {
        prod *= sigma_at_crossing(d, ci, a);
    }
    let err_p = (prod - 1.0).norm();
    let err_m = (prod + 1.0).norm();
    let (sign, err) = if err_p <= err_m {
        (1i8, err_p)
    } else {
        (-1i8, err_m)
    };
    if err > 1e-8 {
        failures.push(format!(
            "sigma product {prod} deviates from ±1 by {err:.3e}"
        ));
    }

    let mut recovery_err = Vec::with_capacity(d.n());
    for ci in 0..d.n() {
        let t = short_edge_table(d, ci, a, sp);
        let g = |c: char| t[idx(c)];
        // recovered cross-ratios, two independent short-edge routes each,
        // against the direct formulas
        let direct: [Complex64; 4];
        let routes: [[Complex64; 2]; 4];
        match a.mode {
            Mode::W => {
                let f = d.w_frame(ci);
                let (wa, wb, wc, wd) = frame_values(a, &f);
                let eta_bar = wb * wd - wa * wc;
                direct = [
                    (wd - wa) * (wb - wa) / eta_bar,
                    -eta_bar / ((wa - wb) * (wc - wb)),
                    (wb - wc) * (wd - wc) / eta_bar,
                    -eta_bar / ((wa - wd) * (wc - wd)),
                ];
                routes = [
                    [-g('h') / g('e'), -g('i') / g('l')],
                    [-g('k') / g('j'), -g('q') / g('t')],
                    [-g('s') / g('r'), -g('v') / g('w')],
                    [-g('f') / g('g'), -g('x') / g('u')],
                ];
            }
            Mode::Z => {
                let f = d.z_frame(ci);
                let (za, zb, zc, zd) = frame_values(a, &f);
                direct = [zc / zb, zd / zc, za / zd, zb / za];
                routes = [
                    [-g('j') / g('k'), -g('t') / g('q')],
                    [-g('r') / g('s'), -g('w') / g('v')],
                    [-g('g') / g('f'), -g('u') / g('x')],
                    [-g('e') / g('h'), -g('l') / g('i')],
                ];
            }
        }
        let mut worst = 0.0f64;
        for (k, &dv) in direct.iter().enumerate() {
            for rv in routes[k] {
                let rel = (rv - dv).norm() / dv.norm().max(1e-300);
                worst = worst.max(rel);
            }
        }
        if worst > 1e-9 {
            failures.push(format!(
                "cross-ratio recovery from short edges fails at crossing {ci} (rel err {worst:.3e})"
            ));
        }
        recovery_err.push(worst);
    }

    Ok(ConsistencyReport {
        sigma_product: prod,
        obstruction_sign: sign,
        sigma_product_err: err,
        recovery_err,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::diagram::parse_pd;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trefoil_sigma_values() {
        let d = parse_pd(builtin::TREFOIL_KINK_PD).unwrap();
        let a = builtin::trefoil_kink_solution();
        let sig = sigma_in_order(&d, &a);
        let expect = [c(-2.0, 0.0), c(1.0 / 3.0, 0.0), c(1.0, 0.0), c(1.5, 0.0)];
        for (s, e) in sig.iter().zip(&expect) {
            assert!((s - e).norm() < 1e-12, "{s} vs {e}");
        }
        let prod: Complex64 = sig.iter().product();
        assert!((prod - c(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn fig8_sigma_values() {
        let d = parse_pd(builtin::FIG8_PD).unwrap();
        let a = builtin::fig8_solution();
        let sig = sigma_in_order(&d, &a);
        // sigma(c_i) = z_{2i-1}/z_{2i}
        for (i, s) in sig.iter().enumerate() {
            let e = a.get(2 * i + 1) / a.get(2 * i + 2);
            assert!((s - e).norm() < 1e-12);
        }
        let prod: Complex64 = sig.iter().product();
        assert!((prod - c(-1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn sigma_scaling_invariance() {
        let d = parse_pd(builtin::TREFOIL_KINK_PD).unwrap();
        let a = builtin::trefoil_kink_solution();
        let b = a.scaled(c(2.0, 1.0));
        for ci in 0..d.n() {
            let x = sigma_at_crossing(&d, ci, &a);
            let y = sigma_at_crossing(&d, ci, &b);
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn scaling_params_consistent_at_solutions() {
        let d = parse_pd(builtin::FIG8_PD).unwrap();
        let a = builtin::fig8_solution();
        let sp = scaling_parameters(&d, &a).unwrap();
        assert_eq!(sp.squares.len(), 4);
        let dt = parse_pd(builtin::TREFOIL_KINK_PD).unwrap();
        let at = builtin::trefoil_kink_solution();
        let spt = scaling_parameters(&dt, &at).unwrap();
        assert_eq!(spt.squares.len(), 4);
        assert!((spt.squares[dt.underpass_order()[0]] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn single_crossing_scaling_params() {
        // one crossing: nothing to propagate; self-loop relations hold for
        // values compatible with the crossing (w2 = 2 w1 - w3)
        let d = parse_pd("X[1,1,2,2]").unwrap();
        let a = Assignment::from_pairs(
            Mode::W,
            &[(1, c(2.0, 0.0)), (2, c(3.0, 0.0)), (3, c(1.0, 0.0))],
        );
        let sp = scaling_parameters(&d, &a).unwrap();
        assert_eq!(sp.squares.len(), 1);
        assert!((sp.squares[0] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn scaling_params_reject_off_variety() {
        let d = parse_pd(builtin::TREFOIL_KINK_PD).unwrap();
        let mut a = builtin::trefoil_kink_solution();
        // 1e-2 perturbation knocks the point off the variety
        a.values.insert(3, a.get(3) + c(1e-2, 3e-3));
        match scaling_parameters(&d, &a) {
            Err(PtolemyError::InconsistentScaling { .. }) => {}
            other => panic!("expected inconsistency, got {other:?}"),
        }
    }

    #[test]
    fn short_edge_direct_substitution() {
        // w-mode, (w_a,w_b,w_c,w_d,q) = (1,2,3,4,1), positive crossing:
        // entry a = w_d/(w_c - w_d) = -4
        let d = parse_pd(builtin::TREFOIL_KINK_PD).unwrap();
        let positive = (0..d.n()).find(|&ci| d.crossings()[ci].sign > 0).unwrap();
        let f = d.w_frame(positive);
        let mut vals = std::collections::BTreeMap::new();
        for id in 1..=d.num_regions() {
            vals.insert(id, c(10.0 + id as f64, 5.0));
        }
        vals.insert(f.a, c(1.0, 0.0));
        vals.insert(f.b, c(2.0, 0.0));
        vals.insert(f.c, c(3.0, 0.0));
        vals.insert(f.d, c(4.0, 0.0));
        let a = Assignment::new(Mode::W, vals);
        let sp = ScalingParams {
            mode: Mode::W,
            squares: vec![c(1.0, 0.0); d.n()],
        };
        let t = short_edge_table(&d, positive, &a, &sp);
        assert!((t[idx('a')] - c(-4.0, 0.0)).norm() < 1e-14);

        // z-mode, (z_a,z_b,z_c,z_d,p)=(1,2,3,4,1), positive crossing:
        // entry b = (z_b - z_a)/(z_c - z_a) = 1/2
        let d8 = parse_pd(builtin::FIG8_PD).unwrap();
        let pos8 = (0..d8.n()).find(|&ci| d8.crossings()[ci].sign > 0).unwrap();
        let zf = d8.z_frame(pos8);
        let mut vals = std::collections::BTreeMap::new();
        for id in 1..=d8.num_segments() {
            vals.insert(id, c(20.0 + id as f64, 3.0));
        }
        vals.insert(zf.a, c(1.0, 0.0));
        vals.insert(zf.b, c(2.0, 0.0));
        vals.insert(zf.c, c(3.0, 0.0));
        vals.insert(zf.d, c(4.0, 0.0));
        let a8 = Assignment::new(Mode::Z, vals);
        let sp8 = ScalingParams {
            mode: Mode::Z,
            squares: vec![c(1.0, 0.0); d8.n()],
        };
        let t8 = short_edge_table(&d8, pos8, &a8, &sp8);
        assert!((t8[idx('b')] - c(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn short_edge_sign_flip_under_crossing_sign() {
        // entry a is negated at a negative crossing, in both modes
        let d = parse_pd(builtin::TREFOIL_KINK_PD).unwrap();
        let pos = (0..d.n()).find(|&ci| d.crossings()[ci].sign > 0).unwrap();
        let neg = (0..d.n()).find(|&ci| d.crossings()[ci].sign < 0).unwrap();
        let a = builtin::trefoil_kink_solution();
        let sp = scaling_parameters(&d, &a).unwrap();
        let fpos = d.w_frame(pos);
        let fneg = d.w_frame(neg);
        let tpos = short_edge_table(&d, pos, &a, &sp);
        let tneg = short_edge_table(&d, neg, &a, &sp);
        let direct = |f: &CrossingFrame| {
            let (wc, wd) = (a.get(f.c), a.get(f.d));
            wd / (wc - wd)
        };
        assert!((tpos[idx('a')] - direct(&fpos)).norm() < 1e-12);
        assert!((tneg[idx('a')] + direct(&fneg)).norm() < 1e-12);
    }

    #[test]
    fn graph_parameter_examples() {
        // vertical: (z_a,z_b,z_c,z_d) = (1,2,3,4), positive:
        // sqrt((1-3)(1/4-1/2)) = sqrt(1/2) up to sign
        let d8 = parse_pd(builtin::FIG8_PD).unwrap();
        let pos8 = (0..d8.n()).find(|&ci| d8.crossings()[ci].sign > 0).unwrap();
        let zf = d8.z_frame(pos8);
        let mut vals = std::collections::BTreeMap::new();
        for id in 1..=d8.num_segments() {
            vals.insert(id, c(20.0 + id as f64, 3.0));
        }
        vals.insert(zf.a, c(1.0, 0.0));
        vals.insert(zf.b, c(2.0, 0.0));
        vals.insert(zf.c, c(3.0, 0.0));
        vals.insert(zf.d, c(4.0, 0.0));
        let a8 = Assignment::new(Mode::Z, vals);
        let g = graph_parameters(&d8, &a8).unwrap();
        let v = g.vertical[pos8];
        assert!((v * v - c(0.5, 0.0)).norm() < 1e-12);

        // horizontal case (c) with (1,2,3,4,5): 3/(1-2) - 3/(4-5) = 0
        // no fig8 segment is over-over; check the formula through a synthetic
        // frame by direct computation instead
        let (za, zb, zc, zd, ze) = (
            c(1.0, 0.0),
            c(2.0, 0.0),
            c(3.0, 0.0),
            c(4.0, 0.0),
            c(5.0, 0.0),
        );
        let horiz_c = zc / (za - zb) - zc / (zd - ze);
        assert!(horiz_c.norm() < 1e-14);
        // and p-independence: graph parameters never consult ScalingParams
        let g2 = graph_parameters(&d8, &a8).unwrap();
        for (x, y) in g.horizontal.iter().zip(&g2.horizontal) {
            assert_eq!(x, y);
        }
    }

    #[test]
    fn consistency_check_goldens() {
        let d = parse_pd(builtin::TREFOIL_KINK_PD).unwrap();
        let a = builtin::trefoil_kink_solution();
        let sp = scaling_parameters(&d, &a).unwrap();
        let rep = ptolemy_consistency_check(&d, &a, &sp).unwrap();
        assert!(rep.is_ok(), "{:?}", rep.failures);
        assert_eq!(rep.obstruction_sign, -1);
        assert!(rep.sigma_product_err < 1e-12);

        let d8 = parse_pd(builtin::FIG8_PD).unwrap();
        let a8 = builtin::fig8_solution();
        let sp8 = scaling_parameters(&d8, &a8).unwrap();
        let rep8 = ptolemy_consistency_check(&d8, &a8, &sp8).unwrap();
        assert!(rep8.is_ok(), "{:?}", rep8.failures);
        assert_eq!(rep8.obstruction_sign, -1);
    }

    #[test]
    fn consistency_check_fails_off_variety() {
        let d = parse_pd(builtin::TREFOIL_KINK_PD).unwrap();
        let mut a = builtin::trefoil_kink_solution();
        a.values.insert(2, a.get(2) * c(1.05, 0.02));
        let sp = ScalingParams {
            mode: Mode::W,
            squares: vec![c(1.0, 0.0); d.n()],
        };
        let rep = ptolemy_consistency_check(&d, &a, &sp).unwrap();
        assert!(!rep.is_ok());
    }
}
