//! Combinatorial knot diagrams from PD codes.
//!
//! A PD code lists one quadruple `X[i,j,k,l]` per crossing, the four incident
//! segment labels counterclockwise starting from the incoming under-strand.
//! Segments are labelled `1..2n` along the orientation of the knot, so the
//! under-strand leaves a crossing with label `i+1` (mod `2n`), and the
//! over-strand pair is consecutive as well.
//!
//! Slots at a crossing are numbered 0..3 in the PD order; quadrant `q_k` is
//! the corner between slots `k` and `k+1` (mod 4).

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Segment identifier, `1..=2n`.
pub type SegId = usize;
/// Region identifier, `1..=n+2`.
pub type RegionId = usize;

#[derive(Debug, Error, PartialEq)]
pub enum PdError {
    #[error("malformed PD syntax: {0}")]
    Syntax(String),
    #[error("segment labels must be 1..2n each appearing exactly twice")]
    BadLabels,
    #[error("under-strand labels not consecutive at crossing {0} (multi-component or non-standard labeling)")]
    UnderNotConsecutive(usize),
    #[error("over-strand labels not consecutive at crossing {0} (multi-component or non-standard labeling)")]
    OverNotConsecutive(usize),
    #[error("diagram is disconnected")]
    Disconnected,
    #[error(
        "face traversal produced {0} regions, expected n+2 = {1}; PD is not planar or inconsistent"
    )]
    NonPlanar(usize, usize),
    #[error("base crossing {0} out of range")]
    BadBaseCrossing(usize),
}

/// One end of a segment: (crossing index, slot 0..3).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dart {
    pub crossing: usize,
    pub slot: usize,
}

/// Role of a segment end at its crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndRole {
    UnderIn,
    UnderOut,
    OverIn,
    OverOut,
}

impl EndRole {
    pub fn is_over(self) -> bool {
        matches!(self, EndRole::OverIn | EndRole::OverOut)
    }
}

#[derive(Debug, Clone)]
pub struct Crossing {
    /// Segment labels at slots 0..3 (counterclockwise from incoming under).
    pub slots: [SegId; 4],
    /// Which of slots 1/3 carries the incoming over-strand.
    pub over_in_slot: usize,
    /// Crossing sign.
    pub sign: i8,
}

impl Crossing {
    pub fn under_in(&self) -> SegId {
        self.slots[0]
    }
    pub fn under_out(&self) -> SegId {
        self.slots[2]
    }
    pub fn over_in(&self) -> SegId {
        self.slots[self.over_in_slot]
    }
    pub fn over_out(&self) -> SegId {
        self.slots[4 - self.over_in_slot]
    }
}

/// A complementary face of the diagram.
#[derive(Debug, Clone)]
pub struct Region {
    pub id: RegionId,
    /// Corners (crossing index, quadrant 0..3) in traversal order.
    pub corners: Vec<(usize, usize)>,
    /// Boundary steps (segment, side of the segment this region lies on).
    pub steps: Vec<(SegId, Side)>,
}

/// Side of an oriented segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Crossing-local variable positions, mode-dependent.
///
/// In z-mode the four entries are segment ids: `a` = under-in, `c` = under-out,
/// and `(b, d)` = (over-in, over-out) at a positive crossing, swapped at a
/// negative one. In w-mode they are region ids, counterclockwise from the
/// quadrant that follows the under-in slot: `a` between under-in and the next
/// slot, then `b`, `c`, `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossingFrame {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

/// Per-segment local picture used by the T4 equations: the segment itself is
/// `c`; `a`,`b` are the transversal segments at the tail crossing and `d`,`e`
/// at the head crossing, with `b` and `e` on the left side of the segment.
#[derive(Debug, Clone, Copy)]
pub struct SegmentFrame {
    pub case: SegCase,
    pub a: SegId,
    pub b: SegId,
    pub c: SegId,
    pub d: SegId,
    pub e: SegId,
    pub tail_crossing: usize,
    pub head_crossing: usize,
}

/// End-role case of a segment: role at the tail and head crossings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegCase {
    /// over at tail, under at head
    A,
    /// under at tail, over at head
    B,
    /// over at both ends
    C,
    /// under at both ends
    D,
}

#[derive(Debug, Clone)]
pub struct Diagram {
    crossings: Vec<Crossing>,
    regions: Vec<Region>,
    /// (crossing, quadrant) -> region id
    quad_region: BTreeMap<(usize, usize), RegionId>,
    /// head (inbound) dart of each segment, index 0 unused
    head: Vec<Dart>,
    /// tail (outbound) dart of each segment
    tail: Vec<Dart>,
    /// crossings in under-pass order
    underpass: Vec<usize>,
    /// segment -> over-arc index (1-based, arc `i` runs from `c_i` to `c_{i+1}`)
    seg_arc: Vec<usize>,
    writhe: i64,
}

fn parse_quadruples(text: &str) -> Result<Vec<[usize; 4]>, PdError> {
    let mut rows = Vec::new();
    for tok in text.split(';') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        let inner = tok
            .strip_prefix('X')
            .map(str::trim_start)
            .and_then(|s| s.strip_prefix('['))
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| PdError::Syntax(format!("expected X[i,j,k,l], got `{tok}`")))?;
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(PdError::Syntax(format!("expected 4 labels in `{tok}`")));
        }
        let mut row = [0usize; 4];
        for (i, p) in parts.iter().enumerate() {
            row[i] = p
                .parse::<usize>()
                .map_err(|_| PdError::Syntax(format!("bad label `{p}` in `{tok}`")))?;
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(PdError::Syntax("empty PD code".into()));
    }
    Ok(rows)
}

/// Parse a PD-code string into a [`Diagram`].
pub fn parse_pd(text: &str) -> Result<Diagram, PdError> {
    Diagram::from_rows(&parse_quadruples(text)?)
}

impl Diagram {
    pub fn from_rows(rows: &[[usize; 4]]) -> Result<Self, PdError> {
        let n = rows.len();
        let m = 2 * n;
        let succ = |x: usize| x % m + 1;

        let mut counts = vec![0usize; m + 1];
        for row in rows {
            for &x in row {
                if x == 0 || x > m {
                    return Err(PdError::BadLabels);
                }
                counts[x] += 1;
            }
        }
        if counts[1..].iter().any(|&c| c != 2) {
            return Err(PdError::BadLabels);
        }

        let mut crossings = Vec::with_capacity(n);
        for (ci, row) in rows.iter().enumerate() {
            let [p0, p1, p2, p3] = *row;
            if p2 != succ(p0) {
                return Err(PdError::UnderNotConsecutive(ci));
            }
            let c13 = p3 == succ(p1);
            let c31 = p1 == succ(p3);
            let over_in_slot = match (c13, c31) {
                (true, true) => {
                    // only possible for a 1-crossing kink; the loop segment
                    // leaves as under-out and returns as over-in
                    if p1 == p2 {
                        1
                    } else {
                        3
                    }
                }
                (true, false) => 1,
                (false, true) => 3,
                (false, false) => return Err(PdError::OverNotConsecutive(ci)),
            };
            let sign = if over_in_slot == 3 { 1 } else { -1 };
            crossings.push(Crossing {
                slots: *row,
                over_in_slot,
                sign,
            });
        }

        // darts per segment
        let mut darts: Vec<Vec<Dart>> = vec![Vec::new(); m + 1];
        for (ci, c) in crossings.iter().enumerate() {
            for (slot, &s) in c.slots.iter().enumerate() {
                darts[s].push(Dart { crossing: ci, slot });
            }
        }
        let role_of = |crossings: &[Crossing], d: Dart| -> EndRole {
            let c = &crossings[d.crossing];
            match d.slot {
                0 => EndRole::UnderIn,
                2 => EndRole::UnderOut,
                s if s == c.over_in_slot => EndRole::OverIn,
                _ => EndRole::OverOut,
            }
        };
        let mut head = vec![
            Dart {
                crossing: 0,
                slot: 0
            };
            m + 1
        ];
        let mut tail = vec![
            Dart {
                crossing: 0,
                slot: 0
            };
            m + 1
        ];
        for s in 1..=m {
            let (d0, d1) = (darts[s][0], darts[s][1]);
            let (r0, r1) = (role_of(&crossings, d0), role_of(&crossings, d1));
            match (
                matches!(r0, EndRole::UnderIn | EndRole::OverIn),
                matches!(r1, EndRole::UnderIn | EndRole::OverIn),
            ) {
                (true, false) => {
                    head[s] = d0;
                    tail[s] = d1;
                }
                (false, true) => {
                    head[s] = d1;
                    tail[s] = d0;
                }
                _ => return Err(PdError::BadLabels),
            }
        }

        // connectivity of the crossing graph
        if n > 1 {
            let mut adj = vec![Vec::new(); n];
            #[allow(clippy::needless_range_loop)]
            for s in 1..=m {
                let (a, b) = (darts[s][0].crossing, darts[s][1].crossing);
                adj[a].push(b);
                adj[b].push(a);
            }
            let mut seen = vec![false; n];
            let mut stack = vec![0usize];
            seen[0] = true;
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            if seen.iter().any(|&s| !s) {
                return Err(PdError::Disconnected);
            }
        }

        let writhe = crossings.iter().map(|c| c.sign as i64).sum();

        let mut d = Diagram {
            crossings,
            regions: Vec::new(),
            quad_region: BTreeMap::new(),
            head,
            tail,
            underpass: Vec::new(),
            seg_arc: vec![0; m + 1],
            writhe,
        };
        d.build_regions_internal()?;
        d.build_underpass(None)?;
        Ok(d)
    }

    fn alpha(&self, d: Dart) -> Dart {
        let s = self.crossings[d.crossing].slots[d.slot];
        let h = self.head[s];
        let t = self.tail[s];
        if h == d {
            t
        } else {
            h
        }
    }

    /// Face traversal of the planar embedding given by the PD rotation system.
    fn build_regions_internal(&mut self) -> Result<(), PdError> {
        let n = self.n();
        let mut used = vec![[false; 4]; n];
        let mut regions = Vec::new();
        for ci in 0..n {
            for k in 0..4 {
                if used[ci][k] {
                    continue;
                }
                let start = Dart {
                    crossing: ci,
                    slot: k,
                };
                let mut corners = Vec::new();
                let mut steps = Vec::new();
                let mut dep = start;
                loop {
                    used[dep.crossing][dep.slot] = true;
                    let s = self.crossings[dep.crossing].slots[dep.slot];
                    // walking the segment away from `dep`; the region lies on
                    // the right when we follow the segment's own orientation
                    let side = if dep == self.tail[s] {
                        Side::Right
                    } else {
                        Side::Left
                    };
                    steps.push((s, side));
                    let arr = self.alpha(dep);
                    corners.push((arr.crossing, arr.slot));
                    dep = Dart {
                        crossing: arr.crossing,
                        slot: (arr.slot + 1) % 4,
                    };
                    if dep == start {
                        break;
                    }
                }
                regions.push(Region {
                    id: regions.len() + 1,
                    corners,
                    steps,
                });
            }
        }
        if regions.len() != n + 2 {
            return Err(PdError::NonPlanar(regions.len(), n + 2));
        }
        self.quad_region.clear();
        for r in &regions {
            for &(ci, q) in &r.corners {
                self.quad_region.insert((ci, q), r.id);
            }
        }
        self.regions = regions;
        Ok(())
    }

    fn build_underpass(&mut self, base: Option<usize>) -> Result<(), PdError> {
        let n = self.n();
        let m = 2 * n;
        let start_seg = match base {
            Some(ci) => {
                if ci >= n {
                    return Err(PdError::BadBaseCrossing(ci));
                }
                self.crossings[ci].under_in()
            }
            None => 1,
        };
        let mut order = Vec::with_capacity(n);
        let mut s = start_seg;
        for _ in 0..m {
            let h = self.head[s];
            if h.slot == 0 && !order.contains(&h.crossing) {
                order.push(h.crossing);
            }
            s = s % m + 1;
        }
        debug_assert_eq!(order.len(), n);
        // arcs: arc i+1 starts at the under-out of order[i]
        for (i, &ci) in order.iter().enumerate() {
            let mut s = self.crossings[ci].under_out();
            loop {
                self.seg_arc[s] = i + 1;
                if self.head[s].slot == 0 {
                    break;
                }
                s = s % m + 1;
            }
        }
        self.underpass = order;
        Ok(())
    }

    /// Re-enumerate crossings from a different base crossing (0-based index).
    pub fn with_base_crossing(mut self, base: usize) -> Result<Self, PdError> {
        self.build_underpass(Some(base))?;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.crossings.len()
    }
    pub fn num_segments(&self) -> usize {
        2 * self.n()
    }
    pub fn num_regions(&self) -> usize {
        self.regions.len()
    }
    pub fn writhe(&self) -> i64 {
        self.writhe
    }
    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }
    pub fn regions(&self) -> &[Region] {
        &self.regions
    }
    /// Crossing indices in under-pass order `c_1..c_n`.
    pub fn underpass_order(&self) -> &[usize] {
        &self.underpass
    }
    /// Crossing signs `e_1..e_n` in under-pass order.
    pub fn signs_in_order(&self) -> Vec<i8> {
        self.underpass
            .iter()
            .map(|&c| self.crossings[c].sign)
            .collect()
    }
    /// Over-arc index (1-based) at each crossing of the under-pass order.
    pub fn over_arc_in_order(&self) -> Vec<usize> {
        self.underpass
            .iter()
            .map(|&c| self.seg_arc[self.crossings[c].over_in()])
            .collect()
    }
    pub fn arc_of_segment(&self, s: SegId) -> usize {
        self.seg_arc[s]
    }
    /// Over-arcs as segment runs: `arcs()[i]` is arc `a_{i+1}`, the maximal run
    /// from the under-out of `c_{i+1}` to the under-in of `c_{i+2}`.
    pub fn arcs(&self) -> Vec<Vec<SegId>> {
        let m = self.num_segments();
        let mut out = vec![Vec::new(); self.n()];
        for (i, &ci) in self.underpass.iter().enumerate() {
            let mut s = self.crossings[ci].under_out();
            loop {
                out[i].push(s);
                if self.head[s].slot == 0 {
                    break;
                }
                s = s % m + 1;
            }
        }
        out
    }
    pub fn head_dart(&self, s: SegId) -> Dart {
        self.head[s]
    }
    pub fn tail_dart(&self, s: SegId) -> Dart {
        self.tail[s]
    }
    pub fn region_at(&self, crossing: usize, quadrant: usize) -> RegionId {
        self.quad_region[&(crossing, quadrant)]
    }

    /// Region ids on the left and right of an oriented segment.
    pub fn flanking_regions(&self, s: SegId) -> (RegionId, RegionId) {
        let t = self.tail[s];
        let left = self.quad_region[&(t.crossing, t.slot)];
        let right = self.quad_region[&(t.crossing, (t.slot + 3) % 4)];
        (left, right)
    }

    /// Whether some segment has both ends at one crossing.
    pub fn has_kink(&self) -> bool {
        (1..=self.num_segments()).any(|s| self.head[s].crossing == self.tail[s].crossing)
    }

    pub fn role(&self, d: Dart) -> EndRole {
        let c = &self.crossings[d.crossing];
        match d.slot {
            0 => EndRole::UnderIn,
            2 => EndRole::UnderOut,
            s if s == c.over_in_slot => EndRole::OverIn,
            _ => EndRole::OverOut,
        }
    }

    /// z-mode crossing frame: segment ids at positions a,b,c,d.
    pub fn z_frame(&self, ci: usize) -> CrossingFrame {
        let c = &self.crossings[ci];
        let (b, d) = if c.sign > 0 {
            (c.over_in(), c.over_out())
        } else {
            (c.over_out(), c.over_in())
        };
        CrossingFrame {
            a: c.under_in(),
            b,
            c: c.under_out(),
            d,
        }
    }

    /// w-mode crossing frame: region ids at positions a,b,c,d
    /// (quadrants counterclockwise from the under-in slot).
    pub fn w_frame(&self, ci: usize) -> CrossingFrame {
        CrossingFrame {
            a: self.quad_region[&(ci, 0)],
            b: self.quad_region[&(ci, 1)],
            c: self.quad_region[&(ci, 2)],
            d: self.quad_region[&(ci, 3)],
        }
    }

    /// Per-crossing frames for the requested mode.
    pub fn local_frames(&self, mode: crate::gluing::Mode) -> Vec<CrossingFrame> {
        (0..self.n())
            .map(|ci| match mode {
                crate::gluing::Mode::Z => self.z_frame(ci),
                crate::gluing::Mode::W => self.w_frame(ci),
            })
            .collect()
    }

    /// The w-frame position ('a'..'d') of a quadrant at a crossing.
    pub fn w_label_of_quadrant(&self, quadrant: usize) -> char {
        (b'a' + quadrant as u8) as char
    }

    /// Segment frame for the T4 equation of segment `s`.
    pub fn segment_frame(&self, s: SegId) -> SegmentFrame {
        let t = self.tail[s];
        let h = self.head[s];
        let ct = &self.crossings[t.crossing];
        let ch = &self.crossings[h.crossing];
        // left-side transversal neighbours: outbound end -> slot+1, inbound -> slot-1
        let b = ct.slots[(t.slot + 1) % 4];
        let a = ct.slots[(t.slot + 3) % 4];
        let e = ch.slots[(h.slot + 3) % 4];
        let d = ch.slots[(h.slot + 1) % 4];
        let case = match (self.role(t).is_over(), self.role(h).is_over()) {
            (true, false) => SegCase::A,
            (false, true) => SegCase::B,
            (true, true) => SegCase::C,
            (false, false) => SegCase::D,
        };
        SegmentFrame {
            case,
            a,
            b,
            c: s,
            d,
            e,
            tail_crossing: t.crossing,
            head_crossing: h.crossing,
        }
    }

    /// Serialize back to the PD text format.
    pub fn to_pd_string(&self) -> String {
        let rows: Vec<String> = self
            .crossings
            .iter()
            .map(|c| {
                format!(
                    "X[{},{},{},{}]",
                    c.slots[0], c.slots[1], c.slots[2], c.slots[3]
                )
            })
            .collect();
        rows.join(";")
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_pd_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    #[test]
    fn unknot_kink_counts() {
        let d = parse_pd("X[1,1,2,2]").unwrap();
        assert_eq!(d.n(), 1);
        assert_eq!(d.num_regions(), 3);
        assert_eq!(d.writhe(), 1);
        assert!(d.has_kink());
    }

    #[test]
    fn trefoil_counts() {
        let d = parse_pd("X[1,5,2,4];X[3,1,4,6];X[5,3,6,2]").unwrap();
        assert_eq!(d.num_segments(), 6);
        assert_eq!(d.num_regions(), 5);
        assert_eq!(d.writhe(), 3);
        assert!(!d.has_kink());
    }

    #[test]
    fn figure_eight_counts_and_order() {
        let d = parse_pd(builtin::FIG8_PD).unwrap();
        assert_eq!(d.num_segments(), 8);
        assert_eq!(d.num_regions(), 6);
        assert_eq!(d.writhe(), 0);
        assert_eq!(d.signs_in_order(), vec![-1, 1, -1, 1]);
        // under-pass traversal visits each crossing once
        let mut seen = d.underpass_order().to_vec();
        seen.sort_unstable();
        assert_eq!(seen, vec![0, 1, 2, 3]);
    }

    #[test]
    fn trefoil_kink_order() {
        let d = parse_pd(builtin::TREFOIL_KINK_PD).unwrap();
        assert_eq!(d.writhe(), 2);
        assert_eq!(d.signs_in_order(), vec![1, 1, -1, 1]);
        assert_eq!(d.num_regions(), 6);
        assert!(d.has_kink());
    }

    #[test]
    fn arcs_partition_segments() {
        for pd in [builtin::FIG8_PD, builtin::TREFOIL_KINK_PD] {
            let d = parse_pd(pd).unwrap();
            let arcs = d.arcs();
            assert_eq!(arcs.len(), d.n());
            let mut all: Vec<usize> = arcs.iter().flatten().copied().collect();
            all.sort_unstable();
            assert_eq!(all, (1..=d.num_segments()).collect::<Vec<_>>());
            for (i, arc) in arcs.iter().enumerate() {
                for &s in arc {
                    assert_eq!(d.arc_of_segment(s), i + 1);
                }
            }
        }
    }

    #[test]
    fn base_crossing_rotates_order() {
        let d = parse_pd(builtin::FIG8_PD).unwrap();
        let order = d.underpass_order().to_vec();
        let c2 = order[1];
        let d2 = d.clone().with_base_crossing(c2).unwrap();
        let rotated: Vec<usize> = order[1..]
            .iter()
            .chain(order[..1].iter())
            .copied()
            .collect();
        assert_eq!(d2.underpass_order(), &rotated[..]);
    }

    #[test]
    fn every_segment_borders_two_regions() {
        for pd in [builtin::FIG8_PD, builtin::TREFOIL_KINK_PD, "X[1,1,2,2]"] {
            let d = parse_pd(pd).unwrap();
            let mut count = vec![0usize; d.num_segments() + 1];
            for r in d.regions() {
                for &(s, _) in &r.steps {
                    count[s] += 1;
                }
            }
            assert!(count[1..].iter().all(|&c| c == 2), "pd {pd}");
            // every crossing contributes exactly 4 corners
            let total: usize = d.regions().iter().map(|r| r.corners.len()).sum();
            assert_eq!(total, 4 * d.n());
        }
    }

    #[test]
    fn pd_roundtrip() {
        for pd in [builtin::FIG8_PD, builtin::TREFOIL_KINK_PD] {
            let d = parse_pd(pd).unwrap();
            let d2 = parse_pd(&d.to_pd_string()).unwrap();
            assert_eq!(d.to_pd_string(), d2.to_pd_string());
            assert_eq!(d.writhe(), d2.writhe());
        }
    }

    #[test]
    fn frames_cover_incident_objects() {
        let d = parse_pd(builtin::FIG8_PD).unwrap();
        for ci in 0..d.n() {
            let zf = d.z_frame(ci);
            let mut segs = vec![zf.a, zf.b, zf.c, zf.d];
            segs.sort_unstable();
            let mut expect = d.crossings()[ci].slots.to_vec();
            expect.sort_unstable();
            assert_eq!(segs, expect);
            let wf = d.w_frame(ci);
            for q in 0..4 {
                assert!([wf.a, wf.b, wf.c, wf.d].contains(&d.region_at(ci, q)));
            }
        }
    }

    #[test]
    fn kinked_crossing_repeats_region() {
        let d = parse_pd(builtin::TREFOIL_KINK_PD).unwrap();
        let kink_ci = (0..d.n())
            .find(|&ci| {
                let c = &d.crossings()[ci];
                let set: std::collections::BTreeSet<_> = c.slots.iter().collect();
                set.len() < 4
            })
            .unwrap();
        let wf = d.w_frame(kink_ci);
        // the outer region sits at both a and c
        assert_eq!(wf.a, wf.c);
        assert_ne!(wf.b, wf.d);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_pd("garbage"), Err(PdError::Syntax(_))));
        assert!(matches!(parse_pd("X[1,2,3]"), Err(PdError::Syntax(_))));
        assert!(matches!(parse_pd("X[1,1,1,1]"), Err(PdError::BadLabels)));
        // two disjoint kinks: labels shared range but disconnected structure
        assert!(parse_pd("X[1,1,2,2];X[3,3,4,4]").is_err());
    }

    #[test]
    fn nonplanar_pd_rejected() {
        // label-consistent but not planar (one crossing's rotation flipped)
        match parse_pd("X[1,4,2,5];X[3,1,4,6];X[5,3,6,2]") {
            Err(PdError::NonPlanar(found, expect)) => {
                assert_eq!((found, expect), (3, 5));
            }
            other => panic!("expected NonPlanar, got {other:?}"),
        }
    }

    #[test]
    fn segment_frame_cases() {
        let d = parse_pd(builtin::FIG8_PD).unwrap();
        // alternating diagram: every segment is over at one end, under at the other
        for s in 1..=d.num_segments() {
            let f = d.segment_frame(s);
            assert!(matches!(f.case, SegCase::A | SegCase::B));
            assert_eq!(f.c, s);
        }
    }
}
