//! Incremental Delaunay triangulation (Bowyer–Watson) with Ruppert-style
//! refinement of convex regions bounded by a closed loop of curves.

use crate::error::{Error, Result};
use crate::geometry::{BoundaryPiece, Vec2};
use robust::Coord;

const NONE: usize = usize::MAX;
const SUPER: usize = 3;

/// Minimum angle (degrees) below which a triangle is split.
pub(crate) const QUALITY_ANGLE_DEG: f64 = 25.0;
/// Triangles with an edge longer than this multiple of the target size are split.
pub(crate) const SIZE_FACTOR: f64 = 1.3;

#[derive(Clone, Copy)]
struct Tri {
    v: [usize; 3],
    /// `nb[i]` lies across the edge opposite `v[i]`.
    nb: [usize; 3],
    alive: bool,
}

struct Triangulation {
    pts: Vec<Vec2>,
    tris: Vec<Tri>,
    /// Some live triangle incident to each vertex.
    incident: Vec<usize>,
    mark: Vec<u32>,
    stamp: u32,
    last: usize,
}

fn c(p: Vec2) -> Coord<f64> {
    Coord { x: p.x, y: p.y }
}

fn orient(a: Vec2, b: Vec2, p: Vec2) -> f64 {
    robust::orient2d(c(a), c(b), c(p))
}

impl Triangulation {
    fn new(lo: Vec2, hi: Vec2) -> Self {
        let center = (lo + hi) * 0.5;
        let r = 1e4 * (hi.dist(lo) + 1.0);
        let pts = vec![center + Vec2::new(-r, -r), center + Vec2::new(r, -r), center + Vec2::new(0.0, r)];
        Triangulation {
            pts,
            tris: vec![Tri { v: [0, 1, 2], nb: [NONE; 3], alive: true }],
            incident: vec![0; 3],
            mark: vec![0],
            stamp: 0,
            last: 0,
        }
    }

    fn in_circle(&self, t: usize, p: Vec2) -> bool {
        let [a, b, cc] = self.tris[t].v;
        robust::incircle(c(self.pts[a]), c(self.pts[b]), c(self.pts[cc]), c(p)) > 0.0
    }

    fn contains(&self, t: usize, p: Vec2) -> Option<usize> {
        let v = self.tris[t].v;
        (0..3).find(|&i| orient(self.pts[v[(i + 1) % 3]], self.pts[v[(i + 2) % 3]], p) < 0.0)
    }

    fn locate(&self, p: Vec2) -> usize {
        let mut t =
            if self.tris[self.last].alive { self.last } else { self.tris.iter().rposition(|t| t.alive).unwrap() };
        for _ in 0..4 * self.tris.len() + 16 {
            match self.contains(t, p) {
                None => return t,
                Some(i) => match self.tris[t].nb[i] {
                    NONE => break,
                    n => t = n,
                },
            }
        }
        (0..self.tris.len())
            .find(|&t| self.tris[t].alive && self.contains(t, p).is_none())
            .expect("point outside the enclosing triangle")
    }

    /// Inserts `p`; returns its index, or `None` if it duplicates a vertex.
    fn insert(&mut self, p: Vec2) -> Option<usize> {
        let t0 = self.locate(p);
        if self.tris[t0].v.iter().any(|&v| self.pts[v] == p) {
            return None;
        }
        self.stamp += 1;
        let stamp = self.stamp;
        let mut cavity = vec![t0];
        self.mark[t0] = stamp;
        let mut k = 0;
        while k < cavity.len() {
            let t = cavity[k];
            k += 1;
            for &n in &self.tris[t].nb {
                if n != NONE && self.mark[n] != stamp && self.in_circle(n, p) {
                    self.mark[n] = stamp;
                    cavity.push(n);
                }
            }
        }
        let pi = self.pts.len();
        self.pts.push(p);
        self.incident.push(NONE);
        let first = self.tris.len();
        let mut starts: Vec<(usize, usize)> = Vec::new();
        for &t in &cavity {
            let tri = self.tris[t];
            for i in 0..3 {
                let n = tri.nb[i];
                if n != NONE && self.mark[n] == stamp {
                    continue;
                }
                let (a, b) = (tri.v[(i + 1) % 3], tri.v[(i + 2) % 3]);
                let nt = self.tris.len();
                self.tris.push(Tri { v: [a, b, pi], nb: [NONE, NONE, n], alive: true });
                self.mark.push(0);
                if n != NONE {
                    let j = self.tris[n].nb.iter().position(|&x| x == t).unwrap();
                    self.tris[n].nb[j] = nt;
                }
                starts.push((a, nt));
            }
        }
        starts.sort_unstable();
        let by_start = |v: usize| starts[starts.binary_search_by_key(&v, |s| s.0).unwrap()].1;
        for nt in first..self.tris.len() {
            let [a, b, _] = self.tris[nt].v;
            let across_bp = by_start(b);
            self.tris[nt].nb[0] = across_bp;
            self.tris[across_bp].nb[1] = nt;
            self.incident[a] = nt;
            self.incident[b] = nt;
        }
        for &t in &cavity {
            self.tris[t].alive = false;
        }
        self.incident[pi] = first;
        self.last = first;
        Some(pi)
    }

    /// Live triangle containing the directed edge `a → b`.
    fn find_edge(&self, a: usize, b: usize) -> Option<usize> {
        let start = self.incident[a];
        let mut t = start;
        for _ in 0..256 {
            let tri = &self.tris[t];
            let i = tri.v.iter().position(|&v| v == a)?;
            if tri.v[(i + 1) % 3] == b {
                return Some(t);
            }
            // rotate around `a` across the edge (a, v[i+1])
            t = tri.nb[(i + 2) % 3];
            if t == NONE || t == start {
                return None;
            }
        }
        None
    }

    fn real(&self, t: usize) -> bool {
        self.tris[t].alive && self.tris[t].v.iter().all(|&v| v >= SUPER)
    }
}

struct Segment {
    a: usize,
    b: usize,
    curve: usize,
    s0: f64,
    s1: f64,
}

fn circumcenter(a: Vec2, b: Vec2, cc: Vec2) -> Vec2 {
    let (ba, ca) = (b - a, cc - a);
    let d = 2.0 * ba.cross(ca);
    let (lb, lc) = (ba.norm_sq(), ca.norm_sq());
    a + Vec2::new(ca.y * lb - ba.y * lc, ba.x * lc - ca.x * lb) / d
}

fn angles(p: [Vec2; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for k in 0..3 {
        let u = p[(k + 1) % 3] - p[k];
        let v = p[(k + 2) % 3] - p[k];
        out[k] = u.cross(v).abs().atan2(u.dot(v));
    }
    out
}

/// Quality-triangulates the convex region enclosed by `curves` (a closed CCW
/// loop). `corner_at_start[i]` exempts small angles at the start of curve `i`.
pub(crate) fn triangulate(
    curves: &[BoundaryPiece],
    corner_at_start: &[bool],
    h: f64,
    max_vertices: usize,
) -> Result<(Vec<Vec2>, Vec<[usize; 3]>)> {
    let mut boundary = Vec::new();
    let mut seg_params = Vec::new();
    for (ci, curve) in curves.iter().enumerate() {
        let n = (curve.length() / h).ceil().max(1.0) as usize;
        let ts = curve.equal_arclength_params(n);
        for k in 0..n {
            boundary.push(curve.point(ts[k]));
            seg_params.push((ci, ts[k], ts[k + 1]));
        }
    }
    let (lo, hi) = boundary.iter().fold(
        (Vec2::new(f64::INFINITY, f64::INFINITY), Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY)),
        |(lo, hi), v| (Vec2::new(lo.x.min(v.x), lo.y.min(v.y)), Vec2::new(hi.x.max(v.x), hi.y.max(v.y))),
    );
    let mut tr = Triangulation::new(lo, hi);
    let mut segments = Vec::with_capacity(boundary.len());
    let ids: Vec<usize> = boundary
        .iter()
        .map(|&p| tr.insert(p).ok_or_else(|| Error::Mesh("coincident boundary samples".into())))
        .collect::<Result<_>>()?;
    for (k, &(curve, s0, s1)) in seg_params.iter().enumerate() {
        segments.push(Segment { a: ids[k], b: ids[(k + 1) % ids.len()], curve, s0, s1 });
    }
    let mut corner = vec![false; tr.pts.len()];
    for (k, &(curve, _, _)) in seg_params.iter().enumerate() {
        if corner_at_start[curve] && (k == 0 || seg_params[k - 1].0 != curve) {
            corner[ids[k]] = true;
        }
    }
    // Corners with an interior angle below 60° get concentric-shell splitting,
    // and skinny triangles forced by them are left alone; otherwise refinement
    // chases the input angle down to round-off.
    let nc = curves.len();
    let acute_start: Vec<bool> = (0..nc)
        .map(|i| {
            let (prev, cur) = (&curves[(i + nc - 1) % nc], &curves[i]);
            let (tp, tc) = (prev.equal_arclength_params(1), cur.equal_arclength_params(1));
            let (t_in, t_out) = (prev.deriv1(tp[1]), cur.deriv1(tc[0]));
            let turn = t_in.cross(t_out).atan2(t_in.dot(t_out));
            corner_at_start[i] && std::f64::consts::PI - turn < std::f64::consts::FRAC_PI_3
        })
        .collect();
    let mut on_curve: Vec<Option<usize>> = vec![None; tr.pts.len()];
    for s in &segments {
        on_curve[s.b] = Some(s.curve);
    }
    let shares_acute_corner =
        |i: usize, j: usize| (j == (i + 1) % nc && acute_start[j]) || (i == (j + 1) % nc && acute_start[i]);

    let n_b = boundary.len();
    let area: f64 = (0..n_b).map(|k| 0.5 * boundary[k].cross(boundary[(k + 1) % n_b])).sum();
    let lattice_cell = 3f64.sqrt() / 2.0;
    let estimate = n_b + (area / (lattice_cell * h * h)) as usize;
    if estimate > max_vertices {
        return Err(Error::MeshResource {
            reason: format!("about {estimate} vertices needed, cap is {max_vertices}"),
            achieved_h: (area / (lattice_cell * max_vertices as f64)).sqrt().max(h),
        });
    }

    // Interior seeds on an equilateral lattice, kept clear of the boundary.
    let chords: Vec<(Vec2, Vec2)> =
        (0..boundary.len()).map(|k| (boundary[k], boundary[(k + 1) % boundary.len()])).collect();
    let dy = h * lattice_cell;
    let rows = ((hi.y - lo.y) / dy).floor() as usize;
    for j in 1..=rows {
        let y = lo.y + j as f64 * dy;
        let shift = if j % 2 == 1 { 0.5 * h } else { 0.0 };
        let mut x = lo.x + shift + 0.5 * h;
        while x < hi.x {
            let p = Vec2::new(x, y);
            let inside = chords.iter().all(|&(a, b)| orient(a, b, p) > 0.0);
            if inside && chords.iter().all(|&(a, b)| super::point_segment_distance(p, a, b) >= 0.6 * h) {
                tr.insert(p);
            }
            x += h;
        }
    }

    let min_angle = QUALITY_ANGLE_DEG.to_radians();
    let max_len = SIZE_FACTOR * h;
    let cap = max_vertices + SUPER;
    let split =
        |tr: &mut Triangulation, segs: &mut Vec<Segment>, on_curve: &mut Vec<Option<usize>>, k: usize| -> Result<()> {
            let s = &segs[k];
            let curve = &curves[s.curve];
            let is_corner = |v: usize| corner.get(v).copied().unwrap_or(false);
            let at_start = acute_start[s.curve] && is_corner(s.a);
            let at_end = acute_start[(s.curve + 1) % nc] && is_corner(s.b);
            let sm = if curve.is_straight() && at_start != at_end {
                // Split at a power-of-two multiple of h from the acute corner.
                let len = tr.pts[s.a].dist(tr.pts[s.b]);
                let d = h * 2f64.powf((0.5 * len / h).log2().round());
                let f = if at_start { d / len } else { 1.0 - d / len };
                s.s0 + f * (s.s1 - s.s0)
            } else {
                0.5 * (s.s0 + s.s1)
            };
            let p = curve.point(sm);
            let m = tr.insert(p).ok_or_else(|| Error::Mesh("boundary split point coincides with a vertex".into()))?;
            if on_curve.len() <= m {
                on_curve.resize(m + 1, None);
            }
            on_curve[m] = Some(s.curve);
            let (b, s1, curve) = (s.b, s.s1, s.curve);
            segs[k].b = m;
            segs[k].s1 = sm;
            segs.push(Segment { a: m, b, curve, s0: sm, s1 });
            Ok(())
        };

    loop {
        if tr.pts.len() > cap {
            let achieved = achieved_h(&tr);
            return Err(Error::MeshResource {
                reason: format!("vertex cap {max_vertices} exceeded for target h = {h}"),
                achieved_h: achieved,
            });
        }
        // Recover and unencroach boundary segments first.
        let mut k = 0;
        let mut changed = false;
        while k < segments.len() {
            let s = &segments[k];
            let encroached = match tr.find_edge(s.a, s.b) {
                None => true,
                Some(t) => {
                    let apex = tr.tris[t].v.iter().copied().find(|&v| v != s.a && v != s.b).unwrap();
                    apex >= SUPER && (tr.pts[s.a] - tr.pts[apex]).dot(tr.pts[s.b] - tr.pts[apex]) < 0.0
                }
            };
            if encroached {
                split(&mut tr, &mut segments, &mut on_curve, k)?;
                changed = true;
                if tr.pts.len() > cap {
                    break;
                }
            } else {
                k += 1;
            }
        }
        if changed {
            continue;
        }
        // Then split one batch of bad triangles.
        let bad: Vec<usize> = (0..tr.tris.len())
            .filter(|&t| tr.real(t))
            .filter(|&t| {
                let v = tr.tris[t].v;
                let p = [tr.pts[v[0]], tr.pts[v[1]], tr.pts[v[2]]];
                let longest = (0..3).map(|i| p[i].dist(p[(i + 1) % 3])).fold(0.0, f64::max);
                if longest > max_len {
                    return true;
                }
                let ang = angles(p);
                let (imin, amin) =
                    ang.iter()
                        .copied()
                        .enumerate()
                        .fold((0, f64::INFINITY), |b, (i, a)| if a < b.1 { (i, a) } else { b });
                if amin >= min_angle || corner.get(v[imin]).copied().unwrap_or(false) {
                    return false;
                }
                // The shortest edge joins the two sides of an acute corner.
                let (a, b) = (v[(imin + 1) % 3], v[(imin + 2) % 3]);
                match (on_curve.get(a).copied().flatten(), on_curve.get(b).copied().flatten()) {
                    (Some(i), Some(j)) => !shares_acute_corner(i, j),
                    _ => true,
                }
            })
            .collect();
        if bad.is_empty() {
            break;
        }
        let mut progress = false;
        for t in bad {
            if !tr.tris[t].alive || tr.pts.len() > cap {
                continue;
            }
            let v = tr.tris[t].v;
            let cc = circumcenter(tr.pts[v[0]], tr.pts[v[1]], tr.pts[v[2]]);
            let hits: Vec<usize> = (0..segments.len())
                .filter(|&k| {
                    let (a, b) = (tr.pts[segments[k].a], tr.pts[segments[k].b]);
                    (a - cc).dot(b - cc) < 0.0
                })
                .collect();
            if !hits.is_empty() {
                for k in hits {
                    split(&mut tr, &mut segments, &mut on_curve, k)?;
                }
                progress = true;
                break;
            }
            if segments.iter().any(|s| orient(tr.pts[s.a], tr.pts[s.b], cc) <= 0.0) {
                // Outside the region without encroaching: split the nearest segment.
                let k = (0..segments.len())
                    .min_by(|&i, &j| {
                        let di = super::point_segment_distance(cc, tr.pts[segments[i].a], tr.pts[segments[i].b]);
                        let dj = super::point_segment_distance(cc, tr.pts[segments[j].a], tr.pts[segments[j].b]);
                        di.total_cmp(&dj)
                    })
                    .unwrap();
                split(&mut tr, &mut segments, &mut on_curve, k)?;
                progress = true;
                break;
            }
            if tr.insert(cc).is_some() {
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }

    let live: Vec<[usize; 3]> = (0..tr.tris.len()).filter(|&t| tr.real(t)).map(|t| tr.tris[t].v).collect();
    let vertices = tr.pts[SUPER..].to_vec();
    let triangles = live.into_iter().map(|v| [v[0] - SUPER, v[1] - SUPER, v[2] - SUPER]).collect();
    Ok((vertices, triangles))
}

fn achieved_h(tr: &Triangulation) -> f64 {
    (0..tr.tris.len())
        .filter(|&t| tr.real(t))
        .flat_map(|t| {
            let v = tr.tris[t].v;
            (0..3).map(move |i| (v[i], v[(i + 1) % 3]))
        })
        .map(|(a, b)| tr.pts[a].dist(tr.pts[b]))
        .fold(0.0, f64::max)
}
