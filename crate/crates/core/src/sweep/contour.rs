//! Marching squares on the sampling grid of a surface.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::surface::ImmersedSurface;

/// One chained component of a zero set, in sampling parameters.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Contour {
    pub params: Vec<[f64; 2]>,
    pub closed: bool,
    pub touches_window: bool,
}

/// `(direction, i, j)`: direction 0 joins node `(i, j)` to `(i + 1, j)`,
/// direction 1 joins it to `(i, j + 1)`. Indices are wrapped.
type EdgeKey = (u8, usize, usize);

struct Grid<'a> {
    surface: &'a ImmersedSurface,
    n: [usize; 2],
}

impl Grid<'_> {
    fn wrap(&self, i: usize, j: usize) -> (usize, usize) {
        (i % self.n[0], j % self.n[1])
    }

    fn key(&self, dir: u8, i: usize, j: usize) -> EdgeKey {
        let (i, j) = self.wrap(i, j);
        (dir, i, j)
    }

    /// Whether a dangling chain end at this edge sits on a window edge.
    fn window_end(&self, e: EdgeKey) -> bool {
        let (d, i, j) = e;
        let dom = &self.surface.domain;
        if d == 1 && !dom.periodic[0] {
            if i == 0 {
                return dom.window_edges[0];
            }
            if i == self.n[0] - 1 {
                return dom.window_edges[1];
            }
        }
        if d == 0 && !dom.periodic[1] {
            if j == 0 {
                return dom.window_edges[2];
            }
            if j == self.n[1] - 1 {
                return dom.window_edges[3];
            }
        }
        // an interior edge whose neighbour cell could not be evaluated
        true
    }
}

/// A non-periodic side that is not a window is a collapsed pole row: its
/// nodes are one point, so they get one value and no crossings.
fn collapse_degenerate_sides(surface: &ImmersedSurface, values: &[f64]) -> Vec<f64> {
    let n = surface.node_counts();
    let dom = &surface.domain;
    let mut out = values.to_vec();
    let mut flatten = |idx: Vec<usize>| {
        let m = idx.iter().map(|&k| out[k]).sum::<f64>() / idx.len() as f64;
        if m.is_finite() {
            for k in idx {
                out[k] = m;
            }
        }
    };
    if !dom.periodic[0] {
        for (side, i) in [(0, 0), (1, n[0] - 1)] {
            if !dom.window_edges[side] {
                flatten((0..n[1]).map(|j| i * n[1] + j).collect());
            }
        }
    }
    if !dom.periodic[1] {
        for (side, j) in [(2, 0), (3, n[1] - 1)] {
            if !dom.window_edges[side] {
                flatten((0..n[0]).map(|i| i * n[1] + j).collect());
            }
        }
    }
    out
}

/// Root of `f` on the segment `a → b`, given `f(a)`, `f(b)` of opposite sign.
fn refine<F: Fn([f64; 2]) -> Option<f64>>(f: &F, a: [f64; 2], b: [f64; 2], fa: f64, fb: f64) -> [f64; 2] {
    let at = |l: f64| [a[0] + l * (b[0] - a[0]), a[1] + l * (b[1] - a[1])];
    let (mut l0, mut l1, mut f0, mut f1) = (0.0, 1.0, fa, fb);
    let mut side = 0i8;
    let mut best = if fa.abs() < fb.abs() { 0.0 } else { 1.0 };
    for _ in 0..80 {
        let l = (l0 * f1 - l1 * f0) / (f1 - f0);
        let l = if l.is_finite() && l > l0 && l < l1 { l } else { 0.5 * (l0 + l1) };
        let Some(fl) = f(at(l)) else {
            break;
        };
        best = l;
        if fl == 0.0 || (l1 - l0) < 1e-15 {
            break;
        }
        if (fl < 0.0) == (f0 < 0.0) {
            l0 = l;
            f0 = fl;
            if side == -1 {
                f1 *= 0.5;
            }
            side = -1;
        } else {
            l1 = l;
            f1 = fl;
            if side == 1 {
                f0 *= 0.5;
            }
            side = 1;
        }
        if fl.abs() < 1e-14 {
            break;
        }
    }
    at(best)
}

/// Zero set of `f` over the surface's grid. `values` holds `f` at the nodes,
/// row-major in `(i, j)`, with NaN where it could not be evaluated.
pub(crate) fn zero_set<F>(surface: &ImmersedSurface, values: &[f64], f: F) -> Vec<Contour>
where
    F: Fn([f64; 2]) -> Option<f64> + Sync,
{
    let n = surface.node_counts();
    let g = Grid { surface, n };
    let values = collapse_degenerate_sides(surface, values);
    let val = |i: usize, j: usize| {
        let (i, j) = g.wrap(i, j);
        values[i * n[1] + j]
    };
    let neg = |v: f64| v < 0.0;
    let cells = [
        if surface.domain.periodic[0] { n[0] } else { n[0] - 1 },
        if surface.domain.periodic[1] { n[1] } else { n[1] - 1 },
    ];

    // edges with a sign change; each wrapped edge is listed once
    let mut crossing: Vec<(EdgeKey, [usize; 2], [usize; 2])> = Vec::new();
    for d in 0..2u8 {
        let (ri, rj) = if d == 0 { (cells[0], n[1]) } else { (n[0], cells[1]) };
        for i in 0..ri {
            for j in 0..rj {
                let (a, b) = if d == 0 { ([i, j], [i + 1, j]) } else { ([i, j], [i, j + 1]) };
                let (va, vb) = (val(a[0], a[1]), val(b[0], b[1]));
                if va.is_nan() || vb.is_nan() || neg(va) == neg(vb) {
                    continue;
                }
                crossing.push((g.key(d, i, j), a, b));
            }
        }
    }
    let points: HashMap<EdgeKey, [f64; 2]> = crossing
        .par_iter()
        .map(|&(k, a, b)| {
            let (pa, pb) = (surface.node(a[0], a[1]), surface.node(b[0], b[1]));
            (k, refine(&f, pa, pb, val(a[0], a[1]), val(b[0], b[1])))
        })
        .collect();

    let mut segs: Vec<(EdgeKey, EdgeKey)> = Vec::new();
    for i in 0..cells[0] {
        for j in 0..cells[1] {
            let c = [val(i, j), val(i + 1, j), val(i + 1, j + 1), val(i, j + 1)];
            if c.iter().any(|v| v.is_nan()) {
                continue;
            }
            let e = [g.key(0, i, j), g.key(1, i + 1, j), g.key(0, i, j + 1), g.key(1, i, j)];
            let hit: Vec<usize> = (0..4).filter(|&k| neg(c[k]) != neg(c[(k + 1) % 4])).collect();
            match hit.len() {
                2 => segs.push((e[hit[0]], e[hit[1]])),
                4 => {
                    let mid = {
                        let (p, q) = (surface.node(i, j), surface.node(i + 1, j + 1));
                        f([0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]).unwrap_or(c.iter().sum::<f64>() * 0.25)
                    };
                    // corners of the opposite sign to the centre are cut off;
                    // corner k lies between edges k-1 and k
                    for k in 0..4 {
                        if neg(c[k]) != neg(mid) {
                            segs.push((e[(k + 3) % 4], e[k]));
                        }
                    }
                }
                _ => {}
            }
        }
    }

    let mut adj: HashMap<EdgeKey, Vec<usize>> = HashMap::new();
    for (s, &(a, b)) in segs.iter().enumerate() {
        adj.entry(a).or_default().push(s);
        adj.entry(b).or_default().push(s);
    }
    let mut used = vec![false; segs.len()];
    let walk = |start: EdgeKey, used: &mut Vec<bool>| -> (Vec<EdgeKey>, bool) {
        let mut chain = vec![start];
        let mut cur = start;
        loop {
            let next = adj[&cur].iter().copied().find(|&s| !used[s]);
            let Some(s) = next else { break };
            used[s] = true;
            let (a, b) = segs[s];
            cur = if a == cur { b } else { a };
            if cur == start {
                return (chain, true);
            }
            chain.push(cur);
        }
        (chain, false)
    };
    let mut open: Vec<Vec<EdgeKey>> = Vec::new();
    let mut starts: Vec<EdgeKey> = adj.iter().filter(|(_, v)| v.len() == 1).map(|(k, _)| *k).collect();
    starts.sort();
    for s in starts {
        if adj[&s].iter().all(|&k| used[k]) {
            continue;
        }
        open.push(walk(s, &mut used).0);
    }
    let mut out = Vec::new();
    for chain in open {
        let touches = g.window_end(chain[0]) || g.window_end(*chain.last().unwrap());
        out.push(Contour {
            params: chain.iter().map(|k| points[k]).collect(),
            closed: false,
            touches_window: touches,
        });
    }
    let mut rest: Vec<EdgeKey> = adj.keys().copied().collect();
    rest.sort();
    for s in rest {
        if adj[&s].iter().all(|&k| used[k]) {
            continue;
        }
        let (chain, closed) = walk(s, &mut used);
        out.push(Contour {
            params: chain.iter().map(|k| points[k]).collect(),
            closed,
            touches_window: !closed,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::submersion::Point3;
    use crate::surface::ParamDomain;
    use std::sync::Arc;

    fn flat_sheet(periodic: bool) -> ImmersedSurface {
        ImmersedSurface::new(
            "sheet",
            ParamDomain {
                u: [-1.0, 1.0],
                v: [-1.0, 1.0],
                periodic: [false, periodic],
                window_edges: [true; 4],
            },
            [40, 40],
            Arc::new(|u| Ok(Point3::new(u[0], u[1], 0.0))),
            1.0,
        )
    }

    fn run(s: &ImmersedSurface, f: impl Fn([f64; 2]) -> f64 + Sync) -> Vec<Contour> {
        let [nu, nv] = s.node_counts();
        let vals: Vec<f64> = (0..nu * nv).map(|k| f(s.node(k / nv, k % nv))).collect();
        zero_set(s, &vals, |u| Some(f(u)))
    }

    #[test]
    fn circle_is_one_closed_component() {
        let s = flat_sheet(false);
        let c = run(&s, |u| u[0] * u[0] + u[1] * u[1] - 0.49);
        assert_eq!(c.len(), 1);
        assert!(c[0].closed && !c[0].touches_window);
        for p in &c[0].params {
            assert!((p[0].hypot(p[1]) - 0.7).abs() < 1e-12);
        }
    }

    #[test]
    fn line_crosses_window() {
        let s = flat_sheet(false);
        let c = run(&s, |u| u[0] - 0.3 * u[1] - 0.1);
        assert_eq!(c.len(), 1);
        assert!(!c[0].closed && c[0].touches_window);
    }

    #[test]
    fn two_circles_and_saddles() {
        let s = flat_sheet(false);
        let c = run(&s, |u| ((u[0] - 0.5).powi(2) + u[1] * u[1] - 0.09) * ((u[0] + 0.5).powi(2) + u[1] * u[1] - 0.09));
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|c| c.closed));
    }

    #[test]
    fn periodic_seam_closes_loops() {
        let s = flat_sheet(true);
        let c = run(&s, |u| u[0] - 0.2 * (std::f64::consts::PI * u[1]).sin());
        assert_eq!(c.len(), 1);
        assert!(c[0].closed, "{:?}", c[0].params.len());
    }
}
