//! Quickhull in three dimensions with explicit handling of point, segment
//! and planar inputs.

use std::collections::HashMap;

use super::{cross, dist, dot, norm, scale, sub, HPolytope3, HalfSpace3, Tolerances, Vec3, VertexSet};

/// Relative distance below which a point counts as lying on a plane.
const REL_EPS: f64 = 1e-11;

/// Convex hull of a point cloud: its extreme points plus a half-space
/// description usable for containment tests.
#[derive(Debug, Clone, PartialEq)]
pub struct Hull {
    vertices: VertexSet,
    halfspaces: Vec<HalfSpace3>,
    dim: usize,
}

/// Extreme points of the convex hull of `points`.
pub fn convex_hull(points: &[Vec3]) -> VertexSet {
    Hull::new(points).vertices
}

impl Hull {
    pub fn new(points: &[Vec3]) -> Hull {
        let dedup = Tolerances::default().dedup;
        if points.is_empty() {
            return Hull { vertices: VertexSet::empty(dedup), halfspaces: Vec::new(), dim: 0 };
        }
        let (lo, hi) = bounds(points);
        let extent = norm(sub(hi, lo));
        let eps = (REL_EPS * extent).max(1e-15);

        let Some((i0, i1)) = farthest_pair(points, eps) else {
            return Hull::point(points[0]);
        };
        let d01 = sub(points[i1], points[i0]);
        let line_dist = |p: Vec3| norm(cross(d01, sub(p, points[i0]))) / norm(d01);
        let (i2, d2) = argmax(points, line_dist);
        if d2 <= eps {
            return Hull::segment(points, points[i0], d01);
        }
        let n = cross(d01, sub(points[i2], points[i0]));
        let n = scale(n, 1.0 / norm(n));
        let (i3, d3) = argmax(points, |p| dot(n, sub(p, points[i0])).abs());
        if d3 <= eps {
            return Hull::planar(points, points[i0], d01, n, eps);
        }
        Hull::solid(points, [i0, i1, i2, i3], eps)
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.vertices
    }

    pub fn into_vertices(self) -> VertexSet {
        self.vertices
    }

    /// Affine dimension of the hull (0 to 3).
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Half-spaces with unit normals whose intersection is the hull.
    pub fn halfspaces(&self) -> &[HalfSpace3] {
        &self.halfspaces
    }

    pub fn to_hpolytope(&self) -> HPolytope3 {
        HPolytope3::new(self.halfspaces.clone())
    }

    /// Whether `p` is within `tol` of every bounding plane.
    pub fn contains(&self, p: Vec3, tol: f64) -> bool {
        !self.vertices.is_empty() && self.halfspaces.iter().all(|h| h.excess(p) <= tol)
    }

    fn point(p: Vec3) -> Hull {
        let halfspaces = HPolytope3::cuboid(p, p).halfspaces().to_vec();
        Hull {
            vertices: VertexSet::from_points([p], Tolerances::default().dedup),
            halfspaces,
            dim: 0,
        }
    }

    fn segment(points: &[Vec3], origin: Vec3, d: Vec3) -> Hull {
        let d = scale(d, 1.0 / norm(d));
        let (imin, _) = argmax(points, |p| -dot(d, sub(p, origin)));
        let (imax, _) = argmax(points, |p| dot(d, sub(p, origin)));
        let (a, b) = (points[imin], points[imax]);
        let (u, w) = orthonormal_pair(d);
        let mut h = Vec::with_capacity(6);
        for e in [u, w] {
            h.push(HalfSpace3 { normal: e, offset: dot(e, a) });
            h.push(HalfSpace3 { normal: scale(e, -1.0), offset: -dot(e, a) });
        }
        h.push(HalfSpace3 { normal: d, offset: dot(d, b) });
        h.push(HalfSpace3 { normal: scale(d, -1.0), offset: -dot(d, a) });
        Hull {
            vertices: VertexSet::from_points([a, b], Tolerances::default().dedup),
            halfspaces: h,
            dim: 1,
        }
    }

    fn planar(points: &[Vec3], origin: Vec3, d01: Vec3, n: Vec3, eps: f64) -> Hull {
        let e1 = scale(d01, 1.0 / norm(d01));
        let e2 = cross(n, e1);
        let mut idx: Vec<usize> = (0..points.len()).collect();
        let proj: Vec<[f64; 2]> = points
            .iter()
            .map(|p| {
                let r = sub(*p, origin);
                [dot(r, e1), dot(r, e2)]
            })
            .collect();
        idx.sort_by(|&a, &b| proj[a].partial_cmp(&proj[b]).expect("finite points"));
        idx.dedup_by(|a, b| proj[*a] == proj[*b]);

        // Andrew's monotone chain, dropping points within eps of a chord.
        let turn = |o: usize, a: usize, b: usize| {
            let (o, a, b) = (proj[o], proj[a], proj[b]);
            let ob = [b[0] - o[0], b[1] - o[1]];
            let c = (a[0] - o[0]) * ob[1] - (a[1] - o[1]) * ob[0];
            c > eps * (ob[0] * ob[0] + ob[1] * ob[1]).sqrt()
        };
        let mut chain: Vec<usize> = Vec::with_capacity(2 * idx.len());
        for pass in 0..2 {
            let start = chain.len();
            let iter: Box<dyn Iterator<Item = &usize>> =
                if pass == 0 { Box::new(idx.iter()) } else { Box::new(idx.iter().rev()) };
            for &i in iter {
                while chain.len() >= start + 2 && !turn(chain[chain.len() - 2], chain[chain.len() - 1], i) {
                    chain.pop();
                }
                chain.push(i);
            }
            chain.pop();
        }
        if chain.len() < 3 {
            return Hull::segment(points, origin, d01);
        }
        // (e1, e2, n) is right-handed, so the chain is counterclockwise seen from `n`.
        let mut h = vec![
            HalfSpace3 { normal: n, offset: dot(n, origin) },
            HalfSpace3 { normal: scale(n, -1.0), offset: -dot(n, origin) },
        ];
        for k in 0..chain.len() {
            let a = points[chain[k]];
            let b = points[chain[(k + 1) % chain.len()]];
            let out = cross(sub(b, a), n);
            let out = scale(out, 1.0 / norm(out));
            h.push(HalfSpace3 { normal: out, offset: dot(out, a) });
        }
        let verts = chain.iter().map(|&i| points[i]);
        Hull {
            vertices: VertexSet::from_points(verts, Tolerances::default().dedup),
            halfspaces: h,
            dim: 2,
        }
    }

    fn solid(points: &[Vec3], seed: [usize; 4], eps: f64) -> Hull {
        let mut q = Quickhull::new(points, seed, eps);
        q.run();
        q.finish()
    }
}

fn bounds(points: &[Vec3]) -> (Vec3, Vec3) {
    let mut lo = points[0];
    let mut hi = points[0];
    for p in points {
        for k in 0..3 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    (lo, hi)
}

fn argmax(points: &[Vec3], f: impl Fn(Vec3) -> f64) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, p) in points.iter().enumerate() {
        let v = f(*p);
        if v > best.1 {
            best = (i, v);
        }
    }
    best
}

/// The farthest pair among the axis-extreme points, if farther than `eps`.
fn farthest_pair(points: &[Vec3], eps: f64) -> Option<(usize, usize)> {
    let mut ext = Vec::with_capacity(6);
    for k in 0..3 {
        ext.push(argmax(points, |p| -p[k]).0);
        ext.push(argmax(points, |p| p[k]).0);
    }
    let mut best = (0, 0, 0.0);
    for &a in &ext {
        for &b in &ext {
            let d = dist(points[a], points[b]);
            if d > best.2 {
                best = (a, b, d);
            }
        }
    }
    (best.2 > eps).then_some((best.0, best.1))
}

fn orthonormal_pair(d: Vec3) -> (Vec3, Vec3) {
    let helper = if d[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let u = cross(d, helper);
    let u = scale(u, 1.0 / norm(u));
    (u, cross(d, u))
}

struct Face {
    v: [usize; 3],
    normal: Vec3,
    offset: f64,
    outside: Vec<usize>,
    alive: bool,
}

struct Quickhull<'a> {
    pts: &'a [Vec3],
    eps: f64,
    faces: Vec<Face>,
    /// Directed edge `a -> b` to the face that has it counterclockwise.
    edges: HashMap<(usize, usize), usize>,
}

impl<'a> Quickhull<'a> {
    fn new(pts: &'a [Vec3], seed: [usize; 4], eps: f64) -> Self {
        let mut q = Quickhull { pts, eps, faces: Vec::new(), edges: HashMap::new() };
        let centroid = scale(
            seed.iter().fold([0.0; 3], |acc, &i| [acc[0] + pts[i][0], acc[1] + pts[i][1], acc[2] + pts[i][2]]),
            0.25,
        );
        let [a, b, c, d] = seed;
        for tri in [[a, b, c], [a, b, d], [a, c, d], [b, c, d]] {
            let [x, mut y, mut z] = tri;
            let n = cross(sub(pts[y], pts[x]), sub(pts[z], pts[x]));
            if dot(n, sub(centroid, pts[x])) > 0.0 {
                std::mem::swap(&mut y, &mut z);
            }
            q.add_face([x, y, z]);
        }
        let all: Vec<usize> = (0..pts.len()).filter(|i| !seed.contains(i)).collect();
        let new_faces: Vec<usize> = (0..4).collect();
        q.assign(&all, &new_faces);
        q
    }

    fn add_face(&mut self, v: [usize; 3]) -> usize {
        let p = self.pts;
        let n = cross(sub(p[v[1]], p[v[0]]), sub(p[v[2]], p[v[0]]));
        let l = norm(n);
        let normal = if l > 0.0 { scale(n, 1.0 / l) } else { n };
        let id = self.faces.len();
        self.faces.push(Face { v, normal, offset: dot(normal, p[v[0]]), outside: Vec::new(), alive: true });
        for k in 0..3 {
            self.edges.insert((v[k], v[(k + 1) % 3]), id);
        }
        id
    }

    fn height(&self, f: usize, i: usize) -> f64 {
        dot(self.faces[f].normal, self.pts[i]) - self.faces[f].offset
    }

    fn assign(&mut self, candidates: &[usize], faces: &[usize]) {
        for &i in candidates {
            let mut best = None;
            let mut best_h = self.eps;
            for &f in faces {
                let h = self.height(f, i);
                if h > best_h {
                    best_h = h;
                    best = Some(f);
                }
            }
            if let Some(f) = best {
                self.faces[f].outside.push(i);
            }
        }
    }

    fn run(&mut self) {
        let mut cursor = 0;
        while cursor < self.faces.len() {
            if !self.faces[cursor].alive || self.faces[cursor].outside.is_empty() {
                cursor += 1;
                continue;
            }
            let f0 = cursor;
            let apex = *self.faces[f0]
                .outside
                .iter()
                .max_by(|&&a, &&b| self.height(f0, a).total_cmp(&self.height(f0, b)))
                .expect("nonempty outside set");
            self.add_point(f0, apex);
        }
    }

    fn add_point(&mut self, f0: usize, apex: usize) {
        // Faces visible from the apex form a connected patch around f0.
        let mut visible = vec![f0];
        let mut is_visible: HashMap<usize, bool> = HashMap::from([(f0, true)]);
        let mut k = 0;
        while k < visible.len() {
            let f = visible[k];
            k += 1;
            let v = self.faces[f].v;
            for e in 0..3 {
                let (a, b) = (v[e], v[(e + 1) % 3]);
                let g = self.edges[&(b, a)];
                if is_visible.contains_key(&g) {
                    continue;
                }
                let vis = self.height(g, apex) > self.eps;
                is_visible.insert(g, vis);
                if vis {
                    visible.push(g);
                }
            }
        }
        let mut horizon = Vec::new();
        let mut orphans = Vec::new();
        for &f in &visible {
            let v = self.faces[f].v;
            for e in 0..3 {
                let (a, b) = (v[e], v[(e + 1) % 3]);
                let g = self.edges[&(b, a)];
                if !is_visible[&g] {
                    horizon.push((a, b));
                }
            }
            orphans.append(&mut self.faces[f].outside);
            self.faces[f].alive = false;
        }
        for &f in &visible {
            let v = self.faces[f].v;
            for e in 0..3 {
                let key = (v[e], v[(e + 1) % 3]);
                if self.edges.get(&key) == Some(&f) {
                    self.edges.remove(&key);
                }
            }
        }
        let new_faces: Vec<usize> = horizon.iter().map(|&(a, b)| self.add_face([a, b, apex])).collect();
        orphans.retain(|&i| i != apex);
        self.assign(&orphans, &new_faces);
    }

    fn finish(self) -> Hull {
        let alive: Vec<&Face> = self.faces.iter().filter(|f| f.alive).collect();
        let mut incident: HashMap<usize, Vec3> = HashMap::new();
        for f in &alive {
            for &v in &f.v {
                let c = incident.entry(v).or_insert([0.0; 3]);
                *c = [c[0] + f.normal[0], c[1] + f.normal[1], c[2] + f.normal[2]];
            }
        }
        let mut ids: Vec<usize> = incident.keys().copied().collect();
        ids.sort_unstable();
        // A hull vertex is extreme iff the averaged normal of its incident
        // faces strictly separates it from every other hull vertex.
        let extreme: Vec<Vec3> = ids
            .iter()
            .filter(|&&v| {
                let c = incident[&v];
                let l = norm(c);
                if l <= 1e-12 {
                    return true;
                }
                let c = scale(c, 1.0 / l);
                ids.iter()
                    .all(|&w| w == v || dot(c, sub(self.pts[w], self.pts[v])) < -self.eps)
            })
            .map(|&v| self.pts[v])
            .collect();
        let halfspaces = alive
            .iter()
            .filter(|f| norm(f.normal) > 0.0)
            .map(|f| HalfSpace3 { normal: f.normal, offset: f.offset })
            .collect();
        Hull {
            vertices: VertexSet::from_points(extreme, Tolerances::default().dedup),
            halfspaces,
            dim: 3,
        }
    }
}
