//! Helpers shared by the integration tests.
#![allow(dead_code)]

use bcconf::{AuxJoint, ChannelLaw};
use rand::Rng;

pub type V3 = [f64; 3];

pub fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: V3, b: V3) -> V3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn lerp(p: V3, q: V3, t: f64) -> V3 {
    [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]), p[2] + t * (q[2] - p[2])]
}

pub fn dist(a: V3, b: V3) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

fn push_unique(v: &mut Vec<V3>, p: V3, tol: f64) {
    if !v.iter().any(|q| dist(*q, p) < tol) {
        v.push(p);
    }
}

/// Vertices of `{x : n.x <= b}` by clipping the cube `[-half, half]^3`
/// face by face. `None` when the result touches the cube (unbounded input)
/// or is empty.
pub fn clip_vertices(rows: &[(V3, f64)], half: f64) -> Option<Vec<V3>> {
    let c = |i: usize| if i == 0 { -half } else { half };
    let corner = |a: usize, b: usize, d: usize| [c(a), c(b), c(d)];
    let mut faces: Vec<Vec<V3>> = vec![
        vec![corner(0, 0, 0), corner(0, 1, 0), corner(0, 1, 1), corner(0, 0, 1)],
        vec![corner(1, 0, 0), corner(1, 0, 1), corner(1, 1, 1), corner(1, 1, 0)],
        vec![corner(0, 0, 0), corner(0, 0, 1), corner(1, 0, 1), corner(1, 0, 0)],
        vec![corner(0, 1, 0), corner(1, 1, 0), corner(1, 1, 1), corner(0, 1, 1)],
        vec![corner(0, 0, 0), corner(1, 0, 0), corner(1, 1, 0), corner(0, 1, 0)],
        vec![corner(0, 0, 1), corner(0, 1, 1), corner(1, 1, 1), corner(1, 0, 1)],
    ];
    for &(n, b) in rows {
        let mut cap = Vec::new();
        let mut next = Vec::new();
        for f in &faces {
            let mut out = Vec::new();
            for i in 0..f.len() {
                let (p, q) = (f[i], f[(i + 1) % f.len()]);
                let (dp, dq) = (dot(n, p) - b, dot(n, q) - b);
                if dp <= 0.0 {
                    out.push(p);
                    if dp.abs() < 1e-12 {
                        push_unique(&mut cap, p, 1e-12);
                    }
                }
                if (dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0) {
                    let x = lerp(p, q, dp / (dp - dq));
                    out.push(x);
                    push_unique(&mut cap, x, 1e-12);
                }
            }
            if out.len() >= 3 {
                next.push(out);
            }
        }
        if cap.len() >= 3 {
            let k = cap.len() as f64;
            let m = cap.iter().fold([0.0; 3], |a, p| [a[0] + p[0] / k, a[1] + p[1] / k, a[2] + p[2] / k]);
            let e1 = {
                let seed = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
                let t = cross(n, seed);
                let l = dot(t, t).sqrt();
                [t[0] / l, t[1] / l, t[2] / l]
            };
            let e2 = cross(n, e1);
            cap.sort_by(|p, q| {
                let a = |r: &V3| {
                    let d = [r[0] - m[0], r[1] - m[1], r[2] - m[2]];
                    dot(d, e2).atan2(dot(d, e1))
                };
                a(p).total_cmp(&a(q))
            });
            next.push(cap);
        }
        faces = next;
        if faces.is_empty() {
            return None;
        }
    }
    let mut verts = Vec::new();
    for f in &faces {
        for &p in f {
            push_unique(&mut verts, p, 1e-9);
        }
    }
    if verts.iter().any(|p| p.iter().any(|x| x.abs() > half * (1.0 - 1e-9))) {
        return None;
    }
    Some(verts)
}

/// Random bounded polytope with the origin inside and at most `max_rows` rows.
pub fn random_bounded<R: Rng>(rng: &mut R, max_rows: usize) -> (Vec<(V3, f64)>, Vec<V3>) {
    loop {
        let k = rng.random_range(4..=max_rows);
        let rows: Vec<(V3, f64)> = (0..k)
            .map(|_| {
                let n: V3 = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
                (n, rng.random_range(0.2..1.0))
            })
            .filter(|(n, _)| dot(*n, *n) > 1e-2)
            .collect();
        if let Some(v) = clip_vertices(&rows, 100.0) {
            return (rows, v);
        }
    }
}

pub fn random_pair<R: Rng>(rng: &mut R, max_card: usize) -> (AuxJoint, ChannelLaw) {
    let mut s = || rng.random_range(1..=max_card);
    let (u, v, x, y1, y2) = (s(), s(), s(), s(), s());
    let aux = AuxJoint::random_dirichlet(rng, u, v, x);
    let ch = ChannelLaw::random(rng, x, y1, y2);
    (aux, ch)
}

/// `U`, `V` uniform bits and `X = (U, V, W)` with `W` a third uniform bit.
pub fn layered_uniform() -> AuxJoint {
    AuxJoint::from_fn(2, 2, 8, |u, v, x| if x >> 1 == 2 * u + v { 0.125 } else { 0.0 }).unwrap()
}

/// `U` uniform, `V = U + Bern(a)`, `X = V + Bern(b)` (mod 2).
pub fn binary_superposition(a: f64, b: f64) -> AuxJoint {
    AuxJoint::from_fn(2, 2, 2, |u, v, x| {
        0.5 * if v == u { 1.0 - a } else { a } * if x == v { 1.0 - b } else { b }
    })
    .unwrap()
}

pub fn repo_data(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}
