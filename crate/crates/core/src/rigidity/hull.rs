use std::cmp::Ordering;
use std::collections::HashMap;

use super::group::FuchsianGroup;
use super::orbit::{hyperboloid_distance, orbit};
use super::predicates::orient3d;
use crate::error::{Error, Result};
use crate::minkowski::{klein_project, MinkVector};

/// Convex hull of an orbit sample. Faces are index triples into `points`,
/// counter-clockwise seen from outside.
#[derive(Clone, Debug)]
pub struct OrbitHull {
    pub base: MinkVector,
    pub base_index: usize,
    pub points: Vec<MinkVector>,
    pub hull_vertices: Vec<usize>,
    pub hull_faces: Vec<[usize; 3]>,
}

/// Outward plane `n·x ≤ d` of a face (unnormalized).
fn plane(p: &[MinkVector], f: [usize; 3]) -> (MinkVector, f64) {
    let (a, b, c) = (p[f[0]], p[f[1]], p[f[2]]);
    let n = (b - a).cross(c - a);
    (n, n.euclid_dot(a))
}

fn orient(p: &[MinkVector], f: [usize; 3], q: MinkVector) -> Ordering {
    orient3d(p[f[0]].to_array(), p[f[1]].to_array(), p[f[2]].to_array(), q.to_array())
}

/// Incremental hull with exact orientation tests. The first point is
/// recorded as the base point.
pub fn convex_hull3(points: &[MinkVector]) -> Result<OrbitHull> {
    let degenerate = || Error::DegenerateInput("hull needs four affinely independent points".into());
    let pts = points.to_vec();
    if pts.len() < 4 {
        return Err(degenerate());
    }
    let i0 = 0;
    let i1 = (1..pts.len())
        .max_by(|&a, &b| (pts[a] - pts[i0]).euclid_norm().total_cmp(&(pts[b] - pts[i0]).euclid_norm()))
        .filter(|&i| pts[i] != pts[i0])
        .ok_or_else(degenerate)?;
    let area = |k: usize| (pts[i1] - pts[i0]).cross(pts[k] - pts[i0]).euclid_norm();
    let i2 = (0..pts.len()).max_by(|&a, &b| area(a).total_cmp(&area(b))).filter(|&k| area(k) > 0.0).ok_or_else(degenerate)?;
    let volume = |k: usize| (pts[i1] - pts[i0]).cross(pts[i2] - pts[i0]).euclid_dot(pts[k] - pts[i0]).abs();
    let i3 = (0..pts.len())
        .filter(|&k| orient(&pts, [i0, i1, i2], pts[k]) != Ordering::Equal)
        .max_by(|&a, &b| volume(a).total_cmp(&volume(b)))
        .ok_or_else(degenerate)?;

    let mut faces: Vec<[usize; 3]> = Vec::new();
    let mut alive: Vec<usize> = Vec::new();
    let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
    let add = |f: [usize; 3], faces: &mut Vec<[usize; 3]>, alive: &mut Vec<usize>, edges: &mut HashMap<_, _>| {
        let id = faces.len();
        faces.push(f);
        alive.push(id);
        for k in 0..3 {
            edges.insert((f[k], f[(k + 1) % 3]), id);
        }
    };
    let tetra = [i0, i1, i2, i3];
    for skip in 0..4 {
        let mut f = [0; 3];
        let mut m = 0;
        for (k, &v) in tetra.iter().enumerate() {
            if k != skip {
                f[m] = v;
                m += 1;
            }
        }
        // the opposite vertex must lie on the inner side
        if orient(&pts, f, pts[tetra[skip]]) == Ordering::Greater {
            f.swap(0, 1);
        }
        add(f, &mut faces, &mut alive, &mut edges);
    }

    let mut dead = vec![false; 4];
    for (k, &q) in pts.iter().enumerate() {
        if tetra.contains(&k) {
            continue;
        }
        let visible: Vec<usize> = alive.iter().copied().filter(|&id| orient(&pts, faces[id], q) == Ordering::Greater).collect();
        if visible.is_empty() {
            continue;
        }
        for &id in &visible {
            dead[id] = true;
        }
        let mut horizon = Vec::new();
        for &id in &visible {
            let f = faces[id];
            for e in 0..3 {
                let (u, v) = (f[e], f[(e + 1) % 3]);
                let twin = edges[&(v, u)];
                if !dead[twin] {
                    horizon.push((u, v));
                }
            }
        }
        for &id in &visible {
            let f = faces[id];
            for e in 0..3 {
                edges.remove(&(f[e], f[(e + 1) % 3]));
            }
        }
        alive.retain(|&id| !dead[id]);
        for (u, v) in horizon {
            add([u, v, k], &mut faces, &mut alive, &mut edges);
            dead.push(false);
        }
    }

    let hull_faces: Vec<[usize; 3]> = alive.iter().map(|&id| faces[id]).collect();
    let mut hull_vertices: Vec<usize> = hull_faces.iter().flatten().copied().collect();
    hull_vertices.sort_unstable();
    hull_vertices.dedup();
    Ok(OrbitHull { base: pts[0], base_index: 0, points: pts, hull_vertices, hull_faces })
}

impl OrbitHull {
    /// Hull of the orbit points within hyperbolic distance `radius` of `p`
    /// (all of them for `None`).
    pub fn from_orbit(group: &FuchsianGroup, p: MinkVector, word_len: usize, radius: Option<f64>) -> Result<Self> {
        let mut pts = orbit(group, p, word_len)?;
        if let Some(r) = radius {
            pts.retain(|&q| hyperboloid_distance(p, q) <= r);
        }
        convex_hull3(&pts)
    }

    /// Largest positive signed distance of any point beyond any face plane.
    pub fn max_outside_distance(&self, points: &[MinkVector]) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for &f in &self.hull_faces {
            let (n, d) = plane(&self.points, f);
            let len = n.euclid_norm();
            for q in points {
                worst = worst.max((n.euclid_dot(*q) - d) / len);
            }
        }
        worst
    }

    /// Faces seen from the origin: the boundary part facing the cone's apex.
    pub fn lower_faces(&self) -> Vec<[usize; 3]> {
        let origin = MinkVector::default();
        self.hull_faces.iter().copied().filter(|&f| orient(&self.points, f, origin) == Ordering::Greater).collect()
    }

    /// Lower facets through the base point, as sorted vertex lists;
    /// coplanar triangles (within `tol` relative to the coordinate scale)
    /// are merged into one polygon.
    pub fn base_facets(&self, tol: f64) -> Vec<Vec<usize>> {
        let lower = self.lower_faces();
        let mut facets: Vec<Vec<usize>> = Vec::new();
        for &f in lower.iter().filter(|f| f.contains(&self.base_index)) {
            let (n, d) = plane(&self.points, f);
            let n_len = n.euclid_norm();
            let on_plane = |v: usize| {
                let q = self.points[v];
                (n.euclid_dot(q) - d).abs() <= tol * n_len * q.euclid_norm().max(1.0)
            };
            let mut verts: Vec<usize> =
                lower.iter().filter(|g| g.iter().all(|&v| on_plane(v))).flatten().copied().collect();
            verts.sort_unstable();
            verts.dedup();
            if !facets.contains(&verts) {
                facets.push(verts);
            }
        }
        facets
    }

    /// First point where the ray `t·(qx, qy, 1)`, `t > 0`, meets the hull.
    pub fn ray_boundary_point(&self, q: (f64, f64)) -> Result<MinkVector> {
        let dir = MinkVector::new(q.0, q.1, 1.0);
        let miss = Error::RayMissesHull { qx: q.0, qy: q.1 };
        let (mut enter, mut leave) = (0.0f64, f64::INFINITY);
        for &f in &self.hull_faces {
            let (n, d) = plane(&self.points, f);
            let speed = n.euclid_dot(dir);
            if speed > 0.0 {
                leave = leave.min(d / speed);
            } else if speed < 0.0 {
                enter = enter.max(d / speed);
            } else if d < 0.0 {
                return Err(miss);
            }
        }
        if enter > leave * (1.0 + 1e-12) || enter <= 0.0 {
            return Err(miss);
        }
        Ok(dir * enter)
    }
}

/// [`OrbitHull::ray_boundary_point`].
pub fn ray_boundary_point(hull: &OrbitHull, q: (f64, f64)) -> Result<MinkVector> {
    hull.ray_boundary_point(q)
}

/// Klein coordinates of the base point (for ray casting back to it).
pub fn base_klein(hull: &OrbitHull) -> (f64, f64) {
    klein_project(hull.base).expect("orbit points are future timelike")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(x: f64, y: f64, z: f64) -> MinkVector {
        MinkVector::new(x, y, z)
    }

    #[test]
    fn tetrahedron() {
        let pts = [v(0.0, 0.0, 0.0), v(1.0, 0.0, 0.0), v(0.0, 1.0, 0.0), v(0.0, 0.0, 1.0)];
        let h = convex_hull3(&pts).unwrap();
        assert_eq!(h.hull_faces.len(), 4);
        assert_eq!(h.hull_vertices, vec![0, 1, 2, 3]);
        assert!(h.max_outside_distance(&pts) <= 1e-15);
    }

    #[test]
    fn cube_with_interior_and_face_points() {
        let mut pts = vec![v(0.5, 0.5, 0.5)];
        for k in 0..8 {
            pts.push(v((k & 1) as f64, ((k >> 1) & 1) as f64, ((k >> 2) & 1) as f64));
        }
        let h = convex_hull3(&pts).unwrap();
        assert_eq!(h.hull_vertices, (1..9).collect::<Vec<_>>());
        assert_eq!(h.hull_faces.len(), 12);
        // points on faces are inside or on the hull
        let on_faces = [v(0.5, 0.5, 0.0), v(0.25, 0.0, 0.75), v(1.0, 1.0, 0.5)];
        assert!(h.max_outside_distance(&on_faces).abs() <= 1e-15);
        assert!(h.max_outside_distance(&pts) <= 1e-15);
    }

    #[test]
    fn degenerate_inputs() {
        let flat = [v(0.0, 0.0, 0.0), v(1.0, 0.0, 0.0), v(0.0, 1.0, 0.0), v(1.0, 1.0, 0.0)];
        assert!(matches!(convex_hull3(&flat), Err(Error::DegenerateInput(_))));
        assert!(convex_hull3(&flat[..3]).is_err());
        let same = [v(1.0, 2.0, 3.0); 5];
        assert!(convex_hull3(&same).is_err());
    }

    #[test]
    fn random_cloud_hull_is_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let pts: Vec<MinkVector> =
            (0..300).map(|_| v(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let h = convex_hull3(&pts).unwrap();
        assert!(h.max_outside_distance(&pts) <= 1e-12);
        let again = convex_hull3(&h.hull_vertices.iter().map(|&i| pts[i]).collect::<Vec<_>>()).unwrap();
        assert_eq!(again.hull_vertices.len(), h.hull_vertices.len());
        // Euler: closed triangulated sphere
        assert_eq!(h.hull_faces.len(), 2 * h.hull_vertices.len() - 4);
    }

    #[test]
    fn rays_through_a_hyperboloid_sample() {
        // points on the unit hyperboloid around the apex
        let mut pts = vec![MinkVector::APEX];
        for k in 0..12 {
            let (s, c) = (k as f64 * std::f64::consts::TAU / 12.0).sin_cos();
            for &t in &[0.8f64, 1.6] {
                pts.push(v(t.sinh() * c, t.sinh() * s, t.cosh()));
            }
        }
        let h = convex_hull3(&pts).unwrap();
        let p = h.ray_boundary_point(base_klein(&h)).unwrap();
        assert!((p - MinkVector::APEX).euclid_norm() < 1e-12);
        let hit = h.ray_boundary_point((0.3, -0.2)).unwrap();
        let (kx, ky) = klein_project(hit).unwrap();
        assert!((kx - 0.3).abs() < 1e-12 && (ky + 0.2).abs() < 1e-12);
        assert!(matches!(h.ray_boundary_point((0.99, 0.0)), Err(Error::RayMissesHull { .. })));
        assert_eq!(h.lower_faces().len(), h.hull_faces.len() - 10);
    }
}
