use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::ga::{Algebra, Multivector};
use crate::hamiltonian::SurfaceElement;
use crate::{Error, Result};

/// Discrete `D = 2` motion: a triangle mesh in configuration space with a
/// fixed set of boundary vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceMesh {
    dim: usize,
    coords: Vec<f64>,
    faces: Vec<[usize; 3]>,
    fixed: Vec<bool>,
}

/// Per-vertex discrete mean curvature `|∇_i A| / (2 A_i)` on free vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureResidual {
    /// One entry per vertex; fixed vertices hold 0.
    pub per_vertex: Vec<f64>,
    pub max: f64,
    pub rms: f64,
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn triangle_area(p0: &[f64], p1: &[f64], p2: &[f64]) -> f64 {
    let u = sub(p1, p0);
    let w = sub(p2, p0);
    let uu = dot(&u, &u);
    let ww = dot(&w, &w);
    let uw = dot(&u, &w);
    0.5 * libm::sqrt((uu * ww - uw * uw).max(0.0))
}

/// Adds `∂A/∂p0` of triangle `(p0, p1, p2)` with area `area` into `out`.
fn accumulate_corner_gradient(p0: &[f64], p1: &[f64], p2: &[f64], area: f64, out: &mut [f64]) {
    // ∂A/∂p0 = ½ Î·(p1 − p2) with Î = u∧w / |u∧w|
    let u = sub(p1, p0);
    let w = sub(p2, p0);
    let x = sub(p1, p2);
    let wx = dot(&w, &x);
    let ux = dot(&u, &x);
    let s = 1.0 / (4.0 * area);
    for k in 0..out.len() {
        out[k] += s * (u[k] * wx - w[k] * ux);
    }
}

impl SurfaceMesh {
    /// Mesh from vertex rows and faces. Without explicit `fixed` flags the
    /// vertices on boundary edges (edges with one incident face) are fixed.
    pub fn new(vertices: &[Vec<f64>], faces: Vec<[usize; 3]>, fixed: Option<Vec<bool>>) -> Result<Self> {
        let dim = vertices.first().map_or(0, Vec::len);
        if dim < 2 || dim > 8 {
            return Err(Error::DimensionOutOfRange(dim));
        }
        let mut coords = Vec::with_capacity(dim * vertices.len());
        for v in vertices {
            if v.len() != dim {
                return Err(Error::LengthMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite("mesh vertex"));
            }
            coords.extend_from_slice(v);
        }
        let n = vertices.len();
        if faces.iter().flatten().any(|&i| i >= n) {
            return Err(Error::Invalid("face index out of range"));
        }
        let mut mesh = Self {
            dim,
            coords,
            faces,
            fixed: vec![false; n],
        };
        mesh.fixed = match fixed {
            Some(f) if f.len() != n => {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: f.len(),
                })
            }
            Some(f) => f,
            None => mesh.boundary_vertices(),
        };
        Ok(mesh)
    }

    /// Grid patch over `[0,1]²` with `nu × nv` cells mapped by `f`; the
    /// border is fixed. Quads are split along alternating diagonals.
    pub fn grid_patch(nu: usize, nv: usize, f: impl Fn(f64, f64) -> Vec<f64>) -> Result<Self> {
        if nu == 0 || nv == 0 {
            return Err(Error::Invalid("grid patch needs at least one cell per side"));
        }
        let idx = |i: usize, j: usize| j * (nu + 1) + i;
        let mut verts = Vec::with_capacity((nu + 1) * (nv + 1));
        let mut fixed = Vec::with_capacity((nu + 1) * (nv + 1));
        for j in 0..=nv {
            for i in 0..=nu {
                verts.push(f(i as f64 / nu as f64, j as f64 / nv as f64));
                fixed.push(i == 0 || j == 0 || i == nu || j == nv);
            }
        }
        let mut faces = Vec::with_capacity(2 * nu * nv);
        for j in 0..nv {
            for i in 0..nu {
                let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
                if (i + j) % 2 == 0 {
                    faces.push([a, b, c]);
                    faces.push([a, c, d]);
                } else {
                    faces.push([a, b, d]);
                    faces.push([b, c, d]);
                }
            }
        }
        Self::new(&verts, faces, Some(fixed))
    }

    /// Graph `x ↦ x + Σ_a g_a(x) e_a` over the unit square in `R^{2+N}`.
    pub fn graph(cells: usize, fields: usize, g: impl Fn(f64, f64) -> Vec<f64>) -> Result<Self> {
        Self::grid_patch(cells, cells, |x, y| {
            let mut v = vec![x, y];
            let vals = g(x, y);
            v.extend((0..fields).map(|a| vals.get(a).copied().unwrap_or(0.0)));
            v
        })
    }

    /// Bilinear patch spanned by corners `p00, p10, p11, p01`.
    pub fn bilinear_patch(corners: [&[f64]; 4], n: usize) -> Result<Self> {
        let [p00, p10, p11, p01] = corners;
        Self::grid_patch(n, n, |u, v| {
            (0..p00.len())
                .map(|k| {
                    (1.0 - u) * (1.0 - v) * p00[k] + u * (1.0 - v) * p10[k] + u * v * p11[k] + (1.0 - u) * v * p01[k]
                })
                .collect()
        })
    }

    /// Surface of revolution about `e3`: rings at heights `z_b` with radius
    /// `radius(z_b)`, both end rings fixed. Padded with zeros to `dim`.
    pub fn revolution(
        dim: usize,
        z0: f64,
        z1: f64,
        segments: usize,
        bands: usize,
        radius: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        if dim < 3 || segments < 3 || bands == 0 {
            return Err(Error::Invalid("surface of revolution needs dim >= 3, 3 segments, 1 band"));
        }
        let mut verts = Vec::with_capacity(segments * (bands + 1));
        let mut fixed = Vec::with_capacity(segments * (bands + 1));
        for b in 0..=bands {
            let z = z0 + (z1 - z0) * b as f64 / bands as f64;
            let r = radius(z);
            for s in 0..segments {
                let t = 2.0 * PI * s as f64 / segments as f64;
                let mut v = vec![0.0; dim];
                v[0] = r * libm::cos(t);
                v[1] = r * libm::sin(t);
                v[2] = z;
                verts.push(v);
                fixed.push(b == 0 || b == bands);
            }
        }
        let idx = |b: usize, s: usize| b * segments + s % segments;
        let mut faces = Vec::with_capacity(2 * segments * bands);
        for b in 0..bands {
            for s in 0..segments {
                let (p, q, r, t) = (idx(b, s), idx(b, s + 1), idx(b + 1, s + 1), idx(b + 1, s));
                if (b + s) % 2 == 0 {
                    faces.push([p, q, r]);
                    faces.push([p, r, t]);
                } else {
                    faces.push([p, q, t]);
                    faces.push([q, r, t]);
                }
            }
        }
        Self::new(&verts, faces, Some(fixed))
    }

    /// Cylinder spanning the catenoid boundary circles `r = cosh a` at
    /// `z = ±a`; the usual starting guess for relaxation.
    pub fn catenoid_initial(a: f64, segments: usize, bands: usize) -> Result<Self> {
        let r = libm::cosh(a);
        Self::revolution(3, -a, a, segments, bands, |_| r)
    }

    /// Vertices sampled on the catenoid `r = cosh z` itself.
    pub fn catenoid_exact(a: f64, segments: usize, bands: usize) -> Result<Self> {
        Self::revolution(3, -a, a, segments, bands, libm::cosh)
    }

    /// Disk triangulation with ring `k` holding `6k` vertices, mapped through
    /// `f(ρ, angle)` with `ρ ∈ [0, 1]`; the outer ring is fixed.
    pub fn disk(rings: usize, f: impl Fn(f64, f64) -> Vec<f64>) -> Result<Self> {
        if rings == 0 {
            return Err(Error::Invalid("disk needs at least one ring"));
        }
        let mut verts = vec![f(0.0, 0.0)];
        let mut fixed = vec![rings == 0];
        let mut ring_start = vec![0usize];
        for k in 1..=rings {
            ring_start.push(verts.len());
            let n = 6 * k;
            for j in 0..n {
                verts.push(f(k as f64 / rings as f64, 2.0 * PI * j as f64 / n as f64));
                fixed.push(k == rings);
            }
        }
        let mut faces = Vec::new();
        for k in 1..=rings {
            let n1 = 6 * k;
            let outer = |j: usize| ring_start[k] + j % n1;
            if k == 1 {
                for j in 0..n1 {
                    faces.push([0, outer(j), outer(j + 1)]);
                }
                continue;
            }
            let n0 = 6 * (k - 1);
            let inner = |i: usize| ring_start[k - 1] + i % n0;
            let (mut i, mut j) = (0, 0);
            while i < n0 || j < n1 {
                let next_inner = (i + 1) as f64 / n0 as f64;
                let next_outer = (j + 1) as f64 / n1 as f64;
                if j < n1 && (i == n0 || next_outer <= next_inner) {
                    faces.push([inner(i), outer(j), outer(j + 1)]);
                    j += 1;
                } else {
                    faces.push([inner(i), outer(j), inner(i + 1)]);
                    i += 1;
                }
            }
        }
        Self::new(&verts, faces, Some(fixed))
    }

    /// Flat disk of `radius` in the `e1 e2` plane of `R^dim`.
    pub fn flat_disk(dim: usize, radius: f64, rings: usize) -> Result<Self> {
        Self::disk(rings, |rho, t| {
            let mut v = vec![0.0; dim.max(2)];
            v[0] = radius * rho * libm::cos(t);
            v[1] = radius * rho * libm::sin(t);
            v
        })
    }

    /// Spherical cap of radius `r` around the north pole with polar
    /// half-angle `theta_max`, in `R³`.
    pub fn sphere_cap(r: f64, theta_max: f64, rings: usize) -> Result<Self> {
        Self::disk(rings, |rho, t| {
            let th = rho * theta_max;
            vec![r * libm::sin(th) * libm::cos(t), r * libm::sin(th) * libm::sin(t), r * libm::cos(th)]
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.fixed.len()
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn vertices(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn is_fixed(&self, i: usize) -> bool {
        self.fixed[i]
    }

    pub fn fixed_flags(&self) -> &[bool] {
        &self.fixed
    }

    pub fn free_count(&self) -> usize {
        self.fixed.iter().filter(|f| !**f).count()
    }

    pub(crate) fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub(crate) fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.coords
    }

    /// Vertices lying on edges with exactly one incident face.
    pub fn boundary_vertices(&self) -> Vec<bool> {
        let mut out = vec![false; self.vertex_count()];
        for ((a, b), n) in self.edge_counts() {
            if n == 1 {
                out[a] = true;
                out[b] = true;
            }
        }
        out
    }

    fn edge_counts(&self) -> BTreeMap<(usize, usize), usize> {
        let mut edges = BTreeMap::new();
        for f in &self.faces {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                *edges.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        edges
    }

    pub fn face_area(&self, f: usize) -> f64 {
        let [a, b, c] = self.faces[f];
        triangle_area(self.vertex(a), self.vertex(b), self.vertex(c))
    }

    pub fn total_area(&self) -> f64 {
        Self::area_of(self.dim, &self.coords, &self.faces)
    }

    pub(crate) fn area_of(dim: usize, coords: &[f64], faces: &[[usize; 3]]) -> f64 {
        let v = |i: usize| &coords[i * dim..(i + 1) * dim];
        faces.iter().map(|&[a, b, c]| triangle_area(v(a), v(b), v(c))).sum()
    }

    /// Smallest face area and the face attaining it.
    pub fn min_face_area(&self) -> (usize, f64) {
        (0..self.faces.len())
            .map(|f| (f, self.face_area(f)))
            .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
    }

    /// Longest edge, the mesh size `h`.
    pub fn max_edge_length(&self) -> f64 {
        self.edge_counts()
            .keys()
            .map(|&(a, b)| libm::sqrt(dot(&sub(self.vertex(a), self.vertex(b)), &sub(self.vertex(a), self.vertex(b)))))
            .fold(0.0, f64::max)
    }

    /// Vertex dual areas: a third of the incident face areas.
    pub fn dual_areas(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.vertex_count()];
        for f in 0..self.faces.len() {
            let a = self.face_area(f) / 3.0;
            for &v in &self.faces[f] {
                out[v] += a;
            }
        }
        out
    }

    /// Gradient of the total area with respect to every vertex, flattened;
    /// entries of fixed vertices are zeroed.
    pub fn area_gradient(&self) -> Result<Vec<f64>> {
        let mut g = vec![0.0; self.coords.len()];
        Self::gradient_into(self.dim, &self.coords, &self.faces, &self.fixed, &mut g)?;
        Ok(g)
    }

    pub(crate) fn gradient_into(
        dim: usize,
        coords: &[f64],
        faces: &[[usize; 3]],
        fixed: &[bool],
        g: &mut [f64],
    ) -> Result<()> {
        g.iter_mut().for_each(|x| *x = 0.0);
        let v = |i: usize| &coords[i * dim..(i + 1) * dim];
        for (fi, &[a, b, c]) in faces.iter().enumerate() {
            let area = triangle_area(v(a), v(b), v(c));
            if !(area > 0.0) {
                return Err(Error::DegenerateFace { face: fi, area });
            }
            for (p0, p1, p2) in [(a, b, c), (b, c, a), (c, a, b)] {
                if !fixed[p0] {
                    accumulate_corner_gradient(v(p0), v(p1), v(p2), area, &mut g[p0 * dim..(p0 + 1) * dim]);
                }
            }
        }
        Ok(())
    }

    /// Discrete mean curvature `|∇_i A| / (2 A_i)`, the magnitude of
    /// `(I_γ·∂_q)·I_γ` at each free vertex.
    pub fn mean_curvature_residual(&self) -> Result<CurvatureResidual> {
        let g = self.area_gradient()?;
        let dual = self.dual_areas();
        let mut per_vertex = vec![0.0; self.vertex_count()];
        let (mut max, mut sum_sq, mut n) = (0.0f64, 0.0, 0usize);
        for i in 0..self.vertex_count() {
            if self.fixed[i] {
                continue;
            }
            let gi = &g[i * self.dim..(i + 1) * self.dim];
            let r = libm::sqrt(dot(gi, gi)) / (2.0 * dual[i]);
            per_vertex[i] = r;
            max = max.max(r);
            sum_sq += r * r;
            n += 1;
        }
        let rms = if n > 0 { libm::sqrt(sum_sq / n as f64) } else { 0.0 };
        Ok(CurvatureResidual { per_vertex, max, rms })
    }

    pub fn vertex_vector(&self, alg: Algebra, i: usize) -> Multivector {
        Multivector::vector(alg, self.vertex(i)).expect("mesh dimension matches algebra")
    }

    /// `(b − a) ∧ (c − a)`, twice the oriented face element.
    fn face_wedge(&self, alg: Algebra, f: usize) -> Multivector {
        let [a, b, c] = self.faces[f];
        let pa = self.vertex_vector(alg, a);
        let u = &self.vertex_vector(alg, b) - &pa;
        let w = &self.vertex_vector(alg, c) - &pa;
        u.outer(&w)
    }

    /// Unit face pseudoscalar `I_γ`.
    pub fn face_pseudoscalar(&self, alg: Algebra, f: usize) -> Result<Multivector> {
        self.face_wedge(alg, f).normalized().ok_or(Error::DegenerateFace {
            face: f,
            area: self.face_area(f),
        })
    }

    pub fn face_centroid(&self, alg: Algebra, f: usize) -> Multivector {
        let [a, b, c] = self.faces[f];
        &(&self.vertex_vector(alg, a) + &(&self.vertex_vector(alg, b) + &self.vertex_vector(alg, c))) * (1.0 / 3.0)
    }

    /// Action elements `dΓ = area · I_γ` at face centroids.
    pub fn action_elements(&self, alg: Algebra) -> Vec<SurfaceElement> {
        (0..self.faces.len())
            .map(|f| SurfaceElement {
                midpoint: self.face_centroid(alg, f),
                d_gamma: &self.face_wedge(alg, f) * 0.5,
            })
            .collect()
    }

    /// On-shell string momenta `P = Λ reverse(I_γ)` and multipliers
    /// `λ = area / Λ` per face, so that `dΓ = λ reverse(P)`.
    pub fn string_momenta(&self, alg: Algebra, tension: f64) -> Result<(Vec<Multivector>, Vec<f64>)> {
        let mut ps = Vec::with_capacity(self.faces.len());
        let mut ls = Vec::with_capacity(self.faces.len());
        for f in 0..self.faces.len() {
            ps.push(&self.face_pseudoscalar(alg, f)?.reverse() * tension);
            ls.push(self.face_area(f) / tension);
        }
        Ok((ps, ls))
    }

    /// 1→4 subdivision. New vertices on boundary edges between fixed
    /// vertices are fixed and passed through `project`, if given.
    pub fn refine(&self, project: Option<&dyn Fn(&[f64]) -> Vec<f64>>) -> Self {
        let counts = self.edge_counts();
        let mut coords = self.coords.clone();
        let mut fixed = self.fixed.clone();
        let mut mids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let dim = self.dim;
        let mut midpoint = |a: usize, b: usize, coords: &mut Vec<f64>, fixed: &mut Vec<bool>| -> usize {
            let key = (a.min(b), a.max(b));
            if let Some(&m) = mids.get(&key) {
                return m;
            }
            let mut p: Vec<f64> = (0..dim)
                .map(|k| 0.5 * (coords[a * dim + k] + coords[b * dim + k]))
                .collect();
            let on_boundary = counts.get(&key) == Some(&1) && fixed[a] && fixed[b];
            if on_boundary {
                if let Some(f) = project {
                    p = f(&p);
                }
            }
            let idx = fixed.len();
            coords.extend_from_slice(&p[..dim]);
            fixed.push(on_boundary);
            mids.insert(key, idx);
            idx
        };
        let mut faces = Vec::with_capacity(4 * self.faces.len());
        for &[a, b, c] in &self.faces {
            let ab = midpoint(a, b, &mut coords, &mut fixed);
            let bc = midpoint(b, c, &mut coords, &mut fixed);
            let ca = midpoint(c, a, &mut coords, &mut fixed);
            faces.push([a, ab, ca]);
            faces.push([ab, b, bc]);
            faces.push([ca, bc, c]);
            faces.push([ab, bc, ca]);
        }
        Self { dim, coords, faces, fixed }
    }

    /// Replaces free vertex positions by `f(current)`; fixed vertices stay.
    pub fn map_free_vertices(&mut self, f: impl Fn(&[f64]) -> Vec<f64>) {
        for i in 0..self.vertex_count() {
            if !self.fixed[i] {
                let p = f(self.vertex(i));
                self.coords[i * self.dim..(i + 1) * self.dim].copy_from_slice(&p[..self.dim]);
            }
        }
    }
}

/// Closed-form catenoid area `2π ∫_{−a}^{a} cosh² z dz`.
pub fn catenoid_area(a: f64) -> f64 {
    2.0 * PI * (a + 0.5 * libm::sinh(2.0 * a))
}

/// Radial projection onto the circle of radius `r` about the `e3` axis,
/// keeping the height.
pub fn project_to_circle(r: f64) -> impl Fn(&[f64]) -> Vec<f64> {
    move |p: &[f64]| {
        let rho = libm::hypot(p[0], p[1]);
        let mut out = p.to_vec();
        if rho > 0.0 {
            out[0] *= r / rho;
            out[1] *= r / rho;
        }
        out
    }
}
