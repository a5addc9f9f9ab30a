//! The revolution surface `Z(φ, x) = (ρ(x) cos φ, ρ(x) sin φ, x)`: a
//! triangle mesh for export and area checks, and the Gaussian and mean
//! curvatures along the profile.
//!
//! Curvature signs are taken with respect to the outward normal (pointing
//! away from the axis). A surface bending away from that normal has
//! negative normal curvature, so a cylinder of radius `r` has
//! `H = −1/(2r)` and a sphere of radius `R` has `H = −1/R`, `K = 1/R²`.
//! With this convention
//!
//! ```text
//! K = −ρ'' / (ρ (1+ρ'²)²)
//! H = (ρρ'' − (1+ρ'²)) / (2ρ (1+ρ'²)^{3/2})
//! ```

use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::sig;
use crate::profile::ProfileCurve;

pub const MIN_AZIMUTHAL: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct RevolutionMesh {
    /// Axial-major: vertex `i * n_azimuthal + j` sits at `(x_i, φ_j)`.
    pub vertices: Vec<[f64; 3]>,
    /// Zero-based vertex indices, counter-clockwise seen from outside.
    pub faces: Vec<[usize; 3]>,
    pub n_azimuthal: usize,
    pub n_axial: usize,
}

pub fn build_mesh(p: &ProfileCurve, n_azimuthal: usize) -> Result<RevolutionMesh> {
    if n_azimuthal < MIN_AZIMUTHAL {
        return Err(Error::Resolution {
            needed: MIN_AZIMUTHAL,
            got: n_azimuthal,
        });
    }
    let grid = p.grid();
    let n_axial = grid.n_nodes();
    let trig: Vec<(f64, f64)> = (0..n_azimuthal)
        .map(|j| (2.0 * PI * j as f64 / n_azimuthal as f64).sin_cos())
        .collect();
    let mut vertices = Vec::with_capacity(n_axial * n_azimuthal);
    for (x, &rho) in grid.nodes().zip(p.values()) {
        for &(s, c) in &trig {
            vertices.push([rho * c, rho * s, x]);
        }
    }
    let idx = |i: usize, j: usize| i * n_azimuthal + j % n_azimuthal;
    let mut faces = Vec::with_capacity(2 * (n_axial - 1) * n_azimuthal);
    for i in 0..n_axial - 1 {
        for j in 0..n_azimuthal {
            let (a, b, c, d) = (idx(i, j), idx(i, j + 1), idx(i + 1, j + 1), idx(i + 1, j));
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    Ok(RevolutionMesh {
        vertices,
        faces,
        n_azimuthal,
        n_axial,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeshArea {
    pub area: f64,
    /// Faces with (numerically) zero area, left out of the sum.
    pub degenerate: usize,
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: [f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

/// Sum of triangle areas.
pub fn mesh_area(m: &RevolutionMesh) -> MeshArea {
    let mut area = 0.0;
    let mut degenerate = 0;
    for f in &m.faces {
        let [a, b, c] = f.map(|i| m.vertices[i]);
        let (u, v) = (sub(b, a), sub(c, a));
        let t = 0.5 * norm(cross(u, v));
        let scale = norm(u).max(norm(v));
        if !t.is_finite() || t <= 1e-14 * scale * scale {
            degenerate += 1;
        } else {
            area += t;
        }
    }
    MeshArea { area, degenerate }
}

/// Wavefront OBJ: `v x y z` records then `f i j k` with 1-based indices.
pub fn write_obj<W: Write>(m: &RevolutionMesh, mut w: W) -> Result<()> {
    for v in &m.vertices {
        writeln!(w, "v {} {} {}", sig(v[0]), sig(v[1]), sig(v[2]))?;
    }
    for f in &m.faces {
        writeln!(w, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureField {
    pub x: Vec<f64>,
    pub gaussian: Vec<f64>,
    pub mean: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureSummary {
    pub max_abs_mean: f64,
    pub gaussian_mean: f64,
    pub gaussian_std: f64,
    /// `std(K) / |mean(K)|`
    pub gaussian_spread: f64,
}

impl CurvatureField {
    pub fn summary(&self) -> CurvatureSummary {
        let n = self.gaussian.len() as f64;
        let mean = self.gaussian.iter().sum::<f64>() / n;
        let var = self.gaussian.iter().map(|k| (k - mean) * (k - mean)).sum::<f64>() / n;
        let std = var.sqrt();
        CurvatureSummary {
            max_abs_mean: self.mean.iter().fold(0.0, |m, h| m.max(h.abs())),
            gaussian_mean: mean,
            gaussian_std: std,
            gaussian_spread: std / mean.abs(),
        }
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x,K,H")?;
        for i in 0..self.x.len() {
            writeln!(w, "{},{},{}", sig(self.x[i]), sig(self.gaussian[i]), sig(self.mean[i]))?;
        }
        Ok(())
    }
}

/// `K` and `H` at every node from finite differences of the profile:
/// central in the interior, second-order one-sided at the ends.
pub fn curvatures(p: &ProfileCurve) -> Result<CurvatureField> {
    let v = p.values();
    let n = v.len();
    if n < 5 {
        return Err(Error::Resolution { needed: 5, got: n });
    }
    let grid = p.grid();
    let dx = grid.dx();
    let derivs = |i: usize| -> (f64, f64) {
        if i == 0 {
            (
                (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dx),
                (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / (dx * dx),
            )
        } else if i == n - 1 {
            (
                (3.0 * v[i] - 4.0 * v[i - 1] + v[i - 2]) / (2.0 * dx),
                (2.0 * v[i] - 5.0 * v[i - 1] + 4.0 * v[i - 2] - v[i - 3]) / (dx * dx),
            )
        } else {
            (
                (v[i + 1] - v[i - 1]) / (2.0 * dx),
                (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (dx * dx),
            )
        }
    };
    let mut field = CurvatureField {
        x: Vec::with_capacity(n),
        gaussian: Vec::with_capacity(n),
        mean: Vec::with_capacity(n),
    };
    for (i, &rho) in v.iter().enumerate() {
        let (d1, d2) = derivs(i);
        let q2 = 1.0 + d1 * d1;
        field.x.push(grid.x(i));
        field.gaussian.push(-d2 / (rho * q2 * q2));
        field.mean.push((rho * d2 - q2) / (2.0 * rho * q2 * q2.sqrt()));
    }
    Ok(field)
}
