//! Triangulated grid export: OBJ positions plus a per-vertex CSV of
//! curvatures.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detector::{GridSpec, Rejection};
use crate::error::{Error, Result};
use crate::geometry::{curvatures, fundamental_forms_with, GeometryConfig};
use crate::lorentz::Vec3M;
use crate::surfaces::{ChartPoint, SurfaceFamily};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshVertex {
    pub point: ChartPoint,
    pub position: Vec3M,
    pub k: f64,
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub grid: GridSpec,
    pub vertices: Vec<MeshVertex>,
    /// Zero-based vertex indices.
    pub faces: Vec<[usize; 3]>,
    pub holes: Vec<Rejection>,
}

/// Summary of holes for reports: individual nodes plus any `s`-columns
/// that were excluded entirely.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoleReport {
    pub vertices: usize,
    pub faces: usize,
    pub holes: Vec<Rejection>,
    pub excluded_columns: Vec<ExcludedColumn>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcludedColumn {
    pub s: f64,
    pub reason: String,
}

fn vertex(fam: &SurfaceFamily, p: ChartPoint) -> Result<MeshVertex> {
    let sj = fam.eval(p)?;
    let cfg = GeometryConfig { orientation: fam.normal_orientation(), ..GeometryConfig::default() };
    let fc = fundamental_forms_with(&sj, &cfg)?;
    let state = fam.chart_state(p)?;
    let c = curvatures(&fc, Some(&state))?;
    Ok(MeshVertex { point: p, position: sj.position(), k: c.k, h: c.h })
}

/// Evaluates the grid; nodes on excluded loci become holes and every cell
/// with four valid corners yields two triangles.
pub fn build_mesh(fam: &SurfaceFamily, grid: &GridSpec) -> Result<Mesh> {
    if grid.ns < 2 || grid.nt < 2 {
        return Err(Error::InvalidParameter("mesh grid must be at least 2x2".into()));
    }
    let evaluated: Vec<Result<std::result::Result<MeshVertex, Rejection>>> = grid
        .nodes()
        .into_par_iter()
        .map(|p| match vertex(fam, p) {
            Ok(v) => Ok(Ok(v)),
            Err(e) if e.is_point_local() => Ok(Err(Rejection { s: p.s, theta: p.theta, reason: e.to_string() })),
            Err(e) => Err(e),
        })
        .collect();
    let mut index = vec![None; grid.len()];
    let mut vertices = Vec::new();
    let mut holes = Vec::new();
    for (node, r) in evaluated.into_iter().enumerate() {
        match r? {
            Ok(v) => {
                index[node] = Some(vertices.len());
                vertices.push(v);
            }
            Err(h) => holes.push(h),
        }
    }
    let at = |i: usize, j: usize| index[i * grid.nt + j];
    let mut faces = Vec::new();
    for i in 0..grid.ns - 1 {
        for j in 0..grid.nt - 1 {
            if let (Some(a), Some(b), Some(c), Some(d)) = (at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)) {
                faces.push([a, b, c]);
                faces.push([a, c, d]);
            }
        }
    }
    Ok(Mesh { grid: *grid, vertices, faces, holes })
}

impl Mesh {
    pub fn write_obj<W: Write>(&self, mut w: W) -> Result<()> {
        for v in &self.vertices {
            writeln!(w, "v {:.16e} {:.16e} {:.16e}", v.position.x1, v.position.x2, v.position.x3)?;
        }
        for f in &self.faces {
            writeln!(w, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "s,theta,x1,x2,x3,K,H")?;
        for v in &self.vertices {
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                v.point.s, v.point.theta, v.position.x1, v.position.x2, v.position.x3, v.k, v.h
            )?;
        }
        Ok(())
    }

    pub fn hole_report(&self) -> HoleReport {
        let mut excluded_columns = Vec::new();
        for i in 0..self.grid.ns {
            let s = self.grid.s_at(i);
            let in_column: Vec<&Rejection> = self.holes.iter().filter(|h| h.s == s).collect();
            if in_column.len() == self.grid.nt {
                excluded_columns.push(ExcludedColumn { s, reason: in_column[0].reason.clone() });
            }
        }
        HoleReport { vertices: self.vertices.len(), faces: self.faces.len(), holes: self.holes.clone(), excluded_columns }
    }
}
