//! Static SVG overlay of vortices on the mesh outline.

use std::fmt::Write as _;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::geom::{self, Vec3};
use crate::mesh::SurfaceMesh;

const SIZE: f64 = 640.0;
const MARGIN: f64 = 40.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Marker {
    pub position: Vec3,
    pub hopf_index: u64,
    pub brouwer_degree: i8,
}

fn bad(msg: &str) -> Error {
    Error::Document(format!("report: {msg}"))
}

/// Vortex table of a census or check report.
pub fn vortex_markers(report: &Value) -> Result<Vec<Marker>> {
    let Some(list) = report.pointer("/census/vortices") else {
        return Err(bad("no census.vortices"));
    };
    let list = list.as_array().ok_or_else(|| bad("census.vortices is not an array"))?;
    list.iter()
        .map(|v| {
            let p = v["position"].as_array().filter(|p| p.len() == 3).ok_or_else(|| bad("vortex position"))?;
            let mut position = [0.0; 3];
            for (dst, src) in position.iter_mut().zip(p) {
                *dst = src.as_f64().ok_or_else(|| bad("vortex position"))?;
            }
            Ok(Marker {
                position,
                hopf_index: v["hopf_index"].as_u64().ok_or_else(|| bad("vortex hopf_index"))?,
                brouwer_degree: v["brouwer_degree"].as_i64().ok_or_else(|| bad("vortex brouwer_degree"))? as i8,
            })
        })
        .collect()
}

/// Boundary windings l per loop, if the report lists loops.
fn loop_windings(report: &Value) -> Vec<i64> {
    report["loops"].as_array().map(|a| a.iter().filter_map(|l| l["winding"].as_i64()).collect()).unwrap_or_default()
}

/// Planar meshes are drawn in (x, y); others by azimuthal equidistant
/// projection about +z.
fn projector(mesh: &SurfaceMesh) -> impl Fn(Vec3) -> [f64; 2] {
    let (mut lo, mut hi) = ([f64::INFINITY; 3], [f64::NEG_INFINITY; 3]);
    for p in mesh.positions() {
        for i in 0..3 {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    let planar = hi[2] - lo[2] <= 1e-9 * (hi[0] - lo[0]).max(hi[1] - lo[1]).max(f64::MIN_POSITIVE);
    move |p: Vec3| {
        if planar {
            [p[0], p[1]]
        } else {
            let u = geom::normalize(p);
            let polar = u[2].clamp(-1.0, 1.0).acos();
            let az = u[1].atan2(u[0]);
            [polar * az.cos(), polar * az.sin()]
        }
    }
}

pub fn render_svg(mesh: &SurfaceMesh, report: &Value) -> Result<String> {
    let markers = vortex_markers(report)?;
    let windings = loop_windings(report);
    let project = projector(mesh);
    let pts: Vec<[f64; 2]> = mesh.positions().iter().map(|&p| project(p)).collect();
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &pts {
        for i in 0..2 {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    let extent = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
    let s = (SIZE - 2.0 * MARGIN) / extent;
    let to_px = |p: [f64; 2]| [MARGIN + (p[0] - lo[0]) * s, SIZE - MARGIN - (p[1] - lo[1]) * s];

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(out, r##"<g stroke="#b0b0b0" stroke-width="0.5" fill="none">"##);
    for (a, b) in mesh.edges() {
        let (pa, pb) = (to_px(pts[a]), to_px(pts[b]));
        let _ = writeln!(out, r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#, pa[0], pa[1], pb[0], pb[1]);
    }
    let _ = writeln!(out, "</g>");
    for (i, lp) in mesh.boundary_loops().iter().enumerate() {
        let path: Vec<String> = lp
            .vertices()
            .map(|v| {
                let p = to_px(pts[v]);
                format!("{:.2},{:.2}", p[0], p[1])
            })
            .collect();
        let _ = writeln!(
            out,
            r##"<polygon class="boundary" points="{}" fill="none" stroke="#202020" stroke-width="1.5"/>"##,
            path.join(" ")
        );
        if let Some(l) = windings.get(i) {
            let p = to_px(pts[lp.edges[0].tail]);
            let _ = writeln!(
                out,
                r#"<text class="winding" x="{:.2}" y="{:.2}" font-size="14" font-family="sans-serif">l = {l}</text>"#,
                p[0] + 6.0,
                p[1] - 6.0
            );
        }
    }
    for m in &markers {
        let p = to_px(project(m.position));
        let color = if m.brouwer_degree > 0 { "#d62728" } else { "#1f77b4" };
        let _ = writeln!(
            out,
            r#"<circle class="vortex" data-eta="{}" data-beta="{}" cx="{:.2}" cy="{:.2}" r="{:.1}" fill="{color}" fill-opacity="0.85"/>"#,
            m.brouwer_degree,
            m.hopf_index,
            p[0],
            p[1],
            3.0 + 3.0 * m.hopf_index as f64
        );
    }
    let _ = writeln!(out, "</svg>");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> SurfaceMesh {
        let p = vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]];
        SurfaceMesh::build(p, vec![[0, 1, 2], [0, 2, 3]], []).unwrap()
    }

    #[test]
    fn empty_census_draws_outline_only() {
        let r = serde_json::json!({"census": {"vortices": []}, "loops": [{"winding": 0}]});
        let svg = render_svg(&square(), &r).unwrap();
        assert!(!svg.contains("class=\"vortex\""));
        assert!(svg.contains("class=\"boundary\""));
        assert!(svg.contains("l = 0"));
    }

    #[test]
    fn markers_follow_sign() {
        let r = serde_json::json!({"census": {"vortices": [
            {"position": [0.5, 0.5, 0.0], "hopf_index": 1, "brouwer_degree": -1}
        ]}});
        let svg = render_svg(&square(), &r).unwrap();
        assert_eq!(svg.matches("data-eta=\"-1\"").count(), 1);
    }

    #[test]
    fn report_without_census_is_rejected() {
        assert!(render_svg(&square(), &serde_json::json!({})).is_err());
    }
}
