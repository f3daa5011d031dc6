//! SVG drawings of balls: Poincaré disk, stereographic projection of the
//! sphere, or the plane itself.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{GeometryClass, Isometry};
use crate::tiling::Ball;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColorBy {
    Generator,
    FaceClass,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderOptions {
    pub width: u32,
    pub height: u32,
    pub stroke_width: f64,
    pub color_by: ColorBy,
    pub label_vertices: bool,
    /// Vertex moved to the centre of the picture.
    pub center: usize,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            width: 800,
            height: 800,
            stroke_width: 1.5,
            color_by: ColorBy::Generator,
            label_vertices: false,
            center: 0,
        }
    }
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
    "#bcbd22", "#7f7f7f",
];

const FACE_FILL: [&str; 8] = [
    "#fde0c5", "#c6dbef", "#d9f0d3", "#f2d7ee", "#fff7bc", "#e5e5e5", "#ccece6", "#fcc5c0",
];

/// A projected edge in continuous picture coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    Line {
        from: [f64; 2],
        to: [f64; 2],
    },
    Arc {
        from: [f64; 2],
        to: [f64; 2],
        /// Projection of the geodesic midpoint, which fixes the side of the arc.
        through: [f64; 2],
        center: [f64; 2],
        radius: f64,
    },
}

impl Segment {
    pub fn endpoints(&self) -> ([f64; 2], [f64; 2]) {
        match *self {
            Segment::Line { from, to } | Segment::Arc { from, to, .. } => (from, to),
        }
    }
}

/// Projected vertex positions and edge shapes, before mapping to pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub geometry: GeometryClass,
    pub points: Vec<[f64; 2]>,
    pub edges: Vec<Segment>,
    /// Continuous-to-pixel scale and the image of the origin.
    pub scale: f64,
    pub origin: [f64; 2],
}

fn project3(geometry: GeometryClass, p: [f64; 3]) -> [f64; 2] {
    match geometry {
        GeometryClass::Euclidean => [p[0], p[1]],
        GeometryClass::Spherical | GeometryClass::Hyperbolic => {
            [p[0] / (1.0 + p[2]), p[1] / (1.0 + p[2])]
        }
    }
}

fn midpoint3(geometry: GeometryClass, p: [f64; 3], q: [f64; 3]) -> [f64; 3] {
    let s = [p[0] + q[0], p[1] + q[1], p[2] + q[2]];
    let n = match geometry {
        GeometryClass::Euclidean => 2.0,
        GeometryClass::Spherical => (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt(),
        GeometryClass::Hyperbolic => (s[2] * s[2] - s[0] * s[0] - s[1] * s[1]).sqrt(),
    };
    [s[0] / n, s[1] / n, s[2] / n]
}

/// Circle through three points, if they are not (nearly) collinear.
fn circumcircle(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> Option<([f64; 2], f64)> {
    let d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]));
    let scale = [a, b, c]
        .iter()
        .flat_map(|p| p.iter())
        .fold(1e-300f64, |m, x| m.max(x.abs()));
    if d.abs() <= 1e-12 * scale * scale {
        return None;
    }
    let n = |p: [f64; 2]| p[0] * p[0] + p[1] * p[1];
    let ux = (n(a) * (b[1] - c[1]) + n(b) * (c[1] - a[1]) + n(c) * (a[1] - b[1])) / d;
    let uy = (n(a) * (c[0] - b[0]) + n(b) * (a[0] - c[0]) + n(c) * (b[0] - a[0])) / d;
    let r = ((a[0] - ux).powi(2) + (a[1] - uy).powi(2)).sqrt();
    Some(([ux, uy], r))
}

/// Projects the ball with `center` moved to the middle of the picture.
pub fn project(ball: &Ball, opts: &RenderOptions) -> Result<Projection> {
    if ball.vertices.is_empty() {
        return Err(Error::EmptyBall);
    }
    if opts.width == 0 || opts.height == 0 {
        return Err(Error::DomainError("image dimensions must be positive".into()));
    }
    let geometry = ball.geometry();
    let center = ball
        .vertices
        .get(opts.center)
        .ok_or_else(|| Error::DomainError(format!("no vertex {}", opts.center)))?;
    let mut recenter = center.frame.inverse();
    let mut model: Vec<[f64; 3]> = ball
        .vertices
        .iter()
        .map(|v| recenter.apply(&v.position).to_f64())
        .collect();
    if geometry == GeometryClass::Spherical && model.iter().any(|p| 1.0 + p[2] < 1e-6) {
        // a vertex sits at the projection pole: tip the sphere a little
        let tilt = tilt_x(0.35);
        recenter = tilt.compose(&recenter);
        model = ball
            .vertices
            .iter()
            .map(|v| recenter.apply(&v.position).to_f64())
            .collect();
    }
    let points: Vec<[f64; 2]> = model.iter().map(|&p| project3(geometry, p)).collect();

    let half = 0.5 * opts.width.min(opts.height) as f64;
    let scale = match geometry {
        GeometryClass::Hyperbolic => 0.96 * half,
        _ => {
            let r = points
                .iter()
                .map(|p| p[0].hypot(p[1]))
                .fold(0.0f64, f64::max);
            if r > 0.0 {
                0.9 * half / r
            } else {
                half / 2.0
            }
        }
    };
    // arcs whose radius exceeds this (in picture units) are drawn straight
    let straight = 1e5 * opts.width.max(opts.height) as f64 / scale;

    let edges = ball
        .edges
        .iter()
        .map(|e| {
            let (p, q) = (points[e.u], points[e.v]);
            if geometry == GeometryClass::Euclidean {
                return Segment::Line { from: p, to: q };
            }
            let m = project3(geometry, midpoint3(geometry, model[e.u], model[e.v]));
            match circumcircle(p, m, q) {
                Some((c, r)) if r < straight => Segment::Arc {
                    from: p,
                    to: q,
                    through: m,
                    center: c,
                    radius: r,
                },
                _ => Segment::Line { from: p, to: q },
            }
        })
        .collect();
    Ok(Projection {
        geometry,
        points,
        edges,
        scale,
        origin: [opts.width as f64 / 2.0, opts.height as f64 / 2.0],
    })
}

fn tilt_x(angle: f64) -> Isometry<f64> {
    let (c, s) = (angle.cos(), angle.sin());
    Isometry::from_matrix(
        GeometryClass::Spherical,
        [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]],
        [[0.0; 3]; 3],
    )
}

impl Projection {
    /// Picture coordinates to pixels (y axis pointing down).
    pub fn to_pixels(&self, p: [f64; 2]) -> [f64; 2] {
        [self.origin[0] + self.scale * p[0], self.origin[1] - self.scale * p[1]]
    }

    /// SVG path commands continuing from the segment's start, optionally reversed.
    fn path_tail(&self, seg: &Segment, reversed: bool) -> String {
        match *seg {
            Segment::Line { from, to } => {
                let t = self.to_pixels(if reversed { from } else { to });
                format!("L {:.3} {:.3}", t[0], t[1])
            }
            Segment::Arc {
                from,
                to,
                through,
                center,
                radius,
            } => {
                let (a, b) = if reversed { (to, from) } else { (from, to) };
                let (pa, pm, pb) = (self.to_pixels(a), self.to_pixels(through), self.to_pixels(b));
                let pc = self.to_pixels(center);
                let cross = (pm[0] - pa[0]) * (pb[1] - pm[1]) - (pm[1] - pa[1]) * (pb[0] - pm[0]);
                let sweep = u8::from(cross > 0.0);
                // the arc is the long one iff the centre and the midpoint are on the same side of the chord
                let side = |p: [f64; 2]| (pb[0] - pa[0]) * (p[1] - pa[1]) - (pb[1] - pa[1]) * (p[0] - pa[0]);
                let large = u8::from(side(pc) * side(pm) > 0.0);
                let r = radius * self.scale;
                format!("A {r:.3} {r:.3} 0 {large} {sweep} {:.3} {:.3}", pb[0], pb[1])
            }
        }
    }

    fn edge_path(&self, seg: &Segment) -> String {
        let (from, _) = seg.endpoints();
        let s = self.to_pixels(from);
        format!("M {:.3} {:.3} {}", s[0], s[1], self.path_tail(seg, false))
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Draws the ball as an SVG 1.1 document.
pub fn render_svg(ball: &Ball, opts: &RenderOptions) -> Result<String> {
    let proj = project(ball, opts)?;
    let sigma = ball.scheme.sigma();
    let mut out = String::new();
    let (w, h) = (opts.width, opts.height);
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(
        out,
        "<title>{} {} ({}, radius {})</title>",
        escape(&ball.scheme.to_string()),
        ball.type_vector,
        ball.geometry(),
        ball.radius
    );
    let _ = writeln!(out, r##"<rect width="{w}" height="{h}" fill="#ffffff"/>"##);
    if proj.geometry == GeometryClass::Hyperbolic {
        let r = proj.scale;
        let _ = writeln!(
            out,
            r##"<circle class="boundary" cx="{:.3}" cy="{:.3}" r="{r:.3}" fill="none" stroke="#000000" stroke-width="{:.3}"/>"##,
            proj.origin[0],
            proj.origin[1],
            opts.stroke_width
        );
    }

    if opts.color_by == ColorBy::FaceClass {
        let _ = writeln!(out, r#"<g class="faces" stroke="none">"#);
        for f in ball.faces.iter().filter(|f| f.closed) {
            let mut d = String::new();
            let first = proj.to_pixels(proj.points[f.boundary[0].0]);
            let _ = write!(d, "M {:.3} {:.3}", first[0], first[1]);
            let n = f.boundary.len();
            for i in 0..n {
                let (a, b) = (f.boundary[i].0, f.boundary[(i + 1) % n].0);
                if let Some((k, e)) = ball
                    .edges
                    .iter()
                    .enumerate()
                    .find(|(_, e)| (e.u, e.v) == (a, b) || (e.u, e.v) == (b, a))
                {
                    let _ = write!(d, " {}", proj.path_tail(&proj.edges[k], e.u != a));
                }
            }
            let _ = writeln!(
                out,
                r#"<path class="face" d="{d} Z" fill="{}"/>"#,
                FACE_FILL[f.face_class % FACE_FILL.len()]
            );
        }
        let _ = writeln!(out, "</g>");
    }

    let _ = writeln!(
        out,
        r#"<g class="edges" fill="none" stroke-width="{:.3}" stroke-linecap="round">"#,
        opts.stroke_width
    );
    for (e, seg) in ball.edges.iter().zip(&proj.edges) {
        let color = match opts.color_by {
            ColorBy::Generator => PALETTE[e.generator.min(sigma[e.generator]) % PALETTE.len()],
            _ => "#000000",
        };
        let _ = writeln!(
            out,
            r#"<path class="edge" data-generator="{}" d="{}" stroke="{color}"/>"#,
            e.generator + 1,
            proj.edge_path(seg)
        );
    }
    let _ = writeln!(out, "</g>");

    let r = (2.0 * opts.stroke_width).max(1.5);
    let _ = writeln!(out, r##"<g class="vertices" fill="#000000">"##);
    for (v, p) in proj.points.iter().enumerate() {
        let q = proj.to_pixels(*p);
        let _ = writeln!(
            out,
            r#"<circle class="vertex" data-id="{v}" cx="{:.3}" cy="{:.3}" r="{r:.3}"/>"#,
            q[0], q[1]
        );
    }
    let _ = writeln!(out, "</g>");
    if opts.label_vertices {
        let _ = writeln!(out, r#"<g class="labels" font-family="sans-serif" font-size="10">"#);
        for (v, p) in proj.points.iter().enumerate() {
            let q = proj.to_pixels(*p);
            let _ = writeln!(
                out,
                r#"<text x="{:.3}" y="{:.3}">{v}</text>"#,
                q[0] + r + 1.0,
                q[1] - r - 1.0
            );
        }
        let _ = writeln!(out, "</g>");
    }
    let _ = writeln!(out, "</svg>");
    Ok(out)
}
