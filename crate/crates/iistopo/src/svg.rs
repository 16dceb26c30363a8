//! SVG figures for complexes and region decompositions.
//!
//! Exports are deterministic: the same input yields byte-identical
//! output. Points come from the exact rational coordinates, projected
//! onto an equilateral triangle and rendered at fixed precision;
//! triangles are filled by region (or a neutral tone for a bare
//! complex), edges stroked, and vertices drawn as dots in their process
//! color with the vertex name as a tooltip. Only dimensions up to 2 can
//! be drawn.

use crate::complex::{ChromaticComplex, Simplex};
use crate::geometry::Rat;
use crate::resilience::RegionDecomposition;
use crate::{Error, Result};
use num_traits::ToPrimitive;
use std::collections::BTreeSet;
use std::fmt::Write as _;

/// Dots and labels per process color, cycled if colors exceed it.
const PROCESS_COLORS: [&str; 3] = ["#c0392b", "#2980b9", "#27ae60"];

/// Region fills, cycled by region index.
const REGION_FILLS: [&str; 5] = ["#aed6f1", "#f9e79d", "#a9dfbf", "#f5b7b1", "#d7bde2"];

/// Fill for the triangles of a bare complex.
const PLAIN_FILL: &str = "#ecf0f1";

const STROKE: &str = "#5d6d7e";

/// Drawing area: unit-width equilateral triangle scaled by 1000, with a
/// 50-unit margin all round.
const SCALE: f64 = 1000.0;
const MARGIN: f64 = 50.0;
const HEIGHT: f64 = 0.866_025_403_784_438_6 * SCALE;

fn ensure_drawable(complex: &ChromaticComplex, what: &'static str) -> Result<()> {
    let dim = complex.dim().unwrap_or(0);
    if dim > 2 {
        return Err(Error::Dimension {
            what,
            found: dim,
            max: 2,
        });
    }
    Ok(())
}

/// Projects barycentric coordinates (over up to three corners) onto the
/// plane: corner 0 at the origin, corner 1 to its right, corner 2 above.
fn plane_point(coords: &[Rat]) -> Result<(f64, f64)> {
    if coords.is_empty() || coords.len() > 3 {
        return Err(Error::invalid(
            "svg export",
            format!("expected 1-3 barycentric coordinates, found {}", coords.len()),
        ));
    }
    let corners = [(0.0, 0.0), (1.0, 0.0), (0.5, HEIGHT / SCALE)];
    let mut x = 0.0;
    let mut y = 0.0;
    for (c, (cx, cy)) in coords.iter().zip(corners) {
        let weight = c
            .to_f64()
            .ok_or_else(|| Error::invalid("svg export", "coordinate out of f64 range"))?;
        x += weight * cx;
        y += weight * cy;
    }
    Ok((x, y))
}

/// Scales a plane point into the SVG viewport (y axis flipped).
fn viewport(p: (f64, f64)) -> (f64, f64) {
    (MARGIN + SCALE * p.0, MARGIN + HEIGHT - SCALE * p.1)
}

fn point_of(complex: &ChromaticComplex, v: u32) -> Result<(f64, f64)> {
    let coords = complex.vertex(v).coords.as_deref().ok_or_else(|| {
        Error::invalid(
            "svg export",
            format!("vertex {:?} has no coordinates", complex.vertex(v).name),
        )
    })?;
    Ok(viewport(plane_point(coords)?))
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

struct Figure {
    body: String,
}

impl Figure {
    fn new() -> Figure {
        let mut body = String::new();
        let width = 2.0 * MARGIN + SCALE;
        let height = 2.0 * MARGIN + HEIGHT;
        body.push_str(r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        body.push('\n');
        let _ = writeln!(
            body,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width:.1} {height:.1}">"#
        );
        Figure { body }
    }

    fn triangle(&mut self, points: [(f64, f64); 3], fill: &str) {
        let _ = writeln!(
            self.body,
            r#"<polygon points="{:.3},{:.3} {:.3},{:.3} {:.3},{:.3}" fill="{fill}" stroke="{STROKE}" stroke-width="1.5" stroke-linejoin="round"/>"#,
            points[0].0, points[0].1, points[1].0, points[1].1, points[2].0, points[2].1,
        );
    }

    fn edge(&mut self, a: (f64, f64), b: (f64, f64)) {
        let _ = writeln!(
            self.body,
            r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{STROKE}" stroke-width="1.5"/>"#,
            a.0, a.1, b.0, b.1,
        );
    }

    fn vertex(&mut self, p: (f64, f64), color_index: u32, name: &str) {
        let fill = PROCESS_COLORS[color_index as usize % PROCESS_COLORS.len()];
        let _ = writeln!(
            self.body,
            r#"<circle cx="{:.3}" cy="{:.3}" r="5" fill="{fill}"><title>{}</title></circle>"#,
            p.0,
            p.1,
            escape(name),
        );
    }

    fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

/// Draws the triangles of one complex with a single fill, appending to
/// `figure`; 1-simplices are stroked and vertices dotted by color.
fn draw_complex(figure: &mut Figure, complex: &ChromaticComplex, fill: &str) -> Result<()> {
    let mut triangles: Vec<&Simplex> = Vec::new();
    let mut edges: Vec<&Simplex> = Vec::new();
    for s in complex.simplices() {
        match s.len() {
            3 => triangles.push(s),
            2 => edges.push(s),
            _ => {}
        }
    }
    for s in triangles {
        figure.triangle(
            [
                point_of(complex, s[0])?,
                point_of(complex, s[1])?,
                point_of(complex, s[2])?,
            ],
            fill,
        );
    }
    for s in edges {
        figure.edge(point_of(complex, s[0])?, point_of(complex, s[1])?);
    }
    for v in complex.vertices() {
        figure.vertex(point_of(complex, v.id)?, v.color.0, &v.name);
    }
    Ok(())
}

/// Renders a complex of dimension ≤ 2 as a standalone SVG document.
pub fn export_svg(complex: &ChromaticComplex) -> Result<String> {
    ensure_drawable(complex, "svg export")?;
    let mut figure = Figure::new();
    draw_complex(&mut figure, complex, PLAIN_FILL)?;
    Ok(figure.finish())
}

/// Renders a region decomposition: region j's triangles share the j-th
/// fill, later regions drawn over earlier ones, with each region's
/// vertices dotted by color.
pub fn export_svg_regions(dec: &RegionDecomposition) -> Result<String> {
    ensure_drawable(dec.tower().base(), "svg export")?;
    let mut figure = Figure::new();
    for j in 0..=dec.depth() {
        let level = &dec.tower().level(dec.level_of(j)).complex;
        let fill = REGION_FILLS[j % REGION_FILLS.len()];
        let mut seen: BTreeSet<u32> = BTreeSet::new();
        for s in dec.region(j) {
            match s.len() {
                3 => figure.triangle(
                    [
                        point_of(level, s[0])?,
                        point_of(level, s[1])?,
                        point_of(level, s[2])?,
                    ],
                    fill,
                ),
                2 => figure.edge(point_of(level, s[0])?, point_of(level, s[1])?),
                _ => {}
            }
            seen.extend(s.iter().copied());
        }
        for &v in &seen {
            let vertex = level.vertex(v);
            figure.vertex(point_of(level, v)?, vertex.color.0, &vertex.name);
        }
    }
    Ok(figure.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subdivision::{chr, chr_iter};
    use crate::tasks::lt_task;
    use crate::Budget;

    #[test]
    fn one_round_of_subdivision_renders_thirteen_triangles() {
        let complex = chr(&ChromaticComplex::standard_simplex(2)).unwrap();
        let svg = export_svg(&complex).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 13);
        assert!(svg.starts_with("<?xml"));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn the_output_complex_of_the_resilient_task_has_no_corners() {
        let task = lt_task(2, 1).unwrap();
        let svg = export_svg(&task.output).unwrap();
        // The three base corners are excluded, so no dot sits at a
        // viewport corner of the triangle: (50, 916), (1050, 916), or
        // (550, 50).
        assert!(!svg.contains(r#"cx="50.000""#));
        assert!(!svg.contains(r#"cx="1050.000""#));
        assert!(!svg.contains(r#"cy="50.000""#));
        assert_eq!(svg.matches("<polygon").count(), 142);
    }

    #[test]
    fn exports_are_byte_identical_across_invocations() {
        let tower = chr_iter(&ChromaticComplex::standard_simplex(2), 2).unwrap();
        let a = export_svg(&tower.top().complex).unwrap();
        let again = chr_iter(&ChromaticComplex::standard_simplex(2), 2).unwrap();
        let b = export_svg(&again.top().complex).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn an_edge_complex_renders_as_lines_and_dots() {
        let complex = chr(&ChromaticComplex::standard_simplex(1)).unwrap();
        let svg = export_svg(&complex).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 0);
        assert_eq!(svg.matches("<line").count(), 3);
        assert_eq!(svg.matches("<circle").count(), 4);
    }

    #[test]
    fn three_dimensional_complexes_are_refused() {
        let complex = ChromaticComplex::standard_simplex(3);
        match export_svg(&complex) {
            Err(Error::Dimension { found, max, .. }) => {
                assert_eq!((found, max), (3, 2));
            }
            other => panic!("expected a dimension error, got {other:?}"),
        }
    }

    #[test]
    fn region_figures_draw_every_region_once() {
        let mut budget = Budget::default();
        let dec = crate::resilience::regions(2, 1, 1, &mut budget).unwrap();
        let svg = export_svg_regions(&dec).unwrap();
        let triangles = dec.region(0).len() + dec.region(1).len();
        assert_eq!(svg.matches("<polygon").count(), triangles);
        assert!(svg.contains(REGION_FILLS[0]));
        assert!(svg.contains(REGION_FILLS[1]));
    }
}
