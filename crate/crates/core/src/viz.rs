//! Heatmaps of labeled matrices.
//!
//! Rows run top to bottom in term order and columns left to right in
//! document order. Colors go black → orange → white as the value grows.
//! Binary PPM (P6) output is canonical; SVG adds row and column labels.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::lsa::LabeledMatrix;
use crate::netpbm::Scanner;

pub type Rgb = [u8; 3];

pub const BLACK: Rgb = [0, 0, 0];
pub const ORANGE: Rgb = [230, 115, 0];
pub const WHITE: Rgb = [255, 255, 255];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Palette {
    /// Values rounded to 0, 1 or 2 (clamped) and painted black, orange or white.
    Discrete3,
    /// Linear ramp black → orange → white over `[value_floor, value_ceiling]`.
    Continuous,
}

impl std::str::FromStr for Palette {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "discrete3" => Ok(Palette::Discrete3),
            "continuous" => Ok(Palette::Continuous),
            _ => Err(format!(
                "unknown palette {s:?} (expected discrete3 or continuous)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageFormat {
    Ppm,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatmapSpec {
    pub palette: Palette,
    pub value_floor: f64,
    pub value_ceiling: f64,
    pub cell_px: usize,
    pub show_labels: bool,
}

impl HeatmapSpec {
    pub fn discrete() -> Self {
        Self {
            palette: Palette::Discrete3,
            ..Self::continuous()
        }
    }

    /// Continuous ramp over `[0, 2]`, the count range of the example corpus.
    pub fn continuous() -> Self {
        Self {
            palette: Palette::Continuous,
            value_floor: 0.0,
            value_ceiling: 2.0,
            cell_px: 20,
            show_labels: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.value_floor.is_nan()
            || self.value_ceiling.is_nan()
            || self.value_floor >= self.value_ceiling
        {
            return Err(Error::InvalidHeatmapSpec(format!(
                "floor {} must be below ceiling {}",
                self.value_floor, self.value_ceiling
            )));
        }
        if self.cell_px == 0 {
            return Err(Error::InvalidHeatmapSpec(
                "cell_px must be at least 1".into(),
            ));
        }
        Ok(())
    }

    pub fn color(&self, value: f64) -> Rgb {
        match self.palette {
            Palette::Discrete3 => match value.round().clamp(0.0, 2.0) as u8 {
                0 => BLACK,
                1 => ORANGE,
                _ => WHITE,
            },
            Palette::Continuous => {
                let t = ((value - self.value_floor) / (self.value_ceiling - self.value_floor))
                    .clamp(0.0, 1.0);
                if t <= 0.5 {
                    lerp(BLACK, ORANGE, t * 2.0)
                } else {
                    lerp(ORANGE, WHITE, (t - 0.5) * 2.0)
                }
            }
        }
    }
}

fn lerp(a: Rgb, b: Rgb, t: f64) -> Rgb {
    let mix = |x: u8, y: u8| (f64::from(x) + (f64::from(y) - f64::from(x)) * t).round() as u8;
    [mix(a[0], b[0]), mix(a[1], b[1]), mix(a[2], b[2])]
}

pub fn render_heatmap(
    matrix: &LabeledMatrix,
    spec: &HeatmapSpec,
    format: ImageFormat,
) -> Result<Vec<u8>> {
    spec.validate()?;
    let (rows, cols) = matrix.values.shape();
    if rows == 0 || cols == 0 {
        return Err(Error::EmptyMatrix);
    }
    Ok(match format {
        ImageFormat::Ppm => render_ppm(matrix, spec),
        ImageFormat::Svg => render_svg(matrix, spec).into_bytes(),
    })
}

fn render_ppm(matrix: &LabeledMatrix, spec: &HeatmapSpec) -> Vec<u8> {
    let (rows, cols) = matrix.values.shape();
    let px = spec.cell_px;
    let (width, height) = (cols * px, rows * px);
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    out.reserve(width * height * 3);
    for r in 0..rows {
        let line: Vec<Rgb> = (0..cols)
            .map(|c| spec.color(matrix.values.get(r, c)))
            .collect();
        for _ in 0..px {
            for color in &line {
                for _ in 0..px {
                    out.extend_from_slice(color);
                }
            }
        }
    }
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn render_svg(matrix: &LabeledMatrix, spec: &HeatmapSpec) -> String {
    let (rows, cols) = matrix.values.shape();
    let px = spec.cell_px;
    let (left, top) = if spec.show_labels {
        let longest = matrix
            .row_labels
            .iter()
            .map(|l| l.chars().count())
            .max()
            .unwrap_or(0);
        (longest * 8 + 8, 20)
    } else {
        (0, 0)
    };
    let (width, height) = (left + cols * px, top + rows * px);
    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" shape-rendering="crispEdges">"#
    )
    .unwrap();
    for r in 0..rows {
        for c in 0..cols {
            let [red, green, blue] = spec.color(matrix.values.get(r, c));
            writeln!(
                svg,
                r##"<rect x="{}" y="{}" width="{px}" height="{px}" fill="#{red:02x}{green:02x}{blue:02x}"/>"##,
                left + c * px,
                top + r * px
            )
            .unwrap();
        }
    }
    if spec.show_labels {
        for (r, label) in matrix.row_labels.iter().enumerate() {
            writeln!(
                svg,
                r#"<text x="{}" y="{}" font-family="monospace" font-size="12" text-anchor="end" dominant-baseline="middle">{}</text>"#,
                left - 4,
                top + r * px + px / 2,
                escape(label)
            )
            .unwrap();
        }
        for (c, label) in matrix.col_labels.iter().enumerate() {
            writeln!(
                svg,
                r#"<text x="{}" y="{}" font-family="monospace" font-size="12" text-anchor="middle">{}</text>"#,
                left + c * px + px / 2,
                top - 6,
                escape(label)
            )
            .unwrap();
        }
    }
    svg.push_str("</svg>\n");
    svg
}

/// Number of distinct RGB triples in a binary PPM.
pub fn distinct_colors(ppm: &[u8]) -> Result<usize> {
    let mut scan = Scanner::new(ppm);
    let header = scan.header(&[b"P6"])?;
    let expected = header.width * header.height * 3;
    let data = scan.rest();
    if data.len() < expected {
        return Err(Error::TruncatedPixelData {
            expected,
            found: data.len(),
        });
    }
    let colors: HashSet<&[u8]> = data[..expected].chunks_exact(3).collect();
    Ok(colors.len())
}
