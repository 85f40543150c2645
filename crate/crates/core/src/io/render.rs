//! Heatmaps: +1 white, -1 black, levels in between on a linear grey ramp,
//! zero and empty cells mid-grey. Complex and group entries are shaded by
//! their real part.

use std::f64::consts::PI;
use std::fmt::Write as _;

use super::matrix_file::MatrixFile;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImageFormat {
    Svg,
    /// Plain-text greymap (P2).
    Pgm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RenderStyle {
    /// Side of one cell in pixels (SVG user units).
    pub cell: u32,
    /// Thin grey separators between cells (SVG only).
    pub grid: bool,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle { cell: 16, grid: true }
    }
}

/// Grey value in 0..=255 for an entry clamped to [-1, 1].
pub fn shade(x: f64) -> u8 {
    let x = if x.is_finite() { x.clamp(-1.0, 1.0) } else { 0.0 };
    ((x + 1.0) * 127.5).round() as u8
}

/// Row-major shades of any matrix mode.
pub fn shades(m: &MatrixFile) -> Vec<u8> {
    match m {
        MatrixFile::Level(l) => l.to_f64().into_iter().map(shade).collect(),
        MatrixFile::Complex(c) => c.entries().iter().map(|z| shade(z.re)).collect(),
        MatrixFile::Group { matrix, .. } => {
            let g = matrix.modulus() as f64;
            matrix
                .entries()
                .iter()
                .map(|e| e.map_or(shade(0.0), |x| shade((2.0 * PI * x as f64 / g).cos())))
                .collect()
        }
    }
}

pub fn render_svg(m: &MatrixFile, style: RenderStyle) -> String {
    let n = m.order();
    let c = style.cell.max(1) as usize;
    let side = n * c;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{side}\" height=\"{side}\" viewBox=\"0 0 {side} {side}\" shape-rendering=\"crispEdges\">\n"
    );
    for (idx, s) in shades(m).into_iter().enumerate() {
        let (i, j) = (idx / n, idx % n);
        let _ = writeln!(
            out,
            "<rect x=\"{}\" y=\"{}\" width=\"{c}\" height=\"{c}\" fill=\"#{s:02x}{s:02x}{s:02x}\"/>",
            j * c,
            i * c
        );
    }
    if style.grid && n > 1 {
        out.push_str("<g stroke=\"#808080\" stroke-width=\"0.5\">\n");
        for t in 1..n {
            let p = t * c;
            let _ = writeln!(out, "<line x1=\"{p}\" y1=\"0\" x2=\"{p}\" y2=\"{side}\"/>");
            let _ = writeln!(out, "<line x1=\"0\" y1=\"{p}\" x2=\"{side}\" y2=\"{p}\"/>");
        }
        out.push_str("</g>\n");
    }
    let _ = writeln!(
        out,
        "<rect x=\"0\" y=\"0\" width=\"{side}\" height=\"{side}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>"
    );
    out.push_str("</svg>\n");
    out
}

pub fn render_pgm(m: &MatrixFile, style: RenderStyle) -> String {
    let n = m.order();
    let c = style.cell.max(1) as usize;
    let side = n * c;
    let sh = shades(m);
    let mut out = format!("P2\n{side} {side}\n255\n");
    for y in 0..side {
        let row: Vec<String> = (0..side).map(|x| sh[(y / c) * n + x / c].to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn render(m: &MatrixFile, format: ImageFormat, style: RenderStyle) -> String {
    match format {
        ImageFormat::Svg => render_svg(m, style),
        ImageFormat::Pgm => render_pgm(m, style),
    }
}
