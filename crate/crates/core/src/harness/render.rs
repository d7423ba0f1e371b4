use crate::error::{Error, Result};
use crate::genome::Genome;
use crate::grid::{expand_genome, CellGrid, GridShape, Symmetry, CELL_MM};

/// Grid shape implied by a genome length: the full pattern or the reduced one.
pub fn shape_for(len: usize) -> Result<GridShape> {
    [GridShape::IDC, GridShape::REDUCED]
        .into_iter()
        .find(|s| s.free_cells() == len)
        .ok_or(Error::Encoding {
            expected: GridShape::IDC.free_cells(),
            actual: len,
        })
}

/// One line per row, `#` for metal and `.` for empty.
pub fn render_grid(genome: &Genome, symmetry: Symmetry) -> Result<String> {
    let grid = expand_genome(genome, shape_for(genome.len())?, symmetry)?;
    Ok(grid_text(&grid))
}

pub fn grid_text(grid: &CellGrid) -> String {
    let mut out = String::with_capacity(grid.rows() * (grid.cols() + 1));
    for r in 0..grid.rows() {
        for c in 0..grid.cols() {
            out.push(if grid.get(r, c) { '#' } else { '.' });
        }
        out.push('\n');
    }
    out
}

/// SVG drawing with one `CELL_MM` square per metal cell, in millimetres.
pub fn render_svg(genome: &Genome, symmetry: Symmetry) -> Result<String> {
    let grid = expand_genome(genome, shape_for(genome.len())?, symmetry)?;
    let (w, h) = (grid.cols() as f64 * CELL_MM, grid.rows() as f64 * CELL_MM);
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}mm\" height=\"{h}mm\" viewBox=\"0 0 {w} {h}\">\n"
    );
    out.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"white\" stroke=\"black\" stroke-width=\"0.05\"/>\n"
    ));
    for r in 0..grid.rows() {
        for c in 0..grid.cols() {
            if grid.get(r, c) {
                out.push_str(&format!(
                    "  <rect x=\"{}\" y=\"{}\" width=\"{CELL_MM}\" height=\"{CELL_MM}\" fill=\"#b87333\"/>\n",
                    c as f64 * CELL_MM,
                    r as f64 * CELL_MM
                ));
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}
