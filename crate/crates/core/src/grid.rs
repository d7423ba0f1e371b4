//! Expansion of a genome into the full metallization pattern.
//!
//! The upper half of the grid (including the centre row) is free; the lower
//! half is the image of the upper half under a reflection across the
//! horizontal axis. For the 11x16 IDC grid, rows 0..=5 carry the 96 free bits
//! and rows 6..=10 are derived.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genome::Genome;

/// Cell edge length in millimetres.
pub const CELL_MM: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    /// `grid[R-1-r][c] = grid[r][c]`
    #[default]
    Mirror,
    /// Point reflection: `grid[R-1-r][C-1-c] = grid[r][c]`
    Antisym,
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Mirror => "mirror",
            Self::Antisym => "antisym",
        })
    }
}

impl FromStr for Symmetry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mirror" => Ok(Self::Mirror),
            "antisym" | "anti-symmetric" => Ok(Self::Antisym),
            other => Err(Error::config(format!(
                "unknown symmetry `{other}` (expected mirror or antisym)"
            ))),
        }
    }
}

/// Grid dimensions. `rows` is odd so there is a single free centre row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridShape {
    pub rows: usize,
    pub cols: usize,
}

impl GridShape {
    /// The 11x16 IDC cell pattern (96 free cells).
    pub const IDC: GridShape = GridShape { rows: 11, cols: 16 };
    /// 3x4 test instance with 8 free cells, small enough to enumerate.
    pub const REDUCED: GridShape = GridShape { rows: 3, cols: 4 };

    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 || rows % 2 == 0 {
            return Err(Error::domain(format!(
                "grid must have an odd, positive row count and positive column count, got {rows}x{cols}"
            )));
        }
        Ok(Self { rows, cols })
    }

    /// Rows `0..free_rows()` are set directly from the genome.
    pub fn free_rows(&self) -> usize {
        self.rows.div_ceil(2)
    }

    pub fn free_cells(&self) -> usize {
        self.free_rows() * self.cols
    }

    /// Rows strictly above the centre; each has a derived partner row.
    pub fn mirrored_rows(&self) -> usize {
        self.rows / 2
    }
}

/// Binary metallization pattern, row-major (`true` = metal).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CellGrid {
    shape: GridShape,
    cells: Vec<bool>,
}

impl CellGrid {
    pub fn shape(&self) -> GridShape {
        self.shape
    }

    pub fn rows(&self) -> usize {
        self.shape.rows
    }

    pub fn cols(&self) -> usize {
        self.shape.cols
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.cells[row * self.shape.cols + col]
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    pub fn metal_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    /// True when every derived row is the image of its source row.
    pub fn satisfies(&self, symmetry: Symmetry) -> bool {
        let (rows, cols) = (self.shape.rows, self.shape.cols);
        (0..self.shape.mirrored_rows()).all(|r| {
            (0..cols).all(|c| {
                let image = match symmetry {
                    Symmetry::Mirror => self.get(rows - 1 - r, c),
                    Symmetry::Antisym => self.get(rows - 1 - r, cols - 1 - c),
                };
                image == self.get(r, c)
            })
        })
    }

    /// Complement of every cell.
    pub fn complement(&self) -> CellGrid {
        CellGrid {
            shape: self.shape,
            cells: self.cells.iter().map(|&c| !c).collect(),
        }
    }
}

/// Fill the free rows from `genome` (bit `cols*row + col`) and derive the rest.
pub fn expand_genome(genome: &Genome, shape: GridShape, symmetry: Symmetry) -> Result<CellGrid> {
    let free = shape.free_cells();
    if genome.len() != free {
        return Err(Error::Encoding {
            expected: free,
            actual: genome.len(),
        });
    }
    let (rows, cols) = (shape.rows, shape.cols);
    let mut cells = vec![false; rows * cols];
    cells[..free].copy_from_slice(genome.bits());
    for r in 0..shape.mirrored_rows() {
        for c in 0..cols {
            let (tr, tc) = match symmetry {
                Symmetry::Mirror => (rows - 1 - r, c),
                Symmetry::Antisym => (rows - 1 - r, cols - 1 - c),
            };
            cells[tr * cols + tc] = cells[r * cols + c];
        }
    }
    Ok(CellGrid { shape, cells })
}
