//! Lumped-element stand-in for the EM-simulated IDC sensor.
//!
//! The pattern's interleaving is measured by the number of metal/empty
//! boundaries (`fringe_edges`). Each boundary adds a fringing capacitance
//! scaled by the permittivity of whatever sits on the sensor, so
//!
//! ```text
//! C(eps) = C_p + eps * c_e * E
//! f      = 1 / (2 pi sqrt(L C))
//! cost   = f_ref / |f_sam - f_ref|
//! ```
//!
//! The constants are order-of-magnitude stand-ins chosen to put the
//! resonance near the 1.5 GHz and 5 GHz designs. They are not calibrated
//! against any field solver.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::genome::Genome;
use crate::grid::{expand_genome, CellGrid, GridShape, Symmetry};
use crate::objective::Objective;

/// Orthogonally adjacent cell pairs whose values differ.
pub fn fringe_edges(grid: &CellGrid) -> usize {
    let (rows, cols) = (grid.rows(), grid.cols());
    let mut edges = 0;
    for r in 0..rows {
        for c in 0..cols {
            let here = grid.get(r, c);
            if c + 1 < cols && grid.get(r, c + 1) != here {
                edges += 1;
            }
            if r + 1 < rows && grid.get(r + 1, c) != here {
                edges += 1;
            }
        }
    }
    edges
}

/// LC resonance `1 / (2 pi sqrt(L C))` in hertz.
pub fn resonant_frequency(capacitance: f64, inductance: f64) -> Result<f64> {
    if !(capacitance > 0.0 && inductance > 0.0) {
        return Err(Error::domain(format!(
            "resonance needs C > 0 and L > 0, got C = {capacitance}, L = {inductance}"
        )));
    }
    Ok(1.0 / (2.0 * PI * (inductance * capacitance).sqrt()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurrogateProfile {
    pub name: String,
    /// henry
    pub inductance: f64,
    /// farad
    pub plate_capacitance: f64,
    /// farad per boundary edge
    pub edge_capacitance: f64,
    pub eps_ref: f64,
    pub eps_sample: f64,
    pub symmetry: Symmetry,
    /// hertz; smaller shifts are charged `f_ref / delta_min`
    pub delta_min: f64,
    pub shape: GridShape,
}

impl SurrogateProfile {
    pub fn idc1500() -> Self {
        Self {
            name: "idc1500".into(),
            inductance: 10e-9,
            plate_capacitance: 1.0e-12,
            edge_capacitance: 2.0e-15,
            eps_ref: 1.0,
            eps_sample: 2.0,
            symmetry: Symmetry::Mirror,
            delta_min: 1e3,
            shape: GridShape::IDC,
        }
    }

    pub fn idc5000() -> Self {
        Self {
            name: "idc5000".into(),
            inductance: 0.9e-9,
            ..Self::idc1500()
        }
    }

    /// idc1500 electricals on the 3x4 grid (8 free bits).
    pub fn reduced() -> Self {
        Self {
            name: "reduced".into(),
            shape: GridShape::REDUCED,
            ..Self::idc1500()
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "idc1500" => Ok(Self::idc1500()),
            "idc5000" => Ok(Self::idc5000()),
            "reduced" => Ok(Self::reduced()),
            other => Err(Error::config(format!(
                "unknown surrogate profile `{other}` (expected idc1500, idc5000 or reduced)"
            ))),
        }
    }

    pub fn with_symmetry(mut self, symmetry: Symmetry) -> Self {
        self.symmetry = symmetry;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("inductance", self.inductance),
            ("plate_capacitance", self.plate_capacitance),
            ("edge_capacitance", self.edge_capacitance),
            ("delta_min", self.delta_min),
        ];
        for (field, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(format!("{field} must be positive, got {v}")));
            }
        }
        if self.eps_ref == self.eps_sample {
            return Err(Error::config("eps_sample must differ from eps_ref"));
        }
        Ok(())
    }

    fn capacitance(&self, eps: f64, edges: usize) -> f64 {
        self.plate_capacitance + eps * self.edge_capacitance * edges as f64
    }

    /// `(f_ref, f_sam)` for a pattern with `edges` boundaries.
    pub fn frequencies(&self, edges: usize) -> Result<(f64, f64)> {
        let f_ref = resonant_frequency(self.capacitance(self.eps_ref, edges), self.inductance)?;
        let f_sam = resonant_frequency(self.capacitance(self.eps_sample, edges), self.inductance)?;
        Ok((f_ref, f_sam))
    }

    /// Inverse normalized frequency shift for a pattern with `edges` boundaries.
    pub fn cost_for_edges(&self, edges: usize) -> Result<f64> {
        let (f_ref, f_sam) = self.frequencies(edges)?;
        let shift = (f_sam - f_ref).abs();
        Ok(f_ref / shift.max(self.delta_min))
    }
}

pub fn surrogate_cost(genome: &Genome, profile: &SurrogateProfile) -> Result<f64> {
    let grid = expand_genome(genome, profile.shape, profile.symmetry)?;
    profile.cost_for_edges(fringe_edges(&grid))
}

#[derive(Debug, Clone)]
pub struct Surrogate {
    profile: SurrogateProfile,
}

impl Surrogate {
    pub fn new(profile: SurrogateProfile) -> Result<Self> {
        profile.validate()?;
        Ok(Self { profile })
    }

    pub fn profile(&self) -> &SurrogateProfile {
        &self.profile
    }
}

impl Objective for Surrogate {
    fn dim(&self) -> usize {
        self.profile.shape.free_cells()
    }

    fn cost(&self, genome: &Genome) -> Result<f64> {
        surrogate_cost(genome, &self.profile)
    }

    fn describe(&self) -> String {
        format!(
            "surrogate {} ({})",
            self.profile.name, self.profile.symmetry
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    /// Independent count: every unordered pair of cells at Manhattan distance 1.
    fn boundary_pairs_oracle(grid: &CellGrid) -> usize {
        let n = grid.rows() * grid.cols();
        let at = |i: usize| (i / grid.cols(), i % grid.cols());
        let mut count = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                let ((r1, c1), (r2, c2)) = (at(i), at(j));
                if r1.abs_diff(r2) + c1.abs_diff(c2) == 1 && grid.get(r1, c1) != grid.get(r2, c2) {
                    count += 1;
                }
            }
        }
        count
    }

    fn expand(g: &Genome, sym: Symmetry) -> CellGrid {
        expand_genome(g, GridShape::IDC, sym).unwrap()
    }

    #[test]
    fn uniform_grids_have_no_edges() {
        assert_eq!(
            fringe_edges(&expand(&Genome::zeros(96), Symmetry::Mirror)),
            0
        );
        assert_eq!(
            fringe_edges(&expand(&Genome::ones(96), Symmetry::Mirror)),
            0
        );
    }

    #[test]
    fn single_cell_has_four_edges() {
        let mut g = Genome::zeros(96);
        g.set(0, true);
        let grid = expand(&g, Symmetry::Mirror);
        assert_eq!(boundary_pairs_oracle(&grid), 4);
        assert_eq!(fringe_edges(&grid), 4);
    }

    #[test]
    fn matches_pair_oracle_and_is_complement_invariant() {
        let mut rng = RngStream::from_seed(11);
        for _ in 0..200 {
            let g = Genome::random(96, &mut rng);
            for sym in [Symmetry::Mirror, Symmetry::Antisym] {
                let grid = expand(&g, sym);
                let e = fringe_edges(&grid);
                assert_eq!(e, boundary_pairs_oracle(&grid));
                assert_eq!(e, fringe_edges(&grid.complement()));
                assert!(e <= 11 * 15 + 10 * 16);
            }
        }
    }

    #[test]
    fn resonance_values() {
        // 1 / (2 pi sqrt(1e-20)) evaluated to 30 digits.
        let f = resonant_frequency(1e-12, 10e-9).unwrap();
        assert!((f - 1_591_549_430.918_953_4).abs() / f < 1e-14);
        let quad = resonant_frequency(4e-12, 10e-9).unwrap();
        assert!((quad - f / 2.0).abs() / f < 1e-14);
        let unit = resonant_frequency(1.0 / (4.0 * PI * PI), 1.0).unwrap();
        assert!((unit - 1.0).abs() < 1e-12);
    }

    #[test]
    fn resonance_rejects_non_positive() {
        assert!(resonant_frequency(0.0, 1.0).is_err());
        assert!(resonant_frequency(1.0, -1.0).is_err());
        assert!(resonant_frequency(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn empty_pattern_pays_shift_penalty() {
        let p = SurrogateProfile::idc1500();
        let cost = surrogate_cost(&Genome::zeros(96), &p).unwrap();
        let f_ref = resonant_frequency(p.plate_capacitance, p.inductance).unwrap();
        assert_eq!(cost, f_ref / p.delta_min);
    }

    #[test]
    fn sample_shifts_resonance_down() {
        for p in [SurrogateProfile::idc1500(), SurrogateProfile::idc5000()] {
            for e in 1..=325 {
                let (f_ref, f_sam) = p.frequencies(e).unwrap();
                assert!(f_ref > f_sam);
            }
        }
    }

    #[test]
    fn cost_strictly_decreasing_in_edges() {
        for p in [SurrogateProfile::idc1500(), SurrogateProfile::idc5000()] {
            let costs: Vec<f64> = (0..=325).map(|e| p.cost_for_edges(e).unwrap()).collect();
            assert!(costs.windows(2).all(|w| w[1] < w[0]));
        }
    }

    #[test]
    fn design_frequencies() {
        let (f1, _) = SurrogateProfile::idc1500().frequencies(0).unwrap();
        let (f5, _) = SurrogateProfile::idc5000().frequencies(0).unwrap();
        assert!((f1 / 1e9 - 1.5915).abs() < 1e-4);
        assert!((f5 / 1e9 - 5.3052).abs() < 1e-4);
    }

    #[test]
    fn invalid_profiles_rejected() {
        let mut p = SurrogateProfile::idc1500();
        p.eps_sample = p.eps_ref;
        assert!(Surrogate::new(p).is_err());
        let mut p = SurrogateProfile::idc1500();
        p.delta_min = 0.0;
        assert!(Surrogate::new(p).is_err());
        assert!(SurrogateProfile::by_name("idc9000").is_err());
    }
}
