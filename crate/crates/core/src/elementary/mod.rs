//! Per-mode elementary problems: exponential (fractional) solves and the heat
//! equation with a Dirichlet or Neumann wall.

pub mod frac;
pub mod heat;
pub mod split;

use ndarray::{ArrayView1, ArrayView2};
use num_complex::Complex64;

use crate::spectral::{TimeGrid, VerticalGrid};
use crate::{Error, Result};

pub use frac::{
    frac_backward_profile, frac_forward_profile, solve_frac_backward, solve_frac_forward,
};
pub use heat::{
    heat_solver, heat_solver_names, solve_heat_dirichlet, solve_heat_neumann, HeatSolver,
    KernelHeat, SteppingHeat, Wall,
};
pub use split::{split_heat_solution, SplitResult};

/// One horizontal mode's problem: symbol `a = |k'|`, grids, right-hand side
/// per (z, t) and optional wall data per t.
#[derive(Debug, Clone, Copy)]
pub struct ModeProblem<'a> {
    pub a: f64,
    pub vgrid: &'a VerticalGrid,
    pub tgrid: &'a TimeGrid,
    pub rhs: ArrayView2<'a, Complex64>,
    pub wall: Option<ArrayView1<'a, Complex64>>,
}

impl<'a> ModeProblem<'a> {
    pub fn new(
        a: f64,
        vgrid: &'a VerticalGrid,
        tgrid: &'a TimeGrid,
        rhs: ArrayView2<'a, Complex64>,
    ) -> Self {
        ModeProblem {
            a,
            vgrid,
            tgrid,
            rhs,
            wall: None,
        }
    }

    pub fn with_wall(mut self, wall: ArrayView1<'a, Complex64>) -> Self {
        self.wall = Some(wall);
        self
    }

    pub fn check_shape(&self) -> Result<()> {
        let expect = (self.vgrid.len(), self.tgrid.len());
        if self.rhs.dim() != expect {
            return Err(Error::Incompatible(format!(
                "rhs shape {:?} does not match grids {:?}",
                self.rhs.dim(),
                expect
            )));
        }
        if let Some(w) = &self.wall {
            if w.len() != self.tgrid.len() {
                return Err(Error::Incompatible(
                    "wall data length differs from time grid".into(),
                ));
            }
        }
        Ok(())
    }
}
