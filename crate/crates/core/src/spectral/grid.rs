use std::sync::Arc;

use crate::spectral::band::WavenumberLattice;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerticalKind {
    /// `[0, 1]` between two walls.
    Strip,
    /// `[0, Zmax]`, wall at 0.
    HalfLine,
    /// `[−Zmax, Zmax]`.
    ReflectedLine,
}

/// Uniform vertical grid with trapezoid weights.
#[derive(Debug, Clone, PartialEq)]
pub struct VerticalGrid {
    kind: VerticalKind,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    spacing: f64,
}

impl VerticalGrid {
    fn uniform(kind: VerticalKind, lo: f64, hi: f64, panels: usize) -> Result<Self> {
        if panels < 4 {
            return Err(Error::InvalidGrid(format!(
                "need at least 4 panels, got {panels}"
            )));
        }
        if !(hi > lo) || !hi.is_finite() || !lo.is_finite() {
            return Err(Error::InvalidGrid(format!("empty interval [{lo}, {hi}]")));
        }
        let h = (hi - lo) / panels as f64;
        let nodes: Vec<f64> = (0..=panels)
            .map(|j| if j == panels { hi } else { lo + h * j as f64 })
            .collect();
        let mut weights = vec![h; panels + 1];
        weights[0] = 0.5 * h;
        weights[panels] = 0.5 * h;
        Ok(VerticalGrid {
            kind,
            nodes,
            weights,
            spacing: h,
        })
    }

    pub fn strip(panels: usize) -> Result<Self> {
        Self::uniform(VerticalKind::Strip, 0.0, 1.0, panels)
    }

    pub fn half_line(zmax: f64, panels: usize) -> Result<Self> {
        Self::uniform(VerticalKind::HalfLine, 0.0, zmax, panels)
    }

    pub fn reflected_line(zmax: f64, panels: usize) -> Result<Self> {
        Self::uniform(VerticalKind::ReflectedLine, -zmax, zmax, panels)
    }

    pub fn kind(&self) -> VerticalKind {
        self.kind
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn panels(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn lower(&self) -> f64 {
        self.nodes[0]
    }

    pub fn upper(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }
}

/// Uniform time grid `t_n = n·t0/nt`, `n = 0..=nt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    horizon: f64,
    steps: usize,
}

impl TimeGrid {
    pub fn new(horizon: f64, steps: usize) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "horizon {horizon} must be positive"
            )));
        }
        if steps < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 time steps, got {steps}"
            )));
        }
        Ok(TimeGrid { horizon, steps })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.steps as f64
    }

    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node(&self, n: usize) -> f64 {
        if n == self.steps {
            self.horizon
        } else {
            self.dt() * n as f64
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len()).map(|n| self.node(n)).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        let mut w = vec![self.dt(); self.len()];
        w[0] *= 0.5;
        w[self.steps] *= 0.5;
        w
    }
}

/// The shared grids a field lives on.
#[derive(Debug, Clone)]
pub struct FieldLayout {
    pub lattice: Arc<WavenumberLattice>,
    pub vgrid: Arc<VerticalGrid>,
    pub tgrid: TimeGrid,
}

impl FieldLayout {
    pub fn new(lattice: WavenumberLattice, vgrid: VerticalGrid, tgrid: TimeGrid) -> Self {
        FieldLayout {
            lattice: Arc::new(lattice),
            vgrid: Arc::new(vgrid),
            tgrid,
        }
    }

    pub fn with_vgrid(&self, vgrid: VerticalGrid) -> Self {
        FieldLayout {
            lattice: self.lattice.clone(),
            vgrid: Arc::new(vgrid),
            tgrid: self.tgrid,
        }
    }

    pub fn same_as(&self, other: &FieldLayout) -> bool {
        (Arc::ptr_eq(&self.lattice, &other.lattice) || self.lattice == other.lattice)
            && (Arc::ptr_eq(&self.vgrid, &other.vgrid) || self.vgrid == other.vgrid)
            && self.tgrid == other.tgrid
    }

    pub fn check_same(&self, other: &FieldLayout) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::Incompatible(
                "fields live on different grids or bands".into(),
            ))
        }
    }
}
