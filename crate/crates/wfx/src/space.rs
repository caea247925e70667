//! Finite discretized measure spaces and grid functions.
//!
//! A space is a 1-d line of `n` cells of width `h`, or a 2-d plane of
//! `nx * ny` square cells, each cell carrying a strictly positive mass.
//! Lebesgue measure assigns every cell the mass `h` (resp. `h^2`); arbitrary
//! positive cell masses model non-doubling measures. Functions are constant
//! on cells, so every integral in the crate is a finite weighted sum.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::numeric::{pairwise_sum, pairwise_sum_by, powf_pos};
use crate::{Error, Result};

/// Immutable grid + measure. Cells are indexed row-major: `iy * nx + ix`.
#[derive(Debug)]
pub struct MeasureSpace {
    dim: u8,
    nx: usize,
    ny: usize,
    cell_width: f64,
    mu: Vec<f64>,
    total: f64,
}

/// Shared handle; everything downstream holds one of these.
pub type SpaceRef = Arc<MeasureSpace>;

fn check_side(name: &'static str, n: usize) -> Result<()> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::invalid(
            name,
            format!("grid side must be a power of two, got {n}"),
        ));
    }
    Ok(())
}

fn check_width(h: f64) -> Result<()> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::invalid("h", format!("cell width must be positive, got {h}")));
    }
    Ok(())
}

fn check_masses(mu: &[f64]) -> Result<f64> {
    for (i, &m) in mu.iter().enumerate() {
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::BadWeight { index: i, value: m });
        }
    }
    Ok(pairwise_sum(mu))
}

impl MeasureSpace {
    /// 1-d line, Lebesgue cell masses `h`.
    pub fn line(n: usize, h: f64) -> Result<SpaceRef> {
        Self::line_with_masses(n, h, vec![h; n])
    }

    /// 1-d line with explicit per-cell masses.
    pub fn line_with_masses(n: usize, h: f64, mu: Vec<f64>) -> Result<SpaceRef> {
        check_side("n", n)?;
        check_width(h)?;
        if mu.len() != n {
            return Err(Error::invalid(
                "mu",
                format!("expected {n} cell masses, got {}", mu.len()),
            ));
        }
        let total = check_masses(&mu)?;
        Ok(Arc::new(MeasureSpace { dim: 1, nx: n, ny: 1, cell_width: h, mu, total }))
    }

    /// 2-d plane of `nx * ny` cells, Lebesgue cell masses `h^2`.
    pub fn plane(nx: usize, ny: usize, h: f64) -> Result<SpaceRef> {
        Self::plane_with_masses(nx, ny, h, vec![h * h; nx * ny])
    }

    /// 2-d plane with explicit per-cell masses (row-major).
    pub fn plane_with_masses(nx: usize, ny: usize, h: f64, mu: Vec<f64>) -> Result<SpaceRef> {
        check_side("nx", nx)?;
        check_side("ny", ny)?;
        check_width(h)?;
        if mu.len() != nx * ny {
            return Err(Error::invalid(
                "mu",
                format!("expected {} cell masses, got {}", nx * ny, mu.len()),
            ));
        }
        let total = check_masses(&mu)?;
        Ok(Arc::new(MeasureSpace { dim: 2, nx, ny, cell_width: h, mu, total }))
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    /// Number of cells.
    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction enforces n >= 1
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn cell_width(&self) -> f64 {
        self.cell_width
    }

    pub fn mass(&self, i: usize) -> f64 {
        self.mu[i]
    }

    pub fn masses(&self) -> &[f64] {
        &self.mu
    }

    pub fn total_mass(&self) -> f64 {
        self.total
    }

    /// Center coordinate of cell `i` (x component; 1-d convenience).
    pub fn center_x(&self, i: usize) -> f64 {
        ((i % self.nx) as f64 + 0.5) * self.cell_width
    }

    /// Center of cell `i` as (x, y); y is 0.5*h on a line.
    pub fn center(&self, i: usize) -> (f64, f64) {
        let ix = i % self.nx;
        let iy = i / self.nx;
        (
            (ix as f64 + 0.5) * self.cell_width,
            (iy as f64 + 0.5) * self.cell_width,
        )
    }

    /// Structural equality of the underlying grid and measure.
    pub fn same_grid(&self, other: &MeasureSpace) -> bool {
        self.dim == other.dim
            && self.nx == other.nx
            && self.ny == other.ny
            && self.cell_width == other.cell_width
            && self.mu == other.mu
    }

    pub fn descriptor(&self) -> SpaceDescriptor {
        let lebesgue = {
            let unit = powf_pos(self.cell_width, self.dim as f64);
            self.mu.iter().all(|&m| m == unit)
        };
        SpaceDescriptor {
            dim: self.dim,
            n: if self.dim == 1 { vec![self.nx] } else { vec![self.nx, self.ny] },
            h: self.cell_width,
            mu: if lebesgue {
                MuDescriptor::Named("lebesgue".into())
            } else {
                MuDescriptor::Cells(self.mu.clone())
            },
        }
    }
}

/// Serializable description of a space, as accepted on the command line.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpaceDescriptor {
    pub dim: u8,
    pub n: Vec<usize>,
    pub h: f64,
    #[serde(default)]
    pub mu: MuDescriptor,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MuDescriptor {
    Named(String),
    Cells(Vec<f64>),
}

impl Default for MuDescriptor {
    fn default() -> Self {
        MuDescriptor::Named("lebesgue".into())
    }
}

impl SpaceDescriptor {
    pub fn build(&self) -> Result<SpaceRef> {
        let masses = |count: usize, unit: f64| -> Result<Vec<f64>> {
            match &self.mu {
                MuDescriptor::Named(name) if name == "lebesgue" => Ok(vec![unit; count]),
                MuDescriptor::Named(name) => Err(Error::invalid(
                    "mu",
                    format!("unknown measure name `{name}` (expected \"lebesgue\" or a cell-mass array)"),
                )),
                MuDescriptor::Cells(v) => Ok(v.clone()),
            }
        };
        match (self.dim, self.n.as_slice()) {
            (1, [n]) => MeasureSpace::line_with_masses(*n, self.h, masses(*n, self.h)?),
            (2, [nx, ny]) => {
                MeasureSpace::plane_with_masses(*nx, *ny, self.h, masses(nx * ny, self.h * self.h)?)
            }
            (d, n) => Err(Error::invalid(
                "dim",
                format!("dim {d} with {} grid sides is not supported", n.len()),
            )),
        }
    }
}

/// A function constant on the cells of a fixed space.
#[derive(Debug, Clone)]
pub struct GridFunction {
    space: SpaceRef,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(space: SpaceRef, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::SpaceMismatch(format!(
                "{} values on a space with {} cells",
                values.len(),
                space.len()
            )));
        }
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { index: i, value: v });
            }
        }
        Ok(GridFunction { space, values })
    }

    pub fn constant(space: SpaceRef, c: f64) -> Result<Self> {
        Self::new(space.clone(), vec![c; space.len()])
    }

    /// Indicator of a set of cell indices.
    pub fn indicator(space: SpaceRef, cells: &[usize]) -> Result<Self> {
        let mut values = vec![0.0; space.len()];
        for &i in cells {
            if i >= values.len() {
                return Err(Error::IndexOutOfRange { index: i, len: values.len() });
            }
            values[i] = 1.0;
        }
        Self::new(space, values)
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// Pointwise map. The closure must return finite values.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.space.clone(), self.values.iter().map(|&v| f(v)).collect())
    }

    /// Pointwise combination with another function on the same grid.
    pub fn zip_map(&self, other: &GridFunction, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if !self.space.same_grid(&other.space) {
            return Err(Error::SpaceMismatch("zip_map across different grids".into()));
        }
        Self::new(
            self.space.clone(),
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    pub fn abs(&self) -> Self {
        GridFunction {
            space: self.space.clone(),
            values: self.values.iter().map(|v| v.abs()).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        self.map(|v| c * v)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Integral over the whole space against the cell measure, optionally
    /// tilted by a weight: `sum f_i w_i mu_i`.
    pub fn integrate(&self, w: Option<&Weight>) -> Result<f64> {
        if let Some(w) = w {
            if !self.space.same_grid(w.function().space()) {
                return Err(Error::SpaceMismatch("integrate against a weight on a different grid".into()));
            }
        }
        let mu = self.space.masses();
        Ok(match w {
            None => pairwise_sum_by(self.values.len(), &|i| self.values[i] * mu[i]),
            Some(w) => {
                let wv = w.values();
                pairwise_sum_by(self.values.len(), &|i| self.values[i] * wv[i] * mu[i])
            }
        })
    }
}

/// A strictly positive, finite grid function.
#[derive(Debug, Clone)]
pub struct Weight(GridFunction);

impl Weight {
    pub fn new(f: GridFunction) -> Result<Self> {
        for (i, &v) in f.values().iter().enumerate() {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::BadWeight { index: i, value: v });
            }
        }
        Ok(Weight(f))
    }

    pub fn from_values(space: SpaceRef, values: Vec<f64>) -> Result<Self> {
        Self::new(GridFunction::new(space, values)?)
    }

    pub fn constant(space: SpaceRef, c: f64) -> Result<Self> {
        Self::new(GridFunction::constant(space, c)?)
    }

    pub fn function(&self) -> &GridFunction {
        &self.0
    }

    pub fn values(&self) -> &[f64] {
        self.0.values()
    }

    pub fn space(&self) -> &SpaceRef {
        self.0.space()
    }

    /// w^e through exp/ln; exact sign-safe for any real exponent.
    pub fn pow(&self, e: f64) -> Weight {
        Weight(GridFunction {
            space: self.0.space.clone(),
            values: self.0.values.iter().map(|&v| powf_pos(v, e)).collect(),
        })
    }

    pub fn recip(&self) -> Weight {
        self.pow(-1.0)
    }

    /// Pointwise product of two weights on the same grid.
    pub fn mul(&self, other: &Weight) -> Result<Weight> {
        Weight::new(self.0.zip_map(&other.0, |a, b| a * b)?)
    }
}

/// w-mass of a set of cells: `sum_{i in E} w_i mu_i` (mu-mass if `w` is None).
pub fn restrict_mass(space: &SpaceRef, cells: &[usize], w: Option<&Weight>) -> Result<f64> {
    if cells.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut acc = Vec::with_capacity(cells.len());
    for &i in cells {
        if i >= space.len() {
            return Err(Error::IndexOutOfRange { index: i, len: space.len() });
        }
        let wv = w.map_or(1.0, |w| w.values()[i]);
        acc.push(space.mass(i) * wv);
    }
    Ok(pairwise_sum(&acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_cells_integrate_to_count() {
        let s = MeasureSpace::line(8, 1.0).unwrap();
        let one = GridFunction::constant(s, 1.0).unwrap();
        assert_eq!(one.integrate(None).unwrap(), 8.0);
    }

    #[test]
    fn lebesgue_total_mass() {
        let s = MeasureSpace::line(256, 1.0 / 256.0).unwrap();
        assert!((s.total_mass() - 1.0).abs() < 1e-12);
        let p = MeasureSpace::plane(4, 4, 0.25).unwrap();
        assert!((p.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weighted_integral_and_restriction() {
        let s = MeasureSpace::line(4, 1.0).unwrap();
        let w = Weight::from_values(s.clone(), vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let f = GridFunction::new(s.clone(), vec![1.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(f.integrate(Some(&w)).unwrap(), 3.0);
        assert_eq!(restrict_mass(&s, &[0, 1], Some(&w)).unwrap(), 3.0);
        assert_eq!(restrict_mass(&s, &[2], None).unwrap(), 1.0);
    }

    #[test]
    fn descriptor_round_trip() {
        let s = MeasureSpace::line_with_masses(4, 0.5, vec![1.0, 2.0, 1.0, 0.5]).unwrap();
        let d = s.descriptor();
        let json = serde_json::to_string(&d).unwrap();
        let back: SpaceDescriptor = serde_json::from_str(&json).unwrap();
        let s2 = back.build().unwrap();
        assert!(s.same_grid(&s2));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(MeasureSpace::line(3, 1.0).is_err());
        assert!(MeasureSpace::line(0, 1.0).is_err());
        let s = MeasureSpace::line(2, 1.0).unwrap();
        assert!(Weight::from_values(s.clone(), vec![1.0, 0.0]).is_err());
        assert!(GridFunction::new(s, vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn weight_pow_round_trips() {
        let s = MeasureSpace::line(4, 1.0).unwrap();
        let w = Weight::from_values(s, vec![0.5, 2.0, 3.0, 7.0]).unwrap();
        let back = w.pow(-1.5).pow(-1.0 / 1.5);
        for (a, b) in w.values().iter().zip(back.values()) {
            assert!((a - b).abs() < 1e-12 * a);
        }
    }
}
