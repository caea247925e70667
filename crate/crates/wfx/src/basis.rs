//! Families of axis-parallel boxes ("bases") over a grid, and averages on
//! them. All the sup-type constants in the crate run over one of these
//! families.

use serde::{Deserialize, Serialize};

use crate::numeric::pairwise_sum_by;
use crate::space::{GridFunction, SpaceRef, Weight};
use crate::{Error, Result};

/// Hard cap on the number of enumerated boxes. Full rectangle families grow
/// like (nx ny)^2 / 4; past this point enumeration is refused rather than
/// silently truncated.
pub const ELEMENT_CAP: usize = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    /// Dyadic boxes: side a power of two, offset a multiple of the side.
    Dyadic,
    /// All contiguous cell intervals (1-d only).
    Intervals,
    /// All axis-parallel squares, any integer side and position.
    Cubes,
    /// All axis-parallel rectangles.
    Rectangles,
}

impl BasisKind {
    pub fn name(self) -> &'static str {
        match self {
            BasisKind::Dyadic => "dyadic",
            BasisKind::Intervals => "intervals",
            BasisKind::Cubes => "cubes",
            BasisKind::Rectangles => "rectangles",
        }
    }
}

impl std::str::FromStr for BasisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dyadic" => Ok(BasisKind::Dyadic),
            "intervals" => Ok(BasisKind::Intervals),
            "cubes" => Ok(BasisKind::Cubes),
            "rectangles" => Ok(BasisKind::Rectangles),
            other => Err(Error::invalid(
                "basis",
                format!("unknown basis kind `{other}` (dyadic|intervals|cubes|rectangles)"),
            )),
        }
    }
}

/// Half-open box of cells: `[x0, x1) x [y0, y1)`. On a line, `y0=0, y1=1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisElement {
    pub x0: u32,
    pub x1: u32,
    pub y0: u32,
    pub y1: u32,
}

impl BasisElement {
    pub fn cell_count(&self) -> usize {
        ((self.x1 - self.x0) as usize) * ((self.y1 - self.y0) as usize)
    }

    pub fn contains_cell(&self, nx: usize, cell: usize) -> bool {
        let ix = (cell % nx) as u32;
        let iy = (cell / nx) as u32;
        self.x0 <= ix && ix < self.x1 && self.y0 <= iy && iy < self.y1
    }

    /// Flat indices of the covered cells, row by row.
    pub fn cells(&self, nx: usize) -> impl Iterator<Item = usize> + '_ {
        let (x0, x1) = (self.x0 as usize, self.x1 as usize);
        (self.y0 as usize..self.y1 as usize)
            .flat_map(move |iy| (x0..x1).map(move |ix| iy * nx + ix))
    }

    /// JSON form: `[x0, x1]` on a line, `[x0, x1, y0, y1]` on a plane.
    pub fn json_box(&self, dim: u8) -> Vec<u32> {
        if dim == 1 {
            vec![self.x0, self.x1]
        } else {
            vec![self.x0, self.x1, self.y0, self.y1]
        }
    }
}

/// An enumerated basis over one space, with precomputed element mu-masses.
#[derive(Debug)]
pub struct Basis {
    kind: BasisKind,
    space: SpaceRef,
    elements: Vec<BasisElement>,
    masses: Vec<f64>,
}

/// Number of elements `enumerate` would produce, without allocating them.
fn census(space: &SpaceRef, kind: BasisKind) -> Result<usize> {
    let (nx, ny) = (space.nx(), space.ny());
    let intervals = |n: usize| n * (n + 1) / 2;
    match (space.dim(), kind) {
        (1, BasisKind::Dyadic) => Ok(2 * nx - 1),
        // On a line, squares and rectangles both degenerate to intervals.
        (1, _) => Ok(intervals(nx)),
        (2, BasisKind::Intervals) => Err(Error::BasisDimension { kind: "intervals", dim: 2 }),
        (2, BasisKind::Dyadic) => {
            let mut count = 0usize;
            let mut s = 1usize;
            while s <= nx && s <= ny {
                count += (nx / s) * (ny / s);
                s *= 2;
            }
            Ok(count)
        }
        (2, BasisKind::Cubes) => {
            let mut count = 0usize;
            for s in 1..=nx.min(ny) {
                count += (nx - s + 1) * (ny - s + 1);
            }
            Ok(count)
        }
        (2, BasisKind::Rectangles) => Ok(intervals(nx) * intervals(ny)),
        (d, k) => Err(Error::BasisDimension { kind: k.name(), dim: d }),
    }
}

/// Enumerate the boxes of `kind` over `space`.
pub fn enumerate(space: &SpaceRef, kind: BasisKind) -> Result<Basis> {
    let requested = census(space, kind)?;
    if requested > ELEMENT_CAP {
        return Err(Error::BasisCap { requested, cap: ELEMENT_CAP });
    }
    let (nx, ny) = (space.nx(), space.ny());
    let mut elements = Vec::with_capacity(requested);
    let push = |els: &mut Vec<BasisElement>, x0: usize, x1: usize, y0: usize, y1: usize| {
        els.push(BasisElement {
            x0: x0 as u32,
            x1: x1 as u32,
            y0: y0 as u32,
            y1: y1 as u32,
        });
    };
    match (space.dim(), kind) {
        (1, BasisKind::Dyadic) => {
            let mut s = 1usize;
            while s <= nx {
                for k in 0..nx / s {
                    push(&mut elements, k * s, (k + 1) * s, 0, 1);
                }
                s *= 2;
            }
        }
        (1, _) => {
            for x0 in 0..nx {
                for x1 in x0 + 1..=nx {
                    push(&mut elements, x0, x1, 0, 1);
                }
            }
        }
        (2, BasisKind::Dyadic) => {
            let mut s = 1usize;
            while s <= nx && s <= ny {
                for ky in 0..ny / s {
                    for kx in 0..nx / s {
                        push(&mut elements, kx * s, (kx + 1) * s, ky * s, (ky + 1) * s);
                    }
                }
                s *= 2;
            }
        }
        (2, BasisKind::Cubes) => {
            for s in 1..=nx.min(ny) {
                for y0 in 0..=ny - s {
                    for x0 in 0..=nx - s {
                        push(&mut elements, x0, x0 + s, y0, y0 + s);
                    }
                }
            }
        }
        (2, BasisKind::Rectangles) => {
            for y0 in 0..ny {
                for y1 in y0 + 1..=ny {
                    for x0 in 0..nx {
                        for x1 in x0 + 1..=nx {
                            push(&mut elements, x0, x1, y0, y1);
                        }
                    }
                }
            }
        }
        _ => unreachable!("census rejected this combination"),
    }
    debug_assert_eq!(elements.len(), requested);
    let table = PrefixTable::build(space, |i| space.mass(i));
    let masses = elements.iter().map(|b| table.box_sum(b)).collect();
    Ok(Basis { kind, space: space.clone(), elements, masses })
}

impl Basis {
    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &BasisElement {
        &self.elements[i]
    }

    /// mu-mass of element `i`.
    pub fn mass(&self, i: usize) -> f64 {
        self.masses[i]
    }
}

/// Summed-area table over cell values; box sums in O(1).
#[derive(Debug)]
pub struct PrefixTable {
    nx: usize,
    t: Vec<f64>,
}

impl PrefixTable {
    /// Build from per-cell values given by `cellwise` (flat index).
    pub fn build(space: &SpaceRef, cellwise: impl Fn(usize) -> f64) -> PrefixTable {
        let (nx, ny) = (space.nx(), space.ny());
        let w = nx + 1;
        let mut t = vec![0.0; w * (ny + 1)];
        for iy in 0..ny {
            let mut row = 0.0;
            for ix in 0..nx {
                row += cellwise(iy * nx + ix);
                t[(iy + 1) * w + (ix + 1)] = t[iy * w + (ix + 1)] + row;
            }
        }
        PrefixTable { nx, t }
    }

    /// Per-cell `f * w * mu` sums (the building block of weighted averages).
    pub fn of_integrand(space: &SpaceRef, f: &GridFunction, w: Option<&Weight>) -> PrefixTable {
        let fv = f.values();
        match w {
            None => Self::build(space, |i| fv[i] * space.mass(i)),
            Some(w) => {
                let wv = w.values();
                Self::build(space, |i| fv[i] * wv[i] * space.mass(i))
            }
        }
    }

    /// Per-cell `w * mu` sums.
    pub fn of_measure(space: &SpaceRef, w: Option<&Weight>) -> PrefixTable {
        match w {
            None => Self::build(space, |i| space.mass(i)),
            Some(w) => {
                let wv = w.values();
                Self::build(space, |i| wv[i] * space.mass(i))
            }
        }
    }

    pub fn box_sum(&self, b: &BasisElement) -> f64 {
        let w = self.nx + 1;
        let (x0, x1) = (b.x0 as usize, b.x1 as usize);
        let (y0, y1) = (b.y0 as usize, b.y1 as usize);
        self.t[y1 * w + x1] - self.t[y0 * w + x1] - self.t[y1 * w + x0] + self.t[y0 * w + x0]
    }
}

/// Average of `f` over the box `b`, against `w d(mu)` when a weight is given:
/// `(int_B f w dmu) / (int_B w dmu)`.
pub fn average(f: &GridFunction, b: &BasisElement, w: Option<&Weight>) -> Result<f64> {
    let space = f.space();
    if b.x1 as usize > space.nx() || b.y1 as usize > space.ny() || b.x0 >= b.x1 || b.y0 >= b.y1 {
        return Err(Error::invalid("box", format!("{b:?} does not fit the grid")));
    }
    if let Some(w) = w {
        if !space.same_grid(w.space()) {
            return Err(Error::SpaceMismatch("average weight on a different grid".into()));
        }
    }
    let cells: Vec<usize> = b.cells(space.nx()).collect();
    let fv = f.values();
    let num = pairwise_sum_by(cells.len(), &|k| {
        let i = cells[k];
        fv[i] * w.map_or(1.0, |w| w.values()[i]) * space.mass(i)
    });
    let den = pairwise_sum_by(cells.len(), &|k| {
        let i = cells[k];
        w.map_or(1.0, |w| w.values()[i]) * space.mass(i)
    });
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::MeasureSpace;

    #[test]
    fn counts_on_small_grids() {
        let line4 = MeasureSpace::line(4, 1.0).unwrap();
        assert_eq!(enumerate(&line4, BasisKind::Dyadic).unwrap().len(), 7);
        assert_eq!(enumerate(&line4, BasisKind::Intervals).unwrap().len(), 10);
        assert_eq!(enumerate(&line4, BasisKind::Cubes).unwrap().len(), 10);
        let plane4 = MeasureSpace::plane(4, 4, 1.0).unwrap();
        assert_eq!(enumerate(&plane4, BasisKind::Cubes).unwrap().len(), 30);
        assert_eq!(enumerate(&plane4, BasisKind::Dyadic).unwrap().len(), 21);
        assert_eq!(enumerate(&plane4, BasisKind::Rectangles).unwrap().len(), 100);
    }

    #[test]
    fn intervals_are_one_dimensional() {
        let plane = MeasureSpace::plane(4, 4, 1.0).unwrap();
        assert!(matches!(
            enumerate(&plane, BasisKind::Intervals),
            Err(Error::BasisDimension { .. })
        ));
    }

    #[test]
    fn rectangle_cap_is_enforced() {
        let plane = MeasureSpace::plane(256, 256, 1.0).unwrap();
        match enumerate(&plane, BasisKind::Rectangles) {
            Err(Error::BasisCap { requested, cap }) => {
                assert_eq!(cap, ELEMENT_CAP);
                assert_eq!(requested, 32896 * 32896);
            }
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn box_sums_match_scans() {
        let s = MeasureSpace::plane_with_masses(
            4,
            4,
            1.0,
            (1..=16).map(|i| i as f64).collect(),
        )
        .unwrap();
        let t = PrefixTable::build(&s, |i| s.mass(i));
        let b = BasisElement { x0: 1, x1: 3, y0: 0, y1: 2 };
        let direct: f64 = b.cells(4).map(|i| s.mass(i)).sum();
        assert!((t.box_sum(&b) - direct).abs() < 1e-12);
        assert_eq!(b.cell_count(), 4);
    }

    #[test]
    fn averages_plain_and_weighted() {
        let s = MeasureSpace::line(8, 1.0).unwrap();
        let f = GridFunction::indicator(s.clone(), &[0]).unwrap();
        let b = BasisElement { x0: 0, x1: 4, y0: 0, y1: 1 };
        assert!((average(&f, &b, None).unwrap() - 0.25).abs() < 1e-15);
        let mut wv = vec![1.0; 8];
        wv[0] = 2.0;
        let w = Weight::from_values(s, wv).unwrap();
        assert!((average(&f, &b, Some(&w)).unwrap() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn element_masses_precomputed() {
        let s = MeasureSpace::line(4, 0.5).unwrap();
        let b = enumerate(&s, BasisKind::Dyadic).unwrap();
        // Last dyadic element is the whole line.
        let last = b.len() - 1;
        assert_eq!(b.element(last).cell_count(), 4);
        assert!((b.mass(last) - 2.0).abs() < 1e-15);
    }
}
