//! Structured Q8 mesh of the wall-soil site, construction staging and the
//! wave-resolution check.
//!
//! Coordinates: x to the right with the excavated side on the left, y up
//! from the model base. The wall occupies one column of elements.

use crate::constitutive::ElasticParams;
use crate::error::{Error, Result};
use crate::fem::{ElementGeometry, ElementQ8, QuadratureRule, RegionTag};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

pub const SOIL_MATERIAL: usize = 0;
pub const WALL_MATERIAL: usize = 1;

/// Largest ratio between neighbouring element sizes in graded segments.
pub const MAX_GROWTH: f64 = 1.2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SiteConfig {
    pub retained_height: f64,
    pub embedment: f64,
    pub wall_thickness: f64,
    pub soil_front_width: f64,
    pub soil_back_width: f64,
    pub depth_below_wall: f64,
    pub element_size_min: f64,
    pub element_size_max: f64,
    /// Element height along the wall, toe to surface.
    pub wall_zone_element_height: f64,
    /// Excavation depths from the top, in order.
    pub excavation_lifts: Vec<f64>,
}

impl Default for SiteConfig {
    fn default() -> Self {
        Self {
            retained_height: 6.0,
            embedment: 5.0,
            wall_thickness: 0.5,
            soil_front_width: 12.0,
            soil_back_width: 26.0,
            depth_below_wall: 4.0,
            element_size_min: 0.25,
            element_size_max: 1.0,
            wall_zone_element_height: 0.5,
            excavation_lifts: vec![3.0, 3.0],
        }
    }
}

impl SiteConfig {
    /// Coarse variant (about 300 elements) for quick studies.
    pub fn coarse() -> Self {
        Self {
            element_size_min: 1.0,
            element_size_max: 2.0,
            wall_zone_element_height: 1.0,
            ..Self::default()
        }
    }

    pub fn total_height(&self) -> f64 {
        self.retained_height + self.embedment + self.depth_below_wall
    }

    pub fn total_width(&self) -> f64 {
        self.soil_front_width + self.wall_thickness + self.soil_back_width
    }

    pub fn toe_y(&self) -> f64 {
        self.depth_below_wall
    }

    pub fn dredge_y(&self) -> f64 {
        self.depth_below_wall + self.embedment
    }

    pub fn wall_front_x(&self) -> f64 {
        self.soil_front_width
    }

    pub fn wall_back_x(&self) -> f64 {
        self.soil_front_width + self.wall_thickness
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("retained_height", self.retained_height),
            ("embedment", self.embedment),
            ("wall_thickness", self.wall_thickness),
            ("soil_front_width", self.soil_front_width),
            ("soil_back_width", self.soil_back_width),
            ("element_size_min", self.element_size_min),
            ("element_size_max", self.element_size_max),
            ("wall_zone_element_height", self.wall_zone_element_height),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.depth_below_wall >= 0.0) {
            return Err(Error::InvalidParameter("depth_below_wall must be non-negative".into()));
        }
        if self.element_size_min > self.element_size_max {
            return Err(Error::InvalidParameter("element_size_min exceeds element_size_max".into()));
        }
        if self.excavation_lifts.iter().any(|d| !(*d > 0.0)) {
            return Err(Error::InvalidParameter("excavation lifts must be positive".into()));
        }
        if !self.excavation_lifts.is_empty() {
            let sum: f64 = self.excavation_lifts.iter().sum();
            if (sum - self.retained_height).abs() > 1e-9 {
                return Err(Error::InvalidParameter(format!(
                    "excavation lifts sum to {sum} m but the retained height is {} m",
                    self.retained_height
                )));
            }
        }
        Ok(())
    }

    /// Elevations separating consecutive lifts, from the surface down.
    pub fn lift_boundaries(&self) -> Vec<f64> {
        let mut y = self.total_height();
        let mut out = vec![y];
        for d in &self.excavation_lifts {
            y -= d;
            out.push(y);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundarySet {
    Base,
    LeftSide,
    RightSide,
    Surface,
}

/// Element grid metadata for a structured mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub x_lines: Vec<f64>,
    pub y_lines: Vec<f64>,
    /// Element column holding the wall, if any.
    pub wall_column: Option<usize>,
}

impl Grid {
    pub fn n_cols(&self) -> usize {
        self.x_lines.len() - 1
    }

    pub fn n_rows(&self) -> usize {
        self.y_lines.len() - 1
    }

    /// Elements are numbered column by column, bottom to top.
    pub fn element_at(&self, col: usize, row: usize) -> usize {
        col * self.n_rows() + row
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub nodes: Vec<[f64; 2]>,
    pub elements: Vec<ElementQ8>,
    pub base: Vec<usize>,
    pub left_side: Vec<usize>,
    pub right_side: Vec<usize>,
    pub surface: Vec<usize>,
    pub grid: Grid,
}

impl Mesh {
    pub fn boundary(&self, set: BoundarySet) -> &[usize] {
        match set {
            BoundarySet::Base => &self.base,
            BoundarySet::LeftSide => &self.left_side,
            BoundarySet::RightSide => &self.right_side,
            BoundarySet::Surface => &self.surface,
        }
    }

    pub fn element_coords(&self, e: usize) -> [[f64; 2]; 8] {
        let ids = &self.elements[e].node_ids;
        std::array::from_fn(|a| self.nodes[ids[a]])
    }

    pub fn geometry(&self, e: usize, rule: &QuadratureRule) -> Result<ElementGeometry> {
        ElementGeometry::new(e, &self.element_coords(e), rule)
    }

    pub fn centroid(&self, e: usize) -> [f64; 2] {
        let c = self.element_coords(e);
        [0.25 * (c[0][0] + c[1][0] + c[2][0] + c[3][0]), 0.25 * (c[0][1] + c[1][1] + c[2][1] + c[3][1])]
    }

    /// Longest of the four element edges (straight edges assumed).
    pub fn max_edge(&self, e: usize) -> f64 {
        let c = self.element_coords(e);
        (0..4)
            .map(|k| {
                let (a, b) = (c[k], c[(k + 1) % 4]);
                (a[0] - b[0]).hypot(a[1] - b[1])
            })
            .fold(0.0, f64::max)
    }

    pub fn region_counts(&self) -> std::collections::BTreeMap<RegionTag, usize> {
        let mut m = std::collections::BTreeMap::new();
        for el in &self.elements {
            *m.entry(el.region_tag).or_insert(0) += 1;
        }
        m
    }

    pub fn nearest_node(&self, p: [f64; 2]) -> usize {
        let mut best = (f64::INFINITY, 0);
        for (i, n) in self.nodes.iter().enumerate() {
            let d = (n[0] - p[0]).hypot(n[1] - p[1]);
            if d < best.0 {
                best = (d, i);
            }
        }
        best.1
    }

    /// Plain-text dump: node table, element table, region table.
    pub fn export_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# sheetpile mesh v1");
        let _ = writeln!(s, "nodes {}", self.nodes.len());
        for (i, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(s, "{i} {:.6} {:.6}", n[0], n[1]);
        }
        let _ = writeln!(s, "elements {}", self.elements.len());
        for (i, e) in self.elements.iter().enumerate() {
            let ids: Vec<String> = e.node_ids.iter().map(|n| n.to_string()).collect();
            let _ = writeln!(s, "{i} {} {} {}", e.material_id, e.region_tag.label(), ids.join(" "));
        }
        let counts = self.region_counts();
        let _ = writeln!(s, "regions {}", counts.len());
        for (tag, n) in counts {
            let _ = writeln!(s, "{} {n}", tag.label());
        }
        for (name, set) in [
            ("base", &self.base),
            ("left", &self.left_side),
            ("right", &self.right_side),
            ("surface", &self.surface),
        ] {
            let ids: Vec<String> = set.iter().map(|n| n.to_string()).collect();
            let _ = writeln!(s, "boundary {name} {}", ids.join(" "));
        }
        s
    }
}

/// Element sizes filling `length`, starting at `first` and growing by at
/// most `MAX_GROWTH` per element up to `cap`.
pub fn graded_sizes(length: f64, first: f64, cap: f64) -> Result<Vec<f64>> {
    if !(length > 0.0) {
        return Err(Error::Mesh(format!("cannot grade a segment of length {length}")));
    }
    if length <= first * (1.0 + 1e-9) {
        return Ok(vec![length]);
    }
    let seq = |n: usize, r: f64| -> f64 { (0..n).map(|i| (first * r.powi(i as i32)).min(cap)).sum() };
    let mut n = 1;
    while seq(n, MAX_GROWTH) < length {
        n += 1;
    }
    if seq(n, 1.0) > length {
        // uniform elements of the first size overshoot: shrink uniformly
        let n = (length / first).round().max(1.0) as usize;
        return Ok(vec![length / n as f64; n]);
    }
    let (mut lo, mut hi) = (1.0, MAX_GROWTH);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if seq(n, mid) < length {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = 0.5 * (lo + hi);
    let mut sizes: Vec<f64> = (0..n).map(|i| (first * r.powi(i as i32)).min(cap)).collect();
    // absorb the bisection residue in the last element
    let sum: f64 = sizes.iter().sum();
    *sizes.last_mut().expect("n >= 1") += length - sum;
    Ok(sizes)
}

/// Uniform subdivision with element size not above `size`.
pub fn uniform_sizes(length: f64, size: f64) -> Vec<f64> {
    let n = ((length / size) - 1e-9).ceil().max(1.0) as usize;
    vec![length / n as f64; n]
}

fn lines_from(start: f64, sizes: &[f64]) -> Vec<f64> {
    let mut out = vec![start];
    let mut x = start;
    for s in sizes {
        x += s;
        out.push(x);
    }
    out
}

/// Structured Q8 mesh over the tensor grid `x_lines × y_lines`.
/// `classify(centroid)` returns `(region, material)` per element.
pub fn build_grid_mesh<F>(x_lines: &[f64], y_lines: &[f64], mut classify: F) -> Result<Mesh>
where
    F: FnMut([f64; 2]) -> (RegionTag, usize),
{
    let nc = x_lines.len().checked_sub(1).filter(|n| *n > 0).ok_or_else(|| Error::Mesh("need two x lines".into()))?;
    let nr = y_lines.len().checked_sub(1).filter(|n| *n > 0).ok_or_else(|| Error::Mesh("need two y lines".into()))?;
    for w in x_lines.windows(2).chain(y_lines.windows(2)) {
        if !(w[1] > w[0]) {
            return Err(Error::Mesh("grid lines must increase strictly".into()));
        }
    }
    // node lines: even index = element corner line, odd = midside line
    let xs: Vec<f64> = (0..=2 * nc)
        .map(|i| if i % 2 == 0 { x_lines[i / 2] } else { 0.5 * (x_lines[i / 2] + x_lines[i / 2 + 1]) })
        .collect();
    let ys: Vec<f64> = (0..=2 * nr)
        .map(|j| if j % 2 == 0 { y_lines[j / 2] } else { 0.5 * (y_lines[j / 2] + y_lines[j / 2 + 1]) })
        .collect();
    let full = 2 * nr + 1;
    let half = nr + 1;
    // offset of each vertical node line
    let mut offset = Vec::with_capacity(2 * nc + 2);
    let mut acc = 0;
    for i in 0..=2 * nc {
        offset.push(acc);
        acc += if i % 2 == 0 { full } else { half };
    }
    let id = |i: usize, j: usize| -> usize {
        if i % 2 == 0 {
            offset[i] + j
        } else {
            debug_assert!(j % 2 == 0);
            offset[i] + j / 2
        }
    };
    let mut nodes = Vec::with_capacity(acc);
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in ys.iter().enumerate() {
            if i % 2 == 0 || j % 2 == 0 {
                nodes.push([x, y]);
            }
        }
    }
    debug_assert_eq!(nodes.len(), acc);
    let mut elements = Vec::with_capacity(nc * nr);
    for c in 0..nc {
        for r in 0..nr {
            let (i0, j0) = (2 * c, 2 * r);
            let node_ids = [
                id(i0, j0),
                id(i0 + 2, j0),
                id(i0 + 2, j0 + 2),
                id(i0, j0 + 2),
                id(i0 + 1, j0),
                id(i0 + 2, j0 + 1),
                id(i0 + 1, j0 + 2),
                id(i0, j0 + 1),
            ];
            let centroid = [0.5 * (x_lines[c] + x_lines[c + 1]), 0.5 * (y_lines[r] + y_lines[r + 1])];
            let (region_tag, material_id) = classify(centroid);
            elements.push(ElementQ8 {
                node_ids,
                region_tag,
                material_id,
            });
        }
    }
    let base = (0..=2 * nc).map(|i| id(i, 0)).collect();
    let surface = (0..=2 * nc).map(|i| id(i, 2 * nr)).collect();
    let left_side = (0..=2 * nr).map(|j| id(0, j)).collect();
    let right_side = (0..=2 * nr).map(|j| id(2 * nc, j)).collect();
    Ok(Mesh {
        nodes,
        elements,
        base,
        left_side,
        right_side,
        surface,
        grid: Grid {
            x_lines: x_lines.to_vec(),
            y_lines: y_lines.to_vec(),
            wall_column: None,
        },
    })
}

/// Builds the graded site mesh with region tags and boundary sets.
pub fn build_site_mesh(cfg: &SiteConfig) -> Result<Mesh> {
    cfg.validate()?;
    let (smin, smax) = (cfg.element_size_min, cfg.element_size_max);

    let mut front = graded_sizes(cfg.soil_front_width, smin, smax)?;
    front.reverse();
    let mut x_lines = lines_from(0.0, &front);
    x_lines.push(cfg.wall_back_x());
    let back = graded_sizes(cfg.soil_back_width, smin, smax)?;
    let tail = lines_from(cfg.wall_back_x(), &back);
    x_lines.extend_from_slice(&tail[1..]);
    let wall_column = front.len();

    let dy = cfg.wall_zone_element_height;
    let mut y_lines = vec![0.0];
    if cfg.depth_below_wall > 0.0 {
        let mut below = graded_sizes(cfg.depth_below_wall, dy.min(smax), smax)?;
        below.reverse();
        y_lines = lines_from(0.0, &below);
    }
    // wall zone: embedment then each lift (or the whole retained height)
    let mut segments = vec![cfg.embedment];
    if cfg.excavation_lifts.is_empty() {
        segments.push(cfg.retained_height);
    } else {
        segments.extend(cfg.excavation_lifts.iter().rev());
    }
    for seg in segments {
        let start = *y_lines.last().expect("non-empty");
        let l = lines_from(start, &uniform_sizes(seg, dy));
        y_lines.extend_from_slice(&l[1..]);
    }
    // snap the key elevations to remove accumulated round-off
    *y_lines.last_mut().expect("non-empty") = cfg.total_height();

    let toe = cfg.toe_y();
    let dredge = cfg.dredge_y();
    let (wx0, wx1) = (cfg.wall_front_x(), cfg.wall_back_x());
    let lifts = cfg.lift_boundaries();
    let mut mesh = build_grid_mesh(&x_lines, &y_lines, |[x, y]| {
        if x > wx0 && x < wx1 && y > toe {
            return (RegionTag::Wall, WALL_MATERIAL);
        }
        if x < wx0 && y > dredge {
            if cfg.excavation_lifts.is_empty() {
                return (RegionTag::Foundation, SOIL_MATERIAL);
            }
            let k = lifts.windows(2).position(|w| y < w[0] && y > w[1]).map_or(1, |k| k + 1);
            return (RegionTag::ExcavationLift(k), SOIL_MATERIAL);
        }
        if x > wx1 && y > toe {
            return (RegionTag::Backfill, SOIL_MATERIAL);
        }
        (RegionTag::Foundation, SOIL_MATERIAL)
    })?;
    mesh.grid.wall_column = Some(wall_column);
    let rule = QuadratureRule::full();
    for e in 0..mesh.elements.len() {
        mesh.geometry(e, &rule)?;
    }
    Ok(mesh)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stage {
    pub label: String,
    /// Elements removed at the start of this stage.
    pub deactivate: Vec<usize>,
}

/// Geostatic stage followed by one excavation stage per lift.
pub fn stage_plan(cfg: &SiteConfig, mesh: &Mesh) -> Result<Vec<Stage>> {
    cfg.validate()?;
    let mut stages = vec![Stage {
        label: "geostatic".into(),
        deactivate: Vec::new(),
    }];
    for k in 1..=cfg.excavation_lifts.len() {
        let ids: Vec<usize> = mesh
            .elements
            .iter()
            .enumerate()
            .filter(|(_, e)| e.region_tag == RegionTag::ExcavationLift(k))
            .map(|(i, _)| i)
            .collect();
        if ids.is_empty() {
            return Err(Error::Mesh(format!("lift {k} contains no elements")));
        }
        stages.push(Stage {
            label: format!("excavate lift {k}"),
            deactivate: ids,
        });
    }
    Ok(stages)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveFailure {
    pub element: usize,
    pub edge: f64,
    pub required: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveResolutionReport {
    pub f_cutoff: f64,
    /// Size limit `V_s / (8 f)` per material id.
    pub limits: Vec<f64>,
    pub checked: usize,
    pub failures: Vec<WaveFailure>,
}

impl WaveResolutionReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Shear-wave size limit `V_s / (8 f)`; infinite at zero frequency.
pub fn wave_size_limit(ep: &ElasticParams, f_cutoff: f64) -> f64 {
    if f_cutoff <= 0.0 {
        f64::INFINITY
    } else {
        ep.shear_wave_velocity() / (8.0 * f_cutoff)
    }
}

/// Checks every element's longest edge against one eighth of the shortest
/// shear wavelength at `f_cutoff`.
pub fn wave_resolution_check(mesh: &Mesh, materials: &[ElasticParams], f_cutoff: f64) -> WaveResolutionReport {
    let limits: Vec<f64> = materials.iter().map(|m| wave_size_limit(m, f_cutoff)).collect();
    let mut failures = Vec::new();
    for (i, el) in mesh.elements.iter().enumerate() {
        let edge = mesh.max_edge(i);
        let required = limits[el.material_id];
        if edge > required {
            failures.push(WaveFailure {
                element: i,
                edge,
                required,
            });
        }
    }
    WaveResolutionReport {
        f_cutoff,
        limits,
        checked: mesh.elements.len(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn two_by_two_grid_counts() {
        let m = build_grid_mesh(&[0.0, 1.0, 2.0], &[0.0, 1.0, 2.0], |_| (RegionTag::Foundation, 0)).unwrap();
        assert_eq!(m.elements.len(), 4);
        // 5x5 lattice minus the 4 element centres
        assert_eq!(m.nodes.len(), 21);
    }

    #[test]
    fn default_site_dimensions_and_regions() {
        let cfg = SiteConfig::default();
        let m = build_site_mesh(&cfg).unwrap();
        let xmax = m.nodes.iter().map(|n| n[0]).fold(0.0, f64::max);
        let ymax = m.nodes.iter().map(|n| n[1]).fold(0.0, f64::max);
        assert!((xmax - 38.5).abs() < 1e-9);
        assert!((ymax - 15.0).abs() < 1e-9);
        let n = m.elements.len();
        assert!(n >= 403 && n <= 1612, "{n} elements");
        let counts = m.region_counts();
        for tag in [
            RegionTag::Wall,
            RegionTag::Backfill,
            RegionTag::Foundation,
            RegionTag::ExcavationLift(1),
            RegionTag::ExcavationLift(2),
        ] {
            assert!(counts.get(&tag).copied().unwrap_or(0) > 0, "{tag:?} empty");
        }
        assert_eq!(counts.values().sum::<usize>(), n);
        // wall: one contiguous 0.5 m column spanning 11 m
        let wall: Vec<usize> = (0..n).filter(|&e| m.elements[e].region_tag == RegionTag::Wall).collect();
        let col = m.grid.wall_column.unwrap();
        let nr = m.grid.n_rows();
        for (k, &e) in wall.iter().enumerate() {
            assert_eq!(e / nr, col);
            if k > 0 {
                assert_eq!(e, wall[k - 1] + 1);
            }
        }
        let h: f64 = wall.iter().map(|&e| m.geometry(e, &QuadratureRule::full()).unwrap().area() / 0.5).sum();
        assert!((h - 11.0).abs() < 1e-9);
    }

    #[test]
    fn edge_lengths_in_range() {
        let cfg = SiteConfig::default();
        let m = build_site_mesh(&cfg).unwrap();
        for w in m.grid.x_lines.windows(2).chain(m.grid.y_lines.windows(2)) {
            let s = w[1] - w[0];
            assert!(s >= cfg.element_size_min - 1e-9 && s <= cfg.element_size_max + 1e-9, "size {s}");
        }
        for k in 2..m.grid.x_lines.len() {
            let (a, b) = (m.grid.x_lines[k - 1] - m.grid.x_lines[k - 2], m.grid.x_lines[k] - m.grid.x_lines[k - 1]);
            // the wall column itself is exempt from the growth limit
            let wall = m.grid.wall_column.unwrap() + 1;
            if k != wall && k != wall + 1 {
                assert!(a / b <= MAX_GROWTH + 1e-6 && b / a <= MAX_GROWTH + 1e-6, "jump at line {k}");
            }
        }
    }

    #[test]
    fn conforming_shared_edges() {
        let m = build_site_mesh(&SiteConfig::coarse()).unwrap();
        // every edge (corner pair) maps to one midside node from both sides
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut uses: HashMap<(usize, usize), usize> = HashMap::new();
        for e in &m.elements {
            let n = e.node_ids;
            for k in 0..4 {
                let (a, b) = (n[k], n[(k + 1) % 4]);
                let key = (a.min(b), a.max(b));
                let mid = n[4 + k];
                if let Some(prev) = seen.insert(key, mid) {
                    assert_eq!(prev, mid);
                }
                *uses.entry(key).or_insert(0) += 1;
            }
        }
        assert!(uses.values().all(|&u| u <= 2));
        // no node is unused
        let mut used = vec![false; m.nodes.len()];
        for e in &m.elements {
            for &n in &e.node_ids {
                used[n] = true;
            }
        }
        assert!(used.iter().all(|u| *u));
    }

    #[test]
    fn deterministic_build() {
        let a = build_site_mesh(&SiteConfig::default()).unwrap();
        let b = build_site_mesh(&SiteConfig::default()).unwrap();
        assert_eq!(a.export_text(), b.export_text());
        assert_eq!(a, b);
    }

    #[test]
    fn lift_sum_must_match() {
        let cfg = SiteConfig {
            excavation_lifts: vec![3.0, 2.0],
            ..SiteConfig::default()
        };
        assert!(matches!(build_site_mesh(&cfg), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn staging_variants() {
        let cfg = SiteConfig::default();
        let m = build_site_mesh(&cfg).unwrap();
        let stages = stage_plan(&cfg, &m).unwrap();
        assert_eq!(stages.len(), 3);
        for &e in &stages[1].deactivate {
            let c = m.centroid(e);
            assert!(c[1] > 12.0 && c[0] < 12.0);
        }
        for &e in &stages[2].deactivate {
            let c = m.centroid(e);
            assert!(c[1] > 9.0 && c[1] < 12.0 && c[0] < 12.0);
            assert!(!stages[1].deactivate.contains(&e));
        }

        let none = SiteConfig {
            excavation_lifts: vec![],
            ..SiteConfig::default()
        };
        let m = build_site_mesh(&none).unwrap();
        assert_eq!(stage_plan(&none, &m).unwrap().len(), 1);

        let one = SiteConfig {
            excavation_lifts: vec![6.0],
            ..SiteConfig::default()
        };
        let m = build_site_mesh(&one).unwrap();
        let s = stage_plan(&one, &m).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s[1].deactivate.iter().all(|&e| m.centroid(e)[1] > 9.0));
    }

    #[test]
    fn wave_rule() {
        let soil = ElasticParams::new(163.13, 0.26, 2000.0).unwrap();
        let wall = ElasticParams::new(30000.0, 0.2, 2400.0).unwrap();
        assert!((wave_size_limit(&soil, 15.0) - 1.499).abs() < 5e-4);
        assert!((wave_size_limit(&soil, 45.0) - 0.4997).abs() < 5e-4);
        let m = build_site_mesh(&SiteConfig::default()).unwrap();
        assert!(wave_resolution_check(&m, &[soil, wall], 15.0).passes());
        let r = wave_resolution_check(&m, &[soil, wall], 45.0);
        assert!(!r.passes());
        assert!(r.failures.iter().all(|f| f.edge > 0.4997));
        assert!(wave_resolution_check(&m, &[soil, wall], 0.0).passes());
    }

    #[test]
    fn grading_fills_segment() {
        let s = graded_sizes(12.0, 0.25, 1.0).unwrap();
        assert!((s.iter().sum::<f64>() - 12.0).abs() < 1e-12);
        assert!((s[0] - 0.25).abs() < 1e-12);
        assert!(s.iter().all(|v| *v <= 1.0 + 1e-9));
    }
}
