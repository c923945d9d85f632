//! Cellular deployment: hexagonal site grid with tri-sector antennas,
//! uniform UE placement, and greedy small-cell group formation.

use crate::error::{require_positive, Result, SimError};
use crate::rng;
use rand::Rng;

pub const NUM_SITES: usize = 7;
pub const SECTORS_PER_SITE: usize = 3;
pub const NUM_SECTORS: usize = NUM_SITES * SECTORS_PER_SITE;
const SECTOR_AZIMUTHS_DEG: [f64; SECTORS_PER_SITE] = [0.0, 120.0, 240.0];

pub const DEFAULT_THETA_3DB_DEG: f64 = 70.0;
pub const DEFAULT_A_M_DB: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Bearing from `self` towards `to`, degrees in (-180, 180], 0 = +x axis.
    pub fn bearing_deg(&self, to: &Point) -> f64 {
        (to.y - self.y).atan2(to.x - self.x).to_degrees()
    }
}

/// Axis-aligned rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub min: Point,
    pub max: Point,
}

impl Rect {
    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn area_km2(&self) -> f64 {
        self.width() * self.height() / 1e6
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sector {
    pub id: usize,
    pub site: usize,
    pub azimuth_deg: f64,
}

/// Seven-site hexagonal layout (center site plus six neighbors at the
/// inter-site distance), three 120-degree sectors per site.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteGrid {
    pub isd_m: f64,
    pub sites: Vec<Point>,
    pub sectors: Vec<Sector>,
    pub theta_3db_deg: f64,
    pub a_m_db: f64,
}

pub fn build_hex_grid(isd_m: f64) -> Result<SiteGrid> {
    require_positive("isd_m", isd_m)?;
    let mut sites = vec![Point::new(0.0, 0.0)];
    for k in 0..6 {
        let ang = (60.0 * k as f64).to_radians();
        sites.push(Point::new(isd_m * ang.cos(), isd_m * ang.sin()));
    }
    let sectors = (0..NUM_SECTORS)
        .map(|id| Sector {
            id,
            site: id / SECTORS_PER_SITE,
            azimuth_deg: SECTOR_AZIMUTHS_DEG[id % SECTORS_PER_SITE],
        })
        .collect();
    Ok(SiteGrid {
        isd_m,
        sites,
        sectors,
        theta_3db_deg: DEFAULT_THETA_3DB_DEG,
        a_m_db: DEFAULT_A_M_DB,
    })
}

impl SiteGrid {
    pub fn with_antenna(mut self, theta_3db_deg: f64, a_m_db: f64) -> Result<Self> {
        require_positive("theta_3db_deg", theta_3db_deg)?;
        require_positive("a_m_db", a_m_db)?;
        self.theta_3db_deg = theta_3db_deg;
        self.a_m_db = a_m_db;
        Ok(self)
    }

    pub fn site_of_sector(&self, sector: usize) -> usize {
        self.sectors[sector].site
    }

    pub fn site_position_of_sector(&self, sector: usize) -> Point {
        self.sites[self.sectors[sector].site]
    }

    /// Sector antenna gain (dB, relative) towards an arbitrary point.
    pub fn sector_gain_db(&self, sector: usize, p: &Point) -> f64 {
        let s = &self.sectors[sector];
        let bearing = self.sites[s.site].bearing_deg(p);
        antenna_gain_db(bearing - s.azimuth_deg, self.theta_3db_deg, self.a_m_db)
    }

    /// Rectangle bounding the site positions; UE drop region.
    pub fn bounding_rect(&self) -> Rect {
        let mut min = Point::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for s in &self.sites {
            min.x = min.x.min(s.x);
            min.y = min.y.min(s.y);
            max.x = max.x.max(s.x);
            max.y = max.y.max(s.y);
        }
        Rect { min, max }
    }
}

/// Parabolic sector pattern with sidelobe floor:
/// `A(theta) = -min(12 (theta/theta_3dB)^2, A_m)` dB. The offset is
/// normalized to (-180, 180] first, so the function is total and even.
pub fn antenna_gain_db(offset_deg: f64, theta_3db_deg: f64, a_m_db: f64) -> f64 {
    let mut t = offset_deg.rem_euclid(360.0);
    if t > 180.0 {
        t -= 360.0;
    }
    -(12.0 * (t / theta_3db_deg).powi(2)).min(a_m_db)
}

/// Counting 3 BS (sectors) per site on a hex grid of inter-site distance
/// `isd_m`, the BS density in sectors per km^2.
pub fn bs_density_for_isd(isd_m: f64) -> f64 {
    let isd_km = isd_m / 1000.0;
    2.0 * 3f64.sqrt() / (isd_km * isd_km)
}

/// Inverse of [`bs_density_for_isd`]: inter-site distance (m) that yields the
/// requested sector density, with each site's hex cell of area
/// `(sqrt(3)/2) isd^2` hosting three sectors.
pub fn isd_for_bs_density(bs_per_km2: f64) -> Result<f64> {
    require_positive("bs_per_km2", bs_per_km2)?;
    Ok((2.0 * 3f64.sqrt() / bs_per_km2).sqrt() * 1000.0)
}

/// One realization of UE positions.
#[derive(Debug, Clone, PartialEq)]
pub struct UeDrop {
    pub positions: Vec<Point>,
    pub density_per_km2: f64,
    pub region: Rect,
    pub seed: u64,
}

impl UeDrop {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// Draws `round(density * area)` UEs i.i.d. uniform over the rectangle
/// bounding the site grid. Deterministic in `seed`.
pub fn place_ues(density_per_km2: f64, grid: &SiteGrid, seed: u64) -> Result<UeDrop> {
    if !(density_per_km2.is_finite() && density_per_km2 >= 0.0) {
        return Err(SimError::invalid(
            "density_per_km2",
            format!("must be finite and >= 0, got {density_per_km2}"),
        ));
    }
    let region = grid.bounding_rect();
    let count = (density_per_km2 * region.area_km2()).round() as usize;
    let mut rng = rng::stream(seed, 0x0bde_11ed);
    let positions = (0..count)
        .map(|_| {
            let x = rng.random_range(region.min.x..region.max.x);
            let y = rng.random_range(region.min.y..region.max.y);
            Point::new(x, y)
        })
        .collect();
    Ok(UeDrop {
        positions,
        density_per_km2,
        region,
        seed,
    })
}

/// A cooperating triple: two source UEs and a group head relaying for them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MscGroup {
    /// Source UE indices, ascending.
    pub sources: [usize; 2],
    /// Group head (relay) UE index.
    pub gh: usize,
    /// Sector receiving the group's direct and fronthaul links
    /// (= the group head's best sector).
    pub serving_sector: usize,
}

impl MscGroup {
    pub fn members(&self) -> [usize; 3] {
        [self.sources[0], self.sources[1], self.gh]
    }

    pub fn contains(&self, ue: usize) -> bool {
        self.sources[0] == ue || self.sources[1] == ue || self.gh == ue
    }
}

/// Greedy disjoint-triple formation. Scanning UEs in index order, each
/// still-unassigned UE seeds a candidate triple with its two nearest
/// unassigned neighbors; the triple forms iff all three pairwise distances
/// lie in `[d_min, d_max]`. A UE that fails to seed a triple is finalized
/// as DT-only and leaves the candidate pool. Distance ties break on the
/// lower UE index.
pub fn form_groups(drop: &UeDrop, d_min_m: f64, d_max_m: f64) -> Vec<[usize; 3]> {
    assert!(d_min_m <= d_max_m, "d_min must not exceed d_max");
    let n = drop.positions.len();
    let mut available = vec![true; n];
    let mut triples = Vec::new();
    let within = |d: f64| (d_min_m..=d_max_m).contains(&d);
    for i in 0..n {
        if !available[i] {
            continue;
        }
        let mut neighbors: Vec<(f64, usize)> = (0..n)
            .filter(|&j| j != i && available[j])
            .map(|j| (drop.positions[i].distance(&drop.positions[j]), j))
            .collect();
        neighbors.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // The seed leaves the pool whether or not it groups.
        available[i] = false;
        if neighbors.len() < 2 {
            continue;
        }
        let (d1, j1) = neighbors[0];
        let (d2, j2) = neighbors[1];
        let d12 = drop.positions[j1].distance(&drop.positions[j2]);
        if within(d1) && within(d2) && within(d12) {
            available[j1] = false;
            available[j2] = false;
            let mut t = [i, j1, j2];
            t.sort_unstable();
            triples.push(t);
        }
    }
    triples
}

/// Group-head selection: the member with the largest direct-link gain wins;
/// ties break on the lower UE index.
pub fn select_gh(triple: &[usize; 3], direct_gain_linear: &[f64]) -> usize {
    let mut best = triple[0];
    for &ue in &triple[1..] {
        if direct_gain_linear[ue] > direct_gain_linear[best]
            || (direct_gain_linear[ue] == direct_gain_linear[best] && ue < best)
        {
            best = ue;
        }
    }
    best
}
