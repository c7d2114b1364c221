//! Latitude-band grid over `S^2` for cap range queries.
//!
//! The sphere is cut into latitude bands of equal angular height; each band
//! is cut into longitude cells of roughly the same width. A cap query visits
//! every cell that can intersect the cap, so callers get a superset of the
//! points inside and filter by exact distance.

use std::f64::consts::{FRAC_PI_2, PI};

const MAX_BANDS: usize = 360;
const QUERY_MARGIN: f64 = 1e-9;

#[derive(Clone, Debug)]
struct Band {
    cell_width: f64,
    cells: Vec<Vec<u32>>,
}

#[derive(Clone, Debug)]
pub struct BandGrid {
    band_height: f64,
    bands: Vec<Band>,
    len: usize,
}

#[inline]
fn lat_lon(coords: &[f64]) -> (f64, f64) {
    let (x, y, z) = (coords[0], coords[1], coords[2]);
    let rho = (x * x + y * y).sqrt();
    (z.atan2(rho), y.atan2(x))
}

impl BandGrid {
    /// Grid tuned for caps of angular radius `query_angle` (radians).
    pub fn new(query_angle: f64) -> Self {
        let target = (query_angle / 2.0).max(PI / MAX_BANDS as f64);
        let band_count = ((PI / target).ceil() as usize).clamp(1, MAX_BANDS);
        let band_height = PI / band_count as f64;
        let bands = (0..band_count)
            .map(|b| {
                let lat_mid = -FRAC_PI_2 + (b as f64 + 0.5) * band_height;
                let cells = ((2.0 * PI * lat_mid.cos() / band_height).floor() as usize).clamp(1, 2 * band_count);
                Band { cell_width: 2.0 * PI / cells as f64, cells: vec![Vec::new(); cells] }
            })
            .collect();
        Self { band_height, bands, len: 0 }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn band_index(&self, lat: f64) -> usize {
        (((lat + FRAC_PI_2) / self.band_height).floor().max(0.0) as usize).min(self.bands.len() - 1)
    }

    /// Inserts point `id` at `coords` (any radius; only direction matters).
    pub fn insert(&mut self, id: u32, coords: &[f64]) {
        let (lat, lon) = lat_lon(coords);
        let band = self.band_index(lat);
        let b = &mut self.bands[band];
        let cell = (((lon + PI) / b.cell_width).floor().max(0.0) as usize).min(b.cells.len() - 1);
        b.cells[cell].push(id);
        self.len += 1;
    }

    /// Calls `visit` for every stored id in a cell that may intersect the cap
    /// of angular radius `angle` around `center`. Each id is visited once.
    pub fn visit_candidates(&self, center: &[f64], angle: f64, mut visit: impl FnMut(u32)) {
        let (lat0, lon0) = lat_lon(center);
        let a = angle + QUERY_MARGIN;
        let lat_min = lat0 - a;
        let lat_max = lat0 + a;
        let all_lon = a >= FRAC_PI_2 || lat_max >= FRAC_PI_2 || lat_min <= -FRAC_PI_2;
        let half_width = if all_lon { PI } else { (a.sin() / lat0.cos()).min(1.0).asin() + QUERY_MARGIN };
        let b_lo = self.band_index(lat_min.max(-FRAC_PI_2));
        let b_hi = self.band_index(lat_max.min(FRAC_PI_2));
        for band in &self.bands[b_lo..=b_hi] {
            let k = band.cells.len();
            let lo = ((lon0 - half_width + PI) / band.cell_width).floor() as i64;
            let hi = ((lon0 + half_width + PI) / band.cell_width).floor() as i64;
            if half_width >= PI || (hi - lo + 1) as usize >= k {
                band.cells.iter().flatten().for_each(|&id| visit(id));
            } else {
                for j in lo..=hi {
                    let idx = j.rem_euclid(k as i64) as usize;
                    band.cells[idx].iter().for_each(|&id| visit(id));
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{chord_distance, sample_uniform, CapSpec, SpherePoint};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn queries_cover_every_point_in_cap() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in [0.0005, 0.01, 0.1, 0.3, 0.6, 1.0] {
            let cap = CapSpec::from_area(2, p).unwrap();
            let points: Vec<SpherePoint> = (0..2000).map(|_| sample_uniform(2, &mut rng)).collect();
            let mut grid = BandGrid::new(cap.angle());
            for (i, x) in points.iter().enumerate() {
                grid.insert(i as u32, x.coords());
            }
            assert_eq!(grid.len(), points.len());
            let mut centers: Vec<SpherePoint> = (0..50).map(|_| sample_uniform(2, &mut rng)).collect();
            // Poles and the date line are the awkward spots.
            let r = crate::geometry::unit_area_radius(2);
            centers.push(SpherePoint::new(vec![0.0, 0.0, r]));
            centers.push(SpherePoint::new(vec![0.0, 0.0, -r]));
            centers.push(SpherePoint::new(vec![-r, 1e-12, 0.0]));
            for c in &centers {
                let mut seen = vec![0u8; points.len()];
                grid.visit_candidates(c.coords(), cap.angle(), |id| seen[id as usize] += 1);
                for (i, x) in points.iter().enumerate() {
                    assert!(seen[i] <= 1);
                    if chord_distance(c, x).unwrap() <= cap.r {
                        assert_eq!(seen[i], 1, "p={p} point {i} missed");
                    }
                }
            }
        }
    }
}
