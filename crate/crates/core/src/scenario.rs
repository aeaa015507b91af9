//! System parameters, ground-node layouts and file popularity.

use std::fs;
use std::path::Path;
use std::sync::Once;

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;

/// Every tunable of the system model.
///
/// Field names in the config file follow the usual symbols (`K`, `N`, `H`,
/// `V_max`, ...). Powers and gains are in dBm/dB; everything else is SI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemParams {
    /// Number of ground nodes.
    #[serde(rename = "K")]
    pub num_gns: usize,
    /// Number of files in the library.
    #[serde(rename = "N")]
    pub num_files: usize,
    /// Cache capacity per ground node, in files.
    #[serde(rename = "Q")]
    pub cache_capacity: usize,
    /// Side of the square deployment area, meters.
    pub area_side: f64,
    /// UAV altitude, meters.
    #[serde(rename = "H")]
    pub altitude: f64,
    /// Maximum UAV speed, m/s.
    #[serde(rename = "V_max")]
    pub max_speed: f64,
    /// Packet size, bits.
    #[serde(rename = "R_p")]
    pub packet_bits: f64,
    /// Coded packets required to decode a file.
    #[serde(rename = "Y")]
    pub packets_per_file: u32,
    /// Zipf skewness.
    pub kappa: f64,
    #[serde(rename = "B_U")]
    pub uav_bandwidth: f64,
    #[serde(rename = "B_G")]
    pub gn_bandwidth: f64,
    #[serde(rename = "R_U")]
    pub uav_rate: f64,
    #[serde(rename = "R_G")]
    pub gn_rate: f64,
    #[serde(rename = "P_U")]
    pub uav_power_dbm: f64,
    #[serde(rename = "P_G")]
    pub gn_power_dbm: f64,
    /// UAV-ground channel gain at 1 m, dB.
    #[serde(rename = "beta0_U")]
    pub uav_ref_gain_db: f64,
    /// Ground-ground channel gain at 1 m, dB.
    #[serde(rename = "beta0_G")]
    pub gn_ref_gain_db: f64,
    /// Noise power, dBm.
    #[serde(rename = "sigma2")]
    pub noise_dbm: f64,
    /// SNR gap, dB.
    #[serde(rename = "Gamma")]
    pub snr_gap_db: f64,
    /// Ground-ground path-loss exponent.
    #[serde(rename = "alpha")]
    pub path_loss_exponent: f64,
    /// Slot length, seconds.
    pub delta_t: f64,
    /// Greedy stops once the best weighted-cost reduction drops to this value.
    pub epsilon_term: f64,
    pub rng_seed: u64,
    /// Return the UAV to its first waypoint at the end of the flight.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub closed_tour: bool,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            num_gns: 100,
            num_files: 30,
            cache_capacity: 3,
            area_side: 3000.0,
            altitude: 100.0,
            max_speed: 30.0,
            packet_bits: 1000.0,
            packets_per_file: 300,
            kappa: 1.0,
            uav_bandwidth: 100e3,
            gn_bandwidth: 100e3,
            uav_rate: 100e3,
            gn_rate: 10e3,
            uav_power_dbm: 10.0,
            gn_power_dbm: 20.0,
            uav_ref_gain_db: -60.0,
            gn_ref_gain_db: -60.0,
            noise_dbm: -110.0,
            snr_gap_db: 7.0,
            path_loss_exponent: 2.7,
            delta_t: 0.5,
            epsilon_term: 1e-6,
            rng_seed: 1,
            closed_tour: false,
        }
    }
}

pub(crate) fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

impl SystemParams {
    /// Packets the UAV sends per slot.
    pub fn packets_per_slot(&self) -> f64 {
        self.delta_t * self.uav_rate / self.packet_bits
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.num_gns == 0 {
            return fail("K must be at least 1".into());
        }
        if self.num_files == 0 {
            return fail("N must be at least 1".into());
        }
        if self.cache_capacity == 0 {
            return fail("Q must be at least 1".into());
        }
        if self.num_gns * self.cache_capacity < self.num_files {
            return Err(Error::Infeasible(format!(
                "K*Q = {} cannot hold N = {} files",
                self.num_gns * self.cache_capacity,
                self.num_files
            )));
        }
        if self.packets_per_file == 0 {
            return fail("Y must be at least 1".into());
        }
        let positive = [
            ("area_side", self.area_side),
            ("H", self.altitude),
            ("V_max", self.max_speed),
            ("R_p", self.packet_bits),
            ("B_U", self.uav_bandwidth),
            ("B_G", self.gn_bandwidth),
            ("R_U", self.uav_rate),
            ("R_G", self.gn_rate),
            ("delta_t", self.delta_t),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return fail(format!("{name} must be positive and finite, got {v}"));
            }
        }
        if !(self.kappa.is_finite() && self.kappa >= 0.0) {
            return fail(format!("kappa must be nonnegative, got {}", self.kappa));
        }
        if !(self.path_loss_exponent.is_finite() && self.path_loss_exponent > 0.0) {
            return fail(format!("alpha must be positive, got {}", self.path_loss_exponent));
        }
        if !(self.epsilon_term.is_finite() && self.epsilon_term >= 0.0) {
            return fail(format!("epsilon_term must be nonnegative, got {}", self.epsilon_term));
        }
        let step = self.delta_t * self.max_speed;
        if step >= self.altitude {
            return fail(format!("slot travel delta_t*V_max = {step} m must stay below H = {} m", self.altitude));
        }
        if step > self.altitude / 10.0 {
            static COARSE: Once = Once::new();
            COARSE.call_once(|| warn!("slot travel {step} m exceeds H/10; per-slot distances are coarse"));
        }
        let l = self.packets_per_slot();
        if l < 1.0 - 1e-9 || (l - l.round()).abs() > 1e-9 {
            return fail(format!("L = delta_t*R_U/R_p = {l} must be a positive integer"));
        }
        // coverage radius must be real
        crate::radio::LinkBudget::from_params(self)?;
        Ok(())
    }
}

pub fn load_config(path: impl AsRef<Path>) -> Result<SystemParams> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let params: SystemParams =
        toml::from_str(&text).map_err(|e| Error::Parse { path: path.to_path_buf(), message: e.to_string() })?;
    params.validate()?;
    Ok(params)
}

pub fn save_config(params: &SystemParams, path: impl AsRef<Path>) -> Result<()> {
    let text = toml::to_string(params).map_err(|e| Error::Config(e.to_string()))?;
    fs::write(path, text)?;
    Ok(())
}

/// Zipf popularity over `num_files` files with skewness `kappa`.
pub fn zipf_popularity(num_files: usize, kappa: f64) -> Vec<f64> {
    let weights: Vec<f64> = (1..=num_files).map(|n| (n as f64).powf(-kappa)).collect();
    let total: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / total).collect()
}

/// Request probabilities, one row of `N` entries per ground node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Popularity {
    rows: Vec<Vec<f64>>,
}

impl Popularity {
    pub fn shared(row: Vec<f64>, num_gns: usize) -> Self {
        Self { rows: vec![row; num_gns] }
    }

    pub fn per_gn(rows: Vec<Vec<f64>>) -> Result<Self> {
        for (k, row) in rows.iter().enumerate() {
            if row.iter().any(|p| !(0.0..=1.0).contains(p)) {
                return Err(Error::Config(format!("popularity row {k} has an entry outside [0, 1]")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::Config(format!("popularity row {k} sums to {sum}")));
            }
        }
        Ok(Self { rows })
    }

    #[inline]
    pub fn get(&self, gn: usize, file: usize) -> f64 {
        self.rows[gn][file]
    }

    pub fn row(&self, gn: usize) -> &[f64] {
        &self.rows[gn]
    }

    /// Popularity averaged over ground nodes.
    pub fn mean(&self) -> Vec<f64> {
        let k = self.rows.len() as f64;
        let n = self.rows.first().map_or(0, Vec::len);
        (0..n).map(|i| self.rows.iter().map(|r| r[i]).sum::<f64>() / k).collect()
    }
}

/// A concrete instance: parameters, ground-node positions, request model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub params: SystemParams,
    pub positions: Vec<Point>,
    pub popularity: Popularity,
}

impl Scenario {
    /// Scenario with caller-chosen positions and the shared Zipf popularity.
    pub fn with_positions(params: SystemParams, positions: Vec<Point>) -> Result<Self> {
        let row = zipf_popularity(params.num_files, params.kappa);
        let popularity = Popularity::shared(row, positions.len());
        Self::new(params, positions, popularity)
    }

    pub fn new(mut params: SystemParams, positions: Vec<Point>, popularity: Popularity) -> Result<Self> {
        params.num_gns = positions.len();
        params.validate()?;
        if popularity.rows.len() != positions.len() || popularity.rows.iter().any(|r| r.len() != params.num_files) {
            return Err(Error::Config(format!("popularity must be {} x {}", positions.len(), params.num_files)));
        }
        Ok(Self { params, positions, popularity })
    }

    pub fn num_gns(&self) -> usize {
        self.positions.len()
    }

    pub fn num_files(&self) -> usize {
        self.params.num_files
    }

    pub fn gn_distance(&self, a: usize, b: usize) -> f64 {
        self.positions[a].dist(self.positions[b])
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text)?;
        Self::new(s.params, s.positions, s.popularity)
    }
}

/// Uniformly scattered ground nodes with shared Zipf popularity, seeded by
/// `params.rng_seed`.
pub fn generate_scenario(params: &SystemParams) -> Result<Scenario> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed);
    let side = params.area_side;
    let positions = (0..params.num_gns).map(|_| Point::new(rng.gen::<f64>() * side, rng.gen::<f64>() * side)).collect();
    Scenario::with_positions(params.clone(), positions)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zipf_examples() {
        assert_eq!(zipf_popularity(4, 0.0), vec![0.25; 4]);
        assert_eq!(zipf_popularity(1, 2.3), vec![1.0]);
        let p = zipf_popularity(3, 1.0);
        let expect = [6.0 / 11.0, 3.0 / 11.0, 2.0 / 11.0];
        for (a, b) in p.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn defaults_validate() {
        let p = SystemParams::default();
        p.validate().unwrap();
        assert_eq!(p.packets_per_slot(), 50.0);
    }

    #[test]
    fn rejects_infeasible_storage() {
        let p = SystemParams { num_gns: 2, cache_capacity: 1, num_files: 3, ..Default::default() };
        assert!(matches!(p.validate(), Err(Error::Infeasible(m)) if m.contains("K*Q")));
    }

    #[test]
    fn rejects_fractional_slot_packets() {
        let p = SystemParams { delta_t: 0.505, ..Default::default() };
        assert!(matches!(p.validate(), Err(Error::Config(m)) if m.contains("L =")));
    }

    #[test]
    fn rejects_long_slots() {
        let p = SystemParams { delta_t: 4.0, ..Default::default() };
        assert!(matches!(p.validate(), Err(Error::Config(m)) if m.contains("below H")));
    }

    #[test]
    fn generation_is_deterministic_and_bounded() {
        let params = SystemParams::default();
        let a = generate_scenario(&params).unwrap();
        let b = generate_scenario(&params).unwrap();
        assert_eq!(a, b);
        assert!(a.positions.iter().all(|p| (0.0..=3000.0).contains(&p.x) && (0.0..=3000.0).contains(&p.y)));
        let other = generate_scenario(&SystemParams { rng_seed: 2, ..params }).unwrap();
        assert_ne!(a.positions, other.positions);
    }

    #[test]
    fn tiny_area_distance_bound() {
        let params = SystemParams { num_gns: 2, num_files: 2, area_side: 1.0, ..Default::default() };
        let s = generate_scenario(&params).unwrap();
        assert!(s.gn_distance(0, 1) <= 2f64.sqrt());
    }

    #[test]
    fn per_gn_rows_checked() {
        assert!(Popularity::per_gn(vec![vec![0.5, 0.6]]).is_err());
        assert!(Popularity::per_gn(vec![vec![0.5, 0.5]]).is_ok());
    }
}
