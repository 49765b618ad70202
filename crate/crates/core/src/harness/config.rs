use std::fmt;
use std::str::FromStr;

use crate::coords::AnchorStrategy;
use crate::error::{Error, Result};
use crate::topology::{build_topology, Area, Deployment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Protocol {
    /// Oracle shortest path.
    Sp,
    /// Greedy on true positions.
    GfGeo,
    GpsrGg,
    GpsrRng,
    /// Greedy on the corner-anchored hop-count VCS.
    GfVcs,
    /// Greedy on the aligned VCS.
    GfAvcs,
    Lcr,
    Bvr,
    Spr,
    /// SPR over the breadth-first-tree labeling.
    Ospr,
    Agsp,
}

impl Protocol {
    pub const ALL: [Protocol; 11] = [
        Protocol::Sp,
        Protocol::GfGeo,
        Protocol::GpsrGg,
        Protocol::GpsrRng,
        Protocol::GfVcs,
        Protocol::GfAvcs,
        Protocol::Lcr,
        Protocol::Bvr,
        Protocol::Spr,
        Protocol::Ospr,
        Protocol::Agsp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::Sp => "sp",
            Protocol::GfGeo => "gf-geo",
            Protocol::GpsrGg => "gpsr-gg",
            Protocol::GpsrRng => "gpsr-rng",
            Protocol::GfVcs => "gf-vcs",
            Protocol::GfAvcs => "gf-avcs",
            Protocol::Lcr => "lcr",
            Protocol::Bvr => "bvr",
            Protocol::Spr => "spr",
            Protocol::Ospr => "ospr",
            Protocol::Agsp => "agsp",
        }
    }

    /// Uses the single-anchor spanning-path labeling.
    pub fn uses_span_anchor(self) -> bool {
        matches!(self, Protocol::Spr | Protocol::Ospr | Protocol::Agsp)
    }

    pub fn parse_list(s: &str) -> Result<Vec<Protocol>> {
        let mut out: Vec<Protocol> = s
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(str::parse)
            .collect::<Result<_>>()?;
        out.sort();
        out.dedup();
        if out.is_empty() {
            return Err(Error::invalid("protocol list is empty"));
        }
        Ok(out)
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Protocol::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown protocol {s:?}")))
    }
}

/// Which nodes anchor each coordinate system.
#[derive(Debug, Clone, PartialEq)]
pub struct AnchorPlan {
    /// Root of the spanning-path labelings (first selected node is used).
    pub span: AnchorStrategy,
    /// Anchors of the VCS used by gf-vcs, gf-avcs, lcr and agsp.
    pub vcs: AnchorStrategy,
    pub vcs_count: usize,
    pub bvr: AnchorStrategy,
    pub bvr_count: usize,
}

impl Default for AnchorPlan {
    fn default() -> Self {
        Self {
            span: AnchorStrategy::Center,
            vcs: AnchorStrategy::Corners,
            vcs_count: 4,
            bvr: AnchorStrategy::Random,
            bvr_count: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub node_count: usize,
    pub area: Area,
    pub deployment: Deployment,
    /// One sweep point per range.
    pub radio_ranges: Vec<f64>,
    pub trials: usize,
    pub base_seed: u64,
    pub protocols: Vec<Protocol>,
    pub anchors: AnchorPlan,
    /// Hop budget per packet is `ttl_factor * N`.
    pub ttl_factor: usize,
    pub align_iterations: usize,
    pub reenter_greedy: bool,
    /// Deployments tried per scenario before giving up on connectivity.
    pub max_attempts: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            node_count: 200,
            area: Area::default(),
            deployment: Deployment::Uniform,
            radio_ranges: vec![12.0],
            trials: 30,
            base_seed: 1,
            protocols: Protocol::ALL.to_vec(),
            anchors: AnchorPlan::default(),
            ttl_factor: 4,
            align_iterations: 1,
            reenter_greedy: false,
            max_attempts: 100,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.node_count == 0 {
            return Err(Error::invalid("node count must be at least 1"));
        }
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        if self.radio_ranges.is_empty() {
            return Err(Error::invalid("at least one radio range is required"));
        }
        if let Some(r) = self.radio_ranges.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
            return Err(Error::invalid(format!("radio range must be positive, got {r}")));
        }
        if self.protocols.is_empty() {
            return Err(Error::invalid("no protocols selected"));
        }
        if self.ttl_factor == 0 {
            return Err(Error::invalid("ttl factor must be positive"));
        }
        if self.max_attempts == 0 {
            return Err(Error::invalid("max attempts must be positive"));
        }
        let needs_vcs = self
            .protocols
            .iter()
            .any(|p| matches!(p, Protocol::GfVcs | Protocol::GfAvcs | Protocol::Lcr | Protocol::Agsp));
        if needs_vcs && (self.anchors.vcs_count == 0 || self.anchors.vcs_count > self.node_count) {
            return Err(Error::invalid("VCS anchor count must be in 1..=N"));
        }
        if self.protocols.contains(&Protocol::Bvr) {
            if !(10..=80).contains(&self.anchors.bvr_count) {
                return Err(Error::invalid(format!(
                    "BVR uses 10 to 80 anchors, got {}",
                    self.anchors.bvr_count
                )));
            }
            if self.anchors.bvr_count > self.node_count {
                return Err(Error::invalid("BVR anchor count exceeds node count"));
            }
        }
        Ok(())
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deployment seed for one sweep point: the base seed folded with the trial
/// index, range index and regeneration attempt, one SplitMix64 round each.
pub fn scenario_seed(base: u64, trial: usize, range_index: usize, attempt: usize) -> u64 {
    [trial, range_index, attempt]
        .into_iter()
        .fold(splitmix64(base), |h, part| splitmix64(h ^ part as u64))
}

/// Radio range whose mean node degree, averaged over a few fixed
/// calibration deployments, matches `target_degree`. Rounded to 1e-6.
pub fn calibrate_radio_range(deployment: Deployment, n: usize, area: Area, target_degree: f64) -> Result<f64> {
    if target_degree.is_nan() || target_degree <= 0.0 || n < 2 || target_degree >= (n - 1) as f64 {
        return Err(Error::invalid(format!(
            "cannot reach mean degree {target_degree} with {n} nodes"
        )));
    }
    const SAMPLES: u64 = 8;
    let layouts = (0..SAMPLES)
        .map(|s| deployment.generate(n, area, splitmix64(0xCA11_B0A7 ^ s)))
        .collect::<Result<Vec<_>>>()?;
    let mean_degree = |r: f64| {
        layouts
            .iter()
            .map(|pts| build_topology(pts.clone(), r).mean_degree())
            .sum::<f64>()
            / SAMPLES as f64
    };
    let (mut lo, mut hi) = (0.0, area.width.hypot(area.height));
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        if mean_degree(mid) < target_degree {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((hi * 1e6).round() / 1e6)
}
