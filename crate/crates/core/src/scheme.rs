//! Uplink scheme taxonomy: direct transmission, forwarding, and
//! network-coded cooperation, each with CRC and group-head battery flavors.

use crate::error::{Result, SimError};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// Direct transmission: each UE sends its own stream straight to the BS.
    Dt,
    /// Decode-and-forward: the group head retransmits each source stream.
    Fw,
    /// Network coding: the group head forwards the XOR of the two streams.
    Nc,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Dt => "DT",
            Scheme::Fw => "FW",
            Scheme::Nc => "NC",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dt" => Ok(Scheme::Dt),
            "fw" => Ok(Scheme::Fw),
            "nc" => Ok(Scheme::Nc),
            other => Err(SimError::Config(format!("unknown scheme `{other}`"))),
        }
    }
}

/// Whether the group head verifies a CRC before forwarding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CrcMode {
    /// Forward unconditionally; detection errors propagate.
    Off,
    /// Forward only frames that pass the CRC; failed frames are lost.
    On,
}

impl CrcMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CrcMode::Off => "nocrc",
            CrcMode::On => "crc",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "nocrc" | "off" => Ok(CrcMode::Off),
            "crc" | "on" => Ok(CrcMode::On),
            other => Err(SimError::Config(format!("unknown crc mode `{other}`"))),
        }
    }
}

/// Whether the group head spends its own battery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GhBattery {
    /// "WI": infrastructure-assisted relay with no battery constraint; it
    /// transmits at maximum power and its energy is not accounted.
    Unconstrained,
    /// "WO": an ordinary UE relays; its transmit power is optimized and
    /// charged to the group energy budget.
    Limited,
}

impl GhBattery {
    pub fn as_str(self) -> &'static str {
        match self {
            GhBattery::Unconstrained => "wi",
            GhBattery::Limited => "wo",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "wi" => Ok(GhBattery::Unconstrained),
            "wo" => Ok(GhBattery::Limited),
            other => Err(SimError::Config(format!("unknown gh battery mode `{other}`"))),
        }
    }
}

/// One evaluated scheme variant. DT carries no CRC or battery flavor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Variant {
    pub scheme: Scheme,
    pub crc: Option<CrcMode>,
    pub gh_battery: Option<GhBattery>,
}

impl Variant {
    pub const DT: Variant = Variant {
        scheme: Scheme::Dt,
        crc: None,
        gh_battery: None,
    };

    pub fn cooperative(scheme: Scheme, crc: CrcMode, gh_battery: GhBattery) -> Self {
        debug_assert!(scheme != Scheme::Dt);
        Variant {
            scheme,
            crc: Some(crc),
            gh_battery: Some(gh_battery),
        }
    }

    pub fn is_cooperative(&self) -> bool {
        self.scheme != Scheme::Dt
    }

    /// Stable display label, e.g. `DT`, `FW_WI_CRC`, `NC_WO_NOCRC`.
    pub fn label(&self) -> String {
        match (self.crc, self.gh_battery) {
            (Some(crc), Some(gh)) => format!(
                "{}_{}_{}",
                self.scheme.as_str(),
                gh.as_str().to_ascii_uppercase(),
                crc.as_str().to_ascii_uppercase()
            ),
            _ => self.scheme.as_str().to_string(),
        }
    }

    /// CSV cell values for the scheme / crc / gh_battery columns.
    pub fn csv_fields(&self) -> (&'static str, &'static str, &'static str) {
        (
            self.scheme.as_str(),
            self.crc.map_or("na", CrcMode::as_str),
            self.gh_battery.map_or("na", GhBattery::as_str),
        )
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Expands scheme/crc/battery selections into the variant list, sorted by
/// label so that all outputs have a deterministic order.
pub fn expand_variants(
    schemes: &[Scheme],
    crc_modes: &[CrcMode],
    gh_battery_modes: &[GhBattery],
) -> Vec<Variant> {
    let mut out = Vec::new();
    for &s in schemes {
        match s {
            Scheme::Dt => out.push(Variant::DT),
            _ => {
                for &c in crc_modes {
                    for &g in gh_battery_modes {
                        out.push(Variant::cooperative(s, c, g));
                    }
                }
            }
        }
    }
    out.sort_by_key(|v| v.label());
    out.dedup();
    out
}
