//! Capability negotiation: assoc-request/response plus the add-block-ack
//! exchange, reduced to a pure function.
//!
//! Each station advertises its A-MSDU support (one of the standard 3839,
//! 7935, or 11454 byte limits, or none), a maximum A-MPDU length, a
//! block-ack window, and its rate set. The session uses the element-wise
//! minimum of the two advertisements; A-MSDU support is off if either side
//! disables it. Data frames use the highest common rate, control responses
//! the lowest, so every station in the cell can decode them.
//!
//! The management frames themselves are not simulated; an ADDBA session for
//! the configured TID is considered established at time zero.

use crate::frames::MAX_TID;
use crate::{Error, Result};

/// Advertised A-MSDU size support.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmsduCapability {
    Off,
    Bytes3839,
    Bytes7935,
    Bytes11454,
}

impl AmsduCapability {
    pub fn limit_bytes(self) -> Option<u32> {
        match self {
            AmsduCapability::Off => None,
            AmsduCapability::Bytes3839 => Some(3839),
            AmsduCapability::Bytes7935 => Some(7935),
            AmsduCapability::Bytes11454 => Some(11454),
        }
    }

    pub fn from_config(value: &str) -> Result<Self> {
        match value {
            "off" | "0" => Ok(AmsduCapability::Off),
            "3839" => Ok(AmsduCapability::Bytes3839),
            "7935" => Ok(AmsduCapability::Bytes7935),
            "11454" => Ok(AmsduCapability::Bytes11454),
            other => Err(Error::InvalidConfig(format!(
                "max_amsdu_bytes must be one of off|3839|7935|11454, got `{other}`"
            ))),
        }
    }

    pub const ALL: [AmsduCapability; 4] = [
        AmsduCapability::Off,
        AmsduCapability::Bytes3839,
        AmsduCapability::Bytes7935,
        AmsduCapability::Bytes11454,
    ];
}

impl std::fmt::Display for AmsduCapability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.limit_bytes() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "off"),
        }
    }
}

/// What one station advertises.
#[derive(Debug, Clone, PartialEq)]
pub struct StationCapabilities {
    pub max_amsdu: AmsduCapability,
    pub max_ampdu_bytes: u32,
    pub max_ba_window: u16,
    /// Supported rates as data bits per OFDM symbol.
    pub supported_rates: Vec<u32>,
}

impl Default for StationCapabilities {
    fn default() -> Self {
        Self {
            max_amsdu: AmsduCapability::Bytes3839,
            max_ampdu_bytes: 65535,
            max_ba_window: 64,
            supported_rates: vec![96, 216],
        }
    }
}

impl StationCapabilities {
    pub fn validate(&self, who: &str) -> Result<()> {
        if self.max_ba_window < 1 || self.max_ba_window > 64 {
            return Err(Error::InvalidConfig(format!(
                "{who}.max_ba_window {} out of range 1..=64",
                self.max_ba_window
            )));
        }
        if self.max_ampdu_bytes < 1 {
            return Err(Error::InvalidConfig(format!("{who}.max_ampdu_bytes must be >= 1")));
        }
        if self.supported_rates.is_empty() {
            return Err(Error::InvalidConfig(format!("{who}.rates must not be empty")));
        }
        if self.supported_rates.iter().any(|&r| r == 0) {
            return Err(Error::InvalidConfig(format!("{who}.rates must all be >= 1")));
        }
        Ok(())
    }
}

/// Per-link, per-TID parameters in force for a session.
#[derive(Debug, Clone, PartialEq)]
pub struct SessionParams {
    /// None when either side disabled A-MSDU.
    pub amsdu_limit_bytes: Option<u32>,
    pub ampdu_limit_bytes: u32,
    pub ba_window: u16,
    pub tid: u8,
    pub data_bits_per_symbol: u32,
    pub ctrl_bits_per_symbol: u32,
}

/// Derive session parameters from both stations' advertisements.
///
/// Every limit is the element-wise minimum; data frames take the highest
/// common rate and control frames the lowest. Commutative in the two
/// capability arguments.
pub fn negotiate(
    initiator: &StationCapabilities,
    responder: &StationCapabilities,
    tid: u8,
) -> Result<SessionParams> {
    if tid > MAX_TID {
        return Err(Error::InvalidConfig(format!("tid {tid} out of range 0..={MAX_TID}")));
    }
    initiator.validate("initiator")?;
    responder.validate("responder")?;

    let amsdu_limit_bytes = match (initiator.max_amsdu.limit_bytes(), responder.max_amsdu.limit_bytes())
    {
        (Some(a), Some(b)) => Some(a.min(b)),
        _ => None,
    };

    let common: Vec<u32> = initiator
        .supported_rates
        .iter()
        .copied()
        .filter(|r| responder.supported_rates.contains(r))
        .collect();
    let data = common.iter().copied().max();
    let ctrl = common.iter().copied().min();
    let (Some(data_bits_per_symbol), Some(ctrl_bits_per_symbol)) = (data, ctrl) else {
        return Err(Error::Negotiation(format!(
            "no common rate between {:?} and {:?}",
            initiator.supported_rates, responder.supported_rates
        )));
    };

    Ok(SessionParams {
        amsdu_limit_bytes,
        ampdu_limit_bytes: initiator.max_ampdu_bytes.min(responder.max_ampdu_bytes),
        ba_window: initiator.max_ba_window.min(responder.max_ba_window),
        tid,
        data_bits_per_symbol,
        ctrl_bits_per_symbol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps(amsdu: AmsduCapability, ampdu: u32, window: u16, rates: &[u32]) -> StationCapabilities {
        StationCapabilities {
            max_amsdu: amsdu,
            max_ampdu_bytes: ampdu,
            max_ba_window: window,
            supported_rates: rates.to_vec(),
        }
    }

    #[test]
    fn limits_are_elementwise_minimum() {
        let a = caps(AmsduCapability::Bytes7935, 65535, 64, &[96, 216]);
        let b = caps(AmsduCapability::Bytes3839, 65535, 64, &[96, 216]);
        let s = negotiate(&a, &b, 0).unwrap();
        assert_eq!(s.amsdu_limit_bytes, Some(3839));
        assert_eq!(s.ba_window, 64);

        let b = caps(AmsduCapability::Bytes7935, 65535, 32, &[96, 216]);
        assert_eq!(negotiate(&a, &b, 0).unwrap().ba_window, 32);
    }

    #[test]
    fn either_side_vetoes_amsdu() {
        let a = caps(AmsduCapability::Off, 65535, 64, &[216]);
        let b = caps(AmsduCapability::Bytes11454, 65535, 64, &[216]);
        assert_eq!(negotiate(&a, &b, 0).unwrap().amsdu_limit_bytes, None);
        assert_eq!(negotiate(&b, &a, 0).unwrap().amsdu_limit_bytes, None);
    }

    #[test]
    fn rates_highest_common_data_lowest_common_ctrl() {
        let a = caps(AmsduCapability::Bytes3839, 65535, 64, &[48, 96, 216, 1080]);
        let b = caps(AmsduCapability::Bytes3839, 65535, 64, &[96, 216]);
        let s = negotiate(&a, &b, 0).unwrap();
        assert_eq!(s.data_bits_per_symbol, 216);
        assert_eq!(s.ctrl_bits_per_symbol, 96);
    }

    #[test]
    fn no_common_rate_fails() {
        let a = caps(AmsduCapability::Bytes3839, 65535, 64, &[48]);
        let b = caps(AmsduCapability::Bytes3839, 65535, 64, &[216]);
        assert!(matches!(negotiate(&a, &b, 0), Err(Error::Negotiation(_))));
    }

    #[test]
    fn tid_bounds() {
        let a = StationCapabilities::default();
        assert!(negotiate(&a, &a, 8).is_err());
        assert!(negotiate(&a, &a, 7).is_ok());
    }

    #[test]
    fn commutative_and_dominated_over_capability_grid() {
        // Exhaustive over a small grid of the enum space.
        let windows = [1u16, 32, 64];
        let ampdus = [8191u32, 65535];
        let rate_sets: [&[u32]; 3] = [&[96], &[96, 216], &[96, 216, 1080]];
        for &am_a in &AmsduCapability::ALL {
            for &am_b in &AmsduCapability::ALL {
                for &wa in &windows {
                    for &wb in &windows {
                        for &pa in &ampdus {
                            for &pb in &ampdus {
                                for ra in rate_sets {
                                    for rb in rate_sets {
                                        let a = caps(am_a, pa, wa, ra);
                                        let b = caps(am_b, pb, wb, rb);
                                        let ab = negotiate(&a, &b, 0).unwrap();
                                        let ba = negotiate(&b, &a, 0).unwrap();
                                        assert_eq!(ab, ba);
                                        // Output never exceeds either input.
                                        assert!(ab.ba_window <= wa && ab.ba_window <= wb);
                                        assert!(ab.ampdu_limit_bytes <= pa && ab.ampdu_limit_bytes <= pb);
                                        if let Some(l) = ab.amsdu_limit_bytes {
                                            assert!(l <= am_a.limit_bytes().unwrap());
                                            assert!(l <= am_b.limit_bytes().unwrap());
                                        }
                                        assert!(ra.contains(&ab.data_bits_per_symbol));
                                        assert!(rb.contains(&ab.data_bits_per_symbol));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}
