//! Microsecond-exact PPDU durations, frame-exchange airtime, and channel
//! efficiency.
//!
//! Every transmission pays a fixed price before the first payload bit:
//! PHY preamble, PHY header, MAC header, and the inter-frame spaces around
//! the exchange. The preamble and PHY header take the same time regardless
//! of the selected data rate, which is what makes aggregation pay off and
//! makes the savings grow with the rate.
//!
//! Defaults are 802.11a/g OFDM timing: 16 us preamble, 4 us PHY header,
//! 4 us symbols, SIFS 16 us, DIFS 34 us, 9 us slots, CWmin 15, and 22
//! service + tail bits per PSDU. All of them are overridable through the
//! run configuration.

use crate::{Error, Result};

/// ACK PSDU length in bytes, sent at the control rate.
pub const ACK_PSDU_LEN: u32 = 14;
/// Compressed Block-Ack PSDU length in bytes, sent at the control rate.
pub const BLOCK_ACK_PSDU_LEN: u32 = 32;

/// PHY and MAC timing constants for one link.
#[derive(Debug, Clone, PartialEq)]
pub struct PhyTimings {
    pub preamble_us: f64,
    pub phy_header_us: f64,
    pub symbol_us: f64,
    pub sifs_us: f64,
    pub difs_us: f64,
    pub slot_us: f64,
    pub cw_min: u32,
    /// Data bits carried per OFDM symbol at the selected data rate.
    pub data_bits_per_symbol: u32,
    /// Bits per symbol at the control/basic rate used for ACK and BA.
    pub ctrl_bits_per_symbol: u32,
    /// SERVICE and tail bits prepended/appended to every PSDU.
    pub service_tail_bits: u32,
}

impl Default for PhyTimings {
    fn default() -> Self {
        Self {
            preamble_us: 16.0,
            phy_header_us: 4.0,
            symbol_us: 4.0,
            sifs_us: 16.0,
            difs_us: 34.0,
            slot_us: 9.0,
            cw_min: 15,
            data_bits_per_symbol: 216, // 54 Mbit/s at 4 us symbols
            ctrl_bits_per_symbol: 96,  // 24 Mbit/s basic rate
            service_tail_bits: 22,
        }
    }
}

impl PhyTimings {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("timings.preamble_us", self.preamble_us),
            ("timings.phy_header_us", self.phy_header_us),
            ("timings.symbol_us", self.symbol_us),
            ("timings.sifs_us", self.sifs_us),
            ("timings.difs_us", self.difs_us),
            ("timings.slot_us", self.slot_us),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidConfig(format!("{name} must be > 0, got {v}")));
            }
        }
        if self.ctrl_bits_per_symbol < 1 {
            return Err(Error::InvalidConfig("ctrl_bits_per_symbol must be >= 1".into()));
        }
        if self.data_bits_per_symbol < self.ctrl_bits_per_symbol {
            return Err(Error::InvalidConfig(format!(
                "data_bits_per_symbol {} must be >= ctrl_bits_per_symbol {}",
                self.data_bits_per_symbol, self.ctrl_bits_per_symbol
            )));
        }
        Ok(())
    }

    /// Data rate implied by the selected rate and symbol duration, in Mbit/s
    /// (equivalently bits per microsecond).
    pub fn data_rate_mbps(&self) -> f64 {
        self.data_bits_per_symbol as f64 / self.symbol_us
    }

    /// Mean contention cost charged per exchange: DIFS plus CWmin/2 slots.
    pub fn expected_backoff_us(&self) -> f64 {
        self.difs_us + (self.cw_min as f64 / 2.0) * self.slot_us
    }
}

/// Whether an exchange is charged contention time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackoffModel {
    /// DIFS plus the expected backoff (CWmin/2 slots).
    Expected,
    /// No contention term; the exchange starts immediately.
    None,
}

/// Duration of one PPDU in microseconds.
///
/// `preamble + phy_header + symbol * ceil((service_tail + 8 * psdu_len) / bits_per_symbol)`.
/// Even an empty PSDU costs one symbol for the service and tail bits.
pub fn ppdu_duration(psdu_len: u32, bits_per_symbol: u32, timings: &PhyTimings) -> Result<f64> {
    if bits_per_symbol == 0 {
        return Err(Error::InvalidConfig("bits_per_symbol must be nonzero".into()));
    }
    let bits = timings.service_tail_bits as u64 + 8 * psdu_len as u64;
    let symbols = bits.div_ceil(bits_per_symbol as u64);
    Ok(timings.preamble_us + timings.phy_header_us + timings.symbol_us * symbols as f64)
}

/// Airtime of a full data/ack exchange: optional contention, the data PPDU,
/// SIFS, and the acknowledgment PPDU at the control rate.
pub fn exchange_airtime(
    data_psdu_len: u32,
    ack_psdu_len: u32,
    timings: &PhyTimings,
    backoff: BackoffModel,
) -> Result<f64> {
    let contention = match backoff {
        BackoffModel::Expected => timings.expected_backoff_us(),
        BackoffModel::None => 0.0,
    };
    Ok(contention
        + ppdu_duration(data_psdu_len, timings.data_bits_per_symbol, timings)?
        + timings.sifs_us
        + ppdu_duration(ack_psdu_len, timings.ctrl_bits_per_symbol, timings)?)
}

/// Fraction of the airtime-equivalent channel capacity that carried payload:
/// `payload_bits / (data_rate_mbps * total_airtime_us)`.
pub fn channel_efficiency(payload_bits: u64, total_airtime_us: f64, data_rate_mbps: f64) -> Result<f64> {
    if !(total_airtime_us > 0.0) {
        return Err(Error::InvalidInput(format!(
            "total_airtime_us must be > 0, got {total_airtime_us}"
        )));
    }
    if !(data_rate_mbps > 0.0) {
        return Err(Error::InvalidInput(format!(
            "data_rate_mbps must be > 0, got {data_rate_mbps}"
        )));
    }
    Ok(payload_bits as f64 / (data_rate_mbps * total_airtime_us))
}
