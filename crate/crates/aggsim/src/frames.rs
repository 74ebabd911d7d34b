//! Frame hierarchy (MSDU -> A-MSDU subframe -> MPDU -> A-MPDU) and the
//! byte-exact size arithmetic for headers, delimiters, and padding.
//!
//! Sizes follow the 802.11n framing: a 26-byte QoS Data MAC header, 4-byte
//! FCS, 8-byte LLC/SNAP encapsulation for plain MSDUs, 14-byte A-MSDU
//! subframe header (DA 6 + SA 6 + length 2), and a 4-byte A-MPDU delimiter.
//! Frames store sizes and metadata only; no payload bytes exist anywhere.

use crate::{Error, Result};

/// QoS Data MAC header length in bytes.
pub const MAC_HEADER_LEN: u32 = 26;
/// Frame check sequence length in bytes.
pub const FCS_LEN: u32 = 4;
/// LLC/SNAP encapsulation carried by a plain (non-aggregate) MSDU.
pub const LLC_LEN: u32 = 8;
/// A-MSDU subframe header: DA 6 + SA 6 + length 2.
pub const SUBFRAME_HEADER_LEN: u32 = 14;
/// A-MPDU delimiter length in bytes.
pub const AMPDU_DELIMITER_LEN: u32 = 4;
/// Largest MSDU payload accepted from higher layers.
pub const MAX_MSDU_PAYLOAD: u32 = 2304;
/// Sequence numbers live in a 4096-value space (12 bits).
pub const SEQ_MODULUS: u16 = 4096;
/// Highest traffic identifier.
pub const MAX_TID: u8 = 7;

pub type MacAddr = [u8; 6];

/// Round `len` up to the next multiple of four.
pub fn round_up4(len: u32) -> u32 {
    (len + 3) & !3
}

/// A packet handed down by higher layers.
#[derive(Debug, Clone, PartialEq)]
pub struct Msdu {
    pub id: u64,
    pub payload_len: u32,
    pub tid: u8,
    pub dest_addr: MacAddr,
    pub src_addr: MacAddr,
    /// Arrival time at the MAC, in microseconds.
    pub arrival_time_us: f64,
}

impl Msdu {
    pub fn new(
        id: u64,
        payload_len: u32,
        tid: u8,
        dest_addr: MacAddr,
        src_addr: MacAddr,
        arrival_time_us: f64,
    ) -> Result<Self> {
        if payload_len < 1 || payload_len > MAX_MSDU_PAYLOAD {
            return Err(Error::InvalidInput(format!(
                "msdu payload_len {payload_len} out of range 1..={MAX_MSDU_PAYLOAD}"
            )));
        }
        if tid > MAX_TID {
            return Err(Error::InvalidInput(format!("tid {tid} out of range 0..={MAX_TID}")));
        }
        Ok(Self { id, payload_len, tid, dest_addr, src_addr, arrival_time_us })
    }

    /// Shorthand used throughout the tests: synthetic addresses, time zero.
    pub fn test(id: u64, payload_len: u32, tid: u8) -> Self {
        Self::new(id, payload_len, tid, [0xde; 6], [0xad; 6], 0.0).expect("valid test msdu")
    }
}

/// One A-MSDU subframe: a 14-byte header followed by the MSDU body, padded
/// to a 4-byte boundary unless it is the last subframe of the aggregate.
///
/// Subframes keep their own DA/SA. MSDUs with different endpoints may share
/// an aggregate as long as they belong to the same TID; the outer MAC header
/// carries the link addresses. The simulator stores the per-subframe
/// addresses but never routes on them.
#[derive(Debug, Clone, PartialEq)]
pub struct AmsduSubframe {
    pub msdu: Msdu,
}

impl AmsduSubframe {
    pub fn new(msdu: Msdu) -> Self {
        Self { msdu }
    }

    /// Value of the subframe length field (bytes of body).
    pub fn length_field(&self) -> u32 {
        self.msdu.payload_len
    }

    /// Padding carried by this subframe when it is not the last one.
    pub fn pad_len(&self, is_last: bool) -> u32 {
        if is_last {
            0
        } else {
            let unpadded = SUBFRAME_HEADER_LEN + self.msdu.payload_len;
            round_up4(unpadded) - unpadded
        }
    }

    pub fn size(&self, is_last: bool) -> u32 {
        subframe_size(self.msdu.payload_len, is_last).expect("validated at construction")
    }
}

/// Size of one A-MSDU subframe: 14-byte header plus body, rounded up to a
/// multiple of four unless it is the last subframe (IEEE 802.11-2016
/// 9.3.2.2.2: the last subframe carries no padding).
pub fn subframe_size(payload_len: u32, is_last: bool) -> Result<u32> {
    if payload_len < 1 || payload_len > MAX_MSDU_PAYLOAD {
        return Err(Error::InvalidInput(format!(
            "payload_len {payload_len} out of range 1..={MAX_MSDU_PAYLOAD}"
        )));
    }
    let unpadded = SUBFRAME_HEADER_LEN + payload_len;
    Ok(if is_last { unpadded } else { round_up4(unpadded) })
}

/// One MAC protocol data unit. Either a plain MSDU (LLC + payload) or an
/// A-MSDU aggregate of one or more subframes. A single CRC covers the whole
/// MPDU body, so subframes are never individually retryable: if the MPDU
/// fails, every MSDU inside it is retransmitted together.
#[derive(Debug, Clone, PartialEq)]
pub struct Mpdu {
    /// Modulo-4096 sequence number.
    pub seq_no: u16,
    pub tid: u8,
    pub subframes: Vec<AmsduSubframe>,
    /// True when the body uses A-MSDU framing (always true for more than
    /// one subframe; a lone MSDU may use either framing, policy decides).
    pub is_amsdu_aggregate: bool,
    pub retry_count: u32,
}

impl Mpdu {
    pub fn new(seq_no: u16, tid: u8, msdus: Vec<Msdu>, is_amsdu_aggregate: bool) -> Result<Self> {
        if msdus.is_empty() {
            return Err(Error::InvalidInput("mpdu needs at least one msdu".into()));
        }
        if msdus.len() > 1 && !is_amsdu_aggregate {
            return Err(Error::InvalidInput(
                "multiple msdus require amsdu framing".into(),
            ));
        }
        if msdus.iter().any(|m| m.tid != tid) {
            return Err(Error::InvalidInput("all subframes must share the mpdu tid".into()));
        }
        Ok(Self {
            seq_no: seq_no % SEQ_MODULUS,
            tid,
            subframes: msdus.into_iter().map(AmsduSubframe::new).collect(),
            is_amsdu_aggregate,
            retry_count: 0,
        })
    }

    /// Total MPDU size: MAC header + body + FCS.
    pub fn size(&self) -> u32 {
        mpdu_size(self)
    }

    /// Sum of the payload bytes carried for higher layers.
    pub fn payload_bytes(&self) -> u32 {
        self.subframes.iter().map(|s| s.msdu.payload_len).sum()
    }

    pub fn msdu_count(&self) -> usize {
        self.subframes.len()
    }

    pub fn msdu_ids(&self) -> Vec<u64> {
        self.subframes.iter().map(|s| s.msdu.id).collect()
    }
}

/// Size in bytes of an MPDU.
///
/// An A-MSDU aggregate is `26 + sum(subframe sizes) + 4`; a plain MSDU is
/// `26 + 8 (LLC) + payload + 4`.
pub fn mpdu_size(mpdu: &Mpdu) -> u32 {
    if mpdu.is_amsdu_aggregate {
        let last = mpdu.subframes.len() - 1;
        let body: u32 = mpdu
            .subframes
            .iter()
            .enumerate()
            .map(|(i, s)| s.size(i == last))
            .sum();
        MAC_HEADER_LEN + body + FCS_LEN
    } else {
        MAC_HEADER_LEN + LLC_LEN + mpdu.subframes[0].msdu.payload_len + FCS_LEN
    }
}

/// Body length of an A-MSDU built from `payload_lens`, independent of the
/// MAC header and FCS. Used by the packer to honor the negotiated A-MSDU
/// size limit.
pub fn amsdu_body_size(payload_lens: &[u32]) -> Result<u32> {
    if payload_lens.is_empty() {
        return Err(Error::InvalidInput("empty amsdu".into()));
    }
    let last = payload_lens.len() - 1;
    let mut total = 0u32;
    for (i, &p) in payload_lens.iter().enumerate() {
        total += subframe_size(p, i == last)?;
    }
    Ok(total)
}

/// Framing cost of one MPDU inside an A-MPDU: 4-byte delimiter plus the
/// MPDU, padded to a 4-byte boundary unless it is the last MPDU.
pub fn framed_mpdu_size(mpdu_len: u32, is_last: bool) -> u32 {
    let body = if is_last { mpdu_len } else { round_up4(mpdu_len) };
    AMPDU_DELIMITER_LEN + body
}

/// Total PSDU length of an A-MPDU holding `mpdus`, delimiters included.
pub fn ampdu_length(mpdus: &[Mpdu]) -> u32 {
    let last = mpdus.len().saturating_sub(1);
    mpdus
        .iter()
        .enumerate()
        .map(|(i, m)| framed_mpdu_size(m.size(), i == last))
        .sum()
}

/// An ordered list of delimiter-framed MPDUs transmitted as one PSDU.
#[derive(Debug, Clone)]
pub struct Ampdu {
    pub mpdus: Vec<Mpdu>,
}

impl Ampdu {
    pub fn new(mpdus: Vec<Mpdu>) -> Result<Self> {
        if mpdus.is_empty() {
            return Err(Error::InvalidInput("ampdu needs at least one mpdu".into()));
        }
        let tid = mpdus[0].tid;
        if mpdus.iter().any(|m| m.tid != tid) {
            return Err(Error::InvalidInput("all mpdus in an ampdu share one tid".into()));
        }
        Ok(Self { mpdus })
    }

    pub fn total_len(&self) -> u32 {
        ampdu_length(&self.mpdus)
    }

    pub fn seq_nos(&self) -> Vec<u16> {
        self.mpdus.iter().map(|m| m.seq_no).collect()
    }
}
