//! Selective-repeat ARQ over MPDUs: block-ack bitmap generation at the
//! receiver, scoreboard and retransmission selection at the sender, and
//! in-order MSDU release.
//!
//! An MPDU is the retry unit. When an A-MSDU fails its CRC, every MSDU
//! inside it is retransmitted together; subframes are never retried
//! individually. Sequence numbers live modulo 4096 with windows of at most
//! 64, so window membership is always unambiguous.
//!
//! The Block-Ack response itself is assumed delivered error-free: it is a
//! small control frame sent at the basic rate.

use std::collections::{BTreeMap, BTreeSet};

use crate::frames::{Ampdu, Mpdu, Msdu, SEQ_MODULUS};
use crate::{Error, Result};

/// `(seq + n) mod 4096`.
pub fn seq_add(seq: u16, n: u16) -> u16 {
    (seq.wrapping_add(n)) % SEQ_MODULUS
}

/// Distance from `from` forward to `to` in sequence space.
pub fn seq_offset(from: u16, to: u16) -> u16 {
    (to + SEQ_MODULUS - from) % SEQ_MODULUS
}

/// True when `seq` lies in `[start, start + size)` modulo 4096.
pub fn seq_in_window(start: u16, size: u16, seq: u16) -> bool {
    seq_offset(start, seq) < size
}

/// A block-ack bitmap covering `win_size` sequence numbers from `start_seq`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaBitmap {
    pub start_seq: u16,
    /// True at offset `i` means `start_seq + i` was received CRC-clean.
    pub bits: Vec<bool>,
}

impl BaBitmap {
    pub fn acked(&self, seq: u16) -> bool {
        let off = seq_offset(self.start_seq, seq) as usize;
        off < self.bits.len() && self.bits[off]
    }
}

/// Score a received A-MPDU against the failed set: the bitmap is true
/// exactly at the positions of MPDUs that arrived CRC-clean.
pub fn receiver_score(ampdu: &Ampdu, failed: &BTreeSet<u16>, win_start: u16, win_size: u16) -> BaBitmap {
    debug_assert!(failed.iter().all(|f| ampdu.mpdus.iter().any(|m| m.seq_no == *f)));
    let mut bits = vec![false; win_size as usize];
    for mpdu in &ampdu.mpdus {
        let off = seq_offset(win_start, mpdu.seq_no) as usize;
        debug_assert!(off < win_size as usize, "mpdu outside the ba window");
        if !failed.contains(&mpdu.seq_no) {
            bits[off] = true;
        }
    }
    BaBitmap { start_seq: win_start, bits }
}

/// What one block-ack did to the sender's window.
#[derive(Debug, Default)]
pub struct BaOutcome {
    /// Sequence numbers to retransmit, lowest offset first. The MPDUs stay
    /// in the window with their retry_count already incremented.
    pub retransmit: Vec<u16>,
    /// MPDUs newly acknowledged and removed from the window.
    pub released: usize,
    /// MPDUs that exhausted their retries; the window advanced past them.
    pub dropped: Vec<Mpdu>,
}

/// Sender-side scoreboard for one (receiver, TID) block-ack session.
#[derive(Debug)]
pub struct BaWindow {
    win_start: u16,
    win_size: u16,
    retry_limit: u32,
    next_seq: u16,
    sent_unacked: BTreeMap<u16, Mpdu>,
}

impl BaWindow {
    pub fn new(start: u16, win_size: u16, retry_limit: u32) -> Self {
        debug_assert!(win_size >= 1 && win_size <= 64);
        Self {
            win_start: start % SEQ_MODULUS,
            win_size,
            retry_limit,
            next_seq: start % SEQ_MODULUS,
            sent_unacked: BTreeMap::new(),
        }
    }

    pub fn win_start(&self) -> u16 {
        self.win_start
    }

    pub fn win_size(&self) -> u16 {
        self.win_size
    }

    pub fn next_seq(&self) -> u16 {
        self.next_seq
    }

    pub fn outstanding(&self) -> usize {
        self.sent_unacked.len()
    }

    /// Sequence slots still free for fresh MPDUs.
    pub fn room_for_fresh(&self) -> u16 {
        self.win_size - seq_offset(self.win_start, self.next_seq)
    }

    /// Assign the next fresh sequence number. The caller must have checked
    /// `room_for_fresh`.
    pub fn assign_seq(&mut self) -> u16 {
        debug_assert!(self.room_for_fresh() > 0, "sequence space exhausted");
        let seq = self.next_seq;
        self.next_seq = seq_add(self.next_seq, 1);
        seq
    }

    pub fn register_sent(&mut self, mpdu: Mpdu) {
        debug_assert!(seq_in_window(self.win_start, self.win_size, mpdu.seq_no));
        self.sent_unacked.insert(mpdu.seq_no, mpdu);
    }

    pub fn get(&self, seq: u16) -> Option<&Mpdu> {
        self.sent_unacked.get(&seq)
    }

    /// MSDUs sitting in unacknowledged MPDUs (for conservation audits).
    pub fn queued_msdus(&self) -> usize {
        self.sent_unacked.values().map(|m| m.msdu_count()).sum()
    }

    /// Process one block-ack for the MPDU set `sent` (the sequence numbers
    /// actually transmitted in the scored A-MPDU).
    ///
    /// Acked MPDUs leave the window. Unacked ones that were part of `sent`
    /// get `retry_count` incremented and are queued for retransmission in
    /// full; past the retry limit they are dropped instead and the window
    /// advances over them. `win_start` ends at the lowest outstanding
    /// sequence number, or at `next_seq` when nothing is outstanding.
    pub fn process_ba(&mut self, bitmap: &BaBitmap, sent: &[u16]) -> Result<BaOutcome> {
        if bitmap.start_seq != self.win_start {
            return Err(Error::ProtocolState(format!(
                "bitmap start {} does not match window start {}",
                bitmap.start_seq, self.win_start
            )));
        }
        let mut out = BaOutcome::default();
        // Walk in window order so retransmissions come out lowest-first.
        let mut order: Vec<u16> = sent.to_vec();
        order.sort_by_key(|&s| seq_offset(self.win_start, s));
        for seq in order {
            if bitmap.acked(seq) {
                if self.sent_unacked.remove(&seq).is_some() {
                    out.released += 1;
                }
            } else if let Some(mpdu) = self.sent_unacked.get_mut(&seq) {
                mpdu.retry_count += 1;
                if mpdu.retry_count > self.retry_limit {
                    out.dropped.push(self.sent_unacked.remove(&seq).expect("present"));
                } else {
                    out.retransmit.push(seq);
                }
            }
        }
        self.advance();
        Ok(out)
    }

    fn advance(&mut self) {
        if self.sent_unacked.is_empty() {
            self.win_start = self.next_seq;
            return;
        }
        self.win_start = self
            .sent_unacked
            .keys()
            .copied()
            .min_by_key(|&s| seq_offset(self.win_start, s))
            .expect("nonempty");
    }
}

/// One MSDU released to the upper layer at the receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct ReleasedMsdu {
    pub msdu: Msdu,
    pub seq_no: u16,
}

/// Receiver-side reorder buffer: buffers out-of-order MPDUs and releases
/// MSDUs strictly in sequence order, once each.
#[derive(Debug)]
pub struct ReorderBuffer {
    next_seq: u16,
    buffered: BTreeMap<u16, Vec<Msdu>>,
}

impl ReorderBuffer {
    pub fn new(start: u16) -> Self {
        Self { next_seq: start % SEQ_MODULUS, buffered: BTreeMap::new() }
    }

    pub fn next_seq(&self) -> u16 {
        self.next_seq
    }

    pub fn buffered_msdus(&self) -> usize {
        self.buffered.values().map(|v| v.len()).sum()
    }

    /// Accept a CRC-clean MPDU. Duplicates (already buffered or already
    /// released) are ignored.
    pub fn accept(&mut self, mpdu: &Mpdu) {
        // Anything more than a window behind next_seq has been released.
        if seq_offset(mpdu.seq_no, self.next_seq) > 0
            && seq_offset(mpdu.seq_no, self.next_seq) <= 64
        {
            return;
        }
        self.buffered
            .entry(mpdu.seq_no)
            .or_insert_with(|| mpdu.subframes.iter().map(|s| s.msdu.clone()).collect());
    }

    /// Release every in-order MSDU currently available.
    pub fn release_in_order(&mut self) -> Vec<ReleasedMsdu> {
        let mut out = Vec::new();
        while let Some(msdus) = self.buffered.remove(&self.next_seq) {
            let seq = self.next_seq;
            out.extend(msdus.into_iter().map(|msdu| ReleasedMsdu { msdu, seq_no: seq }));
            self.next_seq = seq_add(self.next_seq, 1);
        }
        out
    }

    /// The sender's window moved to `new_start` (it dropped retry-exhausted
    /// MPDUs). Flush everything below it: buffered MPDUs release, gaps are
    /// the dropped ones and will never arrive.
    pub fn advance_to(&mut self, new_start: u16) -> Vec<ReleasedMsdu> {
        let mut out = Vec::new();
        while self.next_seq != new_start {
            if let Some(msdus) = self.buffered.remove(&self.next_seq) {
                let seq = self.next_seq;
                out.extend(msdus.into_iter().map(|msdu| ReleasedMsdu { msdu, seq_no: seq }));
            }
            self.next_seq = seq_add(self.next_seq, 1);
        }
        out.extend(self.release_in_order());
        out
    }
}
