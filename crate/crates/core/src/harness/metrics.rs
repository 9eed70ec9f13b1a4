use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::actors::{Blame, Verdict};
use crate::board::{EntryKind, PartyId};

/// A submission the board refused.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rejection {
    pub tick: u64,
    pub appender: PartyId,
    pub kind: EntryKind,
    pub error: String,
}

/// Plaintext tally over the ballots that should count.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleTally {
    pub tally: Vec<u64>,
    pub winner: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunMetrics {
    /// Private messages sent, per sender. Every send increments exactly one counter.
    pub sent: BTreeMap<PartyId, u64>,
    pub sent_bytes: BTreeMap<PartyId, u64>,
    /// Tallier-to-tallier messages, per sender.
    pub peer_messages: BTreeMap<u32, u64>,
    pub entries: BTreeMap<EntryKind, u64>,
    pub rejections: Vec<Rejection>,
    pub forced_discards: usize,
    pub actor_errors: Vec<String>,
    pub ticks: u64,
    /// Audited rounds per voter, and whether it cast.
    pub audits: Vec<u32>,
    pub cast: Vec<bool>,
    /// `(seq, kind)` of every PoIO posted.
    pub poios: Vec<(u64, String)>,
    pub oracle: OracleTally,
    /// `T` as reconstructed by the designated tallier.
    pub protocol_tally: Option<Vec<u64>>,
    pub verdict: Option<Verdict>,
    pub excluded: BTreeSet<u32>,
}

impl RunMetrics {
    pub fn sent_by(&self, party: PartyId) -> u64 {
        self.sent.get(&party).copied().unwrap_or(0)
    }

    pub fn entry_count(&self, kind: EntryKind) -> u64 {
        self.entries.get(&kind).copied().unwrap_or(0)
    }

    pub fn blame(&self) -> Option<Blame> {
        self.verdict.as_ref().and_then(|v| v.blame())
    }

    /// One row per party: `role,index,messages,bytes`.
    pub fn messages_csv(&self) -> String {
        let mut out = String::from("role,index,messages,bytes\n");
        for (party, n) in &self.sent {
            let (role, idx) = match party {
                PartyId::Authority => ("authority", 0),
                PartyId::Voter(i) => ("voter", *i),
                PartyId::Tallier(j) => ("tallier", *j),
                PartyId::Designated => ("designated", 0),
            };
            let bytes = self.sent_bytes.get(party).copied().unwrap_or(0);
            let _ = writeln!(out, "{role},{idx},{n},{bytes}");
        }
        out
    }
}
