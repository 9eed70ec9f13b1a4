//! Transcript verification from public data only.

use std::collections::BTreeSet;
use std::fmt;

use super::messages::{commitment_digest, validity_message};
use super::poio::{nizk_blame, verify_poio, PoioFinding};
use super::view::{BoardIndex, PublicContext};
use crate::board::{Body, BoardError, BoardState, PartyId, Transcript, Validity};
use crate::commit::{derand, Commitment};
use crate::group::PrimeGroup;
use crate::sig::verify_sig;
use crate::zk::verify_result;

/// Who a rejection is pinned on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Blame {
    /// The board operator accepted something the rules forbid.
    Board,
    Tallier(u32),
    Designated,
    Voter(u32),
}

impl Blame {
    pub fn of(party: PartyId) -> Blame {
        match party {
            PartyId::Authority => Blame::Board,
            PartyId::Voter(i) => Blame::Voter(i),
            PartyId::Tallier(j) => Blame::Tallier(j),
            PartyId::Designated => Blame::Designated,
        }
    }

    pub fn class(&self) -> &'static str {
        match self {
            Blame::Board => "board",
            Blame::Tallier(_) => "tallier",
            Blame::Designated => "designated",
            Blame::Voter(_) => "voter",
        }
    }
}

impl fmt::Display for Blame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Blame::Board => f.write_str("board"),
            Blame::Tallier(j) => write!(f, "tallier {j}"),
            Blame::Designated => f.write_str("designated tallier"),
            Blame::Voter(i) => write!(f, "voter {i}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Hash chain, sequence numbers or tick order.
    Integrity,
    /// Genesis record does not match its own parameters.
    Genesis,
    /// S1: at most one cast per voter.
    DoubleVote,
    /// Signatures, authorization, phases, round discipline.
    BoardRules,
    /// A valid PoIO names a misbehaving party.
    Poio,
    /// A tallier or the designated tallier posted evidence that does not hold.
    FalseAccusation,
    Validity,
    MissingValidity,
    MissingResult,
    ResultProof,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::Integrity => "integrity",
            Rule::Genesis => "genesis",
            Rule::DoubleVote => "double-vote",
            Rule::BoardRules => "board-rules",
            Rule::Poio => "poio",
            Rule::FalseAccusation => "false-accusation",
            Rule::Validity => "validity",
            Rule::MissingValidity => "missing-validity",
            Rule::MissingResult => "missing-result",
            Rule::ResultProof => "result-proof",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept { winner: u32 },
    Reject { rule: Rule, blame: Blame, seq: Option<u64>, detail: String },
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept { .. })
    }

    pub fn blame(&self) -> Option<Blame> {
        match self {
            Verdict::Accept { .. } => None,
            Verdict::Reject { blame, .. } => Some(*blame),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accept { winner } => write!(f, "accept winner={winner}"),
            Verdict::Reject { rule, blame, seq, detail } => {
                write!(f, "reject rule={rule} blame={blame}")?;
                if let Some(s) = seq {
                    write!(f, " entry={s}")?;
                }
                write!(f, ": {detail}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JudgeReport {
    pub verdict: Verdict,
    /// Voters whose ballots were excluded with valid evidence against them.
    pub excluded: BTreeSet<u32>,
    pub findings: Vec<(u64, PoioFinding)>,
}

fn reject(rule: Rule, blame: Blame, seq: Option<u64>, detail: impl Into<String>) -> Verdict {
    Verdict::Reject { rule, blame, seq, detail: detail.into() }
}

pub fn judge_verify<G: PrimeGroup>(transcript: &Transcript<G>) -> JudgeReport {
    let mut report = JudgeReport { verdict: Verdict::Accept { winner: 0 }, excluded: BTreeSet::new(), findings: Vec::new() };
    report.verdict = match judge_inner(transcript, &mut report) {
        Ok(winner) => Verdict::Accept { winner },
        Err(v) => v,
    };
    report
}

fn judge_inner<G: PrimeGroup>(t: &Transcript<G>, report: &mut JudgeReport) -> Result<u32, Verdict> {
    t.verify_chain().map_err(|e| reject(Rule::Integrity, Blame::Board, None, e.to_string()))?;
    let record = t.params().ok_or_else(|| reject(Rule::Genesis, Blame::Board, Some(0), "no genesis record"))?;
    if record.backend != G::BACKEND {
        return Err(reject(Rule::Genesis, Blame::Board, Some(0), "backend mismatch"));
    }
    let ctx = PublicContext::from_record(record).map_err(|e| reject(Rule::Genesis, Blame::Board, Some(0), e.to_string()))?;
    if ctx.params.params_hash() != record.params_hash {
        return Err(reject(Rule::Genesis, Blame::Board, Some(0), "parameter hash does not match derivation"));
    }
    if !t.entries[0].signed().verify(&record.election_id, &record.authority_pk) {
        return Err(reject(Rule::Genesis, Blame::Board, Some(0), "genesis signature"));
    }
    if !record.schedule.is_monotone() {
        return Err(reject(Rule::Genesis, Blame::Board, Some(0), "phase schedule is not monotone"));
    }

    let mut state = BoardState::new(record.clone());
    for e in &t.entries[1..] {
        if let Err(err) = state.replay(e) {
            let rule = if matches!(err, BoardError::DuplicateVote { .. }) { Rule::DoubleVote } else { Rule::BoardRules };
            return Err(reject(rule, Blame::Board, Some(e.seq), err.to_string()));
        }
    }

    let mut index = BoardIndex::new(ctx.n_t());
    index.update(&t.entries);
    let n_t = ctx.n_t();
    let eid = *ctx.election_id();

    for e in &t.entries {
        match &e.body {
            Body::Poio(p) => {
                let finding = verify_poio(&ctx, &index, p);
                report.findings.push((e.seq, finding.clone()));
                match finding {
                    PoioFinding::Valid(Blame::Voter(i)) => {
                        report.excluded.insert(i);
                    }
                    PoioFinding::Valid(b) => {
                        return Err(reject(Rule::Poio, b, Some(e.seq), format!("valid {} evidence", p.kind())));
                    }
                    PoioFinding::Invalid(why) => {
                        if !matches!(e.appender, PartyId::Voter(_)) {
                            return Err(reject(Rule::FalseAccusation, Blame::of(e.appender), Some(e.seq), why));
                        }
                    }
                }
            }
            Body::VoteValidity { voter, round, outcome } => match outcome {
                Validity::Accepted { attested, signatures } => {
                    if report.excluded.contains(voter) {
                        return Err(reject(
                            Rule::Validity,
                            Blame::of(e.appender),
                            Some(e.seq),
                            format!("voter {voter} was excluded"),
                        ));
                    }
                    let have = attested.len().min(signatures.len());
                    if have < n_t {
                        return Err(reject(
                            Rule::Validity,
                            Blame::Tallier(have as u32),
                            Some(e.seq),
                            "incomplete signature set",
                        ));
                    }
                    if attested.len() != n_t || signatures.len() != n_t {
                        return Err(reject(Rule::Validity, Blame::of(e.appender), Some(e.seq), "too many signatures"));
                    }
                    let msg = validity_message::<G>(&eid, *voter, *round, attested);
                    for j in 0..n_t {
                        let on_board = index.blinded(*voter, *round, j as u32).map(commitment_digest);
                        if on_board.as_ref() != Some(&attested[j]) {
                            return Err(reject(
                                Rule::Validity,
                                Blame::Tallier(j as u32),
                                Some(e.seq),
                                format!("attested commitment differs from the board for voter {voter}"),
                            ));
                        }
                        if !verify_sig(&record.tallier_pks[j], &msg, &signatures[j]) {
                            return Err(reject(
                                Rule::Validity,
                                Blame::Tallier(j as u32),
                                Some(e.seq),
                                format!("bad validity signature for voter {voter}"),
                            ));
                        }
                    }
                }
                Validity::Rejected(nizk) => {
                    if nizk.voter != *voter || nizk.round != *round {
                        return Err(reject(Rule::Validity, Blame::of(e.appender), Some(e.seq), "evidence names another ballot"));
                    }
                    match nizk_blame(&ctx, &index, nizk, e.appender) {
                        Blame::Voter(i) => {
                            report.excluded.insert(i);
                        }
                        b => {
                            return Err(reject(Rule::Validity, b, Some(e.seq), format!("rejection of voter {voter}")));
                        }
                    }
                }
            },
            _ => {}
        }
    }

    for (voter, _) in index.cast_voters() {
        if index.validity(voter).is_none() && !report.excluded.contains(&voter) {
            return Err(reject(
                Rule::MissingValidity,
                Blame::Tallier(0),
                None,
                format!("cast ballot of voter {voter} has no validity record"),
            ));
        }
    }

    let Some((seq, result)) = index.result() else {
        return Err(reject(Rule::MissingResult, Blame::Designated, None, "no result record"));
    };
    let products: Vec<Commitment<G>> = (0..n_t as u32).map(|j| index.tallier_product(j)).collect();
    let c_bot = derand(&ctx.params, &Commitment::product(&products), &result.rtilde_total);
    if !verify_result(&ctx.result_vk, &c_bot, result.winner as usize, &result.proof, ctx.n_v(), &eid) {
        return Err(reject(Rule::ResultProof, Blame::Designated, Some(*seq), "result proof does not verify"));
    }
    Ok(result.winner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Backend, Ristretto};
    use crate::harness::{run_election, AdversaryConfig, ElectionConfig, TallierPolicyName};

    #[test]
    fn honest_transcript_accepted() {
        let run = run_election::<Ristretto>(&ElectionConfig::new(6, 3, 3, Backend::Production, 8)).unwrap();
        let report = judge_verify(&run.transcript);
        assert_eq!(report.verdict, Verdict::Accept { winner: run.metrics.oracle.winner as u32 });
        assert!(report.excluded.is_empty());
    }

    #[test]
    fn poio_against_tallier_two() {
        let adv = AdversaryConfig {
            corrupted_talliers: [2].into_iter().collect(),
            tallier_policy: TallierPolicyName::WrongAuditReveal,
            ..AdversaryConfig::default()
        };
        let cfg = ElectionConfig::new(4, 3, 2, Backend::Production, 8).with_adversary(adv);
        let run = run_election::<Ristretto>(&cfg).unwrap();
        let v = judge_verify(&run.transcript).verdict;
        assert_eq!(v.blame(), Some(Blame::Tallier(2)));
        assert!(v.to_string().starts_with("reject rule=poio blame=tallier 2"), "{v}");
    }
}
