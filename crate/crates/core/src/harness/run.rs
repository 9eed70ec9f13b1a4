//! The deterministic scheduler.
//!
//! Time advances in ticks. On each tick the board moves to the scheduled
//! phase, every message sent on the previous tick is delivered in a seeded
//! shuffled order, and then voters, talliers and the designated tallier are
//! stepped in that order. Board posts take effect immediately; messages
//! arrive one tick later.

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

use super::config::{ConfigError, ElectionConfig};
use super::metrics::{Rejection, RunMetrics};
use super::oracle::plaintext_oracle;
use crate::actors::{
    judge_verify, Action, BoardIndex, Designated, Env, Message, PublicContext, Tallier, Voter, VoterPolicy,
};
use crate::board::{Body, Board, BoardError, ParamsRecord, PartyId, Transcript};
use crate::commit::VoteVector;
use crate::group::PrimeGroup;
use crate::params::{derive_params, ParamsError};
use crate::sig::KeyPair;

/// Domain tag for generator derivation in harness runs.
pub const DOMAIN_TAG: &[u8] = b"ace-v1";

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("config asks for backend {0}, run was instantiated for another")]
    Backend(crate::group::Backend),
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error("board: {0}")]
    Board(#[from] BoardError),
}

/// Every signing key of a run. Only the harness and mutation tooling see this.
#[derive(Clone, Debug)]
pub struct Keyring<G: PrimeGroup> {
    pub authority: KeyPair<G>,
    pub voters: Vec<KeyPair<G>>,
    pub talliers: Vec<KeyPair<G>>,
    pub designated: KeyPair<G>,
}

impl<G: PrimeGroup> Keyring<G> {
    pub fn key_for(&self, party: PartyId) -> Option<&KeyPair<G>> {
        match party {
            PartyId::Authority => Some(&self.authority),
            PartyId::Voter(i) => self.voters.get(i as usize),
            PartyId::Tallier(j) => self.talliers.get(j as usize),
            PartyId::Designated => Some(&self.designated),
        }
    }
}

/// Independent stream for one `(label, index)` under a master seed.
pub fn derive_rng(seed: u64, label: &str, index: u64) -> ChaCha20Rng {
    let mut h = Sha256::new();
    h.update(b"ace/harness/rng/v1");
    h.update(seed.to_be_bytes());
    h.update((label.len() as u64).to_be_bytes());
    h.update(label.as_bytes());
    h.update(index.to_be_bytes());
    ChaCha20Rng::from_seed(h.finalize().into())
}

pub struct RunOutcome<G: PrimeGroup> {
    pub config: ElectionConfig,
    pub transcript: Transcript<G>,
    pub metrics: RunMetrics,
    pub keyring: Keyring<G>,
    pub ctx: PublicContext<G>,
    pub voters: Vec<Voter<G>>,
    pub talliers: Vec<Tallier<G>>,
    pub designated: Designated<G>,
    /// Ground-truth choice of every voter.
    pub votes: Vec<usize>,
}

struct Sim<G: PrimeGroup> {
    board: Board<G>,
    index: BoardIndex<G>,
    queue: Vec<Message<G>>,
    metrics: RunMetrics,
}

impl<G: PrimeGroup> Sim<G> {
    fn apply(&mut self, actions: Vec<Action<G>>, now: u64, voters: &mut [Voter<G>]) {
        for a in actions {
            match a {
                Action::Send(m) => {
                    *self.metrics.sent.entry(m.from).or_default() += 1;
                    *self.metrics.sent_bytes.entry(m.from).or_default() += m.payload.to_bytes().len() as u64;
                    if let (PartyId::Tallier(j), PartyId::Tallier(_)) = (m.from, m.to) {
                        *self.metrics.peer_messages.entry(j).or_default() += 1;
                    }
                    self.queue.push(m);
                }
                Action::Post(signed) => {
                    let kind = signed.body.kind();
                    let appender = signed.appender;
                    let poio = match &signed.body {
                        Body::Poio(p) => Some(p.kind().to_string()),
                        _ => None,
                    };
                    match self.board.append(signed.clone(), now) {
                        Ok(seq) => {
                            *self.metrics.entries.entry(kind).or_default() += 1;
                            if let Some(p) = poio {
                                self.metrics.poios.push((seq, p));
                            }
                        }
                        Err(e) => {
                            self.metrics.rejections.push(Rejection { tick: now, appender, kind, error: e.to_string() });
                            if let PartyId::Voter(i) = appender {
                                voters[i as usize].rejected(&signed);
                            }
                        }
                    }
                }
            }
        }
        self.index.update(self.board.entries());
    }
}

pub fn run_election<G: PrimeGroup>(cfg: &ElectionConfig) -> Result<RunOutcome<G>, RunError> {
    cfg.validate()?;
    let e = &cfg.election;
    if e.backend != G::BACKEND {
        return Err(RunError::Backend(e.backend));
    }
    let (n_v, n_t, n_choices, seed) = (e.n_v as usize, e.n_t as usize, e.n_choices as usize, e.seed);

    let mut key_rng = derive_rng(seed, "keys", 0);
    let keyring = Keyring {
        authority: KeyPair::generate(&mut key_rng),
        voters: (0..n_v).map(|_| KeyPair::generate(&mut key_rng)).collect(),
        talliers: (0..n_t).map(|_| KeyPair::generate(&mut key_rng)).collect(),
        designated: KeyPair::generate(&mut key_rng),
    };
    let params = derive_params::<G>(n_choices, DOMAIN_TAG)?;
    let config_digest = cfg.digest();
    let mut h = Sha256::new();
    h.update(b"ace/election-id/v1");
    h.update(seed.to_be_bytes());
    h.update(config_digest);
    let record = ParamsRecord {
        election_id: h.finalize().into(),
        backend: G::BACKEND,
        n_choices: n_choices as u32,
        domain_tag: DOMAIN_TAG.to_vec(),
        params_hash: params.params_hash(),
        config_digest,
        voter_pks: keyring.voters.iter().map(|k| k.pk).collect(),
        tallier_pks: keyring.talliers.iter().map(|k| k.pk).collect(),
        designated_pk: keyring.designated.pk,
        authority_pk: keyring.authority.pk,
        schedule: cfg.phases.schedule(),
    };
    let ctx = PublicContext::new(record.clone(), params);
    let board = Board::open(record, keyring.authority.clone())?;

    let dist = WeightedIndex::new(cfg.weights()).map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let mut vote_rng = derive_rng(seed, "votes", 0);
    let votes: Vec<usize> = (0..n_v).map(|_| dist.sample(&mut vote_rng)).collect();

    let adv = &cfg.adversary;
    let mut voters: Vec<Voter<G>> = (0..n_v as u32)
        .map(|i| {
            Voter::new(
                i,
                keyring.voters[i as usize].clone(),
                VoteVector::one_hot(n_choices, votes[i as usize]),
                adv.voter_policy(i),
                cfg.audit.strategy(),
                derive_rng(seed, "voter", u64::from(i)),
            )
        })
        .collect();
    let mut talliers: Vec<Tallier<G>> = (0..n_t as u32)
        .map(|j| {
            Tallier::new(j, keyring.talliers[j as usize].clone(), adv.tallier_policy(j), derive_rng(seed, "tallier", u64::from(j)))
        })
        .collect();
    let mut designated = Designated::new(keyring.designated.clone(), adv.designated_policy(), derive_rng(seed, "designated", 0));

    let mut sim = Sim { board, index: BoardIndex::new(n_t), queue: Vec::new(), metrics: RunMetrics::default() };
    sim.index.update(sim.board.entries());
    let mut sched_rng = derive_rng(seed, "schedule", 0);
    let timeout = cfg.audit.timeout;

    for now in 0..=cfg.phases.verification {
        match sim.board.advance(now) {
            Ok(_) => {}
            Err(BoardError::OpenSessions(_)) => {
                sim.metrics.forced_discards += sim.board.force_discard_open(now)?;
                sim.board.advance(now)?;
            }
            Err(e) => return Err(e.into()),
        }
        sim.index.update(sim.board.entries());
        let phase = sim.board.phase();

        let mut inbox = std::mem::take(&mut sim.queue);
        inbox.shuffle(&mut sched_rng);
        let mut actions = Vec::new();
        {
            let env = Env { now, phase, ctx: &ctx, index: &sim.index, audit_timeout: timeout };
            for m in &inbox {
                match m.to {
                    PartyId::Voter(i) => {
                        if let Some(v) = voters.get_mut(i as usize) {
                            v.on_message(m, &env)
                        }
                    }
                    PartyId::Tallier(j) => {
                        if let Some(t) = talliers.get_mut(j as usize) {
                            actions.extend(t.on_message(m, &env))
                        }
                    }
                    PartyId::Designated => designated.on_message(m, &env),
                    PartyId::Authority => {}
                }
            }
        }
        sim.apply(actions, now, &mut voters);

        let mut actions = Vec::new();
        {
            let env = Env { now, phase, ctx: &ctx, index: &sim.index, audit_timeout: timeout };
            for v in voters.iter_mut() {
                match v.on_tick(&env) {
                    Ok(a) => actions.extend(a),
                    Err(err) => sim.metrics.actor_errors.push(format!("voter {}: {err}", v.id)),
                }
            }
            for t in talliers.iter_mut() {
                actions.extend(t.on_tick(&env));
            }
            actions.extend(designated.on_tick(&env));
        }
        sim.apply(actions, now, &mut voters);
    }

    let transcript = sim.board.transcript();
    let mut metrics = sim.metrics;
    metrics.ticks = cfg.phases.verification + 1;
    metrics.audits = voters.iter().map(|v| v.audits).collect();
    metrics.cast = voters.iter().map(|v| v.cast_round.is_some()).collect();
    let counted: Vec<usize> = voters
        .iter()
        .filter(|v| {
            v.cast_round.is_some() && matches!(v.policy, VoterPolicy::Honest | VoterPolicy::DoubleVoteAttempt)
        })
        .map(|v| votes[v.id as usize])
        .collect();
    metrics.oracle = plaintext_oracle(n_choices, &counted);
    metrics.protocol_tally = designated.tally.clone();
    let report = judge_verify(&transcript);
    metrics.excluded = report.excluded;
    metrics.verdict = Some(report.verdict);

    Ok(RunOutcome { config: cfg.clone(), transcript, metrics, keyring, ctx, voters, talliers, designated, votes })
}
