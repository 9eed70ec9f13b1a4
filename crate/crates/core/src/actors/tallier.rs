use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand_chacha::ChaCha20Rng;

use super::messages::{
    aggregate_message, commitment_digest, decision_message, opening_message, reveal_message, share_message,
    validity_message, Message, Payload, SyncItem, TallierAggregate,
};
use super::{Action, Env};
use crate::board::{Body, PartyId, Phase, Poio, PoioNizk, Signed, SignedShare, Validity};
use crate::codec::Encoder;
use crate::commit::{comm_vec, rerand, Commitment, VoteShare};
use crate::group::PrimeGroup;
use crate::params::GroupParams;
use crate::sig::{sign, verify_sig, KeyPair, Signature};
use crate::zk::{verify_vote, ProofVote};

/// The tallier that collects validity signatures and posts the verdicts.
pub const COORDINATOR: u32 = 0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TallierPolicy {
    Honest,
    /// Publishes a commitment to a different vote with probability `p` per round.
    AlwaysSwap { p: f64 },
    /// Reveals `r̃ + 1` on audit.
    WrongAuditReveal,
    /// Adds one to the first coordinate of its aggregate.
    WrongAggregate,
    /// Never answers audit requests.
    Silent,
}

/// What a tallier keeps for a voter's current (or cast) round.
#[derive(Clone, Debug)]
pub struct Held<G: PrimeGroup> {
    pub round: u32,
    pub commitment: Commitment<G>,
    pub proof: ProofVote<G>,
    pub voter_sig: Signature<G>,
    pub rtilde: G::Scalar,
    pub published: Commitment<G>,
    pub swapped: bool,
    pub cast: bool,
    pub opening: Option<(VoteShare<G>, G::Scalar)>,
}

/// `v · g_2 / g_1`, the commitment a swapping tallier substitutes.
pub fn swap_commitment<G: PrimeGroup>(params: &GroupParams<G>, c: &Commitment<G>) -> Commitment<G> {
    let delta = match params.g_vec.as_slice() {
        [g1, g2, ..] => G::div(g2, g1),
        [g1] => *g1,
        [] => G::identity(),
    };
    Commitment(G::op(c.element(), &delta))
}

/// Share, randomness and blinding sums over the given held openings.
pub fn aggregate<'a, G: PrimeGroup + 'a>(
    n_choices: usize,
    held: impl IntoIterator<Item = &'a Held<G>>,
) -> TallierAggregate<G> {
    let mut agg = TallierAggregate { v_bot: VoteShare::zero(n_choices), r_bot: G::zero(), rtilde_bot: G::zero() };
    for h in held {
        if let Some((share, r)) = &h.opening {
            agg.v_bot.add_assign(share);
            agg.r_bot = agg.r_bot + *r;
        }
        agg.rtilde_bot = agg.rtilde_bot + h.rtilde;
    }
    agg
}

pub struct Tallier<G: PrimeGroup> {
    pub id: u32,
    kp: KeyPair<G>,
    pub policy: TallierPolicy,
    rng: ChaCha20Rng,
    held: BTreeMap<u32, Held<G>>,
    excluded: BTreeSet<u32>,
    sync_sent: bool,
    peer_syncs: BTreeMap<u32, Vec<SyncItem<G>>>,
    validated: bool,
    own_valid: Vec<(u32, u32, Vec<[u8; 32]>, Signature<G>)>,
    peer_validity: BTreeMap<u32, Vec<(u32, u32, Signature<G>)>>,
    verdicts_posted: bool,
    pub aggregate: Option<TallierAggregate<G>>,
    /// Every blinding factor sampled, in order.
    pub rtilde_log: Vec<G::Scalar>,
    pub swaps: u32,
    pub dropped: u32,
}

impl<G: PrimeGroup> Tallier<G> {
    pub fn new(id: u32, kp: KeyPair<G>, policy: TallierPolicy, rng: ChaCha20Rng) -> Self {
        Tallier {
            id,
            kp,
            policy,
            rng,
            held: BTreeMap::new(),
            excluded: BTreeSet::new(),
            sync_sent: false,
            peer_syncs: BTreeMap::new(),
            validated: false,
            own_valid: Vec::new(),
            peer_validity: BTreeMap::new(),
            verdicts_posted: false,
            aggregate: None,
            rtilde_log: Vec::new(),
            swaps: 0,
            dropped: 0,
        }
    }

    pub fn held(&self, voter: u32) -> Option<&Held<G>> {
        self.held.get(&voter)
    }

    pub fn is_excluded(&self, voter: u32) -> bool {
        self.excluded.contains(&voter)
    }

    fn me(&self) -> PartyId {
        PartyId::Tallier(self.id)
    }

    fn send(&self, to: PartyId, payload: Payload<G>) -> Action<G> {
        Action::Send(Message { from: self.me(), to, payload })
    }

    fn post(&self, env: &Env<'_, G>, body: Body<G>) -> Action<G> {
        Action::Post(Signed::seal(&self.kp, env.ctx.election_id(), self.me(), body))
    }

    pub fn on_message(&mut self, msg: &Message<G>, env: &Env<'_, G>) -> Vec<Action<G>> {
        let eid = env.ctx.election_id();
        match (msg.from, &msg.payload) {
            (PartyId::Voter(i), Payload::Submit { round, commitment, proof, sig }) => {
                self.on_submit(env, i, *round, commitment, proof, sig)
            }
            (PartyId::Voter(i), Payload::Decision { round, cast, sig }) => {
                let ok = env
                    .ctx
                    .record
                    .voter_pks
                    .get(i as usize)
                    .is_some_and(|pk| verify_sig(pk, &decision_message::<G>(eid, i, *round, *cast), sig));
                if !ok || self.held.get(&i).map(|h| h.round) != Some(*round) {
                    self.dropped += 1;
                    return Vec::new();
                }
                if *cast {
                    if env.index.cast_round(i) == Some(*round) {
                        self.held.get_mut(&i).expect("checked above").cast = true;
                    }
                    return Vec::new();
                }
                self.on_audit(env, i)
            }
            (PartyId::Voter(i), Payload::Opening { round, share, randomness, sig }) => {
                self.on_opening(env, i, *round, share, randomness, sig)
            }
            (PartyId::Tallier(k), Payload::Sync { items }) => {
                self.peer_syncs.insert(k, items.clone());
                Vec::new()
            }
            (PartyId::Tallier(k), Payload::ValiditySigs { sigs }) if self.id == COORDINATOR => {
                self.peer_validity.insert(k, sigs.clone());
                Vec::new()
            }
            _ => {
                self.dropped += 1;
                Vec::new()
            }
        }
    }

    fn on_submit(
        &mut self,
        env: &Env<'_, G>,
        voter: u32,
        round: u32,
        c: &Commitment<G>,
        proof: &ProofVote<G>,
        sig: &Signature<G>,
    ) -> Vec<Action<G>> {
        let eid = env.ctx.election_id();
        let msg = share_message(eid, voter, self.id, round, c, &proof.digest());
        let sig_ok = env.ctx.record.voter_pks.get(voter as usize).is_some_and(|pk| verify_sig(pk, &msg, sig));
        if !sig_ok || self.held.get(&voter).is_some_and(|h| !h.cast && h.round == round) {
            self.dropped += 1;
            return Vec::new();
        }
        let rtilde = G::random_scalar(&mut self.rng);
        self.rtilde_log.push(rtilde);
        let swapped = match self.policy {
            TallierPolicy::AlwaysSwap { p } => self.rng.gen_bool(p),
            _ => false,
        };
        let base = if swapped { swap_commitment(&env.ctx.params, c) } else { *c };
        let published = rerand(&env.ctx.params, &base, &rtilde);
        let body = Body::BlindedCommitment { voter, tallier: self.id, round, blinded: published };
        let already_cast = env.index.cast_round(voter).is_some() || self.held.get(&voter).is_some_and(|h| h.cast);
        if !already_cast {
            self.swaps += u32::from(swapped);
            self.held.insert(voter, Held {
                round,
                commitment: *c,
                proof: proof.clone(),
                voter_sig: *sig,
                rtilde,
                published,
                swapped,
                cast: false,
                opening: None,
            });
        }
        // A voter that already cast is forwarded anyway so the board records the refusal.
        vec![self.post(env, body)]
    }

    fn on_audit(&mut self, env: &Env<'_, G>, voter: u32) -> Vec<Action<G>> {
        if self.policy == TallierPolicy::Silent {
            return Vec::new();
        }
        let h = self.held.remove(&voter).expect("caller checked the round");
        let mut rtilde = h.rtilde;
        if self.policy == TallierPolicy::WrongAuditReveal {
            rtilde = rtilde + G::one();
        }
        let msg = reveal_message(env.ctx.election_id(), voter, self.id, h.round, &h.commitment, &rtilde);
        let reveal = Payload::Reveal { round: h.round, commitment: h.commitment, rtilde, sig: sign(&self.kp, &msg) };
        vec![self.send(PartyId::Voter(voter), reveal), self.post(env, Body::AuditDiscard { voter, round: h.round })]
    }

    fn on_opening(
        &mut self,
        env: &Env<'_, G>,
        voter: u32,
        round: u32,
        share: &VoteShare<G>,
        r: &G::Scalar,
        sig: &Signature<G>,
    ) -> Vec<Action<G>> {
        let eid = env.ctx.election_id();
        let msg = opening_message(eid, voter, self.id, round, share, r);
        let sig_ok = env.ctx.record.voter_pks.get(voter as usize).is_some_and(|pk| verify_sig(pk, &msg, sig));
        let Some(h) = self.held.get_mut(&voter).filter(|h| h.cast && h.round == round && h.opening.is_none()) else {
            self.dropped += 1;
            return Vec::new();
        };
        if !sig_ok {
            self.dropped += 1;
            return Vec::new();
        }
        if comm_vec(&env.ctx.params, share, r).is_ok_and(|c| c == h.commitment) {
            h.opening = Some((share.clone(), *r));
            return Vec::new();
        }
        let poio = Poio::OpeningMismatch {
            voter,
            tallier: self.id,
            round,
            commitment: h.commitment,
            proof_digest: h.proof.digest(),
            submit_sig: h.voter_sig,
            share: share.clone(),
            randomness: *r,
            opening_sig: *sig,
        };
        self.excluded.insert(voter);
        vec![self.post(env, Body::Poio(poio))]
    }

    pub fn on_tick(&mut self, env: &Env<'_, G>) -> Vec<Action<G>> {
        match env.phase {
            Phase::Tally => self.tally_step(env),
            Phase::Result => self.result_step(env),
            _ => Vec::new(),
        }
    }

    fn cast_held(&self) -> impl Iterator<Item = (u32, &Held<G>)> + '_ {
        self.held.iter().filter(|(_, h)| h.cast).map(|(v, h)| (*v, h))
    }

    fn tally_step(&mut self, env: &Env<'_, G>) -> Vec<Action<G>> {
        let n_t = env.ctx.n_t() as u32;
        let mut out = Vec::new();
        if !self.sync_sent {
            self.sync_sent = true;
            let items: Vec<SyncItem<G>> = self
                .cast_held()
                .map(|(voter, h)| SyncItem {
                    voter,
                    round: h.round,
                    commitment: h.commitment,
                    voter_sig: h.voter_sig,
                    opened: h.opening.is_some() && !self.excluded.contains(&voter),
                })
                .collect();
            for k in (0..n_t).filter(|k| *k != self.id) {
                out.push(self.send(PartyId::Tallier(k), Payload::Sync { items: items.clone() }));
            }
        }
        if !self.validated && self.peer_syncs.len() + 1 == n_t as usize {
            self.validated = true;
            out.extend(self.validate(env));
        }
        if self.id == COORDINATOR && self.validated && !self.verdicts_posted && self.peer_validity.len() + 1 == n_t as usize
        {
            self.verdicts_posted = true;
            out.extend(self.post_verdicts(env));
        }
        out
    }

    /// Reconstructs every cast aggregate, checks `π_vote` and signs the verdicts.
    fn validate(&mut self, env: &Env<'_, G>) -> Vec<Action<G>> {
        let eid = *env.ctx.election_id();
        let n_t = env.ctx.n_t() as u32;
        for (_, _, p) in env.index.poios() {
            if let Poio::OpeningMismatch { voter, .. } = p {
                self.excluded.insert(*voter);
            }
        }
        let mut out = Vec::new();
        let mut verdicts = Vec::new();
        let cast: Vec<(u32, Held<G>)> = self.cast_held().map(|(v, h)| (v, h.clone())).collect();
        'voters: for (voter, h) in cast {
            if self.excluded.contains(&voter) || h.opening.is_none() {
                continue;
            }
            let mut shares = Vec::with_capacity(n_t as usize);
            for j in 0..n_t {
                if j == self.id {
                    shares.push(SignedShare { commitment: h.commitment, voter_sig: h.voter_sig });
                    continue;
                }
                let item = self.peer_syncs[&j].iter().find(|it| it.voter == voter && it.round == h.round);
                match item {
                    Some(it) if it.opened => {
                        shares.push(SignedShare { commitment: it.commitment, voter_sig: it.voter_sig })
                    }
                    _ => continue 'voters,
                }
            }
            let digest = h.proof.digest();
            let pk = &env.ctx.record.voter_pks[voter as usize];
            let sigs_ok = shares.iter().enumerate().all(|(j, s)| {
                verify_sig(pk, &share_message(&eid, voter, j as u32, h.round, &s.commitment, &digest), &s.voter_sig)
            });
            let agg = Commitment::product(shares.iter().map(|s| &s.commitment));
            if sigs_ok && verify_vote(&env.ctx.vote_vk, &agg, &h.proof, voter, &eid) {
                let Some(board) = env.index.blinded_round(voter, h.round) else { continue };
                let attested: Vec<[u8; 32]> = board.iter().map(commitment_digest).collect();
                let sig = sign(&self.kp, &validity_message::<G>(&eid, voter, h.round, &attested));
                verdicts.push((voter, h.round, sig));
                self.own_valid.push((voter, h.round, attested, sig));
            } else {
                self.excluded.insert(voter);
                if self.id == COORDINATOR {
                    let nizk = PoioNizk { voter, round: h.round, proof: h.proof.clone(), shares };
                    let body = Body::VoteValidity { voter, round: h.round, outcome: Validity::Rejected(nizk) };
                    out.push(self.post(env, body));
                }
            }
        }
        if self.id != COORDINATOR {
            out.push(self.send(PartyId::Tallier(COORDINATOR), Payload::ValiditySigs { sigs: verdicts }));
        }
        out
    }

    fn post_verdicts(&self, env: &Env<'_, G>) -> Vec<Action<G>> {
        let n_t = env.ctx.n_t() as u32;
        let mut out = Vec::new();
        for (voter, round, attested, own_sig) in &self.own_valid {
            let mut signatures = Vec::with_capacity(n_t as usize);
            for j in 0..n_t {
                let sig = if j == self.id {
                    Some(*own_sig)
                } else {
                    self.peer_validity[&j].iter().find(|(v, r, _)| v == voter && r == round).map(|(_, _, s)| *s)
                };
                match sig {
                    Some(s) => signatures.push(s),
                    None => break,
                }
            }
            if signatures.len() == n_t as usize {
                let outcome = Validity::Accepted { attested: attested.clone(), signatures };
                out.push(self.post(env, Body::VoteValidity { voter: *voter, round: *round, outcome }));
            }
        }
        out
    }

    fn result_step(&mut self, env: &Env<'_, G>) -> Vec<Action<G>> {
        if self.aggregate.is_some() {
            return Vec::new();
        }
        let n = env.ctx.n_choices();
        let accepted = env.index.accepted();
        let held: Vec<&Held<G>> =
            accepted.iter().filter_map(|(v, r)| self.held.get(v).filter(|h| h.round == *r)).collect();
        let mut agg = aggregate(n, held.iter().copied());
        // A swapped commitment opens to the shifted share.
        let swapped = G::scalar_from_u64(held.iter().filter(|h| h.swapped).count() as u64);
        match agg.v_bot.coords.as_mut_slice() {
            [a, b, ..] => {
                *a = *a - swapped;
                *b = *b + swapped;
            }
            [a] => *a = *a + swapped,
            [] => {}
        }
        if self.policy == TallierPolicy::WrongAggregate && n > 0 {
            agg.v_bot.coords[0] = agg.v_bot.coords[0] + G::one();
        }
        let msg = aggregate_message(env.ctx.election_id(), self.id, &agg.v_bot, &agg.r_bot, &agg.rtilde_bot);
        let sig = sign(&self.kp, &msg);
        self.aggregate = Some(agg.clone());
        vec![self.send(PartyId::Designated, Payload::Aggregate { aggregate: agg, sig })]
    }

    /// Canonical bytes of everything this tallier holds, for taint checks.
    pub fn observable_bytes(&self) -> Vec<u8> {
        let mut enc = Encoder::<G>::new();
        enc.u32(self.id);
        for (voter, h) in &self.held {
            enc.u32(*voter).u32(h.round).element(h.commitment.element()).element(h.published.element());
            enc.scalar(&h.rtilde);
            h.proof.encode(&mut enc);
            h.voter_sig.encode(&mut enc);
            if let Some((share, r)) = &h.opening {
                enc.scalars(&share.coords).scalar(r);
            }
        }
        for (k, items) in &self.peer_syncs {
            enc.u32(*k);
            Payload::Sync { items: items.clone() }.encode(&mut enc);
        }
        if let Some(a) = &self.aggregate {
            enc.scalars(&a.v_bot.coords).scalar(&a.r_bot).scalar(&a.rtilde_bot);
        }
        enc.finish()
    }
}
