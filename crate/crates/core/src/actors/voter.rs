use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha20Rng;

use super::messages::{decision_message, opening_message, reveal_message, share_message, Message, Payload};
use super::{Action, ActorError, Env};
use crate::board::{Body, PartyId, Poio, Signed};
use crate::commit::{rerand, share_any, share_vote, BallotSecrets, Commitment, VoteVector};
use crate::group::PrimeGroup;
use crate::sig::{sign, verify_sig, KeyPair, Signature};
use crate::zk::{forge, prove_vote, ProofVote};

/// When to stop auditing. Rounds are numbered from 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AuditStrategy {
    /// Audit `k - 1` rounds, cast round `k`.
    Fixed(u32),
    /// Cast with probability `p` in every round.
    Geometric(f64),
}

impl AuditStrategy {
    pub fn decide<R: Rng + ?Sized>(&self, round: u32, rng: &mut R) -> Decision {
        let cast = match *self {
            AuditStrategy::Fixed(k) => round + 1 >= k,
            AuditStrategy::Geometric(p) => rng.gen_bool(p),
        };
        if cast {
            Decision::Cast
        } else {
            Decision::Audit
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Audit,
    Cast,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VoterPolicy {
    Honest,
    /// Ballot `(1, 1, ..)` with a random shape-correct proof.
    InvalidVoteGarbageProof,
    /// Sends `r + 1` in the opening to tallier 0.
    WrongOpening,
    /// Submits a fresh round after casting.
    DoubleVoteAttempt,
}

/// The voter's material for one round.
#[derive(Clone, Debug)]
pub struct RoundMaterial<G: PrimeGroup> {
    pub secrets: BallotSecrets<G>,
    pub commitments: Vec<Commitment<G>>,
    pub proof: ProofVote<G>,
    pub decision_sig: Option<Signature<G>>,
    pub blinded: Vec<Commitment<G>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VoterStage {
    Ready,
    AwaitBlinded,
    AwaitReveals { since: u64 },
    Opening,
    Resubmit,
    Done,
    Halted,
}

/// Outcome of checking the reveals of an audited round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AuditCheck {
    Ok,
    Mismatch(u32),
}

pub struct Voter<G: PrimeGroup> {
    pub id: u32,
    kp: KeyPair<G>,
    vote: VoteVector<G>,
    pub policy: VoterPolicy,
    pub strategy: AuditStrategy,
    rng: ChaCha20Rng,
    pub round: u32,
    pub stage: VoterStage,
    current: Option<RoundMaterial<G>>,
    reveals: BTreeMap<u32, (Commitment<G>, G::Scalar, Signature<G>)>,
    cast: Option<RoundMaterial<G>>,
    pub cast_round: Option<u32>,
    pub audits: u32,
    pub accused: Option<u32>,
}

impl<G: PrimeGroup> Voter<G> {
    pub fn new(
        id: u32,
        kp: KeyPair<G>,
        vote: VoteVector<G>,
        policy: VoterPolicy,
        strategy: AuditStrategy,
        rng: ChaCha20Rng,
    ) -> Self {
        Voter {
            id,
            kp,
            vote,
            policy,
            strategy,
            rng,
            round: 0,
            stage: VoterStage::Ready,
            current: None,
            reveals: BTreeMap::new(),
            cast: None,
            cast_round: None,
            audits: 0,
            accused: None,
        }
    }

    pub fn vote(&self) -> &VoteVector<G> {
        &self.vote
    }

    pub fn current(&self) -> Option<&RoundMaterial<G>> {
        self.current.as_ref()
    }

    /// Secrets of the cast round, once cast.
    pub fn cast_material(&self) -> Option<&RoundMaterial<G>> {
        self.cast.as_ref()
    }

    fn send(&self, to: PartyId, payload: Payload<G>) -> Action<G> {
        Action::Send(Message { from: PartyId::Voter(self.id), to, payload })
    }

    fn post(&self, env: &Env<'_, G>, body: Body<G>) -> Action<G> {
        Action::Post(Signed::seal(&self.kp, env.ctx.election_id(), PartyId::Voter(self.id), body))
    }

    /// Fresh shares, commitments and proof, one signed submission per tallier.
    pub fn prepare_round(&mut self, env: &Env<'_, G>) -> Result<Vec<Action<G>>, ActorError> {
        let ctx = env.ctx;
        let n_t = ctx.n_t();
        let (secrets, proof) = if self.policy == VoterPolicy::InvalidVoteGarbageProof {
            let bad = VoteVector::from_u64s(&vec![1; ctx.n_choices()]);
            let secrets = share_any(&bad, n_t, &mut self.rng)?;
            (secrets, forge::random_vote_proof(ctx.n_choices(), &mut self.rng))
        } else {
            let secrets = share_vote(&self.vote, n_t, &mut self.rng)?;
            let cs = secrets.commitments(&ctx.params)?;
            let proof = prove_vote(&ctx.vote_pk, &secrets, &cs, self.id, ctx.election_id(), &mut self.rng)?;
            (secrets, proof)
        };
        let commitments = secrets.commitments(&ctx.params)?;
        let digest = proof.digest();
        let mut out = Vec::with_capacity(n_t);
        for (j, c) in commitments.iter().enumerate() {
            let msg = share_message(ctx.election_id(), self.id, j as u32, self.round, c, &digest);
            let payload = Payload::Submit { round: self.round, commitment: *c, proof: proof.clone(), sig: sign(&self.kp, &msg) };
            out.push(self.send(PartyId::Tallier(j as u32), payload));
        }
        self.current = Some(RoundMaterial { secrets, commitments, proof, decision_sig: None, blinded: Vec::new() });
        self.reveals.clear();
        Ok(out)
    }

    /// Checks every reveal against the voter's own commitment and the board.
    pub fn check_audit(&self, env: &Env<'_, G>) -> AuditCheck {
        let cur = self.current.as_ref().expect("round in progress");
        for (j, c) in cur.commitments.iter().enumerate() {
            let Some((echo, rt, _)) = self.reveals.get(&(j as u32)) else {
                return AuditCheck::Mismatch(j as u32);
            };
            if echo != c || rerand(&env.ctx.params, c, rt) != cur.blinded[j] {
                return AuditCheck::Mismatch(j as u32);
            }
        }
        AuditCheck::Ok
    }

    pub fn on_message(&mut self, msg: &Message<G>, env: &Env<'_, G>) {
        let (PartyId::Tallier(j), Payload::Reveal { round, commitment, rtilde, sig }) = (msg.from, &msg.payload) else {
            return;
        };
        if !matches!(self.stage, VoterStage::AwaitReveals { .. }) || *round != self.round {
            return;
        }
        let Some(pk) = env.ctx.record.tallier_pks.get(j as usize) else { return };
        let bytes = reveal_message(env.ctx.election_id(), self.id, j, *round, commitment, rtilde);
        if verify_sig(pk, &bytes, sig) {
            self.reveals.insert(j, (*commitment, *rtilde, *sig));
        }
    }

    pub fn on_tick(&mut self, env: &Env<'_, G>) -> Result<Vec<Action<G>>, ActorError> {
        if env.phase != crate::board::Phase::Voting {
            return Ok(Vec::new());
        }
        match self.stage {
            VoterStage::Ready => {
                self.stage = VoterStage::AwaitBlinded;
                self.prepare_round(env)
            }
            VoterStage::AwaitBlinded => {
                let Some(blinded) = env.index.blinded_round(self.id, self.round) else {
                    return Ok(Vec::new());
                };
                Ok(self.decide(env, blinded))
            }
            VoterStage::AwaitReveals { since } => {
                let n_t = env.ctx.n_t();
                if self.reveals.len() == n_t {
                    return match self.check_audit(env) {
                        AuditCheck::Ok => {
                            self.audits += 1;
                            self.round += 1;
                            self.stage = VoterStage::AwaitBlinded;
                            self.prepare_round(env)
                        }
                        AuditCheck::Mismatch(j) => {
                            let (commitment, rtilde, reveal_sig) = self.reveals[&j];
                            self.halt(j);
                            let poio = Poio::AuditMismatch {
                                voter: self.id,
                                tallier: j,
                                round: self.round,
                                commitment,
                                rtilde,
                                reveal_sig,
                            };
                            Ok(vec![self.post(env, Body::Poio(poio))])
                        }
                    };
                }
                if env.now.saturating_sub(since) >= env.audit_timeout {
                    let j = (0..n_t as u32).find(|j| !self.reveals.contains_key(j)).expect("a reveal is missing");
                    let request_sig = self.current.as_ref().and_then(|c| c.decision_sig).expect("decision was signed");
                    self.halt(j);
                    let poio = Poio::Silence { voter: self.id, tallier: j, round: self.round, request_sig };
                    return Ok(vec![self.post(env, Body::Poio(poio))]);
                }
                Ok(Vec::new())
            }
            VoterStage::Opening => {
                self.stage =
                    if self.policy == VoterPolicy::DoubleVoteAttempt { VoterStage::Resubmit } else { VoterStage::Done };
                self.open(env)
            }
            VoterStage::Resubmit => {
                self.stage = VoterStage::Done;
                self.round += 1;
                self.prepare_round(env)
            }
            VoterStage::Done | VoterStage::Halted => Ok(Vec::new()),
        }
    }

    fn halt(&mut self, accused: u32) {
        self.accused = Some(accused);
        self.stage = VoterStage::Halted;
    }

    fn decide(&mut self, env: &Env<'_, G>, blinded: Vec<Commitment<G>>) -> Vec<Action<G>> {
        let decision = self.strategy.decide(self.round, &mut self.rng);
        let cast = decision == Decision::Cast;
        let sig = sign(&self.kp, &decision_message::<G>(env.ctx.election_id(), self.id, self.round, cast));
        let cur = self.current.as_mut().expect("round in progress");
        cur.decision_sig = Some(sig);
        cur.blinded = blinded;
        let mut out: Vec<Action<G>> = (0..env.ctx.n_t() as u32)
            .map(|j| self.send(PartyId::Tallier(j), Payload::Decision { round: self.round, cast, sig }))
            .collect();
        if cast {
            out.push(self.post(env, Body::CastFinal { voter: self.id, round: self.round }));
            self.cast_round = Some(self.round);
            self.cast = self.current.clone();
            self.stage = VoterStage::Opening;
        } else {
            self.stage = VoterStage::AwaitReveals { since: env.now };
        }
        out
    }

    /// Openings of the cast round, one per tallier.
    pub fn open(&self, env: &Env<'_, G>) -> Result<Vec<Action<G>>, ActorError> {
        let (Some(round), Some(cast)) = (self.cast_round, self.cast.as_ref()) else {
            return Err(ActorError::NotCast);
        };
        if env.index.cast_round(self.id) != Some(round) {
            return Err(ActorError::NotCast);
        }
        let mut out = Vec::new();
        for (j, (share, r)) in cast.secrets.shares.iter().zip(&cast.secrets.randomness).enumerate() {
            let mut r = *r;
            if j == 0 && self.policy == VoterPolicy::WrongOpening {
                r = r + G::one();
            }
            let sig = sign(&self.kp, &opening_message(env.ctx.election_id(), self.id, j as u32, round, share, &r));
            let payload = Payload::Opening { round, share: share.clone(), randomness: r, sig };
            out.push(self.send(PartyId::Tallier(j as u32), payload));
        }
        Ok(out)
    }

    /// Called when the board refuses one of this voter's posts.
    pub fn rejected(&mut self, signed: &Signed<G>) {
        if matches!(signed.body, Body::CastFinal { .. }) {
            self.cast_round = None;
            self.cast = None;
            self.stage = VoterStage::Halted;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn decisions(s: AuditStrategy, n: u32) -> Vec<Decision> {
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        (0..n).map(|r| s.decide(r, &mut rng)).collect()
    }

    #[test]
    fn fixed_k() {
        use Decision::*;
        assert_eq!(decisions(AuditStrategy::Fixed(4), 4), vec![Audit, Audit, Audit, Cast]);
        assert_eq!(decisions(AuditStrategy::Fixed(1), 1), vec![Cast]);
    }

    #[test]
    fn geometric_mean_rounds() {
        let mut rng = ChaCha20Rng::seed_from_u64(42);
        let s = AuditStrategy::Geometric(0.5);
        let voters = 10_000;
        let total: u64 = (0..voters)
            .map(|_| (0u32..).find(|&r| s.decide(r, &mut rng) == Decision::Cast).unwrap() as u64 + 1)
            .sum();
        let mean = total as f64 / voters as f64;
        assert!((mean - 2.0).abs() <= 0.1, "mean {mean}");
    }
}
