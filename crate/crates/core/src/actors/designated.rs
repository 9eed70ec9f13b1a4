use std::collections::BTreeMap;

use rand_chacha::ChaCha20Rng;

use super::messages::{aggregate_message, Message, Payload, TallierAggregate};
use super::view::PublicContext;
use super::{Action, Env};
use crate::board::{Body, PartyId, Phase, Poio, ResultRecord, Signed};
use crate::commit::{comm_vec, derand, Commitment, VoteShare};
use crate::group::PrimeGroup;
use crate::sig::{verify_sig, KeyPair, Signature};
use crate::zk::{lowest_argmax, prove_result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DesignatedPolicy {
    Honest,
    /// Publishes `winner + 1` alongside the honest proof.
    WrongWinner,
    /// Publishes `r̃_⊥ + 1`.
    WrongRtilde,
}

/// The reconstructed tally and the public commitment it opens.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reconstruction<G: PrimeGroup> {
    pub tally: VoteShare<G>,
    pub r_total: G::Scalar,
    pub rtilde_total: G::Scalar,
    pub c_bot: Commitment<G>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReconstructError {
    /// Tallier `j`'s aggregate does not open its product on the board.
    Inconsistent(u32),
    WrongCount { have: usize, need: usize },
}

/// Checks each aggregate against `Π_i c̃_i^{(j)}` and sums them.
///
/// `products[j]` is tallier `j`'s board product over accepted voters.
pub fn check_and_reconstruct<G: PrimeGroup>(
    ctx: &PublicContext<G>,
    aggregates: &[TallierAggregate<G>],
    products: &[Commitment<G>],
) -> Result<Reconstruction<G>, ReconstructError> {
    if aggregates.len() != ctx.n_t() || products.len() != ctx.n_t() {
        return Err(ReconstructError::WrongCount { have: aggregates.len(), need: ctx.n_t() });
    }
    let mut tally = VoteShare::zero(ctx.n_choices());
    let (mut r_total, mut rtilde_total) = (G::zero(), G::zero());
    for (j, (a, p)) in aggregates.iter().zip(products).enumerate() {
        let opened = comm_vec(&ctx.params, &a.v_bot, &(a.r_bot + a.rtilde_bot));
        if opened.ok().as_ref() != Some(p) {
            return Err(ReconstructError::Inconsistent(j as u32));
        }
        tally.add_assign(&a.v_bot);
        r_total = r_total + a.r_bot;
        rtilde_total = rtilde_total + a.rtilde_bot;
    }
    let c_bot = derand(&ctx.params, &Commitment::product(products), &rtilde_total);
    Ok(Reconstruction { tally, r_total, rtilde_total, c_bot })
}

pub struct Designated<G: PrimeGroup> {
    kp: KeyPair<G>,
    pub policy: DesignatedPolicy,
    rng: ChaCha20Rng,
    aggregates: BTreeMap<u32, (TallierAggregate<G>, Signature<G>)>,
    done: bool,
    /// `T` as reconstructed, when it fit in `u64`.
    pub tally: Option<Vec<u64>>,
    pub failure: Option<String>,
}

impl<G: PrimeGroup> Designated<G> {
    pub fn new(kp: KeyPair<G>, policy: DesignatedPolicy, rng: ChaCha20Rng) -> Self {
        Designated { kp, policy, rng, aggregates: BTreeMap::new(), done: false, tally: None, failure: None }
    }

    pub fn on_message(&mut self, msg: &Message<G>, env: &Env<'_, G>) {
        let (PartyId::Tallier(j), Payload::Aggregate { aggregate, sig }) = (msg.from, &msg.payload) else {
            return;
        };
        let Some(pk) = env.ctx.record.tallier_pks.get(j as usize) else { return };
        let bytes =
            aggregate_message(env.ctx.election_id(), j, &aggregate.v_bot, &aggregate.r_bot, &aggregate.rtilde_bot);
        if verify_sig(pk, &bytes, sig) {
            self.aggregates.insert(j, (aggregate.clone(), *sig));
        }
    }

    fn post(&self, env: &Env<'_, G>, body: Body<G>) -> Action<G> {
        Action::Post(Signed::seal(&self.kp, env.ctx.election_id(), PartyId::Designated, body))
    }

    fn fail(&mut self, why: String) -> Vec<Action<G>> {
        self.failure = Some(why);
        Vec::new()
    }

    pub fn on_tick(&mut self, env: &Env<'_, G>) -> Vec<Action<G>> {
        if self.done || env.phase != Phase::Result || self.aggregates.len() != env.ctx.n_t() {
            return Vec::new();
        }
        self.done = true;
        let ctx = env.ctx;
        let aggs: Vec<TallierAggregate<G>> = self.aggregates.values().map(|(a, _)| a.clone()).collect();
        let products: Vec<Commitment<G>> = (0..ctx.n_t() as u32).map(|j| env.index.tallier_product(j)).collect();
        let rec = match check_and_reconstruct(ctx, &aggs, &products) {
            Ok(rec) => rec,
            Err(ReconstructError::Inconsistent(j)) => {
                let (a, sig) = self.aggregates[&j].clone();
                self.failure = Some(format!("aggregate of tallier {j} is inconsistent"));
                let poio = Poio::AggregateMismatch {
                    tallier: j,
                    v_bot: a.v_bot,
                    r_bot: a.r_bot,
                    rtilde_bot: a.rtilde_bot,
                    tallier_sig: sig,
                };
                return vec![self.post(env, Body::Poio(poio))];
            }
            Err(e) => return self.fail(format!("{e:?}")),
        };
        let n_v = ctx.n_v();
        let tally: Option<Vec<u64>> =
            rec.tally.coords.iter().map(|s| G::scalar_to_u64(s).filter(|t| *t <= n_v)).collect();
        let Some(tally) = tally else {
            return self.fail("tally coordinate out of range".into());
        };
        self.tally = Some(tally.clone());
        let winner = lowest_argmax(&tally);
        let eid = ctx.election_id();
        let proof = match prove_result(&ctx.result_pk, &tally, &rec.r_total, &rec.c_bot, winner, n_v, eid, &mut self.rng) {
            Ok(p) => p,
            Err(e) => return self.fail(e.to_string()),
        };
        let mut record = ResultRecord { winner: winner as u32, rtilde_total: rec.rtilde_total, proof };
        match self.policy {
            DesignatedPolicy::Honest => {}
            DesignatedPolicy::WrongWinner => record.winner = (record.winner + 1) % ctx.n_choices() as u32,
            DesignatedPolicy::WrongRtilde => record.rtilde_total = record.rtilde_total + G::one(),
        }
        vec![self.post(env, Body::Result(record))]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commit::comm_vec;
    use crate::group::{Backend, Ristretto, Tiny23, TinyScalar};
    use crate::harness::{run_election, ElectionConfig};

    fn held_inputs<G: PrimeGroup>(
        run: &crate::harness::RunOutcome<G>,
    ) -> (Vec<TallierAggregate<G>>, Vec<Commitment<G>>) {
        let mut index = crate::actors::BoardIndex::new(run.ctx.n_t());
        index.update(&run.transcript.entries);
        let accepted = index.accepted();
        let aggs = run.talliers.iter().map(|t| t.aggregate.clone().unwrap()).collect();
        let products = (0..run.ctx.n_t() as u32)
            .map(|j| {
                let cs: Vec<_> = accepted
                    .iter()
                    .map(|&(v, r)| *index.blinded(v, r, j).unwrap())
                    .collect();
                Commitment::product(&cs)
            })
            .collect();
        (aggs, products)
    }

    #[test]
    fn honest_reconstruction_opens_c_bot() {
        let run = run_election::<Ristretto>(&ElectionConfig::new(5, 3, 3, Backend::Production, 2)).unwrap();
        let (aggs, products) = held_inputs(&run);
        let rec = check_and_reconstruct(&run.ctx, &aggs, &products).unwrap();
        assert_eq!(rec.c_bot, comm_vec(&run.ctx.params, &rec.tally, &rec.r_total).unwrap());

        let mut bad = aggs.clone();
        bad[2].v_bot.coords[0] += Ristretto::one();
        assert_eq!(check_and_reconstruct(&run.ctx, &bad, &products).unwrap_err(), ReconstructError::Inconsistent(2));
        assert!(matches!(
            check_and_reconstruct(&run.ctx, &aggs[..2], &products[..2]),
            Err(ReconstructError::WrongCount { .. })
        ));
    }

    #[test]
    fn single_tallier_tally_is_its_aggregate() {
        let run = run_election::<Tiny23>(&ElectionConfig::new(4, 1, 2, Backend::TinyTest, 3)).unwrap();
        let (aggs, products) = held_inputs(&run);
        let rec = check_and_reconstruct(&run.ctx, &aggs, &products).unwrap();
        assert_eq!(rec.tally, aggs[0].v_bot);
        let counted: Vec<TinyScalar> = rec.tally.coords.clone();
        let oracle = &run.metrics.oracle.tally;
        assert_eq!(counted.iter().map(|s| s.value() as u64).collect::<Vec<_>>(), *oracle);
    }
}
