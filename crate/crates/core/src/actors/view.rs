use std::collections::{BTreeMap, HashMap};

use crate::board::{Body, BoardEntry, ParamsRecord, PartyId, Poio, ResultRecord, Validity};
use crate::commit::Commitment;
use crate::group::PrimeGroup;
use crate::params::{derive_params, GroupParams, ParamsError};
use crate::zk::{nizk_setup, ProvingKey, Relation, VerifyingKey};

/// Everything derivable from the genesis record.
#[derive(Clone, Debug)]
pub struct PublicContext<G: PrimeGroup> {
    pub record: ParamsRecord<G>,
    pub params: GroupParams<G>,
    pub vote_pk: ProvingKey<G>,
    pub vote_vk: VerifyingKey<G>,
    pub result_pk: ProvingKey<G>,
    pub result_vk: VerifyingKey<G>,
}

impl<G: PrimeGroup> PublicContext<G> {
    pub fn from_record(record: &ParamsRecord<G>) -> Result<Self, ParamsError> {
        let params = derive_params::<G>(record.n_choices as usize, &record.domain_tag)?;
        Ok(Self::new(record.clone(), params))
    }

    pub fn new(record: ParamsRecord<G>, params: GroupParams<G>) -> Self {
        let (vote_pk, vote_vk) = nizk_setup(&params, Relation::Vote);
        let (result_pk, result_vk) = nizk_setup(&params, Relation::Result);
        PublicContext { record, params, vote_pk, vote_vk, result_pk, result_vk }
    }

    pub fn election_id(&self) -> &[u8; 32] {
        &self.record.election_id
    }

    pub fn n_t(&self) -> usize {
        self.record.n_t()
    }

    pub fn n_v(&self) -> u64 {
        self.record.n_v()
    }

    pub fn n_choices(&self) -> usize {
        self.params.n_choices()
    }
}

/// Incrementally maintained lookup tables over board entries.
#[derive(Clone, Debug)]
pub struct BoardIndex<G: PrimeGroup> {
    n_t: usize,
    processed: usize,
    blinded: HashMap<(u32, u32), Vec<Option<Commitment<G>>>>,
    cast: BTreeMap<u32, u32>,
    validity: BTreeMap<u32, (u64, PartyId, u32, Validity<G>)>,
    poios: Vec<(u64, PartyId, Poio<G>)>,
    result: Option<(u64, ResultRecord<G>)>,
}

impl<G: PrimeGroup> BoardIndex<G> {
    pub fn new(n_t: usize) -> Self {
        BoardIndex {
            n_t,
            processed: 0,
            blinded: HashMap::new(),
            cast: BTreeMap::new(),
            validity: BTreeMap::new(),
            poios: Vec::new(),
            result: None,
        }
    }

    /// Indexes entries not yet seen. `entries` must extend the previous slice.
    pub fn update(&mut self, entries: &[BoardEntry<G>]) {
        for e in &entries[self.processed..] {
            self.add(e);
        }
        self.processed = entries.len();
    }

    fn add(&mut self, e: &BoardEntry<G>) {
        match &e.body {
            Body::BlindedCommitment { voter, tallier, round, blinded } => {
                let slot = self.blinded.entry((*voter, *round)).or_insert_with(|| vec![None; self.n_t]);
                if let Some(s) = slot.get_mut(*tallier as usize) {
                    *s = Some(*blinded);
                }
            }
            Body::CastFinal { voter, round } => {
                self.cast.entry(*voter).or_insert(*round);
            }
            Body::VoteValidity { voter, round, outcome } => {
                self.validity.entry(*voter).or_insert((e.seq, e.appender, *round, outcome.clone()));
            }
            Body::Poio(p) => self.poios.push((e.seq, e.appender, p.clone())),
            Body::Result(r)
                if self.result.is_none() => {
                    self.result = Some((e.seq, r.clone()));
                }
            _ => {}
        }
    }

    pub fn blinded(&self, voter: u32, round: u32, tallier: u32) -> Option<&Commitment<G>> {
        self.blinded.get(&(voter, round)).and_then(|v| v.get(tallier as usize)).and_then(|c| c.as_ref())
    }

    /// All `n_t` blinded commitments for a round, if complete.
    pub fn blinded_round(&self, voter: u32, round: u32) -> Option<Vec<Commitment<G>>> {
        self.blinded.get(&(voter, round)).and_then(|v| v.iter().copied().collect())
    }

    pub fn cast_round(&self, voter: u32) -> Option<u32> {
        self.cast.get(&voter).copied()
    }

    pub fn cast_voters(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.cast.iter().map(|(v, r)| (*v, *r))
    }

    pub fn validity(&self, voter: u32) -> Option<&(u64, PartyId, u32, Validity<G>)> {
        self.validity.get(&voter)
    }

    pub fn validities(&self) -> impl Iterator<Item = (u32, &(u64, PartyId, u32, Validity<G>))> + '_ {
        self.validity.iter().map(|(v, x)| (*v, x))
    }

    /// Voters whose cast ballot carries an accepted validity record.
    pub fn accepted(&self) -> Vec<(u32, u32)> {
        self.validity
            .iter()
            .filter(|(_, (_, _, _, v))| matches!(v, Validity::Accepted { .. }))
            .map(|(voter, (_, _, round, _))| (*voter, *round))
            .collect()
    }

    pub fn poios(&self) -> &[(u64, PartyId, Poio<G>)] {
        &self.poios
    }

    pub fn result(&self) -> Option<&(u64, ResultRecord<G>)> {
        self.result.as_ref()
    }

    /// `Π_i c̃_i^{(j)}` over accepted voters' cast rounds.
    pub fn tallier_product(&self, tallier: u32) -> Commitment<G> {
        let items: Vec<Commitment<G>> =
            self.accepted().iter().filter_map(|(v, r)| self.blinded(*v, *r, tallier).copied()).collect();
        Commitment::product(&items)
    }
}
