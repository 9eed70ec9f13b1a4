//! Protocol participants as deterministic, tick-driven state machines.
//!
//! Actors never touch the board directly. Each step returns [`Action`]s that
//! the scheduler applies: private messages are queued for delivery on the next
//! tick, board posts are appended immediately. Everything an actor knows about
//! the board comes from the shared [`BoardIndex`].

pub mod designated;
pub mod judge;
pub mod messages;
pub mod poio;
pub mod tallier;
pub mod view;
pub mod voter;

use crate::board::{Phase, Signed};
use crate::commit::CommitError;
use crate::group::PrimeGroup;
use crate::zk::ZkError;

pub use designated::{Designated, DesignatedPolicy, Reconstruction};
pub use judge::{judge_verify, Blame, JudgeReport, Rule, Verdict};
pub use messages::{Message, Payload, SyncItem, TallierAggregate};
pub use poio::{audit_poio_holds, verify_poio, PoioFinding};
pub use tallier::{Tallier, TallierPolicy};
pub use view::{BoardIndex, PublicContext};
pub use voter::{AuditCheck, AuditStrategy, Decision, Voter, VoterPolicy, VoterStage};

/// What an actor sees when it is stepped.
pub struct Env<'a, G: PrimeGroup> {
    pub now: u64,
    pub phase: Phase,
    pub ctx: &'a PublicContext<G>,
    pub index: &'a BoardIndex<G>,
    /// Ticks a voter waits for audit reveals.
    pub audit_timeout: u64,
}

#[derive(Clone, Debug)]
pub enum Action<G: PrimeGroup> {
    Send(Message<G>),
    Post(Signed<G>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ActorError {
    #[error(transparent)]
    Commit(#[from] CommitError),
    #[error(transparent)]
    Zk(#[from] ZkError),
    #[error("no cast ballot on the board")]
    NotCast,
}
