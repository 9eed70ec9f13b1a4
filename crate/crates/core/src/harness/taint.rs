//! Taint tracking of honest-tallier shares through the adversary's view.
//!
//! The observable set is every board entry plus the full state of each
//! corrupted tallier (which includes every message it received). A leak is
//! any encoded share coordinate of the honest tallier, for an honest voter,
//! appearing verbatim in those bytes.

use std::collections::{BTreeSet, HashSet};

use super::config::{AdversaryConfig, ElectionConfig};
use super::run::{run_election, RunError, RunOutcome};
use crate::actors::VoterPolicy;
use crate::group::{Backend, PrimeGroup, Ristretto};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaintReport {
    pub honest_tallier: u32,
    /// Secret values checked.
    pub tracked: usize,
    /// Secret values found in the observable bytes.
    pub leaks: usize,
    pub observable_bytes: usize,
}

fn windows(bytes: &[u8], width: usize) -> HashSet<&[u8]> {
    bytes.windows(width).collect()
}

/// Checks the honest tallier's shares against the corrupted parties' view.
/// `include_honest` adds the honest tallier's own state as a positive control.
pub fn taint_check<G: PrimeGroup>(run: &RunOutcome<G>, corrupted: &BTreeSet<u32>, include_honest: bool) -> TaintReport {
    let n_t = run.ctx.n_t() as u32;
    let honest = (0..n_t).find(|j| !corrupted.contains(j)).expect("at least one honest tallier");
    let mut observable: Vec<u8> = Vec::new();
    for e in &run.transcript.entries {
        observable.extend(e.to_bytes());
    }
    for t in &run.talliers {
        if corrupted.contains(&t.id) || (include_honest && t.id == honest) {
            observable.extend(t.observable_bytes());
        }
    }
    let width = G::SCALAR_BYTES;
    let seen = windows(&observable, width);
    let (mut tracked, mut leaks) = (0, 0);
    for v in run.voters.iter().filter(|v| v.policy == VoterPolicy::Honest) {
        let Some(cast) = v.cast_material() else { continue };
        for s in &cast.secrets.shares[honest as usize].coords {
            tracked += 1;
            let enc = G::scalar_bytes(s);
            if seen.contains(enc.as_slice()) {
                leaks += 1;
            }
        }
    }
    TaintReport { honest_tallier: honest, tracked, leaks, observable_bytes: observable.len() }
}

/// `n_t = 3` with talliers 0 and 1 corrupted (honest-but-curious).
pub fn one_honest_tallier_run(n_v: u32, seed: u64) -> Result<(RunOutcome<Ristretto>, BTreeSet<u32>), RunError> {
    let corrupted: BTreeSet<u32> = [0, 1].into_iter().collect();
    let adv = AdversaryConfig { corrupted_talliers: corrupted.clone(), ..AdversaryConfig::default() };
    let cfg = ElectionConfig::new(n_v, 3, 3, Backend::Production, seed).with_adversary(adv);
    Ok((run_election::<Ristretto>(&cfg)?, corrupted))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn honest_share_never_observable() {
        let (run, corrupted) = one_honest_tallier_run(5, 4).unwrap();
        let r = taint_check(&run, &corrupted, false);
        assert_eq!(r.honest_tallier, 2);
        assert_eq!(r.tracked, 15);
        assert_eq!(r.leaks, 0);
        let control = taint_check(&run, &corrupted, true);
        assert_eq!(control.leaks, control.tracked);
    }
}
