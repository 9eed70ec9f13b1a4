use ace_core::actors::{judge_verify, Verdict};
use ace_core::board::{Body, EntryKind, Transcript};
use ace_core::group::{Backend, Ristretto, Tiny23};
use ace_core::harness::{
    mutate_and_judge, plaintext_oracle, run_election, AdversaryConfig, ElectionConfig, Mutation, VoterPolicyName,
};
use proptest::prelude::*;

fn tiny(n_v: u32, n_t: u32, seed: u64) -> ElectionConfig {
    ElectionConfig::new(n_v, n_t, 2, Backend::TinyTest, seed)
}

#[test]
fn runs_are_deterministic() {
    let cfg = ElectionConfig::new(4, 3, 3, Backend::Production, 21);
    let a = run_election::<Ristretto>(&cfg).unwrap().transcript.to_file_string();
    let b = run_election::<Ristretto>(&cfg).unwrap().transcript.to_file_string();
    assert_eq!(a, b);
    let c = run_election::<Ristretto>(&ElectionConfig::new(4, 3, 3, Backend::Production, 22)).unwrap();
    assert_ne!(a, c.transcript.to_file_string());
}

#[test]
fn persisted_transcript_judges_the_same() {
    let run = run_election::<Ristretto>(&ElectionConfig::new(5, 2, 4, Backend::Production, 3)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.ace");
    run.transcript.persist(&path).unwrap();
    let back = ace_core::board::load::<Ristretto>(&path).unwrap();
    assert_eq!(back, run.transcript);
    assert_eq!(judge_verify(&back).verdict, judge_verify(&run.transcript).verdict);
}

#[test]
fn audited_round_precedes_fresh_submission() {
    let run = run_election::<Tiny23>(&tiny(1, 1, 4).with_k(2)).unwrap();
    let kinds: Vec<EntryKind> = run
        .transcript
        .entries
        .iter()
        .filter(|e| e.body.voter() == Some(0))
        .map(|e| e.body.kind())
        .collect();
    use EntryKind::*;
    assert_eq!(kinds, vec![BlindedCommitment, AuditDiscard, BlindedCommitment, CastFinal, VoteValidity]);
}

#[test]
fn message_shape_per_round() {
    let run = run_election::<Ristretto>(&ElectionConfig::new(1, 3, 2, Backend::Production, 6).with_k(1)).unwrap();
    // one submission and one decision per tallier, then one opening per tallier
    assert_eq!(run.metrics.sent_by(ace_core::board::PartyId::Voter(0)), 9);
}

#[test]
fn garbage_ballot_is_excluded() {
    let adv = AdversaryConfig {
        corrupted_voters: [1].into_iter().collect(),
        voter_policy: VoterPolicyName::InvalidVoteGarbageProof,
        ..AdversaryConfig::default()
    };
    let run = run_election::<Ristretto>(&ElectionConfig::new(4, 3, 2, Backend::Production, 7).with_adversary(adv)).unwrap();
    assert!(run.metrics.verdict.as_ref().unwrap().is_accept());
    assert_eq!(run.metrics.excluded.iter().copied().collect::<Vec<_>>(), vec![1]);
    assert_eq!(run.metrics.protocol_tally.as_ref(), Some(&run.metrics.oracle.tally));
}

#[test]
fn oracle_examples() {
    let o = plaintext_oracle(2, &[0, 1, 0]);
    assert_eq!((o.tally, o.winner), (vec![2, 1], 0));
    let o = plaintext_oracle(2, &[]);
    assert_eq!((o.tally, o.winner), (vec![0, 0], 0));
}

#[test]
fn mutations_on_tiny_transcripts() {
    let adv = AdversaryConfig {
        corrupted_voters: [0].into_iter().collect(),
        voter_policy: VoterPolicyName::InvalidVoteGarbageProof,
        ..AdversaryConfig::default()
    };
    let run = run_election::<Tiny23>(&tiny(4, 2, 9).with_adversary(adv)).unwrap();
    assert!(run.metrics.verdict.as_ref().unwrap().is_accept());
    for m in Mutation::ALL {
        let v = mutate_and_judge(&run.transcript, m, &run.keyring).unwrap().verdict;
        assert_eq!(v.blame().map(|b| b.class()), Some(m.expected_blame()), "{m}: {v}");
    }
}

#[test]
fn reordered_entries_are_rejected() {
    let run = run_election::<Tiny23>(&tiny(2, 2, 10)).unwrap();
    let mut t: Transcript<Tiny23> = run.transcript.clone();
    let n = t.entries.len();
    t.entries.swap(n - 2, n - 3);
    t.reseal();
    let v = judge_verify(&t).verdict;
    assert!(matches!(v, Verdict::Reject { .. }), "{v}");
    assert!(v.blame().is_some());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn honest_tiny_runs_match_oracle(n_v in 1u32..6, n_t in 1u32..4, k in 1u32..4, seed: u64) {
        let run = run_election::<Tiny23>(&tiny(n_v, n_t, seed).with_k(k)).unwrap();
        let v = run.metrics.verdict.clone().unwrap();
        prop_assert_eq!(v, Verdict::Accept { winner: run.metrics.oracle.winner as u32 });
        prop_assert_eq!(run.metrics.protocol_tally.as_ref(), Some(&run.metrics.oracle.tally));
        let casts = run.transcript.entries.iter().filter(|e| matches!(e.body, Body::CastFinal { .. })).count();
        prop_assert_eq!(casts, n_v as usize);
    }

    #[test]
    fn file_round_trip(n_v in 1u32..4, seed: u64) {
        let run = run_election::<Tiny23>(&tiny(n_v, 2, seed)).unwrap();
        let text = run.transcript.to_file_string();
        prop_assert_eq!(&Transcript::<Tiny23>::from_file_str(&text).unwrap(), &run.transcript);
        prop_assert!(Transcript::<Ristretto>::from_file_str(&text).is_err());
    }
}
