//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are printed even when every criterion passes.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ace_core::actors::{judge_verify, Blame};
use ace_core::board::{Body, PartyId, Transcript};
use ace_core::commit::{comm_vec, derand, rerand, share_vote, Commitment, VoteShare, VoteVector};
use ace_core::group::{Backend, PrimeGroup, Ristretto, Tiny23};
use ace_core::harness::{
    audit_soundness_experiment, complexity_csv, complexity_probe, forgery_base_run, mutate_and_judge,
    receipt_forgery_experiment, run_election, AdversaryConfig, DesignatedPolicyName, ElectionConfig, Mutation,
    RunOutcome, TallierPolicyName, VoterPolicyName,
};
use ace_core::params::derive_params;
use ace_core::zk::{forge, nizk_setup, prove_result, prove_vote, verify_result, verify_vote, ProofResult, ProofVote, Relation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// 1. Honest end-to-end at n_v=100, n_t=5, 4 choices.
const HONEST_SEEDS: u64 = 20;
const HONEST_LIMIT: Duration = Duration::from_secs(30);

fn honest_end_to_end(kept: &mut Vec<Transcript<Ristretto>>) -> Outcome {
    let mut slowest = Duration::ZERO;
    for seed in 0..HONEST_SEEDS {
        let cfg = ElectionConfig::new(100, 5, 4, Backend::Production, 1000 + seed);
        let start = Instant::now();
        let run = run_election::<Ristretto>(&cfg).map_err(|e| e.to_string())?;
        let took = start.elapsed();
        slowest = slowest.max(took);
        let m = &run.metrics;
        ensure(m.protocol_tally.as_ref() == Some(&m.oracle.tally), || {
            format!("seed {seed}: T {:?} vs oracle {:?}", m.protocol_tally, m.oracle.tally)
        })?;
        let v = m.verdict.clone().unwrap();
        ensure(v.is_accept(), || format!("seed {seed}: {v}"))?;
        ensure(took < HONEST_LIMIT, || format!("seed {seed} took {took:?}"))?;
        kept.push(run.transcript);
    }
    Ok(format!("{HONEST_SEEDS} seeds, T = oracle, all accepted, slowest run {:.2}s", slowest.as_secs_f64()))
}

// 2. Undetected-cheat rate against 2^-k.
fn audit_soundness() -> Outcome {
    const TRIALS: u64 = 20_000;
    let mut parts = Vec::new();
    for k in 1..=6 {
        let r = audit_soundness_experiment(k, TRIALS, 7 + u64::from(k), 0.5).map_err(|e| e.to_string())?;
        let target = 0.5f64.powi(k as i32);
        ensure((r.expected - target).abs() < 1e-12, || format!("k={k}: expected {} != 2^-k", r.expected))?;
        ensure((r.rate - target).abs() <= 3.0 * r.sigma, || {
            format!("k={k}: rate {:.5} outside {target:.5} +- {:.5}", r.rate, 3.0 * r.sigma)
        })?;
        if k == 4 {
            ensure((0.0575..=0.0675).contains(&r.rate), || format!("k=4 rate {:.5} outside [0.0575, 0.0675]", r.rate))?;
        }
        parts.push(format!("k={k}:{:.4}", r.rate));
    }
    let always = audit_soundness_experiment(1, 1000, 3, 1.0).map_err(|e| e.to_string())?;
    ensure(always.rate == 1.0, || format!("k=1 always-cheat rate {}", always.rate))?;
    Ok(format!("{TRIALS} trials each, {}", parts.join(" ")))
}

// 3. Trapdoor equivocation on the tiny group.
fn receipt_forgery() -> Outcome {
    let run = forgery_base_run(5).map_err(|e| e.to_string())?;
    let real = receipt_forgery_experiment(&run, 1000, 11, false).map_err(|e| e.to_string())?;
    ensure(real.rate == 1.0, || format!("forgery rate {}", real.rate))?;
    let control = receipt_forgery_experiment(&run, 1000, 11, true).map_err(|e| e.to_string())?;
    ensure(control.rate < 0.01, || format!("control rate {}", control.rate))?;
    Ok(format!("1000 fakes, rate {:.3}; corrupted trapdoor {:.3}", real.rate, control.rate))
}

// 4. Commitment algebra on both backends.
const ALGEBRA_CHECKS: usize = 10_000;

fn algebra_backend<G: PrimeGroup>(n: usize, seed: u64) -> Result<[usize; 3], String> {
    let p = derive_params::<G>(n, b"ace-v1").map_err(|e| e.to_string())?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let rand_share = |rng: &mut ChaCha20Rng| VoteShare::<G> { coords: (0..n).map(|_| G::random_scalar(rng)).collect() };
    let mut failures = [0usize; 3];
    for _ in 0..ALGEBRA_CHECKS {
        let (a, b) = (rand_share(&mut rng), rand_share(&mut rng));
        let (ra, rb) = (G::random_scalar(&mut rng), G::random_scalar(&mut rng));
        let mut sum = a.clone();
        sum.add_assign(&b);
        let lhs = comm_vec(&p, &a, &ra).unwrap().combine(&comm_vec(&p, &b, &rb).unwrap());
        failures[0] += usize::from(lhs != comm_vec(&p, &sum, &(ra + rb)).unwrap());
    }
    for _ in 0..ALGEBRA_CHECKS {
        let v = rand_share(&mut rng);
        let (r, rt) = (G::random_scalar(&mut rng), G::random_scalar(&mut rng));
        let c = comm_vec(&p, &v, &r).unwrap();
        let blinded = rerand(&p, &c, &rt);
        let ok = blinded == comm_vec(&p, &v, &(r + rt)).unwrap() && derand(&p, &blinded, &rt) == c;
        failures[1] += usize::from(!ok);
    }
    for _ in 0..ALGEBRA_CHECKS {
        let n_t = rng.gen_range(1..=5);
        let vote = VoteVector::<G>::one_hot(n, rng.gen_range(0..n));
        let s = share_vote(&vote, n_t, &mut rng).unwrap();
        let product = Commitment::product(&s.commitments(&p).unwrap());
        let whole = comm_vec(&p, &VoteShare { coords: vote.coords.clone() }, &s.total_randomness()).unwrap();
        failures[2] += usize::from(s.reconstruct().coords != vote.coords || product != whole);
    }
    Ok(failures)
}

fn commitment_algebra() -> Outcome {
    let prod = algebra_backend::<Ristretto>(4, 1)?;
    let tiny = algebra_backend::<Tiny23>(2, 2)?;
    ensure(prod == [0; 3] && tiny == [0; 3], || format!("failures production {prod:?}, tiny {tiny:?}"))?;
    Ok(format!("{ALGEBRA_CHECKS} each of homomorphism, rerand/derand, sharding on both backends, 0 failures"))
}

// 5. NIZK completeness, forged proofs, per-field mutation sweep.
const NIZK_INSTANCES: usize = 10_000;

fn bump_elem<G: PrimeGroup>(e: &mut G::Element) {
    *e = G::op(e, &G::generator());
}

fn bump_scalar<G: PrimeGroup>(s: &mut G::Scalar) {
    *s = *s + G::one();
}

/// One copy of `proof` per field, with that field changed.
fn vote_proof_mutants<G: PrimeGroup>(proof: &ProofVote<G>) -> Vec<(String, ProofVote<G>)> {
    let mut out = Vec::new();
    let mut push = |name: String, f: &dyn Fn(&mut ProofVote<G>)| {
        let mut p = proof.clone();
        f(&mut p);
        out.push((name, p));
    };
    for i in 0..proof.coord_commitments.len() {
        push(format!("coord_commitments[{i}]"), &|p| bump_elem::<G>(&mut p.coord_commitments[i]));
    }
    for i in 0..proof.bit_proofs.len() {
        push(format!("bit_proofs[{i}].commit0"), &|p| bump_elem::<G>(&mut p.bit_proofs[i].commit0));
        push(format!("bit_proofs[{i}].commit1"), &|p| bump_elem::<G>(&mut p.bit_proofs[i].commit1));
        push(format!("bit_proofs[{i}].challenge0"), &|p| bump_scalar::<G>(&mut p.bit_proofs[i].challenge0));
        push(format!("bit_proofs[{i}].challenge1"), &|p| bump_scalar::<G>(&mut p.bit_proofs[i].challenge1));
        push(format!("bit_proofs[{i}].response0"), &|p| bump_scalar::<G>(&mut p.bit_proofs[i].response0));
        push(format!("bit_proofs[{i}].response1"), &|p| bump_scalar::<G>(&mut p.bit_proofs[i].response1));
    }
    push("sum_proof.commitment".into(), &|p| bump_elem::<G>(&mut p.sum_proof.commitment));
    push("sum_proof.response".into(), &|p| bump_scalar::<G>(&mut p.sum_proof.response));
    link_mutants::<G, _>(&proof.link_proof, &mut |name, f| push(name, &|p| f(&mut p.link_proof)));
    out
}

fn link_mutants<G: PrimeGroup, F>(link: &ace_core::zk::LinkProof<G>, push: &mut F)
where
    F: FnMut(String, &dyn Fn(&mut ace_core::zk::LinkProof<G>)),
{
    push("link_proof.vec_commit".into(), &|l| bump_elem::<G>(&mut l.vec_commit));
    push("link_proof.resp_r".into(), &|l| bump_scalar::<G>(&mut l.resp_r));
    for i in 0..link.coord_commits.len() {
        push(format!("link_proof.coord_commits[{i}]"), &|l| bump_elem::<G>(&mut l.coord_commits[i]));
    }
    for i in 0..link.resp_x.len() {
        push(format!("link_proof.resp_x[{i}]"), &|l| bump_scalar::<G>(&mut l.resp_x[i]));
    }
    for i in 0..link.resp_s.len() {
        push(format!("link_proof.resp_s[{i}]"), &|l| bump_scalar::<G>(&mut l.resp_s[i]));
    }
}

fn result_proof_mutants<G: PrimeGroup>(proof: &ProofResult<G>) -> Vec<(String, ProofResult<G>)> {
    let mut out = Vec::new();
    let mut push = |name: String, f: &dyn Fn(&mut ProofResult<G>)| {
        let mut p = proof.clone();
        f(&mut p);
        out.push((name, p));
    };
    for i in 0..proof.tally_commitments.len() {
        push(format!("tally_commitments[{i}]"), &|p| bump_elem::<G>(&mut p.tally_commitments[i]));
    }
    link_mutants::<G, _>(&proof.link_proof, &mut |name, f| push(name, &|p| f(&mut p.link_proof)));
    for (c, rp) in proof.comparisons.iter().enumerate() {
        for i in 0..rp.bit_commitments.len() {
            push(format!("comparisons[{c}].bit_commitments[{i}]"), &|p| {
                bump_elem::<G>(&mut p.comparisons[c].bit_commitments[i])
            });
        }
        for i in 0..rp.bit_proofs.len() {
            push(format!("comparisons[{c}].bit_proofs[{i}].commit0"), &|p| {
                bump_elem::<G>(&mut p.comparisons[c].bit_proofs[i].commit0)
            });
            push(format!("comparisons[{c}].bit_proofs[{i}].commit1"), &|p| {
                bump_elem::<G>(&mut p.comparisons[c].bit_proofs[i].commit1)
            });
            push(format!("comparisons[{c}].bit_proofs[{i}].challenge0"), &|p| {
                bump_scalar::<G>(&mut p.comparisons[c].bit_proofs[i].challenge0)
            });
            push(format!("comparisons[{c}].bit_proofs[{i}].challenge1"), &|p| {
                bump_scalar::<G>(&mut p.comparisons[c].bit_proofs[i].challenge1)
            });
            push(format!("comparisons[{c}].bit_proofs[{i}].response0"), &|p| {
                bump_scalar::<G>(&mut p.comparisons[c].bit_proofs[i].response0)
            });
            push(format!("comparisons[{c}].bit_proofs[{i}].response1"), &|p| {
                bump_scalar::<G>(&mut p.comparisons[c].bit_proofs[i].response1)
            });
        }
        push(format!("comparisons[{c}].recomposition.commitment"), &|p| {
            bump_elem::<G>(&mut p.comparisons[c].recomposition.commitment)
        });
        push(format!("comparisons[{c}].recomposition.response"), &|p| {
            bump_scalar::<G>(&mut p.comparisons[c].recomposition.response)
        });
    }
    out
}

fn nizk_suite() -> Outcome {
    const N: usize = 3;
    const EID: &[u8] = b"acceptance";
    let p = derive_params::<Ristretto>(N, b"ace-v1").map_err(|e| e.to_string())?;
    let (vpk, vvk) = nizk_setup(&p, Relation::Vote);
    let (rpk, rvk) = nizk_setup(&p, Relation::Result);
    let mut rng = ChaCha20Rng::seed_from_u64(55);

    let mut incomplete = 0;
    let mut sample_vote = None;
    for i in 0..NIZK_INSTANCES {
        let s = share_vote(&VoteVector::one_hot(N, i % N), 2, &mut rng).unwrap();
        let cs = s.commitments(&p).unwrap();
        let proof = prove_vote(&vpk, &s, &cs, i as u32, EID, &mut rng).map_err(|e| e.to_string())?;
        let agg = Commitment::product(&cs);
        if !verify_vote(&vvk, &agg, &proof, i as u32, EID) {
            incomplete += 1;
        }
        sample_vote.get_or_insert((agg, proof, i as u32));
    }
    ensure(incomplete == 0, || format!("{incomplete} honest ProofVotes rejected"))?;

    let result_instances = 200;
    let mut sample_result = None;
    for i in 0..result_instances {
        let tally: Vec<u64> = (0..N).map(|_| rng.gen_range(0..=10)).collect();
        let r = Ristretto::random_scalar(&mut rng);
        let c = comm_vec(&p, &VoteShare::from_u64s(&tally), &r).unwrap();
        let winner = ace_core::zk::lowest_argmax(&tally);
        let proof = prove_result(&rpk, &tally, &r, &c, winner, 10, EID, &mut rng).map_err(|e| e.to_string())?;
        ensure(verify_result(&rvk, &c, winner, &proof, 10, EID), || format!("honest ProofResult {i} rejected"))?;
        sample_result.get_or_insert((c, proof, winner));
    }

    let mut forged_accepted = 0;
    for i in 0..NIZK_INSTANCES {
        let c = Commitment(forge::random_element::<Ristretto, _>(&mut rng));
        if i % 2 == 0 {
            let fp = forge::random_vote_proof::<Ristretto, _>(N, &mut rng);
            forged_accepted += usize::from(verify_vote(&vvk, &c, &fp, 0, EID));
        } else {
            let fp = forge::random_result_proof::<Ristretto, _>(N, 10, &mut rng);
            forged_accepted += usize::from(verify_result(&rvk, &c, 0, &fp, 10, EID));
        }
    }
    ensure(forged_accepted == 0, || format!("{forged_accepted} forged proofs accepted"))?;

    let (agg, vote_proof, voter) = sample_vote.unwrap();
    let vote_mutants = vote_proof_mutants(&vote_proof);
    for (name, m) in &vote_mutants {
        ensure(!verify_vote(&vvk, &agg, m, voter, EID), || format!("ProofVote mutant {name} accepted"))?;
    }
    let (c, result_proof, winner) = sample_result.unwrap();
    let result_mutants = result_proof_mutants(&result_proof);
    for (name, m) in &result_mutants {
        ensure(!verify_result(&rvk, &c, winner, m, 10, EID), || format!("ProofResult mutant {name} accepted"))?;
    }
    Ok(format!(
        "{NIZK_INSTANCES} complete ProofVotes, {result_instances} complete ProofResults, {NIZK_INSTANCES} forgeries rejected, {} + {} field mutants rejected",
        vote_mutants.len(),
        result_mutants.len()
    ))
}

// 6. Mutation corpus and no false rejects.
fn mutation_corpus(honest: &[Transcript<Ristretto>]) -> Outcome {
    let adv = AdversaryConfig {
        corrupted_voters: [2].into_iter().collect(),
        voter_policy: VoterPolicyName::InvalidVoteGarbageProof,
        ..AdversaryConfig::default()
    };
    let base = run_election::<Ristretto>(&ElectionConfig::new(6, 3, 3, Backend::Production, 1).with_adversary(adv))
        .map_err(|e| e.to_string())?;
    let v = base.metrics.verdict.clone().unwrap();
    ensure(v.is_accept(), || format!("base transcript: {v}"))?;
    for m in Mutation::ALL {
        let v = mutate_and_judge(&base.transcript, m, &base.keyring).map_err(|e| e.to_string())?.verdict;
        let class = v.blame().map(|b| b.class());
        ensure(class == Some(m.expected_blame()), || format!("{m}: expected {}, got {v}", m.expected_blame()))?;
    }
    ensure(honest.len() == HONEST_SEEDS as usize, || "criterion 1 transcripts missing".into())?;
    for (i, t) in honest.iter().enumerate() {
        let v = judge_verify(t).verdict;
        ensure(v.is_accept(), || format!("honest transcript {i}: {v}"))?;
    }
    Ok(format!("{} mutations rejected with expected blame; {} honest transcripts accepted", Mutation::ALL.len(), honest.len()))
}

// 7. Complexity probe.
fn complexity() -> Outcome {
    const K: u32 = 4;
    let grid = [1, 3, 5, 10];
    let n_v = 4;
    let rows = complexity_probe::<Ristretto>(K, &grid, n_v, 17).map_err(|e| e.to_string())?;
    print!("{}", complexity_csv(&rows));
    let per_tallier = rows[0].voter_messages;
    for r in &rows {
        ensure(r.accepted, || format!("n_t={} run rejected", r.n_t))?;
        ensure(r.voter_messages <= r.voter_bound, || format!("n_t={}: {} > {}", r.n_t, r.voter_messages, r.voter_bound))?;
        ensure(r.voter_bound == u64::from(3 * K + 1) * r.n_t as u64, || format!("n_t={}: bound {}", r.n_t, r.voter_bound))?;
        ensure(r.voter_messages == per_tallier * r.n_t as u64, || {
            format!("n_t={}: {} not linear in n_t ({per_tallier} per tallier)", r.n_t, r.voter_messages)
        })?;
        ensure(r.tallier_peer_messages <= (r.n_t + n_v) as u64, || {
            format!("n_t={}: {} peer messages", r.n_t, r.tallier_peer_messages)
        })?;
    }
    let five = rows.iter().find(|r| r.n_t == 5).unwrap();
    ensure(five.voter_messages == 45, || format!("k=4, n_t=5 gave {}", five.voter_messages))?;
    let single = complexity_probe::<Ristretto>(1, &[1], 2, 17).map_err(|e| e.to_string())?;
    ensure(single[0].voter_messages == 3, || format!("k=1, n_t=1 gave {}", single[0].voter_messages))?;
    Ok(format!("k={K}: voter messages {:?} for n_t {grid:?}, {per_tallier} per tallier", rows.iter().map(|r| r.voter_messages).collect::<Vec<_>>()))
}

// 8. Policy matrix.
#[derive(Clone, Copy, Debug)]
enum Expect {
    Blame(Blame),
    /// Accepted with `T` equal to the oracle over ballots that should count.
    Unaffected,
}

fn policy_configs() -> Vec<(&'static str, AdversaryConfig, Expect)> {
    let tallier = |p| AdversaryConfig {
        corrupted_talliers: [1].into_iter().collect(),
        tallier_policy: p,
        ..AdversaryConfig::default()
    };
    let voter = |p| AdversaryConfig {
        corrupted_voters: [0, 3].into_iter().collect(),
        voter_policy: p,
        ..AdversaryConfig::default()
    };
    let designated = |p| AdversaryConfig { designated_policy: p, ..AdversaryConfig::default() };
    vec![
        ("always_swap_commitment", tallier(TallierPolicyName::AlwaysSwapCommitment), Expect::Blame(Blame::Tallier(1))),
        ("wrong_audit_reveal", tallier(TallierPolicyName::WrongAuditReveal), Expect::Blame(Blame::Tallier(1))),
        ("wrong_aggregate", tallier(TallierPolicyName::WrongAggregate), Expect::Blame(Blame::Tallier(1))),
        ("silent", tallier(TallierPolicyName::Silent), Expect::Blame(Blame::Tallier(1))),
        ("invalid_vote_garbage_proof", voter(VoterPolicyName::InvalidVoteGarbageProof), Expect::Unaffected),
        ("wrong_opening", voter(VoterPolicyName::WrongOpening), Expect::Unaffected),
        ("double_vote_attempt", voter(VoterPolicyName::DoubleVoteAttempt), Expect::Unaffected),
        ("wrong_winner", designated(DesignatedPolicyName::WrongWinner), Expect::Blame(Blame::Designated)),
        ("wrong_rtilde", designated(DesignatedPolicyName::WrongRtilde), Expect::Blame(Blame::Designated)),
    ]
}

fn policy_run(adv: &AdversaryConfig, seed: u64) -> Result<RunOutcome<Ristretto>, String> {
    let cfg = ElectionConfig::new(6, 3, 3, Backend::Production, seed).with_adversary(adv.clone());
    run_election::<Ristretto>(&cfg).map_err(|e| e.to_string())
}

fn policy_matrix() -> Outcome {
    const SEEDS: u64 = 10;
    let configs = policy_configs();
    for (name, adv, expect) in &configs {
        for seed in 0..SEEDS {
            let run = policy_run(adv, 300 + seed)?;
            let m = &run.metrics;
            let v = m.verdict.clone().unwrap();
            match expect {
                Expect::Blame(b) => {
                    ensure(v.blame() == Some(*b), || format!("{name} seed {seed}: expected {b}, got {v}"))?;
                    if matches!(b, Blame::Tallier(_)) {
                        ensure(!m.poios.is_empty(), || format!("{name} seed {seed}: no PoIO on the board"))?;
                    }
                }
                Expect::Unaffected => {
                    ensure(v.is_accept(), || format!("{name} seed {seed}: {v}"))?;
                    ensure(m.protocol_tally.as_ref() == Some(&m.oracle.tally), || {
                        format!("{name} seed {seed}: T {:?} vs oracle {:?}", m.protocol_tally, m.oracle.tally)
                    })?;
                }
            }
        }
        let again = (policy_run(adv, 300)?, policy_run(adv, 300)?);
        ensure(again.0.transcript == again.1.transcript, || format!("{name}: rerun differs"))?;
    }
    Ok(format!("{} policies x {SEEDS} seeds, blame or no effect on T, reruns identical", configs.len()))
}

// 9. Double-vote inhibition.
fn double_vote() -> Outcome {
    let mut attempts = 0;
    for seed in 0..10u64 {
        let corrupted: Vec<u32> = vec![(seed % 6) as u32, ((seed + 3) % 6) as u32];
        let adv = AdversaryConfig {
            corrupted_voters: corrupted.iter().copied().collect(),
            voter_policy: VoterPolicyName::DoubleVoteAttempt,
            ..AdversaryConfig::default()
        };
        let run = policy_run(&adv, 500 + seed)?;
        let m = &run.metrics;
        for &i in &corrupted {
            attempts += 1;
            // Talliers relay the fresh round; the board refuses every relay.
            let refusal = format!("voter {i} already cast a ballot");
            let dup = m
                .rejections
                .iter()
                .filter(|r| matches!(r.appender, PartyId::Tallier(_)) && r.error == refusal)
                .count();
            ensure(dup == 3, || format!("seed {seed}: voter {i} second round refused {dup} of 3 times"))?;
            let cast_round = run.voters[i as usize].cast_round;
            let late = run.transcript.entries.iter().any(|e| {
                matches!(e.body, Body::BlindedCommitment { voter, round, .. } if voter == i && Some(round) > cast_round)
            });
            ensure(!late, || format!("seed {seed}: voter {i} post-cast commitment on the board"))?;
            let casts: Vec<u32> = run
                .transcript
                .entries
                .iter()
                .filter_map(|e| match e.body {
                    Body::CastFinal { voter, round } if voter == i => Some(round),
                    _ => None,
                })
                .collect();
            ensure(casts.len() == 1 && Some(casts[0]) == cast_round, || {
                format!("seed {seed}: voter {i} casts {casts:?}")
            })?;
            ensure(!m.excluded.contains(&i), || format!("seed {seed}: voter {i} excluded"))?;
        }
        let v = m.verdict.clone().unwrap();
        ensure(v.is_accept(), || format!("seed {seed}: {v}"))?;
        ensure(m.protocol_tally.as_ref() == Some(&m.oracle.tally), || format!("seed {seed}: tally differs"))?;
    }
    Ok(format!("{attempts}/{attempts} second casts rejected at the board, first votes counted"))
}

fn main() -> ExitCode {
    let mut honest = Vec::new();
    let mut failed = 0;
    let mut report = |n: u32, title: &str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {n} ({title}): {detail} [{secs:.1}s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {n} ({title}): {why} [{secs:.1}s]");
            }
        }
    };
    report(1, "honest end-to-end", &mut || honest_end_to_end(&mut honest));
    report(2, "audit-or-cast soundness", &mut audit_soundness);
    report(3, "receipt-freeness equivocation", &mut receipt_forgery);
    report(4, "commitment algebra", &mut commitment_algebra);
    report(5, "NIZK suite", &mut nizk_suite);
    report(6, "judge mutation corpus", &mut || mutation_corpus(&honest));
    report(7, "complexity probe", &mut complexity);
    report(8, "dispute flows", &mut policy_matrix);
    report(9, "double-vote inhibition", &mut double_vote);
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
