use super::metrics::OracleTally;
use crate::zk::lowest_argmax;

/// Coordinate-wise count of `votes` (choice indices) and the lowest-index argmax.
pub fn plaintext_oracle(n_choices: usize, votes: &[usize]) -> OracleTally {
    let mut tally = vec![0u64; n_choices];
    for v in votes {
        tally[*v] += 1;
    }
    let winner = lowest_argmax(&tally);
    OracleTally { tally, winner }
}
