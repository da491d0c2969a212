//! Accuracy of an estimated score vector against the truth.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::voting::WeightVector;

/// Relative L2 error `‖π − π̃‖₂ / ‖π̃‖₂`.
pub fn rel_l2<S: Scalar>(estimate: &[S], truth: &[S]) -> Result<S> {
    if estimate.len() != truth.len() {
        return Err(Error::param(format!("length mismatch: {} vs {}", estimate.len(), truth.len())));
    }
    let diff: S = estimate.iter().zip(truth).map(|(&a, &b)| (a - b) * (a - b)).sum();
    let norm: S = truth.iter().map(|&b| b * b).sum();
    if !(norm > S::zero()) {
        return Err(Error::param("reference vector has zero norm"));
    }
    Ok((diff / norm).sqrt())
}

pub fn rel_l2_weights<S: Scalar>(estimate: &WeightVector<S>, truth: &WeightVector<S>) -> Result<S> {
    rel_l2(estimate.as_slice(), truth.as_slice())
}

/// Counts inversions by merge sort, O(n log n).
fn count_inversions(seq: &mut [usize], buf: &mut [usize]) -> u64 {
    let n = seq.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut inv = {
        let (left, right) = seq.split_at_mut(mid);
        let (bl, br) = buf.split_at_mut(mid);
        count_inversions(left, bl) + count_inversions(right, br)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if seq[i] <= seq[j] {
            buf[k] = seq[i];
            i += 1;
        } else {
            buf[k] = seq[j];
            // every remaining left element is larger than seq[j]
            inv += (mid - i) as u64;
            j += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&seq[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&seq[j..n]);
    seq.copy_from_slice(&buf[..n]);
    inv
}

fn positions(ranking: &[usize]) -> Result<Vec<usize>> {
    let n = ranking.len();
    let mut pos = vec![usize::MAX; n];
    for (r, &x) in ranking.iter().enumerate() {
        if x >= n || pos[x] != usize::MAX {
            return Err(Error::param("ranking is not a permutation of 0..n"));
        }
        pos[x] = r;
    }
    Ok(pos)
}

/// Kendall's τ-a between two rankings of `0..n` (each lists objects best first).
pub fn kendall_tau(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::param(format!("rankings cover different object sets ({} vs {})", a.len(), b.len())));
    }
    let n = a.len();
    let pos_b = positions(b)?;
    positions(a)?;
    if n < 2 {
        return Ok(1.0);
    }
    let mut seq: Vec<usize> = a.iter().map(|&x| pos_b[x]).collect();
    let mut buf = vec![0; n];
    let discordant = count_inversions(&mut seq, &mut buf) as f64;
    let pairs = (n * (n - 1) / 2) as f64;
    Ok((pairs - 2.0 * discordant) / pairs)
}

/// τ between the rankings induced by two weight vectors (descending, ties by index).
pub fn kendall_tau_weights<S: Scalar>(estimate: &WeightVector<S>, truth: &WeightVector<S>) -> Result<f64> {
    kendall_tau(&estimate.ranking(), &truth.ranking())
}
