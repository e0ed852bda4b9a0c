//! Chance-corrected agreement between a predicted partition and ground truth.

use pathfinding::kuhn_munkres::kuhn_munkres;
use pathfinding::matrix::Matrix;

/// Block counts up to this size are matched by trying every permutation.
const EXHAUSTIVE_MAX: usize = 6;

/// Largest number of correctly placed vertices over one-to-one matchings of
/// predicted clusters to true blocks.
pub fn best_matching_hits(truth: &[usize], pred: &[usize]) -> usize {
    assert_eq!(truth.len(), pred.len(), "partition lengths differ");
    let rt = truth.iter().max().map_or(0, |&m| m + 1);
    let rp = pred.iter().max().map_or(0, |&m| m + 1);
    let s = rt.max(rp).max(1);
    let mut conf = vec![vec![0i64; s]; s];
    for (&t, &p) in truth.iter().zip(pred) {
        conf[p][t] += 1;
    }
    if s <= EXHAUSTIVE_MAX {
        let mut perm: Vec<usize> = (0..s).collect();
        let mut best = 0;
        permute(&mut perm, 0, &mut |p| {
            let hits: i64 = p.iter().enumerate().map(|(i, &j)| conf[i][j]).sum();
            best = best.max(hits);
        });
        best as usize
    } else {
        let m = Matrix::from_rows(conf).expect("square confusion matrix");
        let (total, _) = kuhn_munkres(&m);
        total as usize
    }
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// `(accuracy - 1/r) / (1 - 1/r)`, maximized over block relabelings.
pub fn overlap(truth: &[usize], pred: &[usize], r: usize) -> f64 {
    if truth.is_empty() || r < 2 {
        return 0.0;
    }
    let acc = best_matching_hits(truth, pred) as f64 / truth.len() as f64;
    let chance = 1.0 / r as f64;
    (acc - chance) / (1.0 - chance)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_and_renamed() {
        let t = vec![0, 0, 1, 1, 2, 2];
        assert_eq!(overlap(&t, &t, 3), 1.0);
        let renamed: Vec<usize> = t.iter().map(|&x| (x + 1) % 3).collect();
        assert_eq!(overlap(&t, &renamed, 3), 1.0);
    }

    #[test]
    fn hungarian_agrees_with_exhaustive() {
        // 7 blocks forces the assignment solver; 7! permutations are cheap to check.
        let t: Vec<usize> = (0..350).map(|i| i % 7).collect();
        let p: Vec<usize> = (0..350).map(|i| (i * i / 3 + i / 11) % 7).collect();
        let mut conf = vec![vec![0usize; 7]; 7];
        for (&a, &b) in t.iter().zip(&p) {
            conf[b][a] += 1;
        }
        let mut perm: Vec<usize> = (0..7).collect();
        let mut brute = 0;
        permute(&mut perm, 0, &mut |q| {
            brute = brute.max(
                q.iter()
                    .enumerate()
                    .map(|(i, &j)| conf[i][j])
                    .sum::<usize>(),
            );
        });
        assert_eq!(best_matching_hits(&t, &p), brute);
    }

    #[test]
    fn constant_prediction_is_zero_for_balanced_truth() {
        let t: Vec<usize> = (0..100).map(|i| i % 2).collect();
        assert_eq!(overlap(&t, &vec![0; 100], 2), 0.0);
    }
}
