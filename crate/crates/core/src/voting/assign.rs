use rand::seq::index;

use crate::error::{Error, Result};
use crate::graph::ComparisonGraph;
use crate::stream::{self, tag};

/// How voters are attached to queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssignmentMode {
    /// Each edge gets its own k voters (Rank-Centrality baseline).
    PerEdge,
    /// Each object gets k voters who compare it with every neighbor (BSR).
    PerObject,
    /// Each (object, bucket) gets its own k voters (FBSR).
    PerBucket { max_size: usize },
}

/// One query set: `voters` compare `focal` against each of `neighbors`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryUnit {
    pub focal: usize,
    pub bucket: usize,
    pub neighbors: Vec<usize>,
    pub voters: Vec<usize>,
}

/// Pair-to-voter mapping, fixed before any vote is revealed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub mode: AssignmentMode,
    pub units: Vec<QueryUnit>,
}

/// Splits a neighbor list into `ceil(d / max_size)` contiguous buckets whose
/// sizes differ by at most one.
pub fn split_buckets(neighbors: &[usize], max_size: usize) -> Vec<Vec<usize>> {
    let d = neighbors.len();
    if d == 0 {
        return Vec::new();
    }
    let max_size = max_size.max(1);
    let count = d.div_ceil(max_size);
    let base = d / count;
    let extra = d % count;
    let mut out = Vec::with_capacity(count);
    let mut start = 0;
    for b in 0..count {
        let len = base + usize::from(b < extra);
        out.push(neighbors[start..start + len].to_vec());
        start += len;
    }
    out
}

fn sample(voters: usize, k: usize, seed: u64, keys: &[u64]) -> Vec<usize> {
    let mut rng = stream::rng(seed, keys);
    let mut picked = index::sample(&mut rng, voters, k).into_vec();
    picked.sort_unstable();
    picked
}

/// Samples `k` of `voters` without replacement for every query unit the mode demands.
pub fn assign_voters(
    graph: &ComparisonGraph,
    voters: usize,
    k: usize,
    mode: AssignmentMode,
    seed: u64,
) -> Result<Assignment> {
    if k == 0 {
        return Err(Error::param("k must be at least 1"));
    }
    if k > voters {
        return Err(Error::param(format!("k = {k} exceeds the voter count K = {voters}")));
    }
    let mut units = Vec::new();
    match mode {
        AssignmentMode::PerEdge => {
            for (a, b) in graph.edges() {
                let picked = sample(voters, k, seed, &[tag::ASSIGN, 0, a as u64, b as u64]);
                let bucket_a = graph.neighbor_index(a, b).expect("edge");
                let bucket_b = graph.neighbor_index(b, a).expect("edge");
                units.push(QueryUnit { focal: a, bucket: bucket_a, neighbors: vec![b], voters: picked.clone() });
                units.push(QueryUnit { focal: b, bucket: bucket_b, neighbors: vec![a], voters: picked });
            }
            units.sort_by_key(|u| (u.focal, u.bucket));
        }
        AssignmentMode::PerObject => {
            for i in 0..graph.n() {
                if graph.degree(i) == 0 {
                    continue;
                }
                // same key as a single bucket, so one-bucket FBSR reproduces BSR exactly
                let picked = sample(voters, k, seed, &[tag::ASSIGN, 1, i as u64, 0]);
                units.push(QueryUnit { focal: i, bucket: 0, neighbors: graph.neighbors(i).to_vec(), voters: picked });
            }
        }
        AssignmentMode::PerBucket { max_size } => {
            if max_size == 0 {
                return Err(Error::param("bucket max_size must be at least 1"));
            }
            for i in 0..graph.n() {
                for (b, bucket) in split_buckets(graph.neighbors(i), max_size).into_iter().enumerate() {
                    let picked = sample(voters, k, seed, &[tag::ASSIGN, 1, i as u64, b as u64]);
                    units.push(QueryUnit { focal: i, bucket: b, neighbors: bucket, voters: picked });
                }
            }
        }
    }
    Ok(Assignment { mode, units })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate_er_graph;

    #[test]
    fn bucket_sizes_are_near_equal() {
        let nbrs: Vec<usize> = (0..105).collect();
        let buckets = split_buckets(&nbrs, 8);
        assert_eq!(buckets.len(), 14);
        assert!(buckets.iter().all(|b| b.len() == 7 || b.len() == 8));
        assert_eq!(buckets.concat(), nbrs);
        assert_eq!(split_buckets(&nbrs[..8], 8).len(), 1);
        assert!(split_buckets(&[], 8).is_empty());
    }

    #[test]
    fn k_equal_to_k_total_assigns_everyone() {
        let g = ComparisonGraph::complete(4);
        for mode in [AssignmentMode::PerEdge, AssignmentMode::PerObject, AssignmentMode::PerBucket { max_size: 2 }] {
            let a = assign_voters(&g, 6, 6, mode, 1).unwrap();
            assert!(a.units.iter().all(|u| u.voters == (0..6).collect::<Vec<_>>()));
        }
    }

    #[test]
    fn rejects_k_above_population() {
        let g = ComparisonGraph::complete(3);
        assert!(assign_voters(&g, 5, 6, AssignmentMode::PerObject, 0).is_err());
        assert!(assign_voters(&g, 5, 0, AssignmentMode::PerObject, 0).is_err());
    }

    #[test]
    fn assignment_is_deterministic() {
        let g = generate_er_graph(30, 0.3, 2).unwrap();
        let a = assign_voters(&g, 50, 10, AssignmentMode::PerObject, 7).unwrap();
        let b = assign_voters(&g, 50, 10, AssignmentMode::PerObject, 7).unwrap();
        assert_eq!(a, b);
        let c = assign_voters(&g, 50, 10, AssignmentMode::PerObject, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn per_edge_units_share_voters() {
        let g = ComparisonGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let a = assign_voters(&g, 20, 5, AssignmentMode::PerEdge, 3).unwrap();
        assert_eq!(a.units.len(), 4);
        let find = |f: usize, nb: usize| a.units.iter().find(|u| u.focal == f && u.neighbors == [nb]).unwrap();
        assert_eq!(find(0, 1).voters, find(1, 0).voters);
        assert_eq!(find(1, 2).voters, find(2, 1).voters);
        assert!(a.units.iter().all(|u| u.voters.windows(2).all(|w| w[0] < w[1])));
    }
}
