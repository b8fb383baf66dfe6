//! Kendall distance between linear orders and exhaustive Kemeny consensus.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

/// Largest item count accepted by [`kemeny_consensus`].
pub const MAX_ITEMS: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConsensusError {
    #[error("orders do not rank the same items")]
    ItemMismatch,
    #[error("{0} items exceed the exhaustive-search limit of 10")]
    TooManyItems(usize),
    #[error("no rankings given")]
    Empty,
}

fn positions<T: Ord>(order: &[T], items: &[&T]) -> Option<Vec<usize>> {
    let mut pos = vec![usize::MAX; items.len()];
    for (p, x) in order.iter().enumerate() {
        let i = items.binary_search(&x).ok()?;
        if pos[i] != usize::MAX {
            return None;
        }
        pos[i] = p;
    }
    pos.iter().all(|p| *p != usize::MAX).then_some(pos)
}

/// Number of item pairs ordered differently by `a` and `b`.
pub fn kendall_distance<T: Ord>(a: &[T], b: &[T]) -> Result<usize, ConsensusError> {
    let mut items: Vec<&T> = a.iter().collect();
    items.sort();
    if items.windows(2).any(|w| w[0] == w[1]) || a.len() != b.len() {
        return Err(ConsensusError::ItemMismatch);
    }
    let pa = positions(a, &items).ok_or(ConsensusError::ItemMismatch)?;
    let pb = positions(b, &items).ok_or(ConsensusError::ItemMismatch)?;
    let n = items.len();
    let mut d = 0;
    for i in 0..n {
        for j in i + 1..n {
            if (pa[i] < pa[j]) != (pb[i] < pb[j]) {
                d += 1;
            }
        }
    }
    Ok(d)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConsensusResult {
    pub order: Vec<String>,
    /// Sum of Kendall distances from the order to every input ranking.
    pub total_distance: usize,
}

struct Search {
    /// `before[a][b]`: rankings placing `a` ahead of `b`.
    before: Vec<Vec<usize>>,
    best: Option<(usize, Vec<usize>)>,
}

impl Search {
    fn dfs(&mut self, prefix: &mut Vec<usize>, used: &mut [bool], cost: usize) {
        let n = used.len();
        if self.best.as_ref().is_some_and(|(b, _)| cost >= *b) {
            return;
        }
        if prefix.len() == n {
            self.best = Some((cost, prefix.clone()));
            return;
        }
        for x in 0..n {
            if used[x] {
                continue;
            }
            // Every remaining item will follow x; count rankings that disagree.
            let added: usize = (0..n).filter(|&y| !used[y] && y != x).map(|y| self.before[y][x]).sum();
            used[x] = true;
            prefix.push(x);
            self.dfs(prefix, used, cost + added);
            prefix.pop();
            used[x] = false;
        }
    }
}

/// The linear order minimizing the total Kendall distance to `rankings`,
/// searched over all orders; among optimal orders the lexicographically
/// smallest sequence of ids wins.
pub fn kemeny_consensus(rankings: &[Vec<String>]) -> Result<ConsensusResult, ConsensusError> {
    let first = rankings.first().ok_or(ConsensusError::Empty)?;
    let mut items: Vec<&String> = first.iter().collect();
    items.sort();
    if items.windows(2).any(|w| w[0] == w[1]) {
        return Err(ConsensusError::ItemMismatch);
    }
    let k = items.len();
    if k > MAX_ITEMS {
        return Err(ConsensusError::TooManyItems(k));
    }
    let mut before = vec![vec![0usize; k]; k];
    for r in rankings {
        if r.len() != k {
            return Err(ConsensusError::ItemMismatch);
        }
        let pos = positions(r, &items).ok_or(ConsensusError::ItemMismatch)?;
        for a in 0..k {
            for b in 0..k {
                if pos[a] < pos[b] {
                    before[a][b] += 1;
                }
            }
        }
    }
    let mut search = Search { before, best: None };
    search.dfs(&mut Vec::with_capacity(k), &mut vec![false; k], 0);
    let (total_distance, order) = search.best.expect("at least one order");
    Ok(ConsensusResult { order: order.into_iter().map(|i| items[i].clone()).collect(), total_distance })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(s: &str) -> Vec<String> {
        s.chars().map(String::from).collect()
    }

    #[test]
    fn kendall_examples() {
        assert_eq!(kendall_distance(&order("abc"), &order("abc")), Ok(0));
        assert_eq!(kendall_distance(&order("abc"), &order("cba")), Ok(3));
        assert_eq!(kendall_distance(&order("abc"), &order("abd")), Err(ConsensusError::ItemMismatch));
    }

    #[test]
    fn consensus_examples() {
        let single = kemeny_consensus(&[order("cab")]).unwrap();
        assert_eq!((single.order, single.total_distance), (order("cab"), 0));
        let c = kemeny_consensus(&[order("abc"), order("abc"), order("cba")]).unwrap();
        assert_eq!((c.order, c.total_distance), (order("abc"), 3));
    }

    #[test]
    fn ties_go_to_lexicographic_order() {
        let c = kemeny_consensus(&[order("ab"), order("ba")]).unwrap();
        assert_eq!(c.order, order("ab"));
    }

    #[test]
    fn limits() {
        assert_eq!(kemeny_consensus(&[]), Err(ConsensusError::Empty));
        assert_eq!(kemeny_consensus(&[order("abcdefghijk")]), Err(ConsensusError::TooManyItems(11)));
    }
}
