//! Exponential-time reference for small trees.
//!
//! Every amalgam of two trees is a pair of top-down subtrees identified by a
//! rooted isomorphism, for some choice of roots. This module tries every root
//! pair, and at every mapped vertex pair every injective partial assignment of
//! children (an unassigned child is excluded together with its subtree). It
//! shares nothing with the matching-based engine beyond the tree types.

use std::collections::HashMap;

use thiserror::Error;

use crate::tree::{RootedTree, Tree, Vertex};

pub const MAX_ORACLE_VERTICES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("tree has {n} vertices, oracle cap is {max}")]
    TooLarge { n: usize, max: usize },
    #[error("max_vertices {0} exceeds the hard limit of {MAX_ORACLE_VERTICES}")]
    InvalidConfig(usize),
    #[error("search budget of {0} states exhausted")]
    BudgetExceeded(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_vertices: usize,
    pub node_budget: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_vertices: 9,
            node_budget: 50_000_000,
        }
    }
}

impl OracleConfig {
    fn check(&self, trees: &[&Tree]) -> Result<(), OracleError> {
        if self.max_vertices > MAX_ORACLE_VERTICES {
            return Err(OracleError::InvalidConfig(self.max_vertices));
        }
        for t in trees {
            if t.len() > self.max_vertices {
                return Err(OracleError::TooLarge {
                    n: t.len(),
                    max: self.max_vertices,
                });
            }
        }
        Ok(())
    }
}

struct Search<'a, 't> {
    rt1: &'a RootedTree<'t>,
    rt2: &'a RootedTree<'t>,
    memo: HashMap<(Vertex, Vertex), u32>,
    nodes: &'a mut u64,
    budget: u64,
}

impl Search<'_, '_> {
    /// Best cover distance over rooted isomorphisms of top-down subtrees of
    /// the subtrees at `x` and `y` that map `x` to `y`.
    fn pair(&mut self, x: Vertex, y: Vertex) -> Result<u32, OracleError> {
        if let Some(&d) = self.memo.get(&(x, y)) {
            return Ok(d);
        }
        let mut best = u32::MAX;
        self.assign(x, y, 0, 0, 0, &mut best)?;
        self.memo.insert((x, y), best);
        Ok(best)
    }

    fn assign(
        &mut self,
        x: Vertex,
        y: Vertex,
        i: usize,
        used: u64,
        running: u32,
        best: &mut u32,
    ) -> Result<(), OracleError> {
        *self.nodes += 1;
        if *self.nodes > self.budget {
            return Err(OracleError::BudgetExceeded(self.budget));
        }
        if running >= *best {
            return Ok(());
        }
        let (rt1, rt2) = (self.rt1, self.rt2);
        let cx = rt1.children(x);
        let cy = rt2.children(y);
        if i == cx.len() {
            let leftover = cy
                .iter()
                .enumerate()
                .filter(|&(j, _)| used & (1 << j) == 0)
                .map(|(_, &c)| rt2.height(c) + 1)
                .max()
                .unwrap_or(0);
            *best = (*best).min(running.max(leftover));
            return Ok(());
        }
        let child = cx[i];
        self.assign(x, y, i + 1, used, running.max(rt1.height(child) + 1), best)?;
        for (j, &other) in cy.iter().enumerate() {
            if used & (1 << j) == 0 {
                let w = self.pair(child, other)?;
                self.assign(x, y, i + 1, used | (1 << j), running.max(w), best)?;
            }
        }
        Ok(())
    }
}

fn rooted_with_budget(
    t1: &Tree,
    a: Vertex,
    t2: &Tree,
    b: Vertex,
    nodes: &mut u64,
    budget: u64,
) -> Result<u32, OracleError> {
    let rt1 = RootedTree::at(t1, a);
    let rt2 = RootedTree::at(t2, b);
    let mut search = Search {
        rt1: &rt1,
        rt2: &rt2,
        memo: HashMap::new(),
        nodes,
        budget,
    };
    search.pair(a, b)
}

/// Minimum cover distance over all rooted top-down common subtree
/// isomorphisms that map `a` to `b`.
pub fn oracle_rooted(
    t1: &Tree,
    a: Vertex,
    t2: &Tree,
    b: Vertex,
    cfg: &OracleConfig,
) -> Result<u32, OracleError> {
    cfg.check(&[t1, t2])?;
    let mut nodes = 0;
    rooted_with_budget(t1, a, t2, b, &mut nodes, cfg.node_budget)
}

/// Exact Hausdorff distance by exhaustive search over root pairs. Isomorphic
/// trees come out at 0 through the full mapping.
pub fn oracle_hausdorff(t1: &Tree, t2: &Tree, cfg: &OracleConfig) -> Result<u32, OracleError> {
    cfg.check(&[t1, t2])?;
    let mut nodes = 0;
    let mut best = u32::MAX;
    for a in 0..t1.len() {
        for b in 0..t2.len() {
            best = best.min(rooted_with_budget(
                t1,
                a,
                t2,
                b,
                &mut nodes,
                cfg.node_budget,
            )?);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::is_isomorphic;

    fn fig5() -> (Tree, Tree) {
        let t1 = Tree::new(
            11,
            &[
                (0, 1),
                (1, 5),
                (2, 4),
                (3, 4),
                (4, 5),
                (5, 10),
                (6, 7),
                (7, 8),
                (8, 10),
                (9, 10),
            ],
        )
        .unwrap();
        let t2 = Tree::new(8, &[(0, 3), (1, 3), (2, 3), (3, 7), (4, 5), (5, 6), (6, 7)]).unwrap();
        (t1, t2)
    }

    #[test]
    fn fig5_rooted_values() {
        // 11 vertices is over the public cap, so go through the inner search.
        let (t1, t2) = fig5();
        let mut nodes = 0;
        let budget = OracleConfig::default().node_budget;
        assert_eq!(
            rooted_with_budget(&t1, 10, &t2, 7, &mut nodes, budget),
            Ok(1)
        );
        assert_eq!(
            rooted_with_budget(&t1, 10, &t2, 6, &mut nodes, budget),
            Ok(2)
        );
    }

    #[test]
    fn caps() {
        let (t1, t2) = fig5();
        assert_eq!(
            oracle_hausdorff(&t1, &t2, &OracleConfig::default()),
            Err(OracleError::TooLarge { n: 11, max: 9 })
        );
        let bad = OracleConfig {
            max_vertices: 11,
            ..OracleConfig::default()
        };
        assert_eq!(
            oracle_hausdorff(&t2, &t2, &bad),
            Err(OracleError::InvalidConfig(11))
        );
        let tiny = OracleConfig {
            node_budget: 3,
            ..OracleConfig::default()
        };
        assert_eq!(
            oracle_hausdorff(&t2, &Tree::star(6).unwrap(), &tiny),
            Err(OracleError::BudgetExceeded(3))
        );
    }

    #[test]
    fn single_vertices() {
        let t = Tree::single_vertex();
        let cfg = OracleConfig::default();
        assert_eq!(oracle_rooted(&t, 0, &t, 0, &cfg), Ok(0));
        assert_eq!(oracle_hausdorff(&t, &t, &cfg), Ok(0));
    }

    #[test]
    fn star_vs_path() {
        let cfg = OracleConfig::default();
        let star = Tree::star(4).unwrap();
        let path = Tree::path(4).unwrap();
        assert_eq!(oracle_hausdorff(&star, &path, &cfg), Ok(1));
        assert_eq!(oracle_hausdorff(&path, &star, &cfg), Ok(1));
    }

    #[test]
    fn zero_exactly_on_isomorphic() {
        let cfg = OracleConfig::default();
        let a = Tree::new(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        let b = Tree::new(5, &[(4, 2), (2, 0), (2, 1), (1, 3)]).unwrap();
        assert!(is_isomorphic(&a, &b));
        assert_eq!(oracle_hausdorff(&a, &b, &cfg), Ok(0));
        assert_eq!(oracle_hausdorff(&a, &a, &cfg), Ok(0));
        assert_eq!(oracle_hausdorff(&a, &Tree::path(5).unwrap(), &cfg), Ok(1));
    }
}
