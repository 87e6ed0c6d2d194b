//! Ground-truth automorphism orbits for small groups.
//!
//! A depth-first search over generator images: candidate images must match
//! the generator's order and centrality, and every partial assignment must
//! extend to a well-defined homomorphism on the subgroup generated so far
//! (checked by closing the graph pairs; any collision prunes the branch).
//! Completed maps are checked for surjectivity. Accepted automorphisms
//! merge ranks into orbits until the search space is exhausted, so the
//! partition is exact, never sampled.
//!
//! The search is single-threaded with deterministic candidate order, and
//! a hard node budget: exceeding it reports failure rather than a wrong
//! partition.

use crate::group::{ElementSet, Group};
use crate::words;
use crate::{Error, Result};

/// Hard cap on the group order the oracle accepts.
pub const MAX_ORACLE_ORDER: u64 = 128;

/// Default search-node budget.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

const UNSET: u32 = u32::MAX;

/// An exact partition of the group into automorphism orbits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    blocks: Vec<ElementSet>,
}

impl OrbitPartition {
    pub fn blocks(&self) -> &[ElementSet] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, rank: u64) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(rank))
    }

    /// Wire format: one hex bitmap per block.
    pub fn to_hex_list(&self) -> Vec<String> {
        self.blocks.iter().map(|b| b.to_hex()).collect()
    }
}

struct Tables {
    order: usize,
    mul: Vec<u32>,
    elem_order: Vec<u64>,
    central: Vec<bool>,
}

impl Tables {
    fn build(group: &Group) -> Tables {
        let order = group.order() as usize;
        let elems = group.elements();
        let mut mul = vec![0u32; order * order];
        for (a, ea) in elems.iter().enumerate() {
            for (b, eb) in elems.iter().enumerate() {
                mul[a * order + b] = group.rank(&group.mul_unchecked(ea, eb)) as u32;
            }
        }
        let elem_order = elems.iter().map(|e| group.order_of(e)).collect();
        let central = elems.iter().map(|e| group.is_central(e)).collect();
        Tables {
            order,
            mul,
            elem_order,
            central,
        }
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.order + b as usize]
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = x;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb) as usize] = ra.min(rb);
        }
    }
}

/// Exact orbit partition of the full automorphism group action.
pub fn automorphism_orbits(group: &Group, node_budget: u64) -> Result<OrbitPartition> {
    automorphism_orbits_with(group, node_budget, |_| Ok(()))
}

/// Same as [`automorphism_orbits`], invoking the callback on every
/// accepted automorphism (as a rank permutation).
pub fn automorphism_orbits_with(
    group: &Group,
    node_budget: u64,
    mut on_automorphism: impl FnMut(&[u32]) -> Result<()>,
) -> Result<OrbitPartition> {
    if group.order() > MAX_ORACLE_ORDER {
        return Err(Error::BudgetExceeded {
            what: "automorphism search over group order".into(),
            needed: group.order(),
            budget: MAX_ORACLE_ORDER,
        });
    }
    let tables = Tables::build(group);
    let gens: Vec<u32> = group
        .generators()
        .iter()
        .map(|g| group.rank(g) as u32)
        .collect();

    let mut search = Search {
        tables: &tables,
        gens: &gens,
        chosen: Vec::with_capacity(gens.len()),
        nodes: 0,
        node_budget,
        uf: UnionFind::new(tables.order),
        on_automorphism: &mut on_automorphism,
    };
    search.run(0)?;

    let mut by_root: std::collections::BTreeMap<u32, ElementSet> =
        std::collections::BTreeMap::new();
    let order = group.order();
    for r in 0..order as u32 {
        let root = search.uf.find(r);
        by_root
            .entry(root)
            .or_insert_with(|| ElementSet::empty(order))
            .insert(r as u64);
    }
    Ok(OrbitPartition {
        blocks: by_root.into_values().collect(),
    })
}

struct Search<'a, F: FnMut(&[u32]) -> Result<()>> {
    tables: &'a Tables,
    gens: &'a [u32],
    chosen: Vec<u32>,
    nodes: u64,
    node_budget: u64,
    uf: UnionFind,
    on_automorphism: &'a mut F,
}

impl<F: FnMut(&[u32]) -> Result<()>> Search<'_, F> {
    fn run(&mut self, level: usize) -> Result<()> {
        if level == self.gens.len() {
            return Ok(()); // no generators: the trivial group
        }
        let gen = self.gens[level] as usize;
        for cand in 0..self.tables.order as u32 {
            // Cheap invariants first: automorphisms preserve element order
            // and centrality.
            if self.tables.elem_order[cand as usize] != self.tables.elem_order[gen]
                || self.tables.central[cand as usize] != self.tables.central[gen]
            {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.node_budget {
                return Err(Error::BudgetExceeded {
                    what: "automorphism search nodes".into(),
                    needed: self.nodes,
                    budget: self.node_budget,
                });
            }
            self.chosen.push(cand);
            if let Some(map) = self.close_graph() {
                if self.chosen.len() == self.gens.len() {
                    // Complete assignment: the graph closure is total and
                    // collision-free, so it is a homomorphism; accept it
                    // if it is also surjective.
                    if is_surjective(&map) {
                        (self.on_automorphism)(&map)?;
                        for (r, &img) in map.iter().enumerate() {
                            self.uf.union(r as u32, img);
                        }
                    }
                } else {
                    self.run(self.chosen.len())?;
                }
            }
            self.chosen.pop();
        }
        Ok(())
    }

    /// Close the subgroup of pairs (gen_i, chosen_i) inside G x G. Returns
    /// the partial map first -> second, or None on a collision (the
    /// assignment violates a relation).
    fn close_graph(&self) -> Option<Vec<u32>> {
        let order = self.tables.order;
        let mut map = vec![UNSET; order];
        map[0] = 0; // identity to identity
        let mut queue: Vec<u32> = vec![0];
        while let Some(a) = queue.pop() {
            let fa = map[a as usize];
            for (i, &h) in self.chosen.iter().enumerate() {
                let na = self.tables.mul(a, self.gens[i]);
                let nb = self.tables.mul(fa, h);
                let slot = &mut map[na as usize];
                if *slot == UNSET {
                    *slot = nb;
                    queue.push(na);
                } else if *slot != nb {
                    return None;
                }
            }
        }
        Some(map)
    }
}

fn is_surjective(map: &[u32]) -> bool {
    let mut seen = vec![false; map.len()];
    let mut count = 0usize;
    for &img in map {
        debug_assert!(img != UNSET);
        if !seen[img as usize] {
            seen[img as usize] = true;
            count += 1;
        }
    }
    count == map.len()
}

/// Decide whether some automorphism-invariant subset containing the
/// identity fails to be a word image.
///
/// Word images are enumerated exactly: power-word images for the abelian
/// kind (every word image on an abelian group is one), the canonical
/// catalog for the class-2 kinds. Candidate subsets are the unions of
/// oracle orbits containing the identity.
pub fn has_impostor(group: &Group, node_budget: u64, eval_budget: u64) -> Result<bool> {
    let orbits = automorphism_orbits(group, node_budget)?;
    let blocks = orbits.blocks();
    if blocks.len() > crate::extraspecial::MAX_ORBITS {
        return Err(Error::BudgetExceeded {
            what: "candidate enumeration over orbits".into(),
            needed: blocks.len() as u64,
            budget: crate::extraspecial::MAX_ORBITS as u64,
        });
    }

    let images: std::collections::BTreeSet<String> = if group.is_abelian_kind() {
        let e = group.exponents().e;
        (1..=e)
            .filter(|k| e.is_multiple_of(*k))
            .map(|k| words::power_image(group, k as i64).to_hex())
            .collect()
    } else {
        words::word_images_catalog(group, eval_budget)?
            .iter()
            .map(|entry| entry.image.to_hex())
            .collect()
    };

    let id_rank = group.rank(&group.identity());
    let id_block = orbits
        .block_of(id_rank)
        .expect("identity block exists");
    let free: Vec<usize> = (0..blocks.len()).filter(|&i| i != id_block).collect();
    for mask in 0u64..(1 << free.len()) {
        let mut set = blocks[id_block].clone();
        for (bit, &idx) in free.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                set.union_with(&blocks[idx]);
            }
        }
        if !images.contains(&set.to_hex()) {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preset;

    const NODES: u64 = DEFAULT_NODE_BUDGET;
    const EVALS: u64 = words::DEFAULT_EVAL_BUDGET;

    #[test]
    fn prime_cyclic_orbits() {
        // The full linear group is transitive on nonzero elements.
        let g = preset::resolve("z5").unwrap();
        let orbits = automorphism_orbits(&g, NODES).unwrap();
        assert_eq!(orbits.block_count(), 2);
        let sizes: Vec<u64> = orbits.blocks().iter().map(|b| b.len()).collect();
        assert_eq!(sizes, vec![1, 4]);
    }

    #[test]
    fn z4_orbits() {
        // Aut(Z4) = {1, -1}: orbits {0}, {2}, {1, 3}.
        let g = preset::resolve("z4").unwrap();
        let orbits = automorphism_orbits(&g, NODES).unwrap();
        assert_eq!(orbits.block_count(), 3);
        assert_eq!(orbits.block_of(0), Some(0));
        assert_eq!(orbits.block_of(1), orbits.block_of(3));
        assert_ne!(orbits.block_of(2), orbits.block_of(1));
    }

    #[test]
    fn quaternion_orbits_and_aut_size() {
        let g = preset::resolve("q2").unwrap();
        let mut count = 0u64;
        let orbits = automorphism_orbits_with(&g, NODES, |_| {
            count += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(orbits.block_count(), 3);
        assert_eq!(count, 24); // Aut is the symmetric group on 4 letters
    }

    #[test]
    fn accepted_maps_are_automorphisms() {
        // Exhaustive homomorphism-and-bijection check on small groups.
        for name in ["q2", "d8", "z2x4", "z3x3"] {
            let g = preset::resolve(name).unwrap();
            let elems = g.elements();
            automorphism_orbits_with(&g, NODES, |map| {
                let mut seen = vec![false; map.len()];
                for &img in map {
                    assert!(!seen[img as usize], "not injective in {name}");
                    seen[img as usize] = true;
                }
                for (a, ea) in elems.iter().enumerate() {
                    for (b, eb) in elems.iter().enumerate() {
                        let ab = g.rank(&g.mul_unchecked(ea, eb)) as usize;
                        let fa = g.unrank(map[a] as u64).unwrap();
                        let fb = g.unrank(map[b] as u64).unwrap();
                        let fab = g.rank(&g.mul_unchecked(&fa, &fb));
                        assert_eq!(fab, map[ab] as u64, "not a homomorphism in {name}");
                    }
                }
                Ok(())
            })
            .unwrap();
        }
    }

    #[test]
    fn oracle_matches_classification_counts() {
        let expect = [("q2", 3usize), ("d8", 4), ("es27-expp", 3), ("es27-expp2", 5)];
        for (name, count) in expect {
            let g = preset::resolve(name).unwrap();
            let orbits = automorphism_orbits(&g, NODES).unwrap();
            assert_eq!(orbits.block_count(), count, "{name}");
        }
    }

    #[test]
    fn orbits_refine_order_and_centrality() {
        for name in ["q2", "d8", "z4", "z2x4", "es27-expp2"] {
            let g = preset::resolve(name).unwrap();
            let orbits = automorphism_orbits(&g, NODES).unwrap();
            for block in orbits.blocks() {
                let mut ranks = block.iter();
                let first = g.unrank(ranks.next().unwrap()).unwrap();
                let order = g.order_of(&first);
                let central = g.is_central(&first);
                for r in ranks {
                    let e = g.unrank(r).unwrap();
                    assert_eq!(g.order_of(&e), order, "{name}");
                    assert_eq!(g.is_central(&e), central, "{name}");
                }
            }
        }
    }

    #[test]
    fn order_cap_fails_fast() {
        let g = preset::resolve("es243-expp").unwrap();
        assert!(matches!(
            automorphism_orbits(&g, NODES),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn node_budget_fails_loudly() {
        let g = preset::resolve("es27-expp").unwrap();
        assert!(matches!(
            automorphism_orbits(&g, 3),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn impostor_existence() {
        // Prime-exponent abelian groups have none.
        for name in ["z2", "z3", "z2x2", "z3x3"] {
            let g = preset::resolve(name).unwrap();
            assert!(!has_impostor(&g, NODES, EVALS).unwrap(), "{name}");
        }
        // Everything else in the small fleet has one.
        for name in ["z4", "z9", "z2x4", "q2", "d8", "es27-expp"] {
            let g = preset::resolve(name).unwrap();
            assert!(has_impostor(&g, NODES, EVALS).unwrap(), "{name}");
        }
    }
}
