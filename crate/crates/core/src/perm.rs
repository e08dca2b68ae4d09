//! Permutations in one-line notation, used for coset actions, orbit
//! relabelings and the `tau0` data of a module parametrization.

use serde::{Deserialize, Serialize};

/// A permutation of `0..n`. `map[i]` is the image of `i`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm {
    map: Vec<usize>,
}

impl std::fmt::Debug for Perm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Perm({})", self.cycle_string())
    }
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm { map: (0..n).collect() }
    }

    /// Builds from one-line notation; `None` unless `map` is a bijection of `0..n`.
    pub fn from_map(map: Vec<usize>) -> Option<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &v in &map {
            if v >= n || seen[v] {
                return None;
            }
            seen[v] = true;
        }
        Some(Perm { map })
    }

    /// Builds from a list of disjoint cycles over `0..n`. Indices absent from
    /// every cycle are fixed.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Option<Self> {
        let mut map: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for w in 0..cycle.len() {
                let a = cycle[w];
                let b = cycle[(w + 1) % cycle.len()];
                if a >= n || touched[a] {
                    return None;
                }
                touched[a] = true;
                map[a] = b;
            }
        }
        Perm::from_map(map)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.len(), other.len());
        Perm { map: other.map.iter().map(|&i| self.map[i]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        Perm { map: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn commutes_with(&self, other: &Perm) -> bool {
        self.compose(other) == other.compose(self)
    }

    pub fn has_fixed_point(&self) -> bool {
        self.map.iter().enumerate().any(|(i, &v)| i == v)
    }

    /// Cycle decomposition, fixed points omitted; cycles start at their least
    /// member and are listed in order of that member.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.map.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.map[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut cur = self.map[start];
            while cur != start {
                seen[cur] = true;
                cycle.push(cur);
                cur = self.map[cur];
            }
            out.push(cycle);
        }
        out
    }

    /// Multiset of cycle lengths including fixed points, sorted.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        let moved: usize = lens.iter().sum();
        lens.extend(std::iter::repeat(1).take(self.map.len() - moved));
        lens.sort_unstable();
        lens
    }

    /// 1-based cycle notation, e.g. `(1 3)(2 4)`; identity prints as `e`.
    pub fn cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "e".to_string();
        }
        cycles
            .iter()
            .map(|c| {
                let inner: Vec<String> = c.iter().map(|&i| (i + 1).to_string()).collect();
                format!("({})", inner.join(" "))
            })
            .collect()
    }
}
