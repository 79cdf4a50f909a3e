//! Small shared helpers.

/// Disjoint sets over `0..n` whose representative is always the least member.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Merges two classes; returns false if they were already one.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    /// Class roots in increasing order, and each element's class position.
    pub fn classes(&mut self) -> (Vec<usize>, Vec<usize>) {
        let n = self.parent.len();
        let mut roots = Vec::new();
        let mut slot = vec![usize::MAX; n];
        let mut of = vec![0; n];
        for x in 0..n {
            let r = self.find(x);
            if slot[r] == usize::MAX {
                slot[r] = roots.len();
                roots.push(r);
            }
            of[x] = slot[r];
        }
        (roots, of)
    }
}
