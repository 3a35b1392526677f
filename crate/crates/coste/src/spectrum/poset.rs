use crate::Error;

/// A finite poset read as a T₀ space: `x ≤ y` means `x` lies in the closure
/// of `y`, and the opens are the up-sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poset {
    leq: Vec<Vec<bool>>,
}

/// Largest poset whose up-sets are enumerated.
pub const UP_SET_LIMIT: usize = 20;

impl Poset {
    pub fn new(leq: Vec<Vec<bool>>) -> Result<Poset, Error> {
        let n = leq.len();
        if leq.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("order matrix must be square".into()));
        }
        for a in 0..n {
            if !leq[a][a] {
                return Err(Error::Invalid("order is not reflexive".into()));
            }
            for b in 0..n {
                if a != b && leq[a][b] && leq[b][a] {
                    return Err(Error::Invalid("order is not antisymmetric".into()));
                }
                for c in 0..n {
                    if leq[a][b] && leq[b][c] && !leq[a][c] {
                        return Err(Error::Invalid("order is not transitive".into()));
                    }
                }
            }
        }
        Ok(Poset { leq })
    }

    /// The reflexive-transitive closure of `pairs`, which must be acyclic.
    pub fn from_relation(n: usize, pairs: &[(usize, usize)]) -> Result<Poset, Error> {
        Poset::new(preorder_closure(n, pairs))
    }

    pub fn discrete(n: usize) -> Poset {
        Poset {
            leq: (0..n).map(|a| (0..n).map(|b| a == b).collect()).collect(),
        }
    }

    pub fn chain(n: usize) -> Poset {
        Poset {
            leq: (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.leq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leq.is_empty()
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn matrix(&self) -> &[Vec<bool>] {
        &self.leq
    }

    pub fn is_up_set(&self, set: &[bool]) -> bool {
        set.len() == self.len()
            && (0..self.len()).all(|a| !set[a] || (0..self.len()).all(|b| !self.leq[a][b] || set[b]))
    }

    /// `↑x`, the smallest open containing `x`.
    pub fn up(&self, x: usize) -> Vec<bool> {
        self.leq[x].clone()
    }

    pub fn up_closure(&self, set: &[bool]) -> Vec<bool> {
        (0..self.len())
            .map(|b| (0..self.len()).any(|a| set[a] && self.leq[a][b]))
            .collect()
    }

    /// Every open, smallest first.
    pub fn up_sets(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        assert!(n <= UP_SET_LIMIT, "too many points to enumerate opens");
        let mut out: Vec<Vec<bool>> = (0u32..(1 << n))
            .map(|m| (0..n).map(|x| m >> x & 1 == 1).collect::<Vec<bool>>())
            .filter(|s| self.is_up_set(s))
            .collect();
        out.sort_by_key(|s| (s.iter().filter(|&&b| b).count(), bits(s)));
        out
    }

    pub fn minimal(&self, set: &[bool]) -> Vec<usize> {
        (0..self.len())
            .filter(|&a| set[a] && (0..self.len()).all(|b| b == a || !set[b] || !self.leq[b][a]))
            .collect()
    }

    /// Pairs `x < y` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b
                    && self.leq[a][b]
                    && !(0..n).any(|c| c != a && c != b && self.leq[a][c] && self.leq[c][b])
                {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn is_monotone(&self, target: &Poset, f: &[usize]) -> bool {
        f.len() == self.len()
            && f.iter().all(|&y| y < target.len())
            && (0..self.len()).all(|a| {
                (0..self.len()).all(|b| !self.leq[a][b] || target.leq[f[a]][f[b]])
            })
    }

    /// The induced order on `members`, listed in the given order.
    pub fn restrict(&self, members: &[usize]) -> Poset {
        Poset {
            leq: members
                .iter()
                .map(|&a| members.iter().map(|&b| self.leq[a][b]).collect())
                .collect(),
        }
    }

    /// The product order, points numbered lexicographically; also returns
    /// the coordinate tuple of each point.
    pub fn product(factors: &[Poset]) -> (Poset, Vec<Vec<usize>>) {
        let mut coords: Vec<Vec<usize>> = vec![vec![]];
        for p in factors {
            coords = coords
                .iter()
                .flat_map(|c| {
                    (0..p.len()).map(move |x| {
                        let mut d = c.clone();
                        d.push(x);
                        d
                    })
                })
                .collect();
        }
        let leq = coords
            .iter()
            .map(|a| {
                coords
                    .iter()
                    .map(|b| factors.iter().enumerate().all(|(i, p)| p.leq[a[i]][b[i]]))
                    .collect()
            })
            .collect();
        (Poset { leq }, coords)
    }

    /// Disjoint union; also returns the offset of each summand.
    pub fn sum(parts: &[Poset]) -> (Poset, Vec<usize>) {
        let mut offsets = Vec::new();
        let mut n = 0;
        for p in parts {
            offsets.push(n);
            n += p.len();
        }
        let mut leq = vec![vec![false; n]; n];
        for (p, &o) in parts.iter().zip(&offsets) {
            for a in 0..p.len() {
                for b in 0..p.len() {
                    leq[o + a][o + b] = p.leq[a][b];
                }
            }
        }
        (Poset { leq }, offsets)
    }
}

fn bits(s: &[bool]) -> u64 {
    s.iter()
        .enumerate()
        .fold(0, |m, (i, &b)| if b { m | 1 << i } else { m })
}

/// Reflexive-transitive closure of a relation on `0..n`.
pub fn preorder_closure(n: usize, pairs: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut r: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| a == b).collect()).collect();
    for &(a, b) in pairs {
        r[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                for j in 0..n {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    r
}
