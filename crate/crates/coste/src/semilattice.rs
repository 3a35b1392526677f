//! Finite join-semilattices: ideals, the free distributive lattice on the
//! opposite meet-semilattice, the reticulation and the prime ideal theorem.

use std::collections::HashMap;

use crate::context::{ContextId, EtaleSemilattice};
use crate::finmodel::{congruence, quotient, Hom, Model, Sort};
use crate::Error;

/// Largest number of antichains the free lattice is built for.
pub const FREE_DL_LIMIT: usize = 1024;

/// A finite join-semilattice with a least element, given by its order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinSemilattice {
    pub leq: Vec<Vec<bool>>,
    pub join: Vec<Vec<usize>>,
    pub bottom: usize,
}

impl JoinSemilattice {
    /// Checks the order is a partial order with a least element and binary
    /// joins.
    pub fn from_leq(leq: Vec<Vec<bool>>) -> Result<Self, Error> {
        let n = leq.len();
        if n == 0 || leq.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("order matrix must be square and nonempty".into()));
        }
        for a in 0..n {
            for b in 0..n {
                if a != b && leq[a][b] && leq[b][a] || !leq[a][a] {
                    return Err(Error::Invalid("not a partial order".into()));
                }
                for c in 0..n {
                    if leq[a][b] && leq[b][c] && !leq[a][c] {
                        return Err(Error::Invalid("not transitive".into()));
                    }
                }
            }
        }
        let bottom = (0..n)
            .find(|&b| (0..n).all(|x| leq[b][x]))
            .ok_or_else(|| Error::Invalid("no least element".into()))?;
        let mut join = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let ub: Vec<usize> = (0..n).filter(|&c| leq[a][c] && leq[b][c]).collect();
                join[a][b] = ub
                    .iter()
                    .copied()
                    .find(|&c| ub.iter().all(|&d| leq[c][d]))
                    .ok_or_else(|| Error::Invalid("missing join".into()))?;
            }
        }
        Ok(JoinSemilattice { leq, join, bottom })
    }

    pub fn of(v: &EtaleSemilattice) -> Self {
        JoinSemilattice {
            leq: v.leq.clone(),
            join: v.join.clone(),
            bottom: v.bottom(),
        }
    }

    pub fn len(&self) -> usize {
        self.leq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leq.is_empty()
    }

    pub fn is_ideal(&self, members: &[bool]) -> bool {
        let n = self.len();
        members.iter().any(|&b| b)
            && (0..n).all(|x| {
                !members[x]
                    || (0..n).all(|y| (!self.leq[y][x] || members[y]) && (!members[y] || members[self.join[x][y]]))
            })
    }
}

/// An ideal `↓μ` of a finite join-semilattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiIdeal {
    pub generator: usize,
    pub members: Vec<bool>,
}

/// All ideals, one per element, in element order.
pub fn all_ideals(s: &JoinSemilattice) -> Vec<SemiIdeal> {
    (0..s.len())
        .map(|m| SemiIdeal {
            generator: m,
            members: (0..s.len()).map(|x| s.leq[x][m]).collect(),
        })
        .collect()
}

/// The free distributive lattice on `S^op`. Element `F` is an antichain of
/// `S` standing for the formal union of basic opens `D_f`; `F ≤ G` iff every
/// `f` lies above some `g`.
#[derive(Clone, Debug)]
pub struct FreeDl {
    pub base: JoinSemilattice,
    pub elements: Vec<Vec<usize>>,
    pub lattice: Model,
    /// Index of the singleton antichain `{λ}` for each base element.
    pub generator: Vec<usize>,
    index: HashMap<Vec<usize>, usize>,
}

impl FreeDl {
    /// Keeps the minimal elements, sorted.
    pub fn normalize(&self, set: &[usize]) -> Vec<usize> {
        prune(&self.base, set)
    }

    pub fn lookup(&self, set: &[usize]) -> usize {
        self.index[&self.normalize(set)]
    }
}

fn prune(s: &JoinSemilattice, set: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = set
        .iter()
        .copied()
        .filter(|&f| !set.iter().any(|&g| g != f && s.leq[g][f]))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn antichains(s: &JoinSemilattice, limit: usize) -> Option<Vec<Vec<usize>>> {
    fn go(
        s: &JoinSemilattice,
        from: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) -> bool {
        out.push(cur.clone());
        if out.len() > limit {
            return false;
        }
        for x in from..s.len() {
            if cur.iter().all(|&y| !s.leq[x][y] && !s.leq[y][x]) {
                cur.push(x);
                let ok = go(s, x + 1, cur, out, limit);
                cur.pop();
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    let mut out = Vec::new();
    go(s, 0, &mut Vec::new(), &mut out, limit).then_some(out)
}

/// Builds the free distributive lattice, refusing bases with more than
/// [`FREE_DL_LIMIT`] antichains.
pub fn free_dl(s: &JoinSemilattice) -> Result<FreeDl, Error> {
    let mut elements = antichains(s, FREE_DL_LIMIT).ok_or_else(|| {
        Error::Precondition(format!("free lattice exceeds {FREE_DL_LIMIT} elements"))
    })?;
    let leq_anti = |f: &[usize], g: &[usize]| f.iter().all(|&x| g.iter().any(|&y| s.leq[y][x]));
    let spread = |f: &[usize]| (0..s.len()).filter(|&x| f.iter().any(|&y| s.leq[y][x])).count();
    elements.sort_by_key(|f| (spread(f), f.clone()));
    let n = elements.len();
    let index: HashMap<Vec<usize>, usize> =
        elements.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
    let mut join = vec![0; n * n];
    let mut meet = vec![0; n * n];
    for (i, f) in elements.iter().enumerate() {
        for (j, g) in elements.iter().enumerate() {
            let union: Vec<usize> = f.iter().chain(g).copied().collect();
            join[i * n + j] = index[&prune(s, &union)];
            let pairs: Vec<usize> = f
                .iter()
                .flat_map(|&x| g.iter().map(move |&y| s.join[x][y]))
                .collect();
            meet[i * n + j] = index[&prune(s, &pairs)];
        }
    }
    let bot = index[&Vec::new()];
    let top = index[&vec![s.bottom]];
    let lattice = Model::from_ops(Sort::Lattice, n, join, meet, bot, top)?;
    debug_assert!(elements
        .iter()
        .enumerate()
        .all(|(i, f)| elements.iter().enumerate().all(|(j, g)| leq_anti(f, g) == lattice.leq(i, j))));
    let generator = (0..s.len()).map(|x| index[&vec![x]]).collect();
    Ok(FreeDl {
        base: s.clone(),
        elements,
        lattice,
        generator,
        index,
    })
}

/// Indices `ν` such that `↓ν` is a point of the spectrum: every covering
/// family of every `λ ≤ ν` has a member below `ν`.
pub fn spec_points(v: &EtaleSemilattice) -> Vec<usize> {
    let families: Vec<Vec<Vec<usize>>> = (0..v.len())
        .map(|l| v.covering_families(l).into_iter().map(|f| f.covers).collect())
        .collect();
    (0..v.len())
        .filter(|&nu| {
            (0..v.len()).filter(|&l| v.leq[l][nu]).all(|l| {
                families[l]
                    .iter()
                    .all(|covers| covers.iter().any(|&m| v.leq[m][nu]))
            })
        })
        .collect()
}

/// The lattice `L_A`: the free lattice modulo `λ = ⋁ μᵢ` for each covering
/// family.
#[derive(Clone, Debug)]
pub struct Reticulation {
    pub free: FreeDl,
    pub lattice: Model,
    pub classify: Hom,
}

pub fn reticulation(v: &EtaleSemilattice) -> Result<Reticulation, Error> {
    let s = JoinSemilattice::of(v);
    let free = free_dl(&s)?;
    let mut pairs = Vec::new();
    for l in 0..v.len() {
        for fam in v.covering_families(l) {
            pairs.push((free.generator[l], free.lookup(&fam.covers)));
        }
    }
    let labels = congruence(&free.lattice, &pairs);
    let classify = quotient(&free.lattice, &labels);
    Ok(Reticulation {
        lattice: classify.target.clone(),
        free,
        classify,
    })
}

/// Convenience wrapper computing `𝒱_A` first.
pub fn reticulation_of(ctx: ContextId, a: &Model) -> Result<Reticulation, Error> {
    reticulation(&crate::context::etale_semilattice(ctx, a)?)
}

/// Whether every `λ ≰ μ` is separated by a point `ν ≥ μ` with `λ ≰ ν`.
pub fn pit_holds(v: &EtaleSemilattice) -> bool {
    let points = spec_points(v);
    (0..v.len()).all(|l| {
        (0..v.len())
            .filter(|&m| !v.leq[l][m])
            .all(|m| points.iter().any(|&nu| v.leq[m][nu] && !v.leq[l][nu]))
    })
}
