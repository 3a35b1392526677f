use super::{quotient, Hom, Model, Sort};
use crate::Error;

/// A lattice from its order matrix. Meets and joins are derived; the order
/// must be a bounded distributive lattice.
pub fn lattice_from_leq(leq: &[Vec<bool>]) -> Result<Model, Error> {
    let n = leq.len();
    if n == 0 || leq.iter().any(|r| r.len() != n) {
        return Err(Error::Invalid("order matrix must be square and nonempty".into()));
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
    let least = |set: &[usize]| -> Option<usize> {
        set.iter().copied().find(|&x| set.iter().all(|&y| leq[x][y]))
    };
    let greatest = |set: &[usize]| -> Option<usize> {
        set.iter().copied().find(|&x| set.iter().all(|&y| leq[y][x]))
    };
    let all: Vec<usize> = (0..n).collect();
    let bot = least(&all).ok_or_else(|| Error::Invalid("no least element".into()))?;
    let top = greatest(&all).ok_or_else(|| Error::Invalid("no greatest element".into()))?;
    let mut join = vec![0; n * n];
    let mut meet = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            let ub: Vec<usize> = (0..n).filter(|&c| leq[a][c] && leq[b][c]).collect();
            let lb: Vec<usize> = (0..n).filter(|&c| leq[c][a] && leq[c][b]).collect();
            join[a * n + b] = least(&ub).ok_or_else(|| Error::Invalid("missing join".into()))?;
            meet[a * n + b] =
                greatest(&lb).ok_or_else(|| Error::Invalid("missing meet".into()))?;
        }
    }
    Model::from_ops(Sort::Lattice, n, join, meet, bot, top)
}

/// The order matrix of a lattice.
pub fn leq_matrix(l: &Model) -> Vec<Vec<bool>> {
    l.elements()
        .map(|a| l.elements().map(|b| l.leq(a, b)).collect())
        .collect()
}

/// The chain `0 < 1 < … < k-1`.
pub fn chain(k: usize) -> Model {
    let leq: Vec<Vec<bool>> = (0..k).map(|a| (0..k).map(|b| a <= b).collect()).collect();
    lattice_from_leq(&leq).expect("a chain is a distributive lattice")
}

/// The five-element lattice `0 < inf(a,b) < a, b < 1`, with elements
/// numbered `0, inf(a,b), a, b, 1`.
pub fn diamond() -> Model {
    let below: [&[usize]; 5] = [&[0], &[0, 1], &[0, 1, 2], &[0, 1, 3], &[0, 1, 2, 3, 4]];
    let leq: Vec<Vec<bool>> = (0..5)
        .map(|a| (0..5).map(|b| below[b].contains(&a)).collect())
        .collect();
    lattice_from_leq(&leq).expect("the diamond is distributive")
}

/// The Boolean lattice of subsets of a `k`-element set, element `i` being
/// the subset with bitmask `i`.
pub fn boolean_lattice(k: usize) -> Model {
    let n = 1 << k;
    let leq: Vec<Vec<bool>> = (0..n)
        .map(|a| (0..n).map(|b| a & !b == 0).collect())
        .collect();
    lattice_from_leq(&leq).expect("a Boolean lattice is distributive")
}

/// Down-sets of a finite poset `leq` (at most 64 points) as bitmasks,
/// listed by (size, bitmask).
pub(crate) fn down_sets(leq: &[Vec<bool>]) -> Vec<u64> {
    let k = leq.len();
    assert!(k <= 20, "poset too large for down-set enumeration");
    let mut sets: Vec<u64> = (0..(1u64 << k))
        .filter(|&s| {
            (0..k).all(|x| s >> x & 1 == 0 || (0..k).all(|y| !leq[y][x] || s >> y & 1 == 1))
        })
        .collect();
    sets.sort_by_key(|&s| (s.count_ones(), s));
    sets
}

/// The lattice of down-sets of a finite poset `leq`, ordered by inclusion,
/// with elements in the order of [`down_sets`].
pub fn down_set_lattice(leq: &[Vec<bool>]) -> Model {
    let sets = down_sets(leq);
    let m = sets.len();
    let order: Vec<Vec<bool>> = (0..m)
        .map(|a| (0..m).map(|b| sets[a] & !sets[b] == 0).collect())
        .collect();
    lattice_from_leq(&order).expect("down-sets form a distributive lattice")
}

/// Join-irreducible elements: not the bottom, and not the join of two
/// strictly smaller elements.
pub fn join_irreducibles(l: &Model) -> Vec<usize> {
    l.elements()
        .filter(|&j| {
            j != l.bot()
                && !l.elements().any(|a| {
                    l.elements()
                        .any(|b| a != j && b != j && l.join(a, b) == j)
                })
        })
        .collect()
}

/// `L/↑a`: `x ∼ y` iff `inf(x,c) = inf(y,c)` for some `c` in `↑a`.
pub fn filter_quotient(l: &Model, a: usize) -> (Model, Hom) {
    let up: Vec<usize> = l.elements().filter(|&c| l.leq(a, c)).collect();
    let labels: Vec<usize> = l
        .elements()
        .map(|x| {
            l.elements()
                .find(|&y| up.iter().any(|&c| l.meet(x, c) == l.meet(y, c)))
                .expect("x is related to itself")
        })
        .collect();
    let h = quotient(l, &labels);
    (h.target.clone(), h)
}

fn all_filters(l: &Model) -> Vec<Vec<bool>> {
    let close = |seed: &[usize]| -> Vec<bool> {
        let mut inside = vec![false; l.size()];
        inside[l.top()] = true;
        for &s in seed {
            inside[s] = true;
        }
        let mut changed = true;
        while changed {
            changed = false;
            for x in l.elements() {
                if inside[x] {
                    continue;
                }
                let up = l.elements().any(|y| inside[y] && l.leq(y, x));
                let meet = l.elements().any(|y| {
                    l.elements()
                        .any(|z| inside[y] && inside[z] && l.meet(y, z) == x)
                });
                if up || meet {
                    inside[x] = true;
                    changed = true;
                }
            }
        }
        inside
    };
    let mut seen = std::collections::BTreeSet::new();
    let start = close(&[]);
    let mut stack = vec![start.clone()];
    seen.insert(start);
    while let Some(f) = stack.pop() {
        for x in l.elements().filter(|&x| !f[x]) {
            let mut seed: Vec<usize> = l.elements().filter(|&y| f[y]).collect();
            seed.push(x);
            let g = close(&seed);
            if seen.insert(g.clone()) {
                stack.push(g);
            }
        }
    }
    seen.into_iter().collect()
}

/// All prime filters, by exhaustive search over filters and a direct check
/// of primality. Each filter is returned as its sorted member list.
pub fn prime_filters_oracle(l: &Model) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = all_filters(l)
        .into_iter()
        .filter(|f| {
            !f[l.bot()]
                && l.elements()
                    .all(|x| l.elements().all(|y| !f[l.join(x, y)] || f[x] || f[y]))
        })
        .map(|f| l.elements().filter(|&x| f[x]).collect())
        .collect();
    out.sort();
    out
}
