use std::collections::HashMap;

use super::lattice::{down_sets, join_irreducibles};
use super::{extend_hom, Hom, Model, Sort};
use crate::Error;

/// A binary coproduct with its two coprojections.
#[derive(Clone, Debug)]
pub struct Coproduct {
    pub model: Model,
    pub left: Hom,
    pub right: Hom,
}

/// Coproduct of two models of one sort: the tensor product over ℤ for
/// rings, and the lattice dual to the product of join-irreducible posets for
/// distributive lattices.
pub fn model_coproduct(a: &Model, b: &Model) -> Result<Coproduct, Error> {
    if a.sort() != b.sort() {
        return Err(Error::SortMismatch);
    }
    Ok(match a.sort() {
        Sort::Ring => tensor(a, b),
        Sort::Lattice => lattice_coproduct(a, b),
    })
}

/// The map out of a coproduct induced by `f: A → T` and `g: B → T`.
pub fn copair(c: &Coproduct, f: &Hom, g: &Hom) -> Option<Hom> {
    let seeds: Vec<(usize, usize)> = c
        .left
        .map
        .iter()
        .enumerate()
        .map(|(x, &y)| (y, f.apply(x)))
        .chain(c.right.map.iter().enumerate().map(|(x, &y)| (y, g.apply(x))))
        .collect();
    extend_hom(&c.model, &f.target, &seeds)
}

/// Coproduct of a finite family with its coprojections, folding the binary
/// one. The empty family gives the initial model, which for rings is ℤ and
/// so is refused.
pub fn coproduct_of(sort: Sort, factors: &[Model]) -> Result<(Model, Vec<Hom>), Error> {
    let Some((first, rest)) = factors.split_first() else {
        return match sort {
            Sort::Lattice => Ok((super::chain(2), vec![])),
            Sort::Ring => Err(Error::Precondition(
                "the initial ring is infinite; empty coproducts of rings are not finite".into(),
            )),
        };
    };
    if factors.iter().any(|m| m.sort() != sort) {
        return Err(Error::SortMismatch);
    }
    let mut model = first.clone();
    let mut legs = vec![Hom::identity(first)];
    for m in rest {
        let c = model_coproduct(&model, m)?;
        legs = legs.iter().map(|h| h.then(&c.left)).collect();
        legs.push(c.right);
        model = c.model;
    }
    Ok((model, legs))
}

/// The map out of a coproduct agreeing with `maps[i]` on the `i`-th
/// coprojection.
pub fn copair_many(coproduct: &Model, legs: &[Hom], maps: &[Hom], target: &Model) -> Option<Hom> {
    let seeds: Vec<(usize, usize)> = legs
        .iter()
        .zip(maps)
        .flat_map(|(l, f)| l.map.iter().enumerate().map(move |(x, &y)| (y, f.apply(x))))
        .collect();
    extend_hom(coproduct, target, &seeds)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// A decomposition of the additive group as `⊕ ℤ/dᵢ`, with basis elements
/// and the coordinate vector of every element.
pub(crate) struct CyclicBasis {
    pub basis: Vec<usize>,
    pub orders: Vec<usize>,
    pub coords: Vec<Vec<usize>>,
}

fn times(a: &Model, k: i64, x: usize) -> usize {
    let n = a.size() as i64;
    let k = k.rem_euclid(n.max(1));
    let mut r = a.zero();
    for _ in 0..k {
        r = a.add(r, x);
    }
    r
}

/// Triangular presentation by greedy generators and relative orders,
/// diagonalized over ℤ.
pub(crate) fn cyclic_basis(a: &Model) -> CyclicBasis {
    let mut gens: Vec<usize> = Vec::new();
    let mut coef: HashMap<usize, Vec<i64>> = HashMap::new();
    coef.insert(a.zero(), Vec::new());
    let mut rels: Vec<Vec<i64>> = Vec::new();
    while let Some(g) = a.elements().find(|x| !coef.contains_key(x)) {
        let mut m = 1;
        let mut mg = g;
        while !coef.contains_key(&mg) {
            mg = a.add(mg, g);
            m += 1;
        }
        let k = gens.len();
        let mut rel: Vec<i64> = coef[&mg].iter().map(|&c| -c).collect();
        rel.resize(k, 0);
        rel.push(m as i64);
        rels.push(rel);
        let old: Vec<(usize, Vec<i64>)> = coef.iter().map(|(&x, c)| (x, c.clone())).collect();
        for (s, c) in old {
            let mut y = s;
            for j in 1..m {
                y = a.add(y, g);
                let mut cc = c.clone();
                cc.resize(k, 0);
                cc.push(j as i64);
                coef.insert(y, cc);
            }
        }
        gens.push(g);
    }
    let k = gens.len();
    for r in rels.iter_mut() {
        r.resize(k, 0);
    }
    let (diag, vinv) = smith(rels, k);
    let mut basis = Vec::new();
    let mut orders = Vec::new();
    for i in 0..k {
        let d = diag[i].unsigned_abs() as usize;
        if d <= 1 {
            continue;
        }
        let mut h = a.zero();
        for j in 0..k {
            h = a.add(h, times(a, vinv[i][j], gens[j]));
        }
        basis.push(h);
        orders.push(d);
    }
    let mut coords = vec![Vec::new(); a.size()];
    let mut filled = 0;
    let mut tuple = vec![0usize; basis.len()];
    loop {
        let mut x = a.zero();
        for (i, &t) in tuple.iter().enumerate() {
            x = a.add(x, times(a, t as i64, basis[i]));
        }
        assert!(coords[x].is_empty() || basis.is_empty(), "diagonalization is not a basis");
        if coords[x].is_empty() {
            filled += 1;
        }
        coords[x] = tuple.clone();
        let mut i = 0;
        while i < tuple.len() {
            tuple[i] += 1;
            if tuple[i] < orders[i] {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
        if i == tuple.len() {
            break;
        }
    }
    assert_eq!(filled, a.size(), "diagonalization is not a basis");
    CyclicBasis {
        basis,
        orders,
        coords,
    }
}

/// Smith normal form of a square integer matrix whose rows are relations.
/// Returns the diagonal and the inverse of the column transform.
fn smith(mut m: Vec<Vec<i64>>, k: usize) -> (Vec<i64>, Vec<Vec<i64>>) {
    let mut vinv: Vec<Vec<i64>> = (0..k)
        .map(|i| (0..k).map(|j| i64::from(i == j)).collect())
        .collect();
    let rows = m.len();
    for t in 0..k.min(rows) {
        loop {
            let pivot = (t..rows)
                .flat_map(|i| (t..k).map(move |j| (i, j)))
                .filter(|&(i, j)| m[i][j] != 0)
                .min_by_key(|&(i, j)| m[i][j].abs());
            let Some((pi, pj)) = pivot else {
                return (diagonal(&m, k), vinv);
            };
            m.swap(t, pi);
            if pj != t {
                for row in m.iter_mut() {
                    row.swap(t, pj);
                }
                vinv.swap(t, pj);
            }
            let p = m[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = m[i][t] / p;
                if q != 0 {
                    for j in 0..k {
                        m[i][j] -= q * m[t][j];
                    }
                }
                if m[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..k {
                let q = m[t][j] / p;
                if q != 0 {
                    for row in m.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    // col_j -= q col_t  ⇒  row_t of the inverse += q row_j
                    for c in 0..k {
                        vinv[t][c] += q * vinv[j][c];
                    }
                }
                if m[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..k).any(|j| m[i][j] % p != 0));
            match bad {
                Some(i) => {
                    for j in 0..k {
                        m[t][j] += m[i][j];
                    }
                }
                None => break,
            }
        }
    }
    (diagonal(&m, k), vinv)
}

fn diagonal(m: &[Vec<i64>], k: usize) -> Vec<i64> {
    (0..k).map(|i| if i < m.len() { m[i][i] } else { 0 }).collect()
}

fn tensor(a: &Model, b: &Model) -> Coproduct {
    let ba = cyclic_basis(a);
    let bb = cyclic_basis(b);
    // Pairs (i, j) with a nontrivial cyclic factor ℤ/gcd(dᵢ, eⱼ).
    let mut pairs = Vec::new();
    let mut mods = Vec::new();
    for (i, &d) in ba.orders.iter().enumerate() {
        for (j, &e) in bb.orders.iter().enumerate() {
            let g = gcd(d as i64, e as i64) as usize;
            if g > 1 {
                pairs.push((i, j));
                mods.push(g);
            }
        }
    }
    let r = pairs.len();
    let pure = |x: usize, y: usize| -> Vec<usize> {
        pairs
            .iter()
            .zip(&mods)
            .map(|(&(i, j), &g)| ba.coords[x][i] * bb.coords[y][j] % g)
            .collect()
    };
    // Products of basis tensors.
    let mut basis_prod = vec![vec![Vec::new(); r]; r];
    for (u, &(i, j)) in pairs.iter().enumerate() {
        for (v, &(p, q)) in pairs.iter().enumerate() {
            let x = a.mul(ba.basis[i], ba.basis[p]);
            let y = b.mul(bb.basis[j], bb.basis[q]);
            basis_prod[u][v] = pure(x, y);
        }
    }
    let mut elems: Vec<Vec<usize>> = vec![Vec::new()];
    for &g in &mods {
        elems = elems
            .into_iter()
            .flat_map(|t| {
                (0..g).map(move |c| {
                    let mut u = t.clone();
                    u.push(c);
                    u
                })
            })
            .collect();
    }
    let index: HashMap<Vec<usize>, usize> =
        elems.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
    let n = elems.len();
    let mut add = vec![0; n * n];
    let mut mul = vec![0; n * n];
    // x · basis_v for every element x and basis tensor v.
    let mut times_basis = vec![vec![0usize; r]; n];
    for (xi, x) in elems.iter().enumerate() {
        for v in 0..r {
            let mut acc = vec![0usize; r];
            for u in 0..r {
                if x[u] == 0 {
                    continue;
                }
                for w in 0..r {
                    acc[w] = (acc[w] + x[u] * basis_prod[u][v][w]) % mods[w];
                }
            }
            times_basis[xi][v] = index[&acc];
        }
    }
    for (xi, x) in elems.iter().enumerate() {
        for (yi, y) in elems.iter().enumerate() {
            let s: Vec<usize> = (0..r).map(|w| (x[w] + y[w]) % mods[w]).collect();
            add[xi * n + yi] = index[&s];
            let mut acc = vec![0usize; r];
            for v in 0..r {
                if y[v] == 0 {
                    continue;
                }
                let t = &elems[times_basis[xi][v]];
                for w in 0..r {
                    acc[w] = (acc[w] + y[v] * t[w]) % mods[w];
                }
            }
            mul[xi * n + yi] = index[&acc];
        }
    }
    let one = index[&pure(a.one(), b.one())];
    let zero = index[&vec![0; r]];
    let model = Model::from_ops_unchecked(Sort::Ring, n, add, mul, zero, one);
    let left = Hom::new_unchecked(
        a.clone(),
        model.clone(),
        a.elements().map(|x| index[&pure(x, b.one())]).collect(),
    );
    let right = Hom::new_unchecked(
        b.clone(),
        model.clone(),
        b.elements().map(|y| index[&pure(a.one(), y)]).collect(),
    );
    Coproduct { model, left, right }
}

fn lattice_coproduct(a: &Model, b: &Model) -> Coproduct {
    let ja = join_irreducibles(a);
    let jb = join_irreducibles(b);
    let points: Vec<(usize, usize)> = ja
        .iter()
        .flat_map(|&x| jb.iter().map(move |&y| (x, y)))
        .collect();
    let leq: Vec<Vec<bool>> = points
        .iter()
        .map(|&(x, y)| {
            points
                .iter()
                .map(|&(u, v)| a.leq(x, u) && b.leq(y, v))
                .collect()
        })
        .collect();
    let sets = down_sets(&leq);
    let m = sets.len();
    let pos: HashMap<u64, usize> = sets.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut join = vec![0; m * m];
    let mut meet = vec![0; m * m];
    for i in 0..m {
        for j in 0..m {
            join[i * m + j] = pos[&(sets[i] | sets[j])];
            meet[i * m + j] = pos[&(sets[i] & sets[j])];
        }
    }
    let full = if points.is_empty() { 0 } else { (1u64 << points.len()) - 1 };
    let model = Model::from_ops_unchecked(Sort::Lattice, m, join, meet, pos[&0], pos[&full]);
    let embed = |keep: &dyn Fn(usize, usize) -> bool| -> usize {
        let mut s = 0u64;
        for (k, &(x, y)) in points.iter().enumerate() {
            if keep(x, y) {
                s |= 1 << k;
            }
        }
        pos[&s]
    };
    let left = Hom::new_unchecked(
        a.clone(),
        model.clone(),
        a.elements().map(|z| embed(&|x, _| a.leq(x, z))).collect(),
    );
    let right = Hom::new_unchecked(
        b.clone(),
        model.clone(),
        b.elements().map(|z| embed(&|_, y| b.leq(y, z))).collect(),
    );
    Coproduct { model, left, right }
}
