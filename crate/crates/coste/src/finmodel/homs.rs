use super::{generators, Hom, Model};

/// Partial map under construction, closed under the operations as far as
/// the defined part allows.
#[derive(Clone)]
struct Partial {
    map: Vec<usize>,
    defined: Vec<usize>,
    used: Vec<bool>,
}

const UNSET: usize = usize::MAX;

impl Partial {
    fn new(a: &Model, b: &Model) -> Partial {
        Partial {
            map: vec![UNSET; a.size()],
            defined: Vec::new(),
            used: vec![false; b.size()],
        }
    }

    /// Sets `x ↦ y` and propagates through both operations. Returns `false`
    /// on a conflict (or on a collision when `injective`).
    fn assign(&mut self, a: &Model, b: &Model, x: usize, y: usize, injective: bool) -> bool {
        let mut queue = vec![(x, y)];
        while let Some((x, y)) = queue.pop() {
            if self.map[x] != UNSET {
                if self.map[x] != y {
                    return false;
                }
                continue;
            }
            if injective && self.used[y] {
                return false;
            }
            self.map[x] = y;
            self.used[y] = true;
            self.defined.push(x);
            for i in 0..self.defined.len() {
                let z = self.defined[i];
                let w = self.map[z];
                for k in 0..2 {
                    queue.push((a.op(k, x, z), b.op(k, y, w)));
                }
            }
        }
        true
    }
}

fn seed_constants(a: &Model, b: &Model, injective: bool) -> Option<Partial> {
    let mut p = Partial::new(a, b);
    for k in 0..2 {
        if !p.assign(a, b, a.constant(k), b.constant(k), injective) {
            return None;
        }
    }
    Some(p)
}

fn search(
    a: &Model,
    b: &Model,
    gens: &[usize],
    p: Partial,
    injective: bool,
    out: &mut Vec<Vec<usize>>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    match gens.iter().find(|&&g| p.map[g] == UNSET) {
        None => {
            debug_assert!(p.map.iter().all(|&y| y != UNSET));
            out.push(p.map);
        }
        Some(&g) => {
            for y in b.elements() {
                let mut q = p.clone();
                if q.assign(a, b, g, y, injective) {
                    search(a, b, gens, q, injective, out, limit);
                }
            }
        }
    }
}

fn homs_with(a: &Model, b: &Model, injective: bool, limit: usize) -> Vec<Hom> {
    if a.sort() != b.sort() {
        return Vec::new();
    }
    let Some(p) = seed_constants(a, b, injective) else {
        return Vec::new();
    };
    let gens = generators(a);
    let mut maps = Vec::new();
    search(a, b, &gens, p, injective, &mut maps, limit);
    maps.sort();
    maps.into_iter()
        .map(|m| Hom::new_unchecked(a.clone(), b.clone(), m))
        .collect()
}

/// Every homomorphism `a → b`, sorted by map.
pub fn enumerate_homs(a: &Model, b: &Model) -> Vec<Hom> {
    homs_with(a, b, false, usize::MAX)
}

/// Some isomorphism `a → b`, if there is one.
pub fn find_iso(a: &Model, b: &Model) -> Option<Hom> {
    if a.size() != b.size() || a.sort() != b.sort() {
        return None;
    }
    homs_with(a, b, true, 1).into_iter().next()
}

pub fn is_isomorphic(a: &Model, b: &Model) -> bool {
    find_iso(a, b).is_some()
}

/// The unique homomorphism `a → b` extending the given assignments, if the
/// assignments generate `a` and are consistent.
pub fn extend_hom(a: &Model, b: &Model, seeds: &[(usize, usize)]) -> Option<Hom> {
    let mut p = seed_constants(a, b, false)?;
    for &(x, y) in seeds {
        if !p.assign(a, b, x, y, false) {
            return None;
        }
    }
    if p.map.contains(&UNSET) {
        return None;
    }
    Some(Hom::new_unchecked(a.clone(), b.clone(), p.map))
}
