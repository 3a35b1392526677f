//! Finite commutative rings and finite bounded distributive lattices.
//!
//! Both sorts share one representation: a carrier `0..n`, two binary
//! operation tables and two constants. For rings the operations are
//! `(add, mul)` with constants `(zero, one)`; for lattices they are
//! `(join, meet)` with constants `(bot, top)`. Everything that only needs
//! the signature (homomorphisms, products, subalgebras, congruences,
//! isomorphism search) is written once against that shape.

mod coproduct;
mod homs;
mod json;
mod lattice;
mod ring;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::Error;

pub use coproduct::{copair, copair_many, coproduct_of, model_coproduct, Coproduct};
pub use homs::{enumerate_homs, extend_hom, find_iso, is_isomorphic};
pub use json::{hom_from_json, hom_to_json, model_from_json, model_to_json};
pub use lattice::{
    boolean_lattice, chain, diamond, down_set_lattice, filter_quotient, join_irreducibles,
    lattice_from_leq, leq_matrix, prime_filters_oracle,
};
pub use ring::{
    dual_numbers, idempotents, ideal_generated, is_unit, localize_at, make_zmod, prime_ideals_oracle, quotient_by_ideal,
    radical_leq, ring_from_tables, ring_product, units,
};

/// Which signature a model is a structure for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sort {
    Ring,
    Lattice,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Ring => f.write_str("ring"),
            Sort::Lattice => f.write_str("lattice"),
        }
    }
}

#[derive(PartialEq, Eq, Hash)]
struct Tables {
    sort: Sort,
    n: usize,
    ops: [Vec<usize>; 2],
    consts: [usize; 2],
    neg: Vec<usize>,
}

/// A finite model. Cloning is cheap; the tables are shared.
#[derive(Clone)]
pub struct Model(Arc<Tables>);

impl PartialEq for Model {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Model {}

impl std::hash::Hash for Model {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Debug for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Model({}, {} elements)", self.sort(), self.size())
    }
}

impl Model {
    /// Builds a model from raw tables without checking any axiom.
    ///
    /// Internal constructions whose output is a model by construction use
    /// this; anything coming from outside goes through [`Model::from_ops`].
    pub(crate) fn from_ops_unchecked(
        sort: Sort,
        n: usize,
        op0: Vec<usize>,
        op1: Vec<usize>,
        c0: usize,
        c1: usize,
    ) -> Model {
        debug_assert_eq!(op0.len(), n * n);
        debug_assert_eq!(op1.len(), n * n);
        let neg = match sort {
            Sort::Ring => (0..n)
                .map(|x| (0..n).find(|&y| op0[x * n + y] == c0).unwrap_or(c0))
                .collect(),
            Sort::Lattice => Vec::new(),
        };
        Model(Arc::new(Tables {
            sort,
            n,
            ops: [op0, op1],
            consts: [c0, c1],
            neg,
        }))
    }

    /// Builds a model from flattened `n*n` tables and checks every axiom of
    /// its sort.
    pub fn from_ops(
        sort: Sort,
        n: usize,
        op0: Vec<usize>,
        op1: Vec<usize>,
        c0: usize,
        c1: usize,
    ) -> Result<Model, Error> {
        if n == 0 {
            return Err(Error::Invalid("empty carrier".into()));
        }
        if op0.len() != n * n || op1.len() != n * n {
            return Err(Error::Invalid("operation table has wrong size".into()));
        }
        if c0 >= n || c1 >= n || op0.iter().chain(op1.iter()).any(|&x| x >= n) {
            return Err(Error::Invalid("table entry outside the carrier".into()));
        }
        let m = Model::from_ops_unchecked(sort, n, op0, op1, c0, c1);
        m.validate()?;
        Ok(m)
    }

    /// The one-element model of the given sort.
    pub fn trivial(sort: Sort) -> Model {
        Model::from_ops_unchecked(sort, 1, vec![0], vec![0], 0, 0)
    }

    pub fn sort(&self) -> Sort {
        self.0.sort
    }

    pub fn size(&self) -> usize {
        self.0.n
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.0.n
    }

    pub fn is_trivial(&self) -> bool {
        self.0.n == 1
    }

    /// Binary operation `k` (0 or 1).
    #[inline]
    pub fn op(&self, k: usize, a: usize, b: usize) -> usize {
        self.0.ops[k][a * self.0.n + b]
    }

    /// Constant `k` (0 or 1).
    #[inline]
    pub fn constant(&self, k: usize) -> usize {
        self.0.consts[k]
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.op(0, a, b)
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.op(1, a, b)
    }

    #[inline]
    pub fn zero(&self) -> usize {
        self.0.consts[0]
    }

    #[inline]
    pub fn one(&self) -> usize {
        self.0.consts[1]
    }

    /// Additive inverse. Rings only.
    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.0.neg[a]
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.op(0, a, b)
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.op(1, a, b)
    }

    #[inline]
    pub fn bot(&self) -> usize {
        self.0.consts[0]
    }

    #[inline]
    pub fn top(&self) -> usize {
        self.0.consts[1]
    }

    /// Lattice order.
    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.meet(a, b) == a
    }

    /// `a` raised to the power `k >= 1`. Rings only.
    pub fn pow(&self, a: usize, k: usize) -> usize {
        let mut r = self.one();
        for _ in 0..k {
            r = self.mul(r, a);
        }
        r
    }

    /// Checks the axioms of the sort by full table scan.
    pub fn validate(&self) -> Result<(), Error> {
        let n = self.size();
        let bad = |what: &str| Err(Error::Invalid(format!("{} model: {what}", self.sort())));
        for k in 0..2 {
            for a in 0..n {
                for b in 0..n {
                    if self.op(k, a, b) != self.op(k, b, a) {
                        return bad("operation not commutative");
                    }
                    for c in 0..n {
                        if self.op(k, self.op(k, a, b), c) != self.op(k, a, self.op(k, b, c)) {
                            return bad("operation not associative");
                        }
                    }
                }
            }
        }
        match self.sort() {
            Sort::Ring => {
                for a in 0..n {
                    if self.add(a, self.zero()) != a {
                        return bad("zero is not additive identity");
                    }
                    if self.mul(a, self.one()) != a {
                        return bad("one is not multiplicative identity");
                    }
                    if self.add(a, self.neg(a)) != self.zero() {
                        return bad("missing additive inverse");
                    }
                    for b in 0..n {
                        for c in 0..n {
                            if self.mul(a, self.add(b, c))
                                != self.add(self.mul(a, b), self.mul(a, c))
                            {
                                return bad("not distributive");
                            }
                        }
                    }
                }
            }
            Sort::Lattice => {
                for a in 0..n {
                    if self.join(a, a) != a || self.meet(a, a) != a {
                        return bad("operation not idempotent");
                    }
                    if self.join(a, self.bot()) != a || self.meet(a, self.top()) != a {
                        return bad("bounds are wrong");
                    }
                    for b in 0..n {
                        if self.join(a, self.meet(a, b)) != a || self.meet(a, self.join(a, b)) != a
                        {
                            return bad("absorption fails");
                        }
                        for c in 0..n {
                            if self.meet(a, self.join(b, c))
                                != self.join(self.meet(a, b), self.meet(a, c))
                            {
                                return bad("not distributive");
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Cartesian product of models of one sort. The empty product is the
    /// trivial model.
    pub fn product(sort: Sort, factors: &[Model]) -> Model {
        assert!(factors.iter().all(|m| m.sort() == sort), "product of mixed sorts");
        model_on_tuples(sort, factors, &tuples_of(factors))
    }

    /// Projection from `Model::product(sort, factors)` onto factor `i`.
    pub fn projection(product: &Model, factors: &[Model], i: usize) -> Hom {
        let tuples = tuples_of(factors);
        Hom::new_unchecked(
            product.clone(),
            factors[i].clone(),
            tuples.iter().map(|t| t[i]).collect(),
        )
    }
}

/// All tuples of a product of carriers, in lexicographic order. This is the
/// element order used by [`Model::product`].
pub fn tuples_of(factors: &[Model]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for m in factors {
        let mut next = Vec::with_capacity(out.len() * m.size());
        for t in &out {
            for x in m.elements() {
                let mut u = t.clone();
                u.push(x);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

/// A homomorphism between two models of one sort.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Hom {
    pub source: Model,
    pub target: Model,
    pub map: Vec<usize>,
}

impl fmt::Debug for Hom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hom({:?} -> {:?}, {:?})", self.source, self.target, self.map)
    }
}

impl Hom {
    pub(crate) fn new_unchecked(source: Model, target: Model, map: Vec<usize>) -> Hom {
        debug_assert_eq!(map.len(), source.size());
        Hom { source, target, map }
    }

    /// Checks that `map` preserves both operations and both constants.
    pub fn new(source: Model, target: Model, map: Vec<usize>) -> Result<Hom, Error> {
        if source.sort() != target.sort() {
            return Err(Error::SortMismatch);
        }
        if map.len() != source.size() || map.iter().any(|&y| y >= target.size()) {
            return Err(Error::Invalid("map does not fit the carriers".into()));
        }
        let h = Hom { source, target, map };
        if !h.preserves_structure() {
            return Err(Error::Invalid("map is not a homomorphism".into()));
        }
        Ok(h)
    }

    pub fn identity(m: &Model) -> Hom {
        Hom::new_unchecked(m.clone(), m.clone(), m.elements().collect())
    }

    pub fn preserves_structure(&self) -> bool {
        let (s, t, f) = (&self.source, &self.target, &self.map);
        (0..2).all(|k| f[s.constant(k)] == t.constant(k))
            && (0..2).all(|k| {
                s.elements()
                    .all(|a| s.elements().all(|b| f[s.op(k, a, b)] == t.op(k, f[a], f[b])))
            })
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Hom) -> Hom {
        debug_assert!(self.target == next.source, "composing non-matching homs");
        Hom::new_unchecked(
            self.source.clone(),
            next.target.clone(),
            self.map.iter().map(|&x| next.map[x]).collect(),
        )
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        for &y in &self.map {
            seen[y] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn is_iso(&self) -> bool {
        self.source.size() == self.target.size() && self.is_injective()
    }

    /// The kernel congruence, as canonical class labels.
    pub fn kernel(&self) -> Vec<usize> {
        let mut first = vec![usize::MAX; self.target.size()];
        self.map
            .iter()
            .enumerate()
            .map(|(x, &y)| {
                if first[y] == usize::MAX {
                    first[y] = x;
                }
                first[y]
            })
            .collect()
    }
}

/// Closure of `seeds` under both operations and both constants.
pub fn generated(m: &Model, seeds: &[usize]) -> Vec<bool> {
    let mut inside = vec![false; m.size()];
    let mut list = Vec::new();
    for &s in seeds.iter().chain([m.constant(0), m.constant(1)].iter()) {
        if !inside[s] {
            inside[s] = true;
            list.push(s);
        }
    }
    let mut i = 0;
    while i < list.len() {
        let x = list[i];
        for j in 0..=i {
            let y = list[j];
            for k in 0..2 {
                let z = m.op(k, x, y);
                if !inside[z] {
                    inside[z] = true;
                    list.push(z);
                }
            }
        }
        i += 1;
    }
    inside
}

/// A small generating set, found greedily.
pub fn generators(m: &Model) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut inside = generated(m, &gens);
    while let Some(x) = inside.iter().position(|&b| !b) {
        gens.push(x);
        inside = generated(m, &gens);
    }
    gens
}

/// Canonical labels of the smallest congruence identifying each pair: every
/// element is labelled by the least element of its class.
pub fn congruence(m: &Model, pairs: &[(usize, usize)]) -> Vec<usize> {
    let n = m.size();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut queue: Vec<(usize, usize)> = pairs.to_vec();
    while let Some((a, b)) = queue.pop() {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            continue;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi] = lo;
        for c in 0..n {
            for k in 0..2 {
                queue.push((m.op(k, a, c), m.op(k, b, c)));
            }
        }
    }
    let mut labels: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
    canonicalize(&mut labels);
    labels
}

/// Rewrites arbitrary class labels so each element is labelled by the least
/// member of its class.
pub fn canonicalize(labels: &mut [usize]) {
    let mut first = std::collections::HashMap::new();
    for x in 0..labels.len() {
        let l = labels[x];
        labels[x] = *first.entry(l).or_insert(x);
    }
}

/// Join of two congruences given by canonical labels.
pub fn congruence_join(m: &Model, a: &[usize], b: &[usize]) -> Vec<usize> {
    let pairs: Vec<(usize, usize)> = (0..m.size())
        .flat_map(|x| [(x, a[x]), (x, b[x])])
        .collect();
    congruence(m, &pairs)
}

/// `a ⊆ b` for congruences given by canonical labels.
pub fn congruence_leq(a: &[usize], b: &[usize]) -> bool {
    (0..a.len()).all(|x| b[x] == b[a[x]])
}

/// Quotient by a congruence given as canonical labels; classes are numbered
/// in order of their least element.
pub fn quotient(m: &Model, labels: &[usize]) -> Hom {
    let n = m.size();
    let mut rank = vec![usize::MAX; n];
    let mut k = 0;
    for x in 0..n {
        if labels[x] == x {
            rank[x] = k;
            k += 1;
        }
    }
    let map: Vec<usize> = (0..n).map(|x| rank[labels[x]]).collect();
    let reps: Vec<usize> = (0..n).filter(|&x| labels[x] == x).collect();
    let mut ops = [vec![0; k * k], vec![0; k * k]];
    for (t, table) in ops.iter_mut().enumerate() {
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                table[i * k + j] = map[m.op(t, a, b)];
            }
        }
    }
    let [op0, op1] = ops;
    let q = Model::from_ops_unchecked(
        m.sort(),
        k,
        op0,
        op1,
        map[m.constant(0)],
        map[m.constant(1)],
    );
    Hom::new_unchecked(m.clone(), q, map)
}

/// The subalgebra on a closed subset, with its inclusion. Elements keep
/// their relative order.
pub fn subalgebra(m: &Model, members: &[bool]) -> Hom {
    let elems: Vec<usize> = m.elements().filter(|&x| members[x]).collect();
    restrict(m, &elems, m.constant(0), m.constant(1)).1
}

/// Restricts both operations to `elems` (which must be closed under them)
/// with the given constants. Returns the new model and the inclusion map as
/// a plain function (it is a homomorphism only when the constants agree).
pub(crate) fn restrict(m: &Model, elems: &[usize], c0: usize, c1: usize) -> (Model, Hom) {
    let k = elems.len();
    let mut pos = vec![usize::MAX; m.size()];
    for (i, &x) in elems.iter().enumerate() {
        pos[x] = i;
    }
    let mut ops = [vec![0; k * k], vec![0; k * k]];
    for (t, table) in ops.iter_mut().enumerate() {
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                table[i * k + j] = pos[m.op(t, a, b)];
            }
        }
    }
    let [op0, op1] = ops;
    let sub = Model::from_ops_unchecked(m.sort(), k, op0, op1, pos[c0], pos[c1]);
    let incl = Hom::new_unchecked(sub.clone(), m.clone(), elems.to_vec());
    (sub, incl)
}

/// Builds a model whose elements are the given tuples (closed under the
/// componentwise operations of `factors`), ordered as given.
pub fn model_on_tuples(sort: Sort, factors: &[Model], tuples: &[Vec<usize>]) -> Model {
    let index: std::collections::HashMap<&[usize], usize> =
        tuples.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
    let n = tuples.len();
    let mut ops = [vec![0; n * n], vec![0; n * n]];
    let mut buf = vec![0; factors.len()];
    for (k, table) in ops.iter_mut().enumerate() {
        for (i, s) in tuples.iter().enumerate() {
            for (j, t) in tuples.iter().enumerate() {
                for (f, m) in factors.iter().enumerate() {
                    buf[f] = m.op(k, s[f], t[f]);
                }
                table[i * n + j] = index[buf.as_slice()];
            }
        }
    }
    let c: Vec<usize> = (0..2)
        .map(|k| {
            let t: Vec<usize> = factors.iter().map(|m| m.constant(k)).collect();
            index[t.as_slice()]
        })
        .collect();
    let [op0, op1] = ops;
    Model::from_ops_unchecked(sort, n, op0, op1, c[0], c[1])
}
