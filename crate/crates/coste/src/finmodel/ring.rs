use super::{congruence, quotient, restrict, Hom, Model, Sort};
use crate::Error;

/// The ring ℤ/n.
pub fn make_zmod(n: usize) -> Result<Model, Error> {
    if n == 0 {
        return Err(Error::Invalid("ℤ/0 is not finite".into()));
    }
    let add = (0..n * n).map(|i| (i / n + i % n) % n).collect();
    let mul = (0..n * n).map(|i| (i / n) * (i % n) % n).collect();
    Ok(Model::from_ops_unchecked(Sort::Ring, n, add, mul, 0, 1 % n))
}

/// ℤ/m₁ × ℤ/m₂ × … with elements in lexicographic order.
pub fn ring_product(moduli: &[usize]) -> Model {
    let factors: Vec<Model> = moduli
        .iter()
        .map(|&m| make_zmod(m).expect("modulus must be positive"))
        .collect();
    Model::product(Sort::Ring, &factors)
}

/// A ring from explicit tables, checked.
pub fn ring_from_tables(
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
    zero: usize,
    one: usize,
) -> Result<Model, Error> {
    let n = add.len();
    if mul.len() != n || add.iter().chain(mul.iter()).any(|r| r.len() != n) {
        return Err(Error::Invalid("ring tables must be square and equal sized".into()));
    }
    Model::from_ops(
        Sort::Ring,
        n,
        add.into_iter().flatten().collect(),
        mul.into_iter().flatten().collect(),
        zero,
        one,
    )
}

/// 𝔽₂[ε]/ε², with a + bε stored as a + 2b.
pub fn dual_numbers() -> Model {
    let table = |op: fn((usize, usize), (usize, usize)) -> (usize, usize)| -> Vec<Vec<usize>> {
        (0..4)
            .map(|x| {
                (0..4)
                    .map(|y| {
                        let (a, b) = op((x % 2, x / 2), (y % 2, y / 2));
                        a % 2 + 2 * (b % 2)
                    })
                    .collect()
            })
            .collect()
    };
    let add = table(|(a, b), (c, d)| (a + c, b + d));
    let mul = table(|(a, b), (c, d)| (a * c, a * d + b * c));
    ring_from_tables(add, mul, 0, 1).expect("dual numbers form a ring")
}

pub fn units(a: &Model) -> Vec<usize> {
    a.elements()
        .filter(|&x| a.elements().any(|y| a.mul(x, y) == a.one()))
        .collect()
}

pub fn is_unit(a: &Model, x: usize) -> bool {
    a.elements().any(|y| a.mul(x, y) == a.one())
}

pub fn idempotents(a: &Model) -> Vec<usize> {
    a.elements().filter(|&x| a.mul(x, x) == x).collect()
}

/// The ideal generated by `gens`, as a membership vector.
pub fn ideal_generated(a: &Model, gens: &[usize]) -> Vec<bool> {
    let mut inside = vec![false; a.size()];
    let mut list = vec![a.zero()];
    inside[a.zero()] = true;
    for &g in gens {
        for r in a.elements() {
            let x = a.mul(r, g);
            if !inside[x] {
                inside[x] = true;
                list.push(x);
            }
        }
    }
    let mut i = 0;
    while i < list.len() {
        for j in 0..=i {
            let z = a.add(list[i], list[j]);
            if !inside[z] {
                inside[z] = true;
                list.push(z);
            }
        }
        i += 1;
    }
    inside
}

/// The idempotent among the powers of `x`.
pub(crate) fn idempotent_power(a: &Model, x: usize) -> usize {
    let mut p = x;
    for _ in 0..=a.size() {
        if a.mul(p, p) == p {
            return p;
        }
        p = a.mul(p, x);
    }
    unreachable!("some power of an element of a finite ring is idempotent")
}

/// `A[a⁻¹]`, computed as `eA` for the idempotent power `e` of `a`, with the
/// localization map `x ↦ ex`.
pub fn localize_at(a: &Model, x: usize) -> Hom {
    let e = idempotent_power(a, x);
    let mut elems: Vec<usize> = a.elements().map(|y| a.mul(e, y)).collect();
    elems.sort_unstable();
    elems.dedup();
    let (loc, _) = restrict(a, &elems, a.zero(), e);
    let pos = |y: usize| elems.binary_search(&y).expect("ey lies in eA");
    let map = a.elements().map(|y| pos(a.mul(e, y))).collect();
    Hom::new_unchecked(a.clone(), loc, map)
}

/// `a ≤ b` in the radical preorder: some power `bⁿ` with `1 ≤ n ≤ |A|` lies
/// in `⟨a⟩`.
pub fn radical_leq(a: &Model, x: usize, y: usize) -> bool {
    let mut p = y;
    for _ in 0..a.size() {
        if a.elements().any(|r| a.mul(r, x) == p) {
            return true;
        }
        p = a.mul(p, y);
    }
    false
}

/// `A/⟨gens⟩` with its projection.
pub fn quotient_by_ideal(a: &Model, gens: &[usize]) -> (Model, Hom) {
    let ideal = ideal_generated(a, gens);
    let pairs: Vec<(usize, usize)> = a
        .elements()
        .filter(|&x| ideal[x])
        .map(|x| (x, a.zero()))
        .collect();
    let h = quotient(a, &congruence(a, &pairs));
    (h.target.clone(), h)
}

/// Every ideal of `A`, found by closing under one more generator at a time.
pub(crate) fn all_ideals(a: &Model) -> Vec<Vec<bool>> {
    let mut seen = std::collections::BTreeSet::new();
    let start = ideal_generated(a, &[]);
    let mut stack = vec![start.clone()];
    seen.insert(start);
    while let Some(i) = stack.pop() {
        for x in a.elements().filter(|&x| !i[x]) {
            let mut gens: Vec<usize> = a.elements().filter(|&y| i[y]).collect();
            gens.push(x);
            let j = ideal_generated(a, &gens);
            if seen.insert(j.clone()) {
                stack.push(j);
            }
        }
    }
    seen.into_iter().collect()
}

/// All prime ideals, by exhaustive search over ideals and a direct check of
/// primality. Each ideal is returned as its sorted member list.
pub fn prime_ideals_oracle(a: &Model) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = all_ideals(a)
        .into_iter()
        .filter(|i| {
            !i[a.one()]
                && a.elements()
                    .all(|x| a.elements().all(|y| !i[a.mul(x, y)] || i[x] || i[y]))
        })
        .map(|i| a.elements().filter(|&x| i[x]).collect())
        .collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finmodel::{enumerate_homs, is_isomorphic};

    #[test]
    fn zmod_basics() {
        assert!(make_zmod(0).is_err());
        let z1 = make_zmod(1).unwrap();
        assert_eq!(z1.zero(), z1.one());
        let z12 = make_zmod(12).unwrap();
        z12.validate().unwrap();
        assert_eq!(units(&z12), vec![1, 5, 7, 11]);
        let z2 = make_zmod(2).unwrap();
        assert_eq!(units(&z2), vec![1]);
    }

    /// Independent oracle for localization: the image of `a` is a unit and
    /// every hom inverting `a` factors uniquely.
    fn localization_universal(a: &Model, x: usize, l: &Hom, probes: &[Model]) -> bool {
        if !is_unit(&l.target, l.apply(x)) {
            return false;
        }
        probes.iter().all(|b| {
            enumerate_homs(a, b).into_iter().all(|h| {
                let inverts = is_unit(b, h.apply(x));
                let factors = enumerate_homs(&l.target, b)
                    .into_iter()
                    .filter(|k| l.then(k) == h)
                    .count();
                if inverts {
                    factors == 1
                } else {
                    factors == 0
                }
            })
        })
    }

    #[test]
    fn localize_zmod12() {
        let z12 = make_zmod(12).unwrap();
        let probes: Vec<Model> = [1, 2, 3, 4, 6, 12]
            .iter()
            .map(|&n| make_zmod(n).unwrap())
            .collect();
        let l3 = localize_at(&z12, 3);
        assert_eq!(l3.target.size(), 4);
        assert_eq!(idempotent_power(&z12, 3), 9);
        assert!(is_isomorphic(&l3.target, &make_zmod(4).unwrap()));
        assert!(localization_universal(&z12, 3, &l3, &probes));
        let l2 = localize_at(&z12, 2);
        assert_eq!(idempotent_power(&z12, 2), 4);
        assert!(is_isomorphic(&l2.target, &make_zmod(3).unwrap()));
        assert!(localization_universal(&z12, 2, &l2, &probes));
        let l1 = localize_at(&z12, 1);
        assert!(l1.is_iso());
        let l0 = localize_at(&z12, 6);
        assert!(l0.target.is_trivial());
        for x in z12.elements() {
            let l = localize_at(&z12, x);
            l.target.validate().unwrap();
            assert!(l.preserves_structure());
        }
    }

    #[test]
    fn radical_order() {
        let z12 = make_zmod(12).unwrap();
        assert!(radical_leq(&z12, 4, 2));
        assert!(!radical_leq(&z12, 2, 3));
        assert!(z12.elements().all(|a| radical_leq(&z12, a, a)));
    }

    /// Ring form of the prime ideal theorem: `a ≤ b` iff every prime
    /// containing `a` contains `b`.
    #[test]
    fn radical_order_matches_primes() {
        for n in [4, 6, 8, 12, 18, 30, 36] {
            let a = make_zmod(n).unwrap();
            let primes = prime_ideals_oracle(&a);
            for x in a.elements() {
                for y in a.elements() {
                    let via_primes = primes
                        .iter()
                        .all(|p| !p.contains(&x) || p.contains(&y));
                    assert_eq!(radical_leq(&a, x, y), via_primes, "n={n} x={x} y={y}");
                }
            }
        }
    }

    #[test]
    fn quotients() {
        let z12 = make_zmod(12).unwrap();
        let (q, h) = quotient_by_ideal(&z12, &[3]);
        assert!(is_isomorphic(&q, &make_zmod(3).unwrap()));
        assert!(h.preserves_structure());
        let (q0, _) = quotient_by_ideal(&z12, &[0]);
        assert_eq!(q0, z12);
        let (q1, _) = quotient_by_ideal(&z12, &[1]);
        assert!(q1.is_trivial());
    }

    #[test]
    fn prime_ideal_oracle_values() {
        let z12 = make_zmod(12).unwrap();
        let primes = prime_ideals_oracle(&z12);
        assert_eq!(
            primes,
            vec![vec![0, 2, 4, 6, 8, 10], vec![0, 3, 6, 9]]
        );
        let f5 = make_zmod(5).unwrap();
        assert_eq!(prime_ideals_oracle(&f5), vec![vec![0]]);
        assert!(prime_ideals_oracle(&make_zmod(1).unwrap()).is_empty());
    }

    #[test]
    fn ideal_count_of_z60() {
        let z60 = make_zmod(60).unwrap();
        assert_eq!(all_ideals(&z60).len(), 12);
    }
}
