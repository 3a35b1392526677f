//! Limits in the admissible category are spectra of limits of modelled
//! spaces.

use coste::finmodel::{boolean_lattice, chain, make_zmod};
use coste::relspec::{admissible_equalizer, admissible_product};
use coste::space::{enumerate_maps, find_space_iso};
use coste::spectrum::spec;
use coste::ContextId;

fn main() -> Result<(), coste::Error> {
    let ctx = ContextId::Zariski;
    for (m, n) in [(4, 6), (4, 9), (12, 18)] {
        let xs = [spec(ctx, &make_zmod(m)?)?.space, spec(ctx, &make_zmod(n)?)?.space];
        let (p, _) = admissible_product(ctx, &xs)?;
        let stalks: Vec<usize> = p.space.stalks().iter().map(|s| s.size()).collect();
        println!("Spec ℤ/{m} × Spec ℤ/{n}: {} points, stalks {stalks:?}", p.len());
    }
    let two = spec(ctx, &make_zmod(2)?)?.space;
    let (p, _) = admissible_product(ctx, &[spec(ctx, &make_zmod(4)?)?.space, spec(ctx, &make_zmod(6)?)?.space])?;
    println!("  ≅ Spec ℤ/2: {}", find_space_iso(&p.space, &two).is_some());

    let ctx = ContextId::Dl;
    let x = spec(ctx, &boolean_lattice(2))?.space;
    let y = spec(ctx, &chain(3))?.space;
    let maps = enumerate_maps(&x, &y, Some(ctx))?;
    for (i, f) in maps.iter().enumerate() {
        for g in &maps[i + 1..] {
            let (e, _) = admissible_equalizer(ctx, f, g)?;
            println!("equalizer of two admissible maps: {} points", e.len());
        }
    }
    Ok(())
}
