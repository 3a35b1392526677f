//! Coproducts and coequalizers of modelled spaces, checked against every
//! map into a set of small probe spaces.

use coste::finmodel::{make_zmod, ring_product};
use coste::space::{
    coequalizer_spaces, coproduct_spaces, enumerate_maps, non_admissible_coequalizer, standard_probes,
    verify_coequalizer, verify_coproduct,
};
use coste::spectrum::spec;
use coste::{ContextId, Sort};

fn main() -> Result<(), coste::Error> {
    let ctx = ContextId::Zariski;
    let probes = standard_probes(ctx);
    let xs = [spec(ctx, &make_zmod(4)?)?.space, spec(ctx, &make_zmod(6)?)?.space];
    let c = coproduct_spaces(Sort::Ring, &xs)?;
    println!("Spec ℤ/4 ⊔ Spec ℤ/6: {} points", c.apex.len());
    println!("  universal: {}", verify_coproduct(&c, &xs, &probes, Some(ctx))?);

    let x = spec(ctx, &make_zmod(3)?)?.space;
    let y = spec(ctx, &ring_product(&[3, 3]))?.space;
    let maps = enumerate_maps(&x, &y, Some(ctx))?;
    if let [f, g, ..] = &maps[..] {
        let (z, p) = coequalizer_spaces(f, g)?;
        println!("coequalizer: {} points", z.len());
        println!("  universal: {}", verify_coequalizer(f, g, &z, &p, &probes, Some(ctx))?);
    }

    let (_, _, z, _) = non_admissible_coequalizer();
    println!("non-admissible pair: coequalizer T-modelled {}", z.is_t_modelled(ContextId::Dl)?);
    Ok(())
}
