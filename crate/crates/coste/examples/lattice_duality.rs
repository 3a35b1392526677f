//! Finite distributive lattices and their spectra of prime filters.
//!
//! The compact opens of the spectrum recover the lattice.

use coste::finmodel::{boolean_lattice, chain, diamond, is_isomorphic};
use coste::spectrum::{spec, unit_eta};
use coste::ContextId;

fn main() -> Result<(), coste::Error> {
    for (name, l) in [("chain 3", chain(3)), ("diamond", diamond()), ("2²", boolean_lattice(2))] {
        let s = spec(ContextId::Dl, &l)?;
        let order: Vec<(usize, usize)> = s.space.poset().covers();
        println!("{name}: {} points, covers {order:?}", s.len());
        println!("  compact opens ≅ L: {}", is_isomorphic(&s.compact_lattice, &l));
        println!("  η iso: {}", unit_eta(&s).is_iso());
    }
    Ok(())
}
