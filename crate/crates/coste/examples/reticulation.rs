//! The reticulation of a ring and the prime ideal theorem for its étale
//! semilattice.

use coste::context::etale_semilattice;
use coste::finmodel::make_zmod;
use coste::semilattice::{pit_holds, reticulation};
use coste::ContextId;

fn main() -> Result<(), coste::Error> {
    for n in [12, 30, 36] {
        let a = make_zmod(n)?;
        let v = etale_semilattice(ContextId::Zariski, &a)?;
        let r = reticulation(&v)?;
        println!(
            "ℤ/{n}: 𝒱 has {} elements, free lattice {}, reticulation {}, PIT {}",
            v.len(),
            r.free.lattice.size(),
            r.lattice.size(),
            pit_holds(&v)
        );
    }
    Ok(())
}
