//! Every map into a local ring factors through a unique étale arrow
//! followed by an admissible map.

use coste::context::is_admissible;
use coste::finmodel::{enumerate_homs, make_zmod};
use coste::spectrum::{factorization_is_initial, factorize};
use coste::ContextId;

fn main() -> Result<(), coste::Error> {
    let ctx = ContextId::Zariski;
    for (n, m) in [(12, 4), (36, 9), (60, 4)] {
        let (a, b) = (make_zmod(n)?, make_zmod(m)?);
        for alpha in enumerate_homs(&a, &b) {
            let (v, f) = factorize(ctx, &alpha)?;
            println!(
                "ℤ/{n} → ℤ/{m}: through a model of order {}, second leg admissible {}, initial {}",
                v.codomain(f.middle).size(),
                is_admissible(ctx, &f.second)?,
                factorization_is_initial(ctx, &alpha, &v, &f)?
            );
        }
    }
    Ok(())
}
