// Determinant, Mahler measure and root-of-unity evaluation of a few Jones polynomials.

use knotstat::invariants::{degree, determinant, mahler_measure, rescale, DerivedInvariantKind, DEFAULT_MAHLER_POINTS, DEFAULT_ZETA};
use knotstat::poly::LaurentPoly1;

pub fn run_example() -> knotstat::Result<()> {
    let figure_eight = LaurentPoly1::parse("-2;1 -1 1 -1 1")?;
    let trefoil = LaurentPoly1::from_terms([(1, 1), (3, 1), (4, -1)])?;

    for (name, p) in [("4_1", &figure_eight), ("3_1", &trefoil)] {
        let det = determinant(p)?;
        let m = mahler_measure(p, DEFAULT_MAHLER_POINTS)?;
        let zeta = DerivedInvariantKind::RootOfUnityEval {
            k: DEFAULT_ZETA.k,
            n: DEFAULT_ZETA.n,
        };
        println!(
            "{name}: det {det}, mahler {m:.6}, |J(zeta)| {:.6}, rescaled det {:.4}",
            zeta.value(p)?,
            rescale(det as f64, degree(p))?,
        );
    }

    assert_eq!(determinant(&figure_eight)?, 5);
    assert_eq!(determinant(&trefoil)?, 3);
    Ok(())
}

fn main() -> knotstat::Result<()> {
    run_example()
}
