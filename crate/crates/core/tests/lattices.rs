//! Lattice routines against explicit submodule closure in W_s(F_q)^n.

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wittkit::lattice::{canonical_form, det, enumerate_lattices, lattice_type, membership_solve, WittMatrix};
use wittkit::oracle::VectorUniverse;
use wittkit::witt::{GaloisRing, GrElem};
use wittkit::Gf;

fn gr(p: u32, m: u32, s: u32) -> GaloisRing {
    GaloisRing::new(&Gf::new(p, m).unwrap(), s).unwrap()
}

/// Random square matrix whose columns are p-power multiples of random vectors,
/// so small colengths and repeated spans come up often.
fn sample(g: &GaloisRing, n: usize, rng: &mut ChaCha8Rng) -> WittMatrix {
    use rand::Rng;
    let d: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=g.s())).collect();
    let a = WittMatrix::random_invertible(g, n, rng);
    let b = WittMatrix::random_invertible(g, n, rng);
    a.mul(g, &WittMatrix::diagonal(g, &d)).mul(g, &b)
}

fn span(u: &VectorUniverse, m: &WittMatrix) -> Vec<bool> {
    u.closure(&m.columns())
}

#[test]
fn enumeration_matches_all_submodules() {
    for (p, m, s) in [(2, 1, 2), (2, 1, 3), (3, 1, 2)] {
        let g = gr(p, m, s);
        let n = 2;
        let universe = VectorUniverse::new(&g, n, 1 << 12).unwrap();
        let mut oracle: BTreeMap<u32, Vec<Vec<bool>>> = BTreeMap::new();
        for sub in universe.all_submodules().unwrap() {
            oracle.entry(universe.colength(&sub)).or_default().push(sub);
        }
        for (c, subs) in oracle {
            let lats = enumerate_lattices(&g, n, c).unwrap();
            let mut spans: Vec<Vec<bool>> = lats.iter().map(|l| span(&universe, &l.span)).collect();
            spans.sort();
            spans.dedup();
            assert_eq!(spans.len(), lats.len(), "duplicate spans at p={p} s={s} colength {c}");
            assert_eq!(spans, subs, "p={p} s={s} colength {c}");
            assert!(lats.iter().all(|l| l.colength == c && l.ty.iter().sum::<u32>() == c));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn canonical_equality_iff_equal_spans(seed in any::<u64>(), same in any::<bool>()) {
        let g = gr(2, 1, 3);
        let universe = VectorUniverse::new(&g, 2, 1 << 12).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = sample(&g, 2, &mut rng);
        let v = if same {
            u.mul(&g, &WittMatrix::random_invertible(&g, 2, &mut rng))
        } else {
            sample(&g, 2, &mut rng)
        };
        let equal_forms = canonical_form(&g, &u) == canonical_form(&g, &v);
        prop_assert_eq!(equal_forms, span(&universe, &u) == span(&universe, &v));
        if same {
            prop_assert!(equal_forms);
        }
    }

    #[test]
    fn smith_type_is_invariant(seed in any::<u64>(), n in 2usize..4) {
        let g = gr(3, 1, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = sample(&g, n, &mut rng);
        let a = WittMatrix::random_invertible(&g, n, &mut rng);
        let b = WittMatrix::random_invertible(&g, n, &mut rng);
        prop_assert_eq!(lattice_type(&g, &a.mul(&g, &u).mul(&g, &b)), lattice_type(&g, &u));
    }

    #[test]
    fn membership_iff_in_closure(seed in any::<u64>()) {
        let g = gr(2, 1, 3);
        let universe = VectorUniverse::new(&g, 2, 1 << 12).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = sample(&g, 2, &mut rng);
        let nr = g.valuation(&det(&g, &u));
        prop_assume!(nr < g.s());
        let inside = span(&universe, &u);
        for _ in 0..8 {
            let v: Vec<GrElem> = (0..2).map(|_| g.random(&mut rng)).collect();
            let x = membership_solve(&g, &u, nr, &v).unwrap();
            prop_assert_eq!(x.is_some(), inside[universe.index_of(&v)]);
            if let Some(x) = x {
                prop_assert_eq!(u.mul_vec(&g, &x), v);
            }
        }
    }
}
