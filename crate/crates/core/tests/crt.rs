use proptest::prelude::*;
use stabtrim::crt::{crt_decompose, CrtDecomposition};
use stabtrim::oracle::{dense_state, entropy};
use stabtrim::tableau::random_pure_tableau;
use stabtrim::{Cut, PauliOperator, StabilizerTableau};

fn composite(n: usize, dims: &[u32], seed: u64) -> (StabilizerTableau, Vec<StabilizerTableau>) {
    let comps: Vec<_> =
        dims.iter().enumerate().map(|(i, &d)| random_pure_tableau(n, d, seed.wrapping_mul(7).wrapping_add(i as u64)).unwrap()).collect();
    let t = CrtDecomposition::from_components(comps.clone()).unwrap().recompose().unwrap();
    (t, comps)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn decompose_inverts_recompose(n in 1usize..5, seed in any::<u64>(), ten in any::<bool>()) {
        let dims: &[u32] = if ten { &[2, 5] } else { &[2, 3] };
        let (t, comps) = composite(n, dims, seed);
        let dec = crt_decompose(&t).unwrap();
        prop_assert_eq!(&dec.components, &comps);
        prop_assert_eq!(dec.recompose().unwrap(), t);
    }

    #[test]
    fn commutation_is_componentwise(
        dim in prop::sample::select(vec![6u32, 10]),
        v in prop::collection::vec(0u32..30, 6),
        w in prop::collection::vec(0u32..30, 6),
    ) {
        let mk = |v: &[u32]| {
            let v: Vec<u32> = v.iter().map(|x| x % dim).collect();
            PauliOperator::new(dim, 0, v).unwrap().admissible_form().unwrap()
        };
        let (p, q) = (mk(&v), mk(&w));
        let composite_zero = p.symplectic_product(&q).unwrap() == 0;
        let factors: Vec<u32> = stabtrim::crt::factor_square_free(dim).unwrap();
        let residues = stabtrim::crt::residue_exponents(dim, &factors);
        let mut all_zero = true;
        for (&d, &r) in factors.iter().zip(&residues) {
            let red = |p: &PauliOperator| {
                let v = p.vector().chunks(2).flat_map(|xz| [xz[0] % d, xz[1] * r % d]).collect();
                PauliOperator::new(d, 0, v).unwrap()
            };
            all_zero &= red(&p).symplectic_product(&red(&q)).unwrap() == 0;
        }
        prop_assert_eq!(composite_zero, all_zero);
    }
}

#[test]
fn entropy_is_additive_over_components() {
    for seed in 0..12 {
        let n = 1 + seed as usize % 3;
        let (t, comps) = composite(n, &[2, 3], seed);
        let rho = dense_state(&t).unwrap();
        let parts: Vec<_> = comps.iter().map(|c| dense_state(c).unwrap()).collect();
        for cut in Cut::all(n) {
            let whole = entropy(&rho, &cut).unwrap();
            let sum: f64 = parts.iter().map(|p| entropy(p, &cut).unwrap()).sum();
            assert!((whole - sum).abs() < 1e-9, "seed {seed} cut {cut}: {whole} vs {sum}");
        }
    }
}

#[test]
fn decomposed_components_are_tensor_factors() {
    // the composite projector equals the Kronecker product of the components
    let (t, comps) = composite(2, &[2, 3], 3);
    let rho = dense_state(&t).unwrap();
    let a = dense_state(&comps[0]).unwrap();
    let b = dense_state(&comps[1]).unwrap();
    let n = 2;
    let dim = 6usize.pow(n as u32);
    for i in 0..dim {
        for j in 0..dim {
            let digits = |k: usize| (0..n).map(|s| (k / 6usize.pow((n - 1 - s) as u32)) % 6).collect::<Vec<_>>();
            let idx = |ds: &[usize], d: usize| ds.iter().fold(0, |acc, &x| acc * d + x % d);
            let (di, dj) = (digits(i), digits(j));
            let want = a.matrix()[(idx(&di, 2), idx(&dj, 2))] * b.matrix()[(idx(&di, 3), idx(&dj, 3))];
            assert!((rho.matrix()[(i, j)] - want).norm() < 1e-12);
        }
    }
}
