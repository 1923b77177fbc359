use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stabtrim::canonical::canonicalize;
use stabtrim::partition::Party;
use stabtrim::tableau::{random_pure_with, random_tripartition};
use stabtrim::trimming::{check_trim, execute_trim, exhaustive_trim_oracle, plan_trim};
use stabtrim::{Cut, StabilizerTableau};

fn instance(seed: u64, dim: u32, max_n: usize, max_c: usize) -> StabilizerTableau {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(3..=max_n);
    let labels = loop {
        let l = random_tripartition(n, &mut rng).unwrap();
        if l.iter().filter(|&&p| p == Party::C).count() <= max_c {
            break l;
        }
    };
    random_pure_with(n, dim, &mut rng).unwrap().with_parties(labels).unwrap()
}

#[test]
fn verdict_matches_exhaustive_search() {
    let mut feasible = 0;
    for seed in 0..80 {
        let t = instance(seed, 2, 5, 2);
        let v = check_trim(&t).unwrap();
        assert_eq!(v.feasible, exhaustive_trim_oracle(&t).unwrap(), "seed {seed}\n{t}");
        feasible += usize::from(v.feasible);
    }
    assert!(feasible > 0 && feasible < 80, "sweep is one-sided: {feasible}");
}

#[test]
fn feasible_plans_preserve_entanglement() {
    for seed in 0..120 {
        let dim = if seed % 2 == 0 { 2 } else { 3 };
        let t = instance(1000 + seed, dim, 7, 7);
        let v = check_trim(&t).unwrap();
        if !v.feasible {
            continue;
        }
        let plan = plan_trim(&t, &v).unwrap();
        assert!(plan.measurements.len() <= v.pair_count);
        let r = execute_trim(&t, &plan).unwrap();
        assert!(r.achieved_bits <= r.initial_bits);
        assert!(r.success, "seed {seed}\n{t}");
        assert_eq!(r.achieved_bits, r.initial_bits);
        let ab = r.ab_tableau.unwrap();
        let labels = ab.parties().unwrap().to_vec();
        let e = canonicalize(&ab, &Cut::from_parties(&labels, &[Party::A])).unwrap();
        assert_eq!(e.entanglement_bits(), v.initial_bits);
    }
}

#[test]
fn rewritten_pairs_have_the_promised_shape() {
    for seed in 0..120 {
        let dim = [2, 3, 5][seed as usize % 3];
        let t = instance(5000 + seed, dim, 7, 7);
        let v = check_trim(&t).unwrap();
        let Some(rw) = v.rewritten_form() else { continue };
        assert!(rw.same_group(&t).unwrap());
        let labels = t.parties().unwrap();
        let acts_on = |p: &stabtrim::PauliOperator, party| p.support().iter().any(|&s| labels[s] == party);
        for c in &v.condition1 {
            assert!(!acts_on(&c.witness, Party::A));
        }
        for g in &v.condition2 {
            for (first, second) in &g.pairs {
                assert!(!acts_on(first, Party::A));
                assert!(acts_on(second, Party::A));
            }
            for s in &g.b_free {
                assert!(!acts_on(s, Party::B));
            }
        }
    }
}
