use casson_core::formulas::{
    bb_census, lambda_psl_expr, lambda_psl_seifert_hs, lambda_psl_small_seifert, lambda_psl_twist, lambda_sl_expr,
    lambda_sl_small_seifert,
};
use casson_core::oracle::{count_sector, SectorSpec};
use casson_core::snf::two_torsion_order;
use casson_core::{
    AbelianGroup, ManifoldExpr, ManifoldSpec, QuarterRational, SeifertHSSpec, SmallSeifertSpec, TwistSurgerySpec,
};
use proptest::prelude::*;

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn small_seifert() -> impl Strategy<Value = SmallSeifertSpec> {
    (2i64..=16, 2i64..=16, 2i64..=16, 1i64..=33, 1i64..=33, -33i64..=33).prop_filter_map(
        "invalid coefficients",
        |(p, q, r, a, b, c)| SmallSeifertSpec::new(p, q, r, a, b, c).ok(),
    )
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

proptest! {
    #[test]
    fn invariants_are_permutation_symmetric(spec in small_seifert()) {
        let psl = lambda_psl_small_seifert(&spec).unwrap();
        let sl = lambda_sl_small_seifert(&spec).unwrap();
        for perm in PERMS {
            let s = spec.permuted(perm);
            prop_assert_eq!(lambda_psl_small_seifert(&s).unwrap(), psl);
            prop_assert_eq!(lambda_sl_small_seifert(&s).unwrap(), sl);
        }
    }

    #[test]
    fn composition_identity_holds(spec in small_seifert()) {
        prop_assert_eq!(bb_census(&spec).unwrap().lambda_psl_from_census, lambda_psl_small_seifert(&spec).unwrap());
    }

    #[test]
    fn values_are_nonnegative_and_sl_integral(spec in small_seifert()) {
        prop_assert!(!lambda_psl_small_seifert(&spec).unwrap().is_negative());
        let sl = lambda_sl_small_seifert(&spec).unwrap();
        prop_assert!(sl.is_integer() && !sl.is_negative());
    }

    #[test]
    fn z2_homology_spheres_agree(spec in small_seifert()) {
        prop_assume!(spec.homology_order_signed() % 2 != 0);
        prop_assert_eq!(lambda_psl_small_seifert(&spec).unwrap(), lambda_sl_small_seifert(&spec).unwrap());
    }

    #[test]
    fn twist_values_are_nonnegative(xi in 1i64..=12, p in -41i64..=41, q in -9i64..=9) {
        prop_assume!(p % 2 != 0 && q != 0 && gcd(p, q) == 1);
        let v = lambda_psl_twist(&TwistSurgerySpec::new(xi, p, q).unwrap()).unwrap();
        prop_assert!(!v.is_negative());
    }
}

#[test]
fn coprime_triples_reduce_to_homology_spheres() {
    for p in 2..=11 {
        for q in 2..=11 {
            for r in 2..=11 {
                if gcd(p, q) != 1 || gcd(p, r) != 1 || gcd(q, r) != 1 {
                    continue;
                }
                let shs = lambda_psl_seifert_hs(&SeifertHSSpec::new(vec![p, q, r]).unwrap()).unwrap();
                for (a, b, c) in [(1, 1, 1), (1, 1, -1), (-1, 2, 3)] {
                    let Ok(spec) = SmallSeifertSpec::new(p, q, r, a, b, c) else { continue };
                    assert_eq!(lambda_psl_small_seifert(&spec).unwrap(), shs);
                    assert_eq!(lambda_sl_small_seifert(&spec).unwrap(), shs);
                }
            }
        }
    }
}

#[test]
fn odd_coprime_sectors_mirror_each_other() {
    // With a, b, c odd the −I sector uses the odd exponents; on pairwise-coprime
    // odd orders that is the +I class list negated, so the counts coincide.
    for (p, q, r) in [(3, 5, 7), (3, 5, 11), (5, 7, 9), (3, 7, 11)] {
        let spec = SmallSeifertSpec::new(p, q, r, 1, 1, 1).unwrap();
        let plus = count_sector(p, q, r, SectorSpec::identity());
        let minus = count_sector(p, q, r, SectorSpec::minus_identity(&spec));
        assert_eq!(plus, minus, "({p},{q},{r})");
    }
}

fn homomorphisms_to_z2(g: &AbelianGroup) -> i128 {
    // Elements killed by 2, counted directly.
    let orders = g.factors();
    let mut count = 0;
    let mut idx = vec![0i128; orders.len()];
    loop {
        if idx.iter().zip(orders).all(|(&x, &n)| (2 * x) % n == 0) {
            count += 1;
        }
        let mut i = 0;
        while i < idx.len() {
            idx[i] += 1;
            if idx[i] < orders[i] {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
        if i == idx.len() {
            return count;
        }
    }
}

#[test]
fn two_torsion_matches_enumeration() {
    for m in 1..=14 {
        for n in 1..=14 {
            let g = AbelianGroup::from_cyclic_orders(&[m, n]).unwrap();
            assert_eq!(two_torsion_order(&g).unwrap(), homomorphisms_to_z2(&g), "{g}");
        }
    }
}

#[test]
fn connected_sum_of_homology_spheres() {
    let leaf = |m: Vec<i64>| ManifoldSpec::SeifertHS(SeifertHSSpec::new(m).unwrap());
    let e = ManifoldExpr::left_fold(vec![leaf(vec![2, 3, 5]), leaf(vec![2, 3, 7])]);
    assert_eq!(lambda_psl_expr(&e).unwrap(), QuarterRational::from_int(5).unwrap());
    assert_eq!(lambda_sl_expr(&e).unwrap(), QuarterRational::from_int(5).unwrap());
}
