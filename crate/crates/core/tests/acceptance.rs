//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (visible with `cargo test --test acceptance -- --nocapture`). Every
//! comparison is exact; there are no tolerances anywhere.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use symlat::combinat::{
    enumerate_monomials, even_binomial_sum_witness, factorial_power_witness, pair_partitions,
};
use symlat::exactnum::{double_factorial, factorial, scalar, Scalar};
use symlat::homobasis::{basis_element, element_norm, moment_bracket, orthogonal_gram, transition};
use symlat::hyperkahler::{prime_set, registry, report, sym_discriminant};
use symlat::lattices::{complement_discriminant, Embedding, Lattice};
use symlat::orthopoly::{monic_poly, recurrence_coeff, squared_norm, MomentFunctional, UniPoly};
use symlat::randmat::{
    random_finite_index_transform, random_full_rank_rows, random_nonsingular_symmetric_gram,
    random_unimodular_gram, rng_from_seed,
};
use symlat::symform::{bracket_monomials, GramMatrix};
use symlat::theta::{theta, verify_main_theorem};
use symlat::{FactoredInteger, MultiIndex};

fn conclude(name: &str, start: Instant, failures: Vec<String>) {
    let ms = start.elapsed().as_millis();
    if failures.is_empty() {
        println!("PASS {name} ({ms} ms)");
    } else {
        println!("FAIL {name} ({ms} ms, {} failures)", failures.len());
        for f in &failures {
            eprintln!("  {f}");
        }
        panic!("{name}: {} exact checks failed", failures.len());
    }
}

macro_rules! check {
    ($failures:expr, $cond:expr, $($msg:tt)*) => {
        if !$cond {
            $failures.push(format!($($msg)*));
        }
    };
}

#[test]
fn criterion_1_theta_special_cases() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for d in 0..=12u32 {
        check!(failures, theta(d, 0).unwrap().is_one(), "theta({d}, 0) != 1");
        check!(failures, theta(d, 1).unwrap().is_one(), "theta({d}, 1) != 1");
        let expected = FactoredInteger::from_bigint(
            &(num_traits::pow::Pow::pow(&BigInt::from(2), d as u64) * BigInt::from(d + 3)),
        )
        .unwrap();
        check!(
            failures,
            theta(d, 2).unwrap() == expected,
            "theta({d}, 2) != 2^{d} * ({d} + 3)"
        );
    }
    for k in 0..=10u32 {
        let odd = FactoredInteger::from_bigint(&double_factorial(2 * k as i64 - 1).unwrap())
            .unwrap();
        check!(
            failures,
            theta(0, k).unwrap() == odd,
            "theta(0, {k}) != (2k-1)!!"
        );
        let fact = FactoredInteger::from_bigint(&factorial(k as u64))
            .unwrap()
            .pow(k as i64 + 1);
        check!(
            failures,
            theta(1, k).unwrap() == fact,
            "theta(1, {k}) != (k!)^(k+1)"
        );
    }
    conclude("criterion 1: theta special cases", start, failures);
}

#[test]
fn criterion_2_main_theorem_brute_force() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut rng = rng_from_seed(0xACCE97_02);
    for rank in 1..=4usize {
        for k in 1..=4u32 {
            for sample in 0..20 {
                let g = random_nonsingular_symmetric_gram(&mut rng, rank, -5, 5);
                let rep = verify_main_theorem(&g, k).unwrap();
                check!(
                    failures,
                    rep.equal,
                    "rank {rank}, k {k}, sample {sample}: det {} != closed form {}",
                    rep.lhs,
                    rep.rhs
                );
            }
        }
    }
    conclude("criterion 2: determinant closed form, brute force", start, failures);
}

#[test]
fn criterion_3_hyperkahler_numbers() {
    let start = Instant::now();
    let mut failures = Vec::new();

    let hilb2 = registry("K3_Hilb", Some(2)).unwrap();
    let disc2 = sym_discriminant(&hilb2, false).unwrap();
    check!(
        failures,
        disc2.sqrt().map(|s| s.to_string()).unwrap_or_default() == "2^23 * 5",
        "sqrt discriminant for two points: got {disc2}"
    );

    let hilb3 = registry("K3_Hilb", Some(3)).unwrap();
    let disc3 = sym_discriminant(&hilb3, false).unwrap();
    check!(
        failures,
        disc3.to_string() == "2^1106 * 3^92",
        "discriminant for three points: got {disc3}"
    );

    let torsion: FactoredInteger = "2^277 * 3^46".parse().unwrap();
    let r = report(&hilb3, true, Some(&torsion)).unwrap();
    check!(
        failures,
        r.complement_discriminant.as_ref().map(|c| c.to_string()).unwrap_or_default() == "2^552",
        "complement discriminant: got {:?}",
        r.complement_discriminant
    );

    let og6 = prime_set(&registry("OG6", None).unwrap()).unwrap();
    check!(
        failures,
        og6.iter().copied().collect::<Vec<_>>() == vec![2, 3],
        "OG6 prime set: got {og6:?}"
    );
    let og10 = prime_set(&registry("OG10", None).unwrap()).unwrap();
    check!(
        failures,
        og10.iter().copied().collect::<Vec<_>>() == vec![2, 3, 5],
        "OG10 prime set: got {og10:?}"
    );

    conclude("criterion 3: hyperkahler discriminants", start, failures);
}

#[test]
fn criterion_4_orthogonal_polynomials() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for m in 1..=30i64 {
        let fun = MomentFunctional::new(m).unwrap();
        let max_n = ((m + 1) / 2) as usize;
        let polys: Vec<UniPoly> = (0..=max_n)
            .map(|n| monic_poly(n as u32, m).unwrap())
            .collect();

        // pairwise orthogonality inside the functional's degree bound
        for i in 0..=max_n {
            for j in 0..i {
                if (i + j) as i64 <= m - 1 {
                    let v = fun.apply(&polys[i].mul(&polys[j])).unwrap();
                    check!(failures, v.is_zero(), "m={m}: <p_{i}, p_{j}> = {v} != 0");
                }
            }
        }

        for n in 0..=((m - 1) / 2).max(0) as usize {
            let p = &polys[n];
            // squared norm = product of recurrence coefficients
            let direct = fun.apply(&p.mul(p)).unwrap();
            let closed = squared_norm(n as u32, m).unwrap();
            check!(failures, direct == closed, "m={m} n={n}: norm {direct} != {closed}");
            // monomial pairings
            let mut xk = UniPoly::one();
            for k in 0..n {
                let v = fun.apply(&p.mul(&xk)).unwrap();
                check!(failures, v.is_zero(), "m={m} n={n}: <x^{k}, p_n> = {v} != 0");
                xk = xk.mul_x();
            }
            let v = fun.apply(&p.mul(&xk)).unwrap();
            check!(failures, v == closed, "m={m} n={n}: <x^n, p_n> != norm");
        }

        // differential relation and three-term recurrence as exact identities
        let one_plus_x2 = UniPoly::from_coeffs(vec![Scalar::one(), Scalar::zero(), Scalar::one()]);
        for n in 1..=max_n as u32 {
            let prev = monic_poly(n - 1, m - 2).unwrap();
            let lhs = one_plus_x2
                .mul(&prev.derivative())
                .sub(&prev.mul_x().scale(&scalar(m - 1)));
            let rhs = monic_poly(n, m).unwrap().scale(&scalar(n as i64 - m));
            check!(failures, lhs == rhs, "m={m} n={n}: differential relation");
        }
        for n in 1..=((m - 1) / 2).max(0) as u32 {
            let lhs = monic_poly(n + 1, m).unwrap();
            let rhs = monic_poly(n, m).unwrap().mul_x().sub(
                &monic_poly(n - 1, m)
                    .unwrap()
                    .scale(&recurrence_coeff(n, m).unwrap()),
            );
            check!(failures, lhs == rhs, "m={m} n={n}: three-term recurrence");
        }
    }
    conclude("criterion 4: orthogonal polynomial suite", start, failures);
}

#[test]
fn criterion_5_homogeneous_basis() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for d in 0..=3usize {
        for k in 0..=4u32 {
            let r = orthogonal_gram(d, k).unwrap();
            check!(failures, r.pairwise_orthogonal, "d={d} k={k}: basis not orthogonal");
            check!(
                failures,
                r.matches_theta,
                "d={d} k={k}: norm product {} != theta {}",
                r.determinant,
                r.theta
            );
            // norm recursion equals the direct bracket
            for alpha in enumerate_monomials(d, k) {
                let h = basis_element(&alpha).unwrap();
                let direct = moment_bracket(&h.poly, &h.poly).unwrap();
                check!(failures, h.norm == direct, "alpha={alpha}: recursion norm != bracket");
            }
            let t = transition(d, k).unwrap();
            check!(
                failures,
                t.unit_diagonal && t.lower_triangular && t.reconstruction_ok,
                "d={d} k={k}: transition matrix not unit lower triangular"
            );
        }
        // norm products up to k = 5
        for k in 0..=5u32 {
            let mut product = Scalar::one();
            for alpha in enumerate_monomials(d, k) {
                product *= element_norm(&alpha).unwrap();
            }
            check!(
                failures,
                product == theta(d as u32, k).unwrap().value(),
                "d={d} k={k}: norm product {product} != theta"
            );
        }
    }
    conclude("criterion 5: homogeneous orthogonal basis", start, failures);
}

#[test]
fn criterion_6_bracket_oracle_equivalence() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut rng = rng_from_seed(0xACCE97_06);

    let random_index = |rng: &mut rand_chacha::ChaCha8Rng, d: usize, deg: u32| -> MultiIndex {
        let all = enumerate_monomials(d, deg);
        all[rng.random_range(0..all.len())].clone()
    };

    // moment bracket vs pair-partition bracket at the identity
    for _ in 0..200 {
        let d = rng.random_range(0..=3usize);
        let deg_a = rng.random_range(0..=4);
        let deg_b = rng.random_range(0..=4);
        let a = random_index(&mut rng, d, deg_a);
        let b = random_index(&mut rng, d, deg_b);
        let via_moments = moment_bracket(
            &symlat::MultiPoly::monomial(a.clone(), Scalar::one()),
            &symlat::MultiPoly::monomial(b.clone(), Scalar::one()),
        )
        .unwrap();
        if (a.degree() + b.degree()) % 2 == 1 {
            check!(failures, via_moments.is_zero(), "odd bracket <{a},{b}> nonzero");
            continue;
        }
        let mut indices = a.variable_multiset();
        indices.extend(b.variable_multiset());
        let via_partitions =
            bracket_monomials(&GramMatrix::identity(d + 1), &indices).unwrap();
        check!(
            failures,
            via_moments == via_partitions,
            "<{a},{b}>: {via_moments} != {via_partitions}"
        );
    }

    // diagonal closed form vs the hafnian
    for _ in 0..200 {
        let d = rng.random_range(0..=3usize);
        let diag: Vec<i64> = (0..=d)
            .map(|_| loop {
                let v = rng.random_range(-5..=5i64);
                if v != 0 {
                    break v;
                }
            })
            .collect();
        let g = GramMatrix::diagonal(diag.iter().map(|&x| scalar(x)).collect());
        let deg_a = rng.random_range(0..=4);
        let deg_b = rng.random_range(0..=4);
        let a = random_index(&mut rng, d, deg_a);
        let b = random_index(&mut rng, d, deg_b);
        if (a.degree() + b.degree()) % 2 == 1 {
            continue;
        }
        let mut indices = a.variable_multiset();
        indices.extend(b.variable_multiset());
        let via_hafnian = bracket_monomials(&g, &indices).unwrap();
        let mut closed = Scalar::one();
        let mut vanishes = false;
        for i in 0..=d {
            let s = (a.get(i) + b.get(i)) as i64;
            if s % 2 != 0 {
                vanishes = true;
                break;
            }
            closed *= scalar(diag[i]).pow((s / 2) as i32)
                * Scalar::from_integer(double_factorial(s - 1).unwrap());
        }
        let expected = if vanishes { Scalar::zero() } else { closed };
        check!(
            failures,
            via_hafnian == expected,
            "diagonal <{a},{b}>: {via_hafnian} != {expected}"
        );
    }

    conclude("criterion 6: bracket oracle equivalence", start, failures);
}

#[test]
fn criterion_7_lattice_properties() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut rng = rng_from_seed(0xACCE97_07);

    // index of a finite-index sublattice of a unimodular lattice is the
    // square root of its discriminant
    for case in 0..100 {
        let rank = 1 + case % 6;
        let m = Lattice::new(random_unimodular_gram(&mut rng, rank)).unwrap();
        let t = random_finite_index_transform(&mut rng, rank, 2, 20);
        let e = Embedding::new(m, t).unwrap();
        let index = e.quotient_torsion().unwrap();
        let disc = e.sublattice_discriminant().unwrap();
        check!(
            failures,
            index.pow(2) == disc,
            "case {case}: index^2 {} != discriminant {disc}",
            index.pow(2)
        );
    }

    // torsion of the quotient divides the sublattice discriminant
    let mut done = 0;
    while done < 100 {
        let rank = 2 + done % 5;
        let corank = 1 + done % (rank - 1).max(1);
        let m = Lattice::new(random_nonsingular_symmetric_gram(&mut rng, rank, -4, 4)).unwrap();
        let rows = random_full_rank_rows(&mut rng, rank - corank, rank, 3);
        let e = Embedding::new(m, rows).unwrap();
        if e.sublattice_gram().det().unwrap().is_zero() {
            continue;
        }
        let torsion = e.quotient_torsion().unwrap();
        let disc = e.sublattice_discriminant().unwrap();
        check!(
            failures,
            torsion.divides(&disc),
            "torsion {torsion} does not divide discriminant {disc}"
        );
        done += 1;
    }

    // a primitive sublattice of a unimodular lattice and its orthogonal
    // complement have equal discriminants
    let mut done = 0;
    while done < 100 {
        let rank = 2 + done % 5;
        let m = Lattice::new(random_unimodular_gram(&mut rng, rank)).unwrap();
        let rows = random_full_rank_rows(&mut rng, 1 + done % (rank - 1).max(1), rank, 3);
        let primitive = Embedding::new(m, rows).unwrap().double_complement().unwrap();
        if primitive.sublattice_gram().det().unwrap().is_zero() {
            continue;
        }
        check!(failures, primitive.is_primitive().unwrap(), "saturation not primitive");
        let disc = primitive.sublattice_discriminant().unwrap();
        let perp_disc = primitive
            .orthogonal_complement()
            .unwrap()
            .sublattice_discriminant()
            .unwrap();
        check!(
            failures,
            disc == perp_disc,
            "primitive discriminant {disc} != complement {perp_disc}"
        );
        done += 1;
    }

    // complement and saturation discriminants via the torsion quotient
    let mut done = 0;
    while done < 100 {
        let rank = 2 + done % 5;
        let m = Lattice::new(random_unimodular_gram(&mut rng, rank)).unwrap();
        let rows = random_full_rank_rows(&mut rng, 1 + done % rank, rank, 3);
        let e = Embedding::new(m, rows).unwrap();
        if e.sublattice_gram().det().unwrap().is_zero() {
            continue;
        }
        let expected = complement_discriminant(
            &e.sublattice_discriminant().unwrap(),
            &e.quotient_torsion().unwrap(),
        )
        .unwrap();
        let perp = e.orthogonal_complement().unwrap().sublattice_discriminant().unwrap();
        let satur = e.double_complement().unwrap().sublattice_discriminant().unwrap();
        check!(
            failures,
            perp == expected && satur == expected,
            "complement {perp} / saturation {satur} != {expected}"
        );
        done += 1;
    }

    conclude("criterion 7: lattice property suite", start, failures);
}

#[test]
fn criterion_8_combinatorial_identities() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for d in 1..=8i64 {
        for k in 0..=10i64 {
            let (l, r) = factorial_power_witness(d, k);
            check!(failures, l == r, "factorial power identity d={d} k={k}: {l} != {r}");
            let (l, r) = even_binomial_sum_witness(d, k);
            check!(failures, l == r, "even binomial sum d={d} k={k}: {l} != {r}");
        }
    }
    for k in 0..=7usize {
        let count = pair_partitions(k).unwrap().count();
        let expected = double_factorial(2 * k as i64 - 1).unwrap();
        check!(
            failures,
            BigInt::from(count) == expected,
            "pair partition count k={k}: {count} != {expected}"
        );
    }
    conclude("criterion 8: combinatorial identities", start, failures);
}
