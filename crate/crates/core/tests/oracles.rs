//! Cross-checks against models that share no algebra code with the
//! library: dense matrices for the UHF core and exhaustive orbit walks
//! for branching laws.

mod common;

use common::brute::brute_fingerprint;
use common::matrix::{self, contains_reading, fermion, formula_holds, gp_state, matrix_unit, perm_from_cycles, psi, reading, Mat};
use cuntz_core::algebra::words_of_length;
use cuntz_core::classify::{classify_table, Levels, Table};
use cuntz_core::fermions::car_generator;
use cuntz_core::morphisms::PermEndo;
use cuntz_core::reps::{branch, PermRep};
use cuntz_core::CuntzPoly;

const SIGMAS: [&str; 12] = ["id", "(12)(34)", "12", "13", "24", "34", "142", "14", "23", "123", "124", "132"];

fn to_matrix(x: &CuntzPoly, level: usize) -> Mat {
    let mut m = Mat::zeros(level as u32);
    for (j, k, c) in x.expand_to_level(level) {
        assert_eq!(j.len(), k.len(), "not in the UHF core");
        m = m.add(&matrix_unit(j.letters(), k.letters()).scale(c.to_f64()));
    }
    m
}

#[test]
fn jordan_wigner_strings_satisfy_car() {
    let l = 5;
    for n in 1..=l {
        for m in 1..=l {
            let a = fermion(n, l);
            let b = fermion(m, l);
            let mixed = a.mul(&b.transpose()).add(&b.transpose().mul(&a));
            let same = a.mul(&b).add(&b.mul(&a));
            let want = if n == m { Mat::identity(l) } else { Mat::zeros(l) };
            assert!(mixed.close(&want), "{{a{n}, a{m}*}}");
            assert!(same.close(&Mat::zeros(l)), "{{a{n}, a{m}}}");
        }
    }
}

#[test]
fn fermions_agree_with_the_recursion() {
    for n in 1..=6 {
        let exact = to_matrix(&car_generator(n).unwrap(), 6);
        assert!(exact.close(&fermion(n, 6)), "a{n}");
    }
}

#[test]
fn conjugation_model_agrees_with_symbolic_images() {
    for p in PermEndo::all(2, 2) {
        let map = perm_from_cycles(&p.cycle_notation());
        for j in words_of_length(2, 2) {
            for k in words_of_length(2, 2) {
                let e = CuntzPoly::matrix_unit(2, j.clone(), k.clone()).unwrap();
                let exact = to_matrix(&p.morphism().apply(&e), 3);
                let model = psi(&map, &matrix_unit(j.letters(), k.letters()));
                assert!(exact.close(&model), "ψ_{} on E[{j},{k}]", p.cycle_notation());
            }
        }
    }
}

fn formula_cells(table: Table) -> Vec<(String, u32, String, Option<String>)> {
    let report = classify_table(table, Levels::default()).unwrap();
    report
        .cells
        .iter()
        .map(|c| {
            let n: u32 = c.column.trim_start_matches("ψ(a").trim_end_matches(')').parse().unwrap();
            (c.row.clone(), n, c.expected.clone(), c.corrected.clone())
        })
        .collect()
}

#[test]
fn car_formula_tables_against_matrices() {
    let mut refuted = 0;
    for table in [Table::Table6, Table::Table7] {
        for (sigma, n, printed, corrected) in formula_cells(table) {
            match corrected {
                None => assert!(formula_holds(&sigma, n, &printed), "ψ_{sigma}(a{n}) = {printed}"),
                Some(fix) => {
                    assert!(!formula_holds(&sigma, n, &printed), "printed ψ_{sigma}(a{n}) should fail");
                    assert!(formula_holds(&sigma, n, &fix), "ψ_{sigma}(a{n}) = {fix}");
                    refuted += 1;
                }
            }
        }
    }
    assert_eq!(refuted, 15);
}

#[test]
fn gp_vector_readings_against_restriction_tables() {
    let len = 6;
    let mut refuted = 0;
    for (table, columns) in [
        (Table::Table3, vec![("P[1]∘ψ", vec![1u8]), ("P[2]∘ψ", vec![2]), ("P[12]∘ψ", vec![1, 2])]),
        (Table::Table8, vec![("Fock∘ψ", vec![1u8]), ("Fock*∘ψ", vec![2]), ("IW∘ψ", vec![1, 2])]),
    ] {
        let report = classify_table(table, Levels::default()).unwrap();
        for sigma in SIGMAS {
            for (column, j) in &columns {
                let cell = report
                    .cells
                    .iter()
                    .find(|c| c.row == sigma && c.column == *column)
                    .unwrap();
                let read = reading(sigma, j, len);
                match &cell.corrected {
                    None => assert!(contains_reading(&cell.expected, &read), "{sigma} {column}: {read:?}"),
                    Some(fix) => {
                        assert!(!contains_reading(&cell.expected, &read), "{sigma} {column}");
                        assert!(contains_reading(fix, &read), "{sigma} {column}");
                        refuted += 1;
                    }
                }
            }
        }
    }
    assert_eq!(refuted, 8);
}

/// `‖ψ(x)Ω‖²` for the GP vector of `P[12]`, `x` given by its mode.
fn norm_sq(sigma: &str, x: &Mat) -> f64 {
    let map = perm_from_cycles(sigma);
    let y = psi(&map, x);
    gp_state(&[1, 2], &y.transpose().mul(&y))
}

#[test]
fn wedge_vacua_under_reducible_maps() {
    let l = 6;
    for (sigma, dual) in [("14", false), ("124", false), ("23", true), ("132", true)] {
        for n in 1..=3 {
            let odd = fermion(2 * n - 1, l);
            let even = fermion(2 * n, l);
            // IW: a_{2n−1}, a_{2n}^* annihilate; IW*: a_{2n−1}^*, a_{2n}
            let (x, y) = if dual {
                (odd.transpose(), even.clone())
            } else {
                (odd.clone(), even.transpose())
            };
            assert!(norm_sq(sigma, &x) < 1e-9, "{sigma}");
            assert!(norm_sq(sigma, &y) < 1e-9, "{sigma}");
            let (x, _) = if dual { (odd, even) } else { (odd.transpose(), even) };
            assert!((norm_sq(sigma, &x) - 1.0).abs() < 1e-9, "{sigma}");
        }
    }
}

#[test]
fn exhaustive_walks_match_branch_on_all_second_order_maps() {
    let reps = ["P(1)", "P(2)", "P(12)", "P(112)", "P(122)"];
    for p in PermEndo::all(2, 2) {
        for r in reps {
            let rep = PermRep::parse(2, r).unwrap();
            let fast = branch(&rep, p.morphism()).unwrap();
            let slow = brute_fingerprint(&rep, p.morphism(), 2 * fast.seed_bound);
            assert_eq!(fast.fingerprint(), slow, "{r} ∘ ψ_{}", p.cycle_notation());
        }
    }
}

#[test]
fn model_identity_is_trivial() {
    let x = matrix::eval("a1 a2' + a3", 3);
    let map = perm_from_cycles("id");
    assert!(psi(&map, &x).close(&x.pad(4)));
}

fn apply(m: &Mat, v: &[f64]) -> Vec<f64> {
    (0..m.dim).map(|i| (0..m.dim).map(|j| m.get(i, j) * v[j]).sum()).collect()
}

#[test]
fn dual_fock_vacuum_sign_of_the_mixture() {
    // Fock vacuum is e_{11…1}; Ω* = a_1^* Ω
    for twice_k in [1i32, 3, 5, 7] {
        let m = (twice_k + 1) as u32;
        let l = m;
        let sign = if ((twice_k - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let a1 = fermion(1, l);
        let am = fermion(m, l);
        let b_neg = a1
            .mul(&a1.transpose())
            .mul(&am)
            .add(&a1.transpose().mul(&a1).mul(&am.transpose()).scale(-1.0))
            .scale(sign);
        let mut omega = vec![0.0; 1 << l];
        omega[0] = 1.0;
        let dual = apply(&a1.transpose(), &omega);
        let lhs = apply(&b_neg, &dual);
        let creator = apply(&am.transpose(), &dual);
        let close = |s: f64| lhs.iter().zip(&creator).all(|(x, y)| (x - s * sign * y).abs() < 1e-9);
        assert!(close(-1.0), "k = {twice_k}/2");
        assert!(!close(1.0), "printed sign holds for k = {twice_k}/2");
    }
}
