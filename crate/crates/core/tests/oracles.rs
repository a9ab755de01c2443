use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tropfw_core::fermat_weber::verify_fw_point_detailed;
use tropfw_core::linprog::{lp_solve, LpProblem, LpStatus, Sense, VarBound};
use tropfw_core::{
    augment_with_fw, distance_sum, fermat_weber_point_with, fw_lp_build, DataMatrix, FwSolver, Scalar, TropicalPoint,
};

fn random_int_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize, bound: i64) -> DataMatrix {
    let rows = (0..m)
        .map(|_| {
            let mut r = vec![0];
            r.extend((1..n).map(|_| rng.random_range(-bound..=bound)));
            TropicalPoint::from_ints(&r).unwrap()
        })
        .collect();
    DataMatrix::new(rows).unwrap()
}

/// Minimum of the distance sum over `(0, a/2, b/2)` for `a, b` covering the
/// data's bounding box plus one unit. With integer data in three columns the
/// optimum is attained at an integer point inside that box.
fn grid_minimum(x: &DataMatrix) -> Scalar {
    let lo = x.min_entry() - Scalar::one();
    let hi = x.rows().iter().flat_map(|r| r.coords()).max().unwrap() + Scalar::one();
    let half = Scalar::from_ratio(1, 2).unwrap();
    let steps = ((&hi - &lo) / &half).to_f64() as i64;
    let mut best: Option<Scalar> = None;
    for a in 0..=steps {
        for b in 0..=steps {
            let y = TropicalPoint::normalize(vec![
                Scalar::zero(),
                &lo + &half * Scalar::from(a),
                &lo + &half * Scalar::from(b),
            ])
            .unwrap();
            let s = distance_sum(&y, x).unwrap();
            if best.as_ref().is_none_or(|v| s < *v) {
                best = Some(s);
            }
        }
    }
    best.unwrap()
}

#[test]
fn grid_oracle_matches_both_solvers() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6121);
    for _ in 0..60 {
        let m = rng.random_range(1..=7);
        let x = random_int_matrix(&mut rng, m, 3, 6);
        let grid = grid_minimum(&x);
        for solver in [FwSolver::Network, FwSolver::Simplex] {
            assert_eq!(fermat_weber_point_with(&x, solver).unwrap().objective, grid, "{solver:?} on {x:?}");
        }
    }
}

fn solve3(a: [[Scalar; 3]; 3], b: [Scalar; 3]) -> Option<[Scalar; 3]> {
    let det = |m: &[[Scalar; 3]; 3]| {
        &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
            + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
    };
    let d = det(&a);
    if d.is_zero() {
        return None;
    }
    let mut out: [Scalar; 3] = Default::default();
    for (c, slot) in out.iter_mut().enumerate() {
        let mut ac = a.clone();
        for r in 0..3 {
            ac[r][c] = b[r].clone();
        }
        *slot = det(&ac) / &d;
    }
    Some(out)
}

/// Best objective over all feasible basic points of a bounded 3-variable LP.
fn vertex_enumeration(lp: &LpProblem) -> Option<Scalar> {
    let rows = &lp.constraints;
    let mut best: Option<Scalar> = None;
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            for k in j + 1..rows.len() {
                let pick = [&rows[i], &rows[j], &rows[k]];
                let a = pick.map(|c| [c.coeffs[0].clone(), c.coeffs[1].clone(), c.coeffs[2].clone()]);
                let b = pick.map(|c| c.rhs.clone());
                if let Some(v) = solve3(a, b) {
                    if lp.is_feasible_point(&v) {
                        let obj = lp.objective_at(&v);
                        if best.as_ref().is_none_or(|o| obj < *o) {
                            best = Some(obj);
                        }
                    }
                }
            }
        }
    }
    best
}

#[test]
fn simplex_matches_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1b);
    let mut feasible = 0;
    for _ in 0..150 {
        let s = |rng: &mut ChaCha8Rng, r: i64| Scalar::from(rng.random_range(-r..=r));
        let mut lp = LpProblem::minimize((0..3).map(|_| s(&mut rng, 5)).collect());
        for v in 0..3 {
            if rng.random_bool(0.5) {
                lp.set_bound(v, VarBound::NonNegative);
                let mut e = vec![Scalar::zero(); 3];
                e[v] = Scalar::one();
                lp.add_constraint(e, Sense::Ge, Scalar::zero()).unwrap();
            }
            // Box rows keep the feasible set bounded so it has vertices.
            for (sign, sense) in [(1, Sense::Le), (-1, Sense::Le)] {
                let mut e = vec![Scalar::zero(); 3];
                e[v] = Scalar::from(sign);
                lp.add_constraint(e, sense, Scalar::from(10)).unwrap();
            }
        }
        for _ in 0..rng.random_range(1..=4) {
            let sense = [Sense::Le, Sense::Ge, Sense::Eq][rng.random_range(0..3)];
            let coeffs = (0..3).map(|_| s(&mut rng, 4)).collect();
            lp.add_constraint(coeffs, sense, s(&mut rng, 8)).unwrap();
        }
        let sol = lp_solve(&lp).unwrap();
        match vertex_enumeration(&lp) {
            Some(best) => {
                feasible += 1;
                assert_eq!(sol.status, LpStatus::Optimal);
                assert_eq!(sol.objective, best);
                assert!(lp.is_feasible_point(&sol.primal));
            }
            None => assert_eq!(sol.status, LpStatus::Infeasible),
        }
    }
    assert!(feasible > 50);
}

/// Pins the objective at its optimum and pushes each `y_k` both ways.
fn optimal_face_extent(x: &DataMatrix, opt: &Scalar) -> Vec<(Scalar, Scalar)> {
    let base = fw_lp_build(x);
    let m = x.nrows();
    let nvars = base.num_vars();
    let mut out = Vec::new();
    for k in m..nvars {
        let mut ends = Vec::new();
        for sign in [1i64, -1] {
            let mut lp = base.clone();
            lp.add_constraint(base.objective.clone(), Sense::Le, opt.clone()).unwrap();
            lp.objective = vec![Scalar::zero(); nvars];
            lp.objective[k] = Scalar::from(sign);
            let sol = lp_solve(&lp).unwrap();
            assert_eq!(sol.status, LpStatus::Optimal);
            ends.push(&sol.objective * Scalar::from(sign));
        }
        out.push((ends[0].clone(), ends[1].clone()));
    }
    out
}

#[test]
fn augmented_matrix_has_a_single_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x29);
    for _ in 0..30 {
        let (m, n) = (rng.random_range(1..=6), rng.random_range(3..=4));
        let x = random_int_matrix(&mut rng, m, n, 10);
        let aug = augment_with_fw(&x).unwrap();
        let check = verify_fw_point_detailed(&aug, FwSolver::Simplex).unwrap();
        assert!(check.holds);
        assert_eq!(&check.fw.point, aug.last_row());
        for (k, (lo, hi)) in optimal_face_extent(&aug, &check.fw.objective).into_iter().enumerate() {
            assert_eq!(lo, hi, "y_{} not pinned for {aug:?}", k + 2);
            assert_eq!(lo, *aug.last_row().coord(k + 2));
        }
    }
}

#[test]
fn plain_data_can_have_many_optima() {
    // Two points: every point on a geodesic between them is optimal.
    let x = DataMatrix::from_ints(&[&[0, 0, 0], &[0, 4, 2]]).unwrap();
    let opt = fermat_weber_point_with(&x, FwSolver::Simplex).unwrap().objective;
    assert_eq!(opt, Scalar::from(4));
    let extent = optimal_face_extent(&x, &opt);
    assert!(extent.iter().any(|(lo, hi)| lo != hi));
}
