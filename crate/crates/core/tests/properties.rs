use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use graphbrauer::intlinalg::{
    minimal_multiple_hnf, minimal_multiple_snf, vec_i64, IntMatrix, MultipleOutcome, SparseColumns,
};
use graphbrauer::multigraph::{parse_graph, Multigraph};
use graphbrauer::oracle::snf_violation;

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..7, 1usize..7).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))
}

/// Unimodular `n × n` matrix from elementary row operations encoded by `ops`.
fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for &(a, b, k) in ops {
        let (a, b) = (a % n, b % n);
        if a == b {
            m.swap(a, (a + 1) % n);
        } else {
            let src = m[b].clone();
            for (x, y) in m[a].iter_mut().zip(src) {
                *x += k * y;
            }
        }
    }
    m
}

fn mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let cols = b[0].len();
    a.iter()
        .map(|row| (0..cols).map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum()).collect())
        .collect()
}

/// A planted instance `D = U·diag(d)·V`, `c = U·y`, with its least multiple
/// read off the diagonal.
#[derive(Debug, Clone)]
struct Planted {
    d: Vec<Vec<i64>>,
    c: Vec<i64>,
    expected: Option<u64>,
}

fn planted() -> impl Strategy<Value = Planted> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, k)| {
        let diag = prop::collection::vec(prop_oneof![Just(0i64), 1i64..=6], r.min(k));
        let y = prop::collection::vec(-4i64..=4, r);
        let ops = prop::collection::vec((0usize..r, 0usize..r, -2i64..=2), 0..6);
        let vops = prop::collection::vec((0usize..k, 0usize..k, -2i64..=2), 0..6);
        (Just((r, k)), diag, y, ops, vops).prop_map(|((r, k), diag, y, ops, vops)| {
            let mut middle = vec![vec![0i64; k]; r];
            for (i, &x) in diag.iter().enumerate() {
                middle[i][i] = x;
            }
            let u = unimodular(r, &ops);
            let v = unimodular(k, &vops);
            let d = mul(&mul(&u, &middle), &v);
            let c: Vec<i64> = u.iter().map(|row| row.iter().zip(&y).map(|(a, b)| a * b).sum()).collect();
            let mut expected = Some(1u64);
            for (i, &yi) in y.iter().enumerate() {
                let di = diag.get(i).copied().unwrap_or(0);
                expected = match (expected, di) {
                    (None, _) => None,
                    (Some(_), 0) if yi != 0 => None,
                    (Some(n), 0) => Some(n),
                    (Some(n), di) => Some(n.lcm(&((di / di.gcd(&yi)) as u64))),
                };
            }
            Planted { d, c, expected }
        })
    })
}

fn check_outcome(p: &Planted, got: &MultipleOutcome, bound: u64) -> Result<(), TestCaseError> {
    let d = IntMatrix::from_rows(&p.d);
    let c = vec_i64(&p.c);
    match (p.expected, got) {
        (Some(n), MultipleOutcome::Found { n: m, witness }) => {
            prop_assert_eq!(n, *m);
            let lhs = d.mul_vec(witness);
            let rhs: Vec<BigInt> = c.iter().map(|x| x * BigInt::from(n)).collect();
            prop_assert_eq!(lhs, rhs);
        }
        (None, MultipleOutcome::NoneUpTo(b)) => prop_assert_eq!(*b, bound),
        (e, g) => prop_assert!(false, "expected {:?}, got {:?}", e, g),
    }
    Ok(())
}

proptest! {
    #[test]
    fn smith_form_contract(rows in matrix()) {
        let a = IntMatrix::from_rows(&rows);
        prop_assert_eq!(snf_violation(&a), None);
    }

    #[test]
    fn least_multiple_dense_matches_planted(p in planted()) {
        let bound = 10_000;
        let got = minimal_multiple_snf(&IntMatrix::from_rows(&p.d), &vec_i64(&p.c), bound);
        check_outcome(&p, &got, bound)?;
    }

    #[test]
    fn least_multiple_sparse_matches_planted(p in planted()) {
        let bound = 10_000;
        let d = SparseColumns::from_dense(&IntMatrix::from_rows(&p.d));
        let got = minimal_multiple_hnf(&d, &vec_i64(&p.c), bound);
        check_outcome(&p, &got, bound)?;
    }

    #[test]
    fn determinant_is_multiplicative(a in matrix(), b in matrix()) {
        let n = a.len().min(a[0].len()).min(b.len()).min(b[0].len());
        let sq = |m: &Vec<Vec<i64>>| IntMatrix::from_rows(&m.iter().take(n).map(|r| r[..n].to_vec()).collect::<Vec<_>>());
        let (a, b) = (sq(&a), sq(&b));
        prop_assert_eq!(a.mul(&b).determinant(), a.determinant() * b.determinant());
    }

    #[test]
    fn graph_json_round_trip(n in 2usize..7, picks in prop::collection::vec((0usize..7, 0usize..7), 0..16)) {
        let vs: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        // a doubled cycle keeps every degree at least 4, then random chords
        let mut edges: Vec<(String, String, String)> = Vec::new();
        for i in 0..n {
            for r in 0..2 {
                edges.push((format!("c{i}.{r}"), vs[i].clone(), vs[(i + 1) % n].clone()));
            }
        }
        for (k, (a, b)) in picks.into_iter().enumerate() {
            let (a, b) = (a % n, b % n);
            if a != b {
                edges.push((format!("x{k}"), vs[a].clone(), vs[b].clone()));
            }
        }
        let g = Multigraph::new("random", vs, edges).expect("valid multigraph");
        let back = parse_graph(&g.to_json()).expect("round trip parses");
        prop_assert_eq!(back.genus(), g.genus());
        prop_assert_eq!(back, g);
    }
}

#[test]
fn planted_oracle_sanity() {
    // D = diag(2, 3), c = (1, 1): least multiple 6
    let d = IntMatrix::from_rows(&[vec![2i64, 0], vec![0, 3]]);
    let got = minimal_multiple_snf(&d, &vec_i64(&[1, 1]), 100);
    assert_eq!(got.multiple(), Some(6));
    let zero = IntMatrix::zeros(2, 2);
    assert_eq!(minimal_multiple_snf(&zero, &vec_i64(&[0, 1]), 5), MultipleOutcome::NoneUpTo(5));
}
