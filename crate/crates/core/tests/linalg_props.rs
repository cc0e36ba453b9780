use proptest::prelude::*;
use serrekb::linalg::{Field, Matrix};

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(Field::prime(7).unwrap()), Just(Field::prime(101).unwrap())]
}

fn matrix() -> impl Strategy<Value = Matrix> {
    (field(), 0usize..6, 0usize..6).prop_flat_map(|(f, r, c)| {
        proptest::collection::vec(-3i64..=3, r * c).prop_map(move |e| {
            Matrix::from_fn(f, r, c, |i, j| f.from_i64(e[i * c + j]))
        })
    })
}

proptest! {
    #[test]
    fn rank_plus_nullity(a in matrix()) {
        let k = a.kernel_basis();
        prop_assert_eq!(a.rank() + k.cols(), a.cols());
        prop_assert!(a.mul(&k).is_zero());
    }

    #[test]
    fn rank_of_transpose(a in matrix()) {
        prop_assert_eq!(a.rank(), a.transpose().rank());
    }

    #[test]
    fn solve_iff_ranks_agree(a in matrix(), seed in proptest::collection::vec(-2i64..=2, 6)) {
        let f = a.field();
        let b: Vec<_> = (0..a.rows()).map(|i| f.from_i64(seed[i])).collect();
        let augmented = a.hstack(&Matrix::column_vector(f, &b));
        let solution = a.solve(&b).unwrap();
        prop_assert_eq!(solution.is_some(), a.rank() == augmented.rank());
        if let Some(s) = solution {
            prop_assert_eq!(a.mul_vec(&s.particular), b);
            prop_assert!(a.mul(&s.kernel).is_zero());
        }
    }

    #[test]
    fn deterministic(a in matrix()) {
        let (r1, r2) = (a.rref(), a.clone().rref());
        prop_assert_eq!(r1.reduced, r2.reduced);
        prop_assert_eq!(r1.pivots, r2.pivots);
        prop_assert_eq!(a.kernel_basis(), a.kernel_basis());
    }
}

#[test]
fn small_ranks() {
    let q = Field::Rational;
    assert_eq!(Matrix::zeros(q, 3, 4).rank(), 0);
    assert_eq!(Matrix::identity(q, 5).rank(), 5);
    // Second row is twice the first and the matrix is nonzero.
    let a = Matrix::from_i64(q, &[&[1, 2], &[2, 4]]);
    assert_eq!(a.rank(), 1);
    assert_eq!(a.kernel_basis(), Matrix::from_i64(q, &[&[-2], &[1]]));
}
