use abelsurf_core::oracle::{canonical, mat_mul, Mat4};
use proptest::prelude::*;

fn ell_and_matrix() -> impl Strategy<Value = (u64, Mat4, u32)> {
    prop::sample::select(vec![3u64, 5, 7, 11, 13, 31]).prop_flat_map(|ell| {
        let e = ell as u32;
        (Just(ell), prop::array::uniform4(prop::array::uniform4(0..e)), 1..e)
    })
}

proptest! {
    #[test]
    fn canonical_ignores_scalars((ell, m, c) in ell_and_matrix()) {
        let mut scalar = [[0u32; 4]; 4];
        for (i, row) in scalar.iter_mut().enumerate() {
            row[i] = c;
        }
        let scaled = mat_mul(&scalar, &m, ell);
        prop_assert_eq!(canonical(&scaled, ell), canonical(&m, ell));
        let k = canonical(&m, ell);
        prop_assert_eq!(canonical(&k, ell), k);
    }
}
