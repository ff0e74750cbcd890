use weilforms::intmat::*;
fn main() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for it in 0..300 {
        let m: Mat2 = [
            [rng.gen_range(-20i64..=20), rng.gen_range(-20i64..=20)],
            [rng.gen_range(-20i64..=20), rng.gen_range(-20i64..=20)],
        ];
        if det2(m) == 0 { continue; }
        eprintln!("iter {} m={:?}", it, m);
        let (u, v, d1, d2) = smith2(m);
        assert_eq!(mul2(mul2(u, m), v), [[d1, 0], [0, d2]]);
    }
    eprintln!("done");
}
