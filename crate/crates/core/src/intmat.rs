//! Small exact integer-matrix utilities: Smith and Hermite normal forms,
//! unimodular 2x2 / 4x4 arithmetic, rational inertia, and a few
//! number-theoretic helpers shared across modules.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Mat2 = [[i64; 2]; 2];

pub const ID2: Mat2 = [[1, 0], [0, 1]];
/// S = [[0,-1],[1,0]], the inversion generator of SL2(Z).
pub const S2X2: Mat2 = [[0, -1], [1, 0]];

pub fn mul2(a: Mat2, b: Mat2) -> Mat2 {
    let mut out = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let mut acc: i128 = 0;
            for k in 0..2 {
                acc += a[i][k] as i128 * b[k][j] as i128;
            }
            out[i][j] = i64::try_from(acc).expect("mul2 overflow");
        }
    }
    out
}

pub fn det2(a: Mat2) -> i64 {
    let d = a[0][0] as i128 * a[1][1] as i128 - a[0][1] as i128 * a[1][0] as i128;
    i64::try_from(d).expect("det2 overflow")
}

/// Inverse of a matrix with det = +-1.
pub fn inv2(a: Mat2) -> Mat2 {
    let d = det2(a);
    assert!(d == 1 || d == -1, "inv2: not unimodular");
    let adj = [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]];
    if d == 1 {
        adj
    } else {
        [[-adj[0][0], -adj[0][1]], [-adj[1][0], -adj[1][1]]]
    }
}

pub fn transpose2(a: Mat2) -> Mat2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

pub fn neg2(a: Mat2) -> Mat2 {
    [[-a[0][0], -a[0][1]], [-a[1][0], -a[1][1]]]
}

fn sub2(a: Mat2, b: Mat2) -> Mat2 {
    [
        [a[0][0] - b[0][0], a[0][1] - b[0][1]],
        [a[1][0] - b[1][0], a[1][1] - b[1][1]],
    ]
}

pub type Mat4 = [[i64; 4]; 4];

pub const ID4: Mat4 = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];

pub fn mul4(a: Mat4, b: Mat4) -> Mat4 {
    let mut out = [[0i64; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut acc: i128 = 0;
            for k in 0..4 {
                acc += a[i][k] as i128 * b[k][j] as i128;
            }
            out[i][j] = i64::try_from(acc).expect("mul4 overflow");
        }
    }
    out
}

/// Block decomposition of a 4x4 matrix into 2x2 blocks (a, b; c, d).
pub fn blocks4(g: Mat4) -> (Mat2, Mat2, Mat2, Mat2) {
    let a = [[g[0][0], g[0][1]], [g[1][0], g[1][1]]];
    let b = [[g[0][2], g[0][3]], [g[1][2], g[1][3]]];
    let c = [[g[2][0], g[2][1]], [g[3][0], g[3][1]]];
    let d = [[g[2][2], g[2][3]], [g[3][2], g[3][3]]];
    (a, b, c, d)
}

pub fn from_blocks4(a: Mat2, b: Mat2, c: Mat2, d: Mat2) -> Mat4 {
    [
        [a[0][0], a[0][1], b[0][0], b[0][1]],
        [a[1][0], a[1][1], b[1][0], b[1][1]],
        [c[0][0], c[0][1], d[0][0], d[0][1]],
        [c[1][0], c[1][1], d[1][0], d[1][1]],
    ]
}

/// Symplectic membership for 4x4 integer matrices.
pub fn is_symplectic4(g: Mat4) -> bool {
    let (a, b, c, d) = blocks4(g);
    let atc = mul2(transpose2(a), c);
    let btd = mul2(transpose2(b), d);
    let atd = mul2(transpose2(a), d);
    let ctb = mul2(transpose2(c), b);
    atc == transpose2(atc) && btd == transpose2(btd) && sub2(atd, ctb) == ID2
}

pub fn inv_symplectic4(g: Mat4) -> Mat4 {
    // g^{-1} = (d^t, -b^t; -c^t, a^t) for symplectic g = (a, b; c, d)
    let (a, b, c, d) = blocks4(g);
    from_blocks4(
        transpose2(d),
        neg2(transpose2(b)),
        neg2(transpose2(c)),
        transpose2(a),
    )
}

/// Extended gcd: returns (g, x, y) with a x + b y = g >= 0.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a >= 0 {
            (a, 1, 0)
        } else {
            (-a, -1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    ext_gcd(a, b).0
}

/// Complete a coprime pair (c, d) to [[a, b], [c, d]] in SL2(Z).
pub fn complete_to_sl2(c: i64, d: i64) -> Mat2 {
    let (g, x, y) = ext_gcd(d, c);
    assert_eq!(g, 1, "complete_to_sl2 needs coprime input");
    // a d - b c = 1 with a = x, b = -y
    [[x, -y], [c, d]]
}

// det-1 row transform sending the column (a, b) to (gcd, 0)
fn gcd_rowop(a: i64, b: i64) -> Mat2 {
    let (g, x, y) = ext_gcd(a, b);
    if g == 0 {
        return ID2;
    }
    [[x, y], [-(b / g), a / g]]
}

/// Smith form of a nonsingular 2x2 integer matrix: (u, v, d1, d2) with
/// u m v = diag(d1, d2), d1 | d2, d1 > 0, and det(u) = det(v) = 1.
pub fn smith2(m: Mat2) -> (Mat2, Mat2, i64, i64) {
    assert!(det2(m) != 0, "smith2: singular input");
    let mut a = m;
    let mut u = ID2;
    let mut v = ID2;
    loop {
        if a[1][0] != 0 {
            let l = gcd_rowop(a[0][0], a[1][0]);
            a = mul2(l, a);
            u = mul2(l, u);
        }
        if a[0][1] != 0 {
            let r = transpose2(gcd_rowop(a[0][0], a[0][1]));
            a = mul2(a, r);
            v = mul2(v, r);
        }
        if a[1][0] == 0 && a[0][1] == 0 {
            if a[0][0] != 0 && a[1][1] % a[0][0] != 0 {
                // pull the second column into the first and restart
                let r = [[1, 0], [1, 1]];
                a = mul2(a, r);
                v = mul2(v, r);
                continue;
            }
            break;
        }
    }
    // fix signs on the diagonal with det-1 transforms applied to both sides
    for k in 0..2 {
        if a[k][k] < 0 {
            let mut e = ID2;
            e[k][k] = -1;
            a = mul2(mul2(e, a), e);
            u = mul2(e, u);
            v = mul2(v, e);
        }
    }
    if det2(u) == -1 {
        debug_assert_eq!(det2(v), -1);
        let e = [[1i64, 0], [0, -1]];
        u = mul2(e, u);
        v = mul2(v, e);
    }
    debug_assert_eq!(mul2(mul2(u, m), v), [[a[0][0], 0], [0, a[1][1]]]);
    debug_assert_eq!(det2(u), 1);
    debug_assert_eq!(det2(v), 1);
    (u, v, a[0][0], a[1][1])
}

/// Hermite normal form of a 2x4 integer matrix under left GL2(Z);
/// canonical representative of the row pair up to unimodular mixing.
pub fn hnf_2x4(rows: [[i64; 4]; 2]) -> [[i64; 4]; 2] {
    let mut r = rows;
    let mut j0 = None;
    for j in 0..4 {
        if r[0][j] != 0 || r[1][j] != 0 {
            j0 = Some(j);
            break;
        }
    }
    let Some(j0) = j0 else { return r };
    if r[0][j0] == 0 {
        r.swap(0, 1);
    }
    if r[1][j0] != 0 {
        let l = gcd_rowop(r[0][j0], r[1][j0]);
        let (a0, a1) = (r[0], r[1]);
        for j in 0..4 {
            r[0][j] = l[0][0] * a0[j] + l[0][1] * a1[j];
            r[1][j] = l[1][0] * a0[j] + l[1][1] * a1[j];
        }
    }
    if r[0][j0] < 0 {
        for j in 0..4 {
            r[0][j] = -r[0][j];
        }
    }
    let mut j1 = None;
    for j in (j0 + 1)..4 {
        if r[1][j] != 0 {
            j1 = Some(j);
            break;
        }
    }
    if let Some(j1) = j1 {
        if r[1][j1] < 0 {
            for j in 0..4 {
                r[1][j] = -r[1][j];
            }
        }
        let f = r[0][j1].div_euclid(r[1][j1]);
        if f != 0 {
            for j in 0..4 {
                r[0][j] -= f * r[1][j];
            }
        }
    }
    r
}

// ---------- BigInt matrices ----------

pub type MatZ = Vec<Vec<BigInt>>;

pub fn matz_from_i64(a: &[Vec<i64>]) -> MatZ {
    a.iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn matz_identity(n: usize) -> MatZ {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn matz_mul(a: &MatZ, b: &MatZ) -> MatZ {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = BigInt::zero();
                    for t in 0..k {
                        if !a[i][t].is_zero() && !b[t][j].is_zero() {
                            acc += &a[i][t] * &b[t][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Smith normal form with transforms: (u, u_inv, v, d) such that
/// u a v = diag(d), u u_inv = 1, diagonal nonnegative with d1 | d2 | ...
pub fn snf_with_transform(a: &MatZ) -> (MatZ, MatZ, MatZ, Vec<BigInt>) {
    let n = a.len();
    let mut m: MatZ = a.to_vec();
    let mut u = matz_identity(n);
    let mut u_inv = matz_identity(n);
    let mut v = matz_identity(n);

    fn row_swap(m: &mut MatZ, u: &mut MatZ, ui: &mut MatZ, i: usize, j: usize) {
        m.swap(i, j);
        u.swap(i, j);
        for row in ui.iter_mut() {
            row.swap(i, j);
        }
    }
    fn row_neg(m: &mut MatZ, u: &mut MatZ, ui: &mut MatZ, i: usize) {
        for x in m[i].iter_mut() {
            *x = -x.clone();
        }
        for x in u[i].iter_mut() {
            *x = -x.clone();
        }
        for row in ui.iter_mut() {
            row[i] = -row[i].clone();
        }
    }
    // row_i += f * row_j; on u_inv the inverse acts as col_j -= f * col_i
    fn row_add(m: &mut MatZ, u: &mut MatZ, ui: &mut MatZ, i: usize, j: usize, f: &BigInt) {
        let nc = m[0].len();
        for c in 0..nc {
            let t = f * &m[j][c];
            m[i][c] += t;
        }
        let nu = u[0].len();
        for c in 0..nu {
            let t = f * &u[j][c];
            u[i][c] += t;
        }
        for row in ui.iter_mut() {
            let t = f * &row[i];
            row[j] -= t;
        }
    }
    fn col_swap(m: &mut MatZ, v: &mut MatZ, i: usize, j: usize) {
        for row in m.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
    }
    fn col_add(m: &mut MatZ, v: &mut MatZ, i: usize, j: usize, f: &BigInt) {
        for row in m.iter_mut() {
            let t = f * &row[j];
            row[i] += t;
        }
        for row in v.iter_mut() {
            let t = f * &row[j];
            row[i] += t;
        }
    }

    for k in 0..n {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in k..n {
                for j in k..n {
                    if !m[i][j].is_zero() {
                        let better = match best {
                            None => true,
                            Some((bi, bj)) => m[i][j].abs() < m[bi][bj].abs(),
                        };
                        if better {
                            best = Some((i, j));
                        }
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            if bi != k {
                row_swap(&mut m, &mut u, &mut u_inv, k, bi);
            }
            if bj != k {
                col_swap(&mut m, &mut v, k, bj);
            }
            if m[k][k].is_negative() {
                row_neg(&mut m, &mut u, &mut u_inv, k);
            }
            let mut clean = true;
            for i in (k + 1)..n {
                if !m[i][k].is_zero() {
                    let f = -(&m[i][k] / &m[k][k]);
                    if !f.is_zero() {
                        row_add(&mut m, &mut u, &mut u_inv, i, k, &f);
                    }
                    if !m[i][k].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            for j in (k + 1)..n {
                if !m[k][j].is_zero() {
                    let f = -(&m[k][j] / &m[k][k]);
                    if !f.is_zero() {
                        col_add(&mut m, &mut v, j, k, &f);
                    }
                    if !m[k][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            let mut fixed = true;
            'scan: for i in (k + 1)..n {
                for j in (k + 1)..n {
                    if !(&m[i][j] % &m[k][k]).is_zero() {
                        let one = BigInt::one();
                        row_add(&mut m, &mut u, &mut u_inv, k, i, &one);
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
    }
    let d: Vec<BigInt> = (0..n).map(|i| m[i][i].clone()).collect();
    (u, u_inv, v, d)
}

/// Inertia (pos, neg, zero) of a symmetric rational matrix by congruence.
pub fn inertia_sym(a: &[Vec<BigRational>]) -> (usize, usize, usize) {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a.to_vec();
    let mut pos = 0;
    let mut neg = 0;
    let mut zero = 0;
    for k in 0..n {
        if m[k][k].is_zero() {
            let mut done = false;
            for j in (k + 1)..n {
                if !m[j][j].is_zero() {
                    m.swap(k, j);
                    for row in m.iter_mut() {
                        row.swap(k, j);
                    }
                    done = true;
                    break;
                }
            }
            if !done {
                if let Some(j) = ((k + 1)..n).find(|&j| !m[j][k].is_zero()) {
                    for c in 0..n {
                        let t = m[j][c].clone();
                        m[k][c] = &m[k][c] + &t;
                    }
                    for r in 0..n {
                        let t = m[r][j].clone();
                        m[r][k] = &m[r][k] + &t;
                    }
                } else {
                    zero += 1;
                    continue;
                }
            }
        }
        let pivot = m[k][k].clone();
        if pivot.is_zero() {
            zero += 1;
            continue;
        }
        if pivot > BigRational::zero() {
            pos += 1;
        } else {
            neg += 1;
        }
        for j in (k + 1)..n {
            if !m[j][k].is_zero() {
                let f = &m[j][k] / &pivot;
                for c in 0..n {
                    let t = &f * &m[k][c];
                    m[j][c] = &m[j][c] - &t;
                }
                for r in 0..n {
                    let t = &f * &m[r][k];
                    m[r][j] = &m[r][j] - &t;
                }
            }
        }
    }
    (pos, neg, zero)
}

/// Determinant by fraction-free elimination.
pub fn det_bigint(a: &MatZ) -> BigInt {
    let n = a.len();
    if n == 1 {
        return a[0][0].clone();
    }
    let mut m: MatZ = a.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(j) = ((k + 1)..n).find(|&j| !m[j][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, j);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let t = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = t;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

// ---------- number theory helpers ----------

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return vec![];
    }
    let mut sieve = vec![true; (n + 1) as usize];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2usize;
    while p * p <= n as usize {
        if sieve[p] {
            let mut q = p * p;
            while q <= n as usize {
                sieve[q] = false;
                q += p;
            }
        }
        p += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| if b { Some(i as u64) } else { None })
        .collect()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// Kronecker symbol (a | n).
pub fn kronecker(mut a: i64, mut n: i64) -> i32 {
    if n == 0 {
        return i32::from(a == 1 || a == -1);
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut result = 1i32;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let mut v = 0;
    while n % 2 == 0 {
        n /= 2;
        v += 1;
    }
    if v % 2 == 1 {
        let am8 = a.rem_euclid(8);
        if am8 == 3 || am8 == 5 {
            result = -result;
        }
    }
    a = a.rem_euclid(n);
    while a != 0 {
        let mut v2 = 0;
        while a % 2 == 0 {
            a /= 2;
            v2 += 1;
        }
        if v2 % 2 == 1 {
            let nm8 = n.rem_euclid(8);
            if nm8 == 3 || nm8 == 5 {
                result = -result;
            }
        }
        if a.rem_euclid(4) == 3 && n.rem_euclid(4) == 3 {
            result = -result;
        }
        let t = a;
        a = n.rem_euclid(t);
        n = t;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;

    #[test]
    fn smith2_random() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let m: Mat2 = [
                [rng.gen_range(-20i64..=20), rng.gen_range(-20i64..=20)],
                [rng.gen_range(-20i64..=20), rng.gen_range(-20i64..=20)],
            ];
            if det2(m) == 0 {
                continue;
            }
            let (u, v, d1, d2) = smith2(m);
            assert_eq!(det2(u), 1);
            assert_eq!(det2(v), 1);
            assert_eq!(mul2(mul2(u, m), v), [[d1, 0], [0, d2]]);
            assert!(d1 > 0);
            assert_eq!(d2 % d1, 0);
        }
    }

    #[test]
    fn hnf_is_left_invariant() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..300 {
            let rows: [[i64; 4]; 2] = [
                std::array::from_fn(|_| rng.gen_range(-5i64..=5)),
                std::array::from_fn(|_| rng.gen_range(-5i64..=5)),
            ];
            let h = hnf_2x4(rows);
            let u: Mat2 = match rng.gen_range(0..4) {
                0 => [[1, rng.gen_range(-3i64..=3)], [0, 1]],
                1 => [[0, 1], [1, 0]],
                2 => [[-1, 0], [0, 1]],
                _ => [[1, 0], [rng.gen_range(-3i64..=3), 1]],
            };
            let mixed: [[i64; 4]; 2] = [
                std::array::from_fn(|j| u[0][0] * rows[0][j] + u[0][1] * rows[1][j]),
                std::array::from_fn(|j| u[1][0] * rows[0][j] + u[1][1] * rows[1][j]),
            ];
            assert_eq!(hnf_2x4(mixed), h);
        }
    }

    #[test]
    fn snf_reconstructs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..80 {
            let n = rng.gen_range(2..=4);
            let a: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(-6i64..=6)).collect())
                .collect();
            let az = matz_from_i64(&a);
            let (u, u_inv, v, d) = snf_with_transform(&az);
            let lhs = matz_mul(&matz_mul(&u, &az), &v);
            for i in 0..n {
                for j in 0..n {
                    let expect = if i == j { d[i].clone() } else { BigInt::zero() };
                    assert_eq!(lhs[i][j], expect, "at ({}, {})", i, j);
                }
            }
            assert_eq!(matz_mul(&u, &u_inv), matz_identity(n));
            for i in 0..n - 1 {
                if !d[i].is_zero() && !d[i + 1].is_zero() {
                    assert!((&d[i + 1] % &d[i]).is_zero());
                }
            }
        }
    }

    #[test]
    fn inertia_examples() {
        let q = |x: i64| BigRational::from_integer(BigInt::from(x));
        let m = vec![
            vec![q(2), q(0), q(0)],
            vec![q(0), q(-3), q(0)],
            vec![q(0), q(0), q(5)],
        ];
        assert_eq!(inertia_sym(&m), (2, 1, 0));
        let h = vec![vec![q(0), q(1)], vec![q(1), q(0)]];
        assert_eq!(inertia_sym(&h), (1, 1, 0));
    }

    #[test]
    fn kronecker_matches_euler_criterion() {
        for &p in &[3i64, 5, 7, 11, 13] {
            for a in -6..=6 {
                let k = kronecker(a, p);
                let am = a.rem_euclid(p);
                let expect = if am == 0 {
                    0
                } else {
                    let mut e = 1i64;
                    for _ in 0..(p - 1) / 2 {
                        e = (e * am).rem_euclid(p);
                    }
                    if e == 1 {
                        1
                    } else {
                        -1
                    }
                };
                assert_eq!(k as i64, expect, "a={} p={}", a, p);
            }
        }
        assert_eq!(kronecker(2, 7), 1);
        assert_eq!(kronecker(-1, 3), -1);
        assert_eq!(kronecker(5, 8), -1);
    }

    #[test]
    fn symplectic_helpers() {
        let s2: Mat4 = from_blocks4([[0, 0], [0, 0]], neg2(ID2), ID2, [[0, 0], [0, 0]]);
        assert!(is_symplectic4(s2));
        assert_eq!(mul4(s2, inv_symplectic4(s2)), ID4);
        let t: Mat4 = from_blocks4(ID2, [[1, 2], [2, -1]], [[0, 0], [0, 0]], ID2);
        assert!(is_symplectic4(t));
        assert_eq!(mul4(t, inv_symplectic4(t)), ID4);
    }
}
