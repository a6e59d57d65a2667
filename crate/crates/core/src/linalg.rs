//! 3x3 matrices over an arbitrary field.

use crate::ff::Field;

pub type M3<E> = [[E; 3]; 3];

pub fn lift<K: Field>(k: &K, m: &[[u64; 3]; 3]) -> M3<K::Elem> {
    std::array::from_fn(|r| std::array::from_fn(|c| k.from_u64(m[r][c])))
}

pub fn det<K: Field>(k: &K, m: &M3<K::Elem>) -> K::Elem {
    let minor = |a: usize, b: usize, c: usize, d: usize| {
        k.sub(&k.mul(&m[1][a], &m[2][b]), &k.mul(&m[1][c], &m[2][d]))
    };
    let t0 = k.mul(&m[0][0], &minor(1, 2, 2, 1));
    let t1 = k.mul(&m[0][1], &minor(0, 2, 2, 0));
    let t2 = k.mul(&m[0][2], &minor(0, 1, 1, 0));
    k.add(&k.sub(&t0, &t1), &t2)
}

pub fn mul<K: Field>(k: &K, a: &M3<K::Elem>, b: &M3<K::Elem>) -> M3<K::Elem> {
    std::array::from_fn(|r| {
        std::array::from_fn(|c| {
            (0..3).fold(k.zero(), |acc, t| k.add(&acc, &k.mul(&a[r][t], &b[t][c])))
        })
    })
}

pub fn apply<K: Field>(k: &K, m: &M3<K::Elem>, v: &[K::Elem; 3]) -> [K::Elem; 3] {
    std::array::from_fn(|r| (0..3).fold(k.zero(), |acc, t| k.add(&acc, &k.mul(&m[r][t], &v[t]))))
}

pub fn inverse<K: Field>(k: &K, m: &M3<K::Elem>) -> Option<M3<K::Elem>> {
    let di = k.inv(&det(k, m))?;
    let cof = |r: usize, c: usize| {
        let rs: Vec<usize> = (0..3).filter(|&x| x != r).collect();
        let cs: Vec<usize> = (0..3).filter(|&x| x != c).collect();
        let v = k.sub(
            &k.mul(&m[rs[0]][cs[0]], &m[rs[1]][cs[1]]),
            &k.mul(&m[rs[0]][cs[1]], &m[rs[1]][cs[0]]),
        );
        if (r + c) % 2 == 1 {
            k.neg(&v)
        } else {
            v
        }
    };
    Some(std::array::from_fn(|r| {
        std::array::from_fn(|c| k.mul(&cof(c, r), &di))
    }))
}

/// Coefficients (low degree first) of `det(t I - M)`.
pub fn char_poly<K: Field>(k: &K, m: &M3<K::Elem>) -> Vec<K::Elem> {
    let tr = k.add(&k.add(&m[0][0], &m[1][1]), &m[2][2]);
    let pm = |a: usize, b: usize| k.sub(&k.mul(&m[a][a], &m[b][b]), &k.mul(&m[a][b], &m[b][a]));
    let c2 = k.add(&k.add(&pm(0, 1), &pm(0, 2)), &pm(1, 2));
    vec![k.neg(&det(k, m)), c2, k.neg(&tr), k.one()]
}

/// Basis of the kernel, by row reduction.
pub fn null_space<K: Field>(k: &K, m: &M3<K::Elem>) -> Vec<[K::Elem; 3]> {
    let mut a: Vec<Vec<K::Elem>> = m.iter().map(|r| r.to_vec()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..3 {
        let Some(pr) = (row..3).find(|&r| !k.is_zero(&a[r][col])) else {
            continue;
        };
        a.swap(row, pr);
        let inv = k.inv(&a[row][col]).unwrap();
        for c in 0..3 {
            a[row][c] = k.mul(&a[row][c], &inv);
        }
        for r in 0..3 {
            if r != row && !k.is_zero(&a[r][col]) {
                let f = a[r][col].clone();
                for c in 0..3 {
                    let t = k.mul(&f, &a[row][c]);
                    a[r][c] = k.sub(&a[r][c], &t);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..3).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v: [K::Elem; 3] = std::array::from_fn(|_| k.zero());
            v[f] = k.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = k.neg(&a[r][f]);
            }
            v
        })
        .collect()
}

/// Matrix with the given columns.
pub fn from_columns<K: Field>(cols: &[[K::Elem; 3]; 3]) -> M3<K::Elem> {
    std::array::from_fn(|r| std::array::from_fn(|c| cols[c][r].clone()))
}

/// The projective map sending the standard frame to `pts` (four points in
/// general position), or `None` if they are not in general position.
pub fn frame_matrix<K: Field>(k: &K, pts: &[[K::Elem; 3]; 4]) -> Option<M3<K::Elem>> {
    let a = from_columns::<K>(&[pts[0].clone(), pts[1].clone(), pts[2].clone()]);
    let ai = inverse(k, &a)?;
    let c = apply(k, &ai, &pts[3]);
    if c.iter().any(|x| k.is_zero(x)) {
        return None;
    }
    Some(std::array::from_fn(|r| {
        std::array::from_fn(|col| k.mul(&a[r][col], &c[col]))
    }))
}
