//! Exact linear algebra over prime fields GF(p).
//!
//! Everything a (V, S, cocycle) group presentation needs: scalars and
//! vectors mod p, S-valued bilinear forms given by component matrices,
//! GF(2) quadratic maps given by upper-triangular coefficient arrays, and
//! the structural predicates (alternating, nondegenerate, image spans S)
//! the constructions require.
//!
//! All values are immutable after construction and safe to share across
//! threads.

use crate::{Error, Result};

/// Largest modulus accepted: p must satisfy p^2 < 2^64 so products of two
/// digits never overflow a machine word.
pub const MAX_MODULUS: u32 = u32::MAX;

/// Trial-division primality check; fine for the moduli this crate handles.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn check_prime(p: u32) -> Result<()> {
    if !is_prime(p as u64) {
        return Err(Error::InvalidSpec(format!("modulus {p} is not prime")));
    }
    Ok(())
}

/// A single residue mod a prime, carrying its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scalar {
    value: u32,
    p: u32,
}

impl Scalar {
    /// Reduce `value` mod the prime `p`.
    pub fn new(value: u64, p: u32) -> Result<Self> {
        check_prime(p)?;
        Ok(Scalar {
            value: (value % p as u64) as u32,
            p,
        })
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(Scalar {
            value: add_mod(self.value, other.value, self.p),
            p: self.p,
        })
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(Scalar {
            value: mul_mod(self.value, other.value, self.p),
            p: self.p,
        })
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            value: neg_mod(self.value, self.p),
            p: self.p,
        }
    }

    /// Multiplicative inverse; fails on zero.
    pub fn inv(&self) -> Result<Scalar> {
        if self.value == 0 {
            return Err(Error::InvalidSpec("inverse of zero".into()));
        }
        Ok(Scalar {
            value: inv_mod(self.value, self.p),
            p: self.p,
        })
    }

    fn same_field(&self, other: &Scalar) -> Result<()> {
        if self.p != other.p {
            return Err(Error::InvalidSpec(format!(
                "mixed moduli {} and {}",
                self.p, other.p
            )));
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    let s = a as u64 + b as u64;
    (s % p as u64) as u32
}

#[inline]
pub(crate) fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    let s = a as u64 + p as u64 - b as u64;
    (s % p as u64) as u32
}

#[inline]
pub(crate) fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

#[inline]
pub(crate) fn neg_mod(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

/// Inverse mod a prime via Fermat.
pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    pow_mod(a, p as u64 - 2, p)
}

pub(crate) fn pow_mod(mut base: u32, mut e: u64, p: u32) -> u32 {
    let mut acc = 1u32;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

/// A vector over GF(p), all coordinates sharing one modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpVector {
    p: u32,
    coords: Vec<u32>,
}

impl FpVector {
    pub fn new(coords: Vec<u64>, p: u32) -> Result<Self> {
        check_prime(p)?;
        Ok(FpVector {
            p,
            coords: coords.iter().map(|&c| (c % p as u64) as u32).collect(),
        })
    }

    pub fn zero(dim: usize, p: u32) -> Result<Self> {
        check_prime(p)?;
        Ok(FpVector {
            p,
            coords: vec![0; dim],
        })
    }

    pub(crate) fn from_raw(coords: Vec<u32>, p: u32) -> Self {
        debug_assert!(coords.iter().all(|&c| c < p));
        FpVector { p, coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> Scalar {
        Scalar {
            value: self.coords[i],
            p: self.p,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &FpVector) -> Result<FpVector> {
        self.same_space(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| add_mod(a, b, self.p))
            .collect();
        Ok(FpVector { p: self.p, coords })
    }

    pub fn sub(&self, other: &FpVector) -> Result<FpVector> {
        self.same_space(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| sub_mod(a, b, self.p))
            .collect();
        Ok(FpVector { p: self.p, coords })
    }

    fn same_space(&self, other: &FpVector) -> Result<()> {
        if self.p != other.p || self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(())
    }
}

/// An S-valued bilinear form B : V x V -> S over GF(p), stored as one
/// n x n component matrix per S-coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearForm {
    p: u32,
    dim_v: usize,
    dim_s: usize,
    // mats[k] is row-major n*n; component k of B(v,w) is v^T mats[k] w.
    mats: Vec<Vec<u32>>,
}

impl BilinearForm {
    pub fn new(mats: Vec<Vec<Vec<u64>>>, dim_v: usize, p: u32) -> Result<Self> {
        check_prime(p)?;
        let dim_s = mats.len();
        let mut flat = Vec::with_capacity(dim_s);
        for m in &mats {
            if m.len() != dim_v || m.iter().any(|row| row.len() != dim_v) {
                return Err(Error::InvalidSpec(format!(
                    "component matrix is not {dim_v}x{dim_v}"
                )));
            }
            let mut rows = Vec::with_capacity(dim_v * dim_v);
            for row in m {
                rows.extend(row.iter().map(|&e| (e % p as u64) as u32));
            }
            flat.push(rows);
        }
        Ok(BilinearForm {
            p,
            dim_v,
            dim_s,
            mats: flat,
        })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn dim_s(&self) -> usize {
        self.dim_s
    }

    /// Entry (i, j) of component matrix k.
    pub fn entry(&self, k: usize, i: usize, j: usize) -> u32 {
        self.mats[k][i * self.dim_v + j]
    }

    /// Evaluate B(v, w) into `out` (length dim_s), all slices raw digits.
    #[inline]
    pub(crate) fn eval_into(&self, v: &[u32], w: &[u32], out: &mut [u32]) {
        let n = self.dim_v;
        let p = self.p as u64;
        for (k, mat) in self.mats.iter().enumerate() {
            let mut acc = 0u64;
            for i in 0..n {
                let vi = v[i] as u64;
                if vi == 0 {
                    continue;
                }
                let row = &mat[i * n..(i + 1) * n];
                let mut rowacc = 0u64;
                for j in 0..n {
                    rowacc += row[j] as u64 * w[j] as u64;
                }
                acc += vi * (rowacc % p);
            }
            out[k] = (acc % p) as u32;
        }
    }

    /// S-valued evaluation of the form on a pair of vectors.
    pub fn eval(&self, v: &FpVector, w: &FpVector) -> Result<FpVector> {
        self.check_arg(v)?;
        self.check_arg(w)?;
        let mut out = vec![0u32; self.dim_s];
        self.eval_into(v.coords(), w.coords(), &mut out);
        Ok(FpVector::from_raw(out, self.p))
    }

    fn check_arg(&self, v: &FpVector) -> Result<()> {
        if v.modulus() != self.p || v.dim() != self.dim_v {
            return Err(Error::DimensionMismatch {
                expected: self.dim_v,
                got: v.dim(),
            });
        }
        Ok(())
    }

    /// Every component matrix is antisymmetric with zero diagonal, so
    /// B(v, v) = 0 identically.
    pub fn is_alternating(&self) -> bool {
        let n = self.dim_v;
        self.mats.iter().all(|mat| {
            (0..n).all(|i| {
                mat[i * n + i] == 0
                    && (0..n).all(|j| mat[i * n + j] == neg_mod(mat[j * n + i], self.p))
            })
        })
    }

    /// No nonzero v has B(v, .) identically zero: the stacked
    /// (dim_s * n) x n matrix has trivial kernel.
    pub fn is_nondegenerate(&self) -> bool {
        let n = self.dim_v;
        let mut stacked = Vec::with_capacity(self.dim_s * n);
        // Row for (k, j): coefficients of v in component k evaluated at e_j,
        // i.e. column j of mats[k] transposed onto v.
        for mat in &self.mats {
            for j in 0..n {
                let row: Vec<u32> = (0..n).map(|i| mat[i * n + j]).collect();
                stacked.push(row);
            }
        }
        rank_mod_p(stacked, self.p) == n
    }

    /// The values B(e_i, e_j) span S.
    pub fn image_spans_s(&self) -> bool {
        let n = self.dim_v;
        let mut vals = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v: Vec<u32> = (0..self.dim_s).map(|k| self.entry(k, i, j)).collect();
                vals.push(v);
            }
        }
        rank_mod_p(vals, self.p) == self.dim_s
    }
}

/// An S-valued quadratic map q : V -> S over GF(2), one upper-triangular
/// coefficient array per S-coordinate: entry (i, j) with i <= j is the
/// coefficient of x_i x_j (and of x_i itself when i = j, since x^2 = x).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticMap {
    dim_v: usize,
    dim_s: usize,
    // coeffs[k] row-major n*n with zero strictly-lower triangle.
    coeffs: Vec<Vec<u32>>,
}

impl QuadraticMap {
    pub fn new(coeffs: Vec<Vec<Vec<u64>>>, dim_v: usize) -> Result<Self> {
        let dim_s = coeffs.len();
        let mut flat = Vec::with_capacity(dim_s);
        for m in &coeffs {
            if m.len() != dim_v || m.iter().any(|row| row.len() != dim_v) {
                return Err(Error::InvalidSpec(format!(
                    "coefficient array is not {dim_v}x{dim_v}"
                )));
            }
            let mut rows = Vec::with_capacity(dim_v * dim_v);
            for (i, row) in m.iter().enumerate() {
                for (j, &e) in row.iter().enumerate() {
                    let e = (e % 2) as u32;
                    if e != 0 && i > j {
                        return Err(Error::InvalidSpec(
                            "quadratic coefficients must be upper-triangular".into(),
                        ));
                    }
                    rows.push(e);
                }
            }
            flat.push(rows);
        }
        Ok(QuadraticMap {
            dim_v,
            dim_s,
            coeffs: flat,
        })
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn dim_s(&self) -> usize {
        self.dim_s
    }

    /// Coefficient of x_i x_j (i <= j) in component k.
    pub fn coeff(&self, k: usize, i: usize, j: usize) -> u32 {
        self.coeffs[k][i * self.dim_v + j]
    }

    #[inline]
    pub(crate) fn eval_into(&self, v: &[u32], out: &mut [u32]) {
        let n = self.dim_v;
        for (k, mat) in self.coeffs.iter().enumerate() {
            let mut acc = 0u32;
            for i in 0..n {
                if v[i] == 0 {
                    continue;
                }
                let row = &mat[i * n..(i + 1) * n];
                for j in i..n {
                    acc ^= row[j] & v[j];
                }
            }
            out[k] = acc & 1;
        }
    }

    /// Component-wise polynomial evaluation at a GF(2) vector.
    pub fn eval(&self, v: &FpVector) -> Result<FpVector> {
        if v.modulus() != 2 || v.dim() != self.dim_v {
            return Err(Error::DimensionMismatch {
                expected: self.dim_v,
                got: v.dim(),
            });
        }
        let mut out = vec![0u32; self.dim_s];
        self.eval_into(v.coords(), &mut out);
        Ok(FpVector::from_raw(out, 2))
    }

    /// The polar form B(v, w) = q(v+w) + q(v) + q(w), alternating and
    /// bilinear: B(e_i, e_j) is the (i, j) cross coefficient.
    pub fn polar_form(&self) -> BilinearForm {
        let n = self.dim_v;
        let mut mats = Vec::with_capacity(self.dim_s);
        for k in 0..self.dim_s {
            let mut mat = vec![0u32; n * n];
            for i in 0..n {
                for j in (i + 1)..n {
                    let c = self.coeff(k, i, j);
                    mat[i * n + j] = c;
                    mat[j * n + i] = c;
                }
            }
            mats.push(mat);
        }
        BilinearForm {
            p: 2,
            dim_v: n,
            dim_s: self.dim_s,
            mats,
        }
    }
}

/// An S-valued linear map T : V -> S over GF(p), p odd, as an m x n matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    p: u32,
    dim_v: usize,
    dim_s: usize,
    mat: Vec<u32>, // row-major m x n
}

impl LinearMap {
    pub fn new(rows: Vec<Vec<u64>>, dim_v: usize, p: u32) -> Result<Self> {
        check_prime(p)?;
        if p == 2 {
            return Err(Error::InvalidSpec(
                "linear power map is for odd moduli only".into(),
            ));
        }
        let dim_s = rows.len();
        let mut mat = Vec::with_capacity(dim_s * dim_v);
        for row in &rows {
            if row.len() != dim_v {
                return Err(Error::InvalidSpec(format!(
                    "linear map row has length {}, expected {dim_v}",
                    row.len()
                )));
            }
            mat.extend(row.iter().map(|&e| (e % p as u64) as u32));
        }
        Ok(LinearMap {
            p,
            dim_v,
            dim_s,
            mat,
        })
    }

    pub fn zero(dim_v: usize, dim_s: usize, p: u32) -> Result<Self> {
        LinearMap::new(vec![vec![0; dim_v]; dim_s], dim_v, p)
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn dim_s(&self) -> usize {
        self.dim_s
    }

    pub fn entry(&self, k: usize, j: usize) -> u32 {
        self.mat[k * self.dim_v + j]
    }

    #[inline]
    #[allow(clippy::needless_range_loop)]
    pub(crate) fn eval_into(&self, v: &[u32], out: &mut [u32]) {
        let n = self.dim_v;
        let p = self.p as u64;
        for k in 0..self.dim_s {
            let row = &self.mat[k * n..(k + 1) * n];
            let mut acc = 0u64;
            for j in 0..n {
                acc += row[j] as u64 * v[j] as u64;
            }
            out[k] = (acc % p) as u32;
        }
    }

    pub fn eval(&self, v: &FpVector) -> Result<FpVector> {
        if v.modulus() != self.p || v.dim() != self.dim_v {
            return Err(Error::DimensionMismatch {
                expected: self.dim_v,
                got: v.dim(),
            });
        }
        let mut out = vec![0u32; self.dim_s];
        self.eval_into(v.coords(), &mut out);
        Ok(FpVector::from_raw(out, self.p))
    }

    pub fn is_zero(&self) -> bool {
        self.mat.iter().all(|&e| e == 0)
    }
}

/// Row rank of a matrix over GF(p); consumes the rows.
#[allow(clippy::needless_range_loop)]
pub(crate) fn rank_mod_p(mut rows: Vec<Vec<u32>>, p: u32) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = inv_mod(rows[rank][col], p);
        for j in col..ncols {
            rows[rank][j] = mul_mod(rows[rank][j], inv, p);
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let f = rows[r][col];
                for j in col..ncols {
                    let t = mul_mod(f, rows[rank][j], p);
                    rows[r][j] = sub_mod(rows[r][j], t, p);
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Iterate all vectors of GF(p)^n in rank order (coordinate 0 least
/// significant). Test and sweep helper.
pub fn all_vectors(dim: usize, p: u32) -> impl Iterator<Item = Vec<u32>> {
    let total = (p as u64).pow(dim as u32);
    (0..total).map(move |mut r| {
        (0..dim)
            .map(|_| {
                let d = (r % p as u64) as u32;
                r /= p as u64;
                d
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Order-64 fixture: q(a,b,c) = (a^2+b^2+ab, a^2+ac, bc) on GF(2)^3.
    pub(crate) fn q3() -> QuadraticMap {
        QuadraticMap::new(
            vec![
                vec![vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 0]],
                vec![vec![1, 0, 1], vec![0, 0, 0], vec![0, 0, 0]],
                vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 0, 0]],
            ],
            3,
        )
        .unwrap()
    }

    // Rank-8 fixture: q(a,b,c,d) = (b^2+ab, ac, bc, ad) on GF(2)^4.
    pub(crate) fn q4() -> QuadraticMap {
        QuadraticMap::new(
            vec![
                vec![
                    vec![0, 1, 0, 0],
                    vec![0, 1, 0, 0],
                    vec![0, 0, 0, 0],
                    vec![0, 0, 0, 0],
                ],
                vec![
                    vec![0, 0, 1, 0],
                    vec![0, 0, 0, 0],
                    vec![0, 0, 0, 0],
                    vec![0, 0, 0, 0],
                ],
                vec![
                    vec![0, 0, 0, 0],
                    vec![0, 0, 1, 0],
                    vec![0, 0, 0, 0],
                    vec![0, 0, 0, 0],
                ],
                vec![
                    vec![0, 0, 0, 1],
                    vec![0, 0, 0, 0],
                    vec![0, 0, 0, 0],
                    vec![0, 0, 0, 0],
                ],
            ],
            4,
        )
        .unwrap()
    }

    // Independent evaluator for the q3 polynomials, straight substitution.
    fn q3_direct(v: &[u32]) -> Vec<u32> {
        let (a, b, c) = (v[0], v[1], v[2]);
        vec![
            (a * a + b * b + a * b) % 2,
            (a * a + a * c) % 2,
            (b * c) % 2,
        ]
    }

    fn q4_direct(v: &[u32]) -> Vec<u32> {
        let (a, b, c, d) = (v[0], v[1], v[2], v[3]);
        vec![(b * b + a * b) % 2, (a * c) % 2, (b * c) % 2, (a * d) % 2]
    }

    // Closed form of the polar form of q3.
    fn b3_direct(v: &[u32], w: &[u32]) -> Vec<u32> {
        vec![
            (v[0] * w[1] + w[0] * v[1]) % 2,
            (v[0] * w[2] + v[2] * w[0]) % 2,
            (v[1] * w[2] + v[2] * w[1]) % 2,
        ]
    }

    fn vec2(coords: &[u32]) -> FpVector {
        FpVector::new(coords.iter().map(|&c| c as u64).collect(), 2).unwrap()
    }

    #[test]
    fn scalar_arithmetic() {
        let a = Scalar::new(5, 7).unwrap();
        let b = Scalar::new(4, 7).unwrap();
        assert_eq!(a.add(&b).unwrap().value(), 2);
        assert_eq!(a.mul(&b).unwrap().value(), 6);
        assert_eq!(a.neg().value(), 2);
        assert_eq!(a.mul(&a.inv().unwrap()).unwrap().value(), 1);
        assert!(Scalar::new(1, 6).is_err());
        assert!(Scalar::new(1, 1).is_err());
    }

    #[test]
    fn quadratic_eval_matches_direct_substitution() {
        let q = q3();
        for v in all_vectors(3, 2) {
            let got = q.eval(&vec2(&v)).unwrap();
            assert_eq!(got.coords(), &q3_direct(&v)[..], "q3 at {v:?}");
        }
        let q = q4();
        for v in all_vectors(4, 2) {
            let got = q.eval(&vec2(&v)).unwrap();
            assert_eq!(got.coords(), &q4_direct(&v)[..], "q4 at {v:?}");
        }
    }

    #[test]
    fn quadratic_fixture_values() {
        let q = q3();
        // q(0,1,1) = q(1,1,1) = (1,0,1); (0,0,1) is not attained.
        assert_eq!(q.eval(&vec2(&[0, 1, 1])).unwrap().coords(), &[1, 0, 1]);
        assert_eq!(q.eval(&vec2(&[1, 1, 1])).unwrap().coords(), &[1, 0, 1]);
        assert_eq!(q.eval(&vec2(&[0, 0, 0])).unwrap().coords(), &[0, 0, 0]);
        assert!(all_vectors(3, 2).all(|v| q.eval(&vec2(&v)).unwrap().coords() != [0, 0, 1]));
        // Direct substitution in the rank-8 fixture.
        let q = q4();
        assert_eq!(q.eval(&vec2(&[0, 1, 1, 0])).unwrap().coords(), &[1, 0, 1, 0]);
    }

    #[test]
    fn polar_form_identity_exhaustive() {
        // B(v,w) = q(v+w) + q(v) + q(w) on every pair, dims 3 and 4.
        for q in [q3(), q4()] {
            let b = q.polar_form();
            let n = q.dim_v();
            for v in all_vectors(n, 2) {
                let fv = vec2(&v);
                for w in all_vectors(n, 2) {
                    let fw = vec2(&w);
                    let sum = fv.add(&fw).unwrap();
                    let expect = q
                        .eval(&sum)
                        .unwrap()
                        .add(&q.eval(&fv).unwrap())
                        .unwrap()
                        .add(&q.eval(&fw).unwrap())
                        .unwrap();
                    assert_eq!(b.eval(&fv, &fw).unwrap(), expect);
                }
            }
        }
    }

    #[test]
    fn polar_of_q3_matches_printed_form() {
        let b = q3().polar_form();
        for v in all_vectors(3, 2) {
            for w in all_vectors(3, 2) {
                let got = b.eval(&vec2(&v), &vec2(&w)).unwrap();
                assert_eq!(got.coords(), &b3_direct(&v, &w)[..]);
            }
        }
    }

    #[test]
    fn polar_of_zero_map_is_zero() {
        let q = QuadraticMap::new(vec![vec![vec![0, 0], vec![0, 0]]], 2).unwrap();
        let b = q.polar_form();
        assert!(b.is_alternating());
        assert!(!b.is_nondegenerate());
        assert!(!b.image_spans_s());
    }

    #[test]
    fn bilinear_fixture_rows() {
        // B(v1, (0,0,1)) = (0, v1_0, v1_1) for every v1.
        let b = q3().polar_form();
        let e3 = vec2(&[0, 0, 1]);
        for v in all_vectors(3, 2) {
            let got = b.eval(&vec2(&v), &e3).unwrap();
            assert_eq!(got.coords(), &[0, v[0], v[1]]);
        }
        // Alternating diagonal: B(v, v) = 0.
        for v in all_vectors(3, 2) {
            assert!(b.eval(&vec2(&v), &vec2(&v)).unwrap().is_zero());
        }
    }

    #[test]
    fn rank8_bilinear_value() {
        let b = q4().polar_form();
        let got = b.eval(&vec2(&[0, 1, 0, 0]), &vec2(&[0, 0, 1, 0])).unwrap();
        assert_eq!(got.coords(), &[0, 0, 1, 0]);
    }

    #[test]
    fn structural_predicates_match_brute_force() {
        for q in [q3(), q4()] {
            let b = q.polar_form();
            let n = b.dim_v();
            assert!(b.is_alternating());
            // Brute-force kernel: no nonzero v with B(v, w) = 0 for all w.
            let degenerate = all_vectors(n, 2)
                .filter(|v| v.iter().any(|&c| c != 0))
                .any(|v| {
                    all_vectors(n, 2)
                        .all(|w| b.eval(&vec2(&v), &vec2(&w)).unwrap().is_zero())
                });
            assert_eq!(b.is_nondegenerate(), !degenerate);
            assert!(b.is_nondegenerate());
            // Brute-force span: closure of all values under addition.
            let mut seen = std::collections::HashSet::new();
            seen.insert(vec![0u32; b.dim_s()]);
            loop {
                let mut grew = false;
                let vals: Vec<Vec<u32>> = all_vectors(n, 2)
                    .flat_map(|v| {
                        all_vectors(n, 2)
                            .map(move |w| (v.clone(), w))
                            .collect::<Vec<_>>()
                    })
                    .map(|(v, w)| b.eval(&vec2(&v), &vec2(&w)).unwrap().coords().to_vec())
                    .collect();
                let snapshot: Vec<Vec<u32>> = seen.iter().cloned().collect();
                for val in &vals {
                    for s in &snapshot {
                        let sum: Vec<u32> =
                            val.iter().zip(s).map(|(&a, &b_)| (a + b_) % 2).collect();
                        if seen.insert(sum) {
                            grew = true;
                        }
                    }
                }
                if !grew {
                    break;
                }
            }
            assert_eq!(seen.len() == 1 << b.dim_s(), b.image_spans_s());
            assert!(b.image_spans_s());
        }
    }

    #[test]
    fn bilinearity_exhaustive_dim3() {
        let b = q3().polar_form();
        for u in all_vectors(3, 2) {
            let fu = vec2(&u);
            for v in all_vectors(3, 2) {
                let fv = vec2(&v);
                for w in all_vectors(3, 2) {
                    let fw = vec2(&w);
                    let lhs = b.eval(&fu.add(&fv).unwrap(), &fw).unwrap();
                    let rhs = b
                        .eval(&fu, &fw)
                        .unwrap()
                        .add(&b.eval(&fv, &fw).unwrap())
                        .unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn alternating_antisymmetry_odd_p() {
        // Standard symplectic plane over GF(5).
        let b = BilinearForm::new(vec![vec![vec![0, 1], vec![4, 0]]], 2, 5).unwrap();
        assert!(b.is_alternating());
        assert!(b.is_nondegenerate());
        assert!(b.image_spans_s());
        for v in all_vectors(2, 5) {
            let fv = FpVector::new(v.iter().map(|&c| c as u64).collect(), 5).unwrap();
            for w in all_vectors(2, 5) {
                let fw = FpVector::new(w.iter().map(|&c| c as u64).collect(), 5).unwrap();
                let vw = b.eval(&fv, &fw).unwrap();
                let wv = b.eval(&fw, &fv).unwrap();
                let neg: Vec<u32> = wv.coords().iter().map(|&c| neg_mod(c, 5)).collect();
                assert_eq!(vw.coords(), &neg[..]);
            }
        }
    }

    #[test]
    fn quadratic_rejects_lower_triangle() {
        let bad = QuadraticMap::new(vec![vec![vec![0, 0], vec![1, 0]]], 2);
        assert!(bad.is_err());
    }

    #[test]
    fn linear_map_eval() {
        let t = LinearMap::new(vec![vec![0, 1, 0, 0]], 4, 3).unwrap();
        let v = FpVector::new(vec![2, 1, 0, 2], 3).unwrap();
        assert_eq!(t.eval(&v).unwrap().coords(), &[1]);
        assert!(LinearMap::new(vec![vec![1]], 1, 2).is_err());
    }

    #[test]
    fn rank_computation() {
        assert_eq!(
            rank_mod_p(vec![vec![1, 0], vec![0, 1], vec![1, 1]], 2),
            2
        );
        assert_eq!(rank_mod_p(vec![vec![2, 4], vec![1, 2]], 5), 1);
        assert_eq!(rank_mod_p(vec![vec![0, 0]], 3), 0);
    }
}
