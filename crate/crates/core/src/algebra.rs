//! Octonion arithmetic.
//!
//! The multiplication table is generated from the seven oriented index
//! triples below: for every `(a, b, c)` the cyclic relations
//! `e_a e_b = e_c`, `e_b e_c = e_a`, `e_c e_a = e_b` hold together with
//! their antisymmetric counterparts, `e_0` is the unit and `e_i e_i = -e_0`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The oriented triples that generate the octonion product.
pub const TRIPLES: [(usize, usize, usize); 7] = [
    (1, 2, 3),
    (1, 4, 5),
    (1, 7, 6),
    (2, 4, 6),
    (2, 5, 7),
    (3, 4, 7),
    (3, 6, 5),
];

/// Frozen structure constants: `e_i e_j = sign * e_index`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TripleTable {
    index: [[usize; 8]; 8],
    sign: [[i8; 8]; 8],
}

const fn build_table() -> TripleTable {
    let mut index = [[0usize; 8]; 8];
    let mut sign = [[0i8; 8]; 8];

    let mut i = 0;
    while i < 8 {
        index[0][i] = i;
        sign[0][i] = 1;
        index[i][0] = i;
        sign[i][0] = 1;
        i += 1;
    }
    let mut i = 1;
    while i < 8 {
        index[i][i] = 0;
        sign[i][i] = -1;
        i += 1;
    }

    let mut t = 0;
    while t < TRIPLES.len() {
        let (a, b, c) = TRIPLES[t];
        let cyc = [(a, b, c), (b, c, a), (c, a, b)];
        let mut r = 0;
        while r < 3 {
            let (p, q, s) = cyc[r];
            index[p][q] = s;
            sign[p][q] = 1;
            index[q][p] = s;
            sign[q][p] = -1;
            r += 1;
        }
        t += 1;
    }
    TripleTable { index, sign }
}

static TABLE: TripleTable = build_table();

impl TripleTable {
    /// The process-wide table built from [`TRIPLES`].
    pub fn get() -> &'static TripleTable {
        &TABLE
    }

    pub fn triples(&self) -> &'static [(usize, usize, usize); 7] {
        &TRIPLES
    }

    /// `(k, s)` such that `e_i e_j = s e_k`.
    pub fn product(&self, i: usize, j: usize) -> (usize, i8) {
        (self.index[i][j], self.sign[i][j])
    }

    /// Structure constant `eps(i, j, k)` in `e_i e_j = sum_k eps(i,j,k) e_k`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> i8 {
        if self.index[i][j] == k {
            self.sign[i][j]
        } else {
            0
        }
    }
}

/// An element of the octonion algebra, stored as coefficients of `e_0..e_7`.
#[derive(Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Octonion {
    c: [f64; 8],
}

impl Octonion {
    pub const ZERO: Octonion = Octonion { c: [0.0; 8] };
    pub const ONE: Octonion = Octonion::basis(0);

    pub const fn new(c: [f64; 8]) -> Self {
        Octonion { c }
    }

    /// Basis element `e_i`.
    ///
    /// Panics if `i > 7`.
    pub const fn basis(i: usize) -> Self {
        let mut c = [0.0; 8];
        c[i] = 1.0;
        Octonion { c }
    }

    pub const fn real(s: f64) -> Self {
        let mut c = [0.0; 8];
        c[0] = s;
        Octonion { c }
    }

    pub fn coeffs(&self) -> &[f64; 8] {
        &self.c
    }

    pub fn into_array(self) -> [f64; 8] {
        self.c
    }

    /// Scalar part `Re x = c0`.
    pub fn re(&self) -> f64 {
        self.c[0]
    }

    /// Vector part `x - Re x`.
    pub fn vector(&self) -> Octonion {
        let mut c = self.c;
        c[0] = 0.0;
        Octonion { c }
    }

    pub fn conj(&self) -> Octonion {
        let mut c = self.c;
        for v in &mut c[1..] {
            *v = -*v;
        }
        Octonion { c }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c.iter().map(|v| v * v).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Euclidean inner product of the coefficient vectors, `Re(x conj(y))`.
    pub fn dot(&self, other: &Octonion) -> f64 {
        self.c.iter().zip(&other.c).map(|(a, b)| a * b).sum()
    }

    pub fn inverse(&self) -> Result<Octonion> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::ZeroDivisor);
        }
        Ok(self.conj() / n2)
    }

    /// Octonion product `self * other`, expanded bilinearly over the table.
    pub fn mul(&self, other: &Octonion) -> Octonion {
        let table = TripleTable::get();
        let mut out = [0.0; 8];
        for (i, &xi) in self.c.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for (j, &yj) in other.c.iter().enumerate() {
                let (k, s) = table.product(i, j);
                out[k] += f64::from(s) * xi * yj;
            }
        }
        Octonion { c: out }
    }

    pub fn scale(&self, s: f64) -> Octonion {
        let mut c = self.c;
        for v in &mut c {
            *v *= s;
        }
        Octonion { c }
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|v| v.is_finite())
    }

    /// `|self - other|`.
    pub fn distance(&self, other: &Octonion) -> f64 {
        (*self - *other).norm()
    }
}

/// `(xy)z - x(yz)`.
pub fn associator(x: &Octonion, y: &Octonion, z: &Octonion) -> Octonion {
    x.mul(y).mul(z) - x.mul(&y.mul(z))
}

/// `xy - yx`.
pub fn commutator(x: &Octonion, y: &Octonion) -> Octonion {
    x.mul(y) - y.mul(x)
}

impl fmt::Debug for Octonion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Octonion{:?}", self.c)
    }
}

impl fmt::Display for Octonion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &v) in self.c.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            if first {
                write!(f, "{v}")?;
            } else if v < 0.0 {
                write!(f, " - {}", -v)?;
            } else {
                write!(f, " + {v}")?;
            }
            if i > 0 {
                write!(f, "e{i}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Index<usize> for Octonion {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.c[i]
    }
}

impl From<[f64; 8]> for Octonion {
    fn from(c: [f64; 8]) -> Self {
        Octonion { c }
    }
}

impl From<f64> for Octonion {
    fn from(s: f64) -> Self {
        Octonion::real(s)
    }
}

impl Add for Octonion {
    type Output = Octonion;
    fn add(mut self, rhs: Octonion) -> Octonion {
        self += rhs;
        self
    }
}

impl AddAssign for Octonion {
    fn add_assign(&mut self, rhs: Octonion) {
        for (a, b) in self.c.iter_mut().zip(rhs.c) {
            *a += b;
        }
    }
}

impl Sub for Octonion {
    type Output = Octonion;
    fn sub(mut self, rhs: Octonion) -> Octonion {
        self -= rhs;
        self
    }
}

impl SubAssign for Octonion {
    fn sub_assign(&mut self, rhs: Octonion) {
        for (a, b) in self.c.iter_mut().zip(rhs.c) {
            *a -= b;
        }
    }
}

impl Neg for Octonion {
    type Output = Octonion;
    fn neg(self) -> Octonion {
        self.scale(-1.0)
    }
}

impl Mul for Octonion {
    type Output = Octonion;
    fn mul(self, rhs: Octonion) -> Octonion {
        Octonion::mul(&self, &rhs)
    }
}

impl Mul<&Octonion> for Octonion {
    type Output = Octonion;
    fn mul(self, rhs: &Octonion) -> Octonion {
        Octonion::mul(&self, rhs)
    }
}

impl Mul<f64> for Octonion {
    type Output = Octonion;
    fn mul(self, rhs: f64) -> Octonion {
        self.scale(rhs)
    }
}

impl Mul<Octonion> for f64 {
    type Output = Octonion;
    fn mul(self, rhs: Octonion) -> Octonion {
        rhs.scale(self)
    }
}

impl Div<f64> for Octonion {
    type Output = Octonion;
    fn div(self, rhs: f64) -> Octonion {
        self.scale(1.0 / rhs)
    }
}
