//! Exact integer matrices and lattices.
//!
//! Vectors are rows. A linear map `Z^n -> Z^m` is an `n x m` matrix `A` and
//! acts as `v -> v * A`. All arithmetic is checked; overflow panics rather
//! than wrapping, since a silently wrong lattice is worse than a crash.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub type Int = i128;

#[inline]
pub fn add(a: Int, b: Int) -> Int {
    a.checked_add(b).expect("integer overflow in add")
}

#[inline]
pub fn sub(a: Int, b: Int) -> Int {
    a.checked_sub(b).expect("integer overflow in sub")
}

#[inline]
pub fn mul(a: Int, b: Int) -> Int {
    a.checked_mul(b).expect("integer overflow in mul")
}

pub fn gcd(a: Int, b: Int) -> Int {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Extended gcd: returns `(g, x, y)` with `a*x + b*y = g >= 0`.
pub fn xgcd(a: Int, b: Int) -> (Int, Int, Int) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1, 0);
    let (mut t0, mut t1) = (0, 1);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, sub(r0, mul(q, r1)));
        (s0, s1) = (s1, sub(s0, mul(q, s1)));
        (t0, t1) = (t1, sub(t0, mul(q, t1)));
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

pub fn vec_add(a: &[Int], b: &[Int]) -> Vec<Int> {
    a.iter().zip(b).map(|(x, y)| add(*x, *y)).collect()
}

pub fn vec_sub(a: &[Int], b: &[Int]) -> Vec<Int> {
    a.iter().zip(b).map(|(x, y)| sub(*x, *y)).collect()
}

pub fn vec_scale(a: &[Int], c: Int) -> Vec<Int> {
    a.iter().map(|x| mul(*x, c)).collect()
}

/// `a += c * b`
pub fn axpy(a: &mut [Int], c: Int, b: &[Int]) {
    if c == 0 {
        return;
    }
    for (x, y) in a.iter_mut().zip(b) {
        if *y != 0 {
            *x = add(*x, mul(c, *y));
        }
    }
}

pub fn is_zero(v: &[Int]) -> bool {
    v.iter().all(|x| *x == 0)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Int>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn scalar(n: usize, c: Int) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c);
        }
        m
    }

    /// Builds from rows; `cols` is needed when `rows` is empty.
    pub fn from_rows(cols: usize, rows: &[Vec<Int>]) -> Self {
        let mut m = Mat::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix row");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Int {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let v = add(out.get(i, j), mul(a, b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat { rows: self.rows, cols: self.cols, data: vec_add(&self.data, &other.data) }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat { rows: self.rows, cols: self.cols, data: vec_sub(&self.data, &other.data) }
    }

    pub fn scale(&self, c: Int) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: vec_scale(&self.data, c) }
    }

    pub fn pow(&self, e: u32) -> Mat {
        assert_eq!(self.rows, self.cols);
        let mut out = Mat::identity(self.rows);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Row vector times matrix.
    pub fn apply(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(v.len(), self.rows, "vector length mismatch");
        let mut out = vec![0; self.cols];
        for (i, x) in v.iter().enumerate() {
            if *x != 0 {
                axpy(&mut out, *x, self.row(i));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        is_zero(&self.data)
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &Mat) -> Mat {
        let mut m = Mat::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m.set(self.rows + i, self.cols + j, other.get(i, j));
            }
        }
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: Int) {
        if c == 0 {
            return;
        }
        for j in 0..self.cols {
            let s = self.get(src, j);
            if s != 0 {
                let v = add(self.get(dst, j), mul(c, s));
                self.set(dst, j, v);
            }
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: Int) {
        if c == 0 {
            return;
        }
        for i in 0..self.rows {
            let s = self.get(i, src);
            if s != 0 {
                let v = add(self.get(i, dst), mul(c, s));
                self.set(i, dst, v);
            }
        }
    }

    fn neg_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    /// Determinant by fraction-free elimination (Bareiss).
    pub fn det(&self) -> Int {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a = self.clone();
        let mut sign = 1;
        let mut prev = 1;
        for k in 0..n - 1 {
            if a.get(k, k) == 0 {
                match (k + 1..n).find(|&i| a.get(i, k) != 0) {
                    Some(p) => {
                        a.swap_rows(k, p);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = sub(mul(a.get(i, j), a.get(k, k)), mul(a.get(i, k), a.get(k, j)));
                    a.set(i, j, v / prev);
                }
            }
            prev = a.get(k, k);
        }
        sign * a.get(n - 1, n - 1)
    }
}

/// Row Hermite normal form with transform: returns `(H, U, rank)` where
/// `U * A = H`, `U` is unimodular, the first `rank` rows of `H` are an
/// echelon basis with positive pivots and reduced entries above pivots,
/// and the remaining rows of `H` are zero. Those remaining rows of `U`
/// span the left kernel of `A`.
pub fn hnf_with_transform(a: &Mat) -> (Mat, Mat, usize) {
    hnf_impl(a, true)
}

pub fn hnf(a: &Mat) -> (Mat, usize) {
    let (h, _, r) = hnf_impl(a, false);
    (h, r)
}

fn hnf_impl(a: &Mat, track: bool) -> (Mat, Mat, usize) {
    let m = a.rows;
    let mut h = a.clone();
    let mut u = if track { Mat::identity(m) } else { Mat::zeros(0, 0) };
    let mut r = 0;
    for col in 0..a.cols {
        if r == m {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..m {
                let v = h.get(i, col);
                if v != 0 && best.map_or(true, |b| v.abs() < h.get(b, col).abs()) {
                    best = Some(i);
                }
            }
            let Some(p) = best else { break };
            h.swap_rows(r, p);
            if track {
                u.swap_rows(r, p);
            }
            let piv = h.get(r, col);
            let mut clean = true;
            for i in r + 1..m {
                let v = h.get(i, col);
                if v != 0 {
                    let q = v.div_euclid(piv);
                    h.add_row(i, r, -q);
                    if track {
                        u.add_row(i, r, -q);
                    }
                    if h.get(i, col) != 0 {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        if r < m && h.get(r, col) != 0 {
            if h.get(r, col) < 0 {
                h.neg_row(r);
                if track {
                    u.neg_row(r);
                }
            }
            let piv = h.get(r, col);
            for i in 0..r {
                let v = h.get(i, col);
                let q = v.div_euclid(piv);
                if q != 0 {
                    h.add_row(i, r, -q);
                    if track {
                        u.add_row(i, r, -q);
                    }
                }
            }
            r += 1;
        }
    }
    (h, u, r)
}

/// Smith normal form: `U * A * V = D` with `U`, `V` unimodular and the
/// diagonal of `D` nonnegative with each entry dividing the next.
/// Also returns `V^{-1}`.
pub struct Snf {
    pub d: Mat,
    pub u: Mat,
    pub v: Mat,
    pub v_inv: Mat,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.get(i, i)).collect()
    }
}

pub fn snf(a: &Mat) -> Snf {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = Mat::identity(m);
    let mut v = Mat::identity(n);
    let mut vi = Mat::identity(n);
    // Column ops on V act on the right; the inverse gets the inverse row op
    // on the left: col_dst += c*col_src on V  <=>  row_src -= c*row_dst on V^-1.
    let mut t = 0;
    while t < m.min(n) {
        // pick the nonzero entry of least absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = d.get(i, j);
                if x != 0 && best.map_or(true, |(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        vi.swap_rows(t, pj);
        loop {
            let piv = d.get(t, t);
            let mut dirty = false;
            for i in t + 1..m {
                let x = d.get(i, t);
                if x != 0 {
                    let q = x.div_euclid(piv);
                    d.add_row(i, t, -q);
                    u.add_row(i, t, -q);
                    if d.get(i, t) != 0 {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..n {
                let x = d.get(t, j);
                if x != 0 {
                    let q = x.div_euclid(piv);
                    d.add_col(j, t, -q);
                    v.add_col(j, t, -q);
                    vi.add_row(t, j, q);
                    if d.get(t, j) != 0 {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                // divisibility: pivot must divide the whole trailing block
                let mut fix: Option<usize> = None;
                'outer: for i in t + 1..m {
                    for j in t + 1..n {
                        if d.get(i, j) % piv != 0 {
                            fix = Some(i);
                            break 'outer;
                        }
                    }
                }
                match fix {
                    None => break,
                    Some(i) => {
                        d.add_row(t, i, 1);
                        u.add_row(t, i, 1);
                        continue;
                    }
                }
            }
            // move the smallest nonzero of row/col t into the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                let x = d.get(i, t);
                if x != 0 && best.map_or(true, |(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                    best = Some((i, t));
                }
            }
            for j in t..n {
                let x = d.get(t, j);
                if x != 0 && best.map_or(true, |(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                    best = Some((t, j));
                }
            }
            let (bi, bj) = best.expect("pivot row and column cannot both vanish");
            if bi != t {
                d.swap_rows(t, bi);
                u.swap_rows(t, bi);
            }
            if bj != t {
                d.swap_cols(t, bj);
                v.swap_cols(t, bj);
                vi.swap_rows(t, bj);
            }
        }
        if d.get(t, t) < 0 {
            d.neg_row(t);
            u.neg_row(t);
        }
        t += 1;
    }
    Snf { d, u, v, v_inv: vi }
}

/// A sublattice of `Z^dim`, stored as a row HNF basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    pub dim: usize,
    basis: Vec<Vec<Int>>,
    pivots: Vec<usize>,
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice(dim {}, {:?})", self.dim, self.basis)
    }
}

impl Lattice {
    pub fn zero(dim: usize) -> Self {
        Lattice { dim, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(dim: usize) -> Self {
        let rows: Vec<Vec<Int>> = (0..dim)
            .map(|i| {
                let mut r = vec![0; dim];
                r[i] = 1;
                r
            })
            .collect();
        Lattice { dim, basis: rows, pivots: (0..dim).collect() }
    }

    /// `c * Z^dim`
    pub fn scalar(dim: usize, c: Int) -> Self {
        if c == 0 {
            return Lattice::zero(dim);
        }
        let rows: Vec<Vec<Int>> = (0..dim)
            .map(|i| {
                let mut r = vec![0; dim];
                r[i] = c.abs();
                r
            })
            .collect();
        Lattice { dim, basis: rows, pivots: (0..dim).collect() }
    }

    pub fn from_gens<I: IntoIterator<Item = Vec<Int>>>(dim: usize, gens: I) -> Self {
        let rows: Vec<Vec<Int>> = gens.into_iter().filter(|r| !is_zero(r)).collect();
        if rows.is_empty() {
            return Lattice::zero(dim);
        }
        let (h, r) = hnf(&Mat::from_rows(dim, &rows));
        let basis: Vec<Vec<Int>> = (0..r).map(|i| h.row(i).to_vec()).collect();
        let pivots = basis
            .iter()
            .map(|row| row.iter().position(|x| *x != 0).unwrap())
            .collect();
        Lattice { dim, basis, pivots }
    }

    pub fn basis(&self) -> &[Vec<Int>] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.dim && self.basis.iter().enumerate().all(|(i, r)| r[self.pivots[i]] == 1)
    }

    /// Remainder of `v` after subtracting the lattice greedily along pivots.
    pub fn reduce(&self, v: &[Int]) -> Vec<Int> {
        let mut w = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let q = w[p].div_euclid(row[p]);
            if q != 0 {
                axpy(&mut w, -q, row);
            }
        }
        w
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        self.coords(v).is_some()
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the lattice.
    pub fn coords(&self, v: &[Int]) -> Option<Vec<Int>> {
        let mut w = v.to_vec();
        let mut c = Vec::with_capacity(self.basis.len());
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if w[p] % row[p] != 0 {
                return None;
            }
            let q = w[p] / row[p];
            axpy(&mut w, -q, row);
            c.push(q);
        }
        if is_zero(&w) {
            Some(c)
        } else {
            None
        }
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.dim, other.dim);
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        if let Some(m) = self.modulus().or_else(|| other.modulus()) {
            return Lattice::from_modular(self.dim, self.basis.iter().chain(other.basis.iter()).cloned().collect(), m);
        }
        Lattice::from_gens(self.dim, self.basis.iter().chain(other.basis.iter()).cloned())
    }

    pub fn add_gens<I: IntoIterator<Item = Vec<Int>>>(&self, gens: I) -> Lattice {
        if let Some(m) = self.modulus() {
            return Lattice::from_modular(self.dim, self.basis.iter().cloned().chain(gens).collect(), m);
        }
        Lattice::from_gens(self.dim, self.basis.iter().cloned().chain(gens))
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|r| self.contains(r))
    }

    pub fn intersect(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.dim, other.dim);
        if self.is_zero() || other.is_zero() {
            return Lattice::zero(self.dim);
        }
        if other.modulus().is_some() {
            return self.preimage(&Mat::identity(self.dim), other);
        }
        if self.modulus().is_some() {
            return other.preimage(&Mat::identity(self.dim), self);
        }
        let k = self.rank();
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        let kern = left_kernel(&Mat::from_rows(self.dim, &rows));
        let gens = kern.into_iter().map(|c| combine(&self.basis, &c[..k], self.dim));
        Lattice::from_gens(self.dim, gens)
    }

    /// Image under `v -> v * a`.
    pub fn image(&self, a: &Mat) -> Lattice {
        assert_eq!(a.rows, self.dim);
        Lattice::from_gens(a.cols, self.basis.iter().map(|r| a.apply(r)))
    }

    /// Canonical form of the lattice spanned by `gens`, given that it
    /// contains `m Z^dim`.
    pub fn from_modular(dim: usize, gens: Vec<Vec<Int>>, m: Int) -> Self {
        let mut rows = hnf_mod(gens, dim, m);
        for j in 0..dim {
            let (head, tail) = rows.split_at_mut(j);
            let pj = &tail[0];
            for r in head.iter_mut() {
                let q = r[j].div_euclid(pj[j]);
                if q != 0 {
                    for c in j..dim {
                        r[c] = (r[c] - q * pj[c]).rem_euclid(m);
                    }
                    r[j] = r[j].rem_euclid(pj[j]);
                }
            }
        }
        Lattice { dim, basis: rows, pivots: (0..dim).collect() }
    }

    /// A multiple `m` of the exponent of `Z^dim / self`, so that
    /// `m Z^dim` lies in `self`; `None` unless full rank and small.
    pub fn modulus(&self) -> Option<Int> {
        if self.rank() != self.dim {
            return None;
        }
        let mut step: Int = 1;
        for (i, row) in self.basis.iter().enumerate() {
            let p = row[self.pivots[i]].abs();
            step = (step / gcd(step, p)).checked_mul(p)?;
            if step > 1 << 60 {
                return None;
            }
        }
        let mut m = step;
        loop {
            let h = hnf_mod(self.basis.clone(), self.dim, m);
            if h.iter().enumerate().all(|(i, r)| r[i] == self.basis[i][i].abs()) {
                return Some(m);
            }
            m = m.checked_mul(step).filter(|m| *m <= 1 << 60)?;
        }
    }

    /// `{ x in self : x * a in target }`
    pub fn preimage(&self, a: &Mat, target: &Lattice) -> Lattice {
        assert_eq!(a.rows, self.dim);
        assert_eq!(a.cols, target.dim);
        if self.is_zero() {
            return self.clone();
        }
        let k = self.rank();
        if let Some(d) = target.modulus() {
            // x * a lands in target for every x in d Z^k, so work modulo d
            let n = a.cols;
            let mut rows: Vec<Vec<Int>> = Vec::new();
            for (i, r) in self.basis.iter().enumerate() {
                let mut v = a.apply(r);
                v.resize(n + k, 0);
                v[n + i] = 1;
                rows.push(v);
            }
            for t in &target.basis {
                let mut v = t.clone();
                v.resize(n + k, 0);
                rows.push(v);
            }
            let h = hnf_mod(rows, n + k, d);
            let coords = h.into_iter().filter(|r| r[..n].iter().all(|x| *x == 0)).map(|r| r[n..].to_vec());
            let gens: Vec<Vec<Int>> = coords.map(|c| combine(&self.basis, &c, self.dim)).collect();
            if let Some(m) = self.modulus().and_then(|e| e.checked_mul(d)).filter(|m| *m <= 1 << 62) {
                return Lattice::from_modular(self.dim, gens, m);
            }
            return Lattice::from_gens(self.dim, gens);
        }
        let mut rows: Vec<Vec<Int>> = self.basis.iter().map(|r| a.apply(r)).collect();
        rows.extend(target.basis.iter().cloned());
        let kern = left_kernel(&Mat::from_rows(a.cols, &rows));
        Lattice::from_gens(self.dim, kern.into_iter().map(|c| combine(&self.basis, &c[..k], self.dim)))
    }

    /// Index `[self : sub]` when finite.
    pub fn index_of(&self, sub: &Lattice) -> Option<Int> {
        let q = crate::abgroup::Subquotient::new(self, sub);
        if q.free_rank() > 0 {
            None
        } else {
            Some(q.order_finite())
        }
    }
}

pub fn combine(rows: &[Vec<Int>], coeffs: &[Int], dim: usize) -> Vec<Int> {
    let mut out = vec![0; dim];
    for (r, c) in rows.iter().zip(coeffs) {
        axpy(&mut out, *c, r);
    }
    out
}

/// Echelon basis of the full-rank lattice spanned by `rows` and `d Z^ncols`,
/// with all arithmetic reduced modulo `d`.
pub fn hnf_mod(mut pool: Vec<Vec<Int>>, ncols: usize, d: Int) -> Vec<Vec<Int>> {
    let red = |v: &mut Vec<Int>| v.iter_mut().for_each(|x| *x = x.rem_euclid(d));
    pool.iter_mut().for_each(red);
    let mut out = Vec::with_capacity(ncols);
    for col in 0..ncols {
        let mut de = vec![0; ncols];
        de[col] = d;
        let mut piv = de;
        let mut rest = Vec::with_capacity(pool.len());
        for mut r in pool.drain(..) {
            let b = r[col];
            if b == 0 {
                if r.iter().any(|x| *x != 0) {
                    rest.push(r);
                }
                continue;
            }
            // unimodular combination of piv and r clearing column col in r
            let a0 = piv[col];
            let (g, x, y) = xgcd(a0, b);
            let (u, v) = (a0 / g, b / g);
            let new_piv: Vec<Int> = piv.iter().zip(&r).map(|(p, q)| (x * p + y * q).rem_euclid(d)).collect();
            for (q, p) in r.iter_mut().zip(&piv) {
                *q = (u * *q - v * *p).rem_euclid(d);
            }
            piv = new_piv;
            if piv[col] == 0 {
                piv[col] = d;
            }
            if r.iter().any(|x| *x != 0) {
                rest.push(r);
            }
        }
        let g = piv[col];
        // d/g times the pivot row is d e_col plus a tail that stays in play
        let mut tail: Vec<Int> = piv.iter().map(|p| p * (d / g)).collect();
        tail[col] = 0;
        red(&mut tail);
        if tail.iter().any(|x| *x != 0) {
            rest.push(tail);
        }
        out.push(piv);
        pool = rest;
    }
    out
}

/// Basis of `{ c : c * a = 0 }`.
pub fn left_kernel(a: &Mat) -> Vec<Vec<Int>> {
    let (_, u, r) = hnf_with_transform(a);
    (r..a.rows).map(|i| u.row(i).to_vec()).collect()
}

/// Solve `c * a = b` over the integers.
pub fn solve_left(a: &Mat, b: &[Int]) -> Option<Vec<Int>> {
    let (h, u, r) = hnf_with_transform(a);
    let basis: Vec<Vec<Int>> = (0..r).map(|i| h.row(i).to_vec()).collect();
    let lat = Lattice {
        dim: a.cols,
        pivots: basis.iter().map(|row| row.iter().position(|x| *x != 0).unwrap()).collect(),
        basis,
    };
    let c = lat.coords(b)?;
    let mut out = vec![0; a.rows];
    for (i, ci) in c.iter().enumerate() {
        axpy(&mut out, *ci, u.row(i));
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[Int]]) -> Mat {
        let cols = rows.first().map_or(0, |r| r.len());
        Mat::from_rows(cols, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn snf_example_from_j_relations() {
        let a = m(&[&[24, 8], &[4, -4], &[14, 2]]);
        let s = snf(&a);
        assert_eq!(s.diagonal(), vec![2, 32]);
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
        assert_eq!(s.u.det().abs(), 1);
        assert_eq!(s.v.det().abs(), 1);
        assert_eq!(s.v.mul(&s.v_inv), Mat::identity(2));
    }

    #[test]
    fn snf_identity_and_zero() {
        assert_eq!(snf(&Mat::identity(3)).diagonal(), vec![1, 1, 1]);
        assert_eq!(snf(&Mat::zeros(2, 3)).diagonal(), vec![0, 0]);
    }

    #[test]
    fn hnf_kernel_and_solve() {
        let a = m(&[&[2, 4], &[1, 2], &[0, 3]]);
        let k = left_kernel(&a);
        assert_eq!(k.len(), 1);
        assert!(is_zero(&a.apply(&k[0])));
        let c = solve_left(&a, &[3, 9]).unwrap();
        assert_eq!(a.apply(&c), vec![3, 9]);
        assert!(solve_left(&m(&[&[2, 0]]), &[1, 0]).is_none());
    }

    #[test]
    fn lattice_ops() {
        let a = Lattice::from_gens(2, [vec![2, 0], vec![0, 3]]);
        let b = Lattice::from_gens(2, [vec![3, 0], vec![0, 2]]);
        let i = a.intersect(&b);
        assert_eq!(i, Lattice::from_gens(2, [vec![6, 0], vec![0, 6]]));
        let s = a.sum(&b);
        assert!(s.is_full());
        assert_eq!(Lattice::full(2).index_of(&a), Some(6));
    }

    #[test]
    fn determinant_bareiss() {
        assert_eq!(m(&[&[2, 1], &[7, 4]]).det(), 1);
        assert_eq!(m(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]).det(), -2);
    }
}
