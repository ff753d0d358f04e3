//! Dense exact linear algebra over Q.

use crate::rational::Rational;

pub type Vector = Vec<Rational>;
pub type Matrix = Vec<Vec<Rational>>;

pub fn zero_vector(n: usize) -> Vector {
    vec![Rational::zero(); n]
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Rational::is_zero)
}

/// `v += c * w`
pub fn axpy(v: &mut [Rational], c: &Rational, w: &[Rational]) {
    if c.is_zero() {
        return;
    }
    for (a, b) in v.iter_mut().zip(w) {
        if !b.is_zero() {
            *a += &(c * b);
        }
    }
}

#[derive(Clone, Debug)]
pub struct EchelonRow {
    pub pivot: usize,
    pub row: Vector,
    /// The combination of inserted tags that produced `row`.
    pub tag: Vector,
}

/// A reduced row-echelon basis of a subspace, built incrementally. Each row
/// carries a tag vector tracking which combination of the inserted vectors
/// produced it, so a preimage under a linear map can be read off when the
/// inserted vectors are images and the tags are their sources.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    width: usize,
    tag_width: usize,
    rows: Vec<EchelonRow>,
}

impl Echelon {
    pub fn new(width: usize, tag_width: usize) -> Self {
        Echelon {
            width,
            tag_width,
            rows: Vec::new(),
        }
    }

    /// Builds the echelon form of the span of `vectors` (untagged).
    pub fn of_span<'a>(width: usize, vectors: impl IntoIterator<Item = &'a Vector>) -> Self {
        let mut e = Echelon::new(width, 0);
        for v in vectors {
            e.insert(v.clone(), Vec::new());
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[EchelonRow] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.pivot).collect()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Inserts `v` (with tag). Returns `Some(tag')` when `v` was already in
    /// the span: then `tag'` is a combination of tags whose vector is zero
    /// (a kernel element when tags are sources).
    pub fn insert(&mut self, mut v: Vector, mut tag: Vector) -> Option<Vector> {
        debug_assert_eq!(v.len(), self.width);
        if tag.len() < self.tag_width {
            tag.resize(self.tag_width, Rational::zero());
        }
        for r in &self.rows {
            let c = v[r.pivot].clone();
            if !c.is_zero() {
                let neg = -c;
                axpy(&mut v, &neg, &r.row);
                axpy(&mut tag, &neg, &r.tag);
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return Some(tag);
        };
        let inv = v[p].recip().expect("nonzero pivot");
        for x in v.iter_mut() {
            *x *= &inv;
        }
        for x in tag.iter_mut() {
            *x *= &inv;
        }
        for r in &mut self.rows {
            let c = r.row[p].clone();
            if !c.is_zero() {
                let neg = -c;
                axpy(&mut r.row, &neg, &v);
                axpy(&mut r.tag, &neg, &tag);
            }
        }
        let at = self.rows.partition_point(|r| r.pivot < p);
        self.rows.insert(
            at,
            EchelonRow {
                pivot: p,
                row: v,
                tag,
            },
        );
        None
    }

    /// Reduces `v` modulo the span in place (all pivot coordinates become
    /// zero) and returns the coefficients `c_i` with
    /// `v_before = v_after + sum_i c_i rows[i]`.
    pub fn reduce(&self, v: &mut Vector) -> Vec<Rational> {
        let mut coeffs = Vec::with_capacity(self.rows.len());
        for r in &self.rows {
            let c = v[r.pivot].clone();
            if !c.is_zero() {
                axpy(v, &-&c, &r.row);
            }
            coeffs.push(c);
        }
        coeffs
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        is_zero_vector(&w)
    }

    /// For `v` in the span, the tag combination mapping onto it.
    pub fn preimage(&self, v: &[Rational]) -> Option<Vector> {
        let mut w = v.to_vec();
        let coeffs = self.reduce(&mut w);
        if !is_zero_vector(&w) {
            return None;
        }
        let mut out = zero_vector(self.tag_width);
        for (c, r) in coeffs.iter().zip(&self.rows) {
            axpy(&mut out, c, &r.tag);
        }
        Some(out)
    }
}

pub fn rank(vectors: &[Vector]) -> usize {
    match vectors.first() {
        None => 0,
        Some(v) => Echelon::of_span(v.len(), vectors).rank(),
    }
}

/// Basis of the kernel of the map sending the `j`-th unit vector to
/// `images[j]` (each of length `target_dim`).
pub fn kernel(images: &[Vector], target_dim: usize) -> Vec<Vector> {
    let n = images.len();
    let mut e = Echelon::new(target_dim, n);
    let mut out = Vec::new();
    for (j, img) in images.iter().enumerate() {
        let mut tag = zero_vector(n);
        tag[j] = Rational::one();
        if let Some(k) = e.insert(img.clone(), tag) {
            out.push(k);
        }
    }
    out
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let k = b.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut s = Rational::zero();
                    for l in 0..k {
                        if !a[i][l].is_zero() && !b[l][j].is_zero() {
                            s += &(&a[i][l] * &b[l][j]);
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// Gauss-Jordan inverse; `None` when singular.
pub fn invert(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut e = Echelon::new(n, n);
    for (i, row) in a.iter().enumerate() {
        let mut tag = zero_vector(n);
        tag[i] = Rational::one();
        if e.insert(row.clone(), tag).is_some() {
            return None;
        }
    }
    // Rows are now unit vectors e_p with tag t_p: t_p * A = e_p.
    let mut inv = vec![zero_vector(n); n];
    for r in e.rows() {
        inv[r.pivot] = r.tag.clone();
    }
    // inv * A = I
    Some(inv)
}
