//! Dense linear algebra on Nyström matrices.

use crate::error::{Error, Result};
use crate::geometry::Density;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

/// `[f_0x, f_0y, f_1x, ...]`.
pub fn flatten(f: &Density) -> DVector<C64> {
    DVector::from_iterator(2 * f.len(), f.iter().flat_map(|v| [v[0], v[1]]))
}

pub fn unflatten(v: &DVector<C64>) -> Density {
    (0..v.len() / 2).map(|i| [v[2 * i], v[2 * i + 1]]).collect()
}

/// Solves `A x = b` by LU with partial pivoting.
pub fn lu_solve(a: DMatrix<C64>, b: &DVector<C64>) -> Result<DVector<C64>> {
    let lu = a.lu();
    let x = lu.solve(b).ok_or_else(|| Error::LinearSolve("singular matrix in LU solve".into()))?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::LinearSolve("non-finite LU solution".into()));
    }
    Ok(x)
}

/// `W^{1/2} A W^{-1/2}` for node weights `w` (each repeated for both
/// components), so that singular values refer to the quadrature `L²` norm.
pub fn weighted_similarity(a: &DMatrix<C64>, w: &[f64]) -> DMatrix<C64> {
    let s: Vec<f64> = w.iter().flat_map(|v| [v.sqrt(), v.sqrt()]).collect();
    DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * (s[i] / s[j]))
}

/// Singular values in ascending order with the right singular vectors of
/// the two smallest.
pub struct SmallestSingular {
    pub values: Vec<f64>,
    pub v0: DVector<C64>,
    pub v1: DVector<C64>,
}

pub fn smallest_singular(a: DMatrix<C64>) -> Result<SmallestSingular> {
    let svd = a.svd(false, true);
    let vt = svd.v_t.ok_or_else(|| Error::LinearSolve("SVD did not return V".into()))?;
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let values = idx.iter().map(|&i| svd.singular_values[i]).collect();
    let row = |i: usize| DVector::from_iterator(vt.ncols(), vt.row(i).iter().map(|v| v.conj()));
    Ok(SmallestSingular { values, v0: row(idx[0]), v1: row(idx[1]) })
}

/// `|⟨a, b⟩| / (‖a‖ ‖b‖)` in the Euclidean inner product.
pub fn cosine(a: &DVector<C64>, b: &DVector<C64>) -> f64 {
    a.dotc(b).norm() / (a.norm() * b.norm())
}

/// Weighted `L²` norm `(Σ w_i |f_i|²)^{1/2}` of a boundary density.
pub fn density_l2(f: &Density, w: &[f64]) -> f64 {
    f.iter().zip(w).map(|(v, wi)| wi * (v[0].norm_sqr() + v[1].norm_sqr())).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu_solves_small_system() {
        let a = DMatrix::from_row_slice(2, 2, &[C64::new(2.0, 1.0), C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(3.0, 0.0)]);
        let x = DVector::from_vec(vec![C64::new(1.0, -1.0), C64::new(0.5, 2.0)]);
        let b = &a * &x;
        assert!((lu_solve(a, &b).unwrap() - x).norm() < 1e-14);
    }

    #[test]
    fn singular_vector_of_rank_deficient() {
        let a = DMatrix::from_row_slice(2, 2, &[C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(2.0, 0.0)]);
        let s = smallest_singular(a).unwrap();
        assert!(s.values[0] < 1e-14);
        let e = DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]);
        assert!((cosine(&s.v0, &e) - 1.0).abs() < 1e-14);
    }
}
