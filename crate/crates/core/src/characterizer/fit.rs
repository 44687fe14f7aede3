//! Does a quadratic form cut out exactly the given point set?

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::linalg;
use crate::pointset::PointSet;
use crate::polar::{polar_point_set, Form};
use crate::space::ProjSpace;

/// Largest number of projective kernel vectors tried.
const MAX_CANDIDATES: u64 = 4096;

fn monomials(dim: usize) -> Vec<(usize, usize)> {
    (0..=dim).flat_map(|i| (i..=dim).map(move |j| (i, j))).collect()
}

fn evaluation_kernel(space: &ProjSpace, k: &PointSet) -> (Vec<(usize, usize)>, Vec<Vec<FieldElement>>) {
    let f = space.field();
    let mons = monomials(space.dim());
    let rows: Vec<Vec<FieldElement>> = k
        .iter()
        .map(|p| {
            let x = space.point(p);
            mons.iter().map(|&(i, j)| f.mul(x[i], x[j])).collect()
        })
        .collect();
    let ker = linalg::kernel(f, &rows, mons.len());
    (mons, ker)
}

/// Dimension of the space of quadratic forms vanishing on K.
pub fn quadric_kernel_dim(space: &ProjSpace, k: &PointSet) -> usize {
    evaluation_kernel(space, k).1.len()
}

/// A quadratic form whose zero set is exactly K, if one exists.
pub fn fit_quadric(space: &ProjSpace, k: &PointSet) -> Result<Option<Form>> {
    if k.is_empty() {
        return Ok(None);
    }
    let f = space.field();
    let (mons, ker) = evaluation_kernel(space, k);
    if ker.is_empty() {
        return Ok(None);
    }
    let q = f.order() as u64;
    let d = ker.len() as u32;
    if q.checked_pow(d).is_none_or(|v| (v - 1) / (q - 1) > MAX_CANDIDATES) {
        return Err(Error::SearchTooLarge(format!(
            "{d}-dimensional space of quadratic forms vanishing on the set"
        )));
    }
    let coefficients: Vec<Vec<FieldElement>> = if d == 1 {
        vec![vec![1]]
    } else {
        let cs = ProjSpace::new(d as usize - 1, f.clone())?;
        (0..cs.num_points()).map(|i| cs.point(i).to_vec()).collect()
    };
    for coef in &coefficients {
        let mut vec = vec![0 as FieldElement; mons.len()];
        for (a, v) in coef.iter().zip(&ker) {
            for (o, &vi) in vec.iter_mut().zip(v) {
                *o = f.add(*o, f.mul(*a, vi));
            }
        }
        let n = space.dim() + 1;
        let mut coeffs = vec![0 as FieldElement; n * n];
        for (&(i, j), &v) in mons.iter().zip(&vec) {
            coeffs[i * n + j] = v;
        }
        let form = Form::Quadratic {
            dim: space.dim(),
            coeffs,
        };
        if polar_point_set(space, &form)? == *k {
            return Ok(Some(form));
        }
    }
    Ok(None)
}

pub fn is_quadric_pointset(space: &ProjSpace, k: &PointSet) -> Result<bool> {
    Ok(fit_quadric(space, k)?.is_some())
}
