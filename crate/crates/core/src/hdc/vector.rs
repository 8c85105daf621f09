use crate::error::{Error, Result};

/// Integer-valued HD vector: atomic, bound or bundled.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HdVector {
    data: Vec<i64>,
}

impl HdVector {
    pub fn new(data: Vec<i64>) -> Self {
        HdVector { data }
    }

    pub fn zeros(d: usize) -> Self {
        HdVector { data: vec![0; d] }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.data
    }

    pub fn into_inner(self) -> Vec<i64> {
        self.data
    }

    pub fn is_bipolar(&self) -> bool {
        self.data.iter().all(|&x| x == 1 || x == -1)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn dot(&self, other: &HdVector) -> i64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.data
            .iter()
            .map(|&x| (x as f64) * (x as f64))
            .sum::<f64>()
            .sqrt()
    }

    /// In-place `self += weight * other`.
    pub fn add_scaled(&mut self, other: &HdVector, weight: i64) -> Result<()> {
        check_dims(self.dim(), other.dim())?;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += weight * b;
        }
        Ok(())
    }

    /// Converts to a real vector, optionally scaled to unit ℓ2 norm.
    /// The zero vector is returned unchanged.
    pub fn to_embedding(&self, normalize: bool) -> HdEmbedding {
        let mut e = HdEmbedding::new(self.data.iter().map(|&x| x as f64).collect());
        if normalize {
            e.normalize();
        }
        e
    }
}

/// Real-valued embedding row handed to classifiers.
#[derive(Debug, Clone, PartialEq)]
pub struct HdEmbedding {
    data: Vec<f64>,
}

impl HdEmbedding {
    pub fn new(data: Vec<f64>) -> Self {
        HdEmbedding { data }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.data
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            self.data.iter_mut().for_each(|x| *x /= n);
        }
    }
}

fn check_dims(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch { expected, actual });
    }
    Ok(())
}

/// Cyclic shift by `shift` positions: component `i` moves to `(i + shift) mod d`.
pub fn permute(v: &HdVector, shift: usize) -> HdVector {
    let d = v.dim();
    if d == 0 {
        return v.clone();
    }
    let mut data = v.data.clone();
    data.rotate_right(shift % d);
    HdVector { data }
}

/// Component-wise product.
pub fn bind(u: &HdVector, v: &HdVector) -> Result<HdVector> {
    check_dims(u.dim(), v.dim())?;
    Ok(HdVector {
        data: u.data.iter().zip(&v.data).map(|(a, b)| a * b).collect(),
    })
}

/// Weighted component-wise sum `Σ weights[k] * vs[k]`.
pub fn bundle(vs: &[HdVector], weights: &[u64]) -> Result<HdVector> {
    if vs.len() != weights.len() {
        return Err(Error::invalid(format!(
            "bundle got {} vectors but {} weights",
            vs.len(),
            weights.len()
        )));
    }
    let Some(first) = vs.first() else {
        return Err(Error::invalid("bundle of an empty list"));
    };
    let mut acc = HdVector::zeros(first.dim());
    for (v, &w) in vs.iter().zip(weights) {
        let w = i64::try_from(w).map_err(|_| Error::invalid("bundle weight overflows i64"))?;
        acc.add_scaled(v, w)?;
    }
    Ok(acc)
}

/// Cosine similarity; 0 when either side is the zero vector.
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64> {
    check_dims(u.len(), v.len())?;
    let (mut dot, mut nu, mut nv) = (0.0, 0.0, 0.0);
    for (a, b) in u.iter().zip(v) {
        dot += a * b;
        nu += a * a;
        nv += b * b;
    }
    if nu == 0.0 || nv == 0.0 {
        return Ok(0.0);
    }
    Ok((dot / (nu.sqrt() * nv.sqrt())).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hv(x: &[i64]) -> HdVector {
        HdVector::new(x.to_vec())
    }

    #[test]
    fn permute_examples() {
        let v = hv(&[1, -1, 1, 1]);
        assert_eq!(permute(&v, 0), v);
        assert_eq!(permute(&v, 1), hv(&[1, 1, -1, 1]));
        for j in 0..=4 {
            assert_eq!(permute(&permute(&v, j), 4 - j), v);
        }
        assert_eq!(permute(&v, 9), permute(&v, 1));
    }

    #[test]
    fn bind_examples() {
        assert_eq!(bind(&hv(&[1, -1, 1]), &hv(&[1, -1, 1])).unwrap(), hv(&[1, 1, 1]));
        assert_eq!(bind(&hv(&[1, -1, 1]), &hv(&[-1, -1, 1])).unwrap(), hv(&[-1, 1, 1]));
        assert!(matches!(
            bind(&hv(&[1]), &hv(&[1, 1])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn bundle_examples() {
        let v = hv(&[1, -1, 1]);
        assert_eq!(bundle(&[v.clone()], &[1]).unwrap(), v);
        assert_eq!(
            bundle(&[v.clone(), v.clone()], &[1, 1]).unwrap(),
            bundle(&[v.clone()], &[2]).unwrap()
        );
        assert_eq!(
            bundle(&[hv(&[1, -1]), hv(&[-1, -1])], &[2, 1]).unwrap(),
            hv(&[1, -3])
        );
        assert!(bundle(&[v.clone()], &[1, 2]).is_err());
        assert!(bundle(&[v, hv(&[1])], &[1, 1]).is_err());
    }

    #[test]
    fn cosine_examples() {
        let v = [1.0, -2.0, 0.5];
        let neg: Vec<f64> = v.iter().map(|x| -x).collect();
        assert!((cosine(&v, &v).unwrap() - 1.0).abs() < 1e-12);
        assert!((cosine(&v, &neg).unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(cosine(&[0.0; 3], &v).unwrap(), 0.0);
        assert_eq!(cosine(&[0.0; 3], &[0.0; 3]).unwrap(), 0.0);
    }

    #[test]
    fn zero_vector_survives_normalization() {
        let e = HdVector::zeros(8).to_embedding(true);
        assert!(e.as_slice().iter().all(|&x| x == 0.0));
    }
}
