//! `he-model v1` binary format.
//!
//! ```text
//! magic      "he-model v1\n"
//! kind       u8   (0 centroid, 1 knn, 2 ridge, 3 passive-aggressive, 4 sgd, 5 bernoulli-nb, 6 mlp)
//! n_features u64
//! n_classes  u64
//! n_extra    u64, then n_extra u64 values (knn: k, n_samples; mlp: layer sizes)
//! n_tensors  u64, then per tensor: len u64 followed by len f64
//! ```
//! All integers and floats are little-endian.

use super::{BernoulliNb, Knn, LinearKind, LinearModel, Mlp, Model, NearestCentroid};
use crate::error::{Error, Result};
use crate::text::FeatureMatrix;

const MAGIC: &[u8] = b"he-model v1\n";

fn kind_tag(model: &Model) -> u8 {
    match model {
        Model::NearestCentroid(_) => 0,
        Model::Knn(_) => 1,
        Model::Linear(m) => match m.kind() {
            LinearKind::Ridge => 2,
            LinearKind::PassiveAggressive => 3,
            LinearKind::Sgd => 4,
        },
        Model::BernoulliNb(_) => 5,
        Model::Mlp(_) => 6,
    }
}

pub(super) fn encode(model: &Model) -> Vec<u8> {
    let mut extra: Vec<u64> = Vec::new();
    let mut tensors: Vec<Vec<f64>> = Vec::new();
    match model {
        Model::NearestCentroid(m) => tensors.push(m.centroids().to_vec()),
        Model::Knn(m) => {
            let s = m.samples();
            extra.extend([m.k() as u64, s.n_samples() as u64]);
            tensors.push(s.rows().flat_map(|r| r.to_dense(s.n_features())).collect());
            tensors.push(s.labels().iter().map(|&l| l as f64).collect());
        }
        Model::Linear(m) => {
            tensors.push(m.all_weights().to_vec());
            tensors.push(m.bias().to_vec());
        }
        Model::BernoulliNb(m) => {
            let (odds, offset) = m.tables();
            tensors.push(odds.to_vec());
            tensors.push(offset.to_vec());
        }
        Model::Mlp(m) => {
            extra.extend(m.sizes().iter().map(|&s| s as u64));
            for r in m.tensor_ranges() {
                tensors.push(m.params()[r].to_vec());
            }
        }
    }
    let mut out = MAGIC.to_vec();
    out.push(kind_tag(model));
    out.extend((model.n_features() as u64).to_le_bytes());
    out.extend((model.n_classes() as u64).to_le_bytes());
    out.extend((extra.len() as u64).to_le_bytes());
    extra.iter().for_each(|e| out.extend(e.to_le_bytes()));
    out.extend((tensors.len() as u64).to_le_bytes());
    for t in &tensors {
        out.extend((t.len() as u64).to_le_bytes());
        t.iter().for_each(|v| out.extend(v.to_le_bytes()));
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::Format {
        what: "he-model file",
        message: msg.into(),
    }
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or_else(|| malformed("truncated"))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn usize(&mut self) -> Result<usize> {
        usize::try_from(self.u64()?).map_err(|_| malformed("length overflow"))
    }

    fn tensor(&mut self) -> Result<Vec<f64>> {
        let len = self.usize()?;
        let raw = self.take(len.checked_mul(8).ok_or_else(|| malformed("length overflow"))?)?;
        Ok(raw
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect())
    }
}

pub(super) fn decode(bytes: &[u8]) -> Result<Model> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(MAGIC.len())? != MAGIC {
        return Err(malformed("bad magic"));
    }
    let tag = r.take(1)?[0];
    let d = r.usize()?;
    let k = r.usize()?;
    let n_extra = r.usize()?;
    let extra = (0..n_extra).map(|_| r.usize()).collect::<Result<Vec<_>>>()?;
    let n_tensors = r.usize()?;
    let tensors = (0..n_tensors).map(|_| r.tensor()).collect::<Result<Vec<_>>>()?;
    if r.pos != bytes.len() {
        return Err(malformed("trailing bytes"));
    }
    let expect = |count: usize| {
        if tensors.len() == count {
            Ok(())
        } else {
            Err(malformed(format!("expected {count} tensors, found {}", tensors.len())))
        }
    };
    let check_len = |t: &Vec<f64>, len: usize| {
        if t.len() == len {
            Ok(())
        } else {
            Err(malformed(format!("tensor of length {} where {len} expected", t.len())))
        }
    };
    let model = match tag {
        0 => {
            expect(1)?;
            check_len(&tensors[0], k * d)?;
            Model::NearestCentroid(NearestCentroid::from_parts(d, tensors[0].clone()))
        }
        1 => {
            expect(2)?;
            let [kk, n] = extra[..] else {
                return Err(malformed("knn header needs k and sample count"));
            };
            check_len(&tensors[0], n * d)?;
            check_len(&tensors[1], n)?;
            let labels = tensors[1].iter().map(|&l| l as usize).collect();
            let samples = FeatureMatrix::dense(d, tensors[0].clone(), labels, k)?;
            Model::Knn(Knn::from_samples(samples, kk))
        }
        2..=4 => {
            expect(2)?;
            check_len(&tensors[0], k * d)?;
            check_len(&tensors[1], k)?;
            let kind = match tag {
                2 => LinearKind::Ridge,
                3 => LinearKind::PassiveAggressive,
                _ => LinearKind::Sgd,
            };
            Model::Linear(LinearModel::from_parts(kind, d, tensors[0].clone(), tensors[1].clone()))
        }
        5 => {
            expect(2)?;
            check_len(&tensors[0], k * d)?;
            check_len(&tensors[1], k)?;
            Model::BernoulliNb(BernoulliNb::from_parts(d, tensors[0].clone(), tensors[1].clone()))
        }
        6 => {
            if extra.first() != Some(&d) || extra.last() != Some(&k) {
                return Err(malformed("MLP layer sizes disagree with header"));
            }
            Model::Mlp(Mlp::from_parts(extra.clone(), tensors.concat())?)
        }
        other => return Err(malformed(format!("unknown model kind {other}"))),
    };
    Ok(model)
}
