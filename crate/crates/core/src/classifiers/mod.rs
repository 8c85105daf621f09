//! Classifier suite trained from scratch on [`FeatureMatrix`] inputs.
//!
//! Every model reports the exact number of scalars it stores, which feeds
//! the memory model, and predicts by argmax over per-class scores with ties
//! going to the lowest class id.

mod centroid;
mod knn;
mod linear;
mod mlp;
mod naive_bayes;
mod serialize;

use std::fmt;
use std::str::FromStr;

pub use centroid::NearestCentroid;
pub use knn::Knn;
pub use linear::{ridge_solve, LinearKind, LinearModel};
pub use mlp::Mlp;
pub use naive_bayes::BernoulliNb;

use crate::error::{Error, Result};
use crate::text::{FeatureMatrix, Row};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassifierKind {
    NearestCentroid,
    Knn,
    Ridge,
    PassiveAggressive,
    Sgd,
    BernoulliNb,
    Mlp,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 7] = [
        ClassifierKind::Mlp,
        ClassifierKind::PassiveAggressive,
        ClassifierKind::Sgd,
        ClassifierKind::Ridge,
        ClassifierKind::Knn,
        ClassifierKind::NearestCentroid,
        ClassifierKind::BernoulliNb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassifierKind::NearestCentroid => "nearest-centroid",
            ClassifierKind::Knn => "knn",
            ClassifierKind::Ridge => "ridge",
            ClassifierKind::PassiveAggressive => "passive-aggressive",
            ClassifierKind::Sgd => "sgd",
            ClassifierKind::BernoulliNb => "bernoulli-nb",
            ClassifierKind::Mlp => "mlp",
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "nearest-centroid" | "nc" | "centroid" => ClassifierKind::NearestCentroid,
            "knn" => ClassifierKind::Knn,
            "ridge" => ClassifierKind::Ridge,
            "passive-aggressive" | "pa" => ClassifierKind::PassiveAggressive,
            "sgd" => ClassifierKind::Sgd,
            "bernoulli-nb" | "nb" => ClassifierKind::BernoulliNb,
            "mlp" => ClassifierKind::Mlp,
            other => return Err(Error::invalid(format!("unknown classifier {other:?}"))),
        })
    }
}

/// Hyperparameters for every classifier kind.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub seed: u64,
    pub knn_k: usize,
    pub ridge_alpha: f64,
    pub pa_c: f64,
    pub sgd_lambda: f64,
    pub nb_alpha: f64,
    /// Epoch cap for the online linear models.
    pub linear_max_iter: usize,
    pub linear_tol: f64,
    pub linear_patience: usize,
    pub mlp_hidden: Vec<usize>,
    pub mlp_learning_rate: f64,
    pub mlp_batch_size: usize,
    pub mlp_max_epochs: usize,
    pub mlp_tol: f64,
    pub mlp_patience: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            seed: 0,
            knn_k: 3,
            ridge_alpha: 1.0,
            pa_c: 1.0,
            sgd_lambda: 1e-4,
            nb_alpha: 1.0,
            linear_max_iter: 1000,
            linear_tol: 1e-3,
            linear_patience: 5,
            mlp_hidden: vec![300, 100, 50],
            mlp_learning_rate: 1e-3,
            mlp_batch_size: 32,
            mlp_max_epochs: 500,
            mlp_tol: 1e-4,
            mlp_patience: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    NearestCentroid(NearestCentroid),
    Knn(Knn),
    Linear(LinearModel),
    BernoulliNb(BernoulliNb),
    Mlp(Mlp),
}

fn validate(x: &FeatureMatrix) -> Result<()> {
    if x.n_samples() == 0 {
        return Err(Error::invalid("empty training set"));
    }
    let mut seen = vec![false; x.n_classes()];
    x.labels().iter().for_each(|&l| seen[l] = true);
    if seen.iter().filter(|&&s| s).count() < 2 {
        return Err(Error::invalid("training set needs at least two classes"));
    }
    if !x.all_finite() {
        return Err(Error::invalid("non-finite feature value"));
    }
    Ok(())
}

/// Index of the largest score; the lowest index wins ties and NaN never wins.
pub(crate) fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    let mut best_score = f64::NEG_INFINITY;
    for (i, &s) in scores.iter().enumerate() {
        if s > best_score {
            best = i;
            best_score = s;
        }
    }
    best
}

pub fn train(kind: ClassifierKind, x: &FeatureMatrix, config: &TrainConfig) -> Result<Model> {
    validate(x)?;
    Ok(match kind {
        ClassifierKind::NearestCentroid => Model::NearestCentroid(NearestCentroid::fit(x)),
        ClassifierKind::Knn => Model::Knn(Knn::fit(x, config.knn_k)?),
        ClassifierKind::Ridge => Model::Linear(LinearModel::fit_ridge(x, config.ridge_alpha)?),
        ClassifierKind::PassiveAggressive => Model::Linear(LinearModel::fit_passive_aggressive(x, config)),
        ClassifierKind::Sgd => Model::Linear(LinearModel::fit_sgd(x, config)),
        ClassifierKind::BernoulliNb => Model::BernoulliNb(BernoulliNb::fit(x, config.nb_alpha)),
        ClassifierKind::Mlp => Model::Mlp(Mlp::fit(x, config)?),
    })
}

impl Model {
    pub fn kind(&self) -> ClassifierKind {
        match self {
            Model::NearestCentroid(_) => ClassifierKind::NearestCentroid,
            Model::Knn(_) => ClassifierKind::Knn,
            Model::Linear(m) => match m.kind() {
                LinearKind::Ridge => ClassifierKind::Ridge,
                LinearKind::PassiveAggressive => ClassifierKind::PassiveAggressive,
                LinearKind::Sgd => ClassifierKind::Sgd,
            },
            Model::BernoulliNb(_) => ClassifierKind::BernoulliNb,
            Model::Mlp(_) => ClassifierKind::Mlp,
        }
    }

    pub fn n_features(&self) -> usize {
        match self {
            Model::NearestCentroid(m) => m.n_features(),
            Model::Knn(m) => m.n_features(),
            Model::Linear(m) => m.n_features(),
            Model::BernoulliNb(m) => m.n_features(),
            Model::Mlp(m) => m.n_features(),
        }
    }

    pub fn n_classes(&self) -> usize {
        match self {
            Model::NearestCentroid(m) => m.n_classes(),
            Model::Knn(m) => m.n_classes(),
            Model::Linear(m) => m.n_classes(),
            Model::BernoulliNb(m) => m.n_classes(),
            Model::Mlp(m) => m.n_classes(),
        }
    }

    /// Exact number of stored scalars.
    pub fn parameter_count(&self) -> usize {
        match self {
            Model::NearestCentroid(m) => m.parameter_count(),
            Model::Knn(m) => m.parameter_count(),
            Model::Linear(m) => m.parameter_count(),
            Model::BernoulliNb(m) => m.parameter_count(),
            Model::Mlp(m) => m.parameter_count(),
        }
    }

    pub fn predict_row(&self, row: Row<'_>) -> usize {
        match self {
            Model::NearestCentroid(m) => m.predict_row(row),
            Model::Knn(m) => m.predict_row(row),
            Model::Linear(m) => argmax(&m.scores(row)),
            Model::BernoulliNb(m) => argmax(&m.joint_log_likelihood(row)),
            Model::Mlp(m) => m.predict_row(row),
        }
    }

    pub fn predict(&self, x: &FeatureMatrix) -> Result<Vec<usize>> {
        if x.n_features() != self.n_features() {
            return Err(Error::DimensionMismatch {
                expected: self.n_features(),
                actual: x.n_features(),
            });
        }
        Ok(x.rows().map(|r| self.predict_row(r)).collect())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        serialize::encode(self)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        serialize::decode(bytes)
    }
}
