use serde::{Deserialize, Serialize};

use super::{Classifier, FeatureSchema, Model, Node};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u64 = 1;

/// On-disk model: the fitted classifier plus everything needed to turn a
/// frame into its feature matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub schema_version: u64,
    #[serde(flatten)]
    pub model: Model,
    #[serde(flatten)]
    pub schema: FeatureSchema,
}

impl ModelFile {
    pub fn new(model: Model, schema: FeatureSchema) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            model,
            schema,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::MalformedModelFile(m.to_string()));
        if self.model.n_features() != self.schema.feature_names.len() {
            return bad("feature count does not match feature names");
        }
        let trees: Vec<&super::TreeModel> = match &self.model {
            Model::Logistic(m) => {
                let p = m.weights.len();
                if m.feature_means.len() != p || m.feature_stds.len() != p {
                    return bad("standardization length mismatch");
                }
                if m.feature_stds.iter().any(|&s| s.is_nan() || s <= 0.0) {
                    return bad("non-positive feature std");
                }
                Vec::new()
            }
            Model::Tree(t) => vec![t],
            Model::Forest(f) => {
                if f.trees.is_empty() || f.trees.len() != f.tree_seeds.len() {
                    return bad("forest tree count mismatch");
                }
                if f.trees
                    .iter()
                    .any(|t| t.n_features != f.trees[0].n_features)
                {
                    return bad("forest trees disagree on feature count");
                }
                f.trees.iter().collect()
            }
        };
        for t in trees {
            check_tree(t)?;
        }
        Ok(())
    }
}

/// Children must point strictly forward so traversal always terminates.
fn check_tree(t: &super::TreeModel) -> Result<()> {
    let bad = |m: &str| Err(Error::MalformedModelFile(m.to_string()));
    if t.nodes.is_empty() {
        return bad("tree without nodes");
    }
    for (i, node) in t.nodes.iter().enumerate() {
        match *node {
            Node::Leaf { counts } if counts[0] + counts[1] == 0 => return bad("empty leaf"),
            Node::Leaf { .. } => {}
            Node::Split {
                feature,
                left,
                right,
                ..
            } => {
                if feature >= t.n_features {
                    return bad("split feature out of range");
                }
                if left <= i || right <= i || left >= t.nodes.len() || right >= t.nodes.len() {
                    return bad("child index out of range");
                }
            }
        }
    }
    Ok(())
}

pub fn save_model(file: &ModelFile) -> String {
    let mut text = serde_json::to_string_pretty(file).expect("model file serializes");
    text.push('\n');
    text
}

pub fn load_model(text: &str) -> Result<ModelFile> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::MalformedModelFile(e.to_string()))?;
    let version = value
        .get("schema_version")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| Error::MalformedModelFile("missing schema_version".into()))?;
    if version != SCHEMA_VERSION {
        return Err(Error::SchemaVersionMismatch {
            found: version,
            expected: SCHEMA_VERSION,
        });
    }
    let file: ModelFile =
        serde_json::from_value(value).map_err(|e| Error::MalformedModelFile(e.to_string()))?;
    file.validate()?;
    Ok(file)
}
