use std::path::{Path, PathBuf};

use clap::Args;

use affine_floer::affine_base::{cp2_model, dp6_model, validate, ClassPManifold, Dp6Params};
use affine_floer::floer_algebra::AlgebraModel;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Args)]
pub struct InstanceArgs {
    /// Read the base from a JSON instance file.
    #[arg(long, value_name = "PATH", conflicts_with = "builtin")]
    pub instance: Option<PathBuf>,
    /// Use a builtin base: cp2 or dp6.
    #[arg(long, value_name = "NAME")]
    pub builtin: Option<String>,
    /// Strip widths of the dp6 base, left to right.
    #[arg(long, value_name = "W0,W1,W2", value_delimiter = ',', default_values_t = [1u32, 1, 1])]
    pub dp6_widths: Vec<u32>,
    /// Length of the left side of the dp6 base.
    #[arg(long, value_name = "H", default_value_t = 1)]
    pub dp6_left_height: u32,
}

/// A resolved base together with how it was named.
pub struct Instance {
    pub name: String,
    pub manifold: ClassPManifold,
    pub is_cp2: bool,
}

impl Instance {
    pub fn model(&self) -> CliResult<AlgebraModel> {
        if self.is_cp2 {
            Ok(AlgebraModel::Cp2)
        } else {
            Ok(AlgebraModel::class_p(self.manifold.clone())?)
        }
    }
}

impl InstanceArgs {
    /// Flags win over the positional token; with neither, the projective
    /// plane is used.
    pub fn resolve(&self, positional: Option<&str>) -> CliResult<Instance> {
        if let Some(path) = &self.instance {
            return load(path);
        }
        match self.builtin.as_deref().or(positional) {
            None => self.builtin_named("cp2"),
            Some(name @ ("cp2" | "dp6")) => self.builtin_named(name),
            Some(other) if self.builtin.is_some() => Err(CliError::Usage(format!(
                "unknown builtin {other:?}; use cp2 or dp6"
            ))),
            Some(path) => load(Path::new(path)),
        }
    }

    fn builtin_named(&self, name: &str) -> CliResult<Instance> {
        match name {
            "cp2" => Ok(Instance {
                name: "cp2".into(),
                manifold: cp2_model(),
                is_cp2: true,
            }),
            _ => {
                let widths: [u32; 3] = self
                    .dp6_widths
                    .clone()
                    .try_into()
                    .map_err(|_| CliError::Usage("--dp6-widths takes three values".into()))?;
                let params = Dp6Params {
                    widths,
                    left_height: self.dp6_left_height,
                };
                Ok(Instance {
                    name: "dp6".into(),
                    manifold: dp6_model(params)?,
                    is_cp2: false,
                })
            }
        }
    }
}

pub fn load(path: &Path) -> CliResult<Instance> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let manifold = ClassPManifold::from_json(&text)?;
    let violations = validate(&manifold);
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(affine_floer::Error::InvalidInstance(list.join("; ")).into());
    }
    Ok(Instance {
        name: path.display().to_string(),
        manifold,
        is_cp2: false,
    })
}
