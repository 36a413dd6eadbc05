use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::numfmt::sig9;

/// Everything a run needs, with paths resolved before any solve starts.
#[derive(Clone, Debug, PartialEq)]
pub struct RunManifest {
    pub subcommand: String,
    pub inputs: Vec<PathBuf>,
    pub lambdas: Vec<f64>,
    pub connectivity: Option<String>,
    pub method: Option<String>,
    pub out_dir: PathBuf,
    pub tolerances: Vec<(String, f64)>,
    pub seed: Option<u64>,
}

impl RunManifest {
    /// Resolves inputs (which must exist) and creates the output directory.
    pub fn resolve(
        subcommand: &str,
        inputs: &[PathBuf],
        lambdas: Vec<f64>,
        out_dir: &Path,
    ) -> Result<RunManifest> {
        let inputs = inputs
            .iter()
            .map(|p| {
                fs::canonicalize(p).map_err(|e| {
                    Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", p.display())))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        fs::create_dir_all(out_dir)?;
        let out_dir = fs::canonicalize(out_dir)?;
        let seed = match std::env::var("FLATNORM_SEED") {
            Ok(s) => Some(s.trim().parse::<u64>().map_err(|_| {
                Error::InvalidParameter(format!("FLATNORM_SEED must be an unsigned integer, got `{s}`"))
            })?),
            Err(_) => None,
        };
        Ok(RunManifest {
            subcommand: subcommand.to_string(),
            inputs,
            lambdas,
            connectivity: None,
            method: None,
            out_dir,
            tolerances: Vec::new(),
            seed,
        })
    }

    /// Path of an output file; refuses to name any of the inputs.
    pub fn output(&self, name: &str) -> Result<PathBuf> {
        let path = self.out_dir.join(name);
        if self.inputs.iter().any(|p| p == &path) {
            return Err(Error::InvalidParameter(format!(
                "output {} would overwrite an input",
                path.display()
            )));
        }
        Ok(path)
    }

    /// Checks every planned output up front.
    pub fn check_outputs(&self, names: &[&str]) -> Result<()> {
        names.iter().try_for_each(|n| self.output(n).map(|_| ()))
    }

    pub fn write(&self, name: &str, contents: &str) -> Result<()> {
        fs::write(self.output(name)?, contents)?;
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("subcommand={}\n", self.subcommand);
        for p in &self.inputs {
            out.push_str(&format!("input={}\n", p.display()));
        }
        let lambdas: Vec<String> = self.lambdas.iter().map(|&l| sig9(l)).collect();
        out.push_str(&format!("lambdas={}\n", lambdas.join(",")));
        if let Some(c) = &self.connectivity {
            out.push_str(&format!("connectivity={c}\n"));
        }
        if let Some(m) = &self.method {
            out.push_str(&format!("method={m}\n"));
        }
        for (k, v) in &self.tolerances {
            out.push_str(&format!("{k}={}\n", sig9(*v)));
        }
        if let Some(s) = self.seed {
            out.push_str(&format!("seed={s}\n"));
        }
        out.push_str(&format!("out_dir={}\n", self.out_dir.display()));
        out
    }
}
