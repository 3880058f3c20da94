//! All-or-nothing output: files are staged as temporaries in the target
//! directory and only renamed into place once every one of them is written.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use tempfile::NamedTempFile;

pub struct Staged {
    dir: PathBuf,
    files: Vec<(NamedTempFile, PathBuf)>,
}

impl Staged {
    pub fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating output directory {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn add(&mut self, name: &str, contents: &[u8]) -> Result<()> {
        let mut tmp = NamedTempFile::new_in(&self.dir)
            .with_context(|| format!("cannot write to output directory {}", self.dir.display()))?;
        tmp.write_all(contents)?;
        tmp.as_file().sync_all()?;
        self.files.push((tmp, self.dir.join(name)));
        Ok(())
    }

    /// Renames every staged file into place; returns the final paths.
    pub fn commit(self) -> Result<Vec<PathBuf>> {
        let mut done = Vec::with_capacity(self.files.len());
        for (tmp, dest) in self.files {
            tmp.persist(&dest)
                .with_context(|| format!("writing {}", dest.display()))?;
            done.push(dest);
        }
        Ok(done)
    }
}
