// SPDX-License-Identifier: Apache-2.0

//! Checkpoint container:
//!
//! ```text
//! "EPCK" | version: u32 LE | header length: u64 LE | header (JSON) | f64 LE * n
//! ```
//!
//! The header carries the model configuration, the vocabulary and the
//! parameter layout (name, shape and offset of every tensor).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::params::{Layout, Params};
use crate::predict::{layout_for, Model, ModelConfig};
use crate::vocab::Vocab;
use crate::ModelError;

const MAGIC: &[u8; 4] = b"EPCK";
const VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Header {
    config: ModelConfig,
    vocab: Vocab,
    layout: Layout,
}

pub fn write_checkpoint(model: &Model) -> Vec<u8> {
    let header = serde_json::to_vec(&Header {
        config: model.config,
        vocab: model.vocab.clone(),
        layout: model.params.layout.clone(),
    })
    .expect("header serializes");
    let mut out = Vec::with_capacity(16 + header.len() + 8 * model.params.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(header.len() as u64).to_le_bytes());
    out.extend_from_slice(&header);
    for x in &model.params.data {
        out.extend_from_slice(&x.to_le_bytes());
    }
    out
}

pub fn read_checkpoint(bytes: &[u8]) -> Result<Model, ModelError> {
    let bad = |m: &str| ModelError::Checkpoint(m.to_string());
    if bytes.len() < 16 || &bytes[..4] != MAGIC {
        return Err(bad("missing magic number"));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(ModelError::Checkpoint(format!(
            "unsupported version {version}"
        )));
    }
    let hlen = u64::from_le_bytes(bytes[8..16].try_into().unwrap()) as usize;
    let body = bytes.get(16..).ok_or_else(|| bad("truncated"))?;
    if body.len() < hlen {
        return Err(bad("truncated header"));
    }
    let header: Header =
        serde_json::from_slice(&body[..hlen]).map_err(|e| ModelError::Checkpoint(e.to_string()))?;
    if header.layout != layout_for(header.config.dims, &header.vocab) {
        return Err(bad("layout does not match configuration and vocabulary"));
    }
    let raw = &body[hlen..];
    if raw.len() != 8 * header.layout.total {
        return Err(ModelError::Checkpoint(format!(
            "expected {} parameters, found {} bytes",
            header.layout.total,
            raw.len()
        )));
    }
    let data = raw
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(Model {
        config: header.config,
        vocab: header.vocab,
        params: Params {
            layout: header.layout,
            data,
        },
    })
}

pub fn save_checkpoint(model: &Model, path: &Path) -> Result<(), ModelError> {
    fs::write(path, write_checkpoint(model))?;
    Ok(())
}

pub fn load_checkpoint(path: &Path) -> Result<Model, ModelError> {
    read_checkpoint(&fs::read(path)?)
}
