//! Binary files for tabular tables and fitted surrogates.
//!
//! Layout: the 8-byte magic `HPOBINST`, a little-endian `u32` format
//! version, a `u32` header length, the UTF-8 JSON header, then the payload
//! as little-endian `f64`s. The header carries a SHA-256 of the payload.

use std::fs;
use std::io::Write;
use std::path::Path;

use hpobench_core::instance::{Instance, Mode, QualityReport};
use hpobench_core::models::{Mlp, MlpEnsemble, PredictMode, TargetScaler};
use hpobench_core::SearchSpace;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::spacedoc::serialize_space;

pub const MAGIC: &[u8; 8] = b"HPOBINST";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum PersistError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("not an instance file")]
    Magic,
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("file truncated")]
    Truncated,
    #[error("header: {0}")]
    Header(#[from] serde_json::Error),
    #[error("payload checksum mismatch")]
    Checksum,
    #[error("search space of `{0}` differs from the one the file was built for")]
    SpaceHash(String),
    #[error("{0} instances have no payload to store")]
    NothingToStore(Mode),
    #[error("inconsistent payload: {0}")]
    Payload(&'static str),
    #[error(transparent)]
    Instance(#[from] hpobench_core::InstanceError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Payload {
    Tabular {
        cap: u64,
        levels: Vec<f64>,
    },
    Surrogate {
        sizes: Vec<usize>,
        members: usize,
        alpha: Vec<f64>,
        scaler: TargetScaler,
        weighted: bool,
        report: QualityReport,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Header {
    pub artifact: String,
    pub instance_id: String,
    pub mode: Mode,
    pub space_hash: String,
    pub target_names: Vec<String>,
    pub payload: Payload,
    pub values: usize,
    pub payload_sha256: String,
}

pub fn space_hash(space: &SearchSpace) -> String {
    hex(&Sha256::digest(serialize_space(space).as_bytes()))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn encode_values(values: &[f64]) -> Vec<u8> {
    values.iter().flat_map(|v| v.to_le_bytes()).collect()
}

/// Serializes the table or surrogate attached to `instance`.
pub fn to_bytes(instance: &Instance) -> Result<Vec<u8>, PersistError> {
    let (payload, values) = if let Some(t) = instance.tabular() {
        (Payload::Tabular { cap: t.cap(), levels: t.levels().to_vec() }, t.values().to_vec())
    } else if let Some(s) = instance.surrogate() {
        let e = s.ensemble();
        let values = e.members().iter().flat_map(|m| m.params().iter().copied()).collect();
        let payload = Payload::Surrogate {
            sizes: e.members()[0].sizes().to_vec(),
            members: e.members().len(),
            alpha: e.alpha().to_vec(),
            scaler: e.scaler().clone(),
            weighted: s.predict_mode() == PredictMode::Weighted,
            report: s.report().clone(),
        };
        (payload, values)
    } else {
        return Err(PersistError::NothingToStore(instance.mode()));
    };
    let body = encode_values(&values);
    let header = Header {
        artifact: crate::ARTIFACT.to_string(),
        instance_id: instance.id().to_string(),
        mode: instance.mode(),
        space_hash: space_hash(instance.space()),
        target_names: instance.objective().target_ids(),
        payload,
        values: values.len(),
        payload_sha256: hex(&Sha256::digest(&body)),
    };
    let json = serde_json::to_vec(&header)?;
    let mut out = Vec::with_capacity(16 + json.len() + body.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&u32::try_from(json.len()).expect("header under 4 GiB").to_le_bytes());
    out.extend_from_slice(&json);
    out.extend_from_slice(&body);
    Ok(out)
}

fn take<'a>(bytes: &mut &'a [u8], n: usize) -> Result<&'a [u8], PersistError> {
    if bytes.len() < n {
        return Err(PersistError::Truncated);
    }
    let (head, rest) = bytes.split_at(n);
    *bytes = rest;
    Ok(head)
}

fn read_u32(bytes: &mut &[u8]) -> Result<u32, PersistError> {
    Ok(u32::from_le_bytes(take(bytes, 4)?.try_into().expect("four bytes")))
}

/// Parses the header and returns it with the payload values.
pub fn read_parts(mut bytes: &[u8]) -> Result<(Header, Vec<f64>), PersistError> {
    if take(&mut bytes, 8)? != MAGIC {
        return Err(PersistError::Magic);
    }
    let version = read_u32(&mut bytes)?;
    if version != FORMAT_VERSION {
        return Err(PersistError::Version(version));
    }
    let len = read_u32(&mut bytes)? as usize;
    let header: Header = serde_json::from_slice(take(&mut bytes, len)?)?;
    let body = take(&mut bytes, header.values.checked_mul(8).ok_or(PersistError::Truncated)?)?;
    if !bytes.is_empty() {
        return Err(PersistError::Payload("trailing bytes"));
    }
    if hex(&Sha256::digest(body)) != header.payload_sha256 {
        return Err(PersistError::Checksum);
    }
    let values = body.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("eight bytes"))).collect();
    Ok((header, values))
}

/// Rebuilds the stored instance on top of a fresh real instance.
pub fn from_bytes(bytes: &[u8]) -> Result<Instance, PersistError> {
    let (header, values) = read_parts(bytes)?;
    let real = Instance::from_id(&header.instance_id)?;
    if space_hash(real.space()) != header.space_hash {
        return Err(PersistError::SpaceHash(header.instance_id));
    }
    match header.payload {
        Payload::Tabular { cap, levels } => Ok(real.with_table(cap, Some(&levels), values)?),
        Payload::Surrogate { sizes, members, alpha, scaler, weighted, report } => {
            if members == 0 || values.len() % members != 0 {
                return Err(PersistError::Payload("parameter count is not a multiple of the member count"));
            }
            let per = values.len() / members;
            let nets = values
                .chunks_exact(per)
                .map(|p| Mlp::from_params(&sizes, p.to_vec()).ok_or(PersistError::Payload("layer sizes")))
                .collect::<Result<Vec<_>, _>>()?;
            let ensemble = MlpEnsemble::from_parts(nets, alpha, scaler).ok_or(PersistError::Payload("ensemble shape"))?;
            let mode = if weighted { PredictMode::Weighted } else { PredictMode::Mean };
            Ok(real.with_surrogate(ensemble, mode, report)?)
        }
    }
}

pub fn save(instance: &Instance, path: &Path) -> Result<(), PersistError> {
    let bytes = to_bytes(instance)?;
    let tmp = path.with_extension("partial");
    let mut f = fs::File::create(&tmp)?;
    f.write_all(&bytes)?;
    f.sync_all()?;
    fs::rename(tmp, path)?;
    Ok(())
}

pub fn load(path: &Path) -> Result<Instance, PersistError> {
    from_bytes(&fs::read(path)?)
}
