//! JSON file formats.
//!
//! Complex numbers are `[re, im]` pairs written as the shortest decimal that
//! reads back to the same double, so every format round-trips bit-exactly.

use std::fs;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use qttdft::{ComplexTensor, Mpo, MpoKind, Mps, SignificanceOrder, C64};
use serde::{Deserialize, Serialize};

pub const MPO_FORMAT: &str = "qttdft-mpo-v1";
pub const VEC_FORMAT: &str = "qtt-vec-v1";
pub const MPS_FORMAT: &str = "qtt-mps-v1";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoreJson {
    pub shape: Vec<usize>,
    pub data: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MpoFile {
    pub format: String,
    pub n: usize,
    pub d: usize,
    pub kind: String,
    pub param: usize,
    pub cores: Vec<CoreJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VecFile {
    pub format: String,
    pub n: usize,
    pub d: usize,
    pub order: String,
    pub data: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MpsFile {
    pub format: String,
    pub n: usize,
    pub d: usize,
    pub order: String,
    pub cores: Vec<CoreJson>,
}

/// A vector file of either kind.
#[derive(Clone, Debug)]
pub enum VectorInput {
    Dense {
        d: usize,
        order: SignificanceOrder,
        data: Vec<C64>,
    },
    Mps(Mps),
}

fn pairs(data: &[C64]) -> Vec<[f64; 2]> {
    data.iter().map(|z| [z.re, z.im]).collect()
}

fn complexes(data: &[[f64; 2]]) -> Vec<C64> {
    data.iter().map(|&[re, im]| C64::new(re, im)).collect()
}

fn core_json(t: &ComplexTensor) -> CoreJson {
    CoreJson {
        shape: t.shape().to_vec(),
        data: pairs(t.data()),
    }
}

fn core_tensor(c: &CoreJson) -> Result<ComplexTensor> {
    Ok(ComplexTensor::new(c.shape.clone(), complexes(&c.data))?)
}

fn parse_order(s: &str) -> Result<SignificanceOrder> {
    Ok(SignificanceOrder::parse(s)?)
}

pub fn mpo_to_file(mpo: &Mpo) -> MpoFile {
    MpoFile {
        format: MPO_FORMAT.into(),
        n: mpo.n(),
        d: mpo.d(),
        kind: mpo.kind().name().into(),
        param: mpo.kind().param(),
        cores: mpo.cores().iter().map(core_json).collect(),
    }
}

pub fn mpo_from_file(f: &MpoFile) -> Result<Mpo> {
    ensure!(
        f.format == MPO_FORMAT,
        "expected format {MPO_FORMAT}, found {:?}",
        f.format
    );
    let kind = match f.kind.as_str() {
        "chebyshev" => MpoKind::Chebyshev { k: f.param },
        "aqft" => MpoKind::Aqft { b: f.param },
        other => bail!("unknown MPO kind {other:?}"),
    };
    let cores = f
        .cores
        .iter()
        .map(core_tensor)
        .collect::<Result<Vec<_>>>()?;
    Ok(Mpo::new(f.n, f.d, kind, cores)?)
}

pub fn mps_to_file(m: &Mps) -> MpsFile {
    MpsFile {
        format: MPS_FORMAT.into(),
        n: m.n(),
        d: m.d(),
        order: m.order().as_str().into(),
        cores: m.cores().iter().map(core_json).collect(),
    }
}

pub fn mps_from_file(f: &MpsFile) -> Result<Mps> {
    ensure!(
        f.format == MPS_FORMAT,
        "expected format {MPS_FORMAT}, found {:?}",
        f.format
    );
    let cores = f
        .cores
        .iter()
        .map(core_tensor)
        .collect::<Result<Vec<_>>>()?;
    let m = Mps::new(f.d, parse_order(&f.order)?, cores)?;
    ensure!(
        m.n() == f.n,
        "header says n = {} but there are {} cores",
        f.n,
        m.n()
    );
    Ok(m)
}

pub fn dense_to_file(data: &[C64], n: usize, d: usize, order: SignificanceOrder) -> VecFile {
    VecFile {
        format: VEC_FORMAT.into(),
        n,
        d,
        order: order.as_str().into(),
        data: pairs(data),
    }
}

pub fn read_mpo(path: &Path) -> Result<Mpo> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let f: MpoFile =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    mpo_from_file(&f)
}

pub fn read_vector(path: &Path) -> Result<VectorInput> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    match value.get("format").and_then(|v| v.as_str()) {
        Some(VEC_FORMAT) => {
            let f: VecFile = serde_json::from_value(value)?;
            let expected = f.d.checked_pow(f.n as u32);
            ensure!(
                expected == Some(f.data.len()),
                "header says {}^{} entries but data has {}",
                f.d,
                f.n,
                f.data.len()
            );
            Ok(VectorInput::Dense {
                d: f.d,
                order: parse_order(&f.order)?,
                data: complexes(&f.data),
            })
        }
        Some(MPS_FORMAT) => Ok(VectorInput::Mps(mps_from_file(&serde_json::from_value(
            value,
        )?)?)),
        Some(other) => bail!("unsupported vector format {other:?}"),
        None => bail!("{} has no \"format\" field", path.display()),
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string(value)?;
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
