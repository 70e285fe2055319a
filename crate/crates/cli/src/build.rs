use std::io::Write;

use anyhow::Result;
use qttdft::{aqft_error_bound, assemble_aqft_mpo, assemble_qft_mpo, theorem_error_bound, Mpo};

use crate::format::{mpo_to_file, write_json};
use crate::{BuildArgs, Outcome};

pub fn build_mpo(args: &BuildArgs) -> Result<Mpo> {
    match (args.rank, args.aqft_b) {
        (Some(k), None) => Ok(assemble_qft_mpo(args.n, k, args.qudit)?),
        (None, Some(b)) => {
            anyhow::ensure!(
                args.qudit == 2,
                "the approximate QFT is defined for qubits only"
            );
            Ok(assemble_aqft_mpo(args.n, b)?)
        }
        _ => anyhow::bail!("exactly one of --rank and --aqft-b is required"),
    }
}

/// Entrywise error bound for a built MPO, if one is known.
pub fn bound_of(mpo: &Mpo) -> Option<f64> {
    match mpo.kind() {
        qttdft::MpoKind::Chebyshev { k } => {
            theorem_error_bound(mpo.n(), k).ok().map(|b| b.geometric)
        }
        qttdft::MpoKind::Aqft { b } => Some(aqft_error_bound(mpo.n(), b)),
    }
}

pub fn run(args: &BuildArgs, out: &mut dyn Write) -> Result<Outcome> {
    let mpo = build_mpo(args)?;
    let kind = mpo.kind();
    let label = match kind {
        qttdft::MpoKind::Chebyshev { k } => format!("chebyshev K={k}"),
        qttdft::MpoKind::Aqft { b } => format!("aqft b={b}"),
    };
    writeln!(out, "sites {}, qudit {}, {label}", mpo.n(), mpo.d())?;
    writeln!(out, "bond dimension {}", mpo.max_bond())?;
    if mpo.n() > 2 {
        writeln!(out, "internal core shape {:?}", mpo.cores()[1].shape())?;
    }
    match bound_of(&mpo) {
        Some(b) => writeln!(out, "entrywise error bound {b:e}")?,
        None => writeln!(out, "entrywise error bound unavailable for K < 2")?,
    }
    if let Some(path) = &args.out {
        write_json(path, &mpo_to_file(&mpo))?;
        writeln!(out, "wrote {}", path.display())?;
    }
    Ok(Outcome::Pass)
}
