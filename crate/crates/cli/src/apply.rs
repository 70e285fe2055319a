use std::io::Write;

use anyhow::{ensure, Result};
use qttdft::{apply_mpo, dense_to_mps, mps_to_dense, Error, SignificanceOrder, C64};

use crate::format::{dense_to_file, mps_to_file, read_mpo, read_vector, write_json, VectorInput};
use crate::{ApplyArgs, Outcome};

/// Results up to this many entries are written densely.
pub const DENSE_OUTPUT_LIMIT: usize = 1 << 20;

pub fn run(args: &ApplyArgs, out: &mut dyn Write) -> Result<Outcome> {
    let op = read_mpo(&args.mpo)?;
    let input = match read_vector(&args.input)? {
        VectorInput::Dense { d, order, data } => {
            if order != SignificanceOrder::LsbFirst {
                return Err(Error::Convention {
                    expected: SignificanceOrder::LsbFirst,
                    found: order,
                }
                .into());
            }
            ensure!(
                d == op.d(),
                "operator has qudit dimension {}, input has {d}",
                op.d()
            );
            dense_to_mps(&data, d, order, 0.0)?
        }
        VectorInput::Mps(m) => m,
    };
    ensure!(
        input.n() == op.n(),
        "operator has {} sites, input has {}",
        op.n(),
        input.n()
    );
    let mut result = apply_mpo(&op, &input, args.tol)?;
    if args.normalize {
        let factor = (result.d() as f64).powf(-(result.n() as f64) / 2.0);
        result = result.scaled(C64::new(factor, 0.0));
    }
    let size = result.d().checked_pow(result.n() as u32);
    match size {
        Some(s) if s <= DENSE_OUTPUT_LIMIT => {
            let data = mps_to_dense(&result)?;
            write_json(
                &args.out,
                &dense_to_file(&data, result.n(), result.d(), result.order()),
            )?;
            writeln!(out, "wrote dense {} entries to {}", s, args.out.display())?;
        }
        _ => {
            write_json(&args.out, &mps_to_file(&result))?;
            writeln!(
                out,
                "wrote MPS with bond dimensions {:?} to {}",
                result.bond_dims(),
                args.out.display()
            )?;
        }
    }
    writeln!(out, "order {}", result.order().as_str())?;
    Ok(Outcome::Pass)
}
